#![allow(clippy::excessive_precision)]

use num_complex::Complex64;

use crate::freqcore::NumericSum;

// 15-point Kronrod extension of the 7-point Gauss rule on [-1, 1].
const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_845_693_013,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];
// Gauss weights for the nodes XGK[1], XGK[3], XGK[5], XGK[7]
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

const MAX_PANEL_DEPTH: u32 = 40;

#[derive(Debug, Clone, Copy)]
pub(crate) struct EdgeIntegral {
    pub value: Complex64,
    pub error: f64,
    /// Smallest `|f|/scale` seen at any node.
    pub min_relative: f64,
    /// A node produced zero or a non-finite integrand.
    pub singular: bool,
}

/// `∫ f′/f dz` along the segment `a → b`, adaptive Gauss–Kronrod.
pub(crate) fn log_derivative_integral(
    f: &NumericSum,
    a: Complex64,
    b: Complex64,
    initial_panels: usize,
    abs_tol: f64,
) -> EdgeIntegral {
    let mut out = EdgeIntegral {
        value: Complex64::new(0.0, 0.0),
        error: 0.0,
        min_relative: f64::INFINITY,
        singular: false,
    };
    let n = initial_panels.max(1);
    let mut stack: Vec<(f64, f64, u32)> = (0..n)
        .rev()
        .map(|i| (i as f64 / n as f64, (i + 1) as f64 / n as f64, 0))
        .collect();
    while let Some((t0, t1, depth)) = stack.pop() {
        let (kronrod, gauss) = panel(f, a, b, t0, t1, &mut out);
        if out.singular {
            return out;
        }
        let err = (kronrod - gauss).norm();
        let tol = (abs_tol * (t1 - t0)).max(1e-15);
        if err <= tol || depth >= MAX_PANEL_DEPTH {
            out.value += kronrod;
            out.error += err;
        } else {
            let mid = 0.5 * (t0 + t1);
            stack.push((mid, t1, depth + 1));
            stack.push((t0, mid, depth + 1));
        }
    }
    out
}

fn panel(
    f: &NumericSum,
    a: Complex64,
    b: Complex64,
    t0: f64,
    t1: f64,
    acc: &mut EdgeIntegral,
) -> (Complex64, Complex64) {
    let dz = b - a;
    let center = a + dz * (0.5 * (t0 + t1));
    let half = dz * (0.5 * (t1 - t0));
    let mut integrand = |x: f64| -> Complex64 {
        let z = center + half * x;
        let (fz, dfz) = f.eval_with_derivative(z);
        let norm = fz.norm();
        let q = dfz / fz;
        if norm == 0.0 || !q.re.is_finite() || !q.im.is_finite() {
            acc.singular = true;
            return Complex64::new(0.0, 0.0);
        }
        acc.min_relative = acc.min_relative.min(norm / f.scale(z.re));
        q
    };
    let mut kronrod = integrand(0.0) * WGK[7];
    let mut gauss = integrand(0.0) * WG[3];
    for j in 0..7 {
        let x = XGK[j];
        let pair = integrand(x) + integrand(-x);
        kronrod += pair * WGK[j];
        if j % 2 == 1 {
            gauss += pair * WG[j / 2];
        }
    }
    (kronrod * half, gauss * half)
}
