use std::f64::consts::{LN_2, SQRT_2, TAU};

use expsum::laurent::roots_nonzero;
use expsum::verifier::fewnomial_check;
use expsum::zerofinder::{default_window, safe_ordinate, strip_bound, winding_count};
use expsum::{
    find_zeros, Error, ExpTerm, ExponentialSum, FloatSum, Frequency, FrequencyBasis,
    LaurentPolynomial, QuadratureConfig, Rational, Rect,
};
use num_complex::Complex64;
use proptest::prelude::*;

const SQRT2: &str = "1.4142135623730950488016887242096980786";

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn int_sum(terms: &[(f64, i64)]) -> FloatSum {
    let raw: Vec<_> = terms.iter().map(|&(x, k)| (c(x, 0.0), k, 1)).collect();
    FloatSum::from_rational_terms(&raw).unwrap()
}

fn sqrt2_sum() -> FloatSum {
    let basis = FrequencyBasis::new(&["1", SQRT2]).unwrap().shared();
    ExponentialSum::new(
        vec![
            ExpTerm::new(c(1.0, 0.0), Frequency::from_ints(&[0, 0])),
            ExpTerm::new(c(1.0, 0.0), Frequency::from_ints(&[1, 0])),
            ExpTerm::new(c(1.0, 0.0), Frequency::from_ints(&[0, 1])),
        ],
        basis,
    )
    .unwrap()
}

/// Independent bisection on both tail sums, written from the definition.
fn strip_oracle(coeffs: &[f64], freqs: &[f64], margin: f64) -> f64 {
    let n = coeffs.len();
    let left = |b: f64| (1..n).map(|j| coeffs[j] / coeffs[0] * (-TAU * b * (freqs[j] - freqs[0])).exp()).sum::<f64>();
    let right = |b: f64| (0..n - 1).map(|j| coeffs[j] / coeffs[n - 1] * (-TAU * b * (freqs[n - 1] - freqs[j])).exp()).sum::<f64>();
    let solve = |h: &dyn Fn(f64) -> f64| {
        let (mut lo, mut hi) = (-50.0, 50.0);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if h(mid) <= margin { hi = mid } else { lo = mid }
        }
        hi
    };
    solve(&left).max(solve(&right))
}

fn abs_line_min(f: &FloatSum, y: f64, b: f64) -> f64 {
    (0..=2000)
        .map(|i| f.evaluate(c(-b + 2.0 * b * i as f64 / 2000.0, y)).norm())
        .fold(f64::INFINITY, f64::min)
}

#[test]
fn strip_bound_examples() {
    let f = int_sum(&[(1.0, 0), (1.0, 1)]);
    assert!((strip_bound(&f, 0.5).unwrap() - LN_2 / TAU).abs() < 1e-11);
    let g = sqrt2_sum();
    let oracle = strip_oracle(&[1.0, 1.0, 1.0], &[0.0, 1.0, SQRT_2], 0.5);
    assert!((strip_bound(&g, 0.5).unwrap() - oracle).abs() < 1e-10);
    assert!(matches!(strip_bound(&int_sum(&[(1.0, 2)]), 0.5), Err(Error::Input(_))));
    assert!(strip_bound(&f, 1.5).is_err());
}

#[test]
fn winding_examples() {
    let cfg = QuadratureConfig::default();
    let f = int_sum(&[(1.0, 0), (1.0, 1)]);
    assert_eq!(winding_count(&f, &Rect::new(-1.0, 1.0, -1.0, 1.0).unwrap(), &cfg).unwrap(), 2);
    assert_eq!(winding_count(&f, &Rect::new(-1.0, 1.0, 0.6, 1.4).unwrap(), &cfg).unwrap(), 0);
    let sq = int_sum(&[(1.0, 0), (-2.0, 1), (1.0, 2)]);
    assert_eq!(winding_count(&sq, &Rect::new(-0.05, 0.07, -0.06, 0.04).unwrap(), &cfg).unwrap(), 2);
    // an edge through the zero at i/2 is refused
    assert!(matches!(
        winding_count(&f, &Rect::new(-1.0, 1.0, 0.5, 1.0).unwrap(), &cfg),
        Err(Error::ContourOnZero | Error::ContourTooClose(_))
    ));
}

#[test]
fn safe_ordinate_examples() {
    let f = int_sum(&[(1.0, 0), (1.0, 1)]);
    let b = strip_bound(&f, 0.5).unwrap();
    let r = safe_ordinate(&f, 0.5, None, 0.5).unwrap();
    assert_ne!(r, 0.5);
    assert!((r - 0.5).abs() <= 0.25);
    assert!(abs_line_min(&f, r, b) >= 0.1);
    assert_eq!(default_window(1.0), 0.25);
    // the line Im z = 1 is as far from zeros as possible
    assert_eq!(safe_ordinate(&f, 1.0, None, 0.5).unwrap(), 1.0);
}

#[test]
fn find_zeros_two_term() {
    let f = int_sum(&[(1.0, 0), (1.0, 1)]);
    let set = find_zeros(&f, 3.0, &QuadratureConfig::default()).unwrap();
    let ims: Vec<f64> = set.zeros.iter().map(|z| z.location.im).collect();
    let expected = [-2.5, -1.5, -0.5, 0.5, 1.5, 2.5];
    assert_eq!(ims.len(), 6);
    for (got, want) in set.zeros.iter().zip(expected) {
        assert!((got.location - c(0.0, want)).norm() < 1e-10);
        assert_eq!(got.multiplicity, 1);
    }
}

#[test]
fn find_zeros_double_zero() {
    let f = int_sum(&[(1.0, 0), (-2.0, 1), (1.0, 2)]);
    let set = find_zeros(&f, 0.6, &QuadratureConfig::default()).unwrap();
    assert_eq!(set.zeros.len(), 1);
    assert_eq!(set.zeros[0].multiplicity, 2);
    assert!(set.zeros[0].location.norm() < 1e-6);
}

#[test]
fn find_zeros_rejects_single_term() {
    let r = find_zeros(&int_sum(&[(2.0, 1)]), 1.0, &QuadratureConfig::default());
    assert!(matches!(r, Err(e) if e.is_input_error()));
}

#[test]
fn quadratic_zeros_match_logarithms() {
    // 6 − 5w + w² with w = e^{2πz}: Re z = ln 2/2π and ln 3/2π, Im z integer
    let f = int_sum(&[(6.0, 0), (-5.0, 1), (1.0, 2)]);
    let set = find_zeros(&f, 2.5, &QuadratureConfig::default()).unwrap();
    assert_eq!(set.total_multiplicity(), 10);
    for z in &set.zeros {
        let re_ok = (z.location.re - LN_2 / TAU).abs() < 1e-10 || (z.location.re - 3f64.ln() / TAU).abs() < 1e-10;
        assert!(re_ok && (z.location.im - z.location.im.round()).abs() < 1e-10);
    }
}

#[test]
fn sqrt2_invariants() {
    let f = sqrt2_sum();
    let cfg = QuadratureConfig::default();
    let set = find_zeros(&f, 8.0, &cfg).unwrap();
    assert_eq!(set.total_multiplicity(), set.outer_winding);
    assert!(fewnomial_check(&set.zeros, 3, SQRT_2));
    for z in &set.zeros {
        assert!(z.location.re.abs() < set.strip_bound);
        assert!(f.evaluate(z.location).norm() <= 1e-9 * f.numeric().scale(z.location.re));
    }
    assert_eq!(find_zeros(&f, 8.0, &cfg).unwrap(), set);
}

/// Zeros of `Σ c_k e^{2πkz}` lifted from the roots of `Σ c_k w^k`.
fn lifted_zeros(coeffs: &[(Complex64, i64)], im_lo: f64, im_hi: f64) -> Vec<(Complex64, u32)> {
    let p = LaurentPolynomial::new(coeffs.iter().map(|&(c, k)| (k, c)));
    let mut out = Vec::new();
    for (w, m) in roots_nonzero(&p).unwrap() {
        let base = c(w.norm().ln(), w.arg()) / TAU;
        let k0 = ((im_lo - base.im).floor()) as i64 - 1;
        let k1 = ((im_hi - base.im).ceil()) as i64 + 1;
        for k in k0..=k1 {
            let z = base + c(0.0, k as f64);
            if z.im > im_lo && z.im < im_hi {
                out.push((z, m));
            }
        }
    }
    out
}

fn coeff() -> impl Strategy<Value = Complex64> {
    (0.5f64..2.0, 0.0f64..TAU).prop_map(|(r, t)| Complex64::from_polar(r, t))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn matches_lifted_polynomial_roots(
        cs in prop::collection::vec(coeff(), 2..=4),
        exps in prop::collection::btree_set(-2i64..=3, 2..=4),
        seed in 0u64..1000,
    ) {
        let exps: Vec<i64> = exps.into_iter().collect();
        let n = cs.len().min(exps.len());
        prop_assume!(n >= 2);
        let terms: Vec<(Complex64, i64)> = cs[..n].iter().copied().zip(exps[..n].iter().copied()).collect();
        let raw: Vec<_> = terms.iter().map(|&(c, k)| ExpTerm::new(c, Frequency::integer(k))).collect();
        let f = FloatSum::new(raw, FrequencyBasis::standard().shared()).unwrap();
        let set = find_zeros(&f, 1.7, &QuadratureConfig::with_seed(seed)).unwrap();
        let expected = lifted_zeros(&terms, set.rect.im_min, set.rect.im_max);
        let total: u32 = expected.iter().map(|e| e.1).sum();
        prop_assert_eq!(set.total_multiplicity(), total as i64);
        for z in &set.zeros {
            let hit = expected.iter().any(|(e, m)| (e - z.location).norm() < 1e-7 && *m == z.multiplicity);
            prop_assert!(hit, "unexpected zero {:?}", z);
        }
    }

    #[test]
    fn pipeline_invariants(
        cs in prop::collection::vec(coeff(), 2..=4),
        coords in prop::collection::vec((-2i64..=2, 1i64..=2, -1i64..=1), 2..=4),
        seed in 0u64..1000,
    ) {
        let basis = FrequencyBasis::new(&["1", SQRT2]).unwrap().shared();
        let raw: Vec<_> = cs.iter().zip(&coords).map(|(&c, &(a, d, b))| {
            ExpTerm::new(c, Frequency::new(vec![Rational::new(a.into(), d.into()), Rational::from_integer(b.into())]))
        }).collect();
        let f = FloatSum::new(raw, basis).unwrap();
        prop_assume!(f.len() >= 2);
        let cfg = QuadratureConfig::with_seed(seed);
        let set = find_zeros(&f, 2.0, &cfg).unwrap();
        // conservation
        prop_assert_eq!(set.total_multiplicity(), set.outer_winding);
        // containment and residual
        let ns = f.numeric();
        for z in &set.zeros {
            prop_assert!(z.location.re.abs() < set.strip_bound);
            prop_assert!(set.rect.contains(z.location));
            prop_assert!(f.evaluate(z.location).norm() <= 1e-9 * ns.scale(z.location.re));
        }
        // fewnomial bound
        prop_assert!(fewnomial_check(&set.zeros, f.len(), ns.span()));
        // determinism
        prop_assert_eq!(find_zeros(&f, 2.0, &cfg).unwrap(), set);
    }
}
