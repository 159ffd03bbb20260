//! Locating the zeros of an exponential sum in a vertical strip.
//!
//! All zeros of `f` lie in `|Re z| < B` for an explicit [`strip_bound`]. The
//! rectangle `[−B, B] × [y₋, y₊]`, with horizontal sides placed on
//! [`safe_ordinate`]s, is bisected recursively; each box carries its winding
//! count `(1/2πi)∮ f′/f dz` and boxes with count zero are dropped. Cut lines
//! are jittered with a seeded generator and re-drawn whenever a cut passes too
//! close to a zero or the two halves do not add up to the parent count. Small
//! boxes are finished by damped Newton iteration and a local winding count
//! for the multiplicity.

mod quadrature;

use std::f64::consts::TAU;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::freqcore::{Coefficient, ExponentialSum, NumericSum};
use quadrature::log_derivative_integral;

/// Boxes smaller than this are handed to Newton refinement.
pub const LEAF_DIAMETER: f64 = 1e-3;
/// Half-width of the square used to read off a multiplicity.
pub const MULTIPLICITY_RADIUS: f64 = 1e-4;
/// Zeros must satisfy `|f| ≤ RESIDUAL_TOL · Σ|cᵢ|·exp(2παᵢ·Re z)`.
pub const RESIDUAL_TOL: f64 = 1e-9;
/// Boundary samples with `|f|/scale` below this reject the contour.
pub const EDGE_CLEARANCE: f64 = 1e-9;

const EDGE_ABS_TOL: f64 = 1e-7;
const MAX_CUT_ATTEMPTS: u64 = 12;
const NEWTON_MAX_ITERATIONS: usize = 80;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Rect {
    pub re_min: f64,
    pub re_max: f64,
    pub im_min: f64,
    pub im_max: f64,
}

impl Rect {
    pub fn new(re_min: f64, re_max: f64, im_min: f64, im_max: f64) -> Result<Self> {
        let ok = re_min < re_max && im_min < im_max;
        let finite = [re_min, re_max, im_min, im_max].iter().all(|v| v.is_finite());
        if !ok || !finite {
            return Err(Error::input(format!(
                "degenerate rectangle [{re_min}, {re_max}] x [{im_min}, {im_max}]"
            )));
        }
        Ok(Rect { re_min, re_max, im_min, im_max })
    }

    /// Axis-aligned square of half-width `radius` around `center`.
    pub fn square(center: Complex64, radius: f64) -> Self {
        Rect {
            re_min: center.re - radius,
            re_max: center.re + radius,
            im_min: center.im - radius,
            im_max: center.im + radius,
        }
    }

    pub fn width(&self) -> f64 {
        self.re_max - self.re_min
    }

    pub fn height(&self) -> f64 {
        self.im_max - self.im_min
    }

    pub fn diameter(&self) -> f64 {
        self.width().hypot(self.height())
    }

    pub fn center(&self) -> Complex64 {
        Complex64::new(0.5 * (self.re_min + self.re_max), 0.5 * (self.im_min + self.im_max))
    }

    pub fn contains(&self, z: Complex64) -> bool {
        z.re > self.re_min && z.re < self.re_max && z.im > self.im_min && z.im < self.im_max
    }

    /// Corners in counterclockwise order starting bottom-left.
    fn corners(&self) -> [Complex64; 4] {
        [
            Complex64::new(self.re_min, self.im_min),
            Complex64::new(self.re_max, self.im_min),
            Complex64::new(self.re_max, self.im_max),
            Complex64::new(self.re_min, self.im_max),
        ]
    }

    /// Cuts across the longer side at fraction `t` of its length.
    fn split(&self, t: f64) -> (Rect, Rect) {
        if self.width() >= self.height() {
            let x = self.re_min + t * self.width();
            (Rect { re_max: x, ..*self }, Rect { re_min: x, ..*self })
        } else {
            let y = self.im_min + t * self.height();
            (Rect { im_max: y, ..*self }, Rect { im_min: y, ..*self })
        }
    }
}

/// A zero of `f` with its multiplicity.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Zero {
    pub location: Complex64,
    pub multiplicity: u32,
}

#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureConfig {
    pub max_subdivision_depth: u32,
    /// Minimum number of Gauss–Kronrod panels per rectangle edge.
    pub edge_samples_initial: usize,
    /// Largest accepted distance of the computed winding number from an integer.
    pub winding_residual_tol: f64,
    /// Newton stops once `|f| ≤ newton_tol · scale`.
    pub newton_tol: f64,
    pub jitter_seed: u64,
    /// Tail-sum margin passed to [`strip_bound`].
    pub strip_margin: f64,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        QuadratureConfig {
            max_subdivision_depth: 64,
            edge_samples_initial: 8,
            winding_residual_tol: 0.25,
            newton_tol: 1e-12,
            jitter_seed: 0,
            strip_margin: 0.5,
        }
    }
}

impl QuadratureConfig {
    pub fn with_seed(seed: u64) -> Self {
        QuadratureConfig { jitter_seed: seed, ..Default::default() }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.winding_residual_tol > 0.0 && self.winding_residual_tol < 0.5) {
            return Err(Error::input("winding_residual_tol must lie in (0, 0.5)"));
        }
        if !(self.strip_margin > 0.0 && self.strip_margin < 1.0) {
            return Err(Error::input("strip margin must lie in (0, 1)"));
        }
        if self.newton_tol <= 0.0 || self.edge_samples_initial == 0 {
            return Err(Error::input("newton_tol and edge_samples_initial must be positive"));
        }
        Ok(())
    }
}

/// Result of [`find_zeros`].
#[derive(Debug, Clone, PartialEq)]
pub struct ZeroSet {
    /// Sorted by imaginary part, then real part.
    pub zeros: Vec<Zero>,
    pub strip_bound: f64,
    /// The outer rectangle that was searched.
    pub rect: Rect,
    /// Winding count of the outer rectangle.
    pub outer_winding: i64,
}

impl ZeroSet {
    /// Half the height of the searched rectangle.
    pub fn r_used(&self) -> f64 {
        0.5 * self.rect.height()
    }

    /// Zeros with `|Im z| < r`. Complete for `r` up to the requested `R`.
    pub fn within(&self, r: f64) -> Vec<Zero> {
        self.zeros.iter().filter(|z| z.location.im.abs() < r).copied().collect()
    }

    pub fn total_multiplicity(&self) -> i64 {
        self.zeros.iter().map(|z| z.multiplicity as i64).sum()
    }
}

fn require_two_terms(f: &NumericSum) -> Result<()> {
    if f.len() < 2 {
        return Err(Error::input("f needs at least two terms to have zeros"));
    }
    Ok(())
}

/// Half-width `B` of a vertical strip containing every zero of `f`.
///
/// Smallest `B` (to 1e−12) with both tail sums
/// `Σ_{j≥2} |c_j/c₁|·exp(−2πB(α_j−α₁))` and `Σ_{j<n} |c_j/cₙ|·exp(−2πB(αₙ−α_j))`
/// at most `margin`. Outside the strip the extreme term then dominates.
pub fn strip_bound<C: Coefficient>(f: &ExponentialSum<C>, margin: f64) -> Result<f64> {
    strip_bound_numeric(&f.numeric(), margin)
}

pub fn strip_bound_numeric(f: &NumericSum, margin: f64) -> Result<f64> {
    require_two_terms(f)?;
    if !(margin > 0.0 && margin < 1.0) {
        return Err(Error::input("margin must lie in (0, 1)"));
    }
    let coeffs: Vec<Complex64> = f.coefficients().collect();
    let freqs = f.frequencies();
    let n = coeffs.len();
    let left = |b: f64| -> f64 {
        (1..n)
            .map(|j| coeffs[j].norm() / coeffs[0].norm() * (-TAU * b * (freqs[j] - freqs[0])).exp())
            .sum()
    };
    let right = |b: f64| -> f64 {
        (0..n - 1)
            .map(|j| {
                coeffs[j].norm() / coeffs[n - 1].norm() * (-TAU * b * (freqs[n - 1] - freqs[j])).exp()
            })
            .sum()
    };
    let b_left = smallest_below(left, margin)?;
    let b_right = smallest_below(right, margin)?;
    Ok(b_left.max(b_right))
}

// Smallest b with tail(b) <= margin, for a continuous decreasing tail.
fn smallest_below(tail: impl Fn(f64) -> f64, margin: f64) -> Result<f64> {
    let mut lo = -1.0;
    let mut hi = 1.0;
    let mut guard = 0;
    while tail(hi) > margin {
        hi *= 2.0;
        guard += 1;
        if guard > 200 {
            return Err(Error::numerical("strip bound bracket diverged"));
        }
    }
    while tail(lo) <= margin {
        lo *= 2.0;
        guard += 1;
        if guard > 400 {
            return Err(Error::numerical("strip bound bracket diverged"));
        }
    }
    while hi - lo > 1e-12 * (1.0 + hi.abs()) {
        let mid = 0.5 * (lo + hi);
        if tail(mid) <= margin {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(hi)
}

/// Winding count `(1/2πi)∮ f′/f dz` of `rect`, positively oriented.
pub fn winding_count<C: Coefficient>(
    f: &ExponentialSum<C>,
    rect: &Rect,
    cfg: &QuadratureConfig,
) -> Result<i64> {
    winding_count_numeric(&f.numeric(), rect, cfg)
}

pub fn winding_count_numeric(f: &NumericSum, rect: &Rect, cfg: &QuadratureConfig) -> Result<i64> {
    let corners = rect.corners();
    let span = f.span().max(f.max_abs_frequency()).max(1e-12);
    let mut total = Complex64::new(0.0, 0.0);
    let mut error = 0.0;
    let mut min_relative = f64::INFINITY;
    for i in 0..4 {
        let (a, b) = (corners[i], corners[(i + 1) % 4]);
        let len = (b - a).norm();
        let panels = ((len * 2.0 * span).ceil() as usize).clamp(cfg.edge_samples_initial, 1 << 14);
        let edge = log_derivative_integral(f, a, b, panels, EDGE_ABS_TOL);
        if edge.singular {
            return Err(Error::ContourOnZero);
        }
        if edge.min_relative < EDGE_CLEARANCE {
            return Err(Error::ContourTooClose(edge.min_relative));
        }
        min_relative = min_relative.min(edge.min_relative);
        total += edge.value;
        error += edge.error;
    }
    let winding = total / Complex64::new(0.0, TAU);
    let rounded = winding.re.round();
    let residual = (winding - rounded).norm() + error / TAU;
    if residual > cfg.winding_residual_tol {
        return Err(Error::ContourTooClose(min_relative));
    }
    Ok(rounded as i64)
}

/// Default half-window `1/(4(αₙ − α₁))` around a requested ordinate.
pub fn default_window(span: f64) -> f64 {
    0.25 / span
}

/// An ordinate `R′` with `|R′ − R| ≤ window` maximizing the smallest relative
/// value of `|f|` along the horizontal segment `Im z = R′`, `|Re z| ≤ B`.
///
/// Fewer than `n` zeros fit in a horizontal strip narrower than `1/(αₙ−α₁)`, so
/// the default window always contains lines well separated from every zero.
pub fn safe_ordinate<C: Coefficient>(
    f: &ExponentialSum<C>,
    r: f64,
    window: Option<f64>,
    margin: f64,
) -> Result<f64> {
    let ns = f.numeric();
    if ns.len() < 2 {
        return Ok(r);
    }
    let b = strip_bound_numeric(&ns, margin)?;
    Ok(safe_ordinate_numeric(&ns, r, window.unwrap_or(default_window(ns.span())), b))
}

/// Smallest `|f|/scale` over `Im z = y`, `|Re z| ≤ b`, on a sample grid.
pub fn line_minimum(f: &NumericSum, y: f64, b: f64, samples: usize) -> f64 {
    (0..=samples)
        .map(|i| {
            let x = -b + 2.0 * b * i as f64 / samples as f64;
            f.relative_abs(Complex64::new(x, y))
        })
        .fold(f64::INFINITY, f64::min)
}

pub(crate) fn safe_ordinate_numeric(f: &NumericSum, r: f64, window: f64, b: f64) -> f64 {
    safe_ordinate_between(f, r, r - window, r + window, b)
}

/// Best line in `[lo, hi]` by sampled line minimum; ties go to the ordinate
/// closest to `r`.
pub(crate) fn safe_ordinate_between(f: &NumericSum, r: f64, lo: f64, hi: f64, b: f64) -> f64 {
    const LINE_SAMPLES: usize = 128;
    const COARSE: usize = 40;
    const FINE: usize = 10;
    let score = |y: f64| line_minimum(f, y, b, LINE_SAMPLES);
    let closer = |y: f64, best: f64| (y - r).abs() < (best - r).abs();
    let mut best = (score(r.clamp(lo, hi)), r.clamp(lo, hi));
    let consider = |y: f64, best: &mut (f64, f64)| {
        let v = score(y);
        if v > best.0 || (v == best.0 && closer(y, best.1)) {
            *best = (v, y);
        }
    };
    let h = (hi - lo) / COARSE as f64;
    for k in 0..=COARSE {
        consider(lo + k as f64 * h, &mut best);
    }
    let center = best.1;
    let fine = h / FINE as f64;
    for k in 1..FINE {
        for sign in [-1.0, 1.0] {
            let y = center + sign * k as f64 * fine;
            if (lo..=hi).contains(&y) {
                consider(y, &mut best);
            }
        }
    }
    best.1
}

/// All zeros of `f` in `[−B, B] × [y₋, y₊]`, where `y₊` is a safe ordinate in
/// `[R, R + 1/(2(αₙ−α₁))]` and `y₋` one in the mirrored window below `−R`.
///
/// The rectangle therefore covers every zero with `|Im z| ≤ R`; see
/// [`ZeroSet::within`].
pub fn find_zeros<C: Coefficient>(
    f: &ExponentialSum<C>,
    r: f64,
    cfg: &QuadratureConfig,
) -> Result<ZeroSet> {
    find_zeros_numeric(&f.numeric(), r, cfg)
}

pub fn find_zeros_numeric(f: &NumericSum, r: f64, cfg: &QuadratureConfig) -> Result<ZeroSet> {
    require_two_terms(f)?;
    cfg.validate()?;
    if !(r > 0.0 && r.is_finite()) {
        return Err(Error::input("R must be positive and finite"));
    }
    let b = strip_bound_numeric(f, cfg.strip_margin)?;
    let reach = 2.0 * default_window(f.span());
    let top = safe_ordinate_between(f, r, r, r + reach, b);
    let bottom = safe_ordinate_between(f, -r, -r - reach, -r, b);
    let rect = Rect::new(-b, b, bottom, top)?;
    let outer_winding = winding_count_numeric(f, &rect, cfg)?;
    let finder = Finder { f, cfg };
    let (mut zeros, exceeded) = finder.resolve(rect, outer_winding, 0, cfg.jitter_seed)?;
    zeros.sort_by(|a, b| {
        a.location
            .im
            .total_cmp(&b.location.im)
            .then(a.location.re.total_cmp(&b.location.re))
    });
    if exceeded {
        return Err(Error::DepthExceeded { partial: zeros });
    }
    Ok(ZeroSet { zeros, strip_bound: b, rect, outer_winding })
}

struct Finder<'a> {
    f: &'a NumericSum,
    cfg: &'a QuadratureConfig,
}

fn derive_seed(seed: u64, salt: u64) -> u64 {
    // splitmix64 finalizer
    let mut z = seed ^ salt.wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

impl Finder<'_> {
    /// Zeros inside `rect`, which has winding count `count`. The flag reports
    /// boxes abandoned at the depth limit.
    fn resolve(&self, rect: Rect, count: i64, depth: u32, seed: u64) -> Result<(Vec<Zero>, bool)> {
        if count == 0 {
            return Ok((Vec::new(), false));
        }
        let center = rect.center();
        if rect.diameter() < LEAF_DIAMETER {
            if let Some(z) = self.refine(&rect, count) {
                return Ok((vec![z], false));
            }
            if rect.diameter() < 1e-12 * (1.0 + center.norm()) {
                return Ok((vec![Zero { location: center, multiplicity: count as u32 }], false));
            }
        }
        if depth >= self.cfg.max_subdivision_depth {
            return Ok((Vec::new(), true));
        }
        let ((a, ca), (b, cb)) = self.cut(&rect, count, seed)?;
        let (ra, rb) = rayon::join(
            || self.resolve(a, ca, depth + 1, derive_seed(seed, 1)),
            || self.resolve(b, cb, depth + 1, derive_seed(seed, 2)),
        );
        let (mut za, ea) = ra?;
        let (zb, eb) = rb?;
        za.extend(zb);
        Ok((za, ea || eb))
    }

    fn cut(&self, rect: &Rect, count: i64, seed: u64) -> Result<((Rect, i64), (Rect, i64))> {
        for attempt in 0..MAX_CUT_ATTEMPTS {
            let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(seed, 100 + attempt));
            let spread = if attempt < 4 { 0.15 } else { 0.3 };
            let t = 0.5 + rng.random_range(-spread..spread);
            let (a, b) = rect.split(t);
            let ca = match winding_count_numeric(self.f, &a, self.cfg) {
                Ok(c) => c,
                Err(Error::ContourTooClose(_) | Error::ContourOnZero) => continue,
                Err(e) => return Err(e),
            };
            let cb = match winding_count_numeric(self.f, &b, self.cfg) {
                Ok(c) => c,
                Err(Error::ContourTooClose(_) | Error::ContourOnZero) => continue,
                Err(e) => return Err(e),
            };
            if ca >= 0 && cb >= 0 && ca + cb == count {
                return Ok(((a, ca), (b, cb)));
            }
        }
        Err(Error::numerical(format!(
            "no clean cut found for box {rect:?} with winding count {count}"
        )))
    }

    /// Newton refinement inside a small box; `None` sends the box back to
    /// subdivision.
    fn refine(&self, rect: &Rect, count: i64) -> Option<Zero> {
        let z = newton(self.f, rect.center(), count as f64, self.cfg.newton_tol)?;
        if !rect.contains(z) {
            return None;
        }
        if self.f.eval(z).norm() > RESIDUAL_TOL * self.f.scale(z.re) {
            return None;
        }
        let local = winding_count_numeric(self.f, &Rect::square(z, MULTIPLICITY_RADIUS), self.cfg).ok()?;
        (local == count).then_some(Zero { location: z, multiplicity: count as u32 })
    }
}

/// Damped Newton iteration with multiplicity `m` (Schröder's step `m·f/f′`).
fn newton(f: &NumericSum, start: Complex64, m: f64, tol: f64) -> Option<Complex64> {
    let mut z = start;
    let (mut fz, mut dfz) = f.eval_with_derivative(z);
    let mut settled = false;
    for _ in 0..NEWTON_MAX_ITERATIONS {
        if fz.norm() == 0.0 {
            return Some(z);
        }
        let step = fz / dfz * m;
        if !(step.re.is_finite() && step.im.is_finite()) {
            return None;
        }
        let mut lambda = 1.0;
        let mut next = z - step;
        let (mut fn_, mut dfn) = f.eval_with_derivative(next);
        while fn_.norm() >= fz.norm() && lambda > 1e-4 {
            lambda *= 0.5;
            next = z - step * lambda;
            (fn_, dfn) = f.eval_with_derivative(next);
        }
        let moved = (next - z).norm();
        z = next;
        fz = fn_;
        dfz = dfn;
        if moved <= 1e-15 * (1.0 + z.norm()) {
            return Some(z);
        }
        if fz.norm() <= tol * f.scale(z.re) {
            // one extra step once inside tolerance
            if settled {
                return Some(z);
            }
            settled = true;
        }
    }
    (fz.norm() <= tol * f.scale(z.re)).then_some(z)
}
