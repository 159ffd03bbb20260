//! Empirical means `S(R)/2R` from located zeros and their convergence to the
//! symbolic mean value.

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::freqcore::{Coefficient, ExponentialSum};
use crate::gkformula::mean_value;
use crate::zerofinder::{find_zeros, QuadratureConfig, Zero, ZeroSet};

/// `Σ multiplicity · g(location)`.
pub fn weighted_sum<C: Coefficient>(zeros: &[Zero], g: &ExponentialSum<C>) -> Complex64 {
    zeros
        .iter()
        .map(|z| g.evaluate(z.location) * z.multiplicity as f64)
        .sum()
}

#[derive(Debug, Clone, PartialEq)]
pub struct EmpiricalMean {
    /// `S(R)/2R`.
    pub mean: Complex64,
    pub r: f64,
    /// `S(R)`: `g` summed over the zeros with `|Im z| < R`.
    pub weighted_sum: Complex64,
    /// Zeros with `|Im z| < R`, counting multiplicity.
    pub count: i64,
    /// Everything found inside the contour, which reaches past `±R`.
    pub zeros: ZeroSet,
}

impl EmpiricalMean {
    /// Top ordinate of the contour.
    pub fn contour_r(&self) -> f64 {
        self.zeros.rect.im_max
    }
}

/// `S(R)/2R`. The contour runs along safe ordinates just outside `±R` and the
/// zeros are then filtered to `|Im z| < R`.
pub fn empirical_mean<C: Coefficient>(
    f: &ExponentialSum<C>,
    g: &ExponentialSum<C>,
    r: f64,
    cfg: &QuadratureConfig,
) -> Result<EmpiricalMean> {
    let zeros = find_zeros(f, r, cfg)?;
    let inside = zeros.within(r);
    let weighted_sum = weighted_sum(&inside, g);
    let count = inside.iter().map(|z| z.multiplicity as i64).sum();
    Ok(EmpiricalMean { mean: weighted_sum / (2.0 * r), r, weighted_sum, count, zeros })
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConvergenceRow {
    pub r: f64,
    /// Top ordinate of the contour used for this row.
    pub r_used: f64,
    pub count: i64,
    pub weighted_sum: Complex64,
    pub empirical_mean: Complex64,
    pub abs_error: f64,
    pub zeros: Vec<Zero>,
    pub strip_bound: f64,
    pub outer_winding: i64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConvergenceReport {
    pub symbolic_mean: Complex64,
    /// Sorted by increasing `R`.
    pub rows: Vec<ConvergenceRow>,
    pub tolerance: f64,
    /// Median of the successive error ratios `err(Rᵢ)/err(Rᵢ₊₁)`.
    pub median_ratio: f64,
    pub pass: bool,
}

/// One row per entry of `r_list`; passes when the last error is below `tol`
/// and the errors do not grow in trend.
pub fn convergence_report<C: Coefficient>(
    f: &ExponentialSum<C>,
    g: &ExponentialSum<C>,
    r_list: &[f64],
    cfg: &QuadratureConfig,
    tol: f64,
) -> Result<ConvergenceReport> {
    if r_list.len() < 2 {
        return Err(Error::input("R list needs at least two values"));
    }
    if r_list.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::input("R list must be strictly increasing"));
    }
    let symbolic_mean = mean_value(f, g)?.mean.to_complex(f.basis());
    let rows = r_list
        .par_iter()
        .map(|&r| {
            let em = empirical_mean(f, g, r, cfg)?;
            Ok(ConvergenceRow {
                r,
                r_used: em.contour_r(),
                count: em.count,
                weighted_sum: em.weighted_sum,
                empirical_mean: em.mean,
                abs_error: (em.mean - symbolic_mean).norm(),
                strip_bound: em.zeros.strip_bound,
                outer_winding: em.zeros.outer_winding,
                zeros: em.zeros.zeros,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let errors: Vec<f64> = rows.iter().map(|r| r.abs_error).collect();
    let median_ratio = median_error_ratio(&errors);
    let last = *errors.last().expect("at least two rows");
    let pass = last < tol && median_ratio >= 1.0;
    Ok(ConvergenceReport { symbolic_mean, rows, tolerance: tol, median_ratio, pass })
}

/// Median of `errors[i]/errors[i+1]`; `0/0` counts as 1, `x/0` as infinity.
pub fn median_error_ratio(errors: &[f64]) -> f64 {
    let mut ratios: Vec<f64> = errors
        .windows(2)
        .map(|w| match (w[0] == 0.0, w[1] == 0.0) {
            (true, true) => 1.0,
            (false, true) => f64::INFINITY,
            _ => w[0] / w[1],
        })
        .collect();
    if ratios.is_empty() {
        return 1.0;
    }
    ratios.sort_by(f64::total_cmp);
    let m = ratios.len();
    if m % 2 == 1 {
        ratios[m / 2]
    } else {
        let (a, b) = (ratios[m / 2 - 1], ratios[m / 2]);
        if a.is_infinite() || b.is_infinite() {
            b
        } else {
            0.5 * (a + b)
        }
    }
}

/// True iff every window of height `0.999/span` holds fewer than `n` zeros,
/// counting multiplicity.
pub fn fewnomial_check(zeros: &[Zero], n: usize, span: f64) -> bool {
    let height = 0.999 / span;
    let mut ims: Vec<(f64, u32)> = zeros.iter().map(|z| (z.location.im, z.multiplicity)).collect();
    ims.sort_by(|a, b| a.0.total_cmp(&b.0));
    let mut lo = 0;
    let mut inside: u64 = 0;
    for hi in 0..ims.len() {
        inside += ims[hi].1 as u64;
        while ims[hi].0 - ims[lo].0 >= height {
            inside -= ims[lo].1 as u64;
            lo += 1;
        }
        if inside >= n as u64 {
            return false;
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    fn zero_at(im: f64, m: u32) -> Zero {
        Zero { location: Complex64::new(0.0, im), multiplicity: m }
    }

    #[test]
    fn fewnomial_window() {
        let spaced: Vec<Zero> = (0..6).map(|k| zero_at(k as f64 + 0.5, 1)).collect();
        assert!(fewnomial_check(&spaced, 2, 1.0));
        let stacked = vec![zero_at(1.0, 1), zero_at(1.0, 1)];
        assert!(!fewnomial_check(&stacked, 2, 1.0));
        assert!(!fewnomial_check(&[zero_at(0.0, 2)], 2, 1.0));
        assert!(fewnomial_check(&[], 2, 1.0));
    }

    #[test]
    fn ratio_median() {
        assert_eq!(median_error_ratio(&[4.0, 2.0, 1.0]), 2.0);
        assert_eq!(median_error_ratio(&[0.0, 0.0]), 1.0);
        assert_eq!(median_error_ratio(&[1.0, 2.0]), 0.5);
    }
}
