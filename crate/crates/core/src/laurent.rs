//! The algebraic case: Laurent polynomials in one variable.
//!
//! For Laurent polynomials `f`, `g` the sum of `g` over the zeros of `f` in
//! `ℂ∖{0}` equals `Aₙ − A₁`, where `A₁`, `Aₙ` are the `1/w` coefficients of
//! `g·f′/f` expanded at zero and at infinity. This module computes that sum
//! both from the series (reusing the exponential-series engine with integer
//! frequencies) and directly from the roots, giving an oracle for
//! commensurate exponential sums via the substitution `w = exp(2πz/q)`.

use std::collections::BTreeMap;

use num_complex::Complex64;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::freqcore::{
    Coefficient, End, ExpTerm, ExponentialSum, FloatSum, Frequency, FrequencyBasis, Rational,
};
use crate::gkformula::constant_term_of_quotient;

const ROOT_MAX_ITERATIONS: usize = 500;
const ROOT_RESIDUAL_TOL: f64 = 1e-12;
const ROOT_CLUSTER_RADIUS: f64 = 1e-7;

/// `Σ c_k·w^k` over integer exponents `k`, possibly negative.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct LaurentPolynomial {
    terms: BTreeMap<i64, Complex64>,
}

impl LaurentPolynomial {
    pub fn new<I: IntoIterator<Item = (i64, Complex64)>>(terms: I) -> Self {
        let mut map = BTreeMap::new();
        for (k, c) in terms {
            *map.entry(k).or_insert(Complex64::new(0.0, 0.0)) += c;
        }
        map.retain(|_, c| *c != Complex64::new(0.0, 0.0));
        LaurentPolynomial { terms: map }
    }

    /// Coefficients of `w^low, w^(low+1), …`.
    pub fn from_coeffs(low: i64, coeffs: &[Complex64]) -> Self {
        Self::new(coeffs.iter().enumerate().map(|(i, &c)| (low + i as i64, c)))
    }

    pub fn terms(&self) -> &BTreeMap<i64, Complex64> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn min_exponent(&self) -> Option<i64> {
        self.terms.keys().next().copied()
    }

    pub fn max_exponent(&self) -> Option<i64> {
        self.terms.keys().next_back().copied()
    }

    /// `kₙ − k₁`, the number of zeros in `ℂ∖{0}` with multiplicity.
    pub fn span(&self) -> i64 {
        match (self.min_exponent(), self.max_exponent()) {
            (Some(a), Some(b)) => b - a,
            _ => 0,
        }
    }

    pub fn evaluate(&self, w: Complex64) -> Complex64 {
        self.terms.iter().map(|(&k, &c)| c * w.powi(k as i32)).sum()
    }

    /// The same function as an exponential sum in `z` with `w = exp(2πz)`.
    pub fn to_exponential_sum(&self) -> FloatSum {
        let basis = FrequencyBasis::standard().shared();
        let terms = self.terms.iter().map(|(&k, &c)| ExpTerm::new(c, Frequency::integer(k))).collect();
        FloatSum::new(terms, basis).expect("integer frequencies over the standard basis")
    }

    /// `w·f′(w) = Σ k·c_k·w^k`.
    fn euler_derivative(&self) -> LaurentPolynomial {
        Self::new(self.terms.iter().map(|(&k, &c)| (k, c * k as f64)))
    }
}

/// Roots of `w^{−k₁}·p` (an ordinary polynomial with nonzero constant term),
/// clustered into `(root, multiplicity)` pairs. Total multiplicity is `kₙ − k₁`.
pub fn roots_nonzero(p: &LaurentPolynomial) -> Result<Vec<(Complex64, u32)>> {
    let low = p
        .min_exponent()
        .ok_or_else(|| Error::input("cannot take the roots of the zero Laurent polynomial"))?;
    let degree = p.span() as usize;
    let mut coeffs = vec![Complex64::new(0.0, 0.0); degree + 1];
    for (&k, &c) in p.terms() {
        coeffs[(k - low) as usize] = c;
    }
    let roots = durand_kerner(&coeffs)?;
    Ok(cluster_roots(&roots, ROOT_CLUSTER_RADIUS))
}

/// `Σ μᵢ·g(wᵢ)` over the nonzero roots of `f`.
pub fn sum_over_roots(f: &LaurentPolynomial, g: &LaurentPolynomial) -> Result<Complex64> {
    Ok(roots_nonzero(f)?
        .into_iter()
        .map(|(w, m)| g.evaluate(w) * m as f64)
        .sum())
}

/// `Aₙ − A₁` from the `1/w` coefficients of `g·f′/f` at zero and infinity.
///
/// The `1/w` coefficient of `g·f′/f` is the constant term of `g·w·f′/f`, so
/// the numerator `g·(w·f′)` is handed to the frequency-zero engine.
pub fn residue_formula_sum(f: &LaurentPolynomial, g: &LaurentPolynomial) -> Result<Complex64> {
    if f.is_zero() {
        return Err(Error::input("f must be a nonzero Laurent polynomial"));
    }
    let fe = f.to_exponential_sum();
    let numerator = g.to_exponential_sum().multiply(&f.euler_derivative().to_exponential_sum())?;
    let a_first = constant_term_of_quotient(&numerator, &fe, End::First)?;
    let a_last = constant_term_of_quotient(&numerator, &fe, End::Last)?;
    Ok(a_last - a_first)
}

/// Least common denominator `q` of the frequencies of `f` and `g`, together
/// with `f`, `g` as Laurent polynomials in `w = exp(2πz/q)`.
///
/// Every frequency must be rational: nonzero coordinates are allowed only on
/// basis elements equal to one.
pub fn substitute<C: Coefficient>(
    f: &ExponentialSum<C>,
    g: &ExponentialSum<C>,
) -> Result<(u64, LaurentPolynomial, LaurentPolynomial)> {
    let basis = f.basis();
    let rational_value = |freq: &Frequency| -> Result<Rational> {
        let mut total = Rational::zero();
        for (k, c) in freq.coords().iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !basis.is_unit(k) {
                return Err(Error::input(format!("frequency {freq} is not rational")));
            }
            total += c;
        }
        Ok(total)
    };
    let mut q = num_bigint::BigInt::from(1);
    let mut values = Vec::new();
    for (which, sum) in [(0, f), (1, g)] {
        for t in sum.terms() {
            let v = rational_value(&t.freq)?;
            q = q.lcm(v.denom());
            values.push((which, v, t.coeff.to_complex(basis)));
        }
    }
    let q_u = q.to_u64().ok_or_else(|| Error::input("common denominator too large"))?;
    let qr = Rational::from_integer(q);
    let mut parts = [Vec::new(), Vec::new()];
    for (which, v, c) in values {
        let k = (v * &qr)
            .to_integer()
            .to_i64()
            .ok_or_else(|| Error::input("exponent out of range after substitution"))?;
        parts[which].push((k, c));
    }
    let [pf, pg] = parts;
    Ok((q_u, LaurentPolynomial::new(pf), LaurentPolynomial::new(pg)))
}

/// Mean value of `g` over the zeros of `f` for rational frequencies, via
/// `w = exp(2πz/q)`: each root of `F(w)` lifts to zeros spaced `q` apart
/// vertically, so the mean is `(1/q)·Σ μᵢ·G(wᵢ)`.
pub fn mean_via_substitution<C: Coefficient>(
    f: &ExponentialSum<C>,
    g: &ExponentialSum<C>,
) -> Result<Complex64> {
    if f.is_zero() {
        return Err(Error::input("f must be a nonzero exponential sum"));
    }
    let (q, pf, pg) = substitute(f, g)?;
    Ok(sum_over_roots(&pf, &pg)? / q as f64)
}

/// All roots of `Σ coeffs[k]·w^k` by simultaneous Weierstrass iteration.
///
/// Converges when every root has relative residual
/// `|p(w)| / Σ|a_k|·|w|^k ≤ 1e−12`, followed by a few polishing sweeps.
pub(crate) fn durand_kerner(coeffs: &[Complex64]) -> Result<Vec<Complex64>> {
    let degree = coeffs.len().saturating_sub(1);
    if degree == 0 {
        return Ok(Vec::new());
    }
    let lead = coeffs[degree];
    if lead == Complex64::new(0.0, 0.0) {
        return Err(Error::input("leading coefficient is zero"));
    }
    let monic: Vec<Complex64> = coeffs.iter().map(|c| c / lead).collect();
    if degree == 1 {
        return Ok(vec![-monic[0]]);
    }
    let eval = |w: Complex64| monic.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, &c| acc * w + c);
    let magnitude = |w: Complex64| {
        let r = w.norm();
        monic.iter().rev().fold(0.0, |acc, c| acc * r + c.norm())
    };
    // Fujiwara-style bound for the initial circle
    let radius = (0..degree)
        .map(|k| monic[k].norm().powf(1.0 / (degree - k) as f64))
        .fold(0.0, f64::max)
        .max(1e-3)
        * 2.0;
    // points on a circle, rotated off the real axis so conjugate pairs separate
    let mut roots: Vec<Complex64> = (0..degree)
        .map(|k| {
            let theta = std::f64::consts::TAU * k as f64 / degree as f64 + 0.4;
            Complex64::from_polar(0.5 * radius, theta)
        })
        .collect();
    let converged = |roots: &[Complex64]| {
        roots.iter().all(|&w| eval(w).norm() <= ROOT_RESIDUAL_TOL * magnitude(w))
    };
    let mut polish = 0;
    for _ in 0..ROOT_MAX_ITERATIONS {
        let mut max_step: f64 = 0.0;
        for i in 0..degree {
            let w = roots[i];
            let denom = roots
                .iter()
                .enumerate()
                .filter(|&(j, _)| j != i)
                .fold(Complex64::new(1.0, 0.0), |acc, (_, &r)| acc * (w - r));
            if denom == Complex64::new(0.0, 0.0) {
                roots[i] = w + Complex64::new(1e-10, 1e-10) * (1.0 + w.norm());
                continue;
            }
            let step = eval(w) / denom;
            if step.re.is_finite() && step.im.is_finite() {
                roots[i] = w - step;
                max_step = max_step.max(step.norm() / (1.0 + w.norm()));
            }
        }
        if converged(&roots) {
            polish += 1;
            if polish > 3 || max_step < 1e-16 {
                return Ok(roots);
            }
        }
    }
    if converged(&roots) {
        return Ok(roots);
    }
    Err(Error::numerical(format!(
        "simultaneous root iteration did not converge in {ROOT_MAX_ITERATIONS} iterations (degree {degree})"
    )))
}

/// Groups roots lying within `radius` of each other (single linkage); each
/// group becomes its centroid with the group size as multiplicity.
pub(crate) fn cluster_roots(roots: &[Complex64], radius: f64) -> Vec<(Complex64, u32)> {
    let n = roots.len();
    let mut group: Vec<usize> = (0..n).collect();
    fn find(group: &mut [usize], i: usize) -> usize {
        let mut r = i;
        while group[r] != r {
            r = group[r];
        }
        group[i] = r;
        r
    }
    for i in 0..n {
        for j in i + 1..n {
            if (roots[i] - roots[j]).norm() <= radius * (1.0 + roots[i].norm()) {
                let (a, b) = (find(&mut group, i), find(&mut group, j));
                group[a.max(b)] = a.min(b);
            }
        }
    }
    let mut clusters: BTreeMap<usize, (Complex64, u32)> = BTreeMap::new();
    for (i, &root) in roots.iter().enumerate() {
        let r = find(&mut group, i);
        let e = clusters.entry(r).or_insert((Complex64::new(0.0, 0.0), 0));
        e.0 += root;
        e.1 += 1;
    }
    clusters.into_values().map(|(s, m)| (s / m as f64, m)).collect()
}
