use std::f64::consts::TAU;

use num_complex::Complex64;

/// Floating point snapshot of an exponential sum, precompiled for the hot
/// loops of the zero finder: each term is stored as `(c, 2πα)`.
#[derive(Debug, Clone, PartialEq)]
pub struct NumericSum {
    terms: Vec<(Complex64, f64)>,
    freqs: Vec<f64>,
}

impl NumericSum {
    /// `terms` are `(coefficient, α)` pairs sorted by `α`.
    pub fn new(terms: Vec<(Complex64, f64)>) -> Self {
        let freqs = terms.iter().map(|t| t.1).collect();
        NumericSum {
            terms: terms.into_iter().map(|(c, a)| (c, TAU * a)).collect(),
            freqs,
        }
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficients(&self) -> impl Iterator<Item = Complex64> + '_ {
        self.terms.iter().map(|t| t.0)
    }

    /// The frequencies `α`, ascending.
    pub fn frequencies(&self) -> &[f64] {
        &self.freqs
    }

    /// `αₙ − α₁`.
    pub fn span(&self) -> f64 {
        match (self.freqs.first(), self.freqs.last()) {
            (Some(a), Some(b)) => b - a,
            _ => 0.0,
        }
    }

    pub fn max_abs_frequency(&self) -> f64 {
        self.freqs.iter().fold(0.0, |m, a| m.max(a.abs()))
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        self.terms.iter().map(|&(c, w)| c * (z * w).exp()).sum()
    }

    /// `(f(z), f′(z))`.
    pub fn eval_with_derivative(&self, z: Complex64) -> (Complex64, Complex64) {
        let mut f = Complex64::new(0.0, 0.0);
        let mut df = Complex64::new(0.0, 0.0);
        for &(c, w) in &self.terms {
            let t = c * (z * w).exp();
            f += t;
            df += t * w;
        }
        (f, df)
    }

    /// `Σ |cᵢ|·exp(2παᵢ·x)`, the natural magnitude of `f` on `Re z = x`.
    pub fn scale(&self, x: f64) -> f64 {
        self.terms.iter().map(|&(c, w)| c.norm() * (w * x).exp()).sum()
    }

    /// `|f(z)|` relative to [`scale`](Self::scale).
    pub fn relative_abs(&self, z: Complex64) -> f64 {
        self.eval(z).norm() / self.scale(z.re)
    }
}
