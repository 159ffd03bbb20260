use std::collections::HashMap;
use std::sync::Arc;

use num_complex::Complex64;
use num_traits::{Signed, Zero};

use super::{Coefficient, ExactCoeff, Frequency, FrequencyBasis, NumericSum, Rational};
use crate::error::{Error, Result};

/// Which extreme term of a sum: the lowest frequency (`First`, index 1) or the
/// highest (`Last`, index n).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum End {
    First,
    Last,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExpTerm<C> {
    pub coeff: C,
    pub freq: Frequency,
}

impl<C> ExpTerm<C> {
    pub fn new(coeff: C, freq: Frequency) -> Self {
        ExpTerm { coeff, freq }
    }
}

/// A finite exponential sum `Σ cᵢ·exp(2παᵢz)`.
///
/// Terms are kept sorted by strictly increasing numeric frequency, with
/// nonzero coefficients and pairwise distinct frequency vectors. The empty sum
/// is the zero function.
#[derive(Debug, Clone)]
pub struct ExponentialSum<C> {
    basis: Arc<FrequencyBasis>,
    terms: Vec<ExpTerm<C>>,
    // exact numeric value of each frequency, parallel to `terms`
    keys: Vec<Rational>,
}

impl<C: PartialEq> PartialEq for ExponentialSum<C> {
    fn eq(&self, other: &Self) -> bool {
        self.terms == other.terms && same_basis(&self.basis, &other.basis)
    }
}

fn same_basis(a: &Arc<FrequencyBasis>, b: &Arc<FrequencyBasis>) -> bool {
    Arc::ptr_eq(a, b) || a == b
}

/// Merges equal frequencies, drops zero coefficients and sorts by frequency.
pub fn normalize<C: Coefficient>(
    raw_terms: Vec<ExpTerm<C>>,
    basis: Arc<FrequencyBasis>,
) -> Result<ExponentialSum<C>> {
    ExponentialSum::new(raw_terms, basis)
}

impl<C: Coefficient> ExponentialSum<C> {
    pub fn new(raw_terms: Vec<ExpTerm<C>>, basis: Arc<FrequencyBasis>) -> Result<Self> {
        for t in &raw_terms {
            basis.check(&t.freq)?;
        }
        let mut merged: HashMap<Frequency, C> = HashMap::with_capacity(raw_terms.len());
        for t in raw_terms {
            merged
                .entry(t.freq)
                .and_modify(|c| *c = c.add(&t.coeff))
                .or_insert(t.coeff);
        }
        let entries = merged
            .into_iter()
            .map(|(freq, coeff)| {
                let key = basis.exact_value(&freq);
                (freq, coeff, key)
            })
            .collect();
        Self::from_entries(basis, entries)
    }

    pub fn zero(basis: Arc<FrequencyBasis>) -> Self {
        ExponentialSum { basis, terms: Vec::new(), keys: Vec::new() }
    }

    /// The constant function `c`.
    pub fn constant(c: C, basis: Arc<FrequencyBasis>) -> Self {
        let dim = basis.len();
        Self::monomial(c, Frequency::zero(dim), basis).expect("zero frequency matches basis")
    }

    /// The single term `c·exp(2παz)`.
    pub fn monomial(c: C, freq: Frequency, basis: Arc<FrequencyBasis>) -> Result<Self> {
        Self::new(vec![ExpTerm::new(c, freq)], basis)
    }

    // Entries must have distinct frequency vectors.
    fn from_entries(basis: Arc<FrequencyBasis>, entries: Vec<(Frequency, C, Rational)>) -> Result<Self> {
        let mut entries: Vec<_> = entries.into_iter().filter(|(_, c, _)| !c.is_zero()).collect();
        entries.sort_by(|a, b| a.2.cmp(&b.2).then_with(|| a.0.cmp(&b.0)));
        for pair in entries.windows(2) {
            if pair[0].2 == pair[1].2 {
                return Err(Error::FrequencyTie(pair[0].0.to_string(), pair[1].0.to_string()));
            }
        }
        let mut terms = Vec::with_capacity(entries.len());
        let mut keys = Vec::with_capacity(entries.len());
        for (freq, coeff, key) in entries {
            terms.push(ExpTerm { coeff, freq });
            keys.push(key);
        }
        Ok(ExponentialSum { basis, terms, keys })
    }

    pub fn basis(&self) -> &Arc<FrequencyBasis> {
        &self.basis
    }

    pub fn terms(&self) -> &[ExpTerm<C>] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// True for the zero function.
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Exact numeric values of the frequencies, ascending.
    pub fn frequency_values(&self) -> &[Rational] {
        &self.keys
    }

    pub fn frequency_f64(&self, i: usize) -> f64 {
        super::rational_to_f64(&self.keys[i])
    }

    pub fn extreme(&self, end: End) -> Option<&ExpTerm<C>> {
        match end {
            End::First => self.terms.first(),
            End::Last => self.terms.last(),
        }
    }

    pub fn extreme_value(&self, end: End) -> Option<&Rational> {
        match end {
            End::First => self.keys.first(),
            End::Last => self.keys.last(),
        }
    }

    /// Coefficient of `exp(2παz)`, zero when absent.
    pub fn coefficient_of(&self, freq: &Frequency) -> C {
        let key = self.basis.exact_value(freq);
        match self.keys.binary_search(&key) {
            Ok(i) if self.terms[i].freq == *freq => self.terms[i].coeff.clone(),
            _ => C::zero(),
        }
    }

    pub fn constant_term(&self) -> C {
        self.coefficient_of(&Frequency::zero(self.basis.len()))
    }

    fn check_basis(&self, other: &Self) -> Result<()> {
        if same_basis(&self.basis, &other.basis) {
            Ok(())
        } else {
            Err(Error::BasisMismatch)
        }
    }

    /// `Σ cᵢ·exp(2παᵢz)` in floating point.
    pub fn evaluate(&self, z: Complex64) -> Complex64 {
        self.terms
            .iter()
            .map(|t| {
                let w = std::f64::consts::TAU * self.basis.value(&t.freq);
                t.coeff.to_complex(&self.basis) * (z * w).exp()
            })
            .sum()
    }

    /// Term-wise `(c, α) ↦ (2πα·c, α)`.
    pub fn derivative(&self) -> Self {
        let mut terms = Vec::with_capacity(self.terms.len());
        let mut keys = Vec::with_capacity(self.terms.len());
        for (t, key) in self.terms.iter().zip(&self.keys) {
            let c = t.coeff.mul(&C::two_pi_frequency(&t.freq, &self.basis));
            if !c.is_zero() {
                terms.push(ExpTerm { coeff: c, freq: t.freq.clone() });
                keys.push(key.clone());
            }
        }
        ExponentialSum { basis: self.basis.clone(), terms, keys }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_basis(other)?;
        let mut merged: HashMap<&Frequency, (C, &Rational)> = HashMap::new();
        for (t, k) in self.terms.iter().zip(&self.keys).chain(other.terms.iter().zip(&other.keys)) {
            merged
                .entry(&t.freq)
                .and_modify(|e| e.0 = e.0.add(&t.coeff))
                .or_insert((t.coeff.clone(), k));
        }
        let entries = merged.into_iter().map(|(f, (c, k))| (f.clone(), c, k.clone())).collect();
        Self::from_entries(self.basis.clone(), entries)
    }

    pub fn neg(&self) -> Self {
        ExponentialSum {
            basis: self.basis.clone(),
            terms: self
                .terms
                .iter()
                .map(|t| ExpTerm { coeff: t.coeff.neg(), freq: t.freq.clone() })
                .collect(),
            keys: self.keys.clone(),
        }
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: &C) -> Self {
        let mut out = ExponentialSum::zero(self.basis.clone());
        for (t, k) in self.terms.iter().zip(&self.keys) {
            let coeff = t.coeff.mul(c);
            if !coeff.is_zero() {
                out.terms.push(ExpTerm { coeff, freq: t.freq.clone() });
                out.keys.push(k.clone());
            }
        }
        out
    }

    /// Multiplies by `c·exp(2παz)`.
    pub fn shift(&self, c: &C, freq: &Frequency) -> Self {
        let dk = self.basis.exact_value(freq);
        let mut out = self.scale(c);
        for (t, k) in out.terms.iter_mut().zip(out.keys.iter_mut()) {
            t.freq = t.freq.add(freq);
            *k += &dk;
        }
        out
    }

    /// Formal product; frequency vectors add componentwise.
    pub fn multiply(&self, other: &Self) -> Result<Self> {
        self.multiply_filtered(other, |_| true)
    }

    /// Product keeping only terms whose exact frequency value passes `keep`.
    pub(crate) fn multiply_filtered<F>(&self, other: &Self, keep: F) -> Result<Self>
    where
        F: Fn(&Rational) -> bool,
    {
        self.check_basis(other)?;
        let mut merged: HashMap<Frequency, (C, Rational)> = HashMap::new();
        for (a, ka) in self.terms.iter().zip(&self.keys) {
            for (b, kb) in other.terms.iter().zip(&other.keys) {
                let key = ka + kb;
                if !keep(&key) {
                    continue;
                }
                let c = a.coeff.mul(&b.coeff);
                merged
                    .entry(a.freq.add(&b.freq))
                    .and_modify(|e| e.0 = e.0.add(&c))
                    .or_insert((c, key));
            }
        }
        let entries = merged.into_iter().map(|(f, (c, k))| (f, c, k)).collect();
        Self::from_entries(self.basis.clone(), entries)
    }

    /// Terms whose frequency value passes `keep`.
    pub(crate) fn filtered<F>(&self, keep: F) -> Self
    where
        F: Fn(&Rational) -> bool,
    {
        let mut out = ExponentialSum::zero(self.basis.clone());
        for (t, k) in self.terms.iter().zip(&self.keys) {
            if keep(k) {
                out.terms.push(t.clone());
                out.keys.push(k.clone());
            }
        }
        out
    }

    /// `f / (c_k·exp(2πα_k z))` for the first or last term; the result has
    /// constant term exactly one.
    pub fn divide_by_extreme_term(&self, end: End) -> Result<Self> {
        let lead = self
            .extreme(end)
            .ok_or_else(|| Error::input("cannot divide the zero sum by its extreme term"))?;
        let inv = lead.coeff.try_inverse().ok_or_else(|| {
            Error::input(format!("extreme coefficient {:?} is not invertible", lead.coeff))
        })?;
        let mut out = self.shift(&inv, &lead.freq.neg());
        let pos = match end {
            End::First => 0,
            End::Last => out.terms.len() - 1,
        };
        // c/c may round away from one in floating point
        out.terms[pos].coeff = C::one();
        Ok(out)
    }

    /// The sum representing `z ↦ f(−z)`.
    pub fn reflect(&self) -> Self {
        let terms = self
            .terms
            .iter()
            .rev()
            .map(|t| ExpTerm { coeff: t.coeff.clone(), freq: t.freq.neg() })
            .collect();
        let keys = self.keys.iter().rev().map(|k| -k).collect();
        ExponentialSum { basis: self.basis.clone(), terms, keys }
    }

    /// Smallest positive gap `min |αᵢ|` over nonzero frequencies.
    pub(crate) fn min_abs_frequency(&self) -> Option<Rational> {
        self.keys.iter().filter(|k| !k.is_zero()).map(|k| k.abs()).min()
    }

    /// Floating point copy of the coefficients, frequencies unchanged.
    pub fn to_float(&self) -> ExponentialSum<Complex64> {
        ExponentialSum {
            basis: self.basis.clone(),
            terms: self
                .terms
                .iter()
                .map(|t| ExpTerm { coeff: t.coeff.to_complex(&self.basis), freq: t.freq.clone() })
                .collect(),
            keys: self.keys.clone(),
        }
    }

    /// Compiled form for fast repeated evaluation.
    pub fn numeric(&self) -> NumericSum {
        NumericSum::new(
            self.terms
                .iter()
                .zip(&self.keys)
                .map(|(t, k)| (t.coeff.to_complex(&self.basis), super::rational_to_f64(k)))
                .collect(),
        )
    }
}

impl ExponentialSum<ExactCoeff> {
    /// Exact sum from Gaussian-rational coefficients.
    pub fn from_exact_terms(
        terms: Vec<(super::GaussianRational, Frequency)>,
        basis: Arc<FrequencyBasis>,
    ) -> Result<Self> {
        Self::new(
            terms.into_iter().map(|(c, f)| ExpTerm::new(ExactCoeff::constant(c), f)).collect(),
            basis,
        )
    }
}

impl ExponentialSum<Complex64> {
    /// Convenience constructor over the standard basis with rational
    /// frequencies given as `(numerator, denominator)`.
    pub fn from_rational_terms(terms: &[(Complex64, i64, i64)]) -> Result<Self> {
        let basis = FrequencyBasis::standard().shared();
        let raw = terms
            .iter()
            .map(|&(c, p, q)| {
                if q == 0 {
                    return Err(Error::input("zero denominator"));
                }
                Ok(ExpTerm::new(c, Frequency::rational(Rational::new(p.into(), q.into()))))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(raw, basis)
    }
}
