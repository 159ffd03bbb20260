use std::collections::BTreeMap;
use std::f64::consts::TAU;
use std::fmt;

use num_complex::Complex64;
use num_traits::{One, Signed, Zero};

use super::{format_rational, rational_to_f64, Frequency, FrequencyBasis, Rational};

/// Coefficient ring of an exponential sum.
///
/// Two implementations exist: [`Complex64`] for numeric pipelines and
/// [`ExactCoeff`] for exact symbolic identities. Besides ring operations a
/// coefficient must be able to absorb the factor `2πα` produced by
/// differentiation.
pub trait Coefficient: Clone + PartialEq + fmt::Debug + Send + Sync + 'static {
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, other: &Self) -> Self;
    fn sub(&self, other: &Self) -> Self;
    fn mul(&self, other: &Self) -> Self;
    fn neg(&self) -> Self;
    /// Multiplicative inverse, when it exists in the ring.
    fn try_inverse(&self) -> Option<Self>;
    /// The coefficient `2π·α`.
    fn two_pi_frequency(freq: &Frequency, basis: &FrequencyBasis) -> Self;
    /// Divides by `2π`.
    fn div_two_pi(&self) -> Self;
    fn to_complex(&self, basis: &FrequencyBasis) -> Complex64;
}

impl Coefficient for Complex64 {
    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }
    fn one() -> Self {
        Complex64::new(1.0, 0.0)
    }
    fn is_zero(&self) -> bool {
        self.re == 0.0 && self.im == 0.0
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn sub(&self, other: &Self) -> Self {
        self - other
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn neg(&self) -> Self {
        -self
    }
    fn try_inverse(&self) -> Option<Self> {
        if Coefficient::is_zero(self) || !(self.re.is_finite() && self.im.is_finite()) {
            None
        } else {
            Some(self.inv())
        }
    }
    fn two_pi_frequency(freq: &Frequency, basis: &FrequencyBasis) -> Self {
        Complex64::new(TAU * basis.value(freq), 0.0)
    }
    fn div_two_pi(&self) -> Self {
        self / TAU
    }
    fn to_complex(&self, _basis: &FrequencyBasis) -> Complex64 {
        *self
    }
}

/// `re + i·im` with rational parts.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct GaussianRational {
    pub re: Rational,
    pub im: Rational,
}

impl GaussianRational {
    pub fn new(re: Rational, im: Rational) -> Self {
        GaussianRational { re, im }
    }

    pub fn real(re: Rational) -> Self {
        GaussianRational { re, im: Rational::zero() }
    }

    pub fn from_ints(re: i64, im: i64) -> Self {
        GaussianRational {
            re: Rational::from_integer(re.into()),
            im: Rational::from_integer(im.into()),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn add(&self, o: &Self) -> Self {
        GaussianRational { re: &self.re + &o.re, im: &self.im + &o.im }
    }

    pub fn sub(&self, o: &Self) -> Self {
        GaussianRational { re: &self.re - &o.re, im: &self.im - &o.im }
    }

    pub fn mul(&self, o: &Self) -> Self {
        GaussianRational {
            re: &self.re * &o.re - &self.im * &o.im,
            im: &self.re * &o.im + &self.im * &o.re,
        }
    }

    pub fn neg(&self) -> Self {
        GaussianRational { re: -&self.re, im: -&self.im }
    }

    pub fn inverse(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        let norm = &self.re * &self.re + &self.im * &self.im;
        Some(GaussianRational { re: &self.re / &norm, im: -&self.im / &norm })
    }

    pub fn to_complex(&self) -> Complex64 {
        Complex64::new(rational_to_f64(&self.re), rational_to_f64(&self.im))
    }
}

impl fmt::Display for GaussianRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.re.is_zero(), self.im.is_zero()) {
            (_, true) => write!(f, "{}", format_rational(&self.re)),
            (true, false) => write!(f, "{}i", format_rational(&self.im)),
            (false, false) => {
                let sign = if self.im.is_negative() { '-' } else { '+' };
                write!(
                    f,
                    "({}{}{}i)",
                    format_rational(&self.re),
                    sign,
                    format_rational(&self.im.abs())
                )
            }
        }
    }
}

/// Exponent vector: index 0 is the power of `2π`, index `k + 1` the power of
/// basis value `k`. Trailing zeros are trimmed so equal monomials compare equal.
type Monomial = Vec<i32>;

fn trim(mut m: Monomial) -> Monomial {
    while m.last() == Some(&0) {
        m.pop();
    }
    m
}

fn monomial_mul(a: &[i32], b: &[i32]) -> Monomial {
    let len = a.len().max(b.len());
    let out = (0..len)
        .map(|i| a.get(i).copied().unwrap_or(0) + b.get(i).copied().unwrap_or(0))
        .collect();
    trim(out)
}

/// Exact coefficient: a Laurent polynomial in `2π` and the basis values with
/// Gaussian rational coefficients.
///
/// Input coefficients are constants. Differentiation multiplies by
/// `2π·Σ qₖ·bₖ`, which stays representable; basis values equal to one are
/// folded into the constant. Structural equality is exact equality under the
/// independence assumption on the basis.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ExactCoeff {
    terms: BTreeMap<Monomial, GaussianRational>,
}

impl ExactCoeff {
    pub fn constant(c: GaussianRational) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(Vec::new(), c);
        }
        ExactCoeff { terms }
    }

    pub fn from_rational(q: Rational) -> Self {
        ExactCoeff::constant(GaussianRational::real(q))
    }

    pub fn from_ints(re: i64, im: i64) -> Self {
        ExactCoeff::constant(GaussianRational::from_ints(re, im))
    }

    /// `2π·α` for a frequency `α`.
    pub fn two_pi_times(freq: &Frequency, basis: &FrequencyBasis) -> Self {
        <Self as Coefficient>::two_pi_frequency(freq, basis)
    }

    /// The constant part when this coefficient has no `2π` or basis factors.
    pub fn as_constant(&self) -> Option<GaussianRational> {
        match self.terms.len() {
            0 => Some(GaussianRational::default()),
            1 => self.terms.get(&Vec::new()).cloned(),
            _ => None,
        }
    }

    /// Rational coordinates `w` such that this coefficient equals `Σ wₖ·bₖ`,
    /// provided it is real and linear in the basis values. Used to read a mean
    /// value back as a frequency.
    pub fn as_frequency(&self, basis: &FrequencyBasis) -> Option<Frequency> {
        let mut coords = vec![Rational::zero(); basis.len()];
        let unit = (0..basis.len()).find(|&k| basis.is_unit(k));
        for (mono, c) in &self.terms {
            if !c.im.is_zero() {
                return None;
            }
            let slot = match mono.as_slice() {
                [] => unit?,
                [0, rest @ ..] => {
                    let ones: Vec<usize> =
                        rest.iter().enumerate().filter(|(_, &e)| e != 0).map(|(i, _)| i).collect();
                    if ones.len() != 1 || rest[ones[0]] != 1 {
                        return None;
                    }
                    ones[0]
                }
                _ => return None,
            };
            coords[slot] += &c.re;
        }
        Some(Frequency::new(coords))
    }

    fn insert(terms: &mut BTreeMap<Monomial, GaussianRational>, m: Monomial, c: GaussianRational) {
        use std::collections::btree_map::Entry;
        match terms.entry(m) {
            Entry::Vacant(v) => {
                if !c.is_zero() {
                    v.insert(c);
                }
            }
            Entry::Occupied(mut o) => {
                let s = o.get().add(&c);
                if s.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }

    fn map_monomials(&self, shift: &[i32]) -> Self {
        ExactCoeff {
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (monomial_mul(m, shift), c.clone()))
                .collect(),
        }
    }
}

impl Coefficient for ExactCoeff {
    fn zero() -> Self {
        ExactCoeff::default()
    }
    fn one() -> Self {
        ExactCoeff::from_ints(1, 0)
    }
    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
    fn add(&self, other: &Self) -> Self {
        let mut terms = self.terms.clone();
        for (m, c) in &other.terms {
            Self::insert(&mut terms, m.clone(), c.clone());
        }
        ExactCoeff { terms }
    }
    fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }
    fn mul(&self, other: &Self) -> Self {
        let mut terms = BTreeMap::new();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                Self::insert(&mut terms, monomial_mul(ma, mb), ca.mul(cb));
            }
        }
        ExactCoeff { terms }
    }
    fn neg(&self) -> Self {
        ExactCoeff {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), c.neg())).collect(),
        }
    }
    fn try_inverse(&self) -> Option<Self> {
        if self.terms.len() != 1 {
            return None;
        }
        let (m, c) = self.terms.iter().next()?;
        let inv_m = trim(m.iter().map(|e| -e).collect());
        let mut terms = BTreeMap::new();
        terms.insert(inv_m, c.inverse()?);
        Some(ExactCoeff { terms })
    }
    fn two_pi_frequency(freq: &Frequency, basis: &FrequencyBasis) -> Self {
        let mut terms = BTreeMap::new();
        for (k, q) in freq.coords().iter().enumerate() {
            if q.is_zero() {
                continue;
            }
            let mono = if basis.is_unit(k) {
                vec![1]
            } else {
                let mut m = vec![0; k + 2];
                m[0] = 1;
                m[k + 1] = 1;
                m
            };
            Self::insert(&mut terms, mono, GaussianRational::real(q.clone()));
        }
        ExactCoeff { terms }
    }
    fn div_two_pi(&self) -> Self {
        self.map_monomials(&[-1])
    }
    fn to_complex(&self, basis: &FrequencyBasis) -> Complex64 {
        let values = basis.values();
        self.terms
            .iter()
            .map(|(m, c)| {
                let mut factor = 1.0;
                for (i, &e) in m.iter().enumerate() {
                    if e == 0 {
                        continue;
                    }
                    let base = if i == 0 { TAU } else { values[i - 1] };
                    factor *= base.powi(e);
                }
                c.to_complex() * factor
            })
            .sum()
    }
}

impl fmt::Display for ExactCoeff {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (m, c) in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            let mut factors = Vec::new();
            for (i, &e) in m.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let name = if i == 0 { "2pi".to_string() } else { format!("b{}", i - 1) };
                factors.push(if e == 1 { name } else { format!("{name}^{e}") });
            }
            if factors.is_empty() {
                write!(f, "{c}")?;
            } else if c.im.is_zero() && c.re.is_one() {
                write!(f, "{}", factors.join("*"))?;
            } else {
                write!(f, "{c}*{}", factors.join("*"))?;
            }
        }
        Ok(())
    }
}
