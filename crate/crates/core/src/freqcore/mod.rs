//! Exact algebra of exponential sums `Σ cᵢ·exp(2παᵢz)` with real frequencies.
//!
//! A frequency is a vector of rationals over a [`FrequencyBasis`] of real
//! numbers. The basis values are read from decimal strings and kept as exact
//! rationals, so ordering and equality of frequencies are decided exactly.
//! The user asserts that the basis is linearly independent over ℚ; if two
//! distinct vectors ever compare equal numerically, construction fails with
//! [`Error::FrequencyTie`](crate::Error::FrequencyTie).

mod coeff;
mod numeric;
mod sum;

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

pub use coeff::{Coefficient, ExactCoeff, GaussianRational};
pub use numeric::NumericSum;
pub use sum::{normalize, End, ExpTerm, ExponentialSum};

use crate::error::{Error, Result};

pub type Rational = num_rational::BigRational;

/// Sum with complex floating point coefficients.
pub type FloatSum = ExponentialSum<num_complex::Complex64>;
/// Sum with exact coefficients (Gaussian rationals times monomials in 2π and
/// the basis values).
pub type ExactSum = ExponentialSum<ExactCoeff>;

/// Parses `"p/q"`, integer literals and plain decimals (`"-1.25"`, `"3e-2"`)
/// into an exact rational.
pub fn parse_rational(text: &str) -> Result<Rational> {
    let s = text.trim();
    if s.is_empty() {
        return Err(Error::input("empty rational literal"));
    }
    if let Some((num, den)) = s.split_once('/') {
        let num = BigInt::from_str(num.trim())
            .map_err(|_| Error::input(format!("bad numerator in {text:?}")))?;
        let den = BigInt::from_str(den.trim())
            .map_err(|_| Error::input(format!("bad denominator in {text:?}")))?;
        if den.is_zero() {
            return Err(Error::input(format!("zero denominator in {text:?}")));
        }
        return Ok(Rational::new(num, den));
    }
    parse_decimal(s).ok_or_else(|| Error::input(format!("not a rational literal: {text:?}")))
}

fn parse_decimal(s: &str) -> Option<Rational> {
    let (mantissa, exponent) = match s.find(['e', 'E']) {
        Some(pos) => (&s[..pos], s[pos + 1..].parse::<i32>().ok()?),
        None => (s, 0),
    };
    let (negative, digits) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int_part, frac_part) = digits.split_once('.').unwrap_or((digits, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return None;
    }
    if !int_part.chars().chain(frac_part.chars()).all(|c| c.is_ascii_digit()) {
        return None;
    }
    let all_digits = format!("{int_part}{frac_part}");
    let mut num = BigInt::from_str(if all_digits.is_empty() { "0" } else { &all_digits }).ok()?;
    if negative {
        num = -num;
    }
    let scale = exponent - frac_part.len() as i32;
    let ten = BigInt::from(10u32);
    let value = if scale >= 0 {
        Rational::from_integer(num * num_traits::pow(ten, scale as usize))
    } else {
        Rational::new(num, num_traits::pow(ten, (-scale) as usize))
    };
    Some(value)
}

pub(crate) fn rational_to_f64(q: &Rational) -> f64 {
    q.to_f64().unwrap_or(f64::NAN)
}

pub(crate) fn format_rational(q: &Rational) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// Ordered list of positive reals over which frequencies are expressed.
///
/// Values are given as decimal strings (30 or more significant digits is the
/// intended use for irrational values) and stored exactly.
#[derive(Debug, Clone, PartialEq)]
pub struct FrequencyBasis {
    labels: Vec<String>,
    exact: Vec<Rational>,
    values: Vec<f64>,
}

impl FrequencyBasis {
    pub fn new<S: AsRef<str>>(values: &[S]) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::input("frequency basis must not be empty"));
        }
        let mut labels = Vec::with_capacity(values.len());
        let mut exact = Vec::with_capacity(values.len());
        for v in values {
            let text = v.as_ref().trim();
            let q = parse_rational(text)?;
            if !q.is_positive() {
                return Err(Error::input(format!("basis value {text:?} is not positive")));
            }
            labels.push(text.to_string());
            exact.push(q);
        }
        let values = exact.iter().map(rational_to_f64).collect();
        Ok(FrequencyBasis { labels, exact, values })
    }

    /// The default basis `[1]`, used for commensurate problems.
    pub fn standard() -> Self {
        FrequencyBasis {
            labels: vec!["1".to_string()],
            exact: vec![Rational::one()],
            values: vec![1.0],
        }
    }

    pub fn shared(self) -> Arc<Self> {
        Arc::new(self)
    }

    pub fn len(&self) -> usize {
        self.exact.len()
    }

    pub fn is_empty(&self) -> bool {
        self.exact.is_empty()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn exact_values(&self) -> &[Rational] {
        &self.exact
    }

    /// True when basis element `k` is exactly the number one.
    pub fn is_unit(&self, k: usize) -> bool {
        self.exact[k].is_one()
    }

    /// Exact numeric value `Σ qₖ·bₖ` of a frequency (with the decimal basis
    /// values taken literally).
    pub fn exact_value(&self, freq: &Frequency) -> Rational {
        freq.coords
            .iter()
            .zip(&self.exact)
            .filter(|(q, _)| !q.is_zero())
            .fold(Rational::zero(), |acc, (q, b)| acc + q * b)
    }

    pub fn value(&self, freq: &Frequency) -> f64 {
        rational_to_f64(&self.exact_value(freq))
    }

    pub(crate) fn check(&self, freq: &Frequency) -> Result<()> {
        if freq.dim() != self.len() {
            return Err(Error::input(format!(
                "frequency has {} coordinates but the basis has {}",
                freq.dim(),
                self.len()
            )));
        }
        Ok(())
    }
}

impl Default for FrequencyBasis {
    fn default() -> Self {
        FrequencyBasis::standard()
    }
}

/// A real frequency `α = Σ qₖ·bₖ`, stored as its rational coordinates.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Frequency {
    coords: Vec<Rational>,
}

impl Frequency {
    pub fn new(coords: Vec<Rational>) -> Self {
        Frequency { coords }
    }

    pub fn zero(dim: usize) -> Self {
        Frequency { coords: vec![Rational::zero(); dim] }
    }

    /// One-dimensional frequency, for the standard basis.
    pub fn rational(q: Rational) -> Self {
        Frequency { coords: vec![q] }
    }

    pub fn integer(k: i64) -> Self {
        Frequency::rational(Rational::from_integer(k.into()))
    }

    /// `q·bₖ` in a basis of dimension `dim`.
    pub fn along(dim: usize, k: usize, q: Rational) -> Self {
        let mut f = Frequency::zero(dim);
        f.coords[k] = q;
        f
    }

    pub fn from_ints(coords: &[i64]) -> Self {
        Frequency {
            coords: coords.iter().map(|&c| Rational::from_integer(c.into())).collect(),
        }
    }

    pub fn parse<S: AsRef<str>>(coords: &[S]) -> Result<Self> {
        coords
            .iter()
            .map(|c| parse_rational(c.as_ref()))
            .collect::<Result<Vec<_>>>()
            .map(Frequency::new)
    }

    pub fn coords(&self) -> &[Rational] {
        &self.coords
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(Zero::is_zero)
    }

    pub fn add(&self, other: &Frequency) -> Frequency {
        debug_assert_eq!(self.dim(), other.dim());
        Frequency {
            coords: self.coords.iter().zip(&other.coords).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn sub(&self, other: &Frequency) -> Frequency {
        debug_assert_eq!(self.dim(), other.dim());
        Frequency {
            coords: self.coords.iter().zip(&other.coords).map(|(a, b)| a - b).collect(),
        }
    }

    pub fn neg(&self) -> Frequency {
        Frequency { coords: self.coords.iter().map(|a| -a).collect() }
    }

    pub fn scale(&self, k: &Rational) -> Frequency {
        Frequency { coords: self.coords.iter().map(|a| a * k).collect() }
    }

    /// Coordinates as `"p/q"` strings.
    pub fn to_strings(&self) -> Vec<String> {
        self.coords.iter().map(format_rational).collect()
    }
}

impl fmt::Display for Frequency {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coords.len() == 1 {
            return write!(f, "{}", format_rational(&self.coords[0]));
        }
        write!(f, "[{}]", self.to_strings().join(", "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n.into(), d.into())
    }

    #[test]
    fn parses_rational_forms() {
        assert_eq!(parse_rational("3/6").unwrap(), q(1, 2));
        assert_eq!(parse_rational("-7").unwrap(), q(-7, 1));
        assert_eq!(parse_rational("1.25").unwrap(), q(5, 4));
        assert_eq!(parse_rational("-.5").unwrap(), q(-1, 2));
        assert_eq!(parse_rational("25e-2").unwrap(), q(1, 4));
        assert_eq!(parse_rational("1.5E3").unwrap(), q(1500, 1));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("abc").is_err());
        assert!(parse_rational("").is_err());
        assert!(parse_rational(".").is_err());
    }

    #[test]
    fn basis_rejects_bad_values() {
        assert!(FrequencyBasis::new::<&str>(&[]).is_err());
        assert!(FrequencyBasis::new(&["0"]).is_err());
        assert!(FrequencyBasis::new(&["-1.5"]).is_err());
    }

    #[test]
    fn exact_value_uses_decimal_basis() {
        let basis = FrequencyBasis::new(&["1", "1.4142135623730950488016887242096980786"]).unwrap();
        assert!(basis.is_unit(0));
        assert!(!basis.is_unit(1));
        let f = Frequency::from_ints(&[-1, 1]);
        assert!((basis.value(&f) - (2f64.sqrt() - 1.0)).abs() < 1e-15);
        assert!(basis.exact_value(&f) > Rational::zero());
    }

    #[test]
    fn frequency_display() {
        assert_eq!(Frequency::rational(q(-1, 2)).to_string(), "-1/2");
        assert_eq!(Frequency::from_ints(&[0, 1]).to_string(), "[0, 1]");
    }
}
