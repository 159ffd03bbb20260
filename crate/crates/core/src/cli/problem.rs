//! Problem files: the basis, `f`, optional `g`, and the coefficient mode.
//!
//! ```json
//! {
//!   "basis": ["1", "1.41421356237309504880168872420969807857"],
//!   "mode": "float",
//!   "f": [{"coeff": [1, 0], "freq": ["0", "0"]},
//!         {"coeff": [1, 0], "freq": ["1", "0"]},
//!         {"coeff": ["1", "0"], "freq": ["0", "1"]}]
//! }
//! ```
//!
//! Coefficients are `[re, im]` pairs of JSON numbers or rational strings.
//! A frequency is a single rational (one-element basis) or one rational per
//! basis element.

use std::sync::Arc;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::freqcore::{
    parse_rational, rational_to_f64, Coefficient, ExactCoeff, ExpTerm, ExponentialSum, Frequency,
    FrequencyBasis, GaussianRational, Rational,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Exact,
    #[default]
    Float,
}

/// A number written either as a JSON number or as a rational string.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Scalar {
    Int(i64),
    Float(f64),
    Text(String),
}

impl Scalar {
    fn to_rational(&self) -> Result<Rational> {
        match self {
            Scalar::Int(k) => Ok(Rational::from_integer((*k).into())),
            // shortest round-trip decimal of the float
            Scalar::Float(x) if x.is_finite() => parse_rational(&format!("{x:e}")),
            Scalar::Float(x) => Err(Error::Input(format!("non-finite number {x}"))),
            Scalar::Text(s) => parse_rational(s),
        }
    }

    fn to_f64(&self) -> Result<f64> {
        match self {
            Scalar::Int(k) => Ok(*k as f64),
            Scalar::Float(x) => Ok(*x),
            Scalar::Text(s) => Ok(rational_to_f64(&parse_rational(s)?)),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum FreqSpec {
    Single(Scalar),
    Vector(Vec<Scalar>),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TermSpec {
    pub coeff: [Scalar; 2],
    pub freq: FreqSpec,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemFile {
    #[serde(default = "default_basis")]
    pub basis: Vec<String>,
    #[serde(default)]
    pub mode: Mode,
    pub f: Vec<TermSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub g: Option<Vec<TermSpec>>,
}

fn default_basis() -> Vec<String> {
    vec!["1".to_string()]
}

/// Coefficients buildable from a problem-file pair.
pub trait FromScalars: Coefficient {
    fn from_scalars(re: &Scalar, im: &Scalar) -> Result<Self>;
}

impl FromScalars for Complex64 {
    fn from_scalars(re: &Scalar, im: &Scalar) -> Result<Self> {
        Ok(Complex64::new(re.to_f64()?, im.to_f64()?))
    }
}

impl FromScalars for ExactCoeff {
    fn from_scalars(re: &Scalar, im: &Scalar) -> Result<Self> {
        Ok(ExactCoeff::constant(GaussianRational::new(re.to_rational()?, im.to_rational()?)))
    }
}

impl ProblemFile {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Input(format!("problem file: {e}")))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("problem file serializes")
    }

    pub fn basis(&self) -> Result<Arc<FrequencyBasis>> {
        Ok(FrequencyBasis::new(&self.basis)?.shared())
    }

    /// `(f, g)` over the declared basis; `g` defaults to the constant one.
    pub fn sums<C: FromScalars>(&self) -> Result<(ExponentialSum<C>, ExponentialSum<C>)> {
        let basis = self.basis()?;
        let f = build(&self.f, &basis)?;
        if f.is_zero() {
            return Err(Error::Input("f must have at least one nonzero term".into()));
        }
        let g = match &self.g {
            Some(terms) => build(terms, &basis)?,
            None => ExponentialSum::constant(C::one(), basis),
        };
        Ok((f, g))
    }
}

fn build<C: FromScalars>(terms: &[TermSpec], basis: &Arc<FrequencyBasis>) -> Result<ExponentialSum<C>> {
    let dim = basis.len();
    let raw = terms
        .iter()
        .map(|t| {
            let coords = match &t.freq {
                FreqSpec::Single(s) if dim == 1 => vec![s.to_rational()?],
                FreqSpec::Single(_) => {
                    return Err(Error::Input(format!(
                        "frequency must be a vector of {dim} rationals"
                    )))
                }
                FreqSpec::Vector(v) => v.iter().map(Scalar::to_rational).collect::<Result<_>>()?,
            };
            let coeff = C::from_scalars(&t.coeff[0], &t.coeff[1])?;
            Ok(ExpTerm::new(coeff, Frequency::new(coords)))
        })
        .collect::<Result<Vec<_>>>()?;
    ExponentialSum::new(raw, basis.clone())
}
