//! Mean value of `g` over the zeros of `f` from formal exponential series.
//!
//! With `f̃ = f/(c_k·exp(2πα_k z))` for the first (`k = 1`) or last (`k = n`)
//! term, `1/f̃` expands as the geometric series `Σ (1 − f̃)ᵐ`. On the far left
//! (first term) or far right (last term) of the strip this series converges
//! uniformly, and `A_k` is the constant term of
//! `g·f′/(c_k·exp(2πα_k z)) · Σ (1 − f̃)ᵐ`. The mean value is
//! `M = (Aₙ − A₁)/2π`; for `g = 1` it is `αₙ − α₁`.
//!
//! Only finitely many series terms can reach frequency zero against a fixed
//! numerator, so every computation is an exact finite truncation.

use std::collections::HashMap;

use num_traits::{Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::freqcore::{Coefficient, End, ExponentialSum, Frequency, FrequencyBasis, Rational};

/// Node expansions allowed in [`semigroup_contains`] before giving up.
pub const SEMIGROUP_NODE_BUDGET: u64 = 1_000_000;

/// A partial sum of the reciprocal series, exact for every frequency on the
/// expansion side up to `cutoff` in absolute value.
#[derive(Debug, Clone, PartialEq)]
pub struct TruncatedSeries<C> {
    pub sum: ExponentialSum<C>,
    pub cutoff: Rational,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MeanValueResult<C> {
    pub a_first: C,
    pub a_last: C,
    pub mean: C,
    /// Generators `α₁ − αᵢ` of the non-positive support semigroup.
    pub neg_generators: Vec<Frequency>,
    /// Generators `αₙ − αᵢ` of the non-negative support semigroup.
    pub pos_generators: Vec<Frequency>,
}

fn within(end: End, cutoff: &Rational) -> impl Fn(&Rational) -> bool + '_ {
    move |k: &Rational| match end {
        End::First => k <= cutoff,
        End::Last => -k <= *cutoff,
    }
}

/// `Σₘ (1 − f̃)ᵐ` truncated at `|frequency| ≤ |cutoff|`.
///
/// `ftilde` must have constant term one and, for `End::First`, only positive
/// frequencies otherwise (negative for `End::Last`).
pub fn truncated_reciprocal<C: Coefficient>(
    ftilde: &ExponentialSum<C>,
    end: End,
    cutoff: &Rational,
) -> Result<TruncatedSeries<C>> {
    if ftilde.constant_term() != C::one() {
        return Err(Error::input("reciprocal series needs a constant term equal to one"));
    }
    let basis = ftilde.basis().clone();
    let one = ExponentialSum::constant(C::one(), basis.clone());
    let tail = one.sub(ftilde)?;
    let wrong_side = tail.frequency_values().iter().any(|k| match end {
        End::First => !k.is_positive(),
        End::Last => !k.is_negative(),
    });
    if wrong_side {
        return Err(Error::input(format!(
            "1 - f~ has a frequency on the wrong side for the {end:?} expansion"
        )));
    }
    let cutoff = cutoff.abs();
    let keep = within(end, &cutoff);
    let tail = tail.filtered(&keep);

    let mut series = one.clone();
    let Some(step) = tail.min_abs_frequency() else {
        return Ok(TruncatedSeries { sum: series, cutoff: cutoff.clone() });
    };
    // the m-th power starts at frequency m·step, so it vanishes past this many rounds
    let max_rounds = (&cutoff / &step).floor().to_u64().unwrap_or(u64::MAX).saturating_add(1);
    let mut power = one;
    let mut rounds = 0u64;
    loop {
        power = power.multiply_filtered(&tail, &keep)?;
        if power.is_zero() {
            break;
        }
        rounds += 1;
        debug_assert!(rounds <= max_rounds);
        series = series.add(&power)?;
    }
    Ok(TruncatedSeries { sum: series, cutoff: cutoff.clone() })
}

/// Constant term of `numerator/(c_k·exp(2πα_k z)) · Σ (1 − f̃)ᵐ`.
///
/// This is the frequency-zero engine shared by [`constant_term_a`] (with
/// numerator `g·f′`) and the Laurent residue formula (with numerator `g·w·f′(w)`).
pub fn constant_term_of_quotient<C: Coefficient>(
    numerator: &ExponentialSum<C>,
    f: &ExponentialSum<C>,
    end: End,
) -> Result<C> {
    let lead = f
        .extreme(end)
        .ok_or_else(|| Error::input("f must be a nonzero exponential sum"))?;
    let inv = lead
        .coeff
        .try_inverse()
        .ok_or_else(|| Error::input("extreme coefficient of f is not invertible"))?;
    let p = numerator.shift(&inv, &lead.freq.neg());
    if p.is_zero() {
        return Ok(C::zero());
    }
    let cutoff = match end {
        End::First => (-p.frequency_values()[0].clone()).max(Rational::zero()),
        End::Last => p.frequency_values()[p.len() - 1].clone().max(Rational::zero()),
    };
    let ftilde = f.divide_by_extreme_term(end)?;
    let series = truncated_reciprocal(&ftilde, end, &cutoff)?.sum;
    Ok(constant_term_of_product(&p, &series))
}

/// Frequency-zero coefficient of `a·b`, without forming the product.
pub(crate) fn constant_term_of_product<C: Coefficient>(
    a: &ExponentialSum<C>,
    b: &ExponentialSum<C>,
) -> C {
    let index: HashMap<&Frequency, &C> = b.terms().iter().map(|t| (&t.freq, &t.coeff)).collect();
    a.terms().iter().fold(C::zero(), |acc, t| match index.get(&t.freq.neg()) {
        Some(c) => acc.add(&t.coeff.mul(c)),
        None => acc,
    })
}

/// `A₁` (`End::First`) or `Aₙ` (`End::Last`) for the pair `(f, g)`.
pub fn constant_term_a<C: Coefficient>(
    f: &ExponentialSum<C>,
    g: &ExponentialSum<C>,
    end: End,
) -> Result<C> {
    if f.is_zero() {
        return Err(Error::input("f must be a nonzero exponential sum"));
    }
    let numerator = g.multiply(&f.derivative())?;
    constant_term_of_quotient(&numerator, f, end)
}

/// Mean value of `g` over the zeros of `f`, `(Aₙ − A₁)/2π`.
pub fn mean_value<C: Coefficient>(
    f: &ExponentialSum<C>,
    g: &ExponentialSum<C>,
) -> Result<MeanValueResult<C>> {
    if f.is_zero() {
        return Err(Error::input("f must be a nonzero exponential sum"));
    }
    let (neg_generators, pos_generators) = support_semigroup_generators(f);
    if f.len() == 1 {
        // a single exponential never vanishes
        let a = constant_term_a(f, g, End::First)?;
        return Ok(MeanValueResult {
            a_first: a.clone(),
            a_last: a,
            mean: C::zero(),
            neg_generators,
            pos_generators,
        });
    }
    let a_first = constant_term_a(f, g, End::First)?;
    let a_last = constant_term_a(f, g, End::Last)?;
    let mean = a_last.sub(&a_first).div_two_pi();
    Ok(MeanValueResult { a_first, a_last, mean, neg_generators, pos_generators })
}

/// `αₙ − α₁` as an exact frequency.
pub fn frequency_span<C: Coefficient>(f: &ExponentialSum<C>) -> Result<Frequency> {
    match (f.extreme(End::First), f.extreme(End::Last)) {
        (Some(a), Some(b)) => Ok(b.freq.sub(&a.freq)),
        _ => Err(Error::input("f must be a nonzero exponential sum")),
    }
}

/// Mean number of zeros per unit height, `αₙ − α₁`.
pub fn mean_zero_count<C: Coefficient>(f: &ExponentialSum<C>) -> Result<f64> {
    match (f.extreme_value(End::First), f.extreme_value(End::Last)) {
        (Some(a), Some(b)) => Ok(crate::freqcore::rational_to_f64(&(b - a))),
        _ => Err(Error::input("f must be a nonzero exponential sum")),
    }
}

/// Generators `{α₁ − αᵢ}` (negative) and `{αₙ − αᵢ}` (positive), zero dropped.
pub fn support_semigroup_generators<C: Coefficient>(
    f: &ExponentialSum<C>,
) -> (Vec<Frequency>, Vec<Frequency>) {
    let (Some(first), Some(last)) = (f.extreme(End::First), f.extreme(End::Last)) else {
        return (Vec::new(), Vec::new());
    };
    let mut neg = Vec::new();
    let mut pos = Vec::new();
    for t in f.terms() {
        let a = first.freq.sub(&t.freq);
        if !a.is_zero() && !neg.contains(&a) {
            neg.push(a);
        }
        let b = last.freq.sub(&t.freq);
        if !b.is_zero() && !pos.contains(&b) {
            pos.push(b);
        }
    }
    (neg, pos)
}

/// Decides whether `alpha = Σ mᵢ·genᵢ` with integers `0 ≤ mᵢ ≤ bound`.
///
/// All generators must share one strict sign. The search is exact: candidate
/// multipliers are limited by `|remaining value| / |generator|`, and the last
/// generator is solved for directly. Exceeding [`SEMIGROUP_NODE_BUDGET`]
/// expansions is an error.
pub fn semigroup_contains(
    basis: &FrequencyBasis,
    generators: &[Frequency],
    alpha: &Frequency,
    bound: u64,
) -> Result<bool> {
    semigroup_contains_with_budget(basis, generators, alpha, bound, SEMIGROUP_NODE_BUDGET)
}

/// [`semigroup_contains`] with an explicit node budget.
pub fn semigroup_contains_with_budget(
    basis: &FrequencyBasis,
    generators: &[Frequency],
    alpha: &Frequency,
    bound: u64,
    budget: u64,
) -> Result<bool> {
    basis.check(alpha)?;
    let mut gens = Vec::with_capacity(generators.len());
    for g in generators {
        basis.check(g)?;
        let v = basis.exact_value(g);
        if !v.is_zero() {
            gens.push((g.clone(), v));
        }
    }
    let target = basis.exact_value(alpha);
    if alpha.is_zero() {
        return Ok(true);
    }
    if gens.is_empty() {
        return Ok(false);
    }
    let negative = gens[0].1.is_negative();
    if gens.iter().any(|(_, v)| v.is_negative() != negative) {
        return Err(Error::input("semigroup generators must all have the same sign"));
    }
    if target.is_zero() || target.is_negative() != negative {
        return Ok(false);
    }
    // larger steps first keeps the tree shallow
    gens.sort_by_key(|g| std::cmp::Reverse(g.1.abs()));
    let mut search = SemigroupSearch { gens: &gens, bound, nodes: 0, budget };
    search.descend(0, alpha.clone(), target.abs())
}

struct SemigroupSearch<'a> {
    gens: &'a [(Frequency, Rational)],
    bound: u64,
    nodes: u64,
    budget: u64,
}

impl SemigroupSearch<'_> {
    // `remaining` is the vector still to be represented, `magnitude` its |value|
    fn descend(&mut self, i: usize, remaining: Frequency, magnitude: Rational) -> Result<bool> {
        self.nodes += 1;
        if self.nodes > self.budget {
            return Err(Error::BudgetExhausted(self.budget));
        }
        if remaining.is_zero() {
            return Ok(true);
        }
        if i == self.gens.len() || magnitude.is_zero() {
            return Ok(false);
        }
        let (gen, value) = &self.gens[i];
        let step = value.abs();
        if i + 1 == self.gens.len() {
            let m = &magnitude / &step;
            if !m.is_integer() || m > Rational::from_integer(self.bound.into()) {
                return Ok(false);
            }
            return Ok(gen.scale(&m) == remaining);
        }
        let max_m = (&magnitude / &step).floor().to_u64().unwrap_or(u64::MAX).min(self.bound);
        for m in (0..=max_m).rev() {
            let mq = Rational::from_integer(m.into());
            let rest = remaining.sub(&gen.scale(&mq));
            let rest_mag = &magnitude - &step * &mq;
            if self.descend(i + 1, rest, rest_mag)? {
                return Ok(true);
            }
        }
        Ok(false)
    }
}
