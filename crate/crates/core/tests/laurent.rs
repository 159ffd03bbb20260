use expsum::laurent::{
    mean_via_substitution, residue_formula_sum, roots_nonzero, substitute, sum_over_roots,
};
use expsum::{mean_value, Error, FloatSum, LaurentPolynomial};
use num_complex::Complex64;
use proptest::prelude::*;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn real_poly(low: i64, coeffs: &[f64]) -> LaurentPolynomial {
    let cs: Vec<_> = coeffs.iter().map(|&x| c(x, 0.0)).collect();
    LaurentPolynomial::from_coeffs(low, &cs)
}

/// Coefficients of `Π (w − rᵢ)`, constant term first.
fn expand(roots: &[Complex64]) -> Vec<Complex64> {
    let mut p = vec![c(1.0, 0.0)];
    for &r in roots {
        let mut next = vec![c(0.0, 0.0); p.len() + 1];
        for (k, &a) in p.iter().enumerate() {
            next[k + 1] += a;
            next[k] -= a * r;
        }
        p = next;
    }
    p
}

fn rational_sum(terms: &[(f64, i64, i64)]) -> FloatSum {
    let raw: Vec<_> = terms.iter().map(|&(x, p, q)| (c(x, 0.0), p, q)).collect();
    FloatSum::from_rational_terms(&raw).unwrap()
}

#[test]
fn roots_examples() {
    let mut r = roots_nonzero(&real_poly(0, &[6.0, -5.0, 1.0])).unwrap();
    r.sort_by(|a, b| a.0.re.total_cmp(&b.0.re));
    assert_eq!(r.len(), 2);
    assert!((r[0].0 - c(2.0, 0.0)).norm() < 1e-10 && r[0].1 == 1);
    assert!((r[1].0 - c(3.0, 0.0)).norm() < 1e-10 && r[1].1 == 1);

    let r = roots_nonzero(&real_poly(-1, &[-1.0, 1.0])).unwrap();
    assert_eq!(r.len(), 1);
    assert!((r[0].0 - c(1.0, 0.0)).norm() < 1e-12);

    assert!(roots_nonzero(&real_poly(2, &[1.0])).unwrap().is_empty());
    assert!(roots_nonzero(&LaurentPolynomial::new([])).is_err());
}

#[test]
fn sum_over_roots_examples() {
    let f = real_poly(0, &[2.0, -3.0, 1.0]);
    assert!((sum_over_roots(&f, &real_poly(1, &[1.0])).unwrap() - c(3.0, 0.0)).norm() < 1e-10);
    let one = real_poly(0, &[1.0]);
    let g = real_poly(-2, &[1.0, 0.5, 2.0, 0.0, 1.0]);
    assert!((sum_over_roots(&g, &one).unwrap() - c(4.0, 0.0)).norm() < 1e-9);
    let lin = real_poly(0, &[-1.0, 1.0]);
    assert!((sum_over_roots(&lin, &real_poly(-1, &[1.0])).unwrap() - c(1.0, 0.0)).norm() < 1e-12);
}

#[test]
fn residue_examples() {
    let f = real_poly(0, &[2.0, -3.0, 1.0]);
    assert!((residue_formula_sum(&f, &real_poly(1, &[1.0])).unwrap() - c(3.0, 0.0)).norm() < 1e-12);
    let g = real_poly(-2, &[1.0, 0.5, 2.0, 0.0, 1.0]);
    assert!((residue_formula_sum(&g, &real_poly(0, &[1.0])).unwrap() - c(4.0, 0.0)).norm() < 1e-12);
}

#[test]
fn substitution_examples() {
    let f = rational_sum(&[(6.0, 0, 1), (-5.0, 1, 1), (1.0, 2, 1)]);
    let g = rational_sum(&[(1.0, 1, 1)]);
    assert!((mean_via_substitution(&f, &g).unwrap() - c(5.0, 0.0)).norm() < 1e-10);

    let two = rational_sum(&[(1.0, 0, 1), (1.0, 1, 1)]);
    let one = rational_sum(&[(1.0, 0, 1)]);
    assert!((mean_via_substitution(&two, &one).unwrap() - c(1.0, 0.0)).norm() < 1e-12);

    let half = rational_sum(&[(1.0, 0, 1), (1.0, 1, 2)]);
    let (q, pf, _) = substitute(&half, &one).unwrap();
    assert_eq!(q, 2);
    assert_eq!(pf.max_exponent(), Some(1));
    assert!((mean_via_substitution(&half, &one).unwrap() - c(0.5, 0.0)).norm() < 1e-12);
}

#[test]
fn substitution_rejects_irrational() {
    let basis = expsum::FrequencyBasis::new(&["1", "1.4142135623730950488016887242096980786"]).unwrap().shared();
    let f = FloatSum::new(
        vec![
            expsum::ExpTerm::new(c(1.0, 0.0), expsum::Frequency::from_ints(&[0, 0])),
            expsum::ExpTerm::new(c(1.0, 0.0), expsum::Frequency::from_ints(&[0, 1])),
        ],
        basis.clone(),
    )
    .unwrap();
    let one = FloatSum::constant(c(1.0, 0.0), basis);
    assert!(matches!(mean_via_substitution(&f, &one), Err(Error::Input(_))));
}

fn coeff() -> impl Strategy<Value = Complex64> {
    (0.5f64..2.0, 0.0f64..std::f64::consts::TAU).prop_map(|(r, t)| Complex64::from_polar(r, t))
}

fn laurent(max_span: usize) -> impl Strategy<Value = LaurentPolynomial> {
    (-3i64..=3, prop::collection::vec(coeff(), 1..=max_span + 1))
        .prop_map(|(low, cs)| LaurentPolynomial::from_coeffs(low, &cs))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn residues_agree_with_roots(f in laurent(6), g in laurent(4)) {
        let a = residue_formula_sum(&f, &g).unwrap();
        let b = sum_over_roots(&f, &g).unwrap();
        prop_assert!((a - b).norm() < 1e-8, "residues {a} vs roots {b}");
    }

    #[test]
    fn root_count_is_the_span(f in laurent(6)) {
        let total: u32 = roots_nonzero(&f).unwrap().iter().map(|r| r.1).sum();
        prop_assert_eq!(total as i64, f.span());
    }

    #[test]
    fn recovers_planted_roots(roots in prop::collection::vec(coeff(), 1..=6), low in -2i64..=2) {
        // well separated planted roots
        let separated = roots.iter().enumerate().all(|(i, a)| roots[..i].iter().all(|b| (a - b).norm() > 0.05));
        prop_assume!(separated);
        let p = LaurentPolynomial::from_coeffs(low, &expand(&roots));
        let found = roots_nonzero(&p).unwrap();
        prop_assert_eq!(found.len(), roots.len());
        for r in &roots {
            let nearest = found.iter().map(|(w, _)| (w - r).norm()).fold(f64::INFINITY, f64::min);
            prop_assert!(nearest < 1e-7, "planted root {r} missing, nearest {nearest}");
        }
    }

    #[test]
    fn bridge_identity(
        f in prop::collection::vec((coeff(), -4i64..=4, 1i64..=3), 2..=4),
        g in prop::collection::vec((coeff(), -3i64..=3, 1i64..=3), 1..=2),
    ) {
        let fs = FloatSum::new(f.iter().map(|&(c, p, q)| expsum::ExpTerm::new(c, expsum::Frequency::rational(expsum::Rational::new(p.into(), q.into())))).collect(), expsum::FrequencyBasis::standard().shared()).unwrap();
        let gs = FloatSum::new(g.iter().map(|&(c, p, q)| expsum::ExpTerm::new(c, expsum::Frequency::rational(expsum::Rational::new(p.into(), q.into())))).collect(), expsum::FrequencyBasis::standard().shared()).unwrap();
        prop_assume!(fs.len() >= 2);
        let m = mean_value(&fs, &gs).unwrap().mean;
        let s = mean_via_substitution(&fs, &gs).unwrap();
        prop_assert!((m - s).norm() < 1e-9, "mean {m} vs substitution {s}");
    }
}
