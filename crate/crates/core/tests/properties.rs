use beauville_core::exact::{MPoly, QMatrix, Rat, RatFunc};
use beauville_core::poisson::canonical_bracket;
use beauville_core::poisson::PoissonElem;
use beauville_core::quantize::{dual_mul, DualNum, HElem};
use beauville_core::weyl::{do_compose, RatDiffOp};
use proptest::prelude::*;

fn rat() -> impl Strategy<Value = Rat> {
    (-1_000_000_000i64..1_000_000_000, 1i64..1_000_000).prop_map(|(n, d)| Rat::new(n, d))
}

fn big_rat() -> impl Strategy<Value = Rat> {
    (any::<i64>(), 1i64..i64::MAX).prop_map(|(n, d)| Rat::new(n, d))
}

/// Polynomial in `nvars` variables, total degree ≤ 2, small integer coefficients.
fn poly(nvars: usize) -> impl Strategy<Value = MPoly> {
    let monos: Vec<Vec<u16>> = (0..3u16.pow(nvars as u32))
        .map(|mut c| {
            (0..nvars)
                .map(|_| {
                    let e = c % 3;
                    c /= 3;
                    e
                })
                .collect::<Vec<u16>>()
        })
        .filter(|e| e.iter().sum::<u16>() <= 2)
        .collect();
    let k = monos.len();
    proptest::collection::vec(-3i64..=3, k).prop_map(move |cs| {
        MPoly::from_terms(
            nvars,
            cs.into_iter()
                .zip(monos.clone())
                .map(|(c, e)| (Rat::from_int(c), e)),
        )
    })
}

fn ratfunc(nvars: usize) -> impl Strategy<Value = RatFunc> {
    (poly(nvars), poly(nvars)).prop_filter_map("zero denominator", |(n, d)| {
        (!d.is_zero()).then(|| RatFunc::new(n, d))
    })
}

fn one_var_op() -> impl Strategy<Value = RatDiffOp> {
    proptest::collection::vec(ratfunc(1), 3).prop_map(|cs| {
        RatDiffOp::from_terms(
            1,
            cs.into_iter().enumerate().map(|(j, c)| (vec![j as u16], c)),
        )
    })
}

fn helem() -> impl Strategy<Value = HElem> {
    proptest::collection::vec((0u16..3, 0u32..3, poly(1)), 0..5).prop_map(|ts| {
        ts.into_iter().fold(HElem::zero(3), |acc, (j, v, p)| {
            acc.add(&HElem::term(3, j, v + j as u32, RatFunc::from_poly(p)))
        })
    })
}

fn pe(f: RatFunc) -> PoissonElem {
    PoissonElem::new(1, f).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn rat_field_axioms(a in big_rat(), b in big_rat(), c in rat()) {
        prop_assert_eq!(&a + &b, &b + &a);
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert!((&a - &a).is_zero());
        if let Some(r) = a.recip() {
            prop_assert!((&a * &r).is_one());
        }
    }

    #[test]
    fn rat_text_roundtrip(a in big_rat()) {
        prop_assert_eq!(a.to_string().parse::<Rat>().unwrap(), a);
    }

    #[test]
    fn ratfunc_field_axioms(a in ratfunc(2), b in ratfunc(2), c in ratfunc(2)) {
        prop_assert_eq!(a.add(&b), b.add(&a));
        prop_assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
        prop_assert_eq!(a.mul(&b.add(&c)), a.mul(&b).add(&a.mul(&c)));
        prop_assert!(a.sub(&a).is_zero());
        if let Some(inv) = a.inv() {
            prop_assert_eq!(a.mul(&inv), RatFunc::one(2));
        }
    }

    #[test]
    fn derivative_is_a_derivation(a in ratfunc(2), b in ratfunc(2)) {
        let lhs = a.mul(&b).partial_derivative(1);
        let rhs = a.partial_derivative(1).mul(&b).add(&a.mul(&b.partial_derivative(1)));
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn compose_is_associative(a in one_var_op(), b in one_var_op(), c in one_var_op()) {
        let l = do_compose(&do_compose(&a, &b), &c);
        let r = do_compose(&a, &do_compose(&b, &c));
        prop_assert!(l.sub(&r).is_zero());
    }

    #[test]
    fn compose_matches_application(a in one_var_op(), b in one_var_op(), f in ratfunc(1)) {
        prop_assert_eq!(do_compose(&a, &b).apply(&f), a.apply(&b.apply(&f)));
    }

    #[test]
    fn bracket_is_antisymmetric_leibniz_jacobi(f in ratfunc(2), g in ratfunc(2), h in ratfunc(2)) {
        let fg = canonical_bracket(&f, &g);
        prop_assert!(fg.add(&canonical_bracket(&g, &f)).is_zero());
        let leib = canonical_bracket(&f, &g.mul(&h))
            .sub(&canonical_bracket(&f, &g).mul(&h))
            .sub(&g.mul(&canonical_bracket(&f, &h)));
        prop_assert!(leib.is_zero());
        let jac = canonical_bracket(&f, &canonical_bracket(&g, &h))
            .add(&canonical_bracket(&g, &canonical_bracket(&h, &f)))
            .add(&canonical_bracket(&h, &fg));
        prop_assert!(jac.is_zero());
    }

    #[test]
    fn dual_numbers_associate(a in ratfunc(2), b in ratfunc(2), c in ratfunc(2), s in ratfunc(2)) {
        let x = DualNum::new(pe(a), pe(s));
        let y = DualNum::lift(pe(b));
        let z = DualNum::new(pe(c.clone()), pe(c));
        prop_assert_eq!(dual_mul(&dual_mul(&x, &y), &z), dual_mul(&x, &dual_mul(&y, &z)));
    }

    #[test]
    fn rees_product_is_associative(a in helem(), b in helem(), c in helem()) {
        prop_assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
    }

    #[test]
    fn matrix_inverse_roundtrip(v in proptest::collection::vec(-5i64..=5, 9)) {
        let m = QMatrix::from_ints(3, 3, &v);
        match m.inverse() {
            Ok(inv) => prop_assert_eq!(m.mul(&inv), QMatrix::identity(3)),
            Err(_) => prop_assert!(m.determinant().unwrap().is_zero()),
        }
    }

    #[test]
    fn integer_kernels_match_generic(
        v in proptest::collection::vec((-9i64..=9, 1i64..=6), 16),
        w in proptest::collection::vec((-9i64..=9, 1i64..=6), 16),
    ) {
        let q = |v: &[(i64, i64)]| QMatrix::from_vec(4, 4, v.iter().map(|&(a, b)| Rat::new(a, b)).collect());
        let (a, b) = (q(&v), q(&w));
        prop_assert_eq!(a.mul(&b), a.mul_generic(&b));
        match (a.inverse(), a.inverse_generic()) {
            (Ok(x), Ok(y)) => prop_assert_eq!(x, y),
            (Err(_), Err(_)) => {}
            _ => prop_assert!(false, "kernels disagree on invertibility"),
        }
    }
}
