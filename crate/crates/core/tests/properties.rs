use proptest::prelude::*;

use superfield::derivation::{koszul_d, SuperpointField};
use superfield::json::{derivation_from_json, derivation_to_json, element_from_json, element_to_json};
use superfield::quadric::{LocalizedElement, QuotientRing};
use superfield::text::{format_element, format_field, parse_element, parse_field};
use superfield::vectorial::{hamiltonian_defect, defect_by_formula, jacobiator, QuadraticForm};
use superfield::{Element, Field, Monomial, Parity, Rational, Scalar};

const N: usize = 3;

fn term() -> impl Strategy<Value = (Vec<u32>, u32, i64, i64)> {
    (prop::collection::vec(0u32..3, N), 0u32..(1 << N), -5i64..=5, 1i64..=3)
}

fn element() -> impl Strategy<Value = Element> {
    prop::collection::vec(term(), 0..5).prop_map(|terms| {
        terms.into_iter().fold(Element::zero(N), |acc, (e, m, p, q)| {
            &acc + &Element::monomial(N, Monomial::from_parts(e, m), Rational::from_ratio(p, q))
        })
    })
}

fn homogeneous(parity: Parity) -> impl Strategy<Value = Element> {
    element().prop_map(move |a| a.filter(|m| m.parity() == parity))
}

fn field() -> impl Strategy<Value = Field> {
    (-1i32..N as i32, prop::collection::vec((0u32..(1 << N), 0..N, -3i64..=3), 1..4)).prop_map(|(k, terms)| {
        let mut f = Field::zero(N, k);
        for (mask, i, c) in terms {
            let mask = if (mask.count_ones() as i32) == k + 1 {
                mask
            } else {
                (1u32 << (k + 1)) - 1
            };
            f = f.try_add(&SuperpointField::monomial(N, mask, i).scale(&Rational::from_i64(c))).unwrap();
        }
        f
    })
}

fn sign(p: Parity, q: Parity) -> Rational {
    Rational::from_i64(if p.both_odd(q) { -1 } else { 1 })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn supercommutative(p in any::<bool>(), q in any::<bool>(), seed_a in homogeneous(Parity::Even), seed_b in homogeneous(Parity::Odd)) {
        let a = if p { seed_b.clone() } else { seed_a.clone() };
        let b = if q { seed_b } else { seed_a };
        let pa = if p { Parity::Odd } else { Parity::Even };
        let pb = if q { Parity::Odd } else { Parity::Even };
        prop_assert_eq!(&a * &b, (&b * &a).scale(&sign(pa, pb)));
    }

    #[test]
    fn odd_squares_vanish(a in homogeneous(Parity::Odd)) {
        prop_assert!((&a * &a).is_zero());
    }

    #[test]
    fn associative_and_distributive(a in element(), b in element(), c in element()) {
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert_eq!(&(&a + &b) * &c, &(&a * &c) + &(&b * &c));
    }

    #[test]
    fn grading_is_additive(a in element(), b in element()) {
        for (ma, _) in a.terms() {
            for (mb, _) in b.terms() {
                if let Some((_, m)) = ma.mul(mb) {
                    prop_assert_eq!(m.bidegree(), ma.bidegree() + mb.bidegree());
                }
            }
        }
    }

    #[test]
    fn evaluation_is_a_homomorphism(a in element(), b in element(), pt in prop::collection::vec(-4i64..=4, N)) {
        let pt: Vec<Rational> = pt.into_iter().map(Rational::from_i64).collect();
        let ev = |e: &Element| e.evaluate_even(&pt).unwrap();
        prop_assert_eq!(ev(&(&a * &b)), &ev(&a) * &ev(&b));
        prop_assert_eq!(ev(&(&a + &b)), &ev(&a) + &ev(&b));
    }

    #[test]
    fn koszul_squares_to_zero(a in element()) {
        let d = koszul_d::<Rational>(N);
        prop_assert!(d.apply(&d.apply(&a).unwrap()).unwrap().is_zero());
    }

    #[test]
    fn bracket_super_antisymmetric(f in field(), g in field()) {
        let fg = f.bracket(&g).unwrap();
        let gf = g.bracket(&f).unwrap();
        prop_assert_eq!(fg, gf.scale(&-sign(f.parity(), g.parity())));
    }

    #[test]
    fn jacobi_on_random_fields(f in field(), g in field(), h in field()) {
        prop_assert!(jacobiator(&f, &g, &h).unwrap().is_zero());
    }

    #[test]
    fn extension_commutes_with_d_and_brackets(f in field(), g in field()) {
        let d = koszul_d::<Rational>(N);
        prop_assert!(f.extend().bracket(&d).unwrap().is_zero());
        prop_assert_eq!(f.bracket(&g).unwrap().extend(), f.extend().bracket(&g.extend()).unwrap());
    }

    #[test]
    fn extension_is_a_derivation(f in field(), a in homogeneous(Parity::Odd), b in element()) {
        let e = f.extend();
        let lhs = e.apply(&(&a * &b)).unwrap();
        let rhs = &(&e.apply(&a).unwrap() * &b) + &(&a * &e.apply(&b).unwrap()).scale(&sign(f.parity(), Parity::Odd));
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn defect_two_routes(f in field(), diag in prop::collection::vec(1i64..=4, N)) {
        let omega = QuadraticForm::diagonal(&diag.into_iter().map(Rational::from_i64).collect::<Vec<_>>()).unwrap();
        prop_assert_eq!(hamiltonian_defect(&f, &omega).unwrap(), defect_by_formula(&f, &omega));
    }

    #[test]
    fn text_round_trip(a in element(), f in field()) {
        prop_assert_eq!(parse_element::<Rational>(&format_element(&a), N).unwrap(), a);
        let back = parse_field::<Rational>(&format_field(&f), N).unwrap();
        // "0" carries no degree
        if f.is_zero() {
            prop_assert!(back.is_zero());
        } else {
            prop_assert_eq!(back, f);
        }
    }

    #[test]
    fn json_round_trip(a in element(), f in field()) {
        prop_assert_eq!(element_from_json::<Rational>(N, &element_to_json(&a)).unwrap(), a);
        let d = f.extend();
        let json = serde_json::to_string(&derivation_to_json(&d)).unwrap();
        let back = derivation_from_json::<Rational>(&serde_json::from_str(&json).unwrap()).unwrap();
        prop_assert_eq!(back, d);
    }

    #[test]
    fn quotient_is_exact_and_idempotent(a in element()) {
        let ring = QuotientRing::new(QuadraticForm::standard(N)).unwrap();
        let div = ring.divide(&a).unwrap();
        prop_assert!(ring.is_normal(&div.remainder));
        prop_assert_eq!(&(&div.quotient * ring.polynomial()) + &div.remainder, a.clone());
        prop_assert_eq!(ring.divide_exactly(&(&a - &div.remainder)), Some(div.quotient.clone()));
        prop_assert_eq!(ring.reduce(&div.remainder).unwrap().representative().clone(), div.remainder);
    }

    #[test]
    fn localized_field_axioms(a in element(), b in element(), e in prop::collection::vec(0u32..3, N)) {
        let den = Element::monomial(N, Monomial::from_parts(e, 0), Rational::from_i64(2));
        let shifted = &den + &Element::one(N);
        let u = LocalizedElement::new(a.clone(), den.clone()).unwrap();
        let v = LocalizedElement::new(b.clone(), shifted).unwrap();
        // (u + v)·den = a + v·den
        let lhs = u.try_add(&v).unwrap().try_mul(&LocalizedElement::from_element(den.clone())).unwrap();
        let rhs = LocalizedElement::from_element(a).try_add(&v.try_mul(&LocalizedElement::from_element(den)).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
        let du = LocalizedElement::new(koszul_d::<Rational>(N).apply(u.numerator()).unwrap(), u.denominator().clone()).unwrap();
        prop_assert_eq!(u.d(), du);
    }
}
