//! Algebraic laws on randomly generated values.

use hopfkit::algebra::Algebra;
use hopfkit::builtin::{builtin, BUILTIN_NAMES};
use hopfkit::element::{Element, TensorElement};
use hopfkit::scalar::rational;
use hopfkit::{
    apply_series, series_inverse, AlgebraElement, HSubstitution, Ring, Scalar, SeriesFn, Word,
};
use proptest::prelude::*;

const ORDER: u32 = 3;

fn ring() -> Ring {
    Ring::new(ORDER).with_eps(2)
}

fn scalar_strategy() -> impl Strategy<Value = Scalar> {
    prop::collection::vec((-5i64..=5, 1i64..=3, 0u32..=ORDER, -1i32..=1), 0..4).prop_map(|terms| {
        let r = ring();
        terms
            .into_iter()
            .fold(Scalar::zero(r), |acc, (n, d, h, e)| {
                acc.try_add(&Scalar::monomial(r, rational(n, d), h, e).unwrap())
                    .unwrap()
            })
    })
}

/// Random elements over `gens` generators with plain `h` coefficients.
fn element_strategy(
    gens: u16,
    max_len: usize,
    min_h: u32,
) -> impl Strategy<Value = AlgebraElement> {
    prop::collection::vec(
        (
            prop::collection::vec(0..gens, 0..=max_len),
            -3i64..=3,
            min_h..=ORDER,
        ),
        0..4,
    )
    .prop_map(|terms| {
        let r = Ring::new(ORDER);
        AlgebraElement::from_terms(
            r,
            terms
                .into_iter()
                .map(|(w, n, h)| (Word(w), Scalar::monomial(r, rational(n, 1), h, 0).unwrap())),
        )
        .unwrap()
    })
}

fn sl2() -> Algebra {
    Algebra::builtin("uh-sl2", Ring::new(ORDER)).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 64, ..ProptestConfig::default() })]

    #[test]
    fn scalar_ring_axioms(x in scalar_strategy(), y in scalar_strategy(), z in scalar_strategy()) {
        let mul = |a: &Scalar, b: &Scalar| a.try_mul(b);
        let (xy, yz) = match (mul(&x, &y), mul(&y, &z)) {
            (Ok(a), Ok(b)) => (a, b),
            _ => return Ok(()),
        };
        if let (Ok(l), Ok(r)) = (mul(&xy, &z), mul(&x, &yz)) {
            prop_assert_eq!(l, r);
        }
        prop_assert_eq!(xy, mul(&y, &x).unwrap());
        let sum = y.try_add(&z).unwrap();
        if let (Ok(l), Ok(a), Ok(b)) = (mul(&x, &sum), mul(&x, &y), mul(&x, &z)) {
            prop_assert_eq!(l, a.try_add(&b).unwrap());
        }
    }

    #[test]
    fn scalar_unary_laws(x in scalar_strategy(), k in 1u32..=2) {
        let l = x.limit_epsilon();
        if let Ok(l) = l {
            prop_assert_eq!(l.limit_epsilon().unwrap(), l);
        }
        let neg = x.substitute_h(HSubstitution::Negate);
        prop_assert_eq!(neg.substitute_h(HSubstitution::Negate), x.clone());
        let low: Scalar = x.terms().filter(|(m, _)| m.h + k <= ORDER).fold(
            Scalar::zero(ring()),
            |acc, (m, c)| acc.try_add(&Scalar::monomial(ring(), c.clone(), m.h, m.eps).unwrap()).unwrap(),
        );
        let shifted = low.shift_h(k);
        prop_assert_eq!(shifted.exact_divide_h(k).unwrap(), low);
    }

    #[test]
    fn free_multiplication_is_associative_and_unital(
        x in element_strategy(3, 3, 0),
        y in element_strategy(3, 3, 0),
        z in element_strategy(3, 3, 0),
    ) {
        let l = x.try_mul(&y).unwrap().try_mul(&z).unwrap();
        let r = x.try_mul(&y.try_mul(&z).unwrap()).unwrap();
        prop_assert_eq!(l, r);
        prop_assert_eq!(x.try_mul(&x.one_like()).unwrap(), x.clone());
        prop_assert_eq!(x.one_like().try_mul(&x).unwrap(), x);
    }

    #[test]
    fn series_identities(x in element_strategy(1, 2, 1)) {
        let e = apply_series(SeriesFn::Exp, &x).unwrap();
        let em = apply_series(SeriesFn::Exp, &x.neg()).unwrap();
        prop_assert_eq!(e.try_mul(&em).unwrap(), x.one_like());
        let s = apply_series(SeriesFn::Sinh, &x).unwrap();
        let c = apply_series(SeriesFn::Cosh, &x).unwrap();
        let d = s.try_mul(&s).unwrap().try_sub(&c.try_mul(&c).unwrap()).unwrap();
        prop_assert_eq!(d, x.one_like().neg());
        let u = x.one_like().try_add(&x).unwrap();
        let inv = series_inverse(&u).unwrap();
        prop_assert_eq!(inv.try_mul(&u).unwrap(), x.one_like());
    }

    #[test]
    fn flip_is_an_involution_and_multiplicative(
        xs in prop::collection::vec(element_strategy(3, 2, 0), 4)
    ) {
        let s = TensorElement::embed(&xs[0], 0, 2).unwrap()
            .try_mul(&TensorElement::embed(&xs[1], 1, 2).unwrap()).unwrap();
        let t = TensorElement::embed(&xs[2], 0, 2).unwrap()
            .try_mul(&TensorElement::embed(&xs[3], 1, 2).unwrap()).unwrap();
        prop_assert_eq!(s.flip().unwrap().flip().unwrap(), s.clone());
        let st = s.try_mul(&t).unwrap();
        prop_assert_eq!(st.flip().unwrap(), s.flip().unwrap().try_mul(&t.flip().unwrap()).unwrap());
    }

    #[test]
    fn normal_form_is_idempotent_and_multiplicative(
        x in element_strategy(3, 3, 0),
        y in element_strategy(3, 3, 0),
    ) {
        let a = sl2();
        let nx = a.normal_form(&x).unwrap();
        prop_assert_eq!(a.normal_form(&nx).unwrap(), nx.clone());
        let ny = a.normal_form(&y).unwrap();
        let lhs = a.normal_form(&nx.try_mul(&ny).unwrap()).unwrap();
        prop_assert_eq!(lhs, a.normal_form(&x.try_mul(&y).unwrap()).unwrap());
    }

    #[test]
    fn coproduct_is_multiplicative_and_coassociative(
        x in element_strategy(3, 2, 0),
        y in element_strategy(3, 2, 0),
    ) {
        let a = sl2();
        let dx = a.coproduct(&x).unwrap();
        let dy = a.coproduct(&y).unwrap();
        let dxy = a.normal_form_tensor(&a.coproduct(&x.try_mul(&y).unwrap()).unwrap()).unwrap();
        prop_assert_eq!(dxy, a.normal_form_tensor(&dx.try_mul(&dy).unwrap()).unwrap());
        let d = a.normal_form_tensor(&dx).unwrap();
        prop_assert_eq!(a.coproduct_slot(&d, 0).unwrap(), a.coproduct_slot(&d, 1).unwrap());
    }

    #[test]
    fn rendering_round_trips(x in element_strategy(4, 3, 0)) {
        let a = Algebra::builtin("fun-slh2", Ring::new(ORDER)).unwrap();
        let text = a.render(&x);
        prop_assert_eq!(a.parse_element(&text).unwrap(), x);
    }
}

#[test]
fn builtin_expressions_round_trip_through_rendering() {
    for name in BUILTIN_NAMES {
        let p = builtin(name).unwrap();
        let a = Algebra::new(&p, Ring::new(ORDER)).unwrap();
        let mut exprs: Vec<String> = p.relations.iter().map(|r| r.rhs.to_string()).collect();
        let hopf = p.hopf.as_ref().unwrap();
        for m in [&hopf.coproduct, &hopf.counit, &hopf.antipode] {
            exprs.extend(m.values().map(|e| e.to_string()));
        }
        for src in exprs {
            let v = a.parse(&src).unwrap();
            let text = v.render(a.names());
            let again = a.parse(&text).unwrap();
            assert_eq!(again, v, "{name}: {src} -> {text}");
            assert_eq!(again.render(a.names()), text);
        }
    }
}
