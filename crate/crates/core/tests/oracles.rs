//! Worked values for each module, checked through the public API.

use std::collections::BTreeMap;

use hopfkit::algebra::{classical_limit, Algebra};
use hopfkit::builtin::{builtin, BUILTIN_NAMES};
use hopfkit::contraction::ScalingMap;
use hopfkit::element::{Element, TensorElement};
use hopfkit::expr::Value;
use hopfkit::hopf::{verify_hopf, verify_subalgebra};
use hopfkit::invariants::{casimir, r_matrix, Placement};
use hopfkit::pairing::Pairing;
use hopfkit::presentation::load_presentation;
use hopfkit::scalar::{integer, rational};
use hopfkit::{apply_series, series_inverse, Error, HSubstitution, Ring, Scalar, SeriesFn};

fn poly(r: Ring, terms: &[(i64, i64, u32, i32)]) -> Scalar {
    let mut s = Scalar::zero(r);
    for &(n, d, h, e) in terms {
        s = s
            .try_add(&Scalar::monomial(r, rational(n, d), h, e).unwrap())
            .unwrap();
    }
    s
}

fn alg(name: &str, order: u32) -> Algebra {
    Algebra::builtin(name, Ring::new(order)).unwrap()
}

fn nf(a: &Algebra, src: &str) -> hopfkit::AlgebraElement {
    a.normal_form(&a.parse_element(src).unwrap()).unwrap()
}

fn nf2(a: &Algebra, src: &str) -> TensorElement {
    a.normal_form_tensor(&a.parse_tensor(src, 2).unwrap())
        .unwrap()
}

#[test]
fn scalar_products_across_eps_powers() {
    let r = Ring::new(3).with_eps(1);
    let x = poly(r, &[(1, 1, 1, -1)]);
    let y = poly(r, &[(1, 1, 1, 1)]);
    assert_eq!(x.try_mul(&y).unwrap(), poly(r, &[(1, 1, 2, 0)]));
}

#[test]
fn scalar_limits_and_substitutions() {
    let r = Ring::new(3).with_eps(2);
    let x = poly(r, &[(1, 1, 1, 0), (-1, 1, 1, 2), (2, 1, 0, 1)]);
    assert_eq!(x.limit_epsilon().unwrap(), poly(r, &[(1, 1, 1, 0)]));
    assert!(matches!(
        poly(r, &[(1, 1, 1, -1)]).limit_epsilon(),
        Err(Error::SingularLimit { .. })
    ));
    let odd = poly(r, &[(2, 1, 1, 0), (1, 3, 3, 0)]);
    assert_eq!(odd.substitute_h(HSubstitution::Negate), odd.neg());
    let mixed = poly(r, &[(1, 1, 0, 0), (1, 1, 1, 0), (-1, 1, 2, 0)]);
    assert_eq!(mixed.substitute_h(HSubstitution::Zero), Scalar::one(r));
    assert_eq!(
        mixed.substitute_h(HSubstitution::Negate),
        poly(r, &[(1, 1, 0, 0), (-1, 1, 1, 0), (-1, 1, 2, 0)])
    );
    assert_eq!(
        poly(r, &[(1, 1, 0, 0), (-1, 1, 1, 0), (1, 3, 2, -1)]).to_string(),
        "1 - h + (1/3)*h^2*e^-1"
    );
}

#[test]
fn tensor_permutation_and_embedding() {
    let a = alg("uh-sl2", 3);
    let t = a.parse_tensor("J3@J+ - J+@J3", 2).unwrap();
    assert_eq!(
        t.flip().unwrap(),
        a.parse_tensor("J+@J3 - J3@J+", 2).unwrap()
    );
    let jp = a.generator("J+").unwrap();
    assert_eq!(
        TensorElement::embed(&jp, 1, 3).unwrap(),
        a.parse_tensor("1@J+@1", 3).unwrap()
    );
    let j3 = TensorElement::embed(&a.generator("J3").unwrap(), 0, 2).unwrap();
    let jp2 = TensorElement::embed(&jp, 1, 2).unwrap();
    assert_eq!(
        j3.try_mul(&jp2).unwrap(),
        a.parse_tensor("J3@J+", 2).unwrap()
    );
}

#[test]
fn series_values() {
    let a = alg("uh-sl2", 2);
    let x = a.parse_element("1 + h*J+").unwrap();
    assert_eq!(
        series_inverse(&x).unwrap(),
        a.parse_element("1 - h*J+ + h^2*J+^2").unwrap()
    );
    let s = apply_series(SeriesFn::Sinhc, &a.parse_element("h*J+").unwrap()).unwrap();
    assert_eq!(
        series_inverse(&s).unwrap(),
        a.parse_element("1 - (1/6)*h^2*J+^2").unwrap()
    );
    let b = alg("uh-sl2", 3);
    let sinh = apply_series(SeriesFn::Sinh, &b.parse_element("h*J+").unwrap()).unwrap();
    assert_eq!(
        sinh.exact_divide_h(1).unwrap(),
        b.parse_element("J+ + (1/6)*h^2*J+^3").unwrap()
    );
}

#[test]
fn parsed_values_keep_their_kind() {
    let a = alg("uh-p11", 3);
    assert!(matches!(
        a.parse("K@sinh(h*Pp) - sinh(h*Pp)@K").unwrap(),
        Value::Tensor(_)
    ));
    assert!(matches!(a.parse("K*P+").unwrap(), Value::Algebra(_)));
    let fun = alg("fun-slh2", 3);
    let ca = fun.parse_element("c*a").unwrap();
    assert_eq!(fun.render(&ca), "c*a");
}

#[test]
fn normal_forms_follow_the_relations() {
    let fun = alg("fun-slh2", 3);
    assert_eq!(nf(&fun, "b*a"), nf(&fun, "a*b + h - h*a^2"));
    assert_eq!(nf(&fun, "b*c"), nf(&fun, "a*d - 1 - h*a*c"));
    let sl2 = alg("uh-sl2", 3);
    assert_eq!(nf(&sl2, "J-*J+"), nf(&sl2, "J+*J- - J3"));
}

#[test]
fn every_generator_symbol_is_declared_once() {
    let mut owners: BTreeMap<String, Vec<&str>> = BTreeMap::new();
    for name in BUILTIN_NAMES {
        if name == "osc4" {
            continue;
        }
        for g in builtin(name).unwrap().generators {
            owners.entry(g).or_default().push(name);
        }
    }
    let shared: Vec<_> = owners.iter().filter(|(_, v)| v.len() > 1).collect();
    assert!(shared
        .iter()
        .all(|(g, _)| matches!(g.as_str(), "A" | "A+" | "H")));
    for g in [
        "a", "b", "c", "d", "J+", "J-", "J3", "alpha", "beta", "gamma", "delta", "P+", "P-", "K",
    ] {
        assert_eq!(owners[g].len(), 1, "{g}");
    }
    let osc = builtin("osc4").unwrap();
    assert_eq!(osc.generators, ["A", "N", "H", "A+"]);
}

#[test]
fn hand_written_group_presentation_matches() {
    let text = "\
algebra fun-ph11
params h
gens alpha < delta < beta < gamma
rel [gamma,alpha] = 0
rel [beta,alpha] = h - h*alpha^2
rel [alpha,delta] = 0
rel [beta,delta] = h - h*delta^2
rel [gamma,delta] = 0
rel [gamma,beta] = h*alpha*gamma + h*gamma*delta
extra alpha*delta = 1
";
    let hand = load_presentation(text).unwrap();
    assert_eq!(hand, builtin("fun-ph11").unwrap().without_hopf());
}

#[test]
fn classical_limits() {
    let fun = classical_limit(&builtin("fun-slh2").unwrap()).unwrap();
    let a = Algebra::new(&fun, Ring::new(3)).unwrap();
    for r in a.relations() {
        assert!(r.rhs.is_zero(), "{}", r.label);
    }
    let p = classical_limit(&builtin("uh-p11").unwrap()).unwrap();
    let a = Algebra::new(&p, Ring::new(3)).unwrap();
    assert_eq!(nf(&a, "K*P+ - P+*K"), nf(&a, "P+"));
    assert_eq!(nf(&a, "K*P- - P-*K"), nf(&a, "-P-"));
    assert!(nf(&a, "P+*P- - P-*P+").is_zero());
    let c = classical_limit(&builtin("uh-sl2").unwrap()).unwrap();
    let a = Algebra::new(&c, Ring::new(3)).unwrap();
    assert_eq!(nf(&a, "J3*J+ - J+*J3"), nf(&a, "2*J+"));
    assert_eq!(nf(&a, "J3*J- - J-*J3"), nf(&a, "-2*J-"));
    assert_eq!(nf(&a, "J+*J- - J-*J+"), nf(&a, "J3"));
    assert_eq!(
        a.coproduct(&a.generator("J3").unwrap()).unwrap(),
        a.parse_tensor("J3@1 + 1@J3", 2).unwrap()
    );
}

#[test]
fn hopf_reports_for_the_builtins() {
    for name in ["fun-slh2", "uh-sl2", "fun-ph11", "uh-p11", "heis3"] {
        let r = verify_hopf(&alg(name, 3)).unwrap();
        assert!(r.passed(), "{name}: {:?}", r.failures().collect::<Vec<_>>());
    }
    let osc = alg("osc4", 3);
    let r = verify_hopf(&osc).unwrap();
    let failed: Vec<&str> = r.failures().map(|c| c.id.as_str()).collect();
    assert!(failed.contains(&"H1.coproduct.[A+,N]"), "{failed:?}");
    assert!(r
        .failures()
        .all(|c| c.witness.as_deref().is_some_and(|w| !w.is_empty())));
    assert!(verify_subalgebra(&osc, &["A", "N"]).unwrap().passed());
    assert!(matches!(
        verify_subalgebra(&osc, &["A", "A+"]),
        Err(Error::NotClosed(_))
    ));
}

#[test]
fn group_coproducts_of_the_diagonal_entries_are_grouplike() {
    let a = alg("fun-ph11", 3);
    assert_eq!(
        a.coproduct(&a.generator("alpha").unwrap()).unwrap(),
        nf2(&a, "alpha@alpha")
    );
    assert_eq!(
        a.coproduct(&a.generator("delta").unwrap()).unwrap(),
        nf2(&a, "delta@delta")
    );
}

#[test]
fn contraction_to_the_poincare_algebra() {
    let map = ScalingMap::builtin("poincare", Some("uh-sl2"), Ring::new(3)).unwrap();
    let r = map.compare().unwrap();
    assert!(r.passed());
    assert_eq!(r.annotations.len(), 1);
    let hopf = map.contract_hopf().unwrap();
    let t = map.target();
    let s_k = &hopf.antipode[t.letter("K").unwrap() as usize];
    assert_eq!(t.normal_form(s_k).unwrap(), nf(t, "-K + sinh(h*P+)"));
}

#[test]
fn casimir_contraction() {
    let (sl2, c) = casimir("casimir-sl2", Ring::new(3)).unwrap();
    let map = ScalingMap::builtin("poincare", Some("uh-sl2"), Ring::new(3)).unwrap();
    let lifted = c.recast(map.source().ring()).unwrap();
    let contracted = map.contract_element(&lifted, "casimir").unwrap();
    let (p11, cp) = casimir("casimir-p11", Ring::new(3)).unwrap();
    assert_eq!(p11.normal_form(&contracted).unwrap(), cp);
    assert_eq!(
        sl2.counit(&c).unwrap(),
        Scalar::from_rational(Ring::new(3), rational(1, 2))
    );
}

#[test]
fn rmatrix_first_order_terms() {
    let (a, r) = r_matrix("rmatrix-sl2", Ring::new(1), Placement::Left).unwrap();
    assert_eq!(r, nf2(&a, "1@1 + h*J3@J+ - h*J+@J3"));
    let (a, r) = r_matrix("rmatrix-p11", Ring::new(1), Placement::Left).unwrap();
    assert_eq!(r, nf2(&a, "1@1 + h*K@P+ - h*P+@K"));
    let (_, r0) = r_matrix("rmatrix-sl2", Ring::new(2), Placement::Left).unwrap();
    let classical = r0.substitute_h(HSubstitution::Zero);
    assert_eq!(classical, TensorElement::one(Ring::new(2), 2));
}

#[test]
fn pairing_values() {
    let p = Pairing::new(Ring::new(3), 3).unwrap();
    let u = p.envelope();
    let f = p.functions();
    let pair = |x: &str, y: &str| {
        p.pair(&u.parse_element(x).unwrap(), &f.parse_element(y).unwrap())
            .unwrap()
    };
    let r = Ring::new(3);
    assert_eq!(pair("J+", "b"), Scalar::one(r));
    assert_eq!(pair("J-", "c"), Scalar::one(r));
    assert_eq!(pair("J3", "a"), Scalar::one(r));
    assert_eq!(pair("J3", "d"), Scalar::from_rational(r, integer(-1)));
    assert_eq!(pair("J3", "a*b"), Scalar::h(r));
    assert!(pair("J3", "b*a - a*b - h + h*a^2").is_zero());
}
