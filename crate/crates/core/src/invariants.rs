//! Distinguished elements: Casimir operators and universal R-matrices, with
//! their verification.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::algebra::{classical_limit, Algebra};
use crate::contraction::ScalingMap;
use crate::element::{AlgebraElement, Element, Letter, TensorElement, Word};
use crate::error::{Error, Result};
use crate::report::{Check, Report};
use crate::scalar::{rational, HSubstitution, Rational, Ring, Scalar};
use crate::series::{apply_series_with, series_inverse_with, SeriesFn};

pub const CASIMIR_NAMES: [&str; 2] = ["casimir-sl2", "casimir-p11"];
pub const RMATRIX_NAMES: [&str; 2] = ["rmatrix-sl2", "rmatrix-p11"];

/// Default truncation order for the three-slot Yang-Baxter check.
pub const QYBE_ORDER: u32 = 2;

struct CasimirDef {
    name: &'static str,
    presentation: &'static str,
    formula: &'static str,
    counit: (i64, i64),
}

const CASIMIRS: [CasimirDef; 2] = [
    CasimirDef {
        name: "casimir-sl2",
        presentation: "uh-sl2",
        formula: "(1/2)*J3^2 + divh(sinh(h*J+)*J-, 1) + divh(J-*sinh(h*J+), 1) \
                  + (1/2)*cosh(h*J+)^2",
        counit: (1, 2),
    },
    CasimirDef {
        name: "casimir-p11",
        presentation: "uh-p11",
        formula: "2*divh(P-*sinh(h*P+), 1)",
        counit: (0, 1),
    },
];

fn casimir_def(name: &str) -> Result<&'static CasimirDef> {
    CASIMIRS
        .iter()
        .find(|c| c.name == name)
        .ok_or_else(|| Error::UnknownName(format!("casimir {name}")))
}

/// Presentation a distinguished element lives in.
pub fn home_presentation(name: &str) -> Result<&'static str> {
    match name {
        "rmatrix-sl2" => Ok("uh-sl2"),
        "rmatrix-p11" => Ok("uh-p11"),
        other => Ok(casimir_def(other)?.presentation),
    }
}

/// The Casimir `name` evaluated and normal-ordered in `a`.
pub fn casimir_in(a: &Algebra, name: &str) -> Result<AlgebraElement> {
    let def = casimir_def(name)?;
    a.normal_form(&a.parse_element(def.formula)?)
}

/// The Casimir `name` at truncation order `order`, with its algebra.
pub fn casimir(name: &str, ring: Ring) -> Result<(Algebra, AlgebraElement)> {
    let a = Algebra::builtin(casimir_def(name)?.presentation, ring)?;
    let c = casimir_in(&a, name)?;
    Ok((a, c))
}

/// `[x, g] = 0` for every generator `g` and for every normal word of
/// length at most `degree`, cross-checked with randomized rewriting.
pub fn verify_central(
    a: &Algebra,
    x: &AlgebraElement,
    label: &str,
    degree: usize,
    seed: u64,
) -> Result<Report> {
    let names = a.names();
    let mut report = Report::new("central", format!("{label} in {}", a.name()));
    let gens: Vec<Check> = (0..names.len() as Letter)
        .into_par_iter()
        .map(|g| {
            let y = AlgebraElement::generator(a.ring(), g);
            let c = a.commutator(x, &y)?;
            Ok(Check::from_residue(
                format!("I1.central.{}", names[g as usize]),
                &c,
                names,
            ))
        })
        .collect::<Result<_>>()?;
    report.extend(gens);

    let words = normal_words(a, degree);
    let mut witness = None;
    for w in &words {
        let y = AlgebraElement::from_word(a.ring(), w.clone());
        let c = a.commutator(x, &y)?;
        if !c.is_zero() {
            witness = Some(format!("[{label}, {}] = {}", w.render(names), a.render(&c)));
            break;
        }
    }
    let detail = format!("{} normal words up to degree {degree}", words.len());
    report.push(
        match witness {
            None => Check::pass("I2.central.words", a.ring().order),
            Some(w) => Check::fail("I2.central.words", a.ring().order, w),
        }
        .with_detail(detail),
    );

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut strategy = None;
    for g in 0..names.len() as Letter {
        let y = AlgebraElement::generator(a.ring(), g);
        let raw = x.try_mul(&y)?.try_sub(&y.try_mul(x)?)?;
        let leftmost = a.normal_form(&raw)?;
        let random = a.rules().normal_form_randomized(&raw, &mut rng)?;
        if leftmost != random {
            strategy = Some(format!(
                "[{label}, {}]: {} vs {}",
                names[g as usize],
                a.render(&leftmost),
                a.render(&random)
            ));
            break;
        }
    }
    report.push(
        match strategy {
            None => Check::pass("I6.strategy", a.ring().order),
            Some(w) => Check::fail("I6.strategy", a.ring().order, w),
        }
        .with_detail(format!("randomized redex order, seed {seed}")),
    );
    Ok(report.finish())
}

fn normal_words(a: &Algebra, degree: usize) -> Vec<Word> {
    let n = a.names().len() as Letter;
    let mut out = Vec::new();
    let mut layer = vec![Word::unit()];
    for _ in 0..degree {
        let mut next = Vec::new();
        for w in &layer {
            for g in 0..n {
                let v = w.concat(&Word::letter(g));
                if a.rules().is_normal(&v) {
                    next.push(v);
                }
            }
        }
        out.extend(next.iter().cloned());
        layer = next;
    }
    out
}

/// Centrality, counit, classical limit and (for casimir-p11) the
/// contraction from casimir-sl2. `S(C) = C` is measured, not asserted.
pub fn verify_casimir(name: &str, ring: Ring, seed: u64) -> Result<Report> {
    let def = casimir_def(name)?;
    let (a, c) = casimir(name, ring)?;
    let order = ring.order;
    let names = a.names();
    let central = verify_central(&a, &c, name, 3, seed)?;
    let mut report = Report::new("casimir", format!("{name} in {}", a.name()));
    report.extend(central.checks);
    report.note("C", a.render(&c));

    let eps = a.counit(&c)?;
    let expected = Scalar::from_rational(a.ring(), rational(def.counit.0, def.counit.1));
    report.push(
        Check::from_residue("I4.counit", &eps.try_sub(&expected)?, names)
            .with_detail(format!("counit = {eps}")),
    );
    let s = a.antipode(&c)?;
    let fixed = a.normal_form(&s.try_sub(&c)?)?;
    report.note(
        "antipode",
        if fixed.is_zero() {
            "S(C) = C".to_string()
        } else {
            format!("S(C) - C = {}", a.render(&fixed))
        },
    );

    let classical_p = classical_limit(a.presentation())?;
    let classical = Algebra::new(&classical_p, a.ring())?;
    let c0 = c.substitute_h(HSubstitution::Zero);
    let reference =
        classical.normal_form(&casimir_in(&classical, name)?.substitute_h(HSubstitution::Zero))?;
    let diff = classical.normal_form(&c0.try_sub(&reference)?)?;
    report.push(
        Check::from_residue("I3.classical", &diff, names)
            .with_detail(format!("h -> 0: {}", classical.render(&reference))),
    );
    let classical_central = verify_central(&classical, &reference, name, 2, seed)?;
    report.push(match classical_central.failures().next() {
        None => Check::pass("I3.classical.central", order),
        Some(f) => Check::fail(
            "I3.classical.central",
            order,
            f.witness.clone().unwrap_or_default(),
        ),
    });

    if name == "casimir-p11" {
        let m = ScalingMap::builtin("poincare", Some("uh-sl2"), ring)?;
        let source_c = casimir_in(m.source(), "casimir-sl2")?;
        let contracted = m.contract_element(&source_c, "casimir")?;
        let diff = a.normal_form(&contracted.try_sub(&c)?)?;
        report.push(
            Check::from_residue("I5.contraction", &diff, names)
                .with_detail(format!("e^1 * casimir-sl2 -> {}", a.render(&contracted))),
        );
    }
    Ok(report.finish())
}

/// Where the prefactor series is multiplied onto the bracket.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Placement {
    Left,
    Right,
}

impl Placement {
    pub fn as_str(self) -> &'static str {
        match self {
            Placement::Left => "left",
            Placement::Right => "right",
        }
    }
}

fn rmatrix_generators(name: &str) -> Result<(&'static str, &'static str)> {
    match name {
        "rmatrix-sl2" => Ok(("J+", "J3")),
        "rmatrix-p11" => Ok(("P+", "K")),
        other => Err(Error::UnknownName(format!("r-matrix {other}"))),
    }
}

/// `exp(p * [Y (x) sinh(hX) - sinh(hX) (x) Y])` with
/// `p = h ΔX / sinh(h ΔX)` placed on the given side of the bracket.
pub fn r_matrix_in(a: &Algebra, name: &str, placement: Placement) -> Result<TensorElement> {
    r_matrix_scaled(a, name, placement, &rational(1, 1))
}

/// As [`r_matrix_in`] with the exponent multiplied by `factor`.
pub fn r_matrix_scaled(
    a: &Algebra,
    name: &str,
    placement: Placement,
    factor: &Rational,
) -> Result<TensorElement> {
    let (x, y) = rmatrix_generators(name)?;
    let ring = a.ring();
    let reduce = |t: TensorElement| a.normal_form_tensor(&t);
    let gx = a.generator(x)?;
    let gy = a.generator(y)?;
    let h = Scalar::h(ring);
    let hx = gx.scale(&h)?;
    let delta_x = TensorElement::embed(&hx, 0, 2)?.try_add(&TensorElement::embed(&hx, 1, 2)?)?;
    let sinhc = apply_series_with(SeriesFn::Sinhc, &delta_x, &reduce)?;
    let prefactor = series_inverse_with(&sinhc, &reduce)?;
    let sinh_x = a.normal_form(&crate::series::apply_series(SeriesFn::Sinh, &hx)?)?;
    let bracket = TensorElement::product_of(&[gy.clone(), sinh_x.clone()])?
        .try_sub(&TensorElement::product_of(&[sinh_x, gy])?)?;
    let exponent = match placement {
        Placement::Left => prefactor.try_mul(&bracket)?,
        Placement::Right => bracket.try_mul(&prefactor)?,
    };
    let exponent = a.normal_form_tensor(&exponent)?.scale_rational(factor);
    apply_series_with(SeriesFn::Exp, &exponent, &reduce)
}

pub fn r_matrix(name: &str, ring: Ring, placement: Placement) -> Result<(Algebra, TensorElement)> {
    let a = Algebra::builtin(home_presentation(name)?, ring)?;
    let r = r_matrix_in(&a, name, placement)?;
    Ok((a, r))
}

/// R1 triangularity, R2 quantum Yang-Baxter, R3 intertwining of the
/// coproduct with the opposite coproduct.
pub fn verify_rmatrix(a: &Algebra, r: &TensorElement, label: &str) -> Result<Report> {
    let names = a.names();
    let ring = a.ring();
    let mut report = Report::new("rmatrix", format!("{label} in {}", a.name()));
    let one = TensorElement::one(ring, 2);

    let r21 = r.flip()?;
    let tri = a.normal_form_tensor(&r21.try_mul(r)?)?.try_sub(&one)?;
    report.push(Check::from_residue("R1.triangular", &tri, names));

    let r12 = r.place(&[0, 1], 3)?;
    let r13 = r.place(&[0, 2], 3)?;
    let r23 = r.place(&[1, 2], 3)?;
    let (lhs, rhs) = rayon::join(
        || -> Result<TensorElement> {
            let t = a.normal_form_tensor(&r12.try_mul(&r13)?)?;
            a.normal_form_tensor(&t.try_mul(&r23)?)
        },
        || -> Result<TensorElement> {
            let t = a.normal_form_tensor(&r23.try_mul(&r13)?)?;
            a.normal_form_tensor(&t.try_mul(&r12)?)
        },
    );
    report.push(Check::from_residue("R2.qybe", &lhs?.try_sub(&rhs?)?, names));

    let inter: Vec<Check> = (0..names.len() as Letter)
        .into_par_iter()
        .map(|g| {
            let delta = a.coproduct_word(&Word::letter(g))?;
            let left = a.normal_form_tensor(&r.try_mul(&delta)?)?;
            let right = a.normal_form_tensor(&delta.flip()?.try_mul(r)?)?;
            Ok(Check::from_residue(
                format!("R3.intertwining.{}", names[g as usize]),
                &left.try_sub(&right)?,
                names,
            ))
        })
        .collect::<Result<_>>()?;
    report.extend(inter);
    Ok(report.finish())
}

/// Verifies the named R-matrix with the prefactor on the left, reports the
/// outcome with the prefactor on the right, and checks that the first-order
/// term is antisymmetric.
pub fn verify_rmatrix_named(name: &str, ring: Ring) -> Result<Report> {
    let order = ring.order;
    let (a, left) = r_matrix(name, ring, Placement::Left)?;
    let mut report = verify_rmatrix(&a, &left, name)?;
    let right = r_matrix_in(&a, name, Placement::Right)?;
    let same = left == right;
    let right_report = if same {
        None
    } else {
        Some(verify_rmatrix(&a, &right, name)?)
    };
    report.note(
        "placement",
        match &right_report {
            None => format!("prefactor left and right agree at order {order}"),
            Some(r) => {
                let failed: Vec<&str> = r.failures().map(|c| c.id.as_str()).collect();
                format!(
                    "prefactor on the right: {}",
                    if failed.is_empty() {
                        "all checks pass".to_string()
                    } else {
                        format!("fails {}", failed.join(", "))
                    }
                )
            }
        },
    );

    if name == "rmatrix-p11" {
        let image = r_matrix_scaled(&a, name, Placement::Left, &rational(2, 1))?;
        let r = verify_rmatrix(&a, &image, name)?;
        let failed: Vec<&str> = r.failures().map(|c| c.id.as_str()).collect();
        report.note(
            "image of rmatrix-sl2 under J3 = 2K (exponent doubled)",
            if failed.is_empty() {
                "all checks pass".to_string()
            } else {
                format!("fails {}", failed.join(", "))
            },
        );
    }

    let (a1, r1) = r_matrix(name, ring.with_order(1), Placement::Left)?;
    let first = r1.try_sub(&TensorElement::one(a1.ring(), 2))?;
    let sym = first.try_add(&first.flip()?)?;
    report.push(
        Check::from_residue("R0.antisymmetric", &sym, a1.names())
            .with_detail(format!("order 1: {}", a1.render_tensor(&r1))),
    );
    Ok(report.finish())
}
