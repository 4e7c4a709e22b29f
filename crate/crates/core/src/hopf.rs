//! Hopf axiom verification on generators, relations and leading-word
//! identities; Hopf subalgebras; (anti)automorphism checks.

use std::collections::BTreeSet;

use rayon::prelude::*;

use crate::algebra::Algebra;
use crate::element::{AlgebraElement, Element, Letter, TensorElement, Word};
use crate::error::{Error, Result};
use crate::expr::{parse, Expr};
use crate::presentation::{ExtraRule, HopfSpec, Presentation, Relation};
use crate::report::{Check, Report};
use crate::rewrite::RuleSet;
use crate::scalar::{integer, HSubstitution, Scalar};

type Task<'a> = Box<dyn Fn() -> Result<Vec<Check>> + Send + Sync + 'a>;

fn run_tasks(tasks: Vec<Task<'_>>) -> Result<Vec<Check>> {
    let results: Vec<Result<Vec<Check>>> = tasks.par_iter().map(|t| t()).collect();
    let mut out = Vec::new();
    for r in results {
        out.extend(r?);
    }
    Ok(out)
}

fn as_tensor1(x: &AlgebraElement) -> TensorElement {
    TensorElement::from_algebra(x)
}

/// `m (S (x) id) Delta` when `left`, else `m (id (x) S) Delta`, applied to
/// a coproduct value.
fn antipode_contraction(a: &Algebra, delta: &TensorElement, left: bool) -> Result<AlgebraElement> {
    let slot = if left { 0 } else { 1 };
    let t = a.antipode_slot(delta, slot)?;
    a.normal_form(&t.multiply_slots()?)
}

/// Checks H1-H5 for a compiled algebra with Hopf data.
pub fn verify_hopf(a: &Algebra) -> Result<Report> {
    verify_hopf_as(a, "hopf", a.name())
}

fn verify_hopf_as(a: &Algebra, kind: &str, subject: &str) -> Result<Report> {
    let maps = a.hopf()?;
    let names = a.names();
    let ring = a.ring();
    let mut tasks: Vec<Task<'_>> = Vec::new();

    let mut residues = Vec::new();
    for r in a.relations() {
        residues.push((r.label.clone(), r.residue()?));
    }
    for x in a.extras() {
        residues.push((x.label.clone(), x.residue()?));
    }
    for (label, res) in residues {
        tasks.push(Box::new(move || {
            let delta = a.coproduct(&res)?;
            let eps = a.counit(&res)?;
            let s = a.antipode(&res)?;
            Ok(vec![
                Check::from_residue(format!("H1.coproduct.{label}"), &delta, names),
                Check::from_residue(format!("H1.counit.{label}"), &eps, names),
                Check::from_residue(format!("H1.antipode.{label}"), &s, names),
            ])
        }));
    }

    let n = names.len() as Letter;
    for g in 0..n {
        let name = &names[g as usize];
        tasks.push(Box::new(move || {
            let w = Word::letter(g);
            let delta = a.coproduct_word(&w)?;
            let mut out = Vec::new();
            let left = a.coproduct_slot(&delta, 0)?;
            let right = a.coproduct_slot(&delta, 1)?;
            out.push(Check::from_residue(
                format!("H2.{name}"),
                &left.try_sub(&right)?,
                names,
            ));
            let x = a.normal_form(&AlgebraElement::generator(ring, g))?;
            for (slot, side) in [(0, "left"), (1, "right")] {
                let c = a.normal_form_tensor(&a.counit_slot(&delta, slot)?)?;
                out.push(Check::from_residue(
                    format!("H3.{side}.{name}"),
                    &c.try_sub(&as_tensor1(&x))?,
                    names,
                ));
            }
            let unit = AlgebraElement::from_scalar(maps.counit[g as usize].clone());
            for (is_left, side) in [(true, "left"), (false, "right")] {
                let m = antipode_contraction(a, &delta, is_left)?;
                out.push(Check::from_residue(
                    format!("H4.{side}.{name}"),
                    &m.try_sub(&unit)?,
                    names,
                ));
            }
            Ok(out)
        }));
        for h in 0..n {
            tasks.push(Box::new(move || {
                let w = Word(vec![g, h]);
                let delta = a.coproduct_word(&w)?;
                let left = a.coproduct_slot(&delta, 0)?;
                let right = a.coproduct_slot(&delta, 1)?;
                Ok(vec![Check::from_residue(
                    format!("H2.{}", w.render(names)),
                    &left.try_sub(&right)?,
                    names,
                )])
            }));
        }
    }

    if !a.extras().is_empty() {
        tasks.push(Box::new(move || grouplike_checks(a)));
    }

    let mut report = Report::new(kind, subject);
    report.extend(run_tasks(tasks)?);
    for note in &a.presentation().annotations {
        report.annotate(format!("{}: {}", note.target, note.text));
    }
    Ok(report.finish())
}

/// Coproduct of `x` in the algebra presented by `rules`.
fn coproduct_in(
    rules: &RuleSet,
    gens: &[TensorElement],
    x: &AlgebraElement,
) -> Result<TensorElement> {
    let mut out = TensorElement::zero(x.ring(), 2);
    for (w, c) in x.terms() {
        let mut acc = TensorElement::one(x.ring(), 2);
        for &g in w.letters() {
            acc = rules.normal_form_tensor(&acc.try_mul(&gens[g as usize])?)?;
        }
        out = out.try_add(&acc.scale(c)?)?;
    }
    Ok(out)
}

/// H5: each leading-word identity `w = r` says `D = 1` for `D = 1 + s(w - r)`
/// with a sign `s`. `Δ(D) - D⊗D` is expanded using the commutation relations
/// alone and must vanish modulo `D = 1`.
fn grouplike_checks(a: &Algebra) -> Result<Vec<Check>> {
    let rules = a.relation_rules()?;
    let maps = a.hopf()?;
    let names = a.names();
    let ring = a.ring();
    let mut out = Vec::new();
    for x in a.extras() {
        let rho = x.residue()?;
        let eps = a.counit(&rho)?;
        out.push(Check::from_residue(
            format!("H5.counit.{}", x.label),
            &eps,
            names,
        ));
        let mut best: Option<(AlgebraElement, TensorElement)> = None;
        for sign in [1i64, -1] {
            let d = AlgebraElement::one(ring).try_add(&rho.scale_rational(&integer(sign)))?;
            let delta = coproduct_in(&rules, &maps.coproduct, &d)?;
            let square =
                rules.normal_form_tensor(&TensorElement::product_of(&[d.clone(), d.clone()])?)?;
            let diff = delta.try_sub(&square)?;
            let done = diff.is_zero();
            if best
                .as_ref()
                .is_none_or(|(_, b)| diff.term_count() < b.term_count())
            {
                best = Some((d, diff));
            }
            if done {
                break;
            }
        }
        let (d, diff) = best.expect("two candidates tried");
        let d_nf = rules.normal_form(&d)?;
        let mut detail = format!("D = {}", d_nf.render(names));
        if !diff.is_zero() {
            detail.push_str(&format!(
                "; before reducing by D = 1: {}",
                diff.render(names)
            ));
        }
        let reduced = a.normal_form_tensor(&diff)?;
        out.push(
            Check::from_residue(format!("H5.grouplike.{}", x.label), &reduced, names)
                .with_detail(detail),
        );
    }
    Ok(out)
}

fn support_outside(x: &AlgebraElement, keep: &BTreeSet<Letter>) -> bool {
    x.support().iter().any(|g| !keep.contains(g))
}

fn tensor_support_outside(t: &TensorElement, keep: &BTreeSet<Letter>) -> bool {
    t.terms().any(|(key, _)| {
        key.iter()
            .any(|w| w.letters().iter().any(|g| !keep.contains(g)))
    })
}

/// Checks that `subset` spans a Hopf subalgebra and verifies the Hopf axioms
/// of the sub-presentation. A relation or structure map leaving the span is
/// reported as [`Error::NotClosed`].
pub fn verify_subalgebra(a: &Algebra, subset: &[&str]) -> Result<Report> {
    let maps = a.hopf()?;
    let names = a.names();
    let p = a.presentation();
    let keep: BTreeSet<Letter> = subset.iter().map(|n| a.letter(n)).collect::<Result<_>>()?;
    let kept_names: Vec<String> = keep.iter().map(|&g| names[g as usize].clone()).collect();
    let subject = format!("{}{{{}}}", a.name(), kept_names.join(","));
    let symbols = p.symbols();
    let closed_names = |e: &Expr| {
        e.generators()
            .iter()
            .all(|g| kept_names.iter().any(|k| k == g))
    };

    let mut sub = Presentation {
        name: subject.clone(),
        generators: kept_names.clone(),
        ..Presentation::default()
    };
    sub.aliases = p
        .aliases
        .iter()
        .filter(|(_, c)| kept_names.contains(c))
        .cloned()
        .collect();
    sub.central = p
        .central
        .iter()
        .filter(|c| kept_names.contains(c))
        .cloned()
        .collect();

    for r in a.relations() {
        if !(keep.contains(&r.left) && keep.contains(&r.right)) {
            continue;
        }
        let rhs = a.normal_form(&r.rhs)?;
        if support_outside(&rhs, &keep) {
            return Err(Error::NotClosed(format!(
                "{} = {} leaves the span of {{{}}}",
                r.label,
                a.render(&rhs),
                kept_names.join(", ")
            )));
        }
        let (left, right) = (&names[r.left as usize], &names[r.right as usize]);
        let expr = match p.relation(left, right) {
            Some(orig) if closed_names(&orig.rhs) => orig.rhs.clone(),
            _ => parse(&a.render(&rhs), &symbols)?,
        };
        sub.relations.push(Relation {
            left: left.clone(),
            right: right.clone(),
            rhs: expr,
        });
    }
    for (x, orig) in a.extras().iter().zip(&p.extra) {
        if x.word.letters().iter().all(|g| keep.contains(g)) {
            let rhs = a.normal_form(&x.rhs)?;
            if support_outside(&rhs, &keep) {
                return Err(Error::NotClosed(format!(
                    "{} = {} leaves the span",
                    x.label,
                    a.render(&rhs)
                )));
            }
            sub.extra.push(ExtraRule {
                word: orig.word.clone(),
                rhs: orig.rhs.clone(),
            });
        }
    }

    let hopf = p
        .hopf
        .as_ref()
        .ok_or_else(|| Error::NoHopfData(p.name.clone()))?;
    let mut spec = HopfSpec::default();
    for &g in &keep {
        let name = &names[g as usize];
        let delta = a.coproduct_word(&Word::letter(g))?;
        if tensor_support_outside(&delta, &keep) {
            return Err(Error::NotClosed(format!(
                "coproduct of {name} = {} leaves the span",
                a.render_tensor(&delta)
            )));
        }
        let s = a.normal_form(&maps.antipode[g as usize])?;
        if support_outside(&s, &keep) {
            return Err(Error::NotClosed(format!(
                "antipode of {name} = {} leaves the span",
                a.render(&s)
            )));
        }
        let pick = |e: &Expr, fallback: String| -> Result<Expr> {
            if closed_names(e) {
                Ok(e.clone())
            } else {
                parse(&fallback, &symbols)
            }
        };
        spec.coproduct.insert(
            name.clone(),
            pick(&hopf.coproduct[name], a.render_tensor(&delta))?,
        );
        spec.counit.insert(name.clone(), hopf.counit[name].clone());
        spec.antipode
            .insert(name.clone(), pick(&hopf.antipode[name], a.render(&s))?);
    }
    sub.hopf = Some(spec);

    let restricted = Algebra::new(&sub, a.ring())?;
    let mut report = verify_hopf_as(&restricted, "subalgebra", &subject)?;
    report.push(Check::pass("S0.closed", a.ring().order));
    Ok(report.finish())
}

/// A candidate (anti)automorphism: generator images and the action on `h`.
pub struct Morphism {
    images: Vec<AlgebraElement>,
    h_mode: Option<HSubstitution>,
}

impl Morphism {
    /// `images` pairs a generator with an image expression; unlisted
    /// generators are fixed. `negate_h` sends `h` to `-h`.
    pub fn parse(a: &Algebra, images: &[(&str, &str)], negate_h: bool) -> Result<Self> {
        let mut out: Vec<AlgebraElement> = (0..a.names().len() as Letter)
            .map(|g| AlgebraElement::generator(a.ring(), g))
            .collect();
        for (g, src) in images {
            out[a.letter(g)? as usize] = a.parse_element(src)?;
        }
        Ok(Morphism {
            images: out,
            h_mode: negate_h.then_some(HSubstitution::Negate),
        })
    }

    fn scalar(&self, c: &Scalar) -> Scalar {
        match self.h_mode {
            Some(m) => c.substitute_h(m),
            None => c.clone(),
        }
    }

    pub fn apply(&self, x: &AlgebraElement) -> Result<AlgebraElement> {
        let mut out = AlgebraElement::zero(x.ring());
        for (w, c) in x.terms() {
            let mut term = AlgebraElement::from_scalar(self.scalar(c));
            for &g in w.letters() {
                term = term.try_mul(&self.images[g as usize])?;
            }
            out = out.try_add(&term)?;
        }
        Ok(out)
    }

    pub fn apply_tensor(&self, t: &TensorElement) -> Result<TensorElement> {
        let t = match self.h_mode {
            Some(m) => t.substitute_h(m),
            None => t.clone(),
        };
        t.map_slots(|_, w| self.apply(&AlgebraElement::from_word(t.ring(), w.clone())))
    }
}

/// Checks that a generator map preserves every relation and commutes with
/// the coproduct, counit and antipode.
pub fn verify_morphism(a: &Algebra, phi: &Morphism, label: &str) -> Result<Report> {
    let maps = a.hopf()?;
    let names = a.names();
    let mut report = Report::new("morphism", format!("{} {label}", a.name()));
    let mut residues = Vec::new();
    for r in a.relations() {
        residues.push((r.label.clone(), r.residue()?));
    }
    for x in a.extras() {
        residues.push((x.label.clone(), x.residue()?));
    }
    for (l, res) in residues {
        let img = a.normal_form(&phi.apply(&res)?)?;
        report.push(Check::from_residue(format!("M1.{l}"), &img, names));
    }
    for g in 0..names.len() {
        let name = &names[g];
        let x = AlgebraElement::generator(a.ring(), g as Letter);
        let image = phi.apply(&x)?;
        let lhs = a.coproduct(&image)?;
        let rhs = a.normal_form_tensor(&phi.apply_tensor(&maps.coproduct[g])?)?;
        report.push(Check::from_residue(
            format!("M2.coproduct.{name}"),
            &lhs.try_sub(&rhs)?,
            names,
        ));
        let eps = a.counit(&image)?.try_sub(&phi.scalar(&maps.counit[g]))?;
        report.push(Check::from_residue(
            format!("M3.counit.{name}"),
            &eps,
            names,
        ));
        let s = a
            .antipode(&image)?
            .try_sub(&a.normal_form(&phi.apply(&maps.antipode[g])?)?)?;
        report.push(Check::from_residue(
            format!("M4.antipode.{name}"),
            &s,
            names,
        ));
    }
    Ok(report.finish())
}

/// `Delta(x*y) = Delta(x) Delta(y)` and `S(x*y) = S(y) S(x)` on the given
/// pairs, evaluated through normal forms.
pub fn verify_homomorphism_samples(
    a: &Algebra,
    pairs: &[(AlgebraElement, AlgebraElement)],
) -> Result<Report> {
    let names = a.names();
    let mut report = Report::new("homomorphism", a.name());
    let checks: Vec<Result<Vec<Check>>> = pairs
        .par_iter()
        .enumerate()
        .map(|(i, (x, y))| {
            let xy = a.mul(x, y)?;
            let dxy = a.coproduct(&xy)?;
            let dxdy = a.normal_form_tensor(&a.coproduct(x)?.try_mul(&a.coproduct(y)?)?)?;
            let sxy = a.antipode(&xy)?;
            let sysx = a.mul(&a.antipode(y)?, &a.antipode(x)?)?;
            let exy = a.counit(&xy)?;
            let exey = a.counit(x)?.try_mul(&a.counit(y)?)?;
            Ok(vec![
                Check::from_residue(format!("A1.coproduct.{i:04}"), &dxy.try_sub(&dxdy)?, names),
                Check::from_residue(format!("A2.antipode.{i:04}"), &sxy.try_sub(&sysx)?, names),
                Check::from_residue(format!("A3.counit.{i:04}"), &exy.try_sub(&exey)?, names),
            ])
        })
        .collect();
    for c in checks {
        report.extend(c?);
    }
    Ok(report.finish())
}
