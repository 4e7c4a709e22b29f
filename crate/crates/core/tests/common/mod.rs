//! Sign-flip mutants of built-in presentations and the checks that catch
//! them. Consistency and Hopf checks alone cannot catch flips that yield an
//! isomorphic Hopf algebra, such as `[J+,J-] = -J3` (isomorphic under
//! `J- -> -J-`); the pairing and Casimir centrality fix those signs.

use hopfkit::algebra::Algebra;
use hopfkit::builtin::builtin;
use hopfkit::expr::Expr;
use hopfkit::hopf::verify_hopf;
use hopfkit::invariants::{casimir_in, verify_central};
use hopfkit::pairing::{verify_pairing_with, Pairing, PairingTable};
use hopfkit::presentation::Presentation;
use hopfkit::Ring;

pub struct Mutant {
    pub label: String,
    pub presentation: Presentation,
}

fn flip_term(rhs: &Expr, i: usize) -> Expr {
    let terms: Vec<(bool, Expr)> = rhs
        .additive_terms()
        .into_iter()
        .enumerate()
        .map(|(j, (neg, e))| (if j == i { !neg } else { neg }, e.clone()))
        .collect();
    Expr::from_additive_terms(&terms)
}

pub fn mutants(name: &str) -> Vec<Mutant> {
    let p = builtin(name).unwrap();
    let mut out = Vec::new();
    for (r, rel) in p.relations.iter().enumerate() {
        for i in 0..rel.rhs.additive_terms().len() {
            let mut m = p.clone();
            m.relations[r].rhs = flip_term(&rel.rhs, i);
            out.push(Mutant {
                label: format!("{name} {} term {i}: {}", rel.label(), m.relations[r].rhs),
                presentation: m,
            });
        }
    }
    for (x, extra) in p.extra.iter().enumerate() {
        for i in 0..extra.rhs.additive_terms().len() {
            let mut m = p.clone();
            m.extra[x].rhs = flip_term(&extra.rhs, i);
            out.push(Mutant {
                label: format!("{name} {} term {i}: {}", extra.label(), m.extra[x].rhs),
                presentation: m,
            });
        }
    }
    out
}

fn envelope() -> Algebra {
    Algebra::builtin("uh-sl2", Ring::new(3)).unwrap()
}

fn functions() -> Algebra {
    Algebra::builtin("fun-slh2", Ring::new(3)).unwrap()
}

/// How a mutant was caught, or `None` if it slipped through.
pub fn detect(m: &Mutant) -> Option<String> {
    let a = match Algebra::new(&m.presentation, Ring::new(3)) {
        Ok(a) => a,
        Err(e) => return Some(format!("rejected: {e}")),
    };
    let mut caught = Vec::new();
    match a.check_consistency(200, 7) {
        Ok(r) if !r.passed() => caught.push(format!(
            "consistency {}",
            r.failures().next().map(|c| c.id.as_str()).unwrap_or("")
        )),
        Ok(_) => {}
        Err(e) => caught.push(format!("consistency error: {e}")),
    }
    match verify_hopf(&a) {
        Ok(r) if !r.passed() => caught.push(format!(
            "hopf {}",
            r.failures().next().map(|c| c.id.as_str()).unwrap_or("")
        )),
        Ok(_) => {}
        Err(e) => caught.push(format!("hopf error: {e}")),
    }
    let table = PairingTable::fundamental();
    let pairing = Algebra::new(&m.presentation, Ring::new(3))
        .and_then(|copy| match a.name() {
            "uh-sl2" => Pairing::with_table(copy, functions(), &table, 3),
            _ => Pairing::with_table(envelope(), copy, &table, 3),
        })
        .and_then(|p| verify_pairing_with(&p, 100, 7));
    match pairing {
        Ok(r) if !r.passed() => caught.push(format!(
            "pairing {}",
            r.failures().next().map(|c| c.id.as_str()).unwrap_or("")
        )),
        Ok(_) => {}
        Err(e) => caught.push(format!("pairing error: {e}")),
    }
    if a.name() == "uh-sl2" {
        let central =
            casimir_in(&a, "casimir-sl2").and_then(|c| verify_central(&a, &c, "casimir-sl2", 2, 7));
        match central {
            Ok(r) if !r.passed() => caught.push(format!(
                "casimir {}",
                r.failures().next().map(|c| c.id.as_str()).unwrap_or("")
            )),
            Ok(_) => {}
            Err(e) => caught.push(format!("casimir error: {e}")),
        }
    }
    (!caught.is_empty()).then(|| caught.join("; "))
}
