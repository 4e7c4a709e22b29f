//! The pairing between uh-sl2 and fun-slh2 given by the fundamental
//! representation, extended by `<x, ab> = <Δx, a⊗b>` and `<xy, a> = <x⊗y, Δa>`.
//!
//! Values are computed on the free algebras with the coproducts of words
//! taken as unreduced products of generator coproducts, so that vanishing on
//! relation residues is a genuine check that the pairing descends.

use std::collections::{BTreeMap, HashMap};
use std::sync::RwLock;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::algebra::Algebra;
use crate::element::{AlgebraElement, Element, Letter, TensorElement, Word};
use crate::error::{Error, Result};
use crate::report::{Check, Report};
use crate::scalar::{integer, Rational, Ring, Scalar};

pub const DEFAULT_DEGREE_BOUND: usize = 3;

/// Values of the pairing on generators, keyed by (enveloping, function)
/// generator names. Missing entries are zero.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PairingTable {
    pub base: BTreeMap<(String, String), Rational>,
}

impl PairingTable {
    /// `<J+,T> = E12`, `<J-,T> = E21`, `<J3,T> = diag(1,-1)` with
    /// `T = [[a, b], [c, d]]`.
    pub fn fundamental() -> Self {
        let mut base = BTreeMap::new();
        for (x, f, v) in [
            ("J+", "b", 1),
            ("J-", "c", 1),
            ("J3", "a", 1),
            ("J3", "d", -1),
        ] {
            base.insert((x.to_string(), f.to_string()), integer(v));
        }
        PairingTable { base }
    }
}

type Key = (Word, Word);

#[derive(Debug)]
pub struct Pairing {
    envelope: Algebra,
    functions: Algebra,
    table: Vec<Vec<Scalar>>,
    degree_bound: usize,
    memo: RwLock<HashMap<Key, Scalar>>,
}

fn raw_coproduct(a: &Algebra, w: &Word) -> Result<TensorElement> {
    let maps = a.hopf()?;
    let mut acc = TensorElement::one(a.ring(), 2);
    for &g in w.letters() {
        acc = acc.try_mul(&maps.coproduct[g as usize])?;
    }
    Ok(acc)
}

impl Pairing {
    pub fn new(ring: Ring, degree_bound: usize) -> Result<Self> {
        let envelope = Algebra::builtin("uh-sl2", ring)?;
        let functions = Algebra::builtin("fun-slh2", ring)?;
        Self::with_table(
            envelope,
            functions,
            &PairingTable::fundamental(),
            degree_bound,
        )
    }

    pub fn with_table(
        envelope: Algebra,
        functions: Algebra,
        table: &PairingTable,
        degree_bound: usize,
    ) -> Result<Self> {
        let ring = envelope.ring();
        functions.ring().check_same(&ring)?;
        let mut t = vec![vec![Scalar::zero(ring); functions.names().len()]; envelope.names().len()];
        for ((x, f), v) in &table.base {
            let xi = envelope.letter(x)? as usize;
            let fi = functions.letter(f)? as usize;
            t[xi][fi] = Scalar::from_rational(ring, v.clone());
        }
        Ok(Pairing {
            envelope,
            functions,
            table: t,
            degree_bound,
            memo: RwLock::new(HashMap::new()),
        })
    }

    pub fn envelope(&self) -> &Algebra {
        &self.envelope
    }

    pub fn functions(&self) -> &Algebra {
        &self.functions
    }

    fn ring(&self) -> Ring {
        self.envelope.ring()
    }

    fn check_degree(&self, x: &AlgebraElement, f: &AlgebraElement) -> Result<()> {
        let length = x.max_degree().max(f.max_degree());
        if length > self.degree_bound {
            return Err(Error::DegreeCapExceeded {
                length,
                cap: self.degree_bound,
            });
        }
        Ok(())
    }

    /// `<x, f>` for `x` over uh-sl2 and `f` over fun-slh2.
    pub fn pair(&self, x: &AlgebraElement, f: &AlgebraElement) -> Result<Scalar> {
        self.check_degree(x, f)?;
        self.pair_unbounded(x, f)
    }

    fn pair_unbounded(&self, x: &AlgebraElement, f: &AlgebraElement) -> Result<Scalar> {
        let mut out = Scalar::zero(self.ring());
        for (xw, xc) in x.terms() {
            for (fw, fc) in f.terms() {
                let v = self.pair_words(xw, fw)?;
                out = out.try_add(&v.try_mul(xc)?.try_mul(fc)?)?;
            }
        }
        Ok(out)
    }

    /// Pairs two tensors slot by slot.
    fn pair_tensors(&self, x: &TensorElement, f: &TensorElement) -> Result<Scalar> {
        let mut out = Scalar::zero(self.ring());
        for (xk, xc) in x.terms() {
            for (fk, fc) in f.terms() {
                let mut v = xc.try_mul(fc)?;
                for (xw, fw) in xk.iter().zip(fk) {
                    if v.is_zero() {
                        break;
                    }
                    v = v.try_mul(&self.pair_words(xw, fw)?)?;
                }
                out = out.try_add(&v)?;
            }
        }
        Ok(out)
    }

    fn pair_words(&self, x: &Word, f: &Word) -> Result<Scalar> {
        let key = (x.clone(), f.clone());
        if let Some(v) = self.memo.read().expect("pairing memo").get(&key) {
            return Ok(v.clone());
        }
        let ring = self.ring();
        let v = match (x.len(), f.len()) {
            (0, _) => self.functions.counit_word(f)?,
            (_, 0) => self.envelope.counit_word(x)?,
            (1, 1) => self.table[x.letters()[0] as usize][f.letters()[0] as usize].clone(),
            (_, m) if m >= 2 => {
                let (head, last) = f.letters().split_at(m - 1);
                self.split_function_word(x, &Word(head.to_vec()), &Word(last.to_vec()))?
            }
            (n, _) => {
                let (head, last) = x.letters().split_at(n - 1);
                self.split_envelope_word(&Word(head.to_vec()), &Word(last.to_vec()), f)?
            }
        };
        debug_assert_eq!(v.ring(), ring);
        self.memo
            .write()
            .expect("pairing memo")
            .insert(key, v.clone());
        Ok(v)
    }

    /// `<x, f1 f2> = <Δx, f1⊗f2>`.
    fn split_function_word(&self, x: &Word, f1: &Word, f2: &Word) -> Result<Scalar> {
        let dx = raw_coproduct(&self.envelope, x)?;
        let ring = self.ring();
        let f = TensorElement::from_terms(
            ring,
            2,
            [(vec![f1.clone(), f2.clone()], Scalar::one(ring))],
        )?;
        self.pair_tensors(&dx, &f)
    }

    /// `<x1 x2, f> = <x1⊗x2, Δf>`.
    fn split_envelope_word(&self, x1: &Word, x2: &Word, f: &Word) -> Result<Scalar> {
        let df = raw_coproduct(&self.functions, f)?;
        let ring = self.ring();
        let x = TensorElement::from_terms(
            ring,
            2,
            [(vec![x1.clone(), x2.clone()], Scalar::one(ring))],
        )?;
        self.pair_tensors(&x, &df)
    }
}

/// All words of length at most `max_len` over `letters` generators.
fn all_words(letters: usize, max_len: usize) -> Vec<Word> {
    let mut out = vec![Word::unit()];
    let mut layer = vec![Word::unit()];
    for _ in 0..max_len {
        let mut next = Vec::new();
        for w in &layer {
            for g in 0..letters {
                next.push(w.concat(&Word::letter(g as Letter)));
            }
        }
        out.extend(next.iter().cloned());
        layer = next;
    }
    out
}

/// Checks that the pairing annihilates both relation ideals (P1, P2) and
/// that its value does not depend on where words are split (P3).
pub fn verify_pairing(
    ring: Ring,
    degree_bound: usize,
    samples: usize,
    seed: u64,
) -> Result<Report> {
    verify_pairing_with(&Pairing::new(ring, degree_bound)?, samples, seed)
}

pub fn verify_pairing_with(p: &Pairing, samples: usize, seed: u64) -> Result<Report> {
    let degree_bound = p.degree_bound;
    let order = p.ring().order;
    let u = p.envelope();
    let fun = p.functions();
    let ring = u.ring();
    let mut report = Report::new("pairing", format!("{} x {}", u.name(), fun.name()));

    let u_words = all_words(u.names().len(), degree_bound);
    let mut f_residues: Vec<(String, AlgebraElement)> = fun
        .relations()
        .iter()
        .map(|r| Ok((r.label.clone(), r.residue()?)))
        .collect::<Result<_>>()?;
    for x in fun.extras() {
        f_residues.push((x.label.clone(), x.residue()?));
    }
    for (label, r) in &f_residues {
        let mut witness = None;
        for w in &u_words {
            let v = p.pair_unbounded(&AlgebraElement::from_word(ring, w.clone()), r)?;
            if !v.is_zero() {
                witness = Some(format!("<{}, residue> = {v}", w.render(u.names())));
                break;
            }
        }
        report.push(check_from(
            format!("P1.{label}"),
            order,
            witness,
            format!(
                "{} enveloping words up to degree {degree_bound}",
                u_words.len()
            ),
        ));
    }

    let f_words = all_words(fun.names().len(), degree_bound);
    for r in u.relations() {
        let s = r.residue()?;
        let mut witness = None;
        for w in &f_words {
            let v = p.pair_unbounded(&s, &AlgebraElement::from_word(ring, w.clone()))?;
            if !v.is_zero() {
                witness = Some(format!("<residue, {}> = {v}", w.render(fun.names())));
                break;
            }
        }
        report.push(check_from(
            format!("P2.{}", r.label),
            order,
            witness,
            format!(
                "{} function words up to degree {degree_bound}",
                f_words.len()
            ),
        ));
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut witness = None;
    for _ in 0..samples {
        let random_word = |rng: &mut ChaCha8Rng, letters: usize| {
            let len = rng.gen_range(1..=degree_bound);
            Word(
                (0..len)
                    .map(|_| rng.gen_range(0..letters) as Letter)
                    .collect(),
            )
        };
        let x = random_word(&mut rng, u.names().len());
        let f = random_word(&mut rng, fun.names().len());
        let reference = p.pair_words(&x, &f)?;
        for k in 1..f.len() {
            let (f1, f2) = f.letters().split_at(k);
            let v = p.split_function_word(&x, &Word(f1.to_vec()), &Word(f2.to_vec()))?;
            if v != reference {
                witness = Some(format!(
                    "<{}, {}> split after {k} function letters: {v} vs {reference}",
                    x.render(u.names()),
                    f.render(fun.names())
                ));
            }
        }
        for k in 1..x.len() {
            let (x1, x2) = x.letters().split_at(k);
            let v = p.split_envelope_word(&Word(x1.to_vec()), &Word(x2.to_vec()), &f)?;
            if v != reference {
                witness = Some(format!(
                    "<{}, {}> split after {k} enveloping letters: {v} vs {reference}",
                    x.render(u.names()),
                    f.render(fun.names())
                ));
            }
        }
        if witness.is_some() {
            break;
        }
    }
    report.push(check_from(
        "P3.splitting".to_string(),
        order,
        witness,
        format!("{samples} random word pairs, seed {seed}"),
    ));
    Ok(report.finish())
}

fn check_from(id: String, order: u32, witness: Option<String>, detail: String) -> Check {
    match witness {
        None => Check::pass(id, order),
        Some(w) => Check::fail(id, order, w),
    }
    .with_detail(detail)
}
