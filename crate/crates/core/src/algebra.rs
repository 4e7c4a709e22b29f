//! A presentation compiled at a fixed truncation: evaluated relations,
//! rewrite rules and Hopf structure maps.

use std::collections::HashMap;
use std::sync::RwLock;

use crate::element::{AlgebraElement, Element, Letter, TensorElement, Word};
use crate::error::{Error, Result};
use crate::expr::{evaluate, parse, Expr, Value};
use crate::presentation::{HopfSpec, Presentation};
use crate::report::Report;
use crate::rewrite::{check_consistency, RewriteRule, RuleSet};
use crate::scalar::{HSubstitution, Ring, Scalar, DEFAULT_ORDER};

/// `[left, right] = rhs` with `left` after `right` in generator order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CompiledRelation {
    pub label: String,
    pub left: Letter,
    pub right: Letter,
    pub rhs: AlgebraElement,
}

impl CompiledRelation {
    /// `left*right - right*left - rhs`, zero in the algebra.
    pub fn residue(&self) -> Result<AlgebraElement> {
        let r = self.rhs.ring();
        let lr = AlgebraElement::from_word(r, Word(vec![self.left, self.right]));
        let rl = AlgebraElement::from_word(r, Word(vec![self.right, self.left]));
        lr.try_sub(&rl)?.try_sub(&self.rhs)
    }
}

/// `word = rhs`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CompiledExtra {
    pub label: String,
    pub word: Word,
    pub rhs: AlgebraElement,
}

impl CompiledExtra {
    pub fn residue(&self) -> Result<AlgebraElement> {
        AlgebraElement::from_word(self.rhs.ring(), self.word.clone()).try_sub(&self.rhs)
    }
}

/// Generator images of the structure maps, indexed by letter. The
/// coproducts and antipodes are stored as evaluated, before normal ordering.
#[derive(Clone, Debug)]
pub struct HopfMaps {
    pub coproduct: Vec<TensorElement>,
    pub counit: Vec<Scalar>,
    pub antipode: Vec<AlgebraElement>,
}

#[derive(Default, Debug)]
struct Caches {
    coproduct: HashMap<Word, TensorElement>,
    antipode: HashMap<Word, AlgebraElement>,
}

#[derive(Debug)]
pub struct Algebra {
    presentation: Presentation,
    ring: Ring,
    names: Vec<String>,
    relations: Vec<CompiledRelation>,
    extras: Vec<CompiledExtra>,
    rules: RuleSet,
    hopf: Option<HopfMaps>,
    caches: RwLock<Caches>,
}

impl Algebra {
    pub fn new(p: &Presentation, ring: Ring) -> Result<Self> {
        p.validate()?;
        let names = p.generators.clone();
        let letter = |n: &str| -> Result<Letter> {
            p.index_of(n)
                .map(|i| i as Letter)
                .ok_or_else(|| Error::UnknownSymbol(n.to_string()))
        };
        let eval = |e: &Expr| evaluate(e, &names, ring);

        let mut relations = Vec::new();
        for r in &p.relations {
            let rhs = eval(&r.rhs)
                .and_then(Value::into_algebra)
                .map_err(|e| label_error(e, &r.label()))?;
            relations.push(CompiledRelation {
                label: r.label(),
                left: letter(&r.left)?,
                right: letter(&r.right)?,
                rhs,
            });
        }
        for c in &p.central {
            let ci = letter(c)?;
            for gi in 0..names.len() as Letter {
                if gi == ci {
                    continue;
                }
                let (l, r) = if ci > gi { (ci, gi) } else { (gi, ci) };
                if !relations.iter().any(|x| x.left == l && x.right == r) {
                    let label = format!("[{},{}]", names[l as usize], names[r as usize]);
                    relations.push(CompiledRelation {
                        label,
                        left: l,
                        right: r,
                        rhs: AlgebraElement::zero(ring),
                    });
                }
            }
        }
        let mut extras = Vec::new();
        for x in &p.extra {
            let word = Word(x.word.iter().map(|g| letter(g)).collect::<Result<_>>()?);
            let rhs = eval(&x.rhs)
                .and_then(Value::into_algebra)
                .map_err(|e| label_error(e, &x.label()))?;
            extras.push(CompiledExtra {
                label: x.label(),
                word,
                rhs,
            });
        }

        let rules = compile_rules(ring, &relations, &extras, &names)?;

        let hopf = match &p.hopf {
            None => None,
            Some(h) => Some(evaluate_hopf(h, &names, ring)?),
        };
        Ok(Algebra {
            presentation: p.clone(),
            ring,
            names,
            relations,
            extras,
            rules,
            hopf,
            caches: RwLock::new(Caches::default()),
        })
    }

    pub fn builtin(name: &str, ring: Ring) -> Result<Self> {
        Self::new(&crate::builtin::builtin(name)?, ring)
    }

    pub fn name(&self) -> &str {
        &self.presentation.name
    }

    pub fn presentation(&self) -> &Presentation {
        &self.presentation
    }

    pub fn ring(&self) -> Ring {
        self.ring
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn relations(&self) -> &[CompiledRelation] {
        &self.relations
    }

    pub fn extras(&self) -> &[CompiledExtra] {
        &self.extras
    }

    pub fn rules(&self) -> &RuleSet {
        &self.rules
    }

    pub fn hopf(&self) -> Result<&HopfMaps> {
        self.hopf
            .as_ref()
            .ok_or_else(|| Error::NoHopfData(self.presentation.name.clone()))
    }

    pub fn letter(&self, name: &str) -> Result<Letter> {
        let canonical = self
            .presentation
            .aliases
            .iter()
            .find(|(a, _)| a == name)
            .map_or(name, |(_, c)| c.as_str());
        self.presentation
            .index_of(canonical)
            .map(|i| i as Letter)
            .ok_or_else(|| Error::UnknownSymbol(name.to_string()))
    }

    pub fn generator(&self, name: &str) -> Result<AlgebraElement> {
        Ok(AlgebraElement::generator(self.ring, self.letter(name)?))
    }

    /// Parses and evaluates an expression over this algebra's generators,
    /// without normal ordering.
    pub fn parse(&self, src: &str) -> Result<Value> {
        let e = parse(src, &self.presentation.symbols())?;
        evaluate(&e, &self.names, self.ring)
    }

    pub fn parse_element(&self, src: &str) -> Result<AlgebraElement> {
        self.parse(src)?.into_algebra()
    }

    pub fn parse_tensor(&self, src: &str, slots: usize) -> Result<TensorElement> {
        self.parse(src)?.into_tensor(slots)
    }

    pub fn normal_form(&self, x: &AlgebraElement) -> Result<AlgebraElement> {
        self.rules.normal_form(x)
    }

    pub fn normal_form_tensor(&self, t: &TensorElement) -> Result<TensorElement> {
        self.rules.normal_form_tensor(t)
    }

    /// Normal form of the product.
    pub fn mul(&self, x: &AlgebraElement, y: &AlgebraElement) -> Result<AlgebraElement> {
        self.normal_form(&x.try_mul(y)?)
    }

    /// Normal form of `x*y - y*x`.
    pub fn commutator(&self, x: &AlgebraElement, y: &AlgebraElement) -> Result<AlgebraElement> {
        self.normal_form(&x.try_mul(y)?.try_sub(&y.try_mul(x)?)?)
    }

    pub fn render(&self, x: &AlgebraElement) -> String {
        x.render(&self.names)
    }

    pub fn render_tensor(&self, t: &TensorElement) -> String {
        t.render(&self.names)
    }

    pub fn check_consistency(&self, samples: usize, seed: u64) -> Result<Report> {
        check_consistency(&self.rules, &self.names, self.name(), samples, seed)
    }

    /// Rule set built from the commutation relations only, without the
    /// leading-word identities.
    pub fn relation_rules(&self) -> Result<RuleSet> {
        compile_rules(self.ring, &self.relations, &[], &self.names)
    }

    /// Coproduct of a word, extended multiplicatively and normal-ordered.
    pub fn coproduct_word(&self, w: &Word) -> Result<TensorElement> {
        if let Some(hit) = self.caches.read().expect("cache lock").coproduct.get(w) {
            return Ok(hit.clone());
        }
        let maps = self.hopf()?;
        let result = match w.letters().split_last() {
            None => TensorElement::one(self.ring, 2),
            Some((&g, rest)) => {
                let head = self.coproduct_word(&Word(rest.to_vec()))?;
                self.normal_form_tensor(&head.try_mul(&maps.coproduct[g as usize])?)?
            }
        };
        self.caches
            .write()
            .expect("cache lock")
            .coproduct
            .insert(w.clone(), result.clone());
        Ok(result)
    }

    pub fn coproduct(&self, x: &AlgebraElement) -> Result<TensorElement> {
        let mut out = TensorElement::zero(self.ring, 2);
        for (w, c) in x.terms() {
            out = out.try_add(&self.coproduct_word(w)?.scale(c)?)?;
        }
        Ok(out)
    }

    pub fn counit_word(&self, w: &Word) -> Result<Scalar> {
        let maps = self.hopf()?;
        let mut acc = Scalar::one(self.ring);
        for &g in w.letters() {
            acc = acc.try_mul(&maps.counit[g as usize])?;
        }
        Ok(acc)
    }

    pub fn counit(&self, x: &AlgebraElement) -> Result<Scalar> {
        let mut out = Scalar::zero(self.ring);
        for (w, c) in x.terms() {
            out = out.try_add(&self.counit_word(w)?.try_mul(c)?)?;
        }
        Ok(out)
    }

    /// Antipode of a word, extended anti-multiplicatively.
    pub fn antipode_word(&self, w: &Word) -> Result<AlgebraElement> {
        if let Some(hit) = self.caches.read().expect("cache lock").antipode.get(w) {
            return Ok(hit.clone());
        }
        let maps = self.hopf()?;
        let result = match w.letters().split_first() {
            None => AlgebraElement::one(self.ring),
            Some((&g, rest)) => {
                let tail = self.antipode_word(&Word(rest.to_vec()))?;
                self.mul(&tail, &maps.antipode[g as usize])?
            }
        };
        self.caches
            .write()
            .expect("cache lock")
            .antipode
            .insert(w.clone(), result.clone());
        Ok(result)
    }

    pub fn antipode(&self, x: &AlgebraElement) -> Result<AlgebraElement> {
        let mut out = AlgebraElement::zero(self.ring);
        for (w, c) in x.terms() {
            out = out.try_add(&self.antipode_word(w)?.scale(c)?)?;
        }
        Ok(out)
    }

    /// Applies the counit to one slot of a tensor.
    pub fn counit_slot(&self, t: &TensorElement, slot: usize) -> Result<TensorElement> {
        expand_slot(t, slot, |w| Ok(vec![(Vec::new(), self.counit_word(w)?)]))
    }

    /// Applies the coproduct to one slot of a tensor.
    pub fn coproduct_slot(&self, t: &TensorElement, slot: usize) -> Result<TensorElement> {
        let out = expand_slot(t, slot, |w| {
            Ok(self
                .coproduct_word(w)?
                .terms()
                .map(|(k, c)| (k.clone(), c.clone()))
                .collect())
        })?;
        self.normal_form_tensor(&out)
    }

    /// Applies the antipode to one slot of a tensor.
    pub fn antipode_slot(&self, t: &TensorElement, slot: usize) -> Result<TensorElement> {
        expand_slot(t, slot, |w| {
            Ok(self
                .antipode_word(w)?
                .terms()
                .map(|(k, c)| (vec![k.clone()], c.clone()))
                .collect())
        })
    }
}

fn label_error(e: Error, label: &str) -> Error {
    match e {
        Error::UnknownSymbol(s) => Error::Validation(format!("{label}: unknown symbol {s}")),
        other => other,
    }
}

fn compile_rules(
    ring: Ring,
    relations: &[CompiledRelation],
    extras: &[CompiledExtra],
    names: &[String],
) -> Result<RuleSet> {
    let mut rules = Vec::new();
    for r in relations {
        if r.left <= r.right {
            return Err(Error::MalformedRelation(format!(
                "{} is not in [later, earlier] form",
                r.label
            )));
        }
        let swapped = AlgebraElement::from_word(ring, Word(vec![r.right, r.left]));
        rules.push(RewriteRule {
            pattern: Word(vec![r.left, r.right]),
            replacement: swapped.try_add(&r.rhs)?,
            label: r.label.clone(),
        });
    }
    for x in extras {
        rules.push(RewriteRule {
            pattern: x.word.clone(),
            replacement: x.rhs.clone(),
            label: x.label.clone(),
        });
    }
    RuleSet::new(ring, rules, names)?.interreduce(names)
}

fn evaluate_hopf(h: &HopfSpec, names: &[String], ring: Ring) -> Result<HopfMaps> {
    let mut coproduct = Vec::new();
    let mut counit = Vec::new();
    let mut antipode = Vec::new();
    for g in names {
        let ctx = |what: &str, e: Error| match e {
            Error::SlotMismatch { .. } | Error::Validation(_) => {
                Error::Validation(format!("{what} of {g}: {e}"))
            }
            other => other,
        };
        coproduct.push(
            evaluate(&h.coproduct[g], &names.to_vec(), ring)
                .and_then(|v| v.into_tensor(2))
                .map_err(|e| ctx("coproduct", e))?,
        );
        counit.push(
            evaluate(&h.counit[g], &names.to_vec(), ring)
                .and_then(Value::into_scalar)
                .map_err(|e| ctx("counit", e))?,
        );
        antipode.push(
            evaluate(&h.antipode[g], &names.to_vec(), ring)
                .and_then(Value::into_algebra)
                .map_err(|e| ctx("antipode", e))?,
        );
    }
    Ok(HopfMaps {
        coproduct,
        counit,
        antipode,
    })
}

/// Replaces the word in `slot` by the tensor terms `f(word)`; the slot count
/// changes by `k - 1` where `k` is the number of words per term of `f`.
pub fn expand_slot(
    t: &TensorElement,
    slot: usize,
    f: impl Fn(&Word) -> Result<Vec<(Vec<Word>, Scalar)>>,
) -> Result<TensorElement> {
    let mut out: Option<TensorElement> = None;
    let mut width = None;
    for (key, c) in t.terms() {
        for (mid, c2) in f(&key[slot])? {
            let coeff = c.try_mul(&c2)?;
            let mut k = key[..slot].to_vec();
            k.extend(mid);
            k.extend_from_slice(&key[slot + 1..]);
            let acc = out.get_or_insert_with(|| TensorElement::zero(t.ring(), k.len()));
            width = Some(k.len());
            acc.add_term(k, coeff)?;
        }
    }
    Ok(match out {
        Some(o) => o.with_effective(t.effective_order()),
        None => TensorElement::zero(t.ring(), width.unwrap_or(t.slots())),
    })
}

/// The presentation with every relation, leading-word identity and Hopf
/// expression sent to `h = 0`.
pub fn classical_limit(p: &Presentation) -> Result<Presentation> {
    let ring = Ring::new(DEFAULT_ORDER);
    let symbols = p.symbols();
    let names = &p.generators;
    let limit = |e: &Expr, slots: usize| -> Result<Expr> {
        let text = match evaluate(e, names, ring)? {
            Value::Algebra(a) if slots <= 1 => a.substitute_h(HSubstitution::Zero).render(names),
            v => v
                .into_tensor(slots)?
                .substitute_h(HSubstitution::Zero)
                .render(names),
        };
        parse(&text, &symbols)
    };
    let mut out = p.clone();
    out.name = format!("{}-classical", p.name);
    for r in &mut out.relations {
        r.rhs = limit(&r.rhs, 1)?;
    }
    for x in &mut out.extra {
        x.rhs = limit(&x.rhs, 1)?;
    }
    if let Some(h) = &mut out.hopf {
        for e in h.coproduct.values_mut() {
            *e = limit(e, 2)?;
        }
        for e in h.counit.values_mut() {
            *e = limit(e, 1)?;
        }
        for e in h.antipode.values_mut() {
            *e = limit(e, 1)?;
        }
    }
    out.annotations.clear();
    out.scalings.clear();
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builtin::builtin;

    fn alg(name: &str, order: u32) -> Algebra {
        Algebra::builtin(name, Ring::new(order)).unwrap()
    }

    fn nf(a: &Algebra, src: &str) -> String {
        a.render(&a.normal_form(&a.parse_element(src).unwrap()).unwrap())
    }

    fn assert_nf(a: &Algebra, src: &str, expected: &str) {
        let got = a.normal_form(&a.parse_element(src).unwrap()).unwrap();
        assert_eq!(
            got,
            a.parse_element(expected).unwrap(),
            "{src} -> {}",
            a.render(&got)
        );
    }

    #[test]
    fn commutation_rules() {
        let f = alg("fun-slh2", 3);
        assert_nf(&f, "c*a", "a*c + h*c^2");
        assert_nf(&f, "d*a", "a*d - h*a*c + h*c*d - h^2*c^2");
        let u = alg("uh-sl2", 3);
        assert_nf(&u, "J3*J+", "J+*J3 + 2*J+ + (1/3)*h^2*J+^3");
        assert_nf(&u, "J-*J+", "J+*J- - J3");
        assert_eq!(nf(&u, "J3*J+"), "2*J+ + J+*J3 + (1/3)*h^2*J+^3");
    }

    #[test]
    fn determinant_rules() {
        let f = alg("fun-slh2", 3);
        assert_nf(&f, "b*c", "a*d - 1 - h*a*c");
        let p = alg("fun-ph11", 3);
        assert_eq!(nf(&p, "alpha*delta"), "1");
        assert_eq!(nf(&p, "delta*alpha"), "1");
        let rule = p.rules().rule(&[1, 0]).unwrap();
        assert_eq!(p.render(&rule.replacement), "1");
    }

    #[test]
    fn structure_maps() {
        let p = alg("fun-ph11", 3);
        let beta = p.generator("beta").unwrap();
        assert_eq!(
            p.render_tensor(&p.coproduct(&beta).unwrap()),
            "alpha@beta + beta@delta"
        );
        let s_beta = p.parse_element("-beta + h*alpha - h*delta").unwrap();
        assert_eq!(p.antipode(&beta).unwrap(), s_beta);
        let f = alg("fun-slh2", 3);
        let ad = f.parse_element("a*d").unwrap();
        assert_eq!(f.counit(&ad).unwrap().to_string(), "1");
        let bc = f.parse_element("b*c").unwrap();
        assert!(f.counit(&bc).unwrap().is_zero());
        let one = AlgebraElement::one(f.ring());
        assert_eq!(f.render_tensor(&f.coproduct(&one).unwrap()), "1@1");
        assert_eq!(f.render(&f.antipode(&one).unwrap()), "1");
    }

    #[test]
    fn classical_limits() {
        let sl2 = classical_limit(&builtin("uh-sl2").unwrap()).unwrap();
        let rhs = |l: &str, r: &str| sl2.relation(l, r).unwrap().rhs.to_string();
        assert_eq!(rhs("J3", "J+"), "2*J+");
        assert_eq!(rhs("J-", "J3"), "2*J-");
        assert_eq!(rhs("J-", "J+"), "-J3");
        assert_eq!(
            sl2.hopf.as_ref().unwrap().coproduct["J-"].to_string(),
            "1@J- + J-@1"
        );
        let fun = classical_limit(&builtin("fun-slh2").unwrap()).unwrap();
        assert!(fun.relations.iter().all(|r| r.rhs.to_string() == "0"));
        let p11 = classical_limit(&builtin("uh-p11").unwrap()).unwrap();
        assert_eq!(p11.relation("K", "P+").unwrap().rhs.to_string(), "P+");
        assert_eq!(p11.relation("P-", "K").unwrap().rhs.to_string(), "P-");
        assert_eq!(p11.relation("P-", "P+").unwrap().rhs.to_string(), "0");
    }

    #[test]
    fn missing_hopf_data() {
        let p = builtin("heis3").unwrap().without_hopf();
        let a = Algebra::new(&p, Ring::new(2)).unwrap();
        let x = a.generator("A").unwrap();
        assert!(matches!(a.coproduct(&x), Err(Error::NoHopfData(_))));
    }
}
