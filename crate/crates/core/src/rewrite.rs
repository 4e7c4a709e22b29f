//! Directed rewriting of free-algebra words to PBW-style normal form.
//!
//! A normal form is computed left to right: the normal form of `w g` is
//! obtained from the (already normal) `w` by appending `g` and rewriting the
//! only places a pattern can now occur, the suffixes. Results of "normal
//! word times letter" are memoized per rule set.

use std::cell::Cell;
use std::collections::{BTreeMap, HashMap};
use std::sync::RwLock;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::element::{AlgebraElement, Element, Letter, TensorElement, Word};
use crate::error::{Error, Result};
use crate::report::{Check, Report};
use crate::scalar::{Ring, Scalar};

pub const DEFAULT_FUEL: u64 = 1_000_000;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RewriteRule {
    pub pattern: Word,
    pub replacement: AlgebraElement,
    pub label: String,
}

fn inversions(w: &Word) -> usize {
    let l = w.letters();
    (0..l.len())
        .map(|i| l[i + 1..].iter().filter(|&&y| y < l[i]).count())
        .sum()
}

impl RewriteRule {
    /// Every replacement term must be smaller than the pattern in
    /// (inversion count, length, lexicographic) order, or carry a positive
    /// power of `h`.
    fn check_terminating(&self, names: &[String]) -> Result<()> {
        let key = |w: &Word| (inversions(w), w.clone());
        let top = key(&self.pattern);
        for (w, c) in self.replacement.terms() {
            if c.min_h_order() == Some(0) && key(w) >= top {
                return Err(Error::MalformedRelation(format!(
                    "rule {}: replacement word {} does not decrease the pattern {}",
                    self.label,
                    w.render(names),
                    self.pattern.render(names)
                )));
            }
        }
        Ok(())
    }
}

struct Budget {
    used: Cell<u64>,
    limit: u64,
}

impl Budget {
    fn new(limit: u64) -> Self {
        Budget {
            used: Cell::new(0),
            limit,
        }
    }

    fn spend(&self) -> Result<()> {
        let n = self.used.get() + 1;
        if n > self.limit {
            return Err(Error::FuelExhausted { fuel: self.limit });
        }
        self.used.set(n);
        Ok(())
    }
}

/// Compiled rewrite rules for one presentation at one ring.
#[derive(Debug)]
pub struct RuleSet {
    ring: Ring,
    rules: Vec<RewriteRule>,
    index: HashMap<Vec<Letter>, usize>,
    lengths: Vec<usize>,
    fuel: u64,
    memo: RwLock<HashMap<(Word, Letter), AlgebraElement>>,
}

impl Clone for RuleSet {
    fn clone(&self) -> Self {
        RuleSet {
            ring: self.ring,
            rules: self.rules.clone(),
            index: self.index.clone(),
            lengths: self.lengths.clone(),
            fuel: self.fuel,
            memo: RwLock::new(HashMap::new()),
        }
    }
}

impl RuleSet {
    /// Builds a rule set; `names` is only used in error messages.
    pub fn new(ring: Ring, rules: Vec<RewriteRule>, names: &[String]) -> Result<Self> {
        let mut index = HashMap::new();
        for (i, r) in rules.iter().enumerate() {
            if r.pattern.len() < 2 {
                return Err(Error::MalformedRelation(format!(
                    "rule {} has a pattern shorter than two letters",
                    r.label
                )));
            }
            r.replacement.ring().check_same(&ring)?;
            r.check_terminating(names)?;
            if index.insert(r.pattern.letters().to_vec(), i).is_some() {
                return Err(Error::MalformedRelation(format!(
                    "two rules share the pattern {}",
                    r.pattern.render(names)
                )));
            }
        }
        let mut lengths: Vec<usize> = rules.iter().map(|r| r.pattern.len()).collect();
        lengths.sort_unstable();
        lengths.dedup();
        Ok(RuleSet {
            ring,
            rules,
            index,
            lengths,
            fuel: DEFAULT_FUEL,
            memo: RwLock::new(HashMap::new()),
        })
    }

    pub fn with_fuel(mut self, fuel: u64) -> Self {
        self.fuel = fuel;
        self.memo = RwLock::new(HashMap::new());
        self
    }

    pub fn ring(&self) -> Ring {
        self.ring
    }

    pub fn fuel(&self) -> u64 {
        self.fuel
    }

    pub fn rules(&self) -> &[RewriteRule] {
        &self.rules
    }

    pub fn rule(&self, pattern: &[Letter]) -> Option<&RewriteRule> {
        self.index.get(pattern).map(|&i| &self.rules[i])
    }

    /// Replaces every rule's replacement by its normal form.
    pub fn interreduce(self, names: &[String]) -> Result<Self> {
        let mut rules = Vec::with_capacity(self.rules.len());
        for r in &self.rules {
            rules.push(RewriteRule {
                pattern: r.pattern.clone(),
                replacement: self.normal_form(&r.replacement)?,
                label: r.label.clone(),
            });
        }
        let fuel = self.fuel;
        Ok(RuleSet::new(self.ring, rules, names)?.with_fuel(fuel))
    }

    fn suffix_rule(&self, u: &[Letter]) -> Option<usize> {
        self.lengths
            .iter()
            .take_while(|&&k| k <= u.len())
            .find_map(|&k| self.index.get(&u[u.len() - k..]).copied())
    }

    /// All `(position, rule)` pairs where a pattern occurs in `w`.
    pub fn redexes(&self, w: &Word) -> Vec<(usize, usize)> {
        let l = w.letters();
        let mut out = Vec::new();
        for pos in 0..l.len() {
            for &k in &self.lengths {
                if pos + k > l.len() {
                    break;
                }
                if let Some(&i) = self.index.get(&l[pos..pos + k]) {
                    out.push((pos, i));
                }
            }
        }
        out
    }

    pub fn is_normal(&self, w: &Word) -> bool {
        self.redexes(w).is_empty()
    }

    fn mul_letter(&self, v: &Word, g: Letter, budget: &Budget) -> Result<AlgebraElement> {
        let key = (v.clone(), g);
        if let Some(hit) = self.memo.read().expect("memo lock").get(&key) {
            return Ok(hit.clone());
        }
        let mut letters = v.letters().to_vec();
        letters.push(g);
        if letters.len() > self.ring.degree_cap {
            return Err(Error::DegreeCapExceeded {
                length: letters.len(),
                cap: self.ring.degree_cap,
            });
        }
        let result = match self.suffix_rule(&letters) {
            None => AlgebraElement::from_word(self.ring, Word(letters)),
            Some(i) => {
                budget.spend()?;
                let rule = &self.rules[i];
                let pre = Word(letters[..letters.len() - rule.pattern.len()].to_vec());
                let mut out = AlgebraElement::zero(self.ring);
                for (w, c) in rule.replacement.terms() {
                    let part =
                        self.extend(AlgebraElement::from_word(self.ring, pre.clone()), w, budget)?;
                    out.add_scaled(&part, c)?;
                }
                out
            }
        };
        self.memo
            .write()
            .expect("memo lock")
            .insert(key, result.clone());
        Ok(result)
    }

    fn right_mul(&self, x: &AlgebraElement, g: Letter, budget: &Budget) -> Result<AlgebraElement> {
        let mut out = AlgebraElement::zero(self.ring);
        for (w, c) in x.terms() {
            let p = self.mul_letter(w, g, budget)?;
            out.add_scaled(&p, c)?;
        }
        Ok(out.with_effective(x.effective_order()))
    }

    /// Normal form of `x * w` for a normal `x`.
    fn extend(&self, mut x: AlgebraElement, w: &Word, budget: &Budget) -> Result<AlgebraElement> {
        for &g in w.letters() {
            x = self.right_mul(&x, g, budget)?;
        }
        Ok(x)
    }

    pub fn normal_form_word(&self, w: &Word) -> Result<AlgebraElement> {
        let budget = Budget::new(self.fuel);
        self.extend(AlgebraElement::one(self.ring), w, &budget)
    }

    pub fn normal_form(&self, x: &AlgebraElement) -> Result<AlgebraElement> {
        x.ring().check_same(&self.ring)?;
        let budget = Budget::new(self.fuel);
        let mut out = AlgebraElement::zero(self.ring);
        for (w, c) in x.terms() {
            let nf = self.extend(AlgebraElement::one(self.ring), w, &budget)?;
            out.add_scaled(&nf, c)?;
        }
        Ok(out.with_effective(x.effective_order()))
    }

    /// Normal form of `x * y` for normal `x`, `y` without re-reducing `x`.
    pub fn multiply(&self, x: &AlgebraElement, y: &AlgebraElement) -> Result<AlgebraElement> {
        let budget = Budget::new(self.fuel);
        let mut out = AlgebraElement::zero(self.ring);
        for (w, c) in y.terms() {
            let part = self.extend(x.clone(), w, &budget)?;
            out.add_scaled(&part, c)?;
        }
        Ok(out.with_effective(x.effective_order().min(y.effective_order())))
    }

    /// Slotwise normal form.
    pub fn normal_form_tensor(&self, t: &TensorElement) -> Result<TensorElement> {
        t.ring().check_same(&self.ring)?;
        let mut cache: HashMap<Word, AlgebraElement> = HashMap::new();
        let mut out = TensorElement::zero(self.ring, t.slots());
        for (key, c) in t.terms() {
            let mut parts: Vec<(Vec<Word>, Scalar)> = vec![(Vec::new(), c.clone())];
            for w in key {
                if !cache.contains_key(w) {
                    cache.insert(w.clone(), self.normal_form_word(w)?);
                }
                let nf = &cache[w];
                let mut next = Vec::with_capacity(parts.len() * nf.term_count());
                for (ws, s) in &parts {
                    for (w2, c2) in nf.terms() {
                        let p = s.try_mul(c2)?;
                        if p.is_zero() {
                            continue;
                        }
                        let mut ws = ws.clone();
                        ws.push(w2.clone());
                        next.push((ws, p));
                    }
                }
                parts = next;
            }
            for (ws, s) in parts {
                out.add_term(ws, s)?;
            }
        }
        Ok(out.with_effective(t.effective_order()))
    }

    /// Normal form by rewriting a uniformly chosen redex at every step.
    /// Agrees with [`RuleSet::normal_form`] exactly when the rules are
    /// confluent on `x`.
    pub fn normal_form_randomized<R: Rng>(
        &self,
        x: &AlgebraElement,
        rng: &mut R,
    ) -> Result<AlgebraElement> {
        let budget = Budget::new(self.fuel);
        let mut pending: BTreeMap<Word, Scalar> = BTreeMap::new();
        let mut done = AlgebraElement::zero(self.ring);
        for (w, c) in x.terms() {
            pending.insert(w.clone(), c.clone());
        }
        while let Some((w, c)) = pending.pop_first() {
            let redexes = self.redexes(&w);
            if redexes.is_empty() {
                done.add_term(w, c)?;
                continue;
            }
            budget.spend()?;
            let (pos, i) = redexes[rng.gen_range(0..redexes.len())];
            let rule = &self.rules[i];
            let l = w.letters();
            let (pre, post) = (&l[..pos], &l[pos + rule.pattern.len()..]);
            for (rw, rc) in rule.replacement.terms() {
                let coeff = c.try_mul(rc)?;
                if coeff.is_zero() {
                    continue;
                }
                let mut letters = pre.to_vec();
                letters.extend_from_slice(rw.letters());
                letters.extend_from_slice(post);
                if letters.len() > self.ring.degree_cap {
                    return Err(Error::DegreeCapExceeded {
                        length: letters.len(),
                        cap: self.ring.degree_cap,
                    });
                }
                let nw = Word(letters);
                match pending.get_mut(&nw) {
                    Some(existing) => {
                        let sum = existing.try_add(&coeff)?;
                        if sum.is_zero() {
                            pending.remove(&nw);
                        } else {
                            *existing = sum;
                        }
                    }
                    None => {
                        pending.insert(nw, coeff);
                    }
                }
            }
        }
        Ok(done.with_effective(x.effective_order()))
    }

    /// Overlap words of pairs of rules with both one-step reductions.
    pub fn critical_pairs(&self) -> Result<Vec<(Word, AlgebraElement, AlgebraElement)>> {
        let ring = self.ring;
        let mut out = Vec::new();
        let wrap = |letters: &[Letter]| AlgebraElement::from_word(ring, Word(letters.to_vec()));
        for r1 in &self.rules {
            let p1 = r1.pattern.letters();
            for r2 in &self.rules {
                let p2 = r2.pattern.letters();
                for k in 1..p1.len().min(p2.len()) {
                    if p1[p1.len() - k..] != p2[..k] {
                        continue;
                    }
                    let mut word = p1.to_vec();
                    word.extend_from_slice(&p2[k..]);
                    let left = r1.replacement.try_mul(&wrap(&p2[k..]))?;
                    let right = wrap(&p1[..p1.len() - k]).try_mul(&r2.replacement)?;
                    out.push((Word(word), left, right));
                }
                if p2.len() < p1.len() {
                    for pos in 0..=p1.len() - p2.len() {
                        if p1[pos..pos + p2.len()] == *p2 {
                            let right = wrap(&p1[..pos])
                                .try_mul(&r2.replacement)?
                                .try_mul(&wrap(&p1[pos + p2.len()..]))?;
                            out.push((r1.pattern.clone(), r1.replacement.clone(), right));
                        }
                    }
                }
            }
        }
        Ok(out)
    }
}

/// Empirical confluence check: every overlap word resolves, and on random
/// words the normal form is independent of bracketing and of the order in
/// which redexes are rewritten.
pub fn check_consistency(
    rules: &RuleSet,
    names: &[String],
    subject: &str,
    samples: usize,
    seed: u64,
) -> Result<Report> {
    let order = rules.ring().order;
    let mut report = Report::new("consistency", subject);
    for (word, left, right) in rules.critical_pairs()? {
        let diff = rules
            .normal_form(&left)?
            .try_sub(&rules.normal_form(&right)?)?;
        let id = format!("C1.overlap.{}", word.render(names));
        report.push(Check::from_residue(id, &diff, names));
    }
    if names.is_empty() {
        return Ok(report.finish());
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let max_len = 6.min(rules.ring().degree_cap);
    let words: Vec<Word> = (0..samples)
        .map(|_| {
            let len = rng.gen_range(2..=max_len.max(2));
            Word(
                (0..len)
                    .map(|_| rng.gen_range(0..names.len()) as Letter)
                    .collect(),
            )
        })
        .collect();

    let outcomes: Vec<Result<(Option<String>, Option<String>)>> = words
        .par_iter()
        .enumerate()
        .map(|(i, w)| {
            let whole = rules.normal_form_word(w)?;
            let mut split_failure = None;
            for cut in 1..w.len() {
                let u = rules.normal_form_word(&Word(w.letters()[..cut].to_vec()))?;
                let v = rules.normal_form_word(&Word(w.letters()[cut..].to_vec()))?;
                let joined = rules.normal_form(&u.try_mul(&v)?)?;
                let diff = joined.try_sub(&whole)?;
                if !diff.is_zero() {
                    split_failure = Some(format!(
                        "{} split after {} letters: {}",
                        w.render(names),
                        cut,
                        diff.render(names)
                    ));
                    break;
                }
            }
            let mut local = ChaCha8Rng::seed_from_u64(seed.wrapping_add(i as u64 + 1));
            let x = AlgebraElement::from_word(rules.ring(), w.clone());
            let random = rules.normal_form_randomized(&x, &mut local)?;
            let diff = random.try_sub(&whole)?;
            let strategy_failure =
                (!diff.is_zero()).then(|| format!("{}: {}", w.render(names), diff.render(names)));
            Ok((split_failure, strategy_failure))
        })
        .collect();

    let mut splits = None;
    let mut strategies = None;
    for o in outcomes {
        let (a, b) = o?;
        if splits.is_none() {
            splits = a;
        }
        if strategies.is_none() {
            strategies = b;
        }
    }
    let detail = format!("{samples} random words, seed {seed}");
    report.push(match splits {
        None => Check::pass("C2.bracketing", order).with_detail(detail.clone()),
        Some(w) => Check::fail("C2.bracketing", order, w).with_detail(detail.clone()),
    });
    report.push(match strategies {
        None => Check::pass("C3.strategy", order).with_detail(detail),
        Some(w) => Check::fail("C3.strategy", order, w).with_detail(detail),
    });
    Ok(report.finish())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn names() -> Vec<String> {
        vec!["x".into(), "y".into()]
    }

    /// `y x -> x y + h`, a Weyl-type algebra.
    fn weyl(order: u32) -> RuleSet {
        let r = Ring::new(order);
        let rhs = AlgebraElement::from_terms(
            r,
            [
                (Word(vec![0, 1]), Scalar::one(r)),
                (Word::unit(), Scalar::h(r)),
            ],
        )
        .unwrap();
        let rule = RewriteRule {
            pattern: Word(vec![1, 0]),
            replacement: rhs,
            label: "[y,x]".into(),
        };
        RuleSet::new(r, vec![rule], &names()).unwrap()
    }

    #[test]
    fn weyl_normal_form() {
        let rs = weyl(3);
        let nf = rs.normal_form_word(&Word(vec![1, 1, 0])).unwrap();
        assert_eq!(nf.render(&names()), "2*h*y + x*y^2");
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let x = AlgebraElement::from_word(rs.ring(), Word(vec![1, 1, 0, 0]));
        assert_eq!(
            rs.normal_form_randomized(&x, &mut rng).unwrap(),
            rs.normal_form(&x).unwrap()
        );
    }

    #[test]
    fn non_decreasing_rule_rejected() {
        let r = Ring::new(2);
        let rule = RewriteRule {
            pattern: Word(vec![1, 0]),
            replacement: AlgebraElement::from_word(r, Word(vec![1, 1, 0])),
            label: "bad".into(),
        };
        assert!(matches!(
            RuleSet::new(r, vec![rule], &names()),
            Err(Error::MalformedRelation(_))
        ));
    }

    #[test]
    fn fuel_is_a_hard_limit() {
        let rs = weyl(3).with_fuel(2);
        assert!(matches!(
            rs.normal_form_word(&Word(vec![1, 1, 1, 0, 0, 0])),
            Err(Error::FuelExhausted { fuel: 2 })
        ));
    }

    #[test]
    fn degree_cap_is_a_hard_limit() {
        let r = Ring::new(1).with_degree_cap(3);
        let rs = RuleSet::new(r, weyl(1).rules().to_vec(), &names());
        assert!(rs.is_err() || rs.unwrap().normal_form_word(&Word(vec![0; 4])).is_err());
    }

    #[test]
    fn consistency_of_weyl() {
        let rs = weyl(3);
        let report = check_consistency(&rs, &names(), "weyl", 50, 1).unwrap();
        assert!(report.passed(), "{report:?}");
    }

    #[test]
    fn inconsistent_rules_detected() {
        // [y,x] = x, [z,x] = y, [z,y] = 0 violates the Jacobi identity, so
        // the overlap z y x does not resolve.
        let r = Ring::new(1);
        let gen = |g| AlgebraElement::generator(r, g);
        let word = |l: Vec<Letter>| AlgebraElement::from_word(r, Word(l));
        let rules = vec![
            RewriteRule {
                pattern: Word(vec![2, 1]),
                replacement: word(vec![1, 2]),
                label: "[z,y]".into(),
            },
            RewriteRule {
                pattern: Word(vec![1, 0]),
                replacement: word(vec![0, 1]).try_add(&gen(0)).unwrap(),
                label: "[y,x]".into(),
            },
            RewriteRule {
                pattern: Word(vec![2, 0]),
                replacement: word(vec![0, 2]).try_add(&gen(1)).unwrap(),
                label: "[z,x]".into(),
            },
        ];
        let n: Vec<String> = vec!["x".into(), "y".into(), "z".into()];
        let rs = RuleSet::new(r, rules, &n).unwrap();
        let report = check_consistency(&rs, &n, "bad", 20, 3).unwrap();
        let overlap = report.check("C1.overlap.z*y*x").unwrap();
        assert!(!overlap.passed());
        assert!(overlap.witness.is_some());
    }
}
