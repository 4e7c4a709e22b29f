//! Free-algebra words, linear combinations and slot-tagged tensor powers.

use std::cmp::Ordering;
use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::scalar::{join_signed, render_term, HSubstitution, Rational, Ring, Scalar};

/// Index of a generator in its presentation's ordered generator list.
pub type Letter = u16;

/// A monomial in the free algebra. Ordered by length, then lexicographically
/// by generator index.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Word(pub Vec<Letter>);

impl Word {
    pub fn unit() -> Self {
        Word(Vec::new())
    }

    pub fn letter(g: Letter) -> Self {
        Word(vec![g])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut v = Vec::with_capacity(self.0.len() + other.0.len());
        v.extend_from_slice(&self.0);
        v.extend_from_slice(&other.0);
        Word(v)
    }

    pub fn reversed(&self) -> Word {
        Word(self.0.iter().rev().copied().collect())
    }

    /// `J+^3*J3`-style rendering; `1` for the empty word.
    pub fn render(&self, names: &[String]) -> String {
        if self.0.is_empty() {
            return "1".into();
        }
        let mut parts = Vec::new();
        let mut i = 0;
        while i < self.0.len() {
            let g = self.0[i];
            let mut j = i;
            while j < self.0.len() && self.0[j] == g {
                j += 1;
            }
            let name = names
                .get(g as usize)
                .cloned()
                .unwrap_or_else(|| format!("g{g}"));
            if j - i == 1 {
                parts.push(name);
            } else {
                parts.push(format!("{}^{}", name, j - i));
            }
            i = j;
        }
        parts.join("*")
    }
}

impl Ord for Word {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0
            .len()
            .cmp(&other.0.len())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Word {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

fn check_cap(ring: &Ring, len: usize) -> Result<()> {
    if len > ring.degree_cap {
        Err(Error::DegreeCapExceeded {
            length: len,
            cap: ring.degree_cap,
        })
    } else {
        Ok(())
    }
}

fn accumulate<K: Ord>(map: &mut BTreeMap<K, Scalar>, key: K, coeff: Scalar) -> Result<()> {
    if coeff.is_zero() {
        return Ok(());
    }
    match map.get_mut(&key) {
        Some(existing) => {
            let sum = existing.try_add(&coeff)?;
            if sum.is_zero() {
                map.remove(&key);
            } else {
                *existing = sum;
            }
        }
        None => {
            map.insert(key, coeff);
        }
    }
    Ok(())
}

/// Operations shared by algebra and tensor elements, enough to evaluate
/// power series.
pub trait Element: Clone + PartialEq + Sized {
    fn ring(&self) -> Ring;
    fn zero_like(&self) -> Self;
    fn one_like(&self) -> Self;
    fn try_add(&self, other: &Self) -> Result<Self>;
    fn try_mul(&self, other: &Self) -> Result<Self>;
    fn scale(&self, factor: &Scalar) -> Result<Self>;
    fn is_zero(&self) -> bool;
    /// Lowest power of `h` over all coefficients.
    fn min_h_order(&self) -> Option<u32>;
    /// The coefficient of the unit word (all slots empty).
    fn unit_coefficient(&self) -> Scalar;
    fn effective_order(&self) -> u32;

    fn try_sub(&self, other: &Self) -> Result<Self> {
        self.try_add(&other.neg())
    }

    fn neg(&self) -> Self {
        self.scale(&Scalar::from_int(self.ring(), -1))
            .expect("negation never overflows")
    }

    fn scale_rational(&self, factor: &Rational) -> Self {
        self.scale(&Scalar::from_rational(self.ring(), factor.clone()))
            .expect("rational scaling never overflows")
    }
}

/// A finite linear combination of words with truncated coefficients.
#[derive(Clone, Debug)]
pub struct AlgebraElement {
    ring: Ring,
    effective: u32,
    terms: BTreeMap<Word, Scalar>,
}

impl PartialEq for AlgebraElement {
    fn eq(&self, other: &Self) -> bool {
        self.ring == other.ring && self.terms == other.terms
    }
}

impl Eq for AlgebraElement {}

impl AlgebraElement {
    pub fn zero(ring: Ring) -> Self {
        AlgebraElement {
            ring,
            effective: ring.order,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(ring: Ring) -> Self {
        Self::from_scalar(Scalar::one(ring))
    }

    pub fn from_scalar(s: Scalar) -> Self {
        let mut e = Self::zero(s.ring());
        e.effective = s.effective_order();
        if !s.is_zero() {
            e.terms.insert(Word::unit(), s);
        }
        e
    }

    pub fn generator(ring: Ring, g: Letter) -> Self {
        Self::from_word(ring, Word::letter(g))
    }

    pub fn from_word(ring: Ring, w: Word) -> Self {
        let mut e = Self::zero(ring);
        e.terms.insert(w, Scalar::one(ring));
        e
    }

    pub fn from_terms(ring: Ring, terms: impl IntoIterator<Item = (Word, Scalar)>) -> Result<Self> {
        let mut e = Self::zero(ring);
        for (w, c) in terms {
            c.ring().check_same(&ring)?;
            check_cap(&ring, w.len())?;
            e.effective = e.effective.min(c.effective_order());
            accumulate(&mut e.terms, w, c)?;
        }
        Ok(e)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Word, &Scalar)> {
        self.terms.iter()
    }

    pub fn term_count(&self) -> usize {
        self.terms.len()
    }

    pub fn coefficient(&self, w: &Word) -> Scalar {
        self.terms
            .get(w)
            .cloned()
            .unwrap_or_else(|| Scalar::zero(self.ring))
    }

    pub fn max_degree(&self) -> usize {
        self.terms.keys().map(Word::len).max().unwrap_or(0)
    }

    pub(crate) fn with_effective(mut self, effective: u32) -> Self {
        self.effective = self.effective.min(effective);
        self
    }

    /// In-place `self += c * w`.
    pub(crate) fn add_term(&mut self, w: Word, c: Scalar) -> Result<()> {
        check_cap(&self.ring, w.len())?;
        self.effective = self.effective.min(c.effective_order());
        accumulate(&mut self.terms, w, c)
    }

    /// In-place `self += c * x`.
    pub(crate) fn add_scaled(&mut self, x: &AlgebraElement, c: &Scalar) -> Result<()> {
        self.effective = self.effective.min(x.effective).min(c.effective_order());
        for (w, d) in &x.terms {
            let p = d.try_mul(c)?;
            accumulate(&mut self.terms, w.clone(), p)?;
        }
        Ok(())
    }

    /// Applies `f` to every coefficient.
    pub fn map_coefficients(&self, f: impl Fn(&Scalar) -> Result<Scalar>) -> Result<Self> {
        let mut out = Self::zero(self.ring);
        out.effective = self.effective;
        for (w, c) in &self.terms {
            accumulate(&mut out.terms, w.clone(), f(c)?)?;
        }
        Ok(out)
    }

    /// Rewrites every word letter-by-letter; `f` sends a letter to an element.
    pub fn substitute(&self, f: impl Fn(Letter) -> Result<AlgebraElement>) -> Result<Self> {
        let mut out = Self::zero(self.ring);
        for (w, c) in &self.terms {
            let mut term = AlgebraElement::from_scalar(c.clone());
            for &g in w.letters() {
                term = term.try_mul(&f(g)?)?;
            }
            out = out.try_add(&term)?;
        }
        Ok(out.with_effective(self.effective))
    }

    pub fn substitute_h(&self, mode: HSubstitution) -> Self {
        self.map_coefficients(|c| Ok(c.substitute_h(mode)))
            .expect("h substitution keeps the ring")
    }

    pub fn exact_divide_h(&self, k: u32) -> Result<Self> {
        let mut out = self.map_coefficients(|c| c.exact_divide_h(k))?;
        out.effective = self.effective.saturating_sub(k);
        Ok(out)
    }

    pub fn limit_epsilon(&self) -> Result<Self> {
        self.map_coefficients(|c| c.limit_epsilon())
    }

    pub fn recast(&self, ring: Ring) -> Result<Self> {
        let mut out = Self::zero(ring);
        for (w, c) in &self.terms {
            check_cap(&ring, w.len())?;
            accumulate(&mut out.terms, w.clone(), c.recast(ring)?)?;
        }
        out.effective = self.effective.min(ring.order);
        Ok(out)
    }

    /// Reverses every word (used for anti-homomorphisms).
    pub fn reversed_words(&self) -> Self {
        let mut out = Self::zero(self.ring);
        out.effective = self.effective;
        for (w, c) in &self.terms {
            out.terms.insert(w.reversed(), c.clone());
        }
        out
    }

    /// Letters appearing anywhere in the element.
    pub fn support(&self) -> std::collections::BTreeSet<Letter> {
        self.terms
            .keys()
            .flat_map(|w| w.letters().iter().copied())
            .collect()
    }

    pub fn render(&self, names: &[String]) -> String {
        let mut pieces = Vec::new();
        for (w, c) in &self.terms {
            let tail = (!w.is_empty()).then(|| w.render(names));
            for (m, r) in c.terms() {
                pieces.push(render_term(r, m, tail.as_deref()));
            }
        }
        join_signed(pieces)
    }
}

impl Element for AlgebraElement {
    fn ring(&self) -> Ring {
        self.ring
    }

    fn zero_like(&self) -> Self {
        Self::zero(self.ring)
    }

    fn one_like(&self) -> Self {
        Self::one(self.ring)
    }

    fn try_add(&self, other: &Self) -> Result<Self> {
        self.ring.check_same(&other.ring)?;
        let mut out = self.clone();
        out.effective = self.effective.min(other.effective);
        for (w, c) in &other.terms {
            accumulate(&mut out.terms, w.clone(), c.clone())?;
        }
        Ok(out)
    }

    fn try_mul(&self, other: &Self) -> Result<Self> {
        self.ring.check_same(&other.ring)?;
        let mut out = Self::zero(self.ring);
        out.effective = self.effective.min(other.effective);
        for (w1, c1) in &self.terms {
            for (w2, c2) in &other.terms {
                let c = c1.try_mul(c2)?;
                if c.is_zero() {
                    continue;
                }
                check_cap(&self.ring, w1.len() + w2.len())?;
                accumulate(&mut out.terms, w1.concat(w2), c)?;
            }
        }
        Ok(out)
    }

    fn scale(&self, factor: &Scalar) -> Result<Self> {
        let mut out = self.map_coefficients(|c| c.try_mul(factor))?;
        out.effective = out.effective.min(factor.effective_order());
        Ok(out)
    }

    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn min_h_order(&self) -> Option<u32> {
        self.terms.values().filter_map(Scalar::min_h_order).min()
    }

    fn unit_coefficient(&self) -> Scalar {
        self.coefficient(&Word::unit())
    }

    fn effective_order(&self) -> u32 {
        self.effective
    }
}

/// Key of a tensor term: one word per slot.
pub type SlotWords = Vec<Word>;

/// An element of the `n`-fold tensor power of the free algebra.
#[derive(Clone, Debug)]
pub struct TensorElement {
    ring: Ring,
    slots: usize,
    effective: u32,
    terms: BTreeMap<SlotWords, Scalar>,
}

impl PartialEq for TensorElement {
    fn eq(&self, other: &Self) -> bool {
        self.ring == other.ring && self.slots == other.slots && self.terms == other.terms
    }
}

impl Eq for TensorElement {}

impl TensorElement {
    pub fn zero(ring: Ring, slots: usize) -> Self {
        TensorElement {
            ring,
            slots,
            effective: ring.order,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(ring: Ring, slots: usize) -> Self {
        let mut t = Self::zero(ring, slots);
        t.terms.insert(vec![Word::unit(); slots], Scalar::one(ring));
        t
    }

    pub fn from_terms(
        ring: Ring,
        slots: usize,
        terms: impl IntoIterator<Item = (SlotWords, Scalar)>,
    ) -> Result<Self> {
        let mut t = Self::zero(ring, slots);
        for (key, c) in terms {
            if key.len() != slots {
                return Err(Error::SlotMismatch {
                    left: slots,
                    right: key.len(),
                });
            }
            c.ring().check_same(&ring)?;
            for w in &key {
                check_cap(&ring, w.len())?;
            }
            t.effective = t.effective.min(c.effective_order());
            accumulate(&mut t.terms, key, c)?;
        }
        Ok(t)
    }

    /// `x` placed in `slot` (0-based) with units elsewhere.
    pub fn embed(x: &AlgebraElement, slot: usize, slots: usize) -> Result<Self> {
        if slot >= slots {
            return Err(Error::SlotMismatch {
                left: slots,
                right: slot + 1,
            });
        }
        let mut t = Self::zero(x.ring(), slots);
        t.effective = x.effective_order();
        for (w, c) in x.terms() {
            let mut key = vec![Word::unit(); slots];
            key[slot] = w.clone();
            t.terms.insert(key, c.clone());
        }
        Ok(t)
    }

    /// `x_1 (x) x_2 (x) ... (x) x_n`.
    pub fn product_of(factors: &[AlgebraElement]) -> Result<Self> {
        let ring = factors
            .first()
            .map(Element::ring)
            .ok_or(Error::SlotMismatch { left: 0, right: 0 })?;
        let slots = factors.len();
        let mut acc = Self::one(ring, slots);
        for (i, x) in factors.iter().enumerate() {
            acc = acc.try_mul(&Self::embed(x, i, slots)?)?;
        }
        Ok(acc)
    }

    /// `x (x) y` for tensors of any slot counts.
    pub fn concat_slots(&self, other: &TensorElement) -> Result<Self> {
        self.ring.check_same(&other.ring)?;
        let slots = self.slots + other.slots;
        let mut out = Self::zero(self.ring, slots);
        out.effective = self.effective.min(other.effective);
        for (k1, c1) in &self.terms {
            for (k2, c2) in &other.terms {
                let c = c1.try_mul(c2)?;
                let mut key = k1.clone();
                key.extend(k2.iter().cloned());
                accumulate(&mut out.terms, key, c)?;
            }
        }
        Ok(out)
    }

    /// A one-slot view of an algebra element.
    pub fn from_algebra(x: &AlgebraElement) -> Self {
        Self::embed(x, 0, 1).expect("slot 0 of 1 exists")
    }

    pub fn slots(&self) -> usize {
        self.slots
    }

    pub fn terms(&self) -> impl Iterator<Item = (&SlotWords, &Scalar)> {
        self.terms.iter()
    }

    pub fn term_count(&self) -> usize {
        self.terms.len()
    }

    pub(crate) fn with_effective(mut self, effective: u32) -> Self {
        self.effective = self.effective.min(effective);
        self
    }

    /// In-place `self += c * (w_1 (x) ... (x) w_n)`.
    pub(crate) fn add_term(&mut self, key: SlotWords, c: Scalar) -> Result<()> {
        if key.len() != self.slots {
            return Err(Error::SlotMismatch {
                left: self.slots,
                right: key.len(),
            });
        }
        for w in &key {
            check_cap(&self.ring, w.len())?;
        }
        self.effective = self.effective.min(c.effective_order());
        accumulate(&mut self.terms, key, c)
    }

    /// Reorders slots: slot `i` of the result is slot `perm[i]` of `self`.
    pub fn permute(&self, perm: &[usize]) -> Result<Self> {
        if perm.len() != self.slots {
            return Err(Error::SlotMismatch {
                left: self.slots,
                right: perm.len(),
            });
        }
        let mut out = Self::zero(self.ring, self.slots);
        out.effective = self.effective;
        for (key, c) in &self.terms {
            let new_key: SlotWords = perm.iter().map(|&p| key[p].clone()).collect();
            accumulate(&mut out.terms, new_key, c.clone())?;
        }
        Ok(out)
    }

    /// Swaps the two slots of a 2-tensor.
    pub fn flip(&self) -> Result<Self> {
        if self.slots != 2 {
            return Err(Error::SlotMismatch {
                left: self.slots,
                right: 2,
            });
        }
        self.permute(&[1, 0])
    }

    /// Places a 2-tensor into slots `(i, j)` of an `n`-tensor.
    pub fn place(&self, positions: &[usize], slots: usize) -> Result<Self> {
        if positions.len() != self.slots || positions.iter().any(|&p| p >= slots) {
            return Err(Error::SlotMismatch {
                left: self.slots,
                right: positions.len(),
            });
        }
        let mut out = Self::zero(self.ring, slots);
        out.effective = self.effective;
        for (key, c) in &self.terms {
            let mut new_key = vec![Word::unit(); slots];
            for (src, &dst) in positions.iter().enumerate() {
                new_key[dst] = key[src].clone();
            }
            accumulate(&mut out.terms, new_key, c.clone())?;
        }
        Ok(out)
    }

    pub fn map_coefficients(&self, f: impl Fn(&Scalar) -> Result<Scalar>) -> Result<Self> {
        let mut out = Self::zero(self.ring, self.slots);
        out.effective = self.effective;
        for (k, c) in &self.terms {
            accumulate(&mut out.terms, k.clone(), f(c)?)?;
        }
        Ok(out)
    }

    pub fn substitute_h(&self, mode: HSubstitution) -> Self {
        self.map_coefficients(|c| Ok(c.substitute_h(mode)))
            .expect("h substitution keeps the ring")
    }

    pub fn limit_epsilon(&self) -> Result<Self> {
        self.map_coefficients(|c| c.limit_epsilon())
    }

    pub fn recast(&self, ring: Ring) -> Result<Self> {
        let mut out = Self::zero(ring, self.slots);
        for (k, c) in &self.terms {
            for w in k {
                check_cap(&ring, w.len())?;
            }
            accumulate(&mut out.terms, k.clone(), c.recast(ring)?)?;
        }
        out.effective = self.effective.min(ring.order);
        Ok(out)
    }

    /// Replaces the word in every slot by an element computed from it and
    /// multiplies the pieces back together.
    pub fn map_slots(
        &self,
        mut f: impl FnMut(usize, &Word) -> Result<AlgebraElement>,
    ) -> Result<Self> {
        let mut out = Self::zero(self.ring, self.slots);
        for (key, c) in &self.terms {
            let mut factors = Vec::with_capacity(self.slots);
            for (i, w) in key.iter().enumerate() {
                factors.push(f(i, w)?);
            }
            let term = Self::product_of(&factors)?.scale(c)?;
            out = out.try_add(&term)?;
        }
        Ok(out.with_effective(self.effective))
    }

    /// Multiplies the slots together in order: `x_1 x_2 ... x_n`.
    pub fn multiply_slots(&self) -> Result<AlgebraElement> {
        let mut out = AlgebraElement::zero(self.ring);
        for (key, c) in &self.terms {
            let mut w = Word::unit();
            for part in key {
                w = w.concat(part);
            }
            check_cap(&self.ring, w.len())?;
            out = out.try_add(&AlgebraElement::from_terms(self.ring, [(w, c.clone())])?)?;
        }
        Ok(out.with_effective(self.effective))
    }

    pub fn render(&self, names: &[String]) -> String {
        let mut pieces = Vec::new();
        for (key, c) in &self.terms {
            let rest: Vec<String> = key[1..].iter().map(|w| w.render(names)).collect();
            let rest = rest.join("@");
            for (m, r) in c.terms() {
                let first = (!key[0].is_empty()).then(|| key[0].render(names));
                let (neg, mut body) = render_term(r, m, first.as_deref());
                if !rest.is_empty() {
                    body.push('@');
                    body.push_str(&rest);
                }
                pieces.push((neg, body));
            }
        }
        join_signed(pieces)
    }
}

impl Element for TensorElement {
    fn ring(&self) -> Ring {
        self.ring
    }

    fn zero_like(&self) -> Self {
        Self::zero(self.ring, self.slots)
    }

    fn one_like(&self) -> Self {
        Self::one(self.ring, self.slots)
    }

    fn try_add(&self, other: &Self) -> Result<Self> {
        self.ring.check_same(&other.ring)?;
        if self.slots != other.slots {
            return Err(Error::SlotMismatch {
                left: self.slots,
                right: other.slots,
            });
        }
        let mut out = self.clone();
        out.effective = self.effective.min(other.effective);
        for (k, c) in &other.terms {
            accumulate(&mut out.terms, k.clone(), c.clone())?;
        }
        Ok(out)
    }

    fn try_mul(&self, other: &Self) -> Result<Self> {
        self.ring.check_same(&other.ring)?;
        if self.slots != other.slots {
            return Err(Error::SlotMismatch {
                left: self.slots,
                right: other.slots,
            });
        }
        let mut out = Self::zero(self.ring, self.slots);
        out.effective = self.effective.min(other.effective);
        for (k1, c1) in &self.terms {
            for (k2, c2) in &other.terms {
                let c = c1.try_mul(c2)?;
                if c.is_zero() {
                    continue;
                }
                let mut key = Vec::with_capacity(self.slots);
                for (w1, w2) in k1.iter().zip(k2) {
                    check_cap(&self.ring, w1.len() + w2.len())?;
                    key.push(w1.concat(w2));
                }
                accumulate(&mut out.terms, key, c)?;
            }
        }
        Ok(out)
    }

    fn scale(&self, factor: &Scalar) -> Result<Self> {
        let mut out = self.map_coefficients(|c| c.try_mul(factor))?;
        out.effective = out.effective.min(factor.effective_order());
        Ok(out)
    }

    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn min_h_order(&self) -> Option<u32> {
        self.terms.values().filter_map(Scalar::min_h_order).min()
    }

    fn unit_coefficient(&self) -> Scalar {
        self.terms
            .get(&vec![Word::unit(); self.slots])
            .cloned()
            .unwrap_or_else(|| Scalar::zero(self.ring))
    }

    fn effective_order(&self) -> u32 {
        self.effective
    }
}
