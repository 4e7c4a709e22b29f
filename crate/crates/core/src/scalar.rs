//! Ground ring: exact rationals, polynomials in `h` truncated above `h^N`,
//! optionally Laurent in the contraction parameter `e` with bounded exponents.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

pub type Rational = BigRational;

pub fn rational(numer: i64, denom: i64) -> Rational {
    Rational::new(BigInt::from(numer), BigInt::from(denom))
}

pub fn integer(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Truncation context shared by every value in one computation.
///
/// `order` is the largest retained power of `h`; `eps_bound` is the largest
/// absolute power of `e` allowed (0 outside the contraction engine);
/// `degree_cap` bounds word lengths in the free algebra.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Ring {
    pub order: u32,
    pub eps_bound: u32,
    pub degree_cap: usize,
}

pub const DEFAULT_ORDER: u32 = 3;
pub const DEFAULT_EPS_BOUND: u32 = 2;
pub const DEFAULT_DEGREE_CAP: usize = 12;

impl Default for Ring {
    fn default() -> Self {
        Ring::new(DEFAULT_ORDER)
    }
}

impl Ring {
    pub fn new(order: u32) -> Self {
        Ring {
            order,
            eps_bound: 0,
            degree_cap: DEFAULT_DEGREE_CAP,
        }
    }

    pub fn with_eps(self, eps_bound: u32) -> Self {
        Ring { eps_bound, ..self }
    }

    pub fn with_degree_cap(self, degree_cap: usize) -> Self {
        Ring { degree_cap, ..self }
    }

    pub fn with_order(self, order: u32) -> Self {
        Ring { order, ..self }
    }

    pub(crate) fn check_same(&self, other: &Ring) -> Result<()> {
        if self == other {
            Ok(())
        } else {
            Err(Error::MixedTruncation {
                left: self.to_string(),
                right: other.to_string(),
            })
        }
    }
}

impl fmt::Display for Ring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "N={} L={} cap={}",
            self.order, self.eps_bound, self.degree_cap
        )
    }
}

/// `h^h * e^eps`. Canonical order: descending `e` power, then ascending `h`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Monomial {
    pub h: u32,
    pub eps: i32,
}

impl Monomial {
    pub const ONE: Monomial = Monomial { h: 0, eps: 0 };

    pub fn is_one(&self) -> bool {
        *self == Monomial::ONE
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        other.eps.cmp(&self.eps).then(self.h.cmp(&other.h))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum HSubstitution {
    Zero,
    Negate,
}

/// An element of `Q[h]/(h^(N+1))`, optionally tensored with bounded Laurent
/// polynomials in `e`.
#[derive(Clone, Debug)]
pub struct Scalar {
    ring: Ring,
    effective: u32,
    terms: BTreeMap<Monomial, Rational>,
}

impl PartialEq for Scalar {
    fn eq(&self, other: &Self) -> bool {
        self.ring == other.ring && self.terms == other.terms
    }
}

impl Eq for Scalar {}

impl Scalar {
    pub fn zero(ring: Ring) -> Self {
        Scalar {
            ring,
            effective: ring.order,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(ring: Ring) -> Self {
        Self::from_rational(ring, Rational::one())
    }

    pub fn from_rational(ring: Ring, value: Rational) -> Self {
        let mut s = Self::zero(ring);
        if !value.is_zero() {
            s.terms.insert(Monomial::ONE, value);
        }
        s
    }

    pub fn from_int(ring: Ring, value: i64) -> Self {
        Self::from_rational(ring, integer(value))
    }

    /// `coeff * h^h * e^eps`; vanishes when `h` exceeds the order.
    pub fn monomial(ring: Ring, coeff: Rational, h: u32, eps: i32) -> Result<Self> {
        if eps.unsigned_abs() > ring.eps_bound {
            return Err(Error::EpsOverflow {
                power: eps,
                bound: ring.eps_bound,
            });
        }
        let mut s = Self::zero(ring);
        if h <= ring.order && !coeff.is_zero() {
            s.terms.insert(Monomial { h, eps }, coeff);
        }
        Ok(s)
    }

    pub fn h(ring: Ring) -> Self {
        Self::monomial(ring, Rational::one(), 1, 0).expect("h has no e power")
    }

    pub fn ring(&self) -> Ring {
        self.ring
    }

    /// Highest power of `h` that is trustworthy after exact divisions.
    pub fn effective_order(&self) -> u32 {
        self.effective
    }

    pub(crate) fn with_effective(mut self, effective: u32) -> Self {
        self.effective = effective.min(self.ring.order);
        self
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1
            && self
                .terms
                .get(&Monomial::ONE)
                .map(|c| c.is_one())
                .unwrap_or(false)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    pub fn term_count(&self) -> usize {
        self.terms.len()
    }

    /// Coefficient of `h^0 e^0`.
    pub fn constant(&self) -> Rational {
        self.terms
            .get(&Monomial::ONE)
            .cloned()
            .unwrap_or_else(Rational::zero)
    }

    /// The scalar as a plain rational, if it has no `h` or `e` dependence.
    pub fn as_rational(&self) -> Option<Rational> {
        match self.terms.len() {
            0 => Some(Rational::zero()),
            1 => self.terms.get(&Monomial::ONE).cloned(),
            _ => None,
        }
    }

    /// Lowest power of `h` present, `None` for zero.
    pub fn min_h_order(&self) -> Option<u32> {
        self.terms.keys().map(|m| m.h).min()
    }

    pub fn has_eps(&self) -> bool {
        self.terms.keys().any(|m| m.eps != 0)
    }

    pub fn try_add(&self, other: &Scalar) -> Result<Scalar> {
        self.ring.check_same(&other.ring)?;
        let mut out = self.clone();
        out.effective = self.effective.min(other.effective);
        for (m, c) in &other.terms {
            out.add_term(*m, c.clone());
        }
        Ok(out)
    }

    pub fn try_sub(&self, other: &Scalar) -> Result<Scalar> {
        self.try_add(&other.neg())
    }

    pub fn neg(&self) -> Scalar {
        Scalar {
            ring: self.ring,
            effective: self.effective,
            terms: self.terms.iter().map(|(m, c)| (*m, -c)).collect(),
        }
    }

    pub fn try_mul(&self, other: &Scalar) -> Result<Scalar> {
        self.ring.check_same(&other.ring)?;
        let mut out = Scalar::zero(self.ring);
        out.effective = self.effective.min(other.effective);
        if self.is_zero() || other.is_zero() {
            return Ok(out);
        }
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                let h = m1.h + m2.h;
                if h > self.ring.order {
                    continue;
                }
                let eps = m1.eps + m2.eps;
                if eps.unsigned_abs() > self.ring.eps_bound {
                    return Err(Error::EpsOverflow {
                        power: eps,
                        bound: self.ring.eps_bound,
                    });
                }
                out.add_term(Monomial { h, eps }, c1 * c2);
            }
        }
        Ok(out)
    }

    pub fn scale(&self, factor: &Rational) -> Scalar {
        if factor.is_zero() {
            return Scalar::zero(self.ring).with_effective(self.effective);
        }
        Scalar {
            ring: self.ring,
            effective: self.effective,
            terms: self.terms.iter().map(|(m, c)| (*m, c * factor)).collect(),
        }
    }

    /// Multiplies by `h^k`, discarding what falls beyond the order.
    pub fn shift_h(&self, k: u32) -> Scalar {
        let mut out = Scalar::zero(self.ring).with_effective(self.effective);
        for (m, c) in &self.terms {
            if m.h + k <= self.ring.order {
                out.terms.insert(
                    Monomial {
                        h: m.h + k,
                        eps: m.eps,
                    },
                    c.clone(),
                );
            }
        }
        out
    }

    /// Multiplies by `e^k`.
    pub fn shift_eps(&self, k: i32) -> Result<Scalar> {
        let mut out = Scalar::zero(self.ring).with_effective(self.effective);
        for (m, c) in &self.terms {
            let eps = m.eps + k;
            if eps.unsigned_abs() > self.ring.eps_bound {
                return Err(Error::EpsOverflow {
                    power: eps,
                    bound: self.ring.eps_bound,
                });
            }
            out.terms.insert(Monomial { h: m.h, eps }, c.clone());
        }
        Ok(out)
    }

    /// Exact division by `h^k`. The trusted order drops by `k`.
    pub fn exact_divide_h(&self, k: u32) -> Result<Scalar> {
        if let Some(found) = self.terms.keys().map(|m| m.h).find(|&h| h < k) {
            return Err(Error::NotDivisible { k, found });
        }
        Ok(Scalar {
            ring: self.ring,
            effective: self.effective.saturating_sub(k),
            terms: self
                .terms
                .iter()
                .map(|(m, c)| {
                    (
                        Monomial {
                            h: m.h - k,
                            eps: m.eps,
                        },
                        c.clone(),
                    )
                })
                .collect(),
        })
    }

    /// The `e -> 0` limit: drops positive powers, rejects negative ones.
    pub fn limit_epsilon(&self) -> Result<Scalar> {
        if let Some(m) = self.terms.keys().find(|m| m.eps < 0) {
            return Err(Error::SingularLimit {
                context: format!("term with e^{}", m.eps),
            });
        }
        Ok(Scalar {
            ring: self.ring,
            effective: self.effective,
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.eps == 0)
                .map(|(m, c)| (*m, c.clone()))
                .collect(),
        })
    }

    /// Smallest power of `e` present, `None` for zero.
    pub fn min_eps(&self) -> Option<i32> {
        self.terms.keys().map(|m| m.eps).min()
    }

    pub fn substitute_h(&self, mode: HSubstitution) -> Scalar {
        let terms = match mode {
            HSubstitution::Zero => self
                .terms
                .iter()
                .filter(|(m, _)| m.h == 0)
                .map(|(m, c)| (*m, c.clone()))
                .collect(),
            HSubstitution::Negate => self
                .terms
                .iter()
                .map(|(m, c)| (*m, if m.h % 2 == 1 { -c } else { c.clone() }))
                .collect(),
        };
        Scalar {
            ring: self.ring,
            effective: self.effective,
            terms,
        }
    }

    /// Moves the scalar into another ring, truncating `h` when the order
    /// shrinks. Raising the order keeps the old trusted order.
    pub fn recast(&self, ring: Ring) -> Result<Scalar> {
        let mut out = Scalar::zero(ring).with_effective(self.effective.min(ring.order));
        for (m, c) in &self.terms {
            if m.h > ring.order {
                continue;
            }
            if m.eps.unsigned_abs() > ring.eps_bound {
                return Err(Error::EpsOverflow {
                    power: m.eps,
                    bound: ring.eps_bound,
                });
            }
            out.terms.insert(*m, c.clone());
        }
        if ring.order > self.ring.order {
            out.effective = self.effective;
        }
        Ok(out)
    }

    fn add_term(&mut self, m: Monomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(existing) => {
                *existing += c;
                if existing.is_zero() {
                    self.terms.remove(&m);
                }
            }
            None => {
                self.terms.insert(m, c);
            }
        }
    }
}

/// Renders `|coeff| * h^k * e^m` followed by an optional tail (a word), with
/// the sign returned separately.
pub(crate) fn render_term(coeff: &Rational, mono: &Monomial, tail: Option<&str>) -> (bool, String) {
    let negative = coeff.is_negative();
    let magnitude = coeff.abs();
    let mut factors: Vec<String> = Vec::new();
    let has_rest = !mono.is_one() || tail.is_some();
    if !magnitude.is_one() || !has_rest {
        if magnitude.is_integer() {
            factors.push(magnitude.numer().to_string());
        } else {
            factors.push(format!("({}/{})", magnitude.numer(), magnitude.denom()));
        }
    }
    match mono.h {
        0 => {}
        1 => factors.push("h".into()),
        k => factors.push(format!("h^{k}")),
    }
    match mono.eps {
        0 => {}
        1 => factors.push("e".into()),
        k => factors.push(format!("e^{k}")),
    }
    if let Some(t) = tail {
        factors.push(t.to_string());
    }
    (negative, factors.join("*"))
}

/// Joins signed pieces into `a - b + c`.
pub(crate) fn join_signed(pieces: impl IntoIterator<Item = (bool, String)>) -> String {
    let mut out = String::new();
    for (i, (negative, body)) in pieces.into_iter().enumerate() {
        match (i, negative) {
            (0, false) => {}
            (0, true) => out.push('-'),
            (_, false) => out.push_str(" + "),
            (_, true) => out.push_str(" - "),
        }
        out.push_str(&body);
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let pieces = self.terms.iter().map(|(m, c)| render_term(c, m, None));
        f.write_str(&join_signed(pieces))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ring(n: u32) -> Ring {
        Ring::new(n)
    }

    fn poly(r: Ring, coeffs: &[(i64, i64, u32, i32)]) -> Scalar {
        let mut s = Scalar::zero(r);
        for &(p, q, h, e) in coeffs {
            s = s
                .try_add(&Scalar::monomial(r, rational(p, q), h, e).unwrap())
                .unwrap();
        }
        s
    }

    #[test]
    fn h_times_h_to_the_n_truncates() {
        let r = ring(3);
        let hn = poly(r, &[(1, 1, 3, 0)]);
        assert!(Scalar::h(r).try_mul(&hn).unwrap().is_zero());
    }

    #[test]
    fn one_plus_h_times_one_minus_h() {
        let r = ring(2);
        let a = poly(r, &[(1, 1, 0, 0), (1, 1, 1, 0)]);
        let b = poly(r, &[(1, 1, 0, 0), (-1, 1, 1, 0)]);
        assert_eq!(
            a.try_mul(&b).unwrap(),
            poly(r, &[(1, 1, 0, 0), (-1, 1, 2, 0)])
        );
    }

    #[test]
    fn eps_powers_cancel_within_bound() {
        let r = ring(3).with_eps(1);
        let a = poly(r, &[(1, 1, 1, -1)]);
        let b = poly(r, &[(1, 1, 1, 1)]);
        assert_eq!(a.try_mul(&b).unwrap(), poly(r, &[(1, 1, 2, 0)]));
    }

    #[test]
    fn eps_overflow_is_an_error() {
        let r = ring(3).with_eps(1);
        let a = poly(r, &[(1, 1, 0, 1)]);
        assert!(matches!(a.try_mul(&a), Err(Error::EpsOverflow { .. })));
        assert!(Scalar::monomial(ring(3), integer(1), 0, 1).is_err());
    }

    #[test]
    fn mixed_truncation_rejected() {
        let a = Scalar::one(ring(2));
        let b = Scalar::one(ring(3));
        assert!(matches!(a.try_add(&b), Err(Error::MixedTruncation { .. })));
    }

    #[test]
    fn exact_division() {
        let r = ring(3);
        let x = poly(r, &[(1, 1, 2, 0), (1, 1, 3, 0)]);
        let q = x.exact_divide_h(1).unwrap();
        assert_eq!(q, poly(r, &[(1, 1, 1, 0), (1, 1, 2, 0)]));
        assert_eq!(q.effective_order(), 2);
        assert!(matches!(
            Scalar::h(r).exact_divide_h(2),
            Err(Error::NotDivisible { k: 2, found: 1 })
        ));
        let sinh2 = poly(r, &[(2, 1, 1, 0), (1, 3, 3, 0)]);
        assert_eq!(
            sinh2.exact_divide_h(1).unwrap(),
            poly(r, &[(2, 1, 0, 0), (1, 3, 2, 0)])
        );
    }

    #[test]
    fn epsilon_limits() {
        let r = ring(3).with_eps(2);
        assert_eq!(
            poly(r, &[(1, 1, 0, 0), (1, 1, 1, 1)])
                .limit_epsilon()
                .unwrap(),
            Scalar::one(r)
        );
        assert!(matches!(
            poly(r, &[(1, 1, 1, -1)]).limit_epsilon(),
            Err(Error::SingularLimit { .. })
        ));
        assert_eq!(
            poly(r, &[(1, 1, 1, 0), (-1, 1, 1, 2), (2, 1, 0, 1)])
                .limit_epsilon()
                .unwrap(),
            Scalar::h(r)
        );
    }

    #[test]
    fn h_substitutions() {
        let r = ring(3);
        let x = poly(r, &[(1, 1, 0, 0), (1, 1, 1, 0), (-1, 1, 2, 0)]);
        assert_eq!(x.substitute_h(HSubstitution::Zero), Scalar::one(r));
        assert_eq!(
            x.substitute_h(HSubstitution::Negate),
            poly(r, &[(1, 1, 0, 0), (-1, 1, 1, 0), (-1, 1, 2, 0)])
        );
        let odd = poly(r, &[(2, 1, 1, 0), (1, 3, 3, 0)]);
        assert_eq!(odd.substitute_h(HSubstitution::Negate), odd.neg());
    }

    #[test]
    fn canonical_rendering() {
        let r = ring(3).with_eps(1);
        let x = poly(r, &[(1, 1, 0, 0), (-1, 1, 1, 0), (1, 3, 2, -1)]);
        assert_eq!(x.to_string(), "1 - h + (1/3)*h^2*e^-1");
        assert_eq!(Scalar::zero(r).to_string(), "0");
        assert_eq!(poly(r, &[(-3, 2, 0, 0)]).to_string(), "-(3/2)");
    }
}
