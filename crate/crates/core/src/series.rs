//! Power series of elements whose coefficients all carry at least one power
//! of `h`. Such series are finite polynomials at every truncation order.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::One;

use crate::element::Element;
use crate::error::{Error, Result};
use crate::scalar::Rational;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SeriesFn {
    Exp,
    Sinh,
    Cosh,
    /// `sinh(x)/x`
    Sinhc,
}

impl SeriesFn {
    pub fn name(self) -> &'static str {
        match self {
            SeriesFn::Exp => "exp",
            SeriesFn::Sinh => "sinh",
            SeriesFn::Cosh => "cosh",
            SeriesFn::Sinhc => "sinhc",
        }
    }

    /// Taylor coefficient of `x^k`.
    fn coefficient(self, k: u32) -> Option<Rational> {
        let inv_fact = |n: u32| {
            let mut f = BigInt::one();
            for i in 2..=n {
                f *= BigInt::from(i);
            }
            Rational::new(BigInt::one(), f)
        };
        match self {
            SeriesFn::Exp => Some(inv_fact(k)),
            SeriesFn::Sinh => (!k.is_multiple_of(2)).then(|| inv_fact(k)),
            SeriesFn::Cosh => k.is_multiple_of(2).then(|| inv_fact(k)),
            SeriesFn::Sinhc => k.is_multiple_of(2).then(|| inv_fact(k + 1)),
        }
    }
}

impl fmt::Display for SeriesFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SeriesFn {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "exp" => Ok(SeriesFn::Exp),
            "sinh" => Ok(SeriesFn::Sinh),
            "cosh" => Ok(SeriesFn::Cosh),
            "sinhc" => Ok(SeriesFn::Sinhc),
            other => Err(Error::UnknownName(other.to_string())),
        }
    }
}

fn check_nilpotent<T: Element>(x: &T) -> Result<()> {
    match x.min_h_order() {
        Some(0) => Err(Error::NonNilpotentArgument(format!(
            "argument has an h-free coefficient (ring {})",
            x.ring()
        ))),
        _ => Ok(()),
    }
}

pub fn apply_series<T: Element>(f: SeriesFn, x: &T) -> Result<T> {
    apply_series_with(f, x, &|t| Ok(t))
}

/// Evaluates `f(x)`; `reduce` is applied to every power of `x` (pass a
/// normal-form map to keep intermediate results small).
pub fn apply_series_with<T: Element>(
    f: SeriesFn,
    x: &T,
    reduce: &dyn Fn(T) -> Result<T>,
) -> Result<T> {
    check_nilpotent(x)?;
    let mut acc = x.zero_like();
    let mut power = x.one_like();
    let mut k = 0u32;
    while !power.is_zero() {
        if let Some(c) = f.coefficient(k) {
            acc = acc.try_add(&power.scale_rational(&c))?;
        }
        k += 1;
        if k > x.ring().order {
            break;
        }
        power = reduce(power.try_mul(x)?)?;
    }
    Ok(acc)
}

pub fn series_inverse<T: Element>(x: &T) -> Result<T> {
    series_inverse_with(x, &|t| Ok(t))
}

/// `x^{-1}` for `x = 1 + r` with `r` of positive `h`-order, as the geometric
/// series in `-r`.
pub fn series_inverse_with<T: Element>(x: &T, reduce: &dyn Fn(T) -> Result<T>) -> Result<T> {
    let rest = x.try_sub(&x.one_like())?;
    if rest.min_h_order() == Some(0) {
        return Err(Error::NotInvertible(
            "constant part is not the unit".to_string(),
        ));
    }
    let step = rest.neg();
    let mut acc = x.zero_like();
    let mut power = x.one_like();
    let mut k = 0u32;
    while !power.is_zero() && k <= x.ring().order {
        acc = acc.try_add(&power)?;
        power = reduce(power.try_mul(&step)?)?;
        k += 1;
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::element::{AlgebraElement, TensorElement, Word};
    use crate::scalar::{rational, Ring, Scalar};

    fn names() -> Vec<String> {
        ["J+", "J3", "J-"].iter().map(|s| s.to_string()).collect()
    }

    fn h_times(r: Ring, g: u16) -> AlgebraElement {
        AlgebraElement::generator(r, g)
            .scale(&Scalar::h(r))
            .unwrap()
    }

    #[test]
    fn exp_at_order_two() {
        let r = Ring::new(2);
        let e = apply_series(SeriesFn::Exp, &h_times(r, 0)).unwrap();
        assert_eq!(e.render(&names()), "1 + h*J+ + (1/2)*h^2*J+^2");
    }

    #[test]
    fn sinh_over_h() {
        let r = Ring::new(4);
        let s = apply_series(SeriesFn::Sinh, &h_times(r, 0))
            .unwrap()
            .exact_divide_h(1)
            .unwrap()
            .recast(Ring::new(3))
            .unwrap();
        assert_eq!(s.render(&names()), "J+ + (1/6)*h^2*J+^3");
    }

    #[test]
    fn sinhc_of_coproduct() {
        let r = Ring::new(2);
        let jp = AlgebraElement::generator(r, 0);
        let delta = TensorElement::embed(&jp, 0, 2)
            .unwrap()
            .try_add(&TensorElement::embed(&jp, 1, 2).unwrap())
            .unwrap()
            .scale(&Scalar::h(r))
            .unwrap();
        let s = apply_series(SeriesFn::Sinhc, &delta).unwrap();
        assert_eq!(
            s.render(&names()),
            "1@1 + (1/6)*h^2@J+^2 + (1/3)*h^2*J+@J+ + (1/6)*h^2*J+^2@1"
        );
    }

    #[test]
    fn inverses() {
        let r = Ring::new(2);
        let one = AlgebraElement::one(r);
        assert_eq!(series_inverse(&one).unwrap(), one);
        let x = one.try_add(&h_times(r, 0)).unwrap();
        assert_eq!(
            series_inverse(&x).unwrap().render(&names()),
            "1 - h*J+ + h^2*J+^2"
        );
        let s = apply_series(SeriesFn::Sinhc, &h_times(r, 0)).unwrap();
        let expected = AlgebraElement::from_terms(
            r,
            [
                (Word::unit(), Scalar::one(r)),
                (
                    Word(vec![0, 0]),
                    Scalar::monomial(r, rational(-1, 6), 2, 0).unwrap(),
                ),
            ],
        )
        .unwrap();
        assert_eq!(series_inverse(&s).unwrap(), expected);
        let bad = AlgebraElement::generator(r, 0);
        assert!(matches!(series_inverse(&bad), Err(Error::NotInvertible(_))));
    }

    #[test]
    fn non_nilpotent_argument_rejected() {
        let r = Ring::new(2);
        let x = AlgebraElement::generator(r, 0);
        assert!(matches!(
            apply_series(SeriesFn::Exp, &x),
            Err(Error::NonNilpotentArgument(_))
        ));
    }
}
