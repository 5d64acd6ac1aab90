//! Rational functions in `q` with exact arithmetic.

use core::cmp::Ordering;
use core::fmt;
use core::ops::{Add, Mul, Neg, Sub};

use super::{LaurentPoly, Rat};

/// A rational function `num/den` in `q`.
///
/// Canonical form:
/// - `den` is nonzero;
/// - `gcd(num, den) = 1` as polynomials in `q`;
/// - `den` is an ordinary polynomial (lowest exponent 0) with coprime
///   integer coefficients and positive lowest-degree coefficient.
///
/// The `q`-power and constant units are pushed into `num`, so equality is a
/// structural check.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct RationalFunction {
    num: LaurentPoly,
    den: LaurentPoly,
}

impl RationalFunction {
    /// Builds `num/den`; returns `None` when `den` is zero.
    pub fn new(num: LaurentPoly, den: LaurentPoly) -> Option<Self> {
        if den.is_zero() {
            return None;
        }
        let mut f = RationalFunction { num, den };
        f.canonicalize();
        Some(f)
    }

    pub fn from_laurent(num: LaurentPoly) -> Self {
        Self::new(num, LaurentPoly::one()).unwrap()
    }

    pub fn zero() -> Self {
        Self::from_laurent(LaurentPoly::zero())
    }

    pub fn one() -> Self {
        Self::from_laurent(LaurentPoly::one())
    }

    pub fn numerator(&self) -> &LaurentPoly {
        &self.num
    }

    pub fn denominator(&self) -> &LaurentPoly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num.is_one() && self.den.is_one()
    }

    /// `true` when the function is a Laurent polynomial.
    pub fn is_laurent(&self) -> bool {
        self.den.is_one()
    }

    pub fn inverse(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        Self::new(self.den.clone(), self.num.clone())
    }

    /// The substitution `q -> q^{-1}`.
    pub fn substitute_q_inverse(&self) -> Self {
        Self::new(
            self.num.substitute_q_inverse(),
            self.den.substitute_q_inverse(),
        )
        .unwrap()
    }

    fn canonicalize(&mut self) {
        if self.num.is_zero() {
            self.den = LaurentPoly::one();
            return;
        }
        let g = self.num.gcd(&self.den);
        if !g.is_one() {
            self.num = self.num.div_exact(&g).expect("gcd divides numerator");
            self.den = self.den.div_exact(&g).expect("gcd divides denominator");
        }
        // Shift the q-power unit out of the denominator.
        let shift = self.den.min_exp().expect("nonzero denominator");
        self.den = self.den.shift(-shift);
        self.num = self.num.shift(-shift);
        // Scale the denominator to primitive integer coefficients with a
        // positive lowest coefficient.
        let mut unit = self.den.content();
        if self.den.coeff(self.den.min_exp().unwrap()) < Rat::zero() {
            unit = -unit;
        }
        let unit_inv = unit.recip();
        self.den = self.den.scale(&unit_inv);
        self.num = self.num.scale(&unit_inv);
    }

    /// Deterministic magnitude order used for witness selection: total
    /// degree span first, then term counts, then the coefficient maps.
    pub fn magnitude_cmp(&self, other: &Self) -> Ordering {
        let span = |f: &Self| {
            f.num.max_exp().unwrap_or(0) - f.num.min_exp().unwrap_or(0)
                + f.den.max_exp().unwrap_or(0)
        };
        span(self)
            .cmp(&span(other))
            .then_with(|| self.num.num_terms().cmp(&other.num.num_terms()))
            .then_with(|| {
                let a: alloc::vec::Vec<_> = self.num.terms().map(|(e, c)| (e, c.clone())).collect();
                let b: alloc::vec::Vec<_> =
                    other.num.terms().map(|(e, c)| (e, c.clone())).collect();
                a.cmp(&b)
            })
    }
}

impl<'a> Add<&'a RationalFunction> for &RationalFunction {
    type Output = RationalFunction;
    fn add(self, rhs: &'a RationalFunction) -> RationalFunction {
        RationalFunction::new(
            &(&self.num * &rhs.den) + &(&rhs.num * &self.den),
            &self.den * &rhs.den,
        )
        .unwrap()
    }
}

impl<'a> Sub<&'a RationalFunction> for &RationalFunction {
    type Output = RationalFunction;
    fn sub(self, rhs: &'a RationalFunction) -> RationalFunction {
        self + &(-rhs)
    }
}

impl<'a> Mul<&'a RationalFunction> for &RationalFunction {
    type Output = RationalFunction;
    fn mul(self, rhs: &'a RationalFunction) -> RationalFunction {
        RationalFunction::new(&self.num * &rhs.num, &self.den * &rhs.den).unwrap()
    }
}

macro_rules! forward_fun_binop {
    ($trait:ident, $method:ident) => {
        impl $trait<RationalFunction> for RationalFunction {
            type Output = RationalFunction;
            fn $method(self, rhs: RationalFunction) -> RationalFunction {
                (&self).$method(&rhs)
            }
        }
    };
}

forward_fun_binop!(Add, add);
forward_fun_binop!(Sub, sub);
forward_fun_binop!(Mul, mul);

impl Neg for &RationalFunction {
    type Output = RationalFunction;
    fn neg(self) -> RationalFunction {
        RationalFunction {
            num: -&self.num,
            den: self.den.clone(),
        }
    }
}

impl Neg for RationalFunction {
    type Output = RationalFunction;
    fn neg(self) -> RationalFunction {
        -&self
    }
}

impl fmt::Display for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({}) / ({})", self.num, self.den)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lp(terms: &[(i64, i64)]) -> LaurentPoly {
        LaurentPoly::from_terms(terms.iter().map(|&(e, c)| (e, Rat::from_int(c))))
    }

    #[test]
    fn canonical_form() {
        // (q^2 - 1)/(q - 1) reduces to q + 1.
        let f = RationalFunction::new(lp(&[(0, -1), (2, 1)]), lp(&[(0, -1), (1, 1)])).unwrap();
        assert_eq!(f, RationalFunction::from_laurent(lp(&[(0, 1), (1, 1)])));
        // Denominator normalized: positive primitive constant term.
        let g = RationalFunction::new(lp(&[(0, 1)]), lp(&[(1, -2), (2, 4)])).unwrap();
        assert_eq!(*g.denominator(), lp(&[(0, 1), (1, -2)]));
        assert_eq!(g.denominator().coeff(0), Rat::one());
        assert!(RationalFunction::new(lp(&[(0, 1)]), LaurentPoly::zero()).is_none());
    }

    #[test]
    fn field_ops() {
        let q = RationalFunction::from_laurent(LaurentPoly::q());
        let one = RationalFunction::one();
        let f = &one * &q;
        assert_eq!(f, q);
        let g = q.inverse().unwrap();
        assert_eq!(&q * &g, one);
        let h = &(&q + &one) * &(&q - &one); // q^2 - 1
        assert_eq!(h, RationalFunction::from_laurent(lp(&[(0, -1), (2, 1)])));
        assert!(RationalFunction::zero().inverse().is_none());
    }
}
