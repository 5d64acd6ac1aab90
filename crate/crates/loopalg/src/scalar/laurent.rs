//! Laurent polynomials in `q` with exact rational coefficients.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;
use core::fmt;
use core::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::Rat;

/// A Laurent polynomial in `q`: a finite map from integer exponents to
/// nonzero rational coefficients. The canonical form stores no explicit
/// zeros, so equality is structural.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct LaurentPoly {
    coeffs: BTreeMap<i64, Rat>,
}

impl LaurentPoly {
    pub fn zero() -> Self {
        LaurentPoly {
            coeffs: BTreeMap::new(),
        }
    }

    pub fn one() -> Self {
        Self::constant(Rat::one())
    }

    pub fn constant(c: Rat) -> Self {
        Self::monomial(0, c)
    }

    pub fn monomial(exp: i64, coeff: Rat) -> Self {
        let mut coeffs = BTreeMap::new();
        if !coeff.is_zero() {
            coeffs.insert(exp, coeff);
        }
        LaurentPoly { coeffs }
    }

    /// The variable `q`.
    pub fn q() -> Self {
        Self::monomial(1, Rat::one())
    }

    pub fn from_terms<I: IntoIterator<Item = (i64, Rat)>>(terms: I) -> Self {
        let mut p = Self::zero();
        for (e, c) in terms {
            p.add_term(e, c);
        }
        p
    }

    pub fn add_term(&mut self, exp: i64, coeff: Rat) {
        if coeff.is_zero() {
            return;
        }
        let entry = self.coeffs.entry(exp).or_insert_with(Rat::zero);
        *entry += &coeff;
        if entry.is_zero() {
            self.coeffs.remove(&exp);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.coeff(0).is_one()
    }

    pub fn coeff(&self, exp: i64) -> Rat {
        self.coeffs.get(&exp).cloned().unwrap_or_else(Rat::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (i64, &Rat)> {
        self.coeffs.iter().map(|(e, c)| (*e, c))
    }

    pub fn num_terms(&self) -> usize {
        self.coeffs.len()
    }

    /// Smallest exponent with nonzero coefficient; `None` for the zero
    /// polynomial.
    pub fn min_exp(&self) -> Option<i64> {
        self.coeffs.keys().next().copied()
    }

    pub fn max_exp(&self) -> Option<i64> {
        self.coeffs.keys().next_back().copied()
    }

    pub fn leading_coeff(&self) -> Rat {
        self.max_exp().map(|e| self.coeff(e)).unwrap_or_else(Rat::zero)
    }

    pub fn scale(&self, c: &Rat) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        LaurentPoly {
            coeffs: self.coeffs.iter().map(|(e, a)| (*e, a * c)).collect(),
        }
    }

    /// Multiplication by `q^k`.
    pub fn shift(&self, k: i64) -> Self {
        LaurentPoly {
            coeffs: self.coeffs.iter().map(|(e, a)| (e + k, a.clone())).collect(),
        }
    }

    /// The substitution `q -> q^{-1}`.
    pub fn substitute_q_inverse(&self) -> Self {
        LaurentPoly {
            coeffs: self.coeffs.iter().map(|(e, a)| (-e, a.clone())).collect(),
        }
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..n {
            acc = &acc * self;
        }
        acc
    }

    /// Exact evaluation at `q = x`; negative exponents require `x != 0`.
    pub fn eval(&self, x: &Rat) -> Rat {
        let mut acc = Rat::zero();
        for (e, c) in self.terms() {
            acc += &(c * &x.pow(e));
        }
        acc
    }

    /// Positive rational `c` such that `self / c` has coprime integer
    /// coefficients. Zero polynomial has content 1.
    pub fn content(&self) -> Rat {
        if self.is_zero() {
            return Rat::one();
        }
        let mut num_gcd = BigInt::zero();
        let mut den_lcm = BigInt::one();
        for (_, c) in self.terms() {
            num_gcd = num_gcd.gcd(&c.numer().abs());
            den_lcm = den_lcm.lcm(c.denom());
        }
        Rat(num_rational::BigRational::new(num_gcd, den_lcm))
    }

    /// Quotient and remainder of the division by `d`, treating both as
    /// polynomials in `q` after shifting out the lowest exponents (Laurent
    /// units are invertible, so this is well-defined).
    pub fn div_rem(&self, d: &LaurentPoly) -> (LaurentPoly, LaurentPoly) {
        assert!(!d.is_zero(), "division by the zero polynomial");
        let mut rem = self.clone();
        let mut quot = LaurentPoly::zero();
        let d_deg = d.max_exp().unwrap();
        let d_lead = d.leading_coeff();
        while !rem.is_zero() {
            let r_deg = rem.max_exp().unwrap();
            // Degree is measured from the top; stop when the remainder's
            // span no longer reaches the divisor's span.
            let span_r = r_deg - rem.min_exp().unwrap();
            let span_d = d_deg - d.min_exp().unwrap();
            if span_r < span_d {
                break;
            }
            let factor = LaurentPoly::monomial(r_deg - d_deg, rem.coeff(r_deg) / d_lead.clone());
            rem = &rem - &(&factor * d);
            quot = &quot + &factor;
        }
        (quot, rem)
    }

    /// Exact quotient, or `None` when the division leaves a remainder.
    pub fn div_exact(&self, d: &LaurentPoly) -> Option<LaurentPoly> {
        let (q, r) = self.div_rem(d);
        r.is_zero().then_some(q)
    }

    /// Monic gcd as polynomials in `q` (defined up to a `q`-power unit; the
    /// result is normalized with lowest exponent 0 and leading coefficient
    /// 1).
    pub fn gcd(&self, other: &LaurentPoly) -> LaurentPoly {
        let normalize = |p: &LaurentPoly| -> LaurentPoly {
            match p.min_exp() {
                None => LaurentPoly::zero(),
                Some(m) => p.shift(-m),
            }
        };
        let mut a = normalize(self);
        let mut b = normalize(other);
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b);
            a = b;
            b = normalize(&r);
        }
        if a.is_zero() {
            return a;
        }
        let lead = a.leading_coeff();
        normalize(&a).scale(&lead.recip())
    }
}

impl<'a> Add<&'a LaurentPoly> for &LaurentPoly {
    type Output = LaurentPoly;
    fn add(self, rhs: &'a LaurentPoly) -> LaurentPoly {
        let mut out = self.clone();
        for (e, c) in rhs.terms() {
            out.add_term(e, c.clone());
        }
        out
    }
}

impl<'a> Sub<&'a LaurentPoly> for &LaurentPoly {
    type Output = LaurentPoly;
    fn sub(self, rhs: &'a LaurentPoly) -> LaurentPoly {
        let mut out = self.clone();
        for (e, c) in rhs.terms() {
            out.add_term(e, -c);
        }
        out
    }
}

impl<'a> Mul<&'a LaurentPoly> for &LaurentPoly {
    type Output = LaurentPoly;
    fn mul(self, rhs: &'a LaurentPoly) -> LaurentPoly {
        let mut out = LaurentPoly::zero();
        for (e1, c1) in self.terms() {
            for (e2, c2) in rhs.terms() {
                out.add_term(e1 + e2, c1 * c2);
            }
        }
        out
    }
}

macro_rules! forward_poly_binop {
    ($trait:ident, $method:ident) => {
        impl $trait<LaurentPoly> for LaurentPoly {
            type Output = LaurentPoly;
            fn $method(self, rhs: LaurentPoly) -> LaurentPoly {
                (&self).$method(&rhs)
            }
        }
        impl<'a> $trait<&'a LaurentPoly> for LaurentPoly {
            type Output = LaurentPoly;
            fn $method(self, rhs: &'a LaurentPoly) -> LaurentPoly {
                (&self).$method(rhs)
            }
        }
    };
}

forward_poly_binop!(Add, add);
forward_poly_binop!(Sub, sub);
forward_poly_binop!(Mul, mul);

impl Neg for &LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        LaurentPoly {
            coeffs: self.coeffs.iter().map(|(e, c)| (*e, -c)).collect(),
        }
    }
}

impl Neg for LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        -&self
    }
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (e, c) in self.terms() {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match (e, c.is_one()) {
                (0, _) => write!(f, "{c}")?,
                (1, true) => write!(f, "q")?,
                (1, false) => write!(f, "{c}*q")?,
                (_, true) => write!(f, "q^{e}")?,
                (_, false) => write!(f, "{c}*q^{e}")?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lp(terms: &[(i64, i64)]) -> LaurentPoly {
        LaurentPoly::from_terms(terms.iter().map(|&(e, c)| (e, Rat::from_int(c))))
    }

    #[test]
    fn arithmetic_and_canonical_form() {
        let a = lp(&[(-1, 1), (1, 1)]);
        let b = lp(&[(-1, -1), (0, 2)]);
        assert_eq!(&a + &b, lp(&[(0, 2), (1, 1)]));
        assert_eq!(&a - &a, LaurentPoly::zero());
        assert_eq!(&a * &b, lp(&[(-2, -1), (-1, 2), (0, -1), (1, 2)]));
    }

    #[test]
    fn division() {
        let a = lp(&[(-1, 1), (1, 1)]); // q^{-1} + q
        let b = lp(&[(-2, 1), (0, 1), (2, 1)]); // [3]
        let prod = &a * &b;
        assert_eq!(prod.div_exact(&b).unwrap(), a);
        assert_eq!(prod.div_exact(&a).unwrap(), b);
        let (q, r) = lp(&[(0, 1), (2, 1)]).div_rem(&lp(&[(0, 1), (1, 1)]));
        assert_eq!(&(&q * &lp(&[(0, 1), (1, 1)])) + &r, lp(&[(0, 1), (2, 1)]));
        assert!(!r.is_zero());
    }

    #[test]
    fn gcd_reduces() {
        // (q^2 - 1) and (q - 1) share the factor (q - 1).
        let a = lp(&[(0, -1), (2, 1)]);
        let b = lp(&[(0, -1), (1, 1)]);
        let g = a.gcd(&b);
        assert_eq!(g, lp(&[(0, -1), (1, 1)]));
        assert!(a.div_exact(&g).is_some());
    }

    #[test]
    fn content_and_eval() {
        let p = lp(&[(0, 4), (1, 6)]);
        assert_eq!(p.content(), Rat::from_int(2));
        let half = LaurentPoly::from_terms([(0, Rat::from_frac(1, 2)), (2, Rat::from_frac(3, 4))]);
        assert_eq!(half.content(), Rat::from_frac(1, 4));
        assert_eq!(
            p.eval(&Rat::from_int(2)),
            Rat::from_int(16)
        );
        assert_eq!(
            lp(&[(-2, 1)]).eval(&Rat::from_int(2)),
            Rat::from_frac(1, 4)
        );
    }
}
