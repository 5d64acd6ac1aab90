//! Exact ground-field arithmetic.
//!
//! Two ground fields appear: the rationals (computations specialized at
//! `q = zeta`) and rational functions in `q` with rational coefficients (the
//! generic field). [`Scalar`] is a value of either field, [`Field`] names the
//! field a computation runs over, and the free functions [`qint`], [`qfact`],
//! [`qbinom`] build the quantum combinatorial coefficients as Laurent
//! polynomials.

mod laurent;
mod ratfun;

pub use laurent::LaurentPoly;
pub use ratfun::RationalFunction;

use alloc::string::String;
use alloc::{format, vec::Vec};
use core::cmp::Ordering;
use core::fmt;
use core::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};
use core::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Exact rational number: arbitrary-precision numerator over positive
/// denominator, always in lowest terms.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Rat(BigRational);

impl Rat {
    pub fn zero() -> Self {
        Rat(BigRational::zero())
    }

    pub fn one() -> Self {
        Rat(BigRational::one())
    }

    pub fn from_int(n: i64) -> Self {
        Rat(BigRational::from_integer(BigInt::from(n)))
    }

    /// `num/den` with `den != 0`.
    pub fn from_frac(num: i64, den: i64) -> Self {
        assert!(den != 0, "zero denominator");
        Rat(BigRational::new(BigInt::from(num), BigInt::from(den)))
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.0.is_one()
    }

    pub fn is_integer(&self) -> bool {
        self.0.is_integer()
    }

    pub fn abs(&self) -> Rat {
        Rat(self.0.abs())
    }

    pub fn recip(&self) -> Rat {
        assert!(!self.is_zero(), "inverse of zero");
        Rat(self.0.recip())
    }

    pub fn pow(&self, e: i64) -> Rat {
        if e == 0 {
            return Rat::one();
        }
        assert!(!self.is_zero() || e > 0, "negative power of zero");
        let mut base = if e > 0 { self.clone() } else { self.recip() };
        let mut e = e.unsigned_abs();
        let mut acc = Rat::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }

    /// Serialized form, always with an explicit denominator: `"num/den"`.
    pub fn to_frac_string(&self) -> String {
        format!("{}/{}", self.0.numer(), self.0.denom())
    }
}

/// True iff `zeta` is an admissible specialization point: nonzero and not a
/// root of unity. Over the rationals the only roots of unity are `1` and
/// `-1`, so the test is `zeta` not in `{0, 1, -1}`.
pub fn is_valid_zeta(zeta: &Rat) -> bool {
    !zeta.is_zero() && !zeta.is_one() && *zeta != Rat::from_int(-1)
}

macro_rules! forward_rat_binop {
    ($trait:ident, $method:ident) => {
        impl<'a> $trait<&'a Rat> for &Rat {
            type Output = Rat;
            fn $method(self, rhs: &'a Rat) -> Rat {
                Rat((&self.0).$method(&rhs.0))
            }
        }
        impl $trait<Rat> for Rat {
            type Output = Rat;
            fn $method(self, rhs: Rat) -> Rat {
                (&self).$method(&rhs)
            }
        }
        impl<'a> $trait<&'a Rat> for Rat {
            type Output = Rat;
            fn $method(self, rhs: &'a Rat) -> Rat {
                (&self).$method(rhs)
            }
        }
    };
}

forward_rat_binop!(Add, add);
forward_rat_binop!(Sub, sub);
forward_rat_binop!(Mul, mul);

impl<'a> Div<&'a Rat> for &Rat {
    type Output = Rat;
    fn div(self, rhs: &'a Rat) -> Rat {
        assert!(!rhs.is_zero(), "division by zero");
        Rat(&self.0 / &rhs.0)
    }
}

impl Div<Rat> for Rat {
    type Output = Rat;
    fn div(self, rhs: Rat) -> Rat {
        (&self).div(&rhs)
    }
}

impl Neg for &Rat {
    type Output = Rat;
    fn neg(self) -> Rat {
        Rat(-&self.0)
    }
}

impl Neg for Rat {
    type Output = Rat;
    fn neg(self) -> Rat {
        Rat(-self.0)
    }
}

impl AddAssign<&Rat> for Rat {
    fn add_assign(&mut self, rhs: &Rat) {
        self.0 += &rhs.0;
    }
}

impl SubAssign<&Rat> for Rat {
    fn sub_assign(&mut self, rhs: &Rat) {
        self.0 -= &rhs.0;
    }
}

impl MulAssign<&Rat> for Rat {
    fn mul_assign(&mut self, rhs: &Rat) {
        self.0 *= &rhs.0;
    }
}

impl fmt::Display for Rat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_integer() {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

impl fmt::Debug for Rat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Parses `"num"`, `"-num"` or `"num/den"`.
impl FromStr for Rat {
    type Err = ScalarError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || ScalarError::BadRational(String::from(s));
        let (n, d) = match s.split_once('/') {
            Some((n, d)) => (n, d),
            None => (s, "1"),
        };
        let num: BigInt = n.trim().parse().map_err(|_| bad())?;
        let den: BigInt = d.trim().parse().map_err(|_| bad())?;
        if den.is_zero() {
            return Err(bad());
        }
        Ok(Rat(BigRational::new(num, den)))
    }
}

/// Errors of the scalar layer.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ScalarError {
    BadRational(String),
    /// `qfact` of a negative integer.
    NegativeFactorial(i64),
    /// `qbinom(m, p)` outside `0 <= p <= m`.
    BinomialOutOfRange { m: i64, p: i64 },
    /// Specialization point in `{0, 1, -1}`.
    InvalidZeta(Rat),
    /// Denominator vanishing at the specialization point; carries the
    /// offending factor.
    PoleAtZeta { zeta: Rat, denominator: LaurentPoly },
    /// Two scalars from different ground fields met in one operation.
    FieldMismatch,
}

impl fmt::Display for ScalarError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ScalarError::BadRational(s) => write!(f, "cannot parse rational from {s:?}"),
            ScalarError::NegativeFactorial(n) => write!(f, "qfact of negative integer {n}"),
            ScalarError::BinomialOutOfRange { m, p } => {
                write!(f, "qbinom({m}, {p}) outside 0 <= p <= m")
            }
            ScalarError::InvalidZeta(z) => {
                write!(f, "zeta = {z} is zero or a root of unity")
            }
            ScalarError::PoleAtZeta { zeta, denominator } => {
                write!(f, "denominator {denominator} vanishes at q = {zeta}")
            }
            ScalarError::FieldMismatch => write!(f, "scalars from different ground fields"),
        }
    }
}

/// Quantum integer `[n] = q^{1-n} + q^{3-n} + ... + q^{n-1}`, extended to
/// negative `n` by `[-n] = -[n]`.
pub fn qint(n: i64) -> LaurentPoly {
    if n < 0 {
        return -qint(-n);
    }
    let mut terms = Vec::new();
    let mut e = 1 - n;
    while e <= n - 1 {
        terms.push((e, Rat::one()));
        e += 2;
    }
    LaurentPoly::from_terms(terms)
}

/// Quantum factorial `[n]! = [n][n-1]...[2]`, with `[0]! = [1]! = 1`.
pub fn qfact(n: i64) -> Result<LaurentPoly, ScalarError> {
    if n < 0 {
        return Err(ScalarError::NegativeFactorial(n));
    }
    let mut acc = LaurentPoly::one();
    for k in 2..=n {
        acc = &acc * &qint(k);
    }
    Ok(acc)
}

/// Quantum binomial `[m]! / ([p]! [m-p]!)`. The quotient is a Laurent
/// polynomial; the division is exact, and a nonzero remainder is an internal
/// arithmetic bug.
pub fn qbinom(m: i64, p: i64) -> Result<LaurentPoly, ScalarError> {
    if p < 0 || m < 0 || p > m {
        return Err(ScalarError::BinomialOutOfRange { m, p });
    }
    let num = qfact(m)?;
    let den = &qfact(p)? * &qfact(m - p)?;
    Ok(num
        .div_exact(&den)
        .expect("qbinom: non-exact division (internal arithmetic bug)"))
}

/// Exact evaluation of a rational function at `q = zeta`.
///
/// Rejects invalid `zeta` and reports a vanishing denominator together with
/// the offending factor.
pub fn specialize(f: &RationalFunction, zeta: &Rat) -> Result<Rat, ScalarError> {
    if !is_valid_zeta(zeta) {
        return Err(ScalarError::InvalidZeta(zeta.clone()));
    }
    let den = f.denominator().eval(zeta);
    if den.is_zero() {
        return Err(ScalarError::PoleAtZeta {
            zeta: zeta.clone(),
            denominator: f.denominator().clone(),
        });
    }
    Ok(f.numerator().eval(zeta) / den)
}

/// The ground field of a computation: every scalar in one computation
/// carries the same field.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Field {
    /// Rational functions in `q` over the rationals.
    Generic,
    /// Rationals, with `q` specialized at `zeta`.
    Specialized(Rat),
}

impl Field {
    /// Validated constructor for the specialized field.
    pub fn specialized(zeta: Rat) -> Result<Field, ScalarError> {
        if is_valid_zeta(&zeta) {
            Ok(Field::Specialized(zeta))
        } else {
            Err(ScalarError::InvalidZeta(zeta))
        }
    }

    pub fn zero(&self) -> Scalar {
        match self {
            Field::Generic => Scalar::Fun(RationalFunction::zero()),
            Field::Specialized(_) => Scalar::Rat(Rat::zero()),
        }
    }

    pub fn one(&self) -> Scalar {
        self.from_rat(Rat::one())
    }

    pub fn from_rat(&self, r: Rat) -> Scalar {
        match self {
            Field::Generic => Scalar::Fun(RationalFunction::from_laurent(
                LaurentPoly::constant(r),
            )),
            Field::Specialized(_) => Scalar::Rat(r),
        }
    }

    pub fn from_int(&self, n: i64) -> Scalar {
        self.from_rat(Rat::from_int(n))
    }

    /// The image of a Laurent polynomial in `q` (evaluated at `zeta` over the
    /// specialized field).
    pub fn from_laurent(&self, p: &LaurentPoly) -> Scalar {
        match self {
            Field::Generic => Scalar::Fun(RationalFunction::from_laurent(p.clone())),
            Field::Specialized(z) => Scalar::Rat(p.eval(z)),
        }
    }

    /// `q^m` as a field element.
    pub fn q_pow(&self, m: i64) -> Scalar {
        match self {
            Field::Generic => self.from_laurent(&LaurentPoly::monomial(m, Rat::one())),
            Field::Specialized(z) => Scalar::Rat(z.pow(m)),
        }
    }

    pub fn q(&self) -> Scalar {
        self.q_pow(1)
    }

    pub fn qint(&self, n: i64) -> Scalar {
        self.from_laurent(&qint(n))
    }

    pub fn qfact(&self, n: i64) -> Result<Scalar, ScalarError> {
        Ok(self.from_laurent(&qfact(n)?))
    }

    pub fn qbinom(&self, m: i64, p: i64) -> Result<Scalar, ScalarError> {
        Ok(self.from_laurent(&qbinom(m, p)?))
    }

    /// `q - q^{-1}`; invertible over both fields (over the specialized field
    /// because `zeta` is not a root of unity).
    pub fn q_minus_qinv(&self) -> Scalar {
        &self.q_pow(1) - &self.q_pow(-1)
    }

    /// The field seen through the anti-automorphism `tau`: the generic field
    /// is preserved (`q -> q^{-1}` is a substitution, not a field change),
    /// while a specialization at `zeta` becomes one at `zeta^{-1}`.
    pub fn tau_conjugate(&self) -> Field {
        match self {
            Field::Generic => Field::Generic,
            Field::Specialized(z) => Field::Specialized(z.recip()),
        }
    }

    pub fn zeta(&self) -> Option<&Rat> {
        match self {
            Field::Generic => None,
            Field::Specialized(z) => Some(z),
        }
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Field::Generic => write!(f, "Q(q)"),
            Field::Specialized(z) => write!(f, "Q at q = {z}"),
        }
    }
}

/// A ground-field element: a rational (specialized computations) or a
/// rational function in `q` (generic computations). All scalars appearing in
/// one computation share the variant; mixing variants is a programming error
/// and panics.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Scalar {
    Rat(Rat),
    Fun(RationalFunction),
}

impl Scalar {
    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Rat(r) => r.is_zero(),
            Scalar::Fun(f) => f.is_zero(),
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Scalar::Rat(r) => r.is_one(),
            Scalar::Fun(f) => f.is_one(),
        }
    }

    pub fn inverse(&self) -> Option<Scalar> {
        match self {
            Scalar::Rat(r) => (!r.is_zero()).then(|| Scalar::Rat(r.recip())),
            Scalar::Fun(f) => f.inverse().map(Scalar::Fun),
        }
    }

    /// Scalars through `tau`: substitute `q -> q^{-1}` over the generic
    /// field. Specialized scalars are plain numbers and are fixed; the
    /// accompanying field flips `zeta -> zeta^{-1}` (see
    /// [`Field::tau_conjugate`]).
    pub fn tau_conjugate(&self) -> Scalar {
        match self {
            Scalar::Rat(r) => Scalar::Rat(r.clone()),
            Scalar::Fun(f) => Scalar::Fun(f.substitute_q_inverse()),
        }
    }

    /// Deterministic magnitude order, used to pick the most prominent
    /// witness entry in reports. Rationals compare by absolute value;
    /// rational functions by total degree, then term count, then
    /// coefficient data.
    pub fn magnitude_cmp(&self, other: &Scalar) -> Ordering {
        match (self, other) {
            (Scalar::Rat(a), Scalar::Rat(b)) => a.abs().cmp(&b.abs()),
            (Scalar::Fun(a), Scalar::Fun(b)) => a.magnitude_cmp(b),
            (Scalar::Rat(_), Scalar::Fun(_)) => Ordering::Less,
            (Scalar::Fun(_), Scalar::Rat(_)) => Ordering::Greater,
        }
    }

    pub fn as_rat(&self) -> Option<&Rat> {
        match self {
            Scalar::Rat(r) => Some(r),
            Scalar::Fun(_) => None,
        }
    }

    pub fn as_fun(&self) -> Option<&RationalFunction> {
        match self {
            Scalar::Rat(_) => None,
            Scalar::Fun(f) => Some(f),
        }
    }
}

macro_rules! forward_scalar_binop {
    ($trait:ident, $method:ident) => {
        impl<'a> $trait<&'a Scalar> for &Scalar {
            type Output = Scalar;
            fn $method(self, rhs: &'a Scalar) -> Scalar {
                match (self, rhs) {
                    (Scalar::Rat(a), Scalar::Rat(b)) => Scalar::Rat(a.$method(b)),
                    (Scalar::Fun(a), Scalar::Fun(b)) => Scalar::Fun(a.$method(b)),
                    _ => panic!("scalar field mismatch"),
                }
            }
        }
        impl $trait<Scalar> for Scalar {
            type Output = Scalar;
            fn $method(self, rhs: Scalar) -> Scalar {
                (&self).$method(&rhs)
            }
        }
        impl<'a> $trait<&'a Scalar> for Scalar {
            type Output = Scalar;
            fn $method(self, rhs: &'a Scalar) -> Scalar {
                (&self).$method(rhs)
            }
        }
    };
}

forward_scalar_binop!(Add, add);
forward_scalar_binop!(Sub, sub);
forward_scalar_binop!(Mul, mul);

impl<'a> Div<&'a Scalar> for &Scalar {
    type Output = Scalar;
    fn div(self, rhs: &'a Scalar) -> Scalar {
        let inv = rhs.inverse().expect("scalar division by zero");
        self * &inv
    }
}

impl Div<Scalar> for Scalar {
    type Output = Scalar;
    fn div(self, rhs: Scalar) -> Scalar {
        (&self).div(&rhs)
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        match self {
            Scalar::Rat(r) => Scalar::Rat(-r),
            Scalar::Fun(f) => Scalar::Fun(-f),
        }
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -&self
    }
}

impl AddAssign<&Scalar> for Scalar {
    fn add_assign(&mut self, rhs: &Scalar) {
        *self = &*self + rhs;
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Rat(r) => write!(f, "{r}"),
            Scalar::Fun(p) => write!(f, "{p}"),
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
    fn qint_basic() {
        assert_eq!(qint(2), lp(&[(-1, 1), (1, 1)]));
        assert_eq!(qint(0), LaurentPoly::zero());
        assert_eq!(qint(3), lp(&[(-2, 1), (0, 1), (2, 1)]));
        assert_eq!(qint(-2), -qint(2));
        assert_eq!(qint(1), LaurentPoly::one());
    }

    #[test]
    fn qfact_basic() {
        assert_eq!(qfact(0).unwrap(), LaurentPoly::one());
        assert_eq!(qfact(1).unwrap(), LaurentPoly::one());
        assert_eq!(qfact(2).unwrap(), lp(&[(-1, 1), (1, 1)]));
        // [3]! = (q^{-2}+1+q^2)(q^{-1}+q) expanded by hand.
        assert_eq!(qfact(3).unwrap(), lp(&[(-3, 1), (-1, 2), (1, 2), (3, 1)]));
        assert!(matches!(
            qfact(-1),
            Err(ScalarError::NegativeFactorial(-1))
        ));
    }

    #[test]
    fn qbinom_basic() {
        assert_eq!(qbinom(2, 1).unwrap(), qint(2));
        assert_eq!(qbinom(5, 0).unwrap(), LaurentPoly::one());
        for m in 0..=6 {
            for p in 0..=m {
                assert_eq!(qbinom(m, p).unwrap(), qbinom(m, m - p).unwrap());
            }
        }
        assert!(qbinom(1, 2).is_err());
    }

    #[test]
    fn q_pascal_identity() {
        // [m p] = q^p [m-1 p] + q^{p-m} [m-1 p-1]
        for m in 1..=7 {
            for p in 1..m {
                let lhs = qbinom(m, p).unwrap();
                let rhs = &(&LaurentPoly::monomial(p, Rat::one()) * &qbinom(m - 1, p).unwrap())
                    + &(&LaurentPoly::monomial(p - m, Rat::one())
                        * &qbinom(m - 1, p - 1).unwrap());
                assert_eq!(lhs, rhs, "q-Pascal fails at ({m}, {p})");
            }
        }
    }

    #[test]
    fn specialize_basic() {
        let two = Rat::from_int(2);
        let f = RationalFunction::from_laurent(qint(2));
        assert_eq!(specialize(&f, &two).unwrap(), Rat::from_frac(5, 2));
        let one = RationalFunction::one();
        assert_eq!(specialize(&one, &Rat::from_frac(7, 3)).unwrap(), Rat::one());
        // 1/(q - 2) has a pole at 2.
        let den = lp(&[(0, -2), (1, 1)]);
        let f = RationalFunction::new(LaurentPoly::one(), den).unwrap();
        assert!(matches!(
            specialize(&f, &two),
            Err(ScalarError::PoleAtZeta { .. })
        ));
        assert!(matches!(
            specialize(&one, &Rat::one()),
            Err(ScalarError::InvalidZeta(_))
        ));
    }

    #[test]
    fn valid_zeta() {
        assert!(is_valid_zeta(&Rat::from_int(2)));
        assert!(!is_valid_zeta(&Rat::one()));
        assert!(!is_valid_zeta(&Rat::from_int(-1)));
        assert!(!is_valid_zeta(&Rat::zero()));
        assert!(is_valid_zeta(&Rat::from_frac(3, 2)));
        assert!(is_valid_zeta(&Rat::from_frac(1, 2)));
    }

    #[test]
    fn specialization_commutes_with_qint() {
        // Evaluating [n] at zeta equals specializing the rational function.
        let zeta = Rat::from_frac(3, 2);
        for n in -6..=6 {
            let direct = qint(n).eval(&zeta);
            let via_fun =
                specialize(&RationalFunction::from_laurent(qint(n)), &zeta).unwrap();
            assert_eq!(direct, via_fun);
        }
    }

    #[test]
    fn rat_parse_and_print() {
        let r: Rat = "3/6".parse().unwrap();
        assert_eq!(r, Rat::from_frac(1, 2));
        assert_eq!(r.to_frac_string(), "1/2");
        let r: Rat = "-4".parse().unwrap();
        assert_eq!(r, Rat::from_int(-4));
        assert_eq!(r.to_frac_string(), "-4/1");
        assert!("1/0".parse::<Rat>().is_err());
        assert!("x".parse::<Rat>().is_err());
    }

    #[test]
    fn field_helpers() {
        let f = Field::specialized(Rat::from_int(2)).unwrap();
        assert_eq!(f.q_pow(-1), Scalar::Rat(Rat::from_frac(1, 2)));
        assert_eq!(f.qint(2), Scalar::Rat(Rat::from_frac(5, 2)));
        assert!(Field::specialized(Rat::one()).is_err());
        let g = Field::Generic;
        assert_eq!(g.qint(2), g.from_laurent(&qint(2)));
        assert_eq!(
            g.q_minus_qinv(),
            g.from_laurent(&lp(&[(-1, -1), (1, 1)]))
        );
    }

    #[test]
    fn scalar_tau_conjugate() {
        let g = Field::Generic;
        let s = g.q_pow(3);
        assert_eq!(s.tau_conjugate(), g.q_pow(-3));
        let f = Field::specialized(Rat::from_int(2)).unwrap();
        let s = f.q_pow(1);
        // Values are plain numbers; the field flips instead.
        assert_eq!(s.tau_conjugate(), s);
        assert_eq!(
            f.tau_conjugate(),
            Field::specialized(Rat::from_frac(1, 2)).unwrap()
        );
    }
}
