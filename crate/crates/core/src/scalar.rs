//! Scalar fields used by every algebraic routine.
//!
//! Three realizations are provided:
//!
//! * [`Rational`]: arbitrary precision rationals, exact equality.
//! * [`QSqrt3`]: the quadratic field ℚ(√3), exact. Needed because the
//!   canonical almost complex structures built from order-three automorphisms
//!   have entries in this field.
//! * `f64`: comparisons go through a caller supplied tolerance.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num::bigint::BigInt;
use num::{BigRational, One, Signed, ToPrimitive, Zero};

/// Exact rational number.
pub type Rational = BigRational;

/// Default tolerance for floating point verdicts.
pub const DEFAULT_TOLERANCE: f64 = 1e-10;

pub trait Scalar:
    Clone
    + fmt::Debug
    + PartialEq
    + Send
    + Sync
    + 'static
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    /// True for exact fields; tolerances are ignored for those.
    const EXACT: bool;

    fn zero() -> Self;
    fn one() -> Self;
    fn from_i64(n: i64) -> Self;
    fn from_rational(q: &Rational) -> Self;
    fn to_f64(&self) -> f64;

    /// Exact binary value of a float for exact fields; NaN and infinities
    /// map to zero there.
    fn from_f64(x: f64) -> Self;

    /// Sign of the value, treating anything within `tol` of zero as zero in
    /// the floating realization.
    fn sign_within(&self, tol: f64) -> Ordering;

    /// Square root inside the field, `None` when it does not exist there
    /// (negative input, or an irrational root for exact fields).
    fn try_sqrt(&self) -> Option<Self>;

    fn is_zero_within(&self, tol: f64) -> bool {
        self.sign_within(tol) == Ordering::Equal
    }

    fn is_positive_within(&self, tol: f64) -> bool {
        self.sign_within(tol) == Ordering::Greater
    }

    fn from_ratio(num: i64, den: i64) -> Self {
        Self::from_rational(&Rational::new(BigInt::from(num), BigInt::from(den)))
    }

    fn abs_f64(&self) -> f64 {
        self.to_f64().abs()
    }
}

impl Scalar for f64 {
    const EXACT: bool = false;

    fn zero() -> Self {
        0.0
    }
    fn one() -> Self {
        1.0
    }
    fn from_i64(n: i64) -> Self {
        n as f64
    }
    fn from_rational(q: &Rational) -> Self {
        ToPrimitive::to_f64(q).unwrap_or(f64::NAN)
    }
    fn to_f64(&self) -> f64 {
        *self
    }
    fn from_f64(x: f64) -> Self {
        x
    }
    fn sign_within(&self, tol: f64) -> Ordering {
        if self.abs() <= tol {
            Ordering::Equal
        } else if *self > 0.0 {
            Ordering::Greater
        } else {
            Ordering::Less
        }
    }
    fn try_sqrt(&self) -> Option<Self> {
        if *self < 0.0 {
            None
        } else {
            Some(self.sqrt())
        }
    }
}

fn rational_sign(q: &Rational) -> Ordering {
    if q.is_zero() {
        Ordering::Equal
    } else if q.is_positive() {
        Ordering::Greater
    } else {
        Ordering::Less
    }
}

fn bigint_sqrt_exact(n: &BigInt) -> Option<BigInt> {
    if n.is_negative() {
        return None;
    }
    let r = n.sqrt();
    if &r * &r == *n {
        Some(r)
    } else {
        None
    }
}

/// Exact square root of a rational, if it is the square of a rational.
pub fn rational_sqrt(q: &Rational) -> Option<Rational> {
    let num = bigint_sqrt_exact(q.numer())?;
    let den = bigint_sqrt_exact(q.denom())?;
    Some(Rational::new(num, den))
}

impl Scalar for Rational {
    const EXACT: bool = true;

    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn from_i64(n: i64) -> Self {
        Rational::from_integer(BigInt::from(n))
    }
    fn from_rational(q: &Rational) -> Self {
        q.clone()
    }
    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }
    fn from_f64(x: f64) -> Self {
        Rational::from_float(x).unwrap_or_else(Zero::zero)
    }
    fn sign_within(&self, _tol: f64) -> Ordering {
        rational_sign(self)
    }
    fn try_sqrt(&self) -> Option<Self> {
        rational_sqrt(self)
    }
}

/// Element `a + b√3` of the quadratic field ℚ(√3).
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct QSqrt3 {
    pub a: Rational,
    pub b: Rational,
}

impl QSqrt3 {
    pub fn new(a: Rational, b: Rational) -> Self {
        QSqrt3 { a, b }
    }

    /// The element √3.
    pub fn sqrt3() -> Self {
        QSqrt3::new(Zero::zero(), One::one())
    }

    /// Galois conjugate `a − b√3`.
    pub fn conj(&self) -> Self {
        QSqrt3::new(self.a.clone(), -self.b.clone())
    }

    /// Field norm `a² − 3b²`.
    pub fn norm(&self) -> Rational {
        &self.a * &self.a - Rational::from_integer(3.into()) * &self.b * &self.b
    }

    /// Rational part, if the irrational part vanishes.
    pub fn as_rational(&self) -> Option<Rational> {
        if self.b.is_zero() {
            Some(self.a.clone())
        } else {
            None
        }
    }
}

impl fmt::Debug for QSqrt3 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.b.is_zero() {
            write!(f, "{}", self.a)
        } else if self.a.is_zero() {
            write!(f, "{}·√3", self.b)
        } else {
            write!(f, "{} + {}·√3", self.a, self.b)
        }
    }
}

impl fmt::Display for QSqrt3 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

impl Add for QSqrt3 {
    type Output = QSqrt3;
    fn add(self, o: QSqrt3) -> QSqrt3 {
        QSqrt3::new(self.a + o.a, self.b + o.b)
    }
}

impl Sub for QSqrt3 {
    type Output = QSqrt3;
    fn sub(self, o: QSqrt3) -> QSqrt3 {
        QSqrt3::new(self.a - o.a, self.b - o.b)
    }
}

impl Mul for QSqrt3 {
    type Output = QSqrt3;
    fn mul(self, o: QSqrt3) -> QSqrt3 {
        let three = Rational::from_integer(3.into());
        QSqrt3::new(
            &self.a * &o.a + three * &self.b * &o.b,
            &self.a * &o.b + &self.b * &o.a,
        )
    }
}

impl Neg for QSqrt3 {
    type Output = QSqrt3;
    fn neg(self) -> QSqrt3 {
        QSqrt3::new(-self.a, -self.b)
    }
}

impl Div for QSqrt3 {
    type Output = QSqrt3;
    fn div(self, o: QSqrt3) -> QSqrt3 {
        let n = o.norm();
        assert!(!n.is_zero(), "division by zero in Q(sqrt 3)");
        let num = self * o.conj();
        QSqrt3::new(num.a / &n, num.b / n)
    }
}

impl Scalar for QSqrt3 {
    const EXACT: bool = true;

    fn zero() -> Self {
        QSqrt3::new(Zero::zero(), Zero::zero())
    }
    fn one() -> Self {
        QSqrt3::new(One::one(), Zero::zero())
    }
    fn from_i64(n: i64) -> Self {
        QSqrt3::new(Rational::from_i64(n), Zero::zero())
    }
    fn from_rational(q: &Rational) -> Self {
        QSqrt3::new(q.clone(), Zero::zero())
    }
    fn to_f64(&self) -> f64 {
        Scalar::to_f64(&self.a) + Scalar::to_f64(&self.b) * 3f64.sqrt()
    }
    fn from_f64(x: f64) -> Self {
        QSqrt3::new(<Rational as Scalar>::from_f64(x), Zero::zero())
    }
    fn sign_within(&self, _tol: f64) -> Ordering {
        let sa = rational_sign(&self.a);
        let sb = rational_sign(&self.b);
        match (sa, sb) {
            (Ordering::Equal, s) | (s, Ordering::Equal) => s,
            (x, y) if x == y => x,
            // opposite signs: compare a² with 3b²
            (sa, _) => match rational_sign(&self.norm()) {
                Ordering::Greater => sa,
                Ordering::Less => sa.reverse(),
                Ordering::Equal => Ordering::Equal,
            },
        }
    }
    fn try_sqrt(&self) -> Option<Self> {
        if self.sign_within(0.0) == Ordering::Less {
            return None;
        }
        let three = Rational::from_i64(3);
        if self.b.is_zero() {
            if let Some(r) = rational_sqrt(&self.a) {
                return Some(QSqrt3::new(r, Zero::zero()));
            }
            // (b√3)² = 3b²
            return rational_sqrt(&(&self.a / &three)).map(|b| QSqrt3::new(Zero::zero(), b));
        }
        // (p + q√3)² = a + b√3  ⇒  p² + 3q² = a, 2pq = b, so p² solves
        // 4t² − 4at + 3b² = 0.
        let disc = &self.a * &self.a - &three * &self.b * &self.b;
        let root = rational_sqrt(&disc)?;
        let two = Rational::from_i64(2);
        for t in [(&self.a + &root) / &two, (&self.a - &root) / &two] {
            if let Some(p) = rational_sqrt(&t) {
                if p.is_zero() {
                    continue;
                }
                let q = &self.b / (&two * &p);
                let cand = QSqrt3::new(p, q);
                if cand.clone() * cand.clone() == *self {
                    return Some(if cand.sign_within(0.0) == Ordering::Less {
                        -cand
                    } else {
                        cand
                    });
                }
            }
        }
        None
    }
}

/// Parse `"p/q"`, `"p"` or a decimal literal into an exact rational.
pub fn parse_rational(s: &str) -> Option<Rational> {
    let s = s.trim();
    if let Some((n, d)) = s.split_once('/') {
        let n: BigInt = n.trim().parse().ok()?;
        let d: BigInt = d.trim().parse().ok()?;
        if d.is_zero() {
            return None;
        }
        return Some(Rational::new(n, d));
    }
    if let Ok(n) = s.parse::<BigInt>() {
        return Some(Rational::from_integer(n));
    }
    // finite decimal such as "-0.25"
    let (neg, body) = match s.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, s.strip_prefix('+').unwrap_or(s)),
    };
    let (int, frac) = body.split_once('.')?;
    if !int.chars().all(|c| c.is_ascii_digit()) || !frac.chars().all(|c| c.is_ascii_digit()) {
        return None;
    }
    let digits: BigInt = format!("{}{}", if int.is_empty() { "0" } else { int }, frac)
        .parse()
        .ok()?;
    let den = num::pow(BigInt::from(10), frac.len());
    let q = Rational::new(digits, den);
    Some(if neg { -q } else { q })
}

/// Render an exact rational as `"p/q"` (or `"p"` when integral).
pub fn format_rational(q: &Rational) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Rational {
        Rational::from_ratio(n, d)
    }

    #[test]
    fn qsqrt3_field_ops() {
        let x = QSqrt3::new(q(1, 2), q(3, 1));
        let y = QSqrt3::new(q(-2, 1), q(1, 3));
        let prod = x.clone() * y.clone();
        assert_eq!(prod.clone() / y.clone(), x);
        assert_eq!((x.clone() + y.clone()) - y, x);
        assert_eq!(QSqrt3::sqrt3() * QSqrt3::sqrt3(), QSqrt3::from_i64(3));
    }

    #[test]
    fn qsqrt3_sign() {
        // 2 − √3 > 0, 1 − √3 < 0, −2 + √3 < 0
        assert_eq!(QSqrt3::new(q(2, 1), q(-1, 1)).sign_within(0.0), Ordering::Greater);
        assert_eq!(QSqrt3::new(q(1, 1), q(-1, 1)).sign_within(0.0), Ordering::Less);
        assert_eq!(QSqrt3::new(q(-2, 1), q(1, 1)).sign_within(0.0), Ordering::Less);
    }

    #[test]
    fn qsqrt3_sqrt() {
        // sqrt(1/27) = √3/9
        let r = QSqrt3::from_rational(&q(1, 27)).try_sqrt().unwrap();
        assert_eq!(r, QSqrt3::new(q(0, 1), q(1, 9)));
        // (1 + √3)² = 4 + 2√3
        let s = QSqrt3::new(q(4, 1), q(2, 1)).try_sqrt().unwrap();
        assert_eq!(s, QSqrt3::new(q(1, 1), q(1, 1)));
        assert!(QSqrt3::from_i64(2).try_sqrt().is_none());
        assert!(QSqrt3::from_i64(-4).try_sqrt().is_none());
    }

    #[test]
    fn rational_parsing() {
        assert_eq!(parse_rational("-3/4"), Some(q(-3, 4)));
        assert_eq!(parse_rational("7"), Some(q(7, 1)));
        assert_eq!(parse_rational("-0.25"), Some(q(-1, 4)));
        assert_eq!(parse_rational("1/0"), None);
        assert_eq!(parse_rational("abc"), None);
        assert_eq!(format_rational(&q(6, 4)), "3/2");
    }

    #[test]
    fn float_tolerance() {
        assert!(1e-12f64.is_zero_within(1e-10));
        assert!(!1e-8f64.is_zero_within(1e-10));
    }
}
