//! Exact scalars: rationals with a machine-word fast path, and the quadratic
//! field obtained by adjoining a square root of five.

use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};

/// Common interface of the coefficient fields used by the linear algebra.
pub trait Field: Clone + PartialEq + fmt::Debug + fmt::Display + 'static {
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, other: &Self) -> Self;
    fn sub(&self, other: &Self) -> Self;
    fn mul(&self, other: &Self) -> Self;
    fn neg(&self) -> Self;
    /// Multiplicative inverse. Panics on zero.
    fn inv(&self) -> Self;
    fn from_i64(n: i64) -> Self;

    fn is_one(&self) -> bool {
        *self == Self::one()
    }
    fn div(&self, other: &Self) -> Self {
        self.mul(&other.inv())
    }
}

/// A rational number. Values that fit in `i64/i64` are kept unboxed.
#[derive(Clone)]
pub enum Q {
    Small(i64, i64),
    Big(Box<BigRational>),
}

fn gcd_i128(mut a: i128, mut b: i128) -> i128 {
    a = a.abs();
    b = b.abs();
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

fn gcd_u64(mut a: u64, mut b: u64) -> u64 {
    if a == 0 {
        return b;
    }
    if b == 0 {
        return a;
    }
    let shift = (a | b).trailing_zeros();
    a >>= a.trailing_zeros();
    loop {
        b >>= b.trailing_zeros();
        if a > b {
            std::mem::swap(&mut a, &mut b);
        }
        b -= a;
        if b == 0 {
            return a << shift;
        }
    }
}

// Reduced fraction with positive denominator, `None` on overflow.
fn small_reduce(num: i64, den: i64) -> Option<Q> {
    if num == 0 {
        return Some(Q::Small(0, 1));
    }
    let g = gcd_u64(num.unsigned_abs(), den.unsigned_abs()) as i64;
    if g == 1 {
        return Some(Q::Small(num, den));
    }
    Some(Q::Small(num / g, den / g))
}

fn small_add(a: i64, b: i64, c: i64, d: i64) -> Option<Q> {
    if b == d {
        return small_reduce(a.checked_add(c)?, b);
    }
    let g = gcd_u64(b as u64, d as u64) as i64;
    let (bg, dg) = (b / g, d / g);
    let num = a.checked_mul(dg)?.checked_add(c.checked_mul(bg)?)?;
    small_reduce(num, b.checked_mul(dg)?)
}

fn small_mul(a: i64, b: i64, c: i64, d: i64) -> Option<Q> {
    if a == 0 || c == 0 {
        return Some(Q::Small(0, 1));
    }
    let g1 = gcd_u64(a.unsigned_abs(), d as u64) as i64;
    let g2 = gcd_u64(c.unsigned_abs(), b as u64) as i64;
    let num = (a / g1).checked_mul(c / g2)?;
    let den = (b / g2).checked_mul(d / g1)?;
    Some(Q::Small(num, den))
}

impl Q {
    pub fn new(num: i64, den: i64) -> Q {
        assert!(den != 0, "zero denominator");
        Q::from_i128(num as i128, den as i128)
    }

    pub fn int(n: i64) -> Q {
        Q::Small(n, 1)
    }

    fn from_i128(mut num: i128, mut den: i128) -> Q {
        if den < 0 {
            num = -num;
            den = -den;
        }
        let g = gcd_i128(num, den);
        if g > 1 {
            num /= g;
            den /= g;
        }
        if num == 0 {
            return Q::Small(0, 1);
        }
        match (i64::try_from(num), i64::try_from(den)) {
            (Ok(n), Ok(d)) => Q::Small(n, d),
            _ => Q::Big(Box::new(BigRational::new(BigInt::from(num), BigInt::from(den)))),
        }
    }

    pub(crate) fn from_big(r: BigRational) -> Q {
        if let (Some(n), Some(d)) = (r.numer().to_i64(), r.denom().to_i64()) {
            return Q::Small(n, d);
        }
        Q::Big(Box::new(r))
    }

    pub fn to_big(&self) -> BigRational {
        match self {
            Q::Small(n, d) => BigRational::new_raw(BigInt::from(*n), BigInt::from(*d)),
            Q::Big(b) => (**b).clone(),
        }
    }

    pub fn is_integer(&self) -> bool {
        match self {
            Q::Small(_, d) => *d == 1,
            Q::Big(b) => b.is_integer(),
        }
    }

    /// The value as an `i64`, when it is an integer that fits.
    pub fn to_i64(&self) -> Option<i64> {
        match self {
            Q::Small(n, 1) => Some(*n),
            Q::Small(..) => None,
            Q::Big(b) => {
                if b.is_integer() {
                    b.numer().to_i64()
                } else {
                    None
                }
            }
        }
    }

    pub fn signum(&self) -> i32 {
        match self {
            Q::Small(n, _) => n.signum() as i32,
            Q::Big(b) => {
                if b.is_positive() {
                    1
                } else if b.is_negative() {
                    -1
                } else {
                    0
                }
            }
        }
    }
}

impl Field for Q {
    fn zero() -> Self {
        Q::Small(0, 1)
    }
    fn one() -> Self {
        Q::Small(1, 1)
    }
    fn is_zero(&self) -> bool {
        matches!(self, Q::Small(0, _))
    }
    fn add(&self, o: &Self) -> Self {
        match (self, o) {
            (Q::Small(a, b), Q::Small(c, d)) => small_add(*a, *b, *c, *d)
                .unwrap_or_else(|| Q::from_i128(*a as i128 * *d as i128 + *c as i128 * *b as i128, *b as i128 * *d as i128)),
            _ => Q::from_big(self.to_big() + o.to_big()),
        }
    }
    fn sub(&self, o: &Self) -> Self {
        Field::add(self, &Field::neg(o))
    }
    fn mul(&self, o: &Self) -> Self {
        match (self, o) {
            (Q::Small(a, b), Q::Small(c, d)) => small_mul(*a, *b, *c, *d)
                .unwrap_or_else(|| Q::from_i128(*a as i128 * *c as i128, *b as i128 * *d as i128)),
            _ => Q::from_big(self.to_big() * o.to_big()),
        }
    }
    fn neg(&self) -> Self {
        match self {
            Q::Small(a, b) => match a.checked_neg() {
                Some(n) => Q::Small(n, *b),
                None => Q::from_i128(-(*a as i128), *b as i128),
            },
            Q::Big(r) => Q::from_big(-(**r).clone()),
        }
    }
    fn inv(&self) -> Self {
        assert!(!Field::is_zero(self), "inverse of zero");
        match self {
            Q::Small(a, b) => Q::from_i128(*b as i128, *a as i128),
            Q::Big(r) => Q::from_big(r.recip()),
        }
    }
    fn from_i64(n: i64) -> Self {
        Q::Small(n, 1)
    }
}

impl PartialEq for Q {
    fn eq(&self, other: &Self) -> bool {
        match (self, other) {
            (Q::Small(a, b), Q::Small(c, d)) => a == c && b == d,
            // Small values are always demoted, so mixed representations differ.
            (Q::Big(x), Q::Big(y)) => x == y,
            _ => false,
        }
    }
}
impl Eq for Q {}

impl Hash for Q {
    fn hash<H: Hasher>(&self, state: &mut H) {
        match self {
            Q::Small(a, b) => {
                0u8.hash(state);
                a.hash(state);
                b.hash(state);
            }
            Q::Big(r) => {
                1u8.hash(state);
                r.hash(state);
            }
        }
    }
}

impl PartialOrd for Q {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Q {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Q::Small(a, b), Q::Small(c, d)) => (*a as i128 * *d as i128).cmp(&(*c as i128 * *b as i128)),
            _ => self.to_big().cmp(&other.to_big()),
        }
    }
}

impl fmt::Debug for Q {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for Q {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Q::Small(n, 1) => write!(f, "{n}"),
            Q::Small(n, d) => write!(f, "{n}/{d}"),
            Q::Big(r) => {
                if r.is_integer() {
                    write!(f, "{}", r.numer())
                } else {
                    write!(f, "{}/{}", r.numer(), r.denom())
                }
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("cannot parse rational from {0:?}")]
pub struct ParseQError(pub String);

impl FromStr for Q {
    type Err = ParseQError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = || ParseQError(s.to_string());
        let s = s.trim();
        let (n, d) = match s.split_once('/') {
            Some((n, d)) => (n.trim(), d.trim()),
            None => (s, "1"),
        };
        let n: BigInt = n.parse().map_err(|_| err())?;
        let d: BigInt = d.parse().map_err(|_| err())?;
        if d.is_zero() {
            return Err(err());
        }
        Ok(Q::from_big(BigRational::new(n, d)))
    }
}

impl From<i64> for Q {
    fn from(n: i64) -> Self {
        Q::Small(n, 1)
    }
}

macro_rules! forward_ops {
    ($t:ty) => {
        impl Add for $t {
            type Output = $t;
            fn add(self, o: $t) -> $t {
                Field::add(&self, &o)
            }
        }
        impl<'a> Add<&'a $t> for &'a $t {
            type Output = $t;
            fn add(self, o: &$t) -> $t {
                Field::add(self, o)
            }
        }
        impl Sub for $t {
            type Output = $t;
            fn sub(self, o: $t) -> $t {
                Field::sub(&self, &o)
            }
        }
        impl<'a> Sub<&'a $t> for &'a $t {
            type Output = $t;
            fn sub(self, o: &$t) -> $t {
                Field::sub(self, o)
            }
        }
        impl Mul for $t {
            type Output = $t;
            fn mul(self, o: $t) -> $t {
                Field::mul(&self, &o)
            }
        }
        impl<'a> Mul<&'a $t> for &'a $t {
            type Output = $t;
            fn mul(self, o: &$t) -> $t {
                Field::mul(self, o)
            }
        }
        impl Div for $t {
            type Output = $t;
            fn div(self, o: $t) -> $t {
                Field::div(&self, &o)
            }
        }
        impl Neg for $t {
            type Output = $t;
            fn neg(self) -> $t {
                Field::neg(&self)
            }
        }
    };
}

forward_ops!(Q);
forward_ops!(Coeff);

/// An element `a + b·√5` of the real quadratic field ℚ(√5).
///
/// Every realization except the non-crystallographic dihedral group of order
/// ten has `b = 0` throughout, and arithmetic then reduces to plain rationals.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Coeff {
    pub a: Q,
    pub b: Q,
}

impl Coeff {
    pub fn rational(q: Q) -> Coeff {
        Coeff { a: q, b: Q::zero() }
    }

    pub fn new(a: Q, b: Q) -> Coeff {
        Coeff { a, b }
    }

    /// √5.
    pub fn sqrt5() -> Coeff {
        Coeff { a: Q::zero(), b: Q::one() }
    }

    /// The golden ratio (1 + √5)/2.
    pub fn golden() -> Coeff {
        Coeff { a: Q::new(1, 2), b: Q::new(1, 2) }
    }

    pub fn is_rational(&self) -> bool {
        self.b.is_zero()
    }

    pub fn as_rational(&self) -> Option<&Q> {
        if self.b.is_zero() {
            Some(&self.a)
        } else {
            None
        }
    }
}

impl Field for Coeff {
    fn zero() -> Self {
        Coeff::rational(Q::zero())
    }
    fn one() -> Self {
        Coeff::rational(Q::one())
    }
    fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }
    fn add(&self, o: &Self) -> Self {
        if self.b.is_zero() && o.b.is_zero() {
            return Coeff::rational(Field::add(&self.a, &o.a));
        }
        Coeff { a: Field::add(&self.a, &o.a), b: Field::add(&self.b, &o.b) }
    }
    fn sub(&self, o: &Self) -> Self {
        if self.b.is_zero() && o.b.is_zero() {
            return Coeff::rational(Field::sub(&self.a, &o.a));
        }
        Coeff { a: Field::sub(&self.a, &o.a), b: Field::sub(&self.b, &o.b) }
    }
    fn mul(&self, o: &Self) -> Self {
        if self.b.is_zero() && o.b.is_zero() {
            return Coeff::rational(Field::mul(&self.a, &o.a));
        }
        let five = Q::int(5);
        let a = Field::add(&Field::mul(&self.a, &o.a), &Field::mul(&five, &Field::mul(&self.b, &o.b)));
        let b = Field::add(&Field::mul(&self.a, &o.b), &Field::mul(&self.b, &o.a));
        Coeff { a, b }
    }
    fn neg(&self) -> Self {
        Coeff { a: Field::neg(&self.a), b: Field::neg(&self.b) }
    }
    fn inv(&self) -> Self {
        if self.b.is_zero() {
            return Coeff::rational(self.a.inv());
        }
        let five = Q::int(5);
        let norm = Field::sub(&Field::mul(&self.a, &self.a), &Field::mul(&five, &Field::mul(&self.b, &self.b)));
        let ninv = norm.inv();
        Coeff { a: Field::mul(&self.a, &ninv), b: Field::neg(&Field::mul(&self.b, &ninv)) }
    }
    fn from_i64(n: i64) -> Self {
        Coeff::rational(Q::int(n))
    }
}

impl fmt::Debug for Coeff {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for Coeff {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.b.is_zero() {
            write!(f, "{}", self.a)
        } else if self.a.is_zero() {
            write!(f, "{}*r5", self.b)
        } else {
            write!(f, "({}+{}*r5)", self.a, self.b)
        }
    }
}

impl From<i64> for Coeff {
    fn from(n: i64) -> Self {
        Coeff::from_i64(n)
    }
}

impl From<Q> for Coeff {
    fn from(q: Q) -> Self {
        Coeff::rational(q)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_and_big_agree() {
        let a = Q::new(i64::MAX, 3);
        let b = Q::new(i64::MAX - 1, 7);
        let s = Field::add(&a, &b);
        let expect = a.to_big() + b.to_big();
        assert_eq!(s.to_big(), expect);
        let p = Field::mul(&a, &b);
        assert_eq!(p.to_big(), a.to_big() * b.to_big());
        // demotion after cancellation
        let back = Field::sub(&s, &b);
        assert_eq!(back, a);
        assert!(matches!(back, Q::Small(..)));
    }

    #[test]
    fn parse_and_display() {
        let q: Q = "6/-4".parse().unwrap();
        assert_eq!(q, Q::new(-3, 2));
        assert_eq!(q.to_string(), "-3/2");
        assert_eq!(Q::int(7).to_string(), "7");
        assert!("1/0".parse::<Q>().is_err());
    }

    #[test]
    fn golden_ratio_satisfies_its_polynomial() {
        let phi = Coeff::golden();
        let lhs = Field::mul(&phi, &phi);
        let rhs = Field::add(&phi, &Coeff::one());
        assert_eq!(lhs, rhs);
        let inv = phi.inv();
        assert_eq!(Field::mul(&inv, &phi), Coeff::one());
        assert_eq!(inv, Field::sub(&phi, &Coeff::one()));
    }
}
