//! Exact field elements over ℚ or 𝔽_p.
//!
//! Rationals use a machine-word fast path and fall back to big integers
//! on overflow. Both representations are kept canonical so structural
//! equality is value equality.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// The coefficient field.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FieldSpec {
    Rationals,
    PrimeField(u32),
}

impl FieldSpec {
    /// Validates a field: `p` must be an odd prime.
    pub fn new_prime(p: u64) -> Result<Self> {
        if p == 2 {
            return Err(Error::UnsupportedCharacteristic(2));
        }
        if p > u32::MAX as u64 || !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        Ok(FieldSpec::PrimeField(p as u32))
    }

    pub fn characteristic(&self) -> u32 {
        match self {
            FieldSpec::Rationals => 0,
            FieldSpec::PrimeField(p) => *p,
        }
    }

    pub fn zero(&self) -> Scalar {
        self.from_i64(0)
    }

    pub fn one(&self) -> Scalar {
        self.from_i64(1)
    }

    pub fn from_i64(&self, n: i64) -> Scalar {
        match *self {
            FieldSpec::Rationals => Scalar(Repr::Small(n, 1)),
            FieldSpec::PrimeField(p) => Scalar(Repr::Mod(n.rem_euclid(p as i64) as u32, p)),
        }
    }

    pub fn from_bigint(&self, n: &BigInt) -> Scalar {
        match *self {
            FieldSpec::Rationals => Scalar::from_big(BigRational::from_integer(n.clone())),
            FieldSpec::PrimeField(p) => {
                let r = n.mod_floor(&BigInt::from(p));
                Scalar(Repr::Mod(r.to_u32().unwrap_or(0), p))
            }
        }
    }

    /// `num / den` in this field; fails when `den` vanishes in the field.
    pub fn from_ratio(&self, num: &BigInt, den: &BigInt) -> Result<Scalar> {
        let d = self.from_bigint(den);
        let inv = d.inv().ok_or_else(|| Error::InvalidArgument(format!("denominator {den} vanishes")))?;
        Ok(self.from_bigint(num) * inv)
    }
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldSpec::Rationals => write!(f, "Q"),
            FieldSpec::PrimeField(p) => write!(f, "Fp {p}"),
        }
    }
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
enum Repr {
    /// Reduced fraction, denominator positive.
    Small(i64, i64),
    /// Only used when the value does not fit `Small`.
    Big(BigRational),
    /// Residue and modulus.
    Mod(u32, u32),
}

/// An element of ℚ or 𝔽_p.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Scalar(Repr);

impl Scalar {
    fn from_big(r: BigRational) -> Scalar {
        if let (Some(n), Some(d)) = (r.numer().to_i64(), r.denom().to_i64()) {
            if n != i64::MIN && d != i64::MIN {
                return Scalar(Repr::Small(n, d));
            }
        }
        Scalar(Repr::Big(r))
    }

    fn from_i128(n: i128, d: i128) -> Scalar {
        debug_assert!(d != 0);
        let g = n.gcd(&d);
        let (mut n, mut d) = if g > 1 { (n / g, d / g) } else { (n, d) };
        if d < 0 {
            n = -n;
            d = -d;
        }
        match (i64::try_from(n), i64::try_from(d)) {
            (Ok(a), Ok(b)) if a != i64::MIN => Scalar(Repr::Small(a, b)),
            _ => Scalar::from_big(BigRational::new(BigInt::from(n), BigInt::from(d))),
        }
    }

    fn to_big(&self) -> BigRational {
        match &self.0 {
            Repr::Small(n, d) => BigRational::new_raw(BigInt::from(*n), BigInt::from(*d)),
            Repr::Big(r) => r.clone(),
            Repr::Mod(..) => panic!("mixing prime-field and rational scalars"),
        }
    }

    pub fn is_zero(&self) -> bool {
        match &self.0 {
            Repr::Small(n, _) => *n == 0,
            Repr::Big(r) => r.is_zero(),
            Repr::Mod(v, _) => *v == 0,
        }
    }

    pub fn is_one(&self) -> bool {
        match &self.0 {
            Repr::Small(n, d) => *n == 1 && *d == 1,
            Repr::Big(r) => r.is_one(),
            Repr::Mod(v, _) => *v == 1,
        }
    }

    /// The field this element belongs to.
    pub fn field(&self) -> FieldSpec {
        match &self.0 {
            Repr::Mod(_, p) => FieldSpec::PrimeField(*p),
            _ => FieldSpec::Rationals,
        }
    }

    /// Multiplicative inverse, `None` for zero.
    pub fn inv(&self) -> Option<Scalar> {
        if self.is_zero() {
            return None;
        }
        Some(match &self.0 {
            Repr::Small(n, d) => Scalar::from_i128(*d as i128, *n as i128),
            Repr::Big(r) => Scalar::from_big(r.recip()),
            Repr::Mod(v, p) => Scalar(Repr::Mod(mod_pow(*v as u64, (*p - 2) as u64, *p as u64) as u32, *p)),
        })
    }

    /// Scalar multiplication by a machine integer.
    pub fn mul_int(&self, k: i64) -> Scalar {
        let f = self.field();
        self.clone() * f.from_i64(k)
    }

    /// Negative in the symmetric residue sense for 𝔽_p, sign for ℚ.
    pub fn is_negative(&self) -> bool {
        match &self.0 {
            Repr::Small(n, _) => *n < 0,
            Repr::Big(r) => r.is_negative(),
            Repr::Mod(v, p) => *v > *p / 2,
        }
    }

    /// `(numerator, denominator)` for rationals; symmetric residue over 1 for 𝔽_p.
    pub fn to_fraction(&self) -> (BigInt, BigInt) {
        match &self.0 {
            Repr::Small(n, d) => (BigInt::from(*n), BigInt::from(*d)),
            Repr::Big(r) => (r.numer().clone(), r.denom().clone()),
            Repr::Mod(v, p) => {
                let v = *v as i64;
                let p = *p as i64;
                let s = if v > p / 2 { v - p } else { v };
                (BigInt::from(s), BigInt::one())
            }
        }
    }

    /// A total order used only to make outputs canonical.
    pub fn canonical_cmp(&self, other: &Scalar) -> Ordering {
        match (&self.0, &other.0) {
            (Repr::Mod(a, _), Repr::Mod(b, _)) => a.cmp(b),
            _ => self.to_big().cmp(&other.to_big()),
        }
    }
}

fn mod_pow(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut r = 1u64;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % m;
        }
        b = b * b % m;
        e >>= 1;
    }
    r
}

impl Add for Scalar {
    type Output = Scalar;
    fn add(self, rhs: Scalar) -> Scalar {
        &self + &rhs
    }
}

impl<'a> Add<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn add(self, rhs: &Scalar) -> Scalar {
        match (&self.0, &rhs.0) {
            (Repr::Mod(a, p), Repr::Mod(b, q)) => {
                assert_eq!(p, q, "scalars from different prime fields");
                Scalar(Repr::Mod(((*a as u64 + *b as u64) % *p as u64) as u32, *p))
            }
            (Repr::Small(a, b), Repr::Small(c, d)) => {
                if *b == 1 && *d == 1 {
                    if let Some(s) = a.checked_add(*c) {
                        if s != i64::MIN {
                            return Scalar(Repr::Small(s, 1));
                        }
                    }
                }
                Scalar::from_i128(*a as i128 * *d as i128 + *c as i128 * *b as i128, *b as i128 * *d as i128)
            }
            _ => Scalar::from_big(self.to_big() + rhs.to_big()),
        }
    }
}

impl Sub for Scalar {
    type Output = Scalar;
    fn sub(self, rhs: Scalar) -> Scalar {
        &self - &rhs
    }
}

impl<'a> Sub<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn sub(self, rhs: &Scalar) -> Scalar {
        self + &(-rhs)
    }
}

impl Mul for Scalar {
    type Output = Scalar;
    fn mul(self, rhs: Scalar) -> Scalar {
        &self * &rhs
    }
}

impl<'a> Mul<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn mul(self, rhs: &Scalar) -> Scalar {
        match (&self.0, &rhs.0) {
            (Repr::Mod(a, p), Repr::Mod(b, q)) => {
                assert_eq!(p, q, "scalars from different prime fields");
                Scalar(Repr::Mod(((*a as u64 * *b as u64) % *p as u64) as u32, *p))
            }
            (Repr::Small(a, b), Repr::Small(c, d)) => {
                if *b == 1 && *d == 1 {
                    if let Some(s) = a.checked_mul(*c) {
                        if s != i64::MIN {
                            return Scalar(Repr::Small(s, 1));
                        }
                    }
                }
                Scalar::from_i128(*a as i128 * *c as i128, *b as i128 * *d as i128)
            }
            _ => Scalar::from_big(self.to_big() * rhs.to_big()),
        }
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -&self
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        match &self.0 {
            Repr::Small(n, d) => Scalar(Repr::Small(-n, *d)),
            Repr::Big(r) => Scalar::from_big(-r),
            Repr::Mod(v, p) => Scalar(Repr::Mod(if *v == 0 { 0 } else { p - v }, *p)),
        }
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (n, d) = self.to_fraction();
        if d.is_one() {
            write!(f, "{n}")
        } else {
            write!(f, "{n}/{d}")
        }
    }
}
