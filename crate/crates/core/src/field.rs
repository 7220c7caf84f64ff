//! Exact scalars over the rationals or a prime field.
//!
//! A [`FieldSpec`] names the ground field by its characteristic and acts as
//! the factory for [`Scalar`] values. Scalars carry their modulus so that
//! arithmetic needs no context; mixing scalars from different fields is a
//! programming error and panics.

use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize, Serializer};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "u64", into = "u64")]
pub struct FieldSpec {
    characteristic: u32,
}

impl FieldSpec {
    pub fn new(characteristic: u64) -> Result<Self> {
        if characteristic == 0 {
            return Ok(Self::rationals());
        }
        if characteristic > u32::MAX as u64 || !is_prime(characteristic) {
            return Err(Error::InvalidCharacteristic(characteristic));
        }
        Ok(Self { characteristic: characteristic as u32 })
    }

    pub const fn rationals() -> Self {
        Self { characteristic: 0 }
    }

    pub fn prime(p: u64) -> Result<Self> {
        if p == 0 {
            return Err(Error::InvalidCharacteristic(0));
        }
        Self::new(p)
    }

    pub fn characteristic(&self) -> u64 {
        self.characteristic as u64
    }

    pub fn is_finite(&self) -> bool {
        self.characteristic != 0
    }

    /// Number of elements, `None` for the rationals.
    pub fn order(&self) -> Option<u64> {
        self.is_finite().then_some(self.characteristic as u64)
    }

    pub fn zero(&self) -> Scalar {
        self.from_i64(0)
    }

    pub fn one(&self) -> Scalar {
        self.from_i64(1)
    }

    pub fn from_i64(&self, value: i64) -> Scalar {
        if self.characteristic == 0 {
            Scalar::Rational(BigRational::from_integer(BigInt::from(value)))
        } else {
            let p = self.characteristic as i64;
            Scalar::Mod { value: value.rem_euclid(p) as u32, modulus: self.characteristic }
        }
    }

    pub fn from_u64(&self, value: u64) -> Scalar {
        if self.characteristic == 0 {
            Scalar::Rational(BigRational::from_integer(BigInt::from(value)))
        } else {
            let p = self.characteristic as u64;
            Scalar::Mod { value: (value % p) as u32, modulus: self.characteristic }
        }
    }

    pub fn from_ratio(&self, numer: i64, denom: i64) -> Result<Scalar> {
        let d = self.from_i64(denom);
        let inv = d.inv().ok_or_else(|| Error::NotInvertible {
            value: denom.to_string(),
            characteristic: self.characteristic(),
        })?;
        Ok(self.from_i64(numer) * inv)
    }

    /// Parses `"3"`, `"-2"` or `"1/2"`.
    pub fn parse(&self, text: &str) -> Result<Scalar> {
        let text = text.trim();
        let bad = || Error::InvalidScalar(text.to_string());
        let (num, den) = match text.split_once('/') {
            Some((n, d)) => (n.trim(), d.trim()),
            None => (text, "1"),
        };
        let num: BigInt = num.parse().map_err(|_| bad())?;
        let den: BigInt = den.parse().map_err(|_| bad())?;
        if den.is_zero() {
            return Err(bad());
        }
        let n = self.from_bigint(&num);
        let d = self.from_bigint(&den);
        let inv = d.inv().ok_or_else(|| Error::NotInvertible {
            value: den.to_string(),
            characteristic: self.characteristic(),
        })?;
        Ok(n * inv)
    }

    fn from_bigint(&self, value: &BigInt) -> Scalar {
        if self.characteristic == 0 {
            Scalar::Rational(BigRational::from_integer(value.clone()))
        } else {
            let p = BigInt::from(self.characteristic);
            let r = value.mod_floor(&p);
            let v: u32 = r.try_into().expect("residue fits in u32");
            Scalar::Mod { value: v, modulus: self.characteristic }
        }
    }

    /// Whether `m` is zero in the field, i.e. whether multiplication by `m`
    /// has a nonzero kernel on `K`. Characteristic 0 divides only 0.
    pub fn divides(&self, m: u64) -> bool {
        if self.characteristic == 0 {
            m == 0
        } else {
            m % self.characteristic as u64 == 0
        }
    }

    /// `dim Ker(·m : K → K)`.
    pub fn multiplication_kernel_dim(&self, m: u64) -> usize {
        usize::from(self.divides(m))
    }

    /// The `i`-th element of a finite field in the order `0, 1, ..., p - 1`.
    pub fn element(&self, index: u64) -> Scalar {
        self.from_u64(index)
    }
}

impl TryFrom<u64> for FieldSpec {
    type Error = Error;
    fn try_from(value: u64) -> Result<Self> {
        Self::new(value)
    }
}

impl From<FieldSpec> for u64 {
    fn from(f: FieldSpec) -> u64 {
        f.characteristic()
    }
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.characteristic == 0 {
            write!(f, "Q")
        } else {
            write!(f, "F_{}", self.characteristic)
        }
    }
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// An element of a prime field or of the rationals in canonical form:
/// reduced residues, and fractions with positive denominator and gcd 1.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Scalar {
    Mod { value: u32, modulus: u32 },
    Rational(BigRational),
}

impl Scalar {
    pub fn field(&self) -> FieldSpec {
        match self {
            Scalar::Mod { modulus, .. } => FieldSpec { characteristic: *modulus },
            Scalar::Rational(_) => FieldSpec::rationals(),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Mod { value, .. } => *value == 0,
            Scalar::Rational(r) => r.is_zero(),
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Scalar::Mod { value, .. } => *value == 1,
            Scalar::Rational(r) => r.is_one(),
        }
    }

    /// Multiplicative inverse; Fermat's little theorem in `F_p`.
    pub fn inv(&self) -> Option<Scalar> {
        if self.is_zero() {
            return None;
        }
        Some(match self {
            Scalar::Mod { value, modulus } => {
                let p = *modulus as u64;
                Scalar::Mod { value: pow_mod(*value as u64, p - 2, p) as u32, modulus: *modulus }
            }
            Scalar::Rational(r) => Scalar::Rational(r.recip()),
        })
    }

    /// Integer representative for small values (residue, or numerator of an integral rational).
    pub fn to_i64(&self) -> Option<i64> {
        match self {
            Scalar::Mod { value, .. } => Some(*value as i64),
            Scalar::Rational(r) if r.is_integer() => r.numer().try_into().ok(),
            Scalar::Rational(_) => None,
        }
    }

    fn check(&self, other: &Scalar) {
        match (self, other) {
            (Scalar::Mod { modulus: a, .. }, Scalar::Mod { modulus: b, .. }) if a == b => {}
            (Scalar::Rational(_), Scalar::Rational(_)) => {}
            _ => panic!("mixed-field arithmetic: {} and {}", self.field(), other.field()),
        }
    }
}

fn pow_mod(mut base: u64, mut exp: u64, p: u64) -> u64 {
    let mut acc = 1u64;
    base %= p;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * base % p;
        }
        base = base * base % p;
        exp >>= 1;
    }
    acc
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Mod { value, .. } => write!(f, "{value}"),
            Scalar::Rational(r) if r.is_integer() => write!(f, "{}", r.numer()),
            Scalar::Rational(r) => write!(f, "{}/{}", r.numer(), r.denom()),
        }
    }
}

impl Serialize for Scalar {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl Add<&Scalar> for &Scalar {
    type Output = Scalar;
    fn add(self, rhs: &Scalar) -> Scalar {
        self.check(rhs);
        match (self, rhs) {
            (Scalar::Mod { value: a, modulus }, Scalar::Mod { value: b, .. }) => {
                let s = (*a as u64 + *b as u64) % *modulus as u64;
                Scalar::Mod { value: s as u32, modulus: *modulus }
            }
            (Scalar::Rational(a), Scalar::Rational(b)) => Scalar::Rational(a + b),
            _ => unreachable!(),
        }
    }
}

impl Sub<&Scalar> for &Scalar {
    type Output = Scalar;
    fn sub(self, rhs: &Scalar) -> Scalar {
        self + &(-rhs)
    }
}

impl Mul<&Scalar> for &Scalar {
    type Output = Scalar;
    fn mul(self, rhs: &Scalar) -> Scalar {
        self.check(rhs);
        match (self, rhs) {
            (Scalar::Mod { value: a, modulus }, Scalar::Mod { value: b, .. }) => {
                let s = (*a as u64 * *b as u64) % *modulus as u64;
                Scalar::Mod { value: s as u32, modulus: *modulus }
            }
            (Scalar::Rational(a), Scalar::Rational(b)) => Scalar::Rational(a * b),
            _ => unreachable!(),
        }
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        match self {
            Scalar::Mod { value, modulus } => {
                let v = if *value == 0 { 0 } else { modulus - value };
                Scalar::Mod { value: v, modulus: *modulus }
            }
            Scalar::Rational(r) => Scalar::Rational(-r),
        }
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -&self
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr<Scalar> for Scalar {
            type Output = Scalar;
            fn $m(self, rhs: Scalar) -> Scalar {
                (&self).$m(&rhs)
            }
        }
        impl $tr<&Scalar> for Scalar {
            type Output = Scalar;
            fn $m(self, rhs: &Scalar) -> Scalar {
                (&self).$m(rhs)
            }
        }
        impl $tr<Scalar> for &Scalar {
            type Output = Scalar;
            fn $m(self, rhs: Scalar) -> Scalar {
                self.$m(&rhs)
            }
        }
    };
}

forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl AddAssign<&Scalar> for Scalar {
    fn add_assign(&mut self, rhs: &Scalar) {
        *self = &*self + rhs;
    }
}

impl SubAssign<&Scalar> for Scalar {
    fn sub_assign(&mut self, rhs: &Scalar) {
        *self = &*self - rhs;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_composite_characteristic() {
        assert_eq!(FieldSpec::new(4), Err(Error::InvalidCharacteristic(4)));
        assert_eq!(FieldSpec::new(1), Err(Error::InvalidCharacteristic(1)));
        assert!(FieldSpec::new(5).is_ok());
        assert!(FieldSpec::prime(0).is_err());
    }

    #[test]
    fn canonical_fractions() {
        let q = FieldSpec::rationals();
        assert_eq!(q.parse("2/4").unwrap(), q.parse("-1/-2").unwrap());
        assert_eq!(q.parse("3/6").unwrap().to_string(), "1/2");
        assert_eq!(q.from_ratio(-3, 6).unwrap().to_string(), "-1/2");
    }

    #[test]
    fn fermat_inverse() {
        let f = FieldSpec::new(7).unwrap();
        for v in 1..7 {
            let x = f.from_i64(v);
            assert!((x.clone() * x.inv().unwrap()).is_one());
        }
        assert!(f.zero().inv().is_none());
        assert_eq!(f.parse("1/2").unwrap(), f.from_i64(4));
        assert!(f.parse("1/7").is_err());
    }

    #[test]
    fn negative_residues() {
        let f = FieldSpec::new(3).unwrap();
        assert_eq!(f.from_i64(-1), f.from_i64(2));
        assert_eq!(-f.one(), f.from_i64(2));
        assert!((-f.zero()).is_zero());
    }

    #[test]
    fn divisibility_convention() {
        let q = FieldSpec::rationals();
        assert!(q.divides(0));
        assert!(!q.divides(6));
        let f2 = FieldSpec::new(2).unwrap();
        assert!(f2.divides(4));
        assert!(!f2.divides(3));
        assert_eq!(f2.multiplication_kernel_dim(2), 1);
    }

    #[test]
    #[should_panic(expected = "mixed-field")]
    fn mixed_field_panics() {
        let _ = FieldSpec::new(2).unwrap().one() + FieldSpec::rationals().one();
    }
}
