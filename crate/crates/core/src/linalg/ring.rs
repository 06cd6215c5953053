//! Coefficient rings and the arithmetic domains used by the reductions.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::LinalgError;

/// Coefficient ring of a chain complex: the integers or a prime field.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub enum Ring {
    #[default]
    Integers,
    Prime(u32),
}

impl Ring {
    pub fn is_field(self) -> bool {
        matches!(self, Ring::Prime(_))
    }

    /// Canonical representative of `v` in this ring (identity over Z).
    pub fn reduce(self, v: i64) -> i64 {
        match self {
            Ring::Integers => v,
            Ring::Prime(p) => v.rem_euclid(p as i64),
        }
    }
}

impl fmt::Display for Ring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Ring::Integers => write!(f, "Z"),
            Ring::Prime(p) => write!(f, "F{p}"),
        }
    }
}

fn is_prime(p: u32) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u32;
    while (d as u64) * (d as u64) <= p as u64 {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

impl FromStr for Ring {
    type Err = LinalgError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let t = s.trim();
        if t == "Z" {
            return Ok(Ring::Integers);
        }
        let digits = t
            .strip_prefix('F')
            .or_else(|| t.strip_prefix("GF"))
            .ok_or_else(|| LinalgError::UnknownRing(s.to_string()))?;
        let p: u32 = digits
            .parse()
            .map_err(|_| LinalgError::UnknownRing(s.to_string()))?;
        if !is_prime(p) || p > (1 << 30) {
            return Err(LinalgError::UnknownRing(s.to_string()));
        }
        Ok(Ring::Prime(p))
    }
}

impl Serialize for Ring {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Ring {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Raised by machine-integer arithmetic when a result leaves the `i64` range.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Overflow;

/// Arithmetic context for elimination. Integer domains are Euclidean;
/// the prime-field domain treats every nonzero element as a unit.
pub(crate) trait Domain: Sync {
    type Elem: Clone + fmt::Debug + PartialEq + Send + Sync;

    fn zero(&self) -> Self::Elem;
    fn from_i64(&self, v: i64) -> Self::Elem;
    fn is_zero(&self, a: &Self::Elem) -> bool;
    fn is_unit(&self, a: &Self::Elem) -> bool;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Result<Self::Elem, Overflow>;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Result<Self::Elem, Overflow>;
    fn neg(&self, a: &Self::Elem) -> Result<Self::Elem, Overflow>;
    /// Inverse of a unit.
    fn unit_inverse(&self, a: &Self::Elem) -> Self::Elem;
    /// Size used for pivot selection; smaller is preferred.
    fn magnitude(&self, a: &Self::Elem) -> u128;
    /// Quotient `q` with `a - q b` of small magnitude.
    fn quotient(&self, a: &Self::Elem, b: &Self::Elem) -> Result<Self::Elem, Overflow>;
    fn is_negative(&self, a: &Self::Elem) -> bool;
    fn to_u64(&self, a: &Self::Elem) -> Option<u64>;
    fn to_bigint(&self, a: &Self::Elem) -> BigInt;

    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Result<Self::Elem, Overflow> {
        let nb = self.neg(b)?;
        self.add(a, &nb)
    }

    /// `a - f * b`
    fn sub_mul(&self, a: &Self::Elem, f: &Self::Elem, b: &Self::Elem) -> Result<Self::Elem, Overflow> {
        let fb = self.mul(f, b)?;
        self.sub(a, &fb)
    }

    fn divides(&self, a: &Self::Elem, b: &Self::Elem) -> Result<bool, Overflow> {
        if self.is_zero(a) {
            return Ok(self.is_zero(b));
        }
        let q = self.quotient(b, a)?;
        let r = self.sub_mul(b, &q, a)?;
        Ok(self.is_zero(&r))
    }
}

/// Machine integers with overflow detection.
pub(crate) struct MachineInts;

impl Domain for MachineInts {
    type Elem = i64;

    fn zero(&self) -> i64 {
        0
    }
    fn from_i64(&self, v: i64) -> i64 {
        v
    }
    fn is_zero(&self, a: &i64) -> bool {
        *a == 0
    }
    fn is_unit(&self, a: &i64) -> bool {
        *a == 1 || *a == -1
    }
    fn add(&self, a: &i64, b: &i64) -> Result<i64, Overflow> {
        a.checked_add(*b).ok_or(Overflow)
    }
    fn mul(&self, a: &i64, b: &i64) -> Result<i64, Overflow> {
        a.checked_mul(*b).ok_or(Overflow)
    }
    fn neg(&self, a: &i64) -> Result<i64, Overflow> {
        a.checked_neg().ok_or(Overflow)
    }
    fn unit_inverse(&self, a: &i64) -> i64 {
        *a
    }
    fn magnitude(&self, a: &i64) -> u128 {
        a.unsigned_abs() as u128
    }
    fn quotient(&self, a: &i64, b: &i64) -> Result<i64, Overflow> {
        let (a, b) = (*a as i128, *b as i128);
        // round to nearest so the remainder is at most |b|/2
        let q0 = a.div_euclid(b);
        let r = a - q0 * b;
        let q = if 2 * r > b.abs() { q0 + b.signum() } else { q0 };
        i64::try_from(q).map_err(|_| Overflow)
    }
    fn is_negative(&self, a: &i64) -> bool {
        *a < 0
    }
    fn to_u64(&self, a: &i64) -> Option<u64> {
        u64::try_from(*a).ok()
    }
    fn to_bigint(&self, a: &i64) -> BigInt {
        BigInt::from(*a)
    }
}

/// Arbitrary-precision integers; never overflows.
pub(crate) struct BigInts;

impl Domain for BigInts {
    type Elem = BigInt;

    fn zero(&self) -> BigInt {
        BigInt::zero()
    }
    fn from_i64(&self, v: i64) -> BigInt {
        BigInt::from(v)
    }
    fn is_zero(&self, a: &BigInt) -> bool {
        a.is_zero()
    }
    fn is_unit(&self, a: &BigInt) -> bool {
        a.abs().is_one()
    }
    fn add(&self, a: &BigInt, b: &BigInt) -> Result<BigInt, Overflow> {
        Ok(a + b)
    }
    fn mul(&self, a: &BigInt, b: &BigInt) -> Result<BigInt, Overflow> {
        Ok(a * b)
    }
    fn neg(&self, a: &BigInt) -> Result<BigInt, Overflow> {
        Ok(-a)
    }
    fn unit_inverse(&self, a: &BigInt) -> BigInt {
        a.clone()
    }
    fn magnitude(&self, a: &BigInt) -> u128 {
        a.abs().to_u128().unwrap_or(u128::MAX)
    }
    fn quotient(&self, a: &BigInt, b: &BigInt) -> Result<BigInt, Overflow> {
        let (q, r) = a.div_mod_floor(b);
        let r2 = &r - b;
        Ok(if r2.abs() < r.abs() { q + 1 } else { q })
    }
    fn is_negative(&self, a: &BigInt) -> bool {
        a.is_negative()
    }
    fn to_u64(&self, a: &BigInt) -> Option<u64> {
        a.to_u64()
    }
    fn to_bigint(&self, a: &BigInt) -> BigInt {
        a.clone()
    }
}

/// The prime field of order `p`, elements kept in `0..p`.
pub(crate) struct PrimeField {
    pub p: u64,
}

impl PrimeField {
    fn pow(&self, mut b: u64, mut e: u64) -> u64 {
        let mut acc = 1u64;
        b %= self.p;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * b % self.p;
            }
            b = b * b % self.p;
            e >>= 1;
        }
        acc
    }
}

impl Domain for PrimeField {
    type Elem = u64;

    fn zero(&self) -> u64 {
        0
    }
    fn from_i64(&self, v: i64) -> u64 {
        v.rem_euclid(self.p as i64) as u64
    }
    fn is_zero(&self, a: &u64) -> bool {
        *a == 0
    }
    fn is_unit(&self, a: &u64) -> bool {
        *a != 0
    }
    fn add(&self, a: &u64, b: &u64) -> Result<u64, Overflow> {
        Ok((a + b) % self.p)
    }
    fn mul(&self, a: &u64, b: &u64) -> Result<u64, Overflow> {
        Ok(a * b % self.p)
    }
    fn neg(&self, a: &u64) -> Result<u64, Overflow> {
        Ok((self.p - a) % self.p)
    }
    fn unit_inverse(&self, a: &u64) -> u64 {
        self.pow(*a, self.p - 2)
    }
    fn magnitude(&self, a: &u64) -> u128 {
        u128::from(*a != 0)
    }
    fn quotient(&self, a: &u64, b: &u64) -> Result<u64, Overflow> {
        let inv = self.unit_inverse(b);
        self.mul(a, &inv)
    }
    fn is_negative(&self, _a: &u64) -> bool {
        false
    }
    fn to_u64(&self, a: &u64) -> Option<u64> {
        Some(*a)
    }
    fn to_bigint(&self, a: &u64) -> BigInt {
        BigInt::from(*a)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_rings() {
        assert_eq!("Z".parse::<Ring>().unwrap(), Ring::Integers);
        assert_eq!("F2".parse::<Ring>().unwrap(), Ring::Prime(2));
        assert_eq!("F7".parse::<Ring>().unwrap(), Ring::Prime(7));
        assert!("F4".parse::<Ring>().is_err());
        assert!("Q".parse::<Ring>().is_err());
        assert_eq!(Ring::Prime(3).to_string(), "F3");
    }

    #[test]
    fn nearest_quotient_keeps_remainder_small() {
        let d = MachineInts;
        for a in -20i64..=20 {
            for b in [-7i64, -3, -2, 2, 3, 7] {
                let q = d.quotient(&a, &b).unwrap();
                assert!(2 * (a - q * b).abs() <= b.abs(), "{a} {b} {q}");
            }
        }
        let q = BigInts.quotient(&BigInt::from(17), &BigInt::from(5)).unwrap();
        assert_eq!(q, BigInt::from(3));
    }

    #[test]
    fn field_inverse() {
        let f = PrimeField { p: 7 };
        for a in 1..7 {
            assert_eq!(f.mul(&a, &f.unit_inverse(&a)).unwrap(), 1);
        }
    }
}
