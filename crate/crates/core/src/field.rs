//! Coefficient fields.
//!
//! Everything downstream is generic over [`Field`]. Two implementations ship:
//! the prime field [`Fp`] with the modulus fixed at compile time, and the
//! rationals as [`num_rational::BigRational`].

use std::fmt;
use std::hash::Hash;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use rand::Rng;

/// An exact field usable as polynomial coefficients.
pub trait Field:
    Clone
    + fmt::Debug
    + fmt::Display
    + PartialEq
    + Eq
    + Hash
    + Send
    + Sync
    + 'static
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    /// Short machine-readable name, `qq` or `fp:<p>`.
    fn descriptor() -> String;

    /// Zero for the rationals.
    fn characteristic() -> u64;

    fn inverse(&self) -> Option<Self>;

    fn from_i64(v: i64) -> Self;

    fn from_bigint(v: &BigInt) -> Self;

    /// `num / den`, or `None` when `den` vanishes in the field.
    fn from_ratio(num: &BigInt, den: &BigInt) -> Option<Self> {
        Self::from_bigint(den)
            .inverse()
            .map(|inv| Self::from_bigint(num) * inv)
    }

    /// A random element; may be zero.
    fn random<R: Rng + ?Sized>(rng: &mut R) -> Self;

    fn random_nonzero<R: Rng + ?Sized>(rng: &mut R) -> Self {
        loop {
            let c = Self::random(rng);
            if !c.is_zero() {
                return c;
            }
        }
    }

    /// Integer value when the element is the image of a small integer
    /// (symmetric representative for prime fields).
    fn to_i64(&self) -> Option<i64>;
}

const fn is_prime_u32(p: u32) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= p as u64 {
        if (p as u64).is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Element of the prime field `Z/PZ`, stored reduced in `[0, P)`.
#[derive(Copy, Clone, PartialEq, Eq, Hash, Default)]
pub struct Fp<const P: u32>(u32);

impl<const P: u32> Fp<P> {
    const MODULUS_IS_PRIME: () = assert!(is_prime_u32(P), "Fp modulus must be prime");

    pub fn new(v: u64) -> Self {
        #[allow(clippy::let_unit_value)]
        let _ = Self::MODULUS_IS_PRIME;
        Fp((v % P as u64) as u32)
    }

    pub fn from_signed(v: i64) -> Self {
        let r = v.rem_euclid(P as i64);
        Self::new(r as u64)
    }

    pub fn value(self) -> u32 {
        self.0
    }

    pub fn pow(self, mut e: u64) -> Self {
        let mut base = self;
        let mut acc = Self::new(1);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base;
            }
            base = base * base;
            e >>= 1;
        }
        acc
    }

    fn symmetric(self) -> i64 {
        if self.0 as u64 > P as u64 / 2 {
            self.0 as i64 - P as i64
        } else {
            self.0 as i64
        }
    }
}

impl<const P: u32> fmt::Debug for Fp<P> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.symmetric())
    }
}

impl<const P: u32> fmt::Display for Fp<P> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.symmetric())
    }
}

impl<const P: u32> Add for Fp<P> {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        Self::new(self.0 as u64 + rhs.0 as u64)
    }
}

impl<const P: u32> Sub for Fp<P> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        Self::new(self.0 as u64 + P as u64 - rhs.0 as u64)
    }
}

impl<const P: u32> Mul for Fp<P> {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        Self::new(self.0 as u64 * rhs.0 as u64)
    }
}

impl<const P: u32> Neg for Fp<P> {
    type Output = Self;
    fn neg(self) -> Self {
        Self::new(P as u64 - self.0 as u64)
    }
}

impl<const P: u32> Div for Fp<P> {
    type Output = Self;
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn div(self, rhs: Self) -> Self {
        self * rhs.inverse().expect("division by zero in Fp")
    }
}

impl<const P: u32> Zero for Fp<P> {
    fn zero() -> Self {
        Self::new(0)
    }
    fn is_zero(&self) -> bool {
        self.0 == 0
    }
}

impl<const P: u32> One for Fp<P> {
    fn one() -> Self {
        Self::new(1)
    }
}

impl<const P: u32> Field for Fp<P> {
    fn descriptor() -> String {
        format!("fp:{P}")
    }

    fn characteristic() -> u64 {
        P as u64
    }

    fn inverse(&self) -> Option<Self> {
        if self.0 == 0 {
            None
        } else {
            Some(self.pow(P as u64 - 2))
        }
    }

    fn from_i64(v: i64) -> Self {
        Self::from_signed(v)
    }

    fn from_bigint(v: &BigInt) -> Self {
        let r = v.mod_floor(&BigInt::from(P));
        Self::new(r.to_u64().expect("reduced residue fits in u64"))
    }

    fn random<R: Rng + ?Sized>(rng: &mut R) -> Self {
        Self::new(rng.gen_range(0..P as u64))
    }

    fn to_i64(&self) -> Option<i64> {
        Some(self.symmetric())
    }
}

/// Range of numerators drawn by [`Field::random`] over the rationals.
const RATIONAL_SAMPLE_BOUND: i64 = 100;

impl Field for BigRational {
    fn descriptor() -> String {
        "qq".to_string()
    }

    fn characteristic() -> u64 {
        0
    }

    fn inverse(&self) -> Option<Self> {
        if self.is_zero() {
            None
        } else {
            Some(self.recip())
        }
    }

    fn from_i64(v: i64) -> Self {
        BigRational::from_integer(BigInt::from(v))
    }

    fn from_bigint(v: &BigInt) -> Self {
        BigRational::from_integer(v.clone())
    }

    fn from_ratio(num: &BigInt, den: &BigInt) -> Option<Self> {
        if den.is_zero() {
            None
        } else {
            Some(BigRational::new(num.clone(), den.clone()))
        }
    }

    fn random<R: Rng + ?Sized>(rng: &mut R) -> Self {
        Self::from_i64(rng.gen_range(-RATIONAL_SAMPLE_BOUND..=RATIONAL_SAMPLE_BOUND))
    }

    fn to_i64(&self) -> Option<i64> {
        if self.is_integer() {
            self.numer().to_i64()
        } else {
            None
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    type F = Fp<32003>;

    #[test]
    fn fp_reduces_into_range() {
        assert_eq!(F::new(32003).value(), 0);
        assert_eq!(F::from_i64(-1).value(), 32002);
        assert_eq!(F::from_i64(-1).to_string(), "-1");
    }

    #[test]
    fn fp_inverse_roundtrip() {
        for v in [1u64, 2, 3, 17, 32002] {
            let a = F::new(v);
            assert_eq!(a * a.inverse().unwrap(), F::one());
        }
        assert!(F::zero().inverse().is_none());
    }

    #[test]
    fn ratio_in_fp_and_qq() {
        let half = F::from_ratio(&BigInt::from(1), &BigInt::from(2)).unwrap();
        assert_eq!(half + half, F::one());
        assert!(Fp::<7>::from_ratio(&BigInt::from(1), &BigInt::from(14)).is_none());
        let q = BigRational::from_ratio(&BigInt::from(3), &BigInt::from(6)).unwrap();
        assert_eq!(q.to_string(), "1/2");
    }
}
