//! Integer backings for residue rings.
//!
//! Every ring computation in the crate is generic over a [`Word`]: the
//! unsigned integer type that stores canonical representatives. `BigUint`
//! handles any modulus; `u64` is a fixed-width fast path that is only
//! admitted for moduli below 2^63, where `a + b` cannot overflow and
//! products fit in `u128`.

use std::fmt::{Debug, Display};
use std::hash::Hash;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{FromPrimitive, ToPrimitive, Unsigned};

/// Unsigned integer type usable as the representative of a residue.
pub trait Word:
    Integer + Unsigned + Clone + Hash + Debug + Display + FromPrimitive + ToPrimitive + Send + Sync + 'static
{
    /// Whether this type can hold every value of `Z/modulus` and run ring
    /// operations on them without overflow.
    fn supports(modulus: &BigUint) -> bool;

    fn from_biguint(v: &BigUint) -> Option<Self>;

    fn to_biguint(&self) -> BigUint;

    /// `self * rhs mod m`, with both inputs already reduced.
    fn mul_mod(&self, rhs: &Self, m: &Self) -> Self;

    fn from_small(v: u64) -> Self {
        <Self as FromPrimitive>::from_u64(v).expect("u64 always fits a word")
    }

    fn add_mod(&self, rhs: &Self, m: &Self) -> Self {
        let s = self.clone() + rhs.clone();
        if &s >= m {
            s - m.clone()
        } else {
            s
        }
    }

    fn sub_mod(&self, rhs: &Self, m: &Self) -> Self {
        if self >= rhs {
            self.clone() - rhs.clone()
        } else {
            m.clone() - (rhs.clone() - self.clone())
        }
    }

    fn neg_mod(&self, m: &Self) -> Self {
        if self.is_zero() {
            Self::zero()
        } else {
            m.clone() - self.clone()
        }
    }

    fn pow_mod(&self, mut exp: u64, m: &Self) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one() % m.clone();
        while exp > 0 {
            if exp & 1 == 1 {
                acc = acc.mul_mod(&base, m);
            }
            exp >>= 1;
            if exp > 0 {
                base = base.mul_mod(&base, m);
            }
        }
        acc
    }

    /// Inverse modulo `m` by the extended Euclidean algorithm, or `None`
    /// when `gcd(self, m) != 1`.
    ///
    /// Bezout coefficients are tracked modulo `m`, so no signed type is
    /// needed.
    fn inv_mod(&self, m: &Self) -> Option<Self> {
        if m.is_one() {
            return Some(Self::zero());
        }
        let (mut r0, mut r1) = (m.clone(), self.clone() % m.clone());
        let (mut t0, mut t1) = (Self::zero(), Self::one());
        while !r1.is_zero() {
            let (q, r) = r0.div_rem(&r1);
            let q = q % m.clone();
            let t2 = t0.sub_mod(&q.mul_mod(&t1, m), m);
            r0 = std::mem::replace(&mut r1, r);
            t0 = std::mem::replace(&mut t1, t2);
        }
        if r0.is_one() {
            Some(t0)
        } else {
            None
        }
    }
}

impl Word for u64 {
    fn supports(modulus: &BigUint) -> bool {
        modulus.bits() <= 63
    }

    fn from_biguint(v: &BigUint) -> Option<Self> {
        v.to_u64()
    }

    fn to_biguint(&self) -> BigUint {
        BigUint::from(*self)
    }

    #[inline]
    fn mul_mod(&self, rhs: &Self, m: &Self) -> Self {
        ((*self as u128 * *rhs as u128) % *m as u128) as u64
    }

    #[inline]
    fn add_mod(&self, rhs: &Self, m: &Self) -> Self {
        let s = self + rhs;
        if s >= *m {
            s - m
        } else {
            s
        }
    }

    #[inline]
    fn sub_mod(&self, rhs: &Self, m: &Self) -> Self {
        if self >= rhs {
            self - rhs
        } else {
            m - (rhs - self)
        }
    }
}

impl Word for BigUint {
    fn supports(_modulus: &BigUint) -> bool {
        true
    }

    fn from_biguint(v: &BigUint) -> Option<Self> {
        Some(v.clone())
    }

    fn to_biguint(&self) -> BigUint {
        self.clone()
    }

    fn mul_mod(&self, rhs: &Self, m: &Self) -> Self {
        (self * rhs) % m
    }

    fn pow_mod(&self, exp: u64, m: &Self) -> Self {
        self.modpow(&BigUint::from(exp), m)
    }
}
