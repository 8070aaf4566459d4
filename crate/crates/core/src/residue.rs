//! The residue ring `Z/p^m` for an odd prime `p`.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_bigint::BigUint;
use num_traits::{One, Pow, ToPrimitive};
use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::primes::is_prime;
use crate::word::Word;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ResidueError {
    #[error("{0} is not an odd prime")]
    NotOddPrime(BigUint),
    #[error("exponent must be at least 1")]
    ZeroExponent,
    #[error("modulus {0} does not fit the selected word type")]
    WordTooNarrow(BigUint),
    #[error("residues belong to different moduli ({0} vs {1})")]
    ModulusMismatch(String, String),
    #[error("{value} is not invertible modulo {modulus}")]
    NonUnit { value: String, modulus: String },
    #[error("{value} is not a {p}-integer")]
    NotPInteger { value: String, p: String },
}

#[derive(Debug)]
struct ModulusInner<W> {
    p: W,
    exponent: u32,
    modulus: W,
    p_big: BigUint,
    modulus_big: BigUint,
}

/// The pair `(p, m)` defining `Z/p^m`. Cloning is cheap.
#[derive(Debug, Clone)]
pub struct PrimePowerModulus<W = BigUint> {
    inner: Arc<ModulusInner<W>>,
}

impl<W: Word> PrimePowerModulus<W> {
    pub fn new(p: impl Into<BigUint>, exponent: u32) -> Result<Self, ResidueError> {
        let p_big = p.into();
        if exponent == 0 {
            return Err(ResidueError::ZeroExponent);
        }
        if p_big < BigUint::from(3u32) || !is_prime(&p_big) {
            return Err(ResidueError::NotOddPrime(p_big));
        }
        let full = Pow::pow(&p_big, exponent);
        if !W::supports(&full) {
            return Err(ResidueError::WordTooNarrow(full));
        }
        let Some(modulus) = W::from_biguint(&full) else {
            return Err(ResidueError::WordTooNarrow(full));
        };
        let p = W::from_biguint(&p_big).expect("p divides the modulus");
        Ok(Self {
            inner: Arc::new(ModulusInner {
                p,
                exponent,
                modulus,
                p_big,
                modulus_big: full,
            }),
        })
    }

    pub fn p(&self) -> &W {
        &self.inner.p
    }

    pub fn p_big(&self) -> &BigUint {
        &self.inner.p_big
    }

    /// `p` as a machine integer, when it fits.
    pub fn p_u64(&self) -> Option<u64> {
        self.inner.p_big.to_u64()
    }

    pub fn exponent(&self) -> u32 {
        self.inner.exponent
    }

    /// `p^m`.
    pub fn modulus(&self) -> &W {
        &self.inner.modulus
    }

    pub fn modulus_big(&self) -> &BigUint {
        &self.inner.modulus_big
    }

    /// The same prime at a different exponent.
    pub fn with_exponent(&self, exponent: u32) -> Result<Self, ResidueError> {
        Self::new(self.inner.p_big.clone(), exponent)
    }

    pub fn zero(&self) -> Residue<W> {
        self.raw(W::zero())
    }

    pub fn one(&self) -> Residue<W> {
        self.reduce(&W::one())
    }

    pub fn from_u64(&self, v: u64) -> Residue<W> {
        self.reduce(&W::from_small(v))
    }

    pub fn from_i64(&self, v: i64) -> Residue<W> {
        let r = self.from_u64(v.unsigned_abs());
        if v < 0 {
            -r
        } else {
            r
        }
    }

    pub fn from_biguint(&self, v: &BigUint) -> Residue<W> {
        let reduced = v % &self.inner.modulus_big;
        self.raw(W::from_biguint(&reduced).expect("reduced value fits"))
    }

    /// The residue of `p` itself.
    pub fn prime(&self) -> Residue<W> {
        self.reduce(&self.inner.p)
    }

    pub fn reduce(&self, v: &W) -> Residue<W> {
        self.raw(v.clone() % self.inner.modulus.clone())
    }

    pub(crate) fn raw(&self, value: W) -> Residue<W> {
        debug_assert!(value < self.inner.modulus);
        Residue {
            value,
            modulus: self.clone(),
        }
    }

    pub fn same_ring(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.inner, &other.inner)
            || (self.inner.exponent == other.inner.exponent && self.inner.p == other.inner.p)
    }

    fn describe(&self) -> String {
        format!("{}^{}", self.inner.p_big, self.inner.exponent)
    }
}

impl<W: Word> PartialEq for PrimePowerModulus<W> {
    fn eq(&self, other: &Self) -> bool {
        self.same_ring(other)
    }
}

impl<W: Word> Eq for PrimePowerModulus<W> {}

impl<W: Word> fmt::Display for PrimePowerModulus<W> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.describe())
    }
}

/// An element of `Z/p^m` in canonical form `0 <= value < p^m`.
///
/// The checked methods (`try_add`, `try_inv`, ...) return
/// [`ResidueError::ModulusMismatch`] across rings. The operator impls panic
/// instead; they exist for formula evaluation inside a single ring.
#[derive(Debug, Clone)]
pub struct Residue<W = BigUint> {
    value: W,
    modulus: PrimePowerModulus<W>,
}

impl<W: Word> Residue<W> {
    pub fn value(&self) -> &W {
        &self.value
    }

    pub fn to_biguint(&self) -> BigUint {
        self.value.to_biguint()
    }

    pub fn modulus(&self) -> &PrimePowerModulus<W> {
        &self.modulus
    }

    pub fn is_zero(&self) -> bool {
        self.value.is_zero()
    }

    pub fn is_unit(&self) -> bool {
        !(self.value.clone() % self.modulus.p().clone()).is_zero()
    }

    fn check(&self, other: &Self) -> Result<(), ResidueError> {
        if self.modulus.same_ring(&other.modulus) {
            Ok(())
        } else {
            Err(ResidueError::ModulusMismatch(
                self.modulus.describe(),
                other.modulus.describe(),
            ))
        }
    }

    fn m(&self) -> &W {
        self.modulus.modulus()
    }

    pub fn try_add(&self, other: &Self) -> Result<Self, ResidueError> {
        self.check(other)?;
        Ok(self.modulus.raw(self.value.add_mod(&other.value, self.m())))
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self, ResidueError> {
        self.check(other)?;
        Ok(self.modulus.raw(self.value.sub_mod(&other.value, self.m())))
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self, ResidueError> {
        self.check(other)?;
        Ok(self.modulus.raw(self.value.mul_mod(&other.value, self.m())))
    }

    pub fn neg(&self) -> Self {
        self.modulus.raw(self.value.neg_mod(self.m()))
    }

    pub fn pow(&self, exp: u64) -> Self {
        self.modulus.raw(self.value.pow_mod(exp, self.m()))
    }

    pub fn try_inv(&self) -> Result<Self, ResidueError> {
        self.value
            .inv_mod(self.m())
            .map(|v| self.modulus.raw(v))
            .ok_or_else(|| ResidueError::NonUnit {
                value: self.value.to_string(),
                modulus: self.modulus.describe(),
            })
    }

    /// Image under the projection `Z/p^m -> Z/p^j` for `j <= m`.
    pub fn reduce_to(&self, target: &PrimePowerModulus<W>) -> Result<Self, ResidueError> {
        if target.p() != self.modulus.p() || target.exponent() > self.modulus.exponent() {
            return Err(ResidueError::ModulusMismatch(
                self.modulus.describe(),
                target.describe(),
            ));
        }
        Ok(target.reduce(&self.value))
    }

    /// Largest `j <= m` with `p^j | value`; `m` for zero.
    pub fn valuation(&self) -> u32 {
        let m = self.modulus.exponent();
        if self.value.is_zero() {
            return m;
        }
        let p = self.modulus.p();
        let mut v = self.value.clone();
        let mut j = 0;
        loop {
            let (q, r) = v.div_rem(p);
            if !r.is_zero() {
                return j;
            }
            v = q;
            j += 1;
        }
    }
}

impl<W: Word> PartialEq for Residue<W> {
    fn eq(&self, other: &Self) -> bool {
        self.modulus.same_ring(&other.modulus) && self.value == other.value
    }
}

impl<W: Word> Eq for Residue<W> {}

impl<W: Word> fmt::Display for Residue<W> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(&self.value, f)
    }
}

macro_rules! forward_binop {
    ($tr:ident, $method:ident, $checked:ident) => {
        impl<W: Word> $tr<&Residue<W>> for &Residue<W> {
            type Output = Residue<W>;
            fn $method(self, rhs: &Residue<W>) -> Residue<W> {
                self.$checked(rhs).expect("residue operands from one ring")
            }
        }
        impl<W: Word> $tr<Residue<W>> for Residue<W> {
            type Output = Residue<W>;
            fn $method(self, rhs: Residue<W>) -> Residue<W> {
                (&self).$method(&rhs)
            }
        }
        impl<W: Word> $tr<&Residue<W>> for Residue<W> {
            type Output = Residue<W>;
            fn $method(self, rhs: &Residue<W>) -> Residue<W> {
                (&self).$method(rhs)
            }
        }
        impl<W: Word> $tr<Residue<W>> for &Residue<W> {
            type Output = Residue<W>;
            fn $method(self, rhs: Residue<W>) -> Residue<W> {
                self.$method(&rhs)
            }
        }
    };
}

forward_binop!(Add, add, try_add);
forward_binop!(Sub, sub, try_sub);
forward_binop!(Mul, mul, try_mul);

impl<W: Word> Neg for Residue<W> {
    type Output = Residue<W>;
    fn neg(self) -> Residue<W> {
        Residue::neg(&self)
    }
}

impl<W: Word> Neg for &Residue<W> {
    type Output = Residue<W>;
    fn neg(self) -> Residue<W> {
        Residue::neg(self)
    }
}

/// How far two residues agree `p`-adically.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Valuation {
    /// `p^j` divides the difference and `p^(j+1)` does not.
    Exact(u32),
    /// The residues are equal in the ring, so the difference is divisible
    /// by at least `p^m`.
    AtLeast(u32),
}

impl Valuation {
    /// A lower bound on the true valuation.
    pub fn floor(self) -> u32 {
        match self {
            Valuation::Exact(j) | Valuation::AtLeast(j) => j,
        }
    }

    pub fn meets(self, exponent: u32) -> bool {
        self.floor() >= exponent
    }
}

impl fmt::Display for Valuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Valuation::Exact(j) => write!(f, "{j}"),
            Valuation::AtLeast(j) => write!(f, ">={j}"),
        }
    }
}

impl Serialize for Valuation {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

pub fn valuation_of_difference<W: Word>(
    a: &Residue<W>,
    b: &Residue<W>,
) -> Result<Valuation, ResidueError> {
    let d = a.try_sub(b)?;
    if d.is_zero() {
        Ok(Valuation::AtLeast(a.modulus().exponent()))
    } else {
        Ok(Valuation::Exact(d.valuation()))
    }
}

/// `p^m` for a machine-sized prime, as a `BigUint`.
pub fn prime_power(p: u64, exponent: u32) -> BigUint {
    let mut acc = BigUint::one();
    for _ in 0..exponent {
        acc *= p;
    }
    acc
}
