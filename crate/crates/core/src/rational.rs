//! Exact rationals: the `p`-integer parameters and the oracle-side arithmetic.

use std::fmt;
use std::str::FromStr;

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::residue::{PrimePowerModulus, Residue, ResidueError};
use crate::word::Word;

/// Oracle-side exact rational. Always normalized (`gcd(num, den) = 1`,
/// `den >= 1`).
pub type ExactRational = BigRational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RationalError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("cannot parse {0:?} as a rational (expected `a` or `a/b`)")]
    Parse(String),
}

/// A rational parameter such as `alpha`. Whether it is a `p`-integer is
/// only decided when it is reduced modulo a particular `p^m`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PIntegerRational(BigRational);

impl PIntegerRational {
    pub fn new(num: impl Into<BigInt>, den: impl Into<BigInt>) -> Result<Self, RationalError> {
        let den = den.into();
        if den.is_zero() {
            return Err(RationalError::DivisionByZero);
        }
        Ok(Self(BigRational::new(num.into(), den)))
    }

    pub fn integer(n: i64) -> Self {
        Self(BigRational::from_integer(BigInt::from(n)))
    }

    pub fn as_rational(&self) -> &BigRational {
        &self.0
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn is_integer(&self) -> bool {
        self.0.is_integer()
    }

    /// The value as an `i64`, when it is an integer of that size.
    pub fn to_i64(&self) -> Option<i64> {
        if self.is_integer() {
            self.0.numer().to_i64()
        } else {
            None
        }
    }

    /// Whether `p` does not divide the denominator.
    pub fn is_p_integer(&self, p: &BigUint) -> bool {
        !(self.0.denom().magnitude() % p).is_zero()
    }

    /// `alpha * (alpha - 1) == 0`: every alpha-family congruence collapses
    /// to `1 = 1` here.
    pub fn is_degenerate(&self) -> bool {
        self.0.is_zero() || self.0.is_one()
    }

    pub fn residue<W: Word>(&self, m: &PrimePowerModulus<W>) -> Result<Residue<W>, ResidueError> {
        residue_of_rational(&self.0, m)
    }
}

impl From<BigRational> for PIntegerRational {
    fn from(q: BigRational) -> Self {
        Self(q)
    }
}

impl From<i64> for PIntegerRational {
    fn from(n: i64) -> Self {
        Self::integer(n)
    }
}

impl fmt::Display for PIntegerRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_integer() {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

impl FromStr for PIntegerRational {
    type Err = RationalError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || RationalError::Parse(s.to_string());
        let t = s.trim();
        let (num, den) = match t.split_once('/') {
            Some((a, b)) => (a.trim(), b.trim()),
            None => (t, "1"),
        };
        let num: BigInt = num.parse().map_err(|_| bad())?;
        let den: BigInt = den.parse().map_err(|_| bad())?;
        Self::new(num, den)
    }
}

impl Serialize for PIntegerRational {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// Reduce `q = a/b` into `Z/p^m` as `a * b^{-1}`.
pub fn residue_of_rational<W: Word>(
    q: &BigRational,
    m: &PrimePowerModulus<W>,
) -> Result<Residue<W>, ResidueError> {
    let den = m.from_biguint(q.denom().magnitude());
    let inv = den.try_inv().map_err(|_| ResidueError::NotPInteger {
        value: q.to_string(),
        p: m.p_big().to_string(),
    })?;
    Ok(signed_residue(q.numer(), m) * inv)
}

pub fn signed_residue<W: Word>(n: &BigInt, m: &PrimePowerModulus<W>) -> Residue<W> {
    let r = m.from_biguint(n.magnitude());
    if n.sign() == Sign::Minus {
        -r
    } else {
        r
    }
}

pub fn q_add(a: &ExactRational, b: &ExactRational) -> ExactRational {
    a + b
}

pub fn q_mul(a: &ExactRational, b: &ExactRational) -> ExactRational {
    a * b
}

pub fn q_neg(a: &ExactRational) -> ExactRational {
    -a
}

pub fn q_div(a: &ExactRational, b: &ExactRational) -> Result<ExactRational, RationalError> {
    if b.is_zero() {
        Err(RationalError::DivisionByZero)
    } else {
        Ok(a / b)
    }
}

pub fn q_int(n: i64) -> ExactRational {
    BigRational::from_integer(BigInt::from(n))
}

pub fn q_frac(n: i64, d: i64) -> ExactRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// `sum_{k=1}^{n} 1/k^e`, exactly.
pub fn inverse_power_sum(n: u64, e: u32) -> ExactRational {
    // Sum over a common denominator, normalized once at the end.
    let mut den = BigInt::one();
    let mut num = BigInt::zero();
    for k in 1..=n {
        let kp = num_traits::pow(BigInt::from(k), e as usize);
        let l = den.lcm(&kp);
        num = num * (&l / &den) + (&l / &kp);
        den = l;
    }
    BigRational::new(num, den)
}

/// Generalized binomial `C(x, k) = x (x-1) ... (x-k+1) / k!` for rational `x`.
pub fn binom_rational(x: &ExactRational, k: u64) -> ExactRational {
    let mut num = BigInt::one();
    let mut den = BigInt::one();
    let xn = x.numer();
    let xd = x.denom();
    for i in 0..k {
        // x - i = (xn - i*xd) / xd
        num *= xn - BigInt::from(i) * xd;
        den *= xd * BigInt::from(i + 1);
    }
    BigRational::new(num, den)
}

/// Integer binomial `C(n, k)`.
pub fn binom_integer(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for i in 0..k {
        acc *= n - i;
        acc /= i + 1;
    }
    acc
}

/// `p`-adic valuation of a nonzero rational; `None` for zero.
pub fn padic_valuation(q: &ExactRational, p: u64) -> Option<i64> {
    if q.is_zero() {
        return None;
    }
    let count = |n: &BigInt| {
        let mut n = n.abs();
        let p = BigInt::from(p);
        let mut c = 0i64;
        loop {
            let (quot, rem) = n.div_rem(&p);
            if !rem.is_zero() {
                return c;
            }
            n = quot;
            c += 1;
        }
    };
    Some(count(q.numer()) - count(q.denom()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ring(p: u64, m: u32) -> PrimePowerModulus {
        PrimePowerModulus::new(p, m).unwrap()
    }

    #[test]
    fn reduction_examples() {
        let one = PIntegerRational::integer(1);
        assert_eq!(one.residue(&ring(5, 3)).unwrap().to_biguint(), BigUint::from(1u32));
        let half: PIntegerRational = "1/2".parse().unwrap();
        assert_eq!(half.residue(&ring(7, 1)).unwrap().to_biguint(), BigUint::from(4u32));
        let h1: PIntegerRational = "25/12".parse().unwrap();
        assert!(h1.residue(&ring(5, 2)).unwrap().is_zero());
    }

    #[test]
    fn non_p_integer_is_rejected() {
        let seventh: PIntegerRational = "1/7".parse().unwrap();
        assert!(matches!(
            seventh.residue(&ring(7, 3)),
            Err(ResidueError::NotPInteger { .. })
        ));
        assert!(!seventh.is_p_integer(&BigUint::from(7u32)));
        assert!(seventh.is_p_integer(&BigUint::from(5u32)));
    }

    #[test]
    fn parsing() {
        let q: PIntegerRational = " -6/4 ".parse().unwrap();
        assert_eq!(q.to_string(), "-3/2");
        assert_eq!("3".parse::<PIntegerRational>().unwrap().to_i64(), Some(3));
        assert_eq!("4/-2".parse::<PIntegerRational>().unwrap().to_string(), "-2");
        assert!(matches!("1/0".parse::<PIntegerRational>(), Err(RationalError::DivisionByZero)));
        assert!(matches!("x".parse::<PIntegerRational>(), Err(RationalError::Parse(_))));
        assert!(matches!("1/2/3".parse::<PIntegerRational>(), Err(RationalError::Parse(_))));
    }

    #[test]
    fn exact_ops() {
        assert_eq!(q_add(&q_frac(1, 2), &q_frac(1, 3)), q_frac(5, 6));
        assert_eq!(q_mul(&q_frac(2, 3), &q_frac(3, 4)), q_frac(1, 2));
        assert_eq!(q_neg(&q_frac(2, 3)), q_frac(-2, 3));
        assert_eq!(q_div(&q_frac(1, 2), &q_frac(1, 4)).unwrap(), q_int(2));
        assert_eq!(q_div(&q_int(1), &q_int(0)), Err(RationalError::DivisionByZero));
    }

    #[test]
    fn harmonic_sums() {
        assert_eq!(inverse_power_sum(4, 1), q_frac(25, 12));
        assert_eq!(inverse_power_sum(6, 1), q_frac(49, 20));
        assert_eq!(inverse_power_sum(4, 2), q_frac(205, 144));
    }

    #[test]
    fn binomials() {
        assert_eq!(binom_integer(9, 4), BigUint::from(126u32));
        assert_eq!(binom_integer(3, 5), BigUint::zero());
        assert_eq!(binom_rational(&q_frac(3, 2), 4), q_frac(3, 128));
        assert_eq!(binom_rational(&q_frac(1, 2), 2), q_frac(-1, 8));
        assert_eq!(binom_rational(&q_int(9), 4), q_int(126));
        assert_eq!(binom_rational(&q_int(-1), 3), q_int(-1));
    }

    #[test]
    fn valuations() {
        assert_eq!(padic_valuation(&q_frac(343, 180), 7), Some(3));
        assert_eq!(padic_valuation(&q_frac(1, 49), 7), Some(-2));
        assert_eq!(padic_valuation(&q_int(0), 7), None);
    }
}
