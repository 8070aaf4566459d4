//! Exact Bernoulli numbers (`z/(e^z - 1) = sum B_n z^n / n!`, so `B_1 = -1/2`)
//! and their residues modulo prime powers.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::rational::{q_frac, residue_of_rational, ExactRational};
use crate::residue::{PrimePowerModulus, Residue, ResidueError};
use crate::verdict::Verdict;
use crate::word::Word;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BernoulliError {
    #[error("B_{n} has a denominator divisible by {p}")]
    NonPIntegerBernoulli { n: usize, p: String },
    #[error(transparent)]
    Residue(#[from] ResidueError),
}

/// `B_0..B_N`, grown on demand. Once built it is only read, so a cache
/// sized for the largest prime of a sweep can be shared across workers.
#[derive(Debug, Clone)]
pub struct BernoulliCache {
    values: Vec<BigRational>,
}

impl Default for BernoulliCache {
    fn default() -> Self {
        Self::new()
    }
}

impl BernoulliCache {
    pub fn new() -> Self {
        Self {
            values: vec![BigRational::one(), q_frac(-1, 2)],
        }
    }

    pub fn up_to(n: usize) -> Self {
        let mut c = Self::new();
        c.extend_to(n);
        c
    }

    /// Largest index currently held.
    pub fn max_index(&self) -> usize {
        self.values.len() - 1
    }

    pub fn get(&self, n: usize) -> Option<&BigRational> {
        self.values.get(n)
    }

    /// Extend with `sum_{k=0}^{n} C(n+1, k) B_k = 0`.
    ///
    /// The sum runs over a common denominator (the lcm of the denominators
    /// seen so far), so each new value costs one normalization.
    pub fn extend_to(&mut self, n: usize) {
        while self.values.len() <= n {
            let target = self.values.len();
            if target % 2 == 1 {
                self.values.push(BigRational::zero());
                continue;
            }
            let mut lcm = BigInt::one();
            for k in (0..target).filter(|&k| k == 1 || k % 2 == 0) {
                lcm = lcm.lcm(self.values[k].denom());
            }
            let mut binom = BigInt::one(); // C(target+1, k)
            let mut sum = BigInt::zero();
            for k in 0..target {
                if k > 0 {
                    binom = binom * BigInt::from(target + 2 - k) / BigInt::from(k);
                }
                let b = &self.values[k];
                if b.is_zero() {
                    continue;
                }
                sum += &binom * b.numer() * (&lcm / b.denom());
            }
            // C(target+1, target) = target + 1
            let value = BigRational::new(-sum, lcm * BigInt::from(target + 1));
            self.values.push(value);
        }
    }

    pub fn residue<W: Word>(
        &self,
        n: usize,
        m: &PrimePowerModulus<W>,
    ) -> Result<Residue<W>, BernoulliError> {
        let b = self.get(n).expect("Bernoulli cache extended before use");
        residue_of_rational(b, m).map_err(|e| match e {
            ResidueError::NotPInteger { p, .. } => BernoulliError::NonPIntegerBernoulli { n, p },
            other => BernoulliError::Residue(other),
        })
    }
}

pub fn bernoulli_exact(n: usize) -> ExactRational {
    BernoulliCache::up_to(n).values.swap_remove(n)
}

/// `B_n mod p^j`.
pub fn bernoulli_mod(p: u64, n: usize, j: u32) -> Result<Residue<BigUint>, BernoulliError> {
    let m = PrimePowerModulus::new(p, j)?;
    BernoulliCache::up_to(n).residue(n, &m)
}

/// `S_1 = -(1/3) p^2 B_{p-3} mod p^3` and `S_2 = (2/3) p B_{p-3} mod p^2`.
pub fn check_lemma4(p: u64, cache: &BernoulliCache) -> Vec<Verdict> {
    if p < 5 {
        return vec![
            Verdict::skip("rel90", p, None, 3, "requires p >= 5"),
            Verdict::skip("rel91", p, None, 2, "requires p >= 5"),
        ];
    }
    let m = PrimePowerModulus::<BigUint>::new(p, 3).expect("odd prime");
    let b = cache.residue(p as usize - 3, &m).expect("p-1 does not divide p-3");
    let third = residue_of_rational(&q_frac(1, 3), &m).expect("3 is a unit");
    let prime = m.prime();
    let sums = crate::harmonic::PowerSumTable::new(&m, 2);
    let s1 = sums.get(1).expect("in table");
    let s2 = sums.get(2).expect("in table");
    let rhs1 = -(&third * prime.pow(2) * &b);
    let rhs2 = m.from_u64(2) * &third * &prime * &b;
    vec![
        Verdict::compare("rel90", p, None, 3, &s1, &rhs1),
        Verdict::compare("rel91", p, None, 2, &s2, &rhs2),
    ]
}
