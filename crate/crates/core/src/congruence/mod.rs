//! Both sides of the binomial congruences, plus the exact identities they
//! rest on.
//!
//! The left-hand side `C(alpha p - 1, p - 1)` is evaluated as the product
//! `prod_{k=1}^{p-1} (alpha p - k) / k` directly in `Z/p^m`; every `k` is a
//! unit there, so no division by `p` ever happens. The exact-rational
//! oracle evaluates the same binomial over `Q` and shares no code with it.

mod catalog;

pub use catalog::{
    verify_case, AlphaUse, CaseError, CaseId, CongruenceCase, ExponentRule, PrimeContext, CATALOG,
};

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::harmonic::HarmonicTable;
use crate::rational::{
    binom_integer, binom_rational, padic_valuation, q_frac, q_int, ExactRational, PIntegerRational,
};
use crate::residue::{PrimePowerModulus, Residue, ResidueError};
use crate::word::Word;

/// `C(alpha p - 1, p - 1) mod p^m`.
pub fn binom_alpha_mod<W: Word>(
    alpha: &PIntegerRational,
    m: &PrimePowerModulus<W>,
) -> Result<Residue<W>, ResidueError> {
    let a = alpha.residue(m)?;
    let p = m.p_u64().expect("prime fits in u64");
    let ap = &a * m.prime();
    let mut num = m.one();
    let mut den = m.one();
    for k in 1..p {
        let k = m.from_u64(k);
        num = num * (&ap - &k);
        den = den * k;
    }
    Ok(num * den.try_inv().expect("(p-1)! is a unit"))
}

/// `C(alpha p - 1, p - 1)` via the harmonic expansion
/// `P(alpha p) = sum_k (-alpha)^k H_k p^k`.
pub fn binom_alpha_by_expansion<W: Word>(
    alpha: &PIntegerRational,
    table: &HarmonicTable<W>,
) -> Result<Residue<W>, ResidueError> {
    let m = table.modulus();
    let step = -(alpha.residue(m)? * m.prime());
    let mut term = m.one();
    let mut acc = m.zero();
    for k in 0..table.len() {
        acc = acc + &term * table.get(k);
        term = term * &step;
    }
    Ok(acc)
}

/// Exact value of `C(alpha p - 1, p - 1)` over the rationals.
pub fn binom_exact_oracle(alpha: &PIntegerRational, p: u64) -> ExactRational {
    if let Some(n) = alpha.to_i64().filter(|&n| n >= 1) {
        let top = n as u64 * p - 1;
        return BigRational::from_integer(BigInt::from(binom_integer(top, p - 1)));
    }
    let x = alpha.as_rational() * q_int(p as i64) - q_int(1);
    binom_rational(&x, p - 1)
}

/// `1 - a(a-1)(a^2-a-1) p H_1 + a^2 (a-1)^2 p^2 H_2`.
pub fn theorem1_rhs_from<W: Word>(
    alpha: &Residue<W>,
    h1: &Residue<W>,
    h2: &Residue<W>,
) -> Residue<W> {
    let m = alpha.modulus();
    let prime = m.prime();
    let one = m.one();
    let a_a1 = alpha * &(alpha - &one);
    let quad = alpha * alpha - alpha - &one;
    one - &a_a1 * &quad * &prime * h1 + &a_a1 * &a_a1 * prime.pow(2) * h2
}

pub fn theorem1_rhs<W: Word>(
    alpha: &PIntegerRational,
    m: &PrimePowerModulus<W>,
) -> Result<Residue<W>, ResidueError> {
    let a = alpha.residue(m)?;
    let table = HarmonicTable::new(m);
    Ok(theorem1_rhs_from(&a, &table.get(1), &table.get(2)))
}

/// Multipliers that combine the truncated expansion with the `alpha = 1`
/// relation and `p^3 H_3 - 2 p^4 H_4 = 0 mod p^7` so that the `H_3` and
/// `H_4` terms cancel.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProofCoefficients {
    pub lambda: ExactRational,
    pub mu: ExactRational,
    /// Coefficients of `H_k p^k`, `k = 0..=4`.
    pub a: [ExactRational; 5],
}

pub fn proof_coefficients(alpha: &ExactRational) -> ProofCoefficients {
    let a2 = alpha * alpha;
    let a3 = &a2 * alpha;
    let a4 = &a3 * alpha;
    let lambda = &a4 - q_int(2) * &a3;
    let mu = &a4 - &a3;
    // A_3 is -a^3 - lambda + mu: the mu term comes from p^3 H_3.
    let a = [
        q_int(1),
        -alpha - &lambda,
        &a2 + &lambda,
        -&a3 - &lambda + &mu,
        &a4 + &lambda - q_int(2) * &mu,
    ];
    ProofCoefficients { lambda, mu, a }
}

/// Exact `H_0..H_{p-1}` over the rationals (oracle side).
pub fn exact_harmonic_numbers(p: u64) -> Vec<ExactRational> {
    let n = p as usize;
    let mut c = vec![ExactRational::zero(); n];
    c[0] = ExactRational::one();
    for k in 1..n {
        let inv = q_frac(1, k as i64);
        for j in (1..=k).rev() {
            let t = &inv * &c[j - 1];
            c[j] -= t;
        }
    }
    c.into_iter()
        .enumerate()
        .map(|(j, v)| if j % 2 == 1 { -v } else { v })
        .collect()
}

/// Exact right-hand side of the main congruence over the rationals.
pub fn theorem1_rhs_exact(alpha: &ExactRational, p: u64) -> ExactRational {
    let h = exact_harmonic_numbers(p);
    let one = q_int(1);
    let pq = q_int(p as i64);
    let a_a1 = alpha * (alpha - &one);
    let quad = alpha * alpha - alpha - &one;
    &one - &a_a1 * &quad * &pq * &h[1] + &a_a1 * &a_a1 * &pq * &pq * &h[2]
}

/// The main congruence's discrepancy at `p = 7`, computed exactly.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct P7Residual {
    pub alpha: PIntegerRational,
    /// `C(7 alpha - 1, 6) - rhs`.
    pub difference: ExactRational,
    /// `alpha^3 (alpha-1)^3 7^6 / 720`.
    pub predicted: ExactRational,
    pub identity_holds: bool,
    /// 7-adic valuation of the difference; `None` when it is zero.
    pub valuation: Option<i64>,
}

impl P7Residual {
    /// The difference vanishes mod `7^6` but not mod `7^7`.
    pub fn is_sharp(&self) -> bool {
        self.valuation == Some(6)
    }
}

pub fn p7_residual(alpha: &PIntegerRational) -> Result<P7Residual, ResidueError> {
    if !alpha.is_p_integer(&BigUint::from(7u32)) {
        return Err(ResidueError::NotPInteger {
            value: alpha.to_string(),
            p: "7".into(),
        });
    }
    let a = alpha.as_rational();
    let difference = binom_exact_oracle(alpha, 7) - theorem1_rhs_exact(a, 7);
    let a_a1 = a * (a - q_int(1));
    let predicted = &a_a1 * &a_a1 * &a_a1 * q_int(117_649) / q_int(720);
    Ok(P7Residual {
        alpha: alpha.clone(),
        identity_holds: difference == predicted,
        valuation: padic_valuation(&difference, 7),
        difference,
        predicted,
    })
}

/// `(-1)^n C(2n, n)` against `4^{2n} C(n - 1/2, 2n)`, both exact.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TransferCheck {
    pub n: u64,
    pub central: ExactRational,
    pub transferred: ExactRational,
}

impl TransferCheck {
    pub fn holds(&self) -> bool {
        self.central == self.transferred
    }
}

pub fn central_binomial_transfer_check(n: u64) -> TransferCheck {
    let sign = if n.is_even() { 1 } else { -1 };
    let central = q_int(sign) * BigRational::from_integer(BigInt::from(binom_integer(2 * n, n)));
    let x = q_int(n as i64) - q_frac(1, 2);
    let four_pow = BigRational::from_integer(BigInt::from(BigUint::from(4u32).pow(2 * n as u32)));
    TransferCheck {
        n,
        central,
        transferred: four_pow * binom_rational(&x, 2 * n),
    }
}

/// `(-1)^{(p-1)/2} C(p-1, (p-1)/2) mod p^m`, by reducing the exact integer.
pub fn central_binomial_mod<W: Word>(m: &PrimePowerModulus<W>) -> Residue<W> {
    let p = m.p_u64().expect("prime fits in u64");
    let n = (p - 1) / 2;
    let r = m.from_biguint(&binom_integer(p - 1, n));
    if n % 2 == 1 {
        -r
    } else {
        r
    }
}

/// The same quantity through `4^{p-1} C(p/2 - 1, p - 1)`.
pub fn central_binomial_by_transfer<W: Word>(m: &PrimePowerModulus<W>) -> Residue<W> {
    let half = PIntegerRational::new(1, 2).expect("nonzero denominator");
    let b = binom_alpha_mod(&half, m).expect("1/2 is a p-integer for odd p");
    let p = m.p_u64().expect("prime fits in u64");
    m.from_u64(4).pow(p - 1) * b
}

/// Compare the direct and transferred central binomial residues.
pub fn morley_transfer_check<W: Word>(m: &PrimePowerModulus<W>) -> (Residue<W>, Residue<W>) {
    (central_binomial_mod(m), central_binomial_by_transfer(m))
}
