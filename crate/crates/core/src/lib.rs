//! Exact verification of generalized Wolstenholme and Morley congruences.
//!
//! For an odd prime `p` and a `p`-integer `alpha`,
//!
//! ```text
//! C(alpha p - 1, p - 1) = 1 - alpha(alpha-1)(alpha^2-alpha-1) p H_1
//!                           + alpha^2 (alpha-1)^2 p^2 H_2   (mod p^7, or p^6 at p = 7)
//! ```
//!
//! where `H_1 = sum 1/k` and `H_2 = sum_{i<j} 1/(ij)` over `1..p-1`. This
//! crate evaluates both sides of that statement, of the classical
//! congruences it specializes to, and of the supporting lemmas, as exact
//! residues modulo prime powers.
//!
//! All ring arithmetic is generic over the representative type
//! ([`Word`]): `BigUint` for any modulus, `u64` when `p^m < 2^63`.

pub mod bernoulli;
pub mod congruence;
pub mod harmonic;
pub mod primes;
pub mod rational;
pub mod residue;
pub mod scanner;
pub mod verdict;
pub mod word;

use num_bigint::BigUint;

pub use bernoulli::{bernoulli_exact, bernoulli_mod, check_lemma4, BernoulliCache};
pub use congruence::{
    binom_alpha_mod, binom_exact_oracle, central_binomial_transfer_check, p7_residual,
    proof_coefficients, theorem1_rhs, verify_case, CaseId, CongruenceCase, CATALOG,
};
pub use harmonic::{
    check_h_congruences, check_power_sum_lemma3, check_reflection_exact, power_sum,
};
pub use rational::{residue_of_rational, ExactRational, PIntegerRational};
pub use residue::{valuation_of_difference, PrimePowerModulus, Residue, ResidueError, Valuation};
pub use verdict::{Status, Verdict};
pub use word::Word;

/// `Z/p^m` with arbitrary-precision representatives.
pub type BigModulus = PrimePowerModulus<BigUint>;
pub type BigResidue = Residue<BigUint>;
pub type BigHarmonicTable = harmonic::HarmonicTable<BigUint>;

/// `Z/p^m` with `u64` representatives; requires `p^m < 2^63`.
pub type WordModulus = PrimePowerModulus<u64>;
pub type WordResidue = Residue<u64>;
pub type WordHarmonicTable = harmonic::HarmonicTable<u64>;
