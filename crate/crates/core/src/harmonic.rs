//! Generalized harmonic numbers and inverse power sums modulo `p^m`.
//!
//! `H_k` is the `k`-th elementary symmetric function of `1/1, ..., 1/(p-1)`,
//! with `H_0 = 1` and `H_k = 0` for `k >= p`. They are the coefficients of
//!
//! ```text
//! P(x) = (x-1)(x-2)...(x-p+1) / (p-1)! = prod_{k=1}^{p-1} (1 - x/k) = sum_k (-1)^k H_k x^k
//! ```
//!
//! and are computed by expanding that product one factor at a time.
//! Power sums `S_e = sum 1/k^e` are computed independently from the
//! inverses, so Newton's identities relating the two are a genuine check.

use std::collections::BTreeMap;

use num_bigint::BigUint;

use crate::rational::{q_frac, residue_of_rational};
use crate::residue::{PrimePowerModulus, Residue};
use crate::verdict::Verdict;
use crate::word::Word;

/// `inv[k] = k^{-1} mod p^m` for `1 <= k < p`; `inv[0] = 0`.
///
/// Uses `inv[k] = -(M div k) * inv[M mod k]`, valid since every
/// `M mod k` with `k < p` is a nonzero unit.
pub fn inverse_table<W: Word>(m: &PrimePowerModulus<W>) -> Vec<W> {
    let p = m.p_u64().expect("prime fits in u64 for table construction") as usize;
    let modulus = m.modulus();
    let mut inv = vec![W::zero(); p];
    if p > 1 {
        inv[1] = W::one() % modulus.clone();
    }
    for k in 2..p {
        let kw = W::from_small(k as u64);
        let (q, r) = modulus.div_rem(&kw);
        let r = r.to_usize().expect("remainder below p");
        let t = (q % modulus.clone()).mul_mod(&inv[r], modulus);
        inv[k] = t.neg_mod(modulus);
    }
    inv
}

/// `H_0, ..., H_{p-1}` modulo `p^m`.
#[derive(Debug, Clone)]
pub struct HarmonicTable<W: Word = BigUint> {
    modulus: PrimePowerModulus<W>,
    h: Vec<W>,
}

impl<W: Word> HarmonicTable<W> {
    pub fn new(m: &PrimePowerModulus<W>) -> Self {
        Self::with_inverses(m, &inverse_table(m))
    }

    pub fn with_inverses(m: &PrimePowerModulus<W>, inv: &[W]) -> Self {
        let modulus = m.modulus();
        let p = inv.len();
        // Coefficients of prod_{i<=k} (1 - x/i), updated in place.
        let mut c = vec![W::zero(); p];
        c[0] = W::one() % modulus.clone();
        for k in 1..p {
            let ik = &inv[k];
            for j in (1..=k).rev() {
                let t = ik.mul_mod(&c[j - 1], modulus);
                c[j] = c[j].sub_mod(&t, modulus);
            }
        }
        for (j, cj) in c.iter_mut().enumerate() {
            if j % 2 == 1 {
                *cj = cj.neg_mod(modulus);
            }
        }
        Self {
            modulus: m.clone(),
            h: c,
        }
    }

    pub fn modulus(&self) -> &PrimePowerModulus<W> {
        &self.modulus
    }

    /// `H_k`; zero for `k >= p`.
    pub fn get(&self, k: usize) -> Residue<W> {
        match self.h.get(k) {
            Some(v) => self.modulus.raw(v.clone()),
            None => self.modulus.zero(),
        }
    }

    pub fn len(&self) -> usize {
        self.h.len()
    }

    pub fn is_empty(&self) -> bool {
        self.h.is_empty()
    }
}

/// `S_e = sum_{k=1}^{p-1} k^{-e}` for `1 <= e <= max_exp`.
#[derive(Debug, Clone)]
pub struct PowerSumTable<W: Word = BigUint> {
    modulus: PrimePowerModulus<W>,
    s: BTreeMap<u32, W>,
}

impl<W: Word> PowerSumTable<W> {
    pub fn new(m: &PrimePowerModulus<W>, max_exp: u32) -> Self {
        Self::with_inverses(m, &inverse_table(m), max_exp)
    }

    pub fn with_inverses(m: &PrimePowerModulus<W>, inv: &[W], max_exp: u32) -> Self {
        let modulus = m.modulus();
        let mut acc = vec![W::zero(); max_exp as usize + 1];
        for x in inv.iter().skip(1) {
            let mut pw = x.clone();
            for e in 1..=max_exp as usize {
                acc[e] = acc[e].add_mod(&pw, modulus);
                if e < max_exp as usize {
                    pw = pw.mul_mod(x, modulus);
                }
            }
        }
        let s = acc.into_iter().enumerate().skip(1).map(|(e, v)| (e as u32, v)).collect();
        Self {
            modulus: m.clone(),
            s,
        }
    }

    /// `S_e`, or `None` beyond the table's range.
    pub fn get(&self, e: u32) -> Option<Residue<W>> {
        self.s.get(&e).map(|v| self.modulus.raw(v.clone()))
    }

    pub fn max_exponent(&self) -> u32 {
        self.s.keys().next_back().copied().unwrap_or(0)
    }
}

/// `sum_{k=1}^{p-1} inv(k)^exp`, straight from the definition.
pub fn power_sum<W: Word>(m: &PrimePowerModulus<W>, exp: u32) -> Residue<W> {
    let p = m.p_u64().expect("prime fits in u64");
    let mut acc = m.zero();
    for k in 1..p {
        let inv = m.from_u64(k).try_inv().expect("k < p is a unit");
        acc = acc + inv.pow(exp as u64);
    }
    acc
}

fn ring(p: u64, exponent: u32) -> PrimePowerModulus {
    PrimePowerModulus::new(p, exponent).expect("odd prime")
}

fn rational(m: &PrimePowerModulus, n: i64, d: i64) -> Option<Residue> {
    residue_of_rational(&q_frac(n, d), m).ok()
}

/// The reflection identity
/// `H_{2j-1} - j p H_{2j} = (1/2) p^2 sum_{k=2j+1}^{p-1} (-1)^k C(k, 2j-1) p^{k-2j-1} H_k`
/// for every `j >= 1`, compared in `Z/p^(p+2)`, together with the
/// coefficient-by-coefficient symmetry `P(x) = P(p - x)` it comes from.
pub fn check_reflection_exact(p: u64) -> Vec<Verdict> {
    check_reflection_exact_at(p, p as u32 + 2)
}

pub fn check_reflection_exact_at(p: u64, working_exponent: u32) -> Vec<Verdict> {
    let m = ring(p, working_exponent);
    let inv = inverse_table(&m);
    let table = HarmonicTable::with_inverses(&m, &inv);
    let pu = p as usize;
    let prime = m.prime();
    let mut p_pow = vec![m.one()];
    for i in 1..=pu {
        let next = &p_pow[i - 1] * &prime;
        p_pow.push(next);
    }
    let half = m.from_u64(2).try_inv().expect("2 is a unit");
    let unit = |w: &BigUint| m.raw(w.clone());
    let mut out = Vec::new();

    for j in 1..=(pu + 3) / 2 {
        let lo = 2 * j - 1;
        let lhs = table.get(lo) - m.from_u64(j as u64) * &prime * table.get(2 * j);
        let mut sum = m.zero();
        // C(k, lo) for k = lo, lo+1, ...
        let mut binom = m.one();
        for k in lo..pu {
            if k > lo {
                binom = binom * m.from_u64(k as u64) * unit(&inv[k - lo]);
            }
            if k > 2 * j {
                let term = &binom * &p_pow[k - 2 * j - 1] * table.get(k);
                sum = if k % 2 == 0 { sum + term } else { sum - term };
            }
        }
        let rhs = &half * &p_pow[2] * sum;
        out.push(Verdict::compare(
            format!("rel17[m={j}]"),
            p,
            None,
            working_exponent,
            &lhs,
            &rhs,
        ));
    }

    // Coefficient of x^i in sum_k (-1)^k H_k (p - x)^k against (-1)^i H_i.
    for i in 0..pu {
        let mut coeff = m.zero();
        let mut binom = m.one();
        for k in i..pu {
            if k > i {
                binom = binom * m.from_u64(k as u64) * unit(&inv[k - i]);
            }
            let term = &binom * &p_pow[k - i] * table.get(k);
            coeff = if (k + i) % 2 == 0 { coeff + term } else { coeff - term };
        }
        let direct = if i % 2 == 0 { table.get(i) } else { -table.get(i) };
        out.push(Verdict::compare(
            format!("rel14[x^{i}]"),
            p,
            None,
            working_exponent,
            &coeff,
            &direct,
        ));
    }
    out
}

/// Divisibility properties of the individual `H_k`.
pub fn check_h_congruences(p: u64) -> Vec<Verdict> {
    let m = ring(p, 4);
    let table = HarmonicTable::new(&m);
    let prime = m.prime();
    let pu = p as usize;
    let zero = m.zero();
    let mut out = Vec::new();

    for k in 1..=pu.saturating_sub(2) {
        out.push(Verdict::compare(format!("rel18[m={k}]"), p, None, 1, &table.get(k), &zero));
    }
    for k in (1..pu).step_by(2) {
        if k != pu - 2 {
            out.push(Verdict::compare(format!("rel19[m={k}]"), p, None, 2, &table.get(k), &zero));
        }
    }
    for j in 1..=(pu - 1) / 2 {
        let lhs = table.get(2 * j - 1) - m.from_u64(j as u64) * &prime * table.get(2 * j);
        out.push(Verdict::compare(format!("remarque_p3[m={j}]"), p, None, 3, &lhs, &zero));
        if 2 * j + 1 != pu - 2 {
            out.push(Verdict::compare(format!("rel20[m={j}]"), p, None, 4, &lhs, &zero));
        }
    }
    if pu >= 5 {
        let j = (pu - 3) / 2;
        let lhs = table.get(pu - 4) - m.from_u64(j as u64) * &prime * table.get(pu - 3);
        let rhs = -(prime.pow(3) * rational(&m, 1, 4).expect("4 is a unit"));
        out.push(Verdict::compare("remarque", p, None, 4, &lhs, &rhs));
    } else {
        out.push(Verdict::skip("remarque", p, None, 4, "DomainTooSmall: p-4 < 1"));
    }
    let half_p = &prime * rational(&m, 1, 2).expect("2 is a unit");
    out.push(Verdict::compare("h_p_minus_2", p, None, 2, &table.get(pu - 2), &half_p));
    out.push(Verdict::compare("h_p_minus_1", p, None, 1, &table.get(pu - 1), &-m.one()));
    out
}

/// The four parts of the inverse-power-sum lemma, for odd and even
/// exponents `1 <= e <= 2(p-1)+1`.
pub fn check_power_sum_lemma3(p: u64) -> Vec<Verdict> {
    let max_e = 2 * (p as u32 - 1) + 1;
    let m = ring(p, 6);
    let sums = PowerSumTable::new(&m, max_e + 2);
    let s = |e: u32| sums.get(e).expect("exponent within table");
    let prime = m.prime();
    let zero = m.zero();
    let divides = |e: u32| e % (p as u32 - 1) == 0;
    let mut out = Vec::new();

    for e in 1..=max_e {
        let expected = if divides(e) { -m.one() } else { m.zero() };
        out.push(Verdict::compare(format!("lem3.1[m={e}]"), p, None, 1, &s(e), &expected));
        if e % 2 == 0 {
            continue;
        }
        let ei = e as i64;

        let expected = if divides(e + 1) {
            rational(&m, ei, 2).expect("2 is a unit") * &prime
        } else {
            m.zero()
        };
        out.push(Verdict::compare(format!("lem3.2[m={e}]"), p, None, 2, &s(e), &expected));

        let combo = m.from_u64(2) * s(e) + m.from_u64(e as u64) * &prime * s(e + 1);
        out.push(Verdict::compare(format!("lem3.3[m={e}]"), p, None, 3, &combo, &zero));
        let label = format!("lem3.3[m={e}]/p4");
        if divides(e + 3) {
            match rational(&m, ei * (ei + 1) * (ei + 2), 12) {
                Some(c) => {
                    let expected = -(c * prime.pow(3));
                    out.push(Verdict::compare(label, p, None, 4, &combo, &expected));
                }
                None => out.push(Verdict::skip(label, p, None, 4, "coefficient is not a p-integer")),
            }
        } else {
            out.push(Verdict::compare(label, p, None, 4, &combo, &zero));
        }

        let label = format!("lem3.4[m={e}]");
        if divides(e + 5) {
            out.push(Verdict::skip(label, p, None, 6, "p-1 divides m+5"));
            continue;
        }
        match (rational(&m, ei, 2), rational(&m, ei * (ei + 1), 12)) {
            (Some(a), Some(b)) => {
                let lhs = s(e) + a * &prime * s(e + 1) + b * prime.pow(2) * s(e + 2);
                out.push(Verdict::compare(label, p, None, 6, &lhs, &zero));
            }
            _ => out.push(Verdict::skip(label, p, None, 6, "coefficient is not a p-integer")),
        }
    }
    out
}
