use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::natext::sample_invariant_x;
use crate::error::{NcfError, Result};
use crate::Digit;

/// Natural logarithm of a positive big integer.
pub fn ln_big(v: &BigInt) -> f64 {
    if v.is_zero() {
        return f64::NEG_INFINITY;
    }
    let bits = v.bits();
    if bits <= 1000 {
        return v.to_f64().unwrap_or(f64::NAN).ln();
    }
    let shift = bits - 64;
    let top = (v >> shift).to_f64().unwrap_or(f64::NAN);
    top.ln() + shift as f64 * std::f64::consts::LN_2
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GrowthReport {
    #[serde(rename = "N")]
    pub n: u64,
    /// `(1/k) log q_k` for `k = 1..=n`.
    pub log_q: Vec<f64>,
    /// `(1/k) log(p_{k-1} + q_{k-1})`, the length of the `k`-th generating word.
    pub word_length: Vec<f64>,
    /// `-(1/k) log` of the Lebesgue measure of the rank-`k` cylinder.
    pub cylinder: Vec<f64>,
}

impl GrowthReport {
    pub fn last(&self) -> Option<f64> {
        self.log_q.last().copied()
    }
}

/// Growth of the convergent denominators along a digit list, from the exact
/// recurrence.
pub fn growth_rate(digits: &[Digit], n: u64, count: usize) -> Result<GrowthReport> {
    if n == 0 {
        return Err(NcfError::Argument("N must be >= 1".into()));
    }
    if digits.len() < count {
        return Err(NcfError::InsufficientDigits(format!("need {count} digits, have {}", digits.len())));
    }
    let big_n = BigInt::from(n);
    let ln_n = (n as f64).ln();
    let (mut p_prev, mut p) = (BigInt::from(1), BigInt::zero());
    let (mut q_prev, mut q) = (BigInt::zero(), BigInt::from(1));
    let mut rep = GrowthReport {
        n,
        log_q: Vec::with_capacity(count),
        word_length: Vec::with_capacity(count),
        cylinder: Vec::with_capacity(count),
    };
    for (i, &d) in digits[..count].iter().enumerate() {
        let k = (i + 1) as f64;
        rep.word_length.push(ln_big(&(&p + &q)) / k);
        let d = BigInt::from(d);
        let p_next = &d * &p + &big_n * &p_prev;
        let q_next = &d * &q + &big_n * &q_prev;
        p_prev = std::mem::replace(&mut p, p_next);
        q_prev = std::mem::replace(&mut q, q_next);
        let lq = ln_big(&q);
        rep.log_q.push(lq / k);
        rep.cylinder.push((lq + ln_big(&(&q + &q_prev)) - k * ln_n) / k);
    }
    Ok(rep)
}

/// `(1/n) log q_n` for one orbit of `T_N` started at a Lebesgue-random point.
fn simulated_rate(n: u64, count: usize, seed: u64) -> f64 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let nf = n as f64;
    let big_n = BigInt::from(n);
    let mut x: f64 = rng.random();
    let (mut q_prev, mut q) = (BigInt::zero(), BigInt::from(1));
    for _ in 0..count {
        // restart from an invariant-distributed point if round-off lands on 0
        while x < 1e-15 {
            x = sample_invariant_x(n, rng.random());
        }
        let v = nf / x;
        let d = v.floor();
        x = v - d;
        let q_next = BigInt::from(d as u64) * &q + &big_n * &q_prev;
        q_prev = std::mem::replace(&mut q, q_next);
    }
    ln_big(&q) / count as f64
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LevyEstimate {
    #[serde(rename = "N")]
    pub n: u64,
    pub length: usize,
    pub seeds: Vec<u64>,
    pub rates: Vec<f64>,
    pub mean: f64,
    pub std_dev: f64,
}

/// Averages `(1/n) log q_n` over independent orbits, one per seed
/// `base_seed, base_seed + 1, ...`.
pub fn levy_simulation(n: u64, length: usize, runs: usize, base_seed: u64) -> Result<LevyEstimate> {
    if n == 0 {
        return Err(NcfError::Argument("N must be >= 1".into()));
    }
    if length == 0 || runs == 0 {
        return Err(NcfError::Argument("length and run count must be positive".into()));
    }
    let seeds: Vec<u64> = (0..runs as u64).map(|i| base_seed.wrapping_add(i)).collect();
    let rates: Vec<f64> = seeds.par_iter().map(|&s| simulated_rate(n, length, s)).collect();
    let mean = rates.iter().sum::<f64>() / runs as f64;
    let var = rates.iter().map(|r| (r - mean).powi(2)).sum::<f64>() / runs as f64;
    Ok(LevyEstimate { n, length, seeds, rates, mean, std_dev: var.sqrt() })
}

/// Limit of `(1/n) log q_n` when every digit equals `N`:
/// `log((N + √(N² + 4N))/2)`.
pub fn constant_digit_limit(n: u64) -> f64 {
    let nf = n as f64;
    ((nf + (nf * nf + 4.0 * nf).sqrt()) / 2.0).ln()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ln_big_large() {
        let v = BigInt::from(3).pow(2000);
        assert!((ln_big(&v) - 2000.0 * 3f64.ln()).abs() < 1e-9);
        assert_eq!(ln_big(&BigInt::from(1)), 0.0);
    }

    #[test]
    fn first_term_is_log_d1() {
        let r = growth_rate(&[7, 3], 2, 2).unwrap();
        assert!((r.log_q[0] - 7f64.ln()).abs() < 1e-15);
        assert_eq!(r.word_length[0], 0.0);
        assert!(growth_rate(&[7], 2, 2).is_err());
    }

    #[test]
    fn constant_digits_converge() {
        for n in [1u64, 2, 3] {
            let r = growth_rate(&vec![n; 1000], n, 1000).unwrap();
            assert!((r.last().unwrap() - constant_digit_limit(n)).abs() < 1e-3);
        }
        // golden ratio for N = 1
        assert!((constant_digit_limit(1) - ((1.0 + 5f64.sqrt()) / 2.0).ln()).abs() < 1e-15);
    }

    #[test]
    fn simulation_is_reproducible() {
        let a = levy_simulation(1, 500, 4, 9).unwrap();
        let b = levy_simulation(1, 500, 4, 9).unwrap();
        assert_eq!(a, b);
    }
}
