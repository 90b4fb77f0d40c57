use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Pow, Zero};
use serde::{Deserialize, Serialize};

use super::digits::{validate_greedy, validate_positive};
use crate::error::{NcfError, Result};
use crate::Digit;

/// `(p_n, q_n)` with `p_n/q_n = [0; d_1, ..., d_n]_N`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConvergentPair {
    #[serde(rename = "n")]
    pub index: usize,
    #[serde(with = "crate::dec")]
    pub p: BigInt,
    #[serde(with = "crate::dec")]
    pub q: BigInt,
}

impl ConvergentPair {
    pub fn value(&self) -> BigRational {
        BigRational::new(self.p.clone(), self.q.clone())
    }
}

fn check_prefix(digits: &[Digit], n: usize) -> Result<()> {
    if digits.is_empty() || n == 0 {
        return Err(NcfError::Argument("need a nonempty digit list and n >= 1".into()));
    }
    if digits.len() < n {
        return Err(NcfError::Argument(format!("need {n} digits, have {}", digits.len())));
    }
    validate_positive(&digits[..n])
}

/// Convergents `k = 1..=n` via `p_k = d_k p_{k-1} + N p_{k-2}` (same for `q`),
/// seeded with `p_{-1} = 1, p_0 = 0, q_{-1} = 0, q_0 = 1`.
pub fn convergents(digits: &[Digit], n_num: u64, n: usize) -> Result<Vec<ConvergentPair>> {
    check_prefix(digits, n)?;
    let big_n = BigInt::from(n_num);
    let (mut p_prev, mut p) = (BigInt::one(), BigInt::zero());
    let (mut q_prev, mut q) = (BigInt::zero(), BigInt::one());
    let mut out = Vec::with_capacity(n);
    for (k, &d) in digits[..n].iter().enumerate() {
        let d = BigInt::from(d);
        let p_next = &d * &p + &big_n * &p_prev;
        let q_next = &d * &q + &big_n * &q_prev;
        p_prev = std::mem::replace(&mut p, p_next);
        q_prev = std::mem::replace(&mut q, q_next);
        out.push(ConvergentPair { index: k + 1, p: p.clone(), q: q.clone() });
    }
    Ok(out)
}

/// Evaluates `N/(d_1 + N/(d_2 + ... + N/d_n))` bottom-up in exact rationals.
/// The empty list evaluates to 0.
pub fn evaluate_cf(digits: &[Digit], n_num: u64) -> Result<BigRational> {
    validate_positive(digits)?;
    let big_n = BigRational::from_integer(BigInt::from(n_num));
    let mut tail = BigRational::zero();
    for &d in digits.iter().rev() {
        tail = &big_n / (BigRational::from_integer(BigInt::from(d)) + tail);
    }
    Ok(tail)
}

/// Closed interval with exact rational endpoints, `lo < hi`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalInterval {
    pub lo: BigRational,
    pub hi: BigRational,
}

impl RationalInterval {
    pub fn width(&self) -> BigRational {
        &self.hi - &self.lo
    }

    pub fn contains(&self, other: &RationalInterval) -> bool {
        self.lo <= other.lo && other.hi <= self.hi
    }
}

/// Rank-`n` cylinder of the digit prefix: the set of `y` whose first `n` greedy
/// digits agree. Endpoints are `p_n/q_n` and `(p_n + p_{n-1})/(q_n + q_{n-1})`.
pub fn cylinder(digits: &[Digit], n_num: u64, n: usize) -> Result<RationalInterval> {
    let cs = convergents(digits, n_num, n)?;
    let last = &cs[n - 1];
    let (p_prev, q_prev) = if n >= 2 {
        (cs[n - 2].p.clone(), cs[n - 2].q.clone())
    } else {
        (BigInt::zero(), BigInt::one())
    };
    let a = last.value();
    let b = BigRational::new(&last.p + p_prev, &last.q + q_prev);
    let (lo, hi) = if a < b { (a, b) } else { (b, a) };
    Ok(RationalInterval { lo, hi })
}

/// Exact cylinder width `N^n / (q_n (q_n + q_{n-1}))`.
pub fn cylinder_width_formula(digits: &[Digit], n_num: u64, n: usize) -> Result<BigRational> {
    let cs = convergents(digits, n_num, n)?;
    let q = &cs[n - 1].q;
    let q_prev = if n >= 2 { cs[n - 2].q.clone() } else { BigInt::one() };
    Ok(BigRational::new(BigInt::from(n_num).pow(n as u32), q * (q + q_prev)))
}

/// `q_n p_{n-1} - p_n q_{n-1}`; equals `(-N)^n`.
pub fn determinant(pairs: &[ConvergentPair], n: usize) -> BigInt {
    let cur = &pairs[n - 1];
    let (p_prev, q_prev) = if n >= 2 {
        (pairs[n - 2].p.clone(), pairs[n - 2].q.clone())
    } else {
        (BigInt::zero(), BigInt::one())
    };
    &cur.q * p_prev - &cur.p * q_prev
}

pub fn signed_power(n_num: u64, n: usize) -> BigInt {
    let v = BigInt::from(n_num).pow(n as u32);
    if n % 2 == 1 {
        -v
    } else {
        v
    }
}

/// Symbol of the slow (Farey-like) expansion.
///
/// `Decrement` is the symbol written `1` (the `F_N` branch `Nx/(N-x)` that
/// lowers the leading digit); `Shift` is the symbol written `N` (the branch
/// `N/x - N` that drops the leading digit). The two are kept distinct even
/// when `N = 1` makes their numeric labels coincide.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SlowSymbol {
    Decrement,
    Shift,
}

impl SlowSymbol {
    pub fn value(self, n_num: u64) -> u64 {
        match self {
            SlowSymbol::Decrement => 1,
            SlowSymbol::Shift => n_num,
        }
    }
}

/// Slow expansion `1^{d_1-N}, N, 1^{d_2-N}, N, ...`, truncated to `count` symbols.
pub fn slow_digits(digits: &[Digit], n_num: u64, count: usize) -> Result<Vec<SlowSymbol>> {
    validate_greedy(digits, n_num)?;
    let mut out = Vec::with_capacity(count);
    for &d in digits {
        for _ in 0..d - n_num {
            if out.len() == count {
                return Ok(out);
            }
            out.push(SlowSymbol::Decrement);
        }
        if out.len() == count {
            return Ok(out);
        }
        out.push(SlowSymbol::Shift);
    }
    Ok(out)
}

pub fn slow_values(symbols: &[SlowSymbol], n_num: u64) -> Vec<u64> {
    symbols.iter().map(|s| s.value(n_num)).collect()
}
