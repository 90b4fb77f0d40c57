use num_bigint::BigInt;
use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use crate::error::{NcfError, Result};
use crate::expansion::{evaluate_cf, slow_digits, DigitSequence, SlowSymbol};
use crate::Digit;

/// One `F_N` step on a digit list: lowers `d_1` when `d_1 > N`, otherwise
/// drops it.
pub fn farey_step_digits(digits: &[Digit], n: u64) -> Result<(SlowSymbol, Vec<Digit>)> {
    let (&d1, rest) = digits
        .split_first()
        .ok_or_else(|| NcfError::Argument("F_N step needs at least one digit".into()))?;
    if d1 < n {
        return Err(NcfError::Domain(format!("digit {d1} is below N = {n}")));
    }
    if d1 > n {
        let mut out = digits.to_vec();
        out[0] -= 1;
        Ok((SlowSymbol::Decrement, out))
    } else {
        Ok((SlowSymbol::Shift, rest.to_vec()))
    }
}

/// `F_N` in exact rationals, branch chosen by the value of `x`.
pub fn farey_map_exact(x: &BigRational, n: u64) -> (SlowSymbol, BigRational) {
    let big_n = BigRational::from_integer(BigInt::from(n));
    let cut = BigRational::new(BigInt::from(n), BigInt::from(n + 1));
    if *x > cut {
        (SlowSymbol::Shift, &big_n / x - &big_n)
    } else {
        (SlowSymbol::Decrement, &big_n * x / (&big_n - x))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FareySemanticsReport {
    #[serde(rename = "N")]
    pub n: u64,
    pub steps: usize,
    pub trace: Vec<SlowSymbol>,
    /// Trace equals the slow expansion of the same digits.
    pub trace_matches_slow: bool,
    /// Exact `F_N` on the rational value agrees with the digit-level step.
    pub exact_map_agrees: bool,
    /// `d_1 - N + 1` steps turn `(d_1, d_2, ...)` into `(d_2, ...)`.
    pub block_shift_holds: bool,
    pub passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub failure: Option<String>,
}

/// Steps the digit list through `F_N` symbolically and cross-checks the trace
/// against [`slow_digits`] and against exact rational evaluation.
pub fn farey_digit_semantics_check(digits: &DigitSequence, n: u64, steps: usize) -> Result<FareySemanticsReport> {
    if n == 0 {
        return Err(NcfError::Argument("N must be >= 1".into()));
    }
    digits.validate_greedy(n)?;
    let mut failure = None;
    let mut trace = Vec::with_capacity(steps);
    let mut exact_map_agrees = true;
    let mut cur = digits.digits.clone();
    for i in 0..steps {
        if cur.is_empty() {
            break;
        }
        let (sym, next) = farey_step_digits(&cur, n)?;
        let x = evaluate_cf(&cur, n)?;
        let (exact_sym, fx) = farey_map_exact(&x, n);
        // x = N/(N+1) sits on the branch cut when the tail is exactly [N]
        let on_cut = cur.len() == 2 && cur == [n, n];
        let value_ok = fx == evaluate_cf(&next, n)? || on_cut;
        if (exact_sym != sym && !on_cut) || !value_ok {
            exact_map_agrees = false;
            failure.get_or_insert_with(|| format!("step {i}: exact F_N disagrees with the digit step on {cur:?}"));
        }
        trace.push(sym);
        cur = next;
    }
    let slow = slow_digits(digits, n, trace.len())?;
    let trace_matches_slow = slow == trace;
    if !trace_matches_slow {
        failure.get_or_insert_with(|| "trace differs from the slow expansion".into());
    }
    let block_shift_holds = match digits.first() {
        Some(&d1) => {
            let mut cur = digits.digits.clone();
            for _ in 0..=(d1 - n) {
                cur = farey_step_digits(&cur, n)?.1;
            }
            cur == digits[1..]
        }
        None => true,
    };
    if !block_shift_holds {
        failure.get_or_insert_with(|| "d_1 - N + 1 steps do not shift the list".into());
    }
    Ok(FareySemanticsReport {
        n,
        steps: trace.len(),
        trace,
        trace_matches_slow,
        exact_map_agrees,
        block_shift_holds,
        passed: failure.is_none(),
        failure,
    })
}

/// The two intervals making up `F_N^{-1}((a, b))`.
pub fn farey_preimage(a: f64, b: f64, n: u64) -> [(f64, f64); 2] {
    let nf = n as f64;
    [(nf * a / (nf + a), nf * b / (nf + b)), (nf / (nf + b), nf / (nf + a))]
}

/// `|log(b/a) - Σ log(hi/lo)|` over the preimage intervals; zero exactly when
/// `dx/x` gives the preimage the same mass as `(a, b)`.
pub fn farey_invariance_check(a: f64, b: f64, n: u64) -> Result<f64> {
    if n == 0 {
        return Err(NcfError::Argument("N must be >= 1".into()));
    }
    if a.is_nan() || a <= 0.0 {
        return Err(NcfError::Argument(format!("a = {a} must be positive; dx/x is infinite near 0")));
    }
    if !(a <= b && b <= 1.0) {
        return Err(NcfError::Argument(format!("need 0 < a <= b <= 1, got ({a}, {b})")));
    }
    if a == b {
        return Ok(0.0);
    }
    let pre: f64 = farey_preimage(a, b, n).iter().map(|(lo, hi)| (hi / lo).ln()).sum();
    Ok(((b / a).ln() - pre).abs())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::maps::farey_step;

    #[test]
    fn single_steps() {
        let (s, d) = farey_step_digits(&[3, 2, 5], 2).unwrap();
        assert_eq!((s, d), (SlowSymbol::Decrement, vec![2, 2, 5]));
        let (s, d) = farey_step_digits(&[2, 7], 2).unwrap();
        assert_eq!((s, d), (SlowSymbol::Shift, vec![7]));
        assert!(farey_step_digits(&[], 2).is_err());
    }

    #[test]
    fn trace_of_4_2() {
        let r = farey_digit_semantics_check(&DigitSequence::new(vec![4, 2]), 2, 4).unwrap();
        use SlowSymbol::*;
        assert_eq!(r.trace, vec![Decrement, Decrement, Shift, Shift]);
        assert!(r.passed, "{r:?}");
    }

    #[test]
    fn non_greedy_rejected() {
        let err = farey_digit_semantics_check(&DigitSequence::new(vec![3, 1]), 2, 3).unwrap_err();
        assert!(matches!(err, NcfError::Domain(_)));
    }

    #[test]
    fn invariance_examples() {
        assert!(farey_invariance_check(0.25, 0.5, 2).unwrap() < 1e-12);
        assert!(farey_invariance_check(0.1, 1.0, 5).unwrap() < 1e-12);
        assert_eq!(farey_invariance_check(0.3, 0.3, 3).unwrap(), 0.0);
        assert!(farey_invariance_check(0.0, 0.5, 2).is_err());
        assert!(farey_invariance_check(0.5, 0.25, 2).is_err());
    }

    #[test]
    fn preimage_maps_onto_interval() {
        for n in [1u64, 2, 5] {
            let (a, b) = (0.2, 0.7);
            for (lo, hi) in farey_preimage(a, b, n) {
                let (_, fl) = farey_step(lo, n as f64);
                let (_, fh) = farey_step(hi, n as f64);
                let (fl, fh) = if fl < fh { (fl, fh) } else { (fh, fl) };
                assert!((fl - a).abs() < 1e-12 && (fh - b).abs() < 1e-12);
            }
        }
    }
}
