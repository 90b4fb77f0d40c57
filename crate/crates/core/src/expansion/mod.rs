//! Exact greedy NCF expansion: `T_N` digits, convergents, cylinders and the
//! slow (Farey-like) digit stream.

mod convergents;
mod digits;
mod real;

use std::collections::HashMap;

pub use convergents::{
    convergents, cylinder, cylinder_width_formula, determinant, evaluate_cf, signed_power,
    slow_digits, slow_values, ConvergentPair, RationalInterval, SlowSymbol,
};
pub use digits::{greedy_digits, DigitSequence, DigitSource};
pub use real::{tn_step, ExactReal, QuadSurd};

use crate::error::{NcfError, Result};
use crate::Digit;

/// Eventually periodic structure of a `T_N` orbit, found by exact state repetition.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrbitPeriod {
    pub preperiod: Vec<Digit>,
    pub period: Vec<Digit>,
}

/// Iterates `T_N` from `x` until an exact state repeats (canonical-form equality).
///
/// Returns `Ok(None)` if no repetition appears within `max_steps` or the orbit
/// terminates at 0.
pub fn detect_period(x: &ExactReal, n: u64, max_steps: usize) -> Result<Option<OrbitPeriod>> {
    let mut seen: HashMap<ExactReal, usize> = HashMap::new();
    let mut digits = Vec::new();
    let mut state = x.clone();
    for step in 0..max_steps {
        if state.is_zero() {
            return Ok(None);
        }
        if let Some(&first) = seen.get(&state) {
            return Ok(Some(OrbitPeriod {
                preperiod: digits[..first].to_vec(),
                period: digits[first..step].to_vec(),
            }));
        }
        seen.insert(state.clone(), step);
        let (d, next) = tn_step(&state, n)?;
        digits.push(
            num_traits::ToPrimitive::to_u64(&d)
                .ok_or_else(|| NcfError::Representation(format!("digit {d} exceeds 64 bits")))?,
        );
        state = next;
    }
    Ok(None)
}
