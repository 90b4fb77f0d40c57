use std::fmt;
use std::ops::Deref;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use super::real::{tn_step, ExactReal};
use crate::error::{NcfError, Result};
use crate::Digit;

/// Finite run of NCF digits, as produced by a [`DigitSource`].
///
/// `terminated` is set when the source has no digits beyond the ones held
/// here (an explicit list was exhausted, or a rational orbit reached 0).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DigitSequence {
    pub digits: Vec<Digit>,
    pub terminated: bool,
}

impl DigitSequence {
    pub fn new(digits: Vec<Digit>) -> Self {
        DigitSequence { digits, terminated: false }
    }

    /// Checks that every digit is at least `n` (greedy expansions).
    pub fn validate_greedy(&self, n: u64) -> Result<()> {
        validate_greedy(&self.digits, n)
    }
}

impl Deref for DigitSequence {
    type Target = [Digit];
    fn deref(&self) -> &[Digit] {
        &self.digits
    }
}

pub(crate) fn validate_greedy(digits: &[Digit], n: u64) -> Result<()> {
    match digits.iter().position(|&d| d < n) {
        Some(i) => Err(NcfError::Domain(format!(
            "digit d_{} = {} is below N = {n}; greedy digits satisfy d >= N",
            i + 1,
            digits[i]
        ))),
        None => Ok(()),
    }
}

pub(crate) fn validate_positive(digits: &[Digit]) -> Result<()> {
    match digits.iter().position(|&d| d == 0) {
        Some(i) => Err(NcfError::Argument(format!("digit d_{} is 0; digits must be >= 1", i + 1))),
        None => Ok(()),
    }
}

/// Where digits come from.
///
/// Textual form (the CLI's digit-source DSL):
///
/// ```text
/// list:4,2,4,2
/// periodic:pre=;per=4,2
/// arith:start=2,step=1
/// surd:a=-1,b=1,c=1,D=2
/// rational:3/4
/// ```
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DigitSource {
    Explicit(Vec<Digit>),
    EventuallyPeriodic { preperiod: Vec<Digit>, period: Vec<Digit> },
    /// `d_n = start + (n - 1)·step`.
    Arithmetic { start: i64, step: i64 },
    /// Greedy digits of an exact real, obtained by iterating [`tn_step`].
    FromReal(ExactReal),
}

impl DigitSource {
    /// Returns up to `count` digits. `n` is only used by `FromReal`.
    pub fn take(&self, n: u64, count: usize) -> Result<DigitSequence> {
        let seq = match self {
            DigitSource::Explicit(list) => DigitSequence {
                digits: list.iter().copied().take(count).collect(),
                terminated: count >= list.len(),
            },
            DigitSource::EventuallyPeriodic { preperiod, period } => {
                if period.is_empty() {
                    return Err(NcfError::Argument("periodic source needs a nonempty period".into()));
                }
                let digits = preperiod.iter().chain(period.iter().cycle()).copied().take(count).collect();
                DigitSequence::new(digits)
            }
            DigitSource::Arithmetic { start, step } => {
                let mut digits = Vec::with_capacity(count);
                for i in 0..count as i64 {
                    let d = i
                        .checked_mul(*step)
                        .and_then(|s| s.checked_add(*start))
                        .filter(|&d| d >= 1)
                        .ok_or_else(|| {
                            NcfError::Argument(format!("arithmetic digit d_{} is not a positive integer", i + 1))
                        })?;
                    digits.push(d as Digit);
                }
                DigitSequence::new(digits)
            }
            DigitSource::FromReal(x) => return greedy_digits(x, n, count),
        };
        validate_positive(&seq.digits)?;
        Ok(seq)
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, DigitSource::Explicit(_) | DigitSource::FromReal(ExactReal::Rational(_)))
    }
}

/// Greedy NCF digits of `x`: iterates `T_N` up to `count` times, stopping early
/// when the orbit hits 0.
pub fn greedy_digits(x: &ExactReal, n: u64, count: usize) -> Result<DigitSequence> {
    let mut digits = Vec::with_capacity(count.min(1 << 16));
    let mut state = x.clone();
    while digits.len() < count {
        if state.is_zero() {
            return Ok(DigitSequence { digits, terminated: true });
        }
        let (d, next) = tn_step(&state, n)?;
        digits.push(digit_to_u64(&d)?);
        state = next;
    }
    Ok(DigitSequence { digits, terminated: state.is_zero() })
}

fn digit_to_u64(d: &BigInt) -> Result<Digit> {
    d.to_u64().ok_or_else(|| NcfError::Representation(format!("digit {d} does not fit in 64 bits")))
}

fn parse_list(s: &str) -> Result<Vec<Digit>> {
    if s.trim().is_empty() {
        return Ok(Vec::new());
    }
    s.split(',')
        .map(|t| t.trim().parse::<Digit>().map_err(|e| NcfError::Parse(format!("bad digit {t:?}: {e}"))))
        .collect()
}

fn parse_int<T: FromStr>(key: &str, v: &str) -> Result<T>
where
    T::Err: fmt::Display,
{
    v.trim().parse::<T>().map_err(|e| NcfError::Parse(format!("bad value for {key}: {v:?} ({e})")))
}

/// Parses `k1=v1<sep>k2=v2...` into pairs, preserving order.
fn parse_kv(body: &str, sep: char) -> Result<Vec<(String, String)>> {
    body.split(sep)
        .filter(|p| !p.is_empty())
        .map(|p| {
            p.split_once('=')
                .map(|(k, v)| (k.trim().to_string(), v.to_string()))
                .ok_or_else(|| NcfError::Parse(format!("expected key=value, got {p:?}")))
        })
        .collect()
}

fn lookup<'a>(kv: &'a [(String, String)], key: &str) -> Result<&'a str> {
    kv.iter()
        .find(|(k, _)| k == key)
        .map(|(_, v)| v.as_str())
        .ok_or_else(|| NcfError::Parse(format!("missing key {key:?}")))
}

impl FromStr for DigitSource {
    type Err = NcfError;

    fn from_str(s: &str) -> Result<Self> {
        let (kind, body) = s
            .split_once(':')
            .ok_or_else(|| NcfError::Parse(format!("digit source {s:?} lacks a kind prefix")))?;
        match kind.trim() {
            "list" => {
                let digits = parse_list(body)?;
                if digits.is_empty() {
                    return Err(NcfError::Parse("list source is empty".into()));
                }
                validate_positive(&digits)?;
                Ok(DigitSource::Explicit(digits))
            }
            "periodic" => {
                let kv = parse_kv(body, ';')?;
                let preperiod = parse_list(lookup(&kv, "pre").unwrap_or(""))?;
                let period = parse_list(lookup(&kv, "per")?)?;
                if period.is_empty() {
                    return Err(NcfError::Parse("periodic source needs a nonempty per=".into()));
                }
                validate_positive(&preperiod)?;
                validate_positive(&period)?;
                Ok(DigitSource::EventuallyPeriodic { preperiod, period })
            }
            "arith" => {
                let kv = parse_kv(body, ',')?;
                let start = parse_int("start", lookup(&kv, "start")?)?;
                let step = parse_int("step", lookup(&kv, "step")?)?;
                if start < 1 {
                    return Err(NcfError::Parse("arith start must be >= 1".into()));
                }
                Ok(DigitSource::Arithmetic { start, step })
            }
            "surd" => {
                let kv = parse_kv(body, ',')?;
                let get = |k: &str| -> Result<BigInt> { parse_int(k, lookup(&kv, k)?) };
                let x = ExactReal::surd(get("a")?, get("b")?, get("c")?, get("D")?)?;
                Ok(DigitSource::FromReal(x))
            }
            "rational" => {
                let (p, q) = body
                    .split_once('/')
                    .ok_or_else(|| NcfError::Parse(format!("rational source needs p/q, got {body:?}")))?;
                let x = ExactReal::rational(parse_int::<BigInt>("p", p)?, parse_int::<BigInt>("q", q)?)?;
                Ok(DigitSource::FromReal(x))
            }
            other => Err(NcfError::Parse(format!(
                "unknown digit source kind {other:?} (expected list, periodic, arith, surd, rational)"
            ))),
        }
    }
}

fn join(ds: &[Digit]) -> String {
    ds.iter().map(|d| d.to_string()).collect::<Vec<_>>().join(",")
}

impl fmt::Display for DigitSource {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DigitSource::Explicit(ds) => write!(f, "list:{}", join(ds)),
            DigitSource::EventuallyPeriodic { preperiod, period } => {
                write!(f, "periodic:pre={};per={}", join(preperiod), join(period))
            }
            DigitSource::Arithmetic { start, step } => write!(f, "arith:start={start},step={step}"),
            DigitSource::FromReal(ExactReal::Rational(r)) => {
                write!(f, "rational:{}/{}", r.numer(), r.denom())
            }
            DigitSource::FromReal(ExactReal::Surd(s)) => {
                write!(f, "surd:a={},b={},c={},D={}", s.a(), s.b(), s.c(), s.radicand())
            }
        }
    }
}
