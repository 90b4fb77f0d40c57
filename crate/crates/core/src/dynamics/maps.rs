use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{NcfError, Result};
use crate::expansion::SlowSymbol;

/// Which map to iterate.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum MapKind {
    /// `T_N(x) = N/x - floor(N/x)`
    #[serde(rename = "T")]
    Gauss,
    /// `F_N`: `Nx/(N-x)` on `[0, N/(N+1)]`, `N/x - N` above.
    #[serde(rename = "F")]
    Farey,
    /// `(x, y) -> (T_N x, 1/(N y + floor(N/x)))` on `[0,1] × [0,1/N]`.
    #[serde(rename = "NatExt")]
    NaturalExtension,
}

impl fmt::Display for MapKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            MapKind::Gauss => "T",
            MapKind::Farey => "F",
            MapKind::NaturalExtension => "NatExt",
        })
    }
}

impl FromStr for MapKind {
    type Err = NcfError;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "t" | "gauss" => Ok(MapKind::Gauss),
            "f" | "farey" => Ok(MapKind::Farey),
            "natext" => Ok(MapKind::NaturalExtension),
            _ => Err(NcfError::Parse(format!("unknown map {s:?}; expected T, F or NatExt"))),
        }
    }
}

/// One `T_N` step in double precision. Returns `None` at `x = 0`.
#[inline]
pub fn gauss_step(x: f64, n: f64) -> Option<(u64, f64)> {
    if x <= 0.0 {
        return None;
    }
    let q = n / x;
    let d = q.floor();
    Some((d as u64, q - d))
}

#[inline]
pub fn farey_step(x: f64, n: f64) -> (SlowSymbol, f64) {
    if x > n / (n + 1.0) {
        (SlowSymbol::Shift, n / x - n)
    } else {
        (SlowSymbol::Decrement, n * x / (n - x))
    }
}

#[inline]
pub fn natext_step(x: f64, y: f64, n: f64) -> (Option<u64>, f64, f64) {
    match gauss_step(x, n) {
        Some((d, tx)) => (Some(d), tx, 1.0 / (n * y + d as f64)),
        None => (None, 0.0, 0.0),
    }
}

/// Iterates of one map from a seed.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OrbitSample {
    pub map: MapKind,
    #[serde(rename = "N")]
    pub n: u64,
    pub seed: Vec<f64>,
    pub length: usize,
    /// `x` coordinates of the iterates after the seed.
    pub xs: Vec<f64>,
    /// `y` coordinates, natural extension only.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ys: Option<Vec<f64>>,
    /// `T_N` digits (also for the natural extension).
    pub digits: Vec<u64>,
    /// `F_N` branch symbols.
    pub slow: Vec<SlowSymbol>,
    /// Steps where `N/x` lay within `1e-9` of an integer, so the emitted digit
    /// may differ from the exact greedy digit.
    pub near_boundary: Vec<usize>,
    /// The orbit reached `x = 0` and stopped.
    pub hit_zero: bool,
}

fn near_integer(v: f64) -> bool {
    (v - v.round()).abs() < 1e-9
}

pub fn orbit(map: MapKind, n: u64, seed: &[f64], steps: usize) -> Result<OrbitSample> {
    if n == 0 {
        return Err(NcfError::Argument("N must be >= 1".into()));
    }
    if steps == 0 {
        return Err(NcfError::Argument("orbit length must be positive".into()));
    }
    let nf = n as f64;
    let x0 = *seed.first().ok_or_else(|| NcfError::Argument("missing seed".into()))?;
    if !(0.0..=1.0).contains(&x0) {
        return Err(NcfError::Argument(format!("seed x = {x0} outside [0, 1]")));
    }
    let mut out = OrbitSample {
        map,
        n,
        seed: seed.to_vec(),
        length: 0,
        xs: Vec::with_capacity(steps),
        ys: None,
        digits: Vec::new(),
        slow: Vec::new(),
        near_boundary: Vec::new(),
        hit_zero: false,
    };
    match map {
        MapKind::Gauss => {
            let mut x = x0;
            for i in 0..steps {
                let Some((d, tx)) = gauss_step(x, nf) else {
                    out.hit_zero = true;
                    break;
                };
                if near_integer(nf / x) {
                    out.near_boundary.push(i);
                }
                out.digits.push(d);
                out.xs.push(tx);
                x = tx;
            }
        }
        MapKind::Farey => {
            let mut x = x0;
            for _ in 0..steps {
                if x == 0.0 {
                    out.hit_zero = true;
                    break;
                }
                let (sym, fx) = farey_step(x, nf);
                out.slow.push(sym);
                out.xs.push(fx);
                x = fx;
            }
        }
        MapKind::NaturalExtension => {
            let y0 = *seed.get(1).ok_or_else(|| NcfError::Argument("natural extension needs a seed (x, y)".into()))?;
            if !(0.0..=1.0 / nf).contains(&y0) {
                return Err(NcfError::Argument(format!("seed y = {y0} outside [0, 1/N]")));
            }
            let mut ys = Vec::with_capacity(steps);
            let (mut x, mut y) = (x0, y0);
            for i in 0..steps {
                let (d, tx, ty) = natext_step(x, y, nf);
                match d {
                    Some(d) => {
                        if near_integer(nf / x) {
                            out.near_boundary.push(i);
                        }
                        out.digits.push(d);
                    }
                    None => out.hit_zero = true,
                }
                out.xs.push(tx);
                ys.push(ty);
                (x, y) = (tx, ty);
                if out.hit_zero {
                    break;
                }
            }
            out.ys = Some(ys);
        }
    }
    out.length = out.xs.len();
    Ok(out)
}
