use std::fmt::Write as _;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::maps::{gauss_step, natext_step, MapKind};
use crate::error::{NcfError, Result};

pub const BURN_IN: usize = 1000;

fn log_ratio(n: u64) -> f64 {
    (1.0 / n as f64).ln_1p()
}

/// Inverse CDF of `ρ_N`: maps `u ∈ [0, 1)` to `x ∈ [0, 1)`.
pub fn sample_invariant_x(n: u64, u: f64) -> f64 {
    let nf = n as f64;
    nf * (u * log_ratio(n)).exp_m1()
}

/// Inverse of the conditional CDF of `y` given `x` under `dx dy/(1+xy)²`.
pub fn sample_invariant_y(n: u64, x: f64, u: f64) -> f64 {
    let top = 1.0 / n as f64;
    let c = u * top / (1.0 + x * top);
    c / (1.0 - x * c)
}

/// Invariant mass of `[x0, x1]` under `ρ_N`.
pub fn interval_mass(n: u64, x0: f64, x1: f64) -> f64 {
    let nf = n as f64;
    ((x1 - x0) / (nf + x0)).ln_1p() / log_ratio(n)
}

/// Invariant mass of `[x0, x1] × [y0, y1]` under the natural-extension measure.
pub fn rectangle_mass(n: u64, x0: f64, x1: f64, y0: f64, y1: f64) -> f64 {
    let l = |x: f64, y: f64| (x * y).ln_1p();
    (l(x1, y1) - l(x0, y1) - l(x1, y0) + l(x0, y0)) / log_ratio(n)
}

/// Histogram of an orbit against the exact invariant masses.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DensityCheck {
    pub map: MapKind,
    #[serde(rename = "N")]
    pub n: u64,
    pub bins_x: usize,
    /// 1 for one-dimensional checks.
    pub bins_y: usize,
    pub iterations: usize,
    pub seed: u64,
    /// Row-major, `x` outer.
    pub empirical: Vec<f64>,
    pub theoretical: Vec<f64>,
    pub sup_norm: f64,
    pub total_variation: f64,
    pub theoretical_sum: f64,
}

impl DensityCheck {
    fn assemble(map: MapKind, n: u64, bins: (usize, usize), seed: u64, counts: Vec<u64>, theoretical: Vec<f64>) -> Self {
        let iterations = counts.iter().sum::<u64>() as usize;
        let empirical: Vec<f64> = counts.iter().map(|&c| c as f64 / iterations as f64).collect();
        let diffs = empirical.iter().zip(&theoretical).map(|(e, t)| (e - t).abs());
        let sup_norm = diffs.clone().fold(0.0, f64::max);
        let total_variation = 0.5 * diffs.sum::<f64>();
        let theoretical_sum = theoretical.iter().sum();
        DensityCheck {
            map,
            n,
            bins_x: bins.0,
            bins_y: bins.1,
            iterations,
            seed,
            empirical,
            theoretical,
            sup_norm,
            total_variation,
            theoretical_sum,
        }
    }

    /// CSV rows `bin_lo_x,bin_lo_y,mass_empirical,mass_theoretical`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("bin_lo_x,bin_lo_y,mass_empirical,mass_theoretical\n");
        let hy = if self.bins_y > 1 { 1.0 / (self.n as f64 * self.bins_y as f64) } else { 0.0 };
        for i in 0..self.bins_x {
            for j in 0..self.bins_y {
                let k = i * self.bins_y + j;
                let _ = writeln!(
                    out,
                    "{},{},{:e},{:e}",
                    i as f64 / self.bins_x as f64,
                    j as f64 * hy,
                    self.empirical[k],
                    self.theoretical[k]
                );
            }
        }
        out
    }
}

fn joint_masses(n: u64, bx: usize, by: usize) -> Vec<f64> {
    let top = 1.0 / n as f64;
    let mut out = Vec::with_capacity(bx * by);
    for i in 0..bx {
        let (x0, x1) = (i as f64 / bx as f64, (i + 1) as f64 / bx as f64);
        for j in 0..by {
            let (y0, y1) = (j as f64 * top / by as f64, (j + 1) as f64 * top / by as f64);
            out.push(rectangle_mass(n, x0, x1, y0, y1));
        }
    }
    out
}

fn marginal_masses(n: u64, bins: usize) -> Vec<f64> {
    (0..bins).map(|i| interval_mass(n, i as f64 / bins as f64, (i + 1) as f64 / bins as f64)).collect()
}

fn bin(v: f64, scale: f64, bins: usize) -> usize {
    ((v * scale) as usize).min(bins - 1)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NatExtReport {
    pub joint: DensityCheck,
    /// `x`-marginal of the same orbit against `ρ_N`.
    pub marginal: DensityCheck,
}

fn check_args(n: u64, iterations: usize, bins: usize, min_iter: usize) -> Result<()> {
    if n == 0 {
        return Err(NcfError::Argument("N must be >= 1".into()));
    }
    if iterations < min_iter {
        return Err(NcfError::Argument(format!("need at least {min_iter} iterations, got {iterations}")));
    }
    if bins < 10 {
        return Err(NcfError::Argument(format!("need at least 10 bins per axis, got {bins}")));
    }
    Ok(())
}

/// Bins one long orbit of the natural extension (after [`BURN_IN`] discarded
/// steps) and compares against `dx dy / (log((N+1)/N) (1+xy)²)`.
pub fn natext_invariance_check(n: u64, iterations: usize, bins: usize, seed: u64) -> Result<NatExtReport> {
    check_args(n, iterations, bins, 100_000)?;
    let nf = n as f64;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (mut x, mut y): (f64, f64) = (rng.random(), rng.random::<f64>() / nf);
    let mut joint = vec![0u64; bins * bins];
    let mut marginal = vec![0u64; bins];
    let scale_x = bins as f64;
    let scale_y = bins as f64 * nf;
    for i in 0..BURN_IN + iterations {
        if x == 0.0 {
            x = sample_invariant_x(n, rng.random());
            y = sample_invariant_y(n, x, rng.random());
        }
        (_, x, y) = natext_step(x, y, nf);
        if i >= BURN_IN {
            let bx = bin(x, scale_x, bins);
            joint[bx * bins + bin(y, scale_y, bins)] += 1;
            marginal[bx] += 1;
        }
    }
    Ok(NatExtReport {
        joint: DensityCheck::assemble(MapKind::NaturalExtension, n, (bins, bins), seed, joint, joint_masses(n, bins, bins)),
        marginal: DensityCheck::assemble(MapKind::Gauss, n, (bins, 1), seed, marginal, marginal_masses(n, bins)),
    })
}

/// One-step pushforward: draws `samples` independent points from the
/// invariant measure, applies the map once and bins the images. Only
/// `T_N` and the natural extension carry a finite invariant measure.
pub fn pushforward_check(map: MapKind, n: u64, samples: usize, bins: usize, seed: u64) -> Result<DensityCheck> {
    check_args(n, samples, bins, 1)?;
    let nf = n as f64;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    match map {
        MapKind::Gauss => {
            let mut counts = vec![0u64; bins];
            for _ in 0..samples {
                let x = sample_invariant_x(n, rng.random());
                let tx = gauss_step(x, nf).map_or(0.0, |(_, t)| t);
                counts[bin(tx, bins as f64, bins)] += 1;
            }
            Ok(DensityCheck::assemble(map, n, (bins, 1), seed, counts, marginal_masses(n, bins)))
        }
        MapKind::NaturalExtension => {
            let mut counts = vec![0u64; bins * bins];
            for _ in 0..samples {
                let x = sample_invariant_x(n, rng.random());
                let y = sample_invariant_y(n, x, rng.random());
                let (_, tx, ty) = natext_step(x, y, nf);
                counts[bin(tx, bins as f64, bins) * bins + bin(ty, bins as f64 * nf, bins)] += 1;
            }
            Ok(DensityCheck::assemble(map, n, (bins, bins), seed, counts, joint_masses(n, bins, bins)))
        }
        MapKind::Farey => Err(NcfError::Argument(
            "F_N has an infinite invariant measure; use farey_invariance_check".into(),
        )),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn masses_normalized() {
        for n in 1..=4 {
            let s: f64 = joint_masses(n, 20, 20).iter().sum();
            assert!((s - 1.0).abs() < 1e-9);
            let s: f64 = marginal_masses(n, 20).iter().sum();
            assert!((s - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn joint_rows_sum_to_marginal() {
        let j = joint_masses(3, 10, 10);
        let m = marginal_masses(3, 10);
        for i in 0..10 {
            let row: f64 = j[i * 10..(i + 1) * 10].iter().sum();
            assert!((row - m[i]).abs() < 1e-12);
        }
    }

    #[test]
    fn gauss_marginal_for_n1() {
        // ρ_1 = 1/(ln 2 (1+x))
        let m = interval_mass(1, 0.25, 0.5);
        assert!((m - (1.5f64 / 1.25).ln() / std::f64::consts::LN_2).abs() < 1e-15);
    }

    #[test]
    fn samplers_invert_cdfs() {
        for n in [1u64, 2, 5] {
            for u in [0.0, 0.1, 0.5, 0.9] {
                let x = sample_invariant_x(n, u);
                assert!((interval_mass(n, 0.0, x) - u).abs() < 1e-12);
                let y = sample_invariant_y(n, x, u);
                let total = rectangle_mass(n, x, x + 1e-6, 0.0, 1.0 / n as f64);
                let part = rectangle_mass(n, x, x + 1e-6, 0.0, y);
                assert!((part / total - u).abs() < 1e-5);
            }
        }
    }

    #[test]
    fn short_orbit_is_close() {
        let r = natext_invariance_check(2, 200_000, 10, 7).unwrap();
        assert!(r.joint.total_variation < 0.05);
        assert!(r.marginal.total_variation < 0.05);
        assert!(natext_invariance_check(2, 1000, 10, 7).is_err());
        let csv = r.joint.to_csv();
        assert_eq!(csv.lines().count(), 101);
    }

    #[test]
    fn pushforward_rate() {
        let coarse = pushforward_check(MapKind::Gauss, 2, 10_000, 20, 1).unwrap();
        let fine = pushforward_check(MapKind::Gauss, 2, 1_000_000, 20, 1).unwrap();
        assert!(fine.total_variation < coarse.total_variation);
        let nat = pushforward_check(MapKind::NaturalExtension, 1, 1_000_000, 10, 3).unwrap();
        assert!(nat.total_variation < 0.01);
        assert!(pushforward_check(MapKind::Farey, 1, 10, 10, 0).is_err());
    }
}
