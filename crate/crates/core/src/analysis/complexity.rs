use std::fmt;

use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use super::suffix::FactorIndex;
use crate::error::{NcfError, Result};
use crate::expansion::convergents;
use crate::word::{thresholds, BinaryWord, Flavor};
use crate::Digit;

/// Position of `n` in the threshold decomposition.
///
/// `Single(k)` is `(t_{k-1}, s_k]`, where one left special factor exists;
/// `Double(k)` is `(s_k, t_k]`, where there are two. `Double(0)` is the
/// primal initial band `(0, N-1]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Band {
    Seed,
    Single(usize),
    Double(usize),
}

impl Band {
    pub fn left_special_count(self) -> u64 {
        match self {
            Band::Seed | Band::Single(_) => 1,
            Band::Double(_) => 2,
        }
    }
}

impl fmt::Display for Band {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Band::Seed => f.write_str("seed"),
            Band::Single(k) => write!(f, "single:{k}"),
            Band::Double(k) => write!(f, "double:{k}"),
        }
    }
}

impl Serialize for Band {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Band {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        let bad = || serde::de::Error::custom(format!("bad band {s:?}"));
        if s == "seed" {
            return Ok(Band::Seed);
        }
        let (kind, k) = s.split_once(':').ok_or_else(bad)?;
        let k = k.parse().map_err(|_| bad())?;
        match kind {
            "single" => Ok(Band::Single(k)),
            "double" => Ok(Band::Double(k)),
            _ => Err(bad()),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComplexityEntry {
    pub n: usize,
    pub p: u64,
    pub ls_count: u64,
    pub band: Option<Band>,
}

/// `(s_k, t_k)` pair, clamped to 64 bits.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Threshold {
    pub k: usize,
    pub s: u64,
    pub t: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComplexityProfile {
    pub entries: Vec<ComplexityEntry>,
    pub thresholds: Vec<Threshold>,
}

impl ComplexityProfile {
    pub fn counts(&self) -> Vec<u64> {
        self.entries.iter().map(|e| e.p).collect()
    }

    pub fn ls_counts(&self) -> Vec<u64> {
        self.entries.iter().map(|e| e.ls_count).collect()
    }
}

fn counts_for(w: &[u8], n_max: usize) -> (Vec<u64>, Vec<u64>) {
    let idx = FactorIndex::new(w);
    (idx.factor_counts(n_max), idx.left_special_counts(n_max))
}

/// Distinct factor counts `p(0..=n_max)` and left special counts of `w`.
///
/// The counts are recomputed on the first half of `w`; any disagreement means
/// the prefix has not yet seen all factors and yields `PrefixTooShort`.
pub fn factor_complexity(w: &BinaryWord, n_max: usize) -> Result<ComplexityProfile> {
    let s = w.as_slice();
    if s.len() < 2 * (n_max + 1) {
        return Err(NcfError::PrefixTooShort(format!(
            "{} symbols cannot certify counts up to n = {n_max}",
            s.len()
        )));
    }
    let ((p, ls), (p_half, ls_half)) = rayon::join(|| counts_for(s, n_max), || counts_for(&s[..s.len() / 2], n_max));
    if let Some(n) = (0..=n_max).find(|&n| p[n] != p_half[n] || ls[n] != ls_half[n]) {
        return Err(NcfError::PrefixTooShort(format!(
            "counts at n = {n} differ between {} and {} symbols ({} vs {})",
            s.len() / 2,
            s.len(),
            p_half[n],
            p[n]
        )));
    }
    let entries = (0..=n_max).map(|n| ComplexityEntry { n, p: p[n], ls_count: ls[n], band: None }).collect();
    Ok(ComplexityProfile { entries, thresholds: Vec::new() })
}

/// Thresholds up to the first `k` with `t_k >= n_max`.
fn covering_thresholds(digits: &[Digit], n: u64, n_max: usize, flavor: Flavor) -> Result<Vec<(u128, u128)>> {
    let all = thresholds(digits, n, digits.len(), flavor)?;
    match all.iter().position(|&(_, t)| t >= n_max as u128) {
        Some(k) => Ok(all[..=k.max(1).min(all.len() - 1)].to_vec()),
        None => Err(NcfError::Argument(format!(
            "{} digits give thresholds only up to {}, need {n_max}",
            digits.len(),
            all.last().map(|x| x.1).unwrap_or(0)
        ))),
    }
}

fn band_of(n: usize, th: &[(u128, u128)]) -> Band {
    if n == 0 {
        return Band::Seed;
    }
    let n = n as u128;
    if n <= th[0].1 {
        return Band::Double(0);
    }
    for (k, &(s, t)) in th.iter().enumerate().skip(1) {
        if n <= s {
            return Band::Single(k);
        }
        if n <= t {
            return Band::Double(k);
        }
    }
    unreachable!("thresholds cover n")
}

fn clamp(v: u128) -> u64 {
    v.min(u64::MAX as u128) as u64
}

/// Complexity from the difference law: `p(0) = 1`, `p(1) = 2`, and
/// `p(n+1) - p(n)` equal to 1 on single bands and 2 on double bands.
pub fn complexity_closed_form(digits: &[Digit], n: u64, n_max: usize, flavor: Flavor) -> Result<ComplexityProfile> {
    let th = covering_thresholds(digits, n, n_max, flavor)?;
    let mut entries = Vec::with_capacity(n_max + 1);
    let mut p = 1u64;
    for m in 0..=n_max {
        let band = band_of(m, &th);
        entries.push(ComplexityEntry { n: m, p, ls_count: band.left_special_count(), band: Some(band) });
        p += band.left_special_count();
    }
    let thresholds = th.iter().enumerate().map(|(k, &(s, t))| Threshold { k, s: clamp(s), t: clamp(t) }).collect();
    Ok(ComplexityProfile { entries, thresholds })
}

/// One row of the comparison between the difference-law count and the
/// displayed closed form.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DisplayedFormEntry {
    pub n: usize,
    pub band: Band,
    pub difference_law: u64,
    pub displayed: i64,
    pub delta: i64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DisplayedFormReport {
    pub flavor: Flavor,
    pub entries: Vec<DisplayedFormEntry>,
    /// Values of `n` where the displayed form disagrees.
    pub discrepant: Vec<usize>,
    /// Distinct `(band kind, delta)` pairs among the discrepancies.
    pub deltas: Vec<(String, i64)>,
}

/// Evaluates the displayed closed forms
///
/// ```text
/// primal: 1 (n = 0), 2n (1 <= n <= N-1),
///         n + 1 + Σ_{j=-1}^{k-1} (p_j + q_j)(N-1)          on (t_k, s_{k+1}],
///         2n + 1 + Σ_{j=-1}^{k-1} (p_j + q_j)(N-1) - s_k   on (s_k, t_k]
/// dual:   1 (n = 0),
///         n + 1 + Σ_{j=0}^{k-2} (p_j/N + q_j)(N-1)         on (t̂_{k-1}, ŝ_k],
///         2n + 1 + Σ_{j=0}^{k-2} (p_j/N + q_j)(N-1) - ŝ_k  on (ŝ_k, t̂_k]
/// ```
///
/// and compares them with [`complexity_closed_form`]. Disagreements are
/// reported, not treated as errors.
pub fn displayed_closed_form(digits: &[Digit], n: u64, n_max: usize, flavor: Flavor) -> Result<DisplayedFormReport> {
    let law = complexity_closed_form(digits, n, n_max, flavor)?;
    let k_max = law.thresholds.len();
    // (p_j, q_j) for j = -1, 0, 1, ..., k_max
    let mut pq: Vec<(i128, i128)> = vec![(1, 0), (0, 1)];
    let take = k_max.min(digits.len());
    if take > 0 {
        for c in convergents(digits, n, take)? {
            let p = c.p.to_i128().ok_or_else(|| NcfError::Numeric("convergent exceeds 128 bits".into()))?;
            let q = c.q.to_i128().ok_or_else(|| NcfError::Numeric("convergent exceeds 128 bits".into()))?;
            pq.push((p, q));
        }
    }
    let pq_at = |j: i64| pq[(j + 1) as usize];
    let nn = n as i128;
    // Σ_{j=-1}^{m} (p_j + q_j)
    let primal_sum = |m: i64| -> i128 { (-1..=m).map(|j| pq_at(j).0 + pq_at(j).1).sum() };
    // Σ_{j=0}^{m} (p_j / N + q_j)
    let dual_sum = |m: i64| -> i128 { (0..=m).map(|j| pq_at(j).0 / nn + pq_at(j).1).sum() };
    let th: Vec<(i128, i128)> = law.thresholds.iter().map(|t| (t.s as i128, t.t as i128)).collect();
    let mut entries = Vec::new();
    for e in &law.entries {
        let m = e.n as i128;
        let band = e.band.expect("closed form carries bands");
        let displayed = match (flavor, band) {
            (_, Band::Seed) => 1,
            (Flavor::Primal, Band::Double(0)) => 2 * m,
            // (t_k, s_{k+1}] with k = b - 1
            (Flavor::Primal, Band::Single(b)) => m + 1 + primal_sum(b as i64 - 2) * (nn - 1),
            (Flavor::Primal, Band::Double(k)) => 2 * m + 1 + primal_sum(k as i64 - 1) * (nn - 1) - th[k].0,
            (Flavor::Dual, Band::Single(k)) => m + 1 + dual_sum(k as i64 - 2) * (nn - 1),
            (Flavor::Dual, Band::Double(k)) => 2 * m + 1 + dual_sum(k as i64 - 2) * (nn - 1) - th[k].0,
        };
        let displayed = i64::try_from(displayed).map_err(|_| NcfError::Numeric("displayed value overflow".into()))?;
        entries.push(DisplayedFormEntry { n: e.n, band, difference_law: e.p, displayed, delta: displayed - e.p as i64 });
    }
    let discrepant: Vec<usize> = entries.iter().filter(|e| e.delta != 0).map(|e| e.n).collect();
    let mut deltas: Vec<(String, i64)> = entries
        .iter()
        .filter(|e| e.delta != 0)
        .map(|e| {
            let kind = match e.band {
                Band::Seed => "seed",
                Band::Single(_) => "single",
                Band::Double(_) => "double",
            };
            (kind.to_string(), e.delta)
        })
        .collect();
    deltas.sort();
    deltas.dedup();
    Ok(DisplayedFormReport { flavor, entries, discrepant, deltas })
}

/// Values of `n` where two profiles disagree on `p(n)`.
pub fn profile_mismatches(a: &ComplexityProfile, b: &ComplexityProfile) -> Vec<usize> {
    a.entries.iter().zip(&b.entries).filter(|(x, y)| x.p != y.p).map(|(x, _)| x.n).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::word::limit_prefix;

    fn arith(count: usize) -> Vec<Digit> {
        (2..2 + count as u64).collect()
    }

    #[test]
    fn dual_example_counts() {
        let d = arith(8);
        let cf = complexity_closed_form(&d, 2, 15, Flavor::Dual).unwrap();
        assert_eq!(cf.counts(), vec![1, 2, 3, 4, 6, 7, 8, 9, 10, 11, 12, 13, 14, 16, 18, 20]);
        let w = limit_prefix(&d, 2, 100_000, Flavor::Dual).unwrap();
        let emp = factor_complexity(&w, 15).unwrap();
        assert_eq!(emp.counts(), cf.counts());
        assert_eq!(emp.ls_counts(), cf.ls_counts());
    }

    #[test]
    fn primal_examples() {
        let d = arith(8);
        let cf = complexity_closed_form(&d, 2, 3, Flavor::Primal).unwrap();
        assert_eq!(cf.counts(), vec![1, 2, 4, 5]);
        assert_eq!((cf.thresholds[0].t, cf.thresholds[1].s, cf.thresholds[1].t), (1, 2, 3));
        let cf = complexity_closed_form(&[1; 20], 1, 50, Flavor::Primal).unwrap();
        assert!(cf.entries.iter().all(|e| e.p == e.n as u64 + 1));
    }

    #[test]
    fn displayed_form_off_by_one_on_dual_double_band() {
        let r = displayed_closed_form(&arith(8), 2, 15, Flavor::Dual).unwrap();
        let at3 = &r.entries[3];
        assert_eq!((at3.difference_law, at3.displayed), (4, 5));
        assert!(r.deltas.iter().all(|(kind, _)| kind == "double"));
    }

    #[test]
    fn short_prefix_rejected() {
        let w = limit_prefix(&arith(8), 2, 40, Flavor::Dual).unwrap();
        assert!(matches!(factor_complexity(&w, 30), Err(NcfError::PrefixTooShort(_))));
        assert!(matches!(complexity_closed_form(&[2, 3], 2, 500, Flavor::Dual), Err(NcfError::Argument(_))));
    }

    #[test]
    fn band_json() {
        let b: Band = serde_json::from_str("\"double:3\"").unwrap();
        assert_eq!(b, Band::Double(3));
        assert_eq!(serde_json::to_string(&Band::Seed).unwrap(), "\"seed\"");
    }
}
