use serde::{Deserialize, Serialize};

use crate::error::{NcfError, Result};
use crate::word::BinaryWord;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FrequencyReport {
    pub factor: BinaryWord,
    pub windows: usize,
    pub window_len: usize,
    /// Occurrences starting inside each window, divided by the window length.
    pub per_window: Vec<f64>,
    pub mean: f64,
    pub max_deviation: f64,
}

/// Splits `w` into `windows` equal disjoint blocks (dropping any remainder)
/// and measures the occurrence frequency of `u` in each.
///
/// An occurrence is attributed to the block containing its first symbol and
/// may run past the block end.
pub fn frequency_report(w: &BinaryWord, u: &BinaryWord, windows: usize) -> Result<FrequencyReport> {
    if u.is_empty() || windows == 0 {
        return Err(NcfError::Argument("factor must be nonempty and windows positive".into()));
    }
    let block = w.len() / windows;
    if block == 0 {
        return Err(NcfError::Argument(format!("{} symbols cannot fill {windows} windows", w.len())));
    }
    let (s, pat) = (w.as_slice(), u.as_slice());
    let mut counts = vec![0u64; windows];
    for (i, win) in s.windows(pat.len()).enumerate() {
        if win == pat && i / block < windows {
            counts[i / block] += 1;
        }
    }
    let per_window: Vec<f64> = counts.iter().map(|&c| c as f64 / block as f64).collect();
    let mean = per_window.iter().sum::<f64>() / windows as f64;
    let max_deviation = per_window.iter().map(|f| (f - mean).abs()).fold(0.0, f64::max);
    Ok(FrequencyReport { factor: u.clone(), windows, window_len: block, per_window, mean, max_deviation })
}

/// `|w|_1 / |w|_0`, or `None` when `w` has no `0`.
pub fn letter_ratio(w: &BinaryWord) -> Option<f64> {
    let ab = w.abelianize();
    (ab.count0 > 0).then(|| ab.count1 as f64 / ab.count0 as f64)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn periodic_word_is_uniform() {
        let w = BinaryWord::from_symbols([0u8, 1].repeat(500)).unwrap();
        let r = frequency_report(&w, &"01".parse().unwrap(), 10).unwrap();
        assert!(r.per_window.iter().all(|&f| f == 0.5));
        assert_eq!(r.max_deviation, 0.0);
        assert_eq!(letter_ratio(&w), Some(1.0));
    }
}
