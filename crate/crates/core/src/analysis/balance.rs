use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{NcfError, Result};
use crate::word::BinaryWord;

/// Extreme letter-1 counts over all windows of one length.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BalanceEntry {
    pub length: usize,
    pub min1: u64,
    pub max1: u64,
    pub spread: u64,
    /// Start of the first window attaining `min1`.
    pub argmin: usize,
    /// Start of the first window attaining `max1`.
    pub argmax: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BalanceProfile {
    pub entries: Vec<BalanceEntry>,
    /// `max_ℓ spread(ℓ)`.
    pub constant: u64,
}

impl BalanceProfile {
    pub fn spread(&self, length: usize) -> Option<u64> {
        self.entries.get(length.checked_sub(1)?).map(|e| e.spread)
    }

    /// Smallest window length whose spread reaches `target`.
    pub fn first_length_reaching(&self, target: u64) -> Option<usize> {
        self.entries.iter().find(|e| e.spread >= target).map(|e| e.length)
    }
}

fn prefix_ones(w: &BinaryWord) -> Vec<u32> {
    let mut acc = 0u32;
    let mut out = Vec::with_capacity(w.len() + 1);
    out.push(0);
    for &s in w.as_slice() {
        acc += s as u32;
        out.push(acc);
    }
    out
}

fn window_extremes(pre: &[u32], length: usize) -> BalanceEntry {
    let mut e = BalanceEntry { length, min1: u64::MAX, max1: 0, spread: 0, argmin: 0, argmax: 0 };
    for (i, (hi, lo)) in pre[length..].iter().zip(pre).enumerate() {
        let c = (hi - lo) as u64;
        if c < e.min1 {
            e.min1 = c;
            e.argmin = i;
        }
        if c > e.max1 {
            e.max1 = c;
            e.argmax = i;
        }
    }
    if e.min1 == u64::MAX {
        e.min1 = 0;
    }
    e.spread = e.max1 - e.min1;
    e
}

/// Exact min/max count of `1` over every window of each length `1..=ℓ_max`.
pub fn balance_profile(w: &BinaryWord, l_max: usize) -> Result<BalanceProfile> {
    if l_max == 0 || l_max > w.len() {
        return Err(NcfError::Argument(format!(
            "window lengths 1..={l_max} need a word of at least that length, have {}",
            w.len()
        )));
    }
    let pre = prefix_ones(w);
    let entries: Vec<BalanceEntry> = (1..=l_max).into_par_iter().map(|l| window_extremes(&pre, l)).collect();
    let constant = entries.iter().map(|e| e.spread).max().unwrap_or(0);
    Ok(BalanceProfile { entries, constant })
}

/// Two windows of equal length whose `1`-counts differ by at least the target.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ImbalanceWitness {
    pub length: usize,
    /// Start of the window with fewer `1`s.
    pub u_pos: usize,
    /// Start of the window with more `1`s.
    pub v_pos: usize,
    pub u: BinaryWord,
    pub v: BinaryWord,
    pub spread: u64,
}

pub fn find_imbalance_witness(w: &BinaryWord, length: usize, target: u64) -> Result<Option<ImbalanceWitness>> {
    if length == 0 || length > w.len() {
        return Err(NcfError::Argument(format!("window length {length} not in 1..={}", w.len())));
    }
    let s = w.as_slice();
    let window = |p: usize| BinaryWord::from_vec_unchecked(s[p..p + length].to_vec());
    if target == 0 {
        return Ok(Some(ImbalanceWitness { length, u_pos: 0, v_pos: 0, u: window(0), v: window(0), spread: 0 }));
    }
    let e = window_extremes(&prefix_ones(w), length);
    Ok((e.spread >= target).then(|| ImbalanceWitness {
        length,
        u_pos: e.argmin,
        v_pos: e.argmax,
        u: window(e.argmin),
        v: window(e.argmax),
        spread: e.spread,
    }))
}

/// Scans window lengths `1..=l_max` for the first witness reaching `target`.
pub fn search_imbalance_witness(w: &BinaryWord, l_max: usize, target: u64) -> Result<Option<ImbalanceWitness>> {
    let profile = balance_profile(w, l_max)?;
    match profile.first_length_reaching(target) {
        Some(l) => find_imbalance_witness(w, l, target),
        None => Ok(None),
    }
}

/// Balance bound for words whose digits are all at least `k`:
/// `floor((K-1)/(K+1-N)) + 1` (requires `K >= N`).
pub fn digit_floor_balance_bound(k: u64, n: u64) -> u64 {
    (k - 1) / (k + 1 - n) + 1
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn naive_spread(w: &[u8], l: usize) -> u64 {
        let counts: Vec<u64> = w.windows(l).map(|x| x.iter().map(|&c| c as u64).sum()).collect();
        counts.iter().max().unwrap() - counts.iter().min().unwrap()
    }

    #[test]
    fn constant_word() {
        let w = BinaryWord::repeat_letter(0, 50);
        let p = balance_profile(&w, 50).unwrap();
        assert_eq!(p.constant, 0);
        assert!(balance_profile(&w, 51).is_err());
    }

    #[test]
    fn witness_target_zero() {
        let w: BinaryWord = "0110".parse().unwrap();
        let wit = find_imbalance_witness(&w, 2, 0).unwrap().unwrap();
        assert_eq!((wit.u_pos, wit.v_pos, wit.spread), (0, 0, 0));
        let wit = find_imbalance_witness(&w, 2, 1).unwrap().unwrap();
        assert_eq!((wit.u.to_string(), wit.v.to_string()), ("01".to_string(), "11".to_string()));
        assert!(find_imbalance_witness(&w, 2, 2).unwrap().is_none());
    }

    #[test]
    fn digit_floor_bound() {
        assert_eq!(digit_floor_balance_bound(2, 2), 2);
        assert_eq!(digit_floor_balance_bound(4, 2), 2);
        assert_eq!(digit_floor_balance_bound(3, 3), 3);
        assert_eq!(digit_floor_balance_bound(1, 1), 1);
    }

    proptest! {
        #[test]
        fn matches_naive(bits in prop::collection::vec(0u8..2, 1..150)) {
            let w = BinaryWord::from_symbols(bits.clone()).unwrap();
            let p = balance_profile(&w, bits.len()).unwrap();
            for e in &p.entries {
                prop_assert_eq!(e.spread, naive_spread(&bits, e.length));
                prop_assert!(e.spread <= e.length as u64);
            }
        }
    }
}
