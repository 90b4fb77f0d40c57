use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use super::suffix::FactorIndex;
use crate::error::{NcfError, Result};
use crate::word::BinaryWord;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpecialFactor {
    pub factor: BinaryWord,
    pub is_prefix: bool,
    /// Neither `u0` nor `u1` is left special.
    pub is_maximal: bool,
    /// Both `u0` and `u1` are left special.
    pub is_total_bispecial: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpecialFactorReport {
    pub n: usize,
    pub factors: Vec<SpecialFactor>,
}

impl SpecialFactorReport {
    pub fn words(&self) -> Vec<String> {
        self.factors.iter().map(|f| f.factor.to_string()).collect()
    }
}

fn ls_set(idx: &FactorIndex<'_>, n: usize) -> BTreeSet<Vec<u8>> {
    let text = idx.text();
    idx.left_special_at(n).into_iter().map(|p| text[p..p + n].to_vec()).collect()
}

/// Left special factors of every length `n_lo..=n_hi`, with the flags
/// derived from the left special factors one symbol longer.
///
/// Sets are recomputed on the first half of `w`; a disagreement yields
/// `PrefixTooShort`.
pub fn left_special_range(w: &BinaryWord, n_lo: usize, n_hi: usize) -> Result<Vec<SpecialFactorReport>> {
    let s = w.as_slice();
    if n_lo > n_hi || s.len() < 2 * (n_hi + 2) {
        return Err(NcfError::PrefixTooShort(format!(
            "{} symbols cannot certify left special factors up to length {n_hi}",
            s.len()
        )));
    }
    let (full, half) = rayon::join(|| FactorIndex::new(s), || FactorIndex::new(&s[..s.len() / 2]));
    let mut sets = Vec::with_capacity(n_hi - n_lo + 2);
    for n in n_lo..=n_hi + 1 {
        let a = ls_set(&full, n);
        if a != ls_set(&half, n) {
            return Err(NcfError::PrefixTooShort(format!(
                "left special factors of length {n} differ between {} and {} symbols",
                s.len() / 2,
                s.len()
            )));
        }
        sets.push(a);
    }
    let mut out = Vec::new();
    for (i, n) in (n_lo..=n_hi).enumerate() {
        let longer = &sets[i + 1];
        let factors = sets[i]
            .iter()
            .map(|u| {
                let mut u0 = u.clone();
                u0.push(0);
                let mut u1 = u.clone();
                u1.push(1);
                let (e0, e1) = (longer.contains(&u0), longer.contains(&u1));
                SpecialFactor {
                    factor: BinaryWord::from_vec_unchecked(u.clone()),
                    is_prefix: s.starts_with(u),
                    is_maximal: !e0 && !e1,
                    is_total_bispecial: e0 && e1,
                }
            })
            .collect();
        out.push(SpecialFactorReport { n, factors });
    }
    Ok(out)
}

pub fn left_special(w: &BinaryWord, n: usize) -> Result<SpecialFactorReport> {
    Ok(left_special_range(w, n, n)?.remove(0))
}

/// Length of the longest common prefix of two words.
pub fn common_prefix_len(a: &BinaryWord, b: &BinaryWord) -> usize {
    a.as_slice().iter().zip(b.as_slice()).take_while(|(x, y)| x == y).count()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::word::{limit_prefix, Flavor};

    #[test]
    fn dual_example() {
        let d: Vec<u64> = (2..12).collect();
        let w = limit_prefix(&d, 2, 20_000, Flavor::Dual).unwrap();
        let r2 = left_special(&w, 2).unwrap();
        assert_eq!(r2.words(), vec!["00"]);
        assert!(r2.factors[0].is_prefix && r2.factors[0].is_total_bispecial);
        let r3 = left_special(&w, 3).unwrap();
        assert_eq!(r3.words(), vec!["000", "001"]);
        let f000 = &r3.factors[0];
        assert!(f000.is_maximal && !f000.is_prefix);
        assert!(r3.factors[1].is_prefix);
    }

    #[test]
    fn too_short() {
        let w: BinaryWord = "0010010".parse().unwrap();
        assert!(matches!(left_special(&w, 3), Err(NcfError::PrefixTooShort(_))));
    }
}
