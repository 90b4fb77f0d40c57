use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::word::BinaryWord;

/// Lengths of runs flanked on both sides by the other letter.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct BlockCensus {
    pub zeros: BTreeSet<u64>,
    pub ones: BTreeSet<u64>,
}

/// Interior run lengths; the first and last run may be truncated and are skipped.
pub fn maximal_blocks(w: &BinaryWord) -> BlockCensus {
    let runs = w.runs();
    let mut census = BlockCensus::default();
    if runs.len() >= 3 {
        for r in &runs[1..runs.len() - 1] {
            if r.letter == 0 {
                census.zeros.insert(r.len);
            } else {
                census.ones.insert(r.len);
            }
        }
    }
    census
}
