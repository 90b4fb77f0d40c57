use std::fmt;
use std::str::FromStr;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::error::{NcfError, Result};

/// Maximal block of one letter inside a word.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Run {
    pub letter: u8,
    pub len: u64,
}

/// Letter counts `(|w|_0, |w|_1)`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct AbelianVector {
    pub count0: u64,
    pub count1: u64,
}

impl AbelianVector {
    pub fn len(&self) -> u64 {
        self.count0 + self.count1
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// Finite word over `{0, 1}`.
///
/// The symbol array is the stored form; the run-length view is derived on
/// first use and cached.
#[derive(Default)]
pub struct BinaryWord {
    symbols: Vec<u8>,
    runs: OnceLock<Vec<Run>>,
}

impl Clone for BinaryWord {
    fn clone(&self) -> Self {
        BinaryWord::from_vec_unchecked(self.symbols.clone())
    }
}

impl PartialEq for BinaryWord {
    fn eq(&self, other: &Self) -> bool {
        self.symbols == other.symbols
    }
}

impl Eq for BinaryWord {}

impl fmt::Debug for BinaryWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.len() <= 80 {
            write!(f, "BinaryWord({self})")
        } else {
            write!(f, "BinaryWord({}… len {})", self.prefix(80), self.len())
        }
    }
}

impl BinaryWord {
    pub fn new() -> Self {
        Self::default()
    }

    pub(crate) fn from_vec_unchecked(symbols: Vec<u8>) -> Self {
        debug_assert!(symbols.iter().all(|&s| s <= 1));
        BinaryWord { symbols, runs: OnceLock::new() }
    }

    pub fn from_symbols(symbols: Vec<u8>) -> Result<Self> {
        if let Some(i) = symbols.iter().position(|&s| s > 1) {
            return Err(NcfError::Argument(format!("symbol {} at {i} is not 0 or 1", symbols[i])));
        }
        Ok(Self::from_vec_unchecked(symbols))
    }

    pub fn repeat_letter(letter: u8, count: usize) -> Self {
        Self::from_vec_unchecked(vec![letter; count])
    }

    /// Builds a word from run-length blocks; adjacent blocks must alternate letters.
    pub fn from_runs(runs: &[Run]) -> Result<Self> {
        let mut symbols = Vec::new();
        for (i, r) in runs.iter().enumerate() {
            if r.letter > 1 || r.len == 0 {
                return Err(NcfError::Argument(format!("invalid run {r:?}")));
            }
            if i > 0 && runs[i - 1].letter == r.letter {
                return Err(NcfError::Argument("run-length blocks must alternate letters".into()));
            }
            symbols.extend(std::iter::repeat_n(r.letter, r.len as usize));
        }
        Ok(Self::from_vec_unchecked(symbols))
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn as_slice(&self) -> &[u8] {
        &self.symbols
    }

    pub fn into_vec(self) -> Vec<u8> {
        self.symbols
    }

    pub fn runs(&self) -> &[Run] {
        self.runs.get_or_init(|| {
            let mut out: Vec<Run> = Vec::new();
            for &s in &self.symbols {
                match out.last_mut() {
                    Some(r) if r.letter == s => r.len += 1,
                    _ => out.push(Run { letter: s, len: 1 }),
                }
            }
            out
        })
    }

    pub fn count(&self, letter: u8) -> u64 {
        self.symbols.iter().filter(|&&s| s == letter).count() as u64
    }

    pub fn abelianize(&self) -> AbelianVector {
        let count1 = self.symbols.iter().map(|&s| s as u64).sum::<u64>();
        AbelianVector { count0: self.len() as u64 - count1, count1 }
    }

    pub fn prefix(&self, n: usize) -> BinaryWord {
        Self::from_vec_unchecked(self.symbols[..n.min(self.len())].to_vec())
    }

    pub fn is_prefix_of(&self, other: &BinaryWord) -> bool {
        other.symbols.starts_with(&self.symbols)
    }

    pub fn concat(&self, other: &BinaryWord) -> BinaryWord {
        let mut v = Vec::with_capacity(self.len() + other.len());
        v.extend_from_slice(&self.symbols);
        v.extend_from_slice(&other.symbols);
        Self::from_vec_unchecked(v)
    }

    pub fn repeat(&self, k: usize) -> BinaryWord {
        Self::from_vec_unchecked(self.symbols.repeat(k))
    }

    /// Plain text format: `0`/`1` characters followed by a newline.
    pub fn to_plain(&self) -> String {
        let mut s = self.to_string();
        s.push('\n');
        s
    }

    /// Reads the plain format; surrounding whitespace and a trailing newline are ignored.
    pub fn from_plain(text: &str) -> Result<Self> {
        text.trim().parse()
    }

    /// Run-length format: comma-separated `count:letter` tokens, e.g. `2:0,1:1`.
    pub fn to_rle(&self) -> String {
        self.runs()
            .iter()
            .map(|r| format!("{}:{}", r.len, r.letter))
            .collect::<Vec<_>>()
            .join(",")
    }

    pub fn from_rle(text: &str) -> Result<Self> {
        let text = text.trim();
        if text.is_empty() {
            return Ok(Self::new());
        }
        let runs = text
            .split(',')
            .map(|tok| {
                let (c, l) = tok
                    .trim()
                    .split_once(':')
                    .ok_or_else(|| NcfError::Parse(format!("RLE token {tok:?} lacks ':'")))?;
                let len = c.parse::<u64>().map_err(|e| NcfError::Parse(format!("RLE count {c:?}: {e}")))?;
                let letter = match l {
                    "0" => 0,
                    "1" => 1,
                    _ => return Err(NcfError::Parse(format!("RLE letter {l:?} is not 0 or 1"))),
                };
                Ok(Run { letter, len })
            })
            .collect::<Result<Vec<_>>>()?;
        Self::from_runs(&runs).map_err(|e| NcfError::Parse(e.to_string()))
    }
}

impl fmt::Display for BinaryWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: String = self.symbols.iter().map(|&b| if b == 0 { '0' } else { '1' }).collect();
        f.write_str(&s)
    }
}

impl FromStr for BinaryWord {
    type Err = NcfError;

    fn from_str(s: &str) -> Result<Self> {
        s.bytes()
            .map(|b| match b {
                b'0' => Ok(0),
                b'1' => Ok(1),
                _ => Err(NcfError::Parse(format!("character {:?} is not 0 or 1", b as char))),
            })
            .collect::<Result<Vec<u8>>>()
            .map(Self::from_vec_unchecked)
    }
}

impl Serialize for BinaryWord {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for BinaryWord {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}
