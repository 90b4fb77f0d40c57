use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::binary::BinaryWord;
use super::subst::{Matrix2, SubstitutionRule};
use crate::error::{NcfError, Result};
use crate::expansion::{DigitSequence, DigitSource, SlowSymbol};
use crate::Digit;

/// Which limit word: `ω` (primal, built from `σ_n`) or `ŵ` (dual, from `σ̂_n`).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Flavor {
    Primal,
    Dual,
}

impl fmt::Display for Flavor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Flavor::Primal => "primal",
            Flavor::Dual => "dual",
        })
    }
}

impl FromStr for Flavor {
    type Err = NcfError;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "primal" => Ok(Flavor::Primal),
            "dual" => Ok(Flavor::Dual),
            _ => Err(NcfError::Parse(format!("flavor {s:?} is neither primal nor dual"))),
        }
    }
}

impl Flavor {
    pub fn rule(self, d: Digit, n: u64) -> SubstitutionRule {
        match self {
            Flavor::Primal => SubstitutionRule::primal(d, n),
            Flavor::Dual => SubstitutionRule::dual(d, n),
        }
    }
}

fn check_n(n: u64) -> Result<()> {
    if n == 0 {
        return Err(NcfError::Argument("N must be >= 1".into()));
    }
    Ok(())
}

fn check_digits(digits: &[Digit]) -> Result<()> {
    if let Some(i) = digits.iter().position(|&d| d == 0) {
        return Err(NcfError::Argument(format!("digit {} is 0", i + 1)));
    }
    Ok(())
}

/// Incremental builder for `Σ_1, Σ_2, ...` in a single buffer.
///
/// Every `Σ_j` with `j >= 1` is a prefix of `Σ_{j+1}`, so the buffer only ever
/// grows and earlier words are read back as its prefixes.
struct SigmaBuilder<'a> {
    digits: &'a [Digit],
    n: u64,
    flavor: Flavor,
    buf: Vec<u8>,
    /// `lens[j] = |Σ_j|`, saturating.
    lens: Vec<u128>,
    cap: usize,
}

impl<'a> SigmaBuilder<'a> {
    fn new(digits: &'a [Digit], n: u64, flavor: Flavor, cap: usize) -> Self {
        SigmaBuilder { digits, n, flavor, buf: vec![0], lens: vec![1, 1], cap }
    }

    /// Index of the word currently held in the buffer.
    fn k(&self) -> usize {
        self.lens.len() - 1
    }

    fn full(&self) -> bool {
        self.buf.len() >= self.cap
    }

    fn push_run(&mut self, letter: u8, count: u64) {
        let room = self.cap.saturating_sub(self.buf.len());
        let take = (count as u128).min(room as u128) as usize;
        self.buf.extend(std::iter::repeat_n(letter, take));
    }

    fn push_prefix(&mut self, len: usize, times: u64) {
        for _ in 0..times {
            if self.full() {
                return;
            }
            let take = len.min(self.cap - self.buf.len());
            self.buf.extend_from_within(..take);
        }
    }

    /// Advances from `Σ_k` to `Σ_{k+1}` using digit `d_k`.
    fn step(&mut self) -> Result<()> {
        let k = self.k();
        let d = *self
            .digits
            .get(k - 1)
            .ok_or_else(|| NcfError::InsufficientDigits(format!("Σ_{} needs digit d_{k}", k + 1)))?;
        let len_k = self.lens[k];
        let len_prev = self.lens[k - 1];
        let cur = self.buf.len();
        match (self.flavor, k) {
            (Flavor::Primal, 1) => {
                self.push_run(0, d - 1);
                self.push_run(1, self.n);
            }
            (Flavor::Dual, 1) => {
                self.push_run(0, d - 1);
                self.push_run(1, 1);
            }
            _ => {
                self.push_prefix(cur, d - 1);
                let prev = len_prev.min(self.cap as u128) as usize;
                self.push_prefix(prev, self.n);
            }
        }
        let next = match (self.flavor, k) {
            (Flavor::Dual, 1) => (d as u128).saturating_add(1),
            _ => (d as u128).saturating_mul(len_k).saturating_add((self.n as u128).saturating_mul(len_prev)),
        };
        self.lens.push(next);
        Ok(())
    }
}

/// Saturating lengths `|Σ_0|, ..., |Σ_k|` (or the dual lengths).
pub fn sigma_lengths(digits: &[Digit], n: u64, k: usize, flavor: Flavor) -> Result<Vec<u128>> {
    check_n(n)?;
    check_digits(digits)?;
    if k >= 2 && digits.len() < k - 1 {
        return Err(NcfError::Argument(format!("Σ_{k} needs {} digits, have {}", k - 1, digits.len())));
    }
    let mut lens = vec![1u128, 1];
    for j in 1..k {
        let d = digits[j - 1] as u128;
        let next = match (flavor, j) {
            (Flavor::Dual, 1) => d + 1,
            _ => d.saturating_mul(lens[j]).saturating_add((n as u128).saturating_mul(lens[j - 1])),
        };
        lens.push(next);
    }
    lens.truncate(k + 1);
    Ok(lens)
}

/// `Σ_k` (primal) or `Σ̂_k` (dual), built by block concatenation.
pub fn sigma_word(digits: &[Digit], n: u64, k: usize, flavor: Flavor) -> Result<BinaryWord> {
    check_n(n)?;
    check_digits(digits)?;
    if k == 0 {
        return Ok(BinaryWord::from_vec_unchecked(vec![1]));
    }
    if digits.len() + 1 < k {
        return Err(NcfError::Argument(format!("Σ_{k} needs {} digits, have {}", k - 1, digits.len())));
    }
    let mut b = SigmaBuilder::new(digits, n, flavor, usize::MAX);
    while b.k() < k {
        b.step()?;
    }
    Ok(BinaryWord::from_vec_unchecked(b.buf))
}

/// Prefix of length `min_len` of `ω(x,N)` or `ŵ(x,N)`, together with the index
/// `k` of the first `Σ_k` long enough to contain it.
pub fn limit_prefix_with_depth(digits: &[Digit], n: u64, min_len: usize, flavor: Flavor) -> Result<(BinaryWord, usize)> {
    check_n(n)?;
    check_digits(digits)?;
    if min_len == 0 {
        return Err(NcfError::Argument("prefix length must be positive".into()));
    }
    let mut b = SigmaBuilder::new(digits, n, flavor, min_len);
    while *b.lens.last().unwrap() < min_len as u128 {
        b.step().map_err(|_| {
            NcfError::InsufficientDigits(format!(
                "{} digits give only {} symbols, {min_len} requested",
                digits.len(),
                b.buf.len()
            ))
        })?;
    }
    let k = b.k();
    Ok((BinaryWord::from_vec_unchecked(b.buf), k))
}

pub fn limit_prefix(digits: &[Digit], n: u64, min_len: usize, flavor: Flavor) -> Result<BinaryWord> {
    limit_prefix_with_depth(digits, n, min_len, flavor).map(|(w, _)| w)
}

/// Pulls digits from `source`, doubling the request until the limit word
/// prefix of length `min_len` can be built.
pub fn digits_for_length(source: &DigitSource, n: u64, min_len: usize, flavor: Flavor) -> Result<DigitSequence> {
    let mut count = 16usize;
    loop {
        let seq = source.take(n, count)?;
        let lens = sigma_lengths(&seq, n, seq.len() + 1, flavor)?;
        if *lens.last().unwrap() >= min_len as u128 {
            return Ok(seq);
        }
        if seq.len() < count {
            return Err(NcfError::InsufficientDigits(format!(
                "source ends after {} digits, giving {} symbols; {min_len} requested",
                seq.len(),
                lens.last().unwrap()
            )));
        }
        count *= 2;
    }
}

/// `(S_k, T_k)` for the primal word or `(Ŝ_k, T̂_k)` for the dual word:
/// `S_k = Σ_k^{d_k} ... Σ_1^{d_1}`, `T_k = Σ_k^{N-1} S_k`, and in the primal
/// case `S_0` empty, `T_0 = 1^{N-1}`.
pub fn special_words(digits: &[Digit], n: u64, k: usize, flavor: Flavor) -> Result<(BinaryWord, BinaryWord)> {
    check_n(n)?;
    if k == 0 && flavor == Flavor::Dual {
        return Err(NcfError::Argument("dual special words start at k = 1".into()));
    }
    if digits.len() < k {
        return Err(NcfError::Argument(format!("special words of index {k} need {k} digits, have {}", digits.len())));
    }
    let top = sigma_word(digits, n, k.max(1), flavor)?;
    let mut s = Vec::new();
    for j in (1..=k).rev() {
        let len = sigma_lengths(digits, n, j, flavor)?[j] as usize;
        let piece = &top.as_slice()[..len];
        for _ in 0..digits[j - 1] {
            s.extend_from_slice(piece);
        }
    }
    let sigma_k: &[u8] = if k == 0 { &[1] } else { top.as_slice() };
    let mut t = sigma_k.repeat((n - 1) as usize);
    t.extend_from_slice(&s);
    Ok((BinaryWord::from_vec_unchecked(s), BinaryWord::from_vec_unchecked(t)))
}

/// Band thresholds `(s_k, t_k)` for `k = 0..=k_max` (primal, with `s_0 = 0`,
/// `t_0 = N-1`) or `(ŝ_k, t̂_k)` for `k = 1..=k_max` (dual, index 0 holds
/// `(0, 0)` so that `t̂_0 = 0`). Saturating.
pub fn thresholds(digits: &[Digit], n: u64, k_max: usize, flavor: Flavor) -> Result<Vec<(u128, u128)>> {
    check_n(n)?;
    if digits.len() < k_max {
        return Err(NcfError::Argument(format!("thresholds up to {k_max} need {k_max} digits, have {}", digits.len())));
    }
    let lens = sigma_lengths(digits, n, k_max.max(1), flavor)?;
    let mut out = vec![match flavor {
        Flavor::Primal => (0, (n - 1) as u128),
        Flavor::Dual => (0, 0),
    }];
    let mut s: u128 = 0;
    for k in 1..=k_max {
        s = s.saturating_add((digits[k - 1] as u128).saturating_mul(lens[k]));
        let t = s.saturating_add(((n - 1) as u128).saturating_mul(lens[k]));
        out.push((s, t));
    }
    Ok(out)
}

/// `M_{σ_1} ... M_{σ_count}` for the primal rules; equals
/// `[[q_n, q_{n-1}], [p_n, p_{n-1}]]`.
pub fn matrix_product(digits: &[Digit], n: u64, count: usize) -> Result<Matrix2> {
    check_n(n)?;
    check_digits(digits)?;
    if digits.len() < count {
        return Err(NcfError::Argument(format!("need {count} digits, have {}", digits.len())));
    }
    Ok(digits[..count]
        .iter()
        .fold(Matrix2::identity(), |acc, &d| &acc * &Matrix2::new(d, 1, n, 0)))
}

/// Rule used by the slow directive sequence: decrement symbols map to `τ_B`,
/// shift symbols to `τ_D`.
pub fn slow_rule(symbol: SlowSymbol, n: u64) -> SubstitutionRule {
    match symbol {
        SlowSymbol::Decrement => SubstitutionRule::tau_b(n),
        SlowSymbol::Shift => SubstitutionRule::tau_d(n),
    }
}

/// Prefix of length `min_len` of the limit word of `ρ_1 ∘ ρ_2 ∘ ...` where
/// `ρ_i` is `τ_B` or `τ_D` according to the `i`-th slow symbol.
pub fn slow_limit_prefix(slow: &[SlowSymbol], n: u64, min_len: usize) -> Result<BinaryWord> {
    check_n(n)?;
    if min_len == 0 {
        return Err(NcfError::Argument("prefix length must be positive".into()));
    }
    // p = product of incidence matrices; |ρ_1...ρ_m(0)| is its first column sum
    let mut p = [[1u128, 0], [0, 1]];
    let mut depth = None;
    for (i, &sym) in slow.iter().enumerate() {
        let m: [[u128; 2]; 2] = match sym {
            SlowSymbol::Decrement => [[n as u128, 1], [0, n as u128]],
            SlowSymbol::Shift => [[n as u128, 1], [n as u128, 0]],
        };
        let mut q = [[0u128; 2]; 2];
        for (r, row) in q.iter_mut().enumerate() {
            for (c, cell) in row.iter_mut().enumerate() {
                *cell = p[r][0].saturating_mul(m[0][c]).saturating_add(p[r][1].saturating_mul(m[1][c]));
            }
        }
        p = q;
        if p[0][0].saturating_add(p[1][0]) >= min_len as u128 {
            depth = Some(i + 1);
            break;
        }
    }
    let depth = depth.ok_or_else(|| {
        NcfError::InsufficientDigits(format!("{} slow symbols do not reach length {min_len}", slow.len()))
    })?;
    let mut w = BinaryWord::from_vec_unchecked(vec![0]);
    for &sym in slow[..depth].iter().rev() {
        w = slow_rule(sym, n).apply_truncated(&w, min_len);
    }
    Ok(w)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expansion::{convergents, slow_digits};
    use num_bigint::BigInt;

    fn arith(count: usize) -> Vec<Digit> {
        (2..2 + count as u64).collect()
    }

    fn s(w: &BinaryWord) -> String {
        w.to_string()
    }

    #[test]
    fn printed_sigma_words() {
        let d = arith(5);
        assert_eq!(s(&sigma_word(&d, 2, 0, Flavor::Primal).unwrap()), "1");
        assert_eq!(s(&sigma_word(&d, 2, 1, Flavor::Primal).unwrap()), "0");
        assert_eq!(s(&sigma_word(&d, 2, 2, Flavor::Primal).unwrap()), "0011");
        assert_eq!(s(&sigma_word(&d, 2, 3, Flavor::Primal).unwrap()), "00110011001100");
        assert_eq!(s(&sigma_word(&d, 2, 2, Flavor::Dual).unwrap()), "001");
        assert_eq!(s(&sigma_word(&d, 2, 3, Flavor::Dual).unwrap()), "00100100100");
        assert!(matches!(sigma_word(&[2], 2, 4, Flavor::Primal), Err(NcfError::Argument(_))));
    }

    #[test]
    fn sigma_matches_letterwise_composition() {
        let d = vec![3, 2, 4, 2, 5];
        for flavor in [Flavor::Primal, Flavor::Dual] {
            for k in 1..=5 {
                let seed = BinaryWord::from_vec_unchecked(vec![0]);
                let expect = d[..k - 1].iter().rev().fold(seed, |w, &dj| flavor.rule(dj, 2).apply(&w));
                assert_eq!(sigma_word(&d, 2, k, flavor).unwrap(), expect, "{flavor} k={k}");
                assert_eq!(sigma_lengths(&d, 2, k, flavor).unwrap()[k], expect.len() as u128);
            }
        }
    }

    #[test]
    fn twenty_symbol_prefixes() {
        let d = arith(10);
        assert_eq!(s(&limit_prefix(&d, 2, 20, Flavor::Primal).unwrap()), "00110011001100001100");
        assert_eq!(s(&limit_prefix(&d, 2, 20, Flavor::Dual).unwrap()), "00100100100001001001");
        assert_eq!(s(&limit_prefix(&[1; 10], 1, 13, Flavor::Primal).unwrap()), "0100101001001");
    }

    #[test]
    fn fibonacci_oracle() {
        let mut w = vec![0u8];
        while w.len() < 500 {
            w = w.iter().flat_map(|&c| if c == 0 { vec![0, 1] } else { vec![0] }).collect();
        }
        let got = limit_prefix(&[1; 30], 1, 500, Flavor::Primal).unwrap();
        assert_eq!(got.as_slice(), &w[..500]);
    }

    #[test]
    fn exhausted_digits() {
        assert!(matches!(limit_prefix(&[2, 3], 2, 1000, Flavor::Primal), Err(NcfError::InsufficientDigits(_))));
        let src: DigitSource = "rational:3/4".parse().unwrap();
        assert!(matches!(digits_for_length(&src, 2, 1000, Flavor::Dual), Err(NcfError::InsufficientDigits(_))));
        let src: DigitSource = "arith:start=2,step=1".parse().unwrap();
        let d = digits_for_length(&src, 2, 100_000, Flavor::Primal).unwrap();
        assert_eq!(limit_prefix(&d, 2, 100_000, Flavor::Primal).unwrap().len(), 100_000);
    }

    #[test]
    fn special_word_examples() {
        let d = arith(5);
        let (s1, t1) = special_words(&d, 2, 1, Flavor::Dual).unwrap();
        assert_eq!((s(&s1), s(&t1)), ("00".into(), "000".into()));
        let (s2, t2) = special_words(&d, 2, 2, Flavor::Dual).unwrap();
        assert_eq!(s(&s2), "00100100100");
        assert_eq!(t2.len(), 14);
        assert_eq!(s(&t2), "00100100100100");
        for n in 1..5 {
            let (s0, t0) = special_words(&[n + 1], n, 0, Flavor::Primal).unwrap();
            assert!(s0.is_empty());
            assert_eq!(t0, BinaryWord::repeat_letter(1, (n - 1) as usize));
        }
        assert!(special_words(&d, 2, 0, Flavor::Dual).is_err());
        assert!(special_words(&d, 2, 6, Flavor::Primal).is_err());
        let th = thresholds(&d, 2, 2, Flavor::Dual).unwrap();
        assert_eq!(th, vec![(0, 0), (2, 3), (11, 14)]);
        let th = thresholds(&d, 2, 1, Flavor::Primal).unwrap();
        assert_eq!(th, vec![(0, 1), (2, 3)]);
    }

    #[test]
    fn thresholds_match_word_lengths() {
        let d = vec![3, 4, 3, 5];
        for flavor in [Flavor::Primal, Flavor::Dual] {
            let th = thresholds(&d, 3, 4, flavor).unwrap();
            for (k, &want) in th.iter().enumerate().skip(1) {
                let (sw, tw) = special_words(&d, 3, k, flavor).unwrap();
                assert_eq!((sw.len() as u128, tw.len() as u128), want);
            }
        }
    }

    #[test]
    fn matrix_products() {
        assert_eq!(matrix_product(&[2, 3], 2, 2).unwrap(), Matrix2::new(8, 2, 6, 2));
        assert_eq!(matrix_product(&[2, 3], 2, 0).unwrap(), Matrix2::identity());
        assert_eq!(matrix_product(&[2, 3], 2, 2).unwrap().det(), BigInt::from(4));
        let d = vec![3, 5, 2, 7, 4, 4];
        let cs = convergents(&d, 2, 6).unwrap();
        for k in 2..=6 {
            let m = matrix_product(&d, 2, k).unwrap();
            assert_eq!(m, Matrix2 { m00: cs[k - 1].q.clone(), m01: cs[k - 2].q.clone(), m10: cs[k - 1].p.clone(), m11: cs[k - 2].p.clone() });
        }
    }

    #[test]
    fn sigma_abelianization_is_previous_convergent() {
        let d = vec![3, 5, 2, 7, 4, 4];
        let cs = convergents(&d, 2, 6).unwrap();
        for k in 2..=7 {
            let ab = sigma_word(&d, 2, k, Flavor::Primal).unwrap().abelianize();
            assert_eq!((BigInt::from(ab.count0), BigInt::from(ab.count1)), (cs[k - 2].q.clone(), cs[k - 2].p.clone()));
        }
    }

    #[test]
    fn slow_prefixes() {
        let shift = vec![SlowSymbol::Shift; 10];
        assert_eq!(s(&slow_limit_prefix(&shift, 2, 8).unwrap()), "00110011");
        assert_eq!(s(&slow_limit_prefix(&[SlowSymbol::Decrement], 2, 2).unwrap()), "00");
        assert!(slow_limit_prefix(&[SlowSymbol::Decrement; 50], 1, 2).is_err());
        // nested: longer requests extend shorter ones
        let slow = slow_digits(&[4, 2, 3, 5, 2, 2, 6, 3, 2, 4, 3, 2], 2, 40).unwrap();
        let a = slow_limit_prefix(&slow, 2, 50).unwrap();
        let b = slow_limit_prefix(&slow, 2, 300).unwrap();
        assert!(a.is_prefix_of(&b));
    }

    #[test]
    fn tau_b_tau_d_identity() {
        for n in [1u64, 2, 3, 5] {
            let b = SubstitutionRule::tau_b(n).incidence();
            let dm = SubstitutionRule::tau_d(n).incidence();
            for d in n..=n + 20 {
                let lhs = &b.pow(d - n) * &dm;
                let rhs = SubstitutionRule::primal(d, n).incidence().scale(&BigInt::from(n).pow((d - n) as u32));
                assert_eq!(lhs, rhs);
            }
        }
        assert_eq!(&SubstitutionRule::tau_b(2).incidence() * &SubstitutionRule::tau_d(2).incidence(), Matrix2::new(6, 2, 4, 0));
    }

    #[test]
    fn tau_correspondence_and_shift() {
        let d = vec![3, 2, 5, 4, 2, 3, 6, 2, 2, 3, 4, 5, 2, 3, 2, 4, 3, 2, 2, 5];
        let n = 2;
        let primal = limit_prefix(&d, n, 5000, Flavor::Primal).unwrap();
        let dual = limit_prefix(&d, n, 5000, Flavor::Dual).unwrap();
        assert_eq!(SubstitutionRule::tau(n).apply_truncated(&dual, 5000), primal);
        let shifted = limit_prefix(&d[1..], n, 5000, Flavor::Primal).unwrap();
        assert_eq!(SubstitutionRule::primal(d[0], n).apply_truncated(&shifted, 5000), primal);
        let shifted = limit_prefix(&d[1..], n, 5000, Flavor::Dual).unwrap();
        assert_eq!(SubstitutionRule::dual(d[0], n).apply_truncated(&shifted, 5000), dual);
    }

    #[test]
    fn prefix_nesting() {
        let d = vec![4, 3, 3, 5, 4, 3];
        for flavor in [Flavor::Primal, Flavor::Dual] {
            for k in 1..6 {
                let a = sigma_word(&d, 3, k, flavor).unwrap();
                let b = sigma_word(&d, 3, k + 1, flavor).unwrap();
                assert!(a.is_prefix_of(&b));
            }
        }
    }
}
