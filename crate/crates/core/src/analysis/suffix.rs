//! Suffix array and LCP index over a binary word.

/// Suffix array with Kasai LCP array.
///
/// `lcp[i]` is the longest common prefix of the suffixes at `sa[i - 1]` and
/// `sa[i]`; `lcp[0] = 0`.
pub struct FactorIndex<'a> {
    text: &'a [u8],
    sa: Vec<u32>,
    lcp: Vec<u32>,
}

/// Prefix doubling with counting sort on ranks.
fn suffix_array(text: &[u8]) -> Vec<u32> {
    let n = text.len();
    if n == 0 {
        return Vec::new();
    }
    let mut rank: Vec<u32> = text.iter().map(|&c| c as u32).collect();
    let mut sa: Vec<u32> = (0..n as u32).collect();
    sa.sort_by_key(|&i| rank[i as usize]);
    let mut tmp = vec![0u32; n];
    let mut order = Vec::with_capacity(n);
    let mut count = vec![0usize; n.max(2) + 1];
    let mut k = 1usize;
    // ranks from the initial sort
    {
        let mut r = 0;
        tmp[sa[0] as usize] = 0;
        for i in 1..n {
            if rank[sa[i] as usize] != rank[sa[i - 1] as usize] {
                r += 1;
            }
            tmp[sa[i] as usize] = r;
        }
        std::mem::swap(&mut rank, &mut tmp);
        if r as usize == n - 1 {
            return sa;
        }
    }
    loop {
        // order by second key: suffixes shorter than k first, then by sa
        order.clear();
        order.extend((n - k.min(n)) as u32..n as u32);
        order.extend(sa.iter().filter(|&&i| i as usize >= k).map(|&i| i - k as u32));
        // stable counting sort by first key
        count.iter_mut().for_each(|c| *c = 0);
        for &i in &order {
            count[rank[i as usize] as usize + 1] += 1;
        }
        for r in 1..count.len() {
            count[r] += count[r - 1];
        }
        for &i in &order {
            let slot = &mut count[rank[i as usize] as usize];
            sa[*slot] = i;
            *slot += 1;
        }
        let key = |i: u32| {
            let i = i as usize;
            (rank[i], if i + k < n { rank[i + k] as i64 } else { -1 })
        };
        let mut r = 0u32;
        tmp[sa[0] as usize] = 0;
        for i in 1..n {
            if key(sa[i]) != key(sa[i - 1]) {
                r += 1;
            }
            tmp[sa[i] as usize] = r;
        }
        std::mem::swap(&mut rank, &mut tmp);
        if r as usize == n - 1 {
            return sa;
        }
        k *= 2;
    }
}

fn kasai(text: &[u8], sa: &[u32]) -> Vec<u32> {
    let n = text.len();
    let mut rank = vec![0u32; n];
    for (i, &s) in sa.iter().enumerate() {
        rank[s as usize] = i as u32;
    }
    let mut lcp = vec![0u32; n];
    let mut h = 0usize;
    for i in 0..n {
        let r = rank[i] as usize;
        if r > 0 {
            let j = sa[r - 1] as usize;
            while i + h < n && j + h < n && text[i + h] == text[j + h] {
                h += 1;
            }
            lcp[r] = h as u32;
            h = h.saturating_sub(1);
        } else {
            h = 0;
        }
    }
    lcp
}

impl<'a> FactorIndex<'a> {
    pub fn new(text: &'a [u8]) -> Self {
        assert!(text.len() < u32::MAX as usize, "word too long for 32-bit suffix indices");
        let sa = suffix_array(text);
        let lcp = kasai(text, &sa);
        FactorIndex { text, sa, lcp }
    }

    pub fn text(&self) -> &[u8] {
        self.text
    }

    pub fn suffix_array(&self) -> &[u32] {
        &self.sa
    }

    pub fn lcp(&self) -> &[u32] {
        &self.lcp
    }

    /// Left-extension mask of the occurrence at `pos`: bit `a` set when the
    /// preceding letter is `a`.
    fn pred_mask(&self, pos: u32) -> u8 {
        if pos == 0 {
            0
        } else {
            1 << self.text[pos as usize - 1]
        }
    }

    /// Number of distinct factors of each length `0..=n_max`.
    pub fn factor_counts(&self, n_max: usize) -> Vec<u64> {
        let len = self.text.len();
        let mut diff = vec![0i64; n_max + 2];
        for (i, &s) in self.sa.iter().enumerate() {
            // suffix i is the first occurrence in SA order of its prefixes of
            // length lcp[i]+1 ..= suffix length
            let lo = self.lcp[i] as usize + 1;
            let hi = (len - s as usize).min(n_max);
            if lo <= hi {
                diff[lo] += 1;
                diff[hi + 1] -= 1;
            }
        }
        let mut out = Vec::with_capacity(n_max + 1);
        out.push(1);
        let mut acc = 0i64;
        for d in &diff[1..=n_max] {
            acc += d;
            out.push(acc as u64);
        }
        out
    }

    /// Number of left special factors of each length `0..=n_max`, from a
    /// bottom-up walk over the LCP intervals.
    pub fn left_special_counts(&self, n_max: usize) -> Vec<u64> {
        let n = self.sa.len();
        let mut diff = vec![0i64; n_max + 2];
        let mut add = |lo: usize, hi: usize| {
            let hi = hi.min(n_max);
            if lo <= hi {
                diff[lo] += 1;
                diff[hi + 1] -= 1;
            }
        };
        // (lcp value, union of predecessor masks)
        let mut stack: Vec<(u32, u8)> = vec![(0, 0)];
        let mut root_mask = 0u8;
        for i in 1..=n {
            let h = if i < n { self.lcp[i] } else { 0 };
            let mut carry = self.pred_mask(self.sa[i - 1]);
            root_mask |= carry;
            while stack.last().unwrap().0 > h {
                let (l, m) = stack.pop().unwrap();
                let m = m | carry;
                let parent = h.max(stack.last().unwrap().0);
                if m == 3 {
                    add(parent as usize + 1, l as usize);
                }
                carry = m;
            }
            let top = stack.last_mut().unwrap();
            if top.0 < h {
                stack.push((h, carry));
            } else {
                top.1 |= carry;
            }
        }
        let mut out = Vec::with_capacity(n_max + 1);
        out.push(u64::from(root_mask == 3));
        let mut acc = 0i64;
        for d in &diff[1..=n_max] {
            acc += d;
            out.push(acc as u64);
        }
        out
    }

    /// Start positions of one occurrence of each left special factor of length `n`.
    pub fn left_special_at(&self, n: usize) -> Vec<usize> {
        let len = self.text.len();
        let mut out = Vec::new();
        let mut i = 0;
        while i < self.sa.len() {
            if len - (self.sa[i] as usize) < n {
                i += 1;
                continue;
            }
            let mut j = i + 1;
            let mut mask = self.pred_mask(self.sa[i]);
            while j < self.sa.len() && self.lcp[j] as usize >= n {
                mask |= self.pred_mask(self.sa[j]);
                j += 1;
            }
            if mask == 3 {
                out.push(self.sa[i] as usize);
            }
            i = j;
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::collections::HashSet;

    fn naive_counts(w: &[u8], n_max: usize) -> (Vec<u64>, Vec<u64>) {
        let mut p = Vec::new();
        let mut ls = Vec::new();
        for n in 0..=n_max {
            let f: HashSet<&[u8]> = (0..=w.len().saturating_sub(n)).filter(|&i| i + n <= w.len()).map(|i| &w[i..i + n]).collect();
            p.push(if n <= w.len() { f.len() as u64 } else { 0 });
            let ext: HashSet<&[u8]> = (1..w.len()).filter(|&i| i + n <= w.len()).map(|i| &w[i - 1..i + n]).collect();
            let count = f.iter().filter(|u| {
                let mut a = u8::MAX;
                let mut both = false;
                for e in &ext {
                    if &e[1..] == **u {
                        if a != u8::MAX && a != e[0] {
                            both = true;
                        }
                        a = e[0];
                    }
                }
                both
            });
            ls.push(count.count() as u64);
        }
        (p, ls)
    }

    #[test]
    fn suffix_array_sorted() {
        let w = [0u8, 1, 1, 0, 1, 0, 0, 1, 0];
        let idx = FactorIndex::new(&w);
        let sa = idx.suffix_array();
        for pair in sa.windows(2) {
            assert!(w[pair[0] as usize..] < w[pair[1] as usize..]);
        }
    }

    proptest! {
        #[test]
        fn matches_naive(bits in prop::collection::vec(0u8..2, 1..120), n_max in 0usize..20) {
            let idx = FactorIndex::new(&bits);
            let (p, ls) = naive_counts(&bits, n_max);
            prop_assert_eq!(idx.factor_counts(n_max), p);
            prop_assert_eq!(idx.left_special_counts(n_max), ls.clone());
            for (n, &c) in ls.iter().enumerate() {
                prop_assert_eq!(idx.left_special_at(n).len() as u64, c);
            }
        }

        #[test]
        fn sa_is_sorted(bits in prop::collection::vec(0u8..2, 0..300)) {
            let idx = FactorIndex::new(&bits);
            let sa = idx.suffix_array();
            prop_assert_eq!(sa.len(), bits.len());
            for pair in sa.windows(2) {
                prop_assert!(bits[pair[0] as usize..] < bits[pair[1] as usize..]);
            }
        }
    }
}
