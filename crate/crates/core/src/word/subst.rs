use std::fmt;
use std::ops::Mul;

use num_bigint::BigInt;
use num_traits::Signed;
use serde::ser::SerializeSeq;
use serde::{Deserialize, Serialize};

use super::binary::{AbelianVector, BinaryWord};

/// 2×2 integer matrix. Entry `(i, j)` of an incidence matrix counts letter
/// `i` in the image of letter `j`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Matrix2 {
    pub m00: BigInt,
    pub m01: BigInt,
    pub m10: BigInt,
    pub m11: BigInt,
}

impl Matrix2 {
    pub fn new(m00: impl Into<BigInt>, m01: impl Into<BigInt>, m10: impl Into<BigInt>, m11: impl Into<BigInt>) -> Self {
        Matrix2 { m00: m00.into(), m01: m01.into(), m10: m10.into(), m11: m11.into() }
    }

    pub fn identity() -> Self {
        Matrix2::new(1, 0, 0, 1)
    }

    pub fn det(&self) -> BigInt {
        &self.m00 * &self.m11 - &self.m01 * &self.m10
    }

    pub fn transpose(&self) -> Self {
        Matrix2 { m00: self.m00.clone(), m01: self.m10.clone(), m10: self.m01.clone(), m11: self.m11.clone() }
    }

    pub fn pow(&self, mut e: u64) -> Self {
        let mut base = self.clone();
        let mut acc = Matrix2::identity();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }

    pub fn scale(&self, k: &BigInt) -> Self {
        Matrix2 { m00: &self.m00 * k, m01: &self.m01 * k, m10: &self.m10 * k, m11: &self.m11 * k }
    }

    pub fn apply(&self, v: &AbelianVector) -> (BigInt, BigInt) {
        let (x, y) = (BigInt::from(v.count0), BigInt::from(v.count1));
        (&self.m00 * &x + &self.m01 * &y, &self.m10 * &x + &self.m11 * &y)
    }

    pub fn rows(&self) -> [[&BigInt; 2]; 2] {
        [[&self.m00, &self.m01], [&self.m10, &self.m11]]
    }
}

impl Mul for &Matrix2 {
    type Output = Matrix2;
    fn mul(self, r: &Matrix2) -> Matrix2 {
        Matrix2 {
            m00: &self.m00 * &r.m00 + &self.m01 * &r.m10,
            m01: &self.m00 * &r.m01 + &self.m01 * &r.m11,
            m10: &self.m10 * &r.m00 + &self.m11 * &r.m10,
            m11: &self.m10 * &r.m01 + &self.m11 * &r.m11,
        }
    }
}

impl fmt::Display for Matrix2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[[{}, {}], [{}, {}]]", self.m00, self.m01, self.m10, self.m11)
    }
}

/// JSON form: `[["m00","m01"],["m10","m11"]]`.
impl Serialize for Matrix2 {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(2))?;
        for row in self.rows() {
            seq.serialize_element(&[row[0].to_string(), row[1].to_string()])?;
        }
        seq.end()
    }
}

impl<'de> Deserialize<'de> for Matrix2 {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let rows = <[[String; 2]; 2]>::deserialize(d)?;
        let p = |s: &str| s.parse::<BigInt>().map_err(serde::de::Error::custom);
        Ok(Matrix2 { m00: p(&rows[0][0])?, m01: p(&rows[0][1])?, m10: p(&rows[1][0])?, m11: p(&rows[1][1])? })
    }
}

/// Which substitution a rule is.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RuleLabel {
    /// `0 -> 0^d 1^N, 1 -> 0`
    Primal { d: u64, n: u64 },
    /// `0 -> 0^d 1, 1 -> 0^N`
    Dual { d: u64, n: u64 },
    /// `0 -> 0, 1 -> 1^N`
    Tau { n: u64 },
    /// `0 -> 0^N, 1 -> 0 1^N`
    TauB { n: u64 },
    /// `0 -> 0^N 1^N, 1 -> 0`
    TauD { n: u64 },
}

/// Non-erasing substitution on `{0, 1}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubstitutionRule {
    pub image0: BinaryWord,
    pub image1: BinaryWord,
    pub label: RuleLabel,
}

fn blocks(parts: &[(u8, u64)]) -> BinaryWord {
    let mut v = Vec::new();
    for &(letter, k) in parts {
        v.extend(std::iter::repeat_n(letter, k as usize));
    }
    BinaryWord::from_vec_unchecked(v)
}

impl SubstitutionRule {
    pub fn primal(d: u64, n: u64) -> Self {
        SubstitutionRule { image0: blocks(&[(0, d), (1, n)]), image1: blocks(&[(0, 1)]), label: RuleLabel::Primal { d, n } }
    }

    pub fn dual(d: u64, n: u64) -> Self {
        SubstitutionRule { image0: blocks(&[(0, d), (1, 1)]), image1: blocks(&[(0, n)]), label: RuleLabel::Dual { d, n } }
    }

    pub fn tau(n: u64) -> Self {
        SubstitutionRule { image0: blocks(&[(0, 1)]), image1: blocks(&[(1, n)]), label: RuleLabel::Tau { n } }
    }

    pub fn tau_b(n: u64) -> Self {
        SubstitutionRule { image0: blocks(&[(0, n)]), image1: blocks(&[(0, 1), (1, n)]), label: RuleLabel::TauB { n } }
    }

    pub fn tau_d(n: u64) -> Self {
        SubstitutionRule { image0: blocks(&[(0, n), (1, n)]), image1: blocks(&[(0, 1)]), label: RuleLabel::TauD { n } }
    }

    pub fn image(&self, letter: u8) -> &BinaryWord {
        if letter == 0 {
            &self.image0
        } else {
            &self.image1
        }
    }

    /// Letter-wise image of `w`.
    pub fn apply(&self, w: &BinaryWord) -> BinaryWord {
        self.apply_truncated(w, usize::MAX)
    }

    /// Image of `w`, cut off once `limit` symbols have been produced.
    pub fn apply_truncated(&self, w: &BinaryWord, limit: usize) -> BinaryWord {
        let ab = w.abelianize();
        let full = ab.count0 as usize * self.image0.len() + ab.count1 as usize * self.image1.len();
        let mut out = Vec::with_capacity(full.min(limit));
        let (i0, i1) = (self.image0.as_slice(), self.image1.as_slice());
        for &s in w.as_slice() {
            if out.len() >= limit {
                break;
            }
            out.extend_from_slice(if s == 0 { i0 } else { i1 });
        }
        out.truncate(limit);
        BinaryWord::from_vec_unchecked(out)
    }

    pub fn incidence(&self) -> Matrix2 {
        let a0 = self.image0.abelianize();
        let a1 = self.image1.abelianize();
        Matrix2::new(a0.count0, a1.count0, a0.count1, a1.count1)
    }
}

impl Matrix2 {
    pub fn is_nonnegative(&self) -> bool {
        self.rows().iter().flatten().all(|e| !e.is_negative())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn w(s: &str) -> BinaryWord {
        s.parse().unwrap()
    }

    #[test]
    fn images() {
        assert_eq!(SubstitutionRule::primal(2, 2).apply(&w("1")), w("0"));
        assert_eq!(SubstitutionRule::dual(2, 2).apply(&w("0")), w("001"));
        assert_eq!(SubstitutionRule::tau(2).apply(&w("001")), w("0011"));
        assert_eq!(SubstitutionRule::tau_b(2).apply(&w("01")), w("00011"));
        assert_eq!(SubstitutionRule::tau_d(2).apply(&w("01")), w("00110"));
        assert_eq!(SubstitutionRule::primal(3, 2).apply_truncated(&w("00"), 4), w("0001"));
    }

    #[test]
    fn incidence_matrices() {
        assert_eq!(SubstitutionRule::primal(3, 2).incidence(), Matrix2::new(3, 1, 2, 0));
        assert_eq!(SubstitutionRule::dual(3, 2).incidence(), Matrix2::new(3, 2, 1, 0));
        assert_eq!(SubstitutionRule::dual(3, 2).incidence(), SubstitutionRule::primal(3, 2).incidence().transpose());
        assert_eq!(SubstitutionRule::tau_b(2).incidence(), Matrix2::new(2, 1, 0, 2));
        assert_eq!(SubstitutionRule::tau_d(2).incidence(), Matrix2::new(2, 1, 2, 0));
        assert_eq!(SubstitutionRule::tau(3).incidence(), Matrix2::new(1, 0, 0, 3));
        assert_eq!(SubstitutionRule::primal(5, 3).incidence().det(), BigInt::from(-3));
        assert_eq!(SubstitutionRule::dual(5, 3).incidence().det(), BigInt::from(-3));
    }

    #[test]
    fn matrix_json() {
        let m = Matrix2::new(8, 2, 6, 2);
        let js = serde_json::to_string(&m).unwrap();
        assert_eq!(js, r#"[["8","2"],["6","2"]]"#);
        assert_eq!(serde_json::from_str::<Matrix2>(&js).unwrap(), m);
        assert!(m.is_nonnegative());
        assert_eq!(Matrix2::new(2, 1, 0, 2).pow(3), Matrix2::new(8, 12, 0, 8));
    }

    fn rules() -> impl Strategy<Value = SubstitutionRule> {
        (0usize..5, 1u64..8, 1u64..5).prop_map(|(kind, d, n)| match kind {
            0 => SubstitutionRule::primal(d, n),
            1 => SubstitutionRule::dual(d, n),
            2 => SubstitutionRule::tau(n),
            3 => SubstitutionRule::tau_b(n),
            _ => SubstitutionRule::tau_d(n),
        })
    }

    proptest! {
        #[test]
        fn abelianization_commutes(rule in rules(), bits in prop::collection::vec(0u8..2, 0..100)) {
            let word = BinaryWord::from_symbols(bits).unwrap();
            let image = rule.apply(&word).abelianize();
            let (c0, c1) = rule.incidence().apply(&word.abelianize());
            prop_assert_eq!((BigInt::from(image.count0), BigInt::from(image.count1)), (c0, c1));
        }
    }
}
