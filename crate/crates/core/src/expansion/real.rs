use std::cmp::Ordering;
use std::fmt;

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{NcfError, Result};

/// A real quadratic surd `(a + b·√d) / c` in canonical form.
///
/// Canonical means: `c > 0`, `gcd(a, b, c) = 1`, `b != 0`, and `d > 1` is
/// square-free (square factors of the radicand are folded into `b`). Two
/// canonical surds are numerically equal iff their fields are equal, which is
/// what makes periodicity of `T_N` orbits detectable by plain `==`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct QuadSurd {
    a: BigInt,
    b: BigInt,
    c: BigInt,
    d: BigInt,
}

/// Exact input value for the NCF algorithm.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum ExactReal {
    Rational(BigRational),
    Surd(QuadSurd),
}

/// Splits `n` into `(s, r)` with `n = s²·r` and `r` square-free.
fn square_free_split(n: &BigInt) -> (BigInt, BigInt) {
    let mut rest = n.clone();
    let mut root = BigInt::one();
    let mut p = BigInt::from(2u32);
    while &p * &p <= rest {
        let sq = &p * &p;
        while (&rest % &sq).is_zero() {
            rest /= &sq;
            root *= &p;
        }
        p += if p == BigInt::from(2u32) { 1u32 } else { 2u32 };
    }
    (root, rest)
}

/// Sign of `a + b·√d` for `d >= 0`, decided by integer comparisons only.
fn sign_of(a: &BigInt, b: &BigInt, d: &BigInt) -> Ordering {
    let a_sign = a.cmp(&BigInt::zero());
    let b_sign = if d.is_zero() { Ordering::Equal } else { b.cmp(&BigInt::zero()) };
    match (a_sign, b_sign) {
        (Ordering::Equal, s) | (s, Ordering::Equal) => s,
        (Ordering::Greater, Ordering::Greater) => Ordering::Greater,
        (Ordering::Less, Ordering::Less) => Ordering::Less,
        (Ordering::Greater, Ordering::Less) => (a * a).cmp(&(b * b * d)),
        (Ordering::Less, Ordering::Greater) => (b * b * d).cmp(&(a * a)),
    }
}

impl QuadSurd {
    /// Builds the canonical form of `(a + b·√d) / c`.
    ///
    /// Fails when `c = 0`, `d < 0`, `b = 0`, or `d` is a perfect square: those
    /// values are rational and belong in [`ExactReal::Rational`].
    pub fn new(a: BigInt, b: BigInt, c: BigInt, d: BigInt) -> Result<Self> {
        if c.is_zero() {
            return Err(NcfError::Representation("surd denominator c is zero".into()));
        }
        if d.is_negative() {
            return Err(NcfError::Representation("surd radicand D is negative".into()));
        }
        if b.is_zero() || d.is_zero() {
            return Err(NcfError::Representation(
                "surd with b = 0 or D = 0 is rational".into(),
            ));
        }
        let (root, rest) = square_free_split(&d);
        if rest.is_one() {
            return Err(NcfError::Representation(format!(
                "radicand {d} is a perfect square; use a rational"
            )));
        }
        Ok(Self::normalized(a, b * root, c, rest))
    }

    /// Sign and gcd normalization; `d` must already be square-free and > 1.
    fn normalized(mut a: BigInt, mut b: BigInt, mut c: BigInt, d: BigInt) -> Self {
        if c.is_negative() {
            a = -a;
            b = -b;
            c = -c;
        }
        let g = a.gcd(&b).gcd(&c);
        if !g.is_one() {
            a /= &g;
            b /= &g;
            c /= &g;
        }
        QuadSurd { a, b, c, d }
    }

    pub fn a(&self) -> &BigInt {
        &self.a
    }
    pub fn b(&self) -> &BigInt {
        &self.b
    }
    pub fn c(&self) -> &BigInt {
        &self.c
    }
    pub fn radicand(&self) -> &BigInt {
        &self.d
    }

    /// `floor((a + b√d)/c)`, exact.
    pub fn floor(&self) -> BigInt {
        // b²d is never a perfect square here, so isqrt is a strict lower bound.
        let r = (&self.b * &self.b * &self.d).sqrt();
        let floor_b_root = if self.b.is_positive() { r } else { -r - 1 };
        (&self.a + floor_b_root).div_floor(&self.c)
    }

    /// Compares the surd with an integer.
    pub fn cmp_int(&self, k: &BigInt) -> Ordering {
        sign_of(&(&self.a - k * &self.c), &self.b, &self.d)
    }

    /// `n / self`, rationalized with the conjugate.
    fn scaled_reciprocal(&self, n: &BigInt) -> Self {
        let norm = &self.a * &self.a - &self.b * &self.b * &self.d;
        let num_a = n * &self.c * &self.a;
        let num_b = -(n * &self.c * &self.b);
        Self::normalized(num_a, num_b, norm, self.d.clone())
    }

    fn sub_int(&self, k: &BigInt) -> Self {
        Self::normalized(&self.a - k * &self.c, self.b.clone(), self.c.clone(), self.d.clone())
    }

    pub fn to_f64(&self) -> f64 {
        let f = |x: &BigInt| x.to_f64().unwrap_or(f64::NAN);
        (f(&self.a) + f(&self.b) * f(&self.d).sqrt()) / f(&self.c)
    }
}

impl fmt::Display for QuadSurd {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({} + {}*sqrt({}))/{}", self.a, self.b, self.d, self.c)
    }
}

impl ExactReal {
    pub fn rational(num: impl Into<BigInt>, den: impl Into<BigInt>) -> Result<Self> {
        let den = den.into();
        if den.is_zero() {
            return Err(NcfError::Representation("rational with zero denominator".into()));
        }
        Ok(ExactReal::Rational(BigRational::new(num.into(), den)))
    }

    /// `(a + b√d)/c`; collapses to a rational when `b = 0` or `d = 0`.
    pub fn surd(
        a: impl Into<BigInt>,
        b: impl Into<BigInt>,
        c: impl Into<BigInt>,
        d: impl Into<BigInt>,
    ) -> Result<Self> {
        let (a, b, c, d) = (a.into(), b.into(), c.into(), d.into());
        if c.is_zero() {
            return Err(NcfError::Representation("surd denominator c is zero".into()));
        }
        if d.is_negative() {
            return Err(NcfError::Representation("surd radicand D is negative".into()));
        }
        if b.is_zero() || d.is_zero() {
            return Ok(ExactReal::Rational(BigRational::new(a, c)));
        }
        QuadSurd::new(a, b, c, d).map(ExactReal::Surd)
    }

    pub fn is_zero(&self) -> bool {
        match self {
            ExactReal::Rational(r) => r.is_zero(),
            ExactReal::Surd(_) => false,
        }
    }

    pub fn cmp_int(&self, k: &BigInt) -> Ordering {
        match self {
            ExactReal::Rational(r) => r.cmp(&BigRational::from_integer(k.clone())),
            ExactReal::Surd(s) => s.cmp_int(k),
        }
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            ExactReal::Rational(r) => r.to_f64().unwrap_or(f64::NAN),
            ExactReal::Surd(s) => s.to_f64(),
        }
    }

    /// True when `0 < x <= 1`.
    pub fn in_unit_interval_open_left(&self) -> bool {
        self.cmp_int(&BigInt::zero()) == Ordering::Greater
            && self.cmp_int(&BigInt::one()) != Ordering::Greater
    }
}

impl fmt::Display for ExactReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExactReal::Rational(r) => write!(f, "{r}"),
            ExactReal::Surd(s) => write!(f, "{s}"),
        }
    }
}

/// One step of `T_N`: returns `(floor(N/x), N/x - floor(N/x))`.
pub fn tn_step(x: &ExactReal, n: u64) -> Result<(BigInt, ExactReal)> {
    if n == 0 {
        return Err(NcfError::Argument("N must be >= 1".into()));
    }
    if !x.in_unit_interval_open_left() {
        return Err(NcfError::Domain(format!("T_N needs x in (0,1], got {x}")));
    }
    let big_n = BigInt::from(n);
    match x {
        ExactReal::Rational(r) => {
            let inv = BigRational::from_integer(big_n) / r;
            let digit = inv.floor().to_integer();
            let next = inv - BigRational::from_integer(digit.clone());
            Ok((digit, ExactReal::Rational(next)))
        }
        ExactReal::Surd(s) => {
            let inv = s.scaled_reciprocal(&big_n);
            let digit = inv.floor();
            let next = inv.sub_int(&digit);
            Ok((digit, ExactReal::Surd(next)))
        }
    }
}

impl QuadSurd {
    /// Sign of the surd value.
    pub fn sign(&self) -> Sign {
        match sign_of(&self.a, &self.b, &self.d) {
            Ordering::Less => Sign::Minus,
            Ordering::Equal => Sign::NoSign,
            Ordering::Greater => Sign::Plus,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn big(v: i64) -> BigInt {
        BigInt::from(v)
    }

    #[test]
    fn canonical_form_folds_squares_and_signs() {
        let s = QuadSurd::new(big(-2), big(1), big(-2), big(8)).unwrap();
        // (-2 + √8)/(-2) = (2 - 2√2)/2 = 1 - √2
        assert_eq!((s.a(), s.b(), s.c(), s.radicand()), (&big(1), &big(-1), &big(1), &big(2)));
    }

    #[test]
    fn degenerate_surds_are_rejected() {
        assert!(matches!(
            QuadSurd::new(big(1), big(1), big(0), big(2)),
            Err(NcfError::Representation(_))
        ));
        assert!(matches!(
            QuadSurd::new(big(1), big(1), big(1), big(9)),
            Err(NcfError::Representation(_))
        ));
        assert!(matches!(
            ExactReal::surd(1, 1, 1, -3),
            Err(NcfError::Representation(_))
        ));
        assert_eq!(ExactReal::surd(3, 0, 4, 7).unwrap(), ExactReal::rational(3, 4).unwrap());
    }

    #[test]
    fn floor_matches_float_away_from_boundaries() {
        for (a, b, c, d) in [(-1, 1, 1, 2), (1, -1, 3, 7), (5, 3, 2, 13), (-7, -2, 5, 3), (0, 1, 1, 5)] {
            let s = QuadSurd::new(big(a), big(b), big(c), big(d)).unwrap();
            let expect = s.to_f64().floor() as i64;
            assert_eq!(s.floor(), big(expect), "floor of {s}");
        }
    }

    #[test]
    fn step_sqrt2_minus_one_with_n2() {
        let x = ExactReal::surd(-1, 1, 1, 2).unwrap();
        let (d, next) = tn_step(&x, 2).unwrap();
        assert_eq!(d, big(4));
        assert_eq!(next, ExactReal::surd(-2, 2, 1, 2).unwrap());
        assert!((next.to_f64() - 0.828_427_124_746_19).abs() < 1e-12);
    }

    #[test]
    fn step_rationals() {
        let (d, next) = tn_step(&ExactReal::rational(1, 2).unwrap(), 1).unwrap();
        assert_eq!((d, next.is_zero()), (big(2), true));
        let (d, next) = tn_step(&ExactReal::rational(3, 4).unwrap(), 2).unwrap();
        assert_eq!(d, big(2));
        assert_eq!(next, ExactReal::rational(2, 3).unwrap());
        let (d, next) = tn_step(&ExactReal::rational(1, 1).unwrap(), 3).unwrap();
        assert_eq!((d, next.is_zero()), (big(3), true));
    }

    #[test]
    fn step_domain_errors() {
        assert!(matches!(tn_step(&ExactReal::rational(0, 1).unwrap(), 2), Err(NcfError::Domain(_))));
        assert!(matches!(tn_step(&ExactReal::rational(5, 4).unwrap(), 2), Err(NcfError::Domain(_))));
        assert!(matches!(tn_step(&ExactReal::surd(1, 1, 1, 2).unwrap(), 1), Err(NcfError::Domain(_))));
        assert!(matches!(tn_step(&ExactReal::surd(-1, 1, 1, 2).unwrap(), 0), Err(NcfError::Argument(_))));
    }

    #[test]
    fn sign_helper() {
        assert_eq!(QuadSurd::new(big(-1), big(1), big(1), big(2)).unwrap().sign(), Sign::Plus);
        assert_eq!(QuadSurd::new(big(2), big(-1), big(1), big(5)).unwrap().sign(), Sign::Minus);
    }
}
