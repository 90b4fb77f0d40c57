//! End-to-end checks: the fourteen numbered acceptance criteria and the
//! per-source reports behind `ncf verify`.

use std::collections::BTreeSet;
use std::f64::consts::{LN_2, PI};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::analysis::{
    balance_profile, common_prefix_len, complexity_closed_form, digit_floor_balance_bound, displayed_closed_form,
    factor_complexity, frequency_report, left_special, left_special_range, letter_ratio, maximal_blocks,
    profile_mismatches, search_imbalance_witness, BlockCensus, ComplexityProfile, DisplayedFormReport,
    ImbalanceWitness,
};
use crate::dynamics::{
    constant_digit_limit, entropy_report, farey_digit_semantics_check, farey_invariance_check, growth_rate,
    levy_simulation, natext_invariance_check, rokhlin_entropy,
};
use crate::error::{NcfError, Result};
use crate::expansion::{
    convergents, cylinder, cylinder_width_formula, detect_period, determinant, evaluate_cf, greedy_digits,
    signed_power, DigitSequence, ExactReal,
};
use crate::word::{limit_prefix, sigma_lengths, sigma_word, special_words, thresholds, BinaryWord, Flavor, SubstitutionRule};
use crate::Digit;

/// Outcome of one acceptance criterion.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CriterionReport {
    pub id: u32,
    pub name: String,
    pub passed: bool,
    pub details: Vec<String>,
}

impl CriterionReport {
    fn new(id: u32) -> Self {
        CriterionReport { id, name: criterion_name(id).to_string(), passed: true, details: Vec::new() }
    }

    fn check(&mut self, ok: bool, msg: impl Into<String>) {
        self.passed &= ok;
        self.details.push(format!("{} {}", if ok { "ok  " } else { "FAIL" }, msg.into()));
    }

    fn note(&mut self, msg: impl Into<String>) {
        self.details.push(format!("note {}", msg.into()));
    }

    /// `PASS criterion  3 limit words` style summary.
    pub fn status_line(&self) -> String {
        format!("{} criterion {:>2} {}", if self.passed { "PASS" } else { "FAIL" }, self.id, self.name)
    }
}

pub const CRITERIA: [&str; 14] = [
    "exact convergent identities",
    "periodic surd expansion",
    "limit words and generating words",
    "tau correspondence",
    "maximal blocks",
    "balance upper bounds",
    "imbalance witnesses",
    "complexity oracle equivalence",
    "left special factors",
    "letter and factor frequencies",
    "entropy",
    "growth rate",
    "slow map",
    "natural extension density",
];

pub fn criterion_name(id: u32) -> &'static str {
    CRITERIA.get((id as usize).wrapping_sub(1)).copied().unwrap_or("unknown")
}

/// Runs criterion `id` (1..=14). Internal errors become a failed report.
pub fn run_criterion(id: u32) -> Result<CriterionReport> {
    let outcome = match id {
        1 => criterion_1(),
        2 => criterion_2(),
        3 => criterion_3(),
        4 => criterion_4(),
        5 => criterion_5(),
        6 => criterion_6(),
        7 => criterion_7(),
        8 => criterion_8(),
        9 => criterion_9(),
        10 => criterion_10(),
        11 => criterion_11(),
        12 => criterion_12(),
        13 => criterion_13(),
        14 => criterion_14(),
        _ => return Err(NcfError::Argument(format!("no criterion {id}; expected 1..=14"))),
    };
    Ok(outcome.unwrap_or_else(|e| {
        let mut r = CriterionReport::new(id);
        r.check(false, format!("error: {e}"));
        r
    }))
}

/// All criteria, run in parallel and returned in id order.
pub fn run_all() -> Vec<CriterionReport> {
    (1..=CRITERIA.len() as u32).into_par_iter().map(|id| run_criterion(id).expect("ids in range")).collect()
}

/// Reference prefixes for `N = 2`, digits `2, 3, 4, ...`.
pub const OMEGA_PREFIX: &str = "0011001100110000110011001100001100110011000011001100110000110011001";
pub const OMEGA_HAT_PREFIX: &str = "0010010010000100100100001001001000010010010000100100100100100001001";

/// A labeled digit list used across the criteria.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SampleSequence {
    pub label: String,
    pub digits: Vec<Digit>,
}

const SAMPLE_LEN: usize = 64;

fn random_digits(rng: &mut ChaCha8Rng, n: u64, len: usize) -> Vec<Digit> {
    (0..len).map(|_| rng.random_range(n..=n + 9)).collect()
}

/// Deterministic family of greedy digit lists for numerator `n`, up to 10.
pub fn sample_sequences(n: u64, count: usize) -> Vec<SampleSequence> {
    let periodic = |p: &[u64]| p.iter().copied().cycle().take(SAMPLE_LEN).collect::<Vec<_>>();
    let arith = |start: u64, step: u64| (0..SAMPLE_LEN as u64).map(|i| start + i * step).collect::<Vec<_>>();
    let random = |seed: u64| random_digits(&mut ChaCha8Rng::seed_from_u64(seed * 1000 + n), n, SAMPLE_LEN);
    let all = [
        (format!("arith:start={n},step=1"), arith(n, 1)),
        (format!("constant:{n}"), vec![n; SAMPLE_LEN]),
        (format!("periodic:{},{n}", n + 2), periodic(&[n + 2, n])),
        ("random:1".to_string(), random(1)),
        ("random:2".to_string(), random(2)),
        (format!("constant:{}", n + 1), vec![n + 1; SAMPLE_LEN]),
        (format!("periodic:{n},{},{}", n + 3, n + 1), periodic(&[n, n + 3, n + 1])),
        (format!("arith:start={},step=2", n + 1), arith(n + 1, 2)),
        ("random:3".to_string(), random(3)),
        ("random:4".to_string(), random(4)),
    ];
    all.into_iter().take(count).map(|(label, digits)| SampleSequence { label, digits }).collect()
}

fn prefix(digits: &[Digit], n: u64, len: usize, flavor: Flavor) -> Result<BinaryWord> {
    limit_prefix(digits, n, len, flavor)
}

// ---------------------------------------------------------------------------
// per-source reports

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BalanceVerification {
    pub flavor: Flavor,
    #[serde(rename = "N")]
    pub n: u64,
    pub length: usize,
    pub max_window: usize,
    /// `N` for the dual word, `N²` for the primal word.
    pub bound: u64,
    /// Largest spread seen over all window lengths.
    pub observed: u64,
    pub witness_target: u64,
    pub witness: Option<ImbalanceWitness>,
    pub passed: bool,
}

/// Balance bound plus an imbalance witness on a prefix of length `len`.
/// The witness target is 2 (dual) or `2N` (primal), capped by the bound.
pub fn verify_balance(digits: &[Digit], n: u64, len: usize, max_window: usize, flavor: Flavor) -> Result<BalanceVerification> {
    let w = prefix(digits, n, len, flavor)?;
    let max_window = max_window.min(len);
    let profile = balance_profile(&w, max_window)?;
    let bound = match flavor {
        Flavor::Dual => n,
        Flavor::Primal => n * n,
    };
    let witness_target = match flavor {
        Flavor::Dual => 2,
        Flavor::Primal => 2 * n,
    }
    .min(bound);
    let witness = match profile.first_length_reaching(witness_target) {
        Some(_) => search_imbalance_witness(&w, max_window, witness_target)?,
        None => None,
    };
    Ok(BalanceVerification {
        flavor,
        n,
        length: len,
        max_window,
        bound,
        observed: profile.constant,
        witness_target,
        passed: profile.constant <= bound && witness.is_some(),
        witness,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComplexityVerification {
    pub flavor: Flavor,
    #[serde(rename = "N")]
    pub n: u64,
    pub n_max: usize,
    /// Prefix length at which the counts stabilized.
    pub prefix_len: usize,
    pub empirical: ComplexityProfile,
    pub closed_form: ComplexityProfile,
    pub mismatches: Vec<usize>,
    /// `p(n) <= 2n` for `n >= 1` and `p(n+1) - p(n) ∈ {1, 2}`.
    pub shape_ok: bool,
    pub displayed: DisplayedFormReport,
    pub passed: bool,
}

const MAX_PREFIX: usize = 1 << 24;

/// Factor complexity of the smallest doubling prefix on which it stabilizes.
pub fn stable_complexity(digits: &[Digit], n: u64, n_max: usize, flavor: Flavor) -> Result<(ComplexityProfile, usize)> {
    let mut len = (8 * (n_max + 1)).max(1 << 14);
    loop {
        let w = prefix(digits, n, len, flavor)?;
        match factor_complexity(&w, n_max) {
            Ok(p) => return Ok((p, len)),
            Err(NcfError::PrefixTooShort(_)) if len < MAX_PREFIX => len *= 2,
            Err(e) => return Err(e),
        }
    }
}

pub fn verify_complexity(digits: &[Digit], n: u64, n_max: usize, flavor: Flavor) -> Result<ComplexityVerification> {
    let (empirical, prefix_len) = stable_complexity(digits, n, n_max, flavor)?;
    let closed_form = complexity_closed_form(digits, n, n_max, flavor)?;
    let mismatches = profile_mismatches(&empirical, &closed_form);
    let p = empirical.counts();
    let shape_ok = p[0] == 1
        && p.iter().enumerate().skip(1).all(|(m, &v)| v <= 2 * m as u64)
        && p.windows(2).all(|w| matches!(w[1] - w[0], 1 | 2));
    let displayed = displayed_closed_form(digits, n, n_max, flavor)?;
    Ok(ComplexityVerification {
        flavor,
        n,
        n_max,
        prefix_len,
        passed: mismatches.is_empty() && shape_ok,
        empirical,
        closed_form,
        mismatches,
        shape_ok,
        displayed,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpecialVerification {
    pub flavor: Flavor,
    #[serde(rename = "N")]
    pub n: u64,
    pub k: usize,
    /// Lengths `1..=t_k` were scanned.
    pub max_len: usize,
    /// Non-prefix maximal left special factors found.
    pub found: Vec<String>,
    /// `T_j` with `|T_j| <= t_k` (and `T_0 = 1^{N-1}` for the primal word).
    pub expected: Vec<String>,
    /// `(j, |lcp(T_j, w)|, |S_j|)`.
    pub common_prefixes: Vec<(usize, usize, usize)>,
    pub passed: bool,
}

/// Compares the non-prefix maximal left special factors of length at most
/// `t_k` with the special words `T_j`, and checks `lcp(T_j, w) = S_j`.
pub fn verify_special(digits: &[Digit], n: u64, k: usize, flavor: Flavor) -> Result<SpecialVerification> {
    if k == 0 {
        return Err(NcfError::Argument("k must be at least 1".into()));
    }
    let th = thresholds(digits, n, k, flavor)?;
    let max_len = usize::try_from(th[k].1).map_err(|_| NcfError::Argument(format!("t_{k} is too large")))?;
    let mut len = (16 * max_len).max(1 << 14);
    let reports = loop {
        let w = prefix(digits, n, len, flavor)?;
        match left_special_range(&w, 1, max_len) {
            Ok(r) => break r,
            Err(NcfError::PrefixTooShort(_)) if len < MAX_PREFIX => len *= 2,
            Err(e) => return Err(e),
        }
    };
    let w = prefix(digits, n, len, flavor)?;
    let found: BTreeSet<String> = reports
        .iter()
        .flat_map(|r| r.factors.iter())
        .filter(|f| f.is_maximal && !f.is_prefix)
        .map(|f| f.factor.to_string())
        .collect();
    let first = match flavor {
        Flavor::Primal => 0,
        Flavor::Dual => 1,
    };
    let mut expected = BTreeSet::new();
    let mut common_prefixes = Vec::new();
    let mut lcp_ok = true;
    for j in first..=k {
        let (s, t) = special_words(digits, n, j, flavor)?;
        if t.is_empty() || t.len() > max_len {
            continue;
        }
        let l = common_prefix_len(&t, &w);
        lcp_ok &= l == s.len() && t.prefix(l) == s;
        common_prefixes.push((j, l, s.len()));
        expected.insert(t.to_string());
    }
    let passed = lcp_ok && found == expected;
    Ok(SpecialVerification {
        flavor,
        n,
        k,
        max_len,
        found: found.into_iter().collect(),
        expected: expected.into_iter().collect(),
        common_prefixes,
        passed,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BlockVerification {
    pub flavor: Flavor,
    #[serde(rename = "N")]
    pub n: u64,
    pub length: usize,
    pub census: BlockCensus,
    pub expected_ones: BTreeSet<u64>,
    pub expected_zeros: BTreeSet<u64>,
    pub passed: bool,
}

/// Interior runs of `1` are exactly `{N}` (primal) or `{1}` (dual); interior
/// runs of `0` are exactly `{d_1, d_1 + N}`.
pub fn verify_blocks(digits: &[Digit], n: u64, len: usize, flavor: Flavor) -> Result<BlockVerification> {
    let d1 = *digits.first().ok_or_else(|| NcfError::Argument("need at least one digit".into()))?;
    let w = prefix(digits, n, len, flavor)?;
    let census = maximal_blocks(&w);
    let expected_ones = BTreeSet::from([match flavor {
        Flavor::Primal => n,
        Flavor::Dual => 1,
    }]);
    let expected_zeros = BTreeSet::from([d1, d1 + n]);
    Ok(BlockVerification {
        flavor,
        n,
        length: len,
        passed: census.ones == expected_ones && census.zeros == expected_zeros,
        census,
        expected_ones,
        expected_zeros,
    })
}

// ---------------------------------------------------------------------------
// criteria

fn criterion_1() -> Result<CriterionReport> {
    let mut r = CriterionReport::new(1);
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0001);
    let (mut det_bad, mut eval_bad, mut width_bad, mut member_bad, mut checked) = (0, 0, 0, 0, 0);
    for i in 0..1000 {
        let n = [1u64, 2, 3, 5][i % 4];
        let len = rng.random_range(1..=12usize);
        let digits = random_digits(&mut rng, n, len);
        let tail = random_digits(&mut rng, n, 6);
        let cs = convergents(&digits, n, len)?;
        let big_n = BigInt::from(n);
        for k in 1..=len {
            checked += 1;
            if determinant(&cs, k) != signed_power(n, k) {
                det_bad += 1;
            }
            if evaluate_cf(&digits[..k], n)? != cs[k - 1].value() {
                eval_bad += 1;
            }
            let q = &cs[k - 1].q;
            let q_prev = if k >= 2 { cs[k - 2].q.clone() } else { BigInt::from(1) };
            let width = BigRational::new(big_n.pow(k as u32), q * (q + q_prev));
            let cyl = cylinder(&digits, n, k)?;
            if cyl.width() != width || cylinder_width_formula(&digits, n, k)? != width {
                width_bad += 1;
            }
            // any greedy continuation of the first k digits lands in the cylinder
            let mut ext = digits[..k].to_vec();
            ext.extend_from_slice(&tail);
            let x = evaluate_cf(&ext, n)?;
            if x < cyl.lo || x > cyl.hi {
                member_bad += 1;
            }
        }
    }
    r.check(det_bad == 0, format!("q_n p_(n-1) - p_n q_(n-1) = (-N)^n on {checked} prefixes ({det_bad} failures)"));
    r.check(eval_bad == 0, format!("evaluate_cf = p_n/q_n ({eval_bad} failures)"));
    r.check(width_bad == 0, format!("cylinder width = N^n/(q_n(q_n+q_(n-1))) ({width_bad} failures)"));
    r.check(member_bad == 0, format!("extended expansions fall inside their cylinder ({member_bad} failures)"));
    Ok(r)
}

fn criterion_2() -> Result<CriterionReport> {
    let mut r = CriterionReport::new(2);
    let x = ExactReal::surd(-1, 1, 1, 2)?;
    let seq = greedy_digits(&x, 2, 50)?;
    let expected: Vec<Digit> = [4, 2].repeat(25);
    r.check(seq.digits == expected, format!("digits of sqrt(2) - 1 for N = 2: {:?}...", &seq.digits[..6.min(seq.len())]));
    r.check(seq.iter().all(|&d| d >= 2), "all digits >= 2");
    let period = detect_period(&x, 2, 100)?;
    let ok = matches!(&period, Some(p) if p.preperiod.is_empty() && p.period == [4, 2]);
    r.check(ok, format!("exact state repetition: {period:?}"));
    Ok(r)
}

fn displayed_sigma(d: &[Digit], n: u64, flavor: Flavor) -> [String; 3] {
    let z = |k: u64| "0".repeat(k as usize);
    let o = |k: u64| "1".repeat(k as usize);
    let s2 = match flavor {
        Flavor::Primal => z(d[0]) + &o(n),
        Flavor::Dual => z(d[0]) + "1",
    };
    let s3 = s2.repeat(d[1] as usize) + &z(n);
    let s4 = s3.repeat(d[2] as usize) + &s2.repeat(n as usize);
    [s2, s3, s4]
}

fn criterion_3() -> Result<CriterionReport> {
    let mut r = CriterionReport::new(3);
    let digits: Vec<Digit> = (2..80).collect();
    let omega = prefix(&digits, 2, 67, Flavor::Primal)?.to_string();
    r.check(omega == OMEGA_PREFIX, format!("primal prefix {omega}"));
    let hat = prefix(&digits, 2, 67, Flavor::Dual)?.to_string();
    r.check(hat == OMEGA_HAT_PREFIX, format!("dual prefix   {hat}"));
    for (n, d) in [(2u64, [2u64, 3, 4]), (1, [1, 1, 1]), (3, [5, 3, 4]), (5, [5, 7, 6])] {
        for flavor in [Flavor::Primal, Flavor::Dual] {
            let shown = displayed_sigma(&d, n, flavor);
            let mut ok = true;
            for (i, s) in shown.iter().enumerate() {
                ok &= sigma_word(&d, n, i + 2, flavor)?.to_string() == *s;
            }
            r.check(ok, format!("{flavor} Sigma_2..Sigma_4 for N = {n}, digits {d:?}"));
        }
    }
    Ok(r)
}

const LONG: usize = 100_000;

fn criterion_4() -> Result<CriterionReport> {
    let mut r = CriterionReport::new(4);
    for n in [1u64, 2, 3, 5] {
        for s in sample_sequences(n, 5) {
            let dual = prefix(&s.digits, n, LONG, Flavor::Dual)?;
            let primal = prefix(&s.digits, n, LONG, Flavor::Primal)?;
            let image = SubstitutionRule::tau(n).apply_truncated(&dual, LONG);
            r.check(image == primal, format!("N = {n}, {}: tau(dual) = primal on {LONG} symbols", s.label));
        }
    }
    Ok(r)
}

fn criterion_5() -> Result<CriterionReport> {
    let mut r = CriterionReport::new(5);
    for n in [1u64, 2, 3, 5] {
        for s in sample_sequences(n, 5) {
            for flavor in [Flavor::Primal, Flavor::Dual] {
                let v = verify_blocks(&s.digits, n, LONG, flavor)?;
                r.check(
                    v.passed,
                    format!(
                        "N = {n}, {}, {flavor}: 1-runs {:?}, 0-runs {:?}",
                        s.label, v.census.ones, v.census.zeros
                    ),
                );
            }
        }
    }
    Ok(r)
}

fn criterion_6() -> Result<CriterionReport> {
    let mut r = CriterionReport::new(6);
    for n in [2u64, 3, 4] {
        for s in sample_sequences(n, 5) {
            for flavor in [Flavor::Primal, Flavor::Dual] {
                let w = prefix(&s.digits, n, LONG, flavor)?;
                let c = balance_profile(&w, 2048)?.constant;
                let bound = if flavor == Flavor::Dual { n } else { n * n };
                r.check(c <= bound, format!("N = {n}, {}, {flavor}: spread {c} <= {bound}", s.label));
            }
        }
        for k in [2 * n, 3 * n] {
            let w = prefix(&vec![k; SAMPLE_LEN], n, LONG, Flavor::Dual)?;
            let c = balance_profile(&w, 2048)?.constant;
            let bound = digit_floor_balance_bound(k, n);
            r.check(c <= bound, format!("N = {n}, digits all {k}, dual: spread {c} <= {bound}"));
        }
    }
    Ok(r)
}

fn criterion_7() -> Result<CriterionReport> {
    let mut r = CriterionReport::new(7);
    for n in [2u64, 3] {
        let s = &sample_sequences(n, 1)[0];
        let len = sigma_lengths(&s.digits, n, 4, Flavor::Primal)?[4] as usize;
        for (flavor, target) in [(Flavor::Dual, 2), (Flavor::Primal, 2 * n)] {
            let w = prefix(&s.digits, n, len, flavor)?;
            let wit = search_imbalance_witness(&w, len, target)?;
            let msg = match &wit {
                Some(x) => format!("u = {} at {}, v = {} at {}", x.u, x.u_pos, x.v, x.v_pos),
                None => "none".to_string(),
            };
            r.check(
                wit.is_some_and(|x| x.spread >= target),
                format!("N = {n}, {}, {flavor}: spread {target} within {len} symbols: {msg}", s.label),
            );
            if let Some(end) = first_witness_end(&s.digits, n, flavor, target, 4 * len)? {
                r.note(format!("N = {n}, {flavor}: first pair with spread {target} ends at symbol {end}"));
            }
        }
    }
    Ok(r)
}

/// Shortest prefix (up to `cap`) containing two equal-length windows whose
/// counts differ by `target`.
fn first_witness_end(digits: &[Digit], n: u64, flavor: Flavor, target: u64, cap: usize) -> Result<Option<usize>> {
    let w = prefix(digits, n, cap, flavor)?;
    let s = w.as_slice();
    let mut pre = vec![0u32; s.len() + 1];
    for (i, &c) in s.iter().enumerate() {
        pre[i + 1] = pre[i] + c as u32;
    }
    // spread over windows of length l inside the first `end` symbols
    let reaches = |end: usize| {
        (1..=end).any(|l| {
            let counts = (0..=end - l).map(|i| pre[i + l] - pre[i]);
            let (lo, hi) = counts.fold((u32::MAX, 0), |(lo, hi), c| (lo.min(c), hi.max(c)));
            (hi - lo) as u64 >= target
        })
    };
    if !reaches(cap) {
        return Ok(None);
    }
    let (mut lo, mut hi) = (1, cap);
    while lo < hi {
        let mid = (lo + hi) / 2;
        if reaches(mid) {
            hi = mid;
        } else {
            lo = mid + 1;
        }
    }
    Ok(Some(lo))
}

fn criterion_8() -> Result<CriterionReport> {
    let mut r = CriterionReport::new(8);
    let jobs: Vec<(u64, SampleSequence, Flavor)> = [1u64, 2, 3]
        .into_iter()
        .flat_map(|n| {
            sample_sequences(n, 10)
                .into_iter()
                .flat_map(move |s| [Flavor::Primal, Flavor::Dual].map(|f| (n, s.clone(), f)))
        })
        .collect();
    let results: Vec<Result<ComplexityVerification>> =
        jobs.par_iter().map(|(n, s, f)| verify_complexity(&s.digits, *n, 200, *f)).collect();
    let mut deltas: BTreeSet<(Flavor, String, i64)> = BTreeSet::new();
    let mut discrepant_runs = 0;
    for ((n, s, flavor), res) in jobs.iter().zip(results) {
        let v = res?;
        let linear = *n != 1 || v.empirical.counts().iter().enumerate().all(|(m, &p)| p == m as u64 + 1);
        r.check(
            v.passed && linear,
            format!(
                "N = {n}, {}, {flavor}: p(0..=200) matches the difference law (prefix {}, p(200) = {}){}",
                s.label,
                v.prefix_len,
                v.empirical.counts()[200],
                if v.mismatches.is_empty() { String::new() } else { format!(", mismatches at {:?}", v.mismatches) }
            ),
        );
        if !v.displayed.discrepant.is_empty() {
            discrepant_runs += 1;
        }
        for (kind, d) in &v.displayed.deltas {
            deltas.insert((*flavor, kind.clone(), *d));
        }
    }
    r.note(format!("displayed closed forms disagree with the difference law on {discrepant_runs} of {} runs", jobs.len()));
    for flavor in [Flavor::Dual, Flavor::Primal] {
        let seen: Vec<String> =
            deltas.iter().filter(|(f, _, _)| *f == flavor).map(|(_, k, d)| format!("{k}:{d:+}")).collect();
        r.note(format!("{flavor} displayed-form deltas (band:delta): {}", seen.join(" ")));
    }
    Ok(r)
}

fn criterion_9() -> Result<CriterionReport> {
    let mut r = CriterionReport::new(9);
    let digits: Vec<Digit> = (2..66).collect();
    let w = prefix(&digits, 2, LONG, Flavor::Dual)?;
    let ls2 = left_special(&w, 2)?.words();
    r.check(ls2 == ["00"], format!("LS_2 = {ls2:?}"));
    let ls3 = left_special(&w, 3)?.words();
    r.check(ls3 == ["000", "001"], format!("LS_3 = {ls3:?}"));
    let v = verify_special(&digits, 2, 3, Flavor::Dual)?;
    r.check(
        v.found == v.expected && v.expected.len() == 3,
        format!("non-prefix maximal left special factors up to length {}: {:?}", v.max_len, v.found),
    );
    for (j, l, s) in &v.common_prefixes {
        r.check(l == s, format!("lcp(T_{j}, w) has length {l}, |S_{j}| = {s}"));
    }
    Ok(r)
}

fn criterion_10() -> Result<CriterionReport> {
    let mut r = CriterionReport::new(10);
    const MILLION: usize = 1_000_000;
    for n in [1u64, 2, 3] {
        for s in sample_sequences(n, 5) {
            let w = prefix(&s.digits, n, MILLION, Flavor::Primal)?;
            let ratio = letter_ratio(&w).unwrap_or(f64::NAN);
            let cs = convergents(&s.digits, n, s.digits.len())?;
            let best = cs
                .iter()
                .take_while(|c| c.q <= BigInt::from(1000))
                .last()
                .ok_or_else(|| NcfError::Argument("no convergent with q <= 1000".into()))?;
            let target = best.value().to_f64().unwrap_or(f64::NAN);
            let err = (ratio - target).abs();
            r.check(
                err < 1e-3,
                format!("N = {n}, {}: |1s/0s - p_{}/q_{}| = {err:.2e} (q = {})", s.label, best.index, best.index, best.q),
            );
            let mut worst: f64 = 0.0;
            for l in [1, 2, 3, 5] {
                let rep = frequency_report(&w, &w.prefix(l), 16)?;
                worst = worst.max(rep.max_deviation);
            }
            r.check(worst < 1e-2, format!("N = {n}, {}: window frequency deviation {worst:.2e}", s.label));
        }
    }
    Ok(r)
}

fn criterion_11() -> Result<CriterionReport> {
    let mut r = CriterionReport::new(11);
    let target = PI * PI / (6.0 * LN_2);
    let h1 = rokhlin_entropy(1)?.value;
    r.check((h1 - target).abs() < 1e-9, format!("integral entropy for N = 1: {h1:.12} vs {target:.12}"));
    for n in 1..=5 {
        let e = entropy_report(n)?;
        r.check(
            e.abs_gap < 1e-6 && e.sign_mismatch,
            format!(
                "N = {n}: formula {:.9}, integral {:.9}, | |formula| - integral | = {:.3e}, sign flag {}",
                e.formula, e.rokhlin, e.abs_gap, e.sign_mismatch
            ),
        );
        r.note(format!("N = {n}: formula with the dilogarithm integrated from 1 gives {:.9}", e.formula_lower_limit_one));
    }
    Ok(r)
}

fn criterion_12() -> Result<CriterionReport> {
    let mut r = CriterionReport::new(12);
    for n in [1u64, 2, 3] {
        let est = levy_simulation(n, 5000, 100, 12_000 + n)?;
        let target = 0.5 * (rokhlin_entropy(n)?.value + (n as f64).ln());
        let rel = (est.mean - target).abs() / target;
        r.check(rel < 0.02, format!("N = {n}: mean rate {:.5} vs {target:.5} (rel. error {rel:.2e})", est.mean));
        if n == 1 {
            let levy = PI * PI / (12.0 * LN_2);
            let rel = (est.mean - levy).abs() / levy;
            r.check(rel < 0.02, format!("N = 1: mean rate vs pi^2/(12 ln 2) = {levy:.5} (rel. error {rel:.2e})"));
        }
    }
    for n in [1u64, 2, 3, 5] {
        let g = growth_rate(&vec![n; 1000], n, 1000)?;
        let got = g.last().unwrap_or(f64::NAN);
        let lim = constant_digit_limit(n);
        r.check((got - lim).abs() < 1e-3, format!("N = {n}, digits all N: {got:.6} vs {lim:.6}"));
    }
    Ok(r)
}

fn criterion_13() -> Result<CriterionReport> {
    let mut r = CriterionReport::new(13);
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0013);
    let mut bad = Vec::new();
    for i in 0..1000 {
        let n = [1u64, 2, 3, 5][i % 4];
        let len = rng.random_range(1..=12usize);
        let digits = random_digits(&mut rng, n, len);
        let steps = digits.iter().map(|&d| (d - n + 1) as usize).sum();
        let rep = farey_digit_semantics_check(&DigitSequence::new(digits.clone()), n, steps)?;
        if !rep.passed || rep.steps != steps {
            bad.push((n, digits, rep.failure));
        }
    }
    r.check(bad.is_empty(), format!("digit semantics on 1000 random lists ({} failures{})", bad.len(),
        bad.first().map(|b| format!(", first {b:?}")).unwrap_or_default()));
    let mut worst: f64 = 0.0;
    for i in 0..100 {
        let n = [1u64, 2, 3, 5][i % 4];
        let a = rng.random_range(1e-3..1.0);
        let b = rng.random_range(a..=1.0);
        worst = worst.max(farey_invariance_check(a, b, n)?);
    }
    r.check(worst < 1e-12, format!("dx/x preimage residual over 100 intervals: {worst:.2e}"));
    let mut ok = true;
    for n in [1u64, 2, 3, 5] {
        let b = SubstitutionRule::tau_b(n).incidence();
        let dm = SubstitutionRule::tau_d(n).incidence();
        for d in n..=n + 20 {
            let lhs = &b.pow(d - n) * &dm;
            let rhs = SubstitutionRule::primal(d, n).incidence().scale(&BigInt::from(n).pow((d - n) as u32));
            ok &= lhs == rhs;
        }
    }
    r.check(ok, "B^(d-N) D = N^(d-N) M for d in [N, N+20], N in {1,2,3,5}");
    Ok(r)
}

fn criterion_14() -> Result<CriterionReport> {
    let mut r = CriterionReport::new(14);
    for n in [1u64, 2] {
        let rep = natext_invariance_check(n, 10_000_000, 20, 14_000 + n)?;
        r.check(
            rep.joint.total_variation < 0.05,
            format!("N = {n}: 2-D total variation {:.2e} (sup {:.2e})", rep.joint.total_variation, rep.joint.sup_norm),
        );
        r.check(
            rep.marginal.total_variation < 0.05,
            format!("N = {n}: x-marginal total variation {:.2e}", rep.marginal.total_variation),
        );
        r.check(
            (rep.joint.theoretical_sum - 1.0).abs() < 1e-9,
            format!("N = {n}: theoretical masses sum to {:.12}", rep.joint.theoretical_sum),
        );
    }
    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn names_cover_ids() {
        assert_eq!(criterion_name(1), "exact convergent identities");
        assert_eq!(criterion_name(14), "natural extension density");
        assert_eq!(criterion_name(0), "unknown");
        assert!(run_criterion(15).is_err());
    }

    #[test]
    fn sample_family_is_greedy() {
        for n in [1u64, 2, 5] {
            let fam = sample_sequences(n, 10);
            assert_eq!(fam.len(), 10);
            assert!(fam.iter().all(|s| s.digits.len() == SAMPLE_LEN && s.digits.iter().all(|&d| d >= n)));
        }
    }

    #[test]
    fn balance_report_example() {
        let digits: Vec<Digit> = (2..40).collect();
        let v = verify_balance(&digits, 2, 20_000, 512, Flavor::Dual).unwrap();
        assert!(v.passed && v.observed <= 2 && v.witness.unwrap().spread == 2);
        let v = verify_balance(&digits, 1, 20_000, 512, Flavor::Primal).unwrap();
        assert_eq!((v.bound, v.witness_target, v.observed), (1, 1, 1));
    }

    #[test]
    fn primal_special_factors() {
        let digits: Vec<Digit> = (2..40).collect();
        let v = verify_special(&digits, 2, 3, Flavor::Primal).unwrap();
        assert!(v.passed, "{v:?}");
        assert!(v.expected.contains(&"1".to_string()));
    }
}
