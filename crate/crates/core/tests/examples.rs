//! Worked examples through the public API, with hand-derived expected values.

use num_bigint::BigInt;
use num_rational::BigRational;
use ncf_core::analysis::{
    balance_profile, factor_complexity, find_imbalance_witness, frequency_report, left_special, maximal_blocks,
};
use ncf_core::dynamics::{entropy_report, farey_invariance_check, gauss_step, farey_step, rokhlin_entropy};
use ncf_core::word::{digits_for_length, thresholds};
use ncf_core::*;

fn ratio(p: i64, q: i64) -> BigRational {
    BigRational::new(BigInt::from(p), BigInt::from(q))
}

fn arith(start: u64, count: u64) -> Vec<Digit> {
    (0..count).map(|i| start + i).collect()
}

fn w(s: &str) -> BinaryWord {
    s.parse().unwrap()
}

#[test]
fn sqrt2_minus_one_has_period_four_two() {
    let x = ExactReal::surd(-1, 1, 1, 2).unwrap();
    let (d, tx) = tn_step(&x, 2).unwrap();
    assert_eq!(d, BigInt::from(4));
    assert_eq!(tx, ExactReal::surd(-2, 2, 1, 2).unwrap());
    assert_eq!(greedy_digits(&x, 2, 6).unwrap().digits, vec![4, 2, 4, 2, 4, 2]);
}

#[test]
fn rational_orbits_terminate() {
    let half = ExactReal::rational(1, 2).unwrap();
    let seq = greedy_digits(&half, 1, 10).unwrap();
    assert_eq!(seq.digits, vec![2]);
    assert!(seq.terminated);
    let (d, tx) = tn_step(&ExactReal::rational(3, 4).unwrap(), 2).unwrap();
    assert_eq!((d, tx), (BigInt::from(2), ExactReal::rational(2, 3).unwrap()));
}

#[test]
fn golden_mean_is_all_ones() {
    let x = ExactReal::surd(-1, 1, 2, 5).unwrap();
    assert_eq!(greedy_digits(&x, 1, 5).unwrap().digits, vec![1; 5]);
}

#[test]
fn convergents_and_determinant() {
    let cs = convergents(&[2, 3], 2, 2).unwrap();
    assert_eq!((cs[0].p.clone(), cs[0].q.clone()), (BigInt::from(2), BigInt::from(2)));
    assert_eq!((cs[1].p.clone(), cs[1].q.clone()), (BigInt::from(6), BigInt::from(8)));
    assert_eq!(&cs[1].q * &cs[0].p - &cs[1].p * &cs[0].q, BigInt::from(4));
    assert_eq!(evaluate_cf(&[2, 3], 2).unwrap(), ratio(3, 4));
    assert_eq!(evaluate_cf(&[2, 2], 1).unwrap(), ratio(2, 5));
}

#[test]
fn second_level_cylinder() {
    let c = cylinder(&[2, 3], 2, 2).unwrap();
    assert_eq!(c.width(), ratio(1, 20));
    assert_eq!(matrix_product(&[2, 3], 2, 2).unwrap(), Matrix2::new(8, 2, 6, 2));
    assert_eq!(matrix_product(&[2, 3], 2, 0).unwrap(), Matrix2::identity());
}

#[test]
fn slow_expansion_examples() {
    let vals = |d: &[Digit], n| expansion::slow_values(&slow_digits(d, n, 100).unwrap(), n);
    assert_eq!(vals(&[4, 2], 2), vec![1, 1, 2, 2]);
    assert_eq!(vals(&[3, 3, 3], 3), vec![3, 3, 3]);
    assert_eq!(vals(&[3], 2), vec![1, 2]);
}

#[test]
fn substitution_images_and_matrices() {
    assert_eq!(SubstitutionRule::primal(2, 2).apply(&w("1")).to_string(), "0");
    assert_eq!(SubstitutionRule::dual(2, 2).apply(&w("0")).to_string(), "001");
    assert_eq!(SubstitutionRule::tau(2).apply(&w("001")).to_string(), "0011");
    let m = SubstitutionRule::primal(3, 2).incidence();
    assert_eq!(m, Matrix2::new(3, 1, 2, 0));
    assert_eq!(SubstitutionRule::dual(3, 2).incidence(), m.transpose());
    assert_eq!(SubstitutionRule::tau_b(2).incidence(), Matrix2::new(2, 1, 0, 2));
    let bd = &SubstitutionRule::tau_b(2).incidence() * &SubstitutionRule::tau_d(2).incidence();
    assert_eq!(bd, m.scale(&BigInt::from(2)));
}

#[test]
fn generating_words() {
    let d = arith(2, 6);
    assert_eq!(sigma_word(&d, 2, 2, Flavor::Primal).unwrap().to_string(), "0011");
    assert_eq!(sigma_word(&d, 2, 3, Flavor::Primal).unwrap().to_string(), "00110011001100");
    assert_eq!(sigma_word(&d, 2, 3, Flavor::Dual).unwrap().to_string(), "00100100100");
    for k in 1..5 {
        let a = sigma_word(&d, 2, k, Flavor::Primal).unwrap();
        assert!(a.is_prefix_of(&sigma_word(&d, 2, k + 1, Flavor::Primal).unwrap()));
    }
}

#[test]
fn limit_word_prefixes() {
    let d = arith(2, 8);
    assert_eq!(limit_prefix(&d, 2, 20, Flavor::Primal).unwrap().to_string(), "00110011001100001100");
    assert_eq!(limit_prefix(&d, 2, 20, Flavor::Dual).unwrap().to_string(), "00100100100001001001");
    assert_eq!(limit_prefix(&[1; 20], 1, 13, Flavor::Primal).unwrap().to_string(), "0100101001001");
}

#[test]
fn special_word_examples() {
    let d = arith(2, 6);
    let (s, t) = special_words(&d, 2, 1, Flavor::Dual).unwrap();
    assert_eq!((s.to_string(), t.to_string()), ("00".into(), "000".into()));
    let (s, t) = special_words(&d, 2, 2, Flavor::Dual).unwrap();
    assert_eq!(s.to_string(), "00100100100");
    assert_eq!(t.len(), 14);
    let (_, t0) = special_words(&arith(3, 4), 3, 0, Flavor::Primal).unwrap();
    assert_eq!(t0.to_string(), "11");
    let th = thresholds(&d, 2, 2, Flavor::Dual).unwrap();
    assert_eq!((th[1], th[2]), ((2, 3), (11, 14)));
}

#[test]
fn slow_directive_examples() {
    let shift = [SlowSymbol::Shift; 10];
    assert_eq!(slow_limit_prefix(&shift, 2, 8).unwrap().to_string(), "00110011");
    assert_eq!(slow_limit_prefix(&[SlowSymbol::Decrement], 2, 2).unwrap().to_string(), "00");
}

#[test]
fn dual_balance_and_witnesses() {
    let src: DigitSource = "arith:start=2,step=1".parse().unwrap();
    let digits = digits_for_length(&src, 2, 100_000, Flavor::Dual).unwrap();
    let dual = limit_prefix(&digits, 2, 100_000, Flavor::Dual).unwrap();
    assert_eq!(balance_profile(&dual, 512).unwrap().constant, 2);
    let wit = find_imbalance_witness(&dual, 4, 2).unwrap().unwrap();
    assert_eq!((wit.u.to_string(), wit.v.to_string()), ("0000".into(), "1001".into()));
    assert!(find_imbalance_witness(&dual, 4, 3).unwrap().is_none());

    let primal = limit_prefix(&digits, 2, 100_000, Flavor::Primal).unwrap();
    let wit = find_imbalance_witness(&primal, 18, 4).unwrap().unwrap();
    assert_eq!(wit.u.to_string(), "000011001100110000");
    assert_eq!(wit.v.to_string(), "110011001100110011");
}

#[test]
fn sturmian_case_is_one_balanced() {
    let fib = limit_prefix(&[1; 40], 1, 100_000, Flavor::Primal).unwrap();
    assert_eq!(balance_profile(&fib, 1000).unwrap().constant, 1);
    let p = factor_complexity(&fib, 50).unwrap().counts();
    assert!(p.iter().enumerate().all(|(n, &c)| c == n as u64 + 1));
}

#[test]
fn small_complexity_values() {
    let d = arith(2, 10);
    let dual = limit_prefix(&d, 2, 100_000, Flavor::Dual).unwrap();
    let p = factor_complexity(&dual, 12).unwrap().counts();
    assert_eq!((p[1], p[3], p[4], p[12]), (2, 4, 6, 14));
    let primal = limit_prefix(&d, 2, 100_000, Flavor::Primal).unwrap();
    let p = factor_complexity(&primal, 3).unwrap().counts();
    assert_eq!((p[2], p[3]), (4, 5));
    let omega3 = limit_prefix(&arith(3, 10), 3, 100_000, Flavor::Primal).unwrap();
    assert_eq!(factor_complexity(&omega3, 2).unwrap().counts()[2], 4);
}

#[test]
fn left_special_examples() {
    let dual = limit_prefix(&arith(2, 10), 2, 100_000, Flavor::Dual).unwrap();
    let r3 = left_special(&dual, 3).unwrap();
    assert_eq!(r3.words(), vec!["000".to_string(), "001".to_string()]);
    let r2 = left_special(&dual, 2).unwrap();
    assert_eq!(r2.factors.len(), 1);
    assert!(r2.factors[0].is_prefix && r2.factors[0].is_total_bispecial);
}

#[test]
fn block_examples() {
    let d = arith(2, 10);
    let census = |f| maximal_blocks(&limit_prefix(&d, 2, 50_000, f).unwrap());
    let p = census(Flavor::Primal);
    assert_eq!(p.ones.iter().copied().collect::<Vec<_>>(), vec![2]);
    assert_eq!(p.zeros.iter().copied().collect::<Vec<_>>(), vec![2, 4]);
    let q = census(Flavor::Dual);
    assert_eq!(q.ones.iter().copied().collect::<Vec<_>>(), vec![1]);
    let t = maximal_blocks(&w("0110"));
    assert!(t.zeros.is_empty());
    assert_eq!(t.ones.iter().copied().collect::<Vec<_>>(), vec![2]);
}

#[test]
fn periodic_word_frequency() {
    let r = frequency_report(&w(&"01".repeat(500)), &w("01"), 5).unwrap();
    assert!(r.per_window.iter().all(|f| (f - 0.5).abs() < 1e-12));
}

#[test]
fn single_map_steps() {
    let (d, x) = gauss_step(0.75, 2.0).unwrap();
    assert_eq!(d, 2);
    assert!((x - 2.0 / 3.0).abs() < 1e-12);
    let (_, y) = farey_step(0.5, 2.0);
    assert!((y - 2.0 / 3.0).abs() < 1e-12);
}

#[test]
fn entropy_reference_values() {
    let g = std::f64::consts::PI.powi(2) / (6.0 * 2f64.ln());
    assert!((rokhlin_entropy(1).unwrap().value - g).abs() < 1e-9);
    let e = entropy_report(1).unwrap();
    assert!((e.formula + g).abs() < 1e-6);
    assert!(e.sign_mismatch);
}

#[test]
fn farey_interval_examples() {
    assert!(farey_invariance_check(0.25, 0.5, 2).unwrap().abs() < 1e-12);
    assert!(farey_invariance_check(0.1, 1.0, 5).unwrap().abs() < 1e-12);
    assert_eq!(farey_invariance_check(0.3, 0.3, 2).unwrap(), 0.0);
}
