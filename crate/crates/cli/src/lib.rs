//! Front end for `ncf-core`: argument parsing and command dispatch.
//!
//! [`parse_args`] turns an argument vector into a [`CommandSpec`]; [`run`]
//! executes it and returns the exit code together with the rendered output,
//! so both halves can be tested without spawning a process.

use std::fmt::Write as _;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use ncf_core::analysis::{
    balance_profile, displayed_closed_form, frequency_report, left_special_range, maximal_blocks,
    search_imbalance_witness,
};
use ncf_core::dynamics::{
    entropy_report, farey_digit_semantics_check, farey_invariance_check, growth_rate, levy_simulation,
    natext_invariance_check, orbit, pushforward_check, MapKind,
};
use ncf_core::expansion::{convergents, detect_period, slow_digits, slow_values, DigitSource};
use ncf_core::verify::{self, verify_balance, verify_blocks, verify_complexity, verify_special};
use ncf_core::word::{
    digits_for_length, limit_prefix_with_depth, sigma_word, slow_limit_prefix, special_words, Flavor,
};
use ncf_core::{BinaryWord, Digit, NcfError};

/// Digits pulled from a source when the needed count is not known upfront.
const DIGIT_BUDGET: usize = 256;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Plain,
    Json,
    Csv,
}

fn parse_n(s: &str) -> Result<u64, String> {
    match s.parse::<u64>() {
        Ok(0) => Err("N must be ≥ 1".into()),
        Ok(n) => Ok(n),
        Err(_) => Err(format!("{s:?} is not a positive integer; N must be ≥ 1")),
    }
}

fn parse_positive(s: &str) -> Result<usize, String> {
    match s.parse::<usize>() {
        Ok(0) => Err("must be positive".into()),
        Ok(v) => Ok(v),
        Err(_) => Err(format!("{s:?} is not a positive integer")),
    }
}

/// Parsed command line.
#[derive(Debug, Parser)]
#[command(name = "ncf", version, about = "N-continued fraction expansions and their S-adic words")]
pub struct CommandSpec {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value = "plain")]
    pub format: Format,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Greedy digits, convergents and slow digits of a source.
    Expand(ExpandArgs),
    /// Prefixes of the limit words, generating words and special words.
    Word(WordCmd),
    /// Combinatorics of a limit-word prefix.
    #[command(subcommand)]
    Analyze(AnalyzeCmd),
    /// Orbits, entropy, growth rate and invariant measures.
    #[command(subcommand)]
    Dynamics(DynamicsCmd),
    /// Checks with a pass/fail exit status (2 on failure).
    #[command(subcommand)]
    Verify(VerifyCmd),
}

#[derive(Debug, Clone, Args)]
pub struct SourceArgs {
    /// Numerator N.
    #[arg(long = "N", value_parser = parse_n)]
    pub n: u64,
    /// Digit source, e.g. `surd:a=-1,b=1,c=1,D=2` or `arith:start=2,step=1`.
    #[arg(long)]
    pub source: DigitSource,
}

#[derive(Debug, Clone, Args)]
pub struct WordArgs {
    #[command(flatten)]
    pub src: SourceArgs,
    /// Prefix length.
    #[arg(long, value_parser = parse_positive)]
    pub len: usize,
    #[arg(long, default_value = "primal")]
    pub flavor: Flavor,
}

#[derive(Debug, Args)]
pub struct ExpandArgs {
    #[command(flatten)]
    pub src: SourceArgs,
    #[arg(long, value_parser = parse_positive, default_value = "10")]
    pub count: usize,
    /// Also list the convergents `p_k/q_k`.
    #[arg(long)]
    pub convergents: bool,
    /// Also list this many slow-expansion symbols.
    #[arg(long)]
    pub slow: Option<usize>,
    /// Search for an exact period within this many steps.
    #[arg(long)]
    pub period: Option<usize>,
}

#[derive(Debug, Args)]
pub struct WordCmd {
    #[command(flatten)]
    pub src: SourceArgs,
    #[arg(long, default_value = "primal")]
    pub flavor: Flavor,
    /// Prefix length of the limit word.
    #[arg(long, value_parser = parse_positive, required_unless_present_any = ["sigma", "special"])]
    pub len: Option<usize>,
    /// Print the generating word `Σ_k` instead.
    #[arg(long, conflicts_with_all = ["len", "special"])]
    pub sigma: Option<usize>,
    /// Print the special words `S_k` and `T_k` instead.
    #[arg(long, conflicts_with = "len")]
    pub special: Option<usize>,
    /// Build the prefix from the slow directive sequence (`τ_B`, `τ_D`).
    #[arg(long, requires = "len")]
    pub slow: bool,
    /// Run-length output (`count:letter` tokens).
    #[arg(long)]
    pub rle: bool,
}

#[derive(Debug, Subcommand)]
pub enum AnalyzeCmd {
    /// Spread of letter counts over windows of each length.
    Balance {
        #[command(flatten)]
        word: WordArgs,
        #[arg(long, value_parser = parse_positive, default_value = "2048")]
        lmax: usize,
        /// Also report the first window pair whose spread reaches this value.
        #[arg(long)]
        witness: Option<u64>,
    },
    /// Factor complexity of the prefix next to the difference law.
    Complexity {
        #[command(flatten)]
        src: SourceArgs,
        #[arg(long, default_value = "primal")]
        flavor: Flavor,
        #[arg(long, value_parser = parse_positive)]
        nmax: usize,
    },
    /// Displayed closed forms against the difference law.
    ClosedForm {
        #[command(flatten)]
        src: SourceArgs,
        #[arg(long, default_value = "primal")]
        flavor: Flavor,
        #[arg(long, value_parser = parse_positive)]
        nmax: usize,
    },
    /// Left special factors of lengths `n..=to`.
    Special {
        #[command(flatten)]
        word: WordArgs,
        #[arg(long = "n")]
        n_len: usize,
        #[arg(long)]
        to: Option<usize>,
    },
    /// Lengths of interior runs of each letter.
    Blocks {
        #[command(flatten)]
        word: WordArgs,
    },
    /// Occurrence frequency of a factor over disjoint windows.
    Frequency {
        #[command(flatten)]
        word: WordArgs,
        #[arg(long)]
        factor: BinaryWord,
        #[arg(long, value_parser = parse_positive, default_value = "16")]
        windows: usize,
    },
}

#[derive(Debug, Subcommand)]
pub enum DynamicsCmd {
    /// Iterate `T`, `F` or `NatExt` from a seed.
    Orbit {
        #[arg(long)]
        map: MapKind,
        #[arg(long = "N", value_parser = parse_n)]
        n: u64,
        #[arg(long)]
        x0: f64,
        #[arg(long)]
        y0: Option<f64>,
        #[arg(long, value_parser = parse_positive, default_value = "10")]
        steps: usize,
    },
    /// Entropy formula next to the integral of `log|T'|`.
    Entropy {
        #[arg(long = "N", value_parser = parse_n)]
        n: u64,
    },
    /// `(1/k) log q_k` along a source, or averaged over random orbits.
    Growth {
        #[arg(long = "N", value_parser = parse_n)]
        n: u64,
        /// Digit source; omit to simulate random orbits.
        #[arg(long)]
        source: Option<DigitSource>,
        #[arg(long, value_parser = parse_positive, default_value = "1000")]
        count: usize,
        #[arg(long, value_parser = parse_positive, default_value = "100")]
        runs: usize,
        #[arg(long, default_value = "0")]
        seed: u64,
    },
    /// Slow-map digit semantics, or the `dx/x` preimage residual of `(a, b)`.
    Farey {
        #[arg(long = "N", value_parser = parse_n)]
        n: u64,
        #[arg(long, required_unless_present = "a")]
        source: Option<DigitSource>,
        #[arg(long, value_parser = parse_positive, default_value = "12")]
        count: usize,
        #[arg(long, requires = "b")]
        a: Option<f64>,
        #[arg(long, requires = "a")]
        b: Option<f64>,
    },
    /// Histogram of a natural-extension orbit against the invariant density.
    Natext {
        #[arg(long = "N", value_parser = parse_n)]
        n: u64,
        #[arg(long, default_value = "1000000")]
        iterations: usize,
        #[arg(long, default_value = "20")]
        bins: usize,
        #[arg(long, default_value = "0")]
        seed: u64,
        /// One-step pushforward of independent samples instead (`T` or `NatExt`).
        #[arg(long)]
        pushforward: Option<MapKind>,
    },
}

#[derive(Debug, Subcommand)]
pub enum VerifyCmd {
    /// Balance bound and imbalance witness (dual flavor unless told otherwise).
    Balance {
        #[command(flatten)]
        src: SourceArgs,
        #[arg(long, value_parser = parse_positive)]
        len: usize,
        #[arg(long, default_value = "dual")]
        flavor: Flavor,
        #[arg(long, value_parser = parse_positive, default_value = "2048")]
        lmax: usize,
    },
    /// Empirical complexity equals the difference law (both flavors by default).
    Complexity {
        #[command(flatten)]
        src: SourceArgs,
        #[arg(long)]
        flavor: Option<Flavor>,
        #[arg(long, value_parser = parse_positive, default_value = "200")]
        nmax: usize,
    },
    /// Non-prefix maximal left special factors are the words `T_j`.
    Special {
        #[command(flatten)]
        src: SourceArgs,
        #[arg(long, default_value = "dual")]
        flavor: Flavor,
        #[arg(long, value_parser = parse_positive, default_value = "3")]
        k: usize,
    },
    /// Interior run lengths.
    Blocks {
        #[command(flatten)]
        word: WordArgs,
    },
    /// The numbered acceptance criteria.
    Acceptance {
        #[arg(long, value_parser = clap::value_parser!(u32).range(1..=14))]
        id: Option<u32>,
    },
}

/// Parses `argv` (including the program name).
pub fn parse_args<I, T>(argv: I) -> Result<CommandSpec, clap::Error>
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    CommandSpec::try_parse_from(argv)
}

/// Exit status plus rendered output of one command.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

/// A command result in every format it supports.
struct Report {
    json: Value,
    plain: String,
    csv: Option<String>,
    passed: bool,
}

impl Report {
    fn new(json: Value, plain: String) -> Self {
        Report { json, plain, csv: None, passed: true }
    }

    fn csv(mut self, csv: String) -> Self {
        self.csv = Some(csv);
        self
    }

    fn verdict(mut self, passed: bool) -> Self {
        self.passed = passed;
        self
    }
}

fn error_kind(e: &NcfError) -> &'static str {
    match e {
        NcfError::Domain(_) => "domain",
        NcfError::Representation(_) => "representation",
        NcfError::Argument(_) => "argument",
        NcfError::InsufficientDigits(_) => "insufficient_digits",
        NcfError::PrefixTooShort(_) => "prefix_too_short",
        NcfError::Numeric(_) => "numeric",
        NcfError::Parse(_) => "parse",
    }
}

/// Executes a parsed command. Exit codes: 0 success, 1 error, 2 failed check.
pub fn run(spec: &CommandSpec) -> Outcome {
    match dispatch(&spec.command) {
        Ok(report) => {
            let code = if report.passed { 0 } else { 2 };
            let body = match spec.format {
                Format::Json => serde_json::to_string_pretty(&report.json).expect("reports serialize"),
                Format::Plain => report.plain,
                Format::Csv => match report.csv {
                    Some(c) => c,
                    None => {
                        return Outcome {
                            code: 1,
                            stdout: String::new(),
                            stderr: "error: this command has no CSV form; use --format plain or json\n".into(),
                        }
                    }
                },
            };
            Outcome { code, stdout: ensure_newline(body), stderr: String::new() }
        }
        Err(e) => match spec.format {
            Format::Json => Outcome {
                code: 1,
                stdout: ensure_newline(
                    serde_json::to_string_pretty(&json!({"error": {"kind": error_kind(&e), "message": e.to_string()}}))
                        .expect("error serializes"),
                ),
                stderr: String::new(),
            },
            _ => Outcome { code: 1, stdout: String::new(), stderr: format!("error: {e}\n") },
        },
    }
}

fn ensure_newline(mut s: String) -> String {
    if !s.ends_with('\n') {
        s.push('\n');
    }
    s
}

fn dispatch(cmd: &Command) -> ncf_core::Result<Report> {
    match cmd {
        Command::Expand(a) => expand(a),
        Command::Word(a) => word(a),
        Command::Analyze(a) => analyze(a),
        Command::Dynamics(a) => dynamics(a),
        Command::Verify(a) => verify_cmd(a),
    }
}

fn join<T: ToString>(items: &[T], sep: &str) -> String {
    items.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(sep)
}

fn to_json<T: serde::Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("report types serialize")
}

fn budget_digits(src: &SourceArgs) -> ncf_core::Result<Vec<Digit>> {
    Ok(src.source.take(src.n, DIGIT_BUDGET)?.digits)
}

/// Digits and limit-word prefix for a [`WordArgs`].
fn build_prefix(w: &WordArgs) -> ncf_core::Result<(Vec<Digit>, BinaryWord, usize)> {
    let digits = digits_for_length(&w.src.source, w.src.n, w.len, w.flavor)?;
    let (word, k) = limit_prefix_with_depth(&digits, w.src.n, w.len, w.flavor)?;
    Ok((digits.digits[..k.saturating_sub(1).min(digits.len())].to_vec(), word, k))
}

fn expand(a: &ExpandArgs) -> ncf_core::Result<Report> {
    let n = a.src.n;
    let seq = a.src.source.take(n, a.count)?;
    let mut json = json!({
        "N": n,
        "source": a.src.source.to_string(),
        "digits": seq.digits,
        "terminated": seq.terminated,
    });
    let mut plain = join(&seq.digits, " ");
    let mut csv = String::from("k,digit\n");
    for (i, d) in seq.iter().enumerate() {
        let _ = writeln!(csv, "{},{d}", i + 1);
    }
    if a.convergents && !seq.is_empty() {
        let cs = convergents(&seq, n, seq.len())?;
        json["convergents"] = to_json(&cs);
        csv = String::from("k,digit,p,q\n");
        for (c, d) in cs.iter().zip(seq.iter()) {
            let _ = writeln!(plain, "\n{} {} {}", c.index, c.p, c.q).map(|_| ());
            let _ = writeln!(csv, "{},{d},{},{}", c.index, c.p, c.q);
        }
        plain = plain.trim_end().replace("\n\n", "\n");
    }
    if let Some(count) = a.slow {
        seq.validate_greedy(n)?;
        let slow = slow_digits(&seq, n, count)?;
        json["slow"] = to_json(&slow_values(&slow, n));
        let _ = write!(plain, "\nslow: {}", join(&slow_values(&slow, n), " "));
    }
    if let Some(steps) = a.period {
        match &a.src.source {
            DigitSource::FromReal(x) => {
                let p = detect_period(x, n, steps)?;
                json["period"] = match &p {
                    Some(p) => json!({"preperiod": p.preperiod, "period": p.period}),
                    None => Value::Null,
                };
                let _ = write!(
                    plain,
                    "\nperiod: {}",
                    p.map(|p| format!("pre [{}] per [{}]", join(&p.preperiod, " "), join(&p.period, " ")))
                        .unwrap_or_else(|| "none found".into())
                );
            }
            _ => return Err(NcfError::Argument("--period needs a surd or rational source".into())),
        }
    }
    Ok(Report::new(json, plain).csv(csv))
}

fn word_text(w: &BinaryWord, rle: bool) -> String {
    if rle {
        w.to_rle()
    } else {
        w.to_string()
    }
}

fn word(a: &WordCmd) -> ncf_core::Result<Report> {
    let n = a.src.n;
    if let Some(k) = a.sigma {
        let digits = budget_digits(&a.src)?;
        let w = sigma_word(&digits, n, k, a.flavor)?;
        let json = json!({"N": n, "flavor": a.flavor, "k": k, "length": w.len(), "word": w.to_string()});
        return Ok(Report::new(json, word_text(&w, a.rle)));
    }
    if let Some(k) = a.special {
        let digits = budget_digits(&a.src)?;
        let (s, t) = special_words(&digits, n, k, a.flavor)?;
        let json = json!({"N": n, "flavor": a.flavor, "k": k, "S": s.to_string(), "T": t.to_string()});
        return Ok(Report::new(json, format!("{}\n{}", word_text(&s, a.rle), word_text(&t, a.rle))));
    }
    let len = a.len.expect("clap requires --len here");
    if a.slow {
        let digits = budget_digits(&a.src)?;
        let count = digits.iter().map(|&d| (d.saturating_sub(n) + 1) as usize).sum();
        let slow = slow_digits(&digits, n, count)?;
        let w = slow_limit_prefix(&slow, n, len)?;
        let json = json!({"N": n, "directive": "slow", "length": w.len(), "word": w.to_string()});
        return Ok(Report::new(json, word_text(&w, a.rle)));
    }
    let wa = WordArgs { src: a.src.clone(), len, flavor: a.flavor };
    let (digits, w, k) = build_prefix(&wa)?;
    let json = json!({
        "N": n,
        "flavor": a.flavor,
        "length": w.len(),
        "depth": k,
        "digits_used": digits,
        "word": if a.rle { w.to_rle() } else { w.to_string() },
    });
    Ok(Report::new(json, word_text(&w, a.rle)))
}

fn analyze(cmd: &AnalyzeCmd) -> ncf_core::Result<Report> {
    match cmd {
        AnalyzeCmd::Balance { word, lmax, witness } => {
            let (_, w, _) = build_prefix(word)?;
            let profile = balance_profile(&w, (*lmax).min(w.len()))?;
            let wit = match witness {
                Some(t) => search_imbalance_witness(&w, (*lmax).min(w.len()), *t)?,
                None => None,
            };
            let mut plain = format!("balance constant {} over lengths 1..={}", profile.constant, profile.entries.len());
            if let Some(x) = &wit {
                let _ = write!(plain, "\nwitness length {} u@{} {} v@{} {} spread {}", x.length, x.u_pos, x.u, x.v_pos, x.v, x.spread);
            } else if let Some(t) = witness {
                let _ = write!(plain, "\nno window pair with spread {t}");
            }
            let mut csv = String::from("length,min1,max1,spread\n");
            for e in &profile.entries {
                let _ = writeln!(csv, "{},{},{},{}", e.length, e.min1, e.max1, e.spread);
            }
            let json = json!({"N": word.src.n, "flavor": word.flavor, "length": w.len(), "profile": profile, "witness": wit});
            Ok(Report::new(json, plain).csv(csv))
        }
        AnalyzeCmd::Complexity { src, flavor, nmax } => {
            let v = verify_complexity(&budget_digits(src)?, src.n, *nmax, *flavor)?;
            let mut plain = format!("prefix length {}\nn p closed_form ls band", v.prefix_len);
            let mut csv = String::from("n,p,closed_form,ls_count,band\n");
            for (e, c) in v.empirical.entries.iter().zip(&v.closed_form.entries) {
                let band = c.band.map(|b| b.to_string()).unwrap_or_default();
                let _ = write!(plain, "\n{} {} {} {} {}", e.n, e.p, c.p, e.ls_count, band);
                let _ = writeln!(csv, "{},{},{},{},{}", e.n, e.p, c.p, e.ls_count, band);
            }
            let json = json!({
                "N": src.n,
                "flavor": flavor,
                "prefix_len": v.prefix_len,
                "empirical": v.empirical,
                "closed_form": v.closed_form,
                "mismatches": v.mismatches,
            });
            Ok(Report::new(json, plain).csv(csv))
        }
        AnalyzeCmd::ClosedForm { src, flavor, nmax } => {
            let r = displayed_closed_form(&budget_digits(src)?, src.n, *nmax, *flavor)?;
            let mut plain = String::from("n band difference_law displayed delta");
            let mut csv = String::from("n,band,difference_law,displayed,delta\n");
            for e in &r.entries {
                let _ = write!(plain, "\n{} {} {} {} {:+}", e.n, e.band, e.difference_law, e.displayed, e.delta);
                let _ = writeln!(csv, "{},{},{},{},{}", e.n, e.band, e.difference_law, e.displayed, e.delta);
            }
            Ok(Report::new(to_json(&r), plain).csv(csv))
        }
        AnalyzeCmd::Special { word, n_len, to } => {
            let (_, w, _) = build_prefix(word)?;
            let reports = left_special_range(&w, *n_len, to.unwrap_or(*n_len))?;
            let mut plain = String::new();
            let mut csv = String::from("n,factor,prefix,maximal,total_bispecial\n");
            for r in &reports {
                for f in &r.factors {
                    let mut flags = Vec::new();
                    if f.is_prefix {
                        flags.push("prefix");
                    }
                    if f.is_maximal {
                        flags.push("maximal");
                    }
                    if f.is_total_bispecial {
                        flags.push("total-bispecial");
                    }
                    let _ = writeln!(plain, "{} {} {}", r.n, f.factor, flags.join(","));
                    let _ = writeln!(csv, "{},{},{},{},{}", r.n, f.factor, f.is_prefix, f.is_maximal, f.is_total_bispecial);
                }
            }
            Ok(Report::new(to_json(&reports), plain).csv(csv))
        }
        AnalyzeCmd::Blocks { word } => {
            let (_, w, _) = build_prefix(word)?;
            let c = maximal_blocks(&w);
            let plain = format!(
                "0-runs {}\n1-runs {}",
                join(&c.zeros.iter().collect::<Vec<_>>(), " "),
                join(&c.ones.iter().collect::<Vec<_>>(), " ")
            );
            Ok(Report::new(to_json(&c), plain))
        }
        AnalyzeCmd::Frequency { word, factor, windows } => {
            let (_, w, _) = build_prefix(word)?;
            let r = frequency_report(&w, factor, *windows)?;
            let plain = format!(
                "factor {} mean {:.6e} max deviation {:.3e}\n{}",
                r.factor,
                r.mean,
                r.max_deviation,
                join(&r.per_window.iter().map(|f| format!("{f:.6e}")).collect::<Vec<_>>(), " ")
            );
            let mut csv = String::from("window,frequency\n");
            for (i, f) in r.per_window.iter().enumerate() {
                let _ = writeln!(csv, "{i},{f:e}");
            }
            Ok(Report::new(to_json(&r), plain).csv(csv))
        }
    }
}

fn dynamics(cmd: &DynamicsCmd) -> ncf_core::Result<Report> {
    match cmd {
        DynamicsCmd::Orbit { map, n, x0, y0, steps } => {
            let seed: Vec<f64> = std::iter::once(*x0).chain(*y0).collect();
            let o = orbit(*map, *n, &seed, *steps)?;
            let ys = o.ys.clone().unwrap_or_default();
            let mut plain = String::new();
            let mut csv = String::from("step,x,y,digit\n");
            for (i, x) in o.xs.iter().enumerate() {
                let y = ys.get(i).map(|y| y.to_string()).unwrap_or_default();
                let sym = match map {
                    MapKind::Farey => o.slow.get(i).map(|s| s.value(*n).to_string()),
                    _ => o.digits.get(i).map(|d| d.to_string()),
                }
                .unwrap_or_default();
                if y.is_empty() {
                    let _ = writeln!(plain, "{} {x} {sym}", i + 1);
                } else {
                    let _ = writeln!(plain, "{} {x} {y} {sym}", i + 1);
                }
                let _ = writeln!(csv, "{},{x},{y},{sym}", i + 1);
            }
            Ok(Report::new(to_json(&o), plain).csv(csv))
        }
        DynamicsCmd::Entropy { n } => {
            let e = entropy_report(*n)?;
            let plain = format!(
                "formula {:.12}\nintegral {:.12}\nsign_mismatch {}\nabs_gap {:.3e}",
                e.formula, e.rokhlin, e.sign_mismatch, e.abs_gap
            );
            Ok(Report::new(to_json(&e), plain))
        }
        DynamicsCmd::Growth { n, source, count, runs, seed } => match source {
            Some(src) => {
                let digits = src.take(*n, *count)?;
                let g = growth_rate(&digits, *n, *count)?;
                let mut csv = String::from("k,log_q,word_length,cylinder\n");
                for k in 0..g.log_q.len() {
                    let _ = writeln!(csv, "{},{},{},{}", k + 1, g.log_q[k], g.word_length[k], g.cylinder[k]);
                }
                let plain = format!(
                    "k = {}: (1/k) log q_k = {:.6}, cylinder rate {:.6}",
                    g.log_q.len(),
                    g.last().unwrap_or(f64::NAN),
                    g.cylinder.last().copied().unwrap_or(f64::NAN)
                );
                Ok(Report::new(to_json(&g), plain).csv(csv))
            }
            None => {
                let est = levy_simulation(*n, *count, *runs, *seed)?;
                let mut csv = String::from("seed,rate\n");
                for (s, r) in est.seeds.iter().zip(&est.rates) {
                    let _ = writeln!(csv, "{s},{r}");
                }
                let plain = format!("mean {:.6} std {:.6} over {} orbits of length {}", est.mean, est.std_dev, runs, count);
                Ok(Report::new(to_json(&est), plain).csv(csv))
            }
        },
        DynamicsCmd::Farey { n, source, count, a, b } => {
            if let (Some(a), Some(b)) = (a, b) {
                let residual = farey_invariance_check(*a, *b, *n)?;
                let json = json!({"N": n, "a": a, "b": b, "residual": residual});
                return Ok(Report::new(json, format!("residual {residual:.3e}")));
            }
            let src = source.as_ref().expect("clap requires --source without --a");
            let digits = src.take(*n, *count)?;
            let steps = digits.iter().map(|&d| (d.saturating_sub(*n) + 1) as usize).sum();
            let r = farey_digit_semantics_check(&digits, *n, steps)?;
            let plain = format!(
                "trace {}\npassed {}",
                join(&r.trace.iter().map(|s| s.value(*n)).collect::<Vec<_>>(), " "),
                r.passed
            );
            let passed = r.passed;
            Ok(Report::new(to_json(&r), plain).verdict(passed))
        }
        DynamicsCmd::Natext { n, iterations, bins, seed, pushforward } => {
            if let Some(map) = pushforward {
                let d = pushforward_check(*map, *n, *iterations, *bins, *seed)?;
                let plain = format!("total variation {:.3e}, sup {:.3e}", d.total_variation, d.sup_norm);
                let csv = d.to_csv();
                return Ok(Report::new(to_json(&d), plain).csv(csv));
            }
            let r = natext_invariance_check(*n, *iterations, *bins, *seed)?;
            let plain = format!(
                "joint total variation {:.3e} (sup {:.3e})\nmarginal total variation {:.3e}\ntheoretical mass {:.12}",
                r.joint.total_variation, r.joint.sup_norm, r.marginal.total_variation, r.joint.theoretical_sum
            );
            let csv = r.joint.to_csv();
            Ok(Report::new(to_json(&r), plain).csv(csv))
        }
    }
}

fn verify_cmd(cmd: &VerifyCmd) -> ncf_core::Result<Report> {
    match cmd {
        VerifyCmd::Balance { src, len, flavor, lmax } => {
            let digits = digits_for_length(&src.source, src.n, *len, *flavor)?;
            let v = verify_balance(&digits, src.n, *len, *lmax, *flavor)?;
            let plain = format!(
                "{} spread {} <= {}; witness spread {}",
                if v.passed { "PASS" } else { "FAIL" },
                v.observed,
                v.bound,
                v.witness.as_ref().map(|w| w.spread.to_string()).unwrap_or_else(|| "none".into())
            );
            let passed = v.passed;
            Ok(Report::new(to_json(&v), plain).verdict(passed))
        }
        VerifyCmd::Complexity { src, flavor, nmax } => {
            let digits = budget_digits(src)?;
            let flavors = match flavor {
                Some(f) => vec![*f],
                None => vec![Flavor::Primal, Flavor::Dual],
            };
            let mut reports = Vec::new();
            let mut plain = String::new();
            let mut passed = true;
            for f in flavors {
                let v = verify_complexity(&digits, src.n, *nmax, f)?;
                passed &= v.passed;
                let _ = writeln!(
                    plain,
                    "{} {f}: p(n) matches the difference law for n <= {nmax} (prefix {}){}",
                    if v.passed { "PASS" } else { "FAIL" },
                    v.prefix_len,
                    if v.mismatches.is_empty() { String::new() } else { format!(", mismatches at {:?}", v.mismatches) }
                );
                reports.push(json!({
                    "flavor": f,
                    "passed": v.passed,
                    "prefix_len": v.prefix_len,
                    "mismatches": v.mismatches,
                    "shape_ok": v.shape_ok,
                    "empirical": v.empirical.counts(),
                    "closed_form": v.closed_form.counts(),
                    "displayed_deltas": v.displayed.deltas,
                }));
            }
            Ok(Report::new(json!({"N": src.n, "n_max": nmax, "reports": reports}), plain).verdict(passed))
        }
        VerifyCmd::Special { src, flavor, k } => {
            let v = verify_special(&budget_digits(src)?, src.n, *k, *flavor)?;
            let plain = format!(
                "{} maximal non-prefix left special factors up to length {}: {}",
                if v.passed { "PASS" } else { "FAIL" },
                v.max_len,
                v.found.join(" ")
            );
            let passed = v.passed;
            Ok(Report::new(to_json(&v), plain).verdict(passed))
        }
        VerifyCmd::Blocks { word } => {
            let digits = digits_for_length(&word.src.source, word.src.n, word.len, word.flavor)?;
            let v = verify_blocks(&digits, word.src.n, word.len, word.flavor)?;
            let plain = format!(
                "{} 0-runs {:?} 1-runs {:?}",
                if v.passed { "PASS" } else { "FAIL" },
                v.census.zeros,
                v.census.ones
            );
            let passed = v.passed;
            Ok(Report::new(to_json(&v), plain).verdict(passed))
        }
        VerifyCmd::Acceptance { id } => {
            let reports = match id {
                Some(i) => vec![verify::run_criterion(*i)?],
                None => verify::run_all(),
            };
            let mut plain = String::new();
            for r in &reports {
                let _ = writeln!(plain, "{}", r.status_line());
                for d in &r.details {
                    let _ = writeln!(plain, "    {d}");
                }
            }
            let passed = reports.iter().all(|r| r.passed);
            Ok(Report::new(to_json(&reports), plain).verdict(passed))
        }
    }
}

/// Renders a parse failure. Help and version requests exit 0; everything else
/// is a usage error (exit 1), structured as JSON when `--format json` was asked for.
pub fn parse_error_outcome<T: AsRef<std::ffi::OsStr>>(argv: &[T], err: &clap::Error) -> Outcome {
    use clap::error::{ContextKind, ErrorKind};
    if matches!(err.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
        return Outcome { code: 0, stdout: err.render().to_string(), stderr: String::new() };
    }
    let args: Vec<_> = argv.iter().map(|a| a.as_ref().to_string_lossy().into_owned()).collect();
    let wants_json =
        args.iter().any(|a| a == "--format=json") || args.windows(2).any(|w| w[0] == "--format" && w[1] == "json");
    if !wants_json {
        return Outcome { code: 1, stdout: String::new(), stderr: err.render().to_string() };
    }
    let flag = err.get(ContextKind::InvalidArg).map(|v| v.to_string());
    let message = err.render().to_string();
    let message = message.lines().next().unwrap_or_default().trim_start_matches("error: ").to_string();
    let body = json!({"error": {"kind": "usage", "flag": flag, "message": message}});
    Outcome {
        code: 1,
        stdout: ensure_newline(serde_json::to_string_pretty(&body).expect("error serializes")),
        stderr: String::new(),
    }
}

/// Sizes the global thread pool from `NCF_THREADS` when it holds a positive integer.
pub fn configure_threads() {
    if let Some(t) = std::env::var("NCF_THREADS").ok().and_then(|v| v.parse::<usize>().ok()).filter(|&t| t > 0) {
        let _ = rayon::ThreadPoolBuilder::new().num_threads(t).build_global();
    }
}
