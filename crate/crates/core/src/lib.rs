//! Exact N-continued fraction (NCF) expansions and the binary S-adic words
//! they direct.
//!
//! For a fixed numerator `N >= 1` the map `T_N(x) = N/x - floor(N/x)` produces
//! greedy digits `d_n >= N`. Each digit selects a substitution (primal
//! `0 -> 0^d 1^N, 1 -> 0` or dual `0 -> 0^d 1, 1 -> 0^N`) and the nested images
//! converge to the words `ω(x, N)` and `ŵ(x, N)`.
//!
//! The crate is split into four layers:
//!
//! * [`expansion`]: exact digits, convergents, cylinders and slow digits.
//! * [`word`]: binary words, substitutions, incidence matrices, limit prefixes.
//! * [`analysis`]: balance, factor complexity, special factors, frequencies.
//! * [`dynamics`]: floating-point orbits, entropy, growth rate, invariant measures.
//!
//! [`verify`] bundles the end-to-end checks used by the acceptance suite and
//! the `ncf verify` command.

pub mod analysis;
pub mod dynamics;
mod dec;
pub mod error;
pub mod expansion;
pub mod verify;
pub mod word;

pub use error::{NcfError, Result};
pub use expansion::{
    convergents, cylinder, evaluate_cf, greedy_digits, slow_digits, tn_step, ConvergentPair,
    DigitSequence, DigitSource, ExactReal, QuadSurd, RationalInterval, SlowSymbol,
};
pub use word::{
    limit_prefix, matrix_product, sigma_word, slow_limit_prefix, special_words, AbelianVector,
    BinaryWord, Flavor, Matrix2, Run, RuleLabel, SubstitutionRule,
};

/// NCF digit. Greedy digits satisfy `d >= N`; every digit is at least 1.
pub type Digit = u64;
