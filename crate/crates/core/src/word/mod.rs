//! Binary words, substitutions on `{0, 1}` and prefixes of the limit words.

mod binary;
mod sadic;
mod subst;

pub use binary::{AbelianVector, BinaryWord, Run};
pub use sadic::{
    digits_for_length, limit_prefix, limit_prefix_with_depth, matrix_product, sigma_lengths, sigma_word,
    slow_limit_prefix, slow_rule, special_words, thresholds, Flavor,
};
pub use subst::{Matrix2, RuleLabel, SubstitutionRule};
