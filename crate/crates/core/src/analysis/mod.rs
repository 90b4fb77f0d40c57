//! Combinatorics of finite binary words: balance, factor complexity, left
//! special factors, maximal blocks and factor frequencies.

mod balance;
mod blocks;
mod complexity;
mod frequency;
mod special;
pub mod suffix;

pub use balance::{
    balance_profile, digit_floor_balance_bound, find_imbalance_witness, search_imbalance_witness, BalanceEntry,
    BalanceProfile, ImbalanceWitness,
};
pub use blocks::{maximal_blocks, BlockCensus};
pub use complexity::{
    complexity_closed_form, displayed_closed_form, factor_complexity, profile_mismatches, Band, ComplexityEntry,
    ComplexityProfile, DisplayedFormEntry, DisplayedFormReport, Threshold,
};
pub use frequency::{frequency_report, letter_ratio, FrequencyReport};
pub use special::{common_prefix_len, left_special, left_special_range, SpecialFactor, SpecialFactorReport};
pub use suffix::FactorIndex;
