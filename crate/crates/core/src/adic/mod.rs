//! S-adic sequences: directive sequences over a finite set of
//! substitutions and the limit words they generate.

mod chains;
mod directive;
mod stats;

pub use chains::{
    derivation_at_depth, derivation_for_length, first_letter_map, is_primitive_sequence,
    limit_letter_chains, limit_point_prefix, telescoping_decomposition, Derivation, LetterChain,
    PrefixPiece, CHAIN_LOOKAHEAD, MAX_DEPTH,
};
pub use directive::{DirectiveSequence, SubstitutionSet};
pub use stats::{balance, factor_gap_check, BalanceReport, GapReport};
