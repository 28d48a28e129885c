//! Exact class sizes and pattern popularities for `Av_n(ps)`.
//!
//! Two independent routes are provided: lexicographic backtracking
//! ([`enumerate_class`] and the [`brute`] totals built on it) and a
//! suffix-signature dynamic program ([`dp`]). The enumerator is the oracle
//! the DP is tested against.

use std::collections::BTreeMap;

use num_bigint::BigUint;

use crate::perm::Pattern;

pub mod brute;
pub mod dp;
mod enumerate;
mod refined;

pub use dp::{class_size, occurrence_table, popularity_exact, popularity_record, Engine, SuffixSignature};
pub use enumerate::{enumerate_class, ClassIter};
pub use refined::{refined_counts_class11, refined_counts_class11_brute, PartTotals, RefinedCounts};

/// Class size and total occurrences of each tracked pattern at one size `n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PopularityRecord {
    pub n: usize,
    pub class_size: BigUint,
    pub occurrences: BTreeMap<Pattern, BigUint>,
}

impl PopularityRecord {
    pub fn occurrences_of(&self, q: &Pattern) -> Option<&BigUint> {
        self.occurrences.get(q)
    }
}
