//! Brute-force totals over the enumerated class. Exponential; meant as the
//! reference the dynamic program is checked against.

use std::collections::BTreeMap;

use num_bigint::BigUint;

use super::{enumerate_class, PopularityRecord};
use crate::perm::{consecutive_occurrences, Pattern, PatternSet};

pub fn class_size(n: usize, ps: &PatternSet) -> BigUint {
    BigUint::from(enumerate_class(n, ps).count())
}

/// Total consecutive occurrences of `q` over `Av_n(ps)`; `q` may have any length.
pub fn popularity(n: usize, ps: &PatternSet, q: &Pattern) -> BigUint {
    let total: usize = enumerate_class(n, ps).map(|p| consecutive_occurrences(&p, q).len()).sum();
    BigUint::from(total)
}

/// One enumeration pass tallying every pattern in `targets`.
pub fn record(n: usize, ps: &PatternSet, targets: &[Pattern]) -> PopularityRecord {
    let mut size = 0usize;
    let mut totals = vec![0usize; targets.len()];
    for p in enumerate_class(n, ps) {
        size += 1;
        for (t, q) in totals.iter_mut().zip(targets) {
            *t += consecutive_occurrences(&p, q).len();
        }
    }
    PopularityRecord {
        n,
        class_size: BigUint::from(size),
        occurrences: targets.iter().cloned().zip(totals.into_iter().map(BigUint::from)).collect::<BTreeMap<_, _>>(),
    }
}
