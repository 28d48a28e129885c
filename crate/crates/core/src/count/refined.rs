//! Refined totals for `A_n = Av_n(123,132,321)`: members split by where the
//! value 1 sits (last position: `A_n^r`, second to last: `A_n^l`) and, inside
//! `A_n^l`, by the last letter `k` (the parts `B_n^k`).

use num_bigint::BigUint;
use num_traits::Zero;

use super::dp::TripleDp;
use super::enumerate_class;
use crate::error::{Error, Result};
use crate::perm::{consecutive_occurrences, Pattern, PatternSet};

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct PartTotals {
    pub size: BigUint,
    pub occ312: BigUint,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RefinedCounts {
    pub n: usize,
    /// `A_n^r`: members ending in 1.
    pub right: PartTotals,
    /// `A_n^l`: members with 1 in position `n - 1`.
    pub left: PartTotals,
    /// `(k, B_n^k)` for `k = 2..=n`.
    pub by_last_letter: Vec<(u32, PartTotals)>,
}

fn class11() -> PatternSet {
    "123,132,321".parse().expect("static pattern set")
}

fn p312() -> Pattern {
    "312".parse().expect("static pattern")
}

/// Reads the split directly off the final state grid of the DP: the ranks
/// of the last two letters in a full permutation are their values.
pub fn refined_counts_class11(n: usize) -> Result<RefinedCounts> {
    if n < 2 {
        return Err(Error::Domain(format!("refined counts need n >= 2, got {n}")));
    }
    let mut dp = TripleDp::new(&class11(), &[p312()]);
    while dp.len() < n {
        dp.step();
    }
    let part = |prev: usize, last: usize| {
        let (c, o) = dp.cell(prev, last);
        PartTotals { size: c.clone(), occ312: o[0].clone() }
    };
    let mut right = PartTotals::default();
    for prev in 2..=n {
        let p = part(prev, 1);
        right.size += p.size;
        right.occ312 += p.occ312;
    }
    let mut left = PartTotals::default();
    let mut by_last_letter = Vec::with_capacity(n - 1);
    for last in 2..=n {
        let p = part(1, last);
        left.size += &p.size;
        left.occ312 += &p.occ312;
        by_last_letter.push((last as u32, p));
    }
    Ok(RefinedCounts { n, right, left, by_last_letter })
}

/// Same split computed by enumerating the class.
pub fn refined_counts_class11_brute(n: usize) -> Result<RefinedCounts> {
    if n < 2 {
        return Err(Error::Domain(format!("refined counts need n >= 2, got {n}")));
    }
    let q = p312();
    let mut right = PartTotals::default();
    let mut left = PartTotals::default();
    let mut by_last: Vec<PartTotals> = vec![PartTotals::default(); n + 1];
    for p in enumerate_class(n, &class11()) {
        let occ = BigUint::from(consecutive_occurrences(&p, &q).len());
        let w = p.word();
        if w[n - 1] == 1 {
            right.size += 1u32;
            right.occ312 += occ;
        } else if w[n - 2] == 1 {
            left.size += 1u32;
            left.occ312 += &occ;
            let part = &mut by_last[w[n - 1] as usize];
            part.size += 1u32;
            part.occ312 += occ;
        }
    }
    let by_last_letter = (2..=n).map(|k| (k as u32, std::mem::take(&mut by_last[k]))).collect();
    debug_assert!(by_last[0].size.is_zero());
    Ok(RefinedCounts { n, right, left, by_last_letter })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_examples() {
        let r3 = refined_counts_class11(3).unwrap();
        assert_eq!(r3.left.size, BigUint::from(2u32));
        assert_eq!(r3.left.occ312, BigUint::from(1u32));
        let r4 = refined_counts_class11(4).unwrap();
        assert_eq!(r4.right.size, BigUint::from(2u32));
        assert_eq!(r4.left.size, BigUint::from(3u32));
        let r5 = refined_counts_class11(5).unwrap();
        assert_eq!(r5.left.occ312, BigUint::from(9u32));
    }

    #[test]
    fn dp_matches_enumeration() {
        for n in 2..=10 {
            assert_eq!(refined_counts_class11(n).unwrap(), refined_counts_class11_brute(n).unwrap());
        }
    }

    #[test]
    fn rejects_tiny_n() {
        assert!(refined_counts_class11(1).is_err());
    }
}
