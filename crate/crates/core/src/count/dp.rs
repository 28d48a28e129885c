//! Suffix-signature dynamic program.
//!
//! Permutations are grown left to right by relative-rank insertion: a prefix
//! of length `k` is extended by a letter of rank `r` in `1..=k+1`, shifting
//! every earlier letter of rank `>= r` up by one. The ranks (within the
//! prefix) of the last `w - 1` letters, `w` the longest tracked pattern,
//! determine the pattern of every new window, so a state only needs that
//! tuple plus the class count and the running occurrence totals.
//!
//! For length-3 patterns a dedicated engine aggregates transitions with
//! prefix sums, giving `O(k^2)` arithmetic per step instead of `O(k^3)`.

use std::collections::BTreeMap;

use num_bigint::BigUint;
use num_traits::{One, Zero};

use super::PopularityRecord;
use crate::error::{Error, Result};
use crate::perm::{window_code, Pattern, PatternSet};

/// Ranks of the last `m - 1` letters of a prefix of length `k`, each in
/// `1..=k`. Shorter while `k < m - 1`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SuffixSignature {
    pub ranks: Vec<u32>,
    pub k: usize,
}

/// Which engine serves a request. `Auto` picks the prefix-sum engine when
/// every pattern has length 3.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Engine {
    #[default]
    Auto,
    Generic,
}

/// `|Av_n(ps)|`.
pub fn class_size(n: usize, ps: &PatternSet) -> BigUint {
    occurrence_table(n, ps, &[], Engine::Auto)
        .expect("no targets to validate")
        .pop()
        .expect("table covers n")
        .class_size
}

/// Total number of consecutive occurrences of `q` over `Av_n(ps)`.
pub fn popularity_exact(n: usize, ps: &PatternSet, q: &Pattern) -> Result<BigUint> {
    if let Some(m) = ps.pattern_len() {
        if q.len() != m {
            return Err(Error::InvalidQuery(format!(
                "pattern {q} has length {}, the avoided patterns have length {m}",
                q.len()
            )));
        }
    }
    let mut table = occurrence_table(n, ps, std::slice::from_ref(q), Engine::Auto)?;
    let record = table.pop().expect("table covers n");
    Ok(record.occurrences.into_values().next().expect("one target"))
}

/// Class size and totals for every length-`m` pattern not in `ps`, in one pass.
pub fn popularity_record(n: usize, ps: &PatternSet) -> PopularityRecord {
    let targets = ps.complement_patterns();
    occurrence_table(n, ps, &targets, Engine::Auto)
        .expect("complement patterns are valid targets")
        .pop()
        .expect("table covers n")
}

/// Records for every size `0..=n_max` from a single left-to-right pass.
///
/// Targets may have any length but must not be avoided themselves.
pub fn occurrence_table(
    n_max: usize,
    ps: &PatternSet,
    targets: &[Pattern],
    engine: Engine,
) -> Result<Vec<PopularityRecord>> {
    for (i, q) in targets.iter().enumerate() {
        if ps.contains(q) {
            return Err(Error::InvalidQuery(format!("pattern {q} is avoided by the class")));
        }
        if targets[..i].contains(q) {
            return Err(Error::InvalidQuery(format!("pattern {q} requested twice")));
        }
    }
    if ps.is_empty() {
        return Ok(symmetric_group_table(n_max, targets));
    }
    let all_triples = ps.pattern_len() == Some(3) && targets.iter().all(|q| q.len() == 3);
    let raw = if engine == Engine::Auto && all_triples {
        triple_table(n_max, ps, targets)
    } else {
        generic_table(n_max, ps, targets)
    };
    Ok(raw
        .into_iter()
        .enumerate()
        .map(|(n, (class_size, occ))| PopularityRecord {
            n,
            class_size,
            occurrences: targets.iter().cloned().zip(occ).collect(),
        })
        .collect())
}

fn factorial(n: usize) -> BigUint {
    (1..=n).fold(BigUint::one(), |acc, i| acc * i)
}

// No constraints: S_n, and each window position carries each pattern of
// length m in exactly n!/m! permutations.
fn symmetric_group_table(n_max: usize, targets: &[Pattern]) -> Vec<PopularityRecord> {
    (0..=n_max)
        .map(|n| {
            let size = factorial(n);
            let occurrences = targets
                .iter()
                .map(|q| {
                    let m = q.len();
                    let total = if n >= m { &size / factorial(m) * (n - m + 1) } else { BigUint::zero() };
                    (q.clone(), total)
                })
                .collect();
            PopularityRecord { n, class_size: size, occurrences }
        })
        .collect()
}

type Totals = (BigUint, Vec<BigUint>);

#[derive(Clone)]
struct Cell {
    count: BigUint,
    occ: Vec<BigUint>,
}

fn generic_table(n_max: usize, ps: &PatternSet, targets: &[Pattern]) -> Vec<Totals> {
    let m = ps.pattern_len().unwrap_or(0);
    let mut forbidden: Vec<usize> = ps.iter().map(Pattern::lex_rank).collect();
    forbidden.sort_unstable();
    let target_keys: Vec<(usize, usize)> = targets.iter().map(|q| (q.len(), q.lex_rank())).collect();
    let width = target_keys.iter().map(|&(l, _)| l).chain(std::iter::once(m)).max().unwrap_or(1);
    let keep = width.saturating_sub(1);

    let mut states: BTreeMap<SuffixSignature, Cell> = BTreeMap::new();
    states.insert(
        SuffixSignature { ranks: Vec::new(), k: 0 },
        Cell { count: BigUint::one(), occ: vec![BigUint::zero(); targets.len()] },
    );
    let mut out = vec![(BigUint::one(), vec![BigUint::zero(); targets.len()])];

    let mut tail = Vec::with_capacity(width);
    for k in 0..n_max {
        let mut next: BTreeMap<SuffixSignature, Cell> = BTreeMap::new();
        for (sig, cell) in &states {
            for r in 1..=k as u32 + 1 {
                tail.clear();
                tail.extend(sig.ranks.iter().map(|&x| if x >= r { x + 1 } else { x }));
                tail.push(r);
                if m > 0 && tail.len() >= m {
                    let code = window_code(&tail[tail.len() - m..]);
                    if forbidden.binary_search(&code).is_ok() {
                        continue;
                    }
                }
                let key = SuffixSignature { ranks: tail[tail.len().saturating_sub(keep)..].to_vec(), k: k + 1 };
                let entry = next.entry(key).or_insert_with(|| Cell {
                    count: BigUint::zero(),
                    occ: vec![BigUint::zero(); targets.len()],
                });
                entry.count += &cell.count;
                for (t, &(len, code)) in target_keys.iter().enumerate() {
                    entry.occ[t] += &cell.occ[t];
                    if tail.len() >= len && window_code(&tail[tail.len() - len..]) == code {
                        entry.occ[t] += &cell.count;
                    }
                }
            }
        }
        states = next;
        let mut total = (BigUint::zero(), vec![BigUint::zero(); targets.len()]);
        for cell in states.values() {
            total.0 += &cell.count;
            for (acc, o) in total.1.iter_mut().zip(&cell.occ) {
                *acc += o;
            }
        }
        out.push(total);
    }
    out
}

const P123: usize = 0;
const P132: usize = 1;
const P213: usize = 2;
const P231: usize = 3;
const P312: usize = 4;
const P321: usize = 5;

/// Prefix-sum engine for length-3 patterns. State `(prev, last)` are the
/// ranks of the last two letters; the grid is stored as `last * stride + prev`.
pub(crate) struct TripleDp {
    k: usize,
    allowed: [bool; 6],
    targets: Vec<usize>,
    count: Vec<BigUint>,
    occ: Vec<Vec<BigUint>>,
}

impl TripleDp {
    /// Starts at prefix length 2.
    pub(crate) fn new(ps: &PatternSet, targets: &[Pattern]) -> Self {
        let mut allowed = [true; 6];
        for p in ps.iter() {
            allowed[p.lex_rank()] = false;
        }
        let stride = 3;
        let mut count = vec![BigUint::zero(); stride * stride];
        count[2 * stride + 1] = BigUint::one();
        count[stride + 2] = BigUint::one();
        TripleDp {
            k: 2,
            allowed,
            targets: targets.iter().map(Pattern::lex_rank).collect(),
            count,
            occ: vec![vec![BigUint::zero(); stride * stride]; targets.len()],
        }
    }

    pub(crate) fn len(&self) -> usize {
        self.k
    }

    fn stride(&self) -> usize {
        self.k + 1
    }

    /// Count and per-target totals for the state with the given ranks.
    pub(crate) fn cell(&self, prev: usize, last: usize) -> (&BigUint, Vec<&BigUint>) {
        let i = last * self.stride() + prev;
        (&self.count[i], self.occ.iter().map(|g| &g[i]).collect())
    }

    pub(crate) fn totals(&self) -> Totals {
        let mut occ = vec![BigUint::zero(); self.targets.len()];
        for (acc, grid) in occ.iter_mut().zip(&self.occ) {
            for x in grid {
                *acc += x;
            }
        }
        (self.count.iter().sum(), occ)
    }

    fn prefix_sums(&self, grid: &[BigUint]) -> Vec<BigUint> {
        let stride = self.stride();
        let mut out = vec![BigUint::zero(); stride * stride];
        for last in 1..=self.k {
            let mut acc = BigUint::zero();
            for prev in 1..=self.k {
                let i = last * stride + prev;
                if !grid[i].is_zero() {
                    acc += &grid[i];
                }
                out[i] = acc.clone();
            }
        }
        out
    }

    pub(crate) fn step(&mut self) {
        let k = self.k;
        let stride = self.stride();
        let pc = self.prefix_sums(&self.count);
        let po: Vec<Vec<BigUint>> = self.occ.iter().map(|g| self.prefix_sums(g)).collect();
        // sum over prev in lo..=hi for a fixed last rank b
        let range = |pre: &[BigUint], b: usize, lo: usize, hi: usize| -> Option<BigUint> {
            if hi < lo {
                return None;
            }
            let s = &pre[b * stride + hi] - &pre[b * stride + lo - 1];
            (!s.is_zero()).then_some(s)
        };

        let nk = k + 1;
        let nstride = nk + 1;
        let mut count = vec![BigUint::zero(); nstride * nstride];
        let mut occ = vec![vec![BigUint::zero(); nstride * nstride]; self.targets.len()];
        for r in 1..=nk {
            for s in 1..=nk {
                if s == r {
                    continue;
                }
                // The old last letter becomes rank s; the new letter has rank r.
                // Three ranges of the old second-to-last rank a decide the window.
                let (b, ranges) = if s < r {
                    (s, [(1, s - 1, P123), (s + 1, r - 1, P213), (r, k, P312)])
                } else {
                    (s - 1, [(1, r - 1, P132), (r, s - 2, P231), (s, k, P321)])
                };
                let i = r * nstride + s;
                for (lo, hi, pat) in ranges {
                    if !self.allowed[pat] {
                        continue;
                    }
                    let Some(c) = range(&pc, b, lo, hi) else { continue };
                    for (t, &code) in self.targets.iter().enumerate() {
                        if let Some(o) = range(&po[t], b, lo, hi) {
                            occ[t][i] += o;
                        }
                        if code == pat {
                            occ[t][i] += &c;
                        }
                    }
                    count[i] += c;
                }
            }
        }
        self.k = nk;
        self.count = count;
        self.occ = occ;
    }
}

fn triple_table(n_max: usize, ps: &PatternSet, targets: &[Pattern]) -> Vec<Totals> {
    let zeros = || vec![BigUint::zero(); targets.len()];
    let mut out: Vec<Totals> = (0..=n_max.min(1)).map(|_| (BigUint::one(), zeros())).collect();
    if n_max < 2 {
        return out;
    }
    let mut dp = TripleDp::new(ps, targets);
    out.push(dp.totals());
    while dp.len() < n_max {
        dp.step();
        out.push(dp.totals());
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ps(s: &str) -> PatternSet {
        s.parse().unwrap()
    }

    fn q(s: &str) -> Pattern {
        s.parse().unwrap()
    }

    #[test]
    fn class_size_examples() {
        assert_eq!(class_size(4, &ps("123,132,321")), BigUint::from(5u32));
        assert_eq!(class_size(6, &ps("123,132")), BigUint::from(76u32));
        assert_eq!(class_size(5, &ps("132,231")), BigUint::from(16u32));
        assert_eq!(class_size(0, &ps("132,231")), BigUint::one());
        assert_eq!(class_size(5, &PatternSet::empty()), BigUint::from(120u32));
    }

    #[test]
    fn popularity_examples() {
        let class11 = ps("123,132,321");
        assert_eq!(popularity_exact(4, &class11, &q("231")).unwrap(), BigUint::from(5u32));
        assert_eq!(popularity_exact(4, &class11, &q("312")).unwrap(), BigUint::from(3u32));
        assert_eq!(popularity_exact(4, &class11, &q("213")).unwrap(), BigUint::from(2u32));
    }

    #[test]
    fn avoided_or_mismatched_query_is_rejected() {
        let class11 = ps("123,132,321");
        assert!(matches!(popularity_exact(4, &class11, &q("123")), Err(Error::InvalidQuery(_))));
        assert!(matches!(popularity_exact(4, &class11, &q("2314")), Err(Error::InvalidQuery(_))));
    }

    #[test]
    fn engines_agree_on_length_three() {
        let targets = Pattern::all(3);
        for set in ["123,321", "132,231", "123,132,321", "123,231"] {
            let set = ps(set);
            let targets: Vec<_> = targets.iter().filter(|p| !set.contains(p)).cloned().collect();
            let fast = occurrence_table(10, &set, &targets, Engine::Auto).unwrap();
            let slow = occurrence_table(10, &set, &targets, Engine::Generic).unwrap();
            assert_eq!(fast, slow);
        }
    }

    #[test]
    fn longer_target_in_generic_engine() {
        // 2314 occurrences in Av(123,132): 1 at n = 4, 4 at n = 5
        let table = occurrence_table(6, &ps("123,132"), &[q("2314")], Engine::Auto).unwrap();
        let got: Vec<_> = table.iter().map(|r| r.occurrences[&q("2314")].clone()).collect();
        let want: Vec<BigUint> = [0u32, 0, 0, 0, 1, 4, 21].iter().map(|&x| x.into()).collect();
        assert_eq!(got, want);
    }

    #[test]
    fn symmetric_group_counts() {
        let rec = occurrence_table(5, &PatternSet::empty(), &[q("12")], Engine::Auto).unwrap();
        // 4 adjacent pairs, half of them ascents
        assert_eq!(rec[5].occurrences[&q("12")], BigUint::from(240u32));
    }
}
