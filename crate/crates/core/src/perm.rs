//! Permutations as words over `1..=n`, consecutive patterns and the three
//! symmetries (reverse, complement, reverse-complement).
//!
//! All positions exposed by this module are 1-based.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// A permutation written as a word `a_1 ... a_n` of distinct ranks `1..=n`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Permutation {
    word: Vec<u32>,
}

impl Permutation {
    /// Builds a permutation, checking that `word` is a bijection on `1..=n`.
    pub fn new(word: Vec<u32>) -> Result<Self> {
        let n = word.len();
        let mut seen = vec![false; n + 1];
        for &a in &word {
            let i = a as usize;
            if i == 0 || i > n {
                return Err(Error::Malformed(format!(
                    "rank {a} outside 1..={n} in permutation of length {n}"
                )));
            }
            if seen[i] {
                return Err(Error::Malformed(format!("rank {a} repeated")));
            }
            seen[i] = true;
        }
        Ok(Permutation { word })
    }

    pub(crate) fn from_word_unchecked(word: Vec<u32>) -> Self {
        debug_assert!(Permutation::new(word.clone()).is_ok());
        Permutation { word }
    }

    pub fn identity(n: usize) -> Self {
        Permutation { word: (1..=n as u32).collect() }
    }

    pub fn empty() -> Self {
        Permutation { word: Vec::new() }
    }

    pub fn len(&self) -> usize {
        self.word.len()
    }

    pub fn is_empty(&self) -> bool {
        self.word.is_empty()
    }

    pub fn word(&self) -> &[u32] {
        &self.word
    }

    pub fn into_word(self) -> Vec<u32> {
        self.word
    }

    /// The letter at 1-based position `i`.
    pub fn at(&self, i: usize) -> u32 {
        self.word[i - 1]
    }

    pub fn reverse(&self) -> Self {
        let mut word = self.word.clone();
        word.reverse();
        Permutation { word }
    }

    pub fn complement(&self) -> Self {
        let n1 = self.word.len() as u32 + 1;
        Permutation { word: self.word.iter().map(|&a| n1 - a).collect() }
    }

    pub fn reverse_complement(&self) -> Self {
        self.complement().reverse()
    }

    pub fn inverse(&self) -> Self {
        let mut word = vec![0; self.word.len()];
        for (i, &a) in self.word.iter().enumerate() {
            word[a as usize - 1] = i as u32 + 1;
        }
        Permutation { word }
    }

    pub fn is_involution(&self) -> bool {
        self.word
            .iter()
            .enumerate()
            .all(|(i, &a)| self.word[a as usize - 1] as usize == i + 1)
    }

    pub fn fixed_points(&self) -> usize {
        self.word
            .iter()
            .enumerate()
            .filter(|&(i, &a)| a as usize == i + 1)
            .count()
    }

    /// Compact digit form, only defined for `n <= 9`.
    pub fn to_compact(&self) -> Option<String> {
        if self.word.len() > 9 {
            return None;
        }
        Some(self.word.iter().map(|a| char::from(b'0' + *a as u8)).collect())
    }
}

/// Canonical text form: comma-separated ranks.
impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, a) in self.word.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{a}")?;
        }
        Ok(())
    }
}

/// Accepts the canonical comma form, or the compact digit form when the
/// permutation has at most nine letters. The empty string is the empty
/// permutation.
impl FromStr for Permutation {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.is_empty() {
            return Ok(Permutation::empty());
        }
        let word = if s.contains(',') {
            s.split(',')
                .map(|t| {
                    t.trim()
                        .parse::<u32>()
                        .map_err(|_| Error::Malformed(format!("bad rank {t:?} in {s:?}")))
                })
                .collect::<Result<Vec<_>>>()?
        } else {
            if !s.bytes().all(|b| b.is_ascii_digit()) {
                return Err(Error::Malformed(format!("bad permutation {s:?}")));
            }
            if s.len() > 9 {
                return Err(Error::Malformed(format!(
                    "compact form {s:?} is ambiguous beyond 9 letters; use commas"
                )));
            }
            s.bytes().map(|b| (b - b'0') as u32).collect()
        };
        Permutation::new(word)
    }
}

/// Returns the lexicographic rank of `window`'s standardization among all
/// permutations of its length, without allocating. Only for short windows.
pub(crate) fn window_code(window: &[u32]) -> usize {
    let m = window.len();
    let mut code = 0;
    for i in 0..m {
        let smaller_after = window[i + 1..].iter().filter(|&&b| b < window[i]).count();
        code = code * (m - i) + smaller_after;
    }
    code
}

/// The unique pattern order-isomorphic to `window`.
pub fn standardize(window: &[u32]) -> Result<Pattern> {
    if window.is_empty() {
        return Err(Error::Malformed("cannot standardize an empty window".into()));
    }
    let mut order: Vec<usize> = (0..window.len()).collect();
    order.sort_by_key(|&i| window[i]);
    if order.windows(2).any(|w| window[w[0]] == window[w[1]]) {
        return Err(Error::Malformed(format!("window {window:?} has repeated entries")));
    }
    let mut word = vec![0; window.len()];
    for (rank, &i) in order.iter().enumerate() {
        word[i] = rank as u32 + 1;
    }
    Ok(Pattern(Permutation { word }))
}

/// A consecutive pattern: a permutation of length `m >= 1`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Pattern(Permutation);

impl Pattern {
    pub fn new(underlying: Permutation) -> Result<Self> {
        if underlying.is_empty() {
            return Err(Error::Malformed("pattern must have length >= 1".into()));
        }
        Ok(Pattern(underlying))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn as_permutation(&self) -> &Permutation {
        &self.0
    }

    pub fn word(&self) -> &[u32] {
        self.0.word()
    }

    /// Lexicographic rank among all patterns of the same length.
    pub fn lex_rank(&self) -> usize {
        window_code(self.0.word())
    }

    /// All `m!` patterns of length `m`, in lexicographic order.
    pub fn all(m: usize) -> Vec<Pattern> {
        let mut out = Vec::new();
        let mut word: Vec<u32> = (1..=m as u32).collect();
        loop {
            out.push(Pattern(Permutation { word: word.clone() }));
            // next lexicographic permutation
            let Some(i) = (0..m.saturating_sub(1)).rev().find(|&i| word[i] < word[i + 1]) else {
                break;
            };
            let j = (i + 1..m).rev().find(|&j| word[j] > word[i]).unwrap();
            word.swap(i, j);
            word[i + 1..].reverse();
        }
        out
    }

    pub fn apply(&self, t: Symmetry) -> Pattern {
        Pattern(t.apply(&self.0))
    }
}

impl fmt::Display for Pattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.0.to_compact() {
            Some(s) => f.write_str(&s),
            None => write!(f, "{}", self.0),
        }
    }
}

impl FromStr for Pattern {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Pattern::new(s.parse()?)
    }
}

/// One of the three symmetries that preserve consecutive occurrences.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Symmetry {
    Reverse,
    Complement,
    ReverseComplement,
}

impl Symmetry {
    pub const ALL: [Symmetry; 3] =
        [Symmetry::Reverse, Symmetry::Complement, Symmetry::ReverseComplement];

    pub fn apply(self, p: &Permutation) -> Permutation {
        match self {
            Symmetry::Reverse => p.reverse(),
            Symmetry::Complement => p.complement(),
            Symmetry::ReverseComplement => p.reverse_complement(),
        }
    }
}

/// A set of consecutive patterns sharing one length. The empty set is
/// allowed and has no length.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct PatternSet {
    patterns: BTreeSet<Pattern>,
}

impl PatternSet {
    pub fn new<I: IntoIterator<Item = Pattern>>(patterns: I) -> Result<Self> {
        let mut set = BTreeSet::new();
        let mut m = None;
        for p in patterns {
            match m {
                None => m = Some(p.len()),
                Some(m) if m != p.len() => {
                    return Err(Error::Malformed(format!(
                        "pattern {p} has length {}, expected {m}",
                        p.len()
                    )))
                }
                _ => {}
            }
            let shown = p.to_string();
            if !set.insert(p) {
                return Err(Error::Malformed(format!("pattern {shown} listed twice")));
            }
        }
        Ok(PatternSet { patterns: set })
    }

    pub fn empty() -> Self {
        PatternSet::default()
    }

    /// Shared pattern length, `None` for the empty set.
    pub fn pattern_len(&self) -> Option<usize> {
        self.patterns.iter().next().map(Pattern::len)
    }

    pub fn len(&self) -> usize {
        self.patterns.len()
    }

    pub fn is_empty(&self) -> bool {
        self.patterns.is_empty()
    }

    pub fn contains(&self, q: &Pattern) -> bool {
        self.patterns.contains(q)
    }

    pub fn iter(&self) -> impl Iterator<Item = &Pattern> {
        self.patterns.iter()
    }

    /// The set extended by one more pattern of the same length.
    pub fn with(&self, p: Pattern) -> Result<Self> {
        PatternSet::new(self.patterns.iter().cloned().chain(std::iter::once(p)))
    }

    pub fn apply(&self, t: Symmetry) -> PatternSet {
        PatternSet { patterns: self.patterns.iter().map(|p| p.apply(t)).collect() }
    }

    /// Patterns of the shared length that are not in the set.
    pub fn complement_patterns(&self) -> Vec<Pattern> {
        match self.pattern_len() {
            Some(m) => Pattern::all(m).into_iter().filter(|q| !self.contains(q)).collect(),
            None => Vec::new(),
        }
    }
}

/// Comma-separated compact pattern words, e.g. `"123,132"`.
impl FromStr for PatternSet {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.is_empty() {
            return Ok(PatternSet::empty());
        }
        let pats = s
            .split(',')
            .map(|t| {
                let t = t.trim();
                if t.is_empty() || !t.bytes().all(|b| b.is_ascii_digit()) {
                    return Err(Error::Malformed(format!("bad pattern {t:?} in {s:?}")));
                }
                t.parse::<Pattern>()
            })
            .collect::<Result<Vec<_>>>()?;
        PatternSet::new(pats)
    }
}

impl fmt::Display for PatternSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, p) in self.patterns.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{p}")?;
        }
        Ok(())
    }
}

/// Sorted 1-based start positions of consecutive occurrences.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct OccurrenceList {
    pub starts: Vec<usize>,
}

impl OccurrenceList {
    pub fn len(&self) -> usize {
        self.starts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.starts.is_empty()
    }
}

fn window_matches(window: &[u32], q: &[u32]) -> bool {
    // order-isomorphic iff every pair compares the same way
    (0..window.len()).all(|i| {
        (i + 1..window.len()).all(|j| (window[i] < window[j]) == (q[i] < q[j]))
    })
}

pub fn consecutive_occurrences(p: &Permutation, q: &Pattern) -> OccurrenceList {
    let m = q.len();
    if m > p.len() {
        return OccurrenceList::default();
    }
    let starts = p
        .word()
        .windows(m)
        .enumerate()
        .filter(|(_, w)| window_matches(w, q.word()))
        .map(|(i, _)| i + 1)
        .collect();
    OccurrenceList { starts }
}

pub fn avoids(p: &Permutation, ps: &PatternSet) -> bool {
    ps.iter().all(|q| consecutive_occurrences(p, q).is_empty())
}
