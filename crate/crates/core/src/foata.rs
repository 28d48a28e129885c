//! The Foata transform restricted to involutions.
//!
//! An involution is written in standard form: each cycle least element
//! first, cycles sorted by decreasing least element. Erasing the brackets
//! gives a word avoiding consecutive 123 and 132, and every such word
//! arises exactly once.
//!
//! Each letter of the hat word has a role inherited from its cycle: a fixed
//! point, the low end of a 2-cycle, or the high end. Three consecutive roles
//! plus the relative order of the letters fix the window's pattern, which is
//! what [`classify_windows`] records.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::perm::{window_code, Pattern, PatternSet, Permutation};

/// A self-inverse permutation.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Involution {
    perm: Permutation,
}

impl Involution {
    pub fn new(perm: Permutation) -> Result<Self> {
        if !perm.is_involution() {
            return Err(Error::Domain(format!("{perm} is not an involution")));
        }
        Ok(Involution { perm })
    }

    pub fn identity(n: usize) -> Self {
        Involution { perm: Permutation::identity(n) }
    }

    pub fn len(&self) -> usize {
        self.perm.len()
    }

    pub fn is_empty(&self) -> bool {
        self.perm.is_empty()
    }

    pub fn as_permutation(&self) -> &Permutation {
        &self.perm
    }

    pub fn into_permutation(self) -> Permutation {
        self.perm
    }

    /// Cycles in increasing order of their least element.
    pub fn cycles(&self) -> Vec<Cycle> {
        (1..=self.len() as u32)
            .filter_map(|i| {
                let j = self.perm.at(i as usize);
                match i.cmp(&j) {
                    std::cmp::Ordering::Equal => Some(Cycle::Fixed(i)),
                    std::cmp::Ordering::Less => Some(Cycle::Transposition(i, j)),
                    std::cmp::Ordering::Greater => None,
                }
            })
            .collect()
    }

    pub fn fixed_points(&self) -> usize {
        self.perm.fixed_points()
    }
}

impl fmt::Display for Involution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.perm.fmt(f)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Cycle {
    Fixed(u32),
    /// `(low high)` with `low < high`.
    Transposition(u32, u32),
}

impl Cycle {
    pub fn least(self) -> u32 {
        match self {
            Cycle::Fixed(a) | Cycle::Transposition(a, _) => a,
        }
    }

    fn letters(self) -> impl Iterator<Item = (u32, Role)> {
        let pair = match self {
            Cycle::Fixed(a) => [Some((a, Role::Fixed)), None],
            Cycle::Transposition(a, b) => [Some((a, Role::Low)), Some((b, Role::High))],
        };
        pair.into_iter().flatten()
    }
}

impl fmt::Display for Cycle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Cycle::Fixed(a) => write!(f, "({a})"),
            Cycle::Transposition(a, b) => write!(f, "({a} {b})"),
        }
    }
}

/// Cycle notation with each cycle least-first and cycles sorted by
/// decreasing least element, e.g. `(9)(6 8)(5)(4)(2 3)(1 7)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct StandardForm {
    cycles: Vec<Cycle>,
}

impl StandardForm {
    /// Validates the ordering rules and that the letters are exactly `1..=n`.
    pub fn new(cycles: Vec<Cycle>) -> Result<Self> {
        for c in &cycles {
            if let Cycle::Transposition(a, b) = *c {
                if a >= b {
                    return Err(Error::Domain(format!("cycle {c} is not written least element first")));
                }
            }
        }
        if let Some(w) = cycles.windows(2).find(|w| w[0].least() <= w[1].least()) {
            return Err(Error::Domain(format!(
                "cycles {}{} are not in decreasing order of least element",
                w[0], w[1]
            )));
        }
        let word: Vec<u32> = cycles.iter().flat_map(|c| c.letters().map(|(x, _)| x)).collect();
        Permutation::new(word).map_err(|e| Error::Domain(format!("cycles do not cover 1..n: {e}")))?;
        Ok(StandardForm { cycles })
    }

    pub fn cycles(&self) -> &[Cycle] {
        &self.cycles
    }

    /// The letters with their cycle roles, in standard-form order.
    fn roles(&self) -> Vec<(u32, Role)> {
        self.cycles.iter().flat_map(|c| c.letters()).collect()
    }

    pub fn hat_word(&self) -> Permutation {
        Permutation::from_word_unchecked(self.roles().into_iter().map(|(x, _)| x).collect())
    }

    pub fn to_involution(&self) -> Involution {
        let n = self.roles().len();
        let mut word = vec![0u32; n];
        for c in &self.cycles {
            match *c {
                Cycle::Fixed(a) => word[a as usize - 1] = a,
                Cycle::Transposition(a, b) => {
                    word[a as usize - 1] = b;
                    word[b as usize - 1] = a;
                }
            }
        }
        Involution { perm: Permutation::from_word_unchecked(word) }
    }
}

impl fmt::Display for StandardForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.cycles.is_empty() {
            return f.write_str("()");
        }
        for c in &self.cycles {
            c.fmt(f)?;
        }
        Ok(())
    }
}

impl FromStr for StandardForm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s == "()" || s.is_empty() {
            return StandardForm::new(Vec::new());
        }
        let body = s
            .strip_prefix('(')
            .and_then(|r| r.strip_suffix(')'))
            .ok_or_else(|| Error::Malformed(format!("cycle notation must look like (3)(1 2), got {s:?}")))?;
        let mut cycles = Vec::new();
        for chunk in body.split(")(") {
            let letters = chunk
                .split(|c: char| c == ' ' || c == ',')
                .filter(|t| !t.is_empty())
                .map(|t| t.parse::<u32>().map_err(|_| Error::Malformed(format!("bad letter {t:?} in cycle ({chunk})"))))
                .collect::<Result<Vec<_>>>()?;
            cycles.push(match letters[..] {
                [a] => Cycle::Fixed(a),
                [a, b] => Cycle::Transposition(a, b),
                _ => return Err(Error::Malformed(format!("cycle ({chunk}) must have one or two letters"))),
            });
        }
        StandardForm::new(cycles)
    }
}

pub fn standard_form(inv: &Involution) -> StandardForm {
    let mut cycles = inv.cycles();
    cycles.reverse();
    StandardForm { cycles }
}

/// Concatenation of the standard form.
pub fn foata_hat(inv: &Involution) -> Permutation {
    standard_form(inv).hat_word()
}

fn forbidden_pair() -> PatternSet {
    "123,132".parse().expect("valid pattern set")
}

/// Inverse of [`foata_hat`]. Reading left to right, a letter followed by a
/// larger one opens a 2-cycle with it; otherwise it is a fixed point.
pub fn foata_unhat(p: &Permutation) -> Result<Involution> {
    if !crate::perm::avoids(p, &forbidden_pair()) {
        return Err(Error::Domain(format!("{p} contains a consecutive 123 or 132")));
    }
    let w = p.word();
    let mut cycles = Vec::new();
    let mut i = 0;
    while i < w.len() {
        if i + 1 < w.len() && w[i + 1] > w[i] {
            cycles.push(Cycle::Transposition(w[i], w[i + 1]));
            i += 2;
        } else {
            cycles.push(Cycle::Fixed(w[i]));
            i += 1;
        }
    }
    Ok(StandardForm::new(cycles)?.to_involution())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Role {
    Fixed,
    Low,
    High,
}

/// Cycle-level shape of a length-3 window of a hat word, with `a < b < c`
/// and `*` standing for a letter outside the window.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum WindowShape {
    /// `(c)(b)(a)`
    ThreeFixed,
    /// `(c)(b)(a *)`
    FixedFixedOpen,
    /// `(* c)(b)(a)`
    CloseFixedFixed,
    /// `(* c)(b)(a *)`
    CloseFixedOpen,
    /// `(b c)(a)`
    PairFixed,
    /// `(b c)(a *)`
    PairOpen,
    /// `(b)(a c)`
    FixedPairWide,
    /// `(c)(a b)`
    FixedPairNarrow,
    /// `(* b)(a c)`
    ClosePairWide,
    /// `(* c)(a b)`
    ClosePairNarrow,
}

impl WindowShape {
    pub const ALL: [WindowShape; 10] = [
        WindowShape::ThreeFixed,
        WindowShape::FixedFixedOpen,
        WindowShape::CloseFixedFixed,
        WindowShape::CloseFixedOpen,
        WindowShape::PairFixed,
        WindowShape::PairOpen,
        WindowShape::FixedPairWide,
        WindowShape::FixedPairNarrow,
        WindowShape::ClosePairWide,
        WindowShape::ClosePairNarrow,
    ];

    fn index(self) -> usize {
        self as usize
    }

    pub fn notation(self) -> &'static str {
        match self {
            WindowShape::ThreeFixed => "(c)(b)(a)",
            WindowShape::FixedFixedOpen => "(c)(b)(a *)",
            WindowShape::CloseFixedFixed => "(* c)(b)(a)",
            WindowShape::CloseFixedOpen => "(* c)(b)(a *)",
            WindowShape::PairFixed => "(b c)(a)",
            WindowShape::PairOpen => "(b c)(a *)",
            WindowShape::FixedPairWide => "(b)(a c)",
            WindowShape::FixedPairNarrow => "(c)(a b)",
            WindowShape::ClosePairWide => "(* b)(a c)",
            WindowShape::ClosePairNarrow => "(* c)(a b)",
        }
    }

    /// The consecutive pattern the window forms in the hat word.
    pub fn pattern(self) -> Pattern {
        let compact = match self {
            WindowShape::ThreeFixed
            | WindowShape::FixedFixedOpen
            | WindowShape::CloseFixedFixed
            | WindowShape::CloseFixedOpen => "321",
            WindowShape::PairFixed | WindowShape::PairOpen => "231",
            WindowShape::FixedPairWide | WindowShape::ClosePairWide => "213",
            WindowShape::FixedPairNarrow | WindowShape::ClosePairNarrow => "312",
        };
        compact.parse().expect("valid pattern")
    }

    pub fn has_fixed_point(self) -> bool {
        !matches!(self, WindowShape::PairOpen | WindowShape::ClosePairWide | WindowShape::ClosePairNarrow)
    }

    /// Whether the shape appears in the commonly quoted correspondence
    /// table. `(* c)(b)(a *)` is missing from it although it occurs as soon
    /// as `n >= 5`.
    pub fn in_reference_table(self) -> bool {
        self != WindowShape::CloseFixedOpen
    }

    fn from_roles(roles: [Role; 3], letters: [u32; 3]) -> Self {
        use Role::*;
        match roles {
            [Fixed, Fixed, Fixed] => WindowShape::ThreeFixed,
            [Fixed, Fixed, Low] => WindowShape::FixedFixedOpen,
            [High, Fixed, Fixed] => WindowShape::CloseFixedFixed,
            [High, Fixed, Low] => WindowShape::CloseFixedOpen,
            [Low, High, Fixed] => WindowShape::PairFixed,
            [Low, High, Low] => WindowShape::PairOpen,
            [Fixed, Low, High] if letters[2] > letters[0] => WindowShape::FixedPairWide,
            [Fixed, Low, High] => WindowShape::FixedPairNarrow,
            [High, Low, High] if letters[2] > letters[0] => WindowShape::ClosePairWide,
            [High, Low, High] => WindowShape::ClosePairNarrow,
            _ => unreachable!("a low end is always followed by its high end"),
        }
    }
}

impl fmt::Display for WindowShape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.notation())
    }
}

/// Window counts per shape for one involution or summed over many.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct WindowCounts {
    counts: [u64; 10],
}

impl WindowCounts {
    pub fn get(&self, shape: WindowShape) -> u64 {
        self.counts[shape.index()]
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().sum()
    }

    /// Windows with at least one fixed point among their three letters.
    pub fn with_fixed_point(&self) -> u64 {
        WindowShape::ALL.iter().filter(|s| s.has_fixed_point()).map(|&s| self.get(s)).sum()
    }

    /// Windows forming `q`, summed over the given shapes only.
    pub fn pattern_total(&self, q: &Pattern, listed_only: bool) -> u64 {
        WindowShape::ALL
            .iter()
            .filter(|s| &s.pattern() == q && (!listed_only || s.in_reference_table()))
            .map(|&s| self.get(s))
            .sum()
    }

    fn absorb(&mut self, other: &WindowCounts) {
        for (a, b) in self.counts.iter_mut().zip(other.counts) {
            *a += b;
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = (WindowShape, u64)> + '_ {
        WindowShape::ALL.iter().map(|&s| (s, self.get(s)))
    }
}

pub fn classify_windows(inv: &Involution) -> WindowCounts {
    let letters = standard_form(inv).roles();
    let mut counts = WindowCounts::default();
    for w in letters.windows(3) {
        let shape = WindowShape::from_roles([w[0].1, w[1].1, w[2].1], [w[0].0, w[1].0, w[2].0]);
        counts.counts[shape.index()] += 1;
    }
    counts
}

/// The shape of the window starting at 1-based position `start` of the hat word.
pub fn window_shape_at(inv: &Involution, start: usize) -> Result<WindowShape> {
    let letters = standard_form(inv).roles();
    if start == 0 || start + 2 > letters.len() {
        return Err(Error::Domain(format!("no window at position {start} in a word of length {}", letters.len())));
    }
    let w = &letters[start - 1..start + 2];
    Ok(WindowShape::from_roles([w[0].1, w[1].1, w[2].1], [w[0].0, w[1].0, w[2].0]))
}

/// All involutions of size `n`, in lexicographic order of their one-line form.
pub fn all_involutions(n: usize) -> Vec<Involution> {
    fn extend(word: &mut Vec<u32>, out: &mut Vec<Involution>) {
        let n = word.len();
        let Some(i) = word.iter().position(|&x| x == 0) else {
            out.push(Involution { perm: Permutation::from_word_unchecked(word.clone()) });
            return;
        };
        // word[i] = j + 1 with j ascending keeps one-line lex order
        let partners: Vec<usize> = std::iter::once(i).chain((i + 1..n).filter(|&j| word[j] == 0)).collect();
        for j in partners {
            word[i] = j as u32 + 1;
            word[j] = i as u32 + 1;
            extend(word, out);
            word[i] = 0;
            word[j] = 0;
        }
    }
    let mut out = Vec::new();
    extend(&mut vec![0; n], &mut out);
    out
}

/// Largest size for which the exhaustive sweeps below are allowed.
pub const SWEEP_LIMIT: usize = 13;

/// Totals over all involutions of size `n` of the three fixed-point-free
/// shapes and of the windows containing a fixed point.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ShapeTotals {
    pub n: usize,
    /// `(b c)(a *)`
    pub pair_open: BigUint,
    /// `(* b)(a c)`
    pub close_pair_wide: BigUint,
    /// `(* c)(a b)`
    pub close_pair_narrow: BigUint,
    pub with_fixed_point: BigUint,
    /// Total number of fixed points over all involutions of size `n`.
    pub fixed_points: BigUint,
    pub windows: WindowCounts,
}

fn sweep_guard(n: usize) -> Result<()> {
    if n > SWEEP_LIMIT {
        return Err(Error::Unsupported(format!(
            "exhaustive involution sweep is limited to n <= {SWEEP_LIMIT}, got {n}"
        )));
    }
    Ok(())
}

pub fn shape_totals(n: usize) -> Result<ShapeTotals> {
    if n < 3 {
        return Err(Error::Domain(format!("window totals need n >= 3, got {n}")));
    }
    sweep_guard(n)?;
    let mut windows = WindowCounts::default();
    let mut fixed_points = 0u64;
    for inv in all_involutions(n) {
        windows.absorb(&classify_windows(&inv));
        fixed_points += inv.fixed_points() as u64;
    }
    Ok(ShapeTotals {
        n,
        pair_open: windows.get(WindowShape::PairOpen).into(),
        close_pair_wide: windows.get(WindowShape::ClosePairWide).into(),
        close_pair_narrow: windows.get(WindowShape::ClosePairNarrow).into(),
        with_fixed_point: windows.with_fixed_point().into(),
        fixed_points: fixed_points.into(),
        windows,
    })
}

/// For one length-3 pattern: occurrences counted directly in the hat words,
/// and the same total rebuilt from window shapes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PatternTransport {
    pub pattern: Pattern,
    pub direct: u64,
    /// Summed over the shapes of the reference table only.
    pub listed_shapes: u64,
    /// Summed over every shape producing the pattern.
    pub all_shapes: u64,
}

impl PatternTransport {
    pub fn is_exact(&self) -> bool {
        self.direct == self.all_shapes
    }

    pub fn listed_shortfall(&self) -> u64 {
        self.direct - self.listed_shapes
    }
}

/// Pattern-by-pattern comparison for the four patterns that occur in hat words.
pub fn pattern_transport(n: usize) -> Result<Vec<PatternTransport>> {
    sweep_guard(n)?;
    let mut direct = [0u64; 6];
    let mut windows = WindowCounts::default();
    for inv in all_involutions(n) {
        let hat = foata_hat(&inv);
        for w in hat.word().windows(3) {
            direct[window_code(w)] += 1;
        }
        windows.absorb(&classify_windows(&inv));
    }
    Ok(["321", "231", "213", "312"]
        .iter()
        .map(|s| {
            let q: Pattern = s.parse().expect("valid pattern");
            PatternTransport {
                direct: direct[q.lex_rank()],
                listed_shapes: windows.pattern_total(&q, true),
                all_shapes: windows.pattern_total(&q, false),
                pattern: q,
            }
        })
        .collect())
}

/// Sum of `count` over every involution of size `n`, in exact arithmetic.
pub fn sum_over_involutions<F: Fn(&Involution) -> u64>(n: usize, count: F) -> Result<BigUint> {
    sweep_guard(n)?;
    Ok(all_involutions(n).iter().fold(BigUint::zero(), |acc, inv| acc + count(inv)))
}
