//! Finite-size popularity ratios `p_n / (n |A_n|)`, limit estimates, the
//! 18-class reference table and the conjecture harness.
//!
//! Limits are estimated with Aitken's delta-squared process applied to three
//! tail points at sizes close to `N/4`, `N/2` and `N`, all of the same parity
//! as `N`. With that spacing a single power-law correction `c n^-p` is
//! removed exactly, which is the dominant behaviour of the classes here;
//! parity matching keeps double-factorial oscillations out of the
//! differences.

use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};

use crate::closed::{class11_closed_form_table, class18_counts, involutions_upto, seq_2314_class17};
use crate::count::{occurrence_table, Engine};
use crate::error::{Error, Result};
use crate::perm::{Pattern, PatternSet};

/// Tolerance against a claimed limit when a closed-form backend is used.
pub const CLOSED_FORM_TOLERANCE: f64 = 0.005;
/// Tolerance against a claimed limit for DP-only classes.
pub const DP_TOLERANCE: f64 = 0.03;
pub const DEFAULT_DP_N_MAX: usize = 200;
pub const DEFAULT_CLOSED_FORM_N_MAX: usize = 2000;
const MIN_DEFINED: usize = 5;

/// Claimed asymptotic popularity of a pattern in a class.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Claim {
    Limit(u32, u32),
    /// The class is empty from some size on.
    NotApplicable,
    /// No value is known.
    Open,
}

impl Claim {
    pub fn value(self) -> Option<f64> {
        match self {
            Claim::Limit(a, b) => Some(a as f64 / b as f64),
            _ => None,
        }
    }
}

impl fmt::Display for Claim {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Claim::Limit(a, 1) => write!(f, "{a}"),
            Claim::Limit(a, b) => write!(f, "{a}/{b}"),
            Claim::NotApplicable => f.write_str("N/A"),
            Claim::Open => f.write_str("?"),
        }
    }
}

/// One of the 18 classes avoiding at least two length-3 patterns (up to
/// symmetry), with the claimed limit for each pattern it does not avoid.
#[derive(Clone, Debug)]
pub struct ClassSpec {
    pub id: u8,
    pub avoided: PatternSet,
    pub claims: Vec<(Pattern, Claim)>,
}

impl ClassSpec {
    pub fn claim(&self, q: &Pattern) -> Option<Claim> {
        self.claims.iter().find(|(p, _)| p == q).map(|&(_, c)| c)
    }

    pub fn is_open(&self) -> bool {
        self.claims.iter().any(|(_, c)| *c == Claim::Open)
    }
}

const CLASS_TABLE: [(&str, [(&str, Claim); 4]); 18] = {
    use Claim::*;
    const NONE: (&str, Claim) = ("", Open);
    [
        ("123,132,312,321", [("213", Limit(1, 2)), ("231", Limit(1, 2)), NONE, NONE]),
        ("123,132,213,312", [("231", Limit(0, 1)), ("321", Limit(1, 1)), NONE, NONE]),
        ("132,213,231,312", [("123", Limit(1, 2)), ("321", Limit(1, 2)), NONE, NONE]),
        ("123,132,231,321", [("213", NotApplicable), ("312", NotApplicable), NONE, NONE]),
        ("132,213,312,321", [("123", Limit(1, 1)), ("231", Limit(0, 1)), NONE, NONE]),
        ("123,132,213,321", [("231", Limit(1, 2)), ("312", Limit(1, 2)), NONE, NONE]),
        ("123,132,213", [("231", Limit(1, 2)), ("312", Limit(1, 2)), ("321", Limit(0, 1)), NONE]),
        ("123,132,231", [("213", Limit(0, 1)), ("312", Limit(0, 1)), ("321", Limit(1, 1)), NONE]),
        ("132,213,231", [("123", Limit(1, 2)), ("312", Limit(0, 1)), ("321", Limit(1, 2)), NONE]),
        ("123,132,312", [("213", Open), ("231", Open), ("321", Open), NONE]),
        ("123,132,321", [("213", Limit(1, 4)), ("231", Limit(1, 2)), ("312", Limit(1, 4)), NONE]),
        ("123,231,312", [("132", Open), ("213", Open), ("321", Open), NONE]),
        ("123,231", [("132", Open), ("213", Open), ("312", Open), ("321", Open)]),
        ("213,231", [("123", Open), ("132", Open), ("312", Open), ("321", Open)]),
        ("132,213", [("123", Open), ("231", Open), ("312", Open), ("321", Open)]),
        ("123,321", [("132", Limit(1, 4)), ("213", Limit(1, 4)), ("231", Limit(1, 4)), ("312", Limit(1, 4))]),
        ("123,132", [("213", Limit(1, 4)), ("231", Limit(1, 2)), ("312", Limit(1, 4)), ("321", Limit(0, 1))]),
        ("132,231", [("123", Limit(1, 2)), ("213", Limit(0, 1)), ("312", Limit(0, 1)), ("321", Limit(1, 2))]),
    ]
};

/// All 18 classes, numbered 1 to 18.
pub fn classes() -> Vec<ClassSpec> {
    CLASS_TABLE
        .iter()
        .enumerate()
        .map(|(i, (avoided, claims))| ClassSpec {
            id: i as u8 + 1,
            avoided: avoided.parse().expect("valid class table"),
            claims: claims
                .iter()
                .filter(|(p, _)| !p.is_empty())
                .map(|&(p, c)| (p.parse().expect("valid class table"), c))
                .collect(),
        })
        .collect()
}

pub fn class(id: u8) -> Result<ClassSpec> {
    classes()
        .into_iter()
        .find(|c| c.id == id)
        .ok_or_else(|| Error::InvalidQuery(format!("class ids run from 1 to 18, got {id}")))
}

/// The class id whose avoided set is exactly `ps`, if any.
pub fn class_id_of(ps: &PatternSet) -> Option<u8> {
    classes().into_iter().find(|c| &c.avoided == ps).map(|c| c.id)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Backend {
    #[default]
    Dp,
    ClosedForm,
}

impl std::str::FromStr for Backend {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "dp" => Ok(Backend::Dp),
            "closed-form" | "closed" => Ok(Backend::ClosedForm),
            _ => Err(Error::Malformed(format!("backend must be dp or closed-form, got {s:?}"))),
        }
    }
}

impl fmt::Display for Backend {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Backend::Dp => "dp",
            Backend::ClosedForm => "closed-form",
        })
    }
}

/// One size of a popularity sequence. `ratio` is absent when the class is
/// empty or `n` is shorter than the pattern.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SequenceEntry {
    pub n: usize,
    pub count: BigUint,
    pub class_size: BigUint,
    pub ratio: Option<BigRational>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PopularitySequence {
    pub avoided: PatternSet,
    pub pattern: Pattern,
    pub backend: Backend,
    pub entries: Vec<SequenceEntry>,
}

impl PopularitySequence {
    pub fn ratio_at(&self, n: usize) -> Option<&BigRational> {
        self.entries.iter().find(|e| e.n == n).and_then(|e| e.ratio.as_ref())
    }

    /// `(n, ratio)` for the defined entries, as floats.
    pub fn defined(&self) -> Vec<(usize, f64)> {
        self.entries
            .iter()
            .filter_map(|e| e.ratio.as_ref().map(|r| (e.n, r.to_f64().unwrap_or(f64::NAN))))
            .collect()
    }
}

fn entry(n: usize, m: usize, count: BigUint, class_size: BigUint) -> SequenceEntry {
    let ratio = if n >= m && n > 0 && !class_size.is_zero() {
        let den = BigInt::from(class_size.clone()) * BigInt::from(n);
        Some(BigRational::new(BigInt::from(count.clone()), den))
    } else {
        None
    };
    SequenceEntry { n, count, class_size, ratio }
}

fn validate_query(ps: &PatternSet, q: &Pattern) -> Result<()> {
    if ps.contains(q) {
        return Err(Error::InvalidQuery(format!("pattern {q} is avoided by the class")));
    }
    Ok(())
}

/// Sequences for several targets from one DP pass, sizes `1..=n_max`.
pub fn popularity_sequences_dp(ps: &PatternSet, targets: &[Pattern], n_max: usize) -> Result<Vec<PopularitySequence>> {
    for q in targets {
        validate_query(ps, q)?;
    }
    let table = occurrence_table(n_max, ps, targets, Engine::Auto)?;
    Ok(targets
        .iter()
        .map(|q| PopularitySequence {
            avoided: ps.clone(),
            pattern: q.clone(),
            backend: Backend::Dp,
            entries: table[1..]
                .iter()
                .map(|r| entry(r.n, q.len(), r.occurrences[q].clone(), r.class_size.clone()))
                .collect(),
        })
        .collect())
}

/// Exact ratios for sizes `1..=n_max`.
///
/// The closed-form backend covers Class 11 (patterns 213, 231, 312),
/// Class 18 (123, 213, 312, 321) and, for Class 17, the length-4 pattern
/// 2314 only.
pub fn popularity_sequence(ps: &PatternSet, q: &Pattern, n_max: usize, backend: Backend) -> Result<PopularitySequence> {
    validate_query(ps, q)?;
    match backend {
        Backend::Dp => Ok(popularity_sequences_dp(ps, std::slice::from_ref(q), n_max)?.remove(0)),
        Backend::ClosedForm => closed_form_sequence(ps, q, n_max),
    }
}

fn closed_form_sequence(ps: &PatternSet, q: &Pattern, n_max: usize) -> Result<PopularitySequence> {
    let id = class_id_of(ps);
    let code = q.to_string();
    let unsupported = || {
        Error::Unsupported(format!("no closed form for pattern {q} in the class avoiding {ps}; use the dp backend"))
    };
    let entries: Vec<SequenceEntry> = match (id, code.as_str()) {
        (Some(11), "213" | "231" | "312") => {
            let table = class11_closed_form_table(n_max)?;
            // sizes 1 and 2 are all of S_1 and S_2
            let mut out: Vec<SequenceEntry> = (1..=n_max.min(2))
                .map(|n| entry(n, 3, BigUint::zero(), BigUint::from(n)))
                .collect();
            out.extend(table.into_iter().map(|c| {
                let count = match code.as_str() {
                    "213" => c.p213,
                    "231" => c.p231,
                    _ => c.p312,
                };
                entry(c.n, 3, count, c.size)
            }));
            out
        }
        (Some(18), "123" | "213" | "312" | "321") => (1..=n_max)
            .map(|n| {
                if n < 2 {
                    return Ok(entry(n, 3, BigUint::zero(), BigUint::from(1u32)));
                }
                let c = class18_counts(n as i64)?;
                let count = match code.as_str() {
                    "123" => c.p123,
                    "213" => c.p213,
                    "312" => c.p312,
                    _ => c.p321,
                };
                Ok(entry(n, 3, count, c.size))
            })
            .collect::<Result<_>>()?,
        (Some(17), "2314") => {
            let counts = seq_2314_class17(n_max);
            let sizes = involutions_upto(n_max);
            (1..=n_max).map(|n| entry(n, 4, counts[n].clone(), sizes[n].clone())).collect()
        }
        _ => return Err(unsupported()),
    };
    Ok(PopularitySequence { avoided: ps.clone(), pattern: q.clone(), backend: Backend::ClosedForm, entries })
}

/// Limit estimate with diagnostics.
#[derive(Clone, Debug, PartialEq)]
pub struct LimitEstimate {
    /// Last defined ratio and its size.
    pub raw: f64,
    pub n_max: usize,
    /// Aitken value, present only when its denominator is nonzero and the
    /// two differences have the same sign.
    pub extrapolated: Option<f64>,
    /// The value to report: extrapolated when available, else raw, clamped
    /// into `[0, 1]`.
    pub estimate: f64,
    /// Sizes used for the three-point transform.
    pub points: [usize; 3],
    /// Ratio of the second tail difference to the first.
    pub difference_ratio: Option<f64>,
    /// Same-parity tail values are monotone.
    pub monotone: bool,
    pub clamped: bool,
    pub low_confidence: bool,
}

fn pick_points(defined: &[(usize, f64)]) -> [usize; 3] {
    let (last_n, _) = *defined.last().expect("nonempty");
    let same_parity: Vec<usize> = defined.iter().map(|&(n, _)| n).filter(|n| n % 2 == last_n % 2).collect();
    let nearest_at_most = |target: usize, below: usize| {
        same_parity.iter().copied().filter(|&n| n <= target && n < below).max()
    };
    let mid = nearest_at_most(last_n / 2, last_n);
    let low = mid.and_then(|m| nearest_at_most(last_n / 4, m));
    if let (Some(lo), Some(mi)) = (low, mid) {
        return [lo, mi, last_n];
    }
    let pool: Vec<usize> = if same_parity.len() >= 3 {
        same_parity
    } else {
        defined.iter().map(|&(n, _)| n).collect()
    };
    let k = pool.len();
    [pool[k - 3], pool[k - 2], pool[k - 1]]
}

pub fn estimate_limit(seq: &PopularitySequence) -> Result<LimitEstimate> {
    estimate_from_points(&seq.defined())
}

/// [`estimate_limit`] on plain `(n, value)` pairs in increasing `n`.
pub fn estimate_from_points(defined: &[(usize, f64)]) -> Result<LimitEstimate> {
    if defined.len() < MIN_DEFINED {
        return Err(Error::InsufficientData(format!(
            "a limit estimate needs at least {MIN_DEFINED} defined entries, got {}",
            defined.len()
        )));
    }
    let value = |n: usize| defined.iter().find(|&&(m, _)| m == n).map(|&(_, v)| v).expect("picked from data");
    let points = pick_points(defined);
    let [x1, x2, x3] = points.map(value);
    let (raw_n, raw) = *defined.last().expect("nonempty");
    let (d1, d2) = (x2 - x1, x3 - x2);
    let scale = x3.abs().max(1e-300);

    let parity = raw_n % 2;
    let tail: Vec<f64> =
        defined.iter().filter(|&&(n, _)| n % 2 == parity && n >= points[0]).map(|&(_, v)| v).collect();
    let monotone = tail.windows(2).all(|w| w[1] >= w[0]) || tail.windows(2).all(|w| w[1] <= w[0]);

    let flat = d1.abs() <= 1e-15 * scale && d2.abs() <= 1e-15 * scale;
    let difference_ratio = (d1 != 0.0).then(|| d2 / d1);
    let denom = d2 - d1;
    let extrapolated = if flat {
        Some(x3)
    } else if d1 * d2 > 0.0 && denom.abs() > 1e-15 * scale {
        Some(x3 - d2 * d2 / denom)
    } else {
        None
    };
    let low_confidence = extrapolated.is_none() || !monotone;
    let unclamped = extrapolated.unwrap_or(raw);
    let estimate = unclamped.clamp(0.0, 1.0);
    Ok(LimitEstimate {
        raw,
        n_max: raw_n,
        extrapolated,
        estimate,
        points,
        difference_ratio,
        monotone,
        clamped: estimate != unclamped,
        low_confidence,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    Pass,
    Fail,
    /// No claimed value to compare with.
    NotJudged,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Pass => "pass",
            Verdict::Fail => "fail",
            Verdict::NotJudged => "not-judged",
        })
    }
}

#[derive(Clone, Debug)]
pub struct TableEntry {
    pub class_id: u8,
    pub pattern: Pattern,
    pub claim: Claim,
    pub backend: Backend,
    /// Absent for classes that are empty at the sizes examined.
    pub estimate: Option<LimitEstimate>,
    pub tolerance: f64,
    pub verdict: Verdict,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TableConfig {
    pub dp_n_max: usize,
    pub closed_form_n_max: usize,
    pub dp_tolerance: f64,
    pub closed_form_tolerance: f64,
}

impl Default for TableConfig {
    fn default() -> Self {
        TableConfig {
            dp_n_max: DEFAULT_DP_N_MAX,
            closed_form_n_max: DEFAULT_CLOSED_FORM_N_MAX,
            dp_tolerance: DP_TOLERANCE,
            closed_form_tolerance: CLOSED_FORM_TOLERANCE,
        }
    }
}

fn judge(claim: Claim, estimate: Option<&LimitEstimate>, tolerance: f64) -> Verdict {
    match (claim, estimate) {
        (Claim::Open, _) => Verdict::NotJudged,
        (Claim::NotApplicable, None) => Verdict::Pass,
        (Claim::NotApplicable, Some(_)) | (Claim::Limit(..), None) => Verdict::Fail,
        (Claim::Limit(..), Some(e)) => {
            if (e.estimate - claim.value().expect("limit")).abs() <= tolerance {
                Verdict::Pass
            } else {
                Verdict::Fail
            }
        }
    }
}

fn estimate_or_absent(seq: &PopularitySequence) -> Result<Option<LimitEstimate>> {
    match estimate_limit(seq) {
        Ok(e) => Ok(Some(e)),
        Err(Error::InsufficientData(_)) => Ok(None),
        Err(e) => Err(e),
    }
}

/// Estimates for one class, using the closed forms where they exist.
pub fn class_report(entry_class: &ClassSpec, config: &TableConfig) -> Result<Vec<TableEntry>> {
    let patterns: Vec<Pattern> = entry_class.claims.iter().map(|(p, _)| p.clone()).collect();
    let closed = matches!(entry_class.id, 11 | 18);
    let sequences = if closed {
        patterns
            .iter()
            .map(|q| popularity_sequence(&entry_class.avoided, q, config.closed_form_n_max, Backend::ClosedForm))
            .collect::<Result<Vec<_>>>()?
    } else {
        popularity_sequences_dp(&entry_class.avoided, &patterns, config.dp_n_max)?
    };
    let tolerance = if closed { config.closed_form_tolerance } else { config.dp_tolerance };
    sequences
        .iter()
        .zip(&entry_class.claims)
        .map(|(seq, &(_, claim))| {
            // an empty class may still have a few defined sizes below the cutoff
            let empty_tail = seq.entries.last().is_some_and(|e| e.class_size.is_zero());
            let estimate = if empty_tail { None } else { estimate_or_absent(seq)? };
            Ok(TableEntry {
                class_id: entry_class.id,
                pattern: seq.pattern.clone(),
                claim,
                backend: seq.backend,
                verdict: judge(claim, estimate.as_ref(), tolerance),
                estimate,
                tolerance,
            })
        })
        .collect()
}

/// Every class and every pattern it does not avoid.
pub fn table1_report(config: &TableConfig) -> Result<Vec<TableEntry>> {
    let mut out = Vec::new();
    for entry_class in classes() {
        out.extend(class_report(&entry_class, config)?);
    }
    Ok(out)
}

/// `A = Av(ps)` against `B = Av(ps + p)` for one pattern `q`.
#[derive(Clone, Debug)]
pub struct ConjectureComparison {
    pub pattern: Pattern,
    pub in_base: LimitEstimate,
    pub in_restricted: LimitEstimate,
    pub difference: f64,
    pub within_tolerance: bool,
}

#[derive(Clone, Debug)]
pub struct ConjectureReport {
    pub base: PatternSet,
    pub removed: Pattern,
    pub n_max: usize,
    pub tolerance: f64,
    /// Estimate of the popularity of the removed pattern in `A`.
    pub hypothesis: Option<LimitEstimate>,
    /// The removed pattern's estimate is within tolerance of 0.
    pub hypothesis_plausible: bool,
    /// The removed pattern never occurs in `A` up to `n_max`, so `A = B` there.
    pub degenerate: bool,
    pub comparisons: Vec<ConjectureComparison>,
}

impl ConjectureReport {
    pub fn all_within_tolerance(&self) -> bool {
        self.comparisons.iter().all(|c| c.within_tolerance)
    }
}

/// Compares limit estimates of each `q` between `Av(base)` and
/// `Av(base + removed)`. With no targets given, every pattern of the
/// same length avoided by neither is compared.
pub fn conjecture_check(
    base: &PatternSet,
    removed: &Pattern,
    targets: &[Pattern],
    n_max: usize,
    tolerance: f64,
) -> Result<ConjectureReport> {
    validate_query(base, removed)?;
    let restricted = base.with(removed.clone())?;
    let targets: Vec<Pattern> =
        if targets.is_empty() { restricted.complement_patterns() } else { targets.to_vec() };
    for q in &targets {
        if q == removed {
            return Err(Error::InvalidQuery(format!("target {q} is the removed pattern")));
        }
        validate_query(base, q)?;
    }
    let mut base_targets = targets.clone();
    base_targets.push(removed.clone());
    let mut in_base = popularity_sequences_dp(base, &base_targets, n_max)?;
    let removed_seq = in_base.pop().expect("removed pattern tracked");
    let in_restricted = popularity_sequences_dp(&restricted, &targets, n_max)?;

    let degenerate = removed_seq.entries.iter().all(|e| e.count.is_zero());
    let hypothesis = estimate_or_absent(&removed_seq)?;
    let hypothesis_plausible = hypothesis.as_ref().is_some_and(|h| h.estimate.abs() <= tolerance);
    let comparisons = in_base
        .iter()
        .zip(&in_restricted)
        .map(|(a, b)| {
            let (ea, eb) = (estimate_limit(a)?, estimate_limit(b)?);
            let difference = (ea.estimate - eb.estimate).abs();
            Ok(ConjectureComparison {
                pattern: a.pattern.clone(),
                within_tolerance: difference <= tolerance,
                in_base: ea,
                in_restricted: eb,
                difference,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(ConjectureReport {
        base: base.clone(),
        removed: removed.clone(),
        n_max,
        tolerance,
        hypothesis,
        hypothesis_plausible,
        degenerate,
        comparisons,
    })
}
