//! Data layer: value comparators and the directed set operations.
//!
//! Set operations are directed. The first argument is the query side, and a
//! query whose characteristics are all found in the target scores 1.

use alloc::vec::Vec;
use core::fmt;

use unicode_normalization::UnicodeNormalization;

/// A similarity value in `[0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Default)]
pub struct Score(f64);

impl Score {
    pub const ZERO: Score = Score(0.0);
    pub const ONE: Score = Score(1.0);

    /// `None` for NaN or values outside `[0, 1]`.
    pub fn new(value: f64) -> Option<Score> {
        (0.0..=1.0).contains(&value).then_some(Score(value))
    }

    /// Clamps into `[0, 1]`; NaN maps to 0.
    pub(crate) fn saturating(value: f64) -> Score {
        if value.is_nan() {
            Score::ZERO
        } else {
            Score(value.clamp(0.0, 1.0))
        }
    }

    pub fn value(self) -> f64 {
        self.0
    }

    pub fn is_one(self) -> bool {
        self.0 == 1.0
    }

    /// Unweighted mean; `None` for an empty input.
    pub fn mean(scores: impl IntoIterator<Item = Score>) -> Option<Score> {
        let (sum, n) = scores
            .into_iter()
            .fold((0.0, 0usize), |(s, n), x| (s + x.0, n + 1));
        (n > 0).then(|| Score::saturating(sum / n as f64))
    }
}

impl From<Score> for f64 {
    fn from(s: Score) -> f64 {
        s.0
    }
}

impl fmt::Display for Score {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(&self.0, f)
    }
}

fn indicator(b: bool) -> Score {
    if b {
        Score::ONE
    } else {
        Score::ZERO
    }
}

pub fn compare_boolean(a: bool, b: bool) -> Score {
    indicator(a == b)
}

/// `1 - |a - b| / (|a| + |b|)`, with equal inputs (including `0, 0`) scoring 1.
pub fn compare_number(a: f64, b: f64) -> Score {
    if a == b {
        return Score::ONE;
    }
    Score::saturating(1.0 - (a - b).abs() / (a.abs() + b.abs()))
}

/// Exact match after NFC normalization.
pub fn compare_text(a: &str, b: &str) -> Score {
    indicator(a.nfc().eq(b.nfc()))
}

/// Distinct elements of `xs` under `eq`, first occurrence kept.
fn distinct<'a, T>(xs: &'a [T], eq: &impl Fn(&T, &T) -> bool) -> Vec<&'a T> {
    let mut out: Vec<&T> = Vec::with_capacity(xs.len());
    for x in xs {
        if !out.iter().any(|y| eq(y, x)) {
            out.push(x);
        }
    }
    out
}

/// `|A ∩ B| / |A|`, 1 when `A` is empty.
pub fn op_inter<T: PartialEq>(a: &[T], b: &[T]) -> Score {
    op_inter_by(a, b, |x, y| x == y)
}

pub fn op_inter_by<T>(a: &[T], b: &[T], eq: impl Fn(&T, &T) -> bool) -> Score {
    let a = distinct(a, &eq);
    if a.is_empty() {
        return Score::ONE;
    }
    let shared = a.iter().filter(|x| b.iter().any(|y| eq(x, y))).count();
    Score::saturating(shared as f64 / a.len() as f64)
}

/// 1 when `|A| <= |B|`, otherwise `|B| / |A|`.
pub fn op_count<T: PartialEq>(a: &[T], b: &[T]) -> Score {
    op_count_by(a, b, |x, y| x == y)
}

pub fn op_count_by<T>(a: &[T], b: &[T], eq: impl Fn(&T, &T) -> bool) -> Score {
    let na = distinct(a, &eq).len();
    let nb = distinct(b, &eq).len();
    if na <= nb {
        Score::ONE
    } else {
        Score::saturating(nb as f64 / na as f64)
    }
}

/// For each element of `a`, the index into `b` and score of its best match
/// (first index on ties); `None` when `b` is empty.
pub fn best_matches<A, B, E>(
    a: &[A],
    b: &[B],
    mut element_sim: impl FnMut(&A, &B) -> Result<Score, E>,
) -> Result<Vec<Option<(usize, Score)>>, E> {
    let mut out = Vec::with_capacity(a.len());
    for x in a {
        let mut best: Option<(usize, Score)> = None;
        for (j, y) in b.iter().enumerate() {
            let s = element_sim(x, y)?;
            if best.is_none_or(|(_, bs)| s.0 > bs.0) {
                best = Some((j, s));
            }
        }
        out.push(best);
    }
    Ok(out)
}

/// Directed best-match average: mean over `a` of the best score found in `b`.
/// 1 when `a` is empty, 0 when only `b` is.
pub fn op_simil<A, B, E>(
    a: &[A],
    b: &[B],
    element_sim: impl FnMut(&A, &B) -> Result<Score, E>,
) -> Result<Score, E> {
    let matches = best_matches(a, b, element_sim)?;
    Ok(simil_from_matches(&matches))
}

pub(crate) fn simil_from_matches(matches: &[Option<(usize, Score)>]) -> Score {
    Score::mean(matches.iter().map(|m| m.map_or(Score::ZERO, |(_, s)| s))).unwrap_or(Score::ONE)
}
