//! Output shapes shared by the CLI and the HTTP service.
//!
//! All numbers leaving the process go through [`round4`], so both front ends
//! print identical values.

use std::fmt::Write as _;

use ctxsim_core::{Ranking, Score, SimilarityMatrix, SimilarityScore, SlotKind};
use serde::{Deserialize, Serialize};

/// Rounds half away from zero to 4 decimals.
pub fn round4(x: f64) -> f64 {
    (x * 10_000.0).round() / 10_000.0
}

pub fn format_score(score: Score) -> String {
    format!("{:.4}", round4(score.value()))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GroupView {
    pub position: usize,
    pub score: f64,
    pub ids: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RankingView {
    pub query: String,
    pub context: String,
    pub groups: Vec<GroupView>,
}

impl From<&Ranking> for RankingView {
    fn from(r: &Ranking) -> Self {
        RankingView {
            query: r.query.clone(),
            context: r.context.clone(),
            groups: r
                .groups
                .iter()
                .enumerate()
                .map(|(i, g)| GroupView {
                    position: i + 1,
                    score: round4(g.score.value()),
                    ids: g.ids.clone(),
                })
                .collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MatchView {
    pub query: String,
    pub target: Option<String>,
    pub score: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TermView {
    pub path: String,
    pub slot: String,
    pub kind: String,
    pub op: String,
    /// `null` when the query has no value and the term is skipped.
    pub score: Option<f64>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub matches: Vec<MatchView>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimilarityView {
    pub query: String,
    pub target: String,
    pub context: String,
    pub value: f64,
    pub external: f64,
    pub extensional: f64,
    pub path: String,
    pub terms: Vec<TermView>,
}

impl SimilarityView {
    pub fn new(query: &str, target: &str, context: &str, s: &SimilarityScore) -> Self {
        SimilarityView {
            query: query.into(),
            target: target.into(),
            context: context.into(),
            value: round4(s.value.value()),
            external: round4(s.external.value()),
            extensional: round4(s.extensional.value()),
            path: s.path.to_string(),
            terms: s
                .terms
                .iter()
                .map(|t| TermView {
                    path: t.path.to_string(),
                    slot: t.slot.clone(),
                    kind: match t.kind {
                        SlotKind::Attribute => "attribute",
                        SlotKind::Relation => "relation",
                    }
                    .into(),
                    op: t.operation.to_string(),
                    score: t.score.map(|s| round4(s.value())),
                    matches: t
                        .matches
                        .iter()
                        .map(|m| MatchView {
                            query: m.query.clone(),
                            target: m.target.clone(),
                            score: round4(m.score.value()),
                        })
                        .collect(),
                })
                .collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MatrixView {
    pub context: String,
    pub ids: Vec<String>,
    /// Row = query, column = target.
    pub values: Vec<Vec<f64>>,
}

impl MatrixView {
    pub fn new(context: &str, m: &SimilarityMatrix) -> Self {
        MatrixView {
            context: context.into(),
            ids: m.ids().to_vec(),
            values: m
                .rows()
                .take(m.size())
                .map(|row| row.iter().map(|s| round4(s.value())).collect())
                .collect(),
        }
    }
}

/// Plain-text ranking: one line per tie group. A group holding every
/// candidate is shown as `ALL`.
pub fn ranking_table(r: &Ranking) -> String {
    let mut out = format!("query: {}  context: {}\n", r.query, r.context);
    let total = r.len();
    for (i, g) in r.groups.iter().enumerate() {
        let members = if total > 1 && g.ids.len() == total {
            "ALL".to_string()
        } else {
            g.ids.join(" ")
        };
        let _ = writeln!(out, "{:>2}  {}  {}", i + 1, members, format_score(g.score));
    }
    out
}

pub fn matrix_csv(m: &SimilarityMatrix) -> String {
    let mut out = String::new();
    for id in m.ids() {
        out.push(',');
        out.push_str(id);
    }
    out.push('\n');
    for (i, id) in m.ids().iter().enumerate() {
        out.push_str(id);
        for s in m.row(i) {
            out.push(',');
            out.push_str(&format_score(*s));
        }
        out.push('\n');
    }
    out
}

/// Grayscale rendering of a matrix: darker is more similar.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MatrixRendering {
    pub ids: Vec<String>,
    /// Row-major, one byte per cell.
    pub pixels: Vec<u8>,
}

pub fn pixel(score: Score) -> u8 {
    (255.0 * (1.0 - score.value())).round().clamp(0.0, 255.0) as u8
}

impl MatrixRendering {
    pub fn new(m: &SimilarityMatrix) -> Self {
        MatrixRendering {
            ids: m.ids().to_vec(),
            pixels: (0..m.size())
                .flat_map(|i| m.row(i).iter().map(|s| pixel(*s)))
                .collect(),
        }
    }

    /// Binary PGM (P5), one pixel per cell.
    pub fn to_pgm(&self) -> Vec<u8> {
        let n = self.ids.len();
        let mut out = format!("P5\n{n} {n}\n255\n").into_bytes();
        out.extend_from_slice(&self.pixels);
        out
    }
}
