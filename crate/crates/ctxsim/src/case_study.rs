//! The bundled Alessi kitchen-container dataset: nine containers described
//! by their parts, capacities and tasks, the `part` and `usage` contexts, and
//! the expected rankings under both.
//!
//! Resource files are embedded at build time and checked against
//! `data/SHA256SUMS` when loaded.

use std::path::Path;

use ctxsim_core::{ApplicationContext, Ontology};
use sha2::{Digest, Sha256};

use crate::format::{self, LoadError};

pub const ONTOLOGY_FILE: &str = "alessi.onto";
pub const PART_CONTEXT_FILE: &str = "part.ctx";
pub const USAGE_CONTEXT_FILE: &str = "usage.ctx";
pub const GOLDEN_PART_FILE: &str = "golden_part.tsv";
pub const GOLDEN_USAGE_FILE: &str = "golden_usage.tsv";
const CHECKSUM_FILE: &str = "SHA256SUMS";

const EMBEDDED: [(&str, &str); 6] = [
    (ONTOLOGY_FILE, include_str!("../data/alessi.onto")),
    (PART_CONTEXT_FILE, include_str!("../data/part.ctx")),
    (USAGE_CONTEXT_FILE, include_str!("../data/usage.ctx")),
    (GOLDEN_PART_FILE, include_str!("../data/golden_part.tsv")),
    (GOLDEN_USAGE_FILE, include_str!("../data/golden_usage.tsv")),
    (CHECKSUM_FILE, include_str!("../data/SHA256SUMS")),
];

/// The nine containers, in the order they are pictured.
pub const OBJECT_IDS: [&str; 9] = [
    "IceBucket_28",
    "Jug_26",
    "WateringCan_1",
    "Kettles_19",
    "Jug_24",
    "MilkPot_22",
    "FruitBowl_30",
    "Kettles_20",
    "OilCruet_36",
];

#[derive(Debug, thiserror::Error)]
pub enum CaseStudyError {
    #[error("resource `{0}` is missing")]
    Missing(String),
    #[error("resource `{file}` is corrupt: checksum {actual} does not match {expected}")]
    Checksum {
        file: String,
        expected: String,
        actual: String,
    },
    #[error("resource `{file}`: {source}")]
    Load {
        file: String,
        #[source]
        source: LoadError,
    },
    #[error("resource `{file}` line {line}: {message}")]
    Golden {
        file: String,
        line: usize,
        message: String,
    },
    #[error("reading `{file}`: {source}")]
    Io {
        file: String,
        #[source]
        source: std::io::Error,
    },
}

/// One tie group of an expected ranking row, score as printed (4 decimals).
#[derive(Debug, Clone, PartialEq)]
pub struct GoldenGroup {
    pub ids: Vec<String>,
    pub score: f64,
}

/// Expected ranking for one query under one context.
#[derive(Debug, Clone, PartialEq)]
pub struct GoldenRanking {
    pub context: String,
    pub query: String,
    pub groups: Vec<GoldenGroup>,
}

impl GoldenRanking {
    pub fn expected_score(&self, target: &str) -> Option<f64> {
        self.groups
            .iter()
            .find(|g| g.ids.iter().any(|id| id == target))
            .map(|g| g.score)
    }
}

#[derive(Debug, Clone)]
pub struct CaseStudy {
    pub ontology: Ontology,
    pub part: ApplicationContext,
    pub usage: ApplicationContext,
    pub golden: Vec<GoldenRanking>,
}

impl CaseStudy {
    pub fn context(&self, name: &str) -> Option<&ApplicationContext> {
        [&self.part, &self.usage]
            .into_iter()
            .find(|c| c.name() == name)
    }

    pub fn golden_for(&self, context: &str) -> impl Iterator<Item = &GoldenRanking> {
        let context = context.to_string();
        self.golden.iter().filter(move |g| g.context == context)
    }
}

/// Raw text of an embedded resource.
pub fn resource(name: &str) -> Option<&'static str> {
    EMBEDDED.iter().find(|(n, _)| *n == name).map(|(_, s)| *s)
}

/// Loads the embedded bundle.
pub fn load_case_study() -> Result<CaseStudy, CaseStudyError> {
    load_with(|name| {
        resource(name)
            .map(str::to_string)
            .ok_or_else(|| CaseStudyError::Missing(name.into()))
    })
}

/// Loads the bundle from a directory holding the same files.
pub fn load_case_study_from(dir: &Path) -> Result<CaseStudy, CaseStudyError> {
    load_with(|name| {
        std::fs::read_to_string(dir.join(name)).map_err(|source| {
            if source.kind() == std::io::ErrorKind::NotFound {
                CaseStudyError::Missing(name.into())
            } else {
                CaseStudyError::Io {
                    file: name.into(),
                    source,
                }
            }
        })
    })
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

fn load_with(
    read: impl Fn(&str) -> Result<String, CaseStudyError>,
) -> Result<CaseStudy, CaseStudyError> {
    let sums = read(CHECKSUM_FILE)?;
    let checked = |name: &str| -> Result<String, CaseStudyError> {
        let text = read(name)?;
        let expected = sums
            .lines()
            .filter_map(|l| l.split_once("  "))
            .find(|(_, file)| file.trim() == name)
            .map(|(sum, _)| sum.trim().to_string())
            .ok_or_else(|| CaseStudyError::Missing(format!("{CHECKSUM_FILE} entry for {name}")))?;
        let actual = sha256_hex(text.as_bytes());
        if actual != expected {
            return Err(CaseStudyError::Checksum {
                file: name.into(),
                expected,
                actual,
            });
        }
        Ok(text)
    };
    let load_err = |file: &str| {
        let file = file.to_string();
        move |source| CaseStudyError::Load { file, source }
    };

    let ontology =
        format::load_ontology(&checked(ONTOLOGY_FILE)?).map_err(load_err(ONTOLOGY_FILE))?;
    let part = format::parse_context(&checked(PART_CONTEXT_FILE)?, &ontology)
        .map_err(load_err(PART_CONTEXT_FILE))?;
    let usage = format::parse_context(&checked(USAGE_CONTEXT_FILE)?, &ontology)
        .map_err(load_err(USAGE_CONTEXT_FILE))?;
    let mut golden = parse_golden(&checked(GOLDEN_PART_FILE)?, part.name(), GOLDEN_PART_FILE)?;
    golden.extend(parse_golden(
        &checked(GOLDEN_USAGE_FILE)?,
        usage.name(),
        GOLDEN_USAGE_FILE,
    )?);
    Ok(CaseStudy {
        ontology,
        part,
        usage,
        golden,
    })
}

/// Parses `query<TAB>id,id,...<TAB>score` lines; consecutive lines with the
/// same query form one ranking. `#` starts a comment line.
pub fn parse_golden(
    text: &str,
    context: &str,
    file: &str,
) -> Result<Vec<GoldenRanking>, CaseStudyError> {
    let mut rows: Vec<GoldenRanking> = Vec::new();
    for (n, line) in text.lines().enumerate() {
        let line_no = n + 1;
        let err = |message: String| CaseStudyError::Golden {
            file: file.into(),
            line: line_no,
            message,
        };
        if line.trim().is_empty() || line.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = line.split('\t').collect();
        let [query, ids, score] = fields[..] else {
            return Err(err(format!(
                "expected 3 tab-separated fields, found {}",
                fields.len()
            )));
        };
        let score: f64 = score
            .trim()
            .parse()
            .map_err(|_| err(format!("bad score `{score}`")))?;
        let group = GoldenGroup {
            ids: ids.split(',').map(|s| s.trim().to_string()).collect(),
            score,
        };
        match rows.last_mut() {
            Some(row) if row.query == query => {
                if row.groups.last().is_some_and(|g| g.score <= score) {
                    return Err(err("scores must strictly decrease within a row".into()));
                }
                row.groups.push(group);
            }
            _ => {
                if rows.iter().any(|r| r.query == query) {
                    return Err(err(format!("rows for `{query}` are not contiguous")));
                }
                rows.push(GoldenRanking {
                    context: context.into(),
                    query: query.into(),
                    groups: vec![group],
                });
            }
        }
    }
    Ok(rows)
}
