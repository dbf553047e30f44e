use alloc::string::String;
use alloc::vec::Vec;

use crate::data::Score;

/// Scores closer than this are reported as one tie group.
pub const TIE_EPSILON: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub struct TieGroup {
    pub score: Score,
    /// Sorted ascending.
    pub ids: Vec<String>,
}

/// Retrieval list for one query under one context, most similar first.
#[derive(Debug, Clone, PartialEq)]
pub struct Ranking {
    pub query: String,
    pub context: String,
    pub groups: Vec<TieGroup>,
}

impl Ranking {
    /// Groups `(id, score)` pairs by descending score.
    pub fn from_scores(
        query: impl Into<String>,
        context: impl Into<String>,
        mut scored: Vec<(String, Score)>,
    ) -> Self {
        scored.sort_by(|(ia, a), (ib, b)| b.value().total_cmp(&a.value()).then_with(|| ia.cmp(ib)));
        let mut groups: Vec<TieGroup> = Vec::new();
        for (id, score) in scored {
            match groups.last_mut() {
                Some(g) if g.score.value() - score.value() <= TIE_EPSILON => g.ids.push(id),
                _ => groups.push(TieGroup {
                    score,
                    ids: alloc::vec![id],
                }),
            }
        }
        for g in &mut groups {
            g.ids.sort();
        }
        Ranking {
            query: query.into(),
            context: context.into(),
            groups,
        }
    }

    pub fn is_empty(&self) -> bool {
        self.groups.is_empty()
    }

    /// Number of ranked instances (not groups).
    pub fn len(&self) -> usize {
        self.groups.iter().map(|g| g.ids.len()).sum()
    }

    pub fn score_of(&self, id: &str) -> Option<Score> {
        self.groups
            .iter()
            .find(|g| g.ids.iter().any(|i| i == id))
            .map(|g| g.score)
    }
}

/// Directed score grid; row = query, column = target.
#[derive(Debug, Clone, PartialEq)]
pub struct SimilarityMatrix {
    ids: Vec<String>,
    values: Vec<Score>,
}

impl SimilarityMatrix {
    /// `values` is row-major and must hold `ids.len()²` entries.
    pub fn from_rows(ids: Vec<String>, values: Vec<Score>) -> Self {
        assert_eq!(values.len(), ids.len() * ids.len(), "matrix must be square");
        SimilarityMatrix { ids, values }
    }

    pub fn ids(&self) -> &[String] {
        &self.ids
    }

    pub fn size(&self) -> usize {
        self.ids.len()
    }

    pub fn get(&self, row: usize, col: usize) -> Score {
        self.values[row * self.ids.len() + col]
    }

    pub fn row(&self, row: usize) -> &[Score] {
        let n = self.ids.len();
        &self.values[row * n..(row + 1) * n]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[Score]> {
        // chunks() panics on 0, and an empty matrix has no rows anyway.
        self.values.chunks(self.ids.len().max(1))
    }

    pub fn index_of(&self, id: &str) -> Option<usize> {
        self.ids.iter().position(|i| i == id)
    }
}
