//! Ontology layer: external similarity, context-driven extensional
//! similarity, and their product.
//!
//! `sim(x, y)` is directed. It is 1 when everything the context asks about
//! `x` is also found in `y`; what `y` has beyond that does not count against
//! it.

use alloc::collections::BTreeSet;
use alloc::string::String;
use alloc::vec::Vec;

use crate::context::{ApplicationContext, ContextEntry, Operation, RecursionPath};
use crate::data::{self, Score};
use crate::ontology::{Instance, Ontology, Value};
use crate::ranking::{Ranking, SimilarityMatrix};
use crate::Error;

/// Weights of the hierarchy distances in class matching. The query-side
/// weight must be strictly smaller than the target-side one, which is what
/// makes a subclass closer to its superclass than the reverse.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EngineConfig {
    pub query_distance_weight: f64,
    pub target_distance_weight: f64,
}

impl Default for EngineConfig {
    fn default() -> Self {
        EngineConfig {
            query_distance_weight: 0.3,
            target_distance_weight: 0.7,
        }
    }
}

impl EngineConfig {
    pub fn validate(&self) -> Result<(), Error> {
        let (q, t) = (self.query_distance_weight, self.target_distance_weight);
        if !(q.is_finite() && t.is_finite()) {
            return Err(Error::InvalidConfig("distance weights must be finite"));
        }
        if !(0.0 < q && q < t) {
            return Err(Error::InvalidConfig(
                "require 0 < query_distance_weight < target_distance_weight",
            ));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SlotKind {
    Attribute,
    Relation,
}

/// Best counterpart found in the target for one related instance of the
/// query, for `Simil` relation terms.
#[derive(Debug, Clone, PartialEq)]
pub struct ElementMatch {
    pub query: String,
    /// `None` when the target has no related instances at all.
    pub target: Option<String>,
    pub score: Score,
}

/// One term of the extensional mean.
#[derive(Debug, Clone, PartialEq)]
pub struct Term {
    pub path: RecursionPath,
    pub slot: String,
    pub kind: SlotKind,
    pub operation: Operation,
    /// `None` when the query has no value for the slot and the term is left
    /// out of the mean.
    pub score: Option<Score>,
    pub matches: Vec<ElementMatch>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimilarityScore {
    /// `external × extensional`.
    pub value: Score,
    pub external: Score,
    pub extensional: Score,
    /// Root path of the context the query was evaluated at.
    pub path: RecursionPath,
    pub terms: Vec<Term>,
}

#[derive(Debug, Clone, Copy)]
pub struct Engine<'a> {
    ontology: &'a Ontology,
    config: EngineConfig,
}

impl<'a> Engine<'a> {
    pub fn new(ontology: &'a Ontology) -> Self {
        Engine {
            ontology,
            config: EngineConfig::default(),
        }
    }

    pub fn with_config(ontology: &'a Ontology, config: EngineConfig) -> Result<Self, Error> {
        config.validate()?;
        Ok(Engine { ontology, config })
    }

    pub fn ontology(&self) -> &'a Ontology {
        self.ontology
    }

    pub fn config(&self) -> EngineConfig {
        self.config
    }

    fn instance(&self, id: &str) -> Result<&'a Instance, Error> {
        self.ontology
            .instance(id)
            .ok_or_else(|| Error::UnknownInstance(id.into()))
    }

    /// `(1 + depth(l)) / (1 + depth(l) + wq·d1 + wt·d2)` where `l` is the
    /// lowest common ancestor and `d1`, `d2` are the edge counts from `c1`,
    /// `c2` up to it. 0 across trees, 1 for the same class.
    pub fn class_matching(&self, c1: &str, c2: &str) -> Result<Score, Error> {
        let Some(lca) = self.ontology.lowest_common_ancestor(c1, c2)? else {
            return Ok(Score::ZERO);
        };
        if c1 == c2 {
            return Ok(Score::ONE);
        }
        let depth = self.ontology.class_depth(lca)? as f64;
        let d1 = self.ontology.class_depth(c1)? as f64 - depth;
        let d2 = self.ontology.class_depth(c2)? as f64 - depth;
        let num = 1.0 + depth;
        let den =
            num + self.config.query_distance_weight * d1 + self.config.target_distance_weight * d2;
        Ok(Score::saturating(num / den))
    }

    /// Share of `c1`'s effective slots (by name) that `c2` also has.
    pub fn slot_matching(&self, c1: &str, c2: &str) -> Result<Score, Error> {
        let s1 = self.ontology.effective_slots(c1)?;
        let s2 = self.ontology.effective_slots(c2)?;
        if s1.is_empty() {
            return Ok(Score::ONE);
        }
        let other: BTreeSet<&str> = s2.names().collect();
        let shared = s1.names().filter(|n| other.contains(n)).count();
        Ok(Score::saturating(shared as f64 / s1.len() as f64))
    }

    /// Mean of class and slot matching on the instances' classes.
    pub fn external_similarity(&self, i1: &Instance, i2: &Instance) -> Result<Score, Error> {
        if i1.class_name == i2.class_name {
            // Still reject unknown classes.
            self.ontology.class_depth(&i1.class_name)?;
            return Ok(Score::ONE);
        }
        let class = self.class_matching(&i1.class_name, &i2.class_name)?;
        let slots = self.slot_matching(&i1.class_name, &i2.class_name)?;
        Ok(Score::mean([class, slots]).unwrap_or(Score::ZERO))
    }

    /// Unweighted mean of the terms of the context entry at `path`.
    pub fn extensional_similarity(
        &self,
        context: &ApplicationContext,
        path: &RecursionPath,
        i1: &Instance,
        i2: &Instance,
    ) -> Result<Score, Error> {
        self.extensional(context, path, i1, i2, None)
    }

    fn extensional(
        &self,
        context: &ApplicationContext,
        path: &RecursionPath,
        i1: &Instance,
        i2: &Instance,
        mut explain: Option<&mut Vec<Term>>,
    ) -> Result<Score, Error> {
        let entry = context
            .lookup(path)
            .ok_or_else(|| Error::UndefinedPath(path.clone()))?;
        let terminal = path
            .terminal_class(self.ontology)
            .map_err(|_| Error::UndefinedPath(path.clone()))?;
        if !self.ontology.is_a(&i1.class_name, terminal) {
            return Err(Error::ClassMismatch {
                instance: i1.id.clone(),
                expected: terminal.into(),
                found: i1.class_name.clone(),
            });
        }

        let mut scores = Vec::with_capacity(entry.len());
        self.attribute_terms(path, entry, i1, i2, &mut scores, explain.as_deref_mut());
        self.relation_terms(context, path, entry, i1, i2, &mut scores, explain)?;
        Ok(Score::mean(scores).unwrap_or(Score::ONE))
    }

    fn attribute_terms(
        &self,
        path: &RecursionPath,
        entry: &ContextEntry,
        i1: &Instance,
        i2: &Instance,
        scores: &mut Vec<Score>,
        mut explain: Option<&mut Vec<Term>>,
    ) {
        for term in &entry.attribute_ops {
            let score = i1.attribute_values.get(&term.name).map(|v1| {
                let Some(v2) = i2.attribute_values.get(&term.name) else {
                    return Score::ZERO;
                };
                let (a, b) = (v1.values(), v2.values());
                match term.op {
                    Operation::Count => data::op_count_by(a, b, Value::matches),
                    Operation::Inter => data::op_inter_by(a, b, Value::matches),
                    Operation::Simil => {
                        let compared: Result<Score, core::convert::Infallible> =
                            data::op_simil(a, b, |x, y| Ok(compare_values(x, y)));
                        compared.unwrap_or_else(|never| match never {})
                    }
                }
            });
            scores.extend(score);
            if let Some(out) = explain.as_deref_mut() {
                out.push(Term {
                    path: path.clone(),
                    slot: term.name.clone(),
                    kind: SlotKind::Attribute,
                    operation: term.op,
                    score,
                    matches: Vec::new(),
                });
            }
        }
    }

    #[allow(clippy::too_many_arguments)]
    fn relation_terms(
        &self,
        context: &ApplicationContext,
        path: &RecursionPath,
        entry: &ContextEntry,
        i1: &Instance,
        i2: &Instance,
        scores: &mut Vec<Score>,
        mut explain: Option<&mut Vec<Term>>,
    ) -> Result<(), Error> {
        for term in &entry.relation_ops {
            let mut matches = Vec::new();
            let score = match i1.relation_values.get(&term.name) {
                None => None,
                Some(t1) => Some(match i2.relation_values.get(&term.name) {
                    None => {
                        if explain.is_some() {
                            matches.extend(t1.iter().map(|id| ElementMatch {
                                query: id.clone(),
                                target: None,
                                score: Score::ZERO,
                            }));
                        }
                        Score::ZERO
                    }
                    Some(t2) => match term.op {
                        Operation::Count => data::op_count(
                            &t1.iter().collect::<Vec<_>>(),
                            &t2.iter().collect::<Vec<_>>(),
                        ),
                        Operation::Inter => data::op_inter(
                            &t1.iter().collect::<Vec<_>>(),
                            &t2.iter().collect::<Vec<_>>(),
                        ),
                        Operation::Simil => {
                            let child = path.child(term.name.clone());
                            let a = self.resolve_all(t1)?;
                            let b = self.resolve_all(t2)?;
                            let best = data::best_matches(&a, &b, |x, y| {
                                self.element_similarity(context, &child, x, y)
                            })?;
                            if explain.is_some() {
                                matches.extend(a.iter().zip(&best).map(|(x, m)| ElementMatch {
                                    query: x.id.clone(),
                                    target: m.map(|(j, _)| b[j].id.clone()),
                                    score: m.map_or(Score::ZERO, |(_, s)| s),
                                }));
                            }
                            data::simil_from_matches(&best)
                        }
                    },
                }),
            };
            scores.extend(score);
            if let Some(out) = explain.as_deref_mut() {
                out.push(Term {
                    path: path.clone(),
                    slot: term.name.clone(),
                    kind: SlotKind::Relation,
                    operation: term.op,
                    score,
                    matches,
                });
            }
        }
        Ok(())
    }

    fn resolve_all(&self, ids: &BTreeSet<String>) -> Result<Vec<&'a Instance>, Error> {
        ids.iter().map(|id| self.instance(id)).collect()
    }

    /// Score of a related-instance pair inside `Simil`: recursive extensional
    /// similarity times the pair's external similarity.
    fn element_similarity(
        &self,
        context: &ApplicationContext,
        path: &RecursionPath,
        x: &Instance,
        y: &Instance,
    ) -> Result<Score, Error> {
        let ext = self.extensional(context, path, x, y, None)?;
        let external = self.external_similarity(x, y)?;
        Ok(Score::saturating(ext.value() * external.value()))
    }

    fn evaluate(
        &self,
        context: &ApplicationContext,
        query: &Instance,
        target: &Instance,
        explain: bool,
    ) -> Result<SimilarityScore, Error> {
        let path = context
            .start_path_for(self.ontology, &query.class_name)
            .ok_or_else(|| Error::NoApplicablePath {
                context: context.name().into(),
                class: query.class_name.clone(),
            })?;
        let mut terms = Vec::new();
        let extensional =
            self.extensional(context, path, query, target, explain.then_some(&mut terms))?;
        let external = self.external_similarity(query, target)?;
        Ok(SimilarityScore {
            value: Score::saturating(external.value() * extensional.value()),
            external,
            extensional,
            path: path.clone(),
            terms,
        })
    }

    /// Directed similarity of `query` to `target`, with its term breakdown.
    pub fn sim(
        &self,
        context: &ApplicationContext,
        query: &str,
        target: &str,
    ) -> Result<SimilarityScore, Error> {
        let q = self.instance(query)?;
        let t = self.instance(target)?;
        self.evaluate(context, q, t, true)
    }

    /// Score only, skipping the explanation.
    pub fn score(
        &self,
        context: &ApplicationContext,
        query: &str,
        target: &str,
    ) -> Result<Score, Error> {
        let q = self.instance(query)?;
        let t = self.instance(target)?;
        Ok(self.evaluate(context, q, t, false)?.value)
    }

    /// One row of a similarity matrix: `query` against every id in `ids`.
    pub fn similarity_row<S: AsRef<str>>(
        &self,
        context: &ApplicationContext,
        query: &str,
        ids: &[S],
    ) -> Result<Vec<Score>, Error> {
        let q = self.instance(query)?;
        ids.iter()
            .map(|t| {
                let t = self.instance(t.as_ref())?;
                Ok(self.evaluate(context, q, t, false)?.value)
            })
            .collect()
    }

    pub fn similarity_matrix<S: AsRef<str>>(
        &self,
        context: &ApplicationContext,
        ids: &[S],
    ) -> Result<SimilarityMatrix, Error> {
        let mut values = Vec::with_capacity(ids.len() * ids.len());
        for q in ids {
            values.extend(self.similarity_row(context, q.as_ref(), ids)?);
        }
        Ok(SimilarityMatrix::from_rows(
            ids.iter().map(|s| s.as_ref().into()).collect(),
            values,
        ))
    }

    /// Every other instance of the query's class, most similar first.
    pub fn rank(&self, context: &ApplicationContext, query: &str) -> Result<Ranking, Error> {
        let q = self.instance(query)?;
        // Surface a missing start path even when there is nothing to rank.
        if context
            .start_path_for(self.ontology, &q.class_name)
            .is_none()
        {
            return Err(Error::NoApplicablePath {
                context: context.name().into(),
                class: q.class_name.clone(),
            });
        }
        let scored = self
            .ontology
            .instances_of(&q.class_name)
            .filter(|t| t.id != q.id)
            .map(|t| Ok((t.id.clone(), self.evaluate(context, q, t, false)?.value)))
            .collect::<Result<Vec<_>, Error>>()?;
        Ok(Ranking::from_scores(query, context.name(), scored))
    }
}

fn compare_values(a: &Value, b: &Value) -> Score {
    match (a, b) {
        (Value::Bool(x), Value::Bool(y)) => data::compare_boolean(*x, *y),
        (Value::Number(x), Value::Number(y)) => data::compare_number(*x, *y),
        (Value::Text(x), Value::Text(y)) => data::compare_text(x, y),
        _ => Score::ZERO,
    }
}
