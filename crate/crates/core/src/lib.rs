//! Asymmetric, context-dependent semantic similarity between ontology
//! instances.
//!
//! The crate is split along the layers of the measure:
//!
//! * [`ontology`] holds the schema (classes with an IS-A forest, attribute and
//!   relation declarations) and the instance store, validated on construction.
//! * [`context`] holds application contexts: partial maps from recursion paths
//!   to the attributes and relations that matter, each paired with the
//!   operation used to compare it.
//! * [`data`] has the primitive value comparators and the three set
//!   operations (`Count`, `Inter`, `Simil`).
//! * [`engine`] combines external (class-level) and extensional (value-level)
//!   similarity into a directed score, and builds matrices and rankings on top.
//!
//! Everything here is `no_std` + `alloc`. Document formats, IO and the service
//! live in the `ctxsim` crate.
#![no_std]
#![forbid(unsafe_code)]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod context;
pub mod data;
pub mod engine;
mod error;
pub mod ontology;
pub mod ranking;

pub use context::{
    ApplicationContext, ContextEntry, ContextError, Operation, RecursionPath, SlotOp,
};
pub use data::Score;
pub use engine::{ElementMatch, Engine, EngineConfig, SimilarityScore, SlotKind, Term};
pub use error::Error;
pub use ontology::{
    AttributeDef, AttributeValue, Cardinality, ClassDef, EffectiveSlots, Instance, Ontology,
    OntologyError, RelationDef, Value, ValueKind,
};
pub use ranking::{Ranking, SimilarityMatrix, TieGroup, TIE_EPSILON};
