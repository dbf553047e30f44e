//! Application contexts.
//!
//! A context is a partial map from recursion paths (a start class followed by
//! the relations navigated so far) to the attributes and relations compared at
//! that point, each tagged with the [`Operation`] used to compare it.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::ontology::{EffectiveSlots, Ontology};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Operation {
    /// Compare by cardinality.
    Count,
    /// Compare by intersection.
    Inter,
    /// Compare element-wise, recursing into related instances.
    Simil,
}

impl Operation {
    pub fn as_str(self) -> &'static str {
        match self {
            Operation::Count => "count",
            Operation::Inter => "inter",
            Operation::Simil => "simil",
        }
    }
}

impl fmt::Display for Operation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl core::str::FromStr for Operation {
    type Err = ();

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "count" => Ok(Operation::Count),
            "inter" => Ok(Operation::Inter),
            "simil" => Ok(Operation::Simil),
            _ => Err(()),
        }
    }
}

/// `[Object]`, `[Object.hasPart]`, ...
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RecursionPath {
    pub start_class: String,
    pub relations: Vec<String>,
}

impl RecursionPath {
    pub fn root(start_class: impl Into<String>) -> Self {
        RecursionPath {
            start_class: start_class.into(),
            relations: Vec::new(),
        }
    }

    pub fn child(&self, relation: impl Into<String>) -> Self {
        let mut relations = self.relations.clone();
        relations.push(relation.into());
        RecursionPath {
            start_class: self.start_class.clone(),
            relations,
        }
    }

    pub fn is_root(&self) -> bool {
        self.relations.is_empty()
    }

    pub fn len(&self) -> usize {
        self.relations.len()
    }

    pub fn is_empty(&self) -> bool {
        self.relations.is_empty()
    }

    /// Class reached by following the relation chain, or the offending
    /// relation name (with the class it was looked up on) if the chain breaks.
    pub fn terminal_class<'o>(&self, ontology: &'o Ontology) -> Result<&'o str, PathBreak> {
        let mut class = ontology
            .class(&self.start_class)
            .map(|c| c.name.as_str())
            .ok_or_else(|| PathBreak::UnknownStart(self.start_class.clone()))?;
        for relation in &self.relations {
            let slots = ontology
                .effective_slots(class)
                .expect("class names come from the ontology");
            class = slots
                .relation(relation)
                .map(|r| r.target_class.as_str())
                .ok_or_else(|| PathBreak::UnknownRelation {
                    class: class.into(),
                    relation: relation.clone(),
                })?;
        }
        Ok(class)
    }
}

impl fmt::Display for RecursionPath {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}", self.start_class)?;
        for r in &self.relations {
            write!(f, ".{r}")?;
        }
        f.write_str("]")
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PathBreak {
    UnknownStart(String),
    UnknownRelation { class: String, relation: String },
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SlotOp {
    pub name: String,
    pub op: Operation,
}

impl SlotOp {
    pub fn new(name: impl Into<String>, op: Operation) -> Self {
        SlotOp {
            name: name.into(),
            op,
        }
    }
}

/// What is compared at one path. Terms are kept in declaration order.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ContextEntry {
    pub attribute_ops: Vec<SlotOp>,
    pub relation_ops: Vec<SlotOp>,
}

impl ContextEntry {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn attr(mut self, name: impl Into<String>, op: Operation) -> Self {
        self.attribute_ops.push(SlotOp::new(name, op));
        self
    }

    pub fn rel(mut self, name: impl Into<String>, op: Operation) -> Self {
        self.relation_ops.push(SlotOp::new(name, op));
        self
    }

    pub fn len(&self) -> usize {
        self.attribute_ops.len() + self.relation_ops.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ContextError {
    /// Two entries for one path; AC must be a partial function.
    DuplicatePath(RecursionPath),
    UnknownStartClass(RecursionPath),
    BrokenPath {
        path: RecursionPath,
        class: String,
        relation: String,
    },
    UnknownAttribute {
        path: RecursionPath,
        name: String,
    },
    UnknownRelation {
        path: RecursionPath,
        name: String,
    },
    DuplicateSlot {
        path: RecursionPath,
        name: String,
    },
    /// `Simil` on a relation without an entry at the extended path.
    MissingRecursionEntry {
        path: RecursionPath,
        relation: String,
    },
}

impl fmt::Display for ContextError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use ContextError::*;
        match self {
            DuplicatePath(p) => write!(f, "path {p} has more than one entry"),
            UnknownStartClass(p) => write!(f, "path {p} starts at an unknown class"),
            BrokenPath {
                path,
                class,
                relation,
            } => write!(
                f,
                "path {path}: `{relation}` is not a relation of class `{class}`"
            ),
            UnknownAttribute { path, name } => write!(
                f,
                "path {path}: `{name}` is not an attribute of the class reached by the path"
            ),
            UnknownRelation { path, name } => write!(
                f,
                "path {path}: `{name}` is not a relation of the class reached by the path"
            ),
            DuplicateSlot { path, name } => {
                write!(f, "path {path}: `{name}` appears more than once")
            }
            MissingRecursionEntry { path, relation } => write!(
                f,
                "path {path}: simil on `{relation}` requires an entry at {}",
                path.child(relation.clone())
            ),
        }
    }
}

impl core::error::Error for ContextError {}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ApplicationContext {
    name: String,
    entries: BTreeMap<RecursionPath, ContextEntry>,
}

impl ApplicationContext {
    /// Validates the entries against `ontology`, returning every problem
    /// found.
    pub fn new(
        name: impl Into<String>,
        entries: impl IntoIterator<Item = (RecursionPath, ContextEntry)>,
        ontology: &Ontology,
    ) -> Result<Self, Vec<ContextError>> {
        let mut errors = Vec::new();
        let mut map = BTreeMap::new();
        for (path, entry) in entries {
            if map.contains_key(&path) {
                errors.push(ContextError::DuplicatePath(path));
                continue;
            }
            map.insert(path, entry);
        }
        for (path, entry) in &map {
            let terminal = match path.terminal_class(ontology) {
                Ok(c) => c,
                Err(PathBreak::UnknownStart(_)) => {
                    errors.push(ContextError::UnknownStartClass(path.clone()));
                    continue;
                }
                Err(PathBreak::UnknownRelation { class, relation }) => {
                    errors.push(ContextError::BrokenPath {
                        path: path.clone(),
                        class,
                        relation,
                    });
                    continue;
                }
            };
            let slots = ontology
                .effective_slots(terminal)
                .expect("terminal class exists");
            check_entry(path, entry, &slots, &map, &mut errors);
        }
        if errors.is_empty() {
            Ok(ApplicationContext {
                name: name.into(),
                entries: map,
            })
        } else {
            Err(errors)
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    /// Entry at `path`; `None` where the context is undefined.
    pub fn lookup(&self, path: &RecursionPath) -> Option<&ContextEntry> {
        self.entries.get(path)
    }

    /// Entries ordered by path.
    pub fn entries(&self) -> impl Iterator<Item = (&RecursionPath, &ContextEntry)> {
        self.entries.iter()
    }

    /// Root path whose start class is `class_name` or its nearest ancestor.
    pub fn start_path_for<'a>(
        &'a self,
        ontology: &Ontology,
        class_name: &str,
    ) -> Option<&'a RecursionPath> {
        ontology.ancestors(class_name).find_map(|class| {
            self.entries
                .keys()
                .find(|p| p.is_root() && p.start_class == class.name)
        })
    }
}

fn check_entry(
    path: &RecursionPath,
    entry: &ContextEntry,
    slots: &EffectiveSlots<'_>,
    all: &BTreeMap<RecursionPath, ContextEntry>,
    errors: &mut Vec<ContextError>,
) {
    let names: Vec<&str> = entry
        .attribute_ops
        .iter()
        .chain(&entry.relation_ops)
        .map(|t| t.name.as_str())
        .collect();
    for (i, name) in names.iter().enumerate() {
        if names[..i].contains(name) {
            errors.push(ContextError::DuplicateSlot {
                path: path.clone(),
                name: (*name).into(),
            });
        }
    }
    for term in &entry.attribute_ops {
        // Every value kind has a comparator, so Simil is valid on any attribute.
        if slots.attribute(&term.name).is_none() {
            errors.push(ContextError::UnknownAttribute {
                path: path.clone(),
                name: term.name.clone(),
            });
        }
    }
    for term in &entry.relation_ops {
        if slots.relation(&term.name).is_none() {
            errors.push(ContextError::UnknownRelation {
                path: path.clone(),
                name: term.name.clone(),
            });
            continue;
        }
        if term.op == Operation::Simil && !all.contains_key(&path.child(term.name.clone())) {
            errors.push(ContextError::MissingRecursionEntry {
                path: path.clone(),
                relation: term.name.clone(),
            });
        }
    }
}
