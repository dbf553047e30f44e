//! TOML document formats for ontologies (`.onto`) and application contexts
//! (`.ctx`).
//!
//! Ontology documents hold `classes` and `instances` arrays:
//!
//! ```toml
//! [[classes]]
//! name = "Object"
//! attributes = [{ name = "liquidCapacityInLiters", kind = "number", card = "one" }]
//! relations = [{ name = "hasPart", target = "FunctionalPart", card = "many" }]
//!
//! [[instances]]
//! id = "Jug_24"
//! class = "Object"
//! attrs = { liquidCapacityInLiters = 0.7 }
//! rels = { hasPart = ["LiquidProofConcavity_57"] }
//! ```
//!
//! Context documents hold a `name` and `entries`:
//!
//! ```toml
//! name = "part"
//!
//! [[entries]]
//! path = { start = "Object", relations = [] }
//! attrs = []
//! rels = [{ name = "hasPart", op = "simil" }]
//! ```
//!
//! The same field names are used for the JSON forms served over HTTP.

use std::collections::BTreeMap;
use std::fmt;

use ctxsim_core::{
    ApplicationContext, AttributeDef, AttributeValue, Cardinality, ClassDef, ContextEntry,
    ContextError, Instance, Ontology, OntologyError, Operation, RecursionPath, RelationDef, SlotOp,
    Value, ValueKind,
};
use serde::{Deserialize, Serialize};

#[derive(Debug, thiserror::Error)]
pub enum LoadError {
    #[error("{line}:{column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("invalid ontology: {}", join(.0))]
    Ontology(Vec<OntologyError>),
    #[error("invalid context: {}", join(.0))]
    Context(Vec<ContextError>),
}

impl LoadError {
    /// One line per problem, for diagnostics output.
    pub fn diagnostics(&self) -> Vec<String> {
        match self {
            LoadError::Parse { .. } => vec![self.to_string()],
            LoadError::Ontology(errs) => errs.iter().map(ToString::to_string).collect(),
            LoadError::Context(errs) => errs.iter().map(ToString::to_string).collect(),
        }
    }
}

fn join<T: fmt::Display>(items: &[T]) -> String {
    items
        .iter()
        .map(ToString::to_string)
        .collect::<Vec<_>>()
        .join("; ")
}

fn parse_toml<T: serde::de::DeserializeOwned>(source: &str) -> Result<T, LoadError> {
    toml::from_str(source).map_err(|err| {
        let (line, column) = err
            .span()
            .map(|span| line_column(source, span.start))
            .unwrap_or((1, 1));
        LoadError::Parse {
            line,
            column,
            message: err.message().trim().to_string(),
        }
    })
}

/// 1-based line and column (in characters) of a byte offset.
fn line_column(source: &str, offset: usize) -> (usize, usize) {
    let before = &source[..offset.min(source.len())];
    let line = before.matches('\n').count() + 1;
    let column = before.rsplit('\n').next().map_or(0, |l| l.chars().count()) + 1;
    (line, column)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum KindDoc {
    Bool,
    Number,
    Text,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CardDoc {
    One,
    Many,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AttributeDoc {
    pub name: String,
    pub kind: KindDoc,
    pub card: CardDoc,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RelationDoc {
    pub name: String,
    pub target: String,
    pub card: CardDoc,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ClassDoc {
    pub name: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub parent: Option<String>,
    #[serde(default)]
    pub attributes: Vec<AttributeDoc>,
    #[serde(default)]
    pub relations: Vec<RelationDoc>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ScalarDoc {
    Bool(bool),
    Number(f64),
    Text(String),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ValueDoc {
    Scalar(ScalarDoc),
    List(Vec<ScalarDoc>),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InstanceDoc {
    pub id: String,
    pub class: String,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub attrs: BTreeMap<String, ValueDoc>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub rels: BTreeMap<String, Vec<String>>,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OntologyDoc {
    #[serde(default)]
    pub classes: Vec<ClassDoc>,
    #[serde(default)]
    pub instances: Vec<InstanceDoc>,
}

fn kind_from_doc(k: KindDoc) -> ValueKind {
    match k {
        KindDoc::Bool => ValueKind::Boolean,
        KindDoc::Number => ValueKind::Number,
        KindDoc::Text => ValueKind::Text,
    }
}

fn kind_to_doc(k: ValueKind) -> KindDoc {
    match k {
        ValueKind::Boolean => KindDoc::Bool,
        ValueKind::Number => KindDoc::Number,
        ValueKind::Text => KindDoc::Text,
    }
}

fn card_from_doc(c: CardDoc) -> Cardinality {
    match c {
        CardDoc::One => Cardinality::Single,
        CardDoc::Many => Cardinality::Set,
    }
}

fn card_to_doc(c: Cardinality) -> CardDoc {
    match c {
        Cardinality::Single => CardDoc::One,
        Cardinality::Set => CardDoc::Many,
    }
}

fn scalar_from_doc(s: ScalarDoc) -> Value {
    match s {
        ScalarDoc::Bool(b) => Value::Bool(b),
        ScalarDoc::Number(n) => Value::Number(n),
        ScalarDoc::Text(t) => Value::Text(t),
    }
}

fn scalar_to_doc(v: &Value) -> ScalarDoc {
    match v {
        Value::Bool(b) => ScalarDoc::Bool(*b),
        Value::Number(n) => ScalarDoc::Number(*n),
        Value::Text(t) => ScalarDoc::Text(t.clone()),
    }
}

pub fn instance_to_doc(instance: &Instance) -> InstanceDoc {
    InstanceDoc {
        id: instance.id.clone(),
        class: instance.class_name.clone(),
        attrs: instance
            .attribute_values
            .iter()
            .map(|(k, v)| {
                let doc = match v {
                    AttributeValue::Single(s) => ValueDoc::Scalar(scalar_to_doc(s)),
                    AttributeValue::Set(vs) => {
                        ValueDoc::List(vs.iter().map(scalar_to_doc).collect())
                    }
                };
                (k.clone(), doc)
            })
            .collect(),
        rels: instance
            .relation_values
            .iter()
            .map(|(k, ids)| (k.clone(), ids.iter().cloned().collect()))
            .collect(),
    }
}

impl OntologyDoc {
    pub fn from_ontology(ontology: &Ontology) -> Self {
        OntologyDoc {
            classes: ontology
                .classes()
                .map(|c| ClassDoc {
                    name: c.name.clone(),
                    parent: c.parent.clone(),
                    attributes: c
                        .attributes
                        .iter()
                        .map(|a| AttributeDoc {
                            name: a.name.clone(),
                            kind: kind_to_doc(a.kind),
                            card: card_to_doc(a.cardinality),
                        })
                        .collect(),
                    relations: c
                        .relations
                        .iter()
                        .map(|r| RelationDoc {
                            name: r.name.clone(),
                            target: r.target_class.clone(),
                            card: card_to_doc(r.cardinality),
                        })
                        .collect(),
                })
                .collect(),
            instances: ontology.instances().map(instance_to_doc).collect(),
        }
    }

    pub fn into_ontology(self) -> Result<Ontology, LoadError> {
        let classes: Vec<ClassDef> = self
            .classes
            .into_iter()
            .map(|c| ClassDef {
                name: c.name,
                parent: c.parent,
                attributes: c
                    .attributes
                    .into_iter()
                    .map(|a| AttributeDef {
                        name: a.name,
                        kind: kind_from_doc(a.kind),
                        cardinality: card_from_doc(a.card),
                    })
                    .collect(),
                relations: c
                    .relations
                    .into_iter()
                    .map(|r| RelationDef {
                        name: r.name,
                        target_class: r.target,
                        cardinality: card_from_doc(r.card),
                    })
                    .collect(),
            })
            .collect();

        // Relation targets are sets in the model; a repeated id is an error
        // rather than something to drop silently.
        let mut errors = Vec::new();
        let mut instances = Vec::with_capacity(self.instances.len());
        for doc in self.instances {
            let mut instance = Instance::new(doc.id, doc.class);
            for (name, value) in doc.attrs {
                let value = match value {
                    ValueDoc::Scalar(s) => AttributeValue::Single(scalar_from_doc(s)),
                    ValueDoc::List(vs) => {
                        AttributeValue::Set(vs.into_iter().map(scalar_from_doc).collect())
                    }
                };
                instance.attribute_values.insert(name, value);
            }
            for (name, ids) in doc.rels {
                let len = ids.len();
                let set: std::collections::BTreeSet<String> = ids.into_iter().collect();
                if set.len() != len {
                    errors.push(OntologyError::DuplicateValue {
                        instance: instance.id.clone(),
                        slot: name.clone(),
                    });
                }
                instance.relation_values.insert(name, set);
            }
            instances.push(instance);
        }

        match Ontology::new(classes, instances) {
            Ok(o) if errors.is_empty() => Ok(o),
            Ok(_) => Err(LoadError::Ontology(errors)),
            Err(mut more) => {
                errors.append(&mut more);
                Err(LoadError::Ontology(errors))
            }
        }
    }
}

/// Parses and validates an ontology document.
pub fn load_ontology(source: &str) -> Result<Ontology, LoadError> {
    parse_toml::<OntologyDoc>(source)?.into_ontology()
}

pub fn ontology_to_string(ontology: &Ontology) -> String {
    toml::to_string(&OntologyDoc::from_ontology(ontology))
        .expect("ontology documents always serialize")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OpDoc {
    Count,
    Inter,
    Simil,
}

impl From<OpDoc> for Operation {
    fn from(op: OpDoc) -> Self {
        match op {
            OpDoc::Count => Operation::Count,
            OpDoc::Inter => Operation::Inter,
            OpDoc::Simil => Operation::Simil,
        }
    }
}

impl From<Operation> for OpDoc {
    fn from(op: Operation) -> Self {
        match op {
            Operation::Count => OpDoc::Count,
            Operation::Inter => OpDoc::Inter,
            Operation::Simil => OpDoc::Simil,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PathDoc {
    pub start: String,
    #[serde(default)]
    pub relations: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TermDoc {
    pub name: String,
    pub op: OpDoc,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EntryDoc {
    pub path: PathDoc,
    #[serde(default)]
    pub attrs: Vec<TermDoc>,
    #[serde(default)]
    pub rels: Vec<TermDoc>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ContextDoc {
    pub name: String,
    #[serde(default)]
    pub entries: Vec<EntryDoc>,
}

fn terms_from_doc(terms: Vec<TermDoc>) -> Vec<SlotOp> {
    terms
        .into_iter()
        .map(|t| SlotOp::new(t.name, t.op.into()))
        .collect()
}

fn terms_to_doc(terms: &[SlotOp]) -> Vec<TermDoc> {
    terms
        .iter()
        .map(|t| TermDoc {
            name: t.name.clone(),
            op: t.op.into(),
        })
        .collect()
}

impl ContextDoc {
    pub fn from_context(context: &ApplicationContext) -> Self {
        ContextDoc {
            name: context.name().to_string(),
            entries: context
                .entries()
                .map(|(path, entry)| EntryDoc {
                    path: PathDoc {
                        start: path.start_class.clone(),
                        relations: path.relations.clone(),
                    },
                    attrs: terms_to_doc(&entry.attribute_ops),
                    rels: terms_to_doc(&entry.relation_ops),
                })
                .collect(),
        }
    }

    pub fn into_context(self, ontology: &Ontology) -> Result<ApplicationContext, LoadError> {
        let entries = self.entries.into_iter().map(|e| {
            (
                RecursionPath {
                    start_class: e.path.start,
                    relations: e.path.relations,
                },
                ContextEntry {
                    attribute_ops: terms_from_doc(e.attrs),
                    relation_ops: terms_from_doc(e.rels),
                },
            )
        });
        ApplicationContext::new(self.name, entries, ontology).map_err(LoadError::Context)
    }
}

/// Parses a context document and validates it against `ontology`.
pub fn parse_context(source: &str, ontology: &Ontology) -> Result<ApplicationContext, LoadError> {
    parse_toml::<ContextDoc>(source)?.into_context(ontology)
}

pub fn context_to_string(context: &ApplicationContext) -> String {
    toml::to_string(&ContextDoc::from_context(context)).expect("context documents always serialize")
}

#[cfg(test)]
mod tests {
    use super::*;

    const MINIMAL: &str = r#"
[[classes]]
name = "Object"
attributes = [{ name = "weightInKilos", kind = "number", card = "one" }]
"#;

    #[test]
    fn minimal_document() {
        let o = load_ontology(MINIMAL).unwrap();
        assert_eq!(o.classes().count(), 1);
        assert_eq!(o.instances().count(), 0);
    }

    #[test]
    fn parse_error_has_position() {
        let src = "[[classes]]\nname = \"A\"\nattributes = [{ name = \"x\", kind = \"colour\", card = \"one\" }]\n";
        match load_ontology(src).unwrap_err() {
            LoadError::Parse { line, column, .. } => {
                assert_eq!(line, 3);
                assert!(column > 1);
            }
            other => panic!("unexpected {other:?}"),
        }
        match load_ontology("classes = [").unwrap_err() {
            LoadError::Parse { line, .. } => assert_eq!(line, 1),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn cycle_reported_as_validation_error() {
        let src = r#"
[[classes]]
name = "A"
parent = "B"

[[classes]]
name = "B"
parent = "A"
"#;
        let err = load_ontology(src).unwrap_err();
        assert!(matches!(err, LoadError::Ontology(_)));
        assert!(err.diagnostics().iter().all(|d| d.contains("cycle")));
    }

    #[test]
    fn integers_load_as_numbers() {
        let src = format!(
            "{MINIMAL}\n[[instances]]\nid = \"o\"\nclass = \"Object\"\nattrs = {{ weightInKilos = 2 }}\n"
        );
        let o = load_ontology(&src).unwrap();
        let v = &o.instance("o").unwrap().attribute_values["weightInKilos"];
        assert_eq!(v, &AttributeValue::Single(Value::Number(2.0)));
    }

    #[test]
    fn repeated_relation_target() {
        let src = r#"
[[classes]]
name = "A"
relations = [{ name = "r", target = "A", card = "many" }]

[[instances]]
id = "a"
class = "A"
rels = { r = ["a", "a"] }
"#;
        let err = load_ontology(src).unwrap_err();
        assert_eq!(err.diagnostics().len(), 1);
        assert!(err.diagnostics()[0].contains("repeats"));
    }

    #[test]
    fn dangling_target_diagnostic() {
        let src = r#"
[[classes]]
name = "A"
relations = [{ name = "r", target = "A", card = "many" }]

[[instances]]
id = "a"
class = "A"
rels = { r = ["ghost"] }
"#;
        let diags = load_ontology(src).unwrap_err().diagnostics();
        assert!(diags[0].contains("`a`") && diags[0].contains("`r`") && diags[0].contains("ghost"));
    }

    #[test]
    fn unknown_field_rejected() {
        let src = "[[classes]]\nname = \"A\"\ncolour = \"red\"\n";
        assert!(matches!(
            load_ontology(src).unwrap_err(),
            LoadError::Parse { line: 3, .. }
        ));
    }

    #[test]
    fn line_column_counts_chars() {
        assert_eq!(line_column("ab\ncé", 6), (2, 3));
        assert_eq!(line_column("", 0), (1, 1));
    }
}
