//! Ontology schema and instance store.
//!
//! An [`Ontology`] is built once from class declarations and instances and is
//! immutable afterwards. Construction validates the whole store: the IS-A
//! graph must be a forest, slot names must not collide along an inheritance
//! chain, and every populated slot and relation target must agree with the
//! declarations.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use unicode_normalization::UnicodeNormalization;

use crate::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ValueKind {
    Boolean,
    Number,
    Text,
}

impl fmt::Display for ValueKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ValueKind::Boolean => "bool",
            ValueKind::Number => "number",
            ValueKind::Text => "text",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Cardinality {
    Single,
    Set,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AttributeDef {
    pub name: String,
    pub kind: ValueKind,
    pub cardinality: Cardinality,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RelationDef {
    pub name: String,
    pub target_class: String,
    pub cardinality: Cardinality,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassDef {
    pub name: String,
    /// IS-A superclass.
    pub parent: Option<String>,
    pub attributes: Vec<AttributeDef>,
    pub relations: Vec<RelationDef>,
}

impl ClassDef {
    pub fn new(name: impl Into<String>) -> Self {
        ClassDef {
            name: name.into(),
            parent: None,
            attributes: Vec::new(),
            relations: Vec::new(),
        }
    }

    pub fn with_parent(mut self, parent: impl Into<String>) -> Self {
        self.parent = Some(parent.into());
        self
    }

    pub fn with_attribute(
        mut self,
        name: impl Into<String>,
        kind: ValueKind,
        cardinality: Cardinality,
    ) -> Self {
        self.attributes.push(AttributeDef {
            name: name.into(),
            kind,
            cardinality,
        });
        self
    }

    pub fn with_relation(
        mut self,
        name: impl Into<String>,
        target_class: impl Into<String>,
        cardinality: Cardinality,
    ) -> Self {
        self.relations.push(RelationDef {
            name: name.into(),
            target_class: target_class.into(),
            cardinality,
        });
        self
    }
}

/// A primitive attribute value.
///
/// `PartialEq` is structural (raw text, bitwise-ish float equality); use
/// [`Value::matches`] for the comparison semantics of the data layer.
#[derive(Debug, Clone, PartialEq)]
pub enum Value {
    Bool(bool),
    Number(f64),
    Text(String),
}

impl Value {
    pub fn kind(&self) -> ValueKind {
        match self {
            Value::Bool(_) => ValueKind::Boolean,
            Value::Number(_) => ValueKind::Number,
            Value::Text(_) => ValueKind::Text,
        }
    }

    /// Identity used by `Count` and `Inter`: numbers compare numerically, text
    /// compares after NFC normalization, mismatched kinds never match.
    pub fn matches(&self, other: &Value) -> bool {
        match (self, other) {
            (Value::Bool(a), Value::Bool(b)) => a == b,
            (Value::Number(a), Value::Number(b)) => a == b,
            (Value::Text(a), Value::Text(b)) => a.nfc().eq(b.nfc()),
            _ => false,
        }
    }
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Bool(b) => write!(f, "{b}"),
            Value::Number(n) => write!(f, "{n}"),
            Value::Text(s) => write!(f, "{s:?}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum AttributeValue {
    Single(Value),
    Set(Vec<Value>),
}

impl AttributeValue {
    pub fn values(&self) -> &[Value] {
        match self {
            AttributeValue::Single(v) => core::slice::from_ref(v),
            AttributeValue::Set(vs) => vs,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Instance {
    pub id: String,
    pub class_name: String,
    pub attribute_values: BTreeMap<String, AttributeValue>,
    pub relation_values: BTreeMap<String, BTreeSet<String>>,
}

impl Instance {
    pub fn new(id: impl Into<String>, class_name: impl Into<String>) -> Self {
        Instance {
            id: id.into(),
            class_name: class_name.into(),
            attribute_values: BTreeMap::new(),
            relation_values: BTreeMap::new(),
        }
    }

    pub fn with_attribute(mut self, name: impl Into<String>, value: AttributeValue) -> Self {
        self.attribute_values.insert(name.into(), value);
        self
    }

    pub fn with_relation<I, S>(mut self, name: impl Into<String>, targets: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        self.relation_values
            .insert(name.into(), targets.into_iter().map(Into::into).collect());
        self
    }
}

/// A validation failure found while building an [`Ontology`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum OntologyError {
    DuplicateClass(String),
    UnknownParent {
        class: String,
        parent: String,
    },
    InheritanceCycle {
        class: String,
    },
    SlotCollision {
        class: String,
        slot: String,
    },
    UnknownRelationTarget {
        class: String,
        relation: String,
        target: String,
    },
    DuplicateInstance(String),
    UnknownInstanceClass {
        instance: String,
        class: String,
    },
    UndeclaredSlot {
        instance: String,
        slot: String,
    },
    KindMismatch {
        instance: String,
        slot: String,
        expected: ValueKind,
    },
    CardinalityMismatch {
        instance: String,
        slot: String,
    },
    DuplicateValue {
        instance: String,
        slot: String,
    },
    NonFiniteNumber {
        instance: String,
        slot: String,
    },
    DanglingTarget {
        instance: String,
        relation: String,
        target: String,
    },
    TargetClassMismatch {
        instance: String,
        relation: String,
        target: String,
        expected: String,
        found: String,
    },
}

impl fmt::Display for OntologyError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use OntologyError::*;
        match self {
            DuplicateClass(c) => write!(f, "class `{c}` is declared more than once"),
            UnknownParent { class, parent } => {
                write!(f, "class `{class}` has unknown parent `{parent}`")
            }
            InheritanceCycle { class } => {
                write!(f, "class `{class}` is part of an IS-A cycle")
            }
            SlotCollision { class, slot } => write!(
                f,
                "class `{class}`: slot `{slot}` collides with another slot of the class or its ancestors"
            ),
            UnknownRelationTarget {
                class,
                relation,
                target,
            } => write!(
                f,
                "class `{class}`: relation `{relation}` targets unknown class `{target}`"
            ),
            DuplicateInstance(id) => write!(f, "instance `{id}` is declared more than once"),
            UnknownInstanceClass { instance, class } => {
                write!(f, "instance `{instance}` has unknown class `{class}`")
            }
            UndeclaredSlot { instance, slot } => write!(
                f,
                "instance `{instance}`: slot `{slot}` is not declared by its class"
            ),
            KindMismatch {
                instance,
                slot,
                expected,
            } => write!(
                f,
                "instance `{instance}`: slot `{slot}` expects {expected} values"
            ),
            CardinalityMismatch { instance, slot } => write!(
                f,
                "instance `{instance}`: slot `{slot}` has the wrong cardinality"
            ),
            DuplicateValue { instance, slot } => write!(
                f,
                "instance `{instance}`: slot `{slot}` repeats a value"
            ),
            NonFiniteNumber { instance, slot } => write!(
                f,
                "instance `{instance}`: slot `{slot}` holds a non-finite number"
            ),
            DanglingTarget {
                instance,
                relation,
                target,
            } => write!(
                f,
                "instance `{instance}`: relation `{relation}` points to unknown instance `{target}`"
            ),
            TargetClassMismatch {
                instance,
                relation,
                target,
                expected,
                found,
            } => write!(
                f,
                "instance `{instance}`: relation `{relation}` target `{target}` has class `{found}`, expected `{expected}` or a subclass"
            ),
        }
    }
}

impl core::error::Error for OntologyError {}

/// Own and inherited slot declarations of a class, root-most class first.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EffectiveSlots<'a> {
    pub attributes: Vec<&'a AttributeDef>,
    pub relations: Vec<&'a RelationDef>,
}

impl<'a> EffectiveSlots<'a> {
    pub fn attribute(&self, name: &str) -> Option<&'a AttributeDef> {
        self.attributes.iter().copied().find(|a| a.name == name)
    }

    pub fn relation(&self, name: &str) -> Option<&'a RelationDef> {
        self.relations.iter().copied().find(|r| r.name == name)
    }

    pub fn len(&self) -> usize {
        self.attributes.len() + self.relations.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Names of all slots, attributes first.
    pub fn names(&self) -> impl Iterator<Item = &'a str> + '_ {
        self.attributes
            .iter()
            .map(|a| a.name.as_str())
            .chain(self.relations.iter().map(|r| r.name.as_str()))
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct Ontology {
    classes: BTreeMap<String, ClassDef>,
    instances: BTreeMap<String, Instance>,
}

impl Ontology {
    /// Validates and assembles an ontology.
    ///
    /// Schema errors are collected first; instance checks only run on a sound
    /// schema, so the returned list is either all schema errors or all
    /// instance errors.
    pub fn new(
        classes: impl IntoIterator<Item = ClassDef>,
        instances: impl IntoIterator<Item = Instance>,
    ) -> Result<Self, Vec<OntologyError>> {
        let mut errors = Vec::new();
        let mut class_map = BTreeMap::new();
        for class in classes {
            if class_map.contains_key(&class.name) {
                errors.push(OntologyError::DuplicateClass(class.name.clone()));
                continue;
            }
            class_map.insert(class.name.clone(), class);
        }
        let mut ontology = Ontology {
            classes: class_map,
            instances: BTreeMap::new(),
        };
        ontology.check_schema(&mut errors);
        if !errors.is_empty() {
            return Err(errors);
        }

        for instance in instances {
            if ontology.instances.contains_key(&instance.id) {
                errors.push(OntologyError::DuplicateInstance(instance.id.clone()));
                continue;
            }
            ontology.instances.insert(instance.id.clone(), instance);
        }
        for instance in ontology.instances.values() {
            ontology.check_instance(instance, &mut errors);
        }
        if errors.is_empty() {
            Ok(ontology)
        } else {
            Err(errors)
        }
    }

    fn check_schema(&self, errors: &mut Vec<OntologyError>) {
        for class in self.classes.values() {
            if let Some(parent) = &class.parent {
                if !self.classes.contains_key(parent) {
                    errors.push(OntologyError::UnknownParent {
                        class: class.name.clone(),
                        parent: parent.clone(),
                    });
                }
            }
        }
        if !errors.is_empty() {
            return;
        }
        // A parent walk longer than the number of classes must revisit a class.
        let limit = self.classes.len();
        for class in self.classes.values() {
            let mut current = class.parent.as_deref();
            let mut steps = 0;
            while let Some(name) = current {
                steps += 1;
                if name == class.name || steps > limit {
                    errors.push(OntologyError::InheritanceCycle {
                        class: class.name.clone(),
                    });
                    break;
                }
                current = self.classes[name].parent.as_deref();
            }
        }
        if !errors.is_empty() {
            return;
        }

        for class in self.classes.values() {
            let inherited: BTreeSet<&str> = match &class.parent {
                Some(p) => self.slot_names_unchecked(p),
                None => BTreeSet::new(),
            };
            let mut own = BTreeSet::new();
            let names = class
                .attributes
                .iter()
                .map(|a| &a.name)
                .chain(class.relations.iter().map(|r| &r.name));
            for name in names {
                if inherited.contains(name.as_str()) || !own.insert(name.as_str()) {
                    errors.push(OntologyError::SlotCollision {
                        class: class.name.clone(),
                        slot: name.clone(),
                    });
                }
            }
            for relation in &class.relations {
                if !self.classes.contains_key(&relation.target_class) {
                    errors.push(OntologyError::UnknownRelationTarget {
                        class: class.name.clone(),
                        relation: relation.name.clone(),
                        target: relation.target_class.clone(),
                    });
                }
            }
        }
    }

    fn slot_names_unchecked(&self, class: &str) -> BTreeSet<&str> {
        self.ancestors(class)
            .flat_map(|c| {
                c.attributes
                    .iter()
                    .map(|a| a.name.as_str())
                    .chain(c.relations.iter().map(|r| r.name.as_str()))
            })
            .collect()
    }

    fn check_instance(&self, instance: &Instance, errors: &mut Vec<OntologyError>) {
        let Ok(slots) = self.effective_slots(&instance.class_name) else {
            errors.push(OntologyError::UnknownInstanceClass {
                instance: instance.id.clone(),
                class: instance.class_name.clone(),
            });
            return;
        };
        let err_slot = |slot: &String| (instance.id.clone(), slot.clone());

        for (name, value) in &instance.attribute_values {
            let Some(def) = slots.attribute(name) else {
                let (instance, slot) = err_slot(name);
                errors.push(OntologyError::UndeclaredSlot { instance, slot });
                continue;
            };
            let shape_ok = matches!(
                (def.cardinality, value),
                (Cardinality::Single, AttributeValue::Single(_))
                    | (Cardinality::Set, AttributeValue::Set(_))
            );
            if !shape_ok {
                let (instance, slot) = err_slot(name);
                errors.push(OntologyError::CardinalityMismatch { instance, slot });
            }
            let values = value.values();
            if values.iter().any(|v| v.kind() != def.kind) {
                let (instance, slot) = err_slot(name);
                errors.push(OntologyError::KindMismatch {
                    instance,
                    slot,
                    expected: def.kind,
                });
                continue;
            }
            if values
                .iter()
                .any(|v| matches!(v, Value::Number(n) if !n.is_finite()))
            {
                let (instance, slot) = err_slot(name);
                errors.push(OntologyError::NonFiniteNumber { instance, slot });
            }
            let repeated = values
                .iter()
                .enumerate()
                .any(|(i, v)| values[..i].iter().any(|w| w.matches(v)));
            if repeated {
                let (instance, slot) = err_slot(name);
                errors.push(OntologyError::DuplicateValue { instance, slot });
            }
        }

        for (name, targets) in &instance.relation_values {
            let Some(def) = slots.relation(name) else {
                let (instance, slot) = err_slot(name);
                errors.push(OntologyError::UndeclaredSlot { instance, slot });
                continue;
            };
            if def.cardinality == Cardinality::Single && targets.len() > 1 {
                let (instance, slot) = err_slot(name);
                errors.push(OntologyError::CardinalityMismatch { instance, slot });
            }
            for target in targets {
                match self.instances.get(target) {
                    None => errors.push(OntologyError::DanglingTarget {
                        instance: instance.id.clone(),
                        relation: name.clone(),
                        target: target.clone(),
                    }),
                    Some(t) if !self.is_a(&t.class_name, &def.target_class) => {
                        errors.push(OntologyError::TargetClassMismatch {
                            instance: instance.id.clone(),
                            relation: name.clone(),
                            target: target.clone(),
                            expected: def.target_class.clone(),
                            found: t.class_name.clone(),
                        })
                    }
                    Some(_) => {}
                }
            }
        }
    }

    pub fn class(&self, name: &str) -> Option<&ClassDef> {
        self.classes.get(name)
    }

    pub fn instance(&self, id: &str) -> Option<&Instance> {
        self.instances.get(id)
    }

    pub fn classes(&self) -> impl Iterator<Item = &ClassDef> {
        self.classes.values()
    }

    /// Instances in id order.
    pub fn instances(&self) -> impl Iterator<Item = &Instance> {
        self.instances.values()
    }

    /// Instances whose class is exactly `class_name`, in id order.
    pub fn instances_of<'a>(&'a self, class_name: &'a str) -> impl Iterator<Item = &'a Instance> {
        self.instances
            .values()
            .filter(move |i| i.class_name == class_name)
    }

    /// The class followed by its ancestors up to the root. Empty for an
    /// unknown class.
    pub fn ancestors<'a>(&'a self, class_name: &str) -> impl Iterator<Item = &'a ClassDef> {
        let mut next = self.classes.get(class_name);
        core::iter::from_fn(move || {
            let current = next?;
            next = current.parent.as_deref().and_then(|p| self.classes.get(p));
            Some(current)
        })
    }

    /// Whether `class_name` is `ancestor` or one of its descendants.
    pub fn is_a(&self, class_name: &str, ancestor: &str) -> bool {
        self.ancestors(class_name).any(|c| c.name == ancestor)
    }

    pub fn effective_slots(&self, class_name: &str) -> Result<EffectiveSlots<'_>, Error> {
        if !self.classes.contains_key(class_name) {
            return Err(Error::UnknownClass(class_name.into()));
        }
        let mut chain: Vec<&ClassDef> = self.ancestors(class_name).collect();
        chain.reverse();
        Ok(EffectiveSlots {
            attributes: chain.iter().flat_map(|c| c.attributes.iter()).collect(),
            relations: chain.iter().flat_map(|c| c.relations.iter()).collect(),
        })
    }

    /// Number of IS-A edges between the class and its root.
    pub fn class_depth(&self, class_name: &str) -> Result<usize, Error> {
        match self.ancestors(class_name).count() {
            0 => Err(Error::UnknownClass(class_name.into())),
            n => Ok(n - 1),
        }
    }

    /// Deepest class that is an ancestor-or-self of both classes, or `None`
    /// when they sit in different trees of the forest.
    pub fn lowest_common_ancestor(&self, c1: &str, c2: &str) -> Result<Option<&str>, Error> {
        for name in [c1, c2] {
            if !self.classes.contains_key(name) {
                return Err(Error::UnknownClass(name.into()));
            }
        }
        let upper: BTreeSet<&str> = self.ancestors(c2).map(|c| c.name.as_str()).collect();
        Ok(self
            .ancestors(c1)
            .map(|c| c.name.as_str())
            .find(|name| upper.contains(name)))
    }
}
