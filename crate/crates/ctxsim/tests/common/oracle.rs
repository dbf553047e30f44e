//! Straightforward re-derivation of the similarity measure, used to check the
//! engine. It reads the ontology and context through their public data only
//! and recomputes everything from the definitions, trying every target element
//! for each best match.

use std::collections::{BTreeMap, BTreeSet};

use ctxsim_core::{ApplicationContext, Ontology, Operation, Value};

const W_QUERY: f64 = 0.3;
const W_TARGET: f64 = 0.7;

struct Class {
    parent: Option<String>,
    slots: Vec<String>,
}

#[derive(Clone)]
enum Slot {
    Values(Vec<Value>),
    Targets(Vec<String>),
}

struct Object {
    class: String,
    slots: BTreeMap<String, Slot>,
}

type Terms = Vec<(String, bool, Operation)>; // (slot, is_relation, op)

pub struct Oracle {
    classes: BTreeMap<String, Class>,
    objects: BTreeMap<String, Object>,
    entries: BTreeMap<(String, Vec<String>), Terms>,
}

impl Oracle {
    pub fn new(ontology: &Ontology, context: &ApplicationContext) -> Self {
        let classes = ontology
            .classes()
            .map(|c| {
                let slots = c
                    .attributes
                    .iter()
                    .map(|a| a.name.clone())
                    .chain(c.relations.iter().map(|r| r.name.clone()))
                    .collect();
                (
                    c.name.clone(),
                    Class {
                        parent: c.parent.clone(),
                        slots,
                    },
                )
            })
            .collect();
        let objects = ontology
            .instances()
            .map(|i| {
                let mut slots = BTreeMap::new();
                for (k, v) in &i.attribute_values {
                    slots.insert(k.clone(), Slot::Values(v.values().to_vec()));
                }
                for (k, v) in &i.relation_values {
                    slots.insert(k.clone(), Slot::Targets(v.iter().cloned().collect()));
                }
                (
                    i.id.clone(),
                    Object {
                        class: i.class_name.clone(),
                        slots,
                    },
                )
            })
            .collect();
        let entries = context
            .entries()
            .map(|(p, e)| {
                let terms = e
                    .attribute_ops
                    .iter()
                    .map(|t| (t.name.clone(), false, t.op))
                    .chain(e.relation_ops.iter().map(|t| (t.name.clone(), true, t.op)))
                    .collect();
                ((p.start_class.clone(), p.relations.clone()), terms)
            })
            .collect();
        Oracle {
            classes,
            objects,
            entries,
        }
    }

    fn chain(&self, class: &str) -> Vec<String> {
        let mut out = vec![class.to_string()];
        while let Some(p) = &self.classes[out.last().unwrap()].parent {
            out.push(p.clone());
        }
        out
    }

    fn all_slots(&self, class: &str) -> BTreeSet<String> {
        self.chain(class)
            .iter()
            .flat_map(|c| self.classes[c].slots.iter().cloned())
            .collect()
    }

    pub fn class_matching(&self, c1: &str, c2: &str) -> f64 {
        let up1 = self.chain(c1);
        let up2 = self.chain(c2);
        let Some(d1) = up1.iter().position(|c| up2.contains(c)) else {
            return 0.0;
        };
        let lca = &up1[d1];
        let d2 = up2.iter().position(|c| c == lca).unwrap();
        let depth = (self.chain(lca).len() - 1) as f64;
        (1.0 + depth) / (1.0 + depth + W_QUERY * d1 as f64 + W_TARGET * d2 as f64)
    }

    pub fn external(&self, a: &str, b: &str) -> f64 {
        let (c1, c2) = (&self.objects[a].class, &self.objects[b].class);
        if c1 == c2 {
            return 1.0;
        }
        let s1 = self.all_slots(c1);
        let s2 = self.all_slots(c2);
        let slot = if s1.is_empty() {
            1.0
        } else {
            s1.intersection(&s2).count() as f64 / s1.len() as f64
        };
        (self.class_matching(c1, c2) + slot) / 2.0
    }

    pub fn sim(&self, a: &str, b: &str) -> f64 {
        let start = self
            .chain(&self.objects[a].class)
            .into_iter()
            .find(|c| self.entries.contains_key(&(c.clone(), Vec::new())))
            .expect("query class has no start path");
        self.external(a, b) * self.extensional(&(start, Vec::new()), a, b)
    }

    fn extensional(&self, path: &(String, Vec<String>), a: &str, b: &str) -> f64 {
        let mut scores = Vec::new();
        for (slot, is_rel, op) in &self.entries[path] {
            let Some(x) = self.objects[a].slots.get(slot) else {
                continue;
            };
            let Some(y) = self.objects[b].slots.get(slot) else {
                scores.push(0.0);
                continue;
            };
            let s = match (x, y) {
                (Slot::Values(x), Slot::Values(y)) => set_op(*op, x, y, values_equal, compare),
                (Slot::Targets(x), Slot::Targets(y)) => {
                    assert!(is_rel);
                    let mut child = path.clone();
                    child.1.push(slot.clone());
                    set_op(
                        *op,
                        x,
                        y,
                        |p, q| p == q,
                        |p, q| self.extensional(&child, p, q) * self.external(p, q),
                    )
                }
                _ => unreachable!("slot kinds differ"),
            };
            scores.push(s);
        }
        if scores.is_empty() {
            1.0
        } else {
            scores.iter().sum::<f64>() / scores.len() as f64
        }
    }
}

fn values_equal(a: &Value, b: &Value) -> bool {
    compare(a, b) == 1.0 && a.kind() == b.kind()
}

fn compare(a: &Value, b: &Value) -> f64 {
    match (a, b) {
        (Value::Bool(x), Value::Bool(y)) => f64::from(u8::from(x == y)),
        (Value::Text(x), Value::Text(y)) => f64::from(u8::from(x == y)),
        (Value::Number(x), Value::Number(y)) => {
            if x == y {
                1.0
            } else {
                1.0 - (x - y).abs() / (x.abs() + y.abs())
            }
        }
        _ => 0.0,
    }
}

fn distinct<T: Clone>(xs: &[T], eq: impl Fn(&T, &T) -> bool) -> Vec<T> {
    let mut out: Vec<T> = Vec::new();
    for x in xs {
        if !out.iter().any(|o| eq(o, x)) {
            out.push(x.clone());
        }
    }
    out
}

fn set_op<T: Clone>(
    op: Operation,
    a: &[T],
    b: &[T],
    eq: impl Fn(&T, &T) -> bool + Copy,
    score: impl Fn(&T, &T) -> f64,
) -> f64 {
    let a = distinct(a, eq);
    let b = distinct(b, eq);
    match op {
        Operation::Inter => {
            if a.is_empty() {
                return 1.0;
            }
            let shared = a.iter().filter(|x| b.iter().any(|y| eq(x, y))).count();
            shared as f64 / a.len() as f64
        }
        Operation::Count => {
            if a.len() <= b.len() {
                1.0
            } else {
                b.len() as f64 / a.len() as f64
            }
        }
        Operation::Simil => {
            if a.is_empty() {
                return 1.0;
            }
            let total: f64 = a
                .iter()
                .map(|x| b.iter().map(|y| score(x, y)).fold(0.0, f64::max))
                .sum();
            total / a.len() as f64
        }
    }
}
