//! Seeded generators for random ontologies and contexts.

use ctxsim_core::{
    ApplicationContext, AttributeValue, Cardinality, ClassDef, ContextEntry, Instance, Ontology,
    Operation, RecursionPath, Value, ValueKind,
};
use rand::seq::IndexedRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

const OPS: [Operation; 3] = [Operation::Count, Operation::Inter, Operation::Simil];
const WORDS: [&str; 5] = ["a", "b", "c", "d", "e"];
const NUMBERS: [f64; 7] = [-2.0, -0.5, 0.0, 0.5, 1.0, 3.0, 7.25];

fn number(rng: &mut ChaCha8Rng) -> f64 {
    if rng.random_bool(0.5) {
        *NUMBERS.choose(rng).unwrap()
    } else {
        rng.random_range(-10.0..10.0)
    }
}

fn words(rng: &mut ChaCha8Rng, max: usize) -> Vec<Value> {
    let n = rng.random_range(0..=max);
    let mut pool = WORDS.to_vec();
    rand::seq::SliceRandom::shuffle(&mut pool[..], rng);
    pool[..n]
        .iter()
        .map(|w| Value::Text(w.to_string()))
        .collect()
}

fn op(rng: &mut ChaCha8Rng, choices: &[Operation]) -> Operation {
    *choices.choose(rng).unwrap()
}

/// Schema used by [`random_case`]:
///
/// ```text
/// A  { n: number, b: bool, t: text*, r -> A*, s -> L }
/// A1 : A  { x: number }
/// A2 : A1 { u -> L* }
/// L  { v: number }
/// ```
fn random_schema() -> Vec<ClassDef> {
    vec![
        ClassDef::new("A")
            .with_attribute("n", ValueKind::Number, Cardinality::Single)
            .with_attribute("b", ValueKind::Boolean, Cardinality::Single)
            .with_attribute("t", ValueKind::Text, Cardinality::Set)
            .with_relation("r", "A", Cardinality::Set)
            .with_relation("s", "L", Cardinality::Single),
        ClassDef::new("A1").with_parent("A").with_attribute(
            "x",
            ValueKind::Number,
            Cardinality::Single,
        ),
        ClassDef::new("A2")
            .with_parent("A1")
            .with_relation("u", "L", Cardinality::Set),
        ClassDef::new("L").with_attribute("v", ValueKind::Number, Cardinality::Single),
    ]
}

/// Random entry over a subset of `attrs`/`rels`; each relation op is drawn
/// from its own list of allowed operations.
fn random_entry(
    rng: &mut ChaCha8Rng,
    attrs: &[&str],
    rels: &[(&str, &[Operation])],
) -> ContextEntry {
    let mut e = ContextEntry::new();
    for a in attrs {
        if rng.random_bool(0.7) {
            e = e.attr(*a, op(rng, &OPS));
        }
    }
    for (r, ops) in rels {
        if rng.random_bool(0.7) {
            e = e.rel(*r, op(rng, ops));
        }
    }
    e
}

fn has_simil(entry: &ContextEntry, rel: &str) -> bool {
    entry
        .relation_ops
        .iter()
        .any(|t| t.name == rel && t.op == Operation::Simil)
}

/// A random ontology of at most six instances and a valid context whose
/// recursion paths hold at most two relations.
pub fn random_case(rng: &mut ChaCha8Rng) -> (Ontology, ApplicationContext) {
    let n = rng.random_range(2..=6);
    let classes = ["A", "A1", "A2", "L"];
    let mut kinds: Vec<&str> = (0..n).map(|_| *classes.choose(rng).unwrap()).collect();
    if !kinds.contains(&"L") {
        kinds[0] = "L";
    }
    let ids: Vec<String> = (0..n).map(|i| format!("i{i}")).collect();
    let family: Vec<&String> = ids
        .iter()
        .zip(&kinds)
        .filter(|(_, k)| **k != "L")
        .map(|(i, _)| i)
        .collect();
    let leaves: Vec<&String> = ids
        .iter()
        .zip(&kinds)
        .filter(|(_, k)| **k == "L")
        .map(|(i, _)| i)
        .collect();

    let mut instances = Vec::new();
    for (id, kind) in ids.iter().zip(&kinds) {
        let mut inst = Instance::new(id.clone(), *kind);
        let maybe = |rng: &mut ChaCha8Rng| rng.random_bool(0.75);
        if *kind == "L" {
            if maybe(rng) {
                inst = inst.with_attribute("v", AttributeValue::Single(Value::Number(number(rng))));
            }
        } else {
            if maybe(rng) {
                inst = inst.with_attribute("n", AttributeValue::Single(Value::Number(number(rng))));
            }
            if maybe(rng) {
                inst = inst.with_attribute("b", AttributeValue::Single(Value::Bool(rng.random())));
            }
            if maybe(rng) {
                inst = inst.with_attribute("t", AttributeValue::Set(words(rng, 3)));
            }
            if maybe(rng) {
                let k = rng.random_range(0..=family.len().min(3));
                let targets: Vec<String> = family
                    .choose_multiple(rng, k)
                    .map(|s| s.to_string())
                    .collect();
                inst = inst.with_relation("r", targets);
            }
            if maybe(rng) {
                inst = inst.with_relation("s", [leaves.choose(rng).unwrap().to_string()]);
            }
            if *kind != "A" && maybe(rng) {
                inst = inst.with_attribute("x", AttributeValue::Single(Value::Number(number(rng))));
            }
            if *kind == "A2" && maybe(rng) {
                let k = rng.random_range(0..=leaves.len().min(2));
                let targets: Vec<String> = leaves
                    .choose_multiple(rng, k)
                    .map(|s| s.to_string())
                    .collect();
                inst = inst.with_relation("u", targets);
            }
        }
        instances.push(inst);
    }
    let ontology = Ontology::new(random_schema(), instances).expect("generated ontology is valid");

    let a = RecursionPath::root("A");
    let l_entry = |rng: &mut ChaCha8Rng| random_entry(rng, &["v"], &[]);
    let mut entries = Vec::new();
    let top = random_entry(rng, &["n", "b", "t"], &[("r", &OPS), ("s", &OPS)]);
    if has_simil(&top, "r") {
        let nested = random_entry(
            rng,
            &["n", "b", "t"],
            &[("r", &[Operation::Count, Operation::Inter]), ("s", &OPS)],
        );
        if has_simil(&nested, "s") {
            entries.push((a.child("r").child("s"), l_entry(rng)));
        }
        entries.push((a.child("r"), nested));
    }
    if has_simil(&top, "s") {
        entries.push((a.child("s"), l_entry(rng)));
    }
    entries.push((a, top));
    if rng.random_bool(0.5) {
        entries.push((
            RecursionPath::root("A1"),
            random_entry(
                rng,
                &["n", "x"],
                &[("s", &[Operation::Count, Operation::Inter])],
            ),
        ));
    }
    entries.push((RecursionPath::root("L"), l_entry(rng)));
    let context =
        ApplicationContext::new("random", entries, &ontology).expect("generated context is valid");
    (ontology, context)
}

/// A query/target pair of the same class where everything the query has is
/// also in the target, plus a copy of the target with one value changed so
/// that the query no longer fits.
pub struct ContainmentCase {
    pub ontology: Ontology,
    pub mutated: Ontology,
    pub context: ApplicationContext,
}

pub const QUERY: &str = "q";
pub const TARGET: &str = "t";

/// Schema: `C { num: number, flag: bool, tags: text*, parts -> P*, kinds -> K* }`,
/// `P { w: number }`, `K {}`. Part weights are distinct, so two parts only
/// match when they are the same part.
pub fn containment_case(rng: &mut ChaCha8Rng) -> ContainmentCase {
    let classes = vec![
        ClassDef::new("C")
            .with_attribute("num", ValueKind::Number, Cardinality::Single)
            .with_attribute("flag", ValueKind::Boolean, Cardinality::Single)
            .with_attribute("tags", ValueKind::Text, Cardinality::Set)
            .with_relation("parts", "P", Cardinality::Set)
            .with_relation("kinds", "K", Cardinality::Set),
        ClassDef::new("P").with_attribute("w", ValueKind::Number, Cardinality::Single),
        ClassDef::new("K"),
    ];
    let parts: Vec<String> = (0..6).map(|i| format!("p{i}")).collect();
    let kinds: Vec<String> = (0..6).map(|i| format!("k{i}")).collect();
    let mut pool: Vec<Instance> = parts
        .iter()
        .enumerate()
        .map(|(i, id)| {
            Instance::new(id.clone(), "P")
                .with_attribute("w", AttributeValue::Single(Value::Number(i as f64 + 1.0)))
        })
        .collect();
    pool.extend(kinds.iter().map(|id| Instance::new(id.clone(), "K")));

    // Query sets are non-empty and leave room for extras and a replacement.
    let pick = |rng: &mut ChaCha8Rng, from: &[String]| -> (Vec<String>, Vec<String>) {
        let mut all = from.to_vec();
        rand::seq::SliceRandom::shuffle(&mut all[..], rng);
        let q = rng.random_range(1..=3);
        let extra = rng.random_range(0..=2);
        (all[..q].to_vec(), all[q..q + extra].to_vec())
    };
    let (q_parts, x_parts) = pick(rng, &parts);
    let (q_kinds, x_kinds) = pick(rng, &kinds);
    let q_tags: Vec<String> = {
        let mut w: Vec<String> = WORDS.iter().map(|s| s.to_string()).collect();
        rand::seq::SliceRandom::shuffle(&mut w[..], rng);
        w.truncate(rng.random_range(1..=3));
        w
    };
    let x_tags: Vec<String> = (0..rng.random_range(0..=2))
        .map(|i| format!("extra{i}"))
        .collect();
    let num = number(rng);
    let flag: bool = rng.random();

    let single_ops = [Operation::Inter, Operation::Simil];
    let ops = [
        ("num", op(rng, &single_ops)),
        ("flag", op(rng, &single_ops)),
        ("tags", op(rng, &OPS)),
        ("parts", op(rng, &OPS)),
        ("kinds", op(rng, &[Operation::Count, Operation::Inter])),
    ];
    let mut top = ContextEntry::new();
    for (name, o) in &ops[..3] {
        top = top.attr(*name, *o);
    }
    for (name, o) in &ops[3..] {
        top = top.rel(*name, *o);
    }
    let root = RecursionPath::root("C");
    let mut entries = vec![(root.clone(), top)];
    if ops[3].1 == Operation::Simil {
        entries.push((
            root.child("parts"),
            ContextEntry::new().attr("w", op(rng, &single_ops)),
        ));
    }

    let texts =
        |v: &[String]| AttributeValue::Set(v.iter().map(|s| Value::Text(s.clone())).collect());
    let build = |num_t: f64,
                 flag_t: bool,
                 tags_t: Vec<String>,
                 parts_t: Vec<String>,
                 kinds_t: Vec<String>| {
        let query = Instance::new(QUERY, "C")
            .with_attribute("num", AttributeValue::Single(Value::Number(num)))
            .with_attribute("flag", AttributeValue::Single(Value::Bool(flag)))
            .with_attribute("tags", texts(&q_tags))
            .with_relation("parts", q_parts.clone())
            .with_relation("kinds", q_kinds.clone());
        let target = Instance::new(TARGET, "C")
            .with_attribute("num", AttributeValue::Single(Value::Number(num_t)))
            .with_attribute("flag", AttributeValue::Single(Value::Bool(flag_t)))
            .with_attribute("tags", texts(&tags_t))
            .with_relation("parts", parts_t)
            .with_relation("kinds", kinds_t);
        let mut all = pool.clone();
        all.push(query);
        all.push(target);
        Ontology::new(classes.clone(), all).expect("containment ontology is valid")
    };
    let cat = |a: &[String], b: &[String]| [a, b].concat();

    let ontology = build(
        num,
        flag,
        cat(&q_tags, &x_tags),
        cat(&q_parts, &x_parts),
        cat(&q_kinds, &x_kinds),
    );

    // Break containment on one slot, in a way the slot's operation notices.
    let (t_tags, t_parts, t_kinds) = (
        cat(&q_tags, &x_tags),
        cat(&q_parts, &x_parts),
        cat(&q_kinds, &x_kinds),
    );
    let replace_one =
        |rng: &mut ChaCha8Rng, q: &[String], t: &[String], universe: &[String], o: Operation| {
            if o == Operation::Count {
                // Fewer elements than the query.
                return q[..q.len() - 1].to_vec();
            }
            let gone = q.choose(rng).unwrap();
            let fresh = universe.iter().find(|u| !t.contains(u)).unwrap().clone();
            t.iter()
                .map(|x| if x == gone { fresh.clone() } else { x.clone() })
                .collect()
        };
    let tag_universe: Vec<String> = (0..10).map(|i| format!("fresh{i}")).collect();
    let slot = rng.random_range(0..5);
    let mutated = match slot {
        0 => {
            let other = if num == 0.0 {
                1.0
            } else {
                num + num.abs() * 0.5 + 1.0
            };
            build(other, flag, t_tags, t_parts, t_kinds)
        }
        1 => build(num, !flag, t_tags, t_parts, t_kinds),
        2 => {
            let tags = replace_one(rng, &q_tags, &t_tags, &tag_universe, ops[2].1);
            build(num, flag, tags, t_parts, t_kinds)
        }
        3 => {
            let p = replace_one(rng, &q_parts, &t_parts, &parts, ops[3].1);
            build(num, flag, t_tags, p, t_kinds)
        }
        _ => {
            let k = replace_one(rng, &q_kinds, &t_kinds, &kinds, ops[4].1);
            build(num, flag, t_tags, t_parts, k)
        }
    };
    let context = ApplicationContext::new("containment", entries, &ontology)
        .expect("containment context is valid");
    ContainmentCase {
        ontology,
        mutated,
        context,
    }
}

/// A random class tree with exactly four levels (depths 0 to 3).
pub fn four_level_hierarchy(rng: &mut ChaCha8Rng) -> Ontology {
    let mut classes = vec![ClassDef::new("c0")];
    let mut levels: Vec<Vec<String>> = vec![vec!["c0".into()]];
    for depth in 1..4 {
        let width = rng.random_range(1..=3);
        let mut level = Vec::new();
        for i in 0..width {
            let name = format!("c{depth}_{i}");
            let parent = levels[depth - 1].choose(rng).unwrap().clone();
            let mut class = ClassDef::new(&name).with_parent(parent);
            if rng.random_bool(0.5) {
                class = class.with_attribute(
                    format!("a_{name}"),
                    ValueKind::Number,
                    Cardinality::Single,
                );
            }
            classes.push(class);
            level.push(name);
        }
        levels.push(level);
    }
    Ontology::new(classes, Vec::new()).expect("hierarchy is valid")
}
