//! Random model generators and brute-force oracles shared by the
//! integration tests.

#![allow(dead_code)]

use std::collections::BTreeSet;
use std::path::PathBuf;

use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};

use umlf::model::{InstanceInfo, MopConfig};
use umlf::transform::{Binding, Locus, MopParam, Rewrite};
use umlf::Code;
use umlf::{
    AttributeDecl, ClassDecl, ClassKind, ClauseForm, ClauseScope, Event, MethodDecl, MethodRef,
    Model, Param, RelKind, Relationship, RestrictionClause, SequencePattern, Tag, TagSet, Timing,
    Visibility,
};

pub fn fixture(name: &str) -> String {
    let p = PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/fixtures")
        .join(name);
    std::fs::read_to_string(&p).unwrap_or_else(|e| panic!("{}: {e}", p.display()))
}

pub fn fixture_model(name: &str) -> Model {
    umlf::dsl::parse(&fixture(name)).unwrap_or_else(|e| panic!("{name}: {e:?}"))
}

pub fn rng(seed: u64) -> StdRng {
    StdRng::seed_from_u64(seed)
}

fn timing(rng: &mut StdRng) -> Timing {
    if rng.gen_bool(0.5) {
        Timing::Static
    } else {
        Timing::Dynamic
    }
}

fn visibility(rng: &mut StdRng) -> Visibility {
    *[
        Visibility::Public,
        Visibility::Protected,
        Visibility::Private,
    ]
    .choose(rng)
    .unwrap()
}

fn subset(rng: &mut StdRng, pool: &[Tag], p: f64) -> TagSet {
    pool.iter().copied().filter(|_| rng.gen_bool(p)).collect()
}

const TEXTS: &[&str] = &[
    "x > 0",
    "say \"hi\"",
    "a\\b",
    "line\nbreak",
    "tab\there",
    "",
];

/// Tags the parser accepts on methods and relationships: everything except
/// the class-only tags it checks itself.
const LOOSE_TAGS: &[Tag] = &[
    Tag::Variable,
    Tag::Extensible,
    Tag::Incomplete,
    Tag::Static,
    Tag::Dynamic,
    Tag::Optional,
];

const CLASS_TAGS: &[Tag] = &[
    Tag::Variable,
    Tag::Extensible,
    Tag::Incomplete,
    Tag::ApplClass,
    Tag::Static,
    Tag::Dynamic,
    Tag::Optional,
    Tag::SeparationTemplate,
    Tag::SeparationHook,
    Tag::CHook,
];

/// Any model the parser accepts, exercising every syntactic feature. Not
/// necessarily free of validator diagnostics.
pub fn parseable_model(rng: &mut StdRng) -> Model {
    let mut m = Model::new(format!("M{}", rng.gen_range(0..100)));
    let n = rng.gen_range(0..7);
    let mut serial = 0;
    for i in 0..n {
        let mut c = ClassDecl::new(format!("K{i}"));
        if rng.gen_bool(0.25) {
            c.kind = ClassKind::Interface;
        }
        c.is_abstract = rng.gen_bool(0.3);
        if i > 0 && rng.gen_bool(0.3) {
            c.supertypes.push(format!("K{}", rng.gen_range(0..i)));
        }
        c.tags = subset(rng, CLASS_TAGS, 0.1);
        if rng.gen_bool(0.2) {
            c.extension_point = Some(timing(rng));
        }
        if c.kind == ClassKind::Class {
            for _ in 0..rng.gen_range(0..3) {
                serial += 1;
                let ty = if rng.gen_bool(0.5) {
                    "Int".to_string()
                } else {
                    format!("K{}", rng.gen_range(0..n))
                };
                let mut a = AttributeDecl::new(format!("a{serial}"), ty, visibility(rng));
                if rng.gen_bool(0.3) {
                    a.note = Some(TEXTS.choose(rng).unwrap().to_string());
                }
                c.attributes.push(a);
            }
        }
        for _ in 0..rng.gen_range(0..4) {
            serial += 1;
            let mut meth = MethodDecl::new(format!("m{serial}"));
            for p in 0..rng.gen_range(0..3) {
                meth.params.push(Param::new(format!("p{p}"), "Int"));
            }
            if rng.gen_bool(0.3) {
                meth.return_type = Some("Bool".into());
            }
            meth.visibility = visibility(rng);
            meth.is_abstract = c.kind == ClassKind::Interface || rng.gen_bool(0.2);
            meth.invokes_hooks = rng.gen_bool(0.1);
            meth.tags = subset(rng, LOOSE_TAGS, 0.15);
            c.methods.push(meth);
        }
        for _ in 0..rng.gen_range(0..3) {
            let scope = match c.methods.choose(rng) {
                Some(meth) if rng.gen_bool(0.5) => ClauseScope::Method(meth.name.clone()),
                _ => ClauseScope::ForAllNewMethods,
            };
            let mut origin = None;
            let form = match rng.gen_range(0..3) {
                0 => {
                    if rng.gen_bool(0.3) {
                        origin = Some(format!("K{}", rng.gen_range(0..n)));
                    }
                    ClauseForm::Preserves(format!("a{}", rng.gen_range(0..10)))
                }
                1 => ClauseForm::Pure,
                _ => ClauseForm::Opaque(TEXTS.choose(rng).unwrap().to_string()),
            };
            c.constraints.push(RestrictionClause {
                scope,
                form,
                origin,
                satisfied_by_construction: rng.gen_bool(0.2),
            });
        }
        m.classes.push(c);
    }
    if n > 0 {
        for _ in 0..rng.gen_range(0..5) {
            let kind = *[
                RelKind::Generalization,
                RelKind::Realization,
                RelKind::Aggregation,
                RelKind::Association,
            ]
            .choose(rng)
            .unwrap();
            let mut r = Relationship::new(
                kind,
                format!("K{}", rng.gen_range(0..n)),
                format!("K{}", rng.gen_range(0..n)),
            );
            if !kind.is_inheritance() {
                if rng.gen_bool(0.6) {
                    r.role = Some(format!("r{}", rng.gen_range(0..5)));
                }
                if rng.gen_bool(0.6) {
                    r.multiplicity =
                        Some(["1", "0..*", "*", "2..3"].choose(rng).unwrap().to_string());
                }
            }
            r.tags = subset(rng, LOOSE_TAGS, 0.2);
            m.relationships.push(r);
        }
    }
    let owners: Vec<MethodRef> = m
        .classes
        .iter()
        .flat_map(|c| c.methods.iter().map(|x| MethodRef::new(&c.name, &x.name)))
        .collect();
    for s in 0..rng.gen_range(0..3) {
        let Some(owner) = owners.choose(rng) else {
            break;
        };
        let k = rng.gen_range(1..5);
        let mandatory = rng.gen_range(0..k);
        let events = (0..k)
            .map(|e| Event {
                name: format!("e{e}"),
                optional: e != mandatory && rng.gen_bool(0.5),
            })
            .collect();
        m.sequences.push(SequencePattern {
            name: format!("S{s}"),
            owner: owner.clone(),
            events,
        });
    }
    if rng.gen_bool(0.2) {
        let configs = m
            .classes
            .iter()
            .filter(|_| rng.gen_bool(0.3))
            .map(|c| c.name.clone())
            .collect::<Vec<_>>()
            .into_iter()
            .map(|class| MopConfig {
                class,
                values: (0..rng.gen_range(0..3))
                    .map(|k| (format!("q{k}"), rng.gen_bool(0.5)))
                    .collect(),
            })
            .collect();
        m.instance = Some(InstanceInfo {
            name: "App".into(),
            configs,
        });
    }
    m
}

/// A model with no validator errors whose variation points can all be
/// bound; see [`random_bindings`].
pub fn valid_model(rng: &mut StdRng) -> Model {
    let mut m = Model::new("R");
    let n = rng.gen_range(1..8);
    for i in 0..n {
        let mut c = ClassDecl::new(format!("K{i}"));
        if rng.gen_bool(0.15) {
            c.kind = ClassKind::Interface;
        } else {
            c.is_abstract = rng.gen_bool(0.2);
            for j in 0..rng.gen_range(0..3) {
                c.attributes.push(AttributeDecl::new(
                    format!("a{i}_{j}"),
                    "Int",
                    visibility(rng),
                ));
            }
        }
        for j in 0..rng.gen_range(0..4) {
            let mut meth = MethodDecl::new(format!("m{i}_{j}"));
            if rng.gen_bool(0.3) {
                meth.params.push(Param::new("x", "Int"));
            }
            meth.is_abstract =
                c.kind == ClassKind::Interface || (c.is_abstract && rng.gen_bool(0.3));
            if rng.gen_bool(0.3) {
                meth.tags.insert(Tag::Variable);
                meth.tags.insert(timing(rng).tag());
            }
            c.methods.push(meth);
        }
        if rng.gen_bool(0.3) {
            c.tags.insert(Tag::Extensible);
            c.tags.insert(timing(rng).tag());
            let mut run = MethodDecl::new(format!("run{i}"));
            run.is_abstract = c.kind == ClassKind::Interface;
            c.methods.push(run);
        }
        if rng.gen_bool(0.2) {
            c.tags.insert(
                *[Tag::SeparationTemplate, Tag::SeparationHook]
                    .choose(rng)
                    .unwrap(),
            );
        }
        m.classes.push(c);
    }
    for i in 1..n {
        if !rng.gen_bool(0.5) {
            continue;
        }
        let j = rng.gen_range(0..i);
        let (ci, cj) = (m.classes[i].kind, m.classes[j].kind);
        let kind = match (ci, cj) {
            (ClassKind::Class, ClassKind::Interface) => RelKind::Realization,
            (ClassKind::Interface, ClassKind::Class) => continue,
            _ => RelKind::Generalization,
        };
        let mut r = Relationship::new(kind, format!("K{i}"), format!("K{j}"));
        if rng.gen_bool(0.4) {
            r.tags.insert(Tag::Incomplete);
            r.tags.insert(timing(rng).tag());
        }
        m.relationships.push(r);
    }
    for k in 0..rng.gen_range(0..3) {
        let kind = if rng.gen_bool(0.5) {
            RelKind::Aggregation
        } else {
            RelKind::Association
        };
        let mut r = Relationship::new(
            kind,
            format!("K{}", rng.gen_range(0..n)),
            format!("K{}", rng.gen_range(0..n)),
        );
        if rng.gen_bool(0.7) {
            r.role = Some(format!("role{k}"));
        }
        if rng.gen_bool(0.5) {
            r.multiplicity = Some("0..*".into());
        }
        m.relationships.push(r);
    }
    if rng.gen_bool(0.3) {
        let parent = rng.gen_range(0..n);
        let mut app = ClassDecl::new("App");
        app.tags.insert(Tag::ApplClass);
        let kind = match m.classes[parent].kind {
            ClassKind::Class => RelKind::Generalization,
            ClassKind::Interface => RelKind::Realization,
        };
        let mut r = Relationship::new(kind, "App", format!("K{parent}"));
        r.tags.insert(Tag::Incomplete);
        r.tags.insert(timing(rng).tag());
        m.classes.push(app);
        m.relationships.push(r);
    }

    // Clauses go in once the relationships fix which classes are open.
    for i in 0..n {
        let name = format!("K{i}");
        let open = m.classes[i].tags.contains(Tag::Extensible) || m.has_incomplete_child(&name);
        let inherited: Vec<String> = m
            .lineage(&name)
            .iter()
            .flat_map(|c| c.attributes.iter().map(|a| a.name.clone()))
            .collect();
        let methods: Vec<String> = m.classes[i]
            .methods
            .iter()
            .map(|x| x.name.clone())
            .collect();
        let mut clauses = Vec::new();
        if open && rng.gen_bool(0.6) {
            let form = match inherited.choose(rng) {
                Some(a) if rng.gen_bool(0.7) => ClauseForm::Preserves(a.clone()),
                _ if rng.gen_bool(0.5) => ClauseForm::Pure,
                _ => ClauseForm::Opaque("no side effects on display".into()),
            };
            clauses.push(RestrictionClause::new(ClauseScope::ForAllNewMethods, form));
        }
        if let Some(meth) = methods.choose(rng) {
            if rng.gen_bool(0.3) {
                let form = match inherited.choose(rng) {
                    Some(a) if rng.gen_bool(0.5) => ClauseForm::Preserves(a.clone()),
                    _ => ClauseForm::Pure,
                };
                clauses.push(RestrictionClause::new(
                    ClauseScope::Method(meth.clone()),
                    form,
                ));
            }
        }
        m.classes[i].constraints = clauses;
    }

    let variable: Vec<MethodRef> = m
        .classes
        .iter()
        .flat_map(|c| {
            c.methods
                .iter()
                .filter(|x| x.tags.contains(Tag::Variable))
                .map(|x| MethodRef::new(&c.name, &x.name))
        })
        .collect();
    for (s, owner) in variable.iter().enumerate() {
        if rng.gen_bool(0.5) {
            m.sequences
                .push(random_pattern(rng, format!("P{s}"), owner.clone(), 6));
        }
    }
    m
}

/// A pattern of up to `max` events over alphabet `e0..e5`, with at least
/// one mandatory event.
pub fn random_pattern(
    rng: &mut StdRng,
    name: String,
    owner: MethodRef,
    max: usize,
) -> SequencePattern {
    let mut alphabet: Vec<usize> = (0..6).collect();
    alphabet.shuffle(rng);
    let k = rng.gen_range(1..=max.min(6));
    let mandatory = rng.gen_range(0..k);
    SequencePattern {
        name,
        owner,
        events: alphabet[..k]
            .iter()
            .enumerate()
            .map(|(i, e)| Event {
                name: format!("e{e}"),
                optional: i != mandatory && rng.gen_bool(0.5),
            })
            .collect(),
    }
}

/// One applicable binding per variable method and extensible class.
pub fn random_bindings(rng: &mut StdRng, model: &Model) -> Vec<Binding> {
    let mut out = Vec::new();
    for c in &model.classes {
        for meth in c.methods.iter().filter(|x| x.tags.contains(Tag::Variable)) {
            let locus = Locus::method(&c.name, &meth.name);
            let rewrite = match meth.tags.timing() {
                Some(Timing::Static) => Rewrite::Unification,
                _ if rng.gen_bool(0.5) => Rewrite::Strategy,
                _ => Rewrite::Mop {
                    params: (0..rng.gen_range(1..4))
                        .map(|k| {
                            if rng.gen_bool(0.5) {
                                MopParam::described(format!("q{k}"), "flag")
                            } else {
                                MopParam::new(format!("q{k}"))
                            }
                        })
                        .collect(),
                },
            };
            out.push(Binding::new(locus, rewrite));
        }
        if c.tags.contains(Tag::Extensible) {
            let rewrite = match c.tags.timing() {
                Some(Timing::Static) => Rewrite::Unification,
                _ => {
                    let kept: Vec<&MethodDecl> = c
                        .methods
                        .iter()
                        .filter(|x| {
                            !(x.tags.contains(Tag::Variable) && x.tags.contains(Tag::Dynamic))
                        })
                        .collect();
                    Rewrite::HookList {
                        before: kept
                            .choose(rng)
                            .expect("extensible classes keep a method")
                            .name
                            .clone(),
                    }
                }
            };
            out.push(Binding::new(Locus::class(&c.name), rewrite));
        }
    }
    out.shuffle(rng);
    out
}

/// Element paths of `input` that no binding locus names: everything except
/// the bound classes' headers and clauses, bound methods, the `before`
/// methods, and patterns on moved methods.
pub fn untouched(input: &Model, bindings: &[Binding]) -> BTreeSet<String> {
    let m = input.name.as_str();
    let mut scope = umlf::element_paths(input);
    for b in bindings {
        let class = &b.locus.class;
        scope.remove(&format!("{m}.{class}"));
        if let Some(c) = input.class(class) {
            for i in 0..c.constraints.len() {
                scope.remove(&format!("{m}.{class}.constraint[{i}]"));
            }
        }
        if let Some(meth) = &b.locus.method {
            scope.remove(&format!("{m}.{class}.{meth}"));
            for p in input
                .sequences
                .iter()
                .filter(|p| p.owner == MethodRef::new(class, meth))
            {
                scope.remove(&format!("{m}.sequence[{}]", p.name));
            }
        }
        if let Rewrite::HookList { before } = &b.rewrite {
            scope.remove(&format!("{m}.{class}.{before}"));
        }
    }
    scope
}

/// Tagged model with arbitrary tag placement for the classification
/// oracle. Every locus carries exactly one timing tag.
pub fn tagged_model(rng: &mut StdRng) -> Model {
    let mut m = Model::new("T");
    let n = rng.gen_range(0..8);
    for i in 0..n {
        let mut c = ClassDecl::new(format!("K{i}"));
        if rng.gen_bool(0.3) {
            c.tags.insert(Tag::Extensible);
            c.tags.insert(timing(rng).tag());
        }
        if rng.gen_bool(0.1) {
            c.tags.insert(Tag::ApplClass);
        }
        for j in 0..rng.gen_range(0..4) {
            let mut meth = MethodDecl::new(format!("m{j}"));
            if rng.gen_bool(0.3) {
                meth.tags.insert(Tag::Variable);
                meth.tags.insert(timing(rng).tag());
            }
            c.methods.push(meth);
        }
        m.classes.push(c);
    }
    if n > 0 {
        for _ in 0..rng.gen_range(0..6) {
            let kind = *[
                RelKind::Generalization,
                RelKind::Realization,
                RelKind::Aggregation,
            ]
            .choose(rng)
            .unwrap();
            let mut r = Relationship::new(
                kind,
                format!("K{}", rng.gen_range(0..n)),
                format!("K{}", rng.gen_range(0..n)),
            );
            if kind.is_inheritance() && rng.gen_bool(0.4) {
                r.tags.insert(Tag::Incomplete);
                r.tags.insert(timing(rng).tag());
            }
            m.relationships.push(r);
        }
    }
    m
}

/// Expected classification: a scan over every element for the three
/// variation-point tags, grouped by kind.
pub fn scan_points(m: &Model) -> Vec<String> {
    let timing = |t: &TagSet| {
        if t.contains(Tag::Static) {
            "static"
        } else {
            "dynamic"
        }
    };
    let mut out = Vec::new();
    for c in &m.classes {
        for x in &c.methods {
            if x.tags.contains(Tag::Variable) {
                out.push(format!(
                    "variable-method {}.{} {}",
                    c.name,
                    x.name,
                    timing(&x.tags)
                ));
            }
        }
    }
    for c in &m.classes {
        if c.tags.contains(Tag::Extensible) {
            out.push(format!("extensible-class {} {}", c.name, timing(&c.tags)));
        }
    }
    for (i, r) in m.relationships.iter().enumerate() {
        if r.tags.contains(Tag::Incomplete) {
            out.push(format!(
                "extensible-interface {} ({} {} -> {}, rel[{i}]) {}",
                r.target,
                r.kind,
                r.source,
                r.target,
                timing(&r.tags)
            ));
        }
    }
    out
}

/// Counts elements carrying any of the three variation-point tags.
pub fn tagged_element_count(m: &Model) -> usize {
    let vp = |t: &TagSet| {
        t.contains(Tag::Variable) || t.contains(Tag::Extensible) || t.contains(Tag::Incomplete)
    };
    m.classes.iter().filter(|c| vp(&c.tags)).count()
        + m.classes
            .iter()
            .flat_map(|c| &c.methods)
            .filter(|x| vp(&x.tags))
            .count()
        + m.relationships.iter().filter(|r| vp(&r.tags)).count()
}

/// One mutant per rule. Each must trigger its own rule and nothing else.
pub const RULE_MUTANTS: &[(Code, &str)] = &[
    (Code::E001, "model M { class A { tags { variable } } }"),
    (
        Code::E002,
        "model M { class A { method m() { tags { extensible } } } }",
    ),
    (Code::E003, "model M { class A { tags { incomplete } } }"),
    (
        Code::E004,
        "model M { class A { method m() { tags { variable } } } }",
    ),
    (
        Code::E005,
        "model M { class A { method m() { tags { variable, static, dynamic } } } }",
    ),
    (Code::E006, "model M { class A { tags { appl-class } } }"),
    (
        Code::E007,
        "model M { class A { attr x : Int constraint forAllNewMethods preserves x } }",
    ),
    (Code::E008, "model M { class A { tags { optional } } }"),
    (Code::E009, "model M { class A { tags { static } } }"),
    (
        Code::E010,
        "model M { class A { method m() constraint on m preserves y } }",
    ),
    (
        Code::W001,
        "model M { class A { } class B { } generalization A -> B { tags { incomplete, static } } }",
    ),
    (
        Code::W002,
        "model M { class A { method m() } sequence S for A.m { event e } }",
    ),
];
