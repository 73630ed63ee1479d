//! Rule catalog coverage through single mutations of minimal models.

mod common;

use umlf::dsl::parse;
use umlf::model::ElementKind;
use umlf::{validate, Code, Tag};

fn codes(src: &str) -> Option<Vec<Code>> {
    let model = parse(src).ok()?;
    let mut c: Vec<Code> = validate(&model).iter().map(|d| d.code).collect();
    c.sort();
    Some(c)
}

const BASES: &[&str] = &[
    "model M { class A { } }",
    "model M { class A { method m() } }",
    "model M { class A { attr x : Int } }",
    "model M { abstract class B { method f() { abstract } } class A { } generalization A -> B }",
];

#[test]
fn bases_are_clean() {
    for src in BASES {
        assert_eq!(codes(src), Some(vec![]), "{src}");
    }
}

#[test]
fn each_rule_has_exactly_one_mutant() {
    let validator_codes = &Code::ALL[..12];
    for &code in validator_codes {
        let hits: Vec<&str> = common::RULE_MUTANTS
            .iter()
            .filter(|(_, src)| codes(src).unwrap().contains(&code))
            .map(|(_, src)| *src)
            .collect();
        assert_eq!(hits.len(), 1, "{code:?} fired in {hits:?}");
    }
    for (code, src) in common::RULE_MUTANTS {
        assert_eq!(codes(src), Some(vec![*code]), "{src}");
    }
}

/// One element of each taggable kind carrying `{T}`; the inheritance
/// targets declare an abstract method so `{incomplete}` alone is legal.
fn host(kind: ElementKind, tag: Tag) -> Option<String> {
    let t = format!("tags {{ {tag} }}");
    let parents = "abstract class B { method f() { abstract } } interface I { method f() { abstract } } class A { }";
    Some(match kind {
        ElementKind::Class => format!("model M {{ class A {{ {t} }} }}"),
        ElementKind::Method => format!("model M {{ class A {{ method m() {{ {t} }} }} }}"),
        ElementKind::Generalization => {
            format!("model M {{ {parents} generalization A -> B {{ {t} }} }}")
        }
        ElementKind::Realization => format!("model M {{ {parents} realization A -> I {{ {t} }} }}"),
        ElementKind::Aggregation => format!("model M {{ {parents} aggregation A -> B {{ {t} }} }}"),
        ElementKind::Association => format!("model M {{ {parents} association A -> B {{ {t} }} }}"),
        ElementKind::Constraint | ElementKind::Event => return None,
    })
}

/// Expected outcome of a lone tag, derived from the applicability table:
/// `None` when the parser rejects it.
fn expected(kind: ElementKind, tag: Tag) -> Option<Vec<Code>> {
    use ElementKind as K;
    let inheritance = matches!(kind, K::Generalization | K::Realization);
    Some(match tag {
        Tag::Variable if kind == K::Method => vec![Code::E004],
        Tag::Variable => vec![Code::E001],
        Tag::Extensible if kind == K::Class => vec![Code::E004],
        Tag::Extensible => vec![Code::E002],
        Tag::Incomplete if inheritance => vec![Code::E004],
        Tag::Incomplete => vec![Code::E003],
        Tag::Static | Tag::Dynamic => vec![Code::E009],
        Tag::Optional => vec![Code::E008],
        Tag::ApplClass if kind == K::Class => vec![Code::E006],
        Tag::SeparationTemplate | Tag::SeparationHook | Tag::CHook if kind == K::Class => vec![],
        _ => return None,
    })
}

#[test]
fn lone_tags_match_applicability_table() {
    let kinds = [
        ElementKind::Class,
        ElementKind::Method,
        ElementKind::Generalization,
        ElementKind::Realization,
        ElementKind::Aggregation,
        ElementKind::Association,
    ];
    let mut seen = std::collections::BTreeSet::new();
    for kind in kinds {
        for tag in Tag::all() {
            let src = host(kind, tag).unwrap();
            let got = codes(&src);
            assert_eq!(got, expected(kind, tag), "{tag} on {kind}: {src}");
            seen.extend(got.unwrap_or_default());
        }
    }
    // Lone tags reach every tag-placement rule.
    for code in [
        Code::E001,
        Code::E002,
        Code::E003,
        Code::E004,
        Code::E006,
        Code::E008,
        Code::E009,
    ] {
        assert!(seen.contains(&code), "{code:?}");
    }
}

#[test]
fn diagnostics_are_sorted_and_rendered() {
    let m = parse(
        "model M {
  class B { tags { static } method m() { tags { variable } } }
  class A { tags { optional } }
}",
    )
    .unwrap();
    let d = validate(&m);
    let rendered = umlf::diagnostic::render(&d);
    assert_eq!(
        rendered,
        "error UMLF-E008 M.A: {optional} applies only to sequence events\n\
         error UMLF-E009 M.B: timing tag on an element that is not a variation point\n\
         error UMLF-E004 M.B.m: variation point needs {static} or {dynamic}\n"
    );
}
