use std::collections::{BTreeMap, HashSet};

use super::lexer::{tokenize, Cursor, Pos, TokenKind};
use super::ParseError;
use crate::model::{
    AttributeDecl, ClassDecl, ClassKind, ClauseForm, ClauseScope, ElementKind, Event, InstanceInfo,
    MethodDecl, MethodRef, Model, MopConfig, Param, RelKind, Relationship, RestrictionClause,
    SequencePattern, Tag, TagSet, Timing, Visibility,
};

const ELEMENT_KEYWORDS: &[&str] = &[
    "abstract",
    "class",
    "interface",
    "generalization",
    "realization",
    "aggregation",
    "association",
    "sequence",
    "instance",
    "configure",
];

/// Tags that no validator rule covers when misplaced; they are checked here.
fn checked_at_parse(tag: Tag) -> bool {
    matches!(
        tag,
        Tag::ApplClass
            | Tag::ForAllNewMethods
            | Tag::SeparationTemplate
            | Tag::SeparationHook
            | Tag::CHook
    )
}

enum Reference {
    Class(String),
    Method(String, String),
}

struct Parser {
    cur: Cursor,
    errors: Vec<ParseError>,
    syntax_failed: bool,
    refs: Vec<(Pos, Reference)>,
    class_positions: Vec<(String, Pos)>,
}

type PResult<T> = Result<T, ParseError>;

/// Parses model source text. On failure every error found is returned and no
/// model is produced.
pub fn parse(src: &str) -> Result<Model, Vec<ParseError>> {
    let tokens = tokenize(src).map_err(|e| vec![e])?;
    let mut p = Parser {
        cur: Cursor::new(tokens),
        errors: Vec::new(),
        syntax_failed: false,
        refs: Vec::new(),
        class_positions: Vec::new(),
    };
    let model = p.model();
    if let Some(model) = model {
        if !p.syntax_failed {
            p.resolve(&model);
        }
        if p.errors.is_empty() {
            return Ok(model);
        }
    }
    p.errors.sort_by_key(|e| (e.line, e.column));
    Err(p.errors)
}

impl Parser {
    fn fail(&mut self, e: ParseError) {
        self.syntax_failed = true;
        self.errors.push(e);
    }

    fn semantic(&mut self, pos: Pos, expected: impl Into<String>, found: impl Into<String>) {
        self.errors.push(ParseError::new(pos, expected, found));
    }

    /// Skips to the next token that can begin a model element.
    fn recover(&mut self) {
        while !self.cur.at_eof() {
            if let TokenKind::Ident(w) = self.cur.peek_kind() {
                if ELEMENT_KEYWORDS.contains(&w.as_str()) && self.cur.starts_line() {
                    return;
                }
            }
            self.cur.advance();
        }
    }

    fn model(&mut self) -> Option<Model> {
        let header = (|| -> PResult<String> {
            self.cur.expect_word("model")?;
            let (name, _) = self.cur.ident("model name")?;
            self.cur.expect(&TokenKind::LBrace)?;
            Ok(name)
        })();
        let name = match header {
            Ok(n) => n,
            Err(e) => {
                self.fail(e);
                return None;
            }
        };
        let mut model = Model::new(name);
        let mut recovering = false;
        loop {
            if self.cur.is(&TokenKind::RBrace) {
                self.cur.advance();
                break;
            }
            if self.cur.at_eof() {
                if !recovering {
                    let e = self.cur.error("`}`");
                    self.fail(e);
                }
                return Some(model);
            }
            match self.element(&mut model) {
                Ok(()) => recovering = false,
                Err(e) => {
                    self.fail(e);
                    // skip the offending token so recovery always makes progress
                    self.cur.advance();
                    self.recover();
                    recovering = true;
                }
            }
        }
        if !self.cur.at_eof() {
            let e = self.cur.error("end of input");
            self.fail(e);
        }
        Some(model)
    }

    fn element(&mut self, model: &mut Model) -> PResult<()> {
        let word = match self.cur.peek_kind() {
            TokenKind::Ident(w) => w.clone(),
            _ => return Err(self.cur.error("model element")),
        };
        match word.as_str() {
            "abstract" | "class" | "interface" => {
                let c = self.class_decl()?;
                model.classes.push(c);
            }
            "generalization" | "realization" | "aggregation" | "association" => {
                let r = self.rel_decl()?;
                model.relationships.push(r);
            }
            "sequence" => {
                let pos = self.cur.pos();
                let s = self.seq_decl()?;
                if model.sequences.iter().any(|x| x.name == s.name) {
                    self.semantic(
                        pos,
                        "unique sequence name",
                        format!("duplicate sequence `{}`", s.name),
                    );
                }
                model.sequences.push(s);
            }
            "instance" => {
                let pos = self.cur.advance().pos;
                let (name, _) = self.cur.ident("instance name")?;
                if model.instance.is_some() {
                    self.semantic(pos, "at most one instance declaration", "second `instance`");
                }
                model.instance = Some(InstanceInfo {
                    name,
                    configs: Vec::new(),
                });
            }
            "configure" => {
                let pos = self.cur.pos();
                let cfg = self.configure()?;
                match model.instance.as_mut() {
                    None => self.semantic(
                        pos,
                        "`instance` declaration before `configure`",
                        "`configure`",
                    ),
                    Some(inst) => {
                        if inst.configs.iter().any(|c| c.class == cfg.class) {
                            self.semantic(
                                pos,
                                "one `configure` per class",
                                format!("duplicate `{}`", cfg.class),
                            );
                        }
                        inst.configs.push(cfg);
                    }
                }
            }
            _ => return Err(self.cur.error("model element")),
        }
        Ok(())
    }

    fn tag_list(&mut self, kind: ElementKind, into: &mut TagSet) -> PResult<()> {
        self.cur.expect_word("tags")?;
        self.cur.expect(&TokenKind::LBrace)?;
        if self.cur.eat(&TokenKind::RBrace) {
            return Ok(());
        }
        loop {
            let (name, pos) = self.cur.ident("tag name")?;
            match name.parse::<Tag>() {
                Ok(tag) => {
                    if checked_at_parse(tag) && !tag.applies_to(kind) {
                        self.semantic(
                            pos,
                            format!("tag applicable to a {kind}"),
                            format!("`{name}`"),
                        );
                    }
                    into.insert(tag);
                }
                Err(_) => self.semantic(pos, "registered tag", format!("unknown tag `{name}`")),
            }
            if self.cur.eat(&TokenKind::Comma) {
                continue;
            }
            self.cur.expect(&TokenKind::RBrace)?;
            return Ok(());
        }
    }

    fn visibility(&mut self) -> Option<Visibility> {
        let v = match self.cur.peek_kind() {
            TokenKind::Ident(w) if w == "public" => Visibility::Public,
            TokenKind::Ident(w) if w == "protected" => Visibility::Protected,
            TokenKind::Ident(w) if w == "private" => Visibility::Private,
            _ => return None,
        };
        self.cur.advance();
        Some(v)
    }

    fn class_decl(&mut self) -> PResult<ClassDecl> {
        let is_abstract = self.cur.eat_word("abstract");
        let kind = if self.cur.eat_word("class") {
            ClassKind::Class
        } else if self.cur.eat_word("interface") {
            ClassKind::Interface
        } else {
            return Err(self.cur.error("`class` or `interface`"));
        };
        let (name, name_pos) = self.cur.ident("class name")?;
        self.class_positions.push((name.clone(), name_pos));
        let mut class = ClassDecl::new(name);
        class.kind = kind;
        class.is_abstract = is_abstract;
        if self.cur.eat(&TokenKind::Colon) {
            loop {
                let (sup, pos) = self.cur.ident("supertype name")?;
                self.refs.push((pos, Reference::Class(sup.clone())));
                class.supertypes.push(sup);
                if !self.cur.eat(&TokenKind::Comma) {
                    break;
                }
            }
        }
        self.cur.expect(&TokenKind::LBrace)?;
        let mut seen: HashSet<String> = HashSet::new();
        while !self.cur.eat(&TokenKind::RBrace) {
            self.member(&mut class, &mut seen)?;
        }
        Ok(class)
    }

    fn member(&mut self, class: &mut ClassDecl, seen: &mut HashSet<String>) -> PResult<()> {
        let word = match self.cur.peek_kind() {
            TokenKind::Ident(w) => w.clone(),
            _ => return Err(self.cur.error("class member or `}`")),
        };
        match word.as_str() {
            "tags" => {
                let mut tags = std::mem::take(&mut class.tags);
                self.tag_list(ElementKind::Class, &mut tags)?;
                class.tags = tags;
            }
            "extension-point" => {
                let pos = self.cur.advance().pos;
                let timing = if self.cur.eat_word("static") {
                    Timing::Static
                } else if self.cur.eat_word("dynamic") {
                    Timing::Dynamic
                } else {
                    return Err(self.cur.error("`static` or `dynamic`"));
                };
                if class.extension_point.replace(timing).is_some() {
                    self.semantic(
                        pos,
                        "one extension-point per class",
                        "second `extension-point`",
                    );
                }
            }
            "attr" => {
                self.cur.advance();
                let (name, pos) = self.cur.ident("attribute name")?;
                self.cur.expect(&TokenKind::Colon)?;
                let (type_name, _) = self.cur.ident("type name")?;
                let mut attr = AttributeDecl::new(name.clone(), type_name, Visibility::Private);
                if self.cur.eat(&TokenKind::LBrace) {
                    loop {
                        if self.cur.eat(&TokenKind::RBrace) {
                            break;
                        }
                        if self.cur.eat(&TokenKind::Comma) {
                            continue;
                        }
                        if let Some(v) = self.visibility() {
                            attr.visibility = v;
                        } else if self.cur.eat_word("note") {
                            attr.note = Some(self.cur.string("note text")?);
                        } else {
                            return Err(self.cur.error("attribute property"));
                        }
                    }
                }
                if class.kind == ClassKind::Interface {
                    self.semantic(
                        pos,
                        "no attributes on an interface",
                        format!("attribute `{name}`"),
                    );
                }
                if !seen.insert(name.clone()) {
                    self.semantic(
                        pos,
                        "unique member name",
                        format!("duplicate member `{name}`"),
                    );
                }
                class.attributes.push(attr);
            }
            "method" => {
                self.cur.advance();
                let (name, pos) = self.cur.ident("method name")?;
                let method = self.method_rest(name.clone())?;
                if class.kind == ClassKind::Interface && !method.is_abstract {
                    self.semantic(
                        pos,
                        "abstract method on an interface",
                        format!("concrete method `{name}`"),
                    );
                }
                if !seen.insert(name.clone()) {
                    self.semantic(
                        pos,
                        "unique member name",
                        format!("duplicate member `{name}`"),
                    );
                }
                class.methods.push(method);
            }
            "constraint" => {
                self.cur.advance();
                let scope = if self.cur.eat_word("forAllNewMethods") {
                    ClauseScope::ForAllNewMethods
                } else if self.cur.eat_word("on") {
                    let (m, pos) = self.cur.ident("method name")?;
                    self.refs
                        .push((pos, Reference::Method(class.name.clone(), m.clone())));
                    ClauseScope::Method(m)
                } else {
                    return Err(self.cur.error("`forAllNewMethods` or `on`"));
                };
                let mut origin = None;
                let form = if self.cur.eat_word("preserves") {
                    let (attr, _) = self.cur.ident("attribute name")?;
                    if self.cur.eat_word("from") {
                        let (o, pos) = self.cur.ident("class name")?;
                        self.refs.push((pos, Reference::Class(o.clone())));
                        origin = Some(o);
                    }
                    ClauseForm::Preserves(attr)
                } else if self.cur.eat_word("pure") {
                    ClauseForm::Pure
                } else if self.cur.eat_word("text") {
                    ClauseForm::Opaque(self.cur.string("constraint text")?)
                } else {
                    return Err(self.cur.error("`preserves`, `pure` or `text`"));
                };
                let satisfied = self.cur.eat_word("by-construction");
                class.constraints.push(RestrictionClause {
                    scope,
                    form,
                    origin,
                    satisfied_by_construction: satisfied,
                });
            }
            _ => return Err(self.cur.error("class member or `}`")),
        }
        Ok(())
    }

    fn method_rest(&mut self, name: String) -> PResult<MethodDecl> {
        let mut method = MethodDecl::new(name);
        self.cur.expect(&TokenKind::LParen)?;
        if !self.cur.eat(&TokenKind::RParen) {
            loop {
                let (pname, pos) = self.cur.ident("parameter name")?;
                self.cur.expect(&TokenKind::Colon)?;
                let (ptype, _) = self.cur.ident("parameter type")?;
                if method.params.iter().any(|p| p.name == pname) {
                    self.semantic(
                        pos,
                        "unique parameter name",
                        format!("duplicate parameter `{pname}`"),
                    );
                }
                method.params.push(Param::new(pname, ptype));
                if self.cur.eat(&TokenKind::Comma) {
                    continue;
                }
                self.cur.expect(&TokenKind::RParen)?;
                break;
            }
        }
        if self.cur.eat(&TokenKind::Colon) {
            method.return_type = Some(self.cur.ident("return type")?.0);
        }
        if self.cur.eat(&TokenKind::LBrace) {
            loop {
                if self.cur.eat(&TokenKind::RBrace) {
                    break;
                }
                if self.cur.eat(&TokenKind::Comma) {
                    continue;
                }
                if let Some(v) = self.visibility() {
                    method.visibility = v;
                } else if self.cur.eat_word("abstract") {
                    method.is_abstract = true;
                } else if self.cur.eat_word("invokes-hooks") {
                    method.invokes_hooks = true;
                } else if self.cur.is_word("tags") {
                    let mut tags = std::mem::take(&mut method.tags);
                    self.tag_list(ElementKind::Method, &mut tags)?;
                    method.tags = tags;
                } else {
                    return Err(self.cur.error("method property"));
                }
            }
        }
        Ok(method)
    }

    fn rel_decl(&mut self) -> PResult<Relationship> {
        let (word, _) = self.cur.ident("relationship kind")?;
        let kind = match word.as_str() {
            "generalization" => RelKind::Generalization,
            "realization" => RelKind::Realization,
            "aggregation" => RelKind::Aggregation,
            _ => RelKind::Association,
        };
        let (source, spos) = self.cur.ident("source class")?;
        self.cur.expect(&TokenKind::Arrow)?;
        let (target, tpos) = self.cur.ident("target class")?;
        self.refs.push((spos, Reference::Class(source.clone())));
        self.refs.push((tpos, Reference::Class(target.clone())));
        let mut rel = Relationship::new(kind, source, target);
        if !kind.is_inheritance() {
            if self.cur.eat_word("role") {
                rel.role = Some(self.cur.ident("role name")?.0);
            }
            if self.cur.eat_word("mult") {
                rel.multiplicity = Some(self.cur.string("multiplicity string")?);
            }
        }
        if self.cur.eat(&TokenKind::LBrace) {
            if self.cur.is_word("tags") {
                let mut tags = TagSet::new();
                self.tag_list(kind.element_kind(), &mut tags)?;
                rel.tags = tags;
            }
            self.cur.expect(&TokenKind::RBrace)?;
        }
        Ok(rel)
    }

    fn seq_decl(&mut self) -> PResult<SequencePattern> {
        self.cur.expect_word("sequence")?;
        let (name, name_pos) = self.cur.ident("sequence name")?;
        self.cur.expect_word("for")?;
        let (class, _) = self.cur.ident("owner class")?;
        self.cur.expect(&TokenKind::Dot)?;
        let (method, mpos) = self.cur.ident("owner method")?;
        self.refs
            .push((mpos, Reference::Method(class.clone(), method.clone())));
        self.cur.expect(&TokenKind::LBrace)?;
        let mut events: Vec<Event> = Vec::new();
        while !self.cur.eat(&TokenKind::RBrace) {
            self.cur.expect_word("event")?;
            let (ev, pos) = self.cur.ident("event name")?;
            let mut optional = false;
            if self.cur.eat(&TokenKind::LBrace) {
                self.cur.expect_word("optional")?;
                self.cur.expect(&TokenKind::RBrace)?;
                optional = true;
            }
            if events.iter().any(|e| e.name == ev) {
                self.semantic(pos, "unique event name", format!("duplicate event `{ev}`"));
            }
            events.push(Event { name: ev, optional });
        }
        if !events.iter().any(|e| !e.optional) {
            self.semantic(
                name_pos,
                "at least one mandatory event",
                format!("sequence `{name}`"),
            );
        }
        Ok(SequencePattern {
            name,
            owner: MethodRef::new(class, method),
            events,
        })
    }

    fn configure(&mut self) -> PResult<MopConfig> {
        self.cur.expect_word("configure")?;
        let (class, pos) = self.cur.ident("class name")?;
        self.refs.push((pos, Reference::Class(class.clone())));
        self.cur.expect(&TokenKind::LBrace)?;
        let mut values: Vec<(String, bool)> = Vec::new();
        while !self.cur.eat(&TokenKind::RBrace) {
            let (key, kpos) = self.cur.ident("parameter name")?;
            self.cur.expect(&TokenKind::Eq)?;
            let value = if self.cur.eat_word("true") {
                true
            } else if self.cur.eat_word("false") {
                false
            } else {
                return Err(self.cur.error("`true` or `false`"));
            };
            if values.iter().any(|(k, _)| *k == key) {
                self.semantic(
                    kpos,
                    "unique parameter",
                    format!("duplicate parameter `{key}`"),
                );
            }
            values.push((key, value));
        }
        Ok(MopConfig { class, values })
    }

    fn resolve(&mut self, model: &Model) {
        let mut first: BTreeMap<&str, Pos> = BTreeMap::new();
        let positions = std::mem::take(&mut self.class_positions);
        for (name, pos) in &positions {
            if first.insert(name, *pos).is_some() {
                self.semantic(
                    *pos,
                    "unique class name",
                    format!("duplicate class `{name}`"),
                );
            }
        }
        let refs = std::mem::take(&mut self.refs);
        for (pos, r) in refs {
            match r {
                Reference::Class(c) => {
                    if model.class(&c).is_none() {
                        self.semantic(pos, "declared class", format!("unresolved class `{c}`"));
                    }
                }
                Reference::Method(c, m) => match model.class(&c) {
                    None => self.semantic(pos, "declared class", format!("unresolved class `{c}`")),
                    Some(cls) if cls.method(&m).is_none() => self.semantic(
                        pos,
                        "declared method",
                        format!("unresolved method `{c}.{m}`"),
                    ),
                    Some(_) => {}
                },
            }
        }
    }
}
