//! The `segal-lab-category v1` file format.
//!
//! Text form:
//!
//! ```text
//! segal-lab-category v1
//! OBJECTS
//! 0 rank 0
//! 1 rank 1
//! MORPHISMS
//! id0 : 0 -> 0 identity
//! id1 : 1 -> 1 identity
//! i : 0 -> 1
//! p : 1 -> 0
//! COMPOSE
//! p . i = id0
//! ZERO 0
//! COFIBRATIONS
//! id0 id1 i
//! MODE bounded 1
//! ```
//!
//! `#` starts a comment. Composites with an identity may be left out.
//! `WEQ` lists weak equivalences (default: the isomorphisms). A
//! `FIBRATIONS` section in place of `COFIBRATIONS` declares a category
//! with fibrations, which is read through its opposite. The JSON form
//! mirrors [`CategoryFile`] field by field.

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use segal_lab::cofcat::{CofStructure, FibStructure, ValidationMode, WaldStructure};
use segal_lab::fincat::{FinCategory, FinCategoryBuilder, Limits, MorId, ObjId};

pub const HEADER: &str = "segal-lab-category v1";

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    pub location: String,
    pub message: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.location, self.message)
    }
}

impl std::error::Error for ParseError {}

fn err(location: impl Into<String>, message: impl Into<String>) -> ParseError {
    ParseError {
        location: location.into(),
        message: message.into(),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ObjectDecl {
    pub name: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rank: Option<i64>,
    #[serde(skip)]
    pub line: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MorphismDecl {
    pub name: String,
    pub source: String,
    pub target: String,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub identity: bool,
    #[serde(skip)]
    pub line: usize,
}

/// `g . f = h`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComposeDecl {
    pub g: String,
    pub f: String,
    pub h: String,
    #[serde(skip)]
    pub line: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ModeDecl {
    #[default]
    Strict,
    Bounded(i64),
}

impl From<ModeDecl> for ValidationMode {
    fn from(m: ModeDecl) -> Self {
        match m {
            ModeDecl::Strict => ValidationMode::Strict,
            ModeDecl::Bounded(k) => ValidationMode::Bounded { max_rank: k },
        }
    }
}

impl From<ValidationMode> for ModeDecl {
    fn from(m: ValidationMode) -> Self {
        match m {
            ValidationMode::Strict => ModeDecl::Strict,
            ValidationMode::Bounded { max_rank } => ModeDecl::Bounded(max_rank),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CategoryFile {
    pub format: String,
    pub objects: Vec<ObjectDecl>,
    pub morphisms: Vec<MorphismDecl>,
    #[serde(default)]
    pub compose: Vec<ComposeDecl>,
    pub zero: String,
    /// The distinguished class: cofibrations, or fibrations when
    /// `fibrations` is set.
    #[serde(default)]
    pub cofibrations: Vec<String>,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub fibrations: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub weq: Option<Vec<String>>,
    #[serde(default)]
    pub mode: ModeDecl,
    #[serde(skip)]
    lines: Lines,
}

// line numbers of the single-valued and list sections, for diagnostics
#[derive(Debug, Clone, Default, PartialEq, Eq)]
struct Lines {
    zero: usize,
    cofibrations: Vec<usize>,
    weq: Vec<usize>,
}

fn locate(line: usize, fallback: impl FnOnce() -> String) -> String {
    if line > 0 {
        format!("line {line}")
    } else {
        fallback()
    }
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Section {
    None,
    Objects,
    Morphisms,
    Compose,
    Cofibrations,
    Weq,
}

/// Parses either form; JSON is recognized by a leading `{`.
pub fn parse(text: &str) -> Result<CategoryFile, ParseError> {
    if text.trim_start().starts_with('{') {
        parse_json(text)
    } else {
        parse_text(text)
    }
}

pub fn parse_json(text: &str) -> Result<CategoryFile, ParseError> {
    let file: CategoryFile = serde_json::from_str(text).map_err(|e| {
        err(
            format!("line {} column {}", e.line(), e.column()),
            e.to_string(),
        )
    })?;
    if file.format != HEADER {
        return Err(err(
            "format",
            format!("expected \"{HEADER}\", found \"{}\"", file.format),
        ));
    }
    Ok(file)
}

pub fn parse_text(text: &str) -> Result<CategoryFile, ParseError> {
    let mut file = CategoryFile {
        format: HEADER.to_string(),
        objects: Vec::new(),
        morphisms: Vec::new(),
        compose: Vec::new(),
        zero: String::new(),
        cofibrations: Vec::new(),
        fibrations: false,
        weq: None,
        mode: ModeDecl::Strict,
        lines: Lines::default(),
    };
    let mut header_seen = false;
    let mut class_seen = false;
    let mut section = Section::None;
    for (k, raw) in text.lines().enumerate() {
        let no = k + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        if !header_seen {
            if line != HEADER {
                return Err(err(
                    format!("line {no}"),
                    format!("expected header \"{HEADER}\""),
                ));
            }
            header_seen = true;
            continue;
        }
        let toks: Vec<&str> = line.split_whitespace().collect();
        let here = format!("line {no}");
        match toks[0] {
            "OBJECTS" | "MORPHISMS" | "COMPOSE" | "COFIBRATIONS" | "FIBRATIONS" | "WEQ" => {
                if toks.len() > 1 {
                    return Err(err(here, format!("{} takes no arguments", toks[0])));
                }
                section = match toks[0] {
                    "OBJECTS" => Section::Objects,
                    "MORPHISMS" => Section::Morphisms,
                    "COMPOSE" => Section::Compose,
                    "WEQ" => {
                        file.weq.get_or_insert_with(Vec::new);
                        Section::Weq
                    }
                    kw => {
                        if class_seen {
                            return Err(err(here, "a second COFIBRATIONS/FIBRATIONS section"));
                        }
                        class_seen = true;
                        file.fibrations = kw == "FIBRATIONS";
                        Section::Cofibrations
                    }
                };
                continue;
            }
            "ZERO" => {
                if toks.len() != 2 {
                    return Err(err(here, "expected `ZERO <object>`"));
                }
                if !file.zero.is_empty() {
                    return Err(err(here, "zero object declared twice"));
                }
                file.zero = toks[1].to_string();
                file.lines.zero = no;
                section = Section::None;
                continue;
            }
            "MODE" => {
                file.mode = match toks[1..] {
                    ["strict"] => ModeDecl::Strict,
                    ["bounded", k] => ModeDecl::Bounded(
                        k.parse()
                            .map_err(|_| err(here.clone(), format!("bad rank bound `{k}`")))?,
                    ),
                    _ => return Err(err(here, "expected `MODE strict` or `MODE bounded <k>`")),
                };
                section = Section::None;
                continue;
            }
            _ => {}
        }
        match section {
            Section::None => {
                return Err(err(here, format!("`{}` outside of any section", toks[0])));
            }
            Section::Objects => {
                let rank = match toks[1..] {
                    [] => None,
                    ["rank", r] => Some(
                        r.parse()
                            .map_err(|_| err(here.clone(), format!("bad rank `{r}`")))?,
                    ),
                    _ => return Err(err(here, "expected `<name>` or `<name> rank <int>`")),
                };
                file.objects.push(ObjectDecl {
                    name: toks[0].to_string(),
                    rank,
                    line: no,
                });
            }
            Section::Morphisms => {
                let identity = match toks.as_slice() {
                    [_, ":", _, "->", _] => false,
                    [_, ":", _, "->", _, "identity"] => true,
                    _ => {
                        return Err(err(
                            here,
                            "expected `<name> : <source> -> <target> [identity]`",
                        ))
                    }
                };
                file.morphisms.push(MorphismDecl {
                    name: toks[0].to_string(),
                    source: toks[2].to_string(),
                    target: toks[4].to_string(),
                    identity,
                    line: no,
                });
            }
            Section::Compose => match toks.as_slice() {
                [g, ".", f, "=", h] => file.compose.push(ComposeDecl {
                    g: g.to_string(),
                    f: f.to_string(),
                    h: h.to_string(),
                    line: no,
                }),
                _ => return Err(err(here, "expected `<g> . <f> = <h>`")),
            },
            Section::Cofibrations => {
                for t in toks {
                    file.cofibrations.push(t.to_string());
                    file.lines.cofibrations.push(no);
                }
            }
            Section::Weq => {
                let w = file.weq.get_or_insert_with(Vec::new);
                for t in toks {
                    w.push(t.to_string());
                    file.lines.weq.push(no);
                }
            }
        }
    }
    if !header_seen {
        return Err(err("line 1", format!("expected header \"{HEADER}\"")));
    }
    if file.zero.is_empty() {
        return Err(err("end of file", "missing ZERO"));
    }
    Ok(file)
}

fn token_ok(s: &str) -> bool {
    !s.is_empty() && !s.contains(char::is_whitespace) && !s.contains('#')
}

impl CategoryFile {
    /// Name of the distinguished class for messages.
    pub fn class_name(&self) -> &'static str {
        if self.fibrations {
            "fibrations"
        } else {
            "cofibrations"
        }
    }

    pub fn to_text(&self) -> Result<String, ParseError> {
        let mut names: Vec<&str> = self.objects.iter().map(|o| o.name.as_str()).collect();
        names.extend(self.morphisms.iter().map(|m| m.name.as_str()));
        if let Some(bad) = names.iter().find(|s| !token_ok(s)) {
            return Err(err(
                "text form",
                format!("name `{bad}` cannot be written as a token; use the JSON form"),
            ));
        }
        let mut out = String::new();
        out.push_str(HEADER);
        out.push_str("\nOBJECTS\n");
        for o in &self.objects {
            match o.rank {
                Some(r) => out.push_str(&format!("{} rank {r}\n", o.name)),
                None => out.push_str(&format!("{}\n", o.name)),
            }
        }
        out.push_str("MORPHISMS\n");
        for m in &self.morphisms {
            out.push_str(&format!("{} : {} -> {}", m.name, m.source, m.target));
            out.push_str(if m.identity { " identity\n" } else { "\n" });
        }
        out.push_str("COMPOSE\n");
        for c in &self.compose {
            out.push_str(&format!("{} . {} = {}\n", c.g, c.f, c.h));
        }
        out.push_str(&format!("ZERO {}\n", self.zero));
        out.push_str(if self.fibrations {
            "FIBRATIONS\n"
        } else {
            "COFIBRATIONS\n"
        });
        for chunk in self.cofibrations.chunks(8) {
            out.push_str(&chunk.join(" "));
            out.push('\n');
        }
        if let Some(w) = &self.weq {
            out.push_str("WEQ\n");
            for chunk in w.chunks(8) {
                out.push_str(&chunk.join(" "));
                out.push('\n');
            }
        }
        match self.mode {
            ModeDecl::Strict => out.push_str("MODE strict\n"),
            ModeDecl::Bounded(k) => out.push_str(&format!("MODE bounded {k}\n")),
        }
        Ok(out)
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("plain data");
        s.push('\n');
        s
    }

    /// Describes a structure. Composites involving an identity are left to
    /// the identity laws.
    pub fn from_structure(
        c: &FinCategory,
        zero: ObjId,
        class: impl Fn(MorId) -> bool,
        fibrations: bool,
        weq: Option<Vec<MorId>>,
        mode: ValidationMode,
    ) -> CategoryFile {
        let oname = |o: ObjId| c.object_name(o).to_string();
        let mname = |m: MorId| c.morphism(m).name.clone();
        let objects = c
            .objects()
            .map(|o| ObjectDecl {
                name: oname(o),
                rank: c.rank(o),
                line: 0,
            })
            .collect();
        let morphisms = c
            .morphism_ids()
            .map(|m| MorphismDecl {
                name: mname(m),
                source: oname(c.source(m)),
                target: oname(c.target(m)),
                identity: c.is_identity(m),
                line: 0,
            })
            .collect();
        let compose = c
            .composition_entries()
            .into_iter()
            .filter(|&(g, f, _)| !c.is_identity(g) && !c.is_identity(f))
            .map(|(g, f, h)| ComposeDecl {
                g: mname(g),
                f: mname(f),
                h: mname(h),
                line: 0,
            })
            .collect();
        CategoryFile {
            format: HEADER.to_string(),
            objects,
            morphisms,
            compose,
            zero: oname(zero),
            cofibrations: c.morphism_ids().filter(|&m| class(m)).map(mname).collect(),
            fibrations,
            weq: weq.map(|w| w.into_iter().map(mname).collect()),
            mode: mode.into(),
            lines: Lines::default(),
        }
    }

    pub fn from_cof(s: &CofStructure, mode: ValidationMode) -> CategoryFile {
        Self::from_structure(
            s.base(),
            s.zero(),
            |m| s.is_cofibration(m),
            false,
            None,
            mode,
        )
    }
}

/// The distinguished class as declared.
#[derive(Debug, Clone)]
pub enum Structure {
    Cof(CofStructure),
    Fib(FibStructure),
}

/// A resolved category file.
#[derive(Debug, Clone)]
pub struct Loaded {
    pub file: CategoryFile,
    pub category: Arc<FinCategory>,
    pub structure: Structure,
    pub weq: Option<Vec<MorId>>,
    pub mode: ValidationMode,
}

impl Loaded {
    /// The category with cofibrations the checks run on: the input itself,
    /// or the opposite of a category with fibrations.
    pub fn cof(&self) -> Result<CofStructure, segal_lab::Error> {
        match &self.structure {
            Structure::Cof(s) => Ok(s.clone()),
            Structure::Fib(f) => f.dual(),
        }
    }

    /// Weak equivalences as declared, else the isomorphisms. In fibration
    /// mode the same morphism ids are used on the opposite category.
    pub fn wald(&self) -> Result<WaldStructure, segal_lab::Error> {
        let cof = self.cof()?;
        match &self.weq {
            Some(w) => WaldStructure::new(cof, w.iter().copied()),
            None => Ok(WaldStructure::with_isomorphisms(cof)),
        }
    }
}

/// Checks that every name is declared and builds the category.
pub fn resolve(file: CategoryFile) -> Result<Loaded, ParseError> {
    let at_obj = |k: usize| locate(file.objects[k].line, || format!("objects[{k}]"));
    let at_mor = |k: usize| locate(file.morphisms[k].line, || format!("morphisms[{k}]"));
    let mut b = FinCategoryBuilder::new().fill_identity_laws(true);
    let mut objs: HashMap<&str, ObjId> = HashMap::new();
    for (k, o) in file.objects.iter().enumerate() {
        if !token_ok(&o.name) {
            return Err(err(at_obj(k), "object names must be non-empty tokens"));
        }
        if objs
            .insert(&o.name, b.add_object(o.name.clone(), o.rank))
            .is_some()
        {
            return Err(err(
                at_obj(k),
                format!("object `{}` declared twice", o.name),
            ));
        }
    }
    let mut mors: HashMap<&str, MorId> = HashMap::new();
    let mut has_identity = vec![false; file.objects.len()];
    for (k, m) in file.morphisms.iter().enumerate() {
        let end = |name: &str| {
            objs.get(name)
                .copied()
                .ok_or_else(|| err(at_mor(k), format!("unknown object `{name}`")))
        };
        let (s, t) = (end(&m.source)?, end(&m.target)?);
        if !token_ok(&m.name) {
            return Err(err(at_mor(k), "morphism names must be non-empty tokens"));
        }
        let id = b.add_morphism(m.name.clone(), s, t);
        if mors.insert(&m.name, id).is_some() {
            return Err(err(
                at_mor(k),
                format!("morphism `{}` declared twice", m.name),
            ));
        }
        if m.identity {
            if s != t {
                return Err(err(at_mor(k), "an identity must be an endomorphism"));
            }
            if std::mem::replace(&mut has_identity[s.index()], true) {
                return Err(err(
                    at_mor(k),
                    format!("second identity for `{}`", m.source),
                ));
            }
            b.set_identity(s, id);
        }
    }
    if let Some(k) = has_identity.iter().position(|h| !h) {
        return Err(err(
            at_obj(k),
            format!("object `{}` has no identity", file.objects[k].name),
        ));
    }
    for (k, c) in file.compose.iter().enumerate() {
        let here = || locate(c.line, || format!("compose[{k}]"));
        let get = |name: &str| {
            mors.get(name)
                .copied()
                .ok_or_else(|| err(here(), format!("unknown morphism `{name}`")))
        };
        b.set_compose(get(&c.g)?, get(&c.f)?, get(&c.h)?);
    }
    let zero = *objs.get(file.zero.as_str()).ok_or_else(|| {
        err(
            locate(file.lines.zero, || "zero".into()),
            format!("unknown object `{}`", file.zero),
        )
    })?;
    let list = |names: &[String], lines: &[usize], field: &str| -> Result<Vec<MorId>, ParseError> {
        names
            .iter()
            .enumerate()
            .map(|(k, n)| {
                mors.get(n.as_str()).copied().ok_or_else(|| {
                    err(
                        locate(lines.get(k).copied().unwrap_or(0), || {
                            format!("{field}[{k}]")
                        }),
                        format!("unknown morphism `{n}`"),
                    )
                })
            })
            .collect()
    };
    let class = list(&file.cofibrations, &file.lines.cofibrations, "cofibrations")?;
    let weq = match &file.weq {
        Some(w) => Some(list(w, &file.lines.weq, "weq")?),
        None => None,
    };
    let category = Arc::new(
        b.build(Limits::default())
            .map_err(|e| err("category", e.to_string()))?,
    );
    let structure = if file.fibrations {
        Structure::Fib(
            FibStructure::new(category.clone(), zero, class)
                .map_err(|e| err("fibrations", e.to_string()))?,
        )
    } else {
        Structure::Cof(
            CofStructure::new(category.clone(), zero, class)
                .map_err(|e| err("cofibrations", e.to_string()))?,
        )
    };
    let mode = file.mode.into();
    Ok(Loaded {
        file,
        category,
        structure,
        weq,
        mode,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    const SMALL: &str = "segal-lab-category v1
# a retract
OBJECTS
0 rank 0
1 rank 1
MORPHISMS
id0 : 0 -> 0 identity
id1 : 1 -> 1 identity
i : 0 -> 1
p : 1 -> 0
e : 1 -> 1
COMPOSE
p . i = id0
i . p = e
e . e = e
e . i = i
p . e = p
ZERO 0
COFIBRATIONS
id0 id1 i
MODE bounded 1
";

    #[test]
    fn text_round_trip() {
        let f = parse(SMALL).unwrap();
        assert_eq!(f.objects.len(), 2);
        assert_eq!(f.mode, ModeDecl::Bounded(1));
        let again = parse(&f.to_text().unwrap()).unwrap();
        assert_eq!(again.to_json(), f.to_json());
        let json = parse(&f.to_json()).unwrap();
        assert_eq!(json.to_text().unwrap(), f.to_text().unwrap());
        let l = resolve(f).unwrap();
        assert_eq!(l.category.morphism_count(), 5);
    }

    #[test]
    fn errors_carry_locations() {
        let bad = SMALL.replace("i : 0 -> 1", "i : 0 -> 2");
        let e = resolve(parse(&bad).unwrap()).unwrap_err();
        assert_eq!(e.location, "line 9");
        assert!(e.message.contains("unknown object `2`"));
        let e = parse(&SMALL.replace("p . i = id0", "p i = id0")).unwrap_err();
        assert_eq!(e.location, "line 13");
        let e = parse("nonsense\n").unwrap_err();
        assert_eq!(e.location, "line 1");
        let e = parse("{\"format\": 3}").unwrap_err();
        assert!(e.location.starts_with("line 1"));
        let e = resolve(parse(&SMALL.replace("id0 id1 i", "id0 j")).unwrap()).unwrap_err();
        assert_eq!(
            (e.location.as_str(), e.message.as_str()),
            ("line 20", "unknown morphism `j`")
        );
    }

    #[test]
    fn ill_typed_composite_is_an_input_error() {
        let bad = SMALL.replace("e . e = e", "e . e = p");
        let e = resolve(parse(&bad).unwrap()).unwrap_err();
        assert_eq!(e.location, "category");
    }
}
