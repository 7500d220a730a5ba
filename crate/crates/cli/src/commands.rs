use std::collections::BTreeSet;

use serde::Serialize;

use segal_lab::cofcat::{
    check_extension_property, fixtures, generate_subcategory, validate_cof, validate_fib,
    validate_wald, Seed,
};
use segal_lab::fincat::{FinCategory, MorId, ObjId};
use segal_lab::gpd2lim::{check_categorical_2segal, Variant};
use segal_lab::polygon::{enumerate_subdivisions, enumerate_triangulations};
use segal_lab::sconstr::{iso_s_dot, EnumerationPolicy, SDot};
use segal_lab::segal::{
    check_left, check_lower, check_right, check_upper, counterexample_search,
    reduction_consistency, two_segal_map, Family, MapCheck, SearchConfig, Verdict, VerdictTable,
    DISCRETE_NOTE,
};

use crate::format::{self, CategoryFile, Loaded, Structure};
use crate::report::{Input, Report, Section, Status};
use crate::CliError;

/// A loaded input together with what the report should say about it.
pub struct Source {
    pub loaded: Loaded,
    pub input: Input,
}

/// Reads `arg`, which is a path or `fixture:<name>`.
pub fn load(arg: &str) -> Result<Source, CliError> {
    let (text, name) = match arg.strip_prefix("fixture:") {
        Some(name) => (fixture_text(name)?, arg.to_string()),
        None => (
            std::fs::read_to_string(arg).map_err(|e| CliError::Input(format!("{arg}: {e}")))?,
            arg.to_string(),
        ),
    };
    let file = format::parse(&text).map_err(|e| CliError::Input(format!("{name}: {e}")))?;
    let loaded = format::resolve(file).map_err(|e| CliError::Input(format!("{name}: {e}")))?;
    Ok(Source {
        loaded,
        input: Input::new(name, text.as_bytes()),
    })
}

fn fixture_file(name: &str) -> Result<CategoryFile, CliError> {
    let (s, mode) = fixtures::by_name(name).map_err(|e| CliError::Usage(e.to_string()))?;
    Ok(CategoryFile::from_cof(&s, mode))
}

fn fixture_text(name: &str) -> Result<String, CliError> {
    fixture_file(name)?
        .to_text()
        .map_err(|e| CliError::Input(e.to_string()))
}

fn core(e: segal_lab::Error) -> CliError {
    CliError::from(e)
}

fn names(c: &FinCategory, ms: impl IntoIterator<Item = MorId>) -> String {
    let v: Vec<&str> = ms
        .into_iter()
        .map(|m| c.morphism(m).name.as_str())
        .collect();
    v.join(", ")
}

/// Replaces `m<k>` and `o<k>` tokens in core diagnostics by the declared
/// names.
pub fn named(c: &FinCategory, text: &str) -> String {
    let b = text.as_bytes();
    let mut out = String::with_capacity(text.len());
    let mut i = 0;
    while i < b.len() {
        let boundary = i == 0 || !b[i - 1].is_ascii_alphanumeric();
        if boundary && (b[i] == b'm' || b[i] == b'o') {
            let mut j = i + 1;
            while j < b.len() && b[j].is_ascii_digit() {
                j += 1;
            }
            let end = j == b.len() || !b[j].is_ascii_alphanumeric();
            if j > i + 1 && end {
                if let Ok(k) = text[i + 1..j].parse::<u32>() {
                    let name = if b[i] == b'm' && (k as usize) < c.morphism_count() {
                        Some(c.morphism(MorId(k)).name.as_str())
                    } else if b[i] == b'o' && (k as usize) < c.object_count() {
                        Some(c.object_name(ObjId(k)))
                    } else {
                        None
                    };
                    if let Some(name) = name {
                        out.push('`');
                        out.push_str(name);
                        out.push('`');
                        i = j;
                        continue;
                    }
                }
            }
        }
        let ch = text[i..].chars().next().expect("in bounds");
        out.push(ch);
        i += ch.len_utf8();
    }
    out
}

fn begin(command: &str, seed: u64, src: &Source) -> Report {
    let mut r = Report::new(command, seed);
    r.input = Some(src.input.clone());
    r.flag("mode", src.loaded.mode);
    r.flag("class", src.loaded.file.class_name());
    r
}

pub fn validate(src: &Source, seed: u64) -> Report {
    let l = &src.loaded;
    let c = &*l.category;
    let mut r = begin("validate", seed, src);
    let mut s = Section::new("category axioms");
    let cat = c.validate();
    if cat.is_valid() {
        s.push(
            Status::Pass,
            format!(
                "{} objects, {} morphisms",
                c.object_count(),
                c.morphism_count()
            ),
        );
    }
    for v in &cat.violations {
        s.push(Status::Fail, named(c, &v.to_string()));
    }
    r.add(s.with_data(&cat));
    if !cat.is_valid() {
        r.caveats
            .push("structure checks skipped: the input is not a category".into());
        return r;
    }
    let (title, rep) = match &l.structure {
        Structure::Cof(cs) => ("cofibrations", validate_cof(cs, l.mode)),
        Structure::Fib(fs) => ("fibrations", validate_fib(fs, l.mode)),
    };
    let mut s = Section::new(title);
    s.push(Status::Info, format!("guarantee: {}", rep.guarantee));
    s.push(
        Status::of(rep.is_valid()),
        format!(
            "{} pushouts checked, {} exempt",
            rep.pushouts_checked, rep.pushouts_exempt
        ),
    );
    for v in &rep.violations {
        s.push(Status::Fail, named(c, &v.to_string()));
    }
    let valid = rep.is_valid();
    r.add(s.with_data(&rep));
    if !valid {
        return r;
    }
    match l.wald() {
        Ok(w) => {
            let rep = validate_wald(&w, l.mode);
            let mut s = Section::new("weak equivalences");
            s.push(
                Status::of(rep.violations.is_empty()),
                format!(
                    "{} ({} span maps checked)",
                    if l.weq.is_some() {
                        "declared class"
                    } else {
                        "isomorphisms"
                    },
                    rep.span_maps_checked
                ),
            );
            for v in &rep.violations {
                s.push(Status::Fail, named(c, &v.to_string()));
            }
            r.add(s.with_data(&rep.violations));
        }
        Err(e) => {
            let mut s = Section::new("weak equivalences");
            s.push(Status::Fail, e.to_string());
            r.add(s);
        }
    }
    r
}

/// Rejects inputs that fail validation, since the checks assume the axioms.
fn require_valid(src: &Source) -> Result<(), CliError> {
    let l = &src.loaded;
    if !l.category.validate().is_valid() {
        return Err(CliError::Input(format!(
            "{}: not a category (run `segal-lab validate`)",
            src.input.source
        )));
    }
    let rep = match &l.structure {
        Structure::Cof(cs) => validate_cof(cs, l.mode),
        Structure::Fib(fs) => validate_fib(fs, l.mode),
    };
    if let Some(v) = rep.violations.first() {
        return Err(CliError::Input(format!(
            "{}: invalid {}: {} (run `segal-lab validate`)",
            src.input.source,
            l.file.class_name(),
            named(&l.category, &v.to_string())
        )));
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Mode {
    Left,
    Right,
    AllSubdivisions,
    Upper,
    Lower,
    Reduced,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum CheckVariant {
    IsoSet,
    Groupoid,
    Category,
    WCategory,
}

fn value_name(v: impl clap::ValueEnum) -> String {
    v.to_possible_value()
        .map(|p| p.get_name().to_string())
        .unwrap_or_default()
}

pub struct CheckArgs {
    pub max_level: usize,
    pub mode: Mode,
    pub variant: CheckVariant,
    pub budget: usize,
}

fn witness(sd: &SDot, n: usize, c: &MapCheck) -> String {
    let mut parts = vec![format!(
        "|X_{n}| = {}, |lim| = {}",
        c.domain_size, c.limit_size
    )];
    if let Some((a, b)) = c.collision {
        let labels = sd.labels(n);
        parts.push(format!(
            "not injective: {} and {} have the same image",
            labels[a], labels[b]
        ));
    }
    if let Some(t) = &c.missing {
        let t: Vec<String> = t.iter().map(|k| k.to_string()).collect();
        parts.push(format!(
            "not surjective: tuple ({}) is missed",
            t.join(", ")
        ));
    }
    parts.join("; ")
}

fn table_section(sd: &SDot, t: &VerdictTable) -> Section {
    let idx = match t.family {
        Family::Left | Family::Right => "j",
        Family::Upper | Family::Lower => "i",
    };
    let mut s = Section::new(format!(
        "{} family, max level {}, truncation {}",
        t.family, t.max_level, t.truncation
    ));
    for e in &t.entries {
        let lead = format!("n={} {idx}={} {}", e.n, e.index, e.verdict);
        match (&e.verdict, &e.check) {
            (Verdict::Undefined, _) => s.push(Status::Undefined, lead),
            (v, Some(c)) => s.push(
                Status::of(*v == Verdict::Holds),
                format!("{lead}: {}", witness(sd, e.n, c)),
            ),
            (v, None) => s.push(Status::of(*v == Verdict::Holds), lead),
        }
    }
    s.with_data(t)
}

fn iso_set_check(src: &Source, a: &CheckArgs, r: &mut Report) -> Result<(), CliError> {
    let cof = src.loaded.cof().map_err(core)?;
    let sd = iso_s_dot(&cof, a.max_level, EnumerationPolicy::Representatives).map_err(core)?;
    let x = &sd.set;
    let mut sizes = Section::new("iso(s) level sizes");
    let list: Vec<String> = x.sizes().iter().map(|k| k.to_string()).collect();
    sizes.push(Status::Info, list.join(" "));
    r.add(sizes.with_data(x.sizes()));
    match a.mode {
        Mode::Left => r.add(table_section(
            &sd,
            &check_left(x, a.max_level).map_err(core)?,
        )),
        Mode::Right => r.add(table_section(
            &sd,
            &check_right(x, a.max_level).map_err(core)?,
        )),
        Mode::Upper => r.add(table_section(&sd, &check_upper(x, a.max_level))),
        Mode::Lower => r.add(table_section(&sd, &check_lower(x, a.max_level))),
        Mode::AllSubdivisions => {
            #[derive(Serialize)]
            struct Row {
                n: usize,
                subdivision: String,
                classification: String,
                check: MapCheck,
            }
            for n in 2..=a.max_level {
                let mut s = Section::new(format!("all subdivisions of P_{n}"));
                let mut rows = Vec::new();
                for p in enumerate_subdivisions(n).map_err(core)? {
                    let m = two_segal_map(x, &p).map_err(core)?;
                    let kind = if m.trivial {
                        "trivial".to_string()
                    } else {
                        m.classification.to_string()
                    };
                    s.push(
                        Status::of(m.bijective()),
                        format!("{} ({kind}): {}", p.label(), witness(&sd, n, &m.check)),
                    );
                    rows.push(Row {
                        n,
                        subdivision: p.label(),
                        classification: kind,
                        check: m.check,
                    });
                }
                r.add(s.with_data(rows));
            }
        }
        Mode::Reduced => {
            let rep = reduction_consistency(x, a.max_level).map_err(core)?;
            let mut s = Section::new(format!("reduced criterion up to level {}", a.max_level));
            s.push(
                Status::Info,
                format!(
                    "left and right families: {}",
                    if rep.reduced_pass { "hold" } else { "fail" }
                ),
            );
            s.push(
                Status::of(rep.exhaustive_pass),
                format!("{} subdivision maps checked", rep.subdivisions_checked),
            );
            if let Some(p) = &rep.first_failure {
                s.push(
                    Status::Fail,
                    format!("first failing subdivision {}", p.label()),
                );
            }
            s.push(
                Status::of(rep.consistent()),
                "reduced verdict implies the exhaustive one",
            );
            r.add(s.with_data(&rep));
        }
    }
    r.caveats.push(DISCRETE_NOTE.to_string());
    Ok(())
}

fn categorical_check(src: &Source, a: &CheckArgs, r: &mut Report) -> Result<(), CliError> {
    let family = match a.mode {
        Mode::Left => Family::Left,
        Mode::Right => Family::Right,
        _ => {
            return Err(CliError::Usage(
                "categorical variants support --mode left or right".into(),
            ))
        }
    };
    let variant = match a.variant {
        CheckVariant::Groupoid => Variant::IsoGroupoid,
        CheckVariant::Category => Variant::SCategory,
        _ => Variant::WsCategory,
    };
    let w = src.loaded.wald().map_err(core)?;
    let mut s = Section::new(format!("{family} family, {} variant", variant.name()));
    let mut rows = Vec::new();
    for n in 2..=a.max_level {
        for j in 1..n {
            let v = check_categorical_2segal(&w, n, j, family, variant, a.budget).map_err(core)?;
            let mut text = format!(
                "n={n} j={j}: {} source objects, {} target objects",
                v.source_objects, v.target_objects
            );
            let e = &v.equivalence;
            if let Some(o) = e.missed_object {
                text.push_str(&format!("; target object {o} is not hit"));
            }
            if let Some((x, y)) = e.not_full {
                text.push_str(&format!("; not full on ({x}, {y})"));
            }
            if let Some((f, g)) = e.not_faithful {
                text.push_str(&format!("; not faithful: {f} and {g} collide"));
            }
            if let Some((l1, l2)) = v.legs_isofibrations {
                text.push_str(&format!("; legs isofibrations: {l1}/{l2}"));
            }
            s.push(Status::of(v.is_equivalence()), text);
            rows.push(v);
        }
    }
    r.add(s.with_data(rows));
    Ok(())
}

pub fn check(src: &Source, a: &CheckArgs, seed: u64) -> Result<Report, CliError> {
    if a.max_level < 2 {
        return Err(CliError::Usage("--max-level must be at least 2".into()));
    }
    require_valid(src)?;
    let mut r = begin("check", seed, src);
    r.flag("max-level", a.max_level);
    r.flag("check-mode", value_name(a.mode));
    r.flag("variant", value_name(a.variant));
    match a.variant {
        CheckVariant::IsoSet => iso_set_check(src, a, &mut r)?,
        _ => {
            r.flag("budget", a.budget);
            categorical_check(src, a, &mut r)?
        }
    }
    Ok(r)
}

fn lookup_objects(c: &FinCategory, list: &[String]) -> Result<Vec<ObjId>, CliError> {
    list.iter()
        .map(|n| {
            c.objects()
                .find(|&o| c.object_name(o) == n)
                .ok_or_else(|| CliError::Usage(format!("unknown seed object `{n}`")))
        })
        .collect()
}

fn lookup_morphisms(c: &FinCategory, list: &[String]) -> Result<Vec<MorId>, CliError> {
    list.iter()
        .map(|n| {
            c.morphism_ids()
                .find(|&m| c.morphism(m).name == *n)
                .ok_or_else(|| CliError::Usage(format!("unknown seed morphism `{n}`")))
        })
        .collect()
}

/// Report plus the emitted closure file.
pub fn closure(
    src: &Source,
    objects: &[String],
    morphisms: &[String],
    seed: u64,
) -> Result<(Report, String), CliError> {
    require_valid(src)?;
    let l = &src.loaded;
    let Structure::Cof(cs) = &l.structure else {
        return Err(CliError::Usage(
            "closure needs a category with cofibrations".into(),
        ));
    };
    let c = &**cs.base();
    let seed_set = Seed::with_zero_maps(
        cs,
        lookup_objects(c, objects)?,
        lookup_morphisms(c, morphisms)?,
    );
    let g = generate_subcategory(cs, &seed_set).map_err(core)?;
    let mut r = begin("closure", seed, src);
    r.flag("seed-objects", objects.join(","));
    r.flag("seed-morphisms", morphisms.join(","));
    let sub = &**g.structure.base();
    let mut s = Section::new("generated subcategory");
    s.push(
        Status::Info,
        format!(
            "{} objects, {} morphisms after {} rounds",
            sub.object_count(),
            sub.morphism_count(),
            g.rounds
        ),
    );
    let objs: BTreeSet<&str> = sub.objects().map(|o| sub.object_name(o)).collect();
    s.push(
        Status::Info,
        format!(
            "objects: {}",
            objs.into_iter().collect::<Vec<_>>().join(" ")
        ),
    );
    let cofs = g.structure.cofibrations();
    s.push(Status::Info, format!("cofibrations: {}", names(sub, cofs)));
    let rep = validate_cof(&g.structure, l.mode);
    s.push(
        Status::of(rep.is_valid()),
        format!("closure is a valid structure ({})", l.mode),
    );
    let text = CategoryFile::from_cof(&g.structure, l.mode)
        .to_text()
        .map_err(|e| CliError::Input(e.to_string()))?;
    #[derive(Serialize)]
    struct Data<'a> {
        embedding: &'a segal_lab::fincat::Embedding,
        file: &'a str,
    }
    r.add(s.with_data(Data {
        embedding: &g.embedding,
        file: &text,
    }));
    Ok((r, text))
}

pub fn polygons(n: usize, triangulations_only: bool, seed: u64) -> Result<Report, CliError> {
    let mut r = Report::new("polygons", seed);
    r.flag("n", n);
    r.flag("triangulations-only", triangulations_only);
    let tri = enumerate_triangulations(n).map_err(core)?;
    let mut s = Section::new(format!("triangulations of P_{n}"));
    for t in &tri {
        s.push(Status::Info, format!("{} {}", t.label(), t.classify()));
    }
    s.push(Status::Info, format!("count {}", tri.len()));
    r.add(s.with_data(tri.iter().map(|t| t.label()).collect::<Vec<_>>()));
    if !triangulations_only {
        let all = enumerate_subdivisions(n).map_err(core)?;
        let mut s = Section::new(format!("polygonal subdivisions of P_{n}"));
        for p in &all {
            let kind = if p.is_trivial() {
                "trivial".to_string()
            } else {
                p.classify().to_string()
            };
            s.push(Status::Info, format!("{} {kind}", p.label()));
        }
        s.push(Status::Info, format!("count {}", all.len()));
        r.add(s.with_data(all.iter().map(|t| t.label()).collect::<Vec<_>>()));
    }
    Ok(r)
}

pub fn search(config_path: &str, seed: Option<u64>) -> Result<Report, CliError> {
    let text = std::fs::read_to_string(config_path)
        .map_err(|e| CliError::Input(format!("{config_path}: {e}")))?;
    let mut cfg: SearchConfig = if text.trim().is_empty() {
        SearchConfig::default()
    } else {
        serde_json::from_str(&text).map_err(|e| CliError::Input(format!("{config_path}: {e}")))?
    };
    if let Some(s) = seed {
        cfg.seed = s;
    }
    let rep = counterexample_search(&cfg).map_err(|e| match e {
        segal_lab::Error::InvalidInput(m) => CliError::Usage(m),
        e => core(e),
    })?;
    let mut r = Report::new("search", cfg.seed);
    r.input = Some(Input::new(config_path, text.as_bytes()));
    r.flag("ambient", &cfg.ambient);
    r.flag("categories", cfg.categories);
    r.flag("max-level", cfg.max_level);
    let mut s = Section::new("candidates");
    for (k, c) in rep.candidates.iter().enumerate() {
        let what = match &c.status {
            segal_lab::segal::CandidateStatus::Checked => {
                format!("{} maps checked", c.maps_checked)
            }
            segal_lab::segal::CandidateStatus::Inconclusive(why) => {
                format!("inconclusive: {why}")
            }
        };
        s.push(
            Status::Info,
            format!(
                "#{k} {}: {} objects, {} morphisms; {what}",
                c.source, c.objects, c.morphisms
            ),
        );
    }
    s.push(
        Status::Info,
        format!("{} random seeds rejected", rep.rejected),
    );
    r.add(s);
    let mut s = Section::new("counterexamples");
    if rep.counterexamples.is_empty() {
        s.push(Status::Pass, "none found");
    }
    for x in &rep.counterexamples {
        let mut t = format!(
            "candidate #{} n={} {} ({})",
            x.candidate, x.n, x.subdivision, x.classification
        );
        if let Some(m) = &x.missing_labels {
            t.push_str(&format!("; missed tuple {}", m.join(" | ")));
        }
        if let Some((a, b)) = &x.collision {
            t.push_str(&format!("; {a} and {b} collide"));
        }
        s.push(Status::Fail, t);
    }
    r.add(s.with_data(&rep));
    if rep.inconclusive {
        r.caveats
            .push("some candidates exceeded the budget and were not checked".into());
    }
    r.caveats.push(rep.note.clone());
    Ok(r)
}

pub fn sufficiency(src: &Source, seed: u64) -> Result<Report, CliError> {
    require_valid(src)?;
    let cof = src.loaded.cof().map_err(core)?;
    let rep = check_extension_property(&cof, src.loaded.mode);
    let c = &**cof.base();
    let mut r = begin("sufficiency", seed, src);
    let mut s = Section::new("extension property");
    s.push(
        Status::Info,
        format!(
            "{} configurations, {} skipped (missing cokernel), left square: {}",
            rep.configurations, rep.skipped, rep.left_square
        ),
    );
    for (cfg, w) in &rep.witnesses {
        s.push(
            Status::Pass,
            format!(
                "a={} q={} b={} via {} ({}, {}, p={})",
                c.morphism(cfg.a).name,
                c.morphism(cfg.q).name,
                c.morphism(cfg.b).name,
                c.object_name(w.c),
                c.morphism(w.c1).name,
                c.morphism(w.c2).name,
                c.morphism(w.p).name
            ),
        );
    }
    if let Some(cfg) = &rep.failure {
        s.push(
            Status::Fail,
            format!(
                "no intermediate object for a={} q={} b={}",
                c.morphism(cfg.a).name,
                c.morphism(cfg.q).name,
                c.morphism(cfg.b).name
            ),
        );
    }
    r.add(s.with_data(&rep));
    Ok(r)
}

pub fn fixture(name: &str, json: bool) -> Result<String, CliError> {
    let f = fixture_file(name)?;
    if json {
        Ok(f.to_json())
    } else {
        f.to_text().map_err(|e| CliError::Input(e.to_string()))
    }
}
