use std::collections::BTreeSet;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::cofcat::fixtures::by_name;
use crate::cofcat::{generate_subcategory, validate_cof, CofStructure, Seed, ValidationMode};
use crate::error::{Error, Result};
use crate::fincat::{MorId, ObjId};
use crate::polygon::{enumerate_triangulations, Classification};
use crate::sconstr::{iso_s_dot, EnumerationPolicy, SDot};
use crate::segal::{two_segal_map, DISCRETE_NOTE};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default)]
pub struct SearchConfig {
    pub seed: u64,
    /// Number of random generated subcategories to examine.
    pub categories: usize,
    /// Fixture the random seeds are drawn from.
    pub ambient: String,
    pub max_objects: usize,
    pub max_level: usize,
    /// Named fixtures checked before the random ones.
    pub fixtures: Vec<String>,
    /// Cap on enumerated diagrams per level; past it a candidate is
    /// inconclusive.
    pub budget: usize,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig {
            seed: 0,
            categories: 0,
            ambient: "ps2x2".into(),
            max_objects: 12,
            max_level: 4,
            fixtures: Vec::new(),
            budget: 20_000,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum CandidateStatus {
    Checked,
    Inconclusive(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchCandidate {
    pub source: String,
    pub objects: usize,
    pub morphisms: usize,
    /// Ambient names of the seed (empty for fixtures).
    pub seed_objects: Vec<String>,
    pub seed_morphisms: Vec<String>,
    pub level_sizes: Vec<usize>,
    pub maps_checked: usize,
    pub status: CandidateStatus,
}

/// A non-bijective 2-Segal map. `missing` is a limit tuple outside the
/// image, given as class indices and diagram labels per member.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Counterexample {
    pub candidate: usize,
    pub n: usize,
    pub subdivision: String,
    pub classification: Classification,
    pub injective: bool,
    pub surjective: bool,
    pub missing: Option<Vec<usize>>,
    pub missing_labels: Option<Vec<String>>,
    pub collision: Option<(String, String)>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchReport {
    pub config: SearchConfig,
    pub note: String,
    pub candidates: Vec<SearchCandidate>,
    /// Random seeds whose closure was too big or not a valid structure.
    pub rejected: usize,
    pub counterexamples: Vec<Counterexample>,
    pub inconclusive: bool,
}

/// A random generated subcategory and the seed it came from.
#[derive(Debug, Clone)]
pub struct RandomStructure {
    pub seed_objects: Vec<ObjId>,
    pub seed_morphisms: Vec<MorId>,
    pub structure: CofStructure,
}

/// Up to `count` distinct generated subcategories of `ambient` with at most
/// `max_objects` objects that are valid in `mode`, from seeds of one to
/// three objects and up to two morphisms. Returns them with the number of
/// rejected seeds.
pub fn random_structures(
    ambient: &CofStructure,
    mode: ValidationMode,
    seed: u64,
    count: usize,
    max_objects: usize,
) -> Result<(Vec<RandomStructure>, usize)> {
    let c = ambient.base();
    let nonzero: Vec<ObjId> = c.objects().filter(|&o| o != ambient.zero()).collect();
    if nonzero.is_empty() {
        return Ok((Vec::new(), 0));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    let mut rejected = 0;
    let attempts = count.saturating_mul(40).max(40);
    for _ in 0..attempts {
        if out.len() == count {
            break;
        }
        let k = rng.gen_range(1..=nonzero.len().min(3));
        let mut objs: Vec<ObjId> = nonzero.choose_multiple(&mut rng, k).copied().collect();
        objs.sort();
        let mut mors = Vec::new();
        for _ in 0..rng.gen_range(0..=2) {
            let a = *objs.choose(&mut rng).unwrap();
            let b = *objs.choose(&mut rng).unwrap();
            if let Some(&m) = c.hom(a, b).choose(&mut rng) {
                mors.push(m);
            }
        }
        mors.sort();
        mors.dedup();
        let s = Seed::with_zero_maps(ambient, objs.iter().copied(), mors.iter().copied());
        let g = match generate_subcategory(ambient, &s) {
            Ok(g) => g,
            Err(Error::BadSeed(_)) => {
                rejected += 1;
                continue;
            }
            Err(e) => return Err(e),
        };
        if g.structure.base().object_count() > max_objects
            || !validate_cof(&g.structure, mode).is_valid()
        {
            rejected += 1;
            continue;
        }
        if seen.insert((g.object_set(), g.morphism_set())) {
            out.push(RandomStructure {
                seed_objects: objs,
                seed_morphisms: mors,
                structure: g.structure,
            });
        }
    }
    Ok((out, rejected))
}

fn budgeted_sdot(s: &CofStructure, cfg: &SearchConfig) -> Result<SDot> {
    let d = iso_s_dot(s, cfg.max_level, EnumerationPolicy::Representatives)?;
    if let Some(n) = d.set.sizes().iter().position(|&k| k > cfg.budget) {
        return Err(Error::BudgetExceeded(d.set.size(n)));
    }
    Ok(d)
}

fn examine(
    s: &CofStructure,
    cfg: &SearchConfig,
    index: usize,
    cand: &mut SearchCandidate,
    found: &mut Vec<Counterexample>,
) -> Result<()> {
    let d = match budgeted_sdot(s, cfg) {
        Ok(d) => d,
        Err(
            e @ (Error::BudgetExceeded(_)
            | Error::MissingPushout { .. }
            | Error::InvariantBreach(_)),
        ) => {
            cand.status = CandidateStatus::Inconclusive(e.to_string());
            return Ok(());
        }
        Err(e) => return Err(e),
    };
    cand.level_sizes = d.set.sizes().to_vec();
    for n in 3..=cfg.max_level {
        for t in enumerate_triangulations(n)? {
            if t.classify() != Classification::Neither {
                continue;
            }
            cand.maps_checked += 1;
            let r = two_segal_map(&d.set, &t)?;
            if r.bijective() {
                continue;
            }
            let label = |k: usize, x: usize| d.reps[k][x].label();
            let missing_labels = r.check.missing.as_ref().map(|tup| {
                t.members()
                    .iter()
                    .zip(tup)
                    .map(|(m, &x)| label(m.len() - 1, x))
                    .collect()
            });
            found.push(Counterexample {
                candidate: index,
                n,
                subdivision: t.label(),
                classification: r.classification,
                injective: r.check.injective,
                surjective: r.check.surjective,
                missing: r.check.missing.clone(),
                missing_labels,
                collision: r.check.collision.map(|(a, b)| (label(n, a), label(n, b))),
            });
        }
    }
    Ok(())
}

fn blank(source: String, s: &CofStructure) -> SearchCandidate {
    SearchCandidate {
        source,
        objects: s.base().object_count(),
        morphisms: s.base().morphism_count(),
        seed_objects: Vec::new(),
        seed_morphisms: Vec::new(),
        level_sizes: Vec::new(),
        maps_checked: 0,
        status: CandidateStatus::Checked,
    }
}

/// Runs every neither-classified triangulation map up to `max_level` on the
/// configured fixtures and random generated subcategories. Outcomes are
/// reported; nothing is assumed about whether a counterexample exists.
pub fn counterexample_search(cfg: &SearchConfig) -> Result<SearchReport> {
    if cfg.fixtures.is_empty() && cfg.categories == 0 {
        return Err(Error::InvalidInput(
            "search config names no fixtures and no random categories".into(),
        ));
    }
    if cfg.max_level < 3 {
        return Err(Error::InvalidInput("max_level must be at least 3".into()));
    }
    let mut candidates = Vec::new();
    let mut found = Vec::new();
    for name in &cfg.fixtures {
        let (s, _) = by_name(name)?;
        let mut cand = blank(format!("fixture {name}"), &s);
        examine(&s, cfg, candidates.len(), &mut cand, &mut found)?;
        candidates.push(cand);
    }
    let mut rejected = 0;
    if cfg.categories > 0 {
        let (ambient, mode) = by_name(&cfg.ambient)?;
        let (batch, rej) =
            random_structures(&ambient, mode, cfg.seed, cfg.categories, cfg.max_objects)?;
        rejected = rej;
        let c = ambient.base();
        for (k, r) in batch.iter().enumerate() {
            let mut cand = blank(format!("random #{k} in {}", cfg.ambient), &r.structure);
            cand.seed_objects = r
                .seed_objects
                .iter()
                .map(|&o| c.object_name(o).to_string())
                .collect();
            cand.seed_morphisms = r
                .seed_morphisms
                .iter()
                .map(|&m| c.morphism(m).name.clone())
                .collect();
            examine(&r.structure, cfg, candidates.len(), &mut cand, &mut found)?;
            candidates.push(cand);
        }
    }
    let inconclusive = candidates
        .iter()
        .any(|c| matches!(c.status, CandidateStatus::Inconclusive(_)));
    Ok(SearchReport {
        config: cfg.clone(),
        note: DISCRETE_NOTE.into(),
        candidates,
        rejected,
        counterexamples: found,
        inconclusive,
    })
}
