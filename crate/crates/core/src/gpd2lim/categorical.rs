use std::collections::hash_map::Entry;
use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::cofcat::{CofStructure, WaldStructure};
use crate::error::{Error, Result};
use crate::fincat::{ComponentFilter, FinFunctor, MorId, ObjId};
use crate::gpd2lim::{
    check_equivalence, isofibration_failure, pullback_category, two_fiber_product,
    EquivalenceReport,
};
use crate::sconstr::{
    ar_shape, build_wsn_category, chain_groupoid, mu_functor, EnumerationPolicy, SnCategory,
};
use crate::segal::{left_family_map, right_family_map, Family};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Variant {
    /// `iS_n`, compared with a 2-fiber product.
    IsoGroupoid,
    /// `S_n` with all natural transformations, ordinary pullback.
    SCategory,
    /// `wS_n`, ordinary pullback.
    WsCategory,
}

impl Variant {
    pub fn name(&self) -> &'static str {
        match self {
            Variant::IsoGroupoid => "iso-groupoid",
            Variant::SCategory => "S-category",
            Variant::WsCategory => "wS-category",
        }
    }
}

/// `S_m C` (or a variant) over every diagram, with a lookup from
/// diagram tables to objects.
#[derive(Debug, Clone)]
pub struct LevelCategory {
    pub n: usize,
    pub sn: SnCategory,
    lookup: HashMap<(Vec<ObjId>, Vec<MorId>), ObjId>,
}

impl LevelCategory {
    pub fn object_of(&self, d: &FinFunctor) -> Option<ObjId> {
        self.lookup
            .get(&(d.obj_map().to_vec(), d.mor_map().to_vec()))
            .copied()
    }
}

pub const DEFAULT_LEVEL_BUDGET: usize = 1 << 16;

/// Staircase diagrams of level `n` under `policy`. Targets of restriction
/// functors need the exhaustive policy so that every restricted diagram is
/// a listed object.
pub fn level_category(
    w: &WaldStructure,
    n: usize,
    variant: Variant,
    policy: EnumerationPolicy,
    budget: usize,
) -> Result<LevelCategory> {
    let sn = match variant {
        Variant::IsoGroupoid => {
            let objs = crate::sconstr::enumerate_sn(w.cof(), n, policy)?;
            SnCategory::build(
                objs.into_iter().map(|a| a.diagram().clone()).collect(),
                ComponentFilter::Isomorphisms,
                budget,
            )?
        }
        Variant::SCategory => {
            let objs = crate::sconstr::enumerate_sn(w.cof(), n, policy)?;
            SnCategory::build(
                objs.into_iter().map(|a| a.diagram().clone()).collect(),
                ComponentFilter::Any,
                budget,
            )?
        }
        Variant::WsCategory => build_wsn_category(w, n, policy, budget)?,
    };
    let lookup = sn
        .diagrams
        .iter()
        .enumerate()
        .map(|(k, d)| {
            (
                (d.obj_map().to_vec(), d.mor_map().to_vec()),
                ObjId(k as u32),
            )
        })
        .collect();
    Ok(LevelCategory { n, sn, lookup })
}

/// Restriction along the vertex positions `alpha` (an injection
/// `[m] -> [n]`), on diagrams and on transformations.
pub fn restriction_functor(
    src: &LevelCategory,
    tgt: &LevelCategory,
    alpha: &[usize],
) -> Result<FinFunctor> {
    if alpha.len() != tgt.n + 1
        || alpha.windows(2).any(|w| w[0] >= w[1])
        || alpha.iter().any(|&v| v > src.n)
    {
        return Err(Error::NotOrderPreserving(alpha.to_vec()));
    }
    let big = ar_shape(src.n);
    let small = ar_shape(tgt.n);
    let spots: Vec<usize> = small
        .pairs()
        .iter()
        .map(|&(i, j)| big.object(alpha[i], alpha[j]).index())
        .collect();
    let mut obj_map = Vec::with_capacity(src.sn.diagrams.len());
    for d in &src.sn.diagrams {
        let a = crate::sconstr::SObject::from_functor(src.n, d.clone())?;
        let r = crate::sconstr::simplicial_map(alpha, &a)?;
        let o = tgt.object_of(r.diagram()).ok_or_else(|| {
            Error::InvariantBreach(format!(
                "restriction of {} is not a listed diagram",
                a.label()
            ))
        })?;
        obj_map.push(o);
    }
    let sc = &src.sn.category;
    let mor_map = sc
        .morphism_ids()
        .map(|m| {
            let comps: Vec<MorId> = spots
                .iter()
                .map(|&k| src.sn.components[m.index()][k])
                .collect();
            let (x, y) = (obj_map[sc.source(m).index()], obj_map[sc.target(m).index()]);
            tgt.sn.morphism_with(x, y, &comps).ok_or_else(|| {
                Error::InvariantBreach("restricted transformation is not a listed morphism".into())
            })
        })
        .collect::<Result<Vec<_>>>()?;
    FinFunctor::new(sc.clone(), tgt.sn.category.clone(), obj_map, mor_map)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CategoricalVerdict {
    pub variant: Variant,
    pub family: Family,
    pub n: usize,
    pub j: usize,
    pub source_objects: usize,
    pub target_objects: usize,
    /// Isofibration status of the two legs into the shared face. Only
    /// recorded for the ordinary-pullback variants.
    pub legs_isofibrations: Option<(bool, bool)>,
    pub equivalence: EquivalenceReport,
}

impl CategoricalVerdict {
    pub fn is_equivalence(&self) -> bool {
        self.equivalence.is_equivalence()
    }
}

fn positions(member: &[usize], face: &[usize]) -> Vec<usize> {
    face.iter()
        .map(|v| member.binary_search(v).expect("face of member"))
        .collect()
}

/// The family map at `(n, j)` for a categorical variant of the
/// S-construction, checked for being an equivalence.
///
/// The iso-groupoid variant maps into the 2-fiber product. The other two
/// map into the ordinary pullback, which computes the homotopy pullback
/// when a leg is an isofibration; that is re-checked here and its failure
/// is an invariant breach.
pub fn check_categorical_2segal(
    w: &WaldStructure,
    n: usize,
    j: usize,
    family: Family,
    variant: Variant,
    budget: usize,
) -> Result<CategoricalVerdict> {
    if n < 2 || j == 0 || j >= n {
        return Err(Error::InvalidInput(format!(
            "need n >= 2 and 0 < j < n, got n = {n}, j = {j}"
        )));
    }
    let d = match family {
        Family::Left => left_family_map(n, j),
        Family::Right => right_family_map(n, j),
        _ => {
            return Err(Error::InvalidInput(
                "categorical checks cover the left and right families".into(),
            ))
        }
    };
    let (first, second) = (&d.members[0], &d.members[1]);
    let shared = &d.constraints[0].2;
    // The source only needs one diagram per iso class (an equivalence
    // restricted to an equivalent full subcategory is still one); faces are
    // exhaustive, except a face equal to all of [n], which reuses the source.
    let top = level_category(w, n, variant, EnumerationPolicy::Representatives, budget)?;
    let exhaustive = EnumerationPolicy::Exhaustive { budget };
    let face = |m: &Vec<usize>| -> Result<Option<LevelCategory>> {
        if m.len() == n + 1 {
            Ok(None)
        } else {
            level_category(w, m.len() - 1, variant, exhaustive, budget).map(Some)
        }
    };
    let (c1, c2) = (face(first)?, face(second)?);
    let (c1, c2) = (c1.as_ref().unwrap_or(&top), c2.as_ref().unwrap_or(&top));
    let cs = level_category(w, shared.len() - 1, variant, exhaustive, budget)?;
    let r1 = restriction_functor(&top, c1, first)?;
    let r2 = restriction_functor(&top, c2, second)?;
    let rs = restriction_functor(&top, &cs, shared)?;
    let leg1 = restriction_functor(c1, &cs, &positions(first, shared))?;
    let leg2 = restriction_functor(c2, &cs, &positions(second, shared))?;
    let source = &top.sn.category;
    let (target_objects, legs, phi) = match variant {
        Variant::IsoGroupoid => {
            let p = two_fiber_product(&leg1, &leg2)?;
            let missing =
                || Error::InvariantBreach("comparison lands outside the 2-fiber product".into());
            let t = &cs.sn.category;
            let obj_map = source
                .objects()
                .map(|z| {
                    let b = rs.obj(z);
                    p.object_of(&crate::gpd2lim::FiberObject {
                        a: r1.obj(z),
                        b,
                        c: r2.obj(z),
                        y_f: t.identity(b),
                        y_g: t.identity(b),
                    })
                    .ok_or_else(missing)
                })
                .collect::<Result<Vec<_>>>()?;
            let mor_map = source
                .morphism_ids()
                .map(|m| {
                    let (x, y) = (source.source(m), source.target(m));
                    p.morphism_with(
                        obj_map[x.index()],
                        obj_map[y.index()],
                        [r1.mor(m), rs.mor(m), r2.mor(m)],
                    )
                    .ok_or_else(missing)
                })
                .collect::<Result<Vec<_>>>()?;
            let phi = FinFunctor::new(source.clone(), p.category.clone(), obj_map, mor_map)?;
            (p.objects.len(), None, phi)
        }
        Variant::SCategory | Variant::WsCategory => {
            let iso1 = isofibration_failure(&leg1).is_none();
            let iso2 = isofibration_failure(&leg2).is_none();
            if !iso1 && !iso2 {
                return Err(Error::InvariantBreach(format!(
                    "neither leg into the face {shared:?} is an isofibration; the ordinary pullback does not model the homotopy pullback"
                )));
            }
            let p = pullback_category(&leg1, &leg2)?;
            let missing = || Error::InvariantBreach("comparison lands outside the pullback".into());
            let obj_map = source
                .objects()
                .map(|z| p.object_of(r1.obj(z), r2.obj(z)).ok_or_else(missing))
                .collect::<Result<Vec<_>>>()?;
            let mor_map = source
                .morphism_ids()
                .map(|m| {
                    let (x, y) = (source.source(m), source.target(m));
                    p.morphism_with(
                        obj_map[x.index()],
                        obj_map[y.index()],
                        [r1.mor(m), r2.mor(m)],
                    )
                    .ok_or_else(missing)
                })
                .collect::<Result<Vec<_>>>()?;
            let phi = FinFunctor::new(source.clone(), p.category.clone(), obj_map, mor_map)?;
            (p.objects.len(), Some((iso1, iso2)), phi)
        }
    };
    if !phi.is_functor() {
        return Err(Error::InvariantBreach("comparison is not a functor".into()));
    }
    Ok(CategoricalVerdict {
        variant,
        family,
        n,
        j,
        source_objects: source.object_count(),
        target_objects,
        legs_isofibrations: legs,
        equivalence: check_equivalence(&phi),
    })
}

/// `mu_n: iS_n C -> M_n C` on representative-valued diagrams and chains.
pub fn mu_equivalence(s: &CofStructure, n: usize, budget: usize) -> Result<EquivalenceReport> {
    let w = WaldStructure::with_isomorphisms(s.clone());
    let policy = EnumerationPolicy::Representatives;
    let sn = build_wsn_category(&w, n, policy, budget)?;
    let (chains, mn) = chain_groupoid(s, n, policy, ComponentFilter::Isomorphisms, budget)?;
    let f = mu_functor(&sn, &chains, &mn)?;
    Ok(check_equivalence(&f))
}

/// Restrictions `S_alpha -> S_{0,j}` for every vertex set `alpha` of
/// `[n]` with at least three vertices containing `0` and `j`, with their
/// isofibration status.
pub fn restriction_isofibrations(
    w: &WaldStructure,
    n: usize,
    variant: Variant,
    budget: usize,
) -> Result<Vec<(Vec<usize>, usize, bool)>> {
    let exhaustive = EnumerationPolicy::Exhaustive { budget };
    let edge = level_category(w, 1, variant, exhaustive, budget)?;
    let mut levels: HashMap<usize, LevelCategory> = HashMap::new();
    let mut out = Vec::new();
    for mask in 0u32..(1 << (n + 1)) {
        let alpha: Vec<usize> = (0..=n).filter(|&v| mask & (1 << v) != 0).collect();
        if alpha.len() < 3 || alpha[0] != 0 {
            continue;
        }
        let m = alpha.len() - 1;
        if let Entry::Vacant(slot) = levels.entry(m) {
            slot.insert(level_category(w, m, variant, exhaustive, budget)?);
        }
        let lc = &levels[&m];
        for (pos, &j) in alpha.iter().enumerate().skip(1) {
            let f = restriction_functor(lc, &edge, &[0, pos])?;
            out.push((alpha.clone(), j, isofibration_failure(&f).is_none()));
        }
    }
    Ok(out)
}
