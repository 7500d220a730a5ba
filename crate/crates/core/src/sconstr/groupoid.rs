use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use crate::cofcat::{CofStructure, WaldStructure};
use crate::error::{Error, Result};
use crate::fincat::{
    all_natural_transformations, ComponentFilter, FinCategory, FinFunctor, Limits, MorId,
    MorphismRecord, ObjId,
};
use crate::sconstr::{ar_shape, enumerate_chains, enumerate_sn, mu, CofChain, EnumerationPolicy};

/// A materialized category whose objects are diagrams of one shape and
/// whose morphisms are natural transformations with filtered components.
#[derive(Debug, Clone)]
pub struct SnCategory {
    pub diagrams: Vec<FinFunctor>,
    pub category: Arc<FinCategory>,
    /// Components of each morphism, indexed by shape object.
    pub components: Vec<Vec<MorId>>,
    index: HashMap<(ObjId, ObjId, Vec<MorId>), MorId>,
}

impl SnCategory {
    /// Collects all transformations between every ordered pair of diagrams.
    /// `budget` bounds the transformations per hom-set.
    pub fn build(
        diagrams: Vec<FinFunctor>,
        filter: ComponentFilter<'_>,
        budget: usize,
    ) -> Result<SnCategory> {
        let mut records = Vec::new();
        let mut components: Vec<Vec<MorId>> = Vec::new();
        let mut index = HashMap::new();
        let mut identities = vec![MorId(0); diagrams.len()];
        for (x, dx) in diagrams.iter().enumerate() {
            for (y, dy) in diagrams.iter().enumerate() {
                for eta in all_natural_transformations(dx, dy, filter, budget)? {
                    let id = MorId(records.len() as u32);
                    let shape = dx.source();
                    if x == y
                        && shape
                            .objects()
                            .all(|o| dx.target().identity(dx.obj(o)) == eta[o.index()])
                    {
                        identities[x] = id;
                    }
                    records.push(MorphismRecord {
                        name: format!("t{}", records.len()),
                        source: ObjId(x as u32),
                        target: ObjId(y as u32),
                    });
                    index.insert((ObjId(x as u32), ObjId(y as u32), eta.clone()), id);
                    components.push(eta);
                }
            }
        }
        let objects = (0..diagrams.len())
            .map(|k| (format!("d{k}"), None))
            .collect();
        let target = diagrams.first().map(|d| d.target().clone());
        let comps = &components;
        let category = FinCategory::from_fn(
            objects,
            records.clone(),
            identities,
            Limits::internal(),
            |g, f| {
                let t = target.as_ref().expect("nonempty");
                let eta: Vec<MorId> = comps[g.index()]
                    .iter()
                    .zip(&comps[f.index()])
                    .map(|(&a, &b)| t.compose(a, b))
                    .collect();
                index[&(records[f.index()].source, records[g.index()].target, eta)]
            },
        )?;
        Ok(SnCategory {
            diagrams,
            category: Arc::new(category),
            components,
            index,
        })
    }

    pub fn morphism_with(&self, x: ObjId, y: ObjId, components: &[MorId]) -> Option<MorId> {
        self.index.get(&(x, y, components.to_vec())).copied()
    }
}

/// `wS_n C`: staircase diagrams with transformations whose components are
/// weak equivalences. With `weq` the isomorphisms this is the groupoid
/// `iS_n C`.
pub fn build_wsn_category(
    w: &WaldStructure,
    n: usize,
    policy: EnumerationPolicy,
    budget: usize,
) -> Result<SnCategory> {
    let objs = enumerate_sn(w.cof(), n, policy)?;
    let diagrams = objs.into_iter().map(|a| a.diagram().clone()).collect();
    SnCategory::build(diagrams, ComponentFilter::Within(w.weq_table()), budget)
}

static LINE_CACHE: OnceLock<Mutex<HashMap<usize, Arc<FinCategory>>>> = OnceLock::new();

/// The linear order `1 < ... < n`, shared per `n`.
pub fn line_shape(n: usize) -> Arc<FinCategory> {
    let cache = LINE_CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    let mut g = cache.lock().expect("cache poisoned");
    g.entry(n)
        .or_insert_with(|| {
            let names = (1..=n).map(|k| k.to_string()).collect();
            Arc::new(FinCategory::poset(names, |x, y| x <= y).expect("a chain is a poset"))
        })
        .clone()
}

/// A chain as a functor from `1 < ... < n`.
pub fn chain_diagram(s: &CofStructure, chain: &CofChain) -> Result<FinFunctor> {
    let c = s.base();
    let shape = line_shape(chain.n());
    let mor_map = shape
        .morphism_ids()
        .map(|u| {
            let (a, b) = (shape.source(u).index(), shape.target(u).index());
            let mut m = c.identity(chain.objects[a]);
            for t in a..b {
                m = c.compose(chain.maps[t], m);
            }
            m
        })
        .collect();
    FinFunctor::new(shape, c.clone(), chain.objects.clone(), mor_map)
}

/// `M_n C`: chains of cofibrations, with componentwise maps passing
/// `filter` (isomorphisms for the chain groupoid).
pub fn chain_groupoid(
    s: &CofStructure,
    n: usize,
    policy: EnumerationPolicy,
    filter: ComponentFilter<'_>,
    budget: usize,
) -> Result<(Vec<CofChain>, SnCategory)> {
    let policy = match policy {
        EnumerationPolicy::Exhaustive { .. } => EnumerationPolicy::AllChains,
        p => p,
    };
    let chains = enumerate_chains(s, n, policy)?;
    let diagrams = chains
        .iter()
        .map(|ch| chain_diagram(s, ch))
        .collect::<Result<Vec<_>>>()?;
    Ok((chains, SnCategory::build(diagrams, filter, budget)?))
}

/// The top-row functor `mu_n` from a staircase category to a chain
/// category built from the same chains.
pub fn mu_functor(sn: &SnCategory, chains: &[CofChain], mn: &SnCategory) -> Result<FinFunctor> {
    let pos: HashMap<&CofChain, usize> = chains.iter().enumerate().map(|(k, c)| (c, k)).collect();
    let mut obj_map = Vec::with_capacity(sn.diagrams.len());
    let mut n = 0;
    for d in &sn.diagrams {
        n = ar_shape_level(d)?;
        let a = crate::sconstr::SObject::from_functor(n, d.clone())?;
        let ch = mu(&a);
        let k = pos.get(&ch).ok_or_else(|| {
            Error::InvariantBreach(format!("top row {} is not an enumerated chain", a.label()))
        })?;
        obj_map.push(ObjId(*k as u32));
    }
    let shape = ar_shape(n);
    let mut mor_map = Vec::with_capacity(sn.components.len());
    for (m, eta) in sn.components.iter().enumerate() {
        let m = MorId(m as u32);
        let top: Vec<MorId> = (1..=n).map(|j| eta[shape.object(0, j).index()]).collect();
        let (x, y) = (sn.category.source(m), sn.category.target(m));
        let img = mn
            .morphism_with(obj_map[x.index()], obj_map[y.index()], &top)
            .ok_or_else(|| Error::InvariantBreach("top row of a map is not a chain map".into()))?;
        mor_map.push(img);
    }
    FinFunctor::new(sn.category.clone(), mn.category.clone(), obj_map, mor_map)
}

fn ar_shape_level(d: &FinFunctor) -> Result<usize> {
    let k = d.source().object_count();
    // (n+1)(n+2)/2 = k
    (0..64)
        .find(|n| (n + 1) * (n + 2) / 2 == k)
        .ok_or_else(|| Error::ShapeMismatch("not a staircase diagram".into()))
}
