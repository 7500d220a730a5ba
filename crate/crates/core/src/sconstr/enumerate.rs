use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::cofcat::CofStructure;
use crate::error::{Error, Result};
use crate::fincat::{FinFunctor, MorId, ObjId};
use crate::sconstr::{ar_shape, validate_sobject, CofChain, SObject};

/// How much of `S_n C` to materialize.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum EnumerationPolicy {
    /// One filling per chain whose objects are iso-class representatives.
    /// Every object of `S_n C` is isomorphic to one of these.
    Representatives,
    /// One filling per chain of cofibrations.
    AllChains,
    /// Every functor `Ar[n] -> C` meeting the staircase conditions, by
    /// backtracking. Only for tiny cases; stops past `budget` diagrams.
    Exhaustive { budget: usize },
}

/// All chains of `n - 1` cofibrations allowed by the policy, in
/// lexicographic order of (objects, maps).
pub fn enumerate_chains(
    s: &CofStructure,
    n: usize,
    policy: EnumerationPolicy,
) -> Result<Vec<CofChain>> {
    let c = s.base();
    let allowed: Vec<ObjId> = match policy {
        EnumerationPolicy::Representatives => {
            let classes = c.object_iso_classes();
            c.objects().filter(|o| classes[o.index()] == o.0).collect()
        }
        _ => c.objects().collect(),
    };
    let mut out = Vec::new();
    if n == 0 {
        out.push(CofChain {
            objects: vec![],
            maps: vec![],
        });
        return Ok(out);
    }
    let mut objects = Vec::with_capacity(n);
    let mut maps = Vec::with_capacity(n);
    fn go(
        s: &CofStructure,
        allowed: &[ObjId],
        n: usize,
        objects: &mut Vec<ObjId>,
        maps: &mut Vec<MorId>,
        out: &mut Vec<CofChain>,
    ) {
        if objects.len() == n {
            out.push(CofChain {
                objects: objects.clone(),
                maps: maps.clone(),
            });
            return;
        }
        let c = s.base();
        for &x in allowed {
            match objects.last() {
                None => {
                    objects.push(x);
                    go(s, allowed, n, objects, maps, out);
                    objects.pop();
                }
                Some(&prev) => {
                    for &m in c.hom(prev, x) {
                        if !s.is_cofibration(m) {
                            continue;
                        }
                        objects.push(x);
                        maps.push(m);
                        go(s, allowed, n, objects, maps, out);
                        maps.pop();
                        objects.pop();
                    }
                }
            }
        }
    }
    go(s, &allowed, n, &mut objects, &mut maps, &mut out);
    Ok(out)
}

/// Fills the staircase over a chain: `A_{i,j}` is the chosen cokernel of
/// `A_{0,i} >-> A_{0,j}`, and each arrow is the unique map compatible with
/// the quotients.
pub fn chain_to_sobject(s: &CofStructure, chain: &CofChain) -> Result<SObject> {
    chain.check(s)?;
    let c = &**s.base();
    let n = chain.n();
    let mut top = vec![s.zero()];
    top.extend(chain.objects.iter().copied());
    let iota = |j: usize, k: usize| -> MorId {
        if j == k {
            return c.identity(top[j]);
        }
        let mut m = if j == 0 {
            s.from_zero(top[1])
        } else {
            chain.maps[j - 1]
        };
        let start = if j == 0 { 1 } else { j + 1 };
        for t in start..k {
            m = c.compose(chain.maps[t - 1], m);
        }
        m
    };
    // quot[i][j]: A_{0,j} ->> A_{i,j}
    let mut obj = vec![vec![ObjId(0); n + 1]; n + 1];
    let mut quot = vec![vec![MorId(0); n + 1]; n + 1];
    for j in 0..=n {
        for i in 0..=j {
            let (o, q) = if i == 0 {
                (top[j], c.identity(top[j]))
            } else if i == j {
                (s.zero(), s.to_zero(top[j]))
            } else {
                s.cokernel(iota(i, j))?
            };
            obj[i][j] = o;
            quot[i][j] = q;
        }
    }
    let shape = ar_shape(n);
    let sc = shape.category();
    let obj_map: Vec<ObjId> = shape.pairs().iter().map(|&(i, j)| obj[i][j]).collect();
    let mut mor_map = Vec::with_capacity(sc.morphism_count());
    for u in sc.morphism_ids() {
        let (i, j) = shape.pair(sc.source(u));
        let (k, l) = shape.pair(sc.target(u));
        let rhs = c.compose(quot[k][l], iota(j, l));
        let h = if i == 0 {
            rhs
        } else {
            *c.hom(obj[i][j], obj[k][l])
                .iter()
                .find(|&&h| c.compose(h, quot[i][j]) == rhs)
                .ok_or_else(|| {
                    Error::InvariantBreach(format!("no induced map A_{{{i},{j}}} -> A_{{{k},{l}}}"))
                })?
        };
        mor_map.push(h);
    }
    let diagram = FinFunctor::new(sc.clone(), s.base().clone(), obj_map, mor_map)?;
    SObject::from_functor(n, diagram)
}

/// The top row of a staircase diagram.
pub fn mu(a: &SObject) -> CofChain {
    let n = a.n();
    CofChain {
        objects: a.top_row(),
        maps: (1..n).map(|k| a.map((0, k), (0, k + 1))).collect(),
    }
}

/// Objects of `S_n C` under the policy, in chain order (or backtracking
/// order for the exhaustive policy).
pub fn enumerate_sn(s: &CofStructure, n: usize, policy: EnumerationPolicy) -> Result<Vec<SObject>> {
    if let EnumerationPolicy::Exhaustive { budget } = policy {
        return exhaustive(s, n, budget);
    }
    enumerate_chains(s, n, policy)?
        .iter()
        .map(|ch| chain_to_sobject(s, ch))
        .collect()
}

fn exhaustive(s: &CofStructure, n: usize, budget: usize) -> Result<Vec<SObject>> {
    let shape = ar_shape(n);
    let pairs = shape.pairs().to_vec();
    let mut objs: Vec<ObjId> = Vec::with_capacity(pairs.len());
    // horizontal generator into (i,j) from (i,j-1), vertical from (i-1,j)
    let mut hor: HashMap<(usize, usize), MorId> = HashMap::new();
    let mut ver: HashMap<(usize, usize), MorId> = HashMap::new();
    let mut out = Vec::new();

    struct Ctx<'a> {
        s: &'a CofStructure,
        n: usize,
        pairs: Vec<(usize, usize)>,
        budget: usize,
    }

    fn build(
        ctx: &Ctx<'_>,
        objs: &[ObjId],
        hor: &HashMap<(usize, usize), MorId>,
        ver: &HashMap<(usize, usize), MorId>,
    ) -> Result<Option<SObject>> {
        let c = &**ctx.s.base();
        let shape = ar_shape(ctx.n);
        let sc = shape.category();
        let at = |i: usize, j: usize| objs[shape.object(i, j).index()];
        let mut mor_map = Vec::with_capacity(sc.morphism_count());
        for u in sc.morphism_ids() {
            let (i, j) = shape.pair(sc.source(u));
            let (k, l) = shape.pair(sc.target(u));
            let mut m = c.identity(at(i, j));
            for t in j + 1..=l {
                m = c.compose(hor[&(i, t)], m);
            }
            for r in i + 1..=k {
                m = c.compose(ver[&(r, l)], m);
            }
            mor_map.push(m);
        }
        let d = FinFunctor::new(sc.clone(), ctx.s.base().clone(), objs.to_vec(), mor_map)?;
        let a = SObject::from_functor(ctx.n, d)?;
        Ok(validate_sobject(ctx.s, &a).is_empty().then_some(a))
    }

    fn go(
        ctx: &Ctx<'_>,
        k: usize,
        objs: &mut Vec<ObjId>,
        hor: &mut HashMap<(usize, usize), MorId>,
        ver: &mut HashMap<(usize, usize), MorId>,
        out: &mut Vec<SObject>,
    ) -> Result<()> {
        if k == ctx.pairs.len() {
            if let Some(a) = build(ctx, objs, hor, ver)? {
                if out.len() == ctx.budget {
                    return Err(Error::BudgetExceeded(ctx.budget));
                }
                out.push(a);
            }
            return Ok(());
        }
        let s = ctx.s;
        let c = &**s.base();
        let shape = ar_shape(ctx.n);
        let (i, j) = ctx.pairs[k];
        let at = |objs: &[ObjId], i: usize, j: usize| objs[shape.object(i, j).index()];
        let candidates: Vec<ObjId> = if i == j {
            vec![s.zero()]
        } else {
            c.objects().collect()
        };
        for x in candidates {
            let hs: Vec<Option<MorId>> = if j > i {
                c.hom(at(objs, i, j - 1), x)
                    .iter()
                    .filter(|&&m| s.is_cofibration(m))
                    .map(|&m| Some(m))
                    .collect()
            } else {
                vec![None]
            };
            let vs: Vec<Option<MorId>> = if i > 0 {
                c.hom(at(objs, i - 1, j), x)
                    .iter()
                    .map(|&m| Some(m))
                    .collect()
            } else {
                vec![None]
            };
            for &h in &hs {
                for &v in &vs {
                    if let (Some(h), Some(v)) = (h, v) {
                        // square from (i-1, j-1)
                        let lhs = c.compose(v, hor[&(i - 1, j)]);
                        let rhs = c.compose(h, ver[&(i, j - 1)]);
                        if lhs != rhs {
                            continue;
                        }
                    }
                    objs.push(x);
                    if let Some(h) = h {
                        hor.insert((i, j), h);
                    }
                    if let Some(v) = v {
                        ver.insert((i, j), v);
                    }
                    go(ctx, k + 1, objs, hor, ver, out)?;
                    objs.pop();
                    hor.remove(&(i, j));
                    ver.remove(&(i, j));
                }
            }
        }
        Ok(())
    }

    let ctx = Ctx {
        s,
        n,
        pairs: pairs.clone(),
        budget,
    };
    go(&ctx, 0, &mut objs, &mut hor, &mut ver, &mut out)?;
    Ok(out)
}

/// Two chains are isomorphic iff there are componentwise isomorphisms
/// commuting with the chain maps.
pub fn chains_isomorphic(s: &CofStructure, x: &CofChain, y: &CofChain) -> bool {
    if x.n() != y.n() {
        return false;
    }
    let c = &**s.base();
    fn go(
        c: &crate::fincat::FinCategory,
        x: &CofChain,
        y: &CofChain,
        k: usize,
        prev: Option<MorId>,
    ) -> bool {
        if k == x.n() {
            return true;
        }
        for &phi in c.isomorphisms(x.objects[k], y.objects[k]).iter() {
            if let Some(p) = prev {
                if c.compose(phi, x.maps[k - 1]) != c.compose(y.maps[k - 1], p) {
                    continue;
                }
            }
            if go(c, x, y, k + 1, Some(phi)) {
                return true;
            }
        }
        false
    }
    go(c, x, y, 0, None)
}

/// One representative per isomorphism class of chains, found by direct
/// chain isomorphism tests (not through `S_n`).
pub fn chain_iso_classes(
    s: &CofStructure,
    n: usize,
    policy: EnumerationPolicy,
) -> Result<Vec<CofChain>> {
    let policy = match policy {
        EnumerationPolicy::Exhaustive { .. } => EnumerationPolicy::AllChains,
        p => p,
    };
    let classes = s.base().object_iso_classes();
    let mut buckets: HashMap<Vec<u32>, Vec<usize>> = HashMap::new();
    let mut reps: Vec<CofChain> = Vec::new();
    for ch in enumerate_chains(s, n, policy)? {
        let key: Vec<u32> = ch.objects.iter().map(|o| classes[o.index()]).collect();
        let bucket = buckets.entry(key).or_default();
        if bucket.iter().any(|&r| chains_isomorphic(s, &reps[r], &ch)) {
            continue;
        }
        bucket.push(reps.len());
        reps.push(ch);
    }
    Ok(reps)
}
