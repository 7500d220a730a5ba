use std::cell::Cell;
use std::collections::HashMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fincat::{FinCategory, FinFunctor, Limits, MorId, MorphismRecord, ObjId};

type MorKey = (ObjId, ObjId, Vec<MorId>);

/// Builds a category whose morphisms are component lists, one component
/// per slot category, composed slotwise.
fn assemble(
    slots: &[Arc<FinCategory>],
    object_names: Vec<String>,
    identities: &[Vec<MorId>],
    morphisms: Vec<MorKey>,
) -> Result<(FinCategory, HashMap<MorKey, MorId>)> {
    let index: HashMap<MorKey, MorId> = morphisms
        .iter()
        .enumerate()
        .map(|(k, m)| (m.clone(), MorId(k as u32)))
        .collect();
    let ids = identities
        .iter()
        .enumerate()
        .map(|(x, comps)| {
            let x = ObjId(x as u32);
            index
                .get(&(x, x, comps.clone()))
                .copied()
                .ok_or_else(|| Error::InvariantBreach(format!("no identity at object {x}")))
        })
        .collect::<Result<Vec<_>>>()?;
    let records = morphisms
        .iter()
        .enumerate()
        .map(|(k, (s, t, _))| MorphismRecord {
            name: format!("m{k}"),
            source: *s,
            target: *t,
        })
        .collect();
    let objects = object_names.into_iter().map(|n| (n, None)).collect();
    let broken = Cell::new(false);
    let cat = FinCategory::from_fn(objects, records, ids, Limits::internal(), |g, f| {
        let (s, _, fc) = &morphisms[f.index()];
        let (_, t, gc) = &morphisms[g.index()];
        let comps: Vec<MorId> = slots
            .iter()
            .zip(gc.iter().zip(fc))
            .map(|(c, (&a, &b))| c.compose(a, b))
            .collect();
        index.get(&(*s, *t, comps)).copied().unwrap_or_else(|| {
            broken.set(true);
            MorId(0)
        })
    })?;
    if broken.get() {
        return Err(Error::InvariantBreach(
            "componentwise composite is missing from the morphism list".into(),
        ));
    }
    Ok((cat, index))
}

fn same(a: &Arc<FinCategory>, b: &Arc<FinCategory>) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

/// A strict functor from a finite index category to finite categories.
#[derive(Debug, Clone)]
pub struct CatDiagram {
    pub index: Arc<FinCategory>,
    pub categories: Vec<Arc<FinCategory>>,
    /// `u_*` for every index morphism `u`.
    pub functors: Vec<FinFunctor>,
}

impl CatDiagram {
    pub fn new(
        index: Arc<FinCategory>,
        categories: Vec<Arc<FinCategory>>,
        functors: Vec<FinFunctor>,
    ) -> Result<Self> {
        if categories.len() != index.object_count() || functors.len() != index.morphism_count() {
            return Err(Error::ShapeMismatch(
                "diagram tables do not match the index".into(),
            ));
        }
        for u in index.morphism_ids() {
            let f = &functors[u.index()];
            if !same(f.source(), &categories[index.source(u).index()])
                || !same(f.target(), &categories[index.target(u).index()])
            {
                return Err(Error::ShapeMismatch(format!(
                    "functor for {u} has wrong ends"
                )));
            }
            if index.is_identity(u) && *f != FinFunctor::identity(f.source().clone()) {
                return Err(Error::InvalidInput(format!(
                    "identity {u} is not sent to an identity"
                )));
            }
            for &v in index.out_morphisms(index.target(u)) {
                let w = index.compose(v, u);
                let vu = f.then(&functors[v.index()])?;
                if vu.obj_map() != functors[w.index()].obj_map()
                    || vu.mor_map() != functors[w.index()].mor_map()
                {
                    return Err(Error::InvalidInput(format!("({v} . {u})_* is not v_* u_*")));
                }
            }
        }
        Ok(CatDiagram {
            index,
            categories,
            functors,
        })
    }

    /// The diagram on the one-object index category.
    pub fn point(c: Arc<FinCategory>) -> Result<Self> {
        let index = Arc::new(FinCategory::poset(vec!["a".into()], |_, _| true)?);
        let id = FinFunctor::identity(c.clone());
        Self::new(index, vec![c], vec![id])
    }

    /// `A -F-> B <-G- C` on the index poset `a <= b >= c`.
    pub fn cospan(f: &FinFunctor, g: &FinFunctor) -> Result<Self> {
        if !same(f.target(), g.target()) {
            return Err(Error::ShapeMismatch(
                "cospan legs have different targets".into(),
            ));
        }
        let index = Arc::new(FinCategory::poset(
            vec!["a".into(), "b".into(), "c".into()],
            |x, y| x == y || y == 1,
        )?);
        let cats = vec![f.source().clone(), f.target().clone(), g.source().clone()];
        let functors = index
            .morphism_ids()
            .map(
                |u| match (index.source(u).index(), index.target(u).index()) {
                    (0, 1) => f.clone(),
                    (2, 1) => g.clone(),
                    (x, _) => FinFunctor::identity(cats[x].clone()),
                },
            )
            .collect();
        Self::new(index, cats, functors)
    }
}

/// An object of a projective 2-limit: `y_a` per index object and an
/// isomorphism `y_u: u_*(y_a) -> y_b` per index morphism.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct TwoLimitObject {
    pub y: Vec<ObjId>,
    pub isos: Vec<MorId>,
}

#[derive(Debug, Clone)]
pub struct TwoLimit {
    pub diagram: CatDiagram,
    pub category: Arc<FinCategory>,
    pub objects: Vec<TwoLimitObject>,
    /// Components of each morphism, one per index object.
    pub components: Vec<Vec<MorId>>,
}

/// The projective 2-limit, objects and morphisms enumerated exhaustively.
/// Fails with `BudgetExceeded` past `budget` objects.
pub fn projective_2_limit(d: &CatDiagram, budget: usize) -> Result<TwoLimit> {
    let idx = &*d.index;
    let na = idx.object_count();
    let nu = idx.morphism_count();
    // cocycle checks, attached to the largest morphism they mention
    let mut cocycles: Vec<Vec<(MorId, MorId, MorId)>> = vec![Vec::new(); nu];
    for u in idx.morphism_ids() {
        for &v in idx.out_morphisms(idx.target(u)) {
            let w = idx.compose(v, u);
            cocycles[u.max(v).max(w).index()].push((u, v, w));
        }
    }
    let mut objects = Vec::new();
    let mut y = vec![ObjId(0); na];
    let mut isos = Vec::with_capacity(nu);
    fn assign_isos(
        d: &CatDiagram,
        y: &[ObjId],
        isos: &mut Vec<MorId>,
        cocycles: &[Vec<(MorId, MorId, MorId)>],
        out: &mut Vec<TwoLimitObject>,
        budget: usize,
    ) -> Result<()> {
        let k = isos.len();
        if k == d.index.morphism_count() {
            if out.len() == budget {
                return Err(Error::BudgetExceeded(budget));
            }
            out.push(TwoLimitObject {
                y: y.to_vec(),
                isos: isos.clone(),
            });
            return Ok(());
        }
        let u = MorId(k as u32);
        let (a, b) = (d.index.source(u).index(), d.index.target(u).index());
        let cb = &d.categories[b];
        for m in cb.isomorphisms(d.functors[k].obj(y[a]), y[b]) {
            isos.push(m);
            let ok = cocycles[k].iter().all(|&(u, v, w)| {
                let c = &d.categories[d.index.target(v).index()];
                isos[w.index()]
                    == c.compose(isos[v.index()], d.functors[v.index()].mor(isos[u.index()]))
            });
            if ok {
                assign_isos(d, y, isos, cocycles, out, budget)?;
            }
            isos.pop();
        }
        Ok(())
    }
    fn assign_objects(
        d: &CatDiagram,
        k: usize,
        y: &mut Vec<ObjId>,
        isos: &mut Vec<MorId>,
        cocycles: &[Vec<(MorId, MorId, MorId)>],
        out: &mut Vec<TwoLimitObject>,
        budget: usize,
    ) -> Result<()> {
        if k == y.len() {
            return assign_isos(d, y, isos, cocycles, out, budget);
        }
        for o in d.categories[k].objects() {
            y[k] = o;
            assign_objects(d, k + 1, y, isos, cocycles, out, budget)?;
        }
        Ok(())
    }
    assign_objects(d, 0, &mut y, &mut isos, &cocycles, &mut objects, budget)?;

    let mut morphisms = Vec::new();
    for (x, ox) in objects.iter().enumerate() {
        for (z, oz) in objects.iter().enumerate() {
            let mut comps = Vec::with_capacity(na);
            two_limit_maps(d, ox, oz, &mut comps, &mut |c| {
                morphisms.push((ObjId(x as u32), ObjId(z as u32), c.to_vec()))
            });
        }
    }
    let identities: Vec<Vec<MorId>> = objects
        .iter()
        .map(|o| (0..na).map(|a| d.categories[a].identity(o.y[a])).collect())
        .collect();
    let names = (0..objects.len()).map(|k| format!("y{k}")).collect();
    let (cat, _) = assemble(&d.categories, names, &identities, morphisms.clone())?;
    Ok(TwoLimit {
        diagram: d.clone(),
        category: Arc::new(cat),
        objects,
        components: morphisms.into_iter().map(|(_, _, c)| c).collect(),
    })
}

fn two_limit_maps(
    d: &CatDiagram,
    x: &TwoLimitObject,
    z: &TwoLimitObject,
    comps: &mut Vec<MorId>,
    visit: &mut dyn FnMut(&[MorId]),
) {
    let k = comps.len();
    if k == x.y.len() {
        visit(comps);
        return;
    }
    let c = &d.categories[k];
    for &f in c.hom(x.y[k], z.y[k]) {
        comps.push(f);
        // every u with both ends assigned and one end at k
        let ok = d.index.morphism_ids().all(|u| {
            let (a, b) = (d.index.source(u).index(), d.index.target(u).index());
            if a.max(b) != k {
                return true;
            }
            let cb = &d.categories[b];
            cb.compose(z.isos[u.index()], d.functors[u.index()].mor(comps[a]))
                == cb.compose(comps[b], x.isos[u.index()])
        });
        if ok {
            two_limit_maps(d, x, z, comps, visit);
        }
        comps.pop();
    }
}

/// The functor `C -> 2lim_[0] C`, `x -> (x, id_x)`. It is an isomorphism
/// of categories because the cocycle condition forces `y_id = id`.
pub fn one_vertex_comparison(c: Arc<FinCategory>) -> Result<(TwoLimit, FinFunctor)> {
    let d = CatDiagram::point(c.clone())?;
    let lim = projective_2_limit(&d, usize::MAX)?;
    let pos: HashMap<&TwoLimitObject, usize> = lim
        .objects
        .iter()
        .enumerate()
        .map(|(k, o)| (o, k))
        .collect();
    let mut obj_map = Vec::new();
    for x in c.objects() {
        let key = TwoLimitObject {
            y: vec![x],
            isos: vec![c.identity(x)],
        };
        let k = pos
            .get(&key)
            .ok_or_else(|| Error::InvariantBreach(format!("({x}, id) is not a 2-limit object")))?;
        obj_map.push(ObjId(*k as u32));
    }
    let index: HashMap<MorKey, MorId> = lim
        .components
        .iter()
        .enumerate()
        .map(|(k, comps)| {
            let m = MorId(k as u32);
            (
                (
                    lim.category.source(m),
                    lim.category.target(m),
                    comps.clone(),
                ),
                m,
            )
        })
        .collect();
    let mor_map = c
        .morphism_ids()
        .map(|f| {
            let key = (
                obj_map[c.source(f).index()],
                obj_map[c.target(f).index()],
                vec![f],
            );
            index
                .get(&key)
                .copied()
                .ok_or_else(|| Error::InvariantBreach(format!("{f} has no 2-limit image")))
        })
        .collect::<Result<Vec<_>>>()?;
    let h = FinFunctor::checked(c, lim.category.clone(), obj_map, mor_map)?;
    Ok((lim, h))
}

/// `(a, b, c, y_F: F(a) -> b, y_G: G(c) -> b)`. In the printed
/// homotopy-pullback model the letters read `(c, d, e, phi, psi)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct FiberObject {
    pub a: ObjId,
    pub b: ObjId,
    pub c: ObjId,
    pub y_f: MorId,
    pub y_g: MorId,
}

#[derive(Debug, Clone)]
pub struct FiberProduct {
    pub category: Arc<FinCategory>,
    pub objects: Vec<FiberObject>,
    /// `(f_a, f_b, f_c)` per morphism.
    pub components: Vec<[MorId; 3]>,
    object_index: HashMap<FiberObject, ObjId>,
    index: HashMap<MorKey, MorId>,
}

impl FiberProduct {
    pub fn object_of(&self, o: &FiberObject) -> Option<ObjId> {
        self.object_index.get(o).copied()
    }

    pub fn morphism_with(&self, x: ObjId, y: ObjId, comps: [MorId; 3]) -> Option<MorId> {
        self.index.get(&(x, y, comps.to_vec())).copied()
    }
}

/// The 2-fiber product with the forced identity components left out.
/// Morphisms are triples making both squares commute.
pub fn two_fiber_product(f: &FinFunctor, g: &FinFunctor) -> Result<FiberProduct> {
    if !same(f.target(), g.target()) {
        return Err(Error::ShapeMismatch(
            "functors have different targets".into(),
        ));
    }
    let (ca, cb, cc) = (f.source(), f.target(), g.source());
    let mut objects = Vec::new();
    for a in ca.objects() {
        for b in cb.objects() {
            let yfs = cb.isomorphisms(f.obj(a), b);
            if yfs.is_empty() {
                continue;
            }
            for c in cc.objects() {
                for &y_f in &yfs {
                    for y_g in cb.isomorphisms(g.obj(c), b) {
                        objects.push(FiberObject { a, b, c, y_f, y_g });
                    }
                }
            }
        }
    }
    let mut morphisms = Vec::new();
    for (x, p) in objects.iter().enumerate() {
        for (z, q) in objects.iter().enumerate() {
            for &fb in cb.hom(p.b, q.b) {
                let left: Vec<MorId> = ca
                    .hom(p.a, q.a)
                    .iter()
                    .copied()
                    .filter(|&fa| cb.compose(q.y_f, f.mor(fa)) == cb.compose(fb, p.y_f))
                    .collect();
                if left.is_empty() {
                    continue;
                }
                for &fc in cc.hom(p.c, q.c) {
                    if cb.compose(q.y_g, g.mor(fc)) != cb.compose(fb, p.y_g) {
                        continue;
                    }
                    for &fa in &left {
                        morphisms.push((ObjId(x as u32), ObjId(z as u32), vec![fa, fb, fc]));
                    }
                }
            }
        }
    }
    let identities: Vec<Vec<MorId>> = objects
        .iter()
        .map(|o| vec![ca.identity(o.a), cb.identity(o.b), cc.identity(o.c)])
        .collect();
    let names = (0..objects.len()).map(|k| format!("p{k}")).collect();
    let slots = [ca.clone(), cb.clone(), cc.clone()];
    let (cat, index) = assemble(&slots, names, &identities, morphisms.clone())?;
    let object_index = objects
        .iter()
        .enumerate()
        .map(|(k, o)| (*o, ObjId(k as u32)))
        .collect();
    Ok(FiberProduct {
        category: Arc::new(cat),
        objects,
        components: morphisms
            .into_iter()
            .map(|(_, _, c)| [c[0], c[1], c[2]])
            .collect(),
        object_index,
        index,
    })
}

/// The ordinary pullback of categories: pairs with equal images.
#[derive(Debug, Clone)]
pub struct Pullback {
    pub category: Arc<FinCategory>,
    pub objects: Vec<(ObjId, ObjId)>,
    pub components: Vec<[MorId; 2]>,
    object_index: HashMap<(ObjId, ObjId), ObjId>,
    index: HashMap<MorKey, MorId>,
}

impl Pullback {
    pub fn object_of(&self, a: ObjId, c: ObjId) -> Option<ObjId> {
        self.object_index.get(&(a, c)).copied()
    }

    pub fn morphism_with(&self, x: ObjId, y: ObjId, comps: [MorId; 2]) -> Option<MorId> {
        self.index.get(&(x, y, comps.to_vec())).copied()
    }
}

pub fn pullback_category(f: &FinFunctor, g: &FinFunctor) -> Result<Pullback> {
    if !same(f.target(), g.target()) {
        return Err(Error::ShapeMismatch(
            "functors have different targets".into(),
        ));
    }
    let (ca, cc) = (f.source(), g.source());
    let mut objects = Vec::new();
    for a in ca.objects() {
        for c in cc.objects() {
            if f.obj(a) == g.obj(c) {
                objects.push((a, c));
            }
        }
    }
    let mut morphisms = Vec::new();
    for (x, &(a, c)) in objects.iter().enumerate() {
        for (z, &(a2, c2)) in objects.iter().enumerate() {
            for &fa in ca.hom(a, a2) {
                for &fc in cc.hom(c, c2) {
                    if f.mor(fa) == g.mor(fc) {
                        morphisms.push((ObjId(x as u32), ObjId(z as u32), vec![fa, fc]));
                    }
                }
            }
        }
    }
    let identities: Vec<Vec<MorId>> = objects
        .iter()
        .map(|&(a, c)| vec![ca.identity(a), cc.identity(c)])
        .collect();
    let names = (0..objects.len()).map(|k| format!("q{k}")).collect();
    let (cat, index) = assemble(
        &[ca.clone(), cc.clone()],
        names,
        &identities,
        morphisms.clone(),
    )?;
    let object_index = objects
        .iter()
        .enumerate()
        .map(|(k, &o)| (o, ObjId(k as u32)))
        .collect();
    Ok(Pullback {
        category: Arc::new(cat),
        objects,
        components: morphisms
            .into_iter()
            .map(|(_, _, c)| [c[0], c[1]])
            .collect(),
        object_index,
        index,
    })
}

/// Which reading of the homotopy-pullback model to build.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum HpbModel {
    /// Pullback of the two path-object factorizations: objects
    /// `(c, d, e, phi, psi)`, morphisms `(c -> c', d -> d', e -> e')` with
    /// both squares commuting. As data this is the 2-fiber product, and the
    /// comparison functor is the identity on tuples.
    Factorization,
    /// The printed description: objects as above with `F(c) = K(e)`,
    /// morphisms pairs `(c -> c', e -> e')` with `F(c -> c') = K(e -> e')`.
    /// The comparison functor sends `psi` to `phi`.
    Printed,
}

#[derive(Debug, Clone)]
pub struct HomotopyPullback {
    pub model: HpbModel,
    pub category: Arc<FinCategory>,
    pub objects: Vec<FiberObject>,
    /// Three components for `Factorization`, `(f_c, f_e)` for `Printed`.
    pub components: Vec<Vec<MorId>>,
}

pub fn homotopy_pullback_category(
    f: &FinFunctor,
    k: &FinFunctor,
    model: HpbModel,
) -> Result<HomotopyPullback> {
    match model {
        HpbModel::Factorization => {
            let p = two_fiber_product(f, k)?;
            Ok(HomotopyPullback {
                model,
                category: p.category.clone(),
                objects: p.objects.clone(),
                components: p.components.iter().map(|c| c.to_vec()).collect(),
            })
        }
        HpbModel::Printed => {
            if !same(f.target(), k.target()) {
                return Err(Error::ShapeMismatch(
                    "functors have different targets".into(),
                ));
            }
            let (cc, cd, ce) = (f.source(), f.target(), k.source());
            let mut objects = Vec::new();
            for c in cc.objects() {
                for e in ce.objects() {
                    if f.obj(c) != k.obj(e) {
                        continue;
                    }
                    for d in cd.objects() {
                        let isos = cd.isomorphisms(f.obj(c), d);
                        for &phi in &isos {
                            for &psi in &isos {
                                objects.push(FiberObject {
                                    a: c,
                                    b: d,
                                    c: e,
                                    y_f: phi,
                                    y_g: psi,
                                });
                            }
                        }
                    }
                }
            }
            let mut morphisms = Vec::new();
            for (x, p) in objects.iter().enumerate() {
                for (z, q) in objects.iter().enumerate() {
                    for &fc in cc.hom(p.a, q.a) {
                        for &fe in ce.hom(p.c, q.c) {
                            if f.mor(fc) == k.mor(fe) {
                                morphisms.push((ObjId(x as u32), ObjId(z as u32), vec![fc, fe]));
                            }
                        }
                    }
                }
            }
            let identities: Vec<Vec<MorId>> = objects
                .iter()
                .map(|o| vec![cc.identity(o.a), ce.identity(o.c)])
                .collect();
            let names = (0..objects.len()).map(|k| format!("h{k}")).collect();
            let (cat, _) = assemble(
                &[cc.clone(), ce.clone()],
                names,
                &identities,
                morphisms.clone(),
            )?;
            Ok(HomotopyPullback {
                model,
                category: Arc::new(cat),
                objects,
                components: morphisms.into_iter().map(|(_, _, c)| c).collect(),
            })
        }
    }
}

/// The comparison functor from the homotopy-pullback model to the 2-fiber
/// product of the same cospan.
pub fn comparison_functor(
    h: &HomotopyPullback,
    p: &FiberProduct,
    f: &FinFunctor,
) -> Result<FinFunctor> {
    let cd = f.target();
    let missing =
        || Error::InvariantBreach("comparison image is not in the 2-fiber product".into());
    let obj_map = h
        .objects
        .iter()
        .map(|o| {
            let img = match h.model {
                HpbModel::Factorization => *o,
                HpbModel::Printed => FiberObject { y_g: o.y_f, ..*o },
            };
            p.object_of(&img).ok_or_else(missing)
        })
        .collect::<Result<Vec<_>>>()?;
    let hc = &h.category;
    let mor_map = hc
        .morphism_ids()
        .map(|m| {
            let (x, y) = (hc.source(m), hc.target(m));
            let comps = &h.components[m.index()];
            let triple = match h.model {
                HpbModel::Factorization => [comps[0], comps[1], comps[2]],
                HpbModel::Printed => {
                    let (ox, oy) = (&h.objects[x.index()], &h.objects[y.index()]);
                    let inv = cd.inverse(ox.y_f).ok_or_else(missing)?;
                    let fd = cd.compose_all(&[oy.y_f, f.mor(comps[0]), inv]);
                    [comps[0], fd, comps[1]]
                }
            };
            p.morphism_with(obj_map[x.index()], obj_map[y.index()], triple)
                .ok_or_else(missing)
        })
        .collect::<Result<Vec<_>>>()?;
    FinFunctor::checked(hc.clone(), p.category.clone(), obj_map, mor_map)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SliceReport {
    pub object: ObjId,
    /// Objects `(a, g: H(a) -> x)` of the slice.
    pub size: usize,
    pub initial: Option<(ObjId, MorId)>,
}

/// Searches `H/x` for an object with exactly one map to every object.
pub fn slice_report(h: &FinFunctor, x: ObjId) -> SliceReport {
    let (s, t) = (h.source(), h.target());
    let slice: Vec<(ObjId, MorId)> = s
        .objects()
        .flat_map(|a| t.hom(h.obj(a), x).iter().map(move |&g| (a, g)))
        .collect();
    let initial = slice.iter().copied().find(|&(a, g)| {
        slice.iter().all(|&(b, g2)| {
            s.hom(a, b)
                .iter()
                .filter(|&&k| t.compose(g2, h.mor(k)) == g)
                .count()
                == 1
        })
    });
    SliceReport {
        object: x,
        size: slice.len(),
        initial,
    }
}

pub fn check_slice_initial(h: &FinFunctor, x: ObjId) -> bool {
    slice_report(h, x).initial.is_some()
}
