//! Finite groupoids, 2-limits of finite categories, and the category-level
//! 2-Segal checks.

mod categorical;
mod limits;

use std::collections::HashMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fincat::{FinCategory, FinFunctor, Limits, MorId, MorphismRecord, ObjId};

pub use categorical::{
    check_categorical_2segal, level_category, mu_equivalence, restriction_functor,
    restriction_isofibrations, CategoricalVerdict, LevelCategory, Variant, DEFAULT_LEVEL_BUDGET,
};
pub use limits::{
    check_slice_initial, comparison_functor, homotopy_pullback_category, one_vertex_comparison,
    projective_2_limit, pullback_category, slice_report, two_fiber_product, CatDiagram,
    FiberObject, FiberProduct, HomotopyPullback, HpbModel, Pullback, SliceReport, TwoLimit,
    TwoLimitObject,
};

/// A finite category in which every morphism is invertible.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FinGroupoid {
    cat: Arc<FinCategory>,
}

impl FinGroupoid {
    pub fn new(cat: Arc<FinCategory>) -> Result<Self> {
        if let Some(m) = cat.morphism_ids().find(|&m| !cat.is_iso(m)) {
            return Err(Error::InvalidInput(format!(
                "morphism {} is not invertible",
                cat.morphism(m).name
            )));
        }
        Ok(FinGroupoid { cat })
    }

    pub fn category(&self) -> &Arc<FinCategory> {
        &self.cat
    }
}

pub fn is_groupoid(c: &FinCategory) -> bool {
    c.morphism_ids().all(|m| c.is_iso(m))
}

/// The connected groupoid on `objects` objects with automorphism group
/// `Z/order`: one morphism `i->j:g` per pair and group element, composing
/// by adding labels.
#[derive(Debug, Clone)]
pub struct CyclicGroupoid {
    pub objects: usize,
    pub order: usize,
    groupoid: FinGroupoid,
}

impl CyclicGroupoid {
    pub fn new(objects: usize, order: usize) -> Result<Self> {
        if objects == 0 || order == 0 {
            return Err(Error::InvalidInput(
                "cyclic groupoid needs objects and order >= 1".into(),
            ));
        }
        let (k, m) = (objects, order);
        let obj = (0..k).map(|i| (format!("x{i}"), None)).collect();
        let mut mors = Vec::with_capacity(k * k * m);
        for i in 0..k {
            for j in 0..k {
                for g in 0..m {
                    mors.push(MorphismRecord {
                        name: format!("{i}->{j}:{g}"),
                        source: ObjId(i as u32),
                        target: ObjId(j as u32),
                    });
                }
            }
        }
        let id = |i: usize| MorId(((i * k + i) * m) as u32);
        let split = |f: MorId| {
            let f = f.index();
            (f / (k * m), (f / m) % k, f % m)
        };
        let cat = FinCategory::from_fn(
            obj,
            mors,
            (0..k).map(id).collect(),
            Limits::internal(),
            |g, f| {
                let (i, _, a) = split(f);
                let (_, l, b) = split(g);
                MorId(((i * k + l) * m + (a + b) % m) as u32)
            },
        )?;
        Ok(CyclicGroupoid {
            objects,
            order,
            groupoid: FinGroupoid::new(Arc::new(cat))?,
        })
    }

    pub fn groupoid(&self) -> &FinGroupoid {
        &self.groupoid
    }

    pub fn category(&self) -> &Arc<FinCategory> {
        &self.groupoid.cat
    }

    pub fn morphism(&self, i: usize, j: usize, g: usize) -> MorId {
        MorId(((i * self.objects + j) * self.order + g % self.order) as u32)
    }

    /// `i->j:g` goes to `s(i)->s(j):(mult*g + twist[j] - twist[i])`.
    pub fn functor_to(
        &self,
        target: &CyclicGroupoid,
        objects: &[usize],
        mult: usize,
        twist: &[usize],
    ) -> Result<FinFunctor> {
        if objects.len() != self.objects || twist.len() != self.objects {
            return Err(Error::ShapeMismatch(
                "object map or twist has the wrong length".into(),
            ));
        }
        if let Some(&o) = objects.iter().find(|&&o| o >= target.objects) {
            return Err(Error::UnknownObject(ObjId(o as u32)));
        }
        let m2 = target.order;
        let mut mor_map = Vec::with_capacity(self.category().morphism_count());
        for i in 0..self.objects {
            for j in 0..self.objects {
                for g in 0..self.order {
                    let label = (mult * g + twist[j] % m2 + m2 - twist[i] % m2) % m2;
                    mor_map.push(target.morphism(objects[i], objects[j], label));
                }
            }
        }
        FinFunctor::checked(
            self.category().clone(),
            target.category().clone(),
            objects.iter().map(|&o| ObjId(o as u32)).collect(),
            mor_map,
        )
    }
}

/// A cospan `A -F-> B <-G- C` of groupoids with a display name.
#[derive(Debug, Clone)]
pub struct Cospan {
    pub name: String,
    pub f: FinFunctor,
    pub g: FinFunctor,
}

/// Cospans of cyclic groupoids where `F` is full and surjective on
/// objects, varying object counts, orders and twists.
pub fn full_surjective_cospans() -> Result<Vec<Cospan>> {
    // (A objects, A order, B objects, B order, C objects, C order, G mult)
    let shapes: [(usize, usize, usize, usize, usize, usize, usize); 12] = [
        (1, 1, 1, 1, 1, 1, 0),
        (1, 2, 1, 2, 1, 2, 1),
        (2, 2, 1, 2, 1, 1, 0),
        (2, 2, 2, 2, 1, 2, 1),
        (2, 4, 1, 2, 2, 2, 1),
        (3, 2, 2, 2, 1, 2, 0),
        (2, 3, 2, 3, 2, 3, 2),
        (1, 4, 1, 2, 1, 4, 1),
        (2, 6, 2, 3, 1, 3, 1),
        (3, 1, 2, 1, 2, 1, 0),
        (2, 2, 1, 1, 3, 2, 1),
        (2, 2, 2, 2, 2, 2, 1),
    ];
    let mut out = Vec::new();
    for (n, &(ak, am, bk, bm, ck, cm, r)) in shapes.iter().enumerate() {
        let a = CyclicGroupoid::new(ak, am)?;
        let b = CyclicGroupoid::new(bk, bm)?;
        let c = CyclicGroupoid::new(ck, cm)?;
        let f_obj: Vec<usize> = (0..ak).map(|i| i % bk).collect();
        let f_twist: Vec<usize> = (0..ak).map(|i| i * (n % 2)).collect();
        let g_obj: Vec<usize> = (0..ck).map(|i| (i + n) % bk).collect();
        let g_twist: Vec<usize> = (0..ck).map(|i| i + n).collect();
        out.push(Cospan {
            name: format!("Z{am}^{ak} -> Z{bm}^{bk} <- Z{cm}^{ck} (x{r})"),
            f: a.functor_to(&b, &f_obj, 1, &f_twist)?,
            g: c.functor_to(&b, &g_obj, r, &g_twist)?,
        });
    }
    Ok(out)
}

/// Whether every isomorphism out of an image object lifts to a morphism
/// out of the source object.
pub fn check_isofibration(f: &FinFunctor) -> bool {
    isofibration_failure(f).is_none()
}

/// First `(x, iso)` with `iso: F(x) -> d` not hit by `F` on maps out of `x`.
pub fn isofibration_failure(f: &FinFunctor) -> Option<(ObjId, MorId)> {
    let (s, t) = (f.source(), f.target());
    for x in s.objects() {
        let mut hit = vec![false; t.morphism_count()];
        for &g in s.out_morphisms(x) {
            hit[f.mor(g).index()] = true;
        }
        if let Some(&m) = t
            .out_morphisms(f.obj(x))
            .iter()
            .find(|&&m| t.is_iso(m) && !hit[m.index()])
        {
            return Some((x, m));
        }
    }
    None
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EquivalenceReport {
    pub essentially_surjective: bool,
    pub full: bool,
    pub faithful: bool,
    /// A target object not isomorphic to any image.
    pub missed_object: Option<ObjId>,
    /// Source objects whose hom-set map is not onto.
    pub not_full: Option<(ObjId, ObjId)>,
    /// Two parallel morphisms with the same image.
    pub not_faithful: Option<(MorId, MorId)>,
}

impl EquivalenceReport {
    pub fn is_equivalence(&self) -> bool {
        self.essentially_surjective && self.full && self.faithful
    }
}

/// Essential surjectivity, fullness and faithfulness, each decided by
/// walking every object and hom-set.
pub fn check_equivalence(f: &FinFunctor) -> EquivalenceReport {
    let (s, t) = (f.source(), f.target());
    let classes = t.object_iso_classes();
    let mut covered = vec![false; t.object_count()];
    for x in s.objects() {
        covered[classes[f.obj(x).index()] as usize] = true;
    }
    let missed_object = t.objects().find(|&y| !covered[classes[y.index()] as usize]);
    let mut not_full = None;
    let mut not_faithful = None;
    for a in s.objects() {
        for b in s.objects() {
            let mut images: HashMap<MorId, MorId> = HashMap::new();
            for &g in s.hom(a, b) {
                if let Some(&first) = images.get(&f.mor(g)) {
                    not_faithful.get_or_insert((first, g));
                } else {
                    images.insert(f.mor(g), g);
                }
            }
            if images.len() < t.hom(f.obj(a), f.obj(b)).len() {
                not_full.get_or_insert((a, b));
            }
        }
    }
    EquivalenceReport {
        essentially_surjective: missed_object.is_none(),
        full: not_full.is_none(),
        faithful: not_faithful.is_none(),
        missed_object,
        not_full,
        not_faithful,
    }
}
