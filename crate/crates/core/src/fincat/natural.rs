use std::sync::Arc;

use crate::error::{Error, Result};
use crate::fincat::{FinCategory, FinFunctor, MorId};

/// Which component morphisms a transformation may use.
#[derive(Debug, Clone, Copy)]
pub enum ComponentFilter<'a> {
    Any,
    Isomorphisms,
    /// Membership table indexed by morphism id.
    Within(&'a [bool]),
}

impl ComponentFilter<'_> {
    fn allows(&self, c: &FinCategory, m: MorId) -> bool {
        match self {
            ComponentFilter::Any => true,
            ComponentFilter::Isomorphisms => c.is_iso(m),
            ComponentFilter::Within(t) => t[m.index()],
        }
    }
}

fn same_category(a: &Arc<FinCategory>, b: &Arc<FinCategory>) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

struct Search<'a> {
    shape: &'a FinCategory,
    target: &'a FinCategory,
    d1: &'a FinFunctor,
    d2: &'a FinFunctor,
    candidates: Vec<Vec<MorId>>,
    // shape morphisms to check once component `k` is fixed (both ends <= k)
    checks: Vec<Vec<MorId>>,
    assigned: Vec<MorId>,
}

impl<'a> Search<'a> {
    fn new(d1: &'a FinFunctor, d2: &'a FinFunctor, filter: ComponentFilter<'_>) -> Result<Self> {
        if !same_category(d1.source(), d2.source()) {
            return Err(Error::ShapeMismatch(
                "diagrams have different shapes".into(),
            ));
        }
        if !same_category(d1.target(), d2.target()) {
            return Err(Error::ShapeMismatch(
                "diagrams land in different categories".into(),
            ));
        }
        let shape = &**d1.source();
        let target = &**d1.target();
        let candidates = shape
            .objects()
            .map(|x| {
                target
                    .hom(d1.obj(x), d2.obj(x))
                    .iter()
                    .copied()
                    .filter(|&m| filter.allows(target, m))
                    .collect()
            })
            .collect();
        let mut checks = vec![Vec::new(); shape.object_count()];
        for u in shape.morphism_ids() {
            if shape.is_identity(u) {
                continue;
            }
            let k = shape.source(u).max(shape.target(u));
            checks[k.index()].push(u);
        }
        Ok(Search {
            shape,
            target,
            d1,
            d2,
            candidates,
            checks,
            assigned: Vec::with_capacity(shape.object_count()),
        })
    }

    fn consistent(&self, k: usize) -> bool {
        self.checks[k].iter().all(|&u| {
            let (a, b) = (self.shape.source(u), self.shape.target(u));
            let (ea, eb) = (self.assigned[a.index()], self.assigned[b.index()]);
            self.target.compose(self.d2.mor(u), ea) == self.target.compose(eb, self.d1.mor(u))
        })
    }

    fn run(&mut self, visit: &mut dyn FnMut(&[MorId]) -> bool) -> bool {
        let k = self.assigned.len();
        if k == self.candidates.len() {
            return visit(&self.assigned);
        }
        for i in 0..self.candidates[k].len() {
            self.assigned.push(self.candidates[k][i]);
            if self.consistent(k) && self.run(visit) {
                self.assigned.pop();
                return true;
            }
            self.assigned.pop();
        }
        false
    }
}

/// First natural transformation `d1 => d2` whose components pass `filter`,
/// as a list of components indexed by shape object. Search is backtracking
/// in shape-object order, so the result is the lexicographically smallest.
pub fn find_natural_transformation(
    d1: &FinFunctor,
    d2: &FinFunctor,
    filter: ComponentFilter<'_>,
) -> Result<Option<Vec<MorId>>> {
    let mut s = Search::new(d1, d2, filter)?;
    let mut out = None;
    s.run(&mut |eta| {
        out = Some(eta.to_vec());
        true
    });
    Ok(out)
}

/// All natural transformations `d1 => d2` with filtered components, in
/// lexicographic order. Stops with an error past `budget` results.
pub fn all_natural_transformations(
    d1: &FinFunctor,
    d2: &FinFunctor,
    filter: ComponentFilter<'_>,
    budget: usize,
) -> Result<Vec<Vec<MorId>>> {
    let mut s = Search::new(d1, d2, filter)?;
    let mut out = Vec::new();
    let mut over = false;
    s.run(&mut |eta| {
        if out.len() == budget {
            over = true;
            return true;
        }
        out.push(eta.to_vec());
        false
    });
    if over {
        return Err(Error::BudgetExceeded(budget));
    }
    Ok(out)
}

/// Natural isomorphism search between two diagrams of the same shape.
pub fn diagram_isomorphic(d1: &FinFunctor, d2: &FinFunctor) -> Result<bool> {
    Ok(find_natural_isomorphism(d1, d2)?.is_some())
}

pub fn find_natural_isomorphism(d1: &FinFunctor, d2: &FinFunctor) -> Result<Option<Vec<MorId>>> {
    // cheap necessary condition before backtracking
    let target = d1.target();
    if same_category(d1.source(), d2.source()) && same_category(target, d2.target()) {
        let classes = target.object_iso_classes();
        for x in d1.source().objects() {
            if classes[d1.obj(x).index()] != classes[d2.obj(x).index()] {
                return Ok(None);
            }
        }
    }
    find_natural_transformation(d1, d2, ComponentFilter::Isomorphisms)
}

/// Checks the naturality squares of a proposed transformation.
pub fn is_natural(d1: &FinFunctor, d2: &FinFunctor, eta: &[MorId]) -> bool {
    let shape = d1.source();
    let t = d1.target();
    if eta.len() != shape.object_count() {
        return false;
    }
    for x in shape.objects() {
        let e = eta[x.index()];
        if !t.has_morphism(e) || t.source(e) != d1.obj(x) || t.target(e) != d2.obj(x) {
            return false;
        }
    }
    shape.morphism_ids().all(|u| {
        let (a, b) = (shape.source(u), shape.target(u));
        t.compose(d2.mor(u), eta[a.index()]) == t.compose(eta[b.index()], d1.mor(u))
    })
}
