//! The S-construction of a category with cofibrations: staircase diagrams
//! `Ar[n] -> C`, their chain representatives, and the simplicial set of
//! isomorphism classes.

mod enumerate;
mod groupoid;
mod simplicial;

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use serde::{Deserialize, Serialize};

use crate::cofcat::CofStructure;
use crate::error::{Error, Result};
use crate::fincat::{is_pushout, CommutativeSquare, FinCategory, FinFunctor, MorId, ObjId};

pub use enumerate::{
    chain_iso_classes, chain_to_sobject, chains_isomorphic, enumerate_chains, enumerate_sn, mu,
    EnumerationPolicy,
};
pub use groupoid::{
    build_wsn_category, chain_diagram, chain_groupoid, line_shape, mu_functor, SnCategory,
};
pub use simplicial::{
    codegeneracy, coface, iso_s_dot, IsoClassifier, SDot, SimplicialViolation,
    TruncatedSimplicialSet,
};

/// The poset `Ar[n]` of pairs `(i, j)` with `0 <= i <= j <= n`, ordered
/// componentwise. Objects are numbered row by row.
#[derive(Debug)]
pub struct ArShape {
    n: usize,
    cat: Arc<FinCategory>,
    pairs: Vec<(usize, usize)>,
}

static AR_CACHE: OnceLock<Mutex<HashMap<usize, Arc<ArShape>>>> = OnceLock::new();

/// Shared `Ar[n]`; the same `Arc` is returned for equal `n`, so diagrams of
/// equal level compare their shapes by pointer.
pub fn ar_shape(n: usize) -> Arc<ArShape> {
    let cache = AR_CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    let mut guard = cache.lock().expect("cache poisoned");
    guard
        .entry(n)
        .or_insert_with(|| {
            let pairs: Vec<(usize, usize)> =
                (0..=n).flat_map(|i| (i..=n).map(move |j| (i, j))).collect();
            let names = pairs.iter().map(|(i, j)| format!("{i}{j}")).collect();
            let p = pairs.clone();
            let cat = FinCategory::poset(names, |x, y| p[x].0 <= p[y].0 && p[x].1 <= p[y].1)
                .expect("Ar[n] is a poset");
            Arc::new(ArShape {
                n,
                cat: Arc::new(cat),
                pairs,
            })
        })
        .clone()
}

impl ArShape {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn category(&self) -> &Arc<FinCategory> {
        &self.cat
    }

    pub fn object(&self, i: usize, j: usize) -> ObjId {
        debug_assert!(i <= j && j <= self.n);
        // rows 0..i hold (n+1) + n + ... + (n+2-i) objects
        let before = i * (self.n + 1) - i * (i.saturating_sub(1)) / 2;
        ObjId((before + j - i) as u32)
    }

    pub fn pair(&self, o: ObjId) -> (usize, usize) {
        self.pairs[o.index()]
    }

    pub fn pairs(&self) -> &[(usize, usize)] {
        &self.pairs
    }

    /// The unique arrow `(i, j) -> (k, l)`.
    pub fn arrow(&self, from: (usize, usize), to: (usize, usize)) -> MorId {
        let h = self
            .cat
            .hom(self.object(from.0, from.1), self.object(to.0, to.1));
        h[0]
    }
}

/// An object of `S_n C`: a functor `Ar[n] -> C`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SObject {
    n: usize,
    diagram: FinFunctor,
}

impl SObject {
    /// Wraps a functor from `Ar[n]`. The defining conditions are checked by
    /// [`validate_sobject`].
    pub fn from_functor(n: usize, diagram: FinFunctor) -> Result<Self> {
        let shape = ar_shape(n);
        if !Arc::ptr_eq(diagram.source(), shape.category())
            && **diagram.source() != **shape.category()
        {
            return Err(Error::ShapeMismatch(format!(
                "functor is not defined on Ar[{n}]"
            )));
        }
        Ok(SObject { n, diagram })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn diagram(&self) -> &FinFunctor {
        &self.diagram
    }

    pub fn obj(&self, i: usize, j: usize) -> ObjId {
        self.diagram.obj(ar_shape(self.n).object(i, j))
    }

    pub fn map(&self, from: (usize, usize), to: (usize, usize)) -> MorId {
        self.diagram.mor(ar_shape(self.n).arrow(from, to))
    }

    /// The top row `A_{0,1} -> ... -> A_{0,n}`.
    pub fn top_row(&self) -> Vec<ObjId> {
        (1..=self.n).map(|j| self.obj(0, j)).collect()
    }

    /// Object names along the top row, e.g. `[1,2,2]`.
    pub fn label(&self) -> String {
        let c = self.diagram.target();
        let names: Vec<&str> = self.top_row().iter().map(|&o| c.object_name(o)).collect();
        format!("[{}]", names.join(","))
    }
}

/// A chain `A_{0,1} >-> ... >-> A_{0,n}` of `n - 1` cofibrations.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct CofChain {
    pub objects: Vec<ObjId>,
    pub maps: Vec<MorId>,
}

impl CofChain {
    pub fn n(&self) -> usize {
        self.objects.len()
    }

    pub fn check(&self, s: &CofStructure) -> Result<()> {
        let c = s.base();
        if self.maps.len() + 1 != self.objects.len().max(1) {
            return Err(Error::ShapeMismatch(format!(
                "chain with {} objects needs {} maps",
                self.objects.len(),
                self.objects.len().saturating_sub(1)
            )));
        }
        for (k, &m) in self.maps.iter().enumerate() {
            c.check_morphism(m)?;
            if c.source(m) != self.objects[k] || c.target(m) != self.objects[k + 1] {
                return Err(Error::ShapeMismatch(format!(
                    "map {k} of the chain is ill-typed"
                )));
            }
            if !s.is_cofibration(m) {
                return Err(Error::NotACofibration(m));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum SViolation {
    NotAFunctor(String),
    DiagonalNotZero { j: usize },
    NotACofibration { i: usize, j: usize, k: usize },
    NotAPushout { i: usize, j: usize, k: usize },
}

impl fmt::Display for SViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SViolation::NotAFunctor(s) => write!(f, "not a functor: {s}"),
            SViolation::DiagonalNotZero { j } => write!(f, "A_{{{j},{j}}} is not the zero object"),
            SViolation::NotACofibration { i, j, k } => {
                write!(f, "A_{{{i},{j}}} -> A_{{{i},{k}}} is not a cofibration")
            }
            SViolation::NotAPushout { i, j, k } => write!(
                f,
                "A_{{{i},{j}}} >-> A_{{{i},{k}}} ->> A_{{{j},{k}}} is not a cofibration sequence"
            ),
        }
    }
}

/// Checks the staircase conditions: zero diagonal, every horizontal map
/// `A_{i,j} -> A_{i,k}` with `i <= j < k` a cofibration, and every square
/// `(A_{i,j}, A_{i,k}; 0, A_{j,k})` with `i < j < k` a pushout.
pub fn validate_sobject(s: &CofStructure, a: &SObject) -> Vec<SViolation> {
    let mut out: Vec<SViolation> = a
        .diagram
        .validate()
        .into_iter()
        .map(|v| SViolation::NotAFunctor(v.to_string()))
        .collect();
    if !out.is_empty() {
        return out;
    }
    let c = &**s.base();
    let n = a.n;
    for j in 0..=n {
        if a.obj(j, j) != s.zero() {
            out.push(SViolation::DiagonalNotZero { j });
        }
    }
    for i in 0..=n {
        for j in i..=n {
            for k in j + 1..=n {
                if !s.is_cofibration(a.map((i, j), (i, k))) {
                    out.push(SViolation::NotACofibration { i, j, k });
                }
                if i < j {
                    let sq = CommutativeSquare {
                        top: a.map((i, j), (i, k)),
                        left: a.map((i, j), (j, j)),
                        right: a.map((i, k), (j, k)),
                        bottom: a.map((j, j), (j, k)),
                    };
                    if !is_pushout(c, &sq) {
                        out.push(SViolation::NotAPushout { i, j, k });
                    }
                }
            }
        }
    }
    out
}

/// Checks that `alpha` lists an order-preserving map `[m] -> [n]`.
pub fn check_order_preserving(alpha: &[usize], n: usize) -> Result<()> {
    if alpha.is_empty() || alpha.windows(2).any(|w| w[0] > w[1]) {
        return Err(Error::NotOrderPreserving(alpha.to_vec()));
    }
    if let Some(&v) = alpha.iter().find(|&&v| v > n) {
        return Err(Error::VertexOutOfRange { vertex: v, n });
    }
    Ok(())
}

/// Precomposition with `Ar(alpha)` for `alpha: [m] -> [n]` given by its
/// values `alpha(0), ..., alpha(m)`.
pub fn simplicial_map(alpha: &[usize], a: &SObject) -> Result<SObject> {
    check_order_preserving(alpha, a.n)?;
    let m = alpha.len() - 1;
    let shape = ar_shape(m);
    let big = ar_shape(a.n);
    let sc = shape.category();
    let obj_map = shape
        .pairs()
        .iter()
        .map(|&(i, j)| a.diagram.obj(big.object(alpha[i], alpha[j])))
        .collect();
    let mor_map = sc
        .morphism_ids()
        .map(|u| {
            let (i, j) = shape.pair(sc.source(u));
            let (k, l) = shape.pair(sc.target(u));
            a.diagram
                .mor(big.arrow((alpha[i], alpha[j]), (alpha[k], alpha[l])))
        })
        .collect();
    let diagram =
        FinFunctor::new_unchecked(sc.clone(), a.diagram.target().clone(), obj_map, mor_map);
    Ok(SObject { n: m, diagram })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ar_numbering() {
        for n in 0..5 {
            let s = ar_shape(n);
            assert_eq!(s.category().object_count(), (n + 1) * (n + 2) / 2);
            for (k, &(i, j)) in s.pairs().iter().enumerate() {
                assert_eq!(s.object(i, j), ObjId(k as u32));
            }
        }
        assert!(Arc::ptr_eq(&ar_shape(3), &ar_shape(3)));
        let s = ar_shape(2);
        // (0,1) <= (1,2) but not (0,2) <= (1,1)
        assert_eq!(s.category().hom(s.object(0, 1), s.object(1, 2)).len(), 1);
        assert!(s.category().hom(s.object(0, 2), s.object(1, 1)).is_empty());
    }

    #[test]
    fn order_preserving_checks() {
        assert!(check_order_preserving(&[0, 2, 1], 2).is_err());
        assert!(check_order_preserving(&[0, 3], 2).is_err());
        assert!(check_order_preserving(&[0, 0, 2], 2).is_ok());
    }
}
