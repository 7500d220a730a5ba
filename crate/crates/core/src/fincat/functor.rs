use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fincat::{FinCategory, MorId, ObjId};

/// A functor between two explicit finite categories, stored as its object
/// and morphism tables.
#[derive(Debug, Clone)]
pub struct FinFunctor {
    source: Arc<FinCategory>,
    target: Arc<FinCategory>,
    obj_map: Vec<ObjId>,
    mor_map: Vec<MorId>,
}

impl PartialEq for FinFunctor {
    fn eq(&self, other: &Self) -> bool {
        self.obj_map == other.obj_map
            && self.mor_map == other.mor_map
            && (Arc::ptr_eq(&self.source, &other.source) || *self.source == *other.source)
            && (Arc::ptr_eq(&self.target, &other.target) || *self.target == *other.target)
    }
}

impl Eq for FinFunctor {}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum FunctorViolation {
    Source { f: MorId },
    Target { f: MorId },
    Identity { x: ObjId },
    Composition { g: MorId, f: MorId },
}

impl fmt::Display for FunctorViolation {
    fn fmt(&self, fm: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FunctorViolation::Source { f } => write!(fm, "source of {f} not preserved"),
            FunctorViolation::Target { f } => write!(fm, "target of {f} not preserved"),
            FunctorViolation::Identity { x } => write!(fm, "identity at {x} not preserved"),
            FunctorViolation::Composition { g, f } => {
                write!(fm, "composite {g} . {f} not preserved")
            }
        }
    }
}

impl FinFunctor {
    /// Builds a functor after checking table lengths and ids. Functoriality
    /// is checked separately by [`FinFunctor::validate`].
    pub fn new(
        source: Arc<FinCategory>,
        target: Arc<FinCategory>,
        obj_map: Vec<ObjId>,
        mor_map: Vec<MorId>,
    ) -> Result<Self> {
        if obj_map.len() != source.object_count() || mor_map.len() != source.morphism_count() {
            return Err(Error::ShapeMismatch(format!(
                "functor tables have sizes {}/{}, source has {}/{}",
                obj_map.len(),
                mor_map.len(),
                source.object_count(),
                source.morphism_count()
            )));
        }
        for &o in &obj_map {
            target.check_object(o)?;
        }
        for &m in &mor_map {
            target.check_morphism(m)?;
        }
        Ok(FinFunctor {
            source,
            target,
            obj_map,
            mor_map,
        })
    }

    /// Like [`FinFunctor::new`] but also rejects non-functors.
    pub fn checked(
        source: Arc<FinCategory>,
        target: Arc<FinCategory>,
        obj_map: Vec<ObjId>,
        mor_map: Vec<MorId>,
    ) -> Result<Self> {
        let f = Self::new(source, target, obj_map, mor_map)?;
        if let Some(v) = f.validate().first() {
            return Err(Error::InvalidInput(format!("not a functor: {v}")));
        }
        Ok(f)
    }

    pub(crate) fn new_unchecked(
        source: Arc<FinCategory>,
        target: Arc<FinCategory>,
        obj_map: Vec<ObjId>,
        mor_map: Vec<MorId>,
    ) -> Self {
        debug_assert_eq!(obj_map.len(), source.object_count());
        debug_assert_eq!(mor_map.len(), source.morphism_count());
        FinFunctor {
            source,
            target,
            obj_map,
            mor_map,
        }
    }

    pub fn identity(c: Arc<FinCategory>) -> Self {
        let obj_map = c.objects().collect();
        let mor_map = c.morphism_ids().collect();
        FinFunctor {
            source: c.clone(),
            target: c,
            obj_map,
            mor_map,
        }
    }

    pub fn source(&self) -> &Arc<FinCategory> {
        &self.source
    }

    pub fn target(&self) -> &Arc<FinCategory> {
        &self.target
    }

    pub fn obj(&self, x: ObjId) -> ObjId {
        self.obj_map[x.index()]
    }

    pub fn mor(&self, f: MorId) -> MorId {
        self.mor_map[f.index()]
    }

    pub fn obj_map(&self) -> &[ObjId] {
        &self.obj_map
    }

    pub fn mor_map(&self) -> &[MorId] {
        &self.mor_map
    }

    /// Same tables, new target. Used when the target category is
    /// reconstructed with identical ids.
    pub fn with_target(&self, target: Arc<FinCategory>) -> Self {
        FinFunctor {
            source: self.source.clone(),
            target,
            obj_map: self.obj_map.clone(),
            mor_map: self.mor_map.clone(),
        }
    }

    /// Lists every way the tables fail to be a functor.
    pub fn validate(&self) -> Vec<FunctorViolation> {
        let (s, t) = (&*self.source, &*self.target);
        let mut out = Vec::new();
        for f in s.morphism_ids() {
            let img = self.mor(f);
            if t.source(img) != self.obj(s.source(f)) {
                out.push(FunctorViolation::Source { f });
            }
            if t.target(img) != self.obj(s.target(f)) {
                out.push(FunctorViolation::Target { f });
            }
        }
        for x in s.objects() {
            if self.mor(s.identity(x)) != t.identity(self.obj(x)) {
                out.push(FunctorViolation::Identity { x });
            }
        }
        if !out.is_empty() {
            return out;
        }
        for f in s.morphism_ids() {
            for &g in s.out_morphisms(s.target(f)) {
                let lhs = self.mor(s.compose(g, f));
                let rhs = t.compose(self.mor(g), self.mor(f));
                if lhs != rhs {
                    out.push(FunctorViolation::Composition { g, f });
                }
            }
        }
        out
    }

    pub fn is_functor(&self) -> bool {
        self.validate().is_empty()
    }

    /// `other . self`.
    pub fn then(&self, other: &FinFunctor) -> Result<FinFunctor> {
        if !(Arc::ptr_eq(&self.target, &other.source) || *self.target == *other.source) {
            return Err(Error::ShapeMismatch(
                "functors are not composable".to_string(),
            ));
        }
        Ok(FinFunctor {
            source: self.source.clone(),
            target: other.target.clone(),
            obj_map: self.obj_map.iter().map(|&x| other.obj(x)).collect(),
            mor_map: self.mor_map.iter().map(|&f| other.mor(f)).collect(),
        })
    }

    /// True iff both tables are bijections, i.e. the functor is an
    /// isomorphism of categories.
    pub fn is_isomorphism_of_categories(&self) -> bool {
        let t = &*self.target;
        if self.obj_map.len() != t.object_count() || self.mor_map.len() != t.morphism_count() {
            return false;
        }
        let mut seen_o = vec![false; t.object_count()];
        for &o in &self.obj_map {
            if std::mem::replace(&mut seen_o[o.index()], true) {
                return false;
            }
        }
        let mut seen_m = vec![false; t.morphism_count()];
        for &m in &self.mor_map {
            if std::mem::replace(&mut seen_m[m.index()], true) {
                return false;
            }
        }
        self.is_functor()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn chain(n: usize) -> Arc<FinCategory> {
        Arc::new(
            FinCategory::poset((0..n).map(|i| i.to_string()).collect(), |x, y| x <= y).unwrap(),
        )
    }

    #[test]
    fn identity_functor_is_valid() {
        let c = chain(3);
        let id = FinFunctor::identity(c);
        assert!(id.is_functor());
        assert!(id.is_isomorphism_of_categories());
    }

    #[test]
    fn constant_functor_and_bad_tables() {
        let c = chain(2);
        let p = chain(1);
        let k =
            FinFunctor::new(c.clone(), p.clone(), vec![ObjId(0); 2], vec![MorId(0); 3]).unwrap();
        assert!(k.is_functor());
        assert!(!k.is_isomorphism_of_categories());
        assert!(FinFunctor::new(c.clone(), p, vec![ObjId(0)], vec![]).is_err());
        // swap the two objects but keep morphisms: sources break
        let bad = FinFunctor::new(
            c.clone(),
            c.clone(),
            vec![ObjId(1), ObjId(0)],
            c.morphism_ids().collect(),
        )
        .unwrap();
        assert!(!bad.validate().is_empty());
    }
}
