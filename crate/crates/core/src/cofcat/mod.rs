//! Cofibration, fibration and Waldhausen structures layered on a
//! [`FinCategory`].

mod closure;
mod extension;
pub mod fixtures;
mod validate;

use std::collections::{BTreeSet, HashMap};
use std::sync::{Arc, Mutex};

use crate::error::{Error, Result};
use crate::fincat::{
    find_pullback, find_pushout, CommutativeSquare, FinCategory, MorId, ObjId, PushoutSquare,
};

pub use closure::{check_intersection_closed, generate_subcategory, Generated, Seed};
pub use extension::{check_extension_property, ExtensionConfig, ExtensionReport, ExtensionWitness};
pub use validate::{
    validate_cof, validate_fib, validate_wald, CofReport, CofViolation, ValidationMode, WaldReport,
    WaldViolation,
};

/// A pointed finite category with a class of cofibrations.
#[derive(Debug)]
pub struct CofStructure {
    base: Arc<FinCategory>,
    zero: ObjId,
    cofibrations: Vec<bool>,
    pushouts: Mutex<HashMap<(MorId, MorId), Option<PushoutSquare>>>,
}

impl Clone for CofStructure {
    fn clone(&self) -> Self {
        CofStructure {
            base: self.base.clone(),
            zero: self.zero,
            cofibrations: self.cofibrations.clone(),
            pushouts: Mutex::new(self.pushouts.lock().unwrap().clone()),
        }
    }
}

impl PartialEq for CofStructure {
    fn eq(&self, other: &Self) -> bool {
        self.zero == other.zero
            && self.cofibrations == other.cofibrations
            && *self.base == *other.base
    }
}

impl Eq for CofStructure {}

impl CofStructure {
    /// Fails only on unknown ids; axioms are checked by [`validate_cof`].
    pub fn new(
        base: Arc<FinCategory>,
        zero: ObjId,
        cofibrations: impl IntoIterator<Item = MorId>,
    ) -> Result<Self> {
        base.check_object(zero)?;
        let mut table = vec![false; base.morphism_count()];
        for m in cofibrations {
            base.check_morphism(m)?;
            table[m.index()] = true;
        }
        Ok(CofStructure {
            base,
            zero,
            cofibrations: table,
            pushouts: Mutex::new(HashMap::new()),
        })
    }

    pub fn base(&self) -> &Arc<FinCategory> {
        &self.base
    }

    pub fn zero(&self) -> ObjId {
        self.zero
    }

    pub fn is_cofibration(&self, m: MorId) -> bool {
        self.cofibrations[m.index()]
    }

    pub fn cofibration_table(&self) -> &[bool] {
        &self.cofibrations
    }

    pub fn cofibrations(&self) -> BTreeSet<MorId> {
        self.base
            .morphism_ids()
            .filter(|&m| self.is_cofibration(m))
            .collect()
    }

    /// Cofibrations out of `a`, sorted by (target, id).
    pub fn cofibrations_from(&self, a: ObjId) -> impl Iterator<Item = MorId> + '_ {
        self.base
            .out_morphisms(a)
            .iter()
            .copied()
            .filter(move |&m| self.is_cofibration(m))
    }

    /// The unique map `0 -> a`. Panics if `zero` is not initial.
    pub fn from_zero(&self, a: ObjId) -> MorId {
        self.base.hom(self.zero, a)[0]
    }

    /// The unique map `a -> 0`. Panics if `zero` is not terminal.
    pub fn to_zero(&self, a: ObjId) -> MorId {
        self.base.hom(a, self.zero)[0]
    }

    /// The zero map `a -> 0 -> b`.
    pub fn zero_map(&self, a: ObjId, b: ObjId) -> MorId {
        self.base.compose(self.from_zero(b), self.to_zero(a))
    }

    /// The chosen pushout of `f` along `g` (ties broken by
    /// [`find_pushout`]), memoized.
    pub fn pushout(&self, f: MorId, g: MorId) -> Result<Option<PushoutSquare>> {
        if let Some(hit) = self.pushouts.lock().unwrap().get(&(f, g)) {
            return Ok(*hit);
        }
        let sq = find_pushout(&self.base, f, g)?;
        self.pushouts.lock().unwrap().insert((f, g), sq);
        Ok(sq)
    }

    /// Like [`CofStructure::pushout`] but a missing pushout is an error.
    pub fn require_pushout(&self, f: MorId, g: MorId) -> Result<PushoutSquare> {
        self.pushout(f, g)?.ok_or(Error::MissingPushout {
            cofibration: f,
            along: g,
        })
    }

    /// The cokernel of a cofibration `i: A >-> B`: the pushout along
    /// `A -> 0`, returned as the object and the quotient `B ->> coker`.
    pub fn cokernel(&self, i: MorId) -> Result<(ObjId, MorId)> {
        self.base.check_morphism(i)?;
        if !self.is_cofibration(i) {
            return Err(Error::NotACofibration(i));
        }
        let a = self.base.source(i);
        let sq = self.require_pushout(i, self.to_zero(a))?;
        Ok((sq.corner_d(&self.base), sq.right))
    }

    /// The same data with a different cofibration class.
    pub fn with_cofibrations(&self, cofibrations: impl IntoIterator<Item = MorId>) -> Result<Self> {
        CofStructure::new(self.base.clone(), self.zero, cofibrations)
    }

    /// The fibration structure on the opposite category with the same
    /// morphism ids.
    pub fn dual(&self) -> FibStructure {
        FibStructure {
            base: Arc::new(self.base.opposite()),
            zero: self.zero,
            fibrations: self.cofibrations.clone(),
        }
    }
}

/// A cofibration structure plus weak equivalences.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WaldStructure {
    cof: CofStructure,
    weq: Vec<bool>,
}

impl WaldStructure {
    pub fn new(cof: CofStructure, weq: impl IntoIterator<Item = MorId>) -> Result<Self> {
        let mut table = vec![false; cof.base.morphism_count()];
        for m in weq {
            cof.base.check_morphism(m)?;
            table[m.index()] = true;
        }
        Ok(WaldStructure { cof, weq: table })
    }

    /// Weak equivalences default to the isomorphisms.
    pub fn with_isomorphisms(cof: CofStructure) -> Self {
        let weq = cof
            .base
            .morphism_ids()
            .map(|m| cof.base.is_iso(m))
            .collect();
        WaldStructure { cof, weq }
    }

    pub fn cof(&self) -> &CofStructure {
        &self.cof
    }

    pub fn base(&self) -> &Arc<FinCategory> {
        self.cof.base()
    }

    pub fn is_weq(&self, m: MorId) -> bool {
        self.weq[m.index()]
    }

    pub fn weq_table(&self) -> &[bool] {
        &self.weq
    }
}

/// A pointed finite category with a class of fibrations.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FibStructure {
    base: Arc<FinCategory>,
    zero: ObjId,
    fibrations: Vec<bool>,
}

impl FibStructure {
    pub fn new(
        base: Arc<FinCategory>,
        zero: ObjId,
        fibrations: impl IntoIterator<Item = MorId>,
    ) -> Result<Self> {
        base.check_object(zero)?;
        let mut table = vec![false; base.morphism_count()];
        for m in fibrations {
            base.check_morphism(m)?;
            table[m.index()] = true;
        }
        Ok(FibStructure {
            base,
            zero,
            fibrations: table,
        })
    }

    pub fn base(&self) -> &Arc<FinCategory> {
        &self.base
    }

    pub fn zero(&self) -> ObjId {
        self.zero
    }

    pub fn is_fibration(&self, m: MorId) -> bool {
        self.fibrations[m.index()]
    }

    /// The pullback of `p` along `f`.
    pub fn pullback(&self, p: MorId, f: MorId) -> Result<Option<CommutativeSquare>> {
        find_pullback(&self.base, p, f)
    }

    /// Categories with fibrations are handled by the cofibration code on
    /// the opposite category.
    pub fn dual(&self) -> Result<CofStructure> {
        CofStructure::new(
            Arc::new(self.base.opposite()),
            self.zero,
            self.base.morphism_ids().filter(|&m| self.is_fibration(m)),
        )
    }
}
