use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::sync::OnceLock;

use petgraph::unionfind::UnionFind;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Index of an object inside a [`FinCategory`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct ObjId(pub u32);

/// Index of a morphism inside a [`FinCategory`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct MorId(pub u32);

impl ObjId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl MorId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Display for ObjId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "o{}", self.0)
    }
}

impl fmt::Display for MorId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "m{}", self.0)
    }
}

const UNDEFINED: u32 = u32::MAX;

/// Size caps for categories. Exhaustive checks are cubic in the morphism
/// count, so exceeding a cap is a hard error.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Limits {
    pub max_objects: usize,
    pub max_morphisms: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            max_objects: 64,
            max_morphisms: 4096,
        }
    }
}

impl Limits {
    /// Caps used for categories the library builds itself (S_n categories,
    /// 2-limits), which are allowed to grow past the input caps.
    pub fn internal() -> Self {
        Limits {
            max_objects: 1 << 16,
            max_morphisms: 1 << 22,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MorphismRecord {
    pub name: String,
    pub source: ObjId,
    pub target: ObjId,
}

/// An explicit finite category: objects, morphisms with endpoints, an
/// identity per object and a (partial) composition table.
///
/// Composition is stored per morphism `f` as a row indexed by the
/// out-morphisms of `target(f)`, so the table holds exactly one slot per
/// composable pair. Slots the input left undefined stay undefined and are
/// reported by [`FinCategory::validate`].
#[derive(Debug)]
pub struct FinCategory {
    object_names: Vec<String>,
    ranks: Vec<Option<i64>>,
    morphisms: Vec<MorphismRecord>,
    identities: Vec<MorId>,
    // out-morphisms of each object sorted by (target, id)
    out: Vec<Vec<MorId>>,
    into: Vec<Vec<MorId>>,
    out_pos: Vec<u32>,
    comp_offset: Vec<usize>,
    comp: Vec<u32>,
    inverses: OnceLock<Vec<Option<MorId>>>,
    iso_classes: OnceLock<Vec<u32>>,
}

impl Clone for FinCategory {
    fn clone(&self) -> Self {
        FinCategory {
            object_names: self.object_names.clone(),
            ranks: self.ranks.clone(),
            morphisms: self.morphisms.clone(),
            identities: self.identities.clone(),
            out: self.out.clone(),
            into: self.into.clone(),
            out_pos: self.out_pos.clone(),
            comp_offset: self.comp_offset.clone(),
            comp: self.comp.clone(),
            inverses: OnceLock::new(),
            iso_classes: OnceLock::new(),
        }
    }
}

impl PartialEq for FinCategory {
    fn eq(&self, other: &Self) -> bool {
        self.object_names == other.object_names
            && self.ranks == other.ranks
            && self.morphisms == other.morphisms
            && self.identities == other.identities
            && self.composition_entries() == other.composition_entries()
    }
}

impl Eq for FinCategory {}

/// Incremental construction of a [`FinCategory`].
#[derive(Debug, Default, Clone)]
pub struct FinCategoryBuilder {
    object_names: Vec<String>,
    ranks: Vec<Option<i64>>,
    morphisms: Vec<MorphismRecord>,
    identities: Vec<Option<MorId>>,
    compose: Vec<(MorId, MorId, MorId)>,
    fill_identity_laws: bool,
}

impl FinCategoryBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    /// Composites with an identity that were not given explicitly are
    /// filled in by the identity laws.
    pub fn fill_identity_laws(mut self, yes: bool) -> Self {
        self.fill_identity_laws = yes;
        self
    }

    pub fn add_object(&mut self, name: impl Into<String>, rank: Option<i64>) -> ObjId {
        let id = ObjId(self.object_names.len() as u32);
        self.object_names.push(name.into());
        self.ranks.push(rank);
        self.identities.push(None);
        id
    }

    pub fn add_morphism(&mut self, name: impl Into<String>, source: ObjId, target: ObjId) -> MorId {
        let id = MorId(self.morphisms.len() as u32);
        self.morphisms.push(MorphismRecord {
            name: name.into(),
            source,
            target,
        });
        id
    }

    /// Adds a fresh morphism and declares it the identity of `obj`.
    pub fn add_identity(&mut self, obj: ObjId) -> MorId {
        let name = format!("id_{}", self.object_names[obj.index()]);
        let id = self.add_morphism(name, obj, obj);
        self.identities[obj.index()] = Some(id);
        id
    }

    pub fn set_identity(&mut self, obj: ObjId, mor: MorId) {
        if let Some(slot) = self.identities.get_mut(obj.index()) {
            *slot = Some(mor);
        }
    }

    /// Records `g . f = h`.
    pub fn set_compose(&mut self, g: MorId, f: MorId, h: MorId) {
        self.compose.push((g, f, h));
    }

    pub fn object_count(&self) -> usize {
        self.object_names.len()
    }

    pub fn morphism_count(&self) -> usize {
        self.morphisms.len()
    }

    pub fn build(self, limits: Limits) -> Result<FinCategory> {
        let n_obj = self.object_names.len();
        let n_mor = self.morphisms.len();
        if n_obj > limits.max_objects {
            return Err(Error::CapExceeded {
                what: "objects",
                actual: n_obj,
                limit: limits.max_objects,
            });
        }
        if n_mor > limits.max_morphisms {
            return Err(Error::CapExceeded {
                what: "morphisms",
                actual: n_mor,
                limit: limits.max_morphisms,
            });
        }
        for rec in &self.morphisms {
            for o in [rec.source, rec.target] {
                if o.index() >= n_obj {
                    return Err(Error::UnknownObject(o));
                }
            }
        }
        let mut identities = Vec::with_capacity(n_obj);
        for (i, id) in self.identities.iter().enumerate() {
            let obj = ObjId(i as u32);
            match id {
                Some(m) if m.index() < n_mor => {
                    let rec = &self.morphisms[m.index()];
                    if rec.source != obj || rec.target != obj {
                        return Err(Error::BadIdentity(obj));
                    }
                    identities.push(*m);
                }
                _ => return Err(Error::BadIdentity(obj)),
            }
        }

        let mut out: Vec<Vec<MorId>> = vec![Vec::new(); n_obj];
        let mut into: Vec<Vec<MorId>> = vec![Vec::new(); n_obj];
        for (i, rec) in self.morphisms.iter().enumerate() {
            out[rec.source.index()].push(MorId(i as u32));
            into[rec.target.index()].push(MorId(i as u32));
        }
        for list in out.iter_mut() {
            list.sort_by_key(|m| (self.morphisms[m.index()].target, *m));
        }
        let mut out_pos = vec![0u32; n_mor];
        for list in &out {
            for (p, m) in list.iter().enumerate() {
                out_pos[m.index()] = p as u32;
            }
        }
        let mut comp_offset = Vec::with_capacity(n_mor);
        let mut total = 0usize;
        for rec in &self.morphisms {
            comp_offset.push(total);
            total += out[rec.target.index()].len();
        }
        let mut comp = vec![UNDEFINED; total];

        for &(g, f, h) in &self.compose {
            for m in [g, f, h] {
                if m.index() >= n_mor {
                    return Err(Error::UnknownMorphism(m));
                }
            }
            let (rf, rg, rh) = (
                &self.morphisms[f.index()],
                &self.morphisms[g.index()],
                &self.morphisms[h.index()],
            );
            if rf.target != rg.source {
                return Err(Error::IllTypedComposition {
                    g,
                    f,
                    h,
                    reason: "target(f) differs from source(g)",
                });
            }
            if rh.source != rf.source || rh.target != rg.target {
                return Err(Error::IllTypedComposition {
                    g,
                    f,
                    h,
                    reason: "composite has the wrong endpoints",
                });
            }
            comp[comp_offset[f.index()] + out_pos[g.index()] as usize] = h.0;
        }

        if self.fill_identity_laws {
            for (i, rec) in self.morphisms.iter().enumerate() {
                let f = MorId(i as u32);
                let left = identities[rec.target.index()];
                let right = identities[rec.source.index()];
                let slot = comp_offset[f.index()] + out_pos[left.index()] as usize;
                if comp[slot] == UNDEFINED {
                    comp[slot] = f.0;
                }
                let slot = comp_offset[right.index()] + out_pos[f.index()] as usize;
                if comp[slot] == UNDEFINED {
                    comp[slot] = f.0;
                }
            }
        }

        Ok(FinCategory {
            object_names: self.object_names,
            ranks: self.ranks,
            morphisms: self.morphisms,
            identities,
            out,
            into,
            out_pos,
            comp_offset,
            comp,
            inverses: OnceLock::new(),
            iso_classes: OnceLock::new(),
        })
    }
}

/// One violated category axiom.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum CategoryViolation {
    MissingComposite { g: MorId, f: MorId },
    LeftIdentity { f: MorId },
    RightIdentity { f: MorId },
    Associativity { h: MorId, g: MorId, f: MorId },
}

impl fmt::Display for CategoryViolation {
    fn fmt(&self, fm: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CategoryViolation::MissingComposite { g, f } => {
                write!(fm, "composition undefined for {g} . {f}")
            }
            CategoryViolation::LeftIdentity { f } => write!(fm, "left identity at {f}"),
            CategoryViolation::RightIdentity { f } => write!(fm, "right identity at {f}"),
            CategoryViolation::Associativity { h, g, f } => {
                write!(fm, "associativity fails for ({h}, {g}, {f})")
            }
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub violations: Vec<CategoryViolation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

impl FinCategory {
    /// Builds a category from a total composition function. The function is
    /// only called on composable pairs.
    pub fn from_fn(
        objects: Vec<(String, Option<i64>)>,
        morphisms: Vec<MorphismRecord>,
        identities: Vec<MorId>,
        limits: Limits,
        compose: impl Fn(MorId, MorId) -> MorId,
    ) -> Result<FinCategory> {
        let mut b = FinCategoryBuilder::new();
        for (name, rank) in objects {
            b.add_object(name, rank);
        }
        let n_obj = b.object_count();
        for rec in morphisms {
            if rec.source.index() >= n_obj {
                return Err(Error::UnknownObject(rec.source));
            }
            if rec.target.index() >= n_obj {
                return Err(Error::UnknownObject(rec.target));
            }
            b.add_morphism(rec.name, rec.source, rec.target);
        }
        for (i, m) in identities.iter().enumerate() {
            b.set_identity(ObjId(i as u32), *m);
        }
        // pre-size checks live in build(); do composition last
        let recs: Vec<(ObjId, ObjId)> = b.morphisms.iter().map(|r| (r.source, r.target)).collect();
        if recs.len() > limits.max_morphisms {
            return Err(Error::CapExceeded {
                what: "morphisms",
                actual: recs.len(),
                limit: limits.max_morphisms,
            });
        }
        let mut by_source: Vec<Vec<MorId>> = vec![Vec::new(); n_obj];
        for (i, (s, _)) in recs.iter().enumerate() {
            by_source[s.index()].push(MorId(i as u32));
        }
        for (i, (_, t)) in recs.iter().enumerate() {
            let f = MorId(i as u32);
            for &g in &by_source[t.index()] {
                b.set_compose(g, f, compose(g, f));
            }
        }
        b.build(limits)
    }

    /// The poset category on `0..n` where `leq(x, y)` holds. One morphism
    /// per related pair, named `x<=y`.
    pub fn poset(names: Vec<String>, leq: impl Fn(usize, usize) -> bool) -> Result<FinCategory> {
        let n = names.len();
        let mut b = FinCategoryBuilder::new();
        for name in &names {
            b.add_object(name.clone(), None);
        }
        let mut pair_id: HashMap<(usize, usize), MorId> = HashMap::new();
        for x in 0..n {
            for y in 0..n {
                if leq(x, y) {
                    let id = b.add_morphism(
                        format!("{}<={}", names[x], names[y]),
                        ObjId(x as u32),
                        ObjId(y as u32),
                    );
                    pair_id.insert((x, y), id);
                    if x == y {
                        b.set_identity(ObjId(x as u32), id);
                    }
                }
            }
        }
        for (&(x, y), &f) in &pair_id {
            for z in 0..n {
                if let Some(&g) = pair_id.get(&(y, z)) {
                    let h = *pair_id.get(&(x, z)).ok_or_else(|| {
                        Error::InvalidInput(format!("relation is not transitive at {x}<={y}<={z}"))
                    })?;
                    b.set_compose(g, f, h);
                }
            }
        }
        b.build(Limits::internal())
    }

    pub fn object_count(&self) -> usize {
        self.object_names.len()
    }

    pub fn morphism_count(&self) -> usize {
        self.morphisms.len()
    }

    pub fn objects(&self) -> impl Iterator<Item = ObjId> + '_ {
        (0..self.object_names.len() as u32).map(ObjId)
    }

    pub fn morphism_ids(&self) -> impl Iterator<Item = MorId> + '_ {
        (0..self.morphisms.len() as u32).map(MorId)
    }

    pub fn object_name(&self, o: ObjId) -> &str {
        &self.object_names[o.index()]
    }

    pub fn rank(&self, o: ObjId) -> Option<i64> {
        self.ranks[o.index()]
    }

    pub fn morphism(&self, m: MorId) -> &MorphismRecord {
        &self.morphisms[m.index()]
    }

    pub fn morphisms(&self) -> &[MorphismRecord] {
        &self.morphisms
    }

    pub fn source(&self, m: MorId) -> ObjId {
        self.morphisms[m.index()].source
    }

    pub fn target(&self, m: MorId) -> ObjId {
        self.morphisms[m.index()].target
    }

    pub fn identity(&self, o: ObjId) -> MorId {
        self.identities[o.index()]
    }

    pub fn identities(&self) -> &[MorId] {
        &self.identities
    }

    pub fn is_identity(&self, m: MorId) -> bool {
        self.identities[self.source(m).index()] == m
    }

    pub fn has_object(&self, o: ObjId) -> bool {
        o.index() < self.object_names.len()
    }

    pub fn has_morphism(&self, m: MorId) -> bool {
        m.index() < self.morphisms.len()
    }

    pub fn check_object(&self, o: ObjId) -> Result<()> {
        if self.has_object(o) {
            Ok(())
        } else {
            Err(Error::UnknownObject(o))
        }
    }

    pub fn check_morphism(&self, m: MorId) -> Result<()> {
        if self.has_morphism(m) {
            Ok(())
        } else {
            Err(Error::UnknownMorphism(m))
        }
    }

    /// Morphisms with source `o`, sorted by target then id.
    pub fn out_morphisms(&self, o: ObjId) -> &[MorId] {
        &self.out[o.index()]
    }

    /// Morphisms with target `o`, sorted by id.
    pub fn in_morphisms(&self, o: ObjId) -> &[MorId] {
        &self.into[o.index()]
    }

    /// Hom(a, b), sorted by id.
    pub fn hom(&self, a: ObjId, b: ObjId) -> &[MorId] {
        let list = &self.out[a.index()];
        let lo = list.partition_point(|m| self.target(*m) < b);
        let hi = list.partition_point(|m| self.target(*m) <= b);
        &list[lo..hi]
    }

    /// `g . f` if defined.
    pub fn try_compose(&self, g: MorId, f: MorId) -> Option<MorId> {
        if self.target(f) != self.source(g) {
            return None;
        }
        let v = self.comp[self.comp_offset[f.index()] + self.out_pos[g.index()] as usize];
        (v != UNDEFINED).then_some(MorId(v))
    }

    /// `g . f`. Panics when the pair is not composable or the table has a
    /// hole; every algorithm runs on validated categories only.
    pub fn compose(&self, g: MorId, f: MorId) -> MorId {
        match self.try_compose(g, f) {
            Some(h) => h,
            None => panic!("composition {g} . {f} undefined"),
        }
    }

    /// Composes a path given in diagrammatic order reversed: `compose_all(&[h, g, f]) = h . g . f`.
    pub fn compose_all(&self, path: &[MorId]) -> MorId {
        let mut it = path.iter().rev();
        let mut acc = *it.next().expect("empty path");
        for &m in it {
            acc = self.compose(m, acc);
        }
        acc
    }

    /// All defined entries `(g, f, g . f)` in a canonical order.
    pub fn composition_entries(&self) -> Vec<(MorId, MorId, MorId)> {
        let mut v = Vec::new();
        for f in self.morphism_ids() {
            for &g in self.out_morphisms(self.target(f)) {
                if let Some(h) = self.try_compose(g, f) {
                    v.push((g, f, h));
                }
            }
        }
        v.sort();
        v
    }

    /// Checks identity laws, associativity and closure of composition.
    pub fn validate(&self) -> ValidationReport {
        let mut violations = Vec::new();
        for f in self.morphism_ids() {
            for &g in self.out_morphisms(self.target(f)) {
                if self.try_compose(g, f).is_none() {
                    violations.push(CategoryViolation::MissingComposite { g, f });
                }
            }
        }
        for f in self.morphism_ids() {
            let left = self.identity(self.target(f));
            let right = self.identity(self.source(f));
            if let Some(h) = self.try_compose(left, f) {
                if h != f {
                    violations.push(CategoryViolation::LeftIdentity { f });
                }
            }
            if let Some(h) = self.try_compose(f, right) {
                if h != f {
                    violations.push(CategoryViolation::RightIdentity { f });
                }
            }
        }
        for f in self.morphism_ids() {
            for &g in self.out_morphisms(self.target(f)) {
                let Some(gf) = self.try_compose(g, f) else {
                    continue;
                };
                for &h in self.out_morphisms(self.target(g)) {
                    let (Some(hg), Some(h_gf)) = (self.try_compose(h, g), self.try_compose(h, gf))
                    else {
                        continue;
                    };
                    match self.try_compose(hg, f) {
                        Some(hg_f) if hg_f == h_gf => {}
                        Some(_) => violations.push(CategoryViolation::Associativity { h, g, f }),
                        None => {}
                    }
                }
            }
        }
        ValidationReport { violations }
    }

    fn inverse_table(&self) -> &[Option<MorId>] {
        self.inverses.get_or_init(|| {
            self.morphism_ids()
                .map(|f| {
                    let (a, b) = (self.source(f), self.target(f));
                    self.hom(b, a).iter().copied().find(|&g| {
                        self.try_compose(g, f) == Some(self.identity(a))
                            && self.try_compose(f, g) == Some(self.identity(b))
                    })
                })
                .collect()
        })
    }

    /// Two-sided inverse of `f`, if any.
    pub fn inverse(&self, f: MorId) -> Option<MorId> {
        self.inverse_table()[f.index()]
    }

    pub fn is_isomorphism(&self, f: MorId) -> Result<bool> {
        self.check_morphism(f)?;
        Ok(self.inverse(f).is_some())
    }

    /// True iff `f` is invertible. Assumes `f` is a valid id.
    pub fn is_iso(&self, f: MorId) -> bool {
        self.inverse(f).is_some()
    }

    pub fn isomorphisms(&self, a: ObjId, b: ObjId) -> Vec<MorId> {
        self.hom(a, b)
            .iter()
            .copied()
            .filter(|&f| self.is_iso(f))
            .collect()
    }

    /// Class label of each object under isomorphism. Labels are the smallest
    /// object id in the class.
    pub fn object_iso_classes(&self) -> &[u32] {
        self.iso_classes.get_or_init(|| {
            let n = self.object_count();
            let mut uf = UnionFind::<usize>::new(n);
            for f in self.morphism_ids() {
                if self.is_iso(f) {
                    uf.union(self.source(f).index(), self.target(f).index());
                }
            }
            let mut smallest = vec![u32::MAX; n];
            for o in 0..n {
                let r = uf.find(o);
                smallest[r] = smallest[r].min(o as u32);
            }
            (0..n).map(|o| smallest[uf.find(o)]).collect()
        })
    }

    pub fn objects_isomorphic(&self, a: ObjId, b: ObjId) -> bool {
        let c = self.object_iso_classes();
        c[a.index()] == c[b.index()]
    }

    /// The opposite category. Object and morphism ids are preserved.
    pub fn opposite(&self) -> FinCategory {
        let out: Vec<Vec<MorId>> = self.into.clone();
        let mut into: Vec<Vec<MorId>> = vec![Vec::new(); self.object_count()];
        let morphisms: Vec<MorphismRecord> = self
            .morphisms
            .iter()
            .map(|r| MorphismRecord {
                name: r.name.clone(),
                source: r.target,
                target: r.source,
            })
            .collect();
        for (i, r) in morphisms.iter().enumerate() {
            into[r.target.index()].push(MorId(i as u32));
        }
        let mut out = out;
        for list in out.iter_mut() {
            list.sort_by_key(|m| (morphisms[m.index()].target, *m));
        }
        let mut out_pos = vec![0u32; morphisms.len()];
        for list in &out {
            for (p, m) in list.iter().enumerate() {
                out_pos[m.index()] = p as u32;
            }
        }
        let mut comp_offset = Vec::with_capacity(morphisms.len());
        let mut total = 0usize;
        for r in &morphisms {
            comp_offset.push(total);
            total += out[r.target.index()].len();
        }
        let mut comp = vec![UNDEFINED; total];
        // in the opposite, g .op f = f . g
        for (i, r) in morphisms.iter().enumerate() {
            let f = MorId(i as u32);
            for &g in &out[r.target.index()] {
                if let Some(h) = self.try_compose(f, g) {
                    comp[comp_offset[f.index()] + out_pos[g.index()] as usize] = h.0;
                }
            }
        }
        FinCategory {
            object_names: self.object_names.clone(),
            ranks: self.ranks.clone(),
            morphisms,
            identities: self.identities.clone(),
            out,
            into,
            out_pos,
            comp_offset,
            comp,
            inverses: OnceLock::new(),
            iso_classes: OnceLock::new(),
        }
    }

    /// Checks that `objects`/`morphisms` form a subcategory: endpoints
    /// present, identities present, closed under composition.
    pub fn check_subcategory(
        &self,
        objects: &BTreeSet<ObjId>,
        morphisms: &BTreeSet<MorId>,
    ) -> Result<()> {
        for &o in objects {
            self.check_object(o)?;
            if !morphisms.contains(&self.identity(o)) {
                return Err(Error::NotASubcategory(format!("identity of {o} missing")));
            }
        }
        for &m in morphisms {
            self.check_morphism(m)?;
            if !objects.contains(&self.source(m)) || !objects.contains(&self.target(m)) {
                return Err(Error::NotASubcategory(format!("endpoint of {m} missing")));
            }
        }
        for &f in morphisms {
            for &g in self.out_morphisms(self.target(f)) {
                if morphisms.contains(&g) && !morphisms.contains(&self.compose(g, f)) {
                    return Err(Error::NotASubcategory(format!(
                        "composite {g} . {f} missing"
                    )));
                }
            }
        }
        Ok(())
    }

    /// Materializes a subcategory with fresh, order-preserving ids.
    pub fn subcategory(
        &self,
        objects: &BTreeSet<ObjId>,
        morphisms: &BTreeSet<MorId>,
        limits: Limits,
    ) -> Result<(FinCategory, Embedding)> {
        self.check_subcategory(objects, morphisms)?;
        let obj_list: Vec<ObjId> = objects.iter().copied().collect();
        let mor_list: Vec<MorId> = morphisms.iter().copied().collect();
        let obj_new: HashMap<ObjId, ObjId> = obj_list
            .iter()
            .enumerate()
            .map(|(i, o)| (*o, ObjId(i as u32)))
            .collect();
        let mor_new: HashMap<MorId, MorId> = mor_list
            .iter()
            .enumerate()
            .map(|(i, m)| (*m, MorId(i as u32)))
            .collect();
        let cat = FinCategory::from_fn(
            obj_list
                .iter()
                .map(|o| (self.object_name(*o).to_string(), self.rank(*o)))
                .collect(),
            mor_list
                .iter()
                .map(|m| {
                    let r = self.morphism(*m);
                    MorphismRecord {
                        name: r.name.clone(),
                        source: obj_new[&r.source],
                        target: obj_new[&r.target],
                    }
                })
                .collect(),
            obj_list
                .iter()
                .map(|o| mor_new[&self.identity(*o)])
                .collect(),
            limits,
            |g, f| mor_new[&self.compose(mor_list[g.index()], mor_list[f.index()])],
        )?;
        Ok((
            cat,
            Embedding {
                objects: obj_list,
                morphisms: mor_list,
            },
        ))
    }
}

/// Records where the objects and morphisms of a subcategory live in the
/// ambient category (`objects[new] = old`).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Embedding {
    pub objects: Vec<ObjId>,
    pub morphisms: Vec<MorId>,
}

#[cfg(test)]
mod tests {
    use super::*;

    fn one_object() -> FinCategory {
        let mut b = FinCategoryBuilder::new();
        let x = b.add_object("x", None);
        let id = b.add_identity(x);
        b.set_compose(id, id, id);
        b.build(Limits::default()).unwrap()
    }

    /// Two objects, 0 -> x with a single arrow, plus identities.
    fn arrow() -> FinCategory {
        FinCategory::poset(vec!["a".into(), "b".into()], |x, y| x <= y).unwrap()
    }

    #[test]
    fn identity_only_category_is_valid() {
        let c = one_object();
        assert!(c.validate().is_valid());
        assert!(c.is_isomorphism(MorId(0)).unwrap());
    }

    #[test]
    fn wrong_identity_entry_is_reported() {
        let mut b = FinCategoryBuilder::new();
        let x = b.add_object("x", None);
        let id = b.add_identity(x);
        let e = b.add_morphism("e", x, x);
        b.set_compose(id, id, id);
        b.set_compose(id, e, id); // should be e
        b.set_compose(e, id, e);
        b.set_compose(e, e, e);
        let c = b.build(Limits::default()).unwrap();
        let report = c.validate();
        assert!(report
            .violations
            .contains(&CategoryViolation::LeftIdentity { f: e }));
        assert_eq!(report.violations[0].to_string(), "left identity at m1");
    }

    #[test]
    fn holes_in_the_table_are_reported() {
        let mut b = FinCategoryBuilder::new();
        let x = b.add_object("x", None);
        let id = b.add_identity(x);
        let e = b.add_morphism("e", x, x);
        let c = b.fill_identity_laws(true).build(Limits::default()).unwrap();
        let _ = id;
        assert_eq!(
            c.validate().violations,
            vec![CategoryViolation::MissingComposite { g: e, f: e }]
        );
    }

    #[test]
    fn non_invertible_arrow() {
        let c = arrow();
        let f = c.hom(ObjId(0), ObjId(1))[0];
        assert!(!c.is_isomorphism(f).unwrap());
        assert!(c.is_isomorphism(MorId(99)).is_err());
    }

    #[test]
    fn cap_is_a_hard_error() {
        let mut b = FinCategoryBuilder::new();
        for i in 0..3 {
            let o = b.add_object(format!("{i}"), None);
            b.add_identity(o);
        }
        let err = b
            .fill_identity_laws(true)
            .build(Limits {
                max_objects: 2,
                max_morphisms: 10,
            })
            .unwrap_err();
        assert!(matches!(
            err,
            Error::CapExceeded {
                what: "objects",
                ..
            }
        ));
    }

    #[test]
    fn opposite_is_an_involution() {
        let c = arrow();
        assert_eq!(c.opposite().opposite(), c);
        let op = c.opposite();
        assert!(op.validate().is_valid());
        assert_eq!(op.hom(ObjId(1), ObjId(0)).len(), 1);
    }

    #[test]
    fn hom_sets_are_sorted_slices() {
        let c = FinCategory::poset((0..4).map(|i| i.to_string()).collect(), |x, y| x <= y).unwrap();
        assert!(c.validate().is_valid());
        for a in c.objects() {
            for b in c.objects() {
                let h = c.hom(a, b);
                assert_eq!(h.len(), usize::from(a <= b));
            }
        }
    }
}
