use std::collections::BTreeSet;
use std::sync::Arc;

use crate::cofcat::{validate_cof, CofStructure, ValidationMode};
use crate::error::{Error, Result};
use crate::fincat::{pushout_mediator, Embedding, Limits, MorId, ObjId};

/// Objects and morphisms of the ambient category to start the closure from.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Seed {
    pub objects: BTreeSet<ObjId>,
    pub morphisms: BTreeSet<MorId>,
}

impl Seed {
    /// The full subcategory on `objects` plus the zero object.
    pub fn full_on(ambient: &CofStructure, objects: impl IntoIterator<Item = ObjId>) -> Seed {
        let c = ambient.base();
        let mut objs: BTreeSet<ObjId> = objects.into_iter().collect();
        objs.insert(ambient.zero());
        let mut mors = BTreeSet::new();
        for &a in &objs {
            for &b in &objs {
                mors.extend(c.hom(a, b).iter().copied());
            }
        }
        Seed {
            objects: objs,
            morphisms: mors,
        }
    }

    /// `objects` plus the zero object, the given morphisms, and every map
    /// between a seed object and zero.
    pub fn with_zero_maps(
        ambient: &CofStructure,
        objects: impl IntoIterator<Item = ObjId>,
        morphisms: impl IntoIterator<Item = MorId>,
    ) -> Seed {
        let c = ambient.base();
        let mut objs: BTreeSet<ObjId> = objects.into_iter().collect();
        let mors: BTreeSet<MorId> = morphisms.into_iter().collect();
        for &m in &mors {
            objs.insert(c.source(m));
            objs.insert(c.target(m));
        }
        objs.insert(ambient.zero());
        let mut seed = Seed {
            objects: objs,
            morphisms: mors,
        };
        for &x in &seed.objects.clone() {
            seed.morphisms.insert(ambient.from_zero(x));
            seed.morphisms.insert(ambient.to_zero(x));
        }
        seed
    }
}

/// A generated subcategory with cofibrations, renumbered, together with its
/// position in the ambient category.
#[derive(Debug, Clone)]
pub struct Generated {
    pub structure: CofStructure,
    pub embedding: Embedding,
    /// Number of closure rounds until nothing new appeared.
    pub rounds: usize,
}

impl Generated {
    pub fn object_set(&self) -> BTreeSet<ObjId> {
        self.embedding.objects.iter().copied().collect()
    }

    pub fn morphism_set(&self) -> BTreeSet<MorId> {
        self.embedding.morphisms.iter().copied().collect()
    }
}

struct Members {
    objects: Vec<bool>,
    morphisms: Vec<bool>,
    object_list: Vec<ObjId>,
    morphism_list: Vec<MorId>,
}

impl Members {
    fn add_object(&mut self, o: ObjId) -> bool {
        if std::mem::replace(&mut self.objects[o.index()], true) {
            return false;
        }
        self.object_list.push(o);
        true
    }

    fn add_morphism(&mut self, m: MorId) -> bool {
        if std::mem::replace(&mut self.morphisms[m.index()], true) {
            return false;
        }
        self.morphism_list.push(m);
        true
    }
}

fn check_seed(ambient: &CofStructure, seed: &Seed) -> Result<()> {
    let c = ambient.base();
    for &o in &seed.objects {
        c.check_object(o)?;
    }
    for &m in &seed.morphisms {
        c.check_morphism(m)?;
        for end in [c.source(m), c.target(m)] {
            if !seed.objects.contains(&end) {
                return Err(Error::BadSeed(format!(
                    "morphism {} has endpoint {} outside the seed",
                    c.morphism(m).name,
                    c.object_name(end)
                )));
            }
        }
    }
    if !seed.objects.contains(&ambient.zero()) {
        return Err(Error::BadSeed("the zero object is missing".into()));
    }
    if c.hom(ambient.zero(), ambient.zero()).len() != 1 {
        return Err(Error::BadSeed(
            "the ambient zero object is not a zero object".into(),
        ));
    }
    for &x in &seed.objects {
        if c.hom(ambient.zero(), x).len() != 1 || c.hom(x, ambient.zero()).len() != 1 {
            return Err(Error::BadSeed(
                "the ambient zero object is not a zero object".into(),
            ));
        }
        if !seed.morphisms.contains(&ambient.from_zero(x))
            || !seed.morphisms.contains(&ambient.to_zero(x))
        {
            return Err(Error::BadSeed(format!(
                "maps between zero and {} are missing",
                c.object_name(x)
            )));
        }
    }
    Ok(())
}

/// The least subcategory with cofibrations containing the seed: close
/// under identities, composition, zero maps, and chosen ambient pushouts of
/// its cofibrations along its morphisms, until nothing changes.
///
/// Each added pushout also brings its mediating maps to every cocone that
/// already lies in the subcategory, so it stays a pushout there.
pub fn generate_subcategory(ambient: &CofStructure, seed: &Seed) -> Result<Generated> {
    check_seed(ambient, seed)?;
    let c = &**ambient.base();
    let mut mem = Members {
        objects: vec![false; c.object_count()],
        morphisms: vec![false; c.morphism_count()],
        object_list: Vec::new(),
        morphism_list: Vec::new(),
    };
    for &o in &seed.objects {
        mem.add_object(o);
    }
    for &m in &seed.morphisms {
        mem.add_morphism(m);
    }
    let mut rounds = 0;
    loop {
        rounds += 1;
        let mut changed = false;
        for k in 0..mem.object_list.len() {
            let x = mem.object_list[k];
            changed |= mem.add_morphism(c.identity(x));
            changed |= mem.add_morphism(ambient.from_zero(x));
            changed |= mem.add_morphism(ambient.to_zero(x));
        }
        // composition closure; the list grows while we scan it
        let mut k = 0;
        while k < mem.morphism_list.len() {
            let f = mem.morphism_list[k];
            let outs: Vec<MorId> = c
                .out_morphisms(c.target(f))
                .iter()
                .copied()
                .filter(|g| mem.morphisms[g.index()])
                .collect();
            for g in outs {
                changed |= mem.add_morphism(c.compose(g, f));
            }
            let ins: Vec<MorId> = c
                .in_morphisms(c.source(f))
                .iter()
                .copied()
                .filter(|e| mem.morphisms[e.index()])
                .collect();
            for e in ins {
                changed |= mem.add_morphism(c.compose(f, e));
            }
            k += 1;
        }
        let cofs: Vec<MorId> = mem
            .morphism_list
            .iter()
            .copied()
            .filter(|&m| ambient.is_cofibration(m))
            .collect();
        for i in cofs {
            let a = c.source(i);
            let alongs: Vec<MorId> = c
                .out_morphisms(a)
                .iter()
                .copied()
                .filter(|f| mem.morphisms[f.index()])
                .collect();
            for f in alongs {
                let Some(sq) = ambient.pushout(i, f)? else {
                    continue;
                };
                changed |= mem.add_object(sq.corner_d(c));
                changed |= mem.add_morphism(sq.right);
                changed |= mem.add_morphism(sq.bottom);
                let (b, cc) = (c.target(i), c.target(f));
                let targets = mem.object_list.clone();
                for q in targets {
                    for &x in c.hom(b, q) {
                        if !mem.morphisms[x.index()] {
                            continue;
                        }
                        let xi = c.compose(x, i);
                        for &y in c.hom(cc, q) {
                            if mem.morphisms[y.index()] && c.compose(y, f) == xi {
                                let h = pushout_mediator(c, &sq, x, y).ok_or_else(|| {
                                    Error::InvariantBreach("chosen pushout is not universal".into())
                                })?;
                                changed |= mem.add_morphism(h);
                            }
                        }
                    }
                }
            }
        }
        if !changed {
            break;
        }
    }
    let objects: BTreeSet<ObjId> = mem.object_list.iter().copied().collect();
    let morphisms: BTreeSet<MorId> = mem.morphism_list.iter().copied().collect();
    materialize(ambient, &objects, &morphisms, rounds)
}

fn materialize(
    ambient: &CofStructure,
    objects: &BTreeSet<ObjId>,
    morphisms: &BTreeSet<MorId>,
    rounds: usize,
) -> Result<Generated> {
    let c = ambient.base();
    let (sub, embedding) = c.subcategory(objects, morphisms, Limits::internal())?;
    let zero = embedding
        .objects
        .iter()
        .position(|&o| o == ambient.zero())
        .ok_or_else(|| Error::NotASubcategory("zero object missing".into()))?;
    let cofs: Vec<MorId> = embedding
        .morphisms
        .iter()
        .enumerate()
        .filter(|(_, &m)| ambient.is_cofibration(m))
        .map(|(i, _)| MorId(i as u32))
        .collect();
    let structure = CofStructure::new(Arc::new(sub), ObjId(zero as u32), cofs)?;
    Ok(Generated {
        structure,
        embedding,
        rounds,
    })
}

/// Intersects subcategories with cofibrations of `ambient` and validates
/// the result. Each entry's cofibrations must be the ambient cofibrations
/// it contains.
pub fn check_intersection_closed(
    ambient: &CofStructure,
    subs: &[Generated],
    mode: ValidationMode,
) -> Result<bool> {
    let c = ambient.base();
    if subs.is_empty() {
        return Err(Error::InvalidInput("no subcategories to intersect".into()));
    }
    let mut objects: Option<BTreeSet<ObjId>> = None;
    let mut morphisms: Option<BTreeSet<MorId>> = None;
    for g in subs {
        let objs = g.object_set();
        let mors = g.morphism_set();
        c.check_subcategory(&objs, &mors)?;
        let sub = g.structure.base();
        if sub.object_count() != objs.len() || sub.morphism_count() != mors.len() {
            return Err(Error::NotASubcategory(
                "embedding does not match the structure".into(),
            ));
        }
        for (k, &m) in g.embedding.morphisms.iter().enumerate() {
            if g.structure.is_cofibration(MorId(k as u32)) != ambient.is_cofibration(m) {
                return Err(Error::NotASubcategory(format!(
                    "cofibrations of a subcategory disagree with the ambient ones at {}",
                    c.morphism(m).name
                )));
            }
        }
        objects = Some(match objects {
            None => objs,
            Some(o) => o.intersection(&objs).copied().collect(),
        });
        morphisms = Some(match morphisms {
            None => mors,
            Some(m) => m.intersection(&mors).copied().collect(),
        });
    }
    let (objects, morphisms) = (objects.unwrap(), morphisms.unwrap());
    let meet = materialize(ambient, &objects, &morphisms, 0)?;
    Ok(validate_cof(&meet.structure, mode).is_valid())
}
