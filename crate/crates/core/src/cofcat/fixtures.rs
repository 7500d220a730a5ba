//! Bundled categories with cofibrations.

use std::sync::Arc;

use crate::cofcat::{CofStructure, ValidationMode};
use crate::error::{Error, Result};
use crate::fincat::{FinCategory, FinCategoryBuilder, Limits, MorId, MorphismRecord, ObjId};

/// The category with a single object, which is zero.
pub fn zero_category() -> CofStructure {
    let mut b = FinCategoryBuilder::new();
    let z = b.add_object("0", Some(0));
    let id = b.add_identity(z);
    b.set_compose(id, id, id);
    let c = Arc::new(b.build(Limits::default()).expect("one object"));
    CofStructure::new(c, ObjId(0), [MorId(0)]).expect("ids exist")
}

/// A based map `{0,1..m} -> {0,1..m'}` as the images of `1..=m`.
fn based_maps(m: usize, target: usize) -> Vec<Vec<u8>> {
    let mut out = Vec::new();
    let mut cur = vec![0u8; m];
    loop {
        out.push(cur.clone());
        let mut k = m;
        loop {
            if k == 0 {
                return out;
            }
            k -= 1;
            if (cur[k] as usize) < target {
                cur[k] += 1;
                for x in cur.iter_mut().skip(k + 1) {
                    *x = 0;
                }
                break;
            }
        }
    }
}

fn is_injective(f: &[u8]) -> bool {
    let mut seen = 0u64;
    for &v in f {
        if v == 0 || seen & (1 << v) != 0 {
            return false;
        }
        seen |= 1 << v;
    }
    true
}

/// Based finite sets. Objects are given by their number of non-base
/// elements (one object per entry of `sizes`); every based map is a
/// morphism and the cofibrations are the injections.
pub fn based_sets(sizes: &[usize], names: &[String], limits: Limits) -> Result<CofStructure> {
    if sizes.len() != names.len() || sizes.is_empty() || sizes[0] != 0 {
        return Err(Error::InvalidInput(
            "the first object must be the one-point set".into(),
        ));
    }
    if sizes.iter().any(|&s| s > 8) {
        return Err(Error::InvalidInput(
            "based sets are limited to 8 elements".into(),
        ));
    }
    let n = sizes.len();
    let mut records = Vec::new();
    let mut tables: Vec<Vec<u8>> = Vec::new();
    // hom index: (source, target) -> first id; maps are enumerated in
    // lexicographic order so the id is first + rank of the image word
    let mut first = vec![vec![0usize; n]; n];
    for s in 0..n {
        for t in 0..n {
            first[s][t] = records.len();
            for f in based_maps(sizes[s], sizes[t]) {
                let word: String = f.iter().map(|v| char::from(b'0' + v)).collect();
                records.push(MorphismRecord {
                    name: format!(
                        "{}->{}:{}",
                        names[s],
                        names[t],
                        if word.is_empty() { "-".into() } else { word }
                    ),
                    source: ObjId(s as u32),
                    target: ObjId(t as u32),
                });
                tables.push(f);
            }
        }
    }
    if records.len() > limits.max_morphisms {
        return Err(Error::CapExceeded {
            what: "morphisms",
            actual: records.len(),
            limit: limits.max_morphisms,
        });
    }
    let lookup = |s: usize, t: usize, f: &[u8]| -> MorId {
        let base = sizes[t] + 1;
        let mut r = 0usize;
        for &v in f {
            r = r * base + v as usize;
        }
        MorId((first[s][t] + r) as u32)
    };
    let identities: Vec<MorId> = (0..n)
        .map(|s| lookup(s, s, &(1..=sizes[s] as u8).collect::<Vec<_>>()))
        .collect();
    let objects = (0..n)
        .map(|i| (names[i].clone(), Some(sizes[i] as i64)))
        .collect();
    let cat = FinCategory::from_fn(objects, records.clone(), identities, limits, |g, f| {
        let (rf, rg) = (&records[f.index()], &records[g.index()]);
        let (tf, tg) = (&tables[f.index()], &tables[g.index()]);
        let h: Vec<u8> = tf
            .iter()
            .map(|&v| if v == 0 { 0 } else { tg[v as usize - 1] })
            .collect();
        lookup(rf.source.index(), rg.target.index(), &h)
    })?;
    let cofs: Vec<MorId> = (0..tables.len())
        .filter(|&i| is_injective(&tables[i]))
        .map(|i| MorId(i as u32))
        .collect();
    CofStructure::new(Arc::new(cat), ObjId(0), cofs)
}

/// The skeletal category of based finite sets with at most `k` non-base
/// elements, cofibrations the injections, ranks the sizes.
pub fn pointed_sets(k: usize) -> Result<CofStructure> {
    let sizes: Vec<usize> = (0..=k).collect();
    let names: Vec<String> = sizes.iter().map(|s| s.to_string()).collect();
    based_sets(&sizes, &names, Limits::default())
}

/// A non-skeletal variant with `copies` isomorphic objects of each nonzero
/// size up to `k`.
pub fn pointed_sets_with_copies(k: usize, copies: usize) -> Result<CofStructure> {
    let mut sizes = vec![0];
    let mut names = vec!["0".to_string()];
    for s in 1..=k {
        for c in 0..copies {
            sizes.push(s);
            names.push(format!("{s}{}", char::from(b'a' + c as u8)));
        }
    }
    based_sets(&sizes, &names, Limits::default())
}

/// Objects `0, A, X, Y` with a cofibration `a: A >-> X`, an idempotent
/// `e: X -> X` fixing `a`, and `q: X -> Y` killing `a` and `e`. Every other
/// map is zero. `q` is the cokernel of `a` but has no kernel, so the
/// extension property fails at `(a, q, 0 >-> Y)`. Valid in bounded mode
/// with `max_rank = 1`.
pub fn kernel_free() -> CofStructure {
    let objects = vec![
        ("0".to_string(), Some(0)),
        ("A".to_string(), Some(1)),
        ("X".to_string(), Some(2)),
        ("Y".to_string(), Some(1)),
    ];
    // (name, source, target); zero maps are named "0:st"
    let mut records: Vec<MorphismRecord> = Vec::new();
    let mut zero = vec![vec![MorId(0); 4]; 4];
    let names = ["0", "A", "X", "Y"];
    let rec = |name: String, s: usize, t: usize| MorphismRecord {
        name,
        source: ObjId(s as u32),
        target: ObjId(t as u32),
    };
    let mut ids = vec![MorId(0); 4];
    for s in 0..4 {
        for t in 0..4 {
            zero[s][t] = MorId(records.len() as u32);
            if s == 0 && t == 0 {
                ids[0] = zero[0][0];
            }
            records.push(rec(format!("0:{}{}", names[s], names[t]), s, t));
        }
    }
    let mut extra = |name: &str, s: usize, t: usize| {
        records.push(rec(name.to_string(), s, t));
        MorId(records.len() as u32 - 1)
    };
    for (k, id) in ids.iter_mut().enumerate().skip(1) {
        *id = extra(&format!("id{}", names[k]), k, k);
    }
    let a = extra("a", 1, 2);
    let e = extra("e", 2, 2);
    extra("q", 2, 3);
    let ends: Vec<(usize, usize)> = records
        .iter()
        .map(|r| (r.source.index(), r.target.index()))
        .collect();
    let identity = ids.clone();
    let compose = move |g: MorId, f: MorId| -> MorId {
        let (s, _) = ends[f.index()];
        let (_, t) = ends[g.index()];
        if identity.contains(&g) {
            return f;
        }
        if identity.contains(&f) {
            return g;
        }
        match (g, f) {
            _ if g == e && f == a => a,
            _ if g == e && f == e => e,
            _ => zero[s][t],
        }
    };
    let cat = FinCategory::from_fn(objects, records, ids, Limits::default(), compose)
        .expect("composition is total");
    let c = Arc::new(cat);
    let cofs: Vec<MorId> = c
        .morphism_ids()
        .filter(|&m| c.is_identity(m) || c.source(m) == ObjId(0) || m == a)
        .collect();
    CofStructure::new(c, ObjId(0), cofs).expect("ids exist")
}

/// Decodes the based-map word of a morphism built by [`based_sets`].
pub fn based_map_images(c: &FinCategory, m: MorId) -> Option<Vec<u8>> {
    let name = &c.morphism(m).name;
    let word = name.rsplit(':').next()?;
    if word == "-" {
        return Some(Vec::new());
    }
    word.bytes().map(|b| b.checked_sub(b'0')).collect()
}

/// Names accepted by [`by_name`].
/// Names accepted by [`by_name`], besides the `psKxC` family.
pub const FIXTURE_NAMES: &[&str] = &["z", "ps1", "ps2", "ps3", "ps4", "ps2x2", "kernel-free"];

/// A named fixture with the validation mode it is valid in. `psK` is
/// [`pointed_sets`] in bounded mode at rank `K`, and `psKxC` is
/// [`pointed_sets_with_copies`]`(K, C)` in the same mode.
pub fn by_name(name: &str) -> Result<(CofStructure, ValidationMode)> {
    let unknown = || {
        Error::InvalidInput(format!(
            "unknown fixture {name:?} (known: {}, psKxC)",
            FIXTURE_NAMES.join(", ")
        ))
    };
    let bounded = |k: usize| ValidationMode::Bounded { max_rank: k as i64 };
    match name {
        "z" => return Ok((zero_category(), ValidationMode::Strict)),
        "kernel-free" => return Ok((kernel_free(), bounded(1))),
        _ => {}
    }
    let rest = name.strip_prefix("ps").ok_or_else(unknown)?;
    let (k, copies) = match rest.split_once('x') {
        None => (rest.parse::<usize>().ok(), Some(1)),
        Some((k, c)) => (k.parse().ok(), c.parse().ok()),
    };
    match (k, copies) {
        (Some(k @ 1..=4), Some(1)) => Ok((pointed_sets(k)?, bounded(k))),
        (Some(k @ 1..=3), Some(c @ 1..=4)) => Ok((pointed_sets_with_copies(k, c)?, bounded(k))),
        _ => Err(unknown()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pointed_sets_sizes() {
        let ps2 = pointed_sets(2).unwrap();
        // sum over (s, t) of (t + 1)^s
        assert_eq!(ps2.base().morphism_count(), 3 + (1 + 2 + 3) + (1 + 4 + 9));
        assert!(ps2.base().validate().is_valid());
        let ps3 = pointed_sets(3).unwrap();
        assert_eq!(ps3.base().morphism_count(), 4 + 10 + 30 + 100);
        assert_eq!(ps3.cofibrations().len(), 4 + 6 + 8 + 6);
    }

    #[test]
    fn copies_are_isomorphic() {
        let c = pointed_sets_with_copies(2, 2).unwrap();
        assert_eq!(c.base().object_count(), 5);
        assert_eq!(c.base().morphism_count(), 81);
        assert!(c.base().objects_isomorphic(ObjId(1), ObjId(2)));
        assert!(!c.base().objects_isomorphic(ObjId(1), ObjId(3)));
    }

    #[test]
    fn kernel_free_is_a_category() {
        let k = kernel_free();
        assert!(k.base().validate().is_valid());
        assert_eq!(k.base().morphism_count(), 16 + 6);
    }

    #[test]
    fn images_round_trip() {
        let c = pointed_sets(2).unwrap();
        let b = c.base();
        for m in b.morphism_ids() {
            let f = based_map_images(b, m).unwrap();
            assert_eq!(f.len() as i64, b.rank(b.source(m)).unwrap());
        }
    }
}
