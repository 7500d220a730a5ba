use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fincat::{FinCategory, MorId, ObjId};

/// A square
///
/// ```text
///  a --top--> b
///  |          |
/// left      right
///  v          v
///  c --bot--> d
/// ```
///
/// Commutes when `right . top = bottom . left`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CommutativeSquare {
    pub top: MorId,
    pub left: MorId,
    pub right: MorId,
    pub bottom: MorId,
}

impl CommutativeSquare {
    pub fn corner_a(&self, c: &FinCategory) -> ObjId {
        c.source(self.top)
    }
    pub fn corner_b(&self, c: &FinCategory) -> ObjId {
        c.target(self.top)
    }
    pub fn corner_c(&self, c: &FinCategory) -> ObjId {
        c.target(self.left)
    }
    pub fn corner_d(&self, c: &FinCategory) -> ObjId {
        c.target(self.right)
    }

    /// Well-typed and commuting.
    pub fn commutes(&self, c: &FinCategory) -> bool {
        c.source(self.top) == c.source(self.left)
            && c.target(self.top) == c.source(self.right)
            && c.target(self.left) == c.source(self.bottom)
            && c.target(self.right) == c.target(self.bottom)
            && c.compose(self.right, self.top) == c.compose(self.bottom, self.left)
    }

    /// The same square read in the opposite category, where it becomes a
    /// square with corner `d` in position `a`.
    pub fn transpose_opposite(&self) -> CommutativeSquare {
        CommutativeSquare {
            top: self.bottom,
            left: self.right,
            right: self.left,
            bottom: self.top,
        }
    }
}

/// Pushout of `f: A -> B` and `g: A -> C`, returned as a square with
/// `top = f`, `left = g`.
pub type PushoutSquare = CommutativeSquare;

fn cocones_into(c: &FinCategory, f: MorId, g: MorId, q: ObjId) -> Vec<(MorId, MorId)> {
    let (b, cc) = (c.target(f), c.target(g));
    let mut v = Vec::new();
    for &x in c.hom(b, q) {
        let xf = c.compose(x, f);
        for &y in c.hom(cc, q) {
            if c.compose(y, g) == xf {
                v.push((x, y));
            }
        }
    }
    v
}

fn cones_from(c: &FinCategory, f: MorId, g: MorId, q: ObjId) -> Vec<(MorId, MorId)> {
    let (b, cc) = (c.source(f), c.source(g));
    let mut v = Vec::new();
    for &x in c.hom(q, b) {
        let fx = c.compose(f, x);
        for &y in c.hom(q, cc) {
            if c.compose(g, y) == fx {
                v.push((x, y));
            }
        }
    }
    v
}

fn check_span(c: &FinCategory, f: MorId, g: MorId) -> Result<()> {
    c.check_morphism(f)?;
    c.check_morphism(g)?;
    if c.source(f) != c.source(g) {
        return Err(Error::SourceMismatch(f, g));
    }
    Ok(())
}

fn check_cospan(c: &FinCategory, f: MorId, g: MorId) -> Result<()> {
    c.check_morphism(f)?;
    c.check_morphism(g)?;
    if c.target(f) != c.target(g) {
        return Err(Error::TargetMismatch(f, g));
    }
    Ok(())
}

/// Every object that is a pushout of the span, each with its
/// lexicographically first universal cocone, in increasing object order.
pub fn all_pushouts(c: &FinCategory, f: MorId, g: MorId) -> Result<Vec<PushoutSquare>> {
    check_span(c, f, g)?;
    let counts: Vec<usize> = c
        .objects()
        .map(|q| cocones_into(c, f, g, q).len())
        .collect();
    let mut found = Vec::new();
    'candidate: for p in c.objects() {
        for q in c.objects() {
            if c.hom(p, q).len() != counts[q.index()] {
                continue 'candidate;
            }
        }
        // p has the right number of maps out; find a cocone through which
        // every other cocone factors uniquely
        'cocone: for (u, v) in cocones_into(c, f, g, p) {
            for q in c.objects() {
                let mut images: Vec<(MorId, MorId)> = c
                    .hom(p, q)
                    .iter()
                    .map(|&h| (c.compose(h, u), c.compose(h, v)))
                    .collect();
                images.sort_unstable();
                if images.windows(2).any(|w| w[0] == w[1]) {
                    continue 'cocone;
                }
            }
            found.push(CommutativeSquare {
                top: f,
                left: g,
                right: u,
                bottom: v,
            });
            continue 'candidate;
        }
    }
    Ok(found)
}

/// Pushout of `f: A -> B` and `g: A -> C` inside `c`, decided by the
/// universal property. Ties go to the smallest object id, then the smallest
/// `(B -> P, C -> P)` pair.
pub fn find_pushout(c: &FinCategory, f: MorId, g: MorId) -> Result<Option<PushoutSquare>> {
    Ok(all_pushouts(c, f, g)?.into_iter().next())
}

/// Pullback of `f: B -> D` and `g: C -> D`, returned as a square with
/// `right = f`, `bottom = g`. Same tie-breaking as [`find_pushout`].
pub fn all_pullbacks(c: &FinCategory, f: MorId, g: MorId) -> Result<Vec<CommutativeSquare>> {
    check_cospan(c, f, g)?;
    let counts: Vec<usize> = c.objects().map(|q| cones_from(c, f, g, q).len()).collect();
    let mut found = Vec::new();
    'candidate: for p in c.objects() {
        for q in c.objects() {
            if c.hom(q, p).len() != counts[q.index()] {
                continue 'candidate;
            }
        }
        'cone: for (u, v) in cones_from(c, f, g, p) {
            for q in c.objects() {
                let mut images: Vec<(MorId, MorId)> = c
                    .hom(q, p)
                    .iter()
                    .map(|&h| (c.compose(u, h), c.compose(v, h)))
                    .collect();
                images.sort_unstable();
                if images.windows(2).any(|w| w[0] == w[1]) {
                    continue 'cone;
                }
            }
            found.push(CommutativeSquare {
                top: u,
                left: v,
                right: f,
                bottom: g,
            });
            continue 'candidate;
        }
    }
    Ok(found)
}

pub fn find_pullback(c: &FinCategory, f: MorId, g: MorId) -> Result<Option<CommutativeSquare>> {
    Ok(all_pullbacks(c, f, g)?.into_iter().next())
}

/// The unique `h: D -> Q` with `h . right = x` and `h . bottom = y`, if the
/// square is a pushout and `(x, y)` a cocone.
pub fn pushout_mediator(
    c: &FinCategory,
    sq: &CommutativeSquare,
    x: MorId,
    y: MorId,
) -> Option<MorId> {
    let q = c.target(x);
    if c.target(y) != q {
        return None;
    }
    let mut hits = c
        .hom(sq.corner_d(c), q)
        .iter()
        .copied()
        .filter(|&h| c.compose(h, sq.right) == x && c.compose(h, sq.bottom) == y);
    let h = hits.next()?;
    hits.next().is_none().then_some(h)
}

/// True iff the square commutes and every cocone on its span factors
/// uniquely through it.
pub fn is_pushout(c: &FinCategory, sq: &CommutativeSquare) -> bool {
    if !sq.commutes(c) {
        return false;
    }
    let d = sq.corner_d(c);
    c.objects().all(|q| {
        let cocones = cocones_into(c, sq.top, sq.left, q);
        let hom = c.hom(d, q);
        if cocones.len() != hom.len() {
            return false;
        }
        let mut images: Vec<(MorId, MorId)> = hom
            .iter()
            .map(|&h| (c.compose(h, sq.right), c.compose(h, sq.bottom)))
            .collect();
        images.sort_unstable();
        images.windows(2).all(|w| w[0] != w[1])
    })
}

/// True iff the square commutes and every cone on its cospan factors
/// uniquely through it.
pub fn is_pullback(c: &FinCategory, sq: &CommutativeSquare) -> bool {
    if !sq.commutes(c) {
        return false;
    }
    let a = sq.corner_a(c);
    c.objects().all(|q| {
        let cones = cones_from(c, sq.right, sq.bottom, q);
        let hom = c.hom(q, a);
        if cones.len() != hom.len() {
            return false;
        }
        let mut images: Vec<(MorId, MorId)> = hom
            .iter()
            .map(|&h| (c.compose(sq.top, h), c.compose(sq.left, h)))
            .collect();
        images.sort_unstable();
        images.windows(2).all(|w| w[0] != w[1])
    })
}

/// Two pushouts of the same span are isomorphic under the span iff the
/// mediating map between them is an isomorphism.
pub fn squares_isomorphic_under_span(
    c: &FinCategory,
    s1: &CommutativeSquare,
    s2: &CommutativeSquare,
) -> bool {
    if s1.top != s2.top || s1.left != s2.left {
        return false;
    }
    match pushout_mediator(c, s1, s2.right, s2.bottom) {
        Some(h) => c.is_iso(h),
        None => false,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fincat::{FinCategoryBuilder, Limits};

    /// The poset 0 < 1, 0 < 2, 1 < 3, 2 < 3 (a commuting square).
    fn diamond() -> FinCategory {
        FinCategory::poset((0..4).map(|i| i.to_string()).collect(), |x, y| {
            x == y || x == 0 || y == 3
        })
        .unwrap()
    }

    #[test]
    fn pushout_in_a_poset_is_the_join() {
        let c = diamond();
        let f = c.hom(ObjId(0), ObjId(1))[0];
        let g = c.hom(ObjId(0), ObjId(2))[0];
        let sq = find_pushout(&c, f, g).unwrap().unwrap();
        assert_eq!(sq.corner_d(&c), ObjId(3));
        assert!(is_pushout(&c, &sq));
        let pb = find_pullback(&c, sq.right, sq.bottom).unwrap().unwrap();
        assert_eq!(pb.corner_a(&c), ObjId(0));
        assert!(is_pullback(&c, &pb));
    }

    #[test]
    fn pushout_of_identities() {
        let c = diamond();
        let id = c.identity(ObjId(1));
        let sq = find_pushout(&c, id, id).unwrap().unwrap();
        assert_eq!(sq.corner_d(&c), ObjId(1));
    }

    #[test]
    fn no_pushout_without_a_join() {
        // 0 < 1, 0 < 2 and nothing above
        let c = FinCategory::poset((0..3).map(|i| i.to_string()).collect(), |x, y| {
            x == y || x == 0
        })
        .unwrap();
        let f = c.hom(ObjId(0), ObjId(1))[0];
        let g = c.hom(ObjId(0), ObjId(2))[0];
        assert_eq!(find_pushout(&c, f, g).unwrap(), None);
    }

    #[test]
    fn span_must_share_a_source() {
        let c = diamond();
        let f = c.hom(ObjId(0), ObjId(1))[0];
        let g = c.hom(ObjId(1), ObjId(3))[0];
        assert_eq!(find_pushout(&c, f, g), Err(Error::SourceMismatch(f, g)));
    }

    #[test]
    fn pushout_of_a_map_along_itself() {
        // x with two parallel maps a,b: x -> y and nothing else
        let mut bld = FinCategoryBuilder::new();
        let x = bld.add_object("x", None);
        let y = bld.add_object("y", None);
        bld.add_identity(x);
        bld.add_identity(y);
        bld.add_morphism("a", x, y);
        bld.add_morphism("b", x, y);
        let c = bld
            .fill_identity_laws(true)
            .build(Limits::default())
            .unwrap();
        assert!(c.validate().is_valid());
        let a = c.hom(x, y)[0];
        // the only cocone into y is (id, id)
        let sq = find_pushout(&c, a, a).unwrap().unwrap();
        assert_eq!(sq.corner_d(&c), y);
    }
}
