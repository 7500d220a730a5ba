//! 2-Segal comparison maps of truncated simplicial sets.
//!
//! All homotopy limits here are of discrete sets, computed as ordinary
//! limits. This is exact: discrete spaces carry no path data.

mod families;
mod search;

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::polygon::{find_consecutive_triangle, Classification, PolygonalSubdivision};
use crate::sconstr::TruncatedSimplicialSet;

pub use families::{
    a2_consistency, check_left, check_lower, check_right, check_upper, fan_stepwise,
    left_family_map, reduction_consistency, right_family_map, A2Row, Family, ReductionReport,
    Verdict, VerdictEntry, VerdictTable,
};
pub use search::{
    counterexample_search, random_structures, CandidateStatus, Counterexample, RandomStructure,
    SearchCandidate, SearchConfig, SearchReport,
};

/// Stated in every report that compares with homotopy limits.
pub const DISCRETE_NOTE: &str =
    "homotopy pullbacks and limits of discrete sets are computed as ordinary ones";

/// A finite diagram of faces of `Delta^n`: vertex sets, and pairs of them
/// required to agree on a common face.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FaceDiagram {
    pub n: usize,
    pub members: Vec<Vec<usize>>,
    /// `(a, b, shared)`: members `a` and `b` restrict to the same element
    /// of `X_shared`.
    pub constraints: Vec<(usize, usize, Vec<usize>)>,
}

impl FaceDiagram {
    pub fn of_subdivision(p: &PolygonalSubdivision) -> FaceDiagram {
        FaceDiagram {
            n: p.n(),
            members: p.members().to_vec(),
            constraints: p
                .adjacencies()
                .into_iter()
                .map(|(a, b, (u, v))| (a, b, vec![u, v]))
                .collect(),
        }
    }

    /// The pullback `X_first x_{X_shared} X_second`.
    pub fn pullback(n: usize, first: Vec<usize>, second: Vec<usize>) -> FaceDiagram {
        let shared: Vec<usize> = first
            .iter()
            .copied()
            .filter(|v| second.binary_search(v).is_ok())
            .collect();
        FaceDiagram {
            n,
            members: vec![first, second],
            constraints: vec![(0, 1, shared)],
        }
    }
}

fn positions(member: &[usize], vertices: &[usize]) -> Vec<usize> {
    vertices
        .iter()
        .map(|v| member.binary_search(v).expect("face of the member"))
        .collect()
}

fn check_diagram(x: &TruncatedSimplicialSet, d: &FaceDiagram) -> Result<()> {
    x.check_level(d.n)?;
    for m in &d.members {
        if m.is_empty() || m.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidInput(format!(
                "member {m:?} is not a sorted vertex set"
            )));
        }
        if let Some(&v) = m.iter().find(|&&v| v > d.n) {
            return Err(Error::VertexOutOfRange { vertex: v, n: d.n });
        }
    }
    for (a, b, s) in &d.constraints {
        for &k in [a, b] {
            let m = d
                .members
                .get(k)
                .ok_or_else(|| Error::InvalidInput(format!("no member {k}")))?;
            if s.iter().any(|v| m.binary_search(v).is_err()) {
                return Err(Error::InvalidInput(format!("{s:?} is not a face of {m:?}")));
            }
        }
    }
    Ok(())
}

/// Restriction of an element of `X_{|member|-1}` to a face of the member.
fn restrict_member(
    x: &TruncatedSimplicialSet,
    member: &[usize],
    y: usize,
    face: &[usize],
) -> usize {
    x.restrict(member.len() - 1, y, &positions(member, face))
}

/// All compatible tuples, one element of `X_{|P|-1}` per member `P`, in
/// lexicographic order. Fails with `BudgetExceeded` past `budget` tuples.
pub fn limit_tuples(
    x: &TruncatedSimplicialSet,
    d: &FaceDiagram,
    budget: usize,
) -> Result<Vec<Vec<usize>>> {
    check_diagram(x, d)?;
    let k = d.members.len();
    // constraints against earlier members, with per-constraint value index
    // over the later member's elements
    struct Step {
        earlier: usize,
        earlier_face: Vec<usize>,
        index: HashMap<usize, Vec<usize>>,
    }
    let mut steps: Vec<Vec<Step>> = (0..k).map(|_| Vec::new()).collect();
    for (a, b, s) in &d.constraints {
        let (early, late) = if a < b { (*a, *b) } else { (*b, *a) };
        let m = &d.members[late];
        let mut index: HashMap<usize, Vec<usize>> = HashMap::new();
        for y in 0..x.size(m.len() - 1) {
            index
                .entry(restrict_member(x, m, y, s))
                .or_default()
                .push(y);
        }
        steps[late].push(Step {
            earlier: early,
            earlier_face: positions(&d.members[early], s),
            index,
        });
    }
    let mut out = Vec::new();
    let mut cur: Vec<usize> = Vec::with_capacity(k);
    fn go(
        x: &TruncatedSimplicialSet,
        d: &FaceDiagram,
        steps: &[Vec<Step>],
        cur: &mut Vec<usize>,
        out: &mut Vec<Vec<usize>>,
        budget: usize,
    ) -> Result<()> {
        let k = cur.len();
        if k == d.members.len() {
            if out.len() == budget {
                return Err(Error::BudgetExceeded(budget));
            }
            out.push(cur.clone());
            return Ok(());
        }
        let level = d.members[k].len() - 1;
        let wanted: Vec<usize> = steps[k]
            .iter()
            .map(|st| {
                let m = &d.members[st.earlier];
                x.restrict(m.len() - 1, cur[st.earlier], &st.earlier_face)
            })
            .collect();
        let all: Vec<usize>;
        let candidates: &[usize] = match steps[k].first() {
            None => {
                all = (0..x.size(level)).collect();
                &all
            }
            Some(st) => st.index.get(&wanted[0]).map_or(&[], |v| v.as_slice()),
        };
        for &y in candidates {
            let ok = steps[k].iter().zip(&wanted).skip(1).all(|(st, &w)| {
                st.index
                    .get(&w)
                    .is_some_and(|v| v.binary_search(&y).is_ok())
            });
            if ok {
                cur.push(y);
                go(x, d, steps, cur, out, budget)?;
                cur.pop();
            }
        }
        Ok(())
    }
    go(x, d, &steps, &mut cur, &mut out, budget)?;
    Ok(out)
}

pub const DEFAULT_LIMIT_BUDGET: usize = 1 << 22;

/// The limit of `X` over the poset of a subdivision.
pub fn limit_over_subdivision(
    x: &TruncatedSimplicialSet,
    p: &PolygonalSubdivision,
) -> Result<Vec<Vec<usize>>> {
    limit_tuples(x, &FaceDiagram::of_subdivision(p), DEFAULT_LIMIT_BUDGET)
}

/// Bijectivity data of a map `X_n -> lim`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MapCheck {
    pub domain_size: usize,
    pub limit_size: usize,
    pub injective: bool,
    pub surjective: bool,
    /// Two elements of `X_n` with the same image.
    pub collision: Option<(usize, usize)>,
    /// A limit tuple outside the image.
    pub missing: Option<Vec<usize>>,
}

impl MapCheck {
    pub fn bijective(&self) -> bool {
        self.injective && self.surjective
    }
}

/// Checks `z -> (z restricted to each member)` against the limit.
pub fn check_face_map(x: &TruncatedSimplicialSet, d: &FaceDiagram) -> Result<MapCheck> {
    let limit = limit_tuples(x, d, DEFAULT_LIMIT_BUDGET)?;
    let mut image: HashMap<Vec<usize>, usize> = HashMap::new();
    let mut collision = None;
    for z in 0..x.size(d.n) {
        let t: Vec<usize> = d.members.iter().map(|m| x.restrict(d.n, z, m)).collect();
        if let Some(&w) = image.get(&t) {
            collision.get_or_insert((w, z));
        } else {
            image.insert(t, z);
        }
    }
    let missing = limit.iter().find(|t| !image.contains_key(*t)).cloned();
    if image.keys().any(|t| limit.binary_search(t).is_err()) {
        return Err(Error::InvariantBreach(
            "an image tuple is not compatible; the restrictions are inconsistent".into(),
        ));
    }
    Ok(MapCheck {
        domain_size: x.size(d.n),
        limit_size: limit.len(),
        injective: collision.is_none(),
        surjective: missing.is_none(),
        collision,
        missing,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SegalMapResult {
    pub subdivision: PolygonalSubdivision,
    pub classification: Classification,
    /// The trivial subdivision has the identity as its map.
    pub trivial: bool,
    pub check: MapCheck,
}

impl SegalMapResult {
    pub fn bijective(&self) -> bool {
        self.check.bijective()
    }
}

/// The 2-Segal map `f_P: X_n -> lim_P X`.
pub fn two_segal_map(
    x: &TruncatedSimplicialSet,
    p: &PolygonalSubdivision,
) -> Result<SegalMapResult> {
    let check = check_face_map(x, &FaceDiagram::of_subdivision(p))?;
    Ok(SegalMapResult {
        subdivision: p.clone(),
        classification: p.classify(),
        trivial: p.is_trivial(),
        check,
    })
}

/// Whether `lim_T X -> lim_{T minus T0} X` is onto, where `T0` is the
/// consecutive triangle `{j-1, j, j+1}` found in `t`. Removing `T0` also
/// drops its diagonal `{j-1, j+1}` from the poset.
pub fn check_projection_surjective(
    x: &TruncatedSimplicialSet,
    t: &PolygonalSubdivision,
) -> Result<bool> {
    let j = find_consecutive_triangle(t)?;
    let ear = vec![j - 1, j, j + 1];
    let full = FaceDiagram::of_subdivision(t);
    let drop = full
        .members
        .iter()
        .position(|m| *m == ear)
        .expect("consecutive triangle is a member");
    let keep: Vec<usize> = (0..full.members.len()).filter(|&k| k != drop).collect();
    let renumber = |k: usize| keep.iter().position(|&q| q == k);
    let rest = FaceDiagram {
        n: t.n(),
        members: keep.iter().map(|&k| full.members[k].clone()).collect(),
        constraints: full
            .constraints
            .iter()
            .filter_map(|(a, b, s)| Some((renumber(*a)?, renumber(*b)?, s.clone())))
            .collect(),
    };
    let big = limit_tuples(x, &full, DEFAULT_LIMIT_BUDGET)?;
    let small = limit_tuples(x, &rest, DEFAULT_LIMIT_BUDGET)?;
    let mut hit = std::collections::HashSet::new();
    for tup in &big {
        hit.insert(keep.iter().map(|&k| tup[k]).collect::<Vec<_>>());
    }
    Ok(small.iter().all(|t| hit.contains(t)))
}
