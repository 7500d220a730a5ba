use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::polygon::{enumerate_subdivisions, PolygonalSubdivision};
use crate::sconstr::TruncatedSimplicialSet;
use crate::segal::{check_face_map, two_segal_map, FaceDiagram, MapCheck};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Family {
    Left,
    Right,
    Upper,
    Lower,
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Family::Left => "left",
            Family::Right => "right",
            Family::Upper => "upper",
            Family::Lower => "lower",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Verdict {
    Holds,
    Fails,
    /// The map or square needs a level above the truncation.
    Undefined,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Holds => "holds",
            Verdict::Fails => "fails",
            Verdict::Undefined => "undefined at this truncation",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerdictEntry {
    pub n: usize,
    /// `j` for the left/right families, `i` for the squares.
    pub index: usize,
    pub verdict: Verdict,
    pub check: Option<MapCheck>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerdictTable {
    pub family: Family,
    pub truncation: usize,
    pub max_level: usize,
    pub entries: Vec<VerdictEntry>,
}

impl VerdictTable {
    /// No entry fails (undefined entries do not count).
    pub fn all_hold(&self) -> bool {
        self.entries.iter().all(|e| e.verdict != Verdict::Fails)
    }

    /// Conjunction over entries whose level needs at most `m`.
    pub fn holds_up_to(&self, m: usize) -> bool {
        let need = |e: &VerdictEntry| match self.family {
            Family::Left | Family::Right => e.n,
            Family::Upper | Family::Lower => e.n + 1,
        };
        self.entries
            .iter()
            .filter(|e| need(e) <= m)
            .all(|e| e.verdict == Verdict::Holds)
    }

    pub fn failures(&self) -> impl Iterator<Item = &VerdictEntry> {
        self.entries.iter().filter(|e| e.verdict == Verdict::Fails)
    }
}

/// `X_n -> X_{0,j..n} x_{X_{0,j}} X_{0..j}`.
pub fn left_family_map(n: usize, j: usize) -> FaceDiagram {
    let mut first = vec![0];
    first.extend(j.max(1)..=n);
    first.dedup();
    FaceDiagram::pullback(n, first, (0..=j).collect())
}

/// `X_n -> X_{0..j,n} x_{X_{j,n}} X_{j..n}`.
pub fn right_family_map(n: usize, j: usize) -> FaceDiagram {
    let mut first: Vec<usize> = (0..=j).collect();
    first.push(n);
    first.dedup();
    FaceDiagram::pullback(n, first, (j..=n).collect())
}

fn family_table(
    x: &TruncatedSimplicialSet,
    family: Family,
    max_level: usize,
    map: fn(usize, usize) -> FaceDiagram,
) -> Result<VerdictTable> {
    let mut entries = Vec::new();
    for n in 3..=max_level {
        for j in 0..=n {
            if n > x.truncation() {
                entries.push(VerdictEntry {
                    n,
                    index: j,
                    verdict: Verdict::Undefined,
                    check: None,
                });
                continue;
            }
            let c = check_face_map(x, &map(n, j))?;
            entries.push(VerdictEntry {
                n,
                index: j,
                verdict: if c.bijective() {
                    Verdict::Holds
                } else {
                    Verdict::Fails
                },
                check: Some(c),
            });
        }
    }
    Ok(VerdictTable {
        family,
        truncation: x.truncation(),
        max_level,
        entries,
    })
}

/// Left 2-Segal maps for `3 <= n <= max_level`, `0 <= j <= n`.
pub fn check_left(x: &TruncatedSimplicialSet, max_level: usize) -> Result<VerdictTable> {
    family_table(x, Family::Left, max_level, left_family_map)
}

/// Right 2-Segal maps for `3 <= n <= max_level`, `0 <= j <= n`.
pub fn check_right(x: &TruncatedSimplicialSet, max_level: usize) -> Result<VerdictTable> {
    family_table(x, Family::Right, max_level, right_family_map)
}

/// Whether `X_{n+1} -> X_n x_{X_{n-1}} X_n`, `z -> (top z, left z)`, is a
/// bijection onto pairs with `right(b) = bottom(c)`.
fn square_check(
    x: &TruncatedSimplicialSet,
    n: usize,
    top: usize,
    left: usize,
    right: usize,
    bottom: usize,
) -> MapCheck {
    let mut image = std::collections::HashMap::new();
    let mut collision = None;
    for z in 0..x.size(n + 1) {
        let key = (x.face(n + 1, top, z), x.face(n + 1, left, z));
        if let Some(&w) = image.get(&key) {
            collision.get_or_insert((w, z));
        } else {
            image.insert(key, z);
        }
    }
    let mut limit = 0;
    let mut missing = None;
    for b in 0..x.size(n) {
        for c in 0..x.size(n) {
            if x.face(n, right, b) == x.face(n, bottom, c) {
                limit += 1;
                if missing.is_none() && !image.contains_key(&(b, c)) {
                    missing = Some(vec![b, c]);
                }
            }
        }
    }
    MapCheck {
        domain_size: x.size(n + 1),
        limit_size: limit,
        injective: collision.is_none(),
        surjective: missing.is_none(),
        collision,
        missing,
    }
}

fn square_table(x: &TruncatedSimplicialSet, family: Family, max_level: usize) -> VerdictTable {
    let mut entries = Vec::new();
    for n in 2..max_level {
        for i in 1..n {
            if n + 1 > x.truncation() {
                entries.push(VerdictEntry {
                    n,
                    index: i,
                    verdict: Verdict::Undefined,
                    check: None,
                });
                continue;
            }
            let c = match family {
                Family::Upper => square_check(x, n, 0, i + 1, i, 0),
                _ => square_check(x, n, n + 1, i, i, n),
            };
            entries.push(VerdictEntry {
                n,
                index: i,
                verdict: if c.bijective() {
                    Verdict::Holds
                } else {
                    Verdict::Fails
                },
                check: Some(c),
            });
        }
    }
    VerdictTable {
        family,
        truncation: x.truncation(),
        max_level,
        entries,
    }
}

/// Upper squares (`d_0` across, `d_{i+1}` and `d_i` down) for `0 < i < n`
/// and `n + 1 <= max_level`.
pub fn check_upper(x: &TruncatedSimplicialSet, max_level: usize) -> VerdictTable {
    square_table(x, Family::Upper, max_level)
}

/// Lower squares (`d_{n+1}` and `d_n` across, `d_i` down).
pub fn check_lower(x: &TruncatedSimplicialSet, max_level: usize) -> VerdictTable {
    square_table(x, Family::Lower, max_level)
}

/// Conjunctions of the four tables at one truncation level.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct A2Row {
    pub level: usize,
    pub lower: bool,
    pub left: bool,
    pub upper: bool,
    pub right: bool,
}

impl A2Row {
    pub fn consistent(&self) -> bool {
        self.lower == self.left && self.upper == self.right
    }
}

/// Compares lower with left and upper with right, truncating at every level
/// `3 <= m <= N`.
pub fn a2_consistency(x: &TruncatedSimplicialSet) -> Result<Vec<A2Row>> {
    let top = x.truncation();
    let left = check_left(x, top)?;
    let right = check_right(x, top)?;
    let lower = check_lower(x, top);
    let upper = check_upper(x, top);
    Ok((3..=top)
        .map(|m| A2Row {
            level: m,
            lower: lower.holds_up_to(m),
            left: left.holds_up_to(m),
            upper: upper.holds_up_to(m),
            right: right.holds_up_to(m),
        })
        .collect())
}

/// The fan map at 0 by successive splittings
/// `z -> (z|{0,m-1,m}, z|{0..m-1})`, with the tuple in member order of
/// the fan and whether every step was a bijection.
pub fn fan_stepwise(x: &TruncatedSimplicialSet, n: usize) -> Result<(Vec<Vec<usize>>, bool)> {
    x.check_level(n)?;
    let mut steps_ok = true;
    for m in 3..=n {
        steps_ok &= check_face_map(x, &left_family_map(m, m - 1))?.bijective();
    }
    let mut images = Vec::with_capacity(x.size(n));
    for z in 0..x.size(n) {
        let mut members = Vec::new();
        let mut cur = z;
        for m in (3..=n).rev() {
            members.push(x.restrict(m, cur, &[0, m - 1, m]));
            cur = x.restrict(m, cur, &(0..m).collect::<Vec<_>>());
        }
        if n >= 2 {
            members.push(cur);
        }
        members.reverse();
        images.push(members);
    }
    Ok((images, steps_ok))
}

/// Verdicts of the two reduced families against every subdivision map.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReductionReport {
    pub max_level: usize,
    pub reduced_pass: bool,
    pub exhaustive_pass: bool,
    pub subdivisions_checked: usize,
    pub first_failure: Option<PolygonalSubdivision>,
}

impl ReductionReport {
    /// Reduced pass must imply exhaustive pass.
    pub fn consistent(&self) -> bool {
        !self.reduced_pass || self.exhaustive_pass
    }
}

pub fn reduction_consistency(
    x: &TruncatedSimplicialSet,
    max_level: usize,
) -> Result<ReductionReport> {
    let m = max_level.min(x.truncation());
    let reduced_pass = check_left(x, m)?.all_hold() && check_right(x, m)?.all_hold();
    let mut exhaustive_pass = true;
    let mut first_failure = None;
    let mut checked = 0;
    for n in 2..=m {
        for p in enumerate_subdivisions(n)? {
            checked += 1;
            if !two_segal_map(x, &p)?.bijective() {
                exhaustive_pass = false;
                first_failure.get_or_insert(p);
            }
        }
    }
    Ok(ReductionReport {
        max_level: m,
        reduced_pass,
        exhaustive_pass,
        subdivisions_checked: checked,
        first_failure,
    })
}
