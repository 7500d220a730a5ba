//! Subdivisions and triangulations of the cyclically labeled polygon `P_n`
//! with vertices `0..=n`.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A chord `(a, b)` with `a < b`.
pub type Chord = (usize, usize);

/// `{a,b}` and `{c,d}` cross iff their endpoints interleave.
pub fn chords_cross(x: Chord, y: Chord) -> bool {
    let (a, b) = x;
    let (c, d) = y;
    (a < c && c < b && b < d) || (c < a && a < d && d < b)
}

pub fn is_boundary_edge(n: usize, e: Chord) -> bool {
    e.1 == e.0 + 1 || (e.0 == 0 && e.1 == n)
}

/// All diagonals of `P_n`, sorted.
pub fn all_diagonals(n: usize) -> Vec<Chord> {
    let mut v = Vec::new();
    for a in 0..=n {
        for b in a + 1..=n {
            if !is_boundary_edge(n, (a, b)) {
                v.push((a, b));
            }
        }
    }
    v
}

/// Edges of the convex polygon on a sorted vertex list.
pub fn polygon_edges(vertices: &[usize]) -> Vec<Chord> {
    let k = vertices.len();
    let mut v: Vec<Chord> = vertices.windows(2).map(|w| (w[0], w[1])).collect();
    if k >= 3 {
        v.push((vertices[0], vertices[k - 1]));
    }
    v.sort_unstable();
    v
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Classification {
    Left,
    Right,
    Both,
    Neither,
}

impl fmt::Display for Classification {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Classification::Left => "left",
            Classification::Right => "right",
            Classification::Both => "both",
            Classification::Neither => "neither",
        })
    }
}

/// A polygonal subdivision of `P_n`: sorted member vertex lists, in sorted
/// order.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct PolygonalSubdivision {
    n: usize,
    members: Vec<Vec<usize>>,
}

fn split_faces(vertices: Vec<usize>, diagonals: &[Chord], out: &mut Vec<Vec<usize>>) {
    let own: BTreeSet<Chord> = polygon_edges(&vertices).into_iter().collect();
    let inside = diagonals.iter().find(|&&(a, b)| {
        !own.contains(&(a, b))
            && vertices.binary_search(&a).is_ok()
            && vertices.binary_search(&b).is_ok()
    });
    match inside {
        None => out.push(vertices),
        Some(&(a, b)) => {
            let first: Vec<usize> = vertices
                .iter()
                .copied()
                .filter(|&v| a <= v && v <= b)
                .collect();
            let second: Vec<usize> = vertices
                .iter()
                .copied()
                .filter(|&v| v <= a || v >= b)
                .collect();
            split_faces(first, diagonals, out);
            split_faces(second, diagonals, out);
        }
    }
}

impl PolygonalSubdivision {
    /// Validates and canonicalizes a member list.
    pub fn new(n: usize, members: Vec<Vec<usize>>) -> Result<Self> {
        if n < 2 {
            return Err(Error::LevelTooSmall(n));
        }
        let mut canon: Vec<Vec<usize>> = Vec::with_capacity(members.len());
        for mut m in members {
            m.sort_unstable();
            m.dedup();
            if m.len() < 3 {
                return Err(Error::InvalidInput(format!(
                    "member {m:?} has fewer than 3 vertices"
                )));
            }
            if let Some(&v) = m.iter().find(|&&v| v > n) {
                return Err(Error::VertexOutOfRange { vertex: v, n });
            }
            canon.push(m);
        }
        canon.sort();
        let mut diagonals = BTreeSet::new();
        for m in &canon {
            for e in polygon_edges(m) {
                if !is_boundary_edge(n, e) {
                    diagonals.insert(e);
                }
            }
        }
        let diagonals: Vec<Chord> = diagonals.into_iter().collect();
        for (i, &x) in diagonals.iter().enumerate() {
            for &y in &diagonals[i + 1..] {
                if chords_cross(x, y) {
                    return Err(Error::InvalidInput(format!("edges {x:?} and {y:?} cross")));
                }
            }
        }
        let expected = Self::faces_of(n, &diagonals);
        if expected != canon {
            return Err(Error::InvalidInput(format!(
                "members {canon:?} do not tile P_{n}"
            )));
        }
        Ok(PolygonalSubdivision { n, members: canon })
    }

    /// The subdivision cut out by a noncrossing set of diagonals.
    pub fn from_diagonals(n: usize, diagonals: &[Chord]) -> Result<Self> {
        if n < 2 {
            return Err(Error::LevelTooSmall(n));
        }
        let mut d: Vec<Chord> = diagonals
            .iter()
            .map(|&(a, b)| (a.min(b), a.max(b)))
            .collect();
        d.sort_unstable();
        d.dedup();
        for &(a, b) in &d {
            if b > n {
                return Err(Error::VertexOutOfRange { vertex: b, n });
            }
            if a == b || is_boundary_edge(n, (a, b)) {
                return Err(Error::InvalidInput(format!(
                    "{:?} is not a diagonal of P_{n}",
                    (a, b)
                )));
            }
        }
        for (i, &x) in d.iter().enumerate() {
            for &y in &d[i + 1..] {
                if chords_cross(x, y) {
                    return Err(Error::InvalidInput(format!(
                        "diagonals {x:?} and {y:?} cross"
                    )));
                }
            }
        }
        Ok(PolygonalSubdivision {
            n,
            members: Self::faces_of(n, &d),
        })
    }

    fn faces_of(n: usize, diagonals: &[Chord]) -> Vec<Vec<usize>> {
        let mut out = Vec::new();
        split_faces((0..=n).collect(), diagonals, &mut out);
        out.sort();
        out
    }

    pub fn trivial(n: usize) -> Result<Self> {
        Self::from_diagonals(n, &[])
    }

    /// The triangulation whose diagonals all meet vertex `v`.
    pub fn fan(n: usize, v: usize) -> Result<Self> {
        if v > n {
            return Err(Error::VertexOutOfRange { vertex: v, n });
        }
        let d: Vec<Chord> = (0..=n)
            .filter(|&w| w != v)
            .map(|w| (v.min(w), v.max(w)))
            .filter(|&e| !is_boundary_edge(n, e))
            .collect();
        Self::from_diagonals(n, &d)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn members(&self) -> &[Vec<usize>] {
        &self.members
    }

    pub fn is_trivial(&self) -> bool {
        self.members.len() == 1
    }

    pub fn is_triangulation(&self) -> bool {
        self.members.iter().all(|m| m.len() == 3)
    }

    pub fn diagonals(&self) -> Vec<Chord> {
        let mut d = BTreeSet::new();
        for m in &self.members {
            for e in polygon_edges(m) {
                if !is_boundary_edge(self.n, e) {
                    d.insert(e);
                }
            }
        }
        d.into_iter().collect()
    }

    /// Pairs of members sharing a diagonal, with that diagonal.
    pub fn adjacencies(&self) -> Vec<(usize, usize, Chord)> {
        let mut out = Vec::new();
        for i in 0..self.members.len() {
            let ei = polygon_edges(&self.members[i]);
            for j in i + 1..self.members.len() {
                for e in polygon_edges(&self.members[j]) {
                    if ei.binary_search(&e).is_ok() {
                        out.push((i, j, e));
                    }
                }
            }
        }
        out
    }

    pub fn classify(&self) -> Classification {
        let left = self.members.iter().all(|m| m[0] == 0);
        let right = self.members.iter().all(|m| *m.last().unwrap() == self.n);
        match (left, right) {
            (true, true) => Classification::Both,
            (true, false) => Classification::Left,
            (false, true) => Classification::Right,
            (false, false) => Classification::Neither,
        }
    }

    pub fn poset(&self) -> SubdivisionPoset {
        let mut elements: Vec<Vec<usize>> = self.members.clone();
        let mut shared = BTreeSet::new();
        for (_, _, (a, b)) in self.adjacencies() {
            shared.insert(vec![a, b]);
        }
        elements.extend(shared);
        SubdivisionPoset { elements }
    }

    pub fn label(&self) -> String {
        let parts: Vec<String> = self
            .members
            .iter()
            .map(|m| {
                let vs: Vec<String> = m.iter().map(|v| v.to_string()).collect();
                format!("{{{}}}", vs.join(","))
            })
            .collect();
        format!("P_{} [{}]", self.n, parts.join(" "))
    }
}

impl fmt::Display for PolygonalSubdivision {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label())
    }
}

/// Member vertex sets plus the diagonals along which members meet, ordered
/// by inclusion.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SubdivisionPoset {
    pub elements: Vec<Vec<usize>>,
}

impl SubdivisionPoset {
    pub fn leq(&self, i: usize, j: usize) -> bool {
        let (a, b) = (&self.elements[i], &self.elements[j]);
        a.iter().all(|v| b.binary_search(v).is_ok())
    }
}

fn triangulations_of(vertices: &[usize]) -> Vec<Vec<Vec<usize>>> {
    if vertices.len() < 3 {
        return vec![Vec::new()];
    }
    let (first, last) = (vertices[0], vertices[vertices.len() - 1]);
    let mut out = Vec::new();
    // the triangle on the edge (first, last) has some apex k
    for k in 1..vertices.len() - 1 {
        let left = triangulations_of(&vertices[..=k]);
        let right = triangulations_of(&vertices[k..]);
        for l in &left {
            for r in &right {
                let mut t = vec![vec![first, vertices[k], last]];
                t.extend(l.iter().cloned());
                t.extend(r.iter().cloned());
                t.sort();
                out.push(t);
            }
        }
    }
    out
}

/// All triangulations of `P_n` in lexicographic order of member lists.
pub fn enumerate_triangulations(n: usize) -> Result<Vec<PolygonalSubdivision>> {
    if n < 2 {
        return Err(Error::LevelTooSmall(n));
    }
    let verts: Vec<usize> = (0..=n).collect();
    let mut out: Vec<PolygonalSubdivision> = triangulations_of(&verts)
        .into_iter()
        .map(|members| PolygonalSubdivision { n, members })
        .collect();
    out.sort();
    Ok(out)
}

fn noncrossing_subsets(
    diags: &[Chord],
    start: usize,
    chosen: &mut Vec<Chord>,
    out: &mut Vec<Vec<Chord>>,
) {
    out.push(chosen.clone());
    for i in start..diags.len() {
        if chosen.iter().all(|&c| !chords_cross(c, diags[i])) {
            chosen.push(diags[i]);
            noncrossing_subsets(diags, i + 1, chosen, out);
            chosen.pop();
        }
    }
}

/// All polygonal subdivisions of `P_n`, including the trivial one, in
/// lexicographic order of member lists.
pub fn enumerate_subdivisions(n: usize) -> Result<Vec<PolygonalSubdivision>> {
    if n < 2 {
        return Err(Error::LevelTooSmall(n));
    }
    let diags = all_diagonals(n);
    let mut sets = Vec::new();
    noncrossing_subsets(&diags, 0, &mut Vec::new(), &mut sets);
    let mut out: Vec<PolygonalSubdivision> = sets
        .iter()
        .map(|d| PolygonalSubdivision {
            n,
            members: PolygonalSubdivision::faces_of(n, d),
        })
        .collect();
    out.sort();
    Ok(out)
}

fn require_triangulation(t: &PolygonalSubdivision) -> Result<()> {
    if t.is_triangulation() {
        Ok(())
    } else {
        Err(Error::NotATriangulation(t.label()))
    }
}

/// Smallest `j` with `{j-1, j, j+1}` a member (no wraparound).
pub fn find_consecutive_triangle(t: &PolygonalSubdivision) -> Result<usize> {
    require_triangulation(t)?;
    (1..t.n)
        .find(|&j| t.members.binary_search(&vec![j - 1, j, j + 1]).is_ok())
        .ok_or_else(|| Error::InvariantBreach(format!("{} has no consecutive triangle", t.label())))
}

/// Number of polygon edges and diagonals at `v`.
pub fn vertex_valency(t: &PolygonalSubdivision, v: usize) -> Result<usize> {
    require_triangulation(t)?;
    if v > t.n {
        return Err(Error::VertexOutOfRange { vertex: v, n: t.n });
    }
    Ok(2 + t
        .diagonals()
        .iter()
        .filter(|&&(a, b)| a == v || b == v)
        .count())
}

/// The triangle on `v` and its two cyclic neighbours, sorted.
pub fn cyclic_ear(n: usize, v: usize) -> Vec<usize> {
    let m = n + 1;
    let mut e = vec![(v + m - 1) % m, v, (v + 1) % m];
    e.sort_unstable();
    e
}

pub fn classify_subdivision(t: &PolygonalSubdivision) -> Classification {
    t.classify()
}
