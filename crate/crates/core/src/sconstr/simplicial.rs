use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::cofcat::CofStructure;
use crate::error::{Error, Result};
use crate::fincat::{find_natural_isomorphism, MorId};
use crate::sconstr::{ar_shape, enumerate_sn, simplicial_map, EnumerationPolicy, SObject};

/// `delta_i: [n-1] -> [n]`, skipping `i`.
pub fn coface(n: usize, i: usize) -> Vec<usize> {
    (0..n).map(|k| if k < i { k } else { k + 1 }).collect()
}

/// `sigma_i: [n+1] -> [n]`, hitting `i` twice.
pub fn codegeneracy(n: usize, i: usize) -> Vec<usize> {
    (0..=n + 1)
        .map(|k| if k <= i { k } else { k - 1 })
        .collect()
}

/// Finite sets `X_0, ..., X_N` (elements are `0..size`) with face and
/// degeneracy functions.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TruncatedSimplicialSet {
    sizes: Vec<usize>,
    /// `faces[n][i][x] = d_i(x)` for `1 <= n <= N`; `faces[0]` is empty.
    faces: Vec<Vec<Vec<usize>>>,
    /// `degens[n][i][x] = s_i(x)` for `n < N`.
    degens: Vec<Vec<Vec<usize>>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SimplicialViolation {
    pub identity: String,
    pub level: usize,
    pub element: usize,
}

impl fmt::Display for SimplicialViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} fails at level {} on element {}",
            self.identity, self.level, self.element
        )
    }
}

impl TruncatedSimplicialSet {
    pub fn new(
        sizes: Vec<usize>,
        faces: Vec<Vec<Vec<usize>>>,
        degens: Vec<Vec<Vec<usize>>>,
    ) -> Result<Self> {
        if sizes.is_empty() {
            return Err(Error::InvalidInput("no levels".into()));
        }
        let top = sizes.len() - 1;
        if faces.len() != top + 1 || degens.len() != top {
            return Err(Error::ShapeMismatch(
                "face/degeneracy tables have the wrong length".into(),
            ));
        }
        for n in 1..=top {
            if faces[n].len() != n + 1 {
                return Err(Error::ShapeMismatch(format!(
                    "level {n} needs {} faces",
                    n + 1
                )));
            }
            for d in &faces[n] {
                if d.len() != sizes[n] || d.iter().any(|&y| y >= sizes[n - 1]) {
                    return Err(Error::ShapeMismatch(format!("bad face table at level {n}")));
                }
            }
        }
        for n in 0..top {
            if degens[n].len() != n + 1 {
                return Err(Error::ShapeMismatch(format!(
                    "level {n} needs {} degeneracies",
                    n + 1
                )));
            }
            for d in &degens[n] {
                if d.len() != sizes[n] || d.iter().any(|&y| y >= sizes[n + 1]) {
                    return Err(Error::ShapeMismatch(format!(
                        "bad degeneracy table at level {n}"
                    )));
                }
            }
        }
        Ok(TruncatedSimplicialSet {
            sizes,
            faces,
            degens,
        })
    }

    pub fn truncation(&self) -> usize {
        self.sizes.len() - 1
    }

    pub fn sizes(&self) -> &[usize] {
        &self.sizes
    }

    pub fn size(&self, n: usize) -> usize {
        self.sizes[n]
    }

    pub fn face(&self, n: usize, i: usize, x: usize) -> usize {
        self.faces[n][i][x]
    }

    pub fn degeneracy(&self, n: usize, i: usize, x: usize) -> usize {
        self.degens[n][i][x]
    }

    pub fn check_level(&self, n: usize) -> Result<()> {
        if n > self.truncation() {
            return Err(Error::LevelOverflow {
                level: n,
                truncation: self.truncation(),
            });
        }
        Ok(())
    }

    /// Restriction of `x` in `X_n` to the face spanned by the sorted vertex
    /// set `vertices`: the faces of the removed vertices, highest first.
    pub fn restrict(&self, n: usize, x: usize, vertices: &[usize]) -> usize {
        let mut y = x;
        let mut level = n;
        for v in (0..=n).rev() {
            if vertices.binary_search(&v).is_err() {
                y = self.faces[level][v][y];
                level -= 1;
            }
        }
        y
    }

    /// All simplicial identities within the truncation.
    pub fn check_identities(&self) -> Vec<SimplicialViolation> {
        let mut out = Vec::new();
        let top = self.truncation();
        let mut push = |identity: String, level: usize, element: usize| {
            out.push(SimplicialViolation {
                identity,
                level,
                element,
            })
        };
        // d_i d_j = d_{j-1} d_i for i < j
        for n in 2..=top {
            for j in 0..=n {
                for i in 0..j {
                    for x in 0..self.sizes[n] {
                        let l = self.face(n - 1, i, self.face(n, j, x));
                        let r = self.face(n - 1, j - 1, self.face(n, i, x));
                        if l != r {
                            push(format!("d{i} d{j} = d{} d{i}", j - 1), n, x);
                        }
                    }
                }
            }
        }
        for n in 0..top {
            // s_i s_j = s_{j+1} s_i for i <= j
            if n + 2 <= top {
                for j in 0..=n {
                    for i in 0..=j {
                        for x in 0..self.sizes[n] {
                            let l = self.degeneracy(n + 1, i, self.degeneracy(n, j, x));
                            let r = self.degeneracy(n + 1, j + 1, self.degeneracy(n, i, x));
                            if l != r {
                                push(format!("s{i} s{j} = s{} s{i}", j + 1), n, x);
                            }
                        }
                    }
                }
            }
            // d_i s_j on X_n, with s_j: X_n -> X_{n+1}
            for j in 0..=n {
                for i in 0..=n + 1 {
                    for x in 0..self.sizes[n] {
                        let l = self.face(n + 1, i, self.degeneracy(n, j, x));
                        let (r, name) = if i < j {
                            (
                                self.degeneracy(n - 1, j - 1, self.face(n, i, x)),
                                format!("d{i} s{j} = s{} d{i}", j - 1),
                            )
                        } else if i == j || i == j + 1 {
                            (x, format!("d{i} s{j} = id"))
                        } else {
                            (
                                self.degeneracy(n - 1, j, self.face(n, i - 1, x)),
                                format!("d{i} s{j} = s{j} d{}", i - 1),
                            )
                        };
                        if l != r {
                            push(name, n, x);
                        }
                    }
                }
            }
        }
        out
    }

    /// The opposite simplicial set: `d_i` and `d_{n-i}` swap, as do `s_i`
    /// and `s_{n-i}`.
    pub fn opposite(&self) -> TruncatedSimplicialSet {
        let faces = self
            .faces
            .iter()
            .map(|fs| fs.iter().rev().cloned().collect())
            .collect();
        let degens = self
            .degens
            .iter()
            .map(|ds| ds.iter().rev().cloned().collect())
            .collect();
        TruncatedSimplicialSet {
            sizes: self.sizes.clone(),
            faces,
            degens,
        }
    }

    /// Keeps levels `0..=m`.
    pub fn truncate(&self, m: usize) -> Result<TruncatedSimplicialSet> {
        self.check_level(m)?;
        Ok(TruncatedSimplicialSet {
            sizes: self.sizes[..=m].to_vec(),
            faces: self.faces[..=m].to_vec(),
            degens: self.degens[..m].to_vec(),
        })
    }
}

/// Incremental quotient of staircase diagrams by natural isomorphism.
/// Diagrams are bucketed by the iso classes of their objects before any
/// isomorphism search.
#[derive(Debug, Default)]
pub struct IsoClassifier {
    buckets: HashMap<(usize, Vec<u32>), Vec<usize>>,
    reps: Vec<SObject>,
}

impl IsoClassifier {
    pub fn new() -> Self {
        Self::default()
    }

    fn key(a: &SObject) -> (usize, Vec<u32>) {
        let c = a.diagram().target();
        let classes = c.object_iso_classes();
        (
            a.n(),
            a.diagram()
                .obj_map()
                .iter()
                .map(|o| classes[o.index()])
                .collect(),
        )
    }

    pub fn find(&self, a: &SObject) -> Result<Option<usize>> {
        let Some(bucket) = self.buckets.get(&Self::key(a)) else {
            return Ok(None);
        };
        for &r in bucket {
            if find_natural_isomorphism(self.reps[r].diagram(), a.diagram())?.is_some() {
                return Ok(Some(r));
            }
        }
        Ok(None)
    }

    /// The class of `a`, creating one if needed; the flag is true for a new
    /// class.
    pub fn classify(&mut self, a: &SObject) -> Result<(usize, bool)> {
        if let Some(r) = self.find(a)? {
            return Ok((r, false));
        }
        let k = self.reps.len();
        self.buckets.entry(Self::key(a)).or_default().push(k);
        self.reps.push(a.clone());
        Ok((k, true))
    }

    pub fn reps(&self) -> &[SObject] {
        &self.reps
    }

    pub fn into_reps(self) -> Vec<SObject> {
        self.reps
    }
}

/// `iso(s C)` up to level `N`, with a representative diagram per class.
#[derive(Debug, Clone)]
pub struct SDot {
    pub set: TruncatedSimplicialSet,
    pub reps: Vec<Vec<SObject>>,
    pub policy: EnumerationPolicy,
}

impl SDot {
    pub fn labels(&self, n: usize) -> Vec<String> {
        self.reps[n].iter().map(|a| a.label()).collect()
    }
}

/// For each arrow of `Ar[m]`, its index in `Ar[n]` under `Ar(alpha)`.
fn arrow_positions(alpha: &[usize], n: usize) -> Vec<usize> {
    let shape = ar_shape(alpha.len() - 1);
    let big = ar_shape(n);
    let sc = shape.category();
    sc.morphism_ids()
        .map(|u| {
            let (i, j) = shape.pair(sc.source(u));
            let (k, l) = shape.pair(sc.target(u));
            big.arrow((alpha[i], alpha[j]), (alpha[k], alpha[l]))
                .index()
        })
        .collect()
}

/// Builds the iso-class simplicial set. Levels are quotients of the
/// enumerated diagrams; faces and degeneracies are computed on every
/// enumerated diagram, so a map that is not constant on a class is
/// reported as an error instead of silently picking one value.
pub fn iso_s_dot(s: &CofStructure, truncation: usize, policy: EnumerationPolicy) -> Result<SDot> {
    let mut classifiers: Vec<IsoClassifier> = Vec::new();
    // class of every enumerated diagram, per level
    let mut members: Vec<Vec<(SObject, usize)>> = Vec::new();
    for n in 0..=truncation {
        let mut cl = IsoClassifier::new();
        let mut mem = Vec::new();
        for a in enumerate_sn(s, n, policy)? {
            let (k, _) = cl.classify(&a)?;
            mem.push((a, k));
        }
        classifiers.push(cl);
        members.push(mem);
    }
    let sizes: Vec<usize> = classifiers.iter().map(|c| c.reps().len()).collect();
    // a diagram on a poset is determined by its morphism table, so images
    // are looked up by their gathered table before any isomorphism search
    let mut memo: Vec<HashMap<Vec<MorId>, usize>> = vec![HashMap::new(); truncation + 2];
    let mut lookup = |level: usize, alpha: &[usize], pos: &[usize], a: &SObject| -> Result<usize> {
        let key: Vec<MorId> = pos.iter().map(|&p| a.diagram().mor_map()[p]).collect();
        if let Some(&y) = memo[level].get(&key) {
            return Ok(y);
        }
        let b = simplicial_map(alpha, a)?;
        let y = classifiers[level].find(&b)?.ok_or_else(|| {
            Error::InvariantBreach(format!(
                "image {} at level {level} is not isomorphic to an enumerated diagram",
                b.label()
            ))
        })?;
        memo[level].insert(key, y);
        Ok(y)
    };
    let mut faces = vec![Vec::new()];
    for n in 1..=truncation {
        let mut fs = vec![vec![usize::MAX; sizes[n]]; n + 1];
        let maps: Vec<(Vec<usize>, Vec<usize>)> = (0..=n)
            .map(|i| {
                let alpha = coface(n, i);
                let pos = arrow_positions(&alpha, n);
                (alpha, pos)
            })
            .collect();
        for (a, k) in &members[n] {
            for (i, table) in fs.iter_mut().enumerate() {
                let y = lookup(n - 1, &maps[i].0, &maps[i].1, a)?;
                if table[*k] == usize::MAX {
                    table[*k] = y;
                } else if table[*k] != y {
                    return Err(Error::InvariantBreach(format!(
                        "d{i} is not well defined on class {k} at level {n}"
                    )));
                }
            }
        }
        faces.push(fs);
    }
    let mut degens = Vec::new();
    for n in 0..truncation {
        let mut ds = vec![vec![usize::MAX; sizes[n]]; n + 1];
        let maps: Vec<(Vec<usize>, Vec<usize>)> = (0..=n)
            .map(|i| {
                let alpha = codegeneracy(n, i);
                let pos = arrow_positions(&alpha, n);
                (alpha, pos)
            })
            .collect();
        for (a, k) in &members[n] {
            for (i, table) in ds.iter_mut().enumerate() {
                let y = lookup(n + 1, &maps[i].0, &maps[i].1, a)?;
                if table[*k] == usize::MAX {
                    table[*k] = y;
                } else if table[*k] != y {
                    return Err(Error::InvariantBreach(format!(
                        "s{i} is not well defined on class {k} at level {n}"
                    )));
                }
            }
        }
        degens.push(ds);
    }
    let set = TruncatedSimplicialSet::new(sizes, faces, degens)?;
    Ok(SDot {
        set,
        reps: classifiers.into_iter().map(|c| c.into_reps()).collect(),
        policy,
    })
}
