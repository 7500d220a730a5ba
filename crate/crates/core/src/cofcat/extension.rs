use serde::{Deserialize, Serialize};

use crate::cofcat::{CofStructure, ValidationMode};
use crate::fincat::{is_pullback, is_pushout, CommutativeSquare, MorId, ObjId};

/// A cofibration `a: A >-> X` with its chosen cokernel `q: X ->> Y` and a
/// cofibration `b: B >-> Y`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExtensionConfig {
    pub a: MorId,
    pub q: MorId,
    pub b: MorId,
}

/// `A >-> C >-> X` factoring `a`, with `p: C ->> B`, such that
/// `(A, C; 0, B)` is a pushout and `(C, X; B, Y)` is a pushout and a
/// pullback.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExtensionWitness {
    pub c: ObjId,
    pub c1: MorId,
    pub c2: MorId,
    pub p: MorId,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExtensionReport {
    pub mode: ValidationMode,
    /// The left square is only required to be a pushout.
    pub left_square: &'static str,
    pub configurations: usize,
    /// Configurations skipped because the cokernel of `a` is missing.
    pub skipped: usize,
    pub witnesses: Vec<(ExtensionConfig, ExtensionWitness)>,
    pub failure: Option<ExtensionConfig>,
}

impl ExtensionReport {
    pub fn passed(&self) -> bool {
        self.failure.is_none()
    }
}

fn find_witness(s: &CofStructure, cfg: &ExtensionConfig) -> Option<ExtensionWitness> {
    let c = &**s.base();
    let (a_obj, x) = (c.source(cfg.a), c.target(cfg.a));
    let b_obj = c.source(cfg.b);
    let a_to_zero = s.to_zero(a_obj);
    let zero_to_b = s.from_zero(b_obj);
    for &c2 in c.in_morphisms(x) {
        if !s.is_cofibration(c2) {
            continue;
        }
        let cc = c.source(c2);
        for &c1 in c.hom(a_obj, cc) {
            if !s.is_cofibration(c1) || c.compose(c2, c1) != cfg.a {
                continue;
            }
            for &p in c.hom(cc, b_obj) {
                let right = CommutativeSquare {
                    top: c2,
                    left: p,
                    right: cfg.q,
                    bottom: cfg.b,
                };
                if !right.commutes(c) {
                    continue;
                }
                let left = CommutativeSquare {
                    top: c1,
                    left: a_to_zero,
                    right: p,
                    bottom: zero_to_b,
                };
                if is_pushout(c, &left) && is_pushout(c, &right) && is_pullback(c, &right) {
                    return Some(ExtensionWitness { c: cc, c1, c2, p });
                }
            }
        }
    }
    None
}

/// Searches every configuration for an intermediate object. Configurations
/// are visited in the order (a, b); the first one without a witness is
/// reported.
pub fn check_extension_property(s: &CofStructure, mode: ValidationMode) -> ExtensionReport {
    let c = &**s.base();
    let mut report = ExtensionReport {
        mode,
        left_square: "pushout",
        configurations: 0,
        skipped: 0,
        witnesses: Vec::new(),
        failure: None,
    };
    for a in c.morphism_ids().filter(|&m| s.is_cofibration(m)) {
        let Ok((y, q)) = s.cokernel(a) else {
            report.skipped += 1;
            continue;
        };
        for &b in c.in_morphisms(y) {
            if !s.is_cofibration(b) {
                continue;
            }
            let cfg = ExtensionConfig { a, q, b };
            report.configurations += 1;
            match find_witness(s, &cfg) {
                Some(w) => report.witnesses.push((cfg, w)),
                None => {
                    report.failure = Some(cfg);
                    return report;
                }
            }
        }
    }
    report
}
