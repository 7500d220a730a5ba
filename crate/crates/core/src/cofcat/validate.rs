use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::cofcat::{CofStructure, FibStructure, WaldStructure};
use crate::fincat::{pushout_mediator, FinCategory, MorId, ObjId};

/// Which pushouts are required to exist.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ValidationMode {
    Strict,
    /// A pushout of `A >-> B` along `A -> C` is only required when
    /// `rank(B) + rank(C) - rank(A) <= max_rank`.
    Bounded {
        max_rank: i64,
    },
}

impl ValidationMode {
    pub fn guarantee(&self) -> String {
        match self {
            ValidationMode::Strict => "every pushout along a cofibration exists".to_string(),
            ValidationMode::Bounded { max_rank } => format!(
                "pushouts of A >-> B along A -> C exist whenever rank(B) + rank(C) - rank(A) <= {max_rank}"
            ),
        }
    }

    /// True when the pushout of `a -> b` along `a -> cc` need not exist.
    /// Unranked objects make every pushout required.
    pub(crate) fn exempt(&self, c: &FinCategory, a: ObjId, b: ObjId, cc: ObjId) -> bool {
        match self {
            ValidationMode::Strict => false,
            ValidationMode::Bounded { max_rank } => match (c.rank(a), c.rank(b), c.rank(cc)) {
                (Some(ra), Some(rb), Some(rc)) => rb + rc - ra > *max_rank,
                _ => false,
            },
        }
    }
}

impl fmt::Display for ValidationMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ValidationMode::Strict => f.write_str("strict"),
            ValidationMode::Bounded { max_rank } => write!(f, "bounded(max_rank={max_rank})"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum CofViolation {
    NotAZeroObject {
        object: ObjId,
        maps_in: usize,
        maps_out: usize,
    },
    ZeroMapNotCofibration {
        object: ObjId,
        morphism: MorId,
    },
    IsoNotCofibration {
        morphism: MorId,
    },
    CompositeNotCofibration {
        g: MorId,
        f: MorId,
        composite: MorId,
    },
    PushoutEscapes {
        cofibration: MorId,
        along: MorId,
    },
    PushoutLegNotCofibration {
        cofibration: MorId,
        along: MorId,
        leg: MorId,
    },
    MissingRank {
        object: ObjId,
    },
}

impl fmt::Display for CofViolation {
    fn fmt(&self, fm: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CofViolation::NotAZeroObject {
                object,
                maps_in,
                maps_out,
            } => write!(
                fm,
                "zero object is not zero at {object}: {maps_in} maps from zero, {maps_out} maps to zero"
            ),
            CofViolation::ZeroMapNotCofibration { object, morphism } => {
                write!(fm, "map {morphism} from zero to {object} is not a cofibration")
            }
            CofViolation::IsoNotCofibration { morphism } => {
                write!(fm, "isomorphism {morphism} is not a cofibration")
            }
            CofViolation::CompositeNotCofibration { g, f, composite } => {
                write!(fm, "composite {g} . {f} = {composite} is not a cofibration")
            }
            CofViolation::PushoutEscapes { cofibration, along } => {
                write!(fm, "pushout escapes category: {cofibration} along {along}")
            }
            CofViolation::PushoutLegNotCofibration { cofibration, along, leg } => {
                write!(fm, "pushout of {cofibration} along {along} has leg {leg} that is not a cofibration")
            }
            CofViolation::MissingRank { object } => write!(fm, "object {object} has no rank"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CofReport {
    pub mode: ValidationMode,
    pub guarantee: String,
    pub pushouts_checked: usize,
    pub pushouts_exempt: usize,
    pub violations: Vec<CofViolation>,
}

impl CofReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

fn zero_violations(c: &FinCategory, zero: ObjId) -> Vec<CofViolation> {
    let mut v = Vec::new();
    for x in c.objects() {
        let maps_in = c.hom(zero, x).len();
        let maps_out = c.hom(x, zero).len();
        if maps_in != 1 || maps_out != 1 {
            v.push(CofViolation::NotAZeroObject {
                object: x,
                maps_in,
                maps_out,
            });
        }
    }
    v
}

/// Checks the cofibration axioms. Pushouts go through the structure's
/// cache, so a validated structure is cheap to use afterwards.
pub fn validate_cof(s: &CofStructure, mode: ValidationMode) -> CofReport {
    let c = &**s.base();
    let mut violations = zero_violations(c, s.zero());
    let mut report = CofReport {
        mode,
        guarantee: mode.guarantee(),
        pushouts_checked: 0,
        pushouts_exempt: 0,
        violations: Vec::new(),
    };
    if !violations.is_empty() {
        report.violations = violations;
        return report;
    }
    if let ValidationMode::Bounded { .. } = mode {
        for x in c.objects() {
            if c.rank(x).is_none() {
                violations.push(CofViolation::MissingRank { object: x });
            }
        }
    }
    for x in c.objects() {
        let m = s.from_zero(x);
        if !s.is_cofibration(m) {
            violations.push(CofViolation::ZeroMapNotCofibration {
                object: x,
                morphism: m,
            });
        }
    }
    for m in c.morphism_ids() {
        if c.is_iso(m) && !s.is_cofibration(m) {
            violations.push(CofViolation::IsoNotCofibration { morphism: m });
        }
    }
    for f in c.morphism_ids().filter(|&f| s.is_cofibration(f)) {
        for g in s.cofibrations_from(c.target(f)) {
            let h = c.compose(g, f);
            if !s.is_cofibration(h) {
                violations.push(CofViolation::CompositeNotCofibration { g, f, composite: h });
            }
        }
    }
    for i in c.morphism_ids().filter(|&i| s.is_cofibration(i)) {
        let (a, b) = (c.source(i), c.target(i));
        for &f in c.out_morphisms(a) {
            if mode.exempt(c, a, b, c.target(f)) {
                report.pushouts_exempt += 1;
                continue;
            }
            report.pushouts_checked += 1;
            match s.pushout(i, f).expect("span shares its source") {
                None => violations.push(CofViolation::PushoutEscapes {
                    cofibration: i,
                    along: f,
                }),
                Some(sq) => {
                    if !s.is_cofibration(sq.bottom) {
                        violations.push(CofViolation::PushoutLegNotCofibration {
                            cofibration: i,
                            along: f,
                            leg: sq.bottom,
                        });
                    }
                }
            }
        }
    }
    report.violations = violations;
    report
}

/// Checks the dual axioms directly, using pullbacks in the given category.
pub fn validate_fib(s: &FibStructure, mode: ValidationMode) -> CofReport {
    let c = &**s.base();
    let mut violations = zero_violations(c, s.zero());
    let mut report = CofReport {
        mode,
        guarantee: mode
            .guarantee()
            .replace("pushouts", "pullbacks")
            .replace(">->", "->>"),
        pushouts_checked: 0,
        pushouts_exempt: 0,
        violations: Vec::new(),
    };
    if !violations.is_empty() {
        report.violations = violations;
        return report;
    }
    if let ValidationMode::Bounded { .. } = mode {
        for x in c.objects() {
            if c.rank(x).is_none() {
                violations.push(CofViolation::MissingRank { object: x });
            }
        }
    }
    for x in c.objects() {
        let m = c.hom(x, s.zero())[0];
        if !s.is_fibration(m) {
            violations.push(CofViolation::ZeroMapNotCofibration {
                object: x,
                morphism: m,
            });
        }
    }
    for m in c.morphism_ids() {
        if c.is_iso(m) && !s.is_fibration(m) {
            violations.push(CofViolation::IsoNotCofibration { morphism: m });
        }
    }
    // same order as validate_cof so dual reports line up
    for f in c.morphism_ids().filter(|&f| s.is_fibration(f)) {
        for &g in c.in_morphisms(c.source(f)) {
            if !s.is_fibration(g) {
                continue;
            }
            let h = c.compose(f, g);
            if !s.is_fibration(h) {
                violations.push(CofViolation::CompositeNotCofibration { g, f, composite: h });
            }
        }
    }
    for p in c.morphism_ids().filter(|&p| s.is_fibration(p)) {
        let (e, b) = (c.source(p), c.target(p));
        for &f in c.in_morphisms(b) {
            if mode.exempt(c, b, e, c.source(f)) {
                report.pushouts_exempt += 1;
                continue;
            }
            report.pushouts_checked += 1;
            match s.pullback(p, f).expect("cospan shares its target") {
                None => violations.push(CofViolation::PushoutEscapes {
                    cofibration: p,
                    along: f,
                }),
                Some(sq) => {
                    if !s.is_fibration(sq.left) {
                        violations.push(CofViolation::PushoutLegNotCofibration {
                            cofibration: p,
                            along: f,
                            leg: sq.left,
                        });
                    }
                }
            }
        }
    }
    report.violations = violations;
    report
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum WaldViolation {
    IsoNotWeq {
        morphism: MorId,
    },
    CompositeNotWeq {
        g: MorId,
        f: MorId,
        composite: MorId,
    },
    /// Spans `C <- A >-> B` and `C' <- A' >-> B'` with weak equivalences
    /// `a, b, c` between them whose induced pushout map is not a weak
    /// equivalence.
    Glueing {
        span: (MorId, MorId),
        span2: (MorId, MorId),
        components: (MorId, MorId, MorId),
        induced: MorId,
    },
}

impl fmt::Display for WaldViolation {
    fn fmt(&self, fm: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            WaldViolation::IsoNotWeq { morphism } => {
                write!(fm, "isomorphism {morphism} is not a weak equivalence")
            }
            WaldViolation::CompositeNotWeq { g, f, composite } => {
                write!(fm, "composite {g} . {f} = {composite} is not a weak equivalence")
            }
            WaldViolation::Glueing {
                span,
                span2,
                components,
                induced,
            } => write!(
                fm,
                "glueing fails: spans ({}, {}) -> ({}, {}) via ({}, {}, {}) induce {} which is not a weak equivalence",
                span.0, span.1, span2.0, span2.1, components.0, components.1, components.2, induced
            ),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WaldReport {
    pub cofibrations: CofReport,
    pub span_maps_checked: usize,
    pub violations: Vec<WaldViolation>,
}

impl WaldReport {
    pub fn is_valid(&self) -> bool {
        self.cofibrations.is_valid() && self.violations.is_empty()
    }
}

/// Cofibration axioms plus the weak-equivalence axioms, including the
/// glueing condition over every span map whose objects lie in the category.
pub fn validate_wald(w: &WaldStructure, mode: ValidationMode) -> WaldReport {
    let s = w.cof();
    let c = &**s.base();
    let cof_report = validate_cof(s, mode);
    let mut violations = Vec::new();
    let mut span_maps_checked = 0;
    if cof_report
        .violations
        .iter()
        .any(|v| matches!(v, CofViolation::NotAZeroObject { .. }))
    {
        return WaldReport {
            cofibrations: cof_report,
            span_maps_checked,
            violations,
        };
    }
    for m in c.morphism_ids() {
        if c.is_iso(m) && !w.is_weq(m) {
            violations.push(WaldViolation::IsoNotWeq { morphism: m });
        }
    }
    for f in c.morphism_ids().filter(|&f| w.is_weq(f)) {
        for &g in c.out_morphisms(c.target(f)) {
            if w.is_weq(g) {
                let h = c.compose(g, f);
                if !w.is_weq(h) {
                    violations.push(WaldViolation::CompositeNotWeq { g, f, composite: h });
                }
            }
        }
    }
    let weq_from = |x: ObjId| c.out_morphisms(x).iter().copied().filter(|&m| w.is_weq(m));
    // for each weak equivalence wa: A -> A', the maps out of A' keyed by
    // their precomposite with wa
    let mut pulled: HashMap<MorId, HashMap<MorId, Vec<MorId>>> = HashMap::new();
    for wa in c.morphism_ids().filter(|&m| w.is_weq(m)) {
        let mut index: HashMap<MorId, Vec<MorId>> = HashMap::new();
        for &g in c.out_morphisms(c.target(wa)) {
            index.entry(c.compose(g, wa)).or_default().push(g);
        }
        pulled.insert(wa, index);
    }
    for i in c.morphism_ids().filter(|&i| s.is_cofibration(i)) {
        let (a, b) = (c.source(i), c.target(i));
        for &f in c.out_morphisms(a) {
            let Ok(Some(sq)) = s.pushout(i, f) else {
                continue;
            };
            for wa in weq_from(a) {
                let index = &pulled[&wa];
                for wb in weq_from(b) {
                    let Some(i2s) = index.get(&c.compose(wb, i)) else {
                        continue;
                    };
                    for &i2 in i2s.iter().filter(|&&m| s.is_cofibration(m)) {
                        for wc in weq_from(c.target(f)) {
                            let Some(f2s) = index.get(&c.compose(wc, f)) else {
                                continue;
                            };
                            for &f2 in f2s {
                                let Ok(Some(sq2)) = s.pushout(i2, f2) else {
                                    continue;
                                };
                                span_maps_checked += 1;
                                let x = c.compose(sq2.right, wb);
                                let y = c.compose(sq2.bottom, wc);
                                let h =
                                    pushout_mediator(c, &sq, x, y).expect("pushout is universal");
                                if !w.is_weq(h) {
                                    violations.push(WaldViolation::Glueing {
                                        span: (i, f),
                                        span2: (i2, f2),
                                        components: (wa, wb, wc),
                                        induced: h,
                                    });
                                }
                            }
                        }
                    }
                }
            }
        }
    }
    WaldReport {
        cofibrations: cof_report,
        span_maps_checked,
        violations,
    }
}
