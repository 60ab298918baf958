//! Invariant harness run over an enumerated family of specs.

use std::fmt::Write as _;

use rayon::prelude::*;

use crate::bounds::{analyze_spec, inequality_checks, StateChoice};
use crate::diagram::{assemble, PlanarDiagram};
use crate::enumerate::{enumerate_family, family_slopes};
use crate::iso::is_isomorphic;
use crate::montesinos::{Hyperbolicity, MontesinosSpec, ReducedSpec};
use crate::rational::{cf_eval, slope_to_canonical_cf};
use crate::stategraph::{
    collapse, labeled_h_equal, reduce, resolve_with, structural_h_graph, ReducedStateGraph,
    Smoothing, SmoothingConvention, StateAssignment, StateMultigraph,
};

pub const TREFOIL_PD: &str = "X[1,4,2,5]\nX[3,6,4,1]\nX[5,2,6,3]\n";

/// Fixed order of the harness rows.
pub const CHECK_NAMES: [&str; 16] = [
    "smoothing convention (trefoil)",
    "pretzel exclusion",
    "continued fraction round trip",
    "structural H_A matches resolution",
    "edge identity e_A = e_B = c",
    "Turaev identity",
    "adequacy vs tangle signs",
    "primeness",
    "twist regions vs bigons",
    "mirror duality",
    "reduced Euler bound",
    "q-half bound",
    "edge-loss accounting",
    "two-edge loops classified",
    "bound sandwich",
    "report determinism",
];

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Outcome {
    Pass,
    Fail(String),
    Skip,
}

impl Outcome {
    fn from_bool(ok: bool, detail: impl FnOnce() -> String) -> Self {
        if ok {
            Outcome::Pass
        } else {
            Outcome::Fail(detail())
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct CheckRow {
    pub name: &'static str,
    pub passed: usize,
    pub failed: usize,
    pub skipped: usize,
    pub counterexample: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CheckReport {
    pub specs: usize,
    pub rows: Vec<CheckRow>,
    /// First failing item in harness order: the trefoil, the pretzel, a
    /// slope, or a spec string.
    pub first_counterexample: Option<String>,
}

impl CheckReport {
    pub fn ok(&self) -> bool {
        self.rows.iter().all(|r| r.failed == 0)
    }

    pub fn row(&self, name: &str) -> Option<&CheckRow> {
        self.rows.iter().find(|r| r.name == name)
    }

    pub fn table(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "{:<36} {:>7} {:>7} {:>7}", "check", "passed", "failed", "skipped");
        for r in &self.rows {
            let status = if r.failed == 0 { "ok" } else { "FAIL" };
            let _ = writeln!(
                out,
                "{:<36} {:>7} {:>7} {:>7}  {}",
                r.name, r.passed, r.failed, r.skipped, status
            );
        }
        let _ = writeln!(out, "specs checked: {}", self.specs);
        out
    }
}

#[derive(Default)]
struct Tally {
    rows: Vec<CheckRow>,
    first: Option<String>,
}

impl Tally {
    fn new() -> Self {
        Self {
            rows: CHECK_NAMES.iter().map(|&name| CheckRow { name, ..Default::default() }).collect(),
            first: None,
        }
    }

    fn record(&mut self, idx: usize, outcome: &Outcome, subject: &str) {
        let row = &mut self.rows[idx];
        match outcome {
            Outcome::Pass => row.passed += 1,
            Outcome::Skip => row.skipped += 1,
            Outcome::Fail(detail) => {
                row.failed += 1;
                if row.counterexample.is_none() {
                    row.counterexample = Some(format!("{subject} ({detail})"));
                }
                if self.first.is_none() {
                    self.first = Some(subject.to_string());
                }
            }
        }
    }
}

fn trefoil_outcome(convention: SmoothingConvention) -> Outcome {
    let t = PlanarDiagram::from_pd_text(TREFOIL_PD).expect("fixture parses");
    let c = t.crossing_count();
    let sa = resolve_with(&t, &StateAssignment::all(Smoothing::A, c), convention).map(|h| h.circles);
    let sb = resolve_with(&t, &StateAssignment::all(Smoothing::B, c), convention).map(|h| h.circles);
    match (sa, sb) {
        (Ok(3), Ok(2)) => Outcome::Pass,
        (a, b) => Outcome::Fail(format!("expected (|s_A|, |s_B|) = (3, 2), got ({a:?}, {b:?})")),
    }
}

fn pretzel_outcome(convention: SmoothingConvention) -> Outcome {
    let s = "1/2,-1/2,1/2,-1/2";
    match crate::bounds::analyze_with(s, StateChoice::Auto, convention) {
        Ok(a) => Outcome::from_bool(
            a.hyperbolicity == Hyperbolicity::ExcludedPretzel && !a.thm2.applicable,
            || format!("gate returned {}", a.hyperbolicity.name()),
        ),
        Err(e) => Outcome::Fail(e.to_string()),
    }
}

/// Outcomes for rows 3.. for one spec.
fn spec_outcomes(spec: &MontesinosSpec, convention: SmoothingConvention) -> Vec<Outcome> {
    let mut out = Vec::with_capacity(CHECK_NAMES.len() - 3);
    let fail_all = |msg: String, out: &mut Vec<Outcome>| {
        while out.len() < CHECK_NAMES.len() - 3 {
            out.push(Outcome::Fail(msg.clone()));
        }
    };
    let raw = match ReducedSpec::new(spec.slopes().to_vec()) {
        Ok(r) => r,
        Err(e) => {
            fail_all(e.to_string(), &mut out);
            return out;
        }
    };
    let pd = match assemble(&raw) {
        Ok(pd) => pd,
        Err(e) => {
            fail_all(e.to_string(), &mut out);
            return out;
        }
    };
    let c = pd.crossing_count();
    let ha = resolve_with(&pd, &StateAssignment::all(Smoothing::A, c), convention).expect("state length");
    let hb = resolve_with(&pd, &StateAssignment::all(Smoothing::B, c), convention).expect("state length");
    let (ga, gb) = (collapse(&ha), collapse(&hb));
    let (pos, neg) = (raw.positive_count(), raw.negative_count());
    let alternating = pos == 0 || neg == 0;

    // structural H_A
    out.push(match structural_h_graph(&raw) {
        Ok(st) => Outcome::from_bool(labeled_h_equal(&ha, &st), || {
            format!("structural {} circles, resolved {}", st.circles, ha.circles)
        }),
        Err(e) => Outcome::Fail(e.to_string()),
    });
    // edge identity
    out.push(Outcome::from_bool(ga.edge_count() == c && gb.edge_count() == c, || {
        format!("e_A = {}, e_B = {}, c = {c}", ga.edge_count(), gb.edge_count())
    }));
    // Turaev
    let vsum = ga.vertices + gb.vertices;
    out.push(if pos >= 2 && neg >= 2 {
        Outcome::from_bool(vsum == c, || format!("v_A + v_B = {vsum}, c = {c}"))
    } else if alternating {
        Outcome::from_bool(vsum == c + 2, || format!("v_A + v_B = {vsum}, c + 2 = {}", c + 2))
    } else {
        Outcome::Skip
    });
    // adequacy
    out.push(if alternating {
        Outcome::from_bool(ga.is_adequate() && gb.is_adequate(), || "alternating diagram inadequate".into())
    } else {
        let ok = ga.is_adequate() == (pos >= 2) && gb.is_adequate() == (neg >= 2);
        Outcome::from_bool(ok, || {
            format!("A-adequate {} with {pos} positive, B-adequate {} with {neg} negative", ga.is_adequate(), gb.is_adequate())
        })
    });
    // primeness
    out.push(Outcome::from_bool(pd.is_prime_bruteforce(), || "found a separating arc pair".into()));
    // twist regions; two-tangle diagrams may merge bands across tangles
    out.push(if raw.len() < 3 {
        Outcome::Skip
    } else {
        let mut built = pd.twist_regions.clone();
        let mut found = pd.detect_twist_regions();
        built.sort();
        found.sort();
        Outcome::from_bool(built == found, || {
            format!("{} constructed regions, {} detected", built.len(), found.len())
        })
    });
    // mirror duality: the crossing-flipped diagram is the literal mirror;
    // the assembled mirror is a flyped version with the same statistics
    let mut flipped = pd.clone();
    for x in &mut flipped.crossings {
        x.over_slot = (x.over_slot + 1) % 4;
    }
    let lit = collapse(&resolve_with(&flipped, &StateAssignment::all(Smoothing::A, c), convention).expect("state length"));
    out.push(match assemble(&raw.mirror()) {
        Ok(mpd) => {
            let mc = mpd.crossing_count();
            let mh = resolve_with(&mpd, &StateAssignment::all(Smoothing::A, mc), convention).expect("state length");
            let ma = collapse(&mh);
            let (rm, rb) = (reduce(&ma), reduce(&gb));
            let stats = |g: &StateMultigraph, r: &ReducedStateGraph| {
                (g.vertices, g.edge_count(), r.edge_count(), r.components(), r.chi_minus(), g.is_adequate())
            };
            let same = stats(&ma, &rm) == stats(&gb, &rb);
            Outcome::from_bool(is_isomorphic(&lit, &gb) && same, || {
                format!("mirror A {:?}, B {:?}", stats(&ma, &rm), stats(&gb, &rb))
            })
        }
        Err(e) => Outcome::Fail(e.to_string()),
    });

    // pipeline on the normalized spec
    let text = spec.to_string();
    let analysis = match analyze_spec(&text, spec, StateChoice::Auto, convention) {
        Ok(a) => a,
        Err(e) => {
            fail_all(e.to_string(), &mut out);
            return out;
        }
    };
    let ineqs = inequality_checks(&analysis);
    let ineq = |i: Option<crate::bounds::Inequality>| match i {
        Some(i) if i.hypotheses_met => {
            Outcome::from_bool(i.holds(), || format!("{} > {}", i.smaller, i.larger))
        }
        _ => Outcome::Skip,
    };
    out.push(ineq(ineqs.as_ref().and_then(|l| l.euler)));
    out.push(ineq(ineqs.as_ref().map(|l| l.q_half)));
    out.push(ineq(ineqs.as_ref().and_then(|l| l.edge_loss)));
    // loop classification, for diagrams with both signs at least twice
    out.push(match (&ineqs, &analysis.diagram) {
        (Some(l), Some(d)) if l.edge_loss.is_some() => {
            let a = l.loops_a.as_ref();
            let b = l.loops_b.as_ref();
            let ok = match (a, b) {
                (Some(a), Some(b)) => {
                    a.unclassified == 0
                        && b.unclassified == 0
                        && a.total() == d.a.reduced.lost
                        && b.total() == d.b.reduced.lost
                }
                _ => false,
            };
            Outcome::from_bool(ok, || format!("A: {a:?}, B: {b:?}"))
        }
        _ => Outcome::Skip,
    });
    // sandwich
    out.push(match (analysis.thm1.lower, analysis.thm2.lower, analysis.thm2.upper) {
        (Some(l1), Some(l2), Some(u)) => Outcome::from_bool(l1 <= u + 1e-9 && l2 <= u + 1e-9, || {
            format!("thm1 {l1}, thm2 lower {l2}, upper {u}")
        }),
        _ => Outcome::Skip,
    });
    // determinism: recompute the report from scratch
    out.push(match analyze_spec(&text, spec, StateChoice::Auto, convention) {
        Ok(again) => {
            let a = crate::report::ReportJson::from(&analysis).to_json();
            let b = crate::report::ReportJson::from(&again).to_json();
            Outcome::from_bool(a == b, || "reports differ".into())
        }
        Err(e) => Outcome::Fail(e.to_string()),
    });
    out
}

/// Runs every check over all `n`-tangle specs with denominators up to
/// `max_den`.
pub fn run_checks(n: usize, max_den: i64, convention: SmoothingConvention) -> CheckReport {
    let mut tally = Tally::new();
    tally.record(0, &trefoil_outcome(convention), "trefoil X[1,4,2,5] X[3,6,4,1] X[5,2,6,3]");
    tally.record(1, &pretzel_outcome(convention), "1/2,-1/2,1/2,-1/2");
    for s in family_slopes(max_den) {
        let ok = slope_to_canonical_cf(s).and_then(|cf| cf_eval(&cf)).map(|v| v == s).unwrap_or(false);
        tally.record(2, &Outcome::from_bool(ok, || "round trip changed the slope".into()), &s.to_string());
    }
    let family = enumerate_family(n, max_den);
    let results: Vec<Vec<Outcome>> = family.par_iter().map(|s| spec_outcomes(s, convention)).collect();
    for (spec, outcomes) in family.iter().zip(&results) {
        let subject = spec.to_string();
        for (k, o) in outcomes.iter().enumerate() {
            tally.record(k + 3, o, &subject);
        }
    }
    CheckReport { specs: family.len(), rows: tally.rows, first_counterexample: tally.first }
}
