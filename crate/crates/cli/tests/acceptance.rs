//! Acceptance suite: one PASS/FAIL line per criterion.

use std::collections::BTreeSet;
use std::path::Path;
use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use rayon::prelude::*;
use serde_json::Value;

use montevol::bounds::{analyze, analyze_spec, StateChoice, V8};
use montevol::diagram::{assemble, PlanarDiagram};
use montevol::enumerate::enumerate_family;
use montevol::iso::is_isomorphic;
use montevol::montesinos::{Hyperbolicity, MontesinosSpec, ReducedSpec};
use montevol::rational::{cf_eval, slope_to_canonical_cf, ExtendedSlope};
use montevol::stategraph::{
    collapse, labeled_h_equal, resolve, structural_h_graph, HGraph, Smoothing, StateAssignment,
};

const TOL: f64 = 1e-9;

struct Line {
    passed: bool,
    skipped: bool,
}

fn report(id: u32, name: &str, passed: bool, detail: String) -> Line {
    println!("criterion {id:>2} {:<4} {name}: {detail}", if passed { "PASS" } else { "FAIL" });
    Line { passed, skipped: false }
}

fn skip(id: u32, name: &str, detail: &str) -> Line {
    println!("criterion {id:>2} SKIP {name}: {detail}");
    Line { passed: true, skipped: true }
}

fn secs(d: Duration) -> String {
    format!("{:.2}s", d.as_secs_f64())
}

fn family(ns: &[usize], max_den: i64) -> Vec<MontesinosSpec> {
    ns.iter().flat_map(|&n| enumerate_family(n, max_den)).collect()
}

/// The diagram of a family spec and both all-A and all-B resolutions.
struct Resolved {
    spec: MontesinosSpec,
    reduced: ReducedSpec,
    pd: PlanarDiagram,
    ha: HGraph,
    hb: HGraph,
}

impl Resolved {
    fn new(spec: &MontesinosSpec) -> Self {
        let reduced = ReducedSpec::new(spec.slopes().to_vec()).expect("family specs are reduced");
        let pd = assemble(&reduced).expect("assembles");
        let c = pd.crossing_count();
        let ha = resolve(&pd, &StateAssignment::all(Smoothing::A, c)).expect("resolves");
        let hb = resolve(&pd, &StateAssignment::all(Smoothing::B, c)).expect("resolves");
        Self { spec: spec.clone(), reduced, pd, ha, hb }
    }

    fn signs(&self) -> (usize, usize) {
        (self.reduced.positive_count(), self.reduced.negative_count())
    }
}

fn has_loop(h: &HGraph) -> bool {
    h.segments.iter().any(|s| s.circles[0] == s.circles[1])
}

/// `e' - v` for the graph with parallel edges merged.
fn neg_chi_reduced(h: &HGraph) -> i64 {
    let pairs: BTreeSet<(usize, usize)> = h
        .segments
        .iter()
        .map(|s| (s.circles[0].min(s.circles[1]), s.circles[0].max(s.circles[1])))
        .collect();
    pairs.len() as i64 - h.circles as i64
}

fn q_half_count(slopes: &[ExtendedSlope]) -> i64 {
    slopes
        .iter()
        .filter(|s| {
            let (p, q) = (s.numerator().abs(), s.denominator());
            2 * p >= q && p < q
        })
        .count() as i64
}

/// Components from the PD text: each crossing joins its two under labels
/// and its two over labels.
fn pd_components(pd: &PlanarDiagram) -> usize {
    let codes: Vec<Vec<usize>> = pd
        .to_pd_text(&[])
        .lines()
        .filter(|l| l.starts_with("X["))
        .map(|l| l[2..l.len() - 1].split(',').map(|t| t.parse().unwrap()).collect())
        .collect();
    let n = codes.iter().flatten().copied().max().unwrap_or(0);
    let mut parent: Vec<usize> = (0..=n).collect();
    fn find(p: &mut [usize], x: usize) -> usize {
        if p[x] != x {
            let r = find(p, p[x]);
            p[x] = r;
        }
        p[x]
    }
    for x in &codes {
        for (a, b) in [(x[0], x[2]), (x[1], x[3])] {
            let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
            parent[ra] = rb;
        }
    }
    (1..=n).map(|l| find(&mut parent, l)).collect::<BTreeSet<_>>().len()
}

fn first_failure<T: Sync>(items: &[T], bad: impl Fn(&T) -> Option<String> + Sync + Send) -> Option<String> {
    items.par_iter().find_map_first(bad)
}

fn criterion_1() -> Line {
    let start = Instant::now();
    let mut total = 0;
    let mut bad = None;
    for q in 1..=50i64 {
        for p in -50..=50i64 {
            let s = ExtendedSlope::new(p, q).unwrap();
            if s.denominator() != q {
                continue;
            }
            total += 1;
            let ok = slope_to_canonical_cf(s).and_then(|cf| cf_eval(&cf)).map(|v| v == s).unwrap_or(false);
            if !ok && bad.is_none() {
                bad = Some(s.to_string());
            }
        }
    }
    let t = start.elapsed();
    let passed = bad.is_none() && t < Duration::from_secs(1);
    report(1, "CF round trip", passed, match bad {
        None => format!("{total} slopes in {}", secs(t)),
        Some(s) => format!("{s} did not round trip"),
    })
}

fn criterion_2(specs: &[MontesinosSpec]) -> Line {
    let start = Instant::now();
    let bad = first_failure(specs, |spec| {
        let r = Resolved::new(spec);
        let st = structural_h_graph(&r.reduced).ok()?;
        let same = labeled_h_equal(&r.ha, &st) && is_isomorphic(&collapse(&r.ha), &collapse(&st));
        (!same).then(|| spec.to_string())
    });
    let t = start.elapsed();
    let passed = bad.is_none() && t < Duration::from_secs(60);
    report(2, "oracle equivalence", passed, match bad {
        None => format!("{} specs in {}", specs.len(), secs(t)),
        Some(s) => format!("structural graph differs on {s}"),
    })
}

fn criterion_3(rs: &[Resolved]) -> Line {
    let bad = first_failure(rs, |r| {
        let c = r.pd.crossing_count();
        (r.ha.segments.len() != c || r.hb.segments.len() != c).then(|| r.spec.to_string())
    });
    report(3, "edge identity", bad.is_none(), match bad {
        None => format!("{} specs", rs.len()),
        Some(s) => format!("e_A, e_B, c disagree on {s}"),
    })
}

fn criterion_4(rs: &[Resolved]) -> Line {
    let mut tested = [0usize; 2];
    for r in rs {
        let (pos, neg) = r.signs();
        if pos >= 2 && neg >= 2 {
            tested[0] += 1;
        } else if pos == 0 || neg == 0 {
            tested[1] += 1;
        }
    }
    let bad = first_failure(rs, |r| {
        let (pos, neg) = r.signs();
        let c = r.pd.crossing_count();
        let v = r.ha.circles + r.hb.circles;
        let ok = if pos >= 2 && neg >= 2 {
            v == c
        } else if pos == 0 || neg == 0 {
            v == c + 2
        } else {
            true
        };
        (!ok).then(|| format!("{} (v_A + v_B = {v}, c = {c})", r.spec))
    });
    report(4, "Turaev identities", bad.is_none(), match bad {
        None => format!("{} mixed and {} same-sign specs", tested[0], tested[1]),
        Some(s) => s,
    })
}

fn criterion_5(rs: &[Resolved]) -> Line {
    let mixed: Vec<&Resolved> = rs.iter().filter(|r| r.signs().0 > 0 && r.signs().1 > 0).collect();
    let bad = first_failure(&mixed, |r| {
        let (pos, neg) = r.signs();
        let ok = !has_loop(&r.ha) == (pos >= 2) && !has_loop(&r.hb) == (neg >= 2);
        (!ok).then(|| r.spec.to_string())
    });
    report(5, "adequacy", bad.is_none(), match bad {
        None => format!("{} non-alternating specs", mixed.len()),
        Some(s) => format!("loop scan disagrees with sign count on {s}"),
    })
}

fn criterion_6() -> Line {
    let start = Instant::now();
    let specs = family(&[2, 3, 4], 4);
    let bad = first_failure(&specs, |spec| {
        let r = ReducedSpec::new(spec.slopes().to_vec()).ok()?;
        let pd = assemble(&r).ok()?;
        (!pd.is_prime_bruteforce()).then(|| spec.to_string())
    });
    let t = start.elapsed();
    let passed = bad.is_none() && t < Duration::from_secs(120);
    report(6, "primeness", passed, match bad {
        None => format!("{} specs in {}", specs.len(), secs(t)),
        Some(s) => format!("{s} is not prime"),
    })
}

fn both_signs_twice(rs: &[Resolved]) -> Vec<&Resolved> {
    rs.iter().filter(|r| r.signs().0 >= 2 && r.signs().1 >= 2).collect()
}

fn criterion_7(rs: &[Resolved]) -> Line {
    let sel = both_signs_twice(rs);
    let bad = first_failure(&sel, |r| {
        let t = r.pd.detect_twist_regions().len() as i64;
        let q = q_half_count(r.reduced.slopes());
        let lhs = neg_chi_reduced(&r.ha) + neg_chi_reduced(&r.hb);
        (lhs < t - q - 2).then(|| format!("{} ({lhs} < {})", r.spec, t - q - 2))
    });
    report(7, "reduced Euler bound", bad.is_none(), match bad {
        None => format!("{} specs", sel.len()),
        Some(s) => s,
    })
}

fn criterion_8(rs: &[Resolved]) -> Line {
    let sel = both_signs_twice(rs);
    let bad = first_failure(&sel, |r| {
        let t = r.pd.detect_twist_regions().len() as i64;
        let q = q_half_count(r.reduced.slopes());
        let k = pd_components(&r.pd) as i64;
        (2 * q > t + k).then(|| format!("{} (Q = {q}, t = {t}, #K = {k})", r.spec))
    });
    report(8, "Q half bound", bad.is_none(), match bad {
        None => format!("{} specs", sel.len()),
        Some(s) => s,
    })
}

fn criterion_9(specs: &[MontesinosSpec]) -> Line {
    let counted: Vec<Option<String>> = specs
        .par_iter()
        .map(|spec| {
            let a = analyze_spec(&spec.to_string(), spec, StateChoice::Auto, Default::default()).ok()?;
            let (l1, l2, u) = (a.thm1.lower?, a.thm2.lower?, a.thm2.upper?);
            let d = a.diagram.as_ref()?;
            let (t, k) = (d.pd.detect_twist_regions().len() as f64, pd_components(&d.pd) as f64);
            let formulas = (u - 2.0 * V8 * t).abs() <= TOL && (l2 - (V8 / 4.0 * (t - k - 8.0)).max(0.0)).abs() <= TOL;
            let ok = l1 <= u + TOL && l2 <= u + TOL && formulas;
            Some(if ok { String::new() } else { format!("{spec} ({l1}, {l2}, {u})") })
        })
        .collect();
    let checked = counted.iter().flatten().count();
    let bad = counted.into_iter().flatten().find(|s| !s.is_empty());
    report(9, "bound sandwich", bad.is_none() && checked > 0, match bad {
        None => format!("{checked} specs with both bounds"),
        Some(s) => s,
    })
}

fn criterion_10() -> Line {
    let a = analyze("1/2,-1/2,1/2,-1/2", StateChoice::Auto).expect("analyzes");
    let ok = a.hyperbolicity == Hyperbolicity::ExcludedPretzel
        && !a.thm1.applicable
        && !a.thm2.applicable
        && a.thm2.lower.is_none()
        && a.thm2.upper.is_none();
    report(10, "exclusion", ok, format!("hyperbolicity {}", a.hyperbolicity.name()))
}

fn criterion_11() -> Line {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures/volumes.json");
    let Ok(text) = std::fs::read_to_string(&path) else {
        return skip(11, "volume sandwich", "no fixture file");
    };
    let fixture: Value = serde_json::from_str(&text).expect("fixture is JSON");
    let rows = fixture["links"].as_array().expect("links array");
    let mut bad = None;
    let mut thm2_rows = 0;
    for row in rows {
        let slopes = row["slopes"].as_str().unwrap();
        let vol = row["volume"].as_f64().unwrap();
        let a = analyze(slopes, StateChoice::Auto).expect("fixture spec analyzes");
        let mut ok = a.thm1.lower.is_none_or(|l| l - TOL <= vol);
        if let (Some(l), Some(u)) = (a.thm2.lower, a.thm2.upper) {
            thm2_rows += 1;
            ok &= l - TOL <= vol && vol <= u + TOL;
        }
        if !ok && bad.is_none() {
            bad = Some(format!("{slopes} (volume {vol})"));
        }
    }
    report(11, "volume sandwich", bad.is_none() && !rows.is_empty(), match bad {
        None => format!("{} links, {thm2_rows} with two-sided bounds", rows.len()),
        Some(s) => s,
    })
}

fn criterion_12() -> Line {
    let bin = env!("CARGO_BIN_EXE_montevol");
    let run = |args: &[&str]| Command::new(bin).args(args).output().expect("binary runs");
    let first = run(&["analyze", "2/5,-3/7,1/2,-1/3"]);
    let second = run(&["analyze", "2/5,-3/7,1/2,-1/3"]);
    let same = first.status.success() && first.stdout == second.stdout && !first.stdout.is_empty();
    let start = Instant::now();
    let check = run(&["check", "--tangles", "3", "--max-den", "5"]);
    let t = start.elapsed();
    let passed = same && check.status.success() && t < Duration::from_secs(120);
    report(12, "determinism", passed, format!(
        "analyze identical: {same}, check exit {:?} in {}",
        check.status.code(),
        secs(t)
    ))
}

fn main() -> ExitCode {
    let specs = family(&[3, 4], 5);
    let mut lines = vec![criterion_1(), criterion_2(&specs)];
    let resolved: Vec<Resolved> = specs.par_iter().map(Resolved::new).collect();
    lines.push(criterion_3(&resolved));
    lines.push(criterion_4(&resolved));
    lines.push(criterion_5(&resolved));
    lines.push(criterion_6());
    lines.push(criterion_7(&resolved));
    lines.push(criterion_8(&resolved));
    lines.push(criterion_9(&specs));
    lines.push(criterion_10());
    lines.push(criterion_11());
    lines.push(criterion_12());
    let failed = lines.iter().filter(|l| !l.passed).count();
    let skipped = lines.iter().filter(|l| l.skipped).count();
    println!("acceptance: {} passed, {failed} failed, {skipped} skipped", lines.len() - failed - skipped);
    if failed == 0 { ExitCode::SUCCESS } else { ExitCode::FAILURE }
}
