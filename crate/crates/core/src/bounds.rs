//! Volume bounds and the analysis pipeline.

use thiserror::Error;

use crate::diagram::{assemble, DiagramError, PlanarDiagram};
use crate::montesinos::{
    hyperbolicity_gate, normalize, validate, Hyperbolicity, LinkClass, MontesinosError,
    MontesinosSpec, ReducedSpec,
};
use crate::rational::ExtendedSlope;
use crate::stategraph::{
    classify_two_edge_loops, collapse, q_half, reduce, resolve_with, HGraph, LoopClassification,
    ReducedStateGraph, Smoothing, SmoothingConvention, StateAssignment, StateGraphError,
    StateMultigraph,
};

/// Volume of the regular ideal octahedron.
pub const V8: f64 = 3.663862376708876;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AnalyzeError {
    #[error(transparent)]
    Spec(#[from] MontesinosError),
    #[error(transparent)]
    Diagram(#[from] DiagramError),
    #[error(transparent)]
    StateGraph(#[from] StateGraphError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum StateChoice {
    #[default]
    Auto,
    A,
    B,
}

/// `v8 * (χ₋ - 1)`, raw and clamped at zero.
pub fn thm_main_lower(chi_minus: u64) -> (f64, f64) {
    let raw = V8 * (chi_minus as f64 - 1.0);
    (raw, raw.max(0.0))
}

/// `(v8/4 * (t - #K - 8), 2 * v8 * t)` with the lower bound also clamped.
pub fn thm2_bounds(twist: usize, components: usize) -> (f64, f64, f64) {
    let raw = V8 / 4.0 * (twist as f64 - components as f64 - 8.0);
    (raw, raw.max(0.0), 2.0 * V8 * twist as f64)
}

/// 0 for alternating diagrams and for three or more tangles of one sign,
/// 1 otherwise.
pub fn ec_bound(spec: &ReducedSpec) -> u8 {
    let alt = spec.class().is_alternating();
    if alt || spec.positive_count() >= 3 || spec.negative_count() >= 3 {
        0
    } else {
        1
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StateStats {
    pub vertices: usize,
    pub edges: usize,
    pub reduced_edges: usize,
    pub components: usize,
    pub chi_minus: u64,
    pub adequate: bool,
}

impl StateStats {
    fn new(g: &StateMultigraph, r: &ReducedStateGraph) -> Self {
        Self {
            vertices: g.vertices,
            edges: g.edge_count(),
            reduced_edges: r.edge_count(),
            components: r.components(),
            chi_minus: r.chi_minus(),
            adequate: g.is_adequate(),
        }
    }

    /// `-χ(𝔾'_σ) = e' - v`.
    pub fn neg_chi_reduced(&self) -> i64 {
        self.reduced_edges as i64 - self.vertices as i64
    }
}

/// One Kauffman state of the diagram with its graphs.
#[derive(Debug, Clone)]
pub struct StateData {
    pub h: HGraph,
    pub graph: StateMultigraph,
    pub reduced: ReducedStateGraph,
    pub stats: StateStats,
}

impl StateData {
    fn compute(
        pd: &PlanarDiagram,
        s: Smoothing,
        convention: SmoothingConvention,
    ) -> Result<Self, StateGraphError> {
        let h = resolve_with(pd, &StateAssignment::all(s, pd.crossing_count()), convention)?;
        let graph = collapse(&h);
        let reduced = reduce(&graph);
        let stats = StateStats::new(&graph, &reduced);
        Ok(Self { h, graph, reduced, stats })
    }
}

#[derive(Debug, Clone)]
pub struct DiagramData {
    pub spec: ReducedSpec,
    pub pd: PlanarDiagram,
    pub a: StateData,
    pub b: StateData,
    pub crossings: usize,
    pub twist_number: usize,
    pub components: usize,
    pub q_half: usize,
}

impl DiagramData {
    pub fn compute(spec: ReducedSpec, convention: SmoothingConvention) -> Result<Self, AnalyzeError> {
        let pd = assemble(&spec)?;
        let a = StateData::compute(&pd, Smoothing::A, convention)?;
        let b = StateData::compute(&pd, Smoothing::B, convention)?;
        Ok(Self {
            crossings: pd.crossing_count(),
            twist_number: pd.twist_number(),
            components: pd.count_components(),
            q_half: q_half(&spec),
            spec,
            pd,
            a,
            b,
        })
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct Thm1 {
    pub applicable: bool,
    pub state: Option<Smoothing>,
    pub raw_a: Option<f64>,
    pub raw_b: Option<f64>,
    pub raw: Option<f64>,
    pub lower: Option<f64>,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct Thm2 {
    pub applicable: bool,
    pub lower_raw: Option<f64>,
    pub lower: Option<f64>,
    pub upper: Option<f64>,
}

#[derive(Debug, Clone)]
pub struct Analysis {
    pub input: String,
    pub slopes: Vec<ExtendedSlope>,
    pub class: LinkClass,
    pub diagram: Option<DiagramData>,
    pub ec_bound: Option<u8>,
    pub thm1: Thm1,
    pub thm2: Thm2,
    pub hyperbolicity: Hyperbolicity,
    /// The main lower bound was taken from the B state, i.e. from the A state of
    /// the mirror image.
    pub mirrored: bool,
}

pub fn analyze(input: &str, choice: StateChoice) -> Result<Analysis, AnalyzeError> {
    analyze_with(input, choice, SmoothingConvention::Standard)
}

pub fn analyze_with(
    input: &str,
    choice: StateChoice,
    convention: SmoothingConvention,
) -> Result<Analysis, AnalyzeError> {
    let spec: MontesinosSpec = input.parse()?;
    analyze_spec(input, &spec, choice, convention)
}

pub fn analyze_spec(
    input: &str,
    spec: &MontesinosSpec,
    choice: StateChoice,
    convention: SmoothingConvention,
) -> Result<Analysis, AnalyzeError> {
    let valid = validate(spec)?;
    if valid.slopes.len() < 3 {
        let class = LinkClass::from_signs(&valid.signs);
        let diagram = match ReducedSpec::new(valid.slopes.clone()) {
            Ok(r) if r.len() >= 2 => Some(DiagramData::compute(r, convention)?),
            _ => None,
        };
        return Ok(Analysis {
            input: input.to_string(),
            slopes: valid.slopes,
            class,
            diagram,
            ec_bound: None,
            thm1: Thm1::default(),
            thm2: Thm2::default(),
            hyperbolicity: Hyperbolicity::Assumed,
            mirrored: false,
        });
    }
    let reduced = normalize(spec)?;
    let hyperbolicity = hyperbolicity_gate(&reduced);
    let excluded = hyperbolicity == Hyperbolicity::ExcludedPretzel;
    let (pos, neg) = (reduced.positive_count(), reduced.negative_count());
    let data = DiagramData::compute(reduced.clone(), convention)?;

    let mut thm1 = Thm1::default();
    let mut mirrored = false;
    if !excluded {
        let use_a = pos >= 2 && choice != StateChoice::B;
        let use_b = neg >= 2 && choice != StateChoice::A;
        if use_a {
            thm1.raw_a = Some(thm_main_lower(data.a.stats.chi_minus).0);
        }
        if use_b {
            thm1.raw_b = Some(thm_main_lower(data.b.stats.chi_minus).0);
        }
        let pick = match (thm1.raw_a, thm1.raw_b) {
            (Some(a), Some(b)) if b > a => Some((Smoothing::B, data.b.stats.chi_minus)),
            (Some(_), _) => Some((Smoothing::A, data.a.stats.chi_minus)),
            (None, Some(_)) => Some((Smoothing::B, data.b.stats.chi_minus)),
            (None, None) => None,
        };
        if let Some((s, chi)) = pick {
            let (raw, lower) = thm_main_lower(chi);
            thm1 = Thm1 { applicable: true, state: Some(s), raw: Some(raw), lower: Some(lower), ..thm1 };
            mirrored = s == Smoothing::B;
        }
    }
    let mut thm2 = Thm2::default();
    if !excluded && pos >= 2 && neg >= 2 {
        let (raw, lower, upper) = thm2_bounds(data.twist_number, data.components);
        thm2 = Thm2 { applicable: true, lower_raw: Some(raw), lower: Some(lower), upper: Some(upper) };
    }
    Ok(Analysis {
        input: input.to_string(),
        slopes: reduced.slopes().to_vec(),
        class: reduced.class(),
        ec_bound: Some(ec_bound(&reduced)),
        diagram: Some(data),
        thm1,
        thm2,
        hyperbolicity,
        mirrored,
    })
}

/// `smaller <= larger`, with a flag for whether the statement's hypotheses
/// hold on this diagram.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Inequality {
    pub smaller: i64,
    pub larger: i64,
    pub hypotheses_met: bool,
}

impl Inequality {
    pub fn holds(&self) -> bool {
        self.smaller <= self.larger
    }

    pub fn slack(&self) -> i64 {
        self.larger - self.smaller
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InequalityChecks {
    /// `t - Q - 2 <= -χ(𝔾'_A) - χ(𝔾'_B)`; `None` unless both signs occur
    /// at least twice.
    pub euler: Option<Inequality>,
    /// `2 Q <= t + #K`.
    pub q_half: Inequality,
    /// `(e_A - e'_A) + (e_B - e'_B) <= c - t + Q + 2`.
    pub edge_loss: Option<Inequality>,
    pub loops_a: Option<LoopClassification>,
    pub loops_b: Option<LoopClassification>,
}

pub fn inequality_checks(analysis: &Analysis) -> Option<InequalityChecks> {
    let d = analysis.diagram.as_ref()?;
    let (pos, neg) = (d.spec.positive_count(), d.spec.negative_count());
    let both = pos >= 2 && neg >= 2 && d.spec.len() >= 3;
    let (t, q, k, c) = (d.twist_number as i64, d.q_half as i64, d.components as i64, d.crossings as i64);
    let euler = both.then(|| Inequality {
        smaller: t - q - 2,
        larger: d.a.stats.neg_chi_reduced() + d.b.stats.neg_chi_reduced(),
        hypotheses_met: true,
    });
    let q_half = Inequality { smaller: 2 * q, larger: t + k, hypotheses_met: both };
    let loops_a = classify_two_edge_loops(&d.a.graph, &d.pd, &d.spec).ok();
    let loops_b = mirror_loops(d);
    let edge_loss = both.then(|| Inequality {
        smaller: (d.a.reduced.lost + d.b.reduced.lost) as i64,
        larger: c - t + q + 2,
        hypotheses_met: true,
    });
    Some(InequalityChecks { euler, q_half, edge_loss, loops_a, loops_b })
}

/// B-side losses, classified as A-side losses of the mirror diagram.
fn mirror_loops(d: &DiagramData) -> Option<LoopClassification> {
    let m = d.spec.mirror();
    let pd = assemble(&m).ok()?;
    let g = collapse(
        &resolve_with(&pd, &StateAssignment::all(Smoothing::A, pd.crossing_count()), SmoothingConvention::Standard)
            .ok()?,
    );
    classify_two_edge_loops(&g, &pd, &m).ok()
}
