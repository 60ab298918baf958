//! Kauffman states, the graphs `H_σ`, `𝔾_σ`, `𝔾'_σ`, and the structural
//! description of `H_A` for admissible Montesinos diagrams.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::diagram::{PlanarDiagram, SlotRef};
use crate::dsu::Dsu;
use crate::montesinos::{ReducedSpec, Sign};
use crate::rational::ExtendedSlope;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum StateGraphError {
    #[error("at least 2 tangles are required, got {0}")]
    TooFewTangles(usize),
    #[error("spec is not reduced")]
    NotReduced,
    #[error("state has {got} choices for {expected} crossings")]
    StateLength { expected: usize, got: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Smoothing {
    A,
    B,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StateAssignment(pub Vec<Smoothing>);

impl StateAssignment {
    pub fn all(s: Smoothing, crossings: usize) -> Self {
        Self(vec![s; crossings])
    }
}

/// Which slot pairing counts as the A-smoothing. `Swapped` exists to
/// exercise the convention check.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SmoothingConvention {
    #[default]
    Standard,
    Swapped,
}

impl SmoothingConvention {
    /// Slot pairs `(p, q)` joined by smoothing `s` at a crossing whose
    /// over-strand occupies slot `o`. With the standard convention the
    /// A-smoothing joins the two regions swept when the over-strand is
    /// turned counterclockwise.
    pub fn pairs(self, s: Smoothing, o: usize) -> [[usize; 2]; 2] {
        let a = [[o, (o + 3) % 4], [(o + 1) % 4, (o + 2) % 4]];
        let b = [[o, (o + 1) % 4], [(o + 2) % 4, (o + 3) % 4]];
        match (self, s) {
            (SmoothingConvention::Standard, Smoothing::A) => a,
            (SmoothingConvention::Standard, Smoothing::B) => b,
            (SmoothingConvention::Swapped, Smoothing::A) => b,
            (SmoothingConvention::Swapped, Smoothing::B) => a,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Segment {
    pub circles: [usize; 2],
    pub crossing: usize,
}

/// State circles and one segment per crossing.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HGraph {
    pub circles: usize,
    pub segments: Vec<Segment>,
    /// Circle through each diagram arc; empty for structural graphs.
    pub arc_circle: Vec<usize>,
}

impl HGraph {
    /// Sorted multiset of circle degrees, a cheap isomorphism invariant.
    pub fn degree_sequence(&self) -> Vec<usize> {
        let mut deg = vec![0; self.circles];
        for s in &self.segments {
            deg[s.circles[0]] += 1;
            deg[s.circles[1]] += 1;
        }
        deg.sort_unstable();
        deg
    }
}

pub fn resolve(pd: &PlanarDiagram, state: &StateAssignment) -> Result<HGraph, StateGraphError> {
    resolve_with(pd, state, SmoothingConvention::Standard)
}

/// Smooths every crossing and traces the resulting circles.
pub fn resolve_with(
    pd: &PlanarDiagram,
    state: &StateAssignment,
    convention: SmoothingConvention,
) -> Result<HGraph, StateGraphError> {
    let c = pd.crossing_count();
    if state.0.len() != c {
        return Err(StateGraphError::StateLength { expected: c, got: state.0.len() });
    }
    let mut dsu = Dsu::new(pd.arcs.len());
    for (x, cr) in pd.crossings.iter().enumerate() {
        for [p, q] in convention.pairs(state.0[x], cr.over_slot) {
            dsu.union(cr.arcs[p], cr.arcs[q]);
        }
    }
    let (arc_circle, k) = dsu.labels();
    let segments = pd
        .crossings
        .iter()
        .enumerate()
        .map(|(x, cr)| {
            let [[p, _], [q, _]] = convention.pairs(state.0[x], cr.over_slot);
            Segment { circles: [arc_circle[cr.arcs[p]], arc_circle[cr.arcs[q]]], crossing: x }
        })
        .collect();
    Ok(HGraph { circles: k + pd.free_loops, segments, arc_circle })
}

/// Circles of `h` that trace the full boundary of a face of the diagram,
/// i.e. bound a disk meeting no other circle.
pub fn innermost_circles(
    pd: &PlanarDiagram,
    h: &HGraph,
    state: &StateAssignment,
    convention: SmoothingConvention,
) -> Vec<bool> {
    let mut inner = vec![false; h.circles];
    if pd.crossings.is_empty() {
        inner.iter_mut().for_each(|b| *b = true);
        return inner;
    }
    for face in pd.faces() {
        let closed = face.iter().all(|&SlotRef { crossing, slot }| {
            let o = pd.crossings[crossing].over_slot;
            convention
                .pairs(state.0[crossing], o)
                .iter()
                .any(|&[p, q]| (p, q) == (slot, (slot + 1) % 4) || (q, p) == (slot, (slot + 1) % 4))
        });
        if closed {
            let s = face[0];
            inner[h.arc_circle[pd.arc_at(s)]] = true;
        }
    }
    inner
}

/// `𝔾_σ`: one vertex per state circle, one edge per segment.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StateMultigraph {
    pub vertices: usize,
    /// Edge endpoints, indexed by crossing.
    pub edges: Vec<(usize, usize)>,
}

pub fn collapse(h: &HGraph) -> StateMultigraph {
    StateMultigraph {
        vertices: h.circles,
        edges: h.segments.iter().map(|s| (s.circles[0], s.circles[1])).collect(),
    }
}

/// Graph statistics shared by the multigraph and its reduction.
fn component_stats(vertices: usize, edges: &[(usize, usize)]) -> Vec<(usize, usize)> {
    let mut dsu = Dsu::new(vertices);
    for &(a, b) in edges {
        dsu.union(a, b);
    }
    let (label, k) = dsu.labels();
    let mut stats = vec![(0usize, 0usize); k];
    for &l in &label {
        stats[l].0 += 1;
    }
    for &(a, _) in edges {
        stats[label[a]].1 += 1;
    }
    stats
}

fn chi_minus_of(vertices: usize, edges: &[(usize, usize)]) -> u64 {
    component_stats(vertices, edges)
        .iter()
        .map(|&(v, e)| (e as i64 - v as i64).max(0) as u64)
        .sum()
}

impl StateMultigraph {
    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn components(&self) -> usize {
        component_stats(self.vertices, &self.edges).len()
    }

    pub fn chi(&self) -> i64 {
        self.vertices as i64 - self.edges.len() as i64
    }

    pub fn chi_minus(&self) -> u64 {
        chi_minus_of(self.vertices, &self.edges)
    }

    /// No edge joins a vertex to itself.
    pub fn is_adequate(&self) -> bool {
        self.edges.iter().all(|&(a, b)| a != b)
    }

    /// Edges grouped by unordered vertex pair, as crossing ids.
    pub fn families(&self) -> BTreeMap<(usize, usize), Vec<usize>> {
        let mut map: BTreeMap<(usize, usize), Vec<usize>> = BTreeMap::new();
        for (x, &(a, b)) in self.edges.iter().enumerate() {
            map.entry((a.min(b), a.max(b))).or_default().push(x);
        }
        map
    }
}

/// `𝔾'_σ`: at most one edge per vertex pair.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReducedStateGraph {
    pub vertices: usize,
    pub edges: Vec<(usize, usize)>,
    pub lost: usize,
}

pub fn reduce(g: &StateMultigraph) -> ReducedStateGraph {
    let edges: Vec<_> = g.families().into_keys().collect();
    ReducedStateGraph { vertices: g.vertices, lost: g.edges.len() - edges.len(), edges }
}

impl ReducedStateGraph {
    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn components(&self) -> usize {
        component_stats(self.vertices, &self.edges).len()
    }

    pub fn chi(&self) -> i64 {
        self.vertices as i64 - self.edges.len() as i64
    }

    pub fn chi_minus(&self) -> u64 {
        chi_minus_of(self.vertices, &self.edges)
    }
}

/// Sum over components of `max(e - v, 0)` for an arbitrary edge list.
pub fn chi_minus(vertices: usize, edges: &[(usize, usize)]) -> u64 {
    chi_minus_of(vertices, edges)
}

// ---------------------------------------------------------------------------
// Structural H_A

/// Builds `H_A` of the assembled diagram tangle by tangle without resolving
/// crossings. Segment `k` belongs to crossing `k` of [`crate::diagram::assemble`].
pub fn structural_h_graph(spec: &ReducedSpec) -> Result<HGraph, StateGraphError> {
    let r = spec.len();
    if r < 2 {
        return Err(StateGraphError::TooFewTangles(r));
    }
    // piece ids: tangle t owns 2t and 2t + 1
    let mut next_circle = 2 * r;
    let mut segments = Vec::new();
    // corner -> piece for each tangle
    let mut corner_piece = Vec::with_capacity(r);
    let mut offset = 0;
    for (t, (cf, &sign)) in spec.cfs().iter().zip(spec.signs()).enumerate() {
        let n = cf.len();
        let (p0, p1) = (2 * t, 2 * t + 1);
        let mut band_start = Vec::with_capacity(n + 1);
        let mut acc = offset;
        for i in 1..=n {
            band_start.push(acc);
            acc += cf.a(i).unsigned_abs() as usize;
        }
        match sign {
            // p0 = W (NW, SW), p1 = E (NE, SE)
            Sign::Positive => corner_piece.push([p1, p0, p0, p1]),
            // p0 = N (NW, NE), p1 = S (SW, SE)
            Sign::Negative => corner_piece.push([p0, p0, p1, p1]),
        }
        let mut x = match sign {
            Sign::Positive => p1,
            Sign::Negative => p0,
        };
        for i in (1..=n).rev() {
            let a = cf.a(i).unsigned_abs() as usize;
            if a == 0 {
                continue;
            }
            let start = band_start[i - 1];
            let horizontal = (n - i) % 2 == 0;
            let chain = horizontal == (sign == Sign::Positive);
            if chain {
                let end = if i == 1 { Some(if sign == Sign::Positive { p0 } else { p1 }) } else { None };
                let mut cur = x;
                for j in 0..a {
                    let nxt = match end {
                        Some(e) if j + 1 == a => e,
                        _ => {
                            next_circle += 1;
                            next_circle - 1
                        }
                    };
                    segments.push(Segment { circles: [cur, nxt], crossing: start + a - 1 - j });
                    cur = nxt;
                }
                x = cur;
            } else {
                let anchor = if sign == Sign::Positive { p0 } else { p1 };
                for j in 0..a {
                    segments.push(Segment { circles: [anchor, x], crossing: start + j });
                }
            }
        }
        offset = acc;
    }
    let mut dsu = Dsu::new(next_circle);
    for t in 0..r {
        let u = (t + 1) % r;
        dsu.union(corner_piece[t][0], corner_piece[u][1]);
        dsu.union(corner_piece[t][3], corner_piece[u][2]);
    }
    let (label, k) = dsu.labels();
    let mut segments: Vec<Segment> = segments
        .into_iter()
        .map(|s| Segment { circles: s.circles.map(|c| label[c]), crossing: s.crossing })
        .collect();
    segments.sort_by_key(|s| s.crossing);
    Ok(HGraph { circles: k, segments, arc_circle: Vec::new() })
}

/// Looks for a circle bijection carrying every segment of `a` onto the
/// segment of `b` with the same crossing id.
pub fn labeled_h_equal(a: &HGraph, b: &HGraph) -> bool {
    if a.circles != b.circles || a.segments.len() != b.segments.len() {
        return false;
    }
    let seg_b: BTreeMap<usize, [usize; 2]> =
        b.segments.iter().map(|s| (s.crossing, s.circles)).collect();
    let mut incident: Vec<Vec<(usize, usize)>> = vec![Vec::new(); a.circles];
    for s in &a.segments {
        incident[s.circles[0]].push((s.crossing, s.circles[1]));
        incident[s.circles[1]].push((s.crossing, s.circles[0]));
    }
    let mut map = vec![usize::MAX; a.circles];
    let mut used = vec![false; b.circles];
    for root in 0..a.circles {
        if map[root] != usize::MAX {
            continue;
        }
        let Some(&(x0, _)) = incident[root].first() else {
            // isolated circles pair up with any isolated circle
            match (0..b.circles).find(|&c| !used[c] && !b.segments.iter().any(|s| s.circles.contains(&c))) {
                Some(c) => {
                    map[root] = c;
                    used[c] = true;
                    continue;
                }
                None => return false,
            }
        };
        let Some(cands) = seg_b.get(&x0) else { return false };
        let mut ok = false;
        for &cand in cands {
            let (mut m, mut u) = (map.clone(), used.clone());
            if propagate(root, cand, &incident, &seg_b, &mut m, &mut u) {
                map = m;
                used = u;
                ok = true;
                break;
            }
        }
        if !ok {
            return false;
        }
    }
    true
}

fn propagate(
    root: usize,
    image: usize,
    incident: &[Vec<(usize, usize)>],
    seg_b: &BTreeMap<usize, [usize; 2]>,
    map: &mut [usize],
    used: &mut [bool],
) -> bool {
    if used[image] {
        return false;
    }
    map[root] = image;
    used[image] = true;
    let mut stack = vec![root];
    while let Some(u) = stack.pop() {
        for &(x, w) in &incident[u] {
            let Some(&[p, q]) = seg_b.get(&x) else { return false };
            let fu = map[u];
            let fw = if p == fu {
                q
            } else if q == fu {
                p
            } else {
                return false;
            };
            if map[w] == usize::MAX {
                if used[fw] {
                    return false;
                }
                map[w] = fw;
                used[fw] = true;
                stack.push(w);
            } else if map[w] != fw {
                return false;
            }
        }
    }
    true
}

// ---------------------------------------------------------------------------
// Two-edge loops

/// Tangles with `|q| ∈ [1/2, 1)`.
pub fn q_half(spec: &ReducedSpec) -> usize {
    let half = ExtendedSlope::new(1, 2).expect("1/2");
    let one = ExtendedSlope::integer(1);
    spec.slopes()
        .iter()
        .filter(|q| {
            let a = q.abs();
            !a.cmp_value(&half).is_lt() && a.cmp_value(&one).is_lt()
        })
        .count()
}

/// Edge losses of `𝔾_A → 𝔾'_A` sorted by where the parallel edges come from.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct LoopClassification {
    /// Parallel segments inside one twist region.
    pub twist_region: usize,
    /// North-south loops through one negative tangle.
    pub negative_tangle: usize,
    /// East-west loops through exactly two positive tangles.
    pub two_positive: usize,
    pub unclassified: usize,
    pub families: usize,
}

impl LoopClassification {
    pub fn total(&self) -> usize {
        self.twist_region + self.negative_tangle + self.two_positive + self.unclassified
    }
}

/// Classifies the parallel-edge families of `g`, the all-A multigraph of
/// `assemble(spec)`. Regions whose crossings form parallel segments are
/// positive vertical bands and negative horizontal bands.
pub fn classify_two_edge_loops(
    g: &StateMultigraph,
    pd: &PlanarDiagram,
    spec: &ReducedSpec,
) -> Result<LoopClassification, StateGraphError> {
    if spec.len() < 2 {
        return Err(StateGraphError::TooFewTangles(spec.len()));
    }
    let mut short_region = vec![false; pd.twist_regions.len()];
    for (t, span) in pd.tangle_spans.iter().enumerate() {
        let cf = &spec.cfs()[t];
        let n = cf.len();
        let mut bands = (1..=n).filter(|&i| cf.a(i) != 0);
        let mut seen = std::collections::BTreeSet::new();
        for &x in span {
            let region = pd.crossings[x].twist_region.expect("constructed diagram");
            if seen.insert(region) {
                let i = bands.next().expect("one region per nonzero entry");
                let horizontal = (n - i).is_multiple_of(2);
                short_region[region] = horizontal == (spec.signs()[t] == Sign::Negative);
            }
        }
    }
    let mut out = LoopClassification::default();
    for (_, crossings) in g.families() {
        if crossings.len() < 2 {
            continue;
        }
        out.families += 1;
        let mut groups: BTreeMap<(bool, usize), usize> = BTreeMap::new();
        for &x in &crossings {
            let region = pd.crossings[x].twist_region.expect("constructed diagram");
            let key = if short_region[region] { (true, region) } else { (false, x) };
            *groups.entry(key).or_default() += 1;
        }
        for (&(short, _), &count) in &groups {
            if short {
                out.twist_region += count - 1;
            }
        }
        let rest = groups.len() - 1;
        if rest == 0 {
            continue;
        }
        let tangles: std::collections::BTreeSet<usize> =
            crossings.iter().map(|&x| pd.crossings[x].tangle.expect("constructed")).collect();
        let signs: Vec<Sign> = tangles.iter().map(|&t| spec.signs()[t]).collect();
        if tangles.len() == 1 && signs[0] == Sign::Negative {
            out.negative_tangle += rest;
        } else if tangles.len() == 2 && signs.iter().all(|&s| s == Sign::Positive) {
            out.two_positive += rest;
        } else {
            out.unclassified += rest;
        }
    }
    Ok(out)
}
