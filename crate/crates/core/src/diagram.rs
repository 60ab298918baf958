//! Reduced admissible Montesinos diagrams as PD codes.
//!
//! Crossing slots are numbered counterclockwise from the north-east corner:
//! 0 = NE, 1 = NW, 2 = SW, 3 = SE. Slots `o` and `o + 2` carry the
//! over-strand. Positive crossings have their over-strand running NE to SW.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use thiserror::Error;

use crate::dsu::Dsu;
use crate::montesinos::{ReducedSpec, Sign};
use crate::rational::{ContinuedFraction, ExtendedSlope, RationalError};

pub const NE: usize = 0;
pub const NW: usize = 1;
pub const SW: usize = 2;
pub const SE: usize = 3;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DiagramError {
    #[error("continued fraction {0} is not canonical for this sign")]
    NonCanonicalCF(String),
    #[error("at least 2 tangles are required, got {0}")]
    TooFewTangles(usize),
    #[error("invalid PD code: {0}")]
    InvalidPd(String),
    #[error(transparent)]
    Arithmetic(#[from] RationalError),
}

/// A half-edge position: slot `slot` of crossing `crossing`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SlotRef {
    pub crossing: usize,
    pub slot: usize,
}

impl SlotRef {
    pub fn new(crossing: usize, slot: usize) -> Self {
        Self { crossing, slot: slot % 4 }
    }

    pub fn offset(self, k: usize) -> Self {
        Self::new(self.crossing, self.slot + k)
    }

    fn index(self) -> usize {
        4 * self.crossing + self.slot
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Crossing {
    /// Arc id at each slot.
    pub arcs: [usize; 4],
    pub over_slot: usize,
    /// Sign of the tangle the crossing was built in, if any.
    pub sign: Option<Sign>,
    pub tangle: Option<usize>,
    pub twist_region: Option<usize>,
}

/// An oriented arc between two crossing slots.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Arc {
    pub tail: SlotRef,
    pub head: SlotRef,
}

impl Arc {
    pub fn other_end(&self, end: SlotRef) -> SlotRef {
        if self.tail == end {
            self.head
        } else {
            self.tail
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PlanarDiagram {
    pub crossings: Vec<Crossing>,
    pub arcs: Vec<Arc>,
    /// Crossingless circles, not represented by arcs.
    pub free_loops: usize,
    pub tangle_spans: Vec<Vec<usize>>,
    pub twist_regions: Vec<Vec<usize>>,
}

// ---------------------------------------------------------------------------
// Tangle fragments

/// Endpoint of a construction wire: a crossing slot or a bare corner point
/// that is later contracted away.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Point {
    Slot(SlotRef),
    Virtual(usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BandKind {
    Horizontal,
    Vertical,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Band {
    pub kind: BandKind,
    /// The two corners the band was attached to.
    pub corners: [usize; 2],
    pub crossings: Vec<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FragmentCrossing {
    pub over_slot: usize,
    pub sign: Sign,
    pub band: usize,
}

/// An admissible rational tangle before assembly. Virtual points 0..4 are
/// the initial corners NE, NW, SW, SE.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TangleFragment {
    pub cf: ContinuedFraction,
    pub sign: Sign,
    pub crossings: Vec<FragmentCrossing>,
    pub wires: Vec<(Point, Point)>,
    pub boundary: [Point; 4],
    pub bands: Vec<Band>,
}

fn over_slot_for(sign: Sign) -> usize {
    match sign {
        Sign::Positive => NE,
        Sign::Negative => NW,
    }
}

/// Builds the admissible diagram of `cf`: bands `a_1` first, alternating so
/// that `a_n` is horizontal. Vertical bands go on the north side; horizontal
/// bands go east for positive tangles and west for negative ones.
pub fn build_admissible_tangle(
    cf: &ContinuedFraction,
    sign: Sign,
) -> Result<TangleFragment, DiagramError> {
    let n = cf.len();
    let entries = cf.entries();
    let uniform = entries.iter().all(|&a| match sign {
        Sign::Positive => a >= 0,
        Sign::Negative => a <= 0,
    });
    let interior_nonzero = entries.iter().skip(1).all(|&a| a != 0);
    if n == 0 || !uniform || !interior_nonzero || cf.crossing_count() == 0 {
        return Err(DiagramError::NonCanonicalCF(cf.to_string()));
    }
    let mut wires = Vec::new();
    let v = |i| Point::Virtual(i);
    if n.is_multiple_of(2) {
        wires.push((v(NW), v(SW)));
        wires.push((v(NE), v(SE)));
    } else {
        wires.push((v(NW), v(NE)));
        wires.push((v(SW), v(SE)));
    }
    let mut boundary = [v(NE), v(NW), v(SW), v(SE)];
    let mut crossings = Vec::new();
    let mut bands = Vec::new();
    let over_slot = over_slot_for(sign);
    for i in 1..=n {
        let a = cf.a(i).unsigned_abs() as usize;
        if a == 0 {
            continue;
        }
        let horizontal = (n - i).is_multiple_of(2);
        let (kind, corners) = match (horizontal, sign) {
            (false, _) => (BandKind::Vertical, [NW, NE]),
            (true, Sign::Positive) => (BandKind::Horizontal, [NE, SE]),
            (true, Sign::Negative) => (BandKind::Horizontal, [NW, SW]),
        };
        let band = bands.len();
        let mut ids = Vec::with_capacity(a);
        for _ in 0..a {
            let x = crossings.len();
            crossings.push(FragmentCrossing { over_slot, sign, band });
            ids.push(x);
            let s = |slot| Point::Slot(SlotRef::new(x, slot));
            match corners {
                [NE, SE] => {
                    wires.push((boundary[NE], s(NW)));
                    wires.push((boundary[SE], s(SW)));
                    boundary[NE] = s(NE);
                    boundary[SE] = s(SE);
                }
                [NW, SW] => {
                    wires.push((boundary[NW], s(NE)));
                    wires.push((boundary[SW], s(SE)));
                    boundary[NW] = s(NW);
                    boundary[SW] = s(SW);
                }
                _ => {
                    wires.push((boundary[NW], s(SW)));
                    wires.push((boundary[NE], s(SE)));
                    boundary[NW] = s(NW);
                    boundary[NE] = s(NE);
                }
            }
        }
        bands.push(Band { kind, corners, crossings: ids });
    }
    Ok(TangleFragment { cf: cf.clone(), sign, crossings, wires, boundary, bands })
}

/// Recomputes a fragment's slope by replaying its bands as `x + a`
/// (horizontal) and `1/(1/x + a)` (vertical), reading the start tangle from
/// the initial wiring and each crossing's contribution from its over slot.
pub fn slope_recovery_oracle(fragment: &TangleFragment) -> Result<ExtendedSlope, RationalError> {
    let starts_infinite = fragment.wires.iter().take(2).any(|&(a, b)| {
        (a, b) == (Point::Virtual(NW), Point::Virtual(SW))
            || (a, b) == (Point::Virtual(SW), Point::Virtual(NW))
    });
    let mut x = if starts_infinite { ExtendedSlope::INFINITY } else { ExtendedSlope::ZERO };
    for band in &fragment.bands {
        let a: i64 = band
            .crossings
            .iter()
            .map(|&c| if fragment.crossings[c].over_slot % 2 == NE { 1 } else { -1 })
            .sum();
        let vertical = band.corners.contains(&NW) && band.corners.contains(&NE);
        x = if vertical {
            x.recip().checked_add_integer(a)?.recip()
        } else {
            x.checked_add_integer(a)?
        };
    }
    Ok(x)
}

// ---------------------------------------------------------------------------
// Assembly

struct CrossingMeta {
    over_slot: usize,
    sign: Option<Sign>,
    tangle: Option<usize>,
    twist_region: Option<usize>,
}

/// Cyclic sum of the spec's admissible tangles with numerator closure.
pub fn assemble(spec: &ReducedSpec) -> Result<PlanarDiagram, DiagramError> {
    if spec.len() < 2 {
        return Err(DiagramError::TooFewTangles(spec.len()));
    }
    let mut meta = Vec::new();
    let mut wires = Vec::new();
    let mut boundaries = Vec::new();
    let mut tangle_spans = Vec::new();
    let mut twist_regions: Vec<Vec<usize>> = Vec::new();
    let mut voff = 0;
    for (t, (cf, &sign)) in spec.cfs().iter().zip(spec.signs()).enumerate() {
        let frag = build_admissible_tangle(cf, sign)?;
        let xoff = meta.len();
        let shift = |p: Point| match p {
            Point::Slot(s) => Point::Slot(SlotRef::new(s.crossing + xoff, s.slot)),
            Point::Virtual(v) => Point::Virtual(v + voff),
        };
        let region_base = twist_regions.len();
        for band in &frag.bands {
            twist_regions.push(band.crossings.iter().map(|&c| c + xoff).collect());
        }
        for c in &frag.crossings {
            meta.push(CrossingMeta {
                over_slot: c.over_slot,
                sign: Some(c.sign),
                tangle: Some(t),
                twist_region: Some(region_base + c.band),
            });
        }
        tangle_spans.push((xoff..meta.len()).collect());
        wires.extend(frag.wires.iter().map(|&(a, b)| (shift(a), shift(b))));
        boundaries.push(frag.boundary.map(shift));
        voff += 4;
    }
    let r = boundaries.len();
    for t in 0..r {
        let u = (t + 1) % r;
        wires.push((boundaries[t][NE], boundaries[u][NW]));
        wires.push((boundaries[t][SE], boundaries[u][SW]));
    }
    let start = walk_to_slot(&wires, boundaries[0][NW], boundaries[r - 1][NE]);
    let mut pd = from_wires(meta, voff, &wires, start)?;
    pd.tangle_spans = tangle_spans;
    pd.twist_regions = twist_regions;
    Ok(pd)
}

/// Follows wires from `from`, never stepping back to `avoid`, until a slot.
fn walk_to_slot(wires: &[(Point, Point)], from: Point, avoid: Point) -> Option<SlotRef> {
    let (mut prev, mut cur) = (avoid, from);
    for _ in 0..=wires.len() {
        if let Point::Slot(s) = cur {
            return Some(s);
        }
        let next = wires.iter().find_map(|&(a, b)| {
            if a == cur && b != prev {
                Some(b)
            } else if b == cur && a != prev {
                Some(a)
            } else {
                None
            }
        })?;
        prev = cur;
        cur = next;
    }
    None
}

fn from_wires(
    meta: Vec<CrossingMeta>,
    virtuals: usize,
    wires: &[(Point, Point)],
    start: Option<SlotRef>,
) -> Result<PlanarDiagram, DiagramError> {
    let c = meta.len();
    let idx = |p: Point| match p {
        Point::Slot(s) => s.index(),
        Point::Virtual(v) => 4 * c + v,
    };
    let mut degree = vec![0usize; 4 * c + virtuals];
    let mut dsu = Dsu::new(4 * c + virtuals);
    for &(a, b) in wires {
        degree[idx(a)] += 1;
        degree[idx(b)] += 1;
        dsu.union(idx(a), idx(b));
    }
    if let Some(i) = (0..4 * c).find(|&i| degree[i] != 1) {
        return Err(DiagramError::InvalidPd(format!(
            "slot {} of crossing {} has {} wires",
            i % 4,
            i / 4,
            degree[i]
        )));
    }
    let (label, k) = dsu.labels();
    let mut groups: Vec<Vec<SlotRef>> = vec![Vec::new(); k];
    for i in 0..4 * c {
        groups[label[i]].push(SlotRef::new(i / 4, i % 4));
    }
    let mut touched = vec![false; k];
    for i in 0..4 * c + virtuals {
        if degree[i] > 0 {
            touched[label[i]] = true;
        }
    }
    let mut ends = Vec::new();
    let mut free_loops = 0;
    for (g, slots) in groups.iter().enumerate() {
        match slots.len() {
            0 if touched[g] => free_loops += 1,
            0 => {}
            2 => ends.push([slots[0], slots[1]]),
            n => {
                return Err(DiagramError::InvalidPd(format!("wire path with {n} slot ends")));
            }
        }
    }
    Ok(orient_and_number(meta, &ends, free_loops, start))
}

/// Orients arcs along strands and numbers them in traversal order. The
/// first strand starts at the arc whose head is `start`; later strands start
/// at the lowest unvisited slot.
fn orient_and_number(
    meta: Vec<CrossingMeta>,
    ends: &[[SlotRef; 2]],
    free_loops: usize,
    start: Option<SlotRef>,
) -> PlanarDiagram {
    let c = meta.len();
    let mut slot_arc = vec![usize::MAX; 4 * c];
    for (a, e) in ends.iter().enumerate() {
        slot_arc[e[0].index()] = a;
        slot_arc[e[1].index()] = a;
    }
    let other = |a: usize, s: SlotRef| if ends[a][0] == s { ends[a][1] } else { ends[a][0] };
    let mut new_id = vec![usize::MAX; ends.len()];
    let mut arcs = Vec::with_capacity(ends.len());
    let mut next_start = start;
    loop {
        let head0 = match next_start.take() {
            Some(s) => s,
            None => match (0..4 * c).find(|&i| new_id[slot_arc[i]] == usize::MAX) {
                Some(i) => SlotRef::new(i / 4, i % 4),
                None => break,
            },
        };
        let mut head = head0;
        let mut arc = slot_arc[head.index()];
        while new_id[arc] == usize::MAX {
            new_id[arc] = arcs.len();
            arcs.push(Arc { tail: other(arc, head), head });
            let out = head.offset(2);
            arc = slot_arc[out.index()];
            head = other(arc, out);
        }
    }
    let crossings = meta
        .into_iter()
        .enumerate()
        .map(|(x, m)| Crossing {
            arcs: [0, 1, 2, 3].map(|s| new_id[slot_arc[4 * x + s]]),
            over_slot: m.over_slot,
            sign: m.sign,
            tangle: m.tangle,
            twist_region: m.twist_region,
        })
        .collect();
    PlanarDiagram { crossings, arcs, free_loops, tangle_spans: Vec::new(), twist_regions: Vec::new() }
}

// ---------------------------------------------------------------------------
// Generic PD layer

impl PlanarDiagram {
    /// The crossingless unknot.
    pub fn unknot() -> Self {
        PlanarDiagram {
            crossings: Vec::new(),
            arcs: Vec::new(),
            free_loops: 1,
            tangle_spans: Vec::new(),
            twist_regions: Vec::new(),
        }
    }

    /// Builds a diagram from `X[a,b,c,d]` tuples: arc labels counterclockwise
    /// starting at the incoming under-strand. Labels may be arbitrary.
    pub fn from_pd_codes(codes: &[[usize; 4]]) -> Result<Self, DiagramError> {
        let mut by_label: std::collections::BTreeMap<usize, Vec<SlotRef>> = Default::default();
        for (x, code) in codes.iter().enumerate() {
            for (s, &label) in code.iter().enumerate() {
                by_label.entry(label).or_default().push(SlotRef::new(x, s));
            }
        }
        let mut ends = Vec::new();
        for (label, slots) in by_label {
            if slots.len() != 2 {
                return Err(DiagramError::InvalidPd(format!(
                    "arc {label} appears {} times",
                    slots.len()
                )));
            }
            ends.push([slots[0], slots[1]]);
        }
        let meta = codes
            .iter()
            .map(|_| CrossingMeta { over_slot: 1, sign: None, tangle: None, twist_region: None })
            .collect();
        let start = if codes.is_empty() { None } else { Some(SlotRef::new(0, 0)) };
        Ok(orient_and_number(meta, &ends, 0, start))
    }

    /// Parses `X[a,b,c,d]` lines; lines starting with `#` and blank lines
    /// are skipped.
    pub fn from_pd_text(text: &str) -> Result<Self, DiagramError> {
        let mut codes = Vec::new();
        for line in text.lines().map(str::trim) {
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let inner = line
                .strip_prefix("X[")
                .and_then(|l| l.strip_suffix(']'))
                .ok_or_else(|| DiagramError::InvalidPd(line.to_string()))?;
            let nums = inner
                .split(',')
                .map(|t| t.trim().parse::<usize>())
                .collect::<Result<Vec<_>, _>>()
                .map_err(|_| DiagramError::InvalidPd(line.to_string()))?;
            let code: [usize; 4] =
                nums.try_into().map_err(|_| DiagramError::InvalidPd(line.to_string()))?;
            codes.push(code);
        }
        Self::from_pd_codes(&codes)
    }

    pub fn crossing_count(&self) -> usize {
        self.crossings.len()
    }

    pub fn arc_at(&self, s: SlotRef) -> usize {
        self.crossings[s.crossing].arcs[s.slot]
    }

    /// The slot at the far end of the arc leaving `s`.
    pub fn neighbor(&self, s: SlotRef) -> SlotRef {
        self.arcs[self.arc_at(s)].other_end(s)
    }

    /// Every slot carries one arc, each arc's ends point back at it, and
    /// the diagram graph is connected.
    pub fn validate(&self) -> Result<(), DiagramError> {
        for (a, arc) in self.arcs.iter().enumerate() {
            for end in [arc.tail, arc.head] {
                if end.crossing >= self.crossings.len() || self.arc_at(end) != a {
                    return Err(DiagramError::InvalidPd(format!("arc {a} end mismatch")));
                }
            }
        }
        let mut seen = vec![0usize; self.arcs.len()];
        for x in &self.crossings {
            for &a in &x.arcs {
                if a >= self.arcs.len() {
                    return Err(DiagramError::InvalidPd(format!("arc {a} out of range")));
                }
                seen[a] += 1;
            }
            if x.over_slot > 3 {
                return Err(DiagramError::InvalidPd("over slot out of range".into()));
            }
        }
        if seen.iter().any(|&k| k != 2) {
            return Err(DiagramError::InvalidPd("arc without two endpoints".into()));
        }
        if !self.is_connected() {
            return Err(DiagramError::InvalidPd("diagram is disconnected".into()));
        }
        Ok(())
    }

    pub fn is_connected(&self) -> bool {
        if self.crossings.is_empty() {
            return self.free_loops <= 1;
        }
        if self.free_loops > 0 {
            return false;
        }
        self.graph_components(&[]) == 1
    }

    /// Components of the crossing graph with the listed arcs removed.
    fn graph_components(&self, removed: &[usize]) -> usize {
        let mut dsu = Dsu::new(self.crossings.len());
        let mut parts = self.crossings.len();
        for (a, arc) in self.arcs.iter().enumerate() {
            if !removed.contains(&a) && dsu.union(arc.tail.crossing, arc.head.crossing) {
                parts -= 1;
            }
        }
        parts
    }

    /// Number of link components, by following strands straight through
    /// each crossing.
    pub fn count_components(&self) -> usize {
        let mut seen = vec![false; self.arcs.len()];
        let mut count = self.free_loops;
        for a0 in 0..self.arcs.len() {
            if seen[a0] {
                continue;
            }
            count += 1;
            let mut a = a0;
            while !seen[a] {
                seen[a] = true;
                a = self.arc_at(self.arcs[a].head.offset(2));
            }
        }
        count
    }

    pub fn twist_number(&self) -> usize {
        self.twist_regions.len()
    }

    /// Exhaustive check over arc pairs: removing two arcs never separates
    /// the crossings into two non-empty parts.
    pub fn is_prime_bruteforce(&self) -> bool {
        let m = self.arcs.len();
        for a in 0..m {
            for b in a + 1..m {
                if self.graph_components(&[a, b]) > 1 {
                    return false;
                }
            }
        }
        true
    }

    /// Faces of the diagram as cyclic lists of corners `(crossing, slot)`,
    /// where the corner lies between `slot` and `slot + 1`.
    pub fn faces(&self) -> Vec<Vec<SlotRef>> {
        let n = 4 * self.crossings.len();
        let mut seen = vec![false; n];
        let mut faces = Vec::new();
        for i in 0..n {
            if seen[i] {
                continue;
            }
            let mut face = Vec::new();
            let mut s = SlotRef::new(i / 4, i % 4);
            while !seen[s.index()] {
                seen[s.index()] = true;
                face.push(s);
                s = self.neighbor(s.offset(1));
            }
            faces.push(face);
        }
        faces
    }

    /// Twist regions re-detected from bigon faces: crossings sharing a
    /// bigon belong to the same region.
    pub fn detect_twist_regions(&self) -> Vec<Vec<usize>> {
        let c = self.crossings.len();
        let mut dsu = Dsu::new(c);
        for face in self.faces() {
            if face.len() == 2 && face[0].crossing != face[1].crossing {
                dsu.union(face[0].crossing, face[1].crossing);
            }
        }
        let (label, k) = dsu.labels();
        let mut regions = vec![Vec::new(); k];
        for (x, &l) in label.iter().enumerate() {
            regions[l].push(x);
        }
        regions
    }

    /// PD text: one `X[a,b,c,d]` line per crossing, 1-based arc ids listed
    /// counterclockwise from the incoming under-strand.
    pub fn to_pd_text(&self, header: &[String]) -> String {
        let mut out = String::new();
        for h in header {
            let _ = writeln!(out, "# {h}");
        }
        for (x, cr) in self.crossings.iter().enumerate() {
            let u = (cr.over_slot + 1) % 4;
            let start = if self.arcs[cr.arcs[u]].head == SlotRef::new(x, u) { u } else { (u + 2) % 4 };
            let ids: Vec<String> =
                (0..4).map(|k| (cr.arcs[(start + k) % 4] + 1).to_string()).collect();
            let _ = writeln!(out, "X[{}]", ids.join(","));
        }
        out
    }

    /// Signs present per tangle, in tangle order.
    pub fn tangle_signs(&self) -> Vec<Option<Sign>> {
        self.tangle_spans
            .iter()
            .map(|span| span.first().and_then(|&x| self.crossings[x].sign))
            .collect()
    }

    /// Distinct crossings touched by each face, sorted; handy for oracles.
    pub fn face_crossing_sets(&self) -> Vec<BTreeSet<usize>> {
        self.faces()
            .iter()
            .map(|f| f.iter().map(|s| s.crossing).collect())
            .collect()
    }
}
