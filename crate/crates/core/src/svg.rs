//! SVG rendering of `H_σ`: one ellipse per state circle, one polyline per
//! segment. Tangles are laid out left to right.

use std::fmt::Write as _;

use crate::diagram::PlanarDiagram;
use crate::stategraph::HGraph;

const TANGLE_W: f64 = 160.0;
const BAND_W: f64 = 36.0;
const STEP_H: f64 = 28.0;
const MARGIN: f64 = 40.0;

/// Position of each crossing: tangles in columns, bands in sub-columns,
/// crossings stacked down each band.
fn crossing_positions(pd: &PlanarDiagram) -> Vec<(f64, f64)> {
    let mut pos = vec![(MARGIN, MARGIN); pd.crossing_count()];
    let mut region_col = vec![0usize; pd.twist_regions.len()];
    let mut tangle_x = vec![MARGIN; pd.tangle_spans.len()];
    let mut x0 = MARGIN;
    for (t, span) in pd.tangle_spans.iter().enumerate() {
        let mut regions: Vec<usize> = span.iter().filter_map(|&x| pd.crossings[x].twist_region).collect();
        regions.dedup();
        for (k, &r) in regions.iter().enumerate() {
            region_col[r] = k;
        }
        tangle_x[t] = x0;
        x0 += TANGLE_W.max(BAND_W * (regions.len() as f64 + 1.0));
    }
    for (r, members) in pd.twist_regions.iter().enumerate() {
        for (k, &x) in members.iter().enumerate() {
            let t = pd.crossings[x].tangle.unwrap_or(0);
            let bx = tangle_x.get(t).copied().unwrap_or(MARGIN) + BAND_W * region_col[r] as f64;
            pos[x] = (bx + BAND_W / 2.0, MARGIN + STEP_H * (k as f64 + 1.0));
        }
    }
    if pd.twist_regions.is_empty() {
        for (x, p) in pos.iter_mut().enumerate() {
            *p = (MARGIN + BAND_W * x as f64, MARGIN + STEP_H);
        }
    }
    pos
}

/// Renders `h` over the crossing layout of `pd`; `innermost` circles are
/// filled.
pub fn render_h_graph(pd: &PlanarDiagram, h: &HGraph, innermost: &[bool]) -> String {
    let pos = crossing_positions(pd);
    // bounding box of crossings each circle touches
    let mut bbox: Vec<Option<(f64, f64, f64, f64)>> = vec![None; h.circles];
    for s in &h.segments {
        let (x, y) = pos[s.crossing];
        for &c in &s.circles {
            let b = bbox[c].get_or_insert((x, y, x, y));
            b.0 = b.0.min(x);
            b.1 = b.1.min(y);
            b.2 = b.2.max(x);
            b.3 = b.3.max(y);
        }
    }
    let width = pos.iter().map(|p| p.0).fold(MARGIN, f64::max) + 2.0 * MARGIN;
    let height = pos.iter().map(|p| p.1).fold(MARGIN, f64::max) + 2.0 * MARGIN;
    let mut centers = Vec::with_capacity(h.circles);
    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{width:.0}" height="{height:.0}" viewBox="0 0 {width:.0} {height:.0}">"#
    );
    for (c, b) in bbox.iter().enumerate() {
        let (x0, y0, x1, y1) = b.unwrap_or((MARGIN, MARGIN, MARGIN, MARGIN));
        let (cx, cy) = ((x0 + x1) / 2.0, (y0 + y1) / 2.0);
        // spread coincident circles so they stay distinguishable
        let jitter = (c % 5) as f64 * 3.0;
        let (rx, ry) = ((x1 - x0) / 2.0 + 12.0 + jitter, (y1 - y0) / 2.0 + 10.0 + jitter);
        centers.push((cx, cy));
        let fill = if innermost.get(c).copied().unwrap_or(false) { "#cfe3ff" } else { "none" };
        let _ = writeln!(
            out,
            r#"  <ellipse id="circle-{c}" cx="{cx:.1}" cy="{cy:.1}" rx="{rx:.1}" ry="{ry:.1}" fill="{fill}" fill-opacity="0.5" stroke="black"/>"#
        );
    }
    for s in &h.segments {
        let (ax, ay) = centers[s.circles[0]];
        let (bx, by) = centers[s.circles[1]];
        let (mx, my) = pos[s.crossing];
        let _ = writeln!(
            out,
            r#"  <polyline id="segment-{}" points="{ax:.1},{ay:.1} {mx:.1},{my:.1} {bx:.1},{by:.1}" fill="none" stroke="red"/>"#,
            s.crossing
        );
    }
    out.push_str("</svg>\n");
    out
}
