//! Multigraph isomorphism by colour refinement plus backtracking.

use std::collections::BTreeMap;

use crate::stategraph::StateMultigraph;

fn adjacency(g: &StateMultigraph) -> Vec<Vec<u32>> {
    let n = g.vertices;
    let mut m = vec![vec![0u32; n]; n];
    for &(a, b) in &g.edges {
        m[a][b] += 1;
        if a != b {
            m[b][a] += 1;
        }
    }
    m
}

/// Stable colouring of both graphs with a shared palette.
/// Own colour and sorted `(neighbour colour, multiplicity)` list.
type Signature = (usize, Vec<(usize, u32)>);

fn refine(ma: &[Vec<u32>], mb: &[Vec<u32>]) -> (Vec<usize>, Vec<usize>) {
    let init = |m: &[Vec<u32>]| -> Vec<(u32, u32)> {
        (0..m.len()).map(|v| (m[v].iter().sum::<u32>(), m[v][v])).collect()
    };
    let mut palette: BTreeMap<(u32, u32), usize> = BTreeMap::new();
    for k in init(ma).into_iter().chain(init(mb)) {
        let next = palette.len();
        palette.entry(k).or_insert(next);
    }
    let mut ca: Vec<usize> = init(ma).iter().map(|k| palette[k]).collect();
    let mut cb: Vec<usize> = init(mb).iter().map(|k| palette[k]).collect();
    let mut classes = palette.len();
    loop {
        let sig = |m: &[Vec<u32>], c: &[usize], v: usize| {
            let mut nb: Vec<(usize, u32)> =
                (0..m.len()).filter(|&w| m[v][w] > 0).map(|w| (c[w], m[v][w])).collect();
            nb.sort_unstable();
            (c[v], nb)
        };
        let sa: Vec<_> = (0..ma.len()).map(|v| sig(ma, &ca, v)).collect();
        let sb: Vec<_> = (0..mb.len()).map(|v| sig(mb, &cb, v)).collect();
        let mut pal: BTreeMap<&Signature, usize> = BTreeMap::new();
        for s in sa.iter().chain(sb.iter()) {
            let next = pal.len();
            pal.entry(s).or_insert(next);
        }
        let na: Vec<usize> = sa.iter().map(|s| pal[s]).collect();
        let nb: Vec<usize> = sb.iter().map(|s| pal[s]).collect();
        let done = pal.len() == classes;
        classes = pal.len();
        ca = na;
        cb = nb;
        if done {
            return (ca, cb);
        }
    }
}

/// Whether some vertex bijection carries the edge multiset of `a` onto `b`.
pub fn is_isomorphic(a: &StateMultigraph, b: &StateMultigraph) -> bool {
    if a.vertices != b.vertices || a.edges.len() != b.edges.len() {
        return false;
    }
    let (ma, mb) = (adjacency(a), adjacency(b));
    let (ca, cb) = refine(&ma, &mb);
    let hist = |c: &[usize]| {
        let mut h = c.to_vec();
        h.sort_unstable();
        h
    };
    if hist(&ca) != hist(&cb) {
        return false;
    }
    let mut class_size: BTreeMap<usize, usize> = BTreeMap::new();
    for &c in &ca {
        *class_size.entry(c).or_default() += 1;
    }
    let mut order: Vec<usize> = (0..a.vertices).collect();
    order.sort_by_key(|&v| (class_size[&ca[v]], ca[v], v));
    let mut map = vec![usize::MAX; a.vertices];
    let mut used = vec![false; b.vertices];
    extend(0, &order, &ma, &mb, &ca, &cb, &mut map, &mut used)
}

#[allow(clippy::too_many_arguments)]
fn extend(
    depth: usize,
    order: &[usize],
    ma: &[Vec<u32>],
    mb: &[Vec<u32>],
    ca: &[usize],
    cb: &[usize],
    map: &mut [usize],
    used: &mut [bool],
) -> bool {
    let Some(&v) = order.get(depth) else { return true };
    for w in 0..mb.len() {
        if used[w] || cb[w] != ca[v] || ma[v][v] != mb[w][w] {
            continue;
        }
        let fits = order[..depth].iter().all(|&u| ma[v][u] == mb[w][map[u]]);
        if !fits {
            continue;
        }
        map[v] = w;
        used[w] = true;
        if extend(depth + 1, order, ma, mb, ca, cb, map, used) {
            return true;
        }
        map[v] = usize::MAX;
        used[w] = false;
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(n: usize, e: &[(usize, usize)]) -> StateMultigraph {
        StateMultigraph { vertices: n, edges: e.to_vec() }
    }

    #[test]
    fn relabelled_graphs_match() {
        let a = g(4, &[(0, 1), (0, 1), (1, 2), (2, 3), (3, 0)]);
        let b = g(4, &[(2, 3), (3, 2), (3, 0), (0, 1), (1, 2)]);
        assert!(is_isomorphic(&a, &b));
    }

    #[test]
    fn multiplicity_matters() {
        let a = g(3, &[(0, 1), (0, 1), (1, 2)]);
        let b = g(3, &[(0, 1), (1, 2), (1, 2)]);
        assert!(is_isomorphic(&a, &b));
        let c = g(3, &[(0, 1), (0, 2), (1, 2)]);
        assert!(!is_isomorphic(&a, &c));
    }

    #[test]
    fn regular_graphs_need_backtracking() {
        // two 6-cycles vs two triangles: same degrees, different structure
        let hex = g(6, &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (5, 0)]);
        let tri = g(6, &[(0, 1), (1, 2), (2, 0), (3, 4), (4, 5), (5, 3)]);
        assert!(!is_isomorphic(&hex, &tri));
        let hex2 = g(6, &[(0, 2), (2, 4), (4, 1), (1, 3), (3, 5), (5, 0)]);
        assert!(is_isomorphic(&hex, &hex2));
    }

    #[test]
    fn loops_are_compared() {
        let a = g(2, &[(0, 0), (0, 1)]);
        let b = g(2, &[(1, 1), (0, 1)]);
        let c = g(2, &[(0, 1), (0, 1)]);
        assert!(is_isomorphic(&a, &b));
        assert!(!is_isomorphic(&a, &c));
    }
}
