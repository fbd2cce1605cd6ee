//! Independent oracles shared by the integration suites. None of these call
//! into the code paths they check.

#![allow(dead_code)]

use petgraph::algo::dijkstra;
use petgraph::graph::{NodeIndex, UnGraph};

use plcfront::geometry::segments_intersect;
use plcfront::gridgen::PowerGrid;

/// Shortest hub distance of every node via Dijkstra over the edge list.
pub fn dijkstra_distances(grid: &PowerGrid) -> Vec<f64> {
    let mut g: UnGraph<(), f64> = UnGraph::new_undirected();
    let idx: Vec<NodeIndex> = grid.nodes.iter().map(|_| g.add_node(())).collect();
    for e in &grid.edges {
        g.add_edge(idx[e.a], idx[e.b], e.length_m);
    }
    let d = dijkstra(&g, idx[grid.hub], None, |e| *e.weight());
    idx.iter().map(|i| d.get(i).copied().unwrap_or(f64::INFINITY)).collect()
}

/// Exhaustive count of intersecting edge pairs.
pub fn crossing_pairs(grid: &PowerGrid) -> usize {
    let p = |k: usize| grid.nodes[k].pos();
    let mut n = 0;
    for (i, e) in grid.edges.iter().enumerate() {
        if p(e.a) == p(e.b) {
            continue;
        }
        for f in &grid.edges[i + 1..] {
            if p(f.a) == p(f.b) {
                continue;
            }
            if segments_intersect(p(e.a), p(e.b), p(f.a), p(f.b)).unwrap() {
                n += 1;
            }
        }
    }
    n
}

/// Per sector: hub plus sector nodes form a connected acyclic graph.
/// Uses its own union-find rather than the grid's traversal.
pub fn sector_is_spanning_tree(grid: &PowerGrid, sector: usize) -> bool {
    let members: Vec<usize> = std::iter::once(grid.hub)
        .chain(grid.nodes.iter().filter(|n| n.sector == Some(sector)).map(|n| n.id))
        .collect();
    let edges: Vec<(usize, usize)> = grid
        .edges
        .iter()
        .filter(|e| e.sector == sector)
        .map(|e| (e.a, e.b))
        .collect();
    if edges.len() + 1 != members.len() {
        return false;
    }
    let mut parent: Vec<usize> = (0..grid.nodes.len()).collect();
    fn find(p: &mut [usize], mut x: usize) -> usize {
        while p[x] != x {
            p[x] = p[p[x]];
            x = p[x];
        }
        x
    }
    for (a, b) in edges {
        if !members.contains(&a) || !members.contains(&b) {
            return false;
        }
        let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
        if ra == rb {
            return false; // cycle
        }
        parent[ra] = rb;
    }
    let root = find(&mut parent, grid.hub);
    members.iter().all(|&m| find(&mut parent, m) == root)
}

/// Pareto exponent solving `q^(1 - 1/alpha) = share` by bisection.
pub fn bisect_alpha(q: f64, share: f64) -> f64 {
    let f = |a: f64| q.powf(1.0 - 1.0 / a) - share;
    let (mut lo, mut hi) = (1.0 + 1e-12, 1e3);
    assert!(f(lo) * f(hi) < 0.0);
    while hi - lo > 1e-13 {
        let mid = 0.5 * (lo + hi);
        if f(lo) * f(mid) <= 0.0 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    0.5 * (lo + hi)
}

fn simpson(f: impl Fn(f64) -> f64, a: f64, b: f64, n: usize) -> f64 {
    let n = n + n % 2;
    let h = (b - a) / n as f64;
    let mut s = f(a) + f(b);
    for i in 1..n {
        let w = if i % 2 == 1 { 4.0 } else { 2.0 };
        s += w * f(a + i as f64 * h);
    }
    s * h / 3.0
}

/// Standard normal CDF by quadrature of the density.
pub fn normal_cdf(z: f64) -> f64 {
    let pdf = |t: f64| (-0.5 * t * t).exp() / (2.0 * std::f64::consts::PI).sqrt();
    0.5 + simpson(pdf, 0.0, z, 20_000)
}

/// Standard normal quantile by bisection on [`normal_cdf`].
pub fn normal_quantile(p: f64) -> f64 {
    let (mut lo, mut hi) = (-10.0, 10.0);
    while hi - lo > 1e-12 {
        let mid = 0.5 * (lo + hi);
        if normal_cdf(mid) < p {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Mean of Pareto(alpha, xm) conditioned on `V <= cap`, by quadrature in
/// log-volume.
pub fn truncated_pareto_mean_numeric(alpha: f64, xm: f64, cap: f64) -> f64 {
    let (a, b) = (xm.ln(), cap.ln());
    // with v = e^u: v f(v) dv = alpha xm^alpha v^(1-alpha) du
    let num = simpson(|u| alpha * xm.powf(alpha) * (u * (1.0 - alpha)).exp(), a, b, 200_000);
    let den = simpson(|u| alpha * xm.powf(alpha) * (-u * alpha).exp(), a, b, 200_000);
    num / den
}
