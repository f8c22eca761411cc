//! Exact structural oracles. These read adjacency lists directly and are
//! exponential where the problem is; they exist to check the testers.

use std::collections::VecDeque;

use num_rational::Ratio;

use super::BoundedDegreeGraph;
use crate::error::{precondition, Error, Result};

/// Default vertex cap for exhaustive subset enumeration.
pub const EXPANSION_CAP: usize = 24;
/// Vertex cap for exhaustive 2-coloring search.
pub const BIPARTITE_DISTANCE_CAP: usize = 22;

/// Proper 2-coloring by BFS over every component.
pub fn is_bipartite_exact(g: &BoundedDegreeGraph) -> bool {
    two_coloring(g).is_some()
}

/// A proper 2-coloring if one exists.
pub fn two_coloring(g: &BoundedDegreeGraph) -> Option<Vec<u8>> {
    let n = g.n_vertices();
    let mut color = vec![u8::MAX; n];
    let mut queue = VecDeque::new();
    for root in 0..n {
        if color[root] != u8::MAX {
            continue;
        }
        color[root] = 0;
        queue.push_back(root);
        while let Some(v) = queue.pop_front() {
            for &u in g.neighbors(v) {
                let u = u as usize;
                if color[u] == u8::MAX {
                    color[u] = 1 - color[v];
                    queue.push_back(u);
                } else if color[u] == color[v] {
                    return None;
                }
            }
        }
    }
    Some(color)
}

/// Component label per vertex, labels in order of first appearance.
pub fn connected_components(g: &BoundedDegreeGraph) -> Vec<usize> {
    let n = g.n_vertices();
    let mut label = vec![usize::MAX; n];
    let mut next = 0;
    let mut stack = Vec::new();
    for root in 0..n {
        if label[root] != usize::MAX {
            continue;
        }
        label[root] = next;
        stack.push(root);
        while let Some(v) = stack.pop() {
            for &u in g.neighbors(v) {
                if label[u as usize] == usize::MAX {
                    label[u as usize] = next;
                    stack.push(u as usize);
                }
            }
        }
        next += 1;
    }
    label
}

/// Sizes of the connected components, largest first.
pub fn component_sizes(g: &BoundedDegreeGraph) -> Vec<usize> {
    let labels = connected_components(g);
    let k = labels.iter().copied().max().map_or(0, |m| m + 1);
    let mut sizes = vec![0; k];
    for l in labels {
        sizes[l] += 1;
    }
    sizes.sort_unstable_by(|a, b| b.cmp(a));
    sizes
}

/// `min |∂(U)| / |U|` over nonempty `U` with `|U| <= N/2`, where `∂(U)` is
/// the set of vertices outside `U` adjacent to `U`.
pub fn vertex_expansion_exact(g: &BoundedDegreeGraph) -> Result<Ratio<u64>> {
    vertex_expansion_exact_with_cap(g, EXPANSION_CAP)
}

pub fn vertex_expansion_exact_with_cap(g: &BoundedDegreeGraph, cap: usize) -> Result<Ratio<u64>> {
    let n = g.n_vertices();
    if n > cap || n > 30 {
        return Err(Error::TooLarge { n, cap });
    }
    if n < 2 {
        return precondition("vertex expansion needs at least two vertices");
    }
    let adj: Vec<u32> = (0..n)
        .map(|v| g.neighbors(v).iter().fold(0u32, |m, &u| m | (1 << u)))
        .collect();
    let half = n / 2;
    let full = 1usize << n;
    // neighborhood[mask] = union of neighbor masks of vertices in mask
    let mut neighborhood = vec![0u32; full];
    let mut best = Ratio::new(u64::MAX, 1);
    for mask in 1..full {
        let low = mask.trailing_zeros() as usize;
        let nb = neighborhood[mask & (mask - 1)] | adj[low];
        neighborhood[mask] = nb;
        let size = mask.count_ones() as usize;
        if size > half {
            continue;
        }
        let boundary = (nb & !(mask as u32)).count_ones() as u64;
        let r = Ratio::new(boundary, size as u64);
        if r < best {
            best = r;
        }
    }
    Ok(best)
}

/// Minimum number of edges whose removal makes `g` bipartite, by exhaustive
/// search over 2-colorings (vertex 0 fixed to color 0). Parallel edges count
/// with multiplicity.
pub fn bipartite_distance_exact(g: &BoundedDegreeGraph) -> Result<usize> {
    let n = g.n_vertices();
    if n > BIPARTITE_DISTANCE_CAP {
        return Err(Error::TooLarge {
            n,
            cap: BIPARTITE_DISTANCE_CAP,
        });
    }
    let edges = g.edges();
    if n <= 1 {
        return Ok(0);
    }
    let mut best = usize::MAX;
    for coloring in 0u32..(1u32 << (n - 1)) {
        let side = |v: usize| if v == 0 { 0 } else { (coloring >> (v - 1)) & 1 };
        let bad = edges.iter().filter(|&&(u, v)| side(u) == side(v)).count();
        best = best.min(bad);
    }
    Ok(best)
}

/// Distance to bipartiteness as a fraction of `N·d`, the normalization used
/// by the bounded-degree farness definition.
pub fn bipartite_farness_exact(g: &BoundedDegreeGraph) -> Result<Ratio<u64>> {
    let dist = bipartite_distance_exact(g)? as u64;
    let denom = (g.n_vertices() * g.degree_bound()) as u64;
    if denom == 0 {
        return precondition("farness of an empty graph is undefined");
    }
    Ok(Ratio::new(dist, denom))
}

/// Farness lower bound `α'/(2d)` of a graph with two or more components,
/// none much larger than half the vertices, from every `α'`-expander of
/// maximum degree `d`.
///
/// The largest component may exceed `N/2` by at most `N^{3/4}`, the finite
/// stand-in for the `o(N)` slack.
pub fn farness_lower_bound_two_components(
    g: &BoundedDegreeGraph,
    alpha_prime: f64,
    d: usize,
) -> Result<f64> {
    if !(alpha_prime >= 0.0) || !alpha_prime.is_finite() {
        return precondition("alpha' must be a finite non-negative number");
    }
    if d == 0 {
        return precondition("degree bound must be positive");
    }
    let sizes = component_sizes(g);
    if sizes.len() < 2 {
        return precondition("graph is connected; the two-component bound does not apply");
    }
    let n = g.n_vertices() as f64;
    let slack = n.powf(0.75);
    if sizes[0] as f64 > n / 2.0 + slack {
        return precondition(format!(
            "largest component has {} of {} vertices, above N/2 + N^(3/4)",
            sizes[0],
            g.n_vertices()
        ));
    }
    Ok(alpha_prime / (2.0 * d as f64))
}
