//! Small graph families used by tests, examples and the bench driver.

use rand::seq::SliceRandom;
use rand::Rng;

use super::BoundedDegreeGraph;
use crate::error::{input, Result};

/// Cycle `C_n` (n >= 3) with the given degree bound.
pub fn cycle(n: usize, degree_bound: usize) -> Result<BoundedDegreeGraph> {
    if n < 3 {
        return input("a cycle needs at least 3 vertices");
    }
    let edges: Vec<_> = (0..n).map(|v| (v, (v + 1) % n)).collect();
    BoundedDegreeGraph::from_edges(n, degree_bound, &edges)
}

/// Path on `n` vertices.
pub fn path(n: usize, degree_bound: usize) -> Result<BoundedDegreeGraph> {
    let edges: Vec<_> = (1..n).map(|v| (v - 1, v)).collect();
    BoundedDegreeGraph::from_edges(n, degree_bound, &edges)
}

pub fn complete(n: usize) -> Result<BoundedDegreeGraph> {
    let edges: Vec<_> = (0..n).flat_map(|u| ((u + 1)..n).map(move |v| (u, v))).collect();
    BoundedDegreeGraph::from_edges(n, n.saturating_sub(1).max(1), &edges)
}

/// `n` isolated vertices.
pub fn empty(n: usize, degree_bound: usize) -> Result<BoundedDegreeGraph> {
    BoundedDegreeGraph::new(degree_bound, vec![Vec::new(); n])
}

/// Disjoint union, vertices of later parts shifted past earlier ones.
pub fn disjoint_union(parts: &[BoundedDegreeGraph], degree_bound: usize) -> Result<BoundedDegreeGraph> {
    let mut adjacency = Vec::new();
    let mut offset = 0u32;
    for g in parts {
        for list in g.adjacency() {
            adjacency.push(list.iter().map(|&u| u + offset).collect());
        }
        offset += g.n_vertices() as u32;
    }
    BoundedDegreeGraph::new(degree_bound, adjacency)
}

/// Random bipartite graph on `n` (even) vertices: the union of `d` uniform
/// perfect matchings between the halves `[0, n/2)` and `[n/2, n)`, with
/// parallel edges collapsed. Max degree is at most `d`.
pub fn random_bipartite(n: usize, d: usize, rng: &mut impl Rng) -> Result<BoundedDegreeGraph> {
    if !n.is_multiple_of(2) {
        return input("random bipartite graph needs an even vertex count");
    }
    let half = n / 2;
    let mut adjacency = vec![Vec::<u32>::new(); n];
    let mut right: Vec<u32> = (half as u32..n as u32).collect();
    for _ in 0..d {
        right.shuffle(rng);
        for (u, &v) in right.iter().enumerate() {
            if !adjacency[u].contains(&v) {
                adjacency[u].push(v);
                adjacency[v as usize].push(u as u32);
            }
        }
    }
    BoundedDegreeGraph::new(d, adjacency)
}

/// Random graph with max degree `d`: union of `d` uniform perfect matchings
/// on all `n` (even) vertices, parallel edges collapsed.
pub fn random_matching_union(n: usize, d: usize, rng: &mut impl Rng) -> Result<BoundedDegreeGraph> {
    if !n.is_multiple_of(2) {
        return input("perfect matchings need an even vertex count");
    }
    let mut adjacency = vec![Vec::<u32>::new(); n];
    let mut order: Vec<u32> = (0..n as u32).collect();
    for _ in 0..d {
        order.shuffle(rng);
        for pair in order.chunks(2) {
            let (u, v) = (pair[0], pair[1]);
            if !adjacency[u as usize].contains(&v) {
                adjacency[u as usize].push(v);
                adjacency[v as usize].push(u);
            }
        }
    }
    BoundedDegreeGraph::new(d, adjacency)
}
