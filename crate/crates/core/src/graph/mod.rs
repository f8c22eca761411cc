//! Bounded-degree graphs in the adjacency-list model.
//!
//! Testers only see a graph through [`CountingOracle`], which answers
//! `f_G(v, i)` (the `i`-th neighbor of `v`, 1-based, or BOTTOM) and charges
//! every oracle call to a [`QueryLedger`]. The exact structural checks in
//! [`exact`] read the adjacency lists directly and serve as test oracles.

pub mod exact;
pub mod generators;
pub mod io;

use serde::{Deserialize, Serialize};

use crate::error::{input, Error, Result};

/// Undirected multigraph with every vertex listing at most `degree_bound`
/// neighbors. Immutable after construction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoundedDegreeGraph {
    degree_bound: usize,
    adjacency: Vec<Vec<u32>>,
}

impl BoundedDegreeGraph {
    /// Validates and wraps adjacency lists. Neighbor ids must be in range, no
    /// list may exceed `degree_bound`, self-loops are rejected, and every
    /// unordered pair must appear the same number of times from both ends.
    pub fn new(degree_bound: usize, adjacency: Vec<Vec<u32>>) -> Result<Self> {
        let n = adjacency.len();
        if n >= OracleAnswer::BOTTOM_RAW as usize {
            return input(format!("{n} vertices exceed the id space"));
        }
        let mut directed = std::collections::HashMap::<(u32, u32), i64>::new();
        for (v, list) in adjacency.iter().enumerate() {
            if list.len() > degree_bound {
                return input(format!(
                    "vertex {v} lists {} neighbors, above degree bound {degree_bound}",
                    list.len()
                ));
            }
            for &u in list {
                if u as usize >= n {
                    return Err(Error::VertexOutOfRange {
                        vertex: u as usize,
                        n,
                    });
                }
                if u as usize == v {
                    return input(format!("self-loop at vertex {v}"));
                }
                let key = if (v as u32) < u { (v as u32, u) } else { (u, v as u32) };
                let sign = if (v as u32) < u { 1 } else { -1 };
                *directed.entry(key).or_insert(0) += sign;
            }
        }
        if let Some(((a, b), _)) = directed.iter().find(|(_, &bal)| bal != 0) {
            return input(format!("adjacency is not symmetric for pair ({a}, {b})"));
        }
        Ok(Self {
            degree_bound,
            adjacency,
        })
    }

    /// Builds a graph from an undirected edge list. Neighbor order follows
    /// the edge list order.
    pub fn from_edges(n: usize, degree_bound: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut adjacency = vec![Vec::new(); n];
        for &(u, v) in edges {
            if u >= n || v >= n {
                return Err(Error::VertexOutOfRange {
                    vertex: u.max(v),
                    n,
                });
            }
            adjacency[u].push(v as u32);
            adjacency[v].push(u as u32);
        }
        Self::new(degree_bound, adjacency)
    }

    pub fn n_vertices(&self) -> usize {
        self.adjacency.len()
    }

    pub fn degree_bound(&self) -> usize {
        self.degree_bound
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adjacency[v].len()
    }

    pub fn neighbors(&self, v: usize) -> &[u32] {
        &self.adjacency[v]
    }

    pub fn adjacency(&self) -> &[Vec<u32>] {
        &self.adjacency
    }

    /// Undirected edges `(u, v)` with `u < v`, one entry per parallel copy.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for (v, list) in self.adjacency.iter().enumerate() {
            for &u in list {
                if v < u as usize {
                    out.push((v, u as usize));
                }
            }
        }
        out
    }

    pub fn n_edges(&self) -> usize {
        self.adjacency.iter().map(Vec::len).sum::<usize>() / 2
    }

    pub fn max_degree(&self) -> usize {
        self.adjacency.iter().map(Vec::len).max().unwrap_or(0)
    }
}

/// Answer of the adjacency-list oracle: a vertex id, or BOTTOM when the
/// requested index exceeds the vertex degree. BOTTOM is stored as a sentinel
/// outside the vertex id range.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct OracleAnswer(u32);

impl OracleAnswer {
    pub const BOTTOM_RAW: u32 = u32::MAX;
    pub const BOTTOM: OracleAnswer = OracleAnswer(Self::BOTTOM_RAW);

    pub fn vertex(v: usize) -> Self {
        OracleAnswer(v as u32)
    }

    pub fn is_bottom(self) -> bool {
        self.0 == Self::BOTTOM_RAW
    }

    pub fn neighbor(self) -> Option<usize> {
        (!self.is_bottom()).then_some(self.0 as usize)
    }

    pub fn raw(self) -> u32 {
        self.0
    }
}

/// Per-run query accounting. Counters only ever grow.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct QueryLedger {
    pub classical_queries: u64,
    pub modeled_quantum_queries: u64,
    pub walk_steps: u64,
}

impl QueryLedger {
    pub fn merge(&mut self, other: &QueryLedger) {
        self.classical_queries += other.classical_queries;
        self.modeled_quantum_queries += other.modeled_quantum_queries;
        self.walk_steps += other.walk_steps;
    }
}

/// `f_G(v, i)` with `i` 1-based. Charges exactly one classical query.
pub fn neighbor_query(
    g: &BoundedDegreeGraph,
    v: usize,
    i: usize,
    ledger: &mut QueryLedger,
) -> Result<OracleAnswer> {
    check_query(g, v, i)?;
    ledger.classical_queries += 1;
    Ok(answer(g, v, i))
}

fn check_query(g: &BoundedDegreeGraph, v: usize, i: usize) -> Result<()> {
    if v >= g.n_vertices() {
        return Err(Error::VertexOutOfRange {
            vertex: v,
            n: g.n_vertices(),
        });
    }
    if i == 0 || i > g.degree_bound {
        return Err(Error::IndexOutOfRange {
            index: i,
            degree_bound: g.degree_bound,
        });
    }
    Ok(())
}

fn answer(g: &BoundedDegreeGraph, v: usize, i: usize) -> OracleAnswer {
    match g.adjacency[v].get(i - 1) {
        Some(&u) => OracleAnswer(u),
        None => OracleAnswer::BOTTOM,
    }
}

/// The only view testers have of a graph. Optionally memoizes answers for
/// the lifetime of one tester run; memoized answers are not re-charged.
#[derive(Debug)]
pub struct CountingOracle<'g> {
    graph: &'g BoundedDegreeGraph,
    ledger: QueryLedger,
    cache: Option<Vec<u32>>,
}

const UNCACHED: u32 = u32::MAX - 1;

impl<'g> CountingOracle<'g> {
    pub fn new(graph: &'g BoundedDegreeGraph) -> Self {
        Self {
            graph,
            ledger: QueryLedger::default(),
            cache: None,
        }
    }

    /// Oracle that remembers every answer it has paid for.
    pub fn memoized(graph: &'g BoundedDegreeGraph) -> Self {
        let slots = graph.n_vertices() * graph.degree_bound;
        Self {
            graph,
            ledger: QueryLedger::default(),
            cache: Some(vec![UNCACHED; slots]),
        }
    }

    pub fn n_vertices(&self) -> usize {
        self.graph.n_vertices()
    }

    pub fn degree_bound(&self) -> usize {
        self.graph.degree_bound
    }

    pub fn query(&mut self, v: usize, i: usize) -> Result<OracleAnswer> {
        check_query(self.graph, v, i)?;
        if let Some(cache) = self.cache.as_mut() {
            let slot = v * self.graph.degree_bound + (i - 1);
            if cache[slot] != UNCACHED {
                return Ok(OracleAnswer(cache[slot]));
            }
            let a = answer(self.graph, v, i);
            cache[slot] = a.0;
            self.ledger.classical_queries += 1;
            return Ok(a);
        }
        self.ledger.classical_queries += 1;
        Ok(answer(self.graph, v, i))
    }

    pub fn ledger(&self) -> &QueryLedger {
        &self.ledger
    }

    pub fn ledger_mut(&mut self) -> &mut QueryLedger {
        &mut self.ledger
    }

    pub fn into_ledger(self) -> QueryLedger {
        self.ledger
    }
}

#[cfg(test)]
mod tests {
    use super::generators::*;
    use super::*;

    #[test]
    fn triangle_first_neighbor() {
        let g = cycle(3, 2).unwrap();
        let mut ledger = QueryLedger::default();
        let a = neighbor_query(&g, 0, 1, &mut ledger).unwrap();
        assert_eq!(a.neighbor(), Some(1));
        assert_eq!(ledger.classical_queries, 1);
    }

    #[test]
    fn path_second_neighbor_is_bottom() {
        let g = path(2, 2).unwrap();
        let mut ledger = QueryLedger::default();
        let a = neighbor_query(&g, 0, 2, &mut ledger).unwrap();
        assert!(a.is_bottom());
        assert_eq!(a.raw(), OracleAnswer::BOTTOM_RAW);
        assert_eq!(ledger.classical_queries, 1);
    }

    #[test]
    fn c4_all_pairs_charge_n_times_d() {
        let g = cycle(4, 3).unwrap();
        let mut ledger = QueryLedger::default();
        for v in 0..4 {
            for i in 1..=3 {
                neighbor_query(&g, v, i, &mut ledger).unwrap();
            }
        }
        assert_eq!(ledger.classical_queries, 4 * 3);
    }

    #[test]
    fn out_of_range_is_an_error_not_bottom() {
        let g = cycle(4, 2).unwrap();
        let mut ledger = QueryLedger::default();
        assert!(matches!(
            neighbor_query(&g, 4, 1, &mut ledger),
            Err(Error::VertexOutOfRange { .. })
        ));
        assert!(matches!(
            neighbor_query(&g, 0, 0, &mut ledger),
            Err(Error::IndexOutOfRange { .. })
        ));
        assert!(matches!(
            neighbor_query(&g, 0, 3, &mut ledger),
            Err(Error::IndexOutOfRange { .. })
        ));
        assert_eq!(ledger.classical_queries, 0);
    }

    #[test]
    fn rejects_asymmetric_and_overfull_lists() {
        assert!(BoundedDegreeGraph::new(2, vec![vec![1], vec![]]).is_err());
        assert!(BoundedDegreeGraph::new(1, vec![vec![1, 2], vec![0], vec![0]]).is_err());
        assert!(BoundedDegreeGraph::new(2, vec![vec![0]]).is_err());
        assert!(BoundedDegreeGraph::new(2, vec![vec![5], vec![]]).is_err());
        // parallel edges are fine as long as both ends agree
        assert!(BoundedDegreeGraph::new(2, vec![vec![1, 1], vec![0, 0]]).is_ok());
    }

    #[test]
    fn memoized_oracle_charges_once() {
        let g = cycle(5, 2).unwrap();
        let mut o = CountingOracle::memoized(&g);
        for _ in 0..3 {
            o.query(2, 1).unwrap();
            o.query(2, 2).unwrap();
        }
        assert_eq!(o.ledger().classical_queries, 2);
    }
}
