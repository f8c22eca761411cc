//! The hard distribution `P_{M,l}`: a host of `M` vertices split into `l`
//! equal blocks, each carrying `c` independent uniform perfect matchings, and
//! an `N`-vertex induced subgraph chosen block by block.
//!
//! With `l = 1` samples are expanders with high probability; with `l >= 2`
//! they fall apart into at least `l` pieces and are far from expanders.

mod bounds;
mod expander;

pub use bounds::{
    chernoff_failure_bound, chernoff_precondition_holds, coefficient_bound_check, neighbor_event_bound,
    CoefficientCheck, COEFFICIENT_DEGREE_CAP,
};
pub use expander::{empirical_expander_rate, spectral_expansion_certificate, ExpansionMode, ExpanderRate};

use crate::error::{input, Result};
use crate::graph::BoundedDegreeGraph;
use rand::Rng;
use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct PmlParams {
    /// `N`, vertices in the sample.
    pub n: usize,
    /// `M`, vertices in the host.
    pub m: usize,
    /// `l`, number of blocks.
    pub l: usize,
    /// `c`, matchings per block.
    pub c: usize,
}

impl PmlParams {
    pub fn new(n: usize, m: usize, l: usize, c: usize) -> Result<Self> {
        let p = Self { n, m, l, c };
        p.validate()?;
        Ok(p)
    }

    /// Host size `M` chosen by [`default_host_size`].
    pub fn with_default_host(n: usize, l: usize, c: usize) -> Result<Self> {
        Self::new(n, default_host_size(n, l)?, l, c)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n == 0 || self.l == 0 || self.c == 0 {
            return input("N, l and c must all be at least 1");
        }
        if !self.m.is_multiple_of(self.l) {
            return input(format!("l = {} does not divide M = {}", self.l, self.m));
        }
        if self.m < self.n {
            return input(format!("host size M = {} is below N = {}", self.m, self.n));
        }
        if !(self.m / self.l).is_multiple_of(2) {
            return input(format!("block size M/l = {} is odd; perfect matchings need it even", self.m / self.l));
        }
        Ok(())
    }

    pub fn block_size(&self) -> usize {
        self.m / self.l
    }
}

/// Smallest multiple of `l` that is at least `N(1 + N^(-c_exp))` with an
/// even block size.
pub fn host_size_for(n: usize, l: usize, c_exp: f64) -> Result<usize> {
    if n == 0 || l == 0 {
        return input("N and l must be at least 1");
    }
    if !(c_exp > 0.0) {
        return input("the exponent must be positive");
    }
    let nf = n as f64;
    let target = (nf * (1.0 + nf.powf(-c_exp))).ceil() as usize;
    let step = 2 * l;
    Ok(target.div_ceil(step) * step)
}

/// [`host_size_for`] with exponent `0.1`.
pub fn default_host_size(n: usize, l: usize) -> Result<usize> {
    host_size_for(n, l, 0.1)
}

/// `c` fixed-point-free involutions of `0..M`, each preserving the blocks
/// `[b·M/l, (b+1)·M/l)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MatchingUnionGraph {
    pub params: PmlParams,
    /// `partner[j][u]` is the vertex matched to `u` in matching `j`.
    pub partner: Vec<Vec<u32>>,
}

impl MatchingUnionGraph {
    pub fn block_of(&self, u: usize) -> usize {
        u / self.params.block_size()
    }

    /// The host as a simple graph (parallel edges collapsed).
    pub fn host_graph(&self) -> Result<BoundedDegreeGraph> {
        let all: Vec<usize> = (0..self.params.m).collect();
        Ok(induce(self, &all)?.0)
    }

    pub fn is_matched(&self, u: usize, v: usize, j: usize) -> bool {
        self.partner[j][u] as usize == v
    }
}

/// Samples every matching independently: repeatedly pair the lowest
/// unmatched vertex of the block with a uniform other unmatched vertex.
pub fn sample_matching_union(params: &PmlParams, rng: &mut impl Rng) -> Result<MatchingUnionGraph> {
    params.validate()?;
    let b = params.block_size();
    let mut partner = vec![vec![0u32; params.m]; params.c];
    // free[..] holds the unmatched vertices, pos[v] locates v in it
    let mut free: Vec<u32> = Vec::with_capacity(b);
    let mut pos = vec![0usize; b];
    let mut matched = vec![false; b];
    for block in 0..params.l {
        let base = block * b;
        for matching in partner.iter_mut() {
            free.clear();
            free.extend(0..b as u32);
            pos.iter_mut().enumerate().for_each(|(i, p)| *p = i);
            matched.iter_mut().for_each(|m| *m = false);
            let mut lowest = 0usize;
            while !free.is_empty() {
                while matched[lowest] {
                    lowest += 1;
                }
                // uniform over the other free vertices: the slot of `lowest`
                // stands in for the last slot
                let last = free.len() - 1;
                let r = rng.gen_range(0..last);
                let v = if free[r] as usize == lowest { free[last] } else { free[r] } as usize;
                for w in [lowest, v] {
                    matched[w] = true;
                    let i = pos[w];
                    free.swap_remove(i);
                    if i < free.len() {
                        pos[free[i] as usize] = i;
                    }
                }
                matching[base + lowest] = (base + v) as u32;
                matching[base + v] = (base + lowest) as u32;
            }
        }
    }
    Ok(MatchingUnionGraph {
        params: *params,
        partner,
    })
}

/// The vertex selection step, without the graph.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Selection {
    pub chosen: Vec<u32>,
    pub block_counts: Vec<usize>,
    pub failed: bool,
}

/// Picks `N` vertices one at a time: a uniform block, then a uniform
/// unchosen vertex in it. Fails the moment a full block is drawn.
pub fn select_vertices(params: &PmlParams, rng: &mut impl Rng) -> Result<Selection> {
    params.validate()?;
    let b = params.block_size();
    let mut left: Vec<Vec<u32>> = (0..params.l)
        .map(|blk| ((blk * b) as u32..((blk + 1) * b) as u32).collect())
        .collect();
    let mut sel = Selection {
        chosen: Vec::with_capacity(params.n),
        block_counts: vec![0; params.l],
        failed: false,
    };
    for _ in 0..params.n {
        let blk = rng.gen_range(0..params.l);
        if left[blk].is_empty() {
            sel.failed = true;
            break;
        }
        let i = rng.gen_range(0..left[blk].len());
        sel.chosen.push(left[blk].swap_remove(i));
        sel.block_counts[blk] += 1;
    }
    Ok(sel)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct InducedSample {
    pub chosen: Vec<u32>,
    pub block_counts: Vec<usize>,
    pub failed: bool,
    /// Induced graph on `0..N`, vertex `i` being `chosen[i]`; `None` on failure.
    #[serde(skip)]
    pub induced: Option<BoundedDegreeGraph>,
    /// Parallel edges merged when building `induced`.
    pub collapsed_parallel_edges: usize,
}

pub fn sample_induced(host: &MatchingUnionGraph, rng: &mut impl Rng) -> Result<InducedSample> {
    let sel = select_vertices(&host.params, rng)?;
    let (induced, collapsed) = if sel.failed {
        (None, 0)
    } else {
        let chosen: Vec<usize> = sel.chosen.iter().map(|&v| v as usize).collect();
        let (g, c) = induce(host, &chosen)?;
        (Some(g), c)
    };
    Ok(InducedSample {
        chosen: sel.chosen,
        block_counts: sel.block_counts,
        failed: sel.failed,
        induced,
        collapsed_parallel_edges: collapsed,
    })
}

/// One draw from `P_{M,l}`: host plus induced sample.
pub fn sample_pml(params: &PmlParams, rng: &mut impl Rng) -> Result<(MatchingUnionGraph, InducedSample)> {
    let host = sample_matching_union(params, rng)?;
    let sample = sample_induced(&host, rng)?;
    Ok((host, sample))
}

fn induce(host: &MatchingUnionGraph, chosen: &[usize]) -> Result<(BoundedDegreeGraph, usize)> {
    let mut label = vec![u32::MAX; host.params.m];
    for (i, &v) in chosen.iter().enumerate() {
        label[v] = i as u32;
    }
    let mut edges = Vec::new();
    for matching in &host.partner {
        for (i, &u) in chosen.iter().enumerate() {
            let w = label[matching[u] as usize];
            if w != u32::MAX && (i as u32) < w {
                edges.push((i, w as usize));
            }
        }
    }
    let total = edges.len();
    edges.sort_unstable();
    edges.dedup();
    let collapsed = total - edges.len();
    Ok((BoundedDegreeGraph::from_edges(chosen.len(), host.params.c, &edges)?, collapsed))
}
