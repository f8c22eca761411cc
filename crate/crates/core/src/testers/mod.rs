//! Random-walk testers for bipartiteness and expansion.
//!
//! Both testers repeat `T` times: pick a uniform start vertex `s`, run `K`
//! lazy walks of length `L` from `s`, and look at collisions among the
//! walks. Coins are either fully random or read from a fresh k-wise
//! independent family per repetition; the start vertex is always fully
//! random. Collision detection goes through [`crate::collision`], so every
//! verdict also carries the modeled quantum query count.

mod bipartite;
mod expansion;
mod params;

pub use bipartite::{test_bipartiteness, walk_pair_collisions, OppositeParity};
pub use expansion::test_expansion;
pub use params::{collision_threshold, BipartiteParams, ExpansionParams, DEFAULT_K_FACTOR, DEFAULT_OUTER_RETRIES};

use crate::collision::CostModel;
use crate::error::{input, Result};
use crate::graph::QueryLedger;
use crate::kwise::{FamilyDescriptor, KWiseFamily, Seed, SymbolLayout};
use crate::rng::LabRng;
use serde::Serialize;
use std::collections::HashMap;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum CoinMode {
    #[default]
    FullyRandom,
    Kwise,
}

/// How the expansion tester compares the collision count to its threshold.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum CounterMode {
    /// Count all endpoint collisions and compare.
    #[default]
    Exact,
    /// Look for `floor(threshold) + 1` collisions one at a time through the
    /// collision finder, `outer_retries` times.
    Skeleton,
}

#[derive(Debug, Clone, Default)]
pub struct TesterOptions {
    pub coins: CoinMode,
    pub counter: CounterMode,
    /// Probability that the collision finder discards a pair it found.
    pub injected_failure: f64,
    /// Use this family seed in every repetition instead of a fresh one.
    pub kwise_seed: Option<Seed>,
    pub cost: CostModel,
}

impl TesterOptions {
    pub fn new(coins: CoinMode) -> Self {
        Self {
            coins,
            ..Self::default()
        }
    }

    pub fn with_counter(mut self, counter: CounterMode) -> Self {
        self.counter = counter;
        self
    }

    pub fn with_failure(mut self, p: f64) -> Self {
        self.injected_failure = p;
        self
    }

    fn validate(&self) -> Result<()> {
        if !(0.0..1.0).contains(&self.injected_failure) {
            return input(format!("injected failure {} must lie in [0, 1)", self.injected_failure));
        }
        Ok(())
    }
}

/// A collision between walk `walk` after `step` steps and another walk.
pub type WalkPosition = (usize, usize);

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RepetitionRecord {
    pub start: usize,
    /// Bipartiteness: prefix pairs meeting with opposite parity.
    /// Expansion: endpoint pairs meeting at the same vertex.
    pub collisions: u64,
    /// Bipartiteness only: walk pairs that meet with opposite parity
    /// somewhere (computed for `K` up to [`bipartite::WALK_PAIR_CAP`]).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub walk_pairs: Option<u64>,
    pub witness: Option<(WalkPosition, WalkPosition)>,
    pub rejected: bool,
    /// Expansion skeleton mode: collision-counter attempts made.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub counter_attempts: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub family: Option<FamilyDescriptor>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TesterVerdict<P> {
    pub accept: bool,
    pub params: P,
    pub coins: CoinMode,
    pub seed: u64,
    /// Repetitions actually run; the tester stops at the first rejection.
    pub repetitions: Vec<RepetitionRecord>,
    pub ledger: QueryLedger,
}

/// `sum_v C(m_v, 2)` over the multiplicities of `points`.
pub fn pairwise_collisions<T: std::hash::Hash + Eq + Copy>(points: &[T]) -> u64 {
    let mut counts: HashMap<T, u64> = HashMap::new();
    for &p in points {
        *counts.entry(p).or_default() += 1;
    }
    counts.values().map(|&m| m * (m.saturating_sub(1)) / 2).sum()
}

fn family_shape(
    walks: usize,
    walk_length: usize,
    degree_bound: usize,
    k_indep: usize,
    k_factor: usize,
) -> Result<(SymbolLayout, usize)> {
    let layout = SymbolLayout::new((walks * walk_length) as u64, 2 * degree_bound as u64)?;
    let k = k_indep
        .max(k_factor * walk_length * layout.elements_per_symbol)
        .min(layout.n_elements as usize);
    Ok((layout, k))
}

/// Seed length in bits of the per-repetition coin family, i.e. the length
/// a fixed `kwise_seed` must have.
pub fn kwise_seed_bits(
    walks: usize,
    walk_length: usize,
    degree_bound: usize,
    k_indep: usize,
    k_factor: usize,
) -> Result<usize> {
    let (layout, k) = family_shape(walks, walk_length, degree_bound, k_indep, k_factor)?;
    Ok(KWiseFamily::seed_len(layout.n_elements, k))
}

/// Family for one repetition: `K·L` symbols over `2d`, independence
/// `max(k_indep, k_factor · L · r)` field elements, where `r` is the number
/// of elements per symbol (so any `k_factor` whole walks are independent).
fn repetition_family(
    walks: usize,
    walk_length: usize,
    degree_bound: usize,
    k_indep: usize,
    k_factor: usize,
    fixed: Option<&Seed>,
    rng: &mut LabRng,
) -> Result<KWiseFamily> {
    let (layout, k) = family_shape(walks, walk_length, degree_bound, k_indep, k_factor)?;
    match fixed {
        Some(seed) => KWiseFamily::build(layout.n_elements, k, seed),
        None => KWiseFamily::random(layout.n_elements, k, rng),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::substream;
    use proptest::prelude::*;

    fn pairwise_by_enumeration(points: &[u32]) -> u64 {
        let mut c = 0;
        for i in 0..points.len() {
            for j in i + 1..points.len() {
                c += (points[i] == points[j]) as u64;
            }
        }
        c
    }

    #[test]
    fn distinct_points_have_no_collisions() {
        assert_eq!(pairwise_collisions(&[1u32, 2, 3, 4]), 0);
        assert_eq!(pairwise_collisions::<u32>(&[]), 0);
    }

    proptest! {
        #[test]
        fn collision_statistic_matches_enumeration(points in prop::collection::vec(0u32..30, 0..200)) {
            prop_assert_eq!(pairwise_collisions(&points), pairwise_by_enumeration(&points));
        }
    }

    #[test]
    fn family_is_large_enough() {
        let mut rng = substream(1, 1);
        let fam = repetition_family(16, 16, 3, 192, 4, None, &mut rng).unwrap();
        assert!(fam.symbol_capacity(6) >= 256);
        assert_eq!(fam.k(), 4 * 16 * fam.elements_per_symbol(6));
        // fewer than four walks: capped at full independence
        let fam = repetition_family(2, 3, 3, 36, 4, None, &mut rng).unwrap();
        assert_eq!(fam.k() as u64, fam.n());
    }
}
