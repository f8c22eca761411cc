//! Collision finding with a classical executor and a modeled quantum cost.
//!
//! The executor evaluates every domain point, which is what a classical
//! machine has to do; the ledger separately records what an element
//! distinctness style search would be charged, `ceil(|X|^(2/3)) ·
//! ceil(log2(|Y|+1))^e`. An optional injected failure probability mimics a
//! subroutine that only succeeds with constant probability.

use crate::kwise::ceil_log2;
use rand::Rng;
use serde::Serialize;
use std::collections::{HashMap, HashSet};
use std::hash::Hash;

/// A symmetric relation, coarsened by a bucket key: related values must
/// share a key.
pub trait Relation<Y> {
    type Key: Hash + Eq;
    fn key(&self, y: &Y) -> Self::Key;
    fn related(&self, a: &Y, b: &Y) -> bool;
}

/// Plain equality.
#[derive(Debug, Clone, Copy, Default)]
pub struct Equality;

impl<Y: Hash + Eq + Clone> Relation<Y> for Equality {
    type Key = Y;
    fn key(&self, y: &Y) -> Y {
        y.clone()
    }
    fn related(&self, a: &Y, b: &Y) -> bool {
        a == b
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CostModel {
    /// Power applied to the `ceil(log2(|Y|+1))` factor.
    pub log_exponent: u32,
}

impl Default for CostModel {
    fn default() -> Self {
        Self { log_exponent: 1 }
    }
}

impl CostModel {
    pub fn cost(&self, domain_size: u64, codomain_size: u64) -> u64 {
        ceil_two_thirds_power(domain_size) * (ceil_log2(codomain_size + 1) as u64).pow(self.log_exponent)
    }
}

/// `ceil(|X|^(2/3)) · ceil(log2(|Y|+1))`.
pub fn modeled_quantum_cost(domain_size: u64, codomain_size: u64) -> u64 {
    CostModel::default().cost(domain_size, codomain_size)
}

/// Smallest `c` with `c^3 >= x^2`.
fn ceil_two_thirds_power(x: u64) -> u64 {
    let sq = (x as u128) * (x as u128);
    let mut c = ((x as f64).powf(2.0 / 3.0).ceil() as u128).saturating_sub(2);
    while c * c * c < sq {
        c += 1;
    }
    c as u64
}

pub struct CollisionQuery<Y, R, F> {
    pub domain_size: usize,
    /// `|Y|`, only used for cost accounting.
    pub codomain_size: u64,
    pub evaluator: F,
    pub relation: R,
    /// Ordered pairs already reported; kept closed under swap.
    pub exclude: HashSet<(usize, usize)>,
    pub injected_failure: f64,
    pub cost: CostModel,
    _y: std::marker::PhantomData<fn() -> Y>,
}

impl<Y, R, F> CollisionQuery<Y, R, F>
where
    Y: Hash + Eq + Clone,
    R: Relation<Y>,
    F: Fn(usize) -> Y,
{
    pub fn new(domain_size: usize, codomain_size: u64, evaluator: F, relation: R) -> Self {
        Self {
            domain_size,
            codomain_size,
            evaluator,
            relation,
            exclude: HashSet::new(),
            injected_failure: 0.0,
            cost: CostModel::default(),
            _y: std::marker::PhantomData,
        }
    }

    pub fn with_failure(mut self, p: f64) -> Self {
        assert!((0.0..1.0).contains(&p), "injected failure must lie in [0, 1)");
        self.injected_failure = p;
        self
    }

    pub fn with_cost(mut self, cost: CostModel) -> Self {
        self.cost = cost;
        self
    }

    fn exclude_pair(&mut self, x: usize, y: usize) {
        self.exclude.insert((x, y));
        self.exclude.insert((y, x));
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct CollisionReport {
    pub found: Option<(usize, usize)>,
    pub classical_evals: u64,
    pub modeled_quantum_queries: u64,
}

/// Lexicographically smallest non-excluded related pair `x < x'`, subject to
/// the injected failure.
pub fn find_collision<Y, R, F>(q: &CollisionQuery<Y, R, F>, rng: &mut impl Rng) -> CollisionReport
where
    Y: Hash + Eq + Clone,
    R: Relation<Y>,
    F: Fn(usize) -> Y,
{
    let values: Vec<Y> = (0..q.domain_size).map(&q.evaluator).collect();
    let mut report = CollisionReport {
        found: smallest_pair(&values, &q.relation, &q.exclude),
        classical_evals: q.domain_size as u64,
        modeled_quantum_queries: q.cost.cost(q.domain_size as u64, q.codomain_size),
    };
    if report.found.is_some() && q.injected_failure > 0.0 && rng.gen_bool(q.injected_failure) {
        report.found = None;
    }
    report
}

fn smallest_pair<Y, R>(values: &[Y], relation: &R, exclude: &HashSet<(usize, usize)>) -> Option<(usize, usize)>
where
    Y: Hash + Eq + Clone,
    R: Relation<Y>,
{
    // key -> groups of equal values, each with its indices in increasing order
    let mut buckets: HashMap<R::Key, Vec<(Y, Vec<usize>)>> = HashMap::new();
    for (x, y) in values.iter().enumerate() {
        let groups = buckets.entry(relation.key(y)).or_default();
        match groups.iter_mut().find(|(v, _)| v == y) {
            Some((_, idx)) => idx.push(x),
            None => groups.push((y.clone(), vec![x])),
        }
    }
    for (x, y) in values.iter().enumerate() {
        let groups = &buckets[&relation.key(y)];
        let partner = groups
            .iter()
            .filter(|(v, _)| relation.related(y, v))
            .filter_map(|(_, idx)| {
                let start = idx.partition_point(|&i| i <= x);
                idx[start..].iter().copied().find(|&z| !exclude.contains(&(x, z)))
            })
            .min();
        if let Some(z) = partner {
            return Some((x, z));
        }
    }
    None
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CountOutcome {
    /// Whether `M` distinct collisions were found.
    pub reached: bool,
    pub pairs: Vec<(usize, usize)>,
    pub calls: u64,
    pub classical_evals: u64,
    pub modeled_quantum_queries: u64,
}

/// Retries allowed per collision: `ceil(log2(3M)) + 1`.
pub fn retries_for(threshold: u64) -> u64 {
    ceil_log2(3 * threshold) as u64 + 1
}

/// Looks for `threshold` distinct collisions one at a time, each with up to
/// `retries_for(threshold)` attempts, excluding pairs already found. Never
/// reports success with fewer collisions than the threshold.
pub fn count_at_least<Y, R, F>(q: &mut CollisionQuery<Y, R, F>, threshold: u64, rng: &mut impl Rng) -> CountOutcome
where
    Y: Hash + Eq + Clone,
    R: Relation<Y>,
    F: Fn(usize) -> Y,
{
    assert!(threshold >= 1, "collision threshold must be at least 1");
    let t = retries_for(threshold);
    let mut out = CountOutcome {
        reached: false,
        pairs: Vec::new(),
        calls: 0,
        classical_evals: 0,
        modeled_quantum_queries: 0,
    };
    for _ in 0..threshold {
        let mut found = None;
        for _ in 0..t {
            let r = find_collision(q, rng);
            out.calls += 1;
            out.classical_evals += r.classical_evals;
            out.modeled_quantum_queries += r.modeled_quantum_queries;
            if r.found.is_some() {
                found = r.found;
                break;
            }
        }
        match found {
            Some((x, y)) => {
                q.exclude_pair(x, y);
                out.pairs.push((x, y));
            }
            None => return out,
        }
    }
    out.reached = true;
    out
}
