use super::{
    pairwise_collisions, repetition_family, CoinMode, CounterMode, ExpansionParams, RepetitionRecord, TesterOptions,
    TesterVerdict,
};
use crate::collision::{count_at_least, CollisionQuery, Equality};
use crate::error::{input, Result};
use crate::graph::{BoundedDegreeGraph, CountingOracle};
use crate::rng::{child_seed, substream};
use crate::walk::{endpoint, WalkCoins};
use rand::Rng;

/// Runs the tester. A repetition rejects when the `K` walk endpoints have
/// more than `threshold` pairwise collisions: counted exactly in
/// [`CounterMode::Exact`], or established by finding `floor(threshold) + 1`
/// of them through the collision finder in [`CounterMode::Skeleton`].
pub fn test_expansion(
    g: &BoundedDegreeGraph,
    params: &ExpansionParams,
    opts: &TesterOptions,
    seed: u64,
) -> Result<TesterVerdict<ExpansionParams>> {
    params.validate()?;
    opts.validate()?;
    if g.n_vertices() != params.n_vertices || g.degree_bound() != params.degree_bound {
        return input(format!(
            "parameters are for N = {}, d = {} but the graph has N = {}, d = {}",
            params.n_vertices,
            params.degree_bound,
            g.n_vertices(),
            g.degree_bound()
        ));
    }
    let (k_walks, len) = (params.walks, params.walk_length);
    let alphabet = 2 * params.degree_bound as u64;
    let n = g.n_vertices();
    let mut oracle = CountingOracle::memoized(g);
    let mut records = Vec::with_capacity(params.repetitions);

    for tau in 0..params.repetitions {
        let mut rng = substream(seed, tau as u64);
        let s = rng.gen_range(0..n);
        let walk_seed = child_seed(&mut rng);
        let family = match opts.coins {
            CoinMode::FullyRandom => None,
            CoinMode::Kwise => Some(repetition_family(
                k_walks,
                len,
                params.degree_bound,
                params.k_indep,
                params.k_factor,
                opts.kwise_seed.as_ref(),
                &mut rng,
            )?),
        };
        let ends = (0..k_walks)
            .map(|i| {
                let coins = match &family {
                    None => WalkCoins::fully_random(walk_seed, i as u64, len, alphabet),
                    Some(f) => WalkCoins::kwise(f, i as u64, len, alphabet),
                };
                endpoint(&mut oracle, s, &coins).map(|v| v as u32)
            })
            .collect::<Result<Vec<u32>>>()?;
        let collisions = pairwise_collisions(&ends);

        let (rejected, witness, attempts) = match opts.counter {
            CounterMode::Exact => (collisions as f64 > params.threshold, None, None),
            CounterMode::Skeleton => {
                let mut rejected = false;
                let mut witness = None;
                let mut attempts = 0;
                for _ in 0..params.outer_retries {
                    attempts += 1;
                    let mut q = CollisionQuery::new(k_walks, n as u64, |i| ends[i], Equality)
                        .with_failure(opts.injected_failure)
                        .with_cost(opts.cost);
                    let out = count_at_least(&mut q, params.reject_count(), &mut rng);
                    oracle.ledger_mut().modeled_quantum_queries += out.modeled_quantum_queries;
                    if out.reached {
                        rejected = true;
                        witness = out.pairs.first().map(|&(a, b)| ((a, len), (b, len)));
                        break;
                    }
                }
                (rejected, witness, Some(attempts))
            }
        };
        records.push(RepetitionRecord {
            start: s,
            collisions,
            walk_pairs: None,
            witness,
            rejected,
            counter_attempts: attempts,
            family: family.as_ref().map(|f| f.descriptor()),
        });
        if rejected {
            break;
        }
    }
    Ok(TesterVerdict {
        accept: records.iter().all(|r| !r.rejected),
        params: params.clone(),
        coins: opts.coins,
        seed,
        repetitions: records,
        ledger: *oracle.ledger(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::collision::{modeled_quantum_cost, retries_for};
    use crate::graph::generators::{complete, disjoint_union, random_matching_union};

    fn params(n: usize, d: usize) -> ExpansionParams {
        ExpansionParams::derive(n, 0.5, 0.5, 0.2, d)
            .unwrap()
            .with_repetitions(2)
            .with_walk_length(30)
    }

    #[test]
    fn exact_and_skeleton_agree_without_failure() {
        let g = random_matching_union(64, 3, &mut substream(1, 0)).unwrap();
        let p = params(64, 3);
        for seed in 0..40 {
            let a = test_expansion(&g, &p, &TesterOptions::default(), seed).unwrap();
            let b = test_expansion(&g, &p, &TesterOptions::default().with_counter(CounterMode::Skeleton), seed).unwrap();
            assert_eq!(a.accept, b.accept, "seed {seed}");
            let xs: Vec<u64> = a.repetitions.iter().map(|r| r.collisions).collect();
            let ys: Vec<u64> = b.repetitions.iter().map(|r| r.collisions).collect();
            assert_eq!(xs, ys);
        }
    }

    #[test]
    fn disconnected_graph_rejected() {
        // two K4 components: walks never leave the start component
        let g = disjoint_union(&[complete(4).unwrap(), complete(4).unwrap()], 3).unwrap();
        let p = ExpansionParams::derive(8, 0.5, 0.5, 0.2, 3).unwrap().with_walks(12).with_walk_length(10);
        assert!(p.threshold < 2.0);
        let v = test_expansion(&g, &p, &TesterOptions::default(), 0).unwrap();
        assert!(!v.accept);
        // 12 endpoints in 4 vertices always collide
        assert!(v.repetitions[0].collisions >= 12);
    }

    #[test]
    fn single_walk_never_collides() {
        let g = random_matching_union(64, 3, &mut substream(2, 0)).unwrap();
        let p = params(64, 3).with_walks(1);
        let v = test_expansion(&g, &p, &TesterOptions::new(CoinMode::Kwise), 1).unwrap();
        assert!(v.accept);
        assert!(v.repetitions.iter().all(|r| r.collisions == 0));
    }

    #[test]
    fn ledger_bounds() {
        let g = random_matching_union(64, 3, &mut substream(3, 0)).unwrap();
        let p = params(64, 3);
        let opts = TesterOptions::default().with_counter(CounterMode::Skeleton).with_failure(0.3);
        for seed in 0..20 {
            let v = test_expansion(&g, &p, &opts, seed).unwrap();
            let m = p.reject_count();
            let bound = p.repetitions as u64
                * p.outer_retries as u64
                * m
                * retries_for(m)
                * modeled_quantum_cost(p.walks as u64, 2 * 64);
            assert!(v.ledger.modeled_quantum_queries <= bound);
            assert!(
                v.ledger.classical_queries
                    <= (p.repetitions * p.walks * p.walk_length * (p.degree_bound + 1)) as u64
            );
        }
    }

    #[test]
    fn reproducible() {
        let g = random_matching_union(64, 3, &mut substream(4, 0)).unwrap();
        let opts = TesterOptions::new(CoinMode::Kwise).with_counter(CounterMode::Skeleton);
        let a = test_expansion(&g, &params(64, 3), &opts, 5).unwrap();
        let b = test_expansion(&g, &params(64, 3), &opts, 5).unwrap();
        assert_eq!(a, b);
    }
}
