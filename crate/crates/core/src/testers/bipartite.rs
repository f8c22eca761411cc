use super::{repetition_family, BipartiteParams, CoinMode, RepetitionRecord, TesterOptions, TesterVerdict};
use crate::collision::{find_collision, CollisionQuery, Relation};
use crate::error::{input, Error, Result};
use crate::graph::{BoundedDegreeGraph, CountingOracle};
use crate::rng::{child_seed, substream};
use crate::walk::{lazy_step, WalkCoins};
use rand::Rng;

/// Walk-pair statistics are skipped above this many walks (quadratic memory).
pub const WALK_PAIR_CAP: usize = 512;

/// Largest `K·L` prefix table a repetition will hold in memory.
pub const PREFIX_CAP: usize = 1 << 26;

/// `(vertex, parity)` pairs are related when the vertex agrees and the
/// parity differs.
#[derive(Debug, Clone, Copy, Default)]
pub struct OppositeParity;

impl Relation<(u32, u8)> for OppositeParity {
    type Key = u32;
    fn key(&self, y: &(u32, u8)) -> u32 {
        y.0
    }
    fn related(&self, a: &(u32, u8), b: &(u32, u8)) -> bool {
        a.0 == b.0 && a.1 != b.1
    }
}

/// Runs the tester. Rejects iff some repetition finds two walk prefixes
/// (possibly of the same walk) ending at one vertex after an even and an odd
/// number of moves, which exhibits an odd closed walk; bipartite graphs are
/// therefore always accepted.
pub fn test_bipartiteness(
    g: &BoundedDegreeGraph,
    params: &BipartiteParams,
    opts: &TesterOptions,
    seed: u64,
) -> Result<TesterVerdict<BipartiteParams>> {
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
    let domain = k_walks.checked_mul(len).filter(|&x| x <= PREFIX_CAP).ok_or(Error::Cap {
        what: "walk prefixes per repetition (K·L)",
        value: k_walks.saturating_mul(len),
        cap: PREFIX_CAP,
    })?;
    let alphabet = 2 * params.degree_bound as u64;
    let n = g.n_vertices();
    let mut oracle = CountingOracle::memoized(g);
    let mut records = Vec::with_capacity(params.repetitions);
    let mut prefixes = vec![(0u32, 0u8); domain];

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
        for i in 0..k_walks {
            let coins = match &family {
                None => WalkCoins::fully_random(walk_seed, i as u64, len, alphabet),
                Some(f) => WalkCoins::kwise(f, i as u64, len, alphabet),
            };
            let (mut v, mut parity) = (s, 0u8);
            for (j, coin) in coins.stream()?.enumerate() {
                let u = lazy_step(&mut oracle, v, coin?)?;
                if u != v {
                    parity ^= 1;
                    v = u;
                }
                prefixes[i * len + j] = (v as u32, parity);
            }
        }

        let collisions = opposite_parity_pairs(&prefixes, n);
        let walk_pairs = (k_walks <= WALK_PAIR_CAP).then(|| walk_pair_collisions(&prefixes, k_walks, len));
        let query = CollisionQuery::new(domain, 2 * n as u64, |x| prefixes[x], OppositeParity)
            .with_failure(opts.injected_failure)
            .with_cost(opts.cost);
        let report = find_collision(&query, &mut rng);
        oracle.ledger_mut().modeled_quantum_queries += report.modeled_quantum_queries;
        let rejected = report.found.is_some();
        records.push(RepetitionRecord {
            start: s,
            collisions,
            walk_pairs,
            witness: report
                .found
                .map(|(a, b)| ((a / len, a % len + 1), (b / len, b % len + 1))),
            rejected,
            counter_attempts: None,
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

/// `sum_v even_v · odd_v` over the prefix table.
fn opposite_parity_pairs(prefixes: &[(u32, u8)], n: usize) -> u64 {
    let mut counts = vec![[0u64; 2]; n];
    for &(v, p) in prefixes {
        counts[v as usize][p as usize] += 1;
    }
    counts.iter().map(|c| c[0] * c[1]).sum()
}

/// Number of walk pairs `i < j` such that walk `i` and walk `j` visit a
/// common vertex with opposite parities. `prefixes` holds `walks` rows of
/// `len` entries.
pub fn walk_pair_collisions(prefixes: &[(u32, u8)], walks: usize, len: usize) -> u64 {
    let mut seen: Vec<(u32, u8, u32)> = (0..walks)
        .flat_map(|i| prefixes[i * len..(i + 1) * len].iter().map(move |&(v, p)| (v, p, i as u32)))
        .collect();
    seen.sort_unstable();
    seen.dedup();
    let words = walks.div_ceil(64);
    let mut hit = vec![0u64; walks * words];
    let mut start = 0;
    while start < seen.len() {
        let v = seen[start].0;
        let end = start + seen[start..].iter().take_while(|e| e.0 == v).count();
        let group = &seen[start..end];
        let split = group.iter().take_while(|e| e.1 == 0).count();
        for &(_, _, a) in &group[..split] {
            for &(_, _, b) in &group[split..] {
                let (a, b) = (a as usize, b as usize);
                hit[a * words + b / 64] |= 1 << (b % 64);
                hit[b * words + a / 64] |= 1 << (a % 64);
            }
        }
        start = end;
    }
    (0..walks)
        .map(|a| {
            (a + 1..walks)
                .filter(|&b| hit[a * words + b / 64] >> (b % 64) & 1 == 1)
                .count() as u64
        })
        .sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::exact::is_bipartite_exact;
    use crate::graph::generators::{cycle, disjoint_union, empty, random_bipartite, random_matching_union};

    fn small(n: usize, d: usize) -> BipartiteParams {
        BipartiteParams::derive(n.max(2), 0.5, d)
            .unwrap()
            .with_repetitions(3)
            .with_walks(6)
            .with_walk_length(20)
    }

    #[test]
    fn even_cycle_always_accepted() {
        let g = cycle(100, 2).unwrap();
        for coins in [CoinMode::FullyRandom, CoinMode::Kwise] {
            for seed in 0..30 {
                let v = test_bipartiteness(&g, &small(100, 2), &TesterOptions::new(coins), seed).unwrap();
                assert!(v.accept);
                assert_eq!(v.repetitions.len(), 3);
                assert!(v.repetitions.iter().all(|r| r.collisions == 0 && r.walk_pairs == Some(0)));
            }
        }
    }

    #[test]
    fn empty_graph_accepted() {
        let g = empty(10, 3).unwrap();
        let v = test_bipartiteness(&g, &small(10, 3), &TesterOptions::default(), 1).unwrap();
        assert!(v.accept);
        // memoized: each of the N·d slots is paid for at most once
        assert!(v.ledger.classical_queries <= 30);
    }

    #[test]
    fn triangles_rejected_with_witness() {
        let tri = cycle(3, 2).unwrap();
        let g = disjoint_union(&vec![tri; 5], 2).unwrap();
        let p = small(15, 2).with_walk_length(60);
        let v = test_bipartiteness(&g, &p, &TesterOptions::default(), 3).unwrap();
        assert!(!v.accept);
        let last = v.repetitions.last().unwrap();
        assert!(last.rejected && last.collisions > 0);
        let ((i, j), (i2, j2)) = last.witness.unwrap();
        assert!(i < 6 && i2 < 6 && (1..=60).contains(&j) && (1..=60).contains(&j2));
    }

    #[test]
    fn verdict_reproducible() {
        let g = random_matching_union(40, 3, &mut substream(4, 0)).unwrap();
        for coins in [CoinMode::FullyRandom, CoinMode::Kwise] {
            let a = test_bipartiteness(&g, &small(40, 3), &TesterOptions::new(coins), 9).unwrap();
            let b = test_bipartiteness(&g, &small(40, 3), &TesterOptions::new(coins), 9).unwrap();
            assert_eq!(a, b);
        }
    }

    #[test]
    fn classical_queries_bounded() {
        let g = random_matching_union(40, 3, &mut substream(5, 0)).unwrap();
        let p = small(40, 3);
        let v = test_bipartiteness(&g, &p, &TesterOptions::default(), 2).unwrap();
        let bound = (p.repetitions * p.walks * p.walk_length * (p.degree_bound + 1)) as u64;
        assert!(v.ledger.classical_queries <= bound);
        assert!(v.ledger.walk_steps <= (p.repetitions * p.walks * p.walk_length) as u64);
    }

    #[test]
    fn mismatched_params_rejected() {
        let g = cycle(10, 2).unwrap();
        assert!(test_bipartiteness(&g, &small(12, 2), &TesterOptions::default(), 0).is_err());
        assert!(test_bipartiteness(&g, &small(10, 3), &TesterOptions::default(), 0).is_err());
        let p = small(10, 2).with_walks(1 << 14).with_walk_length(1 << 14);
        assert!(matches!(
            test_bipartiteness(&g, &p, &TesterOptions::default(), 0),
            Err(Error::Cap { .. })
        ));
    }

    #[test]
    fn walk_pairs_by_brute_force() {
        let mut rng = substream(6, 0);
        for _ in 0..50 {
            let (walks, len) = (rng.gen_range(1..8), rng.gen_range(1..6));
            let prefixes: Vec<(u32, u8)> = (0..walks * len).map(|_| (rng.gen_range(0..4), rng.gen_range(0..2))).collect();
            let mut brute = 0;
            for a in 0..walks {
                for b in a + 1..walks {
                    let meet = (0..len).any(|x| {
                        (0..len).any(|y| {
                            let (p, q) = (prefixes[a * len + x], prefixes[b * len + y]);
                            p.0 == q.0 && p.1 != q.1
                        })
                    });
                    brute += meet as u64;
                }
            }
            assert_eq!(walk_pair_collisions(&prefixes, walks, len), brute);
        }
    }

    #[test]
    fn random_bipartite_never_rejected() {
        let g = random_bipartite(60, 3, &mut substream(7, 0)).unwrap();
        assert!(is_bipartite_exact(&g));
        for seed in 0..50 {
            let v = test_bipartiteness(&g, &small(60, 3), &TesterOptions::new(CoinMode::Kwise), seed).unwrap();
            assert!(v.accept);
        }
    }
}
