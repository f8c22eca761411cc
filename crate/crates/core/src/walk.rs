//! Lazy random walks through the neighbor oracle.
//!
//! One step draws a coin `c` in `[0, 2d)`. For `c < d` the walk asks the
//! oracle for neighbor `c + 1` and moves there if it exists; otherwise (or for
//! `c >= d`) it stays. Since neighbors occupy indices `1..=deg(v)`, this moves
//! to each neighbor with probability `1/2d` and stays with probability
//! `1 - deg(v)/2d`. A step costs one query when `c < d` and none otherwise.

use crate::error::{input, precondition, Result};
use crate::graph::CountingOracle;
use crate::kwise::KWiseFamily;
use crate::rng::substream;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

/// Where the coins of a walk come from.
#[derive(Debug, Clone, Copy)]
pub enum CoinSource<'a> {
    /// Walk `i` reads its own ChaCha stream `i` of `seed`.
    FullyRandom { seed: u64 },
    /// Walk `i` reads symbols `i·L .. i·L + L` of the family.
    KWise(&'a KWiseFamily),
    /// A fixed coin sequence, for hand-built walks.
    Explicit(&'a [u64]),
}

#[derive(Debug, Clone, Copy)]
pub struct WalkCoins<'a> {
    pub source: CoinSource<'a>,
    pub walk: u64,
    pub length: usize,
    pub alphabet: u64,
}

impl<'a> WalkCoins<'a> {
    pub fn fully_random(seed: u64, walk: u64, length: usize, alphabet: u64) -> Self {
        Self {
            source: CoinSource::FullyRandom { seed },
            walk,
            length,
            alphabet,
        }
    }

    pub fn kwise(family: &'a KWiseFamily, walk: u64, length: usize, alphabet: u64) -> Self {
        Self {
            source: CoinSource::KWise(family),
            walk,
            length,
            alphabet,
        }
    }

    pub fn explicit(coins: &'a [u64], alphabet: u64) -> Self {
        Self {
            source: CoinSource::Explicit(coins),
            walk: 0,
            length: coins.len(),
            alphabet,
        }
    }

    /// The coin sequence, one `Result` per step.
    pub fn stream(&self) -> Result<CoinStream<'a>> {
        if self.alphabet < 2 {
            return input("walk alphabet must be at least 2");
        }
        let inner = match self.source {
            CoinSource::FullyRandom { seed } => Inner::Random(substream(seed, self.walk)),
            CoinSource::KWise(fam) => {
                let first = self.walk * self.length as u64;
                let needed = first + self.length as u64;
                if needed > fam.symbol_capacity(self.alphabet) {
                    return input(format!(
                        "family holds {} symbols, walk {} needs up to {needed}",
                        fam.symbol_capacity(self.alphabet),
                        self.walk
                    ));
                }
                Inner::KWise { fam, next: first }
            }
            CoinSource::Explicit(coins) => {
                if coins.len() != self.length {
                    return input("explicit coin sequence length differs from walk length");
                }
                if let Some(&c) = coins.iter().find(|&&c| c >= self.alphabet) {
                    return input(format!("coin {c} outside [0, {})", self.alphabet));
                }
                Inner::Explicit(coins.iter())
            }
        };
        Ok(CoinStream {
            inner,
            left: self.length,
            alphabet: self.alphabet,
        })
    }
}

pub struct CoinStream<'a> {
    inner: Inner<'a>,
    left: usize,
    alphabet: u64,
}

enum Inner<'a> {
    Random(ChaCha8Rng),
    KWise { fam: &'a KWiseFamily, next: u64 },
    Explicit(std::slice::Iter<'a, u64>),
}

impl Iterator for CoinStream<'_> {
    type Item = Result<u64>;

    fn next(&mut self) -> Option<Result<u64>> {
        if self.left == 0 {
            return None;
        }
        self.left -= 1;
        Some(match &mut self.inner {
            Inner::Random(rng) => Ok(rng.gen_range(0..self.alphabet)),
            Inner::KWise { fam, next } => {
                let c = fam.eval_symbol(*next, self.alphabet);
                *next += 1;
                c
            }
            Inner::Explicit(it) => Ok(*it.next().expect("length checked")),
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct WalkTrace {
    /// Visited vertices with consecutive repeats removed.
    pub visited: Vec<usize>,
    pub moves: u64,
    pub endpoint: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct ParityEndpoint {
    pub vertex: usize,
    pub parity: u8,
}

/// One lazy step from `v` with coin `coin` in `[0, 2d)`.
pub fn lazy_step(oracle: &mut CountingOracle<'_>, v: usize, coin: u64) -> Result<usize> {
    let d = oracle.degree_bound() as u64;
    if coin >= 2 * d.max(1) {
        return precondition(format!("coin {coin} outside [0, {})", 2 * d));
    }
    oracle.ledger_mut().walk_steps += 1;
    if coin < d {
        Ok(oracle.query(v, coin as usize + 1)?.neighbor().unwrap_or(v))
    } else {
        Ok(v)
    }
}

fn check_walk(oracle: &CountingOracle<'_>, s: usize, coins: &WalkCoins<'_>) -> Result<()> {
    if s >= oracle.n_vertices() {
        return Err(crate::Error::VertexOutOfRange {
            vertex: s,
            n: oracle.n_vertices(),
        });
    }
    let d = oracle.degree_bound() as u64;
    if coins.alphabet != 2 * d {
        return input(format!("walk alphabet {} must equal 2d = {}", coins.alphabet, 2 * d));
    }
    Ok(())
}

/// Endpoint and move count without recording the trace.
fn walk_summary(oracle: &mut CountingOracle<'_>, s: usize, coins: &WalkCoins<'_>) -> Result<(usize, u64)> {
    check_walk(oracle, s, coins)?;
    let mut v = s;
    let mut moves = 0;
    for coin in coins.stream()? {
        let u = lazy_step(oracle, v, coin?)?;
        if u != v {
            moves += 1;
            v = u;
        }
    }
    Ok((v, moves))
}

pub fn run_walk(oracle: &mut CountingOracle<'_>, s: usize, coins: &WalkCoins<'_>) -> Result<WalkTrace> {
    check_walk(oracle, s, coins)?;
    let mut visited = vec![s];
    let mut v = s;
    for coin in coins.stream()? {
        let u = lazy_step(oracle, v, coin?)?;
        if u != v {
            visited.push(u);
            v = u;
        }
    }
    Ok(WalkTrace {
        moves: visited.len() as u64 - 1,
        endpoint: v,
        visited,
    })
}

pub fn endpoint_parity(oracle: &mut CountingOracle<'_>, s: usize, coins: &WalkCoins<'_>) -> Result<ParityEndpoint> {
    let (vertex, moves) = walk_summary(oracle, s, coins)?;
    Ok(ParityEndpoint {
        vertex,
        parity: (moves % 2) as u8,
    })
}

pub fn endpoint(oracle: &mut CountingOracle<'_>, s: usize, coins: &WalkCoins<'_>) -> Result<usize> {
    Ok(walk_summary(oracle, s, coins)?.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::exact::two_coloring;
    use crate::graph::generators::{cycle, path, random_matching_union};
    use crate::graph::BoundedDegreeGraph;
    use crate::kwise::{KWiseFamily, SymbolLayout};
    use crate::rng::{child_seed, substream};

    fn coin_to(g: &BoundedDegreeGraph, from: usize, to: usize) -> u64 {
        g.neighbors(from).iter().position(|&u| u as usize == to).unwrap() as u64
    }

    #[test]
    fn step_rules() {
        let g = BoundedDegreeGraph::from_edges(4, 3, &[(0, 1), (0, 2)]).unwrap();
        let mut o = CountingOracle::new(&g);
        assert_eq!(lazy_step(&mut o, 0, 0).unwrap(), g.neighbors(0)[0] as usize);
        assert_eq!(o.ledger().classical_queries, 1);
        assert_eq!(lazy_step(&mut o, 0, 4).unwrap(), 0);
        assert_eq!(o.ledger().classical_queries, 1);
        assert_eq!(lazy_step(&mut o, 0, 2).unwrap(), 0);
        assert_eq!(o.ledger().classical_queries, 2);
        for c in 0..6 {
            assert_eq!(lazy_step(&mut o, 3, c).unwrap(), 3);
        }
        assert_eq!(o.ledger().walk_steps, 9);
        assert!(lazy_step(&mut o, 0, 6).is_err());
    }

    #[test]
    fn stay_only_walk() {
        let g = cycle(6, 2).unwrap();
        let mut o = CountingOracle::new(&g);
        let coins = [2, 3, 3, 2, 2];
        let t = run_walk(&mut o, 4, &WalkCoins::explicit(&coins, 4)).unwrap();
        assert_eq!(t.visited, vec![4]);
        assert_eq!(t.moves, 0);
        let pe = endpoint_parity(&mut o, 4, &WalkCoins::explicit(&coins, 4)).unwrap();
        assert_eq!(pe, ParityEndpoint { vertex: 4, parity: 0 });
        assert_eq!(endpoint(&mut o, 4, &WalkCoins::explicit(&coins, 4)).unwrap(), 4);
        let empty = run_walk(&mut o, 2, &WalkCoins::explicit(&[], 4)).unwrap();
        assert_eq!((empty.visited, empty.moves, empty.endpoint), (vec![2], 0, 2));
    }

    #[test]
    fn forced_walks() {
        let c4 = cycle(4, 2).unwrap();
        let mut o = CountingOracle::new(&c4);
        let coins = [coin_to(&c4, 0, 1), 3, coin_to(&c4, 1, 0)];
        let t = run_walk(&mut o, 0, &WalkCoins::explicit(&coins, 4)).unwrap();
        assert_eq!((t.visited.clone(), t.moves, t.endpoint), (vec![0, 1, 0], 2, 0));

        let one = [coin_to(&c4, 0, 3)];
        let pe = endpoint_parity(&mut o, 0, &WalkCoins::explicit(&one, 4)).unwrap();
        assert_eq!(pe, ParityEndpoint { vertex: 3, parity: 1 });

        let c5 = cycle(5, 2).unwrap();
        let mut o = CountingOracle::new(&c5);
        let coins: Vec<u64> = (0..5).map(|i| coin_to(&c5, i, (i + 1) % 5)).collect();
        let pe = endpoint_parity(&mut o, 0, &WalkCoins::explicit(&coins, 4)).unwrap();
        assert_eq!(pe, ParityEndpoint { vertex: 0, parity: 1 });

        let p = path(6, 2).unwrap();
        let mut o = CountingOracle::new(&p);
        let coins: Vec<u64> = (0..3).map(|i| coin_to(&p, i, i + 1)).collect();
        assert_eq!(endpoint(&mut o, 0, &WalkCoins::explicit(&coins, 4)).unwrap(), 3);
    }

    #[test]
    fn trace_invariants_random() {
        let g = random_matching_union(30, 3, &mut substream(9, 0)).unwrap();
        let mut o = CountingOracle::new(&g);
        for i in 0..50 {
            let t = run_walk(&mut o, i % 30, &WalkCoins::fully_random(5, i as u64, 40, 6)).unwrap();
            assert!(t.visited.windows(2).all(|w| w[0] != w[1]));
            assert_eq!(t.moves as usize, t.visited.len() - 1);
            assert_eq!(t.endpoint, *t.visited.last().unwrap());
            assert!(t.visited.windows(2).all(|w| g.neighbors(w[0]).contains(&(w[1] as u32))));
        }
    }

    #[test]
    fn same_seed_same_endpoint() {
        let g = random_matching_union(30, 3, &mut substream(9, 0)).unwrap();
        let mut o = CountingOracle::new(&g);
        let fam = KWiseFamily::random(4096, 50, &mut substream(1, 1)).unwrap();
        for walk in 0..5 {
            let a = endpoint(&mut o, 7, &WalkCoins::fully_random(11, walk, 30, 6)).unwrap();
            let b = endpoint(&mut o, 7, &WalkCoins::fully_random(11, walk, 30, 6)).unwrap();
            assert_eq!(a, b);
            let a = endpoint(&mut o, 7, &WalkCoins::kwise(&fam, walk, 30, 6)).unwrap();
            let b = endpoint(&mut o, 7, &WalkCoins::kwise(&fam, walk, 30, 6)).unwrap();
            assert_eq!(a, b);
        }
    }

    #[test]
    fn wrong_alphabet_or_capacity_is_an_error() {
        let g = cycle(6, 2).unwrap();
        let mut o = CountingOracle::new(&g);
        assert!(endpoint(&mut o, 0, &WalkCoins::fully_random(1, 0, 5, 6)).is_err());
        assert!(endpoint(&mut o, 9, &WalkCoins::fully_random(1, 0, 5, 4)).is_err());
        let fam = KWiseFamily::random(16, 2, &mut substream(1, 1)).unwrap();
        assert!(endpoint(&mut o, 0, &WalkCoins::kwise(&fam, 3, 5, 4)).is_err());
    }

    #[test]
    fn c8_endpoints_near_uniform() {
        let g = cycle(8, 2).unwrap();
        let mut o = CountingOracle::new(&g);
        let walks = 100_000u64;
        let mut hist = [0u64; 8];
        for i in 0..walks {
            hist[endpoint(&mut o, 0, &WalkCoins::fully_random(2024, i, 200, 4)).unwrap()] += 1;
        }
        let worst = hist
            .iter()
            .map(|&c| (c as f64 / walks as f64 - 0.125).abs())
            .fold(0.0, f64::max);
        assert!(worst < 0.02, "{hist:?}");
    }

    #[test]
    fn parity_tracks_sides_exhaustively() {
        for n in [4usize, 6] {
            let g = cycle(n, 2).unwrap();
            let color = two_coloring(&g).unwrap();
            let mut o = CountingOracle::new(&g);
            for len in 0..=4u32 {
                for code in 0..4u64.pow(len) {
                    let coins: Vec<u64> = (0..len).map(|p| (code >> (2 * p)) & 3).collect();
                    for s in 0..n {
                        let pe = endpoint_parity(&mut o, s, &WalkCoins::explicit(&coins, 4)).unwrap();
                        assert_eq!(pe.parity == 0, color[pe.vertex] == color[s]);
                    }
                }
            }
        }
    }

    /// Pairs of walks that meet at the same vertex with opposite parity.
    fn violating_pairs(ends: &[ParityEndpoint]) -> u64 {
        let mut x = 0;
        for (i, a) in ends.iter().enumerate() {
            for b in &ends[i + 1..] {
                x += (a.vertex == b.vertex && a.parity != b.parity) as u64;
            }
        }
        x
    }

    #[test]
    fn kwise_coins_match_random_pair_statistics() {
        let g = random_matching_union(20, 3, &mut substream(77, 0)).unwrap();
        let (k_walks, len, alphabet) = (8u64, 8usize, 6u64);
        let layout = SymbolLayout::new(k_walks * len as u64, alphabet).unwrap();
        let k = 4 * len * layout.elements_per_symbol;
        let reps = 4000;
        let mut rng = substream(31, 0);
        let mut o = CountingOracle::new(&g);
        let mut stats = [(0f64, 0f64); 2];
        for _ in 0..reps {
            let fam = KWiseFamily::random(layout.n_elements, k, &mut rng).unwrap();
            let seed = child_seed(&mut rng);
            for (mode, st) in stats.iter_mut().enumerate() {
                let ends: Vec<_> = (0..k_walks)
                    .map(|i| {
                        let coins = if mode == 0 {
                            WalkCoins::fully_random(seed, i, len, alphabet)
                        } else {
                            WalkCoins::kwise(&fam, i, len, alphabet)
                        };
                        endpoint_parity(&mut o, 0, &coins).unwrap()
                    })
                    .collect();
                let x = violating_pairs(&ends) as f64;
                st.0 += x;
                st.1 += x * x;
            }
        }
        let n = reps as f64;
        let mv: Vec<(f64, f64)> = stats.iter().map(|&(s, ss)| (s / n, ss / n - (s / n).powi(2))).collect();
        let se = ((mv[0].1 + mv[1].1) / n).sqrt();
        assert!(mv[0].0 > 0.0);
        assert!((mv[0].0 - mv[1].0).abs() < 3.0 * se, "{mv:?}");
    }
}
