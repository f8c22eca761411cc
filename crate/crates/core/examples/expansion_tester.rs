//! The expansion tester with the exact and the collision-finder counter.

use sublinear_lab::graph::generators::{disjoint_union, random_matching_union};
use sublinear_lab::rng::substream;
use sublinear_lab::testers::{test_expansion, CoinMode, CounterMode, ExpansionParams, TesterOptions};

fn main() -> sublinear_lab::Result<()> {
    let n = 512;
    let expander = random_matching_union(n, 6, &mut substream(1, 0))?;
    let halves = disjoint_union(
        &[random_matching_union(n / 2, 6, &mut substream(1, 1))?, random_matching_union(n / 2, 6, &mut substream(1, 2))?],
        6,
    )?;
    let p = ExpansionParams::derive(n, 0.25, 0.3, 0.12, 6)?.with_repetitions(1);
    println!("K = {}, L = {}, threshold = {:.3}", p.walks, p.walk_length, p.threshold);
    for (name, g) in [("expander", &expander), ("two halves", &halves)] {
        for counter in [CounterMode::Exact, CounterMode::Skeleton] {
            let opts = TesterOptions::new(CoinMode::FullyRandom).with_counter(counter);
            let accepted = (0..20).filter(|&s| test_expansion(g, &p, &opts, s).unwrap().accept).count();
            println!("{name} / {counter:?}: accepted {accepted}/20");
        }
    }
    Ok(())
}
