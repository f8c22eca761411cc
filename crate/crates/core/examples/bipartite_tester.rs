//! The one-sided bipartiteness tester on a bipartite and a far instance.

use sublinear_lab::graph::generators::{cycle, random_bipartite};
use sublinear_lab::rng::substream;
use sublinear_lab::testers::{test_bipartiteness, BipartiteParams, CoinMode, TesterOptions};

fn main() -> sublinear_lab::Result<()> {
    let bip = random_bipartite(400, 3, &mut substream(1, 0))?;
    let odd = cycle(21, 3)?;
    for (name, g) in [("random bipartite", &bip), ("odd cycle", &odd)] {
        let p = BipartiteParams::derive(g.n_vertices(), 0.05, 3)?
            .with_repetitions(2)
            .with_walks(8)
            .with_walk_length(600);
        // k-wise coins need independence k ~ 4 K L, so keep walks short
        for mode in [CoinMode::FullyRandom, CoinMode::Kwise] {
            let v = test_bipartiteness(g, &p, &TesterOptions::new(mode), 5)?;
            let witness = v.repetitions.iter().find_map(|r| r.witness);
            println!("{name} / {mode:?}: accept = {}, witness = {witness:?}, {:?}", v.accept, v.ledger);
        }
    }
    let derived = BipartiteParams::derive(10_000, 0.1, 3)?;
    println!("derived at N = 10^4, eps = 0.1: {derived:?}");
    Ok(())
}
