//! Lazy random walks driven by fully random or k-wise coins.

use sublinear_lab::graph::generators::cycle;
use sublinear_lab::graph::CountingOracle;
use sublinear_lab::kwise::KWiseFamily;
use sublinear_lab::rng::substream;
use sublinear_lab::walk::{endpoint_parity, run_walk, WalkCoins};

fn main() -> sublinear_lab::Result<()> {
    let g = cycle(12, 2)?;
    let alphabet = 2 * g.degree_bound() as u64;
    let mut oracle = CountingOracle::new(&g);

    let trace = run_walk(&mut oracle, 0, &WalkCoins::fully_random(1, 0, 20, alphabet))?;
    println!("visited {:?} ({} moves)", trace.visited, trace.moves);

    let fam = KWiseFamily::random(1 << 10, 8, &mut substream(2, 0))?;
    for w in 0..4 {
        let p = endpoint_parity(&mut oracle, 0, &WalkCoins::kwise(&fam, w, 20, alphabet))?;
        println!("kwise walk {w}: ends at {} with parity {}", p.vertex, p.parity);
    }
    let coins = [0, 2, 1, 3, 0];
    let t = run_walk(&mut oracle, 5, &WalkCoins::explicit(&coins, alphabet))?;
    println!("explicit coins {coins:?}: {:?}", t.visited);
    println!("{:?}", oracle.ledger());
    Ok(())
}
