//! Adjacency-list oracle with query accounting.

use sublinear_lab::graph::exact::{bipartite_farness_exact, component_sizes, is_bipartite_exact};
use sublinear_lab::graph::generators::{cycle, disjoint_union};
use sublinear_lab::graph::io::{parse_text, to_text};
use sublinear_lab::graph::CountingOracle;

fn main() -> sublinear_lab::Result<()> {
    let g = disjoint_union(&[cycle(5, 3)?, cycle(4, 3)?], 3)?;
    println!("{}", to_text(&g));

    let mut oracle = CountingOracle::memoized(&g);
    for i in 1..=3 {
        match oracle.query(0, i)?.neighbor() {
            Some(u) => println!("f(0, {i}) = {u}"),
            None => println!("f(0, {i}) = bottom"),
        }
    }
    // cached answers are not charged again
    oracle.query(0, 1)?;
    println!("classical queries: {}", oracle.ledger().classical_queries);

    let back = parse_text(&to_text(&g))?;
    assert_eq!(back, g);
    println!(
        "bipartite: {}, components: {:?}, farness: {}",
        is_bipartite_exact(&g),
        component_sizes(&g),
        bipartite_farness_exact(&g)?
    );
    Ok(())
}
