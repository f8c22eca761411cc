//! Collision finding and threshold counting with an injected failure rate.

use sublinear_lab::collision::{count_at_least, find_collision, modeled_quantum_cost, CollisionQuery, Equality};
use sublinear_lab::rng::substream;

fn main() {
    let values = [3u32, 1, 4, 1, 5, 9, 2, 6, 5, 3, 5];
    let mut rng = substream(11, 0);

    let q = CollisionQuery::new(values.len(), 10, |i| values[i], Equality);
    println!("{:?}", find_collision(&q, &mut rng));
    println!("modeled cost for |X| = 1000, |Y| = 1000: {}", modeled_quantum_cost(1000, 1000));

    for m in [3, 5, 6] {
        let mut q = CollisionQuery::new(values.len(), 10, |i| values[i], Equality).with_failure(0.3);
        let out = count_at_least(&mut q, m, &mut rng);
        println!("at least {m}: {} after {} calls, pairs {:?}", out.reached, out.calls, out.pairs);
    }
}
