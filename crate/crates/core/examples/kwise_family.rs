//! k-wise independent bits and symbols from a short seed.

use sublinear_lab::kwise::{verify_kwise_exhaustive, KWiseFamily, Seed};
use sublinear_lab::rng::substream;

fn main() -> sublinear_lab::Result<()> {
    let (n, k) = (1u64 << 12, 4);
    let seed = Seed::random(KWiseFamily::seed_len(n, k), &mut substream(7, 0));
    let fam = KWiseFamily::build(n, k, &seed)?;
    println!("GF(2^{}), seed {} bits: {}", fam.field_width(), seed.len(), seed.to_hex());

    let bits: String = (0..64).map(|j| if fam.eval_bit(j).unwrap() { '1' } else { '0' }).collect();
    println!("first bits: {bits}");
    let dice: Vec<u64> = (0..16).map(|j| fam.eval_symbol(j, 6).unwrap()).collect();
    println!("symbols over [0, 6): {dice:?}");

    for (n, k) in [(7, 3), (8, 2)] {
        println!("exhaustive ({n}, {k}): {}", verify_kwise_exhaustive(n, k, k)?);
    }
    Ok(())
}
