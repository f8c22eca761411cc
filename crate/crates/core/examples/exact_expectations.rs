//! Exact E[P] of monomials over matching-union hosts, checked by sampling.

use sublinear_lab::lowerbound::{exact_expectation, monte_carlo_expectation, Monomial};
use sublinear_lab::rng::substream;

fn main() -> sublinear_lab::Result<()> {
    // `u-v@j`: sample positions u and v matched in matching j
    for src in ["0-1@0", "0-1@0,1-2@1", "0-1@0,2-3@0", "0-1@0,1-2@1,2-3@0,0-3@1"] {
        let mono = Monomial::parse(src)?;
        let e = exact_expectation(&mono)?;
        println!("{mono}: {e}");
        for (m, l) in [(12, 2), (12, 3)] {
            let mc = monte_carlo_expectation(&mono, m, l, 200_000, &mut substream(9, m as u64 + l as u64))?;
            println!(
                "  M={m} l={l}: exact {} = {:.6}, sampled {:.6} ± {:.6}",
                e.eval_int(m as i64, l as i64)?,
                e.eval_f64(m as i64, l as i64)?,
                mc.mean,
                mc.std_error
            );
        }
    }
    Ok(())
}
