//! Sampling from P_{M,l} and the block-selection failure bound.

use sublinear_lab::graph::exact::component_sizes;
use sublinear_lab::instances::{
    chernoff_failure_bound, empirical_expander_rate, sample_pml, select_vertices, ExpansionMode, PmlParams,
};
use sublinear_lab::rng::substream;

fn main() -> sublinear_lab::Result<()> {
    let mut rng = substream(3, 0);
    for l in [1, 2, 4] {
        let p = PmlParams::with_default_host(200, l, 6)?;
        let (_, s) = sample_pml(&p, &mut rng)?;
        let comps = s.induced.as_ref().map(component_sizes).map(|c| c.len());
        println!("M = {}, l = {l}: block counts {:?}, components {comps:?}", p.m, s.block_counts);
    }

    let p = PmlParams::with_default_host(200, 4, 1)?;
    let trials = 20_000;
    let failed = (0..trials).filter(|_| select_vertices(&p, &mut rng).unwrap().failed).count();
    println!(
        "selection failures {failed}/{trials}, bound {:.4}",
        chernoff_failure_bound(200, 4, 0.1)?
    );

    for l in [1, 2] {
        let p = PmlParams::with_default_host(16, l, 6)?;
        let rate = empirical_expander_rate(&p, 0.25, 20, ExpansionMode::Exact, &mut rng)?;
        println!("0.25-expanders at N = 16, l = {l}: {}/{}", rate.expanders, rate.trials - rate.failed_samples);
    }
    Ok(())
}
