//! Partition-lattice and divisibility identities behind the expectation formula.

use sublinear_lab::lowerbound::identities::{divisibility_check, theta_vanishing_check};
use sublinear_lab::lowerbound::{
    chain_coefficient, denominator_multiplicity_check, enumerate_partitions, faulhaber_odd, verify_chain_sums,
    ComponentProfile, Monomial, SetPartition,
};

fn main() -> sublinear_lab::Result<()> {
    for k in 1..=5 {
        let parts = enumerate_partitions(k)?;
        let c = chain_coefficient(&SetPartition::finest(k), &SetPartition::coarsest(k))?;
        println!("k = {k}: {} partitions, c(finest, coarsest) = {c}, chain sums vanish: {}", parts.len(), verify_chain_sums(k)?);
    }

    let profile = ComponentProfile::from_counts(vec![2, 3, 2], vec![vec![1, 0], vec![1, 1], vec![0, 1]])?;
    for part in enumerate_partitions(3)? {
        let d = divisibility_check(&profile, &part)?;
        let theta_ok = (0..3 - part.n_blocks()).all(|i| theta_vanishing_check(&profile, &part, i).unwrap());
        println!("{part}: l-divisibility {} (needs l^{}), theta vanishes: {theta_ok}", d.holds, d.reduced_required);
    }

    println!("sum s^3 = {:?}", faulhaber_odd(3)?.iter().map(ToString::to_string).collect::<Vec<_>>());

    let monos: Vec<Monomial> = ["0-1@0,1-2@1", "0-1@0,2-3@1", "0-1@0,1-2@0"]
        .iter()
        .map(|s| Monomial::parse(s))
        .collect::<Result<_, _>>()?;
    let check = denominator_multiplicity_check(&monos, 1)?;
    println!("common denominator {} (degree {}, cap {:.2}): {}", check.rendered, check.denominator_degree, check.degree_bound, check.holds);
    Ok(())
}
