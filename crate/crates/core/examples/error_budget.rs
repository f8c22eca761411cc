//! High-precision error budget of the degree argument.

use sublinear_lab::lowerbound::{error_budget, error_budget_with_exponent};

fn main() -> sublinear_lab::Result<()> {
    let n = 10_000u64;
    let b = error_budget(n, 10, 1, 100.0, 1.0 + (n as f64).powf(-0.1), 10)?;
    println!("D = {}", b.degree_cap);
    println!("exp(-4T^2 l/N)          = {}", b.first_step);
    println!("((aN + delta^1.5)/aN)^D = {}", b.second_step);
    println!("failure term            = {}", b.failure_term);

    for n in [1_000_000u64, 100_000_000] {
        let b = error_budget_with_exponent(n, 20, 2, 50.0, 1.01, 4, 0.1)?;
        println!("N = {n}: {} / {} / {}", b.first_step, b.second_step, b.failure_term);
    }
    Ok(())
}
