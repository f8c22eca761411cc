//! Exact verification of the rational form of monomial expectations under
//! the matching-union distribution `P_{M,l}`.
//!
//! Everything here is exact (arbitrary-precision rationals) except the
//! sampling cross-check and the final rendering of the error budget.

pub mod budget;
pub mod expectation;
pub mod identities;
pub mod partition;
pub mod rational;
pub mod suite;

pub use budget::{error_budget, error_budget_with_exponent, ErrorBudget};
pub use expectation::{
    exact_expectation, expectation_value, f_l, f_prime_l, monte_carlo_expectation, r_factor, ComponentProfile,
    McEstimate, Monomial,
};
pub use identities::{
    denominator_multiplicity_check, divisibility_check, faulhaber_odd, alternating_sum, theta, theta_vanishing_check,
    verify_alternating_sum, DenominatorCheck, DivisibilityCheck,
};
pub use partition::{chain_coefficient, enumerate_partitions, verify_chain_sums, SetPartition};
pub use rational::BivariateRational;
