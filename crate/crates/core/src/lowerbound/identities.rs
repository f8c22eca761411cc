//! The algebraic identities behind the rational form of `E[P]`, checked
//! exactly on concrete inputs.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::binomial;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;

use super::expectation::{exact_expectation, expectation_of_profile, f_prime_l, f_prime_l_reduced, ComponentProfile, Monomial};
use super::partition::{chain_coefficient, enumerate_partitions, SetPartition};
use crate::error::{input, Result};

/// Largest exponent accepted by [`faulhaber_odd`].
pub const MAX_FAULHABER_EXPONENT: usize = 8;

#[derive(Debug, Clone, Serialize)]
pub struct DivisibilityCheck {
    /// smallest power of `l` in the numerator of `f'_L` (R' form)
    pub reduced_l_power: Option<u32>,
    pub reduced_required: usize,
    /// same, for the R form
    pub full_l_power: Option<u32>,
    pub full_required: usize,
    pub holds: bool,
}

/// The numerator of `f'_L` is divisible by `l^{k-|L|}` when every `R_d` is
/// replaced by `R_d / l^d`, and by `l^{sum v - |L|}` in the original form.
pub fn divisibility_check(profile: &ComponentProfile, part: &SetPartition) -> Result<DivisibilityCheck> {
    let k = profile.k();
    let blocks = part.n_blocks();
    let reduced = f_prime_l_reduced(profile, part)?;
    let full = f_prime_l(profile, part)?;
    let reduced_required = k - blocks;
    let full_required = profile.total_vertices().saturating_sub(blocks);
    let ok = |p: Option<u32>, need: usize| p.is_none_or(|p| p as usize >= need);
    Ok(DivisibilityCheck {
        reduced_l_power: reduced.min_l_power(),
        reduced_required,
        full_l_power: full.min_l_power(),
        full_required,
        holds: ok(reduced.min_l_power(), reduced_required) && ok(full.min_l_power(), full_required),
    })
}

/// `e_i` of a multiset given as `value -> multiplicity`.
fn elementary_symmetric(multiset: &BTreeMap<u32, u32>, i: usize) -> BigInt {
    let mut e = vec![BigInt::zero(); i + 1];
    e[0] = BigInt::one();
    for (&x, &mult) in multiset {
        let x = BigInt::from(x);
        for _ in 0..mult {
            for j in (1..=i).rev() {
                let add = &e[j - 1] * &x;
                e[j] += add;
            }
        }
    }
    e.swap_remove(i)
}

/// `B(L)`: least common multiple (max multiplicity) of `K(L')` over
/// `L' <= L`.
pub fn common_multiset(profile: &ComponentProfile, part: &SetPartition) -> Result<BTreeMap<u32, u32>> {
    let mut b = BTreeMap::new();
    for lower in enumerate_partitions(profile.k())? {
        if lower.refines(part) {
            for (o, m) in profile.odd_multiset(&lower) {
                let e = b.entry(o).or_insert(0);
                *e = (*e).max(m);
            }
        }
    }
    Ok(b)
}

/// `theta_{L,i} = sum_{L' <= L} c_{L',L} e_i(B(L) - K(L'))`.
pub fn theta(profile: &ComponentProfile, part: &SetPartition, i: usize) -> Result<BigInt> {
    let b = common_multiset(profile, part)?;
    let mut total = BigInt::zero();
    for lower in enumerate_partitions(profile.k())? {
        let c = chain_coefficient(&lower, part)?;
        if c == 0 {
            continue;
        }
        let mut rest = b.clone();
        for (o, m) in profile.odd_multiset(&lower) {
            *rest.get_mut(&o).expect("B(L) covers K(L')") -= m;
        }
        total += BigInt::from(c) * elementary_symmetric(&rest, i);
    }
    Ok(total)
}

/// `theta_{L,i} = 0`, for `0 <= i <= k - |L| - 1`.
pub fn theta_vanishing_check(profile: &ComponentProfile, part: &SetPartition, i: usize) -> Result<bool> {
    if part.ground_size() != profile.k() {
        return input("partition size does not match the number of components");
    }
    if i + part.n_blocks() >= profile.k() {
        return input(format!(
            "index {i} outside 0..={} (k = {}, |L| = {})",
            profile.k() as i64 - part.n_blocks() as i64 - 1,
            profile.k(),
            part.n_blocks()
        ));
    }
    Ok(theta(profile, part, i)?.is_zero())
}

/// `S_alpha(L') = sum_{S in L'} sum_j (sum_{i in S} d_ij)^alpha`.
fn power_sum(d: &[Vec<usize>], part: &SetPartition, alpha: u32) -> BigInt {
    let width = d.first().map_or(0, Vec::len);
    let mut total = BigInt::zero();
    for block in part.blocks() {
        for j in 0..width {
            let s: usize = block.iter().map(|&i| d[i][j]).sum();
            total += num_traits::pow(BigInt::from(s), alpha as usize);
        }
    }
    total
}

/// `sum_{L' <= L} c_{L',L} prod_j S_{alpha_j}(L')` for a `k x c` matrix `d`.
pub fn alternating_sum(d: &[Vec<usize>], part: &SetPartition, alphas: &[u32]) -> Result<BigInt> {
    let k = d.len();
    if part.ground_size() != k {
        return input("partition size does not match the rows of d");
    }
    let mut total = BigInt::zero();
    for lower in enumerate_partitions(k)? {
        let c = chain_coefficient(&lower, part)?;
        if c == 0 {
            continue;
        }
        let mut prod = BigInt::from(c);
        for &a in alphas {
            prod *= power_sum(d, &lower, a);
        }
        total += prod;
    }
    Ok(total)
}

/// The alternating sum above vanishes when every `alpha_j >= 1` and
/// `sum (alpha_j - 1) <= k - |L| - 1`. Arguments outside that range are
/// rejected rather than evaluated.
pub fn verify_alternating_sum(d: &[Vec<usize>], part: &SetPartition, alphas: &[u32]) -> Result<bool> {
    if alphas.contains(&0) {
        return input("every alpha must be at least 1");
    }
    let excess: i64 = alphas.iter().map(|&a| a as i64 - 1).sum();
    let budget = d.len() as i64 - part.n_blocks() as i64 - 1;
    if excess > budget {
        return input(format!("sum(alpha - 1) = {excess} exceeds k - |L| - 1 = {budget}"));
    }
    Ok(alternating_sum(d, part, alphas)?.is_zero())
}

/// Bernoulli numbers with `B_1 = +1/2`.
fn bernoulli_plus(n: usize) -> Vec<BigRational> {
    let mut b: Vec<BigRational> = Vec::with_capacity(n + 1);
    for m in 0..=n {
        let mut acc = BigRational::one();
        for (k, bk) in b.iter().enumerate() {
            let c = BigRational::from_integer(binomial(BigInt::from(m), BigInt::from(k)));
            acc -= c * bk / BigRational::from_integer(BigInt::from(m - k + 1));
        }
        b.push(acc);
    }
    b
}

/// Coefficients (index = power of `n`) of `sum_{x=1}^n x^a`.
fn power_sum_polynomial(a: usize) -> Vec<BigRational> {
    let b = bernoulli_plus(a);
    let mut out = vec![BigRational::zero(); a + 2];
    let scale = BigRational::new(BigInt::one(), BigInt::from(a + 1));
    for (j, bj) in b.iter().enumerate() {
        let c = BigRational::from_integer(binomial(BigInt::from(a + 1), BigInt::from(j)));
        out[a + 1 - j] += &scale * c * bj;
    }
    out
}

/// `Q_a(s) = 1^a + 3^a + .. + (2s-1)^a`, as coefficients indexed by the
/// power of `s`: the sum over `1..2s` minus `2^a` times the sum over `1..s`.
pub fn faulhaber_odd(a: usize) -> Result<Vec<BigRational>> {
    if a > MAX_FAULHABER_EXPONENT {
        return input(format!("exponent {a} above {MAX_FAULHABER_EXPONENT}"));
    }
    let f = power_sum_polynomial(a);
    let two_a = BigRational::from_integer(num_traits::pow(BigInt::from(2), a));
    Ok(f.iter()
        .enumerate()
        .map(|(p, c)| {
            let two_p = BigRational::from_integer(num_traits::pow(BigInt::from(2), p));
            c * (two_p - &two_a)
        })
        .collect())
}

pub fn eval_poly(coeffs: &[BigRational], s: i64) -> BigRational {
    let x = BigRational::from_integer(s.into());
    coeffs.iter().rev().fold(BigRational::zero(), |acc, c| acc * &x + c)
}

/// `2T * H(2T)`.
pub fn harmonic_degree_bound(t: usize) -> f64 {
    let two_t = 2 * t;
    two_t as f64 * (1..=two_t).map(|k| 1.0 / k as f64).sum::<f64>()
}

#[derive(Debug, Clone, Serialize)]
pub struct DenominatorCheck {
    pub t: usize,
    /// `(2k-1) -> multiplicity` in the common denominator
    pub multiplicities: BTreeMap<u32, u32>,
    pub rendered: String,
    pub denominator_degree: u32,
    pub numerator_degree: u32,
    pub degree_bound: f64,
    pub holds: bool,
}

/// Puts the expectation formulas of `monomials` (each of degree at most
/// `2T`) over their common denominator and checks: only factors
/// `(M - (2k-1) l)` with `k <= 2T`, each at most `2T/k` times, total
/// degree at most `2T H(2T)`, and numerator degree no larger.
pub fn denominator_multiplicity_check(monomials: &[Monomial], t: usize) -> Result<DenominatorCheck> {
    let mut sum = super::rational::BivariateRational::zero();
    for m in monomials {
        if m.degree() > 2 * t {
            return input(format!("monomial of degree {} exceeds 2T = {}", m.degree(), 2 * t));
        }
        // formula-level: an infeasible monomial still contributes its
        // factors, which is the stronger check
        let e = if m.is_feasible() {
            exact_expectation(m)?
        } else {
            expectation_of_profile(&m.profile())?
        };
        sum = sum.add(&e);
    }
    let multiplicities = sum.denominator().clone();
    let degree_bound = harmonic_degree_bound(t);
    let mult_ok = multiplicities.iter().all(|(&o, &mult)| {
        let k = (o as usize).div_ceil(2);
        k <= 2 * t && mult as usize * k <= 2 * t
    });
    let den = sum.denominator_degree();
    let num = sum.numerator_degree();
    Ok(DenominatorCheck {
        t,
        rendered: sum.render_denominator(),
        multiplicities,
        denominator_degree: den,
        numerator_degree: num,
        degree_bound,
        holds: mult_ok && den as f64 <= degree_bound + 1e-9 && num <= den,
    })
}
