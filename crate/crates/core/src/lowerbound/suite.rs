//! Batteries of checks run by `sublab verify-lb` and the acceptance tests.

use std::collections::BTreeSet;

use num_traits::ToPrimitive;
use rand::Rng;
use serde::Serialize;

use super::budget::{error_budget, ErrorBudget};
use super::expectation::{exact_expectation, monte_carlo_expectation, ComponentProfile, McEstimate, Monomial};
use super::identities::{denominator_multiplicity_check, divisibility_check, theta_vanishing_check, verify_alternating_sum};
use super::partition::{chain_coefficient, enumerate_partitions, verify_chain_sums, SetPartition, MAX_PARTITION_SIZE};
use crate::error::{input, Error, Result};
use crate::rng::substream;

/// Monomials on at most four sample positions, so they can be sampled
/// whenever the block size is at least 4.
pub const GRID_MONOMIALS: [&str; 13] = [
    "0-1@0",
    "0-1@0,1-2@1",
    "0-1@0,2-3@0",
    "0-1@0,2-3@1",
    "0-1@0,1-2@1,0-2@2",
    "0-1@0,0-1@1",
    "0-1@0,0-2@1,0-3@2",
    "0-1@0,1-2@1,2-3@0",
    "0-1@0,1-2@1,2-3@0,0-3@1",
    "0-1@0,0-1@1,2-3@0",
    "0-1@0,0-1@1,0-1@2",
    "0-1@0,1-2@1,2-3@0,0-3@1,0-2@2",
    "0-1@0,0-2@0",
];

#[derive(Debug, Clone, Serialize)]
pub struct GridRow {
    pub monomial: String,
    pub m: usize,
    pub l: usize,
    pub exact: String,
    pub exact_value: f64,
    pub denominator: String,
    pub monte_carlo: McEstimate,
    pub within_3_sigma: bool,
}

/// Exact vs sampled `E[P]` on every `(monomial, (M, l))` pair. Cell `i`
/// samples from sub-stream `i` of `seed`.
pub fn expectation_grid(
    monomials: &[Monomial],
    cells: &[(usize, usize)],
    samples: u64,
    seed: u64,
) -> Result<Vec<GridRow>> {
    let mut rows = Vec::new();
    let mut stream = 0u64;
    for mono in monomials {
        let exact = exact_expectation(mono)?;
        for &(m, l) in cells {
            let value = exact.eval_int(m as i64, l as i64)?;
            let exact_value = value.to_f64().unwrap_or(f64::NAN);
            let mut rng = substream(seed, stream);
            stream += 1;
            let mc = monte_carlo_expectation(mono, m, l, samples, &mut rng)?;
            rows.push(GridRow {
                monomial: mono.to_string(),
                m,
                l,
                exact: value.to_string(),
                exact_value,
                denominator: exact.render_denominator(),
                within_3_sigma: mc.within(exact_value, 3.0),
                monte_carlo: mc,
            });
        }
    }
    Ok(rows)
}

#[derive(Debug, Clone, Serialize)]
pub struct CheckSummary {
    pub name: String,
    pub cases: u64,
    pub failures: u64,
    /// first failing case, if any
    pub first_failure: Option<String>,
}

impl CheckSummary {
    fn new(name: &str) -> Self {
        Self {
            name: name.into(),
            cases: 0,
            failures: 0,
            first_failure: None,
        }
    }

    fn record(&mut self, ok: bool, describe: impl FnOnce() -> String) {
        self.cases += 1;
        if !ok {
            self.failures += 1;
            if self.first_failure.is_none() {
                self.first_failure = Some(describe());
            }
        }
    }

    pub fn passed(&self) -> bool {
        self.failures == 0
    }
}

fn check_kmax(k: usize) -> Result<()> {
    if k > MAX_PARTITION_SIZE {
        return Err(Error::Cap {
            what: "k",
            value: k,
            cap: MAX_PARTITION_SIZE,
        });
    }
    Ok(())
}

/// Alternating chain sums over every strict interval, `k = 1..=kmax`.
pub fn chain_sum_suite(kmax: usize) -> Result<CheckSummary> {
    check_kmax(kmax)?;
    let mut s = CheckSummary::new("chain sums vanish on strict intervals");
    for k in 1..=kmax {
        s.record(verify_chain_sums(k)?, || format!("k={k}"));
    }
    Ok(s)
}

/// `c(finest, coarsest) = (-1)^{k-1} (k-1)!`.
pub fn chain_anchor_suite(kmax: usize) -> Result<CheckSummary> {
    check_kmax(kmax)?;
    let mut s = CheckSummary::new("c(finest, coarsest) = (-1)^(k-1) (k-1)!");
    for k in 1..=kmax {
        let c = chain_coefficient(&SetPartition::finest(k), &SetPartition::coarsest(k))?;
        let fact: i64 = (1..k as i64).product();
        let want = if k % 2 == 1 { fact } else { -fact };
        s.record(c == want, || format!("k={k}: {c} != {want}"));
    }
    Ok(s)
}

/// Every `d` in `[0, dmax]^{k x width}` without zero rows, up to
/// reordering rows (the checks below range over all partitions, so row
/// order is immaterial). Component sizes are set to the tree bound
/// `sum_j d_ij + 1`.
fn grid_profiles(k: usize, width: usize, dmax: usize) -> Vec<ComponentProfile> {
    let rows: Vec<Vec<usize>> = (1..(dmax + 1).pow(width as u32))
        .map(|mut code| {
            (0..width)
                .map(|_| {
                    let x = code % (dmax + 1);
                    code /= dmax + 1;
                    x
                })
                .collect()
        })
        .collect();
    let mut out = Vec::new();
    let mut pick = vec![0usize; k];
    loop {
        let d: Vec<Vec<usize>> = pick.iter().map(|&r| rows[r].clone()).collect();
        let sizes = d.iter().map(|r| r.iter().sum::<usize>() + 1).collect();
        out.push(ComponentProfile::from_counts(sizes, d).expect("rectangular"));
        // next non-decreasing index sequence
        let mut i = k;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if pick[i] + 1 < rows.len() {
                pick[i] += 1;
                for j in i + 1..k {
                    pick[j] = pick[i];
                }
                break;
            }
        }
    }
}

/// Divisibility of `f'_L` and vanishing of `theta_{L,i}` over all profiles
/// with `k <= kmax` components, `width` matchings and entries `<= dmax`,
/// and all partitions `L`.
pub fn divisibility_grid(kmax: usize, width: usize, dmax: usize) -> Result<(CheckSummary, CheckSummary)> {
    check_kmax(kmax)?;
    let mut div = CheckSummary::new("f'_L numerator divisible by l^(k-|L|)");
    let mut th = CheckSummary::new("theta_{L,i} = 0 for i < k-|L|");
    for k in 1..=kmax {
        let parts = enumerate_partitions(k)?;
        for p in grid_profiles(k, width, dmax) {
            for part in &parts {
                let c = divisibility_check(&p, part)?;
                div.record(c.holds, || format!("d={:?} L={part}: {c:?}", p.d));
                for i in 0..k - part.n_blocks() {
                    let ok = theta_vanishing_check(&p, part, i)?;
                    th.record(ok, || format!("d={:?} L={part} i={i}", p.d));
                }
            }
        }
    }
    Ok((div, th))
}

/// Multisets `alpha` (each `>= 2`) with `sum (alpha - 1) <= budget`, in a
/// fixed order.
fn alpha_shapes(budget: usize) -> Vec<Vec<u32>> {
    fn rec(rest: usize, max_part: usize, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        out.push(cur.clone());
        for p in (1..=max_part.min(rest)).rev() {
            cur.push(p as u32 + 1);
            rec(rest - p, p, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(budget, budget, &mut Vec::new(), &mut out);
    out
}

/// For each `k <= kmax`, each non-finest `L` and each admissible `alpha`
/// (with and without an extra `alpha = 1` factor), `matrices` random
/// `k x 3` matrices with entries in `0..=3`.
pub fn alternating_sum_suite(kmax: usize, matrices: usize, seed: u64) -> Result<CheckSummary> {
    check_kmax(kmax)?;
    let mut s = CheckSummary::new("alternating sums vanish");
    let mut rng = substream(seed, 0);
    for k in 1..=kmax {
        for part in enumerate_partitions(k)? {
            if part.n_blocks() == k {
                continue;
            }
            for base in alpha_shapes(k - part.n_blocks() - 1) {
                for extra in [false, true] {
                    let mut alphas = base.clone();
                    if extra {
                        alphas.push(1);
                    }
                    for _ in 0..matrices {
                        let d: Vec<Vec<usize>> = (0..k)
                            .map(|_| (0..3).map(|_| rng.gen_range(0..=3)).collect())
                            .collect();
                        let ok = verify_alternating_sum(&d, &part, &alphas)?;
                        s.record(ok, || format!("k={k} L={part} alpha={alphas:?} d={d:?}"));
                    }
                }
            }
        }
    }
    Ok(s)
}

/// Random monomial with exactly `degree` distinct terms on vertices
/// `0..degree+2` and matching indices `0..4`.
pub fn random_monomial(degree: usize, rng: &mut impl Rng) -> Monomial {
    let span = degree as u32 + 2;
    let mut terms = BTreeSet::new();
    while terms.len() < degree {
        let u = rng.gen_range(0..span);
        let v = rng.gen_range(0..span);
        if u != v {
            terms.insert((u.min(v), u.max(v), rng.gen_range(0..4)));
        }
    }
    let terms: Vec<_> = terms.into_iter().collect();
    Monomial::new(&terms).expect("no self-loops")
}

/// Denominator shape for `per_degree` random monomials of each degree,
/// with `T = degree / 2`.
pub fn denominator_suite(degrees: &[usize], per_degree: usize, seed: u64) -> Result<CheckSummary> {
    let mut s = CheckSummary::new("denominator multiplicities and degree");
    for (i, &deg) in degrees.iter().enumerate() {
        if deg == 0 || deg > MAX_PARTITION_SIZE {
            return input(format!("degree {deg} outside 1..={MAX_PARTITION_SIZE}"));
        }
        let mut rng = substream(seed, i as u64);
        for _ in 0..per_degree {
            let m = random_monomial(deg, &mut rng);
            let check = denominator_multiplicity_check(std::slice::from_ref(&m), deg.div_ceil(2))?;
            s.record(check.holds, || format!("{m}: {check:?}"));
        }
    }
    Ok(s)
}

#[derive(Debug, Clone, Serialize)]
pub struct LabReport {
    pub kmax: usize,
    pub samples: u64,
    pub seed: u64,
    pub checks: Vec<CheckSummary>,
    pub expectations: Vec<GridRow>,
    pub budget: ErrorBudget,
    pub all_passed: bool,
}

/// The full battery at the given size. `kmax` bounds the partition sizes
/// (at most 8); the exhaustive chain-sum check stops at 6 and the
/// divisibility grid at 4 since their cost grows with Bell(k)^3.
pub fn run_lab(kmax: usize, samples: u64, seed: u64, cells: &[(usize, usize)]) -> Result<LabReport> {
    check_kmax(kmax)?;
    let mut checks = vec![chain_sum_suite(kmax.min(6))?, chain_anchor_suite(kmax)?];
    let (div, th) = divisibility_grid(kmax.min(4), 2, 3)?;
    checks.push(div);
    checks.push(th);
    checks.push(alternating_sum_suite(kmax.min(5), 20, seed)?);
    let degrees: Vec<usize> = [2, 4, 6, 8].into_iter().filter(|&d| d <= kmax.max(2)).collect();
    checks.push(denominator_suite(&degrees, 100, seed)?);
    let monomials = GRID_MONOMIALS
        .iter()
        .map(|s| Monomial::parse(s))
        .collect::<Result<Vec<_>>>()?;
    let expectations = expectation_grid(&monomials, cells, samples, seed)?;
    let budget = error_budget(10_000, 10, 1, 100.0, 1.0 + 10_000f64.powf(-0.1), 10)?;
    let all_passed = checks.iter().all(CheckSummary::passed) && expectations.iter().all(|r| r.within_3_sigma);
    Ok(LabReport {
        kmax,
        samples,
        seed,
        checks,
        expectations,
        budget,
        all_passed,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn alpha_shapes_small() {
        assert_eq!(alpha_shapes(0), vec![Vec::<u32>::new()]);
        assert_eq!(alpha_shapes(2), vec![vec![], vec![3], vec![2], vec![2, 2]]);
    }

    #[test]
    fn grid_profiles_count_multisets() {
        // 15 nonzero rows, multisets of size 2: C(16, 2)
        assert_eq!(grid_profiles(2, 2, 3).len(), 120);
        assert_eq!(grid_profiles(1, 1, 3).len(), 3);
    }

    #[test]
    fn small_lab_passes() {
        let r = run_lab(3, 2000, 5, &[(12, 2)]).unwrap();
        for c in &r.checks {
            assert!(c.passed(), "{c:?}");
        }
        assert!(run_lab(9, 10, 1, &[(12, 2)]).is_err());
    }
}
