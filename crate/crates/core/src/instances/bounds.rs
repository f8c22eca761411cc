//! Closed-form bounds on the sampling process and the expansion argument.

use crate::error::{input, precondition, Error, Result};
use serde::Serialize;

/// Largest monomial degree for [`coefficient_bound_check`].
pub const COEFFICIENT_DEGREE_CAP: usize = 20;

/// Whether `l <= N^(1/4)`, the regime in which the failure bound is proved.
pub fn chernoff_precondition_holds(n: usize, l: usize) -> bool {
    (l as u128).pow(4) <= n as u128
}

/// `l · exp(-eps^2 (N/l) / 3)` with `eps = N^(-c_exp)`: a union bound over
/// blocks of the Chernoff tail for one block receiving more than
/// `(1 + eps) N/l` draws, for a host of size `M = (1 + eps) N`.
///
/// The formula is evaluated for any `1 <= l <= N`; whether `l` is in the
/// proved regime is reported separately by [`chernoff_precondition_holds`].
pub fn chernoff_failure_bound(n: usize, l: usize, c_exp: f64) -> Result<f64> {
    if n == 0 || l == 0 || l > n {
        return input(format!("need 1 <= l <= N, got N = {n}, l = {l}"));
    }
    if !(c_exp > 0.0) || !c_exp.is_finite() {
        return input(format!("exponent {c_exp} must be positive"));
    }
    let nf = n as f64;
    let eps = nf.powf(-c_exp);
    Ok(l as f64 * (-eps * eps * (nf / l as f64) / 3.0).exp())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CoefficientCheck {
    pub coefficient: f64,
    pub bound: f64,
    pub holds: bool,
}

/// Coefficient of `x_1 ··· x_k` in the multilinear extension of `f`
/// restricted to `k` variables, by inclusion–exclusion over the `2^k`
/// indicator inputs, and the check `|coefficient| <= 2^k`.
pub fn coefficient_bound_check(f: impl Fn(&[bool]) -> f64, k: usize) -> Result<CoefficientCheck> {
    if k > COEFFICIENT_DEGREE_CAP {
        return Err(Error::Cap {
            what: "monomial degree",
            value: k,
            cap: COEFFICIENT_DEGREE_CAP,
        });
    }
    let mut x = vec![false; k];
    let mut coefficient = 0.0;
    for mask in 0u32..(1 << k) {
        for (i, xi) in x.iter_mut().enumerate() {
            *xi = mask >> i & 1 == 1;
        }
        let value = f(&x);
        if !(0.0..=1.0).contains(&value) {
            return precondition(format!("evaluator returned {value}, outside [0, 1]"));
        }
        let sign = if (k as u32 - mask.count_ones()).is_multiple_of(2) { 1.0 } else { -1.0 };
        coefficient += sign * value;
    }
    let bound = (1u64 << k) as f64;
    Ok(CoefficientCheck {
        coefficient,
        bound,
        holds: coefficient.abs() <= bound,
    })
}

/// `min(1, ((M-N)/N + (1+alpha) i / N)^(c i / 2))`, a bound on the
/// probability that a fixed set of `i` sampled vertices has all its
/// neighbors inside itself plus a fixed set of `alpha·i` others. The first
/// term is `N^(-a)` for a host of size `M = (1 + N^(-a)) N`.
pub fn neighbor_event_bound(m: usize, n: usize, i: usize, alpha: f64, c: usize) -> Result<f64> {
    if n == 0 || m < n {
        return input(format!("need M >= N >= 1, got M = {m}, N = {n}"));
    }
    if i == 0 || c == 0 {
        return input("i and c must be at least 1");
    }
    if !(alpha >= 0.0) || (1.0 + alpha) * i as f64 > m as f64 {
        return input(format!("need alpha >= 0 and (1 + alpha) i <= M, got alpha = {alpha}, i = {i}"));
    }
    let nf = n as f64;
    let base = (m - n) as f64 / nf + (1.0 + alpha) * i as f64 / nf;
    if base >= 1.0 {
        return Ok(1.0);
    }
    Ok(base.powf(c as f64 * i as f64 / 2.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instances::{sample_pml, PmlParams};
    use crate::rng::substream;

    #[test]
    fn chernoff_examples() {
        let b = chernoff_failure_bound(10_000, 10, 0.1).unwrap();
        let eps2 = 10f64.powf(-0.8);
        assert!((b - 10.0 * (-eps2 * 1000.0 / 3.0).exp()).abs() < 1e-30);
        assert!((eps2 * 1000.0 / 3.0 - 52.83).abs() < 0.01);
        let b1 = chernoff_failure_bound(100, 1, 0.1).unwrap();
        assert!((b1 - (-(100f64.powf(-0.2)) * 100.0 / 3.0).exp()).abs() < 1e-15);
        assert!(chernoff_precondition_holds(10_000, 10));
        assert!(!chernoff_precondition_holds(200, 4));
        assert!(chernoff_failure_bound(10, 11, 0.1).is_err());
        assert!(chernoff_failure_bound(10, 1, 0.0).is_err());
    }

    #[test]
    fn coefficient_examples() {
        for k in 1..=6 {
            let c = coefficient_bound_check(|_| 1.0, k).unwrap();
            assert_eq!(c.coefficient, 0.0);
            let c = coefficient_bound_check(|x| x.iter().all(|&b| b) as u8 as f64, k).unwrap();
            assert_eq!(c.coefficient, 1.0);
            assert!(c.holds);
        }
        // XOR of three bits is 4 x1x2x3 + lower-order terms
        let c = coefficient_bound_check(|x| (x.iter().filter(|&&b| b).count() % 2) as f64, 3).unwrap();
        assert_eq!(c.coefficient, 4.0);
        assert!(c.holds && c.bound == 8.0);
        assert!(coefficient_bound_check(|_| 2.0, 2).is_err());
        assert!(coefficient_bound_check(|_| 0.5, 21).is_err());
    }

    #[test]
    fn extreme_coefficient_reaches_half_bound() {
        // f = 1 on even-weight inputs: every term contributes +1
        let c = coefficient_bound_check(|x| (x.iter().filter(|&&b| b).count() % 2 == 0) as u8 as f64, 5).unwrap();
        assert_eq!(c.coefficient.abs(), 16.0);
    }

    #[test]
    fn neighbor_examples() {
        assert_eq!(neighbor_event_bound(20, 10, 5, 1.0, 4).unwrap(), 1.0);
        let b = neighbor_event_bound(100, 100, 3, 0.5, 4).unwrap();
        assert!((b - (4.5f64 / 100.0).powf(6.0)).abs() < 1e-18);
        assert!(neighbor_event_bound(10, 10, 8, 0.5, 4).is_err());
        assert!(neighbor_event_bound(9, 10, 1, 0.5, 4).is_err());
    }

    #[test]
    fn isolated_vertex_rate_below_bound() {
        // E_{1,0}: sampled vertex 0 has no neighbor in the sample
        let p = PmlParams::new(18, 20, 1, 4).unwrap();
        let bound = neighbor_event_bound(20, 18, 1, 0.0, 4).unwrap();
        let trials = 100_000;
        let mut rng = substream(8, 0);
        let mut hits = 0;
        for _ in 0..trials {
            let (_, s) = sample_pml(&p, &mut rng).unwrap();
            hits += (s.induced.unwrap().degree(0) == 0) as u32;
        }
        let rate = hits as f64 / trials as f64;
        assert!(rate <= bound, "rate {rate} bound {bound}");
        // all four partners must land on the two unsampled vertices
        let exact_order = (2.0f64 / 19.0).powi(4);
        assert!(rate < 10.0 * exact_order + 1e-3);
    }
}
