//! Parameter derivation for the testers.
//!
//! All logarithms are base 2. The polynomial factors the analyses leave open
//! are fixed defaults; every field can be overridden after derivation.

use crate::error::{input, Result};
use crate::kwise::ceil_log2;
use serde::Serialize;

/// Default multiplier in `k = factor · L · ceil(log2(2d))`: the variance
/// argument involves at most four walks at a time.
pub const DEFAULT_K_FACTOR: usize = 4;

/// Default number of collision-counting attempts per expansion repetition.
pub const DEFAULT_OUTER_RETRIES: u32 = 4;

/// `ceil(x)` that forgives floating-point noise just above an integer.
fn ceil_tolerant(x: f64) -> u64 {
    let r = x.round();
    if (x - r).abs() <= 1e-9 * x.abs().max(1.0) {
        r as u64
    } else {
        x.ceil() as u64
    }
}

fn independence(k_factor: usize, walk_length: usize, degree_bound: usize) -> usize {
    k_factor * walk_length * ceil_log2(2 * degree_bound as u64).max(1) as usize
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BipartiteParams {
    pub n_vertices: usize,
    pub degree_bound: usize,
    pub epsilon: f64,
    /// `T`
    pub repetitions: usize,
    /// `K`
    pub walks: usize,
    /// `L`
    pub walk_length: usize,
    pub k_factor: usize,
    /// Independence in coin bits, `k_factor · L · ceil(log2 2d)`.
    pub k_indep: usize,
}

impl BipartiteParams {
    /// `T = ceil(4/eps)`, `K = ceil(sqrt(N) · ceil(log2 N)^2 / eps)`,
    /// `L = ceil((ceil(log2 N) / eps)^2)`.
    pub fn derive(n: usize, epsilon: f64, degree_bound: usize) -> Result<Self> {
        if n < 2 {
            return input("bipartiteness parameters need N >= 2");
        }
        if !(epsilon > 0.0 && epsilon < 1.0) {
            return input(format!("epsilon = {epsilon} must lie in (0, 1)"));
        }
        if degree_bound == 0 {
            return input("degree bound must be at least 1");
        }
        let lg = ceil_log2(n as u64) as f64;
        let walk_length = ceil_tolerant((lg / epsilon).powi(2)) as usize;
        Ok(Self {
            n_vertices: n,
            degree_bound,
            epsilon,
            repetitions: ceil_tolerant(4.0 / epsilon) as usize,
            walks: ceil_tolerant((n as f64).sqrt() * lg * lg / epsilon) as usize,
            walk_length,
            k_factor: DEFAULT_K_FACTOR,
            k_indep: independence(DEFAULT_K_FACTOR, walk_length, degree_bound),
        })
    }

    pub fn with_repetitions(mut self, t: usize) -> Self {
        self.repetitions = t;
        self
    }

    pub fn with_walks(mut self, k: usize) -> Self {
        self.walks = k;
        self
    }

    pub fn with_walk_length(mut self, l: usize) -> Self {
        self.walk_length = l;
        self.k_indep = independence(self.k_factor, l, self.degree_bound);
        self
    }

    pub fn with_k_factor(mut self, f: usize) -> Self {
        self.k_factor = f;
        self.k_indep = independence(f, self.walk_length, self.degree_bound);
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.repetitions == 0 || self.walks == 0 || self.walk_length == 0 {
            return input("T, K and L must all be at least 1");
        }
        if self.k_factor == 0 {
            return input("k factor must be at least 1");
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExpansionParams {
    pub n_vertices: usize,
    pub degree_bound: usize,
    pub epsilon: f64,
    pub alpha: f64,
    pub mu: f64,
    pub repetitions: usize,
    pub walks: usize,
    pub walk_length: usize,
    /// `N^(2 mu) / 2 + N^(1.75 mu) / 128`; irrational in general.
    pub threshold: f64,
    /// Attempts of the collision counter per repetition.
    pub outer_retries: u32,
    pub k_factor: usize,
    pub k_indep: usize,
}

impl ExpansionParams {
    /// `T = ceil(4/eps)`, `K = ceil(N^(1/2 + mu))`,
    /// `L = ceil((16 d^2 / alpha^2) log2 N)`.
    pub fn derive(n: usize, epsilon: f64, alpha: f64, mu: f64, degree_bound: usize) -> Result<Self> {
        if n < 2 {
            return input("expansion parameters need N >= 2");
        }
        if degree_bound < 3 {
            return input(format!("expansion testing needs d >= 3, got {degree_bound}"));
        }
        if !(alpha > 0.0 && alpha < 1.0) {
            return input(format!("alpha = {alpha} must lie in (0, 1)"));
        }
        if !(mu > 0.0 && mu < 0.25) {
            return input(format!("mu = {mu} must lie in (0, 1/4)"));
        }
        if !(epsilon > 0.0 && epsilon < 1.0) {
            return input(format!("epsilon = {epsilon} must lie in (0, 1)"));
        }
        let nf = n as f64;
        let d = degree_bound as f64;
        let walk_length = ceil_tolerant(16.0 * d * d * nf.log2() / (alpha * alpha)) as usize;
        Ok(Self {
            n_vertices: n,
            degree_bound,
            epsilon,
            alpha,
            mu,
            repetitions: ceil_tolerant(4.0 / epsilon) as usize,
            walks: ceil_tolerant(nf.powf(0.5 + mu)) as usize,
            walk_length,
            threshold: collision_threshold(n, mu),
            outer_retries: DEFAULT_OUTER_RETRIES,
            k_factor: DEFAULT_K_FACTOR,
            k_indep: independence(DEFAULT_K_FACTOR, walk_length, degree_bound),
        })
    }

    /// Smallest collision count that exceeds the threshold.
    pub fn reject_count(&self) -> u64 {
        self.threshold.floor() as u64 + 1
    }

    pub fn with_repetitions(mut self, t: usize) -> Self {
        self.repetitions = t;
        self
    }

    pub fn with_walks(mut self, k: usize) -> Self {
        self.walks = k;
        self
    }

    pub fn with_walk_length(mut self, l: usize) -> Self {
        self.walk_length = l;
        self.k_indep = independence(self.k_factor, l, self.degree_bound);
        self
    }

    pub fn with_outer_retries(mut self, t: u32) -> Self {
        self.outer_retries = t;
        self
    }

    pub fn with_k_factor(mut self, f: usize) -> Self {
        self.k_factor = f;
        self.k_indep = independence(f, self.walk_length, self.degree_bound);
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.repetitions == 0 || self.walks == 0 || self.walk_length == 0 || self.outer_retries == 0 {
            return input("T, K, L and t must all be at least 1");
        }
        if self.k_factor == 0 {
            return input("k factor must be at least 1");
        }
        Ok(())
    }
}

/// `N^(2 mu) / 2 + N^(1.75 mu) / 128`.
pub fn collision_threshold(n: usize, mu: f64) -> f64 {
    let nf = n as f64;
    0.5 * nf.powf(2.0 * mu) + nf.powf(1.75 * mu) / 128.0
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bip_examples() {
        let p = BipartiteParams::derive(1024, 0.5, 3).unwrap();
        assert_eq!((p.repetitions, p.walks, p.walk_length), (8, 6400, 400));
        assert_eq!(p.k_indep, 4 * 400 * 3);
        let p = BipartiteParams::derive(1024, 0.999, 3).unwrap();
        assert_eq!(p.repetitions, 5);
        let p = BipartiteParams::derive(1024, 1.0 - 1e-12, 3).unwrap();
        assert_eq!(p.repetitions, 4);
        let p = p.with_walks(17).with_walk_length(9);
        assert_eq!((p.walks, p.walk_length, p.k_indep), (17, 9, 4 * 9 * 3));
        assert!(BipartiteParams::derive(1024, 0.0, 3).is_err());
        assert!(BipartiteParams::derive(1024, 1.0, 3).is_err());
        assert!(BipartiteParams::derive(1, 0.5, 3).is_err());
    }

    #[test]
    fn exp_examples() {
        let p = ExpansionParams::derive(1 << 20, 0.5, 0.5, 0.125, 3).unwrap();
        assert_eq!(p.walks, 5793);
        assert!((p.threshold - (16.0 + 2f64.powf(4.375) / 128.0)).abs() < 1e-12);
        assert!((p.threshold - 16.1621).abs() < 1e-4);
        assert_eq!(p.reject_count(), 17);
        let p = ExpansionParams::derive(1024, 0.5, 0.5, 0.1, 3).unwrap();
        assert_eq!(p.walk_length, 5760);
        assert_eq!(p.outer_retries, 4);
        assert_eq!(p.repetitions, 8);
    }

    #[test]
    fn exp_preconditions() {
        assert!(ExpansionParams::derive(1024, 0.5, 0.5, 0.3, 3).is_err());
        assert!(ExpansionParams::derive(1024, 0.5, 0.5, 0.25, 3).is_err());
        assert!(ExpansionParams::derive(1024, 0.5, 1.0, 0.1, 3).is_err());
        assert!(ExpansionParams::derive(1024, 0.5, 0.5, 0.1, 2).is_err());
        assert!(ExpansionParams::derive(1024, 1.5, 0.5, 0.1, 3).is_err());
    }

    #[test]
    fn ceil_tolerant_snaps_noise_only() {
        assert_eq!(ceil_tolerant(1600.0000000000002), 1600);
        assert_eq!(ceil_tolerant(1600.01), 1601);
        assert_eq!(ceil_tolerant(5792.6), 5793);
    }
}
