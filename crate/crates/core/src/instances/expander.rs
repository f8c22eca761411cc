use super::{sample_pml, PmlParams};
use crate::error::Result;
use crate::graph::exact::vertex_expansion_exact;
use crate::graph::BoundedDegreeGraph;
use nalgebra::{DMatrix, SymmetricEigen};
use rand::Rng;
use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ExpansionMode {
    /// Exact vertex expansion by subset enumeration (small N only).
    Exact,
    /// Spectral lower bound, see [`spectral_expansion_certificate`].
    Spectral,
}

/// A lower bound on vertex expansion: `lambda_2(L) / (2d)`.
///
/// For `|U| <= N/2` the edge boundary is at least `lambda_2 |U| |U^c| / N >=
/// lambda_2 |U| / 2`, and each outside vertex absorbs at most `d` boundary
/// edges. The eigenvalue is computed in floating point and shaded down by
/// `1e-9 · N` before use.
pub fn spectral_expansion_certificate(g: &BoundedDegreeGraph) -> f64 {
    let n = g.n_vertices();
    if n < 2 || g.degree_bound() == 0 {
        return 0.0;
    }
    let mut lap = DMatrix::<f64>::zeros(n, n);
    for v in 0..n {
        let mut nb: Vec<u32> = g.neighbors(v).to_vec();
        nb.sort_unstable();
        nb.dedup();
        lap[(v, v)] = nb.len() as f64;
        for u in nb {
            lap[(v, u as usize)] = -1.0;
        }
    }
    let mut eig = SymmetricEigen::new(lap).eigenvalues.as_slice().to_vec();
    eig.sort_by(f64::total_cmp);
    let lambda2 = (eig[1] - 1e-9 * n as f64).max(0.0);
    lambda2 / (2.0 * g.degree_bound() as f64)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ExpanderRate {
    pub trials: usize,
    pub failed_samples: usize,
    pub expanders: usize,
    /// `expanders / (trials - failed_samples)`, 0 when every sample failed.
    pub rate: f64,
}

/// Fraction of non-failed samples from `P_{M,l}` certified to be
/// `alpha`-expanders.
pub fn empirical_expander_rate(
    params: &PmlParams,
    alpha: f64,
    trials: usize,
    mode: ExpansionMode,
    rng: &mut impl Rng,
) -> Result<ExpanderRate> {
    let mut out = ExpanderRate {
        trials,
        failed_samples: 0,
        expanders: 0,
        rate: 0.0,
    };
    for _ in 0..trials {
        let (_, s) = sample_pml(params, rng)?;
        let Some(g) = s.induced else {
            out.failed_samples += 1;
            continue;
        };
        let expansion = match mode {
            ExpansionMode::Exact => {
                let r = vertex_expansion_exact(&g)?;
                *r.numer() as f64 / *r.denom() as f64
            }
            ExpansionMode::Spectral => spectral_expansion_certificate(&g),
        };
        out.expanders += (expansion >= alpha) as usize;
    }
    let ok = trials - out.failed_samples;
    if ok > 0 {
        out.rate = out.expanders as f64 / ok as f64;
    }
    Ok(out)
}
