//! Error-budget arithmetic for the degree argument, at 40 significant
//! decimal digits.

use std::str::FromStr;

use dashu_float::ops::Abs;
use dashu_float::DBig;
use serde::Serialize;

use super::identities::harmonic_degree_bound;
use crate::error::{input, Result};

const WORK_DIGITS: usize = 40;
/// Digits kept when a value is rendered.
pub const REPORT_DIGITS: usize = 30;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ErrorBudget {
    pub n: u64,
    pub t: u64,
    pub l: u64,
    pub delta: f64,
    pub a: f64,
    pub k: u64,
    /// exponent `c` in `M/N = 1 + N^{-c}`
    pub c_exp: f64,
    /// `D = ceil(2T H(2T))`
    pub degree_cap: u64,
    /// `exp(-4 T^2 l / N)`
    pub first_step: String,
    /// `((aN + delta^{3/2}) / (aN))^D`
    pub second_step: String,
    /// `N^{2k} 2^k exp(-N^{0.75 - 2c} / 3)`
    pub failure_term: String,
}

fn dec(x: f64) -> DBig {
    // shortest round-trip decimal form of the f64
    DBig::from_str(&format!("{x:e}"))
        .expect("finite float")
        .with_precision(WORK_DIGITS)
        .value()
}

fn int(x: u64) -> DBig {
    DBig::from(x).with_precision(WORK_DIGITS).value()
}

/// Positional notation for magnitudes in `[1e-6, 1e6)`, scientific otherwise.
fn render(x: &DBig) -> String {
    let x = x.clone().with_precision(REPORT_DIGITS).value();
    let mag = x.clone().abs();
    if x == DBig::ZERO || (mag >= dec(1e-6) && mag < dec(1e6)) {
        x.to_string()
    } else {
        format!("{x:e}")
    }
}

/// Budget with `c` read off the host ratio, `a = 1 + N^{-c}`; needs `a > 1`.
pub fn error_budget(n: u64, t: u64, l: u64, delta: f64, a: f64, k: u64) -> Result<ErrorBudget> {
    if !(a > 1.0) {
        return input("a must exceed 1 to determine the exponent c");
    }
    let c_exp = -(a - 1.0).ln() / (n as f64).ln();
    error_budget_with_exponent(n, t, l, delta, a, k, c_exp)
}

/// Budget with an explicit exponent `c`.
pub fn error_budget_with_exponent(
    n: u64,
    t: u64,
    l: u64,
    delta: f64,
    a: f64,
    k: u64,
    c_exp: f64,
) -> Result<ErrorBudget> {
    if n < 2 || l == 0 {
        return input("N must be at least 2 and l at least 1");
    }
    if !(a > 0.0) || !a.is_finite() || !(delta >= 0.0) || !delta.is_finite() || !c_exp.is_finite() {
        return input("a must be positive, delta non-negative, c finite");
    }
    let degree_cap = harmonic_degree_bound(t as usize).ceil() as u64;
    let nn = int(n);

    let first_exponent = -(int(4) * int(t) * int(t) * int(l)) / nn.clone();
    let first_step = first_exponent.exp();

    let an = dec(a) * nn.clone();
    let delta_pow = if delta == 0.0 {
        int(0)
    } else {
        dec(delta).powf(&dec(1.5))
    };
    let ratio = (an.clone() + delta_pow) / an;
    let second_step = ratio.powi(degree_cap.into());

    let decay = -(nn.clone().powf(&(dec(0.75) - dec(2.0) * dec(c_exp)))) / int(3);
    let failure_term = nn.powi((2 * k).into()) * int(2).powi(k.into()) * decay.exp();

    Ok(ErrorBudget {
        n,
        t,
        l,
        delta,
        a,
        k,
        c_exp,
        degree_cap,
        first_step: render(&first_step),
        second_step: render(&second_step),
        failure_term: render(&failure_term),
    })
}
