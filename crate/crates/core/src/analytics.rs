//! Closed-form first and second moments and the threshold scalars.
//!
//! Everything is evaluated in log space with the effective tightness `p_eff`.
//! Functions taking an explicit `m: f64` accept the unrounded `r n ln d`, so
//! the exact threshold identity `E[X] = 1/2` can be checked alongside the
//! as-generated (rounded) values.

use serde::{Deserialize, Serialize};

use crate::error::{RbError, Result};
use crate::params::{critical_density, omega, threshold_shift, RbParams};

pub const MAX_SUMMATION_N: usize = 10_000;

/// `ln E[X] = n ln d + m ln(1 - p)`.
pub fn log_expected_solution_count(n: usize, d: u32, p_eff: f64, m: f64) -> f64 {
    n as f64 * f64::from(d).ln() + m * (1.0 - p_eff).ln()
}

pub fn expected_solution_count_at(n: usize, d: u32, p_eff: f64, m: f64) -> f64 {
    log_expected_solution_count(n, d, p_eff, m).exp()
}

/// `E[X] = d^n (1 - p)^m` for the generated (integer) `m`.
pub fn expected_solution_count(params: &RbParams) -> f64 {
    expected_solution_count_at(params.n, params.d, params.p_eff, params.m as f64)
}

/// `E[N] = d^n (1 - p)^(m - 1) p`: assignments violating exactly one given
/// constraint.
pub fn expected_near_solutions_at(n: usize, d: u32, p_eff: f64, m: f64) -> f64 {
    (log_expected_solution_count(n, d, p_eff, m - 1.0) + p_eff.ln()).exp()
}

pub fn expected_near_solutions(params: &RbParams) -> f64 {
    expected_near_solutions_at(params.n, params.d, params.p_eff, params.m as f64)
}

fn ln_binomial(n: usize, s: usize) -> f64 {
    libm::lgamma(n as f64 + 1.0) - libm::lgamma(s as f64 + 1.0) - libm::lgamma((n - s) as f64 + 1.0)
}

/// `ln F(S)` with `F(S) = C(n,S) (1 - 1/d)^(n-S) (1/d)^S [1 + p/(1-p) s^k]^m`.
pub fn log_f_term(n: usize, d: u32, p_eff: f64, k: usize, m: f64, s_count: usize) -> f64 {
    let d = f64::from(d);
    let s = s_count as f64 / n as f64;
    ln_binomial(n, s_count) + (n - s_count) as f64 * (1.0 - 1.0 / d).ln() - s_count as f64 * d.ln()
        + m * (p_eff / (1.0 - p_eff) * s.powi(k as i32)).ln_1p()
}

/// Neumaier-compensated sum, largest magnitude first.
pub fn compensated_sum(values: &[f64]) -> f64 {
    let mut sorted = values.to_vec();
    sorted.sort_by(|a, b| b.abs().total_cmp(&a.abs()));
    let (mut sum, mut carry) = (0.0f64, 0.0f64);
    for x in sorted {
        let t = sum + x;
        if sum.abs() >= x.abs() {
            carry += (sum - t) + x;
        } else {
            carry += (x - t) + sum;
        }
        sum = t;
    }
    sum + carry
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MomentReport {
    /// The constraint count the formulas were evaluated at.
    pub m: f64,
    pub ex: f64,
    pub ex2: f64,
    /// `E[X^2] / E[X]^2 = sum_S F(S)`.
    pub ratio: f64,
    pub en: f64,
    pub f_terms: Vec<f64>,
    pub f0: f64,
    pub f_n: f64,
    /// `1 + 1/E[X]`, the value the ratio tends to when only `F(0)` and
    /// `F(n)` contribute.
    pub ratio_bound: f64,
    /// Second-moment lower bound on `Pr(X > 0)`: `E[X]^2 / E[X^2]`.
    pub pr_sat_lower: f64,
    pub log_ex: f64,
    pub log_ratio: f64,
}

impl MomentReport {
    /// `S,s,F(S)` rows with a header line.
    pub fn f_terms_csv(&self) -> String {
        let n = self.f_terms.len() - 1;
        let mut out = String::from("S,s,F\n");
        for (s, f) in self.f_terms.iter().enumerate() {
            out.push_str(&format!("{s},{},{f}\n", s as f64 / n as f64));
        }
        out
    }
}

pub fn second_moment(params: &RbParams) -> Result<MomentReport> {
    second_moment_at(params, params.m as f64)
}

pub fn second_moment_at(params: &RbParams, m: f64) -> Result<MomentReport> {
    let (n, d, p, k) = (params.n, params.d, params.p_eff, params.k);
    if n > MAX_SUMMATION_N {
        return Err(RbError::SummationGuard {
            n,
            limit: MAX_SUMMATION_N,
        });
    }
    let log_f: Vec<f64> = (0..=n).map(|s| log_f_term(n, d, p, k, m, s)).collect();
    let peak = log_f.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let scaled: Vec<f64> = log_f.iter().map(|&l| (l - peak).exp()).collect();
    let log_ratio = peak + compensated_sum(&scaled).ln();

    let log_ex = log_expected_solution_count(n, d, p, m);
    let ex = log_ex.exp();
    Ok(MomentReport {
        m,
        ex,
        ex2: (2.0 * log_ex + log_ratio).exp(),
        ratio: log_ratio.exp(),
        en: expected_near_solutions_at(n, d, p, m),
        f0: log_f[0].exp(),
        f_n: log_f[n].exp(),
        f_terms: log_f.iter().map(|l| l.exp()).collect(),
        ratio_bound: 1.0 + (-log_ex).exp(),
        pr_sat_lower: (-log_ratio).exp(),
        log_ex,
        log_ratio,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Thresholds {
    pub r_cr: f64,
    pub delta: f64,
    /// `1 + alpha (1 - r_cr p k)`.
    pub omega: f64,
    /// `1 + alpha (1 + p k / ln(1 - p))`, algebraically equal to `omega`.
    pub omega_alt: f64,
    /// `r_cr + delta / (n ln d)`.
    pub r_threshold: f64,
    /// `(ln n + ln d - p k r ln d) / ln n` at `r_threshold`; tends to `omega`.
    pub omega_check: f64,
    /// `p k + ln(1 - p)`, positive whenever `k >= 1/(1 - p)`.
    pub pk_plus_log_q: f64,
}

pub fn thresholds(p_eff: f64, k: usize, alpha: f64, n: usize, d: u32) -> Thresholds {
    let r_cr = critical_density(p_eff);
    let delta = threshold_shift(p_eff);
    let ln_n = (n as f64).ln();
    let ln_d = f64::from(d).ln();
    let kf = k as f64;
    let r_threshold = r_cr + delta / (n as f64 * ln_d);
    Thresholds {
        r_cr,
        delta,
        omega: omega(alpha, p_eff, k),
        omega_alt: 1.0 + alpha * (1.0 + p_eff * kf / (1.0 - p_eff).ln()),
        r_threshold,
        omega_check: (ln_n + ln_d - p_eff * kf * r_threshold * ln_d) / ln_n,
        pk_plus_log_q: p_eff * kf + (1.0 - p_eff).ln(),
    }
}
