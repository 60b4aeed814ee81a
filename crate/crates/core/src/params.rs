//! Model parameters and the thresholds derived from them.

use serde::{Deserialize, Serialize};

use crate::error::{RbError, Result};

/// How the constraint density `r` is chosen.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Density {
    /// `r = r_cr + delta / (n ln d)`, where the expected solution count is 1/2.
    Threshold,
    Explicit(f64),
}

/// All parameters of one Model RB ensemble.
///
/// Field order is the serialization order used by the instance file format.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RbParams {
    pub n: usize,
    pub alpha: f64,
    pub p: f64,
    pub k: usize,
    pub d: u32,
    /// Allowed values per row of the base relation, `round((1 - p) d)`.
    pub b: u32,
    /// Tightness actually realised by `b`: `1 - b / d`.
    pub p_eff: f64,
    pub r: f64,
    pub m: usize,
    pub seed: u64,
    pub r_cr: f64,
    pub delta: f64,
    pub omega: f64,
}

/// `1 / -ln(1 - p)`.
pub fn critical_density(p_eff: f64) -> f64 {
    1.0 / -(1.0 - p_eff).ln()
}

/// `ln 2 / -ln(1 - p)`.
pub fn threshold_shift(p_eff: f64) -> f64 {
    std::f64::consts::LN_2 / -(1.0 - p_eff).ln()
}

/// `1 + alpha (1 - r_cr p k)`.
pub fn omega(alpha: f64, p_eff: f64, k: usize) -> f64 {
    1.0 + alpha * (1.0 - critical_density(p_eff) * p_eff * k as f64)
}

const MAX_TIGHTNESS_DRIFT: f64 = 0.25;

pub fn derive_params(
    n: usize,
    alpha: f64,
    p: f64,
    k: usize,
    seed: u64,
    density: Density,
) -> Result<RbParams> {
    if !(alpha.is_finite() && alpha > 0.0) {
        return Err(RbError::InvalidParams(format!(
            "alpha must be > 0, got {alpha}"
        )));
    }
    if n < 2 {
        return Err(RbError::InvalidParams(format!("n must be >= 2, got {n}")));
    }
    let d = (n as f64).powf(alpha).round();
    if !(2.0..=u32::MAX as f64).contains(&d) {
        return Err(RbError::InvalidParams(format!(
            "domain size n^alpha = {d} is outside [2, 2^32)"
        )));
    }
    complete(n, alpha, p, k, d as u32, seed, density)
}

/// Like [`derive_params`] but with the domain size given directly;
/// `alpha` is recorded as `ln d / ln n`.
pub fn derive_params_with_domain(
    n: usize,
    d: u32,
    p: f64,
    k: usize,
    seed: u64,
    density: Density,
) -> Result<RbParams> {
    if n < 2 {
        return Err(RbError::InvalidParams(format!("n must be >= 2, got {n}")));
    }
    if d < 2 {
        return Err(RbError::InvalidParams(format!("d must be >= 2, got {d}")));
    }
    let alpha = (d as f64).ln() / (n as f64).ln();
    complete(n, alpha, p, k, d, seed, density)
}

fn complete(
    n: usize,
    alpha: f64,
    p: f64,
    k: usize,
    d: u32,
    seed: u64,
    density: Density,
) -> Result<RbParams> {
    if !(p > 0.0 && p < 1.0) {
        return Err(RbError::InvalidParams(format!(
            "p must lie in (0, 1), got {p}"
        )));
    }
    if k < 2 {
        return Err(RbError::InvalidParams(format!("k must be >= 2, got {k}")));
    }
    let raw_b = ((1.0 - p) * d as f64).round();
    let b = raw_b.clamp(1.0, (d - 1) as f64) as u32;
    let p_eff = 1.0 - b as f64 / d as f64;
    if raw_b != b as f64 && (p_eff - p).abs() > MAX_TIGHTNESS_DRIFT {
        return Err(RbError::DegenerateTightness { p, d, b, p_eff });
    }

    let r_cr = critical_density(p_eff);
    let delta = threshold_shift(p_eff);
    let ln_d = (d as f64).ln();
    let r = match density {
        Density::Threshold => r_cr + delta / (n as f64 * ln_d),
        Density::Explicit(r) => {
            if !(r.is_finite() && r > 0.0) {
                return Err(RbError::InvalidParams(format!("r must be > 0, got {r}")));
            }
            r
        }
    };
    let m = ((r * n as f64 * ln_d).round() as usize).max(1);

    Ok(RbParams {
        n,
        alpha,
        p,
        k,
        d,
        b,
        p_eff,
        r,
        m,
        seed,
        r_cr,
        delta,
        omega: omega(alpha, p_eff, k),
    })
}

impl RbParams {
    /// The real-valued constraint count `r n ln d` before rounding.
    pub fn m_real(&self) -> f64 {
        self.r * self.n as f64 * (self.d as f64).ln()
    }

    /// Same ensemble with a different seed.
    pub fn with_seed(&self, seed: u64) -> Self {
        RbParams {
            seed,
            ..self.clone()
        }
    }

    /// Same ensemble with an explicit density; `m` is re-derived.
    pub fn with_density(&self, r: f64) -> Result<Self> {
        complete(
            self.n,
            self.alpha,
            self.p,
            self.k,
            self.d,
            self.seed,
            Density::Explicit(r),
        )
    }

    /// Overrides the constraint count (including zero) and back-computes `r`.
    /// Used for hand-built instances.
    pub fn with_constraint_count(&self, m: usize) -> Self {
        let denom = self.n as f64 * (self.d as f64).ln();
        let r = if denom > 0.0 { m as f64 / denom } else { 0.0 };
        RbParams {
            m,
            r,
            ..self.clone()
        }
    }

    /// Structural checks applied to parameters read from untrusted files.
    pub fn check(&self) -> Result<()> {
        let bad = |msg: String| Err(RbError::InvalidParams(msg));
        if self.n == 0 {
            return bad("n must be >= 1".into());
        }
        if self.k < 2 {
            return bad(format!("k must be >= 2, got {}", self.k));
        }
        if self.d < 2 {
            return bad(format!("d must be >= 2, got {}", self.d));
        }
        if self.b == 0 || self.b >= self.d {
            return bad(format!("b = {} must lie in [1, {}]", self.b, self.d - 1));
        }
        let floats = [
            self.alpha, self.p, self.p_eff, self.r, self.r_cr, self.delta, self.omega,
        ];
        if floats.iter().any(|x| !x.is_finite()) {
            return bad("non-finite real parameter".into());
        }
        let expected_p_eff = 1.0 - self.b as f64 / self.d as f64;
        if (self.p_eff - expected_p_eff).abs() > 1e-12 {
            return bad(format!("p_eff = {} inconsistent with b/d", self.p_eff));
        }
        Ok(())
    }
}

/// Which of the large-alpha conditions a parameter set meets.
///
/// Desk-scale runs violate most of these; the report exists so that every
/// experiment states which asymptotic preconditions it does not satisfy.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AlphaReport {
    pub alpha: f64,
    /// The four lower bounds on alpha, in order: 1, the omega < 0 threshold,
    /// the degree (Chernoff) bound and the self-unsatisfiability bound.
    /// The omega bound is `inf` when no alpha makes omega negative.
    pub bounds: [f64; 4],
    pub exceeds: [bool; 4],
    /// `max(bounds)`.
    pub binding_bound: f64,
    pub k_condition: bool,
    pub omega: f64,
    pub omega_negative: bool,
}

impl AlphaReport {
    pub fn all_hold(&self) -> bool {
        self.exceeds.iter().all(|&e| e) && self.k_condition && self.omega_negative
    }
}

pub fn validate_alpha(params: &RbParams) -> AlphaReport {
    let p = params.p_eff;
    let k = params.k as f64;
    let alpha = params.alpha;
    let ln_q = (1.0 - p).ln();

    let slope = 1.0 + p * k / ln_q;
    let omega_bound = if slope < 0.0 {
        -1.0 / slope
    } else {
        f64::INFINITY
    };
    let degree_bound = -2.0 * (100.0f64 / 99.0).powi(2) * ln_q / k;
    let self_unsat_bound = 100.0 * ln_q / (k * (1.0 - p / 3.0).ln());
    let bounds = [1.0, omega_bound, degree_bound, self_unsat_bound];
    let exceeds = bounds.map(|bound| alpha > bound);
    let binding_bound = bounds.iter().copied().fold(f64::NEG_INFINITY, f64::max);

    let omega = 1.0 + alpha * slope;
    AlphaReport {
        alpha,
        bounds,
        exceeds,
        binding_bound,
        // 1/(1-p) is computed exactly for dyadic p; allow rounding slack otherwise.
        k_condition: k >= 1.0 / (1.0 - p) - 1e-12,
        omega,
        omega_negative: omega < 0.0,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::LN_2;

    #[test]
    fn frb100_40_domain() {
        let alpha = 40f64.ln() / 100f64.ln();
        let params = derive_params(100, alpha, 0.25, 2, 0, Density::Threshold).unwrap();
        assert_eq!(params.d, 40);
        assert_eq!(params.b, 30);
    }

    #[test]
    fn half_tightness_thresholds() {
        let params = derive_params(16, 1.0, 0.5, 2, 0, Density::Threshold).unwrap();
        assert_eq!(params.p_eff, 0.5);
        assert!((params.r_cr - 1.0 / LN_2).abs() < 1e-15);
        assert!((params.delta - 1.0).abs() < 1e-15);
    }

    #[test]
    fn tiny_threshold_and_explicit_counts() {
        // r_cr * 4 ln 4 = 8 exactly in real arithmetic; delta = 1.
        let t = derive_params(4, 1.0, 0.5, 2, 0, Density::Threshold).unwrap();
        assert_eq!((t.d, t.b, t.m), (4, 2, 9));
        let e = derive_params(4, 1.0, 0.5, 2, 0, Density::Explicit(t.r_cr)).unwrap();
        assert_eq!(e.m, 8);
    }

    #[test]
    fn threshold_m_within_half() {
        for n in [5usize, 8, 10, 12, 30, 100] {
            for p in [0.2, 0.35, 0.5, 0.7] {
                let params = derive_params(n, 1.1, p, 2, 0, Density::Threshold).unwrap();
                let ln_d = (params.d as f64).ln();
                let target = (params.r_cr + params.delta / (n as f64 * ln_d)) * n as f64 * ln_d;
                assert!((params.m as f64 - target).abs() <= 0.5);
            }
        }
    }

    #[test]
    fn parameter_identities() {
        for p in [0.1, 0.25, 0.5, 0.66, 0.9] {
            let params = derive_params(20, 1.0, p, 3, 0, Density::Threshold).unwrap();
            let q = 1.0 - params.p_eff;
            assert!((params.r_cr * -q.ln() - 1.0).abs() < 1e-12);
            assert!((q.powf(params.delta) - 0.5).abs() < 1e-12);
        }
    }

    #[test]
    fn rejects_bad_inputs() {
        assert!(derive_params(1, 1.0, 0.5, 2, 0, Density::Threshold).is_err());
        assert!(derive_params(4, 0.0, 0.5, 2, 0, Density::Threshold).is_err());
        assert!(derive_params(4, 1.0, 1.0, 2, 0, Density::Threshold).is_err());
        assert!(derive_params(4, 1.0, 0.5, 1, 0, Density::Threshold).is_err());
        assert!(derive_params(4, 1.0, 0.5, 2, 0, Density::Explicit(-1.0)).is_err());
    }

    #[test]
    fn degenerate_tightness_rejected() {
        // d = 2: p = 0.95 rounds b to 0, clamps to 1, p_eff = 0.5.
        let err = derive_params(2, 1.0, 0.95, 2, 0, Density::Threshold).unwrap_err();
        assert!(matches!(err, RbError::DegenerateTightness { b: 1, .. }));
        // Clamped but close enough is accepted.
        let ok = derive_params(4, 1.0, 0.7, 2, 0, Density::Threshold).unwrap();
        assert_eq!(ok.b, 1);
    }

    #[test]
    fn k_condition_holds_with_equality() {
        let params = derive_params(4, 1.0, 0.5, 2, 0, Density::Threshold).unwrap();
        assert!(validate_alpha(&params).k_condition);
    }

    #[test]
    fn alpha_one_fails_first_bound() {
        let params = derive_params(8, 1.0, 0.5, 2, 0, Density::Threshold).unwrap();
        let report = validate_alpha(&params);
        assert!(!report.exceeds[0]);
        assert!(!report.all_hold());
    }

    #[test]
    fn large_alpha_makes_omega_negative() {
        let mut params = derive_params(8, 1.0, 0.5, 2, 0, Density::Threshold).unwrap();
        params.alpha = 10.0;
        let report = validate_alpha(&params);
        let expected_bound = -1.0 / (1.0 - 1.0 / LN_2);
        assert!((report.bounds[1] - expected_bound).abs() < 1e-12);
        assert!((report.bounds[1] - 2.2589).abs() < 1e-3);
        assert!(report.exceeds[1]);
        assert!(report.omega_negative);
    }
}
