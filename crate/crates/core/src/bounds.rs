//! Explicit constants and closed-form factors of the subordinated Harnack,
//! boundary-case and log-Harnack inequalities.

use std::f64::consts::{E, PI};

use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};
use crate::specfun::ln_gamma_unchecked;
use crate::subordinator::{sum_log_series, SeriesEval};

/// Parameters of a Harnack inequality of the form
/// (P_s f(x))^p ≤ exp(H (ε + s^{−κ})) P_s f^p(y), at one pair (x, y).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HarnackProfile {
    pub kappa: f64,
    pub epsilon: f64,
    pub h_value: f64,
    /// Curvature lower bound −K of the base generator (0 for flat space).
    #[serde(rename = "K", default)]
    pub k: f64,
}

impl HarnackProfile {
    pub fn new(kappa: f64, epsilon: f64, h_value: f64, k: f64) -> Result<Self> {
        let p = HarnackProfile {
            kappa,
            epsilon,
            h_value,
            k,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.kappa > 0.0 && self.kappa.is_finite()) {
            return domain(format!("kappa must be > 0, got {}", self.kappa));
        }
        if !(self.epsilon >= 0.0 && self.epsilon.is_finite()) {
            return domain(format!("epsilon must be >= 0, got {}", self.epsilon));
        }
        if !(self.h_value >= 0.0 && self.h_value.is_finite()) {
            return domain(format!("H must be >= 0, got {}", self.h_value));
        }
        if !self.k.is_finite() {
            return domain("K must be finite");
        }
        Ok(())
    }
}

fn check_p(p: f64) -> Result<()> {
    if !(p > 1.0 && p.is_finite()) {
        return domain(format!("p must be > 1, got {p}"));
    }
    Ok(())
}

fn check_t(t: f64) -> Result<()> {
    if !(t > 0.0 && t.is_finite()) {
        return domain(format!("t must be > 0, got {t}"));
    }
    Ok(())
}

fn check_open_index(alpha: f64, kappa: f64) -> Result<()> {
    if !(kappa > 0.0 && kappa.is_finite()) {
        return domain(format!("kappa must be > 0, got {kappa}"));
    }
    let lo = kappa / (kappa + 1.0);
    if !(alpha > lo && alpha < 1.0) {
        return domain(format!(
            "alpha must lie in (kappa/(kappa+1), 1) = ({lo}, 1), got {alpha}"
        ));
    }
    Ok(())
}

/// b = 1 − (1/α − 1)κ, the exponent governing the growth of the moment series.
pub fn exponent_b(alpha: f64, kappa: f64) -> f64 {
    1.0 - (1.0 / alpha - 1.0) * kappa
}

/// pKρ²/(2(p−1)(e^{2Kt}−1)), and its limit pρ²/(4(p−1)t) at K = 0.
pub fn base_harnack_exponent(p: f64, k: f64, t: f64, rho_sq: f64) -> Result<f64> {
    check_p(p)?;
    check_t(t)?;
    if !(rho_sq >= 0.0) {
        return domain(format!("rho_sq must be >= 0, got {rho_sq}"));
    }
    if rho_sq == 0.0 {
        return Ok(0.0);
    }
    let pre = p * rho_sq / (2.0 * (p - 1.0));
    if k == 0.0 {
        return Ok(pre / (2.0 * t));
    }
    Ok(pre * k / (2.0 * k * t).exp_m1())
}

/// ln of Γ(κn/α)/(αΓ(κn)·n!), the t-free coefficient of the n-th term of the
/// exponential-moment series.
pub fn ln_series_coefficient(alpha: f64, kappa: f64, n: u32) -> f64 {
    let r = kappa * n as f64;
    ln_gamma_unchecked(r / alpha)
        - alpha.ln()
        - ln_gamma_unchecked(r)
        - ln_gamma_unchecked(n as f64 + 1.0)
}

/// A constant c with Γ(κn/α)/(αΓ(κn) n!) ≤ n^{−bn} cⁿ for every n ≥ 1.
///
/// With K₀ = (κ/e)^{κ(1/α−1)} α^{−κ/α}, Stirling's bounds give
/// Γ(κn/α)/(αΓ(κn)) ≤ n^{(1−b)n} K₀ⁿ e^{α/(12κn)}/√(2παn), and
/// 1/n! ≤ eⁿ n^{−n}; so c = e·K₀·max(1, e^{α/(12κ)}/√(2πα)).
pub fn constant_c(alpha: f64, kappa: f64) -> Result<f64> {
    check_open_index(alpha, kappa)?;
    Ok(ln_constant_c(alpha, kappa).exp())
}

fn ln_k0(alpha: f64, kappa: f64) -> f64 {
    kappa * (1.0 / alpha - 1.0) * (kappa.ln() - 1.0) - (kappa / alpha) * alpha.ln()
}

fn ln_constant_c(alpha: f64, kappa: f64) -> f64 {
    let corr = alpha / (12.0 * kappa) - 0.5 * (2.0 * PI * alpha).ln();
    1.0 + ln_k0(alpha, kappa) + corr.max(0.0)
}

/// Largest value over n = 1..=n_max of ln LHS_n − ln RHS_n for the two
/// inequalities that c must satisfy:
/// the Stirling form (1/√(2παn))·K₀ⁿ·e^{α/(12κn)} ≤ cⁿ, and the
/// series-term form Γ(κn/α)/(αΓ(κn) n!) ≤ n^{−bn} cⁿ.
/// Both margins are ≤ 0 when c is valid.
pub fn constant_c_margins(alpha: f64, kappa: f64, n_max: u32) -> Result<(f64, f64)> {
    check_open_index(alpha, kappa)?;
    let lc = ln_constant_c(alpha, kappa);
    let lk = ln_k0(alpha, kappa);
    let b = exponent_b(alpha, kappa);
    let mut stirling = f64::NEG_INFINITY;
    let mut term = f64::NEG_INFINITY;
    for n in 1..=n_max {
        let nf = n as f64;
        let lhs1 = -0.5 * (2.0 * PI * alpha * nf).ln() + nf * lk + alpha / (12.0 * kappa * nf);
        stirling = stirling.max(lhs1 - nf * lc);
        let lhs2 = ln_series_coefficient(alpha, kappa, n);
        term = term.max(lhs2 - (nf * lc - b * nf * nf.ln()));
    }
    Ok((stirling, term))
}

/// 1 + Σ n^{n(κ(1/α−1)−1)} (cδ t^{−κ/α})ⁿ with c = constant_c(α, κ).
pub fn series_factor(delta: f64, alpha: f64, kappa: f64, t: f64) -> Result<SeriesEval> {
    check_open_index(alpha, kappa)?;
    check_t(t)?;
    if !(delta >= 0.0 && delta.is_finite()) {
        return domain(format!("delta must be >= 0, got {delta}"));
    }
    if delta == 0.0 {
        return Ok(SeriesEval::exact(1.0));
    }
    let b = exponent_b(alpha, kappa);
    let ln_a = ln_constant_c(alpha, kappa) + delta.ln() - (kappa / alpha) * t.ln();
    let terms = (1..).map(move |n: usize| {
        let nf = n as f64;
        -b * nf * nf.ln() + nf * ln_a
    });
    Ok(sum_log_series(terms, None, 1e-13))
}

/// (e^{(2a)^{1/b}/2} − 1)^b, a bound for Σ_{n≥1} aⁿ/n^{bn}.
pub fn jensen_series_bound(a: f64, b: f64) -> Result<f64> {
    ln_jensen_series_bound(a, b).map(f64::exp)
}

pub fn ln_jensen_series_bound(a: f64, b: f64) -> Result<f64> {
    if !(a > 0.0 && a.is_finite()) {
        return domain(format!("a must be > 0, got {a}"));
    }
    if !(b > 0.0 && b <= 1.0) {
        return domain(format!("b must lie in (0, 1], got {b}"));
    }
    let x = (2.0 * a).powf(1.0 / b) / 2.0;
    Ok(b * ln_expm1(x))
}

fn ln_expm1(x: f64) -> f64 {
    if x > 30.0 {
        x + (-(-x).exp()).ln_1p()
    } else {
        x.exp_m1().ln()
    }
}

/// ln(1 + e^{l}) without overflow.
fn ln1p_exp(l: f64) -> f64 {
    if l > 30.0 {
        l + (-l).exp().ln_1p()
    } else {
        l.exp().ln_1p()
    }
}

/// The constant 2^{1−b}c appearing inside the Harnack factor, where the
/// Jensen step's (2a)^{1/b}/2 is written as ((2^{1−b}a))^{1/b}.
pub fn theorem_constant(alpha: f64, kappa: f64) -> Result<f64> {
    check_open_index(alpha, kappa)?;
    let b = exponent_b(alpha, kappa);
    Ok(((1.0 - b) * 2f64.ln() + ln_constant_c(alpha, kappa)).exp())
}

/// C_{p,κ,α} = b·c'^{1/b} / (p−1)^{(1/α−1)κ/b} with c' = theorem_constant(α, κ).
#[allow(non_snake_case)]
pub fn C_pka(p: f64, kappa: f64, alpha: f64) -> Result<f64> {
    check_p(p)?;
    check_open_index(alpha, kappa)?;
    let b = exponent_b(alpha, kappa);
    let lc = theorem_constant(alpha, kappa)?.ln();
    Ok((b.ln() + lc / b - ((1.0 / alpha - 1.0) * kappa / b) * (p - 1.0).ln()).exp())
}

/// ln of e^{εH}(1 + [exp((c'H/((p−1)t^{κ/α}))^{1/b}) − 1]^b)^{p−1}.
pub fn ln_thm11_intermediate_factor(
    p: f64,
    profile: &HarnackProfile,
    alpha: f64,
    t: f64,
) -> Result<f64> {
    check_p(p)?;
    check_t(t)?;
    profile.validate()?;
    let kappa = profile.kappa;
    check_open_index(alpha, kappa)?;
    let h = profile.h_value;
    if h == 0.0 {
        return Ok(0.0);
    }
    let b = exponent_b(alpha, kappa);
    let a = constant_c(alpha, kappa)? * h / ((p - 1.0) * t.powf(kappa / alpha));
    let lj = ln_jensen_series_bound(a, b)?;
    Ok(profile.epsilon * h + (p - 1.0) * ln1p_exp(lj))
}

pub fn thm11_intermediate_factor(
    p: f64,
    profile: &HarnackProfile,
    alpha: f64,
    t: f64,
) -> Result<f64> {
    ln_thm11_intermediate_factor(p, profile, alpha, t).map(f64::exp)
}

/// ln of 2^{p−1} exp(εH + C_{p,κ,α}(H/t^{κ/α})^{1/b}).
pub fn ln_thm11_factor(p: f64, profile: &HarnackProfile, alpha: f64, t: f64) -> Result<f64> {
    check_t(t)?;
    profile.validate()?;
    let kappa = profile.kappa;
    let cp = C_pka(p, kappa, alpha)?;
    let b = exponent_b(alpha, kappa);
    let h = profile.h_value;
    let core = if h == 0.0 {
        0.0
    } else {
        cp * (h / t.powf(kappa / alpha)).powf(1.0 / b)
    };
    Ok((p - 1.0) * 2f64.ln() + profile.epsilon * h + core)
}

pub fn thm11_factor(p: f64, profile: &HarnackProfile, alpha: f64, t: f64) -> Result<f64> {
    ln_thm11_factor(p, profile, alpha, t).map(f64::exp)
}

/// Boundary-index factor at α = κ/(κ+1).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Prop13Factor {
    /// e(p−1)(tκ)^{κ+1} > κ(κ+1)^{κ+1}H, equivalently exact_ratio < e.
    pub valid_domain: bool,
    /// (1 + C/(e/q − 1))^{p−1}; +∞ outside `valid_domain`.
    #[serde(with = "crate::floatfmt")]
    pub factor: f64,
    /// q = δ(κ+1)^{κ+1}/(κ^κ t^{κ+1}) with δ = H/(p−1); the moment integral is finite iff q < 1.
    #[serde(with = "crate::floatfmt")]
    pub exact_ratio: f64,
    /// (1 + C q/(1 − q))^{p−1}, which dominates the moment integral; +∞ when q ≥ 1.
    #[serde(with = "crate::floatfmt")]
    pub corrected_factor: f64,
}

/// √((κ+1)/(2πκ))·e^{1/(12(κ+1))}.
pub fn prop13_constant(kappa: f64) -> f64 {
    ((kappa + 1.0) / (2.0 * PI * kappa)).sqrt() * (1.0 / (12.0 * (kappa + 1.0))).exp()
}

pub fn prop13_factor(p: f64, kappa: f64, h_value: f64, t: f64) -> Result<Prop13Factor> {
    check_p(p)?;
    check_t(t)?;
    if !(kappa > 0.0 && kappa.is_finite()) {
        return domain(format!("kappa must be > 0, got {kappa}"));
    }
    if !(h_value >= 0.0 && h_value.is_finite()) {
        return domain(format!("H must be >= 0, got {h_value}"));
    }
    if h_value == 0.0 {
        return Ok(Prop13Factor {
            valid_domain: true,
            factor: 1.0,
            exact_ratio: 0.0,
            corrected_factor: 1.0,
        });
    }
    let c = prop13_constant(kappa);
    let q = crate::subordinator::boundary_ratio(h_value / (p - 1.0), kappa, t);
    let valid_domain = q < E;
    let factor = if valid_domain {
        ((p - 1.0) * (c / (E / q - 1.0)).ln_1p()).exp()
    } else {
        f64::INFINITY
    };
    let corrected_factor = if q < 1.0 {
        ((p - 1.0) * (c * q / (1.0 - q)).ln_1p()).exp()
    } else {
        f64::INFINITY
    };
    Ok(Prop13Factor {
        valid_domain,
        factor,
        exact_ratio: q,
        corrected_factor,
    })
}

/// Γ(κ/α)/(α Γ(κ)) t^{−κ/α}; equals t^{−κ} at α = 1.
pub fn log_harnack_rate(alpha: f64, kappa: f64, t: f64) -> Result<f64> {
    if !(alpha > 0.0 && alpha <= 1.0) {
        return domain(format!("alpha must lie in (0, 1], got {alpha}"));
    }
    if !(kappa > 0.0 && kappa.is_finite()) {
        return domain(format!("kappa must be > 0, got {kappa}"));
    }
    check_t(t)?;
    if alpha == 1.0 {
        return Ok(t.powf(-kappa));
    }
    Ok((ln_gamma_unchecked(kappa / alpha)
        - alpha.ln()
        - ln_gamma_unchecked(kappa)
        - (kappa / alpha) * t.ln())
    .exp())
}

/// H(ε + Γ(κ/α)/(α t^{κ/α} Γ(κ))).
pub fn log_harnack_term(alpha: f64, kappa: f64, epsilon: f64, h_value: f64, t: f64) -> Result<f64> {
    if !(epsilon >= 0.0) {
        return domain(format!("epsilon must be >= 0, got {epsilon}"));
    }
    if !(h_value >= 0.0) {
        return domain(format!("H must be >= 0, got {h_value}"));
    }
    let rate = log_harnack_rate(alpha, kappa, t)?;
    Ok(h_value * (epsilon + rate))
}

/// e^{εH}·(∫ e^{H/((p−1)s^κ)} μ_t(ds))^{p−1}, from a converged moment.
pub fn transfer_factor_numeric(
    p: f64,
    profile: &HarnackProfile,
    moment: &SeriesEval,
) -> Result<f64> {
    ln_transfer_factor_numeric(p, profile, moment).map(f64::exp)
}

pub fn ln_transfer_factor_numeric(
    p: f64,
    profile: &HarnackProfile,
    moment: &SeriesEval,
) -> Result<f64> {
    check_p(p)?;
    profile.validate()?;
    if !moment.converged {
        return Err(crate::Error::NotConvergent(
            moment
                .divergence_reason
                .clone()
                .unwrap_or_else(|| "moment series did not converge".into()),
        ));
    }
    Ok(profile.epsilon * profile.h_value + (p - 1.0) * moment.log_value)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn prof(h: f64, eps: f64) -> HarnackProfile {
        HarnackProfile::new(1.0, eps, h, 0.0).unwrap()
    }

    #[test]
    fn base_exponent_examples() {
        assert_eq!(base_harnack_exponent(2.0, 0.0, 1.0, 0.0).unwrap(), 0.0);
        assert!((base_harnack_exponent(2.0, 0.0, 1.0, 4.0).unwrap() - 2.0).abs() < 1e-15);
        let v = base_harnack_exponent(2.0, 1.0, 1.0, 1.0).unwrap();
        assert!((v - 1.0 / (E * E - 1.0)).abs() < 1e-15);
        for k in [1e-8, -1e-8] {
            let v = base_harnack_exponent(2.0, k, 1.0, 4.0).unwrap();
            assert!((v - 2.0).abs() < 1e-7);
        }
        assert!(base_harnack_exponent(1.0, 0.0, 1.0, 1.0).is_err());
    }

    #[test]
    fn constant_c_is_valid_and_limits() {
        for &alpha in &[0.55, 0.6, 0.75, 0.9, 0.99] {
            let (m1, m2) = constant_c_margins(alpha, 1.0, 200).unwrap();
            assert!(m1 <= 1e-12 && m2 <= 1e-12, "alpha={alpha}: {m1} {m2}");
        }
        // α → 1⁻: K₀ → 1 and e^{1/12}/√(2π) < 1
        let c = constant_c(1.0 - 1e-9, 1.0).unwrap();
        assert!((c - E).abs() < 1e-6);
        let c = constant_c(0.6, 1.0).unwrap();
        assert!(c >= (1.0 / E).powf(2.0 / 3.0) * 0.6f64.powf(-5.0 / 3.0));
        assert!(constant_c(0.5, 1.0).is_err());
        assert!(constant_c(1.0, 1.0).is_err());
    }

    #[test]
    fn c_pka_examples() {
        let c = theorem_constant(0.75, 1.0).unwrap();
        let v = C_pka(2.0, 1.0, 0.75).unwrap();
        assert!((v - (2.0 / 3.0) * c.powf(1.5)).abs() < 1e-12 * v);
        // p → ∞ factor (p−1)^{−(1/α−1)κ/b} shrinks C
        assert!(C_pka(100.0, 1.0, 0.75).unwrap() < v);
    }

    #[test]
    fn thm11_examples() {
        assert!((thm11_factor(3.0, &prof(0.0, 1.0), 0.75, 1.0).unwrap() - 4.0).abs() < 1e-14);
        assert_eq!(
            thm11_intermediate_factor(3.0, &prof(0.0, 1.0), 0.75, 1.0).unwrap(),
            1.0
        );
        let f = thm11_factor(2.0, &prof(1.0, 0.0), 0.75, 1.0).unwrap();
        let expected = 2.0 * C_pka(2.0, 1.0, 0.75).unwrap().exp();
        assert!((f - expected).abs() < 1e-12 * f);
    }

    #[test]
    fn jensen_examples() {
        assert!((jensen_series_bound(0.7, 1.0).unwrap() - 0.7f64.exp_m1()).abs() < 1e-15);
        let v = jensen_series_bound(0.5, 0.5).unwrap();
        assert!((v - 0.5f64.exp_m1().sqrt()).abs() < 1e-15);
        let direct: f64 = (1..200)
            .map(|n| 0.5f64.powi(n) / (n as f64).powf(n as f64 / 2.0))
            .sum();
        assert!(direct <= v);
    }

    #[test]
    fn prop13_examples() {
        let r = prop13_factor(2.0, 1.0, 0.0, 1.0).unwrap();
        assert!(r.valid_domain && r.factor == 1.0 && r.exact_ratio == 0.0);
        let r = prop13_factor(2.0, 1.0, 0.5, 2.0).unwrap();
        assert!(r.valid_domain && (r.exact_ratio - 0.5).abs() < 1e-15);
        let r = prop13_factor(2.0, 1.0, 0.6, 1.0).unwrap();
        assert!(r.valid_domain && r.exact_ratio > 1.0 && r.corrected_factor.is_infinite());
        let r = prop13_factor(2.0, 1.0, 0.7, 1.0).unwrap();
        assert!(!r.valid_domain);
    }

    #[test]
    fn log_term_examples() {
        assert_eq!(
            log_harnack_term(1.0, 1.0, 0.5, 2.0, 4.0).unwrap(),
            2.0 * (0.5 + 0.25)
        );
        assert!((log_harnack_term(0.5, 1.0, 0.0, 1.0, 1.0).unwrap() - 2.0).abs() < 1e-13);
        assert_eq!(log_harnack_term(0.3, 1.0, 1.0, 0.0, 1.0).unwrap(), 0.0);
    }

    #[test]
    fn transfer_examples() {
        let m = SeriesEval::exact(1.7);
        assert_eq!(
            transfer_factor_numeric(3.0, &prof(0.0, 2.0), &SeriesEval::exact(1.0)).unwrap(),
            1.0
        );
        let v = transfer_factor_numeric(2.0, &prof(0.5, 1.0), &m).unwrap();
        assert!((v - 0.5f64.exp() * 1.7).abs() < 1e-14);
        let d = SeriesEval::diverged(0, "x");
        assert!(transfer_factor_numeric(2.0, &prof(0.5, 1.0), &d).is_err());
    }
}
