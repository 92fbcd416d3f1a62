//! One-dimensional optimal transport for convex costs via the quantile coupling.

use statrs::distribution::{ContinuousCDF, Normal};

use crate::error::{domain, Result};
use crate::quad::{self, QuadratureSpec};

/// ∫_0^1 cost(F^{−1}(u), G^{−1}(u)) du, the optimal coupling cost on R for costs
/// c(x, y) = h(x − y) with h convex.
pub fn quantile_coupling_cost<F, G, C>(
    source_quantile: F,
    target_quantile: G,
    cost: C,
    spec: &QuadratureSpec,
) -> Result<f64>
where
    F: Fn(f64) -> f64,
    G: Fn(f64) -> f64,
    C: Fn(f64, f64) -> f64,
{
    let est = quad::try_integrate(
        |u| Ok(cost(source_quantile(u), target_quantile(u))),
        0.0,
        1.0,
        &[1e-6, 1e-3, 0.5, 1.0 - 1e-3, 1.0 - 1e-6],
        spec,
    )?;
    Ok(est.value)
}

/// W_H(N(m₁, s₁²), N(m₂, s₂²)) for H(x, y) = c·(x − y)².
pub fn gaussian_quadratic_cost(
    m1: f64,
    s1: f64,
    m2: f64,
    s2: f64,
    c: f64,
    spec: &QuadratureSpec,
) -> Result<f64> {
    let a = Normal::new(m1, s1).map_err(|e| crate::Error::Domain(e.to_string()))?;
    let b = Normal::new(m2, s2).map_err(|e| crate::Error::Domain(e.to_string()))?;
    if !(c >= 0.0) {
        return domain(format!("cost scale must be >= 0, got {c}"));
    }
    quantile_coupling_cost(
        |u| a.inverse_cdf(u),
        |u| b.inverse_cdf(u),
        |x, y| c * (x - y) * (x - y),
        spec,
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gaussian_w2_closed_form() {
        let spec = QuadratureSpec::new(1e-10, 1e-14, 2000).unwrap();
        for &(m, s) in &[(0.0, 1.0), (0.5, 1.0), (0.3, 0.8), (-0.4, 0.6)] {
            let w = gaussian_quadratic_cost(m, s, 0.0, 1.0, 1.0, &spec).unwrap();
            let exact = m * m + (s - 1.0) * (s - 1.0);
            assert!((w - exact).abs() < 1e-8, "m={m} s={s}: {w} vs {exact}");
        }
    }
}
