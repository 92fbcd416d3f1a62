//! Gamma function and the two-sided Stirling bracket.
//!
//! `log_gamma` uses the Lanczos approximation with the Pugh coefficients
//! (r = 10.900511, 11 terms), which is accurate to roughly 15 digits on the
//! positive axis.

use std::f64::consts::{E, PI};

use crate::error::{domain, Result};

const LANCZOS_R: f64 = 10.900511;

#[allow(clippy::excessive_precision)]
const LANCZOS_DK: [f64; 11] = [
    2.48574089138753565546e-5,
    1.05142378581721974210,
    -3.45687097222016235469,
    4.51227709466894823700,
    -2.98285225323576655721,
    1.05639711577126713077,
    -1.95428773191645869583e-1,
    1.70970543404441224307e-2,
    -5.71926117404305781283e-4,
    4.63399473359905636708e-6,
    -2.71994908488607703910e-9,
];

/// ln(2 sqrt(e / pi))
const LN_2_SQRT_E_OVER_PI: f64 = 0.620_782_237_635_245_2;
const LN_PI: f64 = 1.144_729_885_849_400_2;
const LN_SQRT_2PI: f64 = 0.918_938_533_204_672_8;

/// Natural logarithm of the gamma function for `r > 0`.
pub fn log_gamma(r: f64) -> Result<f64> {
    if !r.is_finite() || r <= 0.0 {
        return domain(format!("log_gamma requires a finite r > 0, got {r}"));
    }
    Ok(ln_gamma_unchecked(r))
}

/// Gamma function for `r > 0`; overflows to `+inf` beyond r ≈ 171.6.
pub fn gamma(r: f64) -> Result<f64> {
    let ln = log_gamma(r)?;
    // exact at small integers, where the product has no rounding
    if r.fract() == 0.0 && r <= 23.0 {
        return Ok((2..r as u32).fold(1.0, |acc, k| acc * k as f64));
    }
    Ok(ln.exp())
}

pub(crate) fn ln_gamma_unchecked(x: f64) -> f64 {
    if x < 0.5 {
        let s = LANCZOS_DK
            .iter()
            .enumerate()
            .skip(1)
            .fold(LANCZOS_DK[0], |s, (i, &dk)| s + dk / (i as f64 - x));
        LN_PI
            - (PI * x).sin().ln()
            - s.ln()
            - LN_2_SQRT_E_OVER_PI
            - (0.5 - x) * ((0.5 - x + LANCZOS_R) / E).ln()
    } else {
        let s = LANCZOS_DK
            .iter()
            .enumerate()
            .skip(1)
            .fold(LANCZOS_DK[0], |s, (i, &dk)| s + dk / (x + i as f64 - 1.0));
        s.ln() + LN_2_SQRT_E_OVER_PI + (x - 0.5) * ((x - 0.5 + LANCZOS_R) / E).ln()
    }
}

/// Bounds on Γ(r) from Stirling's formula with remainder η(r) = θ/(12r), θ ∈ (0,1).
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct StirlingBracket {
    pub r: f64,
    pub lower: f64,
    pub upper: f64,
}

impl StirlingBracket {
    pub fn contains(&self, value: f64) -> bool {
        self.lower <= value && value <= self.upper
    }

    /// Logarithms of the two endpoints, usable where the endpoints overflow.
    pub fn ln_bounds(&self) -> (f64, f64) {
        let ln_lower = stirling_ln_lower(self.r);
        (ln_lower, ln_lower + 1.0 / (12.0 * self.r))
    }
}

fn stirling_ln_lower(r: f64) -> f64 {
    LN_SQRT_2PI + (r - 0.5) * r.ln() - r
}

pub fn stirling_bracket(r: f64) -> Result<StirlingBracket> {
    if !r.is_finite() || r <= 0.0 {
        return domain(format!("stirling_bracket requires a finite r > 0, got {r}"));
    }
    let ln_lower = stirling_ln_lower(r);
    Ok(StirlingBracket {
        r,
        lower: ln_lower.exp(),
        upper: (ln_lower + 1.0 / (12.0 * r)).exp(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn factorial(n: u32) -> f64 {
        (1..=n).map(f64::from).product()
    }

    #[test]
    fn known_values() {
        assert!(log_gamma(1.0).unwrap().abs() < 1e-15);
        assert!((log_gamma(4.0).unwrap() - 6f64.ln()).abs() < 1e-14);
        assert!((log_gamma(0.5).unwrap() - 0.5 * PI.ln()).abs() < 1e-14);
        assert!((log_gamma(2.0).unwrap()).abs() < 1e-15);
    }

    #[test]
    fn rejects_bad_arguments() {
        assert!(log_gamma(0.0).is_err());
        assert!(log_gamma(-1.5).is_err());
        assert!(log_gamma(f64::NAN).is_err());
        assert!(log_gamma(f64::INFINITY).is_err());
        assert!(stirling_bracket(0.0).is_err());
    }

    #[test]
    fn factorials_exact() {
        for n in 0..=20u32 {
            let g = log_gamma(f64::from(n) + 1.0).unwrap().exp();
            let exact = factorial(n);
            assert!(
                ((g - exact) / exact).abs() <= 1e-11,
                "n={n}: {g} vs {exact}"
            );
        }
    }

    #[test]
    fn recurrence() {
        let mut r = 0.1;
        while r <= 100.0 {
            let lhs = log_gamma(r + 1.0).unwrap() - log_gamma(r).unwrap() - r.ln();
            assert!(lhs.abs() <= 1e-11, "r={r}: {lhs:e}");
            r += 0.037;
        }
    }

    #[test]
    fn bracket_examples() {
        assert!(stirling_bracket(10.0).unwrap().contains(362_880.0));
        assert!(stirling_bracket(1.0).unwrap().contains(1.0));
        assert!(stirling_bracket(0.5).unwrap().contains(PI.sqrt()));
    }

    #[test]
    fn bracket_ordering_and_large_arguments() {
        let b = stirling_bracket(500.0).unwrap();
        assert!(b.upper.is_infinite());
        let (lo, hi) = b.ln_bounds();
        let lg = log_gamma(500.0).unwrap();
        assert!(lo <= lg && lg <= hi);
    }

    proptest::proptest! {
        #![proptest_config(proptest::prelude::ProptestConfig::with_cases(1000))]
        #[test]
        fn bracket_contains_gamma(r in 0.1f64..200.0) {
            let b = stirling_bracket(r).unwrap();
            proptest::prop_assert!(b.lower <= b.upper);
            let (lo, hi) = b.ln_bounds();
            let lg = log_gamma(r).unwrap();
            // compare in log space so the upper end of the range does not overflow
            proptest::prop_assert!(lo <= lg + 1e-13 && lg <= hi + 1e-13, "r={} lo={} lg={} hi={}", r, lo, lg, hi);
            if r < 170.0 {
                let g = lg.exp();
                proptest::prop_assert!(b.lower <= g * (1.0 + 1e-13) && g <= b.upper * (1.0 + 1e-13));
            }
        }
    }
}
