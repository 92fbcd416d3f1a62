//! The one-sided α-stable subordinator: the law μ_t^α on (0, ∞) with
//! Laplace transform e^{−t x^α}.

use std::f64::consts::PI;

use rand::distr::{Distribution, Open01};
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::quad::{self, Estimate};
use crate::specfun::{gamma, ln_gamma_unchecked};

pub use crate::quad::QuadratureSpec;

/// Relative tolerance under which α is treated as the boundary index κ/(κ+1).
const BOUNDARY_TOL: f64 = 1e-12;
const MIN_TERMS: usize = 20;
const MAX_TERMS: usize = 2_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StableSubordinator {
    alpha: f64,
    t: f64,
}

/// Monte Carlo sample size and seed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MCSpec {
    pub n_samples: usize,
    pub seed: u64,
}

impl MCSpec {
    pub fn new(n_samples: usize, seed: u64) -> Result<Self> {
        if n_samples == 0 {
            return domain("mc.n_samples must be >= 1");
        }
        Ok(MCSpec { n_samples, seed })
    }
}

/// Outcome of summing a positive series term by term.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SeriesEval {
    #[serde(with = "crate::floatfmt")]
    pub value: f64,
    /// ln(value); stays finite when `value` overflows.
    #[serde(with = "crate::floatfmt")]
    pub log_value: f64,
    pub terms_used: usize,
    #[serde(with = "crate::floatfmt")]
    pub truncation_bound: f64,
    pub converged: bool,
    pub divergence_reason: Option<String>,
}

impl SeriesEval {
    pub(crate) fn exact(value: f64) -> Self {
        SeriesEval {
            value,
            log_value: value.ln(),
            terms_used: 0,
            truncation_bound: 0.0,
            converged: true,
            divergence_reason: None,
        }
    }

    pub(crate) fn exact_ln(log_value: f64) -> Self {
        SeriesEval {
            value: log_value.exp(),
            log_value,
            terms_used: 0,
            truncation_bound: 0.0,
            converged: true,
            divergence_reason: None,
        }
    }

    pub(crate) fn diverged(terms_used: usize, reason: impl Into<String>) -> Self {
        SeriesEval {
            value: f64::INFINITY,
            log_value: f64::INFINITY,
            terms_used,
            truncation_bound: f64::INFINITY,
            converged: false,
            divergence_reason: Some(reason.into()),
        }
    }
}

/// Mean of e^{−xS} over simulated draws with its standard error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct McEstimate {
    pub mean: f64,
    pub std_err: f64,
    pub n: usize,
}

/// Truncated integrals ∫_ε^∞ e^{δ/s^κ} μ_t(ds) for a shrinking sequence of cut-offs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DivergenceProbe {
    pub cutoffs: Vec<f64>,
    pub values: Vec<f64>,
    pub diverges: bool,
}

impl StableSubordinator {
    pub fn new(alpha: f64, t: f64) -> Result<Self> {
        if !(alpha > 0.0 && alpha <= 1.0) {
            return domain(format!("alpha must lie in (0, 1], got {alpha}"));
        }
        if !(t > 0.0 && t.is_finite()) {
            return domain(format!("t must be positive, got {t}"));
        }
        Ok(StableSubordinator { alpha, t })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn t(&self) -> f64 {
        self.t
    }

    /// α = 1: the law is the point mass at t.
    pub fn is_degenerate(&self) -> bool {
        self.alpha == 1.0
    }

    /// t^{1/α}, the scale on which μ_t^α concentrates.
    pub fn scale(&self) -> f64 {
        self.t.powf(1.0 / self.alpha)
    }

    /// E e^{−xS} = e^{−t x^α}.
    pub fn laplace(&self, x: f64) -> Result<f64> {
        if !(x >= 0.0) {
            return domain(format!("laplace argument must be >= 0, got {x}"));
        }
        Ok((-self.t * x.powf(self.alpha)).exp())
    }

    /// ln ∫ s^{−r} μ_t^α(ds) = ln[Γ(r/α) / (α Γ(r))] − (r/α) ln t.
    pub fn ln_fractional_moment(&self, r: f64) -> Result<f64> {
        if !(r > 0.0 && r.is_finite()) {
            return domain(format!("moment order r must be > 0, got {r}"));
        }
        if self.is_degenerate() {
            return Ok(-r * self.t.ln());
        }
        let a = self.alpha;
        Ok(ln_gamma_unchecked(r / a) - a.ln() - ln_gamma_unchecked(r) - (r / a) * self.t.ln())
    }

    pub fn fractional_moment(&self, r: f64) -> Result<f64> {
        if self.is_degenerate() && r > 0.0 {
            return Ok(self.t.powf(-r));
        }
        let ln = self.ln_fractional_moment(r)?;
        let a = self.alpha;
        if r / a <= 170.0 {
            // direct gamma ratio: exact at integer arguments, e.g. 2 for α = 1/2, r = t = 1
            let v = gamma(r / a)? / (a * gamma(r)?) * self.t.powf(-r / a);
            if v.is_finite() && v > 0.0 {
                return Ok(v);
            }
        }
        Ok(ln.exp())
    }

    pub fn density(&self, s: f64) -> Result<f64> {
        self.ln_density(s).map(f64::exp)
    }

    /// Logarithm of the density of μ_t^α at s (−∞ where it underflows).
    ///
    /// α = 1/2 uses the Lévy closed form; other indices use the Zolotarev
    /// integral of the standard law with e^{−x^α} transform, rescaled by t^{1/α}.
    pub fn ln_density(&self, s: f64) -> Result<f64> {
        if !(s > 0.0) {
            return domain(format!("density argument must be > 0, got {s}"));
        }
        if self.is_degenerate() {
            return Err(Error::Degenerate(
                "the alpha = 1 subordinator is a point mass and has no density".into(),
            ));
        }
        if self.alpha == 0.5 {
            let t = self.t;
            return Ok(t.ln() - 0.5 * (4.0 * PI).ln() - 1.5 * s.ln() - t * t / (4.0 * s));
        }
        let scale = self.scale();
        Ok(zolotarev_ln_density(self.alpha, s / scale) - scale.ln())
    }

    /// One draw from μ_t^α by the Kanter (Chambers–Mallows–Stuck) representation.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        if self.is_degenerate() {
            return self.t;
        }
        let v: f64 = Open01.sample(rng);
        let u = PI * v;
        let a = self.alpha;
        let e: f64 = Open01.sample(rng);
        let w = -e.ln();
        let ln_s = (a * u).sin().ln() - u.sin().ln() / a
            + ((1.0 - a) / a) * (((1.0 - a) * u).sin().ln() - w.ln())
            + self.t.ln() / a;
        ln_s.exp()
    }

    pub fn laplace_mc<R: Rng + ?Sized>(&self, x: f64, n: usize, rng: &mut R) -> Result<McEstimate> {
        if !(x >= 0.0) {
            return domain(format!("laplace argument must be >= 0, got {x}"));
        }
        if n < 2 {
            return domain("at least two samples are needed for a standard error");
        }
        // Welford
        let (mut mean, mut m2) = (0.0, 0.0);
        for i in 0..n {
            let v = (-x * self.sample(rng)).exp();
            let d = v - mean;
            mean += d / (i + 1) as f64;
            m2 += d * (v - mean);
        }
        let var = m2 / (n - 1) as f64;
        Ok(McEstimate {
            mean,
            std_err: (var / n as f64).sqrt(),
            n,
        })
    }

    /// ∫ e^{δ/s^κ} μ_t^α(ds) summed as 1 + Σ δⁿ/n! · ∫ s^{−κn} μ_t^α(ds).
    ///
    /// Convergence is decided from the index: every δ converges for
    /// α > κ/(κ+1); at α = κ/(κ+1) the terms are asymptotically geometric with
    /// ratio q = δ(κ+1)^{κ+1}/(κ^κ t^{κ+1}) and the series converges iff q < 1;
    /// below the boundary any δ > 0 diverges.
    pub fn exp_moment(&self, delta: f64, kappa: f64, spec: &QuadratureSpec) -> Result<SeriesEval> {
        if !(delta >= 0.0 && delta.is_finite()) {
            return domain(format!("delta must be >= 0, got {delta}"));
        }
        if !(kappa > 0.0 && kappa.is_finite()) {
            return domain(format!("kappa must be > 0, got {kappa}"));
        }
        spec.validate()?;
        if delta == 0.0 {
            return Ok(SeriesEval::exact(1.0));
        }
        if self.is_degenerate() {
            return Ok(SeriesEval::exact_ln(delta * self.t.powf(-kappa)));
        }
        let boundary = kappa / (kappa + 1.0);
        let limit_ratio = match classify(self.alpha, kappa) {
            IndexRegime::Below => {
                return Ok(SeriesEval::diverged(
                    0,
                    "series diverges: alpha ≤ kappa/(kappa+1)",
                ));
            }
            IndexRegime::Boundary => {
                let q = boundary_ratio(delta, kappa, self.t);
                if q >= 1.0 {
                    return Ok(SeriesEval::diverged(
                        0,
                        format!(
                            "series diverges: alpha = kappa/(kappa+1) = {boundary} and geometric ratio q = {q} ≥ 1"
                        ),
                    ));
                }
                Some(q)
            }
            IndexRegime::Above => None,
        };
        let ln_delta = delta.ln();
        let terms = (1..).map(|n: usize| {
            let nf = n as f64;
            let ln_m = self
                .ln_fractional_moment(kappa * nf)
                .expect("positive moment order");
            nf * ln_delta - ln_gamma_unchecked(nf + 1.0) + ln_m
        });
        Ok(sum_log_series(terms, limit_ratio, spec.rel_tol))
    }

    /// The same exponential moment by quadrature against the density.
    pub fn exp_moment_quadrature(
        &self,
        delta: f64,
        kappa: f64,
        spec: &QuadratureSpec,
    ) -> Result<Estimate> {
        if self.is_degenerate() {
            return Err(Error::Degenerate("use the closed form e^{δ/t^κ}".into()));
        }
        let peak = self.scale();
        let mut scales = vec![
            peak * 1e-3,
            peak * 1e-2,
            peak * 0.1,
            peak,
            peak * 10.0,
            peak * 100.0,
        ];
        if delta > 0.0 {
            scales.push(delta.powf(1.0 / kappa));
        }
        let sub = *self;
        quad::try_integrate_positive(
            move |s| {
                let ld = sub.ln_density(s)?;
                if ld == f64::NEG_INFINITY {
                    return Ok(0.0);
                }
                let e = delta * s.powf(-kappa) + ld;
                if e > 700.0 {
                    return Err(Error::NotConvergent(format!(
                        "integrand overflows at s = {s:e}"
                    )));
                }
                Ok(e.exp())
            },
            &scales,
            spec,
        )
    }

    /// Quadrature of ∫_ε^∞ e^{δ/s^κ} μ_t(ds) for ε = t^{1/α}·10^{−k}, k = 1..=8.
    ///
    /// Declared divergent when the truncated integrals overflow or are still
    /// growing by more than 1% at the smallest cut-off after a tenfold increase overall.
    pub fn divergence_probe(
        &self,
        delta: f64,
        kappa: f64,
        spec: &QuadratureSpec,
    ) -> Result<DivergenceProbe> {
        if self.is_degenerate() {
            return Err(Error::Degenerate(
                "the point-mass moment is always finite".into(),
            ));
        }
        let peak = self.scale();
        let sub = *self;
        let mut cutoffs = Vec::new();
        let mut values = Vec::new();
        let mut overflow = false;
        for k in 1..=8 {
            let eps = peak * 10f64.powi(-k);
            let r = quad::try_integrate_upper(
                |s| {
                    let ld = sub.ln_density(s)?;
                    if ld == f64::NEG_INFINITY {
                        return Ok(0.0);
                    }
                    let e = delta * s.powf(-kappa) + ld;
                    if e > 700.0 {
                        return Err(Error::NotConvergent("overflow".into()));
                    }
                    Ok(e.exp())
                },
                eps,
                &[peak * 0.1, peak, peak * 10.0],
                spec,
            );
            cutoffs.push(eps);
            match r {
                Ok(est) => values.push(est.value),
                Err(Error::NotConvergent(_)) | Err(Error::NonFinite { .. }) => {
                    values.push(f64::INFINITY);
                    overflow = true;
                    break;
                }
                Err(e) => return Err(e),
            }
        }
        let n = values.len();
        let diverges = overflow
            || (n >= 2 && values[n - 1] > 10.0 * values[0] && values[n - 1] > 1.01 * values[n - 2]);
        Ok(DivergenceProbe {
            cutoffs,
            values,
            diverges,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum IndexRegime {
    Below,
    Boundary,
    Above,
}

pub(crate) fn classify(alpha: f64, kappa: f64) -> IndexRegime {
    let boundary = kappa / (kappa + 1.0);
    if ((alpha - boundary) / boundary).abs() <= BOUNDARY_TOL {
        IndexRegime::Boundary
    } else if alpha < boundary {
        IndexRegime::Below
    } else {
        IndexRegime::Above
    }
}

/// Limit of consecutive-term ratios of the exponential-moment series at α = κ/(κ+1).
pub fn boundary_ratio(delta: f64, kappa: f64, t: f64) -> f64 {
    delta * ((kappa + 1.0).ln() * (kappa + 1.0) - kappa * kappa.ln() - (kappa + 1.0) * t.ln()).exp()
}

/// Sums 1 + Σ_{n≥1} e^{ln_terms[n]} in log space.
///
/// `limit_ratio` is an upper bound on every later consecutive-term ratio when
/// known (the geometric boundary case); otherwise the current ratio is used once
/// ratios have started to decrease.
pub(crate) fn sum_log_series<I>(ln_terms: I, limit_ratio: Option<f64>, rel_tol: f64) -> SeriesEval
where
    I: IntoIterator<Item = f64>,
{
    // running sum = e^{m} · acc
    let mut m = 0.0f64;
    let mut acc = 1.0f64;
    let mut prev_ln: Option<f64> = None;
    let mut prev_ratio = f64::INFINITY;
    for (i, l) in ln_terms.into_iter().enumerate() {
        let n = i + 1;
        if !l.is_finite() {
            if l == f64::NEG_INFINITY {
                return SeriesEval {
                    value: (m + acc.ln()).exp(),
                    log_value: m + acc.ln(),
                    terms_used: n,
                    truncation_bound: 0.0,
                    converged: true,
                    divergence_reason: None,
                };
            }
            return SeriesEval::diverged(n, format!("term {n} overflows"));
        }
        if l > m {
            acc = acc * (m - l).exp() + 1.0;
            m = l;
        } else {
            acc += (l - m).exp();
        }
        let ln_sum = m + acc.ln();
        let ratio = prev_ln.map_or(f64::INFINITY, |p| (l - p).exp());
        prev_ln = Some(l);

        let bound_ratio = match limit_ratio {
            Some(q) => Some(q.max(ratio.min(1.0))).filter(|&r| r < 1.0),
            None if ratio < 1.0 && ratio <= prev_ratio => Some(ratio),
            None => None,
        };
        prev_ratio = ratio;
        if let Some(r) = bound_ratio {
            let ln_tail = l + (r / (1.0 - r)).ln();
            let rel_term = (l - ln_sum).exp();
            let rel_tail = (ln_tail - ln_sum).exp();
            if n >= MIN_TERMS && rel_term < rel_tol && rel_tail < rel_tol {
                return SeriesEval {
                    value: ln_sum.exp(),
                    log_value: ln_sum,
                    terms_used: n,
                    truncation_bound: ln_tail.exp(),
                    converged: true,
                    divergence_reason: None,
                };
            }
        }
        if n >= MAX_TERMS {
            return SeriesEval::diverged(n, format!("no convergence within {MAX_TERMS} terms"));
        }
    }
    let ln_sum = m + acc.ln();
    SeriesEval {
        value: ln_sum.exp(),
        log_value: ln_sum,
        terms_used: 0,
        truncation_bound: 0.0,
        converged: true,
        divergence_reason: None,
    }
}

// --- Zolotarev integral for the standard one-sided law (Laplace transform e^{−x^α}) ---
//
// f(x) = α / ((1−α)π) · x^{−1/(1−α)} ∫_0^π A(u) exp(−A(u) x^{−α/(1−α)}) du,
// A(u) = (sin αu / sin u)^{1/(1−α)} · sin((1−α)u) / sin αu,
// which increases from (1−α)α^{α/(1−α)} at u = 0 to +∞ at u = π.
// The interval is split at π/2 and the upper half is parametrised by π − u so
// that the blow-up of A near π is resolved without cancellation.

const INNER_TOL: f64 = 1e-12;
const INNER_MAX_SUBDIVISIONS: usize = 400;
const DROP_LEVELS: [f64; 2] = [4.0, 36.0];

#[derive(Clone, Copy)]
struct Zolotarev {
    alpha: f64,
}

impl Zolotarev {
    /// ln A at u = v (lower half, v ∈ (0, π/2]).
    #[inline]
    fn ln_a_lower(&self, v: f64) -> f64 {
        let a = self.alpha;
        let c = 1.0 / (1.0 - a);
        a * c * (a * v).sin().ln() - c * v.sin().ln() + ((1.0 - a) * v).sin().ln()
    }

    /// ln A at u = π − e (upper half, e ∈ (0, π/2)).
    #[inline]
    fn ln_a_upper(&self, e: f64) -> f64 {
        let a = self.alpha;
        let c = 1.0 / (1.0 - a);
        a * c * (a * PI - a * e).sin().ln() - c * e.sin().ln()
            + ((1.0 - a) * PI - (1.0 - a) * e).sin().ln()
    }

    fn ln_a0(&self) -> f64 {
        let a = self.alpha;
        (a / (1.0 - a)) * a.ln() + (1.0 - a).ln()
    }
}

/// Solves w − z e^w = level for w on the side of the maximiser given by `upper`.
fn level_crossing(ln_z: f64, level: f64, upper: bool) -> f64 {
    // h(w) = w − e^{w + ln z} is concave with max at w* = −ln z
    let w_star = -ln_z;
    let h = |w: f64| w - (w + ln_z).exp();
    let (mut lo, mut hi) = if upper {
        let mut hi = w_star + 1.0;
        while h(hi) > level {
            hi = w_star + 2.0 * (hi - w_star);
        }
        (w_star, hi)
    } else {
        let mut lo = w_star - 1.0;
        while h(lo) > level {
            lo = w_star - 2.0 * (w_star - lo);
        }
        (lo, w_star)
    };
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        let inside = h(mid) > level;
        if inside == upper {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo <= 1e-3 * (1.0 + mid.abs()) {
            break;
        }
    }
    0.5 * (lo + hi)
}

/// Finds v in (0, π/2] with g(v) = target, for g monotone with the given direction.
fn invert_monotone<G: Fn(f64) -> f64>(g: G, target: f64, increasing: bool) -> Option<f64> {
    // bisection on ln v over [ln 1e-300, ln(π/2)]
    let (mut lo, mut hi) = (-690.0f64, (PI / 2.0).ln());
    let at = |lv: f64| g(lv.exp());
    let (glo, ghi) = (at(lo), at(hi));
    let inside = if increasing {
        glo <= target && target <= ghi
    } else {
        ghi <= target && target <= glo
    };
    if !inside {
        return None;
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if (at(mid) < target) == increasing {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo < 1e-3 {
            break;
        }
    }
    Some((0.5 * (lo + hi)).exp())
}

pub(crate) fn zolotarev_ln_density(alpha: f64, x: f64) -> f64 {
    let zl = Zolotarev { alpha };
    let c = 1.0 / (1.0 - alpha);
    let ln_x = x.ln();
    let ln_z = -alpha * c * ln_x;
    let ln_pref = (alpha * c / PI).ln() - c * ln_x;

    // integrand exponent φ = ln A − A z as a function of w = ln A
    let phi_w = |w: f64| w - (w + ln_z).exp();
    let ln_a0 = zl.ln_a0();
    let (w_peak, phi_max) = if ln_a0 + ln_z >= 0.0 {
        (ln_a0, phi_w(ln_a0))
    } else {
        (-ln_z, -ln_z - 1.0)
    };
    if phi_max + ln_pref < -745.0 - 50.0 {
        return f64::NEG_INFINITY;
    }

    // breakpoints where φ has dropped by the given levels on either side of the peak
    let mut w_marks = vec![w_peak];
    for &d in &DROP_LEVELS {
        let level = phi_max - d;
        if w_peak > ln_a0 {
            let below = level_crossing(ln_z, level, false);
            if below > ln_a0 {
                w_marks.push(below);
            }
        }
        w_marks.push(level_crossing(ln_z, level, true));
    }
    let w_mid = zl.ln_a_lower(PI / 2.0);
    let mut lower_breaks = Vec::new();
    let mut upper_breaks = Vec::new();
    for &w in &w_marks {
        if w <= w_mid {
            if let Some(v) = invert_monotone(|v| zl.ln_a_lower(v), w, true) {
                lower_breaks.push(v);
            }
        } else if let Some(e) = invert_monotone(|e| zl.ln_a_upper(e), w, false) {
            upper_breaks.push(e);
        }
    }

    let spec = QuadratureSpec {
        rel_tol: INNER_TOL,
        abs_tol: 1e-300,
        max_subdivisions: INNER_MAX_SUBDIVISIONS,
    };
    let integrand = |w: f64| {
        let v = phi_w(w) - phi_max;
        if v < -745.0 {
            0.0
        } else {
            v.exp()
        }
    };
    let lower = quad::try_integrate(
        |v| Ok(integrand(zl.ln_a_lower(v))),
        0.0,
        PI / 2.0,
        &lower_breaks,
        &spec,
    );
    let upper = quad::try_integrate(
        |e| Ok(integrand(zl.ln_a_upper(e))),
        0.0,
        PI / 2.0,
        &upper_breaks,
        &spec,
    );
    let total = match (lower, upper) {
        (Ok(l), Ok(u)) => l.value + u.value,
        (Err(Error::Quadrature { estimate: l, .. }), Ok(u)) => l + u.value,
        (Ok(l), Err(Error::Quadrature { estimate: u, .. })) => l.value + u,
        (
            Err(Error::Quadrature { estimate: l, .. }),
            Err(Error::Quadrature { estimate: u, .. }),
        ) => l + u,
        _ => f64::NAN,
    };
    ln_pref + phi_max + total.ln()
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn sub(alpha: f64, t: f64) -> StableSubordinator {
        StableSubordinator::new(alpha, t).unwrap()
    }

    #[test]
    fn constructor_validates() {
        assert!(StableSubordinator::new(0.0, 1.0).is_err());
        assert!(StableSubordinator::new(1.2, 1.0).is_err());
        assert!(StableSubordinator::new(0.5, 0.0).is_err());
        assert!(StableSubordinator::new(1.0, 1.0).unwrap().is_degenerate());
    }

    #[test]
    fn laplace_examples() {
        assert_eq!(sub(0.3, 2.0).laplace(0.0).unwrap(), 1.0);
        assert!((sub(1.0, 2.0).laplace(3.0).unwrap() - (-6f64).exp()).abs() < 1e-18);
        assert!((sub(0.5, 1.0).laplace(4.0).unwrap() - (-2f64).exp()).abs() < 1e-16);
        assert!(sub(0.5, 1.0).laplace(-1.0).is_err());
    }

    #[test]
    fn moment_examples() {
        assert!((sub(1.0, 2.0).fractional_moment(1.0).unwrap() - 0.5).abs() < 1e-15);
        assert!((sub(0.5, 1.0).fractional_moment(1.0).unwrap() - 2.0).abs() < 1e-13);
        assert!((sub(0.5, 2.0).fractional_moment(2.0).unwrap() - 0.75).abs() < 1e-13);
        assert!(sub(0.5, 2.0).fractional_moment(0.0).is_err());
    }

    #[test]
    fn density_errors() {
        assert!(matches!(
            sub(1.0, 1.0).density(1.0),
            Err(Error::Degenerate(_))
        ));
        assert!(matches!(sub(0.5, 1.0).density(0.0), Err(Error::Domain(_))));
        assert!(matches!(sub(0.7, 1.0).density(-2.0), Err(Error::Domain(_))));
    }

    #[test]
    fn levy_density_value() {
        let d = sub(0.5, 1.0).density(1.0).unwrap();
        let expected = (4.0 * PI).powf(-0.5) * (-0.25f64).exp();
        assert!((d - expected).abs() < 1e-15);
        assert!((d - 0.21970).abs() < 5e-6);
    }

    #[test]
    fn zolotarev_matches_levy_at_one_half() {
        // the general representation evaluated at α = 1/2 against the closed form
        // (standard law: t = 1)
        for &x in &[1e-3, 0.02, 0.1, 0.25, 1.0, 3.0, 50.0, 1e4, 1e12] {
            let closed = -0.5 * (4.0 * PI).ln() - 1.5 * f64::ln(x) - 1.0 / (4.0 * x);
            let z = zolotarev_ln_density(0.5, x);
            assert!((z - closed).abs() < 1e-11, "x={x}: {z} vs {closed}");
        }
    }

    #[test]
    fn zolotarev_tail_matches_series() {
        // f(x) = (1/π) Σ_k (−1)^{k+1} Γ(kα+1)/k! sin(kπα) x^{−kα−1}
        for &alpha in &[0.3, 0.7, 0.9] {
            for &x in &[1e3, 1e6, 1e20, 1e100] {
                let mut s = 0.0;
                for k in 1..30 {
                    let kf = k as f64;
                    let lg = ln_gamma_unchecked(kf * alpha + 1.0) - ln_gamma_unchecked(kf + 1.0);
                    let sign = if k % 2 == 1 { 1.0 } else { -1.0 };
                    s += sign
                        * (lg - (kf * alpha + 1.0) * f64::ln(x)).exp()
                        * (kf * PI * alpha).sin();
                }
                let series = (s / PI).ln();
                let z = zolotarev_ln_density(alpha, x);
                assert!(
                    (z - series).abs() < 1e-9,
                    "alpha={alpha} x={x}: {z} vs {series}"
                );
            }
        }
    }

    #[test]
    fn tiny_arguments_underflow_to_zero() {
        assert_eq!(sub(0.3, 1.0).density(1e-30).unwrap(), 0.0);
        assert!(sub(0.7, 1.0).density(1e-3).unwrap() >= 0.0);
    }

    #[test]
    fn degenerate_sampling_is_t() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let s = sub(1.0, 2.5);
        for _ in 0..10 {
            assert_eq!(s.sample(&mut rng), 2.5);
        }
    }

    #[test]
    fn samples_are_positive_and_seeded() {
        let s = sub(0.4, 1.5);
        let draw = |seed| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            (0..100).map(|_| s.sample(&mut rng)).collect::<Vec<_>>()
        };
        let a = draw(7);
        assert!(a.iter().all(|&x| x > 0.0 && x.is_finite()));
        assert_eq!(a, draw(7));
        assert_ne!(a, draw(8));
    }

    #[test]
    fn exp_moment_trivial_cases() {
        let spec = QuadratureSpec::default();
        let e = sub(0.6, 1.0).exp_moment(0.0, 1.0, &spec).unwrap();
        assert!(e.converged && e.value == 1.0);
        let e = sub(1.0, 2.0).exp_moment(0.7, 1.5, &spec).unwrap();
        assert!((e.value - (0.7 * 2f64.powf(-1.5)).exp()).abs() < 1e-15);
    }

    #[test]
    fn exp_moment_closed_form_at_one_half() {
        // κ = 1, α = 1/2: ∫ e^{δ/s} μ_t(ds) = (1 − 4δ/t²)^{−1/2}
        let spec = QuadratureSpec::default();
        for &(t, delta) in &[(2.0, 0.5), (1.0, 0.2), (1.0, 0.249), (0.5, 0.01)] {
            let e = sub(0.5, t).exp_moment(delta, 1.0, &spec).unwrap();
            let exact = (1.0 - 4.0 * delta / (t * t)).powf(-0.5);
            assert!(e.converged);
            assert!(
                ((e.value - exact) / exact).abs() < 1e-9,
                "t={t} δ={delta}: {} vs {exact}",
                e.value
            );
            assert!(e.truncation_bound < spec.rel_tol * e.value);
        }
    }

    #[test]
    fn exp_moment_divergence_verdicts() {
        let spec = QuadratureSpec::default();
        let e = sub(0.4, 1.0).exp_moment(1.0, 1.0, &spec).unwrap();
        assert!(!e.converged && e.value.is_infinite());
        assert_eq!(
            e.divergence_reason.as_deref(),
            Some("series diverges: alpha ≤ kappa/(kappa+1)")
        );
        let e = sub(0.5, 1.0).exp_moment(0.25, 1.0, &spec).unwrap();
        assert!(!e.converged);
        let e = sub(0.5, 1.0).exp_moment(0.2499, 1.0, &spec).unwrap();
        assert!(e.converged);
    }

    #[test]
    fn exp_moment_large_argument_in_log_domain() {
        let spec = QuadratureSpec::default();
        // δ t^{−κ/α} = 10^3 at α = 0.9
        let e = sub(0.9, 1.0).exp_moment(1000.0, 1.0, &spec).unwrap();
        assert!(e.converged);
        assert!(e.log_value > 1000.0 && e.log_value.is_finite());
    }

    #[test]
    fn boundary_ratio_kappa_one() {
        assert!((boundary_ratio(0.5, 1.0, 2.0) - 0.5).abs() < 1e-15);
        assert!((boundary_ratio(0.6, 1.0, 1.0) - 2.4).abs() < 1e-14);
    }
}
