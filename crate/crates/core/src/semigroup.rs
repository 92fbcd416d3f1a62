//! Base semigroups P_s (Gaussian heat kernel on R^d, one-dimensional
//! Ornstein–Uhlenbeck) and their subordinated versions ∫ P_s μ_t(ds).

use std::f64::consts::{FRAC_1_SQRT_2, PI};

use serde::{Deserialize, Serialize};
use statrs::function::erf::erfc;

use crate::bounds::HarnackProfile;
use crate::error::{domain, Error, Result};
use crate::quad::{self, QuadratureSpec};
use crate::specfun::ln_gamma_unchecked;
use crate::subordinator::StableSubordinator;

pub const MAX_DIM: usize = 3;

/// A point of R^d, d ≤ 3.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Point(Vec<f64>);

impl Point {
    pub fn new(coords: Vec<f64>) -> Result<Self> {
        if coords.is_empty() || coords.len() > MAX_DIM {
            return domain(format!(
                "points must have 1 to {MAX_DIM} coordinates, got {}",
                coords.len()
            ));
        }
        if coords.iter().any(|c| !c.is_finite()) {
            return domain("point coordinates must be finite");
        }
        Ok(Point(coords))
    }

    pub fn scalar(x: f64) -> Self {
        Point(vec![x])
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[f64] {
        &self.0
    }

    pub fn dist_sq(&self, other: &Point) -> f64 {
        self.0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| (a - b) * (a - b))
            .sum()
    }

    pub fn validate(&self) -> Result<()> {
        Point::new(self.0.clone()).map(|_| ())
    }
}

impl From<f64> for Point {
    fn from(x: f64) -> Self {
        Point::scalar(x)
    }
}

impl std::fmt::Display for Point {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|c| format!("{c}")).collect();
        if parts.len() == 1 {
            write!(f, "{}", parts[0])
        } else {
            write!(f, "({})", parts.join(" "))
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum BaseKernel {
    /// Semigroup of Δ on R^d: p_s(x, y) = (4πs)^{−d/2} e^{−|x−y|²/(4s)}.
    GaussHeat { d: usize },
    /// Semigroup of Δ − x·∇ on R: N(e^{−s}x, 1 − e^{−2s}), invariant law N(0, 1).
    #[serde(rename = "ou1d")]
    Ou1d,
}

/// Φ(b) − Φ(a) for a ≤ b, accurate in both tails.
pub(crate) fn normal_interval(a: f64, b: f64) -> f64 {
    if a >= 0.0 {
        0.5 * (erfc(a * FRAC_1_SQRT_2) - erfc(b * FRAC_1_SQRT_2))
    } else if b <= 0.0 {
        0.5 * (erfc(-b * FRAC_1_SQRT_2) - erfc(-a * FRAC_1_SQRT_2))
    } else {
        1.0 - 0.5 * erfc(-a * FRAC_1_SQRT_2) - 0.5 * erfc(b * FRAC_1_SQRT_2)
    }
}

pub(crate) fn normal_cdf(x: f64) -> f64 {
    0.5 * erfc(-x * FRAC_1_SQRT_2)
}

/// ln(Φ(x)/φ(x)) for x ≤ 0, the log Mills ratio, finite where Φ underflows.
pub(crate) fn ln_mills_ratio(x: f64) -> f64 {
    if x > -30.0 {
        return normal_cdf(x).ln() - ln_normal_density(x, 0.0, 1.0);
    }
    // Φ(x)/φ(x) = (1 − 1/x² + 3/x⁴ − 15/x⁶ + 105/x⁸ − …)/|x|
    let z2 = 1.0 / (x * x);
    let series = 1.0 - z2 * (1.0 - 3.0 * z2 * (1.0 - 5.0 * z2 * (1.0 - 7.0 * z2)));
    series.ln() - (-x).ln()
}

pub(crate) fn ln_normal_density(x: f64, mean: f64, var: f64) -> f64 {
    -0.5 * (2.0 * PI * var).ln() - (x - mean) * (x - mean) / (2.0 * var)
}

impl BaseKernel {
    pub fn validate(&self) -> Result<()> {
        match *self {
            BaseKernel::GaussHeat { d } if d == 0 || d > MAX_DIM => domain(format!(
                "GaussHeat dimension must be 1..={MAX_DIM}, got {d}"
            )),
            _ => Ok(()),
        }
    }

    pub fn dim(&self) -> usize {
        match *self {
            BaseKernel::GaussHeat { d } => d,
            BaseKernel::Ou1d => 1,
        }
    }

    /// K in the curvature condition Ric − ∇Z ≥ −K.
    pub fn curvature_k(&self) -> f64 {
        match self {
            BaseKernel::GaussHeat { .. } => 0.0,
            BaseKernel::Ou1d => -1.0,
        }
    }

    pub fn label(&self) -> String {
        match self {
            BaseKernel::GaussHeat { d } => format!("gauss_heat{d}"),
            BaseKernel::Ou1d => "ou1d".into(),
        }
    }

    fn check_point(&self, x: &Point) -> Result<()> {
        if x.dim() != self.dim() {
            return domain(format!(
                "point {x} has dimension {} but the {} kernel has dimension {}",
                x.dim(),
                self.label(),
                self.dim()
            ));
        }
        Ok(())
    }

    /// Mean and per-coordinate variance of the transition law from x at time s.
    pub fn transition(&self, s: f64, x: &Point) -> (Vec<f64>, f64) {
        match self {
            BaseKernel::GaussHeat { .. } => (x.0.clone(), 2.0 * s),
            BaseKernel::Ou1d => (vec![(-s).exp() * x.0[0]], -(-2.0 * s).exp_m1()),
        }
    }

    pub fn ln_kernel_density(&self, s: f64, x: &Point, y: &Point) -> Result<f64> {
        if !(s > 0.0) {
            return domain(format!("time must be > 0, got {s}"));
        }
        self.check_point(x)?;
        self.check_point(y)?;
        let (m, v) = self.transition(s, x);
        Ok(m.iter()
            .zip(&y.0)
            .map(|(mi, yi)| ln_normal_density(*yi, *mi, v))
            .sum())
    }

    pub fn kernel_density(&self, s: f64, x: &Point, y: &Point) -> Result<f64> {
        self.ln_kernel_density(s, x, y).map(f64::exp)
    }

    /// Density of the invariant law (OU only).
    pub fn invariant_density(&self, y: f64) -> Result<f64> {
        match self {
            BaseKernel::Ou1d => Ok(ln_normal_density(y, 0.0, 1.0).exp()),
            _ => domain("Lebesgue measure on R^d has no normalised density"),
        }
    }

    /// P_s f(x).
    pub fn apply(&self, f: &TestFunction, s: f64, x: &Point, spec: &QuadratureSpec) -> Result<f64> {
        if !(s > 0.0) {
            return domain(format!("time must be > 0, got {s}"));
        }
        self.check_point(x)?;
        f.check_dim(self.dim())?;
        let (m, v) = self.transition(s, x);
        gaussian_expectation(f, &m, v, spec)
    }

    /// Harnack profile H(ε + s^{−1}) that dominates the base Harnack exponent
    /// at every s > 0.
    pub fn harnack_profile(&self, p: f64, rho_sq: f64) -> Result<HarnackProfile> {
        if !(p > 1.0) {
            return domain(format!("p must be > 1, got {p}"));
        }
        let h = p * rho_sq / (4.0 * (p - 1.0));
        match self {
            // pρ²/(4(p−1)s)
            BaseKernel::GaussHeat { .. } => HarnackProfile::new(1.0, 0.0, h, 0.0),
            // pρ²/(2(p−1)(1−e^{−2s})) ≤ pρ²/(4(p−1))·(2 + 1/s)
            BaseKernel::Ou1d => HarnackProfile::new(1.0, 2.0, h, -1.0),
        }
    }

    /// Log-Harnack profile: P_s log f(x) ≤ log P_s f(y) + H(ε + s^{−1}).
    pub fn log_harnack_profile(&self, rho_sq: f64) -> Result<HarnackProfile> {
        // Gauss: ρ²/(4s); OU: ρ²/(2(e^{2s}−1)) ≤ ρ²/(4s)
        HarnackProfile::new(1.0, 0.0, rho_sq / 4.0, self.curvature_k())
    }
}

/// Bounded non-negative test functions on R^d.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum TestFunction {
    Constant {
        value: f64,
    },
    /// e^{−|y−c|²/(2w²)}.
    GaussBump {
        center: Point,
        width: f64,
    },
    /// Indicator of the box Π[lo_i, hi_i].
    Indicator {
        lo: Point,
        hi: Point,
    },
    /// e^{λ·y}, capped at `cap` when given.
    ExpAffine {
        slope: Point,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        cap: Option<f64>,
    },
    /// floor + base, with floor ≥ 1.
    ShiftedForLog {
        base: Box<TestFunction>,
        floor: f64,
    },
    /// N(mean, std²)/N(0, 1) on R, a probability density w.r.t. the standard Gaussian.
    GaussianRatio {
        mean: f64,
        std: f64,
    },
    Power {
        base: Box<TestFunction>,
        exponent: f64,
    },
    Log {
        base: Box<TestFunction>,
    },
}

impl TestFunction {
    pub fn constant(value: f64) -> Self {
        TestFunction::Constant { value }
    }

    pub fn bump(center: f64, width: f64) -> Self {
        TestFunction::GaussBump {
            center: Point::scalar(center),
            width,
        }
    }

    pub fn indicator(lo: f64, hi: f64) -> Self {
        TestFunction::Indicator {
            lo: Point::scalar(lo),
            hi: Point::scalar(hi),
        }
    }

    pub fn exp_affine(slope: f64, cap: Option<f64>) -> Self {
        TestFunction::ExpAffine {
            slope: Point::scalar(slope),
            cap,
        }
    }

    pub fn shifted(base: TestFunction, floor: f64) -> Self {
        TestFunction::ShiftedForLog {
            base: Box::new(base),
            floor,
        }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            TestFunction::Constant { value } if !(*value >= 0.0 && value.is_finite()) => {
                domain(format!("constant must be finite and >= 0, got {value}"))
            }
            TestFunction::GaussBump { center, width } => {
                center.validate()?;
                if !(*width > 0.0 && width.is_finite()) {
                    return domain(format!("bump width must be > 0, got {width}"));
                }
                Ok(())
            }
            TestFunction::Indicator { lo, hi } => {
                lo.validate()?;
                hi.validate()?;
                if lo.dim() != hi.dim() {
                    return domain("indicator corners differ in dimension");
                }
                if lo.0.iter().zip(&hi.0).any(|(a, b)| a >= b) {
                    return domain("indicator box needs lo < hi in every coordinate");
                }
                Ok(())
            }
            TestFunction::ExpAffine { slope, cap } => {
                slope.validate()?;
                match cap {
                    Some(c) if !(*c > 0.0 && c.is_finite()) => {
                        domain(format!("cap must be > 0, got {c}"))
                    }
                    _ => Ok(()),
                }
            }
            TestFunction::ShiftedForLog { base, floor } => {
                base.validate()?;
                if !(*floor >= 1.0 && floor.is_finite()) {
                    return domain(format!("log test functions need floor >= 1, got {floor}"));
                }
                Ok(())
            }
            TestFunction::GaussianRatio { mean, std } => {
                if !mean.is_finite() {
                    return domain("GaussianRatio mean must be finite");
                }
                if !(*std > 0.0 && *std <= 1.0) {
                    return domain(format!(
                        "GaussianRatio std must lie in (0, 1] to stay bounded, got {std}"
                    ));
                }
                Ok(())
            }
            TestFunction::Power { base, exponent } => {
                base.validate()?;
                if !(*exponent > 0.0 && exponent.is_finite()) {
                    return domain(format!("power exponent must be > 0, got {exponent}"));
                }
                Ok(())
            }
            TestFunction::Log { base } => {
                base.validate()?;
                if base.lower_bound() < 1.0 {
                    return domain("log f requires f >= 1");
                }
                Ok(())
            }
            _ => Ok(()),
        }
    }

    /// Dimension fixed by the function's parameters, if any.
    pub fn dim(&self) -> Option<usize> {
        match self {
            TestFunction::Constant { .. } => None,
            TestFunction::GaussBump { center, .. } => Some(center.dim()),
            TestFunction::Indicator { lo, .. } => Some(lo.dim()),
            TestFunction::ExpAffine { slope, .. } => Some(slope.dim()),
            TestFunction::GaussianRatio { .. } => Some(1),
            TestFunction::ShiftedForLog { base, .. }
            | TestFunction::Power { base, .. }
            | TestFunction::Log { base } => base.dim(),
        }
    }

    fn check_dim(&self, d: usize) -> Result<()> {
        match self.dim() {
            Some(k) if k != d => domain(format!(
                "test function has dimension {k}, kernel has dimension {d}"
            )),
            _ => Ok(()),
        }
    }

    /// Whether P_s f has a closed form for the Gaussian transition laws.
    pub fn has_closed_form(&self) -> bool {
        match self {
            TestFunction::Power { .. } | TestFunction::Log { .. } => false,
            TestFunction::ShiftedForLog { base, .. } => base.has_closed_form(),
            _ => true,
        }
    }

    /// A lower bound of f over the whole space.
    pub fn lower_bound(&self) -> f64 {
        match self {
            TestFunction::Constant { value } => *value,
            TestFunction::ShiftedForLog { base, floor } => floor + base.lower_bound(),
            TestFunction::Power { base, exponent } => base.lower_bound().powf(*exponent),
            TestFunction::Log { base } => base.lower_bound().ln(),
            _ => 0.0,
        }
    }

    pub fn label(&self) -> String {
        match self {
            TestFunction::Constant { value } => format!("const({value})"),
            TestFunction::GaussBump { center, width } => format!("bump({center};{width})"),
            TestFunction::Indicator { lo, hi } => format!("ind({lo};{hi})"),
            TestFunction::ExpAffine { slope, cap: None } => format!("exp({slope})"),
            TestFunction::ExpAffine {
                slope,
                cap: Some(c),
            } => format!("exp({slope};cap {c})"),
            TestFunction::ShiftedForLog { base, floor } => format!("{floor}+{}", base.label()),
            TestFunction::GaussianRatio { mean, std } => format!("gratio({mean};{std})"),
            TestFunction::Power { base, exponent } => format!("{}^{exponent}", base.label()),
            TestFunction::Log { base } => format!("log({})", base.label()),
        }
    }

    pub fn eval(&self, y: &[f64]) -> f64 {
        match self {
            TestFunction::Constant { value } => *value,
            TestFunction::GaussBump { center, width } => {
                let r2: f64 = center.0.iter().zip(y).map(|(c, v)| (v - c) * (v - c)).sum();
                (-r2 / (2.0 * width * width)).exp()
            }
            TestFunction::Indicator { lo, hi } => {
                let inside = y
                    .iter()
                    .zip(lo.0.iter().zip(&hi.0))
                    .all(|(v, (a, b))| a <= v && v <= b);
                if inside {
                    1.0
                } else {
                    0.0
                }
            }
            TestFunction::ExpAffine { slope, cap } => {
                let l: f64 = slope.0.iter().zip(y).map(|(a, b)| a * b).sum();
                match cap {
                    Some(c) => l.exp().min(*c),
                    None => l.exp(),
                }
            }
            TestFunction::ShiftedForLog { base, floor } => floor + base.eval(y),
            TestFunction::GaussianRatio { mean, std } => {
                (ln_normal_density(y[0], *mean, std * std) - ln_normal_density(y[0], 0.0, 1.0))
                    .exp()
            }
            TestFunction::Power { base, exponent } => base.eval(y).powf(*exponent),
            TestFunction::Log { base } => base.eval(y).ln(),
        }
    }

    /// f^p, kept in closed form where the family is closed under powers.
    pub fn powf(&self, p: f64) -> TestFunction {
        match self {
            TestFunction::Constant { value } => TestFunction::Constant {
                value: value.powf(p),
            },
            TestFunction::GaussBump { center, width } => TestFunction::GaussBump {
                center: center.clone(),
                width: width / p.sqrt(),
            },
            TestFunction::Indicator { .. } => self.clone(),
            TestFunction::ExpAffine { slope, cap } => TestFunction::ExpAffine {
                slope: Point(slope.0.iter().map(|a| a * p).collect()),
                cap: cap.map(|c| c.powf(p)),
            },
            TestFunction::Power { base, exponent } => TestFunction::Power {
                base: base.clone(),
                exponent: exponent * p,
            },
            _ => TestFunction::Power {
                base: Box::new(self.clone()),
                exponent: p,
            },
        }
    }

    pub fn ln(&self) -> TestFunction {
        match self {
            TestFunction::Constant { value } => TestFunction::Constant { value: value.ln() },
            _ => TestFunction::Log {
                base: Box::new(self.clone()),
            },
        }
    }

    /// One-dimensional points where f or its derivative changes abruptly.
    pub fn features(&self) -> Vec<f64> {
        match self {
            TestFunction::GaussBump { center, width } => {
                let c = center.0[0];
                vec![c - 3.0 * width, c, c + 3.0 * width]
            }
            TestFunction::Indicator { lo, hi } => vec![lo.0[0], hi.0[0]],
            TestFunction::ExpAffine {
                slope,
                cap: Some(c),
            } if slope.0[0] != 0.0 => vec![c.ln() / slope.0[0]],
            TestFunction::GaussianRatio { mean, std } => {
                vec![mean - 3.0 * std, *mean, mean + 3.0 * std]
            }
            TestFunction::ShiftedForLog { base, .. }
            | TestFunction::Power { base, .. }
            | TestFunction::Log { base } => base.features(),
            _ => Vec::new(),
        }
    }
}

/// E f(m + √v Z) for Z standard normal in R^d.
pub(crate) fn gaussian_expectation(
    f: &TestFunction,
    m: &[f64],
    v: f64,
    spec: &QuadratureSpec,
) -> Result<f64> {
    match f {
        TestFunction::Constant { value } => Ok(*value),
        TestFunction::GaussBump { center, width } => {
            let w2 = width * width;
            let mut ln = 0.0;
            for (mi, ci) in m.iter().zip(&center.0) {
                ln += 0.5 * (w2 / (w2 + v)).ln() - (mi - ci) * (mi - ci) / (2.0 * (w2 + v));
            }
            Ok(ln.exp())
        }
        TestFunction::Indicator { lo, hi } => {
            let sd = v.sqrt();
            Ok(m.iter()
                .zip(lo.0.iter().zip(&hi.0))
                .map(|(mi, (a, b))| normal_interval((a - mi) / sd, (b - mi) / sd))
                .product())
        }
        TestFunction::ExpAffine { slope, cap } => {
            // λ·X ~ N(λ·m, |λ|² v)
            let mu: f64 = slope.0.iter().zip(m).map(|(a, b)| a * b).sum();
            let s2: f64 = slope.0.iter().map(|a| a * a).sum::<f64>() * v;
            match cap {
                None => Ok((mu + 0.5 * s2).exp()),
                Some(c) if s2 == 0.0 => Ok(mu.exp().min(*c)),
                Some(c) => {
                    // E min(e^Y, c) = e^{μ+σ²/2} Φ((ln c − μ − σ²)/σ) + c (1 − Φ((ln c − μ)/σ))
                    let sd = s2.sqrt();
                    let k = c.ln();
                    let z = (k - mu - s2) / sd;
                    let below = if z >= 0.0 {
                        (mu + 0.5 * s2).exp() * normal_cdf(z)
                    } else {
                        // e^{μ+σ²/2}φ(z) = e^{k − (k−μ)²/(2σ²)}/√(2π) avoids cancelling huge exponents
                        (k - (k - mu).powi(2) / (2.0 * s2)
                            + ln_normal_density(0.0, 0.0, 1.0)
                            + ln_mills_ratio(z))
                        .exp()
                    };
                    let above = c * normal_cdf(-(k - mu) / sd);
                    Ok(below + above)
                }
            }
        }
        TestFunction::ShiftedForLog { base, floor } => {
            Ok(floor + gaussian_expectation(base, m, v, spec)?)
        }
        TestFunction::GaussianRatio { mean, std } => {
            // ∫ N(y; m, v) N(y; μ, σ²)/φ(y) dy = ∫ exp(−A y² + B y − C) dy / (√(2π v) σ)
            let s2 = std * std;
            let a = 0.5 * (1.0 / v + 1.0 / s2 - 1.0);
            if a <= 0.0 {
                return Ok(f64::INFINITY);
            }
            let b = m[0] / v + mean / s2;
            let c = m[0] * m[0] / (2.0 * v) + mean * mean / (2.0 * s2);
            let ln =
                0.5 * (PI / a).ln() + b * b / (4.0 * a) - c - 0.5 * (2.0 * PI * v).ln() - std.ln();
            Ok(ln.exp())
        }
        _ => {
            if m.len() != 1 {
                return Err(Error::Domain(format!(
                    "{} has no closed form; quadrature supports d = 1 only",
                    f.label()
                )));
            }
            let sd = v.sqrt();
            let mut breaks = vec![-8.0, -3.0, 0.0, 3.0, 8.0];
            breaks.extend(
                f.features()
                    .into_iter()
                    .map(|y| (y - m[0]) / sd)
                    .filter(|z| z.abs() < 40.0),
            );
            let est = quad::try_integrate_line(
                |z| {
                    let w = (-0.5 * z * z).exp();
                    if w == 0.0 {
                        return Ok(0.0);
                    }
                    Ok(w * f.eval(&[m[0] + sd * z]))
                },
                &breaks,
                spec,
            )?;
            Ok(est.value / (2.0 * PI).sqrt())
        }
    }
}

fn outer_scales(sub: &StableSubordinator, extra: &[f64]) -> Vec<f64> {
    let sc = sub.scale();
    let mut v = vec![sc * 1e-2, sc * 0.1, sc, sc * 10.0, sc * 100.0];
    v.extend(extra.iter().copied().filter(|s| *s > 0.0 && s.is_finite()));
    v
}

/// Squared distances from x at which a Gaussian in s starts to see the features of f.
fn feature_scales(f: &TestFunction, x: &Point) -> Vec<f64> {
    if x.dim() != 1 {
        return Vec::new();
    }
    f.features()
        .into_iter()
        .map(|y| (y - x.0[0]).powi(2) / 4.0)
        .collect()
}

/// P_t^α f(x) = ∫ P_s f(x) μ_t^α(ds).
pub fn subordinated_apply(
    base: &BaseKernel,
    sub: &StableSubordinator,
    f: &TestFunction,
    x: &Point,
    spec: &QuadratureSpec,
) -> Result<f64> {
    if sub.is_degenerate() {
        return base.apply(f, sub.t(), x, spec);
    }
    if let TestFunction::Constant { value } = f {
        return Ok(*value);
    }
    base.check_point(x)?;
    f.check_dim(base.dim())?;
    let inner = spec.nested(0.1);
    let scales = outer_scales(sub, &feature_scales(f, x));
    let est = quad::try_integrate_positive(
        |s| {
            let ld = sub.ln_density(s)?;
            if ld < -745.0 {
                return Ok(0.0);
            }
            Ok(base.apply(f, s, x, &inner)? * ld.exp())
        },
        &scales,
        spec,
    )?;
    Ok(est.value)
}

/// p_t^α(x, y) = ∫ p_s(x, y) μ_t^α(ds), computed in log space.
pub fn subordinated_density(
    base: &BaseKernel,
    sub: &StableSubordinator,
    x: &Point,
    y: &Point,
    spec: &QuadratureSpec,
) -> Result<f64> {
    if sub.is_degenerate() {
        return base.kernel_density(sub.t(), x, y);
    }
    base.check_point(x)?;
    base.check_point(y)?;
    let r2 = x.dist_sq(y);
    let scales = outer_scales(sub, &[r2 / 4.0, r2 / (2.0 * base.dim() as f64)]);
    let est = quad::try_integrate_positive(
        |s| {
            let l = sub.ln_density(s)? + base.ln_kernel_density(s, x, y)?;
            Ok(if l < -745.0 { 0.0 } else { l.exp() })
        },
        &scales,
        spec,
    )?;
    Ok(est.value)
}

/// Γ((d+1)/2)/π^{(d+1)/2} · t/(t² + |x−y|²)^{(d+1)/2}, the kernel of e^{−t(−Δ)^{1/2}}.
pub fn cauchy_closed_form(d: usize, t: f64, x: &Point, y: &Point) -> Result<f64> {
    if !(t > 0.0) {
        return domain(format!("t must be > 0, got {t}"));
    }
    if x.dim() != d || y.dim() != d {
        return domain(format!("points must have dimension {d}"));
    }
    let h = (d as f64 + 1.0) / 2.0;
    let ln = ln_gamma_unchecked(h) - h * PI.ln() + t.ln() - h * (t * t + x.dist_sq(y)).ln();
    Ok(ln.exp())
}

/// p_t^α(x, x) for the heat kernel.
pub fn ondiag(
    base: &BaseKernel,
    sub: &StableSubordinator,
    x: &Point,
    spec: &QuadratureSpec,
) -> Result<f64> {
    if !matches!(base, BaseKernel::GaussHeat { .. }) {
        return domain("on-diagonal values are defined here for the heat kernel only");
    }
    subordinated_density(base, sub, x, x, spec)
}

/// (4π)^{−d/2} Γ(d/(2α))/(αΓ(d/2)) t^{−d/(2α)}: the heat-kernel diagonal averaged against μ_t^α.
pub fn ondiag_closed_form(d: usize, alpha: f64, t: f64) -> Result<f64> {
    let sub = StableSubordinator::new(alpha, t)?;
    let half = d as f64 / 2.0;
    Ok((-half * (4.0 * PI).ln()).exp() * sub.fractional_moment(half)?)
}
