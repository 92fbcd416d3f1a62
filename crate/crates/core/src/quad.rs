//! Globally adaptive Gauss–Kronrod (10/21-point) quadrature.
//!
//! Finite intervals are bisected by largest local error. Semi-infinite tails
//! are folded onto (0, 1] with x = a ± (1 − τ)/τ, and every piece of a
//! problem competes in one shared priority queue so the error budget goes
//! wherever it is needed.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};

/// Tolerances and work limit for the adaptive integrator.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QuadratureSpec {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub max_subdivisions: usize,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        QuadratureSpec {
            rel_tol: 1e-10,
            abs_tol: 1e-14,
            max_subdivisions: 4000,
        }
    }
}

impl QuadratureSpec {
    pub fn new(rel_tol: f64, abs_tol: f64, max_subdivisions: usize) -> Result<Self> {
        let spec = QuadratureSpec {
            rel_tol,
            abs_tol,
            max_subdivisions,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.rel_tol > 0.0 && self.rel_tol.is_finite()) {
            return domain(format!(
                "quadrature.rel_tol must be > 0, got {}",
                self.rel_tol
            ));
        }
        if !(self.abs_tol > 0.0 && self.abs_tol.is_finite()) {
            return domain(format!(
                "quadrature.abs_tol must be > 0, got {}",
                self.abs_tol
            ));
        }
        if self.max_subdivisions < 1 {
            return domain("quadrature.max_subdivisions must be >= 1");
        }
        Ok(())
    }

    /// Spec for an integral nested inside another one: tolerances shrink by `factor`.
    pub fn nested(&self, factor: f64) -> Self {
        QuadratureSpec {
            rel_tol: (self.rel_tol * factor).max(1e-14),
            abs_tol: (self.abs_tol * factor).max(1e-300),
            max_subdivisions: self.max_subdivisions,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate {
    pub value: f64,
    pub abs_err: f64,
    pub evaluations: usize,
}

#[allow(clippy::excessive_precision)]
const XGK: [f64; 11] = [
    0.995657163025808080735527280689003,
    0.973906528517171720077964012084452,
    0.930157491355708226001207180059508,
    0.865063366688984510732096688423493,
    0.780817726586416897063717578345042,
    0.679409568299024406234327365114874,
    0.562757134668604683339000099272694,
    0.433395394129247190799265943165784,
    0.294392862701460198131126603103866,
    0.148874338981631210884826001129720,
    0.000000000000000000000000000000000,
];

#[allow(clippy::excessive_precision)]
const WGK: [f64; 11] = [
    0.011694638867371874278064396062192,
    0.032558162307964727478818972459390,
    0.054755896574351996031381300244580,
    0.075039674810919952767043140916190,
    0.093125454583697605535065465083366,
    0.109387158802297641899210590325805,
    0.123491976262065851077208980223285,
    0.134709217311473325928054001771707,
    0.142775938577060080797094273138717,
    0.147739104901338491374841515972068,
    0.149445554002916905664936468389821,
];

// Weights of the embedded 10-point Gauss rule, at XGK[1], XGK[3], ..., XGK[9].
#[allow(clippy::excessive_precision)]
const WG: [f64; 5] = [
    0.066671344308688137593568809893332,
    0.149451349150580593145776339657697,
    0.219086362515982043995534934228163,
    0.269266719309996355091226921569469,
    0.295524224714752870173892994651338,
];

#[derive(Debug, Clone, Copy)]
enum Map {
    Identity,
    /// x = origin + (1 − τ)/τ
    Upper(f64),
    /// x = origin − (1 − τ)/τ
    Lower(f64),
}

impl Map {
    #[inline]
    fn apply(self, v: f64) -> (f64, f64) {
        match self {
            Map::Identity => (v, 1.0),
            Map::Upper(o) => (o + (1.0 - v) / v, 1.0 / (v * v)),
            Map::Lower(o) => (o - (1.0 - v) / v, 1.0 / (v * v)),
        }
    }
}

#[derive(Debug, Clone, Copy)]
struct Piece {
    map: Map,
    a: f64,
    b: f64,
    value: f64,
    err: f64,
}

impl PartialEq for Piece {
    fn eq(&self, other: &Self) -> bool {
        self.err == other.err
    }
}
impl Eq for Piece {}
impl PartialOrd for Piece {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Piece {
    fn cmp(&self, other: &Self) -> Ordering {
        self.err.total_cmp(&other.err)
    }
}

fn gk21<F>(f: &mut F, map: Map, a: f64, b: f64) -> Result<Piece>
where
    F: FnMut(f64) -> Result<f64>,
{
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let mut eval = |v: f64| -> Result<f64> {
        let (x, jac) = map.apply(v);
        let y = f(x)?;
        if !y.is_finite() {
            return Err(Error::NonFinite { at: x });
        }
        Ok(y * jac)
    };

    let fc = eval(center)?;
    let mut kronrod = fc * WGK[10];
    let mut gauss = 0.0;
    let mut res_abs = kronrod.abs();
    let mut f1 = [0.0; 10];
    let mut f2 = [0.0; 10];
    for j in 0..10 {
        let dx = half * XGK[j];
        let lo = eval(center - dx)?;
        let hi = eval(center + dx)?;
        f1[j] = lo;
        f2[j] = hi;
        kronrod += WGK[j] * (lo + hi);
        res_abs += WGK[j] * (lo.abs() + hi.abs());
        if j % 2 == 1 {
            gauss += WG[j / 2] * (lo + hi);
        }
    }
    let mean = 0.5 * kronrod;
    let mut res_asc = WGK[10] * (fc - mean).abs();
    for j in 0..10 {
        res_asc += WGK[j] * ((f1[j] - mean).abs() + (f2[j] - mean).abs());
    }
    let value = kronrod * half;
    res_abs *= half.abs();
    res_asc *= half.abs();
    let mut err = ((kronrod - gauss) * half).abs();
    if res_asc != 0.0 && err != 0.0 {
        err = res_asc * (200.0 * err / res_asc).powf(1.5).min(1.0);
    }
    if res_abs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        err = err.max(50.0 * f64::EPSILON * res_abs);
    }
    Ok(Piece {
        map,
        a,
        b,
        value,
        err,
    })
}

fn run<F>(mut f: F, segments: &[(Map, f64, f64)], spec: &QuadratureSpec) -> Result<Estimate>
where
    F: FnMut(f64) -> Result<f64>,
{
    let mut heap = BinaryHeap::new();
    let mut frozen_value = 0.0;
    let mut frozen_err = 0.0;
    let mut evaluations = 0;
    for &(map, a, b) in segments {
        if a == b {
            continue;
        }
        heap.push(gk21(&mut f, map, a, b)?);
        evaluations += 21;
    }
    let mut pieces = heap.len();
    loop {
        let (mut total, mut err) = (frozen_value, frozen_err);
        for p in heap.iter() {
            total += p.value;
            err += p.err;
        }
        let tol = spec.abs_tol.max(spec.rel_tol * total.abs());
        if err <= tol {
            return Ok(Estimate {
                value: total,
                abs_err: err,
                evaluations,
            });
        }
        let worst = match heap.pop() {
            Some(p) => p,
            None => {
                return Err(Error::Quadrature {
                    estimate: total,
                    abs_err: err,
                    subdivisions: pieces,
                })
            }
        };
        let mid = 0.5 * (worst.a + worst.b);
        let too_narrow = mid <= worst.a
            || mid >= worst.b
            || (worst.b - worst.a) <= 4.0 * f64::EPSILON * worst.a.abs().max(worst.b.abs());
        if too_narrow {
            frozen_value += worst.value;
            frozen_err += worst.err;
            continue;
        }
        if pieces >= spec.max_subdivisions {
            return Err(Error::Quadrature {
                estimate: total,
                abs_err: err,
                subdivisions: pieces,
            });
        }
        heap.push(gk21(&mut f, worst.map, worst.a, mid)?);
        heap.push(gk21(&mut f, worst.map, mid, worst.b)?);
        evaluations += 42;
        pieces += 1;
    }
}

fn sorted_breaks(points: &[f64]) -> Vec<f64> {
    let mut v: Vec<f64> = points.iter().copied().filter(|x| x.is_finite()).collect();
    v.sort_by(f64::total_cmp);
    v.dedup();
    v
}

/// ∫_a^b f for finite a < b, with optional interior breakpoints.
pub fn try_integrate<F>(
    f: F,
    a: f64,
    b: f64,
    breaks: &[f64],
    spec: &QuadratureSpec,
) -> Result<Estimate>
where
    F: FnMut(f64) -> Result<f64>,
{
    if !(a.is_finite() && b.is_finite()) {
        return domain("finite interval endpoints required");
    }
    if a > b {
        return try_integrate(f, b, a, breaks, spec).map(|e| Estimate {
            value: -e.value,
            ..e
        });
    }
    let mut pts = vec![a];
    pts.extend(
        sorted_breaks(breaks)
            .into_iter()
            .filter(|&x| x > a && x < b),
    );
    pts.push(b);
    let segments: Vec<_> = pts
        .windows(2)
        .map(|w| (Map::Identity, w[0], w[1]))
        .collect();
    run(f, &segments, spec)
}

pub fn integrate<F>(f: F, a: f64, b: f64, spec: &QuadratureSpec) -> Result<Estimate>
where
    F: Fn(f64) -> f64,
{
    try_integrate(|x| Ok(f(x)), a, b, &[], spec)
}

/// ∫ over the whole real line, split at `breaks` (at least one is used).
pub fn try_integrate_line<F>(f: F, breaks: &[f64], spec: &QuadratureSpec) -> Result<Estimate>
where
    F: FnMut(f64) -> Result<f64>,
{
    let mut pts = sorted_breaks(breaks);
    if pts.is_empty() {
        pts.push(0.0);
    }
    let mut segments = vec![(Map::Lower(pts[0]), 0.0, 1.0)];
    segments.extend(pts.windows(2).map(|w| (Map::Identity, w[0], w[1])));
    segments.push((Map::Upper(*pts.last().unwrap()), 0.0, 1.0));
    run(f, &segments, spec)
}

/// ∫_a^∞ f, split at any `breaks` above `a`.
pub fn try_integrate_upper<F>(
    f: F,
    a: f64,
    breaks: &[f64],
    spec: &QuadratureSpec,
) -> Result<Estimate>
where
    F: FnMut(f64) -> Result<f64>,
{
    let mut pts = vec![a];
    pts.extend(sorted_breaks(breaks).into_iter().filter(|&x| x > a));
    let mut segments: Vec<_> = pts
        .windows(2)
        .map(|w| (Map::Identity, w[0], w[1]))
        .collect();
    segments.push((Map::Upper(*pts.last().unwrap()), 0.0, 1.0));
    run(f, &segments, spec)
}

/// ∫_0^∞ f(s) ds through s = e^u, with breakpoints at the given positive `scales`.
///
/// Suited to integrands with an essential singularity or heavy tail, where the
/// mass lives on a logarithmic range of scales.
pub fn try_integrate_positive<F>(
    mut f: F,
    scales: &[f64],
    spec: &QuadratureSpec,
) -> Result<Estimate>
where
    F: FnMut(f64) -> Result<f64>,
{
    let logs: Vec<f64> = scales
        .iter()
        .filter(|&&s| s > 0.0 && s.is_finite())
        .map(|s| s.ln())
        .collect();
    try_integrate_line(
        move |u| {
            let s = u.exp();
            if s == 0.0 || !s.is_finite() {
                return Ok(0.0);
            }
            Ok(f(s)? * s)
        },
        &logs,
        spec,
    )
}

pub fn integrate_positive<F>(f: F, scales: &[f64], spec: &QuadratureSpec) -> Result<Estimate>
where
    F: Fn(f64) -> f64,
{
    try_integrate_positive(|s| Ok(f(s)), scales, spec)
}
