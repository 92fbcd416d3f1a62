//! Numerical checks of the Harnack-type inequalities against quadrature and
//! closed-form truth, and deterministic parameter sweeps over them.

mod checks;
mod sweep;
pub mod transport;

use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::semigroup::Point;

pub use checks::*;
pub use sweep::*;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    ClosedForm,
    Series,
    Quadrature,
    MonteCarlo,
}

impl Method {
    pub fn as_str(&self) -> &'static str {
        match self {
            Method::ClosedForm => "closed-form",
            Method::Series => "series",
            Method::Quadrature => "quadrature",
            Method::MonteCarlo => "monte-carlo",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Holds,
    Violated,
    OutOfDomain,
    NonConverged,
}

/// One inequality check lhs ≤ rhs with its parameter coordinates.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundReport {
    pub check: String,
    pub alpha: Option<f64>,
    pub kappa: Option<f64>,
    pub p: Option<f64>,
    pub t: Option<f64>,
    pub x: Option<Point>,
    pub y: Option<Point>,
    pub f: Option<String>,
    #[serde(with = "crate::floatfmt")]
    pub lhs: f64,
    #[serde(with = "crate::floatfmt")]
    pub rhs: f64,
    #[serde(with = "crate::floatfmt")]
    pub slack: f64,
    pub valid_domain: bool,
    pub method: Method,
    pub status: Status,
    /// Set when the boundary-case validity condition holds but the moment integral diverges.
    #[serde(default)]
    pub discrepancy: bool,
    pub detail: String,
}

/// Parameter coordinates attached to a report.
#[derive(Debug, Clone, Default)]
pub struct Coords {
    pub alpha: Option<f64>,
    pub kappa: Option<f64>,
    pub p: Option<f64>,
    pub t: Option<f64>,
    pub x: Option<Point>,
    pub y: Option<Point>,
    pub f: Option<String>,
}

impl BoundReport {
    /// Compares lhs ≤ rhs·(1 + tol) + abs_tol.
    pub fn compare(
        check: &str,
        c: Coords,
        lhs: f64,
        rhs: f64,
        tol: f64,
        abs_tol: f64,
        method: Method,
    ) -> Self {
        let holds =
            lhs <= rhs + tol * rhs.abs() + abs_tol || (lhs.is_nan() && rhs == f64::INFINITY);
        let status = if lhs.is_nan() || rhs.is_nan() {
            Status::NonConverged
        } else if holds {
            Status::Holds
        } else {
            Status::Violated
        };
        BoundReport::with(check, c, lhs, rhs, true, method, status, String::new())
    }

    pub fn out_of_domain(
        check: &str,
        c: Coords,
        method: Method,
        detail: impl Into<String>,
    ) -> Self {
        BoundReport::with(
            check,
            c,
            f64::NAN,
            f64::NAN,
            false,
            method,
            Status::OutOfDomain,
            detail.into(),
        )
    }

    /// Records a failure of the underlying computation instead of raising it.
    pub fn failed(check: &str, c: Coords, method: Method, err: &Error) -> Self {
        let status = if err.is_numerical() {
            Status::NonConverged
        } else {
            Status::OutOfDomain
        };
        let mut r = BoundReport::with(
            check,
            c,
            f64::NAN,
            f64::NAN,
            false,
            method,
            status,
            err.to_string(),
        );
        r.valid_domain = !matches!(status, Status::OutOfDomain);
        r
    }

    #[allow(clippy::too_many_arguments)]
    fn with(
        check: &str,
        c: Coords,
        lhs: f64,
        rhs: f64,
        valid_domain: bool,
        method: Method,
        status: Status,
        detail: String,
    ) -> Self {
        BoundReport {
            check: check.to_string(),
            alpha: c.alpha,
            kappa: c.kappa,
            p: c.p,
            t: c.t,
            x: c.x,
            y: c.y,
            f: c.f,
            lhs,
            rhs,
            slack: rhs - lhs,
            valid_domain,
            method,
            status,
            discrepancy: false,
            detail,
        }
    }

    pub fn detail(mut self, d: impl Into<String>) -> Self {
        let d = d.into();
        if self.detail.is_empty() {
            self.detail = d;
        } else {
            self.detail = format!("{}; {d}", self.detail);
        }
        self
    }

    pub fn holds(&self) -> bool {
        self.status == Status::Holds
    }

    /// slack / |rhs|, or the raw slack when rhs is zero.
    pub fn relative_slack(&self) -> f64 {
        if self.rhs != 0.0 && self.rhs.is_finite() {
            self.slack / self.rhs.abs()
        } else {
            self.slack
        }
    }
}
