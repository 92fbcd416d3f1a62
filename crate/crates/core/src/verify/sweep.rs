use std::collections::BTreeSet;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::checks::*;
use super::{BoundReport, Status};
use crate::error::{Error, Result};
use crate::quad::QuadratureSpec;
use crate::semigroup::{BaseKernel, Point, TestFunction};
use crate::subordinator::{MCSpec, StableSubordinator};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CheckName {
    BaseHarnack,
    SubordinatedHarnack,
    Prop13,
    LogHarnack,
    OndiagRate,
    EntropyKernel,
    EntropyCost,
    BoundChain,
    LaplaceMc,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PointPair {
    pub x: Point,
    pub y: Point,
}

fn default_h_values() -> Vec<f64> {
    vec![0.1, 1.0]
}
fn default_epsilons() -> Vec<f64> {
    vec![0.0, 1.0]
}
fn default_kappas() -> Vec<f64> {
    vec![1.0]
}
fn default_laplace_xs() -> Vec<f64> {
    vec![0.1, 1.0, 10.0]
}
fn default_ondiag_ts() -> Vec<f64> {
    vec![0.1, 0.3, 1.0, 3.0, 10.0]
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepConfig {
    pub base: BaseKernel,
    pub alphas: Vec<f64>,
    pub ts: Vec<f64>,
    pub ps: Vec<f64>,
    pub point_pairs: Vec<PointPair>,
    pub functions: Vec<TestFunction>,
    pub quadrature: QuadratureSpec,
    #[serde(default)]
    pub mc: Option<MCSpec>,
    pub checks: BTreeSet<CheckName>,
    /// H values for the pure bound-chain check.
    #[serde(default = "default_h_values")]
    pub h_values: Vec<f64>,
    #[serde(default = "default_epsilons")]
    pub epsilons: Vec<f64>,
    #[serde(default = "default_kappas")]
    pub kappas: Vec<f64>,
    /// Laplace arguments for the Monte Carlo check.
    #[serde(default = "default_laplace_xs")]
    pub laplace_xs: Vec<f64>,
    /// Times for the on-diagonal fit; must span two decades.
    #[serde(default = "default_ondiag_ts")]
    pub ondiag_ts: Vec<f64>,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Summary {
    pub holds: usize,
    pub violated: usize,
    pub out_of_domain: usize,
    pub non_converged: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepReport {
    pub entries: Vec<BoundReport>,
    pub summary: Summary,
    /// Smallest relative slack (rhs − lhs)/|rhs| over in-domain entries.
    #[serde(with = "crate::floatfmt")]
    pub worst_slack: f64,
}

impl SweepReport {
    pub fn from_entries(entries: Vec<BoundReport>) -> Self {
        let mut summary = Summary::default();
        let mut worst = f64::INFINITY;
        for e in &entries {
            match e.status {
                Status::Holds => summary.holds += 1,
                Status::Violated => summary.violated += 1,
                Status::OutOfDomain => summary.out_of_domain += 1,
                Status::NonConverged => summary.non_converged += 1,
            }
            if e.valid_domain && matches!(e.status, Status::Holds | Status::Violated) {
                let r = e.relative_slack();
                if !r.is_nan() {
                    worst = worst.min(r);
                }
            }
        }
        SweepReport {
            entries,
            summary,
            worst_slack: worst,
        }
    }
}

fn config_err<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Config(msg.into()))
}

impl SweepConfig {
    pub fn validate(&self) -> Result<()> {
        self.base.validate()?;
        if self.checks.is_empty() {
            return config_err("checks must name at least one check");
        }
        for (name, len) in [
            ("alphas", self.alphas.len()),
            ("ts", self.ts.len()),
            ("ps", self.ps.len()),
            ("point_pairs", self.point_pairs.len()),
            ("functions", self.functions.len()),
        ] {
            if len == 0 {
                return config_err(format!("{name} must be non-empty"));
            }
        }
        if let Some(a) = self.alphas.iter().find(|a| !(**a > 0.0 && **a <= 1.0)) {
            return config_err(format!("alphas: {a} is outside (0, 1]"));
        }
        if let Some(t) = self
            .ts
            .iter()
            .chain(&self.ondiag_ts)
            .find(|t| !(**t > 0.0 && t.is_finite()))
        {
            return config_err(format!("ts: {t} must be positive"));
        }
        if let Some(p) = self.ps.iter().find(|p| !(**p > 1.0 && p.is_finite())) {
            return config_err(format!("ps: {p} must exceed 1"));
        }
        self.quadrature.validate()?;
        let d = self.base.dim();
        for pp in &self.point_pairs {
            pp.x.validate()?;
            pp.y.validate()?;
            if pp.x.dim() != d || pp.y.dim() != d {
                return config_err(format!("point_pairs: dimension must be {d}"));
            }
        }
        for f in &self.functions {
            f.validate()?;
            if f.dim().is_some_and(|k| k != d) {
                return config_err(format!(
                    "functions: {} does not have dimension {d}",
                    f.label()
                ));
            }
        }
        let ou = self.base == BaseKernel::Ou1d;
        if !ou
            && (self.checks.contains(&CheckName::EntropyKernel)
                || self.checks.contains(&CheckName::EntropyCost))
        {
            return config_err("entropy checks need base ou1d");
        }
        if ou && self.checks.contains(&CheckName::OndiagRate) {
            return config_err("ondiag_rate needs base gauss_heat");
        }
        if self.checks.contains(&CheckName::LaplaceMc) {
            match &self.mc {
                Some(mc) => {
                    MCSpec::new(mc.n_samples, mc.seed)?;
                }
                None => return config_err("laplace_mc needs an mc section"),
            }
        }
        if self.checks.contains(&CheckName::BoundChain) {
            if self.h_values.iter().any(|h| !(*h >= 0.0))
                || self.epsilons.iter().any(|e| !(*e >= 0.0))
            {
                return config_err("h_values and epsilons must be >= 0");
            }
            if self.kappas.is_empty() || self.kappas.iter().any(|k| !(*k > 0.0)) {
                return config_err("kappas must be non-empty and positive");
            }
        }
        Ok(())
    }

    fn tasks(&self) -> Vec<Task> {
        let mut v = Vec::new();
        let pairs = &self.point_pairs;
        for check in &self.checks {
            match check {
                CheckName::BaseHarnack => {
                    for &p in &self.ps {
                        for &t in &self.ts {
                            for (i, _) in pairs.iter().enumerate() {
                                for (j, _) in self.functions.iter().enumerate() {
                                    v.push(Task::Base {
                                        p,
                                        t,
                                        pair: i,
                                        f: j,
                                    });
                                }
                            }
                        }
                    }
                }
                CheckName::SubordinatedHarnack => {
                    for &alpha in &self.alphas {
                        for &p in &self.ps {
                            for &t in &self.ts {
                                for (i, _) in pairs.iter().enumerate() {
                                    for (j, _) in self.functions.iter().enumerate() {
                                        v.push(Task::Sub {
                                            alpha,
                                            p,
                                            t,
                                            pair: i,
                                            f: j,
                                        });
                                    }
                                }
                            }
                        }
                    }
                }
                CheckName::Prop13 => {
                    for &p in &self.ps {
                        for &t in &self.ts {
                            for (i, _) in pairs.iter().enumerate() {
                                for (j, _) in self.functions.iter().enumerate() {
                                    v.push(Task::Prop13 {
                                        p,
                                        t,
                                        pair: i,
                                        f: j,
                                    });
                                }
                            }
                        }
                    }
                }
                CheckName::LogHarnack => {
                    for &alpha in &self.alphas {
                        for &t in &self.ts {
                            for (i, _) in pairs.iter().enumerate() {
                                for (j, _) in self.functions.iter().enumerate() {
                                    v.push(Task::Log {
                                        alpha,
                                        t,
                                        pair: i,
                                        f: j,
                                    });
                                }
                            }
                        }
                    }
                }
                CheckName::OndiagRate => {
                    for &alpha in &self.alphas {
                        v.push(Task::Ondiag { alpha });
                    }
                }
                CheckName::EntropyKernel => {
                    for &alpha in &self.alphas {
                        for &t in &self.ts {
                            for (i, _) in pairs.iter().enumerate() {
                                v.push(Task::EntropyKernel { alpha, t, pair: i });
                            }
                        }
                    }
                }
                CheckName::EntropyCost => {
                    for &alpha in &self.alphas {
                        for &t in &self.ts {
                            for (j, f) in self.functions.iter().enumerate() {
                                if matches!(f, TestFunction::GaussianRatio { .. }) {
                                    v.push(Task::EntropyCost { alpha, t, f: j });
                                }
                            }
                        }
                    }
                }
                CheckName::BoundChain => {
                    for &p in &self.ps {
                        for &alpha in &self.alphas {
                            for &kappa in &self.kappas {
                                for &t in &self.ts {
                                    for &h in &self.h_values {
                                        for &eps in &self.epsilons {
                                            v.push(Task::Chain {
                                                p,
                                                alpha,
                                                kappa,
                                                t,
                                                h,
                                                eps,
                                            });
                                        }
                                    }
                                }
                            }
                        }
                    }
                }
                CheckName::LaplaceMc => {
                    for &alpha in &self.alphas {
                        for &t in &self.ts {
                            for &x in &self.laplace_xs {
                                v.push(Task::Laplace { alpha, t, x });
                            }
                        }
                    }
                }
            }
        }
        v
    }
}

#[derive(Debug, Clone, Copy)]
enum Task {
    Base {
        p: f64,
        t: f64,
        pair: usize,
        f: usize,
    },
    Sub {
        alpha: f64,
        p: f64,
        t: f64,
        pair: usize,
        f: usize,
    },
    Prop13 {
        p: f64,
        t: f64,
        pair: usize,
        f: usize,
    },
    Log {
        alpha: f64,
        t: f64,
        pair: usize,
        f: usize,
    },
    Ondiag {
        alpha: f64,
    },
    EntropyKernel {
        alpha: f64,
        t: f64,
        pair: usize,
    },
    EntropyCost {
        alpha: f64,
        t: f64,
        f: usize,
    },
    Chain {
        p: f64,
        alpha: f64,
        kappa: f64,
        t: f64,
        h: f64,
        eps: f64,
    },
    Laplace {
        alpha: f64,
        t: f64,
        x: f64,
    },
}

fn subordinator(alpha: f64, t: f64) -> StableSubordinator {
    StableSubordinator::new(alpha, t).expect("validated config")
}

/// f itself when f ≥ 1, otherwise 1 + f.
fn log_admissible(f: &TestFunction) -> TestFunction {
    if f.lower_bound() >= 1.0 {
        f.clone()
    } else {
        TestFunction::shifted(f.clone(), 1.0)
    }
}

fn run_task(cfg: &SweepConfig, ctx: &CheckContext, index: usize, task: Task) -> Vec<BoundReport> {
    let base = &cfg.base;
    let pair = |i: usize| (&cfg.point_pairs[i].x, &cfg.point_pairs[i].y);
    match task {
        Task::Base { p, t, pair: i, f } => {
            let (x, y) = pair(i);
            vec![check_base_harnack(base, p, t, x, y, &cfg.functions[f], ctx)]
        }
        Task::Sub {
            alpha,
            p,
            t,
            pair: i,
            f,
        } => {
            let (x, y) = pair(i);
            check_subordinated_harnack_all(
                base,
                &subordinator(alpha, t),
                p,
                x,
                y,
                &cfg.functions[f],
                ctx,
            )
        }
        Task::Prop13 { p, t, pair: i, f } => {
            let (x, y) = pair(i);
            vec![check_prop13(base, p, t, x, y, &cfg.functions[f], ctx)]
        }
        Task::Log {
            alpha,
            t,
            pair: i,
            f,
        } => {
            let (x, y) = pair(i);
            vec![check_log_harnack(
                base,
                &subordinator(alpha, t),
                x,
                y,
                &log_admissible(&cfg.functions[f]),
                ctx,
            )]
        }
        Task::Ondiag { alpha } => check_ondiag_rate(base.dim(), alpha, &cfg.ondiag_ts, ctx),
        Task::EntropyKernel { alpha, t, pair: i } => {
            let (x, y) = pair(i);
            vec![check_entropy_kernel(
                base,
                &subordinator(alpha, t),
                x,
                y,
                ctx,
            )]
        }
        Task::EntropyCost { alpha, t, f } => {
            vec![check_entropy_cost(
                base,
                &subordinator(alpha, t),
                &cfg.functions[f],
                ctx,
            )]
        }
        Task::Chain {
            p,
            alpha,
            kappa,
            t,
            h,
            eps,
        } => check_bound_chain(p, alpha, kappa, t, h, eps, ctx),
        Task::Laplace { alpha, t, x } => {
            let mc = cfg.mc.expect("validated config");
            vec![check_laplace_mc(alpha, t, x, &mc, index as u64)]
        }
    }
}

/// Runs every named check over the configured grid.
///
/// Grid points are independent tasks evaluated in parallel on the current
/// rayon pool; entries come back in grid order, so the report depends only on
/// the configuration.
pub fn run_sweep(config: &SweepConfig) -> Result<SweepReport> {
    config.validate()?;
    let ctx = CheckContext::new(config.quadrature);
    let tasks = config.tasks();
    let entries: Vec<BoundReport> = tasks
        .par_iter()
        .enumerate()
        .map(|(i, &task)| run_task(config, &ctx, i, task))
        .collect::<Vec<_>>()
        .into_iter()
        .flatten()
        .collect();
    Ok(SweepReport::from_entries(entries))
}

/// Runs several configurations and merges their entries into one report.
pub fn run_sweeps(configs: &[SweepConfig]) -> Result<SweepReport> {
    if configs.is_empty() {
        return config_err("no sweep configurations given");
    }
    let mut entries = Vec::new();
    for c in configs {
        entries.extend(run_sweep(c)?.entries);
    }
    Ok(SweepReport::from_entries(entries))
}
