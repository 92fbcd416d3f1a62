//! `subharnack`: densities, moments and Harnack constants of stably
//! subordinated semigroups, plus verification sweeps of the inequalities.

mod format;

use std::collections::BTreeSet;
use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use subharnack::bounds::{self, HarnackProfile};
use subharnack::semigroup::{self, BaseKernel, Point, TestFunction};
use subharnack::verify::{self, CheckName, PointPair, SweepConfig, SweepReport};
use subharnack::{Error, MCSpec, QuadratureSpec, StableSubordinator};

#[derive(Parser, Debug)]
#[command(
    name = "subharnack",
    version,
    about = "Harnack inequalities for stably subordinated semigroups"
)]
struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    format: Format,
    /// Write the result here instead of stdout.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    /// Seed for every Monte Carlo estimate; overrides seeds in sweep configs.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Worker threads for sweeps.
    #[arg(long, env = "SUBHARNACK_THREADS", global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Density of the subordinator law at s.
    Density {
        #[command(flatten)]
        sub: SubArgs,
        #[arg(long)]
        s: f64,
    },
    /// Negative moment E S^{-r}.
    Moment {
        #[command(flatten)]
        sub: SubArgs,
        #[arg(long)]
        r: f64,
    },
    /// Exponential moment E exp(delta S^{-kappa}).
    Expmoment {
        #[command(flatten)]
        sub: SubArgs,
        #[arg(long)]
        kappa: f64,
        #[arg(long)]
        delta: f64,
        #[arg(long, default_value_t = 1e-12)]
        rel_tol: f64,
    },
    /// Harnack factors for a profile H(eps + s^{-kappa}).
    Bound {
        #[command(flatten)]
        sub: SubArgs,
        #[arg(long)]
        p: f64,
        #[arg(long)]
        kappa: f64,
        #[arg(long)]
        h: f64,
        #[arg(long, default_value_t = 0.0)]
        epsilon: f64,
    },
    /// Transition density of the subordinated semigroup.
    Kernel {
        #[command(flatten)]
        base: BaseArgs,
        #[command(flatten)]
        sub: SubArgs,
        #[arg(long, value_parser = parse_point)]
        x: Point,
        #[arg(long, value_parser = parse_point)]
        y: Point,
        #[arg(long, default_value_t = 1e-10)]
        rel_tol: f64,
    },
    /// Run one check at a single parameter point.
    Verify(VerifyArgs),
    /// Run the checks of a JSON config over its full grid.
    Sweep {
        #[arg(long)]
        config: PathBuf,
    },
}

#[derive(Args, Debug)]
struct SubArgs {
    #[arg(long)]
    alpha: f64,
    #[arg(long)]
    t: f64,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum BaseName {
    GaussHeat,
    Ou1d,
}

#[derive(Args, Debug)]
struct BaseArgs {
    #[arg(long, value_enum, default_value_t = BaseName::GaussHeat)]
    base: BaseName,
    /// Dimension of the heat kernel.
    #[arg(long, default_value_t = 1)]
    d: usize,
}

impl BaseArgs {
    fn kernel(&self) -> Result<BaseKernel, Error> {
        let k = match self.base {
            BaseName::GaussHeat => BaseKernel::GaussHeat { d: self.d },
            BaseName::Ou1d => BaseKernel::Ou1d,
        };
        k.validate()?;
        Ok(k)
    }
}

#[derive(Args, Debug)]
struct VerifyArgs {
    #[arg(long, value_parser = parse_check)]
    check: CheckName,
    #[command(flatten)]
    base: BaseArgs,
    #[command(flatten)]
    sub: SubArgs,
    #[arg(long, default_value_t = 2.0)]
    p: f64,
    #[arg(long, value_parser = parse_point, default_value = "0")]
    x: Point,
    #[arg(long, value_parser = parse_point, default_value = "1")]
    y: Point,
    /// Test function as JSON, e.g. '{"kind":"gauss_bump","center":[0],"width":1}'.
    #[arg(long, value_parser = parse_function, default_value = r#"{"kind":"gauss_bump","center":[0],"width":1}"#)]
    function: TestFunction,
    #[arg(long, default_value_t = 1e-9)]
    rel_tol: f64,
    #[arg(long)]
    kappa: Option<f64>,
    #[arg(long)]
    h: Option<f64>,
    #[arg(long)]
    epsilon: Option<f64>,
    /// Laplace argument for laplace_mc.
    #[arg(long)]
    laplace_x: Option<f64>,
    #[arg(long, default_value_t = 100_000)]
    samples: usize,
}

fn parse_point(s: &str) -> Result<Point, String> {
    let coords = s
        .split(',')
        .map(|c| c.trim().parse::<f64>().map_err(|e| format!("{c:?}: {e}")))
        .collect::<Result<Vec<_>, _>>()?;
    Point::new(coords).map_err(|e| e.to_string())
}

fn parse_check(s: &str) -> Result<CheckName, String> {
    serde_json::from_value(serde_json::Value::String(s.into()))
        .map_err(|_| format!("unknown check {s:?}"))
}

fn parse_function(s: &str) -> Result<TestFunction, String> {
    let de = &mut serde_json::Deserializer::from_str(s);
    serde_path_to_error::deserialize(de).map_err(|e| format!("at {}: {}", e.path(), e.inner()))
}

enum Failure {
    Usage(String),
    Core(Error),
    Violations(SweepReport),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Core(e)
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

struct Output {
    format: Format,
    path: Option<PathBuf>,
}

impl Output {
    fn write(&self, text: &str) -> Result<(), Failure> {
        match &self.path {
            Some(p) => {
                fs::write(p, text).map_err(|e| Failure::Usage(format!("{}: {e}", p.display())))
            }
            None => {
                print!("{text}");
                Ok(())
            }
        }
    }

    fn scalar(&self, v: f64) -> Result<(), Failure> {
        match self.format {
            Format::Json => self.write(&format!("{}\n", format::g17(v))),
            Format::Csv => self.write(&format::pairs_csv(&[("value", v)])),
        }
    }

    fn record<T: Serialize>(&self, v: &T, rows: &[(&str, f64)]) -> Result<(), Failure> {
        match self.format {
            Format::Json => self.write(&format::to_json(v)),
            Format::Csv => self.write(&format::pairs_csv(rows)),
        }
    }

    fn report(&self, r: &SweepReport) -> Result<(), Failure> {
        match self.format {
            Format::Json => self.write(&format::to_json(r)),
            Format::Csv => self.write(&format::reports_csv(&r.entries)),
        }
    }
}

#[derive(Serialize)]
struct BoundOut {
    p: f64,
    alpha: f64,
    kappa: f64,
    t: f64,
    h: f64,
    epsilon: f64,
    constant_c: Option<f64>,
    c_pka: Option<f64>,
    numeric_factor: Option<f64>,
    intermediate_factor: Option<f64>,
    simplified_factor: Option<f64>,
    prop13: Option<bounds::Prop13Factor>,
    notes: Vec<String>,
}

fn bound(p: f64, alpha: f64, kappa: f64, t: f64, h: f64, epsilon: f64) -> Result<BoundOut, Error> {
    let prof = HarnackProfile::new(kappa, epsilon, h, 0.0)?;
    let sub = StableSubordinator::new(alpha, t)?;
    if !(p > 1.0 && p.is_finite()) {
        return Err(Error::Domain(format!("p must be > 1, got {p}")));
    }
    let mut notes = Vec::new();
    // out-of-range constants become notes so the remaining factors still print
    let mut keep = |r: Result<f64, Error>| match r {
        Ok(v) => Some(v),
        Err(e) => {
            let msg = e.to_string();
            if !notes.contains(&msg) {
                notes.push(msg);
            }
            None
        }
    };
    let constant_c = keep(bounds::constant_c(alpha, kappa));
    let c_pka = keep(bounds::C_pka(p, kappa, alpha));
    let numeric_factor = keep(
        sub.exp_moment(h / (p - 1.0), kappa, &QuadratureSpec::default())
            .and_then(|m| bounds::transfer_factor_numeric(p, &prof, &m)),
    );
    let intermediate_factor = keep(bounds::thm11_intermediate_factor(p, &prof, alpha, t));
    let simplified_factor = keep(bounds::thm11_factor(p, &prof, alpha, t));
    let boundary = kappa / (kappa + 1.0);
    let prop13 = if (alpha - boundary).abs() <= 1e-12 * boundary {
        Some(bounds::prop13_factor(p, kappa, h, t)?)
    } else {
        None
    };
    Ok(BoundOut {
        p,
        alpha,
        kappa,
        t,
        h,
        epsilon,
        constant_c,
        c_pka,
        numeric_factor,
        intermediate_factor,
        simplified_factor,
        prop13,
        notes,
    })
}

fn load_configs(path: &PathBuf) -> Result<Vec<SweepConfig>, Failure> {
    let text =
        fs::read_to_string(path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
    let value: serde_json::Value = serde_json::from_str(&text)
        .map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
    let schema = |e: serde_path_to_error::Error<serde_json::Error>| {
        Failure::Usage(format!(
            "{}: at {}: {}",
            path.display(),
            e.path(),
            e.inner()
        ))
    };
    if value.is_array() {
        serde_path_to_error::deserialize(value).map_err(schema)
    } else {
        serde_path_to_error::deserialize(value)
            .map(|c| vec![c])
            .map_err(schema)
    }
}

fn finish_report(report: SweepReport, out: &Output) -> Result<(), Failure> {
    out.report(&report)?;
    let s = report.summary;
    eprintln!(
        "holds {} violated {} out_of_domain {} non_converged {} worst_slack {}",
        s.holds,
        s.violated,
        s.out_of_domain,
        s.non_converged,
        format::g17(report.worst_slack)
    );
    if s.violated > 0 {
        return Err(Failure::Violations(report));
    }
    if s.non_converged > 0 {
        return Err(Failure::Core(Error::NotConvergent(format!(
            "{} report entries did not converge",
            s.non_converged
        ))));
    }
    Ok(())
}

fn run(cli: Cli) -> Result<(), Failure> {
    if let Some(n) = cli.threads {
        if n == 0 {
            return Err(Failure::Usage("--threads must be >= 1".into()));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| Failure::Usage(e.to_string()))?;
    }
    let out = Output {
        format: cli.format,
        path: cli.output.clone(),
    };
    match cli.command {
        Command::Density { sub, s } => {
            out.scalar(StableSubordinator::new(sub.alpha, sub.t)?.density(s)?)
        }
        Command::Moment { sub, r } => {
            out.scalar(StableSubordinator::new(sub.alpha, sub.t)?.fractional_moment(r)?)
        }
        Command::Expmoment {
            sub,
            kappa,
            delta,
            rel_tol,
        } => {
            let spec =
                QuadratureSpec::new(rel_tol, 1e-300, QuadratureSpec::default().max_subdivisions)?;
            let m = StableSubordinator::new(sub.alpha, sub.t)?.exp_moment(delta, kappa, &spec)?;
            if !m.converged {
                let why = m
                    .divergence_reason
                    .clone()
                    .unwrap_or_else(|| "series did not converge".into());
                return Err(Failure::Core(Error::NotConvergent(why)));
            }
            out.record(
                &m,
                &[
                    ("value", m.value),
                    ("log_value", m.log_value),
                    ("truncation_bound", m.truncation_bound),
                ],
            )
        }
        Command::Bound {
            sub,
            p,
            kappa,
            h,
            epsilon,
        } => {
            let b = bound(p, sub.alpha, kappa, sub.t, h, epsilon)?;
            let mut rows = Vec::new();
            for (k, v) in [
                ("constant_c", b.constant_c),
                ("c_pka", b.c_pka),
                ("numeric_factor", b.numeric_factor),
                ("intermediate_factor", b.intermediate_factor),
                ("simplified_factor", b.simplified_factor),
            ] {
                if let Some(v) = v {
                    rows.push((k, v));
                }
            }
            out.record(&b, &rows)
        }
        Command::Kernel {
            base,
            sub,
            x,
            y,
            rel_tol,
        } => {
            let spec =
                QuadratureSpec::new(rel_tol, 1e-300, QuadratureSpec::default().max_subdivisions)?;
            let v = semigroup::subordinated_density(
                &base.kernel()?,
                &StableSubordinator::new(sub.alpha, sub.t)?,
                &x,
                &y,
                &spec,
            )?;
            out.scalar(v)
        }
        Command::Verify(a) => {
            let mut cfg = SweepConfig {
                base: a.base.kernel()?,
                alphas: vec![a.sub.alpha],
                ts: vec![a.sub.t],
                ps: vec![a.p],
                point_pairs: vec![PointPair { x: a.x, y: a.y }],
                functions: vec![a.function],
                quadrature: QuadratureSpec::new(
                    a.rel_tol,
                    1e-14,
                    QuadratureSpec::default().max_subdivisions,
                )?,
                mc: Some(MCSpec::new(a.samples, cli.seed.unwrap_or(0))?),
                checks: BTreeSet::from([a.check]),
                ..default_extras()
            };
            if let Some(k) = a.kappa {
                cfg.kappas = vec![k];
            }
            if let Some(h) = a.h {
                cfg.h_values = vec![h];
            }
            if let Some(e) = a.epsilon {
                cfg.epsilons = vec![e];
            }
            if let Some(x) = a.laplace_x {
                cfg.laplace_xs = vec![x];
            }
            finish_report(verify::run_sweep(&cfg)?, &out)
        }
        Command::Sweep { config } => {
            let mut configs = load_configs(&config)?;
            if let Some(seed) = cli.seed {
                for c in &mut configs {
                    if let Some(mc) = &mut c.mc {
                        mc.seed = seed;
                    }
                }
            }
            finish_report(verify::run_sweeps(&configs)?, &out)
        }
    }
}

/// A config holding only the serde defaults of the optional grids.
fn default_extras() -> SweepConfig {
    let minimal = serde_json::json!({
        "base": {"kind": "ou1d"},
        "alphas": [], "ts": [], "ps": [], "point_pairs": [], "functions": [],
        "quadrature": QuadratureSpec::default(),
        "checks": [],
    });
    serde_json::from_value(minimal).expect("defaults deserialize")
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Core(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(if e.is_numerical() { 2 } else { 1 })
        }
        Err(Failure::Violations(r)) => {
            eprintln!("error: {} inequality violations", r.summary.violated);
            ExitCode::from(3)
        }
    }
}
