mod config;

use std::collections::BTreeMap;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use kappa_core::classical::{classify_motion, integrate_with, IntegrateOptions, TOL_MAX, TOL_MIN};
use kappa_core::model::{CartState, Curvature, PhysConstants};
use kappa_core::quantum::quadrature::inner_product;
use kappa_core::quantum::{
    adjudicate, default_sample_radii, AngularSign, EnergyBranch, OracleOptions, QuantumNumbers,
    Wavefunction, RESOLVED_BRANCH,
};
use kappa_core::report::{
    spectrum_report, to_json, write_wavefunction_csv, NormReport, ReportHeader,
};
use kappa_core::sym::run_identity_suite;
use kappa_core::Error;

#[derive(Parser)]
#[command(
    name = "kappa",
    version,
    about = "Particle on a constant-curvature surface: symbolic checks, trajectories, spectra"
)]
struct Cli {
    /// key=value file; flags override its entries
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Output file (stdout when absent)
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the exact identity suite; exit 0 iff every residual is zero
    Verify,
    /// Integrate a trajectory and report conservation drifts
    #[command(allow_negative_numbers = true)]
    Simulate(SimulateArgs),
    /// Closed-form spectrum, printed and resolved families
    #[command(allow_negative_numbers = true)]
    Spectrum(SpectrumArgs),
    /// Compare the finite-volume eigensolver with every closed-form family
    #[command(allow_negative_numbers = true)]
    Oracle(OracleArgs),
    /// Sample Ψ on an (r, φ) grid and report its normalization
    #[command(allow_negative_numbers = true)]
    Wavefunction(WavefunctionArgs),
}

#[derive(Args)]
struct PhysArgs {
    #[arg(long)]
    alpha: Option<f64>,
    #[arg(long)]
    m: Option<f64>,
    #[arg(long)]
    hbar: Option<f64>,
}

#[derive(Args)]
struct SimulateArgs {
    /// Curvature sweep, comma separated
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    kappa: Option<Vec<f64>>,
    #[arg(long)]
    alpha: Option<f64>,
    #[arg(long)]
    x: Option<f64>,
    #[arg(long)]
    y: Option<f64>,
    #[arg(long)]
    vx: Option<f64>,
    #[arg(long)]
    vy: Option<f64>,
    #[arg(long)]
    t_end: Option<f64>,
    /// Integrator tolerance in [1e-13, 1e-6]
    #[arg(long)]
    tol: Option<f64>,
    #[arg(long)]
    sample_dt: Option<f64>,
    /// csv (single curvature) or json
    #[arg(long)]
    format: Option<String>,
}

#[derive(Args)]
struct SpectrumArgs {
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    kappa: Option<Vec<f64>>,
    #[arg(long)]
    mu_max: Option<u32>,
    #[arg(long)]
    nr_max: Option<u32>,
    #[command(flatten)]
    phys: PhysArgs,
}

#[derive(Args)]
struct OracleArgs {
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    kappa: Option<Vec<f64>>,
    #[arg(long)]
    mu_max: Option<u32>,
    /// Levels per (κ, μ)
    #[arg(long)]
    levels: Option<usize>,
    /// Finite-volume cells on the coarse grid
    #[arg(long)]
    cells: Option<usize>,
    /// Sphere truncation r_max = (1−δ)/√κ
    #[arg(long)]
    delta: Option<f64>,
    /// Agreement tolerance for a family to match
    #[arg(long)]
    tolerance: Option<f64>,
}

#[derive(Args)]
struct WavefunctionArgs {
    #[arg(long)]
    kappa: Option<f64>,
    #[arg(long)]
    nr: Option<u32>,
    #[arg(long)]
    mu: Option<u32>,
    /// plus or minus
    #[arg(long)]
    sign: Option<String>,
    /// printed, exponent-conjugate or resolved
    #[arg(long)]
    branch: Option<String>,
    #[arg(long)]
    r_count: Option<usize>,
    #[arg(long)]
    phi_count: Option<usize>,
    /// Where to write the norm report (stderr when absent)
    #[arg(long)]
    report: Option<PathBuf>,
}

enum Failure {
    Usage(String),
    /// Report written, but a check failed.
    Check,
    Runtime(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Runtime(e)
    }
}

fn usage<T>(msg: impl Into<String>) -> Result<T, Failure> {
    Err(Failure::Usage(msg.into()))
}

fn error_kind(e: &Error) -> &'static str {
    match e {
        Error::Domain { .. } => "domain",
        Error::DegenerateOrigin => "degenerate-origin",
        Error::InvalidParameter(_) => "invalid-parameter",
        Error::DomainExit { .. } => "domain-exit",
        Error::StepUnderflow(_) => "step-underflow",
        Error::ZeroCurvature => "zero-curvature",
        Error::ComplexParameters(_) => "complex-parameters",
        Error::NonConvergence(_) => "non-convergence",
        Error::NonNormalizable(_) => "non-normalizable",
        Error::Io(_) => "io",
    }
}

struct Ctx {
    config: BTreeMap<String, String>,
    out: Option<PathBuf>,
}

impl Ctx {
    fn pick<T: std::str::FromStr>(
        &self,
        flag: Option<T>,
        key: &str,
        default: T,
    ) -> Result<T, Failure> {
        config::pick(flag, &self.config, key, default).map_err(Failure::Usage)
    }

    fn list(
        &self,
        flag: Option<Vec<f64>>,
        key: &str,
        default: &[f64],
    ) -> Result<Vec<f64>, Failure> {
        config::pick_list(flag, &self.config, key, default).map_err(Failure::Usage)
    }

    fn phys(&self, p: &PhysArgs) -> Result<PhysConstants, Failure> {
        let m = self.pick(p.m, "m", 1.0)?;
        let alpha = self.pick(p.alpha, "alpha", 1.0)?;
        let hbar = self.pick(p.hbar, "hbar", 1.0)?;
        PhysConstants::new(m, alpha, hbar).map_err(|e| Failure::Usage(e.to_string()))
    }

    fn header(&self, command: &str) -> Value {
        serde_json::to_value(ReportHeader::new(command, self.config.clone())).expect("header")
    }

    fn sink(&self) -> Result<Box<dyn Write>, Failure> {
        Ok(match &self.out {
            Some(p) => Box::new(BufWriter::new(
                File::create(p).map_err(|e| Error::Io(format!("{}: {e}", p.display())))?,
            )),
            None => Box::new(io::stdout().lock()),
        })
    }

    fn emit(&self, v: &Value) -> Result<(), Failure> {
        let mut w = self.sink()?;
        writeln!(w, "{}", to_json(v)?).map_err(Error::from)?;
        w.flush().map_err(Error::from)?;
        Ok(())
    }
}

fn verify(ctx: &Ctx) -> Result<(), Failure> {
    let rep = run_identity_suite();
    let all_zero = rep.all_zero();
    ctx.emit(&json!({
        "header": ctx.header("verify"),
        "identities": rep.checks.len(),
        "all_zero": all_zero,
        "checks": rep.checks.iter().map(|c| json!({
            "name": c.name,
            "description": c.description,
            "status": c.status(),
            "residuals": c.residuals,
        })).collect::<Vec<_>>(),
        "informational": rep.informational.iter().map(|c| json!({
            "name": c.name,
            "description": c.description,
            "status": c.status(),
            "residuals": c.residuals,
        })).collect::<Vec<_>>(),
    }))?;
    if all_zero {
        Ok(())
    } else {
        Err(Failure::Check)
    }
}

fn simulate(ctx: &Ctx, a: &SimulateArgs) -> Result<(), Failure> {
    let kappas = ctx.list(a.kappa.clone(), "kappa", &[0.0])?;
    let alpha = ctx.pick(a.alpha, "alpha", 1.0)?;
    let initial = CartState {
        x: ctx.pick(a.x, "x", 0.6)?,
        y: ctx.pick(a.y, "y", 0.1)?,
        vx: ctx.pick(a.vx, "vx", 0.3)?,
        vy: ctx.pick(a.vy, "vy", 0.5)?,
    };
    let t_end = ctx.pick(a.t_end, "t-end", 100.0)?;
    let tol = ctx.pick(a.tol, "tol", 1e-10)?;
    let sample_dt = ctx.pick(a.sample_dt, "sample-dt", 0.05)?;
    let format = ctx.pick(a.format.clone(), "format", "json".to_string())?;
    if !(TOL_MIN..=TOL_MAX).contains(&tol) {
        return usage(format!("tol {tol:e} outside [{TOL_MIN:e}, {TOL_MAX:e}]"));
    }
    if !(t_end > 0.0 && t_end.is_finite()) || !(sample_dt > 0.0 && sample_dt.is_finite()) {
        return usage("t-end and sample-dt must be positive");
    }
    if !alpha.is_finite() || alpha < 0.0 {
        return usage("alpha must be >= 0");
    }
    let opts = IntegrateOptions {
        sample_dt,
        ..Default::default()
    };
    match format.as_str() {
        "csv" => {
            if kappas.len() != 1 {
                return usage("csv output takes a single curvature");
            }
            let traj = integrate_with(&initial, kappas[0], alpha, t_end, tol, &opts)?;
            let mut w = ctx.sink()?;
            traj.write_csv(&mut w)?;
            w.flush().map_err(Error::from)?;
            Ok(())
        }
        "json" => {
            let mut failed = false;
            let runs: Vec<Value> = kappas
                .iter()
                .map(|&k| {
                    let res = integrate_with(&initial, k, alpha, t_end, tol, &opts).and_then(|t| {
                        let cons = t.conservation_report()?;
                        let motion = classify_motion(&t)?;
                        Ok(json!({
                            "kappa": k,
                            "meta": t.meta,
                            "samples": t.times.len(),
                            "conservation": cons,
                            "motion": motion,
                        }))
                    });
                    res.unwrap_or_else(|e| {
                        failed = true;
                        json!({"kappa": k, "error": {"kind": error_kind(&e), "message": e.to_string()}})
                    })
                })
                .collect();
            ctx.emit(&json!({
                "header": ctx.header("simulate"),
                "alpha": alpha,
                "initial": initial,
                "t_end": t_end,
                "tol": tol,
                "runs": runs,
            }))?;
            if failed {
                Err(Failure::Check)
            } else {
                Ok(())
            }
        }
        other => usage(format!("unknown format '{other}' (csv or json)")),
    }
}

fn spectrum(ctx: &Ctx, a: &SpectrumArgs) -> Result<(), Failure> {
    let kappas = ctx.list(a.kappa.clone(), "kappa", &[0.0])?;
    let mu_max = ctx.pick(a.mu_max, "mu-max", 2)?;
    let nr_max = ctx.pick(a.nr_max, "nr-max", 3)?;
    let c = ctx.phys(&a.phys)?;
    let reports: Vec<_> = kappas
        .iter()
        .map(|&k| serde_json::to_value(spectrum_report(k, mu_max, nr_max, &c)).expect("report"))
        .collect();
    ctx.emit(&json!({
        "header": ctx.header("spectrum"),
        "constants": {"m": c.m, "alpha": c.alpha, "hbar": c.hbar, "beta": c.beta()},
        "spectra": reports,
    }))
}

fn oracle(ctx: &Ctx, a: &OracleArgs) -> Result<(), Failure> {
    let kappas = ctx.list(a.kappa.clone(), "kappa", &[-0.1, 0.1])?;
    let mu_max = ctx.pick(a.mu_max, "mu-max", 2)?;
    let levels = ctx.pick(a.levels, "levels", 4)?;
    let defaults = OracleOptions::default();
    let opts = OracleOptions {
        cells: ctx.pick(a.cells, "cells", defaults.cells)?,
        delta: ctx.pick(a.delta, "delta", defaults.delta)?,
        ..defaults
    };
    let tolerance = ctx.pick(a.tolerance, "tolerance", 1e-4)?;
    if levels == 0 || opts.cells < 50 * levels || opts.cells > 200_000 {
        return usage("need levels >= 1 and 50*levels <= cells <= 200000");
    }
    if !(1e-12..=1e-2).contains(&opts.delta) || !(tolerance > 0.0) {
        return usage("delta must lie in [1e-12, 1e-2] and tolerance must be positive");
    }
    let mus: Vec<u32> = (0..=mu_max).collect();
    let adj = adjudicate(&kappas, &mus, levels, tolerance, &opts)?;
    let table: Vec<Value> = adj
        .cases
        .iter()
        .flat_map(|case| {
            case.oracle.levels.iter().enumerate().map(move |(nr, ev)| {
                let n = 2 * nr as u32 + case.mu;
                let families: BTreeMap<&str, Value> = case
                    .deviations
                    .iter()
                    .map(|d| {
                        let e = d.branch.energy(n, case.kappa);
                        (d.branch.name(), json!({"E_scaled": e, "delta": ev - e}))
                    })
                    .collect();
                json!({
                    "kappa": case.kappa,
                    "mu": case.mu,
                    "N_r": nr,
                    "n": n,
                    "oracle": ev,
                    "families": families,
                })
            })
        })
        .collect();
    let converged = adj.cases.iter().all(|c| c.oracle.converged);
    let ok = converged && adj.resolved == Some(RESOLVED_BRANCH);
    ctx.emit(&json!({
        "header": ctx.header("oracle"),
        "options": opts,
        "tolerance": tolerance,
        "resolved": adj.resolved,
        "expected": RESOLVED_BRANCH,
        "converged": converged,
        "cases": adj.cases.iter().map(|c| json!({
            "kappa": c.kappa,
            "mu": c.mu,
            "matched": c.matched,
            "deviations": c.deviations,
            "oracle": c.oracle,
        })).collect::<Vec<_>>(),
        "table": table,
    }))?;
    if ok {
        Ok(())
    } else {
        Err(Failure::Check)
    }
}

fn wavefunction(ctx: &Ctx, a: &WavefunctionArgs) -> Result<(), Failure> {
    let kappa = ctx.pick(a.kappa, "kappa", 0.1)?;
    let nr = ctx.pick(a.nr, "nr", 0)?;
    let mu = ctx.pick(a.mu, "mu", 0)?;
    let sign = match ctx
        .pick(a.sign.clone(), "sign", "plus".to_string())?
        .as_str()
    {
        "plus" | "+" => AngularSign::Plus,
        "minus" | "-" => AngularSign::Minus,
        other => return usage(format!("unknown sign '{other}' (plus or minus)")),
    };
    let branch: EnergyBranch = ctx
        .pick(a.branch.clone(), "branch", "resolved".to_string())?
        .parse()
        .map_err(|e: Error| Failure::Usage(e.to_string()))?;
    if branch == EnergyBranch::SignMirror {
        return usage("the sign-mirror family has no closed-form wavefunction");
    }
    let r_count = ctx.pick(a.r_count, "r-count", 50)?;
    let phi_count = ctx.pick(a.phi_count, "phi-count", 8)?;
    if r_count == 0 || phi_count == 0 || r_count * phi_count > 10_000_000 {
        return usage("r-count and phi-count must be positive");
    }
    Curvature::new(kappa).map_err(|e| Failure::Usage(e.to_string()))?;

    let qn = QuantumNumbers::new(nr, mu).with_sign(sign);
    let raw = Wavefunction::new(qn, kappa, branch)?;
    let (wf, report) = match raw.clone().normalized() {
        Ok(wf) => {
            let check = inner_product(&wf, &wf)?;
            let rep = NormReport {
                n_r: nr,
                mu,
                sign,
                kappa,
                branch,
                e_scaled: wf.energy,
                normalizable: true,
                norm_constant: Some(wf.norm),
                norm_check: Some(check),
                note: None,
            };
            (wf, rep)
        }
        Err(e @ Error::NonNormalizable(_)) => {
            let rep = NormReport {
                n_r: nr,
                mu,
                sign,
                kappa,
                branch,
                e_scaled: raw.energy,
                normalizable: false,
                norm_constant: None,
                norm_check: None,
                note: Some(format!("{e}; samples use C = 1")),
            };
            (raw, rep)
        }
        Err(e) => return Err(e.into()),
    };
    let radii = default_sample_radii(kappa, r_count);
    let phis: Vec<f64> = (0..phi_count)
        .map(|j| 2.0 * std::f64::consts::PI * j as f64 / phi_count as f64)
        .collect();
    let mut w = ctx.sink()?;
    write_wavefunction_csv(&mut w, &wf, &radii, &phis)?;
    w.flush().map_err(Error::from)?;

    let text = to_json(&json!({"header": ctx.header("wavefunction"), "norm": report}))?;
    match &a.report {
        Some(p) => std::fs::write(p, text + "\n")
            .map_err(|e| Error::Io(format!("{}: {e}", p.display())))?,
        None => eprintln!("{text}"),
    }
    Ok(())
}

fn run(cli: Cli) -> Result<(), Failure> {
    let config = match &cli.config {
        Some(p) => {
            let text = std::fs::read_to_string(p)
                .map_err(|e| Failure::Usage(format!("{}: {e}", p.display())))?;
            config::parse(&text).map_err(Failure::Usage)?
        }
        None => BTreeMap::new(),
    };
    let out = match (&cli.out, config.get("out")) {
        (Some(p), _) => Some(p.clone()),
        (None, Some(s)) => Some(PathBuf::from(s)),
        (None, None) => None,
    };
    let ctx = Ctx { config, out };
    match &cli.command {
        Command::Verify => verify(&ctx),
        Command::Simulate(a) => simulate(&ctx, a),
        Command::Spectrum(a) => spectrum(&ctx, a),
        Command::Oracle(a) => oracle(&ctx, a),
        Command::Wavefunction(a) => wavefunction(&ctx, a),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Check) => ExitCode::from(1),
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Runtime(e)) => {
            let rep = json!({"error": {"kind": error_kind(&e), "message": e.to_string()}});
            eprintln!(
                "{}",
                serde_json::to_string_pretty(&rep).expect("error report")
            );
            ExitCode::from(1)
        }
    }
}
