use clap::{Parser, Subcommand, ValueEnum};
use nlsdelta::evolve::{self, Outcome, SimConfig, Trace};
use nlsdelta::format::sig15;
use nlsdelta::grid::{self, Grid, GridFunction};
use nlsdelta::soliton::{self, SolitonParams};
use nlsdelta::thresholds::{self, ThresholdKind, Thresholds};
use nlsdelta::Error;
use serde_json::{json, Value};
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

#[derive(Parser, Debug)]
#[command(
    name = "nlsdelta",
    version,
    about = "Standing waves, stability thresholds and blowup runs for NLS with a delta potential",
    allow_negative_numbers = true
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// The three threshold values ξ0, ξ1, ξ2 at one power p.
    Thresholds {
        #[arg(long)]
        p: f64,
        /// Also report the frequencies ω_j = γ²/(4ξ_j²).
        #[arg(long)]
        gamma: Option<f64>,
    },
    /// Thresholds on a uniform grid of powers, as CSV `p,xi0,xi1,xi2`.
    Sweep {
        #[arg(long)]
        lo: f64,
        #[arg(long)]
        hi: f64,
        #[arg(long)]
        n: usize,
        /// Restrict to these thresholds (repeatable).
        #[arg(long = "kind", value_enum)]
        kinds: Vec<KindArg>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Closed-form quantities of φ_ω, and optionally φ_ω sampled to CSV.
    Profile {
        #[arg(long)]
        p: f64,
        #[arg(long)]
        gamma: f64,
        #[arg(long)]
        omega: f64,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long = "L", default_value_t = 30.0)]
        half_width: f64,
        #[arg(long, default_value_t = 12001)]
        n: usize,
    },
    /// Stability regime of φ_ω as JSON.
    Classify {
        #[arg(long)]
        p: f64,
        #[arg(long)]
        gamma: f64,
        #[arg(long)]
        omega: f64,
    },
    /// Evolve initial data given as `x,re,im` CSV under a key=value config.
    Simulate {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        initial: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Evolve φ_ω^λ and report B_ω membership, outcome and invariants.
    Blowup {
        #[arg(long)]
        p: f64,
        #[arg(long)]
        gamma: f64,
        #[arg(long)]
        omega: f64,
        #[arg(long)]
        lambda: f64,
        #[arg(long = "L", default_value_t = 7.0)]
        half_width: f64,
        #[arg(long, default_value_t = 0.001)]
        h: f64,
        #[arg(long, default_value_t = 2.5e-6)]
        dt: f64,
        #[arg(long, default_value_t = 0.2)]
        t_end: f64,
        #[arg(long, default_value_t = 40)]
        stride: usize,
        #[arg(long)]
        gradient_factor: Option<f64>,
        #[arg(long)]
        peak_factor: Option<f64>,
        #[arg(long)]
        abort_rel: Option<f64>,
        #[arg(long)]
        solver_tol: Option<f64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Virial identity residual of a trace written by `simulate` or `blowup`.
    VirialCheck {
        #[arg(long)]
        trace: PathBuf,
        /// Outcome JSON; defaults to the `.outcome.json` file next to the trace.
        #[arg(long)]
        outcome: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum KindArg {
    Xi0,
    Xi1,
    Xi2,
}

impl From<KindArg> for ThresholdKind {
    fn from(k: KindArg) -> Self {
        match k {
            KindArg::Xi0 => ThresholdKind::Xi0,
            KindArg::Xi1 => ThresholdKind::Xi1,
            KindArg::Xi2 => ThresholdKind::Xi2,
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            if !e.use_stderr() {
                // --help and --version
                let _ = e.print();
                return ExitCode::SUCCESS;
            }
            let report = json!({
                "error": {"kind": "argument", "message": e.to_string().trim()},
                "exit_code": 2,
            });
            eprintln!("{report}");
            return ExitCode::from(2);
        }
    };
    match dispatch(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            let code = if e.is_input_error() { 2 } else { 1 };
            let report = json!({
                "error": {"kind": e.kind(), "message": e.to_string()},
                "exit_code": code,
            });
            eprintln!("{report}");
            ExitCode::from(code)
        }
    }
}

fn dispatch(command: Command) -> nlsdelta::Result<()> {
    match command {
        Command::Thresholds { p, gamma } => {
            let t = Thresholds::compute(p)?;
            let mut out = json!({"p": p, "xi0": t.xi0, "xi1": t.xi1, "xi2": t.xi2});
            if let Some(g) = gamma {
                if g.is_nan() || g <= 0.0 {
                    return Err(Error::Domain(format!("γ = {g} must be positive")));
                }
                out["gamma"] = json!(g);
                out["omega0"] = json!(t.omega(ThresholdKind::Xi0, g));
                out["omega1"] = json!(t.omega(ThresholdKind::Xi1, g));
                out["omega2"] = json!(t.omega(ThresholdKind::Xi2, g));
            }
            print_json(&out);
        }
        Command::Sweep { lo, hi, n, kinds, out } => {
            let kinds: Vec<ThresholdKind> = if kinds.is_empty() {
                ThresholdKind::ALL.to_vec()
            } else {
                kinds.into_iter().map(Into::into).collect()
            };
            let start = Instant::now();
            let rows = thresholds::sweep(&kinds, lo, hi, n)?;
            let csv = thresholds::sweep_csv(&rows);
            let errors: Vec<Value> = rows
                .iter()
                .filter(|r| !r.errors.is_empty())
                .map(|r| json!({"p": r.p, "errors": r.errors}))
                .collect();
            match out {
                Some(path) => {
                    write(&path, &csv)?;
                    let meta = json!({
                        "command": "sweep",
                        "lo": lo, "hi": hi, "n": n,
                        "kinds": kinds.iter().map(|k| k.to_string()).collect::<Vec<_>>(),
                        "row_errors": errors,
                        "elapsed_seconds": start.elapsed().as_secs_f64(),
                        "version": env!("CARGO_PKG_VERSION"),
                    });
                    write(&sidecar(&path, "meta.json"), &format!("{}\n", rounded(&meta)))?;
                }
                None => {
                    print!("{csv}");
                    for e in &errors {
                        eprintln!("{}", rounded(&json!({"warning": "row_failed", "row": e})));
                    }
                }
            }
        }
        Command::Profile {
            p,
            gamma,
            omega,
            out,
            half_width,
            n,
        } => {
            let params = SolitonParams::new(p, gamma, omega)?;
            let report = soliton::quantity_report(&params)?;
            let mut value = json!({"params": params, "quantities": report});
            if let Some(path) = out {
                let g = Grid::new(half_width, n)?;
                let phi = grid::sample_profile(g, &params);
                write(&path, &phi.to_csv())?;
                value["grid"] = json!({"L": half_width, "n": n, "h": g.step()});
            }
            print_json(&value);
        }
        Command::Classify { p, gamma, omega } => {
            let params = SolitonParams::new(p, gamma, omega)?;
            print_json(&json!(thresholds::classify(&params)?));
        }
        Command::Simulate { config, initial, out } => {
            let config = SimConfig::from_key_values(&read(&config)?)?;
            let u0 = GridFunction::from_csv(&read(&initial)?)?;
            if u0.grid() != &config.grid {
                return Err(Error::GridMismatch {
                    expected: config.grid.len(),
                    actual: u0.grid().len(),
                });
            }
            let start = Instant::now();
            let trace = evolve::run(&u0, &config)?;
            write_trace(&out, &trace)?;
            let meta = json!({
                "command": "simulate",
                "config": config,
                "records": trace.records.len(),
                "max_mass_drift": trace.max_mass_drift,
                "max_energy_drift": trace.max_energy_drift,
                "boundary_warning": trace.boundary_warning,
                "elapsed_seconds": start.elapsed().as_secs_f64(),
                "version": env!("CARGO_PKG_VERSION"),
            });
            write(&sidecar(&out, "meta.json"), &format!("{}\n", rounded(&meta)))?;
            print_json(&trace.outcome.to_json());
        }
        Command::Blowup {
            p,
            gamma,
            omega,
            lambda,
            half_width,
            h,
            dt,
            t_end,
            stride,
            gradient_factor,
            peak_factor,
            abort_rel,
            solver_tol,
            out,
        } => {
            let params = SolitonParams::new(p, gamma, omega)?;
            let mut config = SimConfig::new(Grid::with_spacing(half_width, h)?, dt, t_end, params)?;
            config.record_stride = stride;
            if let Some(v) = gradient_factor {
                config.blowup_gradient_factor = v;
            }
            if let Some(v) = peak_factor {
                config.blowup_peak_factor = v;
            }
            if let Some(v) = abort_rel {
                config.conservation_abort_rel = v;
            }
            if let Some(v) = solver_tol {
                config.linear_solver_tol = v;
            }
            config.validate()?;
            let start = Instant::now();
            let report = evolve::blowup_experiment(&params, lambda, &config)?;
            let residual = evolve::virial_residual(&report.trace).ok();
            let mut value = json!(report);
            value["outcome"] = report.outcome.to_json();
            value["virial_residual"] = json!(residual);
            value["records"] = json!(report.trace.records.len());
            if let Some(path) = out {
                write_trace(&path, &report.trace)?;
                let meta = json!({
                    "command": "blowup",
                    "config": config,
                    "lambda": lambda,
                    "elapsed_seconds": start.elapsed().as_secs_f64(),
                    "version": env!("CARGO_PKG_VERSION"),
                });
                write(&sidecar(&path, "meta.json"), &format!("{}\n", rounded(&meta)))?;
            }
            print_json(&value);
        }
        Command::VirialCheck { trace, outcome } => {
            let outcome_path = outcome.unwrap_or_else(|| sidecar(&trace, "outcome.json"));
            let outcome = if outcome_path.exists() {
                let v: Value = serde_json::from_str(&read(&outcome_path)?)
                    .map_err(|e| Error::Parse(format!("{}: {e}", outcome_path.display())))?;
                Outcome::from_json(&v)?
            } else {
                Outcome::Completed
            };
            let t = Trace::from_csv(&read(&trace)?, outcome)?;
            let residual = evolve::virial_residual(&t)?;
            print_json(&json!({
                "virial_residual": residual,
                "records_used": evolve::uniform_prefix(&t).len(),
                "records": t.records.len(),
            }));
        }
    }
    Ok(())
}

fn write_trace(path: &Path, trace: &Trace) -> nlsdelta::Result<()> {
    write(path, &trace.to_csv())?;
    write(
        &sidecar(path, "outcome.json"),
        &format!("{}\n", rounded(&trace.outcome.to_json())),
    )
}

/// `run.csv` → `run.<suffix>`.
fn sidecar(path: &Path, suffix: &str) -> PathBuf {
    path.with_extension(suffix)
}

fn read(path: &Path) -> nlsdelta::Result<String> {
    fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

fn write(path: &Path, text: &str) -> nlsdelta::Result<()> {
    fs::write(path, text).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

fn print_json(value: &Value) {
    println!("{}", serde_json::to_string_pretty(&rounded(value)).unwrap_or_default());
}

/// Every float rounded to 15 significant digits.
fn rounded(value: &Value) -> Value {
    match value {
        Value::Number(n) if n.is_f64() => {
            let x = n.as_f64().unwrap_or(f64::NAN);
            sig15(x).parse::<f64>().map(|r| json!(r)).unwrap_or(Value::Null)
        }
        Value::Array(a) => Value::Array(a.iter().map(rounded).collect()),
        Value::Object(o) => Value::Object(o.iter().map(|(k, v)| (k.clone(), rounded(v))).collect()),
        other => other.clone(),
    }
}
