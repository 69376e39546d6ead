//! Split-step time integration of
//!
//! ```text
//! i ∂ₜu = −∂ₓ²u − γ δ(x) u − κ |u|^{p−1} u
//! ```
//!
//! on a grid with zero Dirichlet data at `±L`, plus the diagnostics used by
//! the blowup experiments: traces of the conserved and monitored
//! functionals, the virial identity residual and `B_ω` membership.
//!
//! One step is Strang splitting: an exact half step of the pointwise phase
//! rotation `u ← u·exp(iκ|u|^{p−1}dt/2)`, a Crank–Nicolson step for
//! `H = −D² − (γ/h)e_c e_cᵀ`, then the second half step.

use crate::error::{domain, Error, Result};
use crate::format::{parse_f64, sig15};
use crate::grid::{
    self, functionals_with_coefficient, pow_half_integer, FunctionalValues, Grid, GridFunction, MembershipReference,
    MembershipReport, MembershipTolerance,
};
use crate::soliton::SolitonParams;
use crate::tridiag::{relative_residual, Factorized, Tridiagonal};
use num_complex::Complex64;
use serde::Serialize;
use std::fmt::Write as _;

/// Everything a run needs.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SimConfig {
    pub grid: Grid,
    pub dt: f64,
    pub t_end: f64,
    /// `p` and `γ` enter the equation; `ω` is only used for `K_ω` and `B_ω`.
    pub params: SolitonParams,
    pub blowup_gradient_factor: f64,
    pub blowup_peak_factor: f64,
    pub conservation_abort_rel: f64,
    pub linear_solver_tol: f64,
    /// A record is kept every `record_stride` steps.
    pub record_stride: usize,
    /// `κ`; 0 switches the nonlinearity off.
    pub nonlinear_coefficient: f64,
}

impl SimConfig {
    pub fn new(grid: Grid, dt: f64, t_end: f64, params: SolitonParams) -> Result<Self> {
        let c = Self {
            grid,
            dt,
            t_end,
            params,
            blowup_gradient_factor: 10.0,
            blowup_peak_factor: 8.0,
            conservation_abort_rel: 1e-4,
            linear_solver_tol: 1e-12,
            record_stride: 10,
            nonlinear_coefficient: 1.0,
        };
        c.validate()?;
        Ok(c)
    }

    pub fn validate(&self) -> Result<()> {
        let positive = [
            ("dt", self.dt),
            ("blowup_gradient_factor", self.blowup_gradient_factor),
            ("blowup_peak_factor", self.blowup_peak_factor),
            ("conservation_abort_rel", self.conservation_abort_rel),
            ("linear_solver_tol", self.linear_solver_tol),
        ];
        for (name, v) in positive {
            if !(v > 0.0) || !v.is_finite() {
                return domain(format!("{name} = {v} must be positive and finite"));
            }
        }
        if !(self.t_end >= 0.0) || !self.t_end.is_finite() {
            return domain(format!("t_end = {} must be non-negative", self.t_end));
        }
        if self.record_stride == 0 {
            return domain("record_stride must be at least 1");
        }
        if !self.nonlinear_coefficient.is_finite() {
            return domain("nonlinear_coefficient must be finite");
        }
        Ok(())
    }

    pub fn steps(&self) -> usize {
        (self.t_end / self.dt - 1e-9).ceil().max(0.0) as usize
    }

    /// Time between two regular records.
    pub fn record_interval(&self) -> f64 {
        self.record_stride as f64 * self.dt
    }

    /// Parses flat `key = value` text. `#` starts a comment. Required keys:
    /// `L`, either `n` or `h`, `dt`, `t_end`, `p`, `gamma`, `omega`.
    pub fn from_key_values(text: &str) -> Result<Self> {
        let mut entries: Vec<(String, String)> = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| Error::Parse(format!("line {}: expected key = value", i + 1)))?;
            let k = k.trim().to_string();
            if entries.iter().any(|(e, _)| *e == k) {
                return Err(Error::Parse(format!("line {}: duplicate key '{k}'", i + 1)));
            }
            entries.push((k, v.trim().to_string()));
        }
        let get = |key: &str| entries.iter().find(|(k, _)| k == key).map(|(_, v)| v.as_str());
        let num = |key: &str| -> Result<Option<f64>> { get(key).map(|v| parse_f64(v, key)).transpose() };
        let need = |key: &str| -> Result<f64> {
            num(key)?.ok_or_else(|| Error::Parse(format!("missing required key '{key}'")))
        };
        const KNOWN: [&str; 14] = [
            "L",
            "n",
            "h",
            "dt",
            "t_end",
            "p",
            "gamma",
            "omega",
            "blowup_gradient_factor",
            "blowup_peak_factor",
            "conservation_abort_rel",
            "linear_solver_tol",
            "record_stride",
            "nonlinear_coefficient",
        ];
        if let Some((k, _)) = entries.iter().find(|(k, _)| !KNOWN.contains(&k.as_str())) {
            return Err(Error::Parse(format!("unknown key '{k}'")));
        }

        let half_width = need("L")?;
        let grid = match (get("n"), num("h")?) {
            (Some(n), None) => {
                let n = n
                    .parse::<usize>()
                    .map_err(|_| Error::Parse(format!("bad n value '{n}'")))?;
                Grid::new(half_width, n)?
            }
            (None, Some(h)) => Grid::with_spacing(half_width, h)?,
            _ => return Err(Error::Parse("give exactly one of 'n' and 'h'".into())),
        };
        let params = SolitonParams::with_any_coupling(need("p")?, need("gamma")?, need("omega")?)?;
        let mut c = Self::new(grid, need("dt")?, need("t_end")?, params)?;
        if let Some(v) = num("blowup_gradient_factor")? {
            c.blowup_gradient_factor = v;
        }
        if let Some(v) = num("blowup_peak_factor")? {
            c.blowup_peak_factor = v;
        }
        if let Some(v) = num("conservation_abort_rel")? {
            c.conservation_abort_rel = v;
        }
        if let Some(v) = num("linear_solver_tol")? {
            c.linear_solver_tol = v;
        }
        if let Some(v) = get("record_stride") {
            c.record_stride = v
                .parse()
                .map_err(|_| Error::Parse(format!("bad record_stride value '{v}'")))?;
        }
        if let Some(v) = num("nonlinear_coefficient")? {
            c.nonlinear_coefficient = v;
        }
        c.validate()?;
        Ok(c)
    }

    /// Inverse of [`SimConfig::from_key_values`].
    pub fn to_key_values(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "L = {}", self.grid.half_width());
        let _ = writeln!(s, "n = {}", self.grid.len());
        let _ = writeln!(s, "dt = {}", self.dt);
        let _ = writeln!(s, "t_end = {}", self.t_end);
        let _ = writeln!(s, "p = {}", self.params.p());
        let _ = writeln!(s, "gamma = {}", self.params.gamma());
        let _ = writeln!(s, "omega = {}", self.params.omega());
        let _ = writeln!(s, "blowup_gradient_factor = {}", self.blowup_gradient_factor);
        let _ = writeln!(s, "blowup_peak_factor = {}", self.blowup_peak_factor);
        let _ = writeln!(s, "conservation_abort_rel = {}", self.conservation_abort_rel);
        let _ = writeln!(s, "linear_solver_tol = {}", self.linear_solver_tol);
        let _ = writeln!(s, "record_stride = {}", self.record_stride);
        let _ = writeln!(s, "nonlinear_coefficient = {}", self.nonlinear_coefficient);
        s
    }
}

/// Precomputed Crank–Nicolson factorization for one configuration.
#[derive(Debug, Clone)]
pub struct Propagator {
    config: SimConfig,
    /// `i dt / (2h²)`.
    r: Complex64,
    /// Extra diagonal term of the right-hand side at the centre node.
    center_rhs: Complex64,
    matrix: Tridiagonal,
    factors: Factorized,
    rhs: Vec<Complex64>,
    exponent: f64,
}

impl Propagator {
    pub fn new(config: &SimConfig) -> Result<Self> {
        config.validate()?;
        let grid = config.grid;
        let n = grid.len();
        if n < 3 {
            return domain("grid needs at least one interior node");
        }
        let h = grid.step();
        let m = n - 2;
        let r = Complex64::new(0.0, config.dt / (2.0 * h * h));
        let delta = Complex64::new(0.0, config.dt * config.params.gamma() / (2.0 * h));
        let one = Complex64::new(1.0, 0.0);
        let mut diag = vec![one + 2.0 * r; m];
        diag[grid.center() - 1] -= delta;
        let matrix = Tridiagonal {
            lower: vec![-r; m],
            diag,
            upper: vec![-r; m],
        };
        let factors = matrix.factorize()?;
        Ok(Self {
            config: *config,
            r,
            center_rhs: delta,
            matrix,
            factors,
            rhs: vec![Complex64::new(0.0, 0.0); m],
            exponent: 0.5 * (config.params.p() - 1.0),
        })
    }

    pub fn config(&self) -> &SimConfig {
        &self.config
    }

    /// `u ← u·exp(iκ|u|^{p−1}τ)`.
    pub fn nonlinear(&self, u: &mut [Complex64], tau: f64) {
        let k = self.config.nonlinear_coefficient * tau;
        if k == 0.0 {
            return;
        }
        for z in u.iter_mut() {
            let s = z.norm_sqr();
            if s == 0.0 {
                continue;
            }
            let (sin, cos) = (k * pow_half_integer(s, self.exponent)).sin_cos();
            *z *= Complex64::new(cos, sin);
        }
    }

    /// Crank–Nicolson step `(I + i dt/2 H) u⁺ = (I − i dt/2 H) u`; the
    /// boundary nodes are set to zero. With `check` the solve is verified
    /// against `linear_solver_tol`.
    pub fn linear(&mut self, u: &mut [Complex64], check: bool) -> Result<()> {
        let n = u.len();
        let c = self.config.grid.center();
        let r = self.r;
        let diag = Complex64::new(1.0, 0.0) - 2.0 * r;
        u[0] = Complex64::new(0.0, 0.0);
        u[n - 1] = Complex64::new(0.0, 0.0);
        for j in 1..n - 1 {
            self.rhs[j - 1] = diag * u[j] + r * (u[j - 1] + u[j + 1]);
        }
        self.rhs[c - 1] += self.center_rhs * u[c];
        let rhs = if check { Some(self.rhs.clone()) } else { None };
        self.factors.solve_in_place(&mut self.rhs);
        if let Some(b) = rhs {
            let res = relative_residual(&self.matrix, &self.rhs, &b);
            if !(res <= self.config.linear_solver_tol) {
                return Err(Error::Solver(format!(
                    "linear solve residual {res:e} exceeds {:e}",
                    self.config.linear_solver_tol
                )));
            }
        }
        u[1..n - 1].copy_from_slice(&self.rhs);
        Ok(())
    }

    /// One full Strang step.
    pub fn step(&mut self, u: &mut [Complex64], check: bool) -> Result<()> {
        let half = 0.5 * self.config.dt;
        self.nonlinear(u, half);
        self.linear(u, check)?;
        self.nonlinear(u, half);
        Ok(())
    }
}

/// One Strang step of `u`.
pub fn step(u: &GridFunction, config: &SimConfig) -> Result<GridFunction> {
    if u.grid() != &config.grid {
        return Err(Error::GridMismatch {
            expected: config.grid.len(),
            actual: u.grid().len(),
        });
    }
    let mut prop = Propagator::new(config)?;
    let mut values = u.values().to_vec();
    prop.step(&mut values, true)?;
    GridFunction::new(config.grid, values)
}

/// Monitored quantities at one time.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Record {
    pub t: f64,
    pub mass: f64,
    pub energy: f64,
    pub grad_sq: f64,
    pub peak_sq: f64,
    pub boundary_sq: f64,
    pub virial: f64,
    pub virial_p: f64,
    pub nehari: f64,
    pub in_b: bool,
    /// Individual `B_ω` conditions; absent when `B_ω` is undefined or the
    /// record was read back from CSV.
    #[serde(skip)]
    pub membership: Option<MembershipReport>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "outcome", rename_all = "snake_case")]
pub enum Outcome {
    Completed,
    BlowupDetected { t_star: f64 },
    ConservationViolation { t_star: f64, reason: String },
}

impl Outcome {
    pub fn name(&self) -> &'static str {
        match self {
            Outcome::Completed => "completed",
            Outcome::BlowupDetected { .. } => "blowup_detected",
            Outcome::ConservationViolation { .. } => "conservation_violation",
        }
    }

    pub fn t_star(&self) -> Option<f64> {
        match self {
            Outcome::Completed => None,
            Outcome::BlowupDetected { t_star } | Outcome::ConservationViolation { t_star, .. } => Some(*t_star),
        }
    }

    /// `{"outcome": ..., "t_star": ..., "reason": ...}`.
    pub fn to_json(&self) -> serde_json::Value {
        let reason = match self {
            Outcome::Completed => "reached t_end".to_string(),
            Outcome::BlowupDetected { .. } => {
                "gradient and peak growth factors reached with mass conserved".to_string()
            }
            Outcome::ConservationViolation { reason, .. } => reason.clone(),
        };
        serde_json::json!({
            "outcome": self.name(),
            "t_star": self.t_star(),
            "reason": reason,
        })
    }

    pub fn from_json(value: &serde_json::Value) -> Result<Self> {
        let name = value
            .get("outcome")
            .and_then(|v| v.as_str())
            .ok_or_else(|| Error::Parse("outcome JSON lacks 'outcome'".into()))?;
        let t_star = value.get("t_star").and_then(|v| v.as_f64());
        let need_t = || t_star.ok_or_else(|| Error::Parse("outcome JSON lacks 't_star'".into()));
        match name {
            "completed" => Ok(Outcome::Completed),
            "blowup_detected" => Ok(Outcome::BlowupDetected { t_star: need_t()? }),
            "conservation_violation" => Ok(Outcome::ConservationViolation {
                t_star: need_t()?,
                reason: value.get("reason").and_then(|v| v.as_str()).unwrap_or("").to_string(),
            }),
            other => Err(Error::Parse(format!("unknown outcome '{other}'"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Trace {
    pub records: Vec<Record>,
    pub outcome: Outcome,
    /// Largest relative mass drift seen at any record.
    pub max_mass_drift: f64,
    /// Largest energy drift seen at any record, relative to the energy scale.
    pub max_energy_drift: f64,
    /// `max(|u(±L)|)/max|u|` of the initial data exceeded the grid warning level.
    pub boundary_warning: bool,
}

pub const TRACE_HEADER: &str = "t,mass,energy,grad_sq,peak_sq,boundary_sq,virial,P,K,in_B";

impl Trace {
    pub fn times(&self) -> Vec<f64> {
        self.records.iter().map(|r| r.t).collect()
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::with_capacity(200 * (self.records.len() + 1));
        out.push_str(TRACE_HEADER);
        out.push('\n');
        for r in &self.records {
            let fields = [
                r.t,
                r.mass,
                r.energy,
                r.grad_sq,
                r.peak_sq,
                r.boundary_sq,
                r.virial,
                r.virial_p,
                r.nehari,
            ];
            for f in fields {
                out.push_str(&sig15(f));
                out.push(',');
            }
            out.push_str(if r.in_b { "1" } else { "0" });
            out.push('\n');
        }
        out
    }

    /// Reads a trace CSV; the outcome comes from the separate JSON object.
    pub fn from_csv(text: &str, outcome: Outcome) -> Result<Self> {
        let mut lines = text.lines().filter(|l| !l.trim().is_empty());
        match lines.next().map(str::trim) {
            Some(TRACE_HEADER) => {}
            other => {
                return Err(Error::Parse(format!(
                    "expected header '{TRACE_HEADER}', found {other:?}"
                )))
            }
        }
        let mut records = Vec::new();
        for (i, line) in lines.enumerate() {
            let f: Vec<&str> = line.split(',').map(str::trim).collect();
            if f.len() != 10 {
                return Err(Error::Parse(format!(
                    "trace row {} has {} fields, expected 10",
                    i + 1,
                    f.len()
                )));
            }
            let in_b = match f[9] {
                "1" | "true" => true,
                "0" | "false" => false,
                other => return Err(Error::Parse(format!("bad in_B value '{other}'"))),
            };
            let r = Record {
                t: parse_f64(f[0], "t")?,
                mass: parse_f64(f[1], "mass")?,
                energy: parse_f64(f[2], "energy")?,
                grad_sq: parse_f64(f[3], "grad_sq")?,
                peak_sq: parse_f64(f[4], "peak_sq")?,
                boundary_sq: parse_f64(f[5], "boundary_sq")?,
                virial: parse_f64(f[6], "virial")?,
                virial_p: parse_f64(f[7], "P")?,
                nehari: parse_f64(f[8], "K")?,
                in_b,
                membership: None,
            };
            if let Some(prev) = records.last() {
                let prev: &Record = prev;
                if !(r.t > prev.t) {
                    return Err(Error::Parse(format!("trace times not increasing at row {}", i + 1)));
                }
            }
            records.push(r);
        }
        let m0 = records.first().map(|r| r.mass).unwrap_or(0.0);
        let e0 = records.first().map(|r| r.energy).unwrap_or(0.0);
        let max_mass_drift = records.iter().map(|r| relative(r.mass, m0)).fold(0.0, f64::max);
        let max_energy_drift = records
            .iter()
            .map(|r| (r.energy - e0).abs() / r.energy.abs().max(e0.abs()).max(f64::MIN_POSITIVE))
            .fold(0.0, f64::max);
        Ok(Self {
            records,
            outcome,
            max_mass_drift,
            max_energy_drift,
            boundary_warning: false,
        })
    }
}

fn relative(x: f64, reference: f64) -> f64 {
    if reference == 0.0 {
        x.abs()
    } else {
        (x - reference).abs() / reference.abs()
    }
}

struct Observer {
    p: f64,
    gamma: f64,
    omega: f64,
    kappa: f64,
    reference: Option<MembershipReference>,
}

impl Observer {
    fn functionals(&self, u: &GridFunction) -> FunctionalValues {
        functionals_with_coefficient(u, self.p, self.gamma, self.omega, self.kappa)
    }

    fn record(&self, t: f64, u: &GridFunction) -> (Record, FunctionalValues) {
        let f = self.functionals(u);
        let membership = self.reference.as_ref().map(|r| r.check(&f));
        let rec = Record {
            t,
            mass: f.mass,
            energy: f.energy,
            grad_sq: f.grad_sq,
            peak_sq: u.peak_sq(),
            boundary_sq: f.boundary_sq,
            virial: u.virial_moment(),
            virial_p: f.virial_p,
            nehari: f.nehari_omega,
            in_b: membership.map(|m| m.member).unwrap_or(false),
            membership,
        };
        (rec, f)
    }
}

/// Evolves `u0` to `t_end` or until a blowup or conservation failure is
/// declared.
///
/// Blowup is declared at the first step where `‖∂ₓu‖² ≥ G²‖∂ₓu₀‖²` and
/// `max|u| ≥ F·max|u₀|` while the mass drift is within
/// `conservation_abort_rel`. A conservation violation is declared when the
/// mass drift exceeds the bound, or when the energy drift relative to the
/// current energy scale `‖∂ₓu‖²/2 + γ|u(0)|²/2 + κ‖u‖^{p+1}/(p+1)` does
/// so before the gradient has grown by `G²`. The peak test runs every
/// step; the remaining tests run at records and whenever the peak test
/// fires.
pub fn run(u0: &GridFunction, config: &SimConfig) -> Result<Trace> {
    run_observed(u0, config, |_, _| {})
}

/// [`run`], calling `observe` with every retained record and the state it
/// was taken from.
pub fn run_observed<F>(u0: &GridFunction, config: &SimConfig, mut observe: F) -> Result<Trace>
where
    F: FnMut(&Record, &GridFunction),
{
    if u0.grid() != &config.grid {
        return Err(Error::GridMismatch {
            expected: config.grid.len(),
            actual: u0.grid().len(),
        });
    }
    let mut prop = Propagator::new(config)?;
    let params = config.params;
    let reference = if config.nonlinear_coefficient == 1.0 && params.gamma() > 0.0 {
        match MembershipReference::new(config.grid, &params, MembershipTolerance::default()) {
            Ok(r) => Some(r),
            Err(Error::UndefinedSet { .. }) => None,
            Err(e) => return Err(e),
        }
    } else {
        None
    };
    let obs = Observer {
        p: params.p(),
        gamma: params.gamma(),
        omega: params.omega(),
        kappa: config.nonlinear_coefficient,
        reference,
    };

    let boundary_warning = u0.boundary_ratio() > grid::BOUNDARY_WARNING;
    let mut u = u0.clone();
    let (first, f0) = obs.record(0.0, &u);
    observe(&first, &u);
    let mut records = vec![first];
    let (mass0, energy0) = (f0.mass, f0.energy);
    let gradient_threshold = config.blowup_gradient_factor.powi(2) * f0.grad_sq;
    let peak_threshold = config.blowup_peak_factor.powi(2) * u.peak_sq();
    let abort = config.conservation_abort_rel;
    // Growth is measured against nonzero initial data only.
    let can_grow = peak_threshold > 0.0 && gradient_threshold > 0.0;
    let mut max_mass_drift: f64 = 0.0;
    let mut max_energy_drift: f64 = 0.0;

    let steps = config.steps();
    let half = 0.5 * config.dt;
    let stride = config.record_stride;
    // The trailing half step of one step and the leading half step of the
    // next are merged while nothing is observed in between; |u| is the
    // same for both, so this is exact.
    let mut owes_half = false;
    let mut outcome = Outcome::Completed;
    for k in 1..=steps {
        let values = u.values_mut();
        prop.nonlinear(values, if owes_half { config.dt } else { half });
        let regular = k % stride == 0 || k == steps;
        prop.linear(values, regular)?;
        owes_half = true;
        let peak_hit = can_grow && values.iter().map(|z| z.norm_sqr()).fold(0.0, f64::max) >= peak_threshold;
        if !(regular || peak_hit) {
            continue;
        }
        prop.nonlinear(values, half);
        owes_half = false;
        let t = k as f64 * config.dt;
        let (rec, f) = obs.record(t, &u);
        let mass_drift = relative(f.mass, mass0);
        let energy_scale = f.energy_scale(obs.p, obs.gamma, obs.kappa);
        let energy_drift = if energy_scale > 0.0 {
            (f.energy - energy0).abs() / energy_scale
        } else {
            (f.energy - energy0).abs()
        };
        max_mass_drift = max_mass_drift.max(mass_drift);
        max_energy_drift = max_energy_drift.max(energy_drift);
        let gradient_grown = can_grow && f.grad_sq >= gradient_threshold;
        let growth = peak_hit && gradient_grown;
        if regular || growth {
            observe(&rec, &u);
            records.push(rec);
        }
        if growth && mass_drift <= abort {
            outcome = Outcome::BlowupDetected { t_star: t };
            break;
        }
        if mass_drift > abort {
            outcome = Outcome::ConservationViolation {
                t_star: t,
                reason: format!("relative mass drift {mass_drift:e} exceeds {abort:e}"),
            };
            break;
        }
        // Once the gradient has grown by the detection factor the collapse
        // is no longer resolved and only the mass certifies the run.
        if energy_drift > abort && !gradient_grown {
            if !regular {
                observe(&rec, &u);
                records.push(rec);
            }
            outcome = Outcome::ConservationViolation {
                t_star: t,
                reason: format!("relative energy drift {energy_drift:e} exceeds {abort:e}"),
            };
            break;
        }
    }
    Ok(Trace {
        records,
        outcome,
        max_mass_drift,
        max_energy_drift,
        boundary_warning,
    })
}

/// Leading records that are uniformly spaced and precede any blowup or
/// conservation flag.
pub fn uniform_prefix(trace: &Trace) -> &[Record] {
    let recs = &trace.records;
    let cutoff = trace.outcome.t_star().unwrap_or(f64::INFINITY);
    let mut end = recs.iter().take_while(|r| r.t < cutoff).count();
    if end >= 2 {
        let tau = recs[1].t - recs[0].t;
        let mut k = 2;
        while k < end && ((recs[k].t - recs[k - 1].t) - tau).abs() <= 1e-6 * tau {
            k += 1;
        }
        end = k;
    }
    &recs[..end]
}

/// `max |Δ²V/τ² − 8P| / max(1, |8P|)` over interior records of the
/// uniform prefix.
pub fn virial_residual(trace: &Trace) -> Result<f64> {
    let recs = uniform_prefix(trace);
    if recs.len() < 3 {
        return Err(Error::InsufficientRecords {
            needed: 3,
            have: recs.len(),
        });
    }
    let tau = recs[1].t - recs[0].t;
    let worst = recs
        .windows(3)
        .map(|w| {
            let d2 = (w[2].virial - 2.0 * w[1].virial + w[0].virial) / (tau * tau);
            let rhs = 8.0 * w[1].virial_p;
            (d2 - rhs).abs() / rhs.abs().max(1.0)
        })
        .fold(0.0, f64::max);
    Ok(worst)
}

/// Report of one blowup experiment started from `φ_ω^λ`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BlowupReport {
    pub params: SolitonParams,
    pub lambda: f64,
    /// `None` when `E(φ_ω) <= 0`, where `B_ω` is undefined.
    pub membership: Option<MembershipReport>,
    pub undefined_set: bool,
    pub member: bool,
    pub outcome: Outcome,
    pub t_star: Option<f64>,
    /// `P(u(t)) < 0` at every record before detection.
    pub virial_negative_throughout: bool,
    /// Every record before detection was a member of `B_ω`.
    pub membership_invariant: bool,
    /// Largest `Δ²V/τ² − 8(E(u₀) − E(φ_ω))` over interior records before
    /// detection; not positive up to discretisation error for members.
    pub max_virial_excess: Option<f64>,
    pub mass_drift_at_end: f64,
    pub initial_energy: f64,
    pub scale_warning: bool,
    #[serde(skip)]
    pub trace: Trace,
}

pub fn blowup_experiment(params: &SolitonParams, lambda: f64, config: &SimConfig) -> Result<BlowupReport> {
    if !(params.p() > 5.0) {
        return domain(format!("blowup experiments need p > 5, got p = {}", params.p()));
    }
    if !(lambda > 0.0) || !lambda.is_finite() {
        return domain(format!("λ = {lambda} must be positive"));
    }
    if config.params != *params {
        return domain("config.params differs from the experiment parameters");
    }
    let phi = grid::sample_profile(config.grid, params);
    let scaled = grid::scale(&phi, lambda)?;
    let u0 = scaled.function;
    let (membership, undefined_set) = match grid::membership_b(&u0, params, MembershipTolerance::default()) {
        Ok(m) => (Some(m), false),
        Err(Error::UndefinedSet { .. }) => (None, true),
        Err(e) => return Err(e),
    };
    let member = membership.map(|m| m.member).unwrap_or(false);
    let trace = run(&u0, config)?;
    let before: Vec<&Record> = match trace.outcome.t_star() {
        Some(ts) => trace.records.iter().filter(|r| r.t < ts).collect(),
        None => trace.records.iter().collect(),
    };
    let virial_negative_throughout = before.iter().all(|r| r.virial_p < 0.0);
    let membership_invariant = before.iter().all(|r| r.in_b);
    let initial_energy = trace.records[0].energy;
    let max_virial_excess = membership.map(|m| {
        let bound = 8.0 * (initial_energy - m.reference_energy);
        let prefix = uniform_prefix(&trace);
        let tau = config.record_interval();
        prefix
            .windows(3)
            .map(|w| (w[2].virial - 2.0 * w[1].virial + w[0].virial) / (tau * tau) - bound)
            .fold(f64::NEG_INFINITY, f64::max)
    });
    let m0 = trace.records[0].mass;
    let mass_drift_at_end = relative(trace.records.last().map(|r| r.mass).unwrap_or(m0), m0);
    Ok(BlowupReport {
        params: *params,
        lambda,
        membership,
        undefined_set,
        member,
        t_star: trace.outcome.t_star(),
        outcome: trace.outcome.clone(),
        virial_negative_throughout,
        membership_invariant,
        max_virial_excess,
        mass_drift_at_end,
        initial_energy,
        scale_warning: scaled.warning,
        trace,
    })
}
