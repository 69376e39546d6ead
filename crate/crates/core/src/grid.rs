//! Functions on a truncated symmetric grid `[-L, L]` and the discrete
//! versions of the energy, action, Nehari and virial functionals.
//!
//! Integrals use the trapezoid rule, `‖∂ₓv‖²` uses forward differences and
//! `|v(0)|²` is read off the centre node, which always sits at `x = 0`.

use crate::error::{domain, Error, Result};
use crate::format::{parse_f64, sig15};
use crate::roots::bisect;
use crate::soliton::{self, SolitonParams};
use num_complex::Complex64;
use serde::Serialize;

/// Boundary magnitude (relative to the peak) above which a function is
/// flagged as not fitting inside the window.
pub const BOUNDARY_WARNING: f64 = 1e-12;
/// Relative mass lost by `scale` beyond which the result is flagged.
pub const TRUNCATION_WARNING: f64 = 1e-8;

/// Uniform grid `x_j = -L + j h`, `j = 0..n`, with `n` odd.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Grid {
    half_width: f64,
    nodes: usize,
}

impl Grid {
    pub fn new(half_width: f64, nodes: usize) -> Result<Self> {
        if !(half_width > 0.0) || !half_width.is_finite() {
            return domain(format!("half width L = {half_width} must be positive"));
        }
        if nodes < 3 || nodes.is_multiple_of(2) {
            return domain(format!("node count n = {nodes} must be odd and at least 3"));
        }
        Ok(Self { half_width, nodes })
    }

    /// Grid on `[-L, L]` with spacing `h`; `2L/h` must be an even integer
    /// up to rounding.
    pub fn with_spacing(half_width: f64, h: f64) -> Result<Self> {
        if !(h > 0.0) {
            return domain(format!("spacing h = {h} must be positive"));
        }
        let cells = 2.0 * half_width / h;
        let rounded = cells.round();
        if (cells - rounded).abs() > 1e-6 * rounded.max(1.0) || rounded as usize % 2 == 1 {
            return domain(format!("2L/h = {cells} must be an even integer"));
        }
        Self::new(half_width, rounded as usize + 1)
    }

    pub fn half_width(&self) -> f64 {
        self.half_width
    }

    pub fn len(&self) -> usize {
        self.nodes
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn step(&self) -> f64 {
        2.0 * self.half_width / (self.nodes - 1) as f64
    }

    pub fn center(&self) -> usize {
        (self.nodes - 1) / 2
    }

    /// `x_j`, computed from the centre so that `x(center) == 0` exactly and
    /// the grid is exactly symmetric.
    pub fn x(&self, j: usize) -> f64 {
        let c = self.center() as f64;
        (j as f64 - c) * self.half_width / c
    }

    pub fn points(&self) -> Vec<f64> {
        (0..self.nodes).map(|j| self.x(j)).collect()
    }

    /// Halved spacing on the same window.
    pub fn refined(&self) -> Self {
        Self {
            half_width: self.half_width,
            nodes: 2 * self.nodes - 1,
        }
    }
}

/// Complex samples of a function on a [`Grid`].
#[derive(Debug, Clone, PartialEq)]
pub struct GridFunction {
    grid: Grid,
    values: Vec<Complex64>,
}

impl GridFunction {
    pub fn new(grid: Grid, values: Vec<Complex64>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::GridMismatch {
                expected: grid.len(),
                actual: values.len(),
            });
        }
        if values.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return domain("grid function values must be finite");
        }
        Ok(Self { grid, values })
    }

    pub fn zeros(grid: Grid) -> Self {
        Self {
            grid,
            values: vec![Complex64::new(0.0, 0.0); grid.len()],
        }
    }

    pub fn from_fn<F: Fn(f64) -> Complex64>(grid: Grid, f: F) -> Self {
        let values = (0..grid.len()).map(|j| f(grid.x(j))).collect();
        Self { grid, values }
    }

    pub fn from_real<F: Fn(f64) -> f64>(grid: Grid, f: F) -> Self {
        Self::from_fn(grid, |x| Complex64::new(f(x), 0.0))
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<Complex64> {
        self.values
    }

    pub(crate) fn values_mut(&mut self) -> &mut [Complex64] {
        &mut self.values
    }

    pub fn map<F: Fn(Complex64) -> Complex64>(&self, f: F) -> Self {
        Self {
            grid: self.grid,
            values: self.values.iter().map(|&z| f(z)).collect(),
        }
    }

    pub fn scaled_by(&self, factor: f64) -> Self {
        self.map(|z| z * factor)
    }

    pub fn peak_sq(&self) -> f64 {
        self.values.iter().map(|z| z.norm_sqr()).fold(0.0, f64::max)
    }

    /// `max(|v(-L)|, |v(L)|) / max |v|`, or 0 for the zero function.
    pub fn boundary_ratio(&self) -> f64 {
        let peak = self.peak_sq().sqrt();
        if peak == 0.0 {
            return 0.0;
        }
        let n = self.values.len();
        self.values[0].norm().max(self.values[n - 1].norm()) / peak
    }

    pub fn mass(&self) -> f64 {
        trapezoid(&self.grid, |j| self.values[j].norm_sqr())
    }

    pub fn grad_sq(&self) -> f64 {
        let h = self.grid.step();
        self.values.windows(2).map(|w| (w[1] - w[0]).norm_sqr()).sum::<f64>() / h
    }

    pub fn boundary_sq(&self) -> f64 {
        self.values[self.grid.center()].norm_sqr()
    }

    /// `∫ |v|^{p+1}`.
    pub fn lp(&self, p: f64) -> f64 {
        let e = 0.5 * (p + 1.0);
        trapezoid(&self.grid, |j| pow_half_integer(self.values[j].norm_sqr(), e))
    }

    /// `V = ∫ x² |v|²`.
    pub fn virial_moment(&self) -> f64 {
        trapezoid(&self.grid, |j| {
            let x = self.grid.x(j);
            x * x * self.values[j].norm_sqr()
        })
    }

    /// Trapezoid `∫ conj(v) w` plus the forward-difference `∫ conj(v') w'`.
    pub fn h1_inner(&self, other: &GridFunction) -> Result<Complex64> {
        self.require_same_grid(other)?;
        let h = self.grid.step();
        let l2 = trapezoid_complex(&self.grid, |j| self.values[j].conj() * other.values[j]);
        let grad: Complex64 = self
            .values
            .windows(2)
            .zip(other.values.windows(2))
            .map(|(a, b)| (a[1] - a[0]).conj() * (b[1] - b[0]))
            .sum();
        Ok(l2 + grad / h)
    }

    pub fn h1_norm(&self) -> f64 {
        (self.mass() + self.grad_sq()).sqrt()
    }

    fn require_same_grid(&self, other: &GridFunction) -> Result<()> {
        if self.grid != other.grid {
            return Err(Error::GridMismatch {
                expected: self.grid.len(),
                actual: other.grid.len(),
            });
        }
        Ok(())
    }

    /// CSV with header `x,re,im`.
    pub fn to_csv(&self) -> String {
        let mut out = String::with_capacity(64 * self.values.len());
        out.push_str("x,re,im\n");
        for (j, z) in self.values.iter().enumerate() {
            out.push_str(&sig15(self.grid.x(j)));
            out.push(',');
            out.push_str(&sig15(z.re));
            out.push(',');
            out.push_str(&sig15(z.im));
            out.push('\n');
        }
        out
    }

    /// Parses `x,re,im` CSV. The abscissae must form a symmetric uniform
    /// grid with an odd number of nodes.
    pub fn from_csv(text: &str) -> Result<Self> {
        let mut lines = text.lines().filter(|l| !l.trim().is_empty());
        match lines.next().map(str::trim) {
            Some("x,re,im") => {}
            other => return Err(Error::Parse(format!("expected header 'x,re,im', found {other:?}"))),
        }
        let mut xs = Vec::new();
        let mut values = Vec::new();
        for (i, line) in lines.enumerate() {
            let fields: Vec<&str> = line.split(',').collect();
            if fields.len() != 3 {
                return Err(Error::Parse(format!(
                    "row {} has {} fields, expected 3",
                    i + 1,
                    fields.len()
                )));
            }
            xs.push(parse_f64(fields[0], "x")?);
            values.push(Complex64::new(parse_f64(fields[1], "re")?, parse_f64(fields[2], "im")?));
        }
        let n = xs.len();
        if n < 3 {
            return Err(Error::Parse(format!("need at least 3 rows, found {n}")));
        }
        let half_width = xs[n - 1];
        let grid = Grid::new(half_width, n)
            .map_err(|e| Error::Parse(format!("rows do not form a symmetric odd grid: {e}")))?;
        let h = grid.step();
        for (j, &x) in xs.iter().enumerate() {
            if (x - grid.x(j)).abs() > 1e-9 * h.max(half_width * 1e-6) {
                return Err(Error::Parse(format!(
                    "row {} has x = {x}, expected {} on a uniform symmetric grid",
                    j + 1,
                    grid.x(j)
                )));
            }
        }
        GridFunction::new(grid, values)
    }
}

fn trapezoid<F: Fn(usize) -> f64>(grid: &Grid, f: F) -> f64 {
    let n = grid.len();
    let interior: f64 = (1..n - 1).map(&f).sum();
    grid.step() * (interior + 0.5 * (f(0) + f(n - 1)))
}

fn trapezoid_complex<F: Fn(usize) -> Complex64>(grid: &Grid, f: F) -> Complex64 {
    let n = grid.len();
    let interior: Complex64 = (1..n - 1).map(&f).sum();
    (interior + (f(0) + f(n - 1)) * 0.5) * grid.step()
}

/// `s^e` for `s >= 0`, avoiding `powf` when `2e` is an integer.
pub(crate) fn pow_half_integer(s: f64, e: f64) -> f64 {
    let twice = 2.0 * e;
    if twice == twice.round() && twice.abs() < 64.0 {
        let k = twice as i32;
        if k % 2 == 0 {
            s.powi(k / 2)
        } else {
            s.powi(k / 2) * s.sqrt()
        }
    } else {
        s.powf(e)
    }
}

/// Discrete functionals of one grid function.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FunctionalValues {
    pub mass: f64,
    pub grad_sq: f64,
    pub boundary_sq: f64,
    pub lp: f64,
    pub energy: f64,
    pub action_omega: f64,
    pub nehari_omega: f64,
    pub virial_p: f64,
}

impl FunctionalValues {
    /// Composites from the four basic integrals. `kappa` multiplies the
    /// nonlinear term (1 for the focusing equation).
    #[allow(clippy::too_many_arguments)]
    pub fn from_parts(
        mass: f64,
        grad_sq: f64,
        boundary_sq: f64,
        lp: f64,
        p: f64,
        gamma: f64,
        omega: f64,
        kappa: f64,
    ) -> Self {
        let alpha = 0.5 * (p - 1.0);
        let nl = kappa * lp;
        let energy = 0.5 * grad_sq - 0.5 * gamma * boundary_sq - nl / (p + 1.0);
        Self {
            mass,
            grad_sq,
            boundary_sq,
            lp,
            energy,
            action_omega: energy + 0.5 * omega * mass,
            nehari_omega: grad_sq + omega * mass - gamma * boundary_sq - nl,
            virial_p: grad_sq - 0.5 * gamma * boundary_sq - alpha * nl / (p + 1.0),
        }
    }

    /// Sum of the magnitudes of the terms making up the energy.
    pub fn energy_scale(&self, p: f64, gamma: f64, kappa: f64) -> f64 {
        0.5 * self.grad_sq + 0.5 * gamma.abs() * self.boundary_sq + kappa.abs() * self.lp / (p + 1.0)
    }
}

pub fn functionals(v: &GridFunction, p: f64, gamma: f64, omega: f64) -> FunctionalValues {
    functionals_with_coefficient(v, p, gamma, omega, 1.0)
}

pub fn functionals_with_coefficient(v: &GridFunction, p: f64, gamma: f64, omega: f64, kappa: f64) -> FunctionalValues {
    FunctionalValues::from_parts(v.mass(), v.grad_sq(), v.boundary_sq(), v.lp(p), p, gamma, omega, kappa)
}

/// `φ_ω` sampled on `grid`.
pub fn sample_profile(grid: Grid, params: &SolitonParams) -> GridFunction {
    GridFunction::from_real(grid, |x| soliton::profile_value(params, x))
}

/// Result of [`scale`].
#[derive(Debug, Clone, PartialEq)]
pub struct Scaled {
    pub function: GridFunction,
    /// Fraction of the mass of `v` lying beyond `λL` (lost when `λ < 1`).
    pub truncated_mass_fraction: f64,
    pub warning: bool,
}

/// `v^λ(x) = λ^{1/2} v(λx)` on the same grid.
///
/// Values between nodes come from four-point cubic Lagrange interpolation
/// whose stencil never crosses `x = 0`, so the kink at the defect is not
/// smeared. Points with `|λx| > L` get the value 0.
pub fn scale(v: &GridFunction, lambda: f64) -> Result<Scaled> {
    if !(lambda > 0.0) || !lambda.is_finite() {
        return domain(format!("scaling factor λ = {lambda} must be positive"));
    }
    let grid = *v.grid();
    if lambda == 1.0 {
        return Ok(Scaled {
            function: v.clone(),
            truncated_mass_fraction: 0.0,
            warning: false,
        });
    }
    let amp = lambda.sqrt();
    let values = (0..grid.len())
        .map(|j| interpolate(v, lambda * grid.x(j)) * amp)
        .collect();
    let function = GridFunction { grid, values };

    let truncated_mass_fraction = if lambda < 1.0 {
        let total = v.mass();
        let cut = lambda * grid.half_width();
        let outside: f64 = (0..grid.len())
            .filter(|&j| grid.x(j).abs() > cut)
            .map(|j| v.values[j].norm_sqr())
            .sum::<f64>()
            * grid.step();
        if total > 0.0 {
            outside / total
        } else {
            0.0
        }
    } else {
        0.0
    };
    Ok(Scaled {
        function,
        truncated_mass_fraction,
        warning: truncated_mass_fraction > TRUNCATION_WARNING,
    })
}

fn interpolate(v: &GridFunction, y: f64) -> Complex64 {
    let grid = v.grid();
    let l = grid.half_width();
    if y.abs() > l {
        return Complex64::new(0.0, 0.0);
    }
    let c = grid.center();
    let h = grid.step();
    let n = grid.len();
    let s = y / h + c as f64;
    let k = (s.floor() as usize).min(n - 2);
    if s == k as f64 {
        return v.values[k];
    }
    // Allowed index range: one side of the defect.
    let (lo, hi) = if y >= 0.0 { (c, n - 1) } else { (0, c) };
    if hi - lo < 3 {
        let t = s - k as f64;
        return v.values[k] * (1.0 - t) + v.values[k + 1] * t;
    }
    let start = (k.saturating_sub(1)).clamp(lo, hi - 3);
    let mut acc = Complex64::new(0.0, 0.0);
    for i in 0..4 {
        let mut w = 1.0;
        let xi = (start + i) as f64;
        for m in 0..4 {
            if m != i {
                let xm = (start + m) as f64;
                w *= (s - xm) / (xi - xm);
            }
        }
        acc += v.values[start + i] * w;
    }
    acc
}

/// Critical points and zeros of `λ ↦ E(v^λ) = aλ² − bλ − cλ^α`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LambdaLandscape {
    /// Local minimum of `E(v^λ)`.
    pub lambda1: f64,
    pub lambda2: f64,
    /// Local maximum of `E(v^λ)`.
    pub lambda3: f64,
    pub lambda4: f64,
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub alpha: f64,
}

impl LambdaLandscape {
    pub fn energy(&self, lambda: f64) -> f64 {
        self.a * lambda * lambda - self.b * lambda - self.c * lambda.powf(self.alpha)
    }

    pub fn energy_derivative(&self, lambda: f64) -> f64 {
        2.0 * self.a * lambda - self.b - self.c * self.alpha * lambda.powf(self.alpha - 1.0)
    }
}

pub fn lambda_landscape(v: &GridFunction, p: f64, gamma: f64) -> Result<LambdaLandscape> {
    let f = functionals(v, p, gamma, 0.0);
    let alpha = 0.5 * (p - 1.0);
    if !(alpha > 2.0) {
        return Err(Error::NoLandscape(format!("needs α = (p−1)/2 > 2, got {alpha}")));
    }
    if !(f.energy > 0.0) {
        return Err(Error::NoLandscape(format!("needs E(v) > 0, got {}", f.energy)));
    }
    let (a, b, c) = (0.5 * f.grad_sq, 0.5 * gamma * f.boundary_sq, f.lp / (p + 1.0));
    if !(b > 0.0) {
        return Err(Error::NoLandscape(format!("needs γ|v(0)|² > 0, got b = {b}")));
    }
    if !(c > 0.0) {
        return Err(Error::NoLandscape("needs a nonzero nonlinear term".into()));
    }
    let land = LambdaLandscape {
        lambda1: 0.0,
        lambda2: 0.0,
        lambda3: 0.0,
        lambda4: 0.0,
        a,
        b,
        c,
        alpha,
    };
    // E'(λ) is concave with its maximum at λ*; g(λ) = E(v^λ)/λ is concave
    // with its maximum at λg. E(v) > 0 makes both maxima positive.
    let d_energy = |x: f64| Ok(land.energy_derivative(x));
    let g = |x: f64| Ok(a * x - b - c * x.powf(alpha - 1.0));
    let lambda_star = (2.0 * a / (c * alpha * (alpha - 1.0))).powf(1.0 / (alpha - 2.0));
    let lambda_g = (a / (c * (alpha - 1.0))).powf(1.0 / (alpha - 2.0));
    let tol = |x: f64| 1e-15 * x.max(1e-300);
    let lambda1 = bisect(d_energy, 0.0, lambda_star, tol(lambda_star))?;
    let lambda3 = bisect(
        d_energy,
        lambda_star,
        grow_until_negative(&d_energy, lambda_star)?,
        tol(lambda_star),
    )?;
    let lambda2 = bisect(g, 0.0, lambda_g, tol(lambda_g))?;
    let lambda4 = bisect(g, lambda_g, grow_until_negative(&g, lambda_g)?, tol(lambda_g))?;
    let out = LambdaLandscape {
        lambda1,
        lambda2,
        lambda3,
        lambda4,
        ..land
    };
    if !(lambda1 < lambda2 && lambda2 < lambda3 && lambda3 < lambda4) {
        return Err(Error::NoLandscape(format!(
            "roots not strictly ordered: {lambda1}, {lambda2}, {lambda3}, {lambda4}"
        )));
    }
    Ok(out)
}

fn grow_until_negative<F: Fn(f64) -> Result<f64>>(f: &F, start: f64) -> Result<f64> {
    let mut x = 2.0 * start;
    for _ in 0..200 {
        if f(x)? < 0.0 {
            return Ok(x);
        }
        x *= 2.0;
    }
    Err(Error::NoSignChange {
        lo: start,
        hi: x,
        f_lo: f(start)?,
        f_hi: f(x)?,
    })
}

/// What `E(φ_ω)` and `‖φ_ω‖²` are compared against in [`membership_b`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ReferenceKind {
    /// `φ_ω` sampled on the same grid as `v`, so the discretisation error
    /// is common to both sides of the comparison.
    Grid,
    /// Closed-form values.
    ClosedForm,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MembershipTolerance {
    /// Allowed `|‖v‖² − ‖φ_ω‖²| / ‖φ_ω‖²`.
    pub mass_rel: f64,
    /// Strict inequalities are tested as `< −margin`.
    pub margin: f64,
    pub reference: ReferenceKind,
}

impl Default for MembershipTolerance {
    fn default() -> Self {
        Self {
            mass_rel: 1e-4,
            margin: 1e-10,
            reference: ReferenceKind::Grid,
        }
    }
}

/// The reference values of `B_ω` for one grid and one standing wave.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MembershipReference {
    pub params: SolitonParams,
    pub energy: f64,
    pub mass: f64,
    pub tol: MembershipTolerance,
}

impl MembershipReference {
    pub fn new(grid: Grid, params: &SolitonParams, tol: MembershipTolerance) -> Result<Self> {
        let exact = soliton::quantity_report(params)?;
        if exact.energy <= 0.0 {
            return Err(Error::UndefinedSet { energy: exact.energy });
        }
        let (energy, mass) = match tol.reference {
            ReferenceKind::ClosedForm => (exact.energy, exact.mass),
            ReferenceKind::Grid => {
                let f = functionals(
                    &sample_profile(grid, params),
                    params.p(),
                    params.gamma(),
                    params.omega(),
                );
                if f.energy <= 0.0 {
                    return Err(Error::UndefinedSet { energy: f.energy });
                }
                (f.energy, f.mass)
            }
        };
        Ok(Self {
            params: *params,
            energy,
            mass,
            tol,
        })
    }

    pub fn check(&self, f: &FunctionalValues) -> MembershipReport {
        let m = self.tol.margin;
        let energy_ok = f.energy > m && f.energy < self.energy - m;
        let mass_ok = (f.mass - self.mass).abs() <= self.tol.mass_rel * self.mass;
        let virial_negative = f.virial_p < -m;
        let nehari_negative = f.nehari_omega < -m;
        MembershipReport {
            energy_ok,
            mass_ok,
            virial_negative,
            nehari_negative,
            member: energy_ok && mass_ok && virial_negative && nehari_negative,
            energy: f.energy,
            mass: f.mass,
            virial_p: f.virial_p,
            nehari_omega: f.nehari_omega,
            reference_energy: self.energy,
            reference_mass: self.mass,
            boundary_warning: false,
        }
    }
}

/// The four conditions defining `B_ω` and their conjunction.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MembershipReport {
    /// `0 < E(v) < E(φ_ω)`.
    pub energy_ok: bool,
    /// `‖v‖² = ‖φ_ω‖²` within `mass_rel`.
    pub mass_ok: bool,
    /// `P(v) < 0`.
    pub virial_negative: bool,
    /// `K_ω(v) < 0`.
    pub nehari_negative: bool,
    pub member: bool,
    pub energy: f64,
    pub mass: f64,
    pub virial_p: f64,
    pub nehari_omega: f64,
    pub reference_energy: f64,
    pub reference_mass: f64,
    /// `v` is not negligible at `±L`.
    pub boundary_warning: bool,
}

pub fn membership_b(v: &GridFunction, params: &SolitonParams, tol: MembershipTolerance) -> Result<MembershipReport> {
    let reference = MembershipReference::new(*v.grid(), params, tol)?;
    let f = functionals(v, params.p(), params.gamma(), params.omega());
    let mut report = reference.check(&f);
    report.boundary_warning = v.boundary_ratio() > BOUNDARY_WARNING;
    Ok(report)
}

/// `E(v) − P(v) − E(φ_ω)` for a member `v` of `B_ω`.
pub fn ep_gap(v: &GridFunction, params: &SolitonParams, tol: MembershipTolerance) -> Result<f64> {
    let report = membership_b(v, params, tol)?;
    if !report.member {
        return Err(Error::Precondition(format!("v is not in B_ω: {report:?}")));
    }
    Ok(report.energy - report.virial_p - report.reference_energy)
}

/// `μw` on the Nehari manifold `K_ω = 0`, with its action.
#[derive(Debug, Clone, PartialEq)]
pub struct NehariRescaled {
    pub mu: f64,
    pub function: GridFunction,
    pub action: f64,
}

/// Rescales `w` by the unique `μ > 0` with `K_ω(μw) = 0`. Returns `None`
/// when no such `μ` exists, i.e. when `‖w'‖² + ω‖w‖² − γ|w(0)|² <= 0` or
/// `w` has no nonlinear term.
pub fn nehari_rescale(w: &GridFunction, p: f64, gamma: f64, omega: f64) -> Option<NehariRescaled> {
    let f = functionals(w, p, gamma, omega);
    let q = f.grad_sq + omega * f.mass - gamma * f.boundary_sq;
    if !(q > 0.0 && f.lp > 0.0) {
        return None;
    }
    let mu = (q / f.lp).powf(1.0 / (p - 1.0));
    let function = w.scaled_by(mu);
    let action = functionals(&function, p, gamma, omega).action_omega;
    Some(NehariRescaled { mu, function, action })
}

/// `inf_θ ‖u − e^{iθ}φ‖` in the discrete H¹ norm.
pub fn orbital_distance(u: &GridFunction, phi: &GridFunction) -> Result<f64> {
    let cross = phi.h1_inner(u)?.norm();
    let d2 = u.mass() + u.grad_sq() + phi.mass() + phi.grad_sq() - 2.0 * cross;
    Ok(d2.max(0.0).sqrt())
}
