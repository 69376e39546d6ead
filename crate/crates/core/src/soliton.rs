//! Closed-form standing-wave profile `φ_ω` and the scalar quantities
//! derived from it.
//!
//! All powers of `(p+1)ω/2` are taken in log space so that frequency
//! sweeps up to `ω ~ 1e6` and large `p` do not overflow.

use crate::error::{domain, Result};
use crate::quadrature::DoubleExponential;
use crate::special_integrals::j;
use serde::Serialize;
use std::f64::consts::LN_2;

/// Parameters are flagged as near-threshold once `1 - ξ` drops below this.
pub const NEAR_THRESHOLD: f64 = 1e-6;

/// `|R| <= SIGN_TOL` is reported as a zero sign by [`energy_sign`].
pub const SIGN_TOL: f64 = 1e-12;

/// Nonlinearity power, delta coupling and frequency of one standing wave.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SolitonParams {
    p: f64,
    gamma: f64,
    omega: f64,
}

impl SolitonParams {
    /// Attractive coupling: `p > 1`, `γ > 0`, `ω > γ²/4`.
    pub fn new(p: f64, gamma: f64, omega: f64) -> Result<Self> {
        if !(gamma > 0.0) {
            return domain(format!("γ = {gamma} must be positive"));
        }
        Self::with_any_coupling(p, gamma, omega)
    }

    /// Any real coupling with `ω > max(0, γ²/4)`. Only the profile and the
    /// simulator accept `γ <= 0`; the closed-form norms require `γ >= 0`.
    pub fn with_any_coupling(p: f64, gamma: f64, omega: f64) -> Result<Self> {
        if !(p > 1.0) || !p.is_finite() {
            return domain(format!("p = {p} must exceed 1"));
        }
        if !gamma.is_finite() {
            return domain("γ must be finite");
        }
        if !(omega > 0.25 * gamma * gamma) || !(omega > 0.0) || !omega.is_finite() {
            return domain(format!("ω = {omega} must exceed γ²/4 = {}", 0.25 * gamma * gamma));
        }
        Ok(Self { p, gamma, omega })
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn omega(&self) -> f64 {
        self.omega
    }

    /// `ξ = γ / (2√ω)`.
    pub fn xi(&self) -> f64 {
        self.gamma / (2.0 * self.omega.sqrt())
    }

    /// `α = (p - 1) / 2`.
    pub fn alpha(&self) -> f64 {
        0.5 * (self.p - 1.0)
    }

    /// Same `p` and `γ`, different frequency.
    pub fn with_omega(&self, omega: f64) -> Result<Self> {
        Self::with_any_coupling(self.p, self.gamma, omega)
    }

    pub fn near_threshold(&self) -> bool {
        1.0 - self.xi() < NEAR_THRESHOLD
    }

    fn exponent(&self) -> f64 {
        2.0 / (self.p - 1.0)
    }

    fn ln_amplitude(&self) -> f64 {
        (0.5 * (self.p + 1.0) * self.omega).ln()
    }

    /// ln of `4 / ((p - 1)√ω)`.
    fn ln_prefactor(&self) -> f64 {
        2.0 * LN_2 - (self.p - 1.0).ln() - 0.5 * self.omega.ln()
    }

    fn require_nonnegative_coupling(&self) -> Result<()> {
        if self.gamma < 0.0 {
            return domain("closed-form norms need γ >= 0");
        }
        Ok(())
    }
}

/// `ln sech z`, stable for any real `z`.
fn ln_sech(z: f64) -> f64 {
    let a = z.abs();
    LN_2 - a - (-2.0 * a).exp().ln_1p()
}

/// `φ_ω(x) = {((p+1)ω/2) sech²(((p-1)√ω/2)|x| + atanh ξ)}^{1/(p-1)}`.
pub fn profile_value(params: &SolitonParams, x: f64) -> f64 {
    let z = 0.5 * (params.p - 1.0) * params.omega.sqrt() * x.abs() + params.xi().atanh();
    ((params.ln_amplitude() + 2.0 * ln_sech(z)) / (params.p - 1.0)).exp()
}

/// `‖φ_ω‖²`.
pub fn mass_closed_form(params: &SolitonParams) -> Result<f64> {
    params.require_nonnegative_coupling()?;
    let b = params.exponent();
    let integral = j(params.xi(), b - 1.0)?;
    if integral == 0.0 {
        return Ok(0.0);
    }
    Ok((params.ln_prefactor() + b * params.ln_amplitude() + integral.ln()).exp())
}

/// `|φ_ω(0)|² = ((p+1)ω/2 · (1 - ξ²))^{2/(p-1)}`.
pub fn boundary_value_sq(params: &SolitonParams) -> f64 {
    let xi = params.xi();
    let ln_one_minus = (-xi * xi).ln_1p();
    (params.exponent() * (params.ln_amplitude() + ln_one_minus)).exp()
}

/// `‖φ_ω‖_{p+1}^{p+1}`.
pub fn lp_norm_closed_form(params: &SolitonParams) -> Result<f64> {
    params.require_nonnegative_coupling()?;
    let b = params.exponent();
    let integral = j(params.xi(), b)?;
    if integral == 0.0 {
        return Ok(0.0);
    }
    // (p+1)/(p-1) = 1 + 2/(p-1)
    Ok((params.ln_prefactor() + (1.0 + b) * params.ln_amplitude() + integral.ln()).exp())
}

/// `‖∂ₓφ_ω‖²` by direct quadrature of `ω tanh²(z) φ²` in the variable
/// `z`, independent of the virial relation.
pub fn grad_sq_quadrature(params: &SolitonParams) -> Result<f64> {
    params.require_nonnegative_coupling()?;
    let b = params.exponent();
    let z0 = params.xi().atanh();
    let r = DoubleExponential::default().integrate_to_infinity(z0, |z, _| {
        let e = (-2.0 * z).exp();
        let tanh = (1.0 - e) / (1.0 + e);
        tanh * tanh * (2.0 * b * ln_sech(z)).exp()
    });
    let scale = (2.0 * LN_2 + 0.5 * params.omega.ln() - (params.p - 1.0).ln() + b * params.ln_amplitude()).exp();
    Ok(scale * r.value)
}

/// Closed-form values for one standing wave.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct QuantityReport {
    pub mass: f64,
    pub boundary_sq: f64,
    pub lp_norm: f64,
    pub grad_sq: f64,
    pub energy: f64,
    /// `S_ω(φ_ω)`, which is `d(ω)`.
    pub action: f64,
    /// `K_ω(φ_ω)`, a residual that should vanish.
    pub nehari: f64,
    /// `P(φ_ω)` with `‖∂ₓφ‖²` from quadrature, a residual that should vanish.
    pub virial: f64,
    /// Largest constituent magnitude; residuals are judged against it.
    pub term_scale: f64,
    pub near_threshold: bool,
}

pub fn quantity_report(params: &SolitonParams) -> Result<QuantityReport> {
    let (p, gamma, omega) = (params.p, params.gamma, params.omega);
    let alpha = params.alpha();
    let mass = mass_closed_form(params)?;
    let boundary_sq = boundary_value_sq(params);
    let lp_norm = lp_norm_closed_form(params)?;
    // P(φ_ω) = 0 solved for the gradient term.
    let grad_sq = 0.5 * gamma * boundary_sq + alpha / (p + 1.0) * lp_norm;
    let energy = 0.5 * grad_sq - 0.5 * gamma * boundary_sq - lp_norm / (p + 1.0);
    let action = energy + 0.5 * omega * mass;
    let nehari = grad_sq + omega * mass - gamma * boundary_sq - lp_norm;
    let grad_quad = if params.near_threshold() {
        grad_sq
    } else {
        grad_sq_quadrature(params)?
    };
    let virial = grad_quad - 0.5 * gamma * boundary_sq - alpha / (p + 1.0) * lp_norm;
    let term_scale = grad_sq.max(omega * mass).max(gamma.abs() * boundary_sq).max(lp_norm);
    Ok(QuantityReport {
        mass,
        boundary_sq,
        lp_norm,
        grad_sq,
        energy,
        action,
        nehari,
        virial,
        term_scale,
        near_threshold: params.near_threshold(),
    })
}

/// `∂²_λ E(φ_ω^λ)` at `λ = 1`, from the closed forms.
pub fn scaling_curvature(params: &SolitonParams) -> Result<f64> {
    let p = params.p;
    let r = quantity_report(params)?;
    Ok(r.grad_sq - (p - 1.0) * (p - 3.0) / (4.0 * (p + 1.0)) * r.lp_norm)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Sign {
    Negative,
    Zero,
    Positive,
}

impl Sign {
    pub fn of(value: f64, tol: f64) -> Self {
        if value > tol {
            Sign::Positive
        } else if value < -tol {
            Sign::Negative
        } else {
            Sign::Zero
        }
    }

    pub fn as_i32(self) -> i32 {
        match self {
            Sign::Negative => -1,
            Sign::Zero => 0,
            Sign::Positive => 1,
        }
    }
}

/// `((p-5)/(p-1)) J(ξ, 2/(p-1)) - ξ(1-ξ²)^{2/(p-1)}`, which equals
/// `E(φ_ω) / (√ω ((p+1)ω/2)^{2/(p-1)} / 2)`.
pub fn energy_criterion(params: &SolitonParams) -> Result<f64> {
    let p = params.p;
    if !(p > 5.0) {
        return domain(format!("energy criterion needs p > 5, got {p}"));
    }
    params.require_nonnegative_coupling()?;
    let b = params.exponent();
    let xi = params.xi();
    Ok((p - 5.0) / (p - 1.0) * j(xi, b)? - xi * (1.0 - xi * xi).powf(b))
}

/// Sign of `E(φ_ω)` through the reduced one-variable criterion.
pub fn energy_sign(params: &SolitonParams) -> Result<Sign> {
    Ok(Sign::of(energy_criterion(params)?, SIGN_TOL))
}
