//! The endpoint integrals `J(ξ, β) = ∫_ξ^1 (1 - s²)^β ds` behind every
//! closed-form norm of the standing wave, and the sech-power tail integral
//! they are equal to.

use crate::error::{domain, Error, Result};
use crate::quadrature::{DoubleExponential, QuadResult};
use std::f64::consts::{FRAC_PI_2, LN_2};

/// Exponents this close to -1 are rejected: the integrand is barely
/// integrable there and no quadrature reaches useful accuracy.
pub const MIN_EXPONENT: f64 = -1.0 + 1e-9;

/// Quadrature failures are only surfaced when the last-level difference
/// is larger than this (relative to max(1, |J|)).
const ACCEPTABLE_ERROR: f64 = 1e-10;

/// Lower limit and exponent of `J(ξ, β)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntegralQuery {
    xi: f64,
    beta: f64,
}

impl IntegralQuery {
    pub fn new(xi: f64, beta: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&xi) {
            return domain(format!("lower limit ξ = {xi} must lie in [0, 1]"));
        }
        if !(beta > MIN_EXPONENT) {
            return domain(format!("exponent β = {beta} must exceed -1 + 1e-9"));
        }
        Ok(Self { xi, beta })
    }

    pub fn xi(&self) -> f64 {
        self.xi
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }
}

/// `∫_ξ^1 (1 - s²)^β ds`.
///
/// Evaluated as `∫_{asin ξ}^{π/2} cos^{2β+1} θ dθ` with tanh-sinh
/// quadrature; `cos θ` is taken as `sin(π/2 - θ)` using the exact distance
/// to the upper limit, so the algebraic singularity for `β < -1/2` costs no
/// precision.
pub fn incomplete_profile_integral(q: IntegralQuery) -> Result<QuadResult> {
    if q.xi == 1.0 {
        return Ok(QuadResult {
            value: 0.0,
            error_estimate: 0.0,
            levels: 0,
            evaluations: 0,
            converged: true,
        });
    }
    let power = 2.0 * q.beta + 1.0;
    let lower = q.xi.asin();
    let r = DoubleExponential::default().integrate(lower, FRAC_PI_2, |p| {
        let c = p.from_right.sin();
        if c == 0.0 {
            0.0
        } else {
            c.powf(power)
        }
    });
    check(r)
}

/// Convenience wrapper returning only the value of `J(ξ, β)`.
pub fn j(xi: f64, beta: f64) -> Result<f64> {
    incomplete_profile_integral(IntegralQuery::new(xi, beta)?).map(|r| r.value)
}

/// `∫_{atanh a}^∞ (sech² y)^β dy`, by exp-sinh quadrature of the
/// exponentially decaying integrand. Equal to `J(a, β - 1)`; kept
/// separate so that identity can be checked.
pub fn sech_power_tail_integral(a: f64, beta: f64) -> Result<QuadResult> {
    if !(a > 0.0 && a < 1.0) {
        return domain(format!("a = {a} must lie in (0, 1)"));
    }
    if !(beta > 0.0) {
        return domain(format!("β = {beta} must be positive"));
    }
    let y0 = a.atanh();
    let r = DoubleExponential::default().integrate_to_infinity(y0, |y, _| {
        // ln sech y = ln 2 - y - ln(1 + e^{-2y}) for y >= 0
        let log_sech = LN_2 - y - (-2.0 * y).exp().ln_1p();
        (2.0 * beta * log_sech).exp()
    });
    check(r)
}

fn check(r: QuadResult) -> Result<QuadResult> {
    if r.converged || r.error_estimate <= ACCEPTABLE_ERROR * r.value.abs().max(1.0) {
        Ok(r)
    } else {
        Err(Error::Quadrature {
            value: r.value,
            error_estimate: r.error_estimate,
        })
    }
}
