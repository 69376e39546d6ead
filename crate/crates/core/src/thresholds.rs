//! Threshold values `ξ0(p) > ξ2(p) > ξ1(p)` of the dimensionless coupling
//! `ξ = γ/(2√ω)`, the matching frequencies `ω_j = γ²/(4ξ_j²)`, and the
//! stability classification built on them.
//!
//! - `ξ < ξ0`: the mass `‖φ_ω‖²` decreases in `ω` (orbital instability).
//! - `ξ < ξ2`: `∂²_λ E(φ_ω^λ) < 0` at `λ = 1` (orbital instability).
//! - `ξ < ξ1`: `E(φ_ω) > 0` (strong instability by blowup).

use crate::error::{domain, Error, Result};
use crate::format::sig15;
use crate::roots::{bisect, sign_changes};
use crate::soliton::SolitonParams;
use crate::special_integrals::j;
use rayon::prelude::*;
use serde::Serialize;
use std::fmt;

/// Roots are bracketed inside `(BRACKET_EPS, 1 - BRACKET_EPS)`.
pub const BRACKET_EPS: f64 = 1e-10;
/// Final bisection width.
pub const ROOT_WIDTH: f64 = 1e-13;
/// Points of the sign scan run before every refinement.
pub const SCAN_SAMPLES: usize = 257;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum ThresholdKind {
    /// Sign change of the mass derivative in `ω`.
    Xi0,
    /// Sign change of `E(φ_ω)`.
    Xi1,
    /// Sign change of `∂²_λ E(φ_ω^λ)` at `λ = 1`.
    Xi2,
}

impl ThresholdKind {
    pub const ALL: [ThresholdKind; 3] = [ThresholdKind::Xi0, ThresholdKind::Xi1, ThresholdKind::Xi2];

    pub fn index(self) -> usize {
        match self {
            ThresholdKind::Xi0 => 0,
            ThresholdKind::Xi1 => 1,
            ThresholdKind::Xi2 => 2,
        }
    }
}

impl fmt::Display for ThresholdKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            ThresholdKind::Xi0 => "xi0",
            ThresholdKind::Xi1 => "xi1",
            ThresholdKind::Xi2 => "xi2",
        };
        f.write_str(s)
    }
}

fn require_supercritical(p: f64) -> Result<()> {
    if !(p > 5.0) || !p.is_finite() {
        return domain(format!("thresholds exist only for p > 5, got p = {p}"));
    }
    Ok(())
}

/// Residual whose unique zero in `(0, 1)` is the threshold of `kind`.
/// Positive below the root, negative above it.
pub fn residual(kind: ThresholdKind, p: f64, xi: f64) -> Result<f64> {
    require_supercritical(p)?;
    let b = 2.0 / (p - 1.0);
    let one_minus = 1.0 - xi * xi;
    let r = match kind {
        ThresholdKind::Xi0 => (p - 5.0) / (p - 1.0) * j(xi, b - 1.0)? - xi * one_minus.powf(b - 1.0),
        ThresholdKind::Xi1 => (p - 5.0) / (p - 1.0) * j(xi, b)? - xi * one_minus.powf(b),
        ThresholdKind::Xi2 => 0.5 * (p - 5.0) * j(xi, b)? - xi * one_minus.powf(b),
    };
    Ok(r)
}

/// Every sign change of the residual on a uniform scan of the bracket.
pub fn scan(kind: ThresholdKind, p: f64, samples: usize) -> Result<Vec<(f64, f64)>> {
    require_supercritical(p)?;
    sign_changes(|x| residual(kind, p, x), BRACKET_EPS, 1.0 - BRACKET_EPS, samples)
}

/// The threshold `ξ_k(p)`.
///
/// A sign scan runs first; if it finds no sign change or more than one,
/// the call fails instead of picking a root.
pub fn threshold_xi(kind: ThresholdKind, p: f64) -> Result<f64> {
    let brackets = scan(kind, p, SCAN_SAMPLES)?;
    match brackets.as_slice() {
        [] => {
            let f_lo = residual(kind, p, BRACKET_EPS)?;
            let f_hi = residual(kind, p, 1.0 - BRACKET_EPS)?;
            Err(Error::NoSignChange {
                lo: BRACKET_EPS,
                hi: 1.0 - BRACKET_EPS,
                f_lo,
                f_hi,
            })
        }
        [(lo, hi)] => bisect(|x| residual(kind, p, x), *lo, *hi, ROOT_WIDTH),
        _ => Err(Error::MultipleRoots {
            count: brackets.len(),
            brackets,
        }),
    }
}

/// `ω_k(p, γ) = γ² / (4 ξ_k(p)²)`.
pub fn omega_threshold(kind: ThresholdKind, p: f64, gamma: f64) -> Result<f64> {
    if !(gamma > 0.0) {
        return domain(format!("γ = {gamma} must be positive"));
    }
    let xi = threshold_xi(kind, p)?;
    Ok(gamma * gamma / (4.0 * xi * xi))
}

/// All three thresholds at one `p`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Thresholds {
    pub p: f64,
    pub xi0: f64,
    pub xi1: f64,
    pub xi2: f64,
}

impl Thresholds {
    pub fn compute(p: f64) -> Result<Self> {
        Ok(Self {
            p,
            xi0: threshold_xi(ThresholdKind::Xi0, p)?,
            xi1: threshold_xi(ThresholdKind::Xi1, p)?,
            xi2: threshold_xi(ThresholdKind::Xi2, p)?,
        })
    }

    pub fn xi(&self, kind: ThresholdKind) -> f64 {
        match kind {
            ThresholdKind::Xi0 => self.xi0,
            ThresholdKind::Xi1 => self.xi1,
            ThresholdKind::Xi2 => self.xi2,
        }
    }

    pub fn omega(&self, kind: ThresholdKind, gamma: f64) -> f64 {
        let xi = self.xi(kind);
        gamma * gamma / (4.0 * xi * xi)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum StabilityLabel {
    Stable,
    OrbitallyUnstable,
    /// Orbitally unstable; strong instability expected but not proven.
    OrbitallyUnstableConjecturedStrong,
    StronglyUnstable,
}

/// Where one standing wave sits relative to the three thresholds. The
/// threshold fields and flags are `None` for `p <= 5`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RegimeClassification {
    pub p: f64,
    pub gamma: f64,
    pub omega: f64,
    pub xi: f64,
    pub xi0: Option<f64>,
    pub xi1: Option<f64>,
    pub xi2: Option<f64>,
    pub omega0: Option<f64>,
    pub omega1: Option<f64>,
    pub omega2: Option<f64>,
    /// `ξ < ξ0`.
    pub mass_derivative_negative: Option<bool>,
    /// `ξ < ξ1`.
    pub energy_positive: Option<bool>,
    /// `ξ < ξ2`.
    pub slope_condition: Option<bool>,
    pub label: StabilityLabel,
}

pub fn classify(params: &SolitonParams) -> Result<RegimeClassification> {
    let (p, gamma, omega) = (params.p(), params.gamma(), params.omega());
    if !(gamma > 0.0) {
        return domain("classification needs γ > 0");
    }
    let xi = params.xi();
    if p <= 5.0 {
        return Ok(RegimeClassification {
            p,
            gamma,
            omega,
            xi,
            xi0: None,
            xi1: None,
            xi2: None,
            omega0: None,
            omega1: None,
            omega2: None,
            mass_derivative_negative: None,
            energy_positive: None,
            slope_condition: None,
            label: StabilityLabel::Stable,
        });
    }
    let t = Thresholds::compute(p)?;
    let omega0 = t.omega(ThresholdKind::Xi0, gamma);
    let omega1 = t.omega(ThresholdKind::Xi1, gamma);
    let omega2 = t.omega(ThresholdKind::Xi2, gamma);
    let label = if omega < omega0 {
        StabilityLabel::Stable
    } else if omega <= omega2 {
        StabilityLabel::OrbitallyUnstable
    } else if omega <= omega1 {
        StabilityLabel::OrbitallyUnstableConjecturedStrong
    } else {
        StabilityLabel::StronglyUnstable
    };
    Ok(RegimeClassification {
        p,
        gamma,
        omega,
        xi,
        xi0: Some(t.xi0),
        xi1: Some(t.xi1),
        xi2: Some(t.xi2),
        omega0: Some(omega0),
        omega1: Some(omega1),
        omega2: Some(omega2),
        mass_derivative_negative: Some(xi < t.xi0),
        energy_positive: Some(xi < t.xi1),
        slope_condition: Some(xi < t.xi2),
        label,
    })
}

/// One row of a threshold sweep. A failed threshold is `None` with its
/// error message kept in `errors`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepRow {
    pub p: f64,
    pub xi: [Option<f64>; 3],
    pub errors: Vec<String>,
}

impl SweepRow {
    pub fn get(&self, kind: ThresholdKind) -> Option<f64> {
        self.xi[kind.index()]
    }
}

/// Thresholds on `n` uniformly spaced values of `p` in `[lo, hi]`. Rows
/// are computed in parallel and returned in increasing `p`.
pub fn sweep(kinds: &[ThresholdKind], lo: f64, hi: f64, n: usize) -> Result<Vec<SweepRow>> {
    if !(lo > 5.0) {
        return domain(format!("sweep needs lo > 5, got {lo}"));
    }
    if !(hi > lo) || !hi.is_finite() {
        return domain(format!("sweep needs hi > lo, got [{lo}, {hi}]"));
    }
    if n < 2 {
        return domain(format!("sweep needs n >= 2, got {n}"));
    }
    let step = (hi - lo) / (n - 1) as f64;
    let rows = (0..n)
        .into_par_iter()
        .map(|i| {
            let p = if i == n - 1 { hi } else { lo + i as f64 * step };
            let mut row = SweepRow {
                p,
                xi: [None; 3],
                errors: Vec::new(),
            };
            for &kind in kinds {
                match threshold_xi(kind, p) {
                    Ok(x) => row.xi[kind.index()] = Some(x),
                    Err(e) => row.errors.push(format!("{kind}: {e}")),
                }
            }
            row
        })
        .collect();
    Ok(rows)
}

/// CSV with header `p,xi0,xi1,xi2`; missing values are written as `nan`.
pub fn sweep_csv(rows: &[SweepRow]) -> String {
    let mut out = String::from("p,xi0,xi1,xi2\n");
    for row in rows {
        let cell = |k: ThresholdKind| sig15(row.get(k).unwrap_or(f64::NAN));
        out.push_str(&format!(
            "{},{},{},{}\n",
            sig15(row.p),
            cell(ThresholdKind::Xi0),
            cell(ThresholdKind::Xi1),
            cell(ThresholdKind::Xi2)
        ));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_subcritical_power() {
        for kind in ThresholdKind::ALL {
            assert!(matches!(threshold_xi(kind, 5.0), Err(Error::Domain(_))));
            assert!(matches!(threshold_xi(kind, 3.0), Err(Error::Domain(_))));
        }
    }

    #[test]
    fn residual_signs_at_bracket_ends() {
        for kind in ThresholdKind::ALL {
            assert!(residual(kind, 7.0, BRACKET_EPS).unwrap() > 0.0);
            assert!(residual(kind, 7.0, 1.0 - BRACKET_EPS).unwrap() < 0.0);
        }
    }

    #[test]
    fn p6_values() {
        let x1 = threshold_xi(ThresholdKind::Xi1, 6.0).unwrap();
        let x2 = threshold_xi(ThresholdKind::Xi2, 6.0).unwrap();
        let x0 = threshold_xi(ThresholdKind::Xi0, 6.0).unwrap();
        assert!((0.137..0.138).contains(&x1), "{x1}");
        assert!((0.279..0.280).contains(&x2), "{x2}");
        assert!(x0 > 0.279);
    }

    #[test]
    fn approaches_zero_at_quintic() {
        for kind in ThresholdKind::ALL {
            assert!(threshold_xi(kind, 5.001).unwrap() < 0.01);
        }
    }

    #[test]
    fn frequency_scales_with_coupling_squared() {
        let w1 = omega_threshold(ThresholdKind::Xi2, 6.0, 1.0).unwrap();
        let w2 = omega_threshold(ThresholdKind::Xi2, 6.0, 2.0).unwrap();
        assert!((w2 / w1 - 4.0).abs() < 1e-12);
    }

    #[test]
    fn classification_examples() {
        let c = classify(&SolitonParams::new(6.0, 1.0, 4.0).unwrap()).unwrap();
        assert_eq!(c.label, StabilityLabel::OrbitallyUnstableConjecturedStrong);
        assert_eq!(c.mass_derivative_negative, Some(true));
        assert_eq!(c.energy_positive, Some(false));
        assert_eq!(c.slope_condition, Some(true));

        let c = classify(&SolitonParams::new(3.0, 1.0, 10.0).unwrap()).unwrap();
        assert_eq!(c.label, StabilityLabel::Stable);
        assert!(c.xi0.is_none());

        let c = classify(&SolitonParams::new(6.0, 1.0, 100.0).unwrap()).unwrap();
        assert_eq!(c.label, StabilityLabel::StronglyUnstable);
        assert_eq!(c.energy_positive, Some(true));

        let c = classify(&SolitonParams::new(6.0, 1.0, 2.0).unwrap()).unwrap();
        assert_eq!(c.label, StabilityLabel::Stable);
    }

    #[test]
    fn sweep_rejects_bad_ranges() {
        assert!(sweep(&ThresholdKind::ALL, 5.0, 10.0, 10).is_err());
        assert!(sweep(&ThresholdKind::ALL, 6.0, 6.0, 10).is_err());
        assert!(sweep(&ThresholdKind::ALL, 6.0, 7.0, 1).is_err());
    }

    #[test]
    fn sweep_single_kind_and_csv() {
        let rows = sweep(&[ThresholdKind::Xi1], 6.0, 7.0, 2).unwrap();
        assert_eq!(rows.len(), 2);
        assert_eq!(rows[0].p, 6.0);
        assert_eq!(rows[1].p, 7.0);
        assert!(rows[0].get(ThresholdKind::Xi0).is_none());
        let csv = sweep_csv(&rows);
        let mut lines = csv.lines();
        assert_eq!(lines.next(), Some("p,xi0,xi1,xi2"));
        let first: Vec<&str> = lines.next().unwrap().split(',').collect();
        assert_eq!(first[1], "nan");
        assert!(first[2].starts_with("1.3718"));
    }
}
