//! Threshold roots against a dense-scan oracle and against the standing-wave
//! quantities whose sign changes they mark.

use nlsdelta::soliton::{energy_sign, mass_closed_form, quantity_report, scaling_curvature, Sign, SolitonParams};
use nlsdelta::thresholds::{
    classify, omega_threshold, residual, sweep, sweep_csv, threshold_xi, StabilityLabel, ThresholdKind, Thresholds,
};
use nlsdelta::Error;
use proptest::prelude::*;
use std::f64::consts::FRAC_PI_2;

/// Roots of all three residuals by a cumulative trapezoid rule.
///
/// With `s = cos(ψ²⁰)`, `J(ξ, β) = ∫_0^{ψ(ξ)} sin(ψ²⁰)^{2β+1} 20ψ¹⁹ dψ`,
/// whose integrand vanishes smoothly at `ψ = 0` for `β > −0.95`. Walking `ψ` from 0
/// gives `J` at every node; the residual sign change is located by linear
/// interpolation in `ξ`.
fn dense_scan_roots(p: f64) -> [f64; 3] {
    let b = 2.0 / (p - 1.0);
    let n = 1_000_000usize;
    let psi_max = FRAC_PI_2.powf(0.05);
    let h = psi_max / n as f64;
    let integrand = |psi: f64, beta: f64| {
        if psi == 0.0 {
            0.0
        } else {
            psi.powi(20).sin().powf(2.0 * beta + 1.0) * 20.0 * psi.powi(19)
        }
    };
    let resid = |xi: f64, jm: f64, jb: f64| {
        let w = 1.0 - xi * xi;
        [
            (p - 5.0) / (p - 1.0) * jm - xi * w.powf(b - 1.0),
            (p - 5.0) / (p - 1.0) * jb - xi * w.powf(b),
            0.5 * (p - 5.0) * jb - xi * w.powf(b),
        ]
    };
    let (mut jm, mut jb) = (0.0, 0.0);
    let mut roots = [f64::NAN; 3];
    let mut prev: Option<(f64, [f64; 3])> = None;
    for i in 1..=n {
        let (a, c) = ((i - 1) as f64 * h, i as f64 * h);
        jm += 0.5 * h * (integrand(a, b - 1.0) + integrand(c, b - 1.0));
        jb += 0.5 * h * (integrand(a, b) + integrand(c, b));
        let xi = c.powi(20).cos().max(0.0);
        let r = resid(xi, jm, jb);
        if let Some((xi_prev, r_prev)) = prev {
            for k in 0..3 {
                if r_prev[k] < 0.0 && r[k] >= 0.0 {
                    let t = r_prev[k] / (r_prev[k] - r[k]);
                    roots[k] = xi_prev + t * (xi - xi_prev);
                }
            }
        }
        prev = Some((xi, r));
    }
    roots
}

#[test]
fn roots_match_dense_scan() {
    for p in [5.5, 6.0, 7.0, 10.0, 20.0] {
        let oracle = dense_scan_roots(p);
        for kind in ThresholdKind::ALL {
            let got = threshold_xi(kind, p).unwrap();
            let want = oracle[kind.index()];
            assert!((got - want).abs() < 1e-8, "p = {p}, {kind}: {got} vs {want}");
        }
    }
}

#[test]
fn sextic_thresholds() {
    let t = Thresholds::compute(6.0).unwrap();
    assert!((t.xi0 - 0.292311886643907).abs() < 1e-12);
    assert!((t.xi1 - 0.137185828377068).abs() < 1e-12);
    assert!((t.xi2 - 0.279472937838809).abs() < 1e-12);
    assert!((t.omega(ThresholdKind::Xi0, 1.0) - 2.9258).abs() < 1e-4);
    assert!((t.omega(ThresholdKind::Xi1, 1.0) - 13.2838).abs() < 1e-4);
    assert!((t.omega(ThresholdKind::Xi2, 1.0) - 3.2008).abs() < 1e-4);
}

#[test]
fn independent_reference_table() {
    // scipy brentq on quad-evaluated residuals, five digits
    let table = [
        (10.0, [0.69201, 0.32224, 0.67568]),
        (30.0, [0.92356, 0.44924, 0.92132]),
        (5.1, [0.03802, 0.01879, 0.03760]),
    ];
    for (p, want) in table {
        for kind in ThresholdKind::ALL {
            let got = threshold_xi(kind, p).unwrap();
            assert!((got - want[kind.index()]).abs() < 6e-6, "p = {p}, {kind}: {got}");
        }
    }
}

#[test]
fn residuals_vanish_at_roots() {
    for p in [5.5, 6.0, 7.0, 10.0, 20.0, 30.0] {
        for kind in ThresholdKind::ALL {
            let xi = threshold_xi(kind, p).unwrap();
            let r = residual(kind, p, xi).unwrap();
            assert!(r.abs() <= 1e-10, "p = {p}, {kind}: residual {r}");
        }
    }
}

#[test]
fn mass_is_maximal_at_omega0() {
    for p in [5.5, 6.0, 9.0] {
        let w0 = omega_threshold(ThresholdKind::Xi0, p, 1.0).unwrap();
        let m = |w: f64| mass_closed_form(&SolitonParams::new(p, 1.0, w).unwrap()).unwrap();
        let eps = 5e-5;
        let (lo, mid, hi) = (m(w0 * (1.0 - eps)), m(w0), m(w0 * (1.0 + eps)));
        assert!(mid > lo && mid > hi, "p = {p}: {lo} {mid} {hi}");
        // centred difference vanishes to second order in the step
        let d = (hi - lo) / (2.0 * eps * w0);
        let slope_scale = mid / w0;
        assert!(d.abs() < 1e-6 * slope_scale, "p = {p}: dM/dω = {d}");
    }
}

#[test]
fn energy_changes_sign_at_omega1() {
    for p in [5.5, 6.0, 9.0, 20.0] {
        let w1 = omega_threshold(ThresholdKind::Xi1, p, 1.0).unwrap();
        let at = |w: f64| SolitonParams::new(p, 1.0, w).unwrap();
        assert_eq!(energy_sign(&at(w1 * (1.0 - 1e-6))).unwrap(), Sign::Negative);
        assert_eq!(energy_sign(&at(w1 * (1.0 + 1e-6))).unwrap(), Sign::Positive);
        let r = quantity_report(&at(w1)).unwrap();
        assert!(r.energy.abs() < 1e-9 * r.term_scale, "p = {p}: E = {}", r.energy);
    }
}

#[test]
fn scaling_curvature_changes_sign_at_omega2() {
    for p in [5.5, 6.0, 9.0, 20.0] {
        let w2 = omega_threshold(ThresholdKind::Xi2, p, 1.0).unwrap();
        let curv = |w: f64| scaling_curvature(&SolitonParams::new(p, 1.0, w).unwrap()).unwrap();
        assert!(curv(w2 * (1.0 - 1e-6)) > 0.0, "p = {p}");
        assert!(curv(w2 * (1.0 + 1e-6)) < 0.0, "p = {p}");
        let scale = quantity_report(&SolitonParams::new(p, 1.0, w2).unwrap())
            .unwrap()
            .term_scale;
        assert!(curv(w2).abs() < 1e-9 * scale, "p = {p}");
    }
}

#[test]
fn omega_scales_with_gamma_squared() {
    for kind in ThresholdKind::ALL {
        let base = omega_threshold(kind, 7.0, 1.0).unwrap();
        for gamma in [0.25, 2.0, 3.5] {
            let w = omega_threshold(kind, 7.0, gamma).unwrap();
            assert!((w - gamma * gamma * base).abs() <= 1e-14 * w);
        }
    }
}

#[test]
fn rejects_subcritical_powers() {
    for p in [5.0, 4.0, f64::NAN] {
        assert!(matches!(threshold_xi(ThresholdKind::Xi0, p), Err(Error::Domain(_))));
    }
    assert!(omega_threshold(ThresholdKind::Xi1, 6.0, 0.0).is_err());
}

#[test]
fn classification_labels() {
    let label = |w: f64| classify(&SolitonParams::new(6.0, 1.0, w).unwrap()).unwrap().label;
    let t = Thresholds::compute(6.0).unwrap();
    let w0 = t.omega(ThresholdKind::Xi0, 1.0);
    assert_eq!(label(2.0), StabilityLabel::Stable);
    assert_eq!(label(w0 * (1.0 - 1e-9)), StabilityLabel::Stable);
    assert_eq!(label(w0), StabilityLabel::OrbitallyUnstable);
    assert_eq!(label(3.1), StabilityLabel::OrbitallyUnstable);
    assert_eq!(label(5.0), StabilityLabel::OrbitallyUnstableConjecturedStrong);
    assert_eq!(label(20.0), StabilityLabel::StronglyUnstable);

    let c = classify(&SolitonParams::new(6.0, 1.0, 20.0).unwrap()).unwrap();
    assert_eq!(c.energy_positive, Some(true));
    assert_eq!(c.slope_condition, Some(true));
    assert_eq!(c.mass_derivative_negative, Some(true));

    let c = classify(&SolitonParams::new(3.0, 1.0, 4.0).unwrap()).unwrap();
    assert_eq!(c.label, StabilityLabel::Stable);
    assert!(c.xi0.is_none() && c.omega1.is_none() && c.energy_positive.is_none());
}

#[test]
fn sweep_agrees_with_pointwise_roots() {
    let rows = sweep(&ThresholdKind::ALL, 5.5, 30.0, 8).unwrap();
    assert_eq!(rows.len(), 8);
    assert_eq!(rows[7].p, 30.0);
    for row in &rows {
        assert!(row.errors.is_empty());
        for kind in ThresholdKind::ALL {
            assert_eq!(row.get(kind).unwrap(), threshold_xi(kind, row.p).unwrap());
        }
    }
    let csv = sweep_csv(&rows);
    assert_eq!(csv.lines().next(), Some("p,xi0,xi1,xi2"));
    assert_eq!(csv.lines().count(), 9);

    let only = sweep(&[ThresholdKind::Xi1], 6.0, 7.0, 2).unwrap();
    assert!(only[0].get(ThresholdKind::Xi0).is_none());
    assert!(sweep_csv(&only).lines().nth(1).unwrap().contains("nan"));
    assert!(sweep(&ThresholdKind::ALL, 5.0, 6.0, 3).is_err());
    assert!(sweep(&ThresholdKind::ALL, 6.0, 6.0, 3).is_err());
    assert!(sweep(&ThresholdKind::ALL, 6.0, 7.0, 1).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn thresholds_are_ordered(p in 5.05f64..60.0) {
        let t = Thresholds::compute(p).unwrap();
        prop_assert!(0.0 < t.xi1 && t.xi1 < t.xi2 && t.xi2 < t.xi0 && t.xi0 < 1.0, "{:?}", t);
    }

    #[test]
    fn residual_sign_brackets_root(p in 5.2f64..40.0, frac in 0.05f64..0.95) {
        for kind in ThresholdKind::ALL {
            let root = threshold_xi(kind, p).unwrap();
            let below = root * frac;
            let above = root + (1.0 - root) * frac;
            prop_assert!(residual(kind, p, below).unwrap() > 0.0);
            prop_assert!(residual(kind, p, above).unwrap() < 0.0);
        }
    }
}
