//! Bracketed scalar root finding.

use crate::error::{Error, Result};

/// Bisection to a bracket of width `x_tol`, then at most a few secant
/// steps that are only accepted while they stay inside the final bracket.
pub fn bisect<F>(f: F, lo: f64, hi: f64, x_tol: f64) -> Result<f64>
where
    F: Fn(f64) -> Result<f64>,
{
    let (mut a, mut b) = if lo < hi { (lo, hi) } else { (hi, lo) };
    let mut fa = f(a)?;
    let mut fb = f(b)?;
    if fa == 0.0 {
        return Ok(a);
    }
    if fb == 0.0 {
        return Ok(b);
    }
    if fa.signum() == fb.signum() || fa.is_nan() || fb.is_nan() {
        return Err(Error::NoSignChange {
            lo: a,
            hi: b,
            f_lo: fa,
            f_hi: fb,
        });
    }
    // 200 halvings take any finite bracket below f64 resolution.
    for _ in 0..200 {
        if b - a <= x_tol {
            break;
        }
        let m = 0.5 * (a + b);
        if m <= a || m >= b {
            break;
        }
        let fm = f(m)?;
        if fm == 0.0 {
            return Ok(m);
        }
        if fm.signum() == fa.signum() {
            a = m;
            fa = fm;
        } else {
            b = m;
            fb = fm;
        }
    }

    // Secant polish inside [a, b].
    let mut best = if fa.abs() < fb.abs() { (a, fa) } else { (b, fb) };
    let (mut x0, mut f0, mut x1, mut f1) = (a, fa, b, fb);
    for _ in 0..4 {
        if f1 == f0 {
            break;
        }
        let x2 = x1 - f1 * (x1 - x0) / (f1 - f0);
        if !(x2 >= a && x2 <= b) {
            break;
        }
        let f2 = f(x2)?;
        if f2.abs() < best.1.abs() {
            best = (x2, f2);
        }
        if f2 == 0.0 {
            break;
        }
        x0 = x1;
        f0 = f1;
        x1 = x2;
        f1 = f2;
    }
    Ok(best.0)
}

/// Brackets `[x_i, x_{i+1}]` on a uniform scan where `f` changes sign.
/// Exact zeros at scan nodes are reported as degenerate brackets.
pub fn sign_changes<F>(f: F, lo: f64, hi: f64, samples: usize) -> Result<Vec<(f64, f64)>>
where
    F: Fn(f64) -> Result<f64>,
{
    let samples = samples.max(2);
    let step = (hi - lo) / (samples - 1) as f64;
    let mut out = Vec::new();
    let mut prev_x = lo;
    let mut prev_f = f(lo)?;
    if prev_f == 0.0 {
        out.push((lo, lo));
    }
    for i in 1..samples {
        let x = if i == samples - 1 { hi } else { lo + i as f64 * step };
        let fx = f(x)?;
        if fx == 0.0 {
            out.push((x, x));
        } else if prev_f != 0.0 && fx.signum() != prev_f.signum() {
            out.push((prev_x, x));
        }
        prev_x = x;
        prev_f = fx;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn finds_sqrt_two() {
        let r = bisect(|x| Ok(x * x - 2.0), 0.0, 2.0, 1e-14).unwrap();
        assert!((r - 2f64.sqrt()).abs() < 1e-14);
    }

    #[test]
    fn reversed_bracket() {
        let r = bisect(|x| Ok(x.cos()), 3.0, 0.0, 1e-13).unwrap();
        assert!((r - std::f64::consts::FRAC_PI_2).abs() < 1e-13);
    }

    #[test]
    fn no_sign_change_is_reported() {
        let err = bisect(|x| Ok(x * x + 1.0), -1.0, 1.0, 1e-12).unwrap_err();
        assert!(matches!(err, Error::NoSignChange { .. }));
    }

    #[test]
    fn scan_counts_roots() {
        let b = sign_changes(|x| Ok((3.0 * x).sin()), 0.1, 6.0, 1000).unwrap();
        assert_eq!(b.len(), 5);
    }
}
