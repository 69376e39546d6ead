//! Complex tridiagonal systems solved by the Thomas algorithm.

use crate::error::{Error, Result};
use num_complex::Complex64;

/// `lower[i] x[i-1] + diag[i] x[i] + upper[i] x[i+1] = rhs[i]`;
/// `lower[0]` and `upper[n-1]` are ignored.
#[derive(Debug, Clone, PartialEq)]
pub struct Tridiagonal {
    pub lower: Vec<Complex64>,
    pub diag: Vec<Complex64>,
    pub upper: Vec<Complex64>,
}

impl Tridiagonal {
    pub fn len(&self) -> usize {
        self.diag.len()
    }

    pub fn is_empty(&self) -> bool {
        self.diag.is_empty()
    }

    pub fn apply(&self, x: &[Complex64], out: &mut [Complex64]) {
        let n = self.len();
        for i in 0..n {
            let mut s = self.diag[i] * x[i];
            if i > 0 {
                s += self.lower[i] * x[i - 1];
            }
            if i + 1 < n {
                s += self.upper[i] * x[i + 1];
            }
            out[i] = s;
        }
    }

    /// LU factors without pivoting. Fails on a zero pivot.
    pub fn factorize(&self) -> Result<Factorized> {
        let n = self.len();
        if self.lower.len() != n || self.upper.len() != n {
            return Err(Error::Solver("band lengths differ".into()));
        }
        let mut upper_prime = vec![Complex64::new(0.0, 0.0); n];
        let mut inv_pivot = vec![Complex64::new(0.0, 0.0); n];
        for i in 0..n {
            let mut pivot = self.diag[i];
            if i > 0 {
                pivot -= self.lower[i] * upper_prime[i - 1];
            }
            if pivot.norm() == 0.0 || !pivot.norm().is_finite() {
                return Err(Error::Solver(format!("zero pivot at row {i}")));
            }
            inv_pivot[i] = pivot.inv();
            upper_prime[i] = self.upper[i] * inv_pivot[i];
        }
        Ok(Factorized {
            lower: self.lower.clone(),
            upper_prime,
            inv_pivot,
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Factorized {
    lower: Vec<Complex64>,
    upper_prime: Vec<Complex64>,
    inv_pivot: Vec<Complex64>,
}

impl Factorized {
    /// Overwrites `rhs` with the solution.
    pub fn solve_in_place(&self, rhs: &mut [Complex64]) {
        let n = rhs.len();
        rhs[0] *= self.inv_pivot[0];
        for i in 1..n {
            let prev = rhs[i - 1];
            rhs[i] = (rhs[i] - self.lower[i] * prev) * self.inv_pivot[i];
        }
        for i in (0..n - 1).rev() {
            let next = rhs[i + 1];
            rhs[i] -= self.upper_prime[i] * next;
        }
    }
}

/// Normwise backward error `‖Ax − b‖∞ / (‖A‖∞‖x‖∞ + ‖b‖∞)`.
pub fn relative_residual(a: &Tridiagonal, x: &[Complex64], b: &[Complex64]) -> f64 {
    let n = x.len();
    let mut ax = vec![Complex64::new(0.0, 0.0); n];
    a.apply(x, &mut ax);
    let err = ax.iter().zip(b).map(|(p, q)| (p - q).norm()).fold(0.0, f64::max);
    let norm_a = (0..n)
        .map(|i| {
            let mut s = a.diag[i].norm();
            if i > 0 {
                s += a.lower[i].norm();
            }
            if i + 1 < n {
                s += a.upper[i].norm();
            }
            s
        })
        .fold(0.0, f64::max);
    let norm_x = x.iter().map(|z| z.norm()).fold(0.0, f64::max);
    let norm_b = b.iter().map(|z| z.norm()).fold(0.0, f64::max);
    let scale = norm_a * norm_x + norm_b;
    if scale == 0.0 {
        err
    } else {
        err / scale
    }
}
