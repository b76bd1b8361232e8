//! Numerical integration helpers: Gauss-Hermite rules for expectations under
//! Gaussian densities, and adaptive Simpson for one-off smooth integrals.

use nalgebra::DMatrix;

use crate::{Error, Result};

/// Gauss-Hermite rule in the physicists' convention
/// (`integral f(t) exp(-t^2) dt ~= sum_i w_i f(t_i)`).
///
/// Nodes and weights come from the Golub-Welsch eigenvalue method: the
/// Jacobi matrix for the Hermite recurrence is symmetric tridiagonal with
/// zero diagonal and off-diagonal `sqrt(k/2)`; its eigenvalues are the nodes
/// and the squared first eigenvector components (times `sqrt(pi)`) are the
/// weights.
#[derive(Clone, Debug)]
pub struct GaussHermite {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl GaussHermite {
    pub fn new(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidInput("Gauss-Hermite order must be >= 1".into()));
        }
        let mut j = DMatrix::<f64>::zeros(n, n);
        for k in 1..n {
            let b = (k as f64 / 2.0).sqrt();
            j[(k - 1, k)] = b;
            j[(k, k - 1)] = b;
        }
        let eig = nalgebra::SymmetricEigen::new(j);
        let mu0 = std::f64::consts::PI.sqrt();
        let mut pairs: Vec<(f64, f64)> = (0..n)
            .map(|i| {
                let t = eig.eigenvalues[i];
                let w = mu0 * eig.eigenvectors[(0, i)].powi(2);
                (t, w)
            })
            .collect();
        pairs.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
        // the true rule is exactly symmetric; enforce it so parity structure
        // survives floating point
        for i in 0..n / 2 {
            let j = n - 1 - i;
            let t = 0.5 * (pairs[j].0 - pairs[i].0);
            let w = 0.5 * (pairs[i].1 + pairs[j].1);
            pairs[i] = (-t, w);
            pairs[j] = (t, w);
        }
        if n % 2 == 1 {
            pairs[n / 2].0 = 0.0;
        }
        Ok(Self {
            nodes: pairs.iter().map(|p| p.0).collect(),
            weights: pairs.iter().map(|p| p.1).collect(),
        })
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// `E[g(X)]` for `X ~ N(0, 1)`.
    pub fn normal_expectation(&self, g: impl Fn(f64) -> f64) -> f64 {
        let inv = 1.0 / std::f64::consts::PI.sqrt();
        let mut acc = 0.0;
        for (t, w) in self.nodes.iter().zip(&self.weights) {
            acc += w * g(std::f64::consts::SQRT_2 * t);
        }
        acc * inv
    }

    /// `E[g(X, Y)]` for independent `X, Y ~ N(0, 1)` via the tensor rule.
    pub fn normal_expectation_2d(&self, g: impl Fn(f64, f64) -> f64) -> f64 {
        let inv = 1.0 / std::f64::consts::PI;
        let mut acc = 0.0;
        for (tx, wx) in self.nodes.iter().zip(&self.weights) {
            let x = std::f64::consts::SQRT_2 * tx;
            let mut row = 0.0;
            for (ty, wy) in self.nodes.iter().zip(&self.weights) {
                row += wy * g(x, std::f64::consts::SQRT_2 * ty);
            }
            acc += wx * row;
        }
        acc * inv
    }
}

/// Adaptive Simpson quadrature with absolute tolerance `tol` on `[a, b]`.
pub fn adaptive_simpson(f: impl Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> f64 {
    fn simpson(f: &impl Fn(f64) -> f64, a: f64, fa: f64, b: f64, fb: f64) -> (f64, f64, f64) {
        let m = 0.5 * (a + b);
        let fm = f(m);
        ((b - a) / 6.0 * (fa + 4.0 * fm + fb), m, fm)
    }
    fn recurse(
        f: &impl Fn(f64) -> f64,
        a: f64,
        fa: f64,
        b: f64,
        fb: f64,
        whole: f64,
        m: f64,
        fm: f64,
        tol: f64,
        depth: u32,
    ) -> f64 {
        let (left, lm, flm) = simpson(f, a, fa, m, fm);
        let (right, rm, frm) = simpson(f, m, fm, b, fb);
        let delta = left + right - whole;
        if depth == 0 || delta.abs() <= 15.0 * tol {
            left + right + delta / 15.0
        } else {
            recurse(f, a, fa, m, fm, left, lm, flm, tol / 2.0, depth - 1)
                + recurse(f, m, fm, b, fb, right, rm, frm, tol / 2.0, depth - 1)
        }
    }
    let fa = f(a);
    let fb = f(b);
    let (whole, m, fm) = simpson(&f, a, fa, b, fb);
    recurse(&f, a, fa, b, fb, whole, m, fm, tol, 48)
}
