//! Truncated Fock-space linear algebra.
//!
//! Everything downstream (ensemble density operators, first-moment
//! observables, constraint operators) reduces to dense complex matrices in
//! the number basis `{|0>, .., |dim-1>}`. The cutoff is chosen from the
//! largest coherent amplitude in play; [`default_dim`] implements the
//! rule used throughout the crate and the adequacy of a cutoff is always
//! checkable through the reported truncation deficit.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::{Error, Result};

/// Entrywise Hermitian-asymmetry tolerance for matrices that claim to be
/// Hermitian (density operators, constraint blocks).
pub const HERMITICITY_TOL: f64 = 1e-12;

/// Eigenvalues of a nominally PSD matrix in `[-CLAMP_WINDOW, 0)` (scaled by
/// the spectral radius when that exceeds 1) are numerical noise and get
/// clamped to zero; anything more negative is a hard error.
pub const CLAMP_WINDOW: f64 = 1e-10;

/// Relative pseudo-inverse floor: eigenvalues below
/// `DEFAULT_PINV_FLOOR_REL * lambda_max` are treated as exact zeros.
pub const DEFAULT_PINV_FLOOR_REL: f64 = 1e-10;

/// Truncated state vector in the number basis.
#[derive(Clone, Debug, PartialEq)]
pub struct FockVector {
    amps: DVector<Complex64>,
}

impl FockVector {
    pub fn from_vector(amps: DVector<Complex64>) -> Self {
        Self { amps }
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn amp(&self, m: usize) -> Complex64 {
        self.amps[m]
    }

    pub fn as_vector(&self) -> &DVector<Complex64> {
        &self.amps
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|c| c.norm_sqr()).sum()
    }

    /// Probability mass lost to the cutoff; zero for states that fit.
    pub fn truncation_deficit(&self) -> f64 {
        (1.0 - self.norm_sqr()).max(0.0)
    }

    /// `<self|m|self>` for a matrix in the same basis.
    pub fn sandwich(&self, m: &FockMatrix) -> Complex64 {
        (self.amps.adjoint() * m.as_matrix() * &self.amps)[(0, 0)]
    }

    pub fn dot(&self, other: &FockVector) -> Complex64 {
        (self.amps.adjoint() * &other.amps)[(0, 0)]
    }
}

/// Dense complex operator in the number basis.
#[derive(Clone, Debug, PartialEq)]
pub struct FockMatrix {
    m: DMatrix<Complex64>,
}

impl FockMatrix {
    pub fn from_matrix(m: DMatrix<Complex64>) -> Result<Self> {
        if m.nrows() != m.ncols() {
            return Err(Error::DimensionMismatch(m.nrows(), m.ncols()));
        }
        Ok(Self { m })
    }

    pub fn zeros(dim: usize) -> Self {
        Self {
            m: DMatrix::zeros(dim, dim),
        }
    }

    pub fn dim(&self) -> usize {
        self.m.nrows()
    }

    pub fn entry(&self, r: usize, c: usize) -> Complex64 {
        self.m[(r, c)]
    }

    pub fn as_matrix(&self) -> &DMatrix<Complex64> {
        &self.m
    }

    pub fn into_matrix(self) -> DMatrix<Complex64> {
        self.m
    }

    pub fn adjoint(&self) -> FockMatrix {
        Self {
            m: self.m.adjoint(),
        }
    }

    /// Entrywise complex conjugate in the number basis (not the adjoint).
    pub fn conjugated(&self) -> FockMatrix {
        Self { m: self.m.conjugate() }
    }

    pub fn mul(&self, rhs: &FockMatrix) -> FockMatrix {
        Self {
            m: &self.m * &rhs.m,
        }
    }

    pub fn trace(&self) -> Complex64 {
        self.m.diagonal().iter().sum()
    }

    /// Largest entrywise deviation from `m = m^dagger`.
    pub fn hermitian_asymmetry(&self) -> f64 {
        let n = self.dim();
        let mut worst = 0.0f64;
        for r in 0..n {
            for c in r..n {
                let d = (self.m[(r, c)] - self.m[(c, r)].conj()).norm();
                worst = worst.max(d);
            }
        }
        worst
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.hermitian_asymmetry() <= tol
    }

    pub fn max_abs(&self) -> f64 {
        self.m.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }
}

/// Cutoff rule: `1 + ceil(4 * max|alpha|^2 + 10)`, generous enough that the
/// heaviest constellation point keeps its Poisson tail below the working
/// tolerances.
pub fn default_dim(max_alpha_sqr: f64) -> usize {
    1 + (4.0 * max_alpha_sqr + 10.0).ceil() as usize
}

/// Coherent state `|alpha>` truncated to `dim` components:
/// `<m|alpha> = exp(-|alpha|^2/2) alpha^m / sqrt(m!)`, built iteratively so
/// large amplitudes never overflow intermediates.
pub fn coherent_state(alpha: Complex64, dim: usize) -> Result<FockVector> {
    if dim == 0 {
        return Err(Error::InvalidInput("coherent state needs dim >= 1".into()));
    }
    let mut amps = DVector::zeros(dim);
    let mut c = Complex64::new((-0.5 * alpha.norm_sqr()).exp(), 0.0);
    amps[0] = c;
    for m in 1..dim {
        c *= alpha / (m as f64).sqrt();
        amps[m] = c;
    }
    Ok(FockVector { amps })
}

/// Annihilation operator: `a[m][m+1] = sqrt(m+1)`.
pub fn annihilation(dim: usize) -> FockMatrix {
    let mut m = DMatrix::zeros(dim, dim);
    for r in 0..dim.saturating_sub(1) {
        m[(r, r + 1)] = Complex64::new(((r + 1) as f64).sqrt(), 0.0);
    }
    FockMatrix { m }
}

/// Ensemble density operator `tau = sum_k p_k |alpha_k><alpha_k|` for the
/// given (amplitude, probability) points.
pub fn build_tau(points: &[(Complex64, f64)], dim: usize) -> Result<FockMatrix> {
    if points.is_empty() {
        return Err(Error::InvalidInput("empty constellation".into()));
    }
    let psum: f64 = points.iter().map(|&(_, p)| p).sum();
    if points.iter().any(|&(_, p)| p < 0.0) || (psum - 1.0).abs() > 1e-9 {
        return Err(Error::InvalidInput(format!(
            "constellation probabilities must be nonnegative and sum to 1 (sum = {psum})"
        )));
    }
    let mut m: DMatrix<Complex64> = DMatrix::zeros(dim, dim);
    for &(alpha, p) in points {
        let v = coherent_state(alpha, dim)?;
        m.gerc(Complex64::new(p, 0.0), v.as_vector(), v.as_vector(), Complex64::new(1.0, 0.0));
    }
    // kill accumulation roundoff so tau is Hermitian to working precision
    let herm = (&m + m.adjoint()) * Complex64::new(0.5, 0.0);
    Ok(FockMatrix { m: herm })
}

/// Eigendecomposition of a Hermitian matrix. Returns ascending eigenvalues
/// and the matching eigenvector columns.
pub fn hermitian_eigen(m: &FockMatrix) -> Result<(DVector<f64>, DMatrix<Complex64>)> {
    let asym = m.hermitian_asymmetry();
    let scale = m.max_abs().max(1.0);
    if asym > HERMITICITY_TOL * scale {
        return Err(Error::NotHermitian(asym));
    }
    let sym = (m.as_matrix() + m.as_matrix().adjoint()) * Complex64::new(0.5, 0.0);
    let eig = nalgebra::SymmetricEigen::new(sym);
    let mut idx: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    idx.sort_by(|&i, &j| eig.eigenvalues[i].partial_cmp(&eig.eigenvalues[j]).unwrap());
    let dim = m.dim();
    let mut vals = DVector::zeros(dim);
    let mut vecs = DMatrix::zeros(dim, dim);
    for (to, &from) in idx.iter().enumerate() {
        vals[to] = eig.eigenvalues[from];
        vecs.set_column(to, &eig.eigenvectors.column(from));
    }
    Ok((vals, vecs))
}

fn psd_spectrum(m: &FockMatrix) -> Result<(DVector<f64>, DMatrix<Complex64>)> {
    let (mut vals, vecs) = hermitian_eigen(m)?;
    let scale = vals.iter().fold(0.0f64, |a, &v| a.max(v.abs())).max(1.0);
    let window = CLAMP_WINDOW * scale;
    for v in vals.iter_mut() {
        if *v < 0.0 {
            if *v < -window {
                return Err(Error::NotPsd(*v));
            }
            *v = 0.0;
        }
    }
    Ok((vals, vecs))
}

fn spectral_map(vals: &DVector<f64>, vecs: &DMatrix<Complex64>, f: impl Fn(f64) -> f64) -> FockMatrix {
    let dim = vals.len();
    let mut d = DMatrix::zeros(dim, dim);
    for i in 0..dim {
        d[(i, i)] = Complex64::new(f(vals[i]), 0.0);
    }
    FockMatrix {
        m: vecs * d * vecs.adjoint(),
    }
}

/// Positive-semidefinite square root. `floor` only marks which eigenvalues
/// count as exact zeros; pass [`default_pinv_floor`] of the matrix.
pub fn psd_sqrt(m: &FockMatrix, floor: f64) -> Result<FockMatrix> {
    let (vals, vecs) = psd_spectrum(m)?;
    Ok(spectral_map(&vals, &vecs, |v| if v < floor { 0.0 } else { v.sqrt() }))
}

/// Pseudo-inverse square root: eigenvalues below `floor` map to 0, the rest
/// to `1/sqrt(lambda)`.
pub fn psd_pinv_sqrt(m: &FockMatrix, floor: f64) -> Result<FockMatrix> {
    let (vals, vecs) = psd_spectrum(m)?;
    Ok(spectral_map(
        &vals,
        &vecs,
        |v| if v < floor { 0.0 } else { 1.0 / v.sqrt() },
    ))
}

/// Default pseudo-inverse floor for a given PSD matrix:
/// `DEFAULT_PINV_FLOOR_REL * lambda_max`.
pub fn default_pinv_floor(m: &FockMatrix) -> Result<f64> {
    let (vals, _) = psd_spectrum(m)?;
    let lmax = vals.iter().fold(0.0f64, |a, &v| a.max(v));
    Ok(DEFAULT_PINV_FLOOR_REL * lmax)
}

/// Square-root-conjugated annihilation operator
/// `tau^{1/2} a tau^{-1/2}` (pseudo-inverse on the support of `tau`).
///
/// This is the operator whose diagonal coherent-state matrix elements feed
/// the first-moment channel constraint.
pub fn alpha_tau(tau: &FockMatrix, floor: f64) -> Result<FockMatrix> {
    let (vals, vecs) = psd_spectrum(tau)?;
    let sqrt = spectral_map(&vals, &vecs, |v| if v < floor { 0.0 } else { v.sqrt() });
    let pinv = spectral_map(&vals, &vecs, |v| if v < floor { 0.0 } else { 1.0 / v.sqrt() });
    let a = annihilation(tau.dim());
    Ok(sqrt.mul(&a).mul(&pinv))
}
