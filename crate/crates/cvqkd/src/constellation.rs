//! Modulation formats (discrete constellations) and the Fock-space protocol
//! quantities derived from them.
//!
//! # Unit conventions
//!
//! Quadratures are `x = a + a^dag`, `p = -i(a - a^dag)`, so the vacuum has
//! variance 1 per quadrature (shot-noise units) and a coherent state
//! `|alpha>` has `<x> = 2 Re alpha`, `<p> = 2 Im alpha`. The modulation
//! variance is `V_A = Var(<x>) = Var(<p>) = 2 <n>` with
//! `<n> = sum_k p_k |alpha_k|^2`; this is the single place where the
//! `V_A = 2 <n>` convention is fixed.

use num_complex::Complex64;

use crate::fock::{
    self, alpha_tau, annihilation, build_tau, coherent_state, default_pinv_floor, psd_sqrt,
    FockMatrix,
};
use crate::{Error, Result};

/// Convert a modulation variance to the mean photon number it pins down.
pub fn mean_photons_from_modulation_variance(va: f64) -> f64 {
    va / 2.0
}

/// A discrete ensemble of coherent states with probabilities, plus its
/// per-quadrature marginal (all supported formats are products of two
/// identical real-amplitude marginals).
#[derive(Clone, Debug)]
pub struct Constellation {
    label: String,
    points: Vec<(Complex64, f64)>,
    /// (Re alpha value, probability) for one quadrature; the 2-D ensemble is
    /// this marginal squared.
    marginal: Vec<(f64, f64)>,
}

impl Constellation {
    /// Four-phase constellation: amplitudes `r exp(i (2j+1) pi/4)`,
    /// equal probabilities, `r^2 = V_A / 2`.
    pub fn qpsk(modulation_variance: f64) -> Result<Self> {
        if !(modulation_variance > 0.0) || !modulation_variance.is_finite() {
            return Err(Error::InvalidInput(format!(
                "modulation variance must be positive and finite, got {modulation_variance}"
            )));
        }
        let r = (modulation_variance / 2.0).sqrt();
        let points = (0..4)
            .map(|j| {
                let theta = (2 * j + 1) as f64 * std::f64::consts::FRAC_PI_4;
                (Complex64::from_polar(r, theta), 0.25)
            })
            .collect();
        let q = r / std::f64::consts::SQRT_2;
        Ok(Self {
            label: "qpsk".into(),
            points,
            marginal: vec![(-q, 0.5), (q, 0.5)],
        })
    }

    /// Probabilistically shaped square QAM: odd-integer grid
    /// `{+-1, +-3, ..}` in each quadrature, Boltzmann-like weights
    /// `exp(-nu (x^2 + p^2))` on the unscaled grid, then a global amplitude
    /// scale chosen so the ensemble hits the requested modulation variance.
    pub fn pcs_qam(order: usize, nu: f64, modulation_variance: f64) -> Result<Self> {
        if !(modulation_variance > 0.0) || !modulation_variance.is_finite() {
            return Err(Error::InvalidInput(format!(
                "modulation variance must be positive and finite, got {modulation_variance}"
            )));
        }
        if nu < 0.0 || !nu.is_finite() {
            return Err(Error::InvalidInput(format!(
                "shaping parameter must be nonnegative and finite, got {nu}"
            )));
        }
        let side = (order as f64).sqrt().round() as usize;
        if side * side != order || side < 2 || side % 2 != 0 {
            return Err(Error::InvalidInput(format!(
                "QAM order must be the square of an even integer (16, 64, 256, ..), got {order}"
            )));
        }
        // unscaled 1-D amplitudes and their shaped weights
        let levels: Vec<f64> = (0..side)
            .map(|i| (2.0 * i as f64) - (side as f64 - 1.0))
            .collect();
        let raw: Vec<f64> = levels.iter().map(|&x| (-nu * x * x).exp()).collect();
        let norm: f64 = raw.iter().sum();
        let probs: Vec<f64> = raw.iter().map(|w| w / norm).collect();
        let e_x2: f64 = levels.iter().zip(&probs).map(|(&x, &p)| p * x * x).sum();
        // V_A = 2 <n> = 2 * s^2 * E[x^2 + p^2] = 4 s^2 E[x^2]
        let s = (modulation_variance / (4.0 * e_x2)).sqrt();
        let marginal: Vec<(f64, f64)> = levels.iter().zip(&probs).map(|(&x, &p)| (s * x, p)).collect();
        let mut points = Vec::with_capacity(order);
        for &(x, px) in &marginal {
            for &(p, pp) in &marginal {
                points.push((Complex64::new(x, p), px * pp));
            }
        }
        Ok(Self {
            label: format!("pcs-qam{order}"),
            points,
            marginal,
        })
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn points(&self) -> &[(Complex64, f64)] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Per-quadrature marginal as (Re alpha, probability) pairs.
    pub fn marginal(&self) -> &[(f64, f64)] {
        &self.marginal
    }

    /// `<n> = sum_k p_k |alpha_k|^2` (analytic route).
    pub fn mean_photons(&self) -> f64 {
        self.points.iter().map(|&(a, p)| p * a.norm_sqr()).sum()
    }

    /// `V_A = 2 <n>`.
    pub fn modulation_variance(&self) -> f64 {
        2.0 * self.mean_photons()
    }

    pub fn max_alpha_sqr(&self) -> f64 {
        self.points
            .iter()
            .map(|&(a, _)| a.norm_sqr())
            .fold(0.0, f64::max)
    }

    /// Fock cutoff for this ensemble under the crate-wide rule.
    pub fn default_dim(&self) -> usize {
        fock::default_dim(self.max_alpha_sqr())
    }
}

/// Channel-independent Fock-space scalars of a constellation, computed once
/// and reused across every (transmittance, noise) evaluation.
#[derive(Clone, Debug)]
pub struct ProtocolQuantities {
    pub dim: usize,
    /// Ensemble density operator at the cutoff.
    pub tau: FockMatrix,
    /// `<n>` from the analytic sum over points.
    pub mean_photons: f64,
    /// `<n>` from `tr(tau a^dag a)` — cutoff-sensitive cross-check.
    pub mean_photons_trace: f64,
    /// Correlation prefactor `tr(conj-tau^{1/2} a conj-tau^{1/2} a^dag)`;
    /// the first-moment channel constraint is `c_1 = sqrt(T) *` this.
    pub c1_factor: f64,
    /// Conditional second-moment spread
    /// `w = sum_k p_k (<a_k| A^dag A |a_k> - |<a_k| A |a_k>|^2)` with
    /// `A = tau^{1/2} a tau^{-1/2}`.
    pub w: f64,
    /// Diagonal first moments `m_k = <alpha_k| A |alpha_k>`.
    pub first_moments: Vec<Complex64>,
    /// Largest truncation deficit over the constellation points.
    pub max_truncation_deficit: f64,
}

impl ProtocolQuantities {
    pub fn compute(constellation: &Constellation, dim: usize) -> Result<Self> {
        let points = constellation.points();
        let tau = build_tau(points, dim)?;
        let floor = default_pinv_floor(&tau)?;
        let a = annihilation(dim);

        let at = alpha_tau(&tau, floor)?;
        let at2 = at.adjoint().mul(&at);

        let mut first_moments = Vec::with_capacity(points.len());
        let mut w = 0.0;
        let mut max_deficit = 0.0f64;
        for &(alpha, p) in points {
            let v = coherent_state(alpha, dim)?;
            max_deficit = max_deficit.max(v.truncation_deficit());
            let m = v.sandwich(&at);
            let second = v.sandwich(&at2).re;
            w += p * (second - m.norm_sqr());
            first_moments.push(m);
        }

        // c1 factor via the trace route on the conjugated ensemble operator
        let tau_bar = tau.conjugated();
        let sqrt_tau_bar = psd_sqrt(&tau_bar, floor)?;
        let c1_factor = sqrt_tau_bar
            .mul(&a)
            .mul(&sqrt_tau_bar)
            .mul(&a.adjoint())
            .trace()
            .re;

        let n_op = a.adjoint().mul(&a);
        let mean_photons_trace = tau.mul(&n_op).trace().re;

        Ok(Self {
            dim,
            tau,
            mean_photons: constellation.mean_photons(),
            mean_photons_trace,
            c1_factor,
            w,
            first_moments,
            max_truncation_deficit: max_deficit,
        })
    }

    /// Same prefactor from the constellation-sum route
    /// `sum_k p_k Re(conj(m_k) alpha_k)` — an independent check on the trace
    /// route for conjugation-symmetric ensembles.
    pub fn c1_factor_from_moments(&self, constellation: &Constellation) -> f64 {
        constellation
            .points()
            .iter()
            .zip(&self.first_moments)
            .map(|(&(alpha, p), m)| p * (m.conj() * alpha).re)
            .sum()
    }
}

/// Absolute changes in `(mean_photons_trace, c1_factor, w)` when the cutoff
/// grows by `extra` levels; small values certify the truncation.
pub fn protocol_truncation_deltas(
    constellation: &Constellation,
    dim: usize,
    extra: usize,
) -> Result<(f64, f64, f64)> {
    let base = ProtocolQuantities::compute(constellation, dim)?;
    let bigger = ProtocolQuantities::compute(constellation, dim + extra)?;
    Ok((
        (base.mean_photons_trace - bigger.mean_photons_trace).abs(),
        (base.c1_factor - bigger.c1_factor).abs(),
        (base.w - bigger.w).abs(),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn qpsk_geometry_and_moments() {
        let va = 0.456;
        let c = Constellation::qpsk(va).unwrap();
        assert_eq!(c.len(), 4);
        for &(a, p) in c.points() {
            assert_abs_diff_eq!(p, 0.25, epsilon = 1e-15);
            assert_abs_diff_eq!(a.norm_sqr(), va / 2.0, epsilon = 1e-12);
            // diagonal phases: |Re| = |Im|
            assert_abs_diff_eq!(a.re.abs(), a.im.abs(), epsilon = 1e-12);
        }
        assert_abs_diff_eq!(c.mean_photons(), va / 2.0, epsilon = 1e-12);
        assert_abs_diff_eq!(c.modulation_variance(), va, epsilon = 1e-12);
    }

    #[test]
    fn qam_hits_requested_modulation_variance() {
        for &(order, nu, va) in &[(16usize, 0.085, 1.0), (64, 0.05, 3.0), (256, 0.039, 6.332)] {
            let c = Constellation::pcs_qam(order, nu, va).unwrap();
            assert_eq!(c.len(), order);
            assert_abs_diff_eq!(c.modulation_variance(), va, epsilon = 1e-10);
            let psum: f64 = c.points().iter().map(|&(_, p)| p).sum();
            assert_abs_diff_eq!(psum, 1.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn qam_shaping_ratio() {
        // weight ratio between corner-of-inner-square and |x|=|p|=3 points is
        // exp(nu * (18 - 2))
        let nu = 0.085;
        let c = Constellation::pcs_qam(16, nu, 1.0).unwrap();
        let s = c.points()[0].0.re.abs().min(c.points()[0].0.im.abs());
        let _ = s;
        let find_p = |xr: f64, xi: f64| -> f64 {
            let scale = c.marginal().iter().map(|&(x, _)| x.abs()).fold(f64::MAX, f64::min);
            c.points()
                .iter()
                .find(|&&(a, _)| {
                    (a.re - xr * scale).abs() < 1e-12 && (a.im - xi * scale).abs() < 1e-12
                })
                .map(|&(_, p)| p)
                .unwrap()
        };
        let inner = find_p(1.0, 1.0);
        let outer = find_p(3.0, 3.0);
        assert_abs_diff_eq!(inner / outer, (nu * 16.0).exp(), epsilon = 1e-9);
    }

    #[test]
    fn qam_marginal_product_reconstructs_points() {
        let c = Constellation::pcs_qam(16, 0.085, 1.0).unwrap();
        let marg = c.marginal();
        let mut rebuilt: Vec<(f64, f64, f64)> = Vec::new();
        for &(x, px) in marg {
            for &(p, pp) in marg {
                rebuilt.push((x, p, px * pp));
            }
        }
        assert_eq!(rebuilt.len(), c.len());
        for ((x, p, prob), &(a, pa)) in rebuilt.iter().zip(c.points()) {
            assert_abs_diff_eq!(*x, a.re, epsilon = 1e-15);
            assert_abs_diff_eq!(*p, a.im, epsilon = 1e-15);
            assert_abs_diff_eq!(*prob, pa, epsilon = 1e-15);
        }
    }

    #[test]
    fn constellations_are_conjugation_symmetric() {
        for c in [
            Constellation::qpsk(0.456).unwrap(),
            Constellation::pcs_qam(16, 0.085, 1.0).unwrap(),
        ] {
            for &(a, p) in c.points() {
                let found = c
                    .points()
                    .iter()
                    .any(|&(b, q)| (b - a.conj()).norm() < 1e-12 && (q - p).abs() < 1e-15);
                assert!(found, "missing conjugate partner of {a}");
            }
        }
    }

    #[test]
    fn invalid_inputs_rejected() {
        assert!(Constellation::qpsk(0.0).is_err());
        assert!(Constellation::qpsk(-1.0).is_err());
        assert!(Constellation::pcs_qam(15, 0.1, 1.0).is_err());
        assert!(Constellation::pcs_qam(9, 0.1, 1.0).is_err()); // 3^2, odd side
        assert!(Constellation::pcs_qam(16, -0.1, 1.0).is_err());
    }

    #[test]
    fn mean_photon_routes_agree() {
        let c = Constellation::qpsk(0.456).unwrap();
        let pq = ProtocolQuantities::compute(&c, c.default_dim()).unwrap();
        assert_abs_diff_eq!(pq.mean_photons, pq.mean_photons_trace, epsilon = 1e-9);

        let cq = Constellation::pcs_qam(16, 0.085, 1.0).unwrap();
        let pq = ProtocolQuantities::compute(&cq, cq.default_dim()).unwrap();
        assert_abs_diff_eq!(pq.mean_photons, pq.mean_photons_trace, epsilon = 1e-9);
    }

    #[test]
    fn c1_factor_trace_vs_constellation_sum() {
        for c in [
            Constellation::qpsk(0.456).unwrap(),
            Constellation::pcs_qam(16, 0.085, 1.0).unwrap(),
        ] {
            let pq = ProtocolQuantities::compute(&c, c.default_dim()).unwrap();
            let other = pq.c1_factor_from_moments(&c);
            assert_abs_diff_eq!(pq.c1_factor, other, epsilon = 1e-9);
        }
    }

    #[test]
    fn single_point_ensemble_has_zero_spread() {
        // a pure coherent ensemble is its own conditional mean: w = 0 and the
        // first moment is alpha itself
        let alpha = Complex64::new(0.3, 0.1);
        let c = Constellation {
            label: "single".into(),
            points: vec![(alpha, 1.0)],
            marginal: vec![],
        };
        let pq = ProtocolQuantities::compute(&c, 16).unwrap();
        assert!(pq.w.abs() < 1e-9, "w = {}", pq.w);
        assert!((pq.first_moments[0] - alpha).norm() < 1e-9);
    }

    #[test]
    fn qpsk_w_positive_and_truncation_stable() {
        let c = Constellation::qpsk(0.456).unwrap();
        let pq = ProtocolQuantities::compute(&c, c.default_dim()).unwrap();
        assert!(pq.w > 0.0);
        let (dn, dc1, dw) = protocol_truncation_deltas(&c, c.default_dim(), 8).unwrap();
        assert!(dn < 1e-9 && dc1 < 1e-9 && dw < 1e-9, "deltas {dn} {dc1} {dw}");
    }
}
