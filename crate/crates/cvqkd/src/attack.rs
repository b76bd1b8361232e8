//! Local-oscillator intensity fluctuation: distribution models for the
//! per-pulse intensity factor `k` (mean 1, variance `V_k`), the resulting
//! parameter-estimation bias, and the search for the smallest fluctuation
//! that defeats a scenario.
//!
//! # Bias convention
//!
//! A stale shot-noise calibration makes the estimated channel parameters
//! relate to the true ones through inverse moments of `k`: linear statistics
//! carry a factor `E[1/sqrt(k)] ~= 1 + 3 V_k / 8`, quadratic statistics a
//! factor `E[1/k] ~= 1 + V_k`. Writing `m` and `q` for those factors, the
//! estimated transmittance and excess noise follow from the true channel
//! `(T_c, xi_c)` as
//!
//! ```text
//! T_e  = T_c / m^2
//! xi_e = A xi_c - (1 - A) V_A - (1 - B) (2 / T_e),   A = m^2/q, B = 1/q
//! ```
//!
//! so the receiver undervalues both the transmittance and (crucially) the
//! excess noise. All key-rate computations use the Taylor factors above;
//! the exact distribution moments exist to certify that the Taylor forms
//! are accurate at the working fluctuation sizes.

use rand::distributions::Distribution;
use rand::Rng;

use crate::keyrate::{
    transmittance_from_distance, ChannelObservables, ChannelParams, KeyRateBreakdown, KeyRateModel,
};
use crate::quadrature::adaptive_simpson;
use crate::{Error, Result};

/// Truncation point (in base standard deviations) of the truncated-Gaussian
/// fluctuation model.
pub const GAUSSIAN_TRUNC_SIGMAS: f64 = 4.0;

/// Intensity factors below this would let the attack be detected trivially
/// (and break the expansions), so distributions must keep `k` above it.
pub const MIN_SUPPORT: f64 = 0.5;

/// Bisection width for the minimum-fluctuation search.
pub const MIN_VK_TOL: f64 = 1e-7;

/// Shape of the per-pulse intensity factor distribution.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FluctuationKind {
    /// Uniform on `[1 - delta, 1 + delta]`, `delta = sqrt(3 V_k)`.
    Uniform,
    /// Equal mass on `{1 - delta, 1 + delta}`, `delta = sqrt(V_k)`.
    TwoPoint,
    /// Gaussian truncated at +-4 base deviations, rescaled to variance `V_k`.
    TruncatedGaussian,
}

impl std::str::FromStr for FluctuationKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "uniform" => Ok(Self::Uniform),
            "two-point" => Ok(Self::TwoPoint),
            "truncated-gaussian" => Ok(Self::TruncatedGaussian),
            other => Err(Error::InvalidInput(format!(
                "unknown fluctuation kind '{other}' (expected uniform | two-point | truncated-gaussian)"
            ))),
        }
    }
}

impl std::fmt::Display for FluctuationKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            Self::Uniform => "uniform",
            Self::TwoPoint => "two-point",
            Self::TruncatedGaussian => "truncated-gaussian",
        };
        f.write_str(s)
    }
}

/// Variance shrinkage of a standard normal truncated to
/// `+-GAUSSIAN_TRUNC_SIGMAS`.
fn gaussian_truncation_variance_factor() -> f64 {
    let c = GAUSSIAN_TRUNC_SIGMAS;
    let phi_c = (-0.5 * c * c).exp() / (2.0 * std::f64::consts::PI).sqrt();
    let mass = statrs::function::erf::erf(c / std::f64::consts::SQRT_2);
    1.0 - 2.0 * c * phi_c / mass
}

/// A concrete intensity-factor distribution with `E[k] = 1`,
/// `Var[k] = variance`.
#[derive(Clone, Copy, Debug)]
pub struct FluctuationModel {
    kind: FluctuationKind,
    variance: f64,
    /// half-width (uniform, two-point) or base standard deviation
    /// (truncated Gaussian); 0 for the degenerate case
    scale: f64,
}

impl FluctuationModel {
    pub fn new(kind: FluctuationKind, variance: f64) -> Result<Self> {
        if !(variance >= 0.0) || !variance.is_finite() {
            return Err(Error::InvalidInput(format!(
                "fluctuation variance must be >= 0, got {variance}"
            )));
        }
        let scale = match kind {
            FluctuationKind::Uniform => (3.0 * variance).sqrt(),
            FluctuationKind::TwoPoint => variance.sqrt(),
            FluctuationKind::TruncatedGaussian => {
                (variance / gaussian_truncation_variance_factor()).sqrt()
            }
        };
        let model = Self { kind, variance, scale };
        let (lo, _) = model.support();
        if lo < MIN_SUPPORT {
            return Err(Error::InvalidInput(format!(
                "variance {variance} pushes the {kind} support down to {lo:.4}, below {MIN_SUPPORT}"
            )));
        }
        Ok(model)
    }

    pub fn kind(&self) -> FluctuationKind {
        self.kind
    }

    pub fn variance(&self) -> f64 {
        self.variance
    }

    pub fn support(&self) -> (f64, f64) {
        let half = match self.kind {
            FluctuationKind::Uniform | FluctuationKind::TwoPoint => self.scale,
            FluctuationKind::TruncatedGaussian => GAUSSIAN_TRUNC_SIGMAS * self.scale,
        };
        (1.0 - half, 1.0 + half)
    }

    fn gaussian_pdf_expectation(&self, g: impl Fn(f64) -> f64) -> f64 {
        let s = self.scale;
        let mass = statrs::function::erf::erf(GAUSSIAN_TRUNC_SIGMAS / std::f64::consts::SQRT_2);
        let norm = 1.0 / (s * (2.0 * std::f64::consts::PI).sqrt() * mass);
        let (lo, hi) = self.support();
        adaptive_simpson(
            |k| {
                let z = (k - 1.0) / s;
                g(k) * norm * (-0.5 * z * z).exp()
            },
            lo,
            hi,
            1e-13,
        )
    }

    fn expectation(&self, g: impl Fn(f64) -> f64) -> f64 {
        if self.variance == 0.0 {
            return g(1.0);
        }
        match self.kind {
            FluctuationKind::Uniform => {
                let d = self.scale;
                adaptive_simpson(&g, 1.0 - d, 1.0 + d, 1e-13) / (2.0 * d)
            }
            FluctuationKind::TwoPoint => {
                0.5 * (g(1.0 - self.scale) + g(1.0 + self.scale))
            }
            FluctuationKind::TruncatedGaussian => self.gaussian_pdf_expectation(g),
        }
    }

    /// `E[k]` (= 1 for every model; exposed as a self-check).
    pub fn mean(&self) -> f64 {
        self.expectation(|k| k)
    }

    /// `Var[k]` (= the requested variance; exposed as a self-check).
    pub fn variance_exact(&self) -> f64 {
        let m = self.mean();
        self.expectation(|k| (k - m) * (k - m))
    }

    /// Exact `E[1/sqrt(k)]`; closed forms where available.
    pub fn moment_inv_sqrt(&self) -> f64 {
        if self.variance == 0.0 {
            return 1.0;
        }
        match self.kind {
            FluctuationKind::Uniform => {
                let d = self.scale;
                ((1.0 + d).sqrt() - (1.0 - d).sqrt()) / d
            }
            FluctuationKind::TwoPoint => {
                let d = self.scale;
                0.5 * (1.0 / (1.0 - d).sqrt() + 1.0 / (1.0 + d).sqrt())
            }
            FluctuationKind::TruncatedGaussian => self.expectation(|k| 1.0 / k.sqrt()),
        }
    }

    /// Exact `E[1/k]`; closed forms where available.
    pub fn moment_inv(&self) -> f64 {
        if self.variance == 0.0 {
            return 1.0;
        }
        match self.kind {
            FluctuationKind::Uniform => {
                let d = self.scale;
                ((1.0 + d) / (1.0 - d)).ln() / (2.0 * d)
            }
            FluctuationKind::TwoPoint => 1.0 / (1.0 - self.variance),
            FluctuationKind::TruncatedGaussian => self.expectation(|k| 1.0 / k),
        }
    }

    /// Exact `E[sqrt(k)]` (the bias a stale calibration imprints on raw
    /// linear statistics; diagnostic).
    pub fn moment_sqrt(&self) -> f64 {
        if self.variance == 0.0 {
            return 1.0;
        }
        match self.kind {
            FluctuationKind::Uniform => {
                let d = self.scale;
                ((1.0 + d).powf(1.5) - (1.0 - d).powf(1.5)) / (3.0 * d)
            }
            FluctuationKind::TwoPoint => {
                0.5 * ((1.0 - self.scale).sqrt() + (1.0 + self.scale).sqrt())
            }
            FluctuationKind::TruncatedGaussian => self.expectation(f64::sqrt),
        }
    }

    /// Draw one intensity factor.
    pub fn sample(&self, rng: &mut impl Rng) -> f64 {
        if self.variance == 0.0 {
            return 1.0;
        }
        match self.kind {
            FluctuationKind::Uniform => {
                rand::distributions::Uniform::new_inclusive(1.0 - self.scale, 1.0 + self.scale)
                    .sample(rng)
            }
            FluctuationKind::TwoPoint => {
                if rng.gen::<bool>() {
                    1.0 + self.scale
                } else {
                    1.0 - self.scale
                }
            }
            FluctuationKind::TruncatedGaussian => loop {
                let z: f64 = rand_distr::StandardNormal.sample(rng);
                if z.abs() <= GAUSSIAN_TRUNC_SIGMAS {
                    return 1.0 + self.scale * z;
                }
            },
        }
    }
}

/// Taylor bias factors used in every rate computation; independent of the
/// distribution shape.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BiasFactors {
    /// `E[1/sqrt(k)] ~= 1 + 3 V_k / 8`, applied to linear statistics.
    pub linear: f64,
    /// `E[1/k] ~= 1 + V_k`, applied to quadratic statistics.
    pub quadratic: f64,
}

impl BiasFactors {
    pub fn taylor(vk: f64) -> Result<Self> {
        if !(vk >= 0.0) || !vk.is_finite() || vk >= 1.0 {
            return Err(Error::InvalidInput(format!(
                "fluctuation variance must be in [0, 1), got {vk}"
            )));
        }
        Ok(Self { linear: 1.0 + 3.0 * vk / 8.0, quadratic: 1.0 + vk })
    }

    /// Exact factors for a concrete distribution model. These certify the
    /// Taylor forms; rate computations always use [`BiasFactors::taylor`].
    pub fn exact(model: &FluctuationModel) -> Self {
        Self { linear: model.moment_inv_sqrt(), quadratic: model.moment_inv() }
    }

    /// Noise-map coefficient `A = linear^2 / quadratic`.
    pub fn a(&self) -> f64 {
        self.linear * self.linear / self.quadratic
    }

    /// Noise-map coefficient `B = 1 / quadratic`.
    pub fn b(&self) -> f64 {
        1.0 / self.quadratic
    }
}

/// Multiplicative bias map at the observable level: the values that actually
/// describe the attacked channel, given what a stale calibration reports.
/// Linear statistics (`c1`, `c2`) pick up the linear factor; the quadratic
/// statistic shifts as `n_B + 1 -> quadratic * (n_B + 1)`.
pub fn practical_observables(
    estimated: &ChannelObservables,
    factors: &BiasFactors,
) -> ChannelObservables {
    ChannelObservables {
        c1: factors.linear * estimated.c1,
        c2: factors.linear * estimated.c2,
        n_b: factors.quadratic * (estimated.n_b + 1.0) - 1.0,
    }
}

/// Inverse of [`practical_observables`]: what a stale calibration reports
/// for a channel whose correct observables are `practical`.
pub fn estimated_observables(
    practical: &ChannelObservables,
    factors: &BiasFactors,
) -> ChannelObservables {
    ChannelObservables {
        c1: practical.c1 / factors.linear,
        c2: practical.c2 / factors.linear,
        n_b: (practical.n_b + 1.0) / factors.quadratic - 1.0,
    }
}

/// Forward map on raw parameters, returning `(T_e, xi_e)` without judging
/// feasibility. `xi_e` can legitimately come out negative when the stale
/// normalization pushes the inferred noise below the vacuum floor; callers
/// that need a usable channel go through [`estimated_channel`].
pub fn estimated_channel_raw(
    true_ch: &ChannelParams,
    modulation_variance: f64,
    factors: &BiasFactors,
) -> (f64, f64) {
    let t_e = true_ch.transmittance / (factors.linear * factors.linear);
    let a = factors.a();
    let b = factors.b();
    let xi_e = a * true_ch.excess_noise
        - (1.0 - a) * modulation_variance
        - (1.0 - b) * (2.0 / t_e);
    (t_e, xi_e)
}

/// Forward map: channel parameters the receiver infers when the true channel
/// is `true_ch` and the calibration misses fluctuation `factors`.
pub fn estimated_channel(
    true_ch: &ChannelParams,
    modulation_variance: f64,
    factors: &BiasFactors,
) -> Result<ChannelParams> {
    let (t_e, xi_e) = estimated_channel_raw(true_ch, modulation_variance, factors);
    if xi_e < 0.0 {
        return Err(Error::InfeasibleScenario(format!(
            "estimated excess noise would be negative ({xi_e:.3e}); the fluctuation is too large for this channel"
        )));
    }
    ChannelParams::new(t_e, xi_e)
}

/// Inverse map: the true channel consistent with a target estimate
/// `(T_e derived from T_c, xi_e)` under fluctuation `factors`.
pub fn true_channel_for_estimate(
    t_true: f64,
    xi_estimated: f64,
    modulation_variance: f64,
    factors: &BiasFactors,
) -> Result<(ChannelParams, ChannelParams)> {
    let t_e = t_true / (factors.linear * factors.linear);
    let a = factors.a();
    let b = factors.b();
    let xi_c = (xi_estimated + (1.0 - a) * modulation_variance + (1.0 - b) * (2.0 / t_e)) / a;
    if xi_c < 0.0 {
        return Err(Error::InfeasibleScenario(format!(
            "true excess noise came out negative ({xi_c:.3e})"
        )));
    }
    Ok((
        ChannelParams::new(t_true, xi_c)?,
        ChannelParams::new(t_e, xi_estimated)?,
    ))
}

/// Rates of one attacked operating point.
#[derive(Clone, Copy, Debug)]
pub struct ScenarioRates {
    pub distance_km: f64,
    pub vk: f64,
    /// True channel acting on the states.
    pub true_channel: ChannelParams,
    /// Channel the receiver believes in.
    pub estimated_channel: ChannelParams,
    /// Rate the parties compute from their (biased) estimates.
    pub estimated: KeyRateBreakdown,
    /// Rate the true channel actually supports.
    pub practical: KeyRateBreakdown,
}

/// Evaluate one attacked operating point: distance fixes the true
/// transmittance, the attack pins the *estimated* excess noise at `xi_e`,
/// and the fluctuation variance sets the bias between the two channels.
pub fn attack_scenario_rates(
    model: &KeyRateModel,
    d_km: f64,
    loss_db_per_km: f64,
    xi_e: f64,
    vk: f64,
) -> Result<ScenarioRates> {
    let t_c = transmittance_from_distance(d_km, loss_db_per_km)?;
    let factors = BiasFactors::taylor(vk)?;
    let va = model.constellation().modulation_variance();
    let (true_ch, est_ch) = true_channel_for_estimate(t_c, xi_e, va, &factors)?;
    let estimated = model.key_rate(&est_ch)?;
    let practical = model.key_rate(&true_ch)?;
    Ok(ScenarioRates {
        distance_km: d_km,
        vk,
        true_channel: true_ch,
        estimated_channel: est_ch,
        estimated,
        practical,
    })
}

/// Result of the minimum-fluctuation search.
#[derive(Clone, Copy, Debug)]
pub struct MinVkResult {
    /// Smallest fluctuation variance with non-positive practical rate.
    pub vk: f64,
    /// Practical rate at that variance (at most 0 up to bisection width).
    pub practical_rate: f64,
    /// Rate the parties still believe they get there; positive means they
    /// keep distilling what they think is a key while none is secure.
    pub estimated_rate: f64,
}

/// Smallest `V_k` that drives the practical rate of the scenario to zero
/// while the parties' estimate stays pinned at `xi_e`.
///
/// Returns `vk = 0` when the scenario has no key even without an attack.
/// Errors with [`Error::Bracket`] when `v_max` is not enough, and
/// [`Error::NonMonotone`] if the practical rate fails to decrease with the
/// fluctuation size on a coarse pre-grid.
pub fn min_vk(
    model: &KeyRateModel,
    d_km: f64,
    loss_db_per_km: f64,
    xi_e: f64,
    v_max: f64,
) -> Result<MinVkResult> {
    if !(v_max > 0.0) || !v_max.is_finite() {
        return Err(Error::InvalidInput(format!("v_max must be positive, got {v_max}")));
    }
    let practical_at = |vk: f64| -> Result<f64> {
        Ok(attack_scenario_rates(model, d_km, loss_db_per_km, xi_e, vk)?.practical.rate)
    };
    let r0 = practical_at(0.0)?;
    if r0 <= 0.0 {
        let sc = attack_scenario_rates(model, d_km, loss_db_per_km, xi_e, 0.0)?;
        return Ok(MinVkResult {
            vk: 0.0,
            practical_rate: sc.practical.rate,
            estimated_rate: sc.estimated.rate,
        });
    }
    let rmax = practical_at(v_max)?;
    if rmax > 0.0 {
        return Err(Error::Bracket(format!(
            "practical rate still {rmax:.3e} at v_max = {v_max}; no root bracketed"
        )));
    }
    // the root search below assumes the rate decreases with the fluctuation
    let grid = 8;
    let mut last = r0;
    for i in 1..=grid {
        let vk = v_max * i as f64 / grid as f64;
        let r = practical_at(vk)?;
        if r > last + 1e-12 {
            return Err(Error::NonMonotone(format!(
                "practical rate rose from {last:.6e} to {r:.6e} at vk = {vk:.6e}"
            )));
        }
        last = r;
    }
    let (mut lo, mut hi) = (0.0f64, v_max);
    while hi - lo > MIN_VK_TOL {
        let mid = 0.5 * (lo + hi);
        if practical_at(mid)? > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let sc = attack_scenario_rates(model, d_km, loss_db_per_km, xi_e, hi)?;
    Ok(MinVkResult {
        vk: hi,
        practical_rate: sc.practical.rate,
        estimated_rate: sc.estimated.rate,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constellation::Constellation;
    use crate::keyrate::{MutualInfoMethod, DEFAULT_LOSS_DB_PER_KM};
    use approx::assert_abs_diff_eq;
    use rand::SeedableRng;
    use rand_chacha::ChaCha12Rng;

    const KINDS: [FluctuationKind; 3] = [
        FluctuationKind::Uniform,
        FluctuationKind::TwoPoint,
        FluctuationKind::TruncatedGaussian,
    ];

    fn qpsk_model() -> KeyRateModel {
        KeyRateModel::new(
            Constellation::qpsk(0.456).unwrap(),
            0.95,
            MutualInfoMethod::default(),
            None,
        )
        .unwrap()
    }

    #[test]
    fn support_guards() {
        assert!(FluctuationModel::new(FluctuationKind::Uniform, 0.0833).is_ok());
        assert!(FluctuationModel::new(FluctuationKind::Uniform, 0.084).is_err());
        assert!(FluctuationModel::new(FluctuationKind::TwoPoint, 0.2499).is_ok());
        assert!(FluctuationModel::new(FluctuationKind::TwoPoint, 0.2501).is_err());
        assert!(FluctuationModel::new(FluctuationKind::TruncatedGaussian, 0.0156).is_ok());
        assert!(FluctuationModel::new(FluctuationKind::TruncatedGaussian, 0.0157).is_err());
        assert!(FluctuationModel::new(FluctuationKind::Uniform, -1e-3).is_err());
    }

    #[test]
    fn degenerate_model_is_exact() {
        for kind in KINDS {
            let m = FluctuationModel::new(kind, 0.0).unwrap();
            assert_eq!(m.moment_inv_sqrt(), 1.0);
            assert_eq!(m.moment_inv(), 1.0);
            assert_eq!(m.moment_sqrt(), 1.0);
            let mut rng = ChaCha12Rng::seed_from_u64(1);
            for _ in 0..10 {
                assert_eq!(m.sample(&mut rng), 1.0);
            }
        }
    }

    #[test]
    fn normalization_and_variance_self_checks() {
        for kind in KINDS {
            for &vk in &[5e-4, 2e-3, 1e-2] {
                let m = FluctuationModel::new(kind, vk).unwrap();
                assert_abs_diff_eq!(m.mean(), 1.0, epsilon = 1e-10);
                assert_abs_diff_eq!(m.variance_exact(), vk, epsilon = 1e-10 * vk.max(1e-6));
            }
        }
    }

    #[test]
    fn exact_moments_match_taylor_to_second_order() {
        for kind in KINDS {
            for &vk in &[5e-4f64, 2e-3] {
                let m = FluctuationModel::new(kind, vk).unwrap();
                let lin = m.moment_inv_sqrt() - (1.0 + 3.0 * vk / 8.0);
                let quad = m.moment_inv() - (1.0 + vk);
                // next order is O(V_k^2) with an O(1) coefficient
                assert!(lin > 0.0 && lin < 3.0 * vk * vk, "{kind} lin residual {lin:.3e}");
                assert!(quad > 0.0 && quad < 4.0 * vk * vk, "{kind} quad residual {quad:.3e}");
                assert!(lin.abs() < 1e-5, "{kind} linear Taylor residual {lin:.3e}");
            }
        }
    }

    #[test]
    fn sampling_matches_exact_moments() {
        let n = 400_000u64;
        for kind in KINDS {
            let m = FluctuationModel::new(kind, 2e-3).unwrap();
            let mut rng = ChaCha12Rng::seed_from_u64(42);
            let (lo, hi) = m.support();
            let mut sum = 0.0;
            let mut sumsq = 0.0;
            let mut sum_inv_sqrt = 0.0;
            for _ in 0..n {
                let k = m.sample(&mut rng);
                assert!(k >= lo - 1e-12 && k <= hi + 1e-12, "{kind}: sample {k} out of support");
                sum += k;
                sumsq += k * k;
                sum_inv_sqrt += 1.0 / k.sqrt();
            }
            let mean = sum / n as f64;
            let var = sumsq / n as f64 - mean * mean;
            let se_mean = (var / n as f64).sqrt();
            assert!((mean - 1.0).abs() < 5.0 * se_mean, "{kind}: mean {mean}");
            assert!((var - 2e-3).abs() / 2e-3 < 0.05, "{kind}: var {var}");
            let mis = sum_inv_sqrt / n as f64;
            assert!((mis - m.moment_inv_sqrt()).abs() < 5.0 * se_mean, "{kind}: E[1/sqrt k] {mis}");
        }
    }

    #[test]
    fn zero_fluctuation_maps_are_identity() {
        let f = BiasFactors::taylor(0.0).unwrap();
        assert_eq!(f.linear, 1.0);
        assert_eq!(f.quadratic, 1.0);
        let ch = ChannelParams::new(0.5, 0.0123).unwrap();
        let est = estimated_channel(&ch, 0.456, &f).unwrap();
        assert_eq!(est.transmittance, ch.transmittance);
        assert_eq!(est.excess_noise, ch.excess_noise);
        let (t, e) = true_channel_for_estimate(0.5, 0.0123, 0.456, &f).unwrap();
        assert_eq!(t, ch);
        assert_eq!(e, ch);
    }

    #[test]
    fn taylor_factor_reference_values() {
        let f = BiasFactors::taylor(2e-3).unwrap();
        assert_abs_diff_eq!(f.linear, 1.00075, epsilon = 1e-12);
        assert_abs_diff_eq!(f.quadratic, 1.002, epsilon = 1e-12);
    }

    #[test]
    fn observable_maps_roundtrip() {
        let f = BiasFactors::taylor(2e-3).unwrap();
        let mut rng = ChaCha12Rng::seed_from_u64(33);
        for _ in 0..64 {
            let obs = ChannelObservables {
                c1: rng.gen_range(-1.0..1.0f64),
                c2: rng.gen_range(-1.0..1.0f64),
                n_b: rng.gen_range(-0.9..3.0f64),
            };
            let est = estimated_observables(&obs, &f);
            let back = practical_observables(&est, &f);
            assert_abs_diff_eq!(back.c1, obs.c1, epsilon = 1e-12);
            assert_abs_diff_eq!(back.c2, obs.c2, epsilon = 1e-12);
            assert_abs_diff_eq!(back.n_b, obs.n_b, epsilon = 1e-12);
            // linear statistics scale directly, the quadratic one affinely
            assert_abs_diff_eq!(est.c1 * f.linear, obs.c1, epsilon = 1e-15);
            assert_abs_diff_eq!((est.n_b + 1.0) * f.quadratic, obs.n_b + 1.0, epsilon = 1e-12);
        }
        // the identity map at zero fluctuation
        let id = BiasFactors::taylor(0.0).unwrap();
        let obs = ChannelObservables { c1: 0.3, c2: 0.2, n_b: 0.05 };
        let est = estimated_observables(&obs, &id);
        assert_eq!(est.c1, obs.c1);
        assert_abs_diff_eq!(est.n_b, obs.n_b, epsilon = 1e-15);
    }

    #[test]
    fn forward_and_inverse_noise_maps_agree() {
        let f = BiasFactors::taylor(2e-3).unwrap();
        let va = 0.456;
        let (true_ch, est_ch) = true_channel_for_estimate(0.5, 0.01, va, &f).unwrap();
        assert_abs_diff_eq!(est_ch.excess_noise, 0.01, epsilon = 1e-15);
        let (raw_t, raw_xi) = estimated_channel_raw(&true_ch, va, &f);
        assert_abs_diff_eq!(raw_t, est_ch.transmittance, epsilon = 1e-15);
        assert_abs_diff_eq!(raw_xi, 0.01, epsilon = 1e-12);
        let (true_ch, est_ch) = true_channel_for_estimate(0.794, 0.01, va, &f).unwrap();
        // the true channel must map forward onto the target estimate
        let back = estimated_channel(&true_ch, va, &f).unwrap();
        assert_abs_diff_eq!(back.transmittance, est_ch.transmittance, epsilon = 1e-15);
        assert_abs_diff_eq!(back.excess_noise, est_ch.excess_noise, epsilon = 1e-12);
        // the attack injects noise of order V_k (V_A/4 + 2/T)
        let injected = true_ch.excess_noise - est_ch.excess_noise;
        let predicted = 2e-3 * (va / 4.0 + 2.0 / est_ch.transmittance);
        assert!(
            (injected - predicted).abs() / predicted < 0.1,
            "injected {injected:.4e} vs predicted {predicted:.4e}"
        );
        assert!(true_ch.excess_noise > est_ch.excess_noise);
        assert!(est_ch.transmittance < true_ch.transmittance);
    }

    #[test]
    fn estimated_rate_exceeds_practical_under_attack() {
        let model = qpsk_model();
        let sc = attack_scenario_rates(&model, 10.0, DEFAULT_LOSS_DB_PER_KM, 0.01, 2e-3).unwrap();
        assert!(sc.estimated.rate > sc.practical.rate);
        let honest = attack_scenario_rates(&model, 10.0, DEFAULT_LOSS_DB_PER_KM, 0.01, 0.0).unwrap();
        assert_abs_diff_eq!(honest.estimated.rate, honest.practical.rate, epsilon = 1e-15);
    }

    #[test]
    fn min_vk_brackets_and_reports() {
        let model = qpsk_model();
        let res = min_vk(&model, 10.0, DEFAULT_LOSS_DB_PER_KM, 0.01, 5e-3).unwrap();
        assert!(res.vk > 0.0 && res.vk < 2e-3, "vk = {}", res.vk);
        assert!(res.practical_rate <= 0.0);
        assert!(res.estimated_rate > 0.0, "attack must stay hidden");
        // at a needle-thin bisection the practical rate sits at the root
        assert!(res.practical_rate.abs() < 1e-4, "residual {}", res.practical_rate);
    }

    #[test]
    fn min_vk_zero_when_no_key_anyway() {
        let model = qpsk_model();
        // far beyond the positive-rate range at this noise
        let res = min_vk(&model, 80.0, DEFAULT_LOSS_DB_PER_KM, 0.01, 5e-3).unwrap();
        assert_eq!(res.vk, 0.0);
        assert!(res.practical_rate <= 0.0);
    }

    #[test]
    fn min_vk_bracket_error() {
        let model = qpsk_model();
        let err = min_vk(&model, 10.0, DEFAULT_LOSS_DB_PER_KM, 0.01, 1e-9);
        assert!(matches!(err, Err(Error::Bracket(_))));
    }

    #[test]
    fn infeasible_forward_map_detected() {
        // huge fluctuation on a long, quiet channel drives the estimated
        // noise negative
        let f = BiasFactors::taylor(0.2).unwrap();
        let ch = ChannelParams::new(0.1, 0.001).unwrap();
        assert!(matches!(
            estimated_channel(&ch, 0.456, &f),
            Err(Error::InfeasibleScenario(_))
        ));
    }
}
