//! Monte Carlo simulation of the heterodyne measurement record and the
//! parameter estimators acting on it, under three normalization policies:
//!
//! * **stale** — every pulse is normalized by the shot-noise unit measured
//!   at calibration time, ignoring intensity fluctuation entirely (what a
//!   receiver without monitoring actually does);
//! * **monitored** — every pulse is normalized by its true per-pulse
//!   shot-noise unit `k_i u_S` (the real-time-monitoring counterfactual,
//!   unbiased by construction);
//! * **fluctuating-SNU** — the shot-noise-stationary record `y_raw/sqrt(k)`
//!   normalized per pulse by the practical unit `k_i u_S`. Because the
//!   intensity factor is independent of the quadrature data, the ratio of
//!   this pipeline to the monitored one equals `E[1/sqrt(k)]` for the linear
//!   statistics and `E[1/k]` for the quadratic one, exactly — these are the
//!   moment factors that enter the key-rate bias maps.
//!
//! Estimator convention: a batch of `N` pulses provides `2N` real record
//! entries (the two quadrature components). With `m_j` the modulated
//! ensemble's conditional first moment of the sent point and
//! `(2 Re alpha_j, 2 Im alpha_j)` the sent quadrature displacement,
//!
//! ```text
//! c1_hat       = (1/(N sqrt(u_S)))   sum_t a_t y_t
//! c2_hat       = (1/(2 N sqrt(u_S))) sum_t x_t y_t
//! n_B_hat + 1  = (1/(N u_S))         sum_t y_t^2
//! ```
//!
//! where `a_t` interleaves `(Re m_j, Im m_j)`, `x_t` interleaves
//! `(2 Re alpha_j, 2 Im alpha_j)` and `y_t` the raw record components. At
//! `k = 1` all three converge to the analytic `(c_1, c_2, n_B)`.

use rand::distributions::Distribution;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;

use crate::attack::FluctuationModel;
use crate::constellation::{Constellation, ProtocolQuantities};
use crate::keyrate::{ChannelObservables, ChannelParams};
use crate::{Error, Result};

/// Everything fixed about one measurement campaign.
#[derive(Clone, Copy, Debug)]
pub struct MeasurementSetup<'a> {
    pub constellation: &'a Constellation,
    pub quantities: &'a ProtocolQuantities,
    pub channel: ChannelParams,
    /// Calibrated shot-noise unit `u_S` (arbitrary positive scale).
    pub shot_noise_unit: f64,
}

/// One simulated batch: sent point indices, per-pulse intensity factors and
/// the raw (unnormalized) record components.
#[derive(Clone, Debug)]
pub struct SimulatedBatch {
    pub seed: u64,
    pub stream: u64,
    pub point_idx: Vec<u32>,
    pub k: Vec<f64>,
    pub re_raw: Vec<f64>,
    pub im_raw: Vec<f64>,
}

impl SimulatedBatch {
    pub fn len(&self) -> usize {
        self.point_idx.len()
    }

    pub fn is_empty(&self) -> bool {
        self.point_idx.is_empty()
    }
}

/// Simulate `n_pulses` heterodyne outcomes of the physical model: the sent
/// coherent state passes the channel, the detector adds one vacuum unit, and
/// the local-oscillator intensity factor `k` scales the *raw* record by
/// `sqrt(k u_S)`.
pub fn simulate_batch(
    setup: &MeasurementSetup,
    fluct: &FluctuationModel,
    n_pulses: usize,
    seed: u64,
    stream: u64,
) -> Result<SimulatedBatch> {
    if setup.shot_noise_unit <= 0.0 || !setup.shot_noise_unit.is_finite() {
        return Err(Error::InvalidInput(format!(
            "shot-noise unit must be positive, got {}",
            setup.shot_noise_unit
        )));
    }
    if n_pulses < 2 {
        return Err(Error::InvalidInput(format!(
            "a batch needs at least 2 pulses, got {n_pulses}"
        )));
    }
    let points = setup.constellation.points();
    let cumulative: Vec<f64> = points
        .iter()
        .scan(0.0, |acc, &(_, p)| {
            *acc += p;
            Some(*acc)
        })
        .collect();
    let t = setup.channel.transmittance;
    let rt = t.sqrt();
    let noise_std = (2.0 + t * setup.channel.excess_noise).sqrt();
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    let normal = rand_distr::StandardNormal;

    let mut point_idx = Vec::with_capacity(n_pulses);
    let mut ks = Vec::with_capacity(n_pulses);
    let mut re_raw = Vec::with_capacity(n_pulses);
    let mut im_raw = Vec::with_capacity(n_pulses);
    for _ in 0..n_pulses {
        let r: f64 = rng.gen();
        let i = cumulative.partition_point(|&c| c < r).min(points.len() - 1);
        let alpha = points[i].0;
        let zq: f64 = normal.sample(&mut rng);
        let zp: f64 = normal.sample(&mut rng);
        // shot-noise-unit quadrature outcomes
        let q = 2.0 * rt * alpha.re + noise_std * zq;
        let p = 2.0 * rt * alpha.im + noise_std * zp;
        let k = fluct.sample(&mut rng);
        // raw record = sqrt(k u_S) * (q + i p) / 2
        let scale = (k * setup.shot_noise_unit).sqrt() / 2.0;
        point_idx.push(i as u32);
        ks.push(k);
        re_raw.push(scale * q);
        im_raw.push(scale * p);
    }
    Ok(SimulatedBatch { seed, stream, point_idx, k: ks, re_raw, im_raw })
}

/// The three pipelines evaluated on one shared record.
#[derive(Clone, Copy, Debug)]
pub struct BatchEstimates {
    pub stale: ChannelObservables,
    pub monitored: ChannelObservables,
    pub fluctuating: ChannelObservables,
}

/// Run all three estimator pipelines over a batch. An empty batch returns
/// zero correlations and `n_B = -1` (zero recorded energy).
pub fn estimate_all(setup: &MeasurementSetup, batch: &SimulatedBatch) -> BatchEstimates {
    let n = batch.len();
    let u = setup.shot_noise_unit;
    let su = u.sqrt();
    let points = setup.constellation.points();
    let moments = &setup.quantities.first_moments;

    let mut acc = [[0.0f64; 3]; 3]; // [pipeline][statistic]
    for i in 0..n {
        let idx = batch.point_idx[i] as usize;
        let alpha = points[idx].0;
        let m = moments[idx];
        let k = batch.k[i];
        let sk = k.sqrt();
        let (yr, yi) = (batch.re_raw[i], batch.im_raw[i]);

        // per-pulse pair contributions: a.y, x.y, y.y
        let a_dot = m.re * yr + m.im * yi;
        let x_dot = 2.0 * alpha.re * yr + 2.0 * alpha.im * yi;
        let y_sq = yr * yr + yi * yi;

        // stale: raw record, calibration-time unit
        acc[0][0] += a_dot;
        acc[0][1] += x_dot;
        acc[0][2] += y_sq;
        // monitored: per-pulse correct unit k u_S
        acc[1][0] += a_dot / sk;
        acc[1][1] += x_dot / sk;
        acc[1][2] += y_sq / k;
        // fluctuating-SNU: stationary record z = y/sqrt(k), practical unit
        acc[2][0] += a_dot / k;
        acc[2][1] += x_dot / k;
        acc[2][2] += y_sq / (k * k);
    }

    let finish = |row: [f64; 3]| -> ChannelObservables {
        if n == 0 {
            return ChannelObservables { c1: 0.0, c2: 0.0, n_b: -1.0 };
        }
        let nf = n as f64;
        ChannelObservables {
            c1: row[0] / (nf * su),
            c2: row[1] / (2.0 * nf * su),
            n_b: row[2] / (nf * u) - 1.0,
        }
    };
    BatchEstimates {
        stale: finish(acc[0]),
        monitored: finish(acc[1]),
        fluctuating: finish(acc[2]),
    }
}

/// One verified ratio between two pipelines.
#[derive(Clone, Copy, Debug)]
pub struct BiasRatioRow {
    pub statistic: &'static str,
    pub predicted: f64,
    pub observed: f64,
    pub std_error: f64,
}

impl BiasRatioRow {
    pub fn z_score(&self) -> f64 {
        if self.std_error == 0.0 {
            if self.observed == self.predicted {
                0.0
            } else {
                f64::INFINITY
            }
        } else {
            (self.observed - self.predicted) / self.std_error
        }
    }
}

/// Result of the Monte Carlo bias verification.
#[derive(Clone, Debug)]
pub struct BiasReport {
    pub trials: usize,
    pub pulses_per_trial: usize,
    /// fluctuating-SNU / monitored ratios: predicted
    /// `(E[1/sqrt k], E[1/sqrt k], E[1/k])`.
    pub fluctuating_rows: Vec<BiasRatioRow>,
    /// stale / monitored ratios: predicted `(E[sqrt k], E[sqrt k], 1)`
    /// (physical stale-calibration bias, diagnostic).
    pub stale_rows: Vec<BiasRatioRow>,
}

impl BiasReport {
    pub fn max_abs_z(&self) -> f64 {
        self.fluctuating_rows
            .iter()
            .chain(&self.stale_rows)
            .map(|r| r.z_score().abs())
            .fold(0.0, f64::max)
    }
}

fn ratio_stats(samples: &[f64]) -> (f64, f64) {
    let n = samples.len() as f64;
    let mean = samples.iter().sum::<f64>() / n;
    if samples.len() < 2 {
        return (mean, 0.0);
    }
    let var = samples.iter().map(|s| (s - mean) * (s - mean)).sum::<f64>() / (n - 1.0);
    (mean, (var / n).sqrt())
}

/// Verify the inverse-moment bias relations by simulation: run `trials`
/// independent batches, compute per-trial pipeline ratios on the shared
/// record, and compare their means against the exact distribution moments.
///
/// Errors with [`Error::InsufficientPower`] when the Monte Carlo resolution
/// cannot distinguish the predicted bias from no bias at 3 standard errors
/// (skipped for the degenerate `V_k = 0` model, where the pipelines
/// coincide identically).
pub fn verify_bias(
    setup: &MeasurementSetup,
    fluct: &FluctuationModel,
    trials: usize,
    pulses_per_trial: usize,
    seed: u64,
) -> Result<BiasReport> {
    if trials == 0 || pulses_per_trial == 0 {
        return Err(Error::InvalidInput("need at least one trial and one pulse".into()));
    }
    let mut fluct_ratios: [Vec<f64>; 3] = [Vec::new(), Vec::new(), Vec::new()];
    let mut stale_ratios: [Vec<f64>; 3] = [Vec::new(), Vec::new(), Vec::new()];
    for t in 0..trials {
        let batch = simulate_batch(setup, fluct, pulses_per_trial, seed, t as u64)?;
        let est = estimate_all(setup, &batch);
        let triples = |o: &ChannelObservables| [o.c1, o.c2, o.n_b + 1.0];
        let reference = triples(&est.monitored);
        let fl = triples(&est.fluctuating);
        let st = triples(&est.stale);
        for s in 0..3 {
            fluct_ratios[s].push(fl[s] / reference[s]);
            stale_ratios[s].push(st[s] / reference[s]);
        }
    }
    let names = ["c1", "c2", "n_b_plus_1"];
    let mis = fluct.moment_inv_sqrt();
    let mi = fluct.moment_inv();
    let msq = fluct.moment_sqrt();
    let fluct_pred = [mis, mis, mi];
    let stale_pred = [msq, msq, 1.0];
    let mut fluctuating_rows = Vec::new();
    let mut stale_rows = Vec::new();
    for s in 0..3 {
        let (mean, se) = ratio_stats(&fluct_ratios[s]);
        fluctuating_rows.push(BiasRatioRow {
            statistic: names[s],
            predicted: fluct_pred[s],
            observed: mean,
            std_error: se,
        });
        let (mean, se) = ratio_stats(&stale_ratios[s]);
        stale_rows.push(BiasRatioRow {
            statistic: names[s],
            predicted: stale_pred[s],
            observed: mean,
            std_error: se,
        });
    }
    if fluct.variance() > 0.0 {
        for row in &fluctuating_rows {
            let effect = (row.predicted - 1.0).abs();
            if effect > 0.0 && 3.0 * row.std_error >= effect {
                return Err(Error::InsufficientPower(format!(
                    "statistic {}: predicted bias {:.3e} vs 3 sigma = {:.3e}; increase pulses or trials",
                    row.statistic,
                    effect,
                    3.0 * row.std_error
                )));
            }
        }
    }
    Ok(BiasReport {
        trials,
        pulses_per_trial,
        fluctuating_rows,
        stale_rows,
    })
}

/// Estimate the shot-noise unit from `n_cal` vacuum samples:
/// `u_hat = (1/N) sum v_i^2`, `v ~ N(0, u_S)`.
pub fn calibrate_snu(n_cal: usize, u_s: f64, rng: &mut impl Rng) -> Result<f64> {
    // below 4 samples the inverse moments of u_hat are useless or divergent
    if n_cal < 4 {
        return Err(Error::InvalidInput(format!(
            "need at least 4 calibration samples, got {n_cal}"
        )));
    }
    if u_s <= 0.0 || !u_s.is_finite() {
        return Err(Error::InvalidInput(format!("shot-noise unit must be positive, got {u_s}")));
    }
    let std = u_s.sqrt();
    let normal = rand_distr::StandardNormal;
    let mut acc = 0.0;
    for _ in 0..n_cal {
        let z: f64 = normal.sample(rng);
        let v = std * z;
        acc += v * v;
    }
    Ok(acc / n_cal as f64)
}

/// Exact `E[sqrt(u_S / u_hat)] = sqrt(N/2) Gamma((N-1)/2) / Gamma(N/2)`
/// for an `N`-sample calibration.
pub fn calibration_linear_moment_exact(n_cal: usize) -> Result<f64> {
    if n_cal < 2 {
        return Err(Error::InvalidInput("moment diverges below 2 samples".into()));
    }
    let n = n_cal as f64;
    let ln = statrs::function::gamma::ln_gamma((n - 1.0) / 2.0)
        - statrs::function::gamma::ln_gamma(n / 2.0);
    Ok((n / 2.0).sqrt() * ln.exp())
}

/// First-order form of the same moment: `1 + 3/(4N)`.
pub fn calibration_linear_moment_taylor(n_cal: usize) -> f64 {
    1.0 + 3.0 / (4.0 * n_cal as f64)
}

/// Exact `E[u_S / u_hat] = N / (N - 2)`.
pub fn calibration_quadratic_moment_exact(n_cal: usize) -> Result<f64> {
    if n_cal < 3 {
        return Err(Error::InvalidInput("moment diverges below 3 samples".into()));
    }
    let n = n_cal as f64;
    Ok(n / (n - 2.0))
}

/// One verified calibration-bias statistic.
#[derive(Clone, Copy, Debug)]
pub struct CalibrationRow {
    pub statistic: &'static str,
    pub predicted_exact: f64,
    pub predicted_taylor: f64,
    pub observed: f64,
    pub std_error: f64,
}

/// Monte Carlo check of the finite-calibration bias: repeat the `N`-sample
/// calibration `reps` times and average `sqrt(u/u_hat)` (linear-statistic
/// factor) and `u/u_hat` (quadratic-statistic factor).
pub fn verify_calibration_bias(
    n_cal: usize,
    reps: usize,
    u_s: f64,
    seed: u64,
) -> Result<Vec<CalibrationRow>> {
    if reps < 2 {
        return Err(Error::InvalidInput("need at least two repetitions".into()));
    }
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    let mut lin = Vec::with_capacity(reps);
    let mut quad = Vec::with_capacity(reps);
    for _ in 0..reps {
        let u_hat = calibrate_snu(n_cal, u_s, &mut rng)?;
        lin.push((u_s / u_hat).sqrt());
        quad.push(u_s / u_hat);
    }
    let (lin_mean, lin_se) = ratio_stats(&lin);
    let (quad_mean, quad_se) = ratio_stats(&quad);
    Ok(vec![
        CalibrationRow {
            statistic: "linear_factor",
            predicted_exact: calibration_linear_moment_exact(n_cal)?,
            predicted_taylor: calibration_linear_moment_taylor(n_cal),
            observed: lin_mean,
            std_error: lin_se,
        },
        CalibrationRow {
            statistic: "quadratic_factor",
            predicted_exact: calibration_quadratic_moment_exact(n_cal)?,
            predicted_taylor: calibration_quadratic_moment_exact(n_cal)?,
            observed: quad_mean,
            std_error: quad_se,
        },
    ])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::attack::FluctuationKind;
    use approx::assert_abs_diff_eq;

    fn qpsk_setup(
        channel: ChannelParams,
        u_s: f64,
    ) -> (Constellation, ProtocolQuantities, ChannelParams, f64) {
        let c = Constellation::qpsk(0.456).unwrap();
        let pq = ProtocolQuantities::compute(&c, c.default_dim()).unwrap();
        (c, pq, channel, u_s)
    }

    #[test]
    fn estimators_converge_to_analytic_values_at_unit_k() {
        let ch = ChannelParams::new(0.5, 0.01).unwrap();
        let (c, pq, ch, u_s) = qpsk_setup(ch, 3.7);
        let setup = MeasurementSetup {
            constellation: &c,
            quantities: &pq,
            channel: ch,
            shot_noise_unit: u_s,
        };
        let fluct = FluctuationModel::new(FluctuationKind::Uniform, 0.0).unwrap();
        // trial-level statistics to get honest standard errors
        let trials = 24;
        let pulses = 40_000;
        let mut c1s = Vec::new();
        let mut c2s = Vec::new();
        let mut nbs = Vec::new();
        for t in 0..trials {
            let batch = simulate_batch(&setup, &fluct, pulses, 11, t).unwrap();
            let est = estimate_all(&setup, &batch).stale;
            c1s.push(est.c1);
            c2s.push(est.c2);
            nbs.push(est.n_b);
        }
        let t = ch.transmittance;
        let expect = [
            t.sqrt() * pq.c1_factor,
            t.sqrt() * pq.mean_photons,
            t * pq.mean_photons + t * ch.excess_noise / 2.0,
        ];
        for (samples, want) in [(&c1s, expect[0]), (&c2s, expect[1]), (&nbs, expect[2])] {
            let (mean, se) = super::ratio_stats(samples);
            assert!(
                (mean - want).abs() < 4.0 * se,
                "estimator mean {mean} vs analytic {want} (se {se})"
            );
            // the fitted scale factor is 1, not merely constant
            assert_abs_diff_eq!(mean / want, 1.0, epsilon = 25.0 * se / want.abs());
        }
    }

    #[test]
    fn pipelines_coincide_at_zero_fluctuation() {
        let ch = ChannelParams::new(0.5, 0.01).unwrap();
        let (c, pq, ch, u_s) = qpsk_setup(ch, 1.0);
        let setup = MeasurementSetup {
            constellation: &c,
            quantities: &pq,
            channel: ch,
            shot_noise_unit: u_s,
        };
        let fluct = FluctuationModel::new(FluctuationKind::TwoPoint, 0.0).unwrap();
        let batch = simulate_batch(&setup, &fluct, 5_000, 3, 0).unwrap();
        let est = estimate_all(&setup, &batch);
        assert_eq!(est.stale.c1, est.monitored.c1);
        assert_eq!(est.stale.n_b, est.fluctuating.n_b);
    }

    #[test]
    fn empty_batch_contract() {
        let ch = ChannelParams::new(0.5, 0.01).unwrap();
        let (c, pq, ch, u_s) = qpsk_setup(ch, 1.0);
        let setup = MeasurementSetup {
            constellation: &c,
            quantities: &pq,
            channel: ch,
            shot_noise_unit: u_s,
        };
        let fluct = FluctuationModel::new(FluctuationKind::Uniform, 1e-3).unwrap();
        assert!(simulate_batch(&setup, &fluct, 1, 3, 0).is_err());
        let batch = SimulatedBatch {
            seed: 3,
            stream: 0,
            point_idx: vec![],
            k: vec![],
            re_raw: vec![],
            im_raw: vec![],
        };
        let est = estimate_all(&setup, &batch);
        assert_eq!(est.stale.c1, 0.0);
        assert_eq!(est.stale.c2, 0.0);
        assert_eq!(est.stale.n_b, -1.0);
    }

    #[test]
    fn batches_are_reproducible_and_stream_separated() {
        let ch = ChannelParams::new(0.3, 0.02).unwrap();
        let (c, pq, ch, u_s) = qpsk_setup(ch, 2.0);
        let setup = MeasurementSetup {
            constellation: &c,
            quantities: &pq,
            channel: ch,
            shot_noise_unit: u_s,
        };
        let fluct = FluctuationModel::new(FluctuationKind::Uniform, 1e-3).unwrap();
        let a = simulate_batch(&setup, &fluct, 64, 5, 1).unwrap();
        let b = simulate_batch(&setup, &fluct, 64, 5, 1).unwrap();
        let c2 = simulate_batch(&setup, &fluct, 64, 5, 2).unwrap();
        assert_eq!(a.re_raw, b.re_raw);
        assert_eq!(a.k, b.k);
        assert_ne!(a.re_raw, c2.re_raw);
    }

    #[test]
    fn bias_ratios_match_inverse_moments() {
        let ch = ChannelParams::new(0.5, 0.01).unwrap();
        let (c, pq, ch, u_s) = qpsk_setup(ch, 1.3);
        let setup = MeasurementSetup {
            constellation: &c,
            quantities: &pq,
            channel: ch,
            shot_noise_unit: u_s,
        };
        let fluct = FluctuationModel::new(FluctuationKind::Uniform, 2e-3).unwrap();
        let report = verify_bias(&setup, &fluct, 24, 50_000, 17).unwrap();
        for row in &report.fluctuating_rows {
            assert!(
                row.z_score().abs() < 4.0,
                "{}: observed {} predicted {} se {}",
                row.statistic,
                row.observed,
                row.predicted,
                row.std_error
            );
        }
        // physical stale pipeline shows the sqrt-moment bias instead
        for row in &report.stale_rows {
            assert!(
                row.z_score().abs() < 4.0,
                "stale {}: observed {} predicted {} se {}",
                row.statistic,
                row.observed,
                row.predicted,
                row.std_error
            );
        }
        // and the two predictions genuinely differ (inverse vs direct moment)
        assert!(report.fluctuating_rows[0].predicted > 1.0);
        assert!(report.stale_rows[0].predicted < 1.0);
    }

    #[test]
    fn underpowered_verification_is_an_error() {
        let ch = ChannelParams::new(0.5, 0.01).unwrap();
        let (c, pq, ch, u_s) = qpsk_setup(ch, 1.0);
        let setup = MeasurementSetup {
            constellation: &c,
            quantities: &pq,
            channel: ch,
            shot_noise_unit: u_s,
        };
        // tiny bias, tiny sample: cannot resolve
        let fluct = FluctuationModel::new(FluctuationKind::Uniform, 1e-6).unwrap();
        let err = verify_bias(&setup, &fluct, 4, 200, 1);
        assert!(matches!(err, Err(Error::InsufficientPower(_))));
    }

    #[test]
    fn calibration_moments() {
        assert_abs_diff_eq!(
            calibration_linear_moment_exact(100).unwrap(),
            1.007578953490,
            epsilon = 1e-9
        );
        assert_abs_diff_eq!(calibration_linear_moment_taylor(100), 1.0075, epsilon = 1e-12);
        assert_abs_diff_eq!(
            calibration_quadratic_moment_exact(100).unwrap(),
            100.0 / 98.0,
            epsilon = 1e-15
        );
        // Taylor sits 8.3e-5 below the exact value at N = 100
        let gap = calibration_linear_moment_exact(100).unwrap()
            - calibration_linear_moment_taylor(100);
        assert!(gap > 7e-5 && gap < 9e-5, "gap {gap}");
    }

    #[test]
    fn calibration_mc_matches_exact_moment() {
        let rows = verify_calibration_bias(100, 20_000, 2.5, 9).unwrap();
        for row in &rows {
            let z = (row.observed - row.predicted_exact) / row.std_error;
            assert!(z.abs() < 4.0, "{}: z = {z}", row.statistic);
        }
        // estimator really is biased: zero-bias hypothesis strongly rejected
        let lin = &rows[0];
        assert!((lin.observed - 1.0) / lin.std_error > 5.0);
    }

    #[test]
    fn calibrate_snu_is_consistent() {
        let mut rng = ChaCha12Rng::seed_from_u64(4);
        let u_hat = calibrate_snu(200_000, 3.0, &mut rng).unwrap();
        assert!((u_hat - 3.0).abs() < 0.05, "u_hat = {u_hat}");
        assert!(calibrate_snu(3, 1.0, &mut rng).is_err());
    }
}
