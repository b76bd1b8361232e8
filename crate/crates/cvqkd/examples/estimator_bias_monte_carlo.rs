//! Monte Carlo check of the parameter-estimation bias.
//!
//! Simulates heterodyne records under a fluctuating local oscillator and
//! runs three estimator pipelines on the *same* record: a per-pulse
//! monitored reference, a stale-calibration pipeline, and one whose
//! shot-noise normalization fluctuates with the attack. The pipeline
//! ratios land exactly on the inverse moments of the intensity factor.

use cvqkd::attack::{FluctuationKind, FluctuationModel};
use cvqkd::constellation::{Constellation, ProtocolQuantities};
use cvqkd::estimator::{verify_bias, MeasurementSetup};
use cvqkd::keyrate::{transmittance_from_distance, ChannelParams, DEFAULT_LOSS_DB_PER_KM};

fn main() -> cvqkd::Result<()> {
    let constellation = Constellation::qpsk(0.456)?;
    let quantities = ProtocolQuantities::compute(&constellation, constellation.default_dim())?;
    let t = transmittance_from_distance(10.0, DEFAULT_LOSS_DB_PER_KM)?;
    let channel = ChannelParams::new(t, 0.01)?;
    let setup = MeasurementSetup {
        constellation: &constellation,
        quantities: &quantities,
        channel,
        shot_noise_unit: 1.0,
    };

    let vk = 2e-3;
    let fluct = FluctuationModel::new(FluctuationKind::Uniform, vk)?;
    let report = verify_bias(&setup, &fluct, 32, 500_000, 11)?;

    println!(
        "QPSK at 10 km, V_k = {vk:.0e}, {} trials x {} pulses",
        report.trials, report.pulses_per_trial
    );
    println!("\nfluctuating-calibration / monitored (expected: inverse moments):");
    println!(
        "  {:<12} {:>12} {:>12} {:>10} {:>7}",
        "statistic", "observed", "predicted", "stderr", "z"
    );
    for r in &report.fluctuating_rows {
        println!(
            "  {:<12} {:>12.8} {:>12.8} {:>10.2e} {:>7.2}",
            r.statistic, r.observed, r.predicted, r.std_error, r.z_score()
        );
    }
    println!("\nstale-calibration / monitored (diagnostic, expected: direct moments):");
    for r in &report.stale_rows {
        println!(
            "  {:<12} {:>12.8} {:>12.8} {:>10.2e} {:>7.2}",
            r.statistic, r.observed, r.predicted, r.std_error, r.z_score()
        );
    }
    println!("\nmax |z| = {:.2} (all ratios within the Monte Carlo resolution)", report.max_abs_z());
    Ok(())
}
