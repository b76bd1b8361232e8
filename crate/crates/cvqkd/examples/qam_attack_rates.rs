//! Probabilistically shaped 256-QAM under the intensity attack.
//!
//! Large shaped constellations approach Gaussian-modulation performance,
//! so the same fluctuation variance shifts the practical/estimated gap at
//! much longer distances than for QPSK.

use cvqkd::attack::attack_scenario_rates;
use cvqkd::constellation::Constellation;
use cvqkd::keyrate::{KeyRateModel, MutualInfoMethod, DEFAULT_LOSS_DB_PER_KM};

fn main() -> cvqkd::Result<()> {
    let constellation = Constellation::pcs_qam(256, 0.039, 6.332)?;
    println!(
        "256-QAM, nu = 0.039: V_A = {:.3}, <n> = {:.4}, Fock cutoff {}",
        constellation.modulation_variance(),
        constellation.mean_photons(),
        constellation.default_dim()
    );
    let model = KeyRateModel::new(constellation, 0.95, MutualInfoMethod::default(), None)?;

    for xi_estimated in [0.029, 0.05] {
        println!("\nestimated excess noise = {xi_estimated}");
        println!(
            "  {:>5}  {:>12}  {:>12}  {:>12}",
            "km", "honest", "practical", "estimated"
        );
        for d in [0.0, 5.0, 10.0, 15.0, 20.0, 25.0, 30.0, 35.0, 40.0] {
            let honest = attack_scenario_rates(&model, d, DEFAULT_LOSS_DB_PER_KM, xi_estimated, 0.0)?;
            let attacked =
                attack_scenario_rates(&model, d, DEFAULT_LOSS_DB_PER_KM, xi_estimated, 2e-3)?;
            println!(
                "  {:>5.1}  {:>12.6}  {:>12.6}  {:>12.6}",
                d, honest.practical.rate, attacked.practical.rate, attacked.estimated.rate
            );
        }
    }
    Ok(())
}
