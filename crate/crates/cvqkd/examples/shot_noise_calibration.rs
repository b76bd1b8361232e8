//! Finite-size bias of the shot-noise calibration.
//!
//! Calibrating the shot-noise unit from `N` vacuum samples biases every
//! normalized statistic: linear ones by `E[sqrt(u/u_hat)]`, quadratic ones
//! by `E[u/u_hat] = N/(N-2)`. The example compares the exact moments,
//! their first-order forms and a Monte Carlo measurement.

use cvqkd::estimator::{
    calibration_linear_moment_exact, calibration_linear_moment_taylor,
    calibration_quadratic_moment_exact, verify_calibration_bias,
};

fn main() -> cvqkd::Result<()> {
    println!(
        "{:>6} {:>16} {:>16} {:>12}",
        "N", "exact E[sqrt]", "1 + 3/(4N)", "gap"
    );
    for n in [10, 30, 100, 300, 1000] {
        let exact = calibration_linear_moment_exact(n)?;
        let taylor = calibration_linear_moment_taylor(n);
        println!("{n:>6} {exact:>16.10} {taylor:>16.10} {:>12.3e}", exact - taylor);
    }

    let n = 100;
    let reps = 200_000;
    println!("\nMonte Carlo at N = {n}, {reps} repeated calibrations:");
    for row in verify_calibration_bias(n, reps, 1.0, 5)? {
        let z = (row.observed - row.predicted_exact) / row.std_error;
        println!(
            "  {:<18} observed {:.8}  exact {:.8}  first-order {:.8}  z = {z:+.2}",
            row.statistic, row.observed, row.predicted_exact, row.predicted_taylor
        );
    }
    println!(
        "\nquadratic factor N/(N-2) at N = {n}: {:.10}",
        calibration_quadratic_moment_exact(n)?
    );
    Ok(())
}
