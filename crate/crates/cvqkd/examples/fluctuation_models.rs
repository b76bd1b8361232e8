//! The three intensity-fluctuation distribution shapes.
//!
//! All rate computations use shape-independent first-order factors
//! (`E[1/sqrt k] ~ 1 + 3 V_k / 8`, `E[1/k] ~ 1 + V_k`); this example shows
//! how tightly the exact moments of each shape cluster around them.

use cvqkd::attack::{BiasFactors, FluctuationKind, FluctuationModel};
use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;

fn main() -> cvqkd::Result<()> {
    let kinds = [
        FluctuationKind::Uniform,
        FluctuationKind::TwoPoint,
        FluctuationKind::TruncatedGaussian,
    ];

    for vk in [5e-4, 2e-3] {
        let taylor = BiasFactors::taylor(vk)?;
        println!("V_k = {vk:.0e}   (Taylor: E[1/sqrt k] = {:.8}, E[1/k] = {:.8})", taylor.linear, taylor.quadratic);
        println!(
            "  {:<20} {:>14} {:>14} {:>12} {:>12}",
            "shape", "E[1/sqrt k]", "E[1/k]", "support lo", "support hi"
        );
        for kind in kinds {
            let m = FluctuationModel::new(kind, vk)?;
            let (lo, hi) = m.support();
            println!(
                "  {:<20} {:>14.8} {:>14.8} {:>12.4} {:>12.4}",
                kind.to_string(),
                m.moment_inv_sqrt(),
                m.moment_inv(),
                lo,
                hi
            );
        }
        println!();
    }

    // sampling agrees with the analytic moments
    let m = FluctuationModel::new(FluctuationKind::TruncatedGaussian, 2e-3)?;
    let mut rng = ChaCha12Rng::seed_from_u64(7);
    let n = 200_000;
    let mut mean = 0.0;
    let mut inv_sqrt = 0.0;
    for _ in 0..n {
        let k = m.sample(&mut rng);
        mean += k;
        inv_sqrt += 1.0 / k.sqrt();
    }
    println!(
        "truncated-gaussian sampling ({n} draws): mean = {:.6} (exact {:.6}), E[1/sqrt k] = {:.6} (exact {:.6})",
        mean / n as f64,
        m.mean(),
        inv_sqrt / n as f64,
        m.moment_inv_sqrt()
    );
    Ok(())
}
