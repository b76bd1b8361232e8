//! Constellations and their Fock-space scalars.
//!
//! Shows the QPSK geometry, Maxwell-Boltzmann shaping of a 16-QAM grid,
//! and the channel-independent quantities (mean photon number, the
//! first-moment correlation factor and its variance-like companion `w`)
//! extracted from the truncated density operator.

use cvqkd::constellation::{protocol_truncation_deltas, Constellation, ProtocolQuantities};

fn main() -> cvqkd::Result<()> {
    let qpsk = Constellation::qpsk(0.456)?;
    println!("QPSK at V_A = 0.456:");
    for &(alpha, p) in qpsk.points() {
        println!("  alpha = {:+.4} {:+.4}i   p = {p:.2}", alpha.re, alpha.im);
    }
    println!("  <n> = {:.6}\n", qpsk.mean_photons());

    let qam = Constellation::pcs_qam(16, 0.085, 1.0)?;
    println!("16-QAM, nu = 0.085, V_A = 1.0:");
    println!("  marginal amplitude levels and probabilities:");
    for &(x, p) in qam.marginal() {
        println!("    x = {x:+.4}   p = {p:.4}");
    }
    let corner = qam.points().iter().map(|&(_, p)| p).fold(f64::MAX, f64::min);
    let center = qam.points().iter().map(|&(_, p)| p).fold(f64::MIN, f64::max);
    println!("  center/corner probability ratio = {:.2}", center / corner);
    println!("  modulation variance check: {:.12}\n", qam.modulation_variance());

    for (label, c) in [("QPSK", &qpsk), ("16-QAM", &qam)] {
        let dim = c.default_dim();
        let pq = ProtocolQuantities::compute(c, dim)?;
        println!("{label} at Fock cutoff {dim}:");
        println!("  <n> from trace        = {:.12}", pq.mean_photons_trace);
        println!("  c1 factor             = {:.12}", pq.c1_factor);
        println!("  w                     = {:.12e}", pq.w);
        println!("  truncation deficit    = {:.3e}", pq.max_truncation_deficit);
        let (dn, dc1, dw) = protocol_truncation_deltas(c, dim, 8)?;
        println!("  deltas at cutoff+8    = {dn:.2e}, {dc1:.2e}, {dw:.2e}\n");
    }
    Ok(())
}
