//! Constraint operators for a numerical key-rate lower bound.
//!
//! Builds the register (x) mode operator bundle that a semidefinite-program
//! solver would consume: the first-moment and displacement correlations,
//! the register projector, the photon-number block and the conjugated
//! modulation state. On the ideal lossless pure state the correlation
//! operators reproduce the protocol scalars exactly. The bundle is written
//! to a plain-text dump and read back bit-identically.

use cvqkd::constellation::Constellation;
use cvqkd::constraints::{build_constraint_bundle, read_dump, write_dump, DEFAULT_MEMORY_BUDGET};

fn main() -> cvqkd::Result<()> {
    let constellation = Constellation::qpsk(0.456)?;
    let dim = constellation.default_dim();
    let bundle = build_constraint_bundle(&constellation, dim, DEFAULT_MEMORY_BUDGET)?;

    println!(
        "register dim {} x mode dim {} ({} operators)",
        bundle.register_dim,
        bundle.mode_dim,
        bundle.operators.len()
    );
    println!("\noperators:");
    for op in &bundle.operators {
        println!("  {:<18} {}x{}", op.name, op.matrix.nrows(), op.matrix.ncols());
    }
    println!("\nideal lossless-state expectations:");
    for (name, value) in &bundle.ideal_expectations {
        println!("  <{name}> = {value:+.12}");
    }

    let path = std::env::temp_dir().join("qpsk_constraint_operators.txt");
    let file = std::fs::File::create(&path)?;
    write_dump(&bundle, std::io::BufWriter::new(file))?;
    let size = std::fs::metadata(&path)?.len();
    let back = read_dump(std::io::BufReader::new(std::fs::File::open(&path)?))?;
    let roundtrip = back.len() == bundle.operators.len()
        && back
            .iter()
            .zip(&bundle.operators)
            .all(|(a, b)| a.name == b.name && a.matrix == b.matrix);
    println!("\nwrote {} bytes to {} (exact roundtrip: {roundtrip})", size, path.display());

    // large shaped constellations exceed the dense-operator budget on purpose
    let qam = Constellation::pcs_qam(256, 0.039, 6.332)?;
    match build_constraint_bundle(&qam, qam.default_dim(), DEFAULT_MEMORY_BUDGET) {
        Err(e) => println!("\n256-QAM at cutoff {}: {e}", qam.default_dim()),
        Ok(_) => println!("\n256-QAM bundle unexpectedly fit in memory"),
    }
    Ok(())
}
