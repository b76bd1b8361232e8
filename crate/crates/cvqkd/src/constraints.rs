//! Constraint operators for the semidefinite formulation of the key-rate
//! optimization. This crate builds and serializes the operator bundle; it
//! does not ship a solver.
//!
//! The bipartite space is `register (x) mode`: an orthonormal classical
//! register `{|psi_k>}` of size `n_points` tensored with a truncated Fock
//! mode of size `dim`. For the ideal lossless source state
//! `|Phi> = sum_k sqrt(p_k) |psi_k>|alpha_k>` the operators reproduce the
//! first- and second-moment channel statistics at unit transmittance.
//!
//! # Dump format
//!
//! [`write_dump`] emits a self-describing UTF-8 text format:
//!
//! ```text
//! cvqkd-operator-dump v1
//! operators <count>
//! name <label>
//! rows <r>
//! cols <c>
//! <r lines of 2c floats: re im re im .. (row-major)>
//! ... repeated per operator ...
//! ```
//!
//! Floats are printed with 17 significant digits so a round trip is exact.

use std::io::{BufRead, Write};

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::constellation::{Constellation, ProtocolQuantities};
use crate::fock::{annihilation, build_tau, coherent_state};
use crate::{Error, Result};

/// Default cap on the total dumped-operator storage.
pub const DEFAULT_MEMORY_BUDGET: usize = 2 * 1024 * 1024 * 1024;

/// A named operator block.
#[derive(Clone, Debug, PartialEq)]
pub struct ConstraintOperator {
    pub name: String,
    pub matrix: DMatrix<Complex64>,
}

/// The full bundle for one constellation at one cutoff.
#[derive(Clone, Debug)]
pub struct ConstraintBundle {
    pub register_dim: usize,
    pub mode_dim: usize,
    pub operators: Vec<ConstraintOperator>,
    /// `(operator name, <Phi| op |Phi>)` under the ideal lossless state, for
    /// the operators with a fixed target.
    pub ideal_expectations: Vec<(String, f64)>,
}

/// `|Phi> = sum_k sqrt(p_k) |psi_k>|alpha_k>` as a dense vector of length
/// `n_points * dim` (register index major).
pub fn ideal_lossless_vector(c: &Constellation, dim: usize) -> Result<DVector<Complex64>> {
    let n = c.len();
    let mut phi = DVector::zeros(n * dim);
    for (k, &(alpha, p)) in c.points().iter().enumerate() {
        let v = coherent_state(alpha, dim)?;
        for m in 0..dim {
            phi[k * dim + m] = p.sqrt() * v.amp(m);
        }
    }
    Ok(phi)
}

fn estimated_bytes(n: usize, dim: usize) -> usize {
    let nd = n * dim;
    // three big bipartite blocks + register block + mode block
    3 * nd * nd * 16 + n * n * 16 + dim * dim * 16
}

/// Place `block` at register position `(k, k)` of a bipartite matrix.
fn add_register_diag_block(
    target: &mut DMatrix<Complex64>,
    k: usize,
    dim: usize,
    block: &DMatrix<Complex64>,
    scale: Complex64,
) {
    let off = k * dim;
    for r in 0..dim {
        for c in 0..dim {
            target[(off + r, off + c)] += scale * block[(r, c)];
        }
    }
}

/// Build the operator bundle. Errors with [`Error::MemoryBudget`] when the
/// dense blocks would exceed `budget_bytes` (256-point constellations at
/// physical cutoffs are out of reach for a dense representation, by design).
pub fn build_constraint_bundle(
    c: &Constellation,
    dim: usize,
    budget_bytes: usize,
) -> Result<ConstraintBundle> {
    let n = c.len();
    let need = estimated_bytes(n, dim);
    if need > budget_bytes {
        return Err(Error::MemoryBudget(format!(
            "dense constraint blocks need {need} bytes for {n} points at cutoff {dim}, budget {budget_bytes}"
        )));
    }

    let pq = ProtocolQuantities::compute(c, dim)?;
    let b = annihilation(dim);
    let b_mat = b.as_matrix();
    let nd = n * dim;

    // first-moment constraint: sum_k conj(m_k) |psi_k><psi_k| (x) b + h.c.
    let mut c1 = DMatrix::zeros(nd, nd);
    for (k, m_k) in pq.first_moments.iter().enumerate() {
        add_register_diag_block(&mut c1, k, dim, b_mat, m_k.conj());
    }
    let c1 = &c1 + c1.adjoint();

    // displacement constraint: sum_k conj(alpha_k) |psi_k><psi_k| (x) b + h.c.
    let mut c2 = DMatrix::zeros(nd, nd);
    for (k, &(alpha, _)) in c.points().iter().enumerate() {
        add_register_diag_block(&mut c2, k, dim, b_mat, alpha.conj());
    }
    let c2 = &c2 + c2.adjoint();

    // register projector (identity on the classical register)
    let pi = DMatrix::identity(n, n);

    // photon number on the mode, summed over register outcomes
    let n_op = (b.adjoint().mul(&b)).into_matrix();
    let mut photon = DMatrix::zeros(nd, nd);
    for k in 0..n {
        add_register_diag_block(&mut photon, k, dim, &n_op, Complex64::new(1.0, 0.0));
    }

    // reduced register state of the ideal source: Gram matrix
    // <psi_j| tr_mode |Phi><Phi| |psi_k> = sqrt(p_j p_k) <alpha_k|alpha_j>
    let phi = ideal_lossless_vector(c, dim)?;
    let mut register_state = DMatrix::zeros(n, n);
    for j in 0..n {
        for k in 0..n {
            let mut acc = Complex64::new(0.0, 0.0);
            for m in 0..dim {
                acc += phi[j * dim + m] * phi[k * dim + m].conj();
            }
            register_state[(j, k)] = acc;
        }
    }

    // conjugated ensemble operator on the mode (the reduced-state target in
    // the Fock basis)
    let tau_bar = build_tau(c.points(), dim)?.conjugated().into_matrix();

    let exp = |op: &DMatrix<Complex64>| -> f64 { (phi.adjoint() * op * &phi)[(0, 0)].re };
    let ideal_expectations = vec![
        ("first-moment".to_string(), exp(&c1)),
        ("displacement".to_string(), exp(&c2)),
        ("photon-number".to_string(), exp(&photon)),
    ];

    Ok(ConstraintBundle {
        register_dim: n,
        mode_dim: dim,
        operators: vec![
            ConstraintOperator { name: "first-moment".into(), matrix: c1 },
            ConstraintOperator { name: "displacement".into(), matrix: c2 },
            ConstraintOperator { name: "register-projector".into(), matrix: pi },
            ConstraintOperator { name: "photon-number".into(), matrix: photon },
            ConstraintOperator { name: "register-state".into(), matrix: register_state },
            ConstraintOperator { name: "tau-bar".into(), matrix: tau_bar },
        ],
        ideal_expectations,
    })
}

/// Serialize a bundle in the documented text format.
pub fn write_dump(bundle: &ConstraintBundle, mut out: impl Write) -> Result<()> {
    writeln!(out, "cvqkd-operator-dump v1")?;
    writeln!(out, "operators {}", bundle.operators.len())?;
    for op in &bundle.operators {
        writeln!(out, "name {}", op.name)?;
        writeln!(out, "rows {}", op.matrix.nrows())?;
        writeln!(out, "cols {}", op.matrix.ncols())?;
        for r in 0..op.matrix.nrows() {
            let mut line = String::new();
            for c in 0..op.matrix.ncols() {
                let e = op.matrix[(r, c)];
                if c > 0 {
                    line.push(' ');
                }
                line.push_str(&format!("{:.16e} {:.16e}", e.re, e.im));
            }
            writeln!(out, "{line}")?;
        }
    }
    Ok(())
}

/// Parse a dump produced by [`write_dump`].
pub fn read_dump(reader: impl BufRead) -> Result<Vec<ConstraintOperator>> {
    let mut lines = reader.lines();
    let mut next = || -> Result<String> {
        lines
            .next()
            .ok_or_else(|| Error::InvalidInput("unexpected end of dump".into()))?
            .map_err(Error::from)
    };
    let header = next()?;
    if header.trim() != "cvqkd-operator-dump v1" {
        return Err(Error::InvalidInput(format!("bad dump header: {header}")));
    }
    let count_line = next()?;
    let count: usize = count_line
        .strip_prefix("operators ")
        .and_then(|s| s.trim().parse().ok())
        .ok_or_else(|| Error::InvalidInput(format!("bad operators line: {count_line}")))?;
    let mut ops = Vec::with_capacity(count);
    for _ in 0..count {
        let name_line = next()?;
        let name = name_line
            .strip_prefix("name ")
            .ok_or_else(|| Error::InvalidInput(format!("bad name line: {name_line}")))?
            .to_string();
        let rows_line = next()?;
        let rows: usize = rows_line
            .strip_prefix("rows ")
            .and_then(|s| s.trim().parse().ok())
            .ok_or_else(|| Error::InvalidInput(format!("bad rows line: {rows_line}")))?;
        let cols_line = next()?;
        let cols: usize = cols_line
            .strip_prefix("cols ")
            .and_then(|s| s.trim().parse().ok())
            .ok_or_else(|| Error::InvalidInput(format!("bad cols line: {cols_line}")))?;
        let mut matrix = DMatrix::zeros(rows, cols);
        for r in 0..rows {
            let row_line = next()?;
            let vals: Vec<f64> = row_line
                .split_whitespace()
                .map(|t| t.parse::<f64>())
                .collect::<std::result::Result<_, _>>()
                .map_err(|e| Error::InvalidInput(format!("bad float in dump: {e}")))?;
            if vals.len() != 2 * cols {
                return Err(Error::InvalidInput(format!(
                    "row {r} of {name} has {} values, expected {}",
                    vals.len(),
                    2 * cols
                )));
            }
            for c in 0..cols {
                matrix[(r, c)] = Complex64::new(vals[2 * c], vals[2 * c + 1]);
            }
        }
        ops.push(ConstraintOperator { name, matrix });
    }
    Ok(ops)
}
