//! Asymptotic secret key rates for discrete-modulated continuous-variable
//! QKD (QPSK and probabilistically shaped QAM) and the parameter-estimation
//! bias induced by a local-oscillator intensity attack with random
//! per-pulse fluctuations.
//!
//! # What it computes
//!
//! * Devetak-Winter rates `R = beta * I_AB - chi_BE` for heterodyne
//!   detection under collective attacks with reverse reconciliation. The
//!   eavesdropper bound `chi_BE` comes from the symplectic spectrum of a
//!   two-mode covariance matrix whose cross term is an analytic lower
//!   bound built from the constellation's ensemble density operator, so no
//!   semidefinite solve is needed.
//! * The systematic estimation bias caused by an attacker who rescales the
//!   transmitted local-oscillator intensity per pulse by an i.i.d. factor
//!   `k` with mean 1 and variance `V_k`: the mean intensity — and with it
//!   the calibrated shot-noise unit — is unchanged, yet every quadratic
//!   statistic the parties form is normalized with a stale calibration,
//!   which drags transmittance and excess-noise estimates away from the
//!   channel's practical values. The parties can believe in a positive key
//!   rate while the practical rate is already negative.
//! * Monte Carlo verification of the inverse-moment bias relations on
//!   simulated pulse batches, and of the finite-sample factors of the
//!   shot-noise calibration itself.
//!
//! # Conventions
//!
//! Quadratures are in shot-noise units: the vacuum variance is 1 per
//! quadrature, and a constellation with mean photon number `<n>` has
//! modulation variance `V_A = 2 <n>`. A channel is `(T, xi)` with power
//! transmittance `T` and input-referred excess noise `xi`, so a heterodyne
//! measurement sees conditional variance `2 + T xi` per quadrature (one
//! vacuum unit from the channel mode, one from the heterodyne split) and
//! total variance `T V_A + 2 + T xi`. Covariance matrices use the triple
//! `(V, W, Z) = (1 + 2<n>, 1 + 2 n_B, 2 c1 - 2 sqrt((n_B - c2^2/<n>) w))`
//! assembled from the measured observables `(c1, c2, n_B)`.
//!
//! # Module map
//!
//! * [`constellation`] — QPSK and shaped-QAM geometries, the ensemble
//!   density operator and the protocol constants derived from it.
//! * [`fock`] — truncated Fock-space linear algebra: coherent states,
//!   operators, Hermitian eigendecomposition, positive square roots and
//!   pseudo-inverses.
//! * [`quadrature`] — Gauss-Hermite rules for the mutual-information
//!   integrals.
//! * [`keyrate`] — channels, covariance assembly, symplectic spectra, the
//!   Holevo bound and its independent oracle, the discrete-input mutual
//!   information (quadrature, tensor and Monte Carlo routes, plus the
//!   Gaussian-capacity stand-in), and [`keyrate::KeyRateModel`] tying it
//!   together.
//! * [`attack`] — fluctuation distributions (uniform, two-point, truncated
//!   Gaussian), their exact and first-order inverse moments, the bias maps
//!   between practical and estimated channels and observables, attacked
//!   operating points and the minimum defeating fluctuation search.
//! * [`estimator`] — pulse-level measurement simulation, the stale /
//!   monitored / fluctuating calibration pipelines, bias verification and
//!   the finite-size calibration moments.
//! * [`constraints`] — the register-and-mode operator bundle defining the
//!   underlying feasibility problem, with a plain-text dump format.
//! * [`scenario`] — TOML scenario configs, deterministic CSV and column
//!   manifests, the sweep / threshold / Monte-Carlo drivers behind the
//!   `cvqkd` binary, and the executable property suite.
//!
//! # Example
//!
//! ```
//! use cvqkd::attack::attack_scenario_rates;
//! use cvqkd::constellation::Constellation;
//! use cvqkd::keyrate::{
//!     transmittance_from_distance, ChannelParams, KeyRateModel, MutualInfoMethod,
//!     DEFAULT_LOSS_DB_PER_KM,
//! };
//!
//! let model = KeyRateModel::new(
//!     Constellation::qpsk(0.456)?,
//!     0.95,
//!     MutualInfoMethod::default(),
//!     None,
//! )?;
//!
//! // Honest rate of a 10 km link with 0.01 SNU excess noise.
//! let t = transmittance_from_distance(10.0, DEFAULT_LOSS_DB_PER_KM)?;
//! let honest = model.key_rate(&ChannelParams::new(t, 0.01)?)?;
//! assert!(honest.rate > 0.0);
//!
//! // The same link under an intensity attack with V_k = 2e-3: the parties
//! // still estimate a positive rate, but the practical rate is gone.
//! let attacked = attack_scenario_rates(&model, 10.0, DEFAULT_LOSS_DB_PER_KM, 0.01, 2e-3)?;
//! assert!(attacked.estimated.rate > 0.0);
//! assert!(attacked.practical.rate < 0.0);
//! # Ok::<(), cvqkd::Error>(())
//! ```

pub mod attack;
pub mod constellation;
pub mod constraints;
pub mod error;
pub mod estimator;
pub mod fock;
pub mod keyrate;
pub mod quadrature;
pub mod scenario;

pub use error::{Error, Result};
