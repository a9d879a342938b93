//! Discrete-time coined quantum walks on the torus π_N² and on finite windows of ℤ².
//!
//! Four-state walks with a 4×4 unitary coin and either the moving shift (MS) or the
//! flip-flop shift (FF). The crate provides:
//!
//! - [`coin`]: the Fourier and Grover coins, projectors and custom-coin loading;
//! - [`evolution`]: position-space stepping on π_N² and on ℤ² windows, measures,
//!   time averages, return probabilities and period detection;
//! - [`momentum`]: the discrete Fourier transform, the momentum-space matrices
//!   U(k₁,k₂), their eigensystems and the spectral evolution path;
//! - [`spectra`]: the characteristic polynomials of the Fourier walks, the closed-form
//!   eigenpairs on the special momentum lines and the constant-root certificate used
//!   to decide localization;
//! - [`closed_forms`]: the explicit amplitude formulas (uniform and diagonal initial
//!   states on π_N², and the full π_2² tables);
//! - [`io`], [`cli`], [`verify`]: dumps, the `walklab` command-line front end and the
//!   acceptance checks it runs.
//!
//! Direction convention: under either shift, component 1 moves towards −x₁,
//! component 2 towards +x₁, component 3 towards −x₂ and component 4 towards +x₂.

pub mod cli;
pub mod closed_forms;
pub mod coin;
pub mod error;
pub mod evolution;
pub mod io;
pub mod linalg;
pub mod momentum;
pub mod random;
pub mod spectra;
pub mod state;
pub mod verify;

pub use coin::{fourier_coin, fourier_coin_ff, fourier_coin_ms, grover_coin, Coin, CoinLabel, ShiftKind};
pub use error::{Result, WalkError};
pub use linalg::{Mat4, Vec4, C64};
pub use state::{Amplitude4, PlaneState, Space, TorusState};
