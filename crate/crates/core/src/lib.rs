//! Uplink massive-MIMO fronthaul compression by blind matrix deconvolution.
//!
//! A radio head receiving `N` subcarriers on `N_r` antennas sees
//! `Y_f = sum_u diag(x_u) F_L H_t(u) + W`. Instead of shipping all `N N_r`
//! samples it factors `Y_f` by alternating least squares into per-user data
//! diagonals and `L x N_r` channel taps, and ships `N_u (N + L N_r)` samples.
//! The baseband unit rebuilds the grid, estimates channels from pilots and
//! equalizes as usual.
//!
//! - [`signal`]: QAM data, multipath channels, received grids.
//! - [`compressor`]: the alternating-minimization decomposition and
//!   compression-ratio accounting.
//! - [`pca`]: the truncated-SVD baseline.
//! - [`recovery`]: reconstruction, channel estimation, MRC/ZF, SER.
//! - [`codec`]: the binary fronthaul frame.
//! - [`sim`]: configuration, Monte Carlo sweeps and CSV reports.

pub mod codec;
pub mod compressor;
pub mod dft;
pub mod error;
pub mod pca;
pub mod recovery;
pub mod signal;
pub mod sim;

pub use error::{Error, Result};
