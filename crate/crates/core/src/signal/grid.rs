//! Frequency-domain received signal matrices.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::channel::{complex_gaussian, ChannelRealization};
use super::qam::UserData;
use crate::dft::PartialDft;
use crate::error::{invalid, Result};

/// `N x N_r` matrix of per-subcarrier, per-antenna received samples.
#[derive(Debug, Clone, PartialEq)]
pub struct FrequencyGrid {
    samples: DMatrix<Complex64>,
}

impl FrequencyGrid {
    pub fn new(samples: DMatrix<Complex64>) -> Result<Self> {
        if samples.nrows() == 0 || samples.ncols() == 0 {
            return Err(invalid("grid dimensions must be positive"));
        }
        if samples.iter().any(|v| !v.re.is_finite() || !v.im.is_finite()) {
            return Err(invalid("grid contains non-finite samples"));
        }
        Ok(FrequencyGrid { samples })
    }

    pub fn zeros(n: usize, n_r: usize) -> Self {
        FrequencyGrid { samples: DMatrix::zeros(n, n_r) }
    }

    pub(crate) fn from_matrix_unchecked(samples: DMatrix<Complex64>) -> Self {
        FrequencyGrid { samples }
    }

    pub fn samples(&self) -> &DMatrix<Complex64> {
        &self.samples
    }

    pub fn into_samples(self) -> DMatrix<Complex64> {
        self.samples
    }

    pub fn n_subcarriers(&self) -> usize {
        self.samples.nrows()
    }

    pub fn n_antennas(&self) -> usize {
        self.samples.ncols()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.samples.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn mean_power(&self) -> f64 {
        self.samples.iter().map(|v| v.norm_sqr()).sum::<f64>() / self.samples.len() as f64
    }

    /// The first `k` antenna columns.
    pub fn antenna_subset(&self, k: usize) -> Result<FrequencyGrid> {
        if k == 0 || k > self.n_antennas() {
            return Err(invalid(format!("antenna subset {k} outside 1..={}", self.n_antennas())));
        }
        Ok(FrequencyGrid { samples: self.samples.columns(0, k).into_owned() })
    }

    /// `||self - other||_F / ||other||_F`.
    pub fn relative_distance(&self, other: &FrequencyGrid) -> f64 {
        let diff: f64 = self
            .samples
            .iter()
            .zip(other.samples.iter())
            .map(|(a, b)| (a - b).norm_sqr())
            .sum();
        (diff / other.frobenius_norm().powi(2)).sqrt()
    }
}

/// The noiseless term `sum_u diag(x_u) F_L H_t(u)`.
pub fn signal_term(users: &[UserData], chan: &ChannelRealization) -> Result<DMatrix<Complex64>> {
    let symbols: Vec<&[Complex64]> = users.iter().map(|u| u.symbols.as_slice()).collect();
    signal_from_symbols(&symbols, chan)
}

/// As [`signal_term`] for raw per-user symbol vectors, which may contain
/// zeros on tones a user leaves empty.
pub fn signal_from_symbols(symbols: &[&[Complex64]], chan: &ChannelRealization) -> Result<DMatrix<Complex64>> {
    let n = symbols.first().map(|u| u.len()).ok_or_else(|| invalid("no users"))?;
    if n == 0 {
        return Err(invalid("users carry no symbols"));
    }
    if symbols.iter().any(|u| u.len() != n) {
        return Err(invalid("users have different block lengths"));
    }
    if symbols.len() != chan.n_users() {
        return Err(invalid(format!(
            "{} users but channel realization has {}",
            symbols.len(),
            chan.n_users()
        )));
    }
    if chan.n_taps() > n {
        return Err(invalid("channel longer than the block"));
    }
    let dft = PartialDft::new(n, chan.n_taps());
    let mut out = DMatrix::zeros(n, chan.n_antennas());
    for (user, taps) in symbols.iter().zip(&chan.taps) {
        let hf = dft.apply(taps);
        for (m, x) in user.iter().enumerate() {
            for r in 0..hf.ncols() {
                out[(m, r)] += x * hf[(m, r)];
            }
        }
    }
    Ok(out)
}

/// Adds circular complex Gaussian noise at `snr_db` relative to the mean
/// per-entry power of `signal`. Returns the noise variance used; an infinite
/// SNR adds nothing.
pub fn add_awgn<R: Rng + ?Sized>(signal: &mut DMatrix<Complex64>, snr_db: f64, rng: &mut R) -> f64 {
    if snr_db == f64::INFINITY {
        return 0.0;
    }
    let power = signal.iter().map(|v| v.norm_sqr()).sum::<f64>() / signal.len() as f64;
    let variance = power / 10f64.powf(snr_db / 10.0);
    signal.iter_mut().for_each(|v| *v += complex_gaussian(rng, variance));
    variance
}

pub fn assemble_grid(
    users: &[UserData],
    chan: &ChannelRealization,
    snr_db: f64,
    seed: u64,
) -> Result<FrequencyGrid> {
    if snr_db.is_nan() {
        return Err(invalid("SNR is NaN"));
    }
    let mut samples = signal_term(users, chan)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    add_awgn(&mut samples, snr_db, &mut rng);
    FrequencyGrid::new(samples)
}
