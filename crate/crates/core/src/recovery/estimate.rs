//! Pilot-based channel estimation at the baseband unit.
//!
//! Each user sends a known 4-QAM pilot block. With one user every tone is a
//! pilot; with `N_u` users, user `u` owns the comb of tones `m = u (mod N_u)`.
//! Per-tone least-squares estimates are fitted to `L` time-domain taps, which
//! denoises them and interpolates onto the full grid.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::compressor::solve::hermitian_solve;
use crate::dft::PartialDft;
use crate::error::{degenerate, invalid, Result};
use crate::signal::{ChannelRealization, FrequencyGrid, QamOrder, UserData};

/// Squared pilot magnitude below which a tone cannot be used.
pub const PILOT_FLOOR: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EstimateSource {
    PilotLs,
    Genie,
}

/// Per-user `N x N_r` frequency responses.
#[derive(Debug, Clone, PartialEq)]
pub struct ChannelEstimate {
    pub freq_response: Vec<DMatrix<Complex64>>,
    pub source: EstimateSource,
}

impl ChannelEstimate {
    /// The true `F_L H_t(u)` of every user.
    pub fn genie(chan: &ChannelRealization, n: usize) -> Self {
        ChannelEstimate { freq_response: chan.frequency_response(n), source: EstimateSource::Genie }
    }

    pub fn n_users(&self) -> usize {
        self.freq_response.len()
    }

    pub fn n_antennas(&self) -> usize {
        self.freq_response.first().map_or(0, |h| h.ncols())
    }

    pub fn n_subcarriers(&self) -> usize {
        self.freq_response.first().map_or(0, |h| h.nrows())
    }
}

/// Fixed unit-power 4-QAM pilot block for `user` (1-based).
pub fn pilot_sequence(user: usize, n: usize) -> UserData {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5049_4c4f_5400 + user as u64);
    UserData::random(user, n, QamOrder::Qam4, &mut rng)
}

/// Tones carrying user `u`'s pilots out of `n_u` users.
pub fn pilot_tones(u: usize, n_u: usize, n: usize) -> impl Iterator<Item = usize> {
    (u..n).step_by(n_u)
}

/// What each user actually transmits in the pilot block: its pilot on its
/// own tones and silence elsewhere.
pub fn transmitted_pilots(pilots: &[UserData]) -> Vec<Vec<Complex64>> {
    let n_u = pilots.len();
    pilots
        .iter()
        .enumerate()
        .map(|(u, p)| {
            let mut out = vec![Complex64::new(0.0, 0.0); p.len()];
            for m in pilot_tones(u, n_u, p.len()) {
                out[m] = p.symbols[m];
            }
            out
        })
        .collect()
}

pub fn estimate_channel(pilot_grid: &FrequencyGrid, pilots: &[UserData], taps: usize) -> Result<ChannelEstimate> {
    let (n, n_r, n_u) = (pilot_grid.n_subcarriers(), pilot_grid.n_antennas(), pilots.len());
    if n_u == 0 {
        return Err(invalid("no pilot users"));
    }
    if pilots.iter().any(|p| p.len() != n) {
        return Err(invalid("pilot blocks must span all N subcarriers"));
    }
    if taps == 0 || taps * n_u > n {
        return Err(invalid(format!("cannot fit {taps} taps from {} pilot tones per user", n / n_u)));
    }
    let dft = PartialDft::new(n, taps);
    let y = pilot_grid.samples();

    let freq_response = pilots
        .iter()
        .enumerate()
        .map(|(u, pilot)| {
            let tones: Vec<usize> = pilot_tones(u, n_u, n).collect();
            if let Some(&m) = tones.iter().find(|&&m| pilot.symbols[m].norm_sqr() < PILOT_FLOOR) {
                return Err(degenerate(format!("user {} pilot has no energy on tone {m}", u + 1)));
            }
            let ls = DMatrix::from_fn(tones.len(), n_r, |i, r| y[(tones[i], r)] / pilot.symbols[tones[i]]);
            let f_sub = DMatrix::from_fn(tones.len(), taps, |i, l| dft.at(tones[i], l));
            let f_adj = f_sub.adjoint();
            let time = hermitian_solve(&(&f_adj * &f_sub), &(&f_adj * &ls))
                .map_err(|_| invalid("pilot comb cannot resolve the requested tap count"))?;
            Ok(dft.apply(&time))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(ChannelEstimate { freq_response, source: EstimateSource::PilotLs })
}
