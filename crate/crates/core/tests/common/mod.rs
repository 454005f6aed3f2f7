#![allow(dead_code)]

use fronthaul_md::signal::{assemble_grid, draw_channel, ChannelRealization, FrequencyGrid, PowerDelayProfile, QamOrder, UserData};
use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn cgauss<R: Rng>(rng: &mut R) -> Complex64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Complex64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
}

pub fn random_matrix<R: Rng>(rows: usize, cols: usize, rng: &mut R) -> DMatrix<Complex64> {
    DMatrix::from_fn(rows, cols, |_, _| cgauss(rng))
}

pub fn fro(m: &DMatrix<Complex64>) -> f64 {
    m.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt()
}

/// A noiseless or noisy scenario: users, channel and grid.
pub struct Scene {
    pub users: Vec<UserData>,
    pub chan: ChannelRealization,
    pub grid: FrequencyGrid,
}

#[allow(clippy::too_many_arguments)]
pub fn scene(n: usize, n_r: usize, n_u: usize, taps: usize, m: u32, rho: f64, snr_db: f64, seed: u64) -> Scene {
    let mut r = rng(seed);
    let order = QamOrder::new(m).unwrap();
    let users: Vec<UserData> = (1..=n_u).map(|u| UserData::random(u, n, order, &mut r)).collect();
    let chan = draw_channel(&PowerDelayProfile::uniform(taps).unwrap(), n_r, n_u, rho, seed ^ 0x5eed).unwrap();
    let grid = assemble_grid(&users, &chan, snr_db, seed.wrapping_add(99)).unwrap();
    Scene { users, chan, grid }
}

/// `||Y - sum_u diag(x_u) F H_u||_F` with the DFT evaluated from scratch.
pub fn residual_norm(y: &DMatrix<Complex64>, xs: &[Vec<Complex64>], h: &DMatrix<Complex64>, taps: usize) -> f64 {
    let (n, n_r) = (y.nrows(), y.ncols());
    let mut err = y.clone();
    for (u, x) in xs.iter().enumerate() {
        for m in 0..n {
            for r in 0..n_r {
                let mut acc = Complex64::new(0.0, 0.0);
                for l in 0..taps {
                    let w = Complex64::from_polar(1.0, -2.0 * std::f64::consts::PI * (m * l) as f64 / n as f64);
                    acc += w * h[(u * taps + l, r)];
                }
                err[(m, r)] -= x[m] * acc;
            }
        }
    }
    fro(&err)
}
