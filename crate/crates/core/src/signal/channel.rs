//! Tapped-delay-line channels with exponential antenna correlation.

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use std::path::Path;

use crate::dft::PartialDft;
use crate::error::{invalid, Result};

/// Per-tap average powers of a multipath channel, normalized to unit sum.
#[derive(Debug, Clone, PartialEq)]
pub struct PowerDelayProfile {
    tap_powers: Vec<f64>,
    label: String,
}

impl PowerDelayProfile {
    pub fn new(label: impl Into<String>, powers: Vec<f64>) -> Result<Self> {
        if powers.is_empty() {
            return Err(invalid("power-delay profile needs at least one tap"));
        }
        if powers.iter().any(|p| !p.is_finite() || *p < 0.0) {
            return Err(invalid("tap powers must be finite and nonnegative"));
        }
        let total: f64 = powers.iter().sum();
        if total <= 0.0 {
            return Err(invalid("tap powers sum to zero"));
        }
        Ok(PowerDelayProfile {
            tap_powers: powers.into_iter().map(|p| p / total).collect(),
            label: label.into(),
        })
    }

    pub fn uniform(taps: usize) -> Result<Self> {
        Self::new("uniform", vec![1.0; taps])
    }

    /// Exponentially decaying profile losing `decay_db` per tap.
    pub fn exponential(taps: usize, decay_db: f64) -> Result<Self> {
        let powers = (0..taps).map(|l| 10f64.powf(-decay_db * l as f64 / 10.0)).collect();
        Self::new(format!("exp{decay_db}db"), powers)
    }

    /// Stand-in for the TDL-A family: 3 dB per-tap exponential decay.
    pub fn tdla_standin(taps: usize) -> Result<Self> {
        let mut pdp = Self::exponential(taps, 3.0)?;
        pdp.label = "tdla30".into();
        Ok(pdp)
    }

    /// Resolves a built-in name (`uniform`, `tdla30`, `exp<dB>`) or a profile file path.
    pub fn resolve(spec: &str, taps: usize) -> Result<Self> {
        match spec {
            "uniform" => Self::uniform(taps),
            "tdla30" => Self::tdla_standin(taps),
            s if s.starts_with("exp") && s.ends_with("db") => {
                let db: f64 = s[3..s.len() - 2]
                    .parse()
                    .map_err(|_| invalid(format!("bad exponential profile name {s:?}")))?;
                Self::exponential(taps, db)
            }
            path => {
                let pdp = Self::from_file(path)?;
                if pdp.taps() != taps {
                    return Err(invalid(format!(
                        "profile {path} has {} taps but L = {taps}",
                        pdp.taps()
                    )));
                }
                Ok(pdp)
            }
        }
    }

    pub fn from_file(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path)?;
        let default_label = path
            .file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_else(|| "custom".into());
        Self::parse(&text, &default_label)
    }

    /// Parses `key = value` lines: `L` (tap count), `powers` (linear, comma
    /// or whitespace separated), and an optional `label`. `#` starts a comment.
    pub fn parse(text: &str, default_label: &str) -> Result<Self> {
        let mut taps = None;
        let mut powers = None;
        let mut label = default_label.to_string();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| invalid(format!("profile line {}: expected key = value", lineno + 1)))?;
            let value = value.trim();
            match key.trim() {
                "L" => {
                    taps = Some(value.parse::<usize>().map_err(|_| {
                        invalid(format!("profile line {}: bad tap count {value:?}", lineno + 1))
                    })?)
                }
                "powers" => {
                    let parsed = value
                        .split(|c: char| c == ',' || c.is_whitespace())
                        .filter(|s| !s.is_empty())
                        .map(|s| s.parse::<f64>())
                        .collect::<std::result::Result<Vec<_>, _>>()
                        .map_err(|_| invalid(format!("profile line {}: bad power list", lineno + 1)))?;
                    powers = Some(parsed);
                }
                "label" => label = value.to_string(),
                other => return Err(invalid(format!("unknown profile key {other:?}"))),
            }
        }
        let taps = taps.ok_or_else(|| invalid("profile is missing L"))?;
        let powers = powers.ok_or_else(|| invalid("profile is missing powers"))?;
        if powers.len() != taps {
            return Err(invalid(format!("profile declares L = {taps} but lists {} powers", powers.len())));
        }
        Self::new(label, powers)
    }

    pub fn taps(&self) -> usize {
        self.tap_powers.len()
    }

    pub fn tap_powers(&self) -> &[f64] {
        &self.tap_powers
    }

    pub fn label(&self) -> &str {
        &self.label
    }
}

/// Time-domain taps for every user: `taps[u]` is `L x N_r`.
#[derive(Debug, Clone, PartialEq)]
pub struct ChannelRealization {
    pub taps: Vec<DMatrix<Complex64>>,
    pub correlation_rho: f64,
    pub profile: PowerDelayProfile,
}

impl ChannelRealization {
    pub fn n_users(&self) -> usize {
        self.taps.len()
    }

    pub fn n_taps(&self) -> usize {
        self.profile.taps()
    }

    pub fn n_antennas(&self) -> usize {
        self.taps.first().map_or(0, |t| t.ncols())
    }

    /// `F_L H_t(u)` for each user.
    pub fn frequency_response(&self, n: usize) -> Vec<DMatrix<Complex64>> {
        let dft = PartialDft::new(n, self.n_taps());
        self.taps.iter().map(|h| dft.apply(h)).collect()
    }
}

/// Symmetric square root of the exponential correlation matrix `R_ij = rho^|i-j|`.
pub fn correlation_sqrt(n_r: usize, rho: f64) -> DMatrix<f64> {
    let r = DMatrix::from_fn(n_r, n_r, |i, j| rho.powi(i.abs_diff(j) as i32));
    let eig = SymmetricEigen::new(r);
    let sqrt_vals = eig.eigenvalues.map(|v| v.max(0.0).sqrt());
    &eig.eigenvectors * DMatrix::from_diagonal(&sqrt_vals) * eig.eigenvectors.transpose()
}

pub(crate) fn complex_gaussian<R: Rng + ?Sized>(rng: &mut R, variance: f64) -> Complex64 {
    let s = (variance / 2.0).sqrt();
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Complex64::new(re * s, im * s)
}

pub fn draw_channel(
    pdp: &PowerDelayProfile,
    n_r: usize,
    n_u: usize,
    rho: f64,
    seed: u64,
) -> Result<ChannelRealization> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    draw_channel_with(pdp, n_r, n_u, rho, &mut rng)
}

pub fn draw_channel_with<R: Rng + ?Sized>(
    pdp: &PowerDelayProfile,
    n_r: usize,
    n_u: usize,
    rho: f64,
    rng: &mut R,
) -> Result<ChannelRealization> {
    if !(0.0..1.0).contains(&rho) {
        return Err(invalid(format!("correlation coefficient {rho} outside [0, 1)")));
    }
    if n_r == 0 || n_u == 0 {
        return Err(invalid("channel needs at least one antenna and one user"));
    }
    let root = correlation_sqrt(n_r, rho).map(|v| Complex64::new(v, 0.0));
    let taps = (0..n_u)
        .map(|_| {
            let mut g = DMatrix::from_fn(pdp.taps(), n_r, |_, _| complex_gaussian(rng, 1.0));
            for (l, p) in pdp.tap_powers().iter().enumerate() {
                let amp = p.sqrt();
                g.row_mut(l).iter_mut().for_each(|v| *v *= amp);
            }
            g * &root
        })
        .collect();
    Ok(ChannelRealization { taps, correlation_rho: rho, profile: pdp.clone() })
}
