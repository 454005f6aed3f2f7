//! Scenario configuration, loaded from `key = value` text.

use std::fmt;
use std::path::Path;
use std::str::FromStr;

use crate::error::{invalid, Error, Result};
use crate::signal::{PowerDelayProfile, QamOrder};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Pipeline {
    /// Matrix decomposition, shipped through the binary32 frame.
    Proposed,
    /// Matrix decomposition at full precision, skipping the frame.
    ProposedUnquantized,
    Pca,
    Uncompressed,
}

impl Pipeline {
    pub fn id(self) -> &'static str {
        match self {
            Pipeline::Proposed => "proposed",
            Pipeline::ProposedUnquantized => "proposed-f64",
            Pipeline::Pca => "pca",
            Pipeline::Uncompressed => "uncompressed",
        }
    }
}

impl fmt::Display for Pipeline {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

impl FromStr for Pipeline {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "proposed" => Ok(Pipeline::Proposed),
            "proposed-f64" => Ok(Pipeline::ProposedUnquantized),
            "pca" => Ok(Pipeline::Pca),
            "uncompressed" => Ok(Pipeline::Uncompressed),
            other => Err(invalid(format!("unknown pipeline {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimConfig {
    pub n: usize,
    pub n_r: usize,
    pub n_u: usize,
    pub taps: usize,
    pub order: QamOrder,
    pub snr_db: Vec<f64>,
    pub tolerance: f64,
    pub max_iter: usize,
    pub rho: f64,
    /// Built-in profile name or path to a profile file.
    pub pdp: String,
    /// Antennas kept after compression; `None` keeps all.
    pub antenna_subset: Option<usize>,
    pub pipelines: Vec<Pipeline>,
    pub trials: usize,
    pub seed: u64,
    pub genie: bool,
}

impl Default for SimConfig {
    /// Full-scale single-user scenario: 64-QAM, 4096 subcarriers, 64
    /// antennas, 12 taps, correlation 0.7, 0 to 30 dB in 2 dB steps.
    fn default() -> Self {
        SimConfig {
            n: 4096,
            n_r: 64,
            n_u: 1,
            taps: 12,
            order: QamOrder::Qam64,
            snr_db: (0..=15).map(|i| 2.0 * i as f64).collect(),
            tolerance: crate::compressor::DEFAULT_TOLERANCE,
            max_iter: crate::compressor::DEFAULT_MAX_ITER,
            rho: 0.7,
            pdp: "tdla30".into(),
            antenna_subset: None,
            pipelines: vec![Pipeline::Proposed, Pipeline::Pca, Pipeline::Uncompressed],
            trials: 1,
            seed: 1,
            genie: false,
        }
    }
}

fn parse_num<T: FromStr>(key: &str, value: &str) -> Result<T> {
    value.parse().map_err(|_| invalid(format!("{key}: cannot parse {value:?}")))
}

fn parse_snr(value: &str) -> Result<f64> {
    match value {
        "inf" | "+inf" | "infinity" => Ok(f64::INFINITY),
        v => parse_num::<f64>("snr_db", v),
    }
}

/// Comma-separated values; `start:stop:step` expands to an inclusive range.
fn parse_snr_list(value: &str) -> Result<Vec<f64>> {
    let mut out = Vec::new();
    for item in value.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        let parts: Vec<&str> = item.split(':').collect();
        match parts.as_slice() {
            [single] => out.push(parse_snr(single)?),
            [start, stop, step] => {
                let (start, stop, step) = (parse_snr(start)?, parse_snr(stop)?, parse_snr(step)?);
                if !(step > 0.0) || !start.is_finite() || !stop.is_finite() {
                    return Err(invalid(format!("snr_db: bad range {item:?}")));
                }
                let count = ((stop - start) / step + 1e-9).floor() as i64;
                out.extend((0..=count).map(|i| start + i as f64 * step));
            }
            _ => return Err(invalid(format!("snr_db: bad item {item:?}"))),
        }
    }
    Ok(out)
}

impl SimConfig {
    pub fn from_file(path: impl AsRef<Path>) -> Result<Self> {
        Self::parse(&std::fs::read_to_string(path)?)
    }

    /// Parses `key = value` lines over the defaults. `#` starts a comment;
    /// unknown keys are rejected. The result is validated.
    pub fn parse(text: &str) -> Result<Self> {
        let mut cfg = SimConfig::default();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| invalid(format!("line {}: expected key = value", lineno + 1)))?;
            cfg.set(key.trim(), value.trim())?;
        }
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        match key {
            "N" => self.n = parse_num(key, value)?,
            "N_r" => self.n_r = parse_num(key, value)?,
            "N_u" => self.n_u = parse_num(key, value)?,
            "L" => self.taps = parse_num(key, value)?,
            "M" => self.order = QamOrder::new(parse_num(key, value)?)?,
            "snr_db" => self.snr_db = parse_snr_list(value)?,
            "epsilon" => self.tolerance = parse_num(key, value)?,
            "max_iter" => self.max_iter = parse_num(key, value)?,
            "rho" => self.rho = parse_num(key, value)?,
            "pdp" => self.pdp = value.to_string(),
            "antenna_subset" => {
                self.antenna_subset = match value {
                    "all" | "none" => None,
                    v => Some(parse_num(key, v)?),
                }
            }
            "pipelines" => {
                self.pipelines = value
                    .split(',')
                    .map(str::trim)
                    .filter(|s| !s.is_empty())
                    .map(str::parse)
                    .collect::<Result<Vec<_>>>()?
            }
            "trials" => self.trials = parse_num(key, value)?,
            "seed" => self.seed = parse_num(key, value)?,
            "genie" => self.genie = parse_num(key, value)?,
            other => return Err(invalid(format!("unknown configuration key {other:?}"))),
        }
        Ok(())
    }

    /// Antennas kept by the compressed pipelines.
    pub fn kept_antennas(&self) -> usize {
        self.antenna_subset.unwrap_or(self.n_r)
    }

    pub fn profile(&self) -> Result<PowerDelayProfile> {
        PowerDelayProfile::resolve(&self.pdp, self.taps)
    }

    /// Checks every module precondition a sweep would otherwise hit mid-run.
    pub fn validate(&self) -> Result<()> {
        let (n, n_r, n_u, l) = (self.n, self.n_r, self.n_u, self.taps);
        if n == 0 || n_r == 0 || n_u == 0 || l == 0 {
            return Err(invalid("N, N_r, N_u and L must be positive"));
        }
        if n_u == 1 && l >= n.min(n_r) {
            return Err(invalid(format!("single-user compression needs L < min(N, N_r); L = {l}")));
        }
        if n_u > 1 {
            if l * n_u >= n {
                return Err(invalid(format!("multi-user compression needs L N_u < N; {l} * {n_u} >= {n}")));
            }
            if n_u > n_r {
                return Err(invalid("multi-user compression needs N_u <= N_r"));
            }
        }
        let k = self.kept_antennas();
        if k < n_u || k > n_r {
            return Err(invalid(format!("antenna subset {k} outside {n_u}..={n_r}")));
        }
        if self.snr_db.is_empty() || self.snr_db.iter().any(|s| s.is_nan() || *s == f64::NEG_INFINITY) {
            return Err(invalid("snr_db must list at least one finite or +inf value"));
        }
        if !(self.tolerance > 0.0) {
            return Err(invalid("epsilon must be positive"));
        }
        if !(0.0..1.0).contains(&self.rho) {
            return Err(invalid("rho must lie in [0, 1)"));
        }
        if self.pipelines.is_empty() {
            return Err(invalid("no pipelines selected"));
        }
        if self.pipelines.contains(&Pipeline::Pca) && l > n.min(n_r) {
            return Err(invalid("PCA rank L exceeds min(N, N_r)"));
        }
        self.profile()?;
        Ok(())
    }
}
