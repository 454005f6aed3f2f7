//! Monte Carlo symbol-error-rate sweeps.
//!
//! Trial `t` uses seed `base + t`. Independent ChaCha streams of that seed
//! drive the user data, the channel, and the data and pilot noise at each SNR,
//! so the pipelines always see identical received grids and never consume
//! randomness themselves. Error counts are integers, so aggregation is
//! order-independent and worker scheduling cannot change the output.

use log::warn;
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::collections::BTreeMap;
use std::io::Write;
use std::sync::atomic::{AtomicUsize, Ordering};

use super::config::{Pipeline, SimConfig};
use super::report::sig9;
use crate::codec::{decode, encode, Payload};
use crate::compressor::{decompose, AltMinOptions};
use crate::error::{invalid, Result};
use crate::pca::{pca_compress, pca_reconstruct};
use crate::recovery::{
    compute_ser, estimate_channel, mrc_combine, pilot_sequence, reconstruct, transmitted_pilots, zf_equalize,
    ChannelEstimate, ErrorCount,
};
use crate::signal::{add_awgn, draw_channel_with, signal_from_symbols, signal_term, FrequencyGrid, UserData};

const STREAM_DATA: u64 = 0;
const STREAM_CHANNEL: u64 = 1;
const STREAM_NOISE_BASE: u64 = 2;

#[derive(Debug, Clone, PartialEq)]
pub struct SerRecord {
    pub pipeline: Pipeline,
    pub snr_db: f64,
    pub symbols: u64,
    pub errors: u64,
    pub ser: f64,
    pub trials: usize,
    pub seed: u64,
}

impl SerRecord {
    /// Printable SER: `< 1/symbols` when no error was seen.
    pub fn ser_label(&self) -> String {
        if self.errors == 0 && self.symbols > 0 {
            format!("< {}", sig9(1.0 / self.symbols as f64))
        } else {
            sig9(self.ser)
        }
    }
}

pub const SER_CSV_HEADER: &str = "pipeline,snr_db,symbols,errors,ser,trials,seed";

pub fn write_ser_csv<W: Write>(out: &mut W, records: &[SerRecord]) -> std::io::Result<()> {
    writeln!(out, "{SER_CSV_HEADER}")?;
    for r in records {
        writeln!(
            out,
            "{},{},{},{},{},{},{}",
            r.pipeline,
            sig9(r.snr_db),
            r.symbols,
            r.errors,
            sig9(r.ser),
            r.trials,
            r.seed
        )?;
    }
    Ok(())
}

pub fn ser_csv(records: &[SerRecord]) -> String {
    let mut out = Vec::new();
    write_ser_csv(&mut out, records).expect("writing to memory");
    String::from_utf8(out).expect("ascii csv")
}

/// The received data and pilot blocks of one trial at every SNR.
pub struct TrialScenario {
    pub users: Vec<UserData>,
    pub pilots: Vec<UserData>,
    pub channel: crate::signal::ChannelRealization,
    /// `(data grid, pilot grid)` per SNR, in config order.
    pub grids: Vec<(FrequencyGrid, FrequencyGrid)>,
}

pub fn trial_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

pub fn build_scenario(cfg: &SimConfig, seed: u64) -> Result<TrialScenario> {
    let pdp = cfg.profile()?;
    let channel = draw_channel_with(&pdp, cfg.n_r, cfg.n_u, cfg.rho, &mut trial_rng(seed, STREAM_CHANNEL))?;
    let mut data_rng = trial_rng(seed, STREAM_DATA);
    let users: Vec<UserData> = (1..=cfg.n_u).map(|u| UserData::random(u, cfg.n, cfg.order, &mut data_rng)).collect();
    let pilots: Vec<UserData> = (1..=cfg.n_u).map(|u| pilot_sequence(u, cfg.n)).collect();

    let signal = signal_term(&users, &channel)?;
    let tx = transmitted_pilots(&pilots);
    let tx_refs: Vec<&[Complex64]> = tx.iter().map(Vec::as_slice).collect();
    let pilot_signal = signal_from_symbols(&tx_refs, &channel)?;

    let grids = cfg
        .snr_db
        .iter()
        .enumerate()
        .map(|(i, &snr)| {
            let stream = STREAM_NOISE_BASE + 2 * i as u64;
            let mut y = signal.clone();
            add_awgn(&mut y, snr, &mut trial_rng(seed, stream));
            let mut p = pilot_signal.clone();
            add_awgn(&mut p, snr, &mut trial_rng(seed, stream + 1));
            Ok((FrequencyGrid::new(y)?, FrequencyGrid::new(p)?))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(TrialScenario { users, pilots, channel, grids })
}

/// What the baseband unit sees after the fronthaul for one pipeline.
pub fn transport(cfg: &SimConfig, pipeline: Pipeline, grid: &FrequencyGrid) -> Result<FrequencyGrid> {
    let k = cfg.kept_antennas();
    match pipeline {
        Pipeline::Uncompressed => Ok(grid.clone()),
        Pipeline::Proposed | Pipeline::ProposedUnquantized => {
            let opts = AltMinOptions::multi_user(cfg.taps, cfg.n_u).tolerance(cfg.tolerance).max_iter(cfg.max_iter);
            let payload = decompose(grid, &opts)?.payload.restrict_antennas(k)?;
            if pipeline == Pipeline::ProposedUnquantized {
                return Ok(reconstruct(&payload));
            }
            match decode(&encode(&Payload::Decomposition(payload)))? {
                Payload::Decomposition(p) => Ok(reconstruct(&p)),
                Payload::Pca(_) => Err(invalid("decoded frame changed mode")),
            }
        }
        Pipeline::Pca => {
            let payload = pca_compress(grid, cfg.taps)?.restrict_antennas(k)?;
            match decode(&encode(&Payload::Pca(payload)))? {
                Payload::Pca(p) => Ok(pca_reconstruct(&p)),
                Payload::Decomposition(_) => Err(invalid("decoded frame changed mode")),
            }
        }
    }
}

fn run_pipeline(
    cfg: &SimConfig,
    pipeline: Pipeline,
    scenario: &TrialScenario,
    snr_index: usize,
) -> Result<ErrorCount> {
    let (data, pilot) = &scenario.grids[snr_index];
    let received = transport(cfg, pipeline, data)?;
    let estimate = if cfg.genie {
        ChannelEstimate::genie(&scenario.channel, cfg.n)
    } else {
        estimate_channel(&transport(cfg, pipeline, pilot)?, &scenario.pilots, cfg.taps)?
    };
    let k = received.n_antennas();
    let symbols = if cfg.n_u == 1 {
        mrc_combine(&received, &estimate, k)?
    } else {
        zf_equalize(&received, &estimate, k)?
    };
    Ok(compute_ser(&symbols, &scenario.users, cfg.order)?.pooled)
}

type TrialCounts = BTreeMap<(usize, usize), ErrorCount>;

/// Error counts keyed by `(pipeline index, snr index)` for one trial; pipelines
/// that fail are absent.
fn run_trial(cfg: &SimConfig, seed: u64) -> TrialCounts {
    let mut out = BTreeMap::new();
    let scenario = match build_scenario(cfg, seed) {
        Ok(s) => s,
        Err(e) => {
            warn!("trial seed {seed}: scenario failed: {e}");
            return out;
        }
    };
    for (p, &pipeline) in cfg.pipelines.iter().enumerate() {
        for s in 0..cfg.snr_db.len() {
            match run_pipeline(cfg, pipeline, &scenario, s) {
                Ok(c) => {
                    out.insert((p, s), c);
                }
                Err(e) => warn!("trial seed {seed}: {pipeline} at {} dB aborted: {e}", cfg.snr_db[s]),
            }
        }
    }
    out
}

/// Runs every trial at every SNR for every selected pipeline.
pub fn run_sweep(cfg: &SimConfig) -> Result<Vec<SerRecord>> {
    cfg.validate()?;
    if cfg.trials == 0 {
        return Ok(Vec::new());
    }
    let workers = std::thread::available_parallelism().map_or(1, |n| n.get()).min(cfg.trials);
    let next = AtomicUsize::new(0);
    let mut per_trial: Vec<(usize, TrialCounts)> = std::thread::scope(|s| {
        let handles: Vec<_> = (0..workers)
            .map(|_| {
                s.spawn(|| {
                    let mut done = Vec::new();
                    loop {
                        let t = next.fetch_add(1, Ordering::Relaxed);
                        if t >= cfg.trials {
                            break done;
                        }
                        done.push((t, run_trial(cfg, cfg.seed.wrapping_add(t as u64))));
                    }
                })
            })
            .collect();
        handles.into_iter().flat_map(|h| h.join().expect("trial worker panicked")).collect()
    });
    per_trial.sort_by_key(|(t, _)| *t);

    let mut records = Vec::with_capacity(cfg.pipelines.len() * cfg.snr_db.len());
    for (p, &pipeline) in cfg.pipelines.iter().enumerate() {
        for (s, &snr_db) in cfg.snr_db.iter().enumerate() {
            let mut total = ErrorCount::default();
            let mut trials = 0;
            for (_, counts) in &per_trial {
                if let Some(c) = counts.get(&(p, s)) {
                    total.merge(*c);
                    trials += 1;
                }
            }
            records.push(SerRecord {
                pipeline,
                snr_db,
                symbols: total.symbols,
                errors: total.errors,
                ser: total.ser(),
                trials,
                seed: cfg.seed,
            });
        }
    }
    Ok(records)
}

/// Two-sided 95% Wilson score interval for `errors / symbols`.
pub fn wilson_interval(errors: u64, symbols: u64) -> (f64, f64) {
    if symbols == 0 {
        return (0.0, 1.0);
    }
    let z = 1.959_963_984_540_054;
    let n = symbols as f64;
    let p = errors as f64 / n;
    let denom = 1.0 + z * z / n;
    let centre = (p + z * z / (2.0 * n)) / denom;
    let half = z * (p * (1.0 - p) / n + z * z / (4.0 * n * n)).sqrt() / denom;
    ((centre - half).max(0.0), (centre + half).min(1.0))
}

/// `(iteration, residual)` of the decomposition of trial `seed`'s data grid at
/// the first configured SNR.
pub fn trace_convergence(cfg: &SimConfig, seed: u64) -> Result<Vec<(usize, f64)>> {
    cfg.validate()?;
    let mut one = cfg.clone();
    one.snr_db.truncate(1);
    let scenario = build_scenario(&one, seed)?;
    let opts = AltMinOptions::multi_user(cfg.taps, cfg.n_u).tolerance(cfg.tolerance).max_iter(cfg.max_iter);
    Ok(decompose(&scenario.grids[0].0, &opts)?.residual_trace())
}

pub fn trace_csv(trace: &[(usize, f64)]) -> String {
    let mut out = String::from("iteration,residual\n");
    for (k, r) in trace {
        out.push_str(&format!("{k},{}\n", sig9(*r)));
    }
    out
}

/// A received grid for trial `seed` at `snr_db`, e.g. to feed the `compress` command.
pub fn generate_grid(cfg: &SimConfig, seed: u64, snr_db: f64) -> Result<FrequencyGrid> {
    let mut one = cfg.clone();
    one.snr_db = vec![snr_db];
    one.validate()?;
    Ok(build_scenario(&one, seed)?.grids.swap_remove(0).0)
}
