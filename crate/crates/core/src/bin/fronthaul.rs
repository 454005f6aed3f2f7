use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use fronthaul_md::codec::{self, Payload};
use fronthaul_md::compressor::{decompose, AltMinOptions, DEFAULT_MAX_ITER, DEFAULT_TOLERANCE};
use fronthaul_md::pca::{pca_compress, pca_reconstruct};
use fronthaul_md::recovery::reconstruct;
use fronthaul_md::sim::{generate_grid, reproduce_tables, run_sweep, tables_csv, trace_convergence, trace_csv, write_ser_csv, SimConfig};

#[derive(Parser)]
#[command(name = "fronthaul", version, about = "Fronthaul compression by blind matrix deconvolution")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the compression-ratio tables as CSV.
    Tables,
    /// Run an SER sweep and write one CSV row per (pipeline, SNR).
    Sweep {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Print the residual trace of one trial's decomposition.
    Trace {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Write the received grid of one trial to a `.fhg` file.
    Generate {
        #[arg(long)]
        config: PathBuf,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long)]
        snr: f64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Compress a `.fhg` grid into a `.fhf` frame.
    Compress {
        grid: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value_t = 12)]
        taps: usize,
        #[arg(long, default_value_t = 1)]
        users: usize,
        #[arg(long, default_value_t = DEFAULT_TOLERANCE)]
        tol: f64,
        #[arg(long, default_value_t = DEFAULT_MAX_ITER)]
        max_iter: usize,
        /// Truncated-SVD baseline of rank `taps` instead of the decomposition.
        #[arg(long)]
        pca: bool,
        /// Keep only the first K antennas' channel rows in the frame.
        #[arg(long)]
        antennas: Option<usize>,
    },
    /// Describe a `.fhf` frame; optionally rebuild its grid into a `.fhg` file.
    Decompress {
        frame: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}

fn run(command: Command) -> fronthaul_md::Result<()> {
    match command {
        Command::Tables => {
            print!("{}", tables_csv(&reproduce_tables()));
        }
        Command::Sweep { config, out } => {
            let cfg = SimConfig::from_file(&config)?;
            let records = run_sweep(&cfg)?;
            let mut file = std::io::BufWriter::new(fs::File::create(&out)?);
            write_ser_csv(&mut file, &records)?;
            file.flush()?;
            for r in &records {
                eprintln!("{:>14} {:>6} dB  ser {}", r.pipeline.id(), r.snr_db, r.ser_label());
            }
        }
        Command::Trace { config, seed, out } => {
            let cfg = SimConfig::from_file(&config)?;
            let csv = trace_csv(&trace_convergence(&cfg, seed)?);
            match out {
                Some(path) => fs::write(path, csv)?,
                None => print!("{csv}"),
            }
        }
        Command::Generate { config, seed, snr, out } => {
            let cfg = SimConfig::from_file(&config)?;
            codec::write_grid(&out, &generate_grid(&cfg, seed, snr)?)?;
        }
        Command::Compress { grid, out, taps, users, tol, max_iter, pca, antennas } => {
            let grid = codec::read_grid(&grid)?;
            let payload = if pca {
                let mut p = pca_compress(&grid, taps)?;
                if let Some(k) = antennas {
                    p = p.restrict_antennas(k)?;
                }
                Payload::Pca(p)
            } else {
                let opts = AltMinOptions::multi_user(taps, users).tolerance(tol).max_iter(max_iter);
                let d = decompose(&grid, &opts)?;
                eprintln!("{:?} after {} iterations, residual {:.3e}", d.status, d.payload.iterations, d.payload.residual);
                let mut p = d.payload;
                if let Some(k) = antennas {
                    p = p.restrict_antennas(k)?;
                }
                Payload::Decomposition(p)
            };
            let bytes = codec::encode(&payload);
            fs::write(&out, &bytes)?;
            let cr = codec::measured_cr(&grid, &bytes)?;
            println!("wrote {} bytes, compression ratio {cr}", bytes.len());
        }
        Command::Decompress { frame, out } => {
            let bytes = fs::read(&frame)?;
            let header = codec::decode_header(&bytes)?;
            let payload = codec::decode(&bytes)?;
            println!(
                "mode={:?} n={} n_r={} n_u={} taps={} iterations={} residual={:.6e}",
                header.mode, header.n, header.n_r, header.n_u, header.taps, header.iterations, header.residual
            );
            if let Some(path) = out {
                let grid = match &payload {
                    Payload::Decomposition(p) => reconstruct(p),
                    Payload::Pca(p) => pca_reconstruct(p),
                };
                codec::write_grid(path, &grid)?;
            }
        }
    }
    Ok(())
}
