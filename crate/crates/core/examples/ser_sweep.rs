//! A small SER sweep from a config file, printed as CSV with Wilson intervals.
//!
//! `cargo run --release --example ser_sweep -- crates/core/examples/configs/su_desk.cfg`

use fronthaul_md::sim::{run_sweep, ser_csv, wilson_interval, SimConfig};

fn main() -> fronthaul_md::Result<()> {
    let cfg = match std::env::args().nth(1) {
        Some(path) => SimConfig::from_file(path)?,
        None => SimConfig::parse("N = 256\nN_r = 16\nL = 4\nM = 16\nsnr_db = 0:12:3\ntrials = 4\npdp = tdla30\n")?,
    };
    let records = run_sweep(&cfg)?;
    print!("{}", ser_csv(&records));
    for r in &records {
        let (lo, hi) = wilson_interval(r.errors, r.symbols);
        println!("{:>14} {:>5} dB  {:<14} [{lo:.2e}, {hi:.2e}]", r.pipeline.id(), r.snr_db, r.ser_label());
    }
    Ok(())
}
