//! Single-user compression: factor a received grid into symbols and channel
//! taps, then rebuild it.

use fronthaul_md::compressor::{compress_su, cr_su};
use fronthaul_md::recovery::reconstruct;
use fronthaul_md::signal::{assemble_grid, draw_channel, PowerDelayProfile, QamOrder, UserData};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> fronthaul_md::Result<()> {
    let (n, n_r, taps) = (256, 16, 4);
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let user = UserData::random(1, n, QamOrder::new(16)?, &mut rng);
    let chan = draw_channel(&PowerDelayProfile::uniform(taps)?, n_r, 1, 0.0, 3)?;
    let clean = assemble_grid(std::slice::from_ref(&user), &chan, f64::INFINITY, 3)?;

    let d = compress_su(&clean, taps, 1e-8, 300)?;
    println!("noiseless: {:?} after {} iterations", d.status, d.payload.iterations);
    for (k, r) in d.residual_trace().iter().step_by(25) {
        println!("  iteration {k:>3}: residual {r:.3e}");
    }
    println!("rebuild error {:.3e}", reconstruct(&d.payload).relative_distance(&clean));

    let noisy = assemble_grid(std::slice::from_ref(&user), &chan, 10.0, 3)?;
    let d = compress_su(&noisy, taps, 1e-3, 10)?;
    println!("10 dB, 10 iterations: residual {:.3}", d.payload.residual);
    println!("{} samples sent instead of {}, ratio {}", d.payload.sample_count(), n * n_r, cr_su(n as u64, n_r as u64, taps as u64));
    Ok(())
}
