//! Multi-user compression: several users share the grid and are factored jointly.

use fronthaul_md::compressor::{compress_mu, cr_mu};
use fronthaul_md::recovery::reconstruct;
use fronthaul_md::signal::{assemble_grid, draw_channel, PowerDelayProfile, QamOrder, UserData};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> fronthaul_md::Result<()> {
    let (n, n_r, n_u, taps) = (256, 16, 3, 3);
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let users: Vec<UserData> = (1..=n_u).map(|u| UserData::random(u, n, QamOrder::new(4).unwrap(), &mut rng)).collect();
    let chan = draw_channel(&PowerDelayProfile::uniform(taps)?, n_r, n_u, 0.3, 11)?;
    let grid = assemble_grid(&users, &chan, 25.0, 11)?;

    let d = compress_mu(&grid, taps, n_u, 1e-3, 50)?;
    println!("{:?} after {} iterations, residual {:.4}", d.status, d.payload.iterations, d.payload.residual);
    println!("rebuild vs received: {:.4}", reconstruct(&d.payload).relative_distance(&grid));
    println!("ratio {}", cr_mu(n as u64, n_r as u64, taps as u64, n_u as u64));
    Ok(())
}
