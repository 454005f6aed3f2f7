//! Truncated-SVD baseline: rank-L scores and components, and how much energy
//! the truncation drops.

use fronthaul_md::compressor::cr_su_pca;
use fronthaul_md::pca::{pca_compress, pca_reconstruct};
use fronthaul_md::signal::{assemble_grid, draw_channel, PowerDelayProfile, QamOrder, UserData};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> fronthaul_md::Result<()> {
    let (n, n_r) = (512, 32);
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let user = UserData::random(1, n, QamOrder::new(64)?, &mut rng);
    let chan = draw_channel(&PowerDelayProfile::tdla_standin(8)?, n_r, 1, 0.7, 5)?;
    let grid = assemble_grid(&[user], &chan, 20.0, 5)?;
    for rank in [1, 4, 8, 16] {
        let p = pca_compress(&grid, rank)?;
        let err = pca_reconstruct(&p).relative_distance(&grid);
        println!("rank {rank:>2}: {} samples, ratio {}, relative error {err:.4}", p.sample_count(), cr_su_pca(n as u64, n_r as u64, rank as u64));
    }
    Ok(())
}
