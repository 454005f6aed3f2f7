//! Two decompositions of the same grid from different starting columns agree
//! up to one complex scalar.

use fronthaul_md::compressor::{align_payloads, decompose, AltMinOptions, Init};
use fronthaul_md::signal::{assemble_grid, draw_channel, PowerDelayProfile, QamOrder, UserData};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> fronthaul_md::Result<()> {
    let (n, n_r, taps) = (128, 8, 2);
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    let user = UserData::random(1, n, QamOrder::new(4)?, &mut rng);
    let chan = draw_channel(&PowerDelayProfile::uniform(taps)?, n_r, 1, 0.0, 21)?;
    let grid = assemble_grid(&[user], &chan, f64::INFINITY, 21)?;

    let base = AltMinOptions::single_user(taps).tolerance(1e-11).max_iter(2000);
    let a = decompose(&grid, &base.clone().init(Init::Columns(vec![0])))?;
    let b = decompose(&grid, &base.init(Init::Columns(vec![5])))?;
    println!("run a: {:?} in {} iterations; run b: {:?} in {}", a.status, a.payload.iterations, b.status, b.payload.iterations);
    let r = align_payloads(&a.payload, &b.payload)?;
    println!("lambda = {:.6}, spread {:.2e}, aligned distance {:.2e}", r.lambda, r.relative_spread, r.aligned_distance);
    Ok(())
}
