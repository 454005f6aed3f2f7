//! The fronthaul wire format: encode a payload, inspect the header, decode,
//! and see how a damaged frame is rejected.

use fronthaul_md::codec::{self, Payload, HEADER_LEN};
use fronthaul_md::compressor::compress_su;
use fronthaul_md::recovery::reconstruct;
use fronthaul_md::signal::{assemble_grid, draw_channel, PowerDelayProfile, QamOrder, UserData};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> fronthaul_md::Result<()> {
    let (n, n_r, taps) = (1024, 32, 8);
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let user = UserData::random(1, n, QamOrder::new(64)?, &mut rng);
    let chan = draw_channel(&PowerDelayProfile::tdla_standin(taps)?, n_r, 1, 0.7, 1)?;
    let grid = assemble_grid(&[user], &chan, 20.0, 1)?;
    let payload = Payload::Decomposition(compress_su(&grid, taps, 1e-3, 10)?.payload);

    let bytes = codec::encode(&payload);
    let header = codec::decode_header(&bytes)?;
    println!("{header:?}");
    println!("frame {} bytes ({} header), measured ratio {}", bytes.len(), HEADER_LEN, codec::measured_cr(&grid, &bytes)?);

    let Payload::Decomposition(back) = codec::decode(&bytes)? else { unreachable!() };
    println!("binary32 rebuild vs received: {:.4}", reconstruct(&back).relative_distance(&grid));

    println!("truncated: {}", codec::decode(&bytes[..bytes.len() - 3]).unwrap_err());
    let mut bad = bytes.clone();
    bad[4] = 9;
    println!("wrong version: {}", codec::decode(&bad).unwrap_err());
    Ok(())
}
