//! Baseband side: pilot-based channel estimation from a compressed pilot block,
//! MRC detection of the data block, and symbol error counting.

use fronthaul_md::compressor::compress_su;
use fronthaul_md::recovery::{compute_ser, estimate_channel, mrc_combine, pilot_sequence, reconstruct, transmitted_pilots, ChannelEstimate};
use fronthaul_md::signal::{add_awgn, draw_channel, signal_from_symbols, signal_term, FrequencyGrid, PowerDelayProfile, QamOrder, UserData};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> fronthaul_md::Result<()> {
    let (n, n_r, taps, order) = (512, 32, 6, QamOrder::new(16)?);
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let chan = draw_channel(&PowerDelayProfile::tdla_standin(taps)?, n_r, 1, 0.5, 9)?;
    let users = vec![UserData::random(1, n, order, &mut rng)];
    let pilots = vec![pilot_sequence(1, n)];

    for snr_db in [4.0, 8.0, 12.0] {
        let mut y = signal_term(&users, &chan)?;
        add_awgn(&mut y, snr_db, &mut rng);
        let tx = transmitted_pilots(&pilots);
        let refs: Vec<&[num_complex::Complex64]> = tx.iter().map(Vec::as_slice).collect();
        let mut p = signal_from_symbols(&refs, &chan)?;
        add_awgn(&mut p, snr_db, &mut rng);

        let data = reconstruct(&compress_su(&FrequencyGrid::new(y)?, taps, 1e-3, 10)?.payload);
        let pilot = reconstruct(&compress_su(&FrequencyGrid::new(p)?, taps, 1e-3, 10)?.payload);
        let est = estimate_channel(&pilot, &pilots, taps)?;
        let pilot_ser = compute_ser(&mrc_combine(&data, &est, n_r)?, &users, order)?.pooled.ser();
        let genie_ser = compute_ser(&mrc_combine(&data, &ChannelEstimate::genie(&chan, n), n_r)?, &users, order)?.pooled.ser();
        println!("{snr_db:>4} dB: SER {pilot_ser:.4} with pilot estimate, {genie_ser:.4} with true channel");
    }
    Ok(())
}
