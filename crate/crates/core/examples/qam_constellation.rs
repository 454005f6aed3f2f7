//! Gray-mapped QAM: bits to symbols, nearest-point slicing, and SER under noise.

use fronthaul_md::signal::{qam_demodulate, qam_modulate, QamOrder};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

fn main() -> fronthaul_md::Result<()> {
    for m in [4, 16, 64, 256] {
        let order = QamOrder::new(m)?;
        let energy: f64 = order.constellation().iter().map(|s| s.norm_sqr()).sum::<f64>() / order.size() as f64;
        println!("{m:>4}-QAM: {} bits/symbol, mean energy {energy:.6}, d_min {:.4}", order.bits_per_symbol(), order.min_distance());
    }

    let order = QamOrder::new(16)?;
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let bits: Vec<bool> = (0..4 * 10_000).map(|_| rng.random()).collect();
    let data = qam_modulate(&bits, order)?;
    for snr_db in [6.0, 10.0, 14.0] {
        let sigma = (0.5 / 10f64.powf(snr_db / 10.0)).sqrt();
        let noise = Normal::new(0.0, sigma).unwrap();
        let rx: Vec<Complex64> =
            data.symbols.iter().map(|s| s + Complex64::new(noise.sample(&mut rng), noise.sample(&mut rng))).collect();
        let errors = qam_demodulate(&rx, order).iter().zip(&data.indices).filter(|(a, b)| a != b).count();
        println!("16-QAM at {snr_db:>4} dB: SER {:.4}", errors as f64 / rx.len() as f64);
    }
    Ok(())
}
