//! Closed-form compression ratios for both methods, with and without antenna
//! subsetting.

use fronthaul_md::compressor::{cr_mu_subset, cr_su};
use fronthaul_md::sim::{reproduce_tables, tables_csv};

fn main() {
    print!("{}", tables_csv(&reproduce_tables()));
    println!("\nSU ratio as N grows (N_r=64, L=12):");
    for e in [10, 12, 14, 16, 20] {
        println!("  N=2^{e:<2}  {:.3}", cr_su(1 << e, 64, 12).value());
    }
    println!("\nMU ratio when only K of 64 antennas' channels are sent (N=4096, L=12, N_u=4):");
    for k in [64, 48, 32, 16] {
        println!("  K={k:<2}  {}", cr_mu_subset(4096, 64, 12, 4, k));
    }
}
