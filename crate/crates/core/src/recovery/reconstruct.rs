use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::compressor::altmin::frequency_factors;
use crate::compressor::CompressedPayload;
use crate::dft::PartialDft;
use crate::signal::FrequencyGrid;

/// Rebuilds `X diag(F_L) H` from a payload (`X F_L H` when `N_u = 1`).
pub fn reconstruct(p: &CompressedPayload) -> FrequencyGrid {
    let dims = p.dims;
    let dft = PartialDft::new(dims.n, dims.taps);
    let factors = frequency_factors(&dft, &p.h_hat, dims.n_u);
    let mut out = DMatrix::<Complex64>::zeros(dims.n, dims.n_r);
    for (x, b) in p.x_hat.iter().zip(&factors) {
        for r in 0..dims.n_r {
            for m in 0..dims.n {
                out[(m, r)] += x[m] * b[(m, r)];
            }
        }
    }
    FrequencyGrid::from_matrix_unchecked(out)
}
