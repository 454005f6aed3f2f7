//! Resolving the scalar ambiguity between two single-user decompositions.
//!
//! Any rescaling `x -> x / lambda`, `H -> lambda H` yields the same product,
//! and for a single user nothing else does. Two payloads describing the same
//! grid therefore differ by one complex scalar across every subcarrier.

use num_complex::Complex64;

use super::payload::CompressedPayload;
use crate::error::{degenerate, invalid, Result};

/// Reference entries smaller than this are left out of the ratio estimate.
pub const REFERENCE_FLOOR: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AlignmentReport {
    /// Scalar with `x_b ~ lambda * x_a`.
    pub lambda: Complex64,
    /// Median absolute deviation of the per-subcarrier ratios, over `|lambda|`.
    pub relative_spread: f64,
    /// `||lambda x_a - x_b|| / ||x_b||`.
    pub aligned_distance: f64,
}

fn median(values: &mut [f64]) -> f64 {
    values.sort_by(f64::total_cmp);
    let n = values.len();
    if n % 2 == 1 {
        values[n / 2]
    } else {
        0.5 * (values[n / 2 - 1] + values[n / 2])
    }
}

pub fn align_payloads(a: &CompressedPayload, b: &CompressedPayload) -> Result<AlignmentReport> {
    if a.dims != b.dims {
        return Err(invalid("payload dimensions differ"));
    }
    if a.dims.n_u != 1 {
        return Err(invalid("scalar alignment is only defined for single-user payloads"));
    }
    let (xa, xb) = (&a.x_hat[0], &b.x_hat[0]);
    let ratios: Vec<Complex64> = xa
        .iter()
        .zip(xb)
        .filter(|(ra, _)| ra.norm() >= REFERENCE_FLOOR)
        .map(|(ra, rb)| rb / ra)
        .collect();
    if ratios.is_empty() {
        return Err(degenerate("every reference entry is below the alignment floor"));
    }

    // Coordinate-wise median of the complex ratios.
    let lambda = Complex64::new(
        median(&mut ratios.iter().map(|r| r.re).collect::<Vec<_>>()),
        median(&mut ratios.iter().map(|r| r.im).collect::<Vec<_>>()),
    );
    let mad = median(&mut ratios.iter().map(|r| (r - lambda).norm()).collect::<Vec<_>>());
    let scale = lambda.norm();
    let relative_spread = if scale > 0.0 { mad / scale } else { mad };

    let diff: f64 = xa.iter().zip(xb).map(|(ra, rb)| (lambda * ra - rb).norm_sqr()).sum();
    let reference: f64 = xb.iter().map(|v| v.norm_sqr()).sum();
    let aligned_distance = if reference > 0.0 { (diff / reference).sqrt() } else { diff.sqrt() };

    Ok(AlignmentReport { lambda, relative_spread, aligned_distance })
}
