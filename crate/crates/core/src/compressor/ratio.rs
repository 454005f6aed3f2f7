//! Sample-count compression ratios.

use std::fmt;

/// `original / transmitted` complex sample counts, kept as integers so
/// identities between ratios can be checked exactly.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CompressionRatio {
    pub original: u64,
    pub transmitted: u64,
}

impl CompressionRatio {
    pub fn value(self) -> f64 {
        self.original as f64 / self.transmitted as f64
    }
}

impl fmt::Display for CompressionRatio {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:.1}", self.value())
    }
}

fn ratio(original: u64, transmitted: u64) -> CompressionRatio {
    CompressionRatio { original, transmitted }
}

/// Single user: `N N_r / (N + L N_r)`.
pub fn cr_su(n: u64, n_r: u64, l: u64) -> CompressionRatio {
    ratio(n * n_r, n + l * n_r)
}

/// Multi user: `N N_r / (N_u (N + L N_r))`.
pub fn cr_mu(n: u64, n_r: u64, l: u64, n_u: u64) -> CompressionRatio {
    ratio(n * n_r, n_u * (n + l * n_r))
}

/// Ratio when only the first `k` antennas' channel rows are shipped.
pub fn cr_mu_subset(n: u64, n_r: u64, l: u64, n_u: u64, k: u64) -> CompressionRatio {
    ratio(n * n_r, n_u * (n + l * k))
}

/// Rank-`L` truncated SVD, single user: `N N_r / (L (N + N_r))`.
pub fn cr_su_pca(n: u64, n_r: u64, l: u64) -> CompressionRatio {
    ratio(n * n_r, l * (n + n_r))
}

/// Rank-`L` truncated SVD, multi user: `N N_r / (L N_u (N + N_r))`.
pub fn cr_mu_pca(n: u64, n_r: u64, l: u64, n_u: u64) -> CompressionRatio {
    ratio(n * n_r, l * n_u * (n + n_r))
}
