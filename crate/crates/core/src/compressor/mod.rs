//! Matrix-decomposition compression at the radio head.

pub mod align;
pub mod altmin;
pub mod payload;
pub mod ratio;
pub mod solve;

pub use align::{align_payloads, AlignmentReport};
pub use altmin::{
    compress_mu, compress_su, decompose, AltMinOptions, Convergence, Decomposition, Init, IterationRecord,
    DEFAULT_MAX_ITER, DEFAULT_TOLERANCE,
};
pub use payload::{CompressedPayload, PayloadDims};
pub use ratio::{cr_mu, cr_mu_pca, cr_mu_subset, cr_su, cr_su_pca, CompressionRatio};
pub use solve::fast_h_update;
