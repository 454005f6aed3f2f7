//! Baseband-unit side: rebuild the grid, estimate channels, equalize and count errors.

pub mod equalize;
pub mod estimate;
pub mod reconstruct;
pub mod ser;

pub use equalize::{mrc_combine, zf_equalize, EqualizedSymbols};
pub use estimate::{estimate_channel, pilot_sequence, transmitted_pilots, ChannelEstimate, EstimateSource};
pub use reconstruct::reconstruct;
pub use ser::{compute_ser, ErrorCount, SerCount};
