//! Synthetic uplink scenarios: QAM user data, multipath channels and the
//! frequency-domain received matrix.

pub mod channel;
pub mod grid;
pub mod qam;

pub use channel::{draw_channel, draw_channel_with, ChannelRealization, PowerDelayProfile};
pub use grid::{add_awgn, assemble_grid, signal_from_symbols, signal_term, FrequencyGrid};
pub use qam::{qam_demodulate, qam_modulate, QamOrder, UserData};
