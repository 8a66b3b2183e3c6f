//! Link-level simulation of MPSK/MQAM through a gain-compressing RF power
//! amplifier.
//!
//! The crate is organized along the signal chain:
//!
//! - [`amplifier`]: cubic PA model fitted from gain and P1dB, AM/AM and
//!   harmonic characterization.
//! - [`modem`]: Gray-coded PSK/QAM mapping and minimum-distance demapping.
//! - [`channel`]: calibrated complex AWGN and the seeded random streams.
//! - [`harness`]: Monte Carlo BER sweeps with and without the PA, plus
//!   closed-form BER references.
//! - [`cli`]: the `pa-linksim` command and its CSV/manifest outputs.
//!
//! Runnable walk-throughs for each capability live in `examples/`.

pub mod amplifier;
pub mod channel;
pub mod cli;
pub mod error;
pub mod harness;
pub mod modem;

pub use amplifier::{Clamp, HarmonicAmps, PaParams, PolyCoeffs};
pub use channel::{awgn, NoiseSpec, SimRng};
pub use error::{Error, Result};
pub use harness::{
    run_point, run_sweep, scatter_capture, theoretical_ber, BerRecord, ChainMode, PaConfig,
    StoppingRule, SweepConfig,
};
pub use modem::{count_bit_errors, Constellation, Family, ModScheme};
