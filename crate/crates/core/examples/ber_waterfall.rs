//! Linear-chain BER waterfalls for MPSK and MQAM next to the closed-form
//! references.
//!
//! ```bash
//! cargo run --release -p pa-linksim --example ber_waterfall
//! ```

use pa_linksim::cli::parse_grid;
use pa_linksim::{run_sweep, ModScheme, SweepConfig};

fn main() -> pa_linksim::Result<()> {
    let snr = parse_grid("0:2:12").expect("literal grid");
    let schemes = [
        ModScheme::psk(2)?,
        ModScheme::psk(4)?,
        ModScheme::psk(8)?,
        ModScheme::qam(16)?,
        ModScheme::qam(64)?,
    ];
    for scheme in schemes {
        let mut cfg = SweepConfig::linear(scheme, snr.clone(), 7);
        cfg.stopping.min_bit_errors = 200;
        cfg.stopping.max_bits = 2_000_000;
        println!("{scheme}");
        println!(
            "  {:>6} {:>10} {:>8} {:>11} {:>11}",
            "Eb/N0", "bits", "errors", "BER", "theory"
        );
        for r in run_sweep(&cfg)? {
            println!(
                "  {:>6.1} {:>10} {:>8} {:>11.3e} {:>11.3e}",
                r.snr_db,
                r.bits_simulated,
                r.bit_errors,
                r.ber,
                r.theory_ber.unwrap_or(f64::NAN)
            );
        }
    }
    Ok(())
}
