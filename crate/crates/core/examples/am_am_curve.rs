//! Print the AM/AM characteristic of the HMC413 fit in dB and in volts.
//!
//! ```bash
//! cargo run -p pa-linksim --example am_am_curve
//! ```

use pa_linksim::{PaParams, PolyCoeffs};

fn main() -> pa_linksim::Result<()> {
    let coeffs = PolyCoeffs::fit(&PaParams::hmc413())?;
    let curve = coeffs.am_am_curve(-20.0, 15.0, 36)?;

    println!(
        "{:>8} {:>9} {:>8} {:>9} {:>9}",
        "pin_dB", "pout_dB", "gain_dB", "vin", "vout"
    );
    for p in &curve {
        let marker = if (p.gain_db - 22.0).abs() < 0.05 {
            "  <- ~1 dB compressed"
        } else {
            ""
        };
        println!(
            "{:>8.2} {:>9.3} {:>8.3} {:>9.4} {:>9.4}{marker}",
            p.pin_db, p.pout_db, p.gain_db, p.vin, p.vout
        );
    }
    Ok(())
}
