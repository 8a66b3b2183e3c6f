//! How gain compression warps a 16-QAM constellation. Each rail is amplified
//! separately, so compression moves points along both axes; past saturation
//! the outer points cross the decision boundaries even without noise.
//!
//! ```bash
//! cargo run -p pa-linksim --example compressed_constellation
//! ```

use pa_linksim::harness::warped_constellation;
use pa_linksim::{Constellation, ModScheme, PaConfig, PaParams, PolyCoeffs};

fn main() -> pa_linksim::Result<()> {
    let scheme = ModScheme::qam(16)?;
    let params = PaParams::hmc413();
    let coeffs = PolyCoeffs::fit(&params)?;
    let ideal = Constellation::new(scheme);
    let outer = 3.0 / 10f64.sqrt();

    let levels = [
        ("backed off", 0.3),
        ("outer rails at 1 dB point", params.p1db_input_amplitude()),
        ("outer rails 5% past saturation", 1.05 * coeffs.x_sat()),
        ("outer rails 20% past saturation", 1.2 * coeffs.x_sat()),
    ];
    for (name, outer_input) in levels {
        let drive_db = 20.0 * (outer_input / outer).log10();
        let warped = warped_constellation(scheme, &PaConfig::new(params, drive_db))?;
        let errors = warped
            .iter()
            .enumerate()
            .filter(|(label, p)| ideal.nearest(**p) != *label)
            .count();
        println!("{name} (drive {drive_db:+.2} dB): {errors}/16 points decoded wrongly");
        // top-left corner point
        let corner = ideal
            .points()
            .iter()
            .position(|p| p.re < -0.9 && p.im > 0.9)
            .expect("16-QAM has a top-left corner");
        let (a, b) = (ideal.points()[corner], warped[corner]);
        println!(
            "  corner {:+.4}{:+.4}i -> {:+.4}{:+.4}i  (rail ratio {:.4})",
            a.re,
            a.im,
            b.re,
            b.im,
            b.re / a.re
        );
    }
    Ok(())
}
