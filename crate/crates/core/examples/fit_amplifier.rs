//! Fit the cubic PA model from datasheet figures and compare the implied
//! saturation level with the datasheet's Psat.
//!
//! ```bash
//! cargo run -p pa-linksim --example fit_amplifier -- 23 27 29.5
//! ```

use pa_linksim::amplifier::amplitude_to_db;
use pa_linksim::{Clamp, PaParams, PolyCoeffs};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let args: Vec<f64> = std::env::args()
        .skip(1)
        .map(|a| a.parse())
        .collect::<Result<_, _>>()?;
    let params = match args.as_slice() {
        [] => PaParams::hmc413(),
        [g, p1, psat] => PaParams::new(*g, *p1, *psat)?,
        _ => return Err("expected: <gain_db> <p1db_db> <psat_db>".into()),
    };
    let coeffs = PolyCoeffs::fit(&params)?;

    println!(
        "gain {} dB, P1dB {} dB, Psat {} dB",
        params.gain_db, params.p1db_db, params.psat_db
    );
    println!("  a1    = {:.6}", coeffs.a1());
    println!("  a3    = {:.6}", coeffs.a3());
    println!(
        "  x_sat = {:.6} V  ({:.3} dB)",
        coeffs.x_sat(),
        amplitude_to_db(coeffs.x_sat())
    );
    println!(
        "  y_sat = {:.6} V  ({:.3} dB)",
        coeffs.y_sat(),
        coeffs.psat_db()
    );

    let x1 = params.p1db_input_amplitude();
    let y1 = coeffs.amplify_real(x1, Clamp::On);
    println!(
        "\n1 dB point: input {:.5} V -> output {:.5} V = {:.9} dB (linear would be {:.3} dB)",
        x1,
        y1,
        amplitude_to_db(y1),
        amplitude_to_db(coeffs.a1() * x1)
    );
    println!(
        "model Psat {:.3} dB vs datasheet {:.3} dB: off by {:.3} dB",
        coeffs.psat_db(),
        params.psat_db,
        coeffs.psat_db() - params.psat_db
    );
    Ok(())
}
