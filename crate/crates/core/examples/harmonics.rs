//! Drive the unclamped cubic with a tone and compare the closed-form
//! harmonic amplitudes against a direct DFT of the sampled output.
//!
//! ```bash
//! cargo run -p pa-linksim --example harmonics
//! ```

use std::f64::consts::PI;

use pa_linksim::{Clamp, PaParams, PolyCoeffs};

// Cosine amplitude of bin `k` over exactly `periods` periods.
fn dft_amplitude(samples: &[f64], k: usize, periods: usize) -> f64 {
    let n = samples.len() as f64;
    let (re, im) = samples
        .iter()
        .enumerate()
        .fold((0.0, 0.0), |(re, im), (i, &y)| {
            let ph = 2.0 * PI * (k * periods) as f64 * i as f64 / n;
            (re + y * ph.cos(), im - y * ph.sin())
        });
    let scale = if k == 0 { 1.0 } else { 2.0 };
    scale * re.hypot(im) / n * if re < 0.0 { -1.0 } else { 1.0 }
}

fn main() -> pa_linksim::Result<()> {
    let coeffs = PolyCoeffs::fit(&PaParams::hmc413())?;
    let (periods, per_period) = (4, 128);
    println!(
        "{:>6} {:>12} {:>12} {:>12} {:>12} {:>10}",
        "A", "fund", "fund(DFT)", "third", "third(DFT)", "HD3 dB"
    );
    for a in [0.25, 0.5, 1.0, 2.0, 3.0] {
        let h = coeffs.harmonics(a)?;
        let samples: Vec<f64> = (0..periods * per_period)
            .map(|i| {
                let t = 2.0 * PI * i as f64 / per_period as f64;
                coeffs.amplify_real(a * t.cos(), Clamp::Off)
            })
            .collect();
        println!(
            "{:>6.2} {:>12.6} {:>12.6} {:>12.6} {:>12.6} {:>10.2}",
            a,
            h.fundamental,
            dft_amplitude(&samples, 1, periods),
            h.third,
            dft_amplitude(&samples, 3, periods),
            20.0 * (h.third / h.fundamental).abs().log10()
        );
    }
    Ok(())
}
