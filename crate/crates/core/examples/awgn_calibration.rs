//! Measure the per-rail noise variance the channel adds and compare it with
//! `N0/2` for a few Eb/N0 settings.
//!
//! ```bash
//! cargo run --release -p pa-linksim --example awgn_calibration
//! ```

use num_complex::Complex64;
use pa_linksim::{awgn, NoiseSpec, SimRng};

fn main() -> pa_linksim::Result<()> {
    let n = 1_000_000;
    let zeros = vec![Complex64::new(0.0, 0.0); n];
    println!(
        "{:>4} {:>7} {:>12} {:>12} {:>12} {:>8}",
        "k", "Eb/N0", "sigma^2", "var(I)", "var(Q)", "err %"
    );
    for (k, ebn0) in [(1, 0.0), (2, 4.0), (4, 10.0), (6, 14.0)] {
        let spec = NoiseSpec::new(ebn0, k)?;
        let noisy = awgn(&zeros, &spec, &mut SimRng::from_seed(k as u64));
        let var_i = noisy.iter().map(|s| s.re * s.re).sum::<f64>() / n as f64;
        let var_q = noisy.iter().map(|s| s.im * s.im).sum::<f64>() / n as f64;
        let target = spec.component_variance();
        let worst = ((var_i - target).abs().max((var_q - target).abs())) / target * 100.0;
        println!("{k:>4} {ebn0:>7.1} {target:>12.6} {var_i:>12.6} {var_q:>12.6} {worst:>8.3}");
    }
    Ok(())
}
