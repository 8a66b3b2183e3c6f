//! BER of 16-QAM with the PA in the chain while the drive rises with the
//! SNR axis. The noise floor is fixed, so early points improve with the extra
//! signal energy and late points degrade once the outer symbols compress.
//!
//! Run with:
//!
//! ```bash
//! cargo run --release -p pa-linksim --example pa_drive_sweep
//! ```

use pa_linksim::cli::parse_grid;
use pa_linksim::harness::{DEFAULT_DRIVE_DB, DEFAULT_DRIVE_SWEEP_GRID};
use pa_linksim::{run_sweep, ChainMode, ModScheme, PaConfig, PaParams, StoppingRule, SweepConfig};

fn main() -> pa_linksim::Result<()> {
    let (start, step, stop) = DEFAULT_DRIVE_SWEEP_GRID;
    let snr = parse_grid(&format!("{start}:{step}:{stop}")).expect("default grid parses");
    let scheme = ModScheme::qam(16)?;
    let pa = PaConfig::new(PaParams::hmc413(), DEFAULT_DRIVE_DB);

    let linear = run_sweep(&SweepConfig::linear(scheme, snr.clone(), 0))?;
    let with_pa = run_sweep(&SweepConfig {
        scheme,
        snr_points_db: snr,
        stopping: StoppingRule::default(),
        master_seed: 0,
        pa: Some(pa),
        mode: ChainMode::PaDriveSweep,
    })?;

    println!("{} drive sweep, base drive {DEFAULT_DRIVE_DB} dB", scheme);
    println!(
        "{:>7} {:>9} {:>12} {:>12} {:>12}",
        "Eb/N0", "drive_dB", "BER linear", "BER with PA", "theory"
    );
    for (lin, pa_rec) in linear.iter().zip(&with_pa) {
        println!(
            "{:>7.1} {:>9.1} {:>12.3e} {:>12.3e} {:>12.3e}",
            lin.snr_db,
            DEFAULT_DRIVE_DB + (lin.snr_db - start),
            lin.ber,
            pa_rec.ber,
            lin.theory_ber.unwrap_or(f64::NAN)
        );
    }

    let best = with_pa
        .iter()
        .min_by(|a, b| a.ber.total_cmp(&b.ber))
        .expect("non-empty sweep");
    println!(
        "\nbest operating point with the PA: {} dB (BER {:.3e})",
        best.snr_db, best.ber
    );
    Ok(())
}
