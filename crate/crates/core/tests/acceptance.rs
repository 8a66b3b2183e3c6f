//! Acceptance criteria. Each criterion prints one PASS/FAIL line; the
//! process exits non-zero if any fails.

mod common;

use std::fs;
use std::path::Path;
use std::process::Command;
use std::time::{Duration, Instant};

use pa_linksim::amplifier::amplitude_to_db;
use pa_linksim::harness::{warped_constellation, DEFAULT_DRIVE_SWEEP_GRID};
use pa_linksim::{
    run_point, run_sweep, theoretical_ber, ChainMode, Clamp, Constellation, ModScheme, PaConfig,
    PaParams, PolyCoeffs, SimRng, StoppingRule, SweepConfig,
};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn check(cond: bool, detail: String) -> Outcome {
    if cond {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn random_params(rng: &mut SimRng) -> PaParams {
    let u = |rng: &mut SimRng| (rng.next_u64() >> 11) as f64 / (1u64 << 53) as f64;
    let gain = -10.0 + 60.0 * u(rng);
    let p1 = -30.0 + 75.0 * u(rng);
    PaParams::new(gain, p1, p1 + 0.1 + 10.0 * u(rng)).unwrap()
}

fn coefficient_fit() -> Outcome {
    let params = PaParams::hmc413();
    let t = Instant::now();
    let c = PolyCoeffs::fit(&params).map_err(|e| e.to_string())?;
    let elapsed = t.elapsed();
    check(
        (c.a1() - 14.1254).abs() <= 1e-3
            && (c.a3() - -0.48576).abs() <= 1e-4
            && elapsed < Duration::from_millis(1),
        format!("a1={:.6} a3={:.6} in {:?}", c.a1(), c.a3(), elapsed),
    )
}

fn one_db_round_trip() -> Outcome {
    let params = PaParams::hmc413();
    let c = PolyCoeffs::fit(&params).unwrap();
    let datasheet_err =
        (amplitude_to_db(c.amplify_real(params.p1db_input_amplitude(), Clamp::On)) - 27.0).abs();
    let mut rng = SimRng::from_seed(2024);
    let mut worst: f64 = 0.0;
    for _ in 0..200 {
        let p = random_params(&mut rng);
        let c = PolyCoeffs::fit(&p).unwrap();
        let y = c.amplify_real(p.p1db_input_amplitude(), Clamp::On);
        worst = worst.max((amplitude_to_db(y) - p.p1db_db).abs());
    }
    check(
        datasheet_err < 1e-9 && worst < 1e-9,
        format!("datasheet err {datasheet_err:.2e} dB, worst of 200 random fits {worst:.2e} dB"),
    )
}

fn psat_consistency() -> Outcome {
    let c = PolyCoeffs::fit(&PaParams::hmc413()).unwrap();
    let dev = (c.psat_db() - 29.5).abs();
    check(
        dev < 0.5,
        format!("model Psat {:.4} dB, |dev| {:.4} dB", c.psat_db(), dev),
    )
}

fn harmonic_oracle() -> Outcome {
    let mut rng = SimRng::from_seed(77);
    let (mut worst_rel, mut worst_even): (f64, f64) = (0.0, 0.0);
    for _ in 0..10 {
        let c = PolyCoeffs::fit(&random_params(&mut rng)).unwrap();
        let frac = 0.05 + 0.95 * (rng.next_u64() >> 11) as f64 / (1u64 << 53) as f64;
        let a = frac * c.x_sat();
        let h = c.harmonics(a).map_err(|e| e.to_string())?;
        let s = common::sample_tone(|v| c.amplify_real(v, Clamp::Off), a, 4, 64);
        let fund = common::dft_harmonic(&s, 1, 4);
        let third = common::dft_harmonic(&s, 3, 4);
        worst_rel = worst_rel
            .max(((fund - h.fundamental) / h.fundamental).abs())
            .max(((third - h.third) / h.third).abs());
        let even = common::dft_harmonic(&s, 0, 4)
            .abs()
            .max(common::dft_harmonic(&s, 2, 4).abs());
        worst_even = worst_even.max(even / fund.abs());
    }
    check(
        worst_rel < 1e-9 && worst_even < 1e-12,
        format!("worst relative mismatch {worst_rel:.2e}, worst DC/2w ratio {worst_even:.2e}"),
    )
}

fn linear_ber_vs_theory() -> Outcome {
    let t = Instant::now();
    let cases = [
        (ModScheme::psk(2).unwrap(), 0.0),
        (ModScheme::psk(2).unwrap(), 4.0),
        (ModScheme::psk(2).unwrap(), 8.0),
        (ModScheme::psk(4).unwrap(), 4.0),
        (ModScheme::psk(4).unwrap(), 8.0),
        (ModScheme::qam(16).unwrap(), 8.0),
        (ModScheme::qam(16).unwrap(), 12.0),
    ];
    let stop = StoppingRule {
        min_bit_errors: 200,
        max_bits: 100_000_000,
    };
    let mut details = Vec::new();
    let mut ok = true;
    for (i, (scheme, snr)) in cases.into_iter().enumerate() {
        let r = run_point(scheme, snr, stop, i as u64, None).map_err(|e| e.to_string())?;
        let p = theoretical_ber(scheme, snr).unwrap();
        let z = (r.ber - p) / common::binomial_sd(p, r.bits_simulated);
        ok &= r.bit_errors >= 200 && z.abs() <= 3.0;
        details.push(format!("{scheme}@{snr}dB z={z:+.2}"));
    }
    let elapsed = t.elapsed();
    ok &= elapsed < Duration::from_secs(120);
    check(ok, format!("{} ({:.1?})", details.join(", "), elapsed))
}

fn drive_sweep_dip_then_rise() -> Outcome {
    let (start, step, stop) = DEFAULT_DRIVE_SWEEP_GRID;
    let grid = pa_linksim::cli::parse_grid(&format!("{start}:{step}:{stop}")).unwrap();
    let cfg = SweepConfig {
        scheme: ModScheme::qam(16).unwrap(),
        snr_points_db: grid,
        stopping: StoppingRule::default(),
        master_seed: 0,
        pa: Some(PaConfig::default()),
        mode: ChainMode::PaDriveSweep,
    };
    let bers: Vec<f64> = run_sweep(&cfg)
        .map_err(|e| e.to_string())?
        .iter()
        .map(|r| r.ber)
        .collect();
    let dip = bers.windows(2).position(|w| w[1] < w[0]);
    let rise = dip.and_then(|d| {
        bers[d + 1..]
            .windows(2)
            .position(|w| w[1] > w[0])
            .map(|r| r + d + 1)
    });
    let trace = bers
        .iter()
        .map(|b| format!("{b:.1e}"))
        .collect::<Vec<_>>()
        .join(" ");
    check(
        dip.is_some() && rise.is_some(),
        format!("first drop at {dip:?}, later rise at {rise:?}: {trace}"),
    )
}

fn compression_only_errors() -> Outcome {
    let scheme = ModScheme::qam(16).unwrap();
    let params = PaParams::hmc413();
    let c = PolyCoeffs::fit(&params).unwrap();
    let ideal = Constellation::new(scheme);
    // outer rail input 5% beyond saturation, well past the 1 dB input point
    let outer_in = 1.05 * c.x_sat();
    let drive_db = 20.0 * (outer_in * 10f64.sqrt() / 3.0).log10();
    let d = 10f64.powf(drive_db / 20.0);
    let pa = PaConfig::new(params, drive_db);
    let warped = warped_constellation(scheme, &pa).map_err(|e| e.to_string())?;

    let mut exact = true;
    let mut same_errors = true;
    let mut wrong = 0;
    for (label, (&p, &w)) in ideal.points().iter().zip(&warped).enumerate() {
        let brute_re = common::brute_cubic(c.a1(), c.a3(), p.re * d) / (c.a1() * d);
        let brute_im = common::brute_cubic(c.a1(), c.a3(), p.im * d) / (c.a1() * d);
        exact &= w.re == brute_re && w.im == brute_im;
        let by_demap = ideal.demap(&[w]);
        let by_boundary = common::qam16_boundary_decision(ideal.points(), w);
        let mut expected_bits = Vec::new();
        for shift in (0..4).rev() {
            expected_bits.push((by_boundary >> shift) & 1 == 1);
        }
        same_errors &= by_demap == expected_bits;
        wrong += usize::from(by_boundary != label);
    }
    let noiseless = run_point(
        scheme,
        f64::INFINITY,
        StoppingRule {
            min_bit_errors: 1,
            max_bits: 1_000_000,
        },
        0,
        Some(&pa),
    )
    .map_err(|e| e.to_string())?;
    check(
        exact && same_errors && wrong > 0 && noiseless.ber > 0.0,
        format!(
            "warped==brute: {exact}, demap==boundary: {same_errors}, {wrong}/16 points in error, noiseless BER {:.3e}",
            noiseless.ber
        ),
    )
}

fn cli(dir: &Path, args: &[&str]) -> Result<(), String> {
    let out = Command::new(env!("CARGO_BIN_EXE_pa-linksim"))
        .args(args)
        .arg("--out")
        .arg(dir)
        .output()
        .map_err(|e| e.to_string())?;
    if out.status.success() {
        Ok(())
    } else {
        Err(String::from_utf8_lossy(&out.stderr).into_owned())
    }
}

fn cli_determinism() -> Outcome {
    let commands: [(&[&str], &[&str]); 4] = [
        (
            &[
                "ber-sweep",
                "--scheme",
                "psk",
                "--m",
                "4",
                "--snr",
                "0:2:8",
                "--seed",
                "3",
            ],
            &["ber_sweep.csv"],
        ),
        (
            &[
                "ber-sweep",
                "--scheme",
                "qam",
                "--m",
                "16",
                "--snr",
                "0:4:20",
                "--pa-mode",
                "drive-sweep",
                "--max-bits",
                "1000000",
            ],
            &["ber_sweep.csv"],
        ),
        (&["amam"], &["amam.csv", "amam_voltage.csv"]),
        (
            &[
                "scatter",
                "--scheme",
                "qam",
                "--m",
                "16",
                "--symbols",
                "2000",
                "--snr",
                "12",
                "--pa-mode",
                "fixed-drive",
                "--drive-db",
                "6",
            ],
            &["scatter.csv"],
        ),
    ];
    let mut compared = 0;
    for (args, files) in commands {
        let a = tempfile::tempdir().map_err(|e| e.to_string())?;
        let b = tempfile::tempdir().map_err(|e| e.to_string())?;
        cli(a.path(), args)?;
        cli(b.path(), args)?;
        for f in files {
            let (x, y) = (
                fs::read(a.path().join(f)).map_err(|e| e.to_string())?,
                fs::read(b.path().join(f)).map_err(|e| e.to_string())?,
            );
            if x != y {
                return Err(format!("{} differs between runs of {}", f, args[0]));
            }
            compared += 1;
        }
    }
    Ok(format!(
        "{compared} CSVs byte-identical across repeated runs"
    ))
}

fn main() {
    let criteria: [Criterion; 8] = [
        ("coefficient fit", coefficient_fit),
        ("1 dB round-trip", one_db_round_trip),
        ("Psat consistency", psat_consistency),
        ("harmonic oracle", harmonic_oracle),
        ("linear-chain BER vs theory", linear_ber_vs_theory),
        ("drive-sweep dip-then-rise", drive_sweep_dip_then_rise),
        ("compression-only errors", compression_only_errors),
        ("CLI determinism", cli_determinism),
    ];
    let mut failed = 0;
    for (name, f) in criteria {
        match f() {
            Ok(detail) => println!("PASS  {name}: {detail}"),
            Err(detail) => {
                failed += 1;
                println!("FAIL  {name}: {detail}");
            }
        }
    }
    println!(
        "\n{} of {} acceptance criteria passed",
        criteria.len() - failed,
        criteria.len()
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
