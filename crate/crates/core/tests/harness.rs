mod common;

use pa_linksim::harness::warped_constellation;
use pa_linksim::{
    run_point, run_sweep, theoretical_ber, ChainMode, Constellation, ModScheme, PaConfig, PaParams,
    PolyCoeffs, StoppingRule, SweepConfig,
};

fn stop(min_bit_errors: u64) -> StoppingRule {
    StoppingRule {
        min_bit_errors,
        max_bits: 10_000_000,
    }
}

fn outer_drive_db(outer_input: f64) -> f64 {
    20.0 * (outer_input * 10f64.sqrt() / 3.0).log10()
}

#[test]
fn empirical_ber_agrees_with_theory() {
    let schemes = [
        ModScheme::psk(2).unwrap(),
        ModScheme::psk(4).unwrap(),
        ModScheme::qam(16).unwrap(),
    ];
    for (i, scheme) in schemes.into_iter().enumerate() {
        for snr in [0.0, 4.0, 8.0] {
            let r = run_point(scheme, snr, stop(200), 1000 + i as u64, None).unwrap();
            let p = theoretical_ber(scheme, snr).unwrap();
            assert!(r.bit_errors >= 200);
            let sd = common::binomial_sd(p, r.bits_simulated);
            assert!(
                (r.ber - p).abs() <= 3.0 * sd,
                "{scheme} @ {snr} dB: {} vs {p} (sd {sd})",
                r.ber
            );
        }
    }
}

#[test]
fn bpsk_at_eight_db() {
    let r = run_point(ModScheme::psk(2).unwrap(), 8.0, stop(200), 8, None).unwrap();
    let p = theoretical_ber(ModScheme::psk(2).unwrap(), 8.0).unwrap();
    assert!((p - 1.909e-4).abs() < 1e-7);
    assert!((r.ber - p).abs() <= 3.0 * common::binomial_sd(p, r.bits_simulated));
}

#[test]
fn linear_sweep_is_statistically_monotone() {
    for scheme in [ModScheme::psk(2).unwrap(), ModScheme::qam(16).unwrap()] {
        let cfg = SweepConfig::linear(scheme, vec![0.0, 2.0, 4.0, 6.0, 8.0, 10.0], 5);
        let recs = run_sweep(&cfg).unwrap();
        for w in recs.windows(2) {
            let (t0, t1) = (w[0].theory_ber.unwrap(), w[1].theory_ber.unwrap());
            if t0 >= 5.0 * t1 {
                assert!(w[0].ber > w[1].ber, "{scheme}: {:?}", (w[0], w[1]));
            }
        }
    }
}

#[test]
fn compression_only_errors_match_boundary_oracle() {
    let scheme = ModScheme::qam(16).unwrap();
    let params = PaParams::hmc413();
    let coeffs = PolyCoeffs::fit(&params).unwrap();
    let ideal = Constellation::new(scheme);

    let mut prev = -1.0;
    for outer in [
        params.p1db_input_amplitude(),
        1.05 * coeffs.x_sat(),
        1.5 * coeffs.x_sat(),
    ] {
        let drive_db = outer_drive_db(outer);
        let pa = PaConfig::new(params, drive_db);
        let warped = warped_constellation(scheme, &pa).unwrap();
        let d = 10f64.powf(drive_db / 20.0);
        let g = coeffs.a1() * d;

        let mut expected_bits = 0u32;
        for (label, (&p, &w)) in ideal.points().iter().zip(&warped).enumerate() {
            let brute_re = common::brute_cubic(coeffs.a1(), coeffs.a3(), p.re * d) / g;
            let brute_im = common::brute_cubic(coeffs.a1(), coeffs.a3(), p.im * d) / g;
            assert_eq!((w.re, w.im), (brute_re, brute_im));
            let decided = common::qam16_boundary_decision(ideal.points(), w);
            assert_eq!(ideal.nearest(w), decided);
            expected_bits += (label ^ decided).count_ones();
        }
        let oracle_ber = f64::from(expected_bits) / 64.0;

        let r = run_point(
            scheme,
            f64::INFINITY,
            StoppingRule {
                min_bit_errors: u64::MAX,
                max_bits: 400_000,
            },
            3,
            Some(&pa),
        )
        .unwrap();
        // symbol draws are random, so the empirical rate scatters around the
        // enumeration average
        let tol = 5.0 * common::binomial_sd(oracle_ber.max(1e-9), r.bits_simulated / 4);
        assert!(
            (r.ber - oracle_ber).abs() <= tol,
            "outer={outer}: {} vs {oracle_ber}",
            r.ber
        );
        assert!(oracle_ber >= prev);
        prev = oracle_ber;
    }
    assert!(prev > 0.0);
}

#[test]
fn drive_sweep_dips_then_rises() {
    let (start, step, stop_db) = pa_linksim::harness::DEFAULT_DRIVE_SWEEP_GRID;
    let grid = pa_linksim::cli::parse_grid(&format!("{start}:{step}:{stop_db}")).unwrap();
    let cfg = SweepConfig {
        scheme: ModScheme::qam(16).unwrap(),
        snr_points_db: grid,
        stopping: StoppingRule::default(),
        master_seed: 0,
        pa: Some(PaConfig::default()),
        mode: ChainMode::PaDriveSweep,
    };
    let bers: Vec<f64> = run_sweep(&cfg).unwrap().iter().map(|r| r.ber).collect();
    let first_drop = bers
        .windows(2)
        .position(|w| w[1] < w[0])
        .expect("BER never drops");
    assert!(
        bers[first_drop + 1..].windows(2).any(|w| w[1] > w[0]),
        "no rise after the dip: {bers:?}"
    );
    // compression dominates the end of the sweep
    assert!(bers.last().unwrap() > &1e-2);
}

#[test]
fn fixed_drive_backed_off_tracks_linear() {
    // 25 dB back-off from the 1 dB point: compression is negligible
    let scheme = ModScheme::qam(16).unwrap();
    let pa = PaConfig::new(PaParams::hmc413(), -20.0);
    let snr = 8.0;
    let r = run_point(scheme, snr, stop(400), 21, Some(&pa)).unwrap();
    let p = theoretical_ber(scheme, snr).unwrap();
    assert!(
        (r.ber - p).abs() <= 4.0 * common::binomial_sd(p, r.bits_simulated),
        "{} vs {p}",
        r.ber
    );
}

#[test]
fn records_respect_invariants() {
    let mut cfg = SweepConfig::linear(ModScheme::psk(8).unwrap(), vec![0.0, 5.0, 10.0, 15.0], 1);
    cfg.stopping.max_bits = 300_000;
    cfg.pa = Some(PaConfig::default());
    cfg.mode = ChainMode::PaFixedDrive;
    for r in run_sweep(&cfg).unwrap() {
        assert!(r.bit_errors <= r.bits_simulated);
        assert!((0.0..=1.0).contains(&r.ber));
        assert_eq!(r.ber, r.bit_errors as f64 / r.bits_simulated as f64);
        assert!(r.theory_ber.is_none());
    }
}
