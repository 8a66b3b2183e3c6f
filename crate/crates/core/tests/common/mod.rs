//! Oracles shared by the integration tests. None of these call into the code
//! paths they are used to check.
#![allow(dead_code)]

use std::f64::consts::PI;

use num_complex::Complex64;

/// Signed cosine amplitude of harmonic `h` of a signal sampled over exactly
/// `periods` periods, via a direct DFT sum. `h = 0` returns the mean.
pub fn dft_harmonic(samples: &[f64], h: usize, periods: usize) -> f64 {
    let n = samples.len() as f64;
    let mut re = 0.0;
    let mut im = 0.0;
    for (i, &y) in samples.iter().enumerate() {
        let ph = 2.0 * PI * (h * periods) as f64 * i as f64 / n;
        re += y * ph.cos();
        im -= y * ph.sin();
    }
    let mag = re.hypot(im) / n * if h == 0 { 1.0 } else { 2.0 };
    if re < 0.0 {
        -mag
    } else {
        mag
    }
}

/// Samples `f(A·cos(2πt))` at `per_period` points per period.
pub fn sample_tone(
    f: impl Fn(f64) -> f64,
    amplitude: f64,
    periods: usize,
    per_period: usize,
) -> Vec<f64> {
    (0..periods * per_period)
        .map(|i| f(amplitude * (2.0 * PI * i as f64 / per_period as f64).cos()))
        .collect()
}

/// Cubic `a1·v + a3·v³` held at `±y_sat` beyond `x_sat`, evaluated from
/// scratch.
pub fn brute_cubic(a1: f64, a3: f64, v: f64) -> f64 {
    let x_sat = (-a1 / (3.0 * a3)).sqrt();
    let y_sat = 2.0 / 3.0 * a1 * x_sat;
    if v.abs() > x_sat {
        y_sat.copysign(v)
    } else {
        let y = a1 * v + a3 * v * v * v;
        y.abs().min(y_sat).copysign(y)
    }
}

/// 16-QAM rail levels in units of 1/√10, and the rail decision for a value.
pub const QAM16_LEVELS: [f64; 4] = [-3.0, -1.0, 1.0, 3.0];

pub fn qam16_rail_decision(x: f64) -> f64 {
    let u = x * 10f64.sqrt();
    if u < -2.0 {
        -3.0
    } else if u < 0.0 {
        -1.0
    } else if u < 2.0 {
        1.0
    } else {
        3.0
    }
}

/// Label (index into `points`) whose rails match the per-rail decisions.
pub fn qam16_boundary_decision(points: &[Complex64], rx: Complex64) -> usize {
    let (di, dq) = (qam16_rail_decision(rx.re), qam16_rail_decision(rx.im));
    points
        .iter()
        .position(|p| {
            ((p.re * 10f64.sqrt()) - di).abs() < 1e-9 && ((p.im * 10f64.sqrt()) - dq).abs() < 1e-9
        })
        .expect("every rail pair is a grid point")
}

/// Binomial standard deviation of a BER estimate from `n` bits.
pub fn binomial_sd(p: f64, n: u64) -> f64 {
    (p * (1.0 - p) / n as f64).sqrt()
}
