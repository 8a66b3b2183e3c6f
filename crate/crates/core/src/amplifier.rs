//! Memoryless cubic power-amplifier model.
//!
//! The amplifier is described by `y = a1·x + a3·x³` with `a3 < 0`, fitted
//! from two datasheet figures: small-signal gain and the output power at the
//! 1 dB compression point. All signals are voltages in a normalized 1-ohm
//! system, so a level in dB is `20·log10(|V|)` and datasheet dBm digits are
//! used unchanged.
//!
//! Complex baseband symbols are amplified one rail at a time: the in-phase
//! and quadrature components each go through the real transfer curve.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};

/// Converts a level in dB to a voltage amplitude.
#[inline]
pub fn db_to_amplitude(db: f64) -> f64 {
    10f64.powf(db / 20.0)
}

/// Converts a voltage amplitude to a level in dB.
#[inline]
pub fn amplitude_to_db(v: f64) -> f64 {
    20.0 * v.abs().log10()
}

/// Datasheet-style amplifier parameters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PaParams {
    /// Small-signal gain in dB.
    pub gain_db: f64,
    /// Output level at the 1 dB compression point.
    pub p1db_db: f64,
    /// Saturated output level. Only used for the consistency check, never in the fit.
    pub psat_db: f64,
}

impl PaParams {
    pub fn new(gain_db: f64, p1db_db: f64, psat_db: f64) -> Result<Self> {
        let params = Self {
            gain_db,
            p1db_db,
            psat_db,
        };
        params.validate()?;
        Ok(params)
    }

    /// HMC413QS16G datasheet figures: 23 dB gain, 27 dBm P1dB, 29.5 dBm Psat.
    pub const fn hmc413() -> Self {
        Self {
            gain_db: 23.0,
            p1db_db: 27.0,
            psat_db: 29.5,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !self.gain_db.is_finite() {
            return Err(invalid(format!(
                "gain_db must be finite, got {}",
                self.gain_db
            )));
        }
        if !self.p1db_db.is_finite() {
            return Err(invalid(format!(
                "p1db_db must be finite, got {}",
                self.p1db_db
            )));
        }
        if !self.psat_db.is_finite() || self.psat_db <= self.p1db_db {
            return Err(invalid(format!(
                "psat_db ({}) must be finite and above p1db_db ({})",
                self.psat_db, self.p1db_db
            )));
        }
        Ok(())
    }

    /// Input amplitude at which the fitted curve sits exactly 1 dB below linear.
    pub fn p1db_input_amplitude(&self) -> f64 {
        db_to_amplitude(self.p1db_db + 1.0) / db_to_amplitude(self.gain_db)
    }
}

impl Default for PaParams {
    fn default() -> Self {
        Self::hmc413()
    }
}

/// Whether the output is held at `±y_sat` beyond the cubic's turning point.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Clamp {
    #[default]
    On,
    /// Raw cubic everywhere; it folds back down past `x_sat`.
    Off,
}

/// Fitted polynomial coefficients plus the derived saturation point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PolyCoeffs {
    a1: f64,
    a3: f64,
    x_sat: f64,
    y_sat: f64,
}

impl PolyCoeffs {
    /// Fits `a1` and `a3` from gain and P1dB.
    pub fn fit(params: &PaParams) -> Result<Self> {
        params.validate()?;
        let a1 = db_to_amplitude(params.gain_db);
        let x1 = params.p1db_input_amplitude();
        let y1 = db_to_amplitude(params.p1db_db);
        let a3 = (y1 - a1 * x1) / (x1 * x1 * x1);
        Self::from_raw(a1, a3)
    }

    /// Builds coefficients directly. `a3 = 0` gives a linear amplifier with
    /// an infinite saturation point.
    pub fn from_raw(a1: f64, a3: f64) -> Result<Self> {
        if !(a1.is_finite() && a1 > 0.0) {
            return Err(invalid(format!("a1 must be finite and positive, got {a1}")));
        }
        if !(a3.is_finite() && a3 <= 0.0) {
            return Err(invalid(format!(
                "a3 must be finite and non-positive (compressive), got {a3}"
            )));
        }
        let (x_sat, y_sat) = if a3 == 0.0 {
            (f64::INFINITY, f64::INFINITY)
        } else {
            let x_sat = (-a1 / (3.0 * a3)).sqrt();
            (x_sat, 2.0 / 3.0 * a1 * x_sat)
        };
        Ok(Self {
            a1,
            a3,
            x_sat,
            y_sat,
        })
    }

    pub fn a1(&self) -> f64 {
        self.a1
    }

    pub fn a3(&self) -> f64 {
        self.a3
    }

    /// Input amplitude where the cubic's slope reaches zero.
    pub fn x_sat(&self) -> f64 {
        self.x_sat
    }

    /// Output amplitude at `x_sat`; the ceiling of the clamped curve.
    pub fn y_sat(&self) -> f64 {
        self.y_sat
    }

    /// Saturated output level implied by the fit, in dB.
    pub fn psat_db(&self) -> f64 {
        amplitude_to_db(self.y_sat)
    }

    #[inline]
    fn cubic(&self, v: f64) -> f64 {
        self.a1 * v + self.a3 * v * v * v
    }

    /// Real transfer curve.
    #[inline]
    pub fn amplify_real(&self, v: f64, clamp: Clamp) -> f64 {
        match clamp {
            Clamp::Off => self.cubic(v),
            Clamp::On => {
                if v.abs() > self.x_sat {
                    self.y_sat.copysign(v)
                } else {
                    // rounding near the turning point can overshoot y_sat by an ulp
                    let y = self.cubic(v);
                    y.abs().min(self.y_sat).copysign(y)
                }
            }
        }
    }

    /// Amplifies the I and Q rails independently.
    #[inline]
    pub fn amplify_complex(&self, s: Complex64, clamp: Clamp) -> Complex64 {
        Complex64::new(
            self.amplify_real(s.re, clamp),
            self.amplify_real(s.im, clamp),
        )
    }

    /// Samples the AM/AM characteristic on a uniform input-level grid
    /// (inclusive of both ends), with clamping on.
    pub fn am_am_curve(
        &self,
        pin_db_start: f64,
        pin_db_stop: f64,
        steps: usize,
    ) -> Result<Vec<AmAmPoint>> {
        if !(pin_db_start.is_finite() && pin_db_stop.is_finite()) || pin_db_start >= pin_db_stop {
            return Err(invalid(format!(
                "input grid must satisfy start < stop, got {pin_db_start}..{pin_db_stop}"
            )));
        }
        if steps < 2 {
            return Err(invalid(format!(
                "input grid needs at least 2 steps, got {steps}"
            )));
        }
        let span = pin_db_stop - pin_db_start;
        let last = (steps - 1) as f64;
        Ok((0..steps)
            .map(|i| {
                let pin_db = pin_db_start + span * i as f64 / last;
                let vin = db_to_amplitude(pin_db);
                let vout = self.amplify_real(vin, Clamp::On);
                let pout_db = amplitude_to_db(vout);
                AmAmPoint {
                    pin_db,
                    pout_db,
                    gain_db: pout_db - pin_db,
                    vin,
                    vout,
                }
            })
            .collect())
    }

    /// Closed-form harmonic amplitudes for a sinusoidal input `A·cos(ωt)`.
    ///
    /// Only valid where the clamp never engages, i.e. `0 < A ≤ x_sat`.
    pub fn harmonics(&self, amplitude: f64) -> Result<HarmonicAmps> {
        if !(amplitude.is_finite() && amplitude > 0.0) {
            return Err(invalid(format!(
                "amplitude must be finite and positive, got {amplitude}"
            )));
        }
        if amplitude > self.x_sat {
            return Err(Error::OutOfRegion {
                amplitude,
                x_sat: self.x_sat,
            });
        }
        let a_cubed = amplitude * amplitude * amplitude;
        Ok(HarmonicAmps {
            dc: 0.0,
            fundamental: self.a1 * amplitude + 0.75 * self.a3 * a_cubed,
            second: 0.0,
            third: 0.25 * self.a3 * a_cubed,
        })
    }
}

/// One sample of the AM/AM characteristic, in both dB and volts.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AmAmPoint {
    pub pin_db: f64,
    pub pout_db: f64,
    pub gain_db: f64,
    pub vin: f64,
    pub vout: f64,
}

/// Output amplitudes at DC and the first three harmonics of the drive tone.
///
/// Amplitudes are signed cosine coefficients, so a negative `third` means the
/// third harmonic is in antiphase with the drive.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HarmonicAmps {
    pub dc: f64,
    pub fundamental: f64,
    pub second: f64,
    pub third: f64,
}
