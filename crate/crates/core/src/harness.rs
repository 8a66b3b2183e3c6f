//! Monte Carlo BER measurement through the transmit chain
//! `bits → mapper → [drive · PA] → AWGN → [÷ reference gain] → demapper`,
//! together with closed-form BER references for the linear chain.
//!
//! Three chain modes are supported:
//!
//! * `Linear`: no amplifier; noise is calibrated against unit symbol energy.
//! * `PaFixedDrive`: every point uses the same drive. Noise is calibrated per
//!   block against the measured post-PA average symbol energy.
//! * `PaDriveSweep`: noise power is frozen at its value for the first SNR
//!   point and the drive rises dB-for-dB with the SNR axis, so the upper end
//!   of the sweep pushes the amplifier into compression.
//!
//! With the amplifier in the chain the receiver divides by the fixed linear
//! gain `a1 · d` (no AGC), so compression shows up as residual distortion.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::amplifier::{db_to_amplitude, Clamp, PaParams, PolyCoeffs};
use crate::channel::{add_awgn, NoiseSpec, SimRng, StreamRole};
use crate::error::{invalid, Result};
use crate::modem::{bits_to_label, Constellation, Family, ModScheme};

/// Symbols processed between stopping-rule checks.
pub const BLOCK_SYMBOLS: usize = 1024;

/// Drive level used when none is given. With the HMC413 fit, a 16-QAM drive
/// sweep over 0..20 dB starts well backed off and ends with the outer
/// components past saturation.
pub const DEFAULT_DRIVE_DB: f64 = -9.0;

/// Eb/N0 grid (dB) on which the drive-sweep dip-then-rise is checked.
pub const DEFAULT_DRIVE_SWEEP_GRID: (f64, f64, f64) = (0.0, 2.0, 20.0);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct StoppingRule {
    pub min_bit_errors: u64,
    pub max_bits: u64,
}

impl Default for StoppingRule {
    fn default() -> Self {
        Self {
            min_bit_errors: 100,
            max_bits: 10_000_000,
        }
    }
}

impl StoppingRule {
    fn validate(&self, scheme: ModScheme) -> Result<()> {
        if self.min_bit_errors < 1 {
            return Err(invalid("min_bit_errors must be at least 1"));
        }
        if self.max_bits < scheme.bits_per_symbol() as u64 {
            return Err(invalid(format!(
                "max_bits ({}) is less than one {} symbol",
                self.max_bits, scheme
            )));
        }
        Ok(())
    }
}

/// Amplifier placement in the chain.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PaConfig {
    pub params: PaParams,
    /// Scaling applied to the unit-energy constellation before the PA, in dB.
    pub drive_db: f64,
    pub clamp: Clamp,
}

impl PaConfig {
    pub fn new(params: PaParams, drive_db: f64) -> Self {
        Self {
            params,
            drive_db,
            clamp: Clamp::On,
        }
    }

    fn stage(&self) -> Result<PaStage> {
        if !self.drive_db.is_finite() {
            return Err(invalid(format!(
                "drive_db must be finite, got {}",
                self.drive_db
            )));
        }
        Ok(PaStage {
            coeffs: PolyCoeffs::fit(&self.params)?,
            drive: db_to_amplitude(self.drive_db),
            clamp: self.clamp,
        })
    }
}

impl Default for PaConfig {
    fn default() -> Self {
        Self::new(PaParams::hmc413(), DEFAULT_DRIVE_DB)
    }
}

#[derive(Debug, Clone, Copy)]
struct PaStage {
    coeffs: PolyCoeffs,
    drive: f64,
    clamp: Clamp,
}

impl PaStage {
    #[inline]
    fn transmit(&self, s: Complex64) -> Complex64 {
        self.coeffs.amplify_complex(s * self.drive, self.clamp)
    }

    fn reference_gain(&self) -> f64 {
        self.coeffs.a1() * self.drive
    }

    fn with_drive_db(mut self, drive_db: f64) -> Self {
        self.drive = db_to_amplitude(drive_db);
        self
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ChainMode {
    #[default]
    Linear,
    PaFixedDrive,
    PaDriveSweep,
}

/// One BER experiment.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepConfig {
    pub scheme: ModScheme,
    pub snr_points_db: Vec<f64>,
    pub stopping: StoppingRule,
    pub master_seed: u64,
    pub pa: Option<PaConfig>,
    pub mode: ChainMode,
}

impl SweepConfig {
    pub fn linear(scheme: ModScheme, snr_points_db: Vec<f64>, master_seed: u64) -> Self {
        Self {
            scheme,
            snr_points_db,
            stopping: StoppingRule::default(),
            master_seed,
            pa: None,
            mode: ChainMode::Linear,
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.stopping.validate(self.scheme)?;
        if self.snr_points_db.is_empty() {
            return Err(invalid("SNR grid is empty"));
        }
        if self
            .snr_points_db
            .iter()
            .any(|s| s.is_nan() || *s == f64::NEG_INFINITY)
        {
            return Err(invalid("SNR points must be finite or +inf"));
        }
        if self.snr_points_db.windows(2).any(|w| w[1] <= w[0]) {
            return Err(invalid("SNR points must be strictly increasing"));
        }
        if self.effective_mode() == ChainMode::PaDriveSweep
            && self.snr_points_db.iter().any(|s| !s.is_finite())
        {
            return Err(invalid("drive sweep needs a finite SNR grid"));
        }
        Ok(())
    }

    /// Mode actually simulated: any PA mode without a PA config is linear.
    pub fn effective_mode(&self) -> ChainMode {
        match self.pa {
            None => ChainMode::Linear,
            Some(_) => self.mode,
        }
    }
}

/// One measured point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BerRecord {
    pub snr_db: f64,
    pub bits_simulated: u64,
    pub bit_errors: u64,
    pub ber: f64,
    /// Closed-form reference; only present for the linear chain.
    pub theory_ber: Option<f64>,
}

#[derive(Debug, Clone, Copy)]
enum NoiseCal {
    UnitEnergy(NoiseSpec),
    MeasuredPerBlock(NoiseSpec),
    Fixed(NoiseSpec),
}

#[derive(Debug, Clone, Copy)]
struct PointPlan {
    snr_db: f64,
    pa: Option<PaStage>,
    noise: NoiseCal,
    theory: bool,
}

fn simulate(
    constellation: &Constellation,
    plan: &PointPlan,
    stopping: StoppingRule,
    master_seed: u64,
    index: usize,
) -> BerRecord {
    let scheme = constellation.scheme();
    let k = scheme.bits_per_symbol();
    let mut data_rng = SimRng::for_point(master_seed, scheme, index, StreamRole::Data);
    let mut noise_rng = SimRng::for_point(master_seed, scheme, index, StreamRole::Noise);

    let max_symbols = stopping.max_bits / k as u64;
    let mut symbols_done = 0u64;
    let mut errors = 0u64;
    let mut bits = vec![false; BLOCK_SYMBOLS * k];
    let mut labels = Vec::with_capacity(BLOCK_SYMBOLS);
    let mut tx = Vec::with_capacity(BLOCK_SYMBOLS);

    while errors < stopping.min_bit_errors && symbols_done < max_symbols {
        let n = (max_symbols - symbols_done).min(BLOCK_SYMBOLS as u64) as usize;
        let bits = &mut bits[..n * k];
        data_rng.fill_bits(bits);
        labels.clear();
        labels.extend(bits.chunks_exact(k).map(bits_to_label));

        tx.clear();
        tx.extend(labels.iter().map(|&l| constellation.points()[l]));
        if let Some(pa) = &plan.pa {
            tx.iter_mut().for_each(|s| *s = pa.transmit(*s));
        }

        let spec = match plan.noise {
            NoiseCal::UnitEnergy(spec) | NoiseCal::Fixed(spec) => Some(spec),
            NoiseCal::MeasuredPerBlock(spec) => {
                let es = tx.iter().map(|s| s.norm_sqr()).sum::<f64>() / n as f64;
                spec.with_symbol_energy(es).ok()
            }
        };
        if let Some(spec) = spec {
            add_awgn(&mut tx, &spec, &mut noise_rng);
        }

        if let Some(pa) = &plan.pa {
            let g = pa.reference_gain();
            tx.iter_mut().for_each(|s| *s /= g);
        }

        errors += tx
            .iter()
            .zip(&labels)
            .map(|(&rx, &sent)| u64::from((constellation.nearest(rx) ^ sent).count_ones()))
            .sum::<u64>();
        symbols_done += n as u64;
    }

    let bits_simulated = symbols_done * k as u64;
    BerRecord {
        snr_db: plan.snr_db,
        bits_simulated,
        bit_errors: errors,
        ber: errors as f64 / bits_simulated as f64,
        theory_ber: if plan.theory {
            theoretical_ber(scheme, plan.snr_db).ok()
        } else {
            None
        },
    }
}

fn linear_plan(scheme: ModScheme, snr_db: f64) -> Result<PointPlan> {
    Ok(PointPlan {
        snr_db,
        pa: None,
        noise: NoiseCal::UnitEnergy(NoiseSpec::new(snr_db, scheme.bits_per_symbol())?),
        theory: true,
    })
}

/// Measures one point with streams keyed by `seed`. With `pa` present the
/// amplifier runs at its configured drive and noise tracks the measured
/// post-PA energy.
pub fn run_point(
    scheme: ModScheme,
    snr_db: f64,
    stopping: StoppingRule,
    seed: u64,
    pa: Option<&PaConfig>,
) -> Result<BerRecord> {
    stopping.validate(scheme)?;
    let plan = match pa {
        None => linear_plan(scheme, snr_db)?,
        Some(cfg) => PointPlan {
            snr_db,
            pa: Some(cfg.stage()?),
            noise: NoiseCal::MeasuredPerBlock(NoiseSpec::new(snr_db, scheme.bits_per_symbol())?),
            theory: false,
        },
    };
    Ok(simulate(
        &Constellation::new(scheme),
        &plan,
        stopping,
        seed,
        0,
    ))
}

/// Runs every point of the sweep. Points are evaluated in parallel; each
/// depends only on the config and its index.
pub fn run_sweep(config: &SweepConfig) -> Result<Vec<BerRecord>> {
    config.validate()?;
    let scheme = config.scheme;
    let k = scheme.bits_per_symbol();
    let constellation = Constellation::new(scheme);

    let plans = match (config.effective_mode(), config.pa.as_ref()) {
        (ChainMode::PaFixedDrive, Some(cfg)) => {
            let stage = cfg.stage()?;
            config
                .snr_points_db
                .iter()
                .map(|&snr_db| {
                    Ok(PointPlan {
                        snr_db,
                        pa: Some(stage),
                        noise: NoiseCal::MeasuredPerBlock(NoiseSpec::new(snr_db, k)?),
                        theory: false,
                    })
                })
                .collect::<Result<Vec<_>>>()?
        }
        (ChainMode::PaDriveSweep, Some(cfg)) => {
            let base = cfg.stage()?;
            let snr0 = config.snr_points_db[0];
            let es0 = mean_post_pa_energy(&constellation, &base);
            let noise = NoiseSpec::new(snr0, k)?.with_symbol_energy(es0)?;
            config
                .snr_points_db
                .iter()
                .map(|&snr_db| PointPlan {
                    snr_db,
                    pa: Some(base.with_drive_db(cfg.drive_db + (snr_db - snr0))),
                    noise: NoiseCal::Fixed(noise),
                    theory: false,
                })
                .collect()
        }
        _ => config
            .snr_points_db
            .iter()
            .map(|&snr_db| linear_plan(scheme, snr_db))
            .collect::<Result<Vec<_>>>()?,
    };

    Ok(plans
        .par_iter()
        .enumerate()
        .map(|(i, plan)| simulate(&constellation, plan, config.stopping, config.master_seed, i))
        .collect())
}

// Exact expectation over equiprobable symbols.
fn mean_post_pa_energy(constellation: &Constellation, pa: &PaStage) -> f64 {
    let pts = constellation.points();
    pts.iter().map(|&p| pa.transmit(p).norm_sqr()).sum::<f64>() / pts.len() as f64
}

/// Gaussian tail probability `Q(x) = P(N(0,1) > x)`.
pub fn q_function(x: f64) -> f64 {
    0.5 * libm::erfc(x / std::f64::consts::SQRT_2)
}

/// Closed-form BER for Gray-coded schemes on a linear AWGN chain.
///
/// BPSK/QPSK are exact; higher-order PSK and square QAM use the
/// nearest-neighbour approximation.
pub fn theoretical_ber(scheme: ModScheme, ebn0_db: f64) -> Result<f64> {
    if ebn0_db.is_nan() {
        return Err(invalid("ebn0_db is NaN"));
    }
    if ebn0_db == f64::INFINITY {
        return Ok(0.0);
    }
    let gamma = 10f64.powf(ebn0_db / 10.0);
    let m = f64::from(scheme.order());
    let k = scheme.bits_per_symbol() as f64;
    Ok(match scheme.family() {
        Family::Psk if scheme.order() <= 4 => q_function((2.0 * gamma).sqrt()),
        Family::Psk => {
            (2.0 / k) * q_function((2.0 * k * gamma).sqrt() * (std::f64::consts::PI / m).sin())
        }
        Family::Qam => {
            (4.0 / k) * (1.0 - 1.0 / m.sqrt()) * q_function((3.0 * k * gamma / (m - 1.0)).sqrt())
        }
    })
}

/// Transmitted and received symbol pairs for constellation plots.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScatterPoint {
    pub pre: Complex64,
    pub post: Complex64,
}

/// Sends `n_symbols` random symbols through the chain and returns each ideal
/// symbol next to what the receiver sees (normalized by the linear reference
/// gain). `snr_db = None` leaves the channel noiseless.
pub fn scatter_capture(
    scheme: ModScheme,
    n_symbols: usize,
    seed: u64,
    pa: Option<&PaConfig>,
    snr_db: Option<f64>,
) -> Result<Vec<ScatterPoint>> {
    if n_symbols == 0 {
        return Err(invalid("n_symbols must be at least 1"));
    }
    let constellation = Constellation::new(scheme);
    let k = scheme.bits_per_symbol();
    let stage = pa.map(PaConfig::stage).transpose()?;

    let mut data_rng = SimRng::for_point(seed, scheme, 0, StreamRole::Scatter);
    let mut noise_rng = SimRng::for_point(seed, scheme, 0, StreamRole::Noise);
    let mut bits = vec![false; n_symbols * k];
    data_rng.fill_bits(&mut bits);
    let pre = constellation.map_bits(&bits)?;

    let mut post: Vec<Complex64> = match &stage {
        Some(st) => pre.iter().map(|&s| st.transmit(s)).collect(),
        None => pre.clone(),
    };
    if let Some(snr_db) = snr_db {
        let mut spec = NoiseSpec::new(snr_db, k)?;
        if stage.is_some() {
            let es = post.iter().map(|s| s.norm_sqr()).sum::<f64>() / n_symbols as f64;
            spec = spec.with_symbol_energy(es)?;
        }
        add_awgn(&mut post, &spec, &mut noise_rng);
    }
    if let Some(st) = &stage {
        let g = st.reference_gain();
        post.iter_mut().for_each(|s| *s /= g);
    }

    Ok(pre
        .into_iter()
        .zip(post)
        .map(|(pre, post)| ScatterPoint { pre, post })
        .collect())
}

/// Noise-free received constellation: each point driven through the PA and
/// divided by the linear reference gain. Indexed by label, like
/// [`Constellation::points`].
pub fn warped_constellation(scheme: ModScheme, pa: &PaConfig) -> Result<Vec<Complex64>> {
    let stage = pa.stage()?;
    let g = stage.reference_gain();
    Ok(Constellation::new(scheme)
        .points()
        .iter()
        .map(|&p| stage.transmit(p) / g)
        .collect())
}
