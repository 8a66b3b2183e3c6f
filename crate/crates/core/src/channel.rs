//! AWGN channel and the simulator's seeded randomness.
//!
//! Every random stream is a ChaCha8 generator. A sweep derives one key per
//! (master seed, scheme) and then gives each SNR point and role its own
//! ChaCha stream number, so streams never overlap regardless of how many
//! samples a point consumes or in which order points run.
//!
//! Gaussian samples come from `rand_distr::StandardNormal` (ziggurat).

use num_complex::Complex64;
use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::error::{invalid, Result};
use crate::modem::{Family, ModScheme};

/// Per-bit SNR plus what is needed to turn it into a noise variance.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NoiseSpec {
    ebn0_db: f64,
    bits_per_symbol: usize,
    symbol_energy: f64,
}

impl NoiseSpec {
    /// `ebn0_db = +inf` disables noise. Assumes unit average symbol energy.
    pub fn new(ebn0_db: f64, bits_per_symbol: usize) -> Result<Self> {
        if ebn0_db.is_nan() || ebn0_db == f64::NEG_INFINITY {
            return Err(invalid(format!(
                "ebn0_db must be finite or +inf, got {ebn0_db}"
            )));
        }
        if bits_per_symbol == 0 {
            return Err(invalid("bits_per_symbol must be at least 1"));
        }
        Ok(Self {
            ebn0_db,
            bits_per_symbol,
            symbol_energy: 1.0,
        })
    }

    /// Calibrates against a signal whose average symbol energy is `es`
    /// instead of 1.
    pub fn with_symbol_energy(mut self, es: f64) -> Result<Self> {
        if !(es.is_finite() && es > 0.0) {
            return Err(invalid(format!(
                "symbol energy must be finite and positive, got {es}"
            )));
        }
        self.symbol_energy = es;
        Ok(self)
    }

    pub fn ebn0_db(&self) -> f64 {
        self.ebn0_db
    }

    pub fn is_noiseless(&self) -> bool {
        self.ebn0_db == f64::INFINITY
    }

    /// Noise spectral density `N0 = Es / (k · 10^(Eb/N0 / 10))`.
    pub fn n0(&self) -> f64 {
        self.symbol_energy / (self.bits_per_symbol as f64 * 10f64.powf(self.ebn0_db / 10.0))
    }

    /// Variance of each of the I and Q noise components, `N0 / 2`.
    pub fn component_variance(&self) -> f64 {
        self.n0() / 2.0
    }
}

/// What a derived stream is used for.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[repr(u64)]
pub enum StreamRole {
    Data = 0,
    Noise = 1,
    Scatter = 2,
}

/// Deterministic random source. Single owner; never share between workers.
#[derive(Debug, Clone)]
pub struct SimRng(ChaCha8Rng);

impl SimRng {
    pub fn from_seed(seed: u64) -> Self {
        Self(ChaCha8Rng::seed_from_u64(seed))
    }

    /// Stream for one (scheme, point, role) of a run keyed by `master_seed`.
    pub fn for_point(
        master_seed: u64,
        scheme: ModScheme,
        point_index: usize,
        role: StreamRole,
    ) -> Self {
        let family = match scheme.family() {
            Family::Psk => 1u64,
            Family::Qam => 2u64,
        };
        let key = mix64(mix64(master_seed) ^ (family << 32 | u64::from(scheme.order())));
        let mut rng = ChaCha8Rng::seed_from_u64(key);
        rng.set_stream(((point_index as u64) << 4) | role as u64);
        Self(rng)
    }

    #[inline]
    pub fn gaussian(&mut self) -> f64 {
        self.0.sample(StandardNormal)
    }

    #[inline]
    pub fn next_u64(&mut self) -> u64 {
        self.0.next_u64()
    }

    /// Fills `out` with uniform random bits.
    pub fn fill_bits(&mut self, out: &mut [bool]) {
        for chunk in out.chunks_mut(64) {
            let word = self.0.next_u64();
            for (i, b) in chunk.iter_mut().enumerate() {
                *b = (word >> i) & 1 == 1;
            }
        }
    }
}

// SplitMix64 finalizer
fn mix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Adds complex AWGN in place. Draws I then Q for each symbol in order;
/// a noiseless spec leaves the input untouched and draws nothing.
pub fn add_awgn(symbols: &mut [Complex64], spec: &NoiseSpec, rng: &mut SimRng) {
    if spec.is_noiseless() {
        return;
    }
    let sigma = spec.component_variance().sqrt();
    for s in symbols.iter_mut() {
        let i = rng.gaussian();
        let q = rng.gaussian();
        *s += Complex64::new(sigma * i, sigma * q);
    }
}

/// Returns a noisy copy of `symbols`.
pub fn awgn(symbols: &[Complex64], spec: &NoiseSpec, rng: &mut SimRng) -> Vec<Complex64> {
    let mut out = symbols.to_vec();
    add_awgn(&mut out, spec, rng);
    out
}
