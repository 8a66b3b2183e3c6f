//! Gray-coded MPSK and square MQAM mapping with hard-decision demapping.
//!
//! Bits are grouped most-significant first. Every constellation is scaled to
//! unit average symbol energy, and points are stored by label so that
//! `points[b]` is the symbol transmitted for the bit pattern `b`.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Family {
    Psk,
    Qam,
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Family::Psk => "psk",
            Family::Qam => "qam",
        })
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "psk" => Ok(Family::Psk),
            "qam" => Ok(Family::Qam),
            other => Err(invalid(format!("unknown modulation family '{other}'"))),
        }
    }
}

/// Modulation family and order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "SchemeRepr", into = "SchemeRepr")]
pub struct ModScheme {
    family: Family,
    m: u32,
}

impl ModScheme {
    /// PSK needs `m` a power of two, at least 2. QAM needs an even power of two
    /// (square grids only).
    pub fn new(family: Family, m: u32) -> Result<Self> {
        if m < 2 || !m.is_power_of_two() {
            return Err(invalid(format!(
                "order must be a power of two >= 2, got {m}"
            )));
        }
        if family == Family::Qam && !m.trailing_zeros().is_multiple_of(2) {
            return Err(invalid(format!(
                "QAM order must be an even power of two, got {m}"
            )));
        }
        Ok(Self { family, m })
    }

    pub fn psk(m: u32) -> Result<Self> {
        Self::new(Family::Psk, m)
    }

    pub fn qam(m: u32) -> Result<Self> {
        Self::new(Family::Qam, m)
    }

    pub fn family(&self) -> Family {
        self.family
    }

    pub fn order(&self) -> u32 {
        self.m
    }

    pub fn bits_per_symbol(&self) -> usize {
        self.m.trailing_zeros() as usize
    }
}

#[derive(Serialize, Deserialize)]
struct SchemeRepr {
    family: Family,
    m: u32,
}

impl TryFrom<SchemeRepr> for ModScheme {
    type Error = Error;

    fn try_from(r: SchemeRepr) -> Result<Self> {
        ModScheme::new(r.family, r.m)
    }
}

impl From<ModScheme> for SchemeRepr {
    fn from(s: ModScheme) -> Self {
        SchemeRepr {
            family: s.family,
            m: s.m,
        }
    }
}

impl fmt::Display for ModScheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}-{}", self.m, self.family.to_string().to_uppercase())
    }
}

// Quarter turns are written exactly so BPSK/QPSK points carry no rounding residue.
fn ring_point(p: u32, m: u32) -> Complex64 {
    if (4 * p).is_multiple_of(m) {
        match 4 * p / m {
            0 => Complex64::new(1.0, 0.0),
            1 => Complex64::new(0.0, 1.0),
            2 => Complex64::new(-1.0, 0.0),
            _ => Complex64::new(0.0, -1.0),
        }
    } else {
        Complex64::from_polar(1.0, 2.0 * PI * f64::from(p) / f64::from(m))
    }
}

#[inline]
fn gray(i: u32) -> u32 {
    i ^ (i >> 1)
}

/// Symbol points indexed by their bit label.
#[derive(Debug, Clone, PartialEq)]
pub struct Constellation {
    scheme: ModScheme,
    points: Vec<Complex64>,
}

impl Constellation {
    pub fn new(scheme: ModScheme) -> Self {
        let m = scheme.order();
        let mut points = vec![Complex64::new(0.0, 0.0); m as usize];
        match scheme.family() {
            Family::Psk => {
                // position p around the ring carries label gray(p)
                for p in 0..m {
                    points[gray(p) as usize] = ring_point(p, m);
                }
            }
            Family::Qam => {
                let half_bits = scheme.bits_per_symbol() / 2;
                let side = 1u32 << half_bits;
                let scale = (2.0 * f64::from(m - 1) / 3.0).sqrt();
                let level = |p: u32| f64::from(2 * p) - f64::from(side - 1);
                for pi in 0..side {
                    for pq in 0..side {
                        let label = (gray(pi) << half_bits) | gray(pq);
                        points[label as usize] = Complex64::new(level(pi), level(pq)) / scale;
                    }
                }
            }
        }
        Self { scheme, points }
    }

    pub fn scheme(&self) -> ModScheme {
        self.scheme
    }

    pub fn points(&self) -> &[Complex64] {
        &self.points
    }

    pub fn bits_per_symbol(&self) -> usize {
        self.scheme.bits_per_symbol()
    }

    /// Mean of `|p|²` over all points.
    pub fn mean_energy(&self) -> f64 {
        self.points.iter().map(|p| p.norm_sqr()).sum::<f64>() / self.points.len() as f64
    }

    /// Label of the Euclidean-nearest point; ties go to the lowest label.
    #[inline]
    pub fn nearest(&self, s: Complex64) -> usize {
        let mut best = 0;
        let mut best_d = f64::INFINITY;
        for (label, p) in self.points.iter().enumerate() {
            let d = (s - p).norm_sqr();
            if d < best_d {
                best = label;
                best_d = d;
            }
        }
        best
    }

    /// Maps bits (MSB first per symbol) to symbols.
    pub fn map_bits(&self, bits: &[bool]) -> Result<Vec<Complex64>> {
        let k = self.bits_per_symbol();
        if !bits.len().is_multiple_of(k) {
            return Err(Error::InvalidLength {
                expected: bits.len().div_ceil(k) * k,
                actual: bits.len(),
            });
        }
        Ok(bits
            .chunks_exact(k)
            .map(|chunk| self.points[bits_to_label(chunk)])
            .collect())
    }

    /// Hard-decision demapping to the nearest point's label.
    pub fn demap(&self, symbols: &[Complex64]) -> Vec<bool> {
        let mut out = Vec::with_capacity(symbols.len() * self.bits_per_symbol());
        self.demap_into(symbols, &mut out);
        out
    }

    pub(crate) fn demap_into(&self, symbols: &[Complex64], out: &mut Vec<bool>) {
        let k = self.bits_per_symbol();
        for &s in symbols {
            push_label_bits(self.nearest(s), k, out);
        }
    }
}

#[inline]
pub(crate) fn bits_to_label(bits: &[bool]) -> usize {
    bits.iter().fold(0, |acc, &b| (acc << 1) | usize::from(b))
}

#[inline]
pub(crate) fn push_label_bits(label: usize, k: usize, out: &mut Vec<bool>) {
    for shift in (0..k).rev() {
        out.push((label >> shift) & 1 == 1);
    }
}

/// Hamming distance between two equal-length bit sequences.
pub fn count_bit_errors(sent: &[bool], received: &[bool]) -> Result<u64> {
    if sent.len() != received.len() {
        return Err(Error::InvalidLength {
            expected: sent.len(),
            actual: received.len(),
        });
    }
    Ok(sent.iter().zip(received).filter(|(a, b)| a != b).count() as u64)
}
