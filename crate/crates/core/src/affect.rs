//! Major/minor/symmetric classification and the signed emotional power of
//! a chord.
//!
//! A chord is major when its direct writing is the simpler of the two
//! (smaller product of terms), minor when the inverse writing is simpler,
//! and symmetric when both products agree. The emotional power is the
//! per-voice base-2 logarithm of the main (simpler) product, positive for
//! major and negative for minor.

use std::fmt;

use num_bigint::BigUint;
use num_traits::ToPrimitive;

use crate::proportion::Proportion;

/// The three product-comparison groups of chord proportions.
#[derive(Copy, Clone, PartialEq, Eq, Hash, Debug)]
pub enum Classification {
    Major,
    Minor,
    Symmetric,
}

impl Classification {
    /// Major <-> Minor under mirroring; Symmetric is fixed.
    pub fn opposite(self) -> Classification {
        match self {
            Classification::Major => Classification::Minor,
            Classification::Minor => Classification::Major,
            Classification::Symmetric => Classification::Symmetric,
        }
    }
}

impl fmt::Display for Classification {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Classification::Major => write!(f, "major"),
            Classification::Minor => write!(f, "minor"),
            Classification::Symmetric => write!(f, "symmetric"),
        }
    }
}

/// Amplitude bands of the power scale.
///
/// Perception of the utilitarian quality starts saturating around 2.4 and
/// the scale stops being meaningful somewhere past 3.0.
#[derive(Copy, Clone, PartialEq, Eq, Debug)]
pub enum Band {
    Nominal,
    Saturating,
    OutOfRange,
}

impl fmt::Display for Band {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Band::Nominal => write!(f, "nominal"),
            Band::Saturating => write!(f, "saturating"),
            Band::OutOfRange => write!(f, "out_of_range"),
        }
    }
}

/// Error for a negative amplitude handed to the band lookup.
#[derive(Copy, Clone, PartialEq, Debug)]
pub struct NegativeAmplitude(pub f64);

impl fmt::Display for NegativeAmplitude {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "band lookup takes an amplitude, got {}", self.0)
    }
}

impl std::error::Error for NegativeAmplitude {}

/// Tunable knobs of the power computation. The defaults are the values
/// the model is calibrated for; they are exposed for experimentation.
#[derive(Copy, Clone, Debug)]
pub struct PowerConfig {
    /// Overall gain `k`.
    pub gain: f64,
    /// Logarithm base; 2 lines the scale up with octaves.
    pub log_base: f64,
    /// Strict upper bound on the main/side amplitude gap below which the
    /// chord counts as nearly symmetric.
    pub near_symmetric_threshold: f64,
    /// Band boundaries for the amplitude scale.
    pub bands: BandBoundaries,
}

/// Configurable band edges: saturation onset and upper validity limit.
#[derive(Copy, Clone, Debug)]
pub struct BandBoundaries {
    pub saturation_start: f64,
    pub upper_limit: f64,
}

impl Default for BandBoundaries {
    fn default() -> Self {
        BandBoundaries {
            saturation_start: 2.4,
            upper_limit: 3.0,
        }
    }
}

impl Default for PowerConfig {
    fn default() -> Self {
        PowerConfig {
            gain: 1.0,
            log_base: 2.0,
            near_symmetric_threshold: 0.50,
            bands: BandBoundaries::default(),
        }
    }
}

/// Everything the model says about one chord's emotional quality.
#[derive(Clone, Debug)]
pub struct PowerReport {
    pub classification: Classification,
    /// Signed power of the main (simpler) proportion.
    pub pwe_main: f64,
    /// Signed power of the side proportion; opposite sign, larger amplitude.
    pub pwe_side: f64,
    /// Half-sum of main and side when nearly symmetric, otherwise the main.
    pub pwe_adjusted: f64,
    pub near_symmetric: bool,
    /// The sign only carries meaning from three voices up.
    pub valence_valid: bool,
    pub band: Band,
}

/// Group a proportion by comparing the products of its two writings.
pub fn classify(p: &Proportion) -> Classification {
    let products = p.products();
    match products.p_dir.cmp(&products.p_inv) {
        std::cmp::Ordering::Less => Classification::Major,
        std::cmp::Ordering::Greater => Classification::Minor,
        std::cmp::Ordering::Equal => Classification::Symmetric,
    }
}

fn amplitude(product: &BigUint, voices: usize, cfg: &PowerConfig) -> f64 {
    let x = product.to_f64().unwrap_or(f64::INFINITY);
    cfg.gain * x.log2() / cfg.log_base.log2() / voices as f64
}

/// Classify a band by amplitude. Rejects negative input; the boundaries are
/// inclusive on the saturating side.
pub fn saturation_band(
    amplitude: f64,
    bands: &BandBoundaries,
) -> Result<Band, NegativeAmplitude> {
    if amplitude < 0.0 || amplitude.is_nan() {
        return Err(NegativeAmplitude(amplitude));
    }
    Ok(if amplitude < bands.saturation_start {
        Band::Nominal
    } else if amplitude <= bands.upper_limit {
        Band::Saturating
    } else {
        Band::OutOfRange
    })
}

/// Compute the full power report with the default configuration.
pub fn emotional_power(p: &Proportion) -> PowerReport {
    emotional_power_with(p, &PowerConfig::default())
}

/// Compute the full power report under an explicit configuration.
pub fn emotional_power_with(p: &Proportion, cfg: &PowerConfig) -> PowerReport {
    let products = p.products();
    let voices = p.voices();
    let classification = match products.p_dir.cmp(&products.p_inv) {
        std::cmp::Ordering::Less => Classification::Major,
        std::cmp::Ordering::Greater => Classification::Minor,
        std::cmp::Ordering::Equal => Classification::Symmetric,
    };

    // Amplitudes come from the ordered pair of products so that the main
    // amplitude can never exceed the side amplitude, not even by rounding.
    let (small, large) = if products.p_dir <= products.p_inv {
        (&products.p_dir, &products.p_inv)
    } else {
        (&products.p_inv, &products.p_dir)
    };
    let amp_main = amplitude(small, voices, cfg);
    let amp_side = amplitude(large, voices, cfg);

    let (pwe_main, pwe_side) = match classification {
        Classification::Major => (amp_main, -amp_side),
        Classification::Minor => (-amp_main, amp_side),
        // Same product both ways; negating the identical float keeps the
        // half-sum at exactly zero.
        Classification::Symmetric => (amp_main, -amp_main),
    };

    let near_symmetric = (amp_side - amp_main) < cfg.near_symmetric_threshold;
    let pwe_adjusted = if near_symmetric {
        (pwe_main + pwe_side) / 2.0
    } else {
        pwe_main
    };

    let band = saturation_band(amp_main, &cfg.bands).expect("amplitude of a product is >= 0");

    PowerReport {
        classification,
        pwe_main,
        pwe_side,
        pwe_adjusted,
        near_symmetric,
        valence_valid: voices >= 3,
        band,
    }
}
