//! Small-integer proportion extraction from measured pitches.
//!
//! Given voice frequencies, find the proportion of smallest integers whose
//! pairwise ratios all sit within a relative tolerance of the measured
//! pairwise ratios. The search enumerates candidate tuples anchored on the
//! lowest voice, pruning each further voice to the integer window the
//! tolerance allows against every already-chosen voice, so it is exhaustive
//! over terms up to the configured ceiling yet cheap at musical scale.
//!
//! Among the tuples that fit, the winner is the one whose two writings are
//! jointly simplest: smallest common period (the lcm of the terms, which
//! orders candidates exactly like the product of the two writings' term
//! products), then smallest main product, then smallest direct product,
//! then lexicographic order. The first two keys are mirror-invariant,
//! which keeps the choice consistent between a chord and its mirror.

use std::fmt;

use num_integer::Integer;

use crate::proportion::Proportion;

/// Limits within which the tolerance stays meaningful: above ~6% relative
/// error the window spans more than a semitone and neighbouring proportions
/// blur together.
pub const MAX_TOLERANCE: f64 = 0.06;

/// Ceiling on the term search ceiling. Selection keys use saturating
/// 128-bit arithmetic, so the choice stays deterministic even at the cap,
/// but anything near it is far outside musical use.
pub const MAX_TERM_CEILING: u64 = 4096;

/// Hard cap on voices per chord.
pub const MAX_VOICES_CEILING: usize = 16;

/// Errors from configuration or from the search itself.
#[derive(Clone, PartialEq, Debug)]
pub enum RationalizeError {
    /// No candidate proportion satisfies every pairwise tolerance within
    /// the term ceiling. A signal, not a crash: callers may render the
    /// input as unclassified.
    NoProportionFound,
    /// Empty frequency list.
    NoVoices,
    /// More voices than the configuration allows.
    TooManyVoices { got: usize, max: usize },
    /// A frequency was zero, negative or not finite.
    BadFrequency(f64),
    /// Configuration outside the supported ranges.
    BadConfig(&'static str),
}

impl fmt::Display for RationalizeError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RationalizeError::NoProportionFound => {
                write!(f, "no small-integer proportion fits within the tolerance")
            }
            RationalizeError::NoVoices => write!(f, "at least one frequency is required"),
            RationalizeError::TooManyVoices { got, max } => {
                write!(f, "{got} voices exceed the configured maximum of {max}")
            }
            RationalizeError::BadFrequency(v) => {
                write!(f, "frequencies must be positive and finite, got {v}")
            }
            RationalizeError::BadConfig(what) => write!(f, "bad configuration: {what}"),
        }
    }
}

impl std::error::Error for RationalizeError {}

/// Validated search parameters.
#[derive(Copy, Clone, Debug)]
pub struct RationalizeConfig {
    tolerance: f64,
    max_term: u64,
    max_voices: usize,
}

impl Default for RationalizeConfig {
    fn default() -> Self {
        RationalizeConfig {
            tolerance: 0.01,
            max_term: 64,
            max_voices: 8,
        }
    }
}

impl RationalizeConfig {
    pub fn new(
        tolerance: f64,
        max_term: u64,
        max_voices: usize,
    ) -> Result<RationalizeConfig, RationalizeError> {
        if tolerance.is_nan() || tolerance <= 0.0 || tolerance >= MAX_TOLERANCE {
            return Err(RationalizeError::BadConfig(
                "tolerance must lie strictly between 0 and 0.06",
            ));
        }
        if !(2..=MAX_TERM_CEILING).contains(&max_term) {
            return Err(RationalizeError::BadConfig("max_term out of range"));
        }
        if !(1..=MAX_VOICES_CEILING).contains(&max_voices) {
            return Err(RationalizeError::BadConfig("max_voices out of range"));
        }
        Ok(RationalizeConfig {
            tolerance,
            max_term,
            max_voices,
        })
    }

    /// Default ceilings with a custom tolerance.
    pub fn with_tolerance(tolerance: f64) -> Result<RationalizeConfig, RationalizeError> {
        let d = RationalizeConfig::default();
        RationalizeConfig::new(tolerance, d.max_term, d.max_voices)
    }

    pub fn tolerance(&self) -> f64 {
        self.tolerance
    }

    pub fn max_term(&self) -> u64 {
        self.max_term
    }

    pub fn max_voices(&self) -> usize {
        self.max_voices
    }
}

/// 12-TET frequencies from semitone offsets above a root.
pub fn semitones_to_freqs(offsets: &[f64], root: f64) -> Result<Vec<f64>, RationalizeError> {
    if root <= 0.0 || !root.is_finite() {
        return Err(RationalizeError::BadFrequency(root));
    }
    let mut out = Vec::with_capacity(offsets.len());
    for &o in offsets {
        if !o.is_finite() {
            return Err(RationalizeError::BadFrequency(o));
        }
        out.push(root * (o / 12.0).exp2());
    }
    Ok(out)
}

fn saturating_lcm(a: u128, b: u128) -> u128 {
    (a / a.gcd(&b)).saturating_mul(b)
}

/// Selection key of a candidate tuple. Lower wins.
fn objective_key(terms: &[u64]) -> (u128, u128, u128) {
    let mut lcm: u128 = 1;
    let mut p_dir: u128 = 1;
    for &t in terms {
        lcm = saturating_lcm(lcm, t as u128);
        p_dir = p_dir.saturating_mul(t as u128);
    }
    let mut p_inv: u128 = 1;
    for &t in terms {
        p_inv = p_inv.saturating_mul(lcm / t as u128);
    }
    (lcm, p_dir.min(p_inv), p_dir)
}

struct Search<'a> {
    ratios: &'a [Vec<f64>],
    tol: f64,
    max_term: u64,
    voices: usize,
    best: Option<(Vec<u64>, (u128, u128, u128))>,
}

impl Search<'_> {
    fn consider(&mut self, terms: &[u64]) {
        let mut g = terms[0];
        for &t in &terms[1..] {
            g = g.gcd(&t);
        }
        if g != 1 {
            // The reduced form is enumerated on its own and always wins.
            return;
        }
        let key = objective_key(terms);
        match &self.best {
            Some((held, held_key)) if (*held_key, held.as_slice()) <= (key, terms) => {}
            _ => self.best = Some((terms.to_vec(), key)),
        }
    }

    fn extend(&mut self, prefix: &mut Vec<u64>) {
        let k = prefix.len();
        if k == self.voices {
            self.consider(prefix);
            return;
        }
        // Window for voice k against the anchor voice, widened a step each
        // way so float rounding cannot drop a boundary candidate; exact
        // checks below settle membership.
        let target = prefix[0] as f64 * self.ratios[0][k];
        let lo = ((target * (1.0 - self.tol)).floor() as i64 - 1).max(prefix[k - 1] as i64);
        let hi = ((target * (1.0 + self.tol)).ceil() as i64 + 1).min(self.max_term as i64);
        let mut c = lo.max(1);
        while c <= hi {
            let cand = c as u64;
            let ok = (0..k).all(|i| {
                let ratio = cand as f64 / prefix[i] as f64;
                let want = self.ratios[i][k];
                (ratio - want).abs() <= self.tol * want
            });
            if ok {
                prefix.push(cand);
                self.extend(prefix);
                prefix.pop();
            }
            c += 1;
        }
    }
}

/// Find the simplest proportion matching the given frequencies.
///
/// Every pairwise ratio of the result is within `cfg.tolerance` (relative)
/// of the corresponding measured ratio, all terms are at most
/// `cfg.max_term`, and the selection among fitting tuples is total, so the
/// result is deterministic.
pub fn rationalize(
    freqs: &[f64],
    cfg: &RationalizeConfig,
) -> Result<Proportion, RationalizeError> {
    if freqs.is_empty() {
        return Err(RationalizeError::NoVoices);
    }
    if freqs.len() > cfg.max_voices {
        return Err(RationalizeError::TooManyVoices {
            got: freqs.len(),
            max: cfg.max_voices,
        });
    }
    for &f in freqs {
        if f <= 0.0 || !f.is_finite() {
            return Err(RationalizeError::BadFrequency(f));
        }
    }
    let mut sorted = freqs.to_vec();
    sorted.sort_by(|a, b| a.partial_cmp(b).expect("finite"));

    let voices = sorted.len();
    if voices == 1 {
        return Ok(Proportion::from_terms(&[1]).expect("unit proportion"));
    }

    let ratios: Vec<Vec<f64>> = (0..voices)
        .map(|i| (0..voices).map(|j| sorted[j] / sorted[i]).collect())
        .collect();

    let mut search = Search {
        ratios: &ratios,
        tol: cfg.tolerance,
        max_term: cfg.max_term,
        voices,
        best: None,
    };
    for anchor in 1..=cfg.max_term {
        let mut prefix = vec![anchor];
        search.extend(&mut prefix);
    }
    match search.best {
        Some((terms, _)) => Ok(Proportion::from_terms(&terms).expect("nonempty, no zeros")),
        None => Err(RationalizeError::NoProportionFound),
    }
}
