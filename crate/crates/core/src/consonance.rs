//! Interval consonance ranking and whole-chord consonance flags.
//!
//! Two-voice intervals are ranked against a fixed list of small-integer
//! ratios ordered from most to least consonant, with a short companion
//! list of recognized dissonances. Lookup happens after octave reduction,
//! so a twelfth ranks like a fifth. Anything on neither list is treated
//! as dissonant: the ranking is known to be incomplete on the dissonant
//! side, and the chords it needs to label contain intervals like 7/4 that
//! no list mentions.

use std::fmt;

use crate::proportion::Proportion;
use crate::rational::Rational;

/// Ratios in decreasing order of consonance; position is the rank.
pub const CONSONANT_RATIOS: [(u64, u64); 8] = [
    (1, 1),
    (2, 1),
    (3, 2),
    (4, 3),
    (5, 4),
    (8, 5),
    (6, 5),
    (5, 3),
];

/// Recognized dissonances, in the customary order.
pub const DISSONANT_RATIOS: [(u64, u64); 5] = [(9, 5), (9, 8), (7, 5), (15, 8), (16, 15)];

/// Verdict for a single interval after octave reduction.
#[derive(Copy, Clone, PartialEq, Eq, Debug)]
pub enum Verdict {
    /// On the consonance list; 0 is the unison, 7 the major sixth.
    Consonant { rank: u8 },
    /// On the recognized dissonance list.
    DissonantListed,
    /// On neither list; treated as dissonant.
    DissonantUnlisted,
}

impl Verdict {
    pub fn is_consonant(&self) -> bool {
        matches!(self, Verdict::Consonant { .. })
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::Consonant { rank } => write!(f, "consonant(rank {rank})"),
            Verdict::DissonantListed => write!(f, "dissonant(listed)"),
            Verdict::DissonantUnlisted => write!(f, "dissonant(unlisted)"),
        }
    }
}

/// A ranked interval: the ratio as given, its octave-reduced form, and the
/// verdict for the reduced form.
#[derive(Copy, Clone, PartialEq, Eq, Debug)]
pub struct IntervalQuality {
    pub ratio: Rational,
    pub reduced: Rational,
    pub verdict: Verdict,
}

/// Rank an interval. The ratio is oriented upward and folded into [1, 2]
/// before lookup, so octave shifts do not change the verdict.
pub fn interval_quality(ratio: Rational) -> IntervalQuality {
    let reduced = ratio.octave_reduced();
    let key = (reduced.num(), reduced.den());
    let verdict = if let Some(rank) = CONSONANT_RATIOS.iter().position(|&c| c == key) {
        Verdict::Consonant { rank: rank as u8 }
    } else if DISSONANT_RATIOS.contains(&key) {
        Verdict::DissonantListed
    } else {
        Verdict::DissonantUnlisted
    };
    IntervalQuality {
        ratio,
        reduced,
        verdict,
    }
}

/// The quality of every pairwise interval of a chord, upper voice over
/// lower, in (lower, upper) index order.
pub fn chord_intervals(p: &Proportion) -> Vec<(usize, usize, IntervalQuality)> {
    let terms = p.terms();
    let mut out = Vec::new();
    for i in 0..terms.len() {
        for j in (i + 1)..terms.len() {
            let ratio = Rational::new(terms[j], terms[i]).expect("terms are positive");
            out.push((i, j, interval_quality(ratio)));
        }
    }
    out
}

/// A chord is consonant exactly when every pairwise interval is.
pub fn chord_consonant(p: &Proportion) -> (bool, Vec<(usize, usize, IntervalQuality)>) {
    let detail = chord_intervals(p);
    let all = detail.iter().all(|(_, _, q)| q.verdict.is_consonant());
    (all, detail)
}
