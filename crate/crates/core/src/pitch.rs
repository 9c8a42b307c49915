//! Pitch input forms and note-name parsing: `C4`, `F#3`, `Bb-1` and the
//! like, 12-TET at A4 = 440.

use std::fmt;

use crate::rationalize::{semitones_to_freqs, RationalizeError};

/// Reference frequency for A4.
pub const A4_HZ: f64 = 440.0;

/// Parse failure with the byte position of the offending character.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct PitchParseError {
    name: String,
    position: usize,
    reason: &'static str,
}

impl PitchParseError {
    pub fn position(&self) -> usize {
        self.position
    }
}

impl fmt::Display for PitchParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "bad pitch name {:?} at position {}: {}",
            self.name, self.position, self.reason
        )
    }
}

impl std::error::Error for PitchParseError {}

/// A chord's pitches in one of the accepted input forms.
#[derive(Clone, PartialEq, Debug)]
pub enum PitchInput {
    /// Absolute voice frequencies in Hz.
    Frequencies(Vec<f64>),
    /// 12-TET semitone offsets above a root chosen at resolution time.
    Semitones(Vec<f64>),
    /// Note names such as `C4`.
    Names(Vec<String>),
}

/// Error from resolving a [`PitchInput`] into frequencies.
#[derive(Clone, PartialEq, Debug)]
pub enum PitchInputError {
    Name(PitchParseError),
    Frequency(RationalizeError),
}

impl fmt::Display for PitchInputError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PitchInputError::Name(e) => write!(f, "{e}"),
            PitchInputError::Frequency(e) => write!(f, "{e}"),
        }
    }
}

impl std::error::Error for PitchInputError {}

impl PitchInput {
    /// Resolve to absolute frequencies. The root only matters for the
    /// semitone form.
    pub fn frequencies(&self, root: f64) -> Result<Vec<f64>, PitchInputError> {
        match self {
            PitchInput::Frequencies(freqs) => Ok(freqs.clone()),
            PitchInput::Semitones(offsets) => {
                semitones_to_freqs(offsets, root).map_err(PitchInputError::Frequency)
            }
            PitchInput::Names(names) => names
                .iter()
                .map(|n| parse_pitch(n).map_err(PitchInputError::Name))
                .collect(),
        }
    }
}

/// Frequency of a named pitch: letter, optional `#` or `b`, octave −1..9.
pub fn parse_pitch(name: &str) -> Result<f64, PitchParseError> {
    let err = |position: usize, reason: &'static str| PitchParseError {
        name: name.to_string(),
        position,
        reason,
    };
    let s = name.trim();
    let mut chars = s.char_indices();
    let (_, letter) = chars.next().ok_or_else(|| err(0, "empty name"))?;
    let base: i32 = match letter.to_ascii_uppercase() {
        'C' => 0,
        'D' => 2,
        'E' => 4,
        'F' => 5,
        'G' => 7,
        'A' => 9,
        'B' => 11,
        _ => return Err(err(0, "expected a note letter A..G")),
    };
    let rest = &s[letter.len_utf8()..];
    let (accidental, octave_text, octave_at) = match rest.chars().next() {
        Some('#') => (1, &rest[1..], letter.len_utf8() + 1),
        Some('b') => (-1, &rest[1..], letter.len_utf8() + 1),
        _ => (0, rest, letter.len_utf8()),
    };
    if octave_text.is_empty() {
        return Err(err(octave_at, "missing octave number"));
    }
    let octave: i32 = octave_text
        .parse()
        .map_err(|_| err(octave_at, "expected an octave number"))?;
    if !(-1..=9).contains(&octave) {
        return Err(err(octave_at, "octave must lie in -1..9"));
    }
    // Semitone index with C-1 = 0; A4 lands on 69.
    let index = (octave + 1) * 12 + base + accidental;
    Ok(A4_HZ * (((index - 69) as f64) / 12.0).exp2())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reference_pitches() {
        assert_eq!(parse_pitch("A4").unwrap(), 440.0);
        assert!((parse_pitch("A5").unwrap() - 880.0).abs() < 1e-9);
        assert!((parse_pitch("C4").unwrap() - 261.6256).abs() < 1e-4);
    }

    #[test]
    fn accidentals() {
        // C#4 and Db4 are the same key in 12-TET.
        assert_eq!(parse_pitch("C#4").unwrap(), parse_pitch("Db4").unwrap());
        assert!((parse_pitch("Bb3").unwrap() - parse_pitch("A#3").unwrap()).abs() < 1e-12);
    }

    #[test]
    fn octave_range() {
        assert!(parse_pitch("C-1").is_ok());
        assert!(parse_pitch("B9").is_ok());
        assert!(parse_pitch("C10").is_err());
        assert!(parse_pitch("C-2").is_err());
    }

    #[test]
    fn lowercase_letters_accepted() {
        assert_eq!(parse_pitch("a4").unwrap(), 440.0);
    }

    #[test]
    fn errors_carry_position() {
        assert_eq!(parse_pitch("H4").unwrap_err().position(), 0);
        assert_eq!(parse_pitch("C#x").unwrap_err().position(), 2);
        assert_eq!(parse_pitch("C").unwrap_err().position(), 1);
        assert!(parse_pitch("").is_err());
    }

    #[test]
    fn input_forms_resolve_to_matching_frequencies() {
        let by_name = PitchInput::Names(vec!["C4".into(), "E4".into(), "G4".into()])
            .frequencies(0.0)
            .unwrap();
        let by_semitone = PitchInput::Semitones(vec![0.0, 4.0, 7.0])
            .frequencies(parse_pitch("C4").unwrap())
            .unwrap();
        for (a, b) in by_name.iter().zip(&by_semitone) {
            assert!((a - b).abs() < 1e-9);
        }
        let direct = PitchInput::Frequencies(vec![440.0]).frequencies(1.0).unwrap();
        assert_eq!(direct, vec![440.0]);
        assert!(PitchInput::Names(vec!["X1".into()]).frequencies(1.0).is_err());
        assert!(PitchInput::Semitones(vec![0.0]).frequencies(-1.0).is_err());
    }
}
