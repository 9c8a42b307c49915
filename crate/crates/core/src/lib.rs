//! Pitch-proportion analysis of musical chords.
//!
//! A chord's relative pitches reduce to a proportion of small integers
//! with two equivalent writings, direct and inverse. Comparing the
//! complexity of the two writings classifies the chord as major, minor or
//! symmetric, and the per-voice base-2 logarithm of the simpler writing's
//! product gives a signed emotional power for the chord. Around that core
//! sit a tolerance-based rationalizer for tempered or measured pitches, a
//! consonance ranking for the pairwise intervals, a sweep of the 12-TET
//! triad space, and a small synthesizer for rendering chords to WAV files
//! for listening comparisons.

pub mod affect;
pub mod consonance;
pub mod emotion;
pub mod grid;
pub mod pitch;
pub mod proportion;
pub mod rational;
pub mod rationalize;
pub mod synth;

pub use affect::{
    classify, emotional_power, emotional_power_with, saturation_band, Band, BandBoundaries,
    Classification, PowerConfig, PowerReport,
};
pub use consonance::{chord_consonant, chord_intervals, interval_quality, IntervalQuality, Verdict};
pub use emotion::{utilitarian_power, GoalSample};
pub use grid::{
    default_grid_config, emit_grid, generate_grid, CellAnalysis, GridCell, GridError, GridFormat,
};
pub use pitch::{parse_pitch, PitchInput, PitchInputError, PitchParseError};
pub use proportion::{Proportion, ProportionError, ProportionParseError, ProportionProducts};
pub use rational::ZeroRational;
pub use rational::Rational;
pub use rationalize::{rationalize, semitones_to_freqs, RationalizeConfig, RationalizeError};
pub use synth::{
    encode_wav, matched_pair, probe_magnitude, render_chord, write_wav, RenderSpec, SynthError,
};
