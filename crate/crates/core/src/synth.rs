//! Chord rendering to PCM audio, plus the loudness- and mean-matched pair
//! construction used for listening comparisons.

use std::fmt;
use std::io::Write;
use std::path::Path;

use crate::proportion::Proportion;

/// Errors from rendering or writing audio.
#[derive(Debug)]
pub enum SynthError {
    /// No voices to render.
    EmptyVoices,
    /// A partial would land on or above the Nyquist frequency.
    NyquistViolation { frequency: f64, sample_rate: u32 },
    /// A non-positive or non-finite parameter.
    BadParameter(&'static str),
    /// File output failed; carries the path for context.
    Io { path: String, source: std::io::Error },
}

impl fmt::Display for SynthError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SynthError::EmptyVoices => write!(f, "a render needs at least one voice"),
            SynthError::NyquistViolation {
                frequency,
                sample_rate,
            } => write!(
                f,
                "partial at {frequency} Hz reaches the Nyquist limit of {} Hz",
                *sample_rate as f64 / 2.0
            ),
            SynthError::BadParameter(what) => write!(f, "bad render parameter: {what}"),
            SynthError::Io { path, source } => write!(f, "writing {path}: {source}"),
        }
    }
}

impl std::error::Error for SynthError {
    fn source(&self) -> Option<&(dyn std::error::Error + 'static)> {
        match self {
            SynthError::Io { source, .. } => Some(source),
            _ => None,
        }
    }
}

/// A chord rendering request.
///
/// Every voice carries `harmonics` partials with amplitude 1/h for the
/// h-th harmonic; one harmonic means pure tones. Voices share equal
/// amplitude and all partials start at zero phase, so a given spec always
/// renders to the same samples.
#[derive(Clone, Debug)]
pub struct RenderSpec {
    pub freqs: Vec<f64>,
    pub duration: f64,
    pub sample_rate: u32,
    /// Peak as a fraction of full scale.
    pub peak: f64,
    pub harmonics: u32,
    /// Linear fade-in/out length at the edges, against clicks.
    pub fade_ms: f64,
}

impl RenderSpec {
    /// Two-second pure tones at 44.1 kHz, half of full scale.
    pub fn pure_tones(freqs: &[f64]) -> RenderSpec {
        RenderSpec {
            freqs: freqs.to_vec(),
            duration: 2.0,
            sample_rate: 44_100,
            peak: 0.5,
            harmonics: 1,
            fade_ms: 10.0,
        }
    }

    fn validate(&self) -> Result<(), SynthError> {
        if self.freqs.is_empty() {
            return Err(SynthError::EmptyVoices);
        }
        if self.duration <= 0.0 || !self.duration.is_finite() {
            return Err(SynthError::BadParameter("duration must be positive"));
        }
        if self.sample_rate == 0 {
            return Err(SynthError::BadParameter("sample rate must be positive"));
        }
        if self.peak.is_nan() || self.peak <= 0.0 || self.peak > 1.0 {
            return Err(SynthError::BadParameter("peak must lie in (0, 1]"));
        }
        if self.harmonics == 0 {
            return Err(SynthError::BadParameter("at least one harmonic"));
        }
        if self.fade_ms < 0.0 || !self.fade_ms.is_finite() {
            return Err(SynthError::BadParameter("fade must be non-negative"));
        }
        let nyquist = self.sample_rate as f64 / 2.0;
        for &f in &self.freqs {
            if f <= 0.0 || !f.is_finite() {
                return Err(SynthError::BadParameter("frequencies must be positive"));
            }
            let top = f * self.harmonics as f64;
            if top >= nyquist {
                return Err(SynthError::NyquistViolation {
                    frequency: top,
                    sample_rate: self.sample_rate,
                });
            }
        }
        Ok(())
    }
}

/// Render a chord to a floating-point sample buffer.
///
/// The buffer is the equal-amplitude sum of all partials, linearly faded
/// at both ends, then scaled so its largest magnitude equals `spec.peak`.
pub fn render_chord(spec: &RenderSpec) -> Result<Vec<f64>, SynthError> {
    spec.validate()?;
    let n = (spec.duration * spec.sample_rate as f64).round() as usize;
    let mut buffer = vec![0.0f64; n];
    let dt = 1.0 / spec.sample_rate as f64;
    for &f in &spec.freqs {
        for h in 1..=spec.harmonics {
            let amp = 1.0 / h as f64;
            let omega = 2.0 * std::f64::consts::PI * f * h as f64;
            for (k, s) in buffer.iter_mut().enumerate() {
                *s += amp * (omega * k as f64 * dt).sin();
            }
        }
    }

    let fade_samples = ((spec.fade_ms / 1000.0) * spec.sample_rate as f64).round() as usize;
    let fade_samples = fade_samples.min(n / 2);
    for k in 0..fade_samples {
        let gain = k as f64 / fade_samples as f64;
        buffer[k] *= gain;
        buffer[n - 1 - k] *= gain;
    }

    let max = buffer.iter().fold(0.0f64, |m, s| m.max(s.abs()));
    if max > 0.0 {
        let scale = spec.peak / max;
        for s in &mut buffer {
            *s *= scale;
        }
    }
    Ok(buffer)
}

/// Scale two proportions so both chords share the same arithmetic-mean
/// frequency, for like-for-like listening.
pub fn matched_pair(
    a: &Proportion,
    b: &Proportion,
    mean: f64,
) -> Result<(Vec<f64>, Vec<f64>), SynthError> {
    if mean <= 0.0 || !mean.is_finite() {
        return Err(SynthError::BadParameter("mean frequency must be positive"));
    }
    let scale_to_mean = |p: &Proportion| -> Vec<f64> {
        let sum: u64 = p.terms().iter().sum();
        let scale = mean * p.voices() as f64 / sum as f64;
        p.terms().iter().map(|&t| t as f64 * scale).collect()
    };
    Ok((scale_to_mean(a), scale_to_mean(b)))
}

/// Quantize one sample to 16-bit PCM, rounding half away from zero.
///
/// Full scale is 32768; the cap keeps the quantized magnitude from ever
/// crossing `peak * 32768`, which rounding alone could exceed by half a
/// step. Positive full scale saturates at the i16 maximum.
fn quantize(sample: f64, peak: f64) -> i16 {
    let limit = (peak * 32768.0).floor().min(32767.0);
    let q = (sample * 32768.0).round().clamp(-limit, limit);
    q as i16
}

/// Encode a buffer as a RIFF/WAVE file: PCM, 16-bit little-endian, mono.
pub fn encode_wav(buffer: &[f64], sample_rate: u32, peak: f64) -> Vec<u8> {
    let data_len = (buffer.len() * 2) as u32;
    let mut out = Vec::with_capacity(44 + data_len as usize);
    out.extend_from_slice(b"RIFF");
    out.extend_from_slice(&(36 + data_len).to_le_bytes());
    out.extend_from_slice(b"WAVE");
    out.extend_from_slice(b"fmt ");
    out.extend_from_slice(&16u32.to_le_bytes()); // fmt chunk size
    out.extend_from_slice(&1u16.to_le_bytes()); // PCM
    out.extend_from_slice(&1u16.to_le_bytes()); // mono
    out.extend_from_slice(&sample_rate.to_le_bytes());
    out.extend_from_slice(&(sample_rate * 2).to_le_bytes()); // byte rate
    out.extend_from_slice(&2u16.to_le_bytes()); // block align
    out.extend_from_slice(&16u16.to_le_bytes()); // bits per sample
    out.extend_from_slice(b"data");
    out.extend_from_slice(&data_len.to_le_bytes());
    for &s in buffer {
        out.extend_from_slice(&quantize(s, peak).to_le_bytes());
    }
    out
}

/// Write a rendered buffer to disk as a WAV file.
pub fn write_wav(
    buffer: &[f64],
    sample_rate: u32,
    peak: f64,
    path: &Path,
) -> Result<(), SynthError> {
    let bytes = encode_wav(buffer, sample_rate, peak);
    let mut file = std::fs::File::create(path).map_err(|source| SynthError::Io {
        path: path.display().to_string(),
        source,
    })?;
    file.write_all(&bytes).map_err(|source| SynthError::Io {
        path: path.display().to_string(),
        source,
    })
}

/// Exact single-bin DFT magnitude of a buffer at an arbitrary frequency,
/// normalized by the buffer length. Rendering tests probe partials and
/// off-partial frequencies with this.
pub fn probe_magnitude(buffer: &[f64], sample_rate: u32, frequency: f64) -> f64 {
    let omega = 2.0 * std::f64::consts::PI * frequency / sample_rate as f64;
    let mut re = 0.0f64;
    let mut im = 0.0f64;
    for (k, &s) in buffer.iter().enumerate() {
        let phase = omega * k as f64;
        re += s * phase.cos();
        im -= s * phase.sin();
    }
    (re * re + im * im).sqrt() / buffer.len() as f64
}

#[cfg(test)]
mod tests {
    use super::*;

    fn prop(terms: &[u64]) -> Proportion {
        Proportion::from_terms(terms).unwrap()
    }

    #[test]
    fn single_sine_peak() {
        let spec = RenderSpec {
            freqs: vec![440.0],
            duration: 0.5,
            ..RenderSpec::pure_tones(&[440.0])
        };
        let buf = render_chord(&spec).unwrap();
        let max = buf.iter().fold(0.0f64, |m, s| m.max(s.abs()));
        assert!((max - 0.5).abs() < 1e-12);
    }

    #[test]
    fn render_is_deterministic() {
        let spec = RenderSpec::pure_tones(&[300.0, 400.0, 500.0]);
        let a = render_chord(&spec).unwrap();
        let b = render_chord(&spec).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn harmonic_amplitudes_fall_off() {
        let spec = RenderSpec {
            freqs: vec![200.0],
            duration: 1.0,
            harmonics: 3,
            ..RenderSpec::pure_tones(&[200.0])
        };
        let buf = render_chord(&spec).unwrap();
        let m1 = probe_magnitude(&buf, spec.sample_rate, 200.0);
        let m2 = probe_magnitude(&buf, spec.sample_rate, 400.0);
        let m3 = probe_magnitude(&buf, spec.sample_rate, 600.0);
        assert!((m2 / m1 - 0.5).abs() < 0.02, "{}", m2 / m1);
        assert!((m3 / m1 - 1.0 / 3.0).abs() < 0.02, "{}", m3 / m1);
    }

    #[test]
    fn nyquist_and_empty_are_rejected() {
        let mut spec = RenderSpec::pure_tones(&[30_000.0]);
        assert!(matches!(
            render_chord(&spec),
            Err(SynthError::NyquistViolation { .. })
        ));
        spec.freqs = vec![];
        assert!(matches!(render_chord(&spec), Err(SynthError::EmptyVoices)));
        // Harmonics push an otherwise safe voice over the limit.
        let spec = RenderSpec {
            harmonics: 60,
            ..RenderSpec::pure_tones(&[440.0])
        };
        assert!(matches!(
            render_chord(&spec),
            Err(SynthError::NyquistViolation { .. })
        ));
    }

    #[test]
    fn matched_pair_examples() {
        let (a, b) = matched_pair(&prop(&[3, 4, 5]), &prop(&[4, 5, 6]), 400.0).unwrap();
        assert_eq!(a, vec![300.0, 400.0, 500.0]);
        assert_eq!(b, vec![320.0, 400.0, 480.0]);

        let (u, _) = matched_pair(&prop(&[1, 1, 1]), &prop(&[1, 1, 1]), 440.0).unwrap();
        assert_eq!(u, vec![440.0, 440.0, 440.0]);

        let (c, _) = matched_pair(&prop(&[2, 3, 4]), &prop(&[1, 1]), 300.0).unwrap();
        assert_eq!(c, vec![200.0, 300.0, 400.0]);
    }

    #[test]
    fn matched_pair_mean_is_exact() {
        let (a, b) = matched_pair(&prop(&[5, 6, 8]), &prop(&[10, 12, 15]), 431.7).unwrap();
        for freqs in [a, b] {
            let mean: f64 = freqs.iter().sum::<f64>() / freqs.len() as f64;
            assert!((mean - 431.7).abs() / 431.7 < 1e-9);
        }
    }

    #[test]
    fn wav_layout() {
        let bytes = encode_wav(&[0.0, 0.25, -0.25, 0.5], 44_100, 0.5);
        assert_eq!(&bytes[0..4], b"RIFF");
        assert_eq!(u32::from_le_bytes(bytes[4..8].try_into().unwrap()), 36 + 8);
        assert_eq!(&bytes[8..12], b"WAVE");
        assert_eq!(&bytes[12..16], b"fmt ");
        assert_eq!(u32::from_le_bytes(bytes[16..20].try_into().unwrap()), 16);
        assert_eq!(u16::from_le_bytes(bytes[20..22].try_into().unwrap()), 1);
        assert_eq!(u16::from_le_bytes(bytes[22..24].try_into().unwrap()), 1);
        assert_eq!(
            u32::from_le_bytes(bytes[24..28].try_into().unwrap()),
            44_100
        );
        assert_eq!(
            u32::from_le_bytes(bytes[28..32].try_into().unwrap()),
            88_200
        );
        assert_eq!(u16::from_le_bytes(bytes[32..34].try_into().unwrap()), 2);
        assert_eq!(u16::from_le_bytes(bytes[34..36].try_into().unwrap()), 16);
        assert_eq!(&bytes[36..40], b"data");
        assert_eq!(u32::from_le_bytes(bytes[40..44].try_into().unwrap()), 8);
        assert_eq!(bytes.len(), 44 + 8);
    }

    #[test]
    fn empty_buffer_wav() {
        let bytes = encode_wav(&[], 44_100, 0.5);
        assert_eq!(bytes.len(), 44);
        assert_eq!(u32::from_le_bytes(bytes[40..44].try_into().unwrap()), 0);
    }

    #[test]
    fn two_second_render_size() {
        let spec = RenderSpec::pure_tones(&[300.0, 400.0, 500.0]);
        let buf = render_chord(&spec).unwrap();
        let bytes = encode_wav(&buf, spec.sample_rate, spec.peak);
        assert_eq!(
            u32::from_le_bytes(bytes[40..44].try_into().unwrap()),
            176_400
        );
    }

    #[test]
    fn quantization_rounds_half_away_and_respects_peak() {
        // 0.5 of full scale quantizes to exactly 16384.
        assert_eq!(quantize(0.5, 0.5), 16384);
        assert_eq!(quantize(-0.5, 0.5), -16384);
        // Rounding is half away from zero below the cap.
        assert_eq!(quantize(1.5 / 32768.0, 1.0), 2);
        assert_eq!(quantize(-1.5 / 32768.0, 1.0), -2);
        // Full scale positive saturates at the i16 maximum.
        assert_eq!(quantize(1.0, 1.0), 32767);

        let spec = RenderSpec::pure_tones(&[299.0, 401.0, 503.0]);
        let buf = render_chord(&spec).unwrap();
        let limit = (spec.peak * 32768.0).floor() as i32;
        for &s in &buf {
            assert!((quantize(s, spec.peak) as i32).abs() <= limit);
        }
    }
}
