//! Mono WAV input and output.

use std::path::Path;

#[derive(Debug, thiserror::Error)]
pub enum AudioError {
    #[error("{path}: {source}")]
    Wav { path: String, source: hound::Error },
    #[error("{path}: expected mono audio, found {channels} channels")]
    NotMono { path: String, channels: u16 },
    #[error("{path}: unsupported sample format {bits}-bit {format:?}")]
    UnsupportedFormat { path: String, bits: u16, format: hound::SampleFormat },
}

/// Samples in `[-1, 1]` with their rate.
#[derive(Debug, Clone, PartialEq)]
pub struct Audio {
    pub samples: Vec<f64>,
    pub sample_rate: u32,
}

impl Audio {
    pub fn duration_seconds(&self) -> f64 {
        self.samples.len() as f64 / self.sample_rate as f64
    }
}

/// Reads 16-bit PCM or 32-bit float mono WAV.
pub fn read_wav(path: impl AsRef<Path>) -> Result<Audio, AudioError> {
    let path = path.as_ref();
    let name = path.display().to_string();
    let wav = |source| AudioError::Wav { path: name.clone(), source };
    let mut reader = hound::WavReader::open(path).map_err(wav)?;
    let spec = reader.spec();
    if spec.channels != 1 {
        return Err(AudioError::NotMono { path: name, channels: spec.channels });
    }
    let samples = match (spec.sample_format, spec.bits_per_sample) {
        (hound::SampleFormat::Int, 16) => {
            reader.samples::<i16>().map(|s| s.map(|v| v as f64 / 32768.0)).collect::<Result<Vec<_>, _>>()
        }
        (hound::SampleFormat::Float, 32) => {
            reader.samples::<f32>().map(|s| s.map(f64::from)).collect::<Result<Vec<_>, _>>()
        }
        (format, bits) => return Err(AudioError::UnsupportedFormat { path: name, bits, format }),
    }
    .map_err(wav)?;
    Ok(Audio { samples, sample_rate: spec.sample_rate })
}

pub fn write_wav_i16(path: impl AsRef<Path>, samples: &[i16], sample_rate: u32) -> Result<(), AudioError> {
    let path = path.as_ref();
    let wav = |source| AudioError::Wav { path: path.display().to_string(), source };
    let spec = hound::WavSpec { channels: 1, sample_rate, bits_per_sample: 16, sample_format: hound::SampleFormat::Int };
    let mut w = hound::WavWriter::create(path, spec).map_err(wav)?;
    for &s in samples {
        w.write_sample(s).map_err(wav)?;
    }
    w.finalize().map_err(wav)
}

pub fn write_wav_f32(path: impl AsRef<Path>, samples: &[f64], sample_rate: u32) -> Result<(), AudioError> {
    let path = path.as_ref();
    let wav = |source| AudioError::Wav { path: path.display().to_string(), source };
    let spec =
        hound::WavSpec { channels: 1, sample_rate, bits_per_sample: 32, sample_format: hound::SampleFormat::Float };
    let mut w = hound::WavWriter::create(path, spec).map_err(wav)?;
    for &s in samples {
        w.write_sample(s as f32).map_err(wav)?;
    }
    w.finalize().map_err(wav)
}
