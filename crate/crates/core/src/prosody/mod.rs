//! Frame-level spectral and prosodic features and their phone-level
//! summaries.

mod frames;
mod mel;
mod phone;
mod pitch;

pub use frames::{extract_energy, hann_window, FrameTrack, TrackKind};
pub use mel::{hz_to_mel, mel_filterbank, mel_spectrogram, mel_to_hz, MelConfig, MelExtractor};
pub use phone::{average_per_phone, normalize_per_utterance, phone_prosody, zero_silences, NormMode, PhoneProsody};
pub use pitch::{extract_pitch, PitchConfig};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ProsodyError {
    #[error("audio is empty")]
    EmptyAudio,
    #[error("audio is {got} Hz, configuration expects {expected} Hz")]
    SampleRateMismatch { expected: u32, got: u32 },
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("lengths differ: expected {expected}, got {got}")]
    LengthMismatch { expected: usize, got: usize },
}
