//! Corpus curation: chapter splitting, joint utterances, loudness,
//! pause-marker validation, loss-based cleaning and the output chain.

mod clean;
mod joins;
mod loudness;
mod output;
mod pauses;
mod record;
mod split;
mod vad;

pub use clean::{clean_by_loss, parse_losses, CleaningReport, DEFAULT_CLEAN_THRESHOLD, DEFAULT_CLEAN_WINDOW};
pub use joins::{make_joint_utterances, plan_joints, render_joint, JoinConfig, JointPlan};
pub use loudness::{measure_level, measure_loudness, normalize_loudness, LevelUnit, Normalized, PeakMode};
pub use output::{finalize_output, lowpass_first_order, repeat_samples, to_int16, OUTPUT_CUTOFF_HZ, OUTPUT_RATE};
pub use pauses::{validate_pause_markers, MarkerDecision, PauseConfig, PauseValidation, PAUSE_MARKERS};
pub use record::{read_manifest, write_manifest, UtteranceRecord};
pub use split::{split_chapters, Span};
pub use vad::{energy_vad, format_vad_labels, parse_vad_labels, VadConfig};

#[derive(Debug, thiserror::Error)]
pub enum CorpusError {
    #[error("audio has {samples} samples, at least {needed} needed")]
    TooShort { samples: usize, needed: usize },
    #[error("signal is below the absolute gate; loudness is unmeasurable")]
    Unmeasurable,
    #[error("span {index} overlaps or precedes its predecessor")]
    OverlappingSpans { index: usize },
    #[error("span {index} lies outside the audio")]
    SpanOutOfBounds { index: usize },
    #[error("cleaning needs at least {needed} samples, got {got}")]
    TooFewSamples { got: usize, needed: usize },
    #[error("loss for {utt_id} is not finite")]
    NonFiniteLoss { utt_id: String },
    #[error("{what}: expected {expected}, got {got}")]
    LengthMismatch { what: &'static str, expected: usize, got: usize },
    #[error("invalid record {utt_id}: {message}")]
    InvalidRecord { utt_id: String, message: String },
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error(transparent)]
    Prosody(#[from] crate::prosody::ProsodyError),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}
