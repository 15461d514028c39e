//! Data preparation for expressive French TTS: phonemization with homograph
//! resolution, forced alignment, prosody extraction and corpus curation.
//!
//! Numeric code is generic over [`Real`] (`f32` or `f64`); the aliases at
//! the crate root pick `f64` unless the name says otherwise.

pub mod alignment;
pub mod audio;
pub mod container;
pub mod corpus;
pub mod frontend;
pub mod homograph;
pub mod matrix;
pub mod phoneme;
pub mod prosody;
pub mod scalar;
pub mod synth;
pub mod text;

pub use matrix::{Matrix, ShapeError};
pub use scalar::Real;

pub type ScoreMatrix = Matrix<f64>;
pub type Posteriogram = alignment::Posteriogram<f64>;
pub type PosteriogramF32 = alignment::Posteriogram<f32>;
pub type AlignmentPath = alignment::AlignmentPath<f64>;
pub type FrameTrack = prosody::FrameTrack<f64>;
pub type PhoneProsody = prosody::PhoneProsody<f64>;
pub type MelExtractor = prosody::MelExtractor<f64>;
pub type MelExtractorF32 = prosody::MelExtractor<f32>;
