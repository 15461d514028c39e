//! Text-to-phoneme front end: IPA tokenization with nonsegmental modifiers
//! and articulatory feature vectors.

mod features;
mod g2p;
mod tokenize;

pub use features::{feature_index, Direction, FeatureTable, Modifier, ModifierFlag, FEATURE_DIM, FEATURE_NAMES};
pub use g2p::{phonemize, CommandProvider, G2pError, G2pProvider, LexiconProvider, FRENCH};
pub use tokenize::{tokenize_ipa, vectorize, ArticulatoryVector, PhonemeToken, Tone};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum FrontendError {
    #[error("unknown IPA symbol {symbol:?} at position {position}")]
    UnknownSymbol { symbol: String, position: usize },
    #[error("modifier at position {position} has no segment to attach to")]
    DanglingModifier { position: usize },
    #[error("conflicting modifiers on one segment at position {position}")]
    ConflictingModifiers { position: usize },
    #[error("modifier at position {position} attaches to a silence token")]
    ModifierOnSilence { position: usize },
    #[error("feature table line {line}: {message}")]
    Table { line: usize, message: String },
}
