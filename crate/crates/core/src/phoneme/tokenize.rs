use serde::{Deserialize, Serialize};
use unicode_normalization::UnicodeNormalization;

use super::features::{
    Direction, FeatureTable, ModifierFlag, SegmentRow, TableMatch, FEATURE_DIM, LENGTHENED, SHORTENED, STRESS,
    TONE_START,
};
use super::FrontendError;

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Tone {
    #[default]
    None,
    Level1,
    Level2,
    Level3,
    Level4,
    Level5,
}

impl Tone {
    fn from_level(level: u8) -> Tone {
        match level {
            1 => Tone::Level1,
            2 => Tone::Level2,
            3 => Tone::Level3,
            4 => Tone::Level4,
            _ => Tone::Level5,
        }
    }

    pub fn level(self) -> Option<u8> {
        match self {
            Tone::None => None,
            Tone::Level1 => Some(1),
            Tone::Level2 => Some(2),
            Tone::Level3 => Some(3),
            Tone::Level4 => Some(4),
            Tone::Level5 => Some(5),
        }
    }
}

/// One base IPA segment with the nonsegmental markers folded into it.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PhonemeToken {
    pub symbol: String,
    pub stress: bool,
    pub lengthened: bool,
    pub shortened: bool,
    pub tone: Tone,
    pub is_silence: bool,
    pub word_index: usize,
}

impl PhonemeToken {
    pub fn new(symbol: impl Into<String>) -> Self {
        PhonemeToken {
            symbol: symbol.into(),
            stress: false,
            lengthened: false,
            shortened: false,
            tone: Tone::None,
            is_silence: false,
            word_index: 0,
        }
    }

    pub fn silence(symbol: impl Into<String>) -> Self {
        PhonemeToken { is_silence: true, ..PhonemeToken::new(symbol) }
    }

    pub fn with_stress(mut self) -> Self {
        self.stress = true;
        self
    }

    fn apply(&mut self, flag: ModifierFlag, position: usize) -> Result<(), FrontendError> {
        if self.is_silence {
            return Err(FrontendError::ModifierOnSilence { position });
        }
        match flag {
            ModifierFlag::Stress => self.stress = true,
            ModifierFlag::Lengthened if self.shortened => {
                return Err(FrontendError::ConflictingModifiers { position })
            }
            ModifierFlag::Lengthened => self.lengthened = true,
            ModifierFlag::Shortened if self.lengthened => {
                return Err(FrontendError::ConflictingModifiers { position })
            }
            ModifierFlag::Shortened => self.shortened = true,
            ModifierFlag::Tone(_) if self.tone != Tone::None => {
                return Err(FrontendError::ConflictingModifiers { position })
            }
            ModifierFlag::Tone(level) => self.tone = Tone::from_level(level),
        }
        Ok(())
    }
}

/// Fixed-width binary encoding of a token's vocal tract configuration and
/// nonsegmental flags. Dimension names are in [`super::FEATURE_NAMES`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ArticulatoryVector {
    pub values: [u8; FEATURE_DIM],
}

impl ArticulatoryVector {
    pub fn len(&self) -> usize {
        FEATURE_DIM
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn to_real<T: crate::Real>(&self) -> Vec<T> {
        self.values.iter().map(|&v| if v == 1 { T::one() } else { T::zero() }).collect()
    }

    /// Indices where two vectors differ.
    pub fn diff(&self, other: &ArticulatoryVector) -> Vec<usize> {
        (0..FEATURE_DIM).filter(|&i| self.values[i] != other.values[i]).collect()
    }
}

/// Splits an IPA string into tokens.
///
/// Segments are matched greedily against the feature table (longest symbol
/// first). Modifier characters are folded into the adjacent segment in the
/// direction the modifier table prescribes; punctuation rows become silence
/// tokens. Whitespace separates words. Error positions are char offsets in
/// the canonically decomposed input.
pub fn tokenize_ipa(ipa: &str, table: &FeatureTable) -> Result<Vec<PhonemeToken>, FrontendError> {
    let chars: Vec<char> = ipa.nfd().collect();
    let mut tokens: Vec<PhonemeToken> = Vec::new();
    let mut pending: Vec<(ModifierFlag, usize)> = Vec::new();
    let mut word_index = 0usize;
    let mut in_space = false;
    let mut i = 0;

    while i < chars.len() {
        let c = chars[i];
        if c.is_whitespace() {
            if let Some(&(_, position)) = pending.first() {
                return Err(FrontendError::DanglingModifier { position });
            }
            if !in_space && !tokens.is_empty() {
                word_index += 1;
            }
            in_space = true;
            i += 1;
            continue;
        }
        in_space = false;
        match table.longest_match(&chars[i..]) {
            Some((TableMatch::Segment(symbol, row), n)) => {
                let mut token = PhonemeToken::new(symbol);
                token.is_silence = row[super::features::SILENCE] == 1;
                token.word_index = word_index;
                for (flag, position) in pending.drain(..) {
                    token.apply(flag, position)?;
                }
                tokens.push(token);
                i += n;
            }
            Some((TableMatch::Modifier(m), n)) => {
                match m.direction {
                    Direction::Next => pending.push((m.flag, i)),
                    Direction::Prev => {
                        // a prev-attaching mark must follow a segment directly
                        let attached = i > 0 && !chars[i - 1].is_whitespace() && pending.is_empty();
                        match tokens.last_mut() {
                            Some(last) if attached => last.apply(m.flag, i)?,
                            _ => return Err(FrontendError::DanglingModifier { position: i }),
                        }
                    }
                }
                i += n;
            }
            None => {
                return Err(FrontendError::UnknownSymbol { symbol: c.to_string(), position: i });
            }
        }
    }
    if let Some(&(_, position)) = pending.first() {
        return Err(FrontendError::DanglingModifier { position });
    }
    Ok(tokens)
}

/// Encodes each token as its table row plus copied modifier flags.
pub fn vectorize(tokens: &[PhonemeToken], table: &FeatureTable) -> Result<Vec<ArticulatoryVector>, FrontendError> {
    tokens
        .iter()
        .enumerate()
        .map(|(position, tok)| {
            let row: &SegmentRow = table
                .segment(&tok.symbol)
                .ok_or_else(|| FrontendError::UnknownSymbol { symbol: tok.symbol.clone(), position })?;
            let mut values = *row;
            if !tok.is_silence {
                values[STRESS] = tok.stress as u8;
                values[LENGTHENED] = tok.lengthened as u8;
                values[SHORTENED] = tok.shortened as u8;
                if let Some(level) = tok.tone.level() {
                    values[TONE_START + level as usize - 1] = 1;
                }
            }
            Ok(ArticulatoryVector { values })
        })
        .collect()
}
