use std::collections::HashMap;
use std::sync::OnceLock;

use unicode_normalization::UnicodeNormalization;

use super::FrontendError;

/// Names of the vector dimensions, in vector order.
pub const FEATURE_NAMES: [&str; 45] = [
    // segment class
    "consonant",
    "vowel",
    "silence",
    // consonant place
    "bilabial",
    "labiodental",
    "dental",
    "alveolar",
    "postalveolar",
    "retroflex",
    "palatal",
    "labial-palatal",
    "labial-velar",
    "velar",
    "uvular",
    "pharyngeal",
    "glottal",
    // consonant manner
    "plosive",
    "nasal",
    "trill",
    "flap",
    "fricative",
    "affricate",
    "approximant",
    "lateral-approximant",
    "voiced",
    // vowel height
    "close",
    "near-close",
    "close-mid",
    "mid",
    "open-mid",
    "near-open",
    "open",
    // vowel backness
    "front",
    "central",
    "back",
    "rounded",
    "nasalized",
    // nonsegmental
    "stress",
    "lengthened",
    "shortened",
    "tone1",
    "tone2",
    "tone3",
    "tone4",
    "tone5",
];

pub const FEATURE_DIM: usize = FEATURE_NAMES.len();

const CONSONANT: usize = 0;
const VOWEL: usize = 1;
pub(crate) const SILENCE: usize = 2;
const PLACE: std::ops::Range<usize> = 3..16;
const MANNER: std::ops::Range<usize> = 16..24;
pub(crate) const VOICED: usize = 24;
const HEIGHT: std::ops::Range<usize> = 25..32;
const BACKNESS: std::ops::Range<usize> = 32..35;
pub(crate) const STRESS: usize = 37;
pub(crate) const LENGTHENED: usize = 38;
pub(crate) const SHORTENED: usize = 39;
pub(crate) const TONE_START: usize = 40;

const BUILTIN_FEATURES: &str = include_str!("../../data/features.tsv");
const BUILTIN_MODIFIERS: &str = include_str!("../../data/modifiers.tsv");

pub fn feature_index(name: &str) -> Option<usize> {
    FEATURE_NAMES.iter().position(|&n| n == name)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    Prev,
    Next,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ModifierFlag {
    Stress,
    Lengthened,
    Shortened,
    /// Tone level 1..=5.
    Tone(u8),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Modifier {
    pub flag: ModifierFlag,
    pub direction: Direction,
}

/// One row of the segment table: the segmental flags of a base symbol.
pub type SegmentRow = [u8; FEATURE_DIM];

pub(crate) enum TableMatch<'a> {
    Segment(&'a str, &'a SegmentRow),
    Modifier(Modifier),
}

/// Immutable lookup from IPA symbols to segmental features, plus the
/// nonsegmental modifier characters and their attachment direction.
///
/// Symbols are stored in canonical decomposition (NFD) so that precomposed
/// input such as `õ` and decomposed `o` + U+0303 match the same row.
#[derive(Debug, Clone)]
pub struct FeatureTable {
    segments: HashMap<String, SegmentRow>,
    modifiers: HashMap<String, Modifier>,
    max_symbol_chars: usize,
}

fn count_in(row: &SegmentRow, range: std::ops::Range<usize>) -> usize {
    row[range].iter().filter(|&&v| v == 1).count()
}

fn check_row(symbol: &str, row: &SegmentRow, line: usize) -> Result<(), FrontendError> {
    let fail = |reason: &str| {
        Err(FrontendError::Table { line, message: format!("symbol {symbol:?}: {reason}") })
    };
    let classes = row[CONSONANT] + row[VOWEL] + row[SILENCE];
    if classes != 1 {
        return fail("exactly one of consonant/vowel/silence must be set");
    }
    if row[STRESS..].iter().any(|&v| v != 0) {
        return fail("nonsegmental flags belong in the modifier table");
    }
    if row[SILENCE] == 1 {
        if row.iter().filter(|&&v| v != 0).count() != 1 {
            return fail("silence rows carry no segmental flags");
        }
    } else if row[CONSONANT] == 1 {
        if count_in(row, PLACE) != 1 || count_in(row, MANNER) != 1 {
            return fail("consonants need exactly one place and one manner flag");
        }
        if count_in(row, HEIGHT) + count_in(row, BACKNESS) != 0 {
            return fail("consonants carry no vowel height/backness");
        }
    } else {
        if count_in(row, HEIGHT) != 1 || count_in(row, BACKNESS) != 1 {
            return fail("vowels need exactly one height and one backness flag");
        }
        if count_in(row, PLACE) + count_in(row, MANNER) != 0 {
            return fail("vowels carry no consonant place/manner");
        }
    }
    Ok(())
}

fn parse_flag(name: &str) -> Option<ModifierFlag> {
    match name {
        "stress" => Some(ModifierFlag::Stress),
        "lengthened" => Some(ModifierFlag::Lengthened),
        "shortened" => Some(ModifierFlag::Shortened),
        _ => {
            let level: u8 = name.strip_prefix("tone")?.parse().ok()?;
            (1..=5).contains(&level).then_some(ModifierFlag::Tone(level))
        }
    }
}

fn data_lines(src: &str) -> impl Iterator<Item = (usize, &str)> {
    src.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim_end_matches('\r')))
        .filter(|(_, l)| !l.trim().is_empty() && !l.starts_with('#'))
}

impl FeatureTable {
    /// Parses the segment table (`symbol<TAB>feature=1,...`) and the
    /// modifier table (`symbol<TAB>flag<TAB>prev|next`).
    pub fn parse(features_tsv: &str, modifiers_tsv: &str) -> Result<Self, FrontendError> {
        let mut segments = HashMap::new();
        for (line, text) in data_lines(features_tsv) {
            let (symbol, spec) = text
                .split_once('\t')
                .ok_or_else(|| FrontendError::Table { line, message: "expected symbol<TAB>features".into() })?;
            let symbol: String = symbol.nfd().collect();
            let mut row = [0u8; FEATURE_DIM];
            for item in spec.split(',').map(str::trim).filter(|s| !s.is_empty()) {
                let (name, value) = item.split_once('=').unwrap_or((item, "1"));
                let idx = feature_index(name).ok_or_else(|| FrontendError::Table {
                    line,
                    message: format!("unknown feature {name:?}"),
                })?;
                row[idx] = match value {
                    "1" => 1,
                    "0" => 0,
                    v => {
                        return Err(FrontendError::Table { line, message: format!("feature value {v:?} is not 0/1") })
                    }
                };
            }
            check_row(&symbol, &row, line)?;
            if segments.insert(symbol.clone(), row).is_some_and(|old| old != row) {
                return Err(FrontendError::Table { line, message: format!("conflicting rows for {symbol:?}") });
            }
        }

        let mut modifiers = HashMap::new();
        for (line, text) in data_lines(modifiers_tsv) {
            let cols: Vec<&str> = text.split('\t').collect();
            let [symbol, flag, direction] = cols[..] else {
                return Err(FrontendError::Table { line, message: "expected symbol<TAB>flag<TAB>direction".into() });
            };
            let flag = parse_flag(flag)
                .ok_or_else(|| FrontendError::Table { line, message: format!("unknown modifier flag {flag:?}") })?;
            let direction = match direction {
                "prev" => Direction::Prev,
                "next" => Direction::Next,
                d => return Err(FrontendError::Table { line, message: format!("direction {d:?} is not prev/next") }),
            };
            let symbol: String = symbol.nfd().collect();
            if segments.contains_key(&symbol) {
                return Err(FrontendError::Table { line, message: format!("{symbol:?} is both segment and modifier") });
            }
            modifiers.insert(symbol, Modifier { flag, direction });
        }

        let max_symbol_chars =
            segments.keys().chain(modifiers.keys()).map(|s| s.chars().count()).max().unwrap_or(1);
        Ok(FeatureTable { segments, modifiers, max_symbol_chars })
    }

    /// The table shipped with the crate, parsed once.
    pub fn builtin() -> &'static FeatureTable {
        static TABLE: OnceLock<FeatureTable> = OnceLock::new();
        TABLE.get_or_init(|| {
            FeatureTable::parse(BUILTIN_FEATURES, BUILTIN_MODIFIERS).expect("shipped feature table is valid")
        })
    }

    pub fn segment(&self, symbol: &str) -> Option<&SegmentRow> {
        self.segments.get(symbol).or_else(|| self.segments.get(&symbol.nfd().collect::<String>()))
    }

    pub fn contains(&self, symbol: &str) -> bool {
        self.segment(symbol).is_some()
    }

    pub fn is_silence(&self, symbol: &str) -> bool {
        self.segment(symbol).is_some_and(|r| r[SILENCE] == 1)
    }

    pub fn is_vowel(&self, symbol: &str) -> bool {
        self.segment(symbol).is_some_and(|r| r[VOWEL] == 1)
    }

    /// True for non-silence segments without the voicing flag.
    pub fn is_unvoiced(&self, symbol: &str) -> bool {
        self.segment(symbol).is_some_and(|r| r[SILENCE] == 0 && r[VOICED] == 0)
    }

    pub fn segment_symbols(&self) -> impl Iterator<Item = &str> {
        self.segments.keys().map(String::as_str)
    }

    pub fn modifier_symbols(&self) -> impl Iterator<Item = &str> {
        self.modifiers.keys().map(String::as_str)
    }

    pub fn len(&self) -> usize {
        self.segments.len()
    }

    pub fn is_empty(&self) -> bool {
        self.segments.is_empty()
    }

    /// Longest table entry that is a prefix of `chars` (already NFD).
    /// Returns the match and its length in chars.
    pub(crate) fn longest_match(&self, chars: &[char]) -> Option<(TableMatch<'_>, usize)> {
        let mut key = String::new();
        let upper = self.max_symbol_chars.min(chars.len());
        let mut best = None;
        for (n, &c) in chars[..upper].iter().enumerate() {
            key.push(c);
            if let Some((sym, row)) = self.segments.get_key_value(&key) {
                best = Some((TableMatch::Segment(sym.as_str(), row), n + 1));
            } else if let Some(m) = self.modifiers.get(&key) {
                best = Some((TableMatch::Modifier(*m), n + 1));
            }
        }
        best
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builtin_table_loads_and_covers_french_inventory() {
        let t = FeatureTable::builtin();
        for s in [
            "p", "b", "t", "d", "k", "ɡ", "f", "v", "s", "z", "ʃ", "ʒ", "m", "n", "ɲ", "ŋ", "l", "ʁ", "j", "w",
            "ɥ", "i", "y", "u", "e", "ø", "o", "ə", "ɛ", "œ", "ɔ", "a", "ɑ", "ɑ̃", "ɔ̃", "ɛ̃", "œ̃",
        ] {
            assert!(t.contains(s), "missing {s}");
        }
        assert!(t.is_silence(","));
        assert!(t.is_unvoiced("s"));
        assert!(!t.is_unvoiced("z"));
        assert!(!t.is_unvoiced("a"));
        assert!(!t.is_unvoiced(","));
    }

    #[test]
    fn precomposed_and_decomposed_nasals_agree() {
        let t = FeatureTable::builtin();
        assert_eq!(t.segment("\u{00F5}"), t.segment("o\u{0303}"));
    }

    #[test]
    fn rejects_consonant_without_manner() {
        let err = FeatureTable::parse("p\tconsonant=1,bilabial=1\n", "").unwrap_err();
        assert!(matches!(err, FrontendError::Table { line: 1, .. }), "{err}");
    }

    #[test]
    fn rejects_unknown_feature_and_direction() {
        assert!(FeatureTable::parse("p\tconsonant=1,sparkly=1\n", "").is_err());
        assert!(FeatureTable::parse("a\tvowel=1,open=1,front=1\n", "ˈ\tstress\tsideways\n").is_err());
    }

    #[test]
    fn rejects_silence_with_segmental_flags() {
        assert!(FeatureTable::parse(",\tsilence=1,voiced=1\n", "").is_err());
    }
}
