use std::collections::{BTreeMap, HashSet};
use std::path::Path;
use std::sync::OnceLock;

use serde::Deserialize;
use unicode_normalization::UnicodeNormalization;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum DictionaryError {
    #[error("cannot read {path}: {message}")]
    Io { path: String, message: String },
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("line {line}: duplicate grapheme {grapheme:?}")]
    DuplicateGrapheme { grapheme: String, line: usize },
    #[error("entry {grapheme:?}: {message}")]
    InvariantViolation { grapheme: String, message: String },
}

#[derive(Debug, Clone, PartialEq, Eq, Deserialize, serde::Serialize)]
pub struct Candidate {
    pub ipa: String,
    pub coarse: String,
    #[serde(default)]
    pub extended: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HomographEntry {
    pub grapheme: String,
    pub candidates: Vec<Candidate>,
    pub default_index: usize,
}

impl HomographEntry {
    pub fn new(grapheme: &str, candidates: Vec<Candidate>, default_index: usize) -> Result<Self, DictionaryError> {
        let grapheme = normalize_word(grapheme);
        let violation = |message: String| DictionaryError::InvariantViolation { grapheme: grapheme.clone(), message };
        if grapheme.is_empty() {
            return Err(violation("empty grapheme".into()));
        }
        if candidates.is_empty() {
            return Err(violation("no candidates".into()));
        }
        if default_index >= candidates.len() {
            return Err(violation(format!("default {default_index} out of range for {} candidates", candidates.len())));
        }
        let mut seen = HashSet::new();
        for c in &candidates {
            if c.ipa.trim().is_empty() {
                return Err(violation("candidate with empty pronunciation".into()));
            }
            if !seen.insert((c.coarse.as_str(), c.extended.as_deref())) {
                return Err(violation(format!("duplicate tag pair ({}, {:?})", c.coarse, c.extended)));
            }
        }
        Ok(HomographEntry { grapheme, candidates, default_index })
    }

    pub fn default_candidate(&self) -> &Candidate {
        &self.candidates[self.default_index]
    }
}

/// Lowercase NFC form with typographic apostrophes folded to ASCII; the key
/// used for every dictionary lookup.
pub(crate) fn normalize_word(word: &str) -> String {
    word.trim().nfc().collect::<String>().to_lowercase().replace('\u{2019}', "'")
}

#[derive(Deserialize)]
struct RawEntry {
    grapheme: String,
    candidates: Vec<Candidate>,
    #[serde(default)]
    default: usize,
}

/// Grapheme-keyed homograph lexicon, immutable after loading.
#[derive(Debug, Clone, Default)]
pub struct HomographDictionary {
    entries: BTreeMap<String, HomographEntry>,
}

const BUILTIN_DICTIONARY: &str = include_str!("../../data/homographs.jsonl");

impl HomographDictionary {
    /// Parses JSONL: one `{"grapheme", "candidates", "default"}` object per
    /// non-blank line.
    pub fn from_jsonl(src: &str) -> Result<Self, DictionaryError> {
        let mut entries = BTreeMap::new();
        for (i, line) in src.lines().enumerate() {
            let line_no = i + 1;
            if line.trim().is_empty() {
                continue;
            }
            let raw: RawEntry = serde_json::from_str(line)
                .map_err(|e| DictionaryError::Parse { line: line_no, message: e.to_string() })?;
            let entry = HomographEntry::new(&raw.grapheme, raw.candidates, raw.default)?;
            if entries.contains_key(&entry.grapheme) {
                return Err(DictionaryError::DuplicateGrapheme { grapheme: entry.grapheme, line: line_no });
            }
            entries.insert(entry.grapheme.clone(), entry);
        }
        Ok(HomographDictionary { entries })
    }

    /// The starter dictionary shipped with the crate.
    pub fn builtin() -> &'static HomographDictionary {
        static DICT: OnceLock<HomographDictionary> = OnceLock::new();
        DICT.get_or_init(|| HomographDictionary::from_jsonl(BUILTIN_DICTIONARY).expect("shipped dictionary is valid"))
    }

    pub fn from_entries(list: impl IntoIterator<Item = HomographEntry>) -> Result<Self, DictionaryError> {
        let mut entries = BTreeMap::new();
        for (i, e) in list.into_iter().enumerate() {
            if entries.contains_key(&e.grapheme) {
                return Err(DictionaryError::DuplicateGrapheme { grapheme: e.grapheme, line: i + 1 });
            }
            entries.insert(e.grapheme.clone(), e);
        }
        Ok(HomographDictionary { entries })
    }

    pub fn get(&self, word: &str) -> Option<&HomographEntry> {
        self.entries.get(&normalize_word(word))
    }

    pub fn contains(&self, word: &str) -> bool {
        self.get(word).is_some()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &HomographEntry> {
        self.entries.values()
    }
}

pub fn load_dictionary(path: impl AsRef<Path>) -> Result<HomographDictionary, DictionaryError> {
    let path = path.as_ref();
    let src = std::fs::read_to_string(path)
        .map_err(|e| DictionaryError::Io { path: path.display().to_string(), message: e.to_string() })?;
    HomographDictionary::from_jsonl(&src)
}
