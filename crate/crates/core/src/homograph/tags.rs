use std::collections::HashMap;
use std::path::Path;
use std::sync::OnceLock;

use super::dictionary::normalize_word;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PosError {
    #[error("tagger {provider} unavailable: {message}")]
    ProviderUnavailable { provider: String, message: String },
    #[error("tagger returned {got} tags for {expected} tokens")]
    LengthMismatch { expected: usize, got: usize },
    #[error("tag file line {line}: {message}")]
    Parse { line: usize, message: String },
}

/// Extended-to-coarse tag mapping (`extended<TAB>coarse` lines).
#[derive(Debug, Clone, Default)]
pub struct TagMap {
    map: HashMap<String, String>,
}

const BUILTIN_TAGMAP: &str = include_str!("../../data/tagmap.tsv");

impl TagMap {
    pub fn parse(src: &str) -> Result<Self, PosError> {
        let mut map = HashMap::new();
        for (i, line) in src.lines().enumerate() {
            let line = line.trim_end_matches('\r');
            if line.trim().is_empty() || line.starts_with('#') {
                continue;
            }
            let (ext, coarse) = line
                .split_once('\t')
                .ok_or_else(|| PosError::Parse { line: i + 1, message: "expected extended<TAB>coarse".into() })?;
            map.insert(ext.trim().to_string(), coarse.trim().to_string());
        }
        Ok(TagMap { map })
    }

    pub fn builtin() -> &'static TagMap {
        static MAP: OnceLock<TagMap> = OnceLock::new();
        MAP.get_or_init(|| TagMap::parse(BUILTIN_TAGMAP).expect("shipped tag map is valid"))
    }

    /// Coarse tag for an extended tag. Tags missing from the table map to
    /// themselves, so a tagger that already emits coarse tags works as is.
    pub fn coarse_of<'a>(&'a self, extended: &'a str) -> &'a str {
        self.map.get(extended).map(String::as_str).unwrap_or(extended)
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TaggedToken {
    pub surface: String,
    pub extended_tag: String,
    pub coarse_tag: String,
    pub sentence_index: usize,
    pub token_index: usize,
}

impl TaggedToken {
    pub fn new(surface: &str, extended_tag: &str, tagmap: &TagMap, sentence_index: usize, token_index: usize) -> Self {
        TaggedToken {
            surface: surface.to_string(),
            extended_tag: extended_tag.to_string(),
            coarse_tag: tagmap.coarse_of(extended_tag).to_string(),
            sentence_index,
            token_index,
        }
    }
}

/// Part-of-speech tagger emitting one extended tag per token.
pub trait PosProvider: Send + Sync {
    fn name(&self) -> &str;

    fn tag(&self, tokens: &[&str]) -> Result<Vec<String>, PosError>;
}

/// Replays tags computed offline by an external tagger.
///
/// The file holds `token<TAB>tag` lines with a blank line between sentences.
/// A request is answered from the first stored sentence whose token sequence
/// equals the request.
#[derive(Debug, Clone, Default)]
pub struct FileTagProvider {
    sentences: HashMap<Vec<String>, Vec<String>>,
}

impl FileTagProvider {
    pub fn parse(src: &str) -> Result<Self, PosError> {
        let mut sentences = HashMap::new();
        let mut tokens = Vec::new();
        let mut tags = Vec::new();
        let mut flush = |tokens: &mut Vec<String>, tags: &mut Vec<String>| {
            if !tokens.is_empty() {
                sentences.entry(std::mem::take(tokens)).or_insert_with(|| std::mem::take(tags));
                tags.clear();
            }
        };
        for (i, line) in src.lines().enumerate() {
            let line = line.trim_end_matches('\r');
            if line.trim().is_empty() {
                flush(&mut tokens, &mut tags);
                continue;
            }
            let (tok, tag) = line
                .split_once('\t')
                .ok_or_else(|| PosError::Parse { line: i + 1, message: "expected token<TAB>tag".into() })?;
            if tag.trim().is_empty() {
                return Err(PosError::Parse { line: i + 1, message: "empty tag".into() });
            }
            tokens.push(normalize_word(tok));
            tags.push(tag.trim().to_string());
        }
        flush(&mut tokens, &mut tags);
        Ok(FileTagProvider { sentences })
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self, PosError> {
        let path = path.as_ref();
        let src = std::fs::read_to_string(path).map_err(|e| PosError::ProviderUnavailable {
            provider: "file".into(),
            message: format!("{}: {e}", path.display()),
        })?;
        Self::parse(&src)
    }

    pub fn len(&self) -> usize {
        self.sentences.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sentences.is_empty()
    }
}

impl PosProvider for FileTagProvider {
    fn name(&self) -> &str {
        "file"
    }

    fn tag(&self, tokens: &[&str]) -> Result<Vec<String>, PosError> {
        let key: Vec<String> = tokens.iter().map(|t| normalize_word(t)).collect();
        self.sentences.get(&key).cloned().ok_or_else(|| PosError::ProviderUnavailable {
            provider: "file".into(),
            message: format!("no stored tags for sentence {:?}", tokens.join(" ")),
        })
    }
}

/// Most-frequent-tag lexicon with suffix heuristics for unknown words.
#[derive(Debug, Clone, Default)]
pub struct UnigramTagger {
    lexicon: HashMap<String, String>,
}

const BUILTIN_POS_LEXICON: &str = include_str!("../../data/pos_lexicon.tsv");

impl UnigramTagger {
    pub fn parse(src: &str) -> Result<Self, PosError> {
        let mut lexicon = HashMap::new();
        for (i, line) in src.lines().enumerate() {
            let line = line.trim_end_matches('\r');
            if line.trim().is_empty() || line.starts_with('#') {
                continue;
            }
            let (word, tag) = line
                .split_once('\t')
                .ok_or_else(|| PosError::Parse { line: i + 1, message: "expected word<TAB>tag".into() })?;
            lexicon.insert(normalize_word(word), tag.trim().to_string());
        }
        Ok(UnigramTagger { lexicon })
    }

    pub fn builtin() -> &'static UnigramTagger {
        static TAGGER: OnceLock<UnigramTagger> = OnceLock::new();
        TAGGER.get_or_init(|| UnigramTagger::parse(BUILTIN_POS_LEXICON).expect("shipped POS lexicon is valid"))
    }

    fn guess(&self, token: &str, first: bool) -> String {
        let word = normalize_word(token);
        if let Some(tag) = self.lexicon.get(&word) {
            return tag.clone();
        }
        let tag = if matches!(word.as_str(), "." | "!" | "?" | "...") {
            "YPFOR"
        } else if !word.chars().any(char::is_alphanumeric) {
            "PUNCT"
        } else if word.chars().all(|c| c.is_ascii_digit() || c == ',' || c == '.') {
            "CHIF"
        } else if !first && token.chars().next().is_some_and(char::is_uppercase) {
            "PROPN"
        } else if word.ends_with("ment") {
            "ADV"
        } else if word.ends_with("tions") || word.ends_with("sions") {
            "NFP"
        } else if word.ends_with("tion") || word.ends_with("sion") || word.ends_with("ité") {
            "NFS"
        } else if word.ends_with("ons") || word.ends_with("ez") || word.ends_with("ent") || word.ends_with("er") {
            "VERB"
        } else if word.ends_with("eux") || word.ends_with("ique") || word.ends_with("able") || word.ends_with("if") {
            "ADJMS"
        } else if word.ends_with("euse") || word.ends_with("ive") {
            "ADJFS"
        } else if word.ends_with('é') {
            "VPPMS"
        } else if word.ends_with('s') || word.ends_with('x') {
            "NMP"
        } else {
            "NMS"
        };
        tag.to_string()
    }
}

impl PosProvider for UnigramTagger {
    fn name(&self) -> &str {
        "unigram"
    }

    fn tag(&self, tokens: &[&str]) -> Result<Vec<String>, PosError> {
        Ok(tokens.iter().enumerate().map(|(i, t)| self.guess(t, i == 0)).collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tagmap_maps_extended_to_coarse() {
        let m = TagMap::builtin();
        assert_eq!(m.coarse_of("NMS"), "NOUN");
        assert_eq!(m.coarse_of("ADJFP"), "ADJ");
        assert_eq!(m.coarse_of("VPPMS"), "VERB");
        assert_eq!(m.coarse_of("YPFOR"), "PUNCT");
        assert_eq!(m.coarse_of("CHIF"), "NUM");
        assert_eq!(m.coarse_of("NOUN"), "NOUN");
    }

    #[test]
    fn file_provider_replays_sentences() {
        let p = FileTagProvider::parse("Les\tDET\nfils\tNMP\n\nJe\tPPER1S\nlis\tVERB\n").unwrap();
        assert_eq!(p.len(), 2);
        assert_eq!(p.tag(&["les", "fils"]).unwrap(), ["DET", "NMP"]);
        assert_eq!(p.tag(&["Je", "lis"]).unwrap(), ["PPER1S", "VERB"]);
        assert!(matches!(p.tag(&["Je"]), Err(PosError::ProviderUnavailable { .. })));
    }

    #[test]
    fn file_provider_rejects_malformed_lines() {
        assert_eq!(
            FileTagProvider::parse("Les DET\n").unwrap_err(),
            PosError::Parse { line: 1, message: "expected token<TAB>tag".into() }
        );
    }

    #[test]
    fn unigram_uses_lexicon_then_suffixes() {
        let t = UnigramTagger::builtin();
        let tags = t.tag(&["Le", "président", "parle", "rapidement", "à", "Lyon", "."]).unwrap();
        assert_eq!(tags, ["DETMS", "NMS", "VERB", "ADV", "PREP", "PROPN", "YPFOR"]);
    }

    #[test]
    fn one_tag_per_token() {
        let t = UnigramTagger::builtin();
        assert!(t.tag(&[]).unwrap().is_empty());
        assert_eq!(t.tag(&["xyzzy", ",", "42"]).unwrap(), ["NMS", "PUNCT", "CHIF"]);
    }
}
