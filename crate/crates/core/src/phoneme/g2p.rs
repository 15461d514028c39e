use std::collections::HashMap;
use std::io::Write;
use std::process::{Command, Stdio};

use unicode_normalization::UnicodeNormalization;

use crate::text::{split_pieces, PieceKind};

/// Language tag of the only language the shipped resources cover.
pub const FRENCH: &str = "fr";

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum G2pError {
    #[error("phonemizer {provider} unavailable: {message}")]
    ProviderUnavailable { provider: String, message: String },
    #[error("phonemizer {provider} does not support language {lang:?}")]
    UnsupportedLanguage { provider: String, lang: String },
    #[error("word {word:?} is not in the pronunciation lexicon")]
    OutOfVocabulary { word: String },
}

/// A grapheme-to-phoneme backend that emits IPA with modifier characters.
///
/// Implementations must be deterministic: the same text and language always
/// produce the same string.
pub trait G2pProvider: Send + Sync {
    fn name(&self) -> &str;

    fn languages(&self) -> &[String];

    fn supports(&self, lang: &str) -> bool {
        self.languages().iter().any(|l| l == lang)
    }

    fn transcribe(&self, text: &str, lang: &str) -> Result<String, G2pError>;
}

/// Converts cleaned text to an IPA string with the given provider.
pub fn phonemize(text: &str, provider: &dyn G2pProvider, lang: &str) -> Result<String, G2pError> {
    if !provider.supports(lang) {
        return Err(G2pError::UnsupportedLanguage { provider: provider.name().to_string(), lang: lang.to_string() });
    }
    if text.trim().is_empty() {
        return Ok(String::new());
    }
    provider.transcribe(text, lang)
}

/// Runs an external IPA-emitting phonemizer.
///
/// The program is invoked as `program [extra args] --lang <lang> --ipa`,
/// receives the text on stdin and must print IPA on stdout and exit 0.
#[derive(Debug, Clone)]
pub struct CommandProvider {
    name: String,
    program: String,
    extra_args: Vec<String>,
    languages: Vec<String>,
}

impl CommandProvider {
    pub fn new(program: impl Into<String>) -> Self {
        let program = program.into();
        CommandProvider {
            name: format!("command:{program}"),
            program,
            extra_args: Vec::new(),
            languages: vec![FRENCH.to_string()],
        }
    }

    pub fn with_args(mut self, args: impl IntoIterator<Item = impl Into<String>>) -> Self {
        self.extra_args = args.into_iter().map(Into::into).collect();
        self
    }

    fn unavailable(&self, message: impl Into<String>) -> G2pError {
        G2pError::ProviderUnavailable { provider: self.name.clone(), message: message.into() }
    }
}

impl G2pProvider for CommandProvider {
    fn name(&self) -> &str {
        &self.name
    }

    fn languages(&self) -> &[String] {
        &self.languages
    }

    fn transcribe(&self, text: &str, lang: &str) -> Result<String, G2pError> {
        let mut child = Command::new(&self.program)
            .args(&self.extra_args)
            .args(["--lang", lang, "--ipa"])
            .stdin(Stdio::piped())
            .stdout(Stdio::piped())
            .stderr(Stdio::piped())
            .spawn()
            .map_err(|e| self.unavailable(format!("spawn failed: {e}")))?;
        {
            let mut stdin = child.stdin.take().expect("stdin is piped");
            stdin.write_all(text.as_bytes()).map_err(|e| self.unavailable(format!("write failed: {e}")))?;
        }
        let out = child.wait_with_output().map_err(|e| self.unavailable(format!("wait failed: {e}")))?;
        if !out.status.success() {
            let stderr = String::from_utf8_lossy(&out.stderr);
            return Err(self.unavailable(format!("exit status {}: {}", out.status, stderr.trim())));
        }
        let ipa = String::from_utf8(out.stdout).map_err(|_| self.unavailable("stdout is not UTF-8"))?;
        Ok(ipa.split_whitespace().collect::<Vec<_>>().join(" ").nfc().collect())
    }
}

/// Deterministic word-lexicon provider. Punctuation passes through
/// unchanged, attached to the preceding word.
#[derive(Debug, Clone, Default)]
pub struct LexiconProvider {
    entries: HashMap<String, String>,
    languages: Vec<String>,
}

const BUILTIN_LEXICON: &str = include_str!("../../data/g2p_lexicon.tsv");

impl LexiconProvider {
    pub fn new(entries: impl IntoIterator<Item = (String, String)>) -> Self {
        LexiconProvider {
            entries: entries.into_iter().map(|(w, ipa)| (w.to_lowercase(), ipa)).collect(),
            languages: vec![FRENCH.to_string()],
        }
    }

    /// Parses `word<TAB>ipa` lines; `#` starts a comment line.
    pub fn from_tsv(src: &str) -> Result<Self, (usize, String)> {
        let mut entries = Vec::new();
        for (i, line) in src.lines().enumerate() {
            let line = line.trim_end_matches('\r');
            if line.trim().is_empty() || line.starts_with('#') {
                continue;
            }
            let (word, ipa) = line.split_once('\t').ok_or((i + 1, "expected word<TAB>ipa".to_string()))?;
            entries.push((word.trim().to_string(), ipa.trim().to_string()));
        }
        Ok(Self::new(entries))
    }

    /// The lexicon shipped with the crate; covers the starter homographs and
    /// the synthetic corpus vocabulary.
    pub fn builtin() -> Self {
        Self::from_tsv(BUILTIN_LEXICON).expect("shipped lexicon parses")
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn lookup(&self, word: &str) -> Option<&str> {
        let lower = word.to_lowercase().replace('\u{2019}', "'");
        self.entries.get(&lower).map(String::as_str)
    }
}

impl G2pProvider for LexiconProvider {
    fn name(&self) -> &str {
        "lexicon"
    }

    fn languages(&self) -> &[String] {
        &self.languages
    }

    fn transcribe(&self, text: &str, _lang: &str) -> Result<String, G2pError> {
        let mut out = String::new();
        for piece in split_pieces(text) {
            match piece.kind {
                PieceKind::Word => {
                    let ipa = self
                        .lookup(piece.text)
                        .ok_or_else(|| G2pError::OutOfVocabulary { word: piece.text.to_string() })?;
                    if !out.is_empty() {
                        out.push(' ');
                    }
                    out.push_str(ipa);
                }
                PieceKind::Punct => out.push_str(piece.text),
            }
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lex() -> LexiconProvider {
        LexiconProvider::new([("plus".to_string(), "plys".to_string()), ("fils".to_string(), "fis".to_string())])
    }

    #[test]
    fn lexicon_lookup() {
        assert_eq!(phonemize("plus", &lex(), FRENCH).unwrap(), "plys");
        assert_eq!(phonemize("fils", &lex(), FRENCH).unwrap(), "fis");
        assert_eq!(phonemize("Fils, plus.", &lex(), FRENCH).unwrap(), "fis, plys.");
    }

    #[test]
    fn empty_passthrough() {
        assert_eq!(phonemize("", &lex(), FRENCH).unwrap(), "");
    }

    #[test]
    fn unsupported_language_and_oov() {
        assert!(matches!(phonemize("plus", &lex(), "de"), Err(G2pError::UnsupportedLanguage { .. })));
        assert_eq!(
            phonemize("maison", &lex(), FRENCH),
            Err(G2pError::OutOfVocabulary { word: "maison".into() })
        );
    }

    #[test]
    fn missing_command_is_unavailable() {
        let p = CommandProvider::new("/nonexistent/phonemizer-binary");
        assert!(matches!(phonemize("plus", &p, FRENCH), Err(G2pError::ProviderUnavailable { .. })));
    }

    #[cfg(unix)]
    #[test]
    fn command_provider_reads_stdout() {
        // `sh -c 'cat' --lang fr --ipa`: the script ignores its positional
        // arguments and echoes stdin
        let p = CommandProvider::new("sh").with_args(["-c", "cat"]);
        assert_eq!(phonemize("bɔ̃ʒuʁ\n", &p, FRENCH).unwrap(), "bɔ̃ʒuʁ");
        let failing = CommandProvider::new("sh").with_args(["-c", "exit 3"]);
        assert!(matches!(phonemize("x", &failing, FRENCH), Err(G2pError::ProviderUnavailable { .. })));
    }

    #[test]
    fn builtin_lexicon_tokenizes_cleanly() {
        let lex = LexiconProvider::builtin();
        assert!(lex.len() > 50);
        let table = super::super::FeatureTable::builtin();
        for ipa in lex.entries.values() {
            super::super::tokenize_ipa(ipa, table).unwrap_or_else(|e| panic!("{ipa}: {e}"));
        }
    }
}
