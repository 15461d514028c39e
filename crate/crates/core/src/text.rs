//! Text normalization and the word/punctuation splitter shared by the
//! phonemizer, the POS taggers and the pause-marker validator.

use unicode_normalization::UnicodeNormalization;

enum CharClass {
    Space,
    Drop,
    /// Opening guillemet: swallows the whitespace that follows it.
    Open(&'static str),
    /// Closing guillemet: swallows the whitespace that precedes it.
    Close(&'static str),
    Keep(char),
    Replace(&'static str),
}

fn classify(c: char) -> CharClass {
    match c {
        '«' => CharClass::Open("\""),
        '»' => CharClass::Close("\""),
        '\u{201C}' | '\u{201D}' | '\u{201E}' | '\u{201F}' => CharClass::Replace("\""),
        '\u{2018}' | '\u{2019}' | '\u{201A}' | '\u{201B}' | '\u{2032}' => CharClass::Replace("'"),
        '\u{2010}' | '\u{2011}' | '\u{2012}' | '\u{2013}' | '\u{2014}' | '\u{2015}' | '\u{2212}' => {
            CharClass::Replace("-")
        }
        '\u{2026}' => CharClass::Replace("..."),
        // zero-width characters and the BOM
        '\u{200B}' | '\u{200C}' | '\u{200D}' | '\u{2060}' | '\u{FEFF}' | '\u{00AD}' => CharClass::Drop,
        c if c.is_whitespace() => CharClass::Space,
        c if c.is_control() => CharClass::Drop,
        c => CharClass::Keep(c),
    }
}

/// Normalizes raw input text before phonemization.
///
/// Applies NFC, drops control and zero-width characters, maps typographic
/// quotes and dashes to ASCII, removes the padding inside French guillemets,
/// collapses whitespace runs to one space and trims both ends.
pub fn clean_text(raw: &str) -> String {
    let mut out = String::with_capacity(raw.len());
    let mut pending_space = false;
    let mut suppress_space = false;

    let push_text = |out: &mut String, s: &str, pending: &mut bool, suppress: &mut bool| {
        if *pending && !*suppress && !out.is_empty() {
            out.push(' ');
        }
        *pending = false;
        *suppress = false;
        out.push_str(s);
    };

    for c in raw.nfc() {
        match classify(c) {
            CharClass::Space => pending_space = true,
            CharClass::Drop => {}
            CharClass::Open(s) => {
                push_text(&mut out, s, &mut pending_space, &mut suppress_space);
                suppress_space = true;
            }
            CharClass::Close(s) => {
                pending_space = false;
                suppress_space = false;
                out.push_str(s);
            }
            CharClass::Keep(c) => {
                let mut buf = [0u8; 4];
                push_text(&mut out, c.encode_utf8(&mut buf), &mut pending_space, &mut suppress_space);
            }
            CharClass::Replace(s) => push_text(&mut out, s, &mut pending_space, &mut suppress_space),
        }
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PieceKind {
    Word,
    Punct,
}

/// A word or single punctuation character, with its byte offset in the
/// source text.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TextPiece<'a> {
    pub text: &'a str,
    pub kind: PieceKind,
    pub start: usize,
}

impl TextPiece<'_> {
    pub fn end(&self) -> usize {
        self.start + self.text.len()
    }

    pub fn is_word(&self) -> bool {
        self.kind == PieceKind::Word
    }
}

fn is_word_char(c: char) -> bool {
    c.is_alphanumeric() || unicode_normalization::char::is_combining_mark(c)
}

fn is_apostrophe(c: char) -> bool {
    c == '\'' || c == '\u{2019}'
}

/// Splits text into words and punctuation.
///
/// An apostrophe directly after letters closes an elided word (`n'`, `l'`),
/// a hyphen between two word characters stays inside the word
/// (`peut-être`), every other non-space symbol is its own punctuation piece.
pub fn split_pieces<'a>(text: &'a str) -> Vec<TextPiece<'a>> {
    let chars: Vec<(usize, char)> = text.char_indices().collect();
    let mut pieces = Vec::new();
    let mut word_start: Option<usize> = None;

    let close_word = |pieces: &mut Vec<TextPiece<'a>>, start: &mut Option<usize>, end: usize| {
        if let Some(s) = start.take() {
            pieces.push(TextPiece { text: &text[s..end], kind: PieceKind::Word, start: s });
        }
    };

    for (i, &(pos, c)) in chars.iter().enumerate() {
        if is_word_char(c) {
            if word_start.is_none() {
                word_start = Some(pos);
            }
            continue;
        }
        let next_is_word = chars.get(i + 1).is_some_and(|&(_, n)| is_word_char(n));
        if word_start.is_some() && is_apostrophe(c) {
            let end = pos + c.len_utf8();
            close_word(&mut pieces, &mut word_start, end);
            continue;
        }
        if word_start.is_some() && c == '-' && next_is_word {
            continue;
        }
        close_word(&mut pieces, &mut word_start, pos);
        if !c.is_whitespace() {
            pieces.push(TextPiece { text: &text[pos..pos + c.len_utf8()], kind: PieceKind::Punct, start: pos });
        }
    }
    close_word(&mut pieces, &mut word_start, text.len());
    pieces
}
