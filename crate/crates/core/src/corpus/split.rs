use super::{CorpusError, UtteranceRecord};

/// An aligned text segment inside a chapter recording, in seconds.
#[derive(Debug, Clone, PartialEq)]
pub struct Span {
    pub start: f64,
    pub end: f64,
    pub text: String,
}

/// Groups aligned spans of one chapter into utterances at paragraph
/// boundaries.
///
/// `paragraph_ends` holds the indices of spans that close a paragraph. With
/// no marks every span becomes its own utterance. Ids are
/// `{chapter_id}_{n:04}` counting from 1.
pub fn split_chapters(
    chapter_id: &str,
    audio_path: &str,
    audio_seconds: f64,
    spans: &[Span],
    paragraph_ends: &[usize],
) -> Result<Vec<UtteranceRecord>, CorpusError> {
    for (i, s) in spans.iter().enumerate() {
        if !(s.start >= 0.0 && s.end > s.start && s.end <= audio_seconds) {
            return Err(CorpusError::SpanOutOfBounds { index: i });
        }
        if i > 0 && s.start < spans[i - 1].end {
            return Err(CorpusError::OverlappingSpans { index: i });
        }
    }
    let mut groups: Vec<&[Span]> = Vec::new();
    if paragraph_ends.is_empty() {
        groups.extend(spans.chunks(1));
    } else {
        let mut from = 0;
        for (i, _) in spans.iter().enumerate() {
            if paragraph_ends.contains(&i) || i + 1 == spans.len() {
                groups.push(&spans[from..=i]);
                from = i + 1;
            }
        }
    }
    Ok(groups
        .into_iter()
        .enumerate()
        .map(|(n, g)| {
            let text = g.iter().map(|s| s.text.trim()).filter(|t| !t.is_empty()).collect::<Vec<_>>().join(" ");
            UtteranceRecord::new(format!("{chapter_id}_{:04}", n + 1), audio_path, g[0].start, g[g.len() - 1].end, text)
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spans() -> Vec<Span> {
        [(0.0, 1.0, "Un."), (1.2, 2.0, "Deux."), (2.5, 4.0, "Trois.")]
            .into_iter()
            .map(|(start, end, t)| Span { start, end, text: t.into() })
            .collect()
    }

    #[test]
    fn paragraph_break_groups_spans() {
        let recs = split_chapters("ch1", "ch1.wav", 5.0, &spans(), &[1]).unwrap();
        assert_eq!(recs.len(), 2);
        assert_eq!((recs[0].start, recs[0].end, recs[0].transcript.as_str()), (0.0, 2.0, "Un. Deux."));
        assert_eq!((recs[1].start, recs[1].end, recs[1].transcript.as_str()), (2.5, 4.0, "Trois."));
        assert_eq!(recs[1].utt_id, "ch1_0002");
    }

    #[test]
    fn no_marks_gives_one_record_per_span() {
        let recs = split_chapters("c", "c.wav", 5.0, &spans(), &[]).unwrap();
        assert_eq!(recs.len(), 3);
    }

    #[test]
    fn overlap_and_bounds() {
        let mut s = spans();
        s[1].start = 0.5;
        assert!(matches!(split_chapters("c", "c.wav", 5.0, &s, &[]), Err(CorpusError::OverlappingSpans { index: 1 })));
        assert!(matches!(split_chapters("c", "c.wav", 3.0, &spans(), &[]), Err(CorpusError::SpanOutOfBounds { index: 2 })));
    }
}
