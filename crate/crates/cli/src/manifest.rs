//! Manifest files with audio paths relative to the manifest's directory.

use std::collections::HashSet;
use std::fs::File;
use std::io::{BufReader, BufWriter};
use std::path::{Component, Path, PathBuf};

use toucan_prep::corpus::{read_manifest, write_manifest, UtteranceRecord};

use crate::error::CliError;

/// Lexically normalized absolute path.
pub fn absolute(path: &Path) -> PathBuf {
    let abs = std::path::absolute(path).unwrap_or_else(|_| path.to_path_buf());
    let mut out = PathBuf::new();
    for c in abs.components() {
        match c {
            Component::ParentDir => {
                out.pop();
            }
            Component::CurDir => {}
            other => out.push(other),
        }
    }
    out
}

/// `path` relative to the directory `base`; both are made absolute first.
pub fn relative_to(path: &Path, base: &Path) -> PathBuf {
    let (p, b) = (absolute(path), absolute(base));
    let pc: Vec<_> = p.components().collect();
    let bc: Vec<_> = b.components().collect();
    let common = pc.iter().zip(&bc).take_while(|(x, y)| x == y).count();
    if common == 0 {
        return p;
    }
    let mut out = PathBuf::new();
    for _ in common..bc.len() {
        out.push("..");
    }
    for c in &pc[common..] {
        out.push(c);
    }
    out
}

fn parent_dir(path: &Path) -> PathBuf {
    absolute(path).parent().map(Path::to_path_buf).unwrap_or_else(|| PathBuf::from("/"))
}

/// Reads a manifest and makes every audio path absolute.
pub fn load(path: &Path) -> Result<Vec<UtteranceRecord>, CliError> {
    let file = File::open(path).map_err(|e| CliError::input(format!("cannot open manifest {}: {e}", path.display())))?;
    let mut records = read_manifest(BufReader::new(file))
        .map_err(|e| CliError::from(e).with_context(&path.display().to_string()))?;
    let base = parent_dir(path);
    let mut seen = HashSet::new();
    for r in &mut records {
        if !seen.insert(r.utt_id.clone()) {
            return Err(CliError::validation(format!("duplicate utt_id {}", r.utt_id)));
        }
        let p = Path::new(&r.audio_path);
        if !r.audio_path.is_empty() && p.is_relative() {
            r.audio_path = absolute(&base.join(p)).to_string_lossy().into_owned();
        }
    }
    Ok(records)
}

/// Sorts by utt_id, rewrites audio paths relative to the manifest's
/// directory and writes JSONL.
pub fn store(path: &Path, mut records: Vec<UtteranceRecord>) -> Result<(), CliError> {
    records.sort_by(|a, b| a.utt_id.cmp(&b.utt_id));
    let base = parent_dir(path);
    std::fs::create_dir_all(&base)?;
    for r in &mut records {
        if !r.audio_path.is_empty() {
            r.audio_path = relative_to(Path::new(&r.audio_path), &base).to_string_lossy().into_owned();
        }
    }
    let file = File::create(path).map_err(|e| CliError::runtime(format!("cannot create {}: {e}", path.display())))?;
    write_manifest(BufWriter::new(file), &records)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn relative_paths() {
        assert_eq!(relative_to(Path::new("/a/b/c.wav"), Path::new("/a/b")), PathBuf::from("c.wav"));
        assert_eq!(relative_to(Path::new("/a/x/c.wav"), Path::new("/a/b")), PathBuf::from("../x/c.wav"));
        assert_eq!(absolute(Path::new("/a/b/../c/./d")), PathBuf::from("/a/c/d"));
    }

    #[test]
    fn store_then_load_resolves_against_the_manifest() {
        let dir = tempfile::tempdir().unwrap();
        let audio = dir.path().join("audio/u1.wav");
        let rec = UtteranceRecord::new("u1", audio.to_string_lossy(), 0.0, 1.0, "x");
        let m = dir.path().join("out/manifest.jsonl");
        store(&m, vec![rec]).unwrap();
        let text = std::fs::read_to_string(&m).unwrap();
        assert!(text.contains("\"audio_path\":\"../audio/u1.wav\""), "{text}");
        let back = load(&m).unwrap();
        assert_eq!(PathBuf::from(&back[0].audio_path), absolute(&audio));
    }

    #[test]
    fn duplicate_ids_are_rejected() {
        let dir = tempfile::tempdir().unwrap();
        let m = dir.path().join("m.jsonl");
        let line = r#"{"utt_id":"a","audio_path":"a.wav","start":0.0,"end":1.0,"transcript":""}"#;
        std::fs::write(&m, format!("{line}\n{line}\n")).unwrap();
        assert_eq!(load(&m).unwrap_err().kind, crate::error::Kind::Validation);
    }
}
