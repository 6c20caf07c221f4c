use std::fs;
use std::io::{self, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::{Language, SlicedProgram};

pub const MANIFEST_SCHEMA: &str = "wadec.slice.v1";

/// One line of `manifest.jsonl`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ManifestRecord {
    pub schema: String,
    pub block_id: String,
    pub function: String,
    pub index: usize,
    pub file: String,
    pub language: Language,
    pub start_line: usize,
    pub end_line: usize,
    /// Child block ids referenced by markers in this block.
    pub children: Vec<String>,
}

/// Replaces characters that are unsafe in file names.
pub fn file_stem(block_id: &str) -> String {
    block_id
        .chars()
        .map(|c| if c.is_ascii_alphanumeric() || matches!(c, '_' | '-' | '.') { c } else { '_' })
        .collect()
}

/// Writes one file per block plus `manifest.jsonl` into `dir`.
pub fn write_blocks(program: &SlicedProgram, dir: &Path) -> io::Result<Vec<ManifestRecord>> {
    fs::create_dir_all(dir)?;
    let mut records = Vec::with_capacity(program.blocks.len());
    let mut manifest = io::BufWriter::new(fs::File::create(dir.join("manifest.jsonl"))?);
    for s in program.blocks.values() {
        let file = format!("{}.{}", file_stem(&s.block_id), s.language.extension());
        fs::write(dir.join(&file), &s.text)?;
        let rec = ManifestRecord {
            schema: MANIFEST_SCHEMA.to_string(),
            block_id: s.block_id.clone(),
            function: s.function.clone(),
            index: s.index,
            file,
            language: s.language,
            start_line: s.start_line,
            end_line: s.end_line,
            children: s.markers.iter().map(|m| m.child_block_id.clone()).collect(),
        };
        serde_json::to_writer(&mut manifest, &rec)?;
        manifest.write_all(b"\n")?;
        records.push(rec);
    }
    manifest.flush()?;
    Ok(records)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::slicer::slice_program;
    use crate::wat::parse_module;

    #[test]
    fn writes_blocks_and_manifest() {
        let m = parse_module("(module\n  (func $a\n    loop\n      nop\n    end))").unwrap();
        let p = slice_program(&m).unwrap();
        let dir = tempfile::tempdir().unwrap();
        let recs = write_blocks(&p, dir.path()).unwrap();
        assert_eq!(recs.len(), 2);
        assert_eq!(recs[0].children, vec!["a_1".to_string()]);
        assert_eq!(fs::read_to_string(dir.path().join("a_1.wat")).unwrap(), "    loop\n      nop\n    end");
        let lines = fs::read_to_string(dir.path().join("manifest.jsonl")).unwrap();
        assert_eq!(lines.lines().count(), 2);
        assert!(lines.contains("\"schema\":\"wadec.slice.v1\""));
    }

    #[test]
    fn stems_are_sanitized() {
        assert_eq!(file_stem("a/b c_1"), "a_b_c_1");
    }
}
