use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::{WatError, WatModule};

/// Decodes a wat string literal (with or without the surrounding quotes).
///
/// Supports `\NN` hex pairs, `\n`, `\t`, `\r`, `\\`, `\"`, `\'` and `\u{...}`.
pub fn decode_wat_string(literal: &str) -> Result<Vec<u8>, WatError> {
    let body = literal
        .strip_prefix('"')
        .and_then(|s| s.strip_suffix('"'))
        .unwrap_or(literal);
    let bytes = body.as_bytes();
    let mut out = Vec::with_capacity(bytes.len());
    let mut i = 0;
    while i < bytes.len() {
        if bytes[i] != b'\\' {
            out.push(bytes[i]);
            i += 1;
            continue;
        }
        let bad = |len: usize| WatError::BadEscape {
            offset: i,
            escape: String::from_utf8_lossy(&bytes[i..(i + len).min(bytes.len())]).into_owned(),
        };
        let Some(&c) = bytes.get(i + 1) else {
            return Err(bad(1));
        };
        match c {
            b'n' => out.push(b'\n'),
            b't' => out.push(b'\t'),
            b'r' => out.push(b'\r'),
            b'\\' => out.push(b'\\'),
            b'"' => out.push(b'"'),
            b'\'' => out.push(b'\''),
            b'u' => {
                let rest = &body[i + 2..];
                let close = rest.find('}').filter(|_| rest.starts_with('{')).ok_or_else(|| bad(3))?;
                let hex = &rest[1..close];
                let cp = u32::from_str_radix(&hex.replace('_', ""), 16).map_err(|_| bad(close + 3))?;
                let ch = char::from_u32(cp).ok_or_else(|| bad(close + 3))?;
                let mut buf = [0u8; 4];
                out.extend_from_slice(ch.encode_utf8(&mut buf).as_bytes());
                i += close + 3;
                continue;
            }
            h if h.is_ascii_hexdigit() => {
                let lo = bytes.get(i + 2).copied().filter(u8::is_ascii_hexdigit).ok_or_else(|| bad(3))?;
                let hi = (h as char).to_digit(16).unwrap() as u8;
                out.push(hi * 16 + (lo as char).to_digit(16).unwrap() as u8);
                i += 3;
                continue;
            }
            _ => return Err(bad(2)),
        }
        i += 2;
    }
    Ok(out)
}

/// Linear-memory offset → NUL-terminated string constant.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct OffsetStringMap {
    pub entries: BTreeMap<u64, String>,
}

impl OffsetStringMap {
    pub fn get(&self, offset: u64) -> Option<&str> {
        self.entries.get(&offset).map(String::as_str)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Offsets whose string equals `text` byte for byte, ascending.
    pub fn offsets_of(&self, text: &str) -> Vec<u64> {
        self.entries.iter().filter(|(_, s)| s.as_str() == text).map(|(o, _)| *o).collect()
    }

    /// Restricts the map to the given offsets.
    pub fn subset<'a>(&self, offsets: impl IntoIterator<Item = &'a u64>) -> OffsetStringMap {
        let entries = offsets
            .into_iter()
            .filter_map(|o| self.entries.get(o).map(|s| (*o, s.clone())))
            .collect();
        OffsetStringMap { entries }
    }
}

impl FromIterator<(u64, String)> for OffsetStringMap {
    fn from_iter<I: IntoIterator<Item = (u64, String)>>(iter: I) -> Self {
        OffsetStringMap { entries: iter.into_iter().collect() }
    }
}

/// Splits every data segment on NUL bytes and maps each non-empty piece to
/// its linear-memory address. Pieces that are not valid UTF-8 are skipped.
pub fn extract_data_strings(module: &WatModule) -> Result<OffsetStringMap, WatError> {
    let mut map = OffsetStringMap::default();
    for seg in &module.data_segments {
        let bytes = seg.bytes()?;
        let mut pos = 0usize;
        for piece in bytes.split(|b| *b == 0) {
            if !piece.is_empty() {
                match std::str::from_utf8(piece) {
                    Ok(s) => {
                        map.entries.insert(seg.base_offset + pos as u64, s.to_string());
                    }
                    Err(_) => log::debug!("skipping non-UTF-8 data at {}", seg.base_offset + pos as u64),
                }
            }
            pos += piece.len() + 1;
        }
    }
    Ok(map)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::wat::parse_module;

    #[test]
    fn decodes_escapes() {
        assert_eq!(decode_wat_string(r#""Hi\00""#).unwrap(), b"Hi\0");
        assert_eq!(decode_wat_string(r#""a\0a\22q\5c""#).unwrap(), b"a\n\"q\\");
        assert_eq!(decode_wat_string(r#""\n\t\\\"\'""#).unwrap(), b"\n\t\\\"'");
        assert_eq!(decode_wat_string(r#""\u{e9}""#).unwrap(), "é".as_bytes());
    }

    #[test]
    fn bad_escapes() {
        assert!(matches!(decode_wat_string(r#""\q""#), Err(WatError::BadEscape { .. })));
        assert!(matches!(decode_wat_string(r#""\0""#), Err(WatError::BadEscape { .. })));
        assert!(matches!(decode_wat_string(r#""\u{zz}""#), Err(WatError::BadEscape { .. })));
        assert!(matches!(decode_wat_string("\"abc\\\""), Err(WatError::BadEscape { .. })));
    }

    #[test]
    fn single_string_segment() {
        let m = parse_module(r#"(module (memory 1) (data (i32.const 1024) "Hi\00"))"#).unwrap();
        let map = extract_data_strings(&m).unwrap();
        assert_eq!(map.entries, BTreeMap::from([(1024, "Hi".to_string())]));
    }

    #[test]
    fn offsets_advance_past_terminators() {
        let m = parse_module(r#"(module (memory 1) (data (i32.const 2048) "A\00B\00"))"#).unwrap();
        let map = extract_data_strings(&m).unwrap();
        assert_eq!(map.entries, BTreeMap::from([(2048, "A".to_string()), (2050, "B".to_string())]));
    }

    #[test]
    fn no_segments_no_strings() {
        let m = parse_module("(module)").unwrap();
        assert!(extract_data_strings(&m).unwrap().is_empty());
    }

    #[test]
    fn concatenated_literals_and_empty_pieces() {
        let m = parse_module(r#"(module (data (i32.const 10) "\00\00ab" "c\00d"))"#).unwrap();
        let map = extract_data_strings(&m).unwrap();
        assert_eq!(map.entries, BTreeMap::from([(12, "abc".to_string()), (16, "d".to_string())]));
    }

    #[test]
    fn malformed_segment_escape_surfaces() {
        let m = parse_module(r#"(module (data (i32.const 0) "\zz"))"#).unwrap();
        assert!(matches!(extract_data_strings(&m), Err(WatError::BadEscape { .. })));
    }
}
