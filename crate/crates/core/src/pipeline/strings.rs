use serde::{Deserialize, Serialize};

use crate::ctext::{escape_c_string, tokenize, CTokenKind};
use crate::wat::OffsetStringMap;

pub const STRING_PLACEHOLDER_PREFIX: &str = "STR_";

pub fn placeholder(offset: u64) -> String {
    format!("{STRING_PLACEHOLDER_PREFIX}{offset}")
}

/// Offset named by a placeholder identifier.
pub fn parse_placeholder(ident: &str) -> Option<u64> {
    let digits = ident.strip_prefix(STRING_PLACEHOLDER_PREFIX)?;
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) || (digits.len() > 1 && digits.starts_with('0')) {
        return None;
    }
    digits.parse().ok()
}

/// Placeholder offsets in identifier position, in order of appearance.
pub fn placeholders_in(c_text: &str) -> Vec<u64> {
    tokenize(c_text)
        .iter()
        .filter(|t| t.kind == CTokenKind::Ident)
        .filter_map(|t| parse_placeholder(t.text))
        .collect()
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct RecoveredText {
    pub text: String,
    pub recovered: usize,
    /// Offsets with no string in the map, in order of appearance.
    pub unresolved: Vec<u64>,
}

/// Replaces each `STR_{offset}` identifier with the quoted, escaped string at
/// that offset. Placeholders in comments and literals are not identifiers and
/// stay as they are.
pub fn recover_strings(c_text: &str, strings: &OffsetStringMap) -> RecoveredText {
    let mut out = RecoveredText { text: String::with_capacity(c_text.len()), ..Default::default() };
    let mut last = 0;
    for t in tokenize(c_text) {
        if t.kind != CTokenKind::Ident {
            continue;
        }
        let Some(off) = parse_placeholder(t.text) else { continue };
        match strings.get(off) {
            Some(s) => {
                out.text.push_str(&c_text[last..t.span.start]);
                out.text.push_str(&escape_c_string(s));
                last = t.span.end;
                out.recovered += 1;
            }
            None => out.unresolved.push(off),
        }
    }
    out.text.push_str(&c_text[last..]);
    out
}
