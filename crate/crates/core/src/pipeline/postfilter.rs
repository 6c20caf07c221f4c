//! Cleanup of raw completions.

use crate::ctext::{code_tokens, CTokenKind};

use super::prompt::{LABEL_INPUT, LABEL_INSTRUCTION, LABEL_RESPONSE};

/// Strips an echoed prompt, prompt labels, code fences and leading blank
/// lines, then keeps only the first complete C fragment.
pub fn clean_completion(raw: &str, prompt: &str) -> String {
    let mut text = raw.strip_prefix(prompt).unwrap_or(raw);
    if let Some(rest) = text.trim_start().strip_prefix(LABEL_RESPONSE) {
        text = rest;
    }
    let mut end = text.len();
    for label in [LABEL_INSTRUCTION, LABEL_INPUT, LABEL_RESPONSE, "</s>"] {
        if let Some(i) = text.find(label) {
            end = end.min(i);
        }
    }
    let text = &text[..end];
    let lines: Vec<&str> = text.split('\n').filter(|l| !l.trim_start().starts_with("```")).collect();
    let start = lines.iter().position(|l| !l.trim().is_empty()).unwrap_or(lines.len());
    let joined = lines[start..].join("\n");
    let cut = first_fragment_end(&joined).unwrap_or(joined.len());
    joined[..cut].trim_end().to_string()
}

/// Byte offset just past the first complete top-level fragment: a braced
/// group (with a trailing `while (...);` or `else` branch), or a brace-less
/// statement ending in `;`. `None` if the text never completes.
pub fn first_fragment_end(text: &str) -> Option<usize> {
    let toks = code_tokens(text);
    let mut braces = 0i32;
    let mut parens = 0i32;
    let starts_with_do = toks.first().is_some_and(|t| t.kind == CTokenKind::Keyword && t.text == "do");
    let mut awaiting_do_while = starts_with_do;
    let mut i = 0;
    while i < toks.len() {
        let t = &toks[i];
        match t.text {
            "(" => parens += 1,
            ")" => parens -= 1,
            "{" => braces += 1,
            "}" => {
                braces -= 1;
                if braces == 0 && parens == 0 {
                    match toks.get(i + 1).map(|n| n.text) {
                        Some("else") => {}
                        Some("while") if awaiting_do_while => {}
                        Some(";") => return Some(toks[i + 1].span.end),
                        _ => return Some(t.span.end),
                    }
                }
            }
            "while" if braces == 0 && parens == 0 && awaiting_do_while && i > 0 => awaiting_do_while = false,
            ";" if braces == 0 && parens == 0 => {
                let continues = toks.get(i + 1).is_some_and(|n| n.text == "else");
                if !continues && !awaiting_do_while {
                    return Some(t.span.end);
                }
            }
            _ => {}
        }
        i += 1;
    }
    None
}
