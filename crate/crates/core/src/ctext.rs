//! Lexical utilities for C source: tokens, comment stripping, and string
//! literal escaping.

use std::ops::Range;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CTokenKind {
    Ident,
    Keyword,
    Number,
    Str,
    Char,
    Punct,
    Comment,
    /// A whole preprocessor line such as `#include <stdio.h>`.
    Directive,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CToken<'a> {
    pub kind: CTokenKind,
    pub text: &'a str,
    pub span: Range<usize>,
}

pub const C_KEYWORDS: &[&str] = &[
    "auto", "break", "case", "char", "const", "continue", "default", "do", "double", "else", "enum", "extern",
    "float", "for", "goto", "if", "inline", "int", "long", "register", "restrict", "return", "short", "signed",
    "sizeof", "static", "struct", "switch", "typedef", "union", "unsigned", "void", "volatile", "while", "_Bool",
    "_Complex", "_Imaginary", "_Alignas", "_Alignof", "_Atomic", "_Generic", "_Noreturn", "_Static_assert",
    "_Thread_local",
];

pub fn is_keyword(s: &str) -> bool {
    C_KEYWORDS.contains(&s)
}

const PUNCT3: &[&str] = &[">>=", "<<=", "..."];
const PUNCT2: &[&str] = &[
    "->", "++", "--", "<<", ">>", "<=", ">=", "==", "!=", "&&", "||", "*=", "/=", "%=", "+=", "-=", "&=", "^=",
    "|=", "##",
];

/// Tokenizes C text, including comments and directives. Never fails: bytes
/// that start no token become single-byte punctuation, and unterminated
/// literals run to the end of the line.
pub fn tokenize(src: &str) -> Vec<CToken<'_>> {
    let b = src.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    let mut line_start = true;
    while i < b.len() {
        let c = b[i];
        if c == b'\n' {
            line_start = true;
            i += 1;
            continue;
        }
        if c.is_ascii_whitespace() {
            i += 1;
            continue;
        }
        let start = i;
        let kind;
        if c == b'#' && line_start {
            while i < b.len() && b[i] != b'\n' {
                if b[i] == b'\\' && i + 1 < b.len() && b[i + 1] == b'\n' {
                    i += 2;
                } else {
                    i += 1;
                }
            }
            kind = CTokenKind::Directive;
        } else if c == b'/' && b.get(i + 1) == Some(&b'/') {
            while i < b.len() && b[i] != b'\n' {
                i += 1;
            }
            kind = CTokenKind::Comment;
        } else if c == b'/' && b.get(i + 1) == Some(&b'*') {
            i += 2;
            while i < b.len() && !(b[i] == b'*' && b.get(i + 1) == Some(&b'/')) {
                i += 1;
            }
            i = (i + 2).min(b.len());
            kind = CTokenKind::Comment;
        } else if let Some(q) = literal_quote(b, i) {
            i = q + 1;
            let quote = b[q];
            while i < b.len() && b[i] != quote && b[i] != b'\n' {
                i += if b[i] == b'\\' && i + 1 < b.len() { 2 } else { 1 };
            }
            if i < b.len() && b[i] == quote {
                i += 1;
            }
            kind = if quote == b'"' { CTokenKind::Str } else { CTokenKind::Char };
        } else if c.is_ascii_alphabetic() || c == b'_' || c == b'$' {
            while i < b.len() && (b[i].is_ascii_alphanumeric() || b[i] == b'_' || b[i] == b'$') {
                i += 1;
            }
            kind = if is_keyword(&src[start..i]) { CTokenKind::Keyword } else { CTokenKind::Ident };
        } else if c.is_ascii_digit() || (c == b'.' && b.get(i + 1).is_some_and(u8::is_ascii_digit)) {
            while i < b.len() {
                let d = b[i];
                let exp_sign = (d == b'+' || d == b'-') && matches!(b[i - 1], b'e' | b'E' | b'p' | b'P');
                if d.is_ascii_alphanumeric() || d == b'.' || d == b'_' || exp_sign {
                    i += 1;
                } else {
                    break;
                }
            }
            kind = CTokenKind::Number;
        } else {
            let rest = &src[i..];
            let len = PUNCT3
                .iter()
                .chain(PUNCT2)
                .find(|p| rest.starts_with(*p))
                .map_or_else(|| rest.chars().next().map_or(1, char::len_utf8), |p| p.len());
            i += len;
            kind = CTokenKind::Punct;
        }
        line_start = false;
        out.push(CToken { kind, text: &src[start..i], span: start..i });
    }
    out
}

/// Position of the opening quote when a string/char literal (optionally with
/// an encoding prefix) starts at `i`.
fn literal_quote(b: &[u8], i: usize) -> Option<usize> {
    if b[i] == b'"' || b[i] == b'\'' {
        return Some(i);
    }
    for prefix in [&b"u8"[..], b"u", b"U", b"L"] {
        if b[i..].starts_with(prefix) {
            let q = i + prefix.len();
            if matches!(b.get(q), Some(b'"') | Some(b'\'')) {
                let boundary = i == 0 || !(b[i - 1].is_ascii_alphanumeric() || b[i - 1] == b'_');
                if boundary {
                    return Some(q);
                }
            }
        }
    }
    None
}

/// Code tokens only (comments and directives dropped).
pub fn code_tokens(src: &str) -> Vec<CToken<'_>> {
    tokenize(src).into_iter().filter(|t| !matches!(t.kind, CTokenKind::Comment | CTokenKind::Directive)).collect()
}

/// Replaces comments with a single space (block comments keep their
/// newlines so line structure survives).
pub fn strip_comments(src: &str) -> String {
    let mut out = String::with_capacity(src.len());
    let mut last = 0;
    for t in tokenize(src) {
        if t.kind == CTokenKind::Comment {
            out.push_str(&src[last..t.span.start]);
            let newlines = t.text.matches('\n').count();
            if newlines == 0 {
                out.push(' ');
            } else {
                out.extend(std::iter::repeat_n('\n', newlines));
            }
            last = t.span.end;
        }
    }
    out.push_str(&src[last..]);
    out
}

/// Non-blank lines after comment removal.
pub fn count_code_lines(src: &str) -> usize {
    strip_comments(src).lines().filter(|l| !l.trim().is_empty()).count()
}

/// Decodes the body of a C string literal token (quotes included) to bytes.
/// Returns `None` for wide/unicode-prefixed literals or malformed escapes.
pub fn unescape_c_string(token: &str) -> Option<Vec<u8>> {
    let inner = token.strip_prefix("u8").unwrap_or(token);
    let inner = inner.strip_prefix('"')?.strip_suffix('"')?;
    let b = inner.as_bytes();
    let mut out = Vec::with_capacity(b.len());
    let mut i = 0;
    while i < b.len() {
        if b[i] != b'\\' {
            out.push(b[i]);
            i += 1;
            continue;
        }
        let c = *b.get(i + 1)?;
        i += 2;
        match c {
            b'n' => out.push(b'\n'),
            b't' => out.push(b'\t'),
            b'r' => out.push(b'\r'),
            b'a' => out.push(7),
            b'b' => out.push(8),
            b'f' => out.push(12),
            b'v' => out.push(11),
            b'\\' | b'"' | b'\'' | b'?' => out.push(c),
            b'0'..=b'7' => {
                let mut v = (c - b'0') as u32;
                for _ in 0..2 {
                    match b.get(i) {
                        Some(d @ b'0'..=b'7') => {
                            v = v * 8 + (d - b'0') as u32;
                            i += 1;
                        }
                        _ => break,
                    }
                }
                out.push(u8::try_from(v).ok()?);
            }
            b'x' => {
                let start = i;
                while i < b.len() && b[i].is_ascii_hexdigit() {
                    i += 1;
                }
                let v = u32::from_str_radix(std::str::from_utf8(&b[start..i]).ok()?, 16).ok()?;
                out.push(u8::try_from(v).ok()?);
            }
            _ => return None,
        }
    }
    Some(out)
}

/// Renders text as a C string literal with canonical escapes. Printable ASCII
/// and non-ASCII UTF-8 pass through; other control bytes use 3-digit octal.
pub fn escape_c_string(text: &str) -> String {
    let mut out = String::with_capacity(text.len() + 2);
    out.push('"');
    for ch in text.chars() {
        match ch {
            '\n' => out.push_str("\\n"),
            '\t' => out.push_str("\\t"),
            '\r' => out.push_str("\\r"),
            '\\' => out.push_str("\\\\"),
            '"' => out.push_str("\\\""),
            c if (c as u32) < 0x20 || c as u32 == 0x7f => out.push_str(&format!("\\{:03o}", c as u32)),
            c => out.push(c),
        }
    }
    out.push('"');
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn kinds(src: &str) -> Vec<(CTokenKind, &str)> {
        tokenize(src).into_iter().map(|t| (t.kind, t.text)).collect()
    }

    #[test]
    fn basic_tokens() {
        use CTokenKind::*;
        assert_eq!(
            kinds("int x = a<<=2; // hi\nprintf(\"a\\\"b\");"),
            vec![
                (Keyword, "int"),
                (Ident, "x"),
                (Punct, "="),
                (Ident, "a"),
                (Punct, "<<="),
                (Number, "2"),
                (Punct, ";"),
                (Comment, "// hi"),
                (Ident, "printf"),
                (Punct, "("),
                (Str, "\"a\\\"b\""),
                (Punct, ")"),
                (Punct, ";"),
            ]
        );
    }

    #[test]
    fn directives_and_numbers() {
        use CTokenKind::*;
        assert_eq!(
            kinds("#include <stdio.h>\nx = 1.5e-3f + 0x1F;"),
            vec![
                (Directive, "#include <stdio.h>"),
                (Ident, "x"),
                (Punct, "="),
                (Number, "1.5e-3f"),
                (Punct, "+"),
                (Number, "0x1F"),
                (Punct, ";"),
            ]
        );
    }

    #[test]
    fn prefixed_literals() {
        use CTokenKind::*;
        assert_eq!(kinds("L'a' u8\"b\" Lx"), vec![(Char, "L'a'"), (Str, "u8\"b\""), (Ident, "Lx")]);
    }

    #[test]
    fn comments_are_stripped_keeping_lines() {
        let src = "a; /* x\ny */ b; // c\nd;";
        assert_eq!(strip_comments(src), "a; \n b;  \nd;");
        assert_eq!(count_code_lines("// only\n\n  x;\n/* a\n*/\n"), 1);
    }

    #[test]
    fn unescape_variants() {
        assert_eq!(unescape_c_string(r#""Hi\n""#).unwrap(), b"Hi\n");
        assert_eq!(unescape_c_string(r#""\"q\"\\""#).unwrap(), b"\"q\"\\");
        assert_eq!(unescape_c_string(r#""\x41\101\0""#).unwrap(), b"AA\0");
        assert_eq!(unescape_c_string(r#""\q""#), None);
        assert_eq!(unescape_c_string(r#"L"w""#), None);
    }

    #[test]
    fn escape_is_canonical() {
        assert_eq!(escape_c_string("Hi\n\"q\"\\\t"), r#""Hi\n\"q\"\\\t""#);
        assert_eq!(escape_c_string("\x01é"), "\"\\001é\"");
    }

    proptest! {
        #[test]
        fn escape_then_unescape_is_identity(s in "\\PC{0,24}|[\\x00-\\x7f]{0,24}") {
            let lit = escape_c_string(&s);
            let back = unescape_c_string(&lit).unwrap();
            prop_assert_eq!(back, s.as_bytes());
        }
    }
}
