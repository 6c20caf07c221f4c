//! Per-snippet prompt context: variables already defined by earlier
//! snippets of the same function, and declarations of called functions.

use std::collections::HashSet;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::ctext::{code_tokens, CToken, CTokenKind};
use crate::slicer::Snippet;
use crate::wat::{signature_to_declaration, tokenize, FuncRef, WatModule};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ContextError {
    #[error("block `{block_id}` calls `{target}`, which has no known signature")]
    UnknownCallee { block_id: String, target: String },
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct VariableDef {
    pub name: String,
    /// Type text; array extents are kept as a suffix, e.g. `char[16]`.
    pub c_type: String,
}

impl VariableDef {
    pub fn new(name: impl Into<String>, c_type: impl Into<String>) -> Self {
        VariableDef { name: name.into(), c_type: c_type.into() }
    }
}

impl fmt::Display for VariableDef {
    /// Renders as a declaration statement, e.g. `char local_16[4];`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.c_type.find('[') {
            Some(i) => write!(f, "{} {}{};", self.c_type[..i].trim_end(), self.name, &self.c_type[i..]),
            None if self.c_type.ends_with('*') => write!(f, "{}{};", self.c_type, self.name),
            None => write!(f, "{} {};", self.c_type, self.name),
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ContextBundle {
    pub defined_before: Vec<VariableDef>,
    pub callee_declarations: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
enum Callee {
    Direct(FuncRef),
    Indirect(usize),
}

/// Declarations for every distinct function called in a wat snippet, in
/// first-call order. Indirect calls are named `indirect_{type_index}`.
pub fn spatial_info(snippet: &Snippet, module: &WatModule) -> Result<Vec<String>, ContextError> {
    let unknown = |target: &str| ContextError::UnknownCallee {
        block_id: snippet.block_id.clone(),
        target: target.to_string(),
    };
    let atoms: Vec<&str> = match tokenize(&snippet.text) {
        Ok(toks) => toks.iter().map(|t| t.text).collect(),
        Err(_) => snippet
            .text
            .split(|c: char| c.is_whitespace())
            .flat_map(|w| w.split_inclusive(['(', ')']))
            .filter(|w| !w.is_empty())
            .collect(),
    };
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    let mut i = 0;
    while i < atoms.len() {
        let callee = match atoms[i] {
            "call" => {
                let target = atoms.get(i + 1).copied().unwrap_or("");
                i += 1;
                Callee::Direct(module.resolve_call(target).ok_or_else(|| unknown(target))?)
            }
            "call_indirect" => {
                let window = &atoms[i + 1..atoms.len().min(i + 6)];
                let pos = window.iter().position(|a| *a == "type").ok_or_else(|| unknown("call_indirect"))?;
                let target = window.get(pos + 1).copied().unwrap_or("");
                Callee::Indirect(module.resolve_type(target).ok_or_else(|| unknown(target))?)
            }
            _ => {
                i += 1;
                continue;
            }
        };
        i += 1;
        if seen.insert(callee.clone()) {
            let sig = match callee {
                Callee::Direct(f) => module.signature(f).cloned(),
                Callee::Indirect(t) => module.indirect_signature(t),
            };
            out.push(signature_to_declaration(&sig.expect("resolved callee has a signature")));
        }
    }
    Ok(out)
}

/// `params` followed by every variable declared at statement level in the
/// prior snippets, deduplicated by name in encounter order.
pub fn temporal_info<'a>(prior_c_snippets: impl IntoIterator<Item = &'a str>, params: &[VariableDef]) -> Vec<VariableDef> {
    let mut seen: HashSet<String> = HashSet::new();
    let mut out = Vec::new();
    let mut push = |v: VariableDef| {
        if seen.insert(v.name.clone()) {
            out.push(v);
        }
    };
    params.iter().cloned().for_each(&mut push);
    for text in prior_c_snippets {
        let found = extract_declarations(text);
        if found.is_empty() && !text.trim().is_empty() {
            log::trace!("no declarations recovered from prior snippet");
        }
        found.into_iter().for_each(&mut push);
    }
    out
}

const TYPE_KEYWORDS: &[&str] =
    &["int", "char", "short", "long", "float", "double", "unsigned", "signed", "void", "_Bool"];
const QUALIFIERS: &[&str] = &["const", "volatile", "static", "register", "auto", "extern", "restrict"];

fn is_typedef_name(s: &str) -> bool {
    matches!(s, "size_t" | "ssize_t" | "ptrdiff_t" | "bool" | "FILE" | "intptr_t" | "uintptr_t")
        || (s.ends_with("_t") && (s.starts_with("int") || s.starts_with("uint")))
}

/// Variables declared by `<type> <declarator> [= init], ...;` statements and
/// parameters of function headers. Bodies of nested parentheses and
/// initializers are skipped.
pub fn extract_declarations(c_text: &str) -> Vec<VariableDef> {
    let toks = code_tokens(c_text);
    let mut out = Vec::new();
    let mut start = 0;
    let mut depth = 0i32;
    for (i, t) in toks.iter().enumerate() {
        match t.text {
            "(" | "[" => depth += 1,
            ")" | "]" => depth -= 1,
            ";" | "{" | "}" if depth <= 0 => {
                declaration(&toks[start..i], t.text == "{", &mut out);
                start = i + 1;
                depth = 0;
            }
            _ => {}
        }
    }
    out
}

/// Splits off a leading type specifier; returns (type text, rest).
fn split_type<'t, 'a>(toks: &'t [CToken<'a>]) -> Option<(String, &'t [CToken<'a>])> {
    let mut i = 0;
    let mut words = Vec::new();
    while i < toks.len() && QUALIFIERS.contains(&toks[i].text) {
        i += 1;
    }
    match toks.get(i).map(|t| t.text) {
        Some("struct" | "union" | "enum") => {
            let name = toks.get(i + 1).filter(|t| t.kind == CTokenKind::Ident)?;
            words.push(format!("{} {}", toks[i].text, name.text));
            i += 2;
        }
        Some(w) if is_typedef_name(w) => {
            words.push(w.to_string());
            i += 1;
        }
        _ => {
            while i < toks.len() && (TYPE_KEYWORDS.contains(&toks[i].text) || QUALIFIERS.contains(&toks[i].text)) {
                if TYPE_KEYWORDS.contains(&toks[i].text) {
                    words.push(toks[i].text.to_string());
                }
                i += 1;
            }
        }
    }
    if words.is_empty() {
        return None;
    }
    while i < toks.len() && QUALIFIERS.contains(&toks[i].text) {
        i += 1;
    }
    Some((words.join(" "), &toks[i..]))
}

/// Parses one declarator (`**name[4]`) and returns (name, full type, rest).
fn declarator<'t, 'a>(base: &str, toks: &'t [CToken<'a>]) -> Option<(String, String, &'t [CToken<'a>])> {
    let mut i = 0;
    let mut stars = 0;
    while i < toks.len() && (toks[i].text == "*" || QUALIFIERS.contains(&toks[i].text)) {
        if toks[i].text == "*" {
            stars += 1;
        }
        i += 1;
    }
    let name = toks.get(i).filter(|t| t.kind == CTokenKind::Ident)?;
    i += 1;
    let mut ty = base.to_string();
    if stars > 0 {
        ty.push(' ');
        ty.push_str(&"*".repeat(stars));
    }
    while toks.get(i).map(|t| t.text) == Some("[") {
        let close = toks[i..].iter().position(|t| t.text == "]")? + i;
        ty.push('[');
        ty.push_str(&toks[i + 1..close].iter().map(|t| t.text).collect::<Vec<_>>().join(""));
        ty.push(']');
        i = close + 1;
    }
    Some((name.text.to_string(), ty, &toks[i..]))
}

fn declaration(stmt: &[CToken<'_>], opens_block: bool, out: &mut Vec<VariableDef>) {
    let Some((base, rest)) = split_type(stmt) else { return };
    let Some((name, ty, after)) = declarator(&base, rest) else { return };
    if after.first().map(|t| t.text) == Some("(") {
        if opens_block {
            params(after, out);
        }
        return;
    }
    out.push(VariableDef { name, c_type: ty });
    // further comma-separated declarators
    let mut depth = 0i32;
    for (k, t) in after.iter().enumerate() {
        match t.text {
            "(" | "[" | "{" => depth += 1,
            ")" | "]" | "}" => depth -= 1,
            "," if depth == 0 => {
                if let Some((n, ty, _)) = declarator(&base, &after[k + 1..]) {
                    out.push(VariableDef { name: n, c_type: ty });
                }
            }
            _ => {}
        }
    }
}

fn params(toks: &[CToken<'_>], out: &mut Vec<VariableDef>) {
    let Some(close) = toks.iter().rposition(|t| t.text == ")") else { return };
    let inner = &toks[1..close];
    let mut depth = 0i32;
    let mut start = 0;
    for k in 0..=inner.len() {
        let at_end = k == inner.len();
        if !at_end {
            match inner[k].text {
                "(" | "[" => depth += 1,
                ")" | "]" => depth -= 1,
                _ => {}
            }
        }
        if at_end || (inner[k].text == "," && depth == 0) {
            if let Some((base, rest)) = split_type(&inner[start..k]) {
                if let Some((name, ty, _)) = declarator(&base, rest) {
                    out.push(VariableDef { name, c_type: ty });
                }
            }
            start = k + 1;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::slicer::slice_function;
    use crate::wat::parse_module;

    fn names(v: &[VariableDef]) -> Vec<(String, String)> {
        v.iter().map(|d| (d.name.clone(), d.c_type.clone())).collect()
    }

    fn pairs(p: &[(&str, &str)]) -> Vec<(String, String)> {
        p.iter().map(|(a, b)| (a.to_string(), b.to_string())).collect()
    }

    #[test]
    fn temporal_examples() {
        assert!(temporal_info(std::iter::empty(), &[]).is_empty());
        assert_eq!(names(&temporal_info(["int local_16 = 0;"], &[])), pairs(&[("local_16", "int")]));
        let got = temporal_info(["double local_24; int local_16;"], &[VariableDef::new("a", "int")]);
        assert_eq!(names(&got), pairs(&[("a", "int"), ("local_24", "double"), ("local_16", "int")]));
    }

    #[test]
    fn temporal_is_monotone_and_deduplicated() {
        let a = temporal_info(["int x;"], &[]);
        let b = temporal_info(["int x;", "int x = 2; long y;"], &[]);
        assert!(a.iter().all(|v| b.contains(v)));
        assert_eq!(names(&b), pairs(&[("x", "int"), ("y", "long")]));
    }

    #[test]
    fn declaration_forms() {
        let src = "int main(int local_12, char **local_8) {\n  unsigned int a = f(1, 2), *b, c[4];\n  \
                   struct point p;\n  for (int i = 0; i < 3; i++) { x = 1; }\n  size_t n;\n  return 0;\n}";
        assert_eq!(
            names(&extract_declarations(src)),
            pairs(&[
                ("local_12", "int"),
                ("local_8", "char **"),
                ("a", "unsigned int"),
                ("b", "unsigned int *"),
                ("c", "unsigned int[4]"),
                ("p", "struct point"),
                ("n", "size_t"),
            ])
        );
    }

    #[test]
    fn prototypes_and_fragments() {
        assert!(extract_declarations("int add(int, int);\nvoid g(void);").is_empty());
        assert!(extract_declarations("<<f_1>>\nx = y;").is_empty());
        assert!(extract_declarations("while (x) { } ) }").is_empty());
    }

    #[test]
    fn display_forms() {
        assert_eq!(VariableDef::new("a", "int").to_string(), "int a;");
        assert_eq!(VariableDef::new("p", "char *").to_string(), "char *p;");
        assert_eq!(VariableDef::new("s", "char[16]").to_string(), "char s[16];");
    }

    const MODULE: &str = r#"(module
  (type (;0;) (func (param i32 i32) (result i32)))
  (type (;1;) (func (param f64)))
  (import "env" "printf" (func $printf (type 0)))
  (table 1 funcref)
  (func $add (type 0) (param i32 i32) (result i32)
    local.get 0
    local.get 1
    i32.add)
  (func $main (result i32)
    i32.const 1
    i32.const 2
    call $add
    i32.const 3
    call $add
    drop
    i32.const 0
    i32.const 0
    call $printf
    drop
    i32.const 0
    i32.const 4
    call $add
    drop
    f64.const 1
    i32.const 0
    call_indirect (type 1)
    i32.const 0))"#;

    #[test]
    fn spatial_examples() {
        let m = parse_module(MODULE).unwrap();
        let add = slice_function(&m.functions[0]).unwrap();
        assert!(spatial_info(&add[0], &m).unwrap().is_empty());
        let main = slice_function(&m.functions[1]).unwrap();
        assert_eq!(
            spatial_info(&main[0], &m).unwrap(),
            ["int add(int, int);", "int printf(int, int);", "void indirect_1(double);"]
        );
    }

    #[test]
    fn unknown_callee() {
        let m = parse_module(MODULE).unwrap();
        let mut s = slice_function(&m.functions[0]).unwrap().remove(0);
        s.text = "call $nope".into();
        assert!(matches!(spatial_info(&s, &m), Err(ContextError::UnknownCallee { .. })));
    }
}
