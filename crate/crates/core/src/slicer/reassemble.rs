use std::collections::{BTreeMap, HashSet};
use std::sync::LazyLock;

use regex::Regex;

use super::SliceError;

/// Matches marker tokens, tolerating interior whitespace that a model may
/// introduce. Ids must end in `_<index>`, which keeps shifts like `a << b >> c`
/// out.
static MARKER_RE: LazyLock<Regex> =
    LazyLock::new(|| Regex::new(r"<<\s*([A-Za-z_.$][A-Za-z0-9_.$:\-]*_[0-9]+)\s*>>").unwrap());

/// Block ids of all marker tokens in `text`, in order of appearance.
pub fn find_markers(text: &str) -> Vec<String> {
    MARKER_RE.captures_iter(text).map(|c| c[1].to_string()).collect()
}

/// Rewrites every marker token with `f(block_id)`.
pub fn replace_markers(text: &str, mut f: impl FnMut(&str) -> String) -> String {
    MARKER_RE.replace_all(text, |c: &regex::Captures<'_>| f(&c[1])).into_owned()
}

/// Result of a lenient reassembly.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Reassembled {
    /// Function name → reconstructed text.
    pub functions: BTreeMap<String, String>,
    /// Marker ids that had no block; the token is left in place.
    pub unresolved: Vec<String>,
}

/// Substitutes markers depth-first and returns one text per root block.
///
/// A marker preceded only by indentation is replaced by the child re-indented
/// to that indentation; any other marker is replaced by the child verbatim.
///
/// Roots are the unreferenced `{name}_0` blocks; the function name is the id without the
/// `_0` suffix. Fails on a missing block or a cycle.
pub fn reassemble(blocks: &BTreeMap<String, String>) -> Result<BTreeMap<String, String>, SliceError> {
    let mut out = BTreeMap::new();
    for (id, name) in roots(blocks) {
        let mut visiting = HashSet::new();
        let text = expand(&id, blocks, &mut visiting, &mut None)?;
        out.insert(name, text);
    }
    Ok(out)
}

/// Like [`reassemble`] but leaves unresolved markers in place and reports them.
/// Cycles are still errors.
pub fn reassemble_lenient(blocks: &BTreeMap<String, String>) -> Result<Reassembled, SliceError> {
    let mut result = Reassembled::default();
    let mut unresolved = Some(Vec::new());
    for (id, name) in roots(blocks) {
        let mut visiting = HashSet::new();
        let text = expand(&id, blocks, &mut visiting, &mut unresolved)?;
        result.functions.insert(name, text);
    }
    result.unresolved = unresolved.unwrap_or_default();
    Ok(result)
}

fn roots(blocks: &BTreeMap<String, String>) -> Vec<(String, String)> {
    let referenced: HashSet<String> = blocks.values().flat_map(|t| find_markers(t)).collect();
    blocks
        .keys()
        .filter(|id| !referenced.contains(*id))
        .filter_map(|id| id.strip_suffix("_0").map(|name| (id.clone(), name.to_string())))
        .collect()
}

fn expand(
    id: &str,
    blocks: &BTreeMap<String, String>,
    visiting: &mut HashSet<String>,
    unresolved: &mut Option<Vec<String>>,
) -> Result<String, SliceError> {
    if !visiting.insert(id.to_string()) {
        return Err(SliceError::CyclicMarker(id.to_string()));
    }
    let text = &blocks[id];
    let mut lines = Vec::new();
    for line in text.split('\n') {
        let caps: Vec<_> = MARKER_RE.captures_iter(line).collect();
        if caps.is_empty() {
            lines.push(line.to_string());
            continue;
        }
        let mut rebuilt = String::new();
        let mut pos = 0;
        for c in &caps {
            let m = c.get(0).unwrap();
            rebuilt.push_str(&line[pos..m.start()]);
            let leading = pos == 0 && line[..m.start()].trim().is_empty();
            match child_text(&c[1], blocks, visiting, unresolved)? {
                Some(t) if leading => {
                    rebuilt.clear();
                    rebuilt.push_str(&rebase(&t, &line[..m.start()]));
                }
                Some(t) => rebuilt.push_str(&t),
                None => rebuilt.push_str(m.as_str()),
            }
            pos = m.end();
        }
        rebuilt.push_str(&line[pos..]);
        lines.push(rebuilt);
    }
    visiting.remove(id);
    Ok(lines.join("\n"))
}

fn child_text(
    child: &str,
    blocks: &BTreeMap<String, String>,
    visiting: &mut HashSet<String>,
    unresolved: &mut Option<Vec<String>>,
) -> Result<Option<String>, SliceError> {
    if blocks.contains_key(child) {
        return expand(child, blocks, visiting, unresolved).map(Some);
    }
    match unresolved {
        Some(list) => {
            list.push(child.to_string());
            Ok(None)
        }
        None => Err(SliceError::UnresolvedMarker(child.to_string())),
    }
}

/// Re-indents `text` so that its first line's indentation becomes `indent`.
fn rebase(text: &str, indent: &str) -> String {
    let first = text.split('\n').next().unwrap_or("");
    let own = &first[..first.len() - first.trim_start().len()];
    if own == indent {
        return text.to_string();
    }
    text.split('\n')
        .map(|l| match l.strip_prefix(own) {
            _ if l.trim().is_empty() => String::new(),
            Some(rest) => format!("{indent}{rest}"),
            None => l.to_string(),
        })
        .collect::<Vec<_>>()
        .join("\n")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn blocks(pairs: &[(&str, &str)]) -> BTreeMap<String, String> {
        pairs.iter().map(|(k, v)| (k.to_string(), v.to_string())).collect()
    }

    #[test]
    fn identity_without_markers() {
        let out = reassemble(&blocks(&[("f_0", "int f(void) {\n  return 1;\n}")])).unwrap();
        assert_eq!(out["f"], "int f(void) {\n  return 1;\n}");
    }

    #[test]
    fn inline_substitution() {
        let out = reassemble(&blocks(&[("f_0", "A <<f_1>> B"), ("f_1", "X")])).unwrap();
        assert_eq!(out["f"], "A X B");
    }

    #[test]
    fn own_line_marker_rebases_indentation() {
        let b = blocks(&[
            ("g_0", "void g() {\n    <<g_1>>\n}"),
            ("g_1", "for (;;) {\n  <<g_2>>\n}"),
            ("g_2", "while (x) {\n  y();\n}"),
        ]);
        let out = reassemble(&b).unwrap();
        assert_eq!(out["g"], "void g() {\n    for (;;) {\n      while (x) {\n        y();\n      }\n    }\n}");
    }

    #[test]
    fn spaced_markers_are_accepted_but_shifts_are_not() {
        let out = reassemble(&blocks(&[("f_0", "x = a << b >> c;\n  << f_1 >>"), ("f_1", "y;")])).unwrap();
        assert_eq!(out["f"], "x = a << b >> c;\n  y;");
    }

    #[test]
    fn missing_block_is_reported() {
        let err = reassemble(&blocks(&[("f_0", "<<f_9>>")])).unwrap_err();
        assert_eq!(err, SliceError::UnresolvedMarker("f_9".into()));
        let lenient = reassemble_lenient(&blocks(&[("f_0", "a <<f_9>>")])).unwrap();
        assert_eq!(lenient.functions["f"], "a <<f_9>>");
        assert_eq!(lenient.unresolved, vec!["f_9".to_string()]);
    }

    #[test]
    fn cycles_are_detected() {
        let err = reassemble(&blocks(&[("f_0", "<<f_1>>"), ("f_1", "<<f_2>>"), ("f_2", "<<f_1>>")])).unwrap_err();
        assert!(matches!(err, SliceError::CyclicMarker(_)));
    }

    #[test]
    fn eleventh_block_is_not_a_root() {
        let mut pairs: Vec<(String, String)> = (1..=10).map(|i| (format!("f_{i}"), format!("<<f_{}>>", i + 1))).collect();
        pairs.push(("f_11".into(), "z".into()));
        pairs.push(("f_0".into(), "<<f_1>>".into()));
        let out = reassemble(&pairs.into_iter().collect()).unwrap();
        assert_eq!(out.len(), 1);
        assert_eq!(out["f"], "z");
    }

    #[test]
    fn repeated_reference_is_not_a_cycle() {
        let out = reassemble(&blocks(&[("f_0", "<<f_1>> <<f_1>>"), ("f_1", "z")])).unwrap();
        assert_eq!(out["f"], "z z");
    }
}
