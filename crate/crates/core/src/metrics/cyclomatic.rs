use std::collections::BTreeMap;

use num_traits::Float;
use thiserror::Error;
use tree_sitter::Node;

use super::syntax::{function_definitions, parse_c};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CyclomaticError {
    #[error("no parseable function definition")]
    ParseError,
}

fn decisions(node: Node<'_>, src: &str) -> usize {
    let own = match node.kind() {
        "if_statement" | "for_statement" | "while_statement" | "do_statement" | "conditional_expression" => 1,
        "case_statement" => usize::from(node.child_by_field_name("value").is_some()),
        "binary_expression" => {
            let op = node.child_by_field_name("operator").map(|o| &src[o.byte_range()]);
            usize::from(matches!(op, Some("&&") | Some("||")))
        }
        _ => 0,
    };
    let mut cursor = node.walk();
    own + node.children(&mut cursor).map(|c| decisions(c, src)).sum::<usize>()
}

/// `V(G)` of the first function definition in `c_function_text`.
pub fn cyclomatic(c_function_text: &str) -> Result<usize, CyclomaticError> {
    let tree = parse_c(c_function_text);
    let f = function_definitions(c_function_text, &tree)
        .into_iter()
        .find(|f| !f.has_error)
        .ok_or(CyclomaticError::ParseError)?;
    let node = tree.root_node().descendant_for_byte_range(f.span.start, f.span.end).ok_or(CyclomaticError::ParseError)?;
    Ok(1 + decisions(node, c_function_text))
}

/// `V(G)` per function definition in a file. Definitions with parse errors are
/// skipped.
pub fn cyclomatic_per_function(c_text: &str) -> BTreeMap<String, usize> {
    let tree = parse_c(c_text);
    let root = tree.root_node();
    function_definitions(c_text, &tree)
        .into_iter()
        .filter(|f| !f.has_error)
        .filter_map(|f| {
            let node = root.descendant_for_byte_range(f.span.start, f.span.end)?;
            Some((f.name, 1 + decisions(node, c_text)))
        })
        .collect()
}

/// Mean over source functions of `min(Vs, Vd) / max(Vs, Vd)`; a source
/// function missing from the decompiled side scores 0. `None` when the
/// source has no functions.
pub fn ccn_similarity<F: Float>(src: &BTreeMap<String, usize>, dec: &BTreeMap<String, usize>) -> Option<F> {
    if src.is_empty() {
        return None;
    }
    let total = src.iter().fold(F::zero(), |acc, (name, &vs)| {
        acc + dec.get(name).map_or(F::zero(), |&vd| {
            F::from(vs.min(vd)).unwrap() / F::from(vs.max(vd)).unwrap()
        })
    });
    Some(total / F::from(src.len()).unwrap())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn spot_values() {
        assert_eq!(cyclomatic("int f(int a) { int b = a + 1; return b; }"), Ok(1));
        assert_eq!(cyclomatic("int f(int a) { if (a) return 1; return 0; }"), Ok(2));
        let seven = "int f(int n) {\n  int s = 0;\n  for (int i = 0; i < n; i++) {\n    if (i % 2) s++;\n  }\n  \
                     while (s > 10) {\n    if (s > 100 && n) s -= 10;\n    else s--;\n  }\n  if (s < 0) s = 0;\n  return s;\n}";
        assert_eq!(cyclomatic(seven), Ok(7));
        assert_eq!(cyclomatic("int x;"), Err(CyclomaticError::ParseError));
    }

    #[test]
    fn switch_ternary_and_do() {
        let src = "int f(int a) {\n  switch (a) {\n  case 1: a++; break;\n  case 2: a--; break;\n  default: break;\n  }\n  \
                   do { a = a > 3 ? a - 1 : a; } while (a || 0);\n  return a;\n}";
        // case ×2, do, ?:, ||
        assert_eq!(cyclomatic(src), Ok(6));
    }

    #[test]
    fn per_function_values_are_independent_of_concatenation() {
        let f = "int f(int a) { if (a) return 1; return 0; }\n";
        let g = "int g(int a) { while (a) a--; return a; }\n";
        let both = cyclomatic_per_function(&format!("{f}{g}"));
        assert_eq!(both["f"], cyclomatic(f).unwrap());
        assert_eq!(both["g"], cyclomatic(g).unwrap());
    }

    #[test]
    fn similarity_examples() {
        let m = |p: &[(&str, usize)]| p.iter().map(|(k, v)| (k.to_string(), *v)).collect::<BTreeMap<_, _>>();
        assert_eq!(ccn_similarity::<f64>(&m(&[("f", 3)]), &m(&[("f", 3)])), Some(1.0));
        assert_eq!(ccn_similarity::<f64>(&m(&[("f", 4)]), &m(&[("f", 2)])), Some(0.5));
        assert_eq!(ccn_similarity::<f64>(&m(&[("f", 4), ("g", 1)]), &m(&[("g", 1)])), Some(0.5));
        assert_eq!(ccn_similarity::<f64>(&m(&[]), &m(&[("g", 1)])), None);
    }
}
