use std::collections::BTreeSet;

use num_traits::Float;
use serde::{Deserialize, Serialize};

use super::syntax::{function_definitions, function_regions, parse_c};

/// Fraction of detected function regions that parse cleanly. `None` for
/// input with no code at all; input with no detectable function but parse
/// errors scores 0.
pub fn syntactic_completeness<F: Float>(dec_text: &str) -> Option<F> {
    let regions = function_regions(dec_text);
    if regions.is_empty() {
        if crate::ctext::code_tokens(dec_text).is_empty() || !parse_c(dec_text).root_node().has_error() {
            return None;
        }
        return Some(F::zero());
    }
    let valid = regions.iter().filter(|r| r.valid).count();
    Some(F::from(valid).unwrap() / F::from(regions.len()).unwrap())
}

/// Names of the functions defined without parse errors.
pub fn valid_function_names(text: &str) -> BTreeSet<String> {
    function_regions(text).into_iter().filter(|r| r.valid).map(|r| r.name).collect()
}

pub fn source_function_names(text: &str) -> BTreeSet<String> {
    let tree = parse_c(text);
    function_definitions(text, &tree).into_iter().map(|f| f.name).collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FunctionCompleteness<F> {
    pub score: F,
    pub matched: usize,
    pub source_functions: usize,
    /// Valid decompiled functions with no source counterpart.
    pub extra: Vec<String>,
}

/// Share of source functions that the decompiled text defines validly.
/// `None` when the source has no functions.
pub fn function_completeness<F: Float>(src_text: &str, dec_text: &str) -> Option<FunctionCompleteness<F>> {
    let src = source_function_names(src_text);
    if src.is_empty() {
        return None;
    }
    let dec = valid_function_names(dec_text);
    let matched = src.intersection(&dec).count();
    Some(FunctionCompleteness {
        score: F::from(matched).unwrap() / F::from(src.len()).unwrap(),
        matched,
        source_functions: src.len(),
        extra: dec.difference(&src).cloned().collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    const FOUR: &str = "int a(void) { return 1; }\nint b(void) { return 2; }\nint c(int x) {\n  return x;\n}\n\
                        void d(void) {\n}\n";

    #[test]
    fn syntactic_examples() {
        assert_eq!(syntactic_completeness::<f64>(FOUR), Some(1.0));
        let broken = "int a(void) {\n  return 1;\n}\nint b(int x) {\n  if (x) {\n    return 2;\n}\n";
        assert_eq!(syntactic_completeness::<f64>(broken), Some(0.5));
        assert_eq!(syntactic_completeness::<f64>(""), None);
        assert_eq!(syntactic_completeness::<f64>("int x = 1;\n"), None);
        assert_eq!(syntactic_completeness::<f64>("}} garbage {{ ;"), Some(0.0));
    }

    #[test]
    fn function_examples() {
        let src = "int f(void) { return 1; }\nint g(void) { return 2; }\n";
        assert_eq!(function_completeness::<f64>(src, src).unwrap().score, 1.0);
        let one = function_completeness::<f64>(src, "int f(void) { return 1; }\n").unwrap();
        assert_eq!(one.score, 0.5);
        let broken = "int f(void) { return 1; }\nint g(void) { return 2;\n";
        assert_eq!(function_completeness::<f64>(src, broken).unwrap().score, 0.5);
        let extra = function_completeness::<f64>(src, &format!("{src}int h(void) {{ return 3; }}\n")).unwrap();
        assert_eq!(extra.score, 1.0);
        assert_eq!(extra.extra, vec!["h".to_string()]);
        assert!(function_completeness::<f64>("int x;", src).is_none());
    }
}
