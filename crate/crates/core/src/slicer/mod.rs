//! Loop-aligned slicing of functions into snippets, and the inverse
//! reassembly.
//!
//! Block 0 of every function is the function itself; blocks `1..=k` are its
//! loops ordered by start position. Each block's directly nested loops are
//! replaced by a marker token `<<{block_id}>>`.

mod engine;
mod export;
mod reassemble;

use std::collections::{BTreeMap, HashSet};
use std::ops::Range;

use indexmap::IndexMap;
use petgraph::algo::tarjan_scc;
use petgraph::graph::DiGraph;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::ctext::{code_tokens, CTokenKind};
use crate::wat::{tokenize, FuncRef, TokenKind, WatFunction, WatModule};

pub use engine::slice_spans;
pub use export::{write_blocks, ManifestRecord, MANIFEST_SCHEMA};
pub use reassemble::{find_markers, reassemble, reassemble_lenient, replace_markers, Reassembled};

pub const MARKER_OPEN: &str = "<<";
pub const MARKER_CLOSE: &str = ">>";

pub fn marker_token(block_id: &str) -> String {
    format!("{MARKER_OPEN}{block_id}{MARKER_CLOSE}")
}

pub fn block_id(function: &str, index: usize) -> String {
    format!("{function}_{index}")
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SliceError {
    #[error("loops {first:?} and {second:?} in `{function}` partially overlap")]
    Overlap { function: String, first: Range<usize>, second: Range<usize> },
    #[error("loop span {span:?} lies outside `{function}`")]
    SpanOutOfBounds { function: String, span: Range<usize> },
    #[error("marker refers to missing block `{0}`")]
    UnresolvedMarker(String),
    #[error("marker cycle through block `{0}`")]
    CyclicMarker(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Language {
    Wat,
    C,
}

impl Language {
    pub fn extension(self) -> &'static str {
        match self {
            Language::Wat => "wat",
            Language::C => "c",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MarkerRef {
    pub child_block_id: String,
    pub token: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Snippet {
    pub block_id: String,
    pub function: String,
    pub index: usize,
    pub text: String,
    pub markers: Vec<MarkerRef>,
    pub language: Language,
    /// 0-based source lines covered by the block.
    pub start_line: usize,
    pub end_line: usize,
}

impl Snippet {
    /// Loop constructs in the text that are not hidden behind a marker.
    pub fn unmarked_loops(&self) -> usize {
        count_loops(&self.text, self.language)
    }
}

/// Counts `loop` instructions (wat) or `for`/`while` keywords (C; a
/// do-while contributes its single `while`).
pub fn count_loops(text: &str, language: Language) -> usize {
    match language {
        Language::Wat => match tokenize(text) {
            Ok(toks) => toks.iter().filter(|t| t.kind == TokenKind::Atom && t.text == "loop").count(),
            Err(_) => text.split(|c: char| c.is_whitespace() || c == '(' || c == ')').filter(|w| *w == "loop").count(),
        },
        Language::C => code_tokens(text)
            .iter()
            .filter(|t| t.kind == CTokenKind::Keyword && (t.text == "for" || t.text == "while"))
            .count(),
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SlicedProgram {
    pub ordered_functions: Vec<usize>,
    pub blocks: IndexMap<String, Snippet>,
}

impl SlicedProgram {
    /// Snippets of one function in block-index order.
    pub fn function_blocks<'a>(&'a self, name: &'a str) -> impl Iterator<Item = &'a Snippet> + 'a {
        self.blocks.values().filter(move |s| s.function == name)
    }

    pub fn texts(&self) -> BTreeMap<String, String> {
        self.blocks.iter().map(|(k, s)| (k.clone(), s.text.clone())).collect()
    }
}

/// Orders defined functions so that callees come before callers.
///
/// Strongly connected components are treated as units and flattened in
/// ascending index order. Components are visited in repeated passes in
/// order of their smallest member; a component is emitted once everything
/// it calls outside itself has been emitted.
pub fn order_functions(module: &WatModule) -> Vec<usize> {
    let n = module.functions.len();
    let mut graph = DiGraph::<usize, ()>::with_capacity(n, 0);
    let nodes: Vec<_> = (0..n).map(|i| graph.add_node(i)).collect();
    for f in &module.functions {
        for c in &f.callees {
            if let FuncRef::Defined(j) = *c {
                graph.add_edge(nodes[f.index], nodes[j], ());
            }
        }
    }
    let mut sccs: Vec<Vec<usize>> =
        tarjan_scc(&graph).into_iter().map(|c| c.into_iter().map(|ix| graph[ix]).collect()).collect();
    for c in &mut sccs {
        c.sort_unstable();
    }
    sccs.sort_by_key(|c| c[0]);
    let mut comp_of = vec![0; n];
    for (ci, c) in sccs.iter().enumerate() {
        for &f in c {
            comp_of[f] = ci;
        }
    }
    let deps: Vec<HashSet<usize>> = sccs
        .iter()
        .enumerate()
        .map(|(ci, c)| {
            c.iter()
                .flat_map(|&f| module.functions[f].callees.iter())
                .filter_map(|r| match r {
                    FuncRef::Defined(j) => Some(comp_of[*j]),
                    FuncRef::Import(_) => None,
                })
                .filter(|&d| d != ci)
                .collect()
        })
        .collect();

    let mut done = vec![false; sccs.len()];
    let mut order = Vec::with_capacity(n);
    while order.len() < n {
        for ci in 0..sccs.len() {
            if !done[ci] && deps[ci].iter().all(|&d| done[d]) {
                done[ci] = true;
                order.extend_from_slice(&sccs[ci]);
            }
        }
    }
    order
}

/// Cuts one wat function into its block-0 snippet and one snippet per loop.
pub fn slice_function(func: &WatFunction) -> Result<Vec<Snippet>, SliceError> {
    slice_spans(&func.name, &func.text, func.start_line, &func.relative_loop_spans(), Language::Wat)
}

pub fn slice_program(module: &WatModule) -> Result<SlicedProgram, SliceError> {
    let ordered_functions = order_functions(module);
    let mut blocks = IndexMap::new();
    for &i in &ordered_functions {
        for s in slice_function(&module.functions[i])? {
            blocks.insert(s.block_id.clone(), s);
        }
    }
    Ok(SlicedProgram { ordered_functions, blocks })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::wat::parse_module;

    fn module(funcs: &[&str]) -> WatModule {
        let body: String = funcs.iter().map(|f| format!("  {f}\n")).collect();
        parse_module(&format!("(module\n{body})")).unwrap()
    }

    #[test]
    fn ordering_without_calls_keeps_index_order() {
        let m = module(&["(func $a)", "(func $b)", "(func $c)"]);
        assert_eq!(order_functions(&m), vec![0, 1, 2]);
    }

    #[test]
    fn ordering_of_a_call_chain() {
        let m = module(&["(func $a call $b)", "(func $b call $c)", "(func $c)"]);
        assert_eq!(order_functions(&m), vec![2, 1, 0]);
    }

    #[test]
    fn ordering_with_mutual_recursion() {
        let m = module(&["(func $a call $b)", "(func $b call $a)", "(func $c call $a)"]);
        assert_eq!(order_functions(&m), vec![0, 1, 2]);
    }

    #[test]
    fn self_recursion_is_satisfied() {
        let m = module(&["(func $a call $b)", "(func $b call $b)"]);
        assert_eq!(order_functions(&m), vec![1, 0]);
    }

    #[test]
    fn imports_are_ignored_by_ordering() {
        let m = parse_module(
            "(module (import \"env\" \"p\" (func $p)) (func $a call $p call $b) (func $b call $p))",
        )
        .unwrap();
        assert_eq!(order_functions(&m), vec![1, 0]);
    }

    const FIXTURE: &str = "(module
  (func $f (result i32)
    i32.const 1)
  (func $g
    loop
      br 0
    end)
  (func $h
    block
      loop
        loop
          br 0
        end
        br 0
      end
    end))";

    #[test]
    fn loop_free_function_is_one_block() {
        let m = parse_module(FIXTURE).unwrap();
        let s = slice_function(&m.functions[0]).unwrap();
        assert_eq!(s.len(), 1);
        assert_eq!(s[0].block_id, "f_0");
        assert!(s[0].markers.is_empty());
        assert_eq!(s[0].text, m.functions[0].text);
    }

    #[test]
    fn single_loop_function() {
        let m = parse_module(FIXTURE).unwrap();
        let s = slice_function(&m.functions[1]).unwrap();
        let ids: Vec<_> = s.iter().map(|b| b.block_id.as_str()).collect();
        assert_eq!(ids, ["g_0", "g_1"]);
        assert_eq!(s[0].text, "(func $g\n    <<g_1>>)");
        assert_eq!(s[0].markers[0].token, "<<g_1>>");
        assert_eq!(s[1].text, "    loop\n      br 0\n    end");
        assert!(s[1].markers.is_empty());
    }

    #[test]
    fn nested_loops_form_a_chain() {
        let m = parse_module(FIXTURE).unwrap();
        let s = slice_function(&m.functions[2]).unwrap();
        assert_eq!(s.len(), 3);
        assert_eq!(s[0].markers.iter().map(|m| m.child_block_id.as_str()).collect::<Vec<_>>(), ["h_1"]);
        assert_eq!(s[1].markers.iter().map(|m| m.child_block_id.as_str()).collect::<Vec<_>>(), ["h_2"]);
        assert!(s[2].markers.is_empty());
        assert!(s[0].text.contains("      <<h_1>>\n"));
        assert!(s[1].text.contains("        <<h_2>>\n"));
        for b in &s {
            assert!(b.unmarked_loops() <= 1);
        }
    }

    #[test]
    fn program_round_trip() {
        let m = parse_module(FIXTURE).unwrap();
        let p = slice_program(&m).unwrap();
        assert_eq!(p.blocks.len(), 6);
        let out = reassemble(&p.texts()).unwrap();
        for f in &m.functions {
            assert_eq!(out[&f.name], f.text);
        }
    }

    #[test]
    fn empty_module() {
        let p = slice_program(&parse_module("(module)").unwrap()).unwrap();
        assert!(p.ordered_functions.is_empty());
        assert!(p.blocks.is_empty());
    }

    #[test]
    fn inline_loops_on_one_line() {
        let text = "(func $k (loop (br 0)) (loop (nop)))";
        let m = parse_module(&format!("(module {text})")).unwrap();
        let s = slice_function(&m.functions[0]).unwrap();
        assert_eq!(s[0].text, "(func $k <<k_1>> <<k_2>>)");
        assert_eq!(s[1].text, "(loop (br 0))");
        assert_eq!(reassemble(&s.iter().map(|b| (b.block_id.clone(), b.text.clone())).collect()).unwrap()["k"], text);
    }

    #[test]
    fn partial_overlap_is_rejected() {
        let err = slice_spans("x", "0123456789", 0, &[0..5, 3..8], Language::C).unwrap_err();
        assert!(matches!(err, SliceError::Overlap { .. }));
    }

    #[test]
    fn c_loop_counting() {
        assert_eq!(count_loops("do { x++; } while (x < 3); for (;;) {}", Language::C), 2);
        assert_eq!(count_loops("/* while */ \"for\" <<f_1>>", Language::C), 0);
    }
}
