//! Grammar-based parsing of C (tree-sitter) and wat into node-type
//! skeletons, plus function-definition discovery.

use std::ops::Range;
use std::sync::LazyLock;

use regex::Regex;
use tree_sitter::{Node, Parser};

use super::tree::Tree;
use crate::wat::{tokenize, TokenKind};

pub type Skeleton = Tree<String>;

pub fn parse_c(text: &str) -> tree_sitter::Tree {
    let mut p = Parser::new();
    p.set_language(&tree_sitter_c::LANGUAGE.into()).expect("C grammar is compatible");
    p.parse(text, None).expect("parser has a language and no timeout")
}

fn skeleton_of(node: Node<'_>) -> Skeleton {
    let mut cursor = node.walk();
    let children = node.named_children(&mut cursor).filter(|c| c.kind() != "comment").map(skeleton_of).collect();
    Tree::node(node.kind().to_string(), children)
}

/// Named-node skeleton of C text, comments excluded.
pub fn c_skeleton(text: &str) -> Skeleton {
    skeleton_of(parse_c(text).root_node())
}

/// Skeleton of a wat text: each parenthesized form is a node labeled by its
/// leading keyword, flat instructions are leaves labeled by opcode, and flat
/// `block`/`loop`/`if` ... `end` sequences nest. Identifiers, literals and
/// immediates are dropped.
pub fn wat_skeleton(text: &str) -> Skeleton {
    let toks = match tokenize(text) {
        Ok(t) => t,
        Err(_) => return Tree::leaf("error".to_string()),
    };
    let mut stack: Vec<(Skeleton, bool)> = vec![(Tree::leaf("root".to_string()), true)];
    let mut expect_head = false;
    for t in &toks {
        match t.kind {
            TokenKind::LParen => {
                stack.push((Tree::leaf(String::new()), true));
                expect_head = true;
            }
            TokenKind::RParen => {
                // close flat blocks left open inside this form
                while stack.len() > 1 && !stack.last().unwrap().1 {
                    close(&mut stack);
                }
                if stack.len() > 1 {
                    close(&mut stack);
                }
                expect_head = false;
            }
            TokenKind::Atom if expect_head => {
                stack.last_mut().unwrap().0.label = t.text.to_string();
                expect_head = false;
            }
            TokenKind::Atom if crate::wat::is_opcode(t.text) && !NON_INSTR.contains(&t.text) => match t.text {
                "block" | "loop" | "if" => stack.push((Tree::leaf(t.text.to_string()), false)),
                "else" => stack.last_mut().unwrap().0.children.push(Tree::leaf("else".into())),
                "end" => {
                    if stack.len() > 1 && !stack.last().unwrap().1 {
                        close(&mut stack);
                    }
                }
                op => stack.last_mut().unwrap().0.children.push(Tree::leaf(op.to_string())),
            },
            _ => {}
        }
    }
    while stack.len() > 1 {
        close(&mut stack);
    }
    let root = stack.pop().unwrap().0;
    if root.children.len() == 1 {
        root.children.into_iter().next().unwrap()
    } else {
        root
    }
}

const NON_INSTR: &[&str] = &["i32", "i64", "f32", "f64", "v128", "funcref", "externref", "mut"];

fn close(stack: &mut Vec<(Skeleton, bool)>) {
    let (node, _) = stack.pop().unwrap();
    stack.last_mut().unwrap().0.children.push(node);
}

/// A top-level function definition found by the parser.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FunctionDef {
    pub name: String,
    pub span: Range<usize>,
    pub has_error: bool,
}

fn declarator_name(node: Node<'_>, src: &str) -> Option<String> {
    let mut n = node.child_by_field_name("declarator")?;
    loop {
        match n.kind() {
            "identifier" => return Some(src[n.byte_range()].to_string()),
            "function_declarator" | "pointer_declarator" | "parenthesized_declarator" | "attributed_declarator" => {
                n = n.child_by_field_name("declarator").or_else(|| n.named_child(0))?;
            }
            _ => return None,
        }
    }
}

/// Function definitions that are direct children of the translation unit.
pub fn function_definitions(src: &str, tree: &tree_sitter::Tree) -> Vec<FunctionDef> {
    let root = tree.root_node();
    let mut cursor = root.walk();
    root.children(&mut cursor)
        .filter(|n| n.kind() == "function_definition")
        .filter_map(|n| {
            Some(FunctionDef { name: declarator_name(n, src)?, span: n.byte_range(), has_error: n.has_error() })
        })
        .collect()
}

/// Each top-level function's text, by name, in file order.
pub fn function_texts(src: &str) -> Vec<(String, String)> {
    let tree = parse_c(src);
    function_definitions(src, &tree).into_iter().map(|f| (f.name, src[f.span].to_string())).collect()
}

static HEADER_RE: LazyLock<Regex> = LazyLock::new(|| {
    Regex::new(r"^[A-Za-z_][A-Za-z0-9_\s\*]*?\b([A-Za-z_][A-Za-z0-9_]*)\s*\([^;{}]*\)\s*(\{.*)?$").unwrap()
});

const NOT_HEADERS: &[&str] = &["if", "while", "for", "switch", "return", "sizeof", "do", "else"];

/// A function-shaped region of a file: from a column-0 header line up to the
/// next header.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FunctionRegion {
    pub name: String,
    pub text: String,
    /// Parses as a function definition named `name` with no error nodes.
    pub valid: bool,
}

/// Splits `src` at column-0 function headers and parses each region on its
/// own, so one broken function does not swallow its neighbours.
pub fn function_regions(src: &str) -> Vec<FunctionRegion> {
    let lines: Vec<&str> = src.split_inclusive('\n').collect();
    let mut starts = Vec::new();
    for (i, line) in lines.iter().enumerate() {
        let trimmed = line.trim_end();
        if let Some(c) = HEADER_RE.captures(trimmed) {
            let first_word = trimmed.split(|ch: char| !ch.is_alphanumeric() && ch != '_').next().unwrap_or("");
            if !NOT_HEADERS.contains(&first_word) && !NOT_HEADERS.contains(&&c[1]) {
                starts.push((i, c[1].to_string()));
            }
        }
    }
    let mut out = Vec::new();
    for (k, (start, name)) in starts.iter().enumerate() {
        let end = starts.get(k + 1).map_or(lines.len(), |(s, _)| *s);
        let text: String = lines[*start..end].concat();
        let tree = parse_c(&text);
        let valid = !tree.root_node().has_error()
            && function_definitions(&text, &tree).iter().any(|f| &f.name == name && !f.has_error);
        out.push(FunctionRegion { name: name.clone(), text, valid });
    }
    out
}
