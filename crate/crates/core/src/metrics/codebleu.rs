//! CodeBLEU: equal-weight mix of n-gram BLEU, keyword-weighted BLEU, syntax
//! subtree match and def-use dataflow match.

use std::collections::BTreeMap;

use num_traits::Float;
use serde::{Deserialize, Serialize};
use tree_sitter::Node;

use super::syntax::{c_skeleton, parse_c, Skeleton};
use crate::ctext::{code_tokens, is_keyword};

const MAX_ORDER: usize = 4;
const KEYWORD_WEIGHT: f64 = 1.0;
const OTHER_WEIGHT: f64 = 0.2;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CodeBleu<F> {
    pub score: F,
    pub ngram: F,
    pub weighted_ngram: F,
    pub syntax: F,
    pub dataflow: F,
    /// The candidate failed to parse; syntax and dataflow were set to 0.
    pub parse_failure: bool,
}

fn ngrams<'t, 'a>(toks: &'t [&'a str], n: usize) -> BTreeMap<&'t [&'a str], usize> {
    let mut m = BTreeMap::new();
    for w in toks.windows(n) {
        *m.entry(w).or_insert(0) += 1;
    }
    m
}

/// Clipped precision of order `n`, with an optional per-token weight for
/// unigrams. `None` when the candidate has no n-grams of that order.
fn precision(reference: &[&str], candidate: &[&str], n: usize, weighted: bool) -> Option<f64> {
    let cand = ngrams(candidate, n);
    if cand.is_empty() {
        return None;
    }
    let refs = ngrams(reference, n);
    let weight = |g: &[&str]| {
        if weighted && n == 1 {
            if is_keyword(g[0]) {
                KEYWORD_WEIGHT
            } else {
                OTHER_WEIGHT
            }
        } else {
            1.0
        }
    };
    let (mut hit, mut total) = (0.0, 0.0);
    for (g, &c) in &cand {
        let w = weight(g);
        hit += w * c.min(refs.get(g).copied().unwrap_or(0)) as f64;
        total += w * c as f64;
    }
    Some(hit / total)
}

/// Sentence BLEU with uniform weights over the orders the candidate is long
/// enough to have, and the standard brevity penalty.
fn bleu(reference: &[&str], candidate: &[&str], weighted: bool) -> f64 {
    if candidate.is_empty() || reference.is_empty() {
        return 0.0;
    }
    let ps: Vec<f64> = (1..=MAX_ORDER).filter_map(|n| precision(reference, candidate, n, weighted)).collect();
    if ps.contains(&0.0) {
        return 0.0;
    }
    let log_mean = ps.iter().map(|p| p.ln()).sum::<f64>() / ps.len() as f64;
    let (c, r) = (candidate.len() as f64, reference.len() as f64);
    let bp = if c > r { 1.0 } else { (1.0 - r / c).exp() };
    bp * log_mean.exp()
}

fn subtrees(t: &Skeleton, out: &mut BTreeMap<String, usize>) {
    if !t.children.is_empty() {
        *out.entry(t.to_sexpr()).or_insert(0) += 1;
    }
    for c in &t.children {
        subtrees(c, out);
    }
}

fn syntax_match(reference: &Skeleton, candidate: &Skeleton) -> f64 {
    let (mut r, mut c) = (BTreeMap::new(), BTreeMap::new());
    subtrees(reference, &mut r);
    subtrees(candidate, &mut c);
    let total: usize = r.values().sum();
    if total == 0 {
        return if reference == candidate { 1.0 } else { 0.0 };
    }
    let hit: usize = r.iter().map(|(k, &n)| n.min(c.get(k).copied().unwrap_or(0))).sum();
    hit as f64 / total as f64
}

fn identifiers<'a>(node: Node<'_>, src: &'a str, out: &mut Vec<&'a str>) {
    if node.kind() == "identifier" {
        let is_callee = node
            .parent()
            .filter(|p| p.kind() == "call_expression")
            .and_then(|p| p.child_by_field_name("function"))
            .is_some_and(|f| f.id() == node.id());
        if !is_callee {
            out.push(&src[node.byte_range()]);
        }
        return;
    }
    let mut cursor = node.walk();
    for c in node.children(&mut cursor) {
        identifiers(c, src, out);
    }
}

fn first_identifier<'a>(node: Node<'_>, src: &'a str) -> Option<&'a str> {
    let mut ids = Vec::new();
    identifiers(node, src, &mut ids);
    ids.first().copied()
}

/// Syntactic def-use pairs `(defined, used)` with variable names replaced by
/// their order of first appearance.
pub fn def_use_pairs(src: &str) -> Vec<(String, String)> {
    let tree = parse_c(src);
    let mut raw: Vec<(&str, &str)> = Vec::new();
    let mut stack = vec![tree.root_node()];
    while let Some(n) = stack.pop() {
        let mut cursor = n.walk();
        stack.extend(n.children(&mut cursor));
        let (def, value, compound) = match n.kind() {
            "init_declarator" => (n.child_by_field_name("declarator"), n.child_by_field_name("value"), false),
            "assignment_expression" => {
                let op = n.child_by_field_name("operator").map(|o| &src[o.byte_range()]);
                (n.child_by_field_name("left"), n.child_by_field_name("right"), op != Some("="))
            }
            "update_expression" => (n.child_by_field_name("argument"), None, true),
            _ => continue,
        };
        let Some(d) = def.and_then(|d| first_identifier(d, src)) else { continue };
        let mut uses = Vec::new();
        if let Some(v) = value {
            identifiers(v, src, &mut uses);
        }
        if compound {
            uses.push(d);
        }
        raw.extend(uses.into_iter().map(|u| (d, u)));
    }
    raw.sort_unstable();
    let mut order: BTreeMap<&str, usize> = BTreeMap::new();
    let mut ids = Vec::new();
    identifiers(tree.root_node(), src, &mut ids);
    for id in ids {
        let k = order.len();
        order.entry(id).or_insert(k);
    }
    let norm = |s: &str| format!("var_{}", order.get(s).copied().unwrap_or(usize::MAX));
    let mut out: Vec<_> = raw.into_iter().map(|(d, u)| (norm(d), norm(u))).collect();
    out.sort();
    out
}

fn dataflow_match(reference: &str, candidate: &str) -> f64 {
    let r = def_use_pairs(reference);
    if r.is_empty() {
        return 1.0;
    }
    let mut c: BTreeMap<(String, String), usize> = BTreeMap::new();
    for p in def_use_pairs(candidate) {
        *c.entry(p).or_insert(0) += 1;
    }
    let mut hit = 0;
    for p in &r {
        if let Some(n) = c.get_mut(p).filter(|n| **n > 0) {
            *n -= 1;
            hit += 1;
        }
    }
    hit as f64 / r.len() as f64
}

pub fn codebleu<F: Float>(reference: &str, candidate: &str) -> CodeBleu<F> {
    let rt: Vec<&str> = code_tokens(reference).into_iter().map(|t| t.text).collect();
    let ct: Vec<&str> = code_tokens(candidate).into_iter().map(|t| t.text).collect();
    let f = |x: f64| F::from(x).unwrap();
    if ct.is_empty() {
        let z = F::zero();
        return CodeBleu { score: z, ngram: z, weighted_ngram: z, syntax: z, dataflow: z, parse_failure: false };
    }
    let ngram = bleu(&rt, &ct, false);
    let weighted = bleu(&rt, &ct, true);
    let cand_tree = parse_c(candidate);
    let parse_failure = cand_tree.root_node().has_error();
    let (syntax, dataflow) = if parse_failure {
        (0.0, 0.0)
    } else {
        let rs = c_skeleton(reference);
        let cs = c_skeleton(candidate);
        (syntax_match(&rs, &cs), dataflow_match(reference, candidate))
    };
    let score = 0.25 * (ngram + weighted + syntax + dataflow);
    CodeBleu {
        score: f(score).min(F::one()),
        ngram: f(ngram),
        weighted_ngram: f(weighted),
        syntax: f(syntax),
        dataflow: f(dataflow),
        parse_failure,
    }
}
