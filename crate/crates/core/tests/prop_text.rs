mod common;

use std::collections::{BTreeMap, BTreeSet};

use common::arb_module;
use proptest::prelude::*;
use regex::Regex;
use wadec::context::{temporal_info, ContextBundle, VariableDef};
use wadec::ctext::{code_tokens, unescape_c_string};
use wadec::metrics::c_skeleton;
use wadec::pipeline::{
    decompile_module, recover_strings, synthesize_prompt, DecompileOptions, MockBackend, Mode, PromptConfig,
    SnippetStatus,
};
use wadec::renamer::{rename_c_source, OffsetRecord, VarEntry, VarOffsetMap};
use wadec::slicer::{find_markers, marker_token, slice_program, Language, Snippet};
use wadec::wat::OffsetStringMap;

fn c_statement(nvars: usize) -> impl Strategy<Value = String> {
    let v = 0..nvars;
    prop_oneof![
        (v.clone(), v.clone(), 0..9).prop_map(|(a, b, c)| format!("v{a} = v{b} + {c};")),
        (v.clone(), v.clone(), 0..9).prop_map(|(a, b, c)| format!("if (v{a} > {c}) v{b}--;")),
        (v.clone(), v.clone(), 1..9).prop_map(|(a, b, c)| format!("for (v{a} = 0; v{a} < {c}; v{a}++) {{ v{b} += v{a}; }}")),
        v.clone().prop_map(|a| format!("printf(\"v{a}=%d\\n\", v{a});")),
        (v.clone(), v).prop_map(|(a, b)| format!("q->v{a} = v{b} * p;")),
    ]
}

/// A C function over locals `v0..vN` and parameters `p`, `q`, with offsets
/// for `p` and each local.
fn arb_function() -> impl Strategy<Value = (String, Vec<VarEntry>)> {
    (1usize..6)
        .prop_flat_map(|n| {
            (Just(n), prop::collection::vec(c_statement(n), 0..8), prop::collection::btree_set(0u64..64, n + 1))
        })
        .prop_map(|(n, stmts, offsets)| {
            let mut text = String::from("int f(int p, struct pt *q) {\n");
            for i in 0..n {
                text.push_str(&format!("  int v{i} = {i};\n"));
            }
            for s in stmts {
                text.push_str(&format!("  {s}\n"));
            }
            text.push_str("  return v0 + p;\n}\n");
            let names = std::iter::once("p".to_string()).chain((0..n).map(|i| format!("v{i}")));
            let entries = names
                .zip(offsets.into_iter().map(|o| o * 4))
                .map(|(name, offset)| VarEntry { name, offset, c_type: "int".into() })
                .collect();
            (text, entries)
        })
}

fn arb_var() -> impl Strategy<Value = VariableDef> {
    ("[a-z_][a-z0-9_]{0,5}", prop::sample::select(vec!["int", "char *", "size_t", "char[16]"]))
        .prop_map(|(name, t)| VariableDef { name, c_type: t.to_string() })
}

#[derive(Debug, Clone, PartialEq)]
struct PromptInput {
    wat: String,
    vars: Vec<VariableDef>,
    decls: Vec<String>,
    mode: Mode,
    response: Option<String>,
}

fn arb_prompt_input() -> impl Strategy<Value = PromptInput> {
    (
        "[a-z0-9 .$()]{1,12}(\n[a-z0-9 .$()]{1,12}){0,2}",
        prop::collection::vec(arb_var(), 0..3),
        prop::collection::vec("int [a-z]{1,3}\\((int|void)\\);", 0..3),
        prop_oneof![Just(Mode::Finetune), Just(Mode::Inference)],
        "[a-z0-9 ;=]{0,12}",
    )
        .prop_map(|(wat, vars, decls, mode, r)| PromptInput {
            wat: wat.trim_end().to_string(),
            vars,
            decls,
            mode,
            response: (mode == Mode::Finetune).then_some(r),
        })
}

fn render(p: &PromptInput) -> String {
    let snippet = Snippet {
        block_id: "f_0".into(),
        function: "f".into(),
        index: 0,
        text: p.wat.clone(),
        markers: vec![],
        language: Language::Wat,
        start_line: 0,
        end_line: 0,
    };
    let ctx = ContextBundle { defined_before: p.vars.clone(), callee_declarations: p.decls.clone() };
    synthesize_prompt(&snippet, &ctx, p.mode, p.response.as_deref(), &PromptConfig::default()).unwrap().render()
}

fn arb_placeholder_text() -> impl Strategy<Value = String> {
    let piece = prop_oneof![
        "[a-z]{1,4}",
        prop::sample::select(vec![" ", "(", ")", ";", " + ", "\n", ", "]).prop_map(str::to_string),
        prop::sample::select(vec![0u64, 5, 1024, 1030, 2048]).prop_map(|o| format!("STR_{o}")),
    ];
    prop::collection::vec(piece, 0..16).prop_map(|v| v.concat())
}

fn arb_strings() -> impl Strategy<Value = OffsetStringMap> {
    prop::collection::btree_map(prop::sample::select(vec![0u64, 5, 1024, 2048]), "[ -~\n\t]{0,8}", 0..4)
        .prop_map(|m| m.into_iter().collect())
}

/// Wat block → C stand-in carrying the same markers.
fn c_stand_in(block: &Snippet) -> String {
    let head = if block.index == 0 { format!("void {}(void) {{", block.function) } else { "while (1) {".into() };
    let body: String = find_markers(&block.text).iter().map(|m| format!("  {}\n", marker_token(m))).collect();
    format!("{head}\n{body}}}")
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn temporal_info_only_grows(snips in prop::collection::vec(
        prop::collection::vec(prop_oneof![
            (0..6u8).prop_map(|i| format!("int v{i} = 1;")),
            (0..6u8).prop_map(|i| format!("v{i}++;")),
            (0..6u8).prop_map(|i| format!("char *s{i};")),
        ], 0..4).prop_map(|v| v.join("\n")), 0..6)
    ) {
        let params = vec![VariableDef { name: "p".into(), c_type: "int".into() }];
        let mut prev: BTreeSet<VariableDef> = BTreeSet::new();
        for n in 0..=snips.len() {
            let now: BTreeSet<VariableDef> =
                temporal_info(snips[..n].iter().map(String::as_str), &params).into_iter().collect();
            prop_assert!(now.is_superset(&prev));
            prev = now;
        }
    }

    #[test]
    fn renaming_is_idempotent_and_shape_preserving((text, entries) in arb_function()) {
        let once = rename_c_source(&text, &entries).unwrap();
        prop_assert_eq!(rename_c_source(&once, &entries).unwrap(), once.clone());
        prop_assert_eq!(code_tokens(&text).len(), code_tokens(&once).len());
        prop_assert_eq!(c_skeleton(&text), c_skeleton(&once));
        for i in 0..entries.len() - 1 {
            if text.contains(&format!("\"v{i}=")) {
                prop_assert!(once.contains(&format!("\"v{i}=")), "string literal changed");
            }
            if text.contains(&format!("q->v{i} ")) {
                prop_assert!(once.contains(&format!("q->v{i} ")), "member access changed");
            }
        }
    }

    #[test]
    fn renaming_targets_are_distinct((_t, entries) in arb_function()) {
        let records: Vec<OffsetRecord> = entries
            .iter()
            .map(|e| OffsetRecord { function: "f".into(), name: e.name.clone(), offset: e.offset, c_type: e.c_type.clone() })
            .collect();
        let map = VarOffsetMap::from_records(records.clone()).unwrap();
        let targets: BTreeSet<String> = map.entries("f").iter().map(VarEntry::target).collect();
        prop_assert_eq!(targets.len(), entries.len());
        let mut clash = records;
        let first = clash[0].offset;
        clash.push(OffsetRecord { function: "f".into(), name: "extra".into(), offset: first, c_type: "int".into() });
        prop_assert!(VarOffsetMap::from_records(clash).is_err());
    }

    #[test]
    fn prompts_are_injective(a in arb_prompt_input(), b in arb_prompt_input()) {
        prop_assert_eq!(render(&a) == render(&b), a == b);
    }

    #[test]
    fn string_recovery_only_touches_placeholders(text in arb_placeholder_text(), strings in arb_strings()) {
        let out = recover_strings(&text, &strings);
        let ph = Regex::new(r"\bSTR_(0|[1-9][0-9]*)\b").unwrap();
        let mut pattern = String::from("(?s)^");
        let mut last = 0;
        let mut tokens = Vec::new();
        for m in ph.find_iter(&text) {
            pattern.push_str(&regex::escape(&text[last..m.start()]));
            pattern.push_str("(.*?)");
            tokens.push(m.as_str());
            last = m.end();
        }
        pattern.push_str(&regex::escape(&text[last..]));
        pattern.push('$');
        let caps = Regex::new(&pattern).unwrap().captures(&out.text);
        prop_assert!(caps.is_some(), "text outside placeholders changed:\n{:?}\n{:?}", text, out.text);
        let caps = caps.unwrap();
        for (i, tok) in tokens.iter().enumerate() {
            let got = caps.get(i + 1).unwrap().as_str();
            let offset: u64 = tok[4..].parse().unwrap();
            match strings.get(offset) {
                Some(s) => prop_assert_eq!(unescape_c_string(got), Some(s.as_bytes().to_vec())),
                None => prop_assert_eq!(got, *tok),
            }
        }
    }

    #[test]
    fn every_marker_is_resolved_or_reported(
        (_t, m) in arb_module(),
        keep in prop::collection::vec(any::<bool>(), 64),
    ) {
        let program = slice_program(&m).unwrap();
        let mut parent: BTreeMap<String, String> = BTreeMap::new();
        let mut pairs = Vec::new();
        for (k, b) in program.blocks.values().enumerate() {
            for child in find_markers(&b.text) {
                parent.insert(child, b.block_id.clone());
            }
            if keep[k % keep.len()] {
                pairs.push((b.text.clone(), c_stand_in(b)));
            }
        }
        let table = MockBackend::from_pairs(pairs.iter().map(|(w, c)| (w.as_str(), c.as_str())));
        let opts = DecompileOptions::default();
        let unit = decompile_module(&m, &table, &opts).unwrap();
        prop_assert!(find_markers(&unit.text).is_empty(), "raw marker left in output");
        let failed: BTreeSet<&str> = unit
            .transcripts
            .iter()
            .filter(|t| t.status != SnippetStatus::Ok)
            .map(|t| t.block_id.as_str())
            .collect();
        let reported: BTreeSet<String> = unit.unresolved_markers().into_iter().collect();
        for id in &failed {
            let mut ancestors = std::iter::successors(parent.get(*id), |p| parent.get(p.as_str()));
            if parent.contains_key(*id) && !ancestors.any(|a| failed.contains(a.as_str())) {
                prop_assert!(reported.contains(*id), "{} dropped silently", id);
            }
        }
        for f in &unit.functions {
            prop_assert!(f.complete || f.error.is_some() || !f.unresolved_markers.is_empty());
        }
        let again = decompile_module(&m, &table, &opts).unwrap();
        prop_assert_eq!(unit.text, again.text);
    }
}
