use std::collections::{BTreeMap, BTreeSet};
use std::path::PathBuf;

use regex::Regex;
use wadec::forge::{forge_corpus, prepare_source, records_per_function, DatasetRecord};
use wadec::pipeline::placeholders_in;
use wadec::renamer::load_offset_map;
use wadec::slicer::{find_markers, reassemble};
use wadec::wat::{extract_data_strings, parse_module};

fn corpus() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures/corpus")
}

fn squash(s: &str) -> String {
    s.split_whitespace().collect::<Vec<_>>().join(" ")
}

/// Loop statements in C text, counted on keywords after dropping comments,
/// string and char literals.
fn keyword_loops(c: &str) -> usize {
    let strip = Regex::new(r#"(?s)/\*.*?\*/|//[^\n]*|"(\\.|[^"\\])*"|'(\\.|[^'\\])*'"#).unwrap();
    let clean = strip.replace_all(c, " ");
    let kw = |w: &str| Regex::new(&format!(r"\b{w}\b")).unwrap().find_iter(&clean).count();
    kw("for") + kw("while")
}

fn by_source(records: &[DatasetRecord]) -> BTreeMap<String, Vec<&DatasetRecord>> {
    let mut m: BTreeMap<String, Vec<&DatasetRecord>> = BTreeMap::new();
    for r in records {
        m.entry(r.source.clone()).or_default().push(r);
    }
    m
}

#[test]
fn only_the_goto_file_is_rejected() {
    let report = forge_corpus(&corpus(), None, 4).unwrap();
    let skips: Vec<_> = report.skips.iter().map(|s| (s.source.as_str(), s.reason.code())).collect();
    assert_eq!(skips, vec![("goto_loop.c", "count_mismatch")]);
    assert!(report.records.iter().all(|r| r.source != "goto_loop.c"));
    let total = std::fs::read_dir(corpus())
        .unwrap()
        .filter(|e| e.as_ref().unwrap().path().extension().is_some_and(|x| x == "c"))
        .count();
    assert_eq!(report.accepted_files, total - 1);
}

#[test]
fn record_invariants_hold() {
    let report = forge_corpus(&corpus(), None, 4).unwrap();
    assert!(report.records.len() >= 100);
    let mut ids = BTreeSet::new();
    for r in &report.records {
        assert!(ids.insert((r.source.clone(), r.block_id.clone())), "duplicate {}", r.block_id);
        let mut cm = find_markers(&r.c_snippet);
        let mut wm = find_markers(&r.wat_snippet);
        cm.sort();
        wm.sort();
        assert_eq!(cm, wm, "{} {}", r.source, r.block_id);
        for o in placeholders_in(&r.c_snippet) {
            assert!(r.offset2string.get(o).is_some(), "{} STR_{o}", r.block_id);
        }
    }
}

#[test]
fn literals_left_in_place_have_no_data_string() {
    let report = forge_corpus(&corpus(), None, 4).unwrap();
    let lit = Regex::new(r#""(\\.|[^"\\])*""#).unwrap();
    for (source, recs) in by_source(&report.records) {
        let stem = source.trim_end_matches(".c");
        let wat = std::fs::read_to_string(corpus().join(format!("{stem}.wat"))).unwrap();
        let strings = extract_data_strings(&parse_module(&wat).unwrap()).unwrap();
        for r in recs {
            for m in lit.find_iter(&r.c_snippet) {
                let body = unescape(&m.as_str()[1..m.as_str().len() - 1]);
                assert!(strings.offsets_of(&body).is_empty(), "{source} {}: {}", r.block_id, m.as_str());
            }
        }
    }
}

fn unescape(s: &str) -> String {
    let mut out = String::new();
    let mut it = s.chars();
    while let Some(c) = it.next() {
        if c != '\\' {
            out.push(c);
            continue;
        }
        match it.next() {
            Some('n') => out.push('\n'),
            Some('t') => out.push('\t'),
            Some('0') => out.push('\0'),
            Some(o) => out.push(o),
            None => {}
        }
    }
    out
}

#[test]
fn block_counts_follow_loop_counts() {
    let report = forge_corpus(&corpus(), None, 4).unwrap();
    let per_fn = records_per_function(&report.records);
    for (source, recs) in by_source(&report.records) {
        let c = std::fs::read_to_string(corpus().join(&source)).unwrap();
        let functions: BTreeSet<&str> = recs.iter().map(|r| r.function.as_str()).collect();
        assert_eq!(recs.len(), functions.len() + keyword_loops(&c), "{source}");
        for f in functions {
            assert!(per_fn[&(source.clone(), f.to_string())] >= 1);
        }
    }
}

#[test]
fn snippets_reassemble_into_prepared_source() {
    let report = forge_corpus(&corpus(), None, 4).unwrap();
    for (source, recs) in by_source(&report.records) {
        let stem = source.trim_end_matches(".c");
        let read = |ext: &str| std::fs::read_to_string(corpus().join(format!("{stem}.{ext}"))).unwrap();
        let module = parse_module(&read("wat")).unwrap();
        let offsets = load_offset_map(&corpus().join(format!("{stem}.offsets.jsonl"))).unwrap();
        let strings = extract_data_strings(&module).unwrap();
        let prepared = squash(&prepare_source(&read("c"), &strings, &offsets).unwrap());
        let blocks: BTreeMap<String, String> =
            recs.iter().map(|r| (r.block_id.clone(), r.c_snippet.clone())).collect();
        let whole = reassemble(&blocks).unwrap();
        assert_eq!(whole.len(), recs.iter().map(|r| &r.function).collect::<BTreeSet<_>>().len());
        for text in whole.values() {
            assert!(prepared.contains(&squash(text)), "{source}: {text}");
        }
    }
}

#[test]
fn forging_is_deterministic() {
    let a = forge_corpus(&corpus(), None, 1).unwrap();
    let b = forge_corpus(&corpus(), None, 8).unwrap();
    let mut x = Vec::new();
    let mut y = Vec::new();
    a.write_records(&mut x, None).unwrap();
    b.write_records(&mut y, None).unwrap();
    assert_eq!(x, y);
}
