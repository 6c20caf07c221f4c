use std::path::{Path, PathBuf};

use wadec::forge::{build_records, rename_functions};
use wadec::pipeline::{decompile_module, DecompileOptions, MockBackend};
use wadec::renamer::load_offset_map;
use wadec::wat::parse_module;

fn corpus() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures/corpus")
}

fn squash(s: &str) -> String {
    s.split_whitespace().collect::<Vec<_>>().join(" ")
}

fn load(stem: &str) -> (String, wadec::wat::WatModule, wadec::renamer::VarOffsetMap) {
    let root = corpus();
    let read = |ext: &str| std::fs::read_to_string(root.join(format!("{stem}.{ext}"))).unwrap();
    let module = parse_module(&read("wat")).unwrap();
    let map = load_offset_map(&root.join(format!("{stem}.offsets.jsonl"))).unwrap();
    (read("c"), module, map)
}

fn e2e_stems() -> Vec<String> {
    let mut v: Vec<String> = std::fs::read_dir(corpus())
        .unwrap()
        .filter_map(|e| {
            let name = e.unwrap().file_name().into_string().unwrap();
            name.strip_prefix("e2e_").and_then(|n| n.strip_suffix(".c")).map(|n| format!("e2e_{n}"))
        })
        .collect();
    v.sort();
    v
}

#[test]
fn oracle_table_reproduces_renamed_source() {
    let stems = e2e_stems();
    assert!(stems.len() >= 5);
    for stem in stems {
        let (c, module, map) = load(&stem);
        let records = build_records(&format!("{stem}.c"), &c, &module, &map).unwrap();
        let table = MockBackend::from_pairs(records.iter().map(|r| (r.wat_snippet.as_str(), r.c_snippet.as_str())));
        let unit = decompile_module(&module, &table, &DecompileOptions::default()).unwrap();
        assert!(unit.is_complete(), "{stem}: {:?}", unit.functions);
        let renamed = rename_functions(&c, &map).unwrap();
        assert_eq!(squash(&unit.text), squash(&renamed), "{stem}");
        let again = decompile_module(&module, &table, &DecompileOptions::default()).unwrap();
        assert_eq!(unit.text, again.text);
    }
}

#[test]
fn corpus_path_exists() {
    assert!(Path::new(&corpus()).is_dir());
}
