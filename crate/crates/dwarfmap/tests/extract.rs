use wadec_dwarfmap::{extract_offsets, write_jsonl, DwarfMapError, OffsetRecord};

fn rec(name: &str, offset: u64, ty: &str) -> OffsetRecord {
    OffsetRecord { function: "scan".into(), name: name.into(), offset, c_type: ty.into() }
}

#[test]
fn reads_frame_offsets_and_types() {
    let wasm = std::fs::read(concat!(env!("CARGO_MANIFEST_DIR"), "/tests/data/types.wasm")).unwrap();
    let recs = extract_offsets(&wasm).unwrap();
    assert_eq!(
        recs,
        vec![
            rec("p", 28, "const char *"),
            rec("n", 24, "size_t"),
            rec("buf", 32, "char[16]"),
            rec("q", 16, "struct pt"),
            rec("cur", 12, "unsigned char *"),
            rec("k", 8, "size_t"),
            rec("t", 4, "int"),
        ]
    );
    let mut out = Vec::new();
    write_jsonl(&recs[..1], &mut out).unwrap();
    assert_eq!(String::from_utf8(out).unwrap(), "{\"function\":\"scan\",\"name\":\"p\",\"offset\":28,\"type\":\"const char *\"}\n");
}

#[test]
fn rejects_modules_without_debug_info() {
    // empty module: magic + version
    let bare = b"\0asm\x01\0\0\0";
    assert!(matches!(extract_offsets(bare), Err(DwarfMapError::NoDebugInfo)));
    assert!(matches!(extract_offsets(b"nope"), Err(DwarfMapError::Wasm(_))));
}
