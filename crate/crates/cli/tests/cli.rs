use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn corpus() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../fixtures/corpus")
}

fn wadec(args: &[&str], cwd: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_wadec"))
        .args(args)
        .current_dir(cwd)
        .env_remove("WADEC_CONFIG")
        .env_remove("WADEC_BACKEND_ENDPOINT")
        .env_remove("WADEC_API_KEY")
        .output()
        .unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

/// A one-file corpus and its dataset, which doubles as a mock table.
fn forged(dir: &Path, stem: &str) -> PathBuf {
    let src = dir.join("corpus");
    fs::create_dir_all(&src).unwrap();
    for ext in ["c", "wat", "offsets.jsonl"] {
        fs::copy(corpus().join(format!("{stem}.{ext}")), src.join(format!("{stem}.{ext}"))).unwrap();
    }
    let o = wadec(&["dataset", "corpus", "-o", "ds"], dir);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    dir.join("ds/records.jsonl")
}

#[test]
fn usage_and_config_errors_exit_2() {
    let tmp = tempfile::tempdir().unwrap();
    assert_eq!(code(&wadec(&["slice", "--no-such-flag", "x.wat"], tmp.path())), 2);
    assert_eq!(code(&wadec(&["--jobs", "0", "config"], tmp.path())), 2);
    fs::write(tmp.path().join("bad.toml"), "[backend]\nbogus = 1\n").unwrap();
    assert_eq!(code(&wadec(&["--config", "bad.toml", "config"], tmp.path())), 2);
    fs::write(tmp.path().join("markers.toml"), "[markers]\nopen = \"[[\"\n").unwrap();
    assert_eq!(code(&wadec(&["--config", "markers.toml", "config"], tmp.path())), 2);
    for d in ["src", "dec"] {
        fs::create_dir_all(tmp.path().join(d)).unwrap();
    }
    fs::write(tmp.path().join("src/a.c"), "int main(void) { return 0; }\n").unwrap();
    fs::write(tmp.path().join("dec/a.decomp.c"), "int main(void) { return 0; }\n").unwrap();
    let o = wadec(&["exec", "src", "dec", "--compile", "no-such-compiler-xyz {in} -o {out}"], tmp.path());
    assert_eq!(code(&o), 2, "{}", String::from_utf8_lossy(&o.stderr));
}

#[test]
fn config_round_trips() {
    let tmp = tempfile::tempdir().unwrap();
    let o = wadec(&["--jobs", "3", "config"], tmp.path());
    assert_eq!(code(&o), 0);
    fs::write(tmp.path().join("cfg.toml"), &o.stdout).unwrap();
    let again = wadec(&["--config", "cfg.toml", "config"], tmp.path());
    assert_eq!(code(&again), 0);
    assert_eq!(o.stdout, again.stdout);
}

#[test]
fn empty_module_gives_empty_manifest() {
    let tmp = tempfile::tempdir().unwrap();
    fs::write(tmp.path().join("empty.wat"), "(module)\n").unwrap();
    let o = wadec(&["slice", "empty.wat", "-o", "blocks"], tmp.path());
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    assert_eq!(fs::read_to_string(tmp.path().join("blocks/manifest.jsonl")).unwrap(), "");
}

#[test]
fn mock_decompile_is_complete_and_repeatable() {
    let tmp = tempfile::tempdir().unwrap();
    let table = forged(tmp.path(), "e2e_gcd");
    let wat = corpus().join("e2e_gcd.wat");
    let run = |out: &str| {
        let o = wadec(&["decompile", wat.to_str().unwrap(), "-o", out, "--mock-table", table.to_str().unwrap()], tmp.path());
        assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
        fs::read(tmp.path().join(out).join("e2e_gcd.decomp.c")).unwrap()
    };
    let first = run("a");
    assert!(!first.is_empty());
    assert_eq!(first, run("b"));
    assert_eq!(
        fs::read(tmp.path().join("a/e2e_gcd.report.jsonl")).unwrap(),
        fs::read(tmp.path().join("b/e2e_gcd.report.jsonl")).unwrap()
    );
}

#[test]
fn partial_table_exits_1() {
    let tmp = tempfile::tempdir().unwrap();
    let table = forged(tmp.path(), "e2e_gcd");
    let text = fs::read_to_string(&table).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert!(lines.len() > 1);
    fs::write(&table, lines[..lines.len() - 1].join("\n")).unwrap();
    let wat = corpus().join("e2e_gcd.wat");
    let o = wadec(&["decompile", wat.to_str().unwrap(), "-o", "out", "--mock-table", table.to_str().unwrap()], tmp.path());
    assert_eq!(code(&o), 1, "{}", String::from_utf8_lossy(&o.stderr));
    assert!(tmp.path().join("out/e2e_gcd.report.jsonl").is_file());
}

#[test]
fn eval_with_missing_decompilation_exits_1() {
    let tmp = tempfile::tempdir().unwrap();
    let src = tmp.path().join("src");
    fs::create_dir_all(&src).unwrap();
    fs::create_dir_all(tmp.path().join("dec")).unwrap();
    fs::copy(corpus().join("fib.c"), src.join("fib.c")).unwrap();
    let o = wadec(&["eval", "src", "dec", "-o", "eval.jsonl"], tmp.path());
    assert_eq!(code(&o), 1);
    let report = fs::read_to_string(tmp.path().join("eval.jsonl")).unwrap();
    assert!(report.lines().last().unwrap().contains("\"kind\":\"aggregate\""));
}
