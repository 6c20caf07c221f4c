//! Recompile decompiled C to Wasm, run original and recompiled modules, and
//! judge the recompile / re-execute / same-output chain.

use std::io::{Read, Write};
use std::path::{Path, PathBuf};
use std::process::{Command, Stdio};
use std::sync::LazyLock;
use std::time::{Duration, Instant};

use rayon::prelude::*;
use regex::Regex;
use serde::{Deserialize, Serialize};
use thiserror::Error;
use wait_timeout::ChildExt;

use crate::metrics::{decompiled_path, source_files};

pub const EXEC_SCHEMA: &str = "wadec.exec.v1";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CompareMode {
    #[default]
    Exact,
    /// Ignores `\r`, trailing spaces per line, and trailing blank lines.
    LineNormalized,
}

/// External commands. Templates are split shell-style; `{in}`, `{out}` and
/// `{wasm}` are substituted inside each argument.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ToolchainConfig {
    /// C file `{in}` to Wasm `{out}`.
    pub compile: String,
    /// Like `compile`, keeping debug info and no optimization.
    pub compile_debug: String,
    /// Wasm `{in}` to wat `{out}`.
    pub to_wat: String,
    /// Runs `{wasm}`.
    pub run: String,
    pub timeout_secs: f64,
    /// Matched against stderr to detect a trap.
    pub trap_pattern: String,
    pub compare: CompareMode,
}

impl Default for ToolchainConfig {
    fn default() -> Self {
        ToolchainConfig {
            compile: "emcc {in} -o {out}".into(),
            compile_debug: "emcc -O0 -g {in} -o {out}".into(),
            to_wat: "wasm2wat {in} -o {out}".into(),
            run: "wasmtime run {wasm}".into(),
            timeout_secs: 10.0,
            trap_pattern: DEFAULT_TRAP_PATTERN.into(),
            compare: CompareMode::Exact,
        }
    }
}

pub const DEFAULT_TRAP_PATTERN: &str = r"RuntimeError:|wasm trap|error while executing at wasm backtrace";

#[derive(Debug, Error)]
pub enum ExecError {
    #[error("compiler not found: {0}")]
    ToolchainMissing(String),
    #[error("runtime not found: {0}")]
    RuntimeMissing(String),
    #[error("bad command template `{0}`")]
    Template(String),
    #[error("bad trap pattern: {0}")]
    TrapPattern(#[from] regex::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExecResult {
    pub compiled: bool,
    /// Ran to completion within the time budget.
    pub executed: bool,
    pub exit_code: Option<i32>,
    pub stdout: Vec<u8>,
    pub stderr: Vec<u8>,
    pub wall_time: Duration,
    pub timed_out: bool,
    /// stderr matched the trap pattern.
    pub trapped: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct ConsistencyVerdict {
    pub recompiled: bool,
    pub re_executed: bool,
    pub output_consistent: bool,
}

struct Output {
    status: Option<i32>,
    stdout: Vec<u8>,
    stderr: Vec<u8>,
    timed_out: bool,
    elapsed: Duration,
}

fn expand_template(template: &str, subs: &[(&str, &Path)]) -> Result<Vec<String>, ExecError> {
    let words = shell_words::split(template).map_err(|_| ExecError::Template(template.to_string()))?;
    if words.is_empty() {
        return Err(ExecError::Template(template.to_string()));
    }
    Ok(words
        .into_iter()
        .map(|w| subs.iter().fold(w, |acc, (k, v)| acc.replace(k, &v.to_string_lossy())))
        .collect())
}

fn reader<R: Read + Send + 'static>(r: Option<R>) -> std::thread::JoinHandle<Vec<u8>> {
    std::thread::spawn(move || {
        let mut buf = Vec::new();
        if let Some(mut r) = r {
            let _ = r.read_to_end(&mut buf);
        }
        buf
    })
}

#[cfg(unix)]
fn isolate(cmd: &mut Command) {
    use std::os::unix::process::CommandExt;
    cmd.process_group(0);
}

#[cfg(not(unix))]
fn isolate(_: &mut Command) {}

fn kill_tree(child: &mut std::process::Child) {
    #[cfg(unix)]
    {
        let _ = Command::new("kill").args(["-KILL", "--", &format!("-{}", child.id())]).status();
    }
    let _ = child.kill();
}

fn run_command(
    args: &[String],
    cwd: &Path,
    stdin: &[u8],
    timeout: Duration,
    missing: impl FnOnce(String) -> ExecError,
) -> Result<Output, ExecError> {
    let mut cmd = Command::new(&args[0]);
    cmd.args(&args[1..]).current_dir(cwd).stdin(Stdio::piped()).stdout(Stdio::piped()).stderr(Stdio::piped());
    isolate(&mut cmd);
    let started = Instant::now();
    let mut child = match cmd.spawn() {
        Ok(c) => c,
        Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Err(missing(args[0].clone())),
        Err(e) => return Err(e.into()),
    };
    let input = stdin.to_vec();
    let mut child_stdin = child.stdin.take();
    let writer = std::thread::spawn(move || {
        if let Some(w) = child_stdin.as_mut() {
            let _ = w.write_all(&input);
        }
    });
    let out = reader(child.stdout.take());
    let err = reader(child.stderr.take());
    let (status, timed_out) = match child.wait_timeout(timeout)? {
        Some(s) => (s.code(), false),
        None => {
            kill_tree(&mut child);
            let _ = child.wait();
            (None, true)
        }
    };
    let elapsed = started.elapsed();
    let _ = writer.join();
    Ok(Output { status, stdout: out.join().unwrap_or_default(), stderr: err.join().unwrap_or_default(), timed_out, elapsed })
}

fn timeout_of(cfg: &ToolchainConfig) -> Duration {
    Duration::from_secs_f64(cfg.timeout_secs.max(0.001))
}

/// Compiles `c_path` to `{scratch}/{stem}.wasm`. Compiler diagnostics land in
/// `stderr`; `compiled` requires exit 0 and an output file.
pub fn recompile(c_path: &Path, cfg: &ToolchainConfig, scratch: &Path) -> Result<(ExecResult, PathBuf), ExecError> {
    let stem = c_path.file_stem().and_then(|s| s.to_str()).unwrap_or("module");
    let out_path = scratch.join(format!("{stem}.wasm"));
    let c_abs = std::path::absolute(c_path)?;
    let args = expand_template(&cfg.compile, &[("{in}", &c_abs), ("{out}", &out_path)])?;
    let o = run_command(&args, scratch, &[], timeout_of(cfg), ExecError::ToolchainMissing)?;
    let compiled = !o.timed_out && o.status == Some(0) && out_path.is_file();
    Ok((
        ExecResult {
            compiled,
            executed: false,
            exit_code: o.status,
            stdout: o.stdout,
            stderr: o.stderr,
            wall_time: o.elapsed,
            timed_out: o.timed_out,
            trapped: false,
        },
        out_path,
    ))
}

/// Converts a binary module to wat text with the `to_wat` template.
pub fn wasm_to_wat(wasm: &Path, cfg: &ToolchainConfig, scratch: &Path) -> Result<String, ExecError> {
    let out = scratch.join("module.wat");
    let wasm_abs = std::path::absolute(wasm)?;
    let args = expand_template(&cfg.to_wat, &[("{in}", &wasm_abs), ("{out}", &out)])?;
    let o = run_command(&args, scratch, &[], timeout_of(cfg), ExecError::ToolchainMissing)?;
    if o.status != Some(0) {
        return Err(std::io::Error::other(format!("{} failed: {}", args[0], String::from_utf8_lossy(&o.stderr).trim())).into());
    }
    Ok(std::fs::read_to_string(out)?)
}

/// Runs a module under the configured runtime with `scratch` as working
/// directory.
pub fn run_module(wasm: &Path, stdin: &[u8], cfg: &ToolchainConfig, scratch: &Path) -> Result<ExecResult, ExecError> {
    let trap = Regex::new(&cfg.trap_pattern)?;
    let wasm_abs = std::path::absolute(wasm)?;
    let args = expand_template(&cfg.run, &[("{wasm}", &wasm_abs)])?;
    let o = run_command(&args, scratch, stdin, timeout_of(cfg), ExecError::RuntimeMissing)?;
    let trapped = trap.is_match(&String::from_utf8_lossy(&o.stderr));
    Ok(ExecResult {
        compiled: true,
        executed: !o.timed_out && o.status.is_some(),
        exit_code: o.status,
        stdout: o.stdout,
        stderr: o.stderr,
        wall_time: o.elapsed,
        timed_out: o.timed_out,
        trapped,
    })
}

fn normalize(bytes: &[u8]) -> String {
    let text = String::from_utf8_lossy(bytes).replace('\r', "");
    let lines: Vec<&str> = text.split('\n').map(str::trim_end).collect();
    lines.join("\n").trim_end_matches('\n').to_string()
}

fn ran_cleanly(r: &ExecResult) -> bool {
    r.compiled && r.executed && !r.timed_out && !r.trapped
}

pub fn judge(original: &ExecResult, recompiled: &ExecResult) -> ConsistencyVerdict {
    judge_with(original, recompiled, CompareMode::Exact)
}

pub fn judge_with(original: &ExecResult, recompiled: &ExecResult, mode: CompareMode) -> ConsistencyVerdict {
    let rec = recompiled.compiled;
    let re_executed = rec && ran_cleanly(recompiled);
    let same_out = match mode {
        CompareMode::Exact => original.stdout == recompiled.stdout,
        CompareMode::LineNormalized => normalize(&original.stdout) == normalize(&recompiled.stdout),
    };
    let output_consistent =
        re_executed && ran_cleanly(original) && same_out && original.exit_code == recompiled.exit_code;
    ConsistencyVerdict { recompiled: rec, re_executed, output_consistent }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PhaseSummary {
    pub compiled: bool,
    pub executed: bool,
    pub exit_code: Option<i32>,
    pub timed_out: bool,
    pub trapped: bool,
    pub stdout: String,
    /// Compiler or runtime diagnostics, truncated.
    pub diagnostics: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub wall_time_ms: Option<u64>,
}

impl PhaseSummary {
    fn of(r: &ExecResult, timings: bool) -> Self {
        let diag = String::from_utf8_lossy(&r.stderr);
        PhaseSummary {
            compiled: r.compiled,
            executed: r.executed,
            exit_code: r.exit_code,
            timed_out: r.timed_out,
            trapped: r.trapped,
            stdout: String::from_utf8_lossy(&r.stdout).into_owned(),
            diagnostics: diag.chars().take(2000).collect(),
            wall_time_ms: timings.then_some(r.wall_time.as_millis() as u64),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExecRow {
    pub schema: String,
    pub stem: String,
    pub original: Option<PhaseSummary>,
    pub recompiled: Option<PhaseSummary>,
    pub verdict: ConsistencyVerdict,
    pub error: Option<String>,
}

/// Percentages over a batch.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExecAggregate {
    pub schema: String,
    pub files: usize,
    pub recompilation: f64,
    pub re_execution: f64,
    pub consistency: f64,
}

pub fn aggregate_verdicts(verdicts: &[ConsistencyVerdict]) -> ExecAggregate {
    let n = verdicts.len();
    let pct = |f: fn(&ConsistencyVerdict) -> bool| {
        if n == 0 {
            0.0
        } else {
            verdicts.iter().filter(|v| f(v)).count() as f64 * 100.0 / n as f64
        }
    };
    ExecAggregate {
        schema: EXEC_SCHEMA.into(),
        files: n,
        recompilation: pct(|v| v.recompiled),
        re_execution: pct(|v| v.re_executed),
        consistency: pct(|v| v.output_consistent),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExecReport {
    pub rows: Vec<ExecRow>,
    pub aggregate: ExecAggregate,
}

#[derive(Debug, Clone, Default)]
pub struct BatchOptions {
    pub jobs: usize,
    /// Parent for per-item scratch directories; system temp when `None`.
    pub scratch_root: Option<PathBuf>,
    pub timings: bool,
}

fn scratch_dir(opts: &BatchOptions) -> std::io::Result<tempfile::TempDir> {
    match &opts.scratch_root {
        Some(root) => {
            std::fs::create_dir_all(root)?;
            tempfile::Builder::new().prefix("wadec-exec-").tempdir_in(root)
        }
        None => tempfile::Builder::new().prefix("wadec-exec-").tempdir(),
    }
}

fn exec_one(stem: &str, src: &Path, src_root: &Path, dec_root: &Path, cfg: &ToolchainConfig, opts: &BatchOptions) -> Result<ExecRow, ExecError> {
    let stdin = std::fs::read(src_root.join(format!("{stem}.stdin"))).unwrap_or_default();
    let orig_dir = scratch_dir(opts)?;
    let prebuilt = src_root.join(format!("{stem}.wasm"));
    let original = if prebuilt.is_file() {
        run_module(&prebuilt, &stdin, cfg, orig_dir.path())?
    } else {
        let (c, wasm) = recompile(src, cfg, orig_dir.path())?;
        if c.compiled {
            run_module(&wasm, &stdin, cfg, orig_dir.path())?
        } else {
            c
        }
    };
    let mut row = ExecRow {
        schema: EXEC_SCHEMA.into(),
        stem: stem.to_string(),
        original: Some(PhaseSummary::of(&original, opts.timings)),
        recompiled: None,
        verdict: ConsistencyVerdict::default(),
        error: None,
    };
    let Some(dec) = decompiled_path(dec_root, stem) else {
        row.error = Some("no decompiled file".into());
        return Ok(row);
    };
    let dec_dir = scratch_dir(opts)?;
    let (c, wasm) = recompile(&dec, cfg, dec_dir.path())?;
    let recompiled = if c.compiled {
        let mut r = run_module(&wasm, &stdin, cfg, dec_dir.path())?;
        r.compiled = true;
        r
    } else {
        c
    };
    row.verdict = judge_with(&original, &recompiled, cfg.compare);
    row.recompiled = Some(PhaseSummary::of(&recompiled, opts.timings));
    Ok(row)
}

/// Runs every source under `src_root` against its decompiled counterpart.
/// A missing compiler or runtime is fatal; per-item failures are rows.
pub fn exec_roots(src_root: &Path, dec_root: &Path, cfg: &ToolchainConfig, opts: &BatchOptions) -> Result<ExecReport, ExecError> {
    Regex::new(&cfg.trap_pattern)?;
    let sources = source_files(src_root)?;
    let pool = rayon::ThreadPoolBuilder::new().num_threads(opts.jobs.max(1)).build().expect("thread pool");
    let rows: Vec<Result<ExecRow, ExecError>> = pool.install(|| {
        sources.par_iter().map(|(stem, path)| exec_one(stem, path, src_root, dec_root, cfg, opts)).collect()
    });
    let out = rows.into_iter().collect::<Result<Vec<_>, _>>()?;
    let verdicts: Vec<_> = out.iter().map(|r| r.verdict).collect();
    Ok(ExecReport { aggregate: aggregate_verdicts(&verdicts), rows: out })
}

static UNDEFINED_IDENT: LazyLock<Regex> =
    LazyLock::new(|| Regex::new(r"use of undeclared identifier|undeclared \(first use").unwrap());

/// Whether compiler diagnostics report an undeclared identifier.
pub fn mentions_undeclared_identifier(stderr: &[u8]) -> bool {
    UNDEFINED_IDENT.is_match(&String::from_utf8_lossy(stderr))
}
