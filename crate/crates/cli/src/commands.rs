use std::fs;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use serde::Serialize;
use wadec::exec::{exec_roots, wasm_to_wat, BatchOptions, ExecReport};
use wadec::forge::{forge_corpus, ForgeReport};
use wadec::metrics::{evaluate_roots, EvalReport, Means};
use wadec::pipeline::{backend_from_config, decompile_module, DecompileOptions, DecompiledUnit};
use wadec::slicer::{slice_program, write_blocks, ManifestRecord};
use wadec::wat::{parse_module, WatModule};

use crate::config::RunConfig;

/// How a subcommand ended, short of an error.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    Success,
    /// Finished with failures that are listed in its report.
    Partial,
}

impl Outcome {
    pub fn exit_code(self) -> i32 {
        match self {
            Outcome::Success => 0,
            Outcome::Partial => 1,
        }
    }

    fn from_ok(ok: bool) -> Self {
        if ok {
            Outcome::Success
        } else {
            Outcome::Partial
        }
    }
}

fn stem_of(path: &Path) -> Result<String> {
    let name = path.file_name().and_then(|n| n.to_str()).with_context(|| format!("bad input path {}", path.display()))?;
    Ok(name.split('.').next().unwrap_or(name).to_string())
}

/// Parses a `.wat` file, or converts a `.wasm` file with the configured tool.
pub fn load_module(input: &Path, cfg: &RunConfig) -> Result<WatModule> {
    let text = if input.extension().is_some_and(|e| e == "wasm") {
        let scratch = scratch_dir(cfg)?;
        wasm_to_wat(input, &cfg.toolchain, scratch.path())?
    } else {
        fs::read_to_string(input).with_context(|| format!("reading {}", input.display()))?
    };
    parse_module(&text).with_context(|| format!("parsing {}", input.display()))
}

fn scratch_dir(cfg: &RunConfig) -> Result<tempfile::TempDir> {
    Ok(match &cfg.paths.scratch {
        Some(root) => {
            fs::create_dir_all(root)?;
            tempfile::Builder::new().prefix("wadec-").tempdir_in(root)?
        }
        None => tempfile::Builder::new().prefix("wadec-").tempdir()?,
    })
}

/// JSON lines of `rows` tagged `kind = row_kind`, then `aggregate` tagged
/// `kind = "aggregate"`.
fn write_report<T: Serialize, A: Serialize>(path: &Path, row_kind: &str, rows: &[T], aggregate: &A) -> Result<()> {
    let mut w = BufWriter::new(fs::File::create(path).with_context(|| format!("creating {}", path.display()))?);
    let tagged = rows.iter().map(|r| (row_kind, serde_json::to_value(r))).chain([("aggregate", serde_json::to_value(aggregate))]);
    for (kind, v) in tagged {
        let mut v = v?;
        if let Some(obj) = v.as_object_mut() {
            obj.insert("kind".into(), kind.into());
        }
        writeln!(w, "{v}")?;
    }
    w.flush()?;
    Ok(())
}

pub fn cmd_slice(input: &Path, out_dir: &Path, cfg: &RunConfig) -> Result<Vec<ManifestRecord>> {
    let module = load_module(input, cfg)?;
    let program = slice_program(&module)?;
    Ok(write_blocks(&program, out_dir)?)
}

/// Paths written by [`cmd_decompile`].
#[derive(Debug, Clone)]
pub struct DecompileOutput {
    /// `None` when the run was aborted.
    pub decompiled: Option<PathBuf>,
    pub report: PathBuf,
    pub unit: DecompiledUnit,
}

impl DecompileOutput {
    pub fn outcome(&self) -> Outcome {
        Outcome::from_ok(self.unit.is_complete())
    }
}

/// Writes `{stem}.decomp.c` and `{stem}.report.jsonl` into `out_dir`. An
/// aborted run writes only the report and removes any stale output.
pub fn cmd_decompile(input: &Path, out_dir: &Path, cfg: &RunConfig) -> Result<DecompileOutput> {
    let module = load_module(input, cfg)?;
    let backend = backend_from_config(&cfg.backend)?;
    let opts = DecompileOptions { backend: cfg.backend.clone(), prompt: cfg.prompt.clone(), timings: cfg.timings };
    let unit = decompile_module(&module, backend.as_ref(), &opts)?;
    fs::create_dir_all(out_dir)?;
    let stem = stem_of(input)?;
    let report = out_dir.join(format!("{stem}.report.jsonl"));
    let mut w = BufWriter::new(fs::File::create(&report)?);
    unit.write_report(&input.display().to_string(), &mut w)?;
    w.flush()?;
    let dec_path = out_dir.join(format!("{stem}.decomp.c"));
    let decompiled = if unit.aborted {
        if dec_path.exists() {
            fs::remove_file(&dec_path)?;
        }
        None
    } else {
        fs::write(&dec_path, &unit.text)?;
        Some(dec_path)
    };
    Ok(DecompileOutput { decompiled, report, unit })
}

fn fmt_opt(x: Option<f64>) -> String {
    x.map_or_else(|| "-".to_string(), |v| format!("{v:.4}"))
}

/// Fixed-width table of pair rows and the file-level means.
pub fn eval_table(report: &EvalReport<f64>) -> String {
    let mut out = format!(
        "{:<24} {:>7} {:>7} {:>7} {:>8} {:>8} {:>9} {:>7}\n",
        "file", "AED-S", "CCN", "COS", "CodeBLEU", "bloat%", "C@Syntax", "C@Func"
    );
    let mut row = |name: &str, m: &Means<f64>| {
        out.push_str(&format!(
            "{:<24} {:>7.4} {:>7.4} {:>7.4} {:>8.4} {:>8.2} {:>9} {:>7.4}\n",
            name,
            m.aed_s,
            m.ccn_sim,
            m.cosine,
            m.codebleu,
            m.bloat_rate,
            fmt_opt(m.c_at_syntax),
            m.c_at_func
        ));
    };
    for r in &report.rows {
        let m = &r.report;
        let means = Means {
            aed_s: m.aed_s,
            ccn_sim: m.ccn_sim,
            cosine: m.cosine,
            codebleu: m.codebleu,
            bloat_rate: m.bloat_rate,
            c_at_syntax: m.c_at_syntax,
            c_at_func: m.c_at_func,
        };
        let name = if m.absent { format!("{} (absent)", r.stem) } else { r.stem.clone() };
        row(&name, &means);
    }
    if let Some(m) = &report.aggregate.file_means {
        row("mean", m);
    }
    out
}

/// Scores `src_root` against `dec_root`; writes pair rows and the aggregate
/// as JSON lines when `out` is given.
pub fn cmd_eval(src_root: &Path, dec_root: &Path, out: Option<&Path>) -> Result<(EvalReport<f64>, Outcome)> {
    if !src_root.is_dir() {
        bail!("{} is not a directory", src_root.display());
    }
    let report: EvalReport<f64> = evaluate_roots(src_root, dec_root)?;
    if let Some(path) = out {
        write_report(path, "pair", &report.rows, &report.aggregate)?;
    }
    let ok = report.aggregate.absent == 0;
    Ok((report, Outcome::from_ok(ok)))
}

pub fn cmd_exec(src_root: &Path, dec_root: &Path, out: Option<&Path>, cfg: &RunConfig) -> Result<(ExecReport, Outcome)> {
    let opts = BatchOptions { jobs: cfg.parallelism.jobs, scratch_root: cfg.paths.scratch.clone(), timings: cfg.timings };
    let report = exec_roots(src_root, dec_root, &cfg.toolchain, &opts)?;
    if let Some(path) = out {
        write_report(path, "row", &report.rows, &report.aggregate)?;
    }
    let ok = report.rows.iter().all(|r| r.error.is_none());
    Ok((report, Outcome::from_ok(ok)))
}

/// Writes `records.jsonl` and `skips.jsonl` into `out_dir`.
pub fn cmd_dataset(corpus: &Path, out_dir: &Path, with_prompts: bool, cfg: &RunConfig) -> Result<(ForgeReport, Outcome)> {
    if !corpus.is_dir() {
        bail!("{} is not a directory", corpus.display());
    }
    let report = forge_corpus(corpus, Some(&cfg.toolchain), cfg.parallelism.jobs)?;
    fs::create_dir_all(out_dir)?;
    let mut w = BufWriter::new(fs::File::create(out_dir.join("records.jsonl"))?);
    report.write_records(&mut w, with_prompts.then_some(&cfg.prompt))?;
    w.flush()?;
    let mut w = BufWriter::new(fs::File::create(out_dir.join("skips.jsonl"))?);
    report.write_skips(&mut w)?;
    w.flush()?;
    let ok = report.skips.is_empty();
    Ok((report, Outcome::from_ok(ok)))
}

/// Offset map of a debug build, as JSON lines.
pub fn cmd_offsets(wasm: &Path, mut out: impl Write) -> Result<usize> {
    let bytes = fs::read(wasm).with_context(|| format!("reading {}", wasm.display()))?;
    let records = wadec_dwarfmap::extract_offsets(&bytes)?;
    wadec_dwarfmap::write_jsonl(&records, &mut out)?;
    Ok(records.len())
}
