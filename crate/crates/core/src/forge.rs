//! Training-record construction: pairs loop-aligned wat and C snippets of
//! the same function, with renamed variables, string placeholders, and the
//! per-snippet context features.

use std::collections::{BTreeMap, BTreeSet};
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::context::{spatial_info, temporal_info, VariableDef};
use crate::ctext::{tokenize, unescape_c_string, CTokenKind};
use crate::exec::{ExecError, ToolchainConfig};
use crate::metrics::{function_definitions, parse_c, source_files};
use crate::pipeline::{placeholder, placeholders_in, synthesize_prompt, Mode, PromptConfig};
use crate::renamer::{load_offset_map, param_variables, rename_c_source, shim_target, VarOffsetMap};
use crate::slicer::{find_markers, slice_function, slice_spans, Language, SliceError, Snippet};
use crate::wat::{extract_data_strings, parse_module, FuncRef, OffsetStringMap, WatFunction, WatModule};

pub const DATASET_SCHEMA: &str = "wadec.dataset.v1";
pub const SKIP_SCHEMA: &str = "wadec.dataset-skip.v1";

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DatasetRecord {
    pub schema: String,
    pub source: String,
    /// C name of the function.
    pub function: String,
    pub block_id: String,
    pub wat_snippet: String,
    pub c_snippet: String,
    pub spatial_info: Vec<String>,
    pub temporal_info: Vec<VariableDef>,
    pub offset2string: OffsetStringMap,
}

impl DatasetRecord {
    /// Finetune-mode prompt with the C snippet as response.
    pub fn to_prompt(&self, cfg: &PromptConfig) -> Result<String, crate::pipeline::PipelineError> {
        let snippet = Snippet {
            block_id: self.block_id.clone(),
            function: self.function.clone(),
            index: 0,
            text: self.wat_snippet.clone(),
            markers: vec![],
            language: Language::Wat,
            start_line: 0,
            end_line: 0,
        };
        let ctx = crate::context::ContextBundle {
            defined_before: self.temporal_info.clone(),
            callee_declarations: self.spatial_info.clone(),
        };
        Ok(synthesize_prompt(&snippet, &ctx, Mode::Finetune, Some(&self.c_snippet), cfg)?.render())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error, Serialize, Deserialize)]
#[serde(tag = "reason", rename_all = "snake_case")]
pub enum SkipReason {
    #[error("C parse error")]
    ParseError { detail: String },
    #[error("no wat function for `{function}`")]
    MissingFunction { function: String },
    #[error("`{function}`: {c_loops} C loops vs {wat_loops} wat loops")]
    CountMismatch { function: String, c_loops: usize, wat_loops: usize },
    #[error("`{function}`: loop nesting differs at block {index}")]
    ShapeMismatch { function: String, index: usize },
    #[error("renaming failed: {detail}")]
    Rename { detail: String },
    #[error("slicing failed: {detail}")]
    Slice { detail: String },
    #[error("context failed: {detail}")]
    Context { detail: String },
    #[error("record invariant violated: {detail}")]
    Invariant { detail: String },
    #[error("missing input: {detail}")]
    Input { detail: String },
}

impl SkipReason {
    pub fn code(&self) -> &'static str {
        match self {
            SkipReason::ParseError { .. } => "parse_error",
            SkipReason::MissingFunction { .. } => "missing_function",
            SkipReason::CountMismatch { .. } => "count_mismatch",
            SkipReason::ShapeMismatch { .. } => "shape_mismatch",
            SkipReason::Rename { .. } => "rename",
            SkipReason::Slice { .. } => "slice",
            SkipReason::Context { .. } => "context",
            SkipReason::Invariant { .. } => "invariant",
            SkipReason::Input { .. } => "input",
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ForgeError {
    #[error("`{0}` does not parse as a C function")]
    ParseError(String),
    #[error(transparent)]
    Slice(#[from] SliceError),
}

const LOOP_KINDS: &[&str] = &["for_statement", "while_statement", "do_statement"];

fn loop_spans(node: tree_sitter::Node<'_>, base: usize, out: &mut Vec<std::ops::Range<usize>>) {
    if LOOP_KINDS.contains(&node.kind()) {
        let r = node.byte_range();
        out.push(r.start - base..r.end - base);
    }
    let mut cursor = node.walk();
    for c in node.children(&mut cursor) {
        loop_spans(c, base, out);
    }
}

/// Slices one C function definition by its loop statements. `name` becomes
/// the block-id prefix, so the wat function's name is passed to get matching
/// ids.
pub fn slice_c_function(name: &str, c_func_text: &str, base_line: usize) -> Result<Vec<Snippet>, ForgeError> {
    let tree = parse_c(c_func_text);
    let defs = function_definitions(c_func_text, &tree);
    if tree.root_node().has_error() || defs.len() != 1 {
        return Err(ForgeError::ParseError(name.to_string()));
    }
    let mut spans = Vec::new();
    loop_spans(tree.root_node(), 0, &mut spans);
    Ok(slice_spans(name, c_func_text, base_line, &spans, Language::C)?)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Reject {
    CountMismatch { c: usize, wat: usize },
    ShapeMismatch { index: usize },
}

/// Pairs snippets by block index when the two marker trees agree.
pub fn align(c: &[Snippet], wat: &[Snippet]) -> Result<Vec<(Snippet, Snippet)>, Reject> {
    if c.len() != wat.len() {
        return Err(Reject::CountMismatch { c: c.len(), wat: wat.len() });
    }
    for (i, (a, b)) in c.iter().zip(wat).enumerate() {
        let ka: Vec<_> = a.markers.iter().map(|m| &m.child_block_id).collect();
        let kb: Vec<_> = b.markers.iter().map(|m| &m.child_block_id).collect();
        if ka != kb || a.block_id != b.block_id {
            return Err(Reject::ShapeMismatch { index: i });
        }
    }
    Ok(c.iter().cloned().zip(wat.iter().cloned()).collect())
}

/// Replaces every string literal whose bytes equal a data string with
/// `STR_{offset}`, taking the lowest offset on ties. Returns the text and the
/// literals matched at more than one offset.
pub fn substitute_strings(c_text: &str, strings: &OffsetStringMap) -> (String, Vec<String>) {
    let mut out = String::with_capacity(c_text.len());
    let mut ambiguous = Vec::new();
    let mut last = 0;
    for t in tokenize(c_text) {
        if t.kind != CTokenKind::Str {
            continue;
        }
        let Some(bytes) = unescape_c_string(t.text) else { continue };
        let Ok(s) = String::from_utf8(bytes) else { continue };
        let offsets = strings.offsets_of(&s);
        let Some(&lowest) = offsets.first() else {
            if !s.is_empty() {
                log::debug!("no data string for literal {}", t.text);
            }
            continue;
        };
        if offsets.len() > 1 {
            log::info!("literal {} found at offsets {offsets:?}; using {lowest}", t.text);
            ambiguous.push(t.text.to_string());
        }
        out.push_str(&c_text[last..t.span.start]);
        out.push_str(&placeholder(lowest));
        last = t.span.end;
    }
    out.push_str(&c_text[last..]);
    (out, ambiguous)
}

/// The wat function compiled from C function `c_name`; `main` follows the
/// toolchain's entry trampoline.
pub fn wat_function_for<'m>(module: &'m WatModule, c_name: &str) -> Option<&'m WatFunction> {
    if c_name == "main" {
        if let Some(f) = module.function_by_name("main") {
            if let Some(FuncRef::Defined(j)) = shim_target(f) {
                return module.functions.get(j);
            }
        }
        for alias in ["__original_main", "__main_argc_argv"] {
            if let Some(f) = module.function_by_name(alias) {
                return Some(f);
            }
        }
    }
    module.function_by_name(c_name)
}

/// Renames each function's frame variables to `local_{offset}`.
pub fn rename_functions(c_text: &str, offsets: &VarOffsetMap) -> Result<String, SkipReason> {
    let tree = parse_c(c_text);
    let mut defs = function_definitions(c_text, &tree);
    defs.sort_by_key(|d| std::cmp::Reverse(d.span.start));
    let mut out = c_text.to_string();
    for d in defs {
        let renamed = rename_c_source(&c_text[d.span.clone()], offsets.entries(&d.name))
            .map_err(|e| SkipReason::Rename { detail: format!("{}: {e}", d.name) })?;
        out.replace_range(d.span, &renamed);
    }
    Ok(out)
}

/// Renamed and placeholder-substituted source, as records are cut from it.
pub fn prepare_source(c_text: &str, strings: &OffsetStringMap, offsets: &VarOffsetMap) -> Result<String, SkipReason> {
    let renamed = rename_functions(c_text, offsets)?;
    Ok(substitute_strings(&renamed, strings).0)
}

fn check_record(r: &DatasetRecord) -> Result<(), SkipReason> {
    let wm: BTreeSet<String> = find_markers(&r.wat_snippet).into_iter().collect();
    let cm: BTreeSet<String> = find_markers(&r.c_snippet).into_iter().collect();
    if wm != cm {
        return Err(SkipReason::Invariant { detail: format!("{}: marker sets differ", r.block_id) });
    }
    if let Some(o) = placeholders_in(&r.c_snippet).into_iter().find(|o| r.offset2string.get(*o).is_none()) {
        return Err(SkipReason::Invariant { detail: format!("{}: STR_{o} has no string", r.block_id) });
    }
    Ok(())
}

/// Records for one C file and the module compiled from it. The whole file is
/// skipped when any of its functions fails a stage.
pub fn build_records(
    source: &str,
    c_text: &str,
    module: &WatModule,
    offsets: &VarOffsetMap,
) -> Result<Vec<DatasetRecord>, SkipReason> {
    let strings = extract_data_strings(module).map_err(|e| SkipReason::Input { detail: e.to_string() })?;
    let prepared = prepare_source(c_text, &strings, offsets)?;
    let tree = parse_c(&prepared);
    if tree.root_node().has_error() {
        return Err(SkipReason::ParseError { detail: source.to_string() });
    }
    let mut records = Vec::new();
    for def in function_definitions(&prepared, &tree) {
        let wat_fn = wat_function_for(module, &def.name)
            .ok_or_else(|| SkipReason::MissingFunction { function: def.name.clone() })?;
        let text = &prepared[def.span.clone()];
        let base_line = prepared[..def.span.start].matches('\n').count();
        let c_snips = slice_c_function(&wat_fn.name, text, base_line).map_err(|e| match e {
            ForgeError::ParseError(_) => SkipReason::ParseError { detail: def.name.clone() },
            ForgeError::Slice(s) => SkipReason::Slice { detail: s.to_string() },
        })?;
        let wat_snips = slice_function(wat_fn).map_err(|e| SkipReason::Slice { detail: e.to_string() })?;
        let pairs = align(&c_snips, &wat_snips).map_err(|r| match r {
            Reject::CountMismatch { c, wat } => {
                SkipReason::CountMismatch { function: def.name.clone(), c_loops: c - 1, wat_loops: wat - 1 }
            }
            Reject::ShapeMismatch { index } => SkipReason::ShapeMismatch { function: def.name.clone(), index },
        })?;
        let params = param_variables(wat_fn, module);
        for (n, (c, w)) in pairs.iter().enumerate() {
            let spatial = spatial_info(w, module).map_err(|e| SkipReason::Context { detail: e.to_string() })?;
            let temporal = temporal_info(pairs[..n].iter().map(|(c, _)| c.text.as_str()), &params);
            let used: Vec<u64> = placeholders_in(&c.text);
            let record = DatasetRecord {
                schema: DATASET_SCHEMA.into(),
                source: source.to_string(),
                function: def.name.clone(),
                block_id: c.block_id.clone(),
                wat_snippet: w.text.clone(),
                c_snippet: c.text.clone(),
                spatial_info: spatial,
                temporal_info: temporal,
                offset2string: strings.subset(&used),
            };
            check_record(&record)?;
            records.push(record);
        }
    }
    Ok(records)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SkipRecord {
    pub schema: String,
    pub source: String,
    pub code: String,
    #[serde(flatten)]
    pub reason: SkipReason,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ForgeReport {
    pub records: Vec<DatasetRecord>,
    pub skips: Vec<SkipRecord>,
    pub accepted_files: usize,
}

impl ForgeReport {
    pub fn write_records(&self, mut w: impl Write, prompts: Option<&PromptConfig>) -> io::Result<()> {
        for r in &self.records {
            let mut v = serde_json::to_value(r).map_err(io::Error::from)?;
            if let Some(cfg) = prompts {
                let p = r.to_prompt(cfg).map_err(io::Error::other)?;
                v.as_object_mut().unwrap().insert("prompt".into(), p.into());
            }
            writeln!(w, "{v}")?;
        }
        Ok(())
    }

    pub fn write_skips(&self, mut w: impl Write) -> io::Result<()> {
        for s in &self.skips {
            writeln!(w, "{}", serde_json::to_string(s).map_err(io::Error::from)?)?;
        }
        Ok(())
    }
}

#[derive(Debug, Error)]
pub enum CorpusError {
    #[error(transparent)]
    Io(#[from] io::Error),
    #[error(transparent)]
    Exec(#[from] ExecError),
}

/// Inputs for one corpus file: `{stem}.wat` and `{stem}.offsets.jsonl` next
/// to the source, else a `{stem}.wasm` with debug info, else a debug build
/// through the toolchain.
fn load_inputs(
    stem: &str,
    c_path: &Path,
    root: &Path,
    toolchain: Option<&ToolchainConfig>,
) -> Result<(WatModule, VarOffsetMap), SkipReason> {
    let input = |d: String| SkipReason::Input { detail: d };
    let wat_path = root.join(format!("{stem}.wat"));
    let map_path = root.join(format!("{stem}.offsets.jsonl"));
    let mut wasm_path = root.join(format!("{stem}.wasm"));
    let scratch = tempfile::tempdir().map_err(|e| input(e.to_string()))?;
    let need_wasm = !wat_path.is_file() || !map_path.is_file();
    if need_wasm && !wasm_path.is_file() {
        let tc = toolchain.ok_or_else(|| input(format!("{stem}: no wat, offsets or wasm")))?;
        let debug = ToolchainConfig { compile: tc.compile_debug.clone(), ..tc.clone() };
        let (r, out) = crate::exec::recompile(c_path, &debug, scratch.path()).map_err(|e| input(e.to_string()))?;
        if !r.compiled {
            return Err(input(format!("{stem}: debug build failed: {}", String::from_utf8_lossy(&r.stderr).trim())));
        }
        wasm_path = out;
    }
    let wat_text = if wat_path.is_file() {
        std::fs::read_to_string(&wat_path).map_err(|e| input(e.to_string()))?
    } else {
        let tc = toolchain.ok_or_else(|| input(format!("{stem}: no wat converter configured")))?;
        crate::exec::wasm_to_wat(&wasm_path, tc, scratch.path()).map_err(|e| input(e.to_string()))?
    };
    let module = parse_module(&wat_text).map_err(|e| SkipReason::Input { detail: format!("{stem}.wat: {e}") })?;
    let offsets = if map_path.is_file() {
        load_offset_map(&map_path).map_err(|e| input(e.to_string()))?
    } else {
        let bytes = std::fs::read(&wasm_path).map_err(|e| input(e.to_string()))?;
        let recs = wadec_dwarfmap::extract_offsets(&bytes).map_err(|e| input(format!("{stem}: {e}")))?;
        let recs = recs.into_iter().map(|r| crate::renamer::OffsetRecord {
            function: r.function,
            name: r.name,
            offset: r.offset,
            c_type: r.c_type,
        });
        VarOffsetMap::from_records(recs).map_err(|e| input(e.to_string()))?
    };
    Ok((module, offsets))
}

/// Forges every `.c` file under `root`, in stem order.
pub fn forge_corpus(root: &Path, toolchain: Option<&ToolchainConfig>, jobs: usize) -> Result<ForgeReport, CorpusError> {
    let files = source_files(root)?;
    let pool = rayon::ThreadPoolBuilder::new().num_threads(jobs.max(1)).build().expect("thread pool");
    let results: Vec<(PathBuf, Result<Vec<DatasetRecord>, SkipReason>)> = pool.install(|| {
        files
            .par_iter()
            .map(|(stem, path)| {
                let label = path.file_name().map(|n| n.to_string_lossy().into_owned()).unwrap_or_default();
                let r = std::fs::read_to_string(path)
                    .map_err(|e| SkipReason::Input { detail: e.to_string() })
                    .and_then(|c| {
                        let (m, o) = load_inputs(stem, path, root, toolchain)?;
                        build_records(&label, &c, &m, &o)
                    });
                (path.clone(), r)
            })
            .collect()
    });
    let mut report = ForgeReport::default();
    for (path, r) in results {
        match r {
            Ok(recs) => {
                report.accepted_files += 1;
                report.records.extend(recs);
            }
            Err(reason) => {
                let source = path.file_name().map(|n| n.to_string_lossy().into_owned()).unwrap_or_default();
                log::info!("skipping {source}: {reason}");
                report.skips.push(SkipRecord { schema: SKIP_SCHEMA.into(), source, code: reason.code().into(), reason });
            }
        }
    }
    Ok(report)
}

/// Per-function record counts.
pub fn records_per_function(records: &[DatasetRecord]) -> BTreeMap<(String, String), usize> {
    let mut m = BTreeMap::new();
    for r in records {
        *m.entry((r.source.clone(), r.function.clone())).or_insert(0) += 1;
    }
    m
}
