//! End-to-end decompilation: slice each function, prompt the backend for
//! every snippet in block order, reassemble, recover strings.

mod backend;
mod postfilter;
mod prompt;
mod strings;

use std::collections::{BTreeMap, HashMap, HashSet};
use std::io::{self, Write};
use std::sync::atomic::{AtomicBool, Ordering};
use std::time::{Duration, Instant};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use backend::{
    backend_from_config, snippet_hash, Backend, BackendConfig, BackendSetupError, CompletionRequest, HttpBackend,
    MockBackend, MockTableError, TransportError, MOCK_ENDPOINT,
};
pub use postfilter::{clean_completion, first_fragment_end};
pub use prompt::{
    count_tokens, synthesize_prompt, Mode, PromptConfig, PromptRecord, DEFAULT_INSTRUCTION, DEFAULT_MAX_SEQ_LEN,
    INSTRUCTION_VERSION, LABEL_INPUT, LABEL_INSTRUCTION, LABEL_RESPONSE,
};
pub use strings::{parse_placeholder, placeholder, placeholders_in, recover_strings, RecoveredText, STRING_PLACEHOLDER_PREFIX};

use crate::context::{extract_declarations, spatial_info, temporal_info, ContextBundle, ContextError};
use crate::ctext::code_tokens;
use crate::renamer::{param_variables, shim_target};
use crate::slicer::{reassemble_lenient, replace_markers, slice_function, order_functions, SliceError, Snippet};
use crate::wat::{extract_data_strings, signature_to_declaration, FuncRef, WatError, WatFunction, WatModule};

pub const DECOMPILE_SCHEMA: &str = "wadec.decompile.v1";

#[derive(Debug, Error, Clone, PartialEq)]
pub enum PipelineError {
    #[error("prompt for `{block_id}` has {tokens} tokens, limit {limit}")]
    PromptTooLong { block_id: String, tokens: usize, limit: usize },
    #[error("backend unavailable for `{block_id}` after {attempts} attempts: {message}")]
    BackendUnavailable { block_id: String, attempts: u32, message: String },
    #[error("retry budget exhausted for `{block_id}` after {attempts} attempts: {message}")]
    BudgetExhausted { block_id: String, attempts: u32, message: String },
    #[error("backend rejected `{block_id}`: {message}")]
    BackendRejected { block_id: String, message: String },
    #[error("empty completion for `{block_id}`")]
    EmptyCompletion { block_id: String },
    #[error("prompt for `{block_id}` is not an inference prompt")]
    NotInference { block_id: String },
    #[error(transparent)]
    Slice(#[from] SliceError),
    #[error(transparent)]
    Context(#[from] ContextError),
    #[error(transparent)]
    Wat(#[from] WatError),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Completion {
    pub text: String,
    pub raw: String,
    pub attempts: u32,
}

/// Sends an inference prompt, retrying retryable transport failures up to
/// the configured budget, and cleans the completion.
pub fn decompile_snippet(
    prompt: &PromptRecord,
    hash: &str,
    backend: &dyn Backend,
    cfg: &BackendConfig,
) -> Result<Completion, PipelineError> {
    if prompt.mode != Mode::Inference {
        return Err(PipelineError::NotInference { block_id: prompt.block_id.clone() });
    }
    let rendered = prompt.render();
    let req = CompletionRequest {
        model: &cfg.model,
        prompt: &rendered,
        temperature: cfg.temperature,
        max_tokens: cfg.max_tokens,
        snippet_hash: hash,
    };
    let mut attempts = 0;
    loop {
        attempts += 1;
        match backend.complete(&req) {
            Ok(raw) => {
                let text = clean_completion(&raw, &rendered);
                if text.trim().is_empty() {
                    return Err(PipelineError::EmptyCompletion { block_id: prompt.block_id.clone() });
                }
                return Ok(Completion { text, raw, attempts });
            }
            Err(e) if e.is_retryable() && attempts <= cfg.retries => {
                log::debug!("attempt {attempts} for {} failed: {e}", prompt.block_id);
                let factor = 1u64 << (attempts - 1).min(6);
                std::thread::sleep(Duration::from_millis(cfg.retry_backoff_ms.saturating_mul(factor)));
            }
            Err(e @ TransportError::Unreachable(_)) => {
                return Err(PipelineError::BackendUnavailable {
                    block_id: prompt.block_id.clone(),
                    attempts,
                    message: e.to_string(),
                })
            }
            Err(e) if e.is_retryable() => {
                return Err(PipelineError::BudgetExhausted {
                    block_id: prompt.block_id.clone(),
                    attempts,
                    message: e.to_string(),
                })
            }
            Err(e) => return Err(PipelineError::BackendRejected { block_id: prompt.block_id.clone(), message: e.to_string() }),
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct DecompileOptions {
    pub backend: BackendConfig,
    pub prompt: PromptConfig,
    /// Record wall-clock timings in transcripts.
    pub timings: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SnippetStatus {
    Ok,
    Failed,
    Skipped,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SnippetTranscript {
    pub block_id: String,
    pub function: String,
    pub index: usize,
    pub status: SnippetStatus,
    pub error: Option<String>,
    pub snippet_sha256: String,
    pub prompt_tokens: Option<usize>,
    pub completion_tokens: Option<usize>,
    pub attempts: u32,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub elapsed_ms: Option<u64>,
    pub prompt: Option<String>,
    pub completion: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FunctionOutcome {
    /// Name in the wat module.
    pub name: String,
    pub text: Option<String>,
    pub complete: bool,
    pub unresolved_markers: Vec<String>,
    /// Blocks the slicer produced that no completion refers to.
    pub dropped_blocks: Vec<String>,
    pub declaration_conflicts: Vec<String>,
    pub error: Option<String>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct DecompiledUnit {
    pub text: String,
    pub functions: Vec<FunctionOutcome>,
    pub recovered_strings: usize,
    pub unresolved_placeholders: Vec<u64>,
    pub transcripts: Vec<SnippetTranscript>,
    /// The backend became unreachable and remaining snippets were skipped.
    pub aborted: bool,
}

impl DecompiledUnit {
    pub fn unresolved_markers(&self) -> Vec<String> {
        self.functions.iter().flat_map(|f| f.unresolved_markers.iter().cloned()).collect()
    }

    pub fn is_complete(&self) -> bool {
        !self.aborted && self.functions.iter().all(|f| f.complete) && self.unresolved_placeholders.is_empty()
    }

    /// Summary line followed by one line per function and per snippet.
    pub fn write_report(&self, input: &str, mut w: impl Write) -> io::Result<()> {
        let failed = self.transcripts.iter().filter(|t| t.status != SnippetStatus::Ok).count();
        let summary = serde_json::json!({
            "schema": DECOMPILE_SCHEMA,
            "kind": "summary",
            "input": input,
            "functions": self.functions.len(),
            "incomplete_functions": self.functions.iter().filter(|f| !f.complete).count(),
            "snippets": self.transcripts.len(),
            "failed_snippets": failed,
            "unresolved_markers": self.unresolved_markers(),
            "recovered_strings": self.recovered_strings,
            "unresolved_placeholders": self.unresolved_placeholders,
            "aborted": self.aborted,
        });
        writeln!(w, "{summary}")?;
        for f in &self.functions {
            let mut v = serde_json::to_value(f).map_err(io::Error::from)?;
            let obj = v.as_object_mut().unwrap();
            obj.remove("text");
            obj.insert("schema".into(), DECOMPILE_SCHEMA.into());
            obj.insert("kind".into(), "function".into());
            writeln!(w, "{v}")?;
        }
        for t in &self.transcripts {
            let mut v = serde_json::to_value(t).map_err(io::Error::from)?;
            let obj = v.as_object_mut().unwrap();
            obj.insert("schema".into(), DECOMPILE_SCHEMA.into());
            obj.insert("kind".into(), "snippet".into());
            writeln!(w, "{v}")?;
        }
        Ok(())
    }
}

/// Functions that are decompiled: every defined function except toolchain
/// trampolines, callees first.
pub fn decompilable_functions(module: &WatModule) -> Vec<usize> {
    order_functions(module).into_iter().filter(|&i| shim_target(&module.functions[i]).is_none()).collect()
}

struct FunctionRun {
    outcome: FunctionOutcome,
    transcripts: Vec<SnippetTranscript>,
}

pub fn decompile_module(
    module: &WatModule,
    backend: &dyn Backend,
    opts: &DecompileOptions,
) -> Result<DecompiledUnit, PipelineError> {
    let strings = extract_data_strings(module)?;
    let order = decompilable_functions(module);
    let abort = AtomicBool::new(false);
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(opts.backend.max_in_flight.max(1))
        .build()
        .expect("thread pool");
    let runs: Vec<FunctionRun> = pool.install(|| {
        order.par_iter().map(|&i| decompile_function(module, &module.functions[i], backend, opts, &abort)).collect()
    });

    let mut unit = DecompiledUnit { aborted: abort.load(Ordering::SeqCst), ..Default::default() };
    for r in runs {
        unit.transcripts.extend(r.transcripts);
        unit.functions.push(r.outcome);
    }
    let body: Vec<&str> = unit.functions.iter().filter_map(|f| f.text.as_deref()).collect();
    if body.is_empty() {
        return Ok(unit);
    }
    let header = header_lines(module, &order, &unit.functions);
    let mut text = String::new();
    if !header.is_empty() {
        text.push_str(&header.join("\n"));
        text.push_str("\n\n");
    }
    text.push_str(&body.join("\n\n"));
    text.push('\n');
    let recovered = recover_strings(&text, &strings);
    unit.text = recovered.text;
    unit.recovered_strings = recovered.recovered;
    unit.unresolved_placeholders = recovered.unresolved;
    Ok(unit)
}

fn decompile_function(
    module: &WatModule,
    func: &WatFunction,
    backend: &dyn Backend,
    opts: &DecompileOptions,
    abort: &AtomicBool,
) -> FunctionRun {
    let mut outcome = FunctionOutcome {
        name: func.name.clone(),
        text: None,
        complete: false,
        unresolved_markers: vec![],
        dropped_blocks: vec![],
        declaration_conflicts: vec![],
        error: None,
    };
    let snippets = match slice_function(func) {
        Ok(s) => s,
        Err(e) => {
            outcome.error = Some(e.to_string());
            return FunctionRun { outcome, transcripts: vec![] };
        }
    };
    let params = param_variables(func, module);
    let mut done: Vec<(String, String)> = Vec::new();
    let mut transcripts = Vec::new();
    for s in &snippets {
        let mut t = SnippetTranscript {
            block_id: s.block_id.clone(),
            function: func.name.clone(),
            index: s.index,
            status: SnippetStatus::Skipped,
            error: None,
            snippet_sha256: snippet_hash(&s.text),
            prompt_tokens: None,
            completion_tokens: None,
            attempts: 0,
            elapsed_ms: None,
            prompt: None,
            completion: None,
        };
        if abort.load(Ordering::SeqCst) {
            t.error = Some("backend unavailable".into());
            transcripts.push(t);
            continue;
        }
        let started = Instant::now();
        let result = run_snippet(module, s, &params, &done, backend, opts, &mut t);
        if opts.timings {
            t.elapsed_ms = Some(started.elapsed().as_millis() as u64);
        }
        match result {
            Ok(text) => {
                t.status = SnippetStatus::Ok;
                t.completion_tokens = Some(count_tokens(&text));
                t.completion = Some(text.clone());
                done.push((s.block_id.clone(), text));
            }
            Err(e) => {
                match &e {
                    PipelineError::BackendUnavailable { attempts, .. } => {
                        t.attempts = *attempts;
                        abort.store(true, Ordering::SeqCst);
                    }
                    PipelineError::BudgetExhausted { attempts, .. } => t.attempts = *attempts,
                    _ => {}
                }
                log::warn!("{}: {e}", s.block_id);
                t.status = SnippetStatus::Failed;
                t.error = Some(e.to_string());
            }
        }
        transcripts.push(t);
    }
    finish_function(&mut outcome, &snippets, done);
    FunctionRun { outcome, transcripts }
}

fn run_snippet(
    module: &WatModule,
    s: &Snippet,
    params: &[crate::context::VariableDef],
    done: &[(String, String)],
    backend: &dyn Backend,
    opts: &DecompileOptions,
    t: &mut SnippetTranscript,
) -> Result<String, PipelineError> {
    let ctx = ContextBundle {
        defined_before: temporal_info(done.iter().map(|(_, c)| c.as_str()), params),
        callee_declarations: spatial_info(s, module)?,
    };
    let prompt = synthesize_prompt(s, &ctx, Mode::Inference, None, &opts.prompt)?;
    t.prompt_tokens = Some(prompt.token_count());
    t.prompt = Some(prompt.render());
    let c = decompile_snippet(&prompt, &t.snippet_sha256, backend, &opts.backend)?;
    t.attempts = c.attempts;
    Ok(c.text)
}

fn finish_function(outcome: &mut FunctionOutcome, snippets: &[Snippet], done: Vec<(String, String)>) {
    let blocks: BTreeMap<String, String> = done.into_iter().collect();
    let reassembled = match reassemble_lenient(&blocks) {
        Ok(r) => r,
        Err(e) => {
            outcome.error = Some(e.to_string());
            return;
        }
    };
    let Some(text) = reassembled.functions.get(&outcome.name) else {
        outcome.error = Some(format!("no completion for block `{}_0`", outcome.name));
        return;
    };
    let mut referenced: HashSet<&str> = HashSet::new();
    referenced.insert(snippets[0].block_id.as_str());
    for t in blocks.values() {
        for m in crate::slicer::find_markers(t) {
            if let Some(s) = snippets.iter().find(|s| s.block_id == m) {
                referenced.insert(s.block_id.as_str());
            }
        }
    }
    outcome.dropped_blocks =
        snippets.iter().filter(|s| blocks.contains_key(&s.block_id) && !referenced.contains(s.block_id.as_str())).map(|s| s.block_id.clone()).collect();
    outcome.unresolved_markers = reassembled.unresolved;
    let text = replace_markers(text, |id| format!("/* unresolved block {id} */"));
    let (text, conflicts) = dedup_declarations(&text);
    outcome.declaration_conflicts = conflicts;
    outcome.complete = outcome.unresolved_markers.is_empty()
        && outcome.dropped_blocks.is_empty()
        && snippets.iter().all(|s| blocks.contains_key(&s.block_id));
    outcome.text = Some(text);
}

/// Removes repeated identical declaration lines at function-body level.
/// Conflicting redeclarations are kept and reported by name.
pub fn dedup_declarations(text: &str) -> (String, Vec<String>) {
    let mut depth_at_line = Vec::new();
    let mut depth = 0i32;
    let toks = code_tokens(text);
    let mut ti = 0;
    let mut offset = 0;
    for line in text.split_inclusive('\n') {
        depth_at_line.push(depth);
        let end = offset + line.len();
        while ti < toks.len() && toks[ti].span.start < end {
            match toks[ti].text {
                "{" => depth += 1,
                "}" => depth -= 1,
                _ => {}
            }
            ti += 1;
        }
        offset = end;
    }
    let mut seen_lines: HashSet<String> = HashSet::new();
    let mut types: HashMap<String, String> = HashMap::new();
    let mut conflicts = Vec::new();
    let mut out = String::with_capacity(text.len());
    for (line, &d) in text.split_inclusive('\n').zip(&depth_at_line) {
        let trimmed = line.trim();
        let plain_decl = d == 1 && trimmed.ends_with(';') && !trimmed.contains(['=', '(']);
        if plain_decl {
            let decls = extract_declarations(trimmed);
            if !decls.is_empty() {
                if !seen_lines.insert(trimmed.to_string()) {
                    continue;
                }
                for v in decls {
                    match types.get(&v.name) {
                        Some(t) if *t != v.c_type => conflicts.push(v.name.clone()),
                        Some(_) => {}
                        None => {
                            types.insert(v.name.clone(), v.c_type.clone());
                        }
                    }
                }
            }
        }
        out.push_str(line);
    }
    for c in &conflicts {
        log::warn!("conflicting declarations of `{c}`");
    }
    (out, conflicts)
}

fn import_header(name: &str) -> Option<&'static str> {
    const TABLE: &[(&str, &[&str])] = &[
        ("stdio.h", &["printf", "puts", "putchar", "getchar", "fputs", "fprintf", "sprintf", "snprintf", "scanf", "fgets", "fflush"]),
        ("stdlib.h", &["malloc", "calloc", "realloc", "free", "exit", "abs", "atoi", "rand", "srand", "qsort", "abort"]),
        ("string.h", &["strlen", "strcmp", "strncmp", "strcpy", "strncpy", "strcat", "strchr", "memcpy", "memset", "memmove", "memcmp"]),
        ("ctype.h", &["isdigit", "isalpha", "isspace", "isalnum", "isupper", "islower", "toupper", "tolower"]),
        ("math.h", &["sqrt", "pow", "fabs", "floor", "ceil"]),
    ];
    TABLE.iter().find(|(_, names)| names.contains(&name)).map(|(h, _)| *h)
}

/// `#include` lines for known library imports, declarations for other called
/// imports (reserved `__` runtime hooks excluded), and prototypes for functions called before their definition.
fn header_lines(module: &WatModule, order: &[usize], functions: &[FunctionOutcome]) -> Vec<String> {
    let mut includes = std::collections::BTreeSet::new();
    let mut externs = Vec::new();
    let mut seen_imports = HashSet::new();
    for &i in order {
        for c in &module.functions[i].callees {
            if let FuncRef::Import(k) = *c {
                let sig = &module.imports[k];
                if !seen_imports.insert(k) || sig.name.starts_with("__") {
                    continue;
                }
                match import_header(&sig.name) {
                    Some(h) => {
                        includes.insert(h);
                    }
                    None => externs.push(signature_to_declaration(sig)),
                }
            }
        }
    }
    let position: HashMap<usize, usize> = order.iter().enumerate().map(|(p, &i)| (i, p)).collect();
    let mut protos = Vec::new();
    let mut proto_seen = HashSet::new();
    for (p, &i) in order.iter().enumerate() {
        for c in &module.functions[i].callees {
            let FuncRef::Defined(j) = *c else { continue };
            let Some(&q) = position.get(&j) else { continue };
            if j == i || q < p || !proto_seen.insert(j) {
                continue;
            }
            if let Some(text) = functions[q].text.as_deref() {
                if let Some(brace) = text.find('{') {
                    protos.push(format!("{};", text[..brace].trim()));
                }
            }
        }
    }
    includes.into_iter().map(|h| format!("#include <{h}>")).chain(externs).chain(protos).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::wat::parse_module;

    const WAT: &str = "(module
  (func $twice (param i32) (result i32)
    local.get 0
    i32.const 2
    i32.mul)
  (func $spin (param i32) (result i32)
    block
      loop
        local.get 0
        call $twice
        br_if 1
        br 0
      end
    end
    i32.const 0)
  (data (i32.const 1024) \"hi\\0a\\00\"))";

    fn gold() -> Vec<(String, String)> {
        let m = parse_module(WAT).unwrap();
        let spin = slice_function(m.function_by_name("spin").unwrap()).unwrap();
        let twice = slice_function(m.function_by_name("twice").unwrap()).unwrap();
        vec![
            (twice[0].text.clone(), "int twice(int local_12) {\n  return local_12 * 2;\n}".into()),
            (spin[0].text.clone(), "int spin(int local_12) {\n  <<spin_1>>\n  puts(STR_1024);\n  return 0;\n}".into()),
            (spin[1].text.clone(), "  while (!twice(local_12)) {\n  }".into()),
        ]
    }

    fn table(pairs: &[(String, String)]) -> MockBackend {
        MockBackend::from_pairs(pairs.iter().map(|(a, b)| (a.as_str(), b.as_str())))
    }

    #[test]
    fn mock_end_to_end() {
        let m = parse_module(WAT).unwrap();
        let unit = decompile_module(&m, &table(&gold()), &DecompileOptions::default()).unwrap();
        assert_eq!(
            unit.text,
            "int twice(int local_12) {\n  return local_12 * 2;\n}\n\n\
             int spin(int local_12) {\n  while (!twice(local_12)) {\n  }\n  puts(\"hi\\n\");\n  return 0;\n}\n"
        );
        assert!(unit.is_complete());
        assert_eq!(unit.recovered_strings, 1);
        assert_eq!(unit.transcripts.len(), 3);
        let again = decompile_module(&m, &table(&gold()), &DecompileOptions::default()).unwrap();
        assert_eq!(unit, again);
    }

    #[test]
    fn missing_inner_block_is_reported() {
        let m = parse_module(WAT).unwrap();
        let mut g = gold();
        g.pop();
        let unit = decompile_module(&m, &table(&g), &DecompileOptions::default()).unwrap();
        assert_eq!(unit.unresolved_markers(), vec!["spin_1".to_string()]);
        assert!(unit.text.contains("int twice"));
        assert!(unit.text.contains("/* unresolved block spin_1 */"));
        assert!(!unit.text.contains("<<"));
        assert!(!unit.is_complete());
        let failed: Vec<_> = unit.transcripts.iter().filter(|t| t.status == SnippetStatus::Failed).collect();
        assert_eq!(failed.len(), 1);
        assert!(failed[0].error.as_deref().unwrap().contains("empty completion"));
    }

    #[test]
    fn empty_module_gives_empty_unit() {
        let m = parse_module("(module)").unwrap();
        let unit = decompile_module(&m, &MockBackend::default(), &DecompileOptions::default()).unwrap();
        assert_eq!(unit.text, "");
        assert!(unit.functions.is_empty());
    }

    #[test]
    fn unreachable_backend_aborts() {
        let m = parse_module(WAT).unwrap();
        let backend = BackendConfig {
            endpoint: "http://127.0.0.1:9/completions".into(),
            retries: 1,
            retry_backoff_ms: 1,
            max_in_flight: 1,
            timeout_secs: 2.0,
            ..BackendConfig::default()
        };
        let b = backend_from_config(&backend).unwrap();
        let unit = decompile_module(&m, b.as_ref(), &DecompileOptions { backend, ..Default::default() }).unwrap();
        assert!(unit.aborted);
        assert_eq!(unit.text, "");
        let first = &unit.transcripts[0];
        assert_eq!(first.attempts, 2);
        assert!(first.error.as_deref().unwrap().contains("unavailable"));
        assert!(unit.transcripts[1..].iter().all(|t| t.status == SnippetStatus::Skipped));
    }

    #[test]
    fn declarations_are_deduplicated() {
        let (t, c) = dedup_declarations("int f(void) {\n  int local_8;\n  int local_8;\n  char local_4;\n  {\n    int local_8;\n  }\n}");
        assert_eq!(t, "int f(void) {\n  int local_8;\n  char local_4;\n  {\n    int local_8;\n  }\n}");
        assert!(c.is_empty());
        let (_, c) = dedup_declarations("int f(void) {\n  int local_8;\n  long local_8;\n}");
        assert_eq!(c, vec!["local_8".to_string()]);
    }

    #[test]
    fn imports_and_forward_calls_get_declarations() {
        let wat = "(module
  (import \"env\" \"printf\" (func $printf (param i32 i32) (result i32)))
  (import \"env\" \"helper\" (func $helper (param i32) (result i32)))
  (func $even (param i32) (result i32) local.get 0 call $odd)
  (func $odd (param i32) (result i32) local.get 0 call $even i32.const 0 i32.const 0 call $printf drop local.get 0 call $helper))";
        let m = parse_module(wat).unwrap();
        let f = |n: &str| slice_function(m.function_by_name(n).unwrap()).unwrap()[0].text.clone();
        let t = MockBackend::from_pairs([
            (f("even").as_str(), "int even(int local_12) {\n  return odd(local_12);\n}"),
            (f("odd").as_str(), "int odd(int local_12) {\n  return even(local_12);\n}"),
        ]);
        let unit = decompile_module(&m, &t, &DecompileOptions::default()).unwrap();
        assert!(unit.text.starts_with("#include <stdio.h>\nint helper(int);\nint odd(int local_12);\n\nint even"), "{}", unit.text);
    }
}
