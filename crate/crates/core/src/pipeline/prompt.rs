use std::sync::LazyLock;

use regex::Regex;
use serde::{Deserialize, Serialize};

use super::PipelineError;
use crate::context::{ContextBundle, VariableDef};
use crate::slicer::Snippet;

pub const INSTRUCTION_VERSION: &str = "wadec-instruction-1";

/// Default instruction text, version [`INSTRUCTION_VERSION`].
pub const DEFAULT_INSTRUCTION: &str = "\
Translate the WebAssembly text fragment under [Input] into C source code.
The C code must compute exactly what the fragment computes, and it should read the way a person would write it.
A token of the form <<name_N>> stands for a nested fragment that is translated on its own. Copy every such token into your answer unchanged, at the place where that fragment belongs.
Name each variable stored in the stack frame local_N, where N is its byte offset from the frame base.";

pub const DEFAULT_MAX_SEQ_LEN: usize = 2048;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct PromptConfig {
    pub version: String,
    pub instruction: String,
    /// Upper bound on rendered prompt tokens.
    pub max_seq_len: usize,
}

impl Default for PromptConfig {
    fn default() -> Self {
        PromptConfig {
            version: INSTRUCTION_VERSION.to_string(),
            instruction: DEFAULT_INSTRUCTION.to_string(),
            max_seq_len: DEFAULT_MAX_SEQ_LEN,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Finetune,
    Inference,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PromptRecord {
    pub block_id: String,
    pub instruction: String,
    pub defined_vars: Vec<VariableDef>,
    pub callee_decls: Vec<String>,
    pub wat_snippet: String,
    pub response: Option<String>,
    pub mode: Mode,
}

pub const LABEL_INSTRUCTION: &str = "[Instruction]";
pub const LABEL_INPUT: &str = "[Input]";
pub const LABEL_RESPONSE: &str = "[Response]";

impl PromptRecord {
    /// Rendered prompt. Inference prompts end right after the response label.
    pub fn render(&self) -> String {
        let mut s = String::new();
        s.push_str(LABEL_INSTRUCTION);
        s.push('\n');
        s.push_str(self.instruction.trim_end());
        s.push_str("\n\n");
        s.push_str(LABEL_INPUT);
        s.push_str("\nDefined variables:\n");
        for v in &self.defined_vars {
            s.push_str(&v.to_string());
            s.push('\n');
        }
        s.push_str("Called functions:\n");
        for d in &self.callee_decls {
            s.push_str(d);
            s.push('\n');
        }
        s.push_str("WebAssembly:\n");
        s.push_str(self.wat_snippet.trim_end_matches('\n'));
        s.push_str("\n\n");
        s.push_str(LABEL_RESPONSE);
        s.push('\n');
        if self.mode == Mode::Finetune {
            if let Some(r) = &self.response {
                s.push_str(r);
                s.push('\n');
            }
        }
        s
    }

    pub fn token_count(&self) -> usize {
        count_tokens(&self.render())
    }
}

static TOKEN_RE: LazyLock<Regex> = LazyLock::new(|| Regex::new(r"[A-Za-z0-9_]+|\S").unwrap());

/// Word-and-punctuation token count used for the sequence budget.
pub fn count_tokens(text: &str) -> usize {
    TOKEN_RE.find_iter(text).count()
}

/// Builds the prompt for a wat snippet. `response` is the gold C snippet and
/// is only rendered in finetune mode.
pub fn synthesize_prompt(
    snippet: &Snippet,
    ctx: &ContextBundle,
    mode: Mode,
    response: Option<&str>,
    cfg: &PromptConfig,
) -> Result<PromptRecord, PipelineError> {
    let record = PromptRecord {
        block_id: snippet.block_id.clone(),
        instruction: cfg.instruction.clone(),
        defined_vars: ctx.defined_before.clone(),
        callee_decls: ctx.callee_declarations.clone(),
        wat_snippet: snippet.text.clone(),
        response: match mode {
            Mode::Finetune => response.map(str::to_string),
            Mode::Inference => None,
        },
        mode,
    };
    let tokens = record.token_count();
    if tokens > cfg.max_seq_len {
        return Err(PipelineError::PromptTooLong { block_id: snippet.block_id.clone(), tokens, limit: cfg.max_seq_len });
    }
    Ok(record)
}
