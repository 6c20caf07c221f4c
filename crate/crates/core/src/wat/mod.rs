//! WebAssembly text format model.
//!
//! The parser keeps byte spans and 0-based line numbers for every function and
//! loop so that slicing can cut the original text without reformatting it.
//! Both the flat form printed by `wasm2wat` and the folded S-expression form
//! are accepted, including mixtures of the two.

mod lexer;
mod parser;
mod strings;

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::ops::Range;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use lexer::{is_opcode, tokenize, Token, TokenKind};
pub use parser::parse_module;
pub use strings::{decode_wat_string, extract_data_strings, OffsetStringMap};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum WatError {
    #[error("parse error at {line}:{column}: {message}")]
    Parse { line: usize, column: usize, message: String },
    #[error("unsupported construct at line {line}: {construct}")]
    UnsupportedConstruct { line: usize, construct: String },
    #[error("call at line {line} targets unknown function `{target}`")]
    UnresolvedCall { line: usize, target: String },
    #[error("malformed escape `{escape}` in data segment at byte {offset}")]
    BadEscape { offset: usize, escape: String },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ValType {
    I32,
    I64,
    F32,
    F64,
}

impl ValType {
    pub fn parse(s: &str) -> Option<ValType> {
        match s {
            "i32" => Some(ValType::I32),
            "i64" => Some(ValType::I64),
            "f32" => Some(ValType::F32),
            "f64" => Some(ValType::F64),
            _ => None,
        }
    }

    /// Fixed C spelling used for declarations. Pointer-ness is never inferred.
    pub fn c_type(self) -> &'static str {
        match self {
            ValType::I32 => "int",
            ValType::I64 => "long long",
            ValType::F32 => "float",
            ValType::F64 => "double",
        }
    }
}

impl fmt::Display for ValType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ValType::I32 => "i32",
            ValType::I64 => "i64",
            ValType::F32 => "f32",
            ValType::F64 => "f64",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FunctionSignature {
    pub name: String,
    pub params: Vec<ValType>,
    /// At most one entry.
    pub results: Vec<ValType>,
}

impl FunctionSignature {
    pub fn new(name: impl Into<String>, params: Vec<ValType>, results: Vec<ValType>) -> Self {
        FunctionSignature { name: name.into(), params, results }
    }

    pub fn with_name(&self, name: impl Into<String>) -> Self {
        FunctionSignature { name: name.into(), ..self.clone() }
    }
}

/// Renders a C prototype such as `int add(int, int);`.
pub fn signature_to_declaration(sig: &FunctionSignature) -> String {
    let ret = sig.results.first().map_or("void", |t| t.c_type());
    let params = if sig.params.is_empty() {
        "void".to_string()
    } else {
        sig.params.iter().map(|t| t.c_type()).collect::<Vec<_>>().join(", ")
    };
    format!("{ret} {}({params});", sig.name)
}

/// A function in the combined index space: imports first, then definitions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum FuncRef {
    Import(usize),
    Defined(usize),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CallTarget {
    Direct(FuncRef),
    /// `call_indirect` through the type table.
    Indirect { type_index: usize },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CallSite {
    pub target: CallTarget,
    pub line: usize,
}

/// One instruction in execution order. Folded instructions are flattened
/// (operands first), and structured instructions contribute `block`/`loop`/
/// `if`/`else`/`end` entries.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Instr {
    pub op: String,
    pub immediates: Vec<String>,
    pub line: usize,
}

impl Instr {
    /// Value of a `key=value` immediate such as `offset=16`.
    pub fn keyed_immediate(&self, key: &str) -> Option<&str> {
        self.immediates.iter().find_map(|imm| imm.strip_prefix(key)?.strip_prefix('='))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LoopExtent {
    pub start_line: usize,
    pub end_line: usize,
    /// Absolute byte range of the loop construct in the module source.
    pub span: Range<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WatFunction {
    /// Position among defined functions (`0..FuncNum`).
    pub index: usize,
    pub name: String,
    pub signature: FunctionSignature,
    /// Absolute byte range of the `(func ...)` form.
    pub span: Range<usize>,
    pub start_line: usize,
    pub end_line: usize,
    /// Exact source text of the function form.
    pub text: String,
    /// Sorted by start line; properly nested or disjoint.
    pub loop_extents: Vec<LoopExtent>,
    pub callees: BTreeSet<FuncRef>,
    pub calls: Vec<CallSite>,
    pub instrs: Vec<Instr>,
    /// Declared locals after the parameters.
    pub locals: Vec<ValType>,
    /// `$name` → local index, covering parameters and locals.
    pub local_names: HashMap<String, u32>,
}

impl WatFunction {
    /// Source lines of the function with their 0-based line numbers.
    pub fn body_lines(&self) -> Vec<(usize, &str)> {
        self.text.split('\n').enumerate().map(|(i, l)| (self.start_line + i, l)).collect()
    }

    /// Resolves a `local.get`-style immediate (`3` or `$x`) to an index.
    pub fn local_index(&self, imm: &str) -> Option<u32> {
        if imm.starts_with('$') {
            self.local_names.get(imm).copied()
        } else {
            imm.parse().ok()
        }
    }

    pub fn local_type(&self, index: u32) -> Option<ValType> {
        let i = index as usize;
        let params = &self.signature.params;
        if i < params.len() {
            Some(params[i])
        } else {
            self.locals.get(i - params.len()).copied()
        }
    }

    /// Byte range of a loop relative to [`WatFunction::text`].
    pub fn relative_loop_spans(&self) -> Vec<Range<usize>> {
        self.loop_extents
            .iter()
            .map(|l| (l.span.start - self.span.start)..(l.span.end - self.span.start))
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DataSegment {
    /// Linear-memory address from the segment's constant offset expression.
    pub base_offset: u64,
    /// The string literals of the segment, escapes still encoded, in order.
    pub literals: Vec<String>,
    pub line: usize,
}

impl DataSegment {
    pub fn bytes(&self) -> Result<Vec<u8>, WatError> {
        let mut out = Vec::new();
        for lit in &self.literals {
            out.extend(decode_wat_string(lit)?);
        }
        Ok(out)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct WatModule {
    pub source: String,
    /// Type section entries; names are the `$id` if one was given.
    pub types: Vec<FunctionSignature>,
    pub imports: Vec<FunctionSignature>,
    pub functions: Vec<WatFunction>,
    pub data_segments: Vec<DataSegment>,
}

impl WatModule {
    pub fn func_count(&self) -> usize {
        self.functions.len()
    }

    pub fn signature(&self, f: FuncRef) -> Option<&FunctionSignature> {
        match f {
            FuncRef::Import(i) => self.imports.get(i),
            FuncRef::Defined(i) => self.functions.get(i).map(|f| &f.signature),
        }
    }

    pub fn function_by_name(&self, name: &str) -> Option<&WatFunction> {
        self.functions.iter().find(|f| f.name == name)
    }

    /// Resolves a call immediate: `$name` or an index in the combined space.
    pub fn resolve_call(&self, target: &str) -> Option<FuncRef> {
        if let Some(name) = target.strip_prefix('$') {
            if let Some(i) = self.imports.iter().position(|s| s.name == name) {
                return Some(FuncRef::Import(i));
            }
            return self.functions.iter().position(|f| f.name == name).map(FuncRef::Defined);
        }
        let idx: usize = target.parse().ok()?;
        if idx < self.imports.len() {
            Some(FuncRef::Import(idx))
        } else if idx - self.imports.len() < self.functions.len() {
            Some(FuncRef::Defined(idx - self.imports.len()))
        } else {
            None
        }
    }

    /// Signature used for an indirect call through type `index`.
    pub fn indirect_signature(&self, index: usize) -> Option<FunctionSignature> {
        self.types.get(index).map(|t| t.with_name(format!("indirect_{index}")))
    }

    pub fn resolve_type(&self, target: &str) -> Option<usize> {
        if let Some(name) = target.strip_prefix('$') {
            self.types.iter().position(|t| t.name == name)
        } else {
            target.parse().ok().filter(|i| *i < self.types.len())
        }
    }
}
