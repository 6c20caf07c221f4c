//! `local_{offset}` renaming of source variables by their stack-frame
//! offsets.

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};
use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::context::VariableDef;
use crate::ctext::{tokenize, CTokenKind};
use crate::wat::{FuncRef, WatFunction, WatModule};

#[derive(Debug, Error)]
pub enum RenameError {
    #[error("cannot read offset map: {0}")]
    Io(#[from] std::io::Error),
    #[error("offset map line {line}: {message}")]
    Format { line: usize, message: String },
    #[error("function `{function}` maps two variables to offset {offset}")]
    DuplicateOffset { function: String, offset: u64 },
    #[error("function `{function}` lists variable `{name}` twice")]
    DuplicateName { function: String, name: String },
    #[error("`{target}` already occurs in the source with a different meaning")]
    UnmappedCollision { target: String },
}

/// One line of the offset map exchange file.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OffsetRecord {
    pub function: String,
    pub name: String,
    pub offset: u64,
    #[serde(rename = "type")]
    pub c_type: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VarEntry {
    pub name: String,
    pub offset: u64,
    pub c_type: String,
}

impl VarEntry {
    pub fn target(&self) -> String {
        local_name(self.offset)
    }
}

pub fn local_name(offset: u64) -> String {
    format!("local_{offset}")
}

/// Function name → variables, one-to-one between names and offsets.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct VarOffsetMap {
    pub functions: BTreeMap<String, Vec<VarEntry>>,
}

impl VarOffsetMap {
    pub fn entries(&self, function: &str) -> &[VarEntry] {
        self.functions.get(function).map_or(&[], Vec::as_slice)
    }

    pub fn is_empty(&self) -> bool {
        self.functions.is_empty()
    }

    pub fn from_records(records: impl IntoIterator<Item = OffsetRecord>) -> Result<Self, RenameError> {
        let mut map = VarOffsetMap::default();
        for r in records {
            let list = map.functions.entry(r.function.clone()).or_default();
            if list.iter().any(|e| e.offset == r.offset) {
                return Err(RenameError::DuplicateOffset { function: r.function, offset: r.offset });
            }
            if list.iter().any(|e| e.name == r.name) {
                return Err(RenameError::DuplicateName { function: r.function, name: r.name });
            }
            list.push(VarEntry { name: r.name, offset: r.offset, c_type: r.c_type });
        }
        Ok(map)
    }

    pub fn to_records(&self) -> Vec<OffsetRecord> {
        self.functions
            .iter()
            .flat_map(|(f, list)| {
                list.iter().map(move |e| OffsetRecord {
                    function: f.clone(),
                    name: e.name.clone(),
                    offset: e.offset,
                    c_type: e.c_type.clone(),
                })
            })
            .collect()
    }
}

pub fn parse_offset_map(text: &str) -> Result<VarOffsetMap, RenameError> {
    let mut records = Vec::new();
    for (i, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let rec: OffsetRecord =
            serde_json::from_str(line).map_err(|e| RenameError::Format { line: i + 1, message: e.to_string() })?;
        records.push(rec);
    }
    VarOffsetMap::from_records(records)
}

pub fn load_offset_map(path: &Path) -> Result<VarOffsetMap, RenameError> {
    parse_offset_map(&std::fs::read_to_string(path)?)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Val {
    /// `__stack_pointer` plus an adjustment.
    Sp(i64),
    Param(u32),
    Const(i64),
    Unknown,
}

/// Frame accesses found by simulating the operand stack of a function.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct FrameAccesses {
    /// Sorted, distinct frame-relative offsets used by loads and stores.
    pub offsets: Vec<u64>,
    /// Parameter index → frame offset it is spilled to.
    pub param_slots: BTreeMap<u32, u64>,
}

fn is_stack_pointer(imm: &str) -> bool {
    imm == "$__stack_pointer" || imm == "0"
}

fn binary_op(op: &str) -> bool {
    let Some((_, name)) = op.split_once('.') else { return false };
    matches!(
        name,
        "add" | "sub" | "mul" | "div" | "div_s" | "div_u" | "rem_s" | "rem_u" | "and" | "or" | "xor" | "shl"
            | "shr_s" | "shr_u" | "rotl" | "rotr" | "eq" | "ne" | "lt" | "lt_s" | "lt_u" | "gt" | "gt_s" | "gt_u"
            | "le" | "le_s" | "le_u" | "ge" | "ge_s" | "ge_u" | "min" | "max" | "copysign"
    )
}

/// Simulates a function's instructions and records the constant offsets of
/// stack-pointer-relative memory accesses. Offsets are measured from the
/// lowest stack-pointer value the function computes (its frame base).
pub fn frame_accesses(func: &WatFunction, module: Option<&WatModule>) -> FrameAccesses {
    let nparams = func.signature.params.len() as u32;
    let mut locals: HashMap<u32, Val> = (0..nparams).map(|p| (p, Val::Param(p))).collect();
    let mut stack: Vec<Val> = Vec::new();
    let mut base = 0i64;
    let mut raw: Vec<i64> = Vec::new();
    let mut raw_params: Vec<(u32, i64)> = Vec::new();
    let pop = |s: &mut Vec<Val>| s.pop().unwrap_or(Val::Unknown);
    let address = |v: Val, imm: Option<&str>| match v {
        Val::Sp(a) => Some(a + imm.and_then(|s| s.parse::<i64>().ok()).unwrap_or(0)),
        _ => None,
    };

    for ins in &func.instrs {
        let op = ins.op.as_str();
        let imm0 = ins.immediates.first().map(String::as_str).unwrap_or("");
        match op {
            "global.get" => stack.push(if is_stack_pointer(imm0) { Val::Sp(0) } else { Val::Unknown }),
            "global.set" => {
                pop(&mut stack);
            }
            "i32.const" | "i64.const" => stack.push(imm0.parse().map_or(Val::Unknown, Val::Const)),
            "local.get" => {
                let v = func.local_index(imm0).and_then(|i| locals.get(&i).copied()).unwrap_or(Val::Unknown);
                stack.push(v);
            }
            "local.set" | "local.tee" => {
                let v = pop(&mut stack);
                if let Some(i) = func.local_index(imm0) {
                    locals.insert(i, v);
                }
                if op == "local.tee" {
                    stack.push(v);
                }
            }
            "i32.add" | "i32.sub" | "i64.add" | "i64.sub" => {
                let b = pop(&mut stack);
                let a = pop(&mut stack);
                let add = op.ends_with("add");
                let v = match (a, b) {
                    (Val::Sp(d), Val::Const(c)) => Val::Sp(if add { d + c } else { d - c }),
                    (Val::Const(c), Val::Sp(d)) if add => Val::Sp(d + c),
                    (Val::Const(x), Val::Const(y)) => Val::Const(if add { x.wrapping_add(y) } else { x.wrapping_sub(y) }),
                    _ => Val::Unknown,
                };
                if let Val::Sp(d) = v {
                    base = base.min(d);
                }
                stack.push(v);
            }
            _ if op.contains(".load") => {
                let addr = pop(&mut stack);
                raw.extend(address(addr, ins.keyed_immediate("offset")));
                stack.push(Val::Unknown);
            }
            _ if op.contains(".store") => {
                let value = pop(&mut stack);
                let addr = pop(&mut stack);
                if let Some(a) = address(addr, ins.keyed_immediate("offset")) {
                    raw.push(a);
                    if let Val::Param(p) = value {
                        raw_params.push((p, a));
                    }
                }
            }
            "call" | "call_indirect" => {
                let sig = if op == "call" {
                    module.and_then(|m| m.resolve_call(imm0)).and_then(|f| module?.signature(f).cloned())
                } else {
                    let ty = ins.immediates.iter().find_map(|i| module?.resolve_type(i));
                    pop(&mut stack);
                    ty.and_then(|t| module?.indirect_signature(t))
                };
                match sig {
                    Some(s) => {
                        for _ in &s.params {
                            pop(&mut stack);
                        }
                        stack.extend(s.results.iter().map(|_| Val::Unknown));
                    }
                    None => stack.clear(),
                }
            }
            "drop" | "br_if" | "br_table" | "if" => {
                pop(&mut stack);
            }
            "select" => {
                pop(&mut stack);
                pop(&mut stack);
                pop(&mut stack);
                stack.push(Val::Unknown);
            }
            "return" | "unreachable" | "br" => stack.clear(),
            "memory.size" => stack.push(Val::Unknown),
            "memory.copy" | "memory.fill" => {
                stack.truncate(stack.len().saturating_sub(3));
            }
            "nop" | "block" | "loop" | "else" | "end" => {}
            _ if binary_op(op) => {
                pop(&mut stack);
                pop(&mut stack);
                stack.push(Val::Unknown);
            }
            _ => {
                // unary ops and conversions
                pop(&mut stack);
                stack.push(Val::Unknown);
            }
        }
    }
    let rel = |a: i64| u64::try_from(a - base).ok();
    let offsets: BTreeSet<u64> = raw.into_iter().filter_map(rel).collect();
    let mut param_slots = BTreeMap::new();
    for (p, a) in raw_params {
        if let Some(o) = rel(a) {
            param_slots.entry(p).or_insert(o);
        }
    }
    FrameAccesses { offsets: offsets.into_iter().collect(), param_slots }
}

/// Candidate variable offsets for a function without a debug mapping.
pub fn infer_offsets_from_wat(func: &WatFunction) -> Vec<u64> {
    frame_accesses(func, None).offsets
}

/// Parameters as `local_{offset}` variables, in parameter order. Parameters
/// never spilled to the frame are omitted.
pub fn param_variables(func: &WatFunction, module: &WatModule) -> Vec<VariableDef> {
    let acc = frame_accesses(func, Some(module));
    acc.param_slots
        .iter()
        .map(|(p, off)| VariableDef::new(local_name(*off), func.signature.params[*p as usize].c_type()))
        .collect()
}

/// Rewrites each mapped identifier to `local_{offset}`. Occurrences inside
/// string literals, comments, and member accesses (`.x`, `->x`) are left alone.
pub fn rename_c_source(c_text: &str, entries: &[VarEntry]) -> Result<String, RenameError> {
    if entries.is_empty() {
        return Ok(c_text.to_string());
    }
    let map: HashMap<&str, String> = entries.iter().map(|e| (e.name.as_str(), e.target())).collect();
    let toks = tokenize(c_text);
    let mut present: HashSet<&str> = HashSet::new();
    for (i, t) in toks.iter().enumerate() {
        if t.kind == CTokenKind::Ident && !after_member_access(&toks, i) {
            present.insert(t.text);
        }
    }
    for e in entries {
        let target = e.target();
        if e.name != target && present.contains(e.name.as_str()) && present.contains(target.as_str()) {
            return Err(RenameError::UnmappedCollision { target });
        }
    }
    let mut out = String::with_capacity(c_text.len());
    let mut last = 0;
    for (i, t) in toks.iter().enumerate() {
        if t.kind != CTokenKind::Ident || after_member_access(&toks, i) {
            continue;
        }
        if let Some(target) = map.get(t.text) {
            out.push_str(&c_text[last..t.span.start]);
            out.push_str(target);
            last = t.span.end;
        }
    }
    out.push_str(&c_text[last..]);
    Ok(out)
}

fn after_member_access(toks: &[crate::ctext::CToken<'_>], i: usize) -> bool {
    i > 0 && matches!(toks[i - 1].text, "." | "->")
}

/// Defined functions that are only a trampoline into another defined function
/// with the same parameters forwarded, such as the `main` shim the toolchain
/// generates around `__original_main`.
pub fn shim_target(func: &WatFunction) -> Option<FuncRef> {
    let real: Vec<_> = func.instrs.iter().filter(|i| !matches!(i.op.as_str(), "end" | "nop")).collect();
    let calls: Vec<_> = real.iter().filter(|i| i.op == "call").collect();
    let only_forwarding = real.iter().all(|i| matches!(i.op.as_str(), "call" | "local.get" | "return" | "drop"));
    if func.name == "main" && calls.len() == 1 && only_forwarding {
        return func.callees.iter().next().copied().filter(|f| matches!(f, FuncRef::Defined(_)));
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::wat::parse_module;

    fn entry(name: &str, offset: u64) -> VarEntry {
        VarEntry { name: name.into(), offset, c_type: "int".into() }
    }

    #[test]
    fn map_loading() {
        let m = parse_offset_map(r#"{"function":"main","name":"x","offset":16,"type":"int"}"#).unwrap();
        assert_eq!(m.entries("main"), &[entry("x", 16)]);
        assert!(parse_offset_map("").unwrap().is_empty());
        let dup = "{\"function\":\"f\",\"name\":\"a\",\"offset\":16,\"type\":\"int\"}\n\
                   {\"function\":\"f\",\"name\":\"b\",\"offset\":16,\"type\":\"int\"}";
        assert!(matches!(parse_offset_map(dup), Err(RenameError::DuplicateOffset { offset: 16, .. })));
        let shadow = "{\"function\":\"f\",\"name\":\"a\",\"offset\":16,\"type\":\"int\"}\n\
                      {\"function\":\"f\",\"name\":\"a\",\"offset\":20,\"type\":\"int\"}";
        assert!(matches!(parse_offset_map(shadow), Err(RenameError::DuplicateName { .. })));
        assert!(matches!(parse_offset_map("{nope"), Err(RenameError::Format { line: 1, .. })));
    }

    #[test]
    fn rename_examples() {
        assert_eq!(rename_c_source("int x = 0; x++;", &[entry("x", 16)]).unwrap(), "int local_16 = 0; local_16++;");
        assert_eq!(rename_c_source("int x;", &[]).unwrap(), "int x;");
        assert_eq!(
            rename_c_source("printf(\"x\"); /* x */ x; s.x; p->x; xx;", &[entry("x", 16)]).unwrap(),
            "printf(\"x\"); /* x */ local_16; s.x; p->x; xx;"
        );
    }

    #[test]
    fn rename_is_idempotent_and_detects_collisions() {
        let e = [entry("x", 16), entry("y", 12)];
        let once = rename_c_source("int x, y; x = y;", &e).unwrap();
        assert_eq!(rename_c_source(&once, &e).unwrap(), once);
        let err = rename_c_source("int x, local_16;", &e).unwrap_err();
        assert!(matches!(err, RenameError::UnmappedCollision { .. }));
    }

    const FRAME: &str = r#"(module
  (global $__stack_pointer (mut i32) (i32.const 65536))
  (func $f (param i32) (result i32)
    (local i32 i32 i32 i32 i32 i32)
    global.get $__stack_pointer
    local.set 1
    i32.const 32
    local.set 2
    local.get 1
    local.get 2
    i32.sub
    local.set 3
    local.get 3
    local.get 0
    i32.store offset=12
    local.get 3
    i32.const 0
    i32.store offset=16
    local.get 3
    i32.load offset=16
    local.set 4
    local.get 3
    local.get 4
    i32.store offset=24
    local.get 3
    i32.const 16
    i32.add
    local.set 5
    local.get 5
    i32.load
    local.set 6
    local.get 3
    i32.load offset=16
    local.get 3
    i32.load offset=16
    i32.add)
  (func $g (result i32)
    i32.const 1))"#;

    #[test]
    fn offsets_from_frame_traffic() {
        let m = parse_module(FRAME).unwrap();
        assert_eq!(infer_offsets_from_wat(&m.functions[0]), vec![12, 16, 24]);
        assert!(infer_offsets_from_wat(&m.functions[1]).is_empty());
        let params = param_variables(&m.functions[0], &m);
        assert_eq!(params, vec![VariableDef::new("local_12", "int")]);
    }
}
