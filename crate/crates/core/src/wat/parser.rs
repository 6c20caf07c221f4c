use std::collections::{BTreeSet, HashMap};
use std::ops::Range;

use super::lexer::{is_opcode, tokenize, Token, TokenKind};
use super::{
    CallSite, CallTarget, DataSegment, FunctionSignature, Instr, LoopExtent, ValType, WatError, WatFunction,
    WatModule,
};

/// Parses a wat module (flat or folded form) into a [`WatModule`].
pub fn parse_module(src: &str) -> Result<WatModule, WatError> {
    let tokens = tokenize(src)?;
    let mut p = Parser { src, toks: &tokens, pos: 0 };
    let raw = p.module()?;
    raw.resolve(src)
}

const SIMD_PREFIXES: &[&str] = &["v128", "i8x16", "i16x8", "i32x4", "i64x2", "f32x4", "f64x2"];
const EXCEPTION_OPS: &[&str] =
    &["try", "try_table", "catch", "catch_all", "throw", "throw_ref", "rethrow", "delegate"];

fn unsupported_op(op: &str) -> Option<&'static str> {
    if SIMD_PREFIXES.iter().any(|p| op.starts_with(p)) {
        Some("SIMD")
    } else if op.contains("atomic") {
        Some("threads (atomic instructions)")
    } else if EXCEPTION_OPS.contains(&op) {
        Some("exception handling")
    } else if op.starts_with("return_call") {
        Some("tail calls")
    } else {
        None
    }
}

struct RawFunc {
    name: Option<String>,
    type_ref: Option<(String, usize)>,
    params: Vec<ValType>,
    results: Vec<ValType>,
    has_inline_sig: bool,
    locals: Vec<ValType>,
    local_names: HashMap<String, u32>,
    span: Range<usize>,
    start_line: usize,
    end_line: usize,
    body: BodyOut,
}

#[derive(Default)]
struct BodyOut {
    instrs: Vec<Instr>,
    loops: Vec<LoopExtent>,
    calls: Vec<(String, usize)>,
    indirect: Vec<(Option<String>, usize)>,
}

enum RawImport {
    Func { name: Option<String>, type_ref: Option<(String, usize)>, params: Vec<ValType>, results: Vec<ValType>, has_inline_sig: bool },
}

#[derive(Default)]
struct RawModule {
    types: Vec<FunctionSignature>,
    imports: Vec<RawImport>,
    funcs: Vec<RawFunc>,
    data: Vec<DataSegment>,
}

struct Parser<'s, 't> {
    src: &'s str,
    toks: &'t [Token<'s>],
    pos: usize,
}

impl<'s, 't> Parser<'s, 't> {
    fn peek(&self) -> Option<&'t Token<'s>> {
        self.toks.get(self.pos)
    }

    fn peek_at(&self, off: usize) -> Option<&'t Token<'s>> {
        self.toks.get(self.pos + off)
    }

    fn next(&mut self) -> Option<&'t Token<'s>> {
        let t = self.toks.get(self.pos);
        self.pos += 1;
        t
    }

    fn err_at(&self, tok: Option<&Token<'_>>, message: impl Into<String>) -> WatError {
        match tok {
            Some(t) => WatError::Parse { line: t.line + 1, column: t.col + 1, message: message.into() },
            None => {
                let line = self.src.lines().count().max(1);
                WatError::Parse { line, column: 1, message: format!("unexpected end of input: {}", message.into()) }
            }
        }
    }

    fn err(&self, message: impl Into<String>) -> WatError {
        self.err_at(self.peek(), message)
    }

    fn unsupported(&self, tok: &Token<'_>, construct: impl Into<String>) -> WatError {
        WatError::UnsupportedConstruct { line: tok.line + 1, construct: construct.into() }
    }

    fn expect_lparen(&mut self) -> Result<&'t Token<'s>, WatError> {
        match self.peek() {
            Some(t) if t.kind == TokenKind::LParen => Ok(self.next().unwrap()),
            _ => Err(self.err("expected `(`")),
        }
    }

    fn expect_rparen(&mut self) -> Result<&'t Token<'s>, WatError> {
        match self.peek() {
            Some(t) if t.kind == TokenKind::RParen => Ok(self.next().unwrap()),
            _ => Err(self.err("expected `)`")),
        }
    }

    fn expect_atom(&mut self) -> Result<&'t Token<'s>, WatError> {
        match self.peek() {
            Some(t) if t.kind == TokenKind::Atom => Ok(self.next().unwrap()),
            _ => Err(self.err("expected a keyword or identifier")),
        }
    }

    fn at_rparen(&self) -> bool {
        matches!(self.peek(), Some(t) if t.kind == TokenKind::RParen)
    }

    /// True when the next tokens are `(` followed by the given keyword.
    fn at_group(&self, kw: &str) -> bool {
        matches!(self.peek(), Some(t) if t.kind == TokenKind::LParen)
            && matches!(self.peek_at(1), Some(t) if t.is_atom(kw))
    }

    fn optional_id(&mut self) -> Option<String> {
        match self.peek() {
            Some(t) if t.kind == TokenKind::Atom && t.text.starts_with('$') => {
                self.pos += 1;
                Some(t.text.to_string())
            }
            _ => None,
        }
    }

    /// Skips a balanced S-expression starting at `(`; returns the closing token.
    fn skip_group(&mut self) -> Result<&'t Token<'s>, WatError> {
        let open = self.expect_lparen()?;
        let mut depth = 1usize;
        while let Some(t) = self.next() {
            match t.kind {
                TokenKind::LParen => depth += 1,
                TokenKind::RParen => {
                    depth -= 1;
                    if depth == 0 {
                        return Ok(t);
                    }
                }
                _ => {}
            }
        }
        Err(self.err_at(Some(open), "unbalanced parenthesis"))
    }

    fn module(&mut self) -> Result<RawModule, WatError> {
        if self.toks.is_empty() {
            return Err(self.err("empty input"));
        }
        let mut raw = RawModule::default();
        let wrapped = self.at_group("module");
        if wrapped {
            self.pos += 2;
            self.optional_id();
        }
        loop {
            match self.peek() {
                None if !wrapped => break,
                None => return Err(self.err("missing `)` closing the module")),
                Some(t) if t.kind == TokenKind::RParen && wrapped => {
                    self.pos += 1;
                    break;
                }
                Some(t) if t.kind == TokenKind::LParen => self.field(&mut raw)?,
                Some(_) => return Err(self.err("expected a module field")),
            }
        }
        if let Some(t) = self.peek() {
            return Err(self.err_at(Some(t), "trailing input after module"));
        }
        Ok(raw)
    }

    fn field(&mut self, raw: &mut RawModule) -> Result<(), WatError> {
        let kw = self.peek_at(1).filter(|t| t.kind == TokenKind::Atom).ok_or_else(|| self.err("expected field keyword"))?;
        match kw.text {
            "type" => self.type_field(raw),
            "import" => self.import_field(raw),
            "func" => self.func_field(raw),
            "data" => self.data_field(raw),
            "memory" => {
                let start = self.pos;
                let close = self.skip_group()?;
                if self.toks[start..self.pos].iter().any(|t| t.is_atom("shared")) {
                    return Err(self.unsupported(close, "threads (shared memory)"));
                }
                Ok(())
            }
            "table" | "global" | "export" | "start" | "elem" => self.skip_group().map(|_| ()),
            other => Err(self.unsupported(kw, format!("module field `{other}`"))),
        }
    }

    fn type_field(&mut self, raw: &mut RawModule) -> Result<(), WatError> {
        self.pos += 2;
        let id = self.optional_id();
        if !self.at_group("func") {
            let t = self.peek().unwrap_or(&self.toks[self.pos - 1]);
            return Err(self.unsupported(t, "non-function type definition"));
        }
        self.pos += 2;
        self.optional_id();
        let (params, results, _) = self.signature_groups(None)?;
        self.expect_rparen()?;
        self.expect_rparen()?;
        let name = id.map(|s| s[1..].to_string()).unwrap_or_default();
        raw.types.push(FunctionSignature::new(name, params, results));
        Ok(())
    }

    /// Parses `(param ...)*` and `(result ...)*` groups.
    fn signature_groups(
        &mut self,
        mut names: Option<&mut HashMap<String, u32>>,
    ) -> Result<(Vec<ValType>, Vec<ValType>, bool), WatError> {
        let mut params = Vec::new();
        let mut results = Vec::new();
        let mut any = false;
        loop {
            if self.at_group("param") {
                any = true;
                self.pos += 2;
                if let Some(id) = self.optional_id() {
                    if let Some(names) = names.as_deref_mut() {
                        names.insert(id, params.len() as u32);
                    }
                    params.push(self.valtype()?);
                } else {
                    while !self.at_rparen() {
                        params.push(self.valtype()?);
                    }
                }
                self.expect_rparen()?;
            } else if self.at_group("result") {
                any = true;
                let open = self.peek().unwrap();
                self.pos += 2;
                while !self.at_rparen() {
                    results.push(self.valtype()?);
                }
                self.expect_rparen()?;
                if results.len() > 1 {
                    return Err(self.unsupported(open, "multi-value results"));
                }
            } else {
                break;
            }
        }
        Ok((params, results, any))
    }

    fn valtype(&mut self) -> Result<ValType, WatError> {
        let t = self.expect_atom()?;
        match ValType::parse(t.text) {
            Some(v) => Ok(v),
            None if t.text == "v128" => Err(self.unsupported(t, "SIMD value type v128")),
            None if t.text.ends_with("ref") => Err(self.unsupported(t, format!("reference type `{}`", t.text))),
            None => Err(self.err_at(Some(t), format!("unknown value type `{}`", t.text))),
        }
    }

    fn type_use(&mut self) -> Result<Option<(String, usize)>, WatError> {
        if self.at_group("type") {
            self.pos += 2;
            let t = self.expect_atom()?;
            self.expect_rparen()?;
            Ok(Some((t.text.to_string(), t.line)))
        } else {
            Ok(None)
        }
    }

    fn import_field(&mut self, raw: &mut RawModule) -> Result<(), WatError> {
        let open = self.expect_lparen()?;
        self.pos += 1;
        for _ in 0..2 {
            match self.next() {
                Some(t) if t.kind == TokenKind::Str => {}
                t => return Err(self.err_at(t.or(Some(open)), "expected import module/name string")),
            }
        }
        if self.at_group("func") {
            self.pos += 2;
            let name = self.optional_id();
            let type_ref = self.type_use()?;
            let (params, results, has_inline_sig) = self.signature_groups(None)?;
            self.expect_rparen()?;
            raw.imports.push(RawImport::Func { name, type_ref, params, results, has_inline_sig });
        } else {
            self.skip_group()?;
        }
        self.expect_rparen()?;
        Ok(())
    }

    fn func_field(&mut self, raw: &mut RawModule) -> Result<(), WatError> {
        let open = self.expect_lparen()?;
        self.pos += 1;
        let name = self.optional_id();
        let mut import = false;
        while self.at_group("export") || self.at_group("import") {
            import |= self.at_group("import");
            self.skip_group()?;
        }
        let type_ref = self.type_use()?;
        let mut local_names = HashMap::new();
        let (params, results, has_inline_sig) = self.signature_groups(Some(&mut local_names))?;
        if import {
            self.expect_rparen()?;
            raw.imports.push(RawImport::Func { name, type_ref, params, results, has_inline_sig });
            return Ok(());
        }
        let mut locals = Vec::new();
        while self.at_group("local") {
            self.pos += 2;
            if let Some(id) = self.optional_id() {
                local_names.insert(id, (params.len() + locals.len()) as u32);
                locals.push(self.valtype()?);
            } else {
                while !self.at_rparen() {
                    locals.push(self.valtype()?);
                }
            }
            self.expect_rparen()?;
        }
        let mut body = BodyOut::default();
        self.instrs(&mut body)?;
        let close = self.expect_rparen()?;
        raw.funcs.push(RawFunc {
            name,
            type_ref,
            params,
            results,
            has_inline_sig,
            locals,
            local_names,
            span: open.start..close.end,
            start_line: open.line,
            end_line: close.line,
            body,
        });
        Ok(())
    }

    fn data_field(&mut self, raw: &mut RawModule) -> Result<(), WatError> {
        let open = self.expect_lparen()?;
        self.pos += 1;
        self.optional_id();
        if self.at_group("memory") {
            self.skip_group()?;
        }
        let mut base = None;
        if self.at_group("offset") {
            self.pos += 2;
            base = Some(self.const_offset_expr()?);
            self.expect_rparen()?;
        } else if matches!(self.peek(), Some(t) if t.kind == TokenKind::LParen) {
            base = Some(self.const_offset_expr()?);
        }
        let mut literals = Vec::new();
        while let Some(t) = self.peek() {
            if t.kind != TokenKind::Str {
                break;
            }
            literals.push(t.text.to_string());
            self.pos += 1;
        }
        self.expect_rparen()?;
        match base {
            Some(base_offset) => raw.data.push(DataSegment { base_offset, literals, line: open.line }),
            None => log::debug!("skipping passive data segment at line {}", open.line + 1),
        }
        Ok(())
    }

    /// `(i32.const N)` or flat `i32.const N` inside an `(offset ...)` group.
    fn const_offset_expr(&mut self) -> Result<u64, WatError> {
        let folded = matches!(self.peek(), Some(t) if t.kind == TokenKind::LParen);
        if folded {
            self.pos += 1;
        }
        let op = self.expect_atom()?;
        if op.text != "i32.const" && op.text != "i64.const" {
            return Err(self.unsupported(op, format!("non-constant data segment offset `{}`", op.text)));
        }
        let lit = self.expect_atom()?;
        let value = parse_int(lit.text).ok_or_else(|| self.err_at(Some(lit), "malformed integer"))?;
        if folded {
            self.expect_rparen()?;
        }
        Ok(if op.text == "i32.const" { value as u32 as u64 } else { value as u64 })
    }

    /// Parses instructions until the `)` that closes the enclosing form.
    fn instrs(&mut self, out: &mut BodyOut) -> Result<(), WatError> {
        // flat block stack: (kind, opening token)
        let mut stack: Vec<(&'s str, &'t Token<'s>)> = Vec::new();
        loop {
            let Some(t) = self.peek() else {
                return Err(self.err("unexpected end of input inside function body"));
            };
            match t.kind {
                TokenKind::RParen => {
                    if let Some((kind, open)) = stack.last() {
                        return Err(self.err_at(Some(open), format!("`{kind}` is not closed by `end`")));
                    }
                    return Ok(());
                }
                TokenKind::LParen => self.folded(out)?,
                TokenKind::Str => return Err(self.err("unexpected string in function body")),
                TokenKind::Atom => {
                    self.pos += 1;
                    let op = t.text;
                    if !is_opcode(op) {
                        return Err(self.err_at(Some(t), format!("expected an instruction, found `{op}`")));
                    }
                    if let Some(what) = unsupported_op(op) {
                        return Err(self.unsupported(t, format!("{what}: `{op}`")));
                    }
                    match op {
                        "block" | "loop" | "if" => {
                            let imms = self.block_header()?;
                            stack.push((op, t));
                            out.instrs.push(Instr { op: op.into(), immediates: imms, line: t.line });
                        }
                        "else" => {
                            if !matches!(stack.last(), Some(("if", _))) {
                                return Err(self.err_at(Some(t), "`else` outside of `if`"));
                            }
                            self.optional_id();
                            out.instrs.push(Instr { op: "else".into(), immediates: vec![], line: t.line });
                        }
                        "end" => {
                            let Some((kind, open)) = stack.pop() else {
                                return Err(self.err_at(Some(t), "`end` without an open block"));
                            };
                            self.optional_id();
                            if kind == "loop" {
                                out.loops.push(LoopExtent { start_line: open.line, end_line: t.line, span: open.start..t.end });
                            }
                            out.instrs.push(Instr { op: "end".into(), immediates: vec![], line: t.line });
                        }
                        _ => {
                            let imms = self.plain_immediates(op, t, out)?;
                            out.instrs.push(Instr { op: op.into(), immediates: imms, line: t.line });
                        }
                    }
                }
            }
        }
    }

    /// Label and block type after `block`/`loop`/`if`.
    fn block_header(&mut self) -> Result<Vec<String>, WatError> {
        let mut imms = Vec::new();
        if let Some(id) = self.optional_id() {
            imms.push(id);
        }
        if let Some((ty, _)) = self.type_use()? {
            imms.push(format!("type={ty}"));
        }
        let (params, results, _) = self.signature_groups(None)?;
        if !params.is_empty() {
            let t = self.toks[self.pos - 1];
            return Err(self.unsupported(&t, "block parameters (multi-value)"));
        }
        imms.extend(results.iter().map(|r| format!("result={r}")));
        Ok(imms)
    }

    fn plain_immediates(&mut self, op: &str, tok: &Token<'s>, out: &mut BodyOut) -> Result<Vec<String>, WatError> {
        let mut imms = Vec::new();
        if op.ends_with(".const") {
            imms.push(self.expect_atom()?.text.to_string());
            return Ok(imms);
        }
        if op == "call_indirect" {
            if matches!(self.peek(), Some(t) if t.kind == TokenKind::Atom && !is_opcode(t.text)) {
                imms.push(self.next().unwrap().text.to_string());
            }
            let ty = self.type_use()?;
            let (params, results, inline) = self.signature_groups(None)?;
            if ty.is_none() && inline {
                return Err(self.unsupported(tok, "call_indirect with inline signature and no type index"));
            }
            let ty = ty.map(|(t, _)| t);
            if let Some(t) = &ty {
                imms.push(format!("type={t}"));
            }
            let _ = (params, results);
            out.indirect.push((ty, tok.line));
            return Ok(imms);
        }
        if op == "select" {
            let _ = self.signature_groups(None)?;
        }
        while let Some(t) = self.peek() {
            if t.kind != TokenKind::Atom || is_opcode(t.text) {
                break;
            }
            imms.push(t.text.to_string());
            self.pos += 1;
        }
        if op == "call" {
            let target = imms.first().ok_or_else(|| self.err_at(Some(tok), "`call` without a target"))?;
            out.calls.push((target.clone(), tok.line));
        }
        Ok(imms)
    }

    /// A folded instruction `(op imm* child*)`; emits children before `op`.
    fn folded(&mut self, out: &mut BodyOut) -> Result<(), WatError> {
        let open = self.expect_lparen()?;
        let op_tok = self.expect_atom()?;
        let op = op_tok.text;
        if !is_opcode(op) {
            return Err(self.err_at(Some(op_tok), format!("expected an instruction, found `{op}`")));
        }
        if let Some(what) = unsupported_op(op) {
            return Err(self.unsupported(op_tok, format!("{what}: `{op}`")));
        }
        match op {
            "block" | "loop" => {
                let imms = self.block_header()?;
                out.instrs.push(Instr { op: op.into(), immediates: imms, line: open.line });
                self.instrs(out)?;
                let close = self.expect_rparen()?;
                if op == "loop" {
                    out.loops.push(LoopExtent { start_line: open.line, end_line: close.line, span: open.start..close.end });
                }
                out.instrs.push(Instr { op: "end".into(), immediates: vec![], line: close.line });
            }
            "if" => {
                let imms = self.block_header()?;
                while matches!(self.peek(), Some(t) if t.kind == TokenKind::LParen) && !self.at_group("then") {
                    self.folded(out)?;
                }
                out.instrs.push(Instr { op: "if".into(), immediates: imms, line: open.line });
                if !self.at_group("then") {
                    return Err(self.err("folded `if` requires a `(then ...)` arm"));
                }
                self.pos += 2;
                self.instrs(out)?;
                self.expect_rparen()?;
                if self.at_group("else") {
                    let t = self.peek_at(1).unwrap();
                    self.pos += 2;
                    out.instrs.push(Instr { op: "else".into(), immediates: vec![], line: t.line });
                    self.instrs(out)?;
                    self.expect_rparen()?;
                }
                let close = self.expect_rparen()?;
                out.instrs.push(Instr { op: "end".into(), immediates: vec![], line: close.line });
            }
            "then" | "else" | "end" => return Err(self.err_at(Some(op_tok), format!("misplaced `{op}`"))),
            _ => {
                let imms = self.plain_immediates(op, op_tok, out)?;
                while matches!(self.peek(), Some(t) if t.kind == TokenKind::LParen) {
                    self.folded(out)?;
                }
                self.expect_rparen()?;
                out.instrs.push(Instr { op: op.into(), immediates: imms, line: open.line });
            }
        }
        Ok(())
    }
}

fn parse_int(text: &str) -> Option<i64> {
    let cleaned = text.replace('_', "");
    let (neg, digits) = match cleaned.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, cleaned.strip_prefix('+').unwrap_or(&cleaned)),
    };
    let magnitude = if let Some(hex) = digits.strip_prefix("0x") {
        u64::from_str_radix(hex, 16).ok()?
    } else {
        digits.parse::<u64>().ok()?
    };
    Some(if neg { (magnitude as i64).wrapping_neg() } else { magnitude as i64 })
}

impl RawModule {
    fn resolve(self, src: &str) -> Result<WatModule, WatError> {
        let RawModule { types, imports, funcs, data } = self;
        let type_lookup = |r: &(String, usize)| -> Result<FunctionSignature, WatError> {
            let idx = if let Some(name) = r.0.strip_prefix('$') {
                types.iter().position(|t| t.name == name)
            } else {
                r.0.parse::<usize>().ok().filter(|i| *i < types.len())
            };
            idx.map(|i| types[i].clone())
                .ok_or_else(|| WatError::Parse { line: r.1 + 1, column: 1, message: format!("unknown type `{}`", r.0) })
        };
        let n_imports = imports.len();
        let mut import_sigs = Vec::with_capacity(n_imports);
        for (i, imp) in imports.into_iter().enumerate() {
            let RawImport::Func { name, type_ref, params, results, has_inline_sig } = imp;
            let name = name.map(|s| s[1..].to_string()).unwrap_or_else(|| format!("func{i}"));
            let sig = match (&type_ref, has_inline_sig) {
                (Some(r), false) => type_lookup(r)?.with_name(name),
                _ => FunctionSignature::new(name, params, results),
            };
            import_sigs.push(sig);
        }
        let mut functions = Vec::with_capacity(funcs.len());
        for (i, f) in funcs.iter().enumerate() {
            let name = f.name.as_ref().map(|s| s[1..].to_string()).unwrap_or_else(|| format!("func{}", n_imports + i));
            let signature = match (&f.type_ref, f.has_inline_sig) {
                (Some(r), false) => type_lookup(r)?.with_name(name.clone()),
                _ => FunctionSignature::new(name.clone(), f.params.clone(), f.results.clone()),
            };
            functions.push((name, signature));
        }
        let resolve = |target: &str| -> Option<super::FuncRef> {
            if let Some(n) = target.strip_prefix('$') {
                if let Some(i) = import_sigs.iter().position(|s| s.name == n) {
                    return Some(super::FuncRef::Import(i));
                }
                return functions.iter().position(|(name, _)| name == n).map(super::FuncRef::Defined);
            }
            let idx: usize = parse_int(target)?.try_into().ok()?;
            if idx < n_imports {
                Some(super::FuncRef::Import(idx))
            } else if idx - n_imports < functions.len() {
                Some(super::FuncRef::Defined(idx - n_imports))
            } else {
                None
            }
        };
        let mut out = Vec::with_capacity(funcs.len());
        for (i, (raw, (name, signature))) in funcs.into_iter().zip(functions.iter().cloned()).enumerate() {
            let mut calls = Vec::new();
            let mut callees = BTreeSet::new();
            for (target, line) in &raw.body.calls {
                let r = resolve(target)
                    .ok_or_else(|| WatError::UnresolvedCall { line: line + 1, target: target.clone() })?;
                callees.insert(r);
                calls.push(CallSite { target: CallTarget::Direct(r), line: *line });
            }
            for (ty, line) in &raw.body.indirect {
                let type_index = match ty {
                    Some(t) => {
                        let idx = if let Some(n) = t.strip_prefix('$') {
                            types.iter().position(|x| x.name == n)
                        } else {
                            t.parse::<usize>().ok().filter(|i| *i < types.len())
                        };
                        idx.ok_or_else(|| WatError::Parse {
                            line: line + 1,
                            column: 1,
                            message: format!("unknown type `{t}` in call_indirect"),
                        })?
                    }
                    None => {
                        return Err(WatError::UnsupportedConstruct {
                            line: line + 1,
                            construct: "call_indirect without a type index".into(),
                        })
                    }
                };
                calls.push(CallSite { target: CallTarget::Indirect { type_index }, line: *line });
            }
            calls.sort_by_key(|c| c.line);
            let mut loops = raw.body.loops;
            loops.sort_by_key(|l| (l.span.start, std::cmp::Reverse(l.span.end)));
            out.push(WatFunction {
                index: i,
                name,
                signature,
                text: src[raw.span.clone()].to_string(),
                span: raw.span,
                start_line: raw.start_line,
                end_line: raw.end_line,
                loop_extents: loops,
                callees,
                calls,
                instrs: raw.body.instrs,
                locals: raw.locals,
                local_names: raw.local_names,
            });
        }
        Ok(WatModule { source: src.to_string(), types, imports: import_sigs, functions: out, data_segments: data })
    }
}
