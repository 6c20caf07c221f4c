//! Random wat modules in the layout `wasm2wat` prints.

use proptest::prelude::*;
use wadec::wat::{parse_module, WatModule};

#[derive(Debug, Clone)]
pub enum Stmt {
    Op(&'static str),
    Call(usize),
    Loop(Vec<Stmt>),
    Block(Vec<Stmt>),
}

fn stmt(nfuncs: usize) -> impl Strategy<Value = Stmt> {
    let leaf = prop_oneof![
        prop::sample::select(vec!["nop", "i32.const 7\n    drop", "global.get 0\n    drop"]).prop_map(Stmt::Op),
        (0..nfuncs).prop_map(Stmt::Call),
    ];
    leaf.prop_recursive(4, 24, 4, |inner| {
        prop_oneof![
            prop::collection::vec(inner.clone(), 0..4).prop_map(Stmt::Loop),
            prop::collection::vec(inner, 0..4).prop_map(Stmt::Block),
        ]
    })
}

fn render(s: &Stmt, depth: usize, out: &mut Vec<String>) {
    let pad = "  ".repeat(depth + 2);
    match s {
        Stmt::Op(t) => out.push(format!("{pad}{}", t.replace("\n    ", &format!("\n{pad}")))),
        Stmt::Call(j) => out.push(format!("{pad}call $f{j}")),
        Stmt::Loop(body) | Stmt::Block(body) => {
            let kw = if matches!(s, Stmt::Loop(_)) { "loop" } else { "block" };
            out.push(format!("{pad}{kw}  ;; label = @{}", depth + 1));
            for b in body {
                render(b, depth + 1, out);
            }
            if matches!(s, Stmt::Loop(_)) {
                out.push(format!("{pad}  i32.const 0"));
                out.push(format!("{pad}  br_if 0 (;@{};)", depth + 1));
            }
            out.push(format!("{pad}end"));
        }
    }
}

fn module_text(bodies: &[Vec<Stmt>], data: &[Vec<u8>]) -> String {
    let mut out = vec!["(module".to_string(), "  (type (;0;) (func))".to_string()];
    for (i, body) in bodies.iter().enumerate() {
        let mut lines = Vec::new();
        for s in body {
            render(s, 0, &mut lines);
        }
        if lines.is_empty() {
            out.push(format!("  (func $f{i} (type 0))"));
        } else {
            out.push(format!("  (func $f{i} (type 0)"));
            let last = lines.len() - 1;
            lines[last].push(')');
            out.extend(lines);
        }
    }
    out.push("  (memory (;0;) 2)".into());
    out.push("  (global (;0;) (mut i32) (i32.const 0))".into());
    let mut offset = 1024;
    for bytes in data {
        let lit: String = bytes.iter().map(|b| format!("\\{b:02x}")).collect();
        out.push(format!("  (data (;0;) (i32.const {offset}) \"{lit}\")"));
        offset += bytes.len() + 16;
    }
    let last = out.len() - 1;
    out[last].push(')');
    out.join("\n") + "\n"
}

pub fn arb_module() -> impl Strategy<Value = (String, WatModule)> {
    (1usize..6)
        .prop_flat_map(|n| {
            (
                prop::collection::vec(prop::collection::vec(stmt(n), 0..5), n),
                prop::collection::vec(prop::collection::vec(any::<u8>(), 0..12), 0..3),
            )
        })
        .prop_map(|(bodies, data)| {
            let text = module_text(&bodies, &data);
            let m = parse_module(&text).unwrap_or_else(|e| panic!("{e}\n{text}"));
            (text, m)
        })
}
