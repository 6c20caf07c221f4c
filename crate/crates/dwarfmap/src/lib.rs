//! Reads the DWARF sections of a WebAssembly binary and lists every local
//! variable and parameter whose location is a constant offset from the
//! frame base (`DW_OP_fbreg`), one record per variable.

use std::collections::HashMap;
use std::io::Write;

use gimli::{AttributeValue, EndianSlice, LittleEndian, Reader as _, Unit, UnitOffset};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum DwarfMapError {
    #[error("invalid wasm: {0}")]
    Wasm(#[from] wasmparser::BinaryReaderError),
    #[error("invalid DWARF: {0}")]
    Dwarf(#[from] gimli::Error),
    #[error("module has no .debug_info section")]
    NoDebugInfo,
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// One variable's frame slot, in the offset-map exchange format.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OffsetRecord {
    pub function: String,
    pub name: String,
    pub offset: u64,
    #[serde(rename = "type")]
    pub c_type: String,
}

type R<'a> = EndianSlice<'a, LittleEndian>;

const DW_OP_FBREG: u8 = 0x91;

fn custom_sections(wasm: &[u8]) -> Result<HashMap<String, &[u8]>, DwarfMapError> {
    let mut out = HashMap::new();
    for payload in wasmparser::Parser::new(0).parse_all(wasm) {
        if let wasmparser::Payload::CustomSection(reader) = payload? {
            out.insert(reader.name().to_string(), reader.data());
        }
    }
    Ok(out)
}

/// Records for every `DW_OP_fbreg`-located variable or parameter, grouped by
/// subprogram in DWARF order. Variables in nested lexical blocks belong to
/// their enclosing function.
pub fn extract_offsets(wasm: &[u8]) -> Result<Vec<OffsetRecord>, DwarfMapError> {
    let sections = custom_sections(wasm)?;
    if !sections.contains_key(".debug_info") {
        return Err(DwarfMapError::NoDebugInfo);
    }
    let load = |id: gimli::SectionId| -> Result<R<'_>, gimli::Error> {
        Ok(EndianSlice::new(sections.get(id.name()).copied().unwrap_or(&[]), LittleEndian))
    };
    let dwarf = gimli::Dwarf::load(load)?;
    let mut out = Vec::new();
    let mut headers = dwarf.units();
    while let Some(header) = headers.next()? {
        let unit = dwarf.unit(header)?;
        let mut tree = unit.entries_tree(None)?;
        let root = tree.root()?;
        walk(&dwarf, &unit, root, None, &mut out)?;
    }
    Ok(out)
}

fn walk<'a>(
    dwarf: &gimli::Dwarf<R<'a>>,
    unit: &Unit<R<'a>>,
    node: gimli::EntriesTreeNode<'_, '_, R<'a>>,
    function: Option<&str>,
    out: &mut Vec<OffsetRecord>,
) -> Result<(), DwarfMapError> {
    let entry = node.entry();
    let tag = entry.tag();
    let mut current = function.map(str::to_string);
    if tag == gimli::DW_TAG_subprogram {
        current = name_of(dwarf, unit, entry)?;
    } else if matches!(tag, gimli::DW_TAG_variable | gimli::DW_TAG_formal_parameter) {
        if let (Some(f), Some(name), Some(offset)) = (function, name_of(dwarf, unit, entry)?, fbreg(entry)?) {
            let c_type = match entry.attr_value(gimli::DW_AT_type) {
                Some(AttributeValue::UnitRef(o)) => type_name(dwarf, unit, o, 0)?,
                _ => "int".to_string(),
            };
            out.push(OffsetRecord { function: f.to_string(), name, offset, c_type });
        }
    }
    let mut children = node.children();
    while let Some(child) = children.next()? {
        walk(dwarf, unit, child, current.as_deref(), out)?;
    }
    Ok(())
}

fn name_of<'a>(
    dwarf: &gimli::Dwarf<R<'a>>,
    unit: &Unit<R<'a>>,
    entry: &gimli::DebuggingInformationEntry<R<'a>>,
) -> Result<Option<String>, DwarfMapError> {
    match entry.attr_value(gimli::DW_AT_name) {
        Some(v) => Ok(Some(dwarf.attr_string(unit, v)?.to_string_lossy().into_owned())),
        None => Ok(None),
    }
}

fn fbreg(entry: &gimli::DebuggingInformationEntry<R<'_>>) -> Result<Option<u64>, DwarfMapError> {
    let Some(AttributeValue::Exprloc(expr)) = entry.attr_value(gimli::DW_AT_location) else {
        return Ok(None);
    };
    let mut r = expr.0;
    if r.is_empty() || r.read_u8()? != DW_OP_FBREG {
        return Ok(None);
    }
    let off = r.read_sleb128()?;
    Ok(u64::try_from(off).ok())
}

fn type_name<'a>(
    dwarf: &gimli::Dwarf<R<'a>>,
    unit: &Unit<R<'a>>,
    offset: UnitOffset,
    depth: usize,
) -> Result<String, DwarfMapError> {
    if depth > 16 {
        return Ok("void".into());
    }
    let entry = unit.entry(offset)?;
    let inner = |dwarf: &gimli::Dwarf<R<'a>>| -> Result<String, DwarfMapError> {
        match entry.attr_value(gimli::DW_AT_type) {
            Some(AttributeValue::UnitRef(o)) => type_name(dwarf, unit, o, depth + 1),
            _ => Ok("void".into()),
        }
    };
    let name = name_of(dwarf, unit, &entry)?;
    Ok(match entry.tag() {
        gimli::DW_TAG_base_type | gimli::DW_TAG_typedef => name.unwrap_or_else(|| "int".into()),
        gimli::DW_TAG_pointer_type => {
            let t = inner(dwarf)?;
            if t.ends_with('*') {
                format!("{t}*")
            } else {
                format!("{t} *")
            }
        }
        gimli::DW_TAG_const_type => format!("const {}", inner(dwarf)?),
        gimli::DW_TAG_volatile_type => format!("volatile {}", inner(dwarf)?),
        gimli::DW_TAG_structure_type => format!("struct {}", name.unwrap_or_default()),
        gimli::DW_TAG_union_type => format!("union {}", name.unwrap_or_default()),
        gimli::DW_TAG_enumeration_type => format!("enum {}", name.unwrap_or_default()),
        gimli::DW_TAG_array_type => {
            let mut dims = String::new();
            let mut tree = unit.entries_tree(Some(offset))?;
            let root = tree.root()?;
            let mut children = root.children();
            while let Some(c) = children.next()? {
                let e = c.entry();
                if e.tag() != gimli::DW_TAG_subrange_type {
                    continue;
                }
                let count = match (e.attr_value(gimli::DW_AT_count), e.attr_value(gimli::DW_AT_upper_bound)) {
                    (Some(v), _) => v.udata_value(),
                    (None, Some(v)) => v.udata_value().map(|u| u + 1),
                    _ => None,
                };
                match count {
                    Some(n) => dims.push_str(&format!("[{n}]")),
                    None => dims.push_str("[]"),
                }
            }
            format!("{}{dims}", inner(dwarf)?)
        }
        _ => name.unwrap_or_else(|| "int".into()),
    })
}

/// Writes records as JSON lines.
pub fn write_jsonl(records: &[OffsetRecord], mut w: impl Write) -> Result<(), DwarfMapError> {
    for r in records {
        serde_json::to_writer(&mut w, r).map_err(std::io::Error::from)?;
        w.write_all(b"\n")?;
    }
    Ok(())
}
