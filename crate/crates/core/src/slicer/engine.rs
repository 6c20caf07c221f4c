//! Language-independent cutting of a function's text by nested byte spans.

use std::ops::Range;

use super::{block_id, marker_token, Language, MarkerRef, SliceError, Snippet};

/// A region removed from its parent and replaced by a marker.
#[derive(Debug, Clone)]
struct Region {
    /// Bytes owned by the block (the loop itself, or its full lines).
    cut: Range<usize>,
    /// Text left in the parent in place of `cut`, minus the marker token.
    indent: String,
    parent: usize,
}

fn line_bounds(text: &str, span: &Range<usize>) -> (usize, usize) {
    let ls = text[..span.start].rfind('\n').map_or(0, |i| i + 1);
    let le = text[span.end..].find('\n').map_or(text.len(), |i| span.end + i);
    (ls, le)
}

fn is_blank(s: &str) -> bool {
    s.chars().all(|c| c == ' ' || c == '\t' || c == '\r')
}

/// Cuts `text` into a function-level block 0 plus one block per span.
///
/// A span preceded only by indentation is cut from the start of its line
/// (and to the end of its last line when nothing follows it there), leaving
/// the marker at the span's indentation; otherwise the exact bytes are
/// replaced by the marker inline.
pub fn slice_spans(
    function: &str,
    text: &str,
    base_line: usize,
    spans: &[Range<usize>],
    language: Language,
) -> Result<Vec<Snippet>, SliceError> {
    let mut sorted: Vec<Range<usize>> = spans.to_vec();
    sorted.sort_by(|a, b| a.start.cmp(&b.start).then(b.end.cmp(&a.end)));
    for s in &sorted {
        if s.start >= s.end || s.end > text.len() || !text.is_char_boundary(s.start) || !text.is_char_boundary(s.end)
        {
            return Err(SliceError::SpanOutOfBounds { function: function.to_string(), span: s.clone() });
        }
    }

    let mut regions = vec![Region { cut: 0..text.len(), indent: String::new(), parent: usize::MAX }];
    let mut stack: Vec<usize> = vec![0];
    for (k, s) in sorted.iter().enumerate() {
        let id = k + 1;
        while stack.len() > 1 && sorted[stack[stack.len() - 1] - 1].end <= s.start {
            stack.pop();
        }
        let parent = *stack.last().unwrap();
        if parent > 0 {
            let p = &sorted[parent - 1];
            if s.end > p.end || *s == *p {
                return Err(SliceError::Overlap { function: function.to_string(), first: p.clone(), second: s.clone() });
            }
        }
        let (ls, le) = line_bounds(text, s);
        let region = if is_blank(&text[ls..s.start]) {
            let end = if is_blank(&text[s.end..le]) { le } else { s.end };
            Region { cut: ls..end, indent: text[ls..s.start].to_string(), parent }
        } else {
            Region { cut: s.clone(), indent: String::new(), parent }
        };
        regions.push(region);
        stack.push(id);
    }

    let ids: Vec<String> = (0..regions.len()).map(|i| block_id(function, i)).collect();
    let mut out = Vec::with_capacity(regions.len());
    for (i, r) in regions.iter().enumerate() {
        let children: Vec<usize> = (0..regions.len()).filter(|&c| regions[c].parent == i).collect();
        let mut body = String::new();
        let mut pos = r.cut.start;
        let mut markers = Vec::new();
        for &c in &children {
            let cr = &regions[c];
            body.push_str(&text[pos..cr.cut.start]);
            body.push_str(&cr.indent);
            let token = marker_token(&ids[c]);
            body.push_str(&token);
            markers.push(MarkerRef { child_block_id: ids[c].clone(), token });
            pos = cr.cut.end;
        }
        body.push_str(&text[pos..r.cut.end]);
        let start_line = base_line + text[..r.cut.start].matches('\n').count();
        let end_line = base_line + text[..r.cut.end].matches('\n').count();
        out.push(Snippet {
            block_id: ids[i].clone(),
            function: function.to_string(),
            index: i,
            text: body,
            markers,
            language,
            start_line,
            end_line,
        });
    }
    Ok(out)
}
