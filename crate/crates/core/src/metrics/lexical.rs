use std::collections::BTreeMap;

use num_traits::Float;
use thiserror::Error;

use crate::ctext::{code_tokens, count_code_lines};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LexicalError {
    #[error("text has no code tokens")]
    EmptyText,
}

fn term_frequencies(text: &str) -> BTreeMap<&str, usize> {
    let mut tf = BTreeMap::new();
    for t in code_tokens(text) {
        *tf.entry(t.text).or_insert(0) += 1;
    }
    tf
}

/// Cosine of the term-frequency vectors of the two texts' code tokens.
pub fn cosine_similarity<F: Float>(a: &str, b: &str) -> Result<F, LexicalError> {
    let ta = term_frequencies(a);
    let tb = term_frequencies(b);
    if ta.is_empty() || tb.is_empty() {
        return Err(LexicalError::EmptyText);
    }
    if ta == tb {
        return Ok(F::one());
    }
    let f = |n: usize| F::from(n).unwrap();
    let dot = ta.iter().fold(F::zero(), |acc, (k, &x)| acc + f(x) * f(tb.get(k).copied().unwrap_or(0)));
    let sq = |m: &BTreeMap<&str, usize>| m.values().fold(F::zero(), |acc, &x| acc + f(x) * f(x));
    Ok((dot / (sq(&ta) * sq(&tb)).sqrt()).min(F::one()))
}

/// `|dec - src| / src × 100`, or `None` when `src` is 0.
pub fn bloat_rate<F: Float>(src_lines: usize, dec_lines: usize) -> Option<F> {
    if src_lines == 0 {
        return None;
    }
    let f = |n: usize| F::from(n).unwrap();
    Some(f(src_lines.abs_diff(dec_lines)) / f(src_lines) * f(100))
}

/// Bloat between two texts, counting non-blank lines after comment removal.
pub fn text_bloat_rate<F: Float>(src: &str, dec: &str) -> Option<F> {
    bloat_rate(count_code_lines(src), count_code_lines(dec))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cosine_examples() {
        assert_eq!(cosine_similarity::<f64>("a b c", "c b a").unwrap(), 1.0);
        assert_eq!(cosine_similarity::<f64>("a b", "c d").unwrap(), 0.0);
        assert!((cosine_similarity::<f64>("a a b", "a b b").unwrap() - 0.8).abs() < 1e-12);
        assert_eq!(cosine_similarity::<f64>("", "a"), Err(LexicalError::EmptyText));
        assert_eq!(cosine_similarity::<f64>("// c", "a"), Err(LexicalError::EmptyText));
        let x: f32 = cosine_similarity("x = y + 1;", "x = y + 1;").unwrap();
        assert_eq!(x, 1.0);
    }

    #[test]
    fn bloat_examples() {
        assert_eq!(bloat_rate::<f64>(100, 100), Some(0.0));
        assert_eq!(bloat_rate::<f64>(100, 110), Some(10.0));
        assert_eq!(bloat_rate::<f64>(100, 90), Some(10.0));
        assert_eq!(bloat_rate::<f64>(0, 5), None);
        assert_eq!(text_bloat_rate::<f64>("a;\n// c\n\nb;\n", "a;\nb;\nc;\nd;"), Some(100.0));
    }
}
