use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use num_traits::Float;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::codebleu::codebleu;
use super::completeness::{function_completeness, syntactic_completeness};
use super::cyclomatic::{ccn_similarity, cyclomatic_per_function};
use super::lexical::{cosine_similarity, text_bloat_rate};
use super::syntax::{c_skeleton, function_texts};
use super::tree::aed_similarity;

pub const EVAL_SCHEMA: &str = "wadec.eval.v1";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FunctionScore<F> {
    pub name: String,
    pub aed_s: F,
    pub ccn_sim: F,
}

/// Scores for one (source, decompiled) file pair.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricReport<F> {
    pub aed_s: F,
    pub ccn_sim: F,
    pub cosine: F,
    pub codebleu: F,
    /// Percent.
    pub bloat_rate: F,
    /// `None` when the decompiled text has nothing to judge.
    pub c_at_syntax: Option<F>,
    pub c_at_func: F,
    pub extra_functions: Vec<String>,
    pub codebleu_parse_failure: bool,
    /// The decompiled file was missing.
    pub absent: bool,
    pub functions: Vec<FunctionScore<F>>,
}

fn ratio<F: Float>(x: f64) -> F {
    F::from(x).unwrap()
}

/// Scores a pair. A missing decompiled text scores 0 on every similarity,
/// 100% bloat and no syntactic verdict.
pub fn score_pair<F: Float>(src: &str, dec: Option<&str>) -> MetricReport<F> {
    let src_fns = function_texts(src);
    let Some(dec) = dec else {
        return MetricReport {
            aed_s: F::zero(),
            ccn_sim: F::zero(),
            cosine: F::zero(),
            codebleu: F::zero(),
            bloat_rate: ratio(100.0),
            c_at_syntax: None,
            c_at_func: F::zero(),
            extra_functions: Vec::new(),
            codebleu_parse_failure: false,
            absent: true,
            functions: src_fns
                .into_iter()
                .map(|(name, _)| FunctionScore { name, aed_s: F::zero(), ccn_sim: F::zero() })
                .collect(),
        };
    };
    let src_ccn = cyclomatic_per_function(src);
    let dec_ccn = cyclomatic_per_function(dec);
    let ccn_sim = ccn_similarity(&src_ccn, &dec_ccn)
        .unwrap_or_else(|| if dec_ccn.is_empty() { F::one() } else { F::zero() });
    let cb = codebleu::<F>(src, dec);
    let fc = function_completeness::<F>(src, dec);
    let dec_fns: BTreeMap<String, String> = function_texts(dec).into_iter().collect();
    let functions = src_fns
        .into_iter()
        .map(|(name, text)| {
            let (aed_s, ccn) = match dec_fns.get(&name) {
                Some(d) => {
                    let a = aed_similarity(&c_skeleton(&text), &c_skeleton(d));
                    let c = match (src_ccn.get(&name), dec_ccn.get(&name)) {
                        (Some(&s), Some(&d)) => F::from(s.min(d)).unwrap() / F::from(s.max(d)).unwrap(),
                        _ => F::zero(),
                    };
                    (a, c)
                }
                None => (F::zero(), F::zero()),
            };
            FunctionScore { name, aed_s, ccn_sim: ccn }
        })
        .collect();
    MetricReport {
        aed_s: aed_similarity(&c_skeleton(src), &c_skeleton(dec)),
        ccn_sim,
        cosine: cosine_similarity(src, dec).unwrap_or(F::zero()),
        codebleu: cb.score,
        bloat_rate: text_bloat_rate(src, dec).unwrap_or_else(|| {
            if crate::ctext::count_code_lines(dec) == 0 {
                F::zero()
            } else {
                ratio(100.0)
            }
        }),
        c_at_syntax: syntactic_completeness(dec),
        c_at_func: fc.as_ref().map_or(F::one(), |f| f.score),
        extra_functions: fc.map(|f| f.extra).unwrap_or_default(),
        codebleu_parse_failure: cb.parse_failure,
        absent: false,
        functions,
    }
}

/// Column means. `c_at_syntax` averages only pairs that have a verdict.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Means<F> {
    pub aed_s: F,
    pub ccn_sim: F,
    pub cosine: F,
    pub codebleu: F,
    pub bloat_rate: F,
    pub c_at_syntax: Option<F>,
    pub c_at_func: F,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FunctionMeans<F> {
    pub count: usize,
    pub aed_s: F,
    pub ccn_sim: F,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Aggregate<F> {
    pub schema: String,
    pub files: usize,
    pub absent: usize,
    /// Means over file pairs.
    pub file_means: Option<Means<F>>,
    /// Means over source functions.
    pub function_means: Option<FunctionMeans<F>>,
}

fn mean<F: Float>(xs: impl Iterator<Item = F>) -> Option<F> {
    let (sum, n) = xs.fold((F::zero(), 0usize), |(s, n), x| (s + x, n + 1));
    (n > 0).then(|| sum / F::from(n).unwrap())
}

pub fn aggregate<'a, F: Float + 'a>(reports: impl IntoIterator<Item = &'a MetricReport<F>> + Clone) -> Aggregate<F> {
    let rs: Vec<&MetricReport<F>> = reports.into_iter().collect();
    let file_means = (!rs.is_empty()).then(|| Means {
        aed_s: mean(rs.iter().map(|r| r.aed_s)).unwrap(),
        ccn_sim: mean(rs.iter().map(|r| r.ccn_sim)).unwrap(),
        cosine: mean(rs.iter().map(|r| r.cosine)).unwrap(),
        codebleu: mean(rs.iter().map(|r| r.codebleu)).unwrap(),
        bloat_rate: mean(rs.iter().map(|r| r.bloat_rate)).unwrap(),
        c_at_syntax: mean(rs.iter().filter_map(|r| r.c_at_syntax)),
        c_at_func: mean(rs.iter().map(|r| r.c_at_func)).unwrap(),
    });
    let fns: Vec<&FunctionScore<F>> = rs.iter().flat_map(|r| r.functions.iter()).collect();
    let function_means = (!fns.is_empty()).then(|| FunctionMeans {
        count: fns.len(),
        aed_s: mean(fns.iter().map(|f| f.aed_s)).unwrap(),
        ccn_sim: mean(fns.iter().map(|f| f.ccn_sim)).unwrap(),
    });
    Aggregate {
        schema: EVAL_SCHEMA.to_string(),
        files: rs.len(),
        absent: rs.iter().filter(|r| r.absent).count(),
        file_means,
        function_means,
    }
}

/// One evaluated file pair.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PairRow<F> {
    pub schema: String,
    pub stem: String,
    pub source: PathBuf,
    pub decompiled: Option<PathBuf>,
    #[serde(flatten)]
    pub report: MetricReport<F>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvalReport<F> {
    pub rows: Vec<PairRow<F>>,
    pub aggregate: Aggregate<F>,
}

/// Decompiled file for a stem: `{stem}.decomp.c`, else `{stem}.c`.
pub fn decompiled_path(dec_root: &Path, stem: &str) -> Option<PathBuf> {
    [format!("{stem}.decomp.c"), format!("{stem}.c")].into_iter().map(|n| dec_root.join(n)).find(|p| p.is_file())
}

/// Source `.c` files directly under `root`, sorted by stem.
pub fn source_files(root: &Path) -> std::io::Result<Vec<(String, PathBuf)>> {
    let mut out = Vec::new();
    for entry in std::fs::read_dir(root)? {
        let path = entry?.path();
        let name = path.file_name().and_then(|n| n.to_str()).unwrap_or("");
        if path.is_file() && name.ends_with(".c") && !name.ends_with(".decomp.c") {
            out.push((name.trim_end_matches(".c").to_string(), path));
        }
    }
    out.sort();
    Ok(out)
}

/// Scores every source file under `src_root` against its counterpart in
/// `dec_root`. Unreadable decompiled files count as absent.
pub fn evaluate_roots<F: Float + Send + Sync>(src_root: &Path, dec_root: &Path) -> std::io::Result<EvalReport<F>> {
    let sources = source_files(src_root)?;
    let rows: Vec<std::io::Result<PairRow<F>>> = sources
        .par_iter()
        .map(|(stem, path)| {
            let src = std::fs::read_to_string(path)?;
            let dec_path = decompiled_path(dec_root, stem);
            let dec = dec_path.as_ref().and_then(|p| std::fs::read_to_string(p).ok());
            Ok(PairRow {
                schema: EVAL_SCHEMA.to_string(),
                stem: stem.clone(),
                source: path.clone(),
                decompiled: dec_path.filter(|_| dec.is_some()),
                report: score_pair(&src, dec.as_deref()),
            })
        })
        .collect();
    let rows = rows.into_iter().collect::<std::io::Result<Vec<_>>>()?;
    let aggregate = aggregate(rows.iter().map(|r| &r.report));
    Ok(EvalReport { rows, aggregate })
}
