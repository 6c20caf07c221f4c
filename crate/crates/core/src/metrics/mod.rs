//! Decompilation quality metrics. Every score is generic over the float type.

mod codebleu;
mod completeness;
mod cyclomatic;
mod lexical;
mod report;
mod syntax;
mod tree;

pub use codebleu::{codebleu, def_use_pairs, CodeBleu};
pub use completeness::{
    function_completeness, source_function_names, syntactic_completeness, valid_function_names, FunctionCompleteness,
};
pub use cyclomatic::{ccn_similarity, cyclomatic, cyclomatic_per_function, CyclomaticError};
pub use lexical::{bloat_rate, cosine_similarity, text_bloat_rate, LexicalError};
pub use report::{
    aggregate, decompiled_path, evaluate_roots, score_pair, source_files, Aggregate, EvalReport, FunctionMeans,
    FunctionScore, Means, MetricReport, PairRow, EVAL_SCHEMA,
};
pub use syntax::{
    c_skeleton, function_definitions, function_regions, function_texts, parse_c, wat_skeleton, FunctionDef,
    FunctionRegion, Skeleton,
};
pub use tree::{aed_similarity, ast_edit_distance, Tree};
