//! Permutation pattern containment, pattern avoidance, and forbidden 0-1
//! submatrix extremal functions.

pub mod avoidance;
pub mod bounds;
pub mod containment;
pub mod error;
pub mod extremal;
pub mod matrix;
pub mod oracle;
pub mod perm;
pub mod schedule;
pub mod selftest;
pub mod serde_big;

pub use avoidance::{
    avoiders, count_avoiders, merge_count_upper_check, merge_member, sw_estimate_sequence,
    verify_jv_inclusion, Color, JvReport, MergeCountReport, MergeQuery, SearchConfig, SwEstimate,
};
pub use containment::{contains, find_occurrence, Matcher, Occurrence};
pub use error::{Error, Result};
pub use matrix::{
    find_matrix_occurrence, from_matrix, matrix_contains, to_matrix, BinaryMatrix,
    MatrixOccurrence, PermutationMatrix,
};
pub use perm::{blockable_decompositions, inflate, parse_permutation, BlockDecomposition, Permutation};
pub use schedule::{
    build_schedule, certify_schedule, crude_fpts_bound, BoundParams, CertCheck, CertReport,
    CrudeBound, FloorMode, Schedule,
};
pub use extremal::{
    check_lemma21, check_lemma22, exfn_exact, fpts_exact, gpts_exact, ExtremalResult, FptsResult,
    FptsValue, Lemma21Report, Lemma22Report,
};
