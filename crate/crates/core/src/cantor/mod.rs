//! Symbolic Cantor sets of univoque sequences and their real realizations.

mod cover;
mod decompose;
mod entropy;
mod level;
mod thickness;
mod words;

pub use cover::{leaf_cover, merge_intervals, sum_cover, sum_cover_levels};
pub use decompose::{decompose, CaseDecomposition, ExpansionCase};
pub use entropy::{entropy_estimate, level_factors, tail_factors, EntropyEstimate};
pub use level::{
    default_level_tol, realize_level, scale_level, CantorLevel, GapView, LevelEntry, LevelParts,
    Orientation, RealInterval,
};
pub use thickness::{
    find_threshold_j, thickness, threshold_conditions, verify_gap_bounds, GapBoundReport,
    ThicknessReport, ThicknessScale, ThresholdConditions, THRESHOLD_WINDOW,
};
pub use words::{enumerate_words, gap_status, symbolic_interval, GapStatus, SymbolicInterval};

pub(crate) use level::{realize_symbolic, EndpointMap, LevelMeta, SymbolicLevel};
pub(crate) use words::TailRule;
