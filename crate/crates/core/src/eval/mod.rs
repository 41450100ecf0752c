//! Evaluation protocols: role classification within one graph, transfer
//! across graphs, and structural-hole ranking.

mod across;
mod constraint;
mod holes;
mod logreg;
mod metrics;
mod report;
mod within;

pub use across::{across_network_eval, transfer_scores, AcrossParams};
pub use constraint::{all_constraints, burt_constraint};
pub use holes::{expected_random_hits, structural_hole_eval, HoleReport};
pub use logreg::{binary_objective, fit_binary, train_logreg, BinaryModel, ClassifierModel, LogRegParams};
pub use metrics::{f1_scores, majority_class};
pub use report::{EvalReport, RatioSummary, RunScore};
pub use within::{random_split, train_size, within_network_eval, within_network_sweep, WithinParams};
