//! Experiment drivers and validators for the sampling-probability theory.

mod bounds;
mod experiments;
mod kmeans;
mod regions;
mod report;
pub mod svg;

pub use bounds::{
    coverage_success_rate, lemma2_bound, lemma2_empirical, lemma3_bound, lemma3_empirical,
    lemma4_bound, BoundParams, EmpiricalCheck, LogBase,
};
pub use experiments::{coverage_experiment, prepare_input, rank_curve, samples_to_reach};
pub use kmeans::{balanced_centers_check, kmeans, kmeans_balance_experiment, KMeansResult};
pub use regions::{empirical_ris_probabilities, empirical_sampling_probabilities, estimate_region_areas};
pub use report::{ExperimentReport, ReportRow, TrialTag, REPORT_HEADER};
