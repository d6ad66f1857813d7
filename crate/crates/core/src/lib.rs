//! Desk-scale reconstruction of CHSH Bell and no-signaling experiments on
//! ECR-native superconducting devices: exact density-matrix simulation of
//! the test circuits under parametric noise, seeded Monte Carlo sampling at
//! realistic trial counts, and the complete statistical pipeline (δP, CHSH,
//! σ, z, p, look-elsewhere correction) over either simulated or ingested
//! hardware counts.
//!
//! Module map:
//! - [`matrix`], [`gates`]: complex matrix algebra and the native gate set.
//! - [`seq`]: gate sequences, CNOT/ECR↑ transpilation, virtual-Z folding.
//! - [`topology`]: coupling maps, pair enumeration, disjoint selection.
//! - [`plan`]: circuit families, Bell angles, randomized job schedules.
//! - [`sim`]: density-matrix evolution, noise channels, multinomial sampling.
//! - [`counts`]: the counts tables and versioned counts files.
//! - [`stats`], [`erfc`]: estimators, z-scores, deep-tail p-values.
//! - [`report`]: report JSON, result tables, per-job CSV.

pub mod counts;
pub mod erfc;
pub mod error;
pub mod gates;
pub mod matrix;
pub mod plan;
pub mod report;
pub mod rng;
pub mod seq;
pub mod sim;
pub mod stats;
pub mod topology;

pub use counts::{CountsFile, CountsRecord, CountsTable};
pub use error::{Error, Result};
pub use gates::{Axis, Direction, GateLabel, Sign};
pub use matrix::{equal_up_to_global_phase, Mat, Unitary};
pub use plan::{
    build_circuit, make_plan, BellAngles, Circuit, ExperimentPlan, PlanFile, Role, Setting,
    TestKind,
};
pub use report::{analyze, per_job_csv, render_paper_table, ReportFile};
pub use sim::{
    outcome_distribution, sample_counts, simulate_plan, simulate_plan_par, Confusion, Injection,
    NoiseConfig, OutcomeDistribution, QuantumState, Readout, RoleValues, ZzCrosstalk,
};
pub use stats::{
    bonferroni, chsh, delta_p, freq_correlation, marginals, no_signaling_report, p_value,
    per_job, sigma_chsh, sigma_marginals, ChshReport, NoSigReport, DEFAULT_BONFERRONI_M,
};
pub use topology::{pairs_at_distance, select_disjoint, CouplingGraph, PairRecord, QubitNode};
