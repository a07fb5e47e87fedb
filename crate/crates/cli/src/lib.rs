//! Report types emitted by the `distill` binary. Each JSON report re-parses
//! into its emitting type losslessly.

use serde::{Deserialize, Serialize};

use distill_core::analytic::SequenceMetrics;
use distill_core::channels::PauliDist;
use distill_core::montecarlo::SimEstimate;
use distill_core::optimizer::SearchResult;
use distill_core::pipeline::PipelinePlan;

/// Resolved input model echoed at the top of every report.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InputEcho {
    /// "depolarizing" for raw input, "injected" for a network rate fed
    /// through the injection estimate.
    pub model: String,
    /// Total input error probability.
    pub p_total: f64,
    pub dist: PauliDist,
    /// Probability that a pair is discarded before level 1.
    pub p0_reject: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OptimizeReport {
    pub input: InputEcho,
    pub p_target: f64,
    pub m_max: u64,
    pub l_max: u32,
    pub catalog_size: usize,
    pub search: SearchResult,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvaluateReport {
    pub input: InputEcho,
    pub seq: String,
    pub p_target: f64,
    pub metrics: SequenceMetrics,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimulateReport {
    pub input: InputEcho,
    pub seq: String,
    pub trials: u64,
    pub attempt_cap: u64,
    pub estimate: SimEstimate,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PipelineReport {
    pub input: InputEcho,
    pub seq: String,
    pub t_bell: f64,
    pub t_gate: f64,
    pub t_inject: f64,
    pub metrics: SequenceMetrics,
    pub plan: PipelinePlan,
}
