//! Space-time planning for a distillation pipeline: per-stage buffer sizes,
//! input and processing periods, and steady-state batch cadence.
//!
//! All times are dimensionless multiples of a caller-chosen base unit.

use serde::{Deserialize, Serialize};

use crate::analytic::SequenceMetrics;
use crate::codes::CodeSpec;
use crate::{Error, Result};

/// One pipeline stage; stage 0 is Bell-pair injection.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StagePlan {
    pub level: u32,
    pub id: String,
    pub n: u32,
    pub k: u32,
    /// Buffer qubits held by this stage.
    pub b: f64,
    /// Average period between inputs arriving at this stage.
    pub t_input: f64,
    /// Processing time of one attempt at this stage.
    pub t_distill: f64,
}

/// Steady-state plan for a full sequence.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PipelinePlan {
    pub stages: Vec<StagePlan>,
    /// Total buffer qubits across stages.
    pub b_all: f64,
    /// Logical pairs delivered per batch.
    pub batch_size: u64,
    /// Average time between delivered batches.
    pub batch_period: f64,
}

fn require_positive(field: &'static str, v: f64) -> Result<()> {
    if !(v > 0.0 && v.is_finite()) {
        return Err(Error::InvalidArgument {
            field,
            msg: format!("must be a positive finite time, got {v}"),
        });
    }
    Ok(())
}

/// Average output period of one distillation stage.
///
/// With ample buffer the stage is limited by input supply and emits k pairs
/// every n inputs per success; with a tight buffer it is limited by the
/// processing time shared across ceil(b / n_total) parallel copies. The
/// period never drops below the supply-limited value.
pub fn stage_throughput(
    t_in: f64,
    t_dis: f64,
    b: u64,
    n: u32,
    n_total: u64,
    k: u32,
    p_fail: f64,
) -> Result<f64> {
    require_positive("t_in", t_in)?;
    if !(t_dis >= 0.0 && t_dis.is_finite()) {
        return Err(Error::InvalidArgument {
            field: "t_dis",
            msg: format!("must be a nonnegative finite time, got {t_dis}"),
        });
    }
    if n < 1 || k < 1 || n_total < 1 {
        return Err(Error::InvalidArgument {
            field: "n",
            msg: "block sizes must be at least 1".into(),
        });
    }
    if !(0.0..1.0).contains(&p_fail) {
        return Err(Error::InvalidArgument {
            field: "p_fail",
            msg: format!("must be in [0, 1), got {p_fail}"),
        });
    }
    if b < n as u64 {
        return Err(Error::Infeasible(format!(
            "buffer {b} cannot hold one {n}-qubit block"
        )));
    }
    let supply_limited = n as f64 * t_in / ((1.0 - p_fail) * k as f64);
    if t_dis <= n as f64 * t_in {
        return Ok(supply_limited);
    }
    let copies_needed = (t_dis / (n as f64 * t_in)).ceil();
    if b as f64 >= n as f64 * copies_needed {
        return Ok(supply_limited);
    }
    let copies = (b as f64 / n_total as f64).ceil().max(1.0);
    let processing_limited = t_dis / (copies * (1.0 - p_fail) * k as f64);
    Ok(processing_limited.max(supply_limited))
}

/// Plan buffer sizes and cadence for a sequence whose analytic metrics are
/// already known. Stage 0 models injection at one accepted pair per
/// `t_bell` on average.
pub fn plan_pipeline(
    seq: &[CodeSpec],
    metrics: &SequenceMetrics,
    t_bell: f64,
    t_gate: f64,
    t_inject: f64,
) -> Result<PipelinePlan> {
    require_positive("t_bell", t_bell)?;
    require_positive("t_gate", t_gate)?;
    require_positive("t_inject", t_inject)?;
    if seq.len() != metrics.levels.len()
        || seq
            .iter()
            .zip(&metrics.levels)
            .any(|(s, l)| s.id() != l.id)
    {
        return Err(Error::InvalidArgument {
            field: "metrics",
            msg: "metrics were computed for a different sequence".into(),
        });
    }
    let b0 = (t_inject / t_bell).ceil().max(1.0);
    let mut stages = vec![StagePlan {
        level: 0,
        id: "injection".to_string(),
        n: 1,
        k: 1,
        b: b0,
        t_input: t_bell,
        t_distill: t_inject,
    }];
    let mut acc = 1.0 / (1.0 - metrics.p0_reject);
    let mut b_all = b0;
    let mut k_prev: u64 = 1;
    for (i, lvl) in metrics.levels.iter().enumerate() {
        let n = lvl.n as f64;
        let t_input = n * acc * t_bell;
        let t_distill = (3 * lvl.n - 2 - lvl.k) as f64 * t_gate;
        let b = (t_distill / t_input + 1.0) * n * k_prev as f64;
        stages.push(StagePlan {
            level: i as u32 + 1,
            id: lvl.id.clone(),
            n: lvl.n,
            k: lvl.k,
            b,
            t_input,
            t_distill,
        });
        b_all += b;
        acc *= n / (1.0 - lvl.p_fail);
        k_prev = lvl.cum_outputs;
    }
    Ok(PipelinePlan {
        stages,
        b_all,
        batch_size: metrics.batch_outputs,
        batch_period: t_bell * acc,
    })
}
