//! Analytic resource model for concatenated distillation sequences.
//!
//! Classical repetition levels propagate the full Pauli distribution exactly;
//! quantum error-detection levels collapse it to a scalar error rate tracked
//! through a worst-case bound.

use serde::{Deserialize, Serialize};

use crate::channels::{repetition_step, PauliDist};
use crate::codes::{CodeKind, CodeSpec};
use crate::{Error, Result};

/// Input model for analytic evaluation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EvalConfig {
    /// Error distribution of the raw input pairs.
    pub p_in: PauliDist,
    /// Probability that an input pair is rejected before level 1.
    pub p0_reject: f64,
    /// Target residual error per output qubit.
    pub p_target: f64,
}

impl EvalConfig {
    pub fn new(p_in: PauliDist, p0_reject: f64, p_target: f64) -> Result<Self> {
        if !(0.0..1.0).contains(&p0_reject) {
            return Err(Error::InvalidArgument {
                field: "p0_reject",
                msg: format!("must be in [0, 1), got {p0_reject}"),
            });
        }
        if !(p_target > 0.0 && p_target <= 1.0) {
            return Err(Error::InvalidArgument {
                field: "p_target",
                msg: format!("must be in (0, 1], got {p_target}"),
            });
        }
        Ok(EvalConfig {
            p_in,
            p0_reject,
            p_target,
        })
    }
}

/// Per-level metrics of an evaluated sequence.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LevelMetrics {
    pub id: String,
    pub n: u32,
    pub k: u32,
    pub d: u32,
    /// Residual error estimate after this level (per output block qubit
    /// for quantum levels, total pair error for classical levels).
    pub p: f64,
    /// Per-attempt rejection probability of this level.
    pub p_fail: f64,
    /// Logical outputs per top-level batch up to this level.
    pub cum_outputs: u64,
    /// Peak simultaneously-live buffer qubits up to this level.
    pub memory: u64,
}

/// Aggregate metrics of a distillation sequence.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SequenceMetrics {
    pub levels: Vec<LevelMetrics>,
    pub p0_reject: f64,
    /// Residual error of the final level (input total error if empty).
    pub p_final: f64,
    /// Final error divided by the number of output qubits per batch.
    pub p_per_qubit: f64,
    /// Expected raw pairs consumed per output logical pair.
    pub overhead: f64,
    /// Peak buffer occupancy in qubits.
    pub memory: u64,
    /// Output logical pairs per successful batch.
    pub batch_outputs: u64,
}

/// Worst-case residual error of an [[n, k, d]] detection level, conditioned
/// on acceptance: the binomial tail P(wt >= d) divided by (1-p)^n, clamped
/// to [0, 1]. Evaluated as sum_{j>=d} C(n,j) r^j with r = p/(1-p).
pub fn qed_error_bound(n: u32, _k: u32, d: u32, p_in: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&p_in) {
        return Err(Error::Domain(format!(
            "input error must be in [0, 1], got {p_in}"
        )));
    }
    if p_in == 1.0 {
        return Ok(1.0);
    }
    if d < 1 || d > n {
        return Err(Error::Domain(format!("need 1 <= d <= n, got d={d}, n={n}")));
    }
    let r = p_in / (1.0 - p_in);
    let mut term = 1.0f64;
    let mut tail = 0.0f64;
    for j in 0..=n {
        if j >= d {
            tail += term;
        }
        if j < n {
            term *= (n - j) as f64 / (j + 1) as f64 * r;
        }
        if !term.is_finite() {
            return Ok(1.0);
        }
    }
    Ok(tail.clamp(0.0, 1.0))
}

/// Lower bound on the acceptance probability of an n-qubit detection level:
/// the probability (1-p)^n that no input qubit is faulty.
pub fn qed_accept_lower(n: u32, p_in: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&p_in) {
        return Err(Error::Domain(format!(
            "input error must be in [0, 1], got {p_in}"
        )));
    }
    Ok((1.0 - p_in).powi(n as i32))
}

/// Error state carried between levels: classical levels keep the full
/// distribution, the first quantum level collapses it to a scalar.
#[derive(Debug, Clone, Copy)]
pub(crate) enum Carried {
    Dist(PauliDist),
    Scalar(f64),
}

impl Carried {
    pub(crate) fn total(&self) -> f64 {
        match self {
            Carried::Dist(d) => d.total_error(),
            Carried::Scalar(p) => *p,
        }
    }
}

pub(crate) struct LevelOutcome {
    pub p: f64,
    pub p_fail: f64,
    pub carried: Carried,
}

/// Advance the error state through one level.
pub(crate) fn step_level(spec: &CodeSpec, carried: &Carried) -> Result<LevelOutcome> {
    match &spec.kind {
        CodeKind::Repetition { n, basis } => match carried {
            Carried::Dist(d) => {
                let (accept, out) = repetition_step(d, *n, *basis)?;
                Ok(LevelOutcome {
                    p: out.total_error(),
                    p_fail: 1.0 - accept,
                    carried: Carried::Dist(out),
                })
            }
            Carried::Scalar(_) => Err(Error::ClassicalAfterQuantum { id: spec.id() }),
        },
        _ => {
            let p_prev = carried.total();
            let p = qed_error_bound(spec.n(), spec.k(), spec.d(), p_prev)?;
            let p_fail = 1.0 - qed_accept_lower(spec.n(), p_prev)?;
            Ok(LevelOutcome {
                p,
                p_fail,
                carried: Carried::Scalar(p),
            })
        }
    }
}

/// Peak buffer recursion: level i needs n_i fresh inputs of width K_{i-1}
/// while at most one lower-level block is still being assembled.
pub(crate) fn memory_next(m_prev: u64, k_prev_cum: u64, n: u32) -> u64 {
    let n = n as u64;
    let fresh = n.saturating_mul(k_prev_cum);
    let overlapped = (n - 1).saturating_mul(k_prev_cum).saturating_add(m_prev);
    fresh.max(overlapped)
}

/// Evaluate a sequence under the analytic model.
///
/// Overhead is 1/(1 - p0_reject) times the product over levels of
/// (n_i / k_i) / (1 - p_fail_i). Classical levels after a quantum level are
/// rejected as an ordering error.
pub fn evaluate_sequence(seq: &[CodeSpec], cfg: &EvalConfig) -> Result<SequenceMetrics> {
    let mut carried = Carried::Dist(cfg.p_in);
    let mut levels = Vec::with_capacity(seq.len());
    let mut cum_k: u64 = 1;
    let mut memory: u64 = 1;
    let mut overhead = 1.0 / (1.0 - cfg.p0_reject);
    let mut p_final = carried.total();
    for spec in seq {
        let out = step_level(spec, &carried)?;
        if out.p_fail >= 1.0 {
            return Err(Error::Infeasible(format!(
                "level `{}` rejects every input at this error rate",
                spec.id()
            )));
        }
        memory = memory_next(memory, cum_k, spec.n());
        cum_k = cum_k
            .checked_mul(spec.k() as u64)
            .ok_or_else(|| Error::Domain("cumulative output count overflow".into()))?;
        overhead *= (spec.n() as f64 / spec.k() as f64) / (1.0 - out.p_fail);
        p_final = out.p;
        levels.push(LevelMetrics {
            id: spec.id(),
            n: spec.n(),
            k: spec.k(),
            d: spec.d(),
            p: out.p,
            p_fail: out.p_fail,
            cum_outputs: cum_k,
            memory,
        });
        carried = out.carried;
    }
    Ok(SequenceMetrics {
        levels,
        p0_reject: cfg.p0_reject,
        p_final,
        p_per_qubit: p_final / cum_k as f64,
        overhead,
        memory,
        batch_outputs: cum_k,
    })
}

/// Peak buffer occupancy of a non-empty sequence.
pub fn memory_footprint(seq: &[CodeSpec]) -> Result<u64> {
    if seq.is_empty() {
        return Err(Error::InvalidArgument {
            field: "seq",
            msg: "memory footprint requires a non-empty sequence".into(),
        });
    }
    let mut cum_k: u64 = 1;
    let mut memory: u64 = 1;
    for spec in seq {
        memory = memory_next(memory, cum_k, spec.n());
        cum_k *= spec.k() as u64;
    }
    Ok(memory)
}

/// Guarantees for the square-block sequence n_i = (2i)^2 at input error p.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadraticBounds {
    /// Upper bound on the residual error after `level` levels.
    pub p_bound: f64,
    /// Upper bound on the total overhead, uniform in the level count.
    pub overhead_bound: f64,
    /// Upper bound on the buffer footprint.
    pub memory_bound: u64,
}

/// Closed-form bounds for the square-block sequence: residual error at most
/// (544 p)^(2^level) / 34, overhead at most 3, and memory at most
/// sum_i n_i K_{i-1}. Requires p <= 1/2000.
pub fn quadratic_sequence_bounds(level: u32, p: f64) -> Result<QuadraticBounds> {
    if !(0.0..=1.0 / 2000.0).contains(&p) {
        return Err(Error::Domain(format!(
            "input error must be in [0, 1/2000], got {p}"
        )));
    }
    if level > 8 {
        return Err(Error::Domain(format!(
            "level count limited to 8, got {level}"
        )));
    }
    let p_bound = if level == 0 {
        p
    } else {
        (544.0 * p).powi(1 << level) / 34.0
    };
    let mut memory_bound: u64 = 1;
    if level >= 1 {
        memory_bound = 0;
        let mut cum_k: u64 = 1;
        for i in 1..=level as u64 {
            let n = (2 * i) * (2 * i);
            memory_bound += n * cum_k;
            cum_k *= n - 2;
        }
    }
    Ok(QuadraticBounds {
        p_bound,
        overhead_bound: 3.0,
        memory_bound,
    })
}

/// Expected attempts 1/(1 - p_fail) of a repeat-until-success level and the
/// quantile ln(1/eps)/ln(1/p_fail) that attempts exceed with probability at
/// most eps.
pub fn attempt_stats(p_fail: f64, epsilon: f64) -> Result<(f64, f64)> {
    if !(0.0..1.0).contains(&p_fail) {
        return Err(Error::Domain(format!(
            "p_fail must be in [0, 1), got {p_fail}"
        )));
    }
    if !(epsilon > 0.0 && epsilon < 1.0) {
        return Err(Error::Domain(format!(
            "epsilon must be in (0, 1), got {epsilon}"
        )));
    }
    if p_fail == 0.0 {
        return Ok((1.0, 1.0));
    }
    let mean = 1.0 / (1.0 - p_fail);
    let tail = (1.0 / epsilon).ln() / (1.0 / p_fail).ln();
    Ok((mean, tail.max(1.0)))
}
