//! Depth-first search over code sequences minimizing analytic overhead
//! subject to buffer-memory and target-error constraints.

use serde::{Deserialize, Serialize};

use crate::analytic::{
    evaluate_sequence, memory_next, step_level, Carried, EvalConfig, SequenceMetrics,
};
use crate::codes::{CodeCatalog, CodeSpec};
use crate::{Error, Result};

/// Limits applied to every candidate sequence during search.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SearchConstraints {
    /// Peak buffer occupancy cap in qubits.
    pub m_max: u64,
    /// Required residual error per output qubit.
    pub p_target: f64,
    /// Maximum number of levels explored.
    pub l_max: u32,
    /// Input model shared by all evaluations.
    pub cfg: EvalConfig,
}

impl SearchConstraints {
    fn validate(&self) -> Result<()> {
        if self.m_max < 1 {
            return Err(Error::InvalidArgument {
                field: "m_max",
                msg: "buffer cap must be at least 1".into(),
            });
        }
        if self.l_max < 1 {
            return Err(Error::InvalidArgument {
                field: "l_max",
                msg: "maximum length must be at least 1".into(),
            });
        }
        if !(self.p_target > 0.0 && self.p_target <= 1.0) {
            return Err(Error::InvalidArgument {
                field: "p_target",
                msg: format!("must be in (0, 1], got {}", self.p_target),
            });
        }
        Ok(())
    }
}

/// A sequence that met the target together with its metrics.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Candidate {
    pub seq: Vec<CodeSpec>,
    pub metrics: SequenceMetrics,
}

impl Candidate {
    fn id_tuple(&self) -> Vec<String> {
        self.seq.iter().map(|s| s.id()).collect()
    }

    /// Deterministic preference order: lower overhead, then lower memory,
    /// then fewer levels, then lexicographically smaller id tuple.
    fn beats(&self, other: &Candidate) -> bool {
        match self.metrics.overhead.total_cmp(&other.metrics.overhead) {
            std::cmp::Ordering::Less => return true,
            std::cmp::Ordering::Greater => return false,
            std::cmp::Ordering::Equal => {}
        }
        match self.metrics.memory.cmp(&other.metrics.memory) {
            std::cmp::Ordering::Less => return true,
            std::cmp::Ordering::Greater => return false,
            std::cmp::Ordering::Equal => {}
        }
        match self.seq.len().cmp(&other.seq.len()) {
            std::cmp::Ordering::Less => return true,
            std::cmp::Ordering::Greater => return false,
            std::cmp::Ordering::Equal => {}
        }
        self.id_tuple() < other.id_tuple()
    }
}

/// Outcome of a search run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SearchResult {
    /// Minimal-overhead recorded sequence, if any met the target.
    pub best: Option<Candidate>,
    /// Every sequence recorded as meeting the target, in visit order.
    pub viable: Vec<Candidate>,
    pub nodes_visited: u64,
    pub nodes_pruned: u64,
}

struct NodeState {
    carried: Carried,
    p_total: f64,
    cum_k: u64,
    memory: u64,
    overhead: f64,
}

struct Search<'a> {
    catalog: Vec<CodeSpec>,
    cons: &'a SearchConstraints,
    seq: Vec<CodeSpec>,
    best: Option<Candidate>,
    viable: Vec<Candidate>,
    nodes_visited: u64,
    nodes_pruned: u64,
}

impl Search<'_> {
    fn descend(&mut self, state: &NodeState) -> Result<()> {
        for i in 0..self.catalog.len() {
            let spec = self.catalog[i].clone();
            // Classical children of a quantum node are never generated.
            if spec.is_classical() && matches!(state.carried, Carried::Scalar(_)) {
                continue;
            }
            self.nodes_visited += 1;
            let out = match step_level(&spec, &state.carried) {
                Ok(out) => out,
                Err(_) => {
                    self.nodes_pruned += 1;
                    continue;
                }
            };
            let memory = memory_next(state.memory, state.cum_k, spec.n());
            let cum_k = match state.cum_k.checked_mul(spec.k() as u64) {
                Some(k) => k,
                None => {
                    self.nodes_pruned += 1;
                    continue;
                }
            };
            let overhead =
                state.overhead * (spec.n() as f64 / spec.k() as f64) / (1.0 - out.p_fail);
            if out.p_fail >= 1.0
                || out.p > state.p_total
                || memory > self.cons.m_max
                || self
                    .best
                    .as_ref()
                    .is_some_and(|b| overhead > b.metrics.overhead)
            {
                self.nodes_pruned += 1;
                continue;
            }
            self.seq.push(spec);
            if out.p / (cum_k as f64) < self.cons.p_target {
                let metrics = evaluate_sequence(&self.seq, &self.cons.cfg)?;
                let cand = Candidate {
                    seq: self.seq.clone(),
                    metrics,
                };
                if self.best.as_ref().is_none_or(|b| cand.beats(b)) {
                    self.best = Some(cand.clone());
                }
                self.viable.push(cand);
            } else if (self.seq.len() as u32) < self.cons.l_max {
                let child = NodeState {
                    carried: out.carried,
                    p_total: out.p,
                    cum_k,
                    memory,
                    overhead,
                };
                self.descend(&child)?;
            }
            self.seq.pop();
        }
        Ok(())
    }
}

/// Depth-first search for the minimal-overhead sequence meeting the target.
///
/// Children are visited in catalog order (classical codes first, each group
/// sorted by its id key). A branch is pruned when its error estimate rises,
/// its buffer footprint exceeds the cap, or its overhead already exceeds the
/// incumbent. Recorded sequences are not extended further.
pub fn optimize(catalog: &CodeCatalog, cons: &SearchConstraints) -> Result<SearchResult> {
    cons.validate()?;
    if catalog.entries.is_empty() {
        return Err(Error::Infeasible("catalog is empty".into()));
    }
    let mut entries = catalog.entries.clone();
    entries.sort_by_key(|s| s.sort_key());
    let mut search = Search {
        catalog: entries,
        cons,
        seq: Vec::new(),
        best: None,
        viable: Vec::new(),
        nodes_visited: 0,
        nodes_pruned: 0,
    };
    let root = NodeState {
        carried: Carried::Dist(cons.cfg.p_in),
        p_total: cons.cfg.p_in.total_error(),
        cum_k: 1,
        memory: 1,
        overhead: 1.0 / (1.0 - cons.cfg.p0_reject),
    };
    search.descend(&root)?;
    Ok(SearchResult {
        best: search.best,
        viable: search.viable,
        nodes_visited: search.nodes_visited,
        nodes_pruned: search.nodes_pruned,
    })
}

/// Exhaustive reference search: enumerate every sequence up to `l_max`
/// levels, evaluate each independently, and keep the best under the same
/// constraints and tie-breaking as `optimize`.
pub fn brute_force_best(catalog: &CodeCatalog, cons: &SearchConstraints) -> Result<Option<Candidate>> {
    cons.validate()?;
    if catalog.entries.is_empty() {
        return Err(Error::Infeasible("catalog is empty".into()));
    }
    let mut entries = catalog.entries.clone();
    entries.sort_by_key(|s| s.sort_key());
    let mut best: Option<Candidate> = None;
    let mut stack: Vec<usize> = Vec::new();
    // Odometer enumeration of index tuples of each length.
    for len in 1..=cons.l_max as usize {
        stack.clear();
        stack.resize(len, 0);
        'outer: loop {
            let seq: Vec<CodeSpec> = stack.iter().map(|&i| entries[i].clone()).collect();
            if let Some(cand) = check_sequence(&seq, cons)? {
                if best.as_ref().is_none_or(|b| cand.beats(b)) {
                    best = Some(cand);
                }
            }
            for pos in (0..len).rev() {
                stack[pos] += 1;
                if stack[pos] < entries.len() {
                    continue 'outer;
                }
                stack[pos] = 0;
            }
            break;
        }
    }
    Ok(best)
}

fn check_sequence(seq: &[CodeSpec], cons: &SearchConstraints) -> Result<Option<Candidate>> {
    let metrics = match evaluate_sequence(seq, &cons.cfg) {
        Ok(m) => m,
        Err(Error::ClassicalAfterQuantum { .. }) | Err(Error::Infeasible(_)) => return Ok(None),
        Err(e) => return Err(e),
    };
    if metrics.memory > cons.m_max {
        return Ok(None);
    }
    let mut prev = cons.cfg.p_in.total_error();
    for lvl in &metrics.levels {
        if lvl.p > prev {
            return Ok(None);
        }
        prev = lvl.p;
    }
    if !(metrics.p_per_qubit < cons.p_target) {
        return Ok(None);
    }
    Ok(Some(Candidate {
        seq: seq.to_vec(),
        metrics,
    }))
}

/// One buffer setting of a Pareto sweep.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ParetoPoint {
    pub m_max: u64,
    pub search: SearchResult,
}

/// Run one search per buffer size. Buffer sizes must be strictly ascending;
/// best overheads are nonincreasing in the buffer size.
pub fn pareto_sweep(
    catalog: &CodeCatalog,
    cons: &SearchConstraints,
    buffers: &[u64],
) -> Result<Vec<ParetoPoint>> {
    if buffers.is_empty() {
        return Err(Error::InvalidArgument {
            field: "buffers",
            msg: "at least one buffer size is required".into(),
        });
    }
    if buffers.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidArgument {
            field: "buffers",
            msg: "buffer sizes must be strictly ascending".into(),
        });
    }
    let mut points = Vec::with_capacity(buffers.len());
    for &m_max in buffers {
        let mut c = cons.clone();
        c.m_max = m_max;
        points.push(ParetoPoint {
            m_max,
            search: optimize(catalog, &c)?,
        });
    }
    Ok(points)
}
