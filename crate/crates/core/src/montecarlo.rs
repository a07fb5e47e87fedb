//! Pauli-frame Monte-Carlo simulation of single-level and concatenated
//! syndrome-checked distillation, with repeat-until-success accounting and
//! exact closed-form oracles for the parity family.
//!
//! Every trial derives its own RNG stream from (seed, trial index), so
//! results are identical for any worker count.

use std::collections::BTreeMap;

use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::channels::PauliDist;
use crate::codes::{
    instantiate, logical_effect, residual_to_output_frame, syndrome, CodeSpec, StabilizerCode,
};
use crate::pauli::PauliOp;
use crate::{Error, Result};

/// Two-sided 95% normal quantile used for all reported radii.
pub const Z95: f64 = 1.959963984540054;

/// Trial count, RNG seed, and retry cap for one simulation run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct TrialConfig {
    pub seed: u64,
    pub trials: u64,
    /// Maximum repeat-until-success retries per level per slot.
    pub attempt_cap: u64,
}

impl TrialConfig {
    pub fn new(seed: u64, trials: u64, attempt_cap: u64) -> Result<Self> {
        if trials < 1 {
            return Err(Error::InvalidArgument {
                field: "trials",
                msg: "at least one trial is required".into(),
            });
        }
        if attempt_cap < 1 {
            return Err(Error::InvalidArgument {
                field: "attempt_cap",
                msg: "attempt cap must be at least 1".into(),
            });
        }
        Ok(TrialConfig {
            seed,
            trials,
            attempt_cap,
        })
    }
}

/// A point estimate with a 95% confidence radius.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Estimate {
    pub value: f64,
    pub radius: f64,
}

/// Aggregated simulation outcome.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimEstimate {
    pub trials: u64,
    /// Per-attempt rejection probability at the outermost level.
    pub p_fail_hat: Estimate,
    /// Probability that an accepted output block carries any residual error.
    pub p_out_hat: Estimate,
    /// Raw pairs consumed per output pair, over successful trials.
    pub consumed_per_output: Estimate,
    /// (attempts-to-success, trial count) pairs at the outermost level.
    pub attempt_histogram: Vec<(u64, u64)>,
    /// Trials that hit the attempt cap; excluded from all estimates.
    pub aborted: u64,
    pub seed: u64,
}

/// Wilson 95% score interval; value is the raw proportion, radius the larger
/// distance to either Wilson bound.
pub fn wilson(successes: u64, total: u64) -> Estimate {
    if total == 0 {
        return Estimate {
            value: 0.0,
            radius: 1.0,
        };
    }
    let n = total as f64;
    let p = successes as f64 / n;
    let z2 = Z95 * Z95;
    let denom = 1.0 + z2 / n;
    let center = (p + z2 / (2.0 * n)) / denom;
    let half = Z95 / denom * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt();
    let radius = (p - (center - half)).abs().max((center + half - p).abs());
    Estimate { value: p, radius }
}

/// Ratio estimate sum(x)/sum(o) with a delta-method 95% radius, from integer
/// accumulators over n paired observations.
fn ratio_estimate(n: u64, sx: u128, sx2: u128, so: u128, so2: u128, sxo: u128) -> Estimate {
    if so == 0 {
        return Estimate {
            value: 0.0,
            radius: 1.0,
        };
    }
    let value = sx as f64 / so as f64;
    if n < 2 {
        // One observation carries no variance information.
        return Estimate {
            value,
            radius: value,
        };
    }
    let nf = n as f64;
    let xb = sx as f64 / nf;
    let ob = so as f64 / nf;
    let bessel = nf / (nf - 1.0);
    let vx = (sx2 as f64 / nf - xb * xb) * bessel;
    let vo = (so2 as f64 / nf - ob * ob) * bessel;
    let cxo = (sxo as f64 / nf - xb * ob) * bessel;
    let var = (vx - 2.0 * value * cxo + value * value * vo) / (nf * ob * ob);
    Estimate {
        value,
        radius: Z95 * var.max(0.0).sqrt(),
    }
}

fn sample_masks(d: &PauliDist, width: u32, rng: &mut ChaCha8Rng) -> (u64, u64) {
    let [p_i, p_x, p_y, _] = d.components();
    let mut x = 0u64;
    let mut z = 0u64;
    for q in 0..width {
        let u: f64 = rng.random();
        if u < p_i {
            continue;
        } else if u < p_i + p_x {
            x |= 1 << q;
        } else if u < p_i + p_x + p_y {
            x |= 1 << q;
            z |= 1 << q;
        } else {
            z |= 1 << q;
        }
    }
    (x, z)
}

fn trial_rng(seed: u64, trial: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    rng
}

#[derive(Default, Clone)]
struct Accum {
    trials: u64,
    aborted: u64,
    completed: u64,
    successes: u64,
    attempts: u64,
    failures: u64,
    block_errors: u64,
    sum_c: u128,
    sum_c2: u128,
    sum_o: u128,
    sum_o2: u128,
    sum_co: u128,
    hist: BTreeMap<u64, u64>,
}

struct TrialOutcome {
    aborted: bool,
    attempts: u64,
    failures: u64,
    accepted: bool,
    block_error: bool,
    consumed: u64,
    outputs: u64,
}

impl Accum {
    fn absorb(mut self, t: TrialOutcome) -> Self {
        self.trials += 1;
        if t.aborted {
            self.aborted += 1;
            return self;
        }
        self.completed += 1;
        self.attempts += t.attempts;
        self.failures += t.failures;
        let c = t.consumed as u128;
        let o = t.outputs as u128;
        self.sum_c += c;
        self.sum_c2 += c * c;
        self.sum_o += o;
        self.sum_o2 += o * o;
        self.sum_co += c * o;
        if t.accepted {
            self.successes += 1;
            self.block_errors += t.block_error as u64;
            *self.hist.entry(t.attempts).or_insert(0) += 1;
        }
        self
    }

    fn merge(mut self, other: Self) -> Self {
        self.trials += other.trials;
        self.aborted += other.aborted;
        self.completed += other.completed;
        self.successes += other.successes;
        self.attempts += other.attempts;
        self.failures += other.failures;
        self.block_errors += other.block_errors;
        self.sum_c += other.sum_c;
        self.sum_c2 += other.sum_c2;
        self.sum_o += other.sum_o;
        self.sum_o2 += other.sum_o2;
        self.sum_co += other.sum_co;
        for (k, v) in other.hist {
            *self.hist.entry(k).or_insert(0) += v;
        }
        self
    }

    fn finish(self, cfg: &TrialConfig) -> Result<SimEstimate> {
        if self.successes == 0 {
            return Err(Error::Domain(
                "no trial was accepted; estimates would be undefined".into(),
            ));
        }
        Ok(SimEstimate {
            trials: self.trials,
            p_fail_hat: wilson(self.failures, self.attempts),
            p_out_hat: wilson(self.block_errors, self.successes),
            consumed_per_output: ratio_estimate(
                self.completed,
                self.sum_c,
                self.sum_c2,
                self.sum_o,
                self.sum_o2,
                self.sum_co,
            ),
            attempt_histogram: self.hist.into_iter().collect(),
            aborted: self.aborted,
            seed: cfg.seed,
        })
    }
}

fn run_trials<F>(cfg: &TrialConfig, trial: F) -> Result<SimEstimate>
where
    F: Fn(u64) -> Result<TrialOutcome> + Sync,
{
    let acc = (0..cfg.trials)
        .into_par_iter()
        .map(|t| trial(t))
        .try_fold(Accum::default, |acc, t| t.map(|t| acc.absorb(t)))
        .try_reduce(Accum::default, |a, b| Ok(a.merge(b)))?;
    acc.finish(cfg)
}

/// Simulate one code level: each trial samples an i.i.d. per-qubit error,
/// rejects on any nonzero syndrome, and classifies the residual logical
/// effect on acceptance. One attempt per trial.
pub fn simulate_level(
    code: &StabilizerCode,
    input: &PauliDist,
    cfg: &TrialConfig,
) -> Result<SimEstimate> {
    let n = code.n;
    let k = code.k as u64;
    code.check_consistency()?;
    run_trials(cfg, |t| {
        let mut rng = trial_rng(cfg.seed, t);
        let (x, z) = sample_masks(input, n, &mut rng);
        let e = PauliOp::new(n, x, z)?;
        let accepted = syndrome(code, &e)? == 0;
        let block_error = if accepted {
            !logical_effect(code, &e)?.is_identity()
        } else {
            false
        };
        Ok(TrialOutcome {
            aborted: false,
            attempts: 1,
            failures: (!accepted) as u64,
            accepted,
            block_error,
            consumed: n as u64,
            outputs: if accepted { k } else { 0 },
        })
    })
}

/// Exact acceptance and joint block-error probability of one even-n parity
/// level under i.i.d. input errors, via the parity characteristic sum
/// (1/4) Σ_{s,t} f(s,t)^n with f = p_I + (-1)^s p_X + (-1)^{s+t} p_Y +
/// (-1)^t p_Z. The block error is joint: P(accepted and residual outside
/// the stabilizer group).
pub fn exact_parity_stats(n: u32, d: &PauliDist) -> Result<(f64, f64)> {
    if n < 4 || n % 2 != 0 || n > 64 {
        return Err(Error::Domain(format!(
            "parity stats need even n in [4, 64], got {n}"
        )));
    }
    let [p_i, p_x, p_y, p_z] = d.components();
    let mut accept = 0.0f64;
    for s in [1.0f64, -1.0] {
        for t in [1.0f64, -1.0] {
            let f = p_i + s * p_x + s * t * p_y + t * p_z;
            accept += f.powi(n as i32);
        }
    }
    accept /= 4.0;
    let trivial = p_i.powi(n as i32) + p_x.powi(n as i32) + p_y.powi(n as i32) + p_z.powi(n as i32);
    let joint = (accept - trivial).max(0.0);
    Ok((accept, joint))
}

struct SeqSim {
    codes: Vec<StabilizerCode>,
    /// Input width K_{i-1} of each level.
    in_width: Vec<u32>,
    p_in: PauliDist,
    cap: u64,
}

impl SeqSim {
    /// Run level `level` (1-based) to one accepted output register, or None
    /// when any retry budget is exhausted.
    fn produce(
        &self,
        level: usize,
        rng: &mut ChaCha8Rng,
        consumed: &mut u64,
    ) -> Result<Option<(u64, u64)>> {
        if level == 0 {
            *consumed += 1;
            return Ok(Some(sample_masks(&self.p_in, 1, rng)));
        }
        let code = &self.codes[level - 1];
        let w = self.in_width[level - 1];
        for _ in 0..self.cap {
            match self.attempt(level, code, w, rng, consumed)? {
                AttemptResult::Aborted => return Ok(None),
                AttemptResult::Rejected => continue,
                AttemptResult::Accepted(masks) => return Ok(Some(masks)),
            }
        }
        Ok(None)
    }

    fn attempt(
        &self,
        level: usize,
        code: &StabilizerCode,
        w: u32,
        rng: &mut ChaCha8Rng,
        consumed: &mut u64,
    ) -> Result<AttemptResult> {
        let n = code.n as usize;
        let mut rows_x = vec![0u64; n];
        let mut rows_z = vec![0u64; n];
        for j in 0..n {
            match self.produce(level - 1, rng, consumed)? {
                None => return Ok(AttemptResult::Aborted),
                Some((x, z)) => {
                    rows_x[j] = x;
                    rows_z[j] = z;
                }
            }
        }
        let mut out_x = 0u64;
        let mut out_z = 0u64;
        let k = code.k;
        for c in 0..w {
            let mut col_x = 0u64;
            let mut col_z = 0u64;
            for j in 0..n {
                col_x |= ((rows_x[j] >> c) & 1) << j;
                col_z |= ((rows_z[j] >> c) & 1) << j;
            }
            let col = PauliOp::new(code.n, col_x, col_z)?;
            if syndrome(code, &col)? != 0 {
                return Ok(AttemptResult::Rejected);
            }
            let residual = residual_to_output_frame(code, logical_effect(code, &col)?);
            out_x |= residual.x_bits << (c * k);
            out_z |= residual.z_bits << (c * k);
        }
        Ok(AttemptResult::Accepted((out_x, out_z)))
    }
}

enum AttemptResult {
    Aborted,
    Rejected,
    Accepted((u64, u64)),
}

/// Simulate a concatenated sequence: level i checks an n_i x K_{i-1}
/// register of errors column by column, rejecting the whole register on any
/// nonzero column syndrome. Rows come from independent successful runs of
/// the level below; raw-pair consumption is counted through every retry.
pub fn simulate_sequence(
    seq: &[CodeSpec],
    p_in: &PauliDist,
    cfg: &TrialConfig,
) -> Result<SimEstimate> {
    let mut codes = Vec::with_capacity(seq.len());
    let mut in_width = Vec::with_capacity(seq.len());
    let mut width: u128 = 1;
    for spec in seq {
        let code = instantiate(spec)?;
        in_width.push(width as u32);
        width *= code.k as u128;
        if width > 64 {
            return Err(Error::TooWide { width });
        }
        codes.push(code);
    }
    let out_width = width as u32;
    let out_mask = if out_width == 64 {
        u64::MAX
    } else {
        (1u64 << out_width) - 1
    };
    let levels = codes.len();
    let sim = SeqSim {
        codes,
        in_width,
        p_in: *p_in,
        cap: cfg.attempt_cap,
    };
    run_trials(cfg, |t| {
        let mut rng = trial_rng(cfg.seed, t);
        let mut consumed = 0u64;
        if levels == 0 {
            let (x, z) = sample_masks(&sim.p_in, 1, &mut rng);
            return Ok(TrialOutcome {
                aborted: false,
                attempts: 1,
                failures: 0,
                accepted: true,
                block_error: (x | z) != 0,
                consumed: 1,
                outputs: 1,
            });
        }
        let code = &sim.codes[levels - 1];
        let w = sim.in_width[levels - 1];
        let mut attempts = 0u64;
        while attempts < sim.cap {
            attempts += 1;
            match sim.attempt(levels, code, w, &mut rng, &mut consumed)? {
                AttemptResult::Aborted => break,
                AttemptResult::Rejected => continue,
                AttemptResult::Accepted((x, z)) => {
                    return Ok(TrialOutcome {
                        aborted: false,
                        attempts,
                        failures: attempts - 1,
                        accepted: true,
                        block_error: ((x | z) & out_mask) != 0,
                        consumed,
                        outputs: out_width as u64,
                    });
                }
            }
        }
        Ok(TrialOutcome {
            aborted: true,
            attempts,
            failures: attempts,
            accepted: false,
            block_error: false,
            consumed,
            outputs: 0,
        })
    })
}

/// Sample attempts-to-success histograms for a bare repeat-until-success
/// loop with per-attempt failure probability `p_fail`. Trials that hit the
/// attempt cap are recorded at the cap.
pub fn empirical_attempts(p_fail: f64, cfg: &TrialConfig) -> Result<Vec<(u64, u64)>> {
    if !(0.0..1.0).contains(&p_fail) {
        return Err(Error::Domain(format!(
            "p_fail must be in [0, 1), got {p_fail}"
        )));
    }
    let hist = (0..cfg.trials)
        .into_par_iter()
        .map(|t| {
            let mut rng = trial_rng(cfg.seed, t);
            let mut attempts = 1u64;
            while attempts < cfg.attempt_cap && rng.random::<f64>() < p_fail {
                attempts += 1;
            }
            attempts
        })
        .fold(BTreeMap::new, |mut m: BTreeMap<u64, u64>, a| {
            *m.entry(a).or_insert(0) += 1;
            m
        })
        .reduce(BTreeMap::new, |mut a, b| {
            for (k, v) in b {
                *a.entry(k).or_insert(0) += v;
            }
            a
        });
    Ok(hist.into_iter().collect())
}
