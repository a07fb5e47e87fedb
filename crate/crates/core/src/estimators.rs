//! Baseline and context models: state-injection error accounting,
//! surface-code memory footprints, lattice-surgery interconnect costs, a
//! network-bottleneck check, and the scheme comparison table.

use serde::{Deserialize, Serialize};

use crate::analytic::EvalConfig;
use crate::channels::{depolarizing, repetition_step, PauliDist};
use crate::codes::{Basis, CodeCatalog, CodeSpec};
use crate::optimizer::{optimize, SearchConstraints};
use crate::{Error, Result};

/// Gate and Bell-pair error rates entering state injection.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct InjectionParams {
    /// One-qubit gate error probability.
    pub p1: f64,
    /// Two-qubit gate error probability.
    pub p2: f64,
    /// Physical Bell-pair error probability.
    pub p_bell: f64,
    /// Single-qubit injection rejection probability.
    pub p_reject: f64,
}

impl InjectionParams {
    pub fn new(p1: f64, p2: f64, p_bell: f64, p_reject: f64) -> Result<Self> {
        for (field, v) in [
            ("p1", p1),
            ("p2", p2),
            ("p_bell", p_bell),
            ("p_reject", p_reject),
        ] {
            if !(0.0..1.0).contains(&v) {
                return Err(Error::InvalidArgument {
                    field,
                    msg: format!("must be in [0, 1), got {v}"),
                });
            }
        }
        Ok(InjectionParams {
            p1,
            p2,
            p_bell,
            p_reject,
        })
    }
}

/// Error rate of an injected Bell pair: (6/5) p2 + (4/3) p1 + p_bell.
pub fn injection_error(p: &InjectionParams) -> f64 {
    1.2 * p.p2 + 4.0 / 3.0 * p.p1 + p.p_bell
}

/// Probability that injection rejects a Bell pair on either side:
/// 1 - (1 - p_reject)^2.
pub fn bell_injection_reject(p_reject: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&p_reject) {
        return Err(Error::InvalidArgument {
            field: "p_reject",
            msg: format!("must be in [0, 1], got {p_reject}"),
        });
    }
    Ok(1.0 - (1.0 - p_reject) * (1.0 - p_reject))
}

const SURFACE_THRESHOLD: f64 = 0.011;

fn effective_distance(d: u32) -> i32 {
    if d % 2 == 0 {
        (d / 2) as i32
    } else {
        ((d + 1) / 2) as i32
    }
}

/// Smallest surface-code distance whose fitted logical error rate
/// 0.02 (p_gate / 0.011)^{d_e} lies strictly below `p_target`, with the
/// physical qubits per patch, 2 d^2 - 1.
pub fn surface_code_distance(p_gate: f64, p_target: f64) -> Result<(u32, u64)> {
    if !(0.0..SURFACE_THRESHOLD).contains(&p_gate) {
        return Err(Error::Infeasible(format!(
            "gate error {p_gate} is not below the {SURFACE_THRESHOLD} threshold"
        )));
    }
    if !(p_target > 0.0 && p_target < 1.0) {
        return Err(Error::InvalidArgument {
            field: "p_target",
            msg: format!("must be in (0, 1), got {p_target}"),
        });
    }
    let ratio = p_gate / SURFACE_THRESHOLD;
    for d in 1..=10_000u32 {
        if 0.02 * ratio.powi(effective_distance(d)) < p_target {
            return Ok((d, 2 * (d as u64) * (d as u64) - 1));
        }
    }
    Err(Error::Infeasible(
        "no distance below 10000 reaches the target".into(),
    ))
}

/// Inputs of the lattice-surgery interconnect model.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SurgeryParams {
    pub p_gate: f64,
    pub p_bell: f64,
    pub p_target: f64,
}

impl SurgeryParams {
    pub fn new(p_gate: f64, p_bell: f64, p_target: f64) -> Result<Self> {
        for (field, v) in [("p_gate", p_gate), ("p_bell", p_bell)] {
            if !(v > 0.0 && v < 1.0) {
                return Err(Error::InvalidArgument {
                    field,
                    msg: format!("must be in (0, 1), got {v}"),
                });
            }
        }
        if !(p_target > 0.0 && p_target < 1.0) {
            return Err(Error::InvalidArgument {
                field: "p_target",
                msg: format!("must be in (0, 1), got {p_target}"),
            });
        }
        Ok(SurgeryParams {
            p_gate,
            p_bell,
            p_target,
        })
    }
}

/// Lattice-surgery cost at one distance choice.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SurgeryOverhead {
    pub d: u32,
    /// Physical Bell pairs per logical entangling operation,
    /// 2 (d^2 + (d-1)^2) - 1.
    pub bell_pairs: u64,
    /// Set when the Bell error exceeds 1%, where the fitted prefactor is
    /// known to degrade.
    pub warn_prefactor: bool,
}

const BULK_THRESHOLD: f64 = 0.03;
const BOUNDARY_THRESHOLD: f64 = 0.10;

/// Smallest distance at which the bulk and boundary contributions
/// 0.03 (p_bulk/0.03)^{d_e} + 0.03 (p_boundary/0.10)^{d_e} fall strictly
/// below the target, with p_bulk = 2 p_gate and
/// p_boundary = 2.5 p_gate + 0.5 p_bell.
pub fn lattice_surgery_overhead(s: &SurgeryParams) -> Result<SurgeryOverhead> {
    let p_bulk = 2.0 * s.p_gate;
    let p_boundary = 2.5 * s.p_gate + 0.5 * s.p_bell;
    if p_bulk >= BULK_THRESHOLD {
        return Err(Error::Infeasible(format!(
            "bulk error {p_bulk} is not below the {BULK_THRESHOLD} threshold"
        )));
    }
    if p_boundary >= BOUNDARY_THRESHOLD {
        return Err(Error::Infeasible(format!(
            "boundary error {p_boundary} is not below the {BOUNDARY_THRESHOLD} threshold"
        )));
    }
    let rb = p_bulk / BULK_THRESHOLD;
    let rs = p_boundary / BOUNDARY_THRESHOLD;
    for d in 1..=10_000u32 {
        let de = effective_distance(d);
        if 0.03 * rb.powi(de) + 0.03 * rs.powi(de) < s.p_target {
            let d64 = d as u64;
            return Ok(SurgeryOverhead {
                d,
                bell_pairs: 2 * (d64 * d64 + (d64 - 1) * (d64 - 1)) - 1,
                warn_prefactor: s.p_bell > 0.01,
            });
        }
    }
    Err(Error::Infeasible(
        "no distance below 10000 reaches the target".into(),
    ))
}

/// Whether network entanglement limits a distributed computation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Bottleneck {
    /// beta * t_e * alpha / t_intra.
    pub ratio: f64,
    pub limited_by_network: bool,
}

/// Compare the inter-core entanglement budget beta * t_e * alpha against
/// the intra-core step time; the network limits whenever the ratio
/// reaches 1.
pub fn bottleneck(beta: f64, t_e: f64, alpha_overhead: f64, t_intra: f64) -> Result<Bottleneck> {
    for (field, v) in [
        ("beta", beta),
        ("t_e", t_e),
        ("alpha_overhead", alpha_overhead),
        ("t_intra", t_intra),
    ] {
        if !(v > 0.0 && v.is_finite()) {
            return Err(Error::InvalidArgument {
                field,
                msg: format!("must be positive and finite, got {v}"),
            });
        }
    }
    let ratio = beta * t_e * alpha_overhead / t_intra;
    Ok(Bottleneck {
        ratio,
        limited_by_network: ratio >= 1.0,
    })
}

/// One accepted two-pair check in the alternating-basis iteration.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BdswLevel {
    pub level: u32,
    pub basis: Basis,
    pub accept: f64,
    /// Total pair error after this level.
    pub p_total: f64,
}

/// Outcome of the alternating two-pair iteration.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BdswOverhead {
    pub levels: Vec<BdswLevel>,
    pub overhead: f64,
    pub p_final: f64,
    /// False when the level cap was reached before the target.
    pub converged: bool,
}

/// Iterate two-pair checks, Z basis first then alternating Z, X, until the
/// pair error drops below `p_target` (checked before the first level) or
/// `max_levels` is reached. Overhead is (1/(1-p0)) prod_j 2/accept_j.
pub fn bdsw_overhead(
    p_in: &PauliDist,
    p0_reject: f64,
    p_target: f64,
    max_levels: u32,
) -> Result<BdswOverhead> {
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
    let mut dist = *p_in;
    let mut overhead = 1.0 / (1.0 - p0_reject);
    let mut levels = Vec::new();
    let mut converged = dist.total_error() < p_target;
    let mut level = 0;
    while !converged && level < max_levels {
        level += 1;
        let basis = if level % 2 == 1 { Basis::Z } else { Basis::X };
        let (accept, out) = repetition_step(&dist, 2, basis)?;
        overhead *= 2.0 / accept;
        dist = out;
        levels.push(BdswLevel {
            level,
            basis,
            accept,
            p_total: dist.total_error(),
        });
        converged = dist.total_error() < p_target;
    }
    Ok(BdswOverhead {
        levels,
        overhead,
        p_final: dist.total_error(),
        converged,
    })
}

/// One scheme cell of the comparison table.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CompareCell {
    pub scheme: String,
    pub input_model: String,
    pub p0_reject: f64,
    pub feasible: bool,
    pub overhead: Option<f64>,
    pub levels: Option<u32>,
    pub sequence: Option<String>,
    pub memory: Option<u64>,
    pub note: String,
}

impl CompareCell {
    fn infeasible(scheme: &str, input_model: String, p0_reject: f64, note: String) -> Self {
        CompareCell {
            scheme: scheme.to_string(),
            input_model,
            p0_reject,
            feasible: false,
            overhead: None,
            levels: None,
            sequence: None,
            memory: None,
            note,
        }
    }

    fn zero_levels(scheme: &str, input_model: String, p0_reject: f64) -> Self {
        CompareCell {
            scheme: scheme.to_string(),
            input_model,
            p0_reject,
            feasible: true,
            overhead: Some(1.0 / (1.0 - p0_reject)),
            levels: Some(0),
            sequence: Some(String::new()),
            memory: Some(1),
            note: "input already below target".to_string(),
        }
    }
}

/// Lattice-surgery cell of the comparison table.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SurgeryCell {
    pub feasible: bool,
    pub d: Option<u32>,
    pub bell_pairs: Option<u64>,
    pub warn_prefactor: bool,
    pub note: String,
}

/// One network-error-rate row.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CompareRow {
    pub p_bell: f64,
    /// Post-injection error estimate at this rate, shown for context.
    pub injected_error: f64,
    pub bdsw: CompareCell,
    pub bdsw_y: CompareCell,
    pub buffered: Vec<CompareCell>,
    pub surgery: SurgeryCell,
}

/// Comparison-table configuration.
#[derive(Debug, Clone)]
pub struct CompareConfig {
    pub p_gate: f64,
    pub p_reject: f64,
    pub p_target: f64,
    pub buffers: Vec<u64>,
    pub catalog: CodeCatalog,
    pub l_max: u32,
    /// Depth budget for the repetition-only optimized scheme.
    pub bdswy_l_max: u32,
    /// Buffer cap for the repetition-only optimized scheme.
    pub bdswy_m_max: u64,
}

/// Full comparison table.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComparisonTable {
    pub p_gate: f64,
    pub p_reject: f64,
    pub p_target: f64,
    pub buffers: Vec<u64>,
    pub rows: Vec<CompareRow>,
}

fn optimizer_cell(
    scheme: &str,
    catalog: &CodeCatalog,
    m_max: u64,
    l_max: u32,
    p_bell: f64,
    p0_reject: f64,
    p_target: f64,
) -> CompareCell {
    let input_model = format!("depolarizing({p_bell})");
    let dist = match depolarizing(p_bell) {
        Ok(d) => d,
        Err(e) => {
            return CompareCell::infeasible(scheme, input_model, p0_reject, e.to_string());
        }
    };
    if dist.total_error() < p_target {
        return CompareCell::zero_levels(scheme, input_model, p0_reject);
    }
    let cfg = match EvalConfig::new(dist, p0_reject, p_target) {
        Ok(c) => c,
        Err(e) => {
            return CompareCell::infeasible(scheme, input_model, p0_reject, e.to_string());
        }
    };
    let cons = SearchConstraints {
        m_max,
        p_target,
        l_max,
        cfg,
    };
    match optimize(catalog, &cons) {
        Ok(result) => match result.best {
            Some(best) => CompareCell {
                scheme: scheme.to_string(),
                input_model,
                p0_reject,
                feasible: true,
                overhead: Some(best.metrics.overhead),
                levels: Some(best.seq.len() as u32),
                sequence: Some(
                    best.seq
                        .iter()
                        .map(|s| s.id())
                        .collect::<Vec<_>>()
                        .join(","),
                ),
                memory: Some(best.metrics.memory),
                note: String::new(),
            },
            None => CompareCell::infeasible(
                scheme,
                input_model,
                p0_reject,
                format!("no sequence meets the target within buffer {m_max}"),
            ),
        },
        Err(e) => CompareCell::infeasible(scheme, input_model, p0_reject, e.to_string()),
    }
}

fn bdsw_cell(p_bell: f64, p0_reject: f64, p_target: f64) -> CompareCell {
    let scheme = "two-pair-alternating";
    let input_model = format!("depolarizing({p_bell})");
    let dist = match depolarizing(p_bell) {
        Ok(d) => d,
        Err(e) => return CompareCell::infeasible(scheme, input_model, p0_reject, e.to_string()),
    };
    match bdsw_overhead(&dist, p0_reject, p_target, 60) {
        Ok(r) if r.converged => {
            let seq: Vec<String> = r
                .levels
                .iter()
                .map(|l| format!("r2{}", l.basis.to_char().to_ascii_lowercase()))
                .collect();
            CompareCell {
                scheme: scheme.to_string(),
                input_model,
                p0_reject,
                feasible: true,
                overhead: Some(r.overhead),
                levels: Some(r.levels.len() as u32),
                sequence: Some(seq.join(",")),
                memory: None,
                note: "Z basis first, then alternating".to_string(),
            }
        }
        Ok(_) => CompareCell::infeasible(
            scheme,
            input_model,
            p0_reject,
            "did not reach the target within 60 levels".to_string(),
        ),
        Err(e) => CompareCell::infeasible(scheme, input_model, p0_reject, e.to_string()),
    }
}

/// Build the scheme comparison across network error rates. Distillation
/// cells take the raw depolarized network error as input; the two-pair
/// schemes apply the injection rejection factor, the buffered scheme does
/// not reject inputs.
pub fn comparison_table(rates: &[f64], cfg: &CompareConfig) -> Result<ComparisonTable> {
    if rates.is_empty() {
        return Err(Error::InvalidArgument {
            field: "rates",
            msg: "at least one network error rate is required".into(),
        });
    }
    if cfg.buffers.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidArgument {
            field: "buffers",
            msg: "buffer sizes must be strictly ascending".into(),
        });
    }
    if !cfg.buffers.is_empty() && cfg.catalog.entries.is_empty() {
        return Err(Error::Infeasible("catalog is empty".into()));
    }
    let p0 = bell_injection_reject(cfg.p_reject)?;
    let injection = |p_bell: f64| {
        InjectionParams::new(cfg.p_gate, cfg.p_gate, p_bell, cfg.p_reject).map(|p| injection_error(&p))
    };
    let r2_catalog = CodeCatalog::from_entries(
        vec![
            CodeSpec::repetition(2, Basis::X)?,
            CodeSpec::repetition(2, Basis::Y)?,
            CodeSpec::repetition(2, Basis::Z)?,
        ],
        "two-qubit repetition",
    )?;
    let mut rows = Vec::with_capacity(rates.len());
    for &p_bell in rates {
        if !(0.0..=0.75).contains(&p_bell) {
            return Err(Error::InvalidArgument {
                field: "rates",
                msg: format!("network error rate must be in [0, 0.75], got {p_bell}"),
            });
        }
        let buffered = cfg
            .buffers
            .iter()
            .map(|&b| {
                optimizer_cell(
                    &format!("buffer-{b}"),
                    &cfg.catalog,
                    b,
                    cfg.l_max,
                    p_bell,
                    0.0,
                    cfg.p_target,
                )
            })
            .collect();
        let surgery = match SurgeryParams::new(cfg.p_gate, p_bell, cfg.p_target) {
            Ok(params) => match lattice_surgery_overhead(&params) {
                Ok(o) => SurgeryCell {
                    feasible: true,
                    d: Some(o.d),
                    bell_pairs: Some(o.bell_pairs),
                    warn_prefactor: o.warn_prefactor,
                    note: String::new(),
                },
                Err(e) => SurgeryCell {
                    feasible: false,
                    d: None,
                    bell_pairs: None,
                    warn_prefactor: false,
                    note: e.to_string(),
                },
            },
            Err(_) => SurgeryCell {
                feasible: false,
                d: None,
                bell_pairs: None,
                warn_prefactor: false,
                note: "model needs strictly positive gate and network errors".to_string(),
            },
        };
        rows.push(CompareRow {
            p_bell,
            injected_error: injection(p_bell)?,
            bdsw: bdsw_cell(p_bell, p0, cfg.p_target),
            bdsw_y: optimizer_cell(
                "two-pair-optimized",
                &r2_catalog,
                cfg.bdswy_m_max,
                cfg.bdswy_l_max,
                p_bell,
                p0,
                cfg.p_target,
            ),
            buffered,
            surgery,
        });
    }
    Ok(ComparisonTable {
        p_gate: cfg.p_gate,
        p_reject: cfg.p_reject,
        p_target: cfg.p_target,
        buffers: cfg.buffers.clone(),
        rows,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64, tol: f64) {
        assert!((a - b).abs() <= tol, "{a} vs {b}");
    }

    #[test]
    fn injection_examples() {
        let p = InjectionParams::new(0.001, 0.001, 0.01, 0.08).unwrap();
        close(injection_error(&p), 19.0 / 7500.0 + 0.01, 1e-15);
        let p = InjectionParams::new(0.0, 0.0, 0.05, 0.0).unwrap();
        close(injection_error(&p), 0.05, 1e-15);
        let p = InjectionParams::new(0.001, 0.001, 0.001, 0.08).unwrap();
        close(injection_error(&p), 19.0 / 7500.0 + 0.001, 1e-15);
        assert!(InjectionParams::new(1.0, 0.0, 0.0, 0.0).is_err());
    }

    #[test]
    fn rejection_examples() {
        close(bell_injection_reject(0.08).unwrap(), 0.1536, 1e-15);
        assert_eq!(bell_injection_reject(0.0).unwrap(), 0.0);
        assert_eq!(bell_injection_reject(1.0).unwrap(), 1.0);
        assert!(bell_injection_reject(1.1).is_err());
    }

    #[test]
    fn surface_distance_example() {
        assert_eq!(surface_code_distance(0.001, 1e-12).unwrap(), (19, 721));
        assert!(surface_code_distance(0.011, 1e-12).is_err());
    }

    #[test]
    fn surface_boundary_is_strict() {
        // Target placed exactly on the d=1 value: d=1 and d=2 share the
        // effective distance and both miss, so d=3 is the answer.
        let p = 0.0011;
        let target = 0.02 * (p / SURFACE_THRESHOLD);
        assert_eq!(surface_code_distance(p, target).unwrap().0, 3);
    }

    #[test]
    fn surface_distance_monotone_in_target() {
        let mut prev = u32::MAX;
        for t in [1e-6, 1e-9, 1e-12, 1e-15] {
            let (d, _) = surface_code_distance(0.001, t).unwrap();
            assert!(d >= prev || prev == u32::MAX);
            if prev == u32::MAX {
                prev = d;
            } else {
                assert!(d >= prev);
                prev = d;
            }
        }
    }

    #[test]
    fn surgery_reference_rows() {
        let cases = [
            (0.001, 17, 1089),
            (0.01, 19, 1369),
            (0.05, 37, 5329),
            (0.10, 75, 22201),
            (0.15, 189, 142129),
        ];
        for (p_bell, d, bell) in cases {
            let s = SurgeryParams::new(0.001, p_bell, 1e-12).unwrap();
            let o = lattice_surgery_overhead(&s).unwrap();
            assert_eq!((o.d, o.bell_pairs), (d, bell), "p_bell={p_bell}");
            assert_eq!(o.warn_prefactor, p_bell > 0.01);
        }
    }

    #[test]
    fn surgery_threshold_errors() {
        let s = SurgeryParams::new(0.016, 0.01, 1e-12).unwrap();
        assert!(matches!(
            lattice_surgery_overhead(&s),
            Err(Error::Infeasible(_))
        ));
        let s = SurgeryParams::new(0.001, 0.2, 1e-12).unwrap();
        assert!(lattice_surgery_overhead(&s).is_err());
    }

    #[test]
    fn bottleneck_examples() {
        let b = bottleneck(1.0, 1.0, 500.0, 30.0).unwrap();
        assert!(b.limited_by_network);
        close(b.ratio, 500.0 / 30.0, 1e-12);
        let b = bottleneck(1.0, 1.0, 60.0, 30.0).unwrap();
        close(b.ratio, 2.0, 1e-15);
        let b = bottleneck(1.0, 1.0, 30.0, 30.0).unwrap();
        assert!(b.limited_by_network);
        assert!(bottleneck(0.0, 1.0, 1.0, 1.0).is_err());
    }

    #[test]
    fn alternating_iteration_trivial_cases() {
        let clean = depolarizing(0.0).unwrap();
        let r = bdsw_overhead(&clean, 0.1536, 1e-12, 60).unwrap();
        assert!(r.converged);
        assert!(r.levels.is_empty());
        close(r.overhead, 1.0 / (1.0 - 0.1536), 1e-15);
        let r = bdsw_overhead(&depolarizing(0.1).unwrap(), 0.0, 1e-12, 2).unwrap();
        assert!(!r.converged);
        assert_eq!(r.levels.len(), 2);
        assert_eq!(r.levels[0].basis, Basis::Z);
        assert_eq!(r.levels[1].basis, Basis::X);
    }

    #[test]
    fn zero_rate_table_is_all_ones() {
        let cfg = CompareConfig {
            p_gate: 0.0,
            p_reject: 0.0,
            p_target: 1e-12,
            buffers: vec![10],
            catalog: crate::codes::builtin_catalog(),
            l_max: 7,
            bdswy_l_max: 14,
            bdswy_m_max: 15,
        };
        let table = comparison_table(&[0.0], &cfg).unwrap();
        let row = &table.rows[0];
        close(row.injected_error, 0.0, 1e-15);
        for cell in [&row.bdsw, &row.bdsw_y, &row.buffered[0]] {
            assert!(cell.feasible);
            close(cell.overhead.unwrap(), 1.0, 1e-15);
            assert_eq!(cell.levels, Some(0));
        }
        assert!(!row.surgery.feasible);
    }
}
