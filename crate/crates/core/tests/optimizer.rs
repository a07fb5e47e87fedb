//! Search correctness: reference optimum, exhaustive cross-check on random
//! catalogs, determinism, and buffer sweeps.

use distill_core::analytic::EvalConfig;
use distill_core::channels::depolarizing;
use distill_core::codes::{builtin_catalog, CodeCatalog, CodeSpec};
use distill_core::optimizer::{
    brute_force_best, optimize, pareto_sweep, SearchConstraints,
};
use distill_core::Error;
use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn r2_catalog() -> CodeCatalog {
    use distill_core::codes::Basis;
    CodeCatalog::from_entries(
        vec![
            CodeSpec::repetition(2, Basis::X).unwrap(),
            CodeSpec::repetition(2, Basis::Y).unwrap(),
            CodeSpec::repetition(2, Basis::Z).unwrap(),
        ],
        "pairs",
    )
    .unwrap()
}

fn constraints(p: f64, p0: f64, p_target: f64, m_max: u64, l_max: u32) -> SearchConstraints {
    SearchConstraints {
        m_max,
        p_target,
        l_max,
        cfg: EvalConfig::new(depolarizing(p).unwrap(), p0, p_target).unwrap(),
    }
}

#[test]
fn two_qubit_reference_optimum() {
    // Five alternating-basis levels are optimal for 1.25% error pairs with
    // a six-pair buffer; a four-pair buffer cannot reach the target at all.
    let cons = constraints(0.0125, 0.1536, 1e-12, 6, 7);
    let result = optimize(&r2_catalog(), &cons).unwrap();
    let best = result.best.expect("feasible");
    assert_eq!(best.seq.len(), 5);
    assert_eq!(best.metrics.memory, 6);
    let reference = 39.09;
    assert!(
        (best.metrics.overhead - reference).abs() / reference < 0.005,
        "overhead {}",
        best.metrics.overhead
    );

    let tight = constraints(0.0125, 0.1536, 1e-12, 4, 12);
    let result = optimize(&r2_catalog(), &tight).unwrap();
    assert!(result.best.is_none());
    assert!(result.nodes_visited > 0);
}

#[test]
fn empty_catalog_is_infeasible() {
    let empty = CodeCatalog {
        entries: Vec::new(),
        provenance: "none".to_string(),
    };
    let cons = constraints(0.01, 0.0, 1e-9, 10, 3);
    assert!(matches!(
        optimize(&empty, &cons),
        Err(Error::Infeasible(_))
    ));
}

#[test]
fn search_matches_exhaustive_enumeration() {
    // Random small catalogs, exhaustive enumeration as the oracle.
    let builtin = builtin_catalog();
    let mut rng = ChaCha8Rng::seed_from_u64(2026);
    let mut feasible_seen = 0;
    for case in 0..20 {
        let size = 2 + (rng.random::<u64>() % 4) as usize;
        let mut picks = Vec::new();
        while picks.len() < size {
            let i = (rng.random::<u64>() % builtin.entries.len() as u64) as usize;
            let spec = builtin.entries[i].clone();
            if !picks.iter().any(|s: &CodeSpec| s.id() == spec.id()) {
                picks.push(spec);
            }
        }
        let catalog = CodeCatalog::from_entries(picks, "random").unwrap();
        let p = 0.005 + 0.045 * rng.random::<f64>();
        let m_max = 4 + rng.random::<u64>() % 60;
        let p_target = 10f64.powf(-4.0 - 4.0 * rng.random::<f64>());
        let cons = constraints(p, 0.0, p_target, m_max, 3);
        let dfs = optimize(&catalog, &cons).unwrap();
        let brute = brute_force_best(&catalog, &cons).unwrap();
        match (dfs.best, brute) {
            (None, None) => {}
            (Some(a), Some(b)) => {
                feasible_seen += 1;
                let ids = |c: &distill_core::optimizer::Candidate| {
                    c.seq.iter().map(|s| s.id()).collect::<Vec<_>>()
                };
                assert_eq!(ids(&a), ids(&b), "case {case}");
                assert_eq!(
                    a.metrics.overhead.to_bits(),
                    b.metrics.overhead.to_bits(),
                    "case {case}"
                );
            }
            (a, b) => panic!("case {case}: search {a:?} vs enumeration {b:?}"),
        }
    }
    assert!(feasible_seen >= 3, "only {feasible_seen} feasible cases");
}

#[test]
fn repeated_runs_are_identical() {
    let cons = constraints(0.01, 0.0, 1e-12, 12, 5);
    let cat = builtin_catalog();
    let a = optimize(&cat, &cons).unwrap();
    let b = optimize(&cat, &cons).unwrap();
    assert_eq!(a, b);
}

#[test]
fn viable_list_contains_best_and_prunes_count() {
    let cons = constraints(0.01, 0.0, 1e-12, 12, 5);
    let result = optimize(&builtin_catalog(), &cons).unwrap();
    let best = result.best.as_ref().expect("feasible");
    assert!(result.viable.iter().any(|c| c == best));
    assert!(result.nodes_visited > result.viable.len() as u64);
    assert!(result.nodes_pruned > 0);
    // Every recorded candidate respects the constraints.
    for c in &result.viable {
        assert!(c.metrics.memory <= 12);
        assert!(c.metrics.p_per_qubit < 1e-12);
        assert!(c.seq.len() <= 5);
    }
}

#[test]
fn pareto_sweep_is_monotone() {
    let cat = builtin_catalog();
    let cons = constraints(0.01, 0.0, 1e-12, 1, 5);
    let points = pareto_sweep(&cat, &cons, &[8, 10, 16, 28, 40]).unwrap();
    assert_eq!(points.len(), 5);
    let mut prev = f64::INFINITY;
    for pt in &points {
        if let Some(best) = &pt.search.best {
            assert!(best.metrics.overhead <= prev + 1e-12, "m={}", pt.m_max);
            prev = best.metrics.overhead;
        }
    }
    // Larger buffers found strictly better plans somewhere in this range.
    let first = points[0].search.best.as_ref().unwrap().metrics.overhead;
    let last = points[4].search.best.as_ref().unwrap().metrics.overhead;
    assert!(last < first);
    assert!(pareto_sweep(&cat, &cons, &[8, 8]).is_err());
    assert!(pareto_sweep(&cat, &cons, &[]).is_err());
}
