//! Brute-force oracles and property tests for the pair-error channel maps.

use distill_core::channels::{bdsw_error_gap, depolarizing, repetition_step, PauliDist};
use distill_core::codes::{
    logical_effect, repetition_code, residual_to_output_frame, syndrome, Basis,
};
use distill_core::pauli::PauliOp;
use proptest::prelude::*;

fn close(a: f64, b: f64, tol: f64) {
    assert!((a - b).abs() <= tol, "{a} vs {b}");
}

/// Acceptance and conditional output distribution of one repetition level,
/// by enumerating every n-qubit error pattern against the tableau.
fn brute_step(d: &PauliDist, n: u32, basis: Basis) -> (f64, [f64; 4]) {
    let code = repetition_code(n, basis).unwrap();
    let probs = d.components();
    let mut accept = 0.0f64;
    let mut out = [0.0f64; 4];
    // Letters indexed I, X, Y, Z; letter l on qubit q contributes masks.
    let masks = [(0u64, 0u64), (1, 0), (1, 1), (0, 1)];
    for pattern in 0..4u32.pow(n) {
        let mut p = 1.0;
        let mut x = 0u64;
        let mut z = 0u64;
        let mut digits = pattern;
        for q in 0..n {
            let l = (digits % 4) as usize;
            digits /= 4;
            p *= probs[l];
            x |= masks[l].0 << q;
            z |= masks[l].1 << q;
        }
        let e = PauliOp::new(n, x, z).unwrap();
        if syndrome(&code, &e).unwrap() != 0 {
            continue;
        }
        accept += p;
        let eff = residual_to_output_frame(&code, logical_effect(&code, &e).unwrap());
        let idx = match (eff.x_bits != 0, eff.z_bits != 0) {
            (false, false) => 0,
            (true, false) => 1,
            (true, true) => 2,
            (false, true) => 3,
        };
        out[idx] += p;
    }
    for o in &mut out {
        *o /= accept;
    }
    (accept, out)
}

#[test]
fn closed_form_matches_enumeration() {
    let dists = [
        depolarizing(0.1).unwrap(),
        depolarizing(0.31).unwrap(),
        PauliDist::new(0.8, 0.1, 0.06, 0.04).unwrap(),
        PauliDist::new(0.7, 0.0, 0.2, 0.1).unwrap(),
        PauliDist::new(0.55, 0.25, 0.0, 0.2).unwrap(),
    ];
    for d in &dists {
        for n in 2..=4u32 {
            for basis in [Basis::X, Basis::Y, Basis::Z] {
                let (a, out) = repetition_step(d, n, basis).unwrap();
                let (ba, bout) = brute_step(d, n, basis);
                close(a, ba, 1e-12);
                let got = out.components();
                for i in 0..4 {
                    close(got[i], bout[i], 1e-12);
                }
            }
        }
    }
}

#[test]
fn basis_covariance() {
    // The X-basis step is the Z-basis step conjugated by swapping the X and
    // Z components; the Y-basis step swaps Y and Z.
    let d = PauliDist::new(0.75, 0.12, 0.08, 0.05).unwrap();
    let swap_xz = |d: &PauliDist| PauliDist::new(d.p_i, d.p_z, d.p_y, d.p_x).unwrap();
    let swap_yz = |d: &PauliDist| PauliDist::new(d.p_i, d.p_x, d.p_z, d.p_y).unwrap();
    for n in 2..=5u32 {
        let (ax, out_x) = repetition_step(&d, n, Basis::X).unwrap();
        let (az, out_z) = repetition_step(&swap_xz(&d), n, Basis::Z).unwrap();
        close(ax, az, 1e-15);
        let back = swap_xz(&out_z);
        for (a, b) in out_x.components().iter().zip(back.components()) {
            close(*a, b, 1e-15);
        }
        let (ay, out_y) = repetition_step(&d, n, Basis::Y).unwrap();
        let (az2, out_z2) = repetition_step(&swap_yz(&d), n, Basis::Z).unwrap();
        close(ay, az2, 1e-15);
        let back = swap_yz(&out_z2);
        for (a, b) in out_y.components().iter().zip(back.components()) {
            close(*a, b, 1e-15);
        }
    }
}

#[test]
fn alternating_chain_drives_error_down() {
    // One Z check then one X check; each full round shrinks the total
    // error (single levels may bounce when the residual is skewed).
    let mut d = depolarizing(0.1).unwrap();
    let mut prev = d.total_error();
    for round in 1..=3 {
        let (az, mid) = repetition_step(&d, 2, Basis::Z).unwrap();
        let (ax, out) = repetition_step(&mid, 2, Basis::X).unwrap();
        assert!(az > 0.5 && ax > 0.5, "round {round}");
        d = out;
        assert!(d.total_error() < prev, "round {round}");
        prev = d.total_error();
    }
    assert!(prev < 1e-7);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(400))]

    #[test]
    fn gap_matches_two_pair_step(
        w_x in 0.0f64..1.0,
        w_y in 0.0f64..1.0,
        w_z in 0.0f64..1.0,
        total in 0.0f64..0.49,
    ) {
        // Build a distribution with p_z <= p_x, p_z <= p_y and total error
        // strictly below 1/2.
        let wsum = w_x + w_y + w_z + 1e-9;
        let mut px = total * w_x / wsum;
        let mut py = total * w_y / wsum;
        let pz = total * (w_z / wsum) / 3.0;
        px += total * (w_z / wsum) / 3.0;
        py += total * (w_z / wsum) / 3.0;
        let d = PauliDist::new(1.0 - px - py - pz, px, py, pz).unwrap();
        prop_assume!(d.p_z <= d.p_x && d.p_z <= d.p_y);
        prop_assume!(d.total_error() < 0.5);

        let gap = bdsw_error_gap(&d).unwrap();
        let (_, out) = repetition_step(&d, 2, Basis::Z).unwrap();
        prop_assert!((gap - (out.p_i - d.p_i)).abs() < 1e-12,
            "gap {gap} vs step {}", out.p_i - d.p_i);
        // The fidelity never drops, so the total error never grows.
        prop_assert!(out.total_error() <= d.total_error() + 1e-15);
    }

    #[test]
    fn step_outputs_stay_normalized(
        p in 0.0f64..0.75,
        n in 2u32..7,
        b in 0usize..3,
    ) {
        let basis = [Basis::X, Basis::Y, Basis::Z][b];
        let d = depolarizing(p).unwrap();
        let (a, out) = repetition_step(&d, n, basis).unwrap();
        prop_assert!(a > 0.0 && a <= 1.0);
        let s: f64 = out.components().iter().sum();
        prop_assert!((s - 1.0).abs() < 1e-9);
        prop_assert!(out.components().iter().all(|&c| c >= -1e-12));
    }
}
