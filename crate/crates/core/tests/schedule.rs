//! Schedule validity at scale: depth budgets, layer discipline, and replay
//! verification across whole code families.

use distill_core::codes::{parity_code, repetition_code, Basis};
use distill_core::pauli::PauliOp;
use distill_core::schedule::{
    code_unencode_schedule, parity_unencode_schedule, replay_schedule, unencode_schedule,
    verify_schedule, verify_unencoding,
};

#[test]
fn generic_schedule_shape_for_all_dimensions() {
    for n in 2u32..=64 {
        for k in 1..n {
            let s = unencode_schedule(n, k).unwrap();
            assert_eq!(s.depth as usize, s.layers.len());
            assert!(s.depth <= (3 * n - 2 - k) as usize, "n={n} k={k} depth {}", s.depth);
            let mut per_control: std::collections::HashMap<u32, u32> =
                std::collections::HashMap::new();
            let mut seen = std::collections::HashSet::new();
            for (li, layer) in s.layers.iter().enumerate() {
                assert!(!layer.is_empty());
                let mut used = std::collections::HashSet::new();
                for &(c, t) in layer {
                    assert!(c != t && c < n && t < n);
                    // Layers are qubit-disjoint and no pair repeats.
                    assert!(used.insert(c) && used.insert(t), "n={n} k={k} layer {li}");
                    assert!(seen.insert((c, t)));
                    // Each control's targets appear on strictly later
                    // layers as the walk proceeds.
                    if let Some(prev) = per_control.insert(c, li as u32) {
                        assert!(prev < li as u32);
                    }
                }
            }
        }
    }
}

#[test]
fn generic_schedule_small_cases() {
    let s = unencode_schedule(2, 1).unwrap();
    let gates: usize = s.layers.iter().map(|l| l.len()).sum();
    assert_eq!((gates, s.depth), (2, 2));
    // At n=4, k=1 the budget 3n-2-k admits every ordered pair.
    let s = unencode_schedule(4, 1).unwrap();
    let gates: usize = s.layers.iter().map(|l| l.len()).sum();
    assert_eq!(gates, 12);
}

#[test]
fn parity_schedules_verify_by_replay() {
    for n in (4u32..=16).step_by(2) {
        let code = parity_code(n).unwrap();
        let s = parity_unencode_schedule(n).unwrap();
        verify_schedule(&code, &s).unwrap();
        if n == 4 {
            assert_eq!(s.depth, 2);
        } else {
            assert_eq!(s.depth, (n / 2 + 1) as usize, "n={n}");
        }
    }
}

#[test]
fn parity_schedule_images_are_single_qubit_checks() {
    for n in [4u32, 6, 8, 12] {
        let s = parity_unencode_schedule(n).unwrap();
        let all = (1u64 << n) - 1;
        let x_img = replay_schedule(&s, &PauliOp::new(n, all, 0).unwrap()).unwrap();
        let z_img = replay_schedule(&s, &PauliOp::new(n, 0, all).unwrap()).unwrap();
        // Each global stabilizer collapses to one single-qubit check on its
        // own non-slot position.
        let checks = all & !((1u64 << (n - 2)) - 1);
        assert_eq!(x_img.z_bits, 0, "n={n}");
        assert_eq!(x_img.x_bits.count_ones(), 1);
        assert!(x_img.x_bits & checks != 0, "n={n}");
        assert_eq!(z_img.x_bits, 0, "n={n}");
        assert_eq!(z_img.z_bits.count_ones(), 1);
        assert!(z_img.z_bits & checks != 0, "n={n}");
        assert_ne!(x_img.x_bits, z_img.z_bits);
    }
}

#[test]
fn standard_form_circuits_verify_for_parity_family() {
    for n in (4u32..=16).step_by(2) {
        let code = parity_code(n).unwrap();
        let circuit = code_unencode_schedule(&code).unwrap();
        verify_unencoding(&code, &circuit).unwrap();
        assert!(circuit.depth >= 1);
    }
}

#[test]
fn standard_form_circuits_verify_for_repetition_family() {
    for n in 2u32..=12 {
        for basis in [Basis::X, Basis::Y, Basis::Z] {
            let code = repetition_code(n, basis).unwrap();
            let circuit = code_unencode_schedule(&code).unwrap();
            verify_unencoding(&code, &circuit).unwrap();
        }
    }
}

#[test]
fn repetition_pair_z_is_single_gate() {
    let code = repetition_code(2, Basis::Z).unwrap();
    let circuit = code_unencode_schedule(&code).unwrap();
    let gates: usize = circuit.layers.iter().map(|l| l.len()).sum();
    assert_eq!((gates, circuit.depth), (1, 1));
}

#[test]
fn standard_form_depth_stays_within_budget() {
    // Staircase layer indices top out at 3n - 3, so no circuit exceeds
    // 3n - 2 layers.
    for n in [4u32, 8, 12, 16] {
        let code = parity_code(n).unwrap();
        let circuit = code_unencode_schedule(&code).unwrap();
        assert!(circuit.depth <= (3 * n - 2) as usize, "n={n} depth {}", circuit.depth);
    }
    for n in 2u32..=12 {
        let code = repetition_code(n, Basis::Y).unwrap();
        let circuit = code_unencode_schedule(&code).unwrap();
        assert!(circuit.depth <= (3 * n - 2) as usize, "n={n} depth {}", circuit.depth);
    }
}
