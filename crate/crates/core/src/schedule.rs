//! Gate schedules that rotate a code's stabilizers onto single-qubit checks
//! while moving the logical content to the first k positions, with depth at
//! most 3n - 2 - k.
//!
//! Three constructions are provided: a code-blind staircase over all qubit
//! pairs, a two-qubit-gate network derived from a code's standard form, and
//! a shallow specialization for the even-n parity family.

use serde::{Deserialize, Serialize};

use crate::codes::StabilizerCode;
use crate::pauli::{PauliOp, MAX_QUBITS};
use crate::{Error, Result};

/// Layered CX gate plan; all indices are 0-based qubit positions.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GateSchedule {
    pub n: u32,
    pub k: u32,
    /// Layers of qubit-disjoint (control, target) pairs, applied in order.
    pub layers: Vec<Vec<(u32, u32)>>,
    pub depth: usize,
}

impl GateSchedule {
    fn new(n: u32, k: u32, layers: Vec<Vec<(u32, u32)>>) -> Result<Self> {
        for layer in &layers {
            let mut used = 0u64;
            for &(c, t) in layer {
                if c >= n || t >= n || c == t {
                    return Err(Error::Domain(format!(
                        "gate ({c}, {t}) out of range for n={n}"
                    )));
                }
                let bits = (1u64 << c) | (1u64 << t);
                if used & bits != 0 {
                    return Err(Error::Domain(
                        "a qubit appears twice within a layer".into(),
                    ));
                }
                used |= bits;
            }
        }
        let depth = layers.len();
        Ok(GateSchedule { n, k, layers, depth })
    }
}

/// One gate of an unencoding circuit; two-qubit gates are (control, target).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Gate {
    Cx(u32, u32),
    Cz(u32, u32),
    Cy(u32, u32),
    H(u32),
    S(u32),
}

/// Layered unencoding circuit. Single-qubit gates ride in the layer of
/// their qubit's last two-qubit gate and are applied after it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct UnencodeCircuit {
    pub n: u32,
    pub k: u32,
    pub layers: Vec<Vec<Gate>>,
    pub depth: usize,
}

fn check_dims(n: u32, k: u32) -> Result<()> {
    if n < 2 || n > MAX_QUBITS {
        return Err(Error::Domain(format!(
            "need 2 <= n <= {MAX_QUBITS}, got n={n}"
        )));
    }
    if k < 1 || k >= n {
        return Err(Error::Domain(format!("need 1 <= k < n, got k={k}, n={n}")));
    }
    Ok(())
}

/// Staircase layer of gate (c, t): controls sweep from the last qubit
/// toward the first, each control touching targets in cyclic order.
fn staircase_layer(n: u32, c: u32, t: u32) -> u32 {
    2 * (n - 1 - c) + (c.wrapping_sub(t).wrapping_add(n) % n)
}

/// Code-blind unencoding staircase: every ordered qubit pair whose
/// staircase layer fits within the depth budget 3n - 2 - k, grouped into
/// qubit-disjoint layers.
pub fn unencode_schedule(n: u32, k: u32) -> Result<GateSchedule> {
    check_dims(n, k)?;
    let cutoff = 3 * n - 2 - k;
    let mut buckets: Vec<Vec<(u32, u32)>> = vec![Vec::new(); cutoff as usize + 1];
    for c in 0..n {
        for t in 0..n {
            if t == c {
                continue;
            }
            let layer = staircase_layer(n, c, t);
            if layer <= cutoff {
                buckets[layer as usize].push((c, t));
            }
        }
    }
    let layers: Vec<Vec<(u32, u32)>> = buckets.into_iter().filter(|b| !b.is_empty()).collect();
    GateSchedule::new(n, k, layers)
}

/// Shallow CX schedule for the even-n parity code: depth 2 at n=4 and
/// n/2 + 1 for larger n. The two global stabilizers land on the last two
/// positions.
pub fn parity_unencode_schedule(n: u32) -> Result<GateSchedule> {
    if n < 4 || n % 2 != 0 || n > MAX_QUBITS {
        return Err(Error::Domain(format!(
            "parity schedule needs even n in [4, {MAX_QUBITS}], got {n}"
        )));
    }
    if n == 4 {
        return GateSchedule::new(4, 2, vec![vec![(2, 0), (1, 3)], vec![(2, 1), (0, 3)]]);
    }
    // Build the encode direction layer by layer, then reverse; CX is its own
    // inverse. All positions below are 1-based and shifted down on emit.
    let g = |c: u32, t: u32| (c - 1, t - 1);
    let mut encode: Vec<Vec<(u32, u32)>> = vec![vec![g(n, n - 1)], vec![g(n, 1), g(2, n - 1)]];
    let mut t = 3u32;
    loop {
        let mut layer = Vec::new();
        if 2 * t - 4 <= n - 2 {
            layer.push(g(2 * t - 5, 2 * t - 4));
        }
        if 2 * t - 3 <= n - 2 {
            layer.push(g(n, 2 * t - 3));
        }
        if 2 * t - 2 <= n - 2 {
            layer.push(g(2 * t - 2, n - 1));
        }
        if layer.is_empty() {
            break;
        }
        encode.push(layer);
        t += 1;
    }
    encode.reverse();
    GateSchedule::new(n, n - 2, encode)
}

/// Replay a Pauli operator through a CX schedule.
pub fn replay_schedule(sched: &GateSchedule, op: &PauliOp) -> Result<PauliOp> {
    if op.n != sched.n {
        return Err(Error::Domain(format!(
            "operator width {} does not match schedule width {}",
            op.n, sched.n
        )));
    }
    let mut cur = *op;
    for layer in &sched.layers {
        for &(c, t) in layer {
            cur.apply_cx(c, t);
        }
    }
    Ok(cur)
}

/// Replay a Pauli operator through an unencoding circuit: within each layer
/// two-qubit gates act first, then S gates, then H gates.
pub fn replay_circuit(circuit: &UnencodeCircuit, op: &PauliOp) -> Result<PauliOp> {
    if op.n != circuit.n {
        return Err(Error::Domain(format!(
            "operator width {} does not match circuit width {}",
            op.n, circuit.n
        )));
    }
    let mut cur = *op;
    for layer in &circuit.layers {
        for gate in layer {
            match *gate {
                Gate::Cx(c, t) => cur.apply_cx(c, t),
                Gate::Cz(a, b) => cur.apply_cz(a, b),
                Gate::Cy(c, t) => cur.apply_cy(c, t),
                Gate::H(_) | Gate::S(_) => {}
            }
        }
        for gate in layer {
            if let Gate::S(a) = *gate {
                cur.apply_s(a);
            }
        }
        for gate in layer {
            if let Gate::H(a) = *gate {
                cur.apply_h(a);
            }
        }
    }
    Ok(cur)
}

/// Standard form of a stabilizer tableau in the reversed qubit frame:
/// X-pivot rows, Z-pivot rows, and the block columns needed for gates.
struct StandardForm {
    n: u32,
    r1: usize,
    rows: Vec<(u64, u64)>,
}

fn standard_form(code: &StabilizerCode) -> Result<StandardForm> {
    let n = code.n;
    let r = code.stabilizers.len();
    let mut rows: Vec<(u64, u64)> = code
        .stabilizers
        .iter()
        .map(|s| {
            let m = s.mirrored();
            (m.x_bits, m.z_bits)
        })
        .collect();
    // Phase 1: reduce the X block; pivots must occupy the leading columns.
    let mut r1 = 0usize;
    for col in 0..n {
        let Some(pivot) = (r1..r).find(|&i| rows[i].0 >> col & 1 == 1) else {
            continue;
        };
        rows.swap(r1, pivot);
        for i in 0..r {
            if i != r1 && rows[i].0 >> col & 1 == 1 {
                rows[i].0 ^= rows[r1].0;
                rows[i].1 ^= rows[r1].1;
            }
        }
        if col as usize != r1 {
            return Err(Error::Domain(format!(
                "stabilizer X block is not full-rank on its leading columns (pivot at column {col})"
            )));
        }
        r1 += 1;
    }
    // Phase 2: reduce the Z block of the remaining rows on columns >= r1.
    let mut r2 = 0usize;
    for col in r1 as u32..n {
        let Some(pivot) = (r1 + r2..r).find(|&i| rows[i].1 >> col & 1 == 1) else {
            continue;
        };
        rows.swap(r1 + r2, pivot);
        for i in r1..r {
            if i != r1 + r2 && rows[i].1 >> col & 1 == 1 {
                rows[i].1 ^= rows[r1 + r2].1;
            }
        }
        if col as usize != r1 + r2 {
            return Err(Error::Domain(format!(
                "stabilizer Z block is not full-rank on its leading columns (pivot at column {col})"
            )));
        }
        r2 += 1;
    }
    if r1 + r2 != r {
        return Err(Error::Domain(
            "a stabilizer row has no pivot in standard form".into(),
        ));
    }
    Ok(StandardForm { n, r1, rows })
}

/// Standard-form unencoding circuit for a tableau code: stabilizers map
/// into products of single-qubit operators on the last n - k positions and
/// each logical pair maps to the matching one of the first k positions.
pub fn code_unencode_schedule(code: &StabilizerCode) -> Result<UnencodeCircuit> {
    code.check_consistency()?;
    let n = code.n;
    let k = code.k;
    check_dims(n, k)?;
    let sf = standard_form(code)?;
    let r = (n - k) as usize;
    let r1 = sf.r1;
    // Gates are built in the reversed frame with 0-based columns, then
    // mapped back through q -> n-1-q with layer numbers kept.
    let mut tagged: Vec<(u32, Gate)> = Vec::new();
    let paper_layer = |c: u32, t: u32| 2 * c + (t.wrapping_sub(c).wrapping_add(n) % n);
    for (i, &(x, z)) in sf.rows.iter().take(r1).enumerate() {
        let c = i as u32;
        let mut last_layer = None;
        for t in 0..n {
            if t == c {
                continue;
            }
            let xb = x >> t & 1 == 1;
            let zb = z >> t & 1 == 1;
            let gate = match (xb, zb) {
                (false, false) => continue,
                (true, false) => Gate::Cx(c, t),
                (false, true) => Gate::Cz(c, t),
                (true, true) => Gate::Cy(c, t),
            };
            let layer = paper_layer(c, t);
            last_layer = Some(last_layer.map_or(layer, |l: u32| l.max(layer)));
            tagged.push((layer, gate));
        }
        // The pivot's own Z bit becomes a phase gate; the Hadamard turns
        // the X pivot into a Z check. Both run after the controlled gates.
        let own = last_layer.unwrap_or(0);
        if z >> c & 1 == 1 {
            tagged.push((own, Gate::S(c)));
        }
        tagged.push((own, Gate::H(c)));
    }
    for j in 0..k as usize {
        let c = (r + j) as u32;
        let mut z_on_xpivot = vec![false; r1];
        for a in 0..r1 {
            let mut bit = sf.rows[a].1 >> (r + j) & 1 == 1;
            for (m, &(_, zrow)) in sf.rows.iter().enumerate().skip(r1).take(r - r1) {
                let e = zrow >> (r + j) & 1 == 1;
                let c1 = sf.rows[a].1 >> (r1 + (m - r1)) & 1 == 1;
                bit ^= e && c1;
            }
            z_on_xpivot[a] = bit;
        }
        for (m, &(_, zrow)) in sf.rows.iter().enumerate().skip(r1).take(r - r1) {
            if zrow >> (r + j) & 1 == 1 {
                let t = (r1 + (m - r1)) as u32;
                tagged.push((paper_layer(c, t), Gate::Cx(c, t)));
            }
        }
        for (a, &hit) in z_on_xpivot.iter().enumerate() {
            if hit {
                let t = a as u32;
                tagged.push((paper_layer(c, t), Gate::Cz(c, t)));
            }
        }
    }
    let mirror = |q: u32| n - 1 - q;
    let mut buckets: std::collections::BTreeMap<u32, Vec<Gate>> = std::collections::BTreeMap::new();
    for (layer, gate) in tagged {
        let mapped = match gate {
            Gate::Cx(c, t) => Gate::Cx(mirror(c), mirror(t)),
            Gate::Cz(a, b) => Gate::Cz(mirror(a), mirror(b)),
            Gate::Cy(c, t) => Gate::Cy(mirror(c), mirror(t)),
            Gate::H(a) => Gate::H(mirror(a)),
            Gate::S(a) => Gate::S(mirror(a)),
        };
        buckets.entry(layer).or_default().push(mapped);
    }
    let layers: Vec<Vec<Gate>> = buckets.into_values().collect();
    let depth = layers.len();
    let circuit = UnencodeCircuit { n, k, layers, depth };
    verify_standard_rows(&sf, &circuit)?;
    Ok(circuit)
}

/// Internal strictness check: each standard-form row must land on a
/// distinct single-qubit Z among the last n - k positions.
fn verify_standard_rows(sf: &StandardForm, circuit: &UnencodeCircuit) -> Result<()> {
    let n = sf.n;
    let k = circuit.k;
    let check_mask = ((1u128 << n) - (1u128 << k)) as u64;
    let mut seen = 0u64;
    for &(x, z) in &sf.rows {
        let row = PauliOp::new(n, x, z)?.mirrored();
        let img = replay_circuit(circuit, &row)?;
        if img.x_bits != 0 || img.z_bits.count_ones() != 1 || img.z_bits & check_mask == 0 {
            return Err(Error::Domain(format!(
                "standard-form row maps to {img}, not a single-qubit check"
            )));
        }
        if seen & img.z_bits != 0 {
            return Err(Error::Domain(
                "two standard-form rows map to the same check position".into(),
            ));
        }
        seen |= img.z_bits;
    }
    Ok(())
}

/// Verify an unencoding circuit against its code: stabilizer generators
/// must map to Z products supported on the last n - k positions, and each
/// logical pair must map to an anticommuting single-qubit pair at its slot
/// (Z residue on the check positions is allowed).
pub fn verify_unencoding(code: &StabilizerCode, circuit: &UnencodeCircuit) -> Result<()> {
    let n = code.n;
    let k = code.k;
    if circuit.n != n || circuit.k != k {
        return Err(Error::Domain("circuit dimensions do not match code".into()));
    }
    let slot_mask = (1u64 << k) - 1;
    let check_mask = (((1u128 << n) - 1) as u64) & !slot_mask;
    for s in &code.stabilizers {
        let img = replay_circuit(circuit, s)?;
        if img.x_bits != 0 || img.z_bits & slot_mask != 0 {
            return Err(Error::Domain(format!(
                "stabilizer {s} maps to {img}, which leaves the check group"
            )));
        }
    }
    let mut images = Vec::with_capacity(2 * k as usize);
    for j in 0..k {
        for op in [&code.logical_x[j as usize], &code.logical_z[j as usize]] {
            let img = replay_circuit(circuit, op)?;
            if img.x_bits & check_mask != 0 {
                return Err(Error::Domain(format!(
                    "logical {op} maps to {img} with X support on a check position"
                )));
            }
            let slot_support = (img.x_bits | img.z_bits) & slot_mask;
            if slot_support != 1 << j {
                return Err(Error::Domain(format!(
                    "logical {op} maps to {img}, not a single-qubit operator at slot {j}"
                )));
            }
            images.push(img);
        }
    }
    for i in 0..k as usize {
        for j in 0..k as usize {
            let want = u8::from(i == j);
            if images[2 * i].sym_product(&images[2 * j + 1]) != want {
                return Err(Error::Domain(format!(
                    "logical pair ({i}, {j}) does not reproduce the Bell pairing"
                )));
            }
        }
    }
    Ok(())
}

/// Verify a CX-only schedule against its code. Stabilizer generators must
/// map to single-qubit operators on distinct check positions; logicals,
/// after dividing out those check operators, must be supported entirely on
/// the first k slots and preserve their pairwise (anti)commutation.
pub fn verify_schedule(code: &StabilizerCode, sched: &GateSchedule) -> Result<()> {
    let n = code.n;
    let k = code.k;
    if sched.n != n || sched.k != k {
        return Err(Error::Domain(
            "schedule dimensions do not match code".into(),
        ));
    }
    let slot_mask = (1u64 << k) - 1;
    let mut check_images: Vec<PauliOp> = Vec::new();
    for s in &code.stabilizers {
        let img = replay_schedule(sched, s)?;
        if img.weight() != 1 || (img.x_bits | img.z_bits) & slot_mask != 0 {
            return Err(Error::Domain(format!(
                "stabilizer {s} maps to {img}, not a single-qubit check"
            )));
        }
        if check_images
            .iter()
            .any(|c| (c.x_bits | c.z_bits) == (img.x_bits | img.z_bits))
        {
            return Err(Error::Domain(
                "two stabilizers map to the same check position".into(),
            ));
        }
        check_images.push(img);
    }
    let reduce = |mut img: PauliOp| {
        for c in &check_images {
            if ((img.x_bits & c.x_bits) | (img.z_bits & c.z_bits)) != 0 {
                img = img.mul(c);
            }
        }
        img
    };
    let mut images = Vec::with_capacity(2 * k as usize);
    for j in 0..k as usize {
        for op in [&code.logical_x[j], &code.logical_z[j]] {
            let img = reduce(replay_schedule(sched, op)?);
            if (img.x_bits | img.z_bits) & !slot_mask != 0 {
                return Err(Error::Domain(format!(
                    "logical {op} maps to {img}, which leaks outside the slots"
                )));
            }
            images.push(img);
        }
    }
    for i in 0..k as usize {
        for j in 0..k as usize {
            let want = u8::from(i == j);
            if images[2 * i].sym_product(&images[2 * j + 1]) != want {
                return Err(Error::Domain(format!(
                    "logical pair ({i}, {j}) does not reproduce the Bell pairing"
                )));
            }
            if images[2 * i].sym_product(&images[2 * j]) != 0
                || images[2 * i + 1].sym_product(&images[2 * j + 1]) != 0
            {
                return Err(Error::Domain(format!(
                    "logical images ({i}, {j}) acquired a spurious anticommutation"
                )));
            }
        }
    }
    Ok(())
}
