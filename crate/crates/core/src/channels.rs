//! Pauli error distributions and the exact classical-step channel maps.
//!
//! A Bell-pair ensemble diagonal in the Bell basis is tracked as a Pauli
//! distribution (p_I, p_X, p_Y, p_Z) on one side of the pair.

use serde::{Deserialize, Serialize};

use crate::codes::Basis;
use crate::{Error, Result};

const SIMPLEX_SLACK: f64 = 1e-12;
const SIMPLEX_REJECT: f64 = 1e-6;

/// Probability distribution over the four Pauli letters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PauliDist {
    pub p_i: f64,
    pub p_x: f64,
    pub p_y: f64,
    pub p_z: f64,
}

impl PauliDist {
    /// Validate and normalize. Components may undershoot zero by at most
    /// 1e-12 (clamped); the total may be off one by at most 1e-6
    /// (renormalized); anything worse is rejected.
    pub fn new(p_i: f64, p_x: f64, p_y: f64, p_z: f64) -> Result<Self> {
        let mut c = [p_i, p_x, p_y, p_z];
        for (idx, v) in c.iter_mut().enumerate() {
            if !v.is_finite() || *v < -SIMPLEX_SLACK || *v > 1.0 + SIMPLEX_REJECT {
                return Err(Error::InvalidDistribution(format!(
                    "component {idx} out of range: {v}"
                )));
            }
            if *v < 0.0 {
                *v = 0.0;
            }
        }
        let sum: f64 = c.iter().sum();
        if (sum - 1.0).abs() > SIMPLEX_REJECT {
            return Err(Error::InvalidDistribution(format!(
                "components sum to {sum}, more than 1e-6 away from 1"
            )));
        }
        Ok(PauliDist {
            p_i: c[0] / sum,
            p_x: c[1] / sum,
            p_y: c[2] / sum,
            p_z: c[3] / sum,
        })
    }

    pub fn components(&self) -> [f64; 4] {
        [self.p_i, self.p_x, self.p_y, self.p_z]
    }

    /// Probability of any non-identity letter.
    pub fn total_error(&self) -> f64 {
        self.p_x + self.p_y + self.p_z
    }
}

impl<'de> Deserialize<'de> for PauliDist {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Raw {
            p_i: f64,
            p_x: f64,
            p_y: f64,
            p_z: f64,
        }
        let raw = Raw::deserialize(d)?;
        // Validate with the usual tolerances, but keep the stored components
        // bit-identical so serialized distributions round-trip exactly.
        PauliDist::new(raw.p_i, raw.p_x, raw.p_y, raw.p_z).map_err(serde::de::Error::custom)?;
        Ok(PauliDist {
            p_i: raw.p_i.max(0.0),
            p_x: raw.p_x.max(0.0),
            p_y: raw.p_y.max(0.0),
            p_z: raw.p_z.max(0.0),
        })
    }
}

/// Depolarizing distribution: (1-p, p/3, p/3, p/3).
pub fn depolarizing(p: f64) -> Result<PauliDist> {
    if !(0.0..=0.75).contains(&p) {
        return Err(Error::InvalidDistribution(format!(
            "depolarizing parameter must be in [0, 0.75], got {p}"
        )));
    }
    PauliDist::new(1.0 - p, p / 3.0, p / 3.0, p / 3.0)
}

pub fn total_error(d: &PauliDist) -> f64 {
    d.total_error()
}

/// Sum_{j=0}^{n-1} a^j b^{n-1-j}, the cofactor of (a-b) in a^n - b^n.
fn power_sum(a: f64, b: f64, n: u32) -> f64 {
    let mut acc = 0.0;
    let mut apow = 1.0;
    let mut bpows = vec![1.0f64; n as usize];
    for j in 1..n as usize {
        bpows[j] = bpows[j - 1] * b;
    }
    for j in 0..n as usize {
        acc += apow * bpows[n as usize - 1 - j];
        apow *= a;
    }
    acc
}

fn swap_for_basis(basis: Basis, d: [f64; 4]) -> [f64; 4] {
    let [i, x, y, z] = d;
    match basis {
        Basis::Z => [i, x, y, z],
        Basis::X => [i, z, y, x],
        Basis::Y => [i, x, z, y],
    }
}

/// Exact accept probability and post-selected output distribution of one
/// n-pair repetition level measured in `basis`.
///
/// For the Z basis, with s = p_I + p_Z, t = p_X + p_Y, u = p_I - p_Z and
/// v = p_X - p_Y, acceptance is A = s^n + t^n and the output distribution is
/// ((s^n + u^n), (t^n + v^n), (t^n - v^n), (s^n - u^n)) / (2A). The two
/// differences are evaluated in factored form (the difference of the base
/// values is 2 p_Z or 2 p_Y exactly) so that outputs near the rounding floor
/// keep full relative precision. Other bases relabel letters into the Z frame
/// and back.
pub fn repetition_step(dist: &PauliDist, n: u32, basis: Basis) -> Result<(f64, PauliDist)> {
    if !(2..=64).contains(&n) {
        return Err(Error::InvalidArgument {
            field: "n",
            msg: format!("repetition length must be in 2..=64, got {n}"),
        });
    }
    let [pi, px, py, pz] = swap_for_basis(basis, dist.components());
    let s = pi + pz;
    let t = px + py;
    let u = pi - pz;
    let v = px - py;
    let sn = s.powi(n as i32);
    let tn = t.powi(n as i32);
    let un = u.powi(n as i32);
    let vn = v.powi(n as i32);
    let accept = sn + tn;
    let out_i = (sn + un) / (2.0 * accept);
    let out_z = pz * power_sum(s, u, n) / accept;
    let out_x = (tn + vn) / (2.0 * accept);
    let out_y = py * power_sum(t, v, n) / accept;
    let [oi, ox, oy, oz] = swap_for_basis(basis, [out_i, out_x, out_y, out_z]);
    Ok((accept, PauliDist::new(oi, ox, oy, oz)?))
}

/// Guaranteed one-step decrease of total error for a 2-pair Z-basis check.
///
/// With eps = p_I + p_Z - 1/2 the gap equals
/// (p_Z - eps)(4 eps^2 + 4 p_Z - 1) / (1 + 4 eps^2), which is positive
/// whenever p_Z <= p_X, p_Z <= p_Y and the total error is below 1/2 (both
/// factors are then non-positive, each vanishing only at zero noise).
pub fn bdsw_error_gap(dist: &PauliDist) -> Result<f64> {
    let [_, px, py, pz] = dist.components();
    if pz > px || pz > py {
        return Err(Error::Domain(format!(
            "requires p_z <= p_x and p_z <= p_y, got p_x={px}, p_y={py}, p_z={pz}"
        )));
    }
    if dist.total_error() >= 0.5 {
        return Err(Error::Domain(format!(
            "requires total error below 1/2, got {}",
            dist.total_error()
        )));
    }
    let eps = dist.p_i + pz - 0.5;
    Ok((pz - eps) * (4.0 * eps * eps + 4.0 * pz - 1.0) / (1.0 + 4.0 * eps * eps))
}
