//! Code families, the sequence grammar, and the code catalog.
//!
//! Parity and repetition codes carry full stabilizer tableaux and are
//! simulable; Hamming and catalog entries are parameter-only records used by
//! the analytic model.

use std::fmt;
use std::path::Path;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::pauli::PauliOp;
use crate::{Error, Result};

/// Measurement basis of a classical repetition step.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Basis {
    X,
    Y,
    Z,
}

impl Basis {
    pub fn to_char(self) -> char {
        match self {
            Basis::X => 'X',
            Basis::Y => 'Y',
            Basis::Z => 'Z',
        }
    }
}

/// Code family with derived parameters.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum CodeKind {
    /// Classical [n,1,n] repetition code measured in one basis.
    Repetition { n: u32, basis: Basis },
    /// Quantum parity code [[n, n-2, 2]], n even.
    QuantumParity { n: u32 },
    /// Quantum Hamming code [[2^r, 2^r - r - 2, 3]].
    QuantumHamming { r: u32 },
    /// Parameter-only catalog entry.
    Catalog { n: u32, k: u32, d: u32, label: String },
}

/// A code selected for one distillation level.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CodeSpec {
    pub kind: CodeKind,
}

impl CodeSpec {
    pub fn repetition(n: u32, basis: Basis) -> Result<Self> {
        if !(2..=64).contains(&n) {
            return Err(Error::InvalidArgument {
                field: "n",
                msg: format!("repetition length must be in 2..=64, got {n}"),
            });
        }
        Ok(CodeSpec {
            kind: CodeKind::Repetition { n, basis },
        })
    }

    pub fn quantum_parity(n: u32) -> Result<Self> {
        if n < 4 || n % 2 != 0 {
            return Err(Error::InvalidArgument {
                field: "n",
                msg: format!("parity code length must be even and >= 4, got {n}"),
            });
        }
        Ok(CodeSpec {
            kind: CodeKind::QuantumParity { n },
        })
    }

    pub fn quantum_hamming(r: u32) -> Result<Self> {
        if !(3..=6).contains(&r) {
            return Err(Error::InvalidArgument {
                field: "r",
                msg: format!("Hamming parameter must be in 3..=6, got {r}"),
            });
        }
        Ok(CodeSpec {
            kind: CodeKind::QuantumHamming { r },
        })
    }

    pub fn catalog(n: u32, k: u32, d: u32, label: &str) -> Result<Self> {
        validate_quantum_params(n, k, d)?;
        Ok(CodeSpec {
            kind: CodeKind::Catalog {
                n,
                k,
                d,
                label: label.to_string(),
            },
        })
    }

    pub fn n(&self) -> u32 {
        match &self.kind {
            CodeKind::Repetition { n, .. } => *n,
            CodeKind::QuantumParity { n } => *n,
            CodeKind::QuantumHamming { r } => 1 << r,
            CodeKind::Catalog { n, .. } => *n,
        }
    }

    pub fn k(&self) -> u32 {
        match &self.kind {
            CodeKind::Repetition { .. } => 1,
            CodeKind::QuantumParity { n } => n - 2,
            CodeKind::QuantumHamming { r } => (1 << r) - r - 2,
            CodeKind::Catalog { k, .. } => *k,
        }
    }

    pub fn d(&self) -> u32 {
        match &self.kind {
            CodeKind::Repetition { n, .. } => *n,
            CodeKind::QuantumParity { .. } => 2,
            CodeKind::QuantumHamming { .. } => 3,
            CodeKind::Catalog { d, .. } => *d,
        }
    }

    pub fn is_classical(&self) -> bool {
        matches!(self.kind, CodeKind::Repetition { .. })
    }

    /// Grammar token: `r<n><basis>` for repetition, `q<n>.<k>.<d>` otherwise.
    pub fn id(&self) -> String {
        match &self.kind {
            CodeKind::Repetition { n, basis } => {
                format!("r{}{}", n, basis.to_char().to_ascii_lowercase())
            }
            _ => format!("q{}.{}.{}", self.n(), self.k(), self.d()),
        }
    }

    pub fn label(&self) -> &str {
        match &self.kind {
            CodeKind::Catalog { label, .. } => label,
            _ => "",
        }
    }

    /// Sort key for the canonical catalog order: classical codes first by
    /// ascending n then basis; quantum codes by ascending n, descending k,
    /// ascending d, then label.
    pub(crate) fn sort_key(&self) -> (u8, u32, u32, u32, u32, String) {
        match &self.kind {
            CodeKind::Repetition { n, basis } => (0, *n, *basis as u32, 0, 0, String::new()),
            _ => (
                1,
                self.n(),
                0,
                u32::MAX - self.k(),
                self.d(),
                self.label().to_string(),
            ),
        }
    }
}

impl fmt::Display for CodeSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.id())
    }
}

impl Serialize for CodeSpec {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.id())
    }
}

impl<'de> Deserialize<'de> for CodeSpec {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let token = String::deserialize(d)?;
        parse_token(&token).map_err(serde::de::Error::custom)
    }
}

fn validate_quantum_params(n: u32, k: u32, d: u32) -> Result<()> {
    if n < 2 || n > 1024 {
        return Err(Error::InvalidArgument {
            field: "n",
            msg: format!("block length must be in 2..=1024, got {n}"),
        });
    }
    if k < 1 {
        return Err(Error::InvalidArgument {
            field: "k",
            msg: "quantum codes must encode at least one qubit".into(),
        });
    }
    if d < 2 {
        return Err(Error::InvalidArgument {
            field: "d",
            msg: format!("quantum codes must detect at least one error, got d={d}"),
        });
    }
    if k + 2 * (d - 1) > n {
        return Err(Error::InvalidArgument {
            field: "k",
            msg: format!("parameters [[{n},{k},{d}]] violate k <= n - 2(d-1)"),
        });
    }
    Ok(())
}

/// Classify explicit (n, k, d) from a `q` token into a known family.
fn classify_quantum(n: u32, k: u32, d: u32) -> Result<CodeSpec> {
    if d == 2 && n >= 4 && n % 2 == 0 && k == n - 2 {
        return CodeSpec::quantum_parity(n);
    }
    if d == 3 && n.is_power_of_two() {
        let r = n.trailing_zeros();
        if (3..=6).contains(&r) && k == n - r - 2 {
            return CodeSpec::quantum_hamming(r);
        }
    }
    CodeSpec::catalog(n, k, d, "")
}

/// Parse one sequence token, e.g. `r3X` or `q16.14.2` (case-insensitive).
pub fn parse_token(token: &str) -> Result<CodeSpec> {
    let t = token.trim();
    let err = |msg: &str| Error::SequenceParse {
        index: 0,
        token: token.to_string(),
        msg: msg.to_string(),
    };
    let lower = t.to_ascii_lowercase();
    if let Some(rest) = lower.strip_prefix('r') {
        if rest.len() < 2 {
            return Err(err("expected r<n><x|y|z>"));
        }
        let (num, basis) = rest.split_at(rest.len() - 1);
        let n: u32 = num.parse().map_err(|_| err("bad repetition length"))?;
        let basis = match basis {
            "x" => Basis::X,
            "y" => Basis::Y,
            "z" => Basis::Z,
            _ => return Err(err("basis must be one of x, y, z")),
        };
        return CodeSpec::repetition(n, basis).map_err(|e| err(&e.to_string()));
    }
    if let Some(rest) = lower.strip_prefix('q') {
        let parts: Vec<&str> = rest.split('.').collect();
        if parts.len() != 3 {
            return Err(err("expected q<n>.<k>.<d>"));
        }
        let nums: Vec<u32> = parts
            .iter()
            .map(|p| p.parse::<u32>())
            .collect::<std::result::Result<_, _>>()
            .map_err(|_| err("parameters must be integers"))?;
        return classify_quantum(nums[0], nums[1], nums[2]).map_err(|e| err(&e.to_string()));
    }
    Err(err("token must start with r or q"))
}

/// Parse a comma-separated sequence; an empty string is the empty sequence.
pub fn parse_sequence(s: &str) -> Result<Vec<CodeSpec>> {
    let trimmed = s.trim();
    if trimmed.is_empty() {
        return Ok(Vec::new());
    }
    trimmed
        .split(',')
        .enumerate()
        .map(|(i, tok)| {
            parse_token(tok).map_err(|e| match e {
                Error::SequenceParse { token, msg, .. } => Error::SequenceParse {
                    index: i,
                    token,
                    msg,
                },
                other => other,
            })
        })
        .collect()
}

/// Stabilizer tableau for a simulable code.
#[derive(Debug, Clone)]
pub struct StabilizerCode {
    pub spec: CodeSpec,
    pub n: u32,
    pub k: u32,
    pub d: u32,
    pub stabilizers: Vec<PauliOp>,
    pub logical_x: Vec<PauliOp>,
    pub logical_z: Vec<PauliOp>,
}

impl StabilizerCode {
    /// Validate internal commutation relations; used by constructors and tests.
    pub fn check_consistency(&self) -> Result<()> {
        let r = self.stabilizers.len() as u32;
        if r + self.k != self.n {
            return Err(Error::Domain(format!(
                "tableau rank mismatch: {} stabilizers with k={} on n={}",
                r, self.k, self.n
            )));
        }
        for (i, s) in self.stabilizers.iter().enumerate() {
            for (j, t) in self.stabilizers.iter().enumerate() {
                if i < j && !s.commutes(t) {
                    return Err(Error::Domain(format!(
                        "stabilizers {i} and {j} anticommute"
                    )));
                }
            }
        }
        for j in 0..self.k as usize {
            for s in &self.stabilizers {
                if !s.commutes(&self.logical_x[j]) || !s.commutes(&self.logical_z[j]) {
                    return Err(Error::Domain(format!(
                        "logical pair {j} does not commute with the stabilizers"
                    )));
                }
            }
            for m in 0..self.k as usize {
                let want_anti = (j == m) as u8;
                if self.logical_x[j].sym_product(&self.logical_z[m]) != want_anti {
                    return Err(Error::Domain(format!(
                        "logical commutation wrong between X[{j}] and Z[{m}]"
                    )));
                }
                if m > j
                    && (!self.logical_x[j].commutes(&self.logical_x[m])
                        || !self.logical_z[j].commutes(&self.logical_z[m]))
                {
                    return Err(Error::Domain(format!(
                        "logical operators {j} and {m} anticommute"
                    )));
                }
            }
        }
        Ok(())
    }
}

/// Quantum parity code [[n, n-2, 2]] with stabilizers X^n and Z^n.
///
/// Logical slots are qubits 0..n-3; the canonical pair for slot j is
/// X_j X_{n-2} and Z_j Z_{n-1}.
pub fn parity_code(n: u32) -> Result<StabilizerCode> {
    let spec = CodeSpec::quantum_parity(n)?;
    if n > 64 {
        return Err(Error::InvalidArgument {
            field: "n",
            msg: format!("tableau construction limited to n <= 64, got {n}"),
        });
    }
    let k = n - 2;
    let all = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
    let stabilizers = vec![PauliOp::new(n, all, 0)?, PauliOp::new(n, 0, all)?];
    let mut logical_x = Vec::with_capacity(k as usize);
    let mut logical_z = Vec::with_capacity(k as usize);
    for j in 0..k {
        logical_x.push(PauliOp::new(n, (1 << j) | (1 << (n - 2)), 0)?);
        logical_z.push(PauliOp::new(n, 0, (1 << j) | (1 << (n - 1)))?);
    }
    let code = StabilizerCode {
        spec,
        n,
        k,
        d: 2,
        stabilizers,
        logical_x,
        logical_z,
    };
    code.check_consistency()?;
    Ok(code)
}

/// Repetition code tableau in the given basis.
///
/// The Z-basis code has stabilizers Z_i Z_{i+1}, logical Z = Z_0 and logical
/// X = X^n; the X and Y variants are qubit-wise relabelings of that tableau.
pub fn repetition_code(n: u32, basis: Basis) -> Result<StabilizerCode> {
    let spec = CodeSpec::repetition(n, basis)?;
    let relabel = |op: PauliOp| -> PauliOp {
        match basis {
            Basis::Z => op,
            // Swap the X and Z components (H image): Z-chain -> X-chain.
            Basis::X => PauliOp {
                n: op.n,
                x_bits: op.z_bits,
                z_bits: op.x_bits,
            },
            // Map Z -> Y (X stays X): new x = x XOR z, z unchanged.
            Basis::Y => PauliOp {
                n: op.n,
                x_bits: op.x_bits ^ op.z_bits,
                z_bits: op.z_bits,
            },
        }
    };
    let all = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
    let mut stabilizers = Vec::with_capacity(n as usize - 1);
    for i in 0..n - 1 {
        stabilizers.push(relabel(PauliOp::new(n, 0, 0b11 << i)?));
    }
    let logical_z = vec![relabel(PauliOp::new(n, 0, 1)?)];
    let logical_x = vec![relabel(PauliOp::new(n, all, 0)?)];
    let code = StabilizerCode {
        spec,
        n,
        k: 1,
        d: n,
        stabilizers,
        logical_x,
        logical_z,
    };
    code.check_consistency()?;
    Ok(code)
}

/// Build the tableau for a simulable spec.
pub fn instantiate(spec: &CodeSpec) -> Result<StabilizerCode> {
    match &spec.kind {
        CodeKind::Repetition { n, basis } => repetition_code(*n, *basis),
        CodeKind::QuantumParity { n } => parity_code(*n),
        _ => Err(Error::NotSimulable { id: spec.id() }),
    }
}

/// Syndrome bits of `e`: bit i is set iff `e` anticommutes with stabilizer i.
pub fn syndrome(code: &StabilizerCode, e: &PauliOp) -> Result<u64> {
    if e.n != code.n {
        return Err(Error::InvalidArgument {
            field: "e",
            msg: format!("operator width {} does not match code n={}", e.n, code.n),
        });
    }
    let mut s = 0u64;
    for (i, stab) in code.stabilizers.iter().enumerate() {
        s |= (stab.sym_product(e) as u64) << i;
    }
    Ok(s)
}

/// Residual logical action of a zero-syndrome error, as a k-qubit Pauli.
///
/// Bit j of the X (Z) component is set iff `e` anticommutes with the logical
/// Z (X) operator of slot j.
pub fn logical_effect(code: &StabilizerCode, e: &PauliOp) -> Result<PauliOp> {
    if syndrome(code, e)? != 0 {
        return Err(Error::Domain(
            "logical_effect requires a zero-syndrome operator".into(),
        ));
    }
    let mut x = 0u64;
    let mut z = 0u64;
    for j in 0..code.k as usize {
        x |= (code.logical_z[j].sym_product(e) as u64) << j;
        z |= (code.logical_x[j].sym_product(e) as u64) << j;
    }
    PauliOp::new(code.k, x, z)
}

/// Map a residual from the logical frame into the physical frame of the
/// surviving qubits. X- and Y-basis repetition checks rotate into the Z
/// basis and back, so their outputs pick up the same relabeling as their
/// stabilizers; every other family keeps the standard frame.
pub fn residual_to_output_frame(code: &StabilizerCode, eff: PauliOp) -> PauliOp {
    match code.spec.kind {
        CodeKind::Repetition { basis: Basis::X, .. } => PauliOp {
            n: eff.n,
            x_bits: eff.z_bits,
            z_bits: eff.x_bits,
        },
        CodeKind::Repetition { basis: Basis::Y, .. } => PauliOp {
            n: eff.n,
            x_bits: eff.x_bits ^ eff.z_bits,
            z_bits: eff.z_bits,
        },
        _ => eff,
    }
}

/// An ordered set of codes available to the optimizer.
#[derive(Debug, Clone)]
pub struct CodeCatalog {
    pub entries: Vec<CodeSpec>,
    pub provenance: String,
}

impl CodeCatalog {
    /// Build a catalog from explicit entries, rejecting duplicates and
    /// sorting into canonical order (classical first).
    pub fn from_entries(entries: Vec<CodeSpec>, provenance: &str) -> Result<Self> {
        let tagged = entries.into_iter().map(|s| (0usize, s)).collect();
        finalize_catalog(tagged, provenance.to_string())
    }
}

const CURATED_CSV: &str = include_str!(concat!(
    env!("CARGO_MANIFEST_DIR"),
    "/../../data/catalog.csv"
));

/// Generated families: repetition n=2..12 in all bases, parity n=4..40 even,
/// Hamming r=3..6.
fn generated_families() -> Vec<CodeSpec> {
    let mut v = Vec::new();
    for n in 2..=12 {
        for basis in [Basis::X, Basis::Y, Basis::Z] {
            v.push(CodeSpec::repetition(n, basis).unwrap());
        }
    }
    for n in (4..=40).step_by(2) {
        v.push(CodeSpec::quantum_parity(n).unwrap());
    }
    for r in 3..=6 {
        v.push(CodeSpec::quantum_hamming(r).unwrap());
    }
    v
}

fn parse_catalog_csv(text: &str) -> Result<Vec<(usize, CodeSpec)>> {
    let mut out = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.trim_end_matches('\r');
        let content = match line.find('#') {
            Some(pos) => &line[..pos],
            None => line,
        };
        let content = content.trim();
        if content.is_empty() {
            continue;
        }
        let fields: Vec<&str> = content.split(',').map(str::trim).collect();
        if fields.len() < 3 || fields.len() > 4 {
            return Err(Error::CatalogParse {
                line: line_no,
                msg: format!("expected n,k,d[,label], got {} fields", fields.len()),
            });
        }
        let mut nums = [0u32; 3];
        for (i, f) in fields[..3].iter().enumerate() {
            nums[i] = f.parse().map_err(|_| Error::CatalogParse {
                line: line_no,
                msg: format!("field {} (`{}`) is not a positive integer", i + 1, f),
            })?;
        }
        let label = fields.get(3).copied().unwrap_or("");
        let spec =
            CodeSpec::catalog(nums[0], nums[1], nums[2], label).map_err(|e| Error::CatalogParse {
                line: line_no,
                msg: e.to_string(),
            })?;
        out.push((line_no, spec));
    }
    Ok(out)
}

/// Duplicate key: kind discriminant plus (n, k, d, basis); labels excluded.
fn dup_key(spec: &CodeSpec) -> (u8, u32, u32, u32, u8) {
    match &spec.kind {
        CodeKind::Repetition { n, basis } => (0, *n, 1, *n, *basis as u8),
        CodeKind::QuantumParity { .. } => (1, spec.n(), spec.k(), spec.d(), 0),
        CodeKind::QuantumHamming { .. } => (2, spec.n(), spec.k(), spec.d(), 0),
        CodeKind::Catalog { .. } => (3, spec.n(), spec.k(), spec.d(), 0),
    }
}

fn finalize_catalog(
    tagged: Vec<(usize, CodeSpec)>,
    provenance: String,
) -> Result<CodeCatalog> {
    let mut seen: std::collections::HashMap<(u8, u32, u32, u32, u8), usize> =
        std::collections::HashMap::new();
    for (line, spec) in &tagged {
        if let Some(prev) = seen.insert(dup_key(spec), *line) {
            return Err(Error::CatalogInvalid(format!(
                "duplicate entry `{}` (lines {} and {})",
                spec.id(),
                prev,
                line
            )));
        }
    }
    let mut entries: Vec<CodeSpec> = tagged.into_iter().map(|(_, s)| s).collect();
    entries.sort_by(|a, b| a.sort_key().cmp(&b.sort_key()));
    Ok(CodeCatalog {
        entries,
        provenance,
    })
}

/// The built-in catalog: generated families plus the curated entries shipped
/// in `data/catalog.csv`.
pub fn builtin_catalog() -> CodeCatalog {
    let mut tagged: Vec<(usize, CodeSpec)> = generated_families()
        .into_iter()
        .map(|s| (0usize, s))
        .collect();
    tagged.extend(parse_catalog_csv(CURATED_CSV).expect("embedded catalog parses"));
    finalize_catalog(tagged, "builtin".to_string()).expect("embedded catalog is valid")
}

/// Load a catalog from an optional CSV path.
///
/// With a path, the file's entries are combined with the generated families
/// unless `include_builtin` is false. Without a path, the built-in catalog is
/// returned (empty when `include_builtin` is false).
pub fn load_catalog(path: Option<&Path>, include_builtin: bool) -> Result<CodeCatalog> {
    match path {
        None => {
            if include_builtin {
                Ok(builtin_catalog())
            } else {
                Ok(CodeCatalog {
                    entries: Vec::new(),
                    provenance: "none".to_string(),
                })
            }
        }
        Some(p) => {
            let text = std::fs::read_to_string(p)?;
            let mut tagged = parse_catalog_csv(&text)?;
            if include_builtin {
                tagged.extend(generated_families().into_iter().map(|s| (0usize, s)));
            }
            finalize_catalog(tagged, p.display().to_string())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ids_follow_grammar() {
        assert_eq!(
            CodeSpec::repetition(3, Basis::X).unwrap().id(),
            "r3x".to_string()
        );
        assert_eq!(CodeSpec::quantum_parity(16).unwrap().id(), "q16.14.2");
        assert_eq!(CodeSpec::quantum_hamming(3).unwrap().id(), "q8.3.3");
        assert_eq!(CodeSpec::catalog(5, 1, 3, "perfect").unwrap().id(), "q5.1.3");
    }

    #[test]
    fn token_classification() {
        assert!(matches!(
            parse_token("q4.2.2").unwrap().kind,
            CodeKind::QuantumParity { n: 4 }
        ));
        assert!(matches!(
            parse_token("Q8.3.3").unwrap().kind,
            CodeKind::QuantumHamming { r: 3 }
        ));
        assert!(matches!(
            parse_token("q5.1.3").unwrap().kind,
            CodeKind::Catalog { n: 5, k: 1, d: 3, .. }
        ));
        assert!(matches!(
            parse_token("R2y").unwrap().kind,
            CodeKind::Repetition { n: 2, basis: Basis::Y }
        ));
    }

    #[test]
    fn hamming_parameters() {
        for (r, n, k) in [(3, 8, 3), (4, 16, 10), (5, 32, 25), (6, 64, 56)] {
            let c = CodeSpec::quantum_hamming(r).unwrap();
            assert_eq!((c.n(), c.k(), c.d()), (n, k, 3));
        }
    }

    #[test]
    fn singleton_bound_enforced() {
        assert!(CodeSpec::catalog(4, 3, 2, "").is_err());
        assert!(CodeSpec::catalog(4, 2, 2, "").is_ok());
        assert!(CodeSpec::catalog(5, 1, 3, "").is_ok());
        assert!(CodeSpec::catalog(5, 2, 3, "").is_err());
        assert!(CodeSpec::catalog(5, 0, 3, "").is_err());
    }
}
