//! Quantum Tanner codes: qubits on the squares of a left-right Cayley complex,
//! Z-checks from `C_A ⊗ C_B` on V₀ local views and X-checks from
//! `C_A^⊥ ⊗ C_B^⊥` on V₁ local views.

use std::collections::BTreeMap;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::cayley_complex::{FiniteGroup, GeneratingSetPair, GroupSpec, LeftRightCayleyComplex};
use crate::error::{Error, Result};
use crate::gf2::{BitMatrix, BitVector, Echelon};
use crate::local_codes::{ClassicalCode, MAX_LOCAL_DELTA};

/// An assembled quantum Tanner code. Qubit `q` is square `q` of the complex.
#[derive(Debug)]
pub struct QuantumTannerCode {
    complex: LeftRightCayleyComplex,
    code_a: ClassicalCode,
    code_b: ClassicalCode,
    h_x: BitMatrix,
    h_z: BitMatrix,
    x_col_support: Vec<Vec<u32>>,
    z_col_support: Vec<Vec<u32>>,
    rank_x: usize,
    rank_z: usize,
    h_z_echelon: OnceLock<Echelon>,
    h_x_echelon: OnceLock<Echelon>,
}

/// Which kind of undetected logical operator was found.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Sector {
    /// `h_x·x = 0` and `x ∉ rowspace(h_z)`: a Z error invisible to the X checks.
    ZType,
    /// `h_z·x = 0` and `x ∉ rowspace(h_x)`.
    XType,
}

/// Outcome of the bounded-weight distance search.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DistanceCertificate {
    /// No logical operator of weight ≤ `lower_bound − 1` exists.
    AtLeast {
        lower_bound: usize,
    },
    LogicalFound {
        sector: Sector,
        operator: BitVector,
    },
}

/// Upper bound on the number of supports the distance search may visit.
pub const MAX_DISTANCE_SEARCH: u128 = 2_000_000_000;

fn column_supports(m: &BitMatrix) -> Vec<Vec<u32>> {
    let mut cols = vec![Vec::new(); m.num_cols()];
    for (r, row) in m.rows().iter().enumerate() {
        for c in row.iter_ones() {
            cols[c].push(r as u32);
        }
    }
    cols
}

impl QuantumTannerCode {
    /// Builds `h_z` from `G_A[i] ⊗ G_B[j]` at every V₀ vertex and `h_x` from
    /// `H_A[i] ⊗ H_B[j]` at every V₁ vertex, then verifies commutation.
    ///
    /// Row order: Z row `g·k_A·k_B + i·k_B + j`, X row `h·r_A·r_B + i·r_B + j`
    /// with `r_A = Δ − k_A`, `r_B = Δ − k_B`.
    pub fn assemble(complex: LeftRightCayleyComplex, code_a: ClassicalCode, code_b: ClassicalCode) -> Result<Self> {
        let delta = complex.delta();
        if code_a.blocklength() != delta || code_b.blocklength() != delta {
            return Err(Error::DimensionMismatch(format!(
                "local codes of blocklengths {} and {} on a complex with Δ = {delta}",
                code_a.blocklength(),
                code_b.blocklength()
            )));
        }
        if delta > MAX_LOCAL_DELTA {
            return Err(Error::SizeLimit(format!("Δ = {delta} above {MAX_LOCAL_DELTA}")));
        }
        let n = complex.num_squares();
        let groups = complex.num_group_elements();
        let embed = |view: &[u32], rows: &BitMatrix, cols: &BitMatrix, out: &mut Vec<BitVector>| {
            for ra in rows.rows() {
                for rb in cols.rows() {
                    let mut v = BitVector::zeros(n);
                    for a in ra.iter_ones() {
                        for b in rb.iter_ones() {
                            v.set(view[a * delta + b] as usize, true);
                        }
                    }
                    out.push(v);
                }
            }
        };
        let mut z_rows = Vec::with_capacity(groups * code_a.dimension() * code_b.dimension());
        let mut x_rows = Vec::new();
        for v in 0..groups {
            embed(complex.v0_view(v), code_a.generator(), code_b.generator(), &mut z_rows);
        }
        for v in 0..groups {
            embed(
                complex.v1_view(v),
                code_a.parity_check(),
                code_b.parity_check(),
                &mut x_rows,
            );
        }
        let h_z = BitMatrix::from_rows(n, z_rows)?;
        let h_x = BitMatrix::from_rows(n, x_rows)?;
        let x_col_support = column_supports(&h_x);
        let z_col_support = column_supports(&h_z);
        let code = Self {
            rank_x: h_x.rank(),
            rank_z: h_z.rank(),
            complex,
            code_a,
            code_b,
            h_x,
            h_z,
            x_col_support,
            z_col_support,
            h_z_echelon: OnceLock::new(),
            h_x_echelon: OnceLock::new(),
        };
        code.check_commutation()?;
        Ok(code)
    }

    /// Sparse check of `h_x·h_zᵀ = 0`; reports the first anticommuting pair.
    fn check_commutation(&self) -> Result<()> {
        let mut parity = vec![false; self.h_z.num_rows()];
        let mut touched = Vec::new();
        for (x_row, row) in self.h_x.rows().iter().enumerate() {
            for q in row.iter_ones() {
                for &z in &self.z_col_support[q] {
                    let z = z as usize;
                    if !parity[z] {
                        touched.push(z);
                    }
                    parity[z] = !parity[z];
                }
            }
            let bad = touched.iter().copied().find(|&z| parity[z]);
            for z in touched.drain(..) {
                parity[z] = false;
            }
            if let Some(z_row) = bad {
                return Err(Error::Commutation {
                    x_row,
                    z_row,
                    v1: x_row / self.x_rows_per_vertex().max(1),
                    v0: z_row / self.z_rows_per_vertex().max(1),
                });
            }
        }
        Ok(())
    }

    pub fn complex(&self) -> &LeftRightCayleyComplex {
        &self.complex
    }

    pub fn code_a(&self) -> &ClassicalCode {
        &self.code_a
    }

    pub fn code_b(&self) -> &ClassicalCode {
        &self.code_b
    }

    pub fn delta(&self) -> usize {
        self.complex.delta()
    }

    /// Number of physical qubits, `|Q|`.
    pub fn n(&self) -> usize {
        self.h_x.num_cols()
    }

    /// Number of logical qubits, `n − rank(h_x) − rank(h_z)`.
    pub fn k(&self) -> usize {
        self.n() - self.rank_x - self.rank_z
    }

    pub fn rank_x(&self) -> usize {
        self.rank_x
    }

    pub fn rank_z(&self) -> usize {
        self.rank_z
    }

    pub fn h_x(&self) -> &BitMatrix {
        &self.h_x
    }

    pub fn h_z(&self) -> &BitMatrix {
        &self.h_z
    }

    /// `r_A · r_B`, the syndrome bits owned by one V₁ vertex.
    pub fn x_rows_per_vertex(&self) -> usize {
        self.code_a.parity_check().num_rows() * self.code_b.parity_check().num_rows()
    }

    /// `k_A · k_B`, the Z checks owned by one V₀ vertex.
    pub fn z_rows_per_vertex(&self) -> usize {
        self.code_a.dimension() * self.code_b.dimension()
    }

    /// X-check rows touching qubit `q`.
    pub fn x_checks_of(&self, q: usize) -> &[u32] {
        &self.x_col_support[q]
    }

    /// Z-check rows touching qubit `q`.
    pub fn z_checks_of(&self, q: usize) -> &[u32] {
        &self.z_col_support[q]
    }

    /// The counting bound `n − #X rows − #Z rows`, which `k` always meets.
    pub fn dimension_lower_bound(&self) -> usize {
        self.n().saturating_sub(self.h_x.num_rows() + self.h_z.num_rows())
    }

    /// `σ = h_x·e`.
    pub fn syndrome(&self, e: &BitVector) -> Result<BitVector> {
        if e.len() != self.n() {
            return Err(Error::DimensionMismatch(format!(
                "error of length {} for a code on {} qubits",
                e.len(),
                self.n()
            )));
        }
        let mut s = BitVector::zeros(self.h_x.num_rows());
        for q in e.iter_ones() {
            for &r in &self.x_col_support[q] {
                s.flip(r as usize);
            }
        }
        Ok(s)
    }

    fn echelon_z(&self) -> &Echelon {
        self.h_z_echelon.get_or_init(|| self.h_z.echelon())
    }

    fn echelon_x(&self) -> &Echelon {
        self.h_x_echelon.get_or_init(|| self.h_x.echelon())
    }

    /// Whether `residual` lies in the row space of `h_z` (a Z stabilizer).
    pub fn is_stabilizer_equivalent(&self, residual: &BitVector) -> Result<bool> {
        if residual.len() != self.n() {
            return Err(Error::DimensionMismatch(format!(
                "vector of length {} for a code on {} qubits",
                residual.len(),
                self.n()
            )));
        }
        Ok(self.echelon_z().contains(residual))
    }

    /// Exhaustive search over supports of weight `1..=w_max` for a logical operator
    /// of either type, weight by weight.
    pub fn certify_distance_lower_bound(&self, w_max: usize) -> Result<DistanceCertificate> {
        self.certify(&[Sector::ZType, Sector::XType], w_max)
    }

    /// As [`QuantumTannerCode::certify_distance_lower_bound`], restricted to one sector.
    /// `ZType` alone bounds the weight of correctable Z errors.
    pub fn certify_sector_lower_bound(&self, sector: Sector, w_max: usize) -> Result<DistanceCertificate> {
        self.certify(&[sector], w_max)
    }

    fn certify(&self, sectors: &[Sector], w_max: usize) -> Result<DistanceCertificate> {
        let n = self.n();
        let visits: u128 = (1..=w_max.min(n)).map(|w| crate::gf2::binomial(n, w)).sum::<u128>() * sectors.len() as u128;
        if visits > MAX_DISTANCE_SEARCH {
            return Err(Error::SizeLimit(format!(
                "weight-{w_max} search over {n} qubits needs {visits} visits"
            )));
        }
        if self.k() == 0 {
            return Ok(DistanceCertificate::AtLeast { lower_bound: w_max + 1 });
        }
        let x_cols = column_words(&self.x_col_support, self.h_x.num_rows());
        let z_cols = column_words(&self.z_col_support, self.h_z.num_rows());
        for w in 1..=w_max.min(n) {
            for &sector in sectors {
                let (cols, stabilizers) = match sector {
                    Sector::ZType => (&x_cols, self.echelon_z()),
                    Sector::XType => (&z_cols, self.echelon_x()),
                };
                if let Some(op) = search_weight(n, w, cols, stabilizers) {
                    return Ok(DistanceCertificate::LogicalFound { sector, operator: op });
                }
            }
        }
        Ok(DistanceCertificate::AtLeast { lower_bound: w_max + 1 })
    }

    /// Serializes the code with the information needed to rebuild it.
    pub fn to_bundle(&self, seeds: BTreeMap<String, u64>) -> Bundle {
        let pair = self.complex.pair();
        Bundle {
            header: BundleHeader {
                n: self.n(),
                k: self.k(),
                delta: self.delta(),
                group: self.complex.group().descriptor().to_string(),
                group_order: self.complex.num_group_elements(),
                seeds,
            },
            gens_a: pair.gens_a.clone(),
            gens_b: pair.gens_b.clone(),
            code_a: self.code_a.to_text(),
            code_b: self.code_b.to_text(),
            h_x: self.h_x.to_text(),
            h_z: self.h_z.to_text(),
            qubits: self
                .complex
                .squares()
                .iter()
                .map(|s| [s.key.0, s.key.1, s.key.2])
                .collect(),
        }
    }

    pub fn to_bundle_json(&self, seeds: BTreeMap<String, u64>) -> String {
        serde_json::to_string_pretty(&self.to_bundle(seeds)).expect("bundle serializes")
    }

    /// Rebuilds a code from a bundle and checks it reproduces the stored matrices.
    pub fn from_bundle(bundle: &Bundle, group: Option<FiniteGroup>) -> Result<Self> {
        let group = match group {
            Some(g) => g,
            None => bundle.header.group.parse::<GroupSpec>()?.build()?,
        };
        if group.order() != bundle.header.group_order {
            return Err(Error::Parse(format!(
                "bundle group has order {}, rebuilt group has {}",
                bundle.header.group_order,
                group.order()
            )));
        }
        let pair = GeneratingSetPair {
            gens_a: bundle.gens_a.clone(),
            gens_b: bundle.gens_b.clone(),
        };
        let complex = LeftRightCayleyComplex::build(group, pair)?;
        let code_a = ClassicalCode::from_text(&bundle.code_a)?;
        let code_b = ClassicalCode::from_text(&bundle.code_b)?;
        let code = Self::assemble(complex, code_a, code_b)?;
        let stored_x = BitMatrix::from_text(&bundle.h_x)?;
        let stored_z = BitMatrix::from_text(&bundle.h_z)?;
        let keys: Vec<[usize; 3]> = code
            .complex
            .squares()
            .iter()
            .map(|s| [s.key.0, s.key.1, s.key.2])
            .collect();
        if stored_x != code.h_x || stored_z != code.h_z || keys != bundle.qubits {
            return Err(Error::Parse("bundle matrices do not match the rebuilt code".into()));
        }
        if code.n() != bundle.header.n || code.k() != bundle.header.k || code.delta() != bundle.header.delta {
            return Err(Error::Parse("bundle header does not match the rebuilt code".into()));
        }
        Ok(code)
    }

    pub fn from_bundle_json(json: &str) -> Result<Self> {
        let bundle: Bundle = serde_json::from_str(json).map_err(|e| Error::Parse(format!("bundle JSON: {e}")))?;
        Self::from_bundle(&bundle, None)
    }
}

fn column_words(cols: &[Vec<u32>], rows: usize) -> Vec<BitVector> {
    cols.iter()
        .map(|c| {
            let idx: Vec<usize> = c.iter().map(|&r| r as usize).collect();
            BitVector::from_indices(rows, &idx)
        })
        .collect()
}

/// Depth-first scan of weight-`w` supports in lexicographic order with running syndromes.
fn search_weight(n: usize, w: usize, cols: &[BitVector], stabilizers: &Echelon) -> Option<BitVector> {
    let len = cols.first().map_or(0, BitVector::len);
    let mut stack = vec![BitVector::zeros(len); w + 1];
    let mut chosen = Vec::with_capacity(w);
    fn rec(
        n: usize,
        w: usize,
        start: usize,
        cols: &[BitVector],
        stack: &mut Vec<BitVector>,
        chosen: &mut Vec<usize>,
        stabilizers: &Echelon,
    ) -> Option<BitVector> {
        let depth = chosen.len();
        if depth == w {
            if stack[depth].is_zero() {
                let x = BitVector::from_indices(n, chosen);
                if !stabilizers.contains(&x) {
                    return Some(x);
                }
            }
            return None;
        }
        for q in start..=n - (w - depth) {
            let next = stack[depth].xor(&cols[q]);
            stack[depth + 1] = next;
            chosen.push(q);
            if let Some(x) = rec(n, w, q + 1, cols, stack, chosen, stabilizers) {
                return Some(x);
            }
            chosen.pop();
        }
        None
    }
    rec(n, w, 0, cols, &mut stack, &mut chosen, stabilizers)
}

/// Serialized code: header, generators, local codes, check matrices and qubit table.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Bundle {
    pub header: BundleHeader,
    pub gens_a: Vec<usize>,
    pub gens_b: Vec<usize>,
    pub code_a: String,
    pub code_b: String,
    pub h_x: String,
    pub h_z: String,
    /// Canonical `(g, a, b)` key of each qubit, in qubit order.
    pub qubits: Vec<[usize; 3]>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BundleHeader {
    pub n: usize,
    pub k: usize,
    pub delta: usize,
    pub group: String,
    pub group_order: usize,
    pub seeds: BTreeMap<String, u64>,
}
