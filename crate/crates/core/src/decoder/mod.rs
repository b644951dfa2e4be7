//! Potential-function decoder for X-syndromes of a quantum Tanner code.
//!
//! The local potential at a V₁ vertex is the distance of the local view of the
//! error to `C_A ⊗ F + F ⊗ C_B`, read off a coset table from the local syndrome.
//! Decoding repeatedly flips a set of qubits inside one local view that strictly
//! lowers the total potential, until it reaches zero or no such flip is found.
//!
//! Vertex ids: V₀ vertex `g` is `g`, V₁ vertex `h` is `|G| + h`.

mod diagnostics;
mod table;

use std::fmt;
use std::ops::ControlFlow;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

pub use diagnostics::{check_r_flipping, diagnostics, error_potential, Diagnostics, RFlipVerdict};
pub use table::{build_coset_table, LocalCosetTable, MAX_SYNDROME_BITS, MAX_TABLE_ENUMERATION};

use crate::error::{Error, Result};
use crate::gf2::{binomial, BitVector};
use crate::local_codes::{place_col, place_row};
use crate::qtc::QuantumTannerCode;
use table::for_each_subset_xor;

/// Largest Δ for which exact mode enumerates all `2^{Δ²}` local flips.
pub const MAX_EXACT_DELTA: usize = 5;

/// Budget for the low-weight local codeword enumeration.
pub const MAX_CODEWORD_ENUMERATION: u128 = 200_000_000;

const MAX_SLOTS: usize = 1 + 64;

/// Flip search strategy.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DecoderMode {
    /// Every nonzero flip on every local view, weight-major.
    Exact,
    /// Single qubits, coset-leader moves at V₁ vertices, and column/row codeword moves at V₀ vertices.
    Structured,
}

impl fmt::Display for DecoderMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            DecoderMode::Exact => "exact",
            DecoderMode::Structured => "structured",
        })
    }
}

impl FromStr for DecoderMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "exact" => Ok(DecoderMode::Exact),
            "structured" => Ok(DecoderMode::Structured),
            _ => Err(Error::InvalidArgument(format!("unknown decoder mode {s:?}"))),
        }
    }
}

/// A local flip: a mask over the Δ×Δ view of `vertex`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Flip {
    pub vertex: usize,
    pub z: u64,
    pub delta_u: i64,
}

/// Mutable decoding state: local syndromes, potentials, and the correction so far.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DecoderState {
    syndromes: Vec<u32>,
    potentials: Vec<u8>,
    total: usize,
    correction: BitVector,
}

impl DecoderState {
    /// Global potential `U = Σ_v U_v`.
    pub fn potential(&self) -> usize {
        self.total
    }

    /// Local potential of V₁ vertex `h` (indexed within V₁).
    pub fn local_potential(&self, h: usize) -> usize {
        self.potentials[h] as usize
    }

    /// Packed local syndrome of V₁ vertex `h`.
    pub fn local_syndrome(&self, h: usize) -> u32 {
        self.syndromes[h]
    }

    pub fn correction(&self) -> &BitVector {
        &self.correction
    }

    pub fn is_solved(&self) -> bool {
        self.total == 0
    }
}

/// How a decoding run ended.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DecodeStatus {
    Success,
    /// No decreasing flip was found.
    Stalled,
    IterationLimit,
}

/// One accepted flip, as logged by the trace.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TraceStep {
    pub iteration: usize,
    pub vertex: usize,
    pub delta_u: i64,
    pub weight: usize,
    pub potential_after: usize,
}

impl fmt::Display for TraceStep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} {} {} {} {}",
            self.iteration, self.vertex, self.delta_u, self.weight, self.potential_after
        )
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DecodeOutcome {
    pub status: DecodeStatus,
    pub correction: BitVector,
    pub iterations: usize,
    pub initial_potential: usize,
    pub remaining_potential: usize,
    pub trace: Vec<TraceStep>,
}

impl DecodeOutcome {
    pub fn succeeded(&self) -> bool {
        self.status == DecodeStatus::Success
    }

    /// The trace as text, one `iter vertex ΔU |z| U_after` line per flip.
    pub fn trace_text(&self) -> String {
        self.trace.iter().map(|s| format!("{s}\n")).collect()
    }
}

/// Decoder tables for one code. Read-only after construction and shareable
/// across threads; each decoding run owns its [`DecoderState`].
#[derive(Debug)]
pub struct Decoder<'a> {
    code: &'a QuantumTannerCode,
    table: LocalCosetTable,
    /// For each qubit, its two V₁ corners with the local position there.
    v1_incidence: Vec<[(u32, u8); 2]>,
    /// For each qubit, its lower V₀ corner with the local position there.
    v0_home: Vec<(u32, u8)>,
    /// Per vertex, the V₁ vertices whose syndromes its local flips touch.
    slots: Vec<Vec<u32>>,
    /// Per vertex and local position, the `(slot, syndrome mask)` pairs a flip there changes.
    effects: Vec<Vec<[(u8, u32); 2]>>,
    low_weight_codewords: Vec<u64>,
    column_words: Vec<u64>,
    row_words: Vec<u64>,
}

impl<'a> Decoder<'a> {
    /// Decoder with the low-weight codeword cap `2·min(d_A, d_B)`.
    pub fn new(code: &'a QuantumTannerCode) -> Result<Self> {
        let d = code.code_a().min_distance()?.min(code.code_b().min_distance()?);
        Self::with_codeword_cap(code, 2 * d)
    }

    pub fn with_codeword_cap(code: &'a QuantumTannerCode, cap: usize) -> Result<Self> {
        let table = LocalCosetTable::build(code.code_a(), code.code_b())?;
        let complex = code.complex();
        let delta = code.delta();
        let m = delta * delta;
        let groups = complex.num_group_elements();
        let n = code.n();

        let mut v1_lists: Vec<Vec<(u32, u8)>> = vec![Vec::with_capacity(2); n];
        let mut v0_home = vec![(u32::MAX, 0u8); n];
        for h in 0..groups {
            for (p, &q) in complex.v1_view(h).iter().enumerate() {
                v1_lists[q as usize].push((h as u32, p as u8));
            }
        }
        for g in (0..groups).rev() {
            for (p, &q) in complex.v0_view(g).iter().enumerate() {
                v0_home[q as usize] = (g as u32, p as u8);
            }
        }
        let v1_incidence = v1_lists
            .into_iter()
            .enumerate()
            .map(|(q, l)| {
                <[(u32, u8); 2]>::try_from(l)
                    .map_err(|l| Error::Invariant(format!("qubit {q} lies in {} V1 views", l.len())))
            })
            .collect::<Result<Vec<_>>>()?;

        let pos = table.position_syndromes();
        let mut slots = Vec::with_capacity(2 * groups);
        let mut effects = Vec::with_capacity(2 * groups);
        for v in 0..2 * groups {
            let view = if v < groups {
                complex.v0_view(v)
            } else {
                complex.v1_view(v - groups)
            };
            let mut vs: Vec<u32> = Vec::new();
            let mut eff = Vec::with_capacity(m);
            for &q in view {
                let mut pair = [(0u8, 0u32); 2];
                for (k, &(h, p)) in v1_incidence[q as usize].iter().enumerate() {
                    let slot = match vs.iter().position(|&x| x == h) {
                        Some(i) => i,
                        None => {
                            vs.push(h);
                            vs.len() - 1
                        }
                    };
                    pair[k] = (slot as u8, pos[p as usize]);
                }
                eff.push(pair);
            }
            if vs.len() > MAX_SLOTS {
                return Err(Error::Invariant(format!("vertex {v} touches {} V1 vertices", vs.len())));
            }
            slots.push(vs);
            effects.push(eff);
        }

        let visits: u128 = (1..=cap.min(m)).map(|w| binomial(m, w)).sum();
        if visits > MAX_CODEWORD_ENUMERATION {
            return Err(Error::SizeLimit(format!(
                "low-weight codeword enumeration up to weight {cap} needs {visits} matrices"
            )));
        }
        let mut low_weight_codewords = Vec::new();
        for w in 1..=cap.min(m) {
            let _ = for_each_subset_xor(pos, w, &mut |support, s| {
                if s == 0 {
                    low_weight_codewords.push(support);
                }
                ControlFlow::Continue(())
            });
        }

        let words_a = code.code_a().codewords()?;
        let words_b = code.code_b().codewords()?;
        let column_words = (0..delta)
            .flat_map(|b| {
                words_a
                    .iter()
                    .filter(|&&w| w != 0)
                    .map(move |&w| place_col(delta, w, b))
            })
            .collect();
        let row_words = (0..delta)
            .flat_map(|a| {
                words_b
                    .iter()
                    .filter(|&&w| w != 0)
                    .map(move |&w| place_row(delta, w, a))
            })
            .collect();

        Ok(Self {
            code,
            table,
            v1_incidence,
            v0_home,
            slots,
            effects,
            low_weight_codewords,
            column_words,
            row_words,
        })
    }

    pub fn code(&self) -> &QuantumTannerCode {
        self.code
    }

    pub fn table(&self) -> &LocalCosetTable {
        &self.table
    }

    pub fn num_vertices(&self) -> usize {
        2 * self.code.complex().num_group_elements()
    }

    /// Nonzero codewords of `C_A ⊗ F + F ⊗ C_B` up to the weight cap, as local masks.
    pub fn low_weight_codewords(&self) -> &[u64] {
        &self.low_weight_codewords
    }

    /// Squares of the local view of `vertex`, by local position.
    pub fn view(&self, vertex: usize) -> &[u32] {
        let groups = self.code.complex().num_group_elements();
        if vertex < groups {
            self.code.complex().v0_view(vertex)
        } else {
            self.code.complex().v1_view(vertex - groups)
        }
    }

    /// Slices `σ` into per-V₁-vertex syndromes and looks up the potentials.
    pub fn init_state(&self, sigma: &BitVector) -> Result<DecoderState> {
        let groups = self.code.complex().num_group_elements();
        let bits = self.table.syndrome_bits();
        if sigma.len() != groups * bits {
            return Err(Error::DimensionMismatch(format!(
                "syndrome of length {}, expected {}",
                sigma.len(),
                groups * bits
            )));
        }
        let mut syndromes = vec![0u32; groups];
        for r in sigma.iter_ones() {
            syndromes[r / bits] |= 1 << (r % bits);
        }
        let potentials: Vec<u8> = syndromes.iter().map(|&s| self.table.potential(s)).collect();
        let total = potentials.iter().map(|&p| p as usize).sum();
        Ok(DecoderState {
            syndromes,
            potentials,
            total,
            correction: BitVector::zeros(self.code.n()),
        })
    }

    /// Change in `U` from flipping `z` on the view of `vertex`.
    pub fn evaluate(&self, state: &DecoderState, vertex: usize, z: u64) -> i64 {
        let slots = &self.slots[vertex];
        let effects = &self.effects[vertex];
        let mut acc = [0u32; MAX_SLOTS];
        let mut m = z;
        while m != 0 {
            let p = m.trailing_zeros() as usize;
            m &= m - 1;
            for &(slot, mask) in &effects[p] {
                acc[slot as usize] ^= mask;
            }
        }
        let mut delta = 0i64;
        for (i, &h) in slots.iter().enumerate() {
            if acc[i] != 0 {
                let s = state.syndromes[h as usize];
                delta += self.table.potential(s ^ acc[i]) as i64 - state.potentials[h as usize] as i64;
            }
        }
        delta
    }

    fn is_active(&self, state: &DecoderState, vertex: usize) -> bool {
        self.slots[vertex].iter().any(|&h| state.potentials[h as usize] > 0)
    }

    /// First flip that strictly lowers `U`, or `None`. Vertices are scanned in
    /// ascending id; vertices whose touched potentials are all zero are skipped,
    /// since no flip there can lower `U`.
    pub fn find_flip(&self, state: &DecoderState, mode: DecoderMode) -> Result<Option<Flip>> {
        match mode {
            DecoderMode::Exact => self.find_exact(state),
            DecoderMode::Structured => Ok(self.find_structured(state)),
        }
    }

    fn find_exact(&self, state: &DecoderState) -> Result<Option<Flip>> {
        let delta = self.code.delta();
        if delta > MAX_EXACT_DELTA {
            return Err(Error::SizeLimit(format!(
                "exact flip search enumerates 2^{} flips per view (Δ = {delta} above {MAX_EXACT_DELTA})",
                delta * delta
            )));
        }
        for v in 0..self.num_vertices() {
            if !self.is_active(state, v) {
                continue;
            }
            if let Some(flip) = self.exact_at(state, v) {
                return Ok(Some(flip));
            }
        }
        Ok(None)
    }

    fn exact_at(&self, state: &DecoderState, vertex: usize) -> Option<Flip> {
        struct Search<'s> {
            effects: &'s [[(u8, u32); 2]],
            table: &'s LocalCosetTable,
            cur: Vec<u32>,
            delta: i64,
        }
        impl Search<'_> {
            fn toggle(&mut self, p: usize) {
                for &(slot, mask) in &self.effects[p] {
                    let old = self.cur[slot as usize];
                    let new = old ^ mask;
                    self.delta += self.table.potential(new) as i64 - self.table.potential(old) as i64;
                    self.cur[slot as usize] = new;
                }
            }
            fn rec(&mut self, start: usize, left: usize, support: u64) -> Option<(u64, i64)> {
                if left == 0 {
                    return (self.delta < 0).then_some((support, self.delta));
                }
                for p in start..=self.effects.len() - left {
                    self.toggle(p);
                    let found = self.rec(p + 1, left - 1, support | 1 << p);
                    self.toggle(p);
                    if found.is_some() {
                        return found;
                    }
                }
                None
            }
        }
        let mut search = Search {
            effects: &self.effects[vertex],
            table: &self.table,
            cur: self.slots[vertex]
                .iter()
                .map(|&h| state.syndromes[h as usize])
                .collect(),
            delta: 0,
        };
        let m = search.effects.len();
        (1..=m)
            .find_map(|w| search.rec(0, w, 0))
            .map(|(z, delta_u)| Flip { vertex, z, delta_u })
    }

    fn find_structured(&self, state: &DecoderState) -> Option<Flip> {
        let groups = self.code.complex().num_group_elements();
        // Single qubits.
        for (q, corners) in self.v1_incidence.iter().enumerate() {
            let mut delta = 0i64;
            for &(h, p) in corners {
                let s = state.syndromes[h as usize];
                let t = s ^ self.table.position_syndromes()[p as usize];
                delta += self.table.potential(t) as i64 - self.table.potential(s) as i64;
            }
            if delta < 0 {
                let (g, p) = self.v0_home[q];
                return Some(Flip {
                    vertex: g as usize,
                    z: 1 << p,
                    delta_u: delta,
                });
            }
        }
        let try_at = |vertex: usize, z: u64| {
            let delta_u = self.evaluate(state, vertex, z);
            (z != 0 && delta_u < 0).then_some(Flip { vertex, z, delta_u })
        };
        // Coset leaders at V1 vertices, shifted by low-weight local codewords.
        for h in 0..groups {
            if state.potentials[h] == 0 {
                continue;
            }
            let vertex = groups + h;
            let leader = self.table.leader(state.syndromes[h]);
            if let Some(f) = try_at(vertex, leader) {
                return Some(f);
            }
            for &c in &self.low_weight_codewords {
                if let Some(f) = try_at(vertex, leader ^ c) {
                    return Some(f);
                }
            }
        }
        // Column and row codewords at V0 vertices, and their pairwise sums.
        for g in 0..groups {
            if !self.is_active(state, g) {
                continue;
            }
            for &z in self.column_words.iter().chain(&self.row_words) {
                if let Some(f) = try_at(g, z) {
                    return Some(f);
                }
            }
            for &c in &self.column_words {
                for &r in &self.row_words {
                    if let Some(f) = try_at(g, c ^ r) {
                        return Some(f);
                    }
                }
            }
        }
        None
    }

    /// Applies `z` on the view of `vertex`, updating only the touched V₁
    /// syndromes. Returns the change in `U`.
    pub fn apply_flip(&self, state: &mut DecoderState, vertex: usize, z: u64) -> Result<i64> {
        let m = self.code.delta() * self.code.delta();
        if vertex >= self.num_vertices() || (m < 64 && z >> m != 0) {
            return Err(Error::SupportViolation { vertex });
        }
        let slots = &self.slots[vertex];
        let effects = &self.effects[vertex];
        let view = self.view(vertex);
        let mut acc = [0u32; MAX_SLOTS];
        let mut bits = z;
        while bits != 0 {
            let p = bits.trailing_zeros() as usize;
            bits &= bits - 1;
            state.correction.flip(view[p] as usize);
            for &(slot, mask) in &effects[p] {
                acc[slot as usize] ^= mask;
            }
        }
        let mut delta = 0i64;
        for (i, &h) in slots.iter().enumerate() {
            if acc[i] != 0 {
                let h = h as usize;
                let s = state.syndromes[h] ^ acc[i];
                let u = self.table.potential(s);
                delta += u as i64 - state.potentials[h] as i64;
                state.syndromes[h] = s;
                state.potentials[h] = u;
            }
        }
        state.total = (state.total as i64 + delta) as usize;
        Ok(delta)
    }

    /// Runs the flip loop on `σ` for at most `max_iters` flips.
    pub fn decode(&self, sigma: &BitVector, mode: DecoderMode, max_iters: usize) -> Result<DecodeOutcome> {
        self.run(sigma, mode, max_iters, false)
    }

    /// As [`Decoder::decode`], also recording one [`TraceStep`] per flip.
    pub fn decode_traced(&self, sigma: &BitVector, mode: DecoderMode, max_iters: usize) -> Result<DecodeOutcome> {
        self.run(sigma, mode, max_iters, true)
    }

    fn run(&self, sigma: &BitVector, mode: DecoderMode, max_iters: usize, trace: bool) -> Result<DecodeOutcome> {
        if max_iters == 0 {
            return Err(Error::InvalidArgument("max_iters must be at least 1".into()));
        }
        let mut state = self.init_state(sigma)?;
        let initial = state.potential();
        let mut steps = Vec::new();
        let mut iterations = 0;
        let status = loop {
            if state.is_solved() {
                break DecodeStatus::Success;
            }
            if iterations == max_iters {
                break DecodeStatus::IterationLimit;
            }
            let Some(flip) = self.find_flip(&state, mode)? else {
                break DecodeStatus::Stalled;
            };
            let delta = self.apply_flip(&mut state, flip.vertex, flip.z)?;
            if delta != flip.delta_u || delta >= 0 {
                return Err(Error::Invariant(format!(
                    "accepted flip at vertex {} changed U by {delta}, predicted {}",
                    flip.vertex, flip.delta_u
                )));
            }
            iterations += 1;
            if trace {
                steps.push(TraceStep {
                    iteration: iterations,
                    vertex: flip.vertex,
                    delta_u: delta,
                    weight: flip.z.count_ones() as usize,
                    potential_after: state.potential(),
                });
            }
        };
        Ok(DecodeOutcome {
            status,
            remaining_potential: state.potential(),
            correction: state.correction,
            iterations,
            initial_potential: initial,
            trace: steps,
        })
    }

    fn v1_incidence(&self) -> &[[(u32, u8); 2]] {
        &self.v1_incidence
    }
}
