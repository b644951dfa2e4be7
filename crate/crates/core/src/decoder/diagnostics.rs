//! Quantities defined from a known error `e`, for simulation and testing only.
//! Nothing here is reachable from the decoding path.

use std::ops::ControlFlow;

use super::Decoder;
use crate::error::{Error, Result};
use crate::gf2::BitVector;
use crate::local_codes::DualTensorCode;

/// Local minimum-weight corrections of an error and the sets built from them.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Diagnostics {
    /// `e_v`: the error restricted to the view of each V₁ vertex, as a local mask.
    pub local_errors: Vec<u64>,
    /// `R_v^+`: the coset leader of `e_v` at each V₁ vertex.
    pub r_plus: Vec<u64>,
    /// `R = ⋃ R_v^+` as a set of qubits.
    pub r: BitVector,
    /// `y = e \ R`.
    pub residual: BitVector,
    /// `Y`: V₁ vertices (indexed within V₁) with `R_v^+ ≠ e_v`.
    pub nontrivial: Vec<usize>,
    pub potential: usize,
    /// No single-qubit flip strictly lowers `U`.
    pub metastable: bool,
    /// `|R_v ∩ c| ≤ |c|/2` for every V₁ vertex and every nonzero local codeword `c`.
    pub low_overlap: bool,
    /// The `R_v^+` are pairwise disjoint as qubit sets.
    pub disjoint: bool,
}

fn local_mask(view: &[u32], x: &BitVector) -> u64 {
    view.iter()
        .enumerate()
        .filter(|(_, &q)| x.get(q as usize))
        .fold(0, |m, (p, _)| m | 1 << p)
}

/// Global potential `U(e)` of an error.
pub fn error_potential(decoder: &Decoder<'_>, e: &BitVector) -> Result<usize> {
    Ok(decoder.init_state(&decoder.code().syndrome(e)?)?.potential())
}

/// Computes `R_v^+`, `R`, `y`, `Y`, metastability and the low-overlap property for `e`.
pub fn diagnostics(decoder: &Decoder<'_>, e: &BitVector) -> Result<Diagnostics> {
    let code = decoder.code();
    let groups = code.complex().num_group_elements();
    let n = code.n();
    let state = decoder.init_state(&code.syndrome(e)?)?;
    let table = decoder.table();

    let mut local_errors = Vec::with_capacity(groups);
    let mut r_plus = Vec::with_capacity(groups);
    let mut r = BitVector::zeros(n);
    let mut disjoint = true;
    let mut nontrivial = Vec::new();
    for h in 0..groups {
        let view = code.complex().v1_view(h);
        let e_v = local_mask(view, e);
        let leader = table.leader(state.local_syndrome(h));
        let mut bits = leader;
        while bits != 0 {
            let q = view[bits.trailing_zeros() as usize] as usize;
            bits &= bits - 1;
            disjoint &= !r.get(q);
            r.set(q, true);
        }
        if leader != e_v {
            nontrivial.push(h);
        }
        local_errors.push(e_v);
        r_plus.push(leader);
    }
    let residual = e.and_not(&r);

    let pos = table.position_syndromes();
    let metastable = decoder.v1_incidence().iter().all(|corners| {
        let delta: i64 = corners
            .iter()
            .map(|&(h, p)| {
                let s = state.local_syndrome(h as usize);
                table.potential(s ^ pos[p as usize]) as i64 - table.potential(s) as i64
            })
            .sum();
        delta >= 0
    });

    let local_r: Vec<u64> = (0..groups).map(|h| local_mask(code.complex().v1_view(h), &r)).collect();
    let dual_tensor = DualTensorCode::new(code.code_a().clone(), code.code_b().clone())?;
    let mut low_overlap = true;
    if !r.is_zero() {
        dual_tensor.for_each_codeword(|c| {
            if c != 0 && local_r.iter().any(|&rv| 2 * (rv & c).count_ones() > c.count_ones()) {
                low_overlap = false;
                return ControlFlow::Break(());
            }
            ControlFlow::Continue(())
        })?;
    }

    Ok(Diagnostics {
        local_errors,
        r_plus,
        r,
        residual,
        nontrivial,
        potential: state.potential(),
        metastable,
        low_overlap,
        disjoint,
    })
}

/// Outcome of checking the edge-reversal description of `R(e + R̂)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RFlipVerdict {
    Pass,
    /// First V₁ vertex (indexed within V₁) where the reversed correction is not a
    /// minimum-weight correction or the nearest codeword moved.
    Fail {
        vertex: usize,
    },
}

/// For a metastable `e` and `subset ⊆ R(e)` whose flip does not lower `U`, checks
/// that reversing the edges of `subset` gives minimum-weight corrections for
/// `e + subset` with unchanged nearest codewords.
pub fn check_r_flipping(decoder: &Decoder<'_>, e: &BitVector, subset: &BitVector) -> Result<RFlipVerdict> {
    let code = decoder.code();
    if subset.len() != code.n() {
        return Err(Error::DimensionMismatch(format!(
            "subset of length {} for a code on {} qubits",
            subset.len(),
            code.n()
        )));
    }
    let before = diagnostics(decoder, e)?;
    if !before.metastable {
        return Err(Error::Precondition("error is not metastable".into()));
    }
    if !subset.and_not(&before.r).is_zero() {
        return Err(Error::Precondition("subset is not contained in R".into()));
    }
    let flipped = e.xor(subset);
    let after_state = decoder.init_state(&code.syndrome(&flipped)?)?;
    if after_state.potential() < before.potential {
        return Err(Error::Precondition(format!(
            "flipping the subset lowers U from {} to {}",
            before.potential,
            after_state.potential()
        )));
    }
    let table = decoder.table();
    for h in 0..code.complex().num_group_elements() {
        let view = code.complex().v1_view(h);
        let hat = local_mask(view, subset);
        let r_v = local_mask(view, &before.r);
        let plus = before.r_plus[h];
        let minus = r_v & !plus;
        let reversed = plus ^ (hat & plus) ^ (hat & minus);
        let new_local = local_mask(view, &flipped);
        let codeword_before = before.local_errors[h] ^ plus;
        let codeword_after = new_local ^ reversed;
        let minimal = reversed.count_ones() as usize == after_state.local_potential(h)
            && table.syndrome_of(reversed) == after_state.local_syndrome(h);
        if !minimal || codeword_before != codeword_after {
            return Ok(RFlipVerdict::Fail { vertex: h });
        }
    }
    Ok(RFlipVerdict::Pass)
}
