use std::ops::ControlFlow;

use crate::error::{Error, Result};
use crate::gf2::{binomial, BitMatrix, BitVector};
use crate::local_codes::{local_bit, mask_to_matrix, ClassicalCode, MAX_LOCAL_DELTA};

/// Largest number of local syndrome bits a coset table may index.
pub const MAX_SYNDROME_BITS: usize = 24;

/// Largest number of local matrices the leader enumeration may visit.
pub const MAX_TABLE_ENUMERATION: u128 = 4_000_000_000;

/// Minimum-weight coset leaders of the dual tensor code `C_A ⊗ F + F ⊗ C_B`,
/// indexed by the packed local syndrome `H_A·X·H_Bᵀ` (bit `i·r_B + j`).
#[derive(Clone, Debug)]
pub struct LocalCosetTable {
    delta: usize,
    r_a: usize,
    r_b: usize,
    position_syndromes: Vec<u32>,
    potentials: Vec<u8>,
    leaders: Vec<u64>,
}

/// Visits the `k`-subsets of `0..masks.len()` in lexicographic order with the
/// XOR of their masks.
pub(crate) fn for_each_subset_xor<F>(masks: &[u32], k: usize, visit: &mut F) -> ControlFlow<()>
where
    F: FnMut(u64, u32) -> ControlFlow<()>,
{
    fn rec<F>(masks: &[u32], start: usize, left: usize, support: u64, acc: u32, visit: &mut F) -> ControlFlow<()>
    where
        F: FnMut(u64, u32) -> ControlFlow<()>,
    {
        if left == 0 {
            return visit(support, acc);
        }
        for p in start..=masks.len() - left {
            rec(masks, p + 1, left - 1, support | 1 << p, acc ^ masks[p], visit)?;
        }
        ControlFlow::Continue(())
    }
    if k > masks.len() {
        return ControlFlow::Continue(());
    }
    rec(masks, 0, k, 0, 0, visit)
}

impl LocalCosetTable {
    /// Fills the table by streaming local matrices in weight-major, lexicographic
    /// order and keeping the first matrix seen for each syndrome.
    pub fn build(code_a: &ClassicalCode, code_b: &ClassicalCode) -> Result<Self> {
        let delta = code_a.blocklength();
        if code_b.blocklength() != delta {
            return Err(Error::DimensionMismatch(format!(
                "local codes of blocklengths {delta} and {}",
                code_b.blocklength()
            )));
        }
        if delta > MAX_LOCAL_DELTA {
            return Err(Error::SizeLimit(format!("Δ = {delta} above {MAX_LOCAL_DELTA}")));
        }
        let (h_a, h_b) = (code_a.parity_check(), code_b.parity_check());
        let (r_a, r_b) = (h_a.num_rows(), h_b.num_rows());
        let bits = r_a * r_b;
        if bits > MAX_SYNDROME_BITS {
            return Err(Error::SizeLimit(format!(
                "{bits} local syndrome bits above {MAX_SYNDROME_BITS}"
            )));
        }
        let mut position_syndromes = vec![0u32; delta * delta];
        for a in 0..delta {
            for b in 0..delta {
                let mut s = 0u32;
                for i in 0..r_a {
                    for j in 0..r_b {
                        if h_a.get(i, a) && h_b.get(j, b) {
                            s |= 1 << (i * r_b + j);
                        }
                    }
                }
                position_syndromes[local_bit(delta, a, b)] = s;
            }
        }
        let radius = covering_radius(&position_syndromes, bits);
        let visits: u128 = (0..=radius).map(|w| binomial(delta * delta, w)).sum();
        if visits > MAX_TABLE_ENUMERATION {
            return Err(Error::SizeLimit(format!(
                "coset leader enumeration needs {visits} matrices"
            )));
        }
        let size = 1usize << bits;
        let mut potentials = vec![u8::MAX; size];
        let mut leaders = vec![0u64; size];
        let mut filled = 0usize;
        for w in 0..=radius {
            let _ = for_each_subset_xor(&position_syndromes, w, &mut |support, s| {
                if potentials[s as usize] == u8::MAX {
                    potentials[s as usize] = w as u8;
                    leaders[s as usize] = support;
                    filled += 1;
                    if filled == size {
                        return ControlFlow::Break(());
                    }
                }
                ControlFlow::Continue(())
            });
            if filled == size {
                break;
            }
        }
        if filled != size {
            return Err(Error::Invariant(format!(
                "coset table filled {filled} of {size} entries"
            )));
        }
        Ok(Self {
            delta,
            r_a,
            r_b,
            position_syndromes,
            potentials,
            leaders,
        })
    }

    pub fn delta(&self) -> usize {
        self.delta
    }

    /// Shape `(Δ − k_A, Δ − k_B)` of a local syndrome matrix.
    pub fn syndrome_shape(&self) -> (usize, usize) {
        (self.r_a, self.r_b)
    }

    pub fn syndrome_bits(&self) -> usize {
        self.r_a * self.r_b
    }

    /// Number of cosets, `2^{(Δ−k_A)(Δ−k_B)}`.
    pub fn len(&self) -> usize {
        self.potentials.len()
    }

    pub fn is_empty(&self) -> bool {
        self.potentials.is_empty()
    }

    /// Packed syndrome of a unit matrix at each local position.
    pub fn position_syndromes(&self) -> &[u32] {
        &self.position_syndromes
    }

    /// Packed syndrome of a local mask.
    pub fn syndrome_of(&self, mask: u64) -> u32 {
        let mut s = 0;
        let mut m = mask;
        while m != 0 {
            s ^= self.position_syndromes[m.trailing_zeros() as usize];
            m &= m - 1;
        }
        s
    }

    #[inline]
    pub fn potential(&self, syndrome: u32) -> u8 {
        self.potentials[syndrome as usize]
    }

    /// Leader as a local mask.
    #[inline]
    pub fn leader(&self, syndrome: u32) -> u64 {
        self.leaders[syndrome as usize]
    }

    pub fn leader_matrix(&self, syndrome: u32) -> BitMatrix {
        mask_to_matrix(self.delta, self.leader(syndrome))
    }

    /// Unpacks a syndrome into its `r_A × r_B` matrix.
    pub fn syndrome_matrix(&self, syndrome: u32) -> BitMatrix {
        let rows = (0..self.r_a)
            .map(|i| BitVector::from_mask(self.r_b, (syndrome as u64 >> (i * self.r_b)) & ((1 << self.r_b) - 1)))
            .collect();
        BitMatrix::from_rows(self.r_b, rows).expect("rows have length r_B")
    }

    /// Packs an `r_A × r_B` syndrome matrix.
    pub fn pack_syndrome(&self, s: &BitMatrix) -> Result<u32> {
        if s.num_rows() != self.r_a || s.num_cols() != self.r_b {
            return Err(Error::DimensionMismatch(format!(
                "syndrome matrix {}x{}, expected {}x{}",
                s.num_rows(),
                s.num_cols(),
                self.r_a,
                self.r_b
            )));
        }
        let mut out = 0u32;
        for i in 0..self.r_a {
            out |= (s.row(i).to_mask() as u32) << (i * self.r_b);
        }
        Ok(out)
    }
}

pub fn build_coset_table(code_a: &ClassicalCode, code_b: &ClassicalCode) -> Result<LocalCosetTable> {
    LocalCosetTable::build(code_a, code_b)
}

/// Largest coset-leader weight, by breadth-first search over the syndrome group.
fn covering_radius(position_syndromes: &[u32], bits: usize) -> usize {
    let size = 1usize << bits;
    let mut dist = vec![u8::MAX; size];
    dist[0] = 0;
    let mut frontier = vec![0u32];
    let mut radius = 0;
    let mut gens: Vec<u32> = position_syndromes.iter().copied().filter(|&s| s != 0).collect();
    gens.sort_unstable();
    gens.dedup();
    while !frontier.is_empty() {
        let mut next = Vec::new();
        for &s in &frontier {
            for &g in &gens {
                let t = (s ^ g) as usize;
                if dist[t] == u8::MAX {
                    dist[t] = radius as u8 + 1;
                    next.push(t as u32);
                }
            }
        }
        if !next.is_empty() {
            radius += 1;
        }
        frontier = next;
    }
    radius
}
