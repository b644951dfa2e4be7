//! Classical codes of small blocklength and their tensor / dual tensor codes.
//!
//! Local matrices (elements of F_2^A ⊗ F_2^B) are handled as `u64` masks with
//! entry `(a, b)` at bit `a * Δ + b`, so everything that enumerates codewords
//! requires `Δ ≤ 8`. Rows are indexed by A (columns of a `C_A ⊗ F_2^B` word
//! are `C_A` codewords) and columns by B.

use std::fmt;
use std::ops::ControlFlow;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gf2::{BitMatrix, BitVector, Combinations};

/// Largest code dimension we are willing to enumerate exhaustively.
pub const MAX_ENUM_DIMENSION: usize = 24;

/// Largest local blocklength for mask-based local matrices.
pub const MAX_LOCAL_DELTA: usize = 8;

/// Resampling bound for random parity-check matrices.
pub const FULL_RANK_ATTEMPTS: usize = 64;

/// A rate `num/den` in lowest terms.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Rate {
    num: u64,
    den: u64,
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

impl Rate {
    pub fn new(num: u64, den: u64) -> Result<Self> {
        if den == 0 || num > den {
            return Err(Error::InvalidArgument(format!("rate {num}/{den} is not in [0, 1]")));
        }
        let g = gcd(num, den).max(1);
        Ok(Self {
            num: num / g,
            den: den / g,
        })
    }

    pub fn numerator(&self) -> u64 {
        self.num
    }

    pub fn denominator(&self) -> u64 {
        self.den
    }

    pub fn as_f64(&self) -> f64 {
        self.num as f64 / self.den as f64
    }

    /// `1 - ρ`.
    pub fn complement(&self) -> Rate {
        Rate::new(self.den - self.num, self.den).expect("complement of a valid rate")
    }

    /// `ρ·Δ`, which must be an integer.
    pub fn dimension_for(&self, blocklength: usize) -> Result<usize> {
        let scaled = self.num * blocklength as u64;
        if !scaled.is_multiple_of(self.den) {
            return Err(Error::InvalidArgument(format!(
                "rate {self} times blocklength {blocklength} is not an integer"
            )));
        }
        Ok((scaled / self.den) as usize)
    }
}

impl fmt::Display for Rate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.num, self.den)
    }
}

impl FromStr for Rate {
    type Err = Error;

    /// Accepts `p/q` or a terminating decimal such as `0.25`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = || Error::Parse(format!("bad rate {s:?}"));
        if let Some((n, d)) = s.split_once('/') {
            let n = n.trim().parse::<u64>().map_err(|_| bad())?;
            let d = d.trim().parse::<u64>().map_err(|_| bad())?;
            return Rate::new(n, d);
        }
        let (int, frac) = s.split_once('.').unwrap_or((s, ""));
        if frac.len() > 12 || !frac.chars().all(|c| c.is_ascii_digit()) {
            return Err(bad());
        }
        let int = if int.is_empty() {
            0
        } else {
            int.parse::<u64>().map_err(|_| bad())?
        };
        let den = 10u64.pow(frac.len() as u32);
        let frac_val = if frac.is_empty() {
            0
        } else {
            frac.parse::<u64>().map_err(|_| bad())?
        };
        Rate::new(int * den + frac_val, den)
    }
}

/// Enumerates the span of `basis` in Gray-code order, starting with 0.
pub(crate) fn for_each_span<F>(basis: &[u64], mut f: F) -> ControlFlow<()>
where
    F: FnMut(u64) -> ControlFlow<()>,
{
    let mut cur = 0u64;
    f(cur)?;
    let total: u64 = 1u64 << basis.len();
    for i in 1..total {
        cur ^= basis[i.trailing_zeros() as usize];
        f(cur)?;
    }
    ControlFlow::Continue(())
}

/// Reduces a list of masks to an independent basis (same span).
pub(crate) fn mask_basis(vectors: impl IntoIterator<Item = u64>) -> Vec<u64> {
    // Keyed by leading bit; each stored vector has a distinct top bit.
    let mut by_top: [u64; 64] = [0; 64];
    for mut v in vectors {
        while v != 0 {
            let top = 63 - v.leading_zeros() as usize;
            if by_top[top] == 0 {
                by_top[top] = v;
                break;
            }
            v ^= by_top[top];
        }
    }
    by_top.into_iter().filter(|&v| v != 0).collect()
}

fn ensure_enumerable(dimension: usize, what: &str) -> Result<()> {
    if dimension > MAX_ENUM_DIMENSION {
        return Err(Error::SizeLimit(format!(
            "{what} has dimension {dimension}, above the enumeration bound {MAX_ENUM_DIMENSION}"
        )));
    }
    Ok(())
}

/// A binary linear code `C = ker H = rowspan G` of blocklength Δ.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClassicalCode {
    blocklength: usize,
    parity_check: BitMatrix,
    generator: BitMatrix,
    distance: Option<usize>,
}

impl ClassicalCode {
    /// Code with full-rank parity-check matrix `h`; the generator is its kernel basis.
    pub fn from_parity_check(h: BitMatrix) -> Result<Self> {
        if h.rank() != h.num_rows() {
            return Err(Error::InvalidArgument(format!(
                "parity-check matrix with {} rows has rank {}",
                h.num_rows(),
                h.rank()
            )));
        }
        let generator = h.kernel_basis();
        Ok(Self {
            blocklength: h.num_cols(),
            parity_check: h,
            generator,
            distance: None,
        })
    }

    /// Code spanned by the rows of a full-rank generator matrix `g`.
    pub fn from_generator(g: BitMatrix) -> Result<Self> {
        if g.rank() != g.num_rows() {
            return Err(Error::InvalidArgument(format!(
                "generator matrix with {} rows has rank {}",
                g.num_rows(),
                g.rank()
            )));
        }
        let parity_check = g.kernel_basis();
        Ok(Self {
            blocklength: g.num_cols(),
            parity_check,
            generator: g,
            distance: None,
        })
    }

    /// `[n, 1, n]` repetition code with the chained checks `x_i + x_{i+1} = 0`.
    pub fn repetition(n: usize) -> Self {
        let mut h = BitMatrix::zeros(n.saturating_sub(1), n);
        for i in 0..n.saturating_sub(1) {
            h.set(i, i, true);
            h.set(i, i + 1, true);
        }
        Self::from_parity_check(h).expect("chained checks are independent")
    }

    /// `[n, n-1, 2]` even-weight code.
    pub fn even_weight(n: usize) -> Self {
        let h = BitMatrix::from_rows(n, vec![BitVector::from_indices(n, &(0..n).collect::<Vec<_>>())])
            .expect("row has n columns");
        Self::from_parity_check(h).expect("all-ones row has rank one")
    }

    /// The `[7, 4, 3]` Hamming code; column `j` of H is the binary expansion of `j + 1`.
    pub fn hamming_7_4() -> Self {
        let mut h = BitMatrix::zeros(3, 7);
        for j in 0..7 {
            for i in 0..3 {
                if ((j + 1) >> i) & 1 == 1 {
                    h.set(i, j, true);
                }
            }
        }
        Self::from_parity_check(h).expect("Hamming checks are independent")
    }

    /// The whole space F_2^n (no checks).
    pub fn full_space(n: usize) -> Self {
        Self::from_parity_check(BitMatrix::zeros(0, n)).expect("empty check matrix")
    }

    /// The zero code {0} of length n.
    pub fn zero_code(n: usize) -> Self {
        Self::from_parity_check(BitMatrix::identity(n)).expect("identity is full rank")
    }

    pub fn blocklength(&self) -> usize {
        self.blocklength
    }

    pub fn dimension(&self) -> usize {
        self.generator.num_rows()
    }

    pub fn parity_check(&self) -> &BitMatrix {
        &self.parity_check
    }

    pub fn generator(&self) -> &BitMatrix {
        &self.generator
    }

    /// Stored distance, if it has been computed.
    pub fn distance(&self) -> Option<usize> {
        self.distance
    }

    pub fn contains(&self, x: &BitVector) -> bool {
        self.parity_check.mul_vec(x).map(|s| s.is_zero()).unwrap_or(false)
    }

    /// Generator rows as masks; requires blocklength ≤ 64.
    pub fn generator_masks(&self) -> Result<Vec<u64>> {
        if self.blocklength > 64 {
            return Err(Error::SizeLimit(format!("blocklength {} above 64", self.blocklength)));
        }
        Ok(self.generator.rows().iter().map(BitVector::to_mask).collect())
    }

    /// All codewords as masks, in Gray-code order starting from 0.
    pub fn codewords(&self) -> Result<Vec<u64>> {
        ensure_enumerable(self.dimension(), "code")?;
        let basis = self.generator_masks()?;
        let mut out = Vec::with_capacity(1 << basis.len());
        let _ = for_each_span(&basis, |c| {
            out.push(c);
            ControlFlow::Continue(())
        });
        Ok(out)
    }

    /// Exact minimum distance by enumerating all 2^k codewords.
    ///
    /// A zero-dimensional code has no nonzero codeword; by convention its
    /// distance is reported as `blocklength + 1`.
    pub fn min_distance(&self) -> Result<usize> {
        if let Some(d) = self.distance {
            return Ok(d);
        }
        ensure_enumerable(self.dimension(), "code")?;
        let basis = self.generator_masks()?;
        let mut best = self.blocklength + 1;
        let _ = for_each_span(&basis, |c| {
            if c != 0 {
                best = best.min(c.count_ones() as usize);
            }
            ControlFlow::Continue(())
        });
        Ok(best)
    }

    /// Computes the distance and records it on the code.
    pub fn compute_distance(&mut self) -> Result<usize> {
        let d = self.min_distance()?;
        self.distance = Some(d);
        Ok(d)
    }

    pub fn with_distance(mut self) -> Result<Self> {
        self.compute_distance()?;
        Ok(self)
    }

    /// Distance from a word (as a mask) to the nearest codeword.
    pub fn distance_to(&self, word: u64) -> Result<usize> {
        Ok(self
            .codewords()?
            .into_iter()
            .map(|c| (c ^ word).count_ones() as usize)
            .min()
            .unwrap_or(0))
    }

    /// The dual code: parity check and generator swap roles.
    pub fn dual(&self) -> ClassicalCode {
        ClassicalCode {
            blocklength: self.blocklength,
            parity_check: self.generator.clone(),
            generator: self.parity_check.clone(),
            distance: None,
        }
    }

    /// Deletes the `removed` coordinates from every codeword.
    pub fn puncture(&self, removed: &[usize]) -> Result<ClassicalCode> {
        let mut drop = vec![false; self.blocklength];
        for &i in removed {
            if i >= self.blocklength {
                return Err(Error::InvalidArgument(format!(
                    "coordinate {i} outside blocklength {}",
                    self.blocklength
                )));
            }
            drop[i] = true;
        }
        let removed_count = drop.iter().filter(|&&d| d).count();
        if let Some(d) = self.distance {
            if removed_count >= d && self.dimension() > 0 {
                return Err(Error::Precondition(format!(
                    "puncturing {removed_count} coordinates of a code with distance {d}"
                )));
            }
        }
        let keep: Vec<usize> = (0..self.blocklength).filter(|&i| !drop[i]).collect();
        let g = self.generator.select_columns(&keep);
        let rank = g.rank();
        if rank != self.dimension() {
            return Err(Error::DimensionDrop {
                before: self.dimension(),
                after: rank,
            });
        }
        ClassicalCode::from_generator(g)
    }

    /// Text format: header line `classical-code Δ k` followed by H as a BitMatrix block.
    pub fn to_text(&self) -> String {
        format!(
            "classical-code {} {}\n{}",
            self.blocklength,
            self.dimension(),
            self.parity_check.to_text()
        )
    }

    pub fn from_text(text: &str) -> Result<ClassicalCode> {
        let mut lines = text.lines();
        let header = lines.next().ok_or_else(|| Error::Parse("empty code file".into()))?;
        let parts: Vec<&str> = header.split_whitespace().collect();
        if parts.len() != 3 || parts[0] != "classical-code" {
            return Err(Error::Parse(format!("bad code header {header:?}")));
        }
        let n: usize = parts[1]
            .parse()
            .map_err(|_| Error::Parse(format!("bad blocklength in {header:?}")))?;
        let k: usize = parts[2]
            .parse()
            .map_err(|_| Error::Parse(format!("bad dimension in {header:?}")))?;
        let (h, _) = BitMatrix::parse_lines(&mut lines)?;
        if lines.any(|l| !l.trim().is_empty()) {
            return Err(Error::Parse("trailing content after code".into()));
        }
        if h.num_cols() != n {
            return Err(Error::Parse(format!("H has {} columns, header says {n}", h.num_cols())));
        }
        let code = ClassicalCode::from_parity_check(h)?;
        if code.dimension() != k {
            return Err(Error::Parse(format!(
                "H defines dimension {}, header says {k}",
                code.dimension()
            )));
        }
        Ok(code)
    }
}

/// A uniformly random `rows × cols` matrix.
pub fn random_matrix<R: Rng + ?Sized>(rng: &mut R, rows: usize, cols: usize) -> BitMatrix {
    let rows = (0..rows)
        .map(|_| {
            let bits: Vec<bool> = (0..cols).map(|_| rng.gen::<bool>()).collect();
            BitVector::from_bools(&bits)
        })
        .collect();
    BitMatrix::from_rows(cols, rows).expect("rows have the requested length")
}

/// Samples `ker H` for a uniform `(1-ρ)Δ × Δ` parity-check matrix, redrawing until H has full rank.
pub fn sample_random_code_with<R: Rng + ?Sized>(rng: &mut R, delta: usize, rate: Rate) -> Result<ClassicalCode> {
    if rate.numerator() == 0 || rate.numerator() == rate.denominator() {
        return Err(Error::InvalidArgument(format!(
            "rate {rate} must lie strictly between 0 and 1"
        )));
    }
    let k = rate.dimension_for(delta)?;
    let checks = delta - k;
    for _ in 0..FULL_RANK_ATTEMPTS {
        let h = random_matrix(rng, checks, delta);
        if h.rank() == checks {
            return ClassicalCode::from_parity_check(h);
        }
    }
    Err(Error::EnsembleFailure {
        attempts: FULL_RANK_ATTEMPTS,
        reason: format!("no full-rank {checks}x{delta} parity-check matrix drawn"),
    })
}

/// Seeded entry point for [`sample_random_code_with`].
pub fn sample_random_code(delta: usize, rate: Rate, seed: u64) -> Result<ClassicalCode> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    sample_random_code_with(&mut rng, delta, rate)
}

/// Bit index of entry `(a, b)` in a local matrix mask.
#[inline]
pub fn local_bit(delta: usize, a: usize, b: usize) -> usize {
    a * delta + b
}

#[inline]
fn low_bits(n: usize) -> u64 {
    if n >= 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

/// Mask of row `a`.
#[inline]
pub fn row_mask(delta: usize, a: usize) -> u64 {
    low_bits(delta) << (a * delta)
}

/// Mask of column `b`.
pub fn col_mask(delta: usize, b: usize) -> u64 {
    (0..delta).fold(0, |m, a| m | 1u64 << local_bit(delta, a, b))
}

/// Row `a` of a local matrix as a Δ-bit word (bit `b` = entry `(a, b)`).
#[inline]
pub fn row_of(delta: usize, x: u64, a: usize) -> u64 {
    (x >> (a * delta)) & low_bits(delta)
}

/// Column `b` of a local matrix as a Δ-bit word (bit `a` = entry `(a, b)`).
pub fn col_of(delta: usize, x: u64, b: usize) -> u64 {
    (0..delta).fold(0, |w, a| w | ((x >> local_bit(delta, a, b)) & 1) << a)
}

/// Places a Δ-bit word as column `b`.
pub fn place_col(delta: usize, word: u64, b: usize) -> u64 {
    (0..delta)
        .filter(|a| word >> a & 1 == 1)
        .fold(0, |m, a| m | 1u64 << local_bit(delta, a, b))
}

/// Places a Δ-bit word as row `a`.
#[inline]
pub fn place_row(delta: usize, word: u64, a: usize) -> u64 {
    (word & low_bits(delta)) << (a * delta)
}

/// Converts a Δ×Δ BitMatrix to its mask.
pub fn matrix_to_mask(x: &BitMatrix) -> Result<u64> {
    let delta = x.num_rows();
    if x.num_cols() != delta || delta > MAX_LOCAL_DELTA {
        return Err(Error::DimensionMismatch(format!(
            "expected a square local matrix of side at most {MAX_LOCAL_DELTA}, got {}x{}",
            x.num_rows(),
            x.num_cols()
        )));
    }
    let mut m = 0;
    for a in 0..delta {
        m |= place_row(delta, x.row(a).to_mask(), a);
    }
    Ok(m)
}

pub fn mask_to_matrix(delta: usize, mask: u64) -> BitMatrix {
    let rows = (0..delta)
        .map(|a| BitVector::from_mask(delta, row_of(delta, mask, a)))
        .collect();
    BitMatrix::from_rows(delta, rows).expect("rows have length delta")
}

/// The dual tensor code `C_A ⊗ F_2^B + F_2^A ⊗ C_B = (C_A^⊥ ⊗ C_B^⊥)^⊥`.
#[derive(Clone, Debug)]
pub struct DualTensorCode {
    code_a: ClassicalCode,
    code_b: ClassicalCode,
}

/// Outcome of a w-robustness check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Robustness {
    Robust,
    Witness(BitMatrix),
}

/// Outcome of a sparse-robustness check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SparseRobustness {
    SparseRobust,
    Witness(BitMatrix),
}

/// Distances of a local matrix to the tensor code and to the column / row codes.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TensorDistances {
    /// d(x, C_A ⊗ C_B)
    pub to_tensor: usize,
    /// d(x, C_A ⊗ F_2^B): columns corrected into C_A.
    pub to_columns: usize,
    /// d(x, F_2^A ⊗ C_B): rows corrected into C_B.
    pub to_rows: usize,
}

impl TensorDistances {
    /// `d(x, C_A⊗C_B) ≤ 3/2 · (d(x, C_A⊗F) + d(x, F⊗C_B))`
    pub fn satisfies_three_halves_bound(&self) -> bool {
        2 * self.to_tensor <= 3 * (self.to_columns + self.to_rows)
    }
}

impl DualTensorCode {
    pub fn new(code_a: ClassicalCode, code_b: ClassicalCode) -> Result<Self> {
        if code_a.blocklength() != code_b.blocklength() {
            return Err(Error::DimensionMismatch(format!(
                "local codes of blocklengths {} and {}",
                code_a.blocklength(),
                code_b.blocklength()
            )));
        }
        if code_a.blocklength() > MAX_LOCAL_DELTA {
            return Err(Error::SizeLimit(format!(
                "local blocklength {} above {MAX_LOCAL_DELTA}",
                code_a.blocklength()
            )));
        }
        Ok(Self { code_a, code_b })
    }

    pub fn code_a(&self) -> &ClassicalCode {
        &self.code_a
    }

    pub fn code_b(&self) -> &ClassicalCode {
        &self.code_b
    }

    pub fn delta(&self) -> usize {
        self.code_a.blocklength()
    }

    /// `Δ·k_B + Δ·k_A − k_A·k_B`.
    pub fn dimension_formula(&self) -> usize {
        let d = self.delta();
        let (ka, kb) = (self.code_a.dimension(), self.code_b.dimension());
        d * kb + d * ka - ka * kb
    }

    /// Column codewords `g ⊗ e_b` followed by row codewords `e_a ⊗ h`.
    pub fn spanning_set(&self) -> Vec<u64> {
        let delta = self.delta();
        let ga = self.code_a.generator_masks().expect("delta <= 8");
        let gb = self.code_b.generator_masks().expect("delta <= 8");
        let mut out = Vec::with_capacity(delta * (ga.len() + gb.len()));
        for b in 0..delta {
            for &g in &ga {
                out.push(place_col(delta, g, b));
            }
        }
        for a in 0..delta {
            for &h in &gb {
                out.push(place_row(delta, h, a));
            }
        }
        out
    }

    /// An independent basis of the dual tensor code.
    pub fn basis(&self) -> Vec<u64> {
        mask_basis(self.spanning_set())
    }

    /// Dimension computed as the rank of the spanning set.
    pub fn dimension(&self) -> usize {
        self.basis().len()
    }

    /// Basis `g_A^i ⊗ g_B^j` of the tensor code `C_A ⊗ C_B`.
    pub fn tensor_basis(&self) -> Vec<u64> {
        let delta = self.delta();
        let ga = self.code_a.generator_masks().expect("delta <= 8");
        let gb = self.code_b.generator_masks().expect("delta <= 8");
        let mut out = Vec::with_capacity(ga.len() * gb.len());
        for &g in &ga {
            for &h in &gb {
                out.push(outer(delta, g, h));
            }
        }
        out
    }

    /// Membership of a mask: `H_A · X · H_Bᵀ = 0`.
    pub fn contains_mask(&self, x: u64) -> bool {
        let delta = self.delta();
        let ha: Vec<u64> = self
            .code_a
            .parity_check()
            .rows()
            .iter()
            .map(BitVector::to_mask)
            .collect();
        let hb: Vec<u64> = self
            .code_b
            .parity_check()
            .rows()
            .iter()
            .map(BitVector::to_mask)
            .collect();
        // (H_A X)_{i,b} = <h_A^i, column b>
        for &ra in &ha {
            let mut combined_row = 0u64;
            for a in 0..delta {
                if ra >> a & 1 == 1 {
                    combined_row ^= row_of(delta, x, a);
                }
            }
            if hb.iter().any(|&rb| (combined_row & rb).count_ones() & 1 == 1) {
                return false;
            }
        }
        true
    }

    /// Membership test `H_A · X · H_Bᵀ = 0` for a Δ×Δ matrix.
    pub fn dual_tensor_member(&self, x: &BitMatrix) -> Result<bool> {
        if x.num_rows() != self.delta() || x.num_cols() != self.delta() {
            return Err(Error::DimensionMismatch(format!(
                "expected a {0}x{0} matrix, got {1}x{2}",
                self.delta(),
                x.num_rows(),
                x.num_cols()
            )));
        }
        let product = self
            .code_a
            .parity_check()
            .mat_mul(x)?
            .mat_mul(&self.code_b.parity_check().transpose())?;
        Ok(product.is_zero())
    }

    /// Visits every codeword (Gray-code order, starting with 0).
    pub fn for_each_codeword<F>(&self, f: F) -> Result<()>
    where
        F: FnMut(u64) -> ControlFlow<()>,
    {
        let basis = self.basis();
        ensure_enumerable(basis.len(), "dual tensor code")?;
        let _ = for_each_span(&basis, f);
        Ok(())
    }

    /// Exact minimum distance by full enumeration.
    pub fn min_distance(&self) -> Result<usize> {
        let mut best = self.delta() * self.delta() + 1;
        self.for_each_codeword(|x| {
            if x != 0 {
                best = best.min(x.count_ones() as usize);
            }
            ControlFlow::Continue(())
        })?;
        Ok(best)
    }

    /// Checks w-robustness: every codeword X with `0 < |X| ≤ w` must be covered by at
    /// most `⌊|X|/d_A⌋` columns together with at most `⌊|X|/d_B⌋` rows.
    pub fn check_w_robust(&self, w: usize) -> Result<Robustness> {
        if w == 0 {
            return Ok(Robustness::Robust);
        }
        let delta = self.delta();
        let da = self.code_a.min_distance()?;
        let db = self.code_b.min_distance()?;
        let mut witness = None;
        self.for_each_codeword(|x| {
            let weight = x.count_ones() as usize;
            if x != 0 && weight <= w && !coverable(delta, x, weight / da, weight / db) {
                witness = Some(x);
                return ControlFlow::Break(());
            }
            ControlFlow::Continue(())
        })?;
        Ok(match witness {
            Some(x) => Robustness::Witness(mask_to_matrix(delta, x)),
            None => Robustness::Robust,
        })
    }

    /// Looks for a nonzero codeword whose rows and columns all have weight ≤ `cap`.
    pub fn check_sparse_robust(&self, cap: usize) -> Result<SparseRobustness> {
        let delta = self.delta();
        let mut witness = None;
        self.for_each_codeword(|x| {
            if x != 0
                && (0..delta).all(|a| row_of(delta, x, a).count_ones() as usize <= cap)
                && (0..delta).all(|b| col_of(delta, x, b).count_ones() as usize <= cap)
            {
                witness = Some(x);
                return ControlFlow::Break(());
            }
            ControlFlow::Continue(())
        })?;
        Ok(match witness {
            Some(x) => SparseRobustness::Witness(mask_to_matrix(delta, x)),
            None => SparseRobustness::SparseRobust,
        })
    }

    /// The three distances entering the robust-testability inequality.
    pub fn tensor_distances(&self, x: &BitMatrix) -> Result<TensorDistances> {
        let delta = self.delta();
        let mask = matrix_to_mask(x)?;
        if x.num_rows() != delta {
            return Err(Error::DimensionMismatch(format!("expected a {delta}x{delta} matrix")));
        }
        let to_columns = (0..delta)
            .map(|b| self.code_a.distance_to(col_of(delta, mask, b)))
            .sum::<Result<usize>>()?;
        let to_rows = (0..delta)
            .map(|a| self.code_b.distance_to(row_of(delta, mask, a)))
            .sum::<Result<usize>>()?;
        let basis = self.tensor_basis();
        ensure_enumerable(basis.len(), "tensor code")?;
        let mut to_tensor = usize::MAX;
        let _ = for_each_span(&basis, |c| {
            to_tensor = to_tensor.min((c ^ mask).count_ones() as usize);
            ControlFlow::Continue(())
        });
        Ok(TensorDistances {
            to_tensor,
            to_columns,
            to_rows,
        })
    }

    /// Whether `d(x, C_A⊗C_B) ≤ 3/2 (d(x, C_A⊗F) + d(x, F⊗C_B))` holds for `x`.
    pub fn check_tensor_distance_bound(&self, x: &BitMatrix) -> Result<bool> {
        Ok(self.tensor_distances(x)?.satisfies_three_halves_bound())
    }

    /// Splits a codeword vanishing on `rows × cols` into `r + c`, where the rows of `r`
    /// are `C_B` codewords supported off `rows`, and the columns of `c` are `C_A`
    /// codewords supported off `cols`.
    pub fn rowcol_decompose(&self, x: &BitMatrix, rows: &[usize], cols: &[usize]) -> Result<(BitMatrix, BitMatrix)> {
        let delta = self.delta();
        let mask = matrix_to_mask(x)?;
        if x.num_rows() != delta {
            return Err(Error::DimensionMismatch(format!("expected a {delta}x{delta} matrix")));
        }
        if !self.contains_mask(mask) {
            return Err(Error::Precondition("matrix is not a dual tensor codeword".into()));
        }
        let row_in = index_flags(delta, rows)?;
        let col_in = index_flags(delta, cols)?;
        let d = self.code_a.min_distance()?.min(self.code_b.min_distance()?);
        let missing_rows = row_in.iter().filter(|&&f| !f).count();
        let missing_cols = col_in.iter().filter(|&&f| !f).count();
        if missing_rows >= d || missing_cols >= d {
            return Err(Error::Precondition(format!(
                "complements of sizes {missing_rows} and {missing_cols} are not below the distance {d}"
            )));
        }
        let inside: u64 = (0..delta)
            .flat_map(|a| (0..delta).map(move |b| (a, b)))
            .filter(|&(a, b)| row_in[a] && col_in[b])
            .fold(0, |m, (a, b)| m | 1u64 << local_bit(delta, a, b));
        if mask & inside != 0 {
            return Err(Error::Precondition("matrix does not vanish on rows × cols".into()));
        }

        // Any decomposition X = r0 + c0 from the spanning set.
        let ga = self.code_a.generator_masks()?;
        let gb = self.code_b.generator_masks()?;
        let mut spanning = Vec::new(); // (mask, is_column_word)
        for b in 0..delta {
            for &g in &ga {
                spanning.push((place_col(delta, g, b), true));
            }
        }
        for a in 0..delta {
            for &h in &gb {
                spanning.push((place_row(delta, h, a), false));
            }
        }
        let coeffs = solve_masks(delta * delta, &spanning.iter().map(|s| s.0).collect::<Vec<_>>(), mask)?
            .ok_or_else(|| Error::Invariant("dual tensor codeword outside its spanning set".into()))?;
        let (mut r0, mut c0) = (0u64, 0u64);
        for (i, &(m, is_col)) in spanning.iter().enumerate() {
            if coeffs >> i & 1 == 1 {
                if is_col {
                    c0 ^= m;
                } else {
                    r0 ^= m;
                }
            }
        }

        // Unique Y in C_A ⊗ C_B agreeing with r0 (equivalently c0) on rows × cols.
        let tensor = self.tensor_basis();
        let positions: Vec<usize> = (0..delta * delta).filter(|p| inside >> p & 1 == 1).collect();
        let restrict = |m: u64| -> u64 {
            positions
                .iter()
                .enumerate()
                .fold(0, |acc, (j, &p)| acc | ((m >> p) & 1) << j)
        };
        let restricted: Vec<u64> = tensor.iter().map(|&t| restrict(t)).collect();
        let z = solve_masks(positions.len(), &restricted, restrict(r0))?
            .ok_or_else(|| Error::Invariant("restriction of r0 is not a tensor codeword".into()))?;
        let y = tensor
            .iter()
            .enumerate()
            .filter(|(j, _)| z >> j & 1 == 1)
            .fold(0, |acc, (_, &t)| acc ^ t);
        let (r, c) = (r0 ^ y, c0 ^ y);
        Ok((mask_to_matrix(delta, r), mask_to_matrix(delta, c)))
    }
}

fn index_flags(delta: usize, idx: &[usize]) -> Result<Vec<bool>> {
    let mut flags = vec![false; delta];
    for &i in idx {
        if i >= delta {
            return Err(Error::InvalidArgument(format!("index {i} outside 0..{delta}")));
        }
        flags[i] = true;
    }
    Ok(flags)
}

/// Solves `Σ coeff_i · vectors[i] = target` over masks of `len` bits; coefficients as a mask.
fn solve_masks(len: usize, vectors: &[u64], target: u64) -> Result<Option<u64>> {
    if vectors.len() > 64 {
        return Err(Error::SizeLimit(format!("{} unknowns above 64", vectors.len())));
    }
    // Columns of the system are the vectors; rows are the `len` bit positions.
    let rows = (0..len)
        .map(|p| {
            let bits: Vec<bool> = vectors.iter().map(|&v| v >> p & 1 == 1).collect();
            BitVector::from_bools(&bits)
        })
        .collect();
    let system = BitMatrix::from_rows(vectors.len(), rows)?;
    let rhs = BitVector::from_bools(&(0..len).map(|p| target >> p & 1 == 1).collect::<Vec<_>>());
    Ok(system.solve(&rhs)?.map(|x| if x.is_empty() { 0 } else { x.to_mask() }))
}

/// `g ⊗ h`: entry `(a, b)` is `g_a · h_b`.
pub fn outer(delta: usize, g: u64, h: u64) -> u64 {
    (0..delta)
        .filter(|a| g >> a & 1 == 1)
        .fold(0, |m, a| m | place_row(delta, h, a))
}

/// Exact cover test: can the support of `x` be covered by at most `col_budget`
/// columns plus at most `row_budget` rows?
fn coverable(delta: usize, x: u64, col_budget: usize, row_budget: usize) -> bool {
    let nonzero_cols: Vec<usize> = (0..delta).filter(|&b| col_of(delta, x, b) != 0).collect();
    let rows_needed = |residual: u64| (0..delta).filter(|&a| row_of(delta, residual, a) != 0).count();
    for size in 0..=col_budget.min(nonzero_cols.len()) {
        for subset in Combinations::new(nonzero_cols.len(), size) {
            let covered = subset.iter().fold(0u64, |m, &i| m | col_mask(delta, nonzero_cols[i]));
            if rows_needed(x & !covered) <= row_budget {
                return true;
            }
        }
    }
    false
}

/// A sampled local code pair with the number of attempts it took.
#[derive(Clone, Debug)]
pub struct RobustPair {
    pub code_a: ClassicalCode,
    pub code_b: ClassicalCode,
    pub attempts: usize,
}

impl RobustPair {
    /// `min(d_A, d_B, d_A^⊥, d_B^⊥)`.
    pub fn min_distance(&self) -> Result<usize> {
        Ok([
            self.code_a.min_distance()?,
            self.code_b.min_distance()?,
            self.code_a.dual().min_distance()?,
            self.code_b.dual().min_distance()?,
        ]
        .into_iter()
        .min()
        .unwrap())
    }
}

/// Failure of [`sample_robust_pair`].
#[derive(Debug, Clone, thiserror::Error)]
pub enum PairSearchError {
    #[error("no admissible local code pair in {attempts} attempts (best min distance {best_distance:?})")]
    Exhausted {
        attempts: usize,
        best_distance: Option<usize>,
        best: Option<Box<RobustPair>>,
    },
    #[error(transparent)]
    Other(#[from] Error),
}

impl From<PairSearchError> for Error {
    fn from(e: PairSearchError) -> Self {
        match e {
            PairSearchError::Exhausted {
                attempts,
                best_distance,
                ..
            } => Error::ExhaustedAttempts {
                attempts,
                reason: format!("no admissible local code pair (best min distance {best_distance:?})"),
            },
            PairSearchError::Other(e) => e,
        }
    }
}

/// Decides whether a code pair qualifies: all four distances at least `δ·Δ` and both
/// `C_A ⊗ F + F ⊗ C_B` and `C_A^⊥ ⊗ F + F ⊗ C_B^⊥` w-robust.
pub fn pair_is_admissible(code_a: &ClassicalCode, code_b: &ClassicalCode, delta_target: f64, w: usize) -> Result<bool> {
    let delta = code_a.blocklength();
    let pair = RobustPair {
        code_a: code_a.clone(),
        code_b: code_b.clone(),
        attempts: 0,
    };
    let needed = delta_target * delta as f64;
    if (pair.min_distance()? as f64) < needed - 1e-9 {
        return Ok(false);
    }
    let primal = DualTensorCode::new(code_a.clone(), code_b.clone())?;
    if primal.check_w_robust(w)? != Robustness::Robust {
        return Ok(false);
    }
    let dual = DualTensorCode::new(code_a.dual(), code_b.dual())?;
    Ok(dual.check_w_robust(w)? == Robustness::Robust)
}

/// Rejection-samples `C_A` of rate ρ and `C_B` of rate 1−ρ until the pair is admissible.
pub fn sample_robust_pair(
    delta: usize,
    rate: Rate,
    delta_target: f64,
    w: usize,
    max_attempts: usize,
    seed: u64,
) -> std::result::Result<RobustPair, PairSearchError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut best: Option<(usize, RobustPair)> = None;
    for attempt in 1..=max_attempts {
        let code_a = sample_random_code_with(&mut rng, delta, rate)?;
        let code_b = sample_random_code_with(&mut rng, delta, rate.complement())?;
        let candidate = RobustPair {
            code_a,
            code_b,
            attempts: attempt,
        };
        let dist = candidate.min_distance()?;
        if pair_is_admissible(&candidate.code_a, &candidate.code_b, delta_target, w)? {
            let mut found = candidate;
            found.code_a.compute_distance()?;
            found.code_b.compute_distance()?;
            return Ok(found);
        }
        if best.as_ref().is_none_or(|(d, _)| dist > *d) {
            best = Some((dist, candidate));
        }
    }
    Err(PairSearchError::Exhausted {
        attempts: max_attempts,
        best_distance: best.as_ref().map(|(d, _)| *d),
        best: best.map(|(_, p)| Box::new(p)),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rep3() -> ClassicalCode {
        ClassicalCode::from_parity_check(BitMatrix::from_strs(3, &["110", "011"])).unwrap()
    }

    /// Independent cover oracle: all subsets of rows and of columns.
    fn cover_oracle(delta: usize, x: u64, col_budget: usize, row_budget: usize) -> bool {
        for cols in 0u64..(1 << delta) {
            if cols.count_ones() as usize > col_budget {
                continue;
            }
            for rows in 0u64..(1 << delta) {
                if rows.count_ones() as usize > row_budget {
                    continue;
                }
                let mut cover = 0u64;
                for b in 0..delta {
                    if cols >> b & 1 == 1 {
                        cover |= col_mask(delta, b);
                    }
                }
                for a in 0..delta {
                    if rows >> a & 1 == 1 {
                        cover |= row_mask(delta, a);
                    }
                }
                if x & !cover == 0 {
                    return true;
                }
            }
        }
        false
    }

    #[test]
    fn rate_parsing() {
        assert_eq!("1/2".parse::<Rate>().unwrap(), Rate::new(1, 2).unwrap());
        assert_eq!("0.25".parse::<Rate>().unwrap(), Rate::new(1, 4).unwrap());
        assert_eq!("2/6".parse::<Rate>().unwrap().to_string(), "1/3");
        assert!("3/2".parse::<Rate>().is_err());
        assert!(Rate::new(1, 3).unwrap().dimension_for(4).is_err());
        assert_eq!(Rate::new(1, 3).unwrap().complement(), Rate::new(2, 3).unwrap());
    }

    #[test]
    fn sampled_codes_have_consistent_matrices() {
        let code = sample_random_code(4, Rate::new(1, 2).unwrap(), 7).unwrap();
        assert_eq!(code.dimension(), 2);
        let product = code.parity_check().mat_mul(&code.generator().transpose()).unwrap();
        assert!(product.is_zero());

        let code = sample_random_code(6, Rate::new(1, 3).unwrap(), 1).unwrap();
        assert_eq!(code.dimension(), 2);
        assert_eq!(code.parity_check().num_rows(), 4);
        assert_eq!(code.parity_check().num_cols(), 6);

        assert_eq!(
            sample_random_code(6, Rate::new(1, 3).unwrap(), 99).unwrap(),
            sample_random_code(6, Rate::new(1, 3).unwrap(), 99).unwrap()
        );
    }

    #[test]
    fn distances() {
        assert_eq!(rep3().min_distance().unwrap(), 3);
        assert_eq!(ClassicalCode::full_space(3).min_distance().unwrap(), 1);
        assert_eq!(ClassicalCode::hamming_7_4().min_distance().unwrap(), 3);
        assert_eq!(ClassicalCode::hamming_7_4().codewords().unwrap().len(), 16);
        let mut even = ClassicalCode::even_weight(4);
        assert_eq!(even.compute_distance().unwrap(), 2);
        assert_eq!(even.distance(), Some(2));
        assert_eq!(ClassicalCode::zero_code(4).min_distance().unwrap(), 5);
    }

    #[test]
    fn duals() {
        let full = ClassicalCode::full_space(3);
        assert_eq!(full.dual().dimension(), 0);
        let even = rep3().dual();
        assert_eq!(even.dimension(), 2);
        assert_eq!(even.min_distance().unwrap(), 2);
        let codewords = even.codewords().unwrap();
        assert!(codewords.iter().all(|c| c.count_ones() % 2 == 0));

        let code = sample_random_code(6, Rate::new(1, 2).unwrap(), 3).unwrap();
        assert_eq!(code.dual().dual(), code);
    }

    #[test]
    fn dual_tensor_membership() {
        let dt = DualTensorCode::new(rep3(), rep3()).unwrap();
        assert!(dt.dual_tensor_member(&BitMatrix::zeros(3, 3)).unwrap());
        let column = mask_to_matrix(3, place_col(3, 0b111, 1));
        assert!(dt.dual_tensor_member(&column).unwrap());
        let single = mask_to_matrix(3, 1 << local_bit(3, 1, 2));
        assert!(!dt.dual_tensor_member(&single).unwrap());
        assert!(dt.dual_tensor_member(&BitMatrix::zeros(2, 3)).is_err());
        assert_eq!(dt.dimension(), dt.dimension_formula());
        assert_eq!(dt.dimension(), 5);
    }

    #[test]
    fn robustness_of_repetition_pair() {
        let dt = DualTensorCode::new(rep3(), rep3()).unwrap();
        assert_eq!(dt.check_w_robust(0).unwrap(), Robustness::Robust);
        let verdict = dt.check_w_robust(9).unwrap();
        // Oracle: enumerate all 32 codewords with the all-subsets cover test.
        let mut oracle_robust = true;
        let mut count = 0;
        dt.for_each_codeword(|x| {
            count += 1;
            let w = x.count_ones() as usize;
            if x != 0 && !cover_oracle(3, x, w / 3, w / 3) {
                oracle_robust = false;
            }
            ControlFlow::Continue(())
        })
        .unwrap();
        assert_eq!(count, 32);
        assert_eq!(verdict == Robustness::Robust, oracle_robust);
        if let Robustness::Witness(x) = &verdict {
            assert!(dt.dual_tensor_member(x).unwrap());
        }
    }

    #[test]
    fn robustness_is_monotone_in_w() {
        let a = sample_random_code(5, Rate::new(2, 5).unwrap(), 11).unwrap();
        let b = sample_random_code(5, Rate::new(3, 5).unwrap(), 12).unwrap();
        let dt = DualTensorCode::new(a, b).unwrap();
        let verdicts: Vec<bool> = (0..=25)
            .map(|w| dt.check_w_robust(w).unwrap() == Robustness::Robust)
            .collect();
        for w in 1..verdicts.len() {
            if verdicts[w] {
                assert!(verdicts[w - 1]);
            }
        }
    }

    #[test]
    fn sparse_robustness() {
        let dt = DualTensorCode::new(rep3(), rep3()).unwrap();
        assert_eq!(dt.check_sparse_robust(0).unwrap(), SparseRobustness::SparseRobust);
        assert_eq!(dt.check_sparse_robust(1).unwrap(), SparseRobustness::SparseRobust);
        // e.g. full column 0 plus full row 0 has row and column weights at most 2.
        match dt.check_sparse_robust(2).unwrap() {
            SparseRobustness::Witness(x) => {
                let m = matrix_to_mask(&x).unwrap();
                assert!(dt.contains_mask(m));
                assert!((0..3).all(|i| row_of(3, m, i).count_ones() <= 2 && col_of(3, m, i).count_ones() <= 2));
                assert_ne!(m, 0);
            }
            other => panic!("expected a witness, got {other:?}"),
        }
    }

    #[test]
    fn tensor_distance_examples() {
        let dt = DualTensorCode::new(rep3(), rep3()).unwrap();
        let codeword = mask_to_matrix(3, outer(3, 0b111, 0b111));
        let d = dt.tensor_distances(&codeword).unwrap();
        assert_eq!((d.to_tensor, d.to_columns, d.to_rows), (0, 0, 0));
        assert!(dt.check_tensor_distance_bound(&codeword).unwrap());

        let unit = mask_to_matrix(3, 1);
        let d = dt.tensor_distances(&unit).unwrap();
        assert_eq!((d.to_tensor, d.to_columns, d.to_rows), (1, 1, 1));
        assert!(d.satisfies_three_halves_bound());
    }

    #[test]
    fn rowcol_examples() {
        let dt = DualTensorCode::new(rep3(), rep3()).unwrap();
        let (r, c) = dt
            .rowcol_decompose(&BitMatrix::zeros(3, 3), &[0, 1, 2], &[0, 1, 2])
            .unwrap();
        assert!(r.is_zero() && c.is_zero());

        let x = mask_to_matrix(3, place_col(3, 0b111, 1));
        let (r, c) = dt.rowcol_decompose(&x, &[0, 1, 2], &[0, 2]).unwrap();
        assert!(r.is_zero());
        assert_eq!(c, x);

        // Not vanishing on rows × cols.
        assert!(matches!(
            dt.rowcol_decompose(&x, &[0, 1, 2], &[0, 1, 2]),
            Err(Error::Precondition(_))
        ));
        // Complement too large for the distance.
        assert!(matches!(
            dt.rowcol_decompose(&x, &[], &[0, 2]),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn puncturing() {
        let code = rep3();
        assert_eq!(code.puncture(&[]).unwrap().generator(), code.generator());
        let p = code.puncture(&[2]).unwrap();
        assert_eq!((p.blocklength(), p.dimension(), p.min_distance().unwrap()), (2, 1, 2));
        let h = ClassicalCode::hamming_7_4().with_distance().unwrap();
        let p = h.puncture(&[6]).unwrap();
        assert_eq!((p.blocklength(), p.dimension(), p.min_distance().unwrap()), (6, 4, 2));
        assert!(h.puncture(&[0, 1, 2]).is_err());
        // Without a recorded distance the rank check is what fires.
        let h = ClassicalCode::hamming_7_4();
        assert!(matches!(h.puncture(&[0, 1, 2, 3]), Err(Error::DimensionDrop { .. })));
    }

    #[test]
    fn explicit_pair_is_admissible() {
        let a = rep3();
        let b = ClassicalCode::even_weight(3);
        // min(d_A, d_B, d_A^⊥, d_B^⊥) = 2 = (2/3)·3.
        assert!(pair_is_admissible(&a, &b, 2.0 / 3.0, 0).unwrap());
        assert!(!pair_is_admissible(&a, &b, 1.0, 0).unwrap());
        let dt = DualTensorCode::new(a.clone(), b.clone()).unwrap();
        let oracle = {
            let mut ok = true;
            dt.for_each_codeword(|x| {
                let w = x.count_ones() as usize;
                if x != 0 && w <= 9 && !cover_oracle(3, x, w / 3, w / 2) {
                    ok = false;
                }
                ControlFlow::Continue(())
            })
            .unwrap();
            ok
        };
        assert_eq!(dt.check_w_robust(9).unwrap() == Robustness::Robust, oracle);
    }

    #[test]
    fn pair_sampling() {
        let rate = Rate::new(1, 3).unwrap();
        let pair = sample_robust_pair(3, rate, 0.0, 0, 10, 5).unwrap();
        assert_eq!(pair.attempts, 1);
        assert_eq!(pair.code_a.dimension(), 1);
        assert_eq!(pair.code_b.dimension(), 2);

        // Singleton bound: a [3,2] code has distance at most 2 < 0.9·3.
        match sample_robust_pair(3, rate, 0.9, 9, 50, 5) {
            Err(PairSearchError::Exhausted { attempts, best, .. }) => {
                assert_eq!(attempts, 50);
                assert!(best.is_some());
            }
            other => panic!("expected exhaustion, got {other:?}"),
        }
    }

    #[test]
    fn code_text_round_trip() {
        let code = ClassicalCode::hamming_7_4();
        let text = code.to_text();
        assert!(text.starts_with("classical-code 7 4\n3 7\n"));
        assert_eq!(ClassicalCode::from_text(&text).unwrap(), code);
        assert!(ClassicalCode::from_text("classical-code 7 3\n3 7\n1010101\n0110011\n0001111\n").is_err());
    }
}
