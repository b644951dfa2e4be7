//! Bit-packed linear algebra over GF(2).
//!
//! Vectors pack 64 bits per word, least significant bit first; bit `i` of a
//! vector lives in word `i / 64` at position `i % 64`. Matrices are stored as
//! a list of packed rows. Gaussian elimination always pivots on the lowest
//! available row index in the lowest remaining column, so every routine here
//! is deterministic.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

const WORD_BITS: usize = 64;

#[inline]
fn words_for(len: usize) -> usize {
    len.div_ceil(WORD_BITS)
}

/// A vector in GF(2)^len.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct BitVector {
    len: usize,
    words: Vec<u64>,
}

impl BitVector {
    pub fn zeros(len: usize) -> Self {
        Self {
            len,
            words: vec![0; words_for(len)],
        }
    }

    pub fn from_bools(bits: &[bool]) -> Self {
        let mut v = Self::zeros(bits.len());
        for (i, &b) in bits.iter().enumerate() {
            if b {
                v.set(i, true);
            }
        }
        v
    }

    /// Vector of length `len` with ones exactly at `indices`. Repeated indices cancel.
    pub fn from_indices(len: usize, indices: &[usize]) -> Self {
        let mut v = Self::zeros(len);
        for &i in indices {
            v.flip(i);
        }
        v
    }

    /// Builds a vector from the low `len` bits of a word mask (`len <= 64`).
    pub fn from_mask(len: usize, mask: u64) -> Self {
        assert!(len <= WORD_BITS, "mask vectors hold at most 64 bits");
        let mut v = Self::zeros(len);
        if len > 0 {
            let keep = if len == WORD_BITS { u64::MAX } else { (1u64 << len) - 1 };
            v.words[0] = mask & keep;
        }
        v
    }

    /// Low 64 bits as a mask. Panics if the vector is longer than 64 bits.
    pub fn to_mask(&self) -> u64 {
        assert!(self.len <= WORD_BITS, "vector longer than 64 bits");
        self.words.first().copied().unwrap_or(0)
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.len
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    #[inline]
    pub fn words(&self) -> &[u64] {
        &self.words
    }

    #[inline]
    pub fn get(&self, i: usize) -> bool {
        debug_assert!(i < self.len);
        (self.words[i / WORD_BITS] >> (i % WORD_BITS)) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, i: usize, value: bool) {
        assert!(i < self.len, "bit index {i} out of range {}", self.len);
        let mask = 1u64 << (i % WORD_BITS);
        if value {
            self.words[i / WORD_BITS] |= mask;
        } else {
            self.words[i / WORD_BITS] &= !mask;
        }
    }

    #[inline]
    pub fn flip(&mut self, i: usize) {
        assert!(i < self.len, "bit index {i} out of range {}", self.len);
        self.words[i / WORD_BITS] ^= 1u64 << (i % WORD_BITS);
    }

    pub fn weight(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    /// `self += other` over GF(2). Lengths must agree.
    pub fn xor_assign(&mut self, other: &BitVector) {
        assert_eq!(self.len, other.len, "xor of vectors with different lengths");
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a ^= b;
        }
    }

    pub fn xor(&self, other: &BitVector) -> BitVector {
        let mut out = self.clone();
        out.xor_assign(other);
        out
    }

    /// Bitwise AND.
    pub fn and(&self, other: &BitVector) -> BitVector {
        assert_eq!(self.len, other.len);
        BitVector {
            len: self.len,
            words: self.words.iter().zip(&other.words).map(|(a, b)| a & b).collect(),
        }
    }

    /// Bits of `self` that are not set in `other`.
    pub fn and_not(&self, other: &BitVector) -> BitVector {
        assert_eq!(self.len, other.len);
        BitVector {
            len: self.len,
            words: self.words.iter().zip(&other.words).map(|(a, b)| a & !b).collect(),
        }
    }

    pub fn or(&self, other: &BitVector) -> BitVector {
        assert_eq!(self.len, other.len);
        BitVector {
            len: self.len,
            words: self.words.iter().zip(&other.words).map(|(a, b)| a | b).collect(),
        }
    }

    /// Inner product modulo 2.
    pub fn dot(&self, other: &BitVector) -> bool {
        assert_eq!(self.len, other.len, "dot product of vectors with different lengths");
        let ones: u32 = self
            .words
            .iter()
            .zip(&other.words)
            .map(|(a, b)| (a & b).count_ones())
            .sum();
        ones & 1 == 1
    }

    /// Indices of set bits in increasing order.
    pub fn iter_ones(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(wi, &w)| {
            let mut rest = w;
            std::iter::from_fn(move || {
                if rest == 0 {
                    None
                } else {
                    let tz = rest.trailing_zeros() as usize;
                    rest &= rest - 1;
                    Some(wi * WORD_BITS + tz)
                }
            })
        })
    }
}

impl fmt::Debug for BitVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BitVector({self})")
    }
}

impl fmt::Display for BitVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.len {
            f.write_str(if self.get(i) { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl FromStr for BitVector {
    type Err = Error;

    /// Parses a string of '0'/'1' characters, leftmost character = index 0.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let mut v = BitVector::zeros(s.len());
        for (i, c) in s.chars().enumerate() {
            match c {
                '0' => {}
                '1' => v.set(i, true),
                other => return Err(Error::Parse(format!("unexpected character {other:?} in bit string"))),
            }
        }
        Ok(v)
    }
}

/// A dense GF(2) matrix stored as packed rows.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BitMatrix {
    cols: usize,
    rows: Vec<BitVector>,
}

/// Reduced row echelon form of a matrix together with its pivot columns.
#[derive(Clone, Debug)]
pub struct Echelon {
    cols: usize,
    /// Nonzero rows of the reduced form; row `i` has its leading one at `pivots[i]`.
    rows: Vec<BitVector>,
    pivots: Vec<usize>,
}

impl Echelon {
    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    pub fn rows(&self) -> &[BitVector] {
        &self.rows
    }

    /// Reduces `v` against the row space; the result is zero iff `v` lies in it.
    pub fn reduce(&self, v: &BitVector) -> BitVector {
        assert_eq!(v.len(), self.cols);
        let mut out = v.clone();
        for (row, &p) in self.rows.iter().zip(&self.pivots) {
            if out.get(p) {
                out.xor_assign(row);
            }
        }
        out
    }

    pub fn contains(&self, v: &BitVector) -> bool {
        self.reduce(v).is_zero()
    }

    pub fn into_matrix(self) -> BitMatrix {
        BitMatrix {
            cols: self.cols,
            rows: self.rows,
        }
    }
}

impl BitMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            cols,
            rows: vec![BitVector::zeros(cols); rows],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, true);
        }
        m
    }

    /// Builds a matrix from rows; every row must have length `cols`.
    pub fn from_rows(cols: usize, rows: Vec<BitVector>) -> Result<Self> {
        if let Some(bad) = rows.iter().find(|r| r.len() != cols) {
            return Err(Error::DimensionMismatch(format!(
                "row of length {} in a matrix with {cols} columns",
                bad.len()
            )));
        }
        Ok(Self { cols, rows })
    }

    /// Convenience constructor from '0'/'1' row strings. Panics on malformed input.
    pub fn from_strs(cols: usize, rows: &[&str]) -> Self {
        let rows = rows
            .iter()
            .map(|r| r.parse::<BitVector>().expect("malformed bit string"))
            .collect();
        Self::from_rows(cols, rows).expect("row length does not match column count")
    }

    #[inline]
    pub fn num_rows(&self) -> usize {
        self.rows.len()
    }

    #[inline]
    pub fn num_cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn row(&self, i: usize) -> &BitVector {
        &self.rows[i]
    }

    pub fn rows(&self) -> &[BitVector] {
        &self.rows
    }

    pub fn into_rows(self) -> Vec<BitVector> {
        self.rows
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> bool {
        self.rows[r].get(c)
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, value: bool) {
        self.rows[r].set(c, value);
    }

    pub fn push_row(&mut self, row: BitVector) -> Result<()> {
        if row.len() != self.cols {
            return Err(Error::DimensionMismatch(format!(
                "pushing row of length {} onto {} columns",
                row.len(),
                self.cols
            )));
        }
        self.rows.push(row);
        Ok(())
    }

    pub fn is_zero(&self) -> bool {
        self.rows.iter().all(BitVector::is_zero)
    }

    pub fn weight(&self) -> usize {
        self.rows.iter().map(BitVector::weight).sum()
    }

    pub fn transpose(&self) -> BitMatrix {
        let mut t = BitMatrix::zeros(self.cols, self.rows.len());
        for (r, row) in self.rows.iter().enumerate() {
            for c in row.iter_ones() {
                t.rows[c].set(r, true);
            }
        }
        t
    }

    /// Matrix product over GF(2).
    pub fn mat_mul(&self, other: &BitMatrix) -> Result<BitMatrix> {
        if self.cols != other.num_rows() {
            return Err(Error::DimensionMismatch(format!(
                "cannot multiply {}x{} by {}x{}",
                self.num_rows(),
                self.cols,
                other.num_rows(),
                other.cols
            )));
        }
        let rows = self
            .rows
            .iter()
            .map(|row| {
                let mut acc = BitVector::zeros(other.cols);
                for k in row.iter_ones() {
                    acc.xor_assign(&other.rows[k]);
                }
                acc
            })
            .collect();
        Ok(BitMatrix { cols: other.cols, rows })
    }

    /// Matrix-vector product `self · x`.
    pub fn mul_vec(&self, x: &BitVector) -> Result<BitVector> {
        if x.len() != self.cols {
            return Err(Error::DimensionMismatch(format!(
                "vector of length {} against {} columns",
                x.len(),
                self.cols
            )));
        }
        let mut out = BitVector::zeros(self.rows.len());
        for (i, row) in self.rows.iter().enumerate() {
            if row.dot(x) {
                out.set(i, true);
            }
        }
        Ok(out)
    }

    /// Reduced row echelon form with lowest-index pivoting.
    pub fn echelon(&self) -> Echelon {
        let mut rows = self.rows.clone();
        let mut pivots = Vec::new();
        let mut next = 0;
        for col in 0..self.cols {
            if next == rows.len() {
                break;
            }
            let Some(p) = (next..rows.len()).find(|&r| rows[r].get(col)) else {
                continue;
            };
            rows.swap(next, p);
            let pivot_row = rows[next].clone();
            for (r, row) in rows.iter_mut().enumerate() {
                if r != next && row.get(col) {
                    row.xor_assign(&pivot_row);
                }
            }
            pivots.push(col);
            next += 1;
        }
        rows.truncate(next);
        Echelon {
            cols: self.cols,
            rows,
            pivots,
        }
    }

    pub fn rank(&self) -> usize {
        // Forward elimination only; cheaper than the full reduced form.
        let mut rows = self.rows.clone();
        let mut rank = 0;
        for col in 0..self.cols {
            if rank == rows.len() {
                break;
            }
            let Some(p) = (rank..rows.len()).find(|&r| rows[r].get(col)) else {
                continue;
            };
            rows.swap(rank, p);
            let (head, tail) = rows.split_at_mut(rank + 1);
            let pivot_row = &head[rank];
            for row in tail.iter_mut() {
                if row.get(col) {
                    row.xor_assign(pivot_row);
                }
            }
            rank += 1;
        }
        rank
    }

    /// Basis of the right kernel `{x : self · x = 0}`, one basis vector per row.
    pub fn kernel_basis(&self) -> BitMatrix {
        let ech = self.echelon();
        let mut is_pivot = vec![false; self.cols];
        for &p in &ech.pivots {
            is_pivot[p] = true;
        }
        let mut basis = Vec::with_capacity(self.cols - ech.rank());
        for free in (0..self.cols).filter(|&c| !is_pivot[c]) {
            let mut x = BitVector::zeros(self.cols);
            x.set(free, true);
            for (row, &p) in ech.rows.iter().zip(&ech.pivots) {
                if row.get(free) {
                    x.set(p, true);
                }
            }
            basis.push(x);
        }
        BitMatrix {
            cols: self.cols,
            rows: basis,
        }
    }

    /// Some `x` with `self · x = b`, or `None` when the system is inconsistent.
    /// Free variables are set to zero.
    pub fn solve(&self, b: &BitVector) -> Result<Option<BitVector>> {
        if b.len() != self.rows.len() {
            return Err(Error::DimensionMismatch(format!(
                "right-hand side of length {} for {} rows",
                b.len(),
                self.rows.len()
            )));
        }
        // Augment each row with its right-hand side bit in an extra column.
        let aug_cols = self.cols + 1;
        let aug_rows = self
            .rows
            .iter()
            .enumerate()
            .map(|(i, row)| {
                let mut r = BitVector::zeros(aug_cols);
                for c in row.iter_ones() {
                    r.set(c, true);
                }
                if b.get(i) {
                    r.set(self.cols, true);
                }
                r
            })
            .collect();
        let ech = BitMatrix {
            cols: aug_cols,
            rows: aug_rows,
        }
        .echelon();
        if ech.pivots.last() == Some(&self.cols) {
            return Ok(None);
        }
        let mut x = BitVector::zeros(self.cols);
        for (row, &p) in ech.rows.iter().zip(&ech.pivots) {
            if row.get(self.cols) {
                x.set(p, true);
            }
        }
        Ok(Some(x))
    }

    /// Rows of `self` followed by rows of `other`.
    pub fn vstack(&self, other: &BitMatrix) -> Result<BitMatrix> {
        if self.cols != other.cols {
            return Err(Error::DimensionMismatch(format!(
                "stacking {} columns on {} columns",
                other.cols, self.cols
            )));
        }
        let mut rows = self.rows.clone();
        rows.extend(other.rows.iter().cloned());
        Ok(BitMatrix { cols: self.cols, rows })
    }

    /// Keeps only the listed columns, in the given order.
    pub fn select_columns(&self, columns: &[usize]) -> BitMatrix {
        let rows = self
            .rows
            .iter()
            .map(|row| {
                let mut r = BitVector::zeros(columns.len());
                for (j, &c) in columns.iter().enumerate() {
                    if row.get(c) {
                        r.set(j, true);
                    }
                }
                r
            })
            .collect();
        BitMatrix {
            cols: columns.len(),
            rows,
        }
    }

    /// Line-oriented text: "rows cols" then one '0'/'1' string per row.
    pub fn to_text(&self) -> String {
        let mut s = format!("{} {}\n", self.rows.len(), self.cols);
        for row in &self.rows {
            s.push_str(&row.to_string());
            s.push('\n');
        }
        s
    }

    /// Parses the format written by [`BitMatrix::to_text`].
    pub fn from_text(text: &str) -> Result<BitMatrix> {
        let mut lines = text.lines();
        let (m, consumed) = Self::parse_lines(&mut lines)?;
        debug_assert!(consumed > 0);
        if lines.any(|l| !l.trim().is_empty()) {
            return Err(Error::Parse("trailing content after matrix".into()));
        }
        Ok(m)
    }

    /// Parses one matrix block from a line iterator, returning it and the number of lines used.
    pub(crate) fn parse_lines<'a, I: Iterator<Item = &'a str>>(lines: &mut I) -> Result<(BitMatrix, usize)> {
        let header = lines
            .next()
            .ok_or_else(|| Error::Parse("missing matrix header".into()))?;
        let mut parts = header.split_whitespace();
        let parse_count = |p: Option<&str>| -> Result<usize> {
            p.ok_or_else(|| Error::Parse(format!("bad matrix header {header:?}")))?
                .parse::<usize>()
                .map_err(|e| Error::Parse(format!("bad matrix header {header:?}: {e}")))
        };
        let rows = parse_count(parts.next())?;
        let cols = parse_count(parts.next())?;
        if parts.next().is_some() {
            return Err(Error::Parse(format!("bad matrix header {header:?}")));
        }
        let mut out = Vec::with_capacity(rows);
        for i in 0..rows {
            let line = lines
                .next()
                .ok_or_else(|| Error::Parse(format!("expected {rows} rows, found {i}")))?;
            let row: BitVector = line.parse()?;
            if row.len() != cols {
                return Err(Error::Parse(format!(
                    "row {i} has {} characters, expected {cols}",
                    row.len()
                )));
            }
            out.push(row);
        }
        Ok((BitMatrix { cols, rows: out }, rows + 1))
    }
}

impl fmt::Debug for BitMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "BitMatrix {}x{} [", self.rows.len(), self.cols)?;
        for row in &self.rows {
            writeln!(f, "  {row}")?;
        }
        write!(f, "]")
    }
}

impl fmt::Display for BitMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

impl FromStr for BitMatrix {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        BitMatrix::from_text(s)
    }
}

/// Lexicographic stream of `k`-subsets of `0..n`, as sorted index lists.
#[derive(Clone, Debug)]
pub struct Combinations {
    n: usize,
    idx: Vec<usize>,
    done: bool,
}

impl Combinations {
    pub fn new(n: usize, k: usize) -> Self {
        Self {
            n,
            idx: (0..k).collect(),
            done: k > n,
        }
    }

    /// Current subset, or `None` once exhausted. Call [`Combinations::advance`] to step.
    pub fn current(&self) -> Option<&[usize]> {
        (!self.done).then_some(self.idx.as_slice())
    }

    pub fn advance(&mut self) {
        let k = self.idx.len();
        let mut i = k;
        while i > 0 {
            i -= 1;
            if self.idx[i] < self.n - k + i {
                self.idx[i] += 1;
                for j in i + 1..k {
                    self.idx[j] = self.idx[j - 1] + 1;
                }
                return;
            }
        }
        self.done = true;
    }
}

impl Iterator for Combinations {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        let cur = self.current()?.to_vec();
        self.advance();
        Some(cur)
    }
}

/// Index sets of size 0, 1, ..., `max_weight` over `0..length`, weight-major and
/// lexicographic within each weight.
#[derive(Clone, Debug)]
pub struct WeightOrder {
    length: usize,
    max_weight: usize,
    weight: usize,
    combos: Combinations,
}

impl WeightOrder {
    pub fn new(length: usize, max_weight: usize) -> Self {
        Self {
            length,
            max_weight,
            weight: 0,
            combos: Combinations::new(length, 0),
        }
    }

    pub fn current(&mut self) -> Option<&[usize]> {
        loop {
            if self.combos.current().is_some() {
                return self.combos.current();
            }
            if self.weight >= self.max_weight || self.weight >= self.length {
                return None;
            }
            self.weight += 1;
            self.combos = Combinations::new(self.length, self.weight);
        }
    }

    pub fn advance(&mut self) {
        self.combos.advance();
    }
}

impl Iterator for WeightOrder {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        let cur = self.current()?.to_vec();
        self.advance();
        Some(cur)
    }
}

/// All vectors of length `length` with weight at most `max_weight`, in
/// non-decreasing weight order (lexicographic on support within a weight).
pub fn enumerate_by_weight(length: usize, max_weight: usize) -> impl Iterator<Item = BitVector> {
    WeightOrder::new(length, max_weight.min(length)).map(move |support| BitVector::from_indices(length, &support))
}

/// Binomial coefficient, saturating at `u128::MAX`.
pub fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = match acc.checked_mul((n - i) as u128) {
            Some(v) => v / (i as u128 + 1),
            None => return u128::MAX,
        };
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    fn naive_mul(a: &BitMatrix, b: &BitMatrix) -> BitMatrix {
        let mut out = BitMatrix::zeros(a.num_rows(), b.num_cols());
        for i in 0..a.num_rows() {
            for j in 0..b.num_cols() {
                let mut acc = false;
                for k in 0..a.num_cols() {
                    acc ^= a.get(i, k) & b.get(k, j);
                }
                out.set(i, j, acc);
            }
        }
        out
    }

    #[test]
    fn rank_examples() {
        assert_eq!(BitMatrix::identity(3).rank(), 3);
        assert_eq!(BitMatrix::zeros(3, 3).rank(), 0);
        let m = BitMatrix::from_strs(3, &["110", "011", "101"]);
        assert_eq!(m.rank(), 2);
        assert_eq!(m.transpose().rank(), 2);
        assert_eq!(m.echelon().rank(), 2);
    }

    #[test]
    fn kernel_examples() {
        assert_eq!(BitMatrix::identity(3).kernel_basis().num_rows(), 0);
        let z = BitMatrix::zeros(2, 4).kernel_basis();
        assert_eq!(z.num_rows(), 4);
        assert_eq!(z.rank(), 4);

        let k = BitMatrix::from_strs(4, &["1111"]).kernel_basis();
        assert_eq!(k.num_rows(), 3);
        // Oracle: all 8 kernel vectors of 1111 are the even-weight words.
        let mut span = std::collections::HashSet::new();
        for mask in 0u32..8 {
            let mut v = BitVector::zeros(4);
            for (i, row) in k.rows().iter().enumerate() {
                if mask >> i & 1 == 1 {
                    v.xor_assign(row);
                }
            }
            assert_eq!(v.weight() % 2, 0);
            span.insert(v);
        }
        assert_eq!(span.len(), 8);
    }

    #[test]
    fn solve_examples() {
        let b: BitVector = "101".parse().unwrap();
        assert_eq!(BitMatrix::identity(3).solve(&b).unwrap(), Some(b.clone()));
        assert_eq!(BitMatrix::zeros(3, 3).solve(&b).unwrap(), None);

        let m = BitMatrix::from_strs(3, &["110", "011"]);
        let rhs: BitVector = "11".parse().unwrap();
        let x = m.solve(&rhs).unwrap().unwrap();
        assert_eq!(m.mul_vec(&x).unwrap(), rhs);
        // Free variable x3 = 0 with lowest-index pivots forces x2 = 1, x1 = 0.
        assert_eq!(x.to_string(), "010");
        // Every solution found by enumeration satisfies x1+x2 = 1, x2+x3 = 1.
        let sols: Vec<_> = enumerate_by_weight(3, 3)
            .filter(|x| m.mul_vec(x).unwrap() == rhs)
            .collect();
        assert_eq!(sols.len(), 2);

        assert!(matches!(
            m.solve(&BitVector::zeros(3)),
            Err(Error::DimensionMismatch(_))
        ));
    }

    #[test]
    fn mat_mul_examples() {
        let a = BitMatrix::from_strs(3, &["101", "011"]);
        assert_eq!(a.mat_mul(&BitMatrix::identity(3)).unwrap(), a);
        let row = BitMatrix::from_strs(2, &["11"]);
        let col = BitMatrix::from_strs(1, &["1", "1"]);
        assert!(row.mat_mul(&col).unwrap().is_zero());
        assert!(a.mat_mul(&a).is_err());
    }

    #[test]
    fn enumerate_examples() {
        let w0: Vec<String> = enumerate_by_weight(3, 0).map(|v| v.to_string()).collect();
        assert_eq!(w0, ["000"]);
        let w1: Vec<String> = enumerate_by_weight(3, 1).map(|v| v.to_string()).collect();
        assert_eq!(w1, ["000", "100", "010", "001"]);
        let all: Vec<_> = enumerate_by_weight(5, 2).collect();
        assert_eq!(all.len(), 16);
        assert!(all.windows(2).all(|w| w[0].weight() <= w[1].weight()));
        let distinct: std::collections::HashSet<_> = all.into_iter().collect();
        assert_eq!(distinct.len(), 16);
    }

    #[test]
    fn text_round_trip() {
        let m = BitMatrix::from_strs(4, &["1010", "0111"]);
        let text = m.to_text();
        assert_eq!(text, "2 4\n1010\n0111\n");
        assert_eq!(BitMatrix::from_text(&text).unwrap(), m);
        assert!(BitMatrix::from_text("2 4\n1010\n").is_err());
        assert!(BitMatrix::from_text("1 3\n10x\n").is_err());
        assert_eq!(BitMatrix::from_text("0 5\n").unwrap().num_cols(), 5);
    }

    #[test]
    fn wide_vectors_keep_tail_clear() {
        let mut v = BitVector::zeros(130);
        v.set(129, true);
        v.set(64, true);
        assert_eq!(v.weight(), 2);
        assert_eq!(v.iter_ones().collect::<Vec<_>>(), vec![64, 129]);
        let m = BitVector::from_mask(10, u64::MAX);
        assert_eq!(m.weight(), 10);
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn matrix(rows: usize, cols: usize) -> impl Strategy<Value = BitMatrix> {
            proptest::collection::vec(proptest::collection::vec(any::<bool>(), cols), rows).prop_map(move |bits| {
                let rows = bits.iter().map(|r| BitVector::from_bools(r)).collect();
                BitMatrix::from_rows(cols, rows).unwrap()
            })
        }

        fn sized_matrix(max: usize) -> impl Strategy<Value = BitMatrix> {
            (0..=max, 0..=max).prop_flat_map(|(r, c)| matrix(r, c))
        }

        proptest! {
            #[test]
            fn rank_nullity(m in sized_matrix(12)) {
                let kernel = m.kernel_basis();
                prop_assert_eq!(m.rank() + kernel.num_rows(), m.num_cols());
                prop_assert_eq!(m.rank(), m.transpose().rank());
                for x in kernel.rows() {
                    prop_assert!(m.mul_vec(x).unwrap().is_zero());
                }
            }

            #[test]
            fn solve_is_exact(m in sized_matrix(10), seed in any::<u64>()) {
                // Right-hand side in the column space, built from a pseudo-random x.
                let x0 = BitVector::from_bools(&(0..m.num_cols()).map(|i| (seed >> (i % 64)) & 1 == 1).collect::<Vec<_>>());
                let b = m.mul_vec(&x0).unwrap();
                let x = m.solve(&b).unwrap().expect("consistent system");
                prop_assert_eq!(m.mul_vec(&x).unwrap(), b);
            }

            #[test]
            fn mat_mul_matches_naive((a, b) in (1usize..=6, 1usize..=6, 1usize..=6)
                .prop_flat_map(|(r, k, c)| (matrix(r, k), matrix(k, c)))) {
                prop_assert_eq!(a.mat_mul(&b).unwrap(), naive_mul(&a, &b));
            }

            #[test]
            fn mat_mul_associative((a, b, c) in (1usize..=5, 1usize..=5, 1usize..=5, 1usize..=5)
                .prop_flat_map(|(r, k, l, c)| (matrix(r, k), matrix(k, l), matrix(l, c)))) {
                let left = a.mat_mul(&b).unwrap().mat_mul(&c).unwrap();
                let right = a.mat_mul(&b.mat_mul(&c).unwrap()).unwrap();
                prop_assert_eq!(left, right);
            }

            #[test]
            fn enumeration_count(len in 0usize..10, w in 0usize..10) {
                let w = w.min(len);
                let expected: u128 = (0..=w).map(|i| binomial(len, i)).sum();
                let all: Vec<_> = enumerate_by_weight(len, w).collect();
                prop_assert_eq!(all.len() as u128, expected);
                let distinct: std::collections::HashSet<_> = all.iter().cloned().collect();
                prop_assert_eq!(distinct.len(), all.len());
            }

            #[test]
            fn text_format_round_trips(m in sized_matrix(8)) {
                prop_assert_eq!(BitMatrix::from_text(&m.to_text()).unwrap(), m);
            }
        }
    }
}
