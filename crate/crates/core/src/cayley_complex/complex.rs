use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use super::group::{FiniteGroup, GeneratingSetPair};
use crate::error::{Error, Result};

/// A square `{(g,0), (ag,1), (gb,1), (agb,0)}` stored under its canonical key.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Square {
    /// Lexicographically smaller of `(g, a, b)` and `(agb, a⁻¹, b⁻¹)` (group element ids).
    pub key: (usize, usize, usize),
    /// Group elements of the two V₀ corners `g`, `agb` (for the canonical key).
    pub v0: [usize; 2],
    /// Group elements of the two V₁ corners `ag`, `gb` (for the canonical key).
    pub v1: [usize; 2],
}

/// Which derived graph to build.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GraphKind {
    /// Bipartite graph on V₀ ⊔ V₁ with the A- and B-edges.
    Union,
    /// Square graph on V₀: one edge per square between its V₀ corners.
    Square0,
    /// Square graph on V₁: one edge per square between its V₁ corners.
    Square1,
}

/// An undirected multigraph; `edges[i]` is edge id `i`.
#[derive(Clone, Debug)]
pub struct Graph {
    pub num_vertices: usize,
    pub edges: Vec<(usize, usize)>,
    pub adjacency: Vec<Vec<usize>>,
}

impl Graph {
    pub fn from_edges(num_vertices: usize, edges: Vec<(usize, usize)>) -> Self {
        let mut adjacency = vec![Vec::new(); num_vertices];
        for &(u, v) in &edges {
            adjacency[u].push(v);
            if u != v {
                adjacency[v].push(u);
            }
        }
        Self {
            num_vertices,
            edges,
            adjacency,
        }
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adjacency[v].len()
    }

    /// Common degree if the graph is regular.
    pub fn regular_degree(&self) -> Option<usize> {
        let d = self.adjacency.first().map_or(0, Vec::len);
        self.adjacency.iter().all(|a| a.len() == d).then_some(d)
    }

    pub fn has_parallel_edges(&self) -> bool {
        self.adjacency.iter().any(|adj| {
            let mut sorted = adj.clone();
            sorted.sort_unstable();
            sorted.windows(2).any(|w| w[0] == w[1])
        })
    }

    pub fn has_loops(&self) -> bool {
        self.edges.iter().any(|&(u, v)| u == v)
    }

    pub fn is_connected(&self) -> bool {
        if self.num_vertices == 0 {
            return true;
        }
        let mut seen = vec![false; self.num_vertices];
        let mut stack = vec![0];
        seen[0] = true;
        let mut count = 1;
        while let Some(u) = stack.pop() {
            for &v in &self.adjacency[u] {
                if !seen[v] {
                    seen[v] = true;
                    count += 1;
                    stack.push(v);
                }
            }
        }
        count == self.num_vertices
    }

    /// A proper 2-colouring if one exists (for a connected graph it is unique up to swap).
    pub fn bipartition(&self) -> Option<Vec<bool>> {
        let mut colour: Vec<Option<bool>> = vec![None; self.num_vertices];
        for start in 0..self.num_vertices {
            if colour[start].is_some() {
                continue;
            }
            colour[start] = Some(false);
            let mut stack = vec![start];
            while let Some(u) = stack.pop() {
                let cu = colour[u].unwrap();
                for &v in &self.adjacency[u] {
                    match colour[v] {
                        None => {
                            colour[v] = Some(!cu);
                            stack.push(v);
                        }
                        Some(cv) if cv == cu => return None,
                        _ => {}
                    }
                }
            }
        }
        Some(colour.into_iter().map(|c| c.unwrap()).collect())
    }

    /// `E(S,T) = Σ_{s∈S, t∈T} A[s][t]` counted with multiplicity (edges inside S∩T count twice).
    pub fn edges_between(&self, s: &[bool], t: &[bool]) -> usize {
        self.adjacency
            .iter()
            .enumerate()
            .filter(|(u, _)| s[*u])
            .map(|(_, adj)| adj.iter().filter(|&&v| t[v]).count())
            .sum()
    }
}

/// The left-right Cayley complex of a group with a TNC generating pair.
#[derive(Clone, Debug)]
pub struct LeftRightCayleyComplex {
    group: FiniteGroup,
    pair: GeneratingSetPair,
    squares: Vec<Square>,
    /// `v0_view[g·Δ² + i·Δ + j]` is the square of `(g, A[i], B[j])`.
    v0_view: Vec<u32>,
    /// `v1_view[h·Δ² + i·Δ + j]` is the square of `(A[i]·h, A[i]⁻¹, B[j])`.
    v1_view: Vec<u32>,
    inv_a: Vec<usize>,
    inv_b: Vec<usize>,
}

impl LeftRightCayleyComplex {
    /// Builds every square, canonicalizes it, and fills both local-view maps.
    ///
    /// For `v = (g,0)` the view is `(a,b) ↦ square(g, a, b)`. For `v = (h,1)` it is
    /// `(a,b) ↦ square(a·h, a⁻¹, b)`; with this orientation an A-edge joins row `a` of
    /// a V₀ view to row `a⁻¹` of the V₁ view, and a B-edge joins column `b` to column
    /// `b⁻¹`, with the other coordinate in the same order on both sides.
    pub fn build(group: FiniteGroup, pair: GeneratingSetPair) -> Result<Self> {
        pair.validate(&group)?;
        let delta = pair.delta();
        let n = group.order();
        let a_index: HashMap<usize, usize> = pair.gens_a.iter().enumerate().map(|(i, &a)| (a, i)).collect();
        let b_index: HashMap<usize, usize> = pair.gens_b.iter().enumerate().map(|(j, &b)| (b, j)).collect();
        let inv_a: Vec<usize> = pair.gens_a.iter().map(|&a| a_index[&group.inv(a)]).collect();
        let inv_b: Vec<usize> = pair.gens_b.iter().map(|&b| b_index[&group.inv(b)]).collect();

        let canonical = |g: usize, i: usize, j: usize| -> (usize, usize, usize) {
            let (a, b) = (pair.gens_a[i], pair.gens_b[j]);
            let other = (group.mul(group.mul(a, g), b), group.inv(a), group.inv(b));
            (g, a, b).min(other)
        };

        let mut keys: Vec<(usize, usize, usize)> = Vec::with_capacity(delta * delta * n / 2);
        for g in 0..n {
            for i in 0..delta {
                for j in 0..delta {
                    let key = canonical(g, i, j);
                    if key == (g, pair.gens_a[i], pair.gens_b[j]) {
                        keys.push(key);
                    }
                }
            }
        }
        keys.sort_unstable();
        let expected = delta * delta * n / 2;
        if keys.len() != expected || !(delta * delta * n).is_multiple_of(2) {
            return Err(Error::Invariant(format!(
                "square count {} differs from Δ²|G|/2 = {expected}",
                keys.len()
            )));
        }
        let id_of: HashMap<(usize, usize, usize), u32> = keys.iter().enumerate().map(|(i, &k)| (k, i as u32)).collect();
        let squares: Vec<Square> = keys
            .iter()
            .map(|&(g, a, b)| Square {
                key: (g, a, b),
                v0: [g, group.mul(group.mul(a, g), b)],
                v1: [group.mul(a, g), group.mul(g, b)],
            })
            .collect();

        let mut v0_view = vec![0u32; n * delta * delta];
        let mut v1_view = vec![0u32; n * delta * delta];
        for g in 0..n {
            for i in 0..delta {
                for j in 0..delta {
                    v0_view[(g * delta + i) * delta + j] = id_of[&canonical(g, i, j)];
                    let ah = group.mul(pair.gens_a[i], g);
                    v1_view[(g * delta + i) * delta + j] = id_of[&canonical(ah, inv_a[i], j)];
                }
            }
        }

        let complex = Self {
            group,
            pair,
            squares,
            v0_view,
            v1_view,
            inv_a,
            inv_b,
        };
        complex.check_invariants()?;
        Ok(complex)
    }

    /// Re-verifies the structural invariants; returns the first failure.
    pub fn check_invariants(&self) -> Result<()> {
        let n = self.group.order();
        let delta = self.delta();
        let fail = |what: String| Err(Error::Invariant(what));
        for (id, sq) in self.squares.iter().enumerate() {
            if sq.v0[0] == sq.v0[1] || sq.v1[0] == sq.v1[1] {
                return fail(format!("square {id} has repeated corners"));
            }
        }
        // Each square appears exactly twice among all V0 views and twice among V1 views,
        // once at each of its corners.
        for (side, view, corners) in [("V0", &self.v0_view, 0usize), ("V1", &self.v1_view, 1usize)] {
            let mut seen: Vec<Vec<usize>> = vec![Vec::with_capacity(2); self.squares.len()];
            for v in 0..n {
                let slice = &view[v * delta * delta..(v + 1) * delta * delta];
                let mut sorted = slice.to_vec();
                sorted.sort_unstable();
                if sorted.windows(2).any(|w| w[0] == w[1]) {
                    return fail(format!("local view of {side} vertex {v} is not injective"));
                }
                for &s in slice {
                    seen[s as usize].push(v);
                }
            }
            for (id, vs) in seen.iter_mut().enumerate() {
                vs.sort_unstable();
                let mut expect = if corners == 0 {
                    self.squares[id].v0
                } else {
                    self.squares[id].v1
                };
                expect.sort_unstable();
                if vs.as_slice() != expect {
                    return fail(format!("square {id} is not in the {side} views of exactly its corners"));
                }
            }
        }
        // Shared rows / columns across each edge.
        for g in 0..n {
            for i in 0..delta {
                let h = self.group.mul(self.pair.gens_a[i], g);
                for j in 0..delta {
                    if self.v0_square(g, i, j) != self.v1_square(h, self.inv_a[i], j) {
                        return fail(format!("A-edge ({g}, {h}) views disagree"));
                    }
                }
            }
            for j in 0..delta {
                let h = self.group.mul(g, self.pair.gens_b[j]);
                for i in 0..delta {
                    if self.v0_square(g, i, j) != self.v1_square(h, i, self.inv_b[j]) {
                        return fail(format!("B-edge ({g}, {h}) views disagree"));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn group(&self) -> &FiniteGroup {
        &self.group
    }

    pub fn pair(&self) -> &GeneratingSetPair {
        &self.pair
    }

    pub fn delta(&self) -> usize {
        self.pair.delta()
    }

    pub fn num_group_elements(&self) -> usize {
        self.group.order()
    }

    pub fn squares(&self) -> &[Square] {
        &self.squares
    }

    pub fn num_squares(&self) -> usize {
        self.squares.len()
    }

    /// Index of `a⁻¹` in A for the generator at index `i`.
    pub fn inv_a_index(&self, i: usize) -> usize {
        self.inv_a[i]
    }

    pub fn inv_b_index(&self, j: usize) -> usize {
        self.inv_b[j]
    }

    #[inline]
    pub fn v0_square(&self, g: usize, i: usize, j: usize) -> usize {
        let d = self.delta();
        self.v0_view[(g * d + i) * d + j] as usize
    }

    #[inline]
    pub fn v1_square(&self, h: usize, i: usize, j: usize) -> usize {
        let d = self.delta();
        self.v1_view[(h * d + i) * d + j] as usize
    }

    /// The Δ² square ids of a V₀ vertex, row-major over A×B.
    pub fn v0_view(&self, g: usize) -> &[u32] {
        let dd = self.delta() * self.delta();
        &self.v0_view[g * dd..(g + 1) * dd]
    }

    /// The Δ² square ids of a V₁ vertex, row-major over A×B.
    pub fn v1_view(&self, h: usize) -> &[u32] {
        let dd = self.delta() * self.delta();
        &self.v1_view[h * dd..(h + 1) * dd]
    }

    pub fn derived_graph(&self, kind: GraphKind) -> Graph {
        let n = self.group.order();
        match kind {
            GraphKind::Union => {
                let mut edges = Vec::with_capacity(2 * self.delta() * n);
                for g in 0..n {
                    for &a in &self.pair.gens_a {
                        edges.push((g, n + self.group.mul(a, g)));
                    }
                }
                for g in 0..n {
                    for &b in &self.pair.gens_b {
                        edges.push((g, n + self.group.mul(g, b)));
                    }
                }
                Graph::from_edges(2 * n, edges)
            }
            GraphKind::Square0 => Graph::from_edges(n, self.squares.iter().map(|s| (s.v0[0], s.v0[1])).collect()),
            GraphKind::Square1 => Graph::from_edges(n, self.squares.iter().map(|s| (s.v1[0], s.v1[1])).collect()),
        }
    }

    pub fn to_record(&self) -> ComplexRecord {
        ComplexRecord {
            group: self.group.descriptor().to_string(),
            group_order: self.group.order(),
            gens_a: self.pair.gens_a.clone(),
            gens_b: self.pair.gens_b.clone(),
            squares: self
                .squares
                .iter()
                .map(|s| SquareRecord {
                    corners: [s.v0[0], s.v1[0], s.v1[1], s.v0[1]],
                    key: [s.key.0, s.key.1, s.key.2],
                })
                .collect(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_record()).expect("complex record serializes")
    }
}

/// Serialized form of a complex.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComplexRecord {
    pub group: String,
    pub group_order: usize,
    pub gens_a: Vec<usize>,
    pub gens_b: Vec<usize>,
    pub squares: Vec<SquareRecord>,
}

/// One square: corners `(g,0), (ag,1), (gb,1), (agb,0)` as group element ids, and its key.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SquareRecord {
    pub corners: [usize; 4],
    pub key: [usize; 3],
}
