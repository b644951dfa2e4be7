use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::complex::Graph;
use crate::error::{Error, Result};

/// Iteration cap for power iteration.
pub const MAX_POWER_ITERATIONS: usize = 200_000;

fn adjacency_apply(graph: &Graph, x: &[f64], out: &mut [f64]) {
    for (u, adj) in graph.adjacency.iter().enumerate() {
        out[u] = adj.iter().map(|&v| x[v]).sum();
    }
}

fn normalize(x: &mut [f64]) -> f64 {
    let norm = x.iter().map(|v| v * v).sum::<f64>().sqrt();
    if norm > 0.0 {
        x.iter_mut().for_each(|v| *v /= norm);
    }
    norm
}

fn project_out(x: &mut [f64], directions: &[Vec<f64>]) {
    for d in directions {
        let dot: f64 = x.iter().zip(d).map(|(a, b)| a * b).sum();
        x.iter_mut().zip(d).for_each(|(a, b)| *a -= dot * b);
    }
}

fn unit_ones(n: usize) -> Vec<f64> {
    vec![1.0 / (n as f64).sqrt(); n]
}

fn signed_bipartition(side: &[bool]) -> Vec<f64> {
    let s = 1.0 / (side.len() as f64).sqrt();
    side.iter().map(|&b| if b { -s } else { s }).collect()
}

/// Power iteration for the top eigenpair of a PSD operator on the complement of
/// `deflate`; stops when `‖Mx − μx‖ ≤ tolerance`.
fn deflated_power<F>(n: usize, deflate: &[Vec<f64>], tolerance: f64, mut apply: F) -> Result<f64>
where
    F: FnMut(&[f64], &mut [f64]),
{
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed ^ n as u64);
    let mut x: Vec<f64> = (0..n).map(|_| rng.gen::<f64>() - 0.5).collect();
    project_out(&mut x, deflate);
    if normalize(&mut x) == 0.0 {
        return Ok(0.0);
    }
    let mut y = vec![0.0; n];
    let mut residual = f64::INFINITY;
    for _ in 0..MAX_POWER_ITERATIONS {
        apply(&x, &mut y);
        project_out(&mut y, deflate);
        let mu: f64 = x.iter().zip(&y).map(|(a, b)| a * b).sum();
        residual = x.iter().zip(&y).map(|(a, b)| (b - mu * a).powi(2)).sum::<f64>().sqrt();
        if residual <= tolerance {
            return Ok(mu);
        }
        if normalize(&mut y) == 0.0 {
            return Ok(0.0);
        }
        std::mem::swap(&mut x, &mut y);
    }
    Err(Error::NonConvergence {
        iterations: MAX_POWER_ITERATIONS,
        residual,
    })
}

fn regular_degree(graph: &Graph) -> Result<usize> {
    graph
        .regular_degree()
        .ok_or_else(|| Error::Precondition("spectral routines need a regular graph".into()))
}

/// Unit vectors spanning the trivial eigenspaces: all-ones, plus the signed
/// bipartition vector for a connected bipartite graph.
fn trivial_directions(graph: &Graph) -> Vec<Vec<f64>> {
    let n = graph.num_vertices;
    let mut out = vec![unit_ones(n)];
    if let Some(side) = graph.bipartition() {
        if graph.is_connected() {
            out.push(signed_bipartition(&side));
        }
    }
    out
}

/// Signed second-largest adjacency eigenvalue of a regular graph.
///
/// Power iteration on `A + D·I` (spectrum in `[0, 2D]`) orthogonal to the all-ones vector.
pub fn signed_second_eigenvalue(graph: &Graph, tolerance: f64) -> Result<f64> {
    let d = regular_degree(graph)? as f64;
    let n = graph.num_vertices;
    if n < 2 {
        return Err(Error::Precondition("graph needs at least two vertices".into()));
    }
    let mut tmp = vec![0.0; n];
    let shifted = deflated_power(n, &[unit_ones(n)], tolerance, |x, out| {
        adjacency_apply(graph, x, &mut tmp);
        out.iter_mut().zip(&tmp).zip(x).for_each(|((o, a), xi)| *o = a + d * xi);
    })?;
    Ok(shifted - d)
}

/// Smallest adjacency eigenvalue outside the trivial eigenspaces, via power
/// iteration on `D·I − A`.
pub fn smallest_nontrivial_eigenvalue(graph: &Graph, tolerance: f64) -> Result<f64> {
    let d = regular_degree(graph)? as f64;
    let n = graph.num_vertices;
    if n < 2 {
        return Err(Error::Precondition("graph needs at least two vertices".into()));
    }
    let mut tmp = vec![0.0; n];
    let shifted = deflated_power(n, &trivial_directions(graph), tolerance, |x, out| {
        adjacency_apply(graph, x, &mut tmp);
        out.iter_mut().zip(&tmp).zip(x).for_each(|((o, a), xi)| *o = d * xi - a);
    })?;
    Ok(d - shifted)
}

/// The expansion parameter λ(𝒢): the largest eigenvalue magnitude outside the
/// trivial eigenspaces (eigenvalue D, and −D for a connected bipartite graph).
///
/// This is the value for which `E(S,T) ≤ D|S||T|/|V| + λ√(|S||T|)` holds for all
/// `S, T` (with `S`, `T` on opposite sides for a bipartite graph).
pub fn second_eigenvalue(graph: &Graph, tolerance: f64) -> Result<f64> {
    let top = signed_second_eigenvalue_deflated(graph, tolerance)?;
    let bottom = smallest_nontrivial_eigenvalue(graph, tolerance)?;
    Ok(top.abs().max(bottom.abs()))
}

fn signed_second_eigenvalue_deflated(graph: &Graph, tolerance: f64) -> Result<f64> {
    let d = regular_degree(graph)? as f64;
    let n = graph.num_vertices;
    let mut tmp = vec![0.0; n];
    let shifted = deflated_power(n, &trivial_directions(graph), tolerance, |x, out| {
        adjacency_apply(graph, x, &mut tmp);
        out.iter_mut().zip(&tmp).zip(x).for_each(|((o, a), xi)| *o = a + d * xi);
    })?;
    Ok(shifted - d)
}

/// Outcome of a randomized expander-mixing check.
#[derive(Clone, Debug, PartialEq)]
pub struct MixingReport {
    pub trials: usize,
    pub violations: usize,
    /// Largest `E(S,T) − D|S||T|/N − (λ + tolerance)√(|S||T|)` observed (≤ 0 when no violation).
    pub max_excess: f64,
    pub lambda: f64,
}

impl MixingReport {
    pub fn holds(&self) -> bool {
        self.violations == 0
    }
}

/// Checks `E(S,T) ≤ D|S||T|/N + (λ + tolerance)√(|S||T|)` on random subset pairs.
///
/// For a bipartite graph `S` is drawn from one side and `T` from the other, and
/// `N` is the size of one side; otherwise both are arbitrary subsets of all `N`
/// vertices. Each vertex joins a subset with a per-trial random density.
pub fn check_mixing(graph: &Graph, lambda: f64, tolerance: f64, trials: usize, seed: u64) -> Result<MixingReport> {
    let d = regular_degree(graph)? as f64;
    let n = graph.num_vertices;
    let sides = graph.bipartition().filter(|_| graph.is_connected());
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut report = MixingReport {
        trials,
        violations: 0,
        max_excess: f64::NEG_INFINITY,
        lambda,
    };
    for _ in 0..trials {
        let (ps, pt) = (rng.gen::<f64>(), rng.gen::<f64>());
        let mut s = vec![false; n];
        let mut t = vec![false; n];
        for v in 0..n {
            let (in_s_side, in_t_side) = match &sides {
                Some(side) => (!side[v], side[v]),
                None => (true, true),
            };
            s[v] = in_s_side && rng.gen::<f64>() < ps;
            t[v] = in_t_side && rng.gen::<f64>() < pt;
        }
        let (cs, ct) = (
            s.iter().filter(|&&b| b).count() as f64,
            t.iter().filter(|&&b| b).count() as f64,
        );
        let part = match &sides {
            Some(side) => side.iter().filter(|&&b| !b).count() as f64,
            None => n as f64,
        };
        let observed = graph.edges_between(&s, &t) as f64;
        let expected = d * cs * ct / part;
        let excess = observed - expected - (lambda + tolerance) * (cs * ct).sqrt();
        report.max_excess = report.max_excess.max(excess);
        if excess > 1e-9 {
            report.violations += 1;
        }
    }
    Ok(report)
}
