use std::collections::{HashMap, HashSet};

use nalgebra::{DMatrix, SymmetricEigen};
use proptest::prelude::*;
use qtanner::cayley_complex::{
    check_mixing, check_tnc, find_generating_pair, second_eigenvalue, signed_second_eigenvalue, ComplexRecord,
    FiniteGroup, GeneratingSetPair, Graph, GraphKind, LeftRightCayleyComplex, Tnc,
};
use qtanner::Error;

fn z12_pair() -> GeneratingSetPair {
    GeneratingSetPair {
        gens_a: vec![1, 11, 5, 7],
        gens_b: vec![2, 10, 3, 9],
    }
}

fn z12_complex() -> LeftRightCayleyComplex {
    LeftRightCayleyComplex::build(FiniteGroup::cyclic(12).unwrap(), z12_pair()).unwrap()
}

fn dense_spectrum(graph: &Graph) -> Vec<f64> {
    let n = graph.num_vertices;
    let mut m = DMatrix::<f64>::zeros(n, n);
    for &(u, v) in &graph.edges {
        m[(u, v)] += 1.0;
        if u != v {
            m[(v, u)] += 1.0;
        }
    }
    let mut eig: Vec<f64> = SymmetricEigen::new(m).eigenvalues.iter().copied().collect();
    eig.sort_by(|a, b| b.partial_cmp(a).unwrap());
    eig
}

/// Counts that do not rely on the complex's own bookkeeping.
fn assert_combinatorics(complex: &LeftRightCayleyComplex) {
    let delta = complex.delta();
    let n = complex.num_group_elements();
    let group = complex.group();
    let pair = complex.pair();
    assert_eq!(complex.num_squares(), delta * delta * n / 2);

    // Each square is hit by exactly two parameterizations (g, a, b).
    let mut hits: HashMap<[usize; 4], usize> = HashMap::new();
    for g in 0..n {
        for &a in &pair.gens_a {
            for &b in &pair.gens_b {
                let ag = group.mul(a, g);
                let gb = group.mul(g, b);
                let agb = group.mul(ag, b);
                let corners = {
                    let mut v0 = [g, agb];
                    v0.sort_unstable();
                    let mut v1 = [ag, gb];
                    v1.sort_unstable();
                    assert!(v0[0] != v0[1] && v1[0] != v1[1], "degenerate square");
                    [v0[0], v0[1], v1[0], v1[1]]
                };
                *hits.entry(corners).or_default() += 1;
            }
        }
    }
    let total: usize = hits.values().sum();
    assert_eq!(total, delta * delta * n);
    assert_eq!(total, 2 * complex.num_squares());

    // Incidences per vertex.
    let mut v0_inc = vec![0usize; n];
    let mut v1_inc = vec![0usize; n];
    for sq in complex.squares() {
        v0_inc[sq.v0[0]] += 1;
        v0_inc[sq.v0[1]] += 1;
        v1_inc[sq.v1[0]] += 1;
        v1_inc[sq.v1[1]] += 1;
    }
    assert!(v0_inc.iter().chain(&v1_inc).all(|&c| c == delta * delta));
    for v in 0..n {
        let set0: HashSet<u32> = complex.v0_view(v).iter().copied().collect();
        let set1: HashSet<u32> = complex.v1_view(v).iter().copied().collect();
        assert_eq!(set0.len(), delta * delta);
        assert_eq!(set1.len(), delta * delta);
    }

    let union = complex.derived_graph(GraphKind::Union);
    assert_eq!(union.num_vertices, 2 * n);
    assert_eq!(union.regular_degree(), Some(2 * delta));
    assert!(!union.has_parallel_edges());
    assert!(union.bipartition().is_some());
    assert_eq!(union.edges.len(), 2 * delta * n);
    for kind in [GraphKind::Square0, GraphKind::Square1] {
        let g = complex.derived_graph(kind);
        assert_eq!(g.num_vertices, n);
        assert_eq!(g.edges.len(), complex.num_squares());
        assert_eq!(g.regular_degree(), Some(delta * delta));
        assert!(!g.has_loops());
    }

    // Local-view consistency across every edge, as sets.
    for g in 0..n {
        for i in 0..delta {
            let h = group.mul(pair.gens_a[i], g);
            let row0: HashSet<u32> = complex.v0_view(g)[i * delta..(i + 1) * delta].iter().copied().collect();
            let shared: HashSet<u32> = complex
                .v1_view(h)
                .iter()
                .copied()
                .filter(|s| row0.contains(s))
                .collect();
            assert_eq!(shared, row0);
        }
        for j in 0..delta {
            let h = group.mul(g, pair.gens_b[j]);
            let col0: HashSet<u32> = (0..delta).map(|i| complex.v0_view(g)[i * delta + j]).collect();
            let shared: HashSet<u32> = complex
                .v1_view(h)
                .iter()
                .copied()
                .filter(|s| col0.contains(s))
                .collect();
            assert_eq!(shared, col0);
        }
    }
}

#[test]
fn cyclic_twelve_complex() {
    let complex = z12_complex();
    assert_eq!(complex.num_squares(), 96);
    assert_combinatorics(&complex);
    assert_eq!(complex.derived_graph(GraphKind::Union).degree(0), 8);
}

#[test]
fn cyclic_twelve_tnc_by_exhaustion() {
    let g = FiniteGroup::cyclic(12).unwrap();
    let pair = z12_pair();
    let mut violations = 0;
    for &a in &pair.gens_a {
        for &b in &pair.gens_b {
            for x in 0..12 {
                if (a + x) % 12 == (x + b) % 12 {
                    violations += 1;
                }
            }
        }
    }
    assert_eq!(violations, 0);
    assert_eq!(check_tnc(&g, &pair), Tnc::Ok);
}

#[test]
fn psl2_five_complexes() {
    let group = FiniteGroup::psl2(5).unwrap();
    for (delta, seed) in [(4, 1), (6, 2)] {
        let search = find_generating_pair(&group, delta, seed, 2000).unwrap();
        search.pair.validate(&group).unwrap();
        let complex = LeftRightCayleyComplex::build(group.clone(), search.pair).unwrap();
        assert_eq!(complex.num_squares(), delta * delta * 30);
        assert_combinatorics(&complex);
    }
}

/// PSL₂(3) ≅ A₄ admits no symmetric TNC generating pair of size 4: checked over every pair
/// of symmetric 4-subsets of the non-identity elements.
#[test]
fn psl2_three_has_no_size_four_pair() {
    let group = FiniteGroup::psl2(3).unwrap();
    let n = group.order();
    let others: Vec<usize> = (0..n).filter(|&g| g != group.identity()).collect();
    let mut symmetric_sets = Vec::new();
    for mask in 0u32..(1 << others.len()) {
        if mask.count_ones() != 4 {
            continue;
        }
        let set: Vec<usize> = (0..others.len())
            .filter(|i| mask >> i & 1 == 1)
            .map(|i| others[i])
            .collect();
        if set.iter().all(|&x| set.contains(&group.inv(x))) {
            symmetric_sets.push(set);
        }
    }
    assert!(!symmetric_sets.is_empty());
    for a in &symmetric_sets {
        for b in &symmetric_sets {
            let pair = GeneratingSetPair {
                gens_a: a.clone(),
                gens_b: b.clone(),
            };
            assert!(pair.validate(&group).is_err());
        }
    }
    assert!(matches!(
        find_generating_pair(&group, 4, 0, 500),
        Err(Error::ExhaustedAttempts { .. })
    ));
}

#[test]
fn full_size_generating_sets_fail() {
    for n in 2..=24 {
        let group = FiniteGroup::cyclic(n).unwrap();
        assert!(find_generating_pair(&group, n, 0, 50).is_err());
        let all: Vec<usize> = (0..n).collect();
        let pair = GeneratingSetPair {
            gens_a: all.clone(),
            gens_b: all,
        };
        assert!(matches!(check_tnc(&group, &pair), Tnc::Violation { .. }));
    }
}

#[test]
fn spectra_match_dense_oracle() {
    let tol = 1e-8;
    let mut graphs: Vec<Graph> = Vec::new();
    for n in [5usize, 9, 16, 31] {
        graphs.push(Graph::from_edges(n, (0..n).map(|u| (u, (u + 1) % n)).collect()));
    }
    let complex = z12_complex();
    for kind in [GraphKind::Union, GraphKind::Square0, GraphKind::Square1] {
        graphs.push(complex.derived_graph(kind));
    }
    for n in [13usize, 17, 29] {
        let edges = (0..n).flat_map(|u| [(u, (u + 1) % n), (u, (u + 5) % n)]).collect();
        graphs.push(Graph::from_edges(n, edges));
    }
    for g in &graphs {
        assert!(g.num_vertices <= 32);
        assert!(g.is_connected());
        let spectrum = dense_spectrum(g);
        let signed = signed_second_eigenvalue(g, tol).unwrap();
        assert!(
            (signed - spectrum[1]).abs() <= 1e-6,
            "signed λ₂ {signed} vs oracle {}",
            spectrum[1]
        );
        // Drop the trivial eigenvalues D and, for a bipartite graph, −D.
        let mut nontrivial = spectrum[1..].to_vec();
        if g.bipartition().is_some() {
            nontrivial.pop();
        }
        let oracle = nontrivial.iter().fold(0.0f64, |m, x| m.max(x.abs()));
        let lambda = second_eigenvalue(g, tol).unwrap();
        assert!((lambda - oracle).abs() <= 1e-6, "λ {lambda} vs oracle {oracle}");
    }
    let cycle = Graph::from_edges(11, (0..11).map(|u| (u, (u + 1) % 11)).collect());
    let l2 = signed_second_eigenvalue(&cycle, tol).unwrap();
    assert!((l2 - 2.0 * (2.0 * std::f64::consts::PI / 11.0).cos()).abs() < 1e-6);
}

#[test]
fn mixing_inequality_on_derived_graphs() {
    let complex = z12_complex();
    for kind in [GraphKind::Union, GraphKind::Square0, GraphKind::Square1] {
        let g = complex.derived_graph(kind);
        let l2 = second_eigenvalue(&g, 1e-8).unwrap();
        let report = check_mixing(&g, l2, 1e-6, 1000, 7).unwrap();
        assert!(report.holds(), "{kind:?}: {report:?}");
    }
}

#[test]
fn complex_json_is_deterministic() {
    let a = z12_complex().to_json();
    let b = z12_complex().to_json();
    assert_eq!(a, b);
    let record: ComplexRecord = serde_json::from_str(&a).unwrap();
    assert_eq!(record.group, "cyclic:12");
    assert_eq!(record.squares.len(), 96);
    for s in &record.squares {
        let [g, ag, gb, agb] = s.corners;
        let [kg, ka, kb] = s.key;
        assert_eq!(
            (g, ag, gb, agb),
            (kg, (ka + kg) % 12, (kg + kb) % 12, (ka + kg + kb) % 12)
        );
    }
}

#[test]
fn building_rejects_bad_pairs() {
    let group = FiniteGroup::cyclic(12).unwrap();
    let asymmetric = GeneratingSetPair {
        gens_a: vec![1, 5],
        gens_b: vec![2, 10],
    };
    assert!(LeftRightCayleyComplex::build(group.clone(), asymmetric).is_err());
    let overlapping = GeneratingSetPair {
        gens_a: vec![1, 11],
        gens_b: vec![1, 11],
    };
    assert!(LeftRightCayleyComplex::build(group, overlapping).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn random_cyclic_complexes(n in 7usize..40, half in 1usize..=2, seed in any::<u64>()) {
        let delta = 2 * half;
        let group = FiniteGroup::cyclic(n).unwrap();
        if let Ok(search) = find_generating_pair(&group, delta, seed, 200) {
            let complex = LeftRightCayleyComplex::build(group, search.pair).unwrap();
            assert_combinatorics(&complex);
        }
    }

    #[test]
    fn mixing_with_measured_lambda(n in 9usize..30, seed in any::<u64>()) {
        let group = FiniteGroup::cyclic(n).unwrap();
        if let Ok(search) = find_generating_pair(&group, 4, seed, 200) {
            let complex = LeftRightCayleyComplex::build(group, search.pair).unwrap();
            for kind in [GraphKind::Union, GraphKind::Square0, GraphKind::Square1] {
                let g = complex.derived_graph(kind);
                if !g.is_connected() {
                    continue;
                }
                let l2 = second_eigenvalue(&g, 1e-8).unwrap();
                let report = check_mixing(&g, l2, 1e-6, 200, seed).unwrap();
                prop_assert!(report.holds(), "{:?}: {:?}", kind, report);
            }
        }
    }
}
