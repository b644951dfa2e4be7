//! Building code instances and reporting their parameters.

use std::collections::BTreeMap;
use std::path::Path;

use qtanner::cayley_complex::{
    find_generating_pair, second_eigenvalue, GraphKind, GroupSpec, LeftRightCayleyComplex, DEFAULT_PAIR_ATTEMPTS,
};
use qtanner::local_codes::{
    sample_random_code, sample_robust_pair, ClassicalCode, DualTensorCode, Rate, Robustness, MAX_ENUM_DIMENSION,
};
use qtanner::qtc::QuantumTannerCode;
use qtanner::BitMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Result, SimError};
use crate::stats::derive_seed;

/// Tolerance for the reported expansion parameters.
pub const LAMBDA_TOLERANCE: f64 = 1e-8;

#[derive(Clone, Debug)]
pub struct BuildConfig {
    pub group: GroupSpec,
    pub delta: usize,
    /// Rate of `C_A`; `C_B` gets `1 − ρ`.
    pub rho: Rate,
    pub seed: u64,
    /// When set, local codes are resampled until the pair is `w`-robust.
    pub robust_w: Option<usize>,
    /// Minimum local distance as a fraction of Δ, used with `robust_w`.
    pub delta_target: f64,
    pub code_attempts: usize,
    pub pair_attempts: usize,
    /// Fixed local codes instead of sampled ones.
    pub codes: Option<(ClassicalCode, ClassicalCode)>,
}

impl BuildConfig {
    pub fn new(group: GroupSpec, delta: usize, rho: Rate, seed: u64) -> Self {
        Self {
            group,
            delta,
            rho,
            seed,
            robust_w: None,
            delta_target: 0.0,
            code_attempts: 1000,
            pair_attempts: DEFAULT_PAIR_ATTEMPTS,
            codes: None,
        }
    }
}

/// An assembled code with the seeds that produced it.
#[derive(Debug)]
pub struct Built {
    pub code: QuantumTannerCode,
    pub seeds: BTreeMap<String, u64>,
}

/// Samples local codes, finds a generating pair, and assembles the code.
pub fn build_code(config: &BuildConfig) -> Result<Built> {
    let group = config.group.build()?;
    let mut seeds = BTreeMap::new();
    seeds.insert("master".to_string(), config.seed);
    let pair_seed = derive_seed(config.seed, 0);
    seeds.insert("generating-pair".to_string(), pair_seed);
    let pair = find_generating_pair(&group, config.delta, pair_seed, config.pair_attempts)?.pair;
    let complex = LeftRightCayleyComplex::build(group, pair)?;

    let (code_a, code_b) = match &config.codes {
        Some((a, b)) => (a.clone(), b.clone()),
        None => {
            let code_seed = derive_seed(config.seed, 1);
            seeds.insert("local-codes".to_string(), code_seed);
            match config.robust_w {
                Some(w) => {
                    let found = sample_robust_pair(
                        config.delta,
                        config.rho,
                        config.delta_target,
                        w,
                        config.code_attempts,
                        code_seed,
                    )
                    .map_err(qtanner::Error::from)?;
                    (found.code_a, found.code_b)
                }
                None => (
                    sample_random_code(config.delta, config.rho, code_seed)?,
                    sample_random_code(config.delta, config.rho.complement(), derive_seed(code_seed, 1))?,
                ),
            }
        }
    };
    let code = QuantumTannerCode::assemble(complex, code_a, code_b)?;
    Ok(Built { code, seeds })
}

pub fn read_text(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| SimError::io(path, e))
}

pub fn write_text(path: &Path, text: &str) -> Result<()> {
    std::fs::write(path, text).map_err(|e| SimError::io(path, e))
}

pub fn load_bundle(path: &Path) -> Result<QuantumTannerCode> {
    Ok(QuantumTannerCode::from_bundle_json(&read_text(path)?)?)
}

/// Reads a local code from `classical-code` text or a bare parity-check matrix.
pub fn load_local_code(path: &Path) -> Result<ClassicalCode> {
    let text = read_text(path)?;
    if text.trim_start().starts_with("classical-code") {
        Ok(ClassicalCode::from_text(&text)?)
    } else {
        Ok(ClassicalCode::from_parity_check(BitMatrix::from_text(&text)?)?)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GraphReport {
    pub kind: String,
    pub vertices: usize,
    pub degree: Option<usize>,
    pub lambda: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LocalCodeReport {
    pub name: String,
    pub length: usize,
    pub dimension: usize,
    pub distance: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BuildSummary {
    pub n: usize,
    pub k: usize,
    pub delta: usize,
    pub group: String,
    pub group_order: usize,
    pub graphs: Vec<GraphReport>,
    pub local_codes: Vec<LocalCodeReport>,
}

fn graph_reports(code: &QuantumTannerCode) -> Result<Vec<GraphReport>> {
    [
        (GraphKind::Union, "union"),
        (GraphKind::Square0, "square0"),
        (GraphKind::Square1, "square1"),
    ]
    .into_iter()
    .map(|(kind, name)| {
        let graph = code.complex().derived_graph(kind);
        Ok(GraphReport {
            kind: name.to_string(),
            vertices: graph.num_vertices,
            degree: graph.regular_degree(),
            lambda: second_eigenvalue(&graph, LAMBDA_TOLERANCE)?,
        })
    })
    .collect()
}

fn local_code_reports(code: &QuantumTannerCode) -> Result<Vec<LocalCodeReport>> {
    let (a, b) = (code.code_a(), code.code_b());
    [
        ("C_A", a.clone()),
        ("C_B", b.clone()),
        ("C_A^perp", a.dual()),
        ("C_B^perp", b.dual()),
    ]
    .into_iter()
    .map(|(name, c)| {
        Ok(LocalCodeReport {
            name: name.to_string(),
            length: c.blocklength(),
            dimension: c.dimension(),
            distance: c.min_distance()?,
        })
    })
    .collect()
}

pub fn summarize(code: &QuantumTannerCode) -> Result<BuildSummary> {
    Ok(BuildSummary {
        n: code.n(),
        k: code.k(),
        delta: code.delta(),
        group: code.complex().group().descriptor().to_string(),
        group_order: code.complex().num_group_elements(),
        graphs: graph_reports(code)?,
        local_codes: local_code_reports(code)?,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DualTensorReport {
    pub dimension: usize,
    /// `Δk_B + Δk_A − k_A·k_B`.
    pub formula: usize,
    pub distance: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RobustnessReport {
    pub w: usize,
    pub robust: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct InspectReport {
    pub n: usize,
    pub k: usize,
    pub rank_x: usize,
    pub rank_z: usize,
    pub x_rows: usize,
    pub z_rows: usize,
    /// Weight → number of rows (or columns) with that weight.
    pub x_row_weights: BTreeMap<usize, usize>,
    pub x_col_weights: BTreeMap<usize, usize>,
    pub z_row_weights: BTreeMap<usize, usize>,
    pub z_col_weights: BTreeMap<usize, usize>,
    pub graphs: Vec<GraphReport>,
    pub local_codes: Vec<LocalCodeReport>,
    pub dual_tensor: DualTensorReport,
    pub robustness: Option<RobustnessReport>,
    /// `(1 − 2ρ)²·n` with `ρ = k_A/Δ`, for comparison with `k`.
    pub rate_bound: f64,
}

fn histogram(weights: impl Iterator<Item = usize>) -> BTreeMap<usize, usize> {
    let mut h = BTreeMap::new();
    for w in weights {
        *h.entry(w).or_insert(0) += 1;
    }
    h
}

fn row_weights(m: &BitMatrix) -> BTreeMap<usize, usize> {
    histogram(m.rows().iter().map(|r| r.weight()))
}

fn col_weights(m: &BitMatrix) -> BTreeMap<usize, usize> {
    histogram(m.transpose().rows().iter().map(|r| r.weight()))
}

/// Full parameter report. `robust_w` selects the robustness check, skipped when
/// the dual tensor code is too large to enumerate.
pub fn inspect(code: &QuantumTannerCode, robust_w: usize) -> Result<InspectReport> {
    let dt = DualTensorCode::new(code.code_a().clone(), code.code_b().clone())?;
    let enumerable = dt.dimension() <= MAX_ENUM_DIMENSION;
    let distance = if enumerable { Some(dt.min_distance()?) } else { None };
    let robustness = if enumerable {
        Some(RobustnessReport {
            w: robust_w,
            robust: matches!(dt.check_w_robust(robust_w)?, Robustness::Robust),
        })
    } else {
        None
    };
    let rho = code.code_a().dimension() as f64 / code.delta() as f64;
    Ok(InspectReport {
        n: code.n(),
        k: code.k(),
        rank_x: code.rank_x(),
        rank_z: code.rank_z(),
        x_rows: code.h_x().num_rows(),
        z_rows: code.h_z().num_rows(),
        x_row_weights: row_weights(code.h_x()),
        x_col_weights: col_weights(code.h_x()),
        z_row_weights: row_weights(code.h_z()),
        z_col_weights: col_weights(code.h_z()),
        graphs: graph_reports(code)?,
        local_codes: local_code_reports(code)?,
        dual_tensor: DualTensorReport {
            dimension: dt.dimension(),
            formula: dt.dimension_formula(),
            distance,
        },
        robustness,
        rate_bound: (1.0 - 2.0 * rho).powi(2) * code.n() as f64,
    })
}
