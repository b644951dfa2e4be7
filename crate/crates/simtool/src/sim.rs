//! Monte Carlo decoding trials.

use std::fmt::Write as _;
use std::time::Instant;

use qtanner::decoder::{Decoder, DecoderMode};
use qtanner::qtc::QuantumTannerCode;
use qtanner::BitVector;
use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Result, SimError};
use crate::stats::{derive_seed, wilson_interval};

pub const CSV_HEADER: &str = "p,n,trials,failures,failure_rate,ci_low,ci_high";

/// Z-error model.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "model", content = "value")]
pub enum Noise {
    /// Each qubit independently with probability `p`.
    Iid(f64),
    /// A uniformly random support of exactly `t` qubits.
    FixedWeight(usize),
}

impl Noise {
    /// Value for the CSV `p` column: `p` itself, or `t/n` for fixed weight.
    pub fn rate(&self, n: usize) -> f64 {
        match *self {
            Noise::Iid(p) => p,
            Noise::FixedWeight(t) => t as f64 / n as f64,
        }
    }

    fn sample(&self, rng: &mut ChaCha8Rng, n: usize) -> BitVector {
        match *self {
            Noise::Iid(p) => {
                let mut e = BitVector::zeros(n);
                for q in 0..n {
                    if rng.gen::<f64>() < p {
                        e.set(q, true);
                    }
                }
                e
            }
            Noise::FixedWeight(t) => BitVector::from_indices(n, &sample(rng, n, t).into_vec()),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SimConfig {
    pub noise: Noise,
    pub trials: usize,
    pub seed: u64,
    pub mode: DecoderMode,
    pub max_iters: usize,
    /// Record wall time per trial; off by default so outputs are reproducible.
    pub timing: bool,
    pub trace: bool,
}

impl SimConfig {
    pub fn validate(&self, n: usize) -> Result<()> {
        if self.trials == 0 {
            return Err(SimError::Config("trial count must be at least 1".into()));
        }
        if self.max_iters == 0 {
            return Err(SimError::Config("max_iters must be at least 1".into()));
        }
        match self.noise {
            Noise::Iid(p) if !(0.0..=1.0).contains(&p) => Err(SimError::Config(format!("p = {p} is not in [0, 1]"))),
            Noise::FixedWeight(t) if t > n => Err(SimError::Config(format!("weight {t} exceeds n = {n}"))),
            _ => Ok(()),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Outcome {
    /// `e + f` is a stabilizer.
    SuccessHomologous,
    /// Syndrome cleared, but `e + f` is a logical operator.
    SuccessSyndromeOnly,
    /// No decreasing flip, or the iteration cap was hit.
    Stalled,
}

impl Outcome {
    pub fn is_failure(&self) -> bool {
        *self != Outcome::SuccessHomologous
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrialRecord {
    pub trial: usize,
    pub weight: usize,
    pub initial_potential: usize,
    pub iterations: usize,
    pub outcome: Outcome,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub wall_time_us: Option<u64>,
    #[serde(skip)]
    pub trace: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OutcomeCounts {
    pub success_homologous: usize,
    pub success_syndrome_only: usize,
    pub stalled: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SimulationResult {
    pub p: f64,
    pub n: usize,
    pub config: SimConfig,
    pub counts: OutcomeCounts,
    pub records: Vec<TrialRecord>,
}

impl SimulationResult {
    pub fn trials(&self) -> usize {
        self.records.len()
    }

    pub fn failures(&self) -> usize {
        self.counts.success_syndrome_only + self.counts.stalled
    }

    pub fn failure_rate(&self) -> f64 {
        self.failures() as f64 / self.trials() as f64
    }

    pub fn interval(&self) -> (f64, f64) {
        wilson_interval(self.failures(), self.trials())
    }

    /// One CSV data row, without the trailing newline.
    pub fn csv_row(&self) -> String {
        let (lo, hi) = self.interval();
        format!(
            "{},{},{},{},{},{},{}",
            self.p,
            self.n,
            self.trials(),
            self.failures(),
            self.failure_rate(),
            lo,
            hi
        )
    }

    /// Trace lines of all trials, each block headed by `# trial i`.
    pub fn trace_text(&self) -> String {
        let mut out = String::new();
        for r in &self.records {
            if let Some(t) = &r.trace {
                let _ = writeln!(out, "# trial {}", r.trial);
                out.push_str(t);
            }
        }
        out
    }
}

pub fn csv(results: &[SimulationResult]) -> String {
    let mut out = format!("{CSV_HEADER}\n");
    for r in results {
        out.push_str(&r.csv_row());
        out.push('\n');
    }
    out
}

fn run_trial(code: &QuantumTannerCode, decoder: &Decoder<'_>, config: &SimConfig, trial: usize) -> Result<TrialRecord> {
    let start = config.timing.then(Instant::now);
    let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(config.seed, trial as u64));
    let e = config.noise.sample(&mut rng, code.n());
    let sigma = code.syndrome(&e)?;
    let out = if config.trace {
        decoder.decode_traced(&sigma, config.mode, config.max_iters)?
    } else {
        decoder.decode(&sigma, config.mode, config.max_iters)?
    };
    let outcome = if !out.succeeded() {
        Outcome::Stalled
    } else if code.is_stabilizer_equivalent(&e.xor(&out.correction))? {
        Outcome::SuccessHomologous
    } else {
        Outcome::SuccessSyndromeOnly
    };
    if out.succeeded() && out.iterations > out.initial_potential {
        return Err(qtanner::Error::Invariant(format!(
            "trial {trial}: {} iterations from U = {}",
            out.iterations, out.initial_potential
        ))
        .into());
    }
    Ok(TrialRecord {
        trial,
        weight: e.weight(),
        initial_potential: out.initial_potential,
        iterations: out.iterations,
        outcome,
        wall_time_us: start.map(|s| s.elapsed().as_micros() as u64),
        trace: config.trace.then(|| out.trace_text()),
    })
}

/// Runs `config.trials` independent trials in parallel; records come back in trial order.
pub fn simulate(code: &QuantumTannerCode, decoder: &Decoder<'_>, config: &SimConfig) -> Result<SimulationResult> {
    config.validate(code.n())?;
    let records = (0..config.trials)
        .into_par_iter()
        .map(|t| run_trial(code, decoder, config, t))
        .collect::<Result<Vec<_>>>()?;
    let count = |o: Outcome| records.iter().filter(|r| r.outcome == o).count();
    let counts = OutcomeCounts {
        success_homologous: count(Outcome::SuccessHomologous),
        success_syndrome_only: count(Outcome::SuccessSyndromeOnly),
        stalled: count(Outcome::Stalled),
    };
    Ok(SimulationResult {
        p: config.noise.rate(code.n()),
        n: code.n(),
        config: config.clone(),
        counts,
        records,
    })
}

/// One simulation per entry of `p_list`; the `i`-th uses a seed derived from the master seed and `i`.
pub fn sweep(
    code: &QuantumTannerCode,
    decoder: &Decoder<'_>,
    base: &SimConfig,
    p_list: &[f64],
) -> Result<Vec<SimulationResult>> {
    if p_list.is_empty() {
        return Err(SimError::Config("empty p list".into()));
    }
    p_list
        .iter()
        .enumerate()
        .map(|(i, &p)| {
            let config = SimConfig {
                noise: Noise::Iid(p),
                seed: derive_seed(base.seed, i as u64),
                ..base.clone()
            };
            simulate(code, decoder, &config)
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrendPoint {
    pub p: f64,
    pub small_rate: f64,
    pub small_ci: (f64, f64),
    pub large_rate: f64,
    pub large_ci: (f64, f64),
    /// Larger instance no worse, up to overlapping intervals.
    pub consistent: bool,
}

/// Comparison of two sweeps over the same `p` list on a smaller and a larger instance.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrendReport {
    pub small_n: usize,
    pub large_n: usize,
    pub points: Vec<TrendPoint>,
}

impl TrendReport {
    pub fn all_consistent(&self) -> bool {
        self.points.iter().all(|p| p.consistent)
    }
}

pub fn trend_report(a: &[SimulationResult], b: &[SimulationResult]) -> Result<TrendReport> {
    if a.len() != b.len() || a.is_empty() {
        return Err(SimError::Config(
            "trend report needs two sweeps over the same p list".into(),
        ));
    }
    let (small, large) = if a[0].n <= b[0].n { (a, b) } else { (b, a) };
    let points = small
        .iter()
        .zip(large)
        .map(|(s, l)| {
            let (s_ci, l_ci) = (s.interval(), l.interval());
            TrendPoint {
                p: s.p,
                small_rate: s.failure_rate(),
                small_ci: s_ci,
                large_rate: l.failure_rate(),
                large_ci: l_ci,
                consistent: l.failure_rate() <= s.failure_rate() || l_ci.0 <= s_ci.1,
            }
        })
        .collect();
    Ok(TrendReport {
        small_n: small[0].n,
        large_n: large[0].n,
        points,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn config_validation() {
        let mut c = SimConfig {
            noise: Noise::Iid(1.5),
            trials: 1,
            seed: 0,
            mode: DecoderMode::Structured,
            max_iters: 10,
            timing: false,
            trace: false,
        };
        assert!(c.validate(10).is_err());
        c.noise = Noise::FixedWeight(11);
        assert!(c.validate(10).is_err());
        c.noise = Noise::FixedWeight(3);
        assert!(c.validate(10).is_ok());
        c.trials = 0;
        assert!(c.validate(10).is_err());
    }

    #[test]
    fn fixed_weight_noise_has_exact_weight() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for t in [0, 1, 5, 20] {
            assert_eq!(Noise::FixedWeight(t).sample(&mut rng, 20).weight(), t);
        }
        assert!(Noise::Iid(0.0).sample(&mut rng, 50).is_zero());
        assert_eq!(Noise::Iid(1.0).sample(&mut rng, 50).weight(), 50);
    }
}
