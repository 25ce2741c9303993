//! Scaling benchmark: times one solver call per (size, trial) on freshly
//! generated models.
//!
//! For perceptrons and MLPs a size is the feature count `n`; for FBDDs it
//! is the decision-tree node budget, over `max(16, 2·⌈log2(size+1)⌉)`
//! features.

use std::fmt::Write as _;
use std::time::Instant;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::gen::{gen_random_model, random_instance, GenParams, ModelKind};
use crate::model::Model;
use crate::solve::{
    fbdd_counterfactual, fbdd_semifactual, mlp_explanations_exact, perceptron_counterfactual,
    perceptron_semifactual, Mode,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    Solved,
    /// The model is constant, so there was nothing to find.
    NoCounterfactual,
    /// Exhaustive search would exceed the budget; nothing was timed.
    BudgetExceeded,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BenchRecord {
    pub kind: ModelKind,
    pub n: usize,
    /// Weights (perceptron), diagram nodes (FBDD) or neurons (MLP).
    pub size: usize,
    pub trial: usize,
    /// `None` when the run was skipped.
    pub micros: Option<u64>,
    pub mode: Mode,
    pub outcome: Outcome,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BenchConfig {
    pub params: GenParams,
    /// Largest instance space exhaustive MLP search may visit.
    pub mlp_budget: u64,
}

impl Default for BenchConfig {
    fn default() -> Self {
        BenchConfig {
            params: GenParams { hidden: Some(vec![8]), ..GenParams::default() },
            mlp_budget: 1 << 20,
        }
    }
}

pub fn bench_scaling(
    kind: ModelKind,
    sizes: &[usize],
    trials: usize,
    seed: u64,
    mode: Mode,
) -> Result<Vec<BenchRecord>> {
    bench_scaling_with(kind, sizes, trials, seed, mode, &BenchConfig::default())
}

fn fbdd_features(budget: usize) -> usize {
    let bits = (usize::BITS - budget.leading_zeros()) as usize;
    (2 * bits).max(16)
}

/// Per-run seed; distinct for distinct (size index, trial) pairs.
fn run_seed(seed: u64, index: usize, trial: usize) -> u64 {
    let mix = ((index as u64) << 32) ^ trial as u64;
    seed ^ mix.wrapping_mul(0x9E37_79B9_7F4A_7C15)
}

pub fn bench_scaling_with(
    kind: ModelKind,
    sizes: &[usize],
    trials: usize,
    seed: u64,
    mode: Mode,
    config: &BenchConfig,
) -> Result<Vec<BenchRecord>> {
    if sizes.windows(2).any(|w| w[0] > w[1]) {
        return Err(Error::Precondition("sizes must be sorted ascending".into()));
    }
    let mut records = Vec::new();
    for (index, &size) in sizes.iter().enumerate() {
        for trial in 0..trials {
            let s = run_seed(seed, index, trial);
            let (n, params) = match kind {
                ModelKind::Fbdd => {
                    (fbdd_features(size), GenParams { nodes: Some(size), ..config.params.clone() })
                }
                _ => (size, config.params.clone()),
            };
            let model = gen_random_model(kind, n, s, &params)?;
            let x = random_instance(&mut ChaCha8Rng::seed_from_u64(s.rotate_left(17)), n);
            let (micros, outcome) = time_one(&model, &x, mode, config.mlp_budget)?;
            let size = match &model {
                Model::Perceptron(p) => p.feature_count(),
                Model::Fbdd(f) => f.len(),
                Model::Mlp(m) => m.neuron_count(),
            };
            records.push(BenchRecord { kind, n, size, trial, micros, mode, outcome });
        }
    }
    Ok(records)
}

fn time_one(model: &Model, x: &crate::Instance, mode: Mode, budget: u64) -> Result<(Option<u64>, Outcome)> {
    let start = Instant::now();
    let result = match (model, mode) {
        (Model::Perceptron(p), Mode::Semifactual) => perceptron_semifactual(p, x, None).map(drop),
        (Model::Perceptron(p), Mode::Counterfactual) => perceptron_counterfactual(p, x, None).map(drop),
        (Model::Fbdd(f), Mode::Semifactual) => fbdd_semifactual(f, x, None).map(drop),
        (Model::Fbdd(f), Mode::Counterfactual) => fbdd_counterfactual(f, x, None).map(drop),
        (Model::Mlp(m), _) => mlp_explanations_exact(m, x, mode, &[], budget).map(drop),
    };
    let micros = u64::try_from(start.elapsed().as_micros()).unwrap_or(u64::MAX);
    match result {
        Ok(()) => Ok((Some(micros), Outcome::Solved)),
        Err(Error::NoCounterfactual) => Ok((Some(micros), Outcome::NoCounterfactual)),
        Err(Error::BudgetExceeded { .. }) => Ok((None, Outcome::BudgetExceeded)),
        Err(e) => Err(e),
    }
}

pub const CSV_HEADER: &str = "kind,n,size,trial,micros";

/// Records as CSV; skipped runs leave `micros` empty.
pub fn to_csv(records: &[BenchRecord]) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for r in records {
        let micros = r.micros.map(|m| m.to_string()).unwrap_or_default();
        let _ = writeln!(out, "{},{},{},{},{}", r.kind, r.n, r.size, r.trial, micros);
    }
    out
}

/// Median time per size over solved runs, in input order.
pub fn median_micros(records: &[BenchRecord]) -> Vec<(usize, u64)> {
    let mut out: Vec<(usize, Vec<u64>)> = Vec::new();
    for r in records {
        let Some(m) = r.micros else { continue };
        match out.last_mut() {
            Some((n, times)) if *n == r.n => times.push(m),
            _ => out.push((r.n, vec![m])),
        }
    }
    out.into_iter()
        .map(|(n, mut t)| {
            t.sort_unstable();
            (n, t[t.len() / 2])
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn one_record_per_size_and_trial() {
        let r = bench_scaling(ModelKind::Perceptron, &[1000, 10_000, 100_000], 3, 1, Mode::Semifactual).unwrap();
        assert_eq!(r.len(), 9);
        assert!(r.iter().all(|r| r.micros.is_some()));
        let csv = to_csv(&r);
        assert_eq!(csv.lines().count(), 10);
        assert!(csv.lines().nth(1).unwrap().starts_with("perceptron,1000,1000,0,"));
    }

    #[test]
    fn mlp_over_budget_is_recorded() {
        let config = BenchConfig { mlp_budget: 1 << 6, ..BenchConfig::default() };
        let r = bench_scaling_with(ModelKind::Mlp, &[4, 7], 1, 2, Mode::Semifactual, &config).unwrap();
        assert_eq!(r[0].outcome, Outcome::Solved);
        assert_eq!(r[1].outcome, Outcome::BudgetExceeded);
        assert!(to_csv(&r).ends_with("mlp,7,9,0,\n"));
    }

    #[test]
    fn unsorted_sizes_rejected() {
        assert!(bench_scaling(ModelKind::Fbdd, &[20, 10], 1, 0, Mode::Semifactual).is_err());
    }

    #[test]
    fn fbdd_counterfactuals() {
        let r = bench_scaling(ModelKind::Fbdd, &[10, 100, 1000], 2, 5, Mode::Counterfactual).unwrap();
        assert_eq!(r.len(), 6);
        assert!(r.iter().all(|r| r.n == 16 || r.n == 20));
    }
}
