//! Experiment harness: query-count scaling, per-round inference rates and
//! subsample isotropy. Every trial derives its seed from the base seed and
//! its coordinates, so reports are reproducible byte for byte.

use std::fmt::Write as _;

use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::forster::ForsterError;
use crate::inference::Cell;
use crate::instances::{self, Distribution};
use crate::ldt::{bruteforce_locate, locate_randomized, round_facts, LdtError, LocateConfig};
use crate::linalg::isotropy_report;
use crate::oracle::{GenComparisonQuery, PointOracle, QueryError, SignOracle};
use crate::sign::Sign;

/// Seed for one trial: a SplitMix64 chain over the coordinates.
pub fn trial_seed(base: u64, parts: &[u64]) -> u64 {
    let mix = |mut z: u64| {
        z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
        z ^ (z >> 31)
    };
    parts.iter().fold(mix(base), |acc, &p| mix(acc ^ p))
}

/// `d³ · ln d · ln n`, with both logarithms floored at `ln 2`.
pub fn model_queries(d: usize, n: usize) -> f64 {
    let ln = |v: usize| (v.max(2) as f64).ln();
    (d as f64).powi(3) * ln(d) * ln(n)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Summary {
    pub mean: f64,
    pub std: f64,
    pub p95: f64,
    /// One-sided 99% lower confidence bound on the mean (normal approximation).
    pub lower99: f64,
}

impl Summary {
    pub fn of(values: &[f64]) -> Summary {
        let n = values.len();
        if n == 0 {
            return Summary { mean: 0.0, std: 0.0, p95: 0.0, lower99: 0.0 };
        }
        let mean = values.iter().sum::<f64>() / n as f64;
        let var = if n > 1 { values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1) as f64 } else { 0.0 };
        let std = var.sqrt();
        let mut sorted = values.to_vec();
        sorted.sort_by(f64::total_cmp);
        let p95 = sorted[((0.95 * n as f64).ceil() as usize).clamp(1, n) - 1];
        Summary { mean, std, p95, lower99: mean - 2.326_347_874 * std / (n as f64).sqrt() }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrialRecord {
    pub d: usize,
    pub n: usize,
    pub dist: String,
    pub seed: u64,
    pub trial: usize,
    pub labels: usize,
    pub comparisons: usize,
    pub generalized: usize,
    pub rounds: usize,
    pub fallbacks: usize,
    /// Output equals the brute-force signs.
    pub exact: bool,
}

impl TrialRecord {
    pub fn queries(&self) -> usize {
        self.labels + self.comparisons + self.generalized
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CellSummary {
    pub d: usize,
    pub n: usize,
    pub dist: String,
    pub queries: Summary,
    pub rounds: f64,
    /// Mean queries over `d³ ln d ln n`.
    pub per_model: f64,
    /// Mean queries over `n`, the cost of labeling everything.
    pub per_label_all: f64,
    /// Mean queries over `d ln n`, the information bound.
    pub per_info: f64,
    pub mismatches: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScalingReport {
    pub trials: Vec<TrialRecord>,
    pub cells: Vec<CellSummary>,
}

pub const SCALING_CSV_HEADER: &str = "d,n,dist,seed,trial,labels,comparisons,generalized,rounds,fallbacks";

impl ScalingReport {
    pub fn to_csv(&self) -> String {
        let mut out = String::from(SCALING_CSV_HEADER);
        out.push('\n');
        for t in &self.trials {
            let _ = writeln!(
                out,
                "{},{},{},{},{},{},{},{},{},{}",
                t.d, t.n, t.dist, t.seed, t.trial, t.labels, t.comparisons, t.generalized, t.rounds, t.fallbacks
            );
        }
        out
    }

    pub fn table(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(
            out,
            "{:>3} {:>6} {:>11} {:>9} {:>9} {:>7} {:>9} {:>8} {:>8} {:>6}",
            "d", "n", "dist", "mean", "p95", "rounds", "/model", "/n", "/info", "wrong"
        );
        for c in &self.cells {
            let _ = writeln!(
                out,
                "{:>3} {:>6} {:>11} {:>9.1} {:>9.1} {:>7.2} {:>9.3} {:>8.3} {:>8.2} {:>6}",
                c.d, c.n, c.dist, c.queries.mean, c.queries.p95, c.rounds, c.per_model, c.per_label_all, c.per_info, c.mismatches
            );
        }
        out
    }

    pub fn cell(&self, d: usize, n: usize) -> Option<&CellSummary> {
        self.cells.iter().find(|c| c.d == d && c.n == n)
    }
}

/// One locate run on a fresh instance and a fresh unit point.
pub fn scaling_trial(
    d: usize,
    n: usize,
    dist: Distribution,
    trial: usize,
    cfg: &LocateConfig,
    base_seed: u64,
) -> Result<TrialRecord, LdtError> {
    let seed = trial_seed(base_seed, &[d as u64, n as u64, trial as u64]);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let h = dist.sample(d, n, &mut rng);
    let x = instances::unit(d, &mut rng);
    let run_cfg = LocateConfig { seed, ..cfg.clone() };
    let out = locate_randomized(&h, &PointOracle::new(x.clone()), &run_cfg)?;
    Ok(TrialRecord {
        d,
        n,
        dist: dist.to_string(),
        seed,
        trial,
        labels: out.transcript.labels,
        comparisons: out.transcript.comparisons,
        generalized: out.transcript.generalized,
        rounds: out.progress.rounds.len(),
        fallbacks: out.progress.fallbacks(),
        exact: out.signs == bruteforce_locate(&h, &x),
    })
}

/// Mean query counts over a grid of `(d, n)` cells.
pub fn bench_query_scaling(
    dims: &[usize],
    sizes: &[usize],
    trials: usize,
    dist: Distribution,
    cfg: &LocateConfig,
    seed: u64,
) -> Result<ScalingReport, LdtError> {
    let mut report = ScalingReport { trials: Vec::new(), cells: Vec::new() };
    for &d in dims {
        for &n in sizes {
            let records = (0..trials)
                .map(|t| scaling_trial(d, n, dist, t, cfg, seed))
                .collect::<Result<Vec<_>, _>>()?;
            let q: Vec<f64> = records.iter().map(|r| r.queries() as f64).collect();
            let queries = Summary::of(&q);
            let rounds = records.iter().map(|r| r.rounds as f64).sum::<f64>() / trials.max(1) as f64;
            let info = d as f64 * (n.max(2) as f64).ln();
            report.cells.push(CellSummary {
                d,
                n,
                dist: dist.to_string(),
                queries,
                rounds,
                per_model: queries.mean / model_queries(d, n),
                per_label_all: queries.mean / n as f64,
                per_info: queries.mean / info,
                mismatches: records.iter().filter(|r| !r.exact).count(),
            });
            report.trials.extend(records);
        }
    }
    Ok(report)
}

/// Fraction of `h` inferred after one round of label and sorting queries
/// on the sample `picked`, with and without the sample itself.
pub fn round_inference(h: &[Vec<f64>], picked: &[usize], x: &[f64]) -> Result<(f64, f64), LdtError> {
    let d = h.first().ok_or(LdtError::Empty)?.len();
    let oracle = PointOracle::new(x.to_vec());
    let scales: Vec<f64> = picked.iter().map(|&i| 1.0 / crate::linalg::norm(&h[i])).collect();
    let mut ask = |q: GenComparisonQuery| -> Result<Sign, QueryError> { Ok(oracle.answer_combination(&q.terms(h))) };
    let facts = round_facts(h, picked, &scales, &mut ask)?;
    let cell = Cell::new(d, facts.conditions)?;
    let mut in_sample = vec![false; h.len()];
    for &i in picked {
        in_sample[i] = true;
    }
    let mut with = 0usize;
    let mut without = 0usize;
    for (i, v) in h.iter().enumerate() {
        if in_sample[i] {
            with += 1;
        } else if cell.infer(v).is_some() {
            with += 1;
            without += 1;
        }
    }
    let rest = (h.len() - picked.len()).max(1);
    Ok((with as f64 / h.len() as f64, without as f64 / rest as f64))
}

#[derive(Debug, Clone, PartialEq)]
pub struct RateReport {
    pub d: usize,
    pub n: usize,
    pub k: usize,
    pub trials: usize,
    /// Inferred fraction of `H`, the sample counted as inferred.
    pub with_sample: Summary,
    /// Inferred fraction of `H \ S`.
    pub without_sample: Summary,
    /// `1/(40 d)`.
    pub target: f64,
}

impl RateReport {
    pub fn table(&self) -> String {
        format!(
            "{:>3} {:>5} {:>4} {:>6} {:>10} {:>10} {:>10} {:>10} {:>8}\n{:>3} {:>5} {:>4} {:>6} {:>10.4} {:>10.4} {:>10.4} {:>10.4} {:>8.4}\n",
            "d", "n", "k", "trials", "mean", "lower99", "mean-S", "lower99-S", "target",
            self.d, self.n, self.k, self.trials,
            self.with_sample.mean, self.with_sample.lower99,
            self.without_sample.mean, self.without_sample.lower99, self.target
        )
    }

    pub fn to_csv(&self) -> String {
        format!(
            "d,n,k,trials,mean,lower99,mean_without_sample,lower99_without_sample,target\n{},{},{},{},{},{},{},{},{}\n",
            self.d,
            self.n,
            self.k,
            self.trials,
            self.with_sample.mean,
            self.with_sample.lower99,
            self.without_sample.mean,
            self.without_sample.lower99,
            self.target
        )
    }
}

/// Inference rate of one round on `trials` fresh isotropic sets.
pub fn bench_inference_rate(
    d: usize,
    n: usize,
    trials: usize,
    cfg: &LocateConfig,
    seed: u64,
) -> Result<RateReport, LdtError> {
    inference_rate_with(d, n, cfg.k(d), trials, seed, |rng| {
        instances::isotropic(d, n, cfg.target_c, rng).map_err(|e| LdtError::InvalidConfig(e.to_string()))
    })
}

/// [`bench_inference_rate`] over sets drawn by `make`.
pub fn inference_rate_with(
    d: usize,
    n: usize,
    k: usize,
    trials: usize,
    seed: u64,
    mut make: impl FnMut(&mut ChaCha8Rng) -> Result<Vec<Vec<f64>>, LdtError>,
) -> Result<RateReport, LdtError> {
    let mut with = Vec::with_capacity(trials);
    let mut without = Vec::with_capacity(trials);
    for t in 0..trials {
        let mut rng = ChaCha8Rng::seed_from_u64(trial_seed(seed, &[d as u64, n as u64, k as u64, t as u64]));
        let h = make(&mut rng)?;
        let x = instances::unit(d, &mut rng);
        let mut picked = sample(&mut rng, h.len(), k.min(h.len())).into_vec();
        picked.sort_unstable();
        let (a, b) = round_inference(&h, &picked, &x)?;
        with.push(a);
        without.push(b);
    }
    Ok(RateReport {
        d,
        n,
        k,
        trials,
        with_sample: Summary::of(&with),
        without_sample: Summary::of(&without),
        target: 1.0 / (40.0 * d as f64),
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct SubsampleReport {
    pub d: usize,
    pub n: usize,
    pub k: usize,
    pub trials: usize,
    pub successes: usize,
    pub frequency: f64,
    /// `1 - d · 0.99^(k/d)`, the analytic floor.
    pub floor: f64,
}

impl SubsampleReport {
    pub fn table(&self) -> String {
        format!(
            "{:>3} {:>5} {:>5} {:>6} {:>9} {:>9} {:>9}\n{:>3} {:>5} {:>5} {:>6} {:>9} {:>9.4} {:>9.4}\n",
            "d", "n", "k", "trials", "success", "freq", "floor",
            self.d, self.n, self.k, self.trials, self.successes, self.frequency, self.floor
        )
    }

    pub fn to_csv(&self) -> String {
        format!(
            "d,n,k,trials,successes,frequency,floor\n{},{},{},{},{},{},{}\n",
            self.d, self.n, self.k, self.trials, self.successes, self.frequency, self.floor
        )
    }
}

/// How often a uniform `k`-subset of a `0.99`-isotropic set is in
/// `1/2`-approximate isotropic position.
pub fn bench_subsample_isotropy(
    d: usize,
    n: usize,
    k: usize,
    trials: usize,
    seed: u64,
) -> Result<SubsampleReport, ForsterError> {
    let k = k.min(n);
    let mut successes = 0;
    for t in 0..trials {
        let mut rng = ChaCha8Rng::seed_from_u64(trial_seed(seed, &[d as u64, n as u64, k as u64, t as u64]));
        let h = instances::isotropic(d, n, 0.99, &mut rng)?;
        let sub: Vec<Vec<f64>> = sample(&mut rng, n, k).iter().map(|i| h[i].clone()).collect();
        if isotropy_report(&sub).is_ok_and(|r| r.c_level >= 0.5) {
            successes += 1;
        }
    }
    Ok(SubsampleReport {
        d,
        n,
        k,
        trials,
        successes,
        frequency: successes as f64 / trials.max(1) as f64,
        floor: 1.0 - d as f64 * 0.99f64.powf(k as f64 / d as f64),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn summary_examples() {
        let s = Summary::of(&[1.0, 2.0, 3.0, 4.0]);
        assert_eq!(s.mean, 2.5);
        assert_eq!(s.p95, 4.0);
        assert!((s.std - (5.0f64 / 3.0).sqrt()).abs() < 1e-12);
        assert!(s.lower99 < s.mean);
    }

    #[test]
    fn seeds_are_stable_and_distinct() {
        assert_eq!(trial_seed(1, &[2, 3]), trial_seed(1, &[2, 3]));
        assert_ne!(trial_seed(1, &[2, 3]), trial_seed(1, &[3, 2]));
    }

    #[test]
    fn below_k_labels_everything() {
        let cfg = LocateConfig::default();
        let r = bench_query_scaling(&[3], &[10], 3, Distribution::Sphere, &cfg, 1).unwrap();
        assert!(r.trials.iter().all(|t| t.labels == 10 && t.queries() == 10 && t.exact));
    }

    #[test]
    fn duplicates_need_one_label() {
        let cfg = LocateConfig::default();
        let h = vec![vec![1.0, 0.0]; 50];
        let out = locate_randomized(&h, &PointOracle::new(vec![0.3, 2.0]), &cfg).unwrap();
        assert_eq!(out.transcript.len(), 1);
    }

    #[test]
    fn reports_are_reproducible() {
        let cfg = LocateConfig::default();
        let a = bench_query_scaling(&[2], &[64], 3, Distribution::Sphere, &cfg, 9).unwrap();
        let b = bench_query_scaling(&[2], &[64], 3, Distribution::Sphere, &cfg, 9).unwrap();
        assert_eq!(a.to_csv(), b.to_csv());
        assert_eq!(a.table(), b.table());
        assert!(a.to_csv().starts_with(SCALING_CSV_HEADER));
    }

    #[test]
    fn whole_set_subsample_always_succeeds() {
        let r = bench_subsample_isotropy(3, 30, 30, 10, 2).unwrap();
        assert_eq!(r.successes, 10);
    }

    #[test]
    fn tiny_sample_infers_little() {
        let cfg = LocateConfig::default();
        let r = inference_rate_with(3, 150, 1, 50, 5, |rng| {
            instances::isotropic(3, 150, cfg.target_c, rng).map_err(|e| LdtError::InvalidConfig(e.to_string()))
        })
        .unwrap();
        assert!(r.without_sample.mean < 0.05, "{}", r.without_sample.mean);
    }
}
