//! The randomized adaptive locator.

use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::inference::Cell;
use crate::oracle::{ask, make_query, GenComparisonQuery, QueryError, QueryTranscript, SignOracle};
use crate::sign::Sign;

use super::{dedup, round_facts, round_transform, LdtError, LocateConfig, TransformRung};

#[derive(Debug, Clone, PartialEq)]
pub struct RoundRecord {
    /// `|H_i|` at the start of the round, in distinct lines.
    pub size: usize,
    pub rung: TransformRung,
    pub achieved_c: f64,
    /// Sampled and labeled.
    pub sampled: usize,
    /// Inferred beyond the sample.
    pub inferred: usize,
    /// Labeled directly because inference stalled.
    pub fallback_labels: usize,
    pub queries: usize,
    pub fallback: bool,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct ProgressLog {
    pub rounds: Vec<RoundRecord>,
    /// Labels asked after the main loop.
    pub final_labels: usize,
    /// Distinct lines after deduplication.
    pub distinct: usize,
    pub total: usize,
}

impl ProgressLog {
    /// Every distinct line is accounted for exactly once.
    pub fn accounted(&self) -> usize {
        self.rounds.iter().map(|r| r.sampled + r.inferred + r.fallback_labels).sum::<usize>() + self.final_labels
    }

    pub fn fallbacks(&self) -> usize {
        self.rounds.iter().filter(|r| r.fallback).count()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Located {
    pub signs: Vec<Sign>,
    pub transcript: QueryTranscript,
    pub progress: ProgressLog,
}

/// Computes `(sign <h, x>)_{h ∈ H}` for the oracle's hidden `x`.
pub fn locate_randomized(h: &[Vec<f64>], oracle: &dyn SignOracle, cfg: &LocateConfig) -> Result<Located, LdtError> {
    let dd = dedup(h)?;
    let d = h[0].len();
    if oracle.dim() != d {
        return Err(LdtError::DimensionMismatch { expected: d, found: oracle.dim() });
    }
    cfg.validate(d)?;
    let k = cfg.k(d);
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut transcript = QueryTranscript::new();
    let mut progress = ProgressLog { distinct: dd.reps.len(), total: h.len(), ..ProgressLog::default() };
    let mut rep_signs: Vec<Option<Sign>> = vec![None; dd.reps.len()];
    // positions into dd.reps still unknown
    let mut remaining: Vec<usize> = (0..dd.reps.len()).collect();

    let label = |rep: usize, transcript: &mut QueryTranscript| -> Result<Sign, LdtError> {
        let q = make_query(h, Some(dd.reps[rep]), None, 1.0, 0.0)?;
        Ok(ask(oracle, h, q, transcript))
    };

    while remaining.len() >= k {
        let before = transcript.len();
        let vectors: Vec<Vec<f64>> = remaining.iter().map(|&r| h[dd.reps[r]].clone()).collect();
        let t = round_transform(&vectors, cfg, &mut rng);
        let picked: Vec<usize> = sample(&mut rng, remaining.len(), k).into_vec();
        let sample_idx: Vec<usize> = picked.iter().map(|&p| dd.reps[remaining[p]]).collect();
        let scales: Vec<f64> = picked.iter().map(|&p| t.scales[p]).collect();
        let mut asker = |q: GenComparisonQuery| -> Result<Sign, QueryError> { Ok(ask(oracle, h, q, &mut transcript)) };
        let facts = round_facts(h, &sample_idx, &scales, &mut asker)?;

        let mut done = vec![false; remaining.len()];
        for (&p, &s) in picked.iter().zip(&facts.labels) {
            rep_signs[remaining[p]] = Some(s);
            done[p] = true;
        }
        let cell = Cell::with_ray_limit(d, facts.conditions, cfg.ray_limit)?;
        let mut inferred = 0;
        for (p, &r) in remaining.iter().enumerate() {
            if done[p] {
                continue;
            }
            if let Some(s) = cell.infer(&h[dd.reps[r]]) {
                rep_signs[r] = Some(s);
                done[p] = true;
                inferred += 1;
            }
        }
        let mut fallback_labels = 0;
        let fallback = inferred < cfg.min_progress;
        if fallback {
            for p in 0..remaining.len() {
                if fallback_labels == k {
                    break;
                }
                if !done[p] {
                    rep_signs[remaining[p]] = Some(label(remaining[p], &mut transcript)?);
                    done[p] = true;
                    fallback_labels += 1;
                }
            }
        }
        progress.rounds.push(RoundRecord {
            size: remaining.len(),
            rung: t.rung,
            achieved_c: t.achieved_c,
            sampled: k,
            inferred,
            fallback_labels,
            queries: transcript.len() - before,
            fallback,
        });
        remaining = remaining.iter().zip(&done).filter(|(_, &f)| !f).map(|(&r, _)| r).collect();
    }
    for &r in &remaining {
        rep_signs[r] = Some(label(r, &mut transcript)?);
    }
    progress.final_labels = remaining.len();

    let rep_signs: Vec<Sign> = rep_signs.into_iter().map(|s| s.expect("every line is resolved")).collect();
    Ok(Located { signs: dd.expand(&rep_signs), transcript, progress })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ldt::bruteforce_locate;
    use crate::oracle::PointOracle;
    use rand::Rng;
    use rand_distr::StandardNormal;

    fn sphere(d: usize, n: usize, seed: u64) -> Vec<Vec<f64>> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        (0..n).map(|_| (0..d).map(|_| rng.sample(StandardNormal)).collect()).collect()
    }

    #[test]
    fn small_sets_are_labeled_directly() {
        let h = vec![vec![1.0, 0.0], vec![0.0, 1.0], vec![2.0, 0.0]];
        let o = PointOracle::new(vec![2.0, -3.0]);
        let out = locate_randomized(&h, &o, &LocateConfig::default()).unwrap();
        assert_eq!(out.signs, vec![Sign::Pos, Sign::Neg, Sign::Pos]);
        assert_eq!(out.transcript.labels, 2);
        assert_eq!(out.transcript.comparisons + out.transcript.generalized, 0);
    }

    #[test]
    fn origin_gives_zeros() {
        let h = sphere(3, 200, 7);
        let o = PointOracle::new(vec![0.0; 3]);
        let out = locate_randomized(&h, &o, &LocateConfig::default()).unwrap();
        assert!(out.signs.iter().all(|s| *s == Sign::Zero));
    }

    #[test]
    fn matches_bruteforce_in_plane() {
        let h = sphere(2, 200, 11);
        for seed in 0..5u64 {
            let x: Vec<f64> = sphere(2, 1, 100 + seed).remove(0);
            let o = PointOracle::new(x.clone());
            let cfg = LocateConfig { seed, ..LocateConfig::default() };
            let out = locate_randomized(&h, &o, &cfg).unwrap();
            assert_eq!(out.signs, bruteforce_locate(&h, &x));
            assert_eq!(out.progress.accounted(), out.progress.distinct);
            assert!(out.transcript.len() < 200, "used {} queries", out.transcript.len());
        }
    }
}
