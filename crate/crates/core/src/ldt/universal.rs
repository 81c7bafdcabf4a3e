//! Universal sets: a subset `S` whose comparisons infer a `1/(100 d)`
//! fraction of `H` at every point, found by sampling and certified by
//! enumerating every cell of `S ∪ (S − S)`.

use rand::seq::index::sample;
use rand::Rng;

use crate::exact::IntVec;
use crate::inference::{enumerate_patterns, infer_comp, Cell, ComparisonAnswers, SignCondition};

use super::{LdtError, LocateConfig};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Certification {
    /// `S = H`: every member is labeled.
    Trivial,
    /// Every realizable answer pattern was checked.
    Exhaustive,
    /// Checked only at sampled points.
    Sampled,
}

#[derive(Debug, Clone, PartialEq)]
pub struct UniversalReport {
    /// Cells (or points) examined.
    pub cells: usize,
    /// Fewest members of `H` inferred in any examined cell.
    pub min_inferred: usize,
    pub required: f64,
    pub certified: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct UniversalSet {
    pub indices: Vec<usize>,
    pub candidates: usize,
    pub certification: Certification,
    pub report: Option<UniversalReport>,
}

fn passes(inferred: usize, n: usize, d: usize) -> bool {
    inferred * 100 * d >= n
}

fn comparison_queries(s: &[usize], h: &[Vec<f64>]) -> Vec<IntVec> {
    let mut q: Vec<IntVec> = s.iter().map(|&i| IntVec::from_f64(&h[i])).collect();
    for (a, &i) in s.iter().enumerate() {
        for &j in &s[a + 1..] {
            let v = IntVec::combination(&[(1.0, &h[i]), (-1.0, &h[j])]);
            if !v.is_zero() {
                q.push(v);
            }
        }
    }
    q
}

/// Checks every realizable sign pattern of `S ∪ (S − S)`. Stops at the
/// first failing cell.
pub fn verify_universal(s: &[usize], h: &[Vec<f64>], node_limit: usize) -> Result<UniversalReport, LdtError> {
    let d = h.first().ok_or(LdtError::Empty)?.len();
    let n = h.len();
    let queries = comparison_queries(s, h);
    let patterns = enumerate_patterns(d, &queries, node_limit)?;
    let mut report = UniversalReport { cells: 0, min_inferred: n, required: n as f64 / (100 * d) as f64, certified: true };
    for p in patterns {
        let conditions: Vec<SignCondition> =
            queries.iter().zip(p).map(|(q, sign)| SignCondition::exact(q.clone(), sign)).collect();
        let cell = Cell::new(d, conditions)?;
        let inferred = h.iter().filter(|v| cell.infer(v).is_some()).count();
        report.cells += 1;
        report.min_inferred = report.min_inferred.min(inferred);
        if !passes(inferred, n, d) {
            report.certified = false;
            break;
        }
    }
    Ok(report)
}

/// The same check at the given points only; a heuristic for instances too
/// large to enumerate.
pub fn verify_universal_sampled(s: &[usize], h: &[Vec<f64>], points: &[Vec<f64>]) -> Result<UniversalReport, LdtError> {
    let d = h.first().ok_or(LdtError::Empty)?.len();
    let n = h.len();
    let sv: Vec<Vec<f64>> = s.iter().map(|&i| h[i].clone()).collect();
    let mut report = UniversalReport { cells: 0, min_inferred: n, required: n as f64 / (100 * d) as f64, certified: true };
    for x in points {
        let answers = ComparisonAnswers::from_point(&sv, x);
        let inferred = infer_comp(&sv, &answers, h)?.known_count();
        report.cells += 1;
        report.min_inferred = report.min_inferred.min(inferred);
        if !passes(inferred, n, d) {
            report.certified = false;
            break;
        }
    }
    Ok(report)
}

/// Samples candidate subsets of size `s` until one is certified.
pub fn universal_set<R: Rng + ?Sized>(h: &[Vec<f64>], cfg: &LocateConfig, rng: &mut R) -> Result<UniversalSet, LdtError> {
    let d = h.first().ok_or(LdtError::Empty)?.len();
    let s = cfg.s(d);
    if h.len() <= s {
        return Ok(UniversalSet {
            indices: (0..h.len()).collect(),
            candidates: 0,
            certification: Certification::Trivial,
            report: None,
        });
    }
    for candidate in 1..=cfg.universal_candidates {
        let mut indices = sample(rng, h.len(), s).into_vec();
        indices.sort_unstable();
        let report = verify_universal(&indices, h, cfg.node_limit)?;
        if report.certified {
            return Ok(UniversalSet { indices, candidates: candidate, certification: Certification::Exhaustive, report: Some(report) });
        }
    }
    Err(LdtError::SearchExhausted { candidates: cfg.universal_candidates })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn whole_set_certifies() {
        let h = vec![vec![1.0, 0.0], vec![0.0, 1.0], vec![0.6, 0.8]];
        let r = verify_universal(&[0, 1, 2], &h, 100_000).unwrap();
        assert!(r.certified);
        assert_eq!(r.min_inferred, 3);
    }

    #[test]
    fn empty_subset_fails() {
        let h = vec![vec![1.0, 0.0], vec![0.0, 1.0]];
        let r = verify_universal(&[], &h, 100_000).unwrap();
        assert_eq!(r.cells, 1);
        assert!(!r.certified);
    }

    #[test]
    fn small_set_is_trivially_universal() {
        let h = vec![vec![1.0, 0.0], vec![0.0, 1.0]];
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(0);
        let u = universal_set(&h, &LocateConfig::default(), &mut rng).unwrap();
        assert_eq!(u.certification, Certification::Trivial);
        assert_eq!(u.indices, vec![0, 1]);
    }

    use rand::SeedableRng;
}
