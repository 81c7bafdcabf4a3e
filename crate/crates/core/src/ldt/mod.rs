//! Locators: the randomized adaptive algorithm, the universal-set search,
//! and materialized decision trees with the zero-branch repair.

mod locate;
mod round;
mod transform;
mod tree;
mod universal;

use std::collections::HashMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exact::{self, IntVec};
use crate::forster::{DEFAULT_MAX_ITERS, DEFAULT_TARGET_C};
use crate::inference::{InferenceError, DEFAULT_RAY_LIMIT};
use crate::oracle::QueryError;
use crate::sign::Sign;

pub use locate::{locate_randomized, Located, ProgressLog, RoundRecord};
pub use round::{round_facts, RoundFacts};
pub use transform::{round_transform, RoundTransform, TransformRung};
pub use tree::{build_tree, ldt_fix, BuildMode, DecisionTree, Node, TreeStats, TREE_FORMAT, TREE_VERSION};
pub use universal::{universal_set, verify_universal, verify_universal_sampled, Certification, UniversalReport, UniversalSet};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum LdtError {
    #[error("empty hyperplane list")]
    Empty,
    #[error("hyperplane {index} is the zero vector")]
    ZeroHyperplane { index: usize },
    #[error("hyperplane {index} has a non-finite entry")]
    NonFinite { index: usize },
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("oracle answers are inconsistent")]
    InconsistentOracle,
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error(transparent)]
    Query(#[from] QueryError),
    #[error("exhaustive verification needs more than {limit} enumeration nodes")]
    VerificationTooLarge { limit: usize },
    #[error("no certified universal set among {candidates} candidates")]
    SearchExhausted { candidates: usize },
    #[error("tree exceeds the size guard of {limit} nodes")]
    SizeGuardExceeded { limit: usize },
    #[error("path to node {node} has inconsistent conditions")]
    NonRedundantViolation { node: usize },
    #[error("leaf sign of hyperplane {index} is not determined by its path")]
    Undetermined { index: usize },
    #[error("no branch for answer {answer} at node {node}")]
    MissingBranch { node: usize, answer: Sign },
    #[error("malformed tree document: {0}")]
    Format(String),
    #[error(transparent)]
    Inference(InferenceError),
}

impl From<InferenceError> for LdtError {
    fn from(e: InferenceError) -> LdtError {
        match e {
            InferenceError::Infeasible => LdtError::InconsistentOracle,
            InferenceError::NodeLimitExceeded { limit } => LdtError::VerificationTooLarge { limit },
            other => LdtError::Inference(other),
        }
    }
}

/// Sample-size constants and limits. `None` sizes follow the `C · d^a ·
/// ln(d + 2)` defaults.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct LocateConfig {
    pub c_k: f64,
    pub c_s: f64,
    pub c_t: f64,
    pub k_sample: Option<usize>,
    pub universal_s: Option<usize>,
    pub universal_t: Option<usize>,
    pub target_c: f64,
    pub forster_max_iters: usize,
    pub min_progress: usize,
    pub seed: u64,
    /// Relative noise for the perturbed-Forster rung of the ladder.
    pub perturbation: f64,
    pub ray_limit: usize,
    /// Node budget for exhaustive pattern enumeration.
    pub node_limit: usize,
    pub universal_candidates: usize,
    /// Maximum number of tree nodes.
    pub size_guard: usize,
    /// Baseline: no transform and scale 1 for every vector, so sorting asks
    /// plain comparisons.
    pub unit_scales: bool,
}

pub const DEFAULT_C_K: f64 = 1.0;
pub const DEFAULT_C_S: f64 = 1.0;
pub const DEFAULT_C_T: f64 = 1.0;
pub const DEFAULT_SEED: u64 = 0x5eed;

impl Default for LocateConfig {
    fn default() -> LocateConfig {
        LocateConfig {
            c_k: DEFAULT_C_K,
            c_s: DEFAULT_C_S,
            c_t: DEFAULT_C_T,
            k_sample: None,
            universal_s: None,
            universal_t: None,
            target_c: DEFAULT_TARGET_C,
            forster_max_iters: DEFAULT_MAX_ITERS,
            min_progress: 1,
            seed: DEFAULT_SEED,
            perturbation: 1e-6,
            ray_limit: DEFAULT_RAY_LIMIT,
            node_limit: 2_000_000,
            universal_candidates: 50,
            size_guard: 1_000_000,
            unit_scales: false,
        }
    }
}

fn scaled(c: f64, d: usize, power: i32) -> usize {
    let d = d as f64;
    (c * d.powi(power) * (d + 2.0).ln()).ceil() as usize
}

impl LocateConfig {
    /// Round sample size `k`.
    pub fn k(&self, d: usize) -> usize {
        self.k_sample.unwrap_or_else(|| scaled(self.c_k, d, 2).max(d + 1))
    }

    /// Universal set size `s`.
    pub fn s(&self, d: usize) -> usize {
        self.universal_s.unwrap_or_else(|| scaled(self.c_s, d, 3).max(d + 1))
    }

    /// Inner sample size `t` of the universal-set argument.
    pub fn t(&self, d: usize) -> usize {
        self.universal_t.unwrap_or_else(|| scaled(self.c_t, d, 2).max(d + 1)).min(self.s(d))
    }

    pub fn validate(&self, d: usize) -> Result<(), LdtError> {
        let bad = |m: String| Err(LdtError::InvalidConfig(m));
        if !(self.target_c > 0.0 && self.target_c < 1.0) {
            return bad(format!("target_c must lie in (0, 1), got {}", self.target_c));
        }
        if self.k(d) < d + 1 {
            return bad(format!("k_sample must be at least d + 1 = {}, got {}", d + 1, self.k(d)));
        }
        if let Some(t) = self.universal_t {
            if t > self.s(d) {
                return bad(format!("universal_t = {t} exceeds universal_s = {}", self.s(d)));
            }
        }
        if self.min_progress == 0 {
            return bad("min_progress must be positive".into());
        }
        if !(self.perturbation >= 0.0 && self.perturbation.is_finite()) {
            return bad(format!("perturbation must be finite and non-negative, got {}", self.perturbation));
        }
        Ok(())
    }
}

/// Checks the hyperplane list and returns its dimension.
pub fn check_hyperplanes(h: &[Vec<f64>]) -> Result<usize, LdtError> {
    let d = h.first().ok_or(LdtError::Empty)?.len();
    if d == 0 {
        return Err(LdtError::DimensionMismatch { expected: 1, found: 0 });
    }
    for (index, v) in h.iter().enumerate() {
        if v.len() != d {
            return Err(LdtError::DimensionMismatch { expected: d, found: v.len() });
        }
        if v.iter().any(|x| !x.is_finite()) {
            return Err(LdtError::NonFinite { index });
        }
        if v.iter().all(|&x| x == 0.0) {
            return Err(LdtError::ZeroHyperplane { index });
        }
    }
    Ok(d)
}

/// Hyperplanes grouped by the line they span. Positive multiples share a
/// label; negative multiples have the opposite label.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Dedup {
    /// Original index of each class representative.
    pub reps: Vec<usize>,
    /// For every original index: its class and its orientation relative to
    /// the representative.
    pub class: Vec<(usize, Sign)>,
}

impl Dedup {
    /// Expands per-representative signs to the original list.
    pub fn expand(&self, rep_signs: &[Sign]) -> Vec<Sign> {
        self.class.iter().map(|&(c, o)| rep_signs[c].times(o)).collect()
    }
}

pub fn dedup(h: &[Vec<f64>]) -> Result<Dedup, LdtError> {
    check_hyperplanes(h)?;
    let mut seen: HashMap<IntVec, (usize, Sign)> = HashMap::new();
    let mut reps = Vec::new();
    let mut class = Vec::with_capacity(h.len());
    for (i, v) in h.iter().enumerate() {
        let (line, orientation) = IntVec::from_f64(v).canonical_line();
        match seen.get(&line) {
            Some(&(c, rep_orientation)) => class.push((c, orientation.times(rep_orientation))),
            None => {
                seen.insert(line, (reps.len(), orientation));
                class.push((reps.len(), Sign::Pos));
                reps.push(i);
            }
        }
    }
    Ok(Dedup { reps, class })
}

/// `(sign <h, x>)_{h ∈ H}`, exactly.
pub fn bruteforce_locate(h: &[Vec<f64>], x: &[f64]) -> Vec<Sign> {
    h.iter().map(|v| exact::dot_sign(v, x)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn config_defaults() {
        let cfg = LocateConfig::default();
        assert!(cfg.validate(4).is_ok());
        assert!(cfg.k(1) >= 2);
        assert!(cfg.t(3) <= cfg.s(3));
        let bad = LocateConfig { k_sample: Some(2), ..LocateConfig::default() };
        assert!(bad.validate(3).is_err());
        let bad = LocateConfig { universal_s: Some(5), universal_t: Some(6), ..LocateConfig::default() };
        assert!(bad.validate(2).is_err());
    }

    #[test]
    fn dedup_groups_parallel_and_antipodal() {
        let h = vec![vec![1.0, 2.0], vec![-0.5, -1.0], vec![0.0, 1.0], vec![3.0, 6.0], vec![0.0, -2.0]];
        let dd = dedup(&h).unwrap();
        assert_eq!(dd.reps, vec![0, 2]);
        assert_eq!(
            dd.class,
            vec![(0, Sign::Pos), (0, Sign::Neg), (1, Sign::Pos), (0, Sign::Pos), (1, Sign::Neg)]
        );
        let x = [0.3, -0.7];
        let rep_signs: Vec<Sign> = dd.reps.iter().map(|&i| exact::dot_sign(&h[i], &x)).collect();
        assert_eq!(dd.expand(&rep_signs), bruteforce_locate(&h, &x));
    }

    #[test]
    fn dedup_rejects_zero() {
        assert_eq!(dedup(&[vec![1.0], vec![0.0]]), Err(LdtError::ZeroHyperplane { index: 1 }));
        assert_eq!(dedup(&[]), Err(LdtError::Empty));
    }

    #[test]
    fn bruteforce_examples() {
        let h = vec![vec![1.0, 0.0], vec![0.0, 1.0]];
        assert_eq!(bruteforce_locate(&h, &[2.0, -3.0]), vec![Sign::Pos, Sign::Neg]);
        assert_eq!(bruteforce_locate(&h, &[0.0, 0.0]), vec![Sign::Zero, Sign::Zero]);
    }
}
