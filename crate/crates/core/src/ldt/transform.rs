//! Per-round scaling with a fallback ladder for degenerate sets.
//!
//! Scales only steer which comparisons get asked; every answer is an exact
//! fact about the original vectors, so any rung of the ladder is correct.

use rand::Rng;
use rand_distr::StandardNormal;

use crate::forster::{forster_transform, ForsterCertificate};
use crate::linalg::{self, isotropy_report, Matrix};

use super::LocateConfig;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TransformRung {
    /// A certified Forster transform of the set itself.
    Forster,
    /// A Forster transform of a slightly perturbed copy.
    Perturbed,
    /// No transform; scales are plain inverse norms.
    Identity,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RoundTransform {
    pub transform: Matrix,
    /// `1/‖T h‖` per input vector.
    pub scales: Vec<f64>,
    /// Isotropy of the transformed unit images of the actual set.
    pub achieved_c: f64,
    pub rung: TransformRung,
}

impl RoundTransform {
    /// Unit images `T h / ‖T h‖`.
    pub fn images(&self, h: &[Vec<f64>]) -> Vec<Vec<f64>> {
        h.iter().map(|v| linalg::normalize(&self.transform.apply(v))).collect()
    }
}

fn finish(t: Matrix, h: &[Vec<f64>], rung: TransformRung) -> Option<RoundTransform> {
    let mut scales = Vec::with_capacity(h.len());
    for v in h {
        let n = linalg::norm(&t.apply(v));
        if !(n > 0.0 && n.is_finite()) {
            return None;
        }
        scales.push(1.0 / n);
    }
    let images: Vec<Vec<f64>> = h.iter().map(|v| linalg::normalize(&t.apply(v))).collect();
    let achieved_c = isotropy_report(&images).map_or(0.0, |r| r.c_level);
    if !scales.iter().all(|s| s.is_finite() && *s > 0.0) {
        return None;
    }
    Some(RoundTransform { transform: t, scales, achieved_c, rung })
}

/// Forster on the set, then on a perturbed copy, then the identity.
pub fn round_transform<R: Rng + ?Sized>(h: &[Vec<f64>], cfg: &LocateConfig, rng: &mut R) -> RoundTransform {
    let d = h.first().map_or(0, Vec::len);
    if cfg.unit_scales {
        return RoundTransform {
            transform: Matrix::identity(d),
            scales: vec![1.0; h.len()],
            achieved_c: 0.0,
            rung: TransformRung::Identity,
        };
    }
    let unit: Vec<Vec<f64>> = h.iter().map(|v| linalg::normalize(v)).collect();
    if let Ok(cert) = forster_transform(&unit, cfg.target_c, cfg.forster_max_iters) {
        if let Some(t) = finish(cert.transform, h, TransformRung::Forster) {
            return t;
        }
    }
    if cfg.perturbation > 0.0 {
        let noisy: Vec<Vec<f64>> = unit
            .iter()
            .map(|v| v.iter().map(|x| x + cfg.perturbation * rng.sample::<f64, _>(StandardNormal)).collect())
            .collect();
        if let Ok(cert) = forster_transform(&noisy, cfg.target_c, cfg.forster_max_iters) {
            if let Some(t) = finish(cert.transform, h, TransformRung::Perturbed) {
                return t;
            }
        }
    }
    let id = ForsterCertificate::identity(&unit);
    finish(id.transform, h, TransformRung::Identity).unwrap_or_else(|| RoundTransform {
        transform: Matrix::identity(d),
        scales: h.iter().map(|v| 1.0 / linalg::norm(v)).collect(),
        achieved_c: 0.0,
        rung: TransformRung::Identity,
    })
}
