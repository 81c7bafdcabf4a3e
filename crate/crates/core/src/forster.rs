//! Forster scaling: an invertible `T` such that `{T h / ‖T h‖}` is in
//! (approximate) isotropic position.
//!
//! The iteration is the classical fixed point
//! `T ← (d·M)^{-1/2} · T`, where `M` is the second-moment matrix of the
//! current unit images. It converges for sets in general position and stalls
//! (or hits a singular `M`) when mass concentrates near a proper subspace.
//! The reported `achieved_c` is always recomputed from the final images.

use thiserror::Error;

use crate::linalg::{self, inv_sqrt, isotropy_report, second_moment, LinalgError, Matrix, SymMatrix};

pub const DEFAULT_TARGET_C: f64 = 0.99;
pub const DEFAULT_MAX_ITERS: usize = 10_000;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ForsterError {
    #[error("empty hyperplane list")]
    Empty,
    #[error("need at least d = {d} vectors, got {n}")]
    DimensionTooFew { n: usize, d: usize },
    #[error("zero or non-finite vector at index {index}")]
    BadVector { index: usize },
    #[error("target_c must lie in (0, 1), got {0}")]
    BadTarget(f64),
    #[error("Forster iteration did not reach the target (best achieved c = {best_achieved_c})")]
    ConvergenceFailure { best_achieved_c: f64, iterations: usize },
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error("certificate covers {expected} vectors, got {found}")]
    IndexMismatch { expected: usize, found: usize },
}

/// A Forster transform together with the isotropy it was verified to reach.
#[derive(Debug, Clone, PartialEq)]
pub struct ForsterCertificate {
    pub transform: Matrix,
    /// `1/‖T hᵢ‖` for each input vector.
    pub scales: Vec<f64>,
    pub achieved_c: f64,
    pub iterations: usize,
}

impl ForsterCertificate {
    /// Identity transform with scales `1/‖h‖`; used when no transform is
    /// available but callers still need per-vector scales.
    pub fn identity(h: &[Vec<f64>]) -> ForsterCertificate {
        let d = h.first().map_or(0, Vec::len);
        let transform = Matrix::identity(d);
        let scales = h.iter().map(|v| 1.0 / linalg::norm(v)).collect();
        let achieved_c = unit_images(&transform, h)
            .ok()
            .and_then(|u| isotropy_report(&u).ok())
            .map_or(0.0, |r| r.c_level);
        ForsterCertificate { transform, scales, achieved_c, iterations: 0 }
    }

    pub fn dim(&self) -> usize {
        self.transform.dim()
    }

    /// Unit images `T h / ‖T h‖`.
    pub fn apply(&self, h: &[Vec<f64>]) -> Result<Vec<Vec<f64>>, ForsterError> {
        if h.len() != self.scales.len() {
            return Err(ForsterError::IndexMismatch { expected: self.scales.len(), found: h.len() });
        }
        unit_images(&self.transform, h)
    }

    /// Unit images of the listed members of the certified set.
    pub fn apply_subset(&self, h: &[Vec<f64>], indices: &[usize]) -> Result<Vec<Vec<f64>>, ForsterError> {
        let picked: Vec<Vec<f64>> = indices
            .iter()
            .map(|&i| {
                h.get(i)
                    .cloned()
                    .ok_or(ForsterError::IndexMismatch { expected: self.scales.len(), found: i })
            })
            .collect::<Result<_, _>>()?;
        unit_images(&self.transform, &picked)
    }

    /// `h / ‖T h‖`: same directions as the input, reweighted so that plain
    /// comparisons between them are comparisons of the transformed set.
    pub fn scaled_originals(&self, h: &[Vec<f64>]) -> Result<Vec<Vec<f64>>, ForsterError> {
        if h.len() != self.scales.len() {
            return Err(ForsterError::IndexMismatch { expected: self.scales.len(), found: h.len() });
        }
        Ok(h.iter()
            .zip(&self.scales)
            .map(|(v, s)| v.iter().map(|x| x * s).collect())
            .collect())
    }
}

fn unit_images(t: &Matrix, h: &[Vec<f64>]) -> Result<Vec<Vec<f64>>, ForsterError> {
    h.iter()
        .enumerate()
        .map(|(index, v)| {
            let tv = t.apply(v);
            let n = linalg::norm(&tv);
            if n == 0.0 || !n.is_finite() {
                Err(ForsterError::BadVector { index })
            } else {
                Ok(tv.into_iter().map(|x| x / n).collect())
            }
        })
        .collect()
}

fn check_input(h: &[Vec<f64>], target_c: f64) -> Result<usize, ForsterError> {
    let d = h.first().ok_or(ForsterError::Empty)?.len();
    if !(target_c > 0.0 && target_c < 1.0) {
        return Err(ForsterError::BadTarget(target_c));
    }
    for (index, v) in h.iter().enumerate() {
        if v.len() != d {
            return Err(LinalgError::DimensionMismatch { expected: d, found: v.len() }.into());
        }
        if v.iter().any(|x| !x.is_finite()) || v.iter().all(|&x| x == 0.0) {
            return Err(ForsterError::BadVector { index });
        }
    }
    if h.len() < d {
        return Err(ForsterError::DimensionTooFew { n: h.len(), d });
    }
    Ok(d)
}

/// Rescales `t` to unit absolute determinant.
fn normalize_det(t: &mut Matrix) {
    let det = t.determinant().abs();
    if det > 0.0 && det.is_finite() {
        t.scale(det.powf(-1.0 / t.dim() as f64));
    }
}

pub fn forster_transform(
    h: &[Vec<f64>],
    target_c: f64,
    max_iters: usize,
) -> Result<ForsterCertificate, ForsterError> {
    let d = check_input(h, target_c)?;
    let mut t = Matrix::identity(d);
    let mut best = 0.0f64;
    let mut iterations = 0;
    loop {
        let images = unit_images(&t, h)?;
        let m = second_moment(&images)?;
        let c = (d as f64 * m.min_eigenvalue()).max(0.0);
        best = best.max(c);
        if c >= target_c {
            // certify from scratch rather than trusting the loop's value
            let images = unit_images(&t, h)?;
            let report = isotropy_report(&images)?;
            if report.c_level >= target_c {
                let scales = h.iter().map(|v| 1.0 / linalg::norm(&t.apply(v))).collect();
                return Ok(ForsterCertificate {
                    transform: t,
                    scales,
                    achieved_c: report.c_level,
                    iterations,
                });
            }
        }
        if iterations >= max_iters {
            return Err(ForsterError::ConvergenceFailure { best_achieved_c: best, iterations });
        }
        let mut dm = m.into_matrix();
        dm.scale(d as f64);
        let step = match inv_sqrt(&SymMatrix::new(dm)?) {
            Ok(s) => s,
            Err(LinalgError::NotPositiveDefinite { .. }) => {
                return Err(ForsterError::ConvergenceFailure { best_achieved_c: best, iterations })
            }
            Err(e) => return Err(e.into()),
        };
        t = step.matrix().mul(&t);
        normalize_det(&mut t);
        iterations += 1;
    }
}
