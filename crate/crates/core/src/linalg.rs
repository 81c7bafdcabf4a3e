//! Small dense linear algebra: second-moment matrices, cyclic Jacobi
//! eigendecomposition, SPD inverse square roots and the isotropy measure.
//!
//! Dimensions here are tiny (d ≤ ~32), so everything is a plain row-major
//! `Vec<f64>` and O(d³) per sweep is fine.

use thiserror::Error;

/// Every floating tolerance used by the numeric modules, in one place.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    /// Smallest eigenvalue still treated as positive definite.
    pub pd: f64,
    /// Eigenvalue accuracy target.
    pub eig: f64,
    /// Reconstruction accuracy for `N M N = I`.
    pub recon: f64,
    /// Allowed deviation of a unit vector's norm from 1.
    pub unit: f64,
    /// Relative symmetry tolerance.
    pub sym: f64,
    /// Jacobi stops once the off-diagonal Frobenius mass drops below this.
    pub jacobi_off: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            pd: 1e-12,
            eig: 1e-9,
            recon: 1e-8,
            unit: 1e-9,
            sym: 1e-12,
            jacobi_off: 1e-12,
        }
    }
}

pub const TOL: Tolerances = Tolerances {
    pd: 1e-12,
    eig: 1e-9,
    recon: 1e-8,
    unit: 1e-9,
    sym: 1e-12,
    jacobi_off: 1e-12,
};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum LinalgError {
    #[error("empty point list")]
    Empty,
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("matrix is not symmetric (entry ({row}, {col}))")]
    NotSymmetric { row: usize, col: usize },
    #[error("matrix is not positive definite (min eigenvalue {min_eigenvalue:e})")]
    NotPositiveDefinite { min_eigenvalue: f64 },
    #[error("vector {index} is not a unit vector (norm {norm})")]
    NotUnit { index: usize, norm: f64 },
    #[error("non-finite coordinate in vector {index}")]
    NonFinite { index: usize },
}

/// Square dense matrix, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct Matrix {
    n: usize,
    data: Vec<f64>,
}

impl Matrix {
    pub fn zeros(n: usize) -> Matrix {
        Matrix { n, data: vec![0.0; n * n] }
    }

    pub fn identity(n: usize) -> Matrix {
        let mut m = Matrix::zeros(n);
        for i in 0..n {
            m[(i, i)] = 1.0;
        }
        m
    }

    pub fn scalar(n: usize, v: f64) -> Matrix {
        let mut m = Matrix::identity(n);
        m.scale(v);
        m
    }

    pub fn diagonal(diag: &[f64]) -> Matrix {
        let mut m = Matrix::zeros(diag.len());
        for (i, &v) in diag.iter().enumerate() {
            m[(i, i)] = v;
        }
        m
    }

    /// Builds from rows; panics on ragged or non-square input.
    pub fn from_rows(rows: &[Vec<f64>]) -> Matrix {
        let n = rows.len();
        let mut data = Vec::with_capacity(n * n);
        for r in rows {
            assert_eq!(r.len(), n, "matrix rows must be square");
            data.extend_from_slice(r);
        }
        Matrix { n, data }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn rows(&self) -> Vec<Vec<f64>> {
        self.data.chunks(self.n.max(1)).map(<[f64]>::to_vec).collect()
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.n..(i + 1) * self.n]
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zeros(self.n);
        for i in 0..self.n {
            for j in 0..self.n {
                t[(j, i)] = self[(i, j)];
            }
        }
        t
    }

    pub fn mul(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.n, other.n);
        let n = self.n;
        let mut out = Matrix::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self[(i, k)];
                if a == 0.0 {
                    continue;
                }
                for j in 0..n {
                    out.data[i * n + j] += a * other.data[k * n + j];
                }
            }
        }
        out
    }

    pub fn apply(&self, v: &[f64]) -> Vec<f64> {
        assert_eq!(v.len(), self.n);
        (0..self.n).map(|i| dot(self.row(i), v)).collect()
    }

    pub fn scale(&mut self, s: f64) {
        for x in &mut self.data {
            *x *= s;
        }
    }

    pub fn sub(&self, other: &Matrix) -> Matrix {
        Matrix {
            n: self.n,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect(),
        }
    }

    pub fn frobenius(&self) -> f64 {
        self.data.iter().map(|x| x * x).sum::<f64>().sqrt()
    }

    pub fn trace(&self) -> f64 {
        (0..self.n).map(|i| self[(i, i)]).sum()
    }

    /// Determinant by partial-pivot LU.
    pub fn determinant(&self) -> f64 {
        let n = self.n;
        let mut a = self.data.clone();
        let mut det = 1.0;
        for col in 0..n {
            let piv = (col..n)
                .max_by(|&x, &y| a[x * n + col].abs().total_cmp(&a[y * n + col].abs()))
                .unwrap();
            if a[piv * n + col] == 0.0 {
                return 0.0;
            }
            if piv != col {
                for j in 0..n {
                    a.swap(piv * n + j, col * n + j);
                }
                det = -det;
            }
            let p = a[col * n + col];
            det *= p;
            for r in col + 1..n {
                let f = a[r * n + col] / p;
                if f != 0.0 {
                    for j in col..n {
                        a[r * n + j] -= f * a[col * n + j];
                    }
                }
            }
        }
        det
    }

    fn symmetry_violation(&self, tol: f64) -> Option<(usize, usize)> {
        for i in 0..self.n {
            for j in i + 1..self.n {
                let (a, b) = (self[(i, j)], self[(j, i)]);
                if (a - b).abs() > tol * 1f64.max(a.abs()) {
                    return Some((i, j));
                }
            }
        }
        None
    }
}

impl std::ops::Index<(usize, usize)> for Matrix {
    type Output = f64;
    fn index(&self, (i, j): (usize, usize)) -> &f64 {
        &self.data[i * self.n + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for Matrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut f64 {
        &mut self.data[i * self.n + j]
    }
}

/// A symmetric matrix; construction checks symmetry.
#[derive(Debug, Clone, PartialEq)]
pub struct SymMatrix(Matrix);

impl SymMatrix {
    pub fn new(m: Matrix) -> Result<SymMatrix, LinalgError> {
        match m.symmetry_violation(TOL.sym) {
            Some((row, col)) => Err(LinalgError::NotSymmetric { row, col }),
            None => Ok(SymMatrix(m)),
        }
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<SymMatrix, LinalgError> {
        SymMatrix::new(Matrix::from_rows(rows))
    }

    pub fn matrix(&self) -> &Matrix {
        &self.0
    }

    pub fn into_matrix(self) -> Matrix {
        self.0
    }

    pub fn dim(&self) -> usize {
        self.0.n
    }

    pub fn eigen(&self) -> Eigen {
        jacobi_eigen(&self.0, TOL.jacobi_off)
    }

    pub fn min_eigenvalue(&self) -> f64 {
        min_eigenvalue(self)
    }
}

impl std::ops::Index<(usize, usize)> for SymMatrix {
    type Output = f64;
    fn index(&self, idx: (usize, usize)) -> &f64 {
        &self.0[idx]
    }
}

/// Eigenvalues in ascending order with matching eigenvectors (columns of `vectors`).
#[derive(Debug, Clone)]
pub struct Eigen {
    pub values: Vec<f64>,
    pub vectors: Matrix,
    pub sweeps: usize,
}

impl Eigen {
    pub fn vector(&self, k: usize) -> Vec<f64> {
        (0..self.vectors.n).map(|i| self.vectors[(i, k)]).collect()
    }
}

const MAX_SWEEPS: usize = 100;

fn off_diagonal_mass(a: &Matrix) -> f64 {
    let n = a.n;
    let mut s = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                s += a[(i, j)] * a[(i, j)];
            }
        }
    }
    s.sqrt()
}

/// Cyclic Jacobi rotations on a symmetric matrix.
pub fn jacobi_eigen(m: &Matrix, off_tol: f64) -> Eigen {
    let n = m.n;
    let mut a = m.clone();
    // symmetrize away representation noise
    for i in 0..n {
        for j in i + 1..n {
            let v = 0.5 * (a[(i, j)] + a[(j, i)]);
            a[(i, j)] = v;
            a[(j, i)] = v;
        }
    }
    let mut v = Matrix::identity(n);
    let scale = 1f64.max(a.frobenius());
    let mut sweeps = 0;
    while sweeps < MAX_SWEEPS && off_diagonal_mass(&a) >= off_tol * scale {
        sweeps += 1;
        for p in 0..n {
            for q in p + 1..n {
                let apq = a[(p, q)];
                if apq == 0.0 {
                    continue;
                }
                let theta = (a[(q, q)] - a[(p, p)]) / (2.0 * apq);
                let t = if theta.is_finite() {
                    theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt())
                } else {
                    0.0
                };
                if t == 0.0 {
                    a[(p, q)] = 0.0;
                    a[(q, p)] = 0.0;
                    continue;
                }
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let akp = a[(k, p)];
                    let akq = a[(k, q)];
                    a[(k, p)] = c * akp - s * akq;
                    a[(k, q)] = s * akp + c * akq;
                }
                for k in 0..n {
                    let apk = a[(p, k)];
                    let aqk = a[(q, k)];
                    a[(p, k)] = c * apk - s * aqk;
                    a[(q, k)] = s * apk + c * aqk;
                }
                a[(p, q)] = 0.0;
                a[(q, p)] = 0.0;
                for k in 0..n {
                    let vkp = v[(k, p)];
                    let vkq = v[(k, q)];
                    v[(k, p)] = c * vkp - s * vkq;
                    v[(k, q)] = s * vkp + c * vkq;
                }
            }
        }
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&x, &y| a[(x, x)].total_cmp(&a[(y, y)]));
    let values = order.iter().map(|&k| a[(k, k)]).collect();
    let mut vectors = Matrix::zeros(n);
    for (col, &k) in order.iter().enumerate() {
        for i in 0..n {
            vectors[(i, col)] = v[(i, k)];
        }
    }
    Eigen { values, vectors, sweeps }
}

pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

pub fn normalize(a: &[f64]) -> Vec<f64> {
    let n = norm(a);
    a.iter().map(|x| x / n).collect()
}

fn check_points(points: &[Vec<f64>]) -> Result<usize, LinalgError> {
    let d = points.first().ok_or(LinalgError::Empty)?.len();
    for (index, p) in points.iter().enumerate() {
        if p.len() != d {
            return Err(LinalgError::DimensionMismatch { expected: d, found: p.len() });
        }
        if p.iter().any(|x| !x.is_finite()) {
            return Err(LinalgError::NonFinite { index });
        }
    }
    Ok(d)
}

/// `(1/m) Σ hᵢ hᵢᵀ`.
pub fn second_moment(points: &[Vec<f64>]) -> Result<SymMatrix, LinalgError> {
    let d = check_points(points)?;
    let mut m = Matrix::zeros(d);
    for p in points {
        for i in 0..d {
            if p[i] == 0.0 {
                continue;
            }
            for j in i..d {
                m.data[i * d + j] += p[i] * p[j];
            }
        }
    }
    let inv = 1.0 / points.len() as f64;
    for i in 0..d {
        for j in i..d {
            let v = m[(i, j)] * inv;
            m[(i, j)] = v;
            m[(j, i)] = v;
        }
    }
    Ok(SymMatrix(m))
}

pub fn min_eigenvalue(m: &SymMatrix) -> f64 {
    if m.dim() == 0 {
        return 0.0;
    }
    m.eigen().values[0]
}

/// `N = M^{-1/2}` for symmetric positive definite `M`.
pub fn inv_sqrt(m: &SymMatrix) -> Result<SymMatrix, LinalgError> {
    let e = m.eigen();
    let lmin = e.values.first().copied().unwrap_or(0.0);
    if lmin <= TOL.pd {
        return Err(LinalgError::NotPositiveDefinite { min_eigenvalue: lmin });
    }
    let n = m.dim();
    let mut out = Matrix::zeros(n);
    for (k, &lambda) in e.values.iter().enumerate() {
        let w = 1.0 / lambda.sqrt();
        for i in 0..n {
            let vi = e.vectors[(i, k)] * w;
            for j in 0..n {
                out[(i, j)] += vi * e.vectors[(j, k)];
            }
        }
    }
    for i in 0..n {
        for j in i + 1..n {
            let v = 0.5 * (out[(i, j)] + out[(j, i)]);
            out[(i, j)] = v;
            out[(j, i)] = v;
        }
    }
    Ok(SymMatrix(out))
}

/// Smallest eigenvalue of the second-moment matrix, scaled by `d`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IsotropyReport {
    pub lambda_min: f64,
    /// `d · lambda_min`; at most 1 for unit vectors.
    pub measure: f64,
    /// Largest `c` for which the set is in c-approximate isotropic position.
    pub c_level: f64,
}

pub fn isotropy_report(points: &[Vec<f64>]) -> Result<IsotropyReport, LinalgError> {
    check_points(points)?;
    for (index, p) in points.iter().enumerate() {
        let nrm = norm(p);
        if (nrm - 1.0).abs() > TOL.unit {
            return Err(LinalgError::NotUnit { index, norm: nrm });
        }
    }
    let m = second_moment(points)?;
    let lambda_min = min_eigenvalue(&m);
    let measure = (m.dim() as f64 * lambda_min).max(0.0);
    Ok(IsotropyReport { lambda_min, measure, c_level: measure })
}

/// Fraction of `points` with `|<h, x>| > threshold`.
pub fn margin_fraction(points: &[Vec<f64>], x: &[f64], threshold: f64) -> f64 {
    if points.is_empty() {
        return 0.0;
    }
    let hits = points.iter().filter(|h| dot(h, x).abs() > threshold).count();
    hits as f64 / points.len() as f64
}
