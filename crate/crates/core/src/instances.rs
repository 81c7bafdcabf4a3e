//! Random instance families for tests and benchmarks.
//!
//! Degenerate families use small integer coordinates (times powers of two)
//! so that points placed on hyperplanes are exactly orthogonal in `f64`.

use std::fmt;

use rand::seq::{IndexedRandom, SliceRandom};
use rand::Rng;
use rand_distr::StandardNormal;

use crate::forster::{forster_transform, ForsterError};
use crate::linalg::normalize;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Distribution {
    /// Uniform on the unit sphere.
    Sphere,
    /// `k` random `±1` coordinates, normalized.
    Sparse { k: usize },
    /// Sphere directions with norms spread over `2^-40 .. 2^40`.
    ExpScales,
}

impl Distribution {
    pub fn parse(s: &str) -> Option<Distribution> {
        match s {
            "sphere" => Some(Distribution::Sphere),
            "exp" | "exp-scales" => Some(Distribution::ExpScales),
            _ => s
                .strip_prefix("sparse")
                .and_then(|k| k.parse().ok())
                .filter(|&k: &usize| k > 0)
                .map(|k| Distribution::Sparse { k }),
        }
    }

    pub fn sample<R: Rng + ?Sized>(self, d: usize, n: usize, rng: &mut R) -> Vec<Vec<f64>> {
        match self {
            Distribution::Sphere => sphere(d, n, rng),
            Distribution::Sparse { k } => sparse_signs(d, n, k, rng),
            Distribution::ExpScales => exp_scales(d, n, rng),
        }
    }
}

impl fmt::Display for Distribution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Distribution::Sphere => write!(f, "sphere"),
            Distribution::Sparse { k } => write!(f, "sparse{k}"),
            Distribution::ExpScales => write!(f, "exp-scales"),
        }
    }
}

pub fn gaussian<R: Rng + ?Sized>(d: usize, rng: &mut R) -> Vec<f64> {
    loop {
        let v: Vec<f64> = (0..d).map(|_| rng.sample(StandardNormal)).collect();
        if v.iter().any(|x| *x != 0.0) {
            return v;
        }
    }
}

pub fn unit<R: Rng + ?Sized>(d: usize, rng: &mut R) -> Vec<f64> {
    normalize(&gaussian(d, rng))
}

pub fn sphere<R: Rng + ?Sized>(d: usize, n: usize, rng: &mut R) -> Vec<Vec<f64>> {
    (0..n).map(|_| unit(d, rng)).collect()
}

pub fn sparse_signs<R: Rng + ?Sized>(d: usize, n: usize, k: usize, rng: &mut R) -> Vec<Vec<f64>> {
    let k = k.clamp(1, d);
    let coords: Vec<usize> = (0..d).collect();
    (0..n)
        .map(|_| {
            let mut v = vec![0.0; d];
            for &c in coords.choose_multiple(rng, k) {
                v[c] = if rng.random() { 1.0 } else { -1.0 };
            }
            normalize(&v)
        })
        .collect()
}

pub fn exp_scales<R: Rng + ?Sized>(d: usize, n: usize, rng: &mut R) -> Vec<Vec<f64>> {
    (0..n)
        .map(|_| {
            let s = 2f64.powi(rng.random_range(-40..=40));
            unit(d, rng).into_iter().map(|x| x * s).collect()
        })
        .collect()
}

/// Unit images of a Forster-transformed sphere sample.
pub fn isotropic<R: Rng + ?Sized>(
    d: usize,
    n: usize,
    target_c: f64,
    rng: &mut R,
) -> Result<Vec<Vec<f64>>, ForsterError> {
    let h = sphere(d, n, rng);
    let cert = forster_transform(&h, target_c, 10_000)?;
    cert.apply(&h)
}

fn small_int<R: Rng + ?Sized>(rng: &mut R) -> i64 {
    rng.random_range(-4..=4)
}

fn int_vector<R: Rng + ?Sized>(d: usize, rng: &mut R) -> Vec<i64> {
    loop {
        let v: Vec<i64> = (0..d).map(|_| small_int(rng)).collect();
        if v.iter().any(|x| *x != 0) {
            return v;
        }
    }
}

/// Determinant by Bareiss elimination; exact for small integer matrices.
fn det(mut m: Vec<Vec<i128>>) -> i128 {
    let n = m.len();
    let mut sign = 1;
    let mut prev = 1i128;
    for k in 0..n {
        if m[k][k] == 0 {
            match (k + 1..n).find(|&r| m[r][k] != 0) {
                Some(r) => {
                    m.swap(k, r);
                    sign = -sign;
                }
                None => return 0,
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) / prev;
            }
        }
        prev = m[k][k];
    }
    sign * m[n - 1][n - 1]
}

/// Integer vector orthogonal to every row (`rows.len() == d - 1`), by
/// cofactor expansion. Zero when the rows are dependent.
pub fn cross(rows: &[Vec<i64>], d: usize) -> Vec<i64> {
    assert_eq!(rows.len() + 1, d, "need d - 1 rows");
    (0..d)
        .map(|c| {
            let minor: Vec<Vec<i128>> = rows
                .iter()
                .map(|r| r.iter().enumerate().filter(|(j, _)| *j != c).map(|(_, &x)| x as i128).collect())
                .collect();
            let m = if minor.is_empty() { 1 } else { det(minor) };
            let v = if c % 2 == 0 { m } else { -m };
            i64::try_from(v).expect("cofactor fits in i64")
        })
        .collect()
}

/// A degenerate instance with its hidden point.
#[derive(Debug, Clone, PartialEq)]
pub struct Degenerate {
    pub h: Vec<Vec<f64>>,
    pub x: Vec<f64>,
    pub family: &'static str,
}

pub const DEGENERATE_FAMILIES: [&str; 6] = ["duplicates", "antipodal", "collinear", "on-hyperplanes", "origin", "mixed"];

fn to_f64(v: &[i64], shift: i32) -> Vec<f64> {
    v.iter().map(|&x| x as f64 * 2f64.powi(shift)).collect()
}

/// A point with integer coordinates orthogonal to the chosen rows. Needs
/// `rows.len() < d`; the remaining rows are random.
fn point_on<R: Rng + ?Sized>(rows: &[Vec<i64>], d: usize, rng: &mut R) -> Vec<i64> {
    for _ in 0..100 {
        let mut all = rows.to_vec();
        while all.len() + 1 < d {
            all.push(int_vector(d, rng));
        }
        let x = cross(&all, d);
        if x.iter().any(|v| *v != 0) {
            return x;
        }
    }
    vec![0; d]
}

/// One instance of the named family in dimension `d` with `n` hyperplanes.
pub fn degenerate<R: Rng + ?Sized>(family: &'static str, d: usize, n: usize, rng: &mut R) -> Degenerate {
    let n = n.max(1);
    let mut base: Vec<Vec<i64>> = Vec::with_capacity(n);
    let mut shifts: Vec<i32> = Vec::with_capacity(n);
    let fresh = |rng: &mut R| int_vector(d, rng);
    let mut push = |v: Vec<i64>, s: i32, base: &mut Vec<Vec<i64>>| {
        base.push(v);
        shifts.push(s);
    };
    match family {
        "duplicates" | "antipodal" | "mixed" => {
            let distinct = (n / 3).max(1);
            let pool: Vec<Vec<i64>> = (0..distinct).map(|_| fresh(rng)).collect();
            for _ in 0..n {
                let v = pool[rng.random_range(0..distinct)].clone();
                let flip = family != "duplicates" && rng.random_bool(0.5);
                let v = if flip { v.iter().map(|x| -x).collect() } else { v };
                push(v, rng.random_range(-8..=8), &mut base);
            }
        }
        "collinear" => {
            // several small subspaces of dimension two
            let groups = (n / 4).max(1);
            let spans: Vec<(Vec<i64>, Vec<i64>)> = (0..groups).map(|_| (fresh(rng), fresh(rng))).collect();
            for _ in 0..n {
                let (a, b) = &spans[rng.random_range(0..groups)];
                let v = loop {
                    let (p, q) = (small_int(rng), small_int(rng));
                    let v: Vec<i64> = a.iter().zip(b).map(|(x, y)| p * x + q * y).collect();
                    if v.iter().any(|t| *t != 0) {
                        break v;
                    }
                };
                push(v, 0, &mut base);
            }
        }
        _ => {
            for _ in 0..n {
                push(fresh(rng), rng.random_range(-4..=4), &mut base);
            }
        }
    }
    let x: Vec<i64> = match family {
        "origin" => vec![0; d],
        _ if d == 1 => vec![if rng.random_bool(0.5) { 1 } else { -1 }],
        _ => {
            let on = rng.random_range(1..=3usize).min(d - 1).min(base.len());
            let mut idx: Vec<usize> = (0..base.len()).collect();
            idx.shuffle(rng);
            let rows: Vec<Vec<i64>> = idx[..on].iter().map(|&i| base[i].clone()).collect();
            point_on(&rows, d, rng)
        }
    };
    Degenerate {
        h: base.iter().zip(&shifts).map(|(v, &s)| to_f64(v, s)).collect(),
        x: to_f64(&x, 0),
        family,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::dot_sign;
    use crate::linalg::{isotropy_report, norm};
    use crate::sign::Sign;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn cross_is_orthogonal() {
        let rows = vec![vec![1, 2, 3], vec![-1, 0, 4]];
        let x = cross(&rows, 3);
        assert_eq!(x, vec![8, -7, 2]);
        for r in &rows {
            assert_eq!(r.iter().zip(&x).map(|(a, b)| a * b).sum::<i64>(), 0);
        }
    }

    #[test]
    fn bareiss_examples() {
        assert_eq!(det(vec![vec![2, 1], vec![1, 3]]), 5);
        assert_eq!(det(vec![vec![0, 1], vec![1, 0]]), -1);
        assert_eq!(det(vec![vec![1, 2], vec![2, 4]]), 0);
    }

    #[test]
    fn families_have_their_shape() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for family in DEGENERATE_FAMILIES {
            for d in 1..=5 {
                let inst = degenerate(family, d, 12, &mut rng);
                assert_eq!(inst.h.len(), 12);
                assert!(inst.h.iter().all(|v| v.len() == d && v.iter().any(|x| *x != 0.0)));
                if family == "origin" {
                    assert!(inst.x.iter().all(|v| *v == 0.0));
                } else if family == "on-hyperplanes" && d > 1 {
                    assert!(inst.h.iter().any(|v| dot_sign(v, &inst.x) == Sign::Zero));
                }
            }
        }
    }

    #[test]
    fn sparse_support() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for v in sparse_signs(30, 50, 3, &mut rng) {
            assert_eq!(v.iter().filter(|x| **x != 0.0).count(), 3);
            assert!((norm(&v) - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn isotropic_sets_certify() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let h = isotropic(3, 40, 0.99, &mut rng).unwrap();
        assert!(isotropy_report(&h).unwrap().c_level >= 0.99);
    }

    #[test]
    fn parse_names() {
        for d in [Distribution::Sphere, Distribution::Sparse { k: 3 }, Distribution::ExpScales] {
            assert_eq!(Distribution::parse(&d.to_string()), Some(d));
        }
        assert_eq!(Distribution::parse("sparse0"), None);
    }
}
