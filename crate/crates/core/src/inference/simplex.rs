//! Exact feasibility of a strict homogeneous system `A z > 0`.
//!
//! By Gordan's alternative the system is infeasible iff the origin lies in
//! the convex hull of the rows. That is a phase-1 LP with `dim + 1` equality
//! rows, solved here by a dense rational tableau with Bland's rule. When the
//! hull misses the origin the optimal duals give a strictly feasible point.

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::exact::IntVec;

pub(crate) enum Outcome {
    /// A point with `<a, z> > 0` for every row.
    Feasible(Vec<BigRational>),
    Infeasible,
}

pub(crate) fn strict_feasible(dim: usize, rows: &[IntVec]) -> Outcome {
    if rows.is_empty() {
        return Outcome::Feasible(vec![BigRational::zero(); dim]);
    }
    if rows.iter().any(IntVec::is_zero) {
        return Outcome::Infeasible;
    }
    let m = rows.len();
    let nrows = dim + 1;
    let art0 = m;
    let ncols = m + nrows;
    // tableau rows: coordinates of Σ λᵢ aᵢ = 0, then Σ λᵢ = 1
    let mut t: Vec<Vec<BigRational>> = Vec::with_capacity(nrows);
    let mut rhs: Vec<BigRational> = Vec::with_capacity(nrows);
    for k in 0..dim {
        let mut row = vec![BigRational::zero(); ncols];
        for (j, a) in rows.iter().enumerate() {
            row[j] = BigRational::from_integer(a.0[k].clone());
        }
        row[art0 + k] = BigRational::one();
        t.push(row);
        rhs.push(BigRational::zero());
    }
    let mut row = vec![BigRational::one(); ncols];
    for x in row.iter_mut().skip(m) {
        *x = BigRational::zero();
    }
    row[art0 + dim] = BigRational::one();
    t.push(row);
    rhs.push(BigRational::one());

    let mut basis: Vec<usize> = (art0..art0 + nrows).collect();
    // reduced costs c_j - c_Bᵀ B⁻¹ A_j with unit cost on artificials
    let mut red: Vec<BigRational> = (0..ncols)
        .map(|j| {
            let c = if j >= art0 { BigRational::one() } else { BigRational::zero() };
            t.iter().fold(c, |acc, r| acc - &r[j])
        })
        .collect();

    while let Some(enter) = (0..ncols).find(|&j| red[j].is_negative()) {
        let mut leave: Option<usize> = None;
        let mut best: Option<BigRational> = None;
        for i in 0..nrows {
            if !t[i][enter].is_positive() {
                continue;
            }
            let ratio = &rhs[i] / &t[i][enter];
            let better = match &best {
                None => true,
                Some(b) => ratio < *b || (ratio == *b && basis[i] < basis[leave.unwrap()]),
            };
            if better {
                best = Some(ratio);
                leave = Some(i);
            }
        }
        let Some(r) = leave else {
            // unbounded cannot happen: the phase-1 objective is bounded below by 0
            unreachable!("phase-1 objective is bounded");
        };
        pivot(&mut t, &mut rhs, &mut red, r, enter);
        basis[r] = enter;
    }

    let objective: BigRational = basis
        .iter()
        .zip(&rhs)
        .filter(|(&b, _)| b >= art0)
        .fold(BigRational::zero(), |acc, (_, v)| acc + v);
    if objective.is_zero() {
        return Outcome::Infeasible;
    }
    // dual for artificial k is 1 - red[art0 + k]; the point is minus the
    // coordinate part of the dual vector
    let z: Vec<BigRational> = (0..dim).map(|k| &red[art0 + k] - BigRational::one()).collect();
    debug_assert!(rows.iter().all(|a| {
        let v = a.0.iter().zip(&z).fold(BigRational::zero(), |acc, (ai, zi)| {
            acc + BigRational::from_integer(ai.clone()) * zi
        });
        v.is_positive()
    }));
    Outcome::Feasible(z)
}

fn pivot(
    t: &mut [Vec<BigRational>],
    rhs: &mut [BigRational],
    red: &mut [BigRational],
    r: usize,
    c: usize,
) {
    let inv = BigRational::one() / &t[r][c];
    for x in t[r].iter_mut() {
        if !x.is_zero() {
            *x *= &inv;
        }
    }
    rhs[r] *= &inv;
    let prow = t[r].clone();
    let prhs = rhs[r].clone();
    for (i, row) in t.iter_mut().enumerate() {
        if i == r || row[c].is_zero() {
            continue;
        }
        let f = row[c].clone();
        for (x, p) in row.iter_mut().zip(&prow) {
            if !p.is_zero() {
                *x -= &f * p;
            }
        }
        rhs[i] -= &f * &prhs;
    }
    if !red[c].is_zero() {
        let f = red[c].clone();
        for (x, p) in red.iter_mut().zip(&prow) {
            if !p.is_zero() {
                *x -= &f * p;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    fn iv(v: &[i64]) -> IntVec {
        IntVec(v.iter().map(|&x| BigInt::from(x)).collect())
    }

    fn check(dim: usize, rows: &[IntVec]) -> bool {
        match strict_feasible(dim, rows) {
            Outcome::Infeasible => false,
            Outcome::Feasible(z) => {
                for a in rows {
                    let v = a.0.iter().zip(&z).fold(BigRational::zero(), |acc, (ai, zi)| {
                        acc + BigRational::from_integer(ai.clone()) * zi
                    });
                    assert!(v.is_positive(), "witness fails a row");
                }
                true
            }
        }
    }

    #[test]
    fn opposite_rows() {
        assert!(!check(2, &[iv(&[1, 0]), iv(&[-1, 0])]));
    }

    #[test]
    fn quadrant_against_diagonal() {
        assert!(!check(2, &[iv(&[1, 0]), iv(&[0, 1]), iv(&[-1, -1])]));
        assert!(check(2, &[iv(&[1, 0]), iv(&[0, -1])]));
    }

    #[test]
    fn degenerate_rows() {
        assert!(check(3, &[iv(&[1, 0, 0]), iv(&[1, 0, 0]), iv(&[2, 1, 0])]));
        assert!(check(1, &[iv(&[3]), iv(&[5])]));
        assert!(!check(1, &[iv(&[3]), iv(&[-5])]));
    }
}
