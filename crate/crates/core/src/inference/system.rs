//! Equality elimination: restrict a sign-condition system to the subspace
//! cut out by its 0-conditions, leaving only strict rows.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::exact::IntVec;
use crate::sign::Sign;

use super::SignCondition;

/// `{ y : <b, y> = 0 ∀ equality rows }` with an integer basis `N`, plus the
/// strict rows `a` (oriented so the condition reads `<a, y> > 0`) expressed in
/// basis coordinates, `a' = Nᵀ a`.
#[derive(Debug, Clone)]
pub(crate) struct Reduced {
    pub d: usize,
    /// Columns of `N`; `None` means no equalities (identity basis).
    pub basis: Option<Vec<IntVec>>,
    pub strict: Vec<IntVec>,
    /// A strict row vanished on the subspace.
    pub contradiction: bool,
}

impl Reduced {
    pub fn new(d: usize, conditions: &[SignCondition]) -> Reduced {
        let equalities: Vec<&IntVec> = conditions
            .iter()
            .filter(|c| c.sign == Sign::Zero)
            .map(|c| &c.query)
            .collect();
        let basis = if equalities.is_empty() { None } else { Some(nullspace(d, &equalities)) };
        let mut out = Reduced { d, basis, strict: Vec::new(), contradiction: false };
        for c in conditions {
            let oriented = match c.sign {
                Sign::Zero => continue,
                Sign::Pos => c.query.clone(),
                Sign::Neg => c.query.neg(),
            };
            let r = out.reduce(&oriented);
            if r.is_zero() {
                out.contradiction = true;
            }
            out.strict.push(r);
        }
        out
    }

    /// Dimension of the subspace.
    pub fn reduced_dim(&self) -> usize {
        self.basis.as_ref().map_or(self.d, Vec::len)
    }

    /// `Nᵀ v`.
    pub fn reduce(&self, v: &IntVec) -> IntVec {
        match &self.basis {
            None => v.clone(),
            Some(cols) => IntVec(cols.iter().map(|c| c.dot(v)).collect()),
        }
    }

    /// `N z` for a rational point in basis coordinates.
    pub fn lift(&self, z: &[BigRational]) -> Vec<BigRational> {
        match &self.basis {
            None => z.to_vec(),
            Some(cols) => {
                let mut y = vec![BigRational::zero(); self.d];
                for (col, zk) in cols.iter().zip(z) {
                    if zk.is_zero() {
                        continue;
                    }
                    for (yi, ci) in y.iter_mut().zip(&col.0) {
                        *yi += zk * BigRational::from_integer(ci.clone());
                    }
                }
                y
            }
        }
    }

    /// `N z` for an integer point in basis coordinates.
    pub fn lift_int(&self, z: &IntVec) -> IntVec {
        match &self.basis {
            None => z.clone(),
            Some(cols) => {
                let mut y = IntVec::zeros(self.d);
                for (col, zk) in cols.iter().zip(&z.0) {
                    if zk.is_zero() {
                        continue;
                    }
                    for (yi, ci) in y.0.iter_mut().zip(&col.0) {
                        *yi += zk * ci;
                    }
                }
                y
            }
        }
    }
}

/// Integer basis of `{ y ∈ ℚ^d : <r, y> = 0 ∀ r ∈ rows }` via exact RREF.
pub(crate) fn nullspace(d: usize, rows: &[&IntVec]) -> Vec<IntVec> {
    let mut m: Vec<Vec<BigRational>> = rows.iter().map(|r| r.to_rational()).collect();
    let mut pivots: Vec<usize> = Vec::new();
    let mut row = 0;
    for col in 0..d {
        if row == m.len() {
            break;
        }
        let Some(p) = (row..m.len()).find(|&i| !m[i][col].is_zero()) else {
            continue;
        };
        m.swap(row, p);
        let inv = BigRational::one() / &m[row][col];
        for x in m[row].iter_mut() {
            *x *= &inv;
        }
        let pivot = m[row].clone();
        for (i, r) in m.iter_mut().enumerate() {
            if i != row && !r[col].is_zero() {
                let f = r[col].clone();
                for (x, p) in r[col..d].iter_mut().zip(&pivot[col..d]) {
                    *x -= &f * p;
                }
            }
        }
        pivots.push(col);
        row += 1;
    }
    let mut basis = Vec::new();
    for free in (0..d).filter(|c| !pivots.contains(c)) {
        let mut v = vec![BigRational::zero(); d];
        v[free] = BigRational::one();
        for (r, &pc) in pivots.iter().enumerate() {
            v[pc] = -m[r][free].clone();
        }
        basis.push(clear_denominators(&v));
    }
    basis
}

/// Positive multiple of a rational vector with coprime integer entries.
pub(crate) fn clear_denominators(v: &[BigRational]) -> IntVec {
    let lcm = v.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    IntVec(v.iter().map(|x| x.numer() * (&lcm / x.denom())).collect()).primitive()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn iv(v: &[i64]) -> IntVec {
        IntVec(v.iter().map(|&x| BigInt::from(x)).collect())
    }

    #[test]
    fn nullspace_of_plane() {
        let r = iv(&[1, 1, 0]);
        let basis = nullspace(3, &[&r]);
        assert_eq!(basis.len(), 2);
        for b in &basis {
            assert!(b.dot(&r) == BigInt::zero());
        }
    }

    #[test]
    fn full_rank_leaves_origin() {
        let a = iv(&[1, 0]);
        let b = iv(&[1, 1]);
        assert!(nullspace(2, &[&a, &b]).is_empty());
    }

    #[test]
    fn contradiction_detected() {
        let c = vec![
            SignCondition::exact(iv(&[1, 0]), Sign::Zero),
            SignCondition::exact(iv(&[2, 0]), Sign::Pos),
        ];
        assert!(Reduced::new(2, &c).contradiction);
    }
}
