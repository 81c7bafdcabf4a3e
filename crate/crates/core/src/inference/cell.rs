//! Generator (V-)representation of a cell by the double description method.
//!
//! The closure of the open cell `{ A z > 0 }` is the cone `{ A z ≥ 0 }`,
//! written as `lin(lines) + cone(rays)`. A linear functional is constant in
//! sign on the open cell iff it vanishes on every line and its values on the
//! rays are all `≥ 0`, all `≤ 0`, or all zero. That makes classifying many
//! hyperplanes against one cell cheap once the generators are known.

use num_bigint::BigInt;

use crate::exact::IntVec;
#[cfg(test)]
use crate::sign::Sign;

#[derive(Debug, Clone, PartialEq, Eq)]
struct ZeroSet(Vec<u64>);

impl ZeroSet {
    fn insert(&mut self, i: usize) {
        self.0[i / 64] |= 1 << (i % 64);
    }

    fn contains(&self, i: usize) -> bool {
        self.0[i / 64] >> (i % 64) & 1 == 1
    }

    fn and(&self, other: &ZeroSet) -> ZeroSet {
        ZeroSet(self.0.iter().zip(&other.0).map(|(a, b)| a & b).collect())
    }

    fn count(&self) -> usize {
        self.0.iter().map(|w| w.count_ones() as usize).sum()
    }

    fn is_superset_of(&self, other: &ZeroSet) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a & b == *b)
    }
}

#[derive(Debug, Clone)]
pub(crate) struct Generators {
    pub lines: Vec<IntVec>,
    pub rays: Vec<IntVec>,
    /// Some row is identically zero on the closed cone, so the open cell is empty.
    pub empty: bool,
}

/// Generators of `{ z ∈ ℝ^dim : <a, z> ≥ 0 ∀ a ∈ rows }`, or `None` when more
/// than `ray_limit` rays appear at any stage.
pub(crate) fn generators(dim: usize, rows: &[IntVec], ray_limit: usize) -> Option<Generators> {
    let m = rows.len();
    let mut lines: Vec<IntVec> = (0..dim)
        .map(|i| {
            let mut v = IntVec::zeros(dim);
            v.0[i] = BigInt::from(1);
            v
        })
        .collect();
    let mut rays: Vec<(IntVec, ZeroSet)> = Vec::new();
    let empty_set = ZeroSet(vec![0; m.div_ceil(64).max(1)]);

    for (c, a) in rows.iter().enumerate() {
        if rays.len() > ray_limit {
            return None;
        }
        if a.is_zero() {
            for (_, z) in rays.iter_mut() {
                z.insert(c);
            }
            continue;
        }
        let line_vals: Vec<BigInt> = lines.iter().map(|l| l.dot(a)).collect();
        if let Some(p) = line_vals.iter().position(|v| *v != BigInt::from(0)) {
            let mut pivot = lines.swap_remove(p);
            let mut ap = line_vals[p].clone();
            let mut vals = line_vals;
            vals.swap_remove(p);
            if ap < BigInt::from(0) {
                pivot = pivot.neg();
                ap = -ap;
            }
            for (l, al) in lines.iter_mut().zip(&vals) {
                if *al != BigInt::from(0) {
                    *l = l.lin(&ap, &pivot, &-al).primitive();
                }
            }
            for (r, z) in rays.iter_mut() {
                let ar = r.dot(a);
                if ar != BigInt::from(0) {
                    *r = r.lin(&ap, &pivot, &-ar).primitive();
                }
                z.insert(c);
            }
            // the pivot was a line, so it is orthogonal to every earlier row
            let mut z = empty_set.clone();
            for j in 0..c {
                z.insert(j);
            }
            rays.push((pivot, z));
            continue;
        }

        let vals: Vec<BigInt> = rays.iter().map(|(r, _)| r.dot(a)).collect();
        let zero = BigInt::from(0);
        let pos: Vec<usize> = (0..rays.len()).filter(|&i| vals[i] > zero).collect();
        let neg: Vec<usize> = (0..rays.len()).filter(|&i| vals[i] < zero).collect();
        if neg.is_empty() {
            for (i, (_, z)) in rays.iter_mut().enumerate() {
                if vals[i] == zero {
                    z.insert(c);
                }
            }
            continue;
        }
        let pointed_dim = dim - lines.len();
        let need = pointed_dim.saturating_sub(2);
        let mut fresh: Vec<(IntVec, ZeroSet)> = Vec::new();
        for &p in &pos {
            for &n in &neg {
                let common = rays[p].1.and(&rays[n].1);
                if common.count() < need {
                    continue;
                }
                let adjacent = rays
                    .iter()
                    .enumerate()
                    .all(|(k, (_, z))| k == p || k == n || !z.is_superset_of(&common));
                if !adjacent {
                    continue;
                }
                let r = rays[n].0.lin(&vals[p], &rays[p].0, &-&vals[n]).primitive();
                let mut z = common;
                z.insert(c);
                fresh.push((r, z));
            }
        }
        let mut next: Vec<(IntVec, ZeroSet)> = Vec::with_capacity(rays.len() + fresh.len());
        for (i, (r, mut z)) in rays.into_iter().enumerate() {
            if vals[i] > zero {
                next.push((r, z));
            } else if vals[i] == zero {
                z.insert(c);
                next.push((r, z));
            }
        }
        next.extend(fresh);
        rays = next;
    }
    if rays.len() > ray_limit {
        return None;
    }

    let empty = (0..m).any(|j| rays.iter().all(|(_, z)| z.contains(j)));
    Some(Generators {
        lines,
        rays: rays.into_iter().map(|(r, _)| r).collect(),
        empty,
    })
}

impl Generators {
    /// An integer point of the open cell: the sum of all rays.
    pub fn interior_point(&self, dim: usize) -> IntVec {
        let mut y = IntVec::zeros(dim);
        for r in &self.rays {
            for (yi, ri) in y.0.iter_mut().zip(&r.0) {
                *yi += ri;
            }
        }
        y
    }
}
