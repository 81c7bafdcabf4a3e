//! Exact arithmetic on binary floating-point data.
//!
//! Every finite `f64` is a dyadic rational `m · 2^e`, so sums of products of
//! doubles are exact integers after a common power-of-two shift. Sign
//! conditions are homogeneous, so a direction only matters up to a positive
//! factor and we can keep everything as integer vectors.

use num_bigint::{BigInt, Sign as BigSign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use crate::sign::Sign;

/// `v = mantissa · 2^exp` exactly; `v` must be finite.
pub fn decompose(v: f64) -> (i64, i32) {
    assert!(v.is_finite(), "cannot decompose non-finite value {v}");
    if v == 0.0 {
        return (0, 0);
    }
    let bits = v.to_bits();
    let negative = bits >> 63 == 1;
    let biased = ((bits >> 52) & 0x7ff) as i32;
    let frac = (bits & ((1u64 << 52) - 1)) as i64;
    let (mut m, mut e) = if biased == 0 {
        (frac, -1074)
    } else {
        (frac | (1i64 << 52), biased - 1075)
    };
    let tz = m.trailing_zeros() as i32;
    m >>= tz;
    e += tz;
    (if negative { -m } else { m }, e)
}

/// A direction in ℤ^d. Positive rescaling never changes the meaning of a
/// sign condition, so constructors are free to drop common positive factors.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct IntVec(pub Vec<BigInt>);

impl IntVec {
    pub fn zeros(d: usize) -> IntVec {
        IntVec(vec![BigInt::zero(); d])
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    /// Exact image of a float vector, scaled by a power of two.
    pub fn from_f64(v: &[f64]) -> IntVec {
        IntVec::combination(&[(1.0, v)])
    }

    /// Exact `Σ cₜ vₜ` up to a positive power-of-two factor.
    pub fn combination(terms: &[(f64, &[f64])]) -> IntVec {
        let d = terms.first().map_or(0, |t| t.1.len());
        let mut parts: Vec<Vec<(i128, i32)>> = vec![Vec::new(); d];
        let mut min_exp = i32::MAX;
        for &(c, v) in terms {
            assert_eq!(v.len(), d, "dimension mismatch in combination");
            let (cm, ce) = decompose(c);
            if cm == 0 {
                continue;
            }
            for (i, &x) in v.iter().enumerate() {
                let (xm, xe) = decompose(x);
                if xm == 0 {
                    continue;
                }
                let e = ce + xe;
                min_exp = min_exp.min(e);
                parts[i].push((cm as i128 * xm as i128, e));
            }
        }
        let coords = parts
            .into_iter()
            .map(|p| {
                p.into_iter().fold(BigInt::zero(), |acc, (m, e)| {
                    acc + (BigInt::from(m) << ((e - min_exp) as usize))
                })
            })
            .collect();
        IntVec(coords).primitive()
    }

    /// Divides out the content so entries are coprime.
    pub fn primitive(mut self) -> IntVec {
        let mut g = BigInt::zero();
        for x in &self.0 {
            if !x.is_zero() {
                g = g.gcd(x);
                if g == BigInt::from(1) {
                    return self;
                }
            }
        }
        if !g.is_zero() && g != BigInt::from(1) {
            for x in &mut self.0 {
                *x /= &g;
            }
        }
        self
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Zero::is_zero)
    }

    pub fn neg(&self) -> IntVec {
        IntVec(self.0.iter().map(|x| -x).collect())
    }

    pub fn dot(&self, other: &IntVec) -> BigInt {
        debug_assert_eq!(self.dim(), other.dim());
        self.0.iter().zip(&other.0).map(|(a, b)| a * b).sum()
    }

    pub fn dot_sign(&self, other: &IntVec) -> Sign {
        big_sign(&self.dot(other))
    }

    /// `a·self + b·other`.
    pub fn lin(&self, a: &BigInt, other: &IntVec, b: &BigInt) -> IntVec {
        IntVec(self.0.iter().zip(&other.0).map(|(x, y)| a * x + b * y).collect())
    }

    /// Canonical representative of the line through the vector:
    /// primitive, with first nonzero entry positive. Returns the orientation
    /// of `self` relative to the representative.
    pub fn canonical_line(&self) -> (IntVec, Sign) {
        let p = self.clone().primitive();
        match p.0.iter().find(|x| !x.is_zero()) {
            None => (p, Sign::Zero),
            Some(first) if first.is_negative() => (p.neg(), Sign::Neg),
            Some(_) => (p, Sign::Pos),
        }
    }

    pub fn to_f64(&self) -> Vec<f64> {
        // rescale so the largest entry is near 1 before converting
        let bits = self.0.iter().map(|x| x.bits()).max().unwrap_or(0);
        let shift = bits.saturating_sub(60) as usize;
        self.0
            .iter()
            .map(|x| {
                let small: BigInt = x >> shift;
                let v: f64 = num_traits::ToPrimitive::to_f64(&small).unwrap_or(0.0);
                v
            })
            .collect()
    }

    pub fn to_rational(&self) -> Vec<BigRational> {
        self.0.iter().map(|x| BigRational::from_integer(x.clone())).collect()
    }
}

pub fn big_sign(x: &BigInt) -> Sign {
    match x.sign() {
        BigSign::Minus => Sign::Neg,
        BigSign::NoSign => Sign::Zero,
        BigSign::Plus => Sign::Pos,
    }
}

pub fn rat_sign(x: &BigRational) -> Sign {
    if x.is_zero() {
        Sign::Zero
    } else if x.is_positive() {
        Sign::Pos
    } else {
        Sign::Neg
    }
}

const UNIT_ROUNDOFF: f64 = f64::EPSILON / 2.0;

/// Error bound for an n-term sum of products with `rounds` multiplications each.
fn filter_bound(terms: usize, rounds: usize, magnitude: f64) -> f64 {
    let k = (terms + rounds + 1) as f64 * UNIT_ROUNDOFF;
    2.0 * k / (1.0 - k) * magnitude
}

/// Products below this may have lost bits to underflow; use the exact path.
const UNDERFLOW_GUARD: f64 = 1e-280;

/// Exact `sign(<a, b>)` for float vectors.
pub fn dot_sign(a: &[f64], b: &[f64]) -> Sign {
    assert_eq!(a.len(), b.len(), "dimension mismatch in dot product");
    let mut s = 0.0;
    let mut mag = 0.0;
    let mut tiny = false;
    for (x, y) in a.iter().zip(b) {
        let p = x * y;
        if p != 0.0 && p.abs() < UNDERFLOW_GUARD {
            tiny = true;
        }
        if (*x != 0.0 && *y != 0.0) && p == 0.0 {
            tiny = true;
        }
        s += p;
        mag += p.abs();
    }
    if s.is_finite() && mag.is_finite() && !tiny && s.abs() > filter_bound(a.len(), 1, mag) {
        return Sign::of_f64(s);
    }
    IntVec::from_f64(a).dot_sign(&IntVec::from_f64(b))
}

/// Exact `sign(<Σ cₜ vₜ, x>)` without materializing the combination.
pub fn combination_dot_sign(terms: &[(f64, &[f64])], x: &[f64]) -> Sign {
    let mut s = 0.0;
    let mut mag = 0.0;
    let mut tiny = false;
    let mut count = 0;
    for &(c, v) in terms {
        assert_eq!(v.len(), x.len(), "dimension mismatch in combination");
        for (vi, xi) in v.iter().zip(x) {
            let cv = c * vi;
            let p = cv * xi;
            if (cv != 0.0 && cv.abs() < UNDERFLOW_GUARD) || (p != 0.0 && p.abs() < UNDERFLOW_GUARD) {
                tiny = true;
            }
            if c != 0.0 && *vi != 0.0 && *xi != 0.0 && p == 0.0 {
                tiny = true;
            }
            s += p;
            mag += p.abs();
            count += 1;
        }
    }
    if s.is_finite() && mag.is_finite() && !tiny && s.abs() > filter_bound(count, 2, mag) {
        return Sign::of_f64(s);
    }
    IntVec::combination(terms).dot_sign(&IntVec::from_f64(x))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn decompose_roundtrip() {
        for v in [1.0, -0.75, 3.0e-310, 1.5e300, 0.1, -7.0] {
            let (m, e) = decompose(v);
            assert_eq!(m as f64 * 2f64.powi(e), v);
        }
        assert_eq!(decompose(0.0), (0, 0));
    }

    #[test]
    fn near_ties_are_exact() {
        // 0.1 + 0.2 != 0.3 in binary; the exact path must notice.
        let a = [0.1, 0.2, -0.3];
        let b = [1.0, 1.0, 1.0];
        let exact = IntVec::from_f64(&a).dot_sign(&IntVec::from_f64(&b));
        assert_eq!(dot_sign(&a, &b), exact);
        assert_ne!(exact, Sign::Zero);
        assert_eq!(dot_sign(&[1.0, -1.0], &[1.0, 1.0]), Sign::Zero);
    }

    #[test]
    fn combination_matches_definition() {
        let h1 = [1.0, 0.0];
        let h2 = [0.0, 1.0];
        let x = [1.0, 3.0];
        assert_eq!(combination_dot_sign(&[(0.25, &h1), (-0.75, &h2)], &x), Sign::Neg);
        assert_eq!(combination_dot_sign(&[(0.5, &h1), (-0.5, &h2)], &[1.0, 1.0]), Sign::Zero);
        let c = IntVec::combination(&[(0.5, &h1), (-0.5, &h2)]);
        assert_eq!(c, IntVec(vec![BigInt::from(1), BigInt::from(-1)]));
    }

    #[test]
    fn canonical_line_orientation() {
        let (a, sa) = IntVec::from_f64(&[-2.0, 4.0]).canonical_line();
        let (b, sb) = IntVec::from_f64(&[0.5, -1.0]).canonical_line();
        assert_eq!(a, b);
        assert_eq!(sa, Sign::Neg);
        assert_eq!(sb, Sign::Pos);
    }

    proptest! {
        #[test]
        fn dot_sign_agrees_with_exact(
            a in prop::collection::vec(-1e3f64..1e3, 1..6),
            scale in -20i32..20,
        ) {
            let b: Vec<f64> = a.iter().rev().map(|x| x * 2f64.powi(scale)).collect();
            let exact = IntVec::from_f64(&a).dot_sign(&IntVec::from_f64(&b));
            prop_assert_eq!(dot_sign(&a, &b), exact);
        }

        #[test]
        fn combination_sign_agrees_with_exact(
            v in prop::collection::vec(-10f64..10.0, 3),
            w in prop::collection::vec(-10f64..10.0, 3),
            x in prop::collection::vec(-10f64..10.0, 3),
            alpha in 0.0f64..1.0,
        ) {
            let terms = [(alpha, v.as_slice()), (alpha - 1.0, w.as_slice())];
            let exact = IntVec::combination(&terms).dot_sign(&IntVec::from_f64(&x));
            prop_assert_eq!(combination_dot_sign(&terms, &x), exact);
        }
    }
}
