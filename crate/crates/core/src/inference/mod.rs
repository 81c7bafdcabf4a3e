//! Which signs are forced by a set of answered sign queries.
//!
//! A set of sign conditions `sign <q, y> = s` carves out a cell: a relatively
//! open convex cone. A hyperplane's sign is inferred exactly when it is
//! constant on that cell. All decisions are made in exact integer/rational
//! arithmetic on the binary values of the inputs.
//!
//! Two routes are provided. [`infer`] answers one hyperplane with at most two
//! exact LPs. [`Cell`] computes the generators of the cell once and then
//! classifies any number of hyperplanes with a few dot products each,
//! falling back to LPs when the generator count gets out of hand.

mod cell;
mod patterns;
mod simplex;
mod system;

use num_traits::Zero;
use thiserror::Error;

use crate::exact::{self, IntVec};
use crate::sign::{Sign, SignVector};

pub use patterns::enumerate_patterns;

use simplex::{strict_feasible, Outcome};
use system::{clear_denominators, Reduced};

/// Ray count above which [`Cell`] gives up on generators and uses LPs.
pub const DEFAULT_RAY_LIMIT: usize = 4000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum InferenceError {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("query vector is zero")]
    ZeroQuery,
    #[error("query vector has a non-finite entry")]
    NonFinite,
    #[error("sign conditions are inconsistent")]
    Infeasible,
    #[error("pattern enumeration exceeded {limit} nodes")]
    NodeLimitExceeded { limit: usize },
    #[error("expected {expected} answers, got {found}")]
    AnswerCount { expected: usize, found: usize },
}

/// `sign <query, y> = sign`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SignCondition {
    pub query: IntVec,
    pub sign: Sign,
}

impl SignCondition {
    pub fn new(query: &[f64], sign: Sign) -> Result<SignCondition, InferenceError> {
        if query.iter().any(|x| !x.is_finite()) {
            return Err(InferenceError::NonFinite);
        }
        let query = IntVec::from_f64(query);
        if query.is_zero() {
            return Err(InferenceError::ZeroQuery);
        }
        Ok(SignCondition { query, sign })
    }

    /// Wraps an exact vector; zero vectors are allowed and read as
    /// "`0 = sign`", which is infeasible unless `sign` is zero.
    pub fn exact(query: IntVec, sign: Sign) -> SignCondition {
        SignCondition { query, sign }
    }

    pub fn holds_at(&self, y: &IntVec) -> bool {
        self.query.dot_sign(y) == self.sign
    }
}

fn check_dims(d: usize, conditions: &[SignCondition]) -> Result<(), InferenceError> {
    match conditions.iter().find(|c| c.query.dim() != d) {
        Some(c) => Err(InferenceError::DimensionMismatch { expected: d, found: c.query.dim() }),
        None => Ok(()),
    }
}

fn point_of(reduced: &Reduced) -> Option<IntVec> {
    if reduced.contradiction {
        return None;
    }
    match strict_feasible(reduced.reduced_dim(), &reduced.strict) {
        Outcome::Infeasible => None,
        Outcome::Feasible(z) => Some(clear_denominators(&reduced.lift(&z))),
    }
}

/// An integer point satisfying every condition, or `None` if there is none.
pub fn feasible_point(d: usize, conditions: &[SignCondition]) -> Result<Option<IntVec>, InferenceError> {
    check_dims(d, conditions)?;
    let w = point_of(&Reduced::new(d, conditions));
    debug_assert!(w.as_ref().is_none_or(|w| conditions.iter().all(|c| c.holds_at(w))));
    Ok(w)
}

/// Whether some `y ∈ ℝ^d` satisfies every condition.
pub fn cone_feasible(d: usize, conditions: &[SignCondition]) -> Result<bool, InferenceError> {
    Ok(feasible_point(d, conditions)?.is_some())
}

/// The sign of `<h, ·>` forced on the cell of `s`, or `None` if it varies.
///
/// One LP finds a point `w` of the cell; the only candidate is
/// `σ = sign <h, w>`. The cell is relatively open, so `h` is constant on it
/// iff the single condition that would break constancy is infeasible: the
/// hyperplane itself when `σ ≠ 0`, the positive side when `σ = 0`.
pub fn infer(d: usize, s: &[SignCondition], h: &IntVec) -> Result<Option<Sign>, InferenceError> {
    check_dims(d, s)?;
    if h.dim() != d {
        return Err(InferenceError::DimensionMismatch { expected: d, found: h.dim() });
    }
    let w = feasible_point(d, s)?.ok_or(InferenceError::Infeasible)?;
    Ok(lp_classify(d, s, &w, h))
}

fn lp_classify(d: usize, s: &[SignCondition], w: &IntVec, h: &IntVec) -> Option<Sign> {
    let sigma = h.dot_sign(w);
    let probe = if sigma == Sign::Zero { Sign::Pos } else { Sign::Zero };
    let mut extended = s.to_vec();
    extended.push(SignCondition::exact(h.clone(), probe));
    match point_of(&Reduced::new(d, &extended)) {
        Some(_) => None,
        None => Some(sigma),
    }
}

/// Every `σ` for which `s` plus `sign <h, y> = σ` is feasible.
pub fn feasible_signs(d: usize, s: &[SignCondition], h: &IntVec) -> Result<Vec<Sign>, InferenceError> {
    let mut out = Vec::new();
    for sigma in Sign::ALL {
        let mut extended = s.to_vec();
        extended.push(SignCondition::exact(h.clone(), sigma));
        if cone_feasible(d, &extended)? {
            out.push(sigma);
        }
    }
    Ok(out)
}

/// A generator with a float shadow for fast filtered sign tests.
#[derive(Debug, Clone)]
struct Gen {
    exact: IntVec,
    approx: Vec<f64>,
}

impl Gen {
    fn new(exact: IntVec) -> Gen {
        let approx = exact.to_f64();
        Gen { exact, approx }
    }

    /// `sign <self, h>` where `h` is a float vector.
    fn sign_with(&self, h: &[f64], h_exact: &mut Option<IntVec>) -> Sign {
        let u = f64::EPSILON / 2.0;
        let mut s = 0.0;
        let mut mag = 0.0;
        let mut slack = 0.0;
        let mut tiny = false;
        for (g, x) in self.approx.iter().zip(h) {
            let p = g * x;
            if p != 0.0 && p.abs() < 1e-280 || (*g != 0.0 && *x != 0.0 && p == 0.0) {
                tiny = true;
            }
            s += p;
            mag += p.abs();
            // truncation to the shadow is below one unit plus rounding
            slack += x.abs() * (1.0 + 2.0 * u * g.abs());
        }
        let n = (h.len() + 2) as f64 * u;
        let bound = (2.0 * n / (1.0 - n) * mag + slack) * (1.0 + 1e-9);
        if !tiny && s.is_finite() && mag.is_finite() && s.abs() > bound {
            return Sign::of_f64(s);
        }
        let he = h_exact.get_or_insert_with(|| IntVec::from_f64(h));
        self.exact.dot_sign(he)
    }
}

#[derive(Debug, Clone)]
enum Repr {
    /// Lines and rays of the closed cell, in ambient coordinates.
    Generators { lines: Vec<Gen>, rays: Vec<Gen> },
    /// Too many generators; every query runs an LP.
    Lp,
}

/// The cell of a consistent set of sign conditions, prepared for many
/// inference queries.
#[derive(Debug, Clone)]
pub struct Cell {
    d: usize,
    conditions: Vec<SignCondition>,
    witness: IntVec,
    repr: Repr,
}

impl Cell {
    pub fn new(d: usize, conditions: Vec<SignCondition>) -> Result<Cell, InferenceError> {
        Cell::with_ray_limit(d, conditions, DEFAULT_RAY_LIMIT)
    }

    pub fn with_ray_limit(
        d: usize,
        conditions: Vec<SignCondition>,
        ray_limit: usize,
    ) -> Result<Cell, InferenceError> {
        check_dims(d, &conditions)?;
        let reduced = Reduced::new(d, &conditions);
        if reduced.contradiction {
            return Err(InferenceError::Infeasible);
        }
        let dim = reduced.reduced_dim();
        if let Some(g) = cell::generators(dim, &reduced.strict, ray_limit) {
            if g.empty {
                return Err(InferenceError::Infeasible);
            }
            let witness = reduced.lift_int(&g.interior_point(dim)).primitive();
            debug_assert!(conditions.iter().all(|c| c.holds_at(&witness)));
            let lift = |v: &IntVec| Gen::new(reduced.lift_int(v).primitive());
            let lines = g.lines.iter().map(lift).collect();
            let rays = g.rays.iter().map(lift).collect();
            return Ok(Cell { d, conditions, witness, repr: Repr::Generators { lines, rays } });
        }
        let witness = point_of(&reduced).ok_or(InferenceError::Infeasible)?;
        Ok(Cell { d, conditions, witness, repr: Repr::Lp })
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn conditions(&self) -> &[SignCondition] {
        &self.conditions
    }

    /// A point of the cell.
    pub fn witness(&self) -> &IntVec {
        &self.witness
    }

    /// Whether the generator route is in use.
    pub fn has_generators(&self) -> bool {
        matches!(self.repr, Repr::Generators { .. })
    }

    /// The sign of `<h, ·>` on the cell, `None` if not constant.
    pub fn infer(&self, h: &[f64]) -> Option<Sign> {
        assert_eq!(h.len(), self.d, "dimension mismatch in Cell::infer");
        match &self.repr {
            Repr::Generators { lines, rays } => {
                let mut h_exact = None;
                classify(lines, rays, |g| g.sign_with(h, &mut h_exact))
            }
            Repr::Lp => lp_classify(self.d, &self.conditions, &self.witness, &IntVec::from_f64(h)),
        }
    }

    /// [`Cell::infer`] for an exact vector.
    pub fn infer_exact(&self, h: &IntVec) -> Option<Sign> {
        assert_eq!(h.dim(), self.d, "dimension mismatch in Cell::infer_exact");
        match &self.repr {
            Repr::Generators { lines, rays } => classify(lines, rays, |g| g.exact.dot_sign(h)),
            Repr::Lp => lp_classify(self.d, &self.conditions, &self.witness, h),
        }
    }
}

/// Constant sign on `lin(lines) + cone(rays)` minus its boundary: zero on
/// every line and one-signed (or zero) on the rays.
fn classify(lines: &[Gen], rays: &[Gen], mut sign: impl FnMut(&Gen) -> Sign) -> Option<Sign> {
    if lines.iter().any(|l| sign(l) != Sign::Zero) {
        return None;
    }
    let mut pos = false;
    let mut neg = false;
    for r in rays {
        match sign(r) {
            Sign::Pos => pos = true,
            Sign::Neg => neg = true,
            Sign::Zero => {}
        }
        if pos && neg {
            return None;
        }
    }
    Some(match (pos, neg) {
        (true, false) => Sign::Pos,
        (false, true) => Sign::Neg,
        _ => Sign::Zero,
    })
}

/// Answers for `S ∪ (S − S)`: the label of each member of `S` plus the
/// signs of the differences that sorting reveals. Only differences between
/// neighbours in sorted order are kept; they imply all the others.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ComparisonAnswers {
    pub labels: Vec<Sign>,
    /// `(a, b, sign <s_a − s_b, x>)`.
    pub differences: Vec<(usize, usize, Sign)>,
}

impl ComparisonAnswers {
    /// The answers a point `x` gives, computed exactly.
    pub fn from_point(s: &[Vec<f64>], x: &[f64]) -> ComparisonAnswers {
        let labels: Vec<Sign> = s.iter().map(|v| exact::dot_sign(v, x)).collect();
        let mut order: Vec<usize> = (0..s.len()).collect();
        let cmp = |a: usize, b: usize| exact::combination_dot_sign(&[(1.0, &s[a]), (-1.0, &s[b])], x);
        order.sort_by(|&a, &b| match cmp(a, b) {
            Sign::Neg => std::cmp::Ordering::Less,
            Sign::Zero => std::cmp::Ordering::Equal,
            Sign::Pos => std::cmp::Ordering::Greater,
        });
        let differences = order.windows(2).map(|w| (w[1], w[0], cmp(w[1], w[0]))).collect();
        ComparisonAnswers { labels, differences }
    }
}

/// Inference from `S ∪ (S − S)`. Pass `±S` as `s` to infer from both signs
/// of every member. Each entry of the result is the forced sign of the
/// corresponding member of `h`, or unknown.
pub fn infer_comp(
    s: &[Vec<f64>],
    answers: &ComparisonAnswers,
    h: &[Vec<f64>],
) -> Result<SignVector, InferenceError> {
    if answers.labels.len() != s.len() {
        return Err(InferenceError::AnswerCount { expected: s.len(), found: answers.labels.len() });
    }
    let d = match (s.first(), h.first()) {
        (Some(v), _) | (None, Some(v)) => v.len(),
        (None, None) => return Ok(SignVector::unknown(0)),
    };
    for v in s.iter().chain(h) {
        if v.len() != d {
            return Err(InferenceError::DimensionMismatch { expected: d, found: v.len() });
        }
    }
    let mut conditions: Vec<SignCondition> = s
        .iter()
        .zip(&answers.labels)
        .map(|(v, &sign)| SignCondition::exact(IntVec::from_f64(v), sign))
        .collect();
    for &(a, b, sign) in &answers.differences {
        let (Some(va), Some(vb)) = (s.get(a), s.get(b)) else {
            return Err(InferenceError::AnswerCount { expected: s.len(), found: a.max(b) + 1 });
        };
        let q = IntVec::combination(&[(1.0, va), (-1.0, vb)]);
        conditions.push(SignCondition::exact(q, sign));
    }
    let cell = Cell::new(d, conditions)?;
    Ok(SignVector(h.iter().map(|v| cell.infer(v)).collect()))
}

/// Exact `sign <q, y>` as a rational check; used by tests and callers that
/// hold rational points.
pub fn condition_holds(c: &SignCondition, y: &[num_rational::BigRational]) -> bool {
    let v = c
        .query
        .0
        .iter()
        .zip(y)
        .fold(num_rational::BigRational::zero(), |acc, (a, b)| {
            acc + num_rational::BigRational::from_integer(a.clone()) * b
        });
    exact::rat_sign(&v) == c.sign
}

#[cfg(test)]
mod tests {
    use super::*;

    const R: f64 = std::f64::consts::FRAC_1_SQRT_2;

    fn c(q: &[f64], s: i8) -> SignCondition {
        SignCondition::new(q, Sign::from_i8(s).unwrap()).unwrap()
    }

    fn iv(v: &[f64]) -> IntVec {
        IntVec::from_f64(v)
    }

    #[test]
    fn feasibility_examples() {
        assert!(!cone_feasible(2, &[c(&[1.0, 0.0], 1), c(&[1.0, 0.0], -1)]).unwrap());
        assert!(!cone_feasible(2, &[c(&[1.0, 0.0], 1), c(&[0.0, 1.0], 1), c(&[R, R], -1)]).unwrap());
        assert!(cone_feasible(2, &[c(&[1.0, 0.0], 1), c(&[0.0, 1.0], -1)]).unwrap());
        assert!(matches!(
            cone_feasible(2, &[c(&[1.0, 0.0, 0.0], 1)]),
            Err(InferenceError::DimensionMismatch { expected: 2, found: 3 })
        ));
    }

    #[test]
    fn zero_query_rejected() {
        assert_eq!(SignCondition::new(&[0.0, 0.0], Sign::Pos), Err(InferenceError::ZeroQuery));
    }

    #[test]
    fn infer_examples() {
        let s = [c(&[1.0, 0.0], 1), c(&[0.0, 1.0], 1)];
        assert_eq!(infer(2, &s, &iv(&[R, R])).unwrap(), Some(Sign::Pos));
        assert_eq!(infer(2, &s, &iv(&[R, -R])).unwrap(), None);
        let s = [c(&[1.0, 0.0], 0), c(&[0.0, 1.0], 1)];
        assert_eq!(infer(2, &s, &iv(&[1.0, 0.0])).unwrap(), Some(Sign::Zero));
        let bad = [c(&[1.0, 0.0], 1), c(&[1.0, 0.0], -1)];
        assert_eq!(infer(2, &bad, &iv(&[1.0, 0.0])), Err(InferenceError::Infeasible));
    }

    #[test]
    fn cell_matches_lp_on_examples() {
        let s = vec![c(&[1.0, 0.0, 0.0], 1), c(&[-1.0, 1.0, 0.0], 0), c(&[0.0, 1.0, -1.0], -1)];
        let dd = Cell::new(3, s.clone()).unwrap();
        let lp = Cell::with_ray_limit(3, s.clone(), 0).unwrap();
        assert!(dd.has_generators());
        assert!(!lp.has_generators());
        for h in [[1.0, 0.0, 0.0], [0.0, 0.0, 1.0], [1.0, -1.0, 0.0], [0.0, 1.0, 0.0], [1.0, 1.0, -3.0]] {
            assert_eq!(dd.infer(&h), lp.infer(&h), "h = {h:?}");
            assert_eq!(dd.infer(&h), infer(3, &s, &iv(&h)).unwrap());
        }
    }

    #[test]
    fn infer_comp_examples() {
        let s = vec![vec![1.0, 0.0]];
        let answers = ComparisonAnswers { labels: vec![Sign::Pos], differences: vec![] };
        let h = vec![vec![1.0, 0.0], vec![-1.0, 0.0], vec![0.0, 1.0]];
        let out = infer_comp(&s, &answers, &h).unwrap();
        assert_eq!(out.0, vec![Some(Sign::Pos), Some(Sign::Neg), None]);

        let s = vec![vec![1.0, 0.0], vec![0.0, 1.0]];
        let answers = ComparisonAnswers::from_point(&s, &[3.0, 1.0]);
        assert_eq!(answers.labels, vec![Sign::Pos, Sign::Pos]);
        assert_eq!(answers.differences, vec![(0, 1, Sign::Pos)]);
        let out = infer_comp(&s, &answers, &[vec![R, R]]).unwrap();
        assert_eq!(out.get(0), Some(Sign::Pos));
        // independent check: the opposite sign is infeasible
        let mut conds = vec![c(&[1.0, 0.0], 1), c(&[0.0, 1.0], 1), c(&[1.0, -1.0], 1)];
        conds.push(c(&[R, R], -1));
        assert!(!cone_feasible(2, &conds).unwrap());
    }

    #[test]
    fn orthogonal_to_everything_is_unknown() {
        let s = vec![vec![1.0, 0.0, 0.0], vec![2.0, 0.0, 0.0]];
        let answers = ComparisonAnswers::from_point(&s, &[1.0, 5.0, 5.0]);
        let out = infer_comp(&s, &answers, &[vec![0.0, 1.0, 0.0], vec![0.0, 0.0, -1.0]]).unwrap();
        assert_eq!(out.0, vec![None, None]);
    }

    #[test]
    fn inconsistent_answers() {
        let s = vec![vec![1.0, 0.0], vec![-1.0, 0.0]];
        let answers = ComparisonAnswers { labels: vec![Sign::Pos, Sign::Pos], differences: vec![] };
        assert_eq!(infer_comp(&s, &answers, &[vec![1.0, 0.0]]), Err(InferenceError::Infeasible));
    }

    #[test]
    fn witness_satisfies_conditions() {
        let s = vec![c(&[1.0, 0.0, 0.0], 1), c(&[-1.0, 1.0, 0.0], 0), c(&[0.0, 1.0, -1.0], -1)];
        let dd = Cell::new(3, s.clone()).unwrap();
        assert!(s.iter().all(|c| c.holds_at(dd.witness())));
        let w = feasible_point(3, &s).unwrap().unwrap();
        assert!(s.iter().all(|c| c.holds_at(&w)));
        let y: Vec<_> = w.to_rational();
        assert!(s.iter().all(|c| condition_holds(c, &y)));
    }
}
