//! Queries, the answer source, and the transcript every query is logged to.

use std::collections::HashMap;
use std::fmt::{self, Write as _};

use thiserror::Error;

use crate::exact::{self, IntVec};
use crate::sign::Sign;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum QueryError {
    #[error("hyperplane index {index} out of range for {len} hyperplanes")]
    IndexOutOfRange { index: usize, len: usize },
    #[error("invalid coefficients alpha = {alpha}, beta = {beta}")]
    BadCoefficients { alpha: f64, beta: f64 },
    #[error("query vector is zero")]
    ZeroVector,
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum QueryKind {
    Label,
    Comparison,
    Generalized,
}

impl QueryKind {
    pub fn as_str(self) -> &'static str {
        match self {
            QueryKind::Label => "label",
            QueryKind::Comparison => "comparison",
            QueryKind::Generalized => "generalized",
        }
    }
}

impl fmt::Display for QueryKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// `sign <α H[i] − β H[j], x>`, with `|α| + |β| = 1`. A missing index
/// contributes nothing and carries a zero coefficient.
#[derive(Debug, Clone, PartialEq)]
pub struct GenComparisonQuery {
    pub i: Option<usize>,
    pub j: Option<usize>,
    pub alpha: f64,
    pub beta: f64,
    /// `α H[i] − β H[j]` evaluated in floating point.
    pub vector: Vec<f64>,
}

impl GenComparisonQuery {
    pub fn kind(&self) -> QueryKind {
        if self.i.is_none() || self.j.is_none() || self.alpha == 0.0 || self.beta == 0.0 {
            QueryKind::Label
        } else if self.alpha == 0.5 && self.beta == 0.5 {
            QueryKind::Comparison
        } else {
            QueryKind::Generalized
        }
    }

    /// The exact combination as `(coefficient, vector)` terms.
    pub fn terms<'a>(&self, h: &'a [Vec<f64>]) -> Vec<(f64, &'a [f64])> {
        let mut t = Vec::with_capacity(2);
        if let Some(i) = self.i {
            t.push((self.alpha, h[i].as_slice()));
        }
        if let Some(j) = self.j {
            t.push((-self.beta, h[j].as_slice()));
        }
        t
    }

    /// The exact query direction, up to a positive factor.
    pub fn exact(&self, h: &[Vec<f64>]) -> IntVec {
        IntVec::combination(&self.terms(h))
    }
}

/// Builds a legal query, renormalizing the coefficients.
pub fn make_query(
    h: &[Vec<f64>],
    i: Option<usize>,
    j: Option<usize>,
    alpha: f64,
    beta: f64,
) -> Result<GenComparisonQuery, QueryError> {
    let bad = QueryError::BadCoefficients { alpha, beta };
    if !alpha.is_finite() || !beta.is_finite() {
        return Err(bad);
    }
    if (i.is_none() && alpha != 0.0) || (j.is_none() && beta != 0.0) {
        return Err(bad);
    }
    let total = alpha.abs() + beta.abs();
    if total == 0.0 || !total.is_finite() {
        return Err(bad);
    }
    let d = h.first().map_or(0, Vec::len);
    for idx in [i, j].into_iter().flatten() {
        let v = h.get(idx).ok_or(QueryError::IndexOutOfRange { index: idx, len: h.len() })?;
        if v.len() != d {
            return Err(QueryError::DimensionMismatch { expected: d, found: v.len() });
        }
    }
    build(h, d, i, j, alpha / total, beta / total)
}

/// Rebuilds a stored query without renormalizing, so the coefficients keep
/// their exact bits. Rejects coefficients off the `|α| + |β| = 1` surface.
pub fn query_from_parts(
    h: &[Vec<f64>],
    i: Option<usize>,
    j: Option<usize>,
    alpha: f64,
    beta: f64,
) -> Result<GenComparisonQuery, QueryError> {
    let bad = QueryError::BadCoefficients { alpha, beta };
    if !alpha.is_finite() || !beta.is_finite() || ((alpha.abs() + beta.abs()) - 1.0).abs() > 1e-12 {
        return Err(bad);
    }
    if (i.is_none() && alpha != 0.0) || (j.is_none() && beta != 0.0) {
        return Err(bad);
    }
    let d = h.first().map_or(0, Vec::len);
    for idx in [i, j].into_iter().flatten() {
        let v = h.get(idx).ok_or(QueryError::IndexOutOfRange { index: idx, len: h.len() })?;
        if v.len() != d {
            return Err(QueryError::DimensionMismatch { expected: d, found: v.len() });
        }
    }
    build(h, d, i, j, alpha, beta)
}

fn build(
    h: &[Vec<f64>],
    d: usize,
    i: Option<usize>,
    j: Option<usize>,
    alpha: f64,
    beta: f64,
) -> Result<GenComparisonQuery, QueryError> {
    let q = GenComparisonQuery { i, j, alpha, beta, vector: Vec::new() };
    if q.exact(h).is_zero() {
        return Err(QueryError::ZeroVector);
    }
    let mut vector = vec![0.0; d];
    for (c, v) in q.terms(h) {
        for (o, x) in vector.iter_mut().zip(v) {
            *o += c * x;
        }
    }
    Ok(GenComparisonQuery { vector, ..q })
}

/// Answers `sign <q, x>` for a hidden `x`.
pub trait SignOracle {
    fn dim(&self) -> usize;

    /// Exact sign of `<Σ cₜ vₜ, x>`.
    fn answer_combination(&self, terms: &[(f64, &[f64])]) -> Sign;

    fn answer(&self, q: &[f64]) -> Sign {
        self.answer_combination(&[(1.0, q)])
    }
}

/// The reference oracle: a concrete point, answered exactly.
#[derive(Debug, Clone, PartialEq)]
pub struct PointOracle {
    x: Vec<f64>,
}

impl PointOracle {
    pub fn new(x: Vec<f64>) -> PointOracle {
        assert!(x.iter().all(|v| v.is_finite()), "oracle point must be finite");
        PointOracle { x }
    }

    pub fn point(&self) -> &[f64] {
        &self.x
    }
}

impl SignOracle for PointOracle {
    fn dim(&self) -> usize {
        self.x.len()
    }

    fn answer_combination(&self, terms: &[(f64, &[f64])]) -> Sign {
        exact::combination_dot_sign(terms, &self.x)
    }
}

/// Ordered record of the queries of one session.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct QueryTranscript {
    pub entries: Vec<(GenComparisonQuery, Sign)>,
    pub labels: usize,
    pub comparisons: usize,
    pub generalized: usize,
}

impl QueryTranscript {
    pub fn new() -> QueryTranscript {
        QueryTranscript::default()
    }

    pub fn record(&mut self, q: GenComparisonQuery, answer: Sign) {
        match q.kind() {
            QueryKind::Label => self.labels += 1,
            QueryKind::Comparison => self.comparisons += 1,
            QueryKind::Generalized => self.generalized += 1,
        }
        self.entries.push((q, answer));
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// `kind,i,j,alpha,beta,answer` records with a header line; floats carry
    /// 17 significant digits so they parse back to the same bits.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("kind,i,j,alpha,beta,answer\n");
        let idx = |v: Option<usize>| v.map_or_else(|| "NONE".to_string(), |i| i.to_string());
        for (q, a) in &self.entries {
            let _ = writeln!(
                out,
                "{},{},{},{:.16e},{:.16e},{}",
                q.kind(),
                idx(q.i),
                idx(q.j),
                q.alpha,
                q.beta,
                a.as_i8()
            );
        }
        out
    }
}

/// Asks one query, logging it.
pub fn ask(
    oracle: &dyn SignOracle,
    h: &[Vec<f64>],
    q: GenComparisonQuery,
    transcript: &mut QueryTranscript,
) -> Sign {
    let answer = oracle.answer_combination(&q.terms(h));
    transcript.record(q, answer);
    answer
}

/// `sign · scale · H[index]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SortItem {
    pub index: usize,
    pub sign: Sign,
    pub scale: f64,
}

impl SortItem {
    fn coefficient(&self) -> f64 {
        self.sign.as_i8() as f64 * self.scale
    }
}

/// The answer relating two neighbours of the sorted order.
#[derive(Debug, Clone, PartialEq)]
pub struct Neighbours {
    /// Positions into the item list, `lower` first in the order.
    pub lower: usize,
    pub upper: usize,
    /// The query that related them and its answer; `None` when the two
    /// items are the same vector and no query was needed.
    pub fact: Option<(GenComparisonQuery, Sign)>,
    /// `sign(key upper − key lower)`: `Pos` or `Zero`.
    pub relation: Sign,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SortOutcome {
    /// Ascending groups of equal keys, as positions into the item list.
    pub groups: Vec<Vec<usize>>,
    pub neighbours: Vec<Neighbours>,
    pub queries: usize,
}

impl SortOutcome {
    pub fn order(&self) -> Vec<usize> {
        self.groups.iter().flatten().copied().collect()
    }
}

/// Upper bound on the comparisons used for `m` items.
pub fn comparison_bound(m: usize) -> usize {
    if m <= 1 {
        return 0;
    }
    let log = usize::BITS - (m - 1).leading_zeros();
    m * log as usize + m
}

struct Sorter<'a, E> {
    h: &'a [Vec<f64>],
    items: &'a [SortItem],
    ask: &'a mut dyn FnMut(GenComparisonQuery) -> Result<Sign, E>,
    /// `(a, b)` with `a < b` → (query, sign of `item a − item b`).
    asked: HashMap<(usize, usize), (Option<GenComparisonQuery>, Sign)>,
    queries: usize,
}

impl<E: From<QueryError>> Sorter<'_, E> {
    /// `sign(key a − key b)`.
    fn compare(&mut self, a: usize, b: usize) -> Result<Sign, E> {
        let (lo, hi, flip) = if a < b { (a, b, false) } else { (b, a, true) };
        if let Some((_, s)) = self.asked.get(&(lo, hi)) {
            return Ok(if flip { s.flip() } else { *s });
        }
        let (x, y) = (&self.items[lo], &self.items[hi]);
        let entry = match make_query(self.h, Some(x.index), Some(y.index), x.coefficient(), y.coefficient()) {
            Ok(q) => {
                let s = (self.ask)(q.clone())?;
                self.queries += 1;
                (Some(q), s)
            }
            Err(QueryError::ZeroVector) => (None, Sign::Zero),
            Err(e) => return Err(e.into()),
        };
        let s = entry.1;
        self.asked.insert((lo, hi), entry);
        Ok(if flip { s.flip() } else { s })
    }

    fn sort(&mut self, v: Vec<usize>) -> Result<Vec<usize>, E> {
        if v.len() <= 1 {
            return Ok(v);
        }
        let mut right = v;
        let left = right.drain(..right.len() / 2).collect();
        let left = self.sort(left)?;
        let right = self.sort(right)?;
        let mut out = Vec::with_capacity(left.len() + right.len());
        let (mut i, mut j) = (0, 0);
        while i < left.len() && j < right.len() {
            if self.compare(left[i], right[j])? == Sign::Pos {
                out.push(right[j]);
                j += 1;
            } else {
                out.push(left[i]);
                i += 1;
            }
        }
        out.extend_from_slice(&left[i..]);
        out.extend_from_slice(&right[j..]);
        Ok(out)
    }
}

/// Sorts `σ · scale · <H[index], x>` with ternary comparison queries sent
/// through `ask`.
///
/// Mergesort compares every pair that ends up adjacent, so the neighbour
/// answers come for free and carry all the order information.
pub fn sort_items<E: From<QueryError>>(
    items: &[SortItem],
    h: &[Vec<f64>],
    ask: &mut dyn FnMut(GenComparisonQuery) -> Result<Sign, E>,
) -> Result<SortOutcome, E> {
    let mut sorter = Sorter { h, items, ask, asked: HashMap::new(), queries: 0 };
    let order = sorter.sort((0..items.len()).collect())?;
    let mut groups: Vec<Vec<usize>> = Vec::new();
    let mut neighbours = Vec::with_capacity(order.len().saturating_sub(1));
    for (k, &p) in order.iter().enumerate() {
        if k == 0 {
            groups.push(vec![p]);
            continue;
        }
        let prev = order[k - 1];
        let relation = sorter.compare(p, prev)?;
        let key = if prev < p { (prev, p) } else { (p, prev) };
        let (query, answer) = sorter.asked[&key].clone();
        let fact = query.map(|q| (q, answer));
        if relation == Sign::Zero {
            groups.last_mut().expect("nonempty").push(p);
        } else {
            groups.push(vec![p]);
        }
        neighbours.push(Neighbours { lower: prev, upper: p, fact, relation });
    }
    Ok(SortOutcome { groups, neighbours, queries: sorter.queries })
}

/// [`sort_items`] against an oracle, logging every query.
pub fn sort_by_inner_product(
    oracle: &dyn SignOracle,
    items: &[SortItem],
    h: &[Vec<f64>],
    transcript: &mut QueryTranscript,
) -> Result<SortOutcome, QueryError> {
    let mut ask = |q: GenComparisonQuery| -> Result<Sign, QueryError> { Ok(ask(oracle, h, q, transcript)) };
    sort_items(items, h, &mut ask)
}
