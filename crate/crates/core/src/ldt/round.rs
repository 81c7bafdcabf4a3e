//! One round of queries: label a sample, sort its scaled members, and turn
//! the answers into exact sign conditions.

use crate::exact::IntVec;
use crate::inference::SignCondition;
use crate::oracle::{make_query, sort_items, GenComparisonQuery, QueryError, SortItem};
use crate::sign::Sign;

#[derive(Debug, Clone, PartialEq)]
pub struct RoundFacts {
    /// Labels of the sample, in sample order.
    pub labels: Vec<Sign>,
    /// One condition per label plus one per neighbouring pair in the
    /// sorted order.
    pub conditions: Vec<SignCondition>,
    pub label_queries: usize,
    pub comparison_queries: usize,
}

/// Labels `sample` (indices into `h`), then sorts the nonzero members by
/// `sign · scale · <h, x>`. Sorting only the oriented members recovers the
/// order of `±S`: negated keys sort in reverse, and a positive key is always
/// above a negative one.
pub fn round_facts<E: From<QueryError>>(
    h: &[Vec<f64>],
    sample: &[usize],
    scales: &[f64],
    ask: &mut dyn FnMut(GenComparisonQuery) -> Result<Sign, E>,
) -> Result<RoundFacts, E> {
    assert_eq!(sample.len(), scales.len(), "one scale per sampled vector");
    let mut labels = Vec::with_capacity(sample.len());
    let mut conditions = Vec::with_capacity(2 * sample.len());
    for &i in sample {
        let q = make_query(h, Some(i), None, 1.0, 0.0)?;
        let s = ask(q)?;
        labels.push(s);
        conditions.push(SignCondition::exact(IntVec::from_f64(&h[i]), s));
    }
    let items: Vec<SortItem> = sample
        .iter()
        .zip(scales)
        .zip(&labels)
        .filter(|(_, s)| !s.is_zero())
        .map(|((&index, &scale), &sign)| SortItem { index, sign, scale })
        .collect();
    let sorted = sort_items(&items, h, ask)?;
    for n in &sorted.neighbours {
        if let Some((q, answer)) = &n.fact {
            conditions.push(SignCondition::exact(q.exact(h), *answer));
        }
    }
    Ok(RoundFacts {
        labels,
        conditions,
        label_queries: sample.len(),
        comparison_queries: sorted.queries,
    })
}
