//! Enumeration of realizable sign patterns of a finite vector set.

use crate::exact::IntVec;
use crate::sign::Sign;

use super::{Cell, InferenceError, SignCondition};

/// All sign vectors `(sign <q, y>)_{q ∈ Q}` realized by some `y ∈ ℝ^d`, in
/// lexicographic order of (`-`, `0`, `+`). Depth-first extension of cells:
/// a query constant on the current cell has one child, any other has all
/// three, since cells are relatively open and convex.
pub fn enumerate_patterns(
    d: usize,
    queries: &[IntVec],
    node_limit: usize,
) -> Result<Vec<Vec<Sign>>, InferenceError> {
    for q in queries {
        if q.dim() != d {
            return Err(InferenceError::DimensionMismatch { expected: d, found: q.dim() });
        }
    }
    let mut out = Vec::new();
    let mut nodes = 0usize;
    let root = Cell::new(d, Vec::new())?;
    extend(d, queries, &root, &mut out, &mut nodes, node_limit)?;
    Ok(out)
}

fn extend(
    d: usize,
    queries: &[IntVec],
    cell: &Cell,
    out: &mut Vec<Vec<Sign>>,
    nodes: &mut usize,
    limit: usize,
) -> Result<(), InferenceError> {
    *nodes += 1;
    if *nodes > limit {
        return Err(InferenceError::NodeLimitExceeded { limit });
    }
    let depth = cell.conditions().len();
    if depth == queries.len() {
        out.push(cell.conditions().iter().map(|c| c.sign).collect());
        return Ok(());
    }
    let q = &queries[depth];
    let options: &[Sign] = match cell.infer_exact(q) {
        Some(Sign::Neg) => &[Sign::Neg],
        Some(Sign::Zero) => &[Sign::Zero],
        Some(Sign::Pos) => &[Sign::Pos],
        None => &Sign::ALL,
    };
    for &sigma in options {
        let mut conditions = cell.conditions().to_vec();
        conditions.push(SignCondition { query: q.clone(), sign: sigma });
        let child = Cell::new(d, conditions)?;
        extend(d, queries, &child, out, nodes, limit)?;
    }
    Ok(())
}
