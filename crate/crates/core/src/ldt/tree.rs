//! Materialized decision trees.
//!
//! A tree is the computation tree of the deterministic locator: each round
//! labels and sorts a universal set of the surviving lines, infers what it
//! can, and finally labels the rest. The builder replays that algorithm
//! against answer prefixes and branches wherever more than one answer is
//! realizable, so only realizable branches are materialized.

use std::collections::{HashMap, HashSet};
use std::fmt::Write as _;

use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Deserialize;

use crate::exact::IntVec;
use crate::inference::{Cell, SignCondition};
use crate::oracle::{make_query, query_from_parts, GenComparisonQuery, PointOracle, QueryError, SignOracle};
use crate::sign::Sign;

use super::{dedup, round_facts, round_transform, universal_set, Dedup, LdtError, LocateConfig};

pub const TREE_FORMAT: &str = "gencomp-tree";
pub const TREE_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq)]
pub enum Node {
    /// Children indexed by answer: `-`, `0`, `+`.
    Query { query: GenComparisonQuery, children: [Option<usize>; 3] },
    Leaf { signs: Vec<Sign> },
}

fn slot(s: Sign) -> usize {
    (s.as_i8() + 1) as usize
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BuildMode {
    /// Branch on every realizable answer, including zeros.
    Everywhere,
    /// Branch only on nonzero answers; correct on full-dimensional cells.
    AlmostEverywhere,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TreeStats {
    pub nodes: usize,
    pub leaves: usize,
    pub depth: usize,
    pub zero_branches: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DecisionTree {
    pub h: Vec<Vec<f64>>,
    pub nodes: Vec<Node>,
    pub root: usize,
}

impl DecisionTree {
    pub fn dim(&self) -> usize {
        self.h.first().map_or(0, Vec::len)
    }

    /// Follows the tree with exact answers for `x`.
    pub fn evaluate(&self, x: &[f64]) -> Result<Vec<Sign>, LdtError> {
        if x.len() != self.dim() {
            return Err(LdtError::DimensionMismatch { expected: self.dim(), found: x.len() });
        }
        let oracle = PointOracle::new(x.to_vec());
        let mut at = self.root;
        loop {
            match &self.nodes[at] {
                Node::Leaf { signs } => return Ok(signs.clone()),
                Node::Query { query, children } => {
                    let answer = oracle.answer_combination(&query.terms(&self.h));
                    at = children[slot(answer)].ok_or(LdtError::MissingBranch { node: at, answer })?;
                }
            }
        }
    }

    pub fn stats(&self) -> TreeStats {
        let mut depth = vec![0usize; self.nodes.len()];
        let mut stats = TreeStats { nodes: self.nodes.len(), leaves: 0, depth: 0, zero_branches: 0 };
        let mut stack = vec![self.root];
        while let Some(at) = stack.pop() {
            match &self.nodes[at] {
                Node::Leaf { .. } => {
                    stats.leaves += 1;
                    stats.depth = stats.depth.max(depth[at]);
                }
                Node::Query { children, .. } => {
                    if children[1].is_some() {
                        stats.zero_branches += 1;
                    }
                    for &c in children.iter().flatten() {
                        depth[c] = depth[at] + 1;
                        stack.push(c);
                    }
                }
            }
        }
        stats
    }

    /// Distinct queries as `(i, j, α bits, β bits)`.
    pub fn query_set(&self) -> HashSet<(Option<usize>, Option<usize>, u64, u64)> {
        self.nodes
            .iter()
            .filter_map(|n| match n {
                Node::Query { query: q, .. } => Some((q.i, q.j, q.alpha.to_bits(), q.beta.to_bits())),
                Node::Leaf { .. } => None,
            })
            .collect()
    }

    /// Versioned JSON document; floats carry 17 significant digits so a
    /// parse and rewrite reproduces the same bytes.
    pub fn to_json(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "{{");
        let _ = writeln!(out, "  \"format\": \"{TREE_FORMAT}\",");
        let _ = writeln!(out, "  \"version\": {TREE_VERSION},");
        let _ = writeln!(out, "  \"d\": {},", self.dim());
        let _ = writeln!(out, "  \"hyperplanes\": [");
        for (k, v) in self.h.iter().enumerate() {
            let sep = if k + 1 == self.h.len() { "" } else { "," };
            let _ = writeln!(out, "    {}{sep}", float_array(v));
        }
        let _ = writeln!(out, "  ],");
        let _ = writeln!(out, "  \"root\": {},", self.root);
        let _ = writeln!(out, "  \"nodes\": [");
        let opt = |v: Option<usize>| v.map_or_else(|| "null".to_string(), |x| x.to_string());
        for (k, n) in self.nodes.iter().enumerate() {
            let sep = if k + 1 == self.nodes.len() { "" } else { "," };
            match n {
                Node::Query { query: q, children } => {
                    let _ = writeln!(
                        out,
                        "    {{\"i\": {}, \"j\": {}, \"alpha\": {:.16e}, \"beta\": {:.16e}, \"children\": [{}, {}, {}]}}{sep}",
                        opt(q.i),
                        opt(q.j),
                        q.alpha,
                        q.beta,
                        opt(children[0]),
                        opt(children[1]),
                        opt(children[2])
                    );
                }
                Node::Leaf { signs } => {
                    let s: Vec<String> = signs.iter().map(|s| s.as_i8().to_string()).collect();
                    let _ = writeln!(out, "    {{\"leaf\": [{}]}}{sep}", s.join(", "));
                }
            }
        }
        let _ = writeln!(out, "  ]");
        let _ = writeln!(out, "}}");
        out
    }

    pub fn from_json(text: &str) -> Result<DecisionTree, LdtError> {
        let doc: TreeDoc = serde_json::from_str(text).map_err(|e| LdtError::Format(e.to_string()))?;
        let fmt_err = |m: String| LdtError::Format(m);
        if doc.format != TREE_FORMAT {
            return Err(fmt_err(format!("unknown format {:?}", doc.format)));
        }
        if doc.version != TREE_VERSION {
            return Err(fmt_err(format!("unsupported version {}", doc.version)));
        }
        if doc.hyperplanes.iter().any(|v| v.len() != doc.d) {
            return Err(fmt_err(format!("hyperplanes must all have dimension {}", doc.d)));
        }
        let n = doc.hyperplanes.len();
        if doc.root >= doc.nodes.len() {
            return Err(fmt_err("root out of range".into()));
        }
        let mut nodes = Vec::with_capacity(doc.nodes.len());
        for (k, nd) in doc.nodes.into_iter().enumerate() {
            nodes.push(match nd {
                NodeDoc::Leaf { leaf } => {
                    if leaf.len() != n {
                        return Err(fmt_err(format!("leaf {k} has {} signs for {n} hyperplanes", leaf.len())));
                    }
                    let signs = leaf
                        .into_iter()
                        .map(|v| Sign::from_i8(v).ok_or_else(|| fmt_err(format!("bad sign {v} in leaf {k}"))))
                        .collect::<Result<_, _>>()?;
                    Node::Leaf { signs }
                }
                NodeDoc::Query { i, j, alpha, beta, children } => {
                    // children always follow their parent, which rules out cycles
                    if children.iter().flatten().any(|&c| c <= k) {
                        return Err(fmt_err(format!("node {k} has a child index out of order")));
                    }
                    let query = query_from_parts(&doc.hyperplanes, i, j, alpha, beta)?;
                    Node::Query { query, children }
                }
            });
        }
        let len = nodes.len();
        if nodes.iter().any(|n| matches!(n, Node::Query { children, .. } if children.iter().flatten().any(|&c| c >= len))) {
            return Err(fmt_err("child index out of range".into()));
        }
        Ok(DecisionTree { h: doc.hyperplanes, nodes, root: doc.root })
    }
}

fn float_array(v: &[f64]) -> String {
    let parts: Vec<String> = v.iter().map(|x| format!("{x:.16e}")).collect();
    format!("[{}]", parts.join(", "))
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct TreeDoc {
    format: String,
    version: u32,
    d: usize,
    hyperplanes: Vec<Vec<f64>>,
    root: usize,
    nodes: Vec<NodeDoc>,
}

#[derive(Deserialize)]
#[serde(untagged)]
enum NodeDoc {
    Leaf { leaf: Vec<i8> },
    Query { i: Option<usize>, j: Option<usize>, alpha: f64, beta: f64, children: [Option<usize>; 3] },
}

/// Why a replay stopped before finishing.
enum Stop {
    Branch { query: GenComparisonQuery, options: Vec<Sign> },
    Fail(LdtError),
}

impl From<QueryError> for Stop {
    fn from(e: QueryError) -> Stop {
        Stop::Fail(e.into())
    }
}

impl From<LdtError> for Stop {
    fn from(e: LdtError) -> Stop {
        Stop::Fail(e)
    }
}

/// Answers `q` can take on the cell of `conditions`: the constant sign if
/// there is one, otherwise every candidate.
fn realizable(d: usize, conditions: &[SignCondition], q: &IntVec, candidates: &[Sign]) -> Result<Vec<Sign>, LdtError> {
    let cell = Cell::new(d, conditions.to_vec())?;
    Ok(match cell.infer_exact(q) {
        Some(s) => vec![s],
        None => candidates.to_vec(),
    })
}

/// Answers from a fixed prefix, then answers forced ones itself and stops
/// at the first real branch.
struct Replay<'a> {
    h: &'a [Vec<f64>],
    d: usize,
    mode: BuildMode,
    prefix: &'a [Sign],
    steps: Vec<(GenComparisonQuery, Sign)>,
    conditions: Vec<SignCondition>,
}

impl Replay<'_> {
    fn answers(&self) -> Vec<Sign> {
        self.steps.iter().map(|s| s.1).collect()
    }

    fn ask(&mut self, q: GenComparisonQuery) -> Result<Sign, Stop> {
        let qe = q.exact(self.h);
        let s = if self.steps.len() < self.prefix.len() {
            self.prefix[self.steps.len()]
        } else {
            let candidates: &[Sign] = match self.mode {
                BuildMode::Everywhere => &Sign::ALL,
                BuildMode::AlmostEverywhere => &[Sign::Neg, Sign::Pos],
            };
            let options = realizable(self.d, &self.conditions, &qe, candidates)?;
            if options.len() > 1 {
                return Err(Stop::Branch { query: q, options });
            }
            options[0]
        };
        self.steps.push((q, s));
        self.conditions.push(SignCondition::exact(qe, s));
        Ok(s)
    }
}

/// Sample and scales for one surviving set of lines.
struct Plan {
    /// Positions into the surviving list.
    picked: Vec<usize>,
    scales: Vec<f64>,
}

struct Builder<'a> {
    h: &'a [Vec<f64>],
    d: usize,
    dd: Dedup,
    cfg: &'a LocateConfig,
    mode: BuildMode,
    plans: HashMap<Vec<usize>, std::rc::Rc<Plan>>,
    /// Inference results keyed by the answers up to the end of a round.
    inferred: HashMap<Vec<Sign>, std::rc::Rc<Vec<Option<Sign>>>>,
    nodes: Vec<Node>,
}

fn set_seed(base: u64, set: &[usize]) -> u64 {
    // FNV-1a over the surviving indices: the plan must depend only on the set
    let mut x: u64 = 0xcbf2_9ce4_8422_2325 ^ base;
    for &v in set {
        for b in (v as u64).to_le_bytes() {
            x ^= b as u64;
            x = x.wrapping_mul(0x0000_0100_0000_01b3);
        }
    }
    x
}

impl Builder<'_> {
    fn push(&mut self, n: Node) -> Result<usize, LdtError> {
        if self.nodes.len() >= self.cfg.size_guard {
            return Err(LdtError::SizeGuardExceeded { limit: self.cfg.size_guard });
        }
        self.nodes.push(n);
        Ok(self.nodes.len() - 1)
    }

    fn plan(&mut self, remaining: &[usize]) -> Result<std::rc::Rc<Plan>, LdtError> {
        if let Some(p) = self.plans.get(remaining) {
            return Ok(p.clone());
        }
        let mut rng = ChaCha8Rng::seed_from_u64(set_seed(self.cfg.seed, remaining));
        let vectors: Vec<Vec<f64>> = remaining.iter().map(|&r| self.h[self.dd.reps[r]].clone()).collect();
        let t = round_transform(&vectors, self.cfg, &mut rng);
        let images = t.images(&vectors);
        let s = self.cfg.s(self.d).min(remaining.len());
        let picked = match universal_set(&images, self.cfg, &mut rng) {
            Ok(u) => u.indices,
            // too large to certify, or no certified candidate: any sample
            // still makes progress, it only loses the guarantee
            Err(LdtError::VerificationTooLarge { .. } | LdtError::SearchExhausted { .. }) => {
                let mut p = sample(&mut rng, remaining.len(), s).into_vec();
                p.sort_unstable();
                p
            }
            Err(e) => return Err(e),
        };
        let scales = picked.iter().map(|&p| t.scales[p]).collect();
        let plan = std::rc::Rc::new(Plan { picked, scales });
        self.plans.insert(remaining.to_vec(), plan.clone());
        Ok(plan)
    }

    /// The deterministic locator, over distinct lines.
    fn run(&mut self, replay: &mut Replay<'_>) -> Result<Vec<Sign>, Stop> {
        let n = self.dd.reps.len();
        let s = self.cfg.s(self.d);
        let mut signs: Vec<Option<Sign>> = vec![None; n];
        let mut remaining: Vec<usize> = (0..n).collect();
        while remaining.len() > s {
            let plan = self.plan(&remaining)?;
            let sample_idx: Vec<usize> = plan.picked.iter().map(|&p| self.dd.reps[remaining[p]]).collect();
            let facts = round_facts(self.h, &sample_idx, &plan.scales, &mut |q| replay.ask(q))?;
            let key = replay.answers();
            let inferred = match self.inferred.get(&key) {
                Some(v) => v.clone(),
                None => {
                    let cell = Cell::with_ray_limit(self.d, facts.conditions, self.cfg.ray_limit)
                        .map_err(|e| Stop::Fail(e.into()))?;
                    let v: Vec<Option<Sign>> =
                        remaining.iter().map(|&r| cell.infer(&self.h[self.dd.reps[r]])).collect();
                    let v = std::rc::Rc::new(v);
                    self.inferred.insert(key, v.clone());
                    v
                }
            };
            let mut done = vec![false; remaining.len()];
            for (&p, &l) in plan.picked.iter().zip(&facts.labels) {
                signs[remaining[p]] = Some(l);
                done[p] = true;
            }
            for (p, s) in inferred.iter().enumerate() {
                if let (false, Some(s)) = (done[p], s) {
                    signs[remaining[p]] = Some(*s);
                    done[p] = true;
                }
            }
            remaining = remaining.iter().zip(&done).filter(|(_, &f)| !f).map(|(&r, _)| r).collect();
        }
        for &r in &remaining {
            let q = make_query(self.h, Some(self.dd.reps[r]), None, 1.0, 0.0)?;
            signs[r] = Some(replay.ask(q)?);
        }
        Ok(signs.into_iter().map(|s| s.expect("every line is resolved")).collect())
    }

    fn expand(&mut self, prefix: Vec<Sign>) -> Result<usize, LdtError> {
        let h = self.h;
        let mut replay = Replay {
            h,
            d: self.d,
            mode: self.mode,
            prefix: &prefix,
            steps: Vec::new(),
            conditions: Vec::new(),
        };
        let outcome = self.run(&mut replay);
        let forced: Vec<(GenComparisonQuery, Sign)> = replay.steps.split_off(prefix.len());
        let mut path = prefix.clone();
        path.extend(forced.iter().map(|f| f.1));
        let first = self.nodes.len();
        let mut last: Option<(usize, Sign)> = None;
        for (q, s) in forced {
            let id = self.push(Node::Query { query: q, children: [None; 3] })?;
            self.link(last, id);
            last = Some((id, s));
        }
        let id = match outcome {
            Ok(rep_signs) => self.push(Node::Leaf { signs: self.dd.expand(&rep_signs) })?,
            Err(Stop::Fail(e)) => return Err(e),
            Err(Stop::Branch { query, options }) => {
                let id = self.push(Node::Query { query, children: [None; 3] })?;
                for sigma in options {
                    let mut child_prefix = path.clone();
                    child_prefix.push(sigma);
                    let c = self.expand(child_prefix)?;
                    if let Node::Query { children, .. } = &mut self.nodes[id] {
                        children[slot(sigma)] = Some(c);
                    }
                }
                id
            }
        };
        self.link(last, id);
        Ok(first.min(id))
    }

    fn link(&mut self, from: Option<(usize, Sign)>, to: usize) {
        if let Some((p, s)) = from {
            if let Node::Query { children, .. } = &mut self.nodes[p] {
                children[slot(s)] = Some(to);
            }
        }
    }
}

/// Builds the tree of the deterministic locator for `h`.
pub fn build_tree(h: &[Vec<f64>], cfg: &LocateConfig, mode: BuildMode) -> Result<DecisionTree, LdtError> {
    let dd = dedup(h)?;
    let d = h[0].len();
    cfg.validate(d)?;
    let mut b = Builder {
        h,
        d,
        dd,
        cfg,
        mode,
        plans: HashMap::new(),
        inferred: HashMap::new(),
        nodes: Vec::new(),
    };
    let root = b.expand(Vec::new())?;
    Ok(DecisionTree { h: h.to_vec(), nodes: b.nodes, root })
}

struct Fixer<'a> {
    src: &'a DecisionTree,
    d: usize,
    guard: usize,
    nodes: Vec<Node>,
}

impl Fixer<'_> {
    fn fix(
        &mut self,
        at: usize,
        conditions: &mut Vec<SignCondition>,
        deviated: bool,
    ) -> Result<usize, LdtError> {
        if self.nodes.len() >= self.guard {
            return Err(LdtError::SizeGuardExceeded { limit: self.guard });
        }
        match &self.src.nodes[at] {
            Node::Leaf { signs } => {
                let signs = if deviated {
                    let cell = Cell::new(self.d, conditions.clone())?;
                    self.src
                        .h
                        .iter()
                        .enumerate()
                        .map(|(index, v)| cell.infer(v).ok_or(LdtError::Undetermined { index }))
                        .collect::<Result<Vec<_>, _>>()?
                } else {
                    signs.clone()
                };
                self.nodes.push(Node::Leaf { signs });
                Ok(self.nodes.len() - 1)
            }
            Node::Query { query, children } => {
                let qe = query.exact(&self.src.h);
                self.nodes.push(Node::Query { query: query.clone(), children: [None; 3] });
                let id = self.nodes.len() - 1;
                let options = realizable(self.d, conditions, &qe, &Sign::ALL).map_err(|e| match e {
                    LdtError::InconsistentOracle => LdtError::NonRedundantViolation { node: at },
                    e => e,
                })?;
                let mut any = false;
                for sigma in options {
                    // a missing branch continues along a sibling subtree
                    let order: [Sign; 3] = match sigma {
                        Sign::Zero => [Sign::Zero, Sign::Pos, Sign::Neg],
                        s => [s, s.flip(), Sign::Zero],
                    };
                    let Some((target, via)) = order.iter().find_map(|&s| children[slot(s)].map(|c| (c, s))) else {
                        continue;
                    };
                    conditions.push(SignCondition::exact(qe.clone(), sigma));
                    let c = self.fix(target, conditions, deviated || via != sigma)?;
                    conditions.pop();
                    if let Node::Query { children, .. } = &mut self.nodes[id] {
                        children[slot(sigma)] = Some(c);
                    }
                    any = true;
                }
                if !any {
                    return Err(LdtError::NonRedundantViolation { node: at });
                }
                Ok(id)
            }
        }
    }
}

/// Adds a branch for every realizable answer the tree lacks. A missing
/// zero branch re-descends the `+` subtree under the extra equality; leaves
/// reached that way are relabeled from their path conditions. The result
/// uses only the tree's own queries and has the same depth.
pub fn ldt_fix(tree: &DecisionTree, cfg: &LocateConfig) -> Result<DecisionTree, LdtError> {
    let d = tree.dim();
    let mut f = Fixer { src: tree, d, guard: cfg.size_guard, nodes: Vec::new() };
    let root = f.fix(tree.root, &mut Vec::new(), false)?;
    Ok(DecisionTree { h: tree.h.clone(), nodes: f.nodes, root })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ldt::bruteforce_locate;
    use rand::Rng;

    fn axes() -> Vec<Vec<f64>> {
        vec![vec![1.0, 0.0], vec![0.0, 1.0]]
    }

    #[test]
    fn single_label_tree() {
        let t = build_tree(&[vec![1.0, 0.0]], &LocateConfig::default(), BuildMode::Everywhere).unwrap();
        let s = t.stats();
        assert_eq!((s.depth, s.leaves), (1, 3));
    }

    #[test]
    fn axes_tree_has_nine_leaves() {
        let t = build_tree(&axes(), &LocateConfig::default(), BuildMode::Everywhere).unwrap();
        let s = t.stats();
        assert_eq!((s.depth, s.leaves), (2, 9));
        for x in [[2.0, -3.0], [0.0, 1.0], [-1.0, 0.0], [0.0, 0.0], [5.0, 5.0]] {
            assert_eq!(t.evaluate(&x).unwrap(), bruteforce_locate(&axes(), &x));
        }
    }

    #[test]
    fn fix_adds_zero_branches() {
        let cfg = LocateConfig::default();
        let ae = build_tree(&axes(), &cfg, BuildMode::AlmostEverywhere).unwrap();
        assert_eq!(ae.stats().leaves, 4);
        assert!(matches!(ae.evaluate(&[0.0, 1.0]), Err(LdtError::MissingBranch { .. })));
        let fixed = ldt_fix(&ae, &cfg).unwrap();
        assert_eq!(fixed.stats().depth, ae.stats().depth);
        assert_eq!(fixed.stats().leaves, 9);
        assert!(fixed.query_set().is_subset(&ae.query_set()));
        assert_eq!(fixed.evaluate(&[0.0, 1.0]).unwrap(), vec![Sign::Zero, Sign::Pos]);
    }

    #[test]
    fn fix_of_complete_tree_is_identity() {
        let cfg = LocateConfig::default();
        let t = build_tree(&axes(), &cfg, BuildMode::Everywhere).unwrap();
        let fixed = ldt_fix(&t, &cfg).unwrap();
        assert_eq!(fixed.stats(), t.stats());
        for x in [[2.0, -3.0], [0.0, 1.0], [0.0, 0.0]] {
            assert_eq!(fixed.evaluate(&x).unwrap(), t.evaluate(&x).unwrap());
        }
    }

    #[test]
    fn json_round_trip() {
        let h = vec![vec![1.0, 0.0], vec![0.1, 0.7], vec![-0.3, 1.0 / 3.0]];
        let t = build_tree(&h, &LocateConfig::default(), BuildMode::Everywhere).unwrap();
        let text = t.to_json();
        let back = DecisionTree::from_json(&text).unwrap();
        assert_eq!(back, t);
        assert_eq!(back.to_json(), text);
    }

    fn plane_set(n: usize, seed: u64) -> Vec<Vec<f64>> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        (0..n).map(|_| (0..2).map(|_| rng.sample(rand_distr::StandardNormal)).collect()).collect()
    }

    #[test]
    fn plane_tree_matches_bruteforce() {
        let h = plane_set(20, 3);
        let cfg = LocateConfig::default();
        let t = build_tree(&h, &cfg, BuildMode::Everywhere).unwrap();
        let ae = build_tree(&h, &cfg, BuildMode::AlmostEverywhere).unwrap();
        let fixed = ldt_fix(&ae, &cfg).unwrap();
        assert_eq!(fixed.stats().depth, ae.stats().depth);
        assert!(fixed.query_set().is_subset(&ae.query_set()));
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for k in 0..500 {
            let x: Vec<f64> = if k % 5 == 0 {
                // on a hyperplane
                let v = &h[k % h.len()];
                vec![-v[1], v[0]]
            } else {
                (0..2).map(|_| rng.sample(rand_distr::StandardNormal)).collect()
            };
            let want = bruteforce_locate(&h, &x);
            assert_eq!(t.evaluate(&x).unwrap(), want);
            assert_eq!(fixed.evaluate(&x).unwrap(), want);
        }
    }

    #[test]
    fn json_rejects_cycles() {
        let text = r#"{"format": "gencomp-tree", "version": 1, "d": 1, "hyperplanes": [[1.0]], "root": 0,
            "nodes": [{"i": 0, "j": null, "alpha": 1.0, "beta": 0.0, "children": [0, null, null]}]}"#;
        assert!(matches!(DecisionTree::from_json(text), Err(LdtError::Format(_))));
    }
}
