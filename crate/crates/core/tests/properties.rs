//! Randomized invariants checked against direct computations.

use std::collections::BTreeSet;

use gencomp::exact::{self, IntVec};
use gencomp::forster::forster_transform;
use gencomp::inference::{
    enumerate_patterns, feasible_signs, infer, infer_comp, Cell, ComparisonAnswers, SignCondition,
};
use gencomp::instances::{self, degenerate, DEGENERATE_FAMILIES};
use gencomp::ldt::{bruteforce_locate, build_tree, ldt_fix, locate_randomized, BuildMode, LocateConfig};
use gencomp::linalg::{
    dot, inv_sqrt, isotropy_report, jacobi_eigen, margin_fraction, min_eigenvalue, second_moment, Matrix, SymMatrix,
};
use gencomp::oracle::{comparison_bound, query_from_parts, sort_by_inner_product, PointOracle, QueryTranscript, SortItem};
use gencomp::Sign;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// A random orthogonal matrix: eigenvectors of a random symmetric one.
fn orthogonal(d: usize, r: &mut ChaCha8Rng) -> Matrix {
    let a: Vec<Vec<f64>> = (0..d).map(|_| instances::gaussian(d, r)).collect();
    let a = Matrix::from_rows(&a);
    let s = a.mul(&a.transpose());
    let e = jacobi_eigen(&s, 1e-14);
    Matrix::from_rows(&(0..d).map(|k| e.vector(k)).collect::<Vec<_>>())
}

fn small_int_vec(d: usize, r: &mut ChaCha8Rng) -> Vec<f64> {
    loop {
        let v: Vec<f64> = (0..d).map(|_| r.random_range(-3..=3) as f64).collect();
        if v.iter().any(|x| *x != 0.0) {
            return v;
        }
    }
}

fn conds_at(queries: &[Vec<f64>], y: &[f64]) -> Vec<SignCondition> {
    queries
        .iter()
        .map(|q| SignCondition::exact(IntVec::from_f64(q), exact::dot_sign(q, y)))
        .collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn second_moment_of_unit_vectors_has_unit_trace(seed: u64, d in 1usize..8, m in 1usize..40) {
        let h = instances::sphere(d, m, &mut rng(seed));
        let sm = second_moment(&h).unwrap();
        prop_assert!((sm.matrix().trace() - 1.0).abs() < 1e-9);
        prop_assert!(isotropy_report(&h).unwrap().measure <= 1.0 + 1e-9);
    }

    #[test]
    fn min_eigenvalue_is_rotation_invariant(seed: u64, d in 1usize..7) {
        let mut r = rng(seed);
        let h = instances::sphere(d, 3 * d, &mut r);
        let m = second_moment(&h).unwrap();
        let q = orthogonal(d, &mut r);
        let rotated = SymMatrix::new(q.mul(m.matrix()).mul(&q.transpose())).unwrap();
        prop_assert!((min_eigenvalue(&m) - min_eigenvalue(&rotated)).abs() < 1e-8);
    }

    #[test]
    fn inv_sqrt_reconstructs(seed: u64, d in 1usize..7) {
        let h = instances::sphere(d, 4 * d, &mut rng(seed));
        let m = second_moment(&h).unwrap();
        prop_assume!(min_eigenvalue(&m) > 1e-6);
        let n = inv_sqrt(&m).unwrap();
        prop_assert!(min_eigenvalue(&n) > 0.0);
        let nm = n.matrix();
        prop_assert!(nm.sub(&nm.transpose()).frobenius() < 1e-12);
        let back = nm.mul(nm);
        // back = M^{-1}, so back · M = I
        prop_assert!(back.mul(m.matrix()).sub(&Matrix::identity(d)).frobenius() < 1e-6);
    }

    #[test]
    fn margin_fraction_holds(seed: u64, d in 2usize..6) {
        let mut r = rng(seed);
        let h = instances::isotropic(d, 10 * d, 0.9, &mut r).unwrap();
        let c = isotropy_report(&h).unwrap().c_level;
        let bound = c / (2.0 * d as f64);
        let sm = second_moment(&h).unwrap();
        let mut xs: Vec<Vec<f64>> = (0..20).map(|_| instances::unit(d, &mut r)).collect();
        xs.push(sm.eigen().vector(0));
        for x in xs {
            prop_assert!(margin_fraction(&h, &x, bound.sqrt()) >= bound);
        }
    }

    #[test]
    fn forster_ignores_positive_scales(seed: u64, d in 2usize..5) {
        let mut r = rng(seed);
        let h = instances::sphere(d, 5 * d, &mut r);
        let scaled: Vec<Vec<f64>> = h
            .iter()
            .map(|v| {
                let l = 10f64.powf(r.random_range(-3.0..3.0));
                v.iter().map(|x| x * l).collect()
            })
            .collect();
        let a = forster_transform(&h, 0.99, 10_000).unwrap();
        let b = forster_transform(&scaled, 0.99, 10_000).unwrap();
        for (u, v) in a.apply(&h).unwrap().iter().zip(&b.apply(&scaled).unwrap()) {
            let err = u.iter().zip(v).map(|(p, q)| (p - q).abs()).fold(0.0, f64::max);
            prop_assert!(err < 1e-6, "{err}");
        }
    }

    #[test]
    fn infer_comp_is_sound(seed: u64, d in 1usize..5, s in 0usize..8, n in 1usize..20) {
        let mut r = rng(seed);
        let sv = instances::sphere(d, s, &mut r);
        let h = instances::sphere(d, n, &mut r);
        // sometimes put x on a member of S
        let x = if s > 0 && d > 1 && r.random_bool(0.3) {
            let g = instances::gaussian(d, &mut r);
            let v = &sv[0];
            let t = dot(&g, v) / dot(v, v);
            g.iter().zip(v).map(|(a, b)| a - t * b).collect()
        } else {
            instances::gaussian(d, &mut r)
        };
        let answers = ComparisonAnswers::from_point(&sv, &x);
        let inferred = infer_comp(&sv, &answers, &h).unwrap();
        let truth = bruteforce_locate(&h, &x);
        for (k, t) in truth.iter().enumerate() {
            if let Some(s) = inferred.get(k) {
                prop_assert_eq!(s, *t);
            }
        }
    }

    #[test]
    fn inference_is_monotone_and_trichotomous(seed: u64, d in 1usize..4, m in 0usize..6) {
        let mut r = rng(seed);
        let qs: Vec<Vec<f64>> = (0..m).map(|_| small_int_vec(d, &mut r)).collect();
        let y = small_int_vec(d, &mut r);
        let h = IntVec::from_f64(&small_int_vec(d, &mut r));
        let all = conds_at(&qs, &y);
        let mut prev: Option<Sign> = None;
        for k in 0..=m {
            let part = &all[..k];
            let got = infer(d, part, &h).unwrap();
            if let Some(p) = prev {
                prop_assert_eq!(got, Some(p));
            }
            let cell = Cell::new(d, part.to_vec()).unwrap();
            prop_assert_eq!(cell.infer_exact(&h), got);
            let feasible = feasible_signs(d, part, &h).unwrap();
            match got {
                Some(s) => prop_assert_eq!(feasible, vec![s]),
                None => prop_assert_eq!(feasible.len(), 3),
            }
            prev = got;
        }
    }

    #[test]
    fn patterns_contain_random_points(seed: u64, d in 1usize..4, m in 1usize..7) {
        let mut r = rng(seed);
        let qs: Vec<Vec<f64>> = (0..m).map(|_| small_int_vec(d, &mut r)).collect();
        let exact_qs: Vec<IntVec> = qs.iter().map(|q| IntVec::from_f64(q)).collect();
        let patterns: BTreeSet<Vec<i8>> = enumerate_patterns(d, &exact_qs, 1_000_000)
            .unwrap()
            .into_iter()
            .map(|p| p.iter().map(|s| s.as_i8()).collect())
            .collect();
        for _ in 0..1000 {
            // small integers hit hyperplanes often
            let y = small_int_vec(d, &mut r);
            let p: Vec<i8> = qs.iter().map(|q| exact::dot_sign(q, &y).as_i8()).collect();
            prop_assert!(patterns.contains(&p), "{p:?}");
        }
    }

    #[test]
    fn sorting_recovers_key_order(seed: u64, d in 1usize..5, m in 0usize..30) {
        let mut r = rng(seed);
        let distinct = instances::sphere(d, (m / 2).max(1), &mut r);
        // repeated vectors force ties
        let h: Vec<Vec<f64>> = (0..m).map(|_| distinct[r.random_range(0..distinct.len())].clone()).collect();
        let x = instances::gaussian(d, &mut r);
        let items: Vec<SortItem> = (0..m)
            .map(|index| SortItem {
                index,
                sign: if r.random_bool(0.5) { Sign::Pos } else { Sign::Neg },
                scale: 2f64.powi(r.random_range(-3..=3)),
            })
            .collect();
        let mut t = QueryTranscript::new();
        let out = sort_by_inner_product(&PointOracle::new(x.clone()), &items, &h, &mut t).unwrap();
        prop_assert!(out.queries <= comparison_bound(m));
        prop_assert!(comparison_bound(m) <= m * (m.max(1) as f64).log2().ceil() as usize + m);
        prop_assert_eq!(out.queries, t.len());
        let key = |p: usize| -> (f64, &[f64]) { (items[p].sign.as_i8() as f64 * items[p].scale, &h[items[p].index]) };
        let cmp = |a: usize, b: usize| {
            let (ca, va) = key(a);
            let (cb, vb) = key(b);
            exact::combination_dot_sign(&[(ca, va), (-cb, vb)], &x)
        };
        let order = out.order();
        prop_assert_eq!(order.len(), m);
        for g in &out.groups {
            for w in g.windows(2) {
                prop_assert_eq!(cmp(w[0], w[1]), Sign::Zero);
            }
        }
        for w in out.groups.windows(2) {
            prop_assert_eq!(cmp(w[1][0], w[0][0]), Sign::Pos);
        }
    }

    #[test]
    fn transcripts_are_legal_and_sparse(seed: u64, d in 5usize..31, n in 1usize..200) {
        let mut r = rng(seed);
        let h = instances::sparse_signs(d, n, 3, &mut r);
        let x = instances::gaussian(d, &mut r);
        let out = locate_randomized(&h, &PointOracle::new(x.clone()), &LocateConfig { seed, ..LocateConfig::default() }).unwrap();
        prop_assert_eq!(&out.signs, &bruteforce_locate(&h, &x));
        for (q, _) in &out.transcript.entries {
            prop_assert!((q.alpha.abs() + q.beta.abs() - 1.0).abs() <= 1e-12);
            let back = query_from_parts(&h, q.i, q.j, q.alpha, q.beta).unwrap();
            prop_assert_eq!(&back.vector, &q.vector);
            prop_assert!(q.vector.iter().filter(|v| **v != 0.0).count() <= 6);
        }
    }

    #[test]
    fn locate_is_exact_on_degenerate_families(seed: u64, f in 0usize..6, d in 1usize..6, n in 1usize..80) {
        let mut r = rng(seed);
        let inst = degenerate(DEGENERATE_FAMILIES[f], d, n, &mut r);
        let cfg = LocateConfig { seed, ..LocateConfig::default() };
        let out = locate_randomized(&inst.h, &PointOracle::new(inst.x.clone()), &cfg).unwrap();
        prop_assert_eq!(&out.signs, &bruteforce_locate(&inst.h, &inst.x));
        prop_assert_eq!(out.progress.accounted(), out.progress.distinct);
        prop_assert!(out.progress.rounds.len() <= out.progress.distinct);
        for round in &out.progress.rounds {
            prop_assert!(round.inferred + round.fallback_labels + round.sampled >= cfg.min_progress.min(round.size));
        }
    }

    #[test]
    fn positive_rescaling_keeps_signs(seed: u64, d in 1usize..6, n in 1usize..150) {
        let mut r = rng(seed);
        let h = instances::sphere(d, n, &mut r);
        let x = instances::gaussian(d, &mut r);
        let scaled: Vec<Vec<f64>> = h
            .iter()
            .map(|v| {
                let l = 10f64.powf(r.random_range(-6.0..=6.0));
                v.iter().map(|t| t * l).collect()
            })
            .collect();
        let cfg = LocateConfig { seed, ..LocateConfig::default() };
        let a = locate_randomized(&h, &PointOracle::new(x.clone()), &cfg).unwrap();
        let b = locate_randomized(&scaled, &PointOracle::new(x), &cfg).unwrap();
        prop_assert_eq!(a.signs, b.signs);
    }
}

/// Sign patterns of `q` at a dense set of directions plus every direction
/// orthogonal to a member, and the origin.
fn planar_patterns_by_sweep(q: &[Vec<f64>]) -> BTreeSet<Vec<i8>> {
    let mut ys: Vec<Vec<f64>> = vec![vec![0.0, 0.0]];
    for k in 0..3600 {
        let t = k as f64 * std::f64::consts::PI / 1800.0;
        ys.push(vec![t.cos(), t.sin()]);
    }
    for v in q {
        ys.push(vec![-v[1], v[0]]);
        ys.push(vec![v[1], -v[0]]);
    }
    ys.iter().map(|y| q.iter().map(|v| exact::dot_sign(v, y).as_i8()).collect()).collect()
}

#[test]
fn three_planar_lines_have_thirteen_faces() {
    let r = std::f64::consts::FRAC_1_SQRT_2;
    let q = vec![vec![1.0, 0.0], vec![0.0, 1.0], vec![r, r]];
    let swept = planar_patterns_by_sweep(&q);
    let exact_q: Vec<IntVec> = q.iter().map(|v| IntVec::from_f64(v)).collect();
    let enumerated: BTreeSet<Vec<i8>> = enumerate_patterns(2, &exact_q, 100_000)
        .unwrap()
        .into_iter()
        .map(|p| p.iter().map(|s| s.as_i8()).collect())
        .collect();
    // 6 open sectors, 6 rays and the origin
    assert_eq!(swept.len(), 13);
    assert_eq!(enumerated, swept);
}

#[test]
fn enumerate_small_examples() {
    let e1 = IntVec::from_f64(&[1.0, 0.0]);
    let e2 = IntVec::from_f64(&[0.0, 1.0]);
    assert_eq!(enumerate_patterns(2, &[e1.clone(), e2], 1000).unwrap().len(), 9);
    assert_eq!(enumerate_patterns(2, &[e1.clone(), e1], 1000).unwrap().len(), 3);
}

#[test]
fn forster_fixed_point_moves_little() {
    let h = vec![vec![1.0, 0.0, 0.0], vec![0.0, 1.0, 0.0], vec![0.0, 0.0, 1.0]];
    let cert = forster_transform(&h, 0.999_999, 10).unwrap();
    assert!(cert.transform.sub(&Matrix::identity(3)).frobenius() <= 1e-8);
}

#[test]
fn parallel_planes_tree_gives_exact_zeros() {
    let h = vec![vec![1.0, 2.0, 0.0], vec![2.0, 4.0, 0.0], vec![0.0, 1.0, 1.0]];
    let cfg = LocateConfig::default();
    let ae = build_tree(&h, &cfg, BuildMode::AlmostEverywhere).unwrap();
    let fixed = ldt_fix(&ae, &cfg).unwrap();
    assert_eq!(fixed.stats().depth, ae.stats().depth);
    assert!(fixed.query_set().is_subset(&ae.query_set()));
    // orthogonal to both parallel hyperplanes
    for x in [vec![2.0, -1.0, 5.0], vec![-4.0, 2.0, -3.0], vec![2.0, -1.0, 1.0], vec![0.0, 0.0, 0.0]] {
        assert_eq!(fixed.evaluate(&x).unwrap(), bruteforce_locate(&h, &x));
    }
    assert_eq!(fixed.evaluate(&[2.0, -1.0, 1.0]).unwrap(), vec![Sign::Zero; 3]);
}
