//! Algorithms checked against exhaustive enumeration and direct linear algebra.

use itertools::Itertools;
use rand::seq::index;
use subsel_core::generate::seeded_rng;
use subsel_core::init::greedy_remove_traced;
use subsel_core::metrics::{advanced_log_ratio_bound, cpqr_log_ratio_bound};
use subsel_core::oracle::{
    brute_max_volume, dense_pinv_product, direct_log_volume, local_max_check, OracleBudget,
};
use subsel_core::*;

fn budget() -> OracleBudget {
    OracleBudget::default()
}

#[test]
fn lq_preserves_best_single_exchange() {
    let x = gaussian_matrix(4, 10, 41).unwrap();
    let q = lq_orthonormalize(&x).unwrap();
    let start: Vec<usize> = vec![0, 1, 2, 3, 4];
    let best = |mat: &Matrix| {
        let base = direct_log_volume(mat, &start);
        let mut best = (f64::NEG_INFINITY, 0, 0);
        for s in 5..10 {
            for pos in 0..start.len() {
                let mut t = start.clone();
                t[pos] = s;
                let v = direct_log_volume(mat, &t) - base;
                if v > best.0 {
                    best = (v, pos, s);
                }
            }
        }
        best
    };
    let (gx, px, sx) = best(&x);
    let (gq, pq, sq) = best(&q);
    assert_eq!((px, sx), (pq, sq));
    assert!((gx - gq).abs() < 1e-10);
}

#[test]
fn cpqr_volume_within_guarantee() {
    for seed in 0..20 {
        let x = gaussian_matrix(3, 8, seed).unwrap();
        let cp = cpqr_pivots(&x).unwrap();
        let (_, best) = brute_max_volume(&x, 3, budget()).unwrap();
        let ratio = (direct_log_volume(&x, cp.basis()) - best).exp();
        assert!(ratio >= 3f64.powf(-1.5), "seed {seed}: ratio {ratio}");
    }
}

#[test]
fn brute_force_orders_agree() {
    let x = gaussian_matrix(3, 9, 5).unwrap();
    let (s, v) = brute_max_volume(&x, 5, budget()).unwrap();
    let (lex_best, lex_v) = (0..9)
        .combinations(5)
        .map(|c| {
            let v = direct_log_volume(&x, &c);
            (c, v)
        })
        .fold((Vec::new(), f64::NEG_INFINITY), |acc, (c, v)| if v > acc.1 { (c, v) } else { acc });
    assert_eq!(s.indices(), lex_best.as_slice());
    assert_eq!(v, lex_v);
}

#[test]
fn max_volume_grows_with_k() {
    let x = gaussian_matrix(3, 9, 77).unwrap();
    let vols: Vec<f64> = (3..=9).map(|k| brute_max_volume(&x, k, budget()).unwrap().1).collect();
    for w in vols.windows(2) {
        assert!(w[1] >= w[0] - 1e-12);
    }
}

#[test]
fn pinv_norms_match_svd_pseudo_inverse() {
    let x = gaussian_matrix(3, 7, 13).unwrap();
    let s = index::sample(&mut seeded_rng(4), 7, 4).into_vec();
    let norms = pinv_product_norms(&x, &IndexSubset::new(s.iter().copied(), 7).unwrap()).unwrap();
    let p = dense_pinv_product(&x, &s);
    let frob = p.norm_squared();
    let spec = p.singular_values().max().powi(2);
    assert!((norms.frob_sq - frob).abs() < 1e-8 * frob);
    assert!((norms.spec_sq - spec).abs() < 1e-8 * spec);
    assert!(norms.spec_sq <= norms.frob_sq - 2.0 + 1e-9);
    assert!(norms.spec_sq >= 1.0 - 1e-9);
}

#[test]
fn orthonormal_rows_norm_ratios() {
    let x = lq_orthonormalize(&gaussian_matrix(3, 9, 8).unwrap()).unwrap();
    let s = vec![0, 2, 4, 6];
    let norms = pinv_product_norms(&x, &IndexSubset::new(s.iter().copied(), 9).unwrap()).unwrap();
    let pinv_s = x.select_columns(&s).pseudo_inverse(1e-13).unwrap();
    let pinv_x = x.as_dmatrix().clone().pseudo_inverse(1e-13).unwrap();
    let frob_ratio = pinv_s.norm_squared() / pinv_x.norm_squared();
    let spec_ratio = pinv_s.singular_values().max().powi(2) / pinv_x.singular_values().max().powi(2);
    assert!((norms.frob_sq / 3.0 - frob_ratio).abs() < 1e-9);
    assert!((norms.spec_sq - spec_ratio).abs() < 1e-9);
    let all = pinv_product_norms(&x, &IndexSubset::full(9)).unwrap();
    assert!((all.frob_sq - 3.0).abs() < 1e-12 && (all.spec_sq - 1.0).abs() < 1e-12);
}

#[test]
fn log_volume_matches_determinant() {
    let x = gaussian_matrix(4, 12, 21).unwrap();
    let s = [1, 3, 5, 7, 9, 11];
    let a = log_volume(&x, &s);
    let b = direct_log_volume(&x, &s);
    assert!((a - b).abs() < 1e-10 * b.abs().max(1.0));
}

#[test]
fn split_swap_count_within_cpqr_bound() {
    let x = gaussian_matrix(4, 20, 314).unwrap();
    let cp = cpqr_pivots(&x).unwrap();
    let mut start: Vec<usize> = cp.basis().to_vec();
    let tail: Vec<usize> = (0..20).filter(|j| !start.contains(j)).rev().take(2).collect();
    start.extend(tail);
    let start = IndexSubset::new(start, 20).unwrap();
    let out = dominant_split(&x, &start, &ExchangeConfig::with_c(1.01)).unwrap();
    let bound = evaluate_bounds(4, 6, 20, 1.01).unwrap().swap;
    assert!((bound - 562.0).abs() < 1.0);
    assert!(out.swap_count() as f64 <= bound);
}

#[test]
fn full_engine_reaches_local_maximum() {
    for seed in 0..10 {
        let x = gaussian_matrix(3, 8, 1000 + seed).unwrap();
        let start = IndexSubset::new([0, 1, 2, 3], 8).unwrap();
        let out = dominant_full(&x, &start, &ExchangeConfig::default()).unwrap();
        let check = local_max_check(&x, &out.selection, 1.0).unwrap();
        assert!(check.holds, "seed {seed}: worst gain {}", check.worst_gain);
    }
}

#[test]
fn rank_two_gain_matches_determinants() {
    let x = gaussian_matrix(3, 9, 55).unwrap();
    let sel = IndexSubset::new([0, 4, 5, 8], 9).unwrap();
    let st = ExchangeState::from_scratch(&x, &sel).unwrap();
    let base = direct_log_volume(&x, sel.indices());
    for s in sel.complement() {
        for (pos, r) in sel.iter().enumerate() {
            let mut t = sel.indices().to_vec();
            t[pos] = s;
            let direct = (2.0 * (direct_log_volume(&x, &t) - base)).exp();
            let g = exchange::swap_gain(&x, &st, r, s).unwrap();
            assert!((g - direct).abs() <= 1e-9 * direct.max(1.0), "({r},{s}): {g} vs {direct}");
        }
    }
}

#[test]
fn advanced_init_volume_guarantee() {
    for seed in 0..10 {
        let x = gaussian_matrix(3, 10, 500 + seed).unwrap();
        for k in [4, 8] {
            let s = advanced_init(&x, k).unwrap();
            let (_, best) = brute_max_volume(&x, k, budget()).unwrap();
            let gap = direct_log_volume(&x, s.indices()) - best;
            assert!(gap >= advanced_log_ratio_bound(3), "seed {seed} k {k}: {}", gap.exp());
        }
    }
}

#[test]
fn greedy_removal_loss_per_step() {
    let x = gaussian_matrix(3, 9, 808).unwrap();
    let start = init_greedy(&x, 6).unwrap();
    let (end, removed) = greedy_remove_traced(&x, &start, 4).unwrap();
    assert_eq!(end.len(), 4);
    let mut cur = start.indices().to_vec();
    for r in removed {
        let before = direct_log_volume(&x, &cur);
        let size = cur.len() as f64;
        cur.retain(|&j| j != r);
        let ratio = (2.0 * (direct_log_volume(&x, &cur) - before)).exp();
        assert!(ratio >= (size - 3.0) / size - 1e-9);
    }
}

#[test]
fn cpqr_superset_volume_guarantee() {
    for seed in 0..10 {
        let x = gaussian_matrix(3, 9, 900 + seed).unwrap();
        for k in 3..=6 {
            let s = init_cpqr(&x, k).unwrap();
            let (_, best) = brute_max_volume(&x, k, budget()).unwrap();
            let gap = direct_log_volume(&x, s.indices()) - best;
            assert!(gap >= cpqr_log_ratio_bound(3, k) - 1e-12);
        }
    }
}
