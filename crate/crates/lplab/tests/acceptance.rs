//! Acceptance suite: every release-gating property at its stated tolerance,
//! one pass/fail line per criterion. Desk scale; the full run stays under
//! five minutes.

mod common;

use num_complex::Complex64;
use rand::Rng;

use lplab::averaging::{folner_pair, pinch_check, ApproximateUnit};
use lplab::bracket::{op_norm_bounds, op_norm_upper, Effort};
use lplab::geometry::{box_cover, partition_intertwiner, partition_of_unity, AxisFunction, GridFunction};
use lplab::obstruction::{diag_obstruction_check, fixman_search};
use lplab::operator::LpOperator;
use lplab::space::{IndexLabel, LpVector, PExponent};
use lplab::splitting::{
    embed_defect_check, neutral_embed_l, neutral_project_r, project_defect_check,
    riesz_idempotent, split_similarity, staircase, staircase_check, NeutralFamily,
};
use lplab::tridiag::{phi_tail_sandwich, tridiag_norm_check, BlockDecomposition, BlockMatrix};
use lplab::unconditional::u_scalar_bound_check;
use lplab::zoo::{
    circular_commutator_norm, circulant_from_symbol, make_shift,
    DiagonalOperator, LaurentPolynomial, ShiftKind,
};

use common::{random_complex, random_ll_chain, random_operator, random_tridiagonal_for, random_vector, rng};

/// Frozen on the first oracle run (seed 20260810, d = 16, N = 128, 500
/// trials, p = 4); cross-checked against a 32-restart, 65536-point-grid
/// evaluation of the same symbol (which gives ≥ 1.0995).
const FIXMAN_P4_FROZEN: f64 = 1.088_055_884_624_287;

fn verdict(criterion: &str, pass: bool, detail: &str) {
    println!(
        "criterion {criterion}: {}{}",
        if pass { "PASS" } else { "FAIL" },
        if detail.is_empty() || pass {
            String::new()
        } else {
            format!(" — {detail}")
        }
    );
    assert!(pass, "criterion {criterion}: {detail}");
}

fn ps() -> [PExponent; 4] {
    [
        PExponent::new(1.5).unwrap(),
        PExponent::two(),
        PExponent::new(3.0).unwrap(),
        PExponent::new(4.0).unwrap(),
    ]
}

// ---------------------------------------------------------------- criterion 1

#[test]
fn criterion_1_exact_identities() {
    let mut r = rng(101);
    let mut worst_ev = 0.0f64;
    for i in 0..50 {
        let n = 1 + (i % 8);
        let k = 1 + r.gen_range(0..32);
        let p = ps()[i % 4];
        let nk = (n * k) as i64;
        let fi = folner_pair(n, k, (-nk, 2 * nk - 1), p).unwrap();
        let ev = fi
            .e
            .compose(&fi.v)
            .unwrap()
            .sub(&LpOperator::identity(IndexLabel::cyclic(n)))
            .unwrap()
            .max_abs();
        worst_ev = worst_ev.max(ev);
    }
    verdict(
        "1a [EV = I, 50 Følner pairs]",
        worst_ev <= 1e-12,
        &format!("worst defect {worst_ev:.3e}"),
    );

    let mut worst_rl = 0.0f64;
    for i in 0..50 {
        let p = ps()[i % 4];
        let blocks = 2 + (i % 3);
        let bs = 1 + (i % 3);
        let dec = BlockDecomposition::uniform(bs, blocks, p);
        let n1 = 1 + (i % 3);
        // V: a cyclic permutation (an isometry); E = V^{-1} = V^H
        let dim = dec.dim();
        let shift = i % dim;
        let mut v = LpOperator::zeros(dec.label(), dec.label());
        for j in 0..dim {
            v[((j + shift) % dim, j)] = Complex64::new(1.0, 0.0);
        }
        // the inverse permutation, read on the original p-space
        let e = v.adjoint().relabeled(dec.label(), dec.label()).unwrap();
        let l = neutral_embed_l(&v, &dec, n1, p).unwrap();
        let rr = neutral_project_r(&e, &v, &dec, n1, p).unwrap();
        let rl = rr
            .compose(&l)
            .unwrap()
            .sub(&LpOperator::identity(dec.label()))
            .unwrap()
            .max_abs();
        worst_rl = worst_rl.max(rl);
    }
    verdict(
        "1b [RL = I, 50 neutral pairs]",
        worst_rl <= 1e-12,
        &format!("worst defect {worst_rl:.3e}"),
    );

    let mut worst_ew = 0.0f64;
    for i in 0..20 {
        let m = 16 + 4 * (i % 5);
        let weights: Vec<f64> = (0..m).map(|_| r.gen_range(0.0..1.0)).collect();
        let lab = IndexLabel::interval(m);
        let d = DiagonalOperator::from_reals(&weights, lab).unwrap();
        let h = AxisFunction {
            axis: 0,
            f: GridFunction::identity(33),
        };
        let eps = 0.05 + 0.05 * (i % 4) as f64;
        let it = partition_intertwiner(std::slice::from_ref(&d), std::slice::from_ref(&h), eps)
            .unwrap();
        worst_ew = worst_ew.max(it.ew_identity_defect());
    }
    verdict(
        "1c [EW = I, 20 partition intertwiners]",
        worst_ew <= 1e-12,
        &format!("worst defect {worst_ew:.3e}"),
    );

    let mut samples = 0usize;
    let mut worst_fsum = 0.0f64;
    while samples < 10_000 {
        let pts: Vec<Vec<f64>> = (0..500)
            .map(|_| vec![r.gen::<f64>(), r.gen::<f64>()])
            .collect();
        let pu = partition_of_unity(&pts, 0.25).unwrap();
        for v in &pts {
            let fsum: f64 = (0..pu.r()).map(|i| pu.f(i, v)).sum();
            worst_fsum = worst_fsum.max((fsum - 1.0).abs());
        }
        samples += pts.len();
    }
    verdict(
        "1d [Σf = 1 on 10⁴ samples]",
        worst_fsum <= 1e-12,
        &format!("worst defect {worst_fsum:.3e}"),
    );
}

// ---------------------------------------------------------------- criterion 2

#[test]
fn criterion_2_qcausum_constants() {
    let mut r = rng(201);
    let mut ok = true;
    let mut detail = String::new();
    for i in 0..100 {
        let p = ps()[i % 4];
        let dim = 12 + (i % 12);
        let lab = IndexLabel::interval(dim);
        let chain = random_ll_chain(dim, 4, lab.clone(), &mut r);
        let unit = ApproximateUnit {
            defects: vec![0.0; chain.len()],
            stages: chain,
        };
        let x = random_vector(lab.clone(), &mut r);
        // admissible block vectors by the ≪ algebra: x_n = (A_n − A_{n-1})y_n
        let xs: Vec<LpVector> = (0..unit.stages.len())
            .map(|n| {
                let y = random_vector(lab.clone(), &mut r);
                let cur = &unit.stages[n].weights;
                let entries: Vec<Complex64> = (0..dim)
                    .map(|j| {
                        let prev = if n == 0 {
                            Complex64::default()
                        } else {
                            unit.stages[n - 1].weights[j]
                        };
                        (cur[j] - prev) * y.entries[j]
                    })
                    .collect();
                LpVector::new(entries, lab.clone()).unwrap()
            })
            .collect();
        let (first, second) = pinch_check(&unit, &x, &xs, p).unwrap();
        if first > 2.0 + 1e-9 {
            ok = false;
            detail = format!("instance {i}: pinch sum {first} > 2");
        }
        if second > 4.0f64.powf(p.p()) + 1e-9 {
            ok = false;
            detail = format!("instance {i}: block ratio {second} > 4^p");
        }
    }
    verdict("2a [qcausum constants 2 and 4^p]", ok, &detail);
}

#[test]
fn criterion_2_boundtridiag() {
    let mut r = rng(202);
    let mut ok = true;
    let mut detail = String::new();
    for i in 0..100 {
        let p = ps()[i % 4];
        let dec = BlockDecomposition::uniform(1 + (i % 3), 3 + (i % 3), p);
        let t = random_tridiagonal_for(&dec, &mut r);
        let (_, bound) = tridiag_norm_check(&t, &dec, p).unwrap();
        let lower = op_norm_bounds(&t, p, Effort::light()).lower;
        if lower > bound + 1e-9 {
            ok = false;
            detail = format!("instance {i}: ‖T‖ lower {lower} > 3·sup‖TD_j‖ = {bound}");
        }
    }
    verdict("2b [boundtridiag factor 3]", ok, &detail);
}

#[test]
fn criterion_2_vop_sandwich() {
    let mut r = rng(203);
    let mut ok = true;
    let mut detail = String::new();
    for i in 0..100 {
        let p = ps()[i % 4];
        let bandwidth = i % 3;
        let blocks = 4;
        let bsize = 2;
        let dec = BlockDecomposition::uniform(bsize, blocks, p);
        let mut m = BlockMatrix::new(bandwidth);
        let lab = IndexLabel::interval(bsize);
        for bi in 1..=blocks {
            for bj in 1..=blocks {
                if bi.abs_diff(bj) <= bandwidth {
                    m.insert(bi, bj, random_operator(bsize, lab.clone(), &mut r));
                }
            }
        }
        let tail = 2 + (i % 2);
        let s = phi_tail_sandwich(&m, &dec, p, tail, Effort::light()).unwrap();
        if s.tail_lower > s.sandwich_bound + 1e-9 {
            ok = false;
            detail = format!(
                "instance {i} (r={bandwidth}): tail lower {} > (2r+1)s_n = {}",
                s.tail_lower, s.sandwich_bound
            );
        }
        if s.block_sup_lower > s.tail_upper + 1e-9 {
            ok = false;
            detail = format!(
                "instance {i} (r={bandwidth}): block sup lower {} > tail upper {}",
                s.block_sup_lower, s.tail_upper
            );
        }
    }
    verdict("2c [Vop sandwich (2r+1), r ∈ {0,1,2}]", ok, &detail);
}

#[test]
fn criterion_2_unconditional1() {
    let mut r = rng(204);
    let mut ok = true;
    let mut detail = String::new();
    for i in 0..100 {
        let p = ps()[i % 4];
        let rr = 2 + (i % 5);
        let cs: Vec<Complex64> = (0..rr).map(|_| random_complex(&mut r) * 1.5).collect();
        let (ratio, bound) = u_scalar_bound_check(&cs, 6, 4, p, 204 ^ i as u64).unwrap();
        if ratio > bound + 1e-9 {
            ok = false;
            detail = format!("instance {i}: ratio {ratio} > 2max|c| = {bound}");
        }
    }
    verdict("2d [unconditional1 factor 2]", ok, &detail);
}

#[test]
fn criterion_2_flipdt() {
    let mut r = rng(205);
    let mut ok = true;
    let mut detail = String::new();
    for i in 0..100 {
        let p = ps()[i % 4];
        let blocks = 3 + (i % 3);
        let dec = BlockDecomposition::uniform(2, blocks, p);
        let mut ts: Vec<LpOperator> = (0..blocks)
            .map(|_| random_tridiagonal_for(&dec, &mut r))
            .collect();
        ts[1] = ts[0].clone();
        // defect operator for the certified lower end
        let mut left = LpOperator::zeros(dec.label(), dec.label());
        let mut right = LpOperator::zeros(dec.label(), dec.label());
        for j in 1..=blocks {
            let dj = dec.projection(j);
            left = left.add(&dj.compose(&ts[j - 1]).unwrap()).unwrap();
            right = right.add(&ts[j - 1].compose(&dj).unwrap()).unwrap();
        }
        let defect_lower =
            op_norm_bounds(&left.sub(&right).unwrap(), p, Effort::light()).lower;
        let (_, bound) = lplab::tridiag::flip_defect(&ts, &dec, p).unwrap();
        if defect_lower > bound + 1e-9 {
            ok = false;
            detail = format!("instance {i}: defect lower {defect_lower} > bound {bound}");
        }
    }
    verdict("2e [flipDT bound]", ok, &detail);
}

fn interpolated_family(
    dec: &BlockDecomposition,
    n1: usize,
    r: &mut impl Rng,
) -> Vec<LpOperator> {
    let n = dec.n_blocks();
    let copies = n + n1;
    let a = random_tridiagonal_for(dec, r);
    let b = random_tridiagonal_for(dec, r);
    (1..=copies)
        .map(|i| {
            let t = if i <= n1 + 1 {
                0.0
            } else if i >= n {
                1.0
            } else {
                (i - n1 - 1) as f64 / (n - n1 - 1).max(1) as f64
            };
            a.scale(Complex64::new(1.0 - t, 0.0))
                .add(&b.scale(Complex64::new(t, 0.0)))
                .unwrap()
        })
        .collect()
}

#[test]
fn criterion_2_embedtoneutral1() {
    let mut r = rng(206);
    let mut ok = true;
    let mut detail = String::new();
    for i in 0..100 {
        let p = ps()[i % 4];
        let dec = BlockDecomposition::uniform(2, 3, p);
        let n1 = 2;
        let v = LpOperator::identity(dec.label());
        let l = neutral_embed_l(&v, &dec, n1, p).unwrap();
        let with_ks = i % 2 == 1;
        let ts: Vec<LpOperator> = if with_ks {
            interpolated_family(&dec, n1, &mut r)
        } else {
            (0..dec.n_blocks() + n1)
                .map(|_| random_tridiagonal_for(&dec, &mut r))
                .collect()
        };
        let ks: Option<Vec<LpOperator>> = with_ks.then(|| {
            (0..ts.len())
                .map(|j| {
                    if j < n1 + 1 {
                        LpOperator::zeros(dec.label(), dec.label())
                    } else {
                        random_operator(dec.dim(), dec.label(), &mut r)
                            .scale(Complex64::new(0.2, 0.0))
                    }
                })
                .collect()
        });
        let fam = NeutralFamily {
            ts: &ts,
            t_tildes: &ts,
            ks: ks.as_deref(),
        };
        let (defect, bound) = embed_defect_check(&l, &v, &dec, n1, &fam, p).unwrap();
        if defect > bound + 1e-9 {
            ok = false;
            detail = format!("instance {i}: defect {defect} > bound {bound}");
        }
    }
    verdict("2f [embedtoneutral1/2 defect bound]", ok, &detail);
}

#[test]
fn criterion_2_projectfromneutral() {
    let mut r = rng(207);
    let mut ok = true;
    let mut detail = String::new();
    for i in 0..100 {
        let p = ps()[i % 4];
        let dec = BlockDecomposition::uniform(2, 3, p);
        let n1 = 2;
        let v = LpOperator::identity(dec.label());
        let rr = neutral_project_r(&v, &v, &dec, n1, p).unwrap();
        let ts = interpolated_family(&dec, n1, &mut r);
        let with_ks = i % 2 == 1;
        let ks: Option<Vec<LpOperator>> = with_ks.then(|| {
            (0..ts.len())
                .map(|j| {
                    if j < n1 + 1 {
                        LpOperator::zeros(dec.label(), dec.label())
                    } else {
                        random_operator(dec.dim(), dec.label(), &mut r)
                            .scale(Complex64::new(0.2, 0.0))
                    }
                })
                .collect()
        });
        let fam = NeutralFamily {
            ts: &ts,
            t_tildes: &ts,
            ks: ks.as_deref(),
        };
        let (defect, bound) = project_defect_check(&rr, &v, &dec, n1, &fam, p).unwrap();
        if defect > bound + 1e-9 {
            ok = false;
            detail = format!("instance {i}: defect {defect} > bound {bound}");
        }
    }
    verdict("2g [projectfromneutral defect bound]", ok, &detail);
}

#[test]
fn criterion_2_diagonal_obstruction() {
    let mut r = rng(208);
    let mut ok = true;
    let mut detail = String::new();
    for i in 0..100 {
        let p = ps()[i % 4];
        let n = 2 + (i % 30);
        let beta = (n as f64).powf((0.5 - 1.0 / p.p()).abs()) + 0.25;
        let ambient = IndexLabel::interval(n);
        let dw: Vec<f64> = (0..n).map(|_| r.gen_range(0.0..1.0)).collect();
        let d = DiagonalOperator::from_reals(&dw, ambient.clone()).unwrap();
        let block = IndexLabel::blocks(vec![n], 2.0);
        let mut l = LpOperator::zeros(block, ambient);
        for j in 0..n {
            l[(j, j)] = Complex64::new(1.0, 0.0);
        }
        let rep = diag_obstruction_check(n, p, beta, &d, &l, 208 ^ i as u64).unwrap();
        if rep.td1_lhs > rep.td1_rhs + 1e-9 || rep.td2_lhs > rep.td2_rhs + 1e-9 {
            ok = false;
            detail = format!("instance {i}: (TD1)/(TD2) violated at n = {n}");
        }
    }
    verdict("2h [Diagonalp21 (TD1)/(TD2)]", ok, &detail);
}

fn perturbed_idempotent(
    dim: usize,
    rank: usize,
    delta: f64,
    r: &mut impl Rng,
) -> LpOperator {
    let lab = IndexLabel::interval(dim);
    let mut e = LpOperator::zeros(lab.clone(), lab);
    for i in 0..rank {
        e[(i, i)] = Complex64::new(1.0, 0.0);
    }
    for i in 0..dim {
        for j in 0..dim {
            e[(i, j)] += random_complex(r) * delta;
        }
    }
    e
}

#[test]
fn criterion_2_idem_bound() {
    let mut r = rng(209);
    let mut ok = true;
    let mut detail = String::new();
    for i in 0..100 {
        let p = ps()[i % 4];
        let dim = 4 + (i % 29);
        let rank = 1 + (i % dim.min(8));
        let e = perturbed_idempotent(dim, rank, 3e-4, &mut r);
        let q = riesz_idempotent(&e, 256, None, p).unwrap();
        let c = op_norm_upper(&e, p);
        let eps = op_norm_upper(&e.compose(&e).unwrap().sub(&e).unwrap(), p);
        let dist = op_norm_upper(&e.sub(&q).unwrap(), p);
        let bound = 16.0 * (0.5 + c) * eps;
        if dist > bound + 1e-9 {
            ok = false;
            detail = format!("instance {i}: ‖E−Q‖ = {dist:.3e} > 16(1/2+C)ε = {bound:.3e}");
        }
    }
    verdict("2i [idem bound 16(1/2+C)ε]", ok, &detail);
}

pub fn feasible_split_instance(
    i: usize,
    r: &mut impl Rng,
) -> (LpOperator, LpOperator, LpOperator, LpOperator, f64, PExponent) {
    let p = ps()[i % 4];
    let n1 = 2 + (i % 5);
    let n2 = 2 * n1;
    let delta = 1e-5;
    let mut l = LpOperator::zeros(IndexLabel::interval(n1), IndexLabel::interval(n2));
    for j in 0..n1 {
        l[(j, j)] = Complex64::new(1.0, 0.0);
    }
    let mut rr = l.adjoint();
    for a in 0..n1 {
        for b in 0..n2 {
            l[(b, a)] += random_complex(r) * delta;
            rr[(a, b)] += random_complex(r) * delta;
        }
    }
    let t1 = random_operator(n1, IndexLabel::interval(n1), r);
    let t2 = random_operator(n2, IndexLabel::interval(n2), r);
    let beta = op_norm_upper(&l, p).max(op_norm_upper(&rr, p)).max(1.0);
    (l, rr, t1, t2, beta, p)
}

#[test]
fn criterion_2_goodembed_condition() {
    let mut r = rng(210);
    let mut ok = true;
    let mut detail = String::new();
    for i in 0..100 {
        let (l, rr, t1, t2, beta, p) = feasible_split_instance(i, &mut r);
        let res = split_similarity(&l, &rr, &t1, &t2, beta, p).unwrap();
        let cap = 7.0 * beta.powi(6);
        if res.condition > cap + 1e-9 {
            ok = false;
            detail = format!("instance {i}: condition {} > 7β⁶ = {cap}", res.condition);
        }
    }
    verdict("2j [goodembed condition 7β⁶]", ok, &detail);
}

// ---------------------------------------------------------------- criterion 3

#[test]
fn criterion_3_riesz_idempotency() {
    let mut r = rng(301);
    let mut worst = 0.0f64;
    for i in 0..100 {
        let p = ps()[i % 4];
        let dim = 4 + (i % 29);
        let rank = 1 + (i % dim.min(10));
        let e = perturbed_idempotent(dim, rank, 1e-3, &mut r);
        let q = riesz_idempotent(&e, 256, None, p).unwrap();
        let defect = op_norm_upper(&q.compose(&q).unwrap().sub(&q).unwrap(), p);
        worst = worst.max(defect);
    }
    verdict(
        "3 [Riesz ‖Q²−Q‖ ≤ 1e-10, 256 contour points, 100 instances]",
        worst <= 1e-10,
        &format!("worst defect {worst:.3e}"),
    );
}

// ---------------------------------------------------------------- criterion 4

#[test]
fn criterion_4_circulant_exactness() {
    let mut r = rng(401);
    let mut ok = true;
    let mut detail = String::new();
    for i in 0..50 {
        let d = 1 + (i % 8);
        let n = if i % 2 == 0 { 16 } else { 64 };
        let coeffs: Vec<Complex64> = (0..2 * d + 1).map(|_| random_complex(&mut r)).collect();
        let f = LaurentPolynomial::new(coeffs, d).unwrap();
        let fb = circulant_from_symbol(&f, n);
        let spectral = (0..n)
            .map(|j| {
                f.eval(Complex64::from_polar(
                    1.0,
                    2.0 * std::f64::consts::PI * j as f64 / n as f64,
                ))
                .norm()
            })
            .fold(0.0f64, f64::max);
        let b2 = op_norm_bounds(&fb, PExponent::two(), Effort::light());
        if b2.lower > spectral + 1e-8 || b2.upper < spectral - 1e-8 {
            ok = false;
            detail = format!(
                "instance {i}: p=2 bracket [{}, {}] misses {}",
                b2.lower, b2.upper, spectral
            );
        }
        for p in [1.5, 3.0, 4.0] {
            let bp = op_norm_bounds(&fb, PExponent::new(p).unwrap(), Effort::light());
            if bp.lower < spectral - 1e-9 {
                ok = false;
                detail = format!(
                    "instance {i}: p={p} lower {} below the spectral value {}",
                    bp.lower, spectral
                );
            }
        }
    }
    verdict("4 [circulant exactness, 50 symbols, N ∈ {16,64}]", ok, &detail);
}

// ---------------------------------------------------------------- criterion 5

#[test]
fn criterion_5_fixman_regression() {
    let p2 = PExponent::two();
    let res2 = fixman_search(p2, 16, 128, 200, 20260810).unwrap();
    let ok2 = (res2.ratio - 1.0).abs() <= 1e-6;
    verdict(
        "5a [Fixman p=2 ratio = 1 ± 1e-6 over 200 trials]",
        ok2,
        &format!("ratio {}", res2.ratio),
    );

    let p4 = PExponent::new(4.0).unwrap();
    let res4 = fixman_search(p4, 16, 128, 500, 20260810).unwrap();
    let ok4 = (res4.ratio - FIXMAN_P4_FROZEN).abs() <= 1e-6 && res4.ratio > 1.0;
    verdict(
        "5b [Fixman p=4 frozen regression, excess > 1]",
        ok4,
        &format!("ratio {} vs frozen {}", res4.ratio, FIXMAN_P4_FROZEN),
    );
}

// ---------------------------------------------------------------- criterion 6

#[test]
fn criterion_6_commutator_identity() {
    let mut r = rng(601);
    let mut worst = 0.0f64;
    for i in 0..100 {
        let p = ps()[i % 4];
        let n = 4 + (i % 29);
        let lab = IndexLabel::cyclic(n);
        let w: Vec<f64> = (0..n).map(|_| r.gen_range(0.0..1.0)).collect();
        let a = DiagonalOperator::from_reals(&w, lab).unwrap();
        let b = make_shift(ShiftKind::Circular, n);
        let comm = a
            .to_operator()
            .compose(&b)
            .unwrap()
            .sub(&b.compose(&a.to_operator()).unwrap())
            .unwrap();
        let bracket = op_norm_bounds(&comm, p, Effort::light());
        let exact = circular_commutator_norm(&a);
        worst = worst
            .max((bracket.lower - exact).abs())
            .max((bracket.upper - exact).abs());
    }
    verdict(
        "6 [commutator bracket = max_j|a_{j+1}−a_j|, 100 instances]",
        worst <= 1e-12,
        &format!("worst drift {worst:.3e}"),
    );
}

// ---------------------------------------------------------------- criterion 7

#[test]
fn criterion_7_staircase_exact() {
    let schedule: Vec<usize> = (1..=256).collect();
    let fam = staircase(&schedule, 65).unwrap();
    let res = staircase_check(&fam, 64, 10_000);
    verdict(
        "7 [staircase properties (i)–(v), k ≤ 64, r ≤ 10⁴, exact dyadics]",
        res.is_ok(),
        &res.err().map(|e| e.to_string()).unwrap_or_default(),
    );
}

// ---------------------------------------------------------------- criterion 8

#[test]
fn criterion_8_box_covers() {
    let mut r = rng(801);
    let mut ok = true;
    let mut detail = String::new();
    for d in 1..=3usize {
        for cloud in 0..20 {
            let npts = 10_000 / 20;
            let pts: Vec<Vec<f64>> = (0..npts)
                .map(|_| (0..d).map(|_| r.gen::<f64>()).collect())
                .collect();
            let eps = 0.15 + 0.1 * (cloud % 4) as f64;
            let cover = box_cover(&pts, eps).unwrap();
            if cover.box_diameter() > eps + 1e-12 {
                ok = false;
                detail = format!("d={d} cloud {cloud}: diameter {} > ε", cover.box_diameter());
            }
            for v in &pts {
                let m = cover.multiplicity(v);
                if m < 1 || m > 1 << d {
                    ok = false;
                    detail = format!("d={d} cloud {cloud}: multiplicity {m}");
                }
            }
        }
    }
    verdict("8 [box covers: multiplicity ≤ 2^d, diameter ≤ ε]", ok, &detail);
}

// ---------------------------------------------------------------- criterion 9

#[test]
fn criterion_9_split_reconstruction() {
    let mut r = rng(901);
    let mut ok = true;
    let mut detail = String::new();
    for i in 0..100 {
        let (l, rr, t1, t2, beta, p) = feasible_split_instance(i, &mut r);
        let n1 = l.cols();
        let n2 = l.rows();
        let res = split_similarity(&l, &rr, &t1, &t2, beta, p).unwrap();
        let lhs = res
            .s
            .compose(&t2.add(&res.k).unwrap())
            .unwrap()
            .compose(&res.s_inverse)
            .unwrap();
        let mut rhs = LpOperator::zeros(lhs.domain.clone(), lhs.codomain.clone());
        for a in 0..n1 {
            for b in 0..n1 {
                rhs[(a, b)] = t1[(a, b)];
            }
        }
        for a in 0..n2 {
            for b in 0..n2 {
                rhs[(n1 + a, n1 + b)] = res.t3[(a, b)];
            }
        }
        let recon = lhs.sub(&rhs).unwrap().max_abs();
        if recon > 1e-10 {
            ok = false;
            detail = format!("instance {i}: reconstruction defect {recon:.3e}");
        }
        let cap = 7.0 * beta.powi(6) + 1e-6;
        if res.condition > cap {
            ok = false;
            detail = format!("instance {i}: condition {} > {cap}", res.condition);
        }
    }
    verdict(
        "9 [split reconstruction to 1e-10 and condition ≤ 7β⁶, 100 instances]",
        ok,
        &detail,
    );
}

// --------------------------------------------------------------- criterion 10

#[test]
fn criterion_10_selftest_determinism() {
    let bin = env!("CARGO_BIN_EXE_lplab");
    let dir = std::env::temp_dir();
    let out1 = dir.join("lplab_selftest_run1.json");
    let out2 = dir.join("lplab_selftest_run2.json");
    for out in [&out1, &out2] {
        let status = std::process::Command::new(bin)
            .args(["selftest", "--out"])
            .arg(out)
            .env("LAB_SEED", "424242")
            .status()
            .expect("run lplab selftest");
        assert!(status.success(), "selftest exited with {status}");
    }
    let a = std::fs::read(&out1).unwrap();
    let b = std::fs::read(&out2).unwrap();
    verdict(
        "10 [selftest byte-identical under fixed LAB_SEED]",
        a == b && !a.is_empty(),
        "artifacts differ",
    );
}
