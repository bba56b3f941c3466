//! Shared test oracles, independent of the library's norm machinery.
#![allow(dead_code)] // each test binary uses a different subset

use num_complex::Complex64;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use lplab::operator::LpOperator;
use lplab::space::{IndexLabel, LpVector};
use lplab::zoo::DiagonalOperator;

/// Largest singular value via the Jacobi eigenvalue iteration on T^H T.
/// A genuinely different route from the library's duality-map power
/// iteration: full diagonalization by two-sided unitary rotations.
pub fn singular_value_oracle(t: &LpOperator) -> f64 {
    let n = t.cols();
    let m = t.rows();
    // H = T^H T, Hermitian PSD
    let mut h = vec![Complex64::default(); n * n];
    for i in 0..n {
        for j in 0..n {
            let mut acc = Complex64::default();
            for k in 0..m {
                acc += t[(k, i)].conj() * t[(k, j)];
            }
            h[i * n + j] = acc;
        }
    }
    let eigs = jacobi_hermitian_eigenvalues(&mut h, n);
    eigs.into_iter().fold(0.0f64, f64::max).max(0.0).sqrt()
}

/// Eigenvalues of a Hermitian matrix by cyclic complex Jacobi sweeps.
pub fn jacobi_hermitian_eigenvalues(h: &mut [Complex64], n: usize) -> Vec<f64> {
    let idx = |i: usize, j: usize| i * n + j;
    for _sweep in 0..60 {
        let mut off = 0.0f64;
        for i in 0..n {
            for j in (i + 1)..n {
                off += h[idx(i, j)].norm_sqr();
            }
        }
        if off.sqrt() < 1e-14 {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let hpq = h[idx(p, q)];
                let a = h[idx(p, p)].re;
                let b = h[idx(q, q)].re;
                let habs = hpq.norm();
                if habs < 1e-300 {
                    continue;
                }
                let u = hpq / habs;
                let tau = (b - a) / (2.0 * habs);
                let tt = if tau >= 0.0 {
                    1.0 / (tau + (1.0 + tau * tau).sqrt())
                } else {
                    -1.0 / (-tau + (1.0 + tau * tau).sqrt())
                };
                let c = 1.0 / (1.0 + tt * tt).sqrt();
                let s = tt * c;
                // columns: col_p ← c·col_p − s·ū·col_q ; col_q ← s·u·col_p + c·col_q
                for i in 0..n {
                    let hip = h[idx(i, p)];
                    let hiq = h[idx(i, q)];
                    h[idx(i, p)] = hip * c - hiq * s * u.conj();
                    h[idx(i, q)] = hip * s * u + hiq * c;
                }
                // rows: conjugate transform
                for j in 0..n {
                    let hpj = h[idx(p, j)];
                    let hqj = h[idx(q, j)];
                    h[idx(p, j)] = hpj * c - hqj * s * u;
                    h[idx(q, j)] = hpj * s * u.conj() + hqj * c;
                }
                h[idx(p, q)] = Complex64::default();
                h[idx(q, p)] = Complex64::default();
            }
        }
    }
    (0..n).map(|i| h[idx(i, i)].re).collect()
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_complex(rng: &mut impl Rng) -> Complex64 {
    Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
}

pub fn random_operator(dim: usize, label: IndexLabel, rng: &mut impl Rng) -> LpOperator {
    let data = (0..dim * dim).map(|_| random_complex(rng)).collect();
    LpOperator::new(data, label.clone(), label).expect("square shape")
}

pub fn random_vector(label: IndexLabel, rng: &mut impl Rng) -> LpVector {
    let dim = label.len();
    LpVector::new((0..dim).map(|_| random_complex(rng)).collect(), label).expect("shape")
}

/// A random ≪-chain of diagonal contractions on `dim` coordinates:
/// supports grow, entries lie in [0,1], and each stage is exactly 1 on the
/// support of the previous one.
pub fn random_ll_chain(
    dim: usize,
    stages: usize,
    label: IndexLabel,
    rng: &mut impl Rng,
) -> Vec<DiagonalOperator> {
    let mut cut_points: Vec<usize> = (0..stages)
        .map(|_| rng.gen_range(1..=dim))
        .collect();
    cut_points.sort_unstable();
    let mut out = Vec::with_capacity(stages);
    let mut prev_support = 0usize;
    for (s, &cut) in cut_points.iter().enumerate() {
        let cut = cut.max(prev_support.min(dim));
        let mut w = vec![0.0f64; dim];
        for (i, wi) in w.iter_mut().enumerate().take(cut) {
            if i < prev_support {
                *wi = 1.0;
            } else {
                *wi = rng.gen_range(0.0..=1.0);
            }
        }
        // last stage may or may not reach the identity; both are valid
        if s + 1 == stages && rng.gen_bool(0.3) {
            w.fill(1.0);
        }
        prev_support = w.iter().rposition(|&x| x != 0.0).map_or(0, |i| i + 1);
        out.push(DiagonalOperator::from_reals(&w, label.clone()).expect("shape"));
    }
    out
}

/// A random block-tridiagonal operator for a decomposition given by its
/// breakpoints (uniform inner exponent).
pub fn random_tridiagonal_for(
    dec: &lplab::tridiag::BlockDecomposition,
    rng: &mut impl Rng,
) -> LpOperator {
    let dim = dec.dim();
    let label = dec.label();
    let mut t = LpOperator::zeros(label.clone(), label);
    for i in 0..dim {
        for j in 0..dim {
            if dec.block_of(i).abs_diff(dec.block_of(j)) <= 1 {
                t[(i, j)] = random_complex(rng);
            }
        }
    }
    t
}
