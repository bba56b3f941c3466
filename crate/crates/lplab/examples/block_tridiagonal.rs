//! Block-tridiagonal calculus: greedy quasitridiagonalization, the block
//! homomorphism Φ with its (2r+1) tail sandwich, the factor-3 norm bound,
//! and the band compression.
//!
//! Run: cargo run --example block_tridiagonal

use num_complex::Complex64;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use lplab::bracket::{op_norm_bounds, Effort};
use lplab::operator::LpOperator;
use lplab::space::{IndexLabel, PExponent};
use lplab::tridiag::{
    assemble_phi, phi_tail_sandwich, quasitridiagonalize, tridiag_compress, tridiag_norm_check,
    BlockDecomposition, BlockMatrix,
};
use lplab::zoo::{make_shift, ShiftKind};

fn main() {
    let p = PExponent::new(2.5).unwrap();
    let n = 24;

    // B³ has bandwidth 3: greedy breakpoints settle into blocks of size ≥ 3
    let b = make_shift(ShiftKind::Unilateral, n);
    let b3 = b.compose(&b).unwrap().compose(&b).unwrap();
    let res = quasitridiagonalize(std::slice::from_ref(&b3), p).unwrap();
    println!(
        "greedy breakpoints for B³: {:?} (defects {:?})",
        res.decomposition.breakpoints, res.defects
    );

    // Φ assembles banded block matrices multiplicatively
    let dec = BlockDecomposition::uniform(2, 4, p);
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let lab = IndexLabel::interval(2);
    let mut m = BlockMatrix::new(1);
    for i in 1..=4usize {
        for j in 1..=4usize {
            if i.abs_diff(j) <= 1 {
                let data: Vec<Complex64> = (0..4)
                    .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
                    .collect();
                m.insert(i, j, LpOperator::new(data, lab.clone(), lab.clone()).unwrap());
            }
        }
    }
    let s = phi_tail_sandwich(&m, &dec, p, 3, Effort::default()).unwrap();
    println!(
        "tail sandwich at bandwidth 1: s_n = {:.6} ≤ tail [{:.6}, {:.6}] ≤ 3·s_n = {:.6}",
        s.block_sup_lower, s.tail_lower, s.tail_upper, s.sandwich_bound
    );

    // ‖T‖ ≤ 3·sup_j ‖TD_j‖ for block-tridiagonal T
    let t = assemble_phi(&m, &dec).unwrap();
    let (whole_upper, bound) = tridiag_norm_check(&t, &dec, p).unwrap();
    let whole_lower = op_norm_bounds(&t, p, Effort::default()).lower;
    println!("factor-3 bound: ‖T‖ ∈ [{whole_lower:.6}, {whole_upper:.6}] ≤ {bound:.6}");

    // compression onto the band is a projection with norm factor ≤ 3
    let dense = {
        let mut d = LpOperator::zeros(dec.label(), dec.label());
        for i in 0..8 {
            for j in 0..8 {
                d[(i, j)] = Complex64::new(1.0, 0.0);
            }
        }
        d
    };
    let c = tridiag_compress(&dense, &dec);
    println!(
        "compress(all-ones): tridiagonal = {}, idempotent = {}",
        dec.is_tridiagonal(&c, 0.0),
        tridiag_compress(&c, &dec).sub(&c).unwrap().max_abs() == 0.0
    );
}
