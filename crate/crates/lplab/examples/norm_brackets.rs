//! Certified operator-norm brackets on l^p: exact values for diagonal and
//! permutation matrices, two-sided brackets for everything else, and the
//! tail norms that stand in for the essential norm at finite scale.
//!
//! Run: cargo run --example norm_brackets

use num_complex::Complex64;

use lplab::bracket::{op_norm_bounds, tail_norms, Effort};
use lplab::operator::LpOperator;
use lplab::space::{IndexLabel, PExponent};
use lplab::zoo::{make_shift, ShiftKind};

fn main() {
    let p = PExponent::new(3.0).unwrap();

    // permutations are isometries: the bracket collapses to [1, 1]
    let b = make_shift(ShiftKind::Circular, 8);
    let bracket = op_norm_bounds(&b, p, Effort::default());
    println!(
        "circular shift B_8 at p = 3:   [{:.12}, {:.12}]  ({})",
        bracket.lower,
        bracket.upper,
        bracket.method_tags.join(", ")
    );

    // diagonals are exact too
    let d = LpOperator::diagonal(
        &[3.0, 1.0, -2.0].map(|x| Complex64::new(x, 0.0)),
        IndexLabel::interval(3),
    )
    .unwrap();
    let bracket = op_norm_bounds(&d, p, Effort::default());
    println!(
        "diag(3, 1, -2) at p = 3:       [{:.12}, {:.12}]",
        bracket.lower, bracket.upper
    );

    // a dense operator gets a genuine two-sided bracket; at p = 2 the lower
    // end converges to the largest singular value
    let shear = LpOperator::from_rows_real(
        &[vec![1.0, 1.0], vec![0.0, 1.0]],
        IndexLabel::interval(2),
        IndexLabel::interval(2),
    )
    .unwrap();
    let bracket = op_norm_bounds(&shear, PExponent::two(), Effort::default());
    println!(
        "[[1,1],[0,1]] at p = 2:        [{:.12}, {:.12}]  (golden ratio {:.12})",
        bracket.lower,
        bracket.upper,
        (1.0 + 5.0f64.sqrt()) / 2.0
    );

    // tail norms ‖T(I−R_n)‖ decay as the cut moves right
    let n = 10;
    let weights: Vec<Complex64> = (1..=n)
        .map(|k| Complex64::new(1.0 / k as f64, 0.0))
        .collect();
    let t = LpOperator::diagonal(&weights, IndexLabel::interval(n)).unwrap();
    println!("tail norms of diag(1, 1/2, 1/3, …):");
    for cut in [0, 2, 5, 9] {
        let (right, left) = tail_norms(&t, p, cut);
        println!("  cut {cut}: ‖T(I−R)‖ = {right:.6}, ‖(I−R)T‖ = {left:.6}");
    }
}
