//! The Laurent symbol calculus: circulants as finite models of the
//! bilateral shift, circle sups, and winding-number index bookkeeping
//! (index of the Toeplitz model = −winding).
//!
//! Run: cargo run --example circulant_symbols

use num_complex::Complex64;

use lplab::bracket::{op_norm_bounds, Effort};
use lplab::space::PExponent;
use lplab::zoo::{
    circulant_from_symbol, laurent_circle_sup, toeplitz_index, winding_number, LaurentPolynomial,
};

fn main() {
    let one = Complex64::new(1.0, 0.0);

    // f(z) = 1 + z: sup on the circle is 2, attained at θ = 0
    let f = LaurentPolynomial::from_terms(&[(0, one), (1, one)]);
    let sup = laurent_circle_sup(&f, 4096);
    println!(
        "sup |1 + z| on the circle: grid max {:.9}, certified ≤ {:.9}",
        sup.grid_max, sup.certified_upper
    );

    // at p = 2 the circulant norm equals the max of |f| over the N-th roots
    let n = 16;
    let fb = circulant_from_symbol(&f, n);
    for p in [1.5, 2.0, 4.0] {
        let b = op_norm_bounds(&fb, PExponent::new(p).unwrap(), Effort::default());
        println!("‖f(B_{n})‖ at p = {p}: [{:.9}, {:.9}]", b.lower, b.upper);
    }

    // winding numbers around various λ, and the index convention
    let g = LaurentPolynomial::from_terms(&[
        (1, one),
        (2, Complex64::new(0.5, 0.0)),
        (-1, Complex64::new(0.25, 0.0)),
    ]);
    for (re, im) in [(0.0, 0.0), (2.5, 0.0), (0.0, 1.2)] {
        let lambda = Complex64::new(re, im);
        let w = winding_number(&g, lambda, 4096).unwrap();
        let idx = toeplitz_index(&g, lambda, 4096).unwrap();
        println!("λ = {re}+{im}i: winding {w}, Toeplitz index {idx}");
    }

    // the unilateral shift has symbol z and index −1
    let z = LaurentPolynomial::monomial(1);
    println!(
        "symbol z: index {}",
        toeplitz_index(&z, Complex64::default(), 1024).unwrap()
    );
}
