//! The signed-average direct sum (·)_u^{⊕r}: its norm by exact sign
//! enumeration, the Khintchine substrate, the scalar bound 2·max|c_i|, and
//! the coordinate-slicing comparison with l^p.
//!
//! Run: cargo run --example signed_sums

use num_complex::Complex64;

use lplab::space::{IndexLabel, LpVector, PExponent};
use lplab::unconditional::{
    kahane_constant, khintchine_constant, khintchine_ratio, random_signed_element,
    s_isomorphism_distortion, u_norm, u_scalar_bound_check, SignedSumElement, UNormMode,
};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() {
    let p = PExponent::new(4.0).unwrap();
    let one = Complex64::new(1.0, 0.0);

    // E|δ₁ + δ₂| is 1, so the u-norm of two equal copies is the plain norm
    let lab = IndexLabel::interval(2);
    let v = LpVector::from_reals(&[3.0, 4.0], lab.clone()).unwrap();
    let pair = SignedSumElement::new(vec![v.clone(), v.clone()]).unwrap();
    println!(
        "u-norm of (v, v): {:.9} (plain ‖v‖ = {:.9})",
        u_norm(&pair, p, UNormMode::Exact).unwrap().value,
        v.norm(p)
    );

    // Khintchine ratios: exactly 1 at p = 2, 2^{1/4} for (1,1) at p = 4
    println!(
        "khintchine (1,1) at p = 4: {:.9} (2^(1/4) = {:.9})",
        khintchine_ratio(&[one, one], p).unwrap(),
        2.0f64.powf(0.25)
    );
    println!(
        "khintchine random at p = 2: {:.12}",
        khintchine_ratio(
            &[Complex64::new(0.3, -0.4), Complex64::new(-1.0, 0.2)],
            PExponent::two()
        )
        .unwrap()
    );

    // scalar multipliers act with norm ≤ 2·max|c|
    let cs = [
        Complex64::new(0.4, 0.6),
        Complex64::new(-0.9, 0.1),
        Complex64::new(0.0, -0.8),
    ];
    let (ratio, bound) = u_scalar_bound_check(&cs, 40, 4, p, 9).unwrap();
    println!("scalar multiplier ratio {ratio:.6} ≤ 2·max|c| = {bound:.6}");

    // the slicing map into (⊕ l²(r))_{l^p} distorts by at most C² where C
    // is the brute-forced Khintchine–Kahane constant
    let c = khintchine_constant(p, 3, 6).max(kahane_constant(p, 3, 4));
    let mut rng = ChaCha8Rng::seed_from_u64(77);
    let y = random_signed_element(3, 4, &mut rng, IndexLabel::interval(4));
    let rep = s_isomorphism_distortion(&y, p, c).unwrap();
    println!(
        "slicing distortion {:.6} inside [{:.6}, {:.6}] (C = {:.6})",
        rep.value, rep.lower_allowed, rep.upper_allowed, c
    );
}
