//! Følner averaging for H = nℤ inside ℤ: the intertwiner pair V, E with
//! EV = I exactly, the functional gaps that vanish as the Følner length
//! grows, and the multi-quotient embedding with coset separation stages.
//!
//! Run: cargo run --example folner_averaging

use lplab::averaging::{
    folner_functional_gap, folner_functional_gap_closed_form, folner_pair, multi_quotient_v,
};
use lplab::operator::LpOperator;
use lplab::space::{IndexLabel, PExponent};

fn main() {
    let p = PExponent::new(3.0).unwrap();
    let n = 3;

    println!("coset functionals for H = {n}ℤ, shift by one period:");
    for k in [2usize, 4, 8, 16, 32] {
        let gap = folner_functional_gap(n, k, n as i64, p).unwrap();
        let closed = folner_functional_gap_closed_form(n, k, n as i64, p);
        println!("  k = {k:>2}: gap {gap:.9} (closed form {closed:.9})");
    }

    let k = 8;
    let nk = (n * k) as i64;
    let fi = folner_pair(n, k, (-nk, 2 * nk - 1), p).unwrap();
    let ev_defect = fi
        .e
        .compose(&fi.v)
        .unwrap()
        .sub(&LpOperator::identity(IndexLabel::cyclic(n)))
        .unwrap()
        .max_abs();
    println!("EV − I (entrywise):      {ev_defect:.3e}");
    println!(
        "translation equivariance: {:.3e}",
        fi.translation_defect(1).unwrap()
    );
    println!(
        "wrapped shift defect:     {:.6} (decays like (2/k)^(1/q))",
        fi.conjugated_shift_defect(1)
    );

    // two moduli separate window points exactly when some modulus tells
    // them apart
    let mq = multi_quotient_v(&[2, 3], (0, 7), p).unwrap();
    println!("separation stages for moduli (2, 3):");
    for ((a, b), stage) in mq.separation.iter().filter(|((a, _), _)| *a == 0) {
        match stage {
            Some(s) => println!("  {a} vs {b}: stage {s}"),
            None => println!("  {a} vs {b}: never (congruent mod 2 and mod 3)"),
        }
    }
}
