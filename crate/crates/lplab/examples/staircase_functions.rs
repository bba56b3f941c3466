//! Dyadic staircases t_k(r): non-decreasing step functions on the
//! 2^{−k}-grid that stay 0 through r(k), reach 1 eventually, and move by at
//! most 2/k per step in either index. Verified in exact dyadic arithmetic.
//!
//! Run: cargo run --example staircase_functions

use lplab::splitting::{staircase, staircase_check};

fn main() {
    let schedule: Vec<usize> = (1..=64).collect(); // r(k) = k
    let fam = staircase(&schedule, 9).unwrap();

    println!("t_k(r) for r(k) = k (rows k = 1..6, columns r = 1..14):");
    for k in 1..=6usize {
        let row: Vec<String> = (1..=14)
            .map(|r| {
                let v = fam.value(k, r);
                format!("{}/{}", v.num, 1u64 << v.log_den)
            })
            .collect();
        println!("  t_{k}: {}", row.join("  "));
    }

    match staircase_check(&fam, 8, 200) {
        Ok(()) => println!("properties (i)–(v) hold exactly for k ≤ 8, r ≤ 200"),
        Err(e) => println!("violated: {e}"),
    }

    // the increments stay within 2/k even where two ramps interleave
    let k = 5;
    let max_step = (1..200)
        .map(|r| (fam.value(k, r + 1).value() - fam.value(k, r).value()).abs())
        .fold(0.0f64, f64::max);
    println!("max step of t_{k} in r: {max_step} ≤ 2/{k} = {}", 2.0 / k as f64);
}
