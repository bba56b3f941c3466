//! Cubical covers with multiplicity ≤ 2^d, subordinate partitions of unity,
//! and the partition intertwiner: W x = (ψ(f_i)x)_i into the u-sum with
//! E W = I exactly and intertwining defects under ε.
//!
//! Run: cargo run --example box_partitions

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use lplab::geometry::{box_cover, partition_intertwiner, partition_of_unity, AxisFunction, GridFunction};
use lplab::space::{IndexLabel, LpVector, PExponent};
use lplab::zoo::DiagonalOperator;
use num_complex::Complex64;

fn main() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);

    // a random cloud in the unit square
    let pts: Vec<Vec<f64>> = (0..200)
        .map(|_| vec![rng.gen::<f64>(), rng.gen::<f64>()])
        .collect();
    let cover = box_cover(&pts, 0.3).unwrap();
    let max_mult = pts.iter().map(|v| cover.multiplicity(v)).max().unwrap();
    println!(
        "cover: grid n = {}, {} boxes, diameter {:.4}, max multiplicity {max_mult} (≤ 4)",
        cover.n,
        cover.boxes.len(),
        cover.box_diameter()
    );

    let pu = partition_of_unity(&pts, 0.3).unwrap();
    let worst: f64 = pts
        .iter()
        .map(|v| {
            let s: f64 = (0..pu.r()).map(|i| pu.f(i, v)).sum();
            (s - 1.0).abs()
        })
        .fold(0.0, f64::max);
    println!("Σf = 1 on all samples up to {worst:.3e}");

    // the intertwiner for a [0,1]-valued diagonal and the identity symbol
    let p = PExponent::new(3.0).unwrap();
    let m = 48;
    let lab = IndexLabel::interval(m);
    let weights: Vec<f64> = (0..m).map(|i| i as f64 / (m - 1) as f64).collect();
    let d = DiagonalOperator::from_reals(&weights, lab.clone()).unwrap();
    let h = AxisFunction {
        axis: 0,
        f: GridFunction::identity(65),
    };
    let eps = 0.1;
    let it = partition_intertwiner(std::slice::from_ref(&d), std::slice::from_ref(&h), eps)
        .unwrap();
    println!(
        "intertwiner: r = {} boxes at modulus γ = {:.4}, EW − I = {:.3e}",
        it.r(),
        it.gamma,
        it.ew_identity_defect()
    );
    let x = LpVector::new(
        (0..m)
            .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
            .collect(),
        lab,
    )
    .unwrap();
    let defect = it.w_defect(&h, &x, p).unwrap() / x.norm(p);
    println!("intertwining defect on a random probe: {defect:.6} ≤ ε = {eps}");
}
