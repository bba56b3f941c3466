//! Quasicentral approximate units: increasing ≪-chains of diagonal
//! contractions whose commutators with a given family stay under a
//! tolerance schedule, plus the pinching inequalities (constants 2 and 4^p).
//!
//! Run: cargo run --example quasicentral_units

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use lplab::averaging::{pinch_check, quasicentral_unit};
use lplab::space::{IndexLabel, LpVector, PExponent};
use lplab::zoo::{ll_less, make_shift, ShiftKind};
use num_complex::Complex64;

fn main() {
    let p = PExponent::new(3.0).unwrap();
    let n = 96;
    let b = make_shift(ShiftKind::Circular, n);

    // the commutator of a flat window with the shift is the reciprocal
    // ramp length, so the schedule below is comfortably feasible
    let tolerances = [0.25, 0.12, 0.06];
    let unit = quasicentral_unit(std::slice::from_ref(&b), &tolerances, None, p).unwrap();
    println!("stages against the circular shift B_{n}:");
    for (i, (stage, defect)) in unit.stages.iter().zip(&unit.defects).enumerate() {
        println!(
            "  A_{}: support {:>3} coordinates, commutator defect {:.6} < {}",
            i + 1,
            stage.support().len(),
            defect,
            tolerances[i]
        );
    }
    for w in unit.stages.windows(2) {
        assert!(ll_less(&w[0], &w[1]));
    }
    println!("≪-chain verified");

    // pinching: Σ‖(A_n − A_{n−1})x‖^p ≤ 2‖x‖^p, and admissible block
    // vectors recombine with constant 4^p
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let lab = IndexLabel::cyclic(n);
    let x = LpVector::new(
        (0..n)
            .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
            .collect(),
        lab.clone(),
    )
    .unwrap();
    let xs: Vec<LpVector> = (0..unit.stages.len())
        .map(|s| {
            let cur = &unit.stages[s].weights;
            let entries: Vec<Complex64> = (0..n)
                .map(|j| {
                    let prev = if s == 0 {
                        Complex64::default()
                    } else {
                        unit.stages[s - 1].weights[j]
                    };
                    (cur[j] - prev) * x.entries[j]
                })
                .collect();
            LpVector::new(entries, lab.clone()).unwrap()
        })
        .collect();
    let (first, second) = pinch_check(&unit, &x, &xs, p).unwrap();
    println!("pinch sum ratio: {first:.6} ≤ 2");
    println!("block recombination ratio: {second:.6} ≤ 4^p = {:.1}", 4.0f64.powf(p.p()));
}
