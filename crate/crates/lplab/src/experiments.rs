//! The named experiments behind the CLI subcommands. Each one builds a
//! deterministic [`Report`] from an explicit seed; `selftest` runs the whole
//! property battery at small sizes.

use num_complex::Complex64;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::averaging::{
    folner_functional_gap, folner_functional_gap_closed_form, folner_pair, pinch_check,
    quasicentral_unit,
};
use crate::bracket::{op_norm_bounds, op_norm_upper, Effort};
use crate::error::Result;
use crate::geometry::{partition_intertwiner, partition_of_unity, AxisFunction, GridFunction};
use crate::obstruction::{diag_obstruction_check, fixman_search, staircase_witness_report};
use crate::operator::LpOperator;
use crate::report::{Report, Value};
use crate::space::{IndexLabel, LpVector, PExponent};
use crate::splitting::{
    embed_defect_check, neutral_embed_l, neutral_project_r, project_defect_check,
    riesz_idempotent, split_similarity, staircase, staircase_check, NeutralFamily,
};
use crate::tridiag::{quasitridiagonalize, tridiag_compress, BlockDecomposition};
use crate::unconditional::{khintchine_ratio, u_scalar_bound_check};
use crate::zoo::{
    circular_commutator_norm, commutator_upper, laurent_apply, laurent_circle_sup, make_shift,
    DiagonalOperator, LaurentPolynomial, ShiftKind,
};

/// Flag-controlled experiment sizes.
#[derive(Debug, Clone, Copy)]
pub struct ExpConfig {
    pub p: f64,
    pub dim: usize,
    pub seed: u64,
    pub trials: usize,
    pub eps: f64,
}

impl Default for ExpConfig {
    fn default() -> Self {
        ExpConfig {
            p: 2.0,
            dim: 64,
            seed: 1,
            trials: 50,
            eps: 0.1,
        }
    }
}

fn random_operator(dim: usize, rng: &mut impl Rng, label: IndexLabel) -> LpOperator {
    let data: Vec<Complex64> = (0..dim * dim)
        .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
        .collect();
    LpOperator::new(data, label.clone(), label).expect("square shape")
}

fn random_vector(dim: usize, rng: &mut impl Rng, label: IndexLabel) -> LpVector {
    LpVector::new(
        (0..dim)
            .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
            .collect(),
        label,
    )
    .expect("vector shape")
}

fn random_laurent(d: usize, rng: &mut impl Rng) -> LaurentPolynomial {
    let coeffs: Vec<Complex64> = (0..2 * d + 1)
        .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
        .collect();
    LaurentPolynomial::new(coeffs, d).expect("coefficients")
}

/// Symbol-excess search at the configured exponent and circulant size.
pub fn fixman_experiment(cfg: ExpConfig) -> Result<Report> {
    let p = PExponent::new(cfg.p)?;
    let degree = 16.min(cfg.dim / 4).max(1);
    let mut rep = Report::new("fixman");
    rep.param("p", cfg.p)
        .param("dim", cfg.dim)
        .param("degree", degree)
        .param("trials", cfg.trials)
        .param("seed", cfg.seed as i64);
    let res = fixman_search(p, degree, cfg.dim, cfg.trials, cfg.seed)?;
    for (i, r) in res.per_round.iter().enumerate() {
        rep.push_row(vec![
            ("round".to_string(), Value::Int(i as i64 + 1)),
            ("best_ratio".to_string(), Value::Float(*r)),
        ]);
    }
    rep.param("best_ratio", res.ratio);
    if res.ratio < 1.0 - 1e-9 {
        rep.violation(format!("ratio {} below the spectral floor", res.ratio));
    }
    if cfg.p == 2.0 && (res.ratio - 1.0).abs() > 1e-6 {
        rep.violation(format!("p = 2 ratio {} differs from 1", res.ratio));
    }
    Ok(rep)
}

/// Følner functional gaps (2·min(j,k)/k)^{1/q} decaying in k, with the exact
/// EV = I and translation-equivariance checks per stage.
pub fn circular_approx_experiment(cfg: ExpConfig) -> Result<Report> {
    let p = PExponent::new(cfg.p)?;
    let n = 3usize;
    let mut rep = Report::new("circular-approx");
    rep.param("p", cfg.p)
        .param("dim", cfg.dim)
        .param("modulus", n);
    let mut k = 1usize;
    while 3 * n * k <= cfg.dim.max(9 * n) {
        let window = (-((n * k) as i64), 2 * (n * k) as i64 - 1);
        let fi = folner_pair(n, k, window, p)?;
        let ev = fi
            .e
            .compose(&fi.v)?
            .sub(&LpOperator::identity(IndexLabel::cyclic(n)))?
            .max_abs();
        let gap = folner_functional_gap(n, k, n as i64, p)?;
        let closed = folner_functional_gap_closed_form(n, k, n as i64, p);
        let td = fi.translation_defect(1)?;
        rep.push_row(vec![
            ("k".to_string(), Value::Int(k as i64)),
            ("gap".to_string(), Value::Float(gap)),
            ("gap_closed_form".to_string(), Value::Float(closed)),
            ("ev_defect".to_string(), Value::Float(ev)),
            ("translation_defect".to_string(), Value::Float(td)),
        ]);
        if ev > 1e-12 {
            rep.violation(format!("EV ≠ I at k = {k}"));
        }
        if (gap - closed).abs() > 1e-12 {
            rep.violation(format!("gap mismatch at k = {k}"));
        }
        if td > 1e-14 {
            rep.violation(format!("translation defect at k = {k}"));
        }
        k *= 2;
    }
    Ok(rep)
}

/// Khintchine ratios by exact sign enumeration.
pub fn khintchine_experiment(cfg: ExpConfig) -> Result<Report> {
    let p = PExponent::new(cfg.p)?;
    let r = cfg.dim.clamp(1, 12);
    let mut rep = Report::new("khintchine");
    rep.param("p", cfg.p)
        .param("r", r)
        .param("trials", cfg.trials)
        .param("seed", cfg.seed as i64);
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    for t in 0..cfg.trials {
        let vs: Vec<Complex64> = (0..r)
            .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
            .collect();
        if vs.iter().all(|v| v.norm() == 0.0) {
            continue;
        }
        let ratio = khintchine_ratio(&vs, p)?;
        rep.push_row(vec![
            ("trial".to_string(), Value::Int(t as i64)),
            ("ratio".to_string(), Value::Float(ratio)),
        ]);
        if cfg.p == 2.0 && (ratio - 1.0).abs() > 1e-12 {
            rep.violation(format!("p = 2 ratio {ratio} deviates from 1 at trial {t}"));
        }
    }
    Ok(rep)
}

/// Quasicentral approximate unit against the circular shift plus a random
/// diagonal; stage defects and the pinching ratios.
pub fn quasicentral_experiment(cfg: ExpConfig) -> Result<Report> {
    let p = PExponent::new(cfg.p)?;
    let n = cfg.dim.max(16);
    let label = IndexLabel::cyclic(n);
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let b = make_shift(ShiftKind::Circular, n);
    let dw: Vec<f64> = (0..n).map(|_| rng.gen_range(0.0..1.0)).collect();
    let d = DiagonalOperator::from_reals(&dw, label.clone())?.to_operator();
    // the circular-shift defect of a ramp of length w is 1/w, so keep each
    // stage's budget above what the dimension can pay for
    let tolerances: Vec<f64> = (0..3)
        .map(|i| (cfg.eps / 2f64.powi(i)).max(2f64.powi(i) * 6.0 / n as f64))
        .collect();
    let mut rep = Report::new("quasicentral");
    rep.param("p", cfg.p)
        .param("dim", n)
        .param("eps", cfg.eps)
        .param("seed", cfg.seed as i64);
    let unit = quasicentral_unit(&[b, d], &tolerances, None, p)?;
    for (i, (stage, defect)) in unit.stages.iter().zip(&unit.defects).enumerate() {
        rep.push_row(vec![
            ("stage".to_string(), Value::Int(i as i64 + 1)),
            ("support".to_string(), Value::Int(stage.support().len() as i64)),
            ("defect".to_string(), Value::Float(*defect)),
            ("tolerance".to_string(), Value::Float(tolerances[i])),
        ]);
        if *defect >= tolerances[i] {
            rep.violation(format!("stage {} defect over tolerance", i + 1));
        }
    }
    let x = random_vector(n, &mut rng, label.clone());
    let zeros = vec![LpVector::zeros(label); unit.stages.len()];
    let (pinch, _) = pinch_check(&unit, &x, &zeros, p)?;
    rep.param("pinch_ratio", pinch);
    if pinch > 2.0 + 1e-9 {
        rep.violation(format!("pinch ratio {pinch} exceeds 2"));
    }
    Ok(rep)
}

/// Greedy quasitridiagonalization of a small operator family.
pub fn tridiagonalize_experiment(cfg: ExpConfig) -> Result<Report> {
    let p = PExponent::new(cfg.p)?;
    let n = cfg.dim.max(8);
    let label = IndexLabel::interval(n);
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let u = make_shift(ShiftKind::Unilateral, n);
    let u3 = u.compose(&u)?.compose(&u)?;
    // banded random member
    let mut banded = LpOperator::zeros(label.clone(), label);
    for i in 0..n {
        for j in i.saturating_sub(2)..=(i + 2).min(n - 1) {
            banded[(i, j)] = Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
        }
    }
    let mut rep = Report::new("tridiagonalize");
    rep.param("p", cfg.p).param("dim", n).param("seed", cfg.seed as i64);
    let res = quasitridiagonalize(&[u3, banded], p)?;
    rep.param("exhausted", res.exhausted);
    for (r, m) in res.decomposition.breakpoints.iter().enumerate() {
        let mut row = vec![
            ("r".to_string(), Value::Int(r as i64)),
            ("breakpoint".to_string(), Value::Int(*m as i64)),
        ];
        if r >= 1 && r - 1 < res.defects.len() {
            row.push(("defect".to_string(), Value::Float(res.defects[r - 1])));
            row.push((
                "tolerance".to_string(),
                Value::Float(0.5f64.powi(r as i32)),
            ));
        }
        rep.push_row(row);
    }
    if !res.exhausted {
        for (i, d) in res.defects.iter().enumerate() {
            if *d > 0.5f64.powi(i as i32 + 1) {
                rep.violation(format!("stage {} defect over its 2^-r budget", i + 1));
            }
        }
    }
    Ok(rep)
}

/// Box cover, partition of unity and intertwiner defects for a random cloud.
pub fn partition_experiment(cfg: ExpConfig) -> Result<Report> {
    let p = PExponent::new(cfg.p)?;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let npts = cfg.dim.clamp(8, 512);
    let pts: Vec<Vec<f64>> = (0..npts)
        .map(|_| vec![rng.gen::<f64>(), rng.gen::<f64>()])
        .collect();
    let mut rep = Report::new("partition");
    rep.param("p", cfg.p)
        .param("points", npts)
        .param("eps", cfg.eps)
        .param("seed", cfg.seed as i64);
    let pu = partition_of_unity(&pts, cfg.eps.max(0.05))?;
    let mut max_mult = 0usize;
    let mut worst_fsum = 0.0f64;
    let mut max_gsum = 0.0f64;
    for v in &pts {
        max_mult = max_mult.max(pu.cover.multiplicity(v));
        let fsum: f64 = (0..pu.r()).map(|i| pu.f(i, v)).sum();
        let gsum: f64 = (0..pu.r()).map(|i| pu.g(i, v)).sum();
        worst_fsum = worst_fsum.max((fsum - 1.0).abs());
        max_gsum = max_gsum.max(gsum);
    }
    rep.push_row(vec![
        ("boxes".to_string(), Value::Int(pu.r() as i64)),
        ("grid_n".to_string(), Value::Int(pu.cover.n as i64)),
        ("max_multiplicity".to_string(), Value::Int(max_mult as i64)),
        ("fsum_defect".to_string(), Value::Float(worst_fsum)),
        ("max_gsum".to_string(), Value::Float(max_gsum)),
    ]);
    if max_mult > 4 {
        rep.violation("multiplicity over 2^d".to_string());
    }
    if worst_fsum > 1e-12 {
        rep.violation("Σf ≠ 1 on samples".to_string());
    }
    if max_gsum > 4.0 + 1e-12 {
        rep.violation("Σg over 2^d".to_string());
    }

    // 1-d intertwiner on a diagonal with the identity test function
    let m = 32usize;
    let weights: Vec<f64> = (0..m).map(|i| i as f64 / (m - 1) as f64).collect();
    let dlab = IndexLabel::interval(m);
    let diag = DiagonalOperator::from_reals(&weights, dlab.clone())?;
    let h = AxisFunction {
        axis: 0,
        f: GridFunction::identity(65),
    };
    let it = partition_intertwiner(
        std::slice::from_ref(&diag),
        std::slice::from_ref(&h),
        cfg.eps.max(0.05),
    )?;
    let ew = it.ew_identity_defect();
    let mut worst_defect = 0.0f64;
    for _ in 0..20 {
        let x = random_vector(m, &mut rng, dlab.clone());
        let defect = it.w_defect(&h, &x, p)?;
        worst_defect = worst_defect.max(defect / x.norm(p));
    }
    rep.push_row(vec![
        ("intertwiner_r".to_string(), Value::Int(it.r() as i64)),
        ("ew_defect".to_string(), Value::Float(ew)),
        ("w_defect_ratio".to_string(), Value::Float(worst_defect)),
    ]);
    if ew > 1e-12 {
        rep.violation("EW ≠ I".to_string());
    }
    if worst_defect > cfg.eps.max(0.05) + 1e-9 {
        rep.violation("intertwining defect over ε".to_string());
    }
    Ok(rep)
}

fn random_tridiagonal(
    dec: &BlockDecomposition,
    rng: &mut impl Rng,
) -> LpOperator {
    let dim = dec.dim();
    let label = dec.label();
    let mut t = LpOperator::zeros(label.clone(), label);
    for i in 0..dim {
        for j in 0..dim {
            if dec.block_of(i).abs_diff(dec.block_of(j)) <= 1 {
                t[(i, j)] = Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
            }
        }
    }
    t
}

/// A family T_1, …, T_{n+n₁} that is constant on the first and last n₁+1
/// slots and interpolates in between (all block-tridiagonal).
fn neutral_family(
    dec: &BlockDecomposition,
    n1: usize,
    rng: &mut impl Rng,
) -> Vec<LpOperator> {
    let n = dec.n_blocks();
    let copies = n + n1;
    let a = random_tridiagonal(dec, rng);
    let b = random_tridiagonal(dec, rng);
    let mut ts = Vec::with_capacity(copies);
    for i in 1..=copies {
        let t = if i <= n1 + 1 {
            0.0
        } else if i >= n {
            1.0
        } else {
            (i - n1 - 1) as f64 / (n - n1 - 1).max(1) as f64
        };
        let ti = a
            .scale(Complex64::new(1.0 - t, 0.0))
            .add(&b.scale(Complex64::new(t, 0.0)))
            .expect("same shape");
        ts.push(ti);
    }
    ts
}

/// Neutral-embedding defect bounds on random tridiagonal families.
pub fn neutral_bounds_experiment(cfg: ExpConfig) -> Result<Report> {
    let p = PExponent::new(cfg.p)?;
    let mut rep = Report::new("neutral-bounds");
    rep.param("p", cfg.p)
        .param("trials", cfg.trials)
        .param("seed", cfg.seed as i64);
    let dec = BlockDecomposition::uniform(2, 4, p);
    let n1 = 2usize;
    let v = LpOperator::identity(dec.label());
    let l = neutral_embed_l(&v, &dec, n1, p)?;
    let r = neutral_project_r(&v, &v, &dec, n1, p)?;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    for t in 0..cfg.trials {
        let ts = neutral_family(&dec, n1, &mut rng);
        let fam = NeutralFamily {
            ts: &ts,
            t_tildes: &ts,
            ks: None,
        };
        let (ed, eb) = embed_defect_check(&l, &v, &dec, n1, &fam, p)?;
        let (pd, pb) = project_defect_check(&r, &v, &dec, n1, &fam, p)?;
        rep.push_row(vec![
            ("trial".to_string(), Value::Int(t as i64)),
            ("embed_defect".to_string(), Value::Float(ed)),
            ("embed_bound".to_string(), Value::Float(eb)),
            ("project_defect".to_string(), Value::Float(pd)),
            ("project_bound".to_string(), Value::Float(pb)),
        ]);
        if ed > eb + 1e-9 {
            rep.violation(format!("embed bound violated at trial {t}"));
        }
        if pd > pb + 1e-9 {
            rep.violation(format!("project bound violated at trial {t}"));
        }
    }
    Ok(rep)
}

/// One feasible similarity splitting with its certificates.
pub fn split_demo_experiment(cfg: ExpConfig) -> Result<Report> {
    let p = PExponent::new(cfg.p)?;
    let n1 = (cfg.dim / 2).clamp(2, 16);
    let n2 = n1 * 2;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let eps = cfg.eps.min(1e-3);
    let mut l = LpOperator::zeros(IndexLabel::interval(n1), IndexLabel::interval(n2));
    for i in 0..n1 {
        l[(i, i)] = Complex64::new(1.0, 0.0);
    }
    let mut r = l.adjoint();
    // small perturbations keep RL − I within ε
    for i in 0..n1 {
        for j in 0..n2 {
            let bump = Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
            r[(i, j)] += bump * (eps / (2.0 * n2 as f64));
        }
    }
    let t1 = make_shift(ShiftKind::Circular, n1);
    let mut t2 = LpOperator::zeros(IndexLabel::interval(n2), IndexLabel::interval(n2));
    for i in 0..n1 {
        for j in 0..n1 {
            t2[(i, j)] = t1[(i, j)];
        }
    }
    for i in n1..n2 {
        for j in n1..n2 {
            t2[(i, j)] = Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
        }
    }
    let beta = 1.0 + eps;
    let res = split_similarity(&l, &r, &t1, &t2, beta, p)?;
    let mut rep = Report::new("split-demo");
    rep.param("p", cfg.p)
        .param("n1", n1)
        .param("n2", n2)
        .param("eps", eps)
        .param("seed", cfg.seed as i64);
    let cap = 7.0 * beta.powi(6) + 1e-6;
    rep.push_row(vec![
        ("condition".to_string(), Value::Float(res.condition)),
        ("condition_cap".to_string(), Value::Float(cap)),
        ("k_norm_upper".to_string(), Value::Float(op_norm_upper(&res.k, p))),
        (
            "k_bound".to_string(),
            Value::Float(res.k_bound.unwrap_or(f64::NAN)),
        ),
        ("q_defect".to_string(), Value::Float(res.q_defect)),
    ]);
    if res.condition > cap {
        rep.violation(format!("condition {} over 7β⁶", res.condition));
    }
    // reconstruction identity
    let lhs = res
        .s
        .compose(&t2.add(&res.k)?)?
        .compose(&res.s_inverse)?;
    let mut rhs = LpOperator::zeros(lhs.domain.clone(), lhs.codomain.clone());
    for i in 0..n1 {
        for j in 0..n1 {
            rhs[(i, j)] = t1[(i, j)];
        }
    }
    for i in 0..n2 {
        for j in 0..n2 {
            rhs[(n1 + i, n1 + j)] = res.t3[(i, j)];
        }
    }
    let recon = lhs.sub(&rhs)?.max_abs();
    rep.param("reconstruction_defect", recon);
    if recon > 1e-10 {
        rep.violation(format!("S(T₂+K)S⁻¹ ≠ T₁⊕T₃ ({recon:.3e})"));
    }
    Ok(rep)
}

/// Staircase family properties and a sample of values.
pub fn staircase_experiment(cfg: ExpConfig) -> Result<Report> {
    let k_hi = cfg.dim.clamp(2, 64);
    let need = 1usize << (usize::BITS - k_hi.leading_zeros() + 1);
    let schedule: Vec<usize> = (1..=need.max(16)).collect();
    let fam = staircase(&schedule, k_hi + 1)?;
    let mut rep = Report::new("staircase");
    rep.param("k_max", k_hi).param("r_end", fam.r_end);
    let r_hi = fam.r_end.max(64);
    let ok = staircase_check(&fam, k_hi, r_hi);
    rep.param("properties_hold", ok.is_ok());
    if let Err(e) = ok {
        rep.violation(e.to_string());
    }
    for k in [1usize, 2, 3, k_hi.min(8)] {
        for r in [1usize, 4, 8, 16, 32] {
            let v = fam.value(k, r);
            rep.push_row(vec![
                ("k".to_string(), Value::Int(k as i64)),
                ("r".to_string(), Value::Int(r as i64)),
                ("t".to_string(), Value::Float(v.value())),
            ]);
        }
    }
    Ok(rep)
}

/// Obstruction inequalities on random grid diagonals.
pub fn diag_obstruction_experiment(cfg: ExpConfig) -> Result<Report> {
    let p = PExponent::new(cfg.p)?;
    let n = cfg.dim.clamp(2, 32);
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let beta = (n as f64).powf((0.5 - 1.0 / cfg.p).abs()) + 0.5;
    let mut rep = Report::new("diag-obstruction");
    rep.param("p", cfg.p)
        .param("n", n)
        .param("beta", beta)
        .param("trials", cfg.trials)
        .param("seed", cfg.seed as i64);
    for t in 0..cfg.trials {
        let ambient = IndexLabel::interval(n);
        let dw: Vec<f64> = (0..n).map(|_| rng.gen_range(0.0..1.0)).collect();
        let d = DiagonalOperator::from_reals(&dw, ambient.clone())?;
        let block = IndexLabel::blocks(vec![n], 2.0);
        let mut l = LpOperator::zeros(block, ambient);
        for i in 0..n {
            l[(i, i)] = Complex64::new(1.0, 0.0);
        }
        let repn = diag_obstruction_check(n, p, beta, &d, &l, cfg.seed ^ t as u64)?;
        rep.push_row(vec![
            ("trial".to_string(), Value::Int(t as i64)),
            ("defect".to_string(), Value::Float(repn.intertwining_defect)),
            ("td1_lhs".to_string(), Value::Float(repn.td1_lhs)),
            ("td1_rhs".to_string(), Value::Float(repn.td1_rhs)),
            ("td2_lhs".to_string(), Value::Float(repn.td2_lhs)),
            ("td2_rhs".to_string(), Value::Float(repn.td2_rhs)),
        ]);
        if repn.td1_lhs > repn.td1_rhs + 1e-9 {
            rep.violation(format!("TD1 fails at trial {t}"));
        }
        if repn.td2_lhs > repn.td2_rhs + 1e-9 {
            rep.violation(format!("TD2 fails at trial {t}"));
        }
    }
    Ok(rep)
}

/// The full property battery at small sizes; one row per check.
pub fn selftest(cfg: ExpConfig) -> Result<Report> {
    let mut rep = Report::new("selftest");
    rep.param("seed", cfg.seed as i64);
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let effort = Effort::light().with_seed(cfg.seed);

    // brackets contain probe ratios, interpolation dominates
    {
        let p = PExponent::new(2.5)?;
        let mut worst_excess = 0.0f64;
        for _ in 0..40 {
            let n = 6 + (rng.gen::<usize>() % 6);
            let label = IndexLabel::interval(n);
            let t = random_operator(n, &mut rng, label.clone());
            let b = op_norm_bounds(&t, p, effort);
            for _ in 0..20 {
                let x = random_vector(n, &mut rng, label.clone());
                let nx = x.norm(p);
                if nx == 0.0 {
                    continue;
                }
                let ratio = t.apply(&x)?.norm(p) / nx;
                worst_excess = worst_excess.max(ratio - b.upper);
            }
        }
        rep.check(
            "bracket-contains-probe-ratios",
            worst_excess <= 1e-9,
            &format!("worst excess {worst_excess:.3e}"),
        );
    }

    // circulant exactness at p = 2
    {
        let p2 = PExponent::two();
        let n = 16;
        let b = make_shift(ShiftKind::Circular, n);
        let binv = b.adjoint();
        let mut ok = true;
        let mut detail = String::new();
        for _ in 0..5 {
            let f = random_laurent(3, &mut rng);
            let fb = laurent_apply(&f, &b, Some(&binv))?;
            let bracket = op_norm_bounds(&fb, p2, effort);
            let spectral = (0..n)
                .map(|j| {
                    f.eval(Complex64::from_polar(
                        1.0,
                        2.0 * std::f64::consts::PI * j as f64 / n as f64,
                    ))
                    .norm()
                })
                .fold(0.0, f64::max);
            if bracket.lower > spectral + 1e-8 || bracket.upper < spectral - 1e-8 {
                ok = false;
                detail = format!(
                    "bracket [{:.9}, {:.9}] misses {:.9}",
                    bracket.lower, bracket.upper, spectral
                );
            }
        }
        rep.check("circulant-exactness-p2", ok, &detail);
    }

    // commutator identity for diagonal against the circular shift
    {
        let p = PExponent::new(3.0)?;
        let n = 12;
        let label = IndexLabel::cyclic(n);
        let mut worst = 0.0f64;
        for _ in 0..10 {
            let w: Vec<f64> = (0..n).map(|_| rng.gen_range(0.0..1.0)).collect();
            let a = DiagonalOperator::from_reals(&w, label.clone())?;
            let upper = commutator_upper(&a.to_operator(), &make_shift(ShiftKind::Circular, n), p);
            let exact = circular_commutator_norm(&a);
            worst = worst.max((upper - exact).abs());
        }
        rep.check(
            "commutator-identity",
            worst <= 1e-12,
            &format!("worst drift {worst:.3e}"),
        );
    }

    // Følner pair identities
    {
        let p = PExponent::new(cfg.p)?;
        let (n, k) = (3usize, 8usize);
        let nk = (n * k) as i64;
        let fi = folner_pair(n, k, (-nk, 2 * nk - 1), p)?;
        let ev = fi
            .e
            .compose(&fi.v)?
            .sub(&LpOperator::identity(IndexLabel::cyclic(n)))?
            .max_abs();
        rep.check("folner-ev-identity", ev <= 1e-12, &format!("defect {ev:.3e}"));
        let td = fi.translation_defect(1)?;
        rep.check("folner-translation", td <= 1e-14, &format!("defect {td:.3e}"));
    }

    // quasicentral unit + pinch on the circular shift
    {
        let p = PExponent::new(cfg.p)?;
        let n = 48;
        let b = make_shift(ShiftKind::Circular, n);
        let unit = quasicentral_unit(&[b], &[0.4, 0.2], None, p)?;
        let ok = unit.defects.iter().zip([0.4, 0.2]).all(|(d, e)| *d < e);
        rep.check("quasicentral-defects", ok, "stage defects under tolerance");
        let x = random_vector(n, &mut rng, IndexLabel::cyclic(n));
        let zeros = vec![LpVector::zeros(IndexLabel::cyclic(n)); unit.stages.len()];
        let (pinch, _) = pinch_check(&unit, &x, &zeros, p)?;
        rep.check(
            "pinch-constant-2",
            pinch <= 2.0 + 1e-9,
            &format!("ratio {pinch:.6}"),
        );
    }

    // tridiagonal compression is a band projection with norm factor ≤ 3
    {
        let p = PExponent::new(cfg.p)?;
        let dec = BlockDecomposition::uniform(2, 4, p);
        let t = random_operator(8, &mut rng, dec.label());
        let c = tridiag_compress(&t, &dec);
        let ok = dec.is_tridiagonal(&c, 0.0)
            && tridiag_compress(&c, &dec).sub(&c)?.max_abs() == 0.0;
        rep.check("compress-band-projection", ok, "idempotent onto the band");
        let ratio = op_norm_upper(&c, p) / op_norm_upper(&t, p).max(1e-12);
        rep.check(
            "compress-norm-factor",
            ratio <= 3.0 + 1e-9,
            &format!("ratio {ratio:.4}"),
        );
    }

    // unconditional bounds
    {
        let p = PExponent::new(cfg.p)?;
        let cs: Vec<Complex64> = (0..3)
            .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
            .collect();
        let (ratio, bound) = u_scalar_bound_check(&cs, 10, 4, p, cfg.seed ^ 0xabc)?;
        rep.check(
            "unconditional-scalar-bound",
            ratio <= bound + 1e-9,
            &format!("ratio {ratio:.6} vs 2·max|c| = {bound:.6}"),
        );
        let p2 = PExponent::two();
        let vs: Vec<Complex64> = (0..4)
            .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
            .collect();
        let kr = khintchine_ratio(&vs, p2)?;
        rep.check(
            "khintchine-p2",
            (kr - 1.0).abs() <= 1e-12,
            &format!("ratio {kr}"),
        );
    }

    // partition of unity invariants
    {
        let pts: Vec<Vec<f64>> = (0..64)
            .map(|_| vec![rng.gen::<f64>(), rng.gen::<f64>()])
            .collect();
        let pu = partition_of_unity(&pts, 0.3)?;
        let mut ok = true;
        for v in &pts {
            let fsum: f64 = (0..pu.r()).map(|i| pu.f(i, v)).sum();
            if (fsum - 1.0).abs() > 1e-12 || pu.cover.multiplicity(v) > 4 {
                ok = false;
            }
        }
        rep.check("partition-of-unity", ok, "Σf = 1 and multiplicity ≤ 2^d");
    }

    // Riesz idempotent on a perturbed projection
    {
        let p2 = PExponent::two();
        let n = 8;
        let label = IndexLabel::interval(n);
        let mut e = LpOperator::zeros(label.clone(), label);
        for i in 0..n / 2 {
            e[(i, i)] = Complex64::new(1.0, 0.0);
        }
        for i in 0..n {
            for j in 0..n {
                e[(i, j)] += Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
                    * 0.002;
            }
        }
        let q = riesz_idempotent(&e, 256, None, p2)?;
        let qq = q.compose(&q)?.sub(&q)?;
        let idem_defect = op_norm_upper(&qq, p2);
        rep.check(
            "riesz-idempotent",
            idem_defect <= 1e-10,
            &format!("‖Q²−Q‖ ≤ {idem_defect:.3e}"),
        );
        let c = op_norm_upper(&e, p2);
        let e2e = op_norm_upper(&e.compose(&e)?.sub(&e)?, p2);
        let eq = op_norm_upper(&e.sub(&q)?, p2);
        rep.check(
            "riesz-distance-bound",
            eq <= 16.0 * (0.5 + c) * e2e + 1e-9,
            &format!("‖E−Q‖ = {eq:.3e} vs 16(1/2+C)ε = {:.3e}", 16.0 * (0.5 + c) * e2e),
        );
    }

    // splitting round-trip
    {
        let demo = split_demo_experiment(ExpConfig { dim: 8, ..cfg })?;
        rep.check(
            "split-similarity",
            demo.violations.is_empty(),
            &demo.violations.join("; "),
        );
    }

    // staircase properties
    {
        let schedule: Vec<usize> = (1..=64).collect();
        let fam = staircase(&schedule, 17)?;
        let ok = staircase_check(&fam, 16, fam.r_end + 8);
        rep.check(
            "staircase-properties",
            ok.is_ok(),
            &ok.err().map(|e| e.to_string()).unwrap_or_default(),
        );
    }

    // obstruction inequalities
    {
        let ob = diag_obstruction_experiment(ExpConfig {
            dim: 8,
            trials: 5,
            ..cfg
        })?;
        rep.check(
            "diag-obstruction",
            ob.violations.is_empty(),
            &ob.violations.join("; "),
        );
    }

    // Fixman floor
    {
        let p = PExponent::new(cfg.p)?;
        let res = fixman_search(p, 2, 16, 4, cfg.seed)?;
        rep.check(
            "fixman-floor",
            res.ratio >= 1.0 - 1e-9,
            &format!("ratio {:.9}", res.ratio),
        );
    }

    // staircase witness: no obstruction at p = 2
    {
        let p2 = PExponent::two();
        let t = crate::obstruction::staircase_witness(4, p2)?;
        let d = DiagonalOperator::new(
            (0..t.rows()).map(|i| t[(i, i)]).collect(),
            t.domain.clone(),
        )?;
        let rows = staircase_witness_report(4, p2, &d, 1.0)?;
        let ok = rows.iter().all(|r| r.w_r <= 1e-12 && r.lower_bound <= 1e-12);
        rep.check("witness-p2-trivial", ok, "w_r = 0 and no bound at p = 2");
    }

    // circle sup sanity for the symbol calculus
    {
        let f = LaurentPolynomial::from_terms(&[
            (0, Complex64::new(1.0, 0.0)),
            (1, Complex64::new(1.0, 0.0)),
        ]);
        let cs = laurent_circle_sup(&f, 4096);
        rep.check(
            "circle-sup-triangle",
            (cs.grid_max - 2.0).abs() <= 1e-9,
            &format!("sup {:.12}", cs.grid_max),
        );
    }

    Ok(rep)
}
