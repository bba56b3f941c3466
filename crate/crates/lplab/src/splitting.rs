//! Riesz idempotents by contour integration, the similarity-splitting
//! construction (an almost-one-sided inverse pair L, R upgrades to an exact
//! direct-sum splitting with condition ≤ 7β⁶), the neutral-embedding
//! intertwiners L and R over a block decomposition, and the dyadic
//! staircase families.

use num_complex::Complex64;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::bracket::{op_norm_bounds, op_norm_upper, Effort};
use crate::error::{Error, Result};
use crate::operator::{LpOperator, LuFactors};
use crate::space::{IndexLabel, LpVector, PExponent};
use crate::tridiag::BlockDecomposition;

/// Q = (2πi)^{−1} ∮_{|z−1|=1/2} (zI−E)^{−1} dz by the trapezoid rule
/// (exponentially accurate for analytic integrands). Dense LU per node.
///
/// Requires upper‖E²−E‖ < 1/16; `c_bound` defaults to the upper bracket of
/// ‖E‖. Errors out if the resolvent blows up on the contour (an eigenvalue
/// within ~1e-8 of it).
pub fn riesz_idempotent(
    e: &LpOperator,
    contour_points: usize,
    c_bound: Option<f64>,
    p: PExponent,
) -> Result<LpOperator> {
    if !e.is_square() {
        return Err(Error::DimensionMismatch("riesz_idempotent on non-square".into()));
    }
    let e2e = e.compose(e)?.sub(e)?;
    let defect = op_norm_upper(&e2e, p);
    if defect >= 1.0 / 16.0 {
        return Err(Error::Precondition(format!(
            "‖E²−E‖ upper = {defect:.6e} ≥ 1/16"
        )));
    }
    let c = c_bound.unwrap_or_else(|| op_norm_upper(e, p));
    // certified lower end (basis probes) must not contradict the declared C
    let n = e.rows();
    let mut col_lower = 0.0f64;
    for j in 0..n {
        let col: Vec<Complex64> = (0..n).map(|i| e[(i, j)]).collect();
        col_lower = col_lower.max(crate::space::lp_norm_slice(&col, p));
    }
    if col_lower > c * (1.0 + 1e-12) {
        return Err(Error::Precondition(format!(
            "‖E‖ ≥ {col_lower:.6e} exceeds the declared C = {c:.6e}"
        )));
    }
    let mut q = LpOperator::zeros(e.domain.clone(), e.codomain.clone());
    for jj in 0..contour_points {
        let th = 2.0 * std::f64::consts::PI * jj as f64 / contour_points as f64;
        let offset = Complex64::from_polar(0.5, th);
        let z = Complex64::new(1.0, 0.0) + offset;
        let mut zi_e = e.scale(Complex64::new(-1.0, 0.0));
        for i in 0..n {
            zi_e[(i, i)] += z;
        }
        let lu = match LuFactors::new(&zi_e) {
            Ok(lu) => lu,
            Err(_) => return Err(Error::SpectralGap { re: z.re, im: z.im }),
        };
        // resolvent columns; contour weight offset/m
        let w = offset / contour_points as f64;
        let mut rhs = vec![Complex64::default(); n];
        let mut col_sum_max = 0.0f64;
        for col in 0..n {
            rhs[col] = Complex64::new(1.0, 0.0);
            let x = lu.solve(&rhs);
            rhs[col] = Complex64::default();
            let csum: f64 = x.iter().map(|v| v.norm()).sum();
            col_sum_max = col_sum_max.max(csum);
            for i in 0..n {
                q[(i, col)] += w * x[i];
            }
        }
        // ‖R(z)‖₁ ≥ dist(z, spectrum)^{-1} up to the usual norm equivalences
        if col_sum_max > 1e8 {
            return Err(Error::SpectralGap { re: z.re, im: z.im });
        }
    }
    Ok(q)
}

/// Outcome of the similarity splitting.
#[derive(Debug, Clone)]
pub struct SplitResult {
    /// S: Y₂ → Y₁ ⊕ Y₃, realized on Y₁ ⊕ Y₂ with Y₃ = range(I−Q) embedded.
    pub s: LpOperator,
    /// S⁻¹: Y₁ ⊕ Y₃ → Y₂ (same embedded realization; S⁻¹S = I exactly).
    pub s_inverse: LpOperator,
    /// T₃ = (I−Q)T₂(I−Q): the complement-block operator in embedded form.
    pub t3: LpOperator,
    /// K = S⁻¹(T₁⊕T₃)S − T₂.
    pub k: LpOperator,
    /// upper‖S‖ · upper‖S⁻¹‖.
    pub condition: f64,
    /// measured upper‖LR − Q‖ (the f(ε) of the idempotent correction)
    pub q_defect: f64,
    /// G(ε,β)(‖T₂‖+1): valid bound for ‖K‖ when the intertwining defects
    /// were within ε; `None` when they were not.
    pub k_bound: Option<f64>,
}

/// Split a near-inverse pair into an exact direct-sum similarity.
///
/// Requires ‖RL−I‖ ≤ ε with ε under the feasibility thresholds
/// (β²+f)f < 1 and (1−ε)/β − β(ε+f) > 0, where f is the measured
/// ‖LR−Q‖ upper bracket, and ‖L‖, ‖R‖ ≤ β.
pub fn split_similarity(
    l: &LpOperator,
    r: &LpOperator,
    t1: &LpOperator,
    t2: &LpOperator,
    beta: f64,
    p: PExponent,
) -> Result<SplitResult> {
    let n1 = l.cols();
    let n2 = l.rows();
    if r.rows() != n1 || r.cols() != n2 {
        return Err(Error::DimensionMismatch("split: R must invert L's shape".into()));
    }
    if t1.rows() != n1 || t1.cols() != n1 || t2.rows() != n2 || t2.cols() != n2 {
        return Err(Error::DimensionMismatch("split: T₁ on Y₁, T₂ on Y₂".into()));
    }
    let effort = Effort::light();
    let bl = op_norm_bounds(l, p, effort);
    let br = op_norm_bounds(r, p, effort);
    if bl.lower > beta * (1.0 + 1e-9) || br.lower > beta * (1.0 + 1e-9) {
        return Err(Error::Feasibility(format!(
            "‖L‖ or ‖R‖ exceeds β = {beta} (lower brackets {:.4}, {:.4})",
            bl.lower, br.lower
        )));
    }
    let id1 = LpOperator::identity(l.domain.clone());
    let rl_defect = op_norm_upper(&r.compose(l)?.sub(&id1)?, p);
    let eps = rl_defect;

    let lr = l.compose(r)?;
    let q = riesz_idempotent(&lr, 256, Some(beta * beta), p)?;
    let f_meas = op_norm_upper(&lr.sub(&q)?, p);

    // feasibility thresholds from the proof, with the measured f
    let thresh1 = (beta * beta + f_meas) * f_meas;
    if thresh1 >= 1.0 {
        return Err(Error::Feasibility(format!(
            "(β²+f)f = {thresh1:.6e} ≥ 1 (QLR stops being invertible on QY₂)"
        )));
    }
    let lower_ql = (1.0 - eps) / beta - beta * (eps + f_meas);
    if lower_ql <= 0.0 {
        return Err(Error::Feasibility(format!(
            "(1−ε)/β − β(ε+f) = {lower_ql:.6e} ≤ 0 (QL not bounded below)"
        )));
    }

    // S in embedded form on Y₁ ⊕ Y₂
    let ql = q.compose(l)?; // N2×N1, injective, range QY₂
    let iq = LpOperator::identity(l.codomain.clone()).sub(&q)?;
    // pinv(QL) via the normal equations (QL is well-conditioned: bounded
    // below by lower_ql)
    let qlh = ql.adjoint();
    let gram = qlh.compose(&ql)?;
    let gram_lu = LuFactors::new(&gram).map_err(|_| {
        Error::Feasibility("QL numerically rank-deficient".into())
    })?;
    // M1 = pinv(QL)·Q : N1×N2
    let qlh_q = qlh.compose(&q)?;
    let mut m1 = LpOperator::zeros(l.codomain.clone(), l.domain.clone());
    let mut col = vec![Complex64::default(); n1];
    for j in 0..n2 {
        for i in 0..n1 {
            col[i] = qlh_q[(i, j)];
        }
        let x = gram_lu.solve(&col);
        for i in 0..n1 {
            m1[(i, j)] = x[i];
        }
    }

    let dom1 = l.domain.block_structure(p.p());
    let dom2 = l.codomain.block_structure(p.p());
    let sum_label = IndexLabel::blocks_with(
        dom1.0.iter().chain(dom2.0.iter()).copied().collect(),
        dom1.1.iter().chain(dom2.1.iter()).copied().collect(),
    );
    // S = [pinv(QL)Q ; I−Q] : Y₂ → Y₁ ⊕ Y₂
    let mut s = LpOperator::zeros(l.codomain.clone(), sum_label.clone());
    for i in 0..n1 {
        for j in 0..n2 {
            s[(i, j)] = m1[(i, j)];
        }
    }
    for i in 0..n2 {
        for j in 0..n2 {
            s[(n1 + i, j)] = iq[(i, j)];
        }
    }
    // S⁻¹ = [QL , I−Q] : Y₁ ⊕ Y₂ → Y₂
    let mut s_inverse = LpOperator::zeros(sum_label.clone(), l.codomain.clone());
    for i in 0..n2 {
        for j in 0..n1 {
            s_inverse[(i, j)] = ql[(i, j)];
        }
        for j in 0..n2 {
            s_inverse[(i, n1 + j)] = iq[(i, j)];
        }
    }

    // T₃ = (I−Q)T₂(I−Q), K = S⁻¹(T₁⊕T₃)S − T₂
    let t3 = iq.compose(t2)?.compose(&iq)?;
    let mut t1_t3 = LpOperator::zeros(sum_label.clone(), sum_label);
    for i in 0..n1 {
        for j in 0..n1 {
            t1_t3[(i, j)] = t1[(i, j)];
        }
    }
    for i in 0..n2 {
        for j in 0..n2 {
            t1_t3[(n1 + i, n1 + j)] = t3[(i, j)];
        }
    }
    let k = s_inverse.compose(&t1_t3)?.compose(&s)?.sub(t2)?;

    let bs = op_norm_bounds(&s, p, effort);
    let bsi = op_norm_bounds(&s_inverse, p, effort);
    let condition = bs.upper * bsi.upper;

    // K-bound from the proof chain, valid when the intertwining defects
    // are within ε
    let d_l = op_norm_upper(&l.compose(t1)?.sub(&t2.compose(l)?)?, p);
    let d_r = op_norm_upper(&t1.compose(r)?.sub(&r.compose(t2)?)?, p);
    let k_bound = if d_l <= eps + 1e-12 && d_r <= eps + 1e-12 {
        let s_bound = (beta * beta + f_meas) / lower_ql + 1.0 + beta * beta + f_meas;
        let g = s_bound
            * ((3.0 * beta * beta + 2.0 * beta + f_meas) * eps + (2.0 * beta + 2.0) * f_meas);
        let t2_norm = op_norm_upper(t2, p);
        Some(g * (t2_norm + 1.0))
    } else {
        None
    };

    Ok(SplitResult {
        s,
        s_inverse,
        t3,
        k,
        condition,
        q_defect: f_meas,
        k_bound,
    })
}

/// Probe-based isometry verification: basis columns and 100 seeded probes
/// must give ratios within 1e-10 of 1.
pub fn verify_isometry(v: &LpOperator, p: PExponent, seed: u64) -> Result<()> {
    let mut worst = 1.0f64;
    let mut check = |x: &LpVector| -> Result<()> {
        let nx = x.norm(p);
        if nx == 0.0 {
            return Ok(());
        }
        let ratio = v.apply(x)?.norm(p) / nx;
        if (ratio - 1.0).abs() > (worst - 1.0).abs() {
            worst = ratio;
        }
        Ok(())
    };
    for j in 0..v.cols() {
        check(&LpVector::basis(j, v.domain.clone()))?;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..100 {
        let x = LpVector::new(
            (0..v.cols())
                .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
                .collect(),
            v.domain.clone(),
        )?;
        check(&x)?;
    }
    if (worst - 1.0).abs() > 1e-10 {
        return Err(Error::NonIsometry(worst));
    }
    Ok(())
}

/// The label of Y^{⊕m} with outer exponent p (m flattened copies of Y).
pub fn power_label(y: &IndexLabel, copies: usize, p: PExponent) -> IndexLabel {
    let (sizes, inner) = y.block_structure(p.p());
    let mut all_sizes = Vec::with_capacity(sizes.len() * copies);
    let mut all_inner = Vec::with_capacity(sizes.len() * copies);
    for _ in 0..copies {
        all_sizes.extend_from_slice(&sizes);
        all_inner.extend_from_slice(&inner);
    }
    IndexLabel::blocks_with(all_sizes, all_inner)
}

/// L x = (n₁+1)^{−1/p} Σ_{j=1}^{n} Σ_{i=j}^{j+n₁} J_i V D_j x — an isometry
/// from Y into Y^{⊕(n+n₁)} when V is one.
pub fn neutral_embed_l(
    v: &LpOperator,
    dec: &BlockDecomposition,
    n1: usize,
    p: PExponent,
) -> Result<LpOperator> {
    verify_isometry(v, p, 0x4c69_736f)?;
    let n = dec.n_blocks();
    let dim = dec.dim();
    if v.rows() != dim || v.cols() != dim {
        return Err(Error::DimensionMismatch("V must act on the decomposed space".into()));
    }
    let copies = n + n1;
    let cod = power_label(&v.codomain, copies, p);
    let amp = ((n1 + 1) as f64).powf(-1.0 / p.p());
    let mut l = LpOperator::zeros(v.domain.clone(), cod);
    for j in 1..=n {
        let range = dec.block_range(j);
        for i in j..=j + n1 {
            let row_off = (i - 1) * dim;
            for gi in 0..dim {
                for gj in range.clone() {
                    l[(row_off + gi, gj)] += v[(gi, gj)] * amp;
                }
            }
        }
    }
    Ok(l)
}

/// R y = (n₁+1)^{−(1−1/p)} Σ_{j=1}^{n} Σ_{i=j}^{j+n₁} D_j E Q_i y — the dual
/// partial-isometry projection from Y^{⊕(n+n₁)} onto Y.
///
/// E must be a surjective partial isometry; `e_right_inverse` certifies it
/// through E·E_right = I.
pub fn neutral_project_r(
    e: &LpOperator,
    e_right_inverse: &LpOperator,
    dec: &BlockDecomposition,
    n1: usize,
    p: PExponent,
) -> Result<LpOperator> {
    let dim = dec.dim();
    if e.rows() != dim || e.cols() != dim {
        return Err(Error::DimensionMismatch("E must act on the decomposed space".into()));
    }
    let id = LpOperator::identity(e.codomain.clone());
    let defect = e.compose(e_right_inverse)?.sub(&id)?.max_abs();
    if defect > 1e-12 {
        return Err(Error::NonPartialIsometry(format!(
            "E·E_right − I has max entry {defect:.3e}"
        )));
    }
    let be = op_norm_bounds(e, p, Effort::light());
    if be.upper > 1.0 + 1e-9 || be.lower < 1.0 - 1e-9 {
        return Err(Error::NonPartialIsometry(format!(
            "‖E‖ bracket [{:.6}, {:.6}] is not pinned at 1",
            be.lower, be.upper
        )));
    }
    let n = dec.n_blocks();
    let copies = n + n1;
    let dom = power_label(&e.domain, copies, p);
    let amp = ((n1 + 1) as f64).powf(-(1.0 - 1.0 / p.p()));
    let mut r = LpOperator::zeros(dom, e.codomain.clone());
    for j in 1..=n {
        let range = dec.block_range(j);
        for i in j..=j + n1 {
            let col_off = (i - 1) * dim;
            for gi in range.clone() {
                for gj in 0..dim {
                    r[(gi, col_off + gj)] += e[(gi, gj)] * amp;
                }
            }
        }
    }
    Ok(r)
}

/// Shared context for the neutral defect bounds.
pub struct NeutralFamily<'a> {
    /// T_1, …, T_{n+n₁} on Y (block-tridiagonal for 1 ≤ j ≤ n)
    pub ts: &'a [LpOperator],
    /// T̃_i with T̃_iV = VT_i (resp. ET̃_i = T_iE on the R side)
    pub t_tildes: &'a [LpOperator],
    /// optional compact corrections, K_1 = … = K_{n₁+1} = 0
    pub ks: Option<&'a [LpOperator]>,
}

fn block_diag_of(ops: &[LpOperator], label: IndexLabel) -> LpOperator {
    let dim = ops[0].rows();
    let mut out = LpOperator::zeros(label.clone(), label);
    for (i, op) in ops.iter().enumerate() {
        let off = i * dim;
        for a in 0..dim {
            for b in 0..dim {
                out[(off + a, off + b)] = op[(a, b)];
            }
        }
    }
    out
}

fn sum_tj_dj(ts: &[LpOperator], dec: &BlockDecomposition) -> Result<LpOperator> {
    let mut acc = LpOperator::zeros(dec.label(), dec.label());
    for j in 1..=dec.n_blocks() {
        let range = dec.block_range(j);
        let masked = ts[j - 1].mask_columns(|c| range.contains(&c));
        acc = acc.add(&masked)?;
    }
    Ok(acc)
}

/// The embed-side defect and its bound (the basic form, no corrections):
/// probe-lower ≤ 12(n₁+1)^{−1/p}·sup‖T_jD_j‖ + 3·sup‖(T_i−T_j)D_j‖.
pub fn embed_defect_check(
    l: &LpOperator,
    v: &LpOperator,
    dec: &BlockDecomposition,
    n1: usize,
    fam: &NeutralFamily,
    p: PExponent,
) -> Result<(f64, f64)> {
    let n = dec.n_blocks();
    let copies = n + n1;
    if fam.ts.len() != copies || fam.t_tildes.len() != copies {
        return Err(Error::DimensionMismatch(format!(
            "need {copies} operators (n+n₁), got {} / {}",
            fam.ts.len(),
            fam.t_tildes.len()
        )));
    }
    let a = sum_tj_dj(fam.ts, dec)?;
    let la = l.compose(&a)?;
    let mut tilde_plus_k: Vec<LpOperator> = fam.t_tildes.to_vec();
    if let Some(ks) = fam.ks {
        for (t, k) in tilde_plus_k.iter_mut().zip(ks) {
            *t = t.add(k)?;
        }
    }
    let big = block_diag_of(&tilde_plus_k, l.codomain.clone());
    let defect = la.sub(&big.compose(l)?)?;
    let probe_lower = op_norm_bounds(&defect, p, Effort::light()).lower;

    let amp = ((n1 + 1) as f64).powf(-1.0 / p.p());
    let mut sup_tjdj = 0.0f64;
    for j in 1..=n {
        let range = dec.block_range(j);
        let m = fam.ts[j - 1].mask_columns(|c| range.contains(&c));
        sup_tjdj = sup_tjdj.max(op_norm_upper(&m, p));
    }
    let mut sup_diff = 0.0f64;
    match fam.ks {
        None => {
            // embedtoneutral1 form: (T_i − T_j)D_j
            for j in 1..=n {
                let range = dec.block_range(j);
                for i in j..=(j + n1) {
                    let d = fam.ts[i - 1]
                        .sub(&fam.ts[j - 1])?
                        .mask_columns(|c| range.contains(&c));
                    sup_diff = sup_diff.max(op_norm_upper(&d, p));
                }
            }
            Ok((probe_lower, 12.0 * amp * sup_tjdj + 3.0 * sup_diff))
        }
        Some(ks) => {
            // embedtoneutral2 form: (T_i − T_j)(I−D_1) and the correction term
            let first = dec.block_range(1);
            for j in 1..=n {
                for i in j..=(j + n1) {
                    let d = fam.ts[i - 1]
                        .sub(&fam.ts[j - 1])?
                        .mask_columns(|c| !first.contains(&c));
                    sup_diff = sup_diff.max(op_norm_upper(&d, p));
                }
            }
            let mut sup_k = 0.0f64;
            for k in ks {
                let kv = k.compose(v)?.mask_columns(|c| !first.contains(&c));
                sup_k = sup_k.max(op_norm_upper(&kv, p));
            }
            let corr = 2.0 * (n as f64) * (n1 as f64) * sup_k;
            Ok((probe_lower, 12.0 * amp * sup_tjdj + 3.0 * sup_diff + corr))
        }
    }
}

/// The project-side defect and its four-term bound (the embed-side bound
/// dualized, plus the block-flip correction):
/// probe-lower ≤ 12(n₁+1)^{−(1−1/p)}·sup‖D_jT_j‖
/// + 3·sup‖(I−D₁)(T_i−T_j)‖ + 2nn₁·sup‖(I−D₁)EK_i‖
/// + 3·sup_{2≤j≤n}(‖(T_{j−1}−T_j)(I−D₁)‖ + ‖(T_{j+1}−T_j)(I−D₁)‖).
pub fn project_defect_check(
    r: &LpOperator,
    e: &LpOperator,
    dec: &BlockDecomposition,
    n1: usize,
    fam: &NeutralFamily,
    p: PExponent,
) -> Result<(f64, f64)> {
    let n = dec.n_blocks();
    let copies = n + n1;
    if fam.ts.len() != copies || fam.t_tildes.len() != copies {
        return Err(Error::DimensionMismatch(format!(
            "need {copies} operators (n+n₁), got {} / {}",
            fam.ts.len(),
            fam.t_tildes.len()
        )));
    }
    let a = sum_tj_dj(fam.ts, dec)?;
    let ar = a.compose(r)?;
    let mut tilde_plus_k: Vec<LpOperator> = fam.t_tildes.to_vec();
    if let Some(ks) = fam.ks {
        for (t, k) in tilde_plus_k.iter_mut().zip(ks) {
            *t = t.add(k)?;
        }
    }
    let big = block_diag_of(&tilde_plus_k, r.domain.clone());
    let defect = ar.sub(&r.compose(&big)?)?;
    let probe_lower = op_norm_bounds(&defect, p, Effort::light()).lower;

    let amp = ((n1 + 1) as f64).powf(-(1.0 - 1.0 / p.p()));
    let first = dec.block_range(1);
    let mut sup_djtj = 0.0f64;
    for j in 1..=n {
        let range = dec.block_range(j);
        let m = fam.ts[j - 1].mask_rows(|i| range.contains(&i));
        sup_djtj = sup_djtj.max(op_norm_upper(&m, p));
    }
    let mut sup_diff = 0.0f64;
    for j in 1..=n {
        for i in j..=(j + n1) {
            let d = fam.ts[i - 1]
                .sub(&fam.ts[j - 1])?
                .mask_rows(|row| !first.contains(&row));
            sup_diff = sup_diff.max(op_norm_upper(&d, p));
        }
    }
    let mut sup_k = 0.0f64;
    if let Some(ks) = fam.ks {
        for k in ks {
            let ek = e.compose(k)?.mask_rows(|row| !first.contains(&row));
            sup_k = sup_k.max(op_norm_upper(&ek, p));
        }
    }
    let mut sup_flip = 0.0f64;
    for j in 2..=n {
        let prev = fam.ts[j - 2]
            .sub(&fam.ts[j - 1])?
            .mask_columns(|c| !first.contains(&c));
        let nxt = if j < copies { &fam.ts[j] } else { &fam.ts[copies - 1] };
        let next = nxt
            .sub(&fam.ts[j - 1])?
            .mask_columns(|c| !first.contains(&c));
        sup_flip = sup_flip.max(op_norm_upper(&prev, p) + op_norm_upper(&next, p));
    }
    let bound = 12.0 * amp * sup_djtj
        + 3.0 * sup_diff
        + 2.0 * (n as f64) * (n1 as f64) * sup_k
        + 3.0 * sup_flip;
    Ok((probe_lower, bound))
}

/// Exact dyadic rational num / 2^log_den in [0, 1].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Dyadic {
    pub num: i64,
    pub log_den: u32,
}

impl Dyadic {
    pub fn new(num: i64, log_den: u32) -> Self {
        Dyadic { num, log_den }
    }

    pub fn zero() -> Self {
        Dyadic { num: 0, log_den: 0 }
    }

    pub fn one() -> Self {
        Dyadic { num: 1, log_den: 0 }
    }

    pub fn value(&self) -> f64 {
        self.num as f64 / (1u64 << self.log_den) as f64
    }

    /// |a − b| ≤ c/d, exactly in integers.
    pub fn diff_le(a: Dyadic, b: Dyadic, c: i64, d: i64) -> bool {
        // |a.num·2^{b.l} − b.num·2^{a.l}| · d ≤ c · 2^{a.l + b.l}
        let lhs = ((a.num as i128) << b.log_den) - ((b.num as i128) << a.log_den);
        lhs.abs() * d as i128 <= (c as i128) << (a.log_den + b.log_den)
    }

    pub fn le(a: Dyadic, b: Dyadic) -> bool {
        ((a.num as i128) << b.log_den) <= ((b.num as i128) << a.log_den)
    }

    pub fn is_zero(&self) -> bool {
        self.num == 0
    }

    pub fn is_one(&self) -> bool {
        self.num == 1 << self.log_den
    }
}

/// The dyadic staircase family t_k(r) of a schedule r(1) < r(2) < …:
/// t_{2^j} ramps from 0 to 1 over [r(2^{j+1}), r(2^{j+1})+2^j] in steps of
/// 2^{−j}, and t_{2^j+s} linearly interpolates t_{2^j} and t_{2^{j+1}}.
#[derive(Debug, Clone)]
pub struct StaircaseFamily {
    pub r_schedule: Vec<usize>,
    pub k_max: usize,
    /// values[k−1][r−1] = t_k(r) for r ≤ r_end
    pub values: Vec<Vec<Dyadic>>,
    pub r_end: usize,
}

impl StaircaseFamily {
    pub fn value(&self, k: usize, r: usize) -> Dyadic {
        assert!(k >= 1 && k <= self.k_max && r >= 1);
        if r <= self.r_end {
            self.values[k - 1][r - 1]
        } else {
            // non-decreasing and already 1 at r_end
            self.values[k - 1][self.r_end - 1]
        }
    }
}

/// r(i) for 1-based index i.
fn sched(r_schedule: &[usize], i: usize) -> usize {
    r_schedule[i - 1]
}

fn t_pow2(r_schedule: &[usize], j: u32, r: usize) -> Dyadic {
    let start = sched(r_schedule, 1 << (j + 1));
    let len = 1i64 << j;
    let num = ((r as i64) - (start as i64)).clamp(0, len);
    Dyadic::new(num, j)
}

/// t_k(r) in exact dyadic arithmetic.
pub fn staircase_value(r_schedule: &[usize], k: usize, r: usize) -> Dyadic {
    assert!(k >= 1);
    let j = usize::BITS - 1 - k.leading_zeros(); // floor(log2 k)
    let s = (k - (1 << j)) as i64;
    let a = t_pow2(r_schedule, j, r); // num/2^j
    if s == 0 {
        return a;
    }
    let b = t_pow2(r_schedule, j + 1, r); // num/2^{j+1}
    // (1 − s/2^j)·a + (s/2^j)·b = ((2^j−s)·a.num·2 + s·b.num) / 2^{2j+1}
    let num = ((1i64 << j) - s) * a.num * 2 + s * b.num;
    Dyadic::new(num, 2 * j + 1)
}

/// Materialize the family for k ≤ k_max; the schedule must reach index
/// 2^{ceil(log2 k_max)+1}.
pub fn staircase(r_schedule: &[usize], k_max: usize) -> Result<StaircaseFamily> {
    if k_max < 1 {
        return Err(Error::Invalid("k_max ≥ 1".into()));
    }
    if r_schedule.windows(2).any(|w| w[0] >= w[1]) || r_schedule.is_empty() || r_schedule[0] < 1 {
        return Err(Error::Invalid(
            "r_schedule must be strictly increasing positive integers".into(),
        ));
    }
    let need = 1usize << (usize::BITS - (k_max.max(2) - 1).leading_zeros() + 1);
    if r_schedule.len() < need {
        return Err(Error::ScheduleTooShort {
            need,
            got: r_schedule.len(),
        });
    }
    // every t_k reaches 1 by max over the js in play
    let mut r_end = 1usize;
    for k in 1..=k_max {
        let j = (usize::BITS - 1 - k.leading_zeros()) as usize;
        let s = k - (1 << j);
        let mut reach = sched(r_schedule, 1 << (j + 1)) + (1 << j);
        if s > 0 {
            reach = reach.max(sched(r_schedule, 1 << (j + 2)) + (1 << (j + 1)));
        }
        r_end = r_end.max(reach + 1);
    }
    let mut values = Vec::with_capacity(k_max);
    for k in 1..=k_max {
        let row: Vec<Dyadic> = (1..=r_end)
            .map(|r| staircase_value(r_schedule, k, r))
            .collect();
        values.push(row);
    }
    Ok(StaircaseFamily {
        r_schedule: r_schedule.to_vec(),
        k_max,
        values,
        r_end,
    })
}

/// Exact verification of the five staircase properties over k ≤ k_hi,
/// r ≤ r_hi (property (i) needs k_hi + 1 ≤ k_max).
pub fn staircase_check(fam: &StaircaseFamily, k_hi: usize, r_hi: usize) -> Result<()> {
    assert!(k_hi < fam.k_max, "need t_{{k+1}} materialized");
    for k in 1..=k_hi {
        let mut reached_one = false;
        for r in 1..=r_hi {
            let cur = fam.value(k, r);
            // values live on the 2^{-k}-grid: num·2^{k−log_den} integral
            if cur.log_den > k as u32 {
                let excess = cur.log_den - k as u32;
                if cur.num & ((1 << excess) - 1) != 0 {
                    return Err(Error::Invalid(format!(
                        "t_{k}({r}) is not a multiple of 2^−{k}"
                    )));
                }
            }
            // (i) |t_{k+1}(r) − t_k(r)| ≤ 2/k
            let nxt = fam.value(k + 1, r);
            if !Dyadic::diff_le(nxt, cur, 2, k as i64) {
                return Err(Error::Invalid(format!(
                    "(i) fails at k = {k}, r = {r}"
                )));
            }
            if r < r_hi {
                let right = fam.value(k, r + 1);
                // (ii) |t_k(r+1) − t_k(r)| ≤ 2/k
                if !Dyadic::diff_le(right, cur, 2, k as i64) {
                    return Err(Error::Invalid(format!(
                        "(ii) fails at k = {k}, r = {r}"
                    )));
                }
                // (iii) non-decreasing in r
                if !Dyadic::le(cur, right) {
                    return Err(Error::Invalid(format!(
                        "(iii) fails at k = {k}, r = {r}"
                    )));
                }
            }
            // (iv) t_k(r) = 0 for r ≤ r(k)
            if r <= sched(&fam.r_schedule, k) && !cur.is_zero() {
                return Err(Error::Invalid(format!(
                    "(iv) fails at k = {k}, r = {r}"
                )));
            }
            if cur.is_one() {
                reached_one = true;
            }
        }
        // (v) eventually 1
        if !(reached_one && fam.value(k, r_hi.max(fam.r_end)).is_one()) {
            return Err(Error::Invalid(format!("(v) fails at k = {k}")));
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::zoo::{make_shift, ShiftKind};

    fn p3() -> PExponent {
        PExponent::new(3.0).unwrap()
    }

    #[test]
    fn riesz_diagonal_example() {
        // near-idempotent diagonal → Q picks the spectrum near 1 exactly
        let e = LpOperator::diagonal(
            &[Complex64::new(0.95, 0.0), Complex64::new(0.02, 0.0)],
            IndexLabel::interval(2),
        )
        .unwrap();
        let q = riesz_idempotent(&e, 256, None, PExponent::two()).unwrap();
        assert!((q[(0, 0)] - Complex64::new(1.0, 0.0)).norm() < 1e-10);
        assert!(q[(1, 1)].norm() < 1e-10);
        assert!(q[(0, 1)].norm() < 1e-12 && q[(1, 0)].norm() < 1e-12);
    }

    #[test]
    fn riesz_fixes_idempotents() {
        // E already idempotent → Q = E
        let e = LpOperator::from_rows_real(
            &[vec![1.0, 0.5], vec![0.0, 0.0]],
            IndexLabel::interval(2),
            IndexLabel::interval(2),
        )
        .unwrap();
        let q = riesz_idempotent(&e, 256, None, PExponent::two()).unwrap();
        assert!(q.sub(&e).unwrap().max_abs() < 1e-12);

        // triangular 2×2 with entries (1, 0.1; 0, 0): its own spectral projection
        let e = LpOperator::from_rows_real(
            &[vec![1.0, 0.1], vec![0.0, 0.0]],
            IndexLabel::interval(2),
            IndexLabel::interval(2),
        )
        .unwrap();
        let q = riesz_idempotent(&e, 256, None, PExponent::two()).unwrap();
        assert!(q.sub(&e).unwrap().max_abs() < 1e-10);
    }

    #[test]
    fn riesz_precondition_guard() {
        let e = LpOperator::diagonal(
            &[Complex64::new(0.5, 0.0)],
            IndexLabel::interval(1),
        )
        .unwrap();
        // ‖E²−E‖ = 0.25 ≥ 1/16
        assert!(matches!(
            riesz_idempotent(&e, 64, None, PExponent::two()),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn split_identity_case() {
        // L = R = I, T₁ = T₂ → Q = I, K = 0, condition 1
        let n = 4;
        let id = LpOperator::identity(IndexLabel::interval(n));
        let t = make_shift(ShiftKind::Unilateral, n);
        let res = split_similarity(&id, &id, &t, &t, 1.0, p3()).unwrap();
        assert!(res.k.max_abs() < 1e-9, "K = {}", res.k.max_abs());
        assert!(res.condition <= 1.0 + 1e-6, "condition {}", res.condition);
        // reconstruction: S(T₂+K)S⁻¹ = T₁ ⊕ T₃
        let lhs = res
            .s
            .compose(&t.add(&res.k).unwrap())
            .unwrap()
            .compose(&res.s_inverse)
            .unwrap();
        // embedded T₁⊕T₃
        let mut rhs = LpOperator::zeros(lhs.domain.clone(), lhs.codomain.clone());
        for i in 0..n {
            for j in 0..n {
                rhs[(i, j)] = t[(i, j)];
                rhs[(n + i, n + j)] = res.t3[(i, j)];
            }
        }
        assert!(lhs.sub(&rhs).unwrap().max_abs() < 1e-10);
    }

    #[test]
    fn split_s_inverse_identities() {
        // S⁻¹S = I on Y₂ exactly; SS⁻¹ is the idempotent onto the realized
        // Y₁ ⊕ Y₃, which fixes every point of range(S)
        let n = 4;
        let id = LpOperator::identity(IndexLabel::interval(n));
        let t = make_shift(ShiftKind::Unilateral, n);
        let res = split_similarity(&id, &id, &t, &t, 1.0, p3()).unwrap();
        let si_s = res.s_inverse.compose(&res.s).unwrap();
        assert!(si_s.sub(&LpOperator::identity(IndexLabel::interval(n))).unwrap().max_abs() < 1e-10);
        let s_si = res.s.compose(&res.s_inverse).unwrap();
        let proj_defect = s_si.compose(&res.s).unwrap().sub(&res.s).unwrap().max_abs();
        assert!(proj_defect < 1e-10, "SS⁻¹ must fix range(S)");
    }

    #[test]
    fn split_coordinate_embedding() {
        // L isometric coordinate embedding into a bigger space, R its left
        // inverse, T₂ block-diagonal → exact split with K = 0
        let n1 = 3;
        let n2 = 5;
        let mut l = LpOperator::zeros(IndexLabel::interval(n1), IndexLabel::interval(n2));
        for i in 0..n1 {
            l[(i, i)] = Complex64::new(1.0, 0.0);
        }
        let r = l.adjoint();
        let t1 = make_shift(ShiftKind::Circular, n1);
        let mut t2 = LpOperator::zeros(IndexLabel::interval(n2), IndexLabel::interval(n2));
        for i in 0..n1 {
            for j in 0..n1 {
                t2[(i, j)] = t1[(i, j)];
            }
        }
        t2[(3, 4)] = Complex64::new(0.7, 0.1);
        t2[(4, 3)] = Complex64::new(-0.2, 0.0);
        let res = split_similarity(&l, &r, &t1, &t2, 1.0, p3()).unwrap();
        assert!(res.k.max_abs() < 1e-9);
        assert!(res.condition <= 7.0 + 1e-6);
        assert!(res.k_bound.is_some());
    }

    #[test]
    fn neutral_embed_is_isometry_and_rl_identity() {
        let p = p3();
        let dec = BlockDecomposition::uniform(2, 3, p);
        let dim = dec.dim();
        let v = LpOperator::identity(dec.label());
        let n1 = 2;
        let l = neutral_embed_l(&v, &dec, n1, p).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(77);
        for _ in 0..100 {
            let x = LpVector::new(
                (0..dim)
                    .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
                    .collect(),
                dec.label(),
            )
            .unwrap();
            let nx = x.norm(p);
            let lx = l.apply(&x).unwrap();
            // codomain norm through the power label
            let nl = lx.norm(p);
            assert!((nl - nx).abs() <= 1e-10 * nx.max(1.0));
        }
        // RL = I with E = V⁻¹ = I
        let r = neutral_project_r(&v, &v, &dec, n1, p).unwrap();
        let rl = r.compose(&l).unwrap();
        let id = LpOperator::identity(dec.label());
        assert!(rl.sub(&id).unwrap().max_abs() <= 1e-12);
        // ‖R‖ bracket contains 1
        let br = op_norm_bounds(&r, p, Effort::light());
        assert!(br.lower <= 1.0 + 1e-9 && br.upper >= 1.0 - 1e-9);
    }

    #[test]
    fn neutral_embed_rejects_non_isometry() {
        let p = p3();
        let dec = BlockDecomposition::uniform(2, 2, p);
        let v = LpOperator::identity(dec.label()).scale(Complex64::new(0.9, 0.0));
        assert!(matches!(
            neutral_embed_l(&v, &dec, 1, p),
            Err(Error::NonIsometry(_))
        ));
    }

    #[test]
    fn n1_one_doubles_coordinates() {
        // n = 1, n₁ = 1, V = I: Lx = 2^{−1/p}(x, x)
        let p = p3();
        let dec = BlockDecomposition::uniform(3, 1, p);
        let v = LpOperator::identity(dec.label());
        let l = neutral_embed_l(&v, &dec, 1, p).unwrap();
        let x = LpVector::from_reals(&[1.0, -2.0, 0.5], dec.label()).unwrap();
        let lx = l.apply(&x).unwrap();
        let amp = 2.0f64.powf(-1.0 / p.p());
        for i in 0..3 {
            assert!((lx.entries[i] - x.entries[i] * amp).norm() < 1e-15);
            assert!((lx.entries[3 + i] - x.entries[i] * amp).norm() < 1e-15);
        }
        // R with E = I averages the two copies with the conjugate weight
        let r = neutral_project_r(&v, &v, &dec, 1, p).unwrap();
        let y = r.apply(&lx).unwrap();
        for i in 0..3 {
            assert!((y.entries[i] - x.entries[i]).norm() < 1e-14);
        }
    }

    #[test]
    fn adjoint_of_embed_is_project_at_conjugate_exponent() {
        // duality: adjoint(L_p) = R_q with E = V^H
        let p = p3();
        let q = p.conjugate();
        let dec_p = BlockDecomposition::uniform(2, 3, p);
        let v = LpOperator::identity(dec_p.label());
        let n1 = 2;
        let l = neutral_embed_l(&v, &dec_p, n1, p).unwrap();
        let dec_q = BlockDecomposition::uniform(2, 3, q);
        let r_q = neutral_project_r(&v.adjoint(), &v.adjoint(), &dec_q, n1, q).unwrap();
        let diff = l.adjoint().sub(&r_q);
        assert!(diff.unwrap().max_abs() <= 1e-12);
    }

    #[test]
    fn staircase_schedule_and_values() {
        // r(k) = k: t_1 is 0 through r(2) = 2, then a ramp of length 1
        let schedule: Vec<usize> = (1..=16).collect();
        let fam = staircase(&schedule, 3).unwrap();
        assert!(fam.value(1, 1).is_zero());
        assert!(fam.value(1, 2).is_zero());
        assert!(fam.value(1, 3).is_one());
        assert!(fam.value(1, 10).is_one());
        // every t_k(1) = 0
        for k in 1..=3 {
            assert!(fam.value(k, 1).is_zero());
        }
    }

    #[test]
    fn staircase_properties_small() {
        let schedule: Vec<usize> = (1..=64).collect();
        let fam = staircase(&schedule, 9).unwrap();
        staircase_check(&fam, 8, 200).unwrap();
    }

    #[test]
    fn staircase_schedule_too_short() {
        let schedule: Vec<usize> = (1..=7).collect();
        assert!(matches!(
            staircase(&schedule, 5),
            Err(Error::ScheduleTooShort { .. })
        ));
    }
}
