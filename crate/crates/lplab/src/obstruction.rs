//! Numerical witnesses that l^p (p ≠ 2) is genuinely different from l²:
//! the symbol-norm excess of circulant models (‖f(B_N)‖_p can exceed the
//! circle sup of |f|) and the diagonal-similarity obstruction inequalities.

use num_complex::Complex64;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::bracket::{op_norm_bounds, op_norm_upper, Effort};
use crate::error::{Error, Result};
use crate::operator::LpOperator;
use crate::space::{IndexLabel, LpVector, PExponent};
use crate::zoo::{circulant_from_symbol, laurent_circle_sup, DiagonalOperator, LaurentPolynomial};

/// Outcome of the symbol-excess search.
#[derive(Debug, Clone)]
pub struct FixmanResult {
    pub best: LaurentPolynomial,
    /// lower‖f(B_N)‖_p / circle-sup(f) of the best candidate
    pub ratio: f64,
    /// best ratio after each refinement round (non-decreasing)
    pub per_round: Vec<f64>,
    pub grid_size: usize,
}

fn random_polynomial(d: usize, rng: &mut impl Rng) -> LaurentPolynomial {
    let coeffs: Vec<Complex64> = (0..2 * d + 1)
        .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
        .collect();
    LaurentPolynomial::new(coeffs, d).expect("coefficient count")
}

fn random_unimodular(d: usize, rng: &mut impl Rng) -> LaurentPolynomial {
    let coeffs: Vec<Complex64> = (0..2 * d + 1)
        .map(|_| Complex64::from_polar(1.0, rng.gen_range(0.0..std::f64::consts::TAU)))
        .collect();
    LaurentPolynomial::new(coeffs, d).expect("coefficient count")
}

/// Search for Laurent symbols maximizing lower‖f(B_N)‖ / sup|f| at the
/// given exponent. Candidates: random complex coefficients, random-phase
/// unimodular coefficients, the monomial z, the previous best and its
/// square; the pool always contains the previous best, so the per-round
/// ratios never decrease.
pub fn fixman_search(
    p: PExponent,
    degree: usize,
    n_circ: usize,
    trials: usize,
    seed: u64,
) -> Result<FixmanResult> {
    if n_circ < 4 * degree.max(1) {
        return Err(Error::Precondition(format!(
            "circulant size {n_circ} < 4d = {}",
            4 * degree
        )));
    }
    if trials == 0 {
        return Err(Error::Precondition("trials ≥ 1".into()));
    }
    // grid divisible by N so the N-th roots are grid points
    let grid_size = n_circ * (4096usize.div_ceil(n_circ)).max(32);
    let effort = Effort {
        restarts: 4,
        iterations: 120,
        ..Effort::default()
    }
    .with_seed(seed ^ 0xf1c);

    let evaluate = |f: &LaurentPolynomial| -> Result<f64> {
        let sup = laurent_circle_sup(f, grid_size).grid_max;
        if sup == 0.0 {
            return Ok(0.0);
        }
        let fb = circulant_from_symbol(f, n_circ);
        let bracket = op_norm_bounds(&fb, p, effort);
        Ok(bracket.lower / sup)
    };

    let rounds = 4usize;
    let per_round_trials = trials.div_ceil(rounds);
    let mut best_poly = LaurentPolynomial::monomial(1);
    let mut best_ratio = evaluate(&best_poly)?;
    let mut per_round = Vec::with_capacity(rounds);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..rounds {
        let mut candidates: Vec<LaurentPolynomial> = vec![best_poly.clone()];
        if 2 * best_poly.degree() <= degree && best_poly.degree() >= 1 {
            candidates.push(best_poly.mul(&best_poly));
        }
        for t in 0..per_round_trials {
            if t % 2 == 0 {
                candidates.push(random_polynomial(degree, &mut rng));
            } else {
                candidates.push(random_unimodular(degree, &mut rng));
            }
        }
        for f in candidates {
            let ratio = evaluate(&f)?;
            if ratio > best_ratio {
                best_ratio = ratio;
                best_poly = f;
            }
        }
        per_round.push(best_ratio);
    }
    Ok(FixmanResult {
        best: best_poly,
        ratio: best_ratio,
        per_round,
        grid_size,
    })
}

/// Both sides of the diagonal-similarity obstruction inequalities for the
/// model intertwining DL ≈ LT with T = diag(1/n, …, n/n) on an l²-normed
/// block.
#[derive(Debug, Clone, Copy)]
pub struct DiagObstructionReport {
    pub n: usize,
    /// upper bracket of ‖DL − LT‖ (domain l², codomain ambient l^p)
    pub intertwining_defect: f64,
    /// β⁻¹√n ≤ (2/ε)‖DL−LT‖n + βn^{1/p}
    pub td1_lhs: f64,
    pub td1_rhs: f64,
    /// β⁻¹n^{1/p} ≤ (4/ε)‖DL−LT‖n + β√n
    pub td2_lhs: f64,
    pub td2_rhs: f64,
}

/// Check the two obstruction inequalities. T is the staircase diagonal with
/// gap ε = 1/n on an l²([1,n]) block; L: l²([1,n]) → ambient l^p must have
/// probe distortion within the declared β.
pub fn diag_obstruction_check(
    n: usize,
    p: PExponent,
    beta: f64,
    d: &DiagonalOperator,
    l: &LpOperator,
    seed: u64,
) -> Result<DiagObstructionReport> {
    if l.cols() != n || l.rows() != d.dim() {
        return Err(Error::DimensionMismatch(
            "L maps the n-block into D's space".into(),
        ));
    }
    let block = IndexLabel::blocks(vec![n], 2.0);
    if l.domain != block {
        return Err(Error::Precondition(
            "L's domain must be the l²-normed block".into(),
        ));
    }
    // probe distortion against β
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst: f64 = 1.0;
    for j in 0..n {
        let x = LpVector::basis(j, block.clone());
        let ratio = l.apply(&x)?.norm(p) / x.norm(p);
        worst = worst.max(ratio).max(1.0 / ratio);
    }
    for _ in 0..50 {
        let x = LpVector::new(
            (0..n)
                .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
                .collect(),
            block.clone(),
        )?;
        let nx = x.norm(p);
        if nx == 0.0 {
            continue;
        }
        let ratio = l.apply(&x)?.norm(p) / nx;
        worst = worst.max(ratio).max(1.0 / ratio);
    }
    if worst > beta * (1.0 + 1e-9) {
        return Err(Error::LDistortion {
            found: worst,
            beta,
        });
    }

    let t_weights: Vec<Complex64> = (1..=n)
        .map(|i| Complex64::new(i as f64 / n as f64, 0.0))
        .collect();
    let t = LpOperator::diagonal(&t_weights, block).expect("diagonal block");
    let d_op = d.to_operator();
    let dl = d_op.compose(l)?;
    let lt = l.compose(&t)?;
    let defect = op_norm_upper(&dl.sub(&lt)?, p);

    let eps = 1.0 / n as f64;
    let sqrt_n = (n as f64).sqrt();
    let n_inv_p = (n as f64).powf(1.0 / p.p());
    Ok(DiagObstructionReport {
        n,
        intertwining_defect: defect,
        td1_lhs: sqrt_n / beta,
        td1_rhs: 2.0 / eps * defect * n as f64 + beta * n_inv_p,
        td2_lhs: n_inv_p / beta,
        td2_rhs: 4.0 / eps * defect * n as f64 + beta * sqrt_n,
    })
}

/// T = ⊕_{r=1}^{r_max} diag(1/r, …, r/r) on (⊕ l²([1,r]))_{l^p}.
pub fn staircase_witness(r_max: usize, _p: PExponent) -> Result<LpOperator> {
    if r_max < 1 {
        return Err(Error::Precondition("r_max ≥ 1".into()));
    }
    let sizes: Vec<usize> = (1..=r_max).collect();
    let label = IndexLabel::blocks(sizes, 2.0);
    let mut weights = Vec::with_capacity(label.len());
    for r in 1..=r_max {
        for i in 1..=r {
            weights.push(Complex64::new(i as f64 / r as f64, 0.0));
        }
    }
    LpOperator::diagonal(&weights, label)
}

/// One row of the staircase-witness experiment: the measured intertwining
/// defect w_r for the r-th block against the best divisor-driven lower
/// bound implied by the obstruction inequalities.
#[derive(Debug, Clone, Copy)]
pub struct WitnessRow {
    pub r: usize,
    /// upper bracket of ‖D(LJ_r) − (LJ_r)T_r‖
    pub w_r: f64,
    /// max over divisors n | r of the two implied lower bounds on w_r
    pub lower_bound: f64,
}

/// The defect-decay experiment behind the two-trivial-extensions example:
/// D is a grid diagonal on the ambient space, L the formal identity, and
/// w_r cannot tend to 0 with bounded distortion unless p = 2.
pub fn staircase_witness_report(
    r_max: usize,
    p: PExponent,
    d_ambient: &DiagonalOperator,
    beta: f64,
) -> Result<Vec<WitnessRow>> {
    let t = staircase_witness(r_max, p)?;
    let dim = t.rows();
    if d_ambient.dim() != dim {
        return Err(Error::DimensionMismatch(
            "ambient diagonal must match the witness space".into(),
        ));
    }
    let d_op = d_ambient.to_operator();
    let mut rows = Vec::with_capacity(r_max);
    let mut offset = 0usize;
    for r in 1..=r_max {
        // L J_r: the formal identity of the r-th block into the ambient space
        let block = IndexLabel::blocks(vec![r], 2.0);
        let mut lj = LpOperator::zeros(block.clone(), d_ambient.label.clone());
        for i in 0..r {
            lj[(offset + i, i)] = Complex64::new(1.0, 0.0);
        }
        let t_r_weights: Vec<Complex64> = (1..=r)
            .map(|i| Complex64::new(i as f64 / r as f64, 0.0))
            .collect();
        let t_r = LpOperator::diagonal(&t_r_weights, block)?;
        let w_r = op_norm_upper(&d_op.compose(&lj)?.sub(&lj.compose(&t_r)?)?, p);
        let mut lower = 0.0f64;
        for n in 1..=r {
            if r % n != 0 {
                continue;
            }
            let sqrt_n = (n as f64).sqrt();
            let n_inv_p = (n as f64).powf(1.0 / p.p());
            let n2 = (n * n) as f64;
            lower = lower
                .max((sqrt_n / beta - beta * n_inv_p) / (2.0 * n2))
                .max((n_inv_p / beta - beta * sqrt_n) / (4.0 * n2));
        }
        rows.push(WitnessRow {
            r,
            w_r,
            lower_bound: lower,
        });
        offset += r;
    }
    Ok(rows)
}
