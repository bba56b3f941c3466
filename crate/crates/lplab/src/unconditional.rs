//! The signed-average direct sum (·)_u^{⊕r}: r-tuples normed by
//! E‖Σ δ_i y_i‖ over uniform ±1 signs, with the Khintchine/Kahane substrate
//! and the operator bounds used to control homomorphisms into u-spaces.
//!
//! Operator norms on u-spaces have no closed form here; they are reported as
//! best-probe lower values against structural upper bounds, never as
//! certified brackets.

use num_complex::Complex64;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::bracket::{op_norm_bounds, op_norm_upper, Effort};
use crate::error::{Error, Result};
use crate::operator::LpOperator;
use crate::space::{lp_norm_slice, IndexLabel, LpVector, PExponent};

/// Exact sign enumeration cap: 2^14 patterns.
pub const EXACT_SIGN_LIMIT: usize = 14;

/// An element of Y_u^{⊕r}: r vectors over a common labeled space.
#[derive(Debug, Clone)]
pub struct SignedSumElement {
    pub components: Vec<LpVector>,
}

impl SignedSumElement {
    pub fn new(components: Vec<LpVector>) -> Result<Self> {
        if components.is_empty() {
            return Err(Error::EmptyFamily);
        }
        let label = &components[0].label;
        if components.iter().any(|c| &c.label != label) {
            return Err(Error::DimensionMismatch(
                "signed sum components need a common label".into(),
            ));
        }
        Ok(SignedSumElement { components })
    }

    pub fn r(&self) -> usize {
        self.components.len()
    }

    pub fn dim(&self) -> usize {
        self.components[0].dim()
    }

    pub fn label(&self) -> &IndexLabel {
        &self.components[0].label
    }

    /// Σ δ_i y_i for a fixed sign pattern (bit i of `mask` set ⇒ δ_i = −1).
    pub fn signed_sum(&self, mask: usize) -> Vec<Complex64> {
        let mut acc = vec![Complex64::default(); self.dim()];
        for (i, y) in self.components.iter().enumerate() {
            let s = if mask & (1 << i) != 0 { -1.0 } else { 1.0 };
            for (a, b) in acc.iter_mut().zip(&y.entries) {
                *a += b * s;
            }
        }
        acc
    }
}

#[derive(Debug, Clone, Copy)]
pub enum UNormMode {
    Exact,
    MonteCarlo { samples: usize, seed: u64 },
}

#[derive(Debug, Clone, Copy)]
pub struct UNormValue {
    pub value: f64,
    /// standard error of the sample mean, Monte-Carlo mode only
    pub std_error: Option<f64>,
}

/// ‖y‖_u = E‖Σ δ_i y_i‖ — exact over all 2^r sign vectors (r ≤ 14) or by
/// Monte-Carlo sampling with a reported standard error.
pub fn u_norm(y: &SignedSumElement, p: PExponent, mode: UNormMode) -> Result<UNormValue> {
    let r = y.r();
    match mode {
        UNormMode::Exact => {
            if r > EXACT_SIGN_LIMIT {
                return Err(Error::TooManySigns {
                    limit: EXACT_SIGN_LIMIT,
                    got: r,
                });
            }
            let total = 1usize << r;
            let mut acc = 0.0;
            for mask in 0..total {
                acc += lp_norm_slice(&y.signed_sum(mask), p);
            }
            Ok(UNormValue {
                value: acc / total as f64,
                std_error: None,
            })
        }
        UNormMode::MonteCarlo { samples, seed } => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut sum = 0.0;
            let mut sumsq = 0.0;
            for _ in 0..samples {
                let mask: usize = rng.gen::<usize>() & ((1usize << r.min(63)) - 1);
                let v = lp_norm_slice(&y.signed_sum(mask), p);
                sum += v;
                sumsq += v * v;
            }
            let mean = sum / samples as f64;
            let var = (sumsq / samples as f64 - mean * mean).max(0.0);
            Ok(UNormValue {
                value: mean,
                std_error: Some((var / samples as f64).sqrt()),
            })
        }
    }
}

/// sup over sign vectors δ of upper‖(Σ δ_i T_i)|_{Y₀}‖ where Y₀ is the span
/// of the given coordinate subset (columns restricted).
pub fn sign_sup_norm_upper(
    ts: &[LpOperator],
    subspace: Option<&[usize]>,
    p: PExponent,
) -> Result<f64> {
    let r = ts.len();
    if r == 0 {
        return Err(Error::EmptyFamily);
    }
    if r > EXACT_SIGN_LIMIT {
        return Err(Error::TooManySigns {
            limit: EXACT_SIGN_LIMIT,
            got: r,
        });
    }
    let mut sup: f64 = 0.0;
    for mask in 0..(1usize << r) {
        let mut acc = ts[0].scale(Complex64::new(if mask & 1 != 0 { -1.0 } else { 1.0 }, 0.0));
        for (i, t) in ts.iter().enumerate().skip(1) {
            let s = if mask & (1 << i) != 0 { -1.0 } else { 1.0 };
            acc = acc.add(&t.scale(Complex64::new(s, 0.0)))?;
        }
        let restricted = match subspace {
            Some(cols) => acc.mask_columns(|j| cols.contains(&j)),
            None => acc,
        };
        sup = sup.max(op_norm_upper(&restricted, p));
    }
    Ok(sup)
}

/// Random element of Y_u^{⊕r} over the plain space of dimension `dim`.
pub fn random_signed_element(
    r: usize,
    dim: usize,
    rng: &mut impl Rng,
    label: IndexLabel,
) -> SignedSumElement {
    let components = (0..r)
        .map(|_| {
            let entries = (0..dim)
                .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
                .collect();
            LpVector::new(entries, label.clone()).expect("shape")
        })
        .collect();
    SignedSumElement { components }
}

/// (best probe ratio u‖(c₁y₁,…,c_ry_r)‖/u‖y‖, 2·max|c_i|), first ≤ second.
/// For real c in [−1,1]^r the ratio is also ≤ 1 (convexity of the sign cube).
pub fn u_scalar_bound_check(
    cs: &[Complex64],
    probes: usize,
    dim: usize,
    p: PExponent,
    seed: u64,
) -> Result<(f64, f64)> {
    let r = cs.len();
    if r == 0 {
        return Err(Error::EmptyFamily);
    }
    if r > 12 {
        return Err(Error::TooManySigns { limit: 12, got: r });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let label = IndexLabel::interval(dim);
    let mut best = 0.0f64;
    for _ in 0..probes {
        let y = random_signed_element(r, dim, &mut rng, label.clone());
        let denom = u_norm(&y, p, UNormMode::Exact)?.value;
        if denom == 0.0 {
            continue;
        }
        let scaled = SignedSumElement {
            components: y
                .components
                .iter()
                .zip(cs)
                .map(|(v, c)| v.scale(*c))
                .collect(),
        };
        let num = u_norm(&scaled, p, UNormMode::Exact)?.value;
        best = best.max(num / denom);
    }
    let bound = 2.0 * cs.iter().map(|c| c.norm()).fold(0.0, f64::max);
    Ok((best, bound))
}

/// (best probe ratio of (T⊕…⊕T)_u, upper‖T‖): the u-operator has norm
/// exactly ‖T‖; the diagonal probe (y,…,y) with y a norm witness attains it.
pub fn u_repeat_norm_check(
    t: &LpOperator,
    r: usize,
    probes: usize,
    p: PExponent,
    seed: u64,
) -> Result<(f64, f64)> {
    if r > 12 {
        return Err(Error::TooManySigns { limit: 12, got: r });
    }
    let bracket = op_norm_bounds(t, p, Effort::light().with_seed(seed));
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x9e37_79b9);
    let label = t.domain.clone();
    let dim = t.cols();
    let mut best = 0.0f64;
    let eval = |y: &SignedSumElement| -> Result<f64> {
        let denom = u_norm(y, p, UNormMode::Exact)?.value;
        if denom == 0.0 {
            return Ok(0.0);
        }
        let image = SignedSumElement {
            components: y
                .components
                .iter()
                .map(|v| t.apply(v))
                .collect::<Result<Vec<_>>>()?,
        };
        Ok(u_norm(&image, p, UNormMode::Exact)?.value / denom)
    };
    for _ in 0..probes {
        let y = random_signed_element(r, dim, &mut rng, label.clone());
        best = best.max(eval(&y)?);
    }
    // diagonal probe with the bracket witness
    let w = LpVector::new(bracket.witness.clone(), label)?;
    if w.norm(p) > 0.0 {
        let y = SignedSumElement {
            components: vec![w; r],
        };
        best = best.max(eval(&y)?);
    }
    Ok((best, bracket.upper))
}

/// (E|Σ δ_i v_i|^p)^{1/p} / (Σ|v_i|²)^{1/2} by exact sign enumeration.
pub fn khintchine_ratio(vs: &[Complex64], p: PExponent) -> Result<f64> {
    let r = vs.len();
    if r > EXACT_SIGN_LIMIT {
        return Err(Error::TooManySigns {
            limit: EXACT_SIGN_LIMIT,
            got: r,
        });
    }
    let l2: f64 = vs.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt();
    if l2 == 0.0 {
        return Err(Error::ZeroVector("khintchine_ratio"));
    }
    let total = 1usize << r;
    let mut acc = 0.0;
    for mask in 0..total {
        let mut s = Complex64::default();
        for (i, v) in vs.iter().enumerate() {
            let sign = if mask & (1 << i) != 0 { -1.0 } else { 1.0 };
            s += v * sign;
        }
        acc += s.norm().powf(p.p());
    }
    Ok((acc / total as f64).powf(1.0 / p.p()) / l2)
}

/// Brute-forced Khintchine constant at (p, r ≤ r_max): the largest two-sided
/// distortion max(ratio, 1/ratio) over real grid vectors.
pub fn khintchine_constant(p: PExponent, r_max: usize, grid: usize) -> f64 {
    let levels: Vec<f64> = (0..=grid).map(|i| i as f64 / grid as f64).collect();
    let mut worst = 1.0f64;
    for r in 1..=r_max.min(4) {
        let mut idx = vec![0usize; r];
        loop {
            let vs: Vec<Complex64> = idx
                .iter()
                .map(|&i| Complex64::new(levels[i], 0.0))
                .collect();
            if vs.iter().any(|v| v.norm() > 0.0) {
                let ratio = khintchine_ratio(&vs, p).expect("nonzero grid vector");
                worst = worst.max(ratio).max(1.0 / ratio);
            }
            // advance the multi-index
            let mut k = 0;
            loop {
                idx[k] += 1;
                if idx[k] <= grid {
                    break;
                }
                idx[k] = 0;
                k += 1;
                if k == r {
                    break;
                }
            }
            if k == r {
                break;
            }
        }
    }
    worst
}

/// Brute-forced Kahane constant at (p, r ≤ 3): the largest ratio
/// (E‖Σδy‖^p)^{1/p} / E‖Σδy‖ over grid tuples of short vectors (≥ 1 by
/// Jensen).
pub fn kahane_constant(p: PExponent, r_max: usize, grid: usize) -> f64 {
    let levels: Vec<f64> = (0..=grid).map(|i| 2.0 * i as f64 / grid as f64 - 1.0).collect();
    let label = IndexLabel::interval(2);
    let mut worst = 1.0f64;
    let r = r_max.min(3);
    // each component vector ranges over levels² ⊂ ℝ²
    let m = levels.len();
    let total = (m * m).pow(r as u32);
    for code in 0..total {
        let mut c = code;
        let mut comps = Vec::with_capacity(r);
        for _ in 0..r {
            let a = levels[c % m];
            c /= m;
            let b = levels[c % m];
            c /= m;
            comps.push(LpVector::from_reals(&[a, b], label.clone()).unwrap());
        }
        let y = SignedSumElement { components: comps };
        let mean = u_norm(&y, p, UNormMode::Exact).unwrap().value;
        if mean == 0.0 {
            continue;
        }
        let total_masks = 1usize << r;
        let mut acc = 0.0;
        for mask in 0..total_masks {
            acc += lp_norm_slice(&y.signed_sum(mask), p).powf(p.p());
        }
        let lp_mean = (acc / total_masks as f64).powf(1.0 / p.p());
        worst = worst.max(lp_mean / mean);
    }
    worst
}

/// The coordinate-slicing comparison S y = (S₁y, S₂y, …) with
/// S_n y = (e_n^*(y₁), …, e_n^*(y_r)) ∈ l²(r), measured in (⊕ l²(r))_{l^p}.
/// Returns ‖Sy‖/‖y‖_u together with the allowed [C^{−2}, C²] window from the
/// brute-forced Khintchine–Kahane constant.
#[derive(Debug, Clone, Copy)]
pub struct DistortionReport {
    pub value: f64,
    pub lower_allowed: f64,
    pub upper_allowed: f64,
}

pub fn s_isomorphism_distortion(
    y: &SignedSumElement,
    p: PExponent,
    constant: f64,
) -> Result<DistortionReport> {
    let r = y.r();
    if r > 12 {
        return Err(Error::TooManySigns { limit: 12, got: r });
    }
    let dim = y.dim();
    let denom = u_norm(y, p, UNormMode::Exact)?.value;
    if denom == 0.0 {
        return Err(Error::ZeroVector("s_isomorphism_distortion"));
    }
    // ‖Sy‖ = (Σ_n ‖(y_1(n), …, y_r(n))‖_2^p)^{1/p}
    let mut acc = 0.0;
    for n in 0..dim {
        let sq: f64 = y.components.iter().map(|c| c.entries[n].norm_sqr()).sum();
        acc += sq.sqrt().powf(p.p());
    }
    let value = acc.powf(1.0 / p.p()) / denom;
    Ok(DistortionReport {
        value,
        lower_allowed: constant.powi(-2),
        upper_allowed: constant.powi(2),
    })
}

/// The interchange bounds: (‖Σ T_i y_i‖, sign-sup·‖y‖_u) and the
/// componentwise variant ‖(T₁y₁,…,T_ry_r)‖_u ≤ sign-sup·‖y‖_u.
#[derive(Debug, Clone, Copy)]
pub struct InterchangeReport {
    pub sum_norm: f64,
    pub componentwise_u_norm: f64,
    pub bound: f64,
}

pub fn u_interchange_bound(
    ts: &[LpOperator],
    y: &SignedSumElement,
    subspace: Option<&[usize]>,
    p: PExponent,
) -> Result<InterchangeReport> {
    let r = ts.len();
    if r != y.r() {
        return Err(Error::DimensionMismatch(
            "one operator per signed component".into(),
        ));
    }
    if let Some(cols) = subspace {
        // components must be supported on the subspace
        for (i, c) in y.components.iter().enumerate() {
            for (j, z) in c.entries.iter().enumerate() {
                if z.norm() != 0.0 && !cols.contains(&j) {
                    return Err(Error::Precondition(format!(
                        "component {i} not supported on the declared subspace (coordinate {j})"
                    )));
                }
            }
        }
    }
    let u = u_norm(y, p, UNormMode::Exact)?.value;
    let sup = sign_sup_norm_upper(ts, subspace, p)?;
    let mut sum = vec![Complex64::default(); ts[0].rows()];
    let mut images = Vec::with_capacity(r);
    for (t, c) in ts.iter().zip(&y.components) {
        let img = t.apply(c)?;
        for (a, b) in sum.iter_mut().zip(&img.entries) {
            *a += b;
        }
        images.push(img);
    }
    let sum_norm = lp_norm_slice(&sum, p);
    let comp = SignedSumElement { components: images };
    let comp_u = u_norm(&comp, p, UNormMode::Exact)?.value;
    Ok(InterchangeReport {
        sum_norm,
        componentwise_u_norm: comp_u,
        bound: sup * u,
    })
}
