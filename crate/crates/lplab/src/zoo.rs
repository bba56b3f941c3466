//! Canonical operators: shifts, circulants, diagonal operators, and the
//! Laurent symbol calculus with winding-number index bookkeeping.
//!
//! Index convention: index(f) := −winding(f, 0), so the unilateral shift
//! (symbol z) has Fredholm index −1.

use num_complex::Complex64;

use crate::bracket::op_norm_upper;
use crate::error::{Error, Result};
use crate::operator::LpOperator;
use crate::space::{IndexLabel, PExponent};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ShiftKind {
    /// e_n ↦ e_{n+1} on [1, N], e_N ↦ 0.
    Unilateral,
    /// e_n ↦ e_{n−1} on [1, N], e_1 ↦ 0.
    Backward,
    /// Nilpotent truncation of the bilateral shift to a window of ℤ.
    BilateralWindow,
    /// Cyclic permutation on ℤ/nℤ: e_j ↦ e_{j+1}.
    Circular,
}

/// The 0/1 matrix of the named shift.
pub fn make_shift(kind: ShiftKind, size: usize) -> LpOperator {
    assert!(size >= 1);
    let one = Complex64::new(1.0, 0.0);
    match kind {
        ShiftKind::Unilateral => {
            let label = IndexLabel::interval(size);
            let mut t = LpOperator::zeros(label.clone(), label);
            for j in 0..size.saturating_sub(1) {
                t[(j + 1, j)] = one;
            }
            t
        }
        ShiftKind::Backward => {
            let label = IndexLabel::interval(size);
            let mut t = LpOperator::zeros(label.clone(), label);
            for j in 1..size {
                t[(j - 1, j)] = one;
            }
            t
        }
        ShiftKind::BilateralWindow => {
            let lo = -((size as i64 - 1) / 2);
            let hi = lo + size as i64 - 1;
            let label = IndexLabel::window(lo, hi);
            let mut t = LpOperator::zeros(label.clone(), label);
            for j in 0..size.saturating_sub(1) {
                t[(j + 1, j)] = one;
            }
            t
        }
        ShiftKind::Circular => {
            let label = IndexLabel::cyclic(size);
            let mut t = LpOperator::zeros(label.clone(), label);
            for j in 0..size {
                t[((j + 1) % size, j)] = one;
            }
            t
        }
    }
}

/// A diagonal operator with its labeled coordinate set.
#[derive(Debug, Clone, PartialEq)]
pub struct DiagonalOperator {
    pub weights: Vec<Complex64>,
    pub label: IndexLabel,
}

impl DiagonalOperator {
    pub fn new(weights: Vec<Complex64>, label: IndexLabel) -> Result<Self> {
        if weights.len() != label.len() {
            return Err(Error::LabelMismatch {
                expected: label.len(),
                got: weights.len(),
            });
        }
        Ok(DiagonalOperator { weights, label })
    }

    pub fn from_reals(weights: &[f64], label: IndexLabel) -> Result<Self> {
        let w = weights.iter().map(|&x| Complex64::new(x, 0.0)).collect();
        DiagonalOperator::new(w, label)
    }

    pub fn support(&self) -> Vec<usize> {
        self.weights
            .iter()
            .enumerate()
            .filter(|(_, w)| w.norm() != 0.0)
            .map(|(i, _)| i)
            .collect()
    }

    pub fn to_operator(&self) -> LpOperator {
        LpOperator::diagonal(&self.weights, self.label.clone()).expect("diagonal shape")
    }

    pub fn dim(&self) -> usize {
        self.weights.len()
    }
}

/// The ≪ relation: both diagonal contractions with entries in [0,1]
/// (finite support), and A₂ acts as the identity on the support of A₁.
pub fn ll_less(a1: &DiagonalOperator, a2: &DiagonalOperator) -> bool {
    if a1.label != a2.label {
        return false;
    }
    let in_unit = |w: &Complex64| w.im == 0.0 && (0.0..=1.0).contains(&w.re);
    if !a1.weights.iter().all(in_unit) || !a2.weights.iter().all(in_unit) {
        return false;
    }
    a1.support()
        .into_iter()
        .all(|i| a2.weights[i] == Complex64::new(1.0, 0.0))
}

/// A Laurent polynomial f(z) = Σ_{k=−d}^{d} c_k z^k.
#[derive(Debug, Clone, PartialEq)]
pub struct LaurentPolynomial {
    /// coefficient of z^{k−d} at slot k; length 2d+1
    coeffs: Vec<Complex64>,
    degree: usize,
}

impl LaurentPolynomial {
    pub fn new(coeffs: Vec<Complex64>, degree: usize) -> Result<Self> {
        if coeffs.len() != 2 * degree + 1 {
            return Err(Error::Invalid(format!(
                "need 2d+1 = {} coefficients, got {}",
                2 * degree + 1,
                coeffs.len()
            )));
        }
        Ok(LaurentPolynomial { coeffs, degree })
    }

    /// From (k, c_k) pairs; d inferred from the largest |k|.
    pub fn from_terms(terms: &[(i64, Complex64)]) -> Self {
        let d = terms.iter().map(|(k, _)| k.unsigned_abs() as usize).max().unwrap_or(0);
        let mut coeffs = vec![Complex64::default(); 2 * d + 1];
        for &(k, c) in terms {
            coeffs[(k + d as i64) as usize] += c;
        }
        LaurentPolynomial { coeffs, degree: d }
    }

    pub fn monomial(k: i64) -> Self {
        LaurentPolynomial::from_terms(&[(k, Complex64::new(1.0, 0.0))])
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn coeff(&self, k: i64) -> Complex64 {
        let d = self.degree as i64;
        if k < -d || k > d {
            Complex64::default()
        } else {
            self.coeffs[(k + d) as usize]
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (i64, Complex64)> + '_ {
        let d = self.degree as i64;
        self.coeffs
            .iter()
            .enumerate()
            .map(move |(i, &c)| (i as i64 - d, c))
            .filter(|(_, c)| c.norm_sqr() != 0.0)
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        let mut acc = Complex64::default();
        for (k, c) in self.terms() {
            acc += c * z.powi(k as i32);
        }
        acc
    }

    pub fn scale(&self, s: f64) -> LaurentPolynomial {
        LaurentPolynomial {
            coeffs: self.coeffs.iter().map(|c| c * s).collect(),
            degree: self.degree,
        }
    }

    /// f·g by coefficient convolution.
    pub fn mul(&self, other: &LaurentPolynomial) -> LaurentPolynomial {
        let mut terms = Vec::new();
        for (k1, c1) in self.terms() {
            for (k2, c2) in other.terms() {
                terms.push((k1 + k2, c1 * c2));
            }
        }
        if terms.is_empty() {
            terms.push((0, Complex64::default()));
        }
        LaurentPolynomial::from_terms(&terms)
    }

    /// Σ |k·c_k| — a sup bound for |f'| on the unit circle.
    pub fn derivative_bound(&self) -> f64 {
        self.terms().map(|(k, c)| (k.abs() as f64) * c.norm()).sum()
    }
}

/// Functional calculus: Σ_k c_k T^k, negative powers through the supplied
/// inverse (validated against T·T⁻¹ = I to 1e-12).
pub fn laurent_apply(
    f: &LaurentPolynomial,
    t: &LpOperator,
    t_inverse: Option<&LpOperator>,
) -> Result<LpOperator> {
    if !t.is_square() {
        return Err(Error::DimensionMismatch("laurent_apply on non-square".into()));
    }
    let needs_inverse = f.terms().any(|(k, _)| k < 0);
    let inv = if needs_inverse {
        let inv = t_inverse.ok_or(Error::MissingInverse)?;
        let id = LpOperator::identity(t.domain.clone());
        let defect = t.compose(inv)?.sub(&id)?.max_abs();
        if defect > 1e-12 {
            return Err(Error::BadInverse(defect));
        }
        Some(inv)
    } else {
        None
    };

    let id = LpOperator::identity(t.domain.clone());
    let mut acc = id.scale(f.coeff(0));
    let mut pos = id.clone();
    for k in 1..=f.degree() as i64 {
        pos = pos.compose(t)?;
        let c = f.coeff(k);
        if c.norm_sqr() != 0.0 {
            acc = acc.add(&pos.scale(c))?;
        }
    }
    if let Some(inv) = inv {
        let mut neg = id;
        for k in 1..=f.degree() as i64 {
            neg = neg.compose(inv)?;
            let c = f.coeff(-k);
            if c.norm_sqr() != 0.0 {
                acc = acc.add(&neg.scale(c))?;
            }
        }
    }
    Ok(acc)
}

/// The circulant f(B_N) assembled directly: entry (i, j) is the sum of
/// c_k over k ≡ i−j (mod N). Agrees with `laurent_apply` on the circular
/// shift but costs O(N²) instead of repeated matrix powers.
pub fn circulant_from_symbol(f: &LaurentPolynomial, n: usize) -> LpOperator {
    let label = IndexLabel::cyclic(n);
    let mut first_col = vec![Complex64::default(); n];
    for (k, c) in f.terms() {
        first_col[k.rem_euclid(n as i64) as usize] += c;
    }
    let mut t = LpOperator::zeros(label.clone(), label);
    for i in 0..n {
        for j in 0..n {
            t[(i, j)] = first_col[(i + n - j) % n];
        }
    }
    t
}

/// Grid maximum of |f| on the unit circle, plus a certified upper bound
/// (1 + π²(2d+1)²/g²)·grid_max from the derivative bound.
#[derive(Debug, Clone, Copy)]
pub struct CircleSup {
    pub grid_max: f64,
    pub certified_upper: f64,
    pub grid_size: usize,
}

pub fn laurent_circle_sup(f: &LaurentPolynomial, grid_size: usize) -> CircleSup {
    assert!(
        grid_size >= 4 * (2 * f.degree() + 1),
        "grid too coarse for degree {}",
        f.degree()
    );
    let mut grid_max = 0.0f64;
    for j in 0..grid_size {
        let th = 2.0 * std::f64::consts::PI * j as f64 / grid_size as f64;
        grid_max = grid_max.max(f.eval(Complex64::from_polar(1.0, th)).norm());
    }
    let span = (2 * f.degree() + 1) as f64;
    let factor = 1.0 + std::f64::consts::PI.powi(2) * span * span / (grid_size as f64).powi(2);
    CircleSup {
        grid_max,
        certified_upper: factor * grid_max,
        grid_size,
    }
}

/// Winding number of θ ↦ f(e^{iθ}) − λ around 0 via summed argument
/// increments. Errors out when λ is numerically on the curve.
pub fn winding_number(f: &LaurentPolynomial, lambda: Complex64, grid_size: usize) -> Result<i64> {
    assert!(grid_size >= 4 * (2 * f.degree() + 1));
    let spacing = 2.0 * std::f64::consts::PI / grid_size as f64;
    let guard = 10.0 * spacing * f.derivative_bound();

    let mut clearance = f64::INFINITY;
    let mut total = 0.0f64;
    let mut prev = f.eval(Complex64::new(1.0, 0.0)) - lambda;
    clearance = clearance.min(prev.norm());
    for j in 1..=grid_size {
        let th = 2.0 * std::f64::consts::PI * j as f64 / grid_size as f64;
        let cur = f.eval(Complex64::from_polar(1.0, th)) - lambda;
        clearance = clearance.min(cur.norm());
        // argument increment in (−π, π]
        total += (cur / prev).arg();
        prev = cur;
    }
    if clearance <= guard {
        return Err(Error::OnCurve { clearance, guard });
    }
    let w = total / (2.0 * std::f64::consts::PI);
    let rounded = w.round();
    if (w - rounded).abs() > 1e-6 {
        return Err(Error::Invalid(format!(
            "winding sum {w} not close to an integer"
        )));
    }
    Ok(rounded as i64)
}

/// Fredholm index of the Toeplitz model of f at λ: −winding(f, λ).
pub fn toeplitz_index(f: &LaurentPolynomial, lambda: Complex64, grid_size: usize) -> Result<i64> {
    winding_number(f, lambda, grid_size).map(|w| -w)
}

/// min over coordinates n of Σ_i |u_{n,i} − λ_i|^p, which equals the
/// infimum over unit vectors of Σ_i ‖(D_i − λ_i)x‖^p.
pub fn joint_diag_infimum(
    ds: &[DiagonalOperator],
    lambdas: &[Complex64],
    p: PExponent,
) -> Result<f64> {
    if ds.is_empty() {
        return Err(Error::EmptyFamily);
    }
    if ds.len() != lambdas.len() {
        return Err(Error::DimensionMismatch(
            "one λ per diagonal operator".into(),
        ));
    }
    let label = &ds[0].label;
    if ds.iter().any(|d| &d.label != label) {
        return Err(Error::DimensionMismatch(
            "joint_diag_infimum needs a common index label".into(),
        ));
    }
    let n = label.len();
    let mut best = f64::INFINITY;
    for i in 0..n {
        let mut acc = 0.0;
        for (d, l) in ds.iter().zip(lambdas) {
            acc += (d.weights[i] - l).norm().powf(p.p());
        }
        best = best.min(acc);
    }
    Ok(best)
}

/// The basis-successor operator T₀x_s = x_{s+1} on (⊕_n l²(block_n))_{l^p};
/// the blocked label carries the mixed-norm metadata.
pub fn explicit_t0(breakpoints: &[usize], _p: PExponent) -> Result<LpOperator> {
    if breakpoints.len() < 2 || breakpoints[0] != 0 {
        return Err(Error::Invalid("breakpoints must start at 0".into()));
    }
    if breakpoints.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::Invalid("breakpoints must strictly increase".into()));
    }
    let sizes: Vec<usize> = breakpoints.windows(2).map(|w| w[1] - w[0]).collect();
    let dim: usize = sizes.iter().sum();
    let label = IndexLabel::blocks(sizes, 2.0);
    let mut t = LpOperator::zeros(label.clone(), label);
    for s in 0..dim - 1 {
        t[(s + 1, s)] = Complex64::new(1.0, 0.0);
    }
    Ok(t)
}

/// ‖[A, B_N]‖ for diagonal A and the circular shift: exactly
/// max_j |a_{j+1 mod N} − a_j| (the commutator is permutation-scaled).
pub fn circular_commutator_norm(a: &DiagonalOperator) -> f64 {
    let n = a.dim();
    (0..n)
        .map(|j| (a.weights[(j + 1) % n] - a.weights[j]).norm())
        .fold(0.0, f64::max)
}

/// Upper bracket of ‖[A, X]‖ for any operator X.
pub fn commutator_upper(a: &LpOperator, x: &LpOperator, p: PExponent) -> f64 {
    let ax = a.compose(x).expect("commutator shapes");
    let xa = x.compose(a).expect("commutator shapes");
    op_norm_upper(&ax.sub(&xa).expect("commutator shapes"), p)
}
