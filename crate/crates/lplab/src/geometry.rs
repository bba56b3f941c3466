//! Box covers of finite subsets of [0,1]^d with multiplicity ≤ 2^d,
//! subordinate partitions of unity, and the partition-based intertwiner
//! between the functional calculus of a diagonal tuple and its
//! point-evaluation model on the signed-average direct sum.
//!
//! "Compact subset of ℝ^d" is realized as a finite sample (the diagonal's
//! weight tuples plus optional extra points). The grid parameter is
//! n = ceil(2√d/ε): boxes of side 2/n have Euclidean diameter (2/n)√d ≤ ε.

use std::collections::BTreeSet;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::space::{lp_norm_slice, LpVector, PExponent};
use crate::unconditional::{u_norm, SignedSumElement, UNormMode};
use crate::zoo::DiagonalOperator;

/// Open boxes Π_i ((j_i−1)/n, (j_i+1)/n) retained because they meet the
/// input set.
#[derive(Debug, Clone)]
pub struct BoxCover {
    pub d: usize,
    pub n: usize,
    pub eps: f64,
    /// multi-indices j ∈ {0,…,n}^d of the retained boxes, sorted
    pub boxes: Vec<Vec<i64>>,
}

impl BoxCover {
    pub fn contains(&self, box_idx: usize, v: &[f64]) -> bool {
        box_contains(&self.boxes[box_idx], self.n, v)
    }

    /// How many retained boxes contain v.
    pub fn multiplicity(&self, v: &[f64]) -> usize {
        (0..self.boxes.len()).filter(|&i| self.contains(i, v)).count()
    }

    /// Euclidean diameter of each (open) box.
    pub fn box_diameter(&self) -> f64 {
        2.0 / self.n as f64 * (self.d as f64).sqrt()
    }
}

fn box_contains(j: &[i64], n: usize, v: &[f64]) -> bool {
    j.iter()
        .zip(v)
        .all(|(&ji, &vi)| (n as f64 * vi - ji as f64).abs() < 1.0)
}

/// Cover a finite point set in [0,1]^d by the grid boxes that meet it.
pub fn box_cover(points: &[Vec<f64>], eps: f64) -> Result<BoxCover> {
    if points.is_empty() {
        return Err(Error::EmptyFamily);
    }
    let d = points[0].len();
    if eps <= 0.0 {
        return Err(Error::Invalid("ε must be positive".into()));
    }
    for (i, pt) in points.iter().enumerate() {
        if pt.len() != d || pt.iter().any(|&x| !(0.0..=1.0).contains(&x)) {
            return Err(Error::PointOutOfBox(i));
        }
    }
    let n = ((2.0 * (d as f64).sqrt() / eps).ceil() as usize).max(1);
    if n > 1 << 20 {
        return Err(Error::ContinuityBudget { gamma: eps });
    }
    let mut boxes: BTreeSet<Vec<i64>> = BTreeSet::new();
    for pt in points {
        // per axis, the integers j with |n·v − j| < 1 (one or two of them)
        let axis_candidates: Vec<Vec<i64>> = pt
            .iter()
            .map(|&v| {
                let t = n as f64 * v;
                let lo = (t - 1.0).floor() as i64 + 1;
                let hi = (t + 1.0).ceil() as i64 - 1;
                (lo.max(0)..=hi.min(n as i64))
                    .filter(|&j| (t - j as f64).abs() < 1.0)
                    .collect()
            })
            .collect();
        let mut idx = vec![0usize; d];
        'outer: loop {
            let j: Vec<i64> = idx
                .iter()
                .zip(&axis_candidates)
                .map(|(&i, c)| c[i])
                .collect();
            boxes.insert(j);
            for k in 0..d {
                idx[k] += 1;
                if idx[k] < axis_candidates[k].len() {
                    continue 'outer;
                }
                idx[k] = 0;
            }
            break;
        }
    }
    Ok(BoxCover {
        d,
        n,
        eps,
        boxes: boxes.into_iter().collect(),
    })
}

/// Hats f_i (normalized steep tents supported in the inner 60% of each box)
/// and plateau bumps g_i (1 on that inner region, 0 outside the box), with
/// an anchor input point per box.
#[derive(Debug, Clone)]
pub struct PartitionOfUnity {
    pub cover: BoxCover,
    /// index into the input point list of the anchor w_i of box i
    pub anchor_idx: Vec<usize>,
    pub anchors: Vec<Vec<f64>>,
}

/// Plateau fraction of the box half-width: f's support sits inside the
/// plateau where g ≡ 1. 60% fixed for determinism.
const PLATEAU: f64 = 0.6;

fn tent_axis(t: f64) -> f64 {
    (1.0 - t.abs() / PLATEAU).max(0.0)
}

fn bump_axis(t: f64) -> f64 {
    ((1.0 - t.abs()) / (1.0 - PLATEAU)).clamp(0.0, 1.0)
}

impl PartitionOfUnity {
    fn raw_tent(&self, i: usize, v: &[f64]) -> f64 {
        let n = self.cover.n as f64;
        self.cover.boxes[i]
            .iter()
            .zip(v)
            .map(|(&j, &x)| tent_axis(n * x - j as f64))
            .product()
    }

    /// f_i(v): tents normalized over the retained boxes.
    pub fn f(&self, i: usize, v: &[f64]) -> f64 {
        let denom: f64 = (0..self.cover.boxes.len())
            .map(|k| self.raw_tent(k, v))
            .sum();
        if denom == 0.0 {
            0.0
        } else {
            self.raw_tent(i, v) / denom
        }
    }

    /// g_i(v): plateau bump — 1 on the inner region, 0 outside the box.
    pub fn g(&self, i: usize, v: &[f64]) -> f64 {
        let n = self.cover.n as f64;
        self.cover.boxes[i]
            .iter()
            .zip(v)
            .map(|(&j, &x)| bump_axis(n * x - j as f64))
            .product()
    }

    pub fn r(&self) -> usize {
        self.cover.boxes.len()
    }
}

pub fn partition_of_unity(points: &[Vec<f64>], eps: f64) -> Result<PartitionOfUnity> {
    let cover = box_cover(points, eps)?;
    let mut anchor_idx = Vec::with_capacity(cover.boxes.len());
    let mut anchors = Vec::with_capacity(cover.boxes.len());
    for i in 0..cover.boxes.len() {
        // retention guarantees an input point inside the open box, and any
        // such point has g_i > 0
        let k = (0..points.len())
            .find(|&k| cover.contains(i, &points[k]))
            .ok_or_else(|| Error::Invalid("retained box with no sample point".into()))?;
        anchor_idx.push(k);
        anchors.push(points[k].clone());
    }
    Ok(PartitionOfUnity {
        cover,
        anchor_idx,
        anchors,
    })
}

/// A piecewise-linear test function on [0,1] (values linearly interpolated
/// between grid nodes, clamped outside).
#[derive(Debug, Clone)]
pub struct GridFunction {
    pub xs: Vec<f64>,
    pub ys: Vec<f64>,
}

impl GridFunction {
    pub fn new(xs: Vec<f64>, ys: Vec<f64>) -> Result<Self> {
        if xs.len() < 2 || xs.len() != ys.len() {
            return Err(Error::Invalid("grid function needs ≥ 2 matching nodes".into()));
        }
        if xs.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::Invalid("grid nodes must strictly increase".into()));
        }
        Ok(GridFunction { xs, ys })
    }

    /// The identity function sampled on a uniform grid.
    pub fn identity(nodes: usize) -> Self {
        let xs: Vec<f64> = (0..nodes)
            .map(|i| i as f64 / (nodes - 1) as f64)
            .collect();
        GridFunction {
            ys: xs.clone(),
            xs,
        }
    }

    pub fn constant(c: f64) -> Self {
        GridFunction {
            xs: vec![0.0, 1.0],
            ys: vec![c, c],
        }
    }

    pub fn eval(&self, t: f64) -> f64 {
        if t <= self.xs[0] {
            return self.ys[0];
        }
        if t >= *self.xs.last().unwrap() {
            return *self.ys.last().unwrap();
        }
        let k = self.xs.partition_point(|&x| x <= t) - 1;
        let (x0, x1) = (self.xs[k], self.xs[k + 1]);
        let (y0, y1) = (self.ys[k], self.ys[k + 1]);
        y0 + (y1 - y0) * (t - x0) / (x1 - x0)
    }

    pub fn lipschitz(&self) -> f64 {
        self.xs
            .windows(2)
            .zip(self.ys.windows(2))
            .map(|(x, y)| ((y[1] - y[0]) / (x[1] - x[0])).abs())
            .fold(0.0, f64::max)
    }
}

/// A test function on [0,1]^d acting through one coordinate.
#[derive(Debug, Clone)]
pub struct AxisFunction {
    pub axis: usize,
    pub f: GridFunction,
}

impl AxisFunction {
    pub fn eval(&self, v: &[f64]) -> f64 {
        self.f.eval(v[self.axis])
    }

    /// Lipschitz constant w.r.t. the Euclidean metric on ℝ^d.
    pub fn lipschitz(&self) -> f64 {
        self.f.lipschitz()
    }
}

/// The partition intertwiner: W x = (ψ(f₁)x, …, ψ(f_r)x) into the u-sum,
/// E(y) = Σ ψ(g_i) y_i back, with EW = I exactly.
#[derive(Debug, Clone)]
pub struct PartitionIntertwiner {
    pub partition: PartitionOfUnity,
    /// sample points (the diagonal tuple's weight tuples)
    pub points: Vec<Vec<f64>>,
    /// diagonal weights of ψ(f_i), one vector per retained box
    pub psi_f: Vec<Vec<f64>>,
    /// diagonal weights of ψ(g_i)
    pub psi_g: Vec<Vec<f64>>,
    pub eps: f64,
    pub gamma: f64,
}

impl PartitionIntertwiner {
    pub fn r(&self) -> usize {
        self.psi_f.len()
    }

    pub fn dim(&self) -> usize {
        self.points.len()
    }

    /// W x as a signed-sum element.
    pub fn apply_w(&self, x: &LpVector) -> Result<SignedSumElement> {
        let comps = self
            .psi_f
            .iter()
            .map(|w| {
                let entries = w
                    .iter()
                    .zip(&x.entries)
                    .map(|(&a, &b)| b * a)
                    .collect::<Vec<_>>();
                LpVector::new(entries, x.label.clone())
            })
            .collect::<Result<Vec<_>>>()?;
        SignedSumElement::new(comps)
    }

    /// E y = Σ ψ(g_i) y_i.
    pub fn apply_e(&self, y: &SignedSumElement) -> Result<LpVector> {
        if y.r() != self.r() {
            return Err(Error::DimensionMismatch("apply_e component count".into()));
        }
        let dim = self.dim();
        let mut acc = vec![Complex64::default(); dim];
        for (w, c) in self.psi_g.iter().zip(&y.components) {
            for i in 0..dim {
                acc[i] += c.entries[i] * w[i];
            }
        }
        LpVector::new(acc, y.components[0].label.clone())
    }

    /// Entrywise defect of EW − I on the diagonal model (exact rational
    /// structure up to float rounding).
    pub fn ew_identity_defect(&self) -> f64 {
        let dim = self.dim();
        let mut worst = 0.0f64;
        for i in 0..dim {
            let s: f64 = self
                .psi_f
                .iter()
                .zip(&self.psi_g)
                .map(|(f, g)| f[i] * g[i])
                .sum();
            worst = worst.max((s - 1.0).abs());
        }
        worst
    }

    /// η(h) scalars h(w_1), …, h(w_r).
    pub fn eta_scalars(&self, h: &AxisFunction) -> Vec<f64> {
        self.partition.anchors.iter().map(|w| h.eval(w)).collect()
    }

    /// ψ(h): functional calculus h(D) as diagonal weights.
    pub fn psi_scalar(&self, h: &AxisFunction) -> Vec<f64> {
        self.points.iter().map(|m| h.eval(m)).collect()
    }

    /// u-norm of Wψ(h)x − η(h)Wx (the (iii)-defect) at a probe x.
    pub fn w_defect(&self, h: &AxisFunction, x: &LpVector, p: PExponent) -> Result<f64> {
        let hv = self.psi_scalar(h);
        let eta = self.eta_scalars(h);
        let comps = self
            .psi_f
            .iter()
            .zip(&eta)
            .map(|(f, &ei)| {
                let entries: Vec<Complex64> = f
                    .iter()
                    .zip(&hv)
                    .zip(&x.entries)
                    .map(|((&fi, &hi), &xi)| xi * (fi * (hi - ei)))
                    .collect();
                LpVector::new(entries, x.label.clone())
            })
            .collect::<Result<Vec<_>>>()?;
        let y = SignedSumElement::new(comps)?;
        let mode = if y.r() <= 14 {
            UNormMode::Exact
        } else {
            UNormMode::MonteCarlo {
                samples: 4096,
                seed: 0x7061_7274,
            }
        };
        Ok(u_norm(&y, p, mode)?.value)
    }

    /// p-norm of Eη(h)y − ψ(h)Ey (the (iv)-defect) at a probe y.
    pub fn e_defect(&self, h: &AxisFunction, y: &SignedSumElement, p: PExponent) -> Result<f64> {
        if y.r() != self.r() {
            return Err(Error::DimensionMismatch("e_defect component count".into()));
        }
        let hv = self.psi_scalar(h);
        let eta = self.eta_scalars(h);
        let dim = self.dim();
        let mut acc = vec![Complex64::default(); dim];
        for ((g, &ei), c) in self.psi_g.iter().zip(&eta).zip(&y.components) {
            for i in 0..dim {
                acc[i] += c.entries[i] * (g[i] * (ei - hv[i]));
            }
        }
        Ok(lp_norm_slice(&acc, p))
    }
}

/// Build the intertwiner for a tuple of commuting diagonals (one per
/// coordinate; weights real in [0,1]) and test functions Ω.
///
/// γ is chosen from the worst Lipschitz constant in Ω so that
/// |h(v)−h(w)| ≤ ε/2^d whenever |v−w| ≤ γ; the cover uses boxes of
/// diameter ≤ γ.
///
/// Because ψ here is the exact functional calculus of the diagonal tuple
/// (no compact error terms), the norm and defect estimates hold on the
/// whole space rather than only on a tail of coordinates.
pub fn partition_intertwiner(
    diagonals: &[DiagonalOperator],
    omega: &[AxisFunction],
    eps: f64,
) -> Result<PartitionIntertwiner> {
    if diagonals.is_empty() {
        return Err(Error::EmptyFamily);
    }
    let d = diagonals.len();
    let dim = diagonals[0].dim();
    if diagonals.iter().any(|x| x.dim() != dim) {
        return Err(Error::DimensionMismatch(
            "diagonal tuple needs a common dimension".into(),
        ));
    }
    let mut points = Vec::with_capacity(dim);
    for i in 0..dim {
        let mut pt = Vec::with_capacity(d);
        for dd in diagonals {
            let w = dd.weights[i];
            if w.im != 0.0 || !(0.0..=1.0).contains(&w.re) {
                return Err(Error::Invalid(
                    "diagonal weights must be real in [0,1]".into(),
                ));
            }
            pt.push(w.re);
        }
        points.push(pt);
    }
    let lip = omega.iter().map(|h| h.lipschitz()).fold(0.0, f64::max);
    let budget = eps / (1usize << d) as f64;
    let gamma = if lip == 0.0 { 1.0 } else { budget / lip };
    if gamma <= 0.0 || !gamma.is_finite() {
        return Err(Error::ContinuityBudget { gamma });
    }
    let partition = partition_of_unity(&points, gamma.min(1.0))
        .map_err(|e| match e {
            Error::ContinuityBudget { .. } => Error::ContinuityBudget { gamma },
            other => other,
        })?;
    let r = partition.r();
    let mut psi_f = Vec::with_capacity(r);
    let mut psi_g = Vec::with_capacity(r);
    for i in 0..r {
        psi_f.push(points.iter().map(|v| partition.f(i, v)).collect());
        psi_g.push(points.iter().map(|v| partition.g(i, v)).collect());
    }
    Ok(PartitionIntertwiner {
        partition,
        points,
        psi_f,
        psi_g,
        eps,
        gamma,
    })
}
