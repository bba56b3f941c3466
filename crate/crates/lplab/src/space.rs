//! Finite-dimensional l^p coordinate spaces: exponents, index labels, vectors,
//! norms and duality maps.
//!
//! A space is described by an [`IndexLabel`] (which coordinate set, and — for
//! concatenated blocks — the inner exponent of each block) together with an
//! outer exponent p ∈ (1, ∞). The norm of a plain label is the usual
//! (Σ|x_i|^p)^{1/p}; a blocked label carries per-block inner exponents and the
//! norm is computed blockwise, then combined with the outer exponent.

use num_complex::Complex64;

use crate::error::{Error, Result};

/// An exponent p ∈ (1, ∞) paired with its conjugate q, 1/p + 1/q = 1.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PExponent {
    p: f64,
    q: f64,
}

impl PExponent {
    pub fn new(p: f64) -> Result<Self> {
        if !p.is_finite() || p <= 1.0 {
            return Err(Error::InvalidExponent(p));
        }
        let q = p / (p - 1.0);
        let holder = (1.0 / p + 1.0 / q - 1.0).abs();
        debug_assert!(holder <= 1e-14, "conjugate exponent drift {holder}");
        Ok(PExponent { p, q })
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    pub fn q(&self) -> f64 {
        self.q
    }

    /// The conjugate exponent as a `PExponent` (p and q swapped).
    pub fn conjugate(&self) -> PExponent {
        PExponent { p: self.q, q: self.p }
    }

    pub fn two() -> PExponent {
        PExponent { p: 2.0, q: 2.0 }
    }
}

/// Descriptor of a coordinate set.
///
/// `Blocks` carries one inner exponent per block; the other variants are
/// plain coordinate sets whose inner exponent is the ambient one.
#[derive(Debug, Clone, PartialEq)]
pub enum IndexLabel {
    /// The interval [1, n] of ℕ (n coordinates).
    Interval { n: usize },
    /// A window [lo, hi] of ℤ.
    Window { lo: i64, hi: i64 },
    /// ℤ/nℤ with representatives 0..n-1.
    Cyclic { modulus: usize },
    /// Concatenated blocks; `inner[j]` is the inner exponent of block j.
    Blocks { sizes: Vec<usize>, inner: Vec<f64> },
}

impl IndexLabel {
    pub fn interval(n: usize) -> Self {
        IndexLabel::Interval { n }
    }

    pub fn window(lo: i64, hi: i64) -> Self {
        assert!(hi >= lo, "empty window");
        IndexLabel::Window { lo, hi }
    }

    pub fn cyclic(modulus: usize) -> Self {
        IndexLabel::Cyclic { modulus }
    }

    /// Blocked label with a uniform inner exponent.
    pub fn blocks(sizes: Vec<usize>, inner: f64) -> Self {
        let inner = vec![inner; sizes.len()];
        IndexLabel::Blocks { sizes, inner }
    }

    pub fn blocks_with(sizes: Vec<usize>, inner: Vec<f64>) -> Self {
        assert_eq!(sizes.len(), inner.len());
        IndexLabel::Blocks { sizes, inner }
    }

    pub fn len(&self) -> usize {
        match self {
            IndexLabel::Interval { n } => *n,
            IndexLabel::Window { lo, hi } => (hi - lo + 1) as usize,
            IndexLabel::Cyclic { modulus } => *modulus,
            IndexLabel::Blocks { sizes, .. } => sizes.iter().sum(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// True when every coordinate carries the ambient exponent.
    pub fn is_plain(&self) -> bool {
        !matches!(self, IndexLabel::Blocks { .. })
    }

    /// Block sizes and inner exponents, viewing plain labels as one block.
    pub fn block_structure(&self, ambient_p: f64) -> (Vec<usize>, Vec<f64>) {
        match self {
            IndexLabel::Blocks { sizes, inner } => (sizes.clone(), inner.clone()),
            _ => (vec![self.len()], vec![ambient_p]),
        }
    }

    /// The dual label: same coordinates, inner exponents conjugated.
    pub fn dual(&self) -> IndexLabel {
        match self {
            IndexLabel::Blocks { sizes, inner } => IndexLabel::Blocks {
                sizes: sizes.clone(),
                inner: inner.iter().map(|p| p / (p - 1.0)).collect(),
            },
            other => other.clone(),
        }
    }

    /// Offset of the position of integer index `j` inside the coordinate
    /// list, for the integer-indexed variants.
    pub fn position_of(&self, j: i64) -> Option<usize> {
        match self {
            IndexLabel::Interval { n } => {
                (j >= 1 && j <= *n as i64).then(|| (j - 1) as usize)
            }
            IndexLabel::Window { lo, hi } => (j >= *lo && j <= *hi).then(|| (j - lo) as usize),
            IndexLabel::Cyclic { modulus } => {
                let m = *modulus as i64;
                Some(j.rem_euclid(m) as usize)
            }
            IndexLabel::Blocks { .. } => None,
        }
    }

    /// Multiplicative distortion `(c, big_c)` such that
    /// `c · ‖x‖_p ≤ ‖x‖_label ≤ big_c · ‖x‖_p` for all x, where ‖·‖_p is the
    /// plain p-norm over all coordinates.
    pub fn p_equivalence(&self, ambient_p: f64) -> (f64, f64) {
        match self {
            IndexLabel::Blocks { sizes, inner } => {
                let mut lo = 1.0f64;
                let mut hi = 1.0f64;
                for (&b, &pj) in sizes.iter().zip(inner) {
                    if b == 0 {
                        continue;
                    }
                    let t = (b as f64).powf(1.0 / pj - 1.0 / ambient_p);
                    lo = lo.min(t.min(1.0));
                    hi = hi.max(t.max(1.0));
                }
                (lo, hi)
            }
            _ => (1.0, 1.0),
        }
    }
}

/// A vector in a labeled finite l^p space.
#[derive(Debug, Clone, PartialEq)]
pub struct LpVector {
    pub entries: Vec<Complex64>,
    pub label: IndexLabel,
}

impl LpVector {
    pub fn new(entries: Vec<Complex64>, label: IndexLabel) -> Result<Self> {
        if entries.len() != label.len() {
            return Err(Error::LabelMismatch {
                expected: label.len(),
                got: entries.len(),
            });
        }
        Ok(LpVector { entries, label })
    }

    pub fn from_reals(entries: &[f64], label: IndexLabel) -> Result<Self> {
        let entries = entries.iter().map(|&x| Complex64::new(x, 0.0)).collect();
        LpVector::new(entries, label)
    }

    pub fn zeros(label: IndexLabel) -> Self {
        let entries = vec![Complex64::default(); label.len()];
        LpVector { entries, label }
    }

    /// Basis vector at position `pos` (0-based position in the list).
    pub fn basis(pos: usize, label: IndexLabel) -> Self {
        let mut v = LpVector::zeros(label);
        v.entries[pos] = Complex64::new(1.0, 0.0);
        v
    }

    pub fn dim(&self) -> usize {
        self.entries.len()
    }

    pub fn norm(&self, p: PExponent) -> f64 {
        labeled_norm(&self.entries, &self.label, p.p())
    }

    /// The duality map ψ: l^p → l^q with ⟨ψ(x), x⟩ = ‖x‖_p^p and
    /// ‖ψ(x)‖_q = ‖x‖_p^{p−1}. The sign of zero is zero.
    pub fn duality_map(&self, p: PExponent) -> LpVector {
        let entries = labeled_duality(&self.entries, &self.label, p.p());
        LpVector {
            entries,
            label: self.label.dual(),
        }
    }

    /// Bilinear pairing Σ y_i x_i (no conjugation; the duality map already
    /// carries the conjugate signs).
    pub fn pair(&self, x: &LpVector) -> Complex64 {
        self.entries
            .iter()
            .zip(&x.entries)
            .map(|(a, b)| a * b)
            .sum()
    }

    pub fn scale(&self, c: Complex64) -> LpVector {
        LpVector {
            entries: self.entries.iter().map(|z| z * c).collect(),
            label: self.label.clone(),
        }
    }

    pub fn add(&self, other: &LpVector) -> LpVector {
        LpVector {
            entries: self
                .entries
                .iter()
                .zip(&other.entries)
                .map(|(a, b)| a + b)
                .collect(),
            label: self.label.clone(),
        }
    }

    pub fn sub(&self, other: &LpVector) -> LpVector {
        LpVector {
            entries: self
                .entries
                .iter()
                .zip(&other.entries)
                .map(|(a, b)| a - b)
                .collect(),
            label: self.label.clone(),
        }
    }
}

/// ‖x‖ for entries under the label's block structure and outer exponent.
pub fn labeled_norm(entries: &[Complex64], label: &IndexLabel, p: f64) -> f64 {
    match label {
        IndexLabel::Blocks { sizes, inner } => {
            let mut acc = 0.0;
            let mut off = 0;
            for (&b, &pj) in sizes.iter().zip(inner) {
                let nb = plain_norm(&entries[off..off + b], pj);
                acc += nb.powf(p);
                off += b;
            }
            acc.powf(1.0 / p)
        }
        _ => plain_norm(entries, p),
    }
}

fn plain_norm(entries: &[Complex64], p: f64) -> f64 {
    if p == 2.0 {
        entries.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    } else {
        entries
            .iter()
            .map(|z| z.norm().powf(p))
            .sum::<f64>()
            .powf(1.0 / p)
    }
}

/// Duality map entries for a labeled space.
///
/// Plain label: ψ(x)_i = conj(sign x_i)·|x_i|^{p-1}. Blocked label: block j
/// additionally scales by ‖x_j‖_{p_j}^{p−p_j}, which makes the pairing equal
/// ‖x‖^p and the inverse (apply again with conjugate exponents) exact.
pub fn labeled_duality(entries: &[Complex64], label: &IndexLabel, p: f64) -> Vec<Complex64> {
    match label {
        IndexLabel::Blocks { sizes, inner } => {
            let mut out = Vec::with_capacity(entries.len());
            let mut off = 0;
            for (&b, &pj) in sizes.iter().zip(inner) {
                let block = &entries[off..off + b];
                let nb = plain_norm(block, pj);
                let scale = if nb > 0.0 { nb.powf(p - pj) } else { 0.0 };
                for z in block {
                    out.push(plain_duality_entry(*z, pj) * scale);
                }
                off += b;
            }
            out
        }
        _ => entries
            .iter()
            .map(|&z| plain_duality_entry(z, p))
            .collect(),
    }
}

fn plain_duality_entry(z: Complex64, p: f64) -> Complex64 {
    let r = z.norm();
    if r == 0.0 {
        Complex64::default()
    } else {
        // conj(sign z) · r^{p-1} = conj(z) · r^{p-2}
        z.conj() * r.powf(p - 2.0)
    }
}

/// Convenience: plain p-norm of a complex slice.
pub fn lp_norm_slice(entries: &[Complex64], p: PExponent) -> f64 {
    plain_norm(entries, p.p())
}
