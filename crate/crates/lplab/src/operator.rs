//! Dense complex operators between labeled l^p coordinate spaces.
//!
//! Row-major dense storage; shape is (|codomain|, |domain|). Desk-scale
//! dimensions only, so the arithmetic is plain triple loops and an
//! unblocked LU with partial pivoting.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::space::{IndexLabel, LpVector};

#[derive(Debug, Clone, PartialEq)]
pub struct LpOperator {
    data: Vec<Complex64>,
    rows: usize,
    cols: usize,
    pub domain: IndexLabel,
    pub codomain: IndexLabel,
}

impl LpOperator {
    pub fn new(
        data: Vec<Complex64>,
        domain: IndexLabel,
        codomain: IndexLabel,
    ) -> Result<Self> {
        let rows = codomain.len();
        let cols = domain.len();
        if data.len() != rows * cols {
            return Err(Error::ShapeMismatch {
                rows: data.len() / cols.max(1),
                cols,
                cod: rows,
                dom: cols,
            });
        }
        Ok(LpOperator {
            data,
            rows,
            cols,
            domain,
            codomain,
        })
    }

    pub fn zeros(domain: IndexLabel, codomain: IndexLabel) -> Self {
        let rows = codomain.len();
        let cols = domain.len();
        LpOperator {
            data: vec![Complex64::default(); rows * cols],
            rows,
            cols,
            domain,
            codomain,
        }
    }

    pub fn identity(label: IndexLabel) -> Self {
        let n = label.len();
        let mut t = LpOperator::zeros(label.clone(), label);
        for i in 0..n {
            t[(i, i)] = Complex64::new(1.0, 0.0);
        }
        t
    }

    pub fn from_rows_real(rows: &[Vec<f64>], domain: IndexLabel, codomain: IndexLabel) -> Result<Self> {
        let data = rows
            .iter()
            .flat_map(|r| r.iter().map(|&x| Complex64::new(x, 0.0)))
            .collect();
        LpOperator::new(data, domain, codomain)
    }

    pub fn diagonal(weights: &[Complex64], label: IndexLabel) -> Result<Self> {
        if weights.len() != label.len() {
            return Err(Error::LabelMismatch {
                expected: label.len(),
                got: weights.len(),
            });
        }
        let mut t = LpOperator::zeros(label.clone(), label);
        for (i, w) in weights.iter().enumerate() {
            t[(i, i)] = *w;
        }
        Ok(t)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn data(&self) -> &[Complex64] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[Complex64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn apply_slice(&self, x: &[Complex64]) -> Vec<Complex64> {
        debug_assert_eq!(x.len(), self.cols);
        (0..self.rows)
            .map(|i| {
                let mut acc = Complex64::default();
                for (a, b) in self.row(i).iter().zip(x) {
                    acc += a * b;
                }
                acc
            })
            .collect()
    }

    pub fn apply(&self, x: &LpVector) -> Result<LpVector> {
        if x.dim() != self.cols {
            return Err(Error::DimensionMismatch(format!(
                "apply: operator cols {} vs vector dim {}",
                self.cols,
                x.dim()
            )));
        }
        LpVector::new(self.apply_slice(&x.entries), self.codomain.clone())
    }

    pub fn compose(&self, other: &LpOperator) -> Result<LpOperator> {
        // self ∘ other
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch(format!(
                "compose: {}x{} with {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = LpOperator::zeros(other.domain.clone(), self.codomain.clone());
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a.norm_sqr() == 0.0 {
                    continue;
                }
                let orow = other.row(k);
                let dst = &mut out.data[i * other.cols..(i + 1) * other.cols];
                for (d, b) in dst.iter_mut().zip(orow) {
                    *d += a * b;
                }
            }
        }
        Ok(out)
    }

    /// Same matrix viewed between different labeled spaces (sizes must
    /// match). Needed e.g. to read a permutation's adjoint as an operator
    /// on the original space rather than on the dual.
    pub fn relabeled(&self, domain: IndexLabel, codomain: IndexLabel) -> Result<LpOperator> {
        LpOperator::new(self.data.clone(), domain, codomain)
    }

    /// Conjugate transpose; domain and codomain labels are swapped and
    /// dualized, so block-tridiagonal structure is preserved under adjoint.
    pub fn adjoint(&self) -> LpOperator {
        let mut out = LpOperator::zeros(self.codomain.dual(), self.domain.dual());
        for i in 0..self.rows {
            for j in 0..self.cols {
                out[(j, i)] = self[(i, j)].conj();
            }
        }
        out
    }

    pub fn scale(&self, c: Complex64) -> LpOperator {
        let mut out = self.clone();
        for z in &mut out.data {
            *z *= c;
        }
        out
    }

    pub fn add(&self, other: &LpOperator) -> Result<LpOperator> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::DimensionMismatch("add: shape mismatch".into()));
        }
        let mut out = self.clone();
        for (a, b) in out.data.iter_mut().zip(&other.data) {
            *a += b;
        }
        Ok(out)
    }

    pub fn sub(&self, other: &LpOperator) -> Result<LpOperator> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::DimensionMismatch("sub: shape mismatch".into()));
        }
        let mut out = self.clone();
        for (a, b) in out.data.iter_mut().zip(&other.data) {
            *a -= b;
        }
        Ok(out)
    }

    /// Max entry modulus; zero matrix gives 0.
    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Zero out columns at positions `cols` (returns a copy).
    pub fn mask_columns(&self, keep: impl Fn(usize) -> bool) -> LpOperator {
        let mut out = self.clone();
        for i in 0..self.rows {
            for j in 0..self.cols {
                if !keep(j) {
                    out[(i, j)] = Complex64::default();
                }
            }
        }
        out
    }

    pub fn mask_rows(&self, keep: impl Fn(usize) -> bool) -> LpOperator {
        let mut out = self.clone();
        for i in 0..self.rows {
            if !keep(i) {
                for j in 0..self.cols {
                    out[(i, j)] = Complex64::default();
                }
            }
        }
        out
    }

    /// Solve (self) x = b by LU with partial pivoting. Square only.
    pub fn solve(&self, b: &[Complex64]) -> Result<Vec<Complex64>> {
        let lu = LuFactors::new(self)?;
        Ok(lu.solve(b))
    }

    pub fn inverse(&self) -> Result<LpOperator> {
        if !self.is_square() {
            return Err(Error::DimensionMismatch("inverse of non-square".into()));
        }
        let n = self.rows;
        let lu = LuFactors::new(self)?;
        let mut out = LpOperator::zeros(self.codomain.clone(), self.domain.clone());
        let mut e = vec![Complex64::default(); n];
        for j in 0..n {
            e[j] = Complex64::new(1.0, 0.0);
            let col = lu.solve(&e);
            for i in 0..n {
                out[(i, j)] = col[i];
            }
            e[j] = Complex64::default();
        }
        Ok(out)
    }

    /// Direct sum placed block-diagonally; labels concatenate as plain
    /// blocks with the operands' own structure flattened.
    pub fn direct_sum(&self, other: &LpOperator, outer_p: f64) -> LpOperator {
        let dom = concat_labels(&self.domain, &other.domain, outer_p);
        let cod = concat_labels(&self.codomain, &other.codomain, outer_p);
        let mut out = LpOperator::zeros(dom, cod);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out[(i, j)] = self[(i, j)];
            }
        }
        for i in 0..other.rows {
            for j in 0..other.cols {
                out[(self.rows + i, self.cols + j)] = other[(i, j)];
            }
        }
        out
    }
}

fn concat_labels(a: &IndexLabel, b: &IndexLabel, outer_p: f64) -> IndexLabel {
    let (mut sa, mut ia) = a.block_structure(outer_p);
    let (sb, ib) = b.block_structure(outer_p);
    sa.extend(sb);
    ia.extend(ib);
    IndexLabel::blocks_with(sa, ia)
}

impl std::ops::Index<(usize, usize)> for LpOperator {
    type Output = Complex64;
    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for LpOperator {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        &mut self.data[i * self.cols + j]
    }
}

/// LU factorization with partial pivoting, for resolvents and inverses.
pub struct LuFactors {
    lu: Vec<Complex64>,
    piv: Vec<usize>,
    n: usize,
}

impl LuFactors {
    pub fn new(a: &LpOperator) -> Result<Self> {
        if !a.is_square() {
            return Err(Error::DimensionMismatch("LU of non-square".into()));
        }
        let n = a.rows;
        let mut lu = a.data.clone();
        let mut piv: Vec<usize> = (0..n).collect();
        for k in 0..n {
            let mut pk = k;
            let mut best = lu[k * n + k].norm();
            for i in k + 1..n {
                let v = lu[i * n + k].norm();
                if v > best {
                    best = v;
                    pk = i;
                }
            }
            if best == 0.0 {
                return Err(Error::Singular("LU"));
            }
            if pk != k {
                for j in 0..n {
                    lu.swap(k * n + j, pk * n + j);
                }
                piv.swap(k, pk);
            }
            let pivot = lu[k * n + k];
            for i in k + 1..n {
                let m = lu[i * n + k] / pivot;
                lu[i * n + k] = m;
                for j in k + 1..n {
                    let t = lu[k * n + j];
                    lu[i * n + j] -= m * t;
                }
            }
        }
        Ok(LuFactors { lu, piv, n })
    }

    pub fn solve(&self, b: &[Complex64]) -> Vec<Complex64> {
        let n = self.n;
        let mut x: Vec<Complex64> = self.piv.iter().map(|&i| b[i]).collect();
        for i in 1..n {
            for j in 0..i {
                let l = self.lu[i * n + j];
                let t = x[j];
                x[i] -= l * t;
            }
        }
        for i in (0..n).rev() {
            for j in i + 1..n {
                let u = self.lu[i * n + j];
                let t = x[j];
                x[i] -= u * t;
            }
            x[i] /= self.lu[i * n + i];
        }
        x
    }
}
