//! Følner-averaging intertwiners between shift representations and their
//! cyclic quotients, quasicentral approximate units, and the pinching
//! inequalities.
//!
//! The group is ℤ, the subgroup is H = nℤ with Følner sets
//! F_k = {0, n, …, (k−1)n}, and everything is realized on a finite window
//! of ℤ padded wide enough that the translates in play never leave it.

use num_complex::Complex64;

use crate::bracket::op_norm_upper;
use crate::error::{Error, Result};
use crate::operator::LpOperator;
use crate::space::{lp_norm_slice, IndexLabel, LpVector, PExponent};
use crate::zoo::{commutator_upper, DiagonalOperator};

/// V: l^p(ℤ/nℤ) → l^p(window) averaging over Følner translates, and its
/// left inverse E built from the coset functionals x*_{gF_k}.
#[derive(Debug, Clone)]
pub struct FolnerIntertwiner {
    pub v: LpOperator,
    pub e: LpOperator,
    pub modulus: usize,
    pub folner_len: usize,
    pub window_lo: i64,
    pub window_hi: i64,
    p: PExponent,
}

/// V e_{g+nℤ} = k^{−1/p} Σ_{m<k} e_{g+nm}; E row for coset gH is the
/// functional x*_{gF_k} = k^{−1/q} Σ_{s∈gF_k} e_s^*. Then EV = I exactly,
/// ‖V‖ = 1 (disjoint supports across cosets) and ‖E‖ ≤ 1.
///
/// The finite-subgroup case (averaging over a finite H itself rather than
/// over Følner sets of an infinite one) is the k = 1 instance of the same
/// construction and is only approximate at finite scale: the translate
/// trick that desingularizes it needs room the window does not have.
pub fn folner_pair(
    n: usize,
    k: usize,
    window: (i64, i64),
    p: PExponent,
) -> Result<FolnerIntertwiner> {
    assert!(n >= 1 && k >= 1);
    let (lo, hi) = window;
    let nk = (n * k) as i64;
    // translates gF_k for g = 0..n−1 live in [0, nk−1]; pad by a full F_k
    // on each side so shifted representatives stay inside
    let (need_lo, need_hi) = (-nk, 2 * nk - 1);
    if lo > need_lo || hi < need_hi {
        return Err(Error::WindowTooSmall {
            lo,
            hi,
            need_lo,
            need_hi,
        });
    }
    let window_label = IndexLabel::window(lo, hi);
    let quot_label = IndexLabel::cyclic(n);
    let mut v = LpOperator::zeros(quot_label.clone(), window_label.clone());
    let mut e = LpOperator::zeros(window_label.clone(), quot_label);
    let v_amp = (k as f64).powf(-1.0 / p.p());
    let e_amp = (k as f64).powf(-1.0 / p.q());
    for g in 0..n {
        for m in 0..k {
            let pos = window_label.position_of((g + n * m) as i64).unwrap();
            v[(pos, g)] = Complex64::new(v_amp, 0.0);
            e[(g, pos)] = Complex64::new(e_amp, 0.0);
        }
    }
    Ok(FolnerIntertwiner {
        v,
        e,
        modulus: n,
        folner_len: k,
        window_lo: lo,
        window_hi: hi,
        p,
    })
}

impl FolnerIntertwiner {
    /// Exact translation equivariance: shifting V's column for coset g by m
    /// reproduces the averaged indicator of the unreduced representative
    /// g+m (1 + gF_k = (g+1)F_k as subsets of ℤ). Returns the max column
    /// defect in the p-norm; 0 up to rounding while the translate stays in
    /// the window.
    pub fn translation_defect(&self, m: i64) -> Result<f64> {
        let n = self.modulus;
        let k = self.folner_len;
        let label = IndexLabel::window(self.window_lo, self.window_hi);
        let amp = (k as f64).powf(-1.0 / self.p.p());
        let mut worst = 0.0f64;
        for g in 0..n as i64 {
            // shift-by-m of V e_{gH}
            let mut shifted = vec![Complex64::default(); label.len()];
            for mm in 0..k as i64 {
                let target = g + (n as i64) * mm + m;
                match label.position_of(target) {
                    Some(pos) => shifted[pos] = Complex64::new(amp, 0.0),
                    None => {
                        return Err(Error::WindowTooSmall {
                            lo: self.window_lo,
                            hi: self.window_hi,
                            need_lo: target.min(self.window_lo),
                            need_hi: target.max(self.window_hi),
                        })
                    }
                }
            }
            // averaged indicator of (g+m)F_k, unreduced representative
            let mut translated = vec![Complex64::default(); label.len()];
            for mm in 0..k as i64 {
                let target = (g + m) + (n as i64) * mm;
                match label.position_of(target) {
                    Some(pos) => translated[pos] = Complex64::new(amp, 0.0),
                    None => {
                        return Err(Error::WindowTooSmall {
                            lo: self.window_lo,
                            hi: self.window_hi,
                            need_lo: target.min(self.window_lo),
                            need_hi: target.max(self.window_hi),
                        })
                    }
                }
            }
            let diff: Vec<Complex64> = shifted
                .iter()
                .zip(&translated)
                .map(|(a, b)| a - b)
                .collect();
            worst = worst.max(lp_norm_slice(&diff, self.p));
        }
        Ok(worst)
    }

    /// ‖E·ρ(m)·V − ρ_H(m)‖ upper bracket: the wrapped finite-scale defect,
    /// which decays like (2·min(m/n, k)/k)^{1/q} as k grows.
    pub fn conjugated_shift_defect(&self, m: i64) -> f64 {
        let n = self.modulus;
        let label = IndexLabel::window(self.window_lo, self.window_hi);
        let dim = label.len();
        let mut rho = LpOperator::zeros(label.clone(), label.clone());
        for pos in 0..dim {
            let j = self.window_lo + pos as i64;
            if let Some(target) = label.position_of_checked(j + m) {
                rho[(target, pos)] = Complex64::new(1.0, 0.0);
            }
        }
        let conj = self.e.compose(&rho).unwrap().compose(&self.v).unwrap();
        let quot = IndexLabel::cyclic(n);
        let mut rho_h = LpOperator::zeros(quot.clone(), quot);
        for g in 0..n {
            rho_h[(((g as i64 + m).rem_euclid(n as i64)) as usize, g)] = Complex64::new(1.0, 0.0);
        }
        op_norm_upper(&conj.sub(&rho_h).unwrap(), self.p)
    }
}

/// ‖x*_{gF_k} − x*_{(g+m)F_k}‖_q for m ≡ 0 (mod n), computed by laying both
/// functionals on a window; equals (2·min(|m|/n, k)/k)^{1/q}.
pub fn folner_functional_gap(n: usize, k: usize, m: i64, p: PExponent) -> Result<f64> {
    if m % n as i64 != 0 {
        return Err(Error::Precondition(format!("shift {m} not a multiple of n = {n}")));
    }
    let amp = (k as f64).powf(-1.0 / p.q());
    let lo = m.min(0);
    let hi = (k as i64 - 1) * n as i64 + m.max(0);
    let len = (hi - lo + 1) as usize;
    let mut diff = vec![Complex64::default(); len];
    for mm in 0..k as i64 {
        let a = (mm * n as i64 - lo) as usize;
        diff[a] += Complex64::new(amp, 0.0);
        let b = (mm * n as i64 + m - lo) as usize;
        diff[b] -= Complex64::new(amp, 0.0);
    }
    Ok(lp_norm_slice(&diff, p.conjugate()))
}

/// Closed form of the functional gap: (2·min(|m|/n, k)/k)^{1/q}.
pub fn folner_functional_gap_closed_form(n: usize, k: usize, m: i64, p: PExponent) -> f64 {
    let j = (m.unsigned_abs() as usize) / n;
    (2.0 * j.min(k) as f64 / k as f64).powf(1.0 / p.q())
}

/// Finite-stage multi-quotient embedding V e_g = m^{−1/p}(e_{g mod n_1}, …,
/// e_{g mod n_m}) with l^p joining, plus per-pair separation stages.
#[derive(Debug, Clone)]
pub struct MultiQuotient {
    pub v: LpOperator,
    /// ((g1, g2), least stage at which the cosets separate), lexicographic.
    pub separation: Vec<((i64, i64), Option<usize>)>,
}

pub fn multi_quotient_v(moduli: &[usize], window: (i64, i64), p: PExponent) -> Result<MultiQuotient> {
    if moduli.is_empty() {
        return Err(Error::EmptyFamily);
    }
    if moduli.contains(&0) {
        return Err(Error::Invalid("moduli must be ≥ 1".into()));
    }
    let (lo, hi) = window;
    let src = IndexLabel::window(lo, hi);
    let stages = moduli.len();
    let sizes: Vec<usize> = moduli.to_vec();
    let dst = IndexLabel::blocks(sizes, p.p());
    let amp = (stages as f64).powf(-1.0 / p.p());
    let mut v = LpOperator::zeros(src.clone(), dst);
    for pos in 0..src.len() {
        let g = lo + pos as i64;
        let mut off = 0usize;
        for &nk in moduli {
            let coset = g.rem_euclid(nk as i64) as usize;
            v[(off + coset, pos)] = Complex64::new(amp, 0.0);
            off += nk;
        }
    }
    let mut separation = Vec::new();
    for a in lo..=hi {
        for b in (a + 1)..=hi {
            let stage = moduli
                .iter()
                .position(|&nk| a.rem_euclid(nk as i64) != b.rem_euclid(nk as i64))
                .map(|i| i + 1);
            separation.push(((a, b), stage));
        }
    }
    Ok(MultiQuotient { v, separation })
}

/// An increasing ≪-chain of diagonal contractions with recorded per-stage
/// commutator defects against the assigned family members.
#[derive(Debug, Clone)]
pub struct ApproximateUnit {
    pub stages: Vec<DiagonalOperator>,
    pub defects: Vec<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Profile {
    /// flat 1 within cyclic distance `flat` of coordinate 0, ramp of
    /// length `ramp` on both cyclic sides
    Cyclic,
    /// flat 1 on [1, flat], ramp of length `ramp` to the right
    Anchored,
}

fn stage_weights(dim: usize, flat: usize, ramp: usize, shape: Profile) -> Vec<f64> {
    let mut w = vec![0.0; dim];
    for (j, wj) in w.iter_mut().enumerate() {
        let d = match shape {
            Profile::Cyclic => j.min(dim - j), // cyclic distance to coordinate 0
            Profile::Anchored => j,
        };
        *wj = if d <= flat {
            1.0
        } else if d <= flat + ramp {
            1.0 - (d - flat) as f64 / ramp as f64
        } else {
            0.0
        };
    }
    w
}

fn profile_is_identity(w: &[f64]) -> bool {
    w.iter().all(|&x| x == 1.0)
}

fn support_outer(w: &[f64], shape: Profile, dim: usize) -> usize {
    // largest distance-from-origin with nonzero weight
    let mut out = 0usize;
    for (j, &x) in w.iter().enumerate() {
        if x != 0.0 {
            let d = match shape {
                Profile::Cyclic => j.min(dim - j),
                Profile::Anchored => j,
            };
            out = out.max(d);
        }
    }
    out
}

/// Quasicentral approximate unit: stages A_1 ≪ A_2 ≪ … built from flat
/// (Cesàro) windows widened until the commutator defect against the first
/// i family members drops below ε_i.
///
/// Default profiles are cyclically smooth (ramps on both sides of the
/// coordinate circle), so the defect against a circular shift is exactly
/// the reciprocal ramp length. With `support_floors` the profiles are
/// anchored at coordinate 1 with flat region ⊇ [1, m_{n+1}], making
/// A_n − A_{n−1} vanish on the first m_n coordinates.
pub fn quasicentral_unit(
    family: &[LpOperator],
    tolerances: &[f64],
    support_floors: Option<&[usize]>,
    p: PExponent,
) -> Result<ApproximateUnit> {
    if family.is_empty() {
        return Err(Error::EmptyFamily);
    }
    let dim = family[0].cols();
    if family.iter().any(|x| x.cols() != dim || x.rows() != dim) {
        return Err(Error::DimensionMismatch(
            "quasicentral_unit needs a common square space".into(),
        ));
    }
    let label = family[0].domain.clone();
    let shape = if support_floors.is_some() {
        Profile::Anchored
    } else {
        Profile::Cyclic
    };
    let max_d = match shape {
        Profile::Cyclic => dim / 2,
        Profile::Anchored => dim - 1,
    };

    let mut stages: Vec<DiagonalOperator> = Vec::new();
    let mut defects: Vec<f64> = Vec::new();
    let mut prev_outer = 0usize; // outer support distance of previous stage
    for (i, &eps) in tolerances.iter().enumerate() {
        if eps <= 0.0 {
            return Err(Error::Invalid("tolerances must be positive".into()));
        }
        // ll_less: this stage must be 1 on the previous support
        let mut flat_min = if stages.is_empty() { 0 } else { prev_outer };
        if let Some(floors) = support_floors {
            // paper: A_n = I on [1, m_{n+1}] so A_n − A_{n−1} = 0 on [1, m_n]
            let next_floor = *floors.get(i + 1).or(floors.last()).unwrap_or(&1);
            flat_min = flat_min.max(next_floor.saturating_sub(1));
        }
        let assigned = &family[..family.len().min(i + 1)];
        let mut best = f64::INFINITY;
        let mut chosen: Option<(Vec<f64>, f64)> = None;
        for ramp in 1..=max_d.saturating_sub(flat_min).max(1) {
            if flat_min + ramp > max_d {
                break;
            }
            let w = stage_weights(dim, flat_min, ramp, shape);
            if profile_is_identity(&w) {
                break; // a proper window, not the identity
            }
            let cand = DiagonalOperator::from_reals(&w, label.clone())?;
            let a_op = cand.to_operator();
            let defect = assigned
                .iter()
                .map(|x| commutator_upper(&a_op, x, p))
                .fold(0.0, f64::max);
            best = best.min(defect);
            if defect < eps {
                chosen = Some((w, defect));
                break;
            }
        }
        match chosen {
            Some((w, defect)) => {
                let stage = DiagonalOperator::from_reals(&w, label.clone())?;
                prev_outer = support_outer(&w, shape, dim);
                stages.push(stage);
                defects.push(defect);
            }
            None => {
                return Err(Error::InfeasibleStage {
                    stage: i + 1,
                    dim,
                    best,
                    eps,
                });
            }
        }
    }
    Ok(ApproximateUnit { stages, defects })
}

impl ApproximateUnit {
    /// Stage difference A_n − A_{n−1} as diagonal weights (A_0 = 0).
    fn stage_diff(&self, n: usize) -> Vec<Complex64> {
        let dim = self.stages[0].dim();
        let cur = &self.stages[n].weights;
        if n == 0 {
            cur.clone()
        } else {
            let prev = &self.stages[n - 1].weights;
            (0..dim).map(|i| cur[i] - prev[i]).collect()
        }
    }

    /// A_{n+1} − A_{n−2} as diagonal weights, with A_{−1} = A_0 = 0 and the
    /// stage after the last completed to its SOT limit I.
    fn wide_diff(&self, n: usize) -> Vec<Complex64> {
        let s = self.stages.len();
        let dim = self.stages[0].dim();
        let mut out: Vec<Complex64> = if n < s - 1 {
            self.stages[n + 1].weights.clone()
        } else {
            vec![Complex64::new(1.0, 0.0); dim]
        };
        if n >= 2 {
            let lo = &self.stages[n - 2].weights;
            for i in 0..dim {
                out[i] -= lo[i];
            }
        }
        out
    }
}

/// The pinching inequalities of an ≪-chain.
///
/// Returns (Σ_n ‖(A_n−A_{n−1})x‖^p / ‖x‖^p, ‖Σ x_n‖^p / Σ‖x_n‖^p) where the
/// x_n are caller-supplied vectors in the range of A_{n+1} − A_{n−2} (one
/// per stage; validated). The first value is ≤ 2, the second ≤ 4^p.
pub fn pinch_check(
    unit: &ApproximateUnit,
    x: &LpVector,
    block_vectors: &[LpVector],
    p: PExponent,
) -> Result<(f64, f64)> {
    let s = unit.stages.len();
    if s == 0 {
        return Err(Error::EmptyFamily);
    }
    let dim = unit.stages[0].dim();
    if x.dim() != dim {
        return Err(Error::DimensionMismatch("pinch_check vector dim".into()));
    }
    let nx = x.norm(p);
    if nx == 0.0 {
        return Err(Error::ZeroVector("pinch_check"));
    }
    let mut sum = 0.0;
    for n in 0..s {
        let d = unit.stage_diff(n);
        let dx: Vec<Complex64> = d.iter().zip(&x.entries).map(|(w, xi)| w * xi).collect();
        sum += lp_norm_slice(&dx, p).powf(p.p());
    }
    let first = sum / nx.powf(p.p());

    if block_vectors.len() != s {
        return Err(Error::DimensionMismatch(format!(
            "need one block vector per stage ({s}), got {}",
            block_vectors.len()
        )));
    }
    let mut total = vec![Complex64::default(); dim];
    let mut denom = 0.0;
    for (n, xn) in block_vectors.iter().enumerate() {
        if xn.dim() != dim {
            return Err(Error::DimensionMismatch("pinch block vector dim".into()));
        }
        let w = unit.wide_diff(n);
        let fixed: Vec<Complex64> = w.iter().zip(&xn.entries).map(|(a, b)| a * b).collect();
        let drift: Vec<Complex64> = fixed
            .iter()
            .zip(&xn.entries)
            .map(|(a, b)| a - b)
            .collect();
        let nz = lp_norm_slice(&xn.entries, p);
        let defect = lp_norm_slice(&drift, p);
        if defect > 1e-10 * nz.max(1.0) {
            return Err(Error::RangeViolation { index: n, defect });
        }
        for (t, v) in total.iter_mut().zip(&xn.entries) {
            *t += v;
        }
        denom += nz.powf(p.p());
    }
    let second = if denom == 0.0 {
        1.0
    } else {
        lp_norm_slice(&total, p).powf(p.p()) / denom
    };
    Ok((first, second))
}

// internal helper used by conjugated_shift_defect
trait PositionChecked {
    fn position_of_checked(&self, j: i64) -> Option<usize>;
}

impl PositionChecked for IndexLabel {
    fn position_of_checked(&self, j: i64) -> Option<usize> {
        match self {
            IndexLabel::Window { lo, hi } => (j >= *lo && j <= *hi).then(|| (j - lo) as usize),
            other => other.position_of(j),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::zoo::{ll_less, make_shift, ShiftKind};

    #[test]
    fn folner_pair_identities() {
        let p = PExponent::two();
        let n = 3;
        let k = 4;
        let nk = (n * k) as i64;
        let fi = folner_pair(n, k, (-nk, 2 * nk - 1), p).unwrap();
        // ‖V e_{0+3ℤ}‖ = 1 (4 entries of 1/2 in l²)
        let e0 = LpVector::basis(0, IndexLabel::cyclic(n));
        let v0 = fi.v.apply(&e0).unwrap();
        assert!((v0.norm(p) - 1.0).abs() < 1e-14);
        assert_eq!(v0.entries.iter().filter(|z| z.norm() != 0.0).count(), 4);
        assert!(v0.entries.iter().all(|z| z.norm() == 0.0 || (z.re - 0.5).abs() < 1e-15));
        // EV = I exactly
        let ev = fi.e.compose(&fi.v).unwrap();
        let id = LpOperator::identity(IndexLabel::cyclic(n));
        assert!(ev.sub(&id).unwrap().max_abs() <= 1e-14);
        // exact translation equivariance with padding
        assert!(fi.translation_defect(1).unwrap() <= 1e-14);
    }

    #[test]
    fn window_too_small_rejected() {
        let p = PExponent::two();
        assert!(matches!(
            folner_pair(3, 4, (0, 11), p),
            Err(Error::WindowTooSmall { .. })
        ));
    }

    #[test]
    fn functional_gap_matches_closed_form() {
        let p = PExponent::two();
        // m = n, k = 4, q = 2 → (2/4)^{1/2}
        let g = folner_functional_gap(3, 4, 3, p).unwrap();
        assert!((g - 0.5f64.sqrt()).abs() < 1e-14);
        assert_eq!(folner_functional_gap(3, 4, 0, p).unwrap(), 0.0);
        // disjoint supports: 2^{1/q}
        let q3 = PExponent::new(3.0).unwrap();
        let g = folner_functional_gap(2, 5, 2 * 5 * 2, q3).unwrap();
        assert!((g - 2.0f64.powf(1.0 / q3.q())).abs() < 1e-14);
        // closed form agrees over a spread of shifts
        for j in 0..=10i64 {
            let got = folner_functional_gap(3, 4, 3 * j, q3).unwrap();
            let want = folner_functional_gap_closed_form(3, 4, 3 * j, q3);
            assert!((got - want).abs() < 1e-13, "j={j}: {got} vs {want}");
        }
    }

    #[test]
    fn multi_quotient_examples() {
        let p = PExponent::two();
        let mq = multi_quotient_v(&[2, 3], (0, 7), p).unwrap();
        // every basis image has norm 1
        for pos in 0..8 {
            let x = LpVector::basis(pos, IndexLabel::window(0, 7));
            let y = mq.v.apply(&x).unwrap();
            assert!((y.norm(p) - 1.0).abs() < 1e-14);
        }
        let find = |a: i64, b: i64| {
            mq.separation
                .iter()
                .find(|((x, y), _)| *x == a && *y == b)
                .unwrap()
                .1
        };
        assert_eq!(find(0, 6), None); // 6 ≡ 0 mod 2 and mod 3
        assert_eq!(find(0, 3), Some(1)); // separates mod 2

        // single modulus: coset indicator embedding
        let mq1 = multi_quotient_v(&[3], (0, 5), p).unwrap();
        for pos in 0..6 {
            let x = LpVector::basis(pos, IndexLabel::window(0, 5));
            assert!((mq1.v.apply(&x).unwrap().norm(p) - 1.0).abs() < 1e-14);
        }
        // modulus 1: everything lands in the same coset
        let mqall = multi_quotient_v(&[1], (0, 3), p).unwrap();
        assert!(mqall.separation.iter().all(|(_, s)| s.is_none()));
    }

    #[test]
    fn quasicentral_unit_diagonal_family_exact() {
        let p = PExponent::new(2.5).unwrap();
        let lab = IndexLabel::cyclic(16);
        let w: Vec<f64> = (0..16).map(|i| (i as f64).sin().abs()).collect();
        let d = DiagonalOperator::from_reals(&w, lab).unwrap().to_operator();
        let unit = quasicentral_unit(&[d], &[1e-9, 1e-9], None, p).unwrap();
        assert!(unit.defects.iter().all(|&d| d < 1e-9));
        assert!(ll_less(&unit.stages[0], &unit.stages[1]));
    }

    #[test]
    fn quasicentral_unit_circular_shift_defect() {
        let p = PExponent::new(3.0).unwrap();
        let n = 64;
        let b = make_shift(ShiftKind::Circular, n);
        let unit = quasicentral_unit(&[b], &[0.26, 0.13], None, p).unwrap();
        // flat windows: defect = reciprocal ramp length < ε
        assert!(unit.defects[0] < 0.26 && unit.defects[0] > 0.0);
        assert!(unit.defects[1] < 0.13);
        assert!(ll_less(&unit.stages[0], &unit.stages[1]));
    }

    #[test]
    fn quasicentral_unit_infeasible_small_dim() {
        let p = PExponent::two();
        let b = make_shift(ShiftKind::Circular, 6);
        let err = quasicentral_unit(&[b], &[1e-3], None, p).unwrap_err();
        match err {
            Error::InfeasibleStage { best, .. } => assert!(best > 1e-3),
            other => panic!("expected infeasibility, got {other}"),
        }
    }

    #[test]
    fn support_floor_variant() {
        let p = PExponent::two();
        let n = 48;
        let u = make_shift(ShiftKind::Unilateral, n);
        let floors = [1usize, 4, 8];
        let unit = quasicentral_unit(&[u], &[0.3, 0.3, 0.3], Some(&floors), p).unwrap();
        for (stage, &m) in floors.iter().enumerate().skip(1) {
            let a = &unit.stages[stage].weights;
            let b = &unit.stages[stage - 1].weights;
            for i in 0..m.saturating_sub(1) {
                assert!((a[i] - b[i]).norm() == 0.0, "difference must vanish on [1, m_n]");
            }
        }
    }

    #[test]
    fn pinch_examples() {
        let p = PExponent::new(3.0).unwrap();
        let lab = IndexLabel::interval(2);
        let a1 = DiagonalOperator::from_reals(&[1.0, 0.0], lab.clone()).unwrap();
        let a2 = DiagonalOperator::from_reals(&[1.0, 1.0], lab.clone()).unwrap();
        let unit = ApproximateUnit {
            stages: vec![a1, a2],
            defects: vec![0.0, 0.0],
        };
        let x = LpVector::from_reals(&[0.3, -0.9], lab.clone()).unwrap();
        let zero = LpVector::zeros(lab.clone());
        let xs = vec![x.clone(), zero];
        let (first, second) = pinch_check(&unit, &x, &xs, p).unwrap();
        // disjoint differences: exactly ‖x‖-splitting, so first = 1
        assert!((first - 1.0).abs() < 1e-12);
        assert!(second <= 4.0f64.powf(p.p()));
        // single nonzero block vector: ratio 1
        assert!((second - 1.0).abs() < 1e-12);

        // single-stage unit: first = ‖A_1x‖^p/‖x‖^p ≤ 1; the range operator
        // completes to I past the last stage, so any block vector works
        let unit1 = ApproximateUnit {
            stages: vec![DiagonalOperator::from_reals(&[0.6, 0.2], lab.clone()).unwrap()],
            defects: vec![0.0],
        };
        let (f1, _) = pinch_check(&unit1, &x, std::slice::from_ref(&x), p).unwrap();
        assert!(f1 <= 1.0 + 1e-12);

        // a block vector not fixed by A_{n+1} − A_{n−2} is rejected: here
        // A_2 acts by 0.5 on the second coordinate
        let unit2 = ApproximateUnit {
            stages: vec![
                DiagonalOperator::from_reals(&[1.0, 0.0], lab.clone()).unwrap(),
                DiagonalOperator::from_reals(&[1.0, 0.5], lab.clone()).unwrap(),
            ],
            defects: vec![0.0, 0.0],
        };
        let bad = LpVector::from_reals(&[0.0, 1.0], lab.clone()).unwrap();
        let good = LpVector::zeros(lab);
        let err = pinch_check(&unit2, &x, &[bad, good], p).unwrap_err();
        assert!(matches!(err, Error::RangeViolation { .. }));
    }
}
