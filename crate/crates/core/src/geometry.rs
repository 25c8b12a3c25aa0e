//! Differential forms on the torus, the quotient `Ω¹/dΩ⁰`, and matrix-valued
//! fields.
//!
//! Multi-indices are bitmasks: bit `j` set means `dx_j` is present, so the
//! strictly increasing ordering comes for free.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{ensure_same_spec, Error, Result};
use crate::spectral::{FourierScalar, GridSpec};

/// Minimum `|det m(x)|` accepted by pointwise matrix inversion.
pub const EPS_INV: f64 = 1e-4;

type Mask = u32;

/// Masks with `k` bits out of `dim`, in lexicographic order of their index lists.
pub(crate) fn basis(dim: usize, k: usize) -> Vec<Mask> {
    fn rec(start: usize, dim: usize, k: usize, acc: Mask, out: &mut Vec<Mask>) {
        if k == 0 {
            out.push(acc);
            return;
        }
        for j in start..dim {
            rec(j + 1, dim, k - 1, acc | (1 << j), out);
        }
    }
    let mut out = Vec::new();
    if k <= dim {
        rec(0, dim, k, 0, &mut out);
    }
    out
}

pub(crate) fn mask_indices(mask: Mask) -> Vec<usize> {
    (0..32).filter(|j| mask & (1 << j) != 0).collect()
}

/// Sign of `dx_a ∧ dx_b` relative to the sorted basis element, or `None`
/// when the two share an index.
pub(crate) fn merge_sign(a: Mask, b: Mask) -> Option<f64> {
    if a & b != 0 {
        return None;
    }
    let swaps: u32 = mask_indices(b)
        .into_iter()
        .map(|j| (a >> (j + 1)).count_ones())
        .sum();
    Some(if swaps % 2 == 0 { 1.0 } else { -1.0 })
}

/// Sorts an index list; returns the mask and permutation sign, `None` on repeats.
pub(crate) fn sort_indices(idx: &[usize]) -> Option<(Mask, f64)> {
    let mut mask = 0;
    let mut sign = 1.0;
    for &j in idx {
        let bit: Mask = 1 << j;
        if mask & bit != 0 {
            return None;
        }
        // dx_j moves left past every already-placed larger index.
        if (mask >> (j + 1)).count_ones() % 2 == 1 {
            sign = -sign;
        }
        mask |= bit;
    }
    Some((mask, sign))
}

/// A differential `k`-form `Σ a_I dx_I` over increasing multi-indices.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct KForm {
    spec: GridSpec,
    degree: usize,
    comps: Vec<FourierScalar>,
}

impl KForm {
    pub fn zero(spec: GridSpec, degree: usize) -> Self {
        KForm {
            spec,
            degree,
            comps: vec![FourierScalar::zeros(spec); basis(spec.dim(), degree).len()],
        }
    }

    pub fn scalar(a: FourierScalar) -> Self {
        KForm {
            spec: a.spec(),
            degree: 0,
            comps: vec![a],
        }
    }

    /// `dx_axis` with unit coefficient.
    pub fn dx(spec: GridSpec, axis: usize) -> Result<Self> {
        Self::from_terms(spec, 1, vec![(vec![axis], FourierScalar::constant(spec, 1.0))])
    }

    /// Sums `a dx_{i_1} ∧ … ∧ dx_{i_k}` terms given in any index order.
    pub fn from_terms(
        spec: GridSpec,
        degree: usize,
        terms: Vec<(Vec<usize>, FourierScalar)>,
    ) -> Result<Self> {
        let mut form = Self::zero(spec, degree);
        let b = basis(spec.dim(), degree);
        for (idx, a) in terms {
            ensure_same_spec(spec, a.spec())?;
            if idx.len() != degree {
                return Err(Error::FormDegree {
                    expected: degree,
                    got: idx.len(),
                });
            }
            if let Some(&j) = idx.iter().find(|&&j| j >= spec.dim()) {
                return Err(Error::AxisOutOfRange {
                    axis: j,
                    dim: spec.dim(),
                });
            }
            if let Some((mask, sign)) = sort_indices(&idx) {
                let pos = b.iter().position(|&m| m == mask).expect("mask in basis");
                form.comps[pos] = &form.comps[pos] + &a.scale(sign);
            }
        }
        Ok(form)
    }

    /// A 1-form from its `dx_j` coefficients.
    pub fn one_form(coeffs: Vec<FourierScalar>) -> Result<Self> {
        let spec = coeffs
            .first()
            .map(FourierScalar::spec)
            .ok_or_else(|| Error::InvalidArgument("empty coefficient list".into()))?;
        if coeffs.len() != spec.dim() {
            return Err(Error::Shape {
                expected: spec.dim(),
                got: coeffs.len(),
            });
        }
        for c in &coeffs {
            ensure_same_spec(spec, c.spec())?;
        }
        Ok(KForm {
            spec,
            degree: 1,
            comps: coeffs,
        })
    }

    pub fn spec(&self) -> GridSpec {
        self.spec
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    /// True when the degree exceeds the dimension (the form is necessarily zero).
    pub fn is_degenerate(&self) -> bool {
        self.degree > self.spec.dim()
    }

    /// Coefficient of `dx_I` for a strictly increasing `I`.
    pub fn component(&self, idx: &[usize]) -> Option<&FourierScalar> {
        let (mask, sign) = sort_indices(idx)?;
        if sign < 0.0 || idx.len() != self.degree {
            return None;
        }
        let pos = basis(self.spec.dim(), self.degree)
            .iter()
            .position(|&m| m == mask)?;
        Some(&self.comps[pos])
    }

    /// `(I, a_I)` pairs in basis order.
    pub fn components(&self) -> impl Iterator<Item = (Vec<usize>, &FourierScalar)> {
        basis(self.spec.dim(), self.degree)
            .into_iter()
            .map(mask_indices)
            .zip(self.comps.iter())
    }

    pub fn coeff_list(&self) -> &[FourierScalar] {
        &self.comps
    }

    pub(crate) fn from_parts(spec: GridSpec, degree: usize, comps: Vec<FourierScalar>) -> Self {
        debug_assert_eq!(comps.len(), basis(spec.dim(), degree).len());
        KForm {
            spec,
            degree,
            comps,
        }
    }

    fn masks(&self) -> Vec<Mask> {
        basis(self.spec.dim(), self.degree)
    }

    pub fn map_coeffs(&self, f: impl Fn(&FourierScalar) -> FourierScalar + Sync + Send) -> Self {
        KForm {
            spec: self.spec,
            degree: self.degree,
            comps: self.comps.par_iter().map(f).collect(),
        }
    }

    pub fn scale(&self, s: f64) -> Self {
        self.map_coeffs(|a| a.scale(s))
    }

    /// Multiplies every coefficient by the function `a`.
    pub fn mul_scalar(&self, a: &FourierScalar) -> Self {
        self.map_coeffs(|c| c * a)
    }

    pub fn add(&self, other: &KForm) -> Result<Self> {
        self.check_same_shape(other)?;
        Ok(self.zip(other, |a, b| a + b))
    }

    pub fn sub(&self, other: &KForm) -> Result<Self> {
        self.check_same_shape(other)?;
        Ok(self.zip(other, |a, b| a - b))
    }

    fn zip(&self, other: &KForm, f: impl Fn(&FourierScalar, &FourierScalar) -> FourierScalar) -> Self {
        KForm {
            spec: self.spec,
            degree: self.degree,
            comps: self.comps.iter().zip(&other.comps).map(|(a, b)| f(a, b)).collect(),
        }
    }

    fn check_same_shape(&self, other: &KForm) -> Result<()> {
        ensure_same_spec(self.spec, other.spec)?;
        if self.degree != other.degree {
            return Err(Error::FormDegree {
                expected: self.degree,
                got: other.degree,
            });
        }
        Ok(())
    }

    pub fn wedge(&self, other: &KForm) -> Result<Self> {
        ensure_same_spec(self.spec, other.spec)?;
        let degree = self.degree + other.degree;
        let target = basis(self.spec.dim(), degree);
        let mut comps = vec![FourierScalar::zeros(self.spec); target.len()];
        for (ma, a) in self.masks().into_iter().zip(&self.comps) {
            if a.is_zero() {
                continue;
            }
            for (mb, b) in other.masks().into_iter().zip(&other.comps) {
                if b.is_zero() {
                    continue;
                }
                if let Some(sign) = merge_sign(ma, mb) {
                    let pos = target.iter().position(|&m| m == ma | mb).expect("in basis");
                    comps[pos] = &comps[pos] + &(a * b).scale(sign);
                }
            }
        }
        Ok(KForm {
            spec: self.spec,
            degree,
            comps,
        })
    }

    /// `d(a dx_I) = Σ_j ∂_j a dx_j ∧ dx_I`, summed over all axes.
    pub fn exterior_d(&self) -> Self {
        let dim = self.spec.dim();
        let target = basis(dim, self.degree + 1);
        let mut comps = vec![FourierScalar::zeros(self.spec); target.len()];
        for (mask, a) in self.masks().into_iter().zip(&self.comps) {
            if a.is_zero() {
                continue;
            }
            for j in 0..dim {
                if let Some(sign) = merge_sign(1 << j, mask) {
                    let pos = target.iter().position(|&m| m == mask | (1 << j)).expect("in basis");
                    comps[pos] = &comps[pos] + &a.partial(j).scale(sign);
                }
            }
        }
        KForm {
            spec: self.spec,
            degree: self.degree + 1,
            comps,
        }
    }

    pub fn max_abs_coeff(&self) -> f64 {
        self.comps.iter().map(FourierScalar::max_abs_coeff).fold(0.0, f64::max)
    }

    /// Coefficient sup of the difference; panics on shape mismatch.
    pub fn max_abs_diff(&self, other: &KForm) -> f64 {
        assert_eq!(self.degree, other.degree, "form degree mismatch");
        self.comps
            .iter()
            .zip(&other.comps)
            .map(|(a, b)| a.max_abs_diff(b))
            .fold(0.0, f64::max)
    }

    pub fn is_zero(&self) -> bool {
        self.comps.iter().all(FourierScalar::is_zero)
    }

    pub fn loss(&self) -> f64 {
        self.comps.iter().map(FourierScalar::loss).fold(0.0, f64::max)
    }
}

/// Canonical representative of a class in `Ω¹/dΩ⁰`: at every mode `r ≠ 0`
/// the coefficient vector is orthogonal to `r`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct KClass {
    rep: KForm,
}

impl KClass {
    pub fn project(form: &KForm) -> Result<Self> {
        if form.degree != 1 {
            return Err(Error::FormDegree {
                expected: 1,
                got: form.degree,
            });
        }
        let spec = form.spec;
        let dim = spec.dim();
        let mut coeffs: Vec<Vec<Complex64>> =
            form.comps.iter().map(|c| c.coeffs().to_vec()).collect();
        for idx in 0..spec.mode_count() {
            let r = spec.mode(idx);
            let rr: i64 = r.iter().map(|x| x * x).sum();
            if rr == 0 {
                continue;
            }
            let dot: Complex64 = (0..dim).map(|j| coeffs[j][idx] * r[j] as f64).sum();
            let t = dot / rr as f64;
            for j in 0..dim {
                coeffs[j][idx] -= t * r[j] as f64;
            }
        }
        let comps = coeffs
            .into_iter()
            .zip(&form.comps)
            .map(|(c, orig)| {
                FourierScalar::from_coeffs(spec, c)
                    .expect("same shape")
                    .with_loss(orig.loss())
            })
            .collect();
        Ok(KClass {
            rep: KForm {
                spec,
                degree: 1,
                comps,
            },
        })
    }

    pub fn zero(spec: GridSpec) -> Self {
        KClass {
            rep: KForm::zero(spec, 1),
        }
    }

    pub fn rep(&self) -> &KForm {
        &self.rep
    }

    pub fn spec(&self) -> GridSpec {
        self.rep.spec
    }

    pub fn add(&self, other: &KClass) -> Result<Self> {
        Ok(KClass {
            rep: self.rep.add(&other.rep)?,
        })
    }

    pub fn sub(&self, other: &KClass) -> Result<Self> {
        Ok(KClass {
            rep: self.rep.sub(&other.rep)?,
        })
    }

    pub fn scale(&self, s: f64) -> Self {
        KClass {
            rep: self.rep.scale(s),
        }
    }

    pub fn max_abs_coeff(&self) -> f64 {
        self.rep.max_abs_coeff()
    }

    pub fn max_abs_diff(&self, other: &KClass) -> f64 {
        self.rep.max_abs_diff(&other.rep)
    }

    /// Integral over the torus of each `dx_j` coefficient; for `N = 1` this
    /// is the isomorphism `Ω¹/dΩ⁰ ≅ ℝ`.
    pub fn periods(&self) -> Vec<f64> {
        self.rep.comps.iter().map(FourierScalar::integrate_mean).collect()
    }
}

/// An `n × n` matrix of functions on the torus.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MatrixField {
    spec: GridSpec,
    size: usize,
    entries: Vec<FourierScalar>,
}

impl MatrixField {
    pub fn from_entries(spec: GridSpec, size: usize, entries: Vec<FourierScalar>) -> Result<Self> {
        if entries.len() != size * size {
            return Err(Error::Shape {
                expected: size * size,
                got: entries.len(),
            });
        }
        for e in &entries {
            ensure_same_spec(spec, e.spec())?;
        }
        Ok(MatrixField {
            spec,
            size,
            entries,
        })
    }

    pub fn identity(spec: GridSpec) -> Self {
        let n = spec.dim();
        let entries = (0..n * n)
            .map(|i| FourierScalar::constant(spec, if i / n == i % n { 1.0 } else { 0.0 }))
            .collect();
        MatrixField {
            spec,
            size: n,
            entries,
        }
    }

    pub fn diagonal(diag: Vec<FourierScalar>) -> Result<Self> {
        let spec = diag
            .first()
            .map(FourierScalar::spec)
            .ok_or_else(|| Error::InvalidArgument("empty diagonal".into()))?;
        let n = diag.len();
        let mut entries = vec![FourierScalar::zeros(spec); n * n];
        for (i, d) in diag.into_iter().enumerate() {
            entries[i * n + i] = d;
        }
        Self::from_entries(spec, n, entries)
    }

    pub fn spec(&self) -> GridSpec {
        self.spec
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn entry(&self, i: usize, k: usize) -> &FourierScalar {
        &self.entries[i * self.size + k]
    }

    pub fn entries(&self) -> &[FourierScalar] {
        &self.entries
    }

    pub fn map_entries(&self, f: impl Fn(&FourierScalar) -> FourierScalar + Sync + Send) -> Self {
        MatrixField {
            spec: self.spec,
            size: self.size,
            entries: self.entries.par_iter().map(f).collect(),
        }
    }

    pub fn trace(&self) -> FourierScalar {
        (0..self.size).fold(FourierScalar::zeros(self.spec), |acc, i| {
            &acc + self.entry(i, i)
        })
    }

    pub fn matmul(&self, other: &MatrixField) -> Result<Self> {
        ensure_same_spec(self.spec, other.spec)?;
        if self.size != other.size {
            return Err(Error::Shape {
                expected: self.size,
                got: other.size,
            });
        }
        let n = self.size;
        let entries = (0..n * n)
            .into_par_iter()
            .map(|ik| {
                let (i, k) = (ik / n, ik % n);
                (0..n).fold(FourierScalar::zeros(self.spec), |acc, j| {
                    &acc + &(self.entry(i, j) * other.entry(j, k))
                })
            })
            .collect();
        Ok(MatrixField {
            spec: self.spec,
            size: n,
            entries,
        })
    }

    /// Matrix values at every grid point.
    pub fn grid_values(&self) -> Vec<DMatrix<f64>> {
        let grids: Vec<Vec<f64>> = self.entries.par_iter().map(|e| e.to_grid()).collect();
        let n = self.size;
        (0..self.spec.grid_len())
            .map(|p| DMatrix::from_fn(n, n, |i, k| grids[i * n + k][p]))
            .collect()
    }

    pub(crate) fn from_grid_values(spec: GridSpec, size: usize, values: &[DMatrix<f64>]) -> Self {
        let entries = (0..size * size)
            .into_par_iter()
            .map(|ik| {
                let samples: Vec<f64> = values.iter().map(|m| m[(ik / size, ik % size)]).collect();
                FourierScalar::fit_from_samples(&samples, spec).expect("grid length")
            })
            .collect();
        MatrixField {
            spec,
            size,
            entries,
        }
    }

    /// Smallest `|det|` on the grid and where it occurs.
    pub fn min_abs_det(&self) -> (f64, Vec<f64>) {
        let (i, d) = self
            .grid_values()
            .iter()
            .map(|m| m.determinant().abs())
            .enumerate()
            .fold((0, f64::INFINITY), |best, (i, d)| if d < best.1 { (i, d) } else { best });
        (d, self.spec.grid_point(i))
    }

    pub fn determinant(&self) -> FourierScalar {
        let dets: Vec<f64> = self.grid_values().iter().map(|m| m.determinant()).collect();
        FourierScalar::fit_from_samples(&dets, self.spec).expect("grid length")
    }

    /// Pointwise inverse on the oversampled grid.
    pub fn inverse(&self) -> Result<Self> {
        let values = self.grid_values();
        let mut inv = Vec::with_capacity(values.len());
        for (p, m) in values.iter().enumerate() {
            let det = m.determinant();
            if det.abs() < EPS_INV {
                return Err(Error::Domain {
                    location: self.spec.grid_point(p),
                    reason: format!("matrix nearly singular, det = {det:e}"),
                });
            }
            inv.push(m.clone().try_inverse().ok_or_else(|| Error::Domain {
                location: self.spec.grid_point(p),
                reason: format!("matrix not invertible, det = {det:e}"),
            })?);
        }
        Ok(Self::from_grid_values(self.spec, self.size, &inv))
    }

    /// Entrywise exterior derivative.
    pub fn differential(&self) -> FormMatrix {
        FormMatrix {
            spec: self.spec,
            size: self.size,
            entries: self
                .entries
                .par_iter()
                .map(|e| KForm::scalar(e.clone()).exterior_d())
                .collect(),
        }
    }

    pub fn max_abs_diff(&self, other: &MatrixField) -> f64 {
        self.entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| a.max_abs_diff(b))
            .fold(0.0, f64::max)
    }

    /// Sup over the grid of the entrywise difference.
    pub fn sup_diff(&self, other: &MatrixField) -> f64 {
        self.entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| (a - b).sup_norm())
            .fold(0.0, f64::max)
    }

    pub fn loss(&self) -> f64 {
        self.entries.iter().map(FourierScalar::loss).fold(0.0, f64::max)
    }
}

/// An `n × n` matrix of 1-forms, e.g. `df` for a matrix field `f`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FormMatrix {
    spec: GridSpec,
    size: usize,
    entries: Vec<KForm>,
}

impl FormMatrix {
    pub fn from_entries(spec: GridSpec, size: usize, entries: Vec<KForm>) -> Result<Self> {
        if entries.len() != size * size {
            return Err(Error::Shape {
                expected: size * size,
                got: entries.len(),
            });
        }
        for e in &entries {
            ensure_same_spec(spec, e.spec)?;
            if e.degree != 1 {
                return Err(Error::FormDegree {
                    expected: 1,
                    got: e.degree,
                });
            }
        }
        Ok(FormMatrix {
            spec,
            size,
            entries,
        })
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn entry(&self, i: usize, k: usize) -> &KForm {
        &self.entries[i * self.size + k]
    }

    /// `m · α` with scalar-times-form entries.
    pub fn left_mul(m: &MatrixField, alpha: &FormMatrix) -> Result<Self> {
        ensure_same_spec(m.spec, alpha.spec)?;
        let n = alpha.size;
        if m.size != n {
            return Err(Error::Shape {
                expected: n,
                got: m.size,
            });
        }
        let entries = (0..n * n)
            .into_par_iter()
            .map(|ik| {
                let (i, k) = (ik / n, ik % n);
                (0..n).fold(KForm::zero(m.spec, 1), |acc, j| {
                    acc.add(&alpha.entry(j, k).mul_scalar(m.entry(i, j)))
                        .expect("same shape")
                })
            })
            .collect();
        Ok(FormMatrix {
            spec: m.spec,
            size: n,
            entries,
        })
    }

    /// `α · m` with form-times-scalar entries.
    pub fn right_mul(alpha: &FormMatrix, m: &MatrixField) -> Result<Self> {
        ensure_same_spec(m.spec, alpha.spec)?;
        let n = alpha.size;
        if m.size != n {
            return Err(Error::Shape {
                expected: n,
                got: m.size,
            });
        }
        let entries = (0..n * n)
            .into_par_iter()
            .map(|ik| {
                let (i, k) = (ik / n, ik % n);
                (0..n).fold(KForm::zero(m.spec, 1), |acc, j| {
                    acc.add(&alpha.entry(i, j).mul_scalar(m.entry(j, k)))
                        .expect("same shape")
                })
            })
            .collect();
        Ok(FormMatrix {
            spec: m.spec,
            size: n,
            entries,
        })
    }
}

/// `Tr(α ∧ β) = Σ_{i,k} α_ik ∧ β_ki`.
pub fn matrix_wedge_trace(alpha: &FormMatrix, beta: &FormMatrix) -> Result<KForm> {
    ensure_same_spec(alpha.spec, beta.spec)?;
    if alpha.size != beta.size {
        return Err(Error::Shape {
            expected: alpha.size,
            got: beta.size,
        });
    }
    let n = alpha.size;
    let terms: Vec<KForm> = (0..n * n)
        .into_par_iter()
        .map(|ik| {
            let (i, k) = (ik / n, ik % n);
            alpha.entry(i, k).wedge(beta.entry(k, i)).expect("same spec")
        })
        .collect();
    terms
        .iter()
        .try_fold(KForm::zero(alpha.spec, 2), |acc, t| acc.add(t))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn unit_mode(spec: GridSpec, axis: usize, z: Complex64) -> FourierScalar {
        let mut r = vec![0; spec.dim()];
        r[axis] = 1;
        FourierScalar::from_modes(spec, &[(r, z)]).unwrap()
    }

    fn cos_axis(spec: GridSpec, axis: usize) -> FourierScalar {
        unit_mode(spec, axis, Complex64::new(0.5, 0.0))
    }

    fn sin_axis(spec: GridSpec, axis: usize) -> FourierScalar {
        unit_mode(spec, axis, Complex64::new(0.0, -0.5))
    }

    #[test]
    fn basis_and_signs() {
        assert_eq!(basis(3, 2), vec![0b011, 0b101, 0b110]);
        assert_eq!(basis(2, 3), Vec::<Mask>::new());
        assert_eq!(merge_sign(0b10, 0b01), Some(-1.0));
        assert_eq!(merge_sign(0b01, 0b10), Some(1.0));
        assert_eq!(merge_sign(0b01, 0b01), None);
        assert_eq!(sort_indices(&[2, 0, 1]), Some((0b111, 1.0)));
        assert_eq!(sort_indices(&[1, 0]), Some((0b11, -1.0)));
    }

    #[test]
    fn wedge_antisymmetry() {
        let spec = GridSpec::new(2, 2).unwrap();
        let dx1 = KForm::dx(spec, 0).unwrap();
        let dx2 = KForm::dx(spec, 1).unwrap();
        let a = dx1.wedge(&dx2).unwrap();
        let b = dx2.wedge(&dx1).unwrap();
        assert_eq!(a.max_abs_diff(&b.scale(-1.0)), 0.0);
        let f = dx1.mul_scalar(&cos_axis(spec, 1));
        assert!(f.wedge(&f).unwrap().is_zero());
    }

    #[test]
    fn wedge_of_cosines() {
        let spec = GridSpec::new(2, 3).unwrap();
        let a = KForm::from_terms(spec, 1, vec![(vec![0], cos_axis(spec, 0))]).unwrap();
        let b = KForm::from_terms(spec, 1, vec![(vec![1], cos_axis(spec, 1))]).unwrap();
        let w = a.wedge(&b).unwrap();
        let oracle = FourierScalar::sample(spec, |x| {
            (2.0 * PI * x[0]).cos() * (2.0 * PI * x[1]).cos()
        });
        assert!(w.component(&[0, 1]).unwrap().max_abs_diff(&oracle) < 1e-15);
        assert!(w.component(&[0, 1]).unwrap().max_abs_diff(&(&cos_axis(spec, 0) * &cos_axis(spec, 1))) < 1e-15);
    }

    #[test]
    fn wedge_beyond_dimension_is_degenerate_zero() {
        let spec = GridSpec::new(2, 2).unwrap();
        let dx1 = KForm::dx(spec, 0).unwrap();
        let top = dx1.wedge(&KForm::dx(spec, 1).unwrap()).unwrap();
        let over = top.wedge(&dx1).unwrap();
        assert!(over.is_degenerate());
        assert!(over.is_zero());
    }

    #[test]
    fn exterior_derivative_examples() {
        let spec = GridSpec::new(2, 3).unwrap();
        let s = sin_axis(spec, 0);
        let ds = KForm::scalar(s.clone()).exterior_d();
        assert!(ds.component(&[0]).unwrap().max_abs_diff(&cos_axis(spec, 0).scale(2.0 * PI)) < 1e-14);
        assert!(ds.component(&[1]).unwrap().is_zero());
        assert!(ds.exterior_d().is_zero());
        let w = KForm::from_terms(spec, 1, vec![(vec![1], s)]).unwrap().exterior_d();
        assert!(w.component(&[0, 1]).unwrap().max_abs_diff(&cos_axis(spec, 0).scale(2.0 * PI)) < 1e-14);
        assert!(w.exterior_d().is_degenerate());
    }

    #[test]
    fn projection_examples() {
        let spec = GridSpec::new(2, 3).unwrap();
        let exact = KForm::from_terms(spec, 1, vec![(vec![0], cos_axis(spec, 0))]).unwrap();
        // cos(2πx₁)dx₁ = d(sin(2πx₁)/2π)
        let primitive = KForm::scalar(sin_axis(spec, 0).scale(1.0 / (2.0 * PI))).exterior_d();
        assert!(exact.max_abs_diff(&primitive) < 1e-15);
        assert!(KClass::project(&exact).unwrap().max_abs_coeff() < 1e-16);
        let canonical = KForm::from_terms(spec, 1, vec![(vec![1], cos_axis(spec, 0))]).unwrap();
        assert_eq!(KClass::project(&canonical).unwrap().rep(), &canonical);
        let constant = KForm::dx(spec, 0).unwrap().scale(0.7);
        assert_eq!(KClass::project(&constant).unwrap().rep(), &constant);
        assert!(matches!(
            KClass::project(&KForm::zero(spec, 2)),
            Err(Error::FormDegree { .. })
        ));
    }

    #[test]
    fn trace_and_inverse() {
        let spec = GridSpec::new(2, 4).unwrap();
        let id = MatrixField::identity(spec);
        assert!(id.trace().max_abs_diff(&FourierScalar::constant(spec, 2.0)) < 1e-15);
        let u = cos_axis(spec, 1).scale(0.3);
        let v = sin_axis(spec, 0);
        let d = MatrixField::diagonal(vec![u.clone(), v.clone()]).unwrap();
        assert!(d.trace().max_abs_diff(&(&u + &v)) < 1e-15);
        assert!(id.inverse().unwrap().max_abs_diff(&id) < 1e-15);

        let spec = GridSpec::new(2, 16).unwrap();
        let u = cos_axis(spec, 0).scale(0.2);
        let m = MatrixField::diagonal(vec![
            u.map_grid(f64::exp),
            u.map_grid(|x| (-x).exp()),
        ])
        .unwrap();
        let expected = MatrixField::diagonal(vec![
            u.map_grid(|x| (-x).exp()),
            u.map_grid(f64::exp),
        ])
        .unwrap();
        assert!(m.inverse().unwrap().max_abs_diff(&expected) < 1e-14);
    }

    #[test]
    fn singular_matrix_reports_location() {
        let spec = GridSpec::new(2, 2).unwrap();
        let m = MatrixField::diagonal(vec![sin_axis(spec, 0), FourierScalar::constant(spec, 1.0)])
            .unwrap();
        match m.inverse() {
            Err(Error::Domain { location, reason }) => {
                assert_eq!(location.len(), 2);
                assert!(reason.contains("det"));
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn wedge_trace_small_cases() {
        let spec = GridSpec::new(2, 3).unwrap();
        let zero = MatrixField::from_entries(spec, 2, vec![FourierScalar::zeros(spec); 4])
            .unwrap()
            .differential();
        let m = MatrixField::diagonal(vec![cos_axis(spec, 0), sin_axis(spec, 1)]).unwrap();
        assert!(matrix_wedge_trace(&zero, &m.differential()).unwrap().is_zero());

        // 1x1 matrices of 1-forms reduce to a single wedge.
        let a = KForm::from_terms(spec, 1, vec![(vec![0], cos_axis(spec, 1))]).unwrap();
        let b = KForm::from_terms(spec, 1, vec![(vec![1], sin_axis(spec, 0))]).unwrap();
        let fa = FormMatrix::from_entries(spec, 1, vec![a.clone()]).unwrap();
        let fb = FormMatrix::from_entries(spec, 1, vec![b.clone()]).unwrap();
        let t = matrix_wedge_trace(&fa, &fb).unwrap();
        assert!(t.max_abs_diff(&a.wedge(&b).unwrap()) < 1e-15);
    }
}
