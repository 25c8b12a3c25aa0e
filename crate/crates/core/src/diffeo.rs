//! Diffeomorphisms `F(x) = A·x + f(x) mod 1` of the torus and vector fields.
//!
//! Composition follows `(FG)(x) = F(G(x))`; the jacobian map then satisfies
//! `(FG)^J = F^J(G)·G^J`. Functions, matrix fields and forms carry the right
//! action `a ↦ a(F)`.

use nalgebra::DMatrix;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{ensure_same_spec, Error, Result};
use crate::geometry::{basis, mask_indices, sort_indices, KForm, MatrixField};
use crate::spectral::{Evaluator, FourierScalar, GridSpec};

/// Minimum `|det(A + f^J)|` on the check grid.
pub const EPS_REG: f64 = 1e-3;
/// RK4 steps per flow are chosen so that `|t|·sup|v^J| / steps ≤ FLOW_STEP_RATE`.
pub const FLOW_STEP_RATE: f64 = 5e-3;
pub const FLOW_MIN_STEPS: usize = 4;
pub const FLOW_MAX_STEPS: usize = 4096;
pub const INVERSE_MAX_ITER: usize = 100;
const NEWTON_TOL: f64 = 1e-14;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Diffeo {
    spec: GridSpec,
    /// Row-major integer matrix with determinant ±1.
    winding: Vec<i64>,
    displacement: Vec<FourierScalar>,
    min_abs_det: f64,
    orientation: i8,
}

impl Diffeo {
    pub fn identity(spec: GridSpec) -> Self {
        let n = spec.dim();
        Diffeo {
            spec,
            winding: identity_winding(n),
            displacement: vec![FourierScalar::zeros(spec); n],
            min_abs_det: 1.0,
            orientation: 1,
        }
    }

    /// `x ↦ x + c`.
    pub fn translation(spec: GridSpec, shift: &[f64]) -> Result<Self> {
        if shift.len() != spec.dim() {
            return Err(Error::Shape {
                expected: spec.dim(),
                got: shift.len(),
            });
        }
        Self::from_displacement(
            shift
                .iter()
                .map(|&c| FourierScalar::constant(spec, c))
                .collect(),
        )
    }

    /// Identity winding plus a periodic displacement.
    pub fn from_displacement(displacement: Vec<FourierScalar>) -> Result<Self> {
        let n = displacement.len();
        Self::new(identity_winding(n), displacement)
    }

    pub fn new(winding: Vec<i64>, displacement: Vec<FourierScalar>) -> Result<Self> {
        let spec = displacement
            .first()
            .map(FourierScalar::spec)
            .ok_or_else(|| Error::InvalidArgument("empty displacement".into()))?;
        let n = spec.dim();
        if displacement.len() != n {
            return Err(Error::Shape {
                expected: n,
                got: displacement.len(),
            });
        }
        if winding.len() != n * n {
            return Err(Error::Shape {
                expected: n * n,
                got: winding.len(),
            });
        }
        for f in &displacement {
            ensure_same_spec(spec, f.spec())?;
        }
        let det = integer_matrix(&winding, n).determinant().round() as i64;
        if det.abs() != 1 {
            return Err(Error::InvalidArgument(format!(
                "winding determinant {det} is not ±1"
            )));
        }
        let mut d = Diffeo {
            spec,
            winding,
            displacement,
            min_abs_det: 0.0,
            orientation: 1,
        };
        d.certify()?;
        Ok(d)
    }

    fn certify(&mut self) -> Result<()> {
        let dets: Vec<f64> = self
            .jacobian()
            .grid_values()
            .iter()
            .map(|m| m.determinant())
            .collect();
        let min = dets.iter().cloned().fold(f64::INFINITY, f64::min);
        let max = dets.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        if min < 0.0 && max > 0.0 {
            return Err(Error::Regularity(format!(
                "jacobian determinant changes sign (range {min:e}..{max:e})"
            )));
        }
        let min_abs = dets.iter().map(|d| d.abs()).fold(f64::INFINITY, f64::min);
        if min_abs < EPS_REG {
            return Err(Error::Regularity(format!(
                "min |det F^J| = {min_abs:e} below {EPS_REG:e}"
            )));
        }
        self.min_abs_det = min_abs;
        self.orientation = if max > 0.0 { 1 } else { -1 };
        Ok(())
    }

    pub fn spec(&self) -> GridSpec {
        self.spec
    }

    pub fn winding(&self) -> &[i64] {
        &self.winding
    }

    pub fn displacement(&self) -> &[FourierScalar] {
        &self.displacement
    }

    /// Smallest `|det F^J|` seen on the check grid.
    pub fn certificate(&self) -> f64 {
        self.min_abs_det
    }

    pub fn orientation(&self) -> i8 {
        self.orientation
    }

    pub fn is_identity_winding(&self) -> bool {
        self.winding == identity_winding(self.spec.dim())
    }

    /// Lifted map `A·x + f(x)` (not reduced mod 1).
    pub fn map_point(&self, x: &[f64]) -> Vec<f64> {
        let evs: Vec<Evaluator> = self.displacement.iter().map(|f| f.evaluator()).collect();
        self.map_with(&evs, x)
    }

    fn map_with(&self, evs: &[Evaluator], x: &[f64]) -> Vec<f64> {
        let n = self.spec.dim();
        (0..n)
            .map(|i| {
                let lin: f64 = (0..n).map(|k| self.winding[i * n + k] as f64 * x[k]).sum();
                lin + evs[i].eval_real(x)
            })
            .collect()
    }

    /// Images of every grid point.
    pub fn grid_images(&self) -> Vec<Vec<f64>> {
        let evs: Vec<Evaluator> = self.displacement.iter().map(|f| f.evaluator()).collect();
        (0..self.spec.grid_len())
            .into_par_iter()
            .map(|p| self.map_with(&evs, &self.spec.grid_point(p)))
            .collect()
    }

    /// `F^J_{ik} = A_{ik} + ∂f_i/∂x_k`.
    pub fn jacobian(&self) -> MatrixField {
        let n = self.spec.dim();
        let entries = (0..n * n)
            .map(|ik| {
                let (i, k) = (ik / n, ik % n);
                &self.displacement[i].partial(k)
                    + &FourierScalar::constant(self.spec, self.winding[ik] as f64)
            })
            .collect();
        MatrixField::from_entries(self.spec, n, entries).expect("square")
    }

    /// `(FG)(x) = F(G(x))`.
    pub fn compose(&self, g: &Diffeo) -> Result<Diffeo> {
        ensure_same_spec(self.spec, g.spec)?;
        let n = self.spec.dim();
        let images = g.grid_images();
        let g_grid: Vec<Vec<f64>> = g.displacement.iter().map(|h| h.to_grid()).collect();
        let evs: Vec<Evaluator> = self.displacement.iter().map(|f| f.evaluator()).collect();
        let displacement = (0..n)
            .map(|i| {
                let samples: Vec<f64> = images
                    .par_iter()
                    .enumerate()
                    .map(|(p, y)| {
                        let lin: f64 = (0..n)
                            .map(|k| self.winding[i * n + k] as f64 * g_grid[k][p])
                            .sum();
                        lin + evs[i].eval_real(y)
                    })
                    .collect();
                FourierScalar::fit_from_samples(&samples, self.spec)
            })
            .collect::<Result<Vec<_>>>()?;
        let winding = int_matmul(&self.winding, &g.winding, n);
        Diffeo::new(winding, displacement).map_err(|e| match e {
            Error::Regularity(msg) => {
                Error::Regularity(format!("composition left the representable regime: {msg}"))
            }
            other => other,
        })
    }

    /// Newton solve of `A·x + f(x) = y` at every grid point `y`.
    pub fn inverse(&self) -> Result<Diffeo> {
        let n = self.spec.dim();
        let a = integer_matrix(&self.winding, n);
        let a_inv_f = a.clone().try_inverse().ok_or_else(|| {
            Error::InvalidArgument("winding matrix is singular".into())
        })?;
        let a_inv: Vec<i64> = a_inv_f.iter().map(|v| v.round() as i64).collect();
        // nalgebra is column-major; rebuild row-major.
        let a_inv: Vec<i64> = (0..n * n).map(|ik| a_inv[(ik % n) * n + ik / n]).collect();
        let evs: Vec<Evaluator> = self.displacement.iter().map(|f| f.evaluator()).collect();
        let jac_evs: Vec<Evaluator> = self
            .jacobian()
            .entries()
            .iter()
            .map(|e| e.evaluator())
            .collect();

        let solved: Vec<Result<Vec<f64>>> = (0..self.spec.grid_len())
            .into_par_iter()
            .map(|p| {
                let y = self.spec.grid_point(p);
                let mut x: Vec<f64> = (0..n)
                    .map(|i| (0..n).map(|k| a_inv[i * n + k] as f64 * y[k]).sum())
                    .collect();
                let mut residual = f64::INFINITY;
                for _ in 0..INVERSE_MAX_ITER {
                    let fx = self.map_with(&evs, &x);
                    let r = nalgebra::DVector::from_fn(n, |i, _| fx[i] - y[i]);
                    residual = r.amax();
                    if residual < NEWTON_TOL {
                        break;
                    }
                    let jac = DMatrix::from_fn(n, n, |i, k| jac_evs[i * n + k].eval_real(&x));
                    let step = jac.lu().solve(&r).ok_or_else(|| {
                        Error::Regularity(format!("singular jacobian at {x:?}"))
                    })?;
                    for i in 0..n {
                        x[i] -= step[i];
                    }
                }
                if residual >= NEWTON_TOL * 100.0 {
                    return Err(Error::NoConvergence {
                        iterations: INVERSE_MAX_ITER,
                        residual,
                    });
                }
                Ok((0..n)
                    .map(|i| x[i] - (0..n).map(|k| a_inv[i * n + k] as f64 * y[k]).sum::<f64>())
                    .collect())
            })
            .collect();
        let solved = solved.into_iter().collect::<Result<Vec<_>>>()?;
        let displacement = (0..n)
            .map(|i| {
                let samples: Vec<f64> = solved.iter().map(|h| h[i]).collect();
                FourierScalar::fit_from_samples(&samples, self.spec)
            })
            .collect::<Result<Vec<_>>>()?;
        Diffeo::new(a_inv, displacement)
    }

    /// Largest grid deviation of the displacement and winding from `other`.
    pub fn sup_diff(&self, other: &Diffeo) -> f64 {
        if self.winding != other.winding {
            return f64::INFINITY;
        }
        self.displacement
            .iter()
            .zip(&other.displacement)
            .map(|(a, b)| (a - b).sup_norm())
            .fold(0.0, f64::max)
    }

    pub fn max_abs_diff(&self, other: &Diffeo) -> f64 {
        if self.winding != other.winding {
            return f64::INFINITY;
        }
        self.displacement
            .iter()
            .zip(&other.displacement)
            .map(|(a, b)| a.max_abs_diff(b))
            .fold(0.0, f64::max)
    }

    pub fn loss(&self) -> f64 {
        self.displacement.iter().map(FourierScalar::loss).fold(0.0, f64::max)
    }
}

fn identity_winding(n: usize) -> Vec<i64> {
    (0..n * n).map(|i| i64::from(i / n == i % n)).collect()
}

fn integer_matrix(w: &[i64], n: usize) -> DMatrix<f64> {
    DMatrix::from_fn(n, n, |i, k| w[i * n + k] as f64)
}

fn int_matmul(a: &[i64], b: &[i64], n: usize) -> Vec<i64> {
    (0..n * n)
        .map(|ik| (0..n).map(|j| a[(ik / n) * n + j] * b[j * n + ik % n]).sum())
        .collect()
}

/// `a(F(x))`, refit on the oversampled grid.
pub fn act_on_scalar(a: &FourierScalar, f: &Diffeo) -> Result<FourierScalar> {
    ensure_same_spec(a.spec(), f.spec)?;
    Ok(compose_scalars(&[a], f).pop().expect("one"))
}

fn compose_scalars(list: &[&FourierScalar], f: &Diffeo) -> Vec<FourierScalar> {
    let images = f.grid_images();
    list.par_iter()
        .map(|a| {
            let ev = a.evaluator();
            let samples: Vec<f64> = images.iter().map(|y| ev.eval_real(y)).collect();
            FourierScalar::fit_from_samples(&samples, f.spec)
                .expect("grid length")
                .with_loss(a.loss())
        })
        .collect()
}

/// `m(F(x))` entrywise.
pub fn act_on_matrix(m: &MatrixField, f: &Diffeo) -> Result<MatrixField> {
    ensure_same_spec(m.spec(), f.spec)?;
    let entries: Vec<&FourierScalar> = m.entries().iter().collect();
    MatrixField::from_entries(m.spec(), m.size(), compose_scalars(&entries, f))
}

/// `(a dx_I)(F) = a(F) dF_{i_1} ∧ … ∧ dF_{i_k}`, evaluated pointwise through
/// minors of `F^J` and fitted once.
pub fn pullback_form(form: &KForm, f: &Diffeo) -> Result<KForm> {
    let spec = form.spec();
    ensure_same_spec(spec, f.spec)?;
    let k = form.degree();
    let dim = spec.dim();
    if k == 0 {
        return Ok(KForm::scalar(act_on_scalar(&form.coeff_list()[0], f)?));
    }
    if form.is_degenerate() {
        return Ok(form.clone());
    }
    let masks = basis(dim, k);
    let images = f.grid_images();
    let coeff_vals: Vec<Vec<f64>> = form
        .coeff_list()
        .par_iter()
        .map(|a| {
            if a.is_zero() {
                return vec![0.0; images.len()];
            }
            let ev = a.evaluator();
            images.iter().map(|y| ev.eval_real(y)).collect()
        })
        .collect();
    let jac = f.jacobian().grid_values();
    let comps = masks
        .par_iter()
        .map(|&out_mask| {
            let cols = mask_indices(out_mask);
            let samples: Vec<f64> = (0..images.len())
                .map(|p| {
                    masks
                        .iter()
                        .enumerate()
                        .filter(|(ii, _)| coeff_vals[*ii][p] != 0.0)
                        .map(|(ii, &in_mask)| {
                            let rows = mask_indices(in_mask);
                            let minor =
                                DMatrix::from_fn(k, k, |r, c| jac[p][(rows[r], cols[c])]);
                            coeff_vals[ii][p] * minor.determinant()
                        })
                        .sum()
                })
                .collect();
            FourierScalar::fit_from_samples(&samples, spec)
                .expect("grid length")
                .with_loss(form.loss())
        })
        .collect();
    Ok(KForm::from_parts(spec, k, comps))
}

/// A vector field `Σ v_j ∂/∂x_j`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VectorFieldT {
    spec: GridSpec,
    comps: Vec<FourierScalar>,
}

impl VectorFieldT {
    pub fn new(comps: Vec<FourierScalar>) -> Result<Self> {
        let spec = comps
            .first()
            .map(FourierScalar::spec)
            .ok_or_else(|| Error::InvalidArgument("empty vector field".into()))?;
        if comps.len() != spec.dim() {
            return Err(Error::Shape {
                expected: spec.dim(),
                got: comps.len(),
            });
        }
        for c in &comps {
            ensure_same_spec(spec, c.spec())?;
        }
        Ok(VectorFieldT { spec, comps })
    }

    pub fn zero(spec: GridSpec) -> Self {
        VectorFieldT {
            spec,
            comps: vec![FourierScalar::zeros(spec); spec.dim()],
        }
    }

    pub fn constant(spec: GridSpec, c: &[f64]) -> Result<Self> {
        Self::new(c.iter().map(|&x| FourierScalar::constant(spec, x)).collect())
    }

    /// `a ∂/∂x_axis`.
    pub fn along(a: FourierScalar, axis: usize) -> Result<Self> {
        let spec = a.spec();
        if axis >= spec.dim() {
            return Err(Error::AxisOutOfRange {
                axis,
                dim: spec.dim(),
            });
        }
        let mut v = Self::zero(spec);
        v.comps[axis] = a;
        Ok(v)
    }

    pub fn spec(&self) -> GridSpec {
        self.spec
    }

    pub fn components(&self) -> &[FourierScalar] {
        &self.comps
    }

    /// `(∂v_i/∂x_k)`.
    pub fn jacobian(&self) -> MatrixField {
        let n = self.spec.dim();
        let entries = (0..n * n)
            .map(|ik| self.comps[ik / n].partial(ik % n))
            .collect();
        MatrixField::from_entries(self.spec, n, entries).expect("square")
    }

    /// `v·a = Σ v_j ∂a/∂x_j`.
    pub fn apply(&self, a: &FourierScalar) -> FourierScalar {
        self.comps
            .iter()
            .enumerate()
            .fold(FourierScalar::zeros(self.spec), |acc, (j, vj)| {
                if vj.is_zero() {
                    acc
                } else {
                    &acc + &(vj * &a.partial(j))
                }
            })
    }

    /// `[v,w]_i = Σ_j (v_j ∂w_i/∂x_j − w_j ∂v_i/∂x_j)`.
    pub fn lie_bracket(&self, w: &VectorFieldT) -> Result<VectorFieldT> {
        ensure_same_spec(self.spec, w.spec)?;
        let comps = (0..self.spec.dim())
            .into_par_iter()
            .map(|i| &self.apply(&w.comps[i]) - &w.apply(&self.comps[i]))
            .collect();
        Ok(VectorFieldT {
            spec: self.spec,
            comps,
        })
    }

    pub fn divergence(&self) -> FourierScalar {
        self.jacobian().trace()
    }

    /// Lie derivative `v·ω`: `(v·a) dx_I + Σ_r a dx_{j_1} ∧ … ∧ dv_{j_r} ∧ … ∧ dx_{j_k}`.
    pub fn lie_derivative(&self, form: &KForm) -> Result<KForm> {
        ensure_same_spec(self.spec, form.spec())?;
        let dim = self.spec.dim();
        let k = form.degree();
        let mut out = form.map_coeffs(|a| self.apply(a));
        if k == 0 || form.is_degenerate() {
            return Ok(out);
        }
        let grads: Vec<Vec<FourierScalar>> = self.comps.iter().map(|c| c.gradient()).collect();
        let mut terms = Vec::new();
        for (idx, a) in form.components() {
            if a.is_zero() {
                continue;
            }
            for (r, &jr) in idx.iter().enumerate() {
                for (m, grad) in grads[jr].iter().enumerate() {
                    if grad.is_zero() {
                        continue;
                    }
                    let mut new_idx = idx.clone();
                    new_idx[r] = m;
                    if sort_indices(&new_idx).is_some() {
                        terms.push((new_idx, a * grad));
                    }
                }
            }
        }
        let extra = KForm::from_terms(self.spec, k, terms)?;
        out = out.add(&extra)?;
        debug_assert!(dim >= k);
        Ok(out)
    }

    pub fn add(&self, other: &VectorFieldT) -> Result<VectorFieldT> {
        ensure_same_spec(self.spec, other.spec)?;
        Ok(VectorFieldT {
            spec: self.spec,
            comps: self.comps.iter().zip(&other.comps).map(|(a, b)| a + b).collect(),
        })
    }

    pub fn scale(&self, s: f64) -> VectorFieldT {
        VectorFieldT {
            spec: self.spec,
            comps: self.comps.iter().map(|a| a.scale(s)).collect(),
        }
    }

    pub fn max_abs_diff(&self, other: &VectorFieldT) -> f64 {
        self.comps
            .iter()
            .zip(&other.comps)
            .map(|(a, b)| a.max_abs_diff(b))
            .fold(0.0, f64::max)
    }

    pub fn max_abs_coeff(&self) -> f64 {
        self.comps.iter().map(FourierScalar::max_abs_coeff).fold(0.0, f64::max)
    }

    /// Time-`t` flow by fixed-step RK4 from every grid point, with the step
    /// count scaled to `|t|·sup|v^J|`.
    pub fn flow(&self, t: f64) -> Result<Diffeo> {
        let rate = self
            .jacobian()
            .entries()
            .iter()
            .map(FourierScalar::sup_norm)
            .fold(0.0, f64::max);
        let steps = (t.abs() * rate / FLOW_STEP_RATE).ceil();
        let steps = if steps.is_finite() { steps as usize } else { FLOW_MAX_STEPS };
        self.flow_with_steps(t, steps.clamp(FLOW_MIN_STEPS, FLOW_MAX_STEPS))
    }

    pub fn flow_with_steps(&self, t: f64, steps: usize) -> Result<Diffeo> {
        if steps == 0 {
            return Err(Error::InvalidArgument("flow needs at least one step".into()));
        }
        let n = self.spec.dim();
        let evs: Vec<Evaluator> = self.comps.iter().map(|c| c.evaluator()).collect();
        let field = |x: &[f64]| -> Vec<f64> { evs.iter().map(|e| e.eval_real(x)).collect() };
        let h = t / steps as f64;
        let finals: Vec<Vec<f64>> = (0..self.spec.grid_len())
            .into_par_iter()
            .map(|p| {
                let x0 = self.spec.grid_point(p);
                let mut x = x0.clone();
                let shifted = |x: &[f64], k: &[f64], s: f64| -> Vec<f64> {
                    x.iter().zip(k).map(|(a, b)| a + s * b).collect()
                };
                for _ in 0..steps {
                    let k1 = field(&x);
                    let k2 = field(&shifted(&x, &k1, h / 2.0));
                    let k3 = field(&shifted(&x, &k2, h / 2.0));
                    let k4 = field(&shifted(&x, &k3, h));
                    for i in 0..n {
                        x[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
                    }
                }
                x.iter().zip(&x0).map(|(a, b)| a - b).collect()
            })
            .collect();
        let displacement = (0..n)
            .map(|i| {
                let samples: Vec<f64> = finals.iter().map(|d| d[i]).collect();
                FourierScalar::fit_from_samples(&samples, self.spec)
            })
            .collect::<Result<Vec<_>>>()?;
        Diffeo::from_displacement(displacement).map_err(|e| match e {
            Error::Regularity(msg) => Error::Regularity(format!(
                "flow to t = {t} is not regular ({msg}); use a smaller t"
            )),
            other => other,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;
    use std::f64::consts::PI;

    fn mode(spec: GridSpec, axis: usize, k: i64, z: Complex64) -> FourierScalar {
        let mut r = vec![0; spec.dim()];
        r[axis] = k;
        FourierScalar::from_modes(spec, &[(r, z)]).unwrap()
    }

    fn sin_axis(spec: GridSpec, axis: usize) -> FourierScalar {
        mode(spec, axis, 1, Complex64::new(0.0, -0.5))
    }

    fn cos_axis(spec: GridSpec, axis: usize) -> FourierScalar {
        mode(spec, axis, 1, Complex64::new(0.5, 0.0))
    }

    fn circle_bump(spec: GridSpec, eps: f64) -> Diffeo {
        Diffeo::from_displacement(vec![sin_axis(spec, 0).scale(eps)]).unwrap()
    }

    #[test]
    fn identity_and_translation_composition() {
        let spec = GridSpec::new(2, 6).unwrap();
        let g = Diffeo::from_displacement(vec![
            sin_axis(spec, 1).scale(0.05),
            cos_axis(spec, 0).scale(0.03),
        ])
        .unwrap();
        let id = Diffeo::identity(spec);
        assert!(id.compose(&g).unwrap().max_abs_diff(&g) < 1e-15);
        assert!(g.compose(&id).unwrap().max_abs_diff(&g) < 1e-15);
        let t1 = Diffeo::translation(spec, &[0.1, 0.2]).unwrap();
        let t2 = Diffeo::translation(spec, &[0.05, -0.3]).unwrap();
        let t = t1.compose(&t2).unwrap();
        let expected = Diffeo::translation(spec, &[0.15, -0.1]).unwrap();
        assert!(t.max_abs_diff(&expected) < 1e-15);
    }

    #[test]
    fn inverse_of_translation_and_identity() {
        let spec = GridSpec::new(2, 4).unwrap();
        let t = Diffeo::translation(spec, &[0.1, -0.25]).unwrap();
        let inv = t.inverse().unwrap();
        let expected = Diffeo::translation(spec, &[-0.1, 0.25]).unwrap();
        assert!(inv.max_abs_diff(&expected) < 1e-14);
        let id = Diffeo::identity(spec);
        assert!(id.inverse().unwrap().max_abs_diff(&id) < 1e-15);
    }

    #[test]
    fn circle_inverse_matches_bisection() {
        let spec = GridSpec::new(1, 48).unwrap();
        let f = circle_bump(spec, 0.1);
        let inv = f.inverse().unwrap();
        let dev = f.compose(&inv).unwrap().sup_diff(&Diffeo::identity(spec));
        assert!(dev < 1e-8, "F∘F⁻¹ deviation {dev:e}");
        // Bisection oracle at off-grid points.
        for &y in &[0.013, 0.37, 0.5, 0.81] {
            let (mut lo, mut hi) = (y - 0.5, y + 0.5);
            for _ in 0..200 {
                let mid = 0.5 * (lo + hi);
                if mid + 0.1 * (2.0 * PI * mid).sin() < y {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            let x = inv.map_point(&[y])[0];
            assert!((x - lo).abs() < 1e-8, "at {y}: {x} vs {lo}");
        }
    }

    #[test]
    fn winding_inverse() {
        let spec = GridSpec::new(2, 12).unwrap();
        let f = Diffeo::new(
            vec![1, 1, 0, 1],
            vec![sin_axis(spec, 1).scale(0.02), cos_axis(spec, 0).scale(0.02)],
        )
        .unwrap();
        let inv = f.inverse().unwrap();
        assert_eq!(inv.winding(), &[1, -1, 0, 1]);
        let dev = f.compose(&inv).unwrap().sup_diff(&Diffeo::identity(spec));
        assert!(dev < 1e-9, "{dev:e}");
        assert!(Diffeo::new(vec![2, 0, 0, 1], vec![FourierScalar::zeros(spec); 2]).is_err());
    }

    #[test]
    fn jacobian_examples() {
        let spec = GridSpec::new(1, 4).unwrap();
        assert!(Diffeo::identity(spec)
            .jacobian()
            .max_abs_diff(&MatrixField::identity(spec))
            < 1e-15);
        let eps = 0.07;
        let j = circle_bump(spec, eps).jacobian();
        let expected = &FourierScalar::constant(spec, 1.0) + &cos_axis(spec, 0).scale(2.0 * PI * eps);
        assert!(j.entry(0, 0).max_abs_diff(&expected) < 1e-15);
    }

    #[test]
    fn regularity_failure() {
        let spec = GridSpec::new(1, 4).unwrap();
        // 1 + 2π·0.2·cos changes sign.
        let err = Diffeo::from_displacement(vec![sin_axis(spec, 0).scale(0.2)]).unwrap_err();
        assert!(matches!(err, Error::Regularity(_)));
    }

    #[test]
    fn actions_on_scalars() {
        let spec = GridSpec::new(2, 8).unwrap();
        let a = sin_axis(spec, 0);
        let id = Diffeo::identity(spec);
        assert!(act_on_scalar(&a, &id).unwrap().max_abs_diff(&a) < 1e-15);
        let t = Diffeo::translation(spec, &[0.25, 0.0]).unwrap();
        assert!(act_on_scalar(&a, &t).unwrap().max_abs_diff(&cos_axis(spec, 0)) < 1e-15);
        let c = FourierScalar::constant(spec, 4.0);
        let f = Diffeo::from_displacement(vec![sin_axis(spec, 1).scale(0.03), FourierScalar::zeros(spec)])
            .unwrap();
        assert!(act_on_scalar(&c, &f).unwrap().max_abs_diff(&c) < 1e-14);
    }

    #[test]
    fn pullback_of_dx() {
        let spec = GridSpec::new(2, 6).unwrap();
        let eps = 0.05;
        let f = Diffeo::from_displacement(vec![sin_axis(spec, 0).scale(eps), FourierScalar::zeros(spec)])
            .unwrap();
        let dx1 = KForm::dx(spec, 0).unwrap();
        let pb = pullback_form(&dx1, &f).unwrap();
        let expected = &FourierScalar::constant(spec, 1.0) + &cos_axis(spec, 0).scale(2.0 * PI * eps);
        assert!(pb.component(&[0]).unwrap().max_abs_diff(&expected) < 1e-14);
        assert!(pb.component(&[1]).unwrap().max_abs_coeff() < 1e-15);
        let id = Diffeo::identity(spec);
        let w = dx1.mul_scalar(&cos_axis(spec, 1));
        assert!(pullback_form(&w, &id).unwrap().max_abs_diff(&w) < 1e-15);
    }

    #[test]
    fn bracket_examples() {
        let spec = GridSpec::new(2, 4).unwrap();
        let d1 = VectorFieldT::constant(spec, &[1.0, 0.0]).unwrap();
        let d2 = VectorFieldT::constant(spec, &[0.0, 1.0]).unwrap();
        assert!(d1.lie_bracket(&d2).unwrap().max_abs_coeff() == 0.0);
        let w = VectorFieldT::along(sin_axis(spec, 0), 1).unwrap();
        let b = d1.lie_bracket(&w).unwrap();
        let expected = VectorFieldT::along(cos_axis(spec, 0).scale(2.0 * PI), 1).unwrap();
        assert!(b.max_abs_diff(&expected) < 1e-14);
    }

    #[test]
    fn lie_derivative_examples() {
        let spec = GridSpec::new(2, 4).unwrap();
        let a = &sin_axis(spec, 0) * &cos_axis(spec, 1);
        let d1 = VectorFieldT::constant(spec, &[1.0, 0.0]).unwrap();
        let form = KForm::from_terms(spec, 1, vec![(vec![1], a.clone())]).unwrap();
        let l = d1.lie_derivative(&form).unwrap();
        assert!(l.component(&[1]).unwrap().max_abs_diff(&a.partial(0)) < 1e-14);
        assert!(l.component(&[0]).unwrap().is_zero());
        let v = VectorFieldT::along(cos_axis(spec, 1), 0).unwrap();
        let l0 = v.lie_derivative(&KForm::scalar(a.clone())).unwrap();
        assert!(l0.coeff_list()[0].max_abs_diff(&v.apply(&a)) < 1e-15);
    }

    #[test]
    fn divergence_examples() {
        let spec = GridSpec::new(2, 4).unwrap();
        assert!(VectorFieldT::constant(spec, &[1.0, 0.0]).unwrap().divergence().is_zero());
        assert!(VectorFieldT::along(sin_axis(spec, 1), 0).unwrap().divergence().is_zero());
        let d = VectorFieldT::along(sin_axis(spec, 0), 0).unwrap().divergence();
        assert!(d.max_abs_diff(&cos_axis(spec, 0).scale(2.0 * PI)) < 1e-14);
    }

    #[test]
    fn flow_examples() {
        let spec = GridSpec::new(2, 4).unwrap();
        let c = VectorFieldT::constant(spec, &[0.3, 0.0]).unwrap();
        let f = c.flow(0.5).unwrap();
        assert!(f.max_abs_diff(&Diffeo::translation(spec, &[0.15, 0.0]).unwrap()) < 1e-14);
        let v = VectorFieldT::along(sin_axis(spec, 0).scale(0.2), 0).unwrap();
        assert!(v.flow(0.0).unwrap().max_abs_diff(&Diffeo::identity(spec)) < 1e-15);
    }

    #[test]
    fn flow_too_long_is_rejected() {
        let spec = GridSpec::new(1, 8).unwrap();
        let v = VectorFieldT::along(sin_axis(spec, 0).scale(1.0), 0).unwrap();
        assert!(matches!(v.flow(2.0), Err(Error::Regularity(_))));
    }
}
