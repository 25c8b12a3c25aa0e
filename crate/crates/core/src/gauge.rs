//! Gauge groups `Map(Tᴺ, GL_n)` and `Map(X, ℝ*)` with their central cocycles.

use std::collections::BTreeMap;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::diffeo::{act_on_matrix, act_on_scalar, Diffeo};
use crate::error::{ensure_same_spec, Error, Result};
use crate::geometry::{basis, mask_indices, matrix_wedge_trace, FormMatrix, KClass, KForm, MatrixField, EPS_INV};
use crate::spectral::{FourierScalar, GridSpec, UnaryFn};

/// Pointwise invertible matrix field.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GaugeMap {
    field: MatrixField,
    min_abs_det: f64,
}

impl GaugeMap {
    pub fn new(field: MatrixField) -> Result<Self> {
        let (min_abs_det, at) = field.min_abs_det();
        if min_abs_det < EPS_INV {
            return Err(Error::Domain {
                location: at,
                reason: format!("|det| = {min_abs_det:e} below {EPS_INV:e}"),
            });
        }
        Ok(GaugeMap { field, min_abs_det })
    }

    pub fn identity(spec: GridSpec) -> Self {
        GaugeMap {
            field: MatrixField::identity(spec),
            min_abs_det: 1.0,
        }
    }

    pub fn field(&self) -> &MatrixField {
        &self.field
    }

    pub fn spec(&self) -> GridSpec {
        self.field.spec()
    }

    pub fn size(&self) -> usize {
        self.field.size()
    }

    pub fn certificate(&self) -> f64 {
        self.min_abs_det
    }

    /// Pointwise product `f·g`.
    pub fn multiply(&self, other: &GaugeMap) -> Result<GaugeMap> {
        GaugeMap::new(self.field.matmul(&other.field)?)
    }

    pub fn inverse(&self) -> Result<GaugeMap> {
        GaugeMap::new(self.field.inverse()?)
    }

    /// `f(H(x))`.
    pub fn act(&self, h: &Diffeo) -> Result<GaugeMap> {
        GaugeMap::new(act_on_matrix(&self.field, h)?)
    }

    pub fn sup_diff(&self, other: &GaugeMap) -> f64 {
        self.field.sup_diff(&other.field)
    }

    pub fn max_abs_diff(&self, other: &GaugeMap) -> f64 {
        self.field.max_abs_diff(&other.field)
    }
}

/// Nonvanishing function `sign·exp(u)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LoopPos {
    logval: FourierScalar,
    sign: i8,
}

impl LoopPos {
    pub fn new(logval: FourierScalar, sign: i8) -> Result<Self> {
        if sign != 1 && sign != -1 {
            return Err(Error::InvalidArgument(format!("sign must be ±1, got {sign}")));
        }
        Ok(LoopPos { logval, sign })
    }

    pub fn positive(logval: FourierScalar) -> Self {
        LoopPos { logval, sign: 1 }
    }

    pub fn identity(spec: GridSpec) -> Self {
        Self::positive(FourierScalar::zeros(spec))
    }

    /// Log-representation of a nonvanishing field; fails near zeros.
    pub fn from_values(a: &FourierScalar) -> Result<Self> {
        let grid = a.to_grid();
        let sign = if grid.first().copied().unwrap_or(1.0) < 0.0 { -1 } else { 1 };
        if grid.iter().any(|v| v * sign as f64 <= 0.0) {
            return Err(Error::Domain {
                location: Vec::new(),
                reason: "function changes sign".into(),
            });
        }
        Ok(LoopPos {
            logval: a.pointwise_unary(UnaryFn::LnAbs)?,
            sign,
        })
    }

    pub fn logval(&self) -> &FourierScalar {
        &self.logval
    }

    pub fn sign(&self) -> i8 {
        self.sign
    }

    pub fn spec(&self) -> GridSpec {
        self.logval.spec()
    }

    pub fn multiply(&self, other: &LoopPos) -> Result<LoopPos> {
        ensure_same_spec(self.spec(), other.spec())?;
        Ok(LoopPos {
            logval: &self.logval + &other.logval,
            sign: self.sign * other.sign,
        })
    }

    pub fn inverse(&self) -> LoopPos {
        LoopPos {
            logval: -&self.logval,
            sign: self.sign,
        }
    }

    pub fn act(&self, h: &Diffeo) -> Result<LoopPos> {
        Ok(LoopPos {
            logval: act_on_scalar(&self.logval, h)?,
            sign: self.sign,
        })
    }

    /// Values `sign·exp(u)` refit.
    pub fn values(&self) -> Result<FourierScalar> {
        Ok(self.logval.pointwise_unary(UnaryFn::Exp)?.scale(self.sign as f64))
    }

    pub fn max_abs_diff(&self, other: &LoopPos) -> f64 {
        if self.sign != other.sign {
            return f64::INFINITY;
        }
        self.logval.max_abs_diff(&other.logval)
    }
}

/// `Tr(f⁻¹df ∧ dg g⁻¹)`, evaluated pointwise on the grid and fitted once.
///
/// With `P_m = f⁻¹∂_m f` and `Q_m = ∂_m g·g⁻¹` the `dx_a∧dx_b` coefficient is
/// `Tr(P_a Q_b) − Tr(P_b Q_a)`.
pub fn gauge_cocycle_gl(f: &GaugeMap, g: &GaugeMap) -> Result<KForm> {
    let spec = f.spec();
    ensure_same_spec(spec, g.spec())?;
    if f.size() != g.size() {
        return Err(Error::Shape {
            expected: f.size(),
            got: g.size(),
        });
    }
    let dim = spec.dim();
    if dim < 2 {
        return Ok(KForm::zero(spec, 2));
    }
    let n = f.size();
    let f_vals = f.field.grid_values();
    let g_vals = g.field.grid_values();
    let partial_grid = |m: &MatrixField, axis: usize| -> Vec<DMatrix<f64>> {
        m.map_entries(|e| e.partial(axis)).grid_values()
    };
    let df: Vec<Vec<DMatrix<f64>>> = (0..dim).map(|a| partial_grid(&f.field, a)).collect();
    let dg: Vec<Vec<DMatrix<f64>>> = (0..dim).map(|a| partial_grid(&g.field, a)).collect();
    let masks = basis(dim, 2);
    let per_point: Vec<Result<Vec<f64>>> = (0..spec.grid_len())
        .into_par_iter()
        .map(|p| {
            let singular = |which: &str| Error::Domain {
                location: spec.grid_point(p),
                reason: format!("{which} is singular"),
            };
            let f_inv = f_vals[p].clone().try_inverse().ok_or_else(|| singular("f"))?;
            let g_inv = g_vals[p].clone().try_inverse().ok_or_else(|| singular("g"))?;
            let pm: Vec<DMatrix<f64>> = (0..dim).map(|a| &f_inv * &df[a][p]).collect();
            let qm: Vec<DMatrix<f64>> = (0..dim).map(|a| &dg[a][p] * &g_inv).collect();
            let tr = |a: &DMatrix<f64>, b: &DMatrix<f64>| -> f64 {
                (0..n)
                    .map(|i| (0..n).map(|k| a[(i, k)] * b[(k, i)]).sum::<f64>())
                    .sum()
            };
            Ok(masks
                .iter()
                .map(|&mask| {
                    let ab = mask_indices(mask);
                    let (a, b) = (ab[0], ab[1]);
                    tr(&pm[a], &qm[b]) - tr(&pm[b], &qm[a])
                })
                .collect())
        })
        .collect();
    let per_point = per_point.into_iter().collect::<Result<Vec<_>>>()?;
    let loss = f.field.loss().max(g.field.loss());
    let comps = (0..masks.len())
        .map(|c| {
            let samples: Vec<f64> = per_point.iter().map(|v| v[c]).collect();
            Ok(FourierScalar::fit_from_samples(&samples, spec)?.with_loss(loss))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(KForm::from_parts(spec, 2, comps))
}

/// The same cocycle through refit inverses and the matrix wedge-trace.
pub fn gauge_cocycle_gl_composed(f: &GaugeMap, g: &GaugeMap) -> Result<KForm> {
    let f_inv = f.field.inverse()?;
    let g_inv = g.field.inverse()?;
    let alpha = FormMatrix::left_mul(&f_inv, &f.field.differential())?;
    let beta = FormMatrix::right_mul(&g.field.differential(), &g_inv)?;
    matrix_wedge_trace(&alpha, &beta)
}

/// Class of `ln|f| d ln|g|` in `Ω¹/dΩ⁰`.
pub fn heisenberg_cocycle_form(f: &LoopPos, g: &LoopPos) -> Result<KClass> {
    ensure_same_spec(f.spec(), g.spec())?;
    let u = &f.logval;
    let comps = g
        .logval
        .gradient()
        .iter()
        .map(|dv| u.multiply(dv))
        .collect::<Result<Vec<_>>>()?;
    KClass::project(&KForm::one_form(comps)?)
}

/// `∫_{S¹} ln|f| d ln|g|`.
pub fn heisenberg_cocycle_circle(f: &LoopPos, g: &LoopPos) -> Result<f64> {
    ensure_circle(f.spec())?;
    ensure_same_spec(f.spec(), g.spec())?;
    Ok(f.logval.multiply(&g.logval.partial(0))?.integrate_mean())
}

/// Double integral over `S¹×[0,1]` of `f̃⁻¹df̃ ∧ dg̃ g̃⁻¹` with
/// `f̃ = exp(τu)`, `g̃ = exp(τv)`; trapezoid rule in τ.
pub fn homotopy_cocycle_oracle(f: &LoopPos, g: &LoopPos, steps: usize) -> Result<f64> {
    let spec = f.spec();
    ensure_circle(spec)?;
    ensure_same_spec(spec, g.spec())?;
    if steps == 0 {
        return Err(Error::InvalidArgument("steps must be positive".into()));
    }
    let u = f.logval.to_grid();
    let v = g.logval.to_grid();
    let slice = |tau: f64| -> Result<f64> {
        // Log-derivatives of the contracted loops, computed from their values.
        let log_derivs = |w: &[f64]| -> Result<(Vec<f64>, Vec<f64>)> {
            let vals: Vec<f64> = w.iter().map(|x| (tau * x).exp()).collect();
            let fitted = FourierScalar::fit_from_samples(&vals, spec)?;
            let dt = fitted.partial(0).to_grid();
            let d_tau: Vec<f64> = w.iter().zip(&vals).map(|(x, e)| x * e / e).collect();
            let d_t: Vec<f64> = dt.iter().zip(&vals).map(|(d, e)| d / e).collect();
            Ok((d_tau, d_t))
        };
        let (a_tau, a_t) = log_derivs(&u)?;
        let (b_tau, b_t) = log_derivs(&v)?;
        let n = a_tau.len() as f64;
        Ok((0..a_tau.len())
            .map(|p| a_tau[p] * b_t[p] - a_t[p] * b_tau[p])
            .sum::<f64>()
            / n)
    };
    let h = 1.0 / steps as f64;
    let vals = (0..=steps)
        .into_par_iter()
        .map(|s| slice(s as f64 * h))
        .collect::<Result<Vec<_>>>()?;
    let inner: f64 = vals[1..steps].iter().sum();
    Ok(h * (0.5 * (vals[0] + vals[steps]) + inner))
}

fn ensure_circle(spec: GridSpec) -> Result<()> {
    if spec.dim() != 1 {
        return Err(Error::InvalidArgument(format!(
            "circle operation needs dim 1, got {}",
            spec.dim()
        )));
    }
    Ok(())
}

/// Real expansion `a₀/2 + Σ_{j>0} a_j cos 2πjt + a_{−j} sin 2πjt` of a loop.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct CosSin {
    pub a0: f64,
    /// Keys `j ≠ 0`; positive keys are cosine terms, negative keys sine terms.
    pub modes: BTreeMap<i64, f64>,
}

impl CosSin {
    pub fn from_scalar(x: &FourierScalar) -> Result<Self> {
        let spec = x.spec();
        ensure_circle(spec)?;
        let mut modes = BTreeMap::new();
        for j in 1..=spec.degree() as i64 {
            let c = x.coeff(&[j]);
            if c.re != 0.0 {
                modes.insert(j, 2.0 * c.re);
            }
            if c.im != 0.0 {
                modes.insert(-j, -2.0 * c.im);
            }
        }
        Ok(CosSin {
            a0: 2.0 * x.coeff(&[0]).re,
            modes,
        })
    }

    pub fn to_scalar(&self, spec: GridSpec) -> Result<FourierScalar> {
        ensure_circle(spec)?;
        let mut list = vec![(vec![0], Complex64::new(self.a0 / 2.0, 0.0))];
        for j in 1..=spec.degree() as i64 {
            let a = self.modes.get(&j).copied().unwrap_or(0.0);
            let b = self.modes.get(&-j).copied().unwrap_or(0.0);
            if a != 0.0 || b != 0.0 {
                list.push((vec![j], Complex64::new(a / 2.0, -b / 2.0)));
            }
        }
        if let Some(&j) = self.modes.keys().find(|j| j.unsigned_abs() as usize > spec.degree()) {
            return Err(Error::InvalidArgument(format!(
                "mode {j} exceeds degree {}",
                spec.degree()
            )));
        }
        FourierScalar::from_modes(spec, &list)
    }
}
