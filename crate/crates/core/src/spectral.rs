//! Truncated Fourier series of real functions on the torus `R^N / Z^N`.
//!
//! A [`FourierScalar`] keeps every mode `r` in the cube `{-D..D}^N` together
//! with its Hermitian partner. Nonlinear operations go through the uniform
//! oversampled grid of `q(2D+1)` points per axis and are truncated back to
//! degree `D`; the relative energy thrown away is kept as a loss figure.

use std::f64::consts::PI;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;
use rayon::prelude::*;
use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};

use crate::error::{ensure_same_spec, Error, Result};

/// Relative spilled energy above which a value counts as lossy.
pub const LOSS_THRESHOLD: f64 = 1e-10;
/// Imaginary residue tolerated by [`FourierScalar::evaluate_at`].
pub const IMAG_RESIDUE_LIMIT: f64 = 1e-9;
/// Minimum `|a(x)|` on the check grid for `ln|a|`.
pub const EPS_POS: f64 = 1e-6;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GridSpec {
    dim: usize,
    degree: usize,
    oversample: usize,
}

impl GridSpec {
    pub fn new(dim: usize, degree: usize) -> Result<Self> {
        Self::with_oversample(dim, degree, 2)
    }

    pub fn with_oversample(dim: usize, degree: usize, oversample: usize) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidGrid("dim must be at least 1".into()));
        }
        if degree == 0 {
            return Err(Error::InvalidGrid("degree must be at least 1".into()));
        }
        if oversample < 2 {
            return Err(Error::InvalidGrid(format!(
                "oversample {oversample} leaves products aliased; need at least 2"
            )));
        }
        if dim > 8 {
            return Err(Error::InvalidGrid(format!("dim {dim} is beyond desk scale")));
        }
        Ok(GridSpec {
            dim,
            degree,
            oversample,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn oversample(&self) -> usize {
        self.oversample
    }

    /// Same dimension and oversampling, different truncation degree.
    pub fn with_degree(&self, degree: usize) -> Result<Self> {
        Self::with_oversample(self.dim, degree, self.oversample)
    }

    pub fn modes_per_axis(&self) -> usize {
        2 * self.degree + 1
    }

    pub fn mode_count(&self) -> usize {
        self.modes_per_axis().pow(self.dim as u32)
    }

    pub fn points_per_axis(&self) -> usize {
        self.oversample * self.modes_per_axis()
    }

    pub fn grid_len(&self) -> usize {
        self.points_per_axis().pow(self.dim as u32)
    }

    /// Coordinates of grid point `idx`; axis 0 varies slowest.
    pub fn grid_point(&self, idx: usize) -> Vec<f64> {
        let n = self.points_per_axis();
        let mut x = vec![0.0; self.dim];
        let mut rem = idx;
        for j in (0..self.dim).rev() {
            x[j] = (rem % n) as f64 / n as f64;
            rem /= n;
        }
        x
    }

    pub fn grid_points(&self) -> Vec<Vec<f64>> {
        (0..self.grid_len()).map(|i| self.grid_point(i)).collect()
    }

    /// Integer mode of flat coefficient index `idx`.
    pub fn mode(&self, idx: usize) -> Vec<i64> {
        let w = self.modes_per_axis();
        let d = self.degree as i64;
        let mut r = vec![0; self.dim];
        let mut rem = idx;
        for j in (0..self.dim).rev() {
            r[j] = (rem % w) as i64 - d;
            rem /= w;
        }
        r
    }

    pub fn mode_index(&self, mode: &[i64]) -> Option<usize> {
        if mode.len() != self.dim {
            return None;
        }
        let w = self.modes_per_axis();
        let d = self.degree as i64;
        let mut idx = 0;
        for &r in mode {
            if r.abs() > d {
                return None;
            }
            idx = idx * w + (r + d) as usize;
        }
        Some(idx)
    }

    /// Grid-transform slot holding each retained mode.
    fn mode_slots(&self) -> Vec<usize> {
        let n = self.points_per_axis() as i64;
        (0..self.mode_count())
            .map(|idx| {
                self.mode(idx)
                    .iter()
                    .fold(0usize, |acc, &r| acc * n as usize + r.rem_euclid(n) as usize)
            })
            .collect()
    }
}

/// Applies a 1-D FFT along every axis of an `n^dim` cube.
fn fft_cube(buf: &mut [Complex64], n: usize, dim: usize, inverse: bool) {
    let mut planner = FftPlanner::<f64>::new();
    let fft = if inverse {
        planner.plan_fft_inverse(n)
    } else {
        planner.plan_fft_forward(n)
    };
    let mut line = vec![Complex64::default(); n];
    let mut scratch = vec![Complex64::default(); fft.get_inplace_scratch_len()];
    for axis in 0..dim {
        let stride = n.pow((dim - 1 - axis) as u32);
        let outer = n.pow(axis as u32);
        for o in 0..outer {
            for i in 0..stride {
                let base = o * n * stride + i;
                for (m, slot) in line.iter_mut().enumerate() {
                    *slot = buf[base + m * stride];
                }
                fft.process_with_scratch(&mut line, &mut scratch);
                for (m, v) in line.iter().enumerate() {
                    buf[base + m * stride] = *v;
                }
            }
        }
    }
}

/// Pointwise scalar functions applied on the oversampled grid.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum UnaryFn {
    LnAbs,
    Exp,
}

/// Degree-`D` trigonometric polynomial with Hermitian coefficients.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct FourierScalar {
    spec: GridSpec,
    coeffs: Vec<Complex64>,
    /// Relative energy dropped by the last truncation.
    loss: f64,
}

impl PartialEq for FourierScalar {
    fn eq(&self, other: &Self) -> bool {
        self.spec == other.spec && self.coeffs == other.coeffs
    }
}

impl FourierScalar {
    pub fn zeros(spec: GridSpec) -> Self {
        FourierScalar {
            spec,
            coeffs: vec![Complex64::default(); spec.mode_count()],
            loss: 0.0,
        }
    }

    pub fn constant(spec: GridSpec, c: f64) -> Self {
        let mut a = Self::zeros(spec);
        let mid = spec.mode_count() / 2;
        a.coeffs[mid] = Complex64::new(c, 0.0);
        a
    }

    /// Builds a series from a full coefficient cube, enforcing Hermitian symmetry.
    pub fn from_coeffs(spec: GridSpec, coeffs: Vec<Complex64>) -> Result<Self> {
        if coeffs.len() != spec.mode_count() {
            return Err(Error::Shape {
                expected: spec.mode_count(),
                got: coeffs.len(),
            });
        }
        let mut a = FourierScalar {
            spec,
            coeffs,
            loss: 0.0,
        };
        a.symmetrize();
        Ok(a)
    }

    /// Sets `c(r) = z` and `c(-r) = conj(z)` for each listed mode.
    pub fn from_modes(spec: GridSpec, modes: &[(Vec<i64>, Complex64)]) -> Result<Self> {
        let mut a = Self::zeros(spec);
        let m = spec.mode_count();
        for (r, z) in modes {
            let idx = spec.mode_index(r).ok_or_else(|| {
                Error::InvalidArgument(format!("mode {r:?} outside degree {}", spec.degree))
            })?;
            if idx == m / 2 {
                a.coeffs[idx] = Complex64::new(z.re, 0.0);
            } else {
                a.coeffs[idx] = *z;
                a.coeffs[m - 1 - idx] = z.conj();
            }
        }
        Ok(a)
    }

    /// Fits samples laid out on the oversampled grid (axis 0 slowest).
    pub fn fit_from_samples(samples: &[f64], spec: GridSpec) -> Result<Self> {
        if samples.len() != spec.grid_len() {
            return Err(Error::Shape {
                expected: spec.grid_len(),
                got: samples.len(),
            });
        }
        let n = spec.points_per_axis();
        let mut buf: Vec<Complex64> = samples.iter().map(|&s| Complex64::new(s, 0.0)).collect();
        fft_cube(&mut buf, n, spec.dim, false);
        let scale = 1.0 / spec.grid_len() as f64;
        let total: f64 = buf.iter().map(|z| z.norm_sqr()).sum::<f64>() * scale * scale;
        let coeffs: Vec<Complex64> = spec.mode_slots().iter().map(|&s| buf[s] * scale).collect();
        let kept: f64 = coeffs.iter().map(|z| z.norm_sqr()).sum();
        let loss = if total > 0.0 {
            ((total - kept) / total).max(0.0)
        } else {
            0.0
        };
        let mut a = FourierScalar { spec, coeffs, loss };
        a.symmetrize();
        Ok(a)
    }

    /// Samples `f` on the oversampled grid and fits.
    pub fn sample(spec: GridSpec, f: impl Fn(&[f64]) -> f64 + Sync) -> Self {
        let samples: Vec<f64> = (0..spec.grid_len())
            .into_par_iter()
            .map(|i| f(&spec.grid_point(i)))
            .collect();
        Self::fit_from_samples(&samples, spec).expect("grid length matches spec")
    }

    fn symmetrize(&mut self) {
        let m = self.coeffs.len();
        for i in 0..m / 2 {
            let j = m - 1 - i;
            let avg = (self.coeffs[i] + self.coeffs[j].conj()) * 0.5;
            self.coeffs[i] = avg;
            self.coeffs[j] = avg.conj();
        }
        self.coeffs[m / 2].im = 0.0;
    }

    pub fn spec(&self) -> GridSpec {
        self.spec
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn coeff(&self, mode: &[i64]) -> Complex64 {
        self.spec
            .mode_index(mode)
            .map(|i| self.coeffs[i])
            .unwrap_or_default()
    }

    pub fn loss(&self) -> f64 {
        self.loss
    }

    pub fn is_lossy(&self) -> bool {
        self.loss > LOSS_THRESHOLD
    }

    pub(crate) fn with_loss(mut self, loss: f64) -> Self {
        self.loss = self.loss.max(loss);
        self
    }

    /// Largest `|c(-r) - conj(c(r))|`; zero for a real function.
    pub fn hermitian_defect(&self) -> f64 {
        let m = self.coeffs.len();
        (0..m)
            .map(|i| (self.coeffs[m - 1 - i] - self.coeffs[i].conj()).norm())
            .fold(0.0, f64::max)
    }

    fn debug_check(self) -> Self {
        debug_assert!(
            self.hermitian_defect() <= 1e-14 * (1.0 + self.max_abs_coeff()),
            "Hermitian symmetry broken"
        );
        self
    }

    /// Largest `max_j |r_j|` over nonzero coefficients.
    pub fn effective_degree(&self) -> usize {
        (0..self.coeffs.len())
            .filter(|&i| self.coeffs[i] != Complex64::default())
            .map(|i| {
                self.spec
                    .mode(i)
                    .iter()
                    .map(|r| r.unsigned_abs() as usize)
                    .max()
                    .unwrap_or(0)
            })
            .max()
            .unwrap_or(0)
    }

    /// Values on the oversampled grid.
    pub fn to_grid(&self) -> Vec<f64> {
        let spec = self.spec;
        let mut buf = vec![Complex64::default(); spec.grid_len()];
        for (slot, c) in spec.mode_slots().into_iter().zip(&self.coeffs) {
            buf[slot] = *c;
        }
        fft_cube(&mut buf, spec.points_per_axis(), spec.dim, true);
        buf.into_iter().map(|z| z.re).collect()
    }

    /// Direct mode summation at arbitrary points.
    pub fn evaluate_at(&self, points: &[Vec<f64>]) -> Result<Vec<f64>> {
        let ev = self.evaluator();
        points
            .iter()
            .map(|x| {
                if x.len() != self.spec.dim {
                    return Err(Error::Shape {
                        expected: self.spec.dim,
                        got: x.len(),
                    });
                }
                let z = ev.eval(x);
                let scale = 1.0 + z.re.abs();
                if z.im.abs() > IMAG_RESIDUE_LIMIT * scale {
                    return Err(Error::Consistency(format!(
                        "imaginary residue {:e} at {x:?}: Hermitian symmetry broken",
                        z.im
                    )));
                }
                Ok(z.re)
            })
            .collect()
    }

    pub fn evaluator(&self) -> Evaluator {
        Evaluator::new(self)
    }

    pub fn integrate_mean(&self) -> f64 {
        self.coeffs[self.coeffs.len() / 2].re
    }

    pub fn differentiate(&self, axis: usize) -> Result<Self> {
        if axis >= self.spec.dim {
            return Err(Error::AxisOutOfRange {
                axis,
                dim: self.spec.dim,
            });
        }
        Ok(self.partial(axis))
    }

    /// Unchecked partial derivative for internal callers.
    pub(crate) fn partial(&self, axis: usize) -> Self {
        let spec = self.spec;
        let w = spec.modes_per_axis();
        let stride = w.pow((spec.dim - 1 - axis) as u32);
        let d = spec.degree as i64;
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(i, c)| {
                let r = ((i / stride) % w) as i64 - d;
                c * Complex64::new(0.0, 2.0 * PI * r as f64)
            })
            .collect();
        FourierScalar {
            spec,
            coeffs,
            loss: self.loss,
        }
        .debug_check()
    }

    pub fn gradient(&self) -> Vec<FourierScalar> {
        (0..self.spec.dim).map(|j| self.partial(j)).collect()
    }

    pub fn multiply(&self, other: &FourierScalar) -> Result<Self> {
        ensure_same_spec(self.spec, other.spec)?;
        Ok(self.mul_unchecked(other))
    }

    fn mul_unchecked(&self, other: &FourierScalar) -> Self {
        let (da, db) = (self.effective_degree(), other.effective_degree());
        if da.max(db).max(1) < self.spec.degree && da + db <= self.spec.degree {
            return self.mul_band_limited(other, da, db).debug_check();
        }
        let a = self.to_grid();
        let b = other.to_grid();
        let prod: Vec<f64> = a.iter().zip(&b).map(|(x, y)| x * y).collect();
        let loss = self.loss.max(other.loss);
        Self::fit_from_samples(&prod, self.spec)
            .expect("grid length matches spec")
            .with_loss(loss)
            .debug_check()
    }

    /// Exact product when `da + db` fits the degree, on the smallest grid that
    /// resolves it.
    fn mul_band_limited(&self, other: &FourierScalar, da: usize, db: usize) -> Self {
        let sub = GridSpec {
            degree: da.max(db).max(1),
            ..self.spec
        };
        let restrict = |x: &FourierScalar| FourierScalar {
            spec: sub,
            coeffs: (0..sub.mode_count()).map(|i| x.coeff(&sub.mode(i))).collect(),
            loss: 0.0,
        };
        let a = restrict(self).to_grid();
        let b = restrict(other).to_grid();
        let n = sub.points_per_axis();
        let mut buf: Vec<Complex64> = a.iter().zip(&b).map(|(x, y)| Complex64::new(x * y, 0.0)).collect();
        fft_cube(&mut buf, n, sub.dim, false);
        let scale = 1.0 / sub.grid_len() as f64;
        let top = (da + db) as i64;
        let coeffs = (0..self.spec.mode_count())
            .map(|i| {
                let r = self.spec.mode(i);
                if r.iter().any(|x| x.abs() > top) {
                    return Complex64::default();
                }
                let slot = r.iter().fold(0usize, |acc, &x| acc * n + x.rem_euclid(n as i64) as usize);
                buf[slot] * scale
            })
            .collect();
        let mut out = FourierScalar {
            spec: self.spec,
            coeffs,
            loss: self.loss.max(other.loss),
        };
        out.symmetrize();
        out
    }

    pub fn pointwise_unary(&self, f: UnaryFn) -> Result<Self> {
        let grid = self.to_grid();
        let values = match f {
            UnaryFn::Exp => grid.iter().map(|v| v.exp()).collect::<Vec<_>>(),
            UnaryFn::LnAbs => {
                if let Some((i, v)) = grid.iter().enumerate().find(|(_, v)| v.abs() < EPS_POS) {
                    return Err(Error::Domain {
                        location: self.spec.grid_point(i),
                        reason: format!("ln|a| with |a| = {:e} below {EPS_POS:e}", v.abs()),
                    });
                }
                grid.iter().map(|v| v.abs().ln()).collect()
            }
        };
        Ok(Self::fit_from_samples(&values, self.spec)?
            .with_loss(self.loss)
            .debug_check())
    }

    /// Applies `f` to grid values and refits.
    pub fn map_grid(&self, f: impl Fn(f64) -> f64) -> Self {
        let values: Vec<f64> = self.to_grid().into_iter().map(f).collect();
        Self::fit_from_samples(&values, self.spec)
            .expect("grid length matches spec")
            .with_loss(self.loss)
    }

    pub fn scale(&self, s: f64) -> Self {
        FourierScalar {
            spec: self.spec,
            coeffs: self.coeffs.iter().map(|c| c * s).collect(),
            loss: self.loss,
        }
    }

    pub fn max_abs_coeff(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    /// Largest coefficient difference; panics on spec mismatch.
    pub fn max_abs_diff(&self, other: &FourierScalar) -> f64 {
        assert_eq!(self.spec, other.spec, "grid spec mismatch");
        self.coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// Largest absolute value on the oversampled grid.
    pub fn sup_norm(&self) -> f64 {
        self.to_grid().into_iter().map(f64::abs).fold(0.0, f64::max)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| *c == Complex64::default())
    }

    fn zip_with(&self, other: &FourierScalar, f: impl Fn(Complex64, Complex64) -> Complex64) -> Self {
        assert_eq!(self.spec, other.spec, "grid spec mismatch");
        FourierScalar {
            spec: self.spec,
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| f(*a, *b))
                .collect(),
            loss: self.loss.max(other.loss),
        }
    }
}

impl Add for &FourierScalar {
    type Output = FourierScalar;
    fn add(self, rhs: &FourierScalar) -> FourierScalar {
        self.zip_with(rhs, |a, b| a + b)
    }
}

impl Sub for &FourierScalar {
    type Output = FourierScalar;
    fn sub(self, rhs: &FourierScalar) -> FourierScalar {
        self.zip_with(rhs, |a, b| a - b)
    }
}

impl Neg for &FourierScalar {
    type Output = FourierScalar;
    fn neg(self) -> FourierScalar {
        self.scale(-1.0)
    }
}

/// Pointwise product; panics on spec mismatch (use [`FourierScalar::multiply`]
/// for a checked version).
impl Mul for &FourierScalar {
    type Output = FourierScalar;
    fn mul(self, rhs: &FourierScalar) -> FourierScalar {
        assert_eq!(self.spec, rhs.spec, "grid spec mismatch");
        self.mul_unchecked(rhs)
    }
}

impl Mul<f64> for &FourierScalar {
    type Output = FourierScalar;
    fn mul(self, rhs: f64) -> FourierScalar {
        self.scale(rhs)
    }
}

/// Precomputed direct summation over the nonzero sub-cube of a series.
#[derive(Clone, Debug)]
pub struct Evaluator {
    dim: usize,
    degree: usize,
    coeffs: Vec<Complex64>,
}

impl Evaluator {
    fn new(a: &FourierScalar) -> Self {
        let spec = a.spec;
        let d = a.effective_degree();
        let w = 2 * d + 1;
        let dim = spec.dim;
        let coeffs = (0..w.pow(dim as u32))
            .map(|i| {
                let mut r = vec![0i64; dim];
                let mut rem = i;
                for j in (0..dim).rev() {
                    r[j] = (rem % w) as i64 - d as i64;
                    rem /= w;
                }
                a.coeff(&r)
            })
            .collect();
        Evaluator {
            dim,
            degree: d,
            coeffs,
        }
    }

    pub fn eval(&self, x: &[f64]) -> Complex64 {
        let w = 2 * self.degree + 1;
        let phases: Vec<Complex64> = (0..self.dim)
            .flat_map(|axis| {
                let step = Complex64::cis(2.0 * PI * x[axis]);
                let mut p = Complex64::cis(-2.0 * PI * self.degree as f64 * x[axis]);
                (0..w).map(move |_| {
                    let out = p;
                    p *= step;
                    out
                })
            })
            .collect();
        let dot = |c: &[Complex64], axis: usize| -> Complex64 {
            c.iter().zip(&phases[axis * w..(axis + 1) * w]).map(|(a, b)| a * b).sum()
        };
        // Contract the last axis first, then fold the rest in place.
        let mut cur: Vec<Complex64> = self.coeffs.chunks_exact(w).map(|c| dot(c, self.dim - 1)).collect();
        for axis in (0..self.dim - 1).rev() {
            let len = cur.len() / w;
            for i in 0..len {
                cur[i] = dot(&cur[i * w..(i + 1) * w], axis);
            }
            cur.truncate(len);
        }
        cur[0]
    }

    pub fn eval_real(&self, x: &[f64]) -> f64 {
        self.eval(x).re
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec1(d: usize) -> GridSpec {
        GridSpec::new(1, d).unwrap()
    }

    fn sin1(spec: GridSpec) -> FourierScalar {
        let mut r = vec![0; spec.dim()];
        r[0] = 1;
        FourierScalar::from_modes(spec, &[(r, Complex64::new(0.0, -0.5))]).unwrap()
    }

    fn cos1(spec: GridSpec) -> FourierScalar {
        let mut r = vec![0; spec.dim()];
        r[0] = 1;
        FourierScalar::from_modes(spec, &[(r, Complex64::new(0.5, 0.0))]).unwrap()
    }

    #[test]
    fn grid_spec_validation() {
        assert!(GridSpec::new(0, 4).is_err());
        assert!(GridSpec::new(2, 0).is_err());
        assert!(GridSpec::with_oversample(2, 4, 1).is_err());
        let s = GridSpec::new(2, 4).unwrap();
        assert!(s.points_per_axis() >= 4 * s.degree() + 1);
        assert_eq!(s.mode_index(&s.mode(17)), Some(17));
    }

    #[test]
    fn constant_samples_fit() {
        let spec = GridSpec::new(2, 3).unwrap();
        let a = FourierScalar::fit_from_samples(&vec![1.0; spec.grid_len()], spec).unwrap();
        assert!((a.coeff(&[0, 0]) - Complex64::new(1.0, 0.0)).norm() < 1e-15);
        let others = a
            .coeffs()
            .iter()
            .enumerate()
            .filter(|(i, _)| *i != spec.mode_count() / 2)
            .map(|(_, c)| c.norm())
            .fold(0.0, f64::max);
        assert!(others < 1e-15);
    }

    #[test]
    fn sine_samples_fit() {
        let spec = spec1(4);
        let a = FourierScalar::sample(spec, |x| (2.0 * PI * x[0]).sin());
        assert!((a.coeff(&[1]) - Complex64::new(0.0, -0.5)).norm() < 1e-15);
        assert!((a.coeff(&[-1]) - Complex64::new(0.0, 0.5)).norm() < 1e-15);
        assert!(a.coeff(&[2]).norm() < 1e-15);
        assert!(!a.is_lossy());
    }

    #[test]
    fn shape_mismatch_rejected() {
        let spec = spec1(4);
        assert!(matches!(
            FourierScalar::fit_from_samples(&[1.0, 2.0], spec),
            Err(Error::Shape { .. })
        ));
    }

    #[test]
    fn evaluate_sine_and_constant() {
        let spec = spec1(4);
        let v = sin1(spec).evaluate_at(&[vec![0.25]]).unwrap();
        assert!((v[0] - 1.0).abs() < 1e-15);
        let c = FourierScalar::constant(GridSpec::new(3, 2).unwrap(), 2.5);
        let v = c.evaluate_at(&[vec![0.1, 0.7, 0.3]]).unwrap();
        assert!((v[0] - 2.5).abs() < 1e-15);
    }

    #[test]
    fn broken_symmetry_is_reported() {
        let spec = spec1(2);
        let mut a = sin1(spec);
        a.coeffs[3] = Complex64::new(1.0, 0.0);
        assert!(matches!(
            a.evaluate_at(&[vec![0.1]]),
            Err(Error::Consistency(_))
        ));
    }

    #[test]
    fn cosine_squared() {
        let spec = spec1(4);
        let c = cos1(spec);
        let sq = c.multiply(&c).unwrap();
        let expected = FourierScalar::sample(spec, |x| 0.5 + 0.5 * (4.0 * PI * x[0]).cos());
        assert!(sq.max_abs_diff(&expected) < 1e-15);
        assert!(!sq.is_lossy());
        let one = FourierScalar::constant(spec, 1.0);
        assert!(c.multiply(&one).unwrap().max_abs_diff(&c) < 1e-15);
    }

    #[test]
    fn truncated_product_flags_loss() {
        let spec = spec1(2);
        let a = FourierScalar::from_modes(spec, &[(vec![2], Complex64::new(0.5, 0.0))]).unwrap();
        let p = &a * &a;
        assert!(p.is_lossy());
        assert!((p.integrate_mean() - 0.5).abs() < 1e-15);
    }

    #[test]
    fn mismatched_specs_error() {
        let a = FourierScalar::constant(spec1(2), 1.0);
        let b = FourierScalar::constant(spec1(3), 1.0);
        assert!(matches!(a.multiply(&b), Err(Error::SpecMismatch(..))));
    }

    #[test]
    fn derivatives() {
        let spec = GridSpec::new(2, 3).unwrap();
        let s = sin1(spec);
        let ds = s.differentiate(0).unwrap();
        let expected = cos1(spec).scale(2.0 * PI);
        assert!(ds.max_abs_diff(&expected) < 1e-14);
        assert!(FourierScalar::constant(spec, 3.0).differentiate(1).unwrap().is_zero());
        assert!(matches!(
            s.differentiate(2),
            Err(Error::AxisOutOfRange { axis: 2, dim: 2 })
        ));
    }

    #[test]
    fn integrate_mean_values() {
        let spec = spec1(4);
        let c = cos1(spec);
        assert!((c.multiply(&c).unwrap().integrate_mean() - 0.5).abs() < 1e-15);
        assert_eq!(sin1(spec).integrate_mean(), 0.0);
    }

    #[test]
    fn unary_functions() {
        let spec = GridSpec::new(2, 4).unwrap();
        let e = FourierScalar::zeros(spec).pointwise_unary(UnaryFn::Exp).unwrap();
        assert!(e.max_abs_diff(&FourierScalar::constant(spec, 1.0)) < 1e-15);
        let l = FourierScalar::constant(spec, -2.0)
            .pointwise_unary(UnaryFn::LnAbs)
            .unwrap();
        assert!((l.integrate_mean() - 2f64.ln()).abs() < 1e-15);
        let err = sin1(spec).pointwise_unary(UnaryFn::LnAbs).unwrap_err();
        match err {
            Error::Domain { location, .. } => assert_eq!(location.len(), 2),
            other => panic!("unexpected {other:?}"),
        }
    }
}
