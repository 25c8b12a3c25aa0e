//! Cocycles on vector fields and on torus diffeomorphisms.
//!
//! Group cocycles are assembled from a crossed homomorphism `j: D → M` and a
//! central cocycle `c` on `M` as `b(d₁,d₂) = c(j(d₁)(d₂), j(d₂))`.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::diffeo::{pullback_form, Diffeo, VectorFieldT};
use crate::error::{ensure_same_spec, Error, Result};
use crate::gauge::{gauge_cocycle_gl, heisenberg_cocycle_circle, heisenberg_cocycle_form, GaugeMap, LoopPos};
use crate::geometry::{matrix_wedge_trace, KClass, KForm, MatrixField};
use crate::spectral::{FourierScalar, GridSpec, UnaryFn, EPS_POS};

/// Default step for [`lie_from_group`].
pub const BRIDGE_STEP: f64 = 1e-2;

fn tr_v_dw(vj: &MatrixField, wj: &MatrixField) -> Result<KForm> {
    let spec = vj.spec();
    let n = vj.size();
    let dw = wj.differential();
    let mut acc = KForm::zero(spec, 1);
    for i in 0..n {
        for k in 0..n {
            let a = vj.entry(i, k);
            if a.is_zero() {
                continue;
            }
            acc = acc.add(&dw.entry(k, i).mul_scalar(a))?;
        }
    }
    Ok(acc)
}

/// `Tr(v^J dw^J)` before passing to the quotient.
pub fn tau1_raw(v: &VectorFieldT, w: &VectorFieldT) -> Result<KForm> {
    ensure_same_spec(v.spec(), w.spec())?;
    tr_v_dw(&v.jacobian(), &w.jacobian())
}

/// `Tr(v^J) Tr(dw^J) = div(v) d div(w)` before passing to the quotient.
pub fn tau2_raw(v: &VectorFieldT, w: &VectorFieldT) -> Result<KForm> {
    ensure_same_spec(v.spec(), w.spec())?;
    Ok(KForm::scalar(w.divergence()).exterior_d().mul_scalar(&v.divergence()))
}

pub fn tau1(v: &VectorFieldT, w: &VectorFieldT) -> Result<KClass> {
    KClass::project(&tau1_raw(v, w)?)
}

pub fn tau2(v: &VectorFieldT, w: &VectorFieldT) -> Result<KClass> {
    KClass::project(&tau2_raw(v, w)?)
}

/// `(v^J | dw^J)` for the invariant form `α·Tr(AB) + β·Tr(A)Tr(B)`.
pub fn invariant_form_cocycle(alpha: f64, beta: f64, v: &VectorFieldT, w: &VectorFieldT) -> Result<KClass> {
    ensure_same_spec(v.spec(), w.spec())?;
    let vj = v.jacobian();
    let wj = w.jacobian();
    let tr_part = tr_v_dw(&vj, &wj)?.scale(alpha);
    let trace_part = KForm::scalar(wj.trace())
        .exterior_d()
        .mul_scalar(&vj.trace())
        .scale(beta);
    KClass::project(&tr_part.add(&trace_part)?)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Tau {
    One,
    Two,
}

/// `dτ₁ = Tr(dv^J ∧ dw^J)`, `dτ₂ = Tr(dv^J) ∧ Tr(dw^J)`.
pub fn dtau(which: Tau, v: &VectorFieldT, w: &VectorFieldT) -> Result<KForm> {
    ensure_same_spec(v.spec(), w.spec())?;
    match which {
        Tau::One => matrix_wedge_trace(&v.jacobian().differential(), &w.jacobian().differential()),
        Tau::Two => KForm::scalar(v.divergence())
            .exterior_d()
            .wedge(&KForm::scalar(w.divergence()).exterior_d()),
    }
}

/// Values of cocycles: a right `Diff(Tᴺ)`-module with a size.
pub trait CocycleValue: Clone + Send + Sync {
    fn act(&self, h: &Diffeo) -> Result<Self>;
    fn add(&self, other: &Self) -> Result<Self>;
    fn sub(&self, other: &Self) -> Result<Self>;
    fn scale(&self, s: f64) -> Self;
    /// Flat coefficient list used for norms and proportionality fits.
    fn coords(&self) -> Vec<f64>;
    /// Lie-derivative action of a vector field.
    fn lie(&self, v: &VectorFieldT) -> Result<Self>;

    fn norm(&self) -> f64 {
        self.coords().iter().fold(0.0, |m, x| m.max(x.abs()))
    }
}

impl CocycleValue for f64 {
    fn act(&self, _h: &Diffeo) -> Result<Self> {
        Ok(*self)
    }
    fn add(&self, other: &Self) -> Result<Self> {
        Ok(self + other)
    }
    fn sub(&self, other: &Self) -> Result<Self> {
        Ok(self - other)
    }
    fn scale(&self, s: f64) -> Self {
        self * s
    }
    fn coords(&self) -> Vec<f64> {
        vec![*self]
    }
    fn lie(&self, _v: &VectorFieldT) -> Result<Self> {
        Ok(0.0)
    }
}

fn form_coords(f: &KForm) -> Vec<f64> {
    f.coeff_list()
        .iter()
        .flat_map(|c| c.coeffs().iter().flat_map(|z| [z.re, z.im]))
        .collect()
}

impl CocycleValue for KForm {
    fn act(&self, h: &Diffeo) -> Result<Self> {
        pullback_form(self, h)
    }
    fn add(&self, other: &Self) -> Result<Self> {
        KForm::add(self, other)
    }
    fn sub(&self, other: &Self) -> Result<Self> {
        KForm::sub(self, other)
    }
    fn scale(&self, s: f64) -> Self {
        KForm::scale(self, s)
    }
    fn coords(&self) -> Vec<f64> {
        form_coords(self)
    }
    fn lie(&self, v: &VectorFieldT) -> Result<Self> {
        v.lie_derivative(self)
    }
}

impl CocycleValue for KClass {
    fn act(&self, h: &Diffeo) -> Result<Self> {
        KClass::project(&pullback_form(self.rep(), h)?)
    }
    fn add(&self, other: &Self) -> Result<Self> {
        KClass::add(self, other)
    }
    fn sub(&self, other: &Self) -> Result<Self> {
        KClass::sub(self, other)
    }
    fn scale(&self, s: f64) -> Self {
        KClass::scale(self, s)
    }
    fn coords(&self) -> Vec<f64> {
        form_coords(self.rep())
    }
    fn lie(&self, v: &VectorFieldT) -> Result<Self> {
        KClass::project(&v.lie_derivative(self.rep())?)
    }
}

/// A group carrying a right action of diffeomorphisms.
pub trait DiffModule: Sized {
    fn act(&self, h: &Diffeo) -> Result<Self>;
}

impl DiffModule for GaugeMap {
    fn act(&self, h: &Diffeo) -> Result<Self> {
        GaugeMap::act(self, h)
    }
}

impl DiffModule for LoopPos {
    fn act(&self, h: &Diffeo) -> Result<Self> {
        LoopPos::act(self, h)
    }
}

/// `j(FG) = j(F)(G)·j(G)`.
pub trait CrossedHomomorphism: Sync {
    type Target: DiffModule;
    fn eval(&self, f: &Diffeo) -> Result<Self::Target>;
}

/// Central 2-cocycle on a group `M`.
pub trait CentralCocycle<M>: Sync {
    type Value: CocycleValue;
    fn eval(&self, a: &M, b: &M) -> Result<Self::Value>;
}

/// `F ↦ F^J` into `Map(Tᴺ, GL_N)`.
#[derive(Clone, Copy, Debug, Default)]
pub struct Jacobian;

impl CrossedHomomorphism for Jacobian {
    type Target = GaugeMap;
    fn eval(&self, f: &Diffeo) -> Result<GaugeMap> {
        GaugeMap::new(f.jacobian())
    }
}

/// `F ↦ F′` into `Map(S¹, ℝ*)`.
#[derive(Clone, Copy, Debug, Default)]
pub struct CircleJacobian;

impl CrossedHomomorphism for CircleJacobian {
    type Target = LoopPos;
    fn eval(&self, f: &Diffeo) -> Result<LoopPos> {
        if f.spec().dim() != 1 {
            return Err(Error::InvalidArgument("circle jacobian needs dim 1".into()));
        }
        let d = f.jacobian().entry(0, 0).clone();
        LoopPos::new(d.pointwise_unary(UnaryFn::LnAbs)?, f.orientation())
    }
}

/// `F ↦ ω(F)/ω` for a top-degree form `ω`.
#[derive(Clone, Debug)]
pub struct VolumeDelta {
    pub omega: KForm,
}

impl VolumeDelta {
    pub fn new(omega: KForm) -> Result<Self> {
        let spec = omega.spec();
        if omega.degree() != spec.dim() {
            return Err(Error::FormDegree {
                expected: spec.dim(),
                got: omega.degree(),
            });
        }
        let a = &omega.coeff_list()[0];
        let grid = a.to_grid();
        let (p, min) = grid
            .iter()
            .enumerate()
            .map(|(p, v)| (p, v.abs()))
            .fold((0, f64::INFINITY), |acc, x| if x.1 < acc.1 { x } else { acc });
        if min < EPS_POS || grid.iter().any(|v| v.signum() != grid[0].signum()) {
            return Err(Error::Domain {
                location: spec.grid_point(p),
                reason: format!("volume form degenerates (|a| = {min:e})"),
            });
        }
        Ok(VolumeDelta { omega })
    }

    pub fn standard(spec: GridSpec) -> Self {
        let idx: Vec<usize> = (0..spec.dim()).collect();
        let omega = KForm::from_terms(spec, spec.dim(), vec![(idx, FourierScalar::constant(spec, 1.0))])
            .expect("top form");
        VolumeDelta { omega }
    }
}

impl CrossedHomomorphism for VolumeDelta {
    type Target = LoopPos;
    fn eval(&self, f: &Diffeo) -> Result<LoopPos> {
        volume_delta(f, &self.omega)
    }
}

/// `Tr(f⁻¹df ∧ dg g⁻¹)`.
#[derive(Clone, Copy, Debug, Default)]
pub struct GlCocycle;

impl CentralCocycle<GaugeMap> for GlCocycle {
    type Value = KForm;
    fn eval(&self, a: &GaugeMap, b: &GaugeMap) -> Result<KForm> {
        gauge_cocycle_gl(a, b)
    }
}

/// `∫ ln|f| d ln|g|` on the circle.
#[derive(Clone, Copy, Debug, Default)]
pub struct HeisenbergCircle;

impl CentralCocycle<LoopPos> for HeisenbergCircle {
    type Value = f64;
    fn eval(&self, a: &LoopPos, b: &LoopPos) -> Result<f64> {
        heisenberg_cocycle_circle(a, b)
    }
}

/// `ln|f| d ln|g|` in `Ω¹/dΩ⁰`.
#[derive(Clone, Copy, Debug, Default)]
pub struct HeisenbergForm;

impl CentralCocycle<LoopPos> for HeisenbergForm {
    type Value = KClass;
    fn eval(&self, a: &LoopPos, b: &LoopPos) -> Result<KClass> {
        heisenberg_cocycle_form(a, b)
    }
}

/// `b(d₁,d₂) = c(j(d₁)(d₂), j(d₂))`.
pub fn pullback_cocycle<J, C>(c: &C, j: &J, d1: &Diffeo, d2: &Diffeo) -> Result<C::Value>
where
    J: CrossedHomomorphism,
    C: CentralCocycle<J::Target>,
{
    let m1 = j.eval(d1)?.act(d2)?;
    let m2 = j.eval(d2)?;
    c.eval(&m1, &m2)
}

/// A group cocycle `Diff × Diff → V`.
pub trait GroupCocycle: Sync {
    type Value: CocycleValue;
    fn eval(&self, f: &Diffeo, g: &Diffeo) -> Result<Self::Value>;
}

/// Pairing of a crossed homomorphism with a central cocycle.
#[derive(Clone, Debug)]
pub struct Pulled<C, J> {
    pub cocycle: C,
    pub crossed: J,
}

impl<C, J> GroupCocycle for Pulled<C, J>
where
    J: CrossedHomomorphism,
    C: CentralCocycle<J::Target>,
{
    type Value = C::Value;
    fn eval(&self, f: &Diffeo, g: &Diffeo) -> Result<C::Value> {
        pullback_cocycle(&self.cocycle, &self.crossed, f, g)
    }
}

/// Cocycle of the extension `Diff(Tᴺ) × Ω²`.
pub fn gauge_extension_cocycle() -> Pulled<GlCocycle, Jacobian> {
    Pulled {
        cocycle: GlCocycle,
        crossed: Jacobian,
    }
}

/// Virasoro-Bott as a pulled-back Heisenberg cocycle.
pub fn circle_extension_cocycle() -> Pulled<HeisenbergCircle, CircleJacobian> {
    Pulled {
        cocycle: HeisenbergCircle,
        crossed: CircleJacobian,
    }
}

pub fn volume_extension_cocycle(omega: KForm) -> Result<Pulled<HeisenbergForm, VolumeDelta>> {
    Ok(Pulled {
        cocycle: HeisenbergForm,
        crossed: VolumeDelta::new(omega)?,
    })
}

/// Size of `b(d₁,d₂)(d₃) + b(d₁d₂,d₃) − b(d₁,d₂d₃) − b(d₂,d₃)`.
pub fn abelian_law_residual<B: GroupCocycle>(b: &B, d1: &Diffeo, d2: &Diffeo, d3: &Diffeo) -> Result<f64> {
    let d12 = d1.compose(d2)?;
    let d23 = d2.compose(d3)?;
    let lhs = b.eval(d1, d2)?.act(d3)?.add(&b.eval(&d12, d3)?)?;
    let rhs = b.eval(d1, &d23)?.add(&b.eval(d2, d3)?)?;
    Ok(lhs.sub(&rhs)?.norm())
}

/// `B(F,G) = ∫ ln|F′(G)| d ln|G′|`.
pub fn virasoro_bott(f: &Diffeo, g: &Diffeo) -> Result<f64> {
    ensure_circle(f.spec())?;
    ensure_same_spec(f.spec(), g.spec())?;
    let fp_g = crate::diffeo::act_on_scalar(f.jacobian().entry(0, 0), g)?;
    let u = fp_g.pointwise_unary(UnaryFn::LnAbs)?;
    let v = g.jacobian().entry(0, 0).pointwise_unary(UnaryFn::LnAbs)?;
    Ok(u.multiply(&v.partial(0))?.integrate_mean())
}

/// Periodic trapezoid quadrature of `ln|F′(G(t))|·G″(t)/G′(t)` with direct
/// mode summation at `points` nodes.
pub fn virasoro_bott_quadrature(f: &Diffeo, g: &Diffeo, points: usize) -> Result<f64> {
    ensure_circle(f.spec())?;
    let fp = f.jacobian().entry(0, 0).evaluator();
    let gp = g.jacobian().entry(0, 0).clone();
    let gpp = gp.partial(0).evaluator();
    let gp = gp.evaluator();
    let vals: Vec<f64> = (0..points)
        .into_par_iter()
        .map(|p| {
            let t = [p as f64 / points as f64];
            let y = g.map_point(&t);
            fp.eval_real(&y).abs().ln() * gpp.eval_real(&t) / gp.eval_real(&t)
        })
        .collect();
    Ok(vals.iter().sum::<f64>() / points as f64)
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

/// `δ(F) = ω(F)/ω` as a log-represented nonvanishing function.
pub fn volume_delta(f: &Diffeo, omega: &KForm) -> Result<LoopPos> {
    let spec = f.spec();
    ensure_same_spec(spec, omega.spec())?;
    if omega.degree() != spec.dim() {
        return Err(Error::FormDegree {
            expected: spec.dim(),
            got: omega.degree(),
        });
    }
    let a = &omega.coeff_list()[0];
    let a_here = a.to_grid();
    let ev = a.evaluator();
    let images = f.grid_images();
    let dets: Vec<f64> = f.jacobian().grid_values().iter().map(|m| m.determinant()).collect();
    let mut logs = Vec::with_capacity(images.len());
    let mut sign = 0.0;
    for (p, y) in images.iter().enumerate() {
        let ratio = ev.eval_real(y) * dets[p] / a_here[p];
        if a_here[p].abs() < EPS_POS || !ratio.is_finite() || ratio == 0.0 {
            return Err(Error::Domain {
                location: spec.grid_point(p),
                reason: "volume form vanishes".into(),
            });
        }
        if sign == 0.0 {
            sign = ratio.signum();
        } else if ratio.signum() != sign {
            return Err(Error::Domain {
                location: spec.grid_point(p),
                reason: "volume ratio changes sign".into(),
            });
        }
        logs.push(ratio.abs().ln());
    }
    let logval = FourierScalar::fit_from_samples(&logs, spec)?.with_loss(f.loss());
    LoopPos::new(logval, sign as i8)
}

/// `ln|ω(FG)/ω(G)| d ln|ω(G)/ω|` in `Ω¹/dΩ⁰`.
pub fn volume_cocycle(f: &Diffeo, g: &Diffeo, omega: &KForm) -> Result<KClass> {
    volume_extension_cocycle(omega.clone())?.eval(f, g)
}

/// `div_ω(v) = (v·ω)/ω`; for `ω = a dx₁∧…∧dx_N` this is `div v + (v·a)/a`.
pub fn div_omega(v: &VectorFieldT, omega: &KForm) -> Result<FourierScalar> {
    let spec = v.spec();
    ensure_same_spec(spec, omega.spec())?;
    if omega.degree() != spec.dim() {
        return Err(Error::FormDegree {
            expected: spec.dim(),
            got: omega.degree(),
        });
    }
    let a = &omega.coeff_list()[0];
    let den = a.to_grid();
    if let Some(p) = den.iter().position(|d| d.abs() < EPS_POS) {
        return Err(Error::Domain {
            location: spec.grid_point(p),
            reason: "volume form vanishes".into(),
        });
    }
    let va = v.apply(a);
    if va.is_zero() {
        return Ok(v.divergence());
    }
    let ratio: Vec<f64> = va.to_grid().iter().zip(&den).map(|(n, d)| n / d).collect();
    Ok(&v.divergence() + &FourierScalar::fit_from_samples(&ratio, spec)?)
}

/// `div_ω(v) d div_ω(w)` in `Ω¹/dΩ⁰`.
pub fn div_cocycle(v: &VectorFieldT, w: &VectorFieldT, omega: &KForm) -> Result<KClass> {
    let dv = div_omega(v, omega)?;
    let dw = div_omega(w, omega)?;
    KClass::project(&KForm::scalar(dw).exterior_d().mul_scalar(&dv))
}

/// `[b(e^{tv}, e^{sw}) − b(e^{sw}, e^{tv})]` differentiated in `t` and `s`
/// at 0 by the four-point central stencil.
pub fn lie_from_group<B: GroupCocycle>(b: &B, v: &VectorFieldT, w: &VectorFieldT, h: f64) -> Result<B::Value> {
    if !(h > 0.0) {
        return Err(Error::InvalidArgument(format!("step must be positive, got {h}")));
    }
    let delta = |t: f64, s: f64| -> Result<B::Value> {
        let ft = v.flow(t)?;
        let gs = w.flow(s)?;
        b.eval(&ft, &gs)?.sub(&b.eval(&gs, &ft)?)
    };
    let corners = [(h, h, 1.0), (h, -h, -1.0), (-h, h, -1.0), (-h, -h, 1.0)]
        .par_iter()
        .map(|&(t, s, w)| Ok(delta(t, s)?.scale(w)))
        .collect::<Result<Vec<_>>>()?;
    let mut acc = corners[0].clone();
    for c in &corners[1..] {
        acc = acc.add(c)?;
    }
    Ok(acc.scale(1.0 / (4.0 * h * h)))
}

/// Least-squares constant `k` with `observed ≈ k·reference` across pairs,
/// and the largest deviation relative to the overall scale.
pub fn fit_proportionality(pairs: &[(Vec<f64>, Vec<f64>)]) -> (f64, f64) {
    let dot = |a: &[f64], b: &[f64]| a.iter().zip(b).map(|(x, y)| x * y).sum::<f64>();
    let num: f64 = pairs.iter().map(|(o, r)| dot(o, r)).sum();
    let den: f64 = pairs.iter().map(|(_, r)| dot(r, r)).sum();
    if den == 0.0 {
        return (0.0, pairs.iter().flat_map(|(o, _)| o).fold(0.0, |m, x| m.max(x.abs())));
    }
    let k = num / den;
    let scale = pairs
        .iter()
        .flat_map(|(o, _)| o)
        .fold(0.0_f64, |m, x| m.max(x.abs()));
    let dev = pairs
        .iter()
        .flat_map(|(o, r)| o.iter().zip(r).map(|(a, b)| (a - k * b).abs()))
        .fold(0.0, f64::max);
    (k, if scale > 0.0 { dev / scale } else { dev })
}

/// Residual of `c([u,v],w) + c([v,w],u) + c([w,u],v) = u·c(v,w) + v·c(w,u) + w·c(u,v)`.
pub fn lie_cocycle_residual<V, F>(c: F, u: &VectorFieldT, v: &VectorFieldT, w: &VectorFieldT) -> Result<f64>
where
    V: CocycleValue,
    F: Fn(&VectorFieldT, &VectorFieldT) -> Result<V>,
{
    let uv = u.lie_bracket(v)?;
    let vw = v.lie_bracket(w)?;
    let wu = w.lie_bracket(u)?;
    let lhs = c(&uv, w)?.add(&c(&vw, u)?)?.add(&c(&wu, v)?)?;
    let rhs = c(v, w)?.lie(u)?.add(&c(w, u)?.lie(v)?)?.add(&c(u, v)?.lie(w)?)?;
    Ok(lhs.sub(&rhs)?.norm())
}

/// Element `(F, α)` of an abelian extension of `Diff(Tᴺ)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExtensionElement<V> {
    pub base: Diffeo,
    pub tail: V,
}

/// Abelian extension with law `(F,α)(G,β) = (FG, α(G) + β + b(F,G))`.
#[derive(Clone, Debug)]
pub struct ExtensionGroup<B> {
    pub cocycle: B,
    pub flavor: &'static str,
}

impl ExtensionGroup<Pulled<GlCocycle, Jacobian>> {
    /// `Diff(Tᴺ) × Ω²` with the gauge cocycle.
    pub fn gauge() -> Self {
        ExtensionGroup {
            cocycle: gauge_extension_cocycle(),
            flavor: "gauge",
        }
    }
}

impl ExtensionGroup<Pulled<HeisenbergForm, VolumeDelta>> {
    /// `Diff(X) × Ω¹/dΩ⁰` with the volume cocycle.
    pub fn volume(omega: KForm) -> Result<Self> {
        Ok(ExtensionGroup {
            cocycle: volume_extension_cocycle(omega)?,
            flavor: "volume",
        })
    }
}

impl<B: GroupCocycle> ExtensionGroup<B> {
    pub fn multiply(&self, x: &ExtensionElement<B::Value>, y: &ExtensionElement<B::Value>) -> Result<ExtensionElement<B::Value>> {
        let tail = x
            .tail
            .act(&y.base)?
            .add(&y.tail)?
            .add(&self.cocycle.eval(&x.base, &y.base)?)?;
        Ok(ExtensionElement {
            base: x.base.compose(&y.base)?,
            tail,
        })
    }
}

pub fn extension_multiply<B: GroupCocycle>(
    group: &ExtensionGroup<B>,
    x: &ExtensionElement<B::Value>,
    y: &ExtensionElement<B::Value>,
) -> Result<ExtensionElement<B::Value>> {
    group.multiply(x, y)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;

    fn wave(spec: GridSpec, r: Vec<i64>, z: Complex64) -> FourierScalar {
        FourierScalar::from_modes(spec, &[(r, z)]).unwrap()
    }

    fn sin_r(spec: GridSpec, r: Vec<i64>) -> FourierScalar {
        wave(spec, r, Complex64::new(0.0, -0.5))
    }

    fn cos_r(spec: GridSpec, r: Vec<i64>) -> FourierScalar {
        wave(spec, r, Complex64::new(0.5, 0.0))
    }

    fn sample_fields(spec: GridSpec) -> (VectorFieldT, VectorFieldT, VectorFieldT) {
        let u = VectorFieldT::new(vec![
            &sin_r(spec, vec![1, 0]) + &cos_r(spec, vec![0, 1]).scale(0.5),
            cos_r(spec, vec![1, 1]).scale(0.3),
        ])
        .unwrap();
        let v = VectorFieldT::new(vec![
            cos_r(spec, vec![1, -1]).scale(0.7),
            &sin_r(spec, vec![0, 1]) + &sin_r(spec, vec![1, 0]).scale(0.2),
        ])
        .unwrap();
        let w = VectorFieldT::new(vec![
            sin_r(spec, vec![0, 1]).scale(0.4),
            &cos_r(spec, vec![1, 0]) + &sin_r(spec, vec![1, 1]).scale(0.6),
        ])
        .unwrap();
        (u, v, w)
    }

    #[test]
    fn tau_skew_and_coordinate_formulas() {
        let spec = GridSpec::new(2, 8).unwrap();
        let (u, v, _) = sample_fields(spec);
        assert!(tau1(&u, &u).unwrap().max_abs_coeff() < 1e-12);
        assert!(tau2(&u, &u).unwrap().max_abs_coeff() < 1e-12);
        let s = tau1(&u, &v).unwrap().add(&tau1(&v, &u).unwrap()).unwrap();
        assert!(s.max_abs_coeff() < 1e-12);
        // Coordinate formulas on a∂_i, b∂_j.
        let a = &sin_r(spec, vec![1, 1]) + &cos_r(spec, vec![0, 1]);
        let b = cos_r(spec, vec![1, -1]);
        for i in 0..2 {
            for j in 0..2 {
                let va = VectorFieldT::along(a.clone(), i).unwrap();
                let wb = VectorFieldT::along(b.clone(), j).unwrap();
                let t1: Vec<FourierScalar> = (0..2)
                    .map(|k| &a.partial(j) * &b.partial(i).partial(k))
                    .collect();
                let t2: Vec<FourierScalar> = (0..2)
                    .map(|k| &a.partial(i) * &b.partial(j).partial(k))
                    .collect();
                let o1 = KClass::project(&KForm::one_form(t1).unwrap()).unwrap();
                let o2 = KClass::project(&KForm::one_form(t2).unwrap()).unwrap();
                assert!(tau1(&va, &wb).unwrap().max_abs_diff(&o1) < 1e-9);
                assert!(tau2(&va, &wb).unwrap().max_abs_diff(&o2) < 1e-9);
            }
        }
    }

    #[test]
    fn tau_on_constants_and_divergence_free() {
        let spec = GridSpec::new(2, 6).unwrap();
        let (u, _, _) = sample_fields(spec);
        let d1 = VectorFieldT::constant(spec, &[1.0, 0.0]).unwrap();
        assert!(tau1(&d1, &u).unwrap().max_abs_coeff() == 0.0);
        let free = VectorFieldT::along(sin_r(spec, vec![0, 1]), 0).unwrap();
        assert!(tau2(&free, &u).unwrap().max_abs_coeff() == 0.0);
    }

    #[test]
    fn circle_taus_coincide() {
        let spec = GridSpec::new(1, 8).unwrap();
        let v = VectorFieldT::new(vec![&sin_r(spec, vec![1]) + &cos_r(spec, vec![2]).scale(0.3)]).unwrap();
        let w = VectorFieldT::new(vec![cos_r(spec, vec![1]).scale(0.8)]).unwrap();
        assert_eq!(tau1(&v, &w).unwrap(), tau2(&v, &w).unwrap());
        assert!(dtau(Tau::One, &v, &w).unwrap().is_zero());
    }

    #[test]
    fn dtau_paths_and_jacobi() {
        let spec = GridSpec::new(2, 12).unwrap();
        let (u, v, w) = sample_fields(spec);
        let a = dtau(Tau::One, &u, &v).unwrap();
        let b = tau1_raw(&u, &v).unwrap().exterior_d();
        assert!(a.max_abs_diff(&b) < 1e-9, "{:e}", a.max_abs_diff(&b));
        let a2 = dtau(Tau::Two, &u, &v).unwrap();
        let b2 = tau2_raw(&u, &v).unwrap().exterior_d();
        assert!(a2.max_abs_diff(&b2) < 1e-9);
        assert!(dtau(Tau::One, &u, &u).unwrap().max_abs_coeff() < 1e-12);
        for r in [
            lie_cocycle_residual(tau1, &u, &v, &w).unwrap(),
            lie_cocycle_residual(tau2, &u, &v, &w).unwrap(),
            lie_cocycle_residual(|a, b| dtau(Tau::One, a, b), &u, &v, &w).unwrap(),
            lie_cocycle_residual(|a, b| dtau(Tau::Two, a, b), &u, &v, &w).unwrap(),
        ] {
            assert!(r < 1e-7, "jacobi residual {r:e}");
        }
    }

    #[test]
    fn invariant_form_combination() {
        let spec = GridSpec::new(2, 8).unwrap();
        let (u, v, _) = sample_fields(spec);
        let lhs = invariant_form_cocycle(0.7, -1.3, &u, &v).unwrap();
        let rhs = tau1(&u, &v)
            .unwrap()
            .scale(0.7)
            .add(&tau2(&u, &v).unwrap().scale(-1.3))
            .unwrap();
        assert!(lhs.max_abs_diff(&rhs) < 1e-12);
    }

    fn circle_pair(spec: GridSpec) -> (Diffeo, Diffeo) {
        let f = Diffeo::from_displacement(vec![sin_r(spec, vec![1]).scale(0.1)]).unwrap();
        let g = Diffeo::from_displacement(vec![cos_r(spec, vec![1]).scale(0.07)]).unwrap();
        (f, g)
    }

    #[test]
    fn virasoro_bott_paths() {
        let spec = GridSpec::new(1, 40).unwrap();
        let (f, g) = circle_pair(spec);
        let id = Diffeo::identity(spec);
        assert!(virasoro_bott(&id, &g).unwrap().abs() < 1e-15);
        assert!(virasoro_bott(&f, &id).unwrap().abs() < 1e-15);
        let b = virasoro_bott(&f, &g).unwrap();
        let pulled = circle_extension_cocycle().eval(&f, &g).unwrap();
        let quad = virasoro_bott_quadrature(&f, &g, 4096).unwrap();
        assert!((b - pulled).abs() < 1e-9, "{b} vs {pulled}");
        assert!((b - quad).abs() < 1e-8, "{b} vs {quad}");
        assert!(b.abs() > 1e-4);
    }

    #[test]
    fn pullback_vanishes_on_identity() {
        let spec = GridSpec::new(2, 8).unwrap();
        let g = Diffeo::from_displacement(vec![
            sin_r(spec, vec![0, 1]).scale(0.03),
            cos_r(spec, vec![1, 0]).scale(0.02),
        ])
        .unwrap();
        let id = Diffeo::identity(spec);
        let b = gauge_extension_cocycle();
        assert!(b.eval(&id, &g).unwrap().max_abs_coeff() < 1e-14);
        assert!(b.eval(&g, &id).unwrap().max_abs_coeff() < 1e-14);
    }

    #[test]
    fn volume_delta_examples() {
        let spec = GridSpec::new(2, 8).unwrap();
        let std = VolumeDelta::standard(spec);
        let t = Diffeo::translation(spec, &[0.2, 0.3]).unwrap();
        assert!(volume_delta(&t, &std.omega).unwrap().logval().max_abs_coeff() < 1e-15);
        let f = Diffeo::from_displacement(vec![
            sin_r(spec, vec![1, 0]).scale(0.03),
            cos_r(spec, vec![1, 1]).scale(0.02),
        ])
        .unwrap();
        let d = volume_delta(&f, &std.omega).unwrap().values().unwrap();
        let det = f.jacobian().determinant();
        assert!((&d - &det).sup_norm() < 1e-8);
    }

    #[test]
    fn div_cocycle_standard_is_tau2() {
        let spec = GridSpec::new(2, 8).unwrap();
        let (u, v, _) = sample_fields(spec);
        let std = VolumeDelta::standard(spec);
        assert_eq!(div_cocycle(&u, &v, &std.omega).unwrap(), tau2(&u, &v).unwrap());
        assert!(div_cocycle(&u, &u, &std.omega).unwrap().max_abs_coeff() < 1e-12);
    }

    #[test]
    fn extension_identity_law() {
        let spec = GridSpec::new(2, 6).unwrap();
        let grp = ExtensionGroup::gauge();
        let id = ExtensionElement {
            base: Diffeo::identity(spec),
            tail: KForm::zero(spec, 2),
        };
        let p = grp.multiply(&id, &id).unwrap();
        assert!(p.tail.is_zero());
        let a = KForm::dx(spec, 0).unwrap().wedge(&KForm::dx(spec, 1).unwrap()).unwrap();
        let x = ExtensionElement { base: Diffeo::identity(spec), tail: a.scale(0.5) };
        let y = ExtensionElement { base: Diffeo::identity(spec), tail: a.scale(0.25) };
        assert!(grp.multiply(&x, &y).unwrap().tail.max_abs_diff(&a.scale(0.75)) < 1e-15);
    }

    #[test]
    fn proportionality_fit() {
        let pairs = vec![(vec![2.0, 4.0], vec![1.0, 2.0]), (vec![-6.0], vec![-3.0])];
        let (k, dev) = fit_proportionality(&pairs);
        assert!((k - 2.0).abs() < 1e-15 && dev < 1e-15);
    }
}
