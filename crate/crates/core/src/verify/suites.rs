//! Check registry. Every property is owned by exactly one check.

use std::collections::BTreeMap;

use nalgebra::DMatrix;
use num_rational::Ratio;

use super::config::{SuiteConfig, Tolerances};
use super::fixtures::{golden_virasoro_bott, virasoro_bott_pair};
use super::generate::{digest, Gen};
use crate::cocycles::{
    abelian_law_residual, circle_extension_cocycle, div_cocycle, div_omega, dtau, gauge_extension_cocycle,
    invariant_form_cocycle, lie_cocycle_residual, lie_from_group, tau1, tau1_raw, tau2, tau2_raw, virasoro_bott,
    virasoro_bott_quadrature, volume_cocycle, volume_delta, volume_extension_cocycle, CocycleValue,
    ExtensionElement, ExtensionGroup, GroupCocycle, Tau, VolumeDelta, BRIDGE_STEP,
};
use crate::diffeo::{act_on_matrix, act_on_scalar, pullback_form, Diffeo, VectorFieldT};
use crate::error::{Error, Result};
use crate::gauge::{
    gauge_cocycle_gl, gauge_cocycle_gl_composed, heisenberg_cocycle_circle, heisenberg_cocycle_form,
    homotopy_cocycle_oracle, CosSin, GaugeMap, LoopPos,
};
use crate::geometry::{basis, matrix_wedge_trace, FormMatrix, KClass, KForm, MatrixField};
use crate::heisenberg::{fourier_cocycle, kappa, phi_ext, HeisenbergElement, LoopExtension};
use crate::spectral::{FourierScalar, GridSpec, UnaryFn};

#[derive(Clone, Copy, Debug)]
pub enum Tol {
    Algebraic,
    Composition,
    Oracle,
    FiniteDifference,
    Roundoff,
    Fixed(f64),
}

impl Tol {
    pub fn value(self, t: &Tolerances) -> f64 {
        match self {
            Tol::Algebraic => t.algebraic,
            Tol::Composition => t.composition,
            Tol::Oracle => t.oracle,
            Tol::FiniteDifference => t.finite_difference,
            Tol::Roundoff => t.roundoff,
            Tol::Fixed(v) => v,
        }
    }
}

#[derive(Clone, Copy, Debug)]
pub enum Trials {
    Config,
    AtLeast(usize),
    Once,
}

impl Trials {
    pub fn count(self, cfg: &SuiteConfig) -> usize {
        match self {
            Trials::Config => cfg.trials,
            Trials::AtLeast(n) => cfg.trials.max(n),
            Trials::Once => 1,
        }
    }
}

pub struct Trial {
    pub residual: f64,
    pub digest: String,
}

/// Observed and reference coordinates for a proportionality fit.
pub struct Sample {
    pub observed: Vec<f64>,
    pub reference: Vec<f64>,
    pub digest: String,
}

pub type ResidualFn = fn(&Ctx, &mut Gen) -> Result<Trial>;
pub type SampleFn = fn(&Ctx, &mut Gen) -> Result<Sample>;

#[derive(Clone, Copy)]
pub enum Kind {
    Residual(ResidualFn),
    /// Residual is the largest deviation from `k·reference` relative to scale;
    /// `k` is recorded under `constant`.
    Proportional { constant: &'static str, run: SampleFn },
}

#[derive(Clone, Copy)]
pub struct CheckDef {
    pub id: &'static str,
    pub suite: &'static str,
    pub anchor: &'static str,
    pub tol: Tol,
    pub trials: Trials,
    pub kind: Kind,
}

const CAP_3D: usize = 2;

pub struct Ctx<'a> {
    pub cfg: &'a SuiteConfig,
}

impl Ctx<'_> {
    fn spec(&self) -> Result<GridSpec> {
        self.cfg.spec(self.cfg.dim)
    }

    /// Doubled degree, for checks passing through fitted inverses or quotients
    /// whose exact values are not band-limited.
    fn fine(&self) -> Result<GridSpec> {
        self.cfg.spec(self.cfg.dim)?.with_degree(2 * self.cfg.degree)
    }

    fn circle(&self) -> Result<GridSpec> {
        self.cfg.spec(1)
    }

    /// Three-torus grid at the smallest alias-safe degree for mode cap 2.
    fn spec3(&self) -> Result<GridSpec> {
        GridSpec::with_oversample(3, self.cfg.degree.min(3 * CAP_3D), self.cfg.oversample)
    }

    fn amp(&self) -> super::config::Amplitudes {
        self.cfg.amplitudes
    }
}

fn trial(residual: f64, inputs: &impl serde::Serialize) -> Result<Trial> {
    Ok(Trial {
        residual,
        digest: digest(inputs),
    })
}

fn random_form(g: &mut Gen, spec: GridSpec, k: usize, amp: f64) -> KForm {
    let comps = basis(spec.dim(), k).iter().map(|_| g.scalar(spec, amp)).collect();
    KForm::from_parts(spec, k, comps)
}

fn random_points(g: &mut Gen, dim: usize, count: usize) -> Vec<Vec<f64>> {
    (0..count)
        .map(|_| (0..dim).map(|_| g.uniform(0.0, 1.0)).collect())
        .collect()
}

fn form_size(f: &KForm) -> f64 {
    f.max_abs_coeff()
}

// ---- spectral ----

fn spectral_leibniz(ctx: &Ctx, g: &mut Gen) -> Result<Trial> {
    let spec = ctx.spec()?;
    let a = g.scalar(spec, 1.0);
    let b = g.scalar(spec, 1.0);
    let ab = a.multiply(&b)?;
    let mut r: f64 = 0.0;
    for j in 0..spec.dim() {
        let lhs = ab.differentiate(j)?;
        let rhs = &a.differentiate(j)?.multiply(&b)? + &a.multiply(&b.differentiate(j)?)?;
        r = r.max(lhs.max_abs_diff(&rhs));
    }
    trial(r, &(a, b))
}

fn spectral_mean_of_derivative(ctx: &Ctx, g: &mut Gen) -> Result<Trial> {
    let spec = ctx.spec()?;
    let a = g.scalar(spec, 1.0);
    let mut r: f64 = 0.0;
    for j in 0..spec.dim() {
        r = r.max(a.differentiate(j)?.integrate_mean().abs());
    }
    trial(r, &a)
}

fn spectral_eval_product(ctx: &Ctx, g: &mut Gen) -> Result<Trial> {
    let spec = ctx.spec()?;
    let a = g.scalar(spec, 1.0);
    let b = g.scalar(spec, 1.0);
    let pts = random_points(g, spec.dim(), 20);
    let ab = a.multiply(&b)?.evaluate_at(&pts)?;
    let av = a.evaluate_at(&pts)?;
    let bv = b.evaluate_at(&pts)?;
    let r = (0..pts.len())
        .map(|i| (ab[i] - av[i] * bv[i]).abs())
        .fold(0.0, f64::max);
    trial(r, &(a, b, pts))
}

fn spectral_ln_exp(ctx: &Ctx, g: &mut Gen) -> Result<Trial> {
    let spec = ctx.spec()?;
    let a = g.scalar(spec, ctx.amp().scalar);
    let back = a.pointwise_unary(UnaryFn::Exp)?.pointwise_unary(UnaryFn::LnAbs)?;
    trial(back.max_abs_diff(&a), &a)
}

// ---- geometry ----

fn geometry_d_squared(ctx: &Ctx, g: &mut Gen) -> Result<Trial> {
    let spec = ctx.spec()?;
    let mut r: f64 = 0.0;
    let mut inputs = Vec::new();
    for k in 0..spec.dim() {
        let w = random_form(g, spec, k, 1.0);
        r = r.max(form_size(&w.exterior_d().exterior_d()));
        inputs.push(w);
    }
    trial(r, &inputs)
}

fn geometry_graded_leibniz(ctx: &Ctx, g: &mut Gen) -> Result<Trial> {
    let spec = ctx.spec()?;
    let n = spec.dim();
    let mut r: f64 = 0.0;
    let mut inputs = Vec::new();
    for k in 0..n {
        for l in 0..n - k {
            let w = random_form(g, spec, k, 1.0);
            let e = random_form(g, spec, l, 1.0);
            let lhs = w.wedge(&e)?.exterior_d();
            let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
            let rhs = w
                .exterior_d()
                .wedge(&e)?
                .add(&w.wedge(&e.exterior_d())?.scale(sign))?;
            r = r.max(lhs.max_abs_diff(&rhs));
            inputs.push((w, e));
        }
    }
    trial(r, &inputs)
}

fn geometry_projection(ctx: &Ctx, g: &mut Gen) -> Result<Trial> {
    let spec = ctx.spec()?;
    let w = random_form(g, spec, 1, 1.0);
    let a = g.scalar(spec, 1.0);
    let p = KClass::project(&w)?;
    let pp = KClass::project(p.rep())?;
    let exact = KClass::project(&KForm::scalar(a.clone()).exterior_d())?;
    let shifted = KClass::project(&w.add(&KForm::scalar(a.clone()).exterior_d())?)?;
    let r = pp
        .max_abs_diff(&p)
        .max(exact.max_abs_coeff())
        .max(shifted.max_abs_diff(&p));
    trial(r, &(w, a))
}

fn geometry_inverse_neumann(ctx: &Ctx, g: &mut Gen) -> Result<Trial> {
    let spec = ctx.fine()?;
    let n = spec.dim();
    let p = MatrixField::from_entries(spec, n, (0..n * n).map(|_| g.scalar(spec, 1.0)).collect())?;
    let m = MatrixField::from_entries(
        spec,
        n,
        p.entries()
            .iter()
            .enumerate()
            .map(|(ik, e)| {
                let s = e.scale(0.1);
                if ik / n == ik % n {
                    &s + &FourierScalar::constant(spec, 1.0)
                } else {
                    s
                }
            })
            .collect(),
    )?;
    let inv = m.inverse()?.grid_values();
    let mut r: f64 = 0.0;
    for (pv, iv) in p.grid_values().iter().zip(&inv) {
        let x = pv * -0.1;
        let mut term = DMatrix::<f64>::identity(n, n);
        let mut sum = term.clone();
        for _ in 0..80 {
            term = &term * &x;
            sum += &term;
        }
        r = r.max((iv - sum).amax());
    }
    trial(r, &p)
}

fn random_form_matrix(g: &mut Gen, spec: GridSpec, amp: f64) -> Result<FormMatrix> {
    let n = spec.dim();
    FormMatrix::from_entries(spec, n, (0..n * n).map(|_| random_form(g, spec, 1, amp)).collect())
}

fn geometry_cyclic_trace(ctx: &Ctx, g: &mut Gen) -> Result<Trial> {
    let spec = ctx.fine()?;
    let gm = g.gauge(spec, ctx.amp().gauge)?;
    let h = random_form_matrix(g, spec, 1.0)?;
    let k = random_form_matrix(g, spec, 1.0)?;
    let gi = gm.inverse()?;
    let lhs = matrix_wedge_trace(
        &FormMatrix::left_mul(gi.field(), &h)?,
        &FormMatrix::right_mul(&k, gm.field())?,
    )?;
    let rhs = matrix_wedge_trace(&h, &k)?;
    trial(lhs.max_abs_diff(&rhs), &(gm, h, k))
}

// ---- diffeo ----

fn diffeo_triple(ctx: &Ctx, g: &mut Gen, spec: GridSpec) -> Result<(Diffeo, Diffeo, Diffeo)> {
    let a = ctx.amp().diffeo;
    Ok((g.diffeo(spec, a)?, g.diffeo(spec, a)?, g.diffeo(spec, a)?))
}

fn diffeo_chain_rule(ctx: &Ctx, g: &mut Gen) -> Result<Trial> {
    let spec = ctx.spec()?;
    let a = ctx.amp().diffeo;
    let f = g.diffeo(spec, a)?;
    let h = g.diffeo(spec, a)?;
    let lhs = f.compose(&h)?.jacobian();
    let rhs = act_on_matrix(&f.jacobian(), &h)?.matmul(&h.jacobian())?;
    trial(lhs.sup_diff(&rhs), &(f, h))
}

fn diffeo_right_action(ctx: &Ctx, g: &mut Gen) -> Result<Trial> {
    let spec = ctx.spec()?;
    let a = g.scalar(spec, 1.0);
    let f = g.diffeo(spec, ctx.amp().diffeo)?;
    let h = g.diffeo(spec, ctx.amp().diffeo)?;
    let lhs = act_on_scalar(&act_on_scalar(&a, &f)?, &h)?;
    let rhs = act_on_scalar(&a, &f.compose(&h)?)?;
    trial(lhs.max_abs_diff(&rhs), &(a, f, h))
}

fn diffeo_pullback_d(ctx: &Ctx, g: &mut Gen) -> Result<Trial> {
    let spec = ctx.spec()?;
    let f = g.diffeo(spec, ctx.amp().diffeo)?;
    let mut r: f64 = 0.0;
    let mut inputs = Vec::new();
    for k in 0..spec.dim() {
        let w = random_form(g, spec, k, 1.0);
        let lhs = pullback_form(&w, &f)?.exterior_d();
        let rhs = pullback_form(&w.exterior_d(), &f)?;
        r = r.max(lhs.max_abs_diff(&rhs));
        inputs.push(w);
    }
    trial(r, &(f, inputs))
}

fn diffeo_pullback_compose(ctx: &Ctx, g: &mut Gen) -> Result<Trial> {
    let spec = ctx.spec()?;
    let (f, h, _) = diffeo_triple(ctx, g, spec)?;
    let fh = f.compose(&h)?;
    let mut r: f64 = 0.0;
    let mut inputs = Vec::new();
    for k in 0..=spec.dim() {
        let w = random_form(g, spec, k, 1.0);
        let lhs = pullback_form(&pullback_form(&w, &f)?, &h)?;
        let rhs = pullback_form(&w, &fh)?;
        r = r.max(lhs.max_abs_diff(&rhs));
        inputs.push(w);
    }
    trial(r, &(f, h, inputs))
}

fn diffeo_associativity(ctx: &Ctx, g: &mut Gen) -> Result<Trial> {
    let spec = ctx.spec()?;
    let (f, h, k) = diffeo_triple(ctx, g, spec)?;
    let lhs = f.compose(&h)?.compose(&k)?;
    let rhs = f.compose(&h.compose(&k)?)?;
    trial(lhs.max_abs_diff(&rhs), &(f, h, k))
}

fn diffeo_inverse(ctx: &Ctx, g: &mut Gen) -> Result<Trial> {
    let spec = ctx.spec()?;
    let f = g.diffeo(spec, ctx.amp().diffeo)?;
    let inv = f.inverse()?;
    let id = Diffeo::identity(spec);
    let r = f.compose(&inv)?.sup_diff(&id).max(inv.compose(&f)?.sup_diff(&id));
    trial(r, &f)
}

fn diffeo_flow_additive(ctx: &Ctx, g: &mut Gen) -> Result<Trial> {
    let spec = ctx.spec()?;
    let v = g.vector_smooth(spec, ctx.amp().field);
    let t = g.uniform(0.1, 0.4);
    let s = g.uniform(0.1, 0.4);
    let lhs = v.flow(t + s)?;
    let rhs = v.flow(t)?.compose(&v.flow(s)?)?;
    trial(lhs.sup_diff(&rhs), &(v, t, s))
}

fn diffeo_flow_oracle(_ctx: &Ctx, _g: &mut Gen) -> Result<Trial> {
    let spec = GridSpec::new(1, 24)?;
    let v = VectorFieldT::new(vec![FourierScalar::from_modes(
        spec,
        &[(vec![1], num_complex::Complex64::new(0.0, -0.1))],
    )?])?;
    let t = 0.1;
    let flow = v.flow(t)?;
    let mut r: f64 = 0.0;
    for i in 0..37 {
        let x0 = (i as f64 + 0.5) / 37.0;
        let pi = std::f64::consts::PI;
        let exact = {
            // tan(πx(t)) = tan(πx₀)·e^{0.4πt}, continued through the poles.
            let y = ((pi * x0).tan() * (0.4 * pi * t).exp()).atan() / pi;
            let shift = (x0 - y).round();
            y + shift
        };
        r = r.max((flow.map_point(&[x0])[0] - exact).abs());
    }
    trial(r, &(t, 24))
}

fn diffeo_bracket_jacobi(ctx: &Ctx, g: &mut Gen) -> Result<Trial> {
    let spec = ctx.spec()?;
    let amp = ctx.amp().field;
    let (u, v, w) = (g.vector_smooth(spec, amp), g.vector_smooth(spec, amp), g.vector_smooth(spec, amp));
    let a = u.lie_bracket(&v.lie_bracket(&w)?)?;
    let b = v.lie_bracket(&w.lie_bracket(&u)?)?;
    let c = w.lie_bracket(&u.lie_bracket(&v)?)?;
    trial(a.add(&b)?.add(&c)?.max_abs_coeff(), &(u, v, w))
}

fn diffeo_lie_derivative_fd(ctx: &Ctx, g: &mut Gen) -> Result<Trial> {
    let spec = ctx.spec()?;
    let v = g.vector_smooth(spec, ctx.amp().field);
    let h = 1e-3;
    let plus = v.flow(h)?;
    let minus = v.flow(-h)?;
    let mut r: f64 = 0.0;
    let mut inputs = Vec::new();
    for k in 0..=spec.dim() {
        let w = random_form(g, spec, k, 1.0);
        let fd = pullback_form(&w, &plus)?
            .sub(&pullback_form(&w, &minus)?)?
            .scale(0.5 / h);
        r = r.max(fd.max_abs_diff(&v.lie_derivative(&w)?));
        inputs.push(w);
    }
    trial(r, &(v, inputs))
}

fn diffeo_lie_derivative_d(ctx: &Ctx, g: &mut Gen) -> Result<Trial> {
    let spec = ctx.spec()?;
    let v = g.vector_smooth(spec, ctx.amp().field);
    let mut r: f64 = 0.0;
    let mut inputs = Vec::new();
    for k in 0..spec.dim() {
        let w = random_form(g, spec, k, 1.0);
        let lhs = v.lie_derivative(&w)?.exterior_d();
        let rhs = v.lie_derivative(&w.exterior_d())?;
        r = r.max(lhs.max_abs_diff(&rhs));
        inputs.push(w);
    }
    trial(r, &(v, inputs))
}

fn diffeo_flow_jacobian(ctx: &Ctx, g: &mut Gen) -> Result<Trial> {
    let spec = ctx.spec()?;
    let v = g.vector_smooth(spec, ctx.amp().field);
    let h = 1e-3;
    let jp = v.flow(h)?.jacobian();
    let jm = v.flow(-h)?.jacobian();
    let vj = v.jacobian();
    let n = spec.dim();
    let r = (0..n * n)
        .map(|ik| {
            let fd = (&jp.entries()[ik] - &jm.entries()[ik]).scale(0.5 / h);
            fd.max_abs_diff(&vj.entries()[ik])
        })
        .fold(0.0, f64::max);
    trial(r, &v)
}

// ---- gauge ----

fn gauge_triple(ctx: &Ctx, g: &mut Gen, spec: GridSpec) -> Result<(GaugeMap, GaugeMap, GaugeMap)> {
    let a = ctx.amp().gauge;
    Ok((g.gauge(spec, a)?, g.gauge(spec, a)?, g.gauge(spec, a)?))
}

fn gauge_cocycle_law(ctx: &Ctx, g: &mut Gen) -> Result<Trial> {
    let spec = ctx.spec()?;
    let (f, h, k) = gauge_triple(ctx, g, spec)?;
    let lhs = gauge_cocycle_gl(&f, &h)?.add(&gauge_cocycle_gl(&f.multiply(&h)?, &k)?)?;
    let rhs = gauge_cocycle_gl(&f, &h.multiply(&k)?)?.add(&gauge_cocycle_gl(&h, &k)?)?;
    trial(lhs.max_abs_diff(&rhs), &(f, h, k))
}

fn gauge_diff_invariance(ctx: &Ctx, g: &mut Gen) -> Result<Trial> {
    let spec = ctx.fine()?;
    let f = g.gauge(spec, ctx.amp().gauge)?;
    let h = g.gauge(spec, ctx.amp().gauge)?;
    let d = g.diffeo(spec, ctx.amp().diffeo)?;
    let lhs = pullback_form(&gauge_cocycle_gl(&f, &h)?, &d)?;
    let rhs = gauge_cocycle_gl(&f.act(&d)?, &h.act(&d)?)?;
    trial(lhs.max_abs_diff(&rhs), &(f, h, d))
}

fn gauge_fused_vs_composed(ctx: &Ctx, g: &mut Gen) -> Result<Trial> {
    let spec = ctx.fine()?;
    let f = g.gauge(spec, ctx.amp().gauge)?;
    let h = g.gauge(spec, ctx.amp().gauge)?;
    let a = gauge_cocycle_gl(&f, &h)?;
    let b = gauge_cocycle_gl_composed(&f, &h)?;
    trial(a.max_abs_diff(&b), &(f, h))
}

fn gauge_group_inverse(ctx: &Ctx, g: &mut Gen) -> Result<Trial> {
    let spec = ctx.fine()?;
    let f = g.gauge(spec, ctx.amp().gauge)?;
    let id = GaugeMap::identity(spec);
    let r = f
        .multiply(&f.inverse()?)?
        .sup_diff(&id)
        .max(f.multiply(&id)?.max_abs_diff(&f));
    trial(r, &f)
}

fn gauge_heisenberg_form_law(ctx: &Ctx, g: &mut Gen) -> Result<Trial> {
    let spec = ctx.spec()?;
    let a = ctx.amp().loop_;
    let (u, v, w) = (g.loop_pos(spec, a), g.loop_pos(spec, a), g.loop_pos(spec, a));
    let lhs = heisenberg_cocycle_form(&u, &v)?.add(&heisenberg_cocycle_form(&u.multiply(&v)?, &w)?)?;
    let rhs = heisenberg_cocycle_form(&v, &w)?.add(&heisenberg_cocycle_form(&u, &v.multiply(&w)?)?)?;
    trial(lhs.max_abs_diff(&rhs), &(u, v, w))
}

// ---- pull-back cocycles ----

fn law_trial<B: GroupCocycle>(b: &B, f: &Diffeo, h: &Diffeo, k: &Diffeo) -> Result<Trial> {
    trial(abelian_law_residual(b, f, h, k)?, &(f, h, k))
}

fn pullback_gauge_law(ctx: &Ctx, g: &mut Gen) -> Result<Trial> {
    let spec = ctx.spec()?;
    let (f, h, k) = diffeo_triple(ctx, g, spec)?;
    law_trial(&gauge_extension_cocycle(), &f, &h, &k)
}

fn pullback_circle_law(ctx: &Ctx, g: &mut Gen) -> Result<Trial> {
    let spec = ctx.circle()?;
    let (f, h, k) = diffeo_triple(ctx, g, spec)?;
    law_trial(&circle_extension_cocycle(), &f, &h, &k)
}

fn random_volume_form(ctx: &Ctx, g: &mut Gen, spec: GridSpec) -> Result<KForm> {
    let a = g.scalar(spec, ctx.amp().scalar).pointwise_unary(UnaryFn::Exp)?;
    let idx: Vec<usize> = (0..spec.dim()).collect();
    KForm::from_terms(spec, spec.dim(), vec![(idx, a)])
}

fn pullback_volume_law(ctx: &Ctx, g: &mut Gen) -> Result<Trial> {
    let spec = ctx.spec()?;
    let (f, h, k) = diffeo_triple(ctx, g, spec)?;
    let omega = random_volume_form(ctx, g, spec)?;
    let r = abelian_law_residual(&volume_extension_cocycle(omega.clone())?, &f, &h, &k)?;
    trial(r, &(f, h, k, omega))
}

fn pullback_identity(ctx: &Ctx, g: &mut Gen) -> Result<Trial> {
    let spec = ctx.spec()?;
    let f = g.diffeo(spec, ctx.amp().diffeo)?;
    let id = Diffeo::identity(spec);
    let b = gauge_extension_cocycle();
    let omega = random_volume_form(ctx, g, spec)?;
    let vb = volume_extension_cocycle(omega.clone())?;
    let cspec = ctx.circle()?;
    let fc = g.diffeo(cspec, ctx.amp().diffeo)?;
    let idc = Diffeo::identity(cspec);
    let cb = circle_extension_cocycle();
    let r = [
        b.eval(&id, &f)?.norm(),
        b.eval(&f, &id)?.norm(),
        vb.eval(&id, &f)?.norm(),
        vb.eval(&f, &id)?.norm(),
        cb.eval(&idc, &fc)?.abs(),
        cb.eval(&fc, &idc)?.abs(),
    ]
    .into_iter()
    .fold(0.0, f64::max);
    trial(r, &(f, omega, fc))
}

fn pullback_volume_crossed(ctx: &Ctx, g: &mut Gen) -> Result<Trial> {
    let spec = ctx.spec()?;
    let f = g.diffeo(spec, ctx.amp().diffeo)?;
    let h = g.diffeo(spec, ctx.amp().diffeo)?;
    let omega = random_volume_form(ctx, g, spec)?;
    let lhs = volume_delta(&f.compose(&h)?, &omega)?;
    let rhs = volume_delta(&f, &omega)?.act(&h)?.multiply(&volume_delta(&h, &omega)?)?;
    trial(lhs.max_abs_diff(&rhs), &(f, h, omega))
}

fn extension_associativity(ctx: &Ctx, g: &mut Gen) -> Result<Trial> {
    let spec = ctx.spec()?;
    let (f, h, k) = diffeo_triple(ctx, g, spec)?;
    let gauge = ExtensionGroup::gauge();
    let tails: Vec<KForm> = (0..3).map(|_| random_form(g, spec, 2, 1.0)).collect();
    let el = |d: &Diffeo, t: &KForm| ExtensionElement {
        base: d.clone(),
        tail: t.clone(),
    };
    let (x, y, z) = (el(&f, &tails[0]), el(&h, &tails[1]), el(&k, &tails[2]));
    let lhs = gauge.multiply(&gauge.multiply(&x, &y)?, &z)?;
    let rhs = gauge.multiply(&x, &gauge.multiply(&y, &z)?)?;
    let mut r = lhs.tail.max_abs_diff(&rhs.tail).max(lhs.base.max_abs_diff(&rhs.base));

    let omega = random_volume_form(ctx, g, spec)?;
    let vol = ExtensionGroup::volume(omega.clone())?;
    let ctails: Vec<KClass> = (0..3)
        .map(|_| KClass::project(&random_form(g, spec, 1, 1.0)))
        .collect::<Result<_>>()?;
    let el = |d: &Diffeo, t: &KClass| ExtensionElement {
        base: d.clone(),
        tail: t.clone(),
    };
    let (x, y, z) = (el(&f, &ctails[0]), el(&h, &ctails[1]), el(&k, &ctails[2]));
    let lhs = vol.multiply(&vol.multiply(&x, &y)?, &z)?;
    let rhs = vol.multiply(&x, &vol.multiply(&y, &z)?)?;
    r = r.max(lhs.tail.max_abs_diff(&rhs.tail));
    trial(r, &(f, h, k, tails, ctails, omega))
}

// ---- circle ----

fn circle_pair(ctx: &Ctx, g: &mut Gen) -> Result<(Diffeo, Diffeo)> {
    let spec = ctx.circle()?;
    Ok((g.diffeo(spec, ctx.amp().diffeo)?, g.diffeo(spec, ctx.amp().diffeo)?))
}

fn circle_heisenberg_pullback(ctx: &Ctx, g: &mut Gen) -> Result<Trial> {
    let (f, h) = circle_pair(ctx, g)?;
    let b = virasoro_bott(&f, &h)?;
    let c = circle_extension_cocycle().eval(&f, &h)?;
    trial((b - c).abs(), &(f, h))
}

fn circle_quadrature(ctx: &Ctx, g: &mut Gen) -> Result<Trial> {
    let (f, h) = circle_pair(ctx, g)?;
    let b = virasoro_bott(&f, &h)?;
    let q = virasoro_bott_quadrature(&f, &h, 4096)?;
    trial((b - q).abs(), &(f, h))
}

fn circle_golden(_ctx: &Ctx, _g: &mut Gen) -> Result<Trial> {
    let fixture = golden_virasoro_bott()?;
    let (f, h) = virasoro_bott_pair(48)?;
    trial((virasoro_bott(&f, &h)? - fixture.value).abs(), &fixture)
}

fn loop_pair(ctx: &Ctx, g: &mut Gen) -> Result<(LoopPos, LoopPos)> {
    let spec = ctx.circle()?;
    Ok((g.loop_pos(spec, ctx.amp().loop_), g.loop_pos(spec, ctx.amp().loop_)))
}

fn circle_heisenberg_chain(ctx: &Ctx, g: &mut Gen) -> Result<Trial> {
    let (f, h) = loop_pair(ctx, g)?;
    let homotopy = homotopy_cocycle_oracle(&f, &h, 512)?;
    let integral = heisenberg_cocycle_circle(&f, &h)?;
    let fourier = fourier_cocycle(
        &CosSin::from_scalar(f.logval())?.modes,
        &CosSin::from_scalar(h.logval())?.modes,
    );
    let r = (homotopy - integral)
        .abs()
        .max((integral - fourier).abs())
        .max((homotopy - fourier).abs());
    trial(r, &(f, h))
}

fn circle_fourier_form(ctx: &Ctx, g: &mut Gen) -> Result<Trial> {
    let (f, h) = loop_pair(ctx, g)?;
    let a = CosSin::from_scalar(f.logval())?;
    let b = CosSin::from_scalar(h.logval())?;
    let r = (heisenberg_cocycle_circle(&f, &h)? - fourier_cocycle(&a.modes, &b.modes)).abs();
    trial(r, &(a, b))
}

fn circle_antisymmetry(ctx: &Ctx, g: &mut Gen) -> Result<Trial> {
    let (f, h) = loop_pair(ctx, g)?;
    let r = (heisenberg_cocycle_circle(&f, &h)? + heisenberg_cocycle_circle(&h, &f)?).abs();
    trial(r, &(f, h))
}

// ---- heisenberg ----

fn heisenberg_phi(ctx: &Ctx, g: &mut Gen) -> Result<Trial> {
    let (f, h) = loop_pair(ctx, g)?;
    let x = LoopExtension::new(f, g.uniform(-1.0, 1.0));
    let y = LoopExtension::new(h, g.uniform(-1.0, 1.0));
    let lhs = phi_ext(&x.multiply(&y)?)?;
    let rhs = phi_ext(&x)?.h_multiply(&phi_ext(&y)?);
    trial(lhs.max_abs_diff(&rhs), &(x, y))
}

fn rational_element(g: &mut Gen) -> HeisenbergElement<Ratio<i64>> {
    let q = |g: &mut Gen| Ratio::new(g.int(-6, 6), g.int(1, 6));
    let central = q(g);
    let zero = q(g);
    let modes: Vec<(i64, Ratio<i64>)> = (0..5)
        .map(|_| {
            let mut j = g.int(-3, 3);
            if j == 0 {
                j = 1;
            }
            (j, q(g))
        })
        .collect();
    HeisenbergElement::new(central, zero, modes)
}

fn heisenberg_exact(_ctx: &Ctx, g: &mut Gen) -> Result<Trial> {
    let (x, y, z) = (rational_element(g), rational_element(g), rational_element(g));
    let id = HeisenbergElement::identity();
    let ok = x.h_multiply(&y).h_multiply(&z) == x.h_multiply(&y.h_multiply(&z))
        && x.h_multiply(&x.inverse()) == id
        && x.inverse().h_multiply(&x) == id
        && x.h_multiply(&id) == x
        && kappa(&x, &y) + kappa(&x.h_multiply(&y), &z) == kappa(&x, &y.h_multiply(&z)) + kappa(&y, &z);
    let show = |e: &HeisenbergElement<Ratio<i64>>| format!("{e:?}");
    trial(if ok { 0.0 } else { 1.0 }, &(show(&x), show(&y), show(&z)))
}

// ---- Lie algebra ----

fn field_triple(ctx: &Ctx, g: &mut Gen, spec: GridSpec) -> (VectorFieldT, VectorFieldT, VectorFieldT) {
    let a = ctx.amp().field;
    (g.vector_smooth(spec, a), g.vector_smooth(spec, a), g.vector_smooth(spec, a))
}

fn lie_skew(ctx: &Ctx, g: &mut Gen) -> Result<Trial> {
    let spec = ctx.spec()?;
    let (v, w, _) = field_triple(ctx, g, spec);
    let mut r: f64 = 0.0;
    for c in [tau1, tau2] {
        r = r.max(c(&v, &w)?.add(&c(&w, &v)?)?.max_abs_coeff());
        r = r.max(c(&v, &v)?.max_abs_coeff());
    }
    for which in [Tau::One, Tau::Two] {
        r = r.max(dtau(which, &v, &w)?.add(&dtau(which, &w, &v)?)?.max_abs_coeff());
        r = r.max(dtau(which, &v, &v)?.max_abs_coeff());
    }
    trial(r, &(v, w))
}

fn jacobi_residual(which: usize, u: &VectorFieldT, v: &VectorFieldT, w: &VectorFieldT) -> Result<f64> {
    match which {
        0 => lie_cocycle_residual(tau1, u, v, w),
        1 => lie_cocycle_residual(tau2, u, v, w),
        2 => lie_cocycle_residual(|a, b| dtau(Tau::One, a, b), u, v, w),
        _ => lie_cocycle_residual(|a, b| dtau(Tau::Two, a, b), u, v, w),
    }
}

fn jacobi_trial(ctx: &Ctx, g: &mut Gen, which: usize) -> Result<Trial> {
    let spec = ctx.spec()?;
    let (u, v, w) = field_triple(ctx, g, spec);
    trial(jacobi_residual(which, &u, &v, &w)?, &(u, v, w))
}

fn lie_jacobi_tau1(ctx: &Ctx, g: &mut Gen) -> Result<Trial> {
    jacobi_trial(ctx, g, 0)
}

fn lie_jacobi_tau2(ctx: &Ctx, g: &mut Gen) -> Result<Trial> {
    jacobi_trial(ctx, g, 1)
}

fn lie_jacobi_dtau1(ctx: &Ctx, g: &mut Gen) -> Result<Trial> {
    jacobi_trial(ctx, g, 2)
}

fn lie_jacobi_dtau2(ctx: &Ctx, g: &mut Gen) -> Result<Trial> {
    jacobi_trial(ctx, g, 3)
}

fn lie_jacobi_3d(ctx: &Ctx, g: &mut Gen) -> Result<Trial> {
    let spec = ctx.spec3()?;
    let mut g3 = Gen::new(g.int(0, i64::MAX) as u64, spec.degree() / 3);
    let (u, v, w) = field_triple(ctx, &mut g3, spec);
    let mut r: f64 = 0.0;
    for which in 0..4 {
        r = r.max(jacobi_residual(which, &u, &v, &w)?);
    }
    let mut skew: f64 = 0.0;
    for c in [tau1, tau2] {
        skew = skew.max(c(&u, &v)?.add(&c(&v, &u)?)?.max_abs_coeff());
    }
    for which in [Tau::One, Tau::Two] {
        skew = skew.max(dtau(which, &u, &v)?.add(&dtau(which, &v, &u)?)?.max_abs_coeff());
    }
    if skew > ctx.cfg.tolerances.roundoff {
        return Err(Error::Consistency(format!("skew-symmetry defect {skew:e} in three dimensions")));
    }
    trial(r, &(u, v, w))
}

fn lie_dtau_paths(ctx: &Ctx, g: &mut Gen) -> Result<Trial> {
    let spec = ctx.spec()?;
    let (v, w, _) = field_triple(ctx, g, spec);
    let r = dtau(Tau::One, &v, &w)?
        .max_abs_diff(&tau1_raw(&v, &w)?.exterior_d())
        .max(dtau(Tau::Two, &v, &w)?.max_abs_diff(&tau2_raw(&v, &w)?.exterior_d()));
    trial(r, &(v, w))
}

fn lie_coordinate_formula(ctx: &Ctx, g: &mut Gen) -> Result<Trial> {
    let spec = ctx.spec()?;
    let a = g.scalar(spec, ctx.amp().field);
    let b = g.scalar(spec, ctx.amp().field);
    let n = spec.dim();
    let mut r: f64 = 0.0;
    for i in 0..n {
        for j in 0..n {
            let v = VectorFieldT::along(a.clone(), i)?;
            let w = VectorFieldT::along(b.clone(), j)?;
            let t1: Vec<FourierScalar> = (0..n)
                .map(|k| a.partial(j).multiply(&b.partial(i).partial(k)))
                .collect::<Result<_>>()?;
            let t2: Vec<FourierScalar> = (0..n)
                .map(|k| a.partial(i).multiply(&b.partial(j).partial(k)))
                .collect::<Result<_>>()?;
            r = r.max(tau1(&v, &w)?.max_abs_diff(&KClass::project(&KForm::one_form(t1)?)?));
            r = r.max(tau2(&v, &w)?.max_abs_diff(&KClass::project(&KForm::one_form(t2)?)?));
        }
    }
    trial(r, &(a, b))
}

fn lie_invariant_form(ctx: &Ctx, g: &mut Gen) -> Result<Trial> {
    let spec = ctx.spec()?;
    let (v, w, _) = field_triple(ctx, g, spec);
    let alpha = g.uniform(-2.0, 2.0);
    let beta = g.uniform(-2.0, 2.0);
    let lhs = invariant_form_cocycle(alpha, beta, &v, &w)?;
    let rhs = tau1(&v, &w)?.scale(alpha).add(&tau2(&v, &w)?.scale(beta))?;
    trial(lhs.max_abs_diff(&rhs), &(v, w, alpha, beta))
}

// ---- trivialization ----

fn trivial_divergence_free(ctx: &Ctx, g: &mut Gen) -> Result<Trial> {
    let spec = ctx.spec()?;
    let v = g.divergence_free(spec, ctx.amp().field)?;
    let w = g.vector_smooth(spec, ctx.amp().field);
    let r = tau2(&v, &w)?.max_abs_coeff().max(v.divergence().max_abs_coeff());
    trial(r, &(v, w))
}

fn trivial_volume_preserving(ctx: &Ctx, g: &mut Gen) -> Result<Trial> {
    let spec = ctx.spec()?;
    let a = ctx.amp().diffeo;
    let f = g.shear(spec, 0, a)?;
    let h = g.shear(spec, 1, a)?;
    let omega = VolumeDelta::standard(spec).omega;
    let r = volume_cocycle(&f, &h, &omega)?
        .max_abs_coeff()
        .max(volume_cocycle(&h, &f, &omega)?.max_abs_coeff());
    trial(r, &(f, h))
}

fn trivial_circle_taus(ctx: &Ctx, g: &mut Gen) -> Result<Trial> {
    let spec = ctx.circle()?;
    let v = g.vector_smooth(spec, ctx.amp().field);
    let w = g.vector_smooth(spec, ctx.amp().field);
    trial(tau1(&v, &w)?.max_abs_diff(&tau2(&v, &w)?), &(v, w))
}

fn trivial_div_cocycle_standard(ctx: &Ctx, g: &mut Gen) -> Result<Trial> {
    let spec = ctx.spec()?;
    let v = g.vector_smooth(spec, ctx.amp().field);
    let w = g.vector_smooth(spec, ctx.amp().field);
    let omega = VolumeDelta::standard(spec).omega;
    trial(div_cocycle(&v, &w, &omega)?.max_abs_diff(&tau2(&v, &w)?), &(v, w))
}

// ---- volume ----

fn volume_delta_det(ctx: &Ctx, g: &mut Gen) -> Result<Trial> {
    let spec = ctx.spec()?;
    let f = g.diffeo(spec, ctx.amp().diffeo)?;
    let omega = VolumeDelta::standard(spec).omega;
    let d = volume_delta(&f, &omega)?.values()?;
    trial((&d - &f.jacobian().determinant()).sup_norm(), &f)
}

fn volume_delta_oracle(ctx: &Ctx, g: &mut Gen) -> Result<Trial> {
    let spec = ctx.spec()?;
    let f = g.diffeo(spec, ctx.amp().diffeo)?;
    let omega = random_volume_form(ctx, g, spec)?;
    let delta = volume_delta(&f, &omega)?;
    let a = omega.coeff_list()[0].evaluator();
    let jac: Vec<_> = f.jacobian().entries().iter().map(|e| e.evaluator()).collect();
    let u = delta.logval().evaluator();
    let n = spec.dim();
    let pts = random_points(g, n, 20);
    let r = pts
        .iter()
        .map(|x| {
            let j = DMatrix::from_fn(n, n, |i, k| jac[i * n + k].eval_real(x));
            let oracle = a.eval_real(&f.map_point(x)) * j.determinant() / a.eval_real(x);
            (oracle - delta.sign() as f64 * u.eval_real(x).exp()).abs()
        })
        .fold(0.0, f64::max);
    trial(r, &(f, omega, pts))
}

fn volume_div_omega(ctx: &Ctx, g: &mut Gen) -> Result<Trial> {
    let spec = ctx.fine()?;
    let v = g.vector_smooth(spec, ctx.amp().field);
    let omega = random_volume_form(ctx, g, spec)?;
    let d = div_omega(&v, &omega)?.evaluator();
    let lie = v.lie_derivative(&omega)?.coeff_list()[0].evaluator();
    let a = omega.coeff_list()[0].evaluator();
    let pts = random_points(g, spec.dim(), 20);
    let r = pts
        .iter()
        .map(|x| (d.eval_real(x) - lie.eval_real(x) / a.eval_real(x)).abs())
        .fold(0.0, f64::max);
    trial(r, &(v, omega, pts))
}

fn volume_cocycle_circle(ctx: &Ctx, g: &mut Gen) -> Result<Trial> {
    let (f, h) = circle_pair(ctx, g)?;
    let omega = VolumeDelta::standard(f.spec()).omega;
    let class = volume_cocycle(&f, &h, &omega)?;
    trial((class.periods()[0] - virasoro_bott(&f, &h)?).abs(), &(f, h))
}

// ---- bridges ----

fn bridge_virasoro_bott(ctx: &Ctx, g: &mut Gen) -> Result<Sample> {
    let spec = ctx.circle()?;
    let v = g.vector_smooth(spec, ctx.amp().field);
    let w = g.vector_smooth(spec, ctx.amp().field);
    let d = lie_from_group(&circle_extension_cocycle(), &v, &w, BRIDGE_STEP)?;
    let vp = v.components()[0].partial(0);
    let wpp = w.components()[0].partial(0).partial(0);
    let reference = vp.multiply(&wpp)?.integrate_mean();
    Ok(Sample {
        observed: vec![d],
        reference: vec![reference],
        digest: digest(&(v, w)),
    })
}

fn bridge_gauge_dtau1(ctx: &Ctx, g: &mut Gen) -> Result<Sample> {
    let spec = ctx.spec()?;
    let v = g.vector_smooth(spec, ctx.amp().field);
    let w = g.vector_smooth(spec, ctx.amp().field);
    let d = lie_from_group(&gauge_extension_cocycle(), &v, &w, BRIDGE_STEP)?;
    let reference = dtau(Tau::One, &v, &w)?;
    Ok(Sample {
        observed: d.coords(),
        reference: reference.coords(),
        digest: digest(&(v, w)),
    })
}

/// Suite names, in report order.
pub const SUITES: &[&str] = &[
    "spectral",
    "geometry",
    "diffeo",
    "gauge",
    "pullback",
    "circle",
    "heisenberg",
    "lie",
    "trivial",
    "volume",
    "bridge",
];

const fn check(id: &'static str, suite: &'static str, anchor: &'static str, tol: Tol, trials: Trials, run: ResidualFn) -> CheckDef {
    CheckDef {
        id,
        suite,
        anchor,
        tol,
        trials,
        kind: Kind::Residual(run),
    }
}

use Tol::*;
use Trials::{AtLeast, Config, Once};

pub static CHECKS: &[CheckDef] = &[
    check("spectral.leibniz", "spectral", "∂(ab) = ∂a·b + a·∂b", Fixed(1e-10), Config, spectral_leibniz),
    check("spectral.mean-of-derivative", "spectral", "∫ ∂a/∂x_j = 0", Fixed(0.0), Config, spectral_mean_of_derivative),
    check("spectral.eval-product", "spectral", "(ab)(x) = a(x)·b(x)", Fixed(1e-10), Config, spectral_eval_product),
    check("spectral.ln-exp", "spectral", "ln|exp(a)| = a", Fixed(1e-9), Config, spectral_ln_exp),
    check("geometry.d-squared", "geometry", "d∘d = 0", Roundoff, Config, geometry_d_squared),
    check("geometry.graded-leibniz", "geometry", "d(ω∧η) = dω∧η + (−1)^k ω∧dη", Fixed(1e-10), Config, geometry_graded_leibniz),
    check("geometry.projection", "geometry", "Ω¹/dΩ⁰ projection idempotent, kills exact forms", Roundoff, Config, geometry_projection),
    check("geometry.inverse-neumann", "geometry", "(I + 0.1P)⁻¹ = Σ (−0.1P)^k", Algebraic, Config, geometry_inverse_neumann),
    check("geometry.cyclic-trace", "geometry", "Tr(g⁻¹h ∧ kg) = Tr(h ∧ k)", Algebraic, Config, geometry_cyclic_trace),
    check("diffeo.chain-rule", "diffeo", "(FG)^J = F^J(G)·G^J", Composition, Config, diffeo_chain_rule),
    check("diffeo.right-action", "diffeo", "(a(F))(G) = a(FG)", Composition, Config, diffeo_right_action),
    check("diffeo.pullback-d", "diffeo", "d(ω(F)) = (dω)(F)", Composition, Config, diffeo_pullback_d),
    check("diffeo.pullback-compose", "diffeo", "(ω(F))(G) = ω(FG)", Composition, Config, diffeo_pullback_compose),
    check("diffeo.associativity", "diffeo", "(FG)H = F(GH)", Composition, Config, diffeo_associativity),
    check("diffeo.inverse", "diffeo", "F∘F⁻¹ = F⁻¹∘F = id", Composition, Config, diffeo_inverse),
    check("diffeo.flow-additive", "diffeo", "flow(v,t+s) = flow(v,t)∘flow(v,s)", Fixed(1e-6), Config, diffeo_flow_additive),
    check("diffeo.flow-oracle", "diffeo", "flow of 0.2 sin(2πx)∂ vs tan(πx(t)) = tan(πx₀)e^{0.4πt}", Fixed(1e-8), Once, diffeo_flow_oracle),
    check("diffeo.bracket-jacobi", "diffeo", "[u,[v,w]] + [v,[w,u]] + [w,[u,v]] = 0", Algebraic, Config, diffeo_bracket_jacobi),
    check("diffeo.lie-derivative-fd", "diffeo", "d/dt ω(flow(v,t)) at 0 = v·ω", FiniteDifference, Config, diffeo_lie_derivative_fd),
    check("diffeo.lie-derivative-d", "diffeo", "v·dω = d(v·ω)", Composition, Config, diffeo_lie_derivative_d),
    check("diffeo.flow-jacobian", "diffeo", "d/dt flow(v,t)^J at 0 = v^J", FiniteDifference, Config, diffeo_flow_jacobian),
    check("gauge.cocycle-law", "gauge", "C(f,g) + C(fg,h) = C(f,gh) + C(g,h) for Tr(f⁻¹df ∧ dg g⁻¹)", Algebraic, Config, gauge_cocycle_law),
    check("gauge.diff-invariance", "gauge", "C(f,g)(H) = C(f(H), g(H))", Composition, Config, gauge_diff_invariance),
    check("gauge.fused-vs-composed", "gauge", "pointwise and composed evaluations of Tr(f⁻¹df ∧ dg g⁻¹) agree", Algebraic, Config, gauge_fused_vs_composed),
    check("gauge.group", "gauge", "f·f⁻¹ = I, f·I = f", Algebraic, Config, gauge_group_inverse),
    check("gauge.heisenberg-form-law", "gauge", "ln|f| d ln|g| is a central cocycle in Ω¹/dΩ⁰", Roundoff, Config, gauge_heisenberg_form_law),
    check("pullback.gauge-law", "pullback", "b(F,G)(H) + b(FG,H) = b(F,GH) + b(G,H), gauge cocycle via jacobian", Composition, Config, pullback_gauge_law),
    check("pullback.circle-law", "pullback", "b(F,G)(H) + b(FG,H) = b(F,GH) + b(G,H), Virasoro-Bott", Composition, Config, pullback_circle_law),
    check("pullback.volume-law", "pullback", "b(F,G)(H) + b(FG,H) = b(F,GH) + b(G,H), volume cocycle", Composition, Config, pullback_volume_law),
    check("pullback.identity", "pullback", "b(id,G) = b(F,id) = 0", Roundoff, Config, pullback_identity),
    check("pullback.volume-crossed", "pullback", "δ(FG) = δ(F)(G)·δ(G)", Composition, Config, pullback_volume_crossed),
    check("pullback.extension-associativity", "pullback", "extension product is associative", Composition, Config, extension_associativity),
    check("circle.heisenberg-pullback", "circle", "B(F,G) = C(F^J(G), G^J)", Fixed(1e-9), AtLeast(50), circle_heisenberg_pullback),
    check("circle.quadrature", "circle", "B(F,G) vs dense quadrature of ∫ ln|F′(G)| d ln|G′|", Fixed(1e-8), Config, circle_quadrature),
    check("circle.golden", "circle", "B(t + 0.1 sin 2πt, t + 0.07 cos 2πt) vs frozen quadrature", Fixed(1e-8), Once, circle_golden),
    check("circle.heisenberg-chain", "circle", "homotopy integral = ∫ ln|f| d ln|g| = π Σ j a_j b_{−j}", Fixed(1e-8), Config, circle_heisenberg_chain),
    check("circle.fourier-form", "circle", "∫ ln|f| d ln|g| = π Σ j a_j b_{−j}", Oracle, Config, circle_fourier_form),
    check("circle.antisymmetry", "circle", "C(f,g) + C(g,f) = 0", Roundoff, Config, circle_antisymmetry),
    check("heisenberg.phi-homomorphism", "heisenberg", "φ((f,α)(g,β)) = φ(f,α)·φ(g,β)", Oracle, Config, heisenberg_phi),
    check("heisenberg.exact-group", "heisenberg", "associativity, inverses and κ cocycle law over ℚ", Fixed(0.0), Config, heisenberg_exact),
    check("lie.skew", "lie", "τ₁, τ₂ skew in Ω¹/dΩ⁰; dτ₁, dτ₂ skew", Roundoff, Config, lie_skew),
    check("lie.jacobi-tau1", "lie", "Lie cocycle law for τ₁", Composition, Config, lie_jacobi_tau1),
    check("lie.jacobi-tau2", "lie", "Lie cocycle law for τ₂", Composition, Config, lie_jacobi_tau2),
    check("lie.jacobi-dtau1", "lie", "Lie cocycle law for dτ₁", Composition, Config, lie_jacobi_dtau1),
    check("lie.jacobi-dtau2", "lie", "Lie cocycle law for dτ₂", Composition, Config, lie_jacobi_dtau2),
    check("lie.jacobi-3d", "lie", "Lie cocycle laws and skew-symmetry for τ₁, τ₂, dτ₁, dτ₂ on T³", Composition, Config, lie_jacobi_3d),
    check("lie.dtau-paths", "lie", "dτ_i = d of the Ω¹ representative of τ_i", Fixed(1e-9), Config, lie_dtau_paths),
    check("lie.coordinate-formula", "lie", "τ₁(v∂_i, w∂_j) = ∂_j v Σ_k ∂_i∂_k w dx_k, τ₂ likewise", Fixed(1e-9), Config, lie_coordinate_formula),
    check("lie.invariant-form", "lie", "(v^J | dw^J) = ατ₁ + βτ₂", Roundoff, Config, lie_invariant_form),
    check("trivial.divergence-free", "trivial", "τ₂ vanishes on divergence-free fields", Fixed(1e-9), Config, trivial_divergence_free),
    check("trivial.volume-preserving", "trivial", "volume cocycle vanishes on volume-preserving pairs", Fixed(1e-9), Config, trivial_volume_preserving),
    check("trivial.circle-taus", "trivial", "τ₁ = τ₂ on the circle", Fixed(0.0), Config, trivial_circle_taus),
    check("trivial.div-cocycle-standard", "trivial", "div(v) d div(w) = τ₂ for the standard volume form", Fixed(1e-9), Config, trivial_div_cocycle_standard),
    check("volume.delta-det", "volume", "δ(F) = det(F^J) for the standard volume form", Fixed(1e-8), Config, volume_delta_det),
    check("volume.delta-oracle", "volume", "δ(F) = ω(F)/ω pointwise", Fixed(1e-8), Config, volume_delta_oracle),
    check("volume.div-omega", "volume", "div_ω(v) = (v·ω)/ω pointwise", Fixed(1e-8), Config, volume_div_omega),
    check("volume.circle", "volume", "∫ of the circle volume cocycle = B(F,G)", Fixed(1e-9), Config, volume_cocycle_circle),
    CheckDef {
        id: "bridge.virasoro-bott",
        suite: "bridge",
        anchor: "mixed derivative of antisymmetrized B ∝ ∫ v′ dw′",
        tol: Fixed(1e-3),
        trials: AtLeast(10),
        kind: Kind::Proportional {
            constant: "bridge.virasoro-bott.k",
            run: bridge_virasoro_bott,
        },
    },
    CheckDef {
        id: "bridge.gauge-dtau1",
        suite: "bridge",
        anchor: "mixed derivative of antisymmetrized Tr(f⁻¹df ∧ dg g⁻¹) pulled back ∝ dτ₁",
        tol: Fixed(1e-3),
        trials: AtLeast(10),
        kind: Kind::Proportional {
            constant: "bridge.gauge-dtau1.k",
            run: bridge_gauge_dtau1,
        },
    },
];

/// Registry consistency: unique ids, known suites, no empty suite.
pub fn check_registry() -> Result<()> {
    let mut seen = BTreeMap::new();
    for c in CHECKS {
        if !SUITES.contains(&c.suite) {
            return Err(Error::Consistency(format!("check {} names unknown suite {}", c.id, c.suite)));
        }
        if !c.id.starts_with(&format!("{}.", c.suite)) {
            return Err(Error::Consistency(format!("check {} is not prefixed by its suite", c.id)));
        }
        if seen.insert(c.id, ()).is_some() {
            return Err(Error::Consistency(format!("duplicate check id {}", c.id)));
        }
    }
    for s in SUITES {
        if !CHECKS.iter().any(|c| c.suite == *s) {
            return Err(Error::Consistency(format!("suite {s} owns no checks")));
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn registry_is_consistent() {
        check_registry().unwrap();
    }

    #[test]
    fn trial_counts() {
        let cfg = SuiteConfig {
            trials: 3,
            ..SuiteConfig::default()
        };
        assert_eq!(Trials::Config.count(&cfg), 3);
        assert_eq!(Trials::AtLeast(50).count(&cfg), 50);
        assert_eq!(Trials::Once.count(&cfg), 1);
    }
}
