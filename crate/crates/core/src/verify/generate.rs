//! Seeded random inputs for the suites.
//!
//! Coefficients are drawn on modes with `max |r_j| ≤ cap` with decay
//! `1/(1+|r|²)` and then rescaled to a target size.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use sha2::{Digest, Sha256};

use crate::diffeo::{Diffeo, VectorFieldT};
use crate::error::{Error, Result};
use crate::gauge::{GaugeMap, LoopPos};
use crate::geometry::MatrixField;
use crate::spectral::{FourierScalar, GridSpec};

pub const MAX_ATTEMPTS: usize = 50;

/// Generator state for one trial.
pub struct Gen {
    rng: ChaCha8Rng,
    cap: usize,
}

/// Stable per-trial seed from the run seed, a check id and a trial index.
pub fn trial_seed(seed: u64, check: &str, trial: usize) -> u64 {
    let mut h = Sha256::new();
    h.update(seed.to_le_bytes());
    h.update(check.as_bytes());
    h.update((trial as u64).to_le_bytes());
    let out = h.finalize();
    u64::from_le_bytes(out[..8].try_into().expect("8 bytes"))
}

impl Gen {
    pub fn new(seed: u64, cap: usize) -> Self {
        Gen {
            rng: ChaCha8Rng::seed_from_u64(seed),
            cap: cap.max(1),
        }
    }

    /// Degree cap used by the draws.
    pub fn cap(&self) -> usize {
        self.cap
    }

    pub fn with_cap(mut self, cap: usize) -> Self {
        self.cap = cap.max(1);
        self
    }

    pub fn uniform(&mut self, lo: f64, hi: f64) -> f64 {
        self.rng.random_range(lo..hi)
    }

    pub fn int(&mut self, lo: i64, hi: i64) -> i64 {
        self.rng.random_range(lo..=hi)
    }

    /// Raw draw with mean zero unless `with_mean`.
    fn raw(&mut self, spec: GridSpec, with_mean: bool) -> FourierScalar {
        let cap = self.cap.min(spec.degree()) as i64;
        let mut modes = Vec::new();
        let n = spec.dim();
        let side = (2 * cap + 1) as usize;
        for idx in 0..side.pow(n as u32) {
            let mut r = vec![0i64; n];
            let mut rest = idx;
            for j in (0..n).rev() {
                r[j] = (rest % side) as i64 - cap;
                rest /= side;
            }
            // One representative per ± pair.
            let first = r.iter().find(|&&x| x != 0);
            match first {
                None if !with_mean => continue,
                Some(&x) if x < 0 => continue,
                _ => {}
            }
            let norm2: i64 = r.iter().map(|x| x * x).sum();
            let w = 1.0 / (1.0 + norm2 as f64);
            let z = if norm2 == 0 {
                Complex64::new(self.uniform(-1.0, 1.0) * w, 0.0)
            } else {
                Complex64::new(self.uniform(-1.0, 1.0) * w, self.uniform(-1.0, 1.0) * w)
            };
            modes.push((r, z));
        }
        FourierScalar::from_modes(spec, &modes).expect("modes within degree")
    }

    /// Random scalar with grid sup-norm `amp`.
    pub fn scalar(&mut self, spec: GridSpec, amp: f64) -> FourierScalar {
        let raw = self.raw(spec, true);
        normalize(&raw, raw.sup_norm(), amp)
    }

    /// Random vector field, each component of sup-norm `amp`.
    pub fn vector(&mut self, spec: GridSpec, amp: f64) -> VectorFieldT {
        let comps = (0..spec.dim()).map(|_| self.scalar(spec, amp)).collect();
        VectorFieldT::new(comps).expect("dim components")
    }

    /// Random mean-free vector field whose jacobian entries are bounded by `amp`.
    pub fn vector_smooth(&mut self, spec: GridSpec, amp: f64) -> VectorFieldT {
        let comps: Vec<FourierScalar> = (0..spec.dim()).map(|_| self.raw(spec, false)).collect();
        let v = VectorFieldT::new(comps).expect("dim components");
        let s = jacobian_sup(&v.jacobian());
        if s == 0.0 {
            return v;
        }
        v.scale(amp / s)
    }

    /// Divergence-free field on `N ≥ 2` built from stream functions.
    pub fn divergence_free(&mut self, spec: GridSpec, amp: f64) -> Result<VectorFieldT> {
        let n = spec.dim();
        if n < 2 {
            return Err(Error::InvalidArgument("divergence-free fields need dim ≥ 2".into()));
        }
        let mut v = VectorFieldT::zero(spec);
        for a in 0..n {
            let b = (a + 1) % n;
            let psi = self.raw(spec, false);
            let mut comps = vec![FourierScalar::zeros(spec); n];
            comps[a] = psi.partial(b);
            comps[b] = -&psi.partial(a);
            v = v.add(&VectorFieldT::new(comps)?)?;
            if n == 2 {
                break;
            }
        }
        let s = v.max_abs_coeff();
        Ok(if s == 0.0 { v } else { v.scale(amp / s / (spec.mode_count() as f64).sqrt()) })
    }

    /// Identity-winding diffeomorphism with `sup |f^J| ≈ amp`, by rejection.
    pub fn diffeo(&mut self, spec: GridSpec, amp: f64) -> Result<Diffeo> {
        if amp == 0.0 {
            return Ok(Diffeo::identity(spec));
        }
        for _ in 0..MAX_ATTEMPTS {
            let target = amp * self.uniform(0.5, 1.0);
            let v = self.vector_smooth(spec, target);
            let shift: Vec<FourierScalar> = v
                .components()
                .iter()
                .map(|c| c + &FourierScalar::constant(spec, self.uniform(-0.5, 0.5)))
                .collect();
            if let Ok(d) = Diffeo::from_displacement(shift) {
                return Ok(d);
            }
        }
        Err(Error::GeneratorExhausted {
            attempts: MAX_ATTEMPTS,
            advice: format!("diffeo amplitude {amp} too large; use a smaller amplitude"),
        })
    }

    /// Shear `x ↦ x + a(x_{other}) e_axis`, which preserves volume exactly.
    pub fn shear(&mut self, spec: GridSpec, axis: usize, amp: f64) -> Result<Diffeo> {
        let n = spec.dim();
        if n < 2 || axis >= n {
            return Err(Error::InvalidArgument("shear needs dim ≥ 2 and a valid axis".into()));
        }
        let other = (axis + 1) % n;
        let sub = GridSpec::with_oversample(1, spec.degree(), spec.oversample())?;
        let line = self.raw(sub, false);
        let modes: Vec<(Vec<i64>, Complex64)> = (0..sub.mode_count())
            .map(|i| {
                let mut r = vec![0; n];
                r[other] = sub.mode(i)[0];
                (r, line.coeffs()[i])
            })
            .filter(|(_, z)| *z != Complex64::new(0.0, 0.0))
            .collect();
        let a = FourierScalar::from_modes(spec, &modes)?;
        let s = a.partial(other).sup_norm();
        let a = if s == 0.0 { a } else { a.scale(amp / s) };
        let mut disp = vec![FourierScalar::zeros(spec); n];
        disp[axis] = a;
        Diffeo::from_displacement(disp)
    }

    /// `I + P` with `sup |P| ≈ amp`, by rejection.
    pub fn gauge(&mut self, spec: GridSpec, amp: f64) -> Result<GaugeMap> {
        let n = spec.dim();
        for _ in 0..MAX_ATTEMPTS {
            let entries = (0..n * n)
                .map(|ik| {
                    let p = self.scalar(spec, amp);
                    if ik / n == ik % n {
                        &p + &FourierScalar::constant(spec, 1.0)
                    } else {
                        p
                    }
                })
                .collect();
            if let Ok(g) = GaugeMap::new(MatrixField::from_entries(spec, n, entries)?) {
                return Ok(g);
            }
        }
        Err(Error::GeneratorExhausted {
            attempts: MAX_ATTEMPTS,
            advice: format!("gauge amplitude {amp} too large; use a smaller amplitude"),
        })
    }

    /// Positive loop `exp(u)` with `sup |u| = amp`.
    pub fn loop_pos(&mut self, spec: GridSpec, amp: f64) -> LoopPos {
        LoopPos::positive(self.scalar(spec, amp))
    }
}

fn normalize(a: &FourierScalar, size: f64, amp: f64) -> FourierScalar {
    if size == 0.0 {
        FourierScalar::zeros(a.spec())
    } else {
        a.scale(amp / size)
    }
}

fn jacobian_sup(m: &MatrixField) -> f64 {
    m.entries().iter().map(FourierScalar::sup_norm).fold(0.0, f64::max)
}

/// Hex SHA-256 of serialized inputs.
pub fn digest<T: serde::Serialize>(value: &T) -> String {
    let bytes = serde_json::to_vec(value).expect("serializable input");
    hex::encode(Sha256::digest(&bytes))
}
