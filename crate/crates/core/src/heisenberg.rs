//! The algebraic Heisenberg group over `[H_n, H_m] = n δ_{n,−m} c` and the
//! isomorphism from the analytic loop-group extension.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use num_traits::{FromPrimitive, Num};
use serde::{Deserialize, Serialize};

use crate::error::{ensure_same_spec, Result};
use crate::gauge::{heisenberg_cocycle_circle, CosSin, LoopPos};

/// `exp(αc)·exp(Σ a_j H_j)` with finitely many nonzero `a_j`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HeisenbergElement<T> {
    pub central: T,
    pub zero_mode: T,
    /// Keys `j ≠ 0`.
    pub modes: BTreeMap<i64, T>,
}

pub trait Scalar: Num + Clone + FromPrimitive {}
impl<T: Num + Clone + FromPrimitive> Scalar for T {}

fn int<T: Scalar>(j: i64) -> T {
    T::from_i64(j).expect("integer fits scalar type")
}

fn get<T: Scalar>(m: &BTreeMap<i64, T>, j: i64) -> T {
    m.get(&j).cloned().unwrap_or_else(T::zero)
}

impl<T: Scalar> HeisenbergElement<T> {
    pub fn identity() -> Self {
        HeisenbergElement {
            central: T::zero(),
            zero_mode: T::zero(),
            modes: BTreeMap::new(),
        }
    }

    pub fn new(central: T, zero_mode: T, modes: impl IntoIterator<Item = (i64, T)>) -> Self {
        let mut out = HeisenbergElement {
            central,
            zero_mode,
            modes: BTreeMap::new(),
        };
        for (j, a) in modes {
            assert!(j != 0, "mode index 0 is the zero mode");
            let acc = get(&out.modes, j) + a;
            out.modes.insert(j, acc);
        }
        out.prune();
        out
    }

    fn prune(&mut self) {
        self.modes.retain(|_, a| !a.is_zero());
    }

    pub fn mode(&self, j: i64) -> T {
        get(&self.modes, j)
    }

    pub fn h_multiply(&self, other: &Self) -> Self {
        let mut modes = self.modes.clone();
        for (&j, b) in &other.modes {
            let acc = get(&modes, j) + b.clone();
            modes.insert(j, acc);
        }
        let mut out = HeisenbergElement {
            central: self.central.clone() + other.central.clone() + kappa(self, other),
            zero_mode: self.zero_mode.clone() + other.zero_mode.clone(),
            modes,
        };
        out.prune();
        out
    }

    /// `(−α + Σ_{j>0} j a_j a_{−j}, −a)`.
    pub fn inverse(&self) -> Self {
        let correction = positive_pairing(&self.modes, &self.modes);
        HeisenbergElement {
            central: correction - self.central.clone(),
            zero_mode: T::zero() - self.zero_mode.clone(),
            modes: self
                .modes
                .iter()
                .map(|(&j, a)| (j, T::zero() - a.clone()))
                .collect(),
        }
    }
}

impl HeisenbergElement<f64> {
    /// Largest componentwise difference.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        let keys: std::collections::BTreeSet<i64> =
            self.modes.keys().chain(other.modes.keys()).copied().collect();
        keys.iter()
            .map(|&j| (self.mode(j) - other.mode(j)).abs())
            .fold(
                (self.central - other.central)
                    .abs()
                    .max((self.zero_mode - other.zero_mode).abs()),
                f64::max,
            )
    }
}

/// `Σ_{j>0} j a_j b_{−j}`.
fn positive_pairing<T: Scalar>(a: &BTreeMap<i64, T>, b: &BTreeMap<i64, T>) -> T {
    a.range(1..).fold(T::zero(), |acc, (&j, aj)| {
        acc + int::<T>(j) * aj.clone() * get(b, -j)
    })
}

/// Central cocycle read off the group law: `κ(A,B) = Σ_{j>0} j a_j b_{−j}`.
pub fn kappa<T: Scalar>(a: &HeisenbergElement<T>, b: &HeisenbergElement<T>) -> T {
    positive_pairing(&a.modes, &b.modes)
}

/// `π Σ_{j∈ℤ} j a_j b_{−j}` over cos/sin coefficients.
pub fn fourier_cocycle(a: &BTreeMap<i64, f64>, b: &BTreeMap<i64, f64>) -> f64 {
    PI * a
        .iter()
        .map(|(&j, aj)| j as f64 * aj * b.get(&-j).copied().unwrap_or(0.0))
        .sum::<f64>()
}

/// Element `(f, α)` of the analytic extension with law
/// `(f,α)(g,β) = (fg, α + β + C(f,g))`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LoopExtension {
    pub loop_: LoopPos,
    pub central: f64,
}

impl LoopExtension {
    pub fn new(loop_: LoopPos, central: f64) -> Self {
        LoopExtension { loop_, central }
    }

    pub fn multiply(&self, other: &LoopExtension) -> Result<LoopExtension> {
        ensure_same_spec(self.loop_.spec(), other.loop_.spec())?;
        let c = heisenberg_cocycle_circle(&self.loop_, &other.loop_)?;
        Ok(LoopExtension {
            loop_: self.loop_.multiply(&other.loop_)?,
            central: self.central + other.central + c,
        })
    }
}

/// `φ(exp(x), α)`: central `α/2π + ½ Σ_{j>0} j a_j a_{−j}`, modes from the
/// cos/sin expansion of `x = ln|f|`.
pub fn phi_iso(f: &LoopPos, alpha: f64) -> Result<HeisenbergElement<f64>> {
    let cs = CosSin::from_scalar(f.logval())?;
    let central = alpha / (2.0 * PI) + 0.5 * positive_pairing(&cs.modes, &cs.modes);
    Ok(HeisenbergElement::new(central, cs.a0, cs.modes))
}

pub fn phi_ext(x: &LoopExtension) -> Result<HeisenbergElement<f64>> {
    phi_iso(&x.loop_, x.central)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::GridSpec;
    use num_rational::Ratio;

    type Q = Ratio<i64>;

    fn q(n: i64, d: i64) -> Q {
        Ratio::new(n, d)
    }

    #[test]
    fn law_examples() {
        let a = HeisenbergElement::new(0.0, 0.0, [(1, 1.0)]);
        let b = HeisenbergElement::new(0.0, 0.0, [(-1, 1.0)]);
        assert_eq!(a.h_multiply(&b).central, 1.0);
        assert_eq!(b.h_multiply(&a).central, 0.0);
        let id = HeisenbergElement::identity();
        assert_eq!(a.h_multiply(&id), a);
    }

    #[test]
    fn exact_group_axioms() {
        let x = HeisenbergElement::new(q(1, 3), q(2, 1), [(1, q(1, 2)), (-1, q(-3, 4)), (2, q(5, 7))]);
        let y = HeisenbergElement::new(q(-2, 5), q(0, 1), [(-2, q(1, 9)), (1, q(4, 1)), (-1, q(1, 1))]);
        let z = HeisenbergElement::new(q(7, 2), q(-1, 3), [(3, q(2, 3)), (-3, q(1, 5)), (-1, q(-1, 2))]);
        assert_eq!(
            x.h_multiply(&y).h_multiply(&z),
            x.h_multiply(&y.h_multiply(&z))
        );
        assert_eq!(x.h_multiply(&x.inverse()), HeisenbergElement::identity());
        assert_eq!(x.inverse().h_multiply(&x), HeisenbergElement::identity());
        let lhs = kappa(&x, &y) + kappa(&x.h_multiply(&y), &z);
        let rhs = kappa(&x, &y.h_multiply(&z)) + kappa(&y, &z);
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn fourier_cocycle_examples() {
        let a = BTreeMap::from([(1, 0.3)]);
        let b = BTreeMap::from([(-1, 0.5)]);
        assert!((fourier_cocycle(&a, &b) - 0.15 * PI).abs() < 1e-15);
        let s = BTreeMap::from([(1, 1.0), (-1, 1.0)]);
        assert_eq!(fourier_cocycle(&s, &s), 0.0);
    }

    #[test]
    fn phi_examples() {
        let spec = GridSpec::new(1, 4).unwrap();
        let mut cs = CosSin::default();
        cs.modes.insert(1, 0.4);
        let f = LoopPos::positive(cs.to_scalar(spec).unwrap());
        let e = phi_iso(&f, 0.0).unwrap();
        assert_eq!(e.central, 0.0);
        assert!((e.mode(1) - 0.4).abs() < 1e-15);
        let one = LoopPos::identity(spec);
        let e = phi_iso(&one, 2.0 * PI).unwrap();
        assert!((e.central - 1.0).abs() < 1e-15);
        assert!(e.modes.is_empty());
    }

    #[test]
    fn phi_homomorphism() {
        let spec = GridSpec::new(1, 6).unwrap();
        let loop_of = |a0: f64, m: &[(i64, f64)]| {
            let cs = CosSin {
                a0,
                modes: m.iter().copied().collect(),
            };
            LoopPos::positive(cs.to_scalar(spec).unwrap())
        };
        let x = LoopExtension::new(loop_of(0.2, &[(1, 0.3), (-1, -0.2), (2, 0.1)]), 0.7);
        let y = LoopExtension::new(loop_of(-0.1, &[(-1, 0.5), (2, -0.4), (-2, 0.25)]), -1.1);
        let lhs = phi_ext(&x.multiply(&y).unwrap()).unwrap();
        let rhs = phi_ext(&x).unwrap().h_multiply(&phi_ext(&y).unwrap());
        assert!(lhs.max_abs_diff(&rhs) < 1e-12, "{:e}", lhs.max_abs_diff(&rhs));
    }
}
