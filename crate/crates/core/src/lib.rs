//! Spectral laboratory for abelian extensions of diffeomorphism groups of the
//! torus `Tᴺ`.
//!
//! Functions are truncated Fourier series ([`FourierScalar`]), forms live in
//! [`geometry`], and diffeomorphisms `F(x) = A·x + f(x)` in [`diffeo`]. The
//! [`cocycles`] module assembles group cocycles on `Diff(Tᴺ)` by pulling back
//! central cocycles along crossed homomorphisms, alongside the Lie-algebra
//! cocycles `τ₁`, `τ₂`. [`verify`] runs seeded suites over all of it.

pub mod cocycles;
pub mod diffeo;
pub mod error;
pub mod gauge;
pub mod geometry;
pub mod heisenberg;
pub mod spectral;
pub mod verify;

pub use cocycles::{CocycleValue, ExtensionElement, ExtensionGroup, GroupCocycle};
pub use diffeo::{act_on_matrix, act_on_scalar, pullback_form, Diffeo, VectorFieldT};
pub use error::{Error, Result};
pub use gauge::{CosSin, GaugeMap, LoopPos};
pub use geometry::{FormMatrix, KClass, KForm, MatrixField};
pub use heisenberg::{HeisenbergElement, LoopExtension};
pub use spectral::{FourierScalar, GridSpec, UnaryFn};
pub use verify::{run_suite, Report, SuiteConfig};
