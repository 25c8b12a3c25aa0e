use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::spectral::GridSpec;

/// Central tolerance record.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    /// Purely algebraic identities.
    pub algebraic: f64,
    /// Identities passing through composition with a diffeomorphism.
    pub composition: f64,
    /// Agreement with an independent oracle.
    pub oracle: f64,
    pub finite_difference: f64,
    /// Floor for identities that hold exactly up to floating-point roundoff.
    pub roundoff: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            algebraic: 1e-8,
            composition: 1e-7,
            oracle: 1e-10,
            finite_difference: 1e-4,
            roundoff: 1e-12,
        }
    }
}

/// Sizes used by the random generators.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Amplitudes {
    /// Target `sup |f^J|` of generated diffeomorphism displacements.
    pub diffeo: f64,
    /// Target sup-norm of the perturbation in `I + P`.
    pub gauge: f64,
    /// Target sup-norm of `ln f` for loops.
    pub loop_: f64,
    /// Target sup-norm of vector-field jacobians.
    pub field: f64,
    /// Target sup-norm of generic scalar and form coefficients.
    pub scalar: f64,
}

impl Default for Amplitudes {
    fn default() -> Self {
        Amplitudes {
            diffeo: 0.05,
            gauge: 0.3,
            loop_: 0.5,
            field: 0.2,
            scalar: 0.2,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SuiteConfig {
    pub dim: usize,
    pub degree: usize,
    pub oversample: usize,
    pub trials: usize,
    pub seed: u64,
    pub tolerances: Tolerances,
    pub amplitudes: Amplitudes,
    /// Suite names; empty or `["all"]` selects everything.
    pub suites: Vec<String>,
    /// Record per-check wall time (makes reports run-dependent).
    pub timings: bool,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig {
            dim: 2,
            degree: 12,
            oversample: 2,
            trials: 25,
            seed: 0,
            tolerances: Tolerances::default(),
            amplitudes: Amplitudes::default(),
            suites: vec!["all".into()],
            timings: false,
        }
    }
}

impl SuiteConfig {
    pub fn validate(&self) -> Result<()> {
        if self.trials == 0 {
            return Err(Error::InvalidArgument("trials must be at least 1".into()));
        }
        if self.dim < 2 {
            return Err(Error::InvalidArgument(
                "suite dimension must be at least 2 (circle checks run on their own)".into(),
            ));
        }
        if self.degree < 4 {
            return Err(Error::InvalidArgument("degree must be at least 4".into()));
        }
        GridSpec::with_oversample(self.dim, self.degree, self.oversample)?;
        let t = &self.tolerances;
        for (name, v) in [
            ("algebraic", t.algebraic),
            ("composition", t.composition),
            ("oracle", t.oracle),
            ("finite_difference", t.finite_difference),
            ("roundoff", t.roundoff),
        ] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::InvalidArgument(format!("tolerance {name} must be positive")));
            }
        }
        Ok(())
    }

    /// Highest mode drawn by generators: a quarter of the degree.
    pub fn cap(&self) -> usize {
        (self.degree / 4).max(1)
    }

    pub fn spec(&self, dim: usize) -> Result<GridSpec> {
        GridSpec::with_oversample(dim, self.degree, self.oversample)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_trials_rejected() {
        let cfg = SuiteConfig {
            trials: 0,
            ..Default::default()
        };
        assert!(cfg.validate().is_err());
        assert!(SuiteConfig::default().validate().is_ok());
    }
}
