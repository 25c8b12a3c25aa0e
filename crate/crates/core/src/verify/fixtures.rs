//! Golden values produced by independent oracles at elevated resolution.

use std::path::{Path, PathBuf};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::cocycles::virasoro_bott_quadrature;
use crate::diffeo::Diffeo;
use crate::error::Result;
use crate::spectral::{FourierScalar, GridSpec};

pub const VIRASORO_BOTT_FILE: &str = "virasoro_bott.json";
const EMBEDDED_VIRASORO_BOTT: &str = include_str!("../../fixtures/virasoro_bott.json");

/// Quadrature nodes used when producing the fixture.
pub const FIXTURE_POINTS: usize = 1 << 16;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Fixture {
    pub name: String,
    pub f: String,
    pub g: String,
    pub oracle: String,
    pub quadrature_points: usize,
    pub value: f64,
    pub generator: String,
}

/// `F(t) = t + 0.1 sin 2πt`, `G(t) = t + 0.07 cos 2πt` at the given degree.
pub fn virasoro_bott_pair(degree: usize) -> Result<(Diffeo, Diffeo)> {
    let spec = GridSpec::new(1, degree)?;
    let f = FourierScalar::from_modes(spec, &[(vec![1], Complex64::new(0.0, -0.05))])?;
    let g = FourierScalar::from_modes(spec, &[(vec![1], Complex64::new(0.035, 0.0))])?;
    Ok((Diffeo::from_displacement(vec![f])?, Diffeo::from_displacement(vec![g])?))
}

pub fn make_virasoro_bott() -> Result<Fixture> {
    let (f, g) = virasoro_bott_pair(1)?;
    Ok(Fixture {
        name: "virasoro_bott".into(),
        f: "t + 0.1 sin 2πt".into(),
        g: "t + 0.07 cos 2πt".into(),
        oracle: "periodic trapezoid quadrature of ln|F'(G(t))| G''(t)/G'(t) by direct mode summation".into(),
        quadrature_points: FIXTURE_POINTS,
        value: virasoro_bott_quadrature(&f, &g, FIXTURE_POINTS)?,
        generator: format!("{} {}", env!("CARGO_PKG_NAME"), env!("CARGO_PKG_VERSION")),
    })
}

/// Writes every fixture into `dir` and returns the written paths.
pub fn make_fixtures(dir: &Path) -> Result<Vec<PathBuf>> {
    std::fs::create_dir_all(dir)?;
    let path = dir.join(VIRASORO_BOTT_FILE);
    let mut text = serde_json::to_string_pretty(&make_virasoro_bott()?)?;
    text.push('\n');
    std::fs::write(&path, text)?;
    Ok(vec![path])
}

/// The fixture frozen into the build.
pub fn golden_virasoro_bott() -> Result<Fixture> {
    Ok(serde_json::from_str(EMBEDDED_VIRASORO_BOTT)?)
}
