//! Strict run configuration. Unknown keys are rejected and every field is
//! range-checked before use.

use serde::{Deserialize, Serialize};

use crate::LabError;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Config {
    /// Grid cells per unit length.
    pub resolution: f64,
    /// Polynomial degree of the Bergman basis.
    pub degree: usize,
    /// Ratios for the capacity-radius rows.
    pub alphas: Vec<f64>,
    /// Exponents for the L^p shape audit.
    pub p_ladder: Vec<f64>,
    /// Seed for sample points and random pairs.
    pub seed: u64,
    /// Patches for equilibrium problems (capacities, Robin constants).
    pub samples: usize,
    /// Sample points per domain for the Bergman–Robin rows.
    pub blocki_points: usize,
    /// Random pairs for the comparison-functional rows.
    pub pairs: usize,
    /// Multiples of the inradius used as Lieb radii.
    pub lieb_factors: Vec<f64>,
    pub ms: MsConfig,
    pub tolerances: Tolerances,
    pub outputs: Outputs,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct MsConfig {
    pub alpha: f64,
    /// `r1 = e^{1/2}(1+2ε)αr`, `r2 = e^{1/2}(1+3ε)αr`.
    pub eps: f64,
    /// Outer radius as a multiple of `r`.
    pub n_outer: f64,
    /// `r` as a fraction of the capacity radius.
    pub radius_fraction: f64,
}

/// Relative slack per row family.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Tolerances {
    pub blocki: f64,
    pub kappa_capacity_radius: f64,
    pub kappa_over_lambda: f64,
    pub lieb: f64,
    pub lambda_capacity_radius: f64,
    pub weighted_dbar: f64,
    pub lp_dbar_shape: f64,
    pub collar_decay: f64,
    pub comparison_monotone: f64,
    pub excision: f64,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Outputs {
    pub report: Option<String>,
    pub figs: Option<String>,
}

impl Default for Config {
    fn default() -> Self {
        Config {
            resolution: 96.0,
            degree: 40,
            alphas: vec![0.1, 0.3, 0.5],
            p_ladder: vec![1.5, 1.7, 1.9, 1.95, 1.99],
            seed: 20240601,
            samples: 256,
            blocki_points: 10,
            pairs: 20,
            lieb_factors: vec![0.25, 0.5, 1.0, 2.0],
            ms: MsConfig::default(),
            tolerances: Tolerances::default(),
            outputs: Outputs::default(),
        }
    }
}

impl Default for MsConfig {
    fn default() -> Self {
        MsConfig { alpha: 0.3, eps: 0.25, n_outer: 16.0, radius_fraction: 0.95 }
    }
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            blocki: 0.05,
            kappa_capacity_radius: 0.05,
            kappa_over_lambda: 0.0,
            lieb: 0.02,
            lambda_capacity_radius: 1e-6,
            weighted_dbar: 0.05,
            lp_dbar_shape: 0.0,
            collar_decay: 0.0,
            comparison_monotone: 0.02,
            excision: 0.1,
        }
    }
}

fn check(ok: bool, what: &str) -> Result<(), LabError> {
    if ok {
        Ok(())
    } else {
        Err(LabError::Usage(format!("config: {what}")))
    }
}

impl Config {
    pub fn parse(text: &str) -> Result<Config, LabError> {
        let c: Config = serde_json::from_str(text).map_err(|e| LabError::Usage(format!("config: {e}")))?;
        c.validate()?;
        Ok(c)
    }

    pub fn validate(&self) -> Result<(), LabError> {
        check((8.0..=1024.0).contains(&self.resolution), "resolution must lie in [8, 1024]")?;
        check((1..=200).contains(&self.degree), "degree must lie in [1, 200]")?;
        check(!self.alphas.is_empty() && self.alphas.iter().all(|a| *a > 0.0 && *a < 1.0), "alphas must lie in (0, 1)")?;
        check(
            self.p_ladder.len() >= 2 && self.p_ladder.iter().all(|p| *p > 1.0 && *p < 2.0),
            "p_ladder needs at least two values in (1, 2)",
        )?;
        check((16..=8192).contains(&self.samples), "samples must lie in [16, 8192]")?;
        check((1..=1000).contains(&self.blocki_points), "blocki_points must lie in [1, 1000]")?;
        check((1..=1000).contains(&self.pairs), "pairs must lie in [1, 1000]")?;
        check(self.lieb_factors.iter().all(|f| *f > 0.0 && f.is_finite()), "lieb_factors must be positive")?;
        let m = &self.ms;
        check(m.alpha > 0.0 && m.alpha < 1.0, "ms.alpha must lie in (0, 1)")?;
        check(m.eps > 0.0 && m.eps < 1.0, "ms.eps must lie in (0, 1)")?;
        check(m.n_outer > 2.0 && m.n_outer.is_finite(), "ms.n_outer must exceed 2")?;
        check(m.radius_fraction > 0.0 && m.radius_fraction <= 1.0, "ms.radius_fraction must lie in (0, 1]")?;
        let t = &self.tolerances;
        let all = [
            t.blocki,
            t.kappa_capacity_radius,
            t.kappa_over_lambda,
            t.lieb,
            t.lambda_capacity_radius,
            t.weighted_dbar,
            t.lp_dbar_shape,
            t.collar_decay,
            t.comparison_monotone,
            t.excision,
        ];
        check(all.iter().all(|v| *v >= 0.0 && *v < 1.0), "tolerances must lie in [0, 1)")
    }
}
