use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use quadtrap::spectral::OffendingMode;
use quadtrap::{CovarianceReport, GaussianExtremalState, LadderSystem, RegimeKind};

/// Output of `analyze`. Complex numbers serialize as `[re, im]` pairs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnalysisReport {
    pub regime: RegimeKind,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub offending_modes: Vec<OffendingMode>,
    #[serde(default)]
    pub omega: Vec<f64>,
    #[serde(default)]
    pub gamma: Vec<i8>,
    #[serde(default)]
    pub g0_prime: Option<f64>,
    /// Ladder coefficient vectors `b_k` over `(X, P)`.
    #[serde(default)]
    pub b: Vec<Vec<Complex64>>,
    #[serde(default)]
    pub a: Vec<Vec<Complex64>>,
    /// Rows of the symmetrized covariance matrix.
    #[serde(default)]
    pub sigma: Vec<Vec<f64>>,
    #[serde(default)]
    pub heisenberg: Vec<f64>,
    #[serde(default)]
    pub rs_margin: Vec<f64>,
    #[serde(rename = "E000", default, skip_serializing_if = "Option::is_none")]
    pub e000: Option<f64>,
}

impl AnalysisReport {
    pub fn not_trap(regime: RegimeKind, offending_modes: Vec<OffendingMode>) -> Self {
        Self {
            regime,
            offending_modes,
            omega: vec![],
            gamma: vec![],
            g0_prime: None,
            b: vec![],
            a: vec![],
            sigma: vec![],
            heisenberg: vec![],
            rs_margin: vec![],
            e000: None,
        }
    }

    pub fn trap(l: &LadderSystem, g: &GaussianExtremalState, cov: &CovarianceReport, e000: Option<f64>) -> Self {
        let rows = |m: &nalgebra::DMatrix<f64>| (0..m.nrows()).map(|i| m.row(i).iter().copied().collect()).collect();
        Self {
            regime: RegimeKind::Trap,
            offending_modes: vec![],
            omega: l.omega.clone(),
            gamma: l.gamma.clone(),
            g0_prime: Some(l.g0_prime),
            b: l.b.iter().map(|v| v.iter().copied().collect()).collect(),
            a: (0..g.n()).map(|i| g.a.row(i).iter().copied().collect()).collect(),
            sigma: rows(&cov.sigma),
            heisenberg: cov.heisenberg.clone(),
            rs_margin: cov.rs_margin.clone(),
            e000,
        }
    }

    pub fn to_json(&self) -> String {
        crate::format::to_json(self)
    }

    pub fn from_json(text: &str) -> serde_json::Result<Self> {
        serde_json::from_str(text)
    }
}
