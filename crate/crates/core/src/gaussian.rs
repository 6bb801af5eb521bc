//! Extremal-state Gaussian `φ₀(x) = c·exp(−½ xᵀ a x)` and coherent-state wave
//! functions `φ_z(x) = e^{−iΓ·Σ/2} e^{iΣ·x} φ₀(x − Γ)`.

use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{condition_number, max_abs_c, CMatrix, CVector, I};
use crate::spectral::LadderSystem;

pub const ALPHA_CONDITION_LIMIT: f64 = 1e10;
pub const EXTREMAL_ASYMMETRY_TOL: f64 = 1e-8;

/// `B_j = i α_j·P + β_j·X`.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearFormDecomposition {
    pub alpha: Vec<CVector>,
    pub beta: Vec<CVector>,
}

impl LinearFormDecomposition {
    pub fn n(&self) -> usize {
        self.alpha.len()
    }

    /// `b_j = (β_j, i α_j)`.
    pub fn reassemble(&self) -> Vec<CVector> {
        self.alpha
            .iter()
            .zip(&self.beta)
            .map(|(alpha, beta)| {
                let n = alpha.len();
                CVector::from_fn(2 * n, |i, _| if i < n { beta[i] } else { I * alpha[i - n] })
            })
            .collect()
    }
}

pub fn decompose_linear_forms(l: &LadderSystem) -> LinearFormDecomposition {
    let n = l.n;
    let beta = l.b.iter().map(|b| b.rows(0, n).into_owned()).collect();
    let alpha = l.b.iter().map(|b| b.rows(n, n).map(|c| -I * c)).collect();
    LinearFormDecomposition { alpha, beta }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GaussianExtremalState {
    pub a: CMatrix,
    pub c_abs: f64,
}

impl GaussianExtremalState {
    pub fn n(&self) -> usize {
        self.a.nrows()
    }

    pub fn re_a(&self) -> DMatrix<f64> {
        self.a.map(|c| c.re)
    }

    pub fn im_a(&self) -> DMatrix<f64> {
        self.a.map(|c| c.im)
    }

    /// Exponent `−½ xᵀ a x`.
    fn exponent(&self, x: &[f64]) -> Complex64 {
        let n = self.n();
        let mut acc = Complex64::new(0.0, 0.0);
        for i in 0..n {
            for j in 0..n {
                acc += self.a[(i, j)] * (x[i] * x[j]);
            }
        }
        -0.5 * acc
    }
}

pub fn extremal_matrix(d: &LinearFormDecomposition) -> Result<GaussianExtremalState> {
    let n = d.n();
    let alpha = CMatrix::from_columns(&d.alpha);
    let beta = CMatrix::from_columns(&d.beta);
    let condition = condition_number(&alpha);
    if !condition.is_finite() || condition >= ALPHA_CONDITION_LIMIT {
        return Err(Error::SingularAlphaMatrix { condition });
    }
    let inv = alpha.try_inverse().ok_or(Error::SingularAlphaMatrix { condition })?;
    let raw = beta * inv;
    let asymmetry = max_abs_c(&(&raw - raw.transpose())) / max_abs_c(&raw).max(1.0);
    if asymmetry > EXTREMAL_ASYMMETRY_TOL {
        return Err(Error::AsymmetricSolution { asymmetry });
    }
    let a = (&raw + raw.transpose()) * Complex64::from(0.5);

    let re = a.map(|c| c.re);
    let min_eigenvalue = re.clone().symmetric_eigenvalues().min();
    if min_eigenvalue <= 0.0 {
        return Err(Error::NotNormalizable { min_eigenvalue });
    }
    let c_abs = re.determinant().powf(0.25) * PI.powf(-(n as f64) / 4.0);
    Ok(GaussianExtremalState { a, c_abs })
}

/// `β_j − a α_j` for each mode; the coefficient of `x` in `B_j φ₀ / φ₀`.
pub fn annihilation_residuals(g: &GaussianExtremalState, d: &LinearFormDecomposition) -> Vec<CVector> {
    d.alpha
        .iter()
        .zip(&d.beta)
        .map(|(alpha, beta)| beta - &g.a * alpha)
        .collect()
}

pub fn extremal_wavefunction(g: &GaussianExtremalState, x: &[f64]) -> Complex64 {
    g.c_abs * g.exponent(x).exp()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoherentState {
    pub z: Vec<Complex64>,
    /// Γ = ⟨X⟩_z.
    pub position_shift: Vec<f64>,
    /// Σ = ⟨P⟩_z.
    pub momentum_shift: Vec<f64>,
}

/// `Γ = 2 Re Σ_k z_k* α_k`, `Σ = −2 Im Σ_k z_k* β_k`.
pub fn displacement_vectors(z: &[Complex64], d: &LinearFormDecomposition) -> CoherentState {
    let n = d.n();
    let mut za = CVector::zeros(n);
    let mut zb = CVector::zeros(n);
    for (k, zk) in z.iter().enumerate() {
        za += &d.alpha[k] * zk.conj();
        zb += &d.beta[k] * zk.conj();
    }
    CoherentState {
        z: z.to_vec(),
        position_shift: za.iter().map(|c| 2.0 * c.re).collect(),
        momentum_shift: zb.iter().map(|c| -2.0 * c.im).collect(),
    }
}

pub fn coherent_wavefunction(g: &GaussianExtremalState, s: &CoherentState, x: &[f64]) -> Complex64 {
    let gamma = &s.position_shift;
    let sigma = &s.momentum_shift;
    let shifted: Vec<f64> = x.iter().zip(gamma).map(|(xi, gi)| xi - gi).collect();
    let gs: f64 = gamma.iter().zip(sigma).map(|(a, b)| a * b).sum();
    let sx: f64 = sigma.iter().zip(x).map(|(a, b)| a * b).sum();
    Complex64::from_polar(1.0, sx - 0.5 * gs) * extremal_wavefunction(g, &shifted)
}

/// Same amplitude written as `e^{−½(Γᵀa + iΣ)·Γ} e^{(Γᵀa + iΣ)·x} φ₀(x)`.
pub fn coherent_wavefunction_expanded(g: &GaussianExtremalState, s: &CoherentState, x: &[f64]) -> Complex64 {
    let n = g.n();
    let gamma = DVector::from_iterator(n, s.position_shift.iter().map(|&v| Complex64::from(v)));
    let row = g.a.transpose() * &gamma + DVector::from_iterator(n, s.momentum_shift.iter().map(|&v| I * v));
    let dot_gamma: Complex64 = row.iter().zip(gamma.iter()).map(|(r, g)| r * g).sum();
    let dot_x: Complex64 = row.iter().zip(x).map(|(r, xi)| r * *xi).sum();
    (dot_x - 0.5 * dot_gamma).exp() * extremal_wavefunction(g, x)
}

/// Full chain from a trap ladder to the extremal Gaussian.
pub fn extremal_state(l: &LadderSystem) -> Result<(LinearFormDecomposition, GaussianExtremalState)> {
    let d = decompose_linear_forms(l);
    let g = extremal_matrix(&d)?;
    Ok((d, g))
}
