//! Moments, covariance matrix, uncertainty products, Hamiltonian statistics,
//! the reproducing kernel and time evolution of coherent states.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gaussian::{CoherentState, GaussianExtremalState};
use crate::linalg::{bilinear, complexify, CVector, I};
use crate::model::symplectic_form;
use crate::spectral::LadderSystem;

pub const MOMENT_RESIDUAL_TOL: f64 = 1e-8;

#[derive(Debug, Clone, PartialEq)]
pub struct CovarianceReport {
    /// Symmetrized second central moments over `η = (X, P)`.
    pub sigma: DMatrix<f64>,
    /// `ΔX_i ΔP_i`.
    pub heisenberg: Vec<f64>,
    /// `σ_ii σ_{n+i,n+i} − σ_{i,n+i}² − ¼`.
    pub rs_margin: Vec<f64>,
}

impl CovarianceReport {
    pub fn from_sigma(sigma: DMatrix<f64>) -> Self {
        let n = sigma.nrows() / 2;
        let heisenberg = (0..n).map(|i| (sigma[(i, i)] * sigma[(n + i, n + i)]).sqrt()).collect();
        let rs_margin = (0..n)
            .map(|i| sigma[(i, i)] * sigma[(n + i, n + i)] - sigma[(i, n + i)].powi(2) - 0.25)
            .collect();
        Self {
            sigma,
            heisenberg,
            rs_margin,
        }
    }

    pub fn n(&self) -> usize {
        self.heisenberg.len()
    }
}

/// `(⟨X⟩_z, ⟨P⟩_z) = (Γ, Σ)`; the extremal state has vanishing first moments.
pub fn first_moments(s: &CoherentState) -> (Vec<f64>, Vec<f64>) {
    (s.position_shift.clone(), s.momentum_shift.clone())
}

/// Index of the unknown `σ_ac` (`a ≤ c`) in the packed upper triangle.
fn packed_index(a: usize, c: usize, dim: usize) -> usize {
    let (a, c) = if a <= c { (a, c) } else { (c, a) };
    a * dim - a * (a + 1) / 2 + c
}

/// One equation `⟨(l·η)(r·η)⟩₀ = 0` as coefficients over the packed `σ` plus the
/// constant `(i/2) lᵀ J r` carried by the commutator half.
fn moment_equation(l: &CVector, r: &CVector, j: &DMatrix<Complex64>) -> (Vec<Complex64>, Complex64) {
    let dim = l.len();
    let mut row = vec![Complex64::new(0.0, 0.0); dim * (dim + 1) / 2];
    for a in 0..dim {
        for c in 0..dim {
            row[packed_index(a, c, dim)] += l[a] * r[c];
        }
    }
    (row, 0.5 * I * bilinear(l, j, r))
}

/// Covariance of the extremal state (and of every coherent state) from the
/// vanishing of `⟨B_iB_j⟩₀`, `⟨B_i†B_j†⟩₀` and `⟨B_i†B_j⟩₀`.
pub fn covariance(l: &LadderSystem) -> Result<CovarianceReport> {
    let n = l.n;
    let dim = 2 * n;
    let unknowns = dim * (dim + 1) / 2;
    let j = complexify(symplectic_form(n).matrix());

    // Complex equations; ⟨B_i†B_j†⟩ is the conjugate of ⟨B_jB_i⟩ and adds nothing new.
    let mut complex_rows = Vec::new();
    for i in 0..n {
        for k in i..n {
            complex_rows.push((moment_equation(&l.b[i], &l.b[k], &j), true));
        }
    }
    for i in 0..n {
        for k in i..n {
            // ⟨B_i†B_i⟩ is real, so only its real part is an equation.
            complex_rows.push((moment_equation(&l.b_dag[i], &l.b[k], &j), i != k));
        }
    }

    let mut rows: Vec<Vec<f64>> = Vec::with_capacity(unknowns);
    let mut rhs: Vec<f64> = Vec::with_capacity(unknowns);
    for ((coeffs, constant), with_imag) in &complex_rows {
        rows.push(coeffs.iter().map(|c| c.re).collect());
        rhs.push(-constant.re);
        if *with_imag {
            rows.push(coeffs.iter().map(|c| c.im).collect());
            rhs.push(-constant.im);
        }
    }
    debug_assert_eq!(rows.len(), unknowns);
    let m = DMatrix::from_fn(unknowns, unknowns, |r, c| rows[r][c]);
    let rhs = DVector::from_vec(rhs);
    let solution = m.clone().lu().solve(&rhs).ok_or(Error::SingularMomentSystem {
        residual: f64::INFINITY,
    })?;

    let mut sigma = DMatrix::zeros(dim, dim);
    for a in 0..dim {
        for c in a..dim {
            let v = solution[packed_index(a, c, dim)];
            sigma[(a, c)] = v;
            sigma[(c, a)] = v;
        }
    }

    // Check every equation, including the ones not used to build the square system.
    let sc = complexify(&sigma);
    let second = &sc + &j * (0.5 * I);
    let mut residual = 0.0_f64;
    for i in 0..n {
        for k in 0..n {
            residual = residual.max(bilinear(&l.b[i], &second, &l.b[k]).norm());
            residual = residual.max(bilinear(&l.b_dag[i], &second, &l.b[k]).norm());
            residual = residual.max(bilinear(&l.b_dag[i], &second, &l.b_dag[k]).norm());
        }
    }
    let diag_ok = (0..dim).all(|a| sigma[(a, a)] > 0.0);
    if !residual.is_finite() || residual > MOMENT_RESIDUAL_TOL || !diag_ok {
        return Err(Error::SingularMomentSystem { residual });
    }
    Ok(CovarianceReport::from_sigma(sigma))
}

/// Pure-Gaussian second moments of `c·exp(−½ xᵀ(A + iC)x)`:
/// `σ_XX = ½A⁻¹`, `σ_XP = −½A⁻¹C`, `σ_PP = ½(A + C A⁻¹ C)`.
pub fn gaussian_covariance(g: &GaussianExtremalState) -> DMatrix<f64> {
    let n = g.n();
    let re = g.re_a();
    let im = g.im_a();
    let re_inv = re.clone().try_inverse().expect("Re(a) is positive definite");
    let xx = &re_inv * 0.5;
    let xp = &re_inv * &im * -0.5;
    let pp = (&re + &im * &re_inv * &im) * 0.5;
    let mut sigma = DMatrix::zeros(2 * n, 2 * n);
    sigma.view_mut((0, 0), (n, n)).copy_from(&xx);
    sigma.view_mut((0, n), (n, n)).copy_from(&xp);
    sigma.view_mut((n, 0), (n, n)).copy_from(&xp.transpose());
    sigma.view_mut((n, n), (n, n)).copy_from(&pp);
    (&sigma + sigma.transpose()) * 0.5
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HamiltonianStats {
    pub mean: f64,
    pub variance: f64,
}

pub fn hamiltonian_stats(z: &[Complex64], l: &LadderSystem) -> HamiltonianStats {
    let mean = (0..l.n).map(|k| mode_action(z, l, k)).sum::<f64>() + l.g0_prime;
    let variance = (0..l.n).map(|k| l.omega[k].powi(2) * z[k].norm_sqr()).sum();
    HamiltonianStats { mean, variance }
}

/// `⟨z| γ_k ω_k N_k |z⟩ = γ_k ω_k |z_k|²`.
pub fn mode_action(z: &[Complex64], l: &LadderSystem, k: usize) -> f64 {
    l.gamma_f64(k) * l.omega[k] * z[k].norm_sqr()
}

/// `z_k(t) = e^{−iγ_kω_k t} z_k`, together with the global phase `−g₀′ t`.
pub fn evolve(z: &[Complex64], t: f64, l: &LadderSystem) -> (Vec<Complex64>, f64) {
    let zt = z
        .iter()
        .enumerate()
        .map(|(k, zk)| zk * Complex64::from_polar(1.0, -l.gamma_f64(k) * l.omega[k] * t))
        .collect();
    (zt, -l.g0_prime * t)
}

/// `⟨z|z′⟩ = exp[−½ Σ (|z_j|² − 2 z_j* z′_j + |z′_j|²)]`.
pub fn kernel(z: &[Complex64], z_prime: &[Complex64]) -> Complex64 {
    let s: Complex64 = z
        .iter()
        .zip(z_prime)
        .map(|(a, b)| a.norm_sqr() - 2.0 * a.conj() * b + b.norm_sqr())
        .sum();
    (-0.5 * s).exp()
}

/// `E = Σ γ_k ω_k n_k + g₀′`.
pub fn fock_energy(nvec: &[u32], l: &LadderSystem) -> f64 {
    nvec.iter()
        .enumerate()
        .map(|(k, &nk)| l.gamma_f64(k) * l.omega[k] * f64::from(nk))
        .sum::<f64>()
        + l.g0_prime
}
