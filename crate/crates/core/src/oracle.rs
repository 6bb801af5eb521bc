//! Brute-force grid oracle: rectangular-grid wave functions, central-difference
//! derivatives (fourth order unless the grid asks for more), quadrature moments
//! and Fock states built by repeated application of creation operators.
//!
//! Nothing here consults the closed-form covariance or moment formulas; the
//! only inputs are sampled amplitudes and the ladder coefficients.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::gaussian::{GaussianExtremalState, LinearFormDecomposition};
use crate::linalg::{CVector, I};
use crate::model::QuadraticHamiltonian;

pub const MIN_AXIS_POINTS: usize = 32;
/// Largest relative derivative error tolerated on the grid's reference Gaussian.
pub const RESOLUTION_TOL: f64 = 1e-4;
/// Upper bound on the total excitation of oracle Fock states.
pub const MAX_FOCK_EXCITATION: u32 = 4;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Axis {
    pub min: f64,
    pub max: f64,
    pub count: usize,
}

impl Axis {
    pub fn spacing(&self) -> f64 {
        (self.max - self.min) / (self.count - 1) as f64
    }

    pub fn point(&self, i: usize) -> f64 {
        self.min + self.spacing() * i as f64
    }
}

/// Central-difference stencil for first derivatives.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Stencil {
    #[default]
    Fourth,
    Sixth,
    Eighth,
}

impl Stencil {
    /// Weights `w_k` of `f′(x) ≈ Σ_k w_k (f(x + kh) − f(x − kh)) / h`.
    pub fn weights(self) -> &'static [f64] {
        match self {
            Stencil::Fourth => &[2.0 / 3.0, -1.0 / 12.0],
            Stencil::Sixth => &[3.0 / 4.0, -3.0 / 20.0, 1.0 / 60.0],
            Stencil::Eighth => &[4.0 / 5.0, -1.0 / 5.0, 4.0 / 105.0, -1.0 / 280.0],
        }
    }

    /// Number of boundary layers without a full stencil.
    pub fn reach(self) -> usize {
        self.weights().len()
    }
}

/// Rectangular grid; samples are stored row-major with the last axis fastest.
#[derive(Debug, Clone, PartialEq)]
pub struct Grid {
    axes: Vec<Axis>,
    stencil: Stencil,
}

pub type Field = Vec<Complex64>;

impl Grid {
    pub fn new(axes: Vec<Axis>) -> Result<Self> {
        if axes.is_empty() {
            return Err(Error::RangeError("grid needs at least one axis".into()));
        }
        for (k, a) in axes.iter().enumerate() {
            if a.count < MIN_AXIS_POINTS {
                return Err(Error::RangeError(format!(
                    "axis {k} has {} points; at least {MIN_AXIS_POINTS} required",
                    a.count
                )));
            }
            if !(a.min.is_finite() && a.max.is_finite() && a.max > a.min) {
                return Err(Error::RangeError(format!("axis {k} has an empty or invalid extent")));
            }
        }
        Ok(Self {
            axes,
            stencil: Stencil::default(),
        })
    }

    pub fn with_stencil(mut self, stencil: Stencil) -> Self {
        self.stencil = stencil;
        self
    }

    pub fn stencil(&self) -> Stencil {
        self.stencil
    }

    /// Symmetric grid sized for a Gaussian `|φ₀(x − Γ)|²`: half-width
    /// `6/√(λ_min(Re a)) + |Γ_i|` on every axis.
    pub fn for_state(g: &GaussianExtremalState, shift: &[f64], count: usize) -> Result<Self> {
        let lmin = g.re_a().symmetric_eigenvalues().min();
        let base = 6.0 / lmin.sqrt();
        let axes = (0..g.n())
            .map(|i| {
                let half = base + shift.get(i).map_or(0.0, |s| s.abs());
                Axis {
                    min: -half,
                    max: half,
                    count,
                }
            })
            .collect();
        Grid::new(axes)
    }

    /// Like [`Grid::for_state`] but each axis uses its own marginal width:
    /// half-width `6·√((Re a)⁻¹)_ii + |Γ_i|`. Identical for isotropic `Re a`,
    /// never wider, and much finer on anisotropic states.
    pub fn for_state_per_axis(g: &GaussianExtremalState, shift: &[f64], count: usize) -> Result<Self> {
        let inv = g
            .re_a()
            .try_inverse()
            .ok_or_else(|| Error::NumericalBreakdown("Re(a) is singular".into()))?;
        let axes = (0..g.n())
            .map(|i| {
                let half = 6.0 * inv[(i, i)].sqrt() + shift.get(i).map_or(0.0, |s| s.abs());
                Axis {
                    min: -half,
                    max: half,
                    count,
                }
            })
            .collect();
        Grid::new(axes)
    }

    pub fn dim(&self) -> usize {
        self.axes.len()
    }

    pub fn axes(&self) -> &[Axis] {
        &self.axes
    }

    pub fn len(&self) -> usize {
        self.axes.iter().map(|a| a.count).product()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Volume element `∏ h_i`.
    pub fn cell(&self) -> f64 {
        self.axes.iter().map(Axis::spacing).product()
    }

    fn stride(&self, axis: usize) -> usize {
        self.axes[axis + 1..].iter().map(|a| a.count).product()
    }

    fn multi_index(&self, mut flat: usize) -> Vec<usize> {
        let mut idx = vec![0; self.dim()];
        for k in (0..self.dim()).rev() {
            idx[k] = flat % self.axes[k].count;
            flat /= self.axes[k].count;
        }
        idx
    }

    pub fn point(&self, flat: usize) -> Vec<f64> {
        self.multi_index(flat)
            .iter()
            .zip(&self.axes)
            .map(|(&i, a)| a.point(i))
            .collect()
    }

    /// Half-widths of the grid measured in standard deviations of `|φ₀(x − Γ)|²`.
    pub fn coverage(&self, g: &GaussianExtremalState, shift: &[f64]) -> Vec<f64> {
        let cov = g.re_a().try_inverse().expect("Re(a) positive definite") * 0.5;
        self.axes
            .iter()
            .enumerate()
            .map(|(i, a)| {
                let s = shift.get(i).copied().unwrap_or(0.0);
                let reach = (a.max - s).min(s - a.min);
                reach / cov[(i, i)].sqrt()
            })
            .collect()
    }

    /// Worst relative L2 error of the difference gradient on a reference
    /// Gaussian with standard deviation one sixth of the axis half-width.
    pub fn resolution_residual(&self) -> f64 {
        self.axes
            .iter()
            .map(|a| {
                let center = 0.5 * (a.min + a.max);
                let s = (a.max - a.min) / 12.0;
                let f: Vec<Complex64> = (0..a.count)
                    .map(|i| Complex64::from((-(a.point(i) - center).powi(2) / (2.0 * s * s)).exp()))
                    .collect();
                let df = difference_1d(&f, a.spacing(), self.stencil);
                let m = self.stencil.reach();
                let (mut err, mut norm) = (0.0, 0.0);
                for i in m..a.count - m {
                    let x = a.point(i) - center;
                    let exact = -x / (s * s) * f[i].re;
                    err += (df[i].re - exact).powi(2);
                    norm += exact * exact;
                }
                (err / norm).sqrt()
            })
            .fold(0.0, f64::max)
    }

    fn check_resolution(&self) -> Result<()> {
        let residual = self.resolution_residual();
        if residual > RESOLUTION_TOL {
            return Err(Error::GridTooCoarse { residual });
        }
        Ok(())
    }
}

fn difference_1d(f: &[Complex64], h: f64, stencil: Stencil) -> Vec<Complex64> {
    let n = f.len();
    let w = stencil.weights();
    let m = w.len();
    let mut out = vec![Complex64::new(0.0, 0.0); n];
    for i in m..n - m {
        let mut acc = Complex64::new(0.0, 0.0);
        for (k, wk) in w.iter().enumerate() {
            acc += wk * (f[i + k + 1] - f[i - k - 1]);
        }
        out[i] = acc / h;
    }
    out
}

pub fn sample<F>(f: F, grid: &Grid) -> Field
where
    F: Fn(&[f64]) -> Complex64 + Sync,
{
    (0..grid.len()).into_par_iter().map(|k| f(&grid.point(k))).collect()
}

/// `∫ f* g` by the rectangle rule.
pub fn inner(f: &[Complex64], g: &[Complex64], grid: &Grid) -> Complex64 {
    f.par_iter()
        .zip(g.par_iter())
        .map(|(a, b)| a.conj() * b)
        .sum::<Complex64>()
        * grid.cell()
}

pub fn norm_sq(f: &[Complex64], grid: &Grid) -> f64 {
    f.par_iter().map(|a| a.norm_sqr()).sum::<f64>() * grid.cell()
}

/// Central difference `∂ψ/∂x_axis` with the grid's stencil. Outer layers on
/// each side of the axis have no full stencil and are set to zero.
pub fn partial(field: &[Complex64], grid: &Grid, axis: usize) -> Field {
    let stride = grid.stride(axis);
    let count = grid.axes[axis].count;
    let h = grid.axes[axis].spacing();
    let w = grid.stencil.weights();
    let m = w.len();
    (0..field.len())
        .into_par_iter()
        .map(|k| {
            let i = (k / stride) % count;
            if i < m || i + m >= count {
                return Complex64::new(0.0, 0.0);
            }
            let mut acc = Complex64::new(0.0, 0.0);
            for (j, wj) in w.iter().enumerate() {
                let off = (j + 1) * stride;
                acc += wj * (field[k + off] - field[k - off]);
            }
            acc / h
        })
        .collect()
}

fn multiply_coordinate(field: &[Complex64], grid: &Grid, axis: usize) -> Field {
    field
        .par_iter()
        .enumerate()
        .map(|(k, v)| v * grid.point(k)[axis])
        .collect()
}

/// `(i α·P + β·X) ψ = α·∇ψ + (β·x) ψ`.
pub fn apply_linear_form(alpha: &CVector, beta: &CVector, field: &[Complex64], grid: &Grid) -> Result<Field> {
    grid.check_resolution()?;
    let n = grid.dim();
    let grads: Vec<Field> = (0..n).map(|a| partial(field, grid, a)).collect();
    Ok((0..field.len())
        .into_par_iter()
        .map(|k| {
            let x = grid.point(k);
            let mut acc = Complex64::new(0.0, 0.0);
            for a in 0..n {
                acc += alpha[a] * grads[a][k] + beta[a] * x[a] * field[k];
            }
            acc
        })
        .collect())
}

/// `(α, β)` of `B_j†` given those of `B_j`: `α′ = −α*`, `β′ = β*`.
pub fn creation_form(alpha: &CVector, beta: &CVector) -> (CVector, CVector) {
    (alpha.map(|c| -c.conj()), beta.map(|c| c.conj()))
}

fn factorial(k: u32) -> f64 {
    (1..=k).map(f64::from).product()
}

/// `∏_k (B_k†)^{n_k} φ₀ / √(∏ n_k!)` on the grid.
pub fn fock_state(nvec: &[u32], d: &LinearFormDecomposition, g: &GaussianExtremalState, grid: &Grid) -> Result<Field> {
    let total: u32 = nvec.iter().sum();
    if total > MAX_FOCK_EXCITATION {
        return Err(Error::RangeError(format!(
            "total excitation {total} exceeds {MAX_FOCK_EXCITATION}"
        )));
    }
    let mut field = sample(|x| crate::gaussian::extremal_wavefunction(g, x), grid);
    let mut scale = 1.0;
    for (k, &nk) in nvec.iter().enumerate() {
        let (alpha, beta) = creation_form(&d.alpha[k], &d.beta[k]);
        for _ in 0..nk {
            field = apply_linear_form(&alpha, &beta, &field, grid)?;
        }
        scale *= factorial(nk);
    }
    let s = 1.0 / scale.sqrt();
    Ok(field.into_iter().map(|v| v * s).collect())
}

/// `H ψ` for `H = ½ Σ B_ab (η_aη_b + η_bη_a)/2` with `P = −i∇` by differences.
pub fn apply_hamiltonian(h: &QuadraticHamiltonian, field: &[Complex64], grid: &Grid) -> Result<Field> {
    grid.check_resolution()?;
    let n = h.n();
    let b = h.b();
    let len = field.len();
    let mut out = vec![Complex64::new(0.0, 0.0); len];

    let grads: Vec<Field> = (0..n).map(|a| partial(field, grid, a)).collect();
    let xs: Vec<Field> = (0..n).map(|a| multiply_coordinate(field, grid, a)).collect();

    // position-position
    for k in 0..len {
        let x = grid.point(k);
        let mut v = 0.0;
        for i in 0..n {
            for j in 0..n {
                v += b[(i, j)] * x[i] * x[j];
            }
        }
        out[k] += 0.5 * v * field[k];
    }
    // momentum-momentum: −½ Σ B_{n+i,n+j} ∂_i∂_j
    for i in 0..n {
        for j in 0..n {
            let coeff = b[(n + i, n + j)];
            if coeff == 0.0 {
                continue;
            }
            let second = partial(&grads[j], grid, i);
            for k in 0..len {
                out[k] -= 0.5 * coeff * second[k];
            }
        }
    }
    // position-momentum: B_{i,n+j} · ½(X_i P_j + P_j X_i)
    for i in 0..n {
        for j in 0..n {
            let coeff = b[(i, n + j)];
            if coeff == 0.0 {
                continue;
            }
            let p_of_x = partial(&xs[i], grid, j);
            for k in 0..len {
                let xi = grid.point(k)[i];
                let xp = xi * (-I * grads[j][k]);
                let px = -I * p_of_x[k];
                out[k] += 0.5 * coeff * (xp + px);
            }
        }
    }
    Ok(out)
}

/// `⟨ψ, Hψ⟩ / ⟨ψ, ψ⟩`.
pub fn rayleigh_quotient(h: &QuadraticHamiltonian, field: &[Complex64], grid: &Grid) -> Result<f64> {
    let hpsi = apply_hamiltonian(h, field, grid)?;
    Ok(inner(field, &hpsi, grid).re / norm_sq(field, grid))
}

#[derive(Debug, Clone, PartialEq)]
pub struct GridMoments {
    pub norm: f64,
    pub mean_x: Vec<f64>,
    pub mean_p: Vec<f64>,
    /// Symmetrized central second moments over `(X, P)`.
    pub covariance: DMatrix<f64>,
}

pub fn grid_moments(field: &[Complex64], grid: &Grid) -> Result<GridMoments> {
    grid.check_resolution()?;
    let n = grid.dim();
    let norm = norm_sq(field, grid);
    let cell = grid.cell() / norm;
    let grads: Vec<Field> = (0..n).map(|a| partial(field, grid, a)).collect();
    let points: Vec<Vec<f64>> = (0..field.len()).into_par_iter().map(|k| grid.point(k)).collect();

    let mut mean_x = vec![0.0; n];
    let mut mean_p = vec![0.0; n];
    let mut raw = DMatrix::<f64>::zeros(2 * n, 2 * n);
    for (k, psi) in field.iter().enumerate() {
        let dens = psi.norm_sqr();
        let x = &points[k];
        // −i∂ψ for each axis
        let p: Vec<Complex64> = (0..n).map(|a| -I * grads[a][k]).collect();
        for i in 0..n {
            mean_x[i] += dens * x[i];
            mean_p[i] += (psi.conj() * p[i]).re;
            for j in 0..n {
                raw[(i, j)] += dens * x[i] * x[j];
                raw[(i, n + j)] += (psi.conj() * x[i] * p[j]).re;
                raw[(n + i, n + j)] += (grads[i][k].conj() * grads[j][k]).re;
            }
        }
    }
    mean_x.iter_mut().chain(mean_p.iter_mut()).for_each(|v| *v *= cell);
    raw *= cell;
    let mut cov = DMatrix::zeros(2 * n, 2 * n);
    let mean: Vec<f64> = mean_x.iter().chain(&mean_p).copied().collect();
    for a in 0..2 * n {
        for c in a..2 * n {
            let m = if a < n && c >= n {
                raw[(a, c)]
            } else {
                0.5 * (raw[(a, c)] + raw[(c, a)])
            };
            let v = m - mean[a] * mean[c];
            cov[(a, c)] = v;
            cov[(c, a)] = v;
        }
    }
    Ok(GridMoments {
        norm,
        mean_x,
        mean_p,
        covariance: cov,
    })
}
