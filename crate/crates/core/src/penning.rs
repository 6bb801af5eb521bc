//! Asymmetric Penning trap (m = 1):
//!
//! `H = P²/2 + (ω_c/2)(X P_y − Y P_x) + ½(ω_x² X² + ω_y² Y² + ω_z² Z²)`,
//! `ω_x² = ω_c²/4 − (ω_z²/2)(1 + ε)`, `ω_y² = ω_c²/4 − (ω_z²/2)(1 − ε)`.
//!
//! The closed forms below are evaluated on their own, in the trap-specific
//! ordering `(X, Y, P_x, P_y, Z, P_z)`, and share no code with the generic
//! pipeline so the two can be compared.

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::QuadraticHamiltonian;
use crate::spectral::{ladder_system, LadderSystem};

/// `PLANAR_ORDER[i]` is the canonical index of the i-th entry of `(X, Y, P_x, P_y, Z, P_z)`.
pub const PLANAR_ORDER: [usize; 6] = [0, 1, 3, 4, 2, 5];

const BREAKDOWN_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PenningParams {
    pub omega_c: f64,
    pub omega_z: f64,
    pub epsilon: f64,
}

impl PenningParams {
    pub fn new(omega_c: f64, omega_z: f64, epsilon: f64) -> Result<Self> {
        let p = Self {
            omega_c,
            omega_z,
            epsilon,
        };
        p.validate()?;
        Ok(p)
    }

    /// Parametrizes by `δ = 2ω_z²/ω_c²` instead of `ω_z`.
    pub fn from_delta(omega_c: f64, delta: f64, epsilon: f64) -> Result<Self> {
        if delta.is_nan() || delta <= 0.0 {
            return Err(Error::InvalidParams(format!("delta must lie in (0, 1), got {delta}")));
        }
        Self::new(omega_c, omega_c * (delta / 2.0).sqrt(), epsilon)
    }

    fn validate(&self) -> Result<()> {
        let finite = self.omega_c.is_finite() && self.omega_z.is_finite() && self.epsilon.is_finite();
        if !finite || self.omega_c <= 0.0 || self.omega_z <= 0.0 {
            return Err(Error::InvalidParams("frequencies must be positive and finite".into()));
        }
        if self.epsilon.abs() >= 1.0 {
            return Err(Error::InvalidParams(format!(
                "|epsilon| must be < 1, got {}",
                self.epsilon
            )));
        }
        let delta = self.delta();
        if !(delta > 0.0 && delta < 1.0) {
            return Err(Error::InvalidParams(format!(
                "delta = 2 omega_z^2 / omega_c^2 must lie in (0, 1), got {delta}"
            )));
        }
        Ok(())
    }

    pub fn delta(&self) -> f64 {
        2.0 * self.omega_z.powi(2) / self.omega_c.powi(2)
    }

    pub fn omega_x_sq(&self) -> f64 {
        self.omega_c.powi(2) / 4.0 - self.omega_z.powi(2) / 2.0 * (1.0 + self.epsilon)
    }

    pub fn omega_y_sq(&self) -> f64 {
        self.omega_c.powi(2) / 4.0 - self.omega_z.powi(2) / 2.0 * (1.0 - self.epsilon)
    }
}

/// Builds `B` in canonical ordering `(X, Y, Z, P_x, P_y, P_z)`.
pub fn penning_hamiltonian(p: &PenningParams) -> Result<QuadraticHamiltonian> {
    p.validate()?;
    let (x, y, z, px, py, pz) = (0, 1, 2, 3, 4, 5);
    let half_c = p.omega_c / 2.0;
    let mut b = DMatrix::zeros(6, 6);
    b[(x, x)] = p.omega_x_sq();
    b[(y, y)] = p.omega_y_sq();
    b[(z, z)] = p.omega_z.powi(2);
    b[(px, px)] = 1.0;
    b[(py, py)] = 1.0;
    b[(pz, pz)] = 1.0;
    b[(x, py)] = half_c;
    b[(py, x)] = half_c;
    b[(y, px)] = -half_c;
    b[(px, y)] = -half_c;
    QuadraticHamiltonian::new(3, b)
}

/// Rewrites a canonical-ordering `6 × 6` matrix in `(X, Y, P_x, P_y, Z, P_z)` ordering.
pub fn to_planar_ordering<T: nalgebra::Scalar + Copy>(m: &DMatrix<T>) -> DMatrix<T> {
    DMatrix::from_fn(6, 6, |i, j| m[(PLANAR_ORDER[i], PLANAR_ORDER[j])])
}

/// Reorders pipeline modes as (upper XY mode, lower XY mode, axial mode).
pub fn label_modes(l: &LadderSystem) -> LadderSystem {
    let axial_weight = |k: usize| -> f64 {
        let b = &l.b[k];
        let planar: f64 = [0, 1, 3, 4].iter().map(|&i| b[i].norm_sqr()).sum();
        let axial: f64 = [2, 5].iter().map(|&i| b[i].norm_sqr()).sum();
        axial / (axial + planar)
    };
    let axial = (0..3)
        .max_by(|&a, &b| axial_weight(a).total_cmp(&axial_weight(b)))
        .expect("three modes");
    let mut planar: Vec<usize> = (0..3).filter(|&k| k != axial).collect();
    planar.sort_by(|&a, &b| l.omega[b].total_cmp(&l.omega[a]));
    l.permuted(&[planar[0], planar[1], axial])
}

/// Generic ladder pipeline applied to the trap, with modes labelled as in [`label_modes`].
pub fn penning_ladder(p: &PenningParams) -> Result<LadderSystem> {
    Ok(label_modes(&ladder_system(&penning_hamiltonian(p)?)?))
}

/// Closed-form spectrum and extremal-state data of the trap.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PenningClosedForms {
    pub omega: [f64; 3],
    pub r: f64,
    pub gamma: [i8; 3],
    pub a11: f64,
    /// `a₁₂` is purely imaginary; this is its imaginary part.
    pub a12_im: f64,
    pub a22: f64,
    pub a33: f64,
    pub e000: f64,
    /// `ΔX ΔP_x = ΔY ΔP_y`.
    pub heisenberg_xy: f64,
    /// `ΔZ ΔP_z`.
    pub heisenberg_z: f64,
    /// Normalizations `t₁, t₂, t₃` of the left eigenvectors (principal branch).
    pub t: [Complex64; 3],
    /// `(f_a, f_b, f_c)` of the two planar left eigenvectors, without `t`.
    pub f_planar: [[Complex64; 3]; 2],
}

fn checked_sqrt(x: f64, what: &str) -> Result<f64> {
    if x <= BREAKDOWN_TOL {
        return Err(Error::NumericalBreakdown(format!(
            "{what} radicand {x:.3e} not positive"
        )));
    }
    Ok(x.sqrt())
}

fn checked_csqrt(x: Complex64, what: &str) -> Result<Complex64> {
    if x.norm() <= BREAKDOWN_TOL {
        return Err(Error::NumericalBreakdown(format!("{what} radicand vanishes")));
    }
    Ok(x.sqrt())
}

pub fn penning_closed_forms(p: &PenningParams) -> Result<PenningClosedForms> {
    p.validate()?;
    let wc = p.omega_c;
    let d = p.delta();
    let e = p.epsilon;
    let i = Complex64::new(0.0, 1.0);

    let r = checked_sqrt(4.0 * (1.0 - d) + d * d * e * e, "R")?;
    let w1 = wc / 2.0 * checked_sqrt(2.0 - d + r, "omega_1")?;
    let w2 = wc / 2.0 * checked_sqrt(2.0 - d - r, "omega_2")?;
    let w3 = p.omega_z;

    let f1 = [
        Complex64::from(wc / 4.0 * (r - d * e)),
        i * (wc * wc / (8.0 * w1) * (2.0 * (1.0 - d) + d * e + r)),
        -i * (wc / (4.0 * w1) * (2.0 - d * e + r)),
    ];
    let f2 = [
        Complex64::from(wc / 4.0 * (-r - d * e)),
        i * (wc * wc / (8.0 * w2) * (2.0 * (1.0 - d) + d * e - r)),
        -i * (wc / (4.0 * w2) * (2.0 - d * e - r)),
    ];
    let [f1a, f1b, f1c] = f1;
    let [f2a, f2b, f2c] = f2;

    let t1 = 1.0 / checked_csqrt(2.0 * i * (f1a * f1c - f1b), "t_1")?;
    let t2 = 1.0 / checked_csqrt(2.0 * i * (f2b - f2a * f2c), "t_2")?;
    let t3 = Complex64::from(1.0 / checked_sqrt(2.0 * w3, "t_3")?);

    let denom = f1c + f2c;
    if denom.norm() <= BREAKDOWN_TOL {
        return Err(Error::NumericalBreakdown("f_1c + f_2c vanishes".into()));
    }
    let a11 = -i * (f1a - f2a) / denom;
    let a12 = i * (f1b + f2b) / denom;
    let a22 = i * (f1c * f2b - f2c * f1b) / denom;

    let heisenberg_xy = 0.5 * (1.0 + a12.norm_sqr() / (a11.re * a22.re)).sqrt();
    Ok(PenningClosedForms {
        omega: [w1, w2, w3],
        r,
        gamma: [1, -1, 1],
        a11: a11.re,
        a12_im: a12.im,
        a22: a22.re,
        a33: w3,
        e000: (w1 - w2 + w3) / 2.0,
        heisenberg_xy,
        heisenberg_z: 0.5,
        t: [t1, t2, t3],
        f_planar: [f1, f2],
    })
}

impl PenningClosedForms {
    pub fn a12(&self) -> Complex64 {
        Complex64::new(0.0, self.a12_im)
    }

    /// `⟨X²⟩₀ = 1/(2a₁₁)`.
    pub fn x2(&self) -> f64 {
        1.0 / (2.0 * self.a11)
    }

    /// `⟨Y²⟩₀ = 1/(2a₂₂)`.
    pub fn y2(&self) -> f64 {
        1.0 / (2.0 * self.a22)
    }

    /// `⟨P_x²⟩₀ = ½(a₁₁ − a₁₂²/a₂₂)`.
    pub fn px2(&self) -> f64 {
        (0.5 * (self.a11 - self.a12().powi(2) / self.a22)).re
    }

    /// `⟨P_y²⟩₀ = ½(a₂₂ − a₁₂²/a₁₁)`.
    pub fn py2(&self) -> f64 {
        (0.5 * (self.a22 - self.a12().powi(2) / self.a11)).re
    }

    /// Symmetrized `⟨X P_y⟩₀`: the real part of `(i/2) a₁₂/a₁₁`.
    pub fn xpy_sym(&self) -> f64 {
        (Complex64::new(0.0, 0.5) * self.a12() / self.a11).re
    }

    /// Symmetrized `⟨Y P_x⟩₀`: the real part of `(i/2) a₁₂/a₂₂`.
    pub fn ypx_sym(&self) -> f64 {
        (Complex64::new(0.0, 0.5) * self.a12() / self.a22).re
    }

    /// Covariance matrix in `(X, Y, P_x, P_y, Z, P_z)` ordering.
    pub fn sigma_planar_order(&self) -> DMatrix<f64> {
        let mut s = DMatrix::zeros(6, 6);
        s[(0, 0)] = self.x2();
        s[(1, 1)] = self.y2();
        s[(2, 2)] = self.px2();
        s[(3, 3)] = self.py2();
        s[(4, 4)] = 1.0 / (2.0 * self.a33);
        s[(5, 5)] = 0.5 * self.a33;
        s[(0, 3)] = self.xpy_sym();
        s[(3, 0)] = self.xpy_sym();
        s[(1, 2)] = self.ypx_sym();
        s[(2, 1)] = self.ypx_sym();
        s
    }
}

/// One row of the uncertainty surface.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SweepPoint {
    pub delta: f64,
    pub epsilon: f64,
    pub dx_dpx: f64,
    pub dy_dpy: f64,
    pub dz_dpz: f64,
}

/// Closed-form uncertainty products on an inclusive `steps × steps` grid,
/// δ-major then ε, both increasing.
pub fn uncertainty_surface(
    omega_c: f64,
    delta_range: (f64, f64),
    epsilon_range: (f64, f64),
    steps: usize,
) -> Result<Vec<SweepPoint>> {
    use rayon::prelude::*;

    let (d0, d1) = delta_range;
    let (e0, e1) = epsilon_range;
    if steps < 1 {
        return Err(Error::RangeError("steps must be >= 1".into()));
    }
    if !(d0 > 0.0 && d1 < 1.0 && d0 <= d1) {
        return Err(Error::RangeError(format!(
            "delta range {d0}:{d1} must be increasing inside (0, 1)"
        )));
    }
    if !(e0 > -1.0 && e1 < 1.0 && e0 <= e1) {
        return Err(Error::RangeError(format!(
            "epsilon range {e0}:{e1} must be increasing inside (-1, 1)"
        )));
    }
    let at = |lo: f64, hi: f64, k: usize| {
        if steps == 1 {
            lo
        } else {
            lo + (hi - lo) * k as f64 / (steps - 1) as f64
        }
    };
    (0..steps * steps)
        .into_par_iter()
        .map(|idx| {
            let delta = at(d0, d1, idx / steps);
            let epsilon = at(e0, e1, idx % steps);
            let cf = penning_closed_forms(&PenningParams::from_delta(omega_c, delta, epsilon)?)?;
            Ok(SweepPoint {
                delta,
                epsilon,
                dx_dpx: cf.heisenberg_xy,
                dy_dpy: cf.heisenberg_xy,
                dz_dpz: cf.heisenberg_z,
            })
        })
        .collect()
}
