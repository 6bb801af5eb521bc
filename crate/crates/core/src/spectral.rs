//! Eigen-analysis of the dynamical matrix and synthesis of the ladder
//! operators `B_k`, `B_k†` with frequencies `ω_k`, signs `γ_k` and the
//! scalar shift `g₀′` in `H = Σ γ_k ω_k B_k†B_k + g₀′`.
//!
//! A linear form `c·η` is stored as its coefficient vector `c` over the
//! canonical ordering; the commutator of two forms is `[c·η, d·η] = i cᵀ J d`.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{bilinear, complexify, null_vector, CMatrix, CVector, I};
use crate::model::{dynamical_matrix, symplectic_form, DynamicalMatrix, QuadraticHamiltonian};

/// Relative threshold (in units of `‖Λ‖`) for calling a real part zero.
pub const IMAG_AXIS_TOL: f64 = 1e-10;
/// Relative threshold (in units of `‖Λ‖`) on pairwise eigenvalue gaps.
pub const DEGENERACY_TOL: f64 = 1e-8;
/// Bound on `|Im γ_k|` after normalization.
pub const GAMMA_IMAG_TOL: f64 = 1e-9;

/// Right and left eigenvectors of `Λ` for each `±λ_k`, mutually dual.
#[derive(Debug, Clone)]
pub struct EigenPairing {
    pub lambda: Vec<Complex64>,
    pub u_plus: Vec<CVector>,
    pub u_minus: Vec<CVector>,
    /// Left eigenvectors stored as coefficient vectors (`f Λ = ±λ f`).
    pub f_plus: Vec<CVector>,
    pub f_minus: Vec<CVector>,
    /// `‖Λ‖_F`, the scale for relative thresholds.
    pub scale: f64,
    /// Whether `u⁻ = (u⁺)*` and `f⁻ = (f⁺)*` were imposed.
    pub conjugate_paired: bool,
}

impl EigenPairing {
    pub fn n(&self) -> usize {
        self.lambda.len()
    }
}

/// Eigenvalues of `Λ` in pairs `(λ_k, −λ_k)`, `λ_k` chosen with `Re λ_k > 0`, or
/// `Im λ_k > 0` on the imaginary axis; sorted by decreasing modulus.
///
/// Real parts within the axis tolerance are snapped to zero.
pub fn paired_eigenvalues(l: &DynamicalMatrix) -> Result<Vec<Complex64>> {
    let n = l.n();
    let scale = l.norm().max(f64::MIN_POSITIVE);
    let axis = IMAG_AXIS_TOL * scale;
    let mut chosen: Vec<Complex64> = l
        .matrix()
        .complex_eigenvalues()
        .iter()
        .filter(|z| z.re > axis || (z.re.abs() <= axis && z.im > axis))
        .map(|z| {
            if z.re.abs() <= axis {
                Complex64::new(0.0, z.im)
            } else {
                *z
            }
        })
        .collect();
    if chosen.len() != n {
        // Eigenvalues at the origin (or an ambiguous split) cannot be paired.
        return Err(Error::DegenerateSpectrum {
            gap: 0.0,
            threshold: DEGENERACY_TOL * scale,
        });
    }
    chosen.sort_by(|a, b| b.norm().total_cmp(&a.norm()).then(b.im.total_cmp(&a.im)));
    Ok(chosen)
}

/// Smallest of `|λ_j − λ_k|`, `|λ_j + λ_k|` (j ≠ k) and `|2λ_k|`, with the offending labels.
fn minimum_gap(lambda: &[Complex64]) -> (f64, Vec<usize>) {
    let mut best = (f64::INFINITY, Vec::new());
    for (j, &lj) in lambda.iter().enumerate() {
        let self_gap = 2.0 * lj.norm();
        if self_gap < best.0 {
            best = (self_gap, vec![j]);
        }
        for (k, &lk) in lambda.iter().enumerate().skip(j + 1) {
            let gap = (lj - lk).norm().min((lj + lk).norm());
            if gap < best.0 {
                best = (gap, vec![j, k]);
            }
        }
    }
    best
}

pub fn eigen_pairing(l: &DynamicalMatrix) -> Result<EigenPairing> {
    let n = l.n();
    let scale = l.norm();
    let lambda = paired_eigenvalues(l)?;
    let (gap, _) = minimum_gap(&lambda);
    let threshold = DEGENERACY_TOL * scale;
    if gap <= threshold {
        return Err(Error::DegenerateSpectrum { gap, threshold });
    }

    let lc = complexify(l.matrix());
    let id = CMatrix::identity(2 * n, 2 * n);
    let conjugate_paired = lambda.iter().all(|z| z.re == 0.0);
    let mut u_plus = Vec::with_capacity(n);
    let mut u_minus = Vec::with_capacity(n);
    for &lk in &lambda {
        let up = null_vector(&(&lc - &id * lk));
        let um = if conjugate_paired {
            up.map(|c| c.conj())
        } else {
            null_vector(&(&lc + &id * lk))
        };
        u_plus.push(up);
        u_minus.push(um);
    }

    let columns: Vec<CVector> = u_plus.iter().chain(u_minus.iter()).cloned().collect();
    let u = CMatrix::from_columns(&columns);
    let f = u.clone().try_inverse().ok_or(Error::SingularEigenbasis)?;
    let duality = (&f * &u - &id).iter().fold(0.0_f64, |m, c| m.max(c.norm()));
    if !duality.is_finite() || duality > 1e-9 {
        return Err(Error::SingularEigenbasis);
    }
    let f_plus = (0..n).map(|k| f.row(k).transpose()).collect();
    let f_minus = (0..n).map(|k| f.row(n + k).transpose()).collect();

    Ok(EigenPairing {
        lambda,
        u_plus,
        u_minus,
        f_plus,
        f_minus,
        scale,
        conjugate_paired,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RegimeKind {
    Trap,
    Unstable,
    Degenerate,
}

impl RegimeKind {
    pub fn as_str(self) -> &'static str {
        match self {
            RegimeKind::Trap => "trap",
            RegimeKind::Unstable => "unstable",
            RegimeKind::Degenerate => "degenerate",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OffendingMode {
    /// 1-based mode label.
    pub mode: usize,
    pub lambda: Complex64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RegimeReport {
    pub kind: RegimeKind,
    pub offending_modes: Vec<OffendingMode>,
}

impl RegimeReport {
    pub fn is_trap(&self) -> bool {
        self.kind == RegimeKind::Trap
    }
}

/// Classifies paired eigenvalues `λ_k` against a norm scale `‖Λ‖`.
pub fn classify_spectrum(lambda: &[Complex64], scale: f64) -> RegimeReport {
    let unstable: Vec<OffendingMode> = lambda
        .iter()
        .enumerate()
        .filter(|(_, z)| z.re.abs() > IMAG_AXIS_TOL * scale)
        .map(|(k, z)| OffendingMode {
            mode: k + 1,
            lambda: *z,
        })
        .collect();
    if !unstable.is_empty() {
        return RegimeReport {
            kind: RegimeKind::Unstable,
            offending_modes: unstable,
        };
    }
    let (gap, modes) = minimum_gap(lambda);
    if gap <= DEGENERACY_TOL * scale {
        return RegimeReport {
            kind: RegimeKind::Degenerate,
            offending_modes: modes
                .into_iter()
                .map(|k| OffendingMode {
                    mode: k + 1,
                    lambda: lambda[k],
                })
                .collect(),
        };
    }
    RegimeReport {
        kind: RegimeKind::Trap,
        offending_modes: Vec::new(),
    }
}

pub fn classify_regime(e: &EigenPairing) -> RegimeReport {
    classify_spectrum(&e.lambda, e.scale)
}

/// Regime of `Λ` straight from its spectrum; never fails.
pub fn regime_of(l: &DynamicalMatrix) -> RegimeReport {
    match paired_eigenvalues(l) {
        Ok(lambda) => classify_spectrum(&lambda, l.norm()),
        Err(_) => {
            let scale = l.norm();
            let offending = l
                .matrix()
                .complex_eigenvalues()
                .iter()
                .enumerate()
                .filter(|(_, z)| z.norm() <= DEGENERACY_TOL * scale)
                .map(|(k, z)| OffendingMode {
                    mode: k + 1,
                    lambda: *z,
                })
                .collect();
            RegimeReport {
                kind: RegimeKind::Degenerate,
                offending_modes: offending,
            }
        }
    }
}

/// Output of the ladder construction.
#[derive(Debug, Clone, PartialEq)]
pub struct LadderSystem {
    pub n: usize,
    pub omega: Vec<f64>,
    pub gamma: Vec<i8>,
    /// Coefficients of `B_k` over `η`.
    pub b: Vec<CVector>,
    /// Coefficients of `B_k†`, the complex conjugates of `b`.
    pub b_dag: Vec<CVector>,
    pub g0_prime: f64,
}

impl LadderSystem {
    fn j(&self) -> CMatrix {
        complexify(symplectic_form(self.n).matrix())
    }

    pub fn gamma_f64(&self, k: usize) -> f64 {
        f64::from(self.gamma[k])
    }

    /// `[B_j, B_k†] = i b_jᵀ J b_k*`.
    pub fn commutator_b_bdag(&self, j: usize, k: usize) -> Complex64 {
        I * bilinear(&self.b[j], &self.j(), &self.b_dag[k])
    }

    /// `[B_j, B_k] = i b_jᵀ J b_k`.
    pub fn commutator_b_b(&self, j: usize, k: usize) -> Complex64 {
        I * bilinear(&self.b[j], &self.j(), &self.b[k])
    }

    /// Coefficient vector of `[H, B_k] = −i (b_kᵀ Λ) η`; equals `−γ_k ω_k b_k`.
    pub fn hamiltonian_commutator(&self, k: usize, l: &DynamicalMatrix) -> CVector {
        (complexify(l.matrix()).transpose() * &self.b[k]) * (-I)
    }

    /// Quadratic part of `Σ γ_k ω_k B_k†B_k` written back as `B` in `½ηᵀBη`.
    pub fn reconstruct_b(&self) -> DMatrix<f64> {
        let dim = 2 * self.n;
        let mut out = DMatrix::zeros(dim, dim);
        for k in 0..self.n {
            let w = self.gamma_f64(k) * self.omega[k];
            let outer = &self.b_dag[k] * self.b[k].transpose();
            out += outer.map(|c| c.re) * (2.0 * w);
        }
        (&out + out.transpose()) * 0.5
    }

    /// Scalar left over when `Σ γ_k ω_k B_k†B_k` is symmetrized: `Σ γ_k ω_k (i/2) b_k*ᵀ J b_k`.
    pub fn ordering_remainder(&self) -> Complex64 {
        let j = self.j();
        (0..self.n)
            .map(|k| {
                let w = self.gamma_f64(k) * self.omega[k];
                I * 0.5 * w * bilinear(&self.b_dag[k], &j, &self.b[k])
            })
            .sum()
    }

    /// Reorders modes; `order[new] = old`.
    pub fn permuted(&self, order: &[usize]) -> LadderSystem {
        LadderSystem {
            n: self.n,
            omega: order.iter().map(|&k| self.omega[k]).collect(),
            gamma: order.iter().map(|&k| self.gamma[k]).collect(),
            b: order.iter().map(|&k| self.b[k].clone()).collect(),
            b_dag: order.iter().map(|&k| self.b_dag[k].clone()).collect(),
            g0_prime: self.g0_prime,
        }
    }

    /// Multiplies `B_k` by `e^{iθ_k}` (and `B_k†` by the conjugate phase).
    pub fn rephased(&self, theta: &[f64]) -> LadderSystem {
        let mut out = self.clone();
        for k in 0..self.n {
            let phase = Complex64::from_polar(1.0, theta[k]);
            out.b[k] = &self.b[k] * phase;
            out.b_dag[k] = &self.b_dag[k] * phase.conj();
        }
        out
    }
}

fn pivot_index(v: &CVector) -> usize {
    let max = v.iter().fold(0.0_f64, |m, c| m.max(c.norm()));
    v.iter().position(|c| c.norm() >= max * (1.0 - 1e-12)).unwrap_or(0)
}

pub fn normalize_ladder(e: &EigenPairing, h: &QuadraticHamiltonian) -> Result<LadderSystem> {
    if !classify_regime(e).is_trap() || !e.conjugate_paired {
        return Err(Error::NotTrapRegime);
    }
    let n = e.n();
    if h.n() != n {
        return Err(Error::DimensionMismatch {
            expected: format!("n = {n}"),
            got: format!("n = {}", h.n()),
        });
    }
    let j = complexify(symplectic_form(n).matrix());

    let mut omega = Vec::with_capacity(n);
    let mut gamma = Vec::with_capacity(n);
    let mut b = Vec::with_capacity(n);
    for k in 0..n {
        // [f⁻η, f⁺η]
        let raw = I * bilinear(&e.f_minus[k], &j, &e.f_plus[k]);
        let modulus = raw.norm();
        if modulus == 0.0 || !modulus.is_finite() {
            return Err(Error::NumericalBreakdown(format!(
                "vanishing bracket for mode {}",
                k + 1
            )));
        }
        let unit = raw / modulus;
        if unit.im.abs() > GAMMA_IMAG_TOL {
            return Err(Error::GammaNotReal {
                mode: k + 1,
                imag: unit.im,
            });
        }
        let mut f_plus = &e.f_plus[k] * Complex64::from(1.0 / modulus.sqrt());
        let p = pivot_index(&f_plus);
        let phase = Complex64::from_polar(1.0, -f_plus[p].arg());
        f_plus *= phase;
        let f_minus = f_plus.map(|c| c.conj());

        let sign: i8 = if unit.re > 0.0 { 1 } else { -1 };
        omega.push(e.lambda[k].im);
        gamma.push(sign);
        b.push(if sign == 1 { f_minus } else { f_plus });
    }
    let b_dag: Vec<CVector> = b.iter().map(|v| v.map(|c| c.conj())).collect();

    let mut ladder = LadderSystem {
        n,
        omega,
        gamma,
        b,
        b_dag,
        g0_prime: 0.0,
    };
    // ½ηᵀBη = Σ γω B†B − remainder, so the constant term is minus the remainder.
    ladder.g0_prime = -ladder.ordering_remainder().re;
    Ok(ladder)
}

/// Runs model → spectral on a Hamiltonian that is expected to be a trap.
pub fn ladder_system(h: &QuadraticHamiltonian) -> Result<LadderSystem> {
    let e = eigen_pairing(&dynamical_matrix(h))?;
    normalize_ladder(&e, h)
}

/// A generated trap Hamiltonian together with its known normal-form data.
#[derive(Debug, Clone)]
pub struct GeneratedTrap {
    pub hamiltonian: QuadraticHamiltonian,
    pub omega: Vec<f64>,
    pub gamma: Vec<i8>,
    pub symplectic: DMatrix<f64>,
}

/// `B = Sᵀ B₀ S` with `B₀ = diag(γω, γω)` in canonical ordering.
pub fn trap_from_normal_form(omega: &[f64], gamma: &[i8], s: &DMatrix<f64>) -> Result<QuadraticHamiltonian> {
    let n = omega.len();
    let mut b0 = DMatrix::zeros(2 * n, 2 * n);
    for k in 0..n {
        let w = f64::from(gamma[k]) * omega[k];
        b0[(k, k)] = w;
        b0[(n + k, n + k)] = w;
    }
    let b = s.transpose() * b0 * s;
    QuadraticHamiltonian::new(n, (&b + b.transpose()) * 0.5)
}

pub fn random_trap_system(n: usize, seed: u64) -> GeneratedTrap {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let omega = loop {
        let w: Vec<f64> = (0..n).map(|_| rng.random_range(0.1..=10.0)).collect();
        let separated = (0..n).all(|j| (j + 1..n).all(|k| (w[j] - w[k]).abs() >= 0.05 * w[j].max(w[k])));
        if separated {
            break w;
        }
    };
    let gamma: Vec<i8> = (0..n).map(|_| if rng.random_bool(0.5) { 1 } else { -1 }).collect();
    let symplectic = random_symplectic(n, &mut rng);
    let hamiltonian = trap_from_normal_form(&omega, &gamma, &symplectic).expect("symmetric by construction");
    GeneratedTrap {
        hamiltonian,
        omega,
        gamma,
        symplectic,
    }
}

pub fn random_trap_hamiltonian(n: usize, seed: u64) -> QuadraticHamiltonian {
    random_trap_system(n, seed).hamiltonian
}

/// Product of a passive rotation, a mild squeeze, a position-momentum shear
/// and a second rotation.
fn random_symplectic<R: Rng>(n: usize, rng: &mut R) -> DMatrix<f64> {
    let rotation = |rng: &mut R| {
        let z = CMatrix::from_fn(n, n, |_, _| {
            Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
        });
        let q = z.qr().q();
        let mut o = DMatrix::zeros(2 * n, 2 * n);
        for i in 0..n {
            for j in 0..n {
                o[(i, j)] = q[(i, j)].re;
                o[(i, n + j)] = -q[(i, j)].im;
                o[(n + i, j)] = q[(i, j)].im;
                o[(n + i, n + j)] = q[(i, j)].re;
            }
        }
        o
    };
    let mut squeeze = DMatrix::zeros(2 * n, 2 * n);
    for i in 0..n {
        let d: f64 = rng.random_range(0.7..1.4);
        squeeze[(i, i)] = d;
        squeeze[(n + i, n + i)] = 1.0 / d;
    }
    let mut shear = DMatrix::identity(2 * n, 2 * n);
    for i in 0..n {
        for j in i..n {
            let v: f64 = rng.random_range(-0.5..0.5);
            shear[(n + i, j)] = v;
            shear[(n + j, i)] = v;
        }
    }
    let first = rotation(rng);
    let second = rotation(rng);
    second * shear * squeeze * first
}

/// Column vector helper for tests and callers building rows by hand.
pub fn cvec(values: &[Complex64]) -> CVector {
    DVector::from_column_slice(values)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::build_hamiltonian;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn unit_oscillator() -> QuadraticHamiltonian {
        build_hamiltonian(1, DMatrix::identity(2, 2)).unwrap()
    }

    #[test]
    fn rotation_generator_pairing() {
        let l = dynamical_matrix(&unit_oscillator());
        let e = eigen_pairing(&l).unwrap();
        assert!((e.lambda[0] - c(0.0, 1.0)).norm() < 1e-14);
        let u = &e.u_plus[0];
        // u ∝ (1, i)
        assert!((u[1] / u[0] - c(0.0, 1.0)).norm() < 1e-12);
        assert!(e.conjugate_paired);
    }

    #[test]
    fn eigen_residuals_and_duality() {
        for seed in 0..10 {
            let h = random_trap_hamiltonian(3, seed);
            let l = dynamical_matrix(&h);
            let e = eigen_pairing(&l).unwrap();
            let lc = complexify(l.matrix());
            let tol = 1e-9 * e.scale;
            for k in 0..3 {
                let lk = e.lambda[k];
                assert!((&lc * &e.u_plus[k] - &e.u_plus[k] * lk).norm() <= tol);
                assert!((&lc * &e.u_minus[k] + &e.u_minus[k] * lk).norm() <= tol);
                assert!((lc.transpose() * &e.f_plus[k] - &e.f_plus[k] * lk).norm() <= tol);
                assert!((lc.transpose() * &e.f_minus[k] + &e.f_minus[k] * lk).norm() <= tol);
                for j in 0..3 {
                    let d = if j == k { 1.0 } else { 0.0 };
                    assert!(((e.f_plus[j].transpose() * &e.u_plus[k])[(0, 0)] - d).norm() < 1e-9);
                    assert!((e.f_plus[j].transpose() * &e.u_minus[k])[(0, 0)].norm() < 1e-9);
                    assert!((e.f_minus[j].transpose() * &e.u_plus[k])[(0, 0)].norm() < 1e-9);
                }
            }
        }
    }

    #[test]
    fn inverted_oscillator_is_unstable() {
        let h = build_hamiltonian(1, DMatrix::from_row_slice(2, 2, &[1.0, 0.0, 0.0, -1.0])).unwrap();
        let l = dynamical_matrix(&h);
        let e = eigen_pairing(&l).unwrap();
        assert!((e.lambda[0] - c(1.0, 0.0)).norm() < 1e-14);
        let report = classify_regime(&e);
        assert_eq!(report.kind, RegimeKind::Unstable);
        assert_eq!(report.offending_modes.len(), 1);
        assert_eq!(report.offending_modes[0].mode, 1);
        assert!((report.offending_modes[0].lambda - c(1.0, 0.0)).norm() < 1e-14);
        assert_eq!(normalize_ladder(&e, &h).unwrap_err(), Error::NotTrapRegime);
    }

    #[test]
    fn unit_oscillator_is_trap() {
        let l = dynamical_matrix(&unit_oscillator());
        assert_eq!(regime_of(&l).kind, RegimeKind::Trap);
    }

    #[test]
    fn free_particle_is_degenerate() {
        let h = build_hamiltonian(1, DMatrix::from_row_slice(2, 2, &[0.0, 0.0, 0.0, 1.0])).unwrap();
        let l = dynamical_matrix(&h);
        assert_eq!(eigen_pairing(&l).unwrap_err().code(), "degenerate_spectrum");
        assert_eq!(regime_of(&l).kind, RegimeKind::Degenerate);
    }

    #[test]
    fn isotropic_2d_oscillator_is_degenerate() {
        let h = build_hamiltonian(2, DMatrix::identity(4, 4)).unwrap();
        let l = dynamical_matrix(&h);
        assert_eq!(eigen_pairing(&l).unwrap_err().code(), "degenerate_spectrum");
        let report = regime_of(&l);
        assert_eq!(report.kind, RegimeKind::Degenerate);
        assert_eq!(report.offending_modes.len(), 2);
    }

    #[test]
    fn unit_oscillator_ladder() {
        let ladder = ladder_system(&unit_oscillator()).unwrap();
        assert!((ladder.omega[0] - 1.0).abs() < 1e-14);
        assert_eq!(ladder.gamma, vec![1]);
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let b = &ladder.b[0];
        // (1, i)/√2 up to a phase; the pivot convention makes it exact.
        assert!((b[0] - c(s, 0.0)).norm() < 1e-14);
        assert!((b[1] - c(0.0, s)).norm() < 1e-14);
        assert!((ladder.g0_prime - 0.5).abs() < 1e-14);
    }

    #[test]
    fn ladder_invariants_and_heisenberg_commutator() {
        for seed in 0..20 {
            let n = 1 + (seed as usize % 3);
            let gen = random_trap_system(n, seed);
            let l = dynamical_matrix(&gen.hamiltonian);
            let ladder = ladder_system(&gen.hamiltonian).unwrap();
            for j in 0..n {
                for k in 0..n {
                    let d = if j == k { 1.0 } else { 0.0 };
                    assert!((ladder.commutator_b_bdag(j, k) - d).norm() < 1e-9);
                    assert!(ladder.commutator_b_b(j, k).norm() < 1e-9);
                }
                let lhs = ladder.hamiltonian_commutator(j, &l);
                let rhs = &ladder.b[j] * Complex64::from(-ladder.gamma_f64(j) * ladder.omega[j]);
                assert!((lhs - rhs).norm() < 1e-9 * l.norm().max(1.0));
            }
            let recon = ladder.reconstruct_b();
            let scale = gen.hamiltonian.b().norm();
            assert!((recon - gen.hamiltonian.b()).norm() <= 1e-8 * scale);
            assert!(ladder.ordering_remainder().im.abs() < 1e-9);
        }
    }

    #[test]
    fn generator_normal_form_identity_case() {
        let h = trap_from_normal_form(&[2.0], &[1], &DMatrix::identity(2, 2)).unwrap();
        assert_eq!(h.b(), &DMatrix::from_row_slice(2, 2, &[2.0, 0.0, 0.0, 2.0]));
    }

    #[test]
    fn generator_is_symplectic_and_trap() {
        for seed in 0..10 {
            let gen = random_trap_system(2, seed);
            let j = symplectic_form(2);
            let s = &gen.symplectic;
            let err = (s * j.matrix() * s.transpose() - j.matrix()).amax();
            assert!(err < 1e-12);
            let report = regime_of(&dynamical_matrix(&gen.hamiltonian));
            assert_eq!(report.kind, RegimeKind::Trap);
        }
    }

    #[test]
    fn generator_round_trip_recovers_modes() {
        for seed in 0..20 {
            let gen = random_trap_system(2, seed);
            let ladder = ladder_system(&gen.hamiltonian).unwrap();
            let mut want: Vec<(f64, i8)> = gen.omega.iter().copied().zip(gen.gamma.iter().copied()).collect();
            let mut got: Vec<(f64, i8)> = ladder.omega.iter().copied().zip(ladder.gamma.iter().copied()).collect();
            want.sort_by(|a, b| a.0.total_cmp(&b.0));
            got.sort_by(|a, b| a.0.total_cmp(&b.0));
            for (w, g) in want.iter().zip(&got) {
                assert!((w.0 - g.0).abs() < 1e-8 * w.0.max(1.0));
                assert_eq!(w.1, g.1);
            }
        }
    }

    #[test]
    fn gamma_sign_of_inverted_mode() {
        // H = −(X² + P²)/2 is a trap with an anti-oscillator mode.
        let h = trap_from_normal_form(&[1.5], &[-1], &DMatrix::identity(2, 2)).unwrap();
        let ladder = ladder_system(&h).unwrap();
        assert_eq!(ladder.gamma, vec![-1]);
        assert!((ladder.omega[0] - 1.5).abs() < 1e-13);
        assert!((ladder.g0_prime + 0.75).abs() < 1e-13);
    }
}
