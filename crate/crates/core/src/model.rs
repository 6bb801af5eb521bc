//! Quadratic Hamiltonians `H = ½ ηᵀ B η` over the canonical ordering
//! `η = (X₁..Xₙ, P₁..Pₙ)`, the symplectic form `J` and the dynamical
//! matrix `Λ = J B` that generates Heisenberg evolution `dη/dt = Λ η`.
//!
//! Units are ħ = m = 1 throughout.

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Relative tolerance on `‖B − Bᵀ‖_max / ‖B‖_max` below which input is symmetrized.
pub const SYMMETRY_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub struct QuadraticHamiltonian {
    n: usize,
    b: DMatrix<f64>,
}

impl QuadraticHamiltonian {
    /// Validates and symmetrizes a `2n × 2n` coefficient matrix.
    pub fn new(n: usize, b: DMatrix<f64>) -> Result<Self> {
        if n == 0 {
            return Err(Error::DimensionMismatch {
                expected: "n >= 1".into(),
                got: "n = 0".into(),
            });
        }
        if b.nrows() != 2 * n || b.ncols() != 2 * n {
            return Err(Error::DimensionMismatch {
                expected: format!("{0}x{0}", 2 * n),
                got: format!("{}x{}", b.nrows(), b.ncols()),
            });
        }
        if b.iter().any(|v| !v.is_finite()) {
            return Err(Error::Parse("coefficient matrix has non-finite entries".into()));
        }
        let scale = max_abs(&b);
        let asymmetry = max_abs(&(&b - b.transpose()));
        let tolerance = SYMMETRY_TOL * scale;
        if asymmetry > tolerance {
            return Err(Error::NotSymmetric { asymmetry, tolerance });
        }
        let b = (&b + b.transpose()) * 0.5;
        Ok(Self { n, b })
    }

    /// Parses `{"n": int, "B": [[row], ...]}` (row-major).
    pub fn from_json(text: &str) -> Result<Self> {
        let raw: HamiltonianJson = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        raw.try_into()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&HamiltonianJson::from(self)).expect("plain numeric payload")
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn b(&self) -> &DMatrix<f64> {
        &self.b
    }

    /// Classical value `½ ηᵀ B η` of the quadratic form at a phase-space point.
    pub fn energy(&self, eta: &[f64]) -> f64 {
        let v = nalgebra::DVector::from_column_slice(eta);
        0.5 * v.dot(&(&self.b * &v))
    }
}

#[derive(Debug, Serialize, Deserialize)]
struct HamiltonianJson {
    n: usize,
    #[serde(rename = "B")]
    b: Vec<Vec<f64>>,
}

impl TryFrom<HamiltonianJson> for QuadraticHamiltonian {
    type Error = Error;

    fn try_from(raw: HamiltonianJson) -> Result<Self> {
        let dim = 2 * raw.n;
        if raw.b.len() != dim || raw.b.iter().any(|row| row.len() != dim) {
            let cols = raw.b.first().map_or(0, Vec::len);
            return Err(Error::DimensionMismatch {
                expected: format!("{dim}x{dim}"),
                got: format!("{}x{}", raw.b.len(), cols),
            });
        }
        let b = DMatrix::from_fn(dim, dim, |i, j| raw.b[i][j]);
        QuadraticHamiltonian::new(raw.n, b)
    }
}

impl From<&QuadraticHamiltonian> for HamiltonianJson {
    fn from(h: &QuadraticHamiltonian) -> Self {
        let b = h.b.row_iter().map(|r| r.iter().copied().collect()).collect();
        HamiltonianJson { n: h.n, b }
    }
}

pub fn build_hamiltonian(n: usize, b: DMatrix<f64>) -> Result<QuadraticHamiltonian> {
    QuadraticHamiltonian::new(n, b)
}

/// `J = [[0, 1ₙ], [−1ₙ, 0]]`.
#[derive(Debug, Clone, PartialEq)]
pub struct SymplecticForm {
    j: DMatrix<f64>,
}

impl SymplecticForm {
    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.j
    }

    pub fn n(&self) -> usize {
        self.j.nrows() / 2
    }
}

pub fn symplectic_form(n: usize) -> SymplecticForm {
    let mut j = DMatrix::zeros(2 * n, 2 * n);
    for i in 0..n {
        j[(i, n + i)] = 1.0;
        j[(n + i, i)] = -1.0;
    }
    SymplecticForm { j }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DynamicalMatrix {
    lambda: DMatrix<f64>,
}

impl DynamicalMatrix {
    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.lambda
    }

    pub fn n(&self) -> usize {
        self.lambda.nrows() / 2
    }

    /// Frobenius norm, used as the scale for relative spectral thresholds.
    pub fn norm(&self) -> f64 {
        self.lambda.norm()
    }
}

pub fn dynamical_matrix(h: &QuadraticHamiltonian) -> DynamicalMatrix {
    let j = symplectic_form(h.n);
    DynamicalMatrix {
        lambda: j.matrix() * h.b(),
    }
}

/// Coefficients `c₀..c_m` of `det(λ·1 − A) = Σ c_k λ^{m−k}` via Faddeev–LeVerrier.
pub fn characteristic_polynomial(a: &DMatrix<f64>) -> Vec<f64> {
    let m = a.nrows();
    let mut coeffs = Vec::with_capacity(m + 1);
    coeffs.push(1.0);
    let mut mk = DMatrix::<f64>::zeros(m, m);
    let id = DMatrix::<f64>::identity(m, m);
    for k in 1..=m {
        mk = a * &mk + &id * coeffs[k - 1];
        let c = -(a * &mk).trace() / k as f64;
        coeffs.push(c);
    }
    coeffs
}

pub(crate) fn max_abs(m: &DMatrix<f64>) -> f64 {
    m.iter().fold(0.0_f64, |acc, v| acc.max(v.abs()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unit_oscillator_is_valid() {
        let h = build_hamiltonian(1, DMatrix::identity(2, 2)).unwrap();
        assert_eq!(h.n(), 1);
        assert_eq!(h.energy(&[1.0, 1.0]), 1.0);
    }

    #[test]
    fn asymmetric_input_rejected() {
        let b = DMatrix::from_row_slice(2, 2, &[1.0, 2.0, 0.0, 1.0]);
        let err = build_hamiltonian(1, b).unwrap_err();
        assert_eq!(err.code(), "not_symmetric");
    }

    #[test]
    fn tiny_asymmetry_is_symmetrized() {
        let b = DMatrix::from_row_slice(2, 2, &[1.0, 0.5 + 1e-14, 0.5, 1.0]);
        let h = build_hamiltonian(1, b).unwrap();
        assert_eq!(h.b()[(0, 1)], h.b()[(1, 0)]);
    }

    #[test]
    fn wrong_shape_rejected() {
        let err = build_hamiltonian(2, DMatrix::identity(2, 2)).unwrap_err();
        assert_eq!(err.code(), "dimension_mismatch");
        let err = build_hamiltonian(0, DMatrix::zeros(0, 0)).unwrap_err();
        assert_eq!(err.code(), "dimension_mismatch");
    }

    #[test]
    fn json_round_trip_and_errors() {
        let h = QuadraticHamiltonian::from_json(r#"{"n":1,"B":[[1,0],[0,1]]}"#).unwrap();
        let back = QuadraticHamiltonian::from_json(&h.to_json()).unwrap();
        assert_eq!(h, back);

        let err = QuadraticHamiltonian::from_json(r#"{"n":1,"B":[[1,0,0],[0,1,0]]}"#).unwrap_err();
        assert_eq!(err.code(), "dimension_mismatch");
        let err = QuadraticHamiltonian::from_json(r#"{"n":1,"B":[[1,2],[0,1]]}"#).unwrap_err();
        assert_eq!(err.code(), "not_symmetric");
        let err = QuadraticHamiltonian::from_json("{not json").unwrap_err();
        assert_eq!(err.code(), "parse_error");
    }

    #[test]
    fn symplectic_form_small_cases() {
        let j1 = symplectic_form(1);
        assert_eq!(j1.matrix(), &DMatrix::from_row_slice(2, 2, &[0.0, 1.0, -1.0, 0.0]));

        let j2 = symplectic_form(2);
        #[rustfmt::skip]
        let expected = DMatrix::from_row_slice(4, 4, &[
            0.0, 0.0, 1.0, 0.0,
            0.0, 0.0, 0.0, 1.0,
            -1.0, 0.0, 0.0, 0.0,
            0.0, -1.0, 0.0, 0.0,
        ]);
        assert_eq!(j2.matrix(), &expected);
    }

    #[test]
    fn symplectic_form_identities() {
        for n in 1..=5 {
            let j = symplectic_form(n);
            let m = j.matrix();
            assert_eq!(m.transpose(), -m);
            assert_eq!(m * m, -DMatrix::<f64>::identity(2 * n, 2 * n));
            assert!((m.determinant() - 1.0).abs() < 1e-14);
        }
    }

    #[test]
    fn dynamical_matrix_oscillators() {
        let h = build_hamiltonian(1, DMatrix::identity(2, 2)).unwrap();
        assert_eq!(
            dynamical_matrix(&h).matrix(),
            &DMatrix::from_row_slice(2, 2, &[0.0, 1.0, -1.0, 0.0])
        );
        let w2 = 2.25;
        let h = build_hamiltonian(1, DMatrix::from_row_slice(2, 2, &[w2, 0.0, 0.0, 1.0])).unwrap();
        assert_eq!(
            dynamical_matrix(&h).matrix(),
            &DMatrix::from_row_slice(2, 2, &[0.0, 1.0, -w2, 0.0])
        );
    }

    #[test]
    fn characteristic_polynomial_of_rotation() {
        // λ² + 1
        let a = DMatrix::from_row_slice(2, 2, &[0.0, 1.0, -1.0, 0.0]);
        let c = characteristic_polynomial(&a);
        assert_eq!(c.len(), 3);
        assert!((c[0] - 1.0).abs() < 1e-15);
        assert!(c[1].abs() < 1e-15);
        assert!((c[2] - 1.0).abs() < 1e-15);
    }
}
