//! Two-qubit state types and small density-matrix utilities.
//!
//! Basis order is fixed as `|00⟩, |01⟩, |10⟩, |11⟩`, with the first label
//! belonging to qubit A. All entropies are in bits.

use std::f64::consts::LN_2;
use std::fmt;

use nalgebra::{Complex, Matrix2, Matrix4};

use crate::error::{Error, Result};

pub type C64 = Complex<f64>;

/// Tolerance for Hermiticity and unit trace.
pub const STRUCTURE_TOL: f64 = 1e-12;
/// Eigenvalues in `[-EIGEN_TOL, 0)` are clipped to zero.
pub const EIGEN_TOL: f64 = 1e-10;

/// `x log₂ x` with the continuous extension `0 log₂ 0 = 0`.
pub fn xlog2x(x: f64) -> f64 {
    if x <= 0.0 {
        0.0
    } else {
        x * x.log2()
    }
}

/// Binary entropy `h₂(p)` in bits.
pub fn binary_entropy(p: f64) -> f64 {
    -xlog2x(p) - xlog2x(1.0 - p)
}

/// Shannon entropy of a probability vector after clipping tiny negatives.
///
/// Weights below `-EIGEN_TOL` are rejected.
pub fn shannon_entropy(weights: &[f64]) -> Result<f64> {
    let mut s = 0.0;
    for (index, &w) in weights.iter().enumerate() {
        if w < -EIGEN_TOL {
            return Err(Error::NegativeEigenvalue { index, value: w });
        }
        s -= xlog2x(w.max(0.0));
    }
    Ok(s)
}

/// The three Bloch-correlation parameters `(c₁, c₂, c₃)` of a maximally-mixed-marginal X state
/// `ρ = ¼(I + Σ cᵢ σᵢ⊗σᵢ)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct XStateParams {
    c1: f64,
    c2: f64,
    c3: f64,
}

impl XStateParams {
    pub fn new(c1: f64, c2: f64, c3: f64) -> Result<Self> {
        for (name, c) in [("c1", c1), ("c2", c2), ("c3", c3)] {
            if !c.is_finite() || c.abs() > 1.0 {
                return Err(Error::InvalidState(format!("{name} = {c} must satisfy |{name}| <= 1")));
            }
        }
        let params = Self { c1, c2, c3 };
        for (index, value) in params.initial_eigenvalues().into_iter().enumerate() {
            if value < -EIGEN_TOL {
                return Err(Error::InvalidState(format!(
                    "positivity violated for (c1, c2, c3) = ({c1}, {c2}, {c3}): eigenvalue {index} is {value:e}"
                )));
            }
        }
        Ok(params)
    }

    pub fn c1(&self) -> f64 {
        self.c1
    }

    pub fn c2(&self) -> f64 {
        self.c2
    }

    pub fn c3(&self) -> f64 {
        self.c3
    }

    /// Amplitude of the `|00⟩⟨11|` coherence at t = 0, times 4.
    pub fn outer_coherence(&self) -> f64 {
        self.c1 - self.c2
    }

    /// Amplitude of the `|01⟩⟨10|` coherence at t = 0, times 4.
    pub fn inner_coherence(&self) -> f64 {
        self.c1 + self.c2
    }

    /// Spectrum `(1+c₃∓(c₁−c₂))/4, (1−c₃∓(c₁+c₂))/4`.
    pub fn initial_eigenvalues(&self) -> [f64; 4] {
        let (c1, c2, c3) = (self.c1, self.c2, self.c3);
        [
            (1.0 + c3 - (c1 - c2)) / 4.0,
            (1.0 + c3 + (c1 - c2)) / 4.0,
            (1.0 - c3 - (c1 + c2)) / 4.0,
            (1.0 - c3 + (c1 + c2)) / 4.0,
        ]
    }
}

impl fmt::Display for XStateParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(c1, c2, c3) = ({}, {}, {})", self.c1, self.c2, self.c3)
    }
}

/// Frequencies of the two qubits.
///
/// The large-detuning limit is represented as `ω_B → 0` with ω_A fixed, in which
/// both coherences decay with the same factor and `r = ∞`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QubitPairConfig {
    omega_a: f64,
    omega_b: f64,
    limit: bool,
}

impl QubitPairConfig {
    pub fn new(omega_a: f64, omega_b: f64) -> Result<Self> {
        if !(omega_a > 0.0 && omega_a.is_finite()) || !(omega_b > 0.0 && omega_b.is_finite()) {
            return Err(Error::Domain(format!(
                "qubit frequencies must be positive and finite, got omega_A = {omega_a}, omega_B = {omega_b}"
            )));
        }
        Ok(Self {
            omega_a,
            omega_b,
            limit: false,
        })
    }

    /// Two identical qubits with frequency Ω.
    pub fn identical(omega: f64) -> Result<Self> {
        Self::new(omega, omega)
    }

    /// Qubit B at `omega_b`, qubit A at `r · omega_b`.
    pub fn with_detuning(r: f64, omega_b: f64) -> Result<Self> {
        Self::new(r * omega_b, omega_b)
    }

    /// Exact `r → ∞` limit at fixed ω_A.
    pub fn large_detuning_limit(omega_a: f64) -> Result<Self> {
        if !(omega_a > 0.0 && omega_a.is_finite()) {
            return Err(Error::Domain(format!(
                "omega_A must be positive and finite, got {omega_a}"
            )));
        }
        Ok(Self {
            omega_a,
            omega_b: 0.0,
            limit: true,
        })
    }

    pub fn omega_a(&self) -> f64 {
        self.omega_a
    }

    /// Zero in the large-detuning limit.
    pub fn omega_b(&self) -> f64 {
        self.omega_b
    }

    pub fn is_large_detuning_limit(&self) -> bool {
        self.limit
    }

    /// `r = ω_A / ω_B`; infinite in the large-detuning limit.
    pub fn detuning(&self) -> f64 {
        if self.limit {
            f64::INFINITY
        } else {
            self.omega_a / self.omega_b
        }
    }

    pub fn is_resonant(&self) -> bool {
        !self.limit && self.omega_a == self.omega_b
    }

    pub fn sum_frequency(&self) -> f64 {
        self.omega_a + self.omega_b
    }

    pub fn difference_frequency(&self) -> f64 {
        self.omega_a - self.omega_b
    }

    /// Exponent `k = ((r−1)/(r+1))²` relating the two decay factors, `γ₂ = γ₁ᵏ`.
    pub fn decay_exponent(&self) -> f64 {
        let ratio = self.difference_frequency() / self.sum_frequency();
        ratio * ratio
    }
}

/// Which qubit a reduced state belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Subsystem {
    A,
    B,
}

/// A valid two-qubit density matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct TwoQubitDensity {
    matrix: Matrix4<C64>,
}

impl TwoQubitDensity {
    /// Validates Hermiticity, unit trace and positivity.
    pub fn new(matrix: Matrix4<C64>) -> Result<Self> {
        for i in 0..4 {
            for j in i..4 {
                let diff = (matrix[(i, j)] - matrix[(j, i)].conj()).norm();
                if diff > STRUCTURE_TOL {
                    return Err(Error::InvalidState(format!(
                        "not Hermitian: entry ({i}, {j}) differs from conjugate transpose by {diff:e}"
                    )));
                }
            }
        }
        let trace = matrix.trace();
        if (trace.re - 1.0).abs() > STRUCTURE_TOL || trace.im.abs() > STRUCTURE_TOL {
            return Err(Error::InvalidState(format!("trace is {trace}, expected 1")));
        }
        let rho = Self { matrix };
        let spectrum = rho.raw_eigenvalues();
        for (index, &value) in spectrum.iter().enumerate() {
            if value < -EIGEN_TOL {
                return Err(Error::NegativeEigenvalue { index, value });
            }
        }
        Ok(rho)
    }

    pub(crate) fn new_unchecked(matrix: Matrix4<C64>) -> Self {
        Self { matrix }
    }

    pub fn matrix(&self) -> &Matrix4<C64> {
        &self.matrix
    }

    pub fn entry(&self, row: usize, col: usize) -> C64 {
        self.matrix[(row, col)]
    }

    /// True when only the diagonal and anti-diagonal are populated.
    pub fn is_x_shaped(&self) -> bool {
        (0..4).all(|i| (0..4).all(|j| i == j || i + j == 3 || self.matrix[(i, j)].norm() == 0.0))
    }

    fn raw_eigenvalues(&self) -> [f64; 4] {
        let m = &self.matrix;
        if self.is_x_shaped() {
            let (a1, a2) = hermitian_pair_spectrum(m[(0, 0)].re, m[(3, 3)].re, m[(0, 3)]);
            let (b1, b2) = hermitian_pair_spectrum(m[(1, 1)].re, m[(2, 2)].re, m[(1, 2)]);
            [a1, a2, b1, b2]
        } else {
            let ev = m.symmetric_eigenvalues();
            [ev[0], ev[1], ev[2], ev[3]]
        }
    }

    /// Eigenvalues with tiny negatives clipped to zero.
    pub fn eigenvalues(&self) -> [f64; 4] {
        self.raw_eigenvalues().map(|v| v.max(0.0))
    }
}

/// Eigenvalues of `[[a, z], [z*, d]]`, ascending.
fn hermitian_pair_spectrum(a: f64, d: f64, z: C64) -> (f64, f64) {
    let mean = 0.5 * (a + d);
    let half_gap = (0.25 * (a - d) * (a - d) + z.norm_sqr()).sqrt();
    (mean - half_gap, mean + half_gap)
}

/// Reduced state of one qubit.
pub fn partial_trace(rho: &TwoQubitDensity, keep: Subsystem) -> Matrix2<C64> {
    let m = rho.matrix();
    let mut out = Matrix2::zeros();
    for i in 0..2 {
        for j in 0..2 {
            out[(i, j)] = match keep {
                // index = 2·l_A + l_B
                Subsystem::A => m[(2 * i, 2 * j)] + m[(2 * i + 1, 2 * j + 1)],
                Subsystem::B => m[(i, j)] + m[(2 + i, 2 + j)],
            };
        }
    }
    out
}

/// Hermitian operators whose spectrum can be computed for entropy evaluation.
pub trait DensityOperator {
    fn spectrum(&self) -> Vec<f64>;
}

impl DensityOperator for Matrix2<C64> {
    fn spectrum(&self) -> Vec<f64> {
        let (lo, hi) = hermitian_pair_spectrum(self[(0, 0)].re, self[(1, 1)].re, self[(0, 1)]);
        vec![lo, hi]
    }
}

impl DensityOperator for Matrix4<C64> {
    fn spectrum(&self) -> Vec<f64> {
        self.symmetric_eigenvalues().iter().copied().collect()
    }
}

impl DensityOperator for TwoQubitDensity {
    fn spectrum(&self) -> Vec<f64> {
        self.raw_eigenvalues().to_vec()
    }
}

/// `S(ρ) = −Tr ρ log₂ ρ`.
pub fn von_neumann_entropy<M: DensityOperator + ?Sized>(matrix: &M) -> Result<f64> {
    shannon_entropy(&matrix.spectrum())
}

/// Natural-log form of the entropy, occasionally handy for checks.
pub fn von_neumann_entropy_nats<M: DensityOperator + ?Sized>(matrix: &M) -> Result<f64> {
    Ok(von_neumann_entropy(matrix)? * LN_2)
}

/// The X-state density matrix `¼(I + Σ cᵢ σᵢ⊗σᵢ)`.
pub fn x_state_density(params: &XStateParams) -> TwoQubitDensity {
    let (c1, c2, c3) = (params.c1(), params.c2(), params.c3());
    let mut m = Matrix4::<C64>::zeros();
    m[(0, 0)] = C64::new((1.0 + c3) / 4.0, 0.0);
    m[(3, 3)] = C64::new((1.0 + c3) / 4.0, 0.0);
    m[(1, 1)] = C64::new((1.0 - c3) / 4.0, 0.0);
    m[(2, 2)] = C64::new((1.0 - c3) / 4.0, 0.0);
    let outer = C64::new((c1 - c2) / 4.0, 0.0);
    let inner = C64::new((c1 + c2) / 4.0, 0.0);
    m[(0, 3)] = outer;
    m[(3, 0)] = outer;
    m[(1, 2)] = inner;
    m[(2, 1)] = inner;
    // XStateParams already enforces positivity.
    TwoQubitDensity::new_unchecked(m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn c(re: f64) -> C64 {
        C64::new(re, 0.0)
    }

    #[test]
    fn maximally_mixed() {
        let rho = x_state_density(&XStateParams::new(0.0, 0.0, 0.0).unwrap());
        assert_eq!(*rho.matrix(), Matrix4::identity() * c(0.25));
        assert_abs_diff_eq!(von_neumann_entropy(&rho).unwrap(), 2.0, epsilon = 1e-14);
    }

    #[test]
    fn bell_projector() {
        let rho = x_state_density(&XStateParams::new(1.0, -1.0, 1.0).unwrap());
        let mut expected = Matrix4::<C64>::zeros();
        for (i, j) in [(0, 0), (0, 3), (3, 0), (3, 3)] {
            expected[(i, j)] = c(0.5);
        }
        assert_eq!(*rho.matrix(), expected);
        assert_abs_diff_eq!(von_neumann_entropy(&rho).unwrap(), 0.0, epsilon = 1e-14);
        let reduced = partial_trace(&rho, Subsystem::B);
        assert_abs_diff_eq!(reduced[(0, 0)].re, 0.5, epsilon = 1e-15);
        assert_abs_diff_eq!(reduced[(0, 1)].norm(), 0.0, epsilon = 1e-15);
    }

    #[test]
    fn sample_state_entries() {
        let rho = x_state_density(&XStateParams::new(0.6, 0.0, 0.3).unwrap());
        let diag: Vec<f64> = (0..4).map(|i| rho.entry(i, i).re).collect();
        for (got, want) in diag.iter().zip([0.325, 0.175, 0.175, 0.325]) {
            assert_abs_diff_eq!(*got, want, epsilon = 1e-15);
        }
        assert_abs_diff_eq!(rho.entry(0, 3).re, 0.15, epsilon = 1e-15);
        assert_abs_diff_eq!(rho.entry(1, 2).re, 0.15, epsilon = 1e-15);
    }

    #[test]
    fn rejects_non_positive_params() {
        let err = XStateParams::new(1.0, 1.0, 1.0).unwrap_err();
        assert!(matches!(err, Error::InvalidState(ref m) if m.contains("positivity")));
        assert!(XStateParams::new(1.5, 0.0, 0.0).is_err());
        assert!(XStateParams::new(f64::NAN, 0.0, 0.0).is_err());
    }

    #[test]
    fn rejects_invalid_matrices() {
        let mut m = Matrix4::<C64>::identity() * c(0.25);
        m[(0, 1)] = C64::new(0.0, 0.1);
        assert!(matches!(TwoQubitDensity::new(m), Err(Error::InvalidState(_))));

        let m = Matrix4::<C64>::identity() * c(0.3);
        assert!(matches!(TwoQubitDensity::new(m), Err(Error::InvalidState(_))));

        let mut m = Matrix4::<C64>::zeros();
        m[(0, 0)] = c(1.2);
        m[(1, 1)] = c(-0.2);
        assert!(matches!(TwoQubitDensity::new(m), Err(Error::NegativeEigenvalue { .. })));
    }

    #[test]
    fn single_qubit_entropy() {
        let half = Matrix2::<C64>::identity() * c(0.5);
        assert_abs_diff_eq!(von_neumann_entropy(&half).unwrap(), 1.0, epsilon = 1e-15);
        let pure = Matrix2::new(c(0.5), c(0.5), c(0.5), c(0.5));
        assert_abs_diff_eq!(von_neumann_entropy(&pure).unwrap(), 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!(von_neumann_entropy_nats(&half).unwrap(), LN_2, epsilon = 1e-15);
    }

    #[test]
    fn negative_weight_reported() {
        let err = shannon_entropy(&[0.5, 0.6, -0.1]).unwrap_err();
        assert_eq!(err, Error::NegativeEigenvalue { index: 2, value: -0.1 });
        assert_abs_diff_eq!(shannon_entropy(&[1.0, -1e-12]).unwrap(), 0.0);
    }

    #[test]
    fn dense_and_x_paths_agree() {
        let rho = x_state_density(&XStateParams::new(0.6, -0.2, 0.3).unwrap());
        let mut x = rho.eigenvalues().to_vec();
        let mut dense: Vec<f64> = rho.matrix().spectrum();
        x.sort_by(f64::total_cmp);
        dense.sort_by(f64::total_cmp);
        for (a, b) in x.iter().zip(&dense) {
            assert_abs_diff_eq!(a, b, epsilon = 1e-14);
        }
    }

    #[test]
    fn detuning() {
        let q = QubitPairConfig::with_detuning(2.0, 1.5).unwrap();
        assert_eq!(q.omega_a(), 3.0);
        assert_eq!(q.detuning(), 2.0);
        assert_abs_diff_eq!(q.decay_exponent(), 1.0 / 9.0, epsilon = 1e-15);
        assert!(QubitPairConfig::identical(1.0).unwrap().is_resonant());
        let lim = QubitPairConfig::large_detuning_limit(1.0).unwrap();
        assert!(lim.detuning().is_infinite());
        assert_eq!(lim.decay_exponent(), 1.0);
        assert!(QubitPairConfig::new(0.0, 1.0).is_err());
    }
}
