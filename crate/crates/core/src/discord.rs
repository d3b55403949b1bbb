//! Quantum discord of two-qubit states with projective measurements on qubit B.
//!
//! Two independent routes are provided:
//!
//! * [`discord_analytic`] uses the closed X-state pipeline: spectrum, mutual
//!   information with maximally mixed marginals, and a classical correlation
//!   fixed by `χ = max(|c₃|, (|μ|+|ν|)/2)`.
//! * [`discord_bruteforce`] builds the post-measurement states explicitly for
//!   a grid of bases `(θ, φ)`, refines around the best cell and minimizes the
//!   measured conditional entropy. It works for any two-qubit density matrix.

use std::f64::consts::{FRAC_PI_2, PI};

use nalgebra::Matrix2;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::evolution::EvolvedXState;
use crate::state::{
    binary_entropy, partial_trace, shannon_entropy, von_neumann_entropy, xlog2x, Subsystem, TwoQubitDensity, C64,
    EIGEN_TOL,
};

/// χ values this close to the branch point count as a tie.
pub const CHI_TIE_TOL: f64 = 1e-12;

/// Projective basis `{|θ∥⟩, |θ⊥⟩}` on qubit B with
/// `|θ∥⟩ = cos θ|0⟩ + e^{iφ} sin θ|1⟩` and `|θ⊥⟩ = e^{−iφ} sin θ|0⟩ − cos θ|1⟩`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MeasurementBasis {
    theta: f64,
    phi: f64,
}

impl MeasurementBasis {
    pub fn new(theta: f64, phi: f64) -> Result<Self> {
        if !(0.0..=FRAC_PI_2).contains(&theta) || !(0.0..2.0 * PI).contains(&phi) {
            return Err(Error::Domain(format!(
                "basis angles out of range: theta = {theta}, phi = {phi}"
            )));
        }
        Ok(Self { theta, phi })
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn phi(&self) -> f64 {
        self.phi
    }

    /// Components of `|θ∥⟩` and `|θ⊥⟩` in the `{|0⟩, |1⟩}` basis.
    pub fn states(&self) -> [[C64; 2]; 2] {
        let (s, c) = self.theta.sin_cos();
        let phase = C64::from_polar(1.0, self.phi);
        [[C64::new(c, 0.0), phase * s], [phase.conj() * s, C64::new(-c, 0.0)]]
    }

    /// Rank-1 projectors `|θ_k⟩⟨θ_k|`.
    pub fn projectors(&self) -> [Matrix2<C64>; 2] {
        self.states().map(|v| {
            Matrix2::new(
                v[0] * v[0].conj(),
                v[0] * v[1].conj(),
                v[1] * v[0].conj(),
                v[1] * v[1].conj(),
            )
        })
    }
}

/// One outcome of a measurement on B.
#[derive(Debug, Clone, PartialEq)]
pub struct MeasurementOutcome {
    pub probability: f64,
    /// Normalized conditional state of A (zero matrix if the outcome is impossible).
    pub conditional: Matrix2<C64>,
}

/// Measures qubit B of `rho` in `basis`, returning both outcomes.
pub fn measure_b(rho: &TwoQubitDensity, basis: &MeasurementBasis) -> [MeasurementOutcome; 2] {
    let m = rho.matrix();
    basis.states().map(|v| {
        let mut block = Matrix2::<C64>::zeros();
        for a in 0..2 {
            for a2 in 0..2 {
                let mut acc = C64::new(0.0, 0.0);
                for b in 0..2 {
                    for b2 in 0..2 {
                        acc += v[b].conj() * m[(2 * a + b, 2 * a2 + b2)] * v[b2];
                    }
                }
                block[(a, a2)] = acc;
            }
        }
        let probability = block.trace().re;
        let conditional = if probability > 0.0 {
            block / C64::new(probability, 0.0)
        } else {
            Matrix2::zeros()
        };
        MeasurementOutcome {
            probability,
            conditional,
        }
    })
}

/// `Σ_k p_k S(ρ_A^{(k)})` for a measurement on B.
pub fn conditional_entropy(rho: &TwoQubitDensity, basis: &MeasurementBasis) -> Result<f64> {
    let mut total = 0.0;
    for outcome in measure_b(rho, basis) {
        if outcome.probability > 0.0 {
            total += outcome.probability * von_neumann_entropy(&outcome.conditional)?;
        }
    }
    Ok(total)
}

/// Which branch of `χ` was active.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Regime {
    /// `(|μ|+|ν|)/2 > |c₃|`: the coherences dominate.
    BeforeCritic,
    /// `|c₃| ≥ (|μ|+|ν|)/2`.
    AfterCritic,
    /// The trajectory has no critic time.
    NoCritic,
}

impl Regime {
    pub fn label(&self) -> &'static str {
        match self {
            Regime::BeforeCritic => "before-critic",
            Regime::AfterCritic => "after-critic",
            Regime::NoCritic => "no-critic",
        }
    }
}

/// Caller knowledge about where the state sits relative to the critic time.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum CriticHint {
    Before,
    After,
    NoCritic,
    #[default]
    Unknown,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiscordBreakdown {
    pub mutual_information: f64,
    pub classical_correlation: f64,
    pub discord: f64,
    /// `max(|c₃|, (|μ|+|ν|)/2)`; only defined on the analytic X-state route.
    pub chi: Option<f64>,
    pub regime: Option<Regime>,
}

/// Spectrum of an evolved X state; rejects eigenvalues below `-EIGEN_TOL`.
pub fn x_state_eigenvalues(x: &EvolvedXState) -> Result<[f64; 4]> {
    let ev = x.eigenvalues();
    for (index, &value) in ev.iter().enumerate() {
        if value < -EIGEN_TOL {
            return Err(Error::NegativeEigenvalue { index, value });
        }
    }
    Ok(ev)
}

/// `I = 2 + Σ λᵢ log₂ λᵢ`.
pub fn mutual_information(x: &EvolvedXState) -> Result<f64> {
    Ok(2.0 - shannon_entropy(&x_state_eigenvalues(x)?)?)
}

/// Parameter `Λ(θ, φ)` whose binary entropy is the conditional entropy of either outcome.
pub fn lambda_param(basis: &MeasurementBasis, x: &EvolvedXState) -> f64 {
    let cos2 = (2.0 * basis.theta).cos();
    let sin2 = (2.0 * basis.theta).sin();
    let coherent = x.mu * x.mu + x.nu * x.nu + 2.0 * x.mu * x.nu * (x.delta2 - x.delta1 + 2.0 * basis.phi).cos();
    (x.c3 * x.c3 * cos2 * cos2 + 0.25 * coherent.max(0.0) * sin2 * sin2).sqrt()
}

/// Entropy of a qubit state with eigenvalues `(1 ± Λ)/2`.
pub fn conditional_entropy_of_lambda(lambda: f64) -> f64 {
    binary_entropy(0.5 * (1.0 + lambda))
}

/// `χ = max(|c₃|, (|μ|+|ν|)/2)`.
pub fn chi(x: &EvolvedXState) -> f64 {
    x.c3.abs().max(0.5 * (x.mu.abs() + x.nu.abs()))
}

/// Classical correlation of a state with the given χ.
pub fn classical_correlation_from_chi(chi: f64) -> Result<f64> {
    if !(0.0..=1.0 + EIGEN_TOL).contains(&chi) {
        return Err(Error::InvalidState(format!("chi = {chi} outside [0, 1]")));
    }
    let chi = chi.min(1.0);
    Ok(0.5 * (xlog2x(1.0 - chi) + xlog2x(1.0 + chi)))
}

/// `C = Σₙ [(1+(−1)ⁿχ)/2] log₂[1+(−1)ⁿχ]`.
pub fn classical_correlation(x: &EvolvedXState) -> Result<f64> {
    classical_correlation_from_chi(chi(x))
}

fn regime_of(x: &EvolvedXState, hint: CriticHint) -> Regime {
    if hint == CriticHint::NoCritic {
        return Regime::NoCritic;
    }
    let gap = 0.5 * (x.mu.abs() + x.nu.abs()) - x.c3.abs();
    if gap.abs() <= CHI_TIE_TOL {
        if hint == CriticHint::Before {
            Regime::BeforeCritic
        } else {
            Regime::AfterCritic
        }
    } else if gap > 0.0 {
        Regime::BeforeCritic
    } else {
        Regime::AfterCritic
    }
}

/// Discord of an evolved X state from the closed-form pipeline.
pub fn discord_analytic(x: &EvolvedXState, hint: CriticHint) -> Result<DiscordBreakdown> {
    let mutual_information = mutual_information(x)?;
    let chi = chi(x);
    let classical_correlation = classical_correlation_from_chi(chi)?;
    Ok(DiscordBreakdown {
        mutual_information,
        classical_correlation,
        discord: mutual_information - classical_correlation,
        chi: Some(chi),
        regime: Some(regime_of(x, hint)),
    })
}

/// Resolution of the measurement search.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MeasurementGrid {
    pub theta_points: usize,
    pub phi_points: usize,
    pub refinement_rounds: usize,
    pub refinement_factor: usize,
    /// Required change of the minimum between the last two rounds.
    pub convergence: f64,
}

impl Default for MeasurementGrid {
    fn default() -> Self {
        Self {
            theta_points: 64,
            phi_points: 128,
            refinement_rounds: 3,
            refinement_factor: 10,
            convergence: 1e-6,
        }
    }
}

impl MeasurementGrid {
    fn validate(&self) -> Result<()> {
        if self.theta_points < 64 || self.phi_points < 128 {
            return Err(Error::Domain(format!(
                "measurement grid {}x{} is coarser than the 64x128 minimum",
                self.theta_points, self.phi_points
            )));
        }
        if self.refinement_factor < 2 {
            return Err(Error::Domain("refinement factor must be at least 2".into()));
        }
        Ok(())
    }
}

/// Result of the brute-force measurement search.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BruteForceDiscord {
    pub breakdown: DiscordBreakdown,
    pub basis: MeasurementBasis,
    pub conditional_entropy: f64,
}

#[derive(Debug, Clone, Copy)]
struct Candidate {
    value: f64,
    theta: f64,
    phi: f64,
}

impl Candidate {
    /// Smaller value wins; ties go to smaller θ, then smaller φ.
    fn better_than(&self, other: &Candidate) -> bool {
        (self.value, self.theta, self.phi) < (other.value, other.theta, other.phi)
    }
}

fn best_of(candidates: impl IntoIterator<Item = Candidate>) -> Option<Candidate> {
    candidates.into_iter().fold(None, |best, c| match best {
        Some(b) if !c.better_than(&b) => Some(b),
        _ => Some(c),
    })
}

fn evaluate(rho: &TwoQubitDensity, theta: f64, phi: f64) -> Result<Candidate> {
    let basis = MeasurementBasis { theta, phi };
    Ok(Candidate {
        value: conditional_entropy(rho, &basis)?,
        theta,
        phi,
    })
}

fn search(rho: &TwoQubitDensity, thetas: &[f64], phis: &[f64]) -> Result<Candidate> {
    let rows: Vec<Result<Option<Candidate>>> = thetas
        .par_iter()
        .map(|&theta| {
            let row = phis
                .iter()
                .map(|&phi| evaluate(rho, theta, phi))
                .collect::<Result<Vec<_>>>()?;
            Ok(best_of(row))
        })
        .collect();
    let mut flat = Vec::with_capacity(rows.len());
    for row in rows {
        flat.extend(row?);
    }
    Ok(best_of(flat).expect("non-empty grid"))
}

/// Minimizes the measured conditional entropy over projective bases on B.
pub fn minimize_conditional_entropy(rho: &TwoQubitDensity, grid: &MeasurementGrid) -> Result<(MeasurementBasis, f64)> {
    grid.validate()?;
    let mut theta_step = FRAC_PI_2 / (grid.theta_points - 1) as f64;
    let mut phi_step = 2.0 * PI / grid.phi_points as f64;
    let thetas: Vec<f64> = (0..grid.theta_points).map(|i| i as f64 * theta_step).collect();
    let phis: Vec<f64> = (0..grid.phi_points).map(|j| j as f64 * phi_step).collect();
    let mut best = search(rho, &thetas, &phis)?;
    let mut last_change = f64::INFINITY;
    let factor = grid.refinement_factor as isize;
    for _ in 0..grid.refinement_rounds {
        theta_step /= grid.refinement_factor as f64;
        phi_step /= grid.refinement_factor as f64;
        let thetas: Vec<f64> = (-factor..=factor)
            .map(|k| best.theta + k as f64 * theta_step)
            .filter(|t| (0.0..=FRAC_PI_2).contains(t))
            .collect();
        let phis: Vec<f64> = (-factor..=factor)
            .map(|k| (best.phi + k as f64 * phi_step).rem_euclid(2.0 * PI))
            .collect();
        let round = search(rho, &thetas, &phis)?;
        let previous = best;
        if round.better_than(&best) {
            best = round;
        }
        last_change = previous.value - best.value;
    }
    if grid.refinement_rounds > 0 && (last_change.is_nan() || last_change >= grid.convergence) {
        return Err(Error::Refinement {
            best: best.value,
            theta: best.theta,
            phi: best.phi,
            last_change,
        });
    }
    Ok((
        MeasurementBasis {
            theta: best.theta,
            phi: best.phi,
        },
        best.value,
    ))
}

/// Discord of an arbitrary two-qubit state by explicit measurement search.
pub fn discord_bruteforce(rho: &TwoQubitDensity, grid: &MeasurementGrid) -> Result<BruteForceDiscord> {
    let (basis, conditional) = minimize_conditional_entropy(rho, grid)?;
    let s_a = von_neumann_entropy(&partial_trace(rho, Subsystem::A))?;
    let s_b = von_neumann_entropy(&partial_trace(rho, Subsystem::B))?;
    let s_ab = von_neumann_entropy(rho)?;
    let mutual_information = s_a + s_b - s_ab;
    let classical_correlation = s_a - conditional;
    Ok(BruteForceDiscord {
        breakdown: DiscordBreakdown {
            mutual_information,
            classical_correlation,
            discord: mutual_information - classical_correlation,
            chi: None,
            regime: None,
        },
        basis,
        conditional_entropy: conditional,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::evolution::assemble_density;
    use crate::state::{x_state_density, XStateParams};
    use approx::assert_abs_diff_eq;
    use nalgebra::Matrix4;

    fn x(mu: f64, nu: f64, c3: f64) -> EvolvedXState {
        EvolvedXState::new(mu, nu, 0.0, 0.0, c3, 0.0).unwrap()
    }

    #[test]
    fn eigenvalue_examples() {
        assert_eq!(x_state_eigenvalues(&x(0.0, 0.0, 0.0)).unwrap(), [0.25; 4]);
        assert_eq!(x_state_eigenvalues(&x(2.0, 0.0, 1.0)).unwrap(), [0.0, 1.0, 0.0, 0.0]);
        let ev = x_state_eigenvalues(&x(0.6, 0.6, 0.3)).unwrap();
        for (got, want) in ev.iter().zip([0.175, 0.475, 0.025, 0.325]) {
            assert_abs_diff_eq!(*got, want, epsilon = 1e-15);
        }
    }

    #[test]
    fn mutual_information_examples() {
        assert_abs_diff_eq!(mutual_information(&x(0.0, 0.0, 0.0)).unwrap(), 0.0);
        assert_abs_diff_eq!(mutual_information(&x(2.0, 0.0, 1.0)).unwrap(), 2.0);
        let h: f64 = [0.175f64, 0.475, 0.025, 0.325].iter().map(|p| -p * p.log2()).sum();
        assert_abs_diff_eq!(mutual_information(&x(0.6, 0.6, 0.3)).unwrap(), 2.0 - h, epsilon = 1e-14);
    }

    #[test]
    fn lambda_examples() {
        let s = EvolvedXState::new(0.5, 0.3, 0.7, 0.2, -0.4, 1.0).unwrap();
        assert_abs_diff_eq!(
            lambda_param(&MeasurementBasis::new(0.0, 1.0).unwrap(), &s),
            0.4,
            epsilon = 1e-15
        );
        // cos(Δ₂ − Δ₁ + 2φ) = 1 at φ = (Δ₁ − Δ₂)/2
        let phi = 0.5 * (s.delta1 - s.delta2);
        let at = lambda_param(&MeasurementBasis::new(PI / 4.0, phi).unwrap(), &s);
        assert_abs_diff_eq!(at, 0.4, epsilon = 1e-15);
        let zero = EvolvedXState::new(0.0, 0.0, 0.0, 0.0, 0.6, 0.0).unwrap();
        let b = MeasurementBasis::new(0.3, 0.0).unwrap();
        assert_abs_diff_eq!(lambda_param(&b, &zero), (0.6 * (0.6f64).cos()).abs(), epsilon = 1e-15);
    }

    #[test]
    fn chi_examples() {
        assert_eq!(chi(&x(0.3, 0.3, 0.5)), 0.5);
        assert_abs_diff_eq!(chi(&x(0.6, 0.6, 0.3)), 0.6);
        assert_eq!(chi(&x(0.0, 0.0, 0.0)), 0.0);
    }

    #[test]
    fn classical_correlation_examples() {
        assert_eq!(classical_correlation_from_chi(0.0).unwrap(), 0.0);
        assert_eq!(classical_correlation_from_chi(1.0).unwrap(), 1.0);
        assert_abs_diff_eq!(
            classical_correlation_from_chi(0.6).unwrap(),
            0.278_071_905_112_637_65,
            epsilon = 1e-15
        );
        assert!(classical_correlation_from_chi(1.1).is_err());
    }

    #[test]
    fn analytic_examples() {
        let bell = discord_analytic(&x(2.0, 0.0, 1.0), CriticHint::Unknown).unwrap();
        assert_abs_diff_eq!(bell.discord, 1.0, epsilon = 1e-15);
        let zero = discord_analytic(&x(0.0, 0.0, 0.0), CriticHint::Unknown).unwrap();
        assert_eq!(zero.discord, 0.0);
        // initial discord of the 2c₃ = c₁ family at c₁ = 0.6, frozen from a 30-digit evaluation
        let d0 = discord_analytic(&x(0.6, 0.6, 0.3), CriticHint::Unknown).unwrap();
        assert_abs_diff_eq!(d0.discord, 0.111_695_588_641_638_78, epsilon = 1e-14);
        assert_eq!(d0.regime, Some(Regime::BeforeCritic));
    }

    #[test]
    fn regime_labels() {
        let tie = x(0.3, 0.3, 0.3);
        assert_eq!(regime_of(&tie, CriticHint::Unknown), Regime::AfterCritic);
        assert_eq!(regime_of(&tie, CriticHint::Before), Regime::BeforeCritic);
        assert_eq!(regime_of(&x(0.1, 0.1, 0.3), CriticHint::Before), Regime::AfterCritic);
        assert_eq!(regime_of(&x(0.1, 0.1, 0.3), CriticHint::NoCritic), Regime::NoCritic);
    }

    #[test]
    fn projectors_complete() {
        let b = MeasurementBasis::new(0.7, 4.0).unwrap();
        let [p, q] = b.projectors();
        assert_abs_diff_eq!((p + q - Matrix2::identity()).norm(), 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!((p * q).norm(), 0.0, epsilon = 1e-15);
        assert!(MeasurementBasis::new(2.0, 0.0).is_err());
        assert!(MeasurementBasis::new(0.0, 2.0 * PI).is_err());
    }

    #[test]
    fn x_state_outcomes_are_even() {
        let s = EvolvedXState::new(0.5, -0.3, 1.1, 0.4, 0.2, 1.0).unwrap();
        let rho = assemble_density(&s);
        for (theta, phi) in [(0.0, 0.0), (0.4, 1.0), (PI / 4.0, 5.0), (FRAC_PI_2, 3.0)] {
            let basis = MeasurementBasis::new(theta, phi).unwrap();
            let [par, perp] = measure_b(&rho, &basis);
            assert_abs_diff_eq!(par.probability, 0.5, epsilon = 1e-12);
            assert_abs_diff_eq!(perp.probability, 0.5, epsilon = 1e-12);
            let s_par = von_neumann_entropy(&par.conditional).unwrap();
            let s_perp = von_neumann_entropy(&perp.conditional).unwrap();
            assert_abs_diff_eq!(s_par, s_perp, epsilon = 1e-12);
            let from_lambda = conditional_entropy_of_lambda(lambda_param(&basis, &s));
            assert_abs_diff_eq!(s_par, from_lambda, epsilon = 1e-12);
        }
    }

    #[test]
    fn bruteforce_bell_and_product() {
        let bell = x_state_density(&XStateParams::new(1.0, -1.0, 1.0).unwrap());
        let d = discord_bruteforce(&bell, &MeasurementGrid::default()).unwrap();
        assert_abs_diff_eq!(d.breakdown.discord, 1.0, epsilon = 1e-6);

        let mut m = Matrix4::<C64>::zeros();
        // diag(p) ⊗ diag(q) with p = (0.7, 0.3), q = (0.2, 0.8)
        for (i, w) in [0.14, 0.56, 0.06, 0.24].into_iter().enumerate() {
            m[(i, i)] = C64::new(w, 0.0);
        }
        let product = TwoQubitDensity::new(m).unwrap();
        let d = discord_bruteforce(&product, &MeasurementGrid::default()).unwrap();
        assert_abs_diff_eq!(d.breakdown.discord, 0.0, epsilon = 1e-9);
    }

    #[test]
    fn coarse_grid_rejected() {
        let rho = x_state_density(&XStateParams::new(0.2, 0.1, 0.0).unwrap());
        let grid = MeasurementGrid {
            theta_points: 16,
            ..MeasurementGrid::default()
        };
        assert!(matches!(discord_bruteforce(&rho, &grid), Err(Error::Domain(_))));
    }

    #[test]
    fn unrefined_search_reports_best_so_far() {
        let rho = x_state_density(&XStateParams::new(0.5, 0.1, 0.2).unwrap());
        let grid = MeasurementGrid {
            refinement_rounds: 1,
            convergence: 0.0,
            ..MeasurementGrid::default()
        };
        match discord_bruteforce(&rho, &grid) {
            Err(Error::Refinement { best, .. }) => assert!(best > 0.0 && best < 1.0),
            other => panic!("expected refinement error, got {other:?}"),
        }
    }
}
