//! Exact pure-dephasing evolution of the two-qubit reduced state.
//!
//! Populations are conserved; each coherence `ρ_{m n}` picks up the free phase
//! `e^{−i(E_m − E_n)t}`, a Lamb-type phase `e^{−i(E_m² − E_n²)Q₁(t)}` and the
//! decay `e^{−(E_m − E_n)² Q₂(t)}`.

use nalgebra::Matrix4;

use crate::error::{Error, Result};
use crate::reservoir::{decay_from_q2, q1, q2, DecayFactors, ReservoirConfig};
use crate::state::{QubitPairConfig, TwoQubitDensity, XStateParams, C64, EIGEN_TOL};

/// Computational-basis label `(l_A, l_B)`; `0` is the excited state.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Level {
    pub a: u8,
    pub b: u8,
}

impl Level {
    pub const ALL: [Level; 4] = [
        Level { a: 0, b: 0 },
        Level { a: 0, b: 1 },
        Level { a: 1, b: 0 },
        Level { a: 1, b: 1 },
    ];

    pub fn index(self) -> usize {
        2 * self.a as usize + self.b as usize
    }

    /// `E(l_A, l_B) = [(−1)^{l_A} ω_A + (−1)^{l_B} ω_B] / 2`.
    pub fn energy(self, qubits: &QubitPairConfig) -> f64 {
        let sign = |l: u8| if l == 0 { 1.0 } else { -1.0 };
        0.5 * (sign(self.a) * qubits.omega_a() + sign(self.b) * qubits.omega_b())
    }
}

/// Row (bra) and column (ket) labels of a density-matrix element.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LevelPair {
    pub bra: Level,
    pub ket: Level,
}

impl LevelPair {
    pub fn new(bra: Level, ket: Level) -> Self {
        Self { bra, ket }
    }

    pub fn from_indices(row: usize, col: usize) -> Self {
        Self {
            bra: Level::ALL[row],
            ket: Level::ALL[col],
        }
    }
}

fn element_factor(pair: LevelPair, t: f64, qubits: &QubitPairConfig, q1: f64, q2: f64) -> C64 {
    let e_bra = pair.bra.energy(qubits);
    let e_ket = pair.ket.energy(qubits);
    let gap = e_bra - e_ket;
    let phase = -(e_bra * e_bra - e_ket * e_ket) * q1 - gap * t;
    C64::from_polar((-gap * gap * q2).exp(), phase)
}

/// Evolves a single matrix element from time 0 to `t`.
pub fn evolve_element(
    initial: C64,
    pair: LevelPair,
    t: f64,
    qubits: &QubitPairConfig,
    res: &ReservoirConfig,
) -> Result<C64> {
    let (q1, q2) = (q1(t, res)?, q2(t, res)?);
    Ok(initial * element_factor(pair, t, qubits, q1, q2))
}

/// Evolves every element of an arbitrary two-qubit state.
pub fn evolve_density(
    rho: &TwoQubitDensity,
    t: f64,
    qubits: &QubitPairConfig,
    res: &ReservoirConfig,
) -> Result<TwoQubitDensity> {
    let (q1, q2) = (q1(t, res)?, q2(t, res)?);
    let mut out = Matrix4::zeros();
    for row in 0..4 {
        for col in 0..4 {
            let pair = LevelPair::from_indices(row, col);
            out[(row, col)] = rho.entry(row, col) * element_factor(pair, t, qubits, q1, q2);
        }
    }
    // element factors of (m,n) and (n,m) are complex conjugates and diagonals are 1
    Ok(TwoQubitDensity::new_unchecked(out))
}

/// Time-t descriptor of an evolved X state.
///
/// `mu` and `nu` are four times the moduli (with sign) of the `|00⟩⟨11|` and
/// `|01⟩⟨10|` coherences; `delta1 = (ω_A+ω_B)t`, `delta2 = (ω_A−ω_B)t`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EvolvedXState {
    pub mu: f64,
    pub nu: f64,
    pub delta1: f64,
    pub delta2: f64,
    pub c3: f64,
    pub t: f64,
}

impl EvolvedXState {
    /// Builds a descriptor directly, checking positivity of the spectrum.
    pub fn new(mu: f64, nu: f64, delta1: f64, delta2: f64, c3: f64, t: f64) -> Result<Self> {
        let x = Self {
            mu,
            nu,
            delta1,
            delta2,
            c3,
            t,
        };
        if ![mu, nu, delta1, delta2, c3, t].iter().all(|v| v.is_finite()) {
            return Err(Error::InvalidState(format!("non-finite X-state descriptor {x:?}")));
        }
        for (index, value) in x.eigenvalues().into_iter().enumerate() {
            if value < -EIGEN_TOL {
                return Err(Error::NegativeEigenvalue { index, value });
            }
        }
        Ok(x)
    }

    /// Descriptor for given decay factors.
    pub fn from_decay(params: &XStateParams, decay: DecayFactors, t: f64, qubits: &QubitPairConfig) -> Self {
        Self {
            mu: params.outer_coherence() * decay.gamma1,
            nu: params.inner_coherence() * decay.gamma2,
            delta1: qubits.sum_frequency() * t,
            delta2: qubits.difference_frequency() * t,
            c3: params.c3(),
            t,
        }
    }

    /// `λ₁,₂ = (1+c₃∓μ)/4`, `λ₃,₄ = (1−c₃∓ν)/4`.
    pub fn eigenvalues(&self) -> [f64; 4] {
        [
            (1.0 + self.c3 - self.mu) / 4.0,
            (1.0 + self.c3 + self.mu) / 4.0,
            (1.0 - self.c3 - self.nu) / 4.0,
            (1.0 - self.c3 + self.nu) / 4.0,
        ]
    }
}

/// Evolves the X state `params` to time `t`.
pub fn evolve_x_state(
    params: &XStateParams,
    t: f64,
    qubits: &QubitPairConfig,
    res: &ReservoirConfig,
) -> Result<EvolvedXState> {
    let decay = decay_from_q2(q2(t, res)?, qubits);
    Ok(EvolvedXState::from_decay(params, decay, t, qubits))
}

/// Dense matrix of an evolved X state.
///
/// The upper-right coherences carry `e^{−iΔ}`, the free-evolution phase of the
/// element-wise law, so this agrees entry by entry with [`evolve_density`].
pub fn assemble_density(x: &EvolvedXState) -> TwoQubitDensity {
    let mut m = Matrix4::<C64>::zeros();
    let outer_pop = C64::new((1.0 + x.c3) / 4.0, 0.0);
    let inner_pop = C64::new((1.0 - x.c3) / 4.0, 0.0);
    m[(0, 0)] = outer_pop;
    m[(3, 3)] = outer_pop;
    m[(1, 1)] = inner_pop;
    m[(2, 2)] = inner_pop;
    let outer = C64::from_polar(x.mu / 4.0, -x.delta1);
    let inner = C64::from_polar(x.nu / 4.0, -x.delta2);
    m[(0, 3)] = outer;
    m[(3, 0)] = outer.conj();
    m[(1, 2)] = inner;
    m[(2, 1)] = inner.conj();
    TwoQubitDensity::new_unchecked(m)
}
