//! Ohmic heat bath: spectral weight, the reservoir functions Q₁(t), Q₂(t) and
//! the coherence decay factors γ₁, γ₂.
//!
//! Integrals are evaluated in the dimensionless frequency `x = ω/ω_c`, with
//! `τ = ω_c t` and `b = β ω_c`:
//!
//! ```text
//! Q₁(t) = η ∫₀^∞ e^{-x} sin(xτ) / x dx
//! Q₂(t) = 2η ∫₀^∞ e^{-x} sin²(xτ/2) coth(bx/2) / x dx
//! ```
//!
//! At zero temperature `coth → 1` and both integrals have elementary closed
//! forms, `η·atan τ` and `(η/2)·ln(1 + τ²)`. At finite temperature Q₂ is split
//! into the zero-temperature closed form plus a thermal excess
//! `4η ∫ e^{-x} sin²(xτ/2) / (x (e^{bx} − 1)) dx` that is integrated
//! numerically.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::quadrature::{integrate, uniform_breakpoints, Tolerance};
use crate::state::QubitPairConfig;

/// Upper integration limit in units of ω_c; `e^{-40}` is below any tolerance we use.
const CUTOFF_SPAN: f64 = 40.0;
const MAX_SEGMENTS: usize = 2_000_000;

/// How Q₂ is evaluated at finite temperature.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Q2Model {
    /// Quadrature of the exact integral (closed form at T = 0).
    #[default]
    Exact,
    /// The low-temperature closed form `η{½ln[1+(ω_c t)²] + ln[(β/πt) sinh(πt/β)]}`.
    LowTemperature,
}

/// Ohmic bath parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReservoirConfig {
    eta: f64,
    omega_c: f64,
    temperature: f64,
    q2_model: Q2Model,
    tolerance: Tolerance,
}

impl ReservoirConfig {
    pub fn new(eta: f64, omega_c: f64, temperature: f64) -> Result<Self> {
        if !(eta > 0.0 && eta.is_finite()) {
            return Err(Error::Domain(format!("eta must be positive, got {eta}")));
        }
        if !(omega_c > 0.0 && omega_c.is_finite()) {
            return Err(Error::Domain(format!("omega_c must be positive, got {omega_c}")));
        }
        if !(temperature >= 0.0 && temperature.is_finite()) {
            return Err(Error::Domain(format!("temperature must be >= 0, got {temperature}")));
        }
        Ok(Self {
            eta,
            omega_c,
            temperature,
            q2_model: Q2Model::Exact,
            tolerance: Tolerance::default(),
        })
    }

    pub fn zero_temperature(eta: f64, omega_c: f64) -> Result<Self> {
        Self::new(eta, omega_c, 0.0)
    }

    pub fn with_q2_model(mut self, model: Q2Model) -> Self {
        self.q2_model = model;
        self
    }

    pub fn with_tolerance(mut self, tolerance: Tolerance) -> Self {
        self.tolerance = tolerance;
        self
    }

    pub fn eta(&self) -> f64 {
        self.eta
    }

    pub fn omega_c(&self) -> f64 {
        self.omega_c
    }

    pub fn temperature(&self) -> f64 {
        self.temperature
    }

    pub fn q2_model(&self) -> Q2Model {
        self.q2_model
    }

    pub fn tolerance(&self) -> Tolerance {
        self.tolerance
    }

    pub fn is_zero_temperature(&self) -> bool {
        self.temperature == 0.0
    }

    /// `β = 1/T`, infinite at T = 0.
    pub fn beta(&self) -> f64 {
        if self.is_zero_temperature() {
            f64::INFINITY
        } else {
            1.0 / self.temperature
        }
    }

    fn scaled_beta(&self) -> f64 {
        self.beta() * self.omega_c
    }
}

/// Coherence decay factors of the `|00⟩⟨11|` and `|01⟩⟨10|` elements.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DecayFactors {
    pub gamma1: f64,
    pub gamma2: f64,
}

/// The combined weight `J(ω) g²(ω) = η ω e^{−ω/ω_c}`.
pub fn spectral_weight(omega: f64, res: &ReservoirConfig) -> f64 {
    res.eta * omega * (-omega / res.omega_c).exp()
}

fn check_time(t: f64) -> Result<()> {
    if t >= 0.0 && t.is_finite() {
        Ok(())
    } else {
        Err(Error::Domain(format!("time must be finite and >= 0, got {t}")))
    }
}

/// Partition of `[0, span]` fine enough to resolve oscillations of frequency `tau`.
fn oscillation_breakpoints(span: f64, tau: f64) -> Vec<f64> {
    let width = if tau > 0.0 {
        (PI / tau).min(span / 4.0)
    } else {
        span / 4.0
    };
    uniform_breakpoints(0.0, span, width)
}

/// `Q₁(t) = η·atan(ω_c t)`.
pub fn q1(t: f64, res: &ReservoirConfig) -> Result<f64> {
    check_time(t)?;
    Ok(res.eta * (res.omega_c * t).atan())
}

/// Q₁ by direct quadrature of the spectral integral.
pub fn q1_quadrature(t: f64, res: &ReservoirConfig) -> Result<f64> {
    check_time(t)?;
    let tau = res.omega_c * t;
    if tau == 0.0 {
        return Ok(0.0);
    }
    let integrand = |x: f64| (-x).exp() * sinc_scaled(x, tau);
    let bp = oscillation_breakpoints(CUTOFF_SPAN, tau);
    let r = integrate(integrand, &bp, scaled(res.tolerance, res.eta), MAX_SEGMENTS)?;
    Ok(res.eta * r.value)
}

/// `sin(xτ)/x`, continuous at x = 0.
fn sinc_scaled(x: f64, tau: f64) -> f64 {
    if x == 0.0 {
        tau
    } else {
        (x * tau).sin() / x
    }
}

/// `2 sin²(xτ/2)/x`, continuous at x = 0.
fn dephasing_kernel(x: f64, tau: f64) -> f64 {
    if x == 0.0 {
        0.0
    } else {
        let s = (0.5 * x * tau).sin();
        2.0 * s * s / x
    }
}

/// Rescales a tolerance on `η·I` to a tolerance on `I`.
fn scaled(tol: Tolerance, eta: f64) -> Tolerance {
    Tolerance {
        abs: tol.abs / eta,
        rel: tol.rel,
    }
}

/// Zero-temperature Q₂, `(η/2)·ln(1 + (ω_c t)²)`.
pub fn q2_zero_temperature(t: f64, res: &ReservoirConfig) -> f64 {
    let tau = res.omega_c * t;
    0.5 * res.eta * (tau * tau).ln_1p()
}

/// Q₂(t) according to the configured model.
pub fn q2(t: f64, res: &ReservoirConfig) -> Result<f64> {
    check_time(t)?;
    if res.is_zero_temperature() {
        return Ok(q2_zero_temperature(t, res));
    }
    match res.q2_model {
        Q2Model::Exact => Ok(q2_zero_temperature(t, res) + q2_thermal_excess(t, res)?),
        Q2Model::LowTemperature => q2_low_temperature(t, res),
    }
}

/// `4η ∫ e^{-x} sin²(xτ/2) / (x (e^{bx} − 1)) dx`, the part of Q₂ carried by thermal occupation.
fn q2_thermal_excess(t: f64, res: &ReservoirConfig) -> Result<f64> {
    let tau = res.omega_c * t;
    let b = res.scaled_beta();
    if tau == 0.0 || b.is_infinite() {
        return Ok(0.0);
    }
    let span = CUTOFF_SPAN / (1.0 + b);
    let integrand = |x: f64| {
        if x == 0.0 {
            // limit of 2 sin²(xτ/2)/x · 2/(e^{bx}−1) is τ²/b
            tau * tau / b
        } else {
            (-x).exp() * dephasing_kernel(x, tau) * 2.0 / (b * x).exp_m1()
        }
    };
    let bp = oscillation_breakpoints(span, tau);
    let r = integrate(integrand, &bp, scaled(res.tolerance, res.eta), MAX_SEGMENTS)?;
    Ok(res.eta * r.value)
}

/// Q₂ by direct quadrature of the full spectral integral, including at T = 0.
pub fn q2_quadrature(t: f64, res: &ReservoirConfig) -> Result<f64> {
    check_time(t)?;
    let tau = res.omega_c * t;
    if tau == 0.0 {
        return Ok(0.0);
    }
    let b = res.scaled_beta();
    let integrand = |x: f64| {
        let thermal = if b.is_infinite() {
            1.0
        } else if x == 0.0 {
            return tau * tau / b;
        } else {
            1.0 / (0.5 * b * x).tanh()
        };
        (-x).exp() * dephasing_kernel(x, tau) * thermal
    };
    let bp = oscillation_breakpoints(CUTOFF_SPAN, tau);
    let r = integrate(integrand, &bp, scaled(res.tolerance, res.eta), MAX_SEGMENTS)?;
    Ok(res.eta * r.value)
}

/// `ln(sinh y / y)` without overflow, 0 at y = 0.
fn ln_sinhc(y: f64) -> f64 {
    if y < 1e-4 {
        let y2 = y * y;
        y2 / 6.0 - y2 * y2 / 180.0
    } else if y < 20.0 {
        (y.sinh() / y).ln()
    } else {
        y - std::f64::consts::LN_2 - y.ln() + (-(-2.0 * y).exp()).ln_1p()
    }
}

/// `coth y − 1/y`, 0 at y = 0.
fn langevin(y: f64) -> f64 {
    if y < 1e-4 {
        y / 3.0 - y * y * y / 45.0
    } else {
        1.0 / y.tanh() - 1.0 / y
    }
}

/// The low-temperature closed form of Q₂.
pub fn q2_low_temperature(t: f64, res: &ReservoirConfig) -> Result<f64> {
    check_time(t)?;
    let thermal = if res.is_zero_temperature() {
        0.0
    } else {
        ln_sinhc(PI * t / res.beta())
    };
    Ok(q2_zero_temperature(t, res) + res.eta * thermal)
}

/// `dQ₂/dt = η ω_c ∫ e^{-x} sin(xτ) coth(bx/2) dx`.
pub fn q2_rate(t: f64, res: &ReservoirConfig) -> Result<f64> {
    check_time(t)?;
    let tau = res.omega_c * t;
    let zero_t = res.eta * res.omega_c * tau / (1.0 + tau * tau);
    if res.is_zero_temperature() {
        return Ok(zero_t);
    }
    match res.q2_model {
        Q2Model::LowTemperature => Ok(zero_t + res.eta * PI / res.beta() * langevin(PI * t / res.beta())),
        Q2Model::Exact => {
            if tau == 0.0 {
                return Ok(0.0);
            }
            let b = res.scaled_beta();
            let integrand = |x: f64| {
                if x == 0.0 {
                    2.0 * tau / b
                } else {
                    (-x).exp() * (x * tau).sin() * 2.0 / (b * x).exp_m1()
                }
            };
            let bp = oscillation_breakpoints(CUTOFF_SPAN / (1.0 + b), tau);
            let tol = scaled(res.tolerance, res.eta * res.omega_c);
            let r = integrate(integrand, &bp, tol, MAX_SEGMENTS)?;
            Ok(zero_t + res.eta * res.omega_c * r.value)
        }
    }
}

/// `γ₁ = exp[−(ω_A+ω_B)² Q₂]` and `γ₂ = exp[−(ω_A−ω_B)² Q₂]`.
pub fn gamma_factors(t: f64, qubits: &QubitPairConfig, res: &ReservoirConfig) -> Result<DecayFactors> {
    let q = q2(t, res)?;
    Ok(decay_from_q2(q, qubits))
}

pub(crate) fn decay_from_q2(q: f64, qubits: &QubitPairConfig) -> DecayFactors {
    let sum = qubits.sum_frequency();
    let diff = qubits.difference_frequency();
    DecayFactors {
        gamma1: (-sum * sum * q).exp(),
        gamma2: (-diff * diff * q).exp(),
    }
}

/// `∂γ₁/∂t = −(ω_A+ω_B)² γ₁ dQ₂/dt`.
pub fn gamma1_rate(t: f64, qubits: &QubitPairConfig, res: &ReservoirConfig) -> Result<f64> {
    let sum = qubits.sum_frequency();
    let g = gamma_factors(t, qubits, res)?;
    Ok(-sum * sum * g.gamma1 * q2_rate(t, res)?)
}
