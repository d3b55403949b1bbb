//! Critic time, stable amplification, derivative analysis and discord protection.

use crate::discord::{CriticHint, Regime, CHI_TIE_TOL};
use crate::error::{Error, Result};
use crate::evolution::EvolvedXState;
use crate::reservoir::{gamma1_rate, gamma_factors, ReservoirConfig};
use crate::state::{xlog2x, QubitPairConfig, XStateParams};

/// Largest time searched for a critic time, in units of `1/ω_c`.
pub const MAX_SCALED_TIME: f64 = 1e6;
/// Relative width at which bisection stops.
pub const ROOT_REL_TOL: f64 = 1e-12;

/// When the χ branch switches.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum CriticTime {
    Finite(f64),
    /// The coherence side approaches `|c₃|` only asymptotically or stays above it.
    Infinite,
    /// `|c₃|` dominates from t = 0; there is no switch.
    Never,
}

impl CriticTime {
    pub fn finite(&self) -> Option<f64> {
        match *self {
            CriticTime::Finite(t) => Some(t),
            _ => None,
        }
    }

    /// Position of `t` relative to this critic time.
    pub fn hint_at(&self, t: f64) -> CriticHint {
        match *self {
            CriticTime::Finite(tc) if t < tc => CriticHint::Before,
            CriticTime::Finite(_) => CriticHint::After,
            CriticTime::Infinite | CriticTime::Never => CriticHint::NoCritic,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CriticTimeMethod {
    RootFind,
    ClosedFormIdentical,
    ClosedFormDetuned,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CriticTimeResult {
    pub tc: CriticTime,
    pub method: CriticTimeMethod,
}

/// Left side `(|μ(t)| + |ν(t)|)/2` of the critic-time condition.
pub fn coherence_half_sum(
    params: &XStateParams,
    t: f64,
    qubits: &QubitPairConfig,
    res: &ReservoirConfig,
) -> Result<f64> {
    let g = gamma_factors(t, qubits, res)?;
    Ok(0.5 * (params.outer_coherence().abs() * g.gamma1 + params.inner_coherence().abs() * g.gamma2))
}

/// Solves `(|μ(t)| + |ν(t)|)/2 = |c₃|` for t.
///
/// The left side is a sum of decaying exponentials of Q₂, so it is monotone
/// and the root (when it exists) is unique. As t → ∞ it tends to
/// `|c₁+c₂|/2` for identical qubits (the inner coherence never decays) and to
/// zero otherwise.
pub fn critic_time(params: &XStateParams, qubits: &QubitPairConfig, res: &ReservoirConfig) -> Result<CriticTimeResult> {
    let target = params.c3().abs();
    let outer = params.outer_coherence().abs();
    let inner = params.inner_coherence().abs();
    let at_zero = 0.5 * (outer + inner);
    let found = |tc| {
        Ok(CriticTimeResult {
            tc,
            method: CriticTimeMethod::RootFind,
        })
    };

    if (at_zero - target).abs() <= CHI_TIE_TOL {
        return found(CriticTime::Finite(0.0));
    }
    if target > at_zero {
        return found(CriticTime::Never);
    }
    let infimum = if qubits.is_resonant() { 0.5 * inner } else { 0.0 };
    if infimum >= target {
        return found(CriticTime::Infinite);
    }

    let lhs = |t: f64| coherence_half_sum(params, t, qubits, res);
    let t_max = MAX_SCALED_TIME / res.omega_c();
    let mut lo = 0.0;
    let mut hi = 1.0 / res.omega_c();
    while lhs(hi)? > target {
        lo = hi;
        hi *= 2.0;
        if hi > t_max {
            return Err(Error::RootFind(format!(
                "no sign change of the critic condition for t <= {t_max:e} (value {:e} vs |c3| = {target})",
                lhs(t_max)?
            )));
        }
    }
    for _ in 0..400 {
        if hi - lo <= ROOT_REL_TOL * hi {
            break;
        }
        let mid = 0.5 * (lo + hi);
        if lhs(mid)? > target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    found(CriticTime::Finite(0.5 * (lo + hi)))
}

/// Zero-temperature critic time for identical qubits and `c₂ = 0`:
/// `t_c = (1/ω_c) √[(2c₃/c₁ − 1)^{−1/(2ηΩ²)} − 1]`.
pub fn critic_time_closed_form_identical(
    c1: f64,
    c3: f64,
    eta: f64,
    omega: f64,
    omega_c: f64,
) -> Result<CriticTimeResult> {
    if !(c1 > 0.0 && c1 <= 2.0 / 3.0 && c3 >= 0.5 * c1 && c3 <= c1) {
        return Err(Error::Domain(format!(
            "closed-form critic time needs 0 < c1/2 <= c3 <= c1 <= 2/3, got c1 = {c1}, c3 = {c3}"
        )));
    }
    XStateParams::new(c1, 0.0, c3).map_err(|e| Error::Domain(e.to_string()))?;
    positive("eta", eta)?;
    positive("Omega", omega)?;
    positive("omega_c", omega_c)?;
    let method = CriticTimeMethod::ClosedFormIdentical;
    let ratio = 2.0 * c3 / c1 - 1.0;
    if ratio <= 0.0 {
        return Ok(CriticTimeResult {
            tc: CriticTime::Infinite,
            method,
        });
    }
    if ratio >= 1.0 {
        return Ok(CriticTimeResult {
            tc: CriticTime::Finite(0.0),
            method,
        });
    }
    let exponent = -ratio.ln() / (2.0 * eta * omega * omega);
    Ok(CriticTimeResult {
        tc: CriticTime::Finite(exponent.exp_m1().sqrt() / omega_c),
        method,
    })
}

/// Zero-temperature critic time for the protected family `c₁ = 1, −c₂ = c₃ = c`
/// in the large-detuning limit: `t_c = (1/ω_c) √[c^{−2/(η ω_A²)} − 1]`.
pub fn critic_time_closed_form_detuned(c: f64, eta: f64, omega_a: f64, omega_c: f64) -> Result<CriticTimeResult> {
    if !(c > 0.0 && c < 1.0) {
        return Err(Error::Domain(format!("protected family needs 0 < c < 1, got {c}")));
    }
    positive("eta", eta)?;
    positive("omega_A", omega_a)?;
    positive("omega_c", omega_c)?;
    let exponent = -2.0 * c.ln() / (eta * omega_a * omega_a);
    Ok(CriticTimeResult {
        tc: CriticTime::Finite(exponent.exp_m1().sqrt() / omega_c),
        method: CriticTimeMethod::ClosedFormDetuned,
    })
}

fn positive(name: &str, v: f64) -> Result<()> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(Error::Domain(format!("{name} must be positive, got {v}")))
    }
}

fn check_amplification_family(c1: f64) -> Result<f64> {
    const UPPER: f64 = 2.0 / 3.0;
    if !(c1 > 0.0 && c1 <= UPPER + 1e-12) {
        return Err(Error::Domain(format!(
            "amplification family needs 0 < c1 <= 2/3, got {c1}"
        )));
    }
    Ok(c1.min(UPPER))
}

/// The `c₂ = 0, c₃ = c₁/2` family.
pub fn amplification_family(c1: f64) -> Result<XStateParams> {
    let c1 = check_amplification_family(c1)?;
    XStateParams::new(c1, 0.0, 0.5 * c1)
}

/// Long-time discord of identical qubits for the `c₂ = 0, 2c₃ = c₁` family.
pub fn asymptotic_discord_identical(c1: f64) -> Result<f64> {
    let c1 = check_amplification_family(c1)?;
    Ok(xlog2x(2.0 + c1) / 8.0 - xlog2x(2.0 - c1) / 4.0 + xlog2x(2.0 - 3.0 * c1) / 8.0)
}

/// Initial discord of the `c₂ = 0, 2c₃ = c₁` family.
pub fn initial_discord_identical(c1: f64) -> Result<f64> {
    let c1 = check_amplification_family(c1)?;
    Ok(-1.0
        + xlog2x(2.0 - c1) / 8.0
        + xlog2x(2.0 + c1) / 8.0
        + xlog2x(2.0 + 3.0 * c1) / 8.0
        + xlog2x(2.0 - 3.0 * c1) / 8.0
        - xlog2x(1.0 + c1) / 2.0
        - xlog2x(1.0 - c1) / 2.0)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AmplificationReport {
    pub c1: f64,
    pub d0: f64,
    pub d_inf: f64,
    /// `Γ = D(∞)/D(0)`.
    pub rate: f64,
}

pub fn amplification_rate(c1: f64) -> Result<AmplificationReport> {
    let d0 = initial_discord_identical(c1)?;
    let d_inf = asymptotic_discord_identical(c1)?;
    if d0.is_nan() || d0 <= 0.0 {
        return Err(Error::UndefinedRate(d0));
    }
    Ok(AmplificationReport {
        c1,
        d0,
        d_inf,
        rate: d_inf / d0,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct AmplificationScan {
    pub rows: Vec<AmplificationReport>,
    /// Best point after parabolic refinement around the best grid row.
    pub peak: AmplificationReport,
}

/// Evaluates Γ on `c₁ = step, 2·step, …` up to 2/3 and locates the maximum.
pub fn scan_amplification(step: f64) -> Result<AmplificationScan> {
    if !(step > 0.0 && step <= 2.0 / 3.0) {
        return Err(Error::Domain(format!("scan step must lie in (0, 2/3], got {step}")));
    }
    let count = ((2.0 / 3.0) / step + 1e-9).floor() as usize;
    let rows = (1..=count)
        .map(|i| amplification_rate(i as f64 * step))
        .collect::<Result<Vec<_>>>()?;
    let (best, _) = rows
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.rate.total_cmp(&b.1.rate))
        .expect("at least one row");
    let mut peak = rows[best];
    if best > 0 && best + 1 < rows.len() {
        let (y0, y1, y2) = (rows[best - 1].rate, rows[best].rate, rows[best + 1].rate);
        let curvature = y0 - 2.0 * y1 + y2;
        if curvature < 0.0 {
            let offset = 0.5 * (y0 - y2) / curvature;
            let refined = amplification_rate(rows[best].c1 + offset * step)?;
            if refined.rate > peak.rate {
                peak = refined;
            }
        }
    }
    Ok(AmplificationScan { rows, peak })
}

/// Terms of `∂D/∂γ₁` for an evolved X state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AmplificationIndicator {
    /// Contribution of the classical correlation (present before t_c only).
    pub f: f64,
    /// Contribution of the mutual information.
    pub g: f64,
    /// `dν/dγ₁ = (ν/γ₁)((r−1)/(r+1))²`.
    pub h: f64,
    pub regime: Regime,
    /// `F + G` before the critic time, `G` after it.
    pub d_discord_d_gamma1: f64,
}

impl AmplificationIndicator {
    /// `∂D/∂t` given `∂γ₁/∂t`.
    pub fn discord_rate(&self, gamma1_rate: f64) -> f64 {
        self.d_discord_d_gamma1 * gamma1_rate
    }

    /// True when the discord grows in time (`∂D/∂γ₁ < 0`, since γ₁ decreases).
    pub fn amplifying(&self) -> bool {
        self.d_discord_d_gamma1 < 0.0
    }
}

/// Splits `∂D/∂γ₁` into the classical-correlation part F and the
/// mutual-information part G.
pub fn amplification_indicator(
    x: &EvolvedXState,
    params: &XStateParams,
    qubits: &QubitPairConfig,
    res: &ReservoirConfig,
    hint: CriticHint,
) -> Result<AmplificationIndicator> {
    let decay = gamma_factors(x.t, qubits, res)?;
    let k = qubits.decay_exponent();
    let h = if k == 0.0 {
        0.0
    } else {
        params.inner_coherence() * k * decay.gamma1.powf(k - 1.0)
    };
    let (mu, nu, c3) = (x.mu, x.nu, x.c3);
    let outer = params.outer_coherence();
    let s = mu.abs() + nu.abs();
    let f = 0.25 * (outer.abs() + h.abs()) * ((2.0 - s) / (2.0 + s)).log2();
    let g = 0.25 * outer * log_ratio(1.0 + c3 + mu, 1.0 + c3 - mu) + 0.25 * h * log_ratio(1.0 - c3 + nu, 1.0 - c3 - nu);
    let regime = regime_for(x, hint);
    // the classical correlation only moves with γ₁ while the coherences set χ
    let d_discord_d_gamma1 = if is_before(x) { f + g } else { g };
    Ok(AmplificationIndicator {
        f,
        g,
        h,
        regime,
        d_discord_d_gamma1,
    })
}

fn is_before(x: &EvolvedXState) -> bool {
    0.5 * (x.mu.abs() + x.nu.abs()) > x.c3.abs() + CHI_TIE_TOL
}

fn regime_for(x: &EvolvedXState, hint: CriticHint) -> Regime {
    match hint {
        CriticHint::NoCritic => Regime::NoCritic,
        _ if is_before(x) => Regime::BeforeCritic,
        _ => Regime::AfterCritic,
    }
}

/// `log₂(a/b)`, zero when both vanish.
fn log_ratio(a: f64, b: f64) -> f64 {
    if a == b {
        0.0
    } else {
        (a / b).log2()
    }
}

/// Analytic `∂D/∂t` at time t, via `∂D/∂γ₁ · ∂γ₁/∂t`.
pub fn discord_time_derivative(
    params: &XStateParams,
    t: f64,
    qubits: &QubitPairConfig,
    res: &ReservoirConfig,
) -> Result<f64> {
    let x = crate::evolution::evolve_x_state(params, t, qubits, res)?;
    let ind = amplification_indicator(&x, params, qubits, res, CriticHint::Unknown)?;
    Ok(ind.discord_rate(gamma1_rate(t, qubits, res)?))
}

/// The `c₁ = 1, −c₂ = c₃ = c` family whose discord is frozen before t_c.
pub fn protected_family(c: f64) -> Result<XStateParams> {
    if !(c > 0.0 && c < 1.0) {
        return Err(Error::Domain(format!("protected family needs 0 < c < 1, got {c}")));
    }
    XStateParams::new(1.0, -c, c)
}

/// Discord of the protected family on each side of the critic time.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProtectedDiscord {
    /// `1 − h₂((1+c)/2)`, constant in time.
    pub before: f64,
    /// `1 − h₂((1+γ₁)/2)`.
    pub after: f64,
}

impl ProtectedDiscord {
    /// Value at a point where `γ₁` is known; the before-branch holds while `γ₁ > c`.
    pub fn at(&self, gamma1: f64, c: f64) -> f64 {
        if gamma1 > c {
            self.before
        } else {
            self.after
        }
    }
}

pub fn protected_discord(c: f64, gamma1: f64) -> Result<ProtectedDiscord> {
    if !(c > 0.0 && c < 1.0) {
        return Err(Error::Domain(format!("protected family needs 0 < c < 1, got {c}")));
    }
    if !(0.0..=1.0).contains(&gamma1) {
        return Err(Error::Domain(format!("gamma1 must lie in [0, 1], got {gamma1}")));
    }
    let branch = |v: f64| 0.5 * (xlog2x(1.0 + v) + xlog2x(1.0 - v));
    Ok(ProtectedDiscord {
        before: branch(c),
        after: branch(gamma1),
    })
}
