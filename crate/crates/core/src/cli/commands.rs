//! Subcommand bodies. Each returns the complete CSV text.

use rayon::prelude::*;

use super::config::RunConfig;
use super::{CliError, SurfaceArgs, SurfaceMethod};
use crate::analysis::{self, CriticTime, CriticTimeMethod};
use crate::discord::{discord_analytic, discord_bruteforce, MeasurementGrid};
use crate::error::{Error, Result};
use crate::evolution::{assemble_density, EvolvedXState};
use crate::reservoir::{gamma_factors, ReservoirConfig};
use crate::state::{QubitPairConfig, XStateParams};

/// Default c1 of the critic-time surface when none is given.
const SURFACE_C1: f64 = 0.5;

/// Seventeen significant digits; infinities print as `inf`.
pub fn num(v: f64) -> String {
    if v.is_nan() {
        "nan".into()
    } else if v.is_infinite() {
        if v > 0.0 {
            "inf".into()
        } else {
            "-inf".into()
        }
    } else {
        format!("{v:.16e}")
    }
}

fn critic_label(tc: CriticTime) -> String {
    match tc {
        CriticTime::Finite(t) => num(t),
        CriticTime::Infinite => "inf".into(),
        CriticTime::Never => "never".into(),
    }
}

fn method_label(m: CriticTimeMethod) -> &'static str {
    match m {
        CriticTimeMethod::RootFind => "root-find",
        CriticTimeMethod::ClosedFormIdentical => "closed-form-identical",
        CriticTimeMethod::ClosedFormDetuned => "closed-form-detuned",
    }
}

fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    if n == 1 {
        return vec![lo];
    }
    (0..n).map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64).collect()
}

pub fn evolve(cfg: &RunConfig) -> Result<String> {
    let mut out = cfg.stamp("evolve");
    out.push_str("r,omega_c_t,gamma1,gamma2,mu,nu,chi,mutual_information,classical_correlation,discord,regime\n");
    let times = cfg.grid.scaled_times();
    let omega_c = cfg.reservoir.omega_c();
    for qubits in cfg.qubit_pairs() {
        let tc = analysis::critic_time(&cfg.params, &qubits, &cfg.reservoir)?.tc;
        let rows = times
            .par_iter()
            .map(|&tau| {
                let t = tau / omega_c;
                let decay = gamma_factors(t, &qubits, &cfg.reservoir)?;
                let x = EvolvedXState::from_decay(&cfg.params, decay, t, &qubits);
                let d = discord_analytic(&x, tc.hint_at(t))?;
                Ok(format!(
                    "{},{},{},{},{},{},{},{},{},{},{}\n",
                    num(qubits.detuning()),
                    num(tau),
                    num(decay.gamma1),
                    num(decay.gamma2),
                    num(x.mu),
                    num(x.nu),
                    num(d.chi.unwrap_or(f64::NAN)),
                    num(d.mutual_information),
                    num(d.classical_correlation),
                    num(d.discord),
                    d.regime.map_or("", |r| r.label()),
                ))
            })
            .collect::<Result<Vec<String>>>()?;
        out.extend(rows);
    }
    Ok(out)
}

enum Cell {
    Value(CriticTime),
    Invalid(String),
}

fn surface_cell(c1: f64, ratio: f64, eta_omega2: f64, method: SurfaceMethod) -> Result<Cell> {
    let c3 = ratio * c1;
    if XStateParams::new(c1, 0.0, c3).is_err() {
        return Ok(Cell::Invalid(format!("c1 = {c1}, c3 = {c3} is not a state")));
    }
    let tc = match method {
        SurfaceMethod::ClosedForm => match analysis::critic_time_closed_form_identical(c1, c3, eta_omega2, 1.0, 1.0) {
            Ok(r) => r.tc,
            Err(Error::Domain(msg)) => return Ok(Cell::Invalid(msg)),
            Err(e) => return Err(e),
        },
        SurfaceMethod::RootFind => {
            let params = XStateParams::new(c1, 0.0, c3)?;
            let res = ReservoirConfig::zero_temperature(eta_omega2, 1.0)?;
            analysis::critic_time(&params, &QubitPairConfig::identical(1.0)?, &res)?.tc
        }
    };
    Ok(Cell::Value(tc))
}

/// `ω_c t_c` over `ηΩ²` and `c₃/c₁` for identical qubits at zero temperature.
pub fn critic_surface(cfg: &RunConfig, args: &SurfaceArgs) -> std::result::Result<String, CliError> {
    if !cfg.reservoir.is_zero_temperature() {
        return Err(Error::Domain("critic-time surface is defined at zero temperature only".into()).into());
    }
    if cfg
        .qubit_pairs()
        .iter()
        .any(|q| !q.is_resonant() || q.is_large_detuning_limit())
        || cfg.qubit_pairs().len() != 1
    {
        return Err(Error::Domain("critic-time surface needs identical qubits".into()).into());
    }
    if cfg.params.c2() != 0.0 {
        return Err(Error::Domain("critic-time surface needs c2 = 0".into()).into());
    }
    for (name, lo, hi, n) in [
        (
            "eta_omega2",
            args.eta_omega2_min,
            args.eta_omega2_max,
            args.eta_omega2_points,
        ),
        ("ratio", args.ratio_min, args.ratio_max, args.ratio_points),
    ] {
        if !(lo > 0.0 && hi >= lo && hi.is_finite()) || n == 0 {
            return Err(
                super::config::ConfigError(format!("field `{name}`: need 0 < min <= max and points >= 1")).into(),
            );
        }
    }
    let c1 = if cfg.is_explicit("c1") {
        cfg.params.c1()
    } else {
        SURFACE_C1
    };
    let couplings = linspace(args.eta_omega2_min, args.eta_omega2_max, args.eta_omega2_points);
    let ratios = linspace(args.ratio_min, args.ratio_max, args.ratio_points);
    let grid: Vec<(f64, f64)> = couplings
        .iter()
        .flat_map(|&g| ratios.iter().map(move |&q| (g, q)))
        .collect();
    let cells = grid
        .par_iter()
        .map(|&(g, q)| surface_cell(c1, q, g, args.method))
        .collect::<Result<Vec<Cell>>>()?;

    let mut out = format!(
        "# discord-dynamics critic-surface\n# c1={c1}\n# c2=0\n# method={}\n# eta_omega2={}..{} ({} points)\n# c3_over_c1={}..{} ({} points)\n",
        match args.method {
            SurfaceMethod::ClosedForm => "closed-form",
            SurfaceMethod::RootFind => "root-find",
        },
        args.eta_omega2_min,
        args.eta_omega2_max,
        args.eta_omega2_points,
        args.ratio_min,
        args.ratio_max,
        args.ratio_points,
    );
    out.push_str("eta_omega2,c3_over_c1,omega_c_tc\n");
    let mut invalid = 0usize;
    for (&(g, q), cell) in grid.iter().zip(&cells) {
        let value = match cell {
            Cell::Value(tc) => critic_label(*tc),
            Cell::Invalid(_) => {
                invalid += 1;
                "invalid".into()
            }
        };
        out.push_str(&format!("{},{},{}\n", num(g), num(q), value));
    }
    if invalid > 0 {
        let reason = cells.iter().find_map(|c| match c {
            Cell::Invalid(m) => Some(m.as_str()),
            _ => None,
        });
        eprintln!("warning: {invalid} invalid cells, e.g. {}", reason.unwrap_or(""));
    }
    Ok(out)
}

pub fn amplification(step: f64) -> Result<String> {
    let scan = analysis::scan_amplification(step)?;
    let mut out =
        format!("# discord-dynamics amplification\n# family: c2=0, c3=c1/2, identical qubits\n# step={step}\n");
    out.push_str("c1,d0,d_inf,gamma\n");
    for r in &scan.rows {
        out.push_str(&format!(
            "{},{},{},{}\n",
            num(r.c1),
            num(r.d0),
            num(r.d_inf),
            num(r.rate)
        ));
    }
    out.push_str(&format!(
        "# peak: gamma_max={} at c1={}\n",
        num(scan.peak.rate),
        num(scan.peak.c1)
    ));
    Ok(out)
}

/// Closed-form cross-check when the configuration matches one.
fn closed_form_for(cfg: &RunConfig, qubits: &QubitPairConfig) -> Option<Result<analysis::CriticTimeResult>> {
    if !cfg.reservoir.is_zero_temperature() {
        return None;
    }
    let p = &cfg.params;
    let res = &cfg.reservoir;
    if qubits.is_large_detuning_limit() && p.c1() == 1.0 && p.c2() == -p.c3() {
        return Some(analysis::critic_time_closed_form_detuned(
            p.c3(),
            res.eta(),
            qubits.omega_a(),
            res.omega_c(),
        ));
    }
    if qubits.is_resonant() && !qubits.is_large_detuning_limit() && p.c2() == 0.0 {
        return Some(analysis::critic_time_closed_form_identical(
            p.c1(),
            p.c3(),
            res.eta(),
            qubits.omega_a(),
            res.omega_c(),
        ));
    }
    None
}

pub fn critic_time(cfg: &RunConfig) -> Result<String> {
    let mut out = cfg.stamp("critic-time");
    out.push_str("r,method,tc,omega_c_tc\n");
    let omega_c = cfg.reservoir.omega_c();
    for qubits in cfg.qubit_pairs() {
        let r = num(qubits.detuning());
        let mut results = vec![analysis::critic_time(&cfg.params, &qubits, &cfg.reservoir)?];
        match closed_form_for(cfg, &qubits) {
            Some(Ok(res)) => results.push(res),
            Some(Err(Error::Domain(msg))) => eprintln!("note: closed form not applicable: {msg}"),
            Some(Err(e)) => return Err(e),
            None => {}
        }
        for res in results {
            let scaled = match res.tc {
                CriticTime::Finite(t) => CriticTime::Finite(t * omega_c),
                other => other,
            };
            out.push_str(&format!(
                "{r},{},{},{}\n",
                method_label(res.method),
                critic_label(res.tc),
                critic_label(scaled)
            ));
        }
    }
    Ok(out)
}

pub fn discord(cfg: &RunConfig, tau: f64, bruteforce: bool) -> std::result::Result<String, CliError> {
    if !(tau >= 0.0 && tau.is_finite()) {
        return Err(super::config::ConfigError(format!("field `time`: must be finite and >= 0, got {tau}")).into());
    }
    let mut out = cfg.stamp("discord");
    out.push_str(&format!("# time={tau}\n"));
    out.push_str("r,omega_c_t,chi,mutual_information,classical_correlation,discord,regime");
    if bruteforce {
        out.push_str(",bf_mutual_information,bf_classical_correlation,bf_discord,theta,phi");
    }
    out.push('\n');
    let t = tau / cfg.reservoir.omega_c();
    for qubits in cfg.qubit_pairs() {
        let tc = analysis::critic_time(&cfg.params, &qubits, &cfg.reservoir)?.tc;
        let decay = gamma_factors(t, &qubits, &cfg.reservoir)?;
        let x = EvolvedXState::from_decay(&cfg.params, decay, t, &qubits);
        let d = discord_analytic(&x, tc.hint_at(t))?;
        out.push_str(&format!(
            "{},{},{},{},{},{},{}",
            num(qubits.detuning()),
            num(tau),
            num(d.chi.unwrap_or(f64::NAN)),
            num(d.mutual_information),
            num(d.classical_correlation),
            num(d.discord),
            d.regime.map_or("", |r| r.label()),
        ));
        if bruteforce {
            let bf = discord_bruteforce(&assemble_density(&x), &MeasurementGrid::default())?;
            out.push_str(&format!(
                ",{},{},{},{},{}",
                num(bf.breakdown.mutual_information),
                num(bf.breakdown.classical_correlation),
                num(bf.breakdown.discord),
                num(bf.basis.theta()),
                num(bf.basis.phi()),
            ));
        }
        out.push('\n');
    }
    Ok(out)
}
