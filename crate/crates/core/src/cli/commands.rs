//! The evolve / sweep / prepare commands: deterministic result tables and
//! structured state dumps.

use rayon::prelude::*;
use serde_json::{json, Value};

use crate::analytics;
use crate::cats::{
    build_cat, dispersive_cat_reference, prepare_long_lived_cat_steps, symmetric_decomposition,
};
use crate::cli::config::{InitialState, RunConfig, SweepConfig};
use crate::dynamics::{propagate, PropagatorConfig};
use crate::error::Error;
use crate::observables::{bloch_vector, fit_decay, norm_abs, norm_hs, DecayFit, FitModel};
use crate::spinalg::{
    coherent_vector, dyad, overlap, CoherentSpec, DickeVector, SpinOperator, SpinSystem,
};

/// Command failure; the binary maps the variants to exit codes.
#[derive(Debug, thiserror::Error)]
pub enum CommandError {
    #[error(transparent)]
    Config(#[from] crate::cli::config::ConfigError),
    #[error("numerical failure: {0}")]
    Numerical(#[from] Error),
}

/// A result table with a self-describing header row. Cells are preformatted
/// strings (full round-trip precision for numbers; empty = not applicable),
/// so rendering is byte-deterministic.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        out.push_str(&self.columns.join(","));
        out.push('\n');
        for row in &self.rows {
            out.push_str(&row.join(","));
            out.push('\n');
        }
        out
    }

    pub fn to_json(&self) -> Value {
        json!({
            "columns": self.columns,
            "rows": self.rows,
        })
    }
}

pub(crate) fn fmt_f64(v: f64) -> String {
    // Rust's shortest round-trip formatting; deterministic.
    format!("{v}")
}

fn fmt_opt(v: Option<f64>) -> String {
    v.map(fmt_f64).unwrap_or_default()
}

/// τ sample grid: uniform by default, log-spaced (with a τ=0 anchor) for
/// rate fits that need resolution near the origin.
pub(crate) fn tau_grid(tau_max: f64, samples: usize, log: bool) -> Vec<f64> {
    if !log {
        return (0..samples)
            .map(|i| tau_max * i as f64 / (samples - 1) as f64)
            .collect();
    }
    // First positive point three decades below tau_max.
    let lo = tau_max * 1e-3;
    let mut grid = vec![0.0];
    for i in 0..samples - 1 {
        let f = i as f64 / (samples - 2).max(1) as f64;
        grid.push(lo * (tau_max / lo).powf(f));
    }
    grid
}

fn initial_operator(cfg: &RunConfig) -> Result<SpinOperator, CommandError> {
    let sys = cfg.system;
    Ok(match &cfg.state {
        InitialState::Coherent(spec) => {
            let v = coherent_vector(spec, sys);
            dyad(&v, &v)?
        }
        InitialState::Cat(spec) => {
            let v = build_cat(spec, sys)?;
            dyad(&v, &v)?
        }
        InitialState::PolarCat => {
            let north = DickeVector::basis_state(sys, 0);
            let south = DickeVector::basis_state(sys, sys.dim() - 1);
            dyad(&north, &south)?
        }
        InitialState::Prepared { theta, phi } => {
            let params = cfg.params.expect("validated at parse time");
            let v = crate::cats::prepare_long_lived_cat(*theta, *phi, &params, sys)?;
            dyad(&v, &v)?
        }
    })
}

/// Propagate the configured initial operator over the sample grid and emit
/// (τ, N₁, N₂, analytic references where applicable, ⟨J_z⟩/j, purity) rows.
pub fn cmd_evolve(cfg: &RunConfig) -> Result<Table, CommandError> {
    let columns = vec![
        "tau",
        "n1",
        "n2",
        "n1_ref",
        "n2_ref",
        "jz_over_j",
        "jz_classical",
        "purity",
    ];
    let grid = tau_grid(cfg.tau_max, cfg.samples, cfg.log_grid);
    let mut rho = initial_operator(cfg)?;
    let j = cfg.system.j();
    let n2_origin = norm_abs(&rho);

    let mut rows = Vec::with_capacity(grid.len());
    let mut previous_tau = 0.0;
    for &tau in &grid {
        if tau > previous_tau {
            rho = propagate(&rho, tau - previous_tau, &cfg.propagator)?;
            previous_tau = tau;
        }
        let n1 = norm_hs(&rho);
        let n2 = norm_abs(&rho);
        let trace = rho.trace();
        let hermitian_defect = crate::spinalg::max_entry_norm(&(rho.mat() - rho.mat().adjoint()));
        let bloch = bloch_vector(&rho).ok();
        let jz_over_j = bloch.map(|b| b[2] / j);
        let purity =
            (trace.norm() > 1e-9 && hermitian_defect < 1e-9).then(|| n1 / trace.norm_sqr());

        let (n1_ref, n2_ref, jz_classical) = match &cfg.state {
            InitialState::PolarCat => {
                let (r1, r2) = analytics::polar_cat_norms(tau);
                (Some(r1), Some(r2), None)
            }
            InitialState::Coherent(spec)
                if spec.phi() == 0.0 || spec.phi() == std::f64::consts::PI =>
            {
                let gamma = (spec.theta() / 2.0).tan()
                    * if spec.phi() == std::f64::consts::PI {
                        -1.0
                    } else {
                        1.0
                    };
                (
                    None,
                    Some(n2_origin * analytics::n2_ratio_diagonal(gamma, tau)),
                    Some(analytics::classical_theta(spec.theta(), tau).cos()),
                )
            }
            InitialState::Coherent(spec) => (
                None,
                None,
                Some(analytics::classical_theta(spec.theta(), tau).cos()),
            ),
            _ => (None, None, None),
        };

        rows.push(vec![
            fmt_f64(tau),
            fmt_f64(n1),
            fmt_f64(n2),
            fmt_opt(n1_ref),
            fmt_opt(n2_ref),
            fmt_opt(jz_over_j),
            fmt_opt(jz_classical),
            fmt_opt(purity),
        ]);
    }
    Ok(Table { columns, rows })
}

/// How a γ-pair relates to the decay laws.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PairKind {
    /// γ₁ = γ₂: single coherent state, classical-scale decay.
    Diagonal,
    /// γ₁γ₂ = 1: equator-mirror pair, no fast decoherence.
    Symmetric,
    /// Generic pair with fast (∝ j) decoherence.
    Asymmetric,
}

impl PairKind {
    pub fn classify(g1: f64, g2: f64) -> Self {
        if (g1 - g2).abs() < 1e-12 {
            PairKind::Diagonal
        } else if (g1 * g2 - 1.0).abs() < 1e-12 {
            PairKind::Symmetric
        } else {
            PairKind::Asymmetric
        }
    }

    fn label(self) -> &'static str {
        match self {
            PairKind::Diagonal => "diagonal",
            PairKind::Symmetric => "symmetric",
            PairKind::Asymmetric => "asymmetric",
        }
    }
}

/// One sweep grid point: fitted N₂ decay versus the applicable law.
#[derive(Debug, Clone)]
pub struct SweepPoint {
    pub sys: SpinSystem,
    pub gamma1: f64,
    pub gamma2: f64,
    pub kind: PairKind,
    pub fit: DecayFit,
    pub rate_ref: f64,
    pub quadratic_ref: Option<f64>,
}

/// Sample N₂(τ)/N₂(0) of the dyad |γ₁⟩⟨γ₂| over `samples` uniform points in
/// [0, tau_max].
pub fn n2_decay_samples(
    sys: SpinSystem,
    g1: f64,
    g2: f64,
    tau_max: f64,
    samples: usize,
    cfg: &PropagatorConfig,
) -> Result<Vec<(f64, f64)>, Error> {
    let a = coherent_vector(&CoherentSpec::from_real_gamma(g1), sys);
    let b = coherent_vector(&CoherentSpec::from_real_gamma(g2), sys);
    let mut rho = dyad(&a, &b)?;
    let origin = norm_abs(&rho);
    let dt = tau_max / (samples - 1) as f64;
    let mut out = vec![(0.0, 1.0)];
    for i in 1..samples {
        rho = propagate(&rho, dt, cfg)?;
        out.push((i as f64 * dt, norm_abs(&rho) / origin));
    }
    Ok(out)
}

pub fn sweep_point(
    sys: SpinSystem,
    g1: f64,
    g2: f64,
    cfg: &SweepConfig,
) -> Result<SweepPoint, Error> {
    let j = sys.j();
    let kind = PairKind::classify(g1, g2);
    // All decay-law comparisons default to the j·τ ≤ 0.1 window the laws are
    // derived in; mirror pairs carry a quadratic term and get the two-term
    // model. Override with fit_window for longer horizons.
    let model = match kind {
        PairKind::Symmetric => FitModel::Quadratic,
        _ => FitModel::Linear,
    };
    let window = cfg.fit_window.unwrap_or(0.1 / j);
    let samples = n2_decay_samples(sys, g1, g2, window, cfg.fit_samples, &cfg.propagator)?;
    let fit = fit_decay(&samples, model)?;
    let (rate_ref, quadratic_ref) = match kind {
        PairKind::Diagonal => (analytics::n2_rate_diagonal(g1), None),
        PairKind::Symmetric => {
            let (a, b) = analytics::n2_coeffs_symmetric(g1)?;
            (a, Some(b))
        }
        PairKind::Asymmetric => (analytics::n2_rate_general(g1, g2, j), None),
    };
    Ok(SweepPoint {
        sys,
        gamma1: g1,
        gamma2: g2,
        kind,
        fit,
        rate_ref,
        quadratic_ref,
    })
}

/// Run every (j, γ-pair) grid point (concurrently; assembly order is the
/// grid order) and emit fitted and predicted decay coefficients.
pub fn cmd_sweep(cfg: &SweepConfig) -> Result<Table, CommandError> {
    let grid: Vec<(SpinSystem, (f64, f64))> = cfg
        .j_values
        .iter()
        .flat_map(|&sys| cfg.pairs.iter().map(move |&p| (sys, p)))
        .collect();
    let points: Vec<Result<SweepPoint, Error>> = grid
        .par_iter()
        .map(|&(sys, (g1, g2))| sweep_point(sys, g1, g2, cfg))
        .collect();

    let columns = vec![
        "j",
        "gamma1",
        "gamma2",
        "kind",
        "tau_window",
        "fit_samples",
        "rate",
        "quadratic",
        "rate_ref",
        "quadratic_ref",
        "rate_rel_dev",
    ];
    let mut rows = Vec::with_capacity(points.len());
    for point in points {
        let p = point?;
        let rel_dev =
            (p.rate_ref != 0.0).then(|| (p.fit.rate - p.rate_ref).abs() / p.rate_ref.abs());
        rows.push(vec![
            fmt_f64(p.sys.j()),
            fmt_f64(p.gamma1),
            fmt_f64(p.gamma2),
            p.kind.label().to_string(),
            fmt_f64(p.fit.window.1),
            format!("{}", cfg.fit_samples),
            fmt_f64(p.fit.rate),
            fmt_f64(p.fit.quadratic),
            fmt_f64(p.rate_ref),
            fmt_opt(p.quadratic_ref),
            fmt_opt(rel_dev),
        ]);
    }
    Ok(Table { columns, rows })
}

/// Preparation transcript: per-step summary table, per-step state dumps, and
/// a structured rendering of both.
#[derive(Debug, Clone)]
pub struct PrepareReport {
    pub summary: Table,
    pub states: Table,
    structured: Value,
}

impl PrepareReport {
    pub fn to_text(&self) -> String {
        format!("{}\n{}", self.summary.to_csv(), self.states.to_csv())
    }

    pub fn to_json(&self) -> Value {
        self.structured.clone()
    }
}

fn state_json(v: &DickeVector) -> Value {
    json!({
        "two_j": v.sys().two_j(),
        "amplitudes": v.amp().iter().map(|z| json!([z.re, z.im])).collect::<Vec<_>>(),
    })
}

/// Simulate the three preparation steps, dumping the state, Bloch vector and
/// overlap diagnostics after each, plus the symmetric-decomposition fidelity
/// of the final cat.
pub fn cmd_prepare(cfg: &RunConfig) -> Result<PrepareReport, CommandError> {
    let InitialState::Prepared { theta, phi } = cfg.state else {
        return Err(crate::cli::config::ConfigError {
            line: None,
            field: Some("state".to_string()),
            message: "prepare requires state = prepared".to_string(),
        }
        .into());
    };
    let params = cfg.params.expect("validated at parse time");
    let sys = cfg.system;
    let record = prepare_long_lived_cat_steps(theta, phi, &params, sys)?;

    // Step diagnostics: fidelity of step 1 against the target coherent state,
    // of step 2 against the closed-form two-component superposition, and the
    // symmetric-pair capture of the final state.
    let target = coherent_vector(&CoherentSpec::new(theta, phi).map_err(Error::from)?, sys);
    let pulse_fidelity = overlap(&target, &record.after_pulse)?.norm_sqr();
    let reference = dispersive_cat_reference(theta, phi, sys)?;
    let split_fidelity = overlap(&reference, &record.after_dispersive)?.norm_sqr();
    let fit = symmetric_decomposition(&record.final_state);

    let steps: [(&str, &DickeVector, f64); 3] = [
        ("pulse", &record.after_pulse, pulse_fidelity),
        ("dispersive", &record.after_dispersive, split_fidelity),
        ("final", &record.final_state, fit.captured),
    ];

    let mut summary_rows = Vec::new();
    let mut state_rows = Vec::new();
    for (name, state, fidelity) in steps {
        let rho = dyad(state, state)?;
        let bloch = bloch_vector(&rho)?;
        summary_rows.push(vec![
            name.to_string(),
            fmt_f64(bloch[0]),
            fmt_f64(bloch[1]),
            fmt_f64(bloch[2]),
            fmt_f64(state.norm()),
            fmt_f64(fidelity),
        ]);
        for (k, amp) in state.amp().iter().enumerate() {
            state_rows.push(vec![
                name.to_string(),
                format!("{k}"),
                fmt_f64(sys.m_at(k)),
                fmt_f64(amp.re),
                fmt_f64(amp.im),
            ]);
        }
    }
    summary_rows.push(vec![
        "symmetric_fit".to_string(),
        fmt_f64(fit.theta),
        fmt_f64(fit.phi),
        String::new(),
        String::new(),
        fmt_f64(fit.captured),
    ]);

    let structured = json!({
        "theta": theta,
        "phi": phi,
        "two_j": sys.two_j(),
        "eta": params.eta(),
        "dispersive_time": record.dispersive_time,
        "component_azimuth": record.component_azimuth,
        "rotation_axis_phi": record.rotation_axis_phi,
        "steps": {
            "pulse": { "state": state_json(&record.after_pulse), "fidelity_target": pulse_fidelity },
            "dispersive": { "state": state_json(&record.after_dispersive), "fidelity_two_component": split_fidelity },
            "final": { "state": state_json(&record.final_state) },
        },
        "symmetric_fit": { "theta": fit.theta, "phi": fit.phi, "captured": fit.captured },
    });

    Ok(PrepareReport {
        summary: Table {
            columns: vec!["step", "jx_or_theta", "jy_or_phi", "jz", "norm", "fidelity"],
            rows: summary_rows,
        },
        states: Table {
            columns: vec!["step", "k", "m", "amp_re", "amp_im"],
            rows: state_rows,
        },
        structured,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cli::config::ConfigMap;

    fn run_cfg(text: &str) -> RunConfig {
        RunConfig::from_map(&ConfigMap::parse(text).unwrap()).unwrap()
    }

    #[test]
    fn evolve_polar_cat_matches_exact_norms() {
        let cfg = run_cfg("j = 10\nstate = polar_cat\ntau_max = 2\nsamples = 21\n");
        let table = cmd_evolve(&cfg).unwrap();
        assert_eq!(table.rows.len(), 21);
        for row in &table.rows {
            let n1: f64 = row[1].parse().unwrap();
            let n1_ref: f64 = row[3].parse().unwrap();
            let n2: f64 = row[2].parse().unwrap();
            let n2_ref: f64 = row[4].parse().unwrap();
            assert!((n1 - n1_ref).abs() < 1e-8, "n1 {n1} vs {n1_ref}");
            assert!((n2 - n2_ref).abs() < 1e-8);
            // Traceless dyad: no Bloch vector, no purity.
            assert!(row[5].is_empty() && row[7].is_empty());
        }
    }

    #[test]
    fn evolve_coherent_tracks_classical_polar_angle() {
        let cfg = run_cfg("j = 50\nstate = coherent\ntheta = 0.9\ntau_max = 1\nsamples = 6\n");
        let table = cmd_evolve(&cfg).unwrap();
        for row in &table.rows {
            let jz: f64 = row[5].parse().unwrap();
            let reference: f64 = row[6].parse().unwrap();
            assert!(
                (jz - reference).abs() < 5.0 / 50.0_f64.sqrt(),
                "{jz} vs {reference}"
            );
            let purity: f64 = row[7].parse().unwrap();
            assert!(purity <= 1.0 + 1e-9);
        }
    }

    #[test]
    fn evolve_output_is_deterministic() {
        let cfg = run_cfg(
            "j = 7\nstate = coherent\ntheta = 1.2\nphi = 0.4\ntau_max = 0.7\nsamples = 9\n",
        );
        let a = cmd_evolve(&cfg).unwrap().to_csv();
        let b = cmd_evolve(&cfg).unwrap().to_csv();
        assert_eq!(a, b);
    }

    #[test]
    fn sweep_classifies_and_fits() {
        let map = ConfigMap::parse("sweep_j = 10\nsweep_pairs = 1:0.4, 2:0.5, 0.7:0.7\n").unwrap();
        let cfg = SweepConfig::from_map(&map).unwrap();
        let table = cmd_sweep(&cfg).unwrap();
        assert_eq!(table.rows.len(), 3);
        assert_eq!(table.rows[0][3], "asymmetric");
        assert_eq!(table.rows[1][3], "symmetric");
        assert_eq!(table.rows[2][3], "diagonal");
        // Symmetric pair carries a quadratic reference.
        assert!(!table.rows[1][9].is_empty());
        assert!(table.rows[0][9].is_empty());
    }

    #[test]
    fn prepare_reports_high_fidelities() {
        let cfg = run_cfg(
            "j = 10\nstate = prepared\ntheta = 1.0471975511965976\ntau_max = 1\ng = 0.05\nkappa = 4\ndelta = 70\n",
        );
        let report = cmd_prepare(&cfg).unwrap();
        // pulse, dispersive, final, symmetric_fit rows
        assert_eq!(report.summary.rows.len(), 4);
        for row in report.summary.rows.iter().take(3) {
            let fidelity: f64 = row[5].parse().unwrap();
            assert!(fidelity > 1.0 - 1e-8, "step {} fidelity {fidelity}", row[0]);
        }
        let json = report.to_json();
        assert!(json["symmetric_fit"]["captured"].as_f64().unwrap() > 1.0 - 1e-8);
        // State dumps cover all three steps at full dimension.
        assert_eq!(report.states.rows.len(), 3 * 21);
    }
}
