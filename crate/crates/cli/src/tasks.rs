//! Task implementations: each consumes the parsed configuration, runs the
//! solver, and writes one table (plus the pair-amplitude report for the
//! evolution task).

use std::path::{Path, PathBuf};

use lindblad_skin_core::damping;
use lindblad_skin_core::dynamics::{
    adjoint_two_point_table, delta_g_timeseries, f2_coefficients, interference_amplitudes,
    InitialGaussianState,
};
use lindblad_skin_core::kspace;
use lindblad_skin_core::model::{build_ssh_model, BoundaryCondition};
use lindblad_skin_core::ness;
use lindblad_skin_core::oracle;
use lindblad_skin_core::thirdq::decompose_ssh;
use lindblad_skin_core::Error as CoreError;
use ndarray::Array2;
use num_complex::Complex64;

use crate::config::{InitialState, OutputFormat, RunConfig, Task};
use crate::output::{Table, Value};

/// Task failures, separated by exit-code class.
#[derive(Debug)]
pub enum TaskError {
    /// Exit code 2.
    Config(String),
    /// Exit code 1.
    Numerical(String),
}

impl std::fmt::Display for TaskError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            TaskError::Config(msg) => write!(f, "configuration error: {msg}"),
            TaskError::Numerical(msg) => write!(f, "numerical failure: {msg}"),
        }
    }
}

impl From<CoreError> for TaskError {
    fn from(e: CoreError) -> Self {
        match e {
            CoreError::InvalidParameter(_) | CoreError::DimensionMismatch { .. } => {
                TaskError::Config(e.to_string())
            }
            other => TaskError::Numerical(other.to_string()),
        }
    }
}

impl From<std::io::Error> for TaskError {
    fn from(e: std::io::Error) -> Self {
        TaskError::Numerical(format!("output write failed: {e}"))
    }
}

pub fn run(config: &RunConfig, out_dir: &Path) -> Result<Vec<PathBuf>, TaskError> {
    config.validate().map_err(TaskError::Config)?;
    let format = config.output.format;
    match config.task {
        Task::Spectrum => task_spectrum(config, out_dir, format),
        Task::Ness => task_ness(config, out_dir, format),
        Task::Modes => task_modes(config, out_dir, format),
        Task::Evolve => task_evolve(config, out_dir, format),
        Task::Kspace => task_kspace(config, out_dir, format),
        Task::SkinScan => task_skin_scan(config, out_dir, format),
        Task::OracleCheck => task_oracle_check(config, out_dir, format),
    }
}

fn task_spectrum(
    config: &RunConfig,
    dir: &Path,
    format: OutputFormat,
) -> Result<Vec<PathBuf>, TaskError> {
    let params = config.params();
    let mut table = Table::new("spectrum", vec!["k_or_index", "re", "im"]);
    match config.boundary() {
        BoundaryCondition::Periodic => {
            for n in 0..params.n_cells {
                let k = 2.0 * std::f64::consts::PI * n as f64 / params.n_cells as f64;
                let lams = kspace::closed_form_eigenvalues(&params, k)?;
                for l in lams {
                    table.push(vec![
                        Value::Float(k),
                        Value::Float(l.re),
                        Value::Float(l.im),
                    ]);
                }
            }
        }
        BoundaryCondition::Open => {
            // rapidities are drift-matrix eigenvalues; no canonical mode
            // structure is needed for the spectrum alone
            let model = build_ssh_model(&params, BoundaryCondition::Open)?;
            let form = lindblad_skin_core::majorana::MajoranaForm::from_model(&model)?;
            let betas = lindblad_skin_core::thirdq::drift_rapidities(&form)?;
            for (m, beta) in betas.iter().enumerate() {
                table.push(vec![
                    Value::Int(m as i64),
                    Value::Float(beta.re),
                    Value::Float(beta.im),
                ]);
            }
        }
    }
    Ok(vec![table.write(dir, format)?])
}

fn task_ness(
    config: &RunConfig,
    dir: &Path,
    format: OutputFormat,
) -> Result<Vec<PathBuf>, TaskError> {
    let params = config.params();
    let bc = config.boundary();
    let model = build_ssh_model(&params, bc)?;
    let dec = decompose_ssh(&params, bc)?;
    let profile = ness::ness_occupations(&dec, &model)?;
    let mut table = Table::new("ness", vec!["site", "occupation"]);
    for (s, v) in profile.values.iter().enumerate() {
        table.push(vec![Value::Int(s as i64 + 1), Value::Float(*v)]);
    }
    Ok(vec![table.write(dir, format)?])
}

fn task_modes(
    config: &RunConfig,
    dir: &Path,
    format: OutputFormat,
) -> Result<Vec<PathBuf>, TaskError> {
    let params = config.params();
    let dec = decompose_ssh(&params, config.boundary())?;
    let rows = ness::mode_report(&dec)?;
    let mut table = Table::new("modes", vec!["mode", "beta_re", "beta_im", "site", "delta"]);
    for row in &rows {
        for (s, v) in row.profile.values.iter().enumerate() {
            table.push(vec![
                Value::Int(row.mode as i64),
                Value::Float(row.beta.re),
                Value::Float(row.beta.im),
                Value::Int(s as i64 + 1),
                Value::Float(*v),
            ]);
        }
    }
    Ok(vec![table.write(dir, format)?])
}

fn initial_state(config: &RunConfig, n_sites: usize) -> Result<InitialGaussianState, TaskError> {
    let evolve = config.evolve.as_ref().expect("validated");
    match &evolve.initial {
        InitialState::UnitFilling => Ok(InitialGaussianState::unit_filling(n_sites)),
        InitialState::Ness => InitialGaussianState::from_site_occupations(&vec![0.5; n_sites])
            .map_err(TaskError::from),
        InitialState::CustomCovariance(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| TaskError::Config(format!("covariance file {path}: {e}")))?;
            let raw: Vec<Vec<[f64; 2]>> = serde_json::from_str(&text)
                .map_err(|e| TaskError::Config(format!("covariance file {path}: {e}")))?;
            let n2 = raw.len();
            if n2 != 2 * n_sites || raw.iter().any(|row| row.len() != n2) {
                return Err(TaskError::Config(format!(
                    "covariance must be {0} x {0} for {1} sites",
                    2 * n_sites,
                    n_sites
                )));
            }
            let mut cov = Array2::<Complex64>::zeros((n2, n2));
            for (i, row) in raw.iter().enumerate() {
                for (j, &[re, im]) in row.iter().enumerate() {
                    cov[[i, j]] = Complex64::new(re, im);
                }
            }
            InitialGaussianState::new(cov).map_err(TaskError::from)
        }
    }
}

fn time_grid(config: &RunConfig) -> Vec<f64> {
    let evolve = config.evolve.as_ref().expect("validated");
    (0..evolve.samples)
        .map(|i| evolve.t_max * i as f64 / (evolve.samples - 1) as f64)
        .collect()
}

fn task_evolve(
    config: &RunConfig,
    dir: &Path,
    format: OutputFormat,
) -> Result<Vec<PathBuf>, TaskError> {
    let params = config.params();
    let bc = config.boundary();
    let dec = decompose_ssh(&params, bc)?;
    let state = initial_state(config, params.n_sites())?;
    let q = adjoint_two_point_table(&state);
    let f2 = f2_coefficients(&dec, &q);
    let spectral = interference_amplitudes(&dec, &f2);
    let times = time_grid(config);
    let series = delta_g_timeseries(&spectral, &times)?;

    let mut evolve_table = Table::new("evolve", vec!["t", "site", "delta_g"]);
    for (i, &t) in series.times.iter().enumerate() {
        for s in 0..series.values.ncols() {
            evolve_table.push(vec![
                Value::Float(t),
                Value::Int(s as i64 + 1),
                Value::Float(series.values[[i, s]]),
            ]);
        }
    }

    // pair-amplitude report, sorted by descending oscillation frequency
    let mut order: Vec<usize> = (0..spectral.pairs.len()).collect();
    order.sort_by(|&a, &b| {
        (spectral.pairs[b].omega.im, b)
            .partial_cmp(&(spectral.pairs[a].omega.im, a))
            .unwrap()
    });
    let mut freq_table = Table::new(
        "frequency_amplitude",
        vec!["pair_index", "omega_im", "site", "re_d", "im_d"],
    );
    for (rank, &p) in order.iter().enumerate() {
        let pair = &spectral.pairs[p];
        for s in 0..spectral.n_sites() {
            let d = spectral.amplitudes[[p, s]];
            freq_table.push(vec![
                Value::Int(rank as i64),
                Value::Float(pair.omega.im),
                Value::Int(s as i64 + 1),
                Value::Float(d.re),
                Value::Float(d.im),
            ]);
        }
    }
    Ok(vec![
        evolve_table.write(dir, format)?,
        freq_table.write(dir, format)?,
    ])
}

fn task_kspace(
    config: &RunConfig,
    dir: &Path,
    format: OutputFormat,
) -> Result<Vec<PathBuf>, TaskError> {
    let params = config.params();
    let evolve = config.evolve.as_ref().expect("validated");
    if !matches!(evolve.initial, InitialState::UnitFilling) {
        return Err(TaskError::Config(
            "the kspace task evolves the unit-filling state".into(),
        ));
    }
    let times = time_grid(config);
    let mut table = Table::new("kspace", vec!["t", "k", "g_a", "g_b"]);
    for n in 0..params.n_cells {
        let k = 2.0 * std::f64::consts::PI * n as f64 / params.n_cells as f64;
        let gs = kspace::eom_evolve(
            &params,
            k,
            &kspace::TildeCorrelation::unit_filling(),
            &times,
        )?;
        for (i, g) in gs.iter().enumerate() {
            let (ga, gb) = kspace::g_k_from_tilde(g);
            table.push(vec![
                Value::Float(times[i]),
                Value::Float(k),
                Value::Float(ga.re),
                Value::Float(gb.re),
            ]);
        }
    }
    Ok(vec![table.write(dir, format)?])
}

fn task_skin_scan(
    config: &RunConfig,
    dir: &Path,
    format: OutputFormat,
) -> Result<Vec<PathBuf>, TaskError> {
    let base = config.params();
    let mut table = Table::new(
        "skin_scan",
        vec![
            "t1",
            "gamma_l",
            "gamma_g",
            "theta",
            "phi",
            "theta_p",
            "phi_p",
            "skin_absent",
            "residual",
        ],
    );
    let n_grid = 25;
    for i in 0..n_grid {
        let theta = std::f64::consts::PI * (0.02 + 0.46 * i as f64 / (n_grid - 1) as f64);
        for j in 0..n_grid {
            let phi = -std::f64::consts::PI + 2.0 * std::f64::consts::PI * j as f64 / n_grid as f64;
            let mut p = base;
            p.theta = theta;
            p.phi = phi;
            let absent = damping::skin_absent(&p);
            let residual = damping::skin_residual(&p)?;
            table.push(vec![
                Value::Float(p.t1),
                Value::Float(p.gamma_l),
                Value::Float(p.gamma_g),
                Value::Float(theta),
                Value::Float(phi),
                Value::Float(p.theta_p),
                Value::Float(p.phi_p),
                Value::Bool(absent),
                Value::Float(residual),
            ]);
        }
    }
    Ok(vec![table.write(dir, format)?])
}

fn task_oracle_check(
    config: &RunConfig,
    dir: &Path,
    format: OutputFormat,
) -> Result<Vec<PathBuf>, TaskError> {
    let mut params = config.params();
    params.n_cells = params.n_cells.min(2);
    let bc = config.boundary();
    let n = params.n_sites();
    let model = build_ssh_model(&params, bc)?;
    let mut table = Table::new("oracle_check", vec!["check", "value", "threshold", "pass"]);
    let mut all_ok = true;
    let record = |table: &mut Table, name: &str, value: f64, threshold: f64| -> bool {
        let pass = value < threshold;
        table.push(vec![
            Value::Text(name.to_string()),
            Value::Float(value),
            Value::Float(threshold),
            Value::Bool(pass),
        ]);
        println!(
            "oracle-check {name}: {value:.3e} (threshold {threshold:.1e}) {}",
            if pass { "ok" } else { "FAILED" }
        );
        pass
    };

    // trace preservation of the dense propagator
    let rho = oracle::dense_evolve(&model, &oracle::unit_filling_rho(n), 2.0)?;
    let trace_dev = (rho.diag().sum() - Complex64::new(1.0, 0.0)).norm();
    all_ok &= record(&mut table, "trace_preservation", trace_dev, 1e-10);

    // damping propagation against the dense evolution
    let x = damping::build_damping_matrix(&params, bc)?.x;
    let g_inf = damping::steady_state_correlation(&model)?;
    let dg0 = damping::unit_filling_deviation(&model)?;
    let mut worst = 0.0_f64;
    for &t in &[0.5, 2.0] {
        let rho_t = oracle::dense_evolve(&model, &oracle::unit_filling_rho(n), t)?;
        let g_dense = oracle::correlation_matrix(n, &rho_t);
        let dg = damping::propagate_deviation(&x, &dg0, t)?;
        for a in 0..n {
            for b in 0..n {
                worst = worst.max((g_dense[[a, b]] - dg[[a, b]] - g_inf[[a, b]]).norm());
            }
        }
    }
    all_ok &= record(&mut table, "damping_vs_dense", worst, 1e-7);

    // normal-mode route against the dense evolution (diagonal occupations);
    // a defective spectrum is a legitimate refusal, not a failure
    match decompose_ssh(&params, bc) {
        Ok(dec) => {
            let state = InitialGaussianState::unit_filling(n);
            let f2 = f2_coefficients(&dec, &adjoint_two_point_table(&state));
            let spectral = interference_amplitudes(&dec, &f2);
            let times = [0.5, 2.0];
            let series = delta_g_timeseries(&spectral, &times)?;
            let mut worst = 0.0_f64;
            for (i, &t) in times.iter().enumerate() {
                let rho_t = oracle::dense_evolve(&model, &oracle::unit_filling_rho(n), t)?;
                let g_dense = oracle::correlation_matrix(n, &rho_t);
                for s in 0..n {
                    worst = worst
                        .max((g_dense[[s, s]].re - g_inf[[s, s]].re - series.values[[i, s]]).abs());
                }
            }
            all_ok &= record(&mut table, "normal_modes_vs_dense", worst, 1e-7);
        }
        Err(e) => {
            println!("oracle-check normal_modes_vs_dense: skipped ({e})");
            table.push(vec![
                Value::Text("normal_modes_vs_dense_skipped".into()),
                Value::Float(0.0),
                Value::Float(0.0),
                Value::Bool(true),
            ]);
        }
    }

    // steady state against the long-time dense evolution
    let min_rate = 0.5
        * model
            .jumps
            .iter()
            .map(|j| {
                j.c_minus.iter().map(|z| z.norm_sqr()).sum::<f64>()
                    + j.c_plus.iter().map(|z| z.norm_sqr()).sum::<f64>()
            })
            .sum::<f64>()
            .max(1e-3);
    let rho_inf = oracle::dense_evolve(&model, &oracle::maximally_mixed(n), 200.0 / min_rate)?;
    let g_dense_inf = oracle::correlation_matrix(n, &rho_inf);
    let mut worst = 0.0_f64;
    for a in 0..n {
        for b in 0..n {
            worst = worst.max((g_dense_inf[[a, b]] - g_inf[[a, b]]).norm());
        }
    }
    all_ok &= record(&mut table, "steady_state_vs_dense", worst, 1e-6);

    let path = table.write(dir, format)?;
    if !all_ok {
        return Err(TaskError::Numerical(
            "oracle cross-checks failed; see oracle_check output".into(),
        ));
    }
    Ok(vec![path])
}
