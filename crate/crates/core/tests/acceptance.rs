//! Acceptance suite: one test per criterion, each printing a PASS/FAIL
//! line (run with `--nocapture` to see them).
//!
//! Three assertions (4a, 5, and the crossover detector inside 6) encode
//! reference constants from the source analysis that are exactly twice
//! the values this implementation computes and cross-validates against
//! brute-force evolution; they are kept as stated and fail. Each carries
//! a companion `*_exact` test asserting the verified value at the same
//! tolerance, so the physics behind the constant is still gated. See
//! README "Validation notes".

use lindblad_skin_core::damping;
use lindblad_skin_core::dynamics::{
    adjoint_two_point_table, delta_g_timeseries, f2_coefficients, interference_amplitudes,
    short_time_expansion, InitialGaussianState, SpectralAmplitudes,
};
use lindblad_skin_core::kspace;
use lindblad_skin_core::linalg::multiset_distance;
use lindblad_skin_core::majorana::MajoranaForm;
use lindblad_skin_core::model::{build_ssh_model, BoundaryCondition, SshParams};
use lindblad_skin_core::ness;
use lindblad_skin_core::oracle;
use lindblad_skin_core::thirdq::{
    build_structure_matrix, decompose_ssh, liouvillian_eigenvalues, rapidity_decompose,
    RapidityDecomposition,
};
use ndarray_linalg::Eig;
use num_complex::Complex64;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::f64::consts::PI;

const GP: f64 = 0.4;

fn standard(n_cells: usize, t1: f64) -> SshParams {
    SshParams::standard(n_cells, t1, 1.0, GP / 2.0, GP / 2.0)
}

fn report(criterion: &str, pass: bool, detail: &str) {
    println!(
        "criterion {criterion}: {} - {detail}",
        if pass { "PASS" } else { "FAIL" }
    );
}

fn spectral_pipeline(
    params: &SshParams,
    bc: BoundaryCondition,
) -> (RapidityDecomposition, SpectralAmplitudes) {
    let dec = decompose_ssh(params, bc).expect("decomposition");
    let state = InitialGaussianState::unit_filling(params.n_sites());
    let q = adjoint_two_point_table(&state);
    let f2 = f2_coefficients(&dec, &q);
    let spectral = interference_amplitudes(&dec, &f2);
    (dec, spectral)
}

#[test]
fn criterion_01_closed_form_block_spectra() {
    let p = SshParams::standard(10, 1.0, 1.0, GP / 2.0, GP / 2.0);
    let mut worst = 0.0_f64;
    for n in 0..100 {
        let k = 2.0 * PI * n as f64 / 100.0;
        let lams = kspace::closed_form_eigenvalues(&p, k).unwrap();
        let spec = kspace_block_spectrum(&p, k);
        let closed: Vec<Complex64> = lams.iter().flat_map(|l| [*l, l.conj()]).collect();
        worst = worst.max(multiset_distance(&closed, &spec));
    }
    let pass = worst < 1e-9;
    report(
        "1",
        pass,
        &format!("closed-form vs numeric block spectra over 100 wavenumbers: worst {worst:.2e} (tol 1e-9)"),
    );
    assert!(pass);
}

fn kspace_block_spectrum(p: &SshParams, k: f64) -> Vec<Complex64> {
    // T restricted to one wavenumber: drift kernel is -2 W, pump 2(M-M^T);
    // rebuild from the per-k Majorana data through the public pieces
    let block = kspace::k_block(p, k).unwrap();
    // W = -drift/2; T eigenvalues are +/- eig(W)
    let w = block.drift.mapv(|z| -z / 2.0);
    let (vals, _) = w.eig().unwrap();
    let mut out: Vec<Complex64> = vals.to_vec();
    out.extend(vals.iter().map(|z| -z));
    out
}

#[test]
fn criterion_02_zero_modes_and_rates_near_pi() {
    let p = SshParams::standard(10, 1.0, 1.0, GP / 2.0, GP / 2.0);
    let at_pi = kspace::closed_form_eigenvalues(&p, PI).unwrap();
    let zeros = at_pi.iter().filter(|l| l.norm() < 1e-10).count();

    let near = kspace::closed_form_eigenvalues(&p, 1.1 * PI).unwrap();
    let mut res: Vec<f64> = near.iter().map(|l| l.re).collect();
    res.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let slow_ok = (res[1] + 8.8e-4).abs() < 5e-5 && (res[2] - 8.8e-4).abs() < 5e-5;
    let fast_ok = (res[0] + 0.20).abs() < 5e-3 && (res[3] - 0.20).abs() < 5e-3;

    let pass = zeros == 2 && slow_ok && fast_ok;
    report(
        "2",
        pass,
        &format!(
            "{zeros} zero eigenvalues at k=pi; rates near 1.1 pi: {:?}",
            res
        ),
    );
    assert!(pass);
}

#[test]
fn criterion_03_steady_state_half_filling() {
    let p = standard(100, 0.8);
    let model = build_ssh_model(&p, BoundaryCondition::Open).unwrap();
    let dec = decompose_ssh(&p, BoundaryCondition::Open).unwrap();
    let prof = ness::ness_occupations(&dec, &model).unwrap();
    let worst = prof
        .values
        .iter()
        .map(|v| (v - 0.5).abs())
        .fold(0.0_f64, f64::max);
    let pass = prof.len() == 200 && worst < 1e-10;
    report(
        "3",
        pass,
        &format!("200-site steady state within {worst:.2e} of half filling (tol 1e-10)"),
    );
    assert!(pass);
}

#[test]
fn criterion_04a_mode_sum_rule_as_stated() {
    // per-mode occupation sums, asserted at the stated magnitude 1
    let p = standard(100, 0.8);
    let dec = decompose_ssh(&p, BoundaryCondition::Open).unwrap();
    let report_rows = ness::mode_report(&dec).unwrap();
    let worst = report_rows
        .iter()
        .map(|r| (r.delta_sum.abs() - 1.0).abs())
        .fold(0.0_f64, f64::max);
    let pass = worst < 1e-8;
    report(
        "4a",
        pass,
        &format!(
            "per-mode |sum| vs 1: worst deviation {worst:.2e} (tol 1e-8); \
             computed sums are +/-1/2, see criterion 4a-exact"
        ),
    );
    assert!(
        pass,
        "stated quantization +/-1 is twice the computed exact +/-1/2"
    );
}

#[test]
fn criterion_04a_exact_half_quantization() {
    let p = standard(100, 0.8);
    let dec = decompose_ssh(&p, BoundaryCondition::Open).unwrap();
    let rows = ness::mode_report(&dec).unwrap();
    let worst = rows
        .iter()
        .map(|r| (r.delta_sum.abs() - 0.5).abs())
        .fold(0.0_f64, f64::max);
    let n_plus = rows.iter().filter(|r| r.delta_sum > 0.0).count();
    let pass = worst < 1e-8 && n_plus == 200 && rows.len() == 400;
    report(
        "4a-exact",
        pass,
        &format!(
            "per-mode |sum| = 1/2 within {worst:.2e} (tol 1e-8); {n_plus} particle-like of {}",
            rows.len()
        ),
    );
    assert!(pass);
}

#[test]
fn criterion_04b_pair_amplitude_sum_rule() {
    let p = standard(20, 0.8);
    let (_, spectral) = spectral_pipeline(&p, BoundaryCondition::Open);
    let worst = spectral
        .site_sums()
        .iter()
        .map(|s| (s - Complex64::new(0.5, 0.0)).norm())
        .fold(0.0_f64, f64::max);
    let count_ok = spectral.pairs.len() == 3160;
    let pass = worst < 1e-8 && count_ok;
    report(
        "4b",
        pass,
        &format!(
            "per-site amplitude sums within {worst:.2e} of 1/2 (tol 1e-8); {} pairs (expect 3160)",
            spectral.pairs.len()
        ),
    );
    assert!(pass);
}

#[test]
fn criterion_05_uniform_pair_rate_as_stated() {
    let p = standard(20, 0.8);
    let (_, spectral) = spectral_pipeline(&p, BoundaryCondition::Open);
    let worst = spectral
        .pairs
        .iter()
        .map(|pair| (pair.omega.re + 2.0 * GP).abs())
        .fold(0.0_f64, f64::max);
    let pass = worst < 1e-8;
    report(
        "5",
        pass,
        &format!(
            "pair rates vs -2 gamma_+ = -0.8: worst deviation {worst:.2e} (tol 1e-8); \
             computed uniform rate is -gamma_+, see criterion 5-exact"
        ),
    );
    assert!(
        pass,
        "stated rate -2 gamma_+ is twice the computed exact -gamma_+"
    );
}

#[test]
fn criterion_05_exact_uniform_pair_rate() {
    let p = standard(20, 0.8);
    let (_, spectral) = spectral_pipeline(&p, BoundaryCondition::Open);
    let worst = spectral
        .pairs
        .iter()
        .map(|pair| (pair.omega.re + GP).abs())
        .fold(0.0_f64, f64::max);
    let pass = worst < 1e-8;
    report(
        "5-exact",
        pass,
        &format!("all 3160 pair rates equal -gamma_+ = -0.4 within {worst:.2e} (tol 1e-8)"),
    );
    assert!(pass);
}

fn chiral_series() -> (Vec<f64>, ndarray::Array2<f64>) {
    let p = standard(20, 0.8);
    let (_, spectral) = spectral_pipeline(&p, BoundaryCondition::Open);
    let times: Vec<f64> = (0..501).map(|i| i as f64 * 25.0 / 500.0).collect();
    let series = delta_g_timeseries(&spectral, &times).unwrap();
    (series.times, series.values)
}

/// First time the windowed log-slope of |dG_site| drops below `threshold`
/// (window half-width 1.5 in units of 1/t2).
fn crossover_time(
    times: &[f64],
    values: &ndarray::Array2<f64>,
    site: usize,
    threshold: f64,
) -> Option<f64> {
    let n = times.len();
    for i in 0..n {
        let t = times[i];
        let lo = times.partition_point(|&x| x < t - 1.5);
        let hi = times.partition_point(|&x| x <= t + 1.5);
        if hi - lo < 5 {
            continue;
        }
        // least-squares slope of log|dG| on the window
        let (mut st, mut sy, mut stt, mut sty) = (0.0, 0.0, 0.0, 0.0);
        let m = (hi - lo) as f64;
        for j in lo..hi {
            let y = values[[j, site]].abs().max(1e-300).ln();
            st += times[j];
            sy += y;
            stt += times[j] * times[j];
            sty += times[j] * y;
        }
        let slope = (m * sty - st * sy) / (m * stt - st * st);
        if slope < threshold {
            return Some(t);
        }
    }
    None
}

#[test]
fn criterion_06_chiral_damping() {
    let (times, values) = chiral_series();

    // emit the evolution curves for visual comparison
    let dir = std::path::Path::new(env!("CARGO_TARGET_TMPDIR"));
    let path = dir.join("chiral_damping_n40.csv");
    let mut csv = String::from("t,site,delta_g\n");
    for (i, &t) in times.iter().enumerate() {
        for s in 0..values.ncols() {
            csv.push_str(&format!("{t:.6},{},{:.16e}\n", s + 1, values[[i, s]]));
        }
    }
    std::fs::write(&path, csv).unwrap();

    // right end decays later than the left end throughout [5, 15]
    let mut ordering_ok = true;
    for (i, &t) in times.iter().enumerate() {
        if (5.0..=15.0).contains(&t) && values[[i, 38]].abs() <= values[[i, 0]].abs() {
            ordering_ok = false;
        }
    }

    // crossover detector at the stated threshold -0.9 * (2 gamma_+) * 0.9
    let stated_threshold = -0.9 * GP * 2.0 * 0.9;
    let stated: Vec<Option<f64>> = [0usize, 2, 4, 6, 8]
        .iter()
        .map(|&s| crossover_time(&times, &values, s, stated_threshold))
        .collect();
    let stated_increasing = stated.windows(2).all(|w| match (w[0], w[1]) {
        (Some(a), Some(b)) => b > a,
        _ => false,
    });

    let pass = ordering_ok && stated_increasing;
    report(
        "6",
        pass,
        &format!(
            "right-vs-left ordering on [5,15]: {ordering_ok}; staggered crossover at stated \
             threshold {stated_threshold:.3}: {stated:?} (curves: {})",
            path.display()
        ),
    );
    assert!(
        pass,
        "the stated detector threshold sits below the exact asymptotic rate -gamma_+; \
         see criterion 6-exact"
    );
}

#[test]
fn criterion_06_exact_staggered_crossover() {
    let (times, values) = chiral_series();
    // knee of the envelope-normalized trace e^{gamma_+ t} |dG_m(t)|: the
    // time the site joins the uniform exponential decay
    let knee = |site: usize| -> f64 {
        let mut best = (0.0, f64::NEG_INFINITY);
        for (i, &t) in times.iter().enumerate() {
            let v = (GP * t).exp() * values[[i, site]].abs();
            if v > best.1 {
                best = (t, v);
            }
        }
        best.0
    };
    let knees: Vec<f64> = [0usize, 2, 4, 6, 8].iter().map(|&s| knee(s)).collect();
    let increasing = knees.windows(2).all(|w| w[1] > w[0]);
    let mut ordering_ok = true;
    for (i, &t) in times.iter().enumerate() {
        if (5.0..=15.0).contains(&t) && values[[i, 38]].abs() <= values[[i, 0]].abs() {
            ordering_ok = false;
        }
    }
    let pass = increasing && ordering_ok;
    report(
        "6-exact",
        pass,
        &format!("sites 1,3,5,7,9 join the exponential regime at t = {knees:?}"),
    );
    assert!(pass);
}

#[test]
fn criterion_07_cross_method_equivalence() {
    // spectral vs damping propagation, 12 sites, 40 samples on [0, 20]
    let p = standard(6, 0.8);
    let (_, spectral) = spectral_pipeline(&p, BoundaryCondition::Open);
    let x = damping::build_damping_matrix(&p, BoundaryCondition::Open)
        .unwrap()
        .x;
    let model = build_ssh_model(&p, BoundaryCondition::Open).unwrap();
    let dg0 = damping::unit_filling_deviation(&model).unwrap();
    let times: Vec<f64> = (0..40).map(|i| i as f64 * 20.0 / 39.0).collect();
    let series = delta_g_timeseries(&spectral, &times).unwrap();
    let mut worst_damping = 0.0_f64;
    for (i, &t) in times.iter().enumerate() {
        let dg = damping::propagate_deviation(&x, &dg0, t).unwrap();
        for s in 0..12 {
            worst_damping = worst_damping.max((dg[[s, s]].re - series.values[[i, s]]).abs());
        }
    }

    // spectral (per wavenumber) vs rotated-basis equation of motion
    let pk = SshParams::standard(10, 1.0, 1.0, GP / 2.0, GP / 2.0);
    let mut worst_eom = 0.0_f64;
    for &k in &[0.3, 6.0 * PI / 13.0, 1.1 * PI, 10.0 * PI / 7.0] {
        let g_eom =
            kspace::eom_evolve(&pk, k, &kspace::TildeCorrelation::unit_filling(), &times).unwrap();
        // adjoint route on the 2-mode wavenumber model
        let a = Complex64::new(pk.t1, 0.0) + pk.t2 * Complex64::from_polar(1.0, -k);
        let mut h = ndarray::Array2::<Complex64>::zeros((2, 2));
        h[[0, 1]] = a;
        h[[1, 0]] = a.conj();
        let ham = lindblad_skin_core::model::HamiltonianSpec::new(h).unwrap();
        let amp = (GP / 4.0).sqrt();
        let jumps = vec![
            lindblad_skin_core::model::JumpOperatorSpec::new(
                ndarray::Array1::from_vec(vec![
                    Complex64::new(amp, 0.0),
                    Complex64::new(0.0, -amp),
                ]),
                ndarray::Array1::zeros(2),
            )
            .unwrap(),
            lindblad_skin_core::model::JumpOperatorSpec::new(
                ndarray::Array1::zeros(2),
                ndarray::Array1::from_vec(vec![Complex64::new(amp, 0.0), Complex64::new(0.0, amp)]),
            )
            .unwrap(),
        ];
        let model_k =
            lindblad_skin_core::model::ModelSpec::new(ham, jumps, BoundaryCondition::Open).unwrap();
        let form = MajoranaForm::from_model(&model_k).unwrap();
        let dec_k = rapidity_decompose(&build_structure_matrix(&form)).unwrap();
        let state = InitialGaussianState::unit_filling(2);
        let f2 = f2_coefficients(&dec_k, &adjoint_two_point_table(&state));
        let sp_k = interference_amplitudes(&dec_k, &f2);
        let adj = delta_g_timeseries(&sp_k, &times).unwrap();
        for (i, gt) in g_eom.iter().enumerate() {
            let (ga, gb) = kspace::g_k_from_tilde(gt);
            worst_eom = worst_eom.max((ga.re - (adj.values[[i, 0]] + 0.5)).abs());
            worst_eom = worst_eom.max((gb.re - (adj.values[[i, 1]] + 0.5)).abs());
        }
    }

    let pass = worst_damping < 1e-8 && worst_eom < 1e-8;
    report(
        "7",
        pass,
        &format!(
            "spectral vs damping (12 sites): {worst_damping:.2e}; spectral vs rotated-basis \
             equation of motion: {worst_eom:.2e} (tol 1e-8; rate constant gamma_+/2)"
        ),
    );
    assert!(pass);
}

#[test]
fn criterion_08_oracle_equivalence() {
    let times = [0.5, 2.0, 8.0];

    // open boundaries, all three methods
    let p = standard(2, 0.8);
    let model = build_ssh_model(&p, BoundaryCondition::Open).unwrap();
    let (_, spectral) = spectral_pipeline(&p, BoundaryCondition::Open);
    let x = damping::build_damping_matrix(&p, BoundaryCondition::Open)
        .unwrap()
        .x;
    let dg0 = damping::unit_filling_deviation(&model).unwrap();
    let series = delta_g_timeseries(&spectral, &times).unwrap();
    let mut worst_obc = 0.0_f64;
    for (i, &t) in times.iter().enumerate() {
        let rho = oracle::dense_evolve(&model, &oracle::unit_filling_rho(4), t).unwrap();
        let g = oracle::correlation_matrix(4, &rho);
        let dg = damping::propagate_deviation(&x, &dg0, t).unwrap();
        for m in 0..4 {
            for n in 0..4 {
                let target = if m == n { 0.5 } else { 0.0 };
                worst_obc =
                    worst_obc.max((g[[m, n]] - dg[[m, n]] - Complex64::new(target, 0.0)).norm());
            }
            worst_obc = worst_obc.max((g[[m, m]].re - 0.5 - series.values[[i, m]]).abs());
        }
    }

    // periodic boundaries at t1 = 0.8: the wavenumber-pi block is
    // defective, the normal-mode route must refuse, and the damping route
    // must still match the brute force
    let model_pbc = build_ssh_model(&p, BoundaryCondition::Periodic).unwrap();
    let spectral_refuses = decompose_ssh(&p, BoundaryCondition::Periodic).is_err();
    let x_pbc = damping::build_damping_matrix(&p, BoundaryCondition::Periodic)
        .unwrap()
        .x;
    let dg0_pbc = damping::unit_filling_deviation(&model_pbc).unwrap();
    let mut worst_pbc = 0.0_f64;
    for &t in &times {
        let rho = oracle::dense_evolve(&model_pbc, &oracle::unit_filling_rho(4), t).unwrap();
        let g = oracle::correlation_matrix(4, &rho);
        let dg = damping::propagate_deviation(&x_pbc, &dg0_pbc, t).unwrap();
        for m in 0..4 {
            for n in 0..4 {
                let target = if m == n { 0.5 } else { 0.0 };
                worst_pbc =
                    worst_pbc.max((g[[m, n]] - dg[[m, n]] - Complex64::new(target, 0.0)).norm());
            }
        }
    }

    // periodic boundaries at t1 = t2 = 1: zero modes present, normal-mode
    // route applies (the zero sector is split by the vacuum conditions)
    let p_pbc = SshParams::standard(2, 1.0, 1.0, GP / 2.0, GP / 2.0);
    let model_pbc2 = build_ssh_model(&p_pbc, BoundaryCondition::Periodic).unwrap();
    let (_, spectral_pbc) = spectral_pipeline(&p_pbc, BoundaryCondition::Periodic);
    let series_pbc = delta_g_timeseries(&spectral_pbc, &times).unwrap();
    let mut worst_pbc2 = 0.0_f64;
    for (i, &t) in times.iter().enumerate() {
        let rho = oracle::dense_evolve(&model_pbc2, &oracle::unit_filling_rho(4), t).unwrap();
        let g = oracle::correlation_matrix(4, &rho);
        for m in 0..4 {
            worst_pbc2 = worst_pbc2.max((g[[m, m]].re - 0.5 - series_pbc.values[[i, m]]).abs());
        }
    }

    // adjoint-space spectrum at 3 modes
    let p3 = standard(1, 0.8);
    let mut h3 = ndarray::Array2::<Complex64>::zeros((3, 3));
    h3[[0, 1]] = Complex64::new(0.8, 0.0);
    h3[[1, 0]] = Complex64::new(0.8, 0.0);
    h3[[1, 2]] = Complex64::new(1.0, 0.0);
    h3[[2, 1]] = Complex64::new(1.0, 0.0);
    let _ = p3;
    let ham3 = lindblad_skin_core::model::HamiltonianSpec::new(h3).unwrap();
    let jumps3 = lindblad_skin_core::model::build_standard_jumps(1, GP / 2.0, GP / 2.0).unwrap();
    // extend the cell jumps to 3 sites: pad with a pure site-3 loss
    let mut jvec = Vec::new();
    for j in &jumps3 {
        let mut cm = ndarray::Array1::<Complex64>::zeros(3);
        let mut cp = ndarray::Array1::<Complex64>::zeros(3);
        for s in 0..2 {
            cm[s] = j.c_minus[s];
            cp[s] = j.c_plus[s];
        }
        jvec.push(lindblad_skin_core::model::JumpOperatorSpec::new(cm, cp).unwrap());
    }
    let mut cm3 = ndarray::Array1::<Complex64>::zeros(3);
    cm3[2] = Complex64::new(0.3_f64.sqrt(), 0.0);
    jvec.push(
        lindblad_skin_core::model::JumpOperatorSpec::new(cm3, ndarray::Array1::zeros(3)).unwrap(),
    );
    let model3 =
        lindblad_skin_core::model::ModelSpec::new(ham3, jvec, BoundaryCondition::Open).unwrap();
    let form3 = MajoranaForm::from_model(&model3).unwrap();
    let dec3 = rapidity_decompose(&build_structure_matrix(&form3)).unwrap();
    let adj = oracle::dense_adjoint_build(3).unwrap();
    let lplus = adj.liouvillian_plus(&form3);
    let (dense_spec, _) = lplus.eig().unwrap();
    let predicted = liouvillian_eigenvalues(&dec3);
    let spec_dist = multiset_distance(&predicted, &dense_spec.to_vec());

    let pass = worst_obc < 1e-7
        && spectral_refuses
        && worst_pbc < 1e-7
        && worst_pbc2 < 1e-7
        && spec_dist < 1e-7;
    report(
        "8",
        pass,
        &format!(
            "open: {worst_obc:.2e}; periodic (defective block -> damping only, normal-mode \
             refusal={spectral_refuses}): {worst_pbc:.2e}; periodic equal-hopping with zero \
             modes: {worst_pbc2:.2e}; 3-mode adjoint spectrum: {spec_dist:.2e} (tol 1e-7)"
        ),
    );
    assert!(pass);
}

#[test]
fn criterion_09_short_time_coefficients() {
    let p = standard(6, 0.8);
    let c1 = short_time_expansion(&p, BoundaryCondition::Open, 0, 2).unwrap();
    let c2 = short_time_expansion(&p, BoundaryCondition::Open, 1, 2).unwrap();
    let lin = -GP / 2.0;
    let quad1 = (GP * GP - p.t1 * GP) / 2.0;
    let quad2 = (GP * GP + p.t1 * GP) / 2.0;
    let rel = |got: f64, want: f64| ((got - want) / want).abs();
    let worst = rel(c1[1], lin)
        .max(rel(c2[1], lin))
        .max(rel(c1[2], quad1))
        .max(rel(c2[2], quad2));
    let pass = worst < 1e-6;
    report(
        "9",
        pass,
        &format!(
            "linear {:.6}/{:.6} (want {lin}), quadratic {:.6}/{:.6} (want {quad1}/{quad2}); \
             worst relative {worst:.2e} (tol 1e-6)",
            c1[1], c2[1], c1[2], c2[2]
        ),
    );
    assert!(pass);
}

#[test]
fn criterion_10_skin_absence_predicate() {
    let mut rng = ChaCha8Rng::seed_from_u64(20260809);
    let mut checked = 0usize;
    let mut agreement = true;
    for _ in 0..1000 {
        let p = SshParams {
            n_cells: 2,
            t1: rng.gen_range(0.0..2.0),
            t2: 1.0,
            gamma_l: rng.gen_range(0.0..1.0),
            gamma_g: rng.gen_range(0.0..1.0),
            theta: rng.gen_range(-PI..PI),
            phi: rng.gen_range(-PI..PI),
            theta_p: rng.gen_range(-PI..PI),
            phi_p: rng.gen_range(-PI..PI),
        };
        let predicate = damping::skin_absent(&p);
        let residual = damping::skin_residual(&p).unwrap();
        if predicate != (residual < 1e-10) {
            agreement = false;
        }
        checked += 1;
    }
    // constrained draws: enforce the angle condition, expect residual 0
    let mut constrained = 0usize;
    while constrained < 100 {
        let mut p = SshParams {
            n_cells: 2,
            t1: rng.gen_range(0.1..2.0),
            t2: 1.0,
            gamma_l: rng.gen_range(0.1..1.0),
            gamma_g: 0.0,
            theta: rng.gen_range(0.3..1.2),
            phi: rng.gen_range(-PI..PI),
            theta_p: rng.gen_range(0.3..1.2),
            phi_p: rng.gen_range(0.3..1.2),
        };
        let target = p.gamma_l * p.phi.sin() * p.theta.sin() * p.theta.cos();
        let denom = p.phi_p.sin() * p.theta_p.sin() * p.theta_p.cos();
        let gg = target / denom;
        if !(0.0..=2.0).contains(&gg) {
            continue;
        }
        p.gamma_g = gg;
        if !damping::skin_absent(&p) || damping::skin_residual(&p).unwrap() > 1e-10 {
            agreement = false;
        }
        constrained += 1;
    }
    let pass = agreement && checked == 1000 && constrained == 100;
    report(
        "10",
        pass,
        &format!(
            "predicate vs |X_12|=|X_21| on {checked} random + {constrained} constrained draws"
        ),
    );
    assert!(pass);
}

#[test]
fn criterion_11_periodic_uniformity() {
    let p = standard(20, 0.8);
    let mut worst = 0.0_f64;
    for &t in &[1.0, 5.0, 20.0] {
        let (prof, spread) = kspace::real_space_occupations_pbc(&p, t).unwrap();
        // uniformity within each sublattice across cells
        for parity in 0..2 {
            let vals: Vec<f64> = prof
                .values
                .iter()
                .skip(parity)
                .step_by(2)
                .copied()
                .collect();
            let mx = vals.iter().cloned().fold(f64::MIN, f64::max);
            let mn = vals.iter().cloned().fold(f64::MAX, f64::min);
            worst = worst.max(mx - mn);
        }
        worst = worst.max(spread);
    }
    let pass = worst < 1e-10;
    report(
        "11",
        pass,
        &format!("per-sublattice spread across cells: {worst:.2e} (tol 1e-10)"),
    );
    assert!(pass);
}
