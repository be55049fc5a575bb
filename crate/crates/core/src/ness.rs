//! Steady-state and single-mode occupation observables.
//!
//! In the adjoint representation the site occupation maps to the
//! left-multiplication operator (1 - 2i A_{4s} A_{4s+2})/2 (0-based site
//! s), and expectation values against the steady state reduce to Wick
//! contractions with the single nonvanishing elementary contraction
//! (1| B_i B~_j |ness) = delta_ij. The steady-state occupation is then
//! 1/2 - i S_s and a single excited mode n shifts it by the mode's own
//! bilinear term, where S_s sums the B~/B row products over modes.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::model::ModelSpec;
use crate::oracle;
use crate::thirdq::RapidityDecomposition;

const RANGE_TOL: f64 = 1e-8;
const IMAG_TOL: f64 = 1e-6;

/// Per-site occupations or occupation differences.
#[derive(Debug, Clone)]
pub struct OccupationProfile {
    pub values: Vec<f64>,
}

impl OccupationProfile {
    /// Absolute occupations: entries must lie in [0, 1] up to tolerance.
    pub fn absolute(values: Vec<f64>) -> Result<Self> {
        if let Some(&bad) = values
            .iter()
            .find(|v| **v < -RANGE_TOL || **v > 1.0 + RANGE_TOL)
        {
            return Err(Error::InvalidParameter(format!(
                "occupation {bad} outside [0, 1]"
            )));
        }
        Ok(Self { values })
    }

    /// Occupation differences: entries must lie in [-1, 1] up to tolerance.
    pub fn difference(values: Vec<f64>) -> Result<Self> {
        if let Some(&bad) = values
            .iter()
            .find(|v| **v < -1.0 - RANGE_TOL || **v > 1.0 + RANGE_TOL)
        {
            return Err(Error::InvalidParameter(format!(
                "occupation difference {bad} outside [-1, 1]"
            )));
        }
        Ok(Self { values })
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

/// S_s = sum_i V[2i+1, 4s] V[2i, 4s+2]: the vacuum contraction of the
/// occupation bilinear at site s. Vanishes identically when the steady
/// state is the identity.
fn vacuum_site_sums(dec: &RapidityDecomposition) -> Vec<Complex64> {
    let n2 = dec.n_modes();
    let n_sites = dec.n_sites();
    (0..n_sites)
        .map(|s| {
            let (a, b) = (4 * s, 4 * s + 2);
            (0..n2)
                .map(|i| dec.v[[2 * i + 1, a]] * dec.v[[2 * i, b]])
                .sum()
        })
        .collect()
}

/// Steady-state site occupations.
///
/// For pump-free models (the steady state is the adjoint vacuum) the Wick
/// evaluation 1/2 - i S_s applies at any size. Otherwise the dense
/// brute-force evolution provides the answer at oracle sizes and the
/// computation is refused beyond them.
pub fn ness_occupations(
    dec: &RapidityDecomposition,
    model: &ModelSpec,
) -> Result<OccupationProfile> {
    if dec.zero_mode_flags.iter().any(|&f| f) {
        return Err(Error::UnsupportedRegime(
            "no unique steady state: non-decaying modes retain initial-state memory".into(),
        ));
    }
    if dec.b_vacuum_residual < 1e-8 {
        let sums = vacuum_site_sums(dec);
        let mut values = Vec::with_capacity(sums.len());
        for s in sums {
            let g = Complex64::new(0.5, 0.0) - Complex64::i() * s;
            if g.im.abs() > IMAG_TOL {
                return Err(Error::ResidueTooLarge(g.im.abs()));
            }
            values.push(g.re);
        }
        return OccupationProfile::absolute(values);
    }
    if model.n_modes() <= oracle::MAX_PHYSICAL_MODES {
        let min_rate = dec.betas.iter().map(|b| b.re).fold(f64::INFINITY, f64::min);
        if min_rate < 1e-9 {
            return Err(Error::UnsupportedRegime(
                "no unique steady state: a rapidity has vanishing real part".into(),
            ));
        }
        let t_long = 100.0 / min_rate;
        let rho_inf =
            oracle::dense_evolve(model, &oracle::maximally_mixed(model.n_modes()), t_long)?;
        let g = oracle::correlation_matrix(model.n_modes(), &rho_inf);
        let values = (0..model.n_modes()).map(|m| g[[m, m]].re).collect();
        return OccupationProfile::absolute(values);
    }
    Err(Error::UnsupportedRegime(format!(
        "pumped steady state beyond the oracle limit of {} modes",
        oracle::MAX_PHYSICAL_MODES
    )))
}

/// Occupation difference profile of a single excited normal mode:
/// Delta_s = -i [S_s + V_B[n, 4s] V_B~[n, 4s+2] - V_B~[n, 4s] V_B[n, 4s+2]].
///
/// Requires the steady state to be the adjoint vacuum (pump-free model);
/// mode indices are 0-based.
pub fn single_mode_delta(dec: &RapidityDecomposition, mode: usize) -> Result<OccupationProfile> {
    if mode >= dec.n_modes() {
        return Err(Error::InvalidParameter(format!(
            "mode index {mode} out of range ({} modes)",
            dec.n_modes()
        )));
    }
    if dec.b_vacuum_residual > 1e-8 {
        return Err(Error::UnsupportedRegime(format!(
            "steady state is not the adjoint vacuum (residual {:.2e}); \
             single-mode profiles need a pump-free model",
            dec.b_vacuum_residual
        )));
    }
    let sums = vacuum_site_sums(dec);
    let mut values = Vec::with_capacity(dec.n_sites());
    let i1 = Complex64::i();
    for (site, s) in sums.iter().enumerate() {
        let (a, b) = (4 * site, 4 * site + 2);
        let term = dec.v[[2 * mode, a]] * dec.v[[2 * mode + 1, b]]
            - dec.v[[2 * mode + 1, a]] * dec.v[[2 * mode, b]];
        let delta = -i1 * (s + term);
        if delta.im.abs() > IMAG_TOL {
            return Err(Error::ResidueTooLarge(delta.im.abs()));
        }
        values.push(delta.re);
    }
    OccupationProfile::difference(values)
}

/// One row of the mode report: a mode, its rapidity, its occupation
/// difference profile, and the profile sum (its particle/hole charge).
#[derive(Debug, Clone)]
pub struct ModeObservation {
    pub mode: usize,
    pub beta: Complex64,
    pub profile: OccupationProfile,
    pub delta_sum: f64,
}

/// Profiles for every decaying mode, sorted by descending |Re beta| then
/// ascending Im beta. The sign of each mode's profile sum is recorded
/// empirically; it is not predicted.
pub fn mode_report(dec: &RapidityDecomposition) -> Result<Vec<ModeObservation>> {
    let mut rows = Vec::with_capacity(dec.n_modes());
    for mode in 0..dec.n_modes() {
        if dec.zero_mode_flags[mode] {
            continue;
        }
        let profile = single_mode_delta(dec, mode)?;
        let delta_sum = profile.values.iter().sum();
        rows.push(ModeObservation {
            mode,
            beta: dec.betas[mode],
            profile,
            delta_sum,
        });
    }
    rows.sort_by(|a, b| {
        (-a.beta.re.abs(), a.beta.im, a.mode)
            .partial_cmp(&(-b.beta.re.abs(), b.beta.im, b.mode))
            .unwrap()
    });
    Ok(rows)
}
