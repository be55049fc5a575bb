//! Majorana-basis form of the problem.
//!
//! With w_{2m-1} = d_m + d_m^dag and w_{2m} = i(d_m - d_m^dag) the
//! Hamiltonian becomes sum_{mn} w_m H_{mn} w_n + Tr(h)/2 with H purely
//! imaginary and antisymmetric, each jump operator becomes a linear form
//! l . w, and the bath enters through the Hermitian positive-semidefinite
//! matrix M = sum_mu l_mu l_mu^dag.
//!
//! Majorana indices are 0-based here: site s carries Majorana modes 2s and
//! 2s + 1.

use ndarray::{Array1, Array2};
use ndarray_linalg::{Eigh, UPLO};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{antisymmetry_residual, hermiticity_residual};
use crate::model::{HamiltonianSpec, JumpOperatorSpec, ModelSpec, SshParams};

const VALIDATION_TOL: f64 = 1e-10;

/// Majorana kernel H, bath matrix M, and the scalar left over from
/// normal-ordering the Hamiltonian.
#[derive(Debug, Clone)]
pub struct MajoranaForm {
    pub h: Array2<Complex64>,
    pub m: Array2<Complex64>,
    pub trace_shift: f64,
}

impl MajoranaForm {
    pub fn from_model(model: &ModelSpec) -> Result<Self> {
        let (h, trace_shift) = dirac_to_majorana_h(&model.hamiltonian)?;
        let vectors: Vec<MajoranaJumpVector> = model.jumps.iter().map(jump_to_majorana).collect();
        let m = bath_matrix(&vectors)?;
        let form = Self { h, m, trace_shift };
        form.validate()?;
        Ok(form)
    }

    /// Number of Majorana modes (2 per site).
    pub fn n_majorana(&self) -> usize {
        self.h.nrows()
    }

    fn validate(&self) -> Result<()> {
        let anti = antisymmetry_residual(&self.h);
        let imag = self.h.iter().map(|z| z.re.abs()).fold(0.0, f64::max);
        if anti > VALIDATION_TOL || imag > VALIDATION_TOL {
            return Err(Error::InvalidParameter(format!(
                "Majorana kernel not purely imaginary antisymmetric: {:.2e}/{:.2e}",
                anti, imag
            )));
        }
        let herm = hermiticity_residual(&self.m);
        if herm > VALIDATION_TOL {
            return Err(Error::NotHermitian {
                residual: herm,
                tol: VALIDATION_TOL,
            });
        }
        let (evals, _) = self.m.eigh(UPLO::Lower)?;
        if evals.iter().any(|&e| e < -VALIDATION_TOL) {
            return Err(Error::InvalidParameter(format!(
                "bath matrix not positive semidefinite: min eigenvalue {:.2e}",
                evals.iter().cloned().fold(f64::INFINITY, f64::min)
            )));
        }
        Ok(())
    }
}

/// One jump operator as a length-2N Majorana coefficient vector.
#[derive(Debug, Clone)]
pub struct MajoranaJumpVector {
    pub l: Array1<Complex64>,
}

/// Majorana kernel of a Hermitian single-particle matrix:
///
///   H_{2m-1,2n-1} = H_{2m,2n} = (h_{mn} - h_{nm})/8,
///   H_{2m-1,2n} = -i (h_{mn} + h_{nm})/8,   H_{2m,2n-1} = +i (...)/8,
///
/// together with the scalar Tr(h)/2 that restores the operator identity
/// sum w H w + shift = H.
pub fn dirac_to_majorana_h(spec: &HamiltonianSpec) -> Result<(Array2<Complex64>, f64)> {
    let h = spec.matrix();
    let n = spec.n_modes();
    let mut out = Array2::<Complex64>::zeros((2 * n, 2 * n));
    let i8 = Complex64::new(0.0, 0.125);
    for m in 0..n {
        for nn in 0..n {
            let diff = (h[[m, nn]] - h[[nn, m]]) / 8.0;
            let sum = h[[m, nn]] + h[[nn, m]];
            out[[2 * m, 2 * nn]] = diff;
            out[[2 * m, 2 * nn + 1]] = -i8 * sum;
            out[[2 * m + 1, 2 * nn]] = i8 * sum;
            out[[2 * m + 1, 2 * nn + 1]] = diff;
        }
    }
    let trace_shift: f64 = (0..n).map(|m| h[[m, m]].re).sum::<f64>() / 2.0;
    Ok((out, trace_shift))
}

/// Majorana coefficients of a jump operator:
/// l_{2m-1} = (c^-_m + c^+_m)/2, l_{2m} = -i (c^-_m - c^+_m)/2.
pub fn jump_to_majorana(jump: &JumpOperatorSpec) -> MajoranaJumpVector {
    let n = jump.n_modes();
    let mut l = Array1::<Complex64>::zeros(2 * n);
    let half_i = Complex64::new(0.0, 0.5);
    for m in 0..n {
        l[2 * m] = (jump.c_minus[m] + jump.c_plus[m]) / 2.0;
        l[2 * m + 1] = -half_i * (jump.c_minus[m] - jump.c_plus[m]);
    }
    MajoranaJumpVector { l }
}

/// M = sum_mu l_mu l_mu^dag.
pub fn bath_matrix(vectors: &[MajoranaJumpVector]) -> Result<Array2<Complex64>> {
    let n2 = match vectors.first() {
        Some(v) => v.l.len(),
        None => return Err(Error::InvalidParameter("no jump vectors".into())),
    };
    let mut m = Array2::<Complex64>::zeros((n2, n2));
    for v in vectors {
        if v.l.len() != n2 {
            return Err(Error::DimensionMismatch {
                expected: n2,
                got: v.l.len(),
            });
        }
        for i in 0..n2 {
            for j in 0..n2 {
                m[[i, j]] += v.l[i] * v.l[j].conj();
            }
        }
    }
    Ok(m)
}

/// Closed-form loss and gain bath matrices for cellular jumps, assembled
/// as block-diagonal matrices of 4 x 4 per-cell blocks. An independent
/// construction path: their sum must equal `bath_matrix` over the Majorana
/// vectors of the same parameters.
pub fn general_bath_matrices(params: &SshParams) -> Result<(Array2<Complex64>, Array2<Complex64>)> {
    params.validate()?;
    let n2 = 2 * params.n_sites();
    let i = Complex64::i();
    let r = |x: f64| Complex64::new(x, 0.0);

    let (ct, st) = (params.theta.cos(), params.theta.sin());
    let (cp, sp) = (params.phi.cos(), params.phi.sin());
    let (ctp, stp) = (params.theta_p.cos(), params.theta_p.sin());
    let (cpp, spp) = (params.phi_p.cos(), params.phi_p.sin());
    let sc = st * ct;
    let scp = stp * ctp;

    // per-cell blocks; symmetric and antisymmetric dissipative parts combined
    let gl4 = params.gamma_l / 4.0;
    let block_l = [
        [
            r(ct * ct),
            i * ct * ct,
            (r(cp) - i * sp) * sc,
            (r(sp) + i * cp) * sc,
        ],
        [
            -i * ct * ct,
            r(ct * ct),
            (-r(sp) - i * cp) * sc,
            (r(cp) - i * sp) * sc,
        ],
        [
            (r(cp) + i * sp) * sc,
            (-r(sp) + i * cp) * sc,
            r(st * st),
            i * st * st,
        ],
        [
            (r(sp) - i * cp) * sc,
            (r(cp) + i * sp) * sc,
            -i * st * st,
            r(st * st),
        ],
    ];
    let gg4 = params.gamma_g / 4.0;
    let block_g = [
        [
            r(ctp * ctp),
            -i * ctp * ctp,
            (r(cpp) - i * spp) * scp,
            (-r(spp) - i * cpp) * scp,
        ],
        [
            i * ctp * ctp,
            r(ctp * ctp),
            (r(spp) + i * cpp) * scp,
            (r(cpp) - i * spp) * scp,
        ],
        [
            (r(cpp) + i * spp) * scp,
            (r(spp) - i * cpp) * scp,
            r(stp * stp),
            -i * stp * stp,
        ],
        [
            (-r(spp) + i * cpp) * scp,
            (r(cpp) + i * spp) * scp,
            i * stp * stp,
            r(stp * stp),
        ],
    ];

    let mut m_l = Array2::<Complex64>::zeros((n2, n2));
    let mut m_g = Array2::<Complex64>::zeros((n2, n2));
    for cell in 0..params.n_cells {
        let o = 4 * cell;
        for a in 0..4 {
            for b in 0..4 {
                m_l[[o + a, o + b]] = block_l[a][b] * gl4;
                m_g[[o + a, o + b]] = block_g[a][b] * gg4;
            }
        }
    }
    Ok((m_l, m_g))
}
