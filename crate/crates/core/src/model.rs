//! Physical problem definition: quadratic fermionic Hamiltonians
//!
//!   H = sum_{mn} d_m^dag h_{mn} d_n,
//!
//! linear jump operators
//!
//!   L_mu = sum_m c^-_{mu,m} d_m + c^+_{mu,m} d_m^dag,
//!
//! and builders for the dissipative SSH chain with cellular loss/gain.
//!
//! Site ordering is fixed as (cell 1 A, cell 1 B, cell 2 A, ...); all
//! downstream index maps assume it. Energies are in units of the inter-cell
//! hopping t2, times in 1/t2, with hbar = 1.

use ndarray::{Array1, Array2};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::hermiticity_residual;

const HERMITICITY_TOL: f64 = 1e-12;

/// Chain boundary condition.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoundaryCondition {
    Open,
    Periodic,
}

/// Single-particle Hamiltonian coefficients h_{mn} (Hermitian).
#[derive(Debug, Clone)]
pub struct HamiltonianSpec {
    h: Array2<Complex64>,
}

impl HamiltonianSpec {
    /// Validates Hermiticity to 1e-12.
    pub fn new(h: Array2<Complex64>) -> Result<Self> {
        if h.nrows() != h.ncols() {
            return Err(Error::DimensionMismatch {
                expected: h.nrows(),
                got: h.ncols(),
            });
        }
        if h.nrows() == 0 {
            return Err(Error::InvalidParameter("empty Hamiltonian".into()));
        }
        let residual = hermiticity_residual(&h);
        if residual > HERMITICITY_TOL {
            return Err(Error::NotHermitian {
                residual,
                tol: HERMITICITY_TOL,
            });
        }
        Ok(Self { h })
    }

    /// Number of Dirac modes (sites).
    pub fn n_modes(&self) -> usize {
        self.h.nrows()
    }

    pub fn matrix(&self) -> &Array2<Complex64> {
        &self.h
    }
}

/// Coefficient vectors (c^-, c^+) of one linear jump operator.
#[derive(Debug, Clone)]
pub struct JumpOperatorSpec {
    pub c_minus: Array1<Complex64>,
    pub c_plus: Array1<Complex64>,
}

impl JumpOperatorSpec {
    pub fn new(c_minus: Array1<Complex64>, c_plus: Array1<Complex64>) -> Result<Self> {
        if c_minus.len() != c_plus.len() {
            return Err(Error::DimensionMismatch {
                expected: c_minus.len(),
                got: c_plus.len(),
            });
        }
        Ok(Self { c_minus, c_plus })
    }

    pub fn n_modes(&self) -> usize {
        self.c_minus.len()
    }
}

/// A complete open-system specification.
#[derive(Debug, Clone)]
pub struct ModelSpec {
    pub hamiltonian: HamiltonianSpec,
    pub jumps: Vec<JumpOperatorSpec>,
    pub boundary: BoundaryCondition,
}

impl ModelSpec {
    pub fn new(
        hamiltonian: HamiltonianSpec,
        jumps: Vec<JumpOperatorSpec>,
        boundary: BoundaryCondition,
    ) -> Result<Self> {
        let n = hamiltonian.n_modes();
        for j in &jumps {
            if j.n_modes() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    got: j.n_modes(),
                });
            }
        }
        Ok(Self {
            hamiltonian,
            jumps,
            boundary,
        })
    }

    pub fn n_modes(&self) -> usize {
        self.hamiltonian.n_modes()
    }
}

/// SSH chain parameters with cellular loss/gain couplings.
///
/// Per cell, the loss operator couples to site A with amplitude
/// sqrt(gamma_l) cos(theta) and to site B with sqrt(gamma_l) e^{i phi}
/// sin(theta); the gain operator analogously with the primed angles on the
/// creation side. The combination theta = theta' = pi/4, phi = -pi/2,
/// phi' = pi/2 reproduces the standard loss sqrt(gamma_l/2)(d_A - i d_B)
/// and gain sqrt(gamma_g/2)(d_A^dag + i d_B^dag).
#[derive(Debug, Clone, Copy)]
pub struct SshParams {
    pub n_cells: usize,
    pub t1: f64,
    pub t2: f64,
    pub gamma_l: f64,
    pub gamma_g: f64,
    pub theta: f64,
    pub phi: f64,
    pub theta_p: f64,
    pub phi_p: f64,
}

impl SshParams {
    /// Standard-angle parameter set.
    pub fn standard(n_cells: usize, t1: f64, t2: f64, gamma_l: f64, gamma_g: f64) -> Self {
        Self {
            n_cells,
            t1,
            t2,
            gamma_l,
            gamma_g,
            theta: std::f64::consts::FRAC_PI_4,
            phi: -std::f64::consts::FRAC_PI_2,
            theta_p: std::f64::consts::FRAC_PI_4,
            phi_p: std::f64::consts::FRAC_PI_2,
        }
    }

    pub fn gamma_plus(&self) -> f64 {
        self.gamma_l + self.gamma_g
    }

    pub fn gamma_minus(&self) -> f64 {
        self.gamma_l - self.gamma_g
    }

    /// True when the angles equal the standard combination.
    pub fn has_standard_angles(&self) -> bool {
        let pi4 = std::f64::consts::FRAC_PI_4;
        let pi2 = std::f64::consts::FRAC_PI_2;
        (self.theta - pi4).abs() < 1e-14
            && (self.theta_p - pi4).abs() < 1e-14
            && (self.phi + pi2).abs() < 1e-14
            && (self.phi_p - pi2).abs() < 1e-14
    }

    pub fn n_sites(&self) -> usize {
        2 * self.n_cells
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_cells == 0 {
            return Err(Error::InvalidParameter("n_cells must be >= 1".into()));
        }
        if self.gamma_l < 0.0 || self.gamma_g < 0.0 {
            return Err(Error::InvalidParameter(
                "loss and gain rates must be non-negative".into(),
            ));
        }
        for a in [
            self.theta,
            self.phi,
            self.theta_p,
            self.phi_p,
            self.t1,
            self.t2,
        ] {
            if !a.is_finite() {
                return Err(Error::InvalidParameter("non-finite parameter".into()));
            }
        }
        Ok(())
    }
}

/// SSH hopping matrix: h_{2i-1,2i} = t1 within cells, h_{2i,2i+1} = t2
/// between cells, plus the wrap term under periodic boundaries.
pub fn build_ssh_hamiltonian(params: &SshParams, bc: BoundaryCondition) -> Result<HamiltonianSpec> {
    params.validate()?;
    let n = params.n_sites();
    let mut h = Array2::<Complex64>::zeros((n, n));
    let t1 = Complex64::new(params.t1, 0.0);
    let t2 = Complex64::new(params.t2, 0.0);
    for i in 0..params.n_cells {
        let a = 2 * i;
        let b = 2 * i + 1;
        h[[a, b]] = t1;
        h[[b, a]] = t1;
        if i + 1 < params.n_cells {
            h[[b, b + 1]] = t2;
            h[[b + 1, b]] = t2;
        }
    }
    if bc == BoundaryCondition::Periodic && params.n_cells > 1 {
        h[[n - 1, 0]] = t2;
        h[[0, n - 1]] = t2;
    }
    HamiltonianSpec::new(h)
}

/// One loss and one gain jump operator per cell (2 n_cells total, loss
/// first within each cell). Zero rates produce zero coefficient vectors.
pub fn build_general_jumps(params: &SshParams) -> Result<Vec<JumpOperatorSpec>> {
    params.validate()?;
    let n = params.n_sites();
    let mut jumps = Vec::with_capacity(2 * params.n_cells);
    let sl = params.gamma_l.sqrt();
    let sg = params.gamma_g.sqrt();
    for i in 0..params.n_cells {
        let a = 2 * i;
        let b = 2 * i + 1;
        let mut c_minus = Array1::<Complex64>::zeros(n);
        c_minus[a] = Complex64::new(sl * params.theta.cos(), 0.0);
        c_minus[b] = Complex64::from_polar(sl * params.theta.sin(), params.phi);
        jumps.push(JumpOperatorSpec::new(c_minus, Array1::zeros(n))?);

        let mut c_plus = Array1::<Complex64>::zeros(n);
        c_plus[a] = Complex64::new(sg * params.theta_p.cos(), 0.0);
        c_plus[b] = Complex64::from_polar(sg * params.theta_p.sin(), params.phi_p);
        jumps.push(JumpOperatorSpec::new(Array1::zeros(n), c_plus)?);
    }
    Ok(jumps)
}

/// Standard-angle jumps: loss sqrt(gamma_l/2)(d_A - i d_B) and gain
/// sqrt(gamma_g/2)(d_A^dag + i d_B^dag) per cell.
pub fn build_standard_jumps(
    n_cells: usize,
    gamma_l: f64,
    gamma_g: f64,
) -> Result<Vec<JumpOperatorSpec>> {
    build_general_jumps(&SshParams::standard(n_cells, 0.0, 1.0, gamma_l, gamma_g))
}

/// Full SSH model assembly.
pub fn build_ssh_model(params: &SshParams, bc: BoundaryCondition) -> Result<ModelSpec> {
    ModelSpec::new(
        build_ssh_hamiltonian(params, bc)?,
        build_general_jumps(params)?,
        bc,
    )
}
