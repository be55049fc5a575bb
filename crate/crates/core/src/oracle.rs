//! Brute-force ground truth at small sizes.
//!
//! Two independent dense representations validate every other module:
//! the physical-space Lindblad superoperator on vectorized density
//! matrices (column stacking, up to 4 modes), and the adjoint-space
//! representation in which density matrices are vectors over Majorana
//! monomials and the ladder operators C_m, C_m^dag act by adding or
//! removing Majorana factors (up to 3 modes). Exceeding either limit is
//! an error, never a silent truncation.

use ndarray::{linalg::kron, Array1, Array2};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::expm;
use crate::majorana::MajoranaForm;
use crate::model::ModelSpec;
use crate::thirdq::RapidityDecomposition;

/// Physical-space superoperator limit (superoperator dimension 4^N).
pub const MAX_PHYSICAL_MODES: usize = 4;
/// Adjoint-space limit (vector dimension 2^(2N)).
pub const MAX_ADJOINT_MODES: usize = 3;

fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

fn identity(n: usize) -> Array2<Complex64> {
    Array2::from_diag(&Array1::from_elem(n, c(1.0)))
}

/// Dirac annihilation operators on the 2^N Fock basis; occupation bit m
/// of the basis index is mode m, with the fermionic sign string over
/// lower modes.
pub fn dirac_operators(n: usize) -> Vec<Array2<Complex64>> {
    let dim = 1 << n;
    (0..n)
        .map(|m| {
            let mut d = Array2::<Complex64>::zeros((dim, dim));
            for b in 0..dim {
                if (b >> m) & 1 == 1 {
                    let sign = if (b & ((1 << m) - 1)).count_ones() % 2 == 0 {
                        1.0
                    } else {
                        -1.0
                    };
                    d[[b ^ (1 << m), b]] = c(sign);
                }
            }
            d
        })
        .collect()
}

/// Majorana operators w_{2m} = d_m + d_m^dag, w_{2m+1} = i(d_m - d_m^dag).
pub fn majorana_operators(n: usize) -> Vec<Array2<Complex64>> {
    let ds = dirac_operators(n);
    let mut ws = Vec::with_capacity(2 * n);
    for d in &ds {
        let ddag = d.mapv(|z| z.conj()).t().to_owned();
        ws.push(d + &ddag);
        ws.push((d - &ddag).mapv(|z| Complex64::i() * z));
    }
    ws
}

/// The dense Lindblad superoperator acting on column-stacked density
/// matrices.
#[derive(Debug, Clone)]
pub struct DenseLindbladian {
    pub dim: usize,
    pub superop: Array2<Complex64>,
}

pub fn dense_lindbladian(model: &ModelSpec) -> Result<DenseLindbladian> {
    let n = model.n_modes();
    if n > MAX_PHYSICAL_MODES {
        return Err(Error::SizeLimit(format!(
            "dense superoperator limited to {MAX_PHYSICAL_MODES} modes, got {n}"
        )));
    }
    let dim = 1 << n;
    let ds = dirac_operators(n);
    let h = model.hamiltonian.matrix();
    let mut hamiltonian = Array2::<Complex64>::zeros((dim, dim));
    for m in 0..n {
        for nn in 0..n {
            if h[[m, nn]].norm() > 0.0 {
                let ddag = ds[m].mapv(|z| z.conj()).t().to_owned();
                hamiltonian = hamiltonian + ddag.dot(&ds[nn]).mapv(|z| z * h[[m, nn]]);
            }
        }
    }
    let eye = identity(dim);
    let mut superop = (kron(&eye, &hamiltonian) - kron(&hamiltonian.t().to_owned(), &eye))
        .mapv(|z| -Complex64::i() * z);
    for jump in &model.jumps {
        let mut l = Array2::<Complex64>::zeros((dim, dim));
        for m in 0..n {
            l = l + ds[m].mapv(|z| z * jump.c_minus[m]);
            l = l + ds[m]
                .mapv(|z| z.conj())
                .t()
                .to_owned()
                .mapv(|z| z * jump.c_plus[m]);
        }
        let ldag = l.mapv(|z| z.conj()).t().to_owned();
        let ldl = ldag.dot(&l);
        superop = superop + kron(&l.mapv(|z| z.conj()), &l).mapv(|z| 2.0 * z)
            - kron(&eye, &ldl)
            - kron(&ldl.t().to_owned(), &eye);
    }
    Ok(DenseLindbladian { dim, superop })
}

fn vec_of(rho: &Array2<Complex64>) -> Array1<Complex64> {
    let dim = rho.nrows();
    let mut v = Array1::<Complex64>::zeros(dim * dim);
    for col in 0..dim {
        for row in 0..dim {
            v[col * dim + row] = rho[[row, col]];
        }
    }
    v
}

fn unvec(v: &Array1<Complex64>, dim: usize) -> Array2<Complex64> {
    let mut rho = Array2::<Complex64>::zeros((dim, dim));
    for col in 0..dim {
        for row in 0..dim {
            rho[[row, col]] = v[col * dim + row];
        }
    }
    rho
}

/// rho(t) = exp(L t) rho(0) by dense exponentiation.
pub fn dense_evolve(
    model: &ModelSpec,
    rho0: &Array2<Complex64>,
    t: f64,
) -> Result<Array2<Complex64>> {
    let lind = dense_lindbladian(model)?;
    if rho0.nrows() != lind.dim {
        return Err(Error::DimensionMismatch {
            expected: lind.dim,
            got: rho0.nrows(),
        });
    }
    let propagator = expm(&lind.superop.mapv(|z| z * t))?;
    let vt = propagator.dot(&vec_of(rho0));
    Ok(unvec(&vt, lind.dim))
}

/// G_{mn} = Tr[d_m^dag d_n rho].
pub fn correlation_matrix(n: usize, rho: &Array2<Complex64>) -> Array2<Complex64> {
    let ds = dirac_operators(n);
    let mut g = Array2::<Complex64>::zeros((n, n));
    for m in 0..n {
        let ddag = ds[m].mapv(|z| z.conj()).t().to_owned();
        for nn in 0..n {
            let op = ddag.dot(&ds[nn]);
            g[[m, nn]] = op.dot(rho).diag().sum();
        }
    }
    g
}

/// |1...1><1...1|: every mode occupied.
pub fn unit_filling_rho(n: usize) -> Array2<Complex64> {
    let dim = 1 << n;
    let mut rho = Array2::<Complex64>::zeros((dim, dim));
    rho[[dim - 1, dim - 1]] = c(1.0);
    rho
}

/// I / 2^N.
pub fn maximally_mixed(n: usize) -> Array2<Complex64> {
    identity(1 << n).mapv(|z| z / c((1 << n) as f64))
}

/// The adjoint-space representation: C/C^dag ladder matrices, the adjoint
/// Majorana operators A, and the Majorana monomial basis.
pub struct DenseAdjointSpace {
    pub n_sites: usize,
    pub dim: usize,
    pub c_ops: Vec<Array2<Complex64>>,
    pub cdag_ops: Vec<Array2<Complex64>>,
    pub a_ops: Vec<Array2<Complex64>>,
}

pub fn dense_adjoint_build(n: usize) -> Result<DenseAdjointSpace> {
    if n > MAX_ADJOINT_MODES {
        return Err(Error::SizeLimit(format!(
            "dense adjoint space limited to {MAX_ADJOINT_MODES} modes, got {n}"
        )));
    }
    let n2 = 2 * n;
    let dim = 1 << n2;
    let mut c_ops = Vec::with_capacity(n2);
    for m in 0..n2 {
        let mut op = Array2::<Complex64>::zeros((dim, dim));
        for alpha in 0..dim {
            if (alpha >> m) & 1 == 1 {
                let sign = if (alpha & ((1 << m) - 1)).count_ones() % 2 == 0 {
                    1.0
                } else {
                    -1.0
                };
                op[[alpha ^ (1 << m), alpha]] = c(sign);
            }
        }
        c_ops.push(op);
    }
    let cdag_ops: Vec<_> = c_ops
        .iter()
        .map(|op| op.mapv(|z| z.conj()).t().to_owned())
        .collect();
    let sqrt2 = std::f64::consts::SQRT_2;
    let mut a_ops = Vec::with_capacity(2 * n2);
    for m in 0..n2 {
        a_ops.push((&c_ops[m] + &cdag_ops[m]).mapv(|z| z / sqrt2));
        a_ops.push((&c_ops[m] - &cdag_ops[m]).mapv(|z| Complex64::i() * z / sqrt2));
    }
    Ok(DenseAdjointSpace {
        n_sites: n,
        dim,
        c_ops,
        cdag_ops,
        a_ops,
    })
}

impl DenseAdjointSpace {
    /// The even-parity Liouvillian as the quadratic form
    /// -2 C^dag W C + 2 C^dag (M - M^T) (C^dag)^T with W = 2iH + M + M^T.
    pub fn liouvillian_plus(&self, form: &MajoranaForm) -> Array2<Complex64> {
        let n2 = 2 * self.n_sites;
        let w = crate::thirdq::build_drift_matrix(form);
        let mut out = Array2::<Complex64>::zeros((self.dim, self.dim));
        for m in 0..n2 {
            for nn in 0..n2 {
                let pump = form.m[[m, nn]] - form.m[[nn, m]];
                if w[[m, nn]].norm() > 0.0 {
                    out = out
                        + self.cdag_ops[m]
                            .dot(&self.c_ops[nn])
                            .mapv(|z| -2.0 * w[[m, nn]] * z);
                }
                if pump.norm() > 0.0 {
                    out = out
                        + self.cdag_ops[m]
                            .dot(&self.cdag_ops[nn])
                            .mapv(|z| 2.0 * pump * z);
                }
            }
        }
        out
    }

    /// The full Lindbladian mapped into the adjoint basis by pushing every
    /// basis monomial through the physical superoperator: an independent
    /// construction path against `liouvillian_plus`.
    pub fn lindbladian_adjoint(&self, model: &ModelSpec) -> Result<Array2<Complex64>> {
        let n = self.n_sites;
        if model.n_modes() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: model.n_modes(),
            });
        }
        let lind = dense_lindbladian(model)?;
        let polys = poly_matrices(n);
        let phys_dim = 1 << n;
        let mut out = Array2::<Complex64>::zeros((self.dim, self.dim));
        for (mask, p) in polys.iter().enumerate() {
            let rho_dot = unvec(&lind.superop.dot(&vec_of(p)), phys_dim);
            for (mask2, p2) in polys.iter().enumerate() {
                let p2dag = p2.mapv(|z| z.conj()).t().to_owned();
                let coeff = p2dag.dot(&rho_dot).diag().sum() / c(phys_dim as f64);
                out[[mask2, mask]] = coeff;
            }
        }
        Ok(out)
    }

    /// Adjoint-fermion parity (-1)^{number of Majorana factors}.
    pub fn parity(&self) -> Array2<Complex64> {
        let mut p = Array2::<Complex64>::zeros((self.dim, self.dim));
        for alpha in 0..self.dim {
            p[[alpha, alpha]] = c(if (alpha as u32).count_ones() % 2 == 0 {
                1.0
            } else {
                -1.0
            });
        }
        p
    }

    /// Indices of the even-parity basis monomials.
    pub fn even_sector(&self) -> Vec<usize> {
        (0..self.dim)
            .filter(|a| (*a as u32).count_ones() % 2 == 0)
            .collect()
    }

    /// The identity monomial (trace functional and pump-free steady state).
    pub fn one_vec(&self) -> Array1<Complex64> {
        let mut v = Array1::<Complex64>::zeros(self.dim);
        v[0] = c(1.0);
        v
    }

    /// Normal-mode operator pairs (B_m, B~_m) assembled from V.
    pub fn mode_operators(
        &self,
        dec: &RapidityDecomposition,
    ) -> (Vec<Array2<Complex64>>, Vec<Array2<Complex64>>) {
        let n2 = dec.n_modes();
        let mut b_ops = Vec::with_capacity(n2);
        let mut bt_ops = Vec::with_capacity(n2);
        for m in 0..n2 {
            let mut b = Array2::<Complex64>::zeros((self.dim, self.dim));
            let mut bt = Array2::<Complex64>::zeros((self.dim, self.dim));
            for (a, op) in self.a_ops.iter().enumerate() {
                b = b + op.mapv(|z| z * dec.v[[2 * m, a]]);
                bt = bt + op.mapv(|z| z * dec.v[[2 * m + 1, a]]);
            }
            b_ops.push(b);
            bt_ops.push(bt);
        }
        (b_ops, bt_ops)
    }

    /// Adjoint coordinates of a physical density matrix:
    /// r_alpha = Tr(P_alpha^dag rho), so that rho = 2^-N sum r_alpha P_alpha
    /// and the trace functional is coordinate extraction at alpha = 0.
    pub fn rho_to_adjoint(&self, rho: &Array2<Complex64>) -> Array1<Complex64> {
        let polys = poly_matrices(self.n_sites);
        let mut r = Array1::<Complex64>::zeros(self.dim);
        for (mask, p) in polys.iter().enumerate() {
            let pdag = p.mapv(|z| z.conj()).t().to_owned();
            r[mask] = pdag.dot(rho).diag().sum();
        }
        r
    }

    /// Inverse of `rho_to_adjoint`.
    pub fn adjoint_to_rho(&self, r: &Array1<Complex64>) -> Array2<Complex64> {
        let polys = poly_matrices(self.n_sites);
        let phys_dim = 1 << self.n_sites;
        let mut rho = Array2::<Complex64>::zeros((phys_dim, phys_dim));
        for (mask, p) in polys.iter().enumerate() {
            rho = rho + p.mapv(|z| z * r[mask] / c(phys_dim as f64));
        }
        rho
    }
}

/// All Majorana monomials w_0^{a_0} w_1^{a_1} ... ordered by ascending
/// Majorana index within the product; the bitmask indexes the basis.
pub fn poly_matrices(n: usize) -> Vec<Array2<Complex64>> {
    let ws = majorana_operators(n);
    let n2 = 2 * n;
    let dim = 1 << n;
    (0..(1usize << n2))
        .map(|mask| {
            let mut p = identity(dim);
            for (m, w) in ws.iter().enumerate() {
                if (mask >> m) & 1 == 1 {
                    p = p.dot(w);
                }
            }
            p
        })
        .collect()
}
