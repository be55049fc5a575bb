//! Dense complex linear algebra helpers: matrix exponential, a continuous
//! Lyapunov solver, and small utilities shared by the solver modules.

use ndarray::{Array1, Array2};
use ndarray_linalg::Eig;
use num_complex::Complex64;

use crate::error::{Error, Result};

/// Padé(13,13) coefficients for the scaling-and-squaring matrix exponential
/// (Higham 2005, SIAM J. Matrix Anal. Appl. 26(4)).
const PADE13: [f64; 14] = [
    64_764_752_532_480_000.0,
    32_382_376_266_240_000.0,
    7_771_770_303_897_600.0,
    1_187_353_796_428_800.0,
    129_060_195_264_000.0,
    10_559_470_521_600.0,
    670_442_572_800.0,
    33_522_128_640.0,
    1_323_241_920.0,
    40_840_800.0,
    960_960.0,
    16_380.0,
    182.0,
    1.0,
];
const THETA13: f64 = 5.371_920_351_148_152;

fn c(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

/// 1-norm (max column sum of absolute values).
pub fn matrix_1_norm(a: &Array2<Complex64>) -> f64 {
    let mut max = 0.0_f64;
    for j in 0..a.ncols() {
        let s: f64 = a.column(j).iter().map(|z| z.norm()).sum();
        max = max.max(s);
    }
    max
}

/// Largest entry magnitude.
pub fn matrix_max_abs(a: &Array2<Complex64>) -> f64 {
    a.iter().fold(0.0_f64, |m, z| m.max(z.norm()))
}

/// exp(A) by scaling and squaring with the Padé(13,13) approximant.
pub fn expm(a: &Array2<Complex64>) -> Result<Array2<Complex64>> {
    let n = a.nrows();
    if n != a.ncols() {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: a.ncols(),
        });
    }
    if n == 0 {
        return Ok(Array2::zeros((0, 0)));
    }
    let norm = matrix_1_norm(a);
    let s = if norm > THETA13 {
        (norm / THETA13).log2().ceil() as u32
    } else {
        0
    };
    let scaled = a.mapv(|z| z / c((1u64 << s) as f64));

    let eye = Array2::from_diag(&Array1::from_elem(n, c(1.0)));
    let a2 = scaled.dot(&scaled);
    let a4 = a2.dot(&a2);
    let a6 = a2.dot(&a4);

    let u_inner = &a6 * c(PADE13[13]) + &a4 * c(PADE13[11]) + &a2 * c(PADE13[9]);
    let u = scaled.dot(
        &(a6.dot(&u_inner)
            + &a6 * c(PADE13[7])
            + &a4 * c(PADE13[5])
            + &a2 * c(PADE13[3])
            + &eye * c(PADE13[1])),
    );
    let v_inner = &a6 * c(PADE13[12]) + &a4 * c(PADE13[10]) + &a2 * c(PADE13[8]);
    let v = a6.dot(&v_inner)
        + &a6 * c(PADE13[6])
        + &a4 * c(PADE13[4])
        + &a2 * c(PADE13[2])
        + &eye * c(PADE13[0]);

    let num = &v + &u;
    let den = &v - &u;
    let mut result = solve_matrix(&den, &num)?;
    for _ in 0..s {
        result = result.dot(&result);
    }
    Ok(result)
}

/// Solve A X = B by Gaussian elimination with partial pivoting, one
/// elimination for the whole right-hand side. (The LAPACK LU path is
/// avoided: its binding burns stack space quadratic in the dimension.)
pub fn solve_matrix(a: &Array2<Complex64>, b: &Array2<Complex64>) -> Result<Array2<Complex64>> {
    let n = a.nrows();
    if n != a.ncols() || n != b.nrows() {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: b.nrows(),
        });
    }
    let m = b.ncols();
    let mut aug = Array2::<Complex64>::zeros((n, n + m));
    for i in 0..n {
        for j in 0..n {
            aug[[i, j]] = a[[i, j]];
        }
        for j in 0..m {
            aug[[i, n + j]] = b[[i, j]];
        }
    }
    for col in 0..n {
        let mut pivot_row = col;
        let mut pivot_mag = aug[[col, col]].norm();
        for row in (col + 1)..n {
            let mag = aug[[row, col]].norm();
            if mag > pivot_mag {
                pivot_mag = mag;
                pivot_row = row;
            }
        }
        if pivot_mag < 1e-300 {
            return Err(Error::InvalidParameter(
                "singular matrix in linear solve".into(),
            ));
        }
        if pivot_row != col {
            for j in 0..(n + m) {
                let tmp = aug[[col, j]];
                aug[[col, j]] = aug[[pivot_row, j]];
                aug[[pivot_row, j]] = tmp;
            }
        }
        let pivot = aug[[col, col]];
        for row in (col + 1)..n {
            let factor = aug[[row, col]] / pivot;
            if factor.norm() == 0.0 {
                continue;
            }
            for j in col..(n + m) {
                let v = aug[[col, j]];
                aug[[row, j]] -= factor * v;
            }
        }
    }
    let mut x = Array2::<Complex64>::zeros((n, m));
    for col in (0..n).rev() {
        let pivot = aug[[col, col]];
        for j in 0..m {
            let mut sum = aug[[col, n + j]];
            for k in (col + 1)..n {
                sum -= aug[[col, k]] * x[[k, j]];
            }
            x[[col, j]] = sum / pivot;
        }
    }
    Ok(x)
}

/// A^-1 via `solve_matrix` against the identity.
pub fn invert(a: &Array2<Complex64>) -> Result<Array2<Complex64>> {
    let eye = Array2::from_diag(&Array1::from_elem(a.nrows(), Complex64::new(1.0, 0.0)));
    solve_matrix(a, &eye)
}

/// 16-point Gauss-Legendre rule on [-1, 1].
const GL16_NODES: [f64; 16] = [
    -0.9894009349916499,
    -0.9445750230732326,
    -0.8656312023878318,
    -0.755404408355003,
    -0.6178762444026438,
    -0.45801677765722737,
    -0.2816035507792589,
    -0.09501250983763745,
    0.09501250983763745,
    0.2816035507792589,
    0.45801677765722737,
    0.6178762444026438,
    0.755404408355003,
    0.8656312023878318,
    0.9445750230732326,
    0.9894009349916499,
];
const GL16_WEIGHTS: [f64; 16] = [
    0.027152459411754037,
    0.062253523938647706,
    0.09515851168249259,
    0.12462897125553403,
    0.14959598881657676,
    0.16915651939500262,
    0.1826034150449236,
    0.18945061045506859,
    0.18945061045506859,
    0.1826034150449236,
    0.16915651939500262,
    0.14959598881657676,
    0.12462897125553403,
    0.09515851168249259,
    0.062253523938647706,
    0.027152459411754037,
];

/// Solve the continuous Lyapunov equation A X + X A^dagger + Q = 0.
///
/// All eigenvalues of A must have negative real part (checked against
/// `stability_margin`). The fast path diagonalizes A; when A is defective
/// or badly conditioned the result is verified by residual and the solver
/// falls back to exponential doubling of the integral representation
/// X = int_0^inf e^{At} Q e^{A^dag t} dt, which needs no eigenbasis.
pub fn solve_continuous_lyapunov(
    a: &Array2<Complex64>,
    q: &Array2<Complex64>,
    stability_margin: f64,
) -> Result<Array2<Complex64>> {
    let (vals, p) = a.eig()?;
    let max_re = vals.iter().map(|z| z.re).fold(f64::NEG_INFINITY, f64::max);
    if max_re >= -stability_margin {
        return Err(Error::UnstableDrift(max_re, -stability_margin));
    }
    let scale = matrix_max_abs(q).max(1.0);
    if let Ok(x) = lyapunov_eigen(a, q, &vals, &p) {
        if lyapunov_residual(a, q, &x) < 1e-10 * scale {
            return Ok(x);
        }
    }
    let x = lyapunov_doubling(a, q)?;
    let resid = lyapunov_residual(a, q, &x);
    if resid > 1e-8 * scale {
        return Err(Error::NormalizationFailure(format!(
            "Lyapunov solve residual {resid:.2e}"
        )));
    }
    Ok(x)
}

fn lyapunov_residual(a: &Array2<Complex64>, q: &Array2<Complex64>, x: &Array2<Complex64>) -> f64 {
    let adag = a.mapv(|z| z.conj()).t().to_owned();
    let r = a.dot(x) + x.dot(&adag) + q;
    matrix_max_abs(&r)
}

fn lyapunov_eigen(
    a: &Array2<Complex64>,
    q: &Array2<Complex64>,
    vals: &Array1<Complex64>,
    p: &Array2<Complex64>,
) -> Result<Array2<Complex64>> {
    let p_inv = invert(p)?;
    let qt = p_inv.dot(q).dot(&p_inv.mapv(|z| z.conj()).t().to_owned());
    let n = a.nrows();
    let mut y = Array2::zeros((n, n));
    for i in 0..n {
        for j in 0..n {
            y[[i, j]] = -qt[[i, j]] / (vals[i] + vals[j].conj());
        }
    }
    Ok(p.dot(&y).dot(&p.mapv(|z| z.conj()).t().to_owned()))
}

fn lyapunov_doubling(a: &Array2<Complex64>, q: &Array2<Complex64>) -> Result<Array2<Complex64>> {
    let h = 1.0 / matrix_1_norm(a).max(1.0);
    // X_0 = int_0^h e^{At} Q e^{A^dag t} dt by Gauss-Legendre quadrature
    let mut x = Array2::<Complex64>::zeros(q.raw_dim());
    for (node, weight) in GL16_NODES.iter().zip(GL16_WEIGHTS.iter()) {
        let t = 0.5 * h * (node + 1.0);
        let e = expm(&a.mapv(|z| z * t))?;
        let edag = e.mapv(|z| z.conj()).t().to_owned();
        x = x + e.dot(q).dot(&edag).mapv(|z| z * (0.5 * h * weight));
    }
    // doubling: X <- X + E X E^dag, E <- E^2 covers [0, 2^k h]
    let mut e = expm(&a.mapv(|z| z * h))?;
    for _ in 0..200 {
        let edag = e.mapv(|z| z.conj()).t().to_owned();
        let increment = e.dot(&x).dot(&edag);
        let delta = matrix_max_abs(&increment);
        x = x + increment;
        if delta < 1e-300 || delta < 1e-17 * matrix_max_abs(&x) {
            return Ok(x);
        }
        e = e.dot(&e);
    }
    Err(Error::NormalizationFailure(
        "Lyapunov doubling did not converge".into(),
    ))
}

/// Greedy nearest-neighbor multiset match: the largest matched-pair distance.
/// Panics if the slices have different lengths.
pub fn multiset_distance(a: &[Complex64], b: &[Complex64]) -> f64 {
    assert_eq!(a.len(), b.len(), "multiset_distance: unequal lengths");
    let mut order: Vec<usize> = (0..a.len()).collect();
    order.sort_by(|&i, &j| (a[i].re, a[i].im).partial_cmp(&(a[j].re, a[j].im)).unwrap());
    let mut used = vec![false; b.len()];
    let mut worst = 0.0_f64;
    for &i in &order {
        let mut best = usize::MAX;
        let mut best_d = f64::INFINITY;
        for (j, y) in b.iter().enumerate() {
            if used[j] {
                continue;
            }
            let d = (a[i] - y).norm();
            if d < best_d {
                best_d = d;
                best = j;
            }
        }
        used[best] = true;
        worst = worst.max(best_d);
    }
    worst
}

/// max |A - A^dagger| entry.
pub fn hermiticity_residual(a: &Array2<Complex64>) -> f64 {
    let mut worst = 0.0_f64;
    for i in 0..a.nrows() {
        for j in 0..a.ncols() {
            worst = worst.max((a[[i, j]] - a[[j, i]].conj()).norm());
        }
    }
    worst
}

/// max |A + A^T| entry.
pub fn antisymmetry_residual(a: &Array2<Complex64>) -> f64 {
    let mut worst = 0.0_f64;
    for i in 0..a.nrows() {
        for j in 0..a.ncols() {
            worst = worst.max((a[[i, j]] + a[[j, i]]).norm());
        }
    }
    worst
}

#[cfg(test)]
mod tests {
    use super::*;
    use ndarray::array;

    fn assert_matrix_close(a: &Array2<Complex64>, b: &Array2<Complex64>, tol: f64) {
        assert_eq!(a.shape(), b.shape());
        for ((i, j), v) in a.indexed_iter() {
            let d = (v - b[[i, j]]).norm();
            assert!(
                d < tol,
                "mismatch at ({i},{j}): {v} vs {} (d={d:e})",
                b[[i, j]]
            );
        }
    }

    #[test]
    fn expm_zero_is_identity() {
        let z = Array2::<Complex64>::zeros((4, 4));
        let e = expm(&z).unwrap();
        let eye = Array2::from_diag(&Array1::from_elem(4, c(1.0)));
        assert_matrix_close(&e, &eye, 1e-14);
    }

    #[test]
    fn expm_diagonal() {
        let a = array![[c(1.0), c(0.0)], [c(0.0), Complex64::new(-2.0, 0.5)]];
        let e = expm(&a).unwrap();
        assert!((e[[0, 0]] - c(1.0_f64.exp())).norm() < 1e-13);
        assert!((e[[1, 1]] - Complex64::new(-2.0, 0.5).exp()).norm() < 1e-13);
        assert!(e[[0, 1]].norm() < 1e-14);
    }

    #[test]
    fn expm_antihermitian_is_unitary() {
        let a = array![
            [Complex64::new(0.0, 0.3), Complex64::new(1.0, 0.4)],
            [Complex64::new(-1.0, 0.4), Complex64::new(0.0, -0.2)]
        ];
        let u = expm(&a).unwrap();
        let udag = u.mapv(|z| z.conj()).t().to_owned();
        let prod = u.dot(&udag);
        let eye = Array2::from_diag(&Array1::from_elem(2, c(1.0)));
        assert_matrix_close(&prod, &eye, 1e-13);
    }

    #[test]
    fn expm_large_norm_scaling() {
        let a = array![[c(40.0), c(0.0)], [c(0.0), c(-40.0)]];
        let e = expm(&a).unwrap();
        assert!((e[[0, 0]].re - 40.0_f64.exp()).abs() / 40.0_f64.exp() < 1e-12);
    }

    #[test]
    fn expm_agrees_with_eigendecomposition() {
        // cross-check of the two exponential routes on a non-normal matrix
        let a = array![
            [Complex64::new(-0.2, 0.0), Complex64::new(0.0, 0.6)],
            [Complex64::new(0.0, 1.0), Complex64::new(-0.2, 0.0)]
        ];
        let e1 = expm(&a).unwrap();
        let (vals, p) = a.eig().unwrap();
        let p_inv = invert(&p).unwrap();
        let d = Array2::from_diag(&vals.mapv(|z| z.exp()));
        let e2 = p.dot(&d).dot(&p_inv);
        assert_matrix_close(&e1, &e2, 1e-12);
    }

    #[test]
    fn lyapunov_solves_equation() {
        let a = array![
            [Complex64::new(-1.0, 0.2), Complex64::new(0.3, 0.0)],
            [Complex64::new(0.0, -0.1), Complex64::new(-0.5, 0.0)]
        ];
        let q = array![
            [c(1.0), Complex64::new(0.1, 0.2)],
            [Complex64::new(0.1, -0.2), c(2.0)]
        ];
        let x = solve_continuous_lyapunov(&a, &q, 1e-12).unwrap();
        let adag = a.mapv(|z| z.conj()).t().to_owned();
        let resid = a.dot(&x) + x.dot(&adag) + &q;
        assert!(matrix_max_abs(&resid) < 1e-12);
    }

    #[test]
    fn lyapunov_rejects_unstable() {
        let a = array![[c(0.1), c(0.0)], [c(0.0), c(-1.0)]];
        let q = Array2::from_diag(&Array1::from_elem(2, c(1.0)));
        assert!(matches!(
            solve_continuous_lyapunov(&a, &q, 1e-10),
            Err(Error::UnstableDrift(..))
        ));
    }

    #[test]
    fn multiset_distance_detects_mismatch() {
        let a = vec![c(1.0), c(2.0), Complex64::new(0.0, 1.0)];
        let b = vec![Complex64::new(0.0, 1.0), c(2.0), c(1.0)];
        assert!(multiset_distance(&a, &b) < 1e-15);
        let bad = vec![c(1.0), c(2.0), Complex64::new(0.0, 1.5)];
        assert!((multiset_distance(&a, &bad) - 0.5).abs() < 1e-15);
    }
}
