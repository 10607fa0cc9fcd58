#![allow(dead_code)]

use num_complex::Complex;
use patankar::linalg::Matrix;
use patankar::mpdec::NodeKind;
use patankar::pds::{validate_linear_pds, LinearPds};
use patankar::schemes::{Mprk43GammaParams, Mprk43Params, Scheme};
use patankar::MpdecConfig64;
use rand::Rng;

/// Random conservative Metzler matrix of size `n`. Off-diagonal rates are
/// log-uniform over several decades, with some structural zeros.
pub fn random_conservative_metzler<R: Rng>(rng: &mut R, n: usize) -> Matrix<f64> {
    loop {
        let mut a = Matrix::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                if i != j && rng.gen_bool(0.75) {
                    a[(i, j)] = 10f64.powf(rng.gen_range(-2.0..2.0));
                }
            }
        }
        for j in 0..n {
            let s: f64 = (0..n).filter(|&i| i != j).map(|i| a[(i, j)]).sum();
            a[(j, j)] = -s;
        }
        if a.max_abs() > 0.0 {
            return a;
        }
    }
}

/// Random irreducible system together with its positive steady state,
/// normalized to unit mass.
pub fn random_irreducible_with_steady_state<R: Rng>(rng: &mut R, n: usize) -> (LinearPds<f64>, Vec<f64>) {
    let mut a = Matrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            if i != j {
                a[(i, j)] = 10f64.powf(rng.gen_range(-1.0..1.0));
            }
        }
    }
    for j in 0..n {
        let s: f64 = (0..n).filter(|&i| i != j).map(|i| a[(i, j)]).sum();
        a[(j, j)] = -s;
    }
    let y = kernel_vector(&a);
    (validate_linear_pds(a).unwrap(), y)
}

/// Positive kernel vector of an irreducible conservative Metzler matrix,
/// computed by replacing the last equation with the mass constraint.
pub fn kernel_vector(a: &Matrix<f64>) -> Vec<f64> {
    let n = a.rows();
    let mut m = a.clone();
    for j in 0..n {
        m[(n - 1, j)] = 1.0;
    }
    let mut rhs = vec![0.0; n];
    rhs[n - 1] = 1.0;
    patankar::linalg::lu_solve(&m, &rhs).unwrap()
}

/// Central-difference Jacobian of `f` at `y` with step `h`.
pub fn fd_jacobian(f: impl Fn(&[f64]) -> Vec<f64>, y: &[f64], h: f64) -> Matrix<f64> {
    let n = y.len();
    let mut j = Matrix::zeros(n, n);
    for c in 0..n {
        let mut yp = y.to_vec();
        let mut ym = y.to_vec();
        yp[c] += h;
        ym[c] -= h;
        let fp = f(&yp);
        let fm = f(&ym);
        for r in 0..n {
            j[(r, c)] = (fp[r] - fm[r]) / (2.0 * h);
        }
    }
    j
}

pub fn max_abs_diff(a: &Matrix<f64>, b: &Matrix<f64>) -> f64 {
    a.sub(b).max_abs()
}

/// Eigenvalues of a real 2x2 matrix from the characteristic polynomial.
pub fn eigenvalues_2x2(m: &Matrix<f64>) -> [Complex<f64>; 2] {
    let tr = m[(0, 0)] + m[(1, 1)];
    let det = m[(0, 0)] * m[(1, 1)] - m[(0, 1)] * m[(1, 0)];
    let disc = Complex::new(tr * tr - 4.0 * det, 0.0).sqrt();
    [(Complex::new(tr, 0.0) + disc) / 2.0, (Complex::new(tr, 0.0) - disc) / 2.0]
}

/// One representative of every scheme family.
pub fn all_scheme_families() -> Vec<Scheme<f64>> {
    vec![
        Scheme::Mpe,
        Scheme::Mprk32,
        Scheme::Mprk43(Mprk43Params::new(0.5, 2.0 / 3.0).unwrap()),
        Scheme::Mprk43Gamma(Mprk43GammaParams::new(0.5).unwrap()),
        Scheme::Mpdec(MpdecConfig64::new(5, NodeKind::GaussLobatto).unwrap()),
    ]
}

/// A broader set of schemes used where run time allows.
pub fn scheme_zoo() -> Vec<Scheme<f64>> {
    let mut out = all_scheme_families();
    out.push(Scheme::Mprk43(Mprk43Params::new(0.9, 0.6).unwrap()));
    out.push(Scheme::Mprk43(Mprk43Params::new(1.0 / 3.0, 2.0 / 3.0).unwrap()));
    out.push(Scheme::Mprk43Gamma(Mprk43GammaParams::new(0.375).unwrap()));
    out.push(Scheme::Mprk43Gamma(Mprk43GammaParams::new(0.75).unwrap()));
    out.push(Scheme::Mpdec(MpdecConfig64::new(3, NodeKind::Equispaced).unwrap()));
    out.push(Scheme::Mpdec(MpdecConfig64::new(8, NodeKind::Equispaced).unwrap()));
    out
}
