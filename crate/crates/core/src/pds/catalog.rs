//! Reference linear test problems with closed-form solutions.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::linalg::{norm_inf, Matrix};
use crate::pds::linear::{validate_linear_pds, EigenPair, LinearPds, SteadyState};
use crate::scalar::Scalar;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TestProblem {
    /// 3x3 system with eigenvalues 0, -300, -500.
    Real3,
    /// 3x3 system with eigenvalues 0, 100(-6 +- i).
    Complex3,
    /// 4x4 system with a double zero eigenvalue and a second invariant.
    DoubleZero4,
    /// 2x2 exchange with eigenvalues 0, -50.
    TwoByTwo,
    /// 2x2 exchange with eigenvalues 0, -1, started next to the steady state.
    TwoByTwoSlow,
}

impl TestProblem {
    pub const ALL: [TestProblem; 5] =
        [Self::Real3, Self::Complex3, Self::DoubleZero4, Self::TwoByTwo, Self::TwoByTwoSlow];

    pub fn name(self) -> &'static str {
        match self {
            Self::Real3 => "REAL3",
            Self::Complex3 => "COMPLEX3",
            Self::DoubleZero4 => "DOUBLEZERO4",
            Self::TwoByTwo => "TWOBYTWO",
            Self::TwoByTwoSlow => "TWOBYTWO_SLOW",
        }
    }

    pub fn description(self) -> &'static str {
        match self {
            Self::Real3 => "3x3, real spectrum {0, -300, -500}, y0 = (1, 9, 5)",
            Self::Complex3 => "3x3, spectrum {0, 100(-6 +- i)}, y0 = (9, 20, 8)",
            Self::DoubleZero4 => "4x4, spectrum {0, 0, -300, -700}, invariants 1 and (1, 2, 2, 1)",
            Self::TwoByTwo => "2x2, spectrum {0, -50}, y0 = (0.998, 0.002)",
            Self::TwoByTwoSlow => "2x2, spectrum {0, -1}, y0 = y* + 1e-6 (1, -1)",
        }
    }

    pub fn build<T: Scalar>(self) -> CatalogEntry<T> {
        test_problem(self)
    }
}

impl fmt::Display for TestProblem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for TestProblem {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let key: String = s.chars().filter(|c| *c != '_' && *c != '-').collect::<String>().to_ascii_uppercase();
        Self::ALL
            .into_iter()
            .find(|p| p.name().replace('_', "") == key)
            .ok_or_else(|| Error::UnknownProblem(s.to_string()))
    }
}

/// One term `Re(c v exp(lambda t))` of a closed-form solution.
#[derive(Debug, Clone, PartialEq)]
pub struct Mode<T> {
    pub coeff: Complex<T>,
    pub rate: Complex<T>,
    pub vector: Vec<Complex<T>>,
}

/// `y(t) = y* + sum_k Re(c_k v_k exp(lambda_k t))`.
#[derive(Debug, Clone, PartialEq)]
pub struct ExactSolution<T> {
    pub steady: Vec<T>,
    pub modes: Vec<Mode<T>>,
}

impl<T: Scalar> ExactSolution<T> {
    pub fn eval(&self, t: T) -> Vec<T> {
        let mut y = self.steady.clone();
        for m in &self.modes {
            let e = (m.rate * t).exp() * m.coeff;
            for (yi, vi) in y.iter_mut().zip(&m.vector) {
                *yi += (e * vi).re;
            }
        }
        y
    }
}

#[derive(Debug, Clone)]
pub struct CatalogEntry<T> {
    pub id: TestProblem,
    pub pds: LinearPds<T>,
    pub y0: Vec<T>,
    pub steady_state: SteadyState<T>,
    pub eigenvalues: Vec<Complex<T>>,
    pub exact: ExactSolution<T>,
}

impl<T: Scalar> CatalogEntry<T> {
    /// The nonzero eigenvalue of largest modulus.
    pub fn stiffest_eigenvalue(&self) -> Complex<T> {
        self.eigenvalues
            .iter()
            .copied()
            .filter(|l| l.norm() > T::zero())
            .fold(Complex::new(T::zero(), T::zero()), |a, l| if l.norm() > a.norm() { l } else { a })
    }

    /// Checks that the closed form starts at `y0` and satisfies the ODE at
    /// `t = 0`, using a central difference.
    pub fn self_test(&self) -> Result<()> {
        let scale = norm_inf(&self.y0);
        let start = self.exact.eval(T::zero());
        let mismatch = start.iter().zip(&self.y0).fold(T::zero(), |m, (a, b)| m.max((*a - *b).abs()));
        if mismatch > T::lit(1e-12) * scale {
            return Err(Error::InvalidParams(format!("{}: exact solution misses y0 by {mismatch}", self.id)));
        }
        let speed = self.stiffest_eigenvalue().norm();
        let h = T::lit(1e-5) / speed;
        let plus = self.exact.eval(h);
        let minus = self.exact.eval(-h);
        let f = self.pds.matrix().mul_vec(&self.y0)?;
        let fd_err = (0..self.y0.len())
            .map(|i| ((plus[i] - minus[i]) / (h + h) - f[i]).abs())
            .fold(T::zero(), T::max);
        if fd_err > T::lit(1e-6) * norm_inf(&f).max(T::one()) {
            return Err(Error::InvalidParams(format!("{}: exact solution violates the ODE by {fd_err}", self.id)));
        }
        Ok(())
    }
}

fn int_matrix<T: Scalar, const N: usize>(rows: [[i32; N]; N], scale: f64) -> Matrix<T> {
    Matrix::from_fn(N, N, |i, j| T::lit(rows[i][j] as f64 * scale))
}

fn real_vec<T: Scalar>(v: &[f64]) -> Vec<T> {
    v.iter().map(|&x| T::lit(x)).collect()
}

fn real_mode<T: Scalar>(coeff: f64, rate: f64, vector: &[f64]) -> Mode<T> {
    Mode {
        coeff: Complex::new(T::lit(coeff), T::zero()),
        rate: Complex::new(T::lit(rate), T::zero()),
        vector: vector.iter().map(|&x| Complex::new(T::lit(x), T::zero())).collect(),
    }
}

fn cplx<T: Scalar>(re: f64, im: f64) -> Complex<T> {
    Complex::new(T::lit(re), T::lit(im))
}

/// Builds a catalog problem. The returned data is validated on construction.
pub fn test_problem<T: Scalar>(id: TestProblem) -> CatalogEntry<T> {
    build(id).unwrap_or_else(|e| panic!("catalog problem {id} is inconsistent: {e}"))
}

fn build<T: Scalar>(id: TestProblem) -> Result<CatalogEntry<T>> {
    let (matrix, y0, steady, modes, eigenpairs, invariants): (Matrix<T>, Vec<T>, Vec<T>, Vec<Mode<T>>, Vec<EigenPair<T>>, Vec<Vec<T>>) = match id {
        TestProblem::Real3 => {
            let steady = real_vec(&[5.0, 3.0, 7.0]);
            (
                int_matrix([[-2, 1, 1], [1, -4, 1], [1, 3, -2]], 100.0),
                real_vec(&[1.0, 9.0, 5.0]),
                steady.clone(),
                vec![real_mode(4.0, -300.0, &[-1.0, 0.0, 1.0]), real_mode(-6.0, -500.0, &[0.0, -1.0, 1.0])],
                vec![
                    EigenPair::real(T::zero(), &steady),
                    EigenPair::real(T::lit(-300.0), &real_vec::<T>(&[-1.0, 0.0, 1.0])),
                    EigenPair::real(T::lit(-500.0), &real_vec::<T>(&[0.0, -1.0, 1.0])),
                ],
                vec![vec![T::one(); 3]],
            )
        }
        TestProblem::Complex3 => {
            let steady = real_vec(&[13.0, 14.0, 10.0]);
            let v = vec![cplx(-1.0, 1.0), cplx(0.0, -1.0), cplx(1.0, 0.0)];
            let v_conj: Vec<Complex<T>> = v.iter().map(|c| c.conj()).collect();
            (
                int_matrix([[-4, 3, 1], [2, -4, 3], [2, 1, -4]], 100.0),
                real_vec(&[9.0, 20.0, 8.0]),
                steady.clone(),
                vec![Mode { coeff: cplx(-2.0, 6.0), rate: cplx(-600.0, 100.0), vector: v.clone() }],
                vec![
                    EigenPair::real(T::zero(), &steady),
                    EigenPair { value: cplx(-600.0, 100.0), vector: v },
                    EigenPair { value: cplx(-600.0, -100.0), vector: v_conj },
                ],
                vec![vec![T::one(); 3]],
            )
        }
        TestProblem::DoubleZero4 => (
            int_matrix([[-2, 0, 0, 1], [0, -4, 3, 0], [0, 4, -3, 0], [2, 0, 0, -1]], 100.0),
            real_vec(&[4.0, 1.0, 9.0, 1.0]),
            real_vec(&[35.0 / 21.0, 90.0 / 21.0, 120.0 / 21.0, 70.0 / 21.0]),
            vec![
                real_mode(-23.0 / 7.0, -700.0, &[0.0, 1.0, -1.0, 0.0]),
                real_mode(7.0 / 3.0, -300.0, &[1.0, 0.0, 0.0, -1.0]),
            ],
            vec![
                EigenPair::real(T::zero(), &real_vec::<T>(&[0.0, 3.0, 4.0, 0.0])),
                EigenPair::real(T::zero(), &real_vec::<T>(&[1.0, 0.0, 0.0, 2.0])),
                EigenPair::real(T::lit(-300.0), &real_vec::<T>(&[1.0, 0.0, 0.0, -1.0])),
                EigenPair::real(T::lit(-700.0), &real_vec::<T>(&[0.0, 1.0, -1.0, 0.0])),
            ],
            vec![vec![T::one(); 4], real_vec(&[1.0, 2.0, 2.0, 1.0])],
        ),
        TestProblem::TwoByTwo => (
            int_matrix([[-25, 25], [25, -25]], 1.0),
            real_vec(&[0.998, 0.002]),
            real_vec(&[0.5, 0.5]),
            vec![real_mode(0.498, -50.0, &[1.0, -1.0])],
            vec![
                EigenPair::real(T::zero(), &real_vec::<T>(&[1.0, 1.0])),
                EigenPair::real(T::lit(-50.0), &real_vec::<T>(&[1.0, -1.0])),
            ],
            vec![vec![T::one(); 2]],
        ),
        TestProblem::TwoByTwoSlow => (
            int_matrix([[-1, 1], [1, -1]], 0.5),
            real_vec(&[0.5 + 1e-6, 0.5 - 1e-6]),
            real_vec(&[0.5, 0.5]),
            vec![real_mode(1e-6, -1.0, &[1.0, -1.0])],
            vec![
                EigenPair::real(T::zero(), &real_vec::<T>(&[1.0, 1.0])),
                EigenPair::real(-T::one(), &real_vec::<T>(&[1.0, -1.0])),
            ],
            vec![vec![T::one(); 2]],
        ),
    };
    let eigenvalues = eigenpairs.iter().map(|p| p.value).collect();
    let pds = validate_linear_pds(matrix)?
        .with_invariant_basis(invariants)?
        .with_eigenpairs(eigenpairs)?;
    let steady_state = SteadyState::new(&pds, steady.clone())?;
    Ok(CatalogEntry { id, pds, y0, steady_state, eigenvalues, exact: ExactSolution { steady, modes } })
}
