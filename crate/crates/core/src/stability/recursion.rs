//! Linearization of one-step modified Patankar schemes around a steady state.
//!
//! Each stage of a scheme is an implicit relation `Phi_j(y_n, y_1, ..., y_j) = 0`.
//! At a positive steady state of `y' = A y` every partial Jacobian is an affine
//! function `c0 I + c1 dt A`, so the derivative of the step is obtained stage by
//! stage as
//!
//! ```text
//! D y_j = -(D_j Phi_j)^{-1} (D_n Phi_j + sum_{l<j} D_l Phi_j D y_l).
//! ```
//!
//! The same recursion is evaluated in any [`JacobianAlgebra`]: complex numbers
//! give `R(z)`, exact rational functions give the closed form, and matrices give
//! the Jacobian of the step map itself.

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::linalg::{LuFactor, Matrix, Polynomial, POLE_TOL};
use crate::scalar::{Field, Scalar};
use crate::schemes::Mprk43Tableau;
use crate::stability::{RationalStabilityFunction, StabilityFunction};

/// `c0 + c1 z`, a partial Jacobian of a stage relation.
#[derive(Debug, Clone, PartialEq)]
pub struct Affine<K> {
    pub c0: K,
    pub c1: K,
}

impl<K: Field> Affine<K> {
    pub fn new(c0: K, c1: K) -> Self {
        Self { c0, c1 }
    }

    fn slope(c1: K) -> Self {
        Self { c0: K::zero(), c1 }
    }

    pub fn is_zero(&self) -> bool {
        self.c0.is_zero() && self.c1.is_zero()
    }
}

/// Partial Jacobians of one stage relation: with respect to `y_n`, to each
/// earlier stage, and to the stage being solved for.
#[derive(Debug, Clone, PartialEq)]
pub struct StageJacobian<K> {
    pub wrt_start: Affine<K>,
    pub wrt_earlier: Vec<Affine<K>>,
    pub wrt_self: Affine<K>,
}

/// Arithmetic used to evaluate a [`StageRecursion`].
pub trait JacobianAlgebra<K> {
    type Elem: Clone;

    /// Image of `c0 + c1 z`.
    fn affine(&self, c: &Affine<K>) -> Self::Elem;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    /// `a^{-1} b`.
    fn solve(&self, a: &Self::Elem, b: &Self::Elem) -> Result<Self::Elem>;
}

/// Evaluation at a complex point `z`.
#[derive(Debug, Clone, Copy)]
pub struct ComplexAlgebra<T> {
    pub z: Complex<T>,
}

impl<T: Scalar> JacobianAlgebra<T> for ComplexAlgebra<T> {
    type Elem = Complex<T>;

    fn affine(&self, c: &Affine<T>) -> Complex<T> {
        self.z * c.c1 + c.c0
    }

    fn add(&self, a: &Complex<T>, b: &Complex<T>) -> Complex<T> {
        a + b
    }

    fn mul(&self, a: &Complex<T>, b: &Complex<T>) -> Complex<T> {
        a * b
    }

    fn neg(&self, a: &Complex<T>) -> Complex<T> {
        -a
    }

    fn solve(&self, a: &Complex<T>, b: &Complex<T>) -> Result<Complex<T>> {
        if !(a.norm() > T::lit(POLE_TOL)) {
            return Err(Error::PoleAt {
                re: self.z.re.to_f64().unwrap_or(f64::NAN),
                im: self.z.im.to_f64().unwrap_or(f64::NAN),
            });
        }
        Ok(b / a)
    }
}

/// Symbolic evaluation in the field of rational functions of `z`. Every
/// intermediate result is reduced, so this is intended for exact fields.
#[derive(Debug, Clone, Copy, Default)]
pub struct RationalAlgebra;

impl<K: Field> JacobianAlgebra<K> for RationalAlgebra {
    type Elem = RationalStabilityFunction<K>;

    fn affine(&self, c: &Affine<K>) -> Self::Elem {
        RationalStabilityFunction::new(Polynomial::linear(c.c0.clone(), c.c1.clone()), Polynomial::constant(K::one()))
            .expect("constant denominator")
    }

    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        (a + b).reduced()
    }

    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        (a * b).reduced()
    }

    fn neg(&self, a: &Self::Elem) -> Self::Elem {
        -a
    }

    fn solve(&self, a: &Self::Elem, b: &Self::Elem) -> Result<Self::Elem> {
        Ok((b / a)?.reduced())
    }
}

/// Evaluation with `z` replaced by the matrix `dt A`.
#[derive(Debug, Clone)]
pub struct MatrixAlgebra<T> {
    a_dt: Matrix<T>,
}

impl<T: Scalar> MatrixAlgebra<T> {
    pub fn new(a_dt: Matrix<T>) -> Result<Self> {
        if !a_dt.is_square() {
            return Err(Error::BadShape { rows: a_dt.rows(), cols: a_dt.cols() });
        }
        Ok(Self { a_dt })
    }
}

impl<T: Scalar> JacobianAlgebra<T> for MatrixAlgebra<T> {
    type Elem = Matrix<T>;

    fn affine(&self, c: &Affine<T>) -> Matrix<T> {
        let mut out = self.a_dt.scale(c.c1);
        for i in 0..out.rows() {
            out[(i, i)] += c.c0;
        }
        out
    }

    fn add(&self, a: &Matrix<T>, b: &Matrix<T>) -> Matrix<T> {
        a.add(b)
    }

    fn mul(&self, a: &Matrix<T>, b: &Matrix<T>) -> Matrix<T> {
        a.matmul(b).expect("square matrices of equal size")
    }

    fn neg(&self, a: &Matrix<T>) -> Matrix<T> {
        a.scale(-T::one())
    }

    fn solve(&self, a: &Matrix<T>, b: &Matrix<T>) -> Result<Matrix<T>> {
        LuFactor::new(a)?.solve_matrix(b)
    }
}

/// The stage relations of a scheme, the last one being the update.
#[derive(Debug, Clone, PartialEq)]
pub struct StageRecursion<K> {
    stages: Vec<StageJacobian<K>>,
}

impl<K: Field> StageRecursion<K> {
    /// Each stage may only refer to the stages before it.
    pub fn new(stages: Vec<StageJacobian<K>>) -> Result<Self> {
        if stages.is_empty() {
            return Err(Error::InvalidParams("a scheme needs at least one stage".into()));
        }
        for (j, s) in stages.iter().enumerate() {
            if s.wrt_earlier.len() > j {
                return Err(Error::InvalidParams(format!("stage {} refers to a later stage", j + 1)));
            }
        }
        Ok(Self { stages })
    }

    pub fn stages(&self) -> &[StageJacobian<K>] {
        &self.stages
    }

    /// Modified Patankar-Euler.
    pub fn mpe() -> Self {
        Self {
            stages: vec![StageJacobian {
                wrt_start: Affine::new(K::one(), K::zero()),
                wrt_earlier: vec![],
                wrt_self: Affine::new(-K::one(), K::one()),
            }],
        }
    }

    /// The second order three-solve scheme.
    pub fn mprk32() -> Self {
        let one = K::one();
        Self {
            stages: vec![
                StageJacobian {
                    wrt_start: Affine::new(-one.clone(), K::zero()),
                    wrt_earlier: vec![],
                    wrt_self: Affine::new(one.clone(), -one.clone()),
                },
                StageJacobian {
                    wrt_start: Affine::new(one.clone(), K::frac(1, 4)),
                    wrt_earlier: vec![Affine::slope(K::frac(-1, 4))],
                    wrt_self: Affine::new(-one.clone(), K::frac(1, 2)),
                },
                StageJacobian {
                    wrt_start: Affine::new(one.clone(), K::frac(1, 6)),
                    wrt_earlier: vec![Affine::slope(K::frac(-5, 6)), Affine::slope(K::frac(2, 3))],
                    wrt_self: Affine::new(-one.clone(), one),
                },
            ],
        }
    }

    /// Either third order family, given its tableau.
    pub fn mprk43(tab: &Mprk43Tableau<K>) -> Self {
        let one = K::one();
        let t = tab.clone();
        let sum = t.a31.clone() + t.a32.clone();
        let inv_p = one.clone() / t.p.clone();
        let inv_q = one.clone() / t.q.clone();
        Self {
            stages: vec![
                StageJacobian {
                    wrt_start: Affine::new(-one.clone(), K::zero()),
                    wrt_earlier: vec![],
                    wrt_self: Affine::new(one.clone(), -t.a21.clone()),
                },
                StageJacobian {
                    wrt_start: Affine::new(
                        one.clone(),
                        (inv_p.clone() - one.clone()) * sum.clone() + t.a31.clone(),
                    ),
                    wrt_earlier: vec![Affine::slope(t.a32.clone() - sum.clone() * inv_p)],
                    wrt_self: Affine::new(-one.clone(), sum),
                },
                StageJacobian {
                    wrt_start: Affine::new(one.clone(), inv_q.clone() - one.clone() + t.beta1.clone()),
                    wrt_earlier: vec![Affine::slope(t.beta2.clone() - inv_q), Affine::slope(K::zero())],
                    wrt_self: Affine::new(-one.clone(), one.clone()),
                },
                StageJacobian {
                    wrt_start: Affine::new(one.clone(), t.b1.clone()),
                    wrt_earlier: vec![
                        Affine::slope(t.b2.clone()),
                        Affine::slope(t.b3.clone()),
                        Affine::slope(-one.clone()),
                    ],
                    wrt_self: Affine::new(-one.clone(), one),
                },
            ],
        }
    }

    /// Runs the recursion and returns the derivative of the update.
    pub fn evaluate<A: JacobianAlgebra<K>>(&self, alg: &A) -> Result<A::Elem> {
        let mut derivs: Vec<A::Elem> = Vec::with_capacity(self.stages.len());
        for stage in &self.stages {
            let mut acc = alg.affine(&stage.wrt_start);
            for (l, c) in stage.wrt_earlier.iter().enumerate() {
                if !c.is_zero() {
                    acc = alg.add(&acc, &alg.mul(&alg.affine(c), &derivs[l]));
                }
            }
            let d = alg.neg(&alg.solve(&alg.affine(&stage.wrt_self), &acc)?);
            derivs.push(d);
        }
        Ok(derivs.pop().expect("at least one stage"))
    }

    /// Exact stability function, reduced and normalized.
    pub fn rational(&self) -> Result<RationalStabilityFunction<K>> {
        self.evaluate(&RationalAlgebra)
    }
}

impl<T: Scalar> StageRecursion<T> {
    /// Jacobian of the step map at a steady state of `y' = A y`.
    pub fn jacobian(&self, a: &Matrix<T>, dt: T) -> Result<Matrix<T>> {
        self.evaluate(&MatrixAlgebra::new(a.scale(dt))?)
    }
}

impl<T: Scalar> StabilityFunction<T> for StageRecursion<T> {
    fn eval(&self, z: Complex<T>) -> Result<Complex<T>> {
        self.evaluate(&ComplexAlgebra { z })
    }
}
