use std::ops::{Add, Div, Mul, Neg, Sub};

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::linalg::{complex_rational_eval, Polynomial};
use crate::scalar::{Field, Scalar};

/// Something that maps `z = lambda * dt` to the amplification factor `R(z)`.
pub trait StabilityFunction<T: Scalar> {
    fn eval(&self, z: Complex<T>) -> Result<Complex<T>>;

    fn abs(&self, z: Complex<T>) -> Result<T> {
        self.eval(z).map(|r| r.norm())
    }
}

impl<T: Scalar, S: StabilityFunction<T> + ?Sized> StabilityFunction<T> for &S {
    fn eval(&self, z: Complex<T>) -> Result<Complex<T>> {
        (**self).eval(z)
    }
}

/// `R(z) = numer(z) / denom(z)` with coefficients in ascending degree.
#[derive(Debug, Clone, PartialEq)]
pub struct RationalStabilityFunction<K> {
    numer: Polynomial<K>,
    denom: Polynomial<K>,
}

impl<K: Field> RationalStabilityFunction<K> {
    pub fn new(numer: Polynomial<K>, denom: Polynomial<K>) -> Result<Self> {
        if denom.is_zero() {
            return Err(Error::InvalidParams("stability function with zero denominator".into()));
        }
        Ok(Self { numer, denom })
    }

    pub fn from_coeffs(numer: Vec<K>, denom: Vec<K>) -> Result<Self> {
        Self::new(Polynomial::new(numer), Polynomial::new(denom))
    }

    pub fn constant(c: K) -> Self {
        Self { numer: Polynomial::constant(c), denom: Polynomial::constant(K::one()) }
    }

    pub fn numer(&self) -> &Polynomial<K> {
        &self.numer
    }

    pub fn denom(&self) -> &Polynomial<K> {
        &self.denom
    }

    /// Rescales so that the denominator has constant term one. Leaves the
    /// function unchanged when that term vanishes.
    pub fn normalized(&self) -> Self {
        let d0 = self.denom.coeff(0);
        if d0.is_zero() {
            return self.clone();
        }
        let inv = K::one() / d0;
        Self { numer: self.numer.scale(inv.clone()), denom: self.denom.scale(inv) }
    }

    /// Cancels the polynomial gcd of numerator and denominator, then
    /// normalizes. Only meaningful over exact fields.
    pub fn reduced(&self) -> Self {
        if self.numer.is_zero() {
            return Self::constant(K::zero());
        }
        let g = self.numer.gcd(&self.denom);
        let out = Self { numer: self.numer.div_rem(&g).0, denom: self.denom.div_rem(&g).0 };
        out.normalized()
    }

    /// Value at a point of the coefficient field, `None` at a pole.
    pub fn eval_exact(&self, z: K) -> Option<K> {
        let d = self.denom.eval(z.clone());
        (!d.is_zero()).then(|| self.numer.eval(z) / d)
    }

    /// Equality as functions: `n1 d2 == n2 d1`.
    pub fn same_function(&self, other: &Self) -> bool
    where
        K: PartialEq,
    {
        &self.numer * &other.denom == &other.numer * &self.denom
    }

    /// The pair `(|N(iy)|^2, |D(iy)|^2)` as polynomials in `y`.
    pub fn imaginary_axis_moduli(&self) -> (Polynomial<K>, Polynomial<K>) {
        (self.numer.abs_sq_on_imaginary_axis(), self.denom.abs_sq_on_imaginary_axis())
    }

    pub fn map<U: Field>(&self, f: impl Fn(&K) -> U) -> RationalStabilityFunction<U> {
        RationalStabilityFunction { numer: self.numer.map(&f), denom: self.denom.map(&f) }
    }
}

impl<T: Scalar> StabilityFunction<T> for RationalStabilityFunction<T> {
    fn eval(&self, z: Complex<T>) -> Result<Complex<T>> {
        complex_rational_eval(self.numer.coeffs(), self.denom.coeffs(), z)
    }
}

impl<K: Field> Add for &RationalStabilityFunction<K> {
    type Output = RationalStabilityFunction<K>;
    fn add(self, rhs: Self) -> RationalStabilityFunction<K> {
        if self.denom == rhs.denom {
            return RationalStabilityFunction { numer: &self.numer + &rhs.numer, denom: self.denom.clone() };
        }
        RationalStabilityFunction {
            numer: &(&self.numer * &rhs.denom) + &(&rhs.numer * &self.denom),
            denom: &self.denom * &rhs.denom,
        }
    }
}

impl<K: Field> Sub for &RationalStabilityFunction<K> {
    type Output = RationalStabilityFunction<K>;
    fn sub(self, rhs: Self) -> RationalStabilityFunction<K> {
        self + &(-rhs)
    }
}

impl<K: Field> Mul for &RationalStabilityFunction<K> {
    type Output = RationalStabilityFunction<K>;
    fn mul(self, rhs: Self) -> RationalStabilityFunction<K> {
        RationalStabilityFunction { numer: &self.numer * &rhs.numer, denom: &self.denom * &rhs.denom }
    }
}

impl<K: Field> Div for &RationalStabilityFunction<K> {
    type Output = Result<RationalStabilityFunction<K>>;
    fn div(self, rhs: Self) -> Result<RationalStabilityFunction<K>> {
        RationalStabilityFunction::new(&self.numer * &rhs.denom, &self.denom * &rhs.numer)
    }
}

impl<K: Field> Neg for &RationalStabilityFunction<K> {
    type Output = RationalStabilityFunction<K>;
    fn neg(self) -> RationalStabilityFunction<K> {
        RationalStabilityFunction { numer: -&self.numer, denom: self.denom.clone() }
    }
}
