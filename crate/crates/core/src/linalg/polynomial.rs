//! Dense polynomials in the monomial basis and Lagrange interpolation.

use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::linalg::{LuFactor, Matrix};
use crate::scalar::{Field, Scalar};

/// Largest node count accepted by [`lagrange_basis`]. The monomial Vandermonde
/// construction loses accuracy quickly beyond this.
pub const MAX_LAGRANGE_NODES: usize = 15;

/// Smallest denominator magnitude accepted by [`complex_rational_eval`].
pub const POLE_TOL: f64 = 1e-30;

/// Polynomial with coefficients in ascending degree. Trailing zeros are
/// trimmed, so the zero polynomial has no coefficients.
#[derive(Debug, Clone, PartialEq)]
pub struct Polynomial<T> {
    coeffs: Vec<T>,
}

impl<T: Field> Polynomial<T> {
    pub fn new(mut coeffs: Vec<T>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn zero() -> Self {
        Self { coeffs: Vec::new() }
    }

    pub fn constant(c: T) -> Self {
        Self::new(vec![c])
    }

    /// The polynomial `c0 + c1 x`.
    pub fn linear(c0: T, c1: T) -> Self {
        Self::new(vec![c0, c1])
    }

    pub fn coeffs(&self) -> &[T] {
        &self.coeffs
    }

    /// Coefficient of `x^j`, zero beyond the degree.
    pub fn coeff(&self, j: usize) -> T {
        self.coeffs.get(j).cloned().unwrap_or_else(T::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, with `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn scale(&self, s: T) -> Self {
        Self::new(self.coeffs.iter().map(|c| c.clone() * s.clone()).collect())
    }

    /// Horner evaluation.
    pub fn eval(&self, x: T) -> T {
        self.coeffs
            .iter()
            .rev()
            .fold(T::zero(), |acc, c| acc * x.clone() + c.clone())
    }

    pub fn derivative(&self) -> Self {
        let mut k = T::zero();
        let mut out = Vec::with_capacity(self.coeffs.len().saturating_sub(1));
        for c in &self.coeffs {
            if !k.is_zero() {
                out.push(c.clone() * k.clone());
            }
            k = k + T::one();
        }
        Self::new(out)
    }

    /// Antiderivative vanishing at zero.
    pub fn antiderivative(&self) -> Self {
        let mut out = Vec::with_capacity(self.coeffs.len() + 1);
        out.push(T::zero());
        let mut k = T::one();
        for c in &self.coeffs {
            out.push(c.clone() / k.clone());
            k = k + T::one();
        }
        Self::new(out)
    }

    /// Exact integral over `[a, b]`.
    pub fn integrate(&self, a: T, b: T) -> T {
        let anti = self.antiderivative();
        anti.eval(b) - anti.eval(a)
    }

    /// For a real polynomial `P(z)`, returns the polynomial `|P(iy)|^2` in `y`.
    pub fn abs_sq_on_imaginary_axis(&self) -> Self {
        let mut even = Vec::new();
        let mut odd = Vec::new();
        for (j, c) in self.coeffs.iter().enumerate() {
            let signed = if (j / 2) % 2 == 0 { c.clone() } else { -c.clone() };
            let (re, im) = if j % 2 == 0 { (signed, T::zero()) } else { (T::zero(), signed) };
            even.push(re);
            odd.push(im);
        }
        let re = Self::new(even);
        let im = Self::new(odd);
        &(&re * &re) + &(&im * &im)
    }

    /// Converts the coefficients with `f`.
    pub fn map<U: Field>(&self, f: impl Fn(&T) -> U) -> Polynomial<U> {
        Polynomial::new(self.coeffs.iter().map(f).collect())
    }

    /// Euclidean division `self = q * divisor + r` with `deg r < deg divisor`.
    /// Panics if `divisor` is zero.
    pub fn div_rem(&self, divisor: &Self) -> (Self, Self) {
        let dd = divisor.degree().expect("division by the zero polynomial");
        let lead = divisor.coeffs[dd].clone();
        let mut rem = self.coeffs.clone();
        let mut quot = vec![T::zero(); rem.len().saturating_sub(dd)];
        while rem.len() > dd && !rem.is_empty() {
            let shift = rem.len() - 1 - dd;
            let c = rem[rem.len() - 1].clone() / lead.clone();
            for (j, dc) in divisor.coeffs.iter().enumerate() {
                rem[shift + j] = rem[shift + j].clone() - c.clone() * dc.clone();
            }
            quot[shift] = c;
            rem.pop();
            while rem.last().is_some_and(|x| x.is_zero()) {
                rem.pop();
            }
        }
        (Self::new(quot), Self::new(rem))
    }

    /// Monic greatest common divisor. Only meaningful over exact fields.
    pub fn gcd(&self, other: &Self) -> Self {
        let (mut a, mut b) = (self.monic(), other.monic());
        while !b.is_zero() {
            let r = a.div_rem(&b).1.monic();
            a = b;
            b = r;
        }
        a
    }

    /// Scales so that the leading coefficient is one; zero stays zero.
    pub fn monic(&self) -> Self {
        match self.degree() {
            None => self.clone(),
            Some(d) => {
                let lead = self.coeffs[d].clone();
                Self::new(self.coeffs.iter().map(|c| c.clone() / lead.clone()).collect())
            }
        }
    }
}

impl<T: Scalar> Polynomial<T> {
    pub fn eval_complex(&self, z: Complex<T>) -> Complex<T> {
        self.coeffs
            .iter()
            .rev()
            .fold(Complex::new(T::zero(), T::zero()), |acc, &c| acc * z + c)
    }
}

impl<T: Field> Add for &Polynomial<T> {
    type Output = Polynomial<T>;
    fn add(self, rhs: Self) -> Polynomial<T> {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Polynomial::new((0..n).map(|j| self.coeff(j) + rhs.coeff(j)).collect())
    }
}

impl<T: Field> Sub for &Polynomial<T> {
    type Output = Polynomial<T>;
    fn sub(self, rhs: Self) -> Polynomial<T> {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Polynomial::new((0..n).map(|j| self.coeff(j) - rhs.coeff(j)).collect())
    }
}

impl<T: Field> Mul for &Polynomial<T> {
    type Output = Polynomial<T>;
    fn mul(self, rhs: Self) -> Polynomial<T> {
        if self.is_zero() || rhs.is_zero() {
            return Polynomial::zero();
        }
        let mut out = vec![T::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] = out[i + j].clone() + a.clone() * b.clone();
            }
        }
        Polynomial::new(out)
    }
}

impl<T: Field> Neg for &Polynomial<T> {
    type Output = Polynomial<T>;
    fn neg(self) -> Polynomial<T> {
        Polynomial::new(self.coeffs.iter().map(|c| -c.clone()).collect())
    }
}

fn check_nodes<T: Scalar>(nodes: &[T]) -> Result<()> {
    if nodes.is_empty() || nodes.len() > MAX_LAGRANGE_NODES {
        return Err(Error::InvalidParams(format!(
            "Lagrange interpolation needs between 1 and {MAX_LAGRANGE_NODES} nodes, got {}",
            nodes.len()
        )));
    }
    for (i, w) in nodes.windows(2).enumerate() {
        if !(w[1] > w[0]) {
            return Err(Error::DuplicateNodes { index: i + 1 });
        }
    }
    Ok(())
}

/// Polynomial `p((t - center) / half_width)` stored through its coefficients
/// in the local variable. Interpolation on `[a, b]` uses the local variable
/// on `[-1, 1]`, which keeps the monomial Vandermonde matrix well conditioned.
#[derive(Debug, Clone, PartialEq)]
pub struct MappedPolynomial<T> {
    pub local: Polynomial<T>,
    pub center: T,
    pub half_width: T,
}

impl<T: Scalar> MappedPolynomial<T> {
    pub fn to_local(&self, t: T) -> T {
        (t - self.center) / self.half_width
    }

    pub fn eval(&self, t: T) -> T {
        self.local.eval(self.to_local(t))
    }

    /// Exact integral over `[a, b]` in the original variable.
    pub fn integrate(&self, a: T, b: T) -> T {
        self.half_width * self.local.integrate(self.to_local(a), self.to_local(b))
    }

    /// Expands into the monomial basis of the original variable. Accurate for
    /// low degrees only; prefer [`Self::eval`] for numerical work.
    pub fn to_monomial(&self) -> Polynomial<T> {
        let shift = Polynomial::linear(-self.center / self.half_width, T::one() / self.half_width);
        self.local
            .coeffs()
            .iter()
            .rev()
            .fold(Polynomial::zero(), |acc, &c| &(&acc * &shift) + &Polynomial::constant(c))
    }
}

fn affine_map<T: Scalar>(nodes: &[T]) -> (T, T) {
    let (a, b) = (nodes[0], nodes[nodes.len() - 1]);
    let half = T::lit(0.5);
    if nodes.len() == 1 {
        (a, T::one())
    } else {
        (half * (a + b), half * (b - a))
    }
}

fn local_vandermonde<T: Scalar>(nodes: &[T]) -> (Matrix<T>, T, T) {
    let (center, half_width) = affine_map(nodes);
    let n = nodes.len();
    let mut v = Matrix::from_fn(n, n, |i, j| ((nodes[i] - center) / half_width).powi(j as i32));
    // Endpoints map to exactly -1 and 1.
    if n > 1 {
        for j in 0..n {
            v[(0, j)] = if j % 2 == 0 { T::one() } else { -T::one() };
            v[(n - 1, j)] = T::one();
        }
    }
    (v, center, half_width)
}

/// Every Lagrange basis polynomial for strictly increasing `nodes`, obtained
/// from one pivoted Vandermonde factorization in the centered variable.
pub fn lagrange_basis_all<T: Scalar>(nodes: &[T]) -> Result<Vec<MappedPolynomial<T>>> {
    check_nodes(nodes)?;
    let n = nodes.len();
    let (v, center, half_width) = local_vandermonde(nodes);
    let lu = LuFactor::new(&v)?;
    (0..n)
        .map(|r| {
            let mut e = vec![T::zero(); n];
            e[r] = T::one();
            lu.solve(&e)
                .map(|c| MappedPolynomial { local: Polynomial::new(c), center, half_width })
        })
        .collect()
}

/// The `r`-th Lagrange basis polynomial of `nodes`.
pub fn lagrange_basis<T: Scalar>(nodes: &[T], r: usize) -> Result<MappedPolynomial<T>> {
    if r >= nodes.len() {
        return Err(Error::DimensionMismatch { expected: nodes.len(), got: r });
    }
    let mut all = lagrange_basis_all(nodes)?;
    Ok(all.swap_remove(r))
}

/// Interpolatory quadrature on a fixed node set: weights `w_r` such that
/// `sum_r w_r f(t_r)` integrates every polynomial of degree below the node
/// count exactly, i.e. `w_r = int phi_r`.
///
/// The weights solve the transposed Vandermonde (moment) system, so their sum
/// reproduces the interval length to rounding.
#[derive(Debug, Clone)]
pub struct InterpolatoryQuadrature<T> {
    lu: LuFactor<T>,
    center: T,
    half_width: T,
}

impl<T: Scalar> InterpolatoryQuadrature<T> {
    pub fn new(nodes: &[T]) -> Result<Self> {
        check_nodes(nodes)?;
        let (v, center, half_width) = local_vandermonde(nodes);
        Ok(Self { lu: LuFactor::new(&v.transpose())?, center, half_width })
    }

    /// Weights `int_a^b phi_r(t) dt` for every basis polynomial.
    pub fn weights(&self, a: T, b: T) -> Result<Vec<T>> {
        let (sa, sb) = ((a - self.center) / self.half_width, (b - self.center) / self.half_width);
        let moments: Vec<T> = (0..self.lu.dim())
            .map(|j| {
                let k = T::from_usize_lossy(j + 1);
                self.half_width * (sb.powi(j as i32 + 1) - sa.powi(j as i32 + 1)) / k
            })
            .collect();
        self.lu.solve(&moments)
    }
}

pub fn integrate_polynomial<T: Field>(p: &Polynomial<T>, a: T, b: T) -> T {
    p.integrate(a, b)
}

/// Evaluates `numer(z) / denom(z)` for coefficient lists in ascending degree.
pub fn complex_rational_eval<T: Scalar>(numer: &[T], denom: &[T], z: Complex<T>) -> Result<Complex<T>> {
    let horner = |c: &[T]| {
        c.iter()
            .rev()
            .fold(Complex::new(T::zero(), T::zero()), |acc, &x| acc * z + x)
    };
    let d = horner(denom);
    if !(d.norm() > T::lit(POLE_TOL)) {
        return Err(Error::PoleAt { re: z.re.to_f64().unwrap_or(f64::NAN), im: z.im.to_f64().unwrap_or(f64::NAN) });
    }
    Ok(horner(numer) / d)
}
