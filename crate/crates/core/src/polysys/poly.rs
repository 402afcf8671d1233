//! Sparse multivariate polynomials with complex coefficients.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex;
use num_traits::{One, Zero};

use crate::taylor::UniPoly;
use crate::{Error, Result, Scalar};

/// Exponent vector, ordered by total degree (descending) and then
/// lexicographically (descending), so term lists read highest degree first.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Monomial(pub Vec<u32>);

impl Monomial {
    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        other
            .degree()
            .cmp(&self.degree())
            .then_with(|| other.0.cmp(&self.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MultiPoly<T> {
    n_vars: usize,
    terms: BTreeMap<Monomial, Complex<T>>,
}

impl<T: Scalar> MultiPoly<T> {
    pub fn zero(n_vars: usize) -> Self {
        Self {
            n_vars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(n_vars: usize, c: Complex<T>) -> Self {
        let mut p = Self::zero(n_vars);
        p.add_term(vec![0; n_vars], c);
        p
    }

    pub fn real_constant(n_vars: usize, c: T) -> Self {
        Self::constant(n_vars, Complex::new(c, T::zero()))
    }

    /// The polynomial `x_index`.
    pub fn var(n_vars: usize, index: usize) -> Self {
        assert!(index < n_vars, "variable {index} out of range for {n_vars} variables");
        let mut e = vec![0; n_vars];
        e[index] = 1;
        let mut p = Self::zero(n_vars);
        p.add_term(e, Complex::one());
        p
    }

    /// Builds from `(coefficient, exponents)` pairs, merging duplicates.
    pub fn from_terms(
        n_vars: usize,
        terms: impl IntoIterator<Item = (Complex<T>, Vec<u32>)>,
    ) -> Result<Self> {
        let mut p = Self::zero(n_vars);
        for (c, e) in terms {
            if e.len() != n_vars {
                return Err(Error::DimensionMismatch {
                    expected: n_vars,
                    got: e.len(),
                });
            }
            p.add_term(e, c);
        }
        Ok(p)
    }

    fn add_term(&mut self, exps: Vec<u32>, c: Complex<T>) {
        if c.is_zero() {
            return;
        }
        let key = Monomial(exps);
        let sum = self.terms.get(&key).map_or(c, |&old| old + c);
        if sum.is_zero() {
            self.terms.remove(&key);
        } else {
            self.terms.insert(key, sum);
        }
    }

    pub fn n_vars(&self) -> usize {
        self.n_vars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn n_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&[u32], Complex<T>)> + '_ {
        self.terms.iter().map(|(m, &c)| (m.0.as_slice(), c))
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(Monomial::degree).max().unwrap_or(0)
    }

    pub fn degree_in(&self, var: usize) -> u32 {
        self.terms.keys().map(|m| m.0[var]).max().unwrap_or(0)
    }

    pub fn uses_var(&self, var: usize) -> bool {
        self.terms.keys().any(|m| m.0[var] > 0)
    }

    fn check_same(&self, other: &Self) -> Result<()> {
        if self.n_vars != other.n_vars {
            return Err(Error::DimensionMismatch {
                expected: self.n_vars,
                got: other.n_vars,
            });
        }
        Ok(())
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        let mut out = self.clone();
        for (m, &c) in &other.terms {
            out.add_term(m.0.clone(), c);
        }
        Ok(out)
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self> {
        self.checked_add(&other.scale(-Complex::one()))
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        let mut out = Self::zero(self.n_vars);
        for (ma, &ca) in &self.terms {
            for (mb, &cb) in &other.terms {
                let e = ma.0.iter().zip(&mb.0).map(|(a, b)| a + b).collect();
                out.add_term(e, ca * cb);
            }
        }
        Ok(out)
    }

    pub fn scale(&self, k: Complex<T>) -> Self {
        let mut out = Self::zero(self.n_vars);
        for (m, &c) in &self.terms {
            out.add_term(m.0.clone(), c * k);
        }
        out
    }

    pub fn scale_real(&self, k: T) -> Self {
        self.scale(Complex::new(k, T::zero()))
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut acc = Self::constant(self.n_vars, Complex::one());
        for _ in 0..n {
            acc = &acc * self;
        }
        acc
    }

    /// `∂p/∂x_var`.
    pub fn derivative(&self, var: usize) -> Self {
        let mut out = Self::zero(self.n_vars);
        for (m, &c) in &self.terms {
            let e = m.0[var];
            if e == 0 {
                continue;
            }
            let mut exps = m.0.clone();
            exps[var] -= 1;
            out.add_term(exps, c * T::from_u32(e).expect("exponent"));
        }
        out
    }

    /// `p(x_0, …)` at a complex point.
    pub fn eval(&self, point: &[Complex<T>]) -> Complex<T> {
        assert_eq!(point.len(), self.n_vars, "evaluation point has wrong length");
        let mut acc = Complex::zero();
        for (m, &c) in &self.terms {
            let mut t = c;
            for (&e, &x) in m.0.iter().zip(point) {
                if e > 0 {
                    t *= x.powu(e);
                }
            }
            acc += t;
        }
        acc
    }

    pub fn eval_real(&self, point: &[T]) -> Complex<T> {
        let z: Vec<_> = point.iter().map(|&x| Complex::new(x, T::zero())).collect();
        self.eval(&z)
    }

    /// Substitutes `inner` into `p`: `Σ c_k (inner − center)^k`.
    pub fn compose_unipoly(p: &UniPoly<T>, inner: &Self) -> Self {
        let shifted = inner - &Self::real_constant(inner.n_vars, p.center);
        p.coeffs.iter().rev().fold(Self::zero(inner.n_vars), |acc, &c| {
            &(&acc * &shifted) + &Self::real_constant(inner.n_vars, c)
        })
    }
}

macro_rules! forward_binop {
    ($tr:ident, $method:ident, $checked:ident) => {
        impl<T: Scalar> $tr<&MultiPoly<T>> for &MultiPoly<T> {
            type Output = MultiPoly<T>;

            /// Panics on a variable-count mismatch; use the `checked_*`
            /// methods to get an error instead.
            fn $method(self, rhs: &MultiPoly<T>) -> MultiPoly<T> {
                self.$checked(rhs).expect("polynomials over different variable sets")
            }
        }

        impl<T: Scalar> $tr<MultiPoly<T>> for MultiPoly<T> {
            type Output = MultiPoly<T>;

            fn $method(self, rhs: MultiPoly<T>) -> MultiPoly<T> {
                (&self).$method(&rhs)
            }
        }
    };
}

forward_binop!(Add, add, checked_add);
forward_binop!(Sub, sub, checked_sub);
forward_binop!(Mul, mul, checked_mul);

impl<T: Scalar> Neg for &MultiPoly<T> {
    type Output = MultiPoly<T>;

    fn neg(self) -> MultiPoly<T> {
        self.scale(-Complex::one())
    }
}
