//! Truncated Taylor expansions of `arccos`, used to turn `β = arccos(dot)`
//! into a polynomial equation.

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::{Error, Result, Scalar};

/// Largest supported truncation.
pub const MAX_TERMS: usize = 16;

/// Truncation used throughout unless configured otherwise (through `x⁵`).
pub const DEFAULT_TERMS: usize = 6;

/// Half-width of the trusted window around the center of a center-0 series.
pub const CENTER0_WINDOW: f64 = 0.8;

/// `Σ coeffs[k] · (x − center)^k`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct UniPoly<T> {
    pub center: T,
    pub coeffs: Vec<T>,
}

impl<T: Scalar> UniPoly<T> {
    pub fn new(center: T, coeffs: Vec<T>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::Invalid("polynomial needs at least one coefficient".into()));
        }
        if !center.is_finite() || coeffs.iter().any(|c| !c.is_finite()) {
            return Err(Error::Invalid("non-finite polynomial coefficient".into()));
        }
        Ok(Self { center, coeffs })
    }

    pub fn degree(&self) -> usize {
        self.coeffs
            .iter()
            .rposition(|c| !c.is_zero())
            .unwrap_or(0)
    }

    pub fn eval(&self, x: T) -> T {
        let h = x - self.center;
        self.coeffs
            .iter()
            .rev()
            .fold(T::zero(), |acc, &c| acc * h + c)
    }

    pub fn eval_complex(&self, x: Complex<T>) -> Complex<T> {
        let h = x - self.center;
        self.coeffs
            .iter()
            .rev()
            .fold(Complex::new(T::zero(), T::zero()), |acc, &c| acc * h + c)
    }

    /// Interval `[center − w, center + w]` where the expansion is trusted,
    /// with `w = 0.8·(1 − |center|)`; for the center-0 series this is the
    /// `[−0.8, 0.8]` window.
    pub fn validity_window(&self) -> (T, T) {
        let w = T::lit(CENTER0_WINDOW) * (T::one() - self.center.abs());
        (self.center - w, self.center + w)
    }

    pub fn in_window(&self, x: T) -> bool {
        let (lo, hi) = self.validity_window();
        x >= lo && x <= hi
    }
}

/// Taylor polynomial of `arccos` around `center` with `n_terms` coefficients.
///
/// With `g = arccos'` expanded as `Σ b_k h^k` around `a`, the identity
/// `(1 − x²) g' = x g` yields
/// `(1 − a²)(k + 1) b_{k+1} = a(2k + 1) b_k + k b_{k−1}`,
/// and the arccos coefficients are `c_0 = arccos(a)`, `c_{k+1} = b_k/(k+1)`.
pub fn arccos_taylor<T: Scalar>(center: T, n_terms: usize) -> Result<UniPoly<T>> {
    if !(center.abs() < T::one()) {
        return Err(Error::Domain(format!(
            "arccos expansion center {center} must satisfy |center| < 1"
        )));
    }
    if n_terms == 0 || n_terms > MAX_TERMS {
        return Err(Error::Invalid(format!(
            "arccos expansion supports 1..={MAX_TERMS} terms, got {n_terms}"
        )));
    }
    let mut coeffs = Vec::with_capacity(n_terms);
    coeffs.push(center.acos());
    if center.is_zero() {
        // closed form: c_{2n+1} = −(2n)! / (4ⁿ (n!)² (2n+1)), evens vanish
        let mut central = T::one(); // (2n)!/(4ⁿ(n!)²)
        for k in 1..n_terms {
            if k % 2 == 0 {
                coeffs.push(T::zero());
                continue;
            }
            let n = (k - 1) / 2;
            if n > 0 {
                let nn = T::from_usize(n).expect("small");
                central = central * (T::lit(2.0) * nn - T::one()) / (T::lit(2.0) * nn);
            }
            coeffs.push(-central / T::from_usize(k).expect("small"));
        }
        return UniPoly::new(center, coeffs);
    }

    let one_minus = T::one() - center * center;
    let mut b_prev = T::zero();
    let mut b = -one_minus.sqrt().recip();
    for k in 0..n_terms - 1 {
        coeffs.push(b / T::from_usize(k + 1).expect("small"));
        let kk = T::from_usize(k).expect("small");
        let next = (center * (T::lit(2.0) * kk + T::one()) * b + kk * b_prev)
            / (one_minus * (kk + T::one()));
        b_prev = b;
        b = next;
    }
    UniPoly::new(center, coeffs)
}

/// Maximum of `|p(x) − arccos(x)|` over `samples` evenly spaced points of
/// `[lo, hi]`.
pub fn max_abs_error<T: Scalar>(p: &UniPoly<T>, lo: T, hi: T, samples: usize) -> Result<T> {
    if !(lo > -T::one() && hi < T::one() && lo <= hi) {
        return Err(Error::Domain(format!(
            "error sweep interval [{lo}, {hi}] must lie inside (-1, 1)"
        )));
    }
    let samples = samples.max(1);
    let step = if samples == 1 {
        T::zero()
    } else {
        (hi - lo) / T::from_usize(samples - 1).expect("sample count")
    };
    Ok((0..samples)
        .map(|i| {
            let x = if i + 1 == samples {
                hi
            } else {
                lo + step * T::from_usize(i).expect("sample index")
            };
            (p.eval(x) - x.acos()).abs()
        })
        .fold(T::zero(), T::max))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_PI_2, PI};

    #[test]
    fn center_zero_six_terms() {
        let p = arccos_taylor(0.0, 6).unwrap();
        let want = [FRAC_PI_2, -1.0, 0.0, -1.0 / 6.0, 0.0, -3.0 / 40.0];
        for (g, w) in p.coeffs.iter().zip(want) {
            assert!((g - w).abs() < 1e-16, "{g} vs {w}");
        }
        assert_eq!(p.degree(), 5);
        assert_eq!(p.eval(0.0), FRAC_PI_2);
    }

    fn factorial(n: u32) -> f64 {
        (1..=n).map(f64::from).product()
    }

    #[test]
    fn center_zero_matches_factorial_formula() {
        let p = arccos_taylor(0.0, 16).unwrap();
        for n in 0..8u32 {
            let k = (2 * n + 1) as usize;
            let want = -factorial(2 * n)
                / (4f64.powi(n as i32) * factorial(n).powi(2) * f64::from(2 * n + 1));
            assert!((p.coeffs[k] - want).abs() < 1e-15 * want.abs().max(1.0));
            if k + 1 < 16 {
                assert_eq!(p.coeffs[k + 1], 0.0);
            }
        }
    }

    #[test]
    fn recentered_series_at_point_nine() {
        let p = arccos_taylor(0.9f64, 6).unwrap();
        let printed = [0.45, -2.29, -5.43, -27.75, -173.84, -1218.58];
        for (g, w) in p.coeffs.iter().zip(printed) {
            assert!((g - w).abs() <= 0.005 + 1e-12, "{g} vs {w}");
        }
        assert!((p.eval(0.9) - 0.9f64.acos()).abs() < 1e-15);
    }

    #[test]
    fn recentered_derivatives_match_finite_differences() {
        // c_k · k! equals the k-th derivative; check c_1..c_3 numerically
        let a = -0.35;
        let p = arccos_taylor(a, 4).unwrap();
        let h = 1e-3;
        let f = |x: f64| x.acos();
        let d1 = (f(a + h) - f(a - h)) / (2.0 * h);
        let d2 = (f(a + h) - 2.0 * f(a) + f(a - h)) / (h * h);
        let d3 = (f(a + 2.0 * h) - 2.0 * f(a + h) + 2.0 * f(a - h) - f(a - 2.0 * h)) / (2.0 * h * h * h);
        assert!((p.coeffs[1] - d1).abs() < 1e-6);
        assert!((p.coeffs[2] * 2.0 - d2).abs() < 1e-5);
        assert!((p.coeffs[3] * 6.0 - d3).abs() < 1e-4);
    }

    #[test]
    fn domain_checks() {
        assert!(arccos_taylor(1.0, 6).is_err());
        assert!(arccos_taylor(-1.2, 6).is_err());
        assert!(arccos_taylor(0.0, 0).is_err());
        assert!(arccos_taylor(0.0, 17).is_err());
    }

    #[test]
    fn eval_examples() {
        let p = UniPoly::new(0.0, vec![FRAC_PI_2, -1.0]).unwrap();
        assert_eq!(p.eval(1.0), FRAC_PI_2 - 1.0);
        let q = arccos_taylor(0.0, 6).unwrap();
        assert!((q.eval(0.5) - 0.5f64.acos()).abs() < 6e-3);
        let c = q.eval_complex(Complex::new(0.5, 0.0));
        assert!((c.re - q.eval(0.5)).abs() < 1e-15 && c.im == 0.0);
    }

    #[test]
    fn error_sweeps() {
        let p = arccos_taylor(0.0, 6).unwrap();
        assert!(max_abs_error(&p, -0.8, 0.8, 10_000).unwrap() < 0.05);
        assert!(max_abs_error(&p, -0.99, 0.99, 10_000).unwrap() > 0.05);
        let c = UniPoly::new(0.0, vec![FRAC_PI_2]).unwrap();
        assert_eq!(max_abs_error(&c, 0.0, 0.0, 1).unwrap(), 0.0);
        assert!(max_abs_error(&p, -1.0, 0.5, 10).is_err());
    }

    #[test]
    fn odd_symmetry_and_center_value() {
        let p = arccos_taylor(0.0, 12).unwrap();
        for x in [0.1, 0.37, 0.8, 0.95] {
            assert!((p.eval(x) + p.eval(-x) - PI).abs() < 1e-12);
        }
        for a in [-0.95f64, -0.5, 0.2, 0.7, 0.95] {
            for m in [1, 3, 6, 16] {
                let q = arccos_taylor(a, m).unwrap();
                assert!((q.eval(a) - a.acos()).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn validity_window() {
        let p = arccos_taylor(0.0, 6).unwrap();
        assert_eq!(p.validity_window(), (-0.8, 0.8));
        assert!(p.in_window(0.79) && !p.in_window(-0.81));
    }
}
