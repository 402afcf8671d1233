//! Damped Newton iteration for square real systems.

use crate::linalg::{inf_norm, solve_in_place};
use crate::polysys::{ExactModel, PolySystem};
use crate::{Error, Result, Scalar};

/// A square real system `F: ℝⁿ → ℝⁿ`.
///
/// `residual` returns `None` outside the system's domain; the damping loop
/// treats that as an infinitely bad step.
pub trait Residual<T: Scalar> {
    fn dim(&self) -> usize;

    fn residual(&self, x: &[T]) -> Option<Vec<T>>;

    /// Row-major Jacobian; central differences unless overridden.
    fn jacobian(&self, x: &[T]) -> Option<Vec<T>> {
        finite_difference_jacobian(self, x)
    }
}

pub fn finite_difference_jacobian<T: Scalar, R: Residual<T> + ?Sized>(
    sys: &R,
    x: &[T],
) -> Option<Vec<T>> {
    let n = sys.dim();
    let base_step = T::epsilon().cbrt();
    let mut jac = vec![T::zero(); n * n];
    let mut probe = x.to_vec();
    for j in 0..n {
        let h = base_step * x[j].abs().max(T::one());
        probe[j] = x[j] + h;
        let fp = sys.residual(&probe)?;
        probe[j] = x[j] - h;
        let fm = sys.residual(&probe)?;
        probe[j] = x[j];
        let inv = (h + h).recip();
        for i in 0..n {
            jac[i * n + j] = (fp[i] - fm[i]) * inv;
        }
    }
    Some(jac)
}

impl<T: Scalar> Residual<T> for ExactModel<T> {
    fn dim(&self) -> usize {
        self.n_vars()
    }

    fn residual(&self, x: &[T]) -> Option<Vec<T>> {
        let r = ExactModel::residual(self, x);
        r.iter().all(|v| v.is_finite()).then_some(r)
    }
}

/// Real slice of a polynomial system, with its analytic Jacobian.
pub struct RealPolynomial<'a, T>(pub &'a PolySystem<T>);

impl<T: Scalar> Residual<T> for RealPolynomial<'_, T> {
    fn dim(&self) -> usize {
        self.0.n_vars()
    }

    fn residual(&self, x: &[T]) -> Option<Vec<T>> {
        let z = crate::solvers::to_complex(x);
        Some(self.0.eval(&z).into_iter().map(|c| c.re).collect())
    }

    fn jacobian(&self, x: &[T]) -> Option<Vec<T>> {
        let z = crate::solvers::to_complex(x);
        Some(self.0.jacobian(&z).into_iter().map(|c| c.re).collect())
    }
}

/// Residual given as a closure.
pub struct FnResidual<F> {
    pub dim: usize,
    pub f: F,
}

impl<T: Scalar, F: Fn(&[T]) -> Option<Vec<T>>> Residual<T> for FnResidual<F> {
    fn dim(&self) -> usize {
        self.dim
    }

    fn residual(&self, x: &[T]) -> Option<Vec<T>> {
        (self.f)(x)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NewtonConfig<T> {
    /// Stop once `‖F(x)‖∞ < tol`.
    pub tol: T,
    pub max_iters: usize,
    /// Step halvings tried when a full step does not reduce `‖F‖∞`.
    pub max_halvings: usize,
    /// Pivots below this fraction of the largest Jacobian entry count as
    /// singular.
    pub pivot_floor: T,
    /// On a singular Jacobian take a Levenberg–Marquardt step instead of
    /// failing (for problems whose solutions form a continuum).
    pub regularize_singular: bool,
    /// Extra full steps after reaching `tol`, kept while `‖F‖∞` does not
    /// grow. Useful when the Jacobian is badly conditioned and a small
    /// residual still leaves a sizeable error in `x`.
    pub polish_steps: usize,
}

impl<T: Scalar> Default for NewtonConfig<T> {
    fn default() -> Self {
        Self {
            tol: T::tol(1e-12),
            max_iters: 50,
            max_halvings: 8,
            pivot_floor: T::tol(1e-13),
            regularize_singular: false,
            polish_steps: 0,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct NewtonOutcome<T> {
    pub x: Vec<T>,
    pub iterations: usize,
    pub residual: T,
    /// `‖F‖∞` before the first step and after every accepted step.
    pub history: Vec<T>,
}

fn norm<T: Scalar>(v: &[T]) -> T {
    inf_norm(v, |x: &T| x.abs())
}

fn as_f64<T: Scalar>(x: &[T]) -> Vec<f64> {
    x.iter().map(|v| v.to_f64_lossy()).collect()
}

pub fn newton<T: Scalar, R: Residual<T> + ?Sized>(
    sys: &R,
    start: &[T],
    cfg: &NewtonConfig<T>,
) -> Result<NewtonOutcome<T>> {
    let n = sys.dim();
    if start.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: start.len(),
        });
    }
    let mut x = start.to_vec();
    let mut r = sys
        .residual(&x)
        .ok_or_else(|| Error::Domain("Newton start outside the residual's domain".into()))?;
    let mut res = norm(&r);
    let mut history = vec![res];

    for iter in 0..cfg.max_iters {
        if res < cfg.tol {
            polish(sys, &mut x, &mut r, &mut res, &mut history, n, cfg);
            return Ok(NewtonOutcome {
                x,
                iterations: iter,
                residual: res,
                history,
            });
        }
        let jac = sys.jacobian(&x).ok_or_else(|| Error::SingularJacobian {
            iterations: iter,
            best: as_f64(&x),
        })?;
        let step = newton_step(&jac, &r, n, cfg).ok_or_else(|| Error::SingularJacobian {
            iterations: iter,
            best: as_f64(&x),
        })?;

        let mut lambda = T::one();
        let mut accepted = None;
        for _ in 0..=cfg.max_halvings {
            let trial: Vec<T> = x.iter().zip(&step).map(|(&a, &d)| a + lambda * d).collect();
            if let Some(rt) = sys.residual(&trial) {
                let nt = norm(&rt);
                if nt < res {
                    accepted = Some((trial, rt, nt));
                    break;
                }
            }
            lambda *= T::lit(0.5);
        }
        match accepted {
            Some((xt, rt, nt)) => {
                x = xt;
                r = rt;
                res = nt;
                history.push(res);
            }
            None => {
                return Err(Error::NoConvergence {
                    iterations: iter + 1,
                    residual: res.to_f64_lossy(),
                    best: as_f64(&x),
                })
            }
        }
    }
    if res < cfg.tol {
        return Ok(NewtonOutcome {
            x,
            iterations: cfg.max_iters,
            residual: res,
            history,
        });
    }
    Err(Error::NoConvergence {
        iterations: cfg.max_iters,
        residual: res.to_f64_lossy(),
        best: as_f64(&x),
    })
}

fn polish<T: Scalar, R: Residual<T> + ?Sized>(
    sys: &R,
    x: &mut Vec<T>,
    r: &mut Vec<T>,
    res: &mut T,
    history: &mut Vec<T>,
    n: usize,
    cfg: &NewtonConfig<T>,
) {
    for _ in 0..cfg.polish_steps {
        if *res == T::zero() {
            return;
        }
        let Some(step) = sys.jacobian(x).and_then(|j| newton_step(&j, r, n, cfg)) else {
            return;
        };
        let trial: Vec<T> = x.iter().zip(&step).map(|(&a, &d)| a + d).collect();
        let Some(rt) = sys.residual(&trial) else { return };
        let nt = norm(&rt);
        if nt > *res {
            return;
        }
        *x = trial;
        *r = rt;
        *res = nt;
        history.push(nt);
    }
}

fn newton_step<T: Scalar>(jac: &[T], r: &[T], n: usize, cfg: &NewtonConfig<T>) -> Option<Vec<T>> {
    let mut a = jac.to_vec();
    let mut b: Vec<T> = r.iter().map(|&v| -v).collect();
    if solve_in_place(&mut a, &mut b, n, |v: &T| v.abs(), cfg.pivot_floor).is_some() {
        return Some(b);
    }
    if !cfg.regularize_singular {
        return None;
    }
    // (JᵀJ + μI) d = −Jᵀ r
    let mut jtj = vec![T::zero(); n * n];
    let mut jtr = vec![T::zero(); n];
    for i in 0..n {
        for j in 0..n {
            jtj[i * n + j] = (0..n).map(|k| jac[k * n + i] * jac[k * n + j]).sum();
        }
        jtr[i] = -(0..n).map(|k| jac[k * n + i] * r[k]).sum::<T>();
    }
    let scale = jtj.iter().fold(T::zero(), |m, v| m.max(v.abs())).max(T::min_positive_value());
    let mu = scale * T::tol(1e-10);
    for i in 0..n {
        jtj[i * n + i] += mu;
    }
    solve_in_place(&mut jtj, &mut jtr, n, |v: &T| v.abs(), T::epsilon())?;
    Some(jtr)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polysys::REFERENCE_SOLUTION_40_35_25 as PRINTED;

    #[test]
    fn square_root_of_one() {
        let f = FnResidual {
            dim: 1,
            f: |x: &[f64]| Some(vec![x[0] * x[0] - 1.0]),
        };
        let out = newton(&f, &[2.0], &NewtonConfig::default()).unwrap();
        assert!((out.x[0] - 1.0).abs() < 1e-12);
        assert!(out.history.windows(2).all(|w| w[1] < w[0]));
    }

    #[test]
    fn singular_jacobian_reported() {
        let f = FnResidual {
            dim: 2,
            f: |x: &[f64]| Some(vec![x[0] + x[1] - 1.0, 2.0 * x[0] + 2.0 * x[1] - 3.0]),
        };
        assert!(matches!(
            newton(&f, &[0.0, 0.0], &NewtonConfig::default()),
            Err(Error::SingularJacobian { .. })
        ));
    }

    #[test]
    fn no_convergence_carries_best_iterate() {
        // x² + 1 has no real root
        let f = FnResidual {
            dim: 1,
            f: |x: &[f64]| Some(vec![x[0] * x[0] + 1.0]),
        };
        match newton(&f, &[0.5], &NewtonConfig { max_iters: 5, ..Default::default() }) {
            Err(Error::NoConvergence { best, .. }) => assert_eq!(best.len(), 1),
            Err(Error::SingularJacobian { .. }) => {}
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn regularized_step_handles_continuum() {
        // solutions: the whole line x0 = 0.3
        let f = FnResidual {
            dim: 2,
            f: |x: &[f64]| Some(vec![x[0] - 0.3, 2.0 * (x[0] - 0.3)]),
        };
        let cfg = NewtonConfig { regularize_singular: true, ..Default::default() };
        let out = newton(&f, &[1.0, 5.0], &cfg).unwrap();
        assert!((out.x[0] - 0.3).abs() < 1e-12);
        assert!((out.x[1] - 5.0).abs() < 1e-6);
    }

    #[test]
    fn printed_cut_is_confirmed_quickly() {
        let m = ExactModel::PieCut { lambda1: 0.4, lambda2: 0.35 };
        let out = newton(&m, &PRINTED, &NewtonConfig::default()).unwrap();
        assert!(out.iterations <= 3, "{} iterations", out.iterations);
        for (a, b) in out.x.iter().zip(PRINTED) {
            assert!((a - b).abs() < 1e-8, "{a} vs {b}");
        }
    }

    #[test]
    fn finite_difference_matches_analytic_polynomial_jacobian() {
        let t = crate::taylor::arccos_taylor(0.0, 6).unwrap();
        let sys = crate::polysys::build_piecut_system(0.4, 0.35, &t).unwrap();
        let rp = RealPolynomial(&sys);
        let x = PRINTED;
        let a = rp.jacobian(&x).unwrap();
        let fd = finite_difference_jacobian(&rp, &x).unwrap();
        for (p, q) in a.iter().zip(&fd) {
            assert!((p - q).abs() <= 1e-6 * p.abs().max(1.0), "{p} vs {q}");
        }
    }
}
