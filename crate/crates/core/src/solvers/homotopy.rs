//! Total-degree homotopy continuation.
//!
//! Paths of `H(x, t) = γ·t·G(x) + (1 − t)·F(x)` are followed from the known
//! roots of `G` at `t = 1` to `t = 0` with an Euler predictor and a Newton
//! corrector, then polished by Newton on `F`.

use num_complex::Complex;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::linalg::{inf_norm, solve_in_place};
use crate::polysys::PolySystem;
use crate::{Error, Result, Scalar};

/// A start system with an analytic Jacobian.
pub trait StartSystem<T: Scalar>: Sync {
    fn dim(&self) -> usize;
    fn eval(&self, x: &[Complex<T>]) -> Vec<Complex<T>>;
    fn jacobian(&self, x: &[Complex<T>]) -> Vec<Complex<T>>;
}

impl<T: Scalar> StartSystem<T> for PolySystem<T> {
    fn dim(&self) -> usize {
        self.n_vars()
    }

    fn eval(&self, x: &[Complex<T>]) -> Vec<Complex<T>> {
        PolySystem::eval(self, x)
    }

    fn jacobian(&self, x: &[Complex<T>]) -> Vec<Complex<T>> {
        PolySystem::jacobian(self, x)
    }
}

/// `x_i^{d_i} − 1 = 0`, whose roots are tuples of roots of unity.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TotalDegreeStart {
    pub degrees: Vec<u32>,
}

impl TotalDegreeStart {
    pub fn path_count(&self) -> u128 {
        self.degrees.iter().map(|&d| u128::from(d)).product()
    }

    /// Start root number `index` in mixed-radix order (first variable
    /// fastest).
    pub fn root<T: Scalar>(&self, index: u128) -> Vec<Complex<T>> {
        let mut rest = index;
        self.degrees
            .iter()
            .map(|&d| {
                let k = rest % u128::from(d);
                rest /= u128::from(d);
                let angle = T::two_pi() * T::from_u128(k).expect("index") / T::from_u32(d).expect("degree");
                Complex::from_polar(T::one(), angle)
            })
            .collect()
    }
}

impl<T: Scalar> StartSystem<T> for TotalDegreeStart {
    fn dim(&self) -> usize {
        self.degrees.len()
    }

    fn eval(&self, x: &[Complex<T>]) -> Vec<Complex<T>> {
        x.iter()
            .zip(&self.degrees)
            .map(|(&xi, &d)| xi.powu(d) - T::one())
            .collect()
    }

    fn jacobian(&self, x: &[Complex<T>]) -> Vec<Complex<T>> {
        let n = x.len();
        let mut j = vec![Complex::new(T::zero(), T::zero()); n * n];
        for (i, (&xi, &d)) in x.iter().zip(&self.degrees).enumerate() {
            j[i * n + i] = xi.powu(d - 1) * T::from_u32(d).expect("degree");
        }
        j
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrackerConfig<T> {
    pub initial_step: T,
    pub min_step: T,
    pub max_step: T,
    /// Corrector convergence: Newton update below `corrector_tol·(1 + ‖x‖)`;
    /// a converged endpoint has `‖F‖∞ < corrector_tol`.
    pub corrector_tol: T,
    pub corrector_max_iters: usize,
    pub step_expand: T,
    pub step_contract: T,
    /// Consecutive accepted steps before the step grows.
    pub expand_after: usize,
    /// Below this `t` steps never overshoot the remaining interval.
    pub endgame_start: T,
    pub max_path_steps: usize,
    /// `‖x‖∞` beyond which a path is declared diverged.
    pub divergence_norm: T,
    pub gamma: Complex<T>,
}

impl<T: Scalar> TrackerConfig<T> {
    /// Default settings with `γ` drawn from a seeded generator.
    pub fn with_seed(seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let theta: f64 = rng.gen_range(0.0..std::f64::consts::TAU);
        Self {
            initial_step: T::lit(0.05),
            min_step: T::lit(1e-7),
            max_step: T::lit(0.1),
            corrector_tol: T::tol(1e-10),
            corrector_max_iters: 3,
            step_expand: T::lit(2.0),
            step_contract: T::lit(0.5),
            expand_after: 3,
            endgame_start: T::lit(0.1),
            max_path_steps: 10_000,
            divergence_norm: T::lit(1e6),
            gamma: Complex::from_polar(T::one(), T::lit(theta)),
        }
    }

    fn validate(&self) -> Result<()> {
        let positive = [
            self.initial_step,
            self.min_step,
            self.max_step,
            self.corrector_tol,
            self.step_expand,
            self.step_contract,
            self.endgame_start,
            self.divergence_norm,
        ];
        if positive.iter().any(|v| !(*v > T::zero()))
            || !(self.min_step < self.initial_step)
            || self.corrector_max_iters == 0
            || (self.gamma.norm() - T::one()).abs() > T::tol(1e-12)
        {
            return Err(Error::Invalid("inconsistent tracker configuration".into()));
        }
        Ok(())
    }
}

impl<T: Scalar> Default for TrackerConfig<T> {
    fn default() -> Self {
        Self::with_seed(0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PathStatus {
    Converged,
    Diverged,
    Truncated,
    Singular,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PathResult<T> {
    pub endpoint: Vec<Complex<T>>,
    pub status: PathStatus,
    pub steps: usize,
    /// `‖F(endpoint)‖∞`.
    pub final_residual: T,
}

fn cnorm<T: Scalar>(v: &[Complex<T>]) -> T {
    inf_norm(v, |z: &Complex<T>| z.norm())
}

fn csolve<T: Scalar>(mut a: Vec<Complex<T>>, mut b: Vec<Complex<T>>) -> Option<Vec<Complex<T>>> {
    let n = b.len();
    solve_in_place(&mut a, &mut b, n, |z: &Complex<T>| z.norm(), T::tol(1e-14))?;
    b.iter().all(|z| z.re.is_finite() && z.im.is_finite()).then_some(b)
}

struct Homotopy<'a, T, G: ?Sized> {
    target: &'a PolySystem<T>,
    start: &'a G,
    gamma: Complex<T>,
}

impl<T: Scalar, G: StartSystem<T> + ?Sized> Homotopy<'_, T, G> {
    fn h(&self, x: &[Complex<T>], t: T) -> Vec<Complex<T>> {
        let g = self.start.eval(x);
        let f = self.target.eval(x);
        let gt = self.gamma * t;
        let ft = T::one() - t;
        g.iter().zip(&f).map(|(&gi, &fi)| gt * gi + fi * ft).collect()
    }

    fn hx(&self, x: &[Complex<T>], t: T) -> Vec<Complex<T>> {
        let g = self.start.jacobian(x);
        let f = self.target.jacobian(x);
        let gt = self.gamma * t;
        let ft = T::one() - t;
        g.iter().zip(&f).map(|(&gi, &fi)| gt * gi + fi * ft).collect()
    }

    fn ht(&self, x: &[Complex<T>]) -> Vec<Complex<T>> {
        let g = self.start.eval(x);
        let f = self.target.eval(x);
        g.iter().zip(&f).map(|(&gi, &fi)| self.gamma * gi - fi).collect()
    }

    /// Newton on `H(·, t)`; `None` if it fails to converge or stops
    /// contracting.
    fn correct(&self, mut x: Vec<Complex<T>>, t: T, cfg: &TrackerConfig<T>) -> Option<Vec<Complex<T>>> {
        let mut prev = T::infinity();
        for _ in 0..cfg.corrector_max_iters {
            let rhs: Vec<_> = self.h(&x, t).into_iter().map(|v| -v).collect();
            let dx = csolve(self.hx(&x, t), rhs)?;
            let step = cnorm(&dx);
            for (xi, di) in x.iter_mut().zip(&dx) {
                *xi += di;
            }
            if step <= cfg.corrector_tol * (T::one() + cnorm(&x)) {
                return Some(x);
            }
            if step > prev * T::lit(0.5) {
                return None;
            }
            prev = step;
        }
        None
    }
}

fn polish<T: Scalar>(
    target: &PolySystem<T>,
    mut x: Vec<Complex<T>>,
    tol: T,
) -> Option<(Vec<Complex<T>>, T)> {
    let mut res = cnorm(&target.eval(&x));
    for _ in 0..12 {
        if res < tol * T::lit(1e-3) {
            break;
        }
        let rhs: Vec<_> = target.eval(&x).into_iter().map(|v| -v).collect();
        let dx = csolve(target.jacobian(&x), rhs)?;
        let trial: Vec<_> = x.iter().zip(&dx).map(|(a, b)| a + b).collect();
        let r = cnorm(&target.eval(&trial));
        if !(r < res) {
            break;
        }
        x = trial;
        res = r;
    }
    Some((x, res))
}

/// Tracks one path from `start_root` (a root of `start`) at `t = 1` to a
/// root of `target` at `t = 0`.
pub fn track_path<T: Scalar, G: StartSystem<T> + ?Sized>(
    target: &PolySystem<T>,
    start: &G,
    start_root: &[Complex<T>],
    cfg: &TrackerConfig<T>,
) -> Result<PathResult<T>> {
    cfg.validate()?;
    let n = target.n_vars();
    if start.dim() != n || start_root.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: start_root.len(),
        });
    }
    if cnorm(&start.eval(start_root)) > T::tol(1e-12) {
        return Err(Error::Invalid("start point does not solve the start system".into()));
    }
    let hom = Homotopy {
        target,
        start,
        gamma: cfg.gamma,
    };

    let mut x = start_root.to_vec();
    let mut t = T::one();
    let mut dt = cfg.initial_step;
    let mut streak = 0usize;
    let mut steps = 0usize;
    let finish = |x: Vec<Complex<T>>, status: PathStatus, steps: usize| {
        let final_residual = cnorm(&target.eval(&x));
        Ok(PathResult {
            endpoint: x,
            status,
            steps,
            final_residual,
        })
    };

    while t > T::zero() {
        if steps >= cfg.max_path_steps {
            return finish(x, PathStatus::Truncated, steps);
        }
        steps += 1;
        let h = if t < cfg.endgame_start || dt >= t { dt.min(t) } else { dt };
        let t_new = if h >= t { T::zero() } else { t - h };

        // Euler predictor: dx/dt = −Hx⁻¹ Ht, moving by −h in t.
        let rhs = hom.ht(&x);
        let predicted = csolve(hom.hx(&x, t), rhs).map(|v| {
            x.iter()
                .zip(&v)
                .map(|(&xi, &vi)| xi + vi * h)
                .collect::<Vec<_>>()
        });
        let corrected = predicted.and_then(|p| hom.correct(p, t_new, cfg));

        match corrected {
            Some(xc) => {
                x = xc;
                t = t_new;
                streak += 1;
                if streak >= cfg.expand_after {
                    dt = (dt * cfg.step_expand).min(cfg.max_step);
                    streak = 0;
                }
                if cnorm(&x) > cfg.divergence_norm {
                    return finish(x, PathStatus::Diverged, steps);
                }
            }
            None => {
                streak = 0;
                dt *= cfg.step_contract;
                if dt < cfg.min_step {
                    if cnorm(&x) > cfg.divergence_norm.sqrt() {
                        return finish(x, PathStatus::Diverged, steps);
                    }
                    if t < cfg.endgame_start {
                        // stuck near the end: try to finish on F directly
                        return Ok(match polish(target, x.clone(), cfg.corrector_tol) {
                            Some((xp, r)) if r < cfg.corrector_tol => PathResult {
                                endpoint: xp,
                                status: PathStatus::Converged,
                                steps,
                                final_residual: r,
                            },
                            _ => {
                                let r = cnorm(&target.eval(&x));
                                PathResult {
                                    endpoint: x,
                                    status: PathStatus::Singular,
                                    steps,
                                    final_residual: r,
                                }
                            }
                        });
                    }
                    return finish(x, PathStatus::Truncated, steps);
                }
            }
        }
    }

    match polish(target, x.clone(), cfg.corrector_tol) {
        Some((xp, r)) if r < cfg.corrector_tol => Ok(PathResult {
            endpoint: xp,
            status: PathStatus::Converged,
            steps,
            final_residual: r,
        }),
        _ => finish(x, PathStatus::Singular, steps),
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolveConfig<T> {
    pub tracker: TrackerConfig<T>,
    /// Largest number of paths tracked without complaint.
    pub path_budget: u128,
    /// Endpoints closer than this (∞-norm) are the same root.
    pub dedup_tol: T,
    /// Largest imaginary part of a root classified as real.
    pub real_tol: T,
    pub parallel: bool,
}

pub const DEFAULT_PATH_BUDGET: u128 = 100_000;

impl<T: Scalar> SolveConfig<T> {
    pub fn with_seed(seed: u64) -> Self {
        Self {
            tracker: TrackerConfig::with_seed(seed),
            path_budget: DEFAULT_PATH_BUDGET,
            dedup_tol: T::tol(1e-6),
            real_tol: T::tol(1e-8),
            parallel: true,
        }
    }
}

impl<T: Scalar> Default for SolveConfig<T> {
    fn default() -> Self {
        Self::with_seed(0)
    }
}

/// Tracks every path of the total-degree homotopy for `sys`.
pub fn track_all_paths<T: Scalar>(sys: &PolySystem<T>, cfg: &SolveConfig<T>) -> Result<Vec<PathResult<T>>> {
    let start = TotalDegreeStart {
        degrees: sys.degrees(),
    };
    let count = start.path_count();
    if count > cfg.path_budget {
        return Err(Error::BudgetExceeded {
            bezout: count,
            budget: cfg.path_budget,
        });
    }
    let run = |i: u128| track_path(sys, &start, &start.root::<T>(i), &cfg.tracker);
    if cfg.parallel {
        (0..count as u64)
            .into_par_iter()
            .map(|i| run(u128::from(i)))
            .collect()
    } else {
        (0..count).map(run).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polysys::MultiPoly;

    fn sys(polys: Vec<MultiPoly<f64>>) -> PolySystem<f64> {
        let names = (0..polys.len()).map(|i| format!("x{i}")).collect();
        PolySystem::new(names, polys).unwrap()
    }

    #[test]
    fn identity_homotopy_stays_put() {
        let x = MultiPoly::var(1, 0);
        let f = sys(vec![&x.pow(2) - &MultiPoly::real_constant(1, 4.0)]);
        let root = vec![Complex::new(2.0, 0.0)];
        let out = track_path(&f, &f, &root, &TrackerConfig::default()).unwrap();
        assert_eq!(out.status, PathStatus::Converged);
        assert!((out.endpoint[0] - root[0]).norm() < 1e-12);
    }

    #[test]
    fn quadratic_paths_reach_both_roots() {
        let x = MultiPoly::var(1, 0);
        let f = sys(vec![&x.pow(2) - &MultiPoly::real_constant(1, 1.0)]);
        let paths = track_all_paths(&f, &SolveConfig::default()).unwrap();
        assert_eq!(paths.len(), 2);
        let mut ends: Vec<f64> = paths
            .iter()
            .inspect(|p| assert_eq!(p.status, PathStatus::Converged))
            .map(|p| p.endpoint[0].re)
            .collect();
        ends.sort_by(f64::total_cmp);
        assert!((ends[0] + 1.0).abs() < 1e-10 && (ends[1] - 1.0).abs() < 1e-10);
    }

    #[test]
    fn circle_and_diagonal() {
        let (x, y) = (MultiPoly::var(2, 0), MultiPoly::var(2, 1));
        let f = sys(vec![
            &(&x.pow(2) + &y.pow(2)) - &MultiPoly::real_constant(2, 1.0),
            &x - &y,
        ]);
        let paths = track_all_paths(&f, &SolveConfig::default()).unwrap();
        assert_eq!(paths.len(), 2);
        let h = std::f64::consts::FRAC_1_SQRT_2;
        for p in &paths {
            assert_eq!(p.status, PathStatus::Converged);
            assert!(p.final_residual < 1e-10);
            assert!((p.endpoint[0].re.abs() - h).abs() < 1e-10);
            assert!((p.endpoint[0] - p.endpoint[1]).norm() < 1e-12);
        }
        assert!(paths[0].endpoint[0].re * paths[1].endpoint[0].re < 0.0);
    }

    #[test]
    fn deficient_system_sends_paths_away() {
        // x y = 1, x = 2 : Bezout 2, one finite root
        let (x, y) = (MultiPoly::var(2, 0), MultiPoly::var(2, 1));
        let f = sys(vec![
            &(&x * &y) - &MultiPoly::real_constant(2, 1.0),
            &x - &MultiPoly::real_constant(2, 2.0),
        ]);
        let paths = track_all_paths(&f, &SolveConfig::default()).unwrap();
        let conv: Vec<_> = paths.iter().filter(|p| p.status == PathStatus::Converged).collect();
        assert_eq!(conv.len(), 1);
        assert!((conv[0].endpoint[1].re - 0.5).abs() < 1e-10);
    }

    #[test]
    fn budget_gate() {
        let x = MultiPoly::var(1, 0);
        let f = sys(vec![&x.pow(3) - &MultiPoly::real_constant(1, 1.0)]);
        let cfg = SolveConfig { path_budget: 2, ..SolveConfig::default() };
        assert!(matches!(
            track_all_paths(&f, &cfg),
            Err(Error::BudgetExceeded { bezout: 3, budget: 2 })
        ));
    }

    #[test]
    fn seeded_gamma_is_deterministic_and_unit() {
        let a = TrackerConfig::<f64>::with_seed(7).gamma;
        let b = TrackerConfig::<f64>::with_seed(7).gamma;
        assert_eq!(a, b);
        assert!((a.norm() - 1.0).abs() < 1e-15);
        assert_ne!(a, TrackerConfig::<f64>::with_seed(8).gamma);
    }

    #[test]
    fn start_roots_solve_start_system() {
        let s = TotalDegreeStart { degrees: vec![2, 3, 5] };
        assert_eq!(s.path_count(), 30);
        for i in 0..30 {
            let r = s.root::<f64>(i);
            assert!(cnorm(&StartSystem::<f64>::eval(&s, &r)) < 1e-14);
        }
    }
}
