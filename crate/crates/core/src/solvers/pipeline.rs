//! Homotopy solve → false-root filtering → Newton refinement on the exact
//! system.

use serde::Serialize;

use super::homotopy::{track_all_paths, SolveConfig};
use super::newton::{newton, NewtonConfig};
use super::roots::{filter_roots, FilterTolerances, RootSet};
use crate::geometry::Orientation;
use crate::polysys::PolySystem;
use crate::{Error, Result, Scalar};

/// Tracks every total-degree path of `sys` and returns the deduplicated,
/// real/complex-classified endpoints (no filtering yet).
pub fn total_degree_solve<T: Scalar>(sys: &PolySystem<T>, cfg: &SolveConfig<T>) -> Result<RootSet<T>> {
    let paths = track_all_paths(sys, cfg)?;
    Ok(RootSet::from_paths(
        sys.var_names().to_vec(),
        &paths,
        cfg.dedup_tol,
        cfg.real_tol,
    ))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PipelineConfig<T> {
    pub solve: SolveConfig<T>,
    pub filter: FilterTolerances<T>,
    pub newton: NewtonConfig<T>,
}

impl<T: Scalar> PipelineConfig<T> {
    pub fn with_seed(seed: u64) -> Self {
        Self {
            solve: SolveConfig::with_seed(seed),
            filter: FilterTolerances::default(),
            newton: NewtonConfig::default(),
        }
    }
}

impl<T: Scalar> Default for PipelineConfig<T> {
    fn default() -> Self {
        Self::with_seed(0)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RefinedRoot<T> {
    /// Accepted root of the polynomial system.
    pub polynomial_root: Vec<T>,
    /// The same root after Newton on the exact system.
    pub refined: Vec<T>,
    pub iterations: usize,
    /// `‖exact residual‖∞` at `polynomial_root`, then after every step.
    pub residual_history: Vec<T>,
    pub orientation: Option<Orientation>,
}

impl<T: Scalar> RefinedRoot<T> {
    /// Largest coordinate change made by refinement.
    pub fn correction(&self) -> T {
        self.polynomial_root
            .iter()
            .zip(&self.refined)
            .map(|(a, b)| (*a - *b).abs())
            .fold(T::zero(), T::max)
    }

    pub fn residual(&self) -> T {
        *self.residual_history.last().expect("history starts with the initial residual")
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PipelineResult<T> {
    pub roots: RootSet<T>,
    pub refined: Vec<RefinedRoot<T>>,
    /// Accepted roots whose refinement failed, with the reason.
    pub failures: Vec<String>,
}

pub fn solve_pipeline<T: Scalar>(sys: &PolySystem<T>, cfg: &PipelineConfig<T>) -> Result<PipelineResult<T>> {
    let model = sys
        .exact()
        .ok_or_else(|| Error::Invalid("refinement needs a system with an exact companion".into()))?;
    let roots = filter_roots(sys, total_degree_solve(sys, &cfg.solve)?, &cfg.filter);
    let mut refined = Vec::new();
    let mut failures = Vec::new();
    for root in roots.accepted() {
        let start = root.real_point();
        match newton(model, &start, &cfg.newton) {
            Ok(out) => {
                let orientation = model.geometric_orientation(&out.x, T::tol(1e-8)).ok();
                refined.push(RefinedRoot {
                    polynomial_root: start,
                    refined: out.x,
                    iterations: out.iterations,
                    residual_history: out.history,
                    orientation,
                });
            }
            Err(e) => failures.push(format!("refinement from {start:?} failed: {e}")),
        }
    }
    Ok(PipelineResult {
        roots,
        refined,
        failures,
    })
}
