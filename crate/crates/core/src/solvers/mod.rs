//! Newton iteration, homotopy continuation, root filtering and the pie-cut
//! solver built from them.

mod homotopy;
mod newton;
mod piecut;
mod pipeline;
mod roots;

use num_complex::Complex;

pub use homotopy::{
    track_all_paths, track_path, PathResult, PathStatus, SolveConfig, StartSystem, TotalDegreeStart,
    TrackerConfig, DEFAULT_PATH_BUDGET,
};
pub use newton::{
    finite_difference_jacobian, newton, FnResidual, NewtonConfig, NewtonOutcome, RealPolynomial, Residual,
};
pub use piecut::{
    cut_from_blades, group_into_classes, solve_piecut, OracleGrid, PieCutConfig, PieCutMode, PieCutReport,
    PieCutSolution, SolutionClass,
};
pub use pipeline::{solve_pipeline, total_degree_solve, PipelineConfig, PipelineResult, RefinedRoot};
pub use roots::{
    check_real_root, filter_roots, FilterTolerances, PathStats, RejectReason, Root, RootClass, RootSet,
};

pub(crate) fn to_complex<T: crate::Scalar>(x: &[T]) -> Vec<Complex<T>> {
    x.iter().map(|&v| Complex::new(v, T::zero())).collect()
}
