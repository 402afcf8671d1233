//! The regular 3-blade pie cut: find the cutter position whose three slices
//! have prescribed areas.

use std::cmp::Ordering;

use serde::{Deserialize, Serialize};

use super::newton::{newton, FnResidual, NewtonConfig};
use super::pipeline::{solve_pipeline, PipelineConfig};
use super::roots::RootSet;
use crate::geometry::{
    boundary_point, sector_arc_angle, sector_area_decomposed, EccentricSector, Orientation, Point2,
};
use crate::polysys::{build_piecut_system, piecut_feasible, max_sector_fraction, ExactModel, PIECUT_VARS};
use crate::taylor::{arccos_taylor, DEFAULT_TERMS};
use crate::{Error, Result, Scalar};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PieCutMode {
    /// Newton on the reduced exact problem (cutter position, first blade
    /// angle) from a grid of starts.
    Oracle,
    /// Polynomial system → homotopy → filtering → Newton on the exact system.
    Pipeline,
    /// Newton on the exact system from caller-supplied starts.
    RefineOnly,
}

/// Grid of starting points for the reduced problem.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OracleGrid<T> {
    pub x0_min: T,
    pub x0_max: T,
    pub x0_step: T,
    pub alpha_min: T,
    pub alpha_max: T,
    pub alpha_step: T,
}

impl<T: Scalar> Default for OracleGrid<T> {
    fn default() -> Self {
        Self {
            x0_min: T::lit(-0.9),
            x0_max: T::lit(0.9),
            x0_step: T::lit(0.1),
            alpha_min: T::zero(),
            alpha_max: T::two_pi(),
            alpha_step: T::lit(0.1),
        }
    }
}

impl<T: Scalar> OracleGrid<T> {
    fn axis(lo: T, hi: T, step: T) -> Vec<T> {
        let n = ((hi - lo) / step + T::lit(1e-9)).floor().to_usize().unwrap_or(0);
        (0..=n)
            .map(|i| lo + step * T::from_usize(i).expect("grid index"))
            .filter(|&v| v < hi || (v - hi).abs() < T::lit(1e-12))
            .collect()
    }

    pub fn points(&self) -> Vec<(T, T)> {
        let xs = Self::axis(self.x0_min, self.x0_max, self.x0_step);
        let alphas = Self::axis(self.alpha_min, self.alpha_max, self.alpha_step);
        xs.iter()
            .flat_map(|&x| alphas.iter().map(move |&a| (x, a)))
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PieCutConfig<T> {
    pub grid: OracleGrid<T>,
    pub oracle_newton: NewtonConfig<T>,
    pub pipeline: PipelineConfig<T>,
    pub taylor_center: T,
    pub taylor_terms: usize,
    /// Starting points (in [`PIECUT_VARS`] order) for refine-only mode.
    pub starts: Vec<Vec<T>>,
    /// Solutions closer than this are the same.
    pub same_tol: T,
}

impl<T: Scalar> PieCutConfig<T> {
    pub fn with_seed(seed: u64) -> Self {
        Self {
            grid: OracleGrid::default(),
            oracle_newton: NewtonConfig {
                tol: T::tol(1e-14),
                regularize_singular: true,
                polish_steps: 4,
                ..NewtonConfig::default()
            },
            pipeline: PipelineConfig::with_seed(seed),
            taylor_center: T::zero(),
            taylor_terms: DEFAULT_TERMS,
            starts: Vec::new(),
            same_tol: T::tol(1e-8),
        }
    }
}

impl<T: Scalar> Default for PieCutConfig<T> {
    fn default() -> Self {
        Self::with_seed(0)
    }
}

/// One cut, with values in [`PIECUT_VARS`] order.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PieCutSolution<T> {
    pub values: Vec<T>,
    pub orientation: Orientation,
    /// `‖exact residual‖∞`.
    pub residual: T,
}

impl<T: Scalar> PieCutSolution<T> {
    pub fn x0(&self) -> T {
        self.values[0]
    }

    pub fn apex(&self) -> Point2<T> {
        Point2::new(self.values[0], T::zero())
    }

    pub fn boundary_points(&self) -> [Point2<T>; 3] {
        let v = &self.values;
        [
            Point2::new(v[1], v[2]),
            Point2::new(v[3], v[4]),
            Point2::new(v[5], v[6]),
        ]
    }

    pub fn named(&self) -> Vec<(&'static str, T)> {
        PIECUT_VARS.iter().copied().zip(self.values.iter().copied()).collect()
    }

    /// Mirror image across the vertical axis (`flip_x`) and/or the
    /// horizontal axis (`flip_y`).
    pub fn reflected(&self, flip_x: bool, flip_y: bool) -> Self {
        let mut values = self.values.clone();
        if flip_x {
            for i in [0, 1, 3, 5] {
                values[i] = -values[i];
            }
        }
        if flip_y {
            for i in [2, 4, 6] {
                values[i] = -values[i];
            }
        }
        let orientation = if flip_x != flip_y {
            self.orientation.reversed()
        } else {
            self.orientation
        };
        Self {
            values,
            orientation,
            residual: self.residual,
        }
    }

    fn distance(&self, other: &Self) -> T {
        self.values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| (*a - *b).abs())
            .fold(T::zero(), T::max)
    }
}

/// Solutions related by reflections across the coordinate axes.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SolutionClass<T> {
    /// Member with the largest `y1` (ties: largest `x1`).
    pub representative: PieCutSolution<T>,
    pub size: usize,
    pub members: Vec<PieCutSolution<T>>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PieCutReport<T> {
    pub shares: [T; 3],
    pub mode: PieCutMode,
    pub classes: Vec<SolutionClass<T>>,
    pub warnings: Vec<String>,
    pub diagnostics: Vec<String>,
    /// Polynomial roots, in pipeline mode.
    pub roots: Option<RootSet<T>>,
}

impl<T: Scalar> PieCutReport<T> {
    pub fn solutions(&self) -> impl Iterator<Item = &PieCutSolution<T>> {
        self.classes.iter().flat_map(|c| c.members.iter())
    }
}

/// Blade directions (from the apex) for a cut with first blade at `alpha`.
fn blade_angles<T: Scalar>(alpha: T, orientation: Orientation) -> [T; 3] {
    let step = T::two_pi() / T::lit(3.0) * orientation.sign::<T>();
    [alpha, alpha + step, alpha + step + step]
}

/// Areas of the first two slices of a cut centred at `(x0, 0)`.
fn slice_areas<T: Scalar>(x0: T, alpha: T, orientation: Orientation) -> Result<[T; 2]> {
    let apex = Point2::new(x0, T::zero());
    let dirs = blade_angles(alpha, orientation);
    let third = T::two_pi() / T::lit(3.0);
    let a0 = sector_area_decomposed(&EccentricSector::from_sweep(apex, dirs[0], third, orientation)?)?;
    let a1 = sector_area_decomposed(&EccentricSector::from_sweep(apex, dirs[1], third, orientation)?)?;
    Ok([a0, a1])
}

/// All eleven values of the cut centred at `(x0, 0)` with first blade at
/// `alpha`.
pub fn cut_from_blades<T: Scalar>(
    lambda1: T,
    lambda2: T,
    x0: T,
    alpha: T,
    orientation: Orientation,
) -> Result<PieCutSolution<T>> {
    let apex = Point2::new(x0, T::zero());
    let dirs = blade_angles(alpha, orientation);
    let pts = dirs
        .iter()
        .map(|&d| boundary_point(apex, d))
        .collect::<Result<Vec<_>>>()?;
    let third = T::two_pi() / T::lit(3.0);
    let beta = sector_arc_angle(&EccentricSector::from_sweep(apex, dirs[0], third, orientation)?)?;
    let phi = sector_arc_angle(&EccentricSector::from_sweep(apex, dirs[1], third, orientation)?)?;
    let values = vec![
        x0,
        pts[0].x,
        pts[0].y,
        pts[1].x,
        pts[1].y,
        pts[2].x,
        pts[2].y,
        beta,
        phi,
        beta.sin(),
        phi.sin(),
    ];
    let model = ExactModel::PieCut { lambda1, lambda2 };
    let residual = model
        .residual(&values)
        .iter()
        .fold(T::zero(), |m, v| m.max(v.abs()));
    Ok(PieCutSolution {
        values,
        orientation,
        residual,
    })
}

fn check_shares<T: Scalar>(lambda1: T, lambda2: T) -> Result<[T; 3]> {
    let shares = [lambda1, lambda2, T::one() - lambda1 - lambda2];
    if shares.iter().any(|&s| !(s > T::zero() && s < T::one())) {
        return Err(Error::Invalid(format!(
            "shares {lambda1}, {lambda2} and their remainder must each lie in (0, 1)"
        )));
    }
    Ok(shares)
}

pub fn solve_piecut<T: Scalar>(
    lambda1: T,
    lambda2: T,
    mode: PieCutMode,
    cfg: &PieCutConfig<T>,
) -> Result<PieCutReport<T>> {
    let shares = check_shares(lambda1, lambda2)?;
    let mut warnings = Vec::new();
    if !piecut_feasible(&shares) {
        warnings.push(format!(
            "largest share exceeds {:.6}, the most a regular 3-blade cut can give one slice",
            max_sector_fraction::<T>()
        ));
    }
    let mut diagnostics = Vec::new();
    let mut roots = None;
    let found = match mode {
        PieCutMode::Oracle => oracle(lambda1, lambda2, cfg, &mut warnings, &mut diagnostics),
        PieCutMode::Pipeline => {
            let taylor = arccos_taylor(cfg.taylor_center, cfg.taylor_terms)?;
            let sys = build_piecut_system(lambda1, lambda2, &taylor)?;
            warnings.extend(sys.warnings().iter().cloned());
            let out = solve_pipeline(&sys, &cfg.pipeline)?;
            diagnostics.extend(out.failures.iter().cloned());
            warnings.extend(out.roots.warnings.iter().cloned());
            let model = ExactModel::PieCut { lambda1, lambda2 };
            let sols = out
                .refined
                .iter()
                .filter_map(|r| {
                    r.orientation.map(|o| PieCutSolution {
                        values: r.refined.clone(),
                        orientation: o,
                        residual: model.residual(&r.refined).iter().fold(T::zero(), |m, v| m.max(v.abs())),
                    })
                })
                .collect();
            roots = Some(out.roots);
            sols
        }
        PieCutMode::RefineOnly => refine(lambda1, lambda2, cfg, &mut diagnostics)?,
    };
    if found.is_empty() {
        diagnostics.push(format!("no cut found in {mode:?} mode"));
    }
    Ok(PieCutReport {
        shares,
        mode,
        classes: group_into_classes(found, cfg.same_tol),
        warnings,
        diagnostics,
        roots,
    })
}

fn oracle<T: Scalar>(
    lambda1: T,
    lambda2: T,
    cfg: &PieCutConfig<T>,
    warnings: &mut Vec<String>,
    diagnostics: &mut Vec<String>,
) -> Vec<PieCutSolution<T>> {
    let targets = [lambda1 * T::PI(), lambda2 * T::PI()];
    let mut found: Vec<PieCutSolution<T>> = Vec::new();
    let mut continuum = false;
    let mut failures = 0usize;
    for orientation in [Orientation::Counterclockwise, Orientation::Clockwise] {
        let sys = FnResidual {
            dim: 2,
            f: move |x: &[T]| {
                if !(x[0].abs() < T::one()) {
                    return None;
                }
                let a = slice_areas(x[0], x[1], orientation).ok()?;
                Some(vec![a[0] - targets[0], a[1] - targets[1]])
            },
        };
        for (x0, alpha) in cfg.grid.points() {
            // near the center the blade angle barely matters and Newton can
            // drift many turns away; finish again from the reduced angle
            let out = newton(&sys, &[x0, alpha], &cfg.oracle_newton).and_then(|o| {
                newton(&sys, &[o.x[0], o.x[1].rem_euclid(&T::two_pi())], &cfg.oracle_newton)
            });
            let Ok(out) = out else {
                failures += 1;
                continue;
            };
            let (mut x0, mut alpha) = (out.x[0], out.x[1].rem_euclid(&T::two_pi()));
            if is_rank_deficient(&sys, &out.x) {
                // apex at the center: every rotation of the cutter works
                continuum = true;
                x0 = T::zero();
                alpha = T::FRAC_PI_2();
            }
            let Ok(sol) = cut_from_blades(lambda1, lambda2, x0, alpha, orientation) else {
                failures += 1;
                continue;
            };
            if !found.iter().any(|f| f.distance(&sol) < cfg.same_tol) {
                found.push(sol);
            }
        }
    }
    if continuum {
        warnings.push(
            "solutions are not isolated (the cutter can rotate about the center); reporting the member with the first blade toward (0, 1)"
                .into(),
        );
    }
    if failures > 0 {
        diagnostics.push(format!("{failures} oracle starts did not converge"));
    }
    found
}

fn is_rank_deficient<T: Scalar, R: super::newton::Residual<T>>(sys: &R, x: &[T]) -> bool {
    let Some(j) = sys.jacobian(x) else { return false };
    let det = j[0] * j[3] - j[1] * j[2];
    let scale = (j[0].hypot(j[2]) * j[1].hypot(j[3])).max(T::min_positive_value());
    det.abs() < scale * T::tol(1e-7)
}

fn refine<T: Scalar>(
    lambda1: T,
    lambda2: T,
    cfg: &PieCutConfig<T>,
    diagnostics: &mut Vec<String>,
) -> Result<Vec<PieCutSolution<T>>> {
    if cfg.starts.is_empty() {
        return Err(Error::Invalid("refine mode needs at least one starting point".into()));
    }
    let model = ExactModel::PieCut { lambda1, lambda2 };
    let mut found: Vec<PieCutSolution<T>> = Vec::new();
    for start in &cfg.starts {
        if start.len() != PIECUT_VARS.len() {
            return Err(Error::DimensionMismatch {
                expected: PIECUT_VARS.len(),
                got: start.len(),
            });
        }
        match newton(&model, start, &cfg.pipeline.newton) {
            Ok(out) => match model.geometric_orientation(&out.x, T::tol(1e-8)) {
                Ok(orientation) => {
                    let sol = PieCutSolution {
                        values: out.x,
                        orientation,
                        residual: out.residual,
                    };
                    if !found.iter().any(|f| f.distance(&sol) < cfg.same_tol) {
                        found.push(sol);
                    }
                }
                Err(e) => diagnostics.push(format!("refined point rejected: {e}")),
            },
            Err(e) => diagnostics.push(format!("refinement failed: {e}")),
        }
    }
    Ok(found)
}

fn representative_order<T: Scalar>(a: &PieCutSolution<T>, b: &PieCutSolution<T>) -> Ordering {
    let tie = T::tol(1e-9);
    let (ya, yb) = (a.values[2], b.values[2]);
    if (ya - yb).abs() > tie {
        return ya.partial_cmp(&yb).unwrap_or(Ordering::Equal);
    }
    a.values[1].partial_cmp(&b.values[1]).unwrap_or(Ordering::Equal)
}

/// Groups solutions whose reflections coincide; classes are sorted by
/// representative so the output does not depend on discovery order.
pub fn group_into_classes<T: Scalar>(solutions: Vec<PieCutSolution<T>>, tol: T) -> Vec<SolutionClass<T>> {
    let mut classes: Vec<Vec<PieCutSolution<T>>> = Vec::new();
    for sol in solutions {
        let images = [
            sol.clone(),
            sol.reflected(true, false),
            sol.reflected(false, true),
            sol.reflected(true, true),
        ];
        let home = classes.iter_mut().find(|members| {
            members
                .iter()
                .any(|m| images.iter().any(|img| img.distance(m) < tol))
        });
        match home {
            Some(members) => {
                if !members.iter().any(|m| m.distance(&sol) < tol) {
                    members.push(sol);
                }
            }
            None => classes.push(vec![sol]),
        }
    }
    let mut out: Vec<SolutionClass<T>> = classes
        .into_iter()
        .map(|mut members| {
            members.sort_by(|a, b| representative_order(b, a));
            SolutionClass {
                representative: members[0].clone(),
                size: members.len(),
                members,
            }
        })
        .collect();
    out.sort_by(|a, b| {
        a.representative
            .values
            .iter()
            .zip(&b.representative.values)
            .map(|(x, y)| x.partial_cmp(y).unwrap_or(Ordering::Equal))
            .find(|o| *o != Ordering::Equal)
            .unwrap_or(Ordering::Equal)
    });
    out
}
