use num_complex::Complex;
use serde::{Deserialize, Serialize};

use super::poly::MultiPoly;
use crate::geometry::{self, EccentricSector, Orientation, Point2};
use crate::taylor::UniPoly;
use crate::{Error, Result, Scalar};

/// Variable order of the full pie-cutting system.
pub const PIECUT_VARS: [&str; 11] = [
    "x0", "x1", "y1", "x2", "y2", "x3", "y3", "beta", "phi", "s_beta", "s_phi",
];

/// Variable order of the single-sector system.
pub const SINGLE_SECTOR_VARS: [&str; 4] = ["x2", "y2", "beta", "s_beta"];

/// Largest share any sector of a regular 3-blade cut can take: the apex
/// sits on the boundary and the two excluded regions are circular segments
/// of central angle π/3.
pub fn max_sector_fraction<T: Scalar>() -> T {
    let excluded = T::lit(2.0) * (T::FRAC_PI_6() - T::lit(3.0).sqrt() / T::lit(4.0));
    (T::PI() - excluded) / T::PI()
}

/// Ten-digit solution of the 40-35-25 cut in [`PIECUT_VARS`] order.
pub const REFERENCE_SOLUTION_40_35_25: [f64; 11] = [
    0.164641996,
    0.375176778,
    0.926953281,
    -0.939722783,
    -0.341937259,
    0.805164109,
    -0.593052069,
    2.304361451,
    2.157770813,
    0.742792198,
    0.832620150,
];

/// Whether every share of a 3-blade cut is attainable.
pub fn piecut_feasible<T: Scalar>(shares: &[T]) -> bool {
    let bound = max_sector_fraction::<T>();
    shares.iter().all(|&s| s > T::zero() && s <= bound)
}

/// The non-polynomial system a polynomial system approximates, used for
/// Newton refinement and for filtering false roots.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ExactModel<T> {
    /// Regular 3-blade cutter at `(x0, 0)` with shares `lambda1`, `lambda2`
    /// and the remainder. Variables as in [`PIECUT_VARS`].
    PieCut { lambda1: T, lambda2: T },
    /// One sector of share `lambda` from the fixed boundary point `(0, 1)`
    /// around `apex`. Variables as in [`SINGLE_SECTOR_VARS`].
    SingleSector { lambda: T, apex: Point2<T> },
}

/// Box constraint `|x_var| < bound` (strict) or `|x_var| ≤ bound`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoxConstraint {
    pub var: usize,
    pub bound: f64,
    pub strict: bool,
}

/// Which equations of the polynomial system were squared and which
/// variables stand for sines; filtering uses this to undo the squaring.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FilterSpec {
    /// Exact-residual rows that carry an absolute value removed by squaring.
    pub squared_abs: Vec<usize>,
    /// Exact-residual rows that carry a square root removed by squaring.
    pub squared_sqrt: Vec<usize>,
    /// `(angle variable, sine variable)` pairs.
    pub sin_pairs: Vec<(usize, usize)>,
    pub boxes: Vec<BoxConstraint>,
}

impl<T: Scalar> ExactModel<T> {
    pub fn n_vars(&self) -> usize {
        match self {
            Self::PieCut { .. } => PIECUT_VARS.len(),
            Self::SingleSector { .. } => SINGLE_SECTOR_VARS.len(),
        }
    }

    pub fn var_names(&self) -> Vec<String> {
        let names: &[&str] = match self {
            Self::PieCut { .. } => &PIECUT_VARS,
            Self::SingleSector { .. } => &SINGLE_SECTOR_VARS,
        };
        names.iter().map(|s| s.to_string()).collect()
    }

    /// Shares of every sector the model constrains (the pie cut includes the
    /// implied third share).
    pub fn shares(&self) -> Vec<T> {
        match *self {
            Self::PieCut { lambda1, lambda2 } => {
                vec![lambda1, lambda2, T::one() - lambda1 - lambda2]
            }
            Self::SingleSector { lambda, .. } => vec![lambda],
        }
    }

    pub fn filter_spec(&self) -> FilterSpec {
        match self {
            Self::PieCut { .. } => FilterSpec {
                squared_abs: vec![5, 6],
                squared_sqrt: vec![7, 8],
                sin_pairs: vec![(7, 9), (8, 10)],
                boxes: vec![
                    BoxConstraint { var: 0, bound: 1.0, strict: true },
                    BoxConstraint { var: 9, bound: 1.0, strict: false },
                    BoxConstraint { var: 10, bound: 1.0, strict: false },
                ],
            },
            Self::SingleSector { .. } => FilterSpec {
                squared_abs: vec![2],
                squared_sqrt: vec![],
                sin_pairs: vec![(2, 3)],
                boxes: vec![BoxConstraint { var: 3, bound: 1.0, strict: false }],
            },
        }
    }

    /// Apex of the cut / sector.
    pub fn apex(&self, x: &[T]) -> Point2<T> {
        match *self {
            Self::PieCut { .. } => Point2::new(x[0], T::zero()),
            Self::SingleSector { apex, .. } => apex,
        }
    }

    /// Boundary points in blade order.
    pub fn boundary_points(&self, x: &[T]) -> Vec<Point2<T>> {
        match self {
            Self::PieCut { .. } => vec![
                Point2::new(x[1], x[2]),
                Point2::new(x[3], x[4]),
                Point2::new(x[5], x[6]),
            ],
            Self::SingleSector { .. } => vec![Point2::new(T::zero(), T::one()), Point2::new(x[0], x[1])],
        }
    }

    /// `(2λπ − angle + s, |shoelace determinant|)` for each area equation,
    /// evaluated with the sine variables rather than true sines.
    pub fn area_sides(&self, x: &[T]) -> Vec<(T, T)> {
        let apex = self.apex(x);
        let pts = self.boundary_points(x);
        let two_pi = T::two_pi();
        match *self {
            Self::PieCut { lambda1, lambda2 } => vec![
                (
                    two_pi * lambda1 - x[7] + x[9],
                    shoelace(apex, pts[0], pts[1]).abs(),
                ),
                (
                    two_pi * lambda2 - x[8] + x[10],
                    shoelace(apex, pts[1], pts[2]).abs(),
                ),
            ],
            Self::SingleSector { lambda, .. } => vec![(
                two_pi * lambda - x[2] + x[3],
                shoelace(apex, pts[0], pts[1]).abs(),
            )],
        }
    }

    /// `(dot of blade vectors, −½·sqrt(product of squared lengths))` for each
    /// 120° constraint.
    pub fn angle_sides(&self, x: &[T]) -> Vec<(T, T)> {
        match self {
            Self::PieCut { .. } => {
                let apex = self.apex(x);
                let pts = self.boundary_points(x);
                [(0, 1), (1, 2)]
                    .iter()
                    .map(|&(i, j)| {
                        let u = pts[i].sub(apex);
                        let v = pts[j].sub(apex);
                        (u.dot(v), -(u.norm_sq() * v.norm_sq()).sqrt() * T::lit(0.5))
                    })
                    .collect()
            }
            Self::SingleSector { .. } => vec![],
        }
    }

    /// Arguments fed to the arccos expansion (dot products of consecutive
    /// boundary points).
    pub fn cosine_arguments(&self, x: &[T]) -> Vec<T> {
        let pts = self.boundary_points(x);
        match self {
            Self::PieCut { .. } => vec![pts[0].dot(pts[1]), pts[1].dot(pts[2])],
            Self::SingleSector { .. } => vec![pts[0].dot(pts[1])],
        }
    }

    /// Residual of the exact system: unit-circle equations, sine-squared
    /// equations, area equations with the absolute value, 120° equations
    /// with the square root, and `cos(angle) = dot`.
    pub fn residual(&self, x: &[T]) -> Vec<T> {
        let one = T::one();
        let pts = self.boundary_points(x);
        let cos_args = self.cosine_arguments(x);
        let areas = self.area_sides(x);
        match self {
            Self::PieCut { .. } => {
                let angles = self.angle_sides(x);
                let (beta, phi, sb, sp) = (x[7], x[8], x[9], x[10]);
                vec![
                    pts[0].norm_sq() - one,
                    pts[1].norm_sq() - one,
                    pts[2].norm_sq() - one,
                    cos_args[0] * cos_args[0] + sb * sb - one,
                    cos_args[1] * cos_args[1] + sp * sp - one,
                    areas[0].0 - areas[0].1,
                    areas[1].0 - areas[1].1,
                    angles[0].0 - angles[0].1,
                    angles[1].0 - angles[1].1,
                    beta.cos() - cos_args[0],
                    phi.cos() - cos_args[1],
                ]
            }
            Self::SingleSector { .. } => {
                let (beta, s) = (x[2], x[3]);
                vec![
                    pts[1].norm_sq() - one,
                    cos_args[0] * cos_args[0] + s * s - one,
                    areas[0].0 - areas[0].1,
                    beta.cos() - cos_args[0],
                ]
            }
        }
    }

    /// Reconstructs the sectors with the geometry module and compares their
    /// areas with the target shares. Returns the orientation whose sector
    /// areas all lie within `tol` of `share·π`.
    pub fn geometric_orientation(&self, x: &[T], tol: T) -> Result<Orientation> {
        let apex = self.apex(x);
        apex.check_interior()?;
        let pts = self.boundary_points(x);
        let dirs: Vec<T> = pts.iter().map(|p| p.sub(apex).angle()).collect();
        let shares = self.shares();
        let n_sectors = shares.len();
        let mut best = None::<(Orientation, T)>;
        for orient in [Orientation::Counterclockwise, Orientation::Clockwise] {
            let mut worst = T::zero();
            for (i, &share) in shares.iter().enumerate() {
                let j = (i + 1) % dirs.len();
                let sector = EccentricSector::new(apex, dirs[i], dirs[j], orient)?;
                let area = geometry::sector_area_decomposed(&sector)?;
                worst = worst.max((area - share * T::PI()).abs());
            }
            debug_assert!(n_sectors >= 1);
            if best.is_none_or(|(_, w)| worst < w) {
                best = Some((orient, worst));
            }
        }
        match best {
            Some((o, w)) if w <= tol => Ok(o),
            Some((_, w)) => Err(Error::Invalid(format!(
                "reconstructed sector areas miss their targets by {w}"
            ))),
            None => unreachable!(),
        }
    }
}

/// `x0(y1 − y2) + x1(y2 − y0) + x2(y0 − y1)` for apex `(x0, y0)`.
fn shoelace<T: Scalar>(apex: Point2<T>, a: Point2<T>, b: Point2<T>) -> T {
    apex.x * (a.y - b.y) + a.x * (b.y - apex.y) + b.x * (apex.y - a.y)
}

/// Square polynomial system with optional exact companion.
#[derive(Debug, Clone)]
pub struct PolySystem<T> {
    var_names: Vec<String>,
    polys: Vec<MultiPoly<T>>,
    jacobian: Vec<Vec<MultiPoly<T>>>,
    exact: Option<ExactModel<T>>,
    taylor: Option<UniPoly<T>>,
    warnings: Vec<String>,
}

impl<T: Scalar> PolySystem<T> {
    pub fn new(var_names: Vec<String>, polys: Vec<MultiPoly<T>>) -> Result<Self> {
        let n = var_names.len();
        if polys.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: polys.len(),
            });
        }
        if let Some(p) = polys.iter().find(|p| p.n_vars() != n) {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: p.n_vars(),
            });
        }
        if let Some(v) = (0..n).find(|&v| !polys.iter().any(|p| p.uses_var(v))) {
            return Err(Error::Invalid(format!(
                "variable {} appears in no polynomial",
                var_names[v]
            )));
        }
        let jacobian = polys
            .iter()
            .map(|p| (0..n).map(|v| p.derivative(v)).collect())
            .collect();
        Ok(Self {
            var_names,
            polys,
            jacobian,
            exact: None,
            taylor: None,
            warnings: Vec::new(),
        })
    }

    pub fn n_vars(&self) -> usize {
        self.var_names.len()
    }

    pub fn var_names(&self) -> &[String] {
        &self.var_names
    }

    pub fn polys(&self) -> &[MultiPoly<T>] {
        &self.polys
    }

    pub fn exact(&self) -> Option<&ExactModel<T>> {
        self.exact.as_ref()
    }

    pub fn taylor(&self) -> Option<&UniPoly<T>> {
        self.taylor.as_ref()
    }

    pub fn warnings(&self) -> &[String] {
        &self.warnings
    }

    pub fn filters(&self) -> Option<FilterSpec> {
        self.exact.as_ref().map(ExactModel::filter_spec)
    }

    pub fn degrees(&self) -> Vec<u32> {
        self.polys.iter().map(MultiPoly::total_degree).collect()
    }

    /// Product of total degrees.
    pub fn bezout_number(&self) -> u128 {
        self.degrees().iter().map(|&d| u128::from(d)).product()
    }

    pub fn eval(&self, point: &[Complex<T>]) -> Vec<Complex<T>> {
        self.polys.iter().map(|p| p.eval(point)).collect()
    }

    /// Row-major `n × n` Jacobian.
    pub fn jacobian(&self, point: &[Complex<T>]) -> Vec<Complex<T>> {
        self.jacobian
            .iter()
            .flat_map(|row| row.iter().map(|d| d.eval(point)))
            .collect()
    }

    pub fn exact_residual(&self, x: &[T]) -> Option<Vec<T>> {
        self.exact.as_ref().map(|m| m.residual(x))
    }

    pub fn with_exact(mut self, model: ExactModel<T>, taylor: UniPoly<T>) -> Result<Self> {
        if model.n_vars() != self.n_vars() {
            return Err(Error::DimensionMismatch {
                expected: self.n_vars(),
                got: model.n_vars(),
            });
        }
        self.exact = Some(model);
        self.taylor = Some(taylor);
        Ok(self)
    }
}

fn check_share<T: Scalar>(name: &str, v: T) -> Result<()> {
    if !(v > T::zero() && v < T::one()) {
        return Err(Error::Invalid(format!("{name} = {v} must lie in (0, 1)")));
    }
    Ok(())
}

/// Polynomial form of the 3-blade cut with shares `lambda1`, `lambda2` and
/// `1 − lambda1 − lambda2`, with the cutter center on the x axis.
///
/// Equations, in order: three unit-circle equations, two sine-squared
/// equations, two squared area equations, two squared 120° equations and
/// two arccos-expansion equations for `beta` and `phi`.
pub fn build_piecut_system<T: Scalar>(
    lambda1: T,
    lambda2: T,
    taylor: &UniPoly<T>,
) -> Result<PolySystem<T>> {
    check_share("lambda1", lambda1)?;
    check_share("lambda2", lambda2)?;
    check_share("lambda1 + lambda2", lambda1 + lambda2)?;

    let n = PIECUT_VARS.len();
    let v = |i| MultiPoly::<T>::var(n, i);
    let k = |c: T| MultiPoly::real_constant(n, c);
    let (x0, x1, y1, x2, y2, x3, y3) = (v(0), v(1), v(2), v(3), v(4), v(5), v(6));
    let (beta, phi, sb, sp) = (v(7), v(8), v(9), v(10));
    let one = k(T::one());

    let dot12 = &(&x1 * &x2) + &(&y1 * &y2);
    let dot23 = &(&x2 * &x3) + &(&y2 * &y3);

    // y0 = 0 throughout
    let det = |xa: &MultiPoly<T>, ya: &MultiPoly<T>, xb: &MultiPoly<T>, yb: &MultiPoly<T>| {
        &(&(&x0 * &(ya - yb)) + &(xa * yb)) - &(xb * ya)
    };
    let area = |lambda: T, ang: &MultiPoly<T>, s: &MultiPoly<T>, d: MultiPoly<T>| {
        let lhs = &(&k(T::two_pi() * lambda) - ang) + s;
        &lhs.pow(2) - &d.pow(2)
    };
    // cos(2π/3) = −1/2; squaring leaves the factor 1/4
    let blade = |xa: &MultiPoly<T>, ya: &MultiPoly<T>, xb: &MultiPoly<T>, yb: &MultiPoly<T>| {
        let ua = xa - &x0;
        let ub = xb - &x0;
        let dot = &(&ua * &ub) + &(ya * yb);
        let na = &ua.pow(2) + &ya.pow(2);
        let nb = &ub.pow(2) + &yb.pow(2);
        &dot.pow(2) - &(&na * &nb).scale_real(T::lit(0.25))
    };

    let polys = vec![
        &(&x1.pow(2) + &y1.pow(2)) - &one,
        &(&x2.pow(2) + &y2.pow(2)) - &one,
        &(&x3.pow(2) + &y3.pow(2)) - &one,
        &(&dot12.pow(2) + &sb.pow(2)) - &one,
        &(&dot23.pow(2) + &sp.pow(2)) - &one,
        area(lambda1, &beta, &sb, det(&x1, &y1, &x2, &y2)),
        area(lambda2, &phi, &sp, det(&x2, &y2, &x3, &y3)),
        blade(&x1, &y1, &x2, &y2),
        blade(&x2, &y2, &x3, &y3),
        &beta - &MultiPoly::compose_unipoly(taylor, &dot12),
        &phi - &MultiPoly::compose_unipoly(taylor, &dot23),
    ];

    let names = PIECUT_VARS.iter().map(|s| s.to_string()).collect();
    let mut sys = PolySystem::new(names, polys)?
        .with_exact(ExactModel::PieCut { lambda1, lambda2 }, taylor.clone())?;
    let shares = [lambda1, lambda2, T::one() - lambda1 - lambda2];
    if !piecut_feasible(&shares) {
        sys.warnings.push(format!(
            "largest share exceeds the attainable maximum {:.6} of a regular 3-blade cut",
            max_sector_fraction::<T>()
        ));
    }
    Ok(sys)
}

/// Polynomial form of one eccentric sector of share `lambda` starting at the
/// boundary point `(0, 1)` around `apex`. Unknowns: the second boundary
/// point, the central angle and its sine.
///
/// The area equation encodes segment + triangle, so the system describes
/// sectors whose apex lies across the chord from the arc.
pub fn build_single_sector_system<T: Scalar>(
    lambda: T,
    apex: Point2<T>,
    taylor: &UniPoly<T>,
) -> Result<PolySystem<T>> {
    check_share("lambda", lambda)?;
    apex.check_interior()?;

    let n = SINGLE_SECTOR_VARS.len();
    let v = |i| MultiPoly::<T>::var(n, i);
    let k = |c: T| MultiPoly::real_constant(n, c);
    let (x2, y2, beta, s) = (v(0), v(1), v(2), v(3));
    let one = k(T::one());
    let (x1, y1) = (T::zero(), T::one());

    let dot = &x2.scale_real(x1) + &y2.scale_real(y1);
    // apex.x (y1 − y2) + x1 (y2 − apex.y) + x2 (apex.y − y1)
    let det = &(&(&k(apex.x * y1) - &y2.scale_real(apex.x)) + &(&y2 - &k(apex.y)).scale_real(x1))
        + &x2.scale_real(apex.y - y1);
    let lhs = &(&k(T::two_pi() * lambda) - &beta) + &s;

    let polys = vec![
        &(&x2.pow(2) + &y2.pow(2)) - &one,
        &(&dot.pow(2) + &s.pow(2)) - &one,
        &lhs.pow(2) - &det.pow(2),
        &beta - &MultiPoly::compose_unipoly(taylor, &dot),
    ];
    let names = SINGLE_SECTOR_VARS.iter().map(|s| s.to_string()).collect();
    PolySystem::new(names, polys)?.with_exact(ExactModel::SingleSector { lambda, apex }, taylor.clone())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::taylor::arccos_taylor;
    use std::f64::consts::PI;

    const PRINTED: [f64; 11] = REFERENCE_SOLUTION_40_35_25;

    #[test]
    fn max_fraction_value() {
        let want = (PI - 2.0 * (PI / 6.0 - 3f64.sqrt() / 4.0)) / PI;
        assert!((max_sector_fraction::<f64>() - want).abs() < 1e-15);
        assert!((max_sector_fraction::<f64>() - 0.9423).abs() < 1e-4);
        assert!(!piecut_feasible(&[0.95, 0.03, 0.02]));
        assert!(piecut_feasible(&[1.0 / 3.0; 3]));
    }

    #[test]
    fn piecut_degrees_and_bezout() {
        let t = arccos_taylor(0.0, 6).unwrap();
        let sys = build_piecut_system(0.4, 0.35, &t).unwrap();
        assert_eq!(sys.degrees(), vec![2, 2, 2, 4, 4, 4, 4, 4, 4, 10, 10]);
        assert_eq!(sys.bezout_number(), 3_276_800);
        assert!(sys.warnings().is_empty());
        let infeasible = build_piecut_system(0.95, 0.03, &t).unwrap();
        assert_eq!(infeasible.warnings().len(), 1);
        assert!(build_piecut_system(0.6, 0.5, &t).is_err());
        assert!(build_piecut_system(0.0, 0.5, &t).is_err());
    }

    #[test]
    fn printed_solution_nearly_solves_polynomial_system() {
        let t = arccos_taylor(0.0, 6).unwrap();
        let sys = build_piecut_system(0.4, 0.35, &t).unwrap();
        let r = sys.eval(&PRINTED.map(|x| Complex::new(x, 0.0)));
        let worst = r.iter().map(|c| c.norm()).fold(0.0, f64::max);
        assert!(worst < 0.01, "worst polynomial residual {worst}");
        let exact = sys.exact_residual(&PRINTED).unwrap();
        let worst = exact.iter().map(|c| c.abs()).fold(0.0, f64::max);
        assert!(worst < 1e-8, "worst exact residual {worst}");
    }

    #[test]
    fn symmetric_cut_solves_exact_residual() {
        let t = arccos_taylor(0.0, 6).unwrap();
        let third = 1.0 / 3.0;
        let sys = build_piecut_system(third, third, &t).unwrap();
        let ang = 2.0 * PI / 3.0;
        let p = |k: f64| Point2::unit(PI / 2.0 + k * ang);
        let (p1, p2, p3) = (p(0.0), p(1.0), p(2.0));
        let x = [0.0, p1.x, p1.y, p2.x, p2.y, p3.x, p3.y, ang, ang, ang.sin(), ang.sin()];
        let worst = sys
            .exact_residual(&x)
            .unwrap()
            .iter()
            .fold(0.0f64, |m, v| m.max(v.abs()));
        assert!(worst < 1e-14, "{worst}");
    }

    #[test]
    fn single_sector_shape() {
        let t = arccos_taylor(0.0, 6).unwrap();
        let sys = build_single_sector_system(0.25, Point2::origin(), &t).unwrap();
        assert_eq!(sys.degrees(), vec![2, 2, 2, 5]);
        assert_eq!(sys.bezout_number(), 40);
        // concentric quarter: (x2, y2) = (-1, 0), beta = pi/2, s = 1
        let x = [-1.0, 0.0, PI / 2.0, 1.0];
        let r = sys.eval(&x.map(|v| Complex::new(v, 0.0)));
        assert!(r.iter().all(|c| c.norm() < 1e-14));
        assert!(sys.exact_residual(&x).unwrap().iter().all(|v| v.abs() < 1e-15));
        assert!(build_single_sector_system(0.25, Point2::new(1.0, 0.0), &t).is_err());
    }

    #[test]
    fn taylor_equation_is_composition() {
        let t = arccos_taylor(0.0, 6).unwrap();
        let sys = build_piecut_system(0.4, 0.35, &t).unwrap();
        let x: [f64; 11] = [0.1, 0.6, 0.8, -0.28, 0.96, -0.5, -0.3, 1.9, 2.2, 0.5, 0.4];
        let c = x[1] * x[3] + x[2] * x[4];
        let got = sys.eval(&x.map(|v| Complex::new(v, 0.0)))[9].re;
        assert!((got - (x[7] - t.eval(c))).abs() < 1e-14);
    }

    #[test]
    fn geometric_orientation_of_printed_solution() {
        let m = ExactModel::PieCut { lambda1: 0.4, lambda2: 0.35 };
        assert_eq!(
            m.geometric_orientation(&PRINTED, 1e-6).unwrap(),
            Orientation::Counterclockwise
        );
        let mut mirrored = PRINTED;
        for i in [2, 4, 6] {
            mirrored[i] = -mirrored[i];
        }
        assert_eq!(
            m.geometric_orientation(&mirrored, 1e-6).unwrap(),
            Orientation::Clockwise
        );
    }
}
