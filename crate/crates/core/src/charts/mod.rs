//! Eccentric pie-chart layouts: rays from an interior apex chosen so that
//! every sector's area is its share of the disc.

mod svg;

use serde::{Deserialize, Serialize};

pub use svg::{render_svg, SvgOptions, PALETTE};

use crate::geometry::{
    boundary_point, ccw_area_unchecked, ray_extent_unchecked, sector_area_decomposed, EccentricSector,
    Orientation, Point2,
};
use crate::{Error, Result, Scalar};

/// Shares used by [`apex_grid`].
pub const GRID_SHARES: [f64; 5] = [0.2, 0.3, 0.15, 0.25, 0.1];

/// Shares whose sum is off by at most this much are rescaled (with a warning).
pub const RENORMALIZE_WINDOW: f64 = 1e-3;

/// Apexes farther than this from the center get an ill-conditioning warning.
pub const NEAR_BOUNDARY: f64 = 0.95;

const SHARE_SUM_TOL: f64 = 1e-9;
const BISECTION_WIDTH: f64 = 1e-3;
const MAX_ITERS: usize = 200;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChartSpec<T> {
    pub shares: Vec<T>,
    pub apex: Point2<T>,
    /// Where the first ray meets the circle.
    pub start: Point2<T>,
    pub orientation: Orientation,
}

impl<T: Scalar> ChartSpec<T> {
    /// Counterclockwise chart whose first ray points at `(0, 1)`.
    pub fn new(shares: Vec<T>, apex: Point2<T>) -> Self {
        Self {
            shares,
            apex,
            start: Point2::new(T::zero(), T::one()),
            orientation: Orientation::Counterclockwise,
        }
    }

    pub fn with_start(mut self, start: Point2<T>) -> Self {
        self.start = start;
        self
    }

    pub fn with_orientation(mut self, orientation: Orientation) -> Self {
        self.orientation = orientation;
        self
    }

    /// Checks the spec and returns the shares scaled to sum to 1, plus any
    /// warnings.
    pub fn validate(&self) -> Result<(Vec<T>, Vec<String>)> {
        let mut warnings = Vec::new();
        if self.shares.is_empty() {
            return Err(Error::Invalid("at least one share is required".into()));
        }
        if let Some(bad) = self.shares.iter().find(|s| !(s.is_finite() && **s > T::zero())) {
            return Err(Error::Invalid(format!("shares must be positive, got {bad}")));
        }
        let sum: T = self.shares.iter().copied().sum();
        let dev = (sum - T::one()).abs();
        let shares = if dev <= T::tol(SHARE_SUM_TOL) {
            self.shares.clone()
        } else if dev <= T::lit(RENORMALIZE_WINDOW) {
            warnings.push(format!("shares sum to {sum}; rescaled to 1"));
            self.shares.iter().map(|&s| s / sum).collect()
        } else {
            return Err(Error::Invalid(format!("shares sum to {sum}, not 1")));
        };
        let r = self.apex.norm();
        if !(r < T::one() - T::tol(1e-9)) {
            return Err(Error::ApexOutside {
                x: self.apex.x.to_f64_lossy(),
                y: self.apex.y.to_f64_lossy(),
            });
        }
        if r > T::lit(NEAR_BOUNDARY) {
            warnings.push(format!(
                "apex is {r} from the center; sectors near it are thin and the layout is ill-conditioned"
            ));
        }
        self.start.check_on_circle()?;
        Ok((shares, warnings))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChartLayout<T> {
    pub apex: Point2<T>,
    pub orientation: Orientation,
    pub shares: Vec<T>,
    /// Ray directions from the apex, strictly monotone in the orientation.
    pub ray_angles: Vec<T>,
    pub boundary_points: Vec<Point2<T>>,
    pub sector_areas: Vec<T>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub warnings: Vec<String>,
}

impl<T: Scalar> ChartLayout<T> {
    /// Layout for given rays; shares are the resulting areas over π.
    pub fn from_rays(apex: Point2<T>, ray_angles: Vec<T>, orientation: Orientation) -> Result<Self> {
        apex.check_interior()?;
        if ray_angles.is_empty() {
            return Err(Error::Invalid("at least one ray is required".into()));
        }
        let mut layout = Self {
            apex,
            orientation,
            shares: Vec::new(),
            ray_angles,
            boundary_points: Vec::new(),
            sector_areas: Vec::new(),
            warnings: Vec::new(),
        };
        layout.boundary_points = layout
            .ray_angles
            .iter()
            .map(|&a| boundary_point(apex, a))
            .collect::<Result<_>>()?;
        layout.sector_areas = (0..layout.len())
            .map(|i| sector_area_decomposed(&layout.sector(i)?))
            .collect::<Result<_>>()?;
        layout.shares = layout.sector_areas.iter().map(|&a| a / T::PI()).collect();
        Ok(layout)
    }

    pub fn len(&self) -> usize {
        self.ray_angles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ray_angles.is_empty()
    }

    pub fn start(&self) -> Point2<T> {
        self.boundary_points[0]
    }

    pub fn spec(&self) -> ChartSpec<T> {
        ChartSpec {
            shares: self.shares.clone(),
            apex: self.apex,
            start: self.start(),
            orientation: self.orientation,
        }
    }

    /// Angle swept by sector `i`.
    pub fn sweep(&self, i: usize) -> T {
        let next = if i + 1 < self.len() {
            self.ray_angles[i + 1]
        } else {
            self.ray_angles[0] + self.orientation.sign::<T>() * T::two_pi()
        };
        (next - self.ray_angles[i]) * self.orientation.sign::<T>()
    }

    pub fn sector(&self, i: usize) -> Result<EccentricSector<T>> {
        EccentricSector::from_sweep(self.apex, self.ray_angles[i], self.sweep(i), self.orientation)
    }
}

/// Area swept from `phi0` through angle `w ∈ [0, 2π]`.
fn swept_area<T: Scalar>(apex: Point2<T>, phi0: T, w: T, orientation: Orientation) -> T {
    if w <= T::zero() {
        T::zero()
    } else if w >= T::two_pi() {
        T::PI()
    } else {
        match orientation {
            Orientation::Counterclockwise => ccw_area_unchecked(apex, phi0, w),
            Orientation::Clockwise => ccw_area_unchecked(apex, phi0 - w, w),
        }
    }
}

/// Solves for the rays one at a time. The swept area from the first ray is
/// strictly increasing in the sweep (its derivative is `r(φ)²/2`), so each
/// cumulative target has exactly one solution; bisection brackets it and
/// safeguarded Newton finishes.
pub fn solve_chart<T: Scalar>(spec: &ChartSpec<T>, tol: T) -> Result<ChartLayout<T>> {
    let (shares, warnings) = spec.validate()?;
    let tol = tol.max(T::tol(0.0));
    let apex = spec.apex;
    let sign = spec.orientation.sign::<T>();
    let phi0 = spec.start.sub(apex).angle();
    let area = |w: T| swept_area(apex, phi0, w, spec.orientation);

    let mut ray_angles = vec![phi0];
    let mut lo = T::zero();
    let mut cumulative = T::zero();
    for share in &shares[..shares.len() - 1] {
        cumulative += *share;
        let target = cumulative * T::PI();
        let w = solve_sweep(&area, target, lo, T::two_pi(), tol, |w| {
            let r = ray_extent_unchecked(apex, phi0 + sign * w);
            r * r / T::lit(2.0)
        })?;
        ray_angles.push(phi0 + sign * w);
        lo = w;
    }

    let mut layout = ChartLayout::from_rays(apex, ray_angles, spec.orientation)?;
    layout.shares = shares.clone();
    layout.warnings = warnings;
    let limit = tol * T::lit(10.0);
    let total: T = layout.sector_areas.iter().copied().sum();
    if (total - T::PI()).abs() > limit {
        return Err(Error::Internal(format!("sector areas sum to {total}, not π")));
    }
    for (i, (a, s)) in layout.sector_areas.iter().zip(&shares).enumerate() {
        if (*a - *s * T::PI()).abs() > limit {
            return Err(Error::Internal(format!("sector {i} has area {a}, target {}", *s * T::PI())));
        }
    }
    Ok(layout)
}

fn solve_sweep<T: Scalar>(
    area: &impl Fn(T) -> T,
    target: T,
    mut lo: T,
    mut hi: T,
    tol: T,
    slope: impl Fn(T) -> T,
) -> Result<T> {
    let f = |w: T| area(w) - target;
    let (mut flo, mut fhi) = (f(lo), f(hi));
    if !(flo < T::zero() && fhi > T::zero()) {
        return Err(Error::Internal(format!(
            "area target {target} not bracketed: f({lo}) = {flo}, f({hi}) = {fhi}"
        )));
    }
    while hi - lo > T::lit(BISECTION_WIDTH) {
        let mid = (lo + hi) / T::lit(2.0);
        let fm = f(mid);
        if !(fm >= flo && fm <= fhi) {
            return Err(Error::Internal(format!("swept area is not monotone near {mid}")));
        }
        if fm < T::zero() {
            (lo, flo) = (mid, fm);
        } else {
            (hi, fhi) = (mid, fm);
        }
    }
    let mut w = (lo + hi) / T::lit(2.0);
    for _ in 0..MAX_ITERS {
        let fw = f(w);
        if fw == T::zero() {
            return Ok(w);
        }
        if fw < T::zero() {
            lo = w;
        } else {
            hi = w;
        }
        let step = fw / slope(w);
        let mut next = w - step;
        if !(next > lo && next < hi) {
            next = (lo + hi) / T::lit(2.0);
        }
        if (next - w).abs() <= tol * T::lit(1e-3) || hi - lo <= T::epsilon() * T::lit(4.0) {
            return Ok(next);
        }
        w = next;
    }
    Err(Error::Internal(format!("sweep for area {target} did not converge")))
}

/// The same chart laid out in the opposite direction from the same start.
pub fn clockwise_counterpart<T: Scalar>(layout: &ChartLayout<T>, tol: T) -> Result<ChartLayout<T>> {
    let spec = layout.spec().with_orientation(layout.orientation.reversed());
    solve_chart(&spec, tol)
}

/// Counterclockwise charts of [`GRID_SHARES`] with apexes on
/// `{−½, 0, ½}²`; rows run from `y = ½` down, columns from `x = −½`.
pub fn apex_grid<T: Scalar>() -> Result<Vec<Vec<ChartLayout<T>>>> {
    let shares: Vec<T> = GRID_SHARES.iter().map(|&s| T::lit(s)).collect();
    let steps = [T::lit(-0.5), T::zero(), T::lit(0.5)];
    steps
        .iter()
        .rev()
        .map(|&y| {
            steps
                .iter()
                .map(|&x| solve_chart(&ChartSpec::new(shares.clone(), Point2::new(x, y)), T::tol(1e-12)))
                .collect()
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::sector_area_integral;
    use std::f64::consts::{PI, TAU};

    fn spec(shares: &[f64], x: f64, y: f64) -> ChartSpec<f64> {
        ChartSpec::new(shares.to_vec(), Point2::new(x, y))
    }

    #[test]
    fn centered_chart_is_traditional() {
        let l = solve_chart(&spec(&GRID_SHARES, 0.0, 0.0), 1e-12).unwrap();
        for (i, s) in GRID_SHARES.iter().enumerate() {
            assert!((l.sweep(i) - TAU * s).abs() < 1e-12, "{i}");
        }
        assert!((l.ray_angles[0] - PI / 2.0).abs() < 1e-15);
    }

    #[test]
    fn eccentric_areas_match_quadrature() {
        for orientation in [Orientation::Counterclockwise, Orientation::Clockwise] {
            let s = spec(&GRID_SHARES, 0.5, -0.5).with_orientation(orientation);
            let l = solve_chart(&s, 1e-12).unwrap();
            for i in 0..l.len() {
                let q = sector_area_integral(&l.sector(i).unwrap()).unwrap();
                assert!((q - GRID_SHARES[i] * PI).abs() < 1e-10, "{orientation:?} {i}");
            }
            let total: f64 = l.sector_areas.iter().sum();
            assert!((total - PI).abs() < 1e-10);
        }
    }

    #[test]
    fn rays_strictly_ordered() {
        for orientation in [Orientation::Counterclockwise, Orientation::Clockwise] {
            let l = solve_chart(&spec(&[0.4, 0.35, 0.25], 0.3, 0.6).with_orientation(orientation), 1e-12).unwrap();
            let sign = orientation.sign::<f64>();
            for w in l.ray_angles.windows(2) {
                assert!((w[1] - w[0]) * sign > 0.0);
            }
            for p in &l.boundary_points {
                assert!((p.norm() - 1.0).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn single_share_is_whole_disc() {
        let l = solve_chart(&spec(&[1.0], 0.2, 0.1), 1e-12).unwrap();
        assert_eq!(l.len(), 1);
        assert_eq!(l.sector_areas, vec![PI]);
    }

    #[test]
    fn counterparts_differ_off_axis() {
        let l = solve_chart(&spec(&[0.4, 0.35, 0.25], 0.5, 0.0), 1e-12).unwrap();
        let c = clockwise_counterpart(&l, 1e-12).unwrap();
        assert_eq!(c.orientation, Orientation::Clockwise);
        assert!(l.boundary_points[1].dist(c.boundary_points[1]) > 0.1);
    }

    #[test]
    fn centered_counterpart_is_mirror() {
        let l = solve_chart(&spec(&[0.25; 4], 0.0, 0.0), 1e-12).unwrap();
        let c = clockwise_counterpart(&l, 1e-12).unwrap();
        for (p, q) in l.boundary_points.iter().zip(&c.boundary_points) {
            assert!((p.x + q.x).abs() < 1e-12 && (p.y - q.y).abs() < 1e-12);
        }
    }

    #[test]
    fn validation() {
        assert!(solve_chart(&spec(&[0.5, 0.6], 0.0, 0.0), 1e-12).is_err());
        assert!(solve_chart(&spec(&[0.5, -0.5, 1.0], 0.0, 0.0), 1e-12).is_err());
        assert!(solve_chart(&spec(&[1.0], 1.0, 0.0), 1e-12).is_err());
        assert!(solve_chart(&spec(&[1.0], 0.0, 0.0).with_start(Point2::new(0.5, 0.5)), 1e-12).is_err());
        let l = solve_chart(&spec(&[0.5, 0.5005], 0.0, 0.0), 1e-12).unwrap();
        assert_eq!(l.warnings.len(), 1);
        assert!((l.shares.iter().sum::<f64>() - 1.0).abs() < 1e-15);
        let l = solve_chart(&spec(&[0.4, 0.6], 0.99, 0.0), 1e-12).unwrap();
        assert!(l.warnings[0].contains("ill-conditioned"));
    }

    #[test]
    fn grid_has_nine_valid_cells() {
        let g = apex_grid::<f64>().unwrap();
        assert_eq!(g.len(), 3);
        assert_eq!(g[1][1].apex, Point2::origin());
        assert_eq!(g[0][2].apex, Point2::new(0.5, 0.5));
        for l in g.iter().flatten() {
            for (a, s) in l.sector_areas.iter().zip(GRID_SHARES) {
                assert!((a - s * PI).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn works_in_f32() {
        let l = solve_chart(&ChartSpec::<f32>::new(vec![0.5, 0.25, 0.25], Point2::new(0.3, 0.0)), 1e-6).unwrap();
        assert!((l.sector_areas[0] - std::f32::consts::FRAC_PI_2).abs() < 1e-4);
    }
}
