//! Areas of triangles, circular segments and eccentric sectors of the unit
//! circle, plus a radial-integration oracle that shares no code with the
//! closed-form decomposition.
//!
//! An eccentric sector is the region swept by rays from an interior apex
//! between two directions. Its area is the circular segment cut off by the
//! chord joining the two boundary points plus (or minus) the triangle formed
//! by that chord and the apex.

use serde::{Deserialize, Serialize};

use crate::{Error, Result, Scalar};

/// Tolerance for "on the unit circle".
pub const ON_CIRCLE_TOL: f64 = 1e-9;

/// Default absolute error target of [`sector_area_integral`].
pub const QUADRATURE_TOL: f64 = 1e-11;

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Point2<T> {
    pub x: T,
    pub y: T,
}

impl<T: Scalar> Point2<T> {
    pub fn new(x: T, y: T) -> Self {
        Self { x, y }
    }

    pub fn origin() -> Self {
        Self::new(T::zero(), T::zero())
    }

    /// Unit vector at angle `phi`.
    pub fn unit(phi: T) -> Self {
        let (s, c) = phi.sin_cos();
        Self::new(c, s)
    }

    pub fn dot(self, other: Self) -> T {
        self.x * other.x + self.y * other.y
    }

    pub fn cross(self, other: Self) -> T {
        self.x * other.y - self.y * other.x
    }

    pub fn norm_sq(self) -> T {
        self.dot(self)
    }

    pub fn norm(self) -> T {
        self.x.hypot(self.y)
    }

    pub fn angle(self) -> T {
        self.y.atan2(self.x)
    }

    pub fn add(self, o: Self) -> Self {
        Self::new(self.x + o.x, self.y + o.y)
    }

    pub fn sub(self, o: Self) -> Self {
        Self::new(self.x - o.x, self.y - o.y)
    }

    pub fn scale(self, k: T) -> Self {
        Self::new(self.x * k, self.y * k)
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }

    pub fn dist(self, o: Self) -> T {
        self.sub(o).norm()
    }

    pub fn is_strictly_inside(self) -> bool {
        self.is_finite() && self.norm_sq() < T::one()
    }

    pub(crate) fn check_on_circle(self) -> Result<()> {
        let dev = self.norm() - T::one();
        if !self.is_finite() || dev.abs() > T::tol(ON_CIRCLE_TOL) {
            return Err(Error::NotOnCircle {
                x: self.x.to_f64_lossy(),
                y: self.y.to_f64_lossy(),
                deviation: dev.to_f64_lossy(),
            });
        }
        Ok(())
    }

    pub(crate) fn check_interior(self) -> Result<()> {
        if !self.is_strictly_inside() {
            return Err(Error::ApexOutside {
                x: self.x.to_f64_lossy(),
                y: self.y.to_f64_lossy(),
            });
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Orientation {
    #[default]
    Counterclockwise,
    Clockwise,
}

impl Orientation {
    pub fn reversed(self) -> Self {
        match self {
            Self::Counterclockwise => Self::Clockwise,
            Self::Clockwise => Self::Counterclockwise,
        }
    }

    /// +1 for counterclockwise, -1 for clockwise.
    pub fn sign<T: Scalar>(self) -> T {
        match self {
            Self::Counterclockwise => T::one(),
            Self::Clockwise => -T::one(),
        }
    }
}

/// Region bounded by two rays from `apex` and the arc between their
/// boundary intersections, swept from `phi_start` to `phi_end` in the given
/// orientation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EccentricSector<T> {
    pub apex: Point2<T>,
    pub phi_start: T,
    pub phi_end: T,
    pub orientation: Orientation,
}

impl<T: Scalar> EccentricSector<T> {
    pub fn new(apex: Point2<T>, phi_start: T, phi_end: T, orientation: Orientation) -> Result<Self> {
        apex.check_interior()?;
        let s = Self {
            apex,
            phi_start,
            phi_end,
            orientation,
        };
        let w = s.sweep();
        if !(w > T::zero()) || !w.is_finite() {
            return Err(Error::DegenerateSector {
                sweep: w.to_f64_lossy(),
            });
        }
        Ok(s)
    }

    /// Sector covering `sweep` radians from `phi_start`; a sweep of exactly
    /// 2π is the whole disc.
    pub fn from_sweep(
        apex: Point2<T>,
        phi_start: T,
        sweep: T,
        orientation: Orientation,
    ) -> Result<Self> {
        let sweep = if (sweep - T::two_pi()).abs() <= T::two_pi() * T::epsilon() * T::lit(64.0) {
            T::two_pi()
        } else {
            sweep
        };
        if !(sweep > T::zero()) || sweep > T::two_pi() {
            return Err(Error::DegenerateSector {
                sweep: sweep.to_f64_lossy(),
            });
        }
        Self::new(
            apex,
            phi_start,
            phi_start + orientation.sign::<T>() * sweep,
            orientation,
        )
    }

    /// Swept angle in `(0, 2π]`. A raw difference already in that range (or
    /// within rounding of 2π) is kept so that full-disc sectors survive;
    /// anything else is reduced modulo 2π.
    pub fn sweep(&self) -> T {
        let d = (self.phi_end - self.phi_start) * self.orientation.sign::<T>();
        // φ + 2π − φ need not round to 2π
        if (d - T::two_pi()).abs() <= T::two_pi() * T::epsilon() * T::lit(64.0) {
            return T::two_pi();
        }
        if d > T::zero() && d <= T::two_pi() {
            d
        } else {
            d.rem_euclid(&T::two_pi())
        }
    }

    /// The same region described counterclockwise: `(start, sweep)`.
    pub fn ccw_span(&self) -> (T, T) {
        let w = self.sweep();
        match self.orientation {
            Orientation::Counterclockwise => (self.phi_start, w),
            Orientation::Clockwise => (self.phi_start - w, w),
        }
    }

    pub fn is_full_disc(&self) -> bool {
        self.sweep() >= T::two_pi()
    }
}

/// Unsigned triangle area from the 3×3 determinant with a column of ones.
pub fn triangle_area<T: Scalar>(p1: Point2<T>, p2: Point2<T>, p3: Point2<T>) -> T {
    let (x1, y1, x2, y2, x0, y0) = (p1.x, p1.y, p2.x, p2.y, p3.x, p3.y);
    let det = x1 * y2 + x2 * y0 + x0 * y1 - x2 * y1 - x0 * y2 - x1 * y0;
    det.abs() * T::lit(0.5)
}

/// Signed triangle area, positive when the vertices run counterclockwise.
pub fn signed_triangle_area<T: Scalar>(p1: Point2<T>, p2: Point2<T>, p3: Point2<T>) -> T {
    p2.sub(p1).cross(p3.sub(p1)) * T::lit(0.5)
}

/// Angle at the origin between two boundary points, in `[0, π]`.
pub fn central_angle<T: Scalar>(a: Point2<T>, b: Point2<T>) -> Result<T> {
    a.check_on_circle()?;
    b.check_on_circle()?;
    Ok(a.dot(b).max(-T::one()).min(T::one()).acos())
}

/// Area between a chord of the unit circle and the arc it subtends.
pub fn segment_area<T: Scalar>(beta: T) -> Result<T> {
    if !(beta > T::zero() && beta < T::two_pi()) {
        return Err(Error::Domain(format!(
            "segment central angle {beta} outside (0, 2π)"
        )));
    }
    Ok(segment_area_unchecked(beta))
}

fn segment_area_unchecked<T: Scalar>(beta: T) -> T {
    (beta - beta.sin()) * T::lit(0.5)
}

/// Distance from `apex` to the unit circle along direction `phi`.
pub fn ray_extent<T: Scalar>(apex: Point2<T>, phi: T) -> Result<T> {
    apex.check_interior()?;
    Ok(ray_extent_unchecked(apex, phi))
}

pub(crate) fn ray_extent_unchecked<T: Scalar>(apex: Point2<T>, phi: T) -> T {
    let u = Point2::unit(phi);
    let b = apex.dot(u);
    let c = T::one() - apex.norm_sq();
    let disc = (b * b + c).sqrt();
    // both forms are the positive root; pick the one without cancellation
    if b <= T::zero() {
        disc - b
    } else {
        c / (disc + b)
    }
}

/// Where the ray from `apex` in direction `phi` meets the unit circle.
pub fn boundary_point<T: Scalar>(apex: Point2<T>, phi: T) -> Result<Point2<T>> {
    let r = ray_extent(apex, phi)?;
    Ok(apex.add(Point2::unit(phi).scale(r)))
}

/// Area of an eccentric sector as circular segment ± apex triangle.
pub fn sector_area_decomposed<T: Scalar>(s: &EccentricSector<T>) -> Result<T> {
    s.apex.check_interior()?;
    let (start, w) = s.ccw_span();
    if !(w > T::epsilon() * T::lit(64.0)) {
        return Err(Error::DegenerateSector {
            sweep: w.to_f64_lossy(),
        });
    }
    if w >= T::two_pi() {
        return Ok(T::PI());
    }
    Ok(ccw_area_unchecked(s.apex, start, w))
}

/// Central angle of the arc a sector sweeps, in `(0, 2π]`.
pub fn sector_arc_angle<T: Scalar>(s: &EccentricSector<T>) -> Result<T> {
    s.apex.check_interior()?;
    let (start, w) = s.ccw_span();
    if w >= T::two_pi() {
        return Ok(T::two_pi());
    }
    Ok(ccw_chord(s.apex, start, w).2)
}

/// Boundary points of a counterclockwise span and the central angle of the
/// arc between them, for `0 < w < 2π` and an interior apex.
fn ccw_chord<T: Scalar>(apex: Point2<T>, start: T, w: T) -> (Point2<T>, Point2<T>, T) {
    let a = apex.add(Point2::unit(start).scale(ray_extent_unchecked(apex, start)));
    let end = start + w;
    let b = apex.add(Point2::unit(end).scale(ray_extent_unchecked(apex, end)));
    let beta = a.cross(b).abs().atan2(a.dot(b));

    // Is the minor arc the one swept by the sector? Test the direction from
    // the apex toward the minor arc's midpoint.
    let mid = a.add(b);
    let mid = if mid.norm() > T::tol(1e-12) {
        mid.scale(mid.norm().recip())
    } else {
        // antipodal chord: both arcs are half circles
        Point2::new(-a.y, a.x)
    };
    let dir = mid.sub(apex).angle();
    let offset = (dir - start).rem_euclid(&T::two_pi());
    let beta = if offset <= w { beta } else { T::two_pi() - beta };
    (a, b, beta)
}

/// Counterclockwise sector area for `0 < w < 2π`; apex assumed interior.
pub(crate) fn ccw_area_unchecked<T: Scalar>(apex: Point2<T>, start: T, w: T) -> T {
    let (a, b, beta) = ccw_chord(apex, start, w);
    // The swept arc lies to the right of the directed chord a -> b, so a
    // positive signed area means the apex is across the chord and the
    // triangle adds to the segment.
    segment_area_unchecked(beta) + signed_triangle_area(a, b, apex)
}

/// Area of an eccentric sector by adaptive quadrature of `½∫ r(φ)² dφ`.
pub fn sector_area_integral<T: Scalar>(s: &EccentricSector<T>) -> Result<T> {
    sector_area_integral_tol(s, T::tol(QUADRATURE_TOL))
}

pub fn sector_area_integral_tol<T: Scalar>(s: &EccentricSector<T>, tol: T) -> Result<T> {
    s.apex.check_interior()?;
    let (start, w) = s.ccw_span();
    if !(w > T::zero()) {
        return Err(Error::DegenerateSector {
            sweep: w.to_f64_lossy(),
        });
    }
    let apex = s.apex;
    let f = |phi: T| {
        let r = ray_extent_unchecked(apex, phi);
        r * r * T::lit(0.5)
    };
    adaptive_gauss_kronrod(f, start, start + w, tol)
}

// 15-point Kronrod nodes on [0, 1] (symmetric), with the embedded 7-point
// Gauss rule on every other node.
const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_5,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_48,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_224,
    0.063_092_092_629_978_56,
    0.104_790_010_322_250_19,
    0.140_653_259_715_525_92,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_42,
    0.204_432_940_075_298_89,
    0.209_482_141_084_727_82,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_64,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

fn gk15<T: Scalar>(f: &impl Fn(T) -> T, a: T, b: T) -> (T, T) {
    let half = (b - a) * T::lit(0.5);
    let center = (a + b) * T::lit(0.5);
    let fc = f(center);
    let mut kronrod = fc * T::lit(WGK[7]);
    let mut gauss = fc * T::lit(WG[3]);
    for j in 0..7 {
        let dx = half * T::lit(XGK[j]);
        let pair = f(center - dx) + f(center + dx);
        kronrod += pair * T::lit(WGK[j]);
        if j % 2 == 1 {
            gauss += pair * T::lit(WG[j / 2]);
        }
    }
    (kronrod * half, ((kronrod - gauss) * half).abs())
}

const MAX_INTERVALS: usize = 4096;

/// Globally adaptive G7-K15 quadrature with interval bisection.
pub(crate) fn adaptive_gauss_kronrod<T: Scalar>(
    f: impl Fn(T) -> T,
    a: T,
    b: T,
    tol: T,
) -> Result<T> {
    let (v, e) = gk15(&f, a, b);
    let mut intervals = vec![(a, b, v, e)];
    loop {
        let total_err: T = intervals.iter().map(|iv| iv.3).sum();
        if total_err <= tol {
            return Ok(intervals.iter().map(|iv| iv.2).sum());
        }
        if intervals.len() >= MAX_INTERVALS {
            return Err(Error::Quadrature {
                achieved: total_err.to_f64_lossy(),
                target: tol.to_f64_lossy(),
            });
        }
        let worst = intervals
            .iter()
            .enumerate()
            .max_by(|x, y| x.1 .3.partial_cmp(&y.1 .3).unwrap_or(std::cmp::Ordering::Equal))
            .map(|(i, _)| i)
            .unwrap_or(0);
        let (lo, hi, _, _) = intervals.swap_remove(worst);
        let mid = (lo + hi) * T::lit(0.5);
        let (v1, e1) = gk15(&f, lo, mid);
        let (v2, e2) = gk15(&f, mid, hi);
        intervals.push((lo, mid, v1, e1));
        intervals.push((mid, hi, v2, e2));
    }
}

/// Alternating area sums for `n_blades` equiangular lines through `apex`.
///
/// The lines are at `alpha + kπ/n_blades`, cutting the disc into
/// `2·n_blades` sectors; returns (sum over even-indexed sectors, sum over
/// odd-indexed sectors).
pub fn pizza_check<T: Scalar>(apex: Point2<T>, n_blades: usize, alpha: T) -> Result<(T, T)> {
    if n_blades < 4 || !n_blades.is_multiple_of(2) {
        return Err(Error::Invalid(format!(
            "pizza check needs an even number of blades >= 4, got {n_blades}"
        )));
    }
    apex.check_interior()?;
    let step = T::PI() / T::from_usize(n_blades).expect("small integer");
    let mut sums = (T::zero(), T::zero());
    for k in 0..2 * n_blades {
        let start = alpha + step * T::from_usize(k).expect("small integer");
        let area = sector_area_decomposed(&EccentricSector::from_sweep(
            apex,
            start,
            step,
            Orientation::Counterclockwise,
        )?)?;
        if k % 2 == 0 {
            sums.0 += area;
        } else {
            sums.1 += area;
        }
    }
    Ok(sums)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_PI_2, PI};

    fn p(x: f64, y: f64) -> Point2<f64> {
        Point2::new(x, y)
    }

    #[test]
    fn triangle_examples() {
        assert_eq!(triangle_area(p(0.0, 0.0), p(1.0, 0.0), p(0.0, 1.0)), 0.5);
        assert_eq!(triangle_area(p(0.0, 0.0), p(1.0, 0.0), p(2.0, 0.0)), 0.0);
        assert_eq!(signed_triangle_area(p(0.0, 0.0), p(1.0, 0.0), p(0.0, 1.0)), 0.5);
        assert_eq!(signed_triangle_area(p(0.0, 0.0), p(0.0, 1.0), p(1.0, 0.0)), -0.5);
    }

    #[test]
    fn central_angle_examples() {
        let a = central_angle(p(1.0, 0.0), p(0.0, 1.0)).unwrap();
        assert!((a - FRAC_PI_2).abs() < 1e-15);
        assert_eq!(central_angle(p(1.0, 0.0), p(1.0, 0.0)).unwrap(), 0.0);
        assert!(matches!(
            central_angle(p(1.1, 0.0), p(0.0, 1.0)),
            Err(Error::NotOnCircle { .. })
        ));
    }

    #[test]
    fn segment_examples() {
        assert!((segment_area(PI).unwrap() - FRAC_PI_2).abs() < 1e-15);
        assert!(segment_area(1e-6).unwrap() < 1e-18);
        assert!((segment_area(FRAC_PI_2).unwrap() - (FRAC_PI_2 - 1.0) / 2.0).abs() < 1e-15);
        assert!(segment_area(0.0).is_err());
        assert!(segment_area(2.0 * PI).is_err());
        assert!(segment_area(-1.0).is_err());
    }

    #[test]
    fn ray_extent_examples() {
        for phi in [0.0, 1.0, 2.5, -3.0] {
            assert!((ray_extent(p(0.0, 0.0), phi).unwrap() - 1.0).abs() < 1e-15);
        }
        assert!((ray_extent(p(0.5, 0.0), 0.0).unwrap() - 0.5).abs() < 1e-15);
        assert!((ray_extent(p(0.5, 0.0), FRAC_PI_2).unwrap() - 0.75f64.sqrt()).abs() < 1e-15);
        assert!(ray_extent(p(1.0, 0.0), 0.0).is_err());
        assert!(ray_extent(p(0.8, 0.8), 0.0).is_err());
        let b = boundary_point(p(0.3, -0.7), 2.2).unwrap();
        assert!((b.norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn concentric_sector_is_half_sweep() {
        for sweep in [0.1, 1.0, PI, 4.0, 6.2] {
            let s = EccentricSector::from_sweep(p(0.0, 0.0), 0.3, sweep, Orientation::Counterclockwise)
                .unwrap();
            assert!((sector_area_decomposed(&s).unwrap() - sweep / 2.0).abs() < 1e-13);
            assert!((sector_area_integral(&s).unwrap() - sweep / 2.0).abs() < 1e-11);
        }
    }

    #[test]
    fn full_sweep_is_whole_disc() {
        let s = EccentricSector::from_sweep(p(0.6, -0.3), 1.0, 2.0 * PI, Orientation::Clockwise).unwrap();
        assert!(s.is_full_disc());
        assert!((sector_area_integral(&s).unwrap() - PI).abs() < 1e-11);
        assert_eq!(sector_area_decomposed(&s).unwrap(), PI);
    }

    #[test]
    fn integral_of_fifth_disc() {
        let s = EccentricSector::from_sweep(p(0.0, 0.0), 0.0, 2.0 * PI / 5.0, Orientation::Counterclockwise)
            .unwrap();
        assert!((sector_area_integral(&s).unwrap() - PI / 5.0).abs() < 1e-12);
    }

    #[test]
    fn decomposed_matches_integral_off_center() {
        let s = EccentricSector::from_sweep(p(0.5, 0.5), 0.0, PI / 3.0, Orientation::Counterclockwise)
            .unwrap();
        let d = sector_area_decomposed(&s).unwrap();
        let q = sector_area_integral(&s).unwrap();
        assert!((d - q).abs() < 1e-10, "{d} vs {q}");
    }

    #[test]
    fn clockwise_is_same_region_as_reversed_ccw() {
        let apex = p(-0.4, 0.25);
        let cw = EccentricSector::new(apex, 2.0, 0.5, Orientation::Clockwise).unwrap();
        let ccw = EccentricSector::new(apex, 0.5, 2.0, Orientation::Counterclockwise).unwrap();
        let a = sector_area_decomposed(&cw).unwrap();
        let b = sector_area_decomposed(&ccw).unwrap();
        assert!((a - b).abs() < 1e-15);
    }

    #[test]
    fn degenerate_sector_rejected() {
        assert!(EccentricSector::new(p(0.1, 0.1), 1.0, 1.0, Orientation::Counterclockwise).is_err());
        assert!(EccentricSector::new(p(1.0, 0.1), 1.0, 2.0, Orientation::Counterclockwise).is_err());
    }

    #[test]
    fn pizza_examples() {
        let (a, b) = pizza_check(p(0.0, 0.0), 4, 0.0).unwrap();
        assert!((a - FRAC_PI_2).abs() < 1e-14 && (b - FRAC_PI_2).abs() < 1e-14);
        let (a, b) = pizza_check(p(0.3, -0.2), 4, 0.7).unwrap();
        assert!((a - FRAC_PI_2).abs() < 1e-10 && (b - FRAC_PI_2).abs() < 1e-10);
        let (a, b) = pizza_check(p(0.9, 0.0), 8, 1.1).unwrap();
        assert!((a - FRAC_PI_2).abs() < 1e-10 && (b - FRAC_PI_2).abs() < 1e-10);
        assert!(pizza_check(p(0.0, 0.0), 5, 0.0).is_err());
        assert!(pizza_check(p(0.0, 0.0), 2, 0.0).is_err());
    }

    #[test]
    fn works_in_single_precision() {
        let s = EccentricSector::from_sweep(
            Point2::new(0.3f32, -0.2),
            0.4,
            1.3,
            Orientation::Counterclockwise,
        )
        .unwrap();
        let d = sector_area_decomposed(&s).unwrap();
        let q = sector_area_integral(&s).unwrap();
        assert!((d - q).abs() < 1e-5);
    }
}
