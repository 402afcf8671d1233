//! Deduplication, real/complex classification and false-root filtering of
//! homotopy endpoints.

use std::cmp::Ordering;
use std::fmt;

use num_complex::Complex;
use serde::{Serialize, Serializer};

use super::homotopy::{PathResult, PathStatus};
use crate::geometry::Orientation;
use crate::polysys::PolySystem;
use crate::Scalar;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum RootClass {
    Complex,
    RealRejected,
    RealAccepted,
}

/// Why a root was rejected.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum RejectReason {
    NotReal,
    /// Box constraint on the named variable violated (`box_x0`, ...).
    Box(String),
    /// An area equation holds only with the opposite sign of the absolute
    /// value that squaring removed.
    AbsSign,
    /// A 120° equation holds only with the opposite sign of the square root
    /// that squaring removed.
    SqrtSign,
    /// Sine variable does not match the sine of its angle (typically the
    /// `s ≈ −sin` branch).
    SinMismatch,
    /// Reconstructed sector areas miss their targets.
    Geometric,
}

impl RejectReason {
    pub fn tag(&self) -> String {
        match self {
            Self::NotReal => "not_real".into(),
            Self::Box(v) => format!("box_{v}"),
            Self::AbsSign => "abs_sign".into(),
            Self::SqrtSign => "sqrt_sign".into(),
            Self::SinMismatch => "sin_mismatch".into(),
            Self::Geometric => "geometric".into(),
        }
    }
}

impl fmt::Display for RejectReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.tag())
    }
}

impl Serialize for RejectReason {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.tag())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Root<T> {
    pub point: Vec<Complex<T>>,
    pub classification: RootClass,
    pub rejection_reasons: Vec<RejectReason>,
    /// Paths that ended at this root.
    pub multiplicity: usize,
    /// Orientation of the reconstructed sectors, for accepted roots.
    pub orientation: Option<Orientation>,
}

impl<T: Scalar> Root<T> {
    pub fn real_point(&self) -> Vec<T> {
        self.point.iter().map(|z| z.re).collect()
    }

    pub fn is_accepted(&self) -> bool {
        self.classification == RootClass::RealAccepted
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct PathStats {
    pub total: usize,
    pub converged: usize,
    pub diverged: usize,
    pub truncated: usize,
    pub singular: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RootSet<T> {
    pub var_names: Vec<String>,
    pub roots: Vec<Root<T>>,
    pub paths: PathStats,
    pub warnings: Vec<String>,
}

fn lex_cmp<T: Scalar>(a: &[Complex<T>], b: &[Complex<T>]) -> Ordering {
    a.iter()
        .map(|z| z.re)
        .chain(a.iter().map(|z| z.im))
        .zip(b.iter().map(|z| z.re).chain(b.iter().map(|z| z.im)))
        .map(|(x, y)| x.partial_cmp(&y).unwrap_or(Ordering::Equal))
        .find(|o| *o != Ordering::Equal)
        .unwrap_or(Ordering::Equal)
}

fn dist<T: Scalar>(a: &[Complex<T>], b: &[Complex<T>]) -> T {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).norm())
        .fold(T::zero(), T::max)
}

impl<T: Scalar> RootSet<T> {
    /// Collects converged endpoints, merges those within `dedup_tol` and
    /// classifies roots with every imaginary part below `real_tol` as real
    /// (their imaginary parts are then zeroed). The result does not depend
    /// on the order of `paths`.
    pub fn from_paths(
        var_names: Vec<String>,
        paths: &[PathResult<T>],
        dedup_tol: T,
        real_tol: T,
    ) -> Self {
        let mut stats = PathStats {
            total: paths.len(),
            ..PathStats::default()
        };
        let mut ends: Vec<&[Complex<T>]> = Vec::new();
        for p in paths {
            match p.status {
                PathStatus::Converged => {
                    stats.converged += 1;
                    ends.push(&p.endpoint);
                }
                PathStatus::Diverged => stats.diverged += 1,
                PathStatus::Truncated => stats.truncated += 1,
                PathStatus::Singular => stats.singular += 1,
            }
        }
        ends.sort_by(|a, b| lex_cmp(a, b));

        let mut clusters: Vec<(Vec<Complex<T>>, usize)> = Vec::new();
        for e in ends {
            match clusters.iter_mut().find(|(rep, _)| dist(rep, e) < dedup_tol) {
                Some(c) => c.1 += 1,
                None => clusters.push((e.to_vec(), 1)),
            }
        }

        let roots = clusters
            .into_iter()
            .map(|(mut point, multiplicity)| {
                let real = point.iter().all(|z| z.im.abs() < real_tol);
                if real {
                    for z in &mut point {
                        z.im = T::zero();
                    }
                }
                Root {
                    point,
                    classification: if real { RootClass::RealAccepted } else { RootClass::Complex },
                    rejection_reasons: if real { vec![] } else { vec![RejectReason::NotReal] },
                    multiplicity,
                    orientation: None,
                }
            })
            .collect();
        Self {
            var_names,
            roots,
            paths: stats,
            warnings: Vec::new(),
        }
    }

    pub fn accepted(&self) -> impl Iterator<Item = &Root<T>> {
        self.roots.iter().filter(|r| r.is_accepted())
    }

    pub fn real(&self) -> impl Iterator<Item = &Root<T>> {
        self.roots.iter().filter(|r| r.classification != RootClass::Complex)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FilterTolerances<T> {
    /// Unsquared area / angle equations and sine consistency.
    pub algebraic: T,
    /// Sector areas reconstructed from a root versus `share·π`.
    pub geometric: T,
    /// Slack on non-strict box constraints.
    pub box_slack: T,
}

impl<T: Scalar> Default for FilterTolerances<T> {
    fn default() -> Self {
        Self {
            algebraic: T::lit(0.05),
            geometric: T::lit(0.02),
            box_slack: T::tol(1e-9),
        }
    }
}

/// Rejection reasons for a real point; the orientation of its sectors when
/// it survives.
pub fn check_real_root<T: Scalar>(
    sys: &PolySystem<T>,
    x: &[T],
    tol: &FilterTolerances<T>,
) -> (Vec<RejectReason>, Option<Orientation>) {
    let Some(model) = sys.exact() else {
        return (vec![], None);
    };
    let spec = model.filter_spec();
    let mut reasons = Vec::new();

    for b in &spec.boxes {
        let v = x[b.var].abs();
        let bound = T::lit(b.bound);
        let ok = if b.strict { v < bound } else { v <= bound + tol.box_slack };
        if !ok {
            reasons.push(RejectReason::Box(sys.var_names()[b.var].clone()));
        }
    }
    if model
        .area_sides(x)
        .iter()
        .any(|&(lhs, abs_det)| !((lhs - abs_det).abs() <= tol.algebraic))
    {
        reasons.push(RejectReason::AbsSign);
    }
    if model
        .angle_sides(x)
        .iter()
        .any(|&(dot, rhs)| !(dot < T::zero() && (dot - rhs).abs() <= tol.algebraic))
    {
        reasons.push(RejectReason::SqrtSign);
    }
    if spec
        .sin_pairs
        .iter()
        .any(|&(a, s)| !((x[s] - x[a].sin()).abs() < tol.algebraic))
    {
        reasons.push(RejectReason::SinMismatch);
    }
    let orientation = match model.geometric_orientation(x, tol.geometric) {
        Ok(o) => Some(o),
        Err(_) => {
            reasons.push(RejectReason::Geometric);
            None
        }
    };
    let orientation = if reasons.is_empty() { orientation } else { None };
    (reasons, orientation)
}

/// Applies, in order: realness, box constraints, unsquared area equations,
/// unsquared 120° equations, sine consistency and geometric validation.
/// Systems without an exact companion are filtered on realness only.
pub fn filter_roots<T: Scalar>(sys: &PolySystem<T>, roots: RootSet<T>, tol: &FilterTolerances<T>) -> RootSet<T> {
    let mut out = roots;
    for root in &mut out.roots {
        if root.classification == RootClass::Complex {
            continue;
        }
        let (reasons, orientation) = check_real_root(sys, &root.real_point(), tol);
        root.classification = if reasons.is_empty() {
            RootClass::RealAccepted
        } else {
            RootClass::RealRejected
        };
        root.rejection_reasons = reasons;
        root.orientation = orientation;
    }
    if let (Some(model), Some(taylor)) = (sys.exact(), sys.taylor()) {
        let (lo, hi) = taylor.validity_window();
        let outside = out
            .accepted()
            .flat_map(|r| model.cosine_arguments(&r.real_point()))
            .filter(|&c| !taylor.in_window(c))
            .count();
        if outside > 0 {
            out.warnings.push(format!(
                "{outside} accepted cosine argument(s) outside [{lo}, {hi}] where the arccos expansion is trusted; consider recentering it"
            ));
        }
    }
    out
}
