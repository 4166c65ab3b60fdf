//! Signed-distance geometry of the interface midplane and closest point
//! projection onto it.
//!
//! Two benchmark geometries are supported: a planar interface at `x = 0`
//! (gas on the positive side) and a 2D "fixed melt pool" surface consisting
//! of a semicircular depression of center radius `r`, raised bead fillets of
//! radius `b`, and flat surface lines at height `y = b`. The signed distance
//! is negative in the gas phase, positive in the liquid phase, and zero on
//! the midplane.

use crate::error::{CsfError, Result};

use serde::{Deserialize, Serialize};

/// A point (or vector) in the plane. 1D problems use the x component.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Point2 {
    pub x: f64,
    pub y: f64,
}

impl Point2 {
    pub const fn new(x: f64, y: f64) -> Self {
        Point2 { x, y }
    }

    pub fn norm(self) -> f64 {
        self.x.hypot(self.y)
    }

    pub fn dot(self, other: Point2) -> f64 {
        self.x * other.x + self.y * other.y
    }

    pub fn sub(self, other: Point2) -> Point2 {
        Point2::new(self.x - other.x, self.y - other.y)
    }

    pub fn add(self, other: Point2) -> Point2 {
        Point2::new(self.x + other.x, self.y + other.y)
    }

    pub fn scale(self, s: f64) -> Point2 {
        Point2::new(s * self.x, s * self.y)
    }

    pub fn distance(self, other: Point2) -> f64 {
        self.sub(other).norm()
    }
}

/// Diffuse interface parameters: the band has thickness `eps` centered on
/// the midplane, i.e. support `|d| <= eps/2`.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct DiffuseInterfaceParams {
    eps: f64,
}

impl DiffuseInterfaceParams {
    pub fn new(eps: f64) -> Result<Self> {
        if !eps.is_finite() || eps <= 0.0 {
            return Err(CsfError::invalid(format!(
                "interface thickness must be positive and finite, got {eps}"
            )));
        }
        Ok(DiffuseInterfaceParams { eps })
    }

    pub fn eps(&self) -> f64 {
        self.eps
    }

    /// True if `d` lies inside the diffuse band.
    pub fn in_band(&self, d: f64) -> bool {
        d.abs() <= 0.5 * self.eps
    }
}

/// Interface midplane geometry for the supported benchmark setups.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub enum InterfaceGeometry {
    /// Planar interface at x = 0, metal (liquid) at x < 0, gas at x > 0;
    /// the signed distance is d = -x.
    Planar1d,
    /// Concave semicircular melt pool depression with rounded bead edges.
    MeltPool2d {
        /// Center radius r of the depression arc [m].
        center_radius: f64,
        /// Bead (fillet) radius b [m].
        bead_radius: f64,
        /// Domain half-width a [m], used only to validate r + b < a.
        half_width: f64,
    },
}

/// Projection result: the closest point on the midplane and the unit normal
/// there, pointing into the liquid phase.
#[derive(Debug, Clone, Copy)]
pub struct Projection {
    pub point: Point2,
    pub normal_into_liquid: Point2,
}

impl InterfaceGeometry {
    pub fn melt_pool(center_radius: f64, bead_radius: f64, half_width: f64) -> Result<Self> {
        if !(center_radius > 0.0 && bead_radius > 0.0 && half_width > 0.0) {
            return Err(CsfError::invalid(
                "melt pool radii and half-width must be positive",
            ));
        }
        if center_radius + bead_radius >= half_width {
            return Err(CsfError::invalid(format!(
                "melt pool requires r + b < a, got r={center_radius}, b={bead_radius}, a={half_width}"
            )));
        }
        Ok(InterfaceGeometry::MeltPool2d {
            center_radius,
            bead_radius,
            half_width,
        })
    }

    /// Signed distance to the interface midplane, negative in gas and
    /// positive in liquid.
    pub fn signed_distance(&self, p: Point2) -> f64 {
        match *self {
            InterfaceGeometry::Planar1d => -p.x,
            InterfaceGeometry::MeltPool2d {
                center_radius: r,
                bead_radius: b,
                ..
            } => {
                let ax = p.x.abs();
                if ax < r + b {
                    if p.y < 0.0 {
                        p.norm() - r
                    } else {
                        b - ((r + b - ax).hypot(p.y))
                    }
                } else if p.y < 0.0 {
                    (p.norm() - r).min(b - p.y)
                } else {
                    b - p.y
                }
            }
        }
    }

    /// Closest point projection onto the interface midplane.
    ///
    /// Candidate projections onto every geometric piece of the midplane are
    /// evaluated and the closest retained; ties keep the earliest piece in a
    /// fixed order (depression arc, surface lines, bead fillets), so the
    /// result is deterministic even at equidistant junctions.
    pub fn closest_point(&self, p: Point2) -> Projection {
        match *self {
            InterfaceGeometry::Planar1d => Projection {
                point: Point2::new(0.0, p.y),
                normal_into_liquid: Point2::new(-1.0, 0.0),
            },
            InterfaceGeometry::MeltPool2d {
                center_radius: r,
                bead_radius: b,
                ..
            } => {
                let c_right = Point2::new(r + b, 0.0);
                let c_left = Point2::new(-(r + b), 0.0);
                // Depression arc: lower half-circle of radius r about the origin.
                let arc = project_to_arc(p, Point2::new(0.0, 0.0), r, -std::f64::consts::PI, 0.0);
                // Flat surface lines at y = b, |x| >= r + b.
                let plane_left = Point2::new(p.x.min(-(r + b)), b);
                let plane_right = Point2::new(p.x.max(r + b), b);
                // Bead fillets: quarter arcs joining surface lines to the arc.
                let fillet_left = project_to_arc(p, c_left, b, 0.0, std::f64::consts::FRAC_PI_2);
                let fillet_right = project_to_arc(
                    p,
                    c_right,
                    b,
                    std::f64::consts::FRAC_PI_2,
                    std::f64::consts::PI,
                );

                let candidates = [
                    (arc, NormalKind::Radial { center: Point2::new(0.0, 0.0) }),
                    (plane_left, NormalKind::Down),
                    (plane_right, NormalKind::Down),
                    (fillet_left, NormalKind::ToCenter { center: c_left }),
                    (fillet_right, NormalKind::ToCenter { center: c_right }),
                ];

                let mut best = candidates[0];
                let mut best_dist = p.distance(candidates[0].0);
                for &cand in &candidates[1..] {
                    let dist = p.distance(cand.0);
                    if dist < best_dist {
                        best = cand;
                        best_dist = dist;
                    }
                }
                let (point, kind) = best;
                Projection {
                    point,
                    normal_into_liquid: kind.normal_at(point),
                }
            }
        }
    }
}

#[derive(Debug, Clone, Copy)]
enum NormalKind {
    /// Outward radial normal of the depression arc (liquid outside).
    Radial { center: Point2 },
    /// Flat surface line, liquid underneath.
    Down,
    /// Bead fillet, liquid inside the bead circle.
    ToCenter { center: Point2 },
}

impl NormalKind {
    fn normal_at(self, q: Point2) -> Point2 {
        match self {
            NormalKind::Radial { center } => {
                let v = q.sub(center);
                let n = v.norm();
                if n == 0.0 {
                    Point2::new(0.0, -1.0)
                } else {
                    v.scale(1.0 / n)
                }
            }
            NormalKind::Down => Point2::new(0.0, -1.0),
            NormalKind::ToCenter { center } => {
                let v = center.sub(q);
                let n = v.norm();
                if n == 0.0 {
                    Point2::new(0.0, -1.0)
                } else {
                    v.scale(1.0 / n)
                }
            }
        }
    }
}

/// Project `p` onto the arc of radius `radius` about `center` spanned by
/// angles [th_min, th_max] (atan2 convention). Out-of-range projections are
/// clamped to the nearer endpoint; the degenerate case `p == center` lands
/// on the `th_min` endpoint.
fn project_to_arc(p: Point2, center: Point2, radius: f64, th_min: f64, th_max: f64) -> Point2 {
    let v = p.sub(center);
    let at = |th: f64| center.add(Point2::new(radius * th.cos(), radius * th.sin()));
    if v.norm() == 0.0 {
        return at(th_min);
    }
    let th = v.y.atan2(v.x);
    if th >= th_min && th <= th_max {
        return center.add(v.scale(radius / v.norm()));
    }
    let start = at(th_min);
    let end = at(th_max);
    if p.distance(start) <= p.distance(end) {
        start
    } else {
        end
    }
}
