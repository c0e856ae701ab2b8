//! Geometry of the Busch ellipsoid.
//!
//! For a fixed unbiased effect vector `a`, the partners `b` that are jointly
//! measurable with it form the solid ellipsoid `{b : |b − a| + |b + a| ≤ 2}`:
//! foci `±a`, semi-major axis 1 along `a`, semi-minor axis `√(1 − |a|²)`. It is
//! a solid of revolution, so every query reduces to the half-plane spanned by
//! `a` and the query point.

use crate::algebra::BlochVector;

/// `|a − b| + |a + b|`; the pair is compatible iff this is at most 2.
pub fn busch_sum(a: BlochVector, b: BlochVector) -> f64 {
    (a - b).norm() + (a + b).norm()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Projection {
    pub point: BlochVector,
    pub distance: f64,
}

/// Ellipsoid of partners compatible with the effect vector `a` (`|a| ≤ 1`).
#[derive(Debug, Clone, Copy)]
pub struct BuschEllipsoid {
    center_focus: BlochVector,
    axis: Option<BlochVector>,
    minor: f64,
}

impl BuschEllipsoid {
    pub fn new(a: BlochVector) -> Self {
        let n = a.norm();
        Self {
            center_focus: a,
            axis: a.normalized(),
            minor: (1.0 - n * n).max(0.0).sqrt(),
        }
    }

    pub fn minor_semi_axis(&self) -> f64 {
        self.minor
    }

    pub fn contains(&self, b: BlochVector) -> bool {
        busch_sum(self.center_focus, b) <= 2.0
    }

    /// Support function `max_{b ∈ E} b·d`.
    pub fn support(&self, d: BlochVector) -> f64 {
        match self.axis {
            None => d.norm(),
            Some(axis) => {
                let u = d.dot(axis);
                let v_sq = (d.norm_sq() - u * u).max(0.0);
                (u * u + self.minor * self.minor * v_sq).sqrt()
            }
        }
    }

    /// A point of the ellipsoid attaining [`Self::support`] in direction `d`.
    pub fn support_point(&self, d: BlochVector) -> BlochVector {
        let h = self.support(d);
        if h == 0.0 {
            return BlochVector::ZERO;
        }
        match self.axis {
            None => d * (1.0 / h),
            Some(axis) => {
                let u = d.dot(axis);
                let w = d - axis * u;
                (axis * u + w * (self.minor * self.minor)) * (1.0 / h)
            }
        }
    }

    /// Closest point of the solid ellipsoid to `x`, and the distance to it.
    pub fn project(&self, x: BlochVector) -> Projection {
        if self.contains(x) {
            return Projection {
                point: x,
                distance: 0.0,
            };
        }
        let Some(axis) = self.axis else {
            // a = 0: the unit ball
            let n = x.norm();
            return Projection {
                point: x * (1.0 / n),
                distance: n - 1.0,
            };
        };
        let u = x.dot(axis);
        let w = x - axis * u;
        let v = w.norm();
        let side = w.normalized().unwrap_or(BlochVector::ZERO);

        let (x0, x1) = if self.minor == 0.0 {
            // |a| = 1: the segment [−a, a]
            (u.abs().min(1.0), 0.0)
        } else {
            project_onto_ellipse(1.0, self.minor, u.abs(), v)
        };
        let point = axis * x0.copysign(u) + side * x1;
        Projection {
            point,
            distance: (u.abs() - x0).hypot(v - x1),
        }
    }
}

/// Closest point on the ellipse `(x/e0)² + (y/e1)² = 1` (`e0 ≥ e1 > 0`) to an
/// exterior first-quadrant point `(y0, y1)`.
///
/// The closest point is `(e0² y0/(t + e0²), e1² y1/(t + e1²))` where the
/// Lagrange parameter `t ≥ 0` is the root of a decreasing function, found by
/// bisection on `[0, e0·|y|]`.
fn project_onto_ellipse(e0: f64, e1: f64, y0: f64, y1: f64) -> (f64, f64) {
    let (a0, a1) = (e0 * e0, e1 * e1);
    let residual = |t: f64| {
        let r0 = e0 * y0 / (t + a0);
        let r1 = e1 * y1 / (t + a1);
        r0 * r0 + r1 * r1 - 1.0
    };
    let mut lo = 0.0;
    let mut hi = e0 * y0.hypot(y1);
    if residual(lo) <= 0.0 {
        hi = lo;
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if residual(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let t = 0.5 * (lo + hi);
    (a0 * y0 / (t + a0), a1 * y1 / (t + a1))
}
