//! Planar points, obstacle shapes and closed-set segment intersection tests.

use core::ops::{Add, Mul, Sub};

/// Slack on determinant / distance comparisons.
pub const GEOM_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Point2 {
    pub x: f64,
    pub y: f64,
}

impl Point2 {
    pub const fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    pub fn norm(self) -> f64 {
        libm::hypot(self.x, self.y)
    }

    pub fn dot(self, other: Point2) -> f64 {
        self.x * other.x + self.y * other.y
    }

    pub fn distance(self, other: Point2) -> f64 {
        (self - other).norm()
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }

    /// Linear interpolation, `s = 0` at `self` and `s = 1` at `other`.
    pub fn lerp(self, other: Point2, s: f64) -> Point2 {
        self + (other - self) * s
    }
}

impl Add for Point2 {
    type Output = Point2;
    fn add(self, rhs: Point2) -> Point2 {
        Point2::new(self.x + rhs.x, self.y + rhs.y)
    }
}

impl Sub for Point2 {
    type Output = Point2;
    fn sub(self, rhs: Point2) -> Point2 {
        Point2::new(self.x - rhs.x, self.y - rhs.y)
    }
}

impl Mul<f64> for Point2 {
    type Output = Point2;
    fn mul(self, rhs: f64) -> Point2 {
        Point2::new(self.x * rhs, self.y * rhs)
    }
}

/// Axis-aligned rectangle, closed.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Rect {
    pub min: Point2,
    pub max: Point2,
}

impl Rect {
    pub const fn new(min: Point2, max: Point2) -> Self {
        Self { min, max }
    }

    pub fn width(&self) -> f64 {
        self.max.x - self.min.x
    }

    pub fn height(&self) -> f64 {
        self.max.y - self.min.y
    }

    pub fn center(&self) -> Point2 {
        self.min.lerp(self.max, 0.5)
    }

    pub fn contains(&self, p: Point2) -> bool {
        p.x >= self.min.x && p.x <= self.max.x && p.y >= self.min.y && p.y <= self.max.y
    }

    pub fn contains_rect(&self, other: &Rect) -> bool {
        self.contains(other.min) && self.contains(other.max)
    }

    /// Closest point of the rectangle to `p`; `p` itself when inside.
    pub fn closest_point(&self, p: Point2) -> Point2 {
        Point2::new(p.x.clamp(self.min.x, self.max.x), p.y.clamp(self.min.y, self.max.y))
    }

    /// Liang-Barsky clipping against the closed box.
    pub fn intersects_segment(&self, p: Point2, q: Point2) -> bool {
        let d = q - p;
        let mut t_lo = 0.0_f64;
        let mut t_hi = 1.0_f64;
        for (start, delta, lo, hi) in [
            (p.x, d.x, self.min.x, self.max.x),
            (p.y, d.y, self.min.y, self.max.y),
        ] {
            if libm::fabs(delta) <= GEOM_TOL {
                if start < lo - GEOM_TOL || start > hi + GEOM_TOL {
                    return false;
                }
                continue;
            }
            let mut a = (lo - start) / delta;
            let mut b = (hi - start) / delta;
            if a > b {
                core::mem::swap(&mut a, &mut b);
            }
            t_lo = t_lo.max(a);
            t_hi = t_hi.min(b);
            if t_lo > t_hi + GEOM_TOL {
                return false;
            }
        }
        true
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Circle {
    pub center: Point2,
    pub radius: f64,
}

impl Circle {
    pub const fn new(center: Point2, radius: f64) -> Self {
        Self { center, radius }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Obstacle {
    Rect(Rect),
    Circle(Circle),
}

impl Obstacle {
    pub fn contains(&self, p: Point2) -> bool {
        match self {
            Obstacle::Rect(r) => r.contains(p),
            Obstacle::Circle(c) => p.distance(c.center) <= c.radius,
        }
    }

    /// Bounding box of the shape.
    pub fn bounding_box(&self) -> Rect {
        match self {
            Obstacle::Rect(r) => *r,
            Obstacle::Circle(c) => Rect::new(
                Point2::new(c.center.x - c.radius, c.center.y - c.radius),
                Point2::new(c.center.x + c.radius, c.center.y + c.radius),
            ),
        }
    }

    /// Distance from `p` to the shape and the closest boundary-or-interior
    /// point. Zero inside.
    pub fn distance_and_closest(&self, p: Point2) -> (f64, Point2) {
        match self {
            Obstacle::Rect(r) => {
                let c = r.closest_point(p);
                (p.distance(c), c)
            }
            Obstacle::Circle(c) => {
                let off = p - c.center;
                let d = off.norm();
                if d <= c.radius {
                    (0.0, p)
                } else {
                    (d - c.radius, c.center + off * (c.radius / d))
                }
            }
        }
    }
}

/// True iff the closed segment `pq` meets the closed shape.
pub fn segment_obstacle_intersect(p: Point2, q: Point2, obstacle: &Obstacle) -> bool {
    match obstacle {
        Obstacle::Rect(r) => r.intersects_segment(p, q),
        Obstacle::Circle(c) => point_segment_distance(c.center, p, q) <= c.radius + GEOM_TOL,
    }
}

pub fn point_segment_distance(x: Point2, p: Point2, q: Point2) -> f64 {
    let d = q - p;
    let len2 = d.dot(d);
    if len2 <= GEOM_TOL * GEOM_TOL {
        return x.distance(p);
    }
    let s = ((x - p).dot(d) / len2).clamp(0.0, 1.0);
    x.distance(p + d * s)
}
