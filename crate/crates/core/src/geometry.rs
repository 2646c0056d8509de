//! Minimal 2-D/3-D point arithmetic used by the deployment and blockage
//! geometry. Nothing here is band- or model-specific.

use serde::{Deserialize, Serialize};

use crate::scalar::Real;

/// Point (or vector) in the horizontal plane, meters.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Point2<F> {
    pub x: F,
    pub y: F,
}

/// Point in 3-D space, meters.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Point3<F> {
    pub x: F,
    pub y: F,
    pub z: F,
}

impl<F: Real> std::ops::Add for Point2<F> {
    type Output = Self;
    fn add(self, other: Self) -> Self {
        Self::new(self.x + other.x, self.y + other.y)
    }
}

impl<F: Real> std::ops::Sub for Point2<F> {
    type Output = Self;
    fn sub(self, other: Self) -> Self {
        Self::new(self.x - other.x, self.y - other.y)
    }
}

impl<F: Real> Point2<F> {
    pub fn new(x: F, y: F) -> Self {
        Self { x, y }
    }

    pub fn scale(self, s: F) -> Self {
        Self::new(self.x * s, self.y * s)
    }

    pub fn dot(self, other: Self) -> F {
        self.x * other.x + self.y * other.y
    }

    pub fn norm(self) -> F {
        (self.x * self.x + self.y * self.y).sqrt()
    }

    pub fn distance(self, other: Self) -> F {
        (self - other).norm()
    }

    /// Counter-clockwise perpendicular.
    pub fn perp(self) -> Self {
        Self::new(-self.y, self.x)
    }
}

impl<F: Real> Point3<F> {
    pub fn new(x: F, y: F, z: F) -> Self {
        Self { x, y, z }
    }

    pub fn xy(self) -> Point2<F> {
        Point2::new(self.x, self.y)
    }

    pub fn distance(self, other: Self) -> F {
        let dx = self.x - other.x;
        let dy = self.y - other.y;
        let dz = self.z - other.z;
        (dx * dx + dy * dy + dz * dz).sqrt()
    }
}

/// Distance from a point to a 2-D segment `[a, b]`.
pub fn point_segment_distance<F: Real>(p: Point2<F>, a: Point2<F>, b: Point2<F>) -> F {
    let ab = b - a;
    let len2 = ab.dot(ab);
    if len2 == F::zero() {
        return p.distance(a);
    }
    let t = (p - a).dot(ab) / len2;
    let t = t.max(F::zero()).min(F::one());
    p.distance(a + ab.scale(t))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn segment_distance_endpoints_and_interior() {
        let a = Point2::new(0.0, 0.0);
        let b = Point2::new(10.0, 0.0);
        assert_eq!(point_segment_distance(Point2::new(-3.0, 0.0), a, b), 3.0);
        assert_eq!(point_segment_distance(Point2::new(5.0, 4.0), a, b), 4.0);
        assert_eq!(point_segment_distance(Point2::new(13.0, 4.0), a, b), 5.0);
    }

    #[test]
    fn point3_distance() {
        let p = Point3::new(1.0f64, 2.0, 3.0);
        let q = Point3::new(4.0, 6.0, 3.0);
        assert_eq!(p.distance(q), 5.0);
    }
}
