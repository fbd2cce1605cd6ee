//! Planar points and the closed-segment intersection predicate used by the
//! chain builder.

use serde::{Deserialize, Serialize};

use crate::error::{Result, SimError};

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub const fn new(x: f64, y: f64) -> Self {
        Point { x, y }
    }

    pub fn dist(self, other: Point) -> f64 {
        (self.x - other.x).hypot(self.y - other.y)
    }

    /// Polar angle of `self` seen from `origin`, normalized to [0, 2π).
    pub fn angle_from(self, origin: Point) -> f64 {
        let a = (self.y - origin.y).atan2(self.x - origin.x);
        if a < 0.0 {
            let wrapped = a + std::f64::consts::TAU;
            // -ε + 2π can round up to exactly 2π
            if wrapped >= std::f64::consts::TAU {
                0.0
            } else {
                wrapped
            }
        } else {
            a
        }
    }
}

/// Sign of the cross product (b - a) × (c - a).
fn orient(a: Point, b: Point, c: Point) -> i8 {
    let v = (b.x - a.x) * (c.y - a.y) - (b.y - a.y) * (c.x - a.x);
    if v > 0.0 {
        1
    } else if v < 0.0 {
        -1
    } else {
        0
    }
}

/// For collinear `a`, `b`, `c`: is `c` within the bounding box of `ab`.
fn within(a: Point, b: Point, c: Point) -> bool {
    c.x >= a.x.min(b.x) && c.x <= a.x.max(b.x) && c.y >= a.y.min(b.y) && c.y <= a.y.max(b.y)
}

/// Whether closed segments `p1p2` and `q1q2` share a point other than a
/// common endpoint.
///
/// Two segments meeting only at an endpoint they both own (a junction) do not
/// intersect. A T-contact, where one segment's endpoint lies in the other's
/// interior, does. Collinear segments that share an endpoint and then overlap
/// also do.
pub fn segments_intersect(p1: Point, p2: Point, q1: Point, q2: Point) -> Result<bool> {
    if p1 == p2 || q1 == q2 {
        return Err(SimError::InvalidGeometry(format!(
            "degenerate segment ({p1:?}-{p2:?} vs {q1:?}-{q2:?})"
        )));
    }

    let shared = [(p1, p2, q1, q2), (p1, p2, q2, q1), (p2, p1, q1, q2), (p2, p1, q2, q1)]
        .into_iter()
        .find(|(s, _, t, _)| s == t);
    if let Some((s, a, _, b)) = shared {
        if a == b {
            // identical segments
            return Ok(true);
        }
        if orient(s, a, b) != 0 {
            return Ok(false);
        }
        let dot = (a.x - s.x) * (b.x - s.x) + (a.y - s.y) * (b.y - s.y);
        return Ok(dot > 0.0);
    }

    let o1 = orient(p1, p2, q1);
    let o2 = orient(p1, p2, q2);
    let o3 = orient(q1, q2, p1);
    let o4 = orient(q1, q2, p2);

    if o1 * o2 < 0 && o3 * o4 < 0 {
        return Ok(true);
    }
    Ok((o1 == 0 && within(p1, p2, q1))
        || (o2 == 0 && within(p1, p2, q2))
        || (o3 == 0 && within(q1, q2, p1))
        || (o4 == 0 && within(q1, q2, p2)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(x: f64, y: f64) -> Point {
        Point::new(x, y)
    }

    #[test]
    fn crossing_diagonals() {
        assert!(segments_intersect(p(0., 0.), p(2., 2.), p(0., 2.), p(2., 0.)).unwrap());
    }

    #[test]
    fn disjoint_collinear() {
        assert!(!segments_intersect(p(0., 0.), p(1., 0.), p(2., 0.), p(3., 0.)).unwrap());
    }

    #[test]
    fn shared_endpoint_is_exempt() {
        assert!(!segments_intersect(p(0., 0.), p(1., 1.), p(1., 1.), p(2., 0.)).unwrap());
        // argument order must not matter
        assert!(!segments_intersect(p(1., 1.), p(0., 0.), p(2., 0.), p(1., 1.)).unwrap());
    }

    #[test]
    fn collinear_overlap_from_shared_endpoint_counts() {
        assert!(segments_intersect(p(0., 0.), p(2., 0.), p(0., 0.), p(1., 0.)).unwrap());
        // opposite directions from the shared point only touch there
        assert!(!segments_intersect(p(0., 0.), p(2., 0.), p(0., 0.), p(-1., 0.)).unwrap());
    }

    #[test]
    fn t_contact_counts() {
        assert!(segments_intersect(p(0., 0.), p(2., 0.), p(1., 0.), p(1., 3.)).unwrap());
    }

    #[test]
    fn parallel_apart() {
        assert!(!segments_intersect(p(0., 0.), p(2., 0.), p(0., 1.), p(2., 1.)).unwrap());
    }

    #[test]
    fn degenerate_segment_is_an_error() {
        let err = segments_intersect(p(1., 1.), p(1., 1.), p(0., 0.), p(2., 0.)).unwrap_err();
        assert!(matches!(err, SimError::InvalidGeometry(_)));
    }

    #[test]
    fn angle_is_normalized() {
        let o = p(0., 0.);
        assert_eq!(p(1., 0.).angle_from(o), 0.0);
        let a = p(0., -1.).angle_from(o);
        assert!((a - 1.5 * std::f64::consts::PI).abs() < 1e-12);
    }
}
