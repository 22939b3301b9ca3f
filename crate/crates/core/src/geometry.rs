//! Planar predicates for links (segments) and building footprints (oriented
//! rectangles).
//!
//! All sets are closed: a segment that only touches a rectangle's boundary
//! intersects it. Segment/rectangle intersection is available through two
//! independent routes, a separating-axis test and a membership test of the
//! rectangle center in the dilation hexagon of the segment. The two must agree
//! and are cross-checked in the test suite.

use std::f64::consts::TAU;
use std::ops::{Add, Mul, Sub};

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Point2 {
    pub x: f64,
    pub y: f64,
}

impl Point2 {
    pub const ORIGIN: Point2 = Point2 { x: 0.0, y: 0.0 };

    pub const fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    pub fn from_polar(r: f64, angle: f64) -> Self {
        let (s, c) = angle.sin_cos();
        Self::new(r * c, r * s)
    }

    pub fn dot(self, other: Point2) -> f64 {
        self.x * other.x + self.y * other.y
    }

    /// z-component of the 3-D cross product.
    pub fn cross(self, other: Point2) -> f64 {
        self.x * other.y - self.y * other.x
    }

    pub fn norm(self) -> f64 {
        self.x.hypot(self.y)
    }

    pub fn distance(self, other: Point2) -> f64 {
        (self - other).norm()
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
    fn mul(self, k: f64) -> Point2 {
        Point2::new(self.x * k, self.y * k)
    }
}

/// Closed segment between two points. `a == b` is allowed.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Segment {
    pub a: Point2,
    pub b: Point2,
}

impl Segment {
    pub const fn new(a: Point2, b: Point2) -> Self {
        Self { a, b }
    }

    pub fn length(&self) -> f64 {
        self.a.distance(self.b)
    }

    /// Point at parameter `t ∈ [0, 1]`.
    pub fn at(&self, t: f64) -> Point2 {
        self.a + (self.b - self.a) * t
    }
}

/// A building footprint: closed rectangle with its long side along `orientation`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Rect {
    pub center: Point2,
    pub length: f64,
    pub width: f64,
    /// Radians in `[0, 2π)`.
    pub orientation: f64,
    pub height: Option<f64>,
}

pub fn normalize_angle(theta: f64) -> f64 {
    let t = theta.rem_euclid(TAU);
    // rem_euclid can round up to exactly TAU for tiny negative inputs
    if t >= TAU {
        0.0
    } else {
        t
    }
}

impl Rect {
    pub fn new(center: Point2, length: f64, width: f64, orientation: f64) -> Result<Self> {
        if !(center.x.is_finite() && center.y.is_finite()) {
            return Err(invalid("center", "coordinates must be finite"));
        }
        if !(length.is_finite() && length > 0.0) {
            return Err(invalid(
                "length",
                format!("must be finite and > 0, got {length}"),
            ));
        }
        if !(width.is_finite() && width >= 0.0) {
            return Err(invalid(
                "width",
                format!("must be finite and >= 0, got {width}"),
            ));
        }
        if !orientation.is_finite() {
            return Err(invalid("orientation", "must be finite"));
        }
        Ok(Self::new_unchecked(center, length, width, orientation))
    }

    /// Skips validation; the orientation is still normalized. Used by samplers
    /// whose distributions guarantee valid sizes almost surely.
    pub(crate) fn new_unchecked(center: Point2, length: f64, width: f64, orientation: f64) -> Self {
        Self {
            center,
            length,
            width,
            orientation: normalize_angle(orientation),
            height: None,
        }
    }

    pub fn with_height(mut self, height: f64) -> Result<Self> {
        if !(height.is_finite() && height >= 0.0) {
            return Err(invalid(
                "height",
                format!("must be finite and >= 0, got {height}"),
            ));
        }
        self.height = Some(height);
        Ok(self)
    }

    pub fn axes(&self) -> (Point2, Point2) {
        let (s, c) = self.orientation.sin_cos();
        (Point2::new(c, s), Point2::new(-s, c))
    }

    /// Coordinates of `q` in the rectangle frame (u along the length).
    pub fn to_local(&self, q: Point2) -> Point2 {
        let (u, v) = self.axes();
        let d = q - self.center;
        Point2::new(d.dot(u), d.dot(v))
    }

    /// Corners relative to the center, counter-clockwise.
    pub fn corner_offsets(&self) -> [Point2; 4] {
        let (u, v) = self.axes();
        let hu = u * (self.length / 2.0);
        let hv = v * (self.width / 2.0);
        [Point2::ORIGIN - hu - hv, hu - hv, hu + hv, hv - hu]
    }

    pub fn corners(&self) -> [Point2; 4] {
        self.corner_offsets().map(|c| self.center + c)
    }

    /// Radius of the circumscribed circle.
    pub fn half_diagonal(&self) -> f64 {
        self.length.hypot(self.width) / 2.0
    }

    pub fn area(&self) -> f64 {
        self.length * self.width
    }
}

pub fn rect_contains_point(r: &Rect, q: Point2) -> bool {
    let local = r.to_local(q);
    local.x.abs() <= r.length / 2.0 && local.y.abs() <= r.width / 2.0
}

/// Separating-axis test. Candidate axes are the two rectangle axes and the
/// segment normal. Rectangles are closed; contacts within rounding of the
/// frame rotation count as hits.
pub fn segment_intersects_rect(s: &Segment, r: &Rect) -> bool {
    let a = r.to_local(s.a);
    let b = r.to_local(s.b);
    let hl = r.length / 2.0;
    let hw = r.width / 2.0;
    let tol = 1e-12 * hl.max(hw).max(a.norm()).max(b.norm()).max(1.0);

    if a.x.max(b.x) < -hl - tol || a.x.min(b.x) > hl + tol {
        return false;
    }
    if a.y.max(b.y) < -hw - tol || a.y.min(b.y) > hw + tol {
        return false;
    }
    let d = b - a;
    let normal = Point2::new(-d.y, d.x);
    if normal.x == 0.0 && normal.y == 0.0 {
        // degenerate segment: both slab tests passed, so the point is inside
        return true;
    }
    let offset = normal.dot(a);
    let reach = hl * normal.x.abs() + hw * normal.y.abs();
    offset.abs() <= reach + tol * normal.norm()
}

/// Convex hull (counter-clockwise, collinear points dropped) of the Minkowski
/// sum of `s` with a rectangle of the given shape centered at the origin.
///
/// A rectangle of that shape intersects `s` iff its center lies in this
/// polygon. For a rectangle not parallel to the link it is the hexagon formed
/// by a parallelogram and two corner triangles.
pub fn dilation_polygon(s: &Segment, length: f64, width: f64, orientation: f64) -> Vec<Point2> {
    let shape = Rect::new_unchecked(Point2::ORIGIN, length, width, orientation);
    let offsets = shape.corner_offsets();
    let mut pts: Vec<Point2> = offsets.iter().flat_map(|&c| [s.a + c, s.b + c]).collect();
    convex_hull(&mut pts)
}

/// Andrew's monotone chain.
fn convex_hull(pts: &mut [Point2]) -> Vec<Point2> {
    pts.sort_by(|p, q| p.x.total_cmp(&q.x).then(p.y.total_cmp(&q.y)));
    if pts.len() < 3 {
        return pts.to_vec();
    }
    let mut hull: Vec<Point2> = Vec::with_capacity(2 * pts.len());
    for pass in 0..2 {
        let start = hull.len();
        let iter: Box<dyn Iterator<Item = &Point2>> = if pass == 0 {
            Box::new(pts.iter())
        } else {
            Box::new(pts.iter().rev())
        };
        for &p in iter {
            while hull.len() >= start + 2 {
                let o = hull[hull.len() - 2];
                let q = hull[hull.len() - 1];
                if (q - o).cross(p - o) <= 0.0 {
                    hull.pop();
                } else {
                    break;
                }
            }
            hull.push(p);
        }
        hull.pop();
    }
    if hull.is_empty() {
        // all points identical
        hull.push(pts[0]);
    }
    hull
}

/// Closed membership in a convex polygon produced by [`dilation_polygon`].
/// Handles the collinear (zero-area) and single-point hulls.
pub fn point_in_convex_polygon(poly: &[Point2], q: Point2) -> bool {
    let scale = poly
        .iter()
        .chain(std::iter::once(&q))
        .fold(1.0_f64, |m, p| m.max(p.x.abs()).max(p.y.abs()));
    let eps = 1e-12 * scale * scale;
    match poly.len() {
        0 => false,
        1 => (poly[0] - q).norm() <= 1e-12 * scale,
        2 => {
            let (a, b) = (poly[0], poly[1]);
            let d = b - a;
            let w = q - a;
            if d.norm() == 0.0 {
                return w.norm() <= 1e-12 * scale;
            }
            if d.cross(w).abs() > eps * (1.0 + d.norm()) {
                return false;
            }
            let t = d.dot(w);
            t >= -eps && t <= d.dot(d) + eps
        }
        n => (0..n).all(|i| {
            let a = poly[i];
            let b = poly[(i + 1) % n];
            (b - a).cross(q - a) >= -eps
        }),
    }
}

/// Dilation-region route: the rectangle hits `s` iff its center lies in
/// `s ⊕ D`, where `D` is the rectangle translated to the origin.
pub fn segment_intersects_rect_dilation(s: &Segment, r: &Rect) -> bool {
    let poly = dilation_polygon(s, r.length, r.width, r.orientation);
    point_in_convex_polygon(&poly, r.center)
}

/// Area of the Minkowski sum of a length-`link_len` segment with an
/// `length × width` rectangle rotated by `theta` relative to the segment.
pub fn dilation_area(link_len: f64, length: f64, width: f64, theta: f64) -> f64 {
    link_len * length * theta.sin().abs() + link_len * width * theta.cos().abs() + length * width
}

/// Shoelace area of a counter-clockwise polygon.
pub fn polygon_area(poly: &[Point2]) -> f64 {
    let n = poly.len();
    if n < 3 {
        return 0.0;
    }
    0.5 * (0..n)
        .map(|i| poly[i].cross(poly[(i + 1) % n]))
        .sum::<f64>()
}

pub fn count_intersections(s: &Segment, blockages: &[Rect]) -> usize {
    blockages
        .iter()
        .filter(|r| segment_intersects_rect(s, r))
        .count()
}

/// Distance along the unit direction `dir` from `origin` to the first point of
/// `r`, or `None` if the ray misses. Returns `Some(0.0)` when `origin` is inside.
pub fn ray_rect_entry(origin: Point2, dir: Point2, r: &Rect) -> Option<f64> {
    clip_parametric(origin, dir, r, f64::INFINITY).map(|(t0, _)| t0)
}

/// Parameter interval `[t0, t1] ⊆ [0, 1]` of `s` lying inside `r`
/// (Liang–Barsky clipping in the rectangle frame).
pub fn clip_segment(s: &Segment, r: &Rect) -> Option<(f64, f64)> {
    clip_parametric(s.a, s.b - s.a, r, 1.0)
}

fn clip_parametric(origin: Point2, dir: Point2, r: &Rect, t_end: f64) -> Option<(f64, f64)> {
    let o = r.to_local(origin);
    let (u, v) = r.axes();
    let d = Point2::new(dir.dot(u), dir.dot(v));
    let mut t_min = 0.0_f64;
    let mut t_max = t_end;
    for (oc, dc, half) in [(o.x, d.x, r.length / 2.0), (o.y, d.y, r.width / 2.0)] {
        if dc == 0.0 {
            if oc.abs() > half {
                return None;
            }
        } else {
            let t1 = (-half - oc) / dc;
            let t2 = (half - oc) / dc;
            let (lo, hi) = if t1 <= t2 { (t1, t2) } else { (t2, t1) };
            t_min = t_min.max(lo);
            t_max = t_max.min(hi);
            if t_min > t_max {
                return None;
            }
        }
    }
    Some((t_min, t_max))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};

    fn unit_at_origin() -> Rect {
        Rect::new(Point2::ORIGIN, 1.0, 1.0, 0.0).unwrap()
    }

    fn both(s: &Segment, r: &Rect) -> bool {
        let sat = segment_intersects_rect(s, r);
        assert_eq!(sat, segment_intersects_rect_dilation(s, r), "{s:?} {r:?}");
        sat
    }

    #[test]
    fn contains_point_examples() {
        let r = unit_at_origin();
        assert!(rect_contains_point(&r, Point2::ORIGIN));
        assert!(!rect_contains_point(&r, Point2::new(0.51, 0.0)));
        // closed boundary
        assert!(rect_contains_point(&r, Point2::new(0.5, 0.5)));

        let rotated = Rect::new(Point2::ORIGIN, 2.0, 1.0, FRAC_PI_2).unwrap();
        assert!(rect_contains_point(&rotated, Point2::new(0.49, 0.0)));
        assert!(!rect_contains_point(&rotated, Point2::new(0.51, 0.0)));
        assert!(rect_contains_point(&rotated, Point2::new(0.0, 0.99)));
    }

    #[test]
    fn intersection_examples() {
        let s = Segment::new(Point2::ORIGIN, Point2::new(10.0, 0.0));
        for (l, w, th) in [(1.0, 1.0, 0.0), (30.0, 0.0, 1.0), (0.1, 5.0, 2.0)] {
            let r = Rect::new(Point2::new(5.0, 0.0), l, w, th).unwrap();
            assert!(both(&s, &r));
        }
        let far = Rect::new(Point2::new(5.0, 100.0), 1.0, 1.0, 0.0).unwrap();
        assert!(!both(&s, &far));

        let flat = Rect::new(Point2::new(5.0, 0.6), 2.0, 1.0, 0.0).unwrap();
        assert!(!both(&s, &flat));
        let tilted = Rect::new(Point2::new(5.0, 0.6), 2.0, 1.0, FRAC_PI_4).unwrap();
        assert!(both(&s, &tilted));
    }

    #[test]
    fn touching_counts() {
        let s = Segment::new(Point2::ORIGIN, Point2::new(10.0, 0.0));
        let r = Rect::new(Point2::new(5.0, 0.5), 2.0, 1.0, 0.0).unwrap();
        assert!(both(&s, &r));
        // end of the segment touching a side
        let r = Rect::new(Point2::new(11.0, 0.0), 2.0, 1.0, 0.0).unwrap();
        assert!(both(&s, &r));
    }

    #[test]
    fn degenerate_segment_is_point_containment() {
        let p = Point2::new(0.3, -0.2);
        let s = Segment::new(p, p);
        let r = unit_at_origin();
        assert!(both(&s, &r));
        let q = Point2::new(0.7, 0.0);
        assert!(!both(&Segment::new(q, q), &r));
    }

    #[test]
    fn zero_width_rect_is_a_segment() {
        let s = Segment::new(Point2::new(-1.0, 0.0), Point2::new(1.0, 0.0));
        let crossing = Rect::new(Point2::new(0.0, 0.4), 1.0, 0.0, FRAC_PI_2).unwrap();
        assert!(both(&s, &crossing));
        let short = Rect::new(Point2::new(0.0, 0.6), 1.0, 0.0, FRAC_PI_2).unwrap();
        assert!(!both(&s, &short));
        let parallel = Rect::new(Point2::new(0.0, 0.1), 1.0, 0.0, 0.0).unwrap();
        assert!(!both(&s, &parallel));
    }

    #[test]
    fn dilation_area_examples() {
        assert_eq!(dilation_area(0.0, 3.0, 2.0, 0.7), 6.0);
        assert!((dilation_area(10.0, 2.0, 0.0, FRAC_PI_2) - 20.0).abs() < 1e-12);
        let expected = 10.0 * 3.0 * 2f64.sqrt() / 2.0 + 2.0;
        assert!((dilation_area(10.0, 2.0, 1.0, FRAC_PI_4) - expected).abs() < 1e-12);
        assert!((expected - 23.213_203).abs() < 1e-6);
    }

    #[test]
    fn dilation_area_matches_hull_area() {
        let s = Segment::new(Point2::ORIGIN, Point2::new(7.0, 0.0));
        for k in 0..40 {
            let th = k as f64 * 0.157;
            let poly = dilation_polygon(&s, 3.0, 1.5, th);
            let area = polygon_area(&poly);
            assert!(
                (area - dilation_area(7.0, 3.0, 1.5, th)).abs() < 1e-9,
                "θ={th}"
            );
        }
    }

    #[test]
    fn dilation_area_symmetries() {
        for k in 0..50 {
            let th = k as f64 * 0.131;
            let a = dilation_area(12.0, 4.0, 1.5, th);
            assert!((a - dilation_area(12.0, 4.0, 1.5, th + PI)).abs() < 1e-9);
            assert!((a - dilation_area(12.0, 4.0, 1.5, -th)).abs() < 1e-9);
            assert!(a >= dilation_area(12.0, 4.0, 1.5, 0.0) - 1e-12);
        }
    }

    #[test]
    fn count_examples() {
        let s = Segment::new(Point2::ORIGIN, Point2::new(10.0, 0.0));
        assert_eq!(count_intersections(&s, &[]), 0);
        let on = Rect::new(Point2::new(5.0, 0.0), 1.0, 1.0, 0.3).unwrap();
        let off = Rect::new(Point2::new(5.0, 9.0), 1.0, 1.0, 0.3).unwrap();
        assert_eq!(count_intersections(&s, &[on]), 1);
        assert_eq!(count_intersections(&s, &[on, off, on]), 2);
    }

    #[test]
    fn orientation_is_normalized() {
        let r = Rect::new(Point2::ORIGIN, 1.0, 1.0, -FRAC_PI_2).unwrap();
        assert!((r.orientation - 1.5 * PI).abs() < 1e-12);
        let r = Rect::new(Point2::ORIGIN, 1.0, 1.0, 5.0 * PI).unwrap();
        assert!((r.orientation - PI).abs() < 1e-12);
        assert!(normalize_angle(-1e-300) < TAU);
    }

    #[test]
    fn invalid_rects_rejected() {
        assert!(Rect::new(Point2::ORIGIN, 0.0, 1.0, 0.0).is_err());
        assert!(Rect::new(Point2::ORIGIN, 1.0, -1.0, 0.0).is_err());
        assert!(Rect::new(Point2::new(f64::NAN, 0.0), 1.0, 1.0, 0.0).is_err());
        assert!(unit_at_origin().with_height(-2.0).is_err());
    }

    #[test]
    fn ray_entry() {
        let r = Rect::new(Point2::new(10.0, 0.0), 2.0, 2.0, 0.0).unwrap();
        let t = ray_rect_entry(Point2::ORIGIN, Point2::new(1.0, 0.0), &r).unwrap();
        assert!((t - 9.0).abs() < 1e-12);
        assert!(ray_rect_entry(Point2::ORIGIN, Point2::new(-1.0, 0.0), &r).is_none());
        assert!(ray_rect_entry(Point2::ORIGIN, Point2::new(0.0, 1.0), &r).is_none());
        let inside = ray_rect_entry(Point2::new(10.5, 0.0), Point2::new(0.0, 1.0), &r);
        assert_eq!(inside, Some(0.0));
    }

    #[test]
    fn clip_interval() {
        let r = Rect::new(Point2::new(5.0, 0.0), 2.0, 2.0, 0.0).unwrap();
        let s = Segment::new(Point2::ORIGIN, Point2::new(10.0, 0.0));
        let (t0, t1) = clip_segment(&s, &r).unwrap();
        assert!((t0 - 0.4).abs() < 1e-12 && (t1 - 0.6).abs() < 1e-12);
        let short = Segment::new(Point2::ORIGIN, Point2::new(3.0, 0.0));
        assert!(clip_segment(&short, &r).is_none());
    }
}
