//! Upper half-plane geometry with exact contracts.
//!
//! Points are `x + iy` with `y > 0`; geodesics are vertical rays or
//! half-circles centered on the real axis, recorded by their directed pair of
//! boundary endpoints. Orientation-preserving isometries are unimodular 2×2
//! real matrices acting by fractional linear transformations; equality is
//! projective (M and −M act identically).
//!
//! Crossing parameters along a geodesic are measured from the point of the
//! geodesic closest to `i`, increasing toward the `to` endpoint. This fixed
//! origin convention makes parameters stable across runs.

use crate::dd::{Dd, DdMat};
use crate::{Error, Result};
use std::fmt;

/// Tolerance for geometric coincidence tests (point on line, etc).
pub const COINCIDENCE_TOL: f64 = 1e-9;
/// Trace tolerance separating parabolic/identity from hyperbolic.
pub const TRACE_TOL: f64 = 1e-10;

/// Classification of an orientation-preserving isometry by |trace|.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IsometryClass {
    Identity,
    Elliptic,
    Parabolic,
    Hyperbolic,
}

/// A point of the open upper half-plane.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PlanePoint {
    pub x: f64,
    pub y: f64,
}

impl PlanePoint {
    /// Panics on nonpositive or non-finite `y`; interior points only.
    pub fn new(x: f64, y: f64) -> Self {
        assert!(y.is_finite() && x.is_finite() && y > 0.0, "not interior: ({x}, {y})");
        PlanePoint { x, y }
    }

    pub const I: PlanePoint = PlanePoint { x: 0.0, y: 1.0 };
}

impl fmt::Display for PlanePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

/// A point of the boundary circle: a real number or the point at infinity.
///
/// Infinity is a distinguished case, never a large float, so that linking
/// tests stay exact.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum BoundaryPoint {
    Finite(f64),
    Infinity,
}

impl BoundaryPoint {
    pub fn finite(self) -> Option<f64> {
        match self {
            BoundaryPoint::Finite(v) => Some(v),
            BoundaryPoint::Infinity => None,
        }
    }

    pub fn is_infinity(self) -> bool {
        matches!(self, BoundaryPoint::Infinity)
    }
}

impl fmt::Display for BoundaryPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BoundaryPoint::Finite(v) => write!(f, "{v}"),
            BoundaryPoint::Infinity => write!(f, "inf"),
        }
    }
}

/// A complete geodesic, directed from one boundary endpoint to another.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DirectedGeodesic {
    pub from: BoundaryPoint,
    pub to: BoundaryPoint,
}

impl DirectedGeodesic {
    pub fn new(from: BoundaryPoint, to: BoundaryPoint) -> Self {
        assert!(from != to, "degenerate geodesic");
        DirectedGeodesic { from, to }
    }

    pub fn between(u: f64, v: f64) -> Self {
        DirectedGeodesic::new(BoundaryPoint::Finite(u), BoundaryPoint::Finite(v))
    }

    pub fn vertical_up(x: f64) -> Self {
        DirectedGeodesic::new(BoundaryPoint::Finite(x), BoundaryPoint::Infinity)
    }

    pub fn reversed(self) -> Self {
        DirectedGeodesic {
            from: self.to,
            to: self.from,
        }
    }

    /// Same unoriented line: equal endpoint sets.
    pub fn same_unoriented(&self, other: &DirectedGeodesic) -> bool {
        (self.from == other.from && self.to == other.to)
            || (self.from == other.to && self.to == other.from)
    }
}

impl fmt::Display for DirectedGeodesic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} -> {}", self.from, self.to)
    }
}

/// An orientation-preserving isometry: a unimodular matrix acting by
/// z ↦ (az + b)/(cz + d). M and −M denote the same isometry.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Isometry {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
}

impl Isometry {
    pub const IDENTITY: Isometry = Isometry {
        a: 1.0,
        b: 0.0,
        c: 0.0,
        d: 1.0,
    };

    /// Builds from entries with positive determinant, rescaling to det 1.
    pub fn new(a: f64, b: f64, c: f64, d: f64) -> Result<Self> {
        let det = a * d - b * c;
        if !det.is_finite() || det <= 0.0 {
            return Err(Error::InvalidSurface(format!(
                "matrix [[{a}, {b}], [{c}, {d}]] has determinant {det}, not positive"
            )));
        }
        let s = 1.0 / det.sqrt();
        Ok(Isometry {
            a: a * s,
            b: b * s,
            c: c * s,
            d: d * s,
        })
    }

    pub fn det(&self) -> f64 {
        self.a * self.d - self.b * self.c
    }

    pub fn trace(&self) -> f64 {
        self.a + self.d
    }

    pub fn max_abs(&self) -> f64 {
        self.a.abs().max(self.b.abs()).max(self.c.abs()).max(self.d.abs())
    }

    /// Matrix product self·other (apply `other` first).
    ///
    /// Renormalizes the determinant only while entries are small enough for
    /// the computed determinant to be trustworthy; for larger entries the
    /// true determinant drifts only at relative rounding level while the
    /// computed one is dominated by cancellation noise.
    pub fn compose(&self, other: &Isometry) -> Isometry {
        let a = self.a * other.a + self.b * other.c;
        let b = self.a * other.b + self.b * other.d;
        let c = self.c * other.a + self.d * other.c;
        let d = self.c * other.b + self.d * other.d;
        let m = Isometry { a, b, c, d };
        if m.max_abs() < 1e4 {
            let s = 1.0 / m.det().sqrt();
            Isometry {
                a: a * s,
                b: b * s,
                c: c * s,
                d: d * s,
            }
        } else {
            m
        }
    }

    pub fn inverse(&self) -> Isometry {
        Isometry {
            a: self.d,
            b: -self.b,
            c: -self.c,
            d: self.a,
        }
    }

    pub fn apply(&self, p: PlanePoint) -> PlanePoint {
        let (a, b, c, d) = (self.a, self.b, self.c, self.d);
        let den = (c * p.x + d).powi(2) + (c * p.y).powi(2);
        let nx = (a * p.x + b) * (c * p.x + d) + a * c * p.y * p.y;
        let ny = p.y * self.det();
        PlanePoint::new(nx / den, ny / den)
    }

    pub fn apply_boundary(&self, p: BoundaryPoint) -> BoundaryPoint {
        match p {
            BoundaryPoint::Infinity => {
                if self.c == 0.0 {
                    BoundaryPoint::Infinity
                } else {
                    BoundaryPoint::Finite(self.a / self.c)
                }
            }
            BoundaryPoint::Finite(x) => {
                let den = self.c * x + self.d;
                if den == 0.0 {
                    BoundaryPoint::Infinity
                } else {
                    BoundaryPoint::Finite((self.a * x + self.b) / den)
                }
            }
        }
    }

    pub fn apply_geodesic(&self, g: &DirectedGeodesic) -> DirectedGeodesic {
        DirectedGeodesic::new(self.apply_boundary(g.from), self.apply_boundary(g.to))
    }

    /// Classification by |trace|: < 2 elliptic, ≈ 2 parabolic or identity,
    /// > 2 hyperbolic.
    pub fn classify(&self) -> IsometryClass {
        let t = self.trace().abs();
        if t > 2.0 + TRACE_TOL {
            IsometryClass::Hyperbolic
        } else if t < 2.0 - TRACE_TOL {
            IsometryClass::Elliptic
        } else {
            let s = if self.a + self.d < 0.0 { -1.0 } else { 1.0 };
            let off = (s * self.a - 1.0).abs().max((s * self.d - 1.0).abs());
            let off = off.max(self.b.abs()).max(self.c.abs());
            if off < TRACE_TOL {
                IsometryClass::Identity
            } else {
                IsometryClass::Parabolic
            }
        }
    }

    /// Translation length 2·arccosh(|tr|/2) of a hyperbolic isometry.
    pub fn translation_length(&self) -> Result<f64> {
        let t = self.trace().abs();
        if t <= 2.0 + TRACE_TOL {
            return Err(Error::NotHyperbolic { trace_abs: t });
        }
        Ok(2.0 * (t / 2.0).acosh())
    }

    /// Invariant geodesic of a hyperbolic isometry, directed from the
    /// repelling to the attracting fixed point.
    pub fn axis(&self) -> Result<DirectedGeodesic> {
        let (mut a, b, mut c, mut d) = (self.a, self.b, self.c, self.d);
        let mut bb = b;
        if a + d < 0.0 {
            a = -a;
            bb = -bb;
            c = -c;
            d = -d;
        }
        let t = a + d;
        if t <= 2.0 + TRACE_TOL {
            return Err(Error::NotHyperbolic { trace_abs: t.abs() });
        }
        let scale = self.max_abs().max(1.0);
        if c.abs() < 1e-12 * scale {
            // infinity is fixed; attracting iff |a| > 1
            let other = BoundaryPoint::Finite(bb / (d - a));
            return Ok(if a.abs() > 1.0 {
                DirectedGeodesic::new(other, BoundaryPoint::Infinity)
            } else {
                DirectedGeodesic::new(BoundaryPoint::Infinity, other)
            });
        }
        let disc = (t * t - 4.0).sqrt();
        let lam = (t + disc) / 2.0; // eigenvalue > 1
        let mu = (t - disc) / 2.0;
        let attracting = (lam - d) / c;
        let repelling = (mu - d) / c;
        Ok(DirectedGeodesic::between(repelling, attracting))
    }

    /// Hyperbolic translation along `g` (from → to) by length `l` > 0.
    pub fn translation_along(g: &DirectedGeodesic, l: f64) -> Isometry {
        let t = to_vertical(g);
        let e = (l / 2.0).exp();
        let diag = Isometry {
            a: e,
            b: 0.0,
            c: 0.0,
            d: 1.0 / e,
        };
        t.inverse().compose(&diag).compose(&t)
    }

    /// Projective equality within an absolute entrywise tolerance.
    pub fn approx_eq_projective(&self, other: &Isometry, tol: f64) -> bool {
        let dp = (self.a - other.a)
            .abs()
            .max((self.b - other.b).abs())
            .max((self.c - other.c).abs())
            .max((self.d - other.d).abs());
        let dm = (self.a + other.a)
            .abs()
            .max((self.b + other.b).abs())
            .max((self.c + other.c).abs())
            .max((self.d + other.d).abs());
        dp.min(dm) <= tol
    }
}

/// An orientation-reversing isometry: determinant −1 entries acting by
/// z ↦ (a·z̄ + b)/(c·z̄ + d).
#[derive(Debug, Clone, Copy)]
pub struct Reflection {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
}

impl Reflection {
    pub fn det(&self) -> f64 {
        self.a * self.d - self.b * self.c
    }

    pub fn apply(&self, p: PlanePoint) -> PlanePoint {
        let (a, b, c, d) = (self.a, self.b, self.c, self.d);
        let den = (c * p.x + d).powi(2) + (c * p.y).powi(2);
        let nx = (a * p.x + b) * (c * p.x + d) + a * c * p.y * p.y;
        let ny = -p.y * self.det();
        PlanePoint::new(nx / den, ny / den)
    }

    pub fn apply_boundary(&self, p: BoundaryPoint) -> BoundaryPoint {
        match p {
            BoundaryPoint::Infinity => {
                if self.c == 0.0 {
                    BoundaryPoint::Infinity
                } else {
                    BoundaryPoint::Finite(self.a / self.c)
                }
            }
            BoundaryPoint::Finite(x) => {
                let den = self.c * x + self.d;
                if den == 0.0 {
                    BoundaryPoint::Infinity
                } else {
                    BoundaryPoint::Finite((self.a * x + self.b) / den)
                }
            }
        }
    }
}

/// Hyperbolic distance between interior points.
pub fn dist(p: PlanePoint, q: PlanePoint) -> f64 {
    let dx = p.x - q.x;
    let dy = p.y - q.y;
    2.0 * ((dx * dx + dy * dy) / (4.0 * p.y * q.y)).sqrt().asinh()
}

/// Whether the endpoint pairs of two geodesics alternate on the boundary
/// circle. Pairs sharing an endpoint do not link.
pub fn linked(g1: &DirectedGeodesic, g2: &DirectedGeodesic) -> bool {
    let e1 = [g1.from, g1.to];
    let e2 = [g2.from, g2.to];
    for a in e1 {
        for b in e2 {
            if a == b {
                return false;
            }
        }
    }
    // c is inside the arc cut off by g1 (the side not containing infinity
    // for a finite chord; the x > f side for a chord through infinity).
    let inside = |p: BoundaryPoint| -> bool {
        match (g1.from, g1.to, p) {
            (_, _, BoundaryPoint::Infinity) => false,
            (BoundaryPoint::Finite(u), BoundaryPoint::Finite(v), BoundaryPoint::Finite(x)) => {
                u.min(v) < x && x < u.max(v)
            }
            (BoundaryPoint::Infinity, BoundaryPoint::Finite(f), BoundaryPoint::Finite(x))
            | (BoundaryPoint::Finite(f), BoundaryPoint::Infinity, BoundaryPoint::Finite(x)) => {
                x > f
            }
            _ => unreachable!("degenerate geodesic"),
        }
    };
    inside(e2[0]) != inside(e2[1])
}

/// Center/radius view of a geodesic.
enum Shape {
    Vertical(f64),
    Circle { center: f64, radius: f64 },
}

fn shape(g: &DirectedGeodesic) -> Shape {
    match (g.from, g.to) {
        (BoundaryPoint::Finite(u), BoundaryPoint::Finite(v)) => Shape::Circle {
            center: (u + v) / 2.0,
            radius: (u - v).abs() / 2.0,
        },
        (BoundaryPoint::Finite(u), BoundaryPoint::Infinity)
        | (BoundaryPoint::Infinity, BoundaryPoint::Finite(u)) => Shape::Vertical(u),
        _ => unreachable!("degenerate geodesic"),
    }
}

/// Intersection point of two geodesics: `Some` iff their endpoint pairs are
/// linked on the boundary circle, `None` otherwise.
pub fn intersect(g1: &DirectedGeodesic, g2: &DirectedGeodesic) -> Result<Option<PlanePoint>> {
    if g1.same_unoriented(g2) {
        return Err(Error::CoincidentLines);
    }
    let (s1, s2) = (shape(g1), shape(g2));
    let pt = match (s1, s2) {
        (Shape::Vertical(_), Shape::Vertical(_)) => None,
        (Shape::Vertical(x0), Shape::Circle { center, radius })
        | (Shape::Circle { center, radius }, Shape::Vertical(x0)) => {
            let y2 = radius * radius - (x0 - center) * (x0 - center);
            (y2 > 0.0).then(|| PlanePoint::new(x0, y2.sqrt()))
        }
        (
            Shape::Circle {
                center: c1,
                radius: r1,
            },
            Shape::Circle {
                center: c2,
                radius: r2,
            },
        ) => {
            if c1 == c2 {
                None
            } else {
                let x = (r1 * r1 - r2 * r2 - (c1 * c1 - c2 * c2)) / (2.0 * (c2 - c1));
                let y2 = r1 * r1 - (x - c1) * (x - c1);
                (y2 > 0.0).then(|| PlanePoint::new(x, y2.sqrt()))
            }
        }
    };
    Ok(pt)
}

/// Unit Euclidean forward tangent of `g` at a point of `g`.
pub fn tangent_at(g: &DirectedGeodesic, p: PlanePoint) -> (f64, f64) {
    match (g.from, g.to) {
        (BoundaryPoint::Finite(_), BoundaryPoint::Infinity) => (0.0, 1.0),
        (BoundaryPoint::Infinity, BoundaryPoint::Finite(_)) => (0.0, -1.0),
        (BoundaryPoint::Finite(u), BoundaryPoint::Finite(v)) => {
            let c = (u + v) / 2.0;
            let (tx, ty) = if v > u {
                (p.y, c - p.x)
            } else {
                (-p.y, p.x - c)
            };
            let n = tx.hypot(ty);
            (tx / n, ty / n)
        }
        _ => unreachable!(),
    }
}

fn offset_from(g: &DirectedGeodesic, p: PlanePoint) -> f64 {
    match shape(g) {
        Shape::Vertical(x0) => (p.x - x0).abs(),
        Shape::Circle { center, radius } => ((p.x - center).hypot(p.y) - radius).abs(),
    }
}

fn require_on_line(g: &DirectedGeodesic, p: PlanePoint) -> Result<()> {
    let off = offset_from(g, p);
    let scale = match shape(g) {
        Shape::Vertical(x0) => x0.abs().max(p.y).max(1.0),
        Shape::Circle { radius, center } => radius.max(center.abs()).max(1.0),
    };
    if off > COINCIDENCE_TOL * scale {
        return Err(Error::PointNotOnLine {
            x: p.x,
            y: p.y,
            offset: off,
        });
    }
    Ok(())
}

/// Unsigned angle in (0, π) between the forward directions of two directed
/// lines at a common point.
pub fn forward_angle(g1: &DirectedGeodesic, g2: &DirectedGeodesic, p: PlanePoint) -> Result<f64> {
    require_on_line(g1, p)?;
    require_on_line(g2, p)?;
    let t1 = tangent_at(g1, p);
    let t2 = tangent_at(g2, p);
    let dot = t1.0 * t2.0 + t1.1 * t2.1;
    let cross = t1.0 * t2.1 - t1.1 * t2.0;
    Ok(cross.abs().atan2(dot))
}

/// Isometry mapping `g` to the upward imaginary axis (`from` ↦ 0, `to` ↦ ∞).
pub fn to_vertical(g: &DirectedGeodesic) -> Isometry {
    match (g.from, g.to) {
        (BoundaryPoint::Finite(u), BoundaryPoint::Infinity) => Isometry {
            a: 1.0,
            b: -u,
            c: 0.0,
            d: 1.0,
        },
        (BoundaryPoint::Infinity, BoundaryPoint::Finite(v)) => Isometry {
            a: 0.0,
            b: -1.0,
            c: 1.0,
            d: -v,
        },
        (BoundaryPoint::Finite(u), BoundaryPoint::Finite(v)) => {
            let m = if v > u {
                Isometry {
                    a: 1.0,
                    b: -u,
                    c: -1.0,
                    d: v,
                }
            } else {
                Isometry {
                    a: -1.0,
                    b: u,
                    c: -1.0,
                    d: v,
                }
            };
            let s = 1.0 / m.det().sqrt();
            Isometry {
                a: m.a * s,
                b: m.b * s,
                c: m.c * s,
                d: m.d * s,
            }
        }
        _ => unreachable!(),
    }
}

/// Height of the chart image of the point of `g` closest to `i`; the origin
/// of the parameter convention.
fn origin_tau(g: &DirectedGeodesic) -> f64 {
    let w = to_vertical(g).apply(PlanePoint::I);
    w.x.hypot(w.y)
}

/// Signed arclength parameter of a point of `g`, measured from the point of
/// `g` closest to `i`, increasing toward `g.to`.
pub fn param_of(g: &DirectedGeodesic, p: PlanePoint) -> Result<f64> {
    require_on_line(g, p)?;
    let w = to_vertical(g).apply(p);
    Ok((w.x.hypot(w.y) / origin_tau(g)).ln())
}

/// The point of `g` at parameter `t` (inverse of [`param_of`]).
pub fn point_at(g: &DirectedGeodesic, t: f64) -> PlanePoint {
    let tau = origin_tau(g) * t.exp();
    to_vertical(g).inverse().apply(PlanePoint::new(0.0, tau))
}

/// Distance from a point to a complete geodesic.
pub fn dist_to_geodesic(p: PlanePoint, g: &DirectedGeodesic) -> f64 {
    let w = to_vertical(g).apply(p);
    (w.x.hypot(w.y) / w.y).max(1.0).acosh()
}

/// Foot of the perpendicular from `p` onto `g`.
pub fn foot_on_geodesic(p: PlanePoint, g: &DirectedGeodesic) -> PlanePoint {
    let w = to_vertical(g).apply(p);
    let tau = w.x.hypot(w.y);
    to_vertical(g).inverse().apply(PlanePoint::new(0.0, tau))
}

/// The geodesic through two distinct points, directed from `p` to `q`.
pub fn geodesic_through(p: PlanePoint, q: PlanePoint) -> DirectedGeodesic {
    let scale = p.x.abs().max(q.x.abs()).max(p.y).max(q.y).max(1.0);
    if (p.x - q.x).abs() < 1e-13 * scale {
        let x = p.x;
        return if q.y > p.y {
            DirectedGeodesic::vertical_up(x)
        } else {
            DirectedGeodesic::vertical_up(x).reversed()
        };
    }
    let c = (p.x * p.x + p.y * p.y - q.x * q.x - q.y * q.y) / (2.0 * (p.x - q.x));
    let r = (p.x - c).hypot(p.y);
    let g = DirectedGeodesic::between(c - r, c + r);
    let tp = param_of(&g, p).expect("p on constructed geodesic");
    let tq = param_of(&g, q).expect("q on constructed geodesic");
    if tq > tp {
        g
    } else {
        g.reversed()
    }
}

/// Hyperbolic midpoint of the segment from `p` to `q`; `p` when they agree.
pub fn midpoint(p: PlanePoint, q: PlanePoint) -> PlanePoint {
    let scale = p.x.abs().max(q.x.abs()).max(p.y).max(q.y).max(1.0);
    if (p.x - q.x).abs() < 1e-14 * scale && (p.y - q.y).abs() < 1e-14 * scale {
        return p;
    }
    let g = geodesic_through(p, q);
    let tp = param_of(&g, p).expect("on line");
    let tq = param_of(&g, q).expect("on line");
    point_at(&g, (tp + tq) / 2.0)
}

/// Order-two elliptic isometry fixing `u` (rotation by π).
pub fn rotation_pi(u: PlanePoint) -> Isometry {
    Isometry {
        a: -u.x / u.y,
        b: (u.x * u.x + u.y * u.y) / u.y,
        c: -1.0 / u.y,
        d: u.x / u.y,
    }
}

/// Checks the rotation decomposition X = R_P ∘ R_S projectively.
///
/// Returns true exactly when composing the π-rotations about `p` and `s`
/// reproduces `x`; this holds when `p` and `s` lie on the axis of `x` with
/// `s` at distance ℓ/2 behind `p`.
pub fn compose_rotations_check(x: &Isometry, p: PlanePoint, s: PlanePoint) -> Result<bool> {
    let ax = x.axis()?;
    for q in [p, s] {
        let d = dist_to_geodesic(q, &ax);
        if d > COINCIDENCE_TOL {
            return Err(Error::PointNotOnAxis { dist: d });
        }
    }
    let composed = rotation_pi(p).compose(&rotation_pi(s));
    Ok(composed.approx_eq_projective(x, 1e-9 * x.max_abs().max(1.0)))
}

/// Translation length of a product of hyperbolic isometries with crossing
/// axes, from the lengths of the factors and the angle α of the cosine rule:
///
/// cosh(ℓ/2) = cosh(ℓx/2)·cosh(ℓy/2) − sinh(ℓx/2)·sinh(ℓy/2)·cos α.
///
/// With the crossing's forward angle θ between the two directed axes, the
/// matrix product X·Y has length `beardon_length(ℓx, ℓy, π − θ)`; the
/// supplement is the resolved convention for the figure-defined α.
pub fn beardon_length(lx: f64, ly: f64, alpha: f64) -> Result<f64> {
    let rhs = (lx / 2.0).cosh() * (ly / 2.0).cosh()
        - (lx / 2.0).sinh() * (ly / 2.0).sinh() * alpha.cos();
    if rhs <= 1.0 + TRACE_TOL {
        return Err(Error::DegenerateProduct { rhs });
    }
    Ok(2.0 * rhs.acosh())
}

/// Reflection fixing `g` pointwise.
pub fn reflection_about(g: &DirectedGeodesic) -> Reflection {
    match shape(g) {
        Shape::Vertical(x0) => Reflection {
            a: -1.0,
            b: 2.0 * x0,
            c: 0.0,
            d: 1.0,
        },
        Shape::Circle { center, radius } => Reflection {
            a: center / radius,
            b: (radius * radius - center * center) / radius,
            c: 1.0 / radius,
            d: -center / radius,
        },
    }
}

/// The geodesic through `p` perpendicular to `g`, directed so its tangent at
/// `p` is the forward tangent of `g` rotated clockwise by π/2.
pub fn perpendicular_at(g: &DirectedGeodesic, p: PlanePoint) -> Result<DirectedGeodesic> {
    require_on_line(g, p)?;
    let unoriented = match shape(g) {
        Shape::Vertical(x0) => DirectedGeodesic::between(x0 - p.y, x0 + p.y),
        Shape::Circle { center, radius } => {
            if (p.x - center).abs() < 1e-13 * radius.max(1.0) {
                DirectedGeodesic::vertical_up(p.x)
            } else {
                let cp = (radius * radius + p.x * p.x + p.y * p.y - center * center)
                    / (2.0 * (p.x - center));
                let rp = (p.x - cp).hypot(p.y);
                DirectedGeodesic::between(cp - rp, cp + rp)
            }
        }
    };
    let tg = tangent_at(g, p);
    let want = (tg.1, -tg.0);
    let tp = tangent_at(&unoriented, p);
    Ok(if tp.0 * want.0 + tp.1 * want.1 > 0.0 {
        unoriented
    } else {
        unoriented.reversed()
    })
}

// ---------------------------------------------------------------------------
// Double-double entry points used by the lift enumeration.

/// Trace, as a double-double, of the fold of `mats` in order.
pub fn dd_fold(mats: impl IntoIterator<Item = DdMat>) -> DdMat {
    let mut m = DdMat::IDENTITY;
    for g in mats {
        m = m.mul(&g);
    }
    m
}

/// Axis endpoints of a hyperbolic double-double matrix, resolved at full
/// precision to survive the cancellation in conjugate folds.
///
/// `Ok(None)` means the element is hyperbolic but its two fixed points
/// collide at f64 resolution (a lift so far away that its axis subtends
/// less than one ulp of boundary); such lifts cannot cross any bounded
/// window and are skipped by the enumeration.
pub fn dd_axis(m: &DdMat) -> Result<Option<DirectedGeodesic>> {
    let mut t = m.trace();
    let (a, b, c, d);
    if t.hi < 0.0 {
        t = t.neg();
        a = m.a.neg();
        b = m.b.neg();
        c = m.c.neg();
        d = m.d.neg();
    } else {
        a = m.a;
        b = m.b;
        c = m.c;
        d = m.d;
    }
    if t.to_f64() <= 2.0 + TRACE_TOL {
        return Err(Error::NotHyperbolic {
            trace_abs: t.to_f64().abs(),
        });
    }
    let scale = m.max_abs().max(1.0);
    if c.hi.abs() < 1e-25 * scale {
        let other = BoundaryPoint::Finite(b.div(d.sub(a)).to_f64());
        return Ok(Some(if a.abs().to_f64() > 1.0 {
            DirectedGeodesic::new(other, BoundaryPoint::Infinity)
        } else {
            DirectedGeodesic::new(BoundaryPoint::Infinity, other)
        }));
    }
    let disc = t.mul(t).sub(Dd::from_f64(4.0)).sqrt();
    let lam = t.add(disc).mul_f64(0.5);
    let mu = t.sub(disc).mul_f64(0.5);
    let attracting = lam.sub(d).div(c).to_f64();
    let repelling = mu.sub(d).div(c).to_f64();
    if !attracting.is_finite() || !repelling.is_finite() || attracting == repelling {
        return Ok(None);
    }
    Ok(Some(DirectedGeodesic::between(repelling, attracting)))
}

/// Translation length from a double-double trace.
pub fn dd_translation_length(m: &DdMat) -> Result<f64> {
    let t = m.trace().abs().to_f64();
    if t <= 2.0 + TRACE_TOL {
        return Err(Error::NotHyperbolic { trace_abs: t });
    }
    Ok(2.0 * (t / 2.0).acosh())
}

#[cfg(test)]
mod tests {
    use super::*;

    const E: f64 = std::f64::consts::E;
    const PI: f64 = std::f64::consts::PI;

    fn diag_e() -> Isometry {
        Isometry::new(E, 0.0, 0.0, 1.0 / E).unwrap()
    }

    #[test]
    fn classify_examples() {
        assert_eq!(diag_e().classify(), IsometryClass::Hyperbolic);
        let rot = Isometry::new(0.0, 1.0, -1.0, 0.0).unwrap();
        assert_eq!(rot.classify(), IsometryClass::Elliptic);
        let par = Isometry::new(1.0, 1.0, 0.0, 1.0).unwrap();
        assert_eq!(par.classify(), IsometryClass::Parabolic);
        assert_eq!(Isometry::IDENTITY.classify(), IsometryClass::Identity);
    }

    #[test]
    fn translation_length_examples() {
        assert!((diag_e().translation_length().unwrap() - 2.0).abs() < 1e-12);
        let m = Isometry::new(1.0_f64.cosh(), 1.0_f64.sinh(), 1.0_f64.sinh(), 1.0_f64.cosh())
            .unwrap();
        assert!((m.translation_length().unwrap() - 2.0).abs() < 1e-12);
        assert!(Isometry::IDENTITY.translation_length().is_err());
    }

    #[test]
    fn axis_examples() {
        let ax = diag_e().axis().unwrap();
        assert_eq!(ax.from, BoundaryPoint::Finite(0.0));
        assert_eq!(ax.to, BoundaryPoint::Infinity);
        let inv = diag_e().inverse().axis().unwrap();
        assert_eq!(inv.to, BoundaryPoint::Finite(0.0));
        assert_eq!(inv.from, BoundaryPoint::Infinity);
    }

    #[test]
    fn axis_is_equivariant() {
        let m = Isometry::new(2.0, 3.0, 1.0, 2.0).unwrap();
        let g = Isometry::new(1.0, 2.0, 0.5, 2.0).unwrap();
        let conj = g.compose(&m).compose(&g.inverse());
        let ax = m.axis().unwrap();
        let expected = g.apply_geodesic(&ax);
        let got = conj.axis().unwrap();
        let ef = expected.from.finite().unwrap();
        let et = expected.to.finite().unwrap();
        assert!((got.from.finite().unwrap() - ef).abs() < 1e-9);
        assert!((got.to.finite().unwrap() - et).abs() < 1e-9);
    }

    #[test]
    fn dist_examples() {
        let i = PlanePoint::I;
        let ei = PlanePoint::new(0.0, E);
        assert!((dist(i, ei) - 1.0).abs() < 1e-12);
        assert_eq!(dist(i, i), 0.0);
        let g = Isometry::new(3.0, 1.0, 1.0, 2.0).unwrap();
        let p = PlanePoint::new(0.3, 0.7);
        let q = PlanePoint::new(-1.1, 2.0);
        assert!((dist(p, q) - dist(g.apply(p), g.apply(q))).abs() < 1e-10);
    }

    #[test]
    fn intersect_examples() {
        let vert = DirectedGeodesic::vertical_up(0.0);
        let unit = DirectedGeodesic::between(-1.0, 1.0);
        let p = intersect(&vert, &unit).unwrap().unwrap();
        assert!((p.x - 0.0).abs() < 1e-12 && (p.y - 1.0).abs() < 1e-12);
        let off = DirectedGeodesic::between(1.0, 2.0);
        assert!(intersect(&vert, &off).unwrap().is_none());
        let q = intersect(&unit, &vert).unwrap().unwrap();
        assert!((q.y - 1.0).abs() < 1e-12);
        assert!(matches!(
            intersect(&unit, &unit.reversed()),
            Err(Error::CoincidentLines)
        ));
    }

    #[test]
    fn linked_matches_intersect() {
        let cases = [
            (DirectedGeodesic::vertical_up(0.0), DirectedGeodesic::between(-1.0, 1.0), true),
            (DirectedGeodesic::vertical_up(0.0), DirectedGeodesic::between(1.0, 2.0), false),
            (DirectedGeodesic::between(-2.0, 0.5), DirectedGeodesic::between(0.0, 3.0), true),
            (DirectedGeodesic::between(-2.0, -1.0), DirectedGeodesic::between(0.0, 3.0), false),
            (DirectedGeodesic::vertical_up(0.0), DirectedGeodesic::vertical_up(1.0), false),
        ];
        for (g1, g2, want) in cases {
            assert_eq!(linked(&g1, &g2), want, "{g1} vs {g2}");
            assert_eq!(intersect(&g1, &g2).unwrap().is_some(), want);
        }
    }

    #[test]
    fn forward_angle_examples() {
        let up = DirectedGeodesic::vertical_up(0.0);
        let right = DirectedGeodesic::between(-1.0, 1.0);
        let i = PlanePoint::I;
        let a = forward_angle(&up, &right, i).unwrap();
        assert!((a - PI / 2.0).abs() < 1e-12);
        assert_eq!(
            forward_angle(&right, &up, i).unwrap(),
            forward_angle(&up, &right, i).unwrap()
        );
        let rev = forward_angle(&up, &right.reversed(), i).unwrap();
        assert!((rev - (PI - a)).abs() < 1e-12);
        assert!(forward_angle(&up, &right, PlanePoint::new(5.0, 1.0)).is_err());
    }

    #[test]
    fn midpoint_examples() {
        let p = PlanePoint::I;
        let q = PlanePoint::new(0.0, E * E);
        let m = midpoint(p, q);
        assert!((m.x).abs() < 1e-12 && (m.y - E).abs() < 1e-10);
        assert_eq!(midpoint(p, p), p);
        let g = Isometry::new(2.0, -1.0, 1.0, 1.0).unwrap();
        let a = PlanePoint::new(0.4, 1.3);
        let b = PlanePoint::new(-0.7, 0.5);
        let lhs = g.apply(midpoint(a, b));
        let rhs = midpoint(g.apply(a), g.apply(b));
        assert!((lhs.x - rhs.x).abs() < 1e-10 && (lhs.y - rhs.y).abs() < 1e-10);
    }

    #[test]
    fn rotation_pi_examples() {
        let r = rotation_pi(PlanePoint::I);
        let want = Isometry::new(0.0, 1.0, -1.0, 0.0).unwrap();
        assert!(r.approx_eq_projective(&want, 1e-12));
        let u = PlanePoint::new(0.7, 1.9);
        let ru = rotation_pi(u);
        let sq = ru.compose(&ru);
        assert!(sq.approx_eq_projective(&Isometry::IDENTITY, 1e-12));
        let fixed = ru.apply(u);
        assert!((fixed.x - u.x).abs() < 1e-12 && (fixed.y - u.y).abs() < 1e-12);
        assert!((ru.trace()).abs() < 1e-12);
    }

    #[test]
    fn rotation_decomposition() {
        let x = diag_e(); // length 2, axis 0 -> inf
        let ax = x.axis().unwrap();
        let t = 0.37;
        let p = point_at(&ax, t);
        let s = point_at(&ax, t - 1.0); // half length behind
        assert!(compose_rotations_check(&x, p, s).unwrap());
        let wrong = point_at(&ax, t - 0.8);
        assert!(!compose_rotations_check(&x, p, wrong).unwrap());
        // conjugated configuration
        let g = Isometry::new(1.0, 1.0, 0.5, 2.0).unwrap();
        let xc = g.compose(&x).compose(&g.inverse());
        assert!(compose_rotations_check(&xc, g.apply(p), g.apply(s)).unwrap());
        assert!(matches!(
            compose_rotations_check(&x, PlanePoint::new(3.0, 1.0), s),
            Err(Error::PointNotOnAxis { .. })
        ));
    }

    #[test]
    fn beardon_examples() {
        let v = beardon_length(2.0, 2.0, PI / 2.0).unwrap();
        let expect = 2.0 * (1.0_f64.cosh().powi(2)).acosh();
        assert!((v - expect).abs() < 1e-12);
        assert!((expect - 3.026748013193008).abs() < 1e-12);
        let near_pi = beardon_length(1.3, 0.9, PI - 1e-9).unwrap();
        assert!((near_pi - 2.2).abs() < 1e-6);
        assert!(beardon_length(1.0, 1.0, 1e-9).is_err()); // product degenerates
    }

    #[test]
    fn beardon_matches_product_trace() {
        // explicit crossing pair: vertical axis and unit half-circle
        let x = diag_e();
        let y = Isometry::new(1.0_f64.cosh(), 1.0_f64.sinh(), 1.0_f64.sinh(), 1.0_f64.cosh())
            .unwrap();
        let ax = x.axis().unwrap();
        let ay = y.axis().unwrap();
        let p = intersect(&ax, &ay).unwrap().unwrap();
        let theta = forward_angle(&ax, &ay, p).unwrap();
        let product = x.compose(&y);
        let direct = product.translation_length().unwrap();
        let formula = beardon_length(2.0, 2.0, PI - theta).unwrap();
        assert!((direct - formula).abs() < 1e-10);
    }

    #[test]
    fn reflection_examples() {
        let r = reflection_about(&DirectedGeodesic::vertical_up(0.0));
        let p = r.apply(PlanePoint::new(0.7, 1.1));
        assert!((p.x + 0.7).abs() < 1e-12 && (p.y - 1.1).abs() < 1e-12);
        let circle = DirectedGeodesic::between(-2.0, 4.0);
        let rc = reflection_about(&circle);
        let q = PlanePoint::new(0.3, 2.3);
        let back = rc.apply(rc.apply(q));
        assert!((back.x - q.x).abs() < 1e-12 && (back.y - q.y).abs() < 1e-12);
        // fixes the line pointwise
        let on = point_at(&circle, 0.63);
        let fixed = rc.apply(on);
        assert!((fixed.x - on.x).abs() < 1e-10 && (fixed.y - on.y).abs() < 1e-10);
    }

    #[test]
    fn perpendicular_examples() {
        let g = DirectedGeodesic::vertical_up(0.0);
        let perp = perpendicular_at(&g, PlanePoint::I).unwrap();
        assert_eq!(perp.from, BoundaryPoint::Finite(-1.0));
        assert_eq!(perp.to, BoundaryPoint::Finite(1.0));
        let a = forward_angle(&g, &perp, PlanePoint::I).unwrap();
        assert!((a - PI / 2.0).abs() < 1e-12);
        assert!(perpendicular_at(&g, PlanePoint::new(2.0, 1.0)).is_err());
    }

    #[test]
    fn params_round_trip() {
        let g = DirectedGeodesic::between(-3.0, 7.0);
        for t in [-2.0, -0.3, 0.0, 1.7] {
            let p = point_at(&g, t);
            assert!(offset_from(&g, p) < 1e-10);
            assert!((param_of(&g, p).unwrap() - t).abs() < 1e-10);
        }
        // translation_along shifts parameters by its length
        let m = Isometry::translation_along(&g, 1.3);
        let p = point_at(&g, 0.2);
        let q = m.apply(p);
        assert!((param_of(&g, q).unwrap() - 1.5).abs() < 1e-10);
    }

    #[test]
    fn projective_sign_invariance() {
        let m = Isometry::new(2.0, 3.0, 1.0, 2.0).unwrap();
        let neg = Isometry {
            a: -m.a,
            b: -m.b,
            c: -m.c,
            d: -m.d,
        };
        assert_eq!(m.classify(), neg.classify());
        assert!((m.translation_length().unwrap() - neg.translation_length().unwrap()).abs() < 1e-14);
        let am = m.axis().unwrap();
        let an = neg.axis().unwrap();
        assert!((am.from.finite().unwrap() - an.from.finite().unwrap()).abs() < 1e-12);
        let p = PlanePoint::new(0.5, 1.5);
        let pm = m.apply(p);
        let pn = neg.apply(p);
        assert!((pm.x - pn.x).abs() < 1e-12 && (pm.y - pn.y).abs() < 1e-12);
    }

    #[test]
    fn conjugation_invariance_of_length() {
        let m = Isometry::new(3.0, 2.0, 1.0, 1.0).unwrap();
        let g = Isometry::new(1.0, -2.0, 0.25, 1.5).unwrap();
        let conj = g.compose(&m).compose(&g.inverse());
        assert!(
            (m.translation_length().unwrap() - conj.translation_length().unwrap()).abs() < 1e-10
        );
    }
}
