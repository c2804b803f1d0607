use std::f64::consts::{PI, TAU};
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::quadrature::integrate_adaptive;

pub type Point = [f64; 2];

/// A map from the boundary parameter `θ ∈ [0, 2π)` to the plane.
pub type BoundaryMap = Arc<dyn Fn(f64) -> Point + Send + Sync>;

const CONVEXITY_TOL: f64 = 1e-12;
const CONVEXITY_SAMPLES: usize = 720;

/// A counterclockwise boundary parameterised over `[0, 2π)`, smooth except
/// at the listed corner parameters.
#[derive(Clone)]
pub struct Curve {
    pub point: BoundaryMap,
    pub tangent: BoundaryMap,
    pub corners: Vec<f64>,
}

impl fmt::Debug for Curve {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Curve").field("corners", &self.corners).finish_non_exhaustive()
    }
}

#[derive(Debug, Clone)]
pub enum Boundary {
    /// Vertices in counterclockwise order.
    Polygon(Vec<Point>),
    Curve(Curve),
}

/// A bounded convex planar domain.
#[derive(Debug, Clone)]
pub struct ConvexDomain2D {
    boundary: Boundary,
    label: String,
}

fn cross(o: Point, a: Point, b: Point) -> f64 {
    (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])
}

fn check_convex_ccw(pts: &[Point]) -> Result<()> {
    let n = pts.len();
    if n < 3 {
        return Err(Error::Domain(format!("a polygon needs at least 3 vertices, got {n}")));
    }
    if pts.iter().flatten().any(|x| !x.is_finite()) {
        return Err(Error::Domain("vertex coordinates must be finite".into()));
    }
    let scale = pts.iter().flatten().fold(0.0f64, |s, x| s.max(x.abs())).max(1.0);
    let area = polygon_area(pts);
    if area <= CONVEXITY_TOL * scale * scale {
        return Err(Error::Domain(format!("boundary must be counterclockwise with nonzero area (signed area {area})")));
    }
    for i in 0..n {
        let c = cross(pts[i], pts[(i + 1) % n], pts[(i + 2) % n]);
        if c < -CONVEXITY_TOL * scale * scale {
            return Err(Error::Domain(format!("boundary is not convex at vertex {}", (i + 1) % n)));
        }
    }
    // a star polygon passes the local test but winds more than once
    let mut turn = 0.0;
    for i in 0..n {
        let a = pts[i];
        let b = pts[(i + 1) % n];
        let c = pts[(i + 2) % n];
        let (u, v) = ([b[0] - a[0], b[1] - a[1]], [c[0] - b[0], c[1] - b[1]]);
        turn += (u[0] * v[1] - u[1] * v[0]).atan2(u[0] * v[0] + u[1] * v[1]);
    }
    if (turn - TAU).abs() > 1e-6 {
        return Err(Error::Domain("boundary is not simple".into()));
    }
    Ok(())
}

pub(crate) fn polygon_area(pts: &[Point]) -> f64 {
    let n = pts.len();
    0.5 * (0..n)
        .map(|i| {
            let (a, b) = (pts[i], pts[(i + 1) % n]);
            a[0] * b[1] - a[1] * b[0]
        })
        .sum::<f64>()
}

fn polygon_perimeter(pts: &[Point]) -> f64 {
    let n = pts.len();
    (0..n).map(|i| dist(pts[i], pts[(i + 1) % n])).sum()
}

pub(crate) fn dist(a: Point, b: Point) -> f64 {
    (a[0] - b[0]).hypot(a[1] - b[1])
}

impl ConvexDomain2D {
    /// Convex polygon with counterclockwise vertices.
    pub fn polygon(vertices: Vec<Point>) -> Result<Self> {
        check_convex_ccw(&vertices)?;
        Ok(Self { boundary: Boundary::Polygon(vertices), label: "polygon".into() })
    }

    /// Smooth (or piecewise smooth) convex boundary. Convexity is checked on
    /// a fine sample of the curve.
    pub fn curve(label: impl Into<String>, point: BoundaryMap, tangent: BoundaryMap, mut corners: Vec<f64>) -> Result<Self> {
        if corners.iter().any(|&c| !(0.0..TAU).contains(&c)) {
            return Err(Error::Domain("corner parameters must lie in [0, 2π)".into()));
        }
        corners.sort_by(f64::total_cmp);
        let samples: Vec<Point> = (0..CONVEXITY_SAMPLES).map(|i| point(TAU * i as f64 / CONVEXITY_SAMPLES as f64)).collect();
        check_convex_ccw(&samples)?;
        Ok(Self { boundary: Boundary::Curve(Curve { point, tangent, corners }), label: label.into() })
    }

    pub fn disk(radius: f64) -> Result<Self> {
        Self::ellipse(radius, radius).map(|d| d.with_label("disk"))
    }

    /// Ellipse with semi-axis `a` along x and `b` along y.
    pub fn ellipse(a: f64, b: f64) -> Result<Self> {
        if !(a > 0.0 && b > 0.0 && a.is_finite() && b.is_finite()) {
            return Err(Error::Domain(format!("semi-axes must be positive, got ({a}, {b})")));
        }
        Self::curve(
            "ellipse",
            Arc::new(move |t: f64| [a * t.cos(), b * t.sin()]),
            Arc::new(move |t: f64| [-a * t.sin(), b * t.cos()]),
            vec![],
        )
    }

    /// `B(0; r) ∩ {x < r − ε}`: a disk with a cap of height `ε` cut off by a
    /// vertical chord. The parameter is the polar angle about the origin.
    pub fn truncated_disk(radius: f64, eps: f64) -> Result<Self> {
        if !(radius > 0.0 && eps > 0.0 && eps < radius) {
            return Err(Error::Domain(format!("need 0 < ε < r, got r = {radius}, ε = {eps}")));
        }
        let x0 = radius - eps;
        let half = (x0 / radius).acos();
        let on_chord = move |t: f64| t <= half || t >= TAU - half;
        Self::curve(
            "truncated_disk",
            Arc::new(move |t: f64| if on_chord(t) { [x0, x0 * t.tan()] } else { [radius * t.cos(), radius * t.sin()] }),
            Arc::new(move |t: f64| {
                if on_chord(t) {
                    [0.0, x0 / (t.cos() * t.cos())]
                } else {
                    [-radius * t.sin(), radius * t.cos()]
                }
            }),
            vec![half, TAU - half],
        )
    }

    /// Axis-aligned rectangle `[0, w] × [0, h]`.
    pub fn rectangle(width: f64, height: f64) -> Result<Self> {
        Self::polygon(vec![[0.0, 0.0], [width, 0.0], [width, height], [0.0, height]]).map(|d| d.with_label("rectangle"))
    }

    pub fn square(side: f64) -> Result<Self> {
        Self::rectangle(side, side).map(|d| d.with_label("square"))
    }

    /// Regular `n`-gon centred at the origin with one vertex on the positive
    /// x-axis.
    pub fn regular_polygon(n: usize, circumradius: f64) -> Result<Self> {
        if n < 3 {
            return Err(Error::Domain(format!("a polygon needs at least 3 vertices, got {n}")));
        }
        let pts = (0..n)
            .map(|i| {
                let t = TAU * i as f64 / n as f64;
                [circumradius * t.cos(), circumradius * t.sin()]
            })
            .collect();
        Self::polygon(pts).map(|d| d.with_label("regular_polygon"))
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn boundary(&self) -> &Boundary {
        &self.boundary
    }

    pub fn polygon_vertices(&self) -> Option<&[Point]> {
        match &self.boundary {
            Boundary::Polygon(p) => Some(p),
            Boundary::Curve(_) => None,
        }
    }

    /// The domain dilated by `alpha` about the origin.
    pub fn scaled(&self, alpha: f64) -> Result<Self> {
        if !(alpha > 0.0 && alpha.is_finite()) {
            return Err(Error::Domain(format!("scale factor must be positive, got {alpha}")));
        }
        let boundary = match &self.boundary {
            Boundary::Polygon(p) => Boundary::Polygon(p.iter().map(|v| [alpha * v[0], alpha * v[1]]).collect()),
            Boundary::Curve(c) => {
                let (p, t) = (c.point.clone(), c.tangent.clone());
                Boundary::Curve(Curve {
                    point: Arc::new(move |s| {
                        let q = p(s);
                        [alpha * q[0], alpha * q[1]]
                    }),
                    tangent: Arc::new(move |s| {
                        let q = t(s);
                        [alpha * q[0], alpha * q[1]]
                    }),
                    corners: c.corners.clone(),
                })
            }
        };
        Ok(Self { boundary, label: self.label.clone() })
    }

    /// Area centroid; an interior point for any convex domain.
    pub fn centroid(&self) -> Point {
        let pts = match &self.boundary {
            Boundary::Polygon(p) => p.clone(),
            Boundary::Curve(c) => (0..4096).map(|i| (c.point)(TAU * i as f64 / 4096.0)).collect(),
        };
        let n = pts.len();
        let (mut cx, mut cy, mut a2) = (0.0, 0.0, 0.0);
        for i in 0..n {
            let (p, q) = (pts[i], pts[(i + 1) % n]);
            let w = p[0] * q[1] - q[0] * p[1];
            a2 += w;
            cx += (p[0] + q[0]) * w;
            cy += (p[1] + q[1]) * w;
        }
        [cx / (3.0 * a2), cy / (3.0 * a2)]
    }

    /// Boundary point hit by the ray from interior point `c` in direction
    /// `phi`.
    pub fn ray_hit(&self, c: Point, phi: f64) -> Point {
        RayCaster::new(self, c).hit(phi)
    }

    /// Distance from `p` to the boundary along the ray from the centroid.
    /// Zero exactly when `p` is on the boundary.
    pub fn radial_boundary_gap(&self, p: Point) -> f64 {
        let c = self.centroid();
        let phi = (p[1] - c[1]).atan2(p[0] - c[0]);
        dist(p, self.ray_hit(c, phi))
    }

    pub fn diameter(&self) -> f64 {
        let pts: Vec<Point> = match &self.boundary {
            Boundary::Polygon(p) => p.clone(),
            Boundary::Curve(c) => (0..720).map(|i| (c.point)(TAU * i as f64 / 720.0)).collect(),
        };
        let mut d = 0.0f64;
        for (i, a) in pts.iter().enumerate() {
            for b in &pts[i + 1..] {
                d = d.max(dist(*a, *b));
            }
        }
        d
    }
}

/// `(area, perimeter)`: exact for polygons, adaptive quadrature for curves.
pub fn shape_metrics(domain: &ConvexDomain2D) -> Result<(f64, f64)> {
    match &domain.boundary {
        Boundary::Polygon(p) => Ok((polygon_area(p), polygon_perimeter(p))),
        Boundary::Curve(c) => {
            let mut cuts = vec![0.0];
            cuts.extend(c.corners.iter().copied().filter(|&t| t > 0.0));
            cuts.push(TAU);
            let (mut area, mut perim) = (0.0, 0.0);
            for w in cuts.windows(2) {
                area += integrate_adaptive(
                    |t| {
                        let (p, d) = ((c.point)(t), (c.tangent)(t));
                        0.5 * (p[0] * d[1] - p[1] * d[0])
                    },
                    w[0],
                    w[1],
                    1e-12,
                )?;
                perim += integrate_adaptive(|t| (c.tangent)(t)[0].hypot((c.tangent)(t)[1]), w[0], w[1], 1e-12)?;
            }
            Ok((area, perim))
        }
    }
}

/// Ray casting from a fixed interior point.
pub(crate) struct RayCaster<'a> {
    domain: &'a ConvexDomain2D,
    c: Point,
    /// For curves: sampled parameters with unwrapped polar angles about `c`.
    samples: Vec<(f64, f64)>,
}

const RAY_SAMPLES: usize = 1024;

impl<'a> RayCaster<'a> {
    pub(crate) fn new(domain: &'a ConvexDomain2D, c: Point) -> Self {
        let mut samples = Vec::new();
        if let Boundary::Curve(curve) = &domain.boundary {
            let mut params: Vec<f64> = (0..RAY_SAMPLES).map(|i| TAU * i as f64 / RAY_SAMPLES as f64).collect();
            params.extend(curve.corners.iter().copied());
            params.sort_by(f64::total_cmp);
            params.dedup();
            params.push(TAU);
            let mut prev = f64::NAN;
            for t in params {
                let p = (curve.point)(t);
                let mut a = (p[1] - c[1]).atan2(p[0] - c[0]);
                if prev.is_finite() {
                    while a < prev - PI {
                        a += TAU;
                    }
                    while a > prev + PI {
                        a -= TAU;
                    }
                }
                samples.push((t, a));
                prev = a;
            }
        }
        Self { domain, c, samples }
    }

    pub(crate) fn hit(&self, phi: f64) -> Point {
        let c = self.c;
        let d = [phi.cos(), phi.sin()];
        match &self.domain.boundary {
            Boundary::Polygon(p) => {
                let n = p.len();
                let mut best = f64::INFINITY;
                for i in 0..n {
                    let (a, b) = (p[i], p[(i + 1) % n]);
                    let e = [b[0] - a[0], b[1] - a[1]];
                    let den = d[0] * e[1] - d[1] * e[0];
                    if den.abs() < 1e-300 {
                        continue;
                    }
                    let w = [a[0] - c[0], a[1] - c[1]];
                    let t = (w[0] * e[1] - w[1] * e[0]) / den;
                    let s = (w[0] * d[1] - w[1] * d[0]) / den;
                    if t > 0.0 && (-1e-12..=1.0 + 1e-12).contains(&s) && t < best {
                        best = t;
                    }
                }
                [c[0] + best * d[0], c[1] + best * d[1]]
            }
            Boundary::Curve(curve) => {
                let a0 = self.samples[0].1;
                let mut target = phi;
                while target < a0 {
                    target += TAU;
                }
                while target >= a0 + TAU {
                    target -= TAU;
                }
                let i = self.samples.partition_point(|s| s.1 <= target).clamp(1, self.samples.len() - 1);
                let (mut lo, mut hi) = (self.samples[i - 1].0, self.samples[i].0);
                // the side of the ray: positive once the point has turned past phi
                let side = |t: f64| {
                    let p = (curve.point)(t);
                    d[0] * (p[1] - c[1]) - d[1] * (p[0] - c[0])
                };
                for _ in 0..200 {
                    let mid = 0.5 * (lo + hi);
                    if mid <= lo || mid >= hi {
                        break;
                    }
                    if side(mid) < 0.0 {
                        lo = mid;
                    } else {
                        hi = mid;
                    }
                }
                let (pl, ph) = ((curve.point)(lo), (curve.point)(hi));
                if side(lo).abs() <= side(hi).abs() {
                    pl
                } else {
                    ph
                }
            }
        }
    }
}
