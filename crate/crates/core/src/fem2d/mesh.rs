use std::collections::HashMap;
use std::f64::consts::{FRAC_PI_3, TAU};
use std::io::{BufRead, Write};

use serde::{Deserialize, Serialize};

use super::domain::{dist, polygon_area, Boundary, ConvexDomain2D, Point, RayCaster};
use crate::error::{Error, Result};

/// A conforming triangulation with boundary-vertex marking.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Mesh2D {
    pub vertices: Vec<Point>,
    /// Counterclockwise vertex triples.
    pub triangles: Vec<[usize; 3]>,
    pub boundary: Vec<bool>,
    /// Longest edge.
    pub h: f64,
}

fn signed_area(p: Point, q: Point, r: Point) -> f64 {
    0.5 * ((q[0] - p[0]) * (r[1] - p[1]) - (q[1] - p[1]) * (r[0] - p[0]))
}

impl Mesh2D {
    /// Build a mesh from raw parts, marking as boundary every vertex on an
    /// edge that belongs to a single triangle.
    pub fn from_parts(vertices: Vec<Point>, triangles: Vec<[usize; 3]>) -> Result<Self> {
        let n = vertices.len();
        if triangles.iter().flatten().any(|&i| i >= n) {
            return Err(Error::Mesh("triangle refers to a missing vertex".into()));
        }
        let mut boundary = vec![false; n];
        for ((a, b), count) in edge_counts(&triangles) {
            if count == 1 {
                boundary[a] = true;
                boundary[b] = true;
            }
        }
        let mut mesh = Self { vertices, triangles, boundary, h: 0.0 };
        mesh.h = mesh.max_edge();
        Ok(mesh)
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn interior_count(&self) -> usize {
        self.boundary.iter().filter(|b| !**b).count()
    }

    pub fn triangle_area(&self, t: usize) -> f64 {
        let [a, b, c] = self.triangles[t];
        signed_area(self.vertices[a], self.vertices[b], self.vertices[c])
    }

    pub fn area(&self) -> f64 {
        (0..self.triangles.len()).map(|t| self.triangle_area(t)).sum()
    }

    fn max_edge(&self) -> f64 {
        self.triangles
            .iter()
            .flat_map(|t| (0..3).map(move |i| (t[i], t[(i + 1) % 3])))
            .map(|(a, b)| dist(self.vertices[a], self.vertices[b]))
            .fold(0.0, f64::max)
    }

    /// Smallest interior angle over all triangles, in degrees.
    pub fn min_angle_degrees(&self) -> f64 {
        let mut worst = 180.0f64;
        for t in &self.triangles {
            for i in 0..3 {
                let (p, q, r) = (self.vertices[t[i]], self.vertices[t[(i + 1) % 3]], self.vertices[t[(i + 2) % 3]]);
                let (u, v) = ([q[0] - p[0], q[1] - p[1]], [r[0] - p[0], r[1] - p[1]]);
                let ang = (u[0] * v[1] - u[1] * v[0]).atan2(u[0] * v[0] + u[1] * v[1]).abs();
                worst = worst.min(ang.to_degrees());
            }
        }
        worst
    }

    /// Check orientation, conformity and boundary marking.
    pub fn validate(&self) -> Result<()> {
        for (i, _) in self.triangles.iter().enumerate() {
            if self.triangle_area(i) <= 0.0 {
                return Err(Error::Mesh(format!("triangle {i} is not positively oriented")));
            }
        }
        let mut directed: HashMap<(usize, usize), usize> = HashMap::new();
        for t in &self.triangles {
            for i in 0..3 {
                *directed.entry((t[i], t[(i + 1) % 3])).or_default() += 1;
            }
        }
        if directed.values().any(|&c| c > 1) {
            return Err(Error::Mesh("an edge is used twice with the same orientation".into()));
        }
        for ((a, b), count) in edge_counts(&self.triangles) {
            if count > 2 {
                return Err(Error::Mesh(format!("edge ({a}, {b}) is shared by {count} triangles")));
            }
            if count == 1 && !(self.boundary[a] && self.boundary[b]) {
                return Err(Error::Mesh(format!("boundary edge ({a}, {b}) has an unmarked end")));
            }
        }
        if self.interior_count() == 0 {
            return Err(Error::Mesh("mesh has no interior vertex".into()));
        }
        Ok(())
    }

    /// Vertex-to-vertex adjacency through edges, sorted.
    pub fn neighbours(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.vertices.len()];
        for t in &self.triangles {
            for i in 0..3 {
                let (a, b) = (t[i], t[(i + 1) % 3]);
                adj[a].push(b);
                adj[b].push(a);
            }
        }
        for list in &mut adj {
            list.sort_unstable();
            list.dedup();
        }
        adj
    }

    pub fn scaled(&self, alpha: f64) -> Self {
        Self {
            vertices: self.vertices.iter().map(|p| [alpha * p[0], alpha * p[1]]).collect(),
            triangles: self.triangles.clone(),
            boundary: self.boundary.clone(),
            h: alpha * self.h,
        }
    }

    /// This mesh together with its reflection across the line `x = axis`,
    /// glued along the vertices that lie exactly on the line. Glued vertices
    /// become interior unless they also lie on an outer boundary edge.
    pub fn mirrored_union(&self, axis: f64) -> Result<Self> {
        let n = self.vertices.len();
        let on_axis: Vec<bool> = self.vertices.iter().map(|p| p[0] == axis).collect();
        if on_axis.iter().filter(|b| **b).count() < 2 {
            return Err(Error::Mesh(format!("fewer than two vertices lie on x = {axis}")));
        }
        let mut vertices = self.vertices.clone();
        let mut image = vec![0usize; n];
        for (i, p) in self.vertices.iter().enumerate() {
            if on_axis[i] {
                image[i] = i;
            } else {
                image[i] = vertices.len();
                vertices.push([2.0 * axis - p[0], p[1]]);
            }
        }
        let mut triangles = self.triangles.clone();
        // reflection reverses orientation
        triangles.extend(self.triangles.iter().map(|t| [image[t[0]], image[t[2]], image[t[1]]]));
        let mesh = Self::from_parts(vertices, triangles)?;
        mesh.validate()?;
        Ok(mesh)
    }

    /// Plain-text OFF: header, counts, `x y 0` lines, `3 a b c` lines.
    pub fn write_off<W: Write>(&self, mut w: W) -> Result<()> {
        writeln!(w, "OFF")?;
        writeln!(w, "{} {} 0", self.vertices.len(), self.triangles.len())?;
        for p in &self.vertices {
            writeln!(w, "{:?} {:?} 0", p[0], p[1])?;
        }
        for t in &self.triangles {
            writeln!(w, "3 {} {} {}", t[0], t[1], t[2])?;
        }
        Ok(())
    }

    pub fn read_off<R: BufRead>(r: R) -> Result<Self> {
        let bad = |msg: &str| Error::Mesh(format!("malformed OFF: {msg}"));
        let mut lines = r.lines().map(|l| l.map_err(Error::from)).filter(|l| {
            l.as_ref().map_or(true, |s| !s.trim().is_empty() && !s.trim_start().starts_with('#'))
        });
        let header = lines.next().ok_or_else(|| bad("empty input"))??;
        if header.trim() != "OFF" {
            return Err(bad("missing OFF header"));
        }
        let counts = lines.next().ok_or_else(|| bad("missing counts"))??;
        let counts: Vec<usize> = counts.split_whitespace().map(|s| s.parse().map_err(|_| bad("bad count"))).collect::<Result<_>>()?;
        let (nv, nt) = match counts.as_slice() {
            [nv, nt, ..] => (*nv, *nt),
            _ => return Err(bad("counts line needs two numbers")),
        };
        let mut vertices = Vec::with_capacity(nv);
        for _ in 0..nv {
            let l = lines.next().ok_or_else(|| bad("too few vertices"))??;
            let xs: Vec<f64> = l.split_whitespace().map(|s| s.parse().map_err(|_| bad("bad coordinate"))).collect::<Result<_>>()?;
            if xs.len() < 2 {
                return Err(bad("vertex needs two coordinates"));
            }
            vertices.push([xs[0], xs[1]]);
        }
        let mut triangles = Vec::with_capacity(nt);
        for _ in 0..nt {
            let l = lines.next().ok_or_else(|| bad("too few faces"))??;
            let ix: Vec<usize> = l.split_whitespace().map(|s| s.parse().map_err(|_| bad("bad index"))).collect::<Result<_>>()?;
            if ix.len() != 4 || ix[0] != 3 {
                return Err(bad("faces must be triangles"));
            }
            triangles.push([ix[1], ix[2], ix[3]]);
        }
        Self::from_parts(vertices, triangles)
    }
}

fn edge_counts(triangles: &[[usize; 3]]) -> HashMap<(usize, usize), usize> {
    let mut counts = HashMap::new();
    for t in triangles {
        for i in 0..3 {
            let (a, b) = (t[i], t[(i + 1) % 3]);
            *counts.entry((a.min(b), a.max(b))).or_default() += 1;
        }
    }
    counts
}

#[derive(Clone, Copy, PartialEq, Eq, Hash)]
enum NodeKey {
    Centre,
    Spoke(usize, usize),
    Inner(usize, usize, usize),
}

/// Triangulate a convex domain with every edge at most `target_h`.
///
/// The domain is split into a fan of macro triangles from its centroid. The
/// fan's outer vertices include every corner, with extra directions so that
/// no sector is wider than 60°. Each macro triangle is subdivided uniformly
/// `n × n`. For curved boundaries the fan is then pushed radially onto the
/// true boundary: a point at fraction `s` of the way from the centroid to the
/// macro edge goes to fraction `s` of the way to the boundary along the same
/// ray, so boundary vertices land on the curve. One Jacobi pass of Laplacian
/// smoothing over the interior vertices follows.
pub fn triangulate_convex(domain: &ConvexDomain2D, target_h: f64) -> Result<Mesh2D> {
    let diameter = domain.diameter();
    if !(target_h >= 1e-3 && target_h <= diameter) {
        return Err(Error::Domain(format!("target_h must lie in [1e-3, {diameter}], got {target_h}")));
    }
    let c = domain.centroid();
    let caster = RayCaster::new(domain, c);
    if let Boundary::Polygon(p) = domain.boundary() {
        if let Some(mesh) = snapped_polygon_mesh(domain, p, c, &caster, target_h)? {
            return Ok(mesh);
        }
    }
    let anchors = macro_vertices(domain, c, &caster);
    refine_until(target_h, &anchors, c, |n| build_fan(domain, c, &caster, &anchors, n, &[]))
}

fn refine_until(
    target_h: f64,
    anchors: &[(f64, Point)],
    c: Point,
    mut build: impl FnMut(usize) -> Result<Option<Mesh2D>>,
) -> Result<Mesh2D> {
    let mut longest = 0.0f64;
    for i in 0..anchors.len() {
        let (p, q) = (anchors[i].1, anchors[(i + 1) % anchors.len()].1);
        longest = longest.max(dist(p, q)).max(dist(c, p));
    }
    let mut n = ((longest / target_h).ceil() as usize).max(1);
    loop {
        let mesh = build(n)?.ok_or_else(|| Error::Mesh("fan construction failed".into()))?;
        if mesh.h <= target_h {
            return Ok(mesh);
        }
        n = (n + 1).max((n as f64 * mesh.h / target_h).ceil() as usize);
    }
}

/// Polygons with many corners: sectors span several corners and the corners
/// inside a sector are snapped onto the nearest boundary node. `None` if the
/// snapped mesh does not reproduce the polygon.
fn snapped_polygon_mesh(
    domain: &ConvexDomain2D,
    poly: &[Point],
    c: Point,
    caster: &RayCaster,
    target_h: f64,
) -> Result<Option<Mesh2D>> {
    let mut corners: Vec<(f64, Point)> = poly.iter().map(|&p| (angle_about(c, p), p)).collect();
    corners.sort_by(|a, b| a.0.total_cmp(&b.0));
    // greedily keep the farthest corner within 60° of the last kept one
    let mut keep = vec![0usize];
    let mut i = 0;
    while i + 1 < corners.len() {
        let base = corners[*keep.last().expect("nonempty")].0;
        let mut j = i + 1;
        while j + 1 < corners.len() && corners[j + 1].0 - base <= FRAC_PI_3 {
            j += 1;
        }
        keep.push(j);
        i = j;
    }
    if keep.len() == corners.len() {
        return Ok(None);
    }
    let extra: Vec<(f64, Point)> =
        (0..corners.len()).filter(|j| !keep.contains(j)).map(|j| corners[j]).collect();
    let kept: Vec<(f64, Point)> = keep.iter().map(|&j| corners[j]).collect();
    let anchors = fill_gaps(&kept, caster);
    let area = polygon_area(poly);
    let mesh = refine_until(target_h, &anchors, c, |n| {
        let m = match build_fan(domain, c, caster, &anchors, n, &extra) {
            Ok(m) => m,
            Err(Error::Mesh(_)) => return Ok(None),
            Err(e) => return Err(e),
        };
        Ok(m.filter(|m| (m.area() - area).abs() <= 1e-12 * area))
    });
    match mesh {
        Ok(m) => Ok(Some(m)),
        Err(Error::Mesh(_)) => Ok(None),
        Err(e) => Err(e),
    }
}

fn angle_about(c: Point, p: Point) -> f64 {
    (p[1] - c[1]).atan2(p[0] - c[0])
}

/// Fan directions (unwrapped, increasing) and their exact boundary points.
fn macro_vertices(domain: &ConvexDomain2D, c: Point, caster: &RayCaster) -> Vec<(f64, Point)> {
    let mut corners: Vec<Point> = match domain.boundary() {
        Boundary::Polygon(p) => p.clone(),
        Boundary::Curve(curve) => curve.corners.iter().map(|&t| (curve.point)(t)).collect(),
    };
    if corners.is_empty() {
        corners.push(caster.hit(0.0));
    }
    let mut anchors: Vec<(f64, Point)> = corners.iter().map(|&p| (angle_about(c, p), p)).collect();
    anchors.sort_by(|a, b| a.0.total_cmp(&b.0));
    fill_gaps(&anchors, caster)
}

/// Insert ray directions so that no gap between anchors exceeds 60°.
fn fill_gaps(anchors: &[(f64, Point)], caster: &RayCaster) -> Vec<(f64, Point)> {
    let mut out = Vec::new();
    for i in 0..anchors.len() {
        let (phi, p) = anchors[i];
        let next = if i + 1 < anchors.len() { anchors[i + 1].0 } else { anchors[0].0 + TAU };
        out.push((phi, p));
        let gap = next - phi;
        let pieces = (gap / FRAC_PI_3 - 1e-9).ceil().max(1.0) as usize;
        for j in 1..pieces {
            let a = phi + gap * j as f64 / pieces as f64;
            out.push((a, caster.hit(a)));
        }
    }
    out
}

/// The subdivided fan. Corners in `snap` are not fan vertices; each takes
/// the place of the boundary node nearest to it in angle. `None` if two
/// corners claim the same node.
fn build_fan(
    domain: &ConvexDomain2D,
    c: Point,
    caster: &RayCaster,
    anchors: &[(f64, Point)],
    n: usize,
    snap: &[(f64, Point)],
) -> Result<Option<Mesh2D>> {
    let sectors = anchors.len();
    let curved = matches!(domain.boundary(), Boundary::Curve(_)) || !snap.is_empty();
    let mut index: HashMap<NodeKey, usize> = HashMap::new();
    let mut vertices: Vec<Point> = Vec::new();
    let mut boundary: Vec<bool> = Vec::new();
    let mut triangles = Vec::new();
    let nf = n as f64;

    for s in 0..sectors {
        let (p, q) = (anchors[s].1, anchors[(s + 1) % sectors].1);
        let mut local = vec![vec![usize::MAX; n + 1]; n + 1];
        for a in 0..=n {
            for b in 0..=(n - a) {
                let key = if a + b == 0 {
                    NodeKey::Centre
                } else if b == 0 {
                    NodeKey::Spoke(s, a)
                } else if a == 0 {
                    NodeKey::Spoke((s + 1) % sectors, b)
                } else {
                    NodeKey::Inner(s, a, b)
                };
                let id = *index.entry(key).or_insert_with(|| {
                    let level = (a + b) as f64 / nf;
                    let pos = if a + b == 0 {
                        c
                    } else if a + b == n && b == 0 {
                        p
                    } else if a + b == n && a == 0 {
                        q
                    } else {
                        let raw = [
                            c[0] + (a as f64 * (p[0] - c[0]) + b as f64 * (q[0] - c[0])) / nf,
                            c[1] + (a as f64 * (p[1] - c[1]) + b as f64 * (q[1] - c[1])) / nf,
                        ];
                        if curved {
                            let hit = caster.hit(angle_about(c, raw));
                            if a + b == n {
                                hit
                            } else {
                                [c[0] + level * (hit[0] - c[0]), c[1] + level * (hit[1] - c[1])]
                            }
                        } else {
                            raw
                        }
                    };
                    vertices.push(pos);
                    boundary.push(a + b == n);
                    vertices.len() - 1
                });
                local[a][b] = id;
            }
        }
        for a in 0..n {
            for b in 0..(n - a) {
                triangles.push([local[a][b], local[a + 1][b], local[a][b + 1]]);
                if a + b + 2 <= n {
                    triangles.push([local[a + 1][b], local[a + 1][b + 1], local[a][b + 1]]);
                }
            }
        }
    }

    if !snap.is_empty() {
        let fixed: Vec<usize> = (0..sectors).map(|s| index[&NodeKey::Spoke(s, n)]).collect();
        let outer: Vec<(usize, f64)> = (0..vertices.len())
            .filter(|&v| boundary[v] && !fixed.contains(&v))
            .map(|v| (v, angle_about(c, vertices[v])))
            .collect();
        let mut taken = Vec::with_capacity(snap.len());
        for &(phi, p) in snap {
            let gap = |a: f64| {
                let d = (a - phi).rem_euclid(TAU);
                d.min(TAU - d)
            };
            let Some(&(v, _)) = outer.iter().min_by(|a, b| gap(a.1).total_cmp(&gap(b.1))) else {
                return Ok(None);
            };
            if taken.contains(&v) {
                return Ok(None);
            }
            taken.push(v);
            vertices[v] = p;
        }
    }

    let mut mesh = Mesh2D { vertices, triangles, boundary, h: 0.0 };
    smooth_once(&mut mesh);
    mesh.h = mesh.max_edge();
    let floor = 1e-8 * mesh.h * mesh.h;
    if let Some(t) = (0..mesh.triangles.len()).find(|&t| mesh.triangle_area(t) <= floor) {
        return Err(Error::Mesh(format!("triangle {t} is degenerate after smoothing (area {})", mesh.triangle_area(t))));
    }
    Ok(Some(mesh))
}

/// One Jacobi sweep: every interior vertex moves to the mean of its
/// neighbours' old positions.
fn smooth_once(mesh: &mut Mesh2D) {
    let adj = mesh.neighbours();
    let old = mesh.vertices.clone();
    for (i, nb) in adj.iter().enumerate() {
        if mesh.boundary[i] || nb.is_empty() {
            continue;
        }
        let k = nb.len() as f64;
        let sx: f64 = nb.iter().map(|&j| old[j][0]).sum();
        let sy: f64 = nb.iter().map(|&j| old[j][1]).sum();
        mesh.vertices[i] = [sx / k, sy / k];
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn disk_boundary_on_the_circle() {
        let d = ConvexDomain2D::disk(1.0).unwrap();
        let m = triangulate_convex(&d, 0.1).unwrap();
        m.validate().unwrap();
        assert!(m.h <= 0.1);
        for (p, &b) in m.vertices.iter().zip(&m.boundary) {
            if b {
                assert!((p[0].hypot(p[1]) - 1.0).abs() < 1e-10);
            }
        }
        assert!(m.min_angle_degrees() >= 20.0, "{}", m.min_angle_degrees());
    }

    #[test]
    fn many_cornered_polygon_keeps_every_corner() {
        let d = ConvexDomain2D::regular_polygon(16, 1.0).unwrap();
        let m = triangulate_convex(&d, 0.08).unwrap();
        m.validate().unwrap();
        let want: f64 = 8.0 * (std::f64::consts::TAU / 16.0).sin();
        assert!((m.area() - want).abs() < 1e-12);
        for corner in d.polygon_vertices().unwrap() {
            assert!(m.vertices.iter().zip(&m.boundary).any(|(p, &b)| b && p == corner));
        }
        assert!(m.min_angle_degrees() >= 15.0, "{}", m.min_angle_degrees());
    }

    #[test]
    fn square_tiles_exactly() {
        let m = triangulate_convex(&ConvexDomain2D::square(1.0).unwrap(), 0.5).unwrap();
        m.validate().unwrap();
        assert!((m.area() - 1.0).abs() < 1e-10);
        assert!(m.h <= 0.5);
    }

    #[test]
    fn ellipse_area_converges() {
        let m = triangulate_convex(&ConvexDomain2D::ellipse(1.0, 1.1).unwrap(), 0.05).unwrap();
        m.validate().unwrap();
        assert!((m.area() - PI * 1.1).abs() < 1e-3);
    }

    #[test]
    fn deterministic_and_rejects_bad_h() {
        let d = ConvexDomain2D::regular_polygon(7, 1.0).unwrap();
        assert_eq!(triangulate_convex(&d, 0.2).unwrap(), triangulate_convex(&d, 0.2).unwrap());
        assert!(triangulate_convex(&d, 1e-4).is_err());
        assert!(triangulate_convex(&d, 10.0).is_err());
    }

    #[test]
    fn truncated_disk_and_union() {
        let eps = 0.05;
        let d = ConvexDomain2D::truncated_disk(1.0, eps).unwrap();
        let m = triangulate_convex(&d, 0.1).unwrap();
        m.validate().unwrap();
        for (p, &b) in m.vertices.iter().zip(&m.boundary) {
            if b {
                assert!(d.radial_boundary_gap(*p) < 1e-10);
            }
        }
        let u = m.mirrored_union(1.0 - eps).unwrap();
        let glued = m.vertices.iter().filter(|p| p[0] == 1.0 - eps).count();
        assert_eq!(u.vertex_count(), 2 * m.vertex_count() - glued);
        assert!((u.area() - 2.0 * m.area()).abs() < 1e-12);
        // only the two chord ends stay on the boundary
        let glued_boundary = u.vertices.iter().zip(&u.boundary).filter(|(p, b)| p[0] == 1.0 - eps && **b).count();
        assert_eq!(glued_boundary, 2);
    }

    #[test]
    fn off_round_trip() {
        let m = triangulate_convex(&ConvexDomain2D::disk(1.0).unwrap(), 0.3).unwrap();
        let mut buf = Vec::new();
        m.write_off(&mut buf).unwrap();
        assert!(buf.starts_with(b"OFF\n"));
        let back = Mesh2D::read_off(&buf[..]).unwrap();
        assert_eq!(back.vertices, m.vertices);
        assert_eq!(back.triangles, m.triangles);
        assert_eq!(back.boundary, m.boundary);
        assert!(Mesh2D::read_off(&b"OFF\n1 1 0\n0 0 0\n3 0 0 0\n"[..]).is_ok());
        assert!(Mesh2D::read_off(&b"PLY\n"[..]).is_err());
    }
}
