//! Embedded polyhedra: ground truth for the development-side pipeline.
//!
//! ```json
//! { "vertices": { "a": [0, 0, 0], "b": [1, 0, 0], ... },
//!   "faces": [ ["a", "b", "c"], ... ] }
//! ```

use std::collections::BTreeMap;
use std::f64::consts::PI;

use indexmap::IndexMap;
use nalgebra::{Matrix3, Vector3};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::cmgeom::{fit_affine_map_3d, AffineMap3D};
use crate::development::{format, Development, DevelopmentFile, FaceRecord, VertexClassRecord};

/// Planarity tolerance, relative to the polyhedron's diameter.
pub const EPS_PLAN: f64 = 1e-9;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EmbeddedPolyhedron {
    pub vertices: IndexMap<String, [f64; 3]>,
    pub faces: Vec<Vec<String>>,
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum OracleError {
    #[error("face {face} is not planar (deviation {deviation:e})")]
    NonPlanarFace { face: usize, deviation: f64 },
    #[error("face {0} refers to unknown vertex {1:?}")]
    UnknownVertex(usize, String),
    #[error("face {0} has fewer than three corners")]
    DegenerateFace(usize),
    #[error("edge {0}-{1} lies on more than two faces")]
    NonManifoldEdge(String, String),
    #[error("affine map is degenerate (det = {0:e})")]
    DegenerateMap(f64),
    #[error("invalid generator parameters: {0}")]
    InvalidParams(String),
}

impl EmbeddedPolyhedron {
    pub fn new(vertices: IndexMap<String, [f64; 3]>, faces: Vec<Vec<String>>) -> Self {
        EmbeddedPolyhedron { vertices, faces }
    }

    pub fn point(&self, id: &str) -> Option<Vector3<f64>> {
        self.vertices.get(id).map(|p| Vector3::from(*p))
    }

    pub fn diameter(&self) -> f64 {
        let pts: Vec<Vector3<f64>> = self.vertices.values().map(|p| Vector3::from(*p)).collect();
        let mut d: f64 = 0.0;
        for i in 0..pts.len() {
            for j in i + 1..pts.len() {
                d = d.max((pts[i] - pts[j]).norm());
            }
        }
        d
    }

    pub fn distance(&self, a: &str, b: &str) -> Option<f64> {
        Some((self.point(a)? - self.point(b)?).norm())
    }

    fn face_points(&self, f: usize) -> Result<Vec<Vector3<f64>>, OracleError> {
        self.faces[f]
            .iter()
            .map(|id| self.point(id).ok_or_else(|| OracleError::UnknownVertex(f, id.clone())))
            .collect()
    }

    /// Largest distance of a corner from its face's best plane.
    pub fn check_planarity(&self) -> Result<(), OracleError> {
        let tol = EPS_PLAN * self.diameter().max(f64::MIN_POSITIVE);
        for f in 0..self.faces.len() {
            let pts = self.face_points(f)?;
            if pts.len() < 3 {
                return Err(OracleError::DegenerateFace(f));
            }
            let (normal, centroid) = newell(&pts);
            let deviation = pts.iter().map(|p| (p - centroid).dot(&normal).abs()).fold(0.0, f64::max);
            if deviation > tol {
                return Err(OracleError::NonPlanarFace { face: f, deviation });
            }
        }
        Ok(())
    }
}

/// Unit normal (Newell's method) and centroid of a polygon in space.
fn newell(pts: &[Vector3<f64>]) -> (Vector3<f64>, Vector3<f64>) {
    let m = pts.len();
    let mut n = Vector3::zeros();
    for i in 0..m {
        let (a, b) = (pts[i], pts[(i + 1) % m]);
        n.x += (a.y - b.y) * (a.z + b.z);
        n.y += (a.z - b.z) * (a.x + b.x);
        n.z += (a.x - b.x) * (a.y + b.y);
    }
    let centroid = pts.iter().sum::<Vector3<f64>>() / m as f64;
    (n.normalize(), centroid)
}

/// Flatten every face isometrically into its own plane.
///
/// Face `k` of the development is face `k` of `p` (id `f{k}`), and vertex
/// classes carry `p`'s vertex ids in `p`'s order.
pub fn extract_development(p: &EmbeddedPolyhedron) -> Result<Development, OracleError> {
    p.check_planarity()?;
    let mut faces = Vec::with_capacity(p.faces.len());
    let mut corners: IndexMap<String, Vec<(String, usize)>> =
        p.vertices.keys().map(|k| (k.clone(), Vec::new())).collect();
    let mut edge_slots: BTreeMap<(String, String), Vec<(String, usize)>> = BTreeMap::new();
    for (f, cycle) in p.faces.iter().enumerate() {
        let pts = p.face_points(f)?;
        let (normal, _) = newell(&pts);
        let e1 = (pts[1] - pts[0]).normalize();
        let e2 = normal.cross(&e1);
        let id = format!("f{f}");
        faces.push(FaceRecord {
            id: id.clone(),
            vertices: pts
                .iter()
                .map(|q| {
                    let d = q - pts[0];
                    [d.dot(&e1), d.dot(&e2)]
                })
                .collect(),
        });
        let m = cycle.len();
        for (i, v) in cycle.iter().enumerate() {
            corners.get_mut(v).expect("checked").push((id.clone(), i));
            let w = &cycle[(i + 1) % m];
            let key = if v < w { (v.clone(), w.clone()) } else { (w.clone(), v.clone()) };
            edge_slots.entry(key).or_default().push((id.clone(), i));
        }
    }
    let mut gluings = Vec::new();
    for ((a, b), slots) in edge_slots {
        match slots.len() {
            1 => {}
            2 => gluings.push((slots[0].clone(), slots[1].clone())),
            _ => return Err(OracleError::NonManifoldEdge(a, b)),
        }
    }
    let file = DevelopmentFile {
        faces,
        gluings,
        vertex_classes: corners
            .into_iter()
            .filter(|(_, c)| !c.is_empty())
            .map(|(id, corners)| VertexClassRecord { id, corners })
            .collect(),
    };
    Ok(format::from_file(file).expect("generated records resolve"))
}

pub fn apply_affine(p: &EmbeddedPolyhedron, a: &AffineMap3D) -> Result<EmbeddedPolyhedron, OracleError> {
    let det = a.det();
    let scale = a.linear.norm().powi(3).max(f64::MIN_POSITIVE);
    if det.abs() <= 1e-12 * scale {
        return Err(OracleError::DegenerateMap(det));
    }
    let image = EmbeddedPolyhedron {
        vertices: p
            .vertices
            .iter()
            .map(|(k, v)| {
                let q = a.apply(&Vector3::from(*v));
                (k.clone(), [q.x, q.y, q.z])
            })
            .collect(),
        faces: p.faces.clone(),
    };
    image.check_planarity()?;
    Ok(image)
}

/// Affine map carrying `p` onto `p2` vertex by vertex, if one exists within
/// `eps_aff` relative to the diameter of `p2`. `pairs` lists corresponding
/// vertex ids; `None` pairs equal ids.
pub fn oracle_affine_equivalent(
    p: &EmbeddedPolyhedron,
    p2: &EmbeddedPolyhedron,
    pairs: Option<&[(String, String)]>,
    eps_aff: f64,
) -> Option<AffineMap3D> {
    let default: Vec<(String, String)>;
    let pairs = match pairs {
        Some(x) => x,
        None => {
            default = p.vertices.keys().map(|k| (k.clone(), k.clone())).collect();
            &default
        }
    };
    if pairs.len() != p.vertices.len() || p.vertices.len() != p2.vertices.len() {
        return None;
    }
    let mut src = Vec::with_capacity(pairs.len());
    let mut dst = Vec::with_capacity(pairs.len());
    for (a, b) in pairs {
        src.push(p.point(a)?);
        dst.push(p2.point(b)?);
    }
    let (map, residual) = fit_affine_map_3d(&src, &dst).ok()?;
    let nondegenerate = map.det().abs() > 1e-12 * map.linear.norm().powi(3);
    (residual < eps_aff * p2.diameter() && nondegenerate).then_some(map)
}

fn poly_from(vertices: Vec<(String, [f64; 3])>, faces: Vec<Vec<String>>) -> EmbeddedPolyhedron {
    EmbeddedPolyhedron {
        vertices: vertices.into_iter().collect(),
        faces,
    }
}

fn ids(prefix: &str, n: usize) -> Vec<String> {
    (0..n).map(|i| format!("{prefix}{i}")).collect()
}

/// Point at distances `r` from `c[0..3]`, on the positive side of their plane.
fn trilaterate(c: [Vector3<f64>; 3], r: [f64; 3]) -> Option<Vector3<f64>> {
    let ex = (c[1] - c[0]).normalize();
    let i = ex.dot(&(c[2] - c[0]));
    let ey = ((c[2] - c[0]) - ex * i).normalize();
    let ez = ex.cross(&ey);
    let d = (c[1] - c[0]).norm();
    let j = ey.dot(&(c[2] - c[0]));
    let x = (r[0] * r[0] - r[1] * r[1] + d * d) / (2.0 * d);
    let y = (r[0] * r[0] - r[2] * r[2] + i * i + j * j) / (2.0 * j) - i * x / j;
    let z2 = r[0] * r[0] - x * x - y * y;
    if z2 <= 0.0 {
        return None;
    }
    Some(c[0] + ex * x + ey * y + ez * z2.sqrt())
}

/// n-gonal bipyramid: regular equator of circumradius `radius` in z = 0,
/// poles on the axis. `perturb = Some((k, len))` moves the north pole so
/// its distance to `e{k}` becomes `len`, keeping its distances to the two
/// equator neighbours of `e{k}`.
pub fn bipyramid(
    n: usize,
    radius: f64,
    south_height: f64,
    north_height: f64,
    perturb: Option<(usize, f64)>,
) -> Result<EmbeddedPolyhedron, OracleError> {
    if n < 3 || radius <= 0.0 || south_height <= 0.0 || north_height <= 0.0 {
        return Err(OracleError::InvalidParams(format!(
            "bipyramid needs n >= 3 and positive sizes, got n = {n}"
        )));
    }
    let e: Vec<Vector3<f64>> = (0..n)
        .map(|j| {
            let a = 2.0 * PI * j as f64 / n as f64;
            Vector3::new(radius * a.cos(), radius * a.sin(), 0.0)
        })
        .collect();
    let mut north = Vector3::new(0.0, 0.0, north_height);
    if let Some((k, len)) = perturb {
        if k >= n || len <= 0.0 {
            return Err(OracleError::InvalidParams(format!("cannot perturb edge to e{k}")));
        }
        let (prev, next) = ((k + n - 1) % n, (k + 1) % n);
        let c = [e[k], e[next], e[prev]];
        let r = [len, (north - e[next]).norm(), (north - e[prev]).norm()];
        let mut p = trilaterate(c, r)
            .ok_or_else(|| OracleError::InvalidParams(format!("no apex at distance {len} from e{k}")))?;
        if p.z < 0.0 {
            p = trilaterate([c[0], c[2], c[1]], [r[0], r[2], r[1]]).expect("mirror solution");
        }
        north = p;
    }
    let en = ids("e", n);
    let mut vertices = vec![
        ("s".to_string(), [0.0, 0.0, -south_height]),
        ("n".to_string(), [north.x, north.y, north.z]),
    ];
    vertices.extend(en.iter().zip(&e).map(|(id, p)| (id.clone(), [p.x, p.y, p.z])));
    let mut faces = Vec::new();
    for j in 0..n {
        let k = (j + 1) % n;
        faces.push(vec!["s".to_string(), en[k].clone(), en[j].clone()]);
        faces.push(vec!["n".to_string(), en[j].clone(), en[k].clone()]);
    }
    Ok(poly_from(vertices, faces))
}

/// Triangular bipyramid with all nine edges of length 1.
pub fn unit_bipyramid(perturb: Option<f64>) -> EmbeddedPolyhedron {
    let r = 1.0 / 3f64.sqrt();
    let h = (2.0f64 / 3.0).sqrt();
    bipyramid(3, r, h, h, perturb.map(|l| (0, l))).expect("valid parameters")
}

/// Right prism over a convex base polygon (counter-clockwise).
pub fn prism(base: &[[f64; 2]], height: f64) -> Result<EmbeddedPolyhedron, OracleError> {
    let n = base.len();
    if n < 3 || height <= 0.0 {
        return Err(OracleError::InvalidParams(format!(
            "prism needs at least 3 base corners and positive height, got {n}"
        )));
    }
    let (b, t) = (ids("b", n), ids("t", n));
    let mut vertices: Vec<(String, [f64; 3])> =
        b.iter().zip(base).map(|(id, p)| (id.clone(), [p[0], p[1], 0.0])).collect();
    vertices.extend(t.iter().zip(base).map(|(id, p)| (id.clone(), [p[0], p[1], height])));
    let mut faces = vec![b.iter().rev().cloned().collect::<Vec<_>>(), t.clone()];
    for j in 0..n {
        let k = (j + 1) % n;
        faces.push(vec![b[j].clone(), b[k].clone(), t[k].clone(), t[j].clone()]);
    }
    Ok(poly_from(vertices, faces))
}

pub fn regular_polygon(n: usize, radius: f64) -> Vec<[f64; 2]> {
    (0..n)
        .map(|j| {
            let a = 2.0 * PI * j as f64 / n as f64;
            [radius * a.cos(), radius * a.sin()]
        })
        .collect()
}

pub fn regular_prism(n: usize, height: f64) -> Result<EmbeddedPolyhedron, OracleError> {
    prism(&regular_polygon(n, 1.0), height)
}

pub fn unit_cube() -> EmbeddedPolyhedron {
    prism(&[[0.0, 0.0], [1.0, 0.0], [1.0, 1.0], [0.0, 1.0]], 1.0).expect("valid parameters")
}

/// Unit cube with the top tilted to `z = 1 + slope x`: two side faces become
/// trapezoids with parallel sides 1 and 1 + slope.
pub fn tilted_box(slope: f64) -> EmbeddedPolyhedron {
    let mut p = unit_cube();
    for (id, v) in p.vertices.iter_mut() {
        if id.starts_with('t') {
            v[2] = 1.0 + slope * v[0];
        }
    }
    p
}

/// n-gonal trapezohedron: 2n kites, two apices of valency n, 2n vertices of
/// valency 3. `h` is the half-height of the zig-zag rings.
pub fn trapezohedron(n: usize, h: f64) -> Result<EmbeddedPolyhedron, OracleError> {
    if n < 3 || h <= 0.0 {
        return Err(OracleError::InvalidParams(format!("trapezohedron needs n >= 3, got {n}")));
    }
    let c = (PI / n as f64).cos();
    let apex = h * (1.0 + c) / (1.0 - c);
    let (u, l) = (ids("u", n), ids("l", n));
    let mut vertices = vec![("n".to_string(), [0.0, 0.0, apex]), ("s".to_string(), [0.0, 0.0, -apex])];
    for j in 0..n {
        let a = 2.0 * PI * j as f64 / n as f64;
        vertices.push((u[j].clone(), [a.cos(), a.sin(), h]));
    }
    for j in 0..n {
        let a = 2.0 * PI * (j as f64 + 0.5) / n as f64;
        vertices.push((l[j].clone(), [a.cos(), a.sin(), -h]));
    }
    let mut faces = Vec::new();
    for j in 0..n {
        let k = (j + 1) % n;
        faces.push(vec!["n".to_string(), u[j].clone(), l[j].clone(), u[k].clone()]);
        faces.push(vec!["s".to_string(), l[k].clone(), u[k].clone(), l[j].clone()]);
    }
    Ok(poly_from(vertices, faces))
}

/// n-gonal antiprism: two regular n-gons twisted by π/n joined by 2n
/// triangles; every vertex has valency 4.
pub fn antiprism(n: usize, height: f64) -> Result<EmbeddedPolyhedron, OracleError> {
    if n < 3 || height <= 0.0 {
        return Err(OracleError::InvalidParams(format!("antiprism needs n >= 3, got {n}")));
    }
    let (b, t) = (ids("b", n), ids("t", n));
    let mut vertices = Vec::new();
    for j in 0..n {
        let a = 2.0 * PI * j as f64 / n as f64;
        vertices.push((b[j].clone(), [a.cos(), a.sin(), 0.0]));
    }
    for j in 0..n {
        let a = 2.0 * PI * (j as f64 + 0.5) / n as f64;
        vertices.push((t[j].clone(), [a.cos(), a.sin(), height]));
    }
    let mut faces = vec![b.iter().rev().cloned().collect::<Vec<_>>(), t.clone()];
    for j in 0..n {
        let k = (j + 1) % n;
        faces.push(vec![b[j].clone(), b[k].clone(), t[j].clone()]);
        faces.push(vec![t[j].clone(), b[k].clone(), t[k].clone()]);
    }
    Ok(poly_from(vertices, faces))
}

/// Convex suspension with equator on the unit circle at random angles (no
/// gap of 3π/4 or more) and poles at random heights, slightly off-axis.
pub fn random_convex_suspension(n: usize, seed: u64) -> Result<EmbeddedPolyhedron, OracleError> {
    if n < 3 {
        return Err(OracleError::InvalidParams(format!("suspension needs n >= 3, got {n}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let angles = loop {
        let mut a: Vec<f64> = (0..n).map(|_| rng.gen_range(0.0..2.0 * PI)).collect();
        a.sort_by(f64::total_cmp);
        let max_gap = (0..n)
            .map(|j| if j + 1 < n { a[j + 1] - a[j] } else { a[0] + 2.0 * PI - a[j] })
            .fold(0.0, f64::max);
        let min_gap = (0..n)
            .map(|j| if j + 1 < n { a[j + 1] - a[j] } else { a[0] + 2.0 * PI - a[j] })
            .fold(f64::INFINITY, f64::min);
        if max_gap < 0.75 * PI && min_gap > 0.05 {
            break a;
        }
    };
    let mut off = || [rng.gen_range(-0.15..0.15), rng.gen_range(-0.15..0.15)];
    let (so, no) = (off(), off());
    let hs = rng.gen_range(0.5..1.5);
    let hn = rng.gen_range(0.5..1.5);
    let en = ids("e", n);
    let mut vertices = vec![("s".to_string(), [so[0], so[1], -hs]), ("n".to_string(), [no[0], no[1], hn])];
    vertices.extend(en.iter().zip(&angles).map(|(id, a)| (id.clone(), [a.cos(), a.sin(), 0.0])));
    let mut faces = Vec::new();
    for j in 0..n {
        let k = (j + 1) % n;
        faces.push(vec!["s".to_string(), en[k].clone(), en[j].clone()]);
        faces.push(vec!["n".to_string(), en[j].clone(), en[k].clone()]);
    }
    Ok(poly_from(vertices, faces))
}

/// Random nondegenerate affine map: `U Σ Vᵀ` with singular values in
/// [0.5, 2], a random orientation, and a translation in [-1, 1]³.
pub fn random_affine<R: Rng>(rng: &mut R) -> AffineMap3D {
    let orthogonal = |rng: &mut R| {
        let g = Matrix3::from_fn(|_, _| rng.gen_range(-1.0..1.0));
        g.qr().q()
    };
    let u = orthogonal(rng);
    let v = orthogonal(rng);
    let sign = if rng.gen_bool(0.5) { -1.0 } else { 1.0 };
    let sigma = Matrix3::from_diagonal(&Vector3::new(
        sign * rng.gen_range(0.5..2.0),
        rng.gen_range(0.5..2.0),
        rng.gen_range(0.5..2.0),
    ));
    let t = Vector3::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
    AffineMap3D::new(u * sigma * v.transpose(), t)
}

pub fn random_affine_seeded(seed: u64) -> AffineMap3D {
    random_affine(&mut ChaCha8Rng::seed_from_u64(seed))
}

/// `(P, A(P))`.
pub fn affine_pair(
    p: &EmbeddedPolyhedron,
    a: &AffineMap3D,
) -> Result<(EmbeddedPolyhedron, EmbeddedPolyhedron), OracleError> {
    Ok((p.clone(), apply_affine(p, a)?))
}

/// Named generators with integer size parameter, for the command line.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum GeneratorKind {
    Bipyramid,
    PerturbedBipyramid,
    Prism,
    Cube,
    TiltedBox,
    Trapezohedron,
    Antiprism,
    Suspension,
}

impl GeneratorKind {
    pub const ALL: [GeneratorKind; 8] = [
        GeneratorKind::Bipyramid,
        GeneratorKind::PerturbedBipyramid,
        GeneratorKind::Prism,
        GeneratorKind::Cube,
        GeneratorKind::TiltedBox,
        GeneratorKind::Trapezohedron,
        GeneratorKind::Antiprism,
        GeneratorKind::Suspension,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            GeneratorKind::Bipyramid => "bipyramid",
            GeneratorKind::PerturbedBipyramid => "perturbed-bipyramid",
            GeneratorKind::Prism => "prism",
            GeneratorKind::Cube => "cube",
            GeneratorKind::TiltedBox => "tilted-box",
            GeneratorKind::Trapezohedron => "trapezohedron",
            GeneratorKind::Antiprism => "antiprism",
            GeneratorKind::Suspension => "suspension",
        }
    }

    pub fn parse(s: &str) -> Option<GeneratorKind> {
        GeneratorKind::ALL.into_iter().find(|k| k.name() == s)
    }
}

/// Generate by kind. `n` is the polygon size; for the bipyramids with
/// n = 3 the equator and poles give unit edges.
pub fn generate(kind: GeneratorKind, n: usize, seed: u64) -> Result<EmbeddedPolyhedron, OracleError> {
    let need = |min: usize| {
        if n < min {
            Err(OracleError::InvalidParams(format!("{} needs n >= {min}, got {n}", kind.name())))
        } else {
            Ok(())
        }
    };
    match kind {
        GeneratorKind::Bipyramid => {
            need(3)?;
            if n == 3 {
                Ok(unit_bipyramid(None))
            } else {
                bipyramid(n, 1.0, 1.0, 1.0, None)
            }
        }
        GeneratorKind::PerturbedBipyramid => {
            need(3)?;
            if n == 3 {
                Ok(unit_bipyramid(Some(1.5)))
            } else {
                bipyramid(n, 1.0, 1.0, 1.0, Some((0, 1.5)))
            }
        }
        GeneratorKind::Prism => {
            need(3)?;
            regular_prism(n, 1.0)
        }
        GeneratorKind::Cube => Ok(unit_cube()),
        GeneratorKind::TiltedBox => Ok(tilted_box(0.5)),
        GeneratorKind::Trapezohedron => {
            need(3)?;
            trapezohedron(n, 0.5)
        }
        GeneratorKind::Antiprism => {
            need(3)?;
            antiprism(n, 1.0)
        }
        GeneratorKind::Suspension => {
            need(3)?;
            random_convex_suspension(n, seed)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::development::validate_development;

    #[test]
    fn unit_bipyramid_edges() {
        let p = unit_bipyramid(None);
        for f in &p.faces {
            for i in 0..3 {
                let d = p.distance(&f[i], &f[(i + 1) % 3]).unwrap();
                assert!((d - 1.0).abs() < 1e-12);
            }
        }
        let q = unit_bipyramid(Some(1.5));
        assert!((q.distance("n", "e0").unwrap() - 1.5).abs() < 1e-12);
        assert!((q.distance("n", "e1").unwrap() - 1.0).abs() < 1e-12);
        assert!((q.distance("n", "e2").unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn generators_extract_cleanly() {
        for kind in GeneratorKind::ALL {
            for n in 3..=6 {
                let p = generate(kind, n, 7).unwrap();
                let dev = extract_development(&p).unwrap();
                let report = validate_development(&dev, 1e-9);
                assert!(report.is_valid(), "{} n={n}: {:?}", kind.name(), report.issues);
                assert!(dev.is_closed());
                assert!((dev.total_curvature() - 4.0 * PI).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn cube_counts() {
        let dev = extract_development(&unit_cube()).unwrap();
        assert_eq!((dev.num_faces(), dev.gluings().len(), dev.num_vertices()), (6, 12, 8));
    }

    #[test]
    fn bent_face_is_rejected() {
        let mut p = unit_cube();
        p.vertices["t0"][2] = 1.3;
        assert!(matches!(extract_development(&p), Err(OracleError::NonPlanarFace { .. })));
    }

    #[test]
    fn affine_fit_recovers_map() {
        let p = trapezohedron(5, 0.5).unwrap();
        let a = random_affine_seeded(3);
        let q = apply_affine(&p, &a).unwrap();
        let fit = oracle_affine_equivalent(&p, &q, None, 1e-9).unwrap();
        assert!((fit.linear - a.linear).norm() < 1e-10);
        assert!(oracle_affine_equivalent(&unit_bipyramid(None), &unit_bipyramid(Some(1.5)), None, 1e-9).is_none());
    }
}
