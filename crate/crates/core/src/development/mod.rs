//! Natural developments: planar convex face polygons glued along edges.
//!
//! A [`Development`] is immutable once built. Parsing resolves identifiers
//! only; geometric and topological checks live in [`validate`].

mod correspondence;
pub(crate) mod format;
mod validate;

pub use correspondence::{
    build_correspondence, vertex_map_by_name, vertex_map_from_json, vertex_map_from_names, MapFile, CombinatorialMap, CorrespondenceError,
};
pub use format::{parse_development, serialize_development, to_file, DevelopmentFile, FaceRecord, ParseError, VertexClassRecord};
pub use validate::{validate_development, ValidationIssue, ValidationReport};

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::f64::consts::PI;

use thiserror::Error;

/// Default edge-length tolerance, relative to the longest edge.
pub const DEFAULT_EPS_LEN: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Point2 {
    pub x: f64,
    pub y: f64,
}

impl Point2 {
    pub fn new(x: f64, y: f64) -> Self {
        Point2 { x, y }
    }

    pub fn sub(&self, o: &Point2) -> Point2 {
        Point2::new(self.x - o.x, self.y - o.y)
    }

    pub fn norm_sq(&self) -> f64 {
        self.x * self.x + self.y * self.y
    }

    pub fn dist(&self, o: &Point2) -> f64 {
        self.sub(o).norm_sq().sqrt()
    }

    pub fn cross(&self, o: &Point2) -> f64 {
        self.x * o.y - self.y * o.x
    }

    pub fn dot(&self, o: &Point2) -> f64 {
        self.x * o.x + self.y * o.y
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, serde::Serialize)]
pub struct FaceId(pub usize);

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, serde::Serialize)]
pub struct VertexId(pub usize);

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, serde::Serialize)]
pub struct EdgeId(pub usize);

/// `(face, index)`: corner `index` of a face, or edge `index` joining corner
/// `index` to corner `index + 1 mod m`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Slot {
    pub face: FaceId,
    pub index: usize,
}

impl Slot {
    pub fn new(face: FaceId, index: usize) -> Self {
        Slot { face, index }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct PlanarPolygon {
    pub vertices: Vec<Point2>,
}

impl PlanarPolygon {
    pub fn new(vertices: Vec<Point2>) -> Self {
        PlanarPolygon { vertices }
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn corner(&self, i: usize) -> Point2 {
        self.vertices[i % self.vertices.len()]
    }

    pub fn edge_length(&self, i: usize) -> f64 {
        self.corner(i).dist(&self.corner(i + 1))
    }

    /// Interior angle at corner `i`.
    pub fn angle(&self, i: usize) -> f64 {
        let m = self.len();
        let p = self.corner(i);
        let a = self.corner(i + m - 1).sub(&p);
        let b = self.corner(i + 1).sub(&p);
        a.cross(&b).abs().atan2(a.dot(&b))
    }

    pub fn diameter(&self) -> f64 {
        let mut d: f64 = 0.0;
        for (i, p) in self.vertices.iter().enumerate() {
            for q in &self.vertices[i + 1..] {
                d = d.max(p.dist(q));
            }
        }
        d
    }

    /// Strict convexity: consecutive edge cross products nonzero and of one sign.
    pub fn is_strictly_convex(&self) -> bool {
        let m = self.len();
        if m < 3 {
            return false;
        }
        let scale = self.diameter().max(f64::MIN_POSITIVE);
        let mut sign = 0.0;
        for i in 0..m {
            let e1 = self.corner(i + 1).sub(&self.corner(i));
            let e2 = self.corner(i + 2).sub(&self.corner(i + 1));
            let c = e1.cross(&e2);
            if c.abs() <= 1e-12 * scale * scale {
                return false;
            }
            if sign == 0.0 {
                sign = c.signum();
            } else if c.signum() != sign {
                return false;
            }
        }
        // also rules out star-shaped self-overlap: total turning must be one loop
        let turning: f64 = (0..m)
            .map(|i| {
                let e1 = self.corner(i + 1).sub(&self.corner(i));
                let e2 = self.corner(i + 2).sub(&self.corner(i + 1));
                e1.cross(&e2).atan2(e1.dot(&e2))
            })
            .sum();
        (turning.abs() - 2.0 * PI).abs() < 1e-6
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Face {
    pub id: String,
    pub polygon: PlanarPolygon,
}

#[derive(Clone, Debug, PartialEq)]
pub struct VertexClass {
    pub id: String,
    pub corners: Vec<Slot>,
}

/// One edge of the development: a single face edge (boundary) or a glued pair.
#[derive(Clone, Debug, PartialEq)]
pub struct Edge {
    pub slots: Vec<Slot>,
    pub ends: (VertexId, VertexId),
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum DevError {
    #[error("unknown vertex {0:?}")]
    UnknownVertex(VertexId),
    #[error("vertices {0} and {1} share no face")]
    NotCofacial(String, String),
    #[error("faces disagree on the distance between {a} and {b}: {values:?}")]
    InconsistentDistance {
        a: String,
        b: String,
        values: Vec<f64>,
    },
    #[error("development is not closed")]
    NotClosed,
}

#[derive(Clone, Debug)]
pub struct Development {
    faces: Vec<Face>,
    gluings: Vec<(Slot, Slot)>,
    vertices: Vec<VertexClass>,
    corner_vertex: Vec<Vec<VertexId>>,
    edges: Vec<Edge>,
    edge_of_slot: HashMap<Slot, EdgeId>,
    face_by_id: HashMap<String, FaceId>,
    vertex_by_id: HashMap<String, VertexId>,
}

/// One face at a vertex, in star order: the face, the corner of the face at
/// the vertex, and the neighbouring vertices reached along the edge entering
/// and the edge leaving that corner in the walk direction.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Wedge {
    pub face: FaceId,
    pub corner: usize,
    pub first: VertexId,
    pub second: VertexId,
}

/// Faces around a vertex in walk order; cyclic for interior vertices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Star {
    pub center: VertexId,
    pub wedges: Vec<Wedge>,
    pub cyclic: bool,
}

impl Star {
    /// Neighbours in star order. For an interior star this has one entry per
    /// wedge; a boundary star has one more.
    pub fn neighbours(&self) -> Vec<VertexId> {
        let mut out: Vec<VertexId> = self.wedges.iter().map(|w| w.first).collect();
        if !self.cyclic {
            if let Some(last) = self.wedges.last() {
                out.push(last.second);
            }
        }
        out
    }
}

impl Development {
    /// Assemble from already-resolved parts. Every corner must belong to
    /// exactly one vertex class (checked by the parser).
    pub(crate) fn from_parts(
        faces: Vec<Face>,
        gluings: Vec<(Slot, Slot)>,
        vertices: Vec<VertexClass>,
    ) -> Self {
        let mut corner_vertex: Vec<Vec<VertexId>> = faces
            .iter()
            .map(|f| vec![VertexId(usize::MAX); f.polygon.len()])
            .collect();
        for (vi, class) in vertices.iter().enumerate() {
            for c in &class.corners {
                corner_vertex[c.face.0][c.index] = VertexId(vi);
            }
        }
        let mut edges = Vec::new();
        let mut edge_of_slot = HashMap::new();
        for (a, b) in &gluings {
            let id = EdgeId(edges.len());
            let m = faces[a.face.0].polygon.len();
            let ends = (
                corner_vertex[a.face.0][a.index],
                corner_vertex[a.face.0][(a.index + 1) % m],
            );
            edges.push(Edge {
                slots: vec![*a, *b],
                ends,
            });
            edge_of_slot.insert(*a, id);
            edge_of_slot.insert(*b, id);
        }
        for (fi, f) in faces.iter().enumerate() {
            let m = f.polygon.len();
            for i in 0..m {
                let s = Slot::new(FaceId(fi), i);
                if edge_of_slot.contains_key(&s) {
                    continue;
                }
                let id = EdgeId(edges.len());
                edges.push(Edge {
                    slots: vec![s],
                    ends: (corner_vertex[fi][i], corner_vertex[fi][(i + 1) % m]),
                });
                edge_of_slot.insert(s, id);
            }
        }
        let face_by_id = faces
            .iter()
            .enumerate()
            .map(|(i, f)| (f.id.clone(), FaceId(i)))
            .collect();
        let vertex_by_id = vertices
            .iter()
            .enumerate()
            .map(|(i, v)| (v.id.clone(), VertexId(i)))
            .collect();
        Development {
            faces,
            gluings,
            vertices,
            corner_vertex,
            edges,
            edge_of_slot,
            face_by_id,
            vertex_by_id,
        }
    }

    pub fn faces(&self) -> &[Face] {
        &self.faces
    }

    pub fn face(&self, f: FaceId) -> &Face {
        &self.faces[f.0]
    }

    pub fn num_faces(&self) -> usize {
        self.faces.len()
    }

    pub fn gluings(&self) -> &[(Slot, Slot)] {
        &self.gluings
    }

    pub fn vertices(&self) -> &[VertexClass] {
        &self.vertices
    }

    pub fn num_vertices(&self) -> usize {
        self.vertices.len()
    }

    pub fn vertex_ids(&self) -> impl Iterator<Item = VertexId> {
        (0..self.vertices.len()).map(VertexId)
    }

    pub fn vertex_name(&self, v: VertexId) -> &str {
        &self.vertices[v.0].id
    }

    pub fn face_name(&self, f: FaceId) -> &str {
        &self.faces[f.0].id
    }

    pub fn vertex_by_name(&self, name: &str) -> Option<VertexId> {
        self.vertex_by_id.get(name).copied()
    }

    pub fn face_by_name(&self, name: &str) -> Option<FaceId> {
        self.face_by_id.get(name).copied()
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge_of(&self, s: Slot) -> EdgeId {
        self.edge_of_slot[&s]
    }

    pub fn corner_vertex(&self, s: Slot) -> VertexId {
        self.corner_vertex[s.face.0][s.index]
    }

    /// Vertex ids of a face's corners, in corner order.
    pub fn face_vertices(&self, f: FaceId) -> &[VertexId] {
        &self.corner_vertex[f.0]
    }

    /// The other slot glued to `s`, if any.
    pub fn partner(&self, s: Slot) -> Option<Slot> {
        let e = &self.edges[self.edge_of(s).0];
        e.slots.iter().copied().find(|&o| o != s)
    }

    pub fn is_closed(&self) -> bool {
        self.edges.iter().all(|e| e.slots.len() == 2)
    }

    /// Longest face edge; the scale for relative tolerances.
    pub fn longest_edge(&self) -> f64 {
        self.faces
            .iter()
            .flat_map(|f| (0..f.polygon.len()).map(move |i| f.polygon.edge_length(i)))
            .fold(0.0, f64::max)
    }

    fn check_vertex(&self, v: VertexId) -> Result<(), DevError> {
        if v.0 < self.vertices.len() {
            Ok(())
        } else {
            Err(DevError::UnknownVertex(v))
        }
    }

    /// Faces incident to `v`, sorted by face id.
    pub fn faces_at(&self, v: VertexId) -> Vec<FaceId> {
        let set: BTreeSet<FaceId> = self.vertices[v.0].corners.iter().map(|c| c.face).collect();
        set.into_iter().collect()
    }

    /// Number of distinct development edges incident to `v`.
    pub fn vertex_valency(&self, v: VertexId) -> Result<usize, DevError> {
        self.check_vertex(v)?;
        Ok(self
            .edges
            .iter()
            .filter(|e| e.ends.0 == v || e.ends.1 == v)
            .count())
    }

    /// Vertices joined to `v` by an edge, sorted.
    pub fn edge_neighbours(&self, v: VertexId) -> Vec<VertexId> {
        let set: BTreeSet<VertexId> = self
            .edges
            .iter()
            .filter_map(|e| {
                if e.ends.0 == v {
                    Some(e.ends.1)
                } else if e.ends.1 == v {
                    Some(e.ends.0)
                } else {
                    None
                }
            })
            .collect();
        set.into_iter().collect()
    }

    pub fn are_adjacent(&self, a: VertexId, b: VertexId) -> bool {
        self.edges
            .iter()
            .any(|e| (e.ends.0 == a && e.ends.1 == b) || (e.ends.0 == b && e.ends.1 == a))
    }

    pub fn corner_in_face(&self, f: FaceId, v: VertexId) -> Option<usize> {
        self.corner_vertex[f.0].iter().position(|&x| x == v)
    }

    /// Faces containing both `a` and `b`, sorted by id.
    pub fn common_faces(&self, a: VertexId, b: VertexId) -> Vec<FaceId> {
        self.faces_at(a)
            .into_iter()
            .filter(|&f| self.corner_in_face(f, b).is_some())
            .collect()
    }

    /// Squared planar distance between two vertices inside each shared face.
    fn cofacial_sq_samples(&self, a: VertexId, b: VertexId) -> Result<Vec<f64>, DevError> {
        self.check_vertex(a)?;
        self.check_vertex(b)?;
        let common = self.common_faces(a, b);
        if common.is_empty() {
            return Err(DevError::NotCofacial(
                self.vertex_name(a).to_string(),
                self.vertex_name(b).to_string(),
            ));
        }
        Ok(common
            .iter()
            .map(|&f| {
                let poly = &self.faces[f.0].polygon;
                let ia = self.corner_in_face(f, a).expect("common face");
                let ib = self.corner_in_face(f, b).expect("common face");
                poly.vertices[ia].sub(&poly.vertices[ib]).norm_sq()
            })
            .collect())
    }

    fn check_agreement(&self, a: VertexId, b: VertexId, d: &[f64], eps_len: f64) -> Result<(), DevError> {
        let tol = eps_len * self.longest_edge();
        let lo = d.iter().cloned().fold(f64::INFINITY, f64::min);
        let hi = d.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        if hi - lo > tol {
            return Err(DevError::InconsistentDistance {
                a: self.vertex_name(a).to_string(),
                b: self.vertex_name(b).to_string(),
                values: d.to_vec(),
            });
        }
        Ok(())
    }

    /// Distance between two vertices measured inside a face containing both;
    /// the mean over all such faces, which must agree within `eps_len`.
    pub fn cofacial_distance(&self, a: VertexId, b: VertexId, eps_len: f64) -> Result<f64, DevError> {
        let d: Vec<f64> = self.cofacial_sq_samples(a, b)?.into_iter().map(f64::sqrt).collect();
        self.check_agreement(a, b, &d, eps_len)?;
        Ok(d.iter().sum::<f64>() / d.len() as f64)
    }

    /// Squared version of [`Development::cofacial_distance`], computed from
    /// squared coordinate differences to avoid a square root round trip.
    pub fn cofacial_sq_distance(&self, a: VertexId, b: VertexId, eps_len: f64) -> Result<f64, DevError> {
        let sq = self.cofacial_sq_samples(a, b)?;
        let d: Vec<f64> = sq.iter().map(|x| x.sqrt()).collect();
        self.check_agreement(a, b, &d, eps_len)?;
        Ok(sq.iter().sum::<f64>() / sq.len() as f64)
    }

    /// Sum of face angles at `v`.
    pub fn angle_sum(&self, v: VertexId) -> Result<f64, DevError> {
        self.check_vertex(v)?;
        Ok(self.vertices[v.0]
            .corners
            .iter()
            .map(|c| self.faces[c.face.0].polygon.angle(c.index))
            .sum())
    }

    /// 2π minus the angle sum at `v`.
    pub fn vertex_curvature(&self, v: VertexId) -> Result<f64, DevError> {
        Ok(2.0 * PI - self.angle_sum(v)?)
    }

    /// Total curvature; 4π for a closed development of sphere type.
    pub fn total_curvature(&self) -> f64 {
        self.vertex_ids()
            .map(|v| self.vertex_curvature(v).expect("own vertex"))
            .sum()
    }

    /// Euler characteristic V - E + F.
    pub fn euler_characteristic(&self) -> i64 {
        self.vertices.len() as i64 - self.edges.len() as i64 + self.faces.len() as i64
    }

    /// The two edge slots meeting at a corner: (incoming, outgoing).
    fn corner_edges(&self, c: Slot) -> (Slot, Slot) {
        let m = self.faces[c.face.0].polygon.len();
        (Slot::new(c.face, (c.index + m - 1) % m), Slot::new(c.face, c.index))
    }

    /// Cross `edge` (a slot of a corner at `v`) and return the corner at `v`
    /// on the other side together with the slot we arrive through.
    fn cross_at(&self, v: VertexId, edge: Slot) -> Option<(Slot, Slot)> {
        let other = self.partner(edge)?;
        let m = self.faces[other.face.0].polygon.len();
        [other.index, (other.index + 1) % m]
            .into_iter()
            .map(|i| Slot::new(other.face, i))
            .find(|&c| self.corner_vertex(c) == v)
            .map(|c| (c, other))
    }

    fn far_end(&self, v: VertexId, edge: Slot) -> VertexId {
        let m = self.faces[edge.face.0].polygon.len();
        let a = self.corner_vertex(edge);
        let b = self.corner_vertex(Slot::new(edge.face, (edge.index + 1) % m));
        if a == v {
            b
        } else {
            a
        }
    }

    /// Walk the faces around `v` across glued edges.
    ///
    /// Returns `None` when the corners at `v` do not form a single fan (a
    /// non-manifold vertex), which a valid development never produces.
    pub fn star(&self, v: VertexId) -> Option<Star> {
        let corners = &self.vertices.get(v.0)?.corners;
        let first = *corners.first()?;
        let other_edge = |c: Slot, e: Slot| {
            let (i, o) = self.corner_edges(c);
            if e == i {
                o
            } else {
                i
            }
        };

        // Walk backward until a free edge or back to the first corner.
        let (start, start_entry, cyclic) = {
            let mut cur = first;
            let mut exit = self.corner_edges(first).0;
            let mut steps = 0;
            loop {
                match self.cross_at(v, exit) {
                    None => break (cur, exit, false),
                    Some((next, arrived)) => {
                        steps += 1;
                        if next == first || steps > corners.len() {
                            break (first, self.corner_edges(first).0, true);
                        }
                        exit = other_edge(next, arrived);
                        cur = next;
                    }
                }
            }
        };

        let mut wedges = Vec::with_capacity(corners.len());
        let mut cur = start;
        let mut entry = start_entry;
        loop {
            let exit = other_edge(cur, entry);
            wedges.push(Wedge {
                face: cur.face,
                corner: cur.index,
                first: self.far_end(v, entry),
                second: self.far_end(v, exit),
            });
            if wedges.len() > corners.len() {
                return None;
            }
            match self.cross_at(v, exit) {
                None => break,
                Some((next, arrived)) => {
                    if next == start {
                        break;
                    }
                    entry = arrived;
                    cur = next;
                }
            }
        }
        if wedges.len() != corners.len() {
            return None;
        }
        Some(Star {
            center: v,
            wedges,
            cyclic,
        })
    }

    /// Faces reachable from face 0 across glued edges.
    pub fn connected_components(&self) -> Vec<Vec<FaceId>> {
        let n = self.faces.len();
        let mut comp = vec![usize::MAX; n];
        let mut adj: Vec<Vec<usize>> = vec![Vec::new(); n];
        for (a, b) in &self.gluings {
            adj[a.face.0].push(b.face.0);
            adj[b.face.0].push(a.face.0);
        }
        let mut out = Vec::new();
        for s in 0..n {
            if comp[s] != usize::MAX {
                continue;
            }
            let id = out.len();
            let mut stack = vec![s];
            comp[s] = id;
            let mut members = Vec::new();
            while let Some(f) = stack.pop() {
                members.push(FaceId(f));
                for &g in &adj[f] {
                    if comp[g] == usize::MAX {
                        comp[g] = id;
                        stack.push(g);
                    }
                }
            }
            members.sort();
            out.push(members);
        }
        out
    }

    /// Map from vertex pair (sorted) to edge id.
    pub fn edge_lookup(&self) -> BTreeMap<(VertexId, VertexId), EdgeId> {
        self.edges
            .iter()
            .enumerate()
            .map(|(i, e)| {
                let (a, b) = e.ends;
                ((a.min(b), a.max(b)), EdgeId(i))
            })
            .collect()
    }
}
