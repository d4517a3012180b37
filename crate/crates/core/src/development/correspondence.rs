use std::collections::HashMap;

use thiserror::Error;

use super::{Development, EdgeId, FaceId, VertexId};

/// Incidence-preserving bijection between the elements of two developments.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CombinatorialMap {
    faces: Vec<FaceId>,
    edges: Vec<EdgeId>,
    vertices: Vec<VertexId>,
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CorrespondenceError {
    #[error("not combinatorially equivalent: {witness}")]
    NotCombinatoriallyEquivalent { witness: String },
    #[error("vertex map is not a bijection: {0}")]
    NotABijection(String),
    #[error("vertex map refers to unknown vertex {0:?}")]
    UnknownVertex(String),
    #[error("malformed map file: {0}")]
    MapFormat(String),
}

fn not_equivalent(witness: String) -> CorrespondenceError {
    CorrespondenceError::NotCombinatoriallyEquivalent { witness }
}

impl CombinatorialMap {
    pub fn face(&self, f: FaceId) -> FaceId {
        self.faces[f.0]
    }

    pub fn edge(&self, e: EdgeId) -> EdgeId {
        self.edges[e.0]
    }

    pub fn vertex(&self, v: VertexId) -> VertexId {
        self.vertices[v.0]
    }

    pub fn vertex_map(&self) -> &[VertexId] {
        &self.vertices
    }

    pub fn face_map(&self) -> &[FaceId] {
        &self.faces
    }

    pub fn edge_map(&self) -> &[EdgeId] {
        &self.edges
    }

    pub fn inverse(&self) -> CombinatorialMap {
        fn invert<T: Copy>(m: &[T], idx: impl Fn(T) -> usize, mk: impl Fn(usize) -> T) -> Vec<T> {
            let mut out: Vec<Option<T>> = vec![None; m.len()];
            for (i, &t) in m.iter().enumerate() {
                out[idx(t)] = Some(mk(i));
            }
            out.into_iter().map(|t| t.expect("bijection")).collect()
        }
        CombinatorialMap {
            faces: invert(&self.faces, |f| f.0, FaceId),
            edges: invert(&self.edges, |e| e.0, EdgeId),
            vertices: invert(&self.vertices, |v| v.0, VertexId),
        }
    }

    /// Identity on a development.
    pub fn identity(dev: &Development) -> CombinatorialMap {
        CombinatorialMap {
            faces: (0..dev.num_faces()).map(FaceId).collect(),
            edges: (0..dev.edges().len()).map(EdgeId).collect(),
            vertices: dev.vertex_ids().collect(),
        }
    }
}

/// Vertex map built from `(name in dev, name in dev′)` pairs.
pub fn vertex_map_from_names<'a>(
    dev: &Development,
    dev2: &Development,
    pairs: impl IntoIterator<Item = (&'a str, &'a str)>,
) -> Result<Vec<VertexId>, CorrespondenceError> {
    let mut out: Vec<Option<VertexId>> = vec![None; dev.num_vertices()];
    for (a, b) in pairs {
        let va = dev
            .vertex_by_name(a)
            .ok_or_else(|| CorrespondenceError::UnknownVertex(a.to_string()))?;
        let vb = dev2
            .vertex_by_name(b)
            .ok_or_else(|| CorrespondenceError::UnknownVertex(b.to_string()))?;
        if out[va.0].is_some() {
            return Err(CorrespondenceError::NotABijection(format!("{a} mapped twice")));
        }
        out[va.0] = Some(vb);
    }
    out.into_iter()
        .enumerate()
        .map(|(i, v)| {
            v.ok_or_else(|| {
                CorrespondenceError::NotABijection(format!(
                    "{} has no image",
                    dev.vertex_name(VertexId(i))
                ))
            })
        })
        .collect()
}

/// Map file: `{"vertices": {"name in dev": "name in dev′", ...}}`.
#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MapFile {
    pub vertices: indexmap::IndexMap<String, String>,
}

/// Vertex map read from a map file.
pub fn vertex_map_from_json(dev: &Development, dev2: &Development, text: &str) -> Result<Vec<VertexId>, CorrespondenceError> {
    let file: MapFile = serde_json::from_str(text).map_err(|e| CorrespondenceError::MapFormat(e.to_string()))?;
    vertex_map_from_names(dev, dev2, file.vertices.iter().map(|(a, b)| (a.as_str(), b.as_str())))
}

/// Vertex map pairing equal vertex names.
pub fn vertex_map_by_name(dev: &Development, dev2: &Development) -> Result<Vec<VertexId>, CorrespondenceError> {
    let names: Vec<&str> = dev.vertices().iter().map(|v| v.id.as_str()).collect();
    vertex_map_from_names(dev, dev2, names.iter().map(|n| (*n, *n)))
}

fn same_cycle(a: &[VertexId], b: &[VertexId]) -> bool {
    if a.len() != b.len() || a.is_empty() {
        return false;
    }
    let n = a.len();
    let Some(start) = b.iter().position(|&x| x == a[0]) else {
        return false;
    };
    let forward = (0..n).all(|i| a[i] == b[(start + i) % n]);
    let backward = (0..n).all(|i| a[i] == b[(start + n - i) % n]);
    forward || backward
}

/// Extend a vertex bijection to faces and edges, checking that incidences
/// are preserved in both directions.
pub fn build_correspondence(
    dev: &Development,
    dev2: &Development,
    vertex_map: &[VertexId],
) -> Result<CombinatorialMap, CorrespondenceError> {
    let counts = |d: &Development| (d.num_vertices(), d.edges().len(), d.num_faces());
    let (c1, c2) = (counts(dev), counts(dev2));
    if c1 != c2 {
        return Err(not_equivalent(format!(
            "element counts differ: (V, E, F) = {c1:?} vs {c2:?}"
        )));
    }
    if vertex_map.len() != dev.num_vertices() {
        return Err(CorrespondenceError::NotABijection(format!(
            "{} images for {} vertices",
            vertex_map.len(),
            dev.num_vertices()
        )));
    }
    let mut hit = vec![false; dev2.num_vertices()];
    for &v in vertex_map {
        if v.0 >= hit.len() {
            return Err(CorrespondenceError::UnknownVertex(format!("#{}", v.0)));
        }
        if std::mem::replace(&mut hit[v.0], true) {
            return Err(CorrespondenceError::NotABijection(format!(
                "{} is hit twice",
                dev2.vertex_name(v)
            )));
        }
    }

    let mut faces = Vec::with_capacity(dev.num_faces());
    let mut face_hit = vec![false; dev2.num_faces()];
    for f in 0..dev.num_faces() {
        let fid = FaceId(f);
        let image: Vec<VertexId> = dev.face_vertices(fid).iter().map(|v| vertex_map[v.0]).collect();
        let candidates = dev2.faces_at(image[0]);
        let found = candidates
            .into_iter()
            .find(|&g| same_cycle(&image, dev2.face_vertices(g)));
        match found {
            Some(g) if !face_hit[g.0] => {
                face_hit[g.0] = true;
                faces.push(g);
            }
            _ => {
                let names: Vec<&str> = image.iter().map(|&v| dev2.vertex_name(v)).collect();
                return Err(not_equivalent(format!(
                    "face {} has image cycle {:?} which bounds no face on the other side",
                    dev.face_name(fid),
                    names
                )));
            }
        }
    }

    let lookup2 = dev2.edge_lookup();
    let mut edge_hit: HashMap<EdgeId, ()> = HashMap::new();
    let mut edges = Vec::with_capacity(dev.edges().len());
    for e in dev.edges() {
        let (a, b) = (vertex_map[e.ends.0 .0], vertex_map[e.ends.1 .0]);
        match lookup2.get(&(a.min(b), a.max(b))) {
            Some(&g) if edge_hit.insert(g, ()).is_none() => edges.push(g),
            _ => {
                return Err(not_equivalent(format!(
                    "edge {}-{} has no image edge {}-{}",
                    dev.vertex_name(e.ends.0),
                    dev.vertex_name(e.ends.1),
                    dev2.vertex_name(a),
                    dev2.vertex_name(b)
                )))
            }
        }
    }

    Ok(CombinatorialMap {
        faces,
        edges,
        vertices: vertex_map.to_vec(),
    })
}
