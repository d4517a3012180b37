//! JSON development files.
//!
//! ```json
//! { "faces": [ { "id": "f0", "vertices": [[0,0],[1,0],[0,1]] } ],
//!   "gluings": [ [["f0", 0], ["f1", 2]] ],
//!   "vertexClasses": [ { "id": "a", "corners": [["f0", 0], ["f1", 0]] } ] }
//! ```

use std::collections::{HashMap, HashSet};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::{Development, Face, FaceId, PlanarPolygon, Point2, Slot, VertexClass};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FaceRecord {
    pub id: String,
    pub vertices: Vec<[f64; 2]>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VertexClassRecord {
    pub id: String,
    pub corners: Vec<(String, usize)>,
}

/// Serialized form of a [`Development`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct DevelopmentFile {
    pub faces: Vec<FaceRecord>,
    #[serde(default)]
    pub gluings: Vec<((String, usize), (String, usize))>,
    pub vertex_classes: Vec<VertexClassRecord>,
}

#[derive(Debug, Error)]
pub enum ParseError {
    #[error("syntax error at line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("duplicate face id {0:?}")]
    DuplicateFace(String),
    #[error("duplicate vertex id {0:?}")]
    DuplicateVertex(String),
    #[error("reference to unknown face {0:?}")]
    UnknownFace(String),
    #[error("face {face:?} has no corner/edge {index}")]
    IndexOutOfRange { face: String, index: usize },
    #[error("corner ({face:?}, {index}) is listed in more than one vertex class")]
    CornerReused { face: String, index: usize },
    #[error("corner ({face:?}, {index}) belongs to no vertex class")]
    CornerUnassigned { face: String, index: usize },
}

pub fn parse_development(text: &str) -> Result<Development, ParseError> {
    let file: DevelopmentFile = serde_json::from_str(text).map_err(|e| ParseError::Syntax {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    from_file(file)
}

pub(crate) fn from_file(file: DevelopmentFile) -> Result<Development, ParseError> {
    let mut face_index: HashMap<String, FaceId> = HashMap::new();
    let mut faces = Vec::with_capacity(file.faces.len());
    for rec in file.faces {
        if face_index.contains_key(&rec.id) {
            return Err(ParseError::DuplicateFace(rec.id));
        }
        face_index.insert(rec.id.clone(), FaceId(faces.len()));
        faces.push(Face {
            id: rec.id,
            polygon: PlanarPolygon::new(
                rec.vertices.iter().map(|p| Point2::new(p[0], p[1])).collect(),
            ),
        });
    }
    let resolve = |name: &str, index: usize| -> Result<Slot, ParseError> {
        let f = *face_index
            .get(name)
            .ok_or_else(|| ParseError::UnknownFace(name.to_string()))?;
        if index >= faces[f.0].polygon.len() {
            return Err(ParseError::IndexOutOfRange {
                face: name.to_string(),
                index,
            });
        }
        Ok(Slot::new(f, index))
    };

    let mut gluings = Vec::with_capacity(file.gluings.len());
    for ((fa, ia), (fb, ib)) in &file.gluings {
        gluings.push((resolve(fa, *ia)?, resolve(fb, *ib)?));
    }

    let mut seen_vertex = HashSet::new();
    let mut used = HashSet::new();
    let mut vertices = Vec::with_capacity(file.vertex_classes.len());
    for rec in file.vertex_classes {
        if !seen_vertex.insert(rec.id.clone()) {
            return Err(ParseError::DuplicateVertex(rec.id));
        }
        let mut corners = Vec::with_capacity(rec.corners.len());
        for (f, i) in &rec.corners {
            let s = resolve(f, *i)?;
            if !used.insert(s) {
                return Err(ParseError::CornerReused {
                    face: f.clone(),
                    index: *i,
                });
            }
            corners.push(s);
        }
        vertices.push(VertexClass {
            id: rec.id,
            corners,
        });
    }
    for (fi, face) in faces.iter().enumerate() {
        for i in 0..face.polygon.len() {
            if !used.contains(&Slot::new(FaceId(fi), i)) {
                return Err(ParseError::CornerUnassigned {
                    face: face.id.clone(),
                    index: i,
                });
            }
        }
    }
    Ok(Development::from_parts(faces, gluings, vertices))
}

pub fn to_file(dev: &Development) -> DevelopmentFile {
    let slot = |s: &Slot| (dev.face_name(s.face).to_string(), s.index);
    DevelopmentFile {
        faces: dev
            .faces()
            .iter()
            .map(|f| FaceRecord {
                id: f.id.clone(),
                vertices: f.polygon.vertices.iter().map(|p| [p.x, p.y]).collect(),
            })
            .collect(),
        gluings: dev.gluings().iter().map(|(a, b)| (slot(a), slot(b))).collect(),
        vertex_classes: dev
            .vertices()
            .iter()
            .map(|v| VertexClassRecord {
                id: v.id.clone(),
                corners: v.corners.iter().map(slot).collect(),
            })
            .collect(),
    }
}

pub fn serialize_development(dev: &Development) -> String {
    serde_json::to_string_pretty(&to_file(dev)).expect("development serializes")
}
