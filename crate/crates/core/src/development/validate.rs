use std::collections::HashMap;

use serde::Serialize;

use super::{Development, Slot};

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "camelCase")]
pub enum ValidationIssue {
    TooFewCorners { face: String, corners: usize },
    RepeatedCorner { face: String },
    NonConvexFace { face: String },
    #[serde(rename_all = "camelCase")]
    LengthMismatch {
        first: (String, usize),
        second: (String, usize),
        first_length: f64,
        second_length: f64,
    },
    EdgeGluedTwice { slot: (String, usize) },
    SelfGluedEdge { slot: (String, usize) },
    Disconnected { components: usize },
    #[serde(rename_all = "camelCase")]
    InconsistentVertexClasses {
        first: (String, usize),
        second: (String, usize),
    },
    NonManifoldVertex { vertex: String },
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct ValidationReport {
    pub issues: Vec<ValidationIssue>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.issues.is_empty()
    }
}

/// Check every structural and geometric invariant of a development.
/// `eps_len` is relative to the longest edge.
pub fn validate_development(dev: &Development, eps_len: f64) -> ValidationReport {
    let mut issues = Vec::new();
    let name = |s: &Slot| (dev.face_name(s.face).to_string(), s.index);

    for face in dev.faces() {
        let poly = &face.polygon;
        if poly.len() < 3 {
            issues.push(ValidationIssue::TooFewCorners {
                face: face.id.clone(),
                corners: poly.len(),
            });
            continue;
        }
        let repeated = (0..poly.len())
            .any(|i| (i + 1..poly.len()).any(|j| poly.vertices[i] == poly.vertices[j]));
        if repeated {
            issues.push(ValidationIssue::RepeatedCorner {
                face: face.id.clone(),
            });
        } else if !poly.is_strictly_convex() {
            issues.push(ValidationIssue::NonConvexFace {
                face: face.id.clone(),
            });
        }
    }

    let tol = eps_len * dev.longest_edge();
    let mut uses: HashMap<Slot, usize> = HashMap::new();
    for (a, b) in dev.gluings() {
        *uses.entry(*a).or_default() += 1;
        *uses.entry(*b).or_default() += 1;
        if a == b {
            issues.push(ValidationIssue::SelfGluedEdge { slot: name(a) });
            continue;
        }
        let la = dev.face(a.face).polygon.edge_length(a.index);
        let lb = dev.face(b.face).polygon.edge_length(b.index);
        if (la - lb).abs() > tol {
            issues.push(ValidationIssue::LengthMismatch {
                first: name(a),
                second: name(b),
                first_length: la,
                second_length: lb,
            });
        }
        let ends = |s: &Slot| {
            let m = dev.face(s.face).polygon.len();
            let p = dev.corner_vertex(*s);
            let q = dev.corner_vertex(Slot::new(s.face, (s.index + 1) % m));
            (p.min(q), p.max(q))
        };
        if ends(a) != ends(b) {
            issues.push(ValidationIssue::InconsistentVertexClasses {
                first: name(a),
                second: name(b),
            });
        }
    }
    let mut twice: Vec<_> = uses.into_iter().filter(|(_, n)| *n > 1).map(|(s, _)| s).collect();
    twice.sort();
    for s in twice {
        issues.push(ValidationIssue::EdgeGluedTwice { slot: name(&s) });
    }

    let components = dev.connected_components().len();
    if components > 1 {
        issues.push(ValidationIssue::Disconnected { components });
    }

    let structural_ok = !issues.iter().any(|i| {
        matches!(
            i,
            ValidationIssue::EdgeGluedTwice { .. }
                | ValidationIssue::SelfGluedEdge { .. }
                | ValidationIssue::InconsistentVertexClasses { .. }
        )
    });
    if structural_ok {
        for v in dev.vertex_ids() {
            if dev.star(v).is_none() {
                issues.push(ValidationIssue::NonManifoldVertex {
                    vertex: dev.vertex_name(v).to_string(),
                });
            }
        }
    }

    ValidationReport { issues }
}
