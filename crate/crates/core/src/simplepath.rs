//! Face-level verdicts: the face screen, simple developments (every vertex
//! of valency 3), and covering paths through valency-3 vertices.

use std::collections::BTreeSet;

use serde::Serialize;

use crate::cmgeom::{polygon_affine_equivalent, CornerCorrespondence};
use crate::development::{CombinatorialMap, DevError, Development, FaceId, VertexId};
use crate::solver::{AlphaSet, AlphaStatus, SolverConfig};
use crate::verdict::{Evidence, FaceMismatch, Stage, Verdict, VerdictKind, CONVEXITY_HYPOTHESIS};

/// Default tolerance for the face screen, relative to the image diameter.
pub const EPS_AFF: f64 = 1e-7;

/// Search nodes explored before giving up on a covering path.
pub const GAMMA_NODE_CAP: usize = 1_000_000;

/// Vertices along a path, consecutive ones joined by edges.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EdgePath {
    pub vertices: Vec<VertexId>,
}

impl EdgePath {
    pub fn edges(&self) -> usize {
        self.vertices.len().saturating_sub(1)
    }
}

fn valencies(dev: &Development) -> Result<Vec<usize>, DevError> {
    if !dev.is_closed() {
        return Err(DevError::NotClosed);
    }
    dev.vertex_ids().map(|v| dev.vertex_valency(v)).collect()
}

pub fn is_simple_development(dev: &Development) -> Result<bool, DevError> {
    Ok(valencies(dev)?.iter().all(|&k| k == 3))
}

/// Does every face contain a vertex of `path`? Independent of the search.
pub fn covers_all_faces(dev: &Development, path: &[VertexId]) -> bool {
    let touched: BTreeSet<FaceId> = path.iter().flat_map(|&v| dev.faces_at(v)).collect();
    touched.len() == dev.num_faces()
}

/// Is `path` a vertex-simple edge path through valency-3 vertices only?
pub fn is_valency3_path(dev: &Development, path: &[VertexId]) -> bool {
    let distinct: BTreeSet<_> = path.iter().collect();
    distinct.len() == path.len()
        && path.iter().all(|&v| dev.vertex_valency(v).is_ok_and(|k| k == 3))
        && path.windows(2).all(|w| dev.are_adjacent(w[0], w[1]))
}

struct Search<'a> {
    dev: &'a Development,
    adj: Vec<Vec<VertexId>>,
    faces: Vec<Vec<FaceId>>,
    nodes: usize,
}

impl Search<'_> {
    /// Depth-limited extension of `path`; `count[f]` is how many path
    /// vertices touch face f.
    fn extend(&mut self, path: &mut Vec<VertexId>, count: &mut [usize], covered: usize, left: usize) -> Option<bool> {
        self.nodes += 1;
        if self.nodes > GAMMA_NODE_CAP {
            return None;
        }
        if covered == self.dev.num_faces() {
            return Some(true);
        }
        // each step along an edge touches at most one new face
        if covered + left < self.dev.num_faces() {
            return Some(false);
        }
        let last = *path.last().expect("nonempty");
        for w in self.adj[last.0].clone() {
            if path.contains(&w) {
                continue;
            }
            let mut gained = 0;
            for &f in &self.faces[w.0] {
                if count[f.0] == 0 {
                    gained += 1;
                }
                count[f.0] += 1;
            }
            path.push(w);
            let r = self.extend(path, count, covered + gained, left - 1);
            if r != Some(false) {
                return r;
            }
            path.pop();
            for &f in &self.faces[w.0] {
                count[f.0] -= 1;
            }
        }
        Some(false)
    }
}

/// Shortest covering path through valency-3 vertices (iterative deepening
/// on the number of edges, vertices and neighbours in id order).
pub fn find_gamma_path(dev: &Development) -> Result<Option<EdgePath>, DevError> {
    let val = valencies(dev)?;
    let good: Vec<bool> = val.iter().map(|&k| k == 3).collect();
    let adj: Vec<Vec<VertexId>> = dev
        .vertex_ids()
        .map(|v| {
            if good[v.0] {
                dev.edge_neighbours(v).into_iter().filter(|w| good[w.0]).collect()
            } else {
                Vec::new()
            }
        })
        .collect();
    let faces: Vec<Vec<FaceId>> = dev.vertex_ids().map(|v| dev.faces_at(v)).collect();
    let starts: Vec<VertexId> = dev.vertex_ids().filter(|v| good[v.0]).collect();
    let mut s = Search {
        dev,
        adj,
        faces,
        nodes: 0,
    };
    for len in 0..starts.len() {
        for &v in &starts {
            let mut count = vec![0usize; dev.num_faces()];
            for &f in &s.faces[v.0] {
                count[f.0] += 1;
            }
            let covered = s.faces[v.0].len();
            let mut path = vec![v];
            match s.extend(&mut path, &mut count, covered, len) {
                Some(true) => return Ok(Some(EdgePath { vertices: path })),
                Some(false) => {}
                None => return Ok(None),
            }
        }
    }
    Ok(None)
}

/// Corner correspondence of face `f` onto its image under `map`.
pub fn face_correspondence(dev: &Development, dev2: &Development, map: &CombinatorialMap, f: FaceId) -> CornerCorrespondence {
    let vs = dev.face_vertices(f);
    let g = map.face(f);
    let ws = dev2.face_vertices(g);
    let at = |i: usize| ws.iter().position(|&w| w == map.vertex(vs[i])).expect("map preserves faces");
    let m = vs.len();
    let offset = at(0);
    CornerCorrespondence {
        offset,
        reversed: m > 2 && at(1) != (offset + 1) % m,
    }
}

/// Corresponding face pairs whose polygons are not affine images.
pub fn face_screen(dev: &Development, dev2: &Development, map: &CombinatorialMap, eps_aff: f64) -> Vec<FaceMismatch> {
    (0..dev.num_faces())
        .map(FaceId)
        .filter(|&f| {
            let corr = face_correspondence(dev, dev2, map, f);
            let ok = polygon_affine_equivalent(&dev.face(f).polygon, &dev2.face(map.face(f)).polygon, corr, eps_aff);
            !matches!(ok, Ok(Some(_)))
        })
        .map(|f| FaceMismatch {
            face: dev.face_name(f).to_string(),
            image: dev2.face_name(map.face(f)).to_string(),
        })
        .collect()
}

/// Face screen, then the simple / covering-path criterion.
pub fn simple_affine_verdict(
    dev: &Development,
    dev2: &Development,
    map: &CombinatorialMap,
    eps_aff: f64,
    cfg: &SolverConfig,
) -> Result<Verdict, DevError> {
    let mismatches = face_screen(dev, dev2, map, eps_aff);
    if !mismatches.is_empty() {
        return Ok(Verdict {
            kind: VerdictKind::NotAffineEquivalent,
            stage: Stage::FaceScreen,
            alpha_intersection: AlphaSet::empty(),
            evidence: Evidence {
                face_mismatches: mismatches,
                ..Evidence::default()
            },
        });
    }
    let path = if is_simple_development(dev)? {
        Some(vec!["simple".to_string()])
    } else {
        find_gamma_path(dev)?.map(|p| p.vertices.iter().map(|&v| dev.vertex_name(v).to_string()).collect())
    };
    let kind = if path.is_some() {
        VerdictKind::AffineEquivalentConditional
    } else {
        VerdictKind::Inconclusive
    };
    Ok(Verdict {
        kind,
        stage: Stage::FastPath,
        alpha_intersection: AlphaSet::full(cfg, AlphaStatus::Incomplete),
        evidence: Evidence {
            hypothesis: path.is_some().then(|| CONVEXITY_HYPOTHESIS.to_string()),
            fast_path: path,
            ..Evidence::default()
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::{bipyramid, extract_development, trapezohedron, unit_cube};

    #[test]
    fn simple_and_not() {
        assert!(is_simple_development(&extract_development(&unit_cube()).unwrap()).unwrap());
        let oct = extract_development(&bipyramid(4, 1.0, 1.0, 1.0, None).unwrap()).unwrap();
        assert!(!is_simple_development(&oct).unwrap());
        assert_eq!(find_gamma_path(&oct).unwrap(), None);
    }

    #[test]
    fn trapezohedron_has_five_edge_path() {
        let d = extract_development(&trapezohedron(4, 1.0).unwrap()).unwrap();
        let p = find_gamma_path(&d).unwrap().expect("path");
        assert_eq!(p.edges(), 5);
        assert!(is_valency3_path(&d, &p.vertices));
        assert!(covers_all_faces(&d, &p.vertices));
    }
}
