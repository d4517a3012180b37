//! Suspensions (combinatorial bipyramids) and their non-equivalence
//! certificate: q′_j(u′) = δ·q_j(u) for every equator edge, where u and u′ are
//! the squared pole-to-pole distances.

use serde::Serialize;
use thiserror::Error;

use crate::development::{CombinatorialMap, DevError, Development, VertexId};
use crate::poly::{det, Poly};
use crate::solver::{
    feasible_box, project_alpha, solve_positive, AlphaSet, AlphaStatus, Flank, IntervalBox, PolySystem, SolveResult,
    SolverConfig, Variable,
};
use crate::verdict::{Evidence, Stage, SuspensionRecord, Verdict, VerdictKind};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SuspensionStructure {
    pub south: VertexId,
    pub north: VertexId,
    /// x_1 … x_n in cyclic order.
    pub equator: Vec<VertexId>,
}

impl SuspensionStructure {
    pub fn n(&self) -> usize {
        self.equator.len()
    }

    pub fn mapped(&self, map: &CombinatorialMap) -> SuspensionStructure {
        SuspensionStructure {
            south: map.vertex(self.south),
            north: map.vertex(self.north),
            equator: self.equator.iter().map(|&v| map.vertex(v)).collect(),
        }
    }

    /// Checks the structure against the face lattice of `dev`.
    pub fn fits(&self, dev: &Development) -> bool {
        let n = self.n();
        if n < 3 || dev.num_faces() != 2 * n || dev.num_vertices() != n + 2 {
            return false;
        }
        if dev.are_adjacent(self.south, self.north) {
            return false;
        }
        let mut want: Vec<[VertexId; 3]> = Vec::with_capacity(2 * n);
        for j in 0..n {
            let (a, b) = (self.equator[j], self.equator[(j + 1) % n]);
            for pole in [self.south, self.north] {
                let mut t = [pole, a, b];
                t.sort();
                want.push(t);
            }
        }
        want.sort();
        let mut have: Vec<[VertexId; 3]> = Vec::with_capacity(dev.num_faces());
        for f in dev.faces().iter().enumerate().map(|(i, _)| crate::development::FaceId(i)) {
            let vs = dev.face_vertices(f);
            if vs.len() != 3 {
                return false;
            }
            let mut t = [vs[0], vs[1], vs[2]];
            t.sort();
            have.push(t);
        }
        have.sort();
        want == have
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SuspensionError {
    #[error("development is not a suspension")]
    NotASuspension,
    #[error("the map does not carry the suspension structure onto the second development")]
    StructureMismatch,
    #[error(transparent)]
    Development(#[from] DevError),
}

/// Equator for a given pole pair, starting at its lowest vertex and heading
/// to the lower of that vertex's two equator neighbours.
fn equator_for(dev: &Development, south: VertexId, north: VertexId) -> Option<SuspensionStructure> {
    let ring: Vec<VertexId> = dev.edge_neighbours(south);
    if ring.len() < 3 || ring.contains(&north) || dev.edge_neighbours(north) != ring {
        return None;
    }
    let start = ring[0];
    let along = |v: VertexId| -> Vec<VertexId> {
        dev.edge_neighbours(v).into_iter().filter(|w| ring.contains(w)).collect()
    };
    let first = along(start);
    if first.len() != 2 {
        return None;
    }
    let mut equator = vec![start, first[0].min(first[1])];
    while equator.len() < ring.len() {
        let cur = *equator.last().expect("nonempty");
        let prev = equator[equator.len() - 2];
        let next: Vec<VertexId> = along(cur).into_iter().filter(|&w| w != prev).collect();
        if next.len() != 1 || equator.contains(&next[0]) {
            return None;
        }
        equator.push(next[0]);
    }
    let s = SuspensionStructure { south, north, equator };
    s.fits(dev).then_some(s)
}

/// Every pole pair (south id below north id) that makes `dev` a suspension.
pub fn all_suspension_structures(dev: &Development) -> Vec<SuspensionStructure> {
    let ids: Vec<VertexId> = dev.vertex_ids().collect();
    let mut out = Vec::new();
    for (i, &s) in ids.iter().enumerate() {
        for &n in &ids[i + 1..] {
            if let Some(st) = equator_for(dev, s, n) {
                out.push(st);
            }
        }
    }
    out
}

/// The structure with the lowest-id south pole, or `None`.
pub fn detect_suspension(dev: &Development) -> Option<SuspensionStructure> {
    all_suspension_structures(dev).into_iter().next()
}

/// Squared lengths along T_j = (x_0, x_j, x_{j+1}, x_{n+1}), 1 ≤ j ≤ n,
/// in the order 0j, 0j+, jj+, jN, j+N.
fn tetra_lengths(dev: &Development, s: &SuspensionStructure, j: usize, eps_len: f64) -> Result<[f64; 5], DevError> {
    let n = s.n();
    let a = s.equator[(j - 1) % n];
    let b = s.equator[j % n];
    let d = |x: VertexId, y: VertexId| dev.cofacial_sq_distance(x, y, eps_len);
    Ok([d(s.south, a)?, d(s.south, b)?, d(a, b)?, d(a, s.north)?, d(b, s.north)?])
}

/// CM determinant of T_j with the pole distance u = t² as variable `var`.
fn q_poly(l: &[f64; 5], nvars: usize, var: usize, scale: f64) -> Poly {
    let c = |x: f64| Poly::from_f64(nvars, x / scale);
    let one = Poly::from_f64(nvars, 1.0);
    let zero = Poly::zero(nvars);
    let u = Poly::var(nvars, var);
    // points: 0 = south, 1 = x_j, 2 = x_{j+1}, 3 = north
    let d = [
        [zero.clone(), c(l[0]), c(l[1]), u.clone()],
        [c(l[0]), zero.clone(), c(l[2]), c(l[3])],
        [c(l[1]), c(l[2]), zero.clone(), c(l[4])],
        [u, c(l[3]), c(l[4]), zero.clone()],
    ];
    let mut m = vec![vec![one.clone(); 5]; 5];
    m[0][0] = zero;
    for i in 0..4 {
        for k in 0..4 {
            m[i + 1][k + 1] = d[i][k].clone();
        }
    }
    det(&m)
}

/// q_j as a polynomial in u = t², 1 ≤ j ≤ n.
pub fn suspension_polynomial(
    dev: &Development,
    s: &SuspensionStructure,
    j: usize,
    eps_len: f64,
) -> Result<Poly, SuspensionError> {
    assert!((1..=s.n()).contains(&j), "equator index {j} out of 1..={}", s.n());
    Ok(q_poly(&tetra_lengths(dev, s, j, eps_len)?, 1, 0, 1.0))
}

/// The normalized system in (δ, u, u′) with its search box and the factor
/// mapping normalized δ back to the true δ.
#[derive(Clone, Debug)]
pub struct SuspensionProblem {
    pub system: PolySystem,
    pub init: IntervalBox,
    pub back: f64,
    /// Squared lengths were divided by these.
    pub scales: (f64, f64),
}

fn side(dev: &Development, s: &SuspensionStructure, eps_len: f64) -> Result<Vec<[f64; 5]>, DevError> {
    (1..=s.n()).map(|j| tetra_lengths(dev, s, j, eps_len)).collect()
}

/// System q′_j(u′) = δ q_j(u), j = 1 … n, for the structure `s` on `dev`
/// carried to `dev2` by `map`.
pub fn suspension_problem(
    dev: &Development,
    dev2: &Development,
    map: &CombinatorialMap,
    s: &SuspensionStructure,
    eps_len: f64,
    cfg: &SolverConfig,
) -> Result<SuspensionProblem, SuspensionError> {
    if !s.fits(dev) {
        return Err(SuspensionError::NotASuspension);
    }
    let s2 = s.mapped(map);
    if !s2.fits(dev2) {
        return Err(SuspensionError::StructureMismatch);
    }
    let (l, l2) = (side(dev, s, eps_len)?, side(dev2, &s2, eps_len)?);
    let top = |l: &[[f64; 5]]| l.iter().flatten().cloned().fold(0.0, f64::max).max(f64::MIN_POSITIVE);
    let (k, k2) = (top(&l), top(&l2));
    let vars = vec![Variable::scale("delta"), Variable::squared("u"), Variable::squared("u'")];
    let delta = Poly::var(3, 0);
    let q: Vec<Poly> = l.iter().map(|t| q_poly(t, 3, 1, k)).collect();
    let qp: Vec<Poly> = l2.iter().map(|t| q_poly(t, 3, 2, k2)).collect();
    let eqs = q.iter().zip(&qp).map(|(a, b)| b.sub(&delta.mul(a))).collect();
    let system = PolySystem::new(vars, eqs).with_nonnegative(q.into_iter().chain(qp).collect());
    let flank = |l: &[[f64; 5]], kk: f64, var: usize| Flank {
        var,
        sides: l.iter().map(|t| ((t[0] / kk).sqrt(), (t[3] / kk).sqrt())).collect(),
    };
    let init = feasible_box(&system, &[flank(&l, k, 1), flank(&l2, k2, 2)], cfg);
    Ok(SuspensionProblem {
        system,
        init,
        back: (k2 / k).powi(3),
        scales: (k, k2),
    })
}

/// Suspension system in the original (unnormalized) lengths.
pub fn suspension_system(
    dev: &Development,
    dev2: &Development,
    map: &CombinatorialMap,
    eps_len: f64,
) -> Result<PolySystem, SuspensionError> {
    let s = detect_suspension(dev).ok_or(SuspensionError::NotASuspension)?;
    let s2 = s.mapped(map);
    if !s2.fits(dev2) {
        return Err(SuspensionError::StructureMismatch);
    }
    let (l, l2) = (side(dev, &s, eps_len)?, side(dev2, &s2, eps_len)?);
    let vars = vec![Variable::scale("delta"), Variable::squared("u"), Variable::squared("u'")];
    let delta = Poly::var(3, 0);
    let eqs = l
        .iter()
        .zip(&l2)
        .map(|(a, b)| q_poly(b, 3, 2, 1.0).sub(&delta.mul(&q_poly(a, 3, 1, 1.0))))
        .collect();
    Ok(PolySystem::new(vars, eqs))
}

fn names(dev: &Development, s: &SuspensionStructure) -> (String, String, Vec<String>) {
    (
        dev.vertex_name(s.south).to_string(),
        dev.vertex_name(s.north).to_string(),
        s.equator.iter().map(|&v| dev.vertex_name(v).to_string()).collect(),
    )
}

/// Runs the certificate for one structure.
pub fn suspension_record(
    dev: &Development,
    dev2: &Development,
    map: &CombinatorialMap,
    s: &SuspensionStructure,
    eps_len: f64,
    cfg: &SolverConfig,
) -> Result<SuspensionRecord, SuspensionError> {
    let p = suspension_problem(dev, dev2, map, s, eps_len, cfg)?;
    let result = solve_positive(&p.system, &p.init, cfg);
    let projected = project_alpha(&result, &p.system, cfg);
    let delta_set = match projected.status() {
        AlphaStatus::Certified => AlphaSet::new(
            projected
                .intervals()
                .iter()
                .map(|i| crate::interval::Interval::new((i.lo * p.back).next_down(), (i.hi * p.back).next_up()))
                .collect(),
            AlphaStatus::Certified,
        ),
        AlphaStatus::Incomplete => projected,
    };
    let outcome = match &result {
        SolveResult::CertifiedEmpty { .. } => "no positive solution".to_string(),
        SolveResult::Clusters { clusters } => format!("{} solution cluster(s)", clusters.len()),
        SolveResult::Inconclusive { reason, .. } => reason.clone(),
    };
    let (south, north, equator) = names(dev, s);
    Ok(SuspensionRecord {
        south,
        north,
        equator,
        outcome,
        residual: result.best_residual(),
        delta_set,
    })
}

/// NotAffineEquivalent when the system has certifiably no positive solution
/// for the chosen structure(s); Inconclusive otherwise. With `all_pairings`
/// every pole pair of `dev` is tried and any certified failure decides.
pub fn suspension_certificate(
    dev: &Development,
    dev2: &Development,
    map: &CombinatorialMap,
    eps_len: f64,
    cfg: &SolverConfig,
    all_pairings: bool,
) -> Result<Verdict, SuspensionError> {
    let structures = if all_pairings {
        all_suspension_structures(dev)
    } else {
        detect_suspension(dev).into_iter().collect()
    };
    if structures.is_empty() {
        return Err(SuspensionError::NotASuspension);
    }
    let records = structures
        .iter()
        .map(|s| suspension_record(dev, dev2, map, s, eps_len, cfg))
        .collect::<Result<Vec<_>, _>>()?;
    let refuted = records.iter().any(|r| r.delta_set.is_certified() && r.delta_set.is_empty());
    let alpha_intersection = if refuted {
        AlphaSet::empty()
    } else {
        crate::solver::intersect_alpha_sets(&records.iter().map(|r| r.delta_set.clone()).collect::<Vec<_>>())
    };
    Ok(Verdict {
        kind: if refuted {
            VerdictKind::NotAffineEquivalent
        } else {
            VerdictKind::Inconclusive
        },
        stage: Stage::Suspension,
        alpha_intersection,
        evidence: Evidence {
            suspension: records,
            ..Evidence::default()
        },
    })
}
