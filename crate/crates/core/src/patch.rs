//! Patches: a vertex with three consecutive faces of its star, and the
//! polynomial data relating a patch to its counterpart on a second development.
//!
//! Convention throughout: α = (det A)², so for valency 3 α = q′/q.

use serde::Serialize;
use thiserror::Error;

use crate::cmgeom::{cayley_menger_det, DistanceSpec};
use crate::development::{CombinatorialMap, DevError, Development, FaceId, Star, VertexId};
use crate::interval::Interval;
use crate::poly::{det, Poly};
use crate::solver::{
    feasible_box, project_alpha, solve_positive, AlphaSet, AlphaStatus, Flank, PolySystem, IntervalBox,
    SolveResult, SolverConfig, Variable,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum ValencyClass {
    N3,
    N4,
    N5Plus,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Patch {
    pub center: VertexId,
    /// Index of the first wedge of the window in star order.
    pub window: usize,
    pub faces: [FaceId; 3],
    /// x̃_1 … x̃_m: three for valency 3, four otherwise.
    pub rim: Vec<VertexId>,
    pub class: ValencyClass,
    /// Remaining star face of a valency-4 vertex; carries ρ(x̃_1, x̃_4).
    pub fourth_face: Option<FaceId>,
}

impl Patch {
    /// `[x̃_0, x̃_1, …]`.
    pub fn points(&self) -> Vec<VertexId> {
        std::iter::once(self.center).chain(self.rim.iter().copied()).collect()
    }

    /// The same patch seen through `map` on the other development.
    pub fn mapped(&self, map: &CombinatorialMap) -> Patch {
        Patch {
            center: map.vertex(self.center),
            window: self.window,
            faces: self.faces.map(|f| map.face(f)),
            rim: self.rim.iter().map(|&v| map.vertex(v)).collect(),
            class: self.class,
            fourth_face: self.fourth_face.map(|f| map.face(f)),
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum PatchError {
    #[error("only {0} faces meet at {1}; a patch needs three")]
    TooFewFaces(usize, String),
    #[error("the faces at {0} do not form a single fan")]
    NonManifold(String),
    #[error(transparent)]
    Development(#[from] DevError),
    #[error("patches have different valency classes")]
    ClassMismatch,
    #[error("q3 = {q3}, q3' = {q3p}: a patch with these distances has no nondegenerate embedding")]
    Unrealizable { q3: f64, q3p: f64 },
}

fn star_of(dev: &Development, v: VertexId) -> Result<Star, PatchError> {
    dev.star(v)
        .ok_or_else(|| PatchError::NonManifold(dev.vertex_name(v).to_string()))
}

/// All windows of three consecutive star faces at `v`.
pub fn enumerate_patches(dev: &Development, v: VertexId) -> Result<Vec<Patch>, PatchError> {
    if v.0 >= dev.num_vertices() {
        return Err(DevError::UnknownVertex(v).into());
    }
    let star = star_of(dev, v)?;
    let w = &star.wedges;
    let n = w.len();
    if n < 3 {
        return Err(PatchError::TooFewFaces(n, dev.vertex_name(v).to_string()));
    }
    let windows = if star.cyclic { n } else { n - 2 };
    let class = match (star.cyclic, n) {
        (true, 3) => ValencyClass::N3,
        (true, 4) => ValencyClass::N4,
        _ => ValencyClass::N5Plus,
    };
    Ok((0..windows)
        .map(|i| {
            let (a, b, c) = (w[i], w[(i + 1) % n], w[(i + 2) % n]);
            let rim = match class {
                ValencyClass::N3 => vec![a.first, a.second, b.second],
                _ => vec![a.first, a.second, b.second, c.second],
            };
            Patch {
                center: v,
                window: i,
                faces: [a.face, b.face, c.face],
                rim,
                class,
                fourth_face: (class == ValencyClass::N4).then(|| w[(i + 3) % n].face),
            }
        })
        .collect())
}

/// Keep the first window for each distinct face set.
pub fn dedup_patches(patches: Vec<Patch>) -> Vec<Patch> {
    let mut seen = Vec::new();
    patches
        .into_iter()
        .filter(|p| {
            let mut key = p.faces;
            key.sort();
            if seen.contains(&key) {
                false
            } else {
                seen.push(key);
                true
            }
        })
        .collect()
}

/// Squared distances among x̃_0 … x̃_4; free slots are `None`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PatchDistances {
    pub class: ValencyClass,
    pub names: Vec<String>,
    d2: Vec<Vec<Option<f64>>>,
}

impl PatchDistances {
    /// Build directly from a table (symmetric, zero diagonal).
    pub fn from_table(class: ValencyClass, names: Vec<String>, d2: Vec<Vec<Option<f64>>>) -> Self {
        PatchDistances { class, names, d2 }
    }

    pub fn len(&self) -> usize {
        self.d2.len()
    }

    pub fn is_empty(&self) -> bool {
        self.d2.is_empty()
    }

    pub fn get(&self, i: usize, j: usize) -> Option<f64> {
        self.d2[i][j]
    }

    pub fn free_slots(&self) -> Vec<(usize, usize)> {
        free_pairs(self.class).to_vec()
    }

    fn known(&self, i: usize, j: usize) -> f64 {
        self.d2[i][j].expect("fixed slot")
    }

    fn len_of(&self, i: usize, j: usize) -> f64 {
        self.known(i, j).sqrt()
    }

    /// All squared distances multiplied by `s`.
    pub fn scaled(&self, s: f64) -> PatchDistances {
        PatchDistances {
            class: self.class,
            names: self.names.clone(),
            d2: self
                .d2
                .iter()
                .map(|r| r.iter().map(|x| x.map(|v| v * s)).collect())
                .collect(),
        }
    }

    fn max_known(&self) -> f64 {
        self.d2
            .iter()
            .flatten()
            .flatten()
            .cloned()
            .fold(0.0, f64::max)
    }
}

fn free_pairs(class: ValencyClass) -> &'static [(usize, usize)] {
    match class {
        ValencyClass::N3 => &[],
        ValencyClass::N4 => &[(1, 3), (2, 4)],
        ValencyClass::N5Plus => &[(1, 3), (2, 4), (1, 4)],
    }
}

pub fn patch_distances(dev: &Development, z: &Patch, eps_len: f64) -> Result<PatchDistances, PatchError> {
    let pts = z.points();
    let n = pts.len();
    let free = free_pairs(z.class);
    let mut d2 = vec![vec![Some(0.0); n]; n];
    for i in 0..n {
        for j in i + 1..n {
            let v = if free.contains(&(i, j)) {
                None
            } else {
                Some(dev.cofacial_sq_distance(pts[i], pts[j], eps_len)?)
            };
            d2[i][j] = v;
            d2[j][i] = v;
        }
    }
    Ok(PatchDistances {
        class: z.class,
        names: pts.iter().map(|&v| dev.vertex_name(v).to_string()).collect(),
        d2,
    })
}

fn spec_of(zd: &PatchDistances, idx: &[usize]) -> DistanceSpec {
    let n = idx.len();
    let mut d2 = vec![0.0; n * n];
    for (a, &i) in idx.iter().enumerate() {
        for (b, &j) in idx.iter().enumerate() {
            d2[a * n + b] = zd.known(i, j);
        }
    }
    DistanceSpec::new(n - 1, d2).expect("square table")
}

/// `(³q, ³q′)` for two valency-3 patches.
pub fn patch_scalar_n3(zd: &PatchDistances, zd2: &PatchDistances) -> (f64, f64) {
    let idx = [0, 1, 2, 3];
    (cayley_menger_det(&spec_of(zd, &idx)), cayley_menger_det(&spec_of(zd2, &idx)))
}

/// α = q3′ / q3.
pub fn alpha_n3(q3: f64, q3p: f64) -> Result<f64, PatchError> {
    if q3 <= 0.0 || q3p <= 0.0 {
        return Err(PatchError::Unrealizable { q3, q3p });
    }
    Ok(q3p / q3)
}

/// Cayley–Menger determinant of the points `idx` as a polynomial; free
/// pairs become the variables given by `slot`.
fn cm_poly(zd: &PatchDistances, idx: &[usize], nvars: usize, slot: &dyn Fn(usize, usize) -> Option<usize>) -> Poly {
    let n = idx.len() + 1;
    let mut m = vec![vec![Poly::zero(nvars); n]; n];
    for i in 1..n {
        m[0][i] = Poly::from_f64(nvars, 1.0);
        m[i][0] = Poly::from_f64(nvars, 1.0);
    }
    for (a, &i) in idx.iter().enumerate() {
        for (b, &j) in idx.iter().enumerate() {
            if i == j {
                continue;
            }
            m[a + 1][b + 1] = match zd.get(i, j) {
                Some(v) => Poly::from_f64(nvars, v),
                None => Poly::var(nvars, slot(i.min(j), i.max(j)).expect("free slot has a variable")),
            };
        }
    }
    det(&m)
}

/// Interval enclosure of a fully known Cayley–Menger determinant.
fn cm_enclosure(zd: &PatchDistances, idx: &[usize]) -> Interval {
    let p = cm_poly(zd, idx, 0, &|_, _| None);
    p.eval_interval(&[])
}

/// `T_j = {x_0 … x_4} \ {x_j}`.
fn tetra(j: usize) -> Vec<usize> {
    (0..5).filter(|&i| i != j).collect()
}

/// The ⁴q_j as polynomials in the free slots of one side.
fn side_polys(zd: &PatchDistances, nvars: usize, offset: usize) -> (Vec<Poly>, Option<Poly>) {
    let free = free_pairs(zd.class);
    let slot = |i: usize, j: usize| free.iter().position(|&p| p == (i, j)).map(|k| offset + k);
    let q: Vec<Poly> = (0..5).map(|j| cm_poly(zd, &tetra(j), nvars, &slot)).collect();
    let q5 = (zd.class == ValencyClass::N5Plus).then(|| cm_poly(zd, &[0, 1, 2, 3, 4], nvars, &slot));
    (q, q5)
}

fn build_system(zd: &PatchDistances, zd2: &PatchDistances) -> PolySystem {
    let free = free_pairs(zd.class);
    let k = free.len();
    let nvars = 1 + 2 * k;
    let names = ["u", "v", "w"];
    let mut vars = vec![Variable::scale("alpha")];
    vars.extend(names[..k].iter().map(|n| Variable::squared(n)));
    vars.extend(names[..k].iter().map(|n| Variable::squared(&format!("{n}'"))));
    let (q, q5) = side_polys(zd, nvars, 1);
    let (qp, q5p) = side_polys(zd2, nvars, 1 + k);
    let alpha = Poly::var(nvars, 0);
    let mut eqs: Vec<Poly> = (0..5).map(|j| qp[j].sub(&alpha.mul(&q[j]))).collect();
    eqs.extend(q5);
    eqs.extend(q5p);
    let nonneg = q.into_iter().chain(qp).collect();
    PolySystem::new(vars, eqs).with_nonnegative(nonneg)
}

/// System ⁴q′_j = α ⁴q_j, j = 0…4, in (α, u, v, u′, v′).
pub fn patch_system_n4(zd: &PatchDistances, zd2: &PatchDistances) -> PolySystem {
    assert!(zd.class == ValencyClass::N4 && zd2.class == ValencyClass::N4);
    build_system(zd, zd2)
}

/// The valency-4 equations plus ⁵q = 0 and ⁵q′ = 0, in (α, u, v, w, u′, v′, w′).
pub fn patch_system_n5(zd: &PatchDistances, zd2: &PatchDistances) -> PolySystem {
    assert!(zd.class == ValencyClass::N5Plus && zd2.class == ValencyClass::N5Plus);
    build_system(zd, zd2)
}

/// Triangle-inequality bounds on the free slots of one side.
fn flanks(zd: &PatchDistances, offset: usize) -> Vec<Flank> {
    free_pairs(zd.class)
        .iter()
        .enumerate()
        .map(|(k, &(i, j))| {
            // through the centre, and through every rim vertex joined to both
            let mut sides = vec![(zd.len_of(0, i), zd.len_of(0, j))];
            for m in 1..5 {
                if m != i && m != j && zd.get(i, m).is_some() && zd.get(m, j).is_some() {
                    sides.push((zd.len_of(i, m), zd.len_of(m, j)));
                }
            }
            Flank { var: offset + k, sides }
        })
        .collect()
}

/// Squared diagonals of the star laid flat: the three faces unfolded into
/// the plane around x̃_0, alternately turning to either side.
pub fn planar_unfolding(zd: &PatchDistances) -> Vec<f64> {
    let d = |i: usize, j: usize| zd.len_of(i, j);
    let mut p = vec![[0.0f64; 2]; 5];
    p[1] = [d(0, 1), 0.0];
    let place = |p: &[[f64; 2]], a: usize, b: usize, ra: f64, rb: f64, away_from: [f64; 2]| -> [f64; 2] {
        let (pa, pb) = (p[a], p[b]);
        let (dx, dy) = (pb[0] - pa[0], pb[1] - pa[1]);
        let l = (dx * dx + dy * dy).sqrt();
        let x = (ra * ra - rb * rb + l * l) / (2.0 * l);
        let h = (ra * ra - x * x).max(0.0).sqrt();
        let (ex, ey) = (dx / l, dy / l);
        let c1 = [pa[0] + x * ex - h * ey, pa[1] + x * ey + h * ex];
        let c2 = [pa[0] + x * ex + h * ey, pa[1] + x * ey - h * ex];
        let side = |q: [f64; 2]| dx * (q[1] - pa[1]) - dy * (q[0] - pa[0]);
        if side(c1) * side(away_from) <= 0.0 {
            c1
        } else {
            c2
        }
    };
    let up = [0.0, -1.0];
    p[2] = place(&p, 0, 1, d(0, 2), d(1, 2), up);
    p[3] = place(&p, 0, 2, d(0, 3), d(2, 3), p[1]);
    p[4] = place(&p, 0, 3, d(0, 4), d(3, 4), p[2]);
    let sq = |a: usize, b: usize| (p[a][0] - p[b][0]).powi(2) + (p[a][1] - p[b][1]).powi(2);
    free_pairs(zd.class).iter().map(|&(i, j)| sq(i, j)).collect()
}

/// α-set of one patch pair together with how it was obtained.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct PatchAlpha {
    pub alpha: AlphaSet,
    /// Best relative residual among reported solutions, when solved.
    pub residual: Option<f64>,
    pub note: String,
}

fn patch_scale(zd: &PatchDistances) -> f64 {
    let m = zd.max_known();
    if m > 0.0 {
        m
    } else {
        1.0
    }
}

/// α-set of a patch pair. Valency 3 is closed form; larger valencies go
/// through the solver on copies normalized to unit size, so the searched α
/// range is centred on the patch's own scale.
pub fn patch_alpha(zd: &PatchDistances, zd2: &PatchDistances, cfg: &SolverConfig) -> Result<PatchAlpha, PatchError> {
    if zd.class != zd2.class {
        return Err(PatchError::ClassMismatch);
    }
    if zd.class == ValencyClass::N3 {
        let idx = [0, 1, 2, 3];
        let (q, qp) = (cm_enclosure(zd, &idx), cm_enclosure(zd2, &idx));
        if q.hi <= 0.0 || qp.hi <= 0.0 {
            return Ok(PatchAlpha {
                alpha: AlphaSet::empty(),
                residual: None,
                note: format!("unrealizable: q3 in [{:e}, {:e}], q3' in [{:e}, {:e}]", q.lo, q.hi, qp.lo, qp.hi),
            });
        }
        if q.lo <= 0.0 || qp.lo <= 0.0 {
            return Ok(PatchAlpha {
                alpha: AlphaSet::full(cfg, AlphaStatus::Incomplete),
                residual: None,
                note: "q3 indistinguishable from zero".to_string(),
            });
        }
        let ratio = qp.checked_div(&q).expect("positive denominator");
        return Ok(PatchAlpha {
            alpha: AlphaSet::inflated(ratio, cfg.eps_res, AlphaStatus::Certified),
            residual: Some(0.0),
            note: "closed form q3'/q3".to_string(),
        });
    }

    let (system, init, back) = normalized_problem(zd, zd2, cfg);

    if zd.class == ValencyClass::N5Plus {
        // Flat stars solve every ⁴q_j = 0 and ⁵q = 0 at once, for every α.
        let s = patch_scale(zd);
        let s2 = patch_scale(zd2);
        let (w, w2) = (planar_unfolding(&zd.scaled(1.0 / s)), planar_unfolding(&zd2.scaled(1.0 / s2)));
        let flat = [1.0 / cfg.alpha_bound, 1.0, cfg.alpha_bound].iter().all(|&a| {
            let x: Vec<f64> = std::iter::once(a).chain(w.iter().copied()).chain(w2.iter().copied()).collect();
            system.relative_residual(&x) <= cfg.eps_res
        });
        if flat {
            return Ok(PatchAlpha {
                alpha: AlphaSet::full(cfg, AlphaStatus::Certified),
                residual: Some(0.0),
                note: "planar unfolding solves the system for every alpha".to_string(),
            });
        }
    }

    let result = solve_positive(&system, &init, cfg);
    let projected = project_alpha(&result, &system, cfg);
    let alpha = match projected.status() {
        AlphaStatus::Certified => AlphaSet::new(
            projected
                .intervals()
                .iter()
                .map(|i| scale_interval(*i, back))
                .collect(),
            AlphaStatus::Certified,
        ),
        AlphaStatus::Incomplete => projected,
    };
    let note = match &result {
        SolveResult::CertifiedEmpty { .. } => "no positive solution".to_string(),
        SolveResult::Clusters { clusters } => format!("{} solution cluster(s)", clusters.len()),
        SolveResult::Inconclusive { reason, .. } => reason.clone(),
    };
    Ok(PatchAlpha {
        alpha,
        residual: result.best_residual(),
        note,
    })
}

fn scale_interval(i: Interval, k: f64) -> Interval {
    Interval::new((i.lo * k).next_down(), (i.hi * k).next_up())
}

/// System and search box for a patch pair after scaling both patches to
/// unit size, and the factor mapping the normalized α back.
pub fn normalized_problem(
    zd: &PatchDistances,
    zd2: &PatchDistances,
    cfg: &SolverConfig,
) -> (PolySystem, IntervalBox, f64) {
    let (s, s2) = (patch_scale(zd), patch_scale(zd2));
    let (nz, nz2) = (zd.scaled(1.0 / s), zd2.scaled(1.0 / s2));
    // α_true = α_normalized · (L′/L)⁶ with L² = s
    let back = (s2 / s).powi(3);
    let system = build_system(&nz, &nz2);
    let mut fl = flanks(&nz, 1);
    let k = free_pairs(zd.class).len();
    fl.extend(flanks(&nz2, 1 + k));
    let init = feasible_box(&system, &fl, cfg);
    (system, init, back)
}

/// Patch distances for `z` on `dev` and its image on `dev2`.
pub fn patch_pair(
    dev: &Development,
    dev2: &Development,
    map: &CombinatorialMap,
    z: &Patch,
    eps_len: f64,
) -> Result<(PatchDistances, PatchDistances), PatchError> {
    let zd = patch_distances(dev, z, eps_len)?;
    let zd2 = patch_distances(dev2, &z.mapped(map), eps_len)?;
    Ok((zd, zd2))
}
