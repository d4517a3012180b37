//! Certified branch-and-prune over positive boxes, and α-set algebra.
//!
//! A sub-box is discarded only when an outward-rounded interval enclosure of
//! some equation excludes zero, or when an interval Newton projection of a
//! single variable comes back empty. Both are conservative: a box holding a
//! real root is never thrown away, so `CertifiedEmpty` is a proof that the
//! system has no solution in the search box.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::interval::Interval;
use crate::poly::Poly;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum VarKind {
    /// The squared Jacobian α (or δ for suspensions); searched on a log scale.
    Scale,
    /// A squared distance between two vertices.
    SquaredLength,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Variable {
    pub name: String,
    pub kind: VarKind,
}

impl Variable {
    pub fn scale(name: &str) -> Self {
        Variable {
            name: name.to_string(),
            kind: VarKind::Scale,
        }
    }

    pub fn squared(name: &str) -> Self {
        Variable {
            name: name.to_string(),
            kind: VarKind::SquaredLength,
        }
    }
}

/// Real polynomial equations `p(x) = 0` over named variables.
#[derive(Clone, Debug)]
pub struct PolySystem {
    variables: Vec<Variable>,
    equations: Vec<Poly>,
    nonnegative: Vec<Poly>,
}

impl PolySystem {
    pub fn new(variables: Vec<Variable>, equations: Vec<Poly>) -> Self {
        assert!(
            equations.iter().all(|e| e.nvars() == variables.len()),
            "equation arity must match the variable list"
        );
        PolySystem {
            variables,
            equations,
            nonnegative: Vec::new(),
        }
    }

    /// Side conditions `p(x) >= 0` satisfied by every geometric solution
    /// (squared volumes of real simplices). Boxes on which one of them is
    /// negative throughout are discarded.
    pub fn with_nonnegative(mut self, polys: Vec<Poly>) -> Self {
        assert!(polys.iter().all(|e| e.nvars() == self.variables.len()));
        self.nonnegative = polys;
        self
    }

    pub fn nonnegative(&self) -> &[Poly] {
        &self.nonnegative
    }

    pub fn variables(&self) -> &[Variable] {
        &self.variables
    }

    pub fn equations(&self) -> &[Poly] {
        &self.equations
    }

    pub fn num_vars(&self) -> usize {
        self.variables.len()
    }

    pub fn var_index(&self, name: &str) -> Option<usize> {
        self.variables.iter().position(|v| v.name == name)
    }

    pub fn scale_var(&self) -> Option<usize> {
        self.variables.iter().position(|v| v.kind == VarKind::Scale)
    }

    pub fn residuals(&self, x: &[f64]) -> Vec<f64> {
        self.equations.iter().map(|e| e.eval(x)).collect()
    }

    /// Largest equation value relative to the sum of its absolute term values.
    pub fn relative_residual(&self, x: &[f64]) -> f64 {
        self.equations
            .iter()
            .map(|e| {
                let v = e.eval(x).abs();
                let m = e.magnitude(x);
                if m > 0.0 {
                    v / m
                } else {
                    v
                }
            })
            .fold(0.0, f64::max)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct IntervalBox(pub Vec<Interval>);

impl IntervalBox {
    pub fn dims(&self) -> usize {
        self.0.len()
    }

    pub fn mid(&self) -> Vec<f64> {
        self.0.iter().map(Interval::mid).collect()
    }

    pub fn contains(&self, x: &[f64]) -> bool {
        self.0.iter().zip(x).all(|(i, v)| i.contains(*v))
    }

    pub fn hull(&self, other: &IntervalBox) -> IntervalBox {
        IntervalBox(self.0.iter().zip(&other.0).map(|(a, b)| a.hull(b)).collect())
    }

    fn touches(&self, other: &IntervalBox, slack: &[f64]) -> bool {
        self.0
            .iter()
            .zip(&other.0)
            .zip(slack)
            .all(|((a, b), s)| a.lo <= b.hi + s && b.lo <= a.hi + s)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct SolverConfig {
    /// Bisection limit per variable.
    pub max_depth: u32,
    /// Relative residual accepted for a refined root, and α inflation.
    pub eps_res: f64,
    /// Leaf width relative to the initial width (lengths) or magnitude (α).
    pub eps_width: f64,
    /// α is searched in `[1/alpha_bound, alpha_bound]`.
    pub alpha_bound: f64,
    /// Total number of boxes processed before giving up.
    pub max_boxes: usize,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            max_depth: 40,
            eps_res: 1e-8,
            eps_width: 1e-6,
            alpha_bound: 1e6,
            max_boxes: 20_000,
        }
    }
}

/// Lengths of two sides of a triangle closing on the unknown diagonal.
#[derive(Clone, Debug, PartialEq)]
pub struct Flank {
    pub var: usize,
    pub sides: Vec<(f64, f64)>,
}

/// Initial search box: every squared diagonal within the triangle-inequality
/// range of each of its flanks, α within the configured bound.
pub fn feasible_box(system: &PolySystem, flanks: &[Flank], cfg: &SolverConfig) -> IntervalBox {
    let mut out = Vec::with_capacity(system.num_vars());
    for (i, v) in system.variables().iter().enumerate() {
        match v.kind {
            VarKind::Scale => out.push(Interval::new(1.0 / cfg.alpha_bound, cfg.alpha_bound)),
            VarKind::SquaredLength => {
                let mut lo: f64 = 0.0;
                let mut hi = f64::INFINITY;
                for f in flanks.iter().filter(|f| f.var == i) {
                    for &(a, b) in &f.sides {
                        let l = (a - b).abs();
                        lo = lo.max(l * l);
                        hi = hi.min((a + b) * (a + b));
                    }
                }
                assert!(hi.is_finite(), "squared variable {} has no flank", v.name);
                // outward by a few ulps: the flank lengths are rounded themselves
                let lo = (lo * (1.0 - 4.0 * f64::EPSILON)).next_down().max(0.0);
                let hi = (hi * (1.0 + 4.0 * f64::EPSILON)).next_up();
                out.push(Interval::new(lo.min(hi), hi));
            }
        }
    }
    IntervalBox(out)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Cluster {
    pub hull: IntervalBox,
    pub leaves: usize,
    /// Refined point inside (or near) the hull.
    pub point: Vec<f64>,
    pub residual: f64,
    pub verified: bool,
    /// Touches zero in a squared-length variable.
    pub boundary: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "outcome", rename_all = "camelCase")]
pub enum SolveResult {
    /// No positive solution in the box. `boundary` lists clusters that only
    /// touch the closed boundary of the positive orthant.
    CertifiedEmpty { boundary: Vec<Cluster> },
    Clusters { clusters: Vec<Cluster> },
    Inconclusive {
        reason: String,
        clusters: Vec<Cluster>,
    },
}

impl SolveResult {
    pub fn is_certified_empty(&self) -> bool {
        matches!(self, SolveResult::CertifiedEmpty { .. })
    }

    pub fn is_inconclusive(&self) -> bool {
        matches!(self, SolveResult::Inconclusive { .. })
    }

    pub fn clusters(&self) -> &[Cluster] {
        match self {
            SolveResult::CertifiedEmpty { boundary } => boundary,
            SolveResult::Clusters { clusters } | SolveResult::Inconclusive { clusters, .. } => clusters,
        }
    }

    pub fn best_residual(&self) -> Option<f64> {
        self.clusters()
            .iter()
            .filter(|c| !c.boundary)
            .map(|c| c.residual)
            .reduce(f64::min)
    }
}

struct Prepared<'a> {
    system: &'a PolySystem,
    supports: Vec<Vec<usize>>,
    grads: Vec<Vec<Poly>>,
    nn_supports: Vec<Vec<usize>>,
    nn_grads: Vec<Vec<Poly>>,
    kinds: Vec<VarKind>,
    base_width: Vec<f64>,
    cfg: SolverConfig,
}

impl<'a> Prepared<'a> {
    fn new(system: &'a PolySystem, init: &IntervalBox, cfg: &SolverConfig) -> Self {
        let supports: Vec<Vec<usize>> = system.equations().iter().map(Poly::support).collect();
        let grads = system
            .equations()
            .iter()
            .map(|e| (0..system.num_vars()).map(|v| e.derivative(v)).collect())
            .collect();
        let nn_supports = system.nonnegative().iter().map(Poly::support).collect();
        let nn_grads = system
            .nonnegative()
            .iter()
            .map(|e| (0..system.num_vars()).map(|v| e.derivative(v)).collect())
            .collect();
        Prepared {
            system,
            supports,
            grads,
            nn_supports,
            nn_grads,
            kinds: system.variables().iter().map(|v| v.kind).collect(),
            base_width: init.0.iter().map(|i| i.width().max(f64::MIN_POSITIVE)).collect(),
            cfg: *cfg,
        }
    }

    fn tol(&self, b: &IntervalBox, v: usize) -> f64 {
        match self.kinds[v] {
            VarKind::Scale => self.cfg.eps_width * b.0[v].mid().abs().max(1.0 / self.cfg.alpha_bound),
            VarKind::SquaredLength => self.cfg.eps_width * self.base_width[v],
        }
    }

    /// Narrow `b[v]` to the values compatible with `p(x) ∈ target` by a
    /// one-variable interval Newton step; `None` when none remain.
    fn project(&self, p: &Poly, grad: &Poly, target: Interval, b: &mut IntervalBox, v: usize) -> Option<()> {
        let xv = b.0[v];
        if xv.width() == 0.0 {
            return Some(());
        }
        let m = xv.mid();
        let mut at_mid = b.0.clone();
        at_mid[v] = Interval::point(m);
        let fm = p.eval_interval(&at_mid);
        let d = grad.eval_interval(&b.0);
        let mut hull: Option<Interval> = None;
        for piece in (target - fm).extended_div(&d) {
            let shifted = Interval::new(
                if piece.lo.is_finite() { (piece.lo + m).next_down() } else { piece.lo },
                if piece.hi.is_finite() { (piece.hi + m).next_up() } else { piece.hi },
            );
            if let Some(x) = shifted.intersect(&xv) {
                hull = Some(hull.map_or(x, |h| h.hull(&x)));
            }
        }
        b.0[v] = hull?;
        Some(())
    }

    /// Shrink the box; `None` when it provably holds no root.
    fn contract(&self, mut b: IntervalBox) -> Option<IntervalBox> {
        let nonneg = Interval::new(0.0, f64::INFINITY);
        for _round in 0..6 {
            let before: f64 = (0..b.dims()).map(|v| b.0[v].width() / self.tol(&b, v)).sum();
            for (e, eq) in self.system.equations().iter().enumerate() {
                if !eq.eval_interval(&b.0).contains_zero() {
                    return None;
                }
                for &v in &self.supports[e] {
                    self.project(eq, &self.grads[e][v], Interval::ZERO, &mut b, v)?;
                }
            }
            for (k, p) in self.system.nonnegative().iter().enumerate() {
                if p.eval_interval(&b.0).hi < 0.0 {
                    return None;
                }
                for &v in &self.nn_supports[k] {
                    self.project(p, &self.nn_grads[k][v], nonneg, &mut b, v)?;
                }
            }
            // mean-value enclosure around the midpoint, intersected with the natural one
            let c = b.mid();
            let cb: Vec<Interval> = c.iter().map(|&x| Interval::point(x)).collect();
            for (e, eq) in self.system.equations().iter().enumerate() {
                let mut acc = eq.eval_interval(&cb);
                for &v in &self.supports[e] {
                    let g = self.grads[e][v].eval_interval(&b.0);
                    acc = acc + g * (b.0[v] - cb[v]);
                }
                if !acc.contains_zero() {
                    return None;
                }
            }
            let after: f64 = (0..b.dims()).map(|v| b.0[v].width() / self.tol(&b, v)).sum();
            if after > 0.9 * before {
                break;
            }
        }
        Some(b)
    }

    /// Krawczyk test on a square subsystem chosen at the box midpoint.
    fn krawczyk(&self, b: &IntervalBox) -> Krawczyk {
        let n = b.dims();
        let m = self.system.equations().len();
        if m < n {
            return Krawczyk::Skip;
        }
        let c = b.mid();
        let jc = DMatrix::from_fn(m, n, |i, v| self.grads[i][v].eval(&c));
        let Some(rows) = independent_rows(&jc, n) else {
            return Krawczyk::Skip;
        };
        let jsq = DMatrix::from_fn(n, n, |i, v| jc[(rows[i], v)]);
        let Some(y) = jsq.try_inverse() else {
            return Krawczyk::Skip;
        };
        if y.iter().any(|v| !v.is_finite()) {
            return Krawczyk::Skip;
        }
        let cb: Vec<Interval> = c.iter().map(|&x| Interval::point(x)).collect();
        let fc: Vec<Interval> = rows.iter().map(|&r| self.system.equations()[r].eval_interval(&cb)).collect();
        let jb: Vec<Vec<Interval>> = rows
            .iter()
            .map(|&r| (0..n).map(|v| self.grads[r][v].eval_interval(&b.0)).collect())
            .collect();
        let dx: Vec<Interval> = (0..n).map(|j| b.0[j] - cb[j]).collect();
        let mut out = Vec::with_capacity(n);
        let mut inside = true;
        for i in 0..n {
            let mut k = cb[i];
            for (kk, f) in fc.iter().enumerate() {
                k = k - Interval::point(y[(i, kk)]) * *f;
            }
            for j in 0..n {
                let mut mij = if i == j { Interval::ONE } else { Interval::ZERO };
                for (kk, row) in jb.iter().enumerate() {
                    mij = mij - Interval::point(y[(i, kk)]) * row[j];
                }
                k = k + mij * dx[j];
            }
            if !(k.lo > b.0[i].lo && k.hi < b.0[i].hi) {
                inside = false;
            }
            match k.intersect(&b.0[i]) {
                Some(x) => out.push(x),
                None => return Krawczyk::Empty,
            }
        }
        let out = IntervalBox(out);
        if inside {
            Krawczyk::Unique(out)
        } else {
            Krawczyk::Contracted(out)
        }
    }

    fn is_leaf(&self, b: &IntervalBox) -> bool {
        (0..b.dims()).all(|v| b.0[v].width() <= self.tol(b, v))
    }

    /// Variable to bisect and where. α spanning more than a factor of 4 is
    /// split geometrically first; otherwise the variable with the largest
    /// smear `max_e |∂f_e/∂x_v| · width_v`, among those above tolerance.
    fn split(&self, b: &IntervalBox, depth: &[u32]) -> Option<(usize, f64)> {
        let open = |v: usize| depth[v] < self.cfg.max_depth && b.0[v].width() > self.tol(b, v);
        for v in 0..b.dims() {
            let x = b.0[v];
            if open(v) && self.kinds[v] == VarKind::Scale && x.lo > 0.0 && x.hi / x.lo > 4.0 {
                return Some((v, (x.lo * x.hi).sqrt()));
            }
        }
        let mut best: Option<(usize, f64)> = None;
        for v in (0..b.dims()).filter(|&v| open(v)) {
            let score = b.0[v].width() / self.tol(b, v);
            if best.map_or(true, |(_, s)| score > s) {
                best = Some((v, score));
            }
        }
        best.map(|(v, _)| (v, b.0[v].mid()))
    }

    fn slack(&self, b: &IntervalBox) -> Vec<f64> {
        (0..b.dims()).map(|v| self.tol(b, v)).collect()
    }

    fn boundary(&self, b: &IntervalBox) -> bool {
        (0..b.dims()).any(|v| self.kinds[v] == VarKind::SquaredLength && b.0[v].lo <= self.tol(b, v))
    }

    /// Damped Gauss–Newton from the hull midpoint, kept inside a slightly
    /// enlarged hull.
    fn refine(&self, hull: &IntervalBox) -> (Vec<f64>, f64) {
        let n = self.system.num_vars();
        let lo: Vec<f64> = (0..n).map(|v| (hull.0[v].lo - hull.0[v].width()).max(0.0)).collect();
        let hi: Vec<f64> = (0..n).map(|v| hull.0[v].hi + hull.0[v].width()).collect();
        let clamp = |x: &mut Vec<f64>| {
            for v in 0..n {
                x[v] = x[v].clamp(lo[v], hi[v]);
            }
        };
        let norm = |x: &[f64]| -> f64 { self.system.residuals(x).iter().map(|r| r * r).sum::<f64>() };
        let mut x = hull.mid();
        let mut fx = norm(&x);
        for _ in 0..30 {
            let r = DVector::from_vec(self.system.residuals(&x));
            if r.amax() == 0.0 {
                break;
            }
            let m = self.system.equations().len();
            let j = DMatrix::from_fn(m, n, |i, v| self.grads[i][v].eval(&x));
            let svd = j.svd(true, true);
            let Ok(step) = svd.solve(&r, 1e-14 * svd.singular_values.max()) else {
                break;
            };
            let mut lambda = 1.0;
            let mut improved = false;
            for _ in 0..20 {
                let mut cand: Vec<f64> = (0..n).map(|v| x[v] - lambda * step[v]).collect();
                clamp(&mut cand);
                let fc = norm(&cand);
                if fc < fx {
                    x = cand;
                    fx = fc;
                    improved = true;
                    break;
                }
                lambda *= 0.5;
            }
            if !improved {
                break;
            }
        }
        let res = self.system.relative_residual(&x);
        (x, res)
    }
}

enum Krawczyk {
    /// No root of the chosen subsystem in the box.
    Empty,
    /// Exactly one root of the subsystem, inside the returned box.
    Unique(IntervalBox),
    Contracted(IntervalBox),
    Skip,
}

/// `k` rows of `j` chosen greedily to be as independent as possible.
fn independent_rows(j: &DMatrix<f64>, k: usize) -> Option<Vec<usize>> {
    let m = j.nrows();
    if m == k {
        return Some((0..m).collect());
    }
    let mut rows: Vec<DVector<f64>> = (0..m).map(|i| j.row(i).transpose()).collect();
    let mut chosen = Vec::with_capacity(k);
    for _ in 0..k {
        let (best, norm) = (0..m)
            .filter(|i| !chosen.contains(i))
            .map(|i| (i, rows[i].norm()))
            .fold((usize::MAX, 0.0), |acc, x| if x.1 > acc.1 { x } else { acc });
        if best == usize::MAX || norm <= 1e-300 {
            return None;
        }
        let q = rows[best].clone() / norm;
        for (i, r) in rows.iter_mut().enumerate() {
            if !chosen.contains(&i) && i != best {
                let d = r.dot(&q);
                *r -= &q * d;
            }
        }
        chosen.push(best);
    }
    chosen.sort();
    Some(chosen)
}

fn make_clusters(prep: &Prepared, leaves: Vec<IntervalBox>) -> Vec<Cluster> {
    let n = leaves.len();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut [usize], mut i: usize) -> usize {
        while p[i] != i {
            p[i] = p[p[i]];
            i = p[i];
        }
        i
    }
    for i in 0..n {
        let slack = prep.slack(&leaves[i]);
        for j in i + 1..n {
            if leaves[i].touches(&leaves[j], &slack) {
                let (a, b) = (find(&mut parent, i), find(&mut parent, j));
                if a != b {
                    parent[a.max(b)] = a.min(b);
                }
            }
        }
    }
    let mut groups: Vec<(usize, IntervalBox, usize)> = Vec::new();
    for i in 0..n {
        let r = find(&mut parent, i);
        match groups.iter_mut().find(|g| g.0 == r) {
            Some(g) => {
                g.1 = g.1.hull(&leaves[i]);
                g.2 += 1;
            }
            None => groups.push((r, leaves[i].clone(), 1)),
        }
    }
    groups
        .into_iter()
        .map(|(_, hull, count)| {
            let (point, residual) = prep.refine(&hull);
            Cluster {
                boundary: prep.boundary(&hull),
                verified: residual <= prep.cfg.eps_res,
                hull,
                leaves: count,
                point,
                residual,
            }
        })
        .collect()
}

const MAX_LEAVES: usize = 4096;

/// Interval branch-and-prune for all solutions of `system` in `init`.
///
/// Exploration is depth-first in a fixed order, so the result depends only
/// on the inputs.
pub fn solve_positive(system: &PolySystem, init: &IntervalBox, cfg: &SolverConfig) -> SolveResult {
    assert_eq!(init.dims(), system.num_vars());
    let prep = Prepared::new(system, init, cfg);
    let mut stack: Vec<(IntervalBox, Vec<u32>)> = vec![(init.clone(), vec![0; init.dims()])];
    let mut leaves = Vec::new();
    let mut depth_limited = Vec::new();
    let mut processed = 0usize;
    while let Some((b, depth)) = stack.pop() {
        processed += 1;
        if processed > cfg.max_boxes || leaves.len() + depth_limited.len() > MAX_LEAVES {
            let reason = format!(
                "search budget exhausted ({processed} boxes, {} leaves, {} at depth limit)",
                leaves.len(),
                depth_limited.len()
            );
            let mut rest: Vec<IntervalBox> = stack.into_iter().map(|(b, _)| b).collect();
            rest.push(b);
            rest.extend(leaves);
            rest.extend(depth_limited);
            let hull = rest.iter().skip(1).fold(rest[0].clone(), |h, x| h.hull(x));
            let (point, residual) = prep.refine(&hull);
            return SolveResult::Inconclusive {
                reason,
                clusters: vec![Cluster {
                    boundary: prep.boundary(&hull),
                    verified: residual <= cfg.eps_res,
                    hull,
                    leaves: rest.len(),
                    point,
                    residual,
                }],
            };
        }
        let Some(mut b) = prep.contract(b) else {
            continue;
        };
        match prep.krawczyk(&b) {
            Krawczyk::Empty => continue,
            Krawczyk::Unique(mut k) => {
                // one root here at most: shrink it instead of subdividing
                for _ in 0..30 {
                    if prep.is_leaf(&k) {
                        break;
                    }
                    match prep.krawczyk(&k) {
                        Krawczyk::Unique(k2) | Krawczyk::Contracted(k2) => {
                            if k2 == k {
                                break;
                            }
                            k = k2;
                        }
                        Krawczyk::Empty | Krawczyk::Skip => break,
                    }
                }
                if prep.contract(k.clone()).is_some() {
                    leaves.push(k);
                }
                continue;
            }
            Krawczyk::Contracted(k) => b = k,
            Krawczyk::Skip => {}
        }
        if prep.is_leaf(&b) {
            leaves.push(b);
            continue;
        }
        match prep.split(&b, &depth) {
            None => depth_limited.push(b),
            Some((v, at)) => {
                let x = b.0[v];
                let at = at.clamp(x.lo, x.hi);
                let mut lower = b.clone();
                lower.0[v] = Interval::new(x.lo, at);
                let mut upper = b;
                upper.0[v] = Interval::new(at, x.hi);
                let mut d = depth;
                d[v] += 1;
                stack.push((upper, d.clone()));
                stack.push((lower, d));
            }
        }
    }

    let limited = make_clusters(&prep, depth_limited);
    if limited.iter().any(|c| !c.verified) {
        let mut clusters = limited;
        clusters.extend(make_clusters(&prep, leaves));
        return SolveResult::Inconclusive {
            reason: "depth limit reached on boxes that fail residual verification".to_string(),
            clusters,
        };
    }
    let mut clusters = make_clusters(&prep, leaves);
    clusters.extend(limited);
    if clusters.iter().all(|c| c.boundary) {
        return SolveResult::CertifiedEmpty { boundary: clusters };
    }
    SolveResult::Clusters { clusters }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum AlphaStatus {
    Certified,
    Incomplete,
}

/// Finite union of disjoint closed α-intervals, sorted.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AlphaSet {
    intervals: Vec<Interval>,
    status: AlphaStatus,
}

impl AlphaSet {
    pub fn new(mut intervals: Vec<Interval>, status: AlphaStatus) -> Self {
        intervals.sort_by(|a, b| a.lo.total_cmp(&b.lo));
        let mut merged: Vec<Interval> = Vec::with_capacity(intervals.len());
        for i in intervals {
            match merged.last_mut() {
                Some(last) if i.lo <= last.hi => last.hi = last.hi.max(i.hi),
                _ => merged.push(i),
            }
        }
        AlphaSet {
            intervals: merged,
            status,
        }
    }

    pub fn empty() -> Self {
        AlphaSet::new(Vec::new(), AlphaStatus::Certified)
    }

    /// The whole search range `[1/bound, bound]`.
    pub fn full(cfg: &SolverConfig, status: AlphaStatus) -> Self {
        AlphaSet::new(vec![Interval::new(1.0 / cfg.alpha_bound, cfg.alpha_bound)], status)
    }

    /// `[lo (1 - rel), hi (1 + rel)]`, outward rounded.
    pub fn inflated(x: Interval, rel: f64, status: AlphaStatus) -> Self {
        let lo = (x.lo - x.lo.abs() * rel).next_down();
        let hi = (x.hi + x.hi.abs() * rel).next_up();
        AlphaSet::new(vec![Interval::new(lo, hi)], status)
    }

    pub fn intervals(&self) -> &[Interval] {
        &self.intervals
    }

    pub fn status(&self) -> AlphaStatus {
        self.status
    }

    pub fn is_certified(&self) -> bool {
        self.status == AlphaStatus::Certified
    }

    pub fn is_empty(&self) -> bool {
        self.intervals.is_empty()
    }

    pub fn contains(&self, x: f64) -> bool {
        self.intervals.iter().any(|i| i.contains(x))
    }

    pub fn intersect(&self, other: &AlphaSet) -> AlphaSet {
        let mut out = Vec::new();
        for a in &self.intervals {
            for b in &other.intervals {
                if let Some(c) = a.intersect(b) {
                    out.push(c);
                }
            }
        }
        let status = if self.is_certified() && other.is_certified() {
            AlphaStatus::Certified
        } else {
            AlphaStatus::Incomplete
        };
        AlphaSet::new(out, status)
    }

    /// `{1/α}`: α-sets computed with the two sides swapped.
    pub fn reciprocal(&self) -> AlphaSet {
        let out = self
            .intervals
            .iter()
            .filter_map(|i| i.recip())
            .collect();
        AlphaSet::new(out, self.status)
    }
}

/// α-projection of a solver outcome: an outer enclosure of the α values of
/// all positive solutions.
pub fn project_alpha(result: &SolveResult, system: &PolySystem, cfg: &SolverConfig) -> AlphaSet {
    let Some(a) = system.scale_var() else {
        return AlphaSet::full(cfg, AlphaStatus::Incomplete);
    };
    match result {
        SolveResult::CertifiedEmpty { .. } => AlphaSet::empty(),
        SolveResult::Clusters { clusters } => {
            let pieces: Vec<Interval> = clusters
                .iter()
                .filter(|c| !c.boundary)
                .flat_map(|c| AlphaSet::inflated(c.hull.0[a], cfg.eps_res, AlphaStatus::Certified).intervals)
                .collect();
            AlphaSet::new(pieces, AlphaStatus::Certified)
        }
        SolveResult::Inconclusive { .. } => AlphaSet::full(cfg, AlphaStatus::Incomplete),
    }
}

/// Intersection of all sets; certified only when every input is.
pub fn intersect_alpha_sets(sets: &[AlphaSet]) -> AlphaSet {
    let mut it = sets.iter();
    let first = it.next().expect("at least one α-set").clone();
    it.fold(first, |acc, s| acc.intersect(s))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn one_var(p: Poly, kind: VarKind) -> PolySystem {
        PolySystem::new(
            vec![Variable {
                name: "x".into(),
                kind,
            }],
            vec![p],
        )
    }

    fn x_sq_minus(c: f64) -> Poly {
        let x = Poly::var(1, 0);
        x.mul(&x).sub(&Poly::from_f64(1, c))
    }

    #[test]
    fn single_root_cluster() {
        let sys = one_var(x_sq_minus(4.0), VarKind::SquaredLength);
        let b = IntervalBox(vec![Interval::new(0.0, 10.0)]);
        let r = solve_positive(&sys, &b, &SolverConfig::default());
        let SolveResult::Clusters { clusters } = r else {
            panic!("expected clusters, got {r:?}");
        };
        assert_eq!(clusters.len(), 1);
        assert!((clusters[0].point[0] - 2.0).abs() < 1e-12);
        assert!(clusters[0].verified);
        assert!(clusters[0].hull.0[0].contains(2.0));
    }

    #[test]
    fn no_real_root_is_certified_empty() {
        let sys = one_var(x_sq_minus(-1.0), VarKind::SquaredLength);
        let b = IntervalBox(vec![Interval::new(0.0, 10.0)]);
        assert!(solve_positive(&sys, &b, &SolverConfig::default()).is_certified_empty());
    }

    #[test]
    fn alpha_set_algebra() {
        let s = |lo, hi| AlphaSet::new(vec![Interval::new(lo, hi)], AlphaStatus::Certified);
        let i = s(1.0, 2.0).intersect(&s(1.5, 3.0));
        assert_eq!(i.intervals(), &[Interval::new(1.5, 2.0)]);
        assert!(s(1.0, 2.0).intersect(&s(3.0, 4.0)).is_empty());
        let inc = AlphaSet::new(vec![Interval::new(0.0, 9.0)], AlphaStatus::Incomplete);
        assert_eq!(s(1.0, 2.0).intersect(&inc).status(), AlphaStatus::Incomplete);
    }

    #[test]
    fn projection_rules() {
        let cfg = SolverConfig::default();
        let sys = one_var(x_sq_minus(4.0), VarKind::Scale);
        let empty = project_alpha(&SolveResult::CertifiedEmpty { boundary: vec![] }, &sys, &cfg);
        assert!(empty.is_empty() && empty.is_certified());
        let cluster = Cluster {
            hull: IntervalBox(vec![Interval::new(0.99, 1.01)]),
            leaves: 1,
            point: vec![1.0],
            residual: 0.0,
            verified: true,
            boundary: false,
        };
        let one = project_alpha(&SolveResult::Clusters { clusters: vec![cluster] }, &sys, &cfg);
        assert!(one.contains(0.99) && one.contains(1.01) && !one.contains(1.02));
        let inc = project_alpha(
            &SolveResult::Inconclusive {
                reason: String::new(),
                clusters: vec![],
            },
            &sys,
            &cfg,
        );
        assert_eq!(inc.intervals(), &[Interval::new(1e-6, 1e6)]);
        assert_eq!(inc.status(), AlphaStatus::Incomplete);
    }

    #[test]
    fn flank_box() {
        let sys = one_var(x_sq_minus(1.0), VarKind::SquaredLength);
        let b = feasible_box(
            &sys,
            &[Flank {
                var: 0,
                sides: vec![(1.0, 1.0)],
            }],
            &SolverConfig::default(),
        );
        assert_eq!(b.0[0].lo, 0.0);
        assert!(b.0[0].hi >= 4.0 && b.0[0].hi < 4.0 + 1e-12);
    }
}
