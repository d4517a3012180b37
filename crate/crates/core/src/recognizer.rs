//! The full pipeline: face screen, fast path, then α-sets over every patch
//! of every vertex, intersected.

use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::development::{CombinatorialMap, DevError, Development, VertexId};
use crate::patch::{enumerate_patches, patch_alpha, patch_pair, PatchError, ValencyClass};
use crate::simplepath::{simple_affine_verdict, EPS_AFF};
use crate::solver::{intersect_alpha_sets, AlphaSet, AlphaStatus, SolverConfig};
use crate::verdict::{Evidence, PatchRecord, Stage, Verdict, VerdictKind};

#[derive(Clone, Debug, PartialEq)]
pub struct RecognizeOptions {
    /// Also run the patches of the second development, with reciprocal α.
    pub symmetric: bool,
    /// Worker threads; `None` uses the global pool.
    pub jobs: Option<usize>,
    pub eps_len: f64,
    pub eps_aff: f64,
}

impl Default for RecognizeOptions {
    fn default() -> Self {
        RecognizeOptions {
            symmetric: false,
            jobs: None,
            eps_len: 1e-9,
            eps_aff: EPS_AFF,
        }
    }
}

#[derive(Debug, Error)]
pub enum RecognizeError {
    #[error(transparent)]
    Development(#[from] DevError),
    #[error(transparent)]
    Patch(#[from] PatchError),
    #[error("thread pool: {0}")]
    Pool(String),
}

/// α-sets for every window at `v`, in window order. All windows of a
/// valency-4 star see the same five points and the same known distances,
/// so that system is solved once.
fn vertex_records(
    dev: &Development,
    dev2: &Development,
    map: &CombinatorialMap,
    v: VertexId,
    cfg: &SolverConfig,
    eps_len: f64,
) -> Result<Vec<PatchRecord>, PatchError> {
    let patches = match enumerate_patches(dev, v) {
        Ok(p) => p,
        Err(PatchError::TooFewFaces(..)) => return Ok(Vec::new()),
        Err(e) => return Err(e),
    };
    let mut out: Vec<PatchRecord> = Vec::with_capacity(patches.len());
    for z in &patches {
        if z.class == ValencyClass::N4 {
            if let Some(first) = out.first() {
                out.push(PatchRecord {
                    window: z.window,
                    note: format!("same star as window {}: {}", first.window, first.note),
                    seconds: 0.0,
                    ..first.clone()
                });
                continue;
            }
        }
        let t = Instant::now();
        let (alpha, residual, note) = match patch_pair(dev, dev2, map, z, eps_len) {
            Ok((zd, zd2)) => {
                let r = patch_alpha(&zd, &zd2, cfg)?;
                (r.alpha, r.residual, r.note)
            }
            // distances the formulas need are not available: skip the patch
            Err(PatchError::Development(e)) => (AlphaSet::full(cfg, AlphaStatus::Incomplete), None, format!("skipped: {e}")),
            Err(e) => return Err(e),
        };
        out.push(PatchRecord {
            vertex: dev.vertex_name(v).to_string(),
            window: z.window,
            valency_class: z.class,
            alpha_set: alpha,
            residual,
            note,
            seconds: t.elapsed().as_secs_f64(),
        });
    }
    Ok(out)
}

fn all_records(
    dev: &Development,
    dev2: &Development,
    map: &CombinatorialMap,
    cfg: &SolverConfig,
    eps_len: f64,
) -> Result<Vec<PatchRecord>, PatchError> {
    let vs: Vec<VertexId> = dev.vertex_ids().collect();
    let per: Vec<Result<Vec<PatchRecord>, PatchError>> =
        vs.par_iter().map(|&v| vertex_records(dev, dev2, map, v, cfg, eps_len)).collect();
    let mut out = Vec::new();
    for r in per {
        out.extend(r?);
    }
    Ok(out)
}

/// Verdict from patch records alone: not equivalent iff the certified sets
/// already have an empty intersection.
pub fn combine(records: &[PatchRecord]) -> (VerdictKind, AlphaSet) {
    let certified: Vec<AlphaSet> = records
        .iter()
        .filter(|r| r.alpha_set.is_certified())
        .map(|r| r.alpha_set.clone())
        .collect();
    if !certified.is_empty() {
        let meet = intersect_alpha_sets(&certified);
        if meet.is_empty() {
            return (VerdictKind::NotAffineEquivalent, meet);
        }
    }
    let all: Vec<AlphaSet> = records.iter().map(|r| r.alpha_set.clone()).collect();
    let meet = if all.is_empty() {
        AlphaSet::empty()
    } else {
        intersect_alpha_sets(&all)
    };
    (VerdictKind::Inconclusive, meet)
}

pub fn recognize(
    dev: &Development,
    dev2: &Development,
    map: &CombinatorialMap,
    cfg: &SolverConfig,
    opts: &RecognizeOptions,
) -> Result<Verdict, RecognizeError> {
    let fast = simple_affine_verdict(dev, dev2, map, opts.eps_aff, cfg)?;
    if fast.kind != VerdictKind::Inconclusive {
        return Ok(fast);
    }
    let run = || -> Result<Vec<PatchRecord>, PatchError> {
        let mut records = all_records(dev, dev2, map, cfg, opts.eps_len)?;
        if opts.symmetric {
            let back = all_records(dev2, dev, &map.inverse(), cfg, opts.eps_len)?;
            records.extend(back.into_iter().map(|mut r| {
                r.alpha_set = r.alpha_set.reciprocal();
                r.vertex = format!("{}'", r.vertex);
                r
            }));
        }
        Ok(records)
    };
    let records = match opts.jobs {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n.max(1))
            .build()
            .map_err(|e| RecognizeError::Pool(e.to_string()))?
            .install(run)?,
        None => run()?,
    };
    let (kind, alpha_intersection) = combine(&records);
    Ok(Verdict {
        kind,
        stage: Stage::Patches,
        alpha_intersection,
        evidence: Evidence {
            patches: records,
            ..fast.evidence
        },
    })
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
struct PatchReport<'a> {
    vertex: &'a str,
    window: usize,
    valency_class: ValencyClass,
    alpha_set: Vec<[f64; 2]>,
    status: AlphaStatus,
    residual: Option<f64>,
    note: &'a str,
    #[serde(skip_serializing_if = "Option::is_none")]
    seconds: Option<f64>,
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
struct Report<'a> {
    verdict: &'static str,
    stage: Stage,
    alpha_intersection: Vec<[f64; 2]>,
    certified: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    hypothesis: Option<&'a str>,
    #[serde(skip_serializing_if = "<[_]>::is_empty")]
    face_mismatches: &'a [crate::verdict::FaceMismatch],
    #[serde(skip_serializing_if = "Option::is_none")]
    fast_path: Option<&'a [String]>,
    patches: Vec<PatchReport<'a>>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    suspension: Vec<SuspensionReport<'a>>,
    /// Patches whose α-set did not enter the emptiness test.
    incomplete: Vec<String>,
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
struct SuspensionReport<'a> {
    south: &'a str,
    north: &'a str,
    equator: &'a [String],
    outcome: &'a str,
    delta_set: Vec<[f64; 2]>,
    status: AlphaStatus,
    residual: Option<f64>,
}

fn pairs(a: &AlphaSet) -> Vec<[f64; 2]> {
    a.intervals().iter().map(|i| [i.lo, i.hi]).collect()
}

/// Is every set that fed the verdict certified?
pub fn is_certified(v: &Verdict) -> bool {
    match v.stage {
        Stage::FaceScreen => true,
        Stage::FastPath => false,
        Stage::Patches => {
            v.kind == VerdictKind::NotAffineEquivalent || v.evidence.patches.iter().all(|p| p.alpha_set.is_certified())
        }
        Stage::Suspension => v.kind == VerdictKind::NotAffineEquivalent || v.alpha_intersection.is_certified(),
    }
}

/// Evidence document; byte-identical for identical inputs unless
/// `timings` is set.
pub fn report_json(v: &Verdict, timings: bool) -> String {
    let r = Report {
        verdict: v.kind.as_str(),
        stage: v.stage,
        alpha_intersection: pairs(&v.alpha_intersection),
        certified: is_certified(v),
        hypothesis: v.evidence.hypothesis.as_deref(),
        face_mismatches: &v.evidence.face_mismatches,
        fast_path: v.evidence.fast_path.as_deref(),
        patches: v
            .evidence
            .patches
            .iter()
            .map(|p| PatchReport {
                vertex: &p.vertex,
                window: p.window,
                valency_class: p.valency_class,
                alpha_set: pairs(&p.alpha_set),
                status: p.alpha_set.status(),
                residual: p.residual,
                note: &p.note,
                seconds: timings.then_some(p.seconds),
            })
            .collect(),
        suspension: v
            .evidence
            .suspension
            .iter()
            .map(|s| SuspensionReport {
                south: &s.south,
                north: &s.north,
                equator: &s.equator,
                outcome: &s.outcome,
                delta_set: pairs(&s.delta_set),
                status: s.delta_set.status(),
                residual: s.residual,
            })
            .collect(),
        incomplete: v
            .evidence
            .patches
            .iter()
            .filter(|p| !p.alpha_set.is_certified())
            .map(|p| format!("{}#{}", p.vertex, p.window))
            .collect(),
    };
    serde_json::to_string_pretty(&r).expect("report serializes")
}

fn fmt_set(a: &AlphaSet) -> String {
    if a.is_empty() {
        return "∅".to_string();
    }
    a.intervals()
        .iter()
        .map(|i| format!("[{:.9e}, {:.9e}]", i.lo, i.hi))
        .collect::<Vec<_>>()
        .join(" ∪ ")
}

/// Few-line human summary.
pub fn summary(v: &Verdict) -> String {
    let mut s = format!("verdict: {}\n", v.kind.as_str());
    match v.stage {
        Stage::FaceScreen => {
            for m in &v.evidence.face_mismatches {
                s += &format!("face {} is not an affine image of face {}\n", m.face, m.image);
            }
        }
        Stage::FastPath => {
            if let Some(p) = &v.evidence.fast_path {
                s += &format!("covering path: {}\n", p.join(" - "));
            }
        }
        Stage::Patches => {
            let inc = v.evidence.patches.iter().filter(|p| !p.alpha_set.is_certified()).count();
            s += &format!(
                "{} patches, {} incomplete; alpha intersection {}\n",
                v.evidence.patches.len(),
                inc,
                fmt_set(&v.alpha_intersection)
            );
            if v.kind == VerdictKind::NotAffineEquivalent {
                // a pair of certified sets already disjoint, when one exists
                let cert: Vec<&PatchRecord> = v.evidence.patches.iter().filter(|p| p.alpha_set.is_certified()).collect();
                'outer: for (i, a) in cert.iter().enumerate() {
                    for b in &cert[i + 1..] {
                        if a.alpha_set.intersect(&b.alpha_set).is_empty() {
                            s += &format!(
                                "disjoint: {}#{} {} and {}#{} {}\n",
                                a.vertex,
                                a.window,
                                fmt_set(&a.alpha_set),
                                b.vertex,
                                b.window,
                                fmt_set(&b.alpha_set)
                            );
                            break 'outer;
                        }
                    }
                }
            }
        }
        Stage::Suspension => {
            for r in &v.evidence.suspension {
                s += &format!("poles {} / {}: {}\n", r.south, r.north, r.outcome);
            }
        }
    }
    if let Some(h) = &v.evidence.hypothesis {
        s += &format!("assuming: {h}\n");
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::development::{build_correspondence, vertex_map_by_name};
    use crate::oracle::{extract_development, unit_bipyramid, unit_cube};

    fn pair(p: &crate::oracle::EmbeddedPolyhedron, q: &crate::oracle::EmbeddedPolyhedron) -> (Development, Development, CombinatorialMap) {
        let (d, d2) = (extract_development(p).unwrap(), extract_development(q).unwrap());
        let map = build_correspondence(&d, &d2, &vertex_map_by_name(&d, &d2).unwrap()).unwrap();
        (d, d2, map)
    }

    #[test]
    fn cube_takes_fast_path() {
        let c = unit_cube();
        let (d, d2, map) = pair(&c, &c);
        let v = recognize(&d, &d2, &map, &SolverConfig::default(), &RecognizeOptions::default()).unwrap();
        assert_eq!(v.kind, VerdictKind::AffineEquivalentConditional);
        assert!(summary(&v).contains("strictly convex"));
    }

    #[test]
    fn bipyramid_apexes_disagree() {
        let (d, d2, map) = pair(&unit_bipyramid(None), &unit_bipyramid(Some(1.5)));
        let cfg = SolverConfig {
            max_boxes: 200,
            ..SolverConfig::default()
        };
        let v = recognize(&d, &d2, &map, &cfg, &RecognizeOptions::default()).unwrap();
        assert_eq!(v.kind, VerdictKind::NotAffineEquivalent);
        assert!(v.alpha_intersection.is_empty());
        assert!(report_json(&v, false).contains("\"certified\": true"));
    }
}
