//! Outcome types shared by the fast path, the suspension certificate and the
//! full recognizer.

use serde::Serialize;

use crate::solver::AlphaSet;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum VerdictKind {
    NotAffineEquivalent,
    AffineEquivalentConditional,
    Inconclusive,
}

impl VerdictKind {
    pub fn as_str(self) -> &'static str {
        match self {
            VerdictKind::NotAffineEquivalent => "NotAffineEquivalent",
            VerdictKind::AffineEquivalentConditional => "AffineEquivalentConditional",
            VerdictKind::Inconclusive => "Inconclusive",
        }
    }
}

/// Which stage settled the verdict.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub enum Stage {
    FaceScreen,
    FastPath,
    Patches,
    Suspension,
}

/// A corresponding face pair whose polygons are not affine images.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FaceMismatch {
    pub face: String,
    pub image: String,
}

/// One patch pair's contribution.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct PatchRecord {
    pub vertex: String,
    pub window: usize,
    pub valency_class: crate::patch::ValencyClass,
    pub alpha_set: AlphaSet,
    pub residual: Option<f64>,
    pub note: String,
    /// Wall-clock seconds; excluded from reports unless requested.
    pub seconds: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct SuspensionRecord {
    pub south: String,
    pub north: String,
    pub equator: Vec<String>,
    pub outcome: String,
    pub delta_set: AlphaSet,
    pub residual: Option<f64>,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct Evidence {
    pub face_mismatches: Vec<FaceMismatch>,
    /// Covering path of valency-3 vertices, or "simple" for all-valency-3.
    pub fast_path: Option<Vec<String>>,
    pub patches: Vec<PatchRecord>,
    pub suspension: Vec<SuspensionRecord>,
    /// The hypothesis a conditional verdict rests on.
    pub hypothesis: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct Verdict {
    pub kind: VerdictKind,
    pub stage: Stage,
    pub alpha_intersection: AlphaSet,
    pub evidence: Evidence,
}

pub const CONVEXITY_HYPOTHESIS: &str =
    "both polyhedra are strictly convex and closed; this cannot be checked from developments alone";
