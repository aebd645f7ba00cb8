//! Canonical-model fixtures: schema, loading, validation, verification.
//!
//! One JSON file per level holds the canonical embedding (homogeneous
//! equations over ℚ), the q-expansions of the coordinate cusp forms (19
//! coefficients, stated precision O(q²⁰)), the known rational points, the
//! affine patches used downstream, and the plane models they produce.
//! Everything that can be checked exactly is checked here: points are
//! evaluated in rational arithmetic against every equation, q-expansions are
//! substituted with precision bookkeeping, and a fixture is accepted only if
//! both pass.

pub mod newforms;
mod schema;
pub mod verify;

pub use newforms::{fetch_newform_orbits, hecke_generation_check, NewformOrbitRecord};
pub use verify::{
    galbraith_157_crosscheck, verify_known_points, verify_qexp, CheckOutcome, Report,
};

use std::collections::BTreeMap;
use std::path::Path;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};
use thiserror::Error;

use crate::exact::multipoly::MultiPoly;
use crate::exact::rat::Rat;
use crate::exact::unipoly::RatPoly;

#[derive(Debug, Error)]
pub enum ModelDbError {
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
    #[error("schema violation: {0}")]
    Schema(String),
    #[error("invariant failure in level {level}: {what}")]
    Invariant { level: u64, what: String },
    #[error("fixture for level {0} not found")]
    NotFound(u64),
    #[error("newform fetch failed: {0}")]
    Fetch(String),
    #[error("newform response malformed: {0}")]
    Parse(String),
    #[error("insufficient newform data: {0}")]
    InsufficientData(String),
}

/// Label of a known rational point.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PointLabel {
    Cusp,
    /// CM point with the discriminant of its order.
    Cm(i64),
    Exceptional,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KnownPoint {
    pub label: PointLabel,
    pub coords: Vec<i64>,
}

impl KnownPoint {
    pub fn label_string(&self) -> String {
        match self.label {
            PointLabel::Cusp => "cusp".into(),
            PointLabel::Cm(d) => format!("CM({d})"),
            PointLabel::Exceptional => "exceptional".into(),
        }
    }
}

/// The four linear forms and metadata defining one affine patch map.
#[derive(Debug, Clone, PartialEq)]
pub struct PatchSpec {
    pub index: usize,
    pub prime: u64,
    pub d_inf: u32,
    pub dx: u32,
    pub dy: u32,
    pub x1: Vec<Rat>,
    pub x2: Vec<Rat>,
    pub y1: Vec<Rat>,
    pub y2: Vec<Rat>,
    /// Optional ℙ² automorphism applied to [x₁y₂ : x₂y₁ : x₂y₂] before the
    /// monicization step (rows act on the column of coordinates).
    pub post_automorphism: Option<[[i64; 3]; 3]>,
    /// Leading y-coefficient Q₀(x) of the pre-monicization plane curve.
    pub q0: RatPoly,
}

/// A plane model Q(x, y) = 0, monic in y, attached to a patch.
#[derive(Debug, Clone, PartialEq)]
pub struct PlaneModelRecord {
    pub patch_index: usize,
    pub q: MultiPoly,
}

/// Data for the published cross-check against Galbraith's genus-5 model.
#[derive(Debug, Clone, PartialEq)]
pub struct GalbraithData {
    pub variables: Vec<String>,
    /// Row i = the linear form for target variable i over the model variables.
    pub substitution: Vec<Vec<Rat>>,
    pub corrected_equations: Vec<MultiPoly>,
    pub typo_equation_index: usize,
    /// Term to subtract from the corrected equation to reproduce the typo.
    pub typo_term: (Rat, Vec<u16>),
    pub check_primes: Vec<u64>,
}

/// A canonical model of X₀⁺(N) with everything the pipeline needs.
#[derive(Debug, Clone, PartialEq)]
pub struct CanonicalModel {
    pub level: u64,
    pub genus: usize,
    pub variables: Vec<String>,
    pub equations: Vec<MultiPoly>,
    /// q-expansion coefficients for q¹..q¹⁹ per variable.
    pub qexp: BTreeMap<String, Vec<i64>>,
    /// Exponent below which every series coefficient is known (20).
    pub precision: i64,
    pub known_points: Vec<KnownPoint>,
    pub patches: Vec<PatchSpec>,
    pub plane_models: Vec<PlaneModelRecord>,
    pub galbraith: Option<GalbraithData>,
}

impl CanonicalModel {
    pub fn patch(&self, index: usize) -> Option<&PatchSpec> {
        self.patches.iter().find(|p| p.index == index)
    }

    pub fn plane_model(&self, patch_index: usize) -> Option<&PlaneModelRecord> {
        self.plane_models
            .iter()
            .find(|m| m.patch_index == patch_index)
    }

    /// q-expansion series of each coordinate, in variable order.
    pub fn coordinate_series(&self) -> Vec<crate::exact::series::TruncatedLaurent> {
        self.variables
            .iter()
            .map(|v| {
                crate::exact::series::TruncatedLaurent::from_qexp(&self.qexp[v], self.precision)
            })
            .collect()
    }
}

/// Load and fully validate a fixture file.
pub fn load_model(path: &Path) -> Result<CanonicalModel, ModelDbError> {
    let raw = std::fs::read_to_string(path)?;
    let fx: schema::Fixture =
        serde_json::from_str(&raw).map_err(|e| ModelDbError::Schema(e.to_string()))?;
    let model = schema::into_model(fx)?;
    validate(&model)?;
    Ok(model)
}

/// Load the fixture for one level from a directory of `<level>.json` files.
pub fn load_level(dir: &Path, level: u64) -> Result<CanonicalModel, ModelDbError> {
    let path = dir.join(format!("{level}.json"));
    if !path.exists() {
        return Err(ModelDbError::NotFound(level));
    }
    load_model(&path)
}

/// Serialize a model back into fixture JSON (round-trips with `load_model`).
pub fn save_model(model: &CanonicalModel) -> String {
    schema::from_model(model)
}

/// The sixteen prime levels shipped with the crate.
pub const LEVELS: [u64; 16] = [
    137, 173, 199, 251, 311, 157, 181, 227, 263, 163, 197, 211, 223, 269, 271, 359,
];

fn validate(m: &CanonicalModel) -> Result<(), ModelDbError> {
    let fail = |what: String| ModelDbError::Invariant {
        level: m.level,
        what,
    };
    if m.variables.len() != m.genus {
        return Err(fail(format!(
            "expected {} variables, found {}",
            m.genus,
            m.variables.len()
        )));
    }
    for (i, eq) in m.equations.iter().enumerate() {
        match eq.homogeneous_degree() {
            Some(2) | Some(3) => {}
            other => {
                return Err(fail(format!(
                    "equation {i} is not homogeneous of degree 2 or 3 (got {other:?})"
                )))
            }
        }
    }
    for v in &m.variables {
        let c = m
            .qexp
            .get(v)
            .ok_or_else(|| fail(format!("missing q-expansion for {v}")))?;
        if c.len() < 19 {
            return Err(fail(format!(
                "q-expansion for {v} has {} < 19 coefficients",
                c.len()
            )));
        }
    }
    for (pi, pt) in m.known_points.iter().enumerate() {
        if pt.coords.len() != m.genus {
            return Err(fail(format!("point {pi} has wrong arity")));
        }
        if pt.coords.iter().all(|&c| c == 0) {
            return Err(fail(format!("point {pi} is the zero vector")));
        }
        let g = pt
            .coords
            .iter()
            .fold(BigInt::zero(), |acc, &c| acc.gcd(&BigInt::from(c)));
        if g.abs() != BigInt::from(1) {
            return Err(fail(format!("point {pi} is not primitive")));
        }
        for (ei, eq) in m.equations.iter().enumerate() {
            if !eq.eval_i64(&pt.coords).is_zero() {
                return Err(fail(format!("point {pi} does not satisfy equation {ei}")));
            }
        }
    }
    for patch in &m.patches {
        if proportional(&patch.x1, &patch.x2) {
            return Err(fail(format!(
                "patch {}: x1 and x2 are proportional",
                patch.index
            )));
        }
        if proportional(&patch.y1, &patch.y2) {
            return Err(fail(format!(
                "patch {}: y1 and y2 are proportional",
                patch.index
            )));
        }
        let pm = m
            .plane_model(patch.index)
            .ok_or_else(|| fail(format!("patch {} has no plane model", patch.index)))?;
        let dy_q = pm.q.degree_in(1);
        if dy_q != patch.dx as usize {
            return Err(fail(format!(
                "patch {}: deg_y(Q) = {dy_q} but dx = {}",
                patch.index, patch.dx
            )));
        }
        let lead =
            pm.q.terms()
                .find(|(mono, _)| mono[1] as usize == dy_q && mono[0] == 0)
                .map(|(_, c)| c.clone());
        if lead != Some(Rat::from_integer(1.into()))
            || pm
                .q
                .terms()
                .any(|(mono, _)| mono[1] as usize == dy_q && mono[0] > 0)
        {
            return Err(fail(format!(
                "patch {}: plane model is not monic in y",
                patch.index
            )));
        }
    }
    Ok(())
}

fn proportional(a: &[Rat], b: &[Rat]) -> bool {
    // a ∥ b iff all 2x2 minors vanish
    for i in 0..a.len() {
        for j in (i + 1)..a.len() {
            if &a[i] * &b[j] != &a[j] * &b[i] {
                return false;
            }
        }
    }
    true
}

#[cfg(test)]
pub(crate) fn fixture_dir() -> std::path::PathBuf {
    std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("../../fixtures")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn load_137() {
        let m = load_level(&fixture_dir(), 137).unwrap();
        assert_eq!(m.genus, 4);
        assert_eq!(m.equations.len(), 2);
        assert_eq!(m.known_points.len(), 9);
        assert_eq!(m.patches.len(), 1);
        assert_eq!(m.patches[0].prime, 5);
    }

    #[test]
    fn load_263() {
        let m = load_level(&fixture_dir(), 263).unwrap();
        assert_eq!(m.equations.len(), 3);
        assert!(m
            .equations
            .iter()
            .all(|e| e.homogeneous_degree() == Some(2)));
        assert_eq!(m.known_points.len(), 6);
    }

    #[test]
    fn missing_level_reports_not_found() {
        assert!(matches!(
            load_level(&fixture_dir(), 9999),
            Err(ModelDbError::NotFound(9999))
        ));
    }

    #[test]
    fn truncated_file_is_schema_violation() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("7.json");
        std::fs::write(&p, "{\"schema\": 1, \"level\": 7").unwrap();
        assert!(matches!(load_model(&p), Err(ModelDbError::Schema(_))));
    }

    #[test]
    fn roundtrip_all_fixtures() {
        let dir = fixture_dir();
        for level in LEVELS {
            let m = load_level(&dir, level).unwrap();
            let json = save_model(&m);
            let tmp = tempfile::tempdir().unwrap();
            let p = tmp.path().join(format!("{level}.json"));
            std::fs::write(&p, &json).unwrap();
            let m2 = load_model(&p).unwrap();
            assert_eq!(m, m2, "round-trip differs for level {level}");
        }
    }
}
