//! Fixture JSON schema (version 1).
//!
//! Polynomials are arrays of `[numerator, denominator, exponent-vector]`
//! terms; q-expansions are integer arrays indexed from q¹; the precision
//! field states the exponent below which all series coefficients are known.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::{
    CanonicalModel, GalbraithData, KnownPoint, ModelDbError, PatchSpec, PlaneModelRecord,
    PointLabel,
};
use crate::exact::multipoly::MultiPoly;
use crate::exact::rat::Rat;
use crate::exact::unipoly::RatPoly;

type Term = (i64, i64, Vec<u16>);

#[derive(Debug, Serialize, Deserialize)]
pub(super) struct Fixture {
    pub schema: u32,
    pub level: u64,
    pub genus: usize,
    pub variables: Vec<String>,
    pub equations: Vec<Vec<Term>>,
    pub qexp: BTreeMap<String, Vec<i64>>,
    pub precision: i64,
    pub known_points: Vec<PointJson>,
    pub patches: Vec<PatchJson>,
    pub plane_models: Vec<PlaneModelJson>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub galbraith_crosscheck: Option<GalbraithJson>,
}

#[derive(Debug, Serialize, Deserialize)]
pub(super) struct PointJson {
    pub label: String,
    pub disc: Option<i64>,
    pub coords: Vec<i64>,
}

#[derive(Debug, Serialize, Deserialize)]
pub(super) struct PatchJson {
    pub index: usize,
    pub prime: u64,
    pub d_inf: u32,
    pub dx: u32,
    pub dy: u32,
    pub x1: Vec<(i64, i64)>,
    pub x2: Vec<(i64, i64)>,
    pub y1: Vec<(i64, i64)>,
    pub y2: Vec<(i64, i64)>,
    pub post_automorphism: Option<[[i64; 3]; 3]>,
    pub q0: Vec<(i64, i64, Vec<u16>)>,
}

#[derive(Debug, Serialize, Deserialize)]
pub(super) struct PlaneModelJson {
    pub patch_index: usize,
    pub q: Vec<Term>,
}

#[derive(Debug, Serialize, Deserialize)]
pub(super) struct GalbraithJson {
    pub substitution: BTreeMap<String, Vec<i64>>,
    pub variables: Vec<String>,
    pub corrected_equations: Vec<Vec<Term>>,
    pub typo_equation_index: usize,
    pub typo_term: Term,
    pub check_primes: Vec<u64>,
}

fn terms_to_multipoly(vars: &[String], terms: &[Term]) -> Result<MultiPoly, ModelDbError> {
    MultiPoly::from_terms(
        vars.to_vec(),
        terms
            .iter()
            .map(|(n, d, m)| (m.clone(), Rat::new((*n).into(), (*d).into())))
            .collect(),
    )
    .map_err(|e| ModelDbError::Schema(e.to_string()))
}

fn multipoly_to_terms(p: &MultiPoly) -> Vec<Term> {
    use num_traits::ToPrimitive;
    p.terms()
        .map(|(m, c)| {
            (
                c.numer().to_i64().expect("fixture coefficient exceeds i64"),
                c.denom().to_i64().expect("fixture denominator exceeds i64"),
                m.clone(),
            )
        })
        .collect()
}

fn terms_to_unipoly(terms: &[(i64, i64, Vec<u16>)]) -> RatPoly {
    let mut poly = RatPoly::zero();
    for (n, d, m) in terms {
        poly = poly.add(&RatPoly::monomial(
            Rat::new((*n).into(), (*d).into()),
            m[0] as usize,
        ));
    }
    poly
}

fn unipoly_to_terms(p: &RatPoly) -> Vec<(i64, i64, Vec<u16>)> {
    use num_traits::{ToPrimitive, Zero};
    p.coeffs()
        .iter()
        .enumerate()
        .filter(|(_, c)| !c.is_zero())
        .map(|(k, c)| {
            (
                c.numer().to_i64().expect("q0 coefficient exceeds i64"),
                c.denom().to_i64().expect("q0 denominator exceeds i64"),
                vec![k as u16],
            )
        })
        .collect()
}

fn linform(raw: &[(i64, i64)]) -> Vec<Rat> {
    raw.iter()
        .map(|(n, d)| Rat::new((*n).into(), (*d).into()))
        .collect()
}

fn linform_json(f: &[Rat]) -> Vec<(i64, i64)> {
    use num_traits::ToPrimitive;
    f.iter()
        .map(|c| (c.numer().to_i64().unwrap(), c.denom().to_i64().unwrap()))
        .collect()
}

pub(super) fn into_model(fx: Fixture) -> Result<CanonicalModel, ModelDbError> {
    if fx.schema != 1 {
        return Err(ModelDbError::Schema(format!(
            "unsupported schema version {}",
            fx.schema
        )));
    }
    let xy = vec!["x".to_string(), "y".to_string()];
    let equations = fx
        .equations
        .iter()
        .map(|t| terms_to_multipoly(&fx.variables, t))
        .collect::<Result<Vec<_>, _>>()?;
    let known_points = fx
        .known_points
        .iter()
        .map(|p| {
            let label = match (p.label.as_str(), p.disc) {
                ("cusp", _) => PointLabel::Cusp,
                ("exceptional", _) => PointLabel::Exceptional,
                ("cm", Some(d)) => PointLabel::Cm(d),
                _ => {
                    return Err(ModelDbError::Schema(format!(
                        "bad point label {:?}",
                        p.label
                    )))
                }
            };
            Ok(KnownPoint {
                label,
                coords: p.coords.clone(),
            })
        })
        .collect::<Result<Vec<_>, _>>()?;
    let patches = fx
        .patches
        .iter()
        .map(|p| PatchSpec {
            index: p.index,
            prime: p.prime,
            d_inf: p.d_inf,
            dx: p.dx,
            dy: p.dy,
            x1: linform(&p.x1),
            x2: linform(&p.x2),
            y1: linform(&p.y1),
            y2: linform(&p.y2),
            post_automorphism: p.post_automorphism,
            q0: terms_to_unipoly(&p.q0),
        })
        .collect();
    let plane_models = fx
        .plane_models
        .iter()
        .map(|m| {
            Ok(PlaneModelRecord {
                patch_index: m.patch_index,
                q: terms_to_multipoly(&xy, &m.q)?,
            })
        })
        .collect::<Result<Vec<_>, ModelDbError>>()?;
    let galbraith = match fx.galbraith_crosscheck {
        None => None,
        Some(g) => {
            let substitution = g
                .variables
                .iter()
                .map(|v| {
                    g.substitution
                        .get(v)
                        .map(|row| row.iter().map(|&c| Rat::from_integer(c.into())).collect())
                        .ok_or_else(|| {
                            ModelDbError::Schema(format!("missing substitution row for {v}"))
                        })
                })
                .collect::<Result<Vec<Vec<Rat>>, _>>()?;
            Some(GalbraithData {
                variables: g.variables.clone(),
                substitution,
                corrected_equations: g
                    .corrected_equations
                    .iter()
                    .map(|t| terms_to_multipoly(&g.variables, t))
                    .collect::<Result<Vec<_>, _>>()?,
                typo_equation_index: g.typo_equation_index,
                typo_term: (
                    Rat::new(g.typo_term.0.into(), g.typo_term.1.into()),
                    g.typo_term.2.clone(),
                ),
                check_primes: g.check_primes,
            })
        }
    };
    Ok(CanonicalModel {
        level: fx.level,
        genus: fx.genus,
        variables: fx.variables,
        equations,
        qexp: fx.qexp,
        precision: fx.precision,
        known_points,
        patches,
        plane_models,
        galbraith,
    })
}

pub(super) fn from_model(m: &CanonicalModel) -> String {
    use num_traits::ToPrimitive;
    let fx = Fixture {
        schema: 1,
        level: m.level,
        genus: m.genus,
        variables: m.variables.clone(),
        equations: m.equations.iter().map(multipoly_to_terms).collect(),
        qexp: m.qexp.clone(),
        precision: m.precision,
        known_points: m
            .known_points
            .iter()
            .map(|p| PointJson {
                label: match p.label {
                    PointLabel::Cusp => "cusp".into(),
                    PointLabel::Cm(_) => "cm".into(),
                    PointLabel::Exceptional => "exceptional".into(),
                },
                disc: match p.label {
                    PointLabel::Cm(d) => Some(d),
                    _ => None,
                },
                coords: p.coords.clone(),
            })
            .collect(),
        patches: m
            .patches
            .iter()
            .map(|p| PatchJson {
                index: p.index,
                prime: p.prime,
                d_inf: p.d_inf,
                dx: p.dx,
                dy: p.dy,
                x1: linform_json(&p.x1),
                x2: linform_json(&p.x2),
                y1: linform_json(&p.y1),
                y2: linform_json(&p.y2),
                post_automorphism: p.post_automorphism,
                q0: unipoly_to_terms(&p.q0),
            })
            .collect(),
        plane_models: m
            .plane_models
            .iter()
            .map(|pm| PlaneModelJson {
                patch_index: pm.patch_index,
                q: multipoly_to_terms(&pm.q),
            })
            .collect(),
        galbraith_crosscheck: m.galbraith.as_ref().map(|g| GalbraithJson {
            substitution: g
                .variables
                .iter()
                .zip(&g.substitution)
                .map(|(v, row)| {
                    (
                        v.clone(),
                        row.iter().map(|c| c.numer().to_i64().unwrap()).collect(),
                    )
                })
                .collect(),
            variables: g.variables.clone(),
            corrected_equations: g
                .corrected_equations
                .iter()
                .map(multipoly_to_terms)
                .collect(),
            typo_equation_index: g.typo_equation_index,
            typo_term: (
                g.typo_term.0.numer().to_i64().unwrap(),
                g.typo_term.0.denom().to_i64().unwrap(),
                g.typo_term.1.clone(),
            ),
            check_primes: g.check_primes.clone(),
        }),
    };
    serde_json::to_string_pretty(&fx).expect("fixture serialization")
}
