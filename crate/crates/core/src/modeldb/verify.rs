//! Exact verification of fixture data: known points against equations,
//! q-expansions against equations with precision bookkeeping, and the
//! published cross-check against Galbraith's corrected genus-5 model.

use num_traits::Zero;
use serde::Serialize;

use super::{CanonicalModel, GalbraithData, ModelDbError};
use crate::exact::multipoly::MultiPoly;
use crate::exact::series::eval_multipoly_series;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CheckOutcome {
    Pass,
    Fail,
    /// Not enough precision to decide; never counts as a pass.
    Inconclusive,
}

#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub name: String,
    pub outcome: CheckOutcome,
    pub detail: String,
}

#[derive(Debug, Clone, Default, Serialize)]
pub struct Report {
    pub checks: Vec<Check>,
}

impl Report {
    pub fn push(
        &mut self,
        name: impl Into<String>,
        outcome: CheckOutcome,
        detail: impl Into<String>,
    ) {
        self.checks.push(Check {
            name: name.into(),
            outcome,
            detail: detail.into(),
        });
    }

    /// True iff every check passed (inconclusive does not count).
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.outcome == CheckOutcome::Pass)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks
            .iter()
            .filter(|c| c.outcome != CheckOutcome::Pass)
    }

    pub fn merge(&mut self, other: Report) {
        self.checks.extend(other.checks);
    }
}

/// Evaluate every equation at every known point over exact rationals.
pub fn verify_known_points(model: &CanonicalModel) -> Report {
    let mut report = Report::default();
    for pt in &model.known_points {
        let mut bad = Vec::new();
        for (ei, eq) in model.equations.iter().enumerate() {
            if !eq.eval_i64(&pt.coords).is_zero() {
                bad.push(ei);
            }
        }
        let name = format!("point {} {:?}", pt.label_string(), pt.coords);
        if bad.is_empty() {
            report.push(name, CheckOutcome::Pass, "vanishes on all equations");
        } else {
            report.push(
                name,
                CheckOutcome::Fail,
                format!("nonzero on equations {bad:?}"),
            );
        }
    }
    report
}

/// Substitute the truncated q-expansions into each equation and require every
/// coefficient below the propagated precision bound to vanish.
pub fn verify_qexp(model: &CanonicalModel) -> Report {
    let series = model.coordinate_series();
    let vals: Vec<i64> = series.iter().map(|s| s.lo()).collect();
    let mut report = Report::default();
    for (ei, eq) in model.equations.iter().enumerate() {
        let s = eval_multipoly_series(eq, &series);
        // structurally smallest exponent any term could contribute
        let min_lo = eq
            .terms()
            .map(|(m, _)| {
                m.iter()
                    .zip(&vals)
                    .map(|(&e, &v)| e as i64 * v)
                    .sum::<i64>()
            })
            .min()
            .unwrap_or(0);
        let name = format!("equation {ei} on q-expansions");
        if !s.is_known_zero() {
            let bad: Vec<i64> = s.support().collect();
            report.push(
                name,
                CheckOutcome::Fail,
                format!(
                    "nonzero coefficients at exponents {bad:?} (bound q^{})",
                    s.prec()
                ),
            );
        } else if s.prec() <= min_lo {
            report.push(
                name,
                CheckOutcome::Inconclusive,
                "no coefficient below the bound",
            );
        } else {
            report.push(
                name,
                CheckOutcome::Pass,
                format!(
                    "vanishes through q^{} ({} coefficients)",
                    s.prec() - 1,
                    s.prec() - min_lo
                ),
            );
        }
    }
    report
}

fn substituted(g: &GalbraithData, model: &CanonicalModel, eq: &MultiPoly) -> MultiPoly {
    eq.substitute_linear(model.variables.clone(), &g.substitution)
}

/// Check that the corrected Galbraith equations, pushed through the published
/// linear substitution, vanish on the model: on its q-expansions, at every
/// known rational point, and at every 𝔽ₚ-point for the fixture's check
/// primes. The recorded typo (leading coefficient w² instead of 2w²) must be
/// detected by some 𝔽₅-point.
pub fn galbraith_157_crosscheck(model: &CanonicalModel) -> Result<Report, ModelDbError> {
    let g = model.galbraith.as_ref().ok_or_else(|| {
        ModelDbError::InsufficientData(format!(
            "level {} carries no Galbraith cross-check block",
            model.level
        ))
    })?;
    let mut report = Report::default();
    let series = model.coordinate_series();
    for (gi, eq) in g.corrected_equations.iter().enumerate() {
        let e = substituted(g, model, eq);
        // series vanishing
        let s = eval_multipoly_series(&e, &series);
        let name = format!("corrected equation {gi}: q-expansion");
        if s.is_known_zero() && s.prec() > 0 {
            report.push(
                name,
                CheckOutcome::Pass,
                format!("vanishes through q^{}", s.prec() - 1),
            );
        } else {
            report.push(name, CheckOutcome::Fail, "nonzero series residue");
        }
        // known points
        let bad: Vec<String> = model
            .known_points
            .iter()
            .filter(|pt| !e.eval_i64(&pt.coords).is_zero())
            .map(|pt| pt.label_string())
            .collect();
        let name = format!("corrected equation {gi}: known points");
        if bad.is_empty() {
            report.push(name, CheckOutcome::Pass, "vanishes at all known points");
        } else {
            report.push(name, CheckOutcome::Fail, format!("fails at {bad:?}"));
        }
        // F_p points
        for &p in &g.check_primes {
            let pts = crate::points::enumerate_fp_points(model, p)
                .map_err(|e| ModelDbError::InsufficientData(e.to_string()))?;
            let field = crate::exact::fp::Fp::new(p).expect("check prime");
            let ebar = e
                .reduce_mod_p(field)
                .map_err(|e| ModelDbError::InsufficientData(e.to_string()))?;
            let nbad = pts.points.iter().filter(|pt| ebar.eval(pt) != 0).count();
            let name = format!("corrected equation {gi}: F_{p} points");
            if nbad == 0 {
                report.push(
                    name,
                    CheckOutcome::Pass,
                    format!("vanishes at all {} points", pts.points.len()),
                );
            } else {
                report.push(name, CheckOutcome::Fail, format!("fails at {nbad} points"));
            }
        }
    }
    // the typo variant must be detectable over F_5
    let typo_eq = {
        let base = &g.corrected_equations[g.typo_equation_index];
        let t = MultiPoly::from_terms(
            g.variables.clone(),
            vec![(g.typo_term.1.clone(), g.typo_term.0.clone())],
        )
        .expect("typo term");
        substituted(
            g,
            model,
            &base.add(&t.scale(&-crate::exact::rat::rat_int(1))),
        )
    };
    let p = 5;
    let pts = crate::points::enumerate_fp_points(model, p)
        .map_err(|e| ModelDbError::InsufficientData(e.to_string()))?;
    let field = crate::exact::fp::Fp::new(p).unwrap();
    let tbar = typo_eq
        .reduce_mod_p(field)
        .map_err(|e| ModelDbError::InsufficientData(e.to_string()))?;
    let nbad = pts.points.iter().filter(|pt| tbar.eval(pt) != 0).count();
    if nbad > 0 {
        report.push(
            "typo variant detected",
            CheckOutcome::Pass,
            format!(
                "uncorrected equation fails at {nbad} of {} F_5 points",
                pts.points.len()
            ),
        );
    } else {
        report.push(
            "typo variant detected",
            CheckOutcome::Fail,
            "typo not detectable over F_5",
        );
    }
    // identity substitution of the model's own equations is a tautology check
    let mut ok = true;
    for eq in &model.equations {
        for pt in &model.known_points {
            if !eq.eval_i64(&pt.coords).is_zero() {
                ok = false;
            }
        }
    }
    report.push(
        "identity substitution",
        if ok {
            CheckOutcome::Pass
        } else {
            CheckOutcome::Fail
        },
        "model equations against their own points",
    );
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::super::{fixture_dir, load_level, LEVELS};
    use super::*;

    #[test]
    fn qexp_verifies_for_137_and_359() {
        for level in [137, 359] {
            let m = load_level(&fixture_dir(), level).unwrap();
            let r = verify_qexp(&m);
            assert!(
                r.passed(),
                "{level}: {:?}",
                r.failures().collect::<Vec<_>>()
            );
        }
    }

    #[test]
    fn known_points_verify_everywhere() {
        for level in LEVELS {
            let m = load_level(&fixture_dir(), level).unwrap();
            assert!(verify_known_points(&m).passed(), "level {level}");
        }
    }

    #[test]
    fn perturbed_point_fails() {
        let mut m = load_level(&fixture_dir(), 137).unwrap();
        // [19:2:−16:4] -> [19:2:−16:5]
        let pt = m
            .known_points
            .iter_mut()
            .find(|p| p.coords == [19, 2, -16, 4])
            .unwrap();
        pt.coords[3] = 5;
        assert!(!verify_known_points(&m).passed());
    }

    #[test]
    fn sign_flipped_series_coefficient_fails() {
        let mut m = load_level(&fixture_dir(), 137).unwrap();
        let w = m.qexp.get_mut("W").unwrap();
        w[2] = -w[2]; // q^3 coefficient of W
        let r = verify_qexp(&m);
        assert!(!r.passed());
    }

    #[test]
    fn galbraith_crosscheck_passes_for_157() {
        let m = load_level(&fixture_dir(), 157).unwrap();
        let r = galbraith_157_crosscheck(&m).unwrap();
        assert!(r.passed(), "{:?}", r.failures().collect::<Vec<_>>());
    }

    #[test]
    fn galbraith_crosscheck_needs_fixture_block() {
        let m = load_level(&fixture_dir(), 137).unwrap();
        assert!(galbraith_157_crosscheck(&m).is_err());
    }
}
