//! The patch-map pipeline: evaluate φ = ψ ∘ (projection ∘ Segre ∘ (τₓ×τᵧ))
//! on points, monicize bidegree equations, certify plane models against the
//! q-expansions, and locate the loci where the coordinate formulas degenerate.
//!
//! With x₁, x₂, y₁, y₂ the patch's linear forms, the projected Segre image of
//! a point P is [A : B : C] = [x₁y₂ : x₂y₁ : x₂y₂](P); an optional ℙ²
//! automorphism is applied to that triple (only the second 211 patch uses
//! one). All three coordinates vanish exactly on the union of the three
//! degeneracy loci {x₁ = x₂ = 0}, {y₁ = y₂ = 0}, {x₂ = y₂ = 0}. Away from
//! them, C = 0 lands on the infinite part of the plane model, and otherwise
//! the affine image is (x, Y) = (A/C, Q₀(A/C)·B/C) where Q₀ is the leading
//! y-coefficient of the pre-monicization curve (stored per patch).

use num_traits::Zero;
use thiserror::Error;

use crate::exact::fp::Fp;
use crate::exact::multipoly::MultiPoly;
use crate::exact::rat::{rat_int, Rat};
use crate::exact::series::TruncatedLaurent;
use crate::exact::unipoly::RatPoly;
use crate::exact::ExactError;
use crate::modeldb::{CanonicalModel, PatchSpec};

#[derive(Debug, Error)]
pub enum PlanemapError {
    #[error("point is not on the canonical model")]
    NotOnCurve,
    #[error("patch {0} not attached to this model")]
    NoSuchPatch(usize),
    #[error(transparent)]
    Exact(#[from] ExactError),
    #[error("points error: {0}")]
    Points(#[from] crate::points::PointsError),
}

/// Why the coordinate formulas degenerate at a point.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum UndefinedReason {
    /// x₁ = x₂ = 0: τₓ undefined.
    X1X2Zero,
    /// y₁ = y₂ = 0: τᵧ undefined.
    Y1Y2Zero,
    /// x₂ = y₂ = 0: the projection after Segre undefined.
    X2Y2Zero,
}

/// Image of a point on the plane model (affine chart z = 1, or at infinity).
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PlanePoint<T> {
    Affine {
        x: T,
        y: T,
    },
    /// The ℙ² point [x : y : 0], normalized so the first nonzero entry is 1.
    Infinite {
        x: T,
        y: T,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MapResult<T> {
    Point(PlanePoint<T>),
    Undefined(UndefinedReason),
}

fn linear_eval_rat(form: &[Rat], coords: &[i64]) -> Rat {
    form.iter().zip(coords).fold(Rat::zero(), |acc, (c, &v)| {
        acc + c * Rat::from_integer(v.into())
    })
}

/// Classify the projected Segre triple; shared by the ℚ and 𝔽ₚ evaluations.
fn classify<T: Clone + PartialEq>(
    zero: T,
    a1: T,
    a2: T,
    b1: T,
    b2: T,
    mul: impl Fn(&T, &T) -> T,
) -> Result<(T, T, T), UndefinedReason> {
    let a = mul(&a1, &b2);
    let b = mul(&a2, &b1);
    let c = mul(&a2, &b2);
    if a == zero && b == zero && c == zero {
        return Err(if a1 == zero && a2 == zero {
            UndefinedReason::X1X2Zero
        } else if b1 == zero && b2 == zero {
            UndefinedReason::Y1Y2Zero
        } else {
            UndefinedReason::X2Y2Zero
        });
    }
    Ok((a, b, c))
}

/// Evaluate the patch map at an integral projective point over ℚ.
pub fn eval_patch(
    model: &CanonicalModel,
    patch: &PatchSpec,
    coords: &[i64],
) -> Result<MapResult<Rat>, PlanemapError> {
    for eq in &model.equations {
        if !eq.eval_i64(coords).is_zero() {
            return Err(PlanemapError::NotOnCurve);
        }
    }
    let a1 = linear_eval_rat(&patch.x1, coords);
    let a2 = linear_eval_rat(&patch.x2, coords);
    let b1 = linear_eval_rat(&patch.y1, coords);
    let b2 = linear_eval_rat(&patch.y2, coords);
    let (a, b, c) = match classify(Rat::zero(), a1, a2, b1, b2, |x, y| x * y) {
        Ok(t) => t,
        Err(r) => return Ok(MapResult::Undefined(r)),
    };
    let (a, b, c) = apply_automorphism_rat(patch, a, b, c);
    if c.is_zero() {
        // [a : b : 0], normalized
        return Ok(MapResult::Point(if !a.is_zero() {
            PlanePoint::Infinite {
                x: rat_int(1),
                y: b / a,
            }
        } else {
            PlanePoint::Infinite {
                x: rat_int(0),
                y: rat_int(1),
            }
        }));
    }
    let x = a / c.clone();
    let ypre = b / c;
    let y = patch.q0.eval(&x) * ypre;
    Ok(MapResult::Point(PlanePoint::Affine { x, y }))
}

fn apply_automorphism_rat(patch: &PatchSpec, a: Rat, b: Rat, c: Rat) -> (Rat, Rat, Rat) {
    match patch.post_automorphism {
        None => (a, b, c),
        Some(m) => {
            let row = |r: [i64; 3]| {
                Rat::from_integer(r[0].into()) * &a
                    + Rat::from_integer(r[1].into()) * &b
                    + Rat::from_integer(r[2].into()) * &c
            };
            (row(m[0]), row(m[1]), row(m[2]))
        }
    }
}

/// Evaluate the patch map at an 𝔽ₚ-point of the model.
pub fn eval_patch_fp(
    model: &CanonicalModel,
    patch: &PatchSpec,
    point: &[u64],
    field: Fp,
) -> Result<MapResult<u64>, PlanemapError> {
    let p = field.modulus();
    for eq in &model.equations {
        let ebar = eq.reduce_mod_p(field)?;
        if ebar.eval(point) != 0 {
            return Err(PlanemapError::NotOnCurve);
        }
    }
    let lin = |form: &[Rat]| -> Result<u64, ExactError> {
        let mut acc = 0u64;
        for (c, &v) in form.iter().zip(point) {
            let cm = crate::exact::rat::reduce_rat_mod_p(c, p)?;
            acc = field.add(acc, field.mul(cm, v));
        }
        Ok(acc)
    };
    let (a1, a2, b1, b2) = (
        lin(&patch.x1)?,
        lin(&patch.x2)?,
        lin(&patch.y1)?,
        lin(&patch.y2)?,
    );
    let (a, b, c) = match classify(0u64, a1, a2, b1, b2, |x, y| field.mul(*x, *y)) {
        Ok(t) => t,
        Err(r) => return Ok(MapResult::Undefined(r)),
    };
    let (a, b, c) = match patch.post_automorphism {
        None => (a, b, c),
        Some(m) => {
            let row = |r: [i64; 3]| {
                let mut acc = field.mul(field.from_i64(r[0]), a);
                acc = field.add(acc, field.mul(field.from_i64(r[1]), b));
                field.add(acc, field.mul(field.from_i64(r[2]), c))
            };
            (row(m[0]), row(m[1]), row(m[2]))
        }
    };
    if c == 0 {
        return Ok(MapResult::Point(if a != 0 {
            PlanePoint::Infinite {
                x: 1,
                y: field.mul(b, field.inv(a)),
            }
        } else {
            PlanePoint::Infinite { x: 0, y: 1 }
        }));
    }
    let cinv = field.inv(c);
    let x = field.mul(a, cinv);
    let ypre = field.mul(b, cinv);
    let q0 = patch.q0.reduce_mod_p(field)?;
    let y = field.mul(q0.eval(x), ypre);
    Ok(MapResult::Point(PlanePoint::Affine { x, y }))
}

/// Monicize a bidegree equation Σ Qᵢ(x, z)·y^{d−i}: substitute Y = Q₀·y,
/// multiply through by Q₀^{d−1}, and restrict to z = 1:
/// Yᵈ + Q₁Y^{d−1} + Q₀Q₂Y^{d−2} + ⋯ + Q₀^{d−1}Q_d.
/// The input is first normalized so Q₀(x, 1) is monic.
pub fn monicize(bidegree_eq: &MultiPoly) -> Result<MultiPoly, ExactError> {
    if bidegree_eq.nvars() != 3 {
        return Err(ExactError::DegenerateInput(
            "expected a polynomial in x, y, z",
        ));
    }
    let d = bidegree_eq.degree_in(1);
    if d == 0 {
        return Err(ExactError::DegenerateInput("equation constant in y"));
    }
    // split into y-coefficients restricted to z = 1
    let mut cs: Vec<RatPoly> = vec![RatPoly::zero(); d + 1];
    for (mono, c) in bidegree_eq.terms() {
        let (ex, ey) = (mono[0] as usize, mono[1] as usize);
        cs[ey] = cs[ey].add(&RatPoly::monomial(c.clone(), ex));
    }
    let q0 = cs[d].clone();
    if q0.is_zero() {
        return Err(ExactError::DegenerateInput(
            "vanishing leading y-coefficient",
        ));
    }
    // normalize: Q₀(x,1) monic
    let lc = q0.leading().unwrap().clone();
    let cs: Vec<RatPoly> = cs
        .iter()
        .map(|c| c.scale(&(Rat::from_integer(1.into()) / lc.clone())))
        .collect();
    let q0 = cs[d].clone();
    let xy = vec!["x".to_string(), "y".to_string()];
    let mut terms: Vec<(Vec<u16>, Rat)> = vec![(vec![0, d as u16], rat_int(1))];
    for i in 1..=d {
        let coeff = q0.pow(i - 1).mul(&cs[d - i]);
        for (k, c) in coeff.coeffs().iter().enumerate() {
            if !c.is_zero() {
                terms.push((vec![k as u16, (d - i) as u16], c.clone()));
            }
        }
    }
    MultiPoly::from_terms(xy, terms)
}

/// Outcome of the series certification of a plane model.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SeriesCertificate {
    pub outcome: crate::modeldb::CheckOutcome,
    /// Exponent bound through which vanishing was provable.
    pub prec: i64,
    /// Number of series coefficients actually checked.
    pub checked: i64,
    /// Nonzero residues found (empty on pass).
    pub residues: Vec<i64>,
}

fn linform_series(form: &[Rat], series: &[TruncatedLaurent]) -> TruncatedLaurent {
    let mut acc: Option<TruncatedLaurent> = None;
    for (c, s) in form.iter().zip(series) {
        if c.is_zero() {
            continue;
        }
        let t = s.scale(c);
        acc = Some(match acc {
            None => t,
            Some(a) => a.add(&t),
        });
    }
    acc.expect("zero linear form")
}

/// Homogeneous evaluation of a univariate polynomial: Σ cₖ·Aᵏ·B^(deg−k).
fn homog_eval(poly: &RatPoly, a: &TruncatedLaurent, b: &TruncatedLaurent) -> TruncatedLaurent {
    let deg = poly.degree().unwrap_or(0);
    let mut acc: Option<TruncatedLaurent> = None;
    for (k, c) in poly.coeffs().iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let t = a.pow(k).mul(&b.pow(deg - k)).scale(c);
        acc = Some(match acc {
            None => t,
            Some(s) => s.add(&t),
        });
    }
    acc.unwrap_or_else(|| TruncatedLaurent::constant(Rat::zero()))
}

/// Certify Q(x(q), Y(q)) = 0 on the truncated q-expansions with denominators
/// cleared, reporting the propagated precision bound. Insufficient precision
/// is reported as inconclusive, never as a pass.
pub fn verify_plane_model_series(
    model: &CanonicalModel,
    patch: &PatchSpec,
    q: &MultiPoly,
) -> Result<SeriesCertificate, PlanemapError> {
    use crate::modeldb::CheckOutcome;
    let series = model.coordinate_series();
    // numerator/denominator series of x and of the pre-Q₀ y
    let (na, nb, nu, nw) = match patch.post_automorphism {
        None => (
            linform_series(&patch.x1, &series),
            linform_series(&patch.x2, &series),
            linform_series(&patch.y1, &series),
            linform_series(&patch.y2, &series),
        ),
        Some(m) => {
            let a1 = linform_series(&patch.x1, &series);
            let a2 = linform_series(&patch.x2, &series);
            let b1 = linform_series(&patch.y1, &series);
            let b2 = linform_series(&patch.y2, &series);
            let sa = a1.mul(&b2);
            let sb = a2.mul(&b1);
            let sc = a2.mul(&b2);
            let row = |r: [i64; 3]| {
                sa.scale(&rat_int(r[0]))
                    .add(&sb.scale(&rat_int(r[1])))
                    .add(&sc.scale(&rat_int(r[2])))
            };
            let (ra, rb, rc) = (row(m[0]), row(m[1]), row(m[2]));
            (ra, rc.clone(), rb, rc)
        }
    };
    let e = patch.q0.degree().unwrap_or(0);
    let q0h = homog_eval(&patch.q0, &na, &nb);
    let yn = q0h.mul(&nu);
    let yd = nb.pow(e).mul(&nw);
    let cs = q.y_coefficients()?;
    let d = cs.len() - 1;
    let degs: Vec<usize> = cs.iter().map(|c| c.degree().unwrap_or(0)).collect();
    let m = *degs.iter().max().unwrap();
    let mut total: Option<TruncatedLaurent> = None;
    let mut min_lo = i64::MAX;
    for i in 0..=d {
        let ci = &cs[d - i];
        if ci.is_zero() {
            continue;
        }
        let mut t = homog_eval(ci, &na, &nb);
        if m > degs[d - i] {
            t = t.mul(&nb.pow(m - degs[d - i]));
        }
        if d - i > 0 {
            t = t.mul(&yn.pow(d - i));
        }
        if i > 0 {
            t = t.mul(&yd.pow(i));
        }
        min_lo = min_lo.min(t.lo());
        total = Some(match total {
            None => t,
            Some(s) => s.add(&t),
        });
    }
    let total = total.expect("plane model has terms");
    let residues: Vec<i64> = total.support().collect();
    let checked = total.prec() - min_lo;
    let outcome = if !residues.is_empty() {
        CheckOutcome::Fail
    } else if checked <= 0 {
        CheckOutcome::Inconclusive
    } else {
        CheckOutcome::Pass
    };
    Ok(SeriesCertificate {
        outcome,
        prec: total.prec(),
        checked,
        residues,
    })
}

/// Exhaustive 𝔽ₚ check of a plane model: Q(φ(P)) must vanish at every
/// 𝔽ₚ-point of the canonical model where the patch map is defined and lands
/// in the affine chart.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FpModelCheck {
    pub p: u64,
    pub points_seen: usize,
    pub affine_checked: usize,
    pub failures: Vec<Vec<u64>>,
}

pub fn verify_plane_model_fp(
    model: &CanonicalModel,
    patch: &PatchSpec,
    q: &MultiPoly,
    p: u64,
) -> Result<FpModelCheck, PlanemapError> {
    let field = Fp::new(p)?;
    let qbar = q.reduce_mod_p(field)?;
    let pts = crate::points::enumerate_fp_points(model, p)?;
    let mut checked = 0usize;
    let mut failures = Vec::new();
    for pt in &pts.points {
        if let MapResult::Point(PlanePoint::Affine { x, y }) =
            eval_patch_fp(model, patch, pt, field)?
        {
            checked += 1;
            if qbar.eval(&[x, y]) != 0 {
                failures.push(pt.clone());
            }
        }
    }
    Ok(FpModelCheck {
        p,
        points_seen: pts.points.len(),
        affine_checked: checked,
        failures,
    })
}

/// Points satisfying each degeneracy condition, grouped by condition.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct UndefinedLocus<T> {
    pub x1x2zero: Vec<T>,
    pub y1y2zero: Vec<T>,
    pub x2y2zero: Vec<T>,
}

/// Degeneracy loci over 𝔽ₚ by exhaustive enumeration of the model's points.
pub fn undefined_locus_points_fp(
    model: &CanonicalModel,
    patch: &PatchSpec,
    p: u64,
) -> Result<UndefinedLocus<Vec<u64>>, PlanemapError> {
    let field = Fp::new(p)?;
    let pts = crate::points::enumerate_fp_points(model, p)?;
    let mut out = UndefinedLocus::default();
    for pt in &pts.points {
        let lin = |form: &[Rat]| -> Result<u64, ExactError> {
            let mut acc = 0u64;
            for (c, &v) in form.iter().zip(pt.iter()) {
                acc = field.add(
                    acc,
                    field.mul(crate::exact::rat::reduce_rat_mod_p(c, p)?, v),
                );
            }
            Ok(acc)
        };
        let (a1, a2) = (lin(&patch.x1)?, lin(&patch.x2)?);
        let (b1, b2) = (lin(&patch.y1)?, lin(&patch.y2)?);
        if a1 == 0 && a2 == 0 {
            out.x1x2zero.push(pt.clone());
        }
        if b1 == 0 && b2 == 0 {
            out.y1y2zero.push(pt.clone());
        }
        if a2 == 0 && b2 == 0 {
            out.x2y2zero.push(pt.clone());
        }
    }
    Ok(out)
}

/// Degeneracy loci over ℚ within the bounded-height rational point search.
pub fn undefined_locus_points_rational(
    model: &CanonicalModel,
    patch: &PatchSpec,
    height: u64,
) -> UndefinedLocus<Vec<i64>> {
    let pts = crate::points::search_rational_points(model, height);
    let mut out = UndefinedLocus::default();
    for pt in pts {
        let a1 = linear_eval_rat(&patch.x1, &pt);
        let a2 = linear_eval_rat(&patch.x2, &pt);
        let b1 = linear_eval_rat(&patch.y1, &pt);
        let b2 = linear_eval_rat(&patch.y2, &pt);
        if a1.is_zero() && a2.is_zero() {
            out.x1x2zero.push(pt.clone());
        }
        if b1.is_zero() && b2.is_zero() {
            out.y1y2zero.push(pt.clone());
        }
        if a2.is_zero() && b2.is_zero() {
            out.x2y2zero.push(pt);
        }
    }
    out
}

/// Best-effort construction of bidegree relations between x(q) and y(q) by
/// series linear algebra. With only 19 coefficients the kernel can be
/// higher-dimensional; all kernel candidates are returned and certification
/// is the verifiers' job.
#[allow(clippy::needless_range_loop)] // row elimination reads mat[r] while writing mat[i]
pub fn fit_bidegree_relation(
    model: &CanonicalModel,
    patch: &PatchSpec,
    degx: usize,
    degy: usize,
) -> Vec<MultiPoly> {
    let series = model.coordinate_series();
    let na = linform_series(&patch.x1, &series);
    let nb = linform_series(&patch.x2, &series);
    let nu = linform_series(&patch.y1, &series);
    let nw = linform_series(&patch.y2, &series);
    // cleared monomials: x^i y^j -> x1^i x2^(degx-i) y1^j y2^(degy-j)
    let mut monomials = Vec::new();
    let mut exps = Vec::new();
    for i in 0..=degx {
        for j in 0..=degy {
            let s = na
                .pow(i)
                .mul(&nb.pow(degx - i))
                .mul(&nu.pow(j))
                .mul(&nw.pow(degy - j));
            monomials.push(s);
            exps.push((i as u16, j as u16));
        }
    }
    let lo = monomials.iter().map(|s| s.lo()).min().unwrap();
    let hi = monomials.iter().map(|s| s.prec()).min().unwrap();
    if hi <= lo {
        return Vec::new();
    }
    // rows: exponents lo..hi; columns: monomials
    let rows = (hi - lo) as usize;
    let cols = monomials.len();
    let mut mat: Vec<Vec<Rat>> = (0..rows)
        .map(|r| {
            (0..cols)
                .map(|c| monomials[c].coeff(lo + r as i64))
                .collect()
        })
        .collect();
    // exact Gaussian elimination, tracking pivots
    let mut pivots = Vec::new();
    let mut r = 0usize;
    for c in 0..cols {
        if r >= rows {
            break;
        }
        let piv = (r..rows).find(|&i| !mat[i][c].is_zero());
        let Some(piv) = piv else { continue };
        mat.swap(r, piv);
        let inv = Rat::from_integer(1.into()) / mat[r][c].clone();
        for j in c..cols {
            mat[r][j] = &mat[r][j] * &inv;
        }
        for i in 0..rows {
            if i != r && !mat[i][c].is_zero() {
                let f = mat[i][c].clone();
                for j in c..cols {
                    let t = &f * &mat[r][j];
                    mat[i][j] -= t;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    let free: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
    let xy = vec!["x".to_string(), "y".to_string()];
    free.iter()
        .map(|&fc| {
            let mut coeffs = vec![Rat::zero(); cols];
            coeffs[fc] = rat_int(1);
            for (ri, &pc) in pivots.iter().enumerate() {
                coeffs[pc] = -mat[ri][fc].clone();
            }
            MultiPoly::from_terms(
                xy.clone(),
                coeffs
                    .into_iter()
                    .enumerate()
                    .map(|(k, c)| (vec![exps[k].0, exps[k].1], c))
                    .collect(),
            )
            .unwrap()
        })
        .collect()
}
