//! Residue-disk analysis of plane models and the 𝔽ₚ coverage check.
//!
//! For a plane model Q(x, y) monic in y, Δ(x) is its discriminant in y and
//! r(x) = Δ/gcd(Δ, Δ′) its squarefree part. A residue disk of the plane
//! curve is *bad* if it contains a point whose x-coordinate is ∞ or a zero
//! of r(x), and *good* otherwise. The level is workable at p when every
//! 𝔽ₚ-point of the canonical model maps, on at least one patch, to a good
//! point.
//!
//! Points where the patch formulas [x₁y₂ : x₂y₁ : x₂y₂] vanish identically
//! still have well-defined image disks: the map is a morphism of curves, so
//! the whole residue disk maps into a single disk of the plane model. Those
//! rows are resolved by Hensel-lifting the point along the curve to ℤ/pᵏ and
//! reading the image of the lift; the classification recorded for the row is
//! the classification of that image disk.

use num_traits::{One, ToPrimitive};
use thiserror::Error;

use crate::exact::fp::{Fp, FpPoly};
use crate::exact::multipoly::MultiPoly;
use crate::exact::rat::Rat;
use crate::exact::roots::rational_roots;
use crate::exact::unipoly::RatPoly;
use crate::exact::{discriminant_y, ExactError};
use crate::modeldb::{CanonicalModel, NewformOrbitRecord, PatchSpec};
use crate::planemap::{eval_patch_fp, MapResult, PlanePoint, UndefinedReason};
use crate::points::PointsError;

#[derive(Debug, Error)]
pub enum DisksError {
    #[error("plane model must have deg_y ≥ 2")]
    Degenerate,
    #[error("patch {0} fails the good-reduction screen at p = {1}")]
    BadReduction(usize, u64),
    #[error(transparent)]
    Exact(#[from] ExactError),
    #[error(transparent)]
    Points(#[from] PointsError),
    #[error("planemap error: {0}")]
    Planemap(String),
}

/// Δ(x) and its squarefree part r(x) for one plane model.
#[derive(Debug, Clone, PartialEq)]
pub struct DiskData {
    pub delta: RatPoly,
    pub r: RatPoly,
}

pub fn disk_data(q: &MultiPoly) -> Result<DiskData, DisksError> {
    if q.degree_in(1) < 2 {
        return Err(DisksError::Degenerate);
    }
    let delta = discriminant_y(q)?;
    let r = delta.squarefree_part()?;
    Ok(DiskData { delta, r })
}

/// True iff r(x) has no rational root (no linear factor over ℚ).
pub fn linear_factor_screen(q: &MultiPoly) -> Result<bool, DisksError> {
    let dd = disk_data(q)?;
    Ok(rational_roots(&dd.r)?.is_empty())
}

/// The operational good-reduction test: p ∤ N, p ≥ 5, all coefficients of Q
/// p-integral, and Δ mod p nonzero with its degree preserved.
pub fn good_reduction_screen(model: &CanonicalModel, q: &MultiPoly, p: u64) -> bool {
    if p < 5 || model.level.is_multiple_of(p) || !crate::exact::fp::is_prime(p) {
        return false;
    }
    let field = match Fp::new(p) {
        Ok(f) => f,
        Err(_) => return false,
    };
    if q.terms()
        .any(|(_, c)| !crate::exact::rat::is_p_integral(c, p))
    {
        return false;
    }
    let dd = match disk_data(q) {
        Ok(d) => d,
        Err(_) => return false,
    };
    match dd.delta.reduce_mod_p(field) {
        Ok(db) => !db.is_zero() && db.degree() == dd.delta.degree(),
        Err(_) => false,
    }
}

/// Classification of a mapped point per the disk criterion.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Classification {
    Good,
    BadRoot,
    BadInfinite,
    Undefined(UndefinedReason),
}

/// The reduction r̄ used to test badness of finite x-values. Computed as the
/// squarefree part of Δ̄ over 𝔽ₚ, which matches the roots of r mod p whenever
/// the degree of Δ is preserved (the good-reduction screen ensures that).
pub fn rbar(q: &MultiPoly, field: Fp) -> Result<FpPoly, DisksError> {
    let dd = disk_data(q)?;
    let db = dd.delta.reduce_mod_p(field)?;
    Ok(db.squarefree_part()?)
}

/// Total classification of a map result: infinite disks are bad, finite ones
/// are bad exactly on roots of r̄, undefined passes through.
pub fn classify_with(rbar: &FpPoly, plane_pt: &MapResult<u64>) -> Classification {
    match plane_pt {
        MapResult::Undefined(reason) => Classification::Undefined(*reason),
        MapResult::Point(PlanePoint::Infinite { .. }) => Classification::BadInfinite,
        MapResult::Point(PlanePoint::Affine { x, .. }) => {
            if rbar.eval(*x) == 0 {
                Classification::BadRoot
            } else {
                Classification::Good
            }
        }
    }
}

/// Spec-shaped wrapper computing the disk data from scratch.
pub fn classify_point(
    q: &MultiPoly,
    p: u64,
    plane_pt: &MapResult<u64>,
) -> Result<Classification, DisksError> {
    let field = Fp::new(p)?;
    Ok(classify_with(&rbar(q, field)?, plane_pt))
}

/// One row of the coverage table: classification per patch, with a flag for
/// rows obtained through the disk-image resolution of undefined formulas.
#[derive(Debug, Clone)]
pub struct CoverageRow {
    pub point: Vec<u64>,
    pub classes: Vec<(usize, Classification, bool)>,
}

#[derive(Debug, Clone)]
pub struct CoverageReport {
    pub level: u64,
    pub p: u64,
    pub patch_indices: Vec<usize>,
    pub rows: Vec<CoverageRow>,
    pub covered: bool,
    pub uncovered: Vec<Vec<u64>>,
}

/// Check that every 𝔽ₚ-point of the canonical model maps to a good point on
/// at least one of the given patches.
pub fn coverage_check(
    model: &CanonicalModel,
    patch_indices: &[usize],
    p: u64,
) -> Result<CoverageReport, DisksError> {
    let field = Fp::new(p)?;
    let mut patches: Vec<&PatchSpec> = Vec::new();
    let mut rbars: Vec<FpPoly> = Vec::new();
    for &idx in patch_indices {
        let patch = model
            .patch(idx)
            .ok_or_else(|| DisksError::Planemap(format!("no patch {idx}")))?;
        let q = &model
            .plane_model(idx)
            .ok_or_else(|| DisksError::Planemap(format!("no plane model {idx}")))?
            .q;
        if !good_reduction_screen(model, q, p) {
            return Err(DisksError::BadReduction(idx, p));
        }
        patches.push(patch);
        rbars.push(rbar(q, field)?);
    }
    let pts = crate::points::enumerate_fp_points(model, p)?;
    let lifter = DiskLifter::new(model, p)?;
    let mut rows = Vec::with_capacity(pts.points.len());
    let mut uncovered = Vec::new();
    for pt in &pts.points {
        let mut classes = Vec::with_capacity(patches.len());
        for (patch, rb) in patches.iter().zip(&rbars) {
            let result = eval_patch_fp(model, patch, pt, field)
                .map_err(|e| DisksError::Planemap(e.to_string()))?;
            let (class, resolved) = match classify_with(rb, &result) {
                Classification::Undefined(reason) => match lifter.resolve(patch, pt) {
                    Some(image) => (classify_with(rb, &MapResult::Point(image)), true),
                    None => (Classification::Undefined(reason), false),
                },
                c => (c, false),
            };
            classes.push((patch.index, class, resolved));
        }
        if !classes.iter().any(|(_, c, _)| *c == Classification::Good) {
            uncovered.push(pt.clone());
        }
        rows.push(CoverageRow {
            point: pt.clone(),
            classes,
        });
    }
    Ok(CoverageReport {
        level: model.level,
        p,
        patch_indices: patch_indices.to_vec(),
        covered: uncovered.is_empty(),
        rows,
        uncovered,
    })
}

/// Result of scanning one prime.
#[derive(Debug, Clone)]
pub struct PrimeScanRow {
    pub p: u64,
    pub covered: bool,
    /// From ingested newform data when present; None = unknown.
    pub hecke_advisory: Option<bool>,
}

/// Scan primes in [p_min, p_max]: run the coverage check wherever the
/// good-reduction screen admits all requested patches.
pub fn find_primes(
    model: &CanonicalModel,
    patch_indices: &[usize],
    p_min: u64,
    p_max: u64,
    newform_records: Option<&[NewformOrbitRecord]>,
) -> Vec<PrimeScanRow> {
    let mut out = Vec::new();
    for p in p_min.max(2)..=p_max {
        if !crate::exact::fp::is_prime(p) {
            continue;
        }
        let admissible = patch_indices.iter().all(|&idx| {
            model
                .plane_model(idx)
                .map(|pm| good_reduction_screen(model, &pm.q, p))
                .unwrap_or(false)
        });
        if !admissible {
            continue;
        }
        let covered = match coverage_check(model, patch_indices, p) {
            Ok(rep) => rep.covered,
            Err(_) => continue,
        };
        let hecke_advisory = newform_records.and_then(|recs| {
            crate::modeldb::hecke_generation_check(model.genus as u32, p, recs).ok()
        });
        out.push(PrimeScanRow {
            p,
            covered,
            hecke_advisory,
        });
    }
    out
}

/// Hensel lifter along the curve: produces points of X(ℤ/pᵏ) over a given
/// 𝔽ₚ-point, used to read off the image disk where the patch formulas
/// degenerate.
type IntTerms = Vec<(i64, Vec<u8>)>;

pub struct DiskLifter {
    p: u64,
    genus: usize,
    eqs: Vec<IntTerms>,
    jac: Vec<Vec<IntTerms>>,
}

impl DiskLifter {
    pub fn new(model: &CanonicalModel, p: u64) -> Result<DiskLifter, DisksError> {
        let mut eqs = Vec::new();
        let mut jac = Vec::new();
        for eq in &model.equations {
            let terms = int_terms(eq)?;
            let mut row = Vec::new();
            for v in 0..model.genus {
                row.push(int_terms(&eq.derivative(v))?);
            }
            eqs.push(terms);
            jac.push(row);
        }
        Ok(DiskLifter {
            p,
            genus: model.genus,
            eqs,
            jac,
        })
    }

    /// One lift of `pt` modulo p^k along the curve; `tweak` selects different
    /// disk directions at each Newton step.
    fn lift(&self, pt: &[u64], k: u32, tweak: u64) -> Option<Vec<u64>> {
        let p = self.p;
        let lead = pt.iter().position(|&c| c != 0)?;
        debug_assert_eq!(pt[lead], 1);
        let idx: Vec<usize> = (0..self.genus).filter(|&i| i != lead).collect();
        let mut cur: Vec<u64> = pt.to_vec();
        let mut ps: u64 = p; // p^step
        for step in 1..k {
            let modulus = ps.checked_mul(p)?; // p^(step+1)
            let mut mat = Vec::with_capacity(self.eqs.len());
            let mut rhs = Vec::with_capacity(self.eqs.len());
            for (ei, terms) in self.eqs.iter().enumerate() {
                let val = eval_terms_mod(terms, &cur, modulus);
                debug_assert!(val.is_multiple_of(ps), "lift invariant broken");
                let row: Vec<u64> = idx
                    .iter()
                    .map(|&i| eval_terms_mod(&self.jac[ei][i], &cur, p))
                    .collect();
                mat.push(row);
                rhs.push((p - (val / ps) % p) % p);
            }
            let (part, kernel) = solve_affine_mod_p(&mat, &rhs, p)?;
            let mut t = part;
            if !kernel.is_empty() {
                let kv = &kernel[((tweak + step as u64) as usize) % kernel.len()];
                let s = (tweak + step as u64) % p;
                for (ti, kvi) in t.iter_mut().zip(kv) {
                    *ti = (*ti + s * kvi) % p;
                }
            }
            for (j, &i) in idx.iter().enumerate() {
                cur[i] = (cur[i] + t[j] * ps) % modulus;
            }
            ps = modulus;
        }
        Some(cur)
    }

    /// Image disk of `pt` under the patch map, for points where the
    /// coordinate formulas vanish identically. Returns None only if every
    /// attempted lift stays inside the degeneracy locus (not observed on the
    /// shipped fixtures).
    pub fn resolve(&self, patch: &PatchSpec, pt: &[u64]) -> Option<PlanePoint<u64>> {
        let p = self.p;
        for k in [3u32, 4, 6] {
            let modulus = (p as u128).pow(k);
            if modulus > u64::MAX as u128 / (p as u128) {
                continue;
            }
            let modulus = modulus as u64;
            for tweak in 0..p.min(8) {
                let Some(lift) = self.lift(pt, k, tweak) else {
                    continue;
                };
                let lin = |form: &[Rat]| -> Option<u64> {
                    let mut acc: u128 = 0;
                    for (c, &v) in form.iter().zip(&lift) {
                        let cm = reduce_rat_mod(c, modulus)?;
                        acc = (acc + cm as u128 * v as u128) % modulus as u128;
                    }
                    Some(acc as u64)
                };
                let (a1, a2, b1, b2) = (
                    lin(&patch.x1)?,
                    lin(&patch.x2)?,
                    lin(&patch.y1)?,
                    lin(&patch.y2)?,
                );
                let m128 = modulus as u128;
                let mut a = (a1 as u128 * b2 as u128 % m128) as u64;
                let mut b = (a2 as u128 * b1 as u128 % m128) as u64;
                let mut c = (a2 as u128 * b2 as u128 % m128) as u64;
                if let Some(mat) = patch.post_automorphism {
                    let row = |r: [i64; 3], a: u64, b: u64, c: u64| {
                        let t = (r[0].rem_euclid(modulus as i64) as u128 * a as u128
                            + r[1].rem_euclid(modulus as i64) as u128 * b as u128
                            + r[2].rem_euclid(modulus as i64) as u128 * c as u128)
                            % m128;
                        t as u64
                    };
                    let (na, nb, nc) = (
                        row(mat[0], a, b, c),
                        row(mat[1], a, b, c),
                        row(mat[2], a, b, c),
                    );
                    (a, b, c) = (na, nb, nc);
                }
                let v = [a, b, c].iter().map(|&t| val_p(t, p, k)).min().unwrap();
                if v >= k {
                    continue; // all three still vanish at this depth
                }
                let q = p.pow(v);
                let (a2r, b2r, c2r) = ((a / q) % p, (b / q) % p, (c / q) % p);
                let field = Fp::new(p).ok()?;
                return Some(if c2r != 0 {
                    let cinv = field.inv(c2r);
                    let x = field.mul(a2r, cinv);
                    let ypre = field.mul(b2r, cinv);
                    let q0 = patch.q0.reduce_mod_p(field).ok()?;
                    PlanePoint::Affine {
                        x,
                        y: field.mul(q0.eval(x), ypre),
                    }
                } else if a2r != 0 {
                    PlanePoint::Infinite {
                        x: 1,
                        y: field.mul(b2r, field.inv(a2r)),
                    }
                } else {
                    PlanePoint::Infinite { x: 0, y: 1 }
                });
            }
        }
        None
    }
}

fn int_terms(eq: &MultiPoly) -> Result<IntTerms, DisksError> {
    let mut out = Vec::new();
    for (mono, c) in eq.terms() {
        if !c.denom().is_one() {
            return Err(DisksError::Planemap(
                "non-integral equation coefficient".into(),
            ));
        }
        let ci = c
            .numer()
            .to_i64()
            .ok_or_else(|| DisksError::Planemap("coefficient exceeds i64".into()))?;
        let mut vars = Vec::new();
        for (i, &e) in mono.iter().enumerate() {
            for _ in 0..e {
                vars.push(i as u8);
            }
        }
        out.push((ci, vars));
    }
    Ok(out)
}

fn eval_terms_mod(terms: &IntTerms, x: &[u64], m: u64) -> u64 {
    let mm = m as u128;
    let mut acc: u128 = 0;
    for (c, vars) in terms {
        let mut t = c.rem_euclid(m as i64) as u128;
        for &v in vars {
            t = t * x[v as usize] as u128 % mm;
        }
        acc = (acc + t) % mm;
    }
    acc as u64
}

fn reduce_rat_mod(c: &Rat, m: u64) -> Option<u64> {
    use num_bigint::BigInt;
    let mb = BigInt::from(m);
    let den = crate::exact::rat::bigint_mod_p(&(c.denom() % &mb), m);
    if gcd(den, m) != 1 {
        return None;
    }
    let num = crate::exact::rat::bigint_mod_p(c.numer(), m);
    // inverse modulo a prime power via extended Euclid
    Some((num as u128 * inv_mod_u64(den, m)? as u128 % m as u128) as u64)
}

fn inv_mod_u64(a: u64, m: u64) -> Option<u64> {
    let (mut t, mut new_t) = (0i128, 1i128);
    let (mut r, mut new_r) = (m as i128, a as i128);
    while new_r != 0 {
        let q = r / new_r;
        (t, new_t) = (new_t, t - q * new_t);
        (r, new_r) = (new_r, r - q * new_r);
    }
    if r != 1 {
        return None;
    }
    Some((((t % m as i128) + m as i128) % m as i128) as u64)
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

fn val_p(t: u64, p: u64, k: u32) -> u32 {
    if t == 0 {
        return k;
    }
    let mut v = 0;
    let mut t = t;
    while t.is_multiple_of(p) {
        t /= p;
        v += 1;
    }
    v
}

/// Solve M·t = b over 𝔽ₚ: (particular solution, kernel basis), or None if
/// inconsistent.
#[allow(clippy::needless_range_loop)] // row elimination reads a[r] while writing a[i]
fn solve_affine_mod_p(mat: &[Vec<u64>], rhs: &[u64], p: u64) -> Option<(Vec<u64>, Vec<Vec<u64>>)> {
    let rows = mat.len();
    let cols = if rows == 0 { 0 } else { mat[0].len() };
    let field = Fp::new(p).ok()?;
    let mut a: Vec<Vec<u64>> = mat
        .iter()
        .zip(rhs)
        .map(|(r, &b)| {
            let mut row: Vec<u64> = r.iter().map(|&v| v % p).collect();
            row.push(b % p);
            row
        })
        .collect();
    let mut pivots = Vec::new();
    let mut r = 0usize;
    for c in 0..cols {
        let piv = (r..rows).find(|&i| a[i][c] != 0);
        let Some(piv) = piv else { continue };
        a.swap(r, piv);
        let inv = field.inv(a[r][c]);
        for v in a[r][c..=cols].iter_mut() {
            *v = field.mul(*v, inv);
        }
        for i in 0..rows {
            if i != r && a[i][c] != 0 {
                let f = a[i][c];
                for j in c..=cols {
                    let t = field.mul(f, a[r][j]);
                    a[i][j] = field.sub(a[i][j], t);
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    for i in r..rows {
        if a[i][cols] != 0 {
            return None;
        }
    }
    let mut part = vec![0u64; cols];
    for (i, &c) in pivots.iter().enumerate() {
        part[c] = a[i][cols];
    }
    let mut kernel = Vec::new();
    for fc in (0..cols).filter(|c| !pivots.contains(c)) {
        let mut v = vec![0u64; cols];
        v[fc] = 1;
        for (i, &c) in pivots.iter().enumerate() {
            v[c] = field.neg(a[i][fc]);
        }
        kernel.push(v);
    }
    Some((part, kernel))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat::rat_int;
    use crate::modeldb::{fixture_dir, load_level};

    fn mp(terms: &[(i64, [u16; 2])]) -> MultiPoly {
        MultiPoly::from_terms(
            vec!["x".into(), "y".into()],
            terms
                .iter()
                .map(|&(c, m)| (m.to_vec(), rat_int(c)))
                .collect(),
        )
        .unwrap()
    }

    #[test]
    fn disk_data_examples() {
        // y² − x(x−1)²: Δ = 4x(x−1)², r = x(x−1) up to normalization
        let q = mp(&[(1, [0, 2]), (-1, [3, 0]), (2, [2, 0]), (-1, [1, 0])]);
        let dd = disk_data(&q).unwrap();
        assert_eq!(dd.delta.degree(), Some(3));
        assert_eq!(dd.r, RatPoly::from_i64(&[0, -1, 1])); // x² − x, monic
                                                          // y² − 1: Δ = 4 constant, r = 1
        let q = mp(&[(1, [0, 2]), (-1, [0, 0])]);
        let dd = disk_data(&q).unwrap();
        assert_eq!(dd.delta, RatPoly::from_i64(&[4]));
        assert_eq!(dd.r, RatPoly::from_i64(&[1]));
        // degenerate in y
        let q = mp(&[(1, [0, 1]), (1, [2, 0])]);
        assert!(matches!(disk_data(&q), Err(DisksError::Degenerate)));
    }

    #[test]
    fn screen_examples() {
        // y² − x has r = x with rational root 0
        let q = mp(&[(1, [0, 2]), (-1, [1, 0])]);
        assert!(!linear_factor_screen(&q).unwrap());
        // y² − (x²+1) has r = x²+1 with no rational root
        let q = mp(&[(1, [0, 2]), (-1, [2, 0]), (-1, [0, 0])]);
        assert!(linear_factor_screen(&q).unwrap());
    }

    #[test]
    fn good_reduction_examples() {
        let m = load_level(&fixture_dir(), 137).unwrap();
        let q = &m.plane_models[0].q;
        assert!(good_reduction_screen(&m, q, 5));
        assert!(!good_reduction_screen(&m, q, 137)); // p | N
        assert!(!good_reduction_screen(&m, q, 3)); // p < 5
        let m173 = load_level(&fixture_dir(), 173).unwrap();
        let q173 = &m173.plane_models[0].q;
        assert!(!good_reduction_screen(&m173, q173, 2)); // denominators 2^12
        assert!(good_reduction_screen(&m173, q173, 5));
    }

    #[test]
    fn coverage_137_at_5_single_patch() {
        let m = load_level(&fixture_dir(), 137).unwrap();
        let rep = coverage_check(&m, &[1], 5).unwrap();
        assert!(rep.covered, "uncovered: {:?}", rep.uncovered);
        // the four formula-undefined points were resolved, not skipped
        let resolved = rep
            .rows
            .iter()
            .flat_map(|r| &r.classes)
            .filter(|(_, _, res)| *res)
            .count();
        assert_eq!(resolved, 4);
    }

    #[test]
    fn coverage_197_needs_both_patches() {
        let m = load_level(&fixture_dir(), 197).unwrap();
        let both = coverage_check(&m, &[1, 2], 23).unwrap();
        assert!(both.covered);
        let alone = coverage_check(&m, &[1], 23).unwrap();
        assert!(!alone.covered);
    }

    #[test]
    fn classify_is_total() {
        let m = load_level(&fixture_dir(), 137).unwrap();
        let q = &m.plane_models[0].q;
        let field = Fp::new(5).unwrap();
        let rb = rbar(q, field).unwrap();
        for x in 0..5 {
            let c = classify_with(&rb, &MapResult::Point(PlanePoint::Affine { x, y: 0 }));
            assert!(matches!(c, Classification::Good | Classification::BadRoot));
        }
        assert_eq!(
            classify_with(&rb, &MapResult::Point(PlanePoint::Infinite { x: 1, y: 0 })),
            Classification::BadInfinite
        );
        assert_eq!(
            classify_with(&rb, &MapResult::Undefined(UndefinedReason::X1X2Zero)),
            Classification::Undefined(UndefinedReason::X1X2Zero)
        );
    }

    #[test]
    fn find_primes_examples() {
        let m = load_level(&fixture_dir(), 137).unwrap();
        let rows = find_primes(&m, &[1], 5, 31, None);
        let p5 = rows.iter().find(|r| r.p == 5).expect("p = 5 scanned");
        assert!(p5.covered);
        assert!(p5.hecke_advisory.is_none());
    }
}
