//! Exhaustive 𝔽ₚ-point enumeration of the canonical models.
//!
//! Points of ℙ^{g−1}(𝔽ₚ) are iterated in normalized form (first nonzero
//! coordinate 1, earlier coordinates 0, the tail running odometer-style), and
//! every defining equation is evaluated with an early exit on the first
//! nonzero value. Equations are precompiled to flat term lists in u64
//! arithmetic; the sweep parallelizes over the leading free coordinate and
//! results are concatenated in deterministic order.

use num_traits::ToPrimitive;
use rayon::prelude::*;

use super::PointsError;
use crate::exact::fp::is_prime;
use crate::modeldb::CanonicalModel;

/// All 𝔽ₚ-points of a model, normalized, in deterministic order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FpPointSet {
    pub p: u64,
    pub points: Vec<Vec<u64>>,
}

/// One equation compiled for mod-p evaluation: (coefficient, variable indices).
#[derive(Debug, Clone)]
pub struct CompiledEq {
    terms: Vec<(u64, [u8; 3], u8)>,
}

impl CompiledEq {
    #[inline]
    pub fn eval(&self, x: &[u64], p: u64) -> u64 {
        let mut acc: u64 = 0;
        for &(c, vars, n) in &self.terms {
            let mut t = c;
            for &v in &vars[..n as usize] {
                t *= x[v as usize];
            }
            acc += t;
        }
        acc % p
    }
}

pub(crate) fn compile_equations(
    model: &CanonicalModel,
    p: u64,
) -> Result<Vec<CompiledEq>, PointsError> {
    let mut eqs = Vec::with_capacity(model.equations.len());
    for eq in &model.equations {
        let mut terms = Vec::new();
        for (mono, c) in eq.terms() {
            let cm = crate::exact::rat::reduce_rat_mod_p(c, p)
                .map_err(|e| PointsError::BadModel(e.to_string()))?;
            if cm == 0 {
                continue;
            }
            let mut vars = [0u8; 3];
            let mut n = 0usize;
            for (i, &e) in mono.iter().enumerate() {
                for _ in 0..e {
                    if n == 3 {
                        return Err(PointsError::BadModel("term degree exceeds 3".into()));
                    }
                    vars[n] = i as u8;
                    n += 1;
                }
            }
            terms.push((cm, vars, n as u8));
        }
        eqs.push(CompiledEq { terms });
    }
    Ok(eqs)
}

/// All points of the projective model over 𝔽ₚ. Fails when p | N or p is
/// composite. The heaviest shipped case (g = 6, p = 31: ~29.7M candidate
/// points) finishes in seconds.
pub fn enumerate_fp_points(model: &CanonicalModel, p: u64) -> Result<FpPointSet, PointsError> {
    if !is_prime(p) || model.level.is_multiple_of(p) {
        return Err(PointsError::BadPrime(p));
    }
    let eqs = compile_equations(model, p)?;
    let g = model.genus;
    let mut points: Vec<Vec<u64>> = Vec::new();
    for lead in 0..g {
        let nfree = g - 1 - lead;
        if nfree == 0 {
            let mut x = vec![0u64; g];
            x[lead] = 1;
            if eqs.iter().all(|e| e.eval(&x, p) == 0) {
                points.push(x);
            }
            continue;
        }
        // parallelize over the first free coordinate
        let mut chunks: Vec<Vec<Vec<u64>>> = (0..p)
            .into_par_iter()
            .map(|v0| {
                let mut found = Vec::new();
                let mut x = vec![0u64; g];
                x[lead] = 1;
                x[lead + 1] = v0;
                let rest = nfree - 1;
                let mut odo = vec![0u64; rest];
                loop {
                    for (i, &o) in odo.iter().enumerate() {
                        x[lead + 2 + i] = o;
                    }
                    if eqs.iter().all(|e| e.eval(&x, p) == 0) {
                        found.push(x.clone());
                    }
                    // increment
                    let mut i = rest;
                    loop {
                        if i == 0 {
                            return found;
                        }
                        i -= 1;
                        odo[i] += 1;
                        if odo[i] < p {
                            break;
                        }
                        odo[i] = 0;
                    }
                }
            })
            .collect();
        for c in chunks.drain(..) {
            points.extend(c);
        }
    }
    Ok(FpPointSet { p, points })
}

impl FpPointSet {
    /// Reduction of an integral projective point into normalized form, when
    /// its coordinates do not all vanish mod p.
    pub fn normalize_reduction(coords: &[i64], p: u64) -> Option<Vec<u64>> {
        let mut x: Vec<u64> = coords
            .iter()
            .map(|&c| c.rem_euclid(p as i64) as u64)
            .collect();
        let lead = x.iter().position(|&c| c != 0)?;
        let inv = crate::exact::rat::inv_mod(x[lead], p);
        for c in &mut x {
            *c = (*c as u128 * inv as u128 % p as u128) as u64;
        }
        Some(x)
    }

    pub fn contains(&self, pt: &[u64]) -> bool {
        self.points.iter().any(|q| q == pt)
    }
}

/// Weil interval |#X(𝔽ₚ) − (p+1)| ≤ 2g√p as (lower, upper) bounds.
pub fn weil_interval(genus: usize, p: u64) -> (f64, f64) {
    let s = 2.0 * genus.to_f64().unwrap() * (p as f64).sqrt();
    (p as f64 + 1.0 - s, p as f64 + 1.0 + s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::modeldb::{fixture_dir, load_level};

    #[test]
    fn bad_prime_is_rejected() {
        let m = load_level(&fixture_dir(), 137).unwrap();
        assert!(matches!(
            enumerate_fp_points(&m, 137),
            Err(PointsError::BadPrime(137))
        ));
        assert!(matches!(
            enumerate_fp_points(&m, 15),
            Err(PointsError::BadPrime(15))
        ));
    }

    #[test]
    fn count_137_over_f5_frozen() {
        let m = load_level(&fixture_dir(), 137).unwrap();
        let pts = enumerate_fp_points(&m, 5).unwrap();
        // frozen from an exhaustive scan; within the Weil interval [0, 23]
        assert_eq!(pts.points.len(), 8);
        let (lo, hi) = weil_interval(4, 5);
        assert!(lo <= 8.0 && 8.0 <= hi);
    }

    #[test]
    fn known_points_reduce_into_the_set() {
        let m = load_level(&fixture_dir(), 137).unwrap();
        let pts = enumerate_fp_points(&m, 5).unwrap();
        for kp in &m.known_points {
            let r = FpPointSet::normalize_reduction(&kp.coords, 5).unwrap();
            assert!(pts.contains(&r), "{:?}", kp);
        }
    }

    #[test]
    fn deterministic_and_duplicate_free() {
        let m = load_level(&fixture_dir(), 157).unwrap();
        let a = enumerate_fp_points(&m, 5).unwrap();
        let b = enumerate_fp_points(&m, 5).unwrap();
        assert_eq!(a, b);
        let mut sorted = a.points.clone();
        sorted.sort();
        sorted.dedup();
        assert_eq!(sorted.len(), a.points.len());
    }
}
