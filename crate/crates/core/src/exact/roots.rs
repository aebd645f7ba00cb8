//! Root finding: rational roots over ℚ and exhaustive roots mod p.
//!
//! Rational roots follow the rational-root theorem — a root n/d in lowest
//! terms has n | a₀ and d | a_deg on the primitive integer form. For small
//! extreme coefficients we enumerate divisors directly; the fixtures' big
//! discriminant-derived polynomials have extreme coefficients with hundreds
//! of digits, so there the divisor pairs are found by Hensel lifting the
//! roots mod p and rationally reconstructing n/d, which searches the same
//! candidate space without factoring. Every candidate is confirmed by exact
//! evaluation before it is reported.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::fp::{is_prime, Fp, FpPoly};
use super::rat::Rat;
use super::unipoly::{RatPoly, ZPoly};
use super::ExactError;

/// All roots of `f` in 𝔽ₚ by exhaustive evaluation (p is small throughout).
pub fn roots_mod_p(f: &FpPoly) -> Result<Vec<u64>, ExactError> {
    if f.is_zero() {
        return Err(ExactError::DegenerateInput("roots of the zero polynomial"));
    }
    let p = f.field.modulus();
    Ok((0..p).filter(|&x| f.eval(x) == 0).collect())
}

/// All rational roots of `f`, each verified by exact evaluation.
pub fn rational_roots(f: &RatPoly) -> Result<Vec<Rat>, ExactError> {
    if f.is_zero() {
        return Err(ExactError::DegenerateInput("roots of the zero polynomial"));
    }
    let sf = f.squarefree_part()?;
    let (prim, _) = sf.to_primitive_z();
    let coeffs = prim.coeffs();
    let mut roots: Vec<Rat> = Vec::new();
    let mut low = 0;
    while coeffs[low].is_zero() {
        low += 1;
    }
    if low > 0 {
        roots.push(Rat::zero());
    }
    let q = ZPoly::new(coeffs[low..].to_vec());
    if q.degree() == Some(0) || q.degree().is_none() {
        return Ok(roots);
    }
    let a0 = q.coeffs()[0].abs();
    let alc = q.leading().unwrap().abs();
    let small = BigInt::from(10u64).pow(12);
    let candidates = if a0 <= small && alc <= small {
        divisor_candidates(&a0, &alc)
    } else {
        hensel_candidates(&q, &a0, &alc)
    };
    for cand in candidates {
        if f.eval(&cand).is_zero() && !roots.contains(&cand) {
            roots.push(cand);
        }
    }
    roots.sort();
    Ok(roots)
}

/// ±(divisor of a0)/(divisor of alc), both enumerated by trial division.
fn divisor_candidates(a0: &BigInt, alc: &BigInt) -> Vec<Rat> {
    let dn = divisors_u64(a0);
    let dd = divisors_u64(alc);
    let mut out = Vec::new();
    for n in &dn {
        for d in &dd {
            let r = Rat::new(BigInt::from(*n), BigInt::from(*d));
            out.push(r.clone());
            out.push(-r);
        }
    }
    out
}

fn divisors_u64(n: &BigInt) -> Vec<u64> {
    let n = n.magnitude().to_u64_digits();
    let n = match n.len() {
        0 => return vec![],
        1 => n[0],
        _ => u64::MAX, // guarded by the caller's small-coefficient branch
    };
    let mut f = n;
    let mut primes: Vec<(u64, u32)> = Vec::new();
    let mut d = 2u64;
    while (d as u128) * (d as u128) <= f as u128 {
        if f % d == 0 {
            let mut e = 0;
            while f % d == 0 {
                f /= d;
                e += 1;
            }
            primes.push((d, e));
        }
        d += if d == 2 { 1 } else { 2 };
    }
    if f > 1 {
        primes.push((f, 1));
    }
    let mut divs = vec![1u64];
    for (p, e) in primes {
        let prev = divs.clone();
        let mut pk = 1u64;
        for _ in 0..e {
            pk = pk.saturating_mul(p);
            for v in &prev {
                divs.push(v.saturating_mul(pk));
            }
        }
    }
    divs.sort_unstable();
    divs.dedup();
    divs
}

/// Hensel route: lift the mod-p roots of the squarefree primitive `q` until
/// the modulus exceeds 2·a₀·alc, then rationally reconstruct n/d.
fn hensel_candidates(q: &ZPoly, a0: &BigInt, alc: &BigInt) -> Vec<Rat> {
    let target: BigInt = BigInt::from(2) * a0 * alc + 1;
    let qd = q.derivative();
    // choose p: degree preserved and q squarefree mod p
    let mut p = 101u64;
    let field = loop {
        p += 2;
        if !is_prime(p) {
            continue;
        }
        let field = Fp::new(p).unwrap();
        let qb = q.reduce_mod_p(field);
        if qb.degree() != q.degree() {
            continue;
        }
        if let Ok(g) = qb.gcd(&qb.derivative()) {
            if g.degree() == Some(0) {
                break field;
            }
        }
    };
    let p = field.modulus();
    let qb = q.reduce_mod_p(field);
    let mut out = Vec::new();
    for r0 in (0..p).filter(|&x| qb.eval(x) == 0) {
        // linear Hensel lifting of the simple root r0
        let mut modulus = BigInt::from(p);
        let mut r = BigInt::from(r0);
        while modulus < target {
            // t = −(q(r)/m) · q'(r)^{−1}  (mod p)
            let fr = q.eval(&r);
            let step = &fr / &modulus;
            let step_m = crate::exact::rat::bigint_mod_p(&step, p);
            let deriv_m = crate::exact::rat::bigint_mod_p(&qd.eval(&r), p);
            debug_assert!(deriv_m != 0, "root not simple during lifting");
            let t = field.mul(field.neg(step_m), field.inv(deriv_m));
            r += BigInt::from(t) * &modulus;
            modulus *= BigInt::from(p);
        }
        out.extend(reconstruct(&r, &modulus, a0, alc));
    }
    out
}

/// Rational reconstruction: n/d with |n| ≤ a0, 0 < d ≤ alc, n ≡ r·d (mod m).
fn reconstruct(r: &BigInt, m: &BigInt, a0: &BigInt, alc: &BigInt) -> Option<Rat> {
    let (mut r0, mut r1) = (m.clone(), r.clone());
    let (mut t0, mut t1) = (BigInt::zero(), BigInt::one());
    while &r1 > a0 {
        let quo = &r0 / &r1;
        let r2 = &r0 - &quo * &r1;
        let t2 = &t0 - &quo * &t1;
        r0 = std::mem::replace(&mut r1, r2);
        t0 = std::mem::replace(&mut t1, t2);
    }
    if t1.is_zero() || t1.abs() > *alc {
        return None;
    }
    let num = if t1.is_negative() { -r1 } else { r1 };
    let den = t1.abs();
    // Rat::new reduces; a spurious candidate is discarded by the exact
    // evaluation in the caller.
    Some(Rat::new(num, den))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat::rat;

    #[test]
    fn roots_mod_p_examples() {
        let f5 = Fp::new(5).unwrap();
        // x² − 1 mod 5 -> {1, 4}
        let f = FpPoly::new(f5, vec![4, 0, 1]);
        assert_eq!(roots_mod_p(&f).unwrap(), vec![1, 4]);
        // x² − 2 mod 5 -> {} (2 is a non-residue)
        let f = FpPoly::new(f5, vec![3, 0, 1]);
        assert!(roots_mod_p(&f).unwrap().is_empty());
        assert!(roots_mod_p(&FpPoly::zero(f5)).is_err());
    }

    #[test]
    fn rational_roots_examples() {
        // 2x² − 3x + 1 -> {1, 1/2}
        let f = RatPoly::from_i64(&[1, -3, 2]);
        assert_eq!(rational_roots(&f).unwrap(), vec![rat(1, 2), rat(1, 1)]);
        // x² + 1 -> {}
        let f = RatPoly::from_i64(&[1, 0, 1]);
        assert!(rational_roots(&f).unwrap().is_empty());
    }

    #[test]
    fn hensel_route_agrees_with_divisor_route() {
        // (3x − 2)(5x + 7)(x² + x + 1), exercised through both paths
        let f = RatPoly::from_i64(&[-2, 3])
            .mul(&RatPoly::from_i64(&[7, 5]))
            .mul(&RatPoly::from_i64(&[1, 1, 1]));
        let want = vec![rat(-7, 5), rat(2, 3)];
        assert_eq!(rational_roots(&f).unwrap(), want);
        let (prim, _) = f.to_primitive_z();
        let mut hens: Vec<Rat> = hensel_candidates(
            &prim,
            &prim.coeffs()[0].abs(),
            &prim.leading().unwrap().abs(),
        )
        .into_iter()
        .filter(|c| f.eval(c).is_zero())
        .collect();
        hens.sort();
        hens.dedup();
        assert_eq!(hens, want);
    }

    #[test]
    fn root_zero_and_multiplicity() {
        // x^2(x + 1)(2x − 6) has roots {0, −1, 3}
        let f = RatPoly::from_i64(&[0, 0, 1])
            .mul(&RatPoly::from_i64(&[1, 1]))
            .mul(&RatPoly::from_i64(&[-6, 2]));
        assert_eq!(
            rational_roots(&f).unwrap(),
            vec![rat(-1, 1), rat(0, 1), rat(3, 1)]
        );
    }
}
