//! Bounded-height rational point search.
//!
//! Enumerates primitive integer coordinate vectors with ℓ∞ norm ≤ H, first
//! nonzero coordinate positive, testing every equation exactly. A two-prime
//! modular sieve rejects almost all candidates before any exact arithmetic
//! happens (a rational zero of integer equations reduces to a zero mod every
//! prime, so the sieve is lossless).

use num_traits::{One, ToPrimitive, Zero};
use rayon::prelude::*;

use super::PointsError;
use crate::modeldb::CanonicalModel;

const SIEVE_PRIMES: [u64; 2] = [101, 103];

/// Equation with integer coefficients, for exact i128 evaluation.
struct IntEq {
    terms: Vec<(i128, Vec<u8>)>,
}

impl IntEq {
    fn eval(&self, x: &[i64]) -> i128 {
        let mut acc: i128 = 0;
        for (c, vars) in &self.terms {
            let mut t = *c;
            for &v in vars {
                t *= x[v as usize] as i128;
            }
            acc += t;
        }
        acc
    }
}

struct SieveEq {
    p: u64,
    terms: Vec<(u64, Vec<u8>)>,
}

impl SieveEq {
    #[inline]
    fn eval(&self, x: &[u64]) -> u64 {
        let mut acc: u64 = 0;
        for (c, vars) in &self.terms {
            let mut t = *c;
            for &v in vars {
                t = t * x[v as usize] % self.p;
            }
            acc += t;
        }
        acc % self.p
    }
}

fn int_equations(model: &CanonicalModel) -> Result<Vec<IntEq>, PointsError> {
    model
        .equations
        .iter()
        .map(|eq| {
            let mut terms = Vec::new();
            for (mono, c) in eq.terms() {
                if !c.denom().is_one() {
                    return Err(PointsError::BadModel(
                        "canonical equation with non-integer coefficient".into(),
                    ));
                }
                let ci = c
                    .numer()
                    .to_i128()
                    .ok_or_else(|| PointsError::BadModel("coefficient exceeds i128".into()))?;
                let mut vars = Vec::new();
                for (i, &e) in mono.iter().enumerate() {
                    for _ in 0..e {
                        vars.push(i as u8);
                    }
                }
                terms.push((ci, vars));
            }
            Ok(IntEq { terms })
        })
        .collect()
}

fn sieve_equation(eq: &IntEq, p: u64) -> SieveEq {
    SieveEq {
        p,
        terms: eq
            .terms
            .iter()
            .map(|(c, vars)| ((c.rem_euclid(p as i128)) as u64, vars.clone()))
            .collect(),
    }
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// All rational points of height ≤ H (ℓ∞ norm of the primitive integer
/// coordinates), in normalized form.
pub fn search_rational_points(model: &CanonicalModel, height: u64) -> Vec<Vec<i64>> {
    let eqs = int_equations(model).expect("integral canonical equations");
    let sieves: Vec<Vec<SieveEq>> = SIEVE_PRIMES
        .iter()
        .map(|&p| eqs.iter().map(|e| sieve_equation(e, p)).collect())
        .collect();
    let g = model.genus;
    let h = height as i64;
    let mut found: Vec<Vec<i64>> = Vec::new();
    for lead in 0..g {
        let nfree = g - 1 - lead;
        let mut chunk: Vec<Vec<Vec<i64>>> = (1..=h)
            .into_par_iter()
            .map(|leadval| {
                let mut out = Vec::new();
                let mut x = vec![0i64; g];
                x[lead] = leadval;
                if nfree == 0 {
                    if check_point(&x, &eqs, &sieves) {
                        out.push(x.clone());
                    }
                    return out;
                }
                let mut odo = vec![-h; nfree];
                loop {
                    for (i, &o) in odo.iter().enumerate() {
                        x[lead + 1 + i] = o;
                    }
                    if check_point(&x, &eqs, &sieves) {
                        out.push(x.clone());
                    }
                    let mut i = nfree;
                    loop {
                        if i == 0 {
                            return out;
                        }
                        i -= 1;
                        odo[i] += 1;
                        if odo[i] <= h {
                            break;
                        }
                        odo[i] = -h;
                    }
                }
            })
            .collect();
        for c in chunk.drain(..) {
            found.extend(c);
        }
    }
    // keep primitive representatives only
    found.retain(|x| {
        let mut g0 = 0u64;
        for &c in x {
            g0 = gcd(g0, c.unsigned_abs());
        }
        g0 == 1
    });
    found
}

#[inline]
fn check_point(x: &[i64], eqs: &[IntEq], sieves: &[Vec<SieveEq>]) -> bool {
    // two-prime sieve on the first equation, then the rest
    for per_prime in sieves {
        let p = per_prime[0].p;
        let xm: Vec<u64> = x.iter().map(|&c| c.rem_euclid(p as i64) as u64).collect();
        if per_prime.iter().any(|e| e.eval(&xm) != 0) {
            return false;
        }
    }
    eqs.iter().all(|e| e.eval(x).is_zero())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::modeldb::{fixture_dir, load_level};
    use std::collections::BTreeSet;

    fn normalize(mut v: Vec<i64>) -> Vec<i64> {
        if let Some(first) = v.iter().find(|&&c| c != 0) {
            if *first < 0 {
                for c in &mut v {
                    *c = -*c;
                }
            }
        }
        v
    }

    #[test]
    fn recovers_199_points_at_height_5() {
        let m = load_level(&fixture_dir(), 199).unwrap();
        let got: BTreeSet<_> = search_rational_points(&m, 5).into_iter().collect();
        let want: BTreeSet<_> = m
            .known_points
            .iter()
            .map(|p| normalize(p.coords.clone()))
            .collect();
        assert_eq!(got, want);
        assert_eq!(got.len(), 8);
    }
}
