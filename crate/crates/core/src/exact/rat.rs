//! Exact rationals.
//!
//! `Rat` is `num_rational::BigRational`: always stored in lowest terms with a
//! positive denominator, which is exactly the representation invariant the
//! rest of the crate relies on.

use num_bigint::{BigInt, Sign};
use num_traits::Zero;

pub type Rat = num_rational::BigRational;

/// `n/d` as a `Rat`. Panics if `d == 0`.
pub fn rat(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

pub fn rat_int(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

/// True iff the denominator of `r` is coprime to `p`.
pub fn is_p_integral(r: &Rat, p: u64) -> bool {
    !(r.denom() % BigInt::from(p)).is_zero()
}

/// Residue of a p-integral rational in `[0, p)`.
pub fn reduce_rat_mod_p(r: &Rat, p: u64) -> Result<u64, super::ExactError> {
    let pb = BigInt::from(p);
    let den = r.denom() % &pb;
    if den.is_zero() {
        return Err(super::ExactError::NotPIntegral { p });
    }
    let num = ((r.numer() % &pb) + &pb) % &pb;
    let den = ((den + &pb) % &pb).to_u64_digits().1;
    let d = if den.is_empty() { 0 } else { den[0] };
    let n = num.to_u64_digits().1;
    let n = if n.is_empty() { 0 } else { n[0] };
    Ok(mul_mod(n, inv_mod(d, p), p))
}

/// Modular inverse for 0 < a < p, p prime.
pub fn inv_mod(a: u64, p: u64) -> u64 {
    // extended Euclid on i128 to dodge overflow
    let (mut t, mut new_t) = (0i128, 1i128);
    let (mut r, mut new_r) = (p as i128, a as i128);
    while new_r != 0 {
        let q = r / new_r;
        (t, new_t) = (new_t, t - q * new_t);
        (r, new_r) = (new_r, r - q * new_r);
    }
    debug_assert_eq!(r, 1, "inverse of non-unit {a} mod {p}");
    (((t % p as i128) + p as i128) % p as i128) as u64
}

pub fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

/// Sign-aware conversion of a `BigInt` residue into `[0, p)`.
pub fn bigint_mod_p(n: &BigInt, p: u64) -> u64 {
    let m = n % BigInt::from(p);
    let m = if m.sign() == Sign::Minus {
        m + BigInt::from(p)
    } else {
        m
    };
    let digits = m.to_u64_digits().1;
    if digits.is_empty() {
        0
    } else {
        digits[0]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lowest_terms_invariant() {
        let r = rat(6, -4);
        assert_eq!(r, rat(-3, 2));
        assert!(r.denom() > &BigInt::zero());
    }

    #[test]
    fn reduction_mod_p() {
        // 1/2 = 3 mod 5
        assert_eq!(reduce_rat_mod_p(&rat(1, 2), 5).unwrap(), 3);
        assert_eq!(reduce_rat_mod_p(&rat(-1, 3), 7).unwrap(), 2);
        assert!(reduce_rat_mod_p(&rat(1, 10), 5).is_err());
    }
}
