//! Prime fields 𝔽ₚ and dense polynomials over them.
//!
//! The field is a small context object (`Fp`) holding the modulus; primality
//! is checked once per field construction. Elements are plain `u64` residues
//! in `[0, p)`, which keeps the 𝔽ₚ sweeps cheap.

use super::ExactError;
use crate::exact::rat::{inv_mod, mul_mod};

/// A prime field 𝔽ₚ.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Fp {
    p: u64,
}

impl Fp {
    pub fn new(p: u64) -> Result<Fp, ExactError> {
        if !is_prime(p) {
            return Err(ExactError::NotPrime(p));
        }
        Ok(Fp { p })
    }

    #[inline]
    pub fn modulus(&self) -> u64 {
        self.p
    }

    #[inline]
    pub fn add(&self, a: u64, b: u64) -> u64 {
        let s = a + b;
        if s >= self.p {
            s - self.p
        } else {
            s
        }
    }

    #[inline]
    pub fn sub(&self, a: u64, b: u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.p - b
        }
    }

    #[inline]
    pub fn neg(&self, a: u64) -> u64 {
        if a == 0 {
            0
        } else {
            self.p - a
        }
    }

    #[inline]
    pub fn mul(&self, a: u64, b: u64) -> u64 {
        mul_mod(a, b, self.p)
    }

    /// Multiplicative inverse; panics on 0.
    #[inline]
    pub fn inv(&self, a: u64) -> u64 {
        assert!(
            !a.is_multiple_of(self.p),
            "division by zero in F_{}",
            self.p
        );
        inv_mod(a % self.p, self.p)
    }

    pub fn from_i64(&self, n: i64) -> u64 {
        let m = n.rem_euclid(self.p as i64);
        m as u64
    }

    pub fn pow(&self, mut a: u64, mut e: u64) -> u64 {
        let mut acc = 1;
        a %= self.p;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, a);
            }
            a = self.mul(a, a);
            e >>= 1;
        }
        acc
    }
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for q in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n == q {
            return true;
        }
        if n.is_multiple_of(q) {
            return false;
        }
    }
    let mut d = 41u64;
    while d.saturating_mul(d) <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

/// Dense polynomial over 𝔽ₚ, lowest degree first, no trailing zeros.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FpPoly {
    pub field: Fp,
    coeffs: Vec<u64>,
}

impl FpPoly {
    pub fn new(field: Fp, mut coeffs: Vec<u64>) -> FpPoly {
        for c in &mut coeffs {
            *c %= field.modulus();
        }
        let mut out = FpPoly { field, coeffs };
        out.trim();
        out
    }

    pub fn zero(field: Fp) -> FpPoly {
        FpPoly {
            field,
            coeffs: vec![],
        }
    }

    fn trim(&mut self) {
        while self.coeffs.last() == Some(&0) {
            self.coeffs.pop();
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, or `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        if self.coeffs.is_empty() {
            None
        } else {
            Some(self.coeffs.len() - 1)
        }
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    pub fn leading(&self) -> Option<u64> {
        self.coeffs.last().copied()
    }

    fn check(&self, other: &FpPoly) -> Result<(), ExactError> {
        if self.field.modulus() != other.field.modulus() {
            return Err(ExactError::DomainMismatch(
                self.field.modulus(),
                other.field.modulus(),
            ));
        }
        Ok(())
    }

    pub fn add(&self, other: &FpPoly) -> Result<FpPoly, ExactError> {
        self.check(other)?;
        let f = self.field;
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut c = vec![0; n];
        for (i, ci) in c.iter_mut().enumerate() {
            let a = self.coeffs.get(i).copied().unwrap_or(0);
            let b = other.coeffs.get(i).copied().unwrap_or(0);
            *ci = f.add(a, b);
        }
        Ok(FpPoly::new(f, c))
    }

    pub fn mul(&self, other: &FpPoly) -> Result<FpPoly, ExactError> {
        self.check(other)?;
        let f = self.field;
        if self.is_zero() || other.is_zero() {
            return Ok(FpPoly::zero(f));
        }
        let mut c = vec![0u64; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate() {
                c[i + j] = f.add(c[i + j], f.mul(a, b));
            }
        }
        Ok(FpPoly::new(f, c))
    }

    pub fn scale(&self, s: u64) -> FpPoly {
        let f = self.field;
        FpPoly::new(f, self.coeffs.iter().map(|&c| f.mul(c, s)).collect())
    }

    /// Euclidean division; divisor must be nonzero.
    pub fn div_rem(&self, div: &FpPoly) -> Result<(FpPoly, FpPoly), ExactError> {
        self.check(div)?;
        let f = self.field;
        assert!(!div.is_zero(), "division by zero polynomial");
        let mut rem = self.coeffs.clone();
        let dl = div.coeffs.len();
        if rem.len() < dl {
            return Ok((FpPoly::zero(f), self.clone()));
        }
        let mut quo = vec![0u64; rem.len() - dl + 1];
        let lc_inv = f.inv(*div.coeffs.last().unwrap());
        for i in (0..quo.len()).rev() {
            let c = f.mul(rem[i + dl - 1], lc_inv);
            quo[i] = c;
            if c != 0 {
                for (j, &dj) in div.coeffs.iter().enumerate() {
                    rem[i + j] = f.sub(rem[i + j], f.mul(c, dj));
                }
            }
        }
        Ok((FpPoly::new(f, quo), FpPoly::new(f, rem)))
    }

    pub fn derivative(&self) -> FpPoly {
        let f = self.field;
        if self.coeffs.len() <= 1 {
            return FpPoly::zero(f);
        }
        let c = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(k, &ck)| f.mul(ck, (k as u64) % f.modulus()))
            .collect();
        FpPoly::new(f, c)
    }

    pub fn monic(&self) -> FpPoly {
        match self.leading() {
            None => self.clone(),
            Some(lc) => self.scale(self.field.inv(lc)),
        }
    }

    /// Monic gcd; gcd(0,0) = 0.
    pub fn gcd(&self, other: &FpPoly) -> Result<FpPoly, ExactError> {
        self.check(other)?;
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b)?;
            a = b;
            b = r;
        }
        Ok(a.monic())
    }

    /// f / gcd(f, f'), made monic. Requires p > deg f so the derivative
    /// cannot collapse.
    pub fn squarefree_part(&self) -> Result<FpPoly, ExactError> {
        if self.is_zero() {
            return Err(ExactError::DegenerateInput("squarefree part of 0"));
        }
        let g = self.gcd(&self.derivative())?;
        let (q, r) = self.div_rem(&g)?;
        debug_assert!(r.is_zero());
        Ok(q.monic())
    }

    pub fn eval(&self, x: u64) -> u64 {
        let f = self.field;
        let mut acc = 0u64;
        for &c in self.coeffs.iter().rev() {
            acc = f.add(f.mul(acc, x), c);
        }
        acc
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn poly(p: u64, c: &[i64]) -> FpPoly {
        let f = Fp::new(p).unwrap();
        FpPoly::new(f, c.iter().map(|&x| f.from_i64(x)).collect())
    }

    #[test]
    fn modulus_must_be_prime() {
        assert!(Fp::new(1).is_err());
        assert!(Fp::new(15).is_err());
        assert!(Fp::new(31).is_ok());
    }

    #[test]
    fn gcd_domain_mismatch() {
        let a = poly(5, &[1, 1]);
        let b = poly(7, &[1, 1]);
        assert!(matches!(a.gcd(&b), Err(ExactError::DomainMismatch(5, 7))));
    }

    #[test]
    fn gcd_shared_root() {
        // gcd(x^2-1, x-1) = x-1 over F_7
        let a = poly(7, &[-1, 0, 1]);
        let b = poly(7, &[-1, 1]);
        assert_eq!(a.gcd(&b).unwrap(), poly(7, &[-1, 1]).monic());
    }

    #[test]
    fn squarefree_strips_multiplicity() {
        // x^2(x+1) -> x(x+1)
        let f = poly(11, &[0, 0, 1, 1]);
        let sf = f.squarefree_part().unwrap();
        assert_eq!(sf, poly(11, &[0, 1, 1]));
    }
}
