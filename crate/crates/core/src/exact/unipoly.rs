//! Dense univariate polynomials over ℚ and over ℤ.
//!
//! `RatPoly` is the fixture-facing type (exact rational coefficients, lowest
//! degree first, nonzero leading coefficient unless zero). The integer variant
//! `ZPoly` backs the pseudo-remainder machinery: gcds over ℚ are computed on
//! primitive integer forms, which keeps coefficient growth under control on
//! the large discriminants that show up downstream.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::fp::{Fp, FpPoly};
use super::rat::{bigint_mod_p, Rat};
use super::ExactError;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RatPoly {
    coeffs: Vec<Rat>,
}

impl RatPoly {
    pub fn new(mut coeffs: Vec<Rat>) -> RatPoly {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        RatPoly { coeffs }
    }

    pub fn zero() -> RatPoly {
        RatPoly { coeffs: vec![] }
    }

    pub fn one() -> RatPoly {
        RatPoly::constant(Rat::one())
    }

    pub fn constant(c: Rat) -> RatPoly {
        RatPoly::new(vec![c])
    }

    /// Monomial c·xᵏ.
    pub fn monomial(c: Rat, k: usize) -> RatPoly {
        let mut v = vec![Rat::zero(); k + 1];
        v[k] = c;
        RatPoly::new(v)
    }

    pub fn from_i64(coeffs: &[i64]) -> RatPoly {
        RatPoly::new(
            coeffs
                .iter()
                .map(|&c| Rat::from_integer(c.into()))
                .collect(),
        )
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        if self.coeffs.is_empty() {
            None
        } else {
            Some(self.coeffs.len() - 1)
        }
    }

    pub fn coeffs(&self) -> &[Rat] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> Rat {
        self.coeffs.get(k).cloned().unwrap_or_else(Rat::zero)
    }

    pub fn leading(&self) -> Option<&Rat> {
        self.coeffs.last()
    }

    pub fn add(&self, other: &RatPoly) -> RatPoly {
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut c = Vec::with_capacity(n);
        for i in 0..n {
            let mut v = Rat::zero();
            if let Some(a) = self.coeffs.get(i) {
                v += a;
            }
            if let Some(b) = other.coeffs.get(i) {
                v += b;
            }
            c.push(v);
        }
        RatPoly::new(c)
    }

    pub fn neg(&self) -> RatPoly {
        RatPoly::new(self.coeffs.iter().map(|c| -c.clone()).collect())
    }

    pub fn sub(&self, other: &RatPoly) -> RatPoly {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &RatPoly) -> RatPoly {
        if self.is_zero() || other.is_zero() {
            return RatPoly::zero();
        }
        let mut c = vec![Rat::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                c[i + j] += a * b;
            }
        }
        RatPoly::new(c)
    }

    pub fn scale(&self, s: &Rat) -> RatPoly {
        RatPoly::new(self.coeffs.iter().map(|c| c * s).collect())
    }

    pub fn pow(&self, e: usize) -> RatPoly {
        let mut acc = RatPoly::one();
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// Euclidean division by a nonzero divisor.
    pub fn div_rem(&self, div: &RatPoly) -> (RatPoly, RatPoly) {
        assert!(!div.is_zero(), "division by zero polynomial");
        let dl = div.coeffs.len();
        if self.coeffs.len() < dl {
            return (RatPoly::zero(), self.clone());
        }
        let mut rem = self.coeffs.clone();
        let mut quo = vec![Rat::zero(); rem.len() - dl + 1];
        let lc = div.coeffs.last().unwrap();
        for i in (0..quo.len()).rev() {
            let c = &rem[i + dl - 1] / lc;
            if !c.is_zero() {
                for (j, dj) in div.coeffs.iter().enumerate() {
                    let t = &c * dj;
                    rem[i + j] -= t;
                }
            }
            quo[i] = c;
        }
        (RatPoly::new(quo), RatPoly::new(rem))
    }

    pub fn derivative(&self) -> RatPoly {
        if self.coeffs.len() <= 1 {
            return RatPoly::zero();
        }
        RatPoly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c * Rat::from_integer(BigInt::from(k)))
                .collect(),
        )
    }

    pub fn monic(&self) -> RatPoly {
        match self.leading() {
            None => self.clone(),
            Some(lc) => {
                let inv = Rat::one() / lc.clone();
                self.scale(&inv)
            }
        }
    }

    pub fn eval(&self, x: &Rat) -> Rat {
        let mut acc = Rat::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x.clone() + c.clone();
        }
        acc
    }

    pub fn eval_bigint(&self, x: &BigInt) -> Rat {
        self.eval(&Rat::from_integer(x.clone()))
    }

    /// Clears denominators and content: returns `(P, s)` with `self = s · P`,
    /// `P` a primitive integer polynomial with positive leading coefficient.
    pub fn to_primitive_z(&self) -> (ZPoly, Rat) {
        if self.is_zero() {
            return (ZPoly::zero(), Rat::one());
        }
        let mut den = BigInt::one();
        for c in &self.coeffs {
            den = den.lcm(c.denom());
        }
        let ints: Vec<BigInt> = self
            .coeffs
            .iter()
            .map(|c| c.numer() * (&den / c.denom()))
            .collect();
        let z = ZPoly::new(ints);
        let (prim, content) = z.primitive();
        let s = Rat::new(content, den);
        (prim, s)
    }

    /// Monic gcd over ℚ via the primitive pseudo-remainder sequence over ℤ;
    /// gcd(0,0) = 0, gcd(f,0) = monic f.
    pub fn gcd_monic(&self, other: &RatPoly) -> RatPoly {
        if self.is_zero() {
            return other.monic();
        }
        if other.is_zero() {
            return self.monic();
        }
        let (a, _) = self.to_primitive_z();
        let (b, _) = other.to_primitive_z();
        let g = a.gcd_primitive(&b);
        g.to_rat_poly().monic()
    }

    /// f / gcd(f, f′), normalized monic.
    pub fn squarefree_part(&self) -> Result<RatPoly, ExactError> {
        if self.is_zero() {
            return Err(ExactError::DegenerateInput("squarefree part of 0"));
        }
        let g = self.gcd_monic(&self.derivative());
        let (q, r) = self.div_rem(&g);
        debug_assert!(r.is_zero(), "gcd does not divide its argument");
        Ok(q.monic())
    }

    /// Coefficient-wise reduction mod p; fails on non-p-integral coefficients.
    pub fn reduce_mod_p(&self, field: Fp) -> Result<FpPoly, ExactError> {
        let p = field.modulus();
        let mut c = Vec::with_capacity(self.coeffs.len());
        for q in &self.coeffs {
            c.push(super::rat::reduce_rat_mod_p(q, p)?);
        }
        Ok(FpPoly::new(field, c))
    }
}

/// Dense integer polynomial, lowest degree first.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ZPoly {
    coeffs: Vec<BigInt>,
}

impl ZPoly {
    pub fn new(mut coeffs: Vec<BigInt>) -> ZPoly {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        ZPoly { coeffs }
    }

    pub fn zero() -> ZPoly {
        ZPoly { coeffs: vec![] }
    }

    pub fn one() -> ZPoly {
        ZPoly::new(vec![BigInt::one()])
    }

    pub fn from_i64(coeffs: &[i64]) -> ZPoly {
        ZPoly::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        if self.coeffs.is_empty() {
            None
        } else {
            Some(self.coeffs.len() - 1)
        }
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn leading(&self) -> Option<&BigInt> {
        self.coeffs.last()
    }

    pub fn to_rat_poly(&self) -> RatPoly {
        RatPoly::new(
            self.coeffs
                .iter()
                .map(|c| Rat::from_integer(c.clone()))
                .collect(),
        )
    }

    pub fn add(&self, other: &ZPoly) -> ZPoly {
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut c = Vec::with_capacity(n);
        for i in 0..n {
            let mut v = BigInt::zero();
            if let Some(a) = self.coeffs.get(i) {
                v += a;
            }
            if let Some(b) = other.coeffs.get(i) {
                v += b;
            }
            c.push(v);
        }
        ZPoly::new(c)
    }

    pub fn neg(&self) -> ZPoly {
        ZPoly::new(self.coeffs.iter().map(|c| -c).collect())
    }

    pub fn mul(&self, other: &ZPoly) -> ZPoly {
        if self.is_zero() || other.is_zero() {
            return ZPoly::zero();
        }
        let mut c = vec![BigInt::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                c[i + j] += a * b;
            }
        }
        ZPoly::new(c)
    }

    pub fn scale(&self, s: &BigInt) -> ZPoly {
        ZPoly::new(self.coeffs.iter().map(|c| c * s).collect())
    }

    /// Exact division by a scalar (panics if not exact).
    pub fn exact_div_scalar(&self, s: &BigInt) -> ZPoly {
        ZPoly::new(
            self.coeffs
                .iter()
                .map(|c| {
                    let (q, r) = c.div_rem(s);
                    debug_assert!(r.is_zero(), "inexact scalar division");
                    q
                })
                .collect(),
        )
    }

    /// Content (gcd of coefficients, nonnegative).
    pub fn content(&self) -> BigInt {
        let mut g = BigInt::zero();
        for c in &self.coeffs {
            g = g.gcd(c);
        }
        g
    }

    /// (primitive part with positive leading coefficient, signed content).
    pub fn primitive(&self) -> (ZPoly, BigInt) {
        if self.is_zero() {
            return (ZPoly::zero(), BigInt::zero());
        }
        let mut c = self.content();
        if self.leading().unwrap().is_negative() {
            c = -c;
        }
        (self.exact_div_scalar(&c), c)
    }

    /// Pseudo-remainder: lc(b)^(deg a - deg b + 1) · a  mod  b.
    pub fn pseudo_rem(&self, b: &ZPoly) -> ZPoly {
        assert!(!b.is_zero());
        let db = b.degree().unwrap();
        let lc = b.leading().unwrap().clone();
        let mut r = self.clone();
        while let Some(dr) = r.degree() {
            if dr < db {
                break;
            }
            let shift = dr - db;
            let rl = r.leading().unwrap().clone();
            // r = lc·r − rl·x^shift·b
            let mut c = vec![BigInt::zero(); dr + 1];
            for (i, ci) in r.coeffs.iter().enumerate() {
                c[i] = ci * &lc;
            }
            for (j, bj) in b.coeffs.iter().enumerate() {
                c[j + shift] -= bj * &rl;
            }
            r = ZPoly::new(c);
        }
        r
    }

    /// Gcd of primitive polynomials via the primitive PRS; result primitive
    /// with positive leading coefficient.
    pub fn gcd_primitive(&self, other: &ZPoly) -> ZPoly {
        let (mut a, _) = self.primitive();
        let (mut b, _) = other.primitive();
        if a.is_zero() {
            return b;
        }
        if b.is_zero() {
            return a;
        }
        if a.degree() < b.degree() {
            std::mem::swap(&mut a, &mut b);
        }
        while !b.is_zero() {
            let r = a.pseudo_rem(&b);
            let (rp, _) = r.primitive();
            a = b;
            b = rp;
        }
        a.primitive().0
    }

    pub fn derivative(&self) -> ZPoly {
        if self.coeffs.len() <= 1 {
            return ZPoly::zero();
        }
        ZPoly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c * BigInt::from(k))
                .collect(),
        )
    }

    pub fn eval(&self, x: &BigInt) -> BigInt {
        let mut acc = BigInt::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    pub fn reduce_mod_p(&self, field: Fp) -> FpPoly {
        FpPoly::new(
            field,
            self.coeffs
                .iter()
                .map(|c| bigint_mod_p(c, field.modulus()))
                .collect(),
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat::rat;

    #[test]
    fn gcd_examples() {
        // gcd(x^2 - 1, x - 1) = x - 1
        let a = RatPoly::from_i64(&[-1, 0, 1]);
        let b = RatPoly::from_i64(&[-1, 1]);
        assert_eq!(a.gcd_monic(&b), RatPoly::from_i64(&[-1, 1]));
        // gcd(f, 0) = monic f
        let f = RatPoly::from_i64(&[2, 4]);
        assert_eq!(
            f.gcd_monic(&RatPoly::zero()),
            RatPoly::new(vec![rat(1, 2), rat(1, 1)])
        );
        // gcd(0, 0) = 0
        assert!(RatPoly::zero().gcd_monic(&RatPoly::zero()).is_zero());
    }

    #[test]
    fn squarefree_examples() {
        // x^2(x+1) -> x(x+1)
        let f = RatPoly::from_i64(&[0, 0, 1, 1]);
        assert_eq!(f.squarefree_part().unwrap(), RatPoly::from_i64(&[0, 1, 1]));
        // x^3 -> x
        let f = RatPoly::from_i64(&[0, 0, 0, 1]);
        assert_eq!(f.squarefree_part().unwrap(), RatPoly::from_i64(&[0, 1]));
        // (x-1)^3 (x^2+1) -> (x-1)(x^2+1)
        let f = RatPoly::from_i64(&[-1, 1])
            .pow(3)
            .mul(&RatPoly::from_i64(&[1, 0, 1]));
        let want = RatPoly::from_i64(&[-1, 1]).mul(&RatPoly::from_i64(&[1, 0, 1]));
        assert_eq!(f.squarefree_part().unwrap(), want.monic());
        assert!(RatPoly::zero().squarefree_part().is_err());
    }

    #[test]
    fn reduce_mod_p_examples() {
        let f = Fp::new(5).unwrap();
        // (1/2)x + 3 mod 5 = 3x + 3
        let p = RatPoly::new(vec![rat(3, 1), rat(1, 2)]);
        let r = p.reduce_mod_p(f).unwrap();
        assert_eq!(r.coeffs(), &[3, 3]);
        // denominator divisible by p
        let bad = RatPoly::new(vec![rat(1, 5)]);
        assert!(bad.reduce_mod_p(f).is_err());
    }
}
