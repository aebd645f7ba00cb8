//! Truncated Laurent series over ℚ with explicit precision bookkeeping.
//!
//! A series knows its coefficients exactly for exponents in `[lo, prec)` and
//! knows them to be zero below `lo`; nothing is claimed at `prec` or beyond.
//! Sums take the weaker precision, products propagate `min(a.prec + b.lo,
//! b.prec + a.lo)`, and inversion costs `2·lo` of absolute precision. The
//! q-expansions enter with 19 known coefficients ("+ O(q²⁰)") and every
//! verification in the crate asserts vanishing only below the propagated
//! bound.

use std::collections::BTreeMap;

use num_traits::Zero;

use super::multipoly::MultiPoly;
use super::rat::Rat;
use super::ExactError;

/// Sentinel for exactly-known (polynomial) series such as constants.
pub const PREC_EXACT: i64 = i64::MAX / 4;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TruncatedLaurent {
    lo: i64,
    prec: i64,
    coeffs: BTreeMap<i64, Rat>,
}

impl TruncatedLaurent {
    pub fn new(lo: i64, prec: i64, coeffs: BTreeMap<i64, Rat>) -> TruncatedLaurent {
        let mut s = TruncatedLaurent {
            lo,
            prec,
            coeffs: coeffs
                .into_iter()
                .filter(|(k, c)| *k >= lo && *k < prec && !c.is_zero())
                .collect(),
        };
        s.normalize();
        s
    }

    /// Advance `lo` past coefficients known to be zero.
    fn normalize(&mut self) {
        while self.lo < self.prec {
            match self.coeffs.get(&self.lo) {
                Some(c) if !c.is_zero() => break,
                _ => self.lo += 1,
            }
        }
    }

    /// Series from q-expansion coefficients for q¹..q^k known modulo q^prec.
    pub fn from_qexp(coeffs: &[i64], prec: i64) -> TruncatedLaurent {
        let map = coeffs
            .iter()
            .enumerate()
            .map(|(i, &c)| (i as i64 + 1, Rat::from_integer(c.into())))
            .collect();
        TruncatedLaurent::new(0, prec, map)
    }

    pub fn constant(c: Rat) -> TruncatedLaurent {
        let mut m = BTreeMap::new();
        if !c.is_zero() {
            m.insert(0, c);
        }
        TruncatedLaurent::new(0, PREC_EXACT, m)
    }

    pub fn lo(&self) -> i64 {
        self.lo
    }

    pub fn prec(&self) -> i64 {
        self.prec
    }

    pub fn coeff(&self, k: i64) -> Rat {
        self.coeffs.get(&k).cloned().unwrap_or_else(Rat::zero)
    }

    /// All known coefficients vanish.
    pub fn is_known_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Exponents of nonzero known coefficients.
    pub fn support(&self) -> impl Iterator<Item = i64> + '_ {
        self.coeffs.keys().copied()
    }

    pub fn add(&self, other: &TruncatedLaurent) -> TruncatedLaurent {
        let prec = self.prec.min(other.prec);
        let lo = self.lo.min(other.lo);
        let mut m = self.coeffs.clone();
        for (k, c) in &other.coeffs {
            let e = m.entry(*k).or_insert_with(Rat::zero);
            *e += c;
        }
        TruncatedLaurent::new(lo, prec, m)
    }

    pub fn neg(&self) -> TruncatedLaurent {
        TruncatedLaurent {
            lo: self.lo,
            prec: self.prec,
            coeffs: self.coeffs.iter().map(|(k, c)| (*k, -c.clone())).collect(),
        }
    }

    pub fn sub(&self, other: &TruncatedLaurent) -> TruncatedLaurent {
        self.add(&other.neg())
    }

    pub fn scale(&self, s: &Rat) -> TruncatedLaurent {
        if s.is_zero() {
            return TruncatedLaurent::new(self.lo, self.prec, BTreeMap::new());
        }
        TruncatedLaurent {
            lo: self.lo,
            prec: self.prec,
            coeffs: self.coeffs.iter().map(|(k, c)| (*k, c * s)).collect(),
        }
    }

    pub fn mul(&self, other: &TruncatedLaurent) -> TruncatedLaurent {
        let lo = self.lo.saturating_add(other.lo);
        let prec = (self.prec.saturating_add(other.lo)).min(other.prec.saturating_add(self.lo));
        let mut m: BTreeMap<i64, Rat> = BTreeMap::new();
        for (k1, c1) in &self.coeffs {
            for (k2, c2) in &other.coeffs {
                let k = k1 + k2;
                if k < prec {
                    let e = m.entry(k).or_insert_with(Rat::zero);
                    *e += c1 * c2;
                }
            }
        }
        TruncatedLaurent::new(lo, prec, m)
    }

    /// Multiplicative inverse; needs a nonzero known leading coefficient.
    pub fn inv(&self) -> Result<TruncatedLaurent, ExactError> {
        if self.lo >= self.prec || self.coeff(self.lo).is_zero() {
            return Err(ExactError::DegenerateInput(
                "cannot invert a series of unknown valuation",
            ));
        }
        let n = (self.prec - self.lo) as usize; // relative precision
        let a0 = self.coeff(self.lo);
        let u: Vec<Rat> = (0..n as i64).map(|j| self.coeff(self.lo + j)).collect();
        let mut inv = vec![Rat::zero(); n];
        inv[0] = Rat::from_integer(1.into()) / a0.clone();
        for j in 1..n {
            let mut s = Rat::zero();
            for t in 1..=j {
                s += &u[t] * &inv[j - t];
            }
            inv[j] = -s / a0.clone();
        }
        let lo = -self.lo;
        let m = inv
            .into_iter()
            .enumerate()
            .map(|(j, c)| (lo + j as i64, c))
            .collect();
        Ok(TruncatedLaurent::new(lo, lo + n as i64, m))
    }

    pub fn div(&self, other: &TruncatedLaurent) -> Result<TruncatedLaurent, ExactError> {
        Ok(self.mul(&other.inv()?))
    }

    pub fn pow(&self, e: usize) -> TruncatedLaurent {
        if e == 0 {
            return TruncatedLaurent::constant(Rat::from_integer(1.into()));
        }
        let mut acc = self.clone();
        for _ in 1..e {
            acc = acc.mul(self);
        }
        acc
    }
}

/// Evaluate a sparse multivariate polynomial on series values, with a power
/// cache per variable. Returns the accumulated series (precision propagated).
pub fn eval_multipoly_series(poly: &MultiPoly, vals: &[TruncatedLaurent]) -> TruncatedLaurent {
    let mut cache: Vec<Vec<TruncatedLaurent>> = vals.iter().map(|v| vec![v.clone()]).collect();
    let power = |i: usize, e: usize, cache: &mut Vec<Vec<TruncatedLaurent>>| {
        while cache[i].len() < e {
            let next = cache[i].last().unwrap().mul(&vals[i]);
            cache[i].push(next);
        }
        cache[i][e - 1].clone()
    };
    let mut acc: Option<TruncatedLaurent> = None;
    for (mono, c) in poly.terms() {
        let mut term: Option<TruncatedLaurent> = None;
        for (i, &e) in mono.iter().enumerate() {
            if e == 0 {
                continue;
            }
            let p = power(i, e as usize, &mut cache);
            term = Some(match term {
                None => p,
                Some(t) => t.mul(&p),
            });
        }
        let term = match term {
            None => TruncatedLaurent::constant(c.clone()),
            Some(t) => t.scale(c),
        };
        acc = Some(match acc {
            None => term,
            Some(a) => a.add(&term),
        });
    }
    acc.unwrap_or_else(|| TruncatedLaurent::constant(Rat::zero()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat::rat;

    fn qpow(k: i64) -> TruncatedLaurent {
        let mut m = BTreeMap::new();
        m.insert(k, rat(1, 1));
        TruncatedLaurent::new(k, 20, m)
    }

    #[test]
    fn division_precision() {
        // (q^3 + ...known to 20) / (q^3 + ...known to 20): valuation 0, prec 17
        let a = qpow(3);
        let b = qpow(3).add(&qpow(5));
        let q = a.div(&b).unwrap();
        assert_eq!(q.lo(), 0);
        assert_eq!(q.prec(), 17);
        assert_eq!(q.coeff(0), rat(1, 1));
        assert_eq!(q.coeff(2), rat(-1, 1));
        assert_eq!(q.coeff(4), rat(1, 1));
    }

    #[test]
    fn mul_precision_rule() {
        let a = qpow(2); // [2, 20)
        let b = qpow(5); // [5, 20)
        let c = a.mul(&b);
        assert_eq!(c.lo(), 7);
        assert_eq!(c.prec(), 22);
    }

    #[test]
    fn inverse_roundtrip() {
        let s = qpow(1).add(&qpow(2).scale(&rat(3, 2)));
        let inv = s.inv().unwrap();
        let prod = s.mul(&inv);
        assert_eq!(prod.coeff(0), rat(1, 1));
        assert!(prod.support().all(|k| k == 0));
    }
}
