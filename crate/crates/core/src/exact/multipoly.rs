//! Sparse multivariate polynomials.
//!
//! Terms are stored as a map from exponent vectors to nonzero rational
//! coefficients. The canonical-model equations have at most a few dozen
//! terms, so sparse is the right shape; mod-p evaluation compiles down to
//! `MultiPolyFp` with residue coefficients.

use std::collections::BTreeMap;

use num_traits::Zero;

use super::fp::Fp;
use super::rat::{reduce_rat_mod_p, Rat};
use super::unipoly::RatPoly;
use super::ExactError;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MultiPoly {
    vars: Vec<String>,
    terms: BTreeMap<Vec<u16>, Rat>,
}

impl MultiPoly {
    pub fn from_terms(
        vars: Vec<String>,
        terms: Vec<(Vec<u16>, Rat)>,
    ) -> Result<MultiPoly, ExactError> {
        let arity = vars.len();
        let mut map = BTreeMap::new();
        for (mono, c) in terms {
            if mono.len() != arity {
                return Err(ExactError::DegenerateInput(
                    "exponent vector arity mismatch",
                ));
            }
            if c.is_zero() {
                continue;
            }
            let entry = map.entry(mono).or_insert_with(Rat::zero);
            *entry += c;
        }
        map.retain(|_, c: &mut Rat| !c.is_zero());
        Ok(MultiPoly { vars, terms: map })
    }

    pub fn zero(vars: Vec<String>) -> MultiPoly {
        MultiPoly {
            vars,
            terms: BTreeMap::new(),
        }
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn nvars(&self) -> usize {
        self.vars.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u16>, &Rat)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn total_degree(&self) -> usize {
        self.terms
            .keys()
            .map(|m| m.iter().map(|&e| e as usize).sum())
            .max()
            .unwrap_or(0)
    }

    /// Degree in variable `i`.
    pub fn degree_in(&self, i: usize) -> usize {
        self.terms.keys().map(|m| m[i] as usize).max().unwrap_or(0)
    }

    /// `Some(d)` if every term has total degree d.
    pub fn homogeneous_degree(&self) -> Option<usize> {
        let mut it = self
            .terms
            .keys()
            .map(|m| m.iter().map(|&e| e as usize).sum());
        let d = it.next()?;
        it.all(|e| e == d).then_some(d)
    }

    pub fn add(&self, other: &MultiPoly) -> MultiPoly {
        let mut terms = self.terms.clone();
        for (m, c) in &other.terms {
            let e = terms.entry(m.clone()).or_insert_with(Rat::zero);
            *e += c;
        }
        terms.retain(|_, c| !c.is_zero());
        MultiPoly {
            vars: self.vars.clone(),
            terms,
        }
    }

    pub fn scale(&self, s: &Rat) -> MultiPoly {
        if s.is_zero() {
            return MultiPoly::zero(self.vars.clone());
        }
        MultiPoly {
            vars: self.vars.clone(),
            terms: self.terms.iter().map(|(m, c)| (m.clone(), c * s)).collect(),
        }
    }

    pub fn mul(&self, other: &MultiPoly) -> MultiPoly {
        let mut terms: BTreeMap<Vec<u16>, Rat> = BTreeMap::new();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                let m: Vec<u16> = ma.iter().zip(mb).map(|(a, b)| a + b).collect();
                let e = terms.entry(m).or_insert_with(Rat::zero);
                *e += ca * cb;
            }
        }
        terms.retain(|_, c| !c.is_zero());
        MultiPoly {
            vars: self.vars.clone(),
            terms,
        }
    }

    pub fn eval(&self, xs: &[Rat]) -> Rat {
        let mut acc = Rat::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (i, &e) in m.iter().enumerate() {
                for _ in 0..e {
                    t *= &xs[i];
                }
            }
            acc += t;
        }
        acc
    }

    /// Exact evaluation at integer coordinates.
    pub fn eval_i64(&self, xs: &[i64]) -> Rat {
        let v: Vec<Rat> = xs.iter().map(|&x| Rat::from_integer(x.into())).collect();
        self.eval(&v)
    }

    /// Substitute each variable by a linear form in `new_vars`:
    /// `forms[i]` lists the coefficients of old variable i over the new ones.
    pub fn substitute_linear(&self, new_vars: Vec<String>, forms: &[Vec<Rat>]) -> MultiPoly {
        assert_eq!(forms.len(), self.nvars());
        let n = new_vars.len();
        let lin: Vec<MultiPoly> = forms
            .iter()
            .map(|f| {
                assert_eq!(f.len(), n);
                MultiPoly::from_terms(
                    new_vars.clone(),
                    f.iter()
                        .enumerate()
                        .map(|(j, c)| {
                            let mut m = vec![0u16; n];
                            m[j] = 1;
                            (m, c.clone())
                        })
                        .collect(),
                )
                .unwrap()
            })
            .collect();
        let mut acc = MultiPoly::zero(new_vars.clone());
        for (m, c) in &self.terms {
            let mut t =
                MultiPoly::from_terms(new_vars.clone(), vec![(vec![0; n], c.clone())]).unwrap();
            for (i, &e) in m.iter().enumerate() {
                for _ in 0..e {
                    t = t.mul(&lin[i]);
                }
            }
            acc = acc.add(&t);
        }
        acc
    }

    /// Partial derivative with respect to variable `i`.
    pub fn derivative(&self, i: usize) -> MultiPoly {
        let mut terms = BTreeMap::new();
        for (m, c) in &self.terms {
            if m[i] == 0 {
                continue;
            }
            let mut d = m.clone();
            d[i] -= 1;
            terms.insert(d, c * Rat::from_integer((m[i] as i64).into()));
        }
        MultiPoly {
            vars: self.vars.clone(),
            terms,
        }
    }

    /// y-coefficients of a two-variable polynomial as polynomials in x
    /// (index = power of y; vars must be ordered [x, y]).
    pub fn y_coefficients(&self) -> Result<Vec<RatPoly>, ExactError> {
        if self.nvars() != 2 {
            return Err(ExactError::DegenerateInput(
                "expected a polynomial in x and y",
            ));
        }
        let dy = self.degree_in(1);
        let mut cs: Vec<Vec<Rat>> = vec![vec![]; dy + 1];
        for (m, c) in &self.terms {
            let (ex, ey) = (m[0] as usize, m[1] as usize);
            if cs[ey].len() <= ex {
                cs[ey].resize(ex + 1, Rat::zero());
            }
            cs[ey][ex] += c;
        }
        Ok(cs.into_iter().map(RatPoly::new).collect())
    }

    /// Coefficient-wise reduction mod p: zero terms dropped; fails if any
    /// denominator is divisible by p.
    pub fn reduce_mod_p(&self, field: Fp) -> Result<MultiPolyFp, ExactError> {
        let p = field.modulus();
        let mut terms = Vec::with_capacity(self.terms.len());
        for (m, c) in &self.terms {
            let r = reduce_rat_mod_p(c, p)?;
            if r != 0 {
                terms.push((r, m.clone()));
            }
        }
        Ok(MultiPolyFp {
            field,
            nvars: self.nvars(),
            terms,
        })
    }
}

/// A multivariate polynomial with 𝔽ₚ coefficients, in evaluation-friendly form.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MultiPolyFp {
    pub field: Fp,
    nvars: usize,
    terms: Vec<(u64, Vec<u16>)>,
}

impl MultiPolyFp {
    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn terms(&self) -> &[(u64, Vec<u16>)] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn eval(&self, xs: &[u64]) -> u64 {
        let f = self.field;
        let mut acc = 0u64;
        for (c, m) in &self.terms {
            let mut t = *c;
            for (i, &e) in m.iter().enumerate() {
                for _ in 0..e {
                    t = f.mul(t, xs[i]);
                }
            }
            acc = f.add(acc, t);
        }
        acc
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat::{rat, rat_int};

    #[test]
    fn homomorphism_mod_p() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        let f = Fp::new(13).unwrap();
        let vars = vec!["a".to_string(), "b".to_string()];
        for _ in 0..40 {
            let mk = |rng: &mut rand_chacha::ChaCha8Rng| {
                let terms = (0..4)
                    .map(|_| {
                        (
                            vec![rng.gen_range(0..3u16), rng.gen_range(0..3u16)],
                            rat(
                                rng.gen_range(-9i64..10),
                                *[1, 2, 3].get(rng.gen_range(0..3)).unwrap(),
                            ),
                        )
                    })
                    .collect();
                MultiPoly::from_terms(vars.clone(), terms).unwrap()
            };
            let a = mk(&mut rng);
            let b = mk(&mut rng);
            let xs = [rng.gen_range(0..13u64), rng.gen_range(0..13u64)];
            // reduce(a+b) = reduce(a)+reduce(b), reduce(a·b) = reduce(a)·reduce(b)
            let lhs_add = a.add(&b).reduce_mod_p(f).unwrap().eval(&xs);
            let rhs_add = f.add(
                a.reduce_mod_p(f).unwrap().eval(&xs),
                b.reduce_mod_p(f).unwrap().eval(&xs),
            );
            assert_eq!(lhs_add, rhs_add);
            let lhs_mul = a.mul(&b).reduce_mod_p(f).unwrap().eval(&xs);
            let rhs_mul = f.mul(
                a.reduce_mod_p(f).unwrap().eval(&xs),
                b.reduce_mod_p(f).unwrap().eval(&xs),
            );
            assert_eq!(lhs_mul, rhs_mul);
        }
    }

    #[test]
    fn substitution_is_ring_map() {
        // (a+b)^2 under a -> u+v, b -> u-v equals (2u)^2
        let vars = vec!["a".into(), "b".into()];
        let ab = MultiPoly::from_terms(
            vars,
            vec![(vec![1, 0], rat_int(1)), (vec![0, 1], rat_int(1))],
        )
        .unwrap();
        let sq = ab.mul(&ab);
        let out = sq.substitute_linear(
            vec!["u".into(), "v".into()],
            &[vec![rat_int(1), rat_int(1)], vec![rat_int(1), rat_int(-1)]],
        );
        let want =
            MultiPoly::from_terms(vec!["u".into(), "v".into()], vec![(vec![2, 0], rat_int(4))])
                .unwrap();
        assert_eq!(out, want);
    }
}
