//! Resultants and discriminants.
//!
//! Two independent routes are kept side by side:
//!
//! * the production path for `discriminant_y` evaluates the y-resultant at
//!   integer x-values (Sylvester determinant via fraction-free Bareiss
//!   elimination over ℤ) and interpolates exactly;
//! * a subresultant pseudo-remainder resultant over a generic coefficient
//!   ring, usable with polynomial coefficients, which the test suite holds
//!   against the first route.
//!
//! Sign convention: disc(Q) = (−1)^{d(d−1)/2} · Res_y(Q, ∂Q/∂y) / lc_y(Q).

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::fp::{Fp, FpPoly};
use super::multipoly::MultiPoly;
use super::rat::Rat;
use super::unipoly::{RatPoly, ZPoly};
use super::ExactError;

/// Coefficient rings the generic resultant engine can work over: exact,
/// with exact division available when the algorithm guarantees it.
pub trait Coef: Clone {
    fn is_zero_c(&self) -> bool;
    fn one_like(&self) -> Self;
    fn neg_c(&self) -> Self;
    fn add_c(&self, other: &Self) -> Self;
    fn mul_c(&self, other: &Self) -> Self;
    /// Division known to be exact; panics otherwise.
    fn exact_div_c(&self, other: &Self) -> Self;
    fn pow_c(&self, e: usize) -> Self {
        let mut acc = self.one_like();
        for _ in 0..e {
            acc = acc.mul_c(self);
        }
        acc
    }
}

impl Coef for BigInt {
    fn is_zero_c(&self) -> bool {
        Zero::is_zero(self)
    }
    fn one_like(&self) -> Self {
        BigInt::one()
    }
    fn neg_c(&self) -> Self {
        -self
    }
    fn add_c(&self, other: &Self) -> Self {
        self + other
    }
    fn mul_c(&self, other: &Self) -> Self {
        self * other
    }
    fn exact_div_c(&self, other: &Self) -> Self {
        use num_integer::Integer;
        let (q, r) = self.div_rem(other);
        debug_assert!(Zero::is_zero(&r), "inexact division in resultant engine");
        q
    }
}

impl Coef for ZPoly {
    fn is_zero_c(&self) -> bool {
        ZPoly::is_zero(self)
    }
    fn one_like(&self) -> Self {
        ZPoly::one()
    }
    fn neg_c(&self) -> Self {
        self.neg()
    }
    fn add_c(&self, other: &Self) -> Self {
        ZPoly::add(self, other)
    }
    fn mul_c(&self, other: &Self) -> Self {
        self.mul(other)
    }
    fn exact_div_c(&self, other: &Self) -> Self {
        // long division over Q, checked integral and exact
        let (q, r) = self.to_rat_poly().div_rem(&other.to_rat_poly());
        debug_assert!(
            r.is_zero(),
            "inexact polynomial division in resultant engine"
        );
        let (z, s) = q.to_primitive_z();
        debug_assert!(
            s.denom().is_one(),
            "non-integral quotient in resultant engine"
        );
        z.scale(s.numer())
    }
}

impl Coef for FpPoly {
    fn is_zero_c(&self) -> bool {
        FpPoly::is_zero(self)
    }
    fn one_like(&self) -> Self {
        FpPoly::new(self.field, vec![1])
    }
    fn neg_c(&self) -> Self {
        self.scale(self.field.neg(1))
    }
    fn add_c(&self, other: &Self) -> Self {
        FpPoly::add(self, other).expect("mismatched fields in resultant engine")
    }
    fn mul_c(&self, other: &Self) -> Self {
        self.mul(other)
            .expect("mismatched fields in resultant engine")
    }
    fn exact_div_c(&self, other: &Self) -> Self {
        let (q, r) = self
            .div_rem(other)
            .expect("mismatched fields in resultant engine");
        debug_assert!(r.is_zero(), "inexact division in resultant engine");
        q
    }
}

fn deg<C: Coef>(f: &[C]) -> Option<usize> {
    f.iter().rposition(|c| !c.is_zero_c())
}

fn trim<C: Coef>(mut f: Vec<C>) -> Vec<C> {
    while f.last().is_some_and(|c| c.is_zero_c()) {
        f.pop();
    }
    f
}

/// Pseudo-remainder: exactly lc(b)^(deg a − deg b + 1) · a mod b, low-first.
fn prem<C: Coef>(a: &[C], b: &[C]) -> Vec<C> {
    let da = match deg(a) {
        Some(d) => d,
        None => return Vec::new(),
    };
    let db = deg(b).expect("prem by zero");
    if da < db {
        // lc^(da-db+1) would be a negative power; by convention multiply by
        // nothing (callers only hit this with da >= db)
        return a.to_vec();
    }
    let lc = b[db].clone();
    let mut mults = 0usize;
    let mut r: Vec<C> = a.to_vec();
    loop {
        let dr = match deg(&r) {
            Some(d) if d >= db => d,
            _ => break,
        };
        let rl = r[dr].clone();
        let shift = dr - db;
        let mut nr: Vec<C> = r.iter().map(|c| c.mul_c(&lc)).collect();
        mults += 1;
        for (j, bj) in b.iter().enumerate().take(db + 1) {
            let t = bj.mul_c(&rl);
            nr[j + shift] = nr[j + shift].add_c(&t.neg_c());
        }
        r = trim(nr);
    }
    // pad the lc power up to the strict definition
    for _ in mults..(da - db + 1) {
        r = r.iter().map(|c| c.mul_c(&lc)).collect();
    }
    r
}

/// Resultant via the subresultant pseudo-remainder sequence (Cohen, Alg. 3.3.7).
pub fn resultant_prs<C: Coef + PartialEq>(a0: &[C], b0: &[C]) -> C {
    let a0 = trim(a0.to_vec());
    let b0 = trim(b0.to_vec());
    let (da0, db0) = match (deg(&a0), deg(&b0)) {
        (Some(a), Some(b)) => (a, b),
        // Res(f, 0) = 0 unless f is a nonzero constant (empty product = 1)
        (Some(d), None) | (None, Some(d)) => {
            let one = a0
                .first()
                .or_else(|| b0.first())
                .expect("nonzero side")
                .one_like();
            return if d == 0 { one } else { zero_like(&one) };
        }
        (None, None) => panic!("resultant of zero polynomials"),
    };
    let mut negate = false;
    let (mut a, mut b) = if da0 >= db0 {
        (a0, b0)
    } else {
        if da0 % 2 == 1 && db0 % 2 == 1 {
            negate = !negate;
        }
        (b0, a0)
    };
    let one = a[0].one_like();
    let mut g = one.clone();
    let mut h = one.clone();
    loop {
        let da = deg(&a).unwrap();
        let db = match deg(&b) {
            Some(d) => d,
            None => return zero_like(&one), // common factor of positive degree
        };
        if db == 0 {
            // res = h^(1−da) · b0^da, i.e. b0^da / h^(da−1)
            let num = b[0].pow_c(da);
            let res = if da >= 1 {
                num.exact_div_c(&h.pow_c(da - 1))
            } else {
                h.clone()
            };
            return if negate { res.neg_c() } else { res };
        }
        if da % 2 == 1 && db % 2 == 1 {
            negate = !negate;
        }
        let d = da - db;
        let r = prem(&a, &b);
        // B <- R / (g·h^d)
        let div = g.mul_c(&h.pow_c(d));
        let newb: Vec<C> = r.iter().map(|c| c.exact_div_c(&div)).collect();
        a = b;
        b = trim(newb);
        g = a[deg(&a).unwrap()].clone();
        // h <- h^(1−d)·g^d
        h = if d == 0 {
            h
        } else {
            g.pow_c(d).exact_div_c(&h.pow_c(d - 1))
        };
    }
}

fn zero_like<C: Coef>(one: &C) -> C {
    one.add_c(&one.neg_c())
}

/// Sylvester-matrix resultant by fraction-free (Bareiss) elimination.
pub fn resultant_sylvester<C: Coef + PartialEq>(a: &[C], b: &[C]) -> C {
    let a = trim(a.to_vec());
    let b = trim(b.to_vec());
    let (da, db) = (deg(&a), deg(&b));
    let (da, db) = match (da, db) {
        (Some(x), Some(y)) => (x, y),
        _ => panic!("sylvester resultant of zero polynomial"),
    };
    let one = a[0].one_like();
    let zero = zero_like(&one);
    let n = da + db;
    if n == 0 {
        return one;
    }
    // rows: db copies of a (high to low), then da copies of b
    let mut m: Vec<Vec<C>> = Vec::with_capacity(n);
    for i in 0..db {
        let mut row = vec![zero.clone(); n];
        for (k, c) in a.iter().enumerate() {
            row[i + (da - k)] = c.clone();
        }
        m.push(row);
    }
    for i in 0..da {
        let mut row = vec![zero.clone(); n];
        for (k, c) in b.iter().enumerate() {
            row[i + (db - k)] = c.clone();
        }
        m.push(row);
    }
    // Bareiss
    let mut sign_flip = false;
    let mut prev = one.clone();
    for k in 0..n - 1 {
        if m[k][k].is_zero_c() {
            let piv = (k + 1..n).find(|&i| !m[i][k].is_zero_c());
            match piv {
                Some(i) => {
                    m.swap(k, i);
                    sign_flip = !sign_flip;
                }
                None => return zero,
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let t1 = m[k][k].mul_c(&m[i][j]);
                let t2 = m[i][k].mul_c(&m[k][j]);
                let num = t1.add_c(&t2.neg_c());
                m[i][j] = num.exact_div_c(&prev);
            }
            m[i][k] = zero.clone();
        }
        prev = m[k][k].clone();
    }
    let det = m[n - 1][n - 1].clone();
    if sign_flip {
        det.neg_c()
    } else {
        det
    }
}

/// Splits a two-variable polynomial into y-coefficients over ℤ[x] together
/// with the denominator λ that was cleared: λ·Q = Σ cs[j](x)·y^j.
fn clear_bivariate(q: &MultiPoly) -> Result<(Vec<ZPoly>, BigInt), ExactError> {
    use num_integer::Integer;
    if q.nvars() != 2 {
        return Err(ExactError::DegenerateInput(
            "expected a polynomial in x and y",
        ));
    }
    let mut lambda = BigInt::one();
    for (_, c) in q.terms() {
        lambda = lambda.lcm(c.denom());
    }
    let dy = q.degree_in(1);
    let mut cs: Vec<Vec<BigInt>> = vec![vec![]; dy + 1];
    for (mono, c) in q.terms() {
        let (ex, ey) = (mono[0] as usize, mono[1] as usize);
        let v = c.numer() * (&lambda / c.denom());
        if cs[ey].len() <= ex {
            cs[ey].resize(ex + 1, BigInt::zero());
        }
        cs[ey][ex] += v;
    }
    Ok((cs.into_iter().map(ZPoly::new).collect(), lambda))
}

/// Discriminant of `Q(x, y)` with respect to y, as a polynomial in x.
///
/// Production route: evaluate Res_y(λQ, ∂_y λQ) at integer x-values where the
/// y-degrees do not drop, interpolate exactly, then strip lc_y, λ and apply
/// the sign (−1)^{d(d−1)/2}.
pub fn discriminant_y(q: &MultiPoly) -> Result<RatPoly, ExactError> {
    let (cs, lambda) = clear_bivariate(q)?;
    let d = cs.len() - 1;
    if d == 0 {
        return Err(ExactError::DegenerateInput("Q is constant in y"));
    }
    let lc: ZPoly = cs[d].clone();
    // B = dA/dy has y-coefficients j·cs[j]
    let degx_a = cs.iter().filter_map(|c| c.degree()).max().unwrap_or(0);
    let bound = degx_a * (d - 1) + degx_a * d + 1;
    let mut xs: Vec<BigInt> = Vec::with_capacity(bound);
    let mut ys: Vec<BigInt> = Vec::with_capacity(bound);
    let mut t: i64 = 0;
    while xs.len() < bound {
        let xv = BigInt::from(t);
        // alternate 0, 1, -1, 2, -2, ...
        t = if t > 0 { -t } else { -t + 1 };
        if lc.eval(&xv).is_zero() {
            continue;
        }
        let av: Vec<BigInt> = cs.iter().map(|c| c.eval(&xv)).collect();
        let bv: Vec<BigInt> = av
            .iter()
            .enumerate()
            .skip(1)
            .map(|(j, c)| c * BigInt::from(j))
            .collect();
        let res = resultant_prs(&av, &bv);
        xs.push(xv);
        ys.push(res);
    }
    let res_poly = interpolate(&xs, &ys);
    // disc(λQ) = sign · Res / lc_y(λQ); disc(Q) = disc(λQ) / λ^(2d−2)
    let (quo, rem) = res_poly.div_rem(&lc.to_rat_poly());
    debug_assert!(
        rem.is_zero(),
        "resultant not divisible by leading coefficient"
    );
    let scale = Rat::new(BigInt::one(), lambda.pow(2 * d as u32 - 2));
    let mut out = quo.scale(&scale);
    if (d * (d - 1) / 2) % 2 == 1 {
        out = out.neg();
    }
    Ok(out)
}

/// Discriminant in y of a two-variable polynomial over 𝔽ₚ (subresultant route).
pub fn discriminant_y_fp(cs: &[FpPoly], field: Fp) -> Result<FpPoly, ExactError> {
    let d = cs.len().saturating_sub(1);
    if d == 0 || cs[d].is_zero() {
        return Err(ExactError::DegenerateInput(
            "Q is constant in y or lc vanishes",
        ));
    }
    let a: Vec<FpPoly> = cs.to_vec();
    let b: Vec<FpPoly> = cs
        .iter()
        .enumerate()
        .skip(1)
        .map(|(j, c)| c.scale(field.from_i64(j as i64)))
        .collect();
    let res = resultant_prs(&a, &b);
    let (quo, rem) = res.div_rem(&cs[d])?;
    debug_assert!(rem.is_zero_c());
    Ok(if (d * (d - 1) / 2) % 2 == 1 {
        quo.scale(field.neg(1))
    } else {
        quo
    })
}

/// Newton-form exact interpolation through (xs[i], ys[i]).
fn interpolate(xs: &[BigInt], ys: &[BigInt]) -> RatPoly {
    let n = xs.len();
    let mut coeffs: Vec<Rat> = ys.iter().map(|y| Rat::from_integer(y.clone())).collect();
    // divided differences
    for j in 1..n {
        for i in (j..n).rev() {
            let num = coeffs[i].clone() - coeffs[i - 1].clone();
            let den = Rat::from_integer(&xs[i] - &xs[i - j]);
            coeffs[i] = num / den;
        }
    }
    // Horner expansion of the Newton form
    let mut poly = RatPoly::zero();
    for i in (0..n).rev() {
        // poly = poly·(x − xs[i]) + coeffs[i]
        let shift = RatPoly::new(vec![Rat::from_integer(-&xs[i]), Rat::one()]);
        poly = poly.mul(&shift).add(&RatPoly::constant(coeffs[i].clone()));
    }
    poly
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::multipoly::MultiPoly;
    use crate::exact::rat::rat;

    fn mp(terms: &[(i64, [u16; 2])]) -> MultiPoly {
        MultiPoly::from_terms(
            vec!["x".into(), "y".into()],
            terms
                .iter()
                .map(|&(c, m)| (m.to_vec(), Rat::from_integer(c.into())))
                .collect(),
        )
        .unwrap()
    }

    #[test]
    fn disc_quadratics() {
        // y^2 − x: disc = 4x
        let q = mp(&[(1, [0, 2]), (-1, [1, 0])]);
        let d = discriminant_y(&q).unwrap();
        assert_eq!(d, RatPoly::from_i64(&[0, 4]));
        // y^2 + y + x: disc = 1 − 4x
        let q = mp(&[(1, [0, 2]), (1, [0, 1]), (1, [1, 0])]);
        let d = discriminant_y(&q).unwrap();
        assert_eq!(d, RatPoly::from_i64(&[1, -4]));
    }

    #[test]
    fn disc_errors_on_constant_in_y() {
        let q = mp(&[(1, [2, 0]), (3, [0, 0])]);
        assert!(discriminant_y(&q).is_err());
    }

    #[test]
    fn prs_matches_sylvester_on_randoms() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for _ in 0..60 {
            let da = rng.gen_range(1..6);
            let db = rng.gen_range(1..6);
            let a: Vec<BigInt> = (0..=da)
                .map(|_| BigInt::from(rng.gen_range(-6i64..7)))
                .collect();
            let b: Vec<BigInt> = (0..=db)
                .map(|_| BigInt::from(rng.gen_range(-6i64..7)))
                .collect();
            if a.iter().all(|c| c.is_zero_c()) || b.iter().all(|c| c.is_zero_c()) {
                continue;
            }
            let r1 = resultant_prs(&a, &b);
            let r2 = resultant_sylvester(&a, &b);
            assert_eq!(r1, r2, "a={a:?} b={b:?}");
        }
    }

    #[test]
    fn quadratic_disc_scaling() {
        // disc(ay² + by + c) = b² − 4ac, here with rational a
        let q = MultiPoly::from_terms(
            vec!["x".into(), "y".into()],
            vec![
                (vec![0, 2], rat(1, 2)),
                (vec![1, 1], rat(3, 1)),
                (vec![0, 0], rat(-1, 1)),
            ],
        )
        .unwrap();
        // disc = (3x)^2 − 4·(1/2)·(−1) = 9x² + 2
        let d = discriminant_y(&q).unwrap();
        assert_eq!(d, RatPoly::new(vec![rat(2, 1), rat(0, 1), rat(9, 1)]));
    }
}
