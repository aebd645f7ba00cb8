//! Class numbers, Fricke fixed points, and genus computations.
//!
//! The class number h(D) of the quadratic order of discriminant D < 0 is
//! computed by counting primitive reduced integral binary quadratic forms
//! (a, b, c): b² − 4ac = D, |b| ≤ a ≤ c, b ≥ 0 whenever |b| = a or a = c,
//! gcd(a, b, c) = 1. The fixed-point count of the Fricke involution on
//! X₀(N) is then
//!
//! ```text
//! ν(N) = h(−4N) + h(−N)  if N ≡ 3 (mod 4),    ν(N) = h(−4N)  otherwise
//! ```
//!
//! for N ≥ 5, and the genus of the quotient follows from Riemann–Hurwitz:
//! 2·g₀(N) − 2 = 2·(2·g₀⁺(N) − 2) + ν(N).
//!
//! `enumerate_levels` reproduces the complete tables of levels with quotient
//! genus ≤ 6 by scanning below the analytic cutoff with exact arithmetic.

use rayon::prelude::*;
use std::collections::BTreeMap;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GenusError {
    #[error("{0} is not a discriminant (need D < 0 and D ≡ 0, 1 mod 4)")]
    InvalidDiscriminant(i64),
    #[error("ν(N) needs N ≥ 5, got {0}")]
    OutOfDomain(u64),
    #[error("internal inconsistency at N = {0}: 2g₀ + 2 − ν not divisible by 4")]
    Inconsistent(u64),
}

/// A valid negative discriminant (D < 0, D ≡ 0 or 1 mod 4).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Discriminant(i64);

impl Discriminant {
    pub fn new(d: i64) -> Result<Discriminant, GenusError> {
        if d >= 0 || !matches!(d.rem_euclid(4), 0 | 1) {
            return Err(GenusError::InvalidDiscriminant(d));
        }
        Ok(Discriminant(d))
    }

    pub fn value(&self) -> i64 {
        self.0
    }
}

/// Genus data for one level, satisfying 2g₀ − 2 = 2(2g₀⁺ − 2) + ν.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GenusRecord {
    pub level: u64,
    pub g0: u64,
    pub nu: u64,
    pub g0_plus: u64,
}

/// h(D) by counting primitive reduced forms; enumeration over 0 ≤ b ≤ √(|D|/3).
pub fn class_number(d: Discriminant) -> u64 {
    let abs_d = (-d.value()) as u64;
    let mut count = 0u64;
    let mut b = abs_d % 2; // b ≡ D (mod 2)
    while 3 * b * b <= abs_d {
        let m4 = b * b + abs_d;
        debug_assert!(m4.is_multiple_of(4));
        let m = m4 / 4; // = a·c
        let mut a = std::cmp::max(b, 1);
        while a * a <= m {
            if m.is_multiple_of(a) {
                let c = m / a;
                if gcd(gcd(a, b), c) == 1 {
                    // b = 0, b = a and a = c are their own mirror classes
                    count += if b == 0 || b == a || a == c { 1 } else { 2 };
                }
            }
            a += 1;
        }
        b += 2;
    }
    count
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// The analytic bound h(D) ≤ √(−D)/π · (ln(4|D|) + 2), in double precision.
pub fn class_number_upper_bound(d: Discriminant) -> f64 {
    let abs_d = (-d.value()) as f64;
    abs_d.sqrt() / std::f64::consts::PI * ((4.0 * abs_d).ln() + 2.0)
}

/// Number of fixed points of the Fricke involution on X₀(N), N ≥ 5.
pub fn nu(n: u64) -> Result<u64, GenusError> {
    if n < 5 {
        return Err(GenusError::OutOfDomain(n));
    }
    let h4n = class_number(Discriminant::new(-4 * n as i64).unwrap());
    Ok(if n % 4 == 3 {
        h4n + class_number(Discriminant::new(-(n as i64)).unwrap())
    } else {
        h4n
    })
}

/// ν for the levels below 5 that appear in the composite table. Their
/// quotients all have genus 0, and the constant 2 keeps the Riemann–Hurwitz
/// identity consistent with g₀ = g₀⁺ = 0.
const NU_SMALL: u64 = 2;

fn nu_any(n: u64) -> u64 {
    if n < 5 {
        NU_SMALL
    } else {
        nu(n).expect("n >= 5")
    }
}

/// Genus of X₀(N) by the classical index/elliptic-point/cusp formula.
pub fn genus_x0(n: u64) -> u64 {
    let fac = factorize(n);
    // index µ = N·∏(1 + 1/p)
    let mut mu = 1u64;
    for &(p, e) in &fac {
        mu *= p.pow(e - 1) * (p + 1);
    }
    // elliptic points of order 2
    let nu2 = if n.is_multiple_of(4) {
        0
    } else {
        fac.iter()
            .map(|&(p, _)| match p % 4 {
                1 => 2,
                3 => 0,
                _ => 1, // p = 2
            })
            .product()
    };
    // elliptic points of order 3
    let nu3 = if n.is_multiple_of(9) {
        0
    } else {
        fac.iter()
            .map(|&(p, _)| match p % 3 {
                1 => 2,
                2 => 0,
                _ => 1, // p = 3
            })
            .product()
    };
    // cusps: Σ_{d|N} φ(gcd(d, N/d))
    let nuinf: u64 = divisors(&fac)
        .into_iter()
        .map(|d| euler_phi(gcd(d, n / d)))
        .sum();
    // g = 1 + µ/12 − ν₂/4 − ν₃/3 − ν∞/2, exactly
    let twelve_g = 12 + mu as i64 - 3 * nu2 as i64 - 4 * nu3 as i64 - 6 * nuinf as i64;
    debug_assert!(
        twelve_g >= 0 && twelve_g % 12 == 0,
        "genus formula not integral at {n}"
    );
    (twelve_g / 12) as u64
}

fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            let mut e = 0;
            while n.is_multiple_of(p) {
                n /= p;
                e += 1;
            }
            out.push((p, e));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

fn divisors(fac: &[(u64, u32)]) -> Vec<u64> {
    let mut divs = vec![1u64];
    for &(p, e) in fac {
        let prev = divs.clone();
        let mut pk = 1;
        for _ in 0..e {
            pk *= p;
            for v in &prev {
                divs.push(v * pk);
            }
        }
    }
    divs
}

fn euler_phi(n: u64) -> u64 {
    if n == 0 {
        return 0;
    }
    let mut out = n;
    for (p, _) in factorize(n) {
        out = out / p * (p - 1);
    }
    out
}

/// Genus of the Fricke quotient X₀⁺(N) via 2g₀ − 2 = 2(2g₀⁺ − 2) + ν.
pub fn genus_x0_plus(n: u64) -> Result<u64, GenusError> {
    let g0 = genus_x0(n);
    let v = nu_any(n);
    let num = 2 * g0 as i64 + 2 - v as i64;
    if num < 0 || num % 4 != 0 {
        return Err(GenusError::Inconsistent(n));
    }
    Ok((num / 4) as u64)
}

pub fn genus_record(n: u64) -> Result<GenusRecord, GenusError> {
    let g0 = genus_x0(n);
    let nu = nu_any(n);
    let g0_plus = genus_x0_plus(n)?;
    Ok(GenusRecord {
        level: n,
        g0,
        nu,
        g0_plus,
    })
}

/// The analytic lower bound g₀⁺(N) ≥ (N − 5√N + 4)/24 − √N/π·(ln(16N) + 2).
pub fn genus_lower_bound(n: u64) -> f64 {
    let nf = n as f64;
    let s = nf.sqrt();
    (nf - 5.0 * s + 4.0) / 24.0 - s / std::f64::consts::PI * ((16.0 * nf).ln() + 2.0)
}

/// Levels of quotient genus ≤ max_genus, split prime/composite per genus.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LevelTables {
    pub max_genus: u64,
    pub cutoff: u64,
    pub prime: BTreeMap<u64, Vec<u64>>,
    pub composite: BTreeMap<u64, Vec<u64>>,
}

/// Scan cutoff: the largest N whose analytic lower bound does not already
/// exceed max_genus (with a 10⁻⁶ float margin). For max_genus = 6 this is
/// 13300; past it the bound only grows.
pub fn scan_cutoff(max_genus: u64) -> u64 {
    let target = max_genus as f64 + 1e-6;
    let mut last = 5;
    for n in 5..10_000_000u64 {
        if genus_lower_bound(n) <= target {
            last = n;
        } else if n > 4 * last + 1000 {
            break;
        }
    }
    last
}

pub fn enumerate_levels(max_genus: u64) -> LevelTables {
    let cutoff = scan_cutoff(max_genus);
    let rows: Vec<(u64, u64, bool)> = (2..=cutoff)
        .into_par_iter()
        .filter_map(|n| {
            let g = genus_x0_plus(n).expect("consistent genus data");
            (g <= max_genus).then(|| (g, n, crate::exact::fp::is_prime(n)))
        })
        .collect();
    let mut prime: BTreeMap<u64, Vec<u64>> = BTreeMap::new();
    let mut composite: BTreeMap<u64, Vec<u64>> = BTreeMap::new();
    for (g, n, isp) in rows {
        if isp {
            prime.entry(g).or_default().push(n);
        } else {
            composite.entry(g).or_default().push(n);
        }
    }
    for v in prime.values_mut().chain(composite.values_mut()) {
        v.sort_unstable();
    }
    LevelTables {
        max_genus,
        cutoff,
        prime,
        composite,
    }
}

/// The published table of prime levels with g₀⁺ ≤ 6, one row per genus.
pub const PRIME_TABLE: &[(u64, &[u64])] = &[
    (0, &[2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 41, 47, 59, 71]),
    (1, &[37, 43, 53, 61, 79, 83, 89, 101, 131]),
    (2, &[67, 73, 103, 107, 167, 191]),
    (3, &[97, 109, 113, 127, 139, 149, 151, 179, 239]),
    (4, &[137, 173, 199, 251, 311]),
    (5, &[157, 181, 227, 263]),
    (6, &[163, 197, 211, 223, 269, 271, 359]),
];

/// The published table of composite levels with g₀⁺ ≤ 6.
pub const COMPOSITE_TABLE: &[(u64, &[u64])] = &[
    (
        0,
        &[
            4, 6, 8, 9, 10, 12, 14, 15, 16, 18, 20, 21, 24, 25, 26, 27, 32, 35, 36, 39, 49, 50,
        ],
    ),
    (
        1,
        &[
            22, 28, 30, 33, 34, 38, 40, 44, 45, 48, 51, 54, 55, 56, 63, 64, 65, 75, 81, 95, 119,
        ],
    ),
    (
        2,
        &[
            42, 46, 52, 57, 62, 68, 69, 72, 74, 77, 80, 87, 91, 98, 111, 121, 125, 143,
        ],
    ),
    (3, &[58, 60, 66, 76, 85, 86, 96, 99, 100, 104, 128, 169]),
    (
        4,
        &[
            70, 82, 84, 88, 90, 92, 93, 94, 108, 115, 116, 117, 129, 135, 147, 155, 159, 161, 215,
        ],
    ),
    (
        5,
        &[
            78, 105, 106, 110, 112, 122, 123, 133, 134, 144, 145, 146, 171, 175, 185, 209,
        ],
    ),
    (6, &[118, 124, 136, 141, 152, 153, 164, 183, 203, 221, 299]),
];

/// Compare an enumeration against the published genus ≤ 6 tables.
pub fn matches_published_tables(t: &LevelTables) -> bool {
    if t.max_genus != 6 {
        return false;
    }
    for &(g, row) in PRIME_TABLE {
        if t.prime.get(&g).map(|v| v.as_slice()) != Some(row) {
            return false;
        }
    }
    for &(g, row) in COMPOSITE_TABLE {
        if t.composite.get(&g).map(|v| v.as_slice()) != Some(row) {
            return false;
        }
    }
    t.prime.keys().all(|g| *g <= 6) && t.composite.keys().all(|g| *g <= 6)
}
