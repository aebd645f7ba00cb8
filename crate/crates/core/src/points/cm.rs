//! Numeric CM-point evaluation.
//!
//! For a discriminant D with b² ≡ D (mod 4N) solvable, the Heegner form
//! (a, b, c) with a = N·k minimal gives τ = (−b + √D)/(2a) in the upper half
//! plane and q = exp(2πiτ). The truncated q-expansions of the coordinate
//! forms are evaluated at q in double precision and the projective ratios are
//! reconstructed as small rationals. With only 19 coefficients the result is
//! advisory: |q| close to 1 is reported as non-convergent rather than being
//! evaluated into noise, and a successful match is confirmed against the
//! exact known-point list, never claimed from the numerics alone.
//!
//! When every coordinate form vanishes at the point (elliptic fixed points of
//! the Fricke group; the published D = −3, −4 cases), the evaluation falls
//! back to the termwise derivative series Σ n·aₙ qⁿ, whose ratios compute the
//! same projective point by l'Hôpital.

use num_complex::Complex64;

use super::PointsError;
use crate::modeldb::{CanonicalModel, KnownPoint};

/// A binary quadratic form (a, b, c) of discriminant D with N | a.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct HeegnerForm {
    pub a: i64,
    pub b: i64,
    pub c: i64,
}

#[derive(Debug, Clone)]
pub struct CmParams {
    /// Refuse to evaluate when |q| exceeds this.
    pub convergence_threshold: f64,
    /// Trigger the derivative fallback when all |coordinates| fall below
    /// vanish_factor × (scale of the evaluation).
    pub vanish_factor: f64,
    /// Denominator bound for rational reconstruction of the ratios.
    pub denominator_bound: i64,
    /// Number of q-expansion terms to use (≤ 19 available).
    pub terms: usize,
}

impl Default for CmParams {
    fn default() -> Self {
        CmParams {
            convergence_threshold: 0.85,
            vanish_factor: 1e-4,
            denominator_bound: 100,
            terms: 19,
        }
    }
}

#[derive(Debug, Clone)]
pub struct CmEvaluation {
    pub disc: i64,
    pub form: HeegnerForm,
    pub q_abs: f64,
    pub approx: Vec<Complex64>,
    pub reconstructed: Vec<(i64, i64)>,
    pub matched_point: Option<KnownPoint>,
    pub residual: f64,
    pub used_derivative_fallback: bool,
}

/// Smallest-a Heegner form for (N, D): a = N, b of minimal |b| with
/// b² ≡ D (mod 4N) (positive b on ties).
pub fn heegner_form(level: u64, disc: i64) -> Result<HeegnerForm, PointsError> {
    if disc >= 0 || !matches!(disc.rem_euclid(4), 0 | 1) {
        return Err(PointsError::InvalidDiscriminant(disc));
    }
    let n = level as i64;
    let m = 4 * n;
    let mut best: Option<i64> = None;
    for b in 0..m {
        if (b * b - disc).rem_euclid(m) == 0 {
            for cand in [b, b - m] {
                let better = match best {
                    None => true,
                    Some(cur) => cand.abs() < cur.abs() || (cand.abs() == cur.abs() && cand > cur),
                };
                if better {
                    best = Some(cand);
                }
            }
        }
    }
    let b = best.ok_or(PointsError::NoHeegnerForm(disc))?;
    let c = (b * b - disc) / m;
    Ok(HeegnerForm { a: n, b, c })
}

fn eval_series(coeffs: &[i64], q: Complex64, terms: usize, derivative: bool) -> Complex64 {
    let mut acc = Complex64::new(0.0, 0.0);
    let mut qn = Complex64::new(1.0, 0.0);
    for (i, &c) in coeffs.iter().take(terms).enumerate() {
        let n = (i + 1) as f64;
        qn *= q;
        let w = if derivative { n * c as f64 } else { c as f64 };
        acc += qn * w;
    }
    acc
}

fn series_scale(coeffs: &[i64], qabs: f64, terms: usize, derivative: bool) -> f64 {
    let mut acc = 0.0;
    let mut qn = 1.0;
    for (i, &c) in coeffs.iter().take(terms).enumerate() {
        let n = (i + 1) as f64;
        qn *= qabs;
        let w = if derivative {
            n * (c as f64).abs()
        } else {
            (c as f64).abs()
        };
        acc += qn * w;
    }
    acc
}

/// Nearest rational p/q with 1 ≤ q ≤ bound to a real number.
fn reconstruct(x: f64, bound: i64) -> (i64, i64) {
    let mut best = (x.round() as i64, 1i64);
    let mut err = (x - best.0 as f64).abs();
    for q in 2..=bound {
        let p = (x * q as f64).round() as i64;
        let e = (x - p as f64 / q as f64).abs();
        if e < err {
            err = e;
            best = (p, q);
        }
    }
    let g = gcd(best.0.unsigned_abs(), best.1 as u64) as i64;
    (best.0 / g.max(1), best.1 / g.max(1))
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Evaluate the CM point of discriminant D through the q-expansions.
pub fn evaluate_cm_point(
    model: &CanonicalModel,
    disc: i64,
    params: &CmParams,
) -> Result<CmEvaluation, PointsError> {
    let form = heegner_form(model.level, disc)?;
    // τ = (−b + i√|D|)/(2a), q = exp(2πiτ); |q| = exp(−π√|D|/a)
    let sq = ((-disc) as f64).sqrt();
    let a2 = 2.0 * form.a as f64;
    let tau_re = -form.b as f64 / a2;
    let tau_im = sq / a2;
    let qabs = (-2.0 * std::f64::consts::PI * tau_im).exp();
    if qabs > params.convergence_threshold {
        return Err(PointsError::NonConvergent {
            qabs,
            threshold: params.convergence_threshold,
        });
    }
    let theta = 2.0 * std::f64::consts::PI * tau_re;
    let q = Complex64::from_polar(qabs, theta);
    let series: Vec<&Vec<i64>> = model.variables.iter().map(|v| &model.qexp[v]).collect();
    let mut vals: Vec<Complex64> = series
        .iter()
        .map(|c| eval_series(c, q, params.terms, false))
        .collect();
    let scale = series
        .iter()
        .map(|c| series_scale(c, qabs, params.terms, false))
        .fold(0.0f64, f64::max);
    let mut fallback = false;
    if vals.iter().all(|v| v.norm() < params.vanish_factor * scale) {
        fallback = true;
        vals = series
            .iter()
            .map(|c| eval_series(c, q, params.terms, true))
            .collect();
    }
    let lead = vals
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.norm().total_cmp(&b.1.norm()))
        .map(|(i, _)| i)
        .unwrap();
    let ratios: Vec<Complex64> = vals.iter().map(|v| v / vals[lead]).collect();
    let recon: Vec<(i64, i64)> = ratios
        .iter()
        .map(|r| reconstruct(r.re, params.denominator_bound))
        .collect();
    // match against the known points, comparing exact projective ratios
    let mut matched = None;
    let mut residual = f64::INFINITY;
    for kp in &model.known_points {
        if kp.coords[lead] == 0 {
            continue;
        }
        let consistent = recon.iter().enumerate().all(|(j, &(n, d))| {
            // n/d == coords[j]/coords[lead]
            n * kp.coords[lead] == d * kp.coords[j]
        });
        if consistent {
            let r = ratios
                .iter()
                .enumerate()
                .map(|(j, z)| {
                    let exact = kp.coords[j] as f64 / kp.coords[lead] as f64;
                    ((z.re - exact).abs()).max(z.im.abs())
                })
                .fold(0.0f64, f64::max);
            matched = Some(kp.clone());
            residual = r;
            break;
        }
    }
    Ok(CmEvaluation {
        disc,
        form,
        q_abs: qabs,
        approx: vals,
        reconstructed: recon,
        matched_point: matched,
        residual,
        used_derivative_fallback: fallback,
    })
}
