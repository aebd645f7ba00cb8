//! Acceptance suite: one test per criterion, each printing a pass/fail line.
//!
//! Run with `cargo test --test acceptance -- --nocapture` to see the lines.
//! Two criteria fail honestly on the shipped data; the assertions state why
//! in their messages rather than being weakened to pass:
//!
//! * criterion 6: the second 197 patch's r(x) has the rational root x = 2
//!   (its pre-monicization leading coefficient is x − 2, so Q(2, y) = y⁵);
//! * criterion 11: with only the 19 published q-expansion coefficients, every
//!   CM point of the shipped levels sits at |q| = exp(−π√|D|/N) > 0.85, so
//!   the evaluation correctly refuses (NonConvergent) instead of matching.

use std::collections::BTreeSet;
use std::path::PathBuf;
use std::time::Instant;

use fricke_core::disks;
use fricke_core::exact::rat::Rat;
use fricke_core::genus;
use fricke_core::modeldb::{self, CanonicalModel};
use fricke_core::planemap::{self, MapResult, PlanePoint};
use fricke_core::points;

fn fixtures() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures")
}

fn load(level: u64) -> CanonicalModel {
    modeldb::load_level(&fixtures(), level).expect("fixture loads")
}

fn line(criterion: &str, pass: bool, detail: &str) -> bool {
    println!(
        "[criterion {criterion}] {} — {detail}",
        if pass { "PASS" } else { "FAIL" }
    );
    pass
}

#[test]
fn criterion_01_table_reproduction() {
    let t0 = Instant::now();
    let tables = genus::enumerate_levels(6);
    let ok = genus::matches_published_tables(&tables);
    let elapsed = t0.elapsed();
    let in_budget = elapsed.as_secs_f64() < 30.0;
    assert!(
        line(
            "1",
            ok && in_budget,
            &format!(
                "tables match: {ok}; scan to {} in {elapsed:?}",
                tables.cutoff
            ),
        ),
        "table reproduction failed"
    );
}

#[test]
fn criterion_02_bound_consistency() {
    use rayon::prelude::*;
    // 1 ≤ h(D) ≤ √(−D)/π (ln 4|D| + 2) for all valid |D| ≤ 10^5
    let violations: usize = (1..=100_000i64)
        .into_par_iter()
        .filter(|&k| {
            let d = -k;
            match genus::Discriminant::new(d) {
                Err(_) => false,
                Ok(disc) => {
                    let h = genus::class_number(disc);
                    let b = genus::class_number_upper_bound(disc);
                    !(1 <= h && (h as f64) <= b)
                }
            }
        })
        .count();
    // genus_lower_bound(N) ≤ g₀⁺(N) for all N ≤ 13300
    let genus_violations: usize = (2..=13_300u64)
        .into_par_iter()
        .filter(|&n| {
            let g = genus::genus_x0_plus(n).expect("consistent") as f64;
            genus::genus_lower_bound(n) > g + 1e-9
        })
        .count();
    assert!(
        line(
            "2",
            violations == 0 && genus_violations == 0,
            &format!(
                "{violations} class-number violations, {genus_violations} genus-bound violations"
            ),
        ),
        "bound consistency failed"
    );
}

#[test]
fn criterion_03_known_points() {
    let mut all = true;
    let mut detail = String::new();
    for level in modeldb::LEVELS {
        let m = load(level);
        let ok = modeldb::verify_known_points(&m).passed();
        if !ok {
            detail.push_str(&format!("{level} fails; "));
        }
        all &= ok;
    }
    if detail.is_empty() {
        detail = "16/16 levels verify exactly".into();
    }
    assert!(line("3", all, &detail), "known-point verification failed");
}

#[test]
fn criterion_04_qexp_and_mutations() {
    use rand::{Rng, SeedableRng};
    let mut all = true;
    for level in modeldb::LEVELS {
        all &= modeldb::verify_qexp(&load(level)).passed();
    }
    // sampled single-coefficient mutations of equation terms, seeded
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(20260810);
    let mut detected = 0usize;
    let mut total = 0usize;
    while total < 60 {
        let level = modeldb::LEVELS[rng.gen_range(0..modeldb::LEVELS.len())];
        let m = load(level);
        let ei = rng.gen_range(0..m.equations.len());
        let terms: Vec<(Vec<u16>, Rat)> = m.equations[ei]
            .terms()
            .map(|(mo, c)| (mo.clone(), c.clone()))
            .collect();
        let ti = rng.gen_range(0..terms.len());
        let mut mutated = terms.clone();
        mutated[ti].1 += Rat::from_integer(1.into());
        let mut m2 = m.clone();
        m2.equations[ei] =
            fricke_core::exact::MultiPoly::from_terms(m.variables.clone(), mutated).unwrap();
        total += 1;
        let caught =
            !modeldb::verify_qexp(&m2).passed() || !modeldb::verify_known_points(&m2).passed();
        detected += caught as usize;
    }
    let ok = all && detected == total;
    assert!(
        line(
            "4",
            ok,
            &format!("all levels vanish through the bound; {detected}/{total} mutations detected"),
        ),
        "q-expansion verification / mutation detection failed"
    );
}

#[test]
fn criterion_05_plane_model_fp_consistency() {
    let mut all = true;
    let mut patches = 0;
    let mut heaviest = std::time::Duration::ZERO;
    for level in modeldb::LEVELS {
        let m = load(level);
        for patch in &m.patches {
            let q = &m.plane_model(patch.index).unwrap().q;
            let t0 = Instant::now();
            let chk = planemap::verify_plane_model_fp(&m, patch, q, patch.prime).unwrap();
            heaviest = heaviest.max(t0.elapsed());
            patches += 1;
            if !chk.failures.is_empty() || chk.affine_checked == 0 {
                all = false;
                println!(
                    "  !! level {level} patch {}: {} failures",
                    patch.index,
                    chk.failures.len()
                );
            }
        }
    }
    let in_budget = heaviest.as_secs_f64() < 300.0;
    assert!(
        line(
            "5",
            all && patches == 20 && in_budget,
            &format!("{patches} patches exhaustively consistent; heaviest case {heaviest:?}"),
        ),
        "plane-model/F_p consistency failed"
    );
}

#[test]
fn criterion_06_no_linear_factor_screen() {
    let mut failures = Vec::new();
    let mut patches = 0;
    for level in modeldb::LEVELS {
        let m = load(level);
        for pm in &m.plane_models {
            patches += 1;
            let dd = disks::disk_data(&pm.q).unwrap();
            let roots = fricke_core::exact::rational_roots(&dd.r).unwrap();
            if !roots.is_empty() {
                failures.push(format!(
                    "level {level} patch {}: roots {:?}",
                    pm.patch_index,
                    roots.iter().map(|r| r.to_string()).collect::<Vec<_>>()
                ));
            }
        }
    }
    let ok = failures.is_empty() && patches == 20;
    line(
        "6",
        ok,
        &if ok {
            "r(x) has no rational root on any of the 20 patches".to_string()
        } else {
            format!(
                "{} of 20 patches have rational roots: {failures:?}",
                failures.len()
            )
        },
    );
    assert!(
        ok,
        "criterion 6 fails on the shipped data: the printed second 197 model \
         has r(2) = 0 because its pre-monicization leading coefficient is x − 2 \
         (Q(2, y) = y⁵); see the decisions ledger"
    );
}

#[test]
fn criterion_07_disk_coverage() {
    let single = [
        137u64, 173, 199, 251, 311, 157, 181, 227, 263, 163, 269, 271,
    ];
    let double = [197u64, 211, 223, 359];
    let mut ok = true;
    for level in single {
        let m = load(level);
        let p = m.patches[0].prime;
        let rep = disks::coverage_check(&m, &[1], p).unwrap();
        if !rep.covered {
            ok = false;
            println!("  !! single-patch level {level} not covered at p = {p}");
        }
    }
    for level in double {
        let m = load(level);
        let p = m.patches[0].prime;
        let rep = disks::coverage_check(&m, &[1, 2], p).unwrap();
        if !rep.covered {
            ok = false;
            println!("  !! two-patch level {level} not covered at p = {p}");
        }
    }
    // frozen derived expectation: 197 patch 1 alone does not cover at 23
    let m197 = load(197);
    let alone = disks::coverage_check(&m197, &[1], 23).unwrap();
    let alone_ok = !alone.covered;
    if !alone_ok {
        println!("  !! 197 patch 1 alone unexpectedly covers at p = 23");
    }
    assert!(
        line(
            "7",
            ok && alone_ok,
            "12 single-patch and 4 two-patch levels covered; 197 patch 1 alone uncovered",
        ),
        "disk coverage failed"
    );
}

#[test]
fn criterion_08_211_f31_crosscheck() {
    let m = load(211);
    let patch = m.patch(2).unwrap();
    let field = fricke_core::exact::Fp::new(31).unwrap();
    // the eight published plane points of the second 211 patch over F_31:
    // affine (−1,1), (−1/2,0), (1,−2), (−2,3), (−1,2), (0,−1);
    // infinite [−1/3 : 1 : 0] and [1 : 0 : 0]
    let inv = |a: i64, b: i64| -> u64 {
        let fa = field.from_i64(a);
        let fb = field.from_i64(b);
        field.mul(fa, field.inv(fb))
    };
    let expected_affine: BTreeSet<(u64, u64)> = [
        (inv(-1, 1), inv(1, 1)),
        (inv(-1, 2), 0),
        (1, inv(-2, 1)),
        (inv(-2, 1), 3),
        (inv(-1, 1), 2),
        (0, inv(-1, 1)),
    ]
    .into_iter()
    .collect();
    let expected_infinite: BTreeSet<(u64, u64)> =
        [(1u64, inv(-3, 1)), (1, 0)].into_iter().collect();
    // first: the reductions of the known rational points map exactly onto them
    let lifter = disks::DiskLifter::new(&m, 31).unwrap();
    let mut got_affine = BTreeSet::new();
    let mut got_infinite = BTreeSet::new();
    for kp in &m.known_points {
        let red = points::FpPointSet::normalize_reduction(&kp.coords, 31).unwrap();
        let image = match planemap::eval_patch_fp(&m, patch, &red, field).unwrap() {
            MapResult::Point(pt) => pt,
            MapResult::Undefined(_) => lifter.resolve(patch, &red).expect("disk image resolves"),
        };
        match image {
            PlanePoint::Affine { x, y } => {
                got_affine.insert((x, y));
            }
            PlanePoint::Infinite { x, y } => {
                got_infinite.insert((x, y));
            }
        }
    }
    let rational_ok = got_affine == expected_affine && got_infinite == expected_infinite;
    // second: all eight lie in the image of the full F_31 point set
    let pts = points::enumerate_fp_points(&m, 31).unwrap();
    let mut full_affine = BTreeSet::new();
    let mut full_infinite = BTreeSet::new();
    for pt in &pts.points {
        let image = match planemap::eval_patch_fp(&m, patch, pt, field).unwrap() {
            MapResult::Point(p) => p,
            MapResult::Undefined(_) => match lifter.resolve(patch, pt) {
                Some(p) => p,
                None => continue,
            },
        };
        match image {
            PlanePoint::Affine { x, y } => {
                full_affine.insert((x, y));
            }
            PlanePoint::Infinite { x, y } => {
                full_infinite.insert((x, y));
            }
        }
    }
    let contained =
        expected_affine.is_subset(&full_affine) && expected_infinite.is_subset(&full_infinite);
    assert!(
        line(
            "8",
            rational_ok && contained,
            &format!(
                "known-point images match the 8 published points exactly; \
                 full F_31 image ({} points) contains them",
                full_affine.len() + full_infinite.len()
            ),
        ),
        "211/F_31 cross-check failed"
    );
}

#[test]
fn criterion_09_brute_force_recovery() {
    let cases = [(137u64, 19u64), (199, 5), (251, 16)];
    let mut ok = true;
    let mut detail = String::new();
    for (level, h) in cases {
        let m = load(level);
        let t0 = Instant::now();
        let at_h: BTreeSet<Vec<i64>> = points::search_rational_points(&m, h)
            .into_iter()
            .map(normalize_sign)
            .collect();
        let at_2h: BTreeSet<Vec<i64>> = points::search_rational_points(&m, 2 * h)
            .into_iter()
            .map(normalize_sign)
            .collect();
        let elapsed = t0.elapsed();
        let known: BTreeSet<Vec<i64>> = m
            .known_points
            .iter()
            .map(|kp| normalize_sign(kp.coords.clone()))
            .collect();
        let good = at_h == known && at_2h == known && elapsed.as_secs_f64() < 240.0;
        detail.push_str(&format!(
            "{level}: {} points at H={h}, no extras to {} ({elapsed:?}); ",
            at_h.len(),
            2 * h
        ));
        ok &= good;
    }
    assert!(line("9", ok, &detail), "brute-force recovery failed");
}

fn normalize_sign(mut v: Vec<i64>) -> Vec<i64> {
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
fn criterion_10_weil_bound() {
    use rayon::prelude::*;
    let mut jobs = Vec::new();
    for level in modeldb::LEVELS {
        for p in [5u64, 7, 11, 13, 17, 19, 23, 29, 31] {
            if level % p != 0 {
                jobs.push((level, p));
            }
        }
    }
    let violations: Vec<String> = jobs
        .par_iter()
        .filter_map(|&(level, p)| {
            let m = load(level);
            let pts = points::enumerate_fp_points(&m, p).unwrap();
            let (lo, hi) = points::weil_interval(m.genus, p);
            let n = pts.points.len() as f64;
            (!(lo <= n && n <= hi)).then(|| format!("{level}@{p}: {} points", pts.points.len()))
        })
        .collect();
    line(
        "10",
        violations.is_empty(),
        &if violations.is_empty() {
            format!(
                "{} (level, prime) pairs all inside the Weil interval",
                jobs.len()
            )
        } else {
            format!(
                "{}/{} pairs inside the Weil interval; violations: {violations:?}",
                jobs.len() - violations.len(),
                jobs.len()
            )
        },
    );
    assert!(
        violations.is_empty(),
        "criterion 10 fails on the shipped data at {violations:?}: the printed \
         227 generators degenerate mod 7 (the 64 = (7+1)² count is a quadric \
         surface appearing in the reduction), so the fixture equations do not \
         cut out the curve there; verified against an independent enumeration; \
         see the decisions ledger"
    );
}

#[test]
fn criterion_11_cm_identification() {
    let params = points::CmParams::default();
    // clause 1: (137, −7) should match [2:−1:−2:1] with residual < 10⁻³
    let m137 = load(137);
    let r1 = points::evaluate_cm_point(&m137, -7, &params);
    let clause1 = match &r1 {
        Ok(eval) => {
            eval.matched_point.as_ref().map(|kp| kp.coords.clone()) == Some(vec![2, -1, -2, 1])
                && eval.residual < 1e-3
        }
        Err(_) => false,
    };
    line("11a", clause1, &format!("(137, −7) match: {r1:?}"));
    // clause 2: (157, −3) should trigger the derivative fallback
    let m157 = load(157);
    let r2 = points::evaluate_cm_point(&m157, -3, &params);
    let clause2 = matches!(&r2, Ok(eval) if eval.used_derivative_fallback);
    line("11b", clause2, &format!("(157, −3) fallback: {r2:?}"));
    // clause 3: non-convergent evaluations must refuse rather than mis-match,
    // and anything that does evaluate must never claim a wrong point
    let mut clause3 = true;
    for (level, disc) in [
        (137u64, -7i64),
        (157, -3),
        (199, -3),
        (311, -11),
        (163, -163),
    ] {
        let m = load(level);
        match points::evaluate_cm_point(&m, disc, &params) {
            Err(points::PointsError::NonConvergent { qabs, threshold }) => {
                clause3 &= qabs > threshold;
            }
            Ok(eval) => {
                clause3 &= eval.q_abs <= params.convergence_threshold;
                if let Some(kp) = &eval.matched_point {
                    // a claimed match must be the point the fixture labels D
                    let want = m
                        .known_points
                        .iter()
                        .find(|p| matches!(p.label, modeldb::PointLabel::Cm(d) if d == disc));
                    clause3 &= want.map(|w| w.coords == kp.coords).unwrap_or(false);
                }
            }
            Err(_) => clause3 = false,
        }
    }
    line(
        "11c",
        clause3,
        "non-convergent cases raise NonConvergent rather than mis-matching",
    );
    assert!(
        clause1 && clause2 && clause3,
        "criterion 11 fails on the shipped data: every CM point of these levels \
         has |q| = exp(−π√|D|/N) ≥ exp(−π√163/137) ≈ 0.75, and the published \
         19 coefficients cannot resolve ratios at such |q|; the evaluation \
         refuses (NonConvergent) instead of mis-matching; see the decisions ledger"
    );
}
