//! Acceptance run: one PASS/FAIL line per criterion, non-zero exit on any FAIL.

use std::time::Instant;

use dotpairs::adaptability::{is_s_adaptable, min_separation_sq, riesz_energy};
use dotpairs::constructions::{grid_set, perturbed_grid, random_set, ConstructionSpec};
use dotpairs::counting::{count_bruteforce, count_via_ab, incidence_profile, verify_general_bound};
use dotpairs::experiments::{
    fit_exponent, run_scaling, run_separation_experiment, with_threads, ExperimentReport, FitRow,
};
use dotpairs::geometry::{alpha_line, dot, lines_coincide, radial_direction};
use dotpairs::incidence::{check_dyadic_identities, check_line_capacity, dyadic_decompose};
use dotpairs::{DotPair, Point, PointSet, Rational};
use rand_core::{RngCore, SeedableRng};
use rand_xoshiro::SplitMix64;
use serde_json::Value;

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn r(n: i64, d: i64) -> Rational {
    Rational::new(n, d)
}

/// Uniform draw from `lo..=hi`.
fn draw(rng: &mut SplitMix64, lo: i64, hi: i64) -> i64 {
    lo + (rng.next_u64() % (hi - lo + 1) as u64) as i64
}

/// Distinct non-origin points with small numerators and denominators, so
/// dot products repeat often.
fn small_rational_set(rng: &mut SplitMix64, n: usize) -> PointSet {
    let mut seen = std::collections::HashSet::new();
    let mut pts = Vec::new();
    while pts.len() < n {
        let p = Point::new(
            r(draw(rng, -6, 6), draw(rng, 1, 3)),
            r(draw(rng, -6, 6), draw(rng, 1, 3)),
        );
        if !p.is_origin() && seen.insert(p.clone()) {
            pts.push(p);
        }
    }
    PointSet::new(pts, "small rational").unwrap()
}

/// A pair of targets each realized by some ordered pair of points.
fn realized_pair(rng: &mut SplitMix64, set: &PointSet) -> DotPair {
    let n = set.len() as i64;
    let mut pick = || {
        let i = draw(rng, 0, n - 1) as usize;
        let j = draw(rng, 0, n - 1) as usize;
        dot(&set.points()[i], &set.points()[j])
    };
    DotPair::new(pick(), pick())
}

/// Seeded corpus shared by criteria 1, 4 and 6.
fn random_corpus() -> Vec<(PointSet, DotPair)> {
    let mut rng = SplitMix64::seed_from_u64(20240601);
    let mut corpus = Vec::new();
    for k in 0..120 {
        let n = draw(&mut rng, 3, 60) as usize;
        let set = if k % 2 == 0 {
            small_rational_set(&mut rng, n)
        } else {
            random_set(n as u64, rng.next_u64()).unwrap()
        };
        let pair = realized_pair(&mut rng, &set);
        corpus.push((set, pair));
    }
    corpus
}

fn criterion_1(corpus: &[(PointSet, DotPair)]) -> Outcome {
    let mut nonzero = 0;
    let mut max_count = 0;
    for (idx, (set, pair)) in corpus.iter().enumerate() {
        let brute = count_bruteforce(set, pair);
        let quad = incidence_profile(set, pair).total_triples;
        ensure(brute == quad, || {
            format!("set {idx}: brute {brute} != quadratic {quad}")
        })?;
        if pair.both_nonzero() {
            let ab = count_via_ab(set, pair).map_err(|e| format!("set {idx}: {e}"))?;
            ensure(ab.total_triples() == brute, || {
                format!("set {idx}: A+B {} != brute {brute}", ab.total_triples())
            })?;
            nonzero += 1;
        }
        max_count = max_count.max(brute);
    }
    ensure(nonzero >= 100, || {
        format!("only {nonzero} sets had nonzero targets")
    })?;
    Ok(format!(
        "{} sets (n <= 60), {nonzero} with three-way agreement, max count {max_count}",
        corpus.len()
    ))
}

fn criterion_2() -> Result<(String, Vec<PointSet>), String> {
    let sizes = [101u64, 201, 401, 801];
    let family = ConstructionSpec::sharp(0, r(1, 1), r(3, 2));
    let report =
        run_scaling(&family, &sizes, &DotPair::new(r(1, 1), r(3, 2))).map_err(|e| e.to_string())?;
    for row in &report.rows {
        let lower = ((row.n - 1) / 2) * (row.n / 2);
        ensure(row.triples >= lower, || {
            format!("n = {}: {} < {lower}", row.n, row.triples)
        })?;
    }
    let slope = report.fitted_exponent.ok_or("no exponent fitted")?;
    ensure(slope >= 1.9, || format!("fitted exponent {slope} < 1.9"))?;
    ensure(report.asserted_checks_pass(), || {
        "asserted experiment checks failed".into()
    })?;
    let sets = sizes
        .iter()
        .map(|&n| family.with_n(n).generate().unwrap())
        .collect();
    Ok((
        format!("apex lower bound holds at n = 101..801; fitted exponent {slope}"),
        sets,
    ))
}

fn criterion_3() -> Outcome {
    let zero = DotPair::new(Rational::zero(), Rational::zero());
    let mut fit = Vec::new();
    for n in [8u64, 16, 32, 40] {
        let set = ConstructionSpec::zero(n)
            .generate()
            .map_err(|e| e.to_string())?;
        let brute = count_bruteforce(&set, &zero);
        let expected = 2 * (n / 2).pow(3);
        ensure(brute == expected, || {
            format!("n = {n}: {brute} != {expected}")
        })?;
        if n <= 32 {
            fit.push(FitRow {
                n,
                count: brute as f64,
            });
        }
    }
    let slope = fit_exponent(&fit).map_err(|e| e.to_string())?.slope;
    ensure(slope >= 2.9, || format!("fitted exponent {slope:.3} < 2.9"))?;
    Ok(format!(
        "2(n/2)^3 exact for n in {{8,16,32,40}}; exponent over {{8,16,32}} = {slope:.3}"
    ))
}

fn criterion_4(corpus: &[(&PointSet, DotPair)]) -> Outcome {
    let mut checked = 0;
    let mut worst = 0.0f64;
    for (idx, (set, pair)) in corpus.iter().enumerate() {
        if !pair.both_nonzero() || set.contains_origin() {
            continue;
        }
        let n = set.len() as u64;
        // count_via_ab itself rejects any A pair above 4 or radial line above n
        let split = count_via_ab(set, pair).map_err(|e| format!("set {idx}: {e}"))?;
        ensure(split.max_a_pair_triples <= 4, || {
            format!("set {idx}: A pair above 4")
        })?;
        ensure(split.triples_from_a <= 4 * split.a_pairs, || {
            format!("set {idx}: A total above 4|A|")
        })?;
        ensure(split.per_radial_b.values().all(|&t| t <= n), || {
            format!("set {idx}: radial B above n")
        })?;
        let report = verify_general_bound(set, pair).map_err(|e| e.to_string())?;
        ensure(report.passed && report.triples <= 5 * n * n, || {
            format!("set {idx}: {report:?}")
        })?;
        worst = worst.max(report.ratio);
        checked += 1;
    }
    Ok(format!(
        "{checked} sets with nonzero targets; max Π/n² = {worst:.3} (bound 5)"
    ))
}

fn criterion_5() -> Outcome {
    let mut rng = SplitMix64::seed_from_u64(41);
    let nonzero = |rng: &mut SplitMix64| loop {
        let v = r(draw(rng, -9, 9), draw(rng, 1, 5));
        if !v.is_zero() {
            return v;
        }
    };
    let point = |rng: &mut SplitMix64| loop {
        let p = Point::new(
            r(draw(rng, -5, 5), draw(rng, 1, 4)),
            r(draw(rng, -5, 5), draw(rng, 1, 4)),
        );
        if !p.is_origin() {
            return p;
        }
    };
    let trials = 20_000;
    let mut coincident = 0;
    for i in 0..trials {
        let q = point(&mut rng);
        let alpha = nonzero(&mut rng);
        let (rr, beta) = match i % 3 {
            // forced coincidence, including opposite signs
            0 => {
                let t = nonzero(&mut rng);
                (q.scale(&t), &alpha * &t)
            }
            // same radial line, generic targets
            1 => (q.scale(&nonzero(&mut rng)), nonzero(&mut rng)),
            _ => (point(&mut rng), nonzero(&mut rng)),
        };
        let got = lines_coincide(&q, &alpha, &rr, &beta).map_err(|e| e.to_string())?;
        let oracle = alpha_line(&q, &alpha) == alpha_line(&rr, &beta);
        ensure(got == oracle, || {
            format!("mismatch at q={q} alpha={alpha} r={rr} beta={beta}")
        })?;
        if got {
            coincident += 1;
            ensure(
                radial_direction(&q).unwrap() == radial_direction(&rr).unwrap(),
                || format!("coincident lines on different radial lines: q={q} r={rr}"),
            )?;
            ensure(q.scale(&beta) == rr.scale(&alpha), || {
                format!("beta q != alpha r at q={q} r={rr}")
            })?;
        }
    }
    Ok(format!(
        "{trials} instances, {coincident} coincident, all agree with canonical equality"
    ))
}

fn criterion_6(corpus: &[(&PointSet, DotPair)], separated: &[(PointSet, DotPair)]) -> Outcome {
    for (idx, (set, pair)) in corpus.iter().enumerate() {
        let profile = incidence_profile(set, pair);
        let report = check_dyadic_identities(&dyadic_decompose(&profile), &profile);
        ensure(report.holds(), || format!("set {idx}: {report:?}"))?;
    }
    let mut tight = 0;
    for (set, pair) in separated {
        let eps_sq = min_separation_sq(set).map_err(|e| e.to_string())?;
        let report = check_line_capacity(set, pair, &eps_sq).map_err(|e| e.to_string())?;
        ensure(report.passed, || {
            format!("{}: {report:?}", set.provenance())
        })?;
        if report.max_alpha.max(report.max_beta) * 2 >= report.capacity {
            tight += 1;
        }
    }
    Ok(format!(
        "brackets hold on {} sets; capacity holds on {} separated sets ({tight} at >= half capacity)",
        corpus.len(),
        separated.len()
    ))
}

fn separation_run(threads: usize) -> Result<ExperimentReport, String> {
    with_threads(threads, || {
        run_separation_experiment(
            &[256, 1024, 4096],
            &r(2, 1),
            &DotPair::new(r(1, 1), r(1, 1)),
            7,
        )
    })
    .and_then(|r| r)
    .map_err(|e| e.to_string())
}

fn criterion_7(report: &ExperimentReport) -> Outcome {
    for row in &report.rows {
        let name = format!("separation n={}", row.n);
        let check = report
            .check(&name)
            .ok_or_else(|| format!("missing check {name}"))?;
        ensure(check.passed, || format!("{name} failed: {}", check.detail))?;
    }
    let slope = report.incidence_exponent.ok_or("no incidence exponent")?;
    ensure(slope <= 4.0 / 3.0 + 0.15, || {
        format!("incidence exponent {slope} > 4/3 + 0.15")
    })?;
    let trend = report.constant_trend_slope.ok_or("no constant trend")?;
    ensure(trend <= 0.1, || {
        format!("constant trend slope {trend} > 0.1")
    })?;
    ensure(report.asserted_checks_pass(), || {
        "asserted experiment checks failed".into()
    })?;
    let constants: Vec<String> = report
        .rows
        .iter()
        .map(|r| format!("{}", r.implied_constant.unwrap_or(f64::NAN)))
        .collect();
    Ok(format!(
        "separation exact at n = 256, 1024, 4096; incidence exponent {slope}; C(n) = [{}], trend {trend}",
        constants.join(", ")
    ))
}

fn criterion_8() -> Outcome {
    let report =
        is_s_adaptable(&grid_set(1024).unwrap(), &r(2, 1), 100.0).map_err(|e| e.to_string())?;
    ensure(report.min_sq_separation == r(1, 1024), || {
        format!("grid separation {} != 1/1024", report.min_sq_separation)
    })?;
    ensure(report.separation_pass, || {
        "grid fails separation at s = 2".into()
    })?;
    let fixture = PointSet::new(
        vec![
            Point::from_ints(0, 0),
            Point::from_ints(1, 0),
            Point::from_ints(0, 1),
        ],
        "fixture",
    )
    .unwrap();
    let energy = riesz_energy(&fixture, &r(2, 1)).map_err(|e| e.to_string())?;
    let err = (energy - 5.0 / 3.0).abs();
    ensure(err <= 1e-12, || {
        format!("energy {energy} differs from 5/3 by {err:e}")
    })?;
    Ok(format!(
        "grid(1024) separation = 1/1024 exactly; fixture energy error {err:e}"
    ))
}

fn strip_elapsed(value: &mut Value) {
    match value {
        Value::Object(map) => {
            map.remove("elapsed_ms");
            map.values_mut().for_each(strip_elapsed);
        }
        Value::Array(items) => items.iter_mut().for_each(strip_elapsed),
        _ => {}
    }
}

fn criterion_9(first: &ExperimentReport) -> Outcome {
    let second = separation_run(4)?;
    let canonical = |report: &ExperimentReport| {
        let mut v = serde_json::to_value(report).unwrap();
        strip_elapsed(&mut v);
        serde_json::to_string_pretty(&v).unwrap()
    };
    let (a, b) = (canonical(first), canonical(&second));
    ensure(a == b, || "reports differ between 1 and 4 threads".into())?;
    Ok(format!(
        "1-thread and 4-thread reports identical ({} bytes, elapsed_ms removed)",
        a.len()
    ))
}

fn main() {
    let mut results: Vec<(u32, Outcome, f64)> = Vec::new();
    let mut timed = |id: u32, f: &mut dyn FnMut() -> Outcome| {
        let start = Instant::now();
        let outcome = f();
        results.push((id, outcome, start.elapsed().as_secs_f64()));
    };

    let random = random_corpus();
    timed(1, &mut || criterion_1(&random));

    let mut sharp_sets = Vec::new();
    timed(2, &mut || {
        criterion_2().map(|(msg, sets)| {
            sharp_sets = sets;
            msg
        })
    });
    timed(3, &mut || criterion_3());

    // everything generated in this run, each with a target pair
    let sharp_pair = DotPair::new(r(1, 1), r(3, 2));
    let mut separated: Vec<(PointSet, DotPair)> = Vec::new();
    for n in [16u64, 64, 256, 1024] {
        separated.push((grid_set(n).unwrap(), DotPair::new(r(1, 1), r(1, 2))));
    }
    for (n, s) in [
        (256u64, r(2, 1)),
        (256, r(7, 4)),
        (1024, r(2, 1)),
        (1024, r(5, 3)),
        (4096, r(2, 1)),
    ] {
        separated.push((
            perturbed_grid(n, &s, 7).unwrap(),
            DotPair::new(r(1, 1), r(1, 1)),
        ));
    }
    let mut corpus: Vec<(&PointSet, DotPair)> =
        random.iter().map(|(s, p)| (s, p.clone())).collect();
    corpus.extend(sharp_sets.iter().map(|s| (s, sharp_pair.clone())));
    corpus.extend(separated.iter().map(|(s, p)| (s, p.clone())));

    timed(4, &mut || criterion_4(&corpus));
    timed(5, &mut || criterion_5());
    timed(6, &mut || criterion_6(&corpus, &separated));

    let mut base_report = None;
    timed(7, &mut || {
        let report = separation_run(1)?;
        let msg = criterion_7(&report);
        base_report = Some(report);
        msg
    });
    timed(8, &mut || criterion_8());
    timed(9, &mut || match &base_report {
        Some(report) => criterion_9(report),
        None => Err("criterion 7 run did not produce a report".into()),
    });

    let mut failed = 0;
    for (id, outcome, secs) in &results {
        match outcome {
            Ok(msg) => println!("criterion {id}: PASS ({secs:.2}s) {msg}"),
            Err(msg) => {
                failed += 1;
                println!("criterion {id}: FAIL ({secs:.2}s) {msg}");
            }
        }
    }
    if failed > 0 {
        eprintln!("{failed} acceptance criteria failed");
        std::process::exit(1);
    }
}
