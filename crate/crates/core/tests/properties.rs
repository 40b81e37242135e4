use std::collections::BTreeSet;

use dotpairs::adaptability::{min_separation_sq, riesz_energy};
use dotpairs::counting::{count_bruteforce, count_via_ab, incidence_profile};
use dotpairs::geometry::{alpha_line, dot, lines_coincide, radial_direction};
use dotpairs::incidence::{check_dyadic_identities, check_line_capacity, dyadic_decompose};
use dotpairs::io::{format_points, parse_points_str};
use dotpairs::{DotPair, Point, PointSet, Rational};
use proptest::prelude::*;

fn rational(max_num: i64, max_den: i64) -> impl Strategy<Value = Rational> {
    (-max_num..=max_num, 1..=max_den).prop_map(|(n, d)| Rational::new(n, d))
}

fn nonzero_rational() -> impl Strategy<Value = Rational> {
    rational(6, 4).prop_filter("nonzero", |r| !r.is_zero())
}

fn point() -> impl Strategy<Value = Point> {
    (rational(4, 3), rational(4, 3)).prop_map(|(x, y)| Point::new(x, y))
}

fn non_origin_point() -> impl Strategy<Value = Point> {
    point().prop_filter("non-origin", |p| !p.is_origin())
}

fn point_set(max: usize) -> impl Strategy<Value = PointSet> {
    prop::collection::btree_set(point(), 1..=max)
        .prop_map(|pts: BTreeSet<Point>| PointSet::new(pts.into_iter().collect(), "prop").unwrap())
}

fn point_set_without_origin(max: usize) -> impl Strategy<Value = PointSet> {
    prop::collection::btree_set(non_origin_point(), 1..=max)
        .prop_map(|pts: BTreeSet<Point>| PointSet::new(pts.into_iter().collect(), "prop").unwrap())
}

/// A set together with targets realized by some pair of its points.
fn set_with_realized_pair(max: usize) -> impl Strategy<Value = (PointSet, DotPair)> {
    point_set_without_origin(max).prop_flat_map(|set| {
        let n = set.len();
        (Just(set), 0..n, 0..n, 0..n, 0..n).prop_map(|(set, a, b, c, d)| {
            let pts = set.points();
            let pair = DotPair::new(dot(&pts[a], &pts[b]), dot(&pts[c], &pts[d]));
            (set, pair)
        })
    })
}

/// Points in the unit square on a coarse lattice, so separations are real.
fn unit_square_set(max: usize) -> impl Strategy<Value = PointSet> {
    prop::collection::btree_set((0i64..=8, 0i64..=8), 2..=max).prop_map(|cells| {
        let pts = cells
            .into_iter()
            .map(|(i, j)| Point::new(Rational::new(i, 8), Rational::new(j, 8)))
            .collect();
        PointSet::new(pts, "lattice").unwrap()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn canonical_line_is_exactly_the_alpha_locus(p in non_origin_point(), alpha in nonzero_rational(), t in rational(9, 5), z in point()) {
        let line = alpha_line(&p, &alpha).unwrap();
        // a point known to be on the locus: base point plus a step along it
        let base = p.scale(&(&alpha / dot(&p, &p)));
        let on = Point::new(&base.x - &t * &p.y, &base.y + &t * &p.x);
        prop_assert_eq!(dot(&p, &on), alpha.clone());
        prop_assert!(line.contains(&on));
        prop_assert_eq!(line.contains(&z), dot(&p, &z) == alpha);
    }

    #[test]
    fn canonical_line_ignores_joint_scaling(p in non_origin_point(), alpha in nonzero_rational(), t in nonzero_rational()) {
        prop_assert_eq!(alpha_line(&p, &alpha), alpha_line(&p.scale(&t), &(&alpha * &t)));
    }

    #[test]
    fn coincidence_matches_canonical_equality(
        q in non_origin_point(),
        alpha in nonzero_rational(),
        r in non_origin_point(),
        beta in nonzero_rational(),
    ) {
        let got = lines_coincide(&q, &alpha, &r, &beta).unwrap();
        prop_assert_eq!(got, alpha_line(&q, &alpha) == alpha_line(&r, &beta));
        if got {
            prop_assert_eq!(radial_direction(&q).unwrap(), radial_direction(&r).unwrap());
            prop_assert_eq!(q.scale(&beta), r.scale(&alpha));
        }
    }

    #[test]
    fn coincidence_on_forced_proportional_inputs(q in non_origin_point(), alpha in nonzero_rational(), t in nonzero_rational()) {
        // r = t·q with β = t·α always shares q's α-line
        let r = q.scale(&t);
        let beta = &alpha * &t;
        prop_assert!(lines_coincide(&q, &alpha, &r, &beta).unwrap());
        prop_assert_eq!(alpha_line(&q, &alpha), alpha_line(&r, &beta));
    }

    #[test]
    fn radial_direction_is_scale_invariant(p in non_origin_point(), t in nonzero_rational()) {
        prop_assert_eq!(radial_direction(&p).unwrap(), radial_direction(&p.scale(&t)).unwrap());
    }

    #[test]
    fn three_counts_agree((set, pair) in set_with_realized_pair(9)) {
        let brute = count_bruteforce(&set, &pair);
        prop_assert_eq!(incidence_profile(&set, &pair).total_triples, brute);
        prop_assume!(pair.both_nonzero());
        let split = count_via_ab(&set, &pair).unwrap();
        prop_assert_eq!(split.total_triples(), brute);
        let n = set.len() as u64;
        prop_assert_eq!(split.a_pairs + split.b_pairs, n * n);
        prop_assert!(split.max_a_pair_triples <= 4);
        prop_assert!(split.per_radial_b.values().all(|&t| t <= n));
    }

    #[test]
    fn brute_and_quadratic_agree_with_zero_targets(set in point_set(9), beta in rational(3, 2)) {
        let pair = DotPair::new(Rational::zero(), beta);
        prop_assert_eq!(incidence_profile(&set, &pair).total_triples, count_bruteforce(&set, &pair));
    }

    #[test]
    fn counts_are_scaling_covariant((set, pair) in set_with_realized_pair(8), t in rational(5, 4).prop_filter("positive", |t| t.is_positive())) {
        let scaled = set.scaled(&t).unwrap();
        let t2 = &t * &t;
        let scaled_pair = DotPair::new(&pair.alpha * &t2, &pair.beta * &t2);
        prop_assert_eq!(count_bruteforce(&scaled, &scaled_pair), count_bruteforce(&set, &pair));
        prop_assert_eq!(
            incidence_profile(&scaled, &scaled_pair).total_triples,
            incidence_profile(&set, &pair).total_triples
        );
        if pair.both_nonzero() {
            prop_assert_eq!(
                count_via_ab(&scaled, &scaled_pair).unwrap().total_triples(),
                count_via_ab(&set, &pair).unwrap().total_triples()
            );
        }
    }

    #[test]
    fn swapping_targets_preserves_the_count((set, pair) in set_with_realized_pair(9)) {
        prop_assert_eq!(count_bruteforce(&set, &pair), count_bruteforce(&set, &pair.swapped()));
        prop_assert_eq!(
            incidence_profile(&set, &pair).total_triples,
            incidence_profile(&set, &pair.swapped()).total_triples
        );
    }

    #[test]
    fn dyadic_buckets_partition_and_bracket((set, pair) in set_with_realized_pair(10)) {
        let profile = incidence_profile(&set, &pair);
        let stats = dyadic_decompose(&profile);
        prop_assert_eq!(stats.total(), set.len() as u64);
        prop_assert!(check_dyadic_identities(&stats, &profile).holds());
    }

    #[test]
    fn line_capacity_holds_at_measured_separation(set in unit_square_set(12), alpha in rational(8, 8), beta in rational(8, 8)) {
        let eps_sq = min_separation_sq(&set).unwrap();
        let report = check_line_capacity(&set, &DotPair::new(alpha, beta), &eps_sq).unwrap();
        prop_assert!(report.passed, "{:?}", report);
    }

    #[test]
    fn separation_is_order_and_translation_invariant(set in unit_square_set(10), dx in rational(3, 7), dy in rational(3, 7), rot in 0usize..10) {
        let base = min_separation_sq(&set).unwrap();
        let mut pts = set.points().to_vec();
        let k = rot % pts.len();
        pts.rotate_left(k);
        pts.reverse();
        let permuted = PointSet::new(pts.clone(), "permuted").unwrap();
        prop_assert_eq!(min_separation_sq(&permuted).unwrap(), base.clone());
        let moved: Vec<Point> = pts.iter().map(|p| Point::new(&p.x + &dx, &p.y + &dy)).collect();
        prop_assert_eq!(min_separation_sq(&PointSet::new(moved, "moved").unwrap()).unwrap(), base);
    }

    #[test]
    fn energy_increases_with_s_below_unit_distance(set in unit_square_set(8), s in 1u32..6) {
        // halve the lattice so every distance is below 1
        let small = set.scaled(&Rational::new(1, 2)).unwrap();
        let lo = riesz_energy(&small, &Rational::new(s as i64, 2)).unwrap();
        let hi = riesz_energy(&small, &Rational::new(s as i64 + 1, 2)).unwrap();
        prop_assert!(hi > lo, "{} !> {}", hi, lo);
    }

    #[test]
    fn energy_scales_as_t_to_minus_s(set in unit_square_set(8), t in (1i64..=9, 1i64..=9), s in (1i64..=9, 1i64..=4)) {
        let t = Rational::new(t.0, t.1);
        let s = Rational::new(s.0, s.1);
        let base = riesz_energy(&set, &s).unwrap();
        let scaled = riesz_energy(&set.scaled(&t).unwrap(), &s).unwrap();
        let expected = base * t.to_f64().powf(-s.to_f64());
        prop_assert!(((scaled - expected) / expected).abs() < 1e-10);
    }

    #[test]
    fn points_survive_csv_round_trip(set in point_set(20)) {
        let text = format_points(&set);
        prop_assert_eq!(parse_points_str(&text, "again").unwrap(), set);
    }
}
