use grassblow_core::atlas::*;
use grassblow_core::fixtures::Fixtures;
use grassblow_core::grassmann::{
    enumerate_plucker_indices, plain_index, plucker_minor, projectively_equal, stratum_classify, Params,
    SignConvention,
};
use grassblow_core::lattice::normalized_triples;
use grassblow_core::matrix::ExactMatrix;
use grassblow_core::rational::{frac, q, RationalSampler, Q};
use num_traits::{One, Zero};
use proptest::prelude::*;

const CONVS: [SignConvention; 2] = [SignConvention::Listed, SignConvention::Ascending];

fn params(s: usize, p: usize, n: usize) -> Params {
    Params::new(s, p, n).unwrap()
}

/// Number of k-tuples over 1..=bound that are injective and land in `range`.
fn tuple_count(k: usize, bound: usize, range: std::ops::RangeInclusive<usize>) -> usize {
    if k == 0 {
        return 1;
    }
    let mut count = 0;
    let total = bound.pow(k as u32);
    for code in 0..total {
        let mut t = Vec::with_capacity(k);
        let mut c = code;
        for _ in 0..k {
            t.push(c % bound + 1);
            c /= bound;
        }
        let distinct = t.iter().collect::<std::collections::BTreeSet<_>>().len() == k;
        if distinct && t.iter().all(|x| range.contains(x)) {
            count += 1;
        }
    }
    count
}

#[test]
fn chart_counts_small() {
    let p = params(4, 3, 7);
    assert_eq!(enumerate_charts(&p, 1).unwrap().len(), 8);
    assert_eq!(enumerate_charts(&p, 0).unwrap().len(), 36);
    // l = p with s = p: the upper column range is 1..l and nothing else degenerates
    let p = params(3, 3, 6);
    assert_eq!(enumerate_charts(&p, 3).unwrap().len(), 6 * 6);
    assert!(enumerate_charts(&p, 4).is_err());
    assert!(enumerate_charts(&params(2, 3, 8), 0).is_err());
}

#[test]
fn chart_counts_match_tuple_oracle() {
    for pr in normalized_triples(10) {
        let (s, p, n, r) = (pr.s, pr.p, pr.n, pr.r());
        for l in 0..=r {
            let lower = r - l;
            let oracle = tuple_count(lower, p, l + 1..=p)
                * tuple_count(lower, n, s + l + 1..=n)
                * tuple_count(l, p, 1..=l)
                * tuple_count(l, n, 1..=s - p + l);
            let charts = enumerate_charts(&pr, l).unwrap();
            assert_eq!(charts.len(), oracle, "{pr} l={l}");
            assert_eq!(chart_count(&pr, l).unwrap(), oracle);
            let distinct: std::collections::HashSet<_> = charts.iter().collect();
            assert_eq!(distinct.len(), charts.len());
        }
    }
}

#[test]
fn zero_point_gives_base_frame() {
    let p = params(5, 3, 9);
    for l in 0..=3 {
        for tau in enumerate_charts(&p, l).unwrap().into_iter().take(5) {
            let m = gamma_eval(&p, &tau, &zero_point(&p, &tau).unwrap()).unwrap();
            let mut frame = ExactMatrix::zeros(3, 9);
            for row in 1..=3 {
                let col = if row <= l { 5 + row } else { 5 - 3 + row };
                frame.set(row - 1, col - 1, Q::one());
            }
            assert_eq!(m, frame);
            // the base frame lies on the closed stratum of type (p-l, l)
            let rep = stratum_classify(&m, 5).unwrap();
            assert_eq!((rep.dim_low, rep.dim_high), (3 - l, l));
        }
    }
}

#[test]
fn golden_four_by_eight() {
    let fx = Fixtures::load().golden_chart;
    let p = fx.params();
    let tau = fx.chart();
    let mut pt = zero_point(&p, &tau).unwrap();
    // pivots b37, b48, a11, a22 and free entries, all distinct
    let (b37, b48, a11, a22) = (q(2), q(3), q(5), q(7));
    let (xi47, xi38, xi21, xi12) = (q(11), q(13), frac(1, 2), frac(1, 3));
    pt.cascades[0].pivot = b37.clone();
    pt.cascades[0].col_xi.insert(4, xi47.clone());
    pt.cascades[0].row_xi.insert(8, xi38.clone());
    pt.cascades[1].pivot = b48.clone();
    pt.cascades[2].pivot = a11.clone();
    pt.cascades[2].col_xi.insert(2, xi21.clone());
    pt.cascades[2].row_xi.insert(2, xi12.clone());
    pt.cascades[3].pivot = a22.clone();
    let xs = [q(17), q(19), q(23), q(29)];
    for (v, key) in xs.iter().zip([(1, 7), (1, 8), (2, 7), (2, 8)]) {
        pt.x.insert(key, v.clone());
    }
    let ys = [q(-1), q(-2), q(-3), q(-4)];
    for (v, key) in ys.iter().zip([(3, 1), (3, 2), (4, 1), (4, 2)]) {
        pt.y.insert(key, v.clone());
    }
    assert_eq!(pt.coordinate_count(), 16);
    let (z, o) = (q(0), q(1));
    let expected = ExactMatrix::from_rows(vec![
        vec![a11.clone(), &a11 * &xi12, z.clone(), z.clone(), o.clone(), z.clone(), xs[0].clone(), xs[1].clone()],
        vec![&a11 * &xi21, &a11 * (&xi12 * &xi21 + &a22), z.clone(), z.clone(), z.clone(), o.clone(), xs[2].clone(), xs[3].clone()],
        vec![ys[0].clone(), ys[1].clone(), o.clone(), z.clone(), z.clone(), z.clone(), b37.clone(), &b37 * &xi38],
        vec![ys[2].clone(), ys[3].clone(), z.clone(), o.clone(), z.clone(), z.clone(), &b37 * &xi47, &b37 * (&xi47 * &xi38 + &b48)],
    ])
    .unwrap();
    let m = gamma_eval(&p, &tau, &pt).unwrap();
    assert_eq!(m, expected);
    let pattern = two_cascade_pattern(&p, &tau, &pt).unwrap();
    assert_eq!(pattern.len(), 2);
    for e in &pattern {
        assert_eq!(e.expected, e.actual, "entry ({}, {})", e.row, e.col);
        assert_eq!(&e.actual, expected.at(e.row, e.col));
    }
}

#[test]
fn single_cascade_block() {
    let p = params(5, 3, 9);
    let tau = ChartIndex { l: 0, rows: vec![2, 1, 3], cols: vec![8, 6, 7] };
    let mut rng = RationalSampler::new(4);
    let pt = random_point(&p, &tau, &mut rng).unwrap();
    let m = gamma_eval(&p, &tau, &pt).unwrap();
    let c = &pt.cascades[0];
    // the pivot row and column carry exactly the first cascade
    assert_eq!(m.at(2, 8), &c.pivot);
    for col in [6, 7, 9] {
        assert_eq!(*m.at(2, col), &c.pivot * &c.row_xi[&col]);
    }
    for row in [1, 3] {
        assert_eq!(*m.at(row, 8), &c.pivot * &c.col_xi[&row]);
    }
}

#[test]
fn shape_and_chart_errors() {
    let p = params(4, 3, 7);
    let tau = base_chart(&p, 1).unwrap();
    let mut pt = zero_point(&p, &tau).unwrap();
    pt.x.insert((9, 9), q(1));
    assert!(gamma_eval(&p, &tau, &pt).is_err());
    let bad = ChartIndex { l: 1, rows: vec![2, 2, 1], cols: vec![6, 7, 1] };
    assert!(zero_point(&p, &bad).is_err());
}

#[test]
fn recovery_inverts_gamma_on_base_charts() {
    let mut rng = RationalSampler::new(Fixtures::load().seeds.atlas_points);
    for pr in normalized_triples(9) {
        for l in 0..=pr.r() {
            let tau = base_chart(&pr, l).unwrap();
            for conv in CONVS {
                let pt = random_point(&pr, &tau, &mut rng).unwrap();
                let m = gamma_eval(&pr, &tau, &pt).unwrap();
                assert_eq!(recover_at_level(&pr, l, &m, conv).unwrap(), pt, "{pr} l={l} {conv:?}");
            }
        }
    }
}

#[test]
fn first_pivot_is_a_minor_ratio() {
    let p = params(5, 3, 9);
    let mut rng = RationalSampler::new(21);
    for j in 1..=3 {
        let tau = base_chart(&p, j - 1).unwrap();
        for _ in 0..5 {
            let pt = random_point(&p, &tau, &mut rng).unwrap();
            let m = gamma_eval(&p, &tau, &pt).unwrap();
            let rec = ratio_coordinates(&p, j, &m, SignConvention::Listed).unwrap();
            let minor = |k| plucker_minor(&m, &plain_index(&p, k).unwrap(), SignConvention::Listed).unwrap();
            if j < 3 {
                // lower cascade 1 pivot b
                assert_eq!(&rec.cascades[0].pivot * minor(j - 1), minor(j));
            }
            if j >= 2 {
                // upper cascade 1 pivot a telescopes the other way
                let a = &rec.cascades[3 - (j - 1)].pivot;
                assert_eq!(a * minor(j - 1), minor(j - 2));
            }
        }
    }
}

#[test]
fn recovery_reports_indeterminate_minors() {
    let p = params(4, 3, 7);
    let tau = base_chart(&p, 1).unwrap();
    let mut pt = zero_point(&p, &tau).unwrap();
    for c in &mut pt.cascades {
        c.pivot = q(1);
    }
    pt.cascades[0].pivot = q(0);
    let m = gamma_eval(&p, &tau, &pt).unwrap();
    let err = ratio_coordinates(&p, 2, &m, SignConvention::Listed).unwrap_err();
    assert!(matches!(err, grassblow_core::Error::Indeterminate(ref s) if s.contains("P_I2")), "{err}");
    let other = ChartIndex { l: 1, rows: vec![3, 2, 1], cols: vec![6, 7, 2] };
    assert!(matches!(
        transition_check(&p, &tau, &other, &pt, SignConvention::Listed),
        Err(grassblow_core::Error::Indeterminate(_))
    ));
}

#[test]
fn self_transition_is_consistent() {
    let p = params(5, 3, 9);
    let mut rng = RationalSampler::new(8);
    for tau in enumerate_charts(&p, 2).unwrap().into_iter().step_by(7) {
        let pt = random_point(&p, &tau, &mut rng).unwrap();
        let rep = transition_check(&p, &tau, &tau, &pt, SignConvention::Ascending).unwrap();
        assert!(rep.consistent);
        assert_eq!(recover_in_chart(&p, &tau, &gamma_eval(&p, &tau, &pt).unwrap(), SignConvention::Listed).unwrap(), pt);
    }
}

#[test]
fn two_charts_agree_on_overlap() {
    let p = params(4, 3, 7);
    let charts = enumerate_charts(&p, 1).unwrap();
    let (a, b) = (&charts[0], &charts[5]);
    assert_ne!(a, b);
    let mut rng = RationalSampler::new(Fixtures::load().seeds.transition);
    let mut done = 0;
    while done < 25 {
        let pt = random_point(&p, a, &mut rng).unwrap();
        match transition_check(&p, a, b, &pt, SignConvention::Listed) {
            Ok(rep) => {
                assert!(rep.consistent, "{:?}", rep.witness);
                done += 1;
            }
            Err(grassblow_core::Error::Indeterminate(_)) => continue,
            Err(e) => panic!("{e}"),
        }
    }
}

#[test]
fn fixture_transition_sweeps() {
    let fx = Fixtures::load();
    for case in &fx.transition_cases {
        let p = case.params();
        for l in [1, 2] {
            for conv in CONVS {
                let per_pair = if conv == SignConvention::Listed && Some(l) == case.l {
                    fx.sample_counts.transition_points_per_pair
                } else {
                    3
                };
                let sweep = transition_sweep(&p, l, per_pair, fx.seeds.transition, conv, None).unwrap();
                assert!(sweep.passed(), "{p} l={l} {conv:?}: {sweep:?}");
                assert_eq!(sweep.consistent, sweep.pairs * per_pair);
            }
        }
    }
}

#[test]
fn rho_identities() {
    let fx = Fixtures::load();
    let mut rng = RationalSampler::new(fx.seeds.rho);
    let cases: Vec<Params> = fx.transition_cases.iter().map(|c| c.params()).collect();
    for p in cases {
        let r = p.r();
        for j in 1..=r {
            let tau = base_chart(&p, j - 1).unwrap();
            for _ in 0..fx.sample_counts.rho_points {
                let pt = random_point(&p, &tau, &mut rng).unwrap();
                assert_eq!(rho_eval(&p, j, &tau, j - 1, &pt, SignConvention::Listed).unwrap(), Q::one());
            }
            let pt = random_point(&p, &tau, &mut rng).unwrap();
            for m in 0..=r {
                let v = rho_eval(&p, j, &tau, m, &pt, SignConvention::Listed).unwrap();
                assert!(!v.is_zero(), "{p} j={j} m={m}");
            }
            let mut sparse = pt.clone();
            if let Some(v) = sparse.x.values_mut().next() {
                *v = q(0);
            }
            for m in 0..=r {
                rho_eval(&p, j, &tau, m, &sparse, SignConvention::Listed).unwrap();
            }
        }
    }
}

#[test]
fn rho_rejects_zero_pivots() {
    let p = params(4, 3, 7);
    let tau = base_chart(&p, 0).unwrap();
    let pt = zero_point(&p, &tau).unwrap();
    assert!(matches!(
        rho_eval(&p, 1, &tau, 2, &pt, SignConvention::Listed),
        Err(grassblow_core::Error::Domain(_))
    ));
    assert!(rho_eval(&p, 2, &tau, 1, &pt, SignConvention::Listed).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn gamma_has_full_rank(idx in 0usize..200, l_raw in 0usize..8, pick in 0usize..1000, seed in any::<u64>()) {
        let all = normalized_triples(9);
        let p = all[idx % all.len()];
        let l = l_raw % (p.r() + 1);
        let charts = enumerate_charts(&p, l).unwrap();
        let tau = &charts[pick % charts.len()];
        let mut rng = RationalSampler::new(seed);
        let pt = random_point(&p, tau, &mut rng).unwrap();
        prop_assert_eq!(pt.coordinate_count(), p.p * (p.n - p.p));
        let m = gamma_eval(&p, tau, &pt).unwrap();
        prop_assert_eq!(m.rank(), p.p);
    }

    #[test]
    fn recovery_round_trip_any_chart(idx in 0usize..200, l_raw in 0usize..8, pick in 0usize..1000, seed in any::<u64>(), asc in any::<bool>()) {
        let all = normalized_triples(9);
        let p = all[idx % all.len()];
        let l = l_raw % (p.r() + 1);
        let charts = enumerate_charts(&p, l).unwrap();
        let tau = &charts[pick % charts.len()];
        let conv = if asc { SignConvention::Ascending } else { SignConvention::Listed };
        let mut rng = RationalSampler::new(seed);
        let pt = random_point(&p, tau, &mut rng).unwrap();
        let m = gamma_eval(&p, tau, &pt).unwrap();
        let back = recover_in_chart(&p, tau, &m, conv).unwrap();
        prop_assert_eq!(&back, &pt);
        let idx = enumerate_plucker_indices(p.p, p.n).unwrap();
        let a: Vec<Q> = idx.iter().map(|i| plucker_minor(&m, i, conv).unwrap()).collect();
        let b: Vec<Q> = idx.iter().map(|i| plucker_minor(&gamma_eval(&p, tau, &back).unwrap(), i, conv).unwrap()).collect();
        prop_assert!(projectively_equal(&a, &b));
    }
}
