mod common;

use common::*;
use num_traits::Zero;
use proptest::prelude::*;

use rkt_lab_core::exact_arith::IntMatrix;
use rkt_lab_core::harness::{gen_polytope, gen_unimodular, Rng};
use rkt_lab_core::polytope::{ApexRule, Polytope};

#[test]
fn two_triangulations_agree() {
    for n in 2..=4 {
        for seed in 0..40 {
            let p = gen_polytope(seed, n, n + 4, 4).unwrap();
            assert_eq!(p.volume_with(ApexRule::Lowest), p.volume_with(ApexRule::Highest), "n = {n}, seed = {seed}");
        }
    }
}

#[test]
fn area_matches_shoelace() {
    for seed in 0..100 {
        let p = gen_polytope(seed, 2, 7, 6).unwrap();
        assert_eq!(p.volume(), shoelace_area(p.vertices()), "seed = {seed}");
    }
}

#[test]
fn volume_matches_ehrhart_leading_coefficient() {
    for n in 2..=3 {
        for seed in 0..15 {
            let p = gen_polytope(seed, n, n + 3, 3).unwrap();
            let mut counts = vec![1usize];
            counts.extend((1..=n as u64).map(|m| p.lattice_points(m).unwrap().len()));
            assert_eq!(p.volume(), ehrhart_volume(&counts), "n = {n}, seed = {seed}");
        }
    }
}

#[test]
fn lattice_points_match_brute_force() {
    for n in 2..=3 {
        for seed in 0..10 {
            let p = gen_polytope(seed + 100, n, n + 2, 3).unwrap();
            for m in 1..=2 {
                let fast: Vec<Vec<i64>> = p
                    .lattice_points(m)
                    .unwrap()
                    .iter()
                    .map(|v| v.iter().map(|x| x.try_into().unwrap()).collect())
                    .collect();
                let slow = brute_lattice_points(p.vertices(), m as i64);
                assert_eq!(fast, slow, "n = {n}, seed = {seed}, m = {m}");
            }
        }
    }
}

#[test]
fn hull_vertices_are_extreme_input_points() {
    let mut rng = Rng::new(5);
    for n in 2..=4 {
        for _ in 0..20 {
            let pts = random_points(&mut rng, n + 5, n, -3, 3);
            let p = Polytope::from_int_points(&pts).unwrap();
            if !p.is_full_dimensional() {
                continue;
            }
            let qpts: Vec<Vec<Q>> = pts.iter().map(|v| to_q(v)).collect();
            for v in p.vertices() {
                assert!(qpts.contains(v));
                // A vertex is not in the hull of the other points.
                let others: Vec<Vec<Q>> = qpts.iter().filter(|w| *w != v).cloned().collect();
                assert!(!in_hull_caratheodory(&others, v));
            }
            for x in &qpts {
                assert!(p.contains(x));
            }
            for f in p.facets().unwrap() {
                let on: usize = p
                    .vertices()
                    .iter()
                    .filter(|v| {
                        let s: Q = f.normal.iter().zip(v.iter()).map(|(a, x)| Q::from_integer(a.clone()) * x).sum();
                        assert!(s <= f.offset);
                        s == f.offset
                    })
                    .count();
                assert!(on >= n);
            }
        }
    }
}

#[test]
fn support_function_is_additive() {
    let mut rng = Rng::new(17);
    for n in 2..=4 {
        for seed in 0..15 {
            let p = gen_polytope(seed, n, n + 2, 3).unwrap();
            let r = gen_polytope(seed + 1000, n, n + 2, 3).unwrap();
            let s = p.minkowski_sum(&r).unwrap();
            for _ in 0..10 {
                let u = to_q(&random_points(&mut rng, 1, n, -5, 5)[0]);
                assert_eq!(s.support(&u), p.support(&u) + r.support(&u));
            }
            for v in s.vertices() {
                let decomposes = p.vertices().iter().any(|a| r.vertices().iter().any(|b| {
                    a.iter().zip(b).map(|(x, y)| x + y).collect::<Vec<_>>() == *v
                }));
                assert!(decomposes);
            }
        }
    }
}

#[test]
fn product_and_box_volumes() {
    let a = gen_polytope(3, 2, 5, 4).unwrap();
    let b = gen_polytope(4, 1, 3, 4).unwrap();
    assert_eq!(a.product(&b).volume(), a.volume() * b.volume());
    assert_eq!(Polytope::lattice_box(&[2, 3, 5]).volume(), q(30));
    assert_eq!(Polytope::standard_simplex(4).volume(), qf(1, 24));
}

#[test]
fn relative_volume_of_faces() {
    // A segment from 0 to (2, 4) has two lattice steps.
    let seg = Polytope::from_int_points(&[vec![0, 0], vec![2, 4]]).unwrap();
    assert_eq!(seg.relative_volume(), q(2));
    // The face x + y + z = 2 of 2·Δ₃ is 2·Δ₂ in its own lattice.
    let tri = Polytope::from_int_points(&[vec![2, 0, 0], vec![0, 2, 0], vec![0, 0, 2]]).unwrap();
    assert_eq!(tri.relative_volume(), q(2));
}

#[test]
fn json_round_trip() {
    for seed in 0..20 {
        let p = gen_polytope(seed, 3, 6, 5).unwrap();
        let back = Polytope::from_json_str(&p.to_json_string()).unwrap();
        assert_eq!(p, back);
    }
    let p = Polytope::from_json_str(r#"{"dim":2,"vertices":[[0,"1/2"],[1,0],[0,0]]}"#).unwrap();
    assert_eq!(p.volume(), qf(1, 4));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn translation_preserves_volume(seed in 0u64..10_000, t in prop::collection::vec(-5i64..5, 3)) {
        let p = gen_polytope(seed, 3, 5, 3).unwrap();
        let moved = p.translate(&to_q(&t)).unwrap();
        prop_assert_eq!(moved.volume(), p.volume());
        prop_assert_eq!(moved.num_vertices(), p.num_vertices());
    }

    #[test]
    fn unimodular_image_preserves_volume(seed in 0u64..10_000) {
        let mut rng = Rng::new(seed);
        let u = gen_unimodular(&mut rng, 3, 4);
        let p = gen_polytope(seed, 3, 5, 3).unwrap();
        prop_assert_eq!(p.linear_image(&u).unwrap().volume(), p.volume());
    }

    #[test]
    fn linear_image_scales_by_determinant(seed in 0u64..10_000, d in prop::collection::vec(1i64..4, 2)) {
        let p = gen_polytope(seed, 2, 4, 3).unwrap();
        let m = IntMatrix::from_rows(&[vec![d[0], 1], vec![0, d[1]]]).unwrap();
        prop_assert_eq!(p.linear_image(&m).unwrap().volume(), p.volume() * q(d[0] * d[1]));
    }

    #[test]
    fn dilation_scales_volume(seed in 0u64..10_000, num in 1i64..5, den in 1i64..4) {
        let p = gen_polytope(seed, 3, 5, 3).unwrap();
        let l = qf(num, den);
        let expected = p.volume() * &l * &l * &l;
        prop_assert_eq!(p.dilate(&l).unwrap().volume(), expected);
    }

    #[test]
    fn hull_contains_its_points(pts in prop::collection::vec(prop::collection::vec(-4i64..4, 2), 3..9)) {
        let p = Polytope::from_int_points(&pts).unwrap();
        for x in &pts {
            prop_assert!(p.contains(&to_q(x)));
        }
        if !p.is_full_dimensional() {
            prop_assert!(p.volume().is_zero());
        }
    }
}
