mod common;

use common::*;
use num_traits::Zero;

use rkt_lab_core::harness::{gen_polytope, Rng};
use rkt_lab_core::inequalities::{
    bezout_check, rkt_check, rkt_check_all_k, rkt_check_with, rkt_constant, rkt_general_check, strictness_probe,
    InequalityReport,
};
use rkt_lab_core::intersection::{mixed_volume_with, MvStrategy};
use rkt_lab_core::polytope::Polytope;

fn origin(d: usize) -> Polytope {
    Polytope::from_int_points(&[vec![0; d]]).unwrap()
}

fn mv_fresh(bodies: &[&Polytope]) -> Q {
    mixed_volume_with(bodies, MvStrategy::FreshHull).unwrap()
}

#[test]
fn constant_is_inverse_binomial() {
    for n in 2..=6 {
        for k in 1..n {
            assert_eq!(rkt_constant(n, k), Q::new(1.into(), binomial(n, k)));
        }
    }
}

/// For `B` in the first `k` coordinates, `C` in the last `n − k` and
/// `A = B + C`, every mixed term with the wrong number of `B`s vanishes, so
/// both sides equal `MV(B^k, C^{n−k})²`.
#[test]
fn complementary_summands_give_equality() {
    let mut rng = Rng::new(8);
    for n in 2..=4 {
        for k in 1..n {
            for _ in 0..5 {
                let bk = gen_polytope(rng.next_u64(), k, k + 2, 3).unwrap();
                let cnk = gen_polytope(rng.next_u64(), n - k, n - k + 2, 3).unwrap();
                let b = bk.product(&origin(n - k));
                let c = origin(k).product(&cnk);
                let a = b.minkowski_sum(&c).unwrap();
                let bc = Q::from_integer(factorial(k) * factorial(n - k)) * bk.volume() * cnk.volume();
                let r = rkt_check(&a, &b, &c, k).unwrap();
                assert_eq!(r.lhs, &bc * &bc, "n = {n}, k = {k}");
                assert_eq!(r.rhs, &bc * &bc);
                assert!(r.slack.is_zero());
            }
        }
    }
}

#[test]
fn simplex_product_triple_is_tight_with_unit_sides() {
    for n in 2..=5 {
        for k in 1..n {
            let dk = Polytope::standard_simplex(k);
            let dnk = Polytope::standard_simplex(n - k);
            let a = dk.product(&dnk);
            let b = dk.product(&origin(n - k));
            let c = origin(k).product(&dnk);
            let r = rkt_check(&a, &b, &c, k).unwrap();
            assert_eq!(r.rhs, q(1));
            assert_eq!(r.lhs, q(1));
        }
    }
}

#[test]
fn report_matches_independent_mixed_volumes() {
    for n in 2..=4 {
        for seed in 0..8 {
            let a = gen_polytope(seed, n, n + 2, 3).unwrap();
            let b = gen_polytope(seed + 100, n, n + 2, 3).unwrap();
            let c = gen_polytope(seed + 200, n, n + 2, 3).unwrap();
            let all = rkt_check_all_k(&a, &b, &c).unwrap();
            for k in 1..n {
                let rep = |p: &Polytope, t: usize| vec![p.clone(); t];
                let b_a: Vec<Polytope> = [rep(&b, k), rep(&a, n - k)].concat();
                let a_c: Vec<Polytope> = [rep(&a, k), rep(&c, n - k)].concat();
                let b_c: Vec<Polytope> = [rep(&b, k), rep(&c, n - k)].concat();
                let refs = |v: &[Polytope]| -> Q { mv_fresh(&v.iter().collect::<Vec<_>>()) };
                let lhs = refs(&b_a) * refs(&a_c);
                let a_n = mv_fresh(&vec![&a; n]);
                let rhs = Q::from_integer(factorial(k) * factorial(n - k)) / Q::from_integer(factorial(n)) * a_n * refs(&b_c);
                let r = &all[k - 1];
                assert_eq!((r.lhs.clone(), r.rhs.clone()), (lhs, rhs), "n = {n}, k = {k}");
                assert!(r.holds);
                assert_eq!(*r, rkt_check_with(&a, &b, &c, k, MvStrategy::FreshHull).unwrap());
            }
        }
    }
}

#[test]
fn general_form_reduces_to_the_three_body_form() {
    for seed in 0..10 {
        let a = gen_polytope(seed, 3, 5, 3).unwrap();
        let b = gen_polytope(seed + 1, 3, 5, 3).unwrap();
        let c = gen_polytope(seed + 2, 3, 5, 3).unwrap();
        let g = rkt_general_check(&a, &[&b], &[&c, &c]).unwrap();
        let r = rkt_check(&a, &b, &c, 1).unwrap();
        assert_eq!((g.lhs, g.rhs), (r.lhs, r.rhs));
        let d = gen_polytope(seed + 3, 3, 5, 3).unwrap();
        assert!(rkt_general_check(&a, &[&b, &d], &[&c]).unwrap().holds);
    }
}

#[test]
fn strictness_with_a_common_summand() {
    for n in 3..=4 {
        for seed in 0..10 {
            let a = gen_polytope(seed, n, n + 1, 2).unwrap();
            let b = gen_polytope(seed + 50, n, n + 1, 2).unwrap();
            let c = gen_polytope(seed + 90, n, n + 1, 2).unwrap();
            for k in 1..n {
                let r = strictness_probe(&a, &b, &c, k).unwrap();
                assert!(r.strict, "n = {n}, seed = {seed}, k = {k}");
            }
        }
    }
}

#[test]
fn bezout_matches_independent_formula() {
    let mut rng = Rng::new(4);
    for _ in 0..20 {
        let n = 4;
        let h = gen_polytope(rng.next_u64(), n, 6, 3).unwrap();
        let a1 = gen_polytope(rng.next_u64(), n, 6, 3).unwrap();
        let a2 = gen_polytope(rng.next_u64(), n, 6, 3).unwrap();
        let e = [1 + rng.below(2) as usize, 1 + rng.below(2) as usize];
        let rep = |p: &Polytope, t: usize| vec![p.clone(); t];
        let total = e[0] + e[1];
        let mixed: Vec<Polytope> = [rep(&a1, e[0]), rep(&a2, e[1]), rep(&h, n - total)].concat();
        let rhs = mv_fresh(&vec![&h; n]) * mv_fresh(&mixed.iter().collect::<Vec<_>>());
        let t1: Vec<Polytope> = [rep(&a1, e[0]), rep(&h, n - e[0])].concat();
        let t2: Vec<Polytope> = [rep(&a2, e[1]), rep(&h, n - e[1])].concat();
        let product = mv_fresh(&t1.iter().collect::<Vec<_>>()) * mv_fresh(&t2.iter().collect::<Vec<_>>());
        let lhs = Q::from_integer(binomial(total, e[1])) * &product;
        let r = bezout_check(&h, &[&a1, &a2], &e).unwrap();
        assert_eq!(r.main.lhs, lhs);
        assert_eq!(r.main.rhs, rhs);
        assert!(r.main.holds && r.corollary.holds && r.chain_consistent());
        let other = Q::from_integer(binomial(total, e[0])) * &product;
        assert_eq!(r.corollary.lhs, lhs.min(other));
    }
}

#[test]
fn bezout_single_divisor_is_trivial() {
    let h = gen_polytope(1, 3, 5, 3).unwrap();
    let a = gen_polytope(2, 3, 5, 3).unwrap();
    for e in 1..=3 {
        let r = bezout_check(&h, &[&a], &[e]).unwrap();
        assert!(r.main.slack.is_zero() && r.corollary.slack.is_zero());
    }
    assert!(bezout_check(&h, &[&a, &a], &[2, 2]).is_err());
}

#[test]
fn report_serialization() {
    let a = gen_polytope(1, 2, 4, 3).unwrap();
    let r = rkt_check(&a, &a, &a, 1).unwrap().with_seed(99);
    let row = r.csv_row();
    assert!(row.starts_with("rkt,2,1,"));
    assert!(row.ends_with(",99"));
    assert_eq!(row.split(',').count(), InequalityReport::CSV_HEADER.split(',').count());
    let json = serde_json::to_string(&r).unwrap();
    let back: InequalityReport = serde_json::from_str(&json).unwrap();
    assert_eq!(back, r);
    let tampered = json.replace("\"holds\":true", "\"holds\":false");
    assert!(serde_json::from_str::<InequalityReport>(&tampered).is_err());
}

#[test]
fn fingerprints_depend_on_roles() {
    let a = gen_polytope(1, 3, 5, 3).unwrap();
    let b = gen_polytope(2, 3, 5, 3).unwrap();
    let r1 = rkt_check(&a, &b, &a, 1).unwrap();
    let r2 = rkt_check(&b, &a, &a, 1).unwrap();
    assert_ne!(r1.fingerprint, r2.fingerprint);
    assert_eq!(r1.fingerprint, rkt_check(&a, &b, &a, 2).unwrap().fingerprint);
    assert_eq!(r1.fingerprint.len(), 32);
}
