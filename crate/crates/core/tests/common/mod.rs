//! Oracles shared by the integration tests. Everything here is computed
//! from first principles, independently of the library's geometric kernels.
#![allow(dead_code)]

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use rkt_lab_core::harness::Rng;
use rkt_lab_core::polytope::Polytope;

pub type Q = BigRational;

pub fn q(v: i64) -> Q {
    Q::from_integer(v.into())
}

pub fn qf(p: i64, d: i64) -> Q {
    Q::new(p.into(), d.into())
}

pub fn factorial(n: usize) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, i| acc * BigInt::from(i))
}

pub fn binomial(n: usize, k: usize) -> BigInt {
    factorial(n) / (factorial(k) * factorial(n - k))
}

/// Solves the square system `a·x = b` by Gauss–Jordan elimination, or `None`
/// when it is singular.
pub fn solve(mut a: Vec<Vec<Q>>, mut b: Vec<Q>) -> Option<Vec<Q>> {
    let n = a.len();
    for col in 0..n {
        let piv = (col..n).find(|&r| !a[r][col].is_zero())?;
        a.swap(col, piv);
        b.swap(col, piv);
        let inv = a[col][col].recip();
        for j in 0..n {
            a[col][j] = &a[col][j] * &inv;
        }
        b[col] = &b[col] * &inv;
        for r in 0..n {
            if r != col && !a[r][col].is_zero() {
                let f = a[r][col].clone();
                for j in 0..n {
                    let t = &f * &a[col][j];
                    a[r][j] -= t;
                }
                let t = &f * &b[col];
                b[r] -= t;
            }
        }
    }
    Some(b)
}

/// Determinant by fraction-free cofactor expansion along the first row.
pub fn det(m: &[Vec<Q>]) -> Q {
    let n = m.len();
    if n == 0 {
        return Q::one();
    }
    if n == 1 {
        return m[0][0].clone();
    }
    let mut total = Q::zero();
    for j in 0..n {
        if m[0][j].is_zero() {
            continue;
        }
        let minor: Vec<Vec<Q>> = m[1..]
            .iter()
            .map(|row| row.iter().enumerate().filter(|(c, _)| *c != j).map(|(_, x)| x.clone()).collect())
            .collect();
        let term = &m[0][j] * det(&minor);
        if j % 2 == 0 {
            total += term;
        } else {
            total -= term;
        }
    }
    total
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::new();
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    rec(0, n, k, &mut cur, &mut out);
    out
}

/// Membership in the hull of `pts` by Carathéodory: `x` lies in the hull
/// exactly when it lies in some simplex spanned by `n + 1` of the points.
/// Only meaningful for full-dimensional point sets.
pub fn in_hull_caratheodory(pts: &[Vec<Q>], x: &[Q]) -> bool {
    let n = x.len();
    for s in subsets(pts.len(), n + 1) {
        // Barycentric system: Σ λ_i p_i = x, Σ λ_i = 1.
        let mut a = vec![vec![Q::zero(); n + 1]; n + 1];
        let mut b = vec![Q::zero(); n + 1];
        for (col, &i) in s.iter().enumerate() {
            for row in 0..n {
                a[row][col] = pts[i][row].clone();
            }
            a[n][col] = Q::one();
        }
        b[..n].clone_from_slice(x);
        b[n] = Q::one();
        if let Some(lambda) = solve(a, b) {
            if lambda.iter().all(|l| !l.is_negative()) {
                return true;
            }
        }
    }
    false
}

/// Lattice points of `m·conv(pts)` by scanning the bounding box.
pub fn brute_lattice_points(pts: &[Vec<Q>], m: i64) -> Vec<Vec<i64>> {
    let n = pts[0].len();
    let mq = q(m);
    let scaled: Vec<Vec<Q>> = pts.iter().map(|p| p.iter().map(|x| x * &mq).collect()).collect();
    let lo: Vec<i64> = (0..n).map(|j| scaled.iter().map(|p| p[j].floor()).min().unwrap().to_integer().try_into().unwrap()).collect();
    let hi: Vec<i64> = (0..n).map(|j| scaled.iter().map(|p| p[j].ceil()).max().unwrap().to_integer().try_into().unwrap()).collect();
    let mut out = Vec::new();
    let mut cur = lo.clone();
    loop {
        let x: Vec<Q> = cur.iter().map(|&c| q(c)).collect();
        if in_hull_caratheodory(&scaled, &x) {
            out.push(cur.clone());
        }
        let mut j = n;
        loop {
            if j == 0 {
                return out;
            }
            j -= 1;
            if cur[j] < hi[j] {
                cur[j] += 1;
                for (jj, c) in cur.iter_mut().enumerate().skip(j + 1) {
                    *c = lo[jj];
                }
                break;
            }
        }
    }
}

/// Area of a convex polygon given by its vertices in any order: sort by
/// angle around the centroid, then apply the shoelace formula exactly.
pub fn shoelace_area(vertices: &[Vec<Q>]) -> Q {
    let k = q(vertices.len() as i64);
    let cx: Q = vertices.iter().map(|v| v[0].clone()).sum::<Q>() / &k;
    let cy: Q = vertices.iter().map(|v| v[1].clone()).sum::<Q>() / &k;
    let to_f = |r: &Q| r.numer().to_string().parse::<f64>().unwrap() / r.denom().to_string().parse::<f64>().unwrap();
    let mut vs: Vec<&Vec<Q>> = vertices.iter().collect();
    vs.sort_by(|a, b| {
        let ta = to_f(&(&a[1] - &cy)).atan2(to_f(&(&a[0] - &cx)));
        let tb = to_f(&(&b[1] - &cy)).atan2(to_f(&(&b[0] - &cx)));
        ta.partial_cmp(&tb).unwrap()
    });
    let mut twice = Q::zero();
    for i in 0..vs.len() {
        let (a, b) = (vs[i], vs[(i + 1) % vs.len()]);
        twice += &a[0] * &b[1] - &b[0] * &a[1];
    }
    twice.abs() / q(2)
}

/// Volume of a lattice polytope from its Ehrhart polynomial: the leading
/// coefficient is `Δⁿ L(0) / n!` where `L(m)` counts lattice points of `m·P`.
pub fn ehrhart_volume(counts: &[usize]) -> Q {
    let n = counts.len() - 1;
    let mut total = BigInt::zero();
    for (j, &c) in counts.iter().enumerate() {
        let term = binomial(n, j) * BigInt::from(c);
        if (n - j) % 2 == 0 {
            total += term;
        } else {
            total -= term;
        }
    }
    Q::new(total, factorial(n))
}

/// Permanent by expansion over all permutations.
pub fn permanent(m: &[Vec<Q>]) -> Q {
    let n = m.len();
    let mut perm: Vec<usize> = (0..n).collect();
    let mut total = Q::zero();
    loop {
        total += perm.iter().enumerate().map(|(i, &j)| m[i][j].clone()).product::<Q>();
        // Next permutation in lexicographic order.
        let Some(i) = (0..n.saturating_sub(1)).rev().find(|&i| perm[i] < perm[i + 1]) else {
            return total;
        };
        let j = (i + 1..n).rev().find(|&j| perm[j] > perm[i]).unwrap();
        perm.swap(i, j);
        perm[i + 1..].reverse();
    }
}

pub fn rational_points(p: &Polytope) -> Vec<Vec<Q>> {
    p.vertices().to_vec()
}

pub fn random_points(rng: &mut Rng, count: usize, n: usize, lo: i64, hi: i64) -> Vec<Vec<i64>> {
    (0..count).map(|_| (0..n).map(|_| rng.range_i64(lo, hi)).collect()).collect()
}

pub fn to_q(v: &[i64]) -> Vec<Q> {
    v.iter().map(|&x| q(x)).collect()
}
