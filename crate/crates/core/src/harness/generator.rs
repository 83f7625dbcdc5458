//! Seeded random lattice polytopes.

use num_bigint::BigInt;

use super::rng::Rng;
use super::HarnessError;
use crate::dynamics::MonomialMap;
use crate::exact_arith::{int, IntMatrix, Rational};
use crate::okounkov::ToricFlag;
use crate::polytope::{Point, Polytope};
use crate::surface::{NefTriple, SurfaceLattice};

/// Attempts before generation gives up on a dimension-deficient sample.
pub const MAX_ATTEMPTS: usize = 100;

/// Full-dimensional lattice polytope: the hull of `vertex_budget` points with
/// coordinates uniform in `[0, bound]`, resampled (continuing the same
/// random stream) until the hull is full-dimensional.
pub fn gen_polytope(seed: u64, n: usize, vertex_budget: usize, bound: i64) -> Result<Polytope, HarnessError> {
    let mut rng = Rng::new(seed);
    gen_polytope_from(&mut rng, n, vertex_budget, bound)
}

/// Same as [`gen_polytope`], drawing from an existing stream.
pub fn gen_polytope_from(rng: &mut Rng, n: usize, vertex_budget: usize, bound: i64) -> Result<Polytope, HarnessError> {
    if n == 0 || bound < 1 || vertex_budget < n + 1 {
        return Err(HarnessError::Config(format!(
            "generator needs n ≥ 1, bound ≥ 1 and budget ≥ n + 1 (got n = {n}, budget = {vertex_budget}, bound = {bound})"
        )));
    }
    for _ in 0..MAX_ATTEMPTS {
        let pts: Vec<Vec<i64>> = (0..vertex_budget)
            .map(|_| (0..n).map(|_| rng.range_i64(0, bound)).collect())
            .collect();
        let p = Polytope::from_int_points(&pts).expect("nonempty");
        if p.is_full_dimensional() {
            return Ok(p);
        }
    }
    Err(HarnessError::Generation(format!(
        "no full-dimensional sample in {MAX_ATTEMPTS} attempts (n = {n}, budget = {vertex_budget}, bound = {bound})"
    )))
}

/// Random integer point with coordinates in `[lo, hi]`.
pub fn gen_point(rng: &mut Rng, n: usize, lo: i64, hi: i64) -> Vec<i64> {
    (0..n).map(|_| rng.range_i64(lo, hi)).collect()
}

/// Random unimodular matrix: a product of `steps` elementary operations
/// `row_i += c·row_j` with `c ∈ {−1, 1}`, then random row negations and a
/// random row permutation.
pub fn gen_unimodular(rng: &mut Rng, n: usize, steps: usize) -> IntMatrix {
    let mut rows: Vec<Vec<i64>> = (0..n).map(|i| (0..n).map(|j| i64::from(i == j)).collect()).collect();
    if n > 1 {
        for _ in 0..steps {
            let i = rng.below(n as u64) as usize;
            let mut j = rng.below(n as u64 - 1) as usize;
            if j >= i {
                j += 1;
            }
            let c = if rng.coin() { 1 } else { -1 };
            for col in 0..n {
                rows[i][col] += c * rows[j][col];
            }
        }
    }
    for row in rows.iter_mut() {
        if rng.coin() {
            row.iter_mut().for_each(|x| *x = -*x);
        }
    }
    shuffle(rng, &mut rows);
    IntMatrix::from_rows(&rows).expect("square")
}

fn shuffle<T>(rng: &mut Rng, v: &mut [T]) {
    for i in (1..v.len()).rev() {
        let j = rng.below(i as u64 + 1) as usize;
        v.swap(i, j);
    }
}

/// Polytope with a smooth vertex and the flag there.
///
/// Starts from `conv{0, a_1e_1, …, a_ne_n, S}` with `S` inside the positive
/// orthant, so the tangent cone at the origin is the orthant, then applies a
/// random unimodular map and translation. The flag basis is a random ordering
/// of the images of `e_1, …, e_n`.
pub fn gen_smooth_vertex_instance(
    rng: &mut Rng,
    n: usize,
    vertex_budget: usize,
    bound: i64,
) -> Result<(Polytope, ToricFlag), HarnessError> {
    if n == 0 || bound < 1 || vertex_budget < n + 1 {
        return Err(HarnessError::Config(format!(
            "generator needs n ≥ 1, bound ≥ 1 and budget ≥ n + 1 (got n = {n}, budget = {vertex_budget}, bound = {bound})"
        )));
    }
    let mut pts: Vec<Vec<i64>> = vec![vec![0; n]];
    for i in 0..n {
        let mut e = vec![0; n];
        e[i] = rng.range_i64(1, bound);
        pts.push(e);
    }
    for _ in n + 1..vertex_budget {
        pts.push(gen_point(rng, n, 0, bound));
    }
    let u = gen_unimodular(rng, n, n);
    let t = gen_point(rng, n, -bound, bound);
    let p = Polytope::from_int_points(&pts).expect("nonempty");
    let shift: Point = t.iter().map(|&x| int(x)).collect();
    let p = p.linear_image(&u).and_then(|q| q.translate(&shift)).expect("same dimension");
    let mut basis: Vec<Vec<BigInt>> = (0..n).map(|j| u.column(j)).collect();
    shuffle(rng, &mut basis);
    let flag = ToricFlag::new(shift, &basis).expect("unimodular images of the unit vectors");
    Ok((p, flag))
}

/// Nonsingular matrix with entries in `[lo, hi]`.
pub fn gen_monomial_map(rng: &mut Rng, n: usize, lo: i64, hi: i64) -> Result<MonomialMap, HarnessError> {
    for _ in 0..MAX_ATTEMPTS {
        let rows: Vec<Vec<i64>> = (0..n).map(|_| gen_point(rng, n, lo, hi)).collect();
        if let Ok(f) = MonomialMap::from_rows(&rows) {
            return Ok(f);
        }
    }
    Err(HarnessError::Generation(format!("no nonsingular {n}×{n} matrix in {MAX_ATTEMPTS} attempts")))
}

/// Lattice of signature `(1, ρ − 1)` with gram `Qᵀ·(U ⊕ −diag(d))·Q`.
///
/// Returns the lattice and `Q⁻¹`, which maps coordinates in the diagonal
/// model to coordinates in the returned lattice.
pub fn gen_surface_lattice(rng: &mut Rng, rho: usize) -> Result<(SurfaceLattice, IntMatrix, Vec<i64>), HarnessError> {
    if rho < 2 {
        return Err(HarnessError::Config("surface lattices need rank at least 2".into()));
    }
    let d: Vec<i64> = (0..rho - 2).map(|_| rng.range_i64(1, 3)).collect();
    let mut base = vec![vec![0i64; rho]; rho];
    base[0][1] = 1;
    base[1][0] = 1;
    for (j, &dj) in d.iter().enumerate() {
        base[j + 2][j + 2] = -dj;
    }
    let q = gen_unimodular(rng, rho, rho);
    let b = IntMatrix::from_rows(&base).expect("square");
    let gram = q.transpose().mul(&b).and_then(|m| m.mul(&q)).expect("square");
    let lattice = SurfaceLattice::new(gram.to_rational_rows()).expect("congruent to a (1, ρ−1) form");
    let q_inv = q.inverse_unimodular().expect("unimodular");
    Ok((lattice, q_inv, d))
}

fn to_lattice_coords(q_inv: &IntMatrix, y: &[i64]) -> Vec<Rational> {
    let y: Vec<Rational> = y.iter().map(|&x| int(x)).collect();
    q_inv.mul_vec(&y).expect("dimension")
}

/// Random triple passing the nef proxy, drawn near the positive quadrant of
/// the hyperbolic summand.
pub fn gen_surface_triple(rng: &mut Rng, rho: usize) -> Result<(SurfaceLattice, NefTriple), HarnessError> {
    let (l, q_inv, _) = gen_surface_lattice(rng, rho)?;
    for _ in 0..MAX_ATTEMPTS {
        let mut draw = || {
            let mut y = vec![rng.range_i64(0, 4), rng.range_i64(0, 4)];
            y.extend((2..rho).map(|_| rng.range_i64(-1, 1)));
            to_lattice_coords(&q_inv, &y)
        };
        let (a, b, c) = (draw(), draw(), draw());
        if let Ok(t) = NefTriple::new(&l, a, b, c) {
            return Ok((l, t));
        }
    }
    Err(HarnessError::Generation(format!("no proxy-nef triple in {MAX_ATTEMPTS} attempts (rank {rho})")))
}

/// Triple with `B² = C² = 0`, `(B·C) > 0` and `A = sB + tC` for random
/// positive rationals `s, t`.
///
/// In the diagonal model `(2, N, 2z)` is isotropic when `N = Σ d_j z_j²`.
pub fn gen_equality_triple(rng: &mut Rng, rho: usize) -> Result<(SurfaceLattice, NefTriple, Rational, Rational), HarnessError> {
    let (l, q_inv, d) = gen_surface_lattice(rng, rho)?;
    let isotropic = |rng: &mut Rng, swap: bool| -> Vec<i64> {
        let z: Vec<i64> = (2..rho).map(|_| rng.range_i64(-2, 2)).collect();
        let norm: i64 = z.iter().zip(&d).map(|(zj, dj)| dj * zj * zj).sum();
        let mut y = if swap { vec![norm, 2] } else { vec![2, norm] };
        y.extend(z.iter().map(|zj| 2 * zj));
        y
    };
    for _ in 0..MAX_ATTEMPTS {
        let b = to_lattice_coords(&q_inv, &isotropic(rng, false));
        let mut c = to_lattice_coords(&q_inv, &isotropic(rng, true));
        let bc = l.pairing(&b, &c).expect("rank");
        if bc == int(0) {
            continue;
        }
        if bc < int(0) {
            c.iter_mut().for_each(|x| *x = -x.clone());
        }
        let s = Rational::new(rng.range_i64(1, 5).into(), rng.range_i64(1, 5).into());
        let t = Rational::new(rng.range_i64(1, 5).into(), rng.range_i64(1, 5).into());
        let a: Vec<Rational> = b.iter().zip(&c).map(|(x, y)| &s * x + &t * y).collect();
        let triple = NefTriple::new(&l, a, b, c).expect("isotropic pair with positive pairing passes the proxy");
        return Ok((l, triple, s, t));
    }
    Err(HarnessError::Generation(format!("no non-orthogonal isotropic pair in {MAX_ATTEMPTS} attempts")))
}
