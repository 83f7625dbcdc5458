//! Volumes of all nonnegative combinations `Σ c_i P_i` from one triangulation.
//!
//! For positive coefficients every `Σ c_i P_i` has the normal fan of
//! `P_1 + … + P_r`, so its vertices are `Σ c_i p_i(v)` where `p_i(v)` is the
//! summand decomposition of vertex `v` of the full sum. A triangulation of the
//! full sum therefore triangulates every such combination, with constant
//! simplex orientations. The signed determinant sum is a polynomial in `c`,
//! so it stays correct on the boundary where some `c_i` vanish.

use std::collections::HashMap;
use std::sync::Mutex;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use super::hull::{self, ApexRule};
use super::{Polytope, PolytopeError};
use crate::exact_arith::kint;
use crate::exact_arith::{factorial, Rational};

#[derive(Debug)]
pub struct MinkowskiFan {
    dim: usize,
    scale: BigInt,
    bodies: Vec<Vec<Vec<BigInt>>>,
    /// Per vertex of the full sum, the vertex index chosen in each body.
    decomposition: Vec<Vec<usize>>,
    simplices: Vec<Vec<usize>>,
    signs: Vec<i8>,
    /// Write-once cache of evaluated coefficient vectors.
    memo: Mutex<HashMap<Vec<u32>, BigInt>>,
}

impl MinkowskiFan {
    pub fn new(bodies: &[&Polytope]) -> Result<Self, PolytopeError> {
        let first = bodies.first().ok_or_else(|| PolytopeError::Domain("no bodies".into()))?;
        let n = first.ambient_dim();
        if bodies.iter().any(|b| b.ambient_dim() != n) {
            return Err(PolytopeError::Shape("bodies have differing dimensions".into()));
        }
        let scale = bodies.iter().fold(BigInt::one(), |acc, b| acc.lcm(b.scale()));
        let scaled: Vec<Vec<Vec<BigInt>>> = bodies
            .iter()
            .map(|b| {
                let f = &scale / b.scale();
                b.scaled_vertices().iter().map(|v| v.iter().map(|x| x * &f).collect()).collect()
            })
            .collect();

        let mut cur: Vec<(Vec<BigInt>, Vec<usize>)> =
            scaled[0].iter().enumerate().map(|(i, v)| (v.clone(), vec![i])).collect();
        let mut span_dim = first.dim();
        let mut last_hull = None;
        for (j, body) in scaled.iter().enumerate().skip(1) {
            let mut seen: HashMap<Vec<BigInt>, Vec<usize>> = HashMap::with_capacity(cur.len() * body.len());
            let mut order = Vec::with_capacity(cur.len() * body.len());
            for (p, dec) in &cur {
                for (t, w) in body.iter().enumerate() {
                    let s: Vec<BigInt> = p.iter().zip(w).map(|(a, b)| a + b).collect();
                    if !seen.contains_key(&s) {
                        let mut d = dec.clone();
                        d.push(t);
                        seen.insert(s.clone(), d);
                        order.push(s);
                    }
                }
            }
            let out = hull::hull_points(&order);
            span_dim = out.span_dim;
            cur = out.vertices.iter().map(|&i| (order[i].clone(), seen.remove(&order[i]).unwrap())).collect();
            if j + 1 == scaled.len() {
                last_hull = Some(out);
            }
        }
        let out = match last_hull {
            Some(h) => h,
            None => {
                let pts: Vec<Vec<BigInt>> = cur.iter().map(|(p, _)| p.clone()).collect();
                let h = hull::hull_points(&pts);
                cur = h.vertices.iter().map(|&i| cur[i].clone()).collect();
                span_dim = h.span_dim;
                h
            }
        };
        let decomposition: Vec<Vec<usize>> = cur.iter().map(|(_, d)| d.clone()).collect();
        let (simplices, signs) = if span_dim < n {
            (Vec::new(), Vec::new())
        } else {
            let inc: Vec<_> = out.facets.iter().map(|f| f.vertices.clone()).collect();
            let simplices = hull::pulling_triangulation(cur.len(), &inc, n, ApexRule::Lowest);
            let coords: Vec<Vec<BigInt>> = cur.iter().map(|(p, _)| p.clone()).collect();
            let signs = kint::convert_points::<i128>(&coords)
                .and_then(|c| hull::simplex_signs(&c, &simplices))
                .unwrap_or_else(|| hull::simplex_signs(&coords, &simplices).expect("BigInt"));
            (simplices, signs)
        };
        Ok(MinkowskiFan { dim: n, scale, bodies: scaled, decomposition, simplices, signs, memo: Mutex::new(HashMap::new()) })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn num_bodies(&self) -> usize {
        self.bodies.len()
    }

    /// True when `P_1 + … + P_r` is full-dimensional.
    pub fn is_full_dimensional(&self) -> bool {
        !self.simplices.is_empty()
    }

    /// Number of simplices in the shared triangulation.
    pub fn num_simplices(&self) -> usize {
        self.simplices.len()
    }

    /// `n!·L^n·vol(Σ c_i P_i)`, where `L` is the common denominator.
    pub fn scaled_normalized_volume(&self, coeffs: &[u32]) -> BigInt {
        assert_eq!(coeffs.len(), self.bodies.len(), "one coefficient per body");
        if self.simplices.is_empty() {
            return BigInt::zero();
        }
        let key = coeffs.to_vec();
        if let Some(v) = self.memo.lock().unwrap().get(&key) {
            return v.clone();
        }
        let v = hull::combination_coords::<i128>(&self.bodies, &self.decomposition, coeffs)
            .and_then(|c| hull::signed_simplex_sum_i128(&c, &self.simplices, Some(&self.signs)))
            .map(BigInt::from)
            .unwrap_or_else(|| {
                let c = hull::combination_coords::<BigInt>(&self.bodies, &self.decomposition, coeffs).expect("BigInt");
                hull::signed_simplex_sum(&c, &self.simplices, Some(&self.signs)).expect("BigInt cannot overflow")
            });
        self.memo.lock().unwrap().entry(key).or_insert(v).clone()
    }

    /// `vol(Σ c_i P_i)`.
    pub fn volume(&self, coeffs: &[u32]) -> Rational {
        Rational::new(
            self.scaled_normalized_volume(coeffs),
            factorial(self.dim) * self.scale.pow(self.dim as u32),
        )
    }

    /// `L^n`, the factor separating lattice-normalized volumes of the scaled
    /// bodies from those of the original bodies.
    pub fn scale_power(&self) -> BigInt {
        self.scale.pow(self.dim as u32)
    }

}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact_arith::int;

    #[test]
    fn volumes_of_box_combinations() {
        let a = Polytope::lattice_box(&[1, 2]);
        let b = Polytope::lattice_box(&[3, 1]);
        let fan = MinkowskiFan::new(&[&a, &b]).unwrap();
        for (c1, c2) in [(0u32, 1u32), (1, 0), (1, 1), (2, 3), (0, 0)] {
            let w = int((c1 + 3 * c2) as i64);
            let h = int((2 * c1 + c2) as i64);
            assert_eq!(fan.volume(&[c1, c2]), w * h);
        }
    }

    #[test]
    fn degenerate_total_sum_has_zero_volume() {
        let a = Polytope::from_int_points(&[vec![0, 0], vec![1, 1]]).unwrap();
        let b = Polytope::from_int_points(&[vec![0, 0], vec![2, 2]]).unwrap();
        let fan = MinkowskiFan::new(&[&a, &b]).unwrap();
        assert!(!fan.is_full_dimensional());
        assert_eq!(fan.volume(&[3, 5]), int(0));
    }

    #[test]
    fn single_body_matches_volume() {
        let p = Polytope::from_int_points(&[vec![0, 0, 0], vec![2, 0, 1], vec![0, 3, 0], vec![1, 1, 4], vec![2, 2, 2]]).unwrap();
        let fan = MinkowskiFan::new(&[&p]).unwrap();
        assert_eq!(fan.volume(&[1]), p.volume());
        assert_eq!(fan.volume(&[2]), p.volume() * int(8));
    }
}
