//! Smooth torus-invariant flags: a vertex plus an ordered unimodular basis of
//! primitive edge directions.

use num_bigint::BigInt;
use num_traits::Zero;

use serde::{Deserialize, Serialize};

use super::OkounkovError;
use crate::exact_arith::{self, primitive_integer, rref, saturated_basis, solve_rational, IntMatrix, Rational};
use crate::polytope::{Entry, FaceChain, Point, Polytope};

/// JSON form of a flag: `{"vertex": [..], "basis": [[..], ..]}` with one
/// inner list per edge direction.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FlagJson {
    pub vertex: Vec<Entry>,
    pub basis: Vec<Vec<Entry>>,
}

/// Flag `P = F_0 ⊋ F_1 ⊋ … ⊋ F_n = {v}` where `F_i` is the face of `P` at `v`
/// spanned by the edges `b_{i+1}, …, b_n`. Facet `i` is the one through `v`
/// containing every edge except `b_i`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ToricFlag {
    vertex: Point,
    /// Columns are `b_1, …, b_n`.
    basis: IntMatrix,
    inverse: IntMatrix,
}

impl ToricFlag {
    pub fn new(vertex: Point, edge_basis: &[Vec<BigInt>]) -> Result<Self, OkounkovError> {
        let n = vertex.len();
        if n == 0 {
            return Err(OkounkovError::Flag("empty vertex".into()));
        }
        if edge_basis.len() != n || edge_basis.iter().any(|b| b.len() != n) {
            return Err(OkounkovError::Flag(format!("edge basis must consist of {n} vectors of length {n}")));
        }
        for b in edge_basis {
            if exact_arith::primitive(b) != *b {
                return Err(OkounkovError::Flag(format!("edge direction {b:?} is not primitive")));
            }
        }
        let basis = IntMatrix::from_bigint_rows(edge_basis.to_vec()).expect("square").transpose();
        let inverse = basis
            .inverse_unimodular()
            .map_err(|_| OkounkovError::Flag("edge basis is not unimodular".into()))?;
        Ok(ToricFlag { vertex, basis, inverse })
    }

    pub fn from_ints(vertex: &[i64], edge_basis: &[Vec<i64>]) -> Result<Self, OkounkovError> {
        Self::with_int_basis(vertex.iter().map(|&x| exact_arith::int(x)).collect(), edge_basis)
    }

    pub fn with_int_basis(vertex: Point, edge_basis: &[Vec<i64>]) -> Result<Self, OkounkovError> {
        let b: Vec<Vec<BigInt>> = edge_basis.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect();
        Self::new(vertex, &b)
    }

    pub fn to_json(&self) -> FlagJson {
        FlagJson {
            vertex: self.vertex.iter().map(Entry::from_rational).collect(),
            basis: self
                .edge_basis()
                .iter()
                .map(|b| b.iter().map(|x| Entry::from_rational(&Rational::from_integer(x.clone()))).collect())
                .collect(),
        }
    }

    pub fn from_json(j: &FlagJson) -> Result<Self, OkounkovError> {
        let vertex = j.vertex.iter().map(Entry::to_rational).collect::<Result<_, _>>()?;
        let mut basis = Vec::with_capacity(j.basis.len());
        for b in &j.basis {
            let mut col = Vec::with_capacity(b.len());
            for e in b {
                let x = e.to_rational()?;
                if !x.is_integer() {
                    return Err(OkounkovError::Flag("edge directions must be integral".into()));
                }
                col.push(x.to_integer());
            }
            basis.push(col);
        }
        Self::new(vertex, &basis)
    }

    /// Flag at vertex `index` of `p` using its edge directions in
    /// lexicographic order, if that vertex is smooth.
    pub fn at_vertex(p: &Polytope, index: usize) -> Option<Self> {
        let mut dirs = edge_directions(p, index);
        if dirs.len() != p.ambient_dim() || !p.is_full_dimensional() {
            return None;
        }
        dirs.sort();
        Self::new(p.vertices()[index].clone(), &dirs).ok()
    }

    /// Flags at every smooth vertex of `p`, in vertex order.
    pub fn smooth_flags(p: &Polytope) -> Vec<Self> {
        (0..p.num_vertices()).filter_map(|i| Self::at_vertex(p, i)).collect()
    }

    pub fn dim(&self) -> usize {
        self.vertex.len()
    }

    pub fn vertex(&self) -> &Point {
        &self.vertex
    }

    pub fn edge_basis(&self) -> Vec<Vec<BigInt>> {
        (0..self.dim()).map(|i| self.basis.column(i)).collect()
    }

    /// Matrix whose columns are the edge directions.
    pub fn basis_matrix(&self) -> &IntMatrix {
        &self.basis
    }

    pub fn inverse_matrix(&self) -> &IntMatrix {
        &self.inverse
    }

    /// Checks that the flag vertex is a smooth vertex of `p` whose edge
    /// directions are exactly the basis vectors.
    pub fn validate_for(&self, p: &Polytope) -> Result<(), OkounkovError> {
        if p.ambient_dim() != self.dim() {
            return Err(OkounkovError::Flag(format!(
                "flag of dimension {} on a polytope in dimension {}",
                self.dim(),
                p.ambient_dim()
            )));
        }
        if !p.is_full_dimensional() {
            return Err(OkounkovError::Flag("polytope is not full-dimensional".into()));
        }
        let index = p
            .vertex_index(&self.vertex)
            .ok_or_else(|| OkounkovError::Flag("flag vertex is not a vertex of the polytope".into()))?;
        let mut dirs = edge_directions(p, index);
        let mut basis = self.edge_basis();
        dirs.sort();
        basis.sort();
        if dirs != basis {
            return Err(OkounkovError::Flag(format!(
                "edge basis {basis:?} does not match the edge directions {dirs:?} at the flag vertex"
            )));
        }
        Ok(())
    }

    /// Facet inequalities `a_i·x ≤ c_i` of the flag facets, in flag order.
    pub(crate) fn flag_facets(&self, p: &Polytope) -> Result<Vec<(Vec<BigInt>, Rational)>, OkounkovError> {
        let facets = p.facets().ok_or_else(|| OkounkovError::Flag("polytope is not full-dimensional".into()))?;
        let basis = self.edge_basis();
        (0..self.dim())
            .map(|i| {
                facets
                    .iter()
                    .find(|f| {
                        exact_arith::dot_int_rat(&f.normal, &self.vertex) == f.offset
                            && basis
                                .iter()
                                .enumerate()
                                .all(|(j, b)| j == i || big_dot(&f.normal, b).is_zero())
                    })
                    .map(|f| (f.normal.clone(), f.offset.clone()))
                    .ok_or_else(|| OkounkovError::Flag(format!("no facet through the flag vertex avoids edge {i}")))
            })
            .collect()
    }

    /// The face `F_k`: vertices of `p` on the first `k` flag facets.
    pub fn flag_face(&self, p: &Polytope, k: usize) -> Result<Polytope, OkounkovError> {
        self.validate_for(p)?;
        if k > self.dim() {
            return Err(OkounkovError::Domain(format!("flag has no face {k}")));
        }
        let facets = self.flag_facets(p)?;
        let pts: Vec<Point> = p
            .vertices()
            .iter()
            .filter(|v| facets[..k].iter().all(|(a, c)| exact_arith::dot_int_rat(a, v) == *c))
            .cloned()
            .collect();
        Ok(Polytope::convex_hull(&pts)?)
    }

    pub fn face_chain(&self, p: &Polytope) -> Result<FaceChain, OkounkovError> {
        let faces = (0..=self.dim()).map(|k| self.flag_face(p, k)).collect::<Result<Vec<_>, _>>()?;
        Ok(FaceChain::new(faces)?)
    }

    /// The face `F_k` written in coordinates of its own lattice together with
    /// the induced flag `b_{k+1}, …, b_n`.
    ///
    /// The face lattice basis is the Hermite-normal-form saturated basis of
    /// the span of the remaining edges, and coordinates are taken relative to
    /// the flag vertex.
    pub fn sub_flag(&self, p: &Polytope, k: usize) -> Result<(Polytope, ToricFlag), OkounkovError> {
        if k == 0 || k >= self.dim() {
            return Err(OkounkovError::Domain(format!("sub-flag index {k} outside 1..{}", self.dim())));
        }
        let face = self.flag_face(p, k)?;
        let n = self.dim();
        let rest: Vec<Vec<BigInt>> = self.edge_basis()[k..].to_vec();
        let lattice = saturated_basis(&rest, n);
        let coords = |x: &[Rational]| coordinates_in(&lattice, x).expect("face lies in the span of its edges");
        let pts: Vec<Point> = face
            .vertices()
            .iter()
            .map(|x| {
                let d: Vec<Rational> = x.iter().zip(&self.vertex).map(|(a, b)| a - b).collect();
                coords(&d)
            })
            .collect();
        let face_poly = Polytope::convex_hull(&pts)?;
        let sub_basis: Vec<Vec<BigInt>> = rest
            .iter()
            .map(|b| {
                let r: Vec<Rational> = b.iter().cloned().map(Rational::from_integer).collect();
                coords(&r).into_iter().map(|c| c.to_integer()).collect()
            })
            .collect();
        let origin = vec![Rational::zero(); n - k];
        Ok((face_poly, ToricFlag::new(origin, &sub_basis)?))
    }
}

fn big_dot(a: &[BigInt], b: &[BigInt]) -> BigInt {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Primitive directions of the edges leaving vertex `index`.
pub(crate) fn edge_directions(p: &Polytope, index: usize) -> Vec<Vec<BigInt>> {
    let verts = p.vertices();
    p.edges()
        .into_iter()
        .filter_map(|(a, b)| match (a == index, b == index) {
            (true, _) => Some(b),
            (_, true) => Some(a),
            _ => None,
        })
        .map(|w| {
            let d: Vec<Rational> = verts[w].iter().zip(&verts[index]).map(|(x, y)| x - y).collect();
            primitive_integer(&d)
        })
        .collect()
}

/// Coefficients of `x` in the basis `rows`, if `x` lies in their span.
fn coordinates_in(rows: &[Vec<BigInt>], x: &[Rational]) -> Option<Vec<Rational>> {
    let r = rows.len();
    let rat: Vec<Vec<Rational>> = rows
        .iter()
        .map(|row| row.iter().cloned().map(Rational::from_integer).collect())
        .collect();
    let mut echelon = rat.clone();
    let pivots = rref(&mut echelon);
    if pivots.len() != r {
        return None;
    }
    // Restrict to the pivot coordinates, where the basis is invertible.
    let a: Vec<Vec<Rational>> = pivots.iter().map(|&c| (0..r).map(|j| rat[j][c].clone()).collect()).collect();
    let b: Vec<Rational> = pivots.iter().map(|&c| x[c].clone()).collect();
    let c = solve_rational(&a, &b).ok()?;
    let back: Vec<Rational> = (0..x.len())
        .map(|i| (0..r).map(|j| &c[j] * &rat[j][i]).sum())
        .collect();
    (back == x).then_some(c)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact_arith::int;
    use num_traits::One;

    #[test]
    fn rejects_bad_bases() {
        let v = vec![int(0), int(0)];
        assert!(ToricFlag::new(v.clone(), &[vec![BigInt::from(2), BigInt::zero()], vec![BigInt::zero(), BigInt::one()]]).is_err());
        assert!(ToricFlag::from_ints(&[0, 0], &[vec![1, 1], vec![2, 1]]).is_ok());
        assert!(ToricFlag::from_ints(&[0, 0], &[vec![1, 1], vec![1, -1]]).is_err());
        assert!(ToricFlag::from_ints(&[0, 0], &[vec![1, 0]]).is_err());
    }

    #[test]
    fn validation_against_polytope() {
        let sq = Polytope::unit_cube(2);
        assert!(ToricFlag::from_ints(&[0, 0], &[vec![1, 0], vec![0, 1]]).unwrap().validate_for(&sq).is_ok());
        assert!(ToricFlag::from_ints(&[1, 1], &[vec![-1, 0], vec![0, -1]]).unwrap().validate_for(&sq).is_ok());
        assert!(ToricFlag::from_ints(&[0, 0], &[vec![1, 0], vec![1, 1]]).unwrap().validate_for(&sq).is_err());
        assert!(ToricFlag::from_ints(&[2, 0], &[vec![1, 0], vec![0, 1]]).unwrap().validate_for(&sq).is_err());
        // (0, 1) is singular: its edge directions have determinant 2.
        let t = Polytope::from_int_points(&[vec![0, 0], vec![2, 0], vec![0, 1]]).unwrap();
        assert_eq!(ToricFlag::smooth_flags(&t).len(), 2);
    }

    #[test]
    fn face_chain_of_cube() {
        let c = Polytope::unit_cube(3);
        let f = ToricFlag::from_ints(&[0, 0, 0], &[vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1]]).unwrap();
        let chain = f.face_chain(&c).unwrap();
        let dims: Vec<usize> = chain.faces().iter().map(Polytope::dim).collect();
        assert_eq!(dims, vec![3, 2, 1, 0]);
        // F_1 is the facet x_1 = 0.
        assert!(chain.faces()[1].vertices().iter().all(|v| v[0] == int(0)));
    }

    #[test]
    fn sub_flag_coordinates() {
        let p = Polytope::from_int_points(&[vec![0, 0, 0], vec![1, 1, 0], vec![0, 1, 0], vec![0, 0, 1]]).unwrap();
        let f = ToricFlag::at_vertex(&p, p.vertex_index(&[int(0), int(0), int(0)]).unwrap()).unwrap();
        let (face, sub) = f.sub_flag(&p, 1).unwrap();
        assert_eq!(face.ambient_dim(), 2);
        assert_eq!(face.volume(), Rational::new(1.into(), 2.into()));
        assert!(sub.validate_for(&face).is_ok());
    }
}
