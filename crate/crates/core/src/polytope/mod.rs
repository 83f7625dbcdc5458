//! Exact rational convex polytopes: hulls, volumes, Minkowski sums,
//! projections, faces, sections and lattice points.
//!
//! A polytope is stored through its integer image `L·P`, where `L` is the
//! least common denominator of the vertex coordinates. All kernels work on
//! that image; rational facts are recovered by dividing by the right power
//! of `L`.

mod fan;
pub(crate) mod hull;
mod json;

use std::cmp::Ordering;
use std::sync::OnceLock;

use fixedbitset::FixedBitSet;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::exact_arith::kint;
use crate::exact_arith::{self, common_denominator, factorial, IntMatrix, Rational};

pub use fan::MinkowskiFan;
pub use hull::ApexRule;
pub use json::{Entry, PolytopeJson};

/// Upper limit on bounding-box candidates for lattice-point enumeration.
pub const LATTICE_CAPACITY: u64 = 10_000_000;

pub type Point = Vec<Rational>;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PolytopeError {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("shape error: {0}")]
    Shape(String),
    #[error("capacity exceeded: {0}")]
    Capacity(String),
    #[error("invalid polytope JSON: {0}")]
    Json(String),
}

/// Facet inequality `normal·x ≤ offset` with a primitive integer normal.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Facet {
    pub normal: Vec<BigInt>,
    pub offset: Rational,
}

/// Convex hull of finitely many rational points.
#[derive(Debug, Clone)]
pub struct Polytope {
    ambient: usize,
    span_dim: usize,
    /// Coordinates on which projection is injective along the affine span.
    pivots: Vec<usize>,
    scale: BigInt,
    /// `scale · vertex`, sorted lexicographically.
    lattice: Vec<Vec<BigInt>>,
    vertices: Vec<Point>,
    /// Facets of the polytope inside its affine span, as `(normal, scale·offset)`.
    /// When lower-dimensional the normals are supported on `pivots`.
    ineqs: Vec<(Vec<BigInt>, BigInt)>,
    incidence: Vec<FixedBitSet>,
    /// Equations `normal·x = offset/scale` cutting out the affine span.
    eqs: Vec<(Vec<BigInt>, BigInt)>,
    volume: OnceLock<Rational>,
}

impl PartialEq for Polytope {
    fn eq(&self, other: &Self) -> bool {
        self.ambient == other.ambient && self.vertices == other.vertices
    }
}

impl Eq for Polytope {}

fn to_point(v: &[BigInt], scale: &BigInt) -> Point {
    v.iter().map(|x| Rational::new(x.clone(), scale.clone())).collect()
}

fn big_dot(a: &[BigInt], b: &[BigInt]) -> BigInt {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

impl Polytope {
    /// Convex hull of a nonempty point set.
    pub fn convex_hull(points: &[Point]) -> Result<Self, PolytopeError> {
        let first = points.first().ok_or_else(|| PolytopeError::Domain("empty point set".into()))?;
        let n = first.len();
        if n == 0 {
            return Err(PolytopeError::Shape("ambient dimension must be positive".into()));
        }
        if points.iter().any(|p| p.len() != n) {
            return Err(PolytopeError::Shape("points have differing dimensions".into()));
        }
        let scale = common_denominator(points.iter().flatten());
        let ints: Vec<Vec<BigInt>> = points
            .iter()
            .map(|p| p.iter().map(|x| (x * &scale).to_integer()).collect())
            .collect();
        Ok(Self::from_scaled(ints, scale))
    }

    /// Convex hull of integer points given as machine integers.
    pub fn from_int_points(points: &[Vec<i64>]) -> Result<Self, PolytopeError> {
        let pts: Vec<Point> = points.iter().map(|p| p.iter().map(|&x| exact_arith::int(x)).collect()).collect();
        Self::convex_hull(&pts)
    }

    /// Hull of `points / scale` for integer points (deduplicated here).
    pub(crate) fn from_scaled(mut ints: Vec<Vec<BigInt>>, scale: BigInt) -> Self {
        let n = ints[0].len();
        ints.sort();
        ints.dedup();
        // Reduce the common scale if the points allow it.
        let g = ints.iter().flatten().fold(scale.clone(), |acc, x| acc.gcd(x));
        let (ints, scale) = if g.is_one() {
            (ints, scale)
        } else {
            (ints.iter().map(|p| p.iter().map(|x| x / &g).collect()).collect(), scale / &g)
        };
        let out = hull::hull_points(&ints);
        let mut order: Vec<usize> = out.vertices.clone();
        order.sort_by(|&a, &b| ints[a].cmp(&ints[b]));
        let pos_of: std::collections::HashMap<usize, usize> =
            order.iter().enumerate().map(|(k, &i)| (i, k)).collect();
        // Map hull positions (indices into out.vertices) to sorted positions.
        let remap: Vec<usize> = out.vertices.iter().map(|i| pos_of[i]).collect();
        let lattice: Vec<Vec<BigInt>> = order.iter().map(|&i| ints[i].clone()).collect();
        let nv = lattice.len();
        let mut ineqs = Vec::with_capacity(out.facets.len());
        let mut incidence = Vec::with_capacity(out.facets.len());
        for f in &out.facets {
            let mut normal = vec![BigInt::zero(); n];
            for (c, &p) in out.pivots.iter().enumerate() {
                normal[p] = f.normal[c].clone();
            }
            ineqs.push((normal, f.offset.clone()));
            let mut bits = FixedBitSet::with_capacity(nv);
            for k in f.vertices.ones() {
                bits.insert(remap[k]);
            }
            incidence.push(bits);
        }
        let eqs = if out.span_dim < n {
            let dirs: Vec<Vec<Rational>> = lattice[1..]
                .iter()
                .map(|v| v.iter().zip(&lattice[0]).map(|(a, b)| Rational::from_integer(a - b)).collect())
                .collect();
            exact_arith::nullspace(&dirs, n)
                .into_iter()
                .map(|w| {
                    let a = exact_arith::primitive_integer(&w);
                    let b = big_dot(&a, &lattice[0]);
                    (a, b)
                })
                .collect()
        } else {
            Vec::new()
        };
        let vertices = lattice.iter().map(|v| to_point(v, &scale)).collect();
        Polytope {
            ambient: n,
            span_dim: out.span_dim,
            pivots: out.pivots,
            scale,
            lattice,
            vertices,
            ineqs,
            incidence,
            eqs,
            volume: OnceLock::new(),
        }
    }

    pub fn point(coords: &[Rational]) -> Result<Self, PolytopeError> {
        Self::convex_hull(&[coords.to_vec()])
    }

    /// `conv{0, e_1, …, e_n}`.
    pub fn standard_simplex(n: usize) -> Self {
        let mut pts = vec![vec![0i64; n]];
        for i in 0..n {
            let mut e = vec![0i64; n];
            e[i] = 1;
            pts.push(e);
        }
        Self::from_int_points(&pts).expect("simplex is valid")
    }

    /// `[0, l_1] × … × [0, l_n]` for nonnegative integer side lengths.
    pub fn lattice_box(lengths: &[i64]) -> Self {
        let n = lengths.len();
        let mut pts = Vec::with_capacity(1 << n);
        for mask in 0..(1usize << n) {
            pts.push((0..n).map(|j| if mask >> j & 1 == 1 { lengths[j] } else { 0 }).collect());
        }
        Self::from_int_points(&pts).expect("box is valid")
    }

    pub fn unit_cube(n: usize) -> Self {
        Self::lattice_box(&vec![1; n])
    }

    /// Cartesian product `self × other` in dimension `n + m`.
    pub fn product(&self, other: &Polytope) -> Self {
        let mut pts = Vec::with_capacity(self.vertices.len() * other.vertices.len());
        for a in &self.vertices {
            for b in &other.vertices {
                let mut p = a.clone();
                p.extend(b.iter().cloned());
                pts.push(p);
            }
        }
        Self::convex_hull(&pts).expect("product of nonempty polytopes")
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient
    }

    /// Dimension of the affine span.
    pub fn dim(&self) -> usize {
        self.span_dim
    }

    pub fn is_full_dimensional(&self) -> bool {
        self.span_dim == self.ambient
    }

    /// Vertices, sorted lexicographically.
    pub fn vertices(&self) -> &[Point] {
        &self.vertices
    }

    pub fn num_vertices(&self) -> usize {
        self.vertices.len()
    }

    /// True when every vertex is an integer point.
    pub fn is_lattice(&self) -> bool {
        self.scale.is_one()
    }

    pub(crate) fn scale(&self) -> &BigInt {
        &self.scale
    }

    pub(crate) fn scaled_vertices(&self) -> &[Vec<BigInt>] {
        &self.lattice
    }

    /// Irredundant facet inequalities; present iff full-dimensional.
    pub fn facets(&self) -> Option<Vec<Facet>> {
        if !self.is_full_dimensional() {
            return None;
        }
        Some(
            self.ineqs
                .iter()
                .map(|(a, b)| Facet { normal: a.clone(), offset: Rational::new(b.clone(), self.scale.clone()) })
                .collect(),
        )
    }

    /// For each facet, the positions of the vertices lying on it (full-dimensional only).
    pub fn facet_vertices(&self) -> Option<Vec<Vec<usize>>> {
        self.is_full_dimensional()
            .then(|| self.incidence.iter().map(|b| b.ones().collect()).collect())
    }

    /// Equations `normal·x = offset` of the affine span (empty when full-dimensional).
    pub fn span_equations(&self) -> Vec<Facet> {
        self.eqs
            .iter()
            .map(|(a, b)| Facet { normal: a.clone(), offset: Rational::new(b.clone(), self.scale.clone()) })
            .collect()
    }

    pub fn vertex_index(&self, v: &[Rational]) -> Option<usize> {
        self.vertices.iter().position(|w| w.as_slice() == v)
    }

    pub fn contains(&self, x: &[Rational]) -> bool {
        if x.len() != self.ambient {
            return false;
        }
        let s = Rational::from_integer(self.scale.clone());
        let lhs = |a: &[BigInt]| exact_arith::dot_int_rat(a, x) * &s;
        self.eqs.iter().all(|(a, b)| lhs(a) == Rational::from_integer(b.clone()))
            && self.ineqs.iter().all(|(a, b)| lhs(a) <= Rational::from_integer(b.clone()))
    }

    /// Support function `max_{x ∈ P} u·x`.
    pub fn support(&self, u: &[Rational]) -> Rational {
        self.vertices
            .iter()
            .map(|v| exact_arith::dot(u, v))
            .max()
            .expect("nonempty")
    }

    /// Euclidean volume in the ambient dimension (0 unless full-dimensional).
    pub fn volume(&self) -> Rational {
        self.volume.get_or_init(|| self.volume_with(ApexRule::Lowest)).clone()
    }

    /// Volume through the pulling triangulation with the given apex rule.
    pub fn volume_with(&self, rule: ApexRule) -> Rational {
        match self.triangulation(rule) {
            None => Rational::zero(),
            Some(simplices) => {
                let n = self.ambient;
                let total = hull::simplex_sum_abs(&self.lattice, &simplices);
                Rational::new(total, factorial(n) * self.scale.pow(n as u32))
            }
        }
    }

    /// Pulling triangulation as lists of vertex positions (full-dimensional only).
    pub fn triangulation(&self, rule: ApexRule) -> Option<Vec<Vec<usize>>> {
        self.is_full_dimensional()
            .then(|| hull::pulling_triangulation(self.lattice.len(), &self.incidence, self.ambient, rule))
    }

    /// Volume inside the affine span, normalized by the induced lattice
    /// `Z^n ∩ (span − v_0)`. A point has relative volume 1.
    pub fn relative_volume(&self) -> Rational {
        let r = self.span_dim;
        if r == 0 {
            return Rational::one();
        }
        if r == self.ambient {
            return self.volume();
        }
        let base = &self.lattice[0];
        let dirs: Vec<Vec<BigInt>> = self.lattice[1..]
            .iter()
            .map(|v| v.iter().zip(base).map(|(a, b)| a - b).collect())
            .collect();
        let basis = exact_arith::saturated_basis(&dirs, self.ambient);
        // Coordinates with respect to the lattice basis, read off on pivot columns.
        let w: Vec<Vec<Rational>> = (0..r)
            .map(|row| basis.iter().map(|b| Rational::from_integer(b[self.pivots[row]].clone())).collect())
            .collect();
        let coords: Vec<Point> = self
            .vertices
            .iter()
            .map(|v| {
                let rhs: Vec<Rational> = self.pivots.iter().map(|&p| &v[p] - &self.vertices[0][p]).collect();
                exact_arith::solve_rational(&w, &rhs).expect("pivot block of a span basis is nonsingular")
            })
            .collect();
        Polytope::convex_hull(&coords).expect("nonempty").volume()
    }

    pub fn minkowski_sum(&self, other: &Polytope) -> Result<Polytope, PolytopeError> {
        if self.ambient != other.ambient {
            return Err(PolytopeError::Shape(format!(
                "Minkowski sum of dimensions {} and {}",
                self.ambient, other.ambient
            )));
        }
        let scale = self.scale.lcm(&other.scale);
        let fa = &scale / &self.scale;
        let fb = &scale / &other.scale;
        let mut pts = Vec::with_capacity(self.lattice.len() * other.lattice.len());
        for a in &self.lattice {
            for b in &other.lattice {
                pts.push(a.iter().zip(b).map(|(x, y)| x * &fa + y * &fb).collect());
            }
        }
        Ok(Self::from_scaled(pts, scale))
    }

    /// `λ·P` for a nonnegative rational `λ`.
    pub fn dilate(&self, lambda: &Rational) -> Result<Polytope, PolytopeError> {
        if lambda.is_negative() {
            return Err(PolytopeError::Domain("negative dilation factor".into()));
        }
        let pts: Vec<Point> = self.vertices.iter().map(|v| v.iter().map(|x| x * lambda).collect()).collect();
        Self::convex_hull(&pts)
    }

    pub fn translate(&self, t: &[Rational]) -> Result<Polytope, PolytopeError> {
        if t.len() != self.ambient {
            return Err(PolytopeError::Shape("translation vector length".into()));
        }
        let pts: Vec<Point> = self.vertices.iter().map(|v| v.iter().zip(t).map(|(a, b)| a + b).collect()).collect();
        Self::convex_hull(&pts)
    }

    /// Image under `x ↦ M·x` for a square or rectangular integer matrix `M`.
    pub fn linear_image(&self, m: &IntMatrix) -> Result<Polytope, PolytopeError> {
        if m.cols() != self.ambient {
            return Err(PolytopeError::Shape(format!("matrix has {} columns, polytope dimension {}", m.cols(), self.ambient)));
        }
        let pts: Vec<Vec<BigInt>> = self
            .lattice
            .iter()
            .map(|v| (0..m.rows()).map(|r| big_dot(m.row(r), v)).collect())
            .collect();
        Ok(Self::from_scaled(pts, self.scale.clone()))
    }

    /// Image under the affine map `x ↦ M·x + t` with a rational matrix given by rows.
    pub fn affine_image(&self, m: &[Vec<Rational>], t: &[Rational]) -> Result<Polytope, PolytopeError> {
        if m.iter().any(|r| r.len() != self.ambient) || t.len() != m.len() {
            return Err(PolytopeError::Shape("affine map shape".into()));
        }
        let pts: Vec<Point> = self
            .vertices
            .iter()
            .map(|v| m.iter().zip(t).map(|(row, ti)| exact_arith::dot(row, v) + ti).collect())
            .collect();
        Self::convex_hull(&pts)
    }

    /// Coordinate projection onto `keep` (in the given order).
    pub fn project(&self, keep: &[usize]) -> Result<Polytope, PolytopeError> {
        if keep.is_empty() {
            return Err(PolytopeError::Shape("projection onto no coordinates".into()));
        }
        if let Some(&bad) = keep.iter().find(|&&i| i >= self.ambient) {
            return Err(PolytopeError::Shape(format!("coordinate {bad} out of range for dimension {}", self.ambient)));
        }
        let pts: Vec<Vec<BigInt>> = self.lattice.iter().map(|v| keep.iter().map(|&i| v[i].clone()).collect()).collect();
        Ok(Self::from_scaled(pts, self.scale.clone()))
    }

    /// First `k` coordinates.
    pub fn project_head(&self, k: usize) -> Result<Polytope, PolytopeError> {
        self.project(&(0..k).collect::<Vec<_>>())
    }

    /// Last `n − k` coordinates.
    pub fn project_tail(&self, k: usize) -> Result<Polytope, PolytopeError> {
        self.project(&(k..self.ambient).collect::<Vec<_>>())
    }

    /// Positions of the vertices maximizing `direction·x`.
    pub fn argmax_vertices(&self, direction: &[Rational]) -> Vec<usize> {
        let vals: Vec<Rational> = self.vertices.iter().map(|v| exact_arith::dot(direction, v)).collect();
        let best = vals.iter().max().expect("nonempty").clone();
        (0..vals.len()).filter(|&i| vals[i] == best).collect()
    }

    /// The face maximizing `direction·x`.
    pub fn face(&self, direction: &[Rational]) -> Result<Polytope, PolytopeError> {
        if direction.len() != self.ambient {
            return Err(PolytopeError::Shape("direction length".into()));
        }
        if direction.iter().all(Zero::is_zero) {
            return Err(PolytopeError::Domain("zero direction".into()));
        }
        let pts: Vec<Vec<BigInt>> = self.argmax_vertices(direction).into_iter().map(|i| self.lattice[i].clone()).collect();
        Ok(Self::from_scaled(pts, self.scale.clone()))
    }

    /// Pairs of vertex positions spanning an edge.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let nv = self.lattice.len();
        let r = self.span_dim;
        let mut out = Vec::new();
        if r == 0 {
            return out;
        }
        for a in 0..nv {
            for b in a + 1..nv {
                let normals = self
                    .incidence
                    .iter()
                    .zip(&self.ineqs)
                    .filter(|(inc, _)| inc.contains(a) && inc.contains(b))
                    .map(|(_, (n, _))| self.pivots.iter().map(|&p| n[p].clone()).collect::<Vec<BigInt>>());
                let rank = kint::rank_up_to(normals, r, r - 1).expect("BigInt rank");
                if rank == r - 1 {
                    out.push((a, b));
                }
            }
        }
        out
    }

    /// Intersection with the hyperplane `normal·x = offset`; `None` if empty.
    pub fn section(&self, normal: &[Rational], offset: &Rational) -> Option<Polytope> {
        let vals: Vec<Rational> = self.vertices.iter().map(|v| exact_arith::dot(normal, v) - offset).collect();
        let mut pts: Vec<Point> = (0..vals.len()).filter(|&i| vals[i].is_zero()).map(|i| self.vertices[i].clone()).collect();
        for (a, b) in self.edges() {
            if (vals[a].is_positive() && vals[b].is_negative()) || (vals[a].is_negative() && vals[b].is_positive()) {
                let t = &vals[a] / (&vals[a] - &vals[b]);
                pts.push(
                    self.vertices[a]
                        .iter()
                        .zip(&self.vertices[b])
                        .map(|(x, y)| x + (y - x) * &t)
                        .collect(),
                );
            }
        }
        if pts.is_empty() {
            None
        } else {
            Some(Polytope::convex_hull(&pts).expect("nonempty"))
        }
    }

    /// All integer points of `m·P`, in lexicographic order.
    pub fn lattice_points(&self, m: u64) -> Result<Vec<Vec<BigInt>>, PolytopeError> {
        if m == 0 {
            return Err(PolytopeError::Domain("level must be positive".into()));
        }
        let mb = BigInt::from(m);
        let n = self.ambient;
        let mut lo = Vec::with_capacity(n);
        let mut hi = Vec::with_capacity(n);
        let mut count: u64 = 1;
        for j in 0..n {
            let min = self.lattice.iter().map(|v| &v[j]).min().unwrap() * &mb;
            let max = self.lattice.iter().map(|v| &v[j]).max().unwrap() * &mb;
            let l = min.div_ceil(&self.scale);
            let h = max.div_floor(&self.scale);
            if h < l {
                return Ok(Vec::new());
            }
            let width = (&h - &l + 1u32).to_u64().unwrap_or(u64::MAX);
            count = count.saturating_mul(width);
            lo.push(l);
            hi.push(h);
        }
        if count > LATTICE_CAPACITY {
            return Err(PolytopeError::Capacity(format!(
                "{count} bounding-box candidates exceed the limit of {LATTICE_CAPACITY}"
            )));
        }
        let scaled = |rows: &[(Vec<BigInt>, BigInt)]| -> Vec<(Vec<BigInt>, BigInt)> {
            rows.iter().map(|(a, b)| (a.iter().map(|x| x * &self.scale).collect(), b * &mb)).collect()
        };
        let ineqs = scaled(&self.ineqs);
        let eqs = scaled(&self.eqs);
        if let Some(out) = hull::enumerate_box::<i128>(&lo, &hi, &ineqs, &eqs) {
            return Ok(out);
        }
        Ok(hull::enumerate_box::<BigInt>(&lo, &hi, &ineqs, &eqs).expect("BigInt cannot overflow"))
    }

    /// Canonical JSON text (vertices sorted), used for fingerprints.
    pub fn to_json_string(&self) -> String {
        serde_json::to_string(&PolytopeJson::from(self)).expect("serializable")
    }

    pub fn from_json_str(s: &str) -> Result<Polytope, PolytopeError> {
        let j: PolytopeJson = serde_json::from_str(s).map_err(|e| PolytopeError::Json(e.to_string()))?;
        j.to_polytope()
    }

    /// Lexicographic comparison helper used for deterministic ordering.
    pub fn cmp_vertices(&self, other: &Polytope) -> Ordering {
        self.vertices.cmp(&other.vertices)
    }
}

/// Chain of faces `F_0 ⊋ F_1 ⊋ … ⊋ F_n` with `dim F_i = n − i`.
#[derive(Debug, Clone)]
pub struct FaceChain {
    faces: Vec<Polytope>,
}

impl FaceChain {
    pub fn new(faces: Vec<Polytope>) -> Result<Self, PolytopeError> {
        let n = faces.first().ok_or_else(|| PolytopeError::Domain("empty face chain".into()))?.dim();
        if faces.len() != n + 1 {
            return Err(PolytopeError::Shape(format!("a chain from dimension {n} needs {} faces", n + 1)));
        }
        for (i, f) in faces.iter().enumerate() {
            if f.dim() != n - i {
                return Err(PolytopeError::Domain(format!("face {i} has dimension {}, expected {}", f.dim(), n - i)));
            }
            if i > 0 && !f.vertices().iter().all(|v| faces[i - 1].vertex_index(v).is_some()) {
                return Err(PolytopeError::Domain(format!("face {i} is not a face of face {}", i - 1)));
            }
        }
        Ok(Self { faces })
    }

    pub fn faces(&self) -> &[Polytope] {
        &self.faces
    }

    /// The terminal vertex `F_n`.
    pub fn point(&self) -> &Point {
        &self.faces.last().expect("nonempty").vertices()[0]
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact_arith::{frac, int};

    fn rpt(v: &[i64]) -> Point {
        v.iter().map(|&x| int(x)).collect()
    }

    #[test]
    fn triangle_drops_interior_point() {
        let p = Polytope::convex_hull(&[rpt(&[0, 0]), rpt(&[1, 0]), rpt(&[0, 1]), vec![frac(1, 2), frac(1, 2)]]).unwrap();
        assert_eq!(p.num_vertices(), 3);
        assert_eq!(p.volume(), frac(1, 2));
    }

    #[test]
    fn empty_input_is_domain_error() {
        assert!(matches!(Polytope::convex_hull(&[]), Err(PolytopeError::Domain(_))));
    }

    #[test]
    fn cube_and_simplex_volumes() {
        for n in 1..=5 {
            let c = Polytope::unit_cube(n);
            assert_eq!(c.facets().unwrap().len(), 2 * n);
            assert_eq!(c.volume(), int(1));
            let s = Polytope::standard_simplex(n);
            assert_eq!(s.volume(), Rational::new(BigInt::one(), factorial(n)));
        }
    }

    #[test]
    fn rational_vertices_scale_out() {
        let p = Polytope::convex_hull(&[rpt(&[0, 0]), vec![frac(1, 3), int(0)], vec![int(0), frac(1, 2)]]).unwrap();
        assert_eq!(p.volume(), frac(1, 12));
        assert!(!p.is_lattice());
    }

    #[test]
    fn relative_volume_conventions() {
        let seg = Polytope::from_int_points(&[vec![0, 0], vec![2, 2]]).unwrap();
        assert_eq!(seg.dim(), 1);
        assert_eq!(seg.volume(), int(0));
        assert_eq!(seg.relative_volume(), int(2));
        let pt = Polytope::from_int_points(&[vec![3, 4, 5]]).unwrap();
        assert_eq!(pt.relative_volume(), int(1));
        let tri = Polytope::from_int_points(&[vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1]]).unwrap();
        assert_eq!(tri.relative_volume(), frac(1, 2));
    }

    #[test]
    fn lower_dimensional_membership() {
        let tri = Polytope::from_int_points(&[vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1]]).unwrap();
        assert!(tri.contains(&[frac(1, 3), frac(1, 3), frac(1, 3)]));
        assert!(!tri.contains(&[frac(1, 3), frac(1, 3), frac(1, 4)]));
        assert!(!tri.contains(&[int(2), int(-1), int(0)]));
        assert_eq!(tri.lattice_points(2).unwrap().len(), 6);
    }

    #[test]
    fn face_and_projection_examples() {
        let c = Polytope::unit_cube(3);
        let f = c.face(&[int(1), int(0), int(0)]).unwrap();
        assert_eq!(f.num_vertices(), 4);
        assert!(f.vertices().iter().all(|v| v[0] == int(1)));
        assert_eq!(c.project(&[0, 1]).unwrap(), Polytope::unit_cube(2));
        let s = Polytope::standard_simplex(3);
        let top = s.face(&[int(1), int(1), int(1)]).unwrap();
        assert_eq!(top.num_vertices(), 3);
        assert_eq!(s.project_head(2).unwrap(), Polytope::standard_simplex(2));
        assert!(c.face(&[int(0), int(0), int(0)]).is_err());
        assert!(c.project(&[3]).is_err());
    }

    #[test]
    fn minkowski_sum_examples() {
        let a = Polytope::from_int_points(&[vec![0, 0], vec![1, 0]]).unwrap();
        let b = Polytope::from_int_points(&[vec![0, 0], vec![0, 1]]).unwrap();
        assert_eq!(a.minkowski_sum(&b).unwrap(), Polytope::unit_cube(2));
        let t = Polytope::from_int_points(&[vec![2, 3]]).unwrap();
        let s = Polytope::standard_simplex(2);
        assert_eq!(s.minkowski_sum(&t).unwrap(), s.translate(&rpt(&[2, 3])).unwrap());
        assert!(s.minkowski_sum(&Polytope::unit_cube(3)).is_err());
    }

    #[test]
    fn lattice_point_counts() {
        for n in 1..=4 {
            assert_eq!(Polytope::unit_cube(n).lattice_points(1).unwrap().len(), 1 << n);
        }
        let s = Polytope::standard_simplex(2);
        for d in 1..=6u64 {
            assert_eq!(s.lattice_points(d).unwrap().len() as u64, (d + 1) * (d + 2) / 2);
        }
        let big = Polytope::unit_cube(3);
        assert!(matches!(big.lattice_points(1000), Err(PolytopeError::Capacity(_))));
    }

    #[test]
    fn section_of_cube() {
        let c = Polytope::unit_cube(3);
        let s = c.section(&[int(1), int(1), int(1)], &frac(3, 2)).unwrap();
        assert_eq!(s.num_vertices(), 6);
        assert_eq!(s.dim(), 2);
        assert!(c.section(&[int(1), int(0), int(0)], &int(2)).is_none());
    }

    #[test]
    fn face_chain_validation() {
        let s = Polytope::standard_simplex(2);
        let e = s.face(&[int(0), int(-1)]).unwrap();
        let v = Polytope::from_int_points(&[vec![0, 0]]).unwrap();
        let chain = FaceChain::new(vec![s.clone(), e.clone(), v]).unwrap();
        assert_eq!(chain.point(), &rpt(&[0, 0]));
        let bad = Polytope::from_int_points(&[vec![5, 5]]).unwrap();
        assert!(FaceChain::new(vec![s, e, bad]).is_err());
    }
}
