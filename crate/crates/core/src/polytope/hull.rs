//! Exact incremental convex hull and pulling triangulation over integer points.
//!
//! The hull is the beneath–beyond insertion scheme written in its dual form:
//! facets are rays of the cone `{(a, b) : a·p ≤ b for inserted p}`. Inserting
//! a point splits the current facets into beyond (`a·p > b`), on and beneath
//! (`a·p < b`) classes; beyond facets are deleted and every horizon ridge
//! (an adjacent beyond/beneath pair) spawns the facet through the ridge and
//! the new point. Adjacency is decided by exact rank of the common incident
//! points.

use std::collections::HashMap;
use std::rc::Rc;

use fixedbitset::FixedBitSet;
use num_bigint::BigInt;

use crate::exact_arith::kint::{self, KInt};

/// Echelon basis that grows one row at a time.
pub(crate) struct IncrementalBasis<T> {
    rows: Vec<(usize, Vec<T>)>,
    cols: usize,
}

impl<T: KInt> IncrementalBasis<T> {
    pub fn new(cols: usize) -> Self {
        Self { rows: Vec::new(), cols }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn pivots(&self) -> Vec<usize> {
        self.rows.iter().map(|(p, _)| *p).collect()
    }

    /// Returns `Some(true)` if the row was independent and was added.
    pub fn insert(&mut self, mut row: Vec<T>) -> Option<bool> {
        for (pc, b) in &self.rows {
            if row[*pc].is_zero() {
                continue;
            }
            let f = row[*pc].clone();
            let p = b[*pc].clone();
            for j in 0..self.cols {
                row[j] = row[j].mul(&p)?.sub(&b[j].mul(&f)?)?;
            }
            kint::make_primitive(&mut row);
        }
        match (0..self.cols).find(|&j| !row[j].is_zero()) {
            Some(pc) => {
                self.rows.push((pc, row));
                Some(true)
            }
            None => Some(false),
        }
    }
}

#[derive(Debug, Clone)]
pub(crate) struct KFacet<T> {
    /// Outer normal, primitive.
    pub normal: Vec<T>,
    pub offset: T,
    /// Incident vertices, indexed by position in `KHull::vertices`.
    pub vertices: FixedBitSet,
}

#[derive(Debug, Clone)]
pub(crate) struct KHull<T> {
    pub vertices: Vec<usize>,
    pub facets: Vec<KFacet<T>>,
}

struct Ray<T> {
    coords: Vec<T>,
    incident: FixedBitSet,
}

fn eval<T: KInt>(ray: &[T], p: &[T]) -> Option<T> {
    let d = p.len();
    kint::dot(&ray[..d], p)?.sub(&ray[d])
}

/// Hull of distinct points affinely spanning `R^d` (`d ≥ 1`). `None` on overflow.
pub(crate) fn hull_full<T: KInt>(points: &[Vec<T>], d: usize) -> Option<KHull<T>> {
    let n = points.len();
    // Initial simplex.
    let mut basis = IncrementalBasis::new(d);
    let mut simplex = vec![0usize];
    for (i, p) in points.iter().enumerate().skip(1) {
        let diff: Option<Vec<T>> = p.iter().zip(&points[0]).map(|(a, b)| a.sub(b)).collect();
        if basis.insert(diff?)? {
            simplex.push(i);
            if simplex.len() == d + 1 {
                break;
            }
        }
    }
    assert_eq!(simplex.len(), d + 1, "hull_full needs full-dimensional input");

    let homog = |i: usize| -> Vec<T> {
        let mut r = points[i].clone();
        r.push(T::one().neg());
        r
    };

    let mut rays: Vec<Ray<T>> = Vec::with_capacity(2 * (d + 1));
    for j in 0..=d {
        let rows: Vec<Vec<T>> = simplex.iter().enumerate().filter(|&(l, _)| l != j).map(|(_, &i)| homog(i)).collect();
        // Generalized cross product of the d rows in R^{d+1}.
        let mut coords = Vec::with_capacity(d + 1);
        for c in 0..=d {
            let minor: Vec<Vec<T>> = rows
                .iter()
                .map(|r| r.iter().enumerate().filter(|&(k, _)| k != c).map(|(_, v)| v.clone()).collect())
                .collect();
            let m = kint::det_or_zero(minor)?;
            coords.push(if c % 2 == 0 { m } else { m.neg() });
        }
        if eval(&coords, &points[simplex[j]])?.signum() > 0 {
            coords = coords.iter().map(KInt::neg).collect();
        }
        kint::make_primitive(&mut coords);
        let mut incident = FixedBitSet::with_capacity(n);
        for (l, &i) in simplex.iter().enumerate() {
            if l != j {
                incident.insert(i);
            }
        }
        rays.push(Ray { coords, incident });
    }

    let mut in_simplex = FixedBitSet::with_capacity(n);
    for &i in &simplex {
        in_simplex.insert(i);
    }

    for p_idx in 0..n {
        if in_simplex.contains(p_idx) {
            continue;
        }
        let p = &points[p_idx];
        let mut vals = Vec::with_capacity(rays.len());
        for r in &rays {
            vals.push(eval(&r.coords, p)?);
        }
        if vals.iter().all(|v| v.signum() <= 0) {
            for (r, v) in rays.iter_mut().zip(&vals) {
                if v.is_zero() {
                    r.incident.insert(p_idx);
                }
            }
            continue;
        }
        let beyond: Vec<usize> = (0..rays.len()).filter(|&i| vals[i].signum() > 0).collect();
        let beneath: Vec<usize> = (0..rays.len()).filter(|&i| vals[i].signum() < 0).collect();
        let mut fresh: Vec<Ray<T>> = Vec::new();
        for &i in &beyond {
            for &j in &beneath {
                let mut common = rays[i].incident.clone();
                common.intersect_with(&rays[j].incident);
                if common.count_ones(..) + 1 < d {
                    continue;
                }
                // Double-description adjacency: no third facet contains the common incidences.
                let blocked = rays
                    .iter()
                    .enumerate()
                    .any(|(t, r)| t != i && t != j && common.is_subset(&r.incident));
                if blocked {
                    continue;
                }
                let (vi, vj) = (&vals[i], &vals[j]);
                let mut coords = Vec::with_capacity(d + 1);
                for (a, b) in rays[j].coords.iter().zip(&rays[i].coords) {
                    coords.push(a.mul(vi)?.sub(&b.mul(vj)?)?);
                }
                kint::make_primitive(&mut coords);
                common.insert(p_idx);
                fresh.push(Ray { coords, incident: common });
            }
        }
        let mut kept: Vec<Ray<T>> = Vec::with_capacity(rays.len() + fresh.len());
        for (r, v) in rays.into_iter().zip(&vals) {
            match v.signum() {
                1 => {}
                0 => {
                    let mut r = r;
                    r.incident.insert(p_idx);
                    kept.push(r);
                }
                _ => kept.push(r),
            }
        }
        kept.extend(fresh);
        rays = kept;
    }

    // A point is a vertex iff the normals of the facets through it span R^d.
    let mut vertices = Vec::new();
    for i in 0..n {
        let normals = rays.iter().filter(|r| r.incident.contains(i)).map(|r| r.coords[..d].to_vec());
        if kint::rank_up_to(normals, d, d)? == d {
            vertices.push(i);
        }
    }
    let position: HashMap<usize, usize> = vertices.iter().enumerate().map(|(k, &i)| (i, k)).collect();
    let facets = rays
        .into_iter()
        .map(|r| {
            let mut bits = FixedBitSet::with_capacity(vertices.len());
            for i in r.incident.ones() {
                if let Some(&k) = position.get(&i) {
                    bits.insert(k);
                }
            }
            let mut coords = r.coords;
            let offset = coords.pop().unwrap();
            KFacet { normal: coords, offset, vertices: bits }
        })
        .collect();
    Some(KHull { vertices, facets })
}

/// Affine span of a point set: rank and the pivot coordinates on which the
/// coordinate projection is injective along the span.
pub(crate) fn affine_span<T: KInt>(points: &[Vec<T>]) -> Option<(usize, Vec<usize>)> {
    let d = points.first().map_or(0, Vec::len);
    let mut basis = IncrementalBasis::new(d);
    for p in points.iter().skip(1) {
        let diff: Option<Vec<T>> = p.iter().zip(&points[0]).map(|(a, b)| a.sub(b)).collect();
        basis.insert(diff?)?;
        if basis.rank() == d {
            break;
        }
    }
    let mut pivots = basis.pivots();
    pivots.sort_unstable();
    Some((basis.rank(), pivots))
}

/// Hull of arbitrary distinct points, in the pivot coordinates of the span.
#[derive(Debug, Clone)]
pub(crate) struct HullOut {
    pub span_dim: usize,
    pub pivots: Vec<usize>,
    /// Indices into the input points.
    pub vertices: Vec<usize>,
    /// Facets in pivot coordinates (empty when `span_dim == 0`).
    pub facets: Vec<KFacet<BigInt>>,
}

fn hull_any<T: KInt>(points: &[Vec<T>]) -> Option<HullOut> {
    let (r, pivots) = affine_span(points)?;
    if r == 0 {
        return Some(HullOut { span_dim: 0, pivots, vertices: vec![0], facets: Vec::new() });
    }
    let projected: Vec<Vec<T>> = points.iter().map(|p| pivots.iter().map(|&c| p[c].clone()).collect()).collect();
    let h = hull_full(&projected, r)?;
    Some(HullOut {
        span_dim: r,
        pivots,
        vertices: h.vertices,
        facets: h
            .facets
            .into_iter()
            .map(|f| KFacet {
                normal: f.normal.iter().map(KInt::to_big).collect(),
                offset: f.offset.to_big(),
                vertices: f.vertices,
            })
            .collect(),
    })
}

/// Hull of distinct integer points; machine integers first, `BigInt` on overflow.
pub(crate) fn hull_points(points: &[Vec<BigInt>]) -> HullOut {
    if let Some(small) = kint::convert_points::<i128>(points) {
        if let Some(out) = hull_any(&small) {
            return out;
        }
    }
    hull_any(points).expect("BigInt arithmetic cannot overflow")
}

/// Which vertex of a face is pulled first.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ApexRule {
    Lowest,
    Highest,
}

/// Pulling triangulation of a full-dimensional polytope of dimension `d`,
/// given its facet-vertex incidences. Each simplex lists `d + 1` vertex
/// positions.
pub(crate) fn pulling_triangulation(nv: usize, facets: &[FixedBitSet], d: usize, rule: ApexRule) -> Vec<Vec<usize>> {
    let mut all = FixedBitSet::with_capacity(nv);
    all.insert_range(..);
    let mut memo: HashMap<FixedBitSet, Rc<Vec<Vec<usize>>>> = HashMap::new();
    let out = triangulate_face(&all, d, facets, rule, &mut memo);
    out.as_ref().clone()
}

fn triangulate_face(
    face: &FixedBitSet,
    dim: usize,
    facets: &[FixedBitSet],
    rule: ApexRule,
    memo: &mut HashMap<FixedBitSet, Rc<Vec<Vec<usize>>>>,
) -> Rc<Vec<Vec<usize>>> {
    if let Some(hit) = memo.get(face) {
        return hit.clone();
    }
    let apex = match rule {
        ApexRule::Lowest => face.minimum(),
        ApexRule::Highest => face.maximum(),
    }
    .expect("faces are nonempty");
    let result = if dim == 0 {
        vec![vec![apex]]
    } else {
        let mut out = Vec::new();
        for sub in sub_facets(face, facets) {
            if sub.contains(apex) {
                continue;
            }
            for s in triangulate_face(&sub, dim - 1, facets, rule, memo).iter() {
                let mut s = s.clone();
                s.push(apex);
                out.push(s);
            }
        }
        out
    };
    let rc = Rc::new(result);
    memo.insert(face.clone(), rc.clone());
    rc
}

/// Facets of `face`: the inclusion-maximal proper nonempty intersections of
/// `face` with facets of the whole polytope.
fn sub_facets(face: &FixedBitSet, facets: &[FixedBitSet]) -> Vec<FixedBitSet> {
    let total = face.count_ones(..);
    let mut cands: Vec<(usize, FixedBitSet)> = Vec::new();
    for f in facets {
        let mut s = face.clone();
        s.intersect_with(f);
        let c = s.count_ones(..);
        if c == 0 || c == total {
            continue;
        }
        if cands.iter().any(|(_, t)| *t == s) {
            continue;
        }
        cands.push((c, s));
    }
    cands.sort_by(|a, b| b.0.cmp(&a.0));
    let mut maximal: Vec<FixedBitSet> = Vec::new();
    for (_, s) in cands {
        if !maximal.iter().any(|m| s.is_subset(m)) {
            maximal.push(s);
        }
    }
    maximal
}

/// `Σ sign·det(v_1 - v_0, …, v_d - v_0)` over simplices, with `signs` either
/// given or taken as the sign of each determinant (absolute values).
pub(crate) fn signed_simplex_sum<T: KInt>(coords: &[Vec<T>], simplices: &[Vec<usize>], signs: Option<&[i8]>) -> Option<T> {
    let mut acc = T::zero();
    for (k, s) in simplices.iter().enumerate() {
        let base = &coords[s[0]];
        let mut m = Vec::with_capacity(s.len() - 1);
        for &v in &s[1..] {
            let row: Option<Vec<T>> = coords[v].iter().zip(base).map(|(a, b)| a.sub(b)).collect();
            m.push(row?);
        }
        let det = kint::det_or_zero(m)?;
        let term = match signs {
            Some(sg) if sg[k] < 0 => det.neg(),
            Some(_) => det,
            None => det.abs(),
        };
        acc = acc.add(&term)?;
    }
    Some(acc)
}

/// Sign of every simplex determinant (nonzero for a genuine triangulation).
pub(crate) fn simplex_signs<T: KInt>(coords: &[Vec<T>], simplices: &[Vec<usize>]) -> Option<Vec<i8>> {
    simplices
        .iter()
        .map(|s| {
            let base = &coords[s[0]];
            let m: Option<Vec<Vec<T>>> = s[1..]
                .iter()
                .map(|&v| coords[v].iter().zip(base).map(|(a, b)| a.sub(b)).collect())
                .collect();
            kint::det_or_zero(m?).map(|d| d.signum() as i8)
        })
        .collect()
}

pub(crate) fn simplex_sum_abs(coords: &[Vec<BigInt>], simplices: &[Vec<usize>]) -> BigInt {
    if let Some(small) = kint::convert_points::<i128>(coords) {
        if let Some(v) = signed_simplex_sum_i128(&small, simplices, None) {
            return v.to_big();
        }
    }
    signed_simplex_sum(coords, simplices, None).expect("BigInt cannot overflow")
}

pub(crate) fn enumerate_box<T: KInt>(
    lo: &[BigInt],
    hi: &[BigInt],
    ineqs: &[(Vec<BigInt>, BigInt)],
    eqs: &[(Vec<BigInt>, BigInt)],
) -> Option<Vec<Vec<BigInt>>> {
    let conv = |rows: &[(Vec<BigInt>, BigInt)]| -> Option<Vec<(Vec<T>, T)>> {
        rows.iter()
            .map(|(a, b)| Some((a.iter().map(T::try_from_big).collect::<Option<Vec<T>>>()?, T::try_from_big(b)?)))
            .collect()
    };
    let ineqs = conv(ineqs)?;
    let eqs = conv(eqs)?;
    let lo: Vec<T> = lo.iter().map(T::try_from_big).collect::<Option<_>>()?;
    let hi: Vec<T> = hi.iter().map(T::try_from_big).collect::<Option<_>>()?;
    let n = lo.len();
    let mut out = Vec::new();
    let mut x = lo.clone();
    loop {
        let mut ok = true;
        for (a, b) in &eqs {
            if kint::dot(a, &x)? != *b {
                ok = false;
                break;
            }
        }
        if ok {
            for (a, b) in &ineqs {
                if kint::dot(a, &x)? > *b {
                    ok = false;
                    break;
                }
            }
        }
        if ok {
            out.push(x.iter().map(KInt::to_big).collect());
        }
        // Odometer increment, last coordinate fastest.
        let mut j = n;
        loop {
            if j == 0 {
                return Some(out);
            }
            j -= 1;
            if x[j] < hi[j] {
                x[j] = x[j].add(&T::one())?;
                for t in j + 1..n {
                    x[t] = lo[t].clone();
                }
                break;
            }
        }
    }
}

/// Vertex coordinates of `Σ c_i P_i`: vertex `v` sits at
/// `Σ c_i · bodies[i][decomposition[v][i]]`.
pub(crate) fn combination_coords<T: KInt>(
    bodies: &[Vec<Vec<BigInt>>],
    decomposition: &[Vec<usize>],
    coeffs: &[u32],
) -> Option<Vec<Vec<T>>> {
    let dim = bodies[0][0].len();
    let bodies: Vec<Vec<Vec<T>>> = bodies.iter().map(|b| kint::convert_points::<T>(b)).collect::<Option<_>>()?;
    let cs: Vec<T> = coeffs.iter().map(|&c| T::try_from_big(&BigInt::from(c))).collect::<Option<_>>()?;
    let mut coords = Vec::with_capacity(decomposition.len());
    for dec in decomposition {
        let mut p = vec![T::zero(); dim];
        for (i, &vi) in dec.iter().enumerate() {
            if cs[i].is_zero() {
                continue;
            }
            for (x, y) in p.iter_mut().zip(&bodies[i][vi]) {
                *x = x.add(&y.mul(&cs[i])?)?;
            }
        }
        coords.push(p);
    }
    Some(coords)
}

const SMALL: usize = 8;

/// Bareiss determinant on a stack matrix; `Some(0)` when singular.
fn det_small(m: &mut [[i128; SMALL]; SMALL], n: usize) -> Option<i128> {
    let mut negate = false;
    let mut prev: i128 = 1;
    for k in 0..n {
        if m[k][k] == 0 {
            let p = match (k + 1..n).find(|&i| m[i][k] != 0) {
                Some(p) => p,
                None => return Some(0),
            };
            m.swap(k, p);
            negate = !negate;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = m[i][j].checked_mul(m[k][k])?.checked_sub(m[i][k].checked_mul(m[k][j])?)?;
                m[i][j] = v / prev;
            }
        }
        prev = m[k][k];
    }
    let d = if n == 0 { 1 } else { m[n - 1][n - 1] };
    Some(if negate { -d } else { d })
}

/// Machine-integer version of [`signed_simplex_sum`] without allocation.
pub(crate) fn signed_simplex_sum_i128(coords: &[Vec<i128>], simplices: &[Vec<usize>], signs: Option<&[i8]>) -> Option<i128> {
    let n = match simplices.first() {
        Some(s) => s.len() - 1,
        None => return Some(0),
    };
    if n > SMALL {
        return signed_simplex_sum(coords, simplices, signs);
    }
    let mut acc: i128 = 0;
    let mut m = [[0i128; SMALL]; SMALL];
    for (k, s) in simplices.iter().enumerate() {
        let base = &coords[s[0]];
        for (r, &v) in s[1..].iter().enumerate() {
            for c in 0..n {
                m[r][c] = coords[v][c].checked_sub(base[c])?;
            }
        }
        let det = det_small(&mut m, n)?;
        let term = match signs {
            Some(sg) if sg[k] < 0 => -det,
            Some(_) => det,
            None => det.abs(),
        };
        acc = acc.checked_add(term)?;
    }
    Some(acc)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pts(v: &[&[i64]]) -> Vec<Vec<i128>> {
        v.iter().map(|p| p.iter().map(|&x| x as i128).collect()).collect()
    }

    #[test]
    fn square_with_interior_and_edge_points() {
        let p = pts(&[&[0, 0], &[2, 0], &[0, 2], &[2, 2], &[1, 1], &[1, 0]]);
        let h = hull_full(&p, 2).unwrap();
        assert_eq!(h.vertices, vec![0, 1, 2, 3]);
        assert_eq!(h.facets.len(), 4);
        for f in &h.facets {
            assert_eq!(f.vertices.count_ones(..), 2);
        }
    }

    #[test]
    fn cube_facets_and_triangulation() {
        let mut c = Vec::new();
        for m in 0..8i64 {
            c.push(vec![(m & 1) as i128, ((m >> 1) & 1) as i128, ((m >> 2) & 1) as i128]);
        }
        let h = hull_full(&c, 3).unwrap();
        assert_eq!(h.vertices.len(), 8);
        assert_eq!(h.facets.len(), 6);
        let inc: Vec<FixedBitSet> = h.facets.iter().map(|f| f.vertices.clone()).collect();
        for rule in [ApexRule::Lowest, ApexRule::Highest] {
            let t = pulling_triangulation(8, &inc, 3, rule);
            let coords: Vec<Vec<i128>> = h.vertices.iter().map(|&i| c[i].clone()).collect();
            assert_eq!(signed_simplex_sum(&coords, &t, None).unwrap(), 6);
        }
    }

    #[test]
    fn degenerate_span_is_detected() {
        let p = pts(&[&[0, 0, 0], &[1, 1, 0], &[2, 2, 0], &[0, 1, 0]]);
        let (r, piv) = affine_span(&p).unwrap();
        assert_eq!(r, 2);
        assert_eq!(piv, vec![0, 1]);
    }

    #[test]
    fn bigint_fallback_on_huge_coordinates() {
        let big: BigInt = BigInt::from(1) << 100;
        let p = vec![
            vec![BigInt::from(0), BigInt::from(0)],
            vec![big.clone(), BigInt::from(0)],
            vec![BigInt::from(0), big.clone()],
            vec![big.clone(), big],
        ];
        let out = hull_points(&p);
        assert_eq!(out.vertices.len(), 4);
        assert_eq!(out.facets.len(), 4);
    }
}
