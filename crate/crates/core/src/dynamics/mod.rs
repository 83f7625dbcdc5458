//! Degrees of monomial self-maps of toric varieties.
//!
//! The map with matrix `M` sends `x` to `(x^{M_1}, …, x^{M_n})`, row `i` being
//! the exponent vector of component `i`. It pulls the character `χ^u` back to
//! `χ^{Mᵀu}`, so the pullback of the divisor of `H` has polytope `Mᵀ·H` and
//! `deg_{i,H}(f) = MV(H^{n−i}, (Mᵀ·H)^i)`. Composition `f ∘ g` has matrix
//! `M_f·M_g`.

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::exact_arith::{binomial, rational_to_f64, IntMatrix, Rational};
use crate::inequalities::{fingerprint_text, InequalityReport};
use crate::intersection::{mixed_sequence, IntersectionError};
use crate::polytope::{Polytope, PolytopeError};

/// Largest matrix entry allowed when iterating a map.
pub const ENTRY_CAPACITY: i64 = 1_000_000_000_000;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum DynamicsError {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("shape error: {0}")]
    Shape(String),
    #[error("capacity exceeded: {0}")]
    Capacity(String),
    #[error(transparent)]
    Intersection(#[from] IntersectionError),
}

impl From<PolytopeError> for DynamicsError {
    fn from(e: PolytopeError) -> Self {
        DynamicsError::Intersection(IntersectionError::Polytope(e))
    }
}

/// How a map's matrix acts on polytopes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MatrixConvention {
    /// `P ↦ M·P`.
    Direct,
    /// `P ↦ Mᵀ·P`.
    Transpose,
}

/// The action used by [`degree`]. Pulling back monomials `χ^u ↦ χ^{Mᵀu}`
/// gives the transpose; the homogenized-degree test below pins this down.
pub const CONVENTION: MatrixConvention = MatrixConvention::Transpose;

/// Dominant monomial map, i.e. one with a nonsingular exponent matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MonomialMap {
    matrix: IntMatrix,
}

impl MonomialMap {
    pub fn new(matrix: IntMatrix) -> Result<Self, DynamicsError> {
        if !matrix.is_square() {
            return Err(DynamicsError::Shape("monomial map needs a square matrix".into()));
        }
        if matrix.det().map_or(true, |d| d.is_zero()) {
            return Err(DynamicsError::Domain("singular matrix: the map is not dominant".into()));
        }
        Ok(MonomialMap { matrix })
    }

    pub fn from_rows(rows: &[Vec<i64>]) -> Result<Self, DynamicsError> {
        let m = IntMatrix::from_rows(rows).map_err(|e| DynamicsError::Shape(e.to_string()))?;
        Self::new(m)
    }

    pub fn identity(n: usize) -> Self {
        MonomialMap { matrix: IntMatrix::identity(n) }
    }

    /// `x ↦ x^q` in every coordinate.
    pub fn power_map(n: usize, q: i64) -> Result<Self, DynamicsError> {
        Self::new(IntMatrix::scalar(n, q))
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    pub fn matrix(&self) -> &IntMatrix {
        &self.matrix
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &MonomialMap) -> Result<Self, DynamicsError> {
        let m = self.matrix.mul(&other.matrix).map_err(|e| DynamicsError::Shape(e.to_string()))?;
        Self::new(m)
    }

    /// The `t`-th iterate, refusing matrices with entries above [`ENTRY_CAPACITY`].
    pub fn iterate(&self, t: u32) -> Result<Self, DynamicsError> {
        let mut acc = MonomialMap::identity(self.dim());
        for _ in 0..t {
            acc = acc.compose(self)?;
            if acc.matrix.max_abs_entry() > BigInt::from(ENTRY_CAPACITY) {
                return Err(DynamicsError::Capacity(format!(
                    "iterate {t} has matrix entries above {ENTRY_CAPACITY}"
                )));
            }
        }
        Ok(acc)
    }

    /// Polytope of the pulled-back divisor under `convention`.
    pub fn act_with(&self, h: &Polytope, convention: MatrixConvention) -> Result<Polytope, DynamicsError> {
        if h.ambient_dim() != self.dim() {
            return Err(DynamicsError::Shape("polytope and map dimensions differ".into()));
        }
        let m = match convention {
            MatrixConvention::Direct => self.matrix.clone(),
            MatrixConvention::Transpose => self.matrix.transpose(),
        };
        Ok(h.linear_image(&m)?)
    }

    pub fn pullback(&self, h: &Polytope) -> Result<Polytope, DynamicsError> {
        self.act_with(h, CONVENTION)
    }
}

fn check_polarization(h: &Polytope, n: usize) -> Result<(), DynamicsError> {
    if h.ambient_dim() != n {
        return Err(DynamicsError::Shape(format!("polarization lives in dimension {}, map in {n}", h.ambient_dim())));
    }
    if !h.is_full_dimensional() {
        return Err(DynamicsError::Domain("polarization must be full-dimensional".into()));
    }
    Ok(())
}

/// `deg_0, …, deg_n` of a map with respect to a polarization.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DegreeProfile {
    pub polarization: Polytope,
    pub degrees: Vec<Rational>,
}

pub fn degree_profile_with(f: &MonomialMap, h: &Polytope, convention: MatrixConvention) -> Result<DegreeProfile, DynamicsError> {
    check_polarization(h, f.dim())?;
    let image = f.act_with(h, convention)?;
    let degrees = mixed_sequence(h, &image)?;
    Ok(DegreeProfile { polarization: h.clone(), degrees })
}

pub fn degree_profile(f: &MonomialMap, h: &Polytope) -> Result<DegreeProfile, DynamicsError> {
    degree_profile_with(f, h, CONVENTION)
}

/// `deg_{i,H}(f) = MV(H^{n−i}, (Mᵀ·H)^i)`.
pub fn degree(f: &MonomialMap, h: &Polytope, i: usize) -> Result<Rational, DynamicsError> {
    check_index(i, f.dim())?;
    Ok(degree_profile(f, h)?.degrees.swap_remove(i))
}

/// Rows separated by `;`, entries by `,`.
pub fn format_matrix(m: &IntMatrix) -> String {
    m.row_vecs()
        .iter()
        .map(|r| r.iter().map(ToString::to_string).collect::<Vec<_>>().join(","))
        .collect::<Vec<_>>()
        .join(";")
}

/// Parses the format of [`format_matrix`].
pub fn parse_matrix(s: &str) -> Result<IntMatrix, DynamicsError> {
    let rows: Vec<Vec<i64>> = s
        .split(';')
        .map(|r| {
            r.split(',')
                .map(|x| x.trim().parse::<i64>().map_err(|_| DynamicsError::Shape(format!("bad matrix entry `{x}`"))))
                .collect()
        })
        .collect::<Result<_, _>>()?;
    IntMatrix::from_rows(&rows).map_err(|e| DynamicsError::Shape(e.to_string()))
}

fn polytope_tag<'a>(role: &'a str, p: &Polytope) -> (&'a str, String) {
    (role, p.to_json_string())
}

fn matrix_tag<'a>(role: &'a str, f: &MonomialMap) -> (&'a str, String) {
    (role, format_matrix(&f.matrix))
}

fn check_index(i: usize, n: usize) -> Result<(), DynamicsError> {
    if i > n {
        return Err(DynamicsError::Domain(format!("degree index {i} exceeds dimension {n}")));
    }
    Ok(())
}

/// `binom(n,i)/(H^n)·deg_i(f)·deg_i(g) ≥ deg_i(f∘g)`.
pub fn submult_check(f: &MonomialMap, g: &MonomialMap, h: &Polytope, i: usize) -> Result<InequalityReport, DynamicsError> {
    check_index(i, f.dim())?;
    Ok(submult_reports(f, g, h)?.swap_remove(i))
}

/// [`submult_check`] for `i = 0, …, n`, sharing the degree computations.
pub fn submult_reports(f: &MonomialMap, g: &MonomialMap, h: &Polytope) -> Result<Vec<InequalityReport>, DynamicsError> {
    let n = f.dim();
    if g.dim() != n {
        return Err(DynamicsError::Shape("maps of differing dimension".into()));
    }
    let fg = f.compose(g)?;
    let pf = degree_profile(f, h)?;
    let pg = degree_profile(g, h)?;
    let pfg = degree_profile(&fg, h)?;
    let h_n = &pf.degrees[0];
    let fp = fingerprint_text(&[polytope_tag("H", h), matrix_tag("f", f), matrix_tag("g", g)]);
    Ok((0..=n)
        .map(|i| {
            let bound = Rational::from_integer(binomial(n, i)) / h_n * &pf.degrees[i] * &pg.degrees[i];
            InequalityReport::new("submult", n, Some(i), bound, pfg.degrees[i].clone(), fp.clone())
        })
        .collect())
}

/// `binom(n,i)²·(H^{n−i}·L^i)(L^{n−i}·H^i)/(L^n)²·deg_{i,L}(f) ≥ deg_{i,H}(f)`.
pub fn repolarization_check(f: &MonomialMap, h: &Polytope, l: &Polytope, i: usize) -> Result<InequalityReport, DynamicsError> {
    check_index(i, f.dim())?;
    Ok(repolarization_reports(f, h, l)?.swap_remove(i))
}

/// [`repolarization_check`] for `i = 0, …, n`.
pub fn repolarization_reports(f: &MonomialMap, h: &Polytope, l: &Polytope) -> Result<Vec<InequalityReport>, DynamicsError> {
    let n = f.dim();
    check_polarization(l, n)?;
    let deg_h = degree_profile(f, h)?.degrees;
    let deg_l = degree_profile(f, l)?.degrees;
    let hl = mixed_sequence(h, l)?;
    let l_n = &hl[n];
    let fp = fingerprint_text(&[polytope_tag("H", h), polytope_tag("L", l), matrix_tag("f", f)]);
    Ok((0..=n)
        .map(|i| {
            let b = Rational::from_integer(binomial(n, i));
            let bound = &b * &b * &hl[i] * &hl[n - i] / (l_n * l_n) * &deg_l[i];
            InequalityReport::new("repolarize", n, Some(i), bound, deg_h[i].clone(), fp.clone())
        })
        .collect())
}

/// One entry of a degree sequence.
#[derive(Debug, Clone, PartialEq)]
pub struct DegreeRow {
    pub t: u32,
    pub i: usize,
    pub degree: Rational,
    /// `degree^{1/t}` as a float, for display only.
    pub growth: f64,
}

/// `deg_i(f^t)` for `t = 1, …, iterations` and every `i`.
pub fn degree_sequence(f: &MonomialMap, h: &Polytope, iterations: u32) -> Result<Vec<DegreeRow>, DynamicsError> {
    if iterations == 0 {
        return Err(DynamicsError::Domain("need at least one iteration".into()));
    }
    let mut rows = Vec::new();
    let mut ft = MonomialMap::identity(f.dim());
    for t in 1..=iterations {
        ft = ft.compose(f)?;
        if ft.matrix.max_abs_entry() > BigInt::from(ENTRY_CAPACITY) {
            return Err(DynamicsError::Capacity(format!("iterate {t} has matrix entries above {ENTRY_CAPACITY}")));
        }
        let profile = degree_profile(&ft, h)?;
        for (i, d) in profile.degrees.into_iter().enumerate() {
            let growth = rational_to_f64(&d).powf(1.0 / f64::from(t));
            rows.push(DegreeRow { t, i, degree: d, growth });
        }
    }
    Ok(rows)
}

/// Degree of the homogenized map on projective space: the components
/// `1, x^{M_1}, …, x^{M_n}` multiplied by the smallest monomial clearing all
/// negative exponents, then homogenized. Equals `deg_1` with respect to the
/// standard simplex.
pub fn projective_degree(f: &MonomialMap) -> BigInt {
    let n = f.dim();
    let mut exps: Vec<Vec<BigInt>> = vec![vec![BigInt::zero(); n]];
    exps.extend(f.matrix.row_vecs());
    let shift: Vec<BigInt> = (0..n).map(|j| exps.iter().map(|e| e[j].clone()).min().expect("nonempty")).collect();
    exps.iter()
        .map(|e| e.iter().zip(&shift).map(|(a, s)| a - s).sum::<BigInt>())
        .max()
        .expect("nonempty")
}

/// Order of the matrix in `GL_n(Z)` if it is at most `limit`.
pub fn matrix_order(f: &MonomialMap, limit: u32) -> Option<u32> {
    let id = IntMatrix::identity(f.dim());
    let mut acc = f.matrix.clone();
    for t in 1..=limit {
        if acc == id {
            return Some(t);
        }
        acc = acc.mul(&f.matrix).ok()?;
        if acc.max_abs_entry().abs().to_i64().is_none() {
            return None;
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact_arith::int;

    #[test]
    fn identity_and_power_maps() {
        let s = Polytope::standard_simplex(3);
        let id = degree_profile(&MonomialMap::identity(3), &s).unwrap();
        assert_eq!(id.degrees, vec![int(1); 4]);
        let q = degree_profile(&MonomialMap::power_map(3, 2).unwrap(), &s).unwrap();
        assert_eq!(q.degrees, vec![int(1), int(2), int(4), int(8)]);
    }

    #[test]
    fn singular_matrix_rejected() {
        assert!(matches!(MonomialMap::from_rows(&[vec![1, 2], vec![2, 4]]), Err(DynamicsError::Domain(_))));
    }

    #[test]
    fn transpose_matches_projective_degree() {
        let f = MonomialMap::from_rows(&[vec![2, 1], vec![0, 1]]).unwrap();
        assert_eq!(projective_degree(&f), BigInt::from(3));
        let s = Polytope::standard_simplex(2);
        let t = degree_profile_with(&f, &s, MatrixConvention::Transpose).unwrap();
        let d = degree_profile_with(&f, &s, MatrixConvention::Direct).unwrap();
        assert_eq!(t.degrees[1], int(3));
        assert_eq!(d.degrees[1], int(2));
    }

    #[test]
    fn power_map_submultiplicativity() {
        let s = Polytope::standard_simplex(3);
        let f = MonomialMap::power_map(3, 2).unwrap();
        let r = submult_check(&f, &f, &s, 1).unwrap();
        // (2·id)∘(2·id) = 4·id: deg_1 = 4 against binom(3,1)·2·2.
        assert_eq!(r.rhs, int(4));
        assert_eq!(r.lhs, int(12));
        assert!(r.holds);
    }

    #[test]
    fn finite_order_map() {
        let f = MonomialMap::from_rows(&[vec![0, -1], vec![1, 1]]).unwrap();
        assert_eq!(matrix_order(&f, 12), Some(6));
        let rows = degree_sequence(&f, &Polytope::standard_simplex(2), 12).unwrap();
        let deg1: Vec<&Rational> = rows.iter().filter(|r| r.i == 1).map(|r| &r.degree).collect();
        for t in 0..6 {
            assert_eq!(deg1[t], deg1[t + 6]);
        }
    }
}
