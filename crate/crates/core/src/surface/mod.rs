//! Intersection forms on surfaces and the equality case of
//! `2(B·A)(A·C) ≥ (A²)(B·C)`.
//!
//! Equality with nonzero sides holds exactly when `B² = C² = 0`, `(B·C) ≠ 0`
//! and `A ≡ sB + tC` with `s, t > 0`. Both directions are checked here on an
//! abstract lattice given by its gram matrix.

use std::collections::BTreeMap;

use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::exact_arith::{self, format_rational, parse_rational, rref, solve_rational, Rational};
use crate::inequalities::{fingerprint_text, InequalityReport};
use crate::intersection::{DivisorSystem, IntersectionError};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SurfaceError {
    #[error("shape error: {0}")]
    Shape(String),
    #[error("lattice error: {0}")]
    Lattice(String),
    #[error("nef proxy fails: {0}")]
    NefProxy(String),
    #[error("unknown class `{0}`")]
    UnknownClass(String),
    #[error("invalid surface JSON: {0}")]
    Json(String),
    #[error(transparent)]
    Intersection(#[from] IntersectionError),
}

/// Counts of positive, negative and zero entries after diagonalization.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Signature {
    pub positive: usize,
    pub negative: usize,
    pub null: usize,
}

/// Signature of a symmetric rational matrix by congruence diagonalization.
pub fn signature(gram: &[Vec<Rational>]) -> Signature {
    let mut m = gram.to_vec();
    let mut sig = Signature { positive: 0, negative: 0, null: 0 };
    let mut active: Vec<usize> = (0..gram.len()).collect();
    while !active.is_empty() {
        let pivot = match active.iter().copied().find(|&i| !m[i][i].is_zero()) {
            Some(i) => i,
            None => {
                let pair = active
                    .iter()
                    .flat_map(|&i| active.iter().map(move |&j| (i, j)))
                    .find(|&(i, j)| i != j && !m[i][j].is_zero());
                let Some((i, j)) = pair else {
                    sig.null += active.len();
                    break;
                };
                // Replace e_i by e_i + e_j; the new diagonal entry is 2·m[i][j].
                for &k in &active {
                    let v = m[j][k].clone();
                    m[i][k] += v;
                }
                for &k in &active {
                    let v = m[k][j].clone();
                    m[k][i] += v;
                }
                i
            }
        };
        let p = m[pivot][pivot].clone();
        if p.is_positive() {
            sig.positive += 1;
        } else {
            sig.negative += 1;
        }
        active.retain(|&i| i != pivot);
        // Schur complement on the remaining indices.
        for &a in &active {
            let f = &m[a][pivot] / &p;
            if f.is_zero() {
                continue;
            }
            for &b in &active {
                let v = &f * &m[pivot][b];
                m[a][b] -= v;
            }
        }
    }
    sig
}

/// A Néron–Severi lattice with its intersection form and named classes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SurfaceLattice {
    gram: Vec<Vec<Rational>>,
    classes: BTreeMap<String, Vec<Rational>>,
}

impl SurfaceLattice {
    /// Checks symmetry and the Hodge index shape `(1, ρ − 1)`.
    pub fn new(gram: Vec<Vec<Rational>>) -> Result<Self, SurfaceError> {
        let rho = gram.len();
        if rho == 0 || gram.iter().any(|r| r.len() != rho) {
            return Err(SurfaceError::Shape("gram matrix must be square and nonempty".into()));
        }
        for i in 0..rho {
            for j in 0..i {
                if gram[i][j] != gram[j][i] {
                    return Err(SurfaceError::Shape(format!("gram matrix is not symmetric at ({i}, {j})")));
                }
            }
        }
        let sig = signature(&gram);
        if sig.positive != 1 || sig.null != 0 {
            return Err(SurfaceError::Lattice(format!(
                "signature ({}, {}) with {} null directions is not (1, {})",
                sig.positive,
                sig.negative,
                sig.null,
                rho - 1
            )));
        }
        Ok(SurfaceLattice { gram, classes: BTreeMap::new() })
    }

    pub fn from_int_rows(rows: &[Vec<i64>]) -> Result<Self, SurfaceError> {
        Self::new(rows.iter().map(|r| r.iter().map(|&x| exact_arith::int(x)).collect()).collect())
    }

    /// The hyperbolic plane `[[0, 1], [1, 0]]`.
    pub fn hyperbolic_plane() -> Self {
        Self::from_int_rows(&[vec![0, 1], vec![1, 0]]).expect("signature (1, 1)")
    }

    /// Numerical lattice spanned by the divisors of a toric surface.
    ///
    /// The gram matrix of all pairwise mixed volumes may be degenerate, so a
    /// maximal set of divisors with nonsingular gram block is taken as basis
    /// and every divisor is recorded as the class pairing identically with
    /// that basis.
    pub fn from_divisor_system(sys: &DivisorSystem) -> Result<Self, SurfaceError> {
        if sys.dim() != 2 {
            return Err(SurfaceError::Shape(format!("divisor system has dimension {}, not 2", sys.dim())));
        }
        let names: Vec<String> = sys.names().into_iter().map(str::to_string).collect();
        let full: Vec<Vec<Rational>> = names
            .iter()
            .map(|a| {
                names
                    .iter()
                    .map(|b| if a == b { sys.intersect(&[(a, 2)]) } else { sys.intersect(&[(a, 1), (b, 1)]) })
                    .collect::<Result<Vec<_>, _>>()
            })
            .collect::<Result<_, _>>()?;
        // Rows forming a basis of the row space; for a symmetric matrix the
        // matching principal block is then nonsingular.
        let mut echelon = full.clone();
        let basis = rref(&mut echelon);
        if basis.is_empty() {
            return Err(SurfaceError::Lattice("all divisors are numerically trivial".into()));
        }
        let block: Vec<Vec<Rational>> = basis.iter().map(|&a| basis.iter().map(|&b| full[a][b].clone()).collect()).collect();
        let mut lattice = Self::new(block.clone())?;
        for (i, name) in names.iter().enumerate() {
            let pairings: Vec<Rational> = basis.iter().map(|&b| full[i][b].clone()).collect();
            let coords = solve_rational(&block, &pairings).expect("nonsingular block");
            lattice.classes.insert(name.clone(), coords);
        }
        Ok(lattice)
    }

    pub fn rank(&self) -> usize {
        self.gram.len()
    }

    pub fn gram(&self) -> &[Vec<Rational>] {
        &self.gram
    }

    pub fn signature(&self) -> Signature {
        signature(&self.gram)
    }

    pub fn insert_class(&mut self, name: &str, v: Vec<Rational>) -> Result<(), SurfaceError> {
        if v.len() != self.rank() {
            return Err(SurfaceError::Shape(format!("class `{name}` has length {}, lattice rank {}", v.len(), self.rank())));
        }
        self.classes.insert(name.to_string(), v);
        Ok(())
    }

    pub fn class(&self, name: &str) -> Result<&Vec<Rational>, SurfaceError> {
        self.classes.get(name).ok_or_else(|| SurfaceError::UnknownClass(name.to_string()))
    }

    pub fn classes(&self) -> &BTreeMap<String, Vec<Rational>> {
        &self.classes
    }

    /// `xᵀ·G·y`.
    pub fn pairing(&self, x: &[Rational], y: &[Rational]) -> Result<Rational, SurfaceError> {
        let rho = self.rank();
        if x.len() != rho || y.len() != rho {
            return Err(SurfaceError::Shape(format!("class vectors must have length {rho}")));
        }
        Ok(x.iter()
            .zip(&self.gram)
            .filter(|(xi, _)| !xi.is_zero())
            .map(|(xi, row)| xi * exact_arith::dot(row, y))
            .sum())
    }

    /// `Gᵀx = 0`, i.e. `x` pairs to zero with every class.
    pub fn is_numerically_trivial(&self, x: &[Rational]) -> bool {
        (0..self.rank()).all(|j| self.gram.iter().zip(x).map(|(row, xi)| &row[j] * xi).sum::<Rational>().is_zero())
    }
}

/// Three classes passing the numerical nef proxy: all squares and pairwise
/// products nonnegative.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NefTriple {
    pub a: Vec<Rational>,
    pub b: Vec<Rational>,
    pub c: Vec<Rational>,
}

impl NefTriple {
    pub fn new(l: &SurfaceLattice, a: Vec<Rational>, b: Vec<Rational>, c: Vec<Rational>) -> Result<Self, SurfaceError> {
        let named = [("A", &a), ("B", &b), ("C", &c)];
        for (i, (ni, x)) in named.iter().enumerate() {
            for (nj, y) in &named[i..] {
                let v = l.pairing(x, y)?;
                if v.is_negative() {
                    return Err(SurfaceError::NefProxy(format!("({ni}·{nj}) = {} < 0", format_rational(&v))));
                }
            }
        }
        Ok(NefTriple { a, b, c })
    }

    /// Triple of named classes of `l`.
    pub fn from_classes(l: &SurfaceLattice, a: &str, b: &str, c: &str) -> Result<Self, SurfaceError> {
        Self::new(l, l.class(a)?.clone(), l.class(b)?.clone(), l.class(c)?.clone())
    }
}

/// Witnesses for the equality direction "equality ⇒ structure".
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ForwardWitness {
    /// `(A²)/(2(B·A))`.
    pub s: Rational,
    /// `(A²)/(2(C·A))`.
    pub t: Rational,
    /// `A − sB − tC`.
    pub residual: Vec<Rational>,
    pub residual_trivial: bool,
    pub b_square_zero: bool,
    pub c_square_zero: bool,
    pub bc_nonzero: bool,
}

impl ForwardWitness {
    pub fn conditions_hold(&self) -> bool {
        self.s.is_positive() && self.t.is_positive() && self.residual_trivial && self.b_square_zero && self.c_square_zero && self.bc_nonzero
    }
}

/// Decomposition found for the direction "structure ⇒ equality".
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BackwardWitness {
    pub s: Rational,
    pub t: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EqualityReport {
    /// `2(B·A)(A·C)`.
    pub lhs: Rational,
    /// `(A²)(B·C)`.
    pub rhs: Rational,
    /// `lhs = rhs ≠ 0`.
    pub numeric_equality: bool,
    /// Present when the numeric equality holds.
    pub forward: Option<ForwardWitness>,
    /// Present when `B² = C² = 0`, `(B·C) ≠ 0` and `A ≡ sB + tC` with `s, t > 0`.
    pub backward: Option<BackwardWitness>,
}

impl EqualityReport {
    /// Both directions agree: the numeric equality holds exactly when the
    /// structural conditions do.
    pub fn consistent(&self) -> bool {
        let forward_ok = self.forward.as_ref().is_none_or(ForwardWitness::conditions_hold);
        forward_ok && self.numeric_equality == self.backward.is_some()
    }
}

pub fn equality_case_check(l: &SurfaceLattice, t: &NefTriple) -> Result<EqualityReport, SurfaceError> {
    let aa = l.pairing(&t.a, &t.a)?;
    let ab = l.pairing(&t.a, &t.b)?;
    let ac = l.pairing(&t.a, &t.c)?;
    let bb = l.pairing(&t.b, &t.b)?;
    let cc = l.pairing(&t.c, &t.c)?;
    let bc = l.pairing(&t.b, &t.c)?;
    let two = exact_arith::int(2);
    let lhs = &two * &ab * &ac;
    let rhs = &aa * &bc;
    let numeric_equality = lhs == rhs && !rhs.is_zero();
    let combo = |s: &Rational, u: &Rational| -> Vec<Rational> {
        t.a.iter().zip(&t.b).zip(&t.c).map(|((a, b), c)| a - s * b - u * c).collect()
    };
    let forward = numeric_equality.then(|| {
        let s = &aa / (&two * &ab);
        let u = &aa / (&two * &ac);
        let residual = combo(&s, &u);
        ForwardWitness {
            residual_trivial: l.is_numerically_trivial(&residual),
            s,
            t: u,
            residual,
            b_square_zero: bb.is_zero(),
            c_square_zero: cc.is_zero(),
            bc_nonzero: !bc.is_zero(),
        }
    });
    // With B² = C² = 0, pairing A = sB + tC against B and C gives
    // (A·B) = t(B·C) and (A·C) = s(B·C).
    let backward = if bb.is_zero() && cc.is_zero() && !bc.is_zero() {
        let s = &ac / &bc;
        let u = &ab / &bc;
        (s.is_positive() && u.is_positive() && l.is_numerically_trivial(&combo(&s, &u))).then_some(BackwardWitness { s, t: u })
    } else {
        None
    };
    Ok(EqualityReport { lhs, rhs, numeric_equality, forward, backward })
}

fn triple_fingerprint(l: &SurfaceLattice, t: &NefTriple) -> String {
    let fmt = |v: &[Rational]| v.iter().map(format_rational).collect::<Vec<_>>().join(",");
    let gram = l.gram.iter().map(|r| fmt(r)).collect::<Vec<_>>().join(";");
    fingerprint_text(&[("gram", gram), ("A", fmt(&t.a)), ("B", fmt(&t.b)), ("C", fmt(&t.c))])
}

/// `(B·A)(A·C) ≥ ½(A²)(B·C)`, oriented like the polytope version at `n = 2`, `k = 1`.
pub fn rkt_surface_check(l: &SurfaceLattice, t: &NefTriple) -> Result<InequalityReport, SurfaceError> {
    let lhs = l.pairing(&t.b, &t.a)? * l.pairing(&t.a, &t.c)?;
    let rhs = l.pairing(&t.a, &t.a)? * l.pairing(&t.b, &t.c)? / exact_arith::int(2);
    Ok(InequalityReport::new("rkt", 2, Some(1), lhs, rhs, triple_fingerprint(l, t)))
}

/// `{"gram": [[…]], "A": […], "B": […], "C": […]}` with rational strings or integers.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SurfaceInput {
    pub gram: Vec<Vec<serde_json::Value>>,
    #[serde(rename = "A")]
    pub a: Vec<serde_json::Value>,
    #[serde(rename = "B")]
    pub b: Vec<serde_json::Value>,
    #[serde(rename = "C")]
    pub c: Vec<serde_json::Value>,
}

fn value_to_rational(v: &serde_json::Value) -> Result<Rational, SurfaceError> {
    match v {
        serde_json::Value::Number(n) if n.is_i64() => Ok(exact_arith::int(n.as_i64().expect("checked"))),
        serde_json::Value::String(s) => parse_rational(s).map_err(|e| SurfaceError::Json(e.to_string())),
        other => Err(SurfaceError::Json(format!("expected an integer or rational string, got {other}"))),
    }
}

impl SurfaceInput {
    pub fn from_json_str(s: &str) -> Result<Self, SurfaceError> {
        serde_json::from_str(s).map_err(|e| SurfaceError::Json(e.to_string()))
    }

    pub fn to_instance(&self) -> Result<(SurfaceLattice, NefTriple), SurfaceError> {
        let conv = |v: &[serde_json::Value]| v.iter().map(value_to_rational).collect::<Result<Vec<_>, _>>();
        let gram = self.gram.iter().map(|r| conv(r)).collect::<Result<Vec<_>, _>>()?;
        let l = SurfaceLattice::new(gram)?;
        let t = NefTriple::new(&l, conv(&self.a)?, conv(&self.b)?, conv(&self.c)?)?;
        Ok((l, t))
    }

    pub fn from_instance(l: &SurfaceLattice, t: &NefTriple) -> Self {
        let conv = |v: &[Rational]| v.iter().map(|x| serde_json::Value::String(format_rational(x))).collect();
        SurfaceInput { gram: l.gram.iter().map(|r| conv(r)).collect(), a: conv(&t.a), b: conv(&t.b), c: conv(&t.c) }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact_arith::int;
    use crate::polytope::Polytope;

    fn v(xs: &[i64]) -> Vec<Rational> {
        xs.iter().map(|&x| int(x)).collect()
    }

    #[test]
    fn hyperbolic_plane_pairings() {
        let u = SurfaceLattice::hyperbolic_plane();
        assert_eq!(u.pairing(&v(&[1, 0]), &v(&[0, 1])).unwrap(), int(1));
        assert_eq!(u.pairing(&v(&[1, 1]), &v(&[1, 1])).unwrap(), int(2));
        assert!(u.pairing(&v(&[1]), &v(&[1, 0])).is_err());
    }

    #[test]
    fn signatures() {
        let g = |rows: &[Vec<i64>]| rows.iter().map(|r| v(r)).collect::<Vec<_>>();
        assert_eq!(signature(&g(&[vec![0, 1], vec![1, 0]])), Signature { positive: 1, negative: 1, null: 0 });
        assert_eq!(signature(&g(&[vec![1, 1], vec![1, 1]])), Signature { positive: 1, negative: 0, null: 1 });
        assert_eq!(
            signature(&g(&[vec![0, 1, 0], vec![1, 0, 0], vec![0, 0, -1]])),
            Signature { positive: 1, negative: 2, null: 0 }
        );
        assert!(matches!(SurfaceLattice::from_int_rows(&[vec![1, 0], vec![0, 1]]), Err(SurfaceError::Lattice(_))));
        assert!(matches!(SurfaceLattice::from_int_rows(&[vec![0, 1], vec![2, 0]]), Err(SurfaceError::Shape(_))));
    }

    #[test]
    fn equality_witness_in_hyperbolic_plane() {
        let u = SurfaceLattice::hyperbolic_plane();
        let t = NefTriple::new(&u, v(&[2, 3]), v(&[1, 0]), v(&[0, 1])).unwrap();
        let r = equality_case_check(&u, &t).unwrap();
        assert_eq!((r.lhs.clone(), r.rhs.clone()), (int(12), int(12)));
        let w = r.forward.clone().unwrap();
        assert_eq!((w.s.clone(), w.t.clone()), (int(2), int(3)));
        assert!(w.residual.iter().all(Zero::is_zero));
        assert!(r.consistent());
        let rep = rkt_surface_check(&u, &t).unwrap();
        assert!(rep.is_equality());
    }

    #[test]
    fn nef_proxy_rejects_negative_square() {
        let l = SurfaceLattice::from_int_rows(&[vec![0, 1, 0], vec![1, 0, 0], vec![0, 0, -1]]).unwrap();
        let r = NefTriple::new(&l, v(&[1, 1, 0]), v(&[1, 0, 0]), v(&[0, 1, 1]));
        assert!(matches!(r, Err(SurfaceError::NefProxy(_))));
    }

    #[test]
    fn toric_surface_lattice() {
        let sq = Polytope::unit_cube(2);
        let b = Polytope::from_int_points(&[vec![0, 0], vec![1, 0]]).unwrap();
        let c = Polytope::from_int_points(&[vec![0, 0], vec![0, 1]]).unwrap();
        let sys = DivisorSystem::from_divisors(2, &[("A", sq), ("B", b), ("C", c)]).unwrap();
        let l = SurfaceLattice::from_divisor_system(&sys).unwrap();
        assert_eq!(l.rank(), 2);
        let t = NefTriple::from_classes(&l, "A", "B", "C").unwrap();
        let r = equality_case_check(&l, &t).unwrap();
        assert!(r.numeric_equality && r.consistent());
        assert_eq!(r.forward.unwrap().s, int(1));
        // Two isotropic classes alone still span a nondegenerate lattice.
        let b = Polytope::from_int_points(&[vec![0, 0], vec![1, 0]]).unwrap();
        let c = Polytope::from_int_points(&[vec![0, 0], vec![0, 1]]).unwrap();
        let sys = DivisorSystem::from_divisors(2, &[("B", b), ("C", c)]).unwrap();
        assert_eq!(SurfaceLattice::from_divisor_system(&sys).unwrap().rank(), 2);
    }
}
