//! Exact rational scalars and integer/rational linear algebra.
//!
//! Every geometric quantity in the crate is carried by [`Rational`] or by
//! arbitrary-precision integers. The hot geometric kernels run over
//! [`kint::KInt`], which lets them try checked machine integers first and
//! redo the computation over `BigInt` when an intermediate overflows.

pub(crate) mod kint;
mod matrix;

use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

pub use matrix::IntMatrix;

/// Arbitrary-precision rational, always kept in lowest terms with a positive
/// denominator.
pub type Rational = BigRational;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ArithError {
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("matrix is singular")]
    Singular,
    #[error("cannot parse rational `{0}`")]
    Parse(String),
}

pub fn int(v: i64) -> Rational {
    Rational::from_integer(BigInt::from(v))
}

pub fn frac(p: i64, q: i64) -> Rational {
    Rational::new(BigInt::from(p), BigInt::from(q))
}

/// Parses `"p"`, `"-p"` or `"p/q"`.
pub fn parse_rational(s: &str) -> Result<Rational, ArithError> {
    let s = s.trim();
    let bad = || ArithError::Parse(s.to_string());
    match s.split_once('/') {
        Some((p, q)) => {
            let p = BigInt::from_str(p.trim()).map_err(|_| bad())?;
            let q = BigInt::from_str(q.trim()).map_err(|_| bad())?;
            if q.is_zero() {
                return Err(bad());
            }
            Ok(Rational::new(p, q))
        }
        None => Ok(Rational::from_integer(
            BigInt::from_str(s).map_err(|_| bad())?,
        )),
    }
}

/// Renders `p` for integers and `p/q` otherwise.
pub fn format_rational(r: &Rational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Decimal rendering for human-facing annotations only.
pub fn rational_to_f64(r: &Rational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

pub fn factorial(n: usize) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, i| acc * BigInt::from(i))
}

pub fn binomial(n: usize, k: usize) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    factorial(n) / (factorial(k) * factorial(n - k))
}

/// Least common multiple of the denominators of `values` (1 for an empty list).
pub fn common_denominator<'a>(values: impl IntoIterator<Item = &'a Rational>) -> BigInt {
    values
        .into_iter()
        .fold(BigInt::one(), |acc, v| acc.lcm(v.denom()))
}

/// Divides an integer vector by the gcd of its entries. The zero vector is
/// returned unchanged.
pub fn primitive(v: &[BigInt]) -> Vec<BigInt> {
    let g = v.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    if g.is_zero() || g.is_one() {
        return v.to_vec();
    }
    v.iter().map(|x| x / &g).collect()
}

/// Scales a rational vector to the primitive integer vector on the same ray.
pub fn primitive_integer(v: &[Rational]) -> Vec<BigInt> {
    let l = common_denominator(v);
    let scaled: Vec<BigInt> = v.iter().map(|x| (x * &l).to_integer()).collect();
    primitive(&scaled)
}

pub fn dot(a: &[Rational], b: &[Rational]) -> Rational {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn dot_int_rat(a: &[BigInt], b: &[Rational]) -> Rational {
    a.iter()
        .zip(b)
        .map(|(x, y)| y * x)
        .fold(Rational::zero(), |acc, t| acc + t)
}

fn shape_err(msg: impl Into<String>) -> ArithError {
    ArithError::Shape(msg.into())
}

/// Exact solution of `a·x = b` for square nonsingular rational `a`.
pub fn solve_rational(a: &[Vec<Rational>], b: &[Rational]) -> Result<Vec<Rational>, ArithError> {
    let n = a.len();
    if b.len() != n || a.iter().any(|row| row.len() != n) {
        return Err(shape_err(format!("expected {n}x{n} system with rhs of length {n}")));
    }
    let mut m: Vec<Vec<Rational>> = a
        .iter()
        .zip(b)
        .map(|(row, bi)| {
            let mut r = row.clone();
            r.push(bi.clone());
            r
        })
        .collect();
    for col in 0..n {
        let pivot = (col..n).find(|&r| !m[r][col].is_zero()).ok_or(ArithError::Singular)?;
        m.swap(col, pivot);
        let inv = m[col][col].recip();
        for x in m[col].iter_mut() {
            *x *= &inv;
        }
        for r in 0..n {
            if r != col && !m[r][col].is_zero() {
                let f = m[r][col].clone();
                let (src, dst) = if r < col {
                    let (lo, hi) = m.split_at_mut(col);
                    (&hi[0], &mut lo[r])
                } else {
                    let (lo, hi) = m.split_at_mut(r);
                    (&lo[col], &mut hi[0])
                };
                for (d, s) in dst.iter_mut().zip(src.iter()) {
                    *d -= &f * s;
                }
            }
        }
    }
    Ok(m.into_iter().map(|mut row| row.pop().unwrap()).collect())
}

/// Convenience wrapper of [`solve_rational`] for an integer coefficient matrix.
pub fn solve_int(a: &IntMatrix, b: &[Rational]) -> Result<Vec<Rational>, ArithError> {
    if a.rows() != a.cols() {
        return Err(shape_err("coefficient matrix must be square"));
    }
    solve_rational(&a.to_rational_rows(), b)
}

/// Reduced row echelon form in place; returns the pivot columns.
pub fn rref(m: &mut [Vec<Rational>]) -> Vec<usize> {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let inv = m[r][c].recip();
        for x in m[r].iter_mut() {
            *x *= &inv;
        }
        let pivot_row = m[r].clone();
        for (i, row) in m.iter_mut().enumerate() {
            if i != r && !row[c].is_zero() {
                let f = row[c].clone();
                for (x, p) in row.iter_mut().zip(&pivot_row) {
                    *x -= &f * p;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

pub fn rank(rows: &[Vec<Rational>]) -> usize {
    let mut m = rows.to_vec();
    rref(&mut m).len()
}

/// Basis of `{x : rows·x = 0}` as rational vectors.
pub fn nullspace(rows: &[Vec<Rational>], cols: usize) -> Vec<Vec<Rational>> {
    let mut m = rows.to_vec();
    let pivots = rref(&mut m);
    let free: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![Rational::zero(); cols];
            v[f] = Rational::one();
            for (r, &p) in pivots.iter().enumerate() {
                v[p] = -m[r][f].clone();
            }
            v
        })
        .collect()
}

/// Integer basis of the saturated lattice `Z^n ∩ span_Q(rows)`.
///
/// Uses the row Hermite form of the transposed generator matrix: with
/// `u·Mᵀ = h`, the first `r` rows of `(uᵀ)⁻¹` (= columns of `u⁻¹`) form part
/// of a unimodular basis and span the same rational space as `M`.
pub fn saturated_basis(rows: &[Vec<BigInt>], n: usize) -> Vec<Vec<BigInt>> {
    if rows.is_empty() {
        return Vec::new();
    }
    let gens = IntMatrix::from_bigint_rows(rows.to_vec()).expect("rectangular generator rows");
    let (h, u) = gens.transpose().hermite_normal_form();
    let r = (0..h.rows())
        .filter(|&i| (0..h.cols()).any(|j| !h.get(i, j).is_zero()))
        .count();
    let u_inv = u.inverse_unimodular().expect("HNF transform is unimodular");
    (0..r)
        .map(|c| (0..n).map(|i| u_inv.get(i, c).clone()).collect())
        .collect()
}


#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_format_round_trip() {
        for s in ["0", "-3", "7/2", "-1/3", "100000000000000000000000/7"] {
            assert_eq!(format_rational(&parse_rational(s).unwrap()), s);
        }
        assert_eq!(parse_rational("4/6").unwrap(), frac(2, 3));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x").is_err());
    }

    #[test]
    fn solve_identity_and_diagonal() {
        let id = IntMatrix::identity(3);
        let b = vec![frac(1, 2), int(-3), int(7)];
        assert_eq!(solve_int(&id, &b).unwrap(), b);
        let d = IntMatrix::from_rows(&[vec![2, 0], vec![0, 4]]).unwrap();
        assert_eq!(solve_int(&d, &[int(1), int(1)]).unwrap(), vec![frac(1, 2), frac(1, 4)]);
    }

    #[test]
    fn solve_rejects_singular() {
        let s = IntMatrix::from_rows(&[vec![1, 2], vec![2, 4]]).unwrap();
        assert_eq!(solve_int(&s, &[int(1), int(1)]), Err(ArithError::Singular));
    }

    #[test]
    fn nullspace_of_plane() {
        let rows = vec![vec![int(1), int(1), int(1)]];
        let ns = nullspace(&rows, 3);
        assert_eq!(ns.len(), 2);
        for v in ns {
            assert!(dot(&rows[0], &v).is_zero());
        }
    }

    #[test]
    fn saturated_basis_of_diagonal_line() {
        let b = saturated_basis(&[vec![BigInt::from(2), BigInt::from(2)]], 2);
        assert_eq!(b.len(), 1);
        let v: Vec<i64> = b[0].iter().map(|x| x.to_i64().unwrap()).collect();
        assert!(v == vec![1, 1] || v == vec![-1, -1]);
    }

    #[test]
    fn binomials() {
        assert_eq!(binomial(5, 2), BigInt::from(10));
        assert_eq!(binomial(4, 0), BigInt::from(1));
        assert_eq!(binomial(2, 3), BigInt::from(0));
    }
}
