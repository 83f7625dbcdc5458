use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::{ArithError, Rational};

/// Dense integer matrix, row-major.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<BigInt>,
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.row_vecs()).finish()
    }
}

impl IntMatrix {
    pub fn new(rows: usize, cols: usize, entries: Vec<BigInt>) -> Result<Self, ArithError> {
        if rows == 0 || cols == 0 || entries.len() != rows * cols {
            return Err(ArithError::Shape(format!(
                "{} entries for a {rows}x{cols} matrix",
                entries.len()
            )));
        }
        Ok(Self { rows, cols, entries })
    }

    pub fn from_rows(rows: &[Vec<i64>]) -> Result<Self, ArithError> {
        Self::from_bigint_rows(
            rows.iter()
                .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
                .collect(),
        )
    }

    pub fn from_bigint_rows(rows: Vec<Vec<BigInt>>) -> Result<Self, ArithError> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(ArithError::Shape("ragged rows".into()));
        }
        Self::new(r, c, rows.into_iter().flatten().collect())
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.entries[i * n + i] = BigInt::one();
        }
        m
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, entries: vec![BigInt::zero(); rows * cols] }
    }

    pub fn scalar(n: usize, q: i64) -> Self {
        let mut m = Self::identity(n);
        for i in 0..n {
            m.entries[i * n + i] = BigInt::from(q);
        }
        m
    }

    pub fn diagonal(diag: &[i64]) -> Self {
        let n = diag.len();
        let mut m = Self::zeros(n, n);
        for (i, &d) in diag.iter().enumerate() {
            m.entries[i * n + i] = BigInt::from(d);
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &BigInt {
        &self.entries[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: BigInt) {
        self.entries[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[BigInt] {
        &self.entries[r * self.cols..(r + 1) * self.cols]
    }

    pub fn column(&self, c: usize) -> Vec<BigInt> {
        (0..self.rows).map(|r| self.get(r, c).clone()).collect()
    }

    pub fn row_vecs(&self) -> Vec<Vec<BigInt>> {
        (0..self.rows).map(|r| self.row(r).to_vec()).collect()
    }

    pub fn to_rational_rows(&self) -> Vec<Vec<Rational>> {
        (0..self.rows)
            .map(|r| self.row(r).iter().map(|x| Rational::from_integer(x.clone())).collect())
            .collect()
    }

    pub fn max_abs_entry(&self) -> BigInt {
        self.entries.iter().map(|x| x.abs()).max().unwrap_or_default()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.entries[c * self.rows + r] = self.get(r, c).clone();
            }
        }
        t
    }

    pub fn mul(&self, other: &Self) -> Result<Self, ArithError> {
        if self.cols != other.rows {
            return Err(ArithError::Shape(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(r, k);
                if a.is_zero() {
                    continue;
                }
                for c in 0..other.cols {
                    out.entries[r * other.cols + c] += a * other.get(k, c);
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &[Rational]) -> Result<Vec<Rational>, ArithError> {
        if v.len() != self.cols {
            return Err(ArithError::Shape("vector length".into()));
        }
        Ok((0..self.rows)
            .map(|r| {
                self.row(r)
                    .iter()
                    .zip(v)
                    .fold(Rational::zero(), |acc, (a, x)| acc + x * a)
            })
            .collect())
    }

    pub fn pow(&self, e: u32) -> Result<Self, ArithError> {
        if !self.is_square() {
            return Err(ArithError::Shape("power of a non-square matrix".into()));
        }
        let mut acc = Self::identity(self.rows);
        for _ in 0..e {
            acc = acc.mul(self)?;
        }
        Ok(acc)
    }

    /// Fraction-free Bareiss elimination.
    pub fn det(&self) -> Result<BigInt, ArithError> {
        if !self.is_square() {
            return Err(ArithError::Shape(format!(
                "determinant of a {}x{} matrix",
                self.rows, self.cols
            )));
        }
        let n = self.rows;
        let mut a = self.row_vecs();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n {
            if a[k][k].is_zero() {
                match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                    Some(p) => {
                        a.swap(k, p);
                        sign = -sign;
                    }
                    None => return Ok(BigInt::zero()),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                    a[i][j] = v / &prev;
                }
            }
            prev = a[k][k].clone();
        }
        Ok(sign * &a[n - 1][n - 1])
    }

    pub fn is_unimodular(&self) -> bool {
        self.det().map(|d| d.abs().is_one()).unwrap_or(false)
    }

    /// Row Hermite normal form: returns `(h, u)` with `u` unimodular and
    /// `u·self = h`. Nonzero rows of `h` come first, pivots are positive and
    /// strictly to the right of the pivot above, and entries above a pivot
    /// lie in `[0, pivot)`.
    pub fn hermite_normal_form(&self) -> (Self, Self) {
        let (rows, cols) = (self.rows, self.cols);
        let mut h = self.row_vecs();
        let mut u = Self::identity(rows).row_vecs();
        let mut r = 0;
        for c in 0..cols {
            if r == rows {
                break;
            }
            for i in r + 1..rows {
                if h[i][c].is_zero() {
                    continue;
                }
                let a = h[r][c].clone();
                let b = h[i][c].clone();
                let eg = a.extended_gcd(&b);
                let (g, x, y) = (eg.gcd, eg.x, eg.y);
                let (ag, bg) = (&a / &g, &b / &g);
                combine_rows(&mut h, r, i, &x, &y, &bg, &ag);
                combine_rows(&mut u, r, i, &x, &y, &bg, &ag);
            }
            if h[r][c].is_zero() {
                continue;
            }
            if h[r][c].is_negative() {
                negate_row(&mut h[r]);
                negate_row(&mut u[r]);
            }
            let p = h[r][c].clone();
            for i in 0..r {
                let q = h[i][c].div_floor(&p);
                if !q.is_zero() {
                    sub_row_multiple(&mut h, i, r, &q);
                    sub_row_multiple(&mut u, i, r, &q);
                }
            }
            r += 1;
        }
        (
            Self::from_bigint_rows(h).expect("shape preserved"),
            Self::from_bigint_rows(u).expect("shape preserved"),
        )
    }

    /// Integer inverse of a unimodular matrix.
    pub fn inverse_unimodular(&self) -> Result<Self, ArithError> {
        if !self.is_unimodular() {
            return Err(ArithError::Singular);
        }
        let n = self.rows;
        let rows = self.to_rational_rows();
        let mut inv = Self::zeros(n, n);
        for c in 0..n {
            let mut e = vec![Rational::zero(); n];
            e[c] = Rational::one();
            let x = super::solve_rational(&rows, &e)?;
            for (r, v) in x.into_iter().enumerate() {
                inv.set(r, c, v.to_integer());
            }
        }
        Ok(inv)
    }
}

/// `(row_r, row_i) <- (x·row_r + y·row_i, -bg·row_r + ag·row_i)`; unimodular
/// because `x·ag + y·bg = 1`.
fn combine_rows(m: &mut [Vec<BigInt>], r: usize, i: usize, x: &BigInt, y: &BigInt, bg: &BigInt, ag: &BigInt) {
    let (top, bottom) = m.split_at_mut(i);
    let (pr, pi) = (&mut top[r], &mut bottom[0]);
    for (a, b) in pr.iter_mut().zip(pi.iter_mut()) {
        let na = x * &*a + y * &*b;
        let nb = ag * &*b - bg * &*a;
        *a = na;
        *b = nb;
    }
}

fn negate_row(row: &mut [BigInt]) {
    for x in row.iter_mut() {
        *x = -std::mem::take(x);
    }
}

fn sub_row_multiple(m: &mut [Vec<BigInt>], target: usize, src: usize, q: &BigInt) {
    let src_row = m[src].clone();
    for (t, s) in m[target].iter_mut().zip(&src_row) {
        *t -= q * s;
    }
}
