//! Integer abstraction for the geometric kernels.
//!
//! Every arithmetic method returns `None` on overflow. `i128` overflows on
//! large data; `BigInt` never does. Kernels are written once against this
//! trait and callers retry with `BigInt` when the fast path gives up.

use std::fmt::Debug;
use std::hash::Hash;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};

pub(crate) trait KInt: Clone + Eq + Ord + Hash + Debug + Send + Sync + 'static {
    fn zero() -> Self;
    fn one() -> Self;
    fn try_from_big(b: &BigInt) -> Option<Self>;
    fn to_big(&self) -> BigInt;
    fn add(&self, o: &Self) -> Option<Self>;
    fn sub(&self, o: &Self) -> Option<Self>;
    fn mul(&self, o: &Self) -> Option<Self>;
    /// Division known to be exact.
    fn div_exact(&self, o: &Self) -> Self;
    fn gcd(&self, o: &Self) -> Self;
    fn neg(&self) -> Self;
    fn signum(&self) -> i32;

    fn is_zero(&self) -> bool {
        self.signum() == 0
    }

    fn abs(&self) -> Self {
        if self.signum() < 0 {
            self.neg()
        } else {
            self.clone()
        }
    }
}

impl KInt for i128 {
    fn zero() -> Self {
        0
    }
    fn one() -> Self {
        1
    }
    fn try_from_big(b: &BigInt) -> Option<Self> {
        // Keep headroom so negation and a handful of additions cannot wrap.
        b.to_i128().filter(|v| v.unsigned_abs() < (1u128 << 120))
    }
    fn to_big(&self) -> BigInt {
        BigInt::from(*self)
    }
    fn add(&self, o: &Self) -> Option<Self> {
        self.checked_add(*o)
    }
    fn sub(&self, o: &Self) -> Option<Self> {
        self.checked_sub(*o)
    }
    fn mul(&self, o: &Self) -> Option<Self> {
        self.checked_mul(*o)
    }
    fn div_exact(&self, o: &Self) -> Self {
        self / o
    }
    fn gcd(&self, o: &Self) -> Self {
        Integer::gcd(self, o)
    }
    fn neg(&self) -> Self {
        -self
    }
    fn signum(&self) -> i32 {
        i128::signum(*self) as i32
    }
}

impl KInt for BigInt {
    fn zero() -> Self {
        <BigInt as Zero>::zero()
    }
    fn one() -> Self {
        BigInt::from(1)
    }
    fn try_from_big(b: &BigInt) -> Option<Self> {
        Some(b.clone())
    }
    fn to_big(&self) -> BigInt {
        self.clone()
    }
    fn add(&self, o: &Self) -> Option<Self> {
        Some(self + o)
    }
    fn sub(&self, o: &Self) -> Option<Self> {
        Some(self - o)
    }
    fn mul(&self, o: &Self) -> Option<Self> {
        Some(self * o)
    }
    fn div_exact(&self, o: &Self) -> Self {
        self / o
    }
    fn gcd(&self, o: &Self) -> Self {
        Integer::gcd(self, o)
    }
    fn neg(&self) -> Self {
        -self
    }
    fn signum(&self) -> i32 {
        if self.is_positive() {
            1
        } else if self.is_negative() {
            -1
        } else {
            0
        }
    }
}

pub(crate) fn convert_points<T: KInt>(points: &[Vec<BigInt>]) -> Option<Vec<Vec<T>>> {
    points
        .iter()
        .map(|p| p.iter().map(T::try_from_big).collect())
        .collect()
}

pub(crate) fn dot<T: KInt>(a: &[T], b: &[T]) -> Option<T> {
    let mut acc = T::zero();
    for (x, y) in a.iter().zip(b) {
        acc = acc.add(&x.mul(y)?)?;
    }
    Some(acc)
}

/// Divides by the gcd of the entries (no-op on the zero vector).
pub(crate) fn make_primitive<T: KInt>(v: &mut [T]) {
    let g = v.iter().fold(T::zero(), |acc, x| acc.gcd(x));
    if g.is_zero() || g == T::one() {
        return;
    }
    for x in v.iter_mut() {
        *x = x.div_exact(&g);
    }
}

/// Bareiss determinant; `Some(0)` when singular, `None` on overflow.
pub(crate) fn det_or_zero<T: KInt>(a: Vec<Vec<T>>) -> Option<T> {
    let n = a.len();
    let mut a = a;
    let mut negate = false;
    let mut prev = T::one();
    for k in 0..n {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                Some(p) => {
                    a.swap(k, p);
                    negate = !negate;
                }
                None => return Some(T::zero()),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = a[i][j].mul(&a[k][k])?.sub(&a[i][k].mul(&a[k][j])?)?;
                a[i][j] = v.div_exact(&prev);
            }
        }
        prev = a[k][k].clone();
    }
    if n == 0 {
        return Some(T::one());
    }
    let d = a[n - 1][n - 1].clone();
    Some(if negate { d.neg() } else { d })
}

/// Rank of a set of integer rows by fraction-free elimination, stopping early
/// once `stop_at` is reached.
pub(crate) fn rank_up_to<T: KInt>(rows: impl Iterator<Item = Vec<T>>, cols: usize, stop_at: usize) -> Option<usize> {
    let mut basis: Vec<(usize, Vec<T>)> = Vec::new();
    for mut row in rows {
        for (pc, b) in &basis {
            if row[*pc].is_zero() {
                continue;
            }
            let f = row[*pc].clone();
            let p = b[*pc].clone();
            for j in 0..cols {
                row[j] = row[j].mul(&p)?.sub(&b[j].mul(&f)?)?;
            }
            make_primitive(&mut row);
        }
        if let Some(pc) = (0..cols).find(|&j| !row[j].is_zero()) {
            basis.push((pc, row));
            if basis.len() >= stop_at {
                return Some(basis.len());
            }
        }
    }
    Some(basis.len())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn i128_overflow_is_reported() {
        let big = 1i128 << 100;
        assert_eq!(KInt::mul(&big, &big), None);
        assert!(i128::try_from_big(&(BigInt::from(1) << 125)).is_none());
    }

    #[test]
    fn det_agrees_across_backends() {
        let rows = vec![vec![2i64, -1, 0], vec![1, 3, 4], vec![0, 5, -2]];
        let a: Vec<Vec<i128>> = rows.iter().map(|r| r.iter().map(|&x| x as i128).collect()).collect();
        let b: Vec<Vec<BigInt>> = rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect();
        assert_eq!(det_or_zero(a).unwrap().to_big(), det_or_zero(b).unwrap());
    }

    #[test]
    fn rank_with_early_stop() {
        let rows = vec![vec![1i128, 0, 0], vec![2, 0, 0], vec![0, 1, 0], vec![0, 0, 1]];
        assert_eq!(rank_up_to(rows.clone().into_iter(), 3, 10), Some(3));
        assert_eq!(rank_up_to(rows.into_iter(), 3, 2), Some(2));
    }
}
