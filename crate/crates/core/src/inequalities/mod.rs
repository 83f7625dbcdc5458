//! Exact evaluation of the reverse Khovanskii–Teissier inequality, its
//! multi-divisor form, the ample-proxy strictness probe and the Bézout-type
//! bounds, all over mixed volumes.

mod report;

use num_bigint::BigInt;
use num_traits::One;

use crate::exact_arith::{binomial, factorial, Rational};
use crate::intersection::{DivisorSystem, IntersectionError, IntersectionQuery, MvStrategy};
use crate::polytope::{Polytope, PolytopeError};

pub use report::{fingerprint, fingerprint_text, InequalityReport, NEAR_EQUALITY_THRESHOLD};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum InequalityError {
    #[error("shape error: {0}")]
    Shape(String),
    #[error("domain error: {0}")]
    Domain(String),
    #[error(transparent)]
    Intersection(#[from] IntersectionError),
}

impl From<PolytopeError> for InequalityError {
    fn from(e: PolytopeError) -> Self {
        InequalityError::Intersection(IntersectionError::Polytope(e))
    }
}

/// `k!(n−k)!/n!`.
pub fn rkt_constant(n: usize, k: usize) -> Rational {
    Rational::new(factorial(k) * factorial(n - k), factorial(n))
}

/// Distinct polytopes of one instance, sharing triangulations and
/// intersection numbers across every term of a statement.
struct Instance {
    sys: DivisorSystem,
    strategy: MvStrategy,
}

impl Instance {
    fn new(ps: &[&Polytope], strategy: MvStrategy) -> Result<Self, InequalityError> {
        let n = ps[0].ambient_dim();
        let mut sys = DivisorSystem::new(n);
        let mut distinct: Vec<&Polytope> = Vec::new();
        for &p in ps {
            if !distinct.contains(&p) {
                sys.insert(&format!("P{}", distinct.len()), p.clone())?;
                distinct.push(p);
            }
        }
        Ok(Instance { sys, strategy })
    }

    fn name_of(&self, p: &Polytope) -> String {
        self.sys
            .names()
            .into_iter()
            .find(|n| self.sys.get(n) == Some(p))
            .expect("polytope registered")
            .to_string()
    }

    fn mv(&self, bodies: &[&Polytope]) -> Result<Rational, InequalityError> {
        let names: Vec<(String, usize)> = bodies.iter().map(|p| (self.name_of(p), 1)).collect();
        let q = IntersectionQuery::from_terms(&names);
        Ok(match self.strategy {
            MvStrategy::SharedFan => self.sys.intersection_number(&q)?,
            s => self.sys.intersection_number_with(&q, s)?,
        })
    }
}

fn repeat<'a>(p: &'a Polytope, times: usize) -> impl Iterator<Item = &'a Polytope> {
    std::iter::repeat(p).take(times)
}

fn common_dim(ps: &[&Polytope]) -> Result<usize, InequalityError> {
    let n = ps[0].ambient_dim();
    if ps.iter().any(|p| p.ambient_dim() != n) {
        return Err(InequalityError::Shape("polytopes of differing ambient dimension".into()));
    }
    Ok(n)
}

/// `(B^k·A^{n−k})·(A^k·C^{n−k}) ≥ k!(n−k)!/n!·(A^n)·(B^k·C^{n−k})`.
pub fn rkt_check(a: &Polytope, b: &Polytope, c: &Polytope, k: usize) -> Result<InequalityReport, InequalityError> {
    rkt_check_with(a, b, c, k, MvStrategy::SharedFan)
}

pub fn rkt_check_with(
    a: &Polytope,
    b: &Polytope,
    c: &Polytope,
    k: usize,
    strategy: MvStrategy,
) -> Result<InequalityReport, InequalityError> {
    let n = common_dim(&[a, b, c])?;
    let inst = Instance::new(&[a, b, c], strategy)?;
    rkt_on(&inst, a, b, c, n, k)
}

/// The inequality for every `k = 1, …, n − 1`, sharing all mixed volumes.
pub fn rkt_check_all_k(a: &Polytope, b: &Polytope, c: &Polytope) -> Result<Vec<InequalityReport>, InequalityError> {
    let n = common_dim(&[a, b, c])?;
    let inst = Instance::new(&[a, b, c], MvStrategy::SharedFan)?;
    (1..n).map(|k| rkt_on(&inst, a, b, c, n, k)).collect()
}

fn rkt_on(inst: &Instance, a: &Polytope, b: &Polytope, c: &Polytope, n: usize, k: usize) -> Result<InequalityReport, InequalityError> {
    let bs = vec![b; k.min(n)];
    let cs = vec![c; n.saturating_sub(k)];
    let mut r = general_terms(inst, "rkt", a, &bs, &cs)?;
    r.fingerprint = fingerprint(&[("A", a), ("B", b), ("C", c)]);
    Ok(r)
}

/// `(B_1⋯B_k·A^{n−k})·(A^k·C_1⋯C_{n−k}) ≥ k!(n−k)!/n!·(A^n)·(B_1⋯B_k·C_1⋯C_{n−k})`.
pub fn rkt_general_check(a: &Polytope, bs: &[&Polytope], cs: &[&Polytope]) -> Result<InequalityReport, InequalityError> {
    rkt_general_check_with(a, bs, cs, MvStrategy::SharedFan)
}

pub fn rkt_general_check_with(
    a: &Polytope,
    bs: &[&Polytope],
    cs: &[&Polytope],
    strategy: MvStrategy,
) -> Result<InequalityReport, InequalityError> {
    let mut all = vec![a];
    all.extend_from_slice(bs);
    all.extend_from_slice(cs);
    common_dim(&all)?;
    let inst = Instance::new(&all, strategy)?;
    let mut r = general_terms(&inst, "rkt-general", a, bs, cs)?;
    let mut parts: Vec<(String, &Polytope)> = vec![("A".into(), a)];
    parts.extend(bs.iter().enumerate().map(|(i, p)| (format!("B{}", i + 1), *p)));
    parts.extend(cs.iter().enumerate().map(|(i, p)| (format!("C{}", i + 1), *p)));
    let named: Vec<(&str, &Polytope)> = parts.iter().map(|(s, p)| (s.as_str(), *p)).collect();
    r.fingerprint = fingerprint(&named);
    Ok(r)
}

fn general_terms(
    inst: &Instance,
    name: &str,
    a: &Polytope,
    bs: &[&Polytope],
    cs: &[&Polytope],
) -> Result<InequalityReport, InequalityError> {
    let n = a.ambient_dim();
    let k = bs.len();
    if n < 2 {
        return Err(InequalityError::Shape("dimension must be at least 2".into()));
    }
    if k == 0 || k >= n {
        return Err(InequalityError::Shape(format!("k = {k} outside 1..={}", n - 1)));
    }
    if cs.len() != n - k {
        return Err(InequalityError::Shape(format!("expected {} C-divisors, got {}", n - k, cs.len())));
    }
    let b_a: Vec<&Polytope> = bs.iter().copied().chain(repeat(a, n - k)).collect();
    let a_c: Vec<&Polytope> = repeat(a, k).chain(cs.iter().copied()).collect();
    let b_c: Vec<&Polytope> = bs.iter().chain(cs).copied().collect();
    let lhs = inst.mv(&b_a)? * inst.mv(&a_c)?;
    let a_n = inst.mv(&vec![a; n])?;
    let rhs = rkt_constant(n, k) * a_n * inst.mv(&b_c)?;
    Ok(InequalityReport::new(name, n, Some(k), lhs, rhs, String::new()))
}

/// Adds the standard simplex to each of `A, B, C` (a common full-dimensional
/// summand, standing in for ampleness) and evaluates the inequality.
pub fn strictness_probe(a: &Polytope, b: &Polytope, c: &Polytope, k: usize) -> Result<InequalityReport, InequalityError> {
    let n = common_dim(&[a, b, c])?;
    let s = Polytope::standard_simplex(n);
    let (a, b, c) = (a.minkowski_sum(&s)?, b.minkowski_sum(&s)?, c.minkowski_sum(&s)?);
    let mut r = rkt_check(&a, &b, &c, k)?;
    r.name = "rkt-strict".into();
    Ok(r)
}

/// Bézout-type bounds for `(A_1^{a_1}⋯A_r^{a_r}·H^{n−|a|})`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BezoutReport {
    /// `Π_{i≠1} binom(|a|,a_i)·Π_i (A_i^{a_i}·H^{n−a_i}) ≥ (H^n)^{r−1}·(A_1^{a_1}⋯A_r^{a_r}·H^{n−|a|})`.
    pub main: InequalityReport,
    /// Bound side with the binomial of index `k` omitted, for each `k`.
    pub bounds: Vec<Rational>,
    /// The minimum of `bounds` against the same intersection side.
    pub corollary: InequalityReport,
}

impl BezoutReport {
    /// The minimum over omitted indices is never weaker than the first-index bound.
    pub fn chain_consistent(&self) -> bool {
        self.corollary.lhs <= self.main.lhs
    }
}

pub fn bezout_check(h: &Polytope, as_: &[&Polytope], exps: &[usize]) -> Result<BezoutReport, InequalityError> {
    let r = as_.len();
    if r == 0 || exps.len() != r {
        return Err(InequalityError::Shape("need one exponent per divisor and at least one divisor".into()));
    }
    let mut all = vec![h];
    all.extend_from_slice(as_);
    let n = common_dim(&all)?;
    if exps.contains(&0) {
        return Err(InequalityError::Domain("exponents must be positive".into()));
    }
    let total: usize = exps.iter().sum();
    if total > n {
        return Err(InequalityError::Domain(format!("exponent sum {total} exceeds dimension {n}")));
    }
    if !h.is_full_dimensional() {
        return Err(InequalityError::Domain("polarization must be full-dimensional".into()));
    }
    let inst = Instance::new(&all, MvStrategy::SharedFan)?;
    let h_n = inst.mv(&vec![h; n])?;
    let mut mixed: Vec<&Polytope> = Vec::with_capacity(n);
    for (p, &e) in as_.iter().zip(exps) {
        mixed.extend(repeat(p, e));
    }
    mixed.extend(repeat(h, n - total));
    let value = num_traits::pow(h_n, r - 1) * inst.mv(&mixed)?;
    let mut product = Rational::one();
    for (p, &e) in as_.iter().zip(exps) {
        let bodies: Vec<&Polytope> = repeat(p, e).chain(repeat(h, n - e)).collect();
        product *= inst.mv(&bodies)?;
    }
    let binoms: Vec<BigInt> = exps.iter().map(|&e| binomial(total, e)).collect();
    let all_binoms: BigInt = binoms.iter().product();
    let bounds: Vec<Rational> = binoms
        .iter()
        .map(|b| Rational::new(all_binoms.clone(), b.clone()) * &product)
        .collect();
    let best = bounds.iter().min().expect("r ≥ 1").clone();

    let mut parts: Vec<(String, &Polytope)> = vec![("H".into(), h)];
    parts.extend(as_.iter().enumerate().map(|(i, p)| (format!("A{}^{}", i + 1, exps[i]), *p)));
    let named: Vec<(&str, &Polytope)> = parts.iter().map(|(s, p)| (s.as_str(), *p)).collect();
    let fp = fingerprint(&named);
    let main = InequalityReport::new("bezout", n, Some(r), bounds[0].clone(), value.clone(), fp.clone());
    let corollary = InequalityReport::new("bezout-min", n, Some(r), best, value, fp);
    Ok(BezoutReport { main, bounds, corollary })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact_arith::{frac, int};

    fn product_triple(n: usize, k: usize) -> (Polytope, Polytope, Polytope) {
        let dk = Polytope::standard_simplex(k);
        let dnk = Polytope::standard_simplex(n - k);
        let ok = Polytope::from_int_points(&[vec![0; k]]).unwrap();
        let onk = Polytope::from_int_points(&[vec![0; n - k]]).unwrap();
        (dk.product(&dnk), dk.product(&onk), ok.product(&dnk))
    }

    #[test]
    fn equality_case_small() {
        for n in 2..=3 {
            for k in 1..n {
                let (a, b, c) = product_triple(n, k);
                let r = rkt_check(&a, &b, &c, k).unwrap();
                assert_eq!(r.lhs, int(1));
                assert_eq!(r.rhs, int(1));
                assert!(r.holds && !r.strict);
            }
        }
    }

    #[test]
    fn all_equal_slack_formula() {
        let a = Polytope::from_int_points(&[vec![0, 0, 0], vec![2, 0, 0], vec![0, 1, 0], vec![0, 0, 3], vec![1, 1, 1]]).unwrap();
        let an = a.volume() * int(6);
        let r = rkt_check(&a, &a, &a, 1).unwrap();
        assert_eq!(r.lhs, &an * &an);
        assert_eq!(r.slack, (int(1) - frac(1, 3)) * &an * &an);
    }

    #[test]
    fn range_errors() {
        let s = Polytope::standard_simplex(3);
        assert!(matches!(rkt_check(&s, &s, &s, 0), Err(InequalityError::Shape(_))));
        assert!(matches!(rkt_check(&s, &s, &s, 3), Err(InequalityError::Shape(_))));
        assert!(matches!(rkt_general_check(&s, &[&s], &[&s]), Err(InequalityError::Shape(_))));
        assert!(matches!(bezout_check(&s, &[&s, &s], &[2, 2]), Err(InequalityError::Domain(_))));
    }

    #[test]
    fn bezout_examples() {
        let s = Polytope::standard_simplex(2);
        let r = bezout_check(&s, &[&s, &s], &[1, 1]).unwrap();
        assert_eq!(r.main.rhs, int(1));
        assert_eq!(r.main.lhs, int(2));
        assert!(r.main.holds && r.chain_consistent());
        let t = bezout_check(&s, &[&s], &[1]).unwrap();
        assert!(t.main.holds && !t.main.strict);
    }
}
