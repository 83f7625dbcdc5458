//! Lattice-normalized mixed volumes, used as intersection numbers of nef
//! toric divisors.
//!
//! `MV(P_1, …, P_n) = Σ_{∅≠S} (−1)^{n−|S|} vol(Σ_{i∈S} P_i)`, normalized so that
//! `MV(P, …, P) = n!·vol(P)`. Repeated arguments are grouped: with distinct
//! bodies `Q_j` of multiplicity `m_j`, the subsets collapse to count vectors
//! `0 ≤ c ≤ m` weighted by `Π binom(m_j, c_j)`.

mod query;
mod system;

use std::collections::HashMap;

use num_bigint::BigInt;
use num_traits::Zero;

use crate::exact_arith::{binomial, factorial, Rational};
use crate::polytope::{MinkowskiFan, Polytope, PolytopeError};

pub use query::IntersectionQuery;
pub use system::{DivisorSystem, DivisorSystemJson};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum IntersectionError {
    #[error("shape error: {0}")]
    Shape(String),
    #[error("unknown divisor `{0}`")]
    UnknownDivisor(String),
    #[error("cannot parse query `{0}`")]
    Parse(String),
    #[error(transparent)]
    Polytope(#[from] PolytopeError),
}

/// How the volumes `vol(Σ c_j Q_j)` inside inclusion–exclusion are obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum MvStrategy {
    /// Triangulate `Q_1 + … + Q_s` once and evaluate every combination on it.
    #[default]
    SharedFan,
    /// Build each combination by dilation and pairwise Minkowski sums, then
    /// hull and triangulate it from scratch.
    FreshHull,
}

/// Groups equal polytopes, preserving first-occurrence order.
pub fn group_bodies<'a>(bodies: &[&'a Polytope]) -> Vec<(&'a Polytope, usize)> {
    let mut out: Vec<(&Polytope, usize)> = Vec::new();
    for &b in bodies {
        match out.iter_mut().find(|(q, _)| *q == b) {
            Some(entry) => entry.1 += 1,
            None => out.push((b, 1)),
        }
    }
    out
}

fn check_shape(parts: &[(&Polytope, usize)]) -> Result<usize, IntersectionError> {
    let n: usize = parts.iter().map(|(_, m)| m).sum();
    if n == 0 {
        return Err(IntersectionError::Shape("mixed volume of no bodies".into()));
    }
    if let Some((p, _)) = parts.iter().find(|(p, _)| p.ambient_dim() != n) {
        return Err(IntersectionError::Shape(format!(
            "{n} bodies given for ambient dimension {}",
            p.ambient_dim()
        )));
    }
    Ok(n)
}

/// Count vectors `c` with `0 ≤ c ≤ m`, `c ≠ 0`, with their signed weights
/// `(−1)^{n−|c|} Π binom(m_j, c_j)`.
pub(crate) fn inclusion_exclusion_terms(mult: &[usize]) -> Vec<(Vec<u32>, BigInt)> {
    let n: usize = mult.iter().sum();
    let mut out = Vec::new();
    let mut c = vec![0usize; mult.len()];
    loop {
        let mut j = 0;
        while j < c.len() && c[j] == mult[j] {
            c[j] = 0;
            j += 1;
        }
        if j == c.len() {
            return out;
        }
        c[j] += 1;
        let size: usize = c.iter().sum();
        let mut w: BigInt = c.iter().zip(mult).map(|(&ci, &mi)| binomial(mi, ci)).product();
        if (n - size) % 2 == 1 {
            w = -w;
        }
        out.push((c.iter().map(|&x| x as u32).collect(), w));
    }
}

/// Mixed volume of `n` bodies in dimension `n`.
pub fn mixed_volume(bodies: &[&Polytope]) -> Result<Rational, IntersectionError> {
    mixed_volume_with(bodies, MvStrategy::SharedFan)
}

pub fn mixed_volume_with(bodies: &[&Polytope], strategy: MvStrategy) -> Result<Rational, IntersectionError> {
    mixed_volume_grouped(&group_bodies(bodies), strategy)
}

/// Mixed volume of bodies given with multiplicities.
pub fn mixed_volume_grouped(parts: &[(&Polytope, usize)], strategy: MvStrategy) -> Result<Rational, IntersectionError> {
    check_shape(parts)?;
    let mult: Vec<usize> = parts.iter().map(|(_, m)| *m).collect();
    let terms = inclusion_exclusion_terms(&mult);
    match strategy {
        MvStrategy::SharedFan => {
            let polys: Vec<&Polytope> = parts.iter().map(|(p, _)| *p).collect();
            let fan = MinkowskiFan::new(&polys)?;
            Ok(mixed_volume_on_fan(&fan, &terms))
        }
        MvStrategy::FreshHull => {
            let mut memo: HashMap<Vec<u32>, Rational> = HashMap::new();
            let mut acc = Rational::zero();
            for (c, w) in &terms {
                let v = match memo.get(c) {
                    Some(v) => v.clone(),
                    None => {
                        let v = fresh_combination_volume(parts, c)?;
                        memo.insert(c.clone(), v.clone());
                        v
                    }
                };
                acc += v * Rational::from_integer(w.clone());
            }
            Ok(acc)
        }
    }
}

/// `Σ w(c)·vol(Σ c_j Q_j)` over precomputed inclusion–exclusion terms,
/// with `c` indexing the bodies of `fan`.
pub(crate) fn mixed_volume_on_fan(fan: &MinkowskiFan, terms: &[(Vec<u32>, BigInt)]) -> Rational {
    if !fan.is_full_dimensional() {
        return Rational::zero();
    }
    let mut acc = BigInt::zero();
    for (c, w) in terms {
        acc += w * fan.scaled_normalized_volume(c);
    }
    Rational::new(acc, factorial(fan.dim()) * fan.scale_power())
}

fn fresh_combination_volume(parts: &[(&Polytope, usize)], c: &[u32]) -> Result<Rational, IntersectionError> {
    let mut sum: Option<Polytope> = None;
    for ((p, _), &cj) in parts.iter().zip(c) {
        if cj == 0 {
            continue;
        }
        let scaled = p.dilate(&Rational::from_integer(BigInt::from(cj)))?;
        sum = Some(match sum {
            None => scaled,
            Some(s) => s.minkowski_sum(&scaled)?,
        });
    }
    Ok(sum.map_or_else(Rational::zero, |s| s.volume()))
}

/// `MV(A^{n−i}, B^i)` for `i = 0, …, n` from one shared triangulation.
pub fn mixed_sequence(a: &Polytope, b: &Polytope) -> Result<Vec<Rational>, IntersectionError> {
    let n = a.ambient_dim();
    if b.ambient_dim() != n {
        return Err(IntersectionError::Shape("polytopes of differing dimension".into()));
    }
    if a == b {
        let v = a.volume() * Rational::from_integer(factorial(n));
        return Ok(vec![v; n + 1]);
    }
    let fan = MinkowskiFan::new(&[a, b])?;
    Ok((0..=n)
        .map(|i| mixed_volume_on_fan(&fan, &inclusion_exclusion_terms(&[n - i, i])))
        .collect())
}

/// Alexandrov–Fenchel log-concavity of `s_i = MV(A^{n−i}, B^i)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LogConcavityReport {
    pub sequence: Vec<Rational>,
    /// Interior indices `i` with `s_i² < s_{i−1}·s_{i+1}`.
    pub violations: Vec<usize>,
    /// Interior indices where `s_i² = s_{i−1}·s_{i+1}`.
    pub equalities: Vec<usize>,
}

impl LogConcavityReport {
    pub fn holds(&self) -> bool {
        self.violations.is_empty()
    }
}

pub fn kt_logconcavity_check(a: &Polytope, b: &Polytope) -> Result<LogConcavityReport, IntersectionError> {
    let n = a.ambient_dim();
    let sequence = mixed_sequence(a, b)?;
    let mut violations = Vec::new();
    let mut equalities = Vec::new();
    for i in 1..n {
        let l = &sequence[i] * &sequence[i];
        let r = &sequence[i - 1] * &sequence[i + 1];
        if l < r {
            violations.push(i);
        } else if l == r {
            equalities.push(i);
        }
    }
    Ok(LogConcavityReport { sequence, violations, equalities })
}
