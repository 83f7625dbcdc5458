//! Okounkov bodies of toric divisors with respect to smooth torus-invariant
//! flags, plus their multipoint variant at finite level.
//!
//! For a flag at vertex `v` with edge basis `B`, the body of `P` is the image
//! of `P` under `x ↦ B⁻¹(x − v)`. The valuation of the monomial section `u`
//! of `m·P` is computed independently, one facet distance at a time.

mod flag;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use rayon::prelude::*;

use crate::exact_arith::{self, Rational};
use crate::polytope::{Point, Polytope, PolytopeError};

pub use flag::{FlagJson, ToricFlag};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum OkounkovError {
    #[error("flag error: {0}")]
    Flag(String),
    #[error("domain error: {0}")]
    Domain(String),
    #[error(transparent)]
    Polytope(#[from] PolytopeError),
}

/// `(ν_1, …, ν_n)`, compared lexicographically.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ValuationVector(Vec<Rational>);

impl ValuationVector {
    pub fn new(entries: Vec<Rational>) -> Result<Self, OkounkovError> {
        if entries.iter().any(Signed::is_negative) {
            return Err(OkounkovError::Domain("valuation entries must be nonnegative".into()));
        }
        Ok(ValuationVector(entries))
    }

    pub fn entries(&self) -> &[Rational] {
        &self.0
    }

    pub fn into_entries(self) -> Vec<Rational> {
        self.0
    }
}

/// Unimodular affine map `x ↦ L·x + t`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OkounkovMap {
    pub linear: exact_arith::IntMatrix,
    pub translation: Point,
}

impl OkounkovMap {
    pub fn apply(&self, x: &[Rational]) -> Point {
        let lx = self.linear.mul_vec(x).expect("dimension checked at construction");
        lx.into_iter().zip(&self.translation).map(|(a, b)| a + b).collect()
    }
}

/// The affine map of the flag and the Okounkov body `map(P)`.
pub fn okounkov_transform(p: &Polytope, flag: &ToricFlag) -> Result<(OkounkovMap, Polytope), OkounkovError> {
    flag.validate_for(p)?;
    let linear = flag.inverse_matrix().clone();
    let translation: Point = linear
        .mul_vec(flag.vertex())
        .expect("square")
        .into_iter()
        .map(|x| -x)
        .collect();
    let map = OkounkovMap { linear, translation };
    let pts: Vec<Point> = p.vertices().iter().map(|v| map.apply(v)).collect();
    let body = Polytope::convex_hull(&pts)?;
    Ok((map, body))
}

/// Valuation of the monomial section `u` of `m·P`.
///
/// `ν_i` is the lattice distance from the current exponent to the `i`-th flag
/// facet of `m·P`; the exponent is then moved along `b_i` onto that facet
/// before the next coordinate is read.
pub fn valuation(u: &[BigInt], p: &Polytope, flag: &ToricFlag, m: u64) -> Result<ValuationVector, OkounkovError> {
    flag.validate_for(p)?;
    let facets = flag.flag_facets(p)?;
    valuation_with(u, p, flag, &facets, m)
}

fn valuation_with(
    u: &[BigInt],
    p: &Polytope,
    flag: &ToricFlag,
    facets: &[(Vec<BigInt>, Rational)],
    m: u64,
) -> Result<ValuationVector, OkounkovError> {
    if m == 0 {
        return Err(OkounkovError::Domain("level must be positive".into()));
    }
    if u.len() != p.ambient_dim() {
        return Err(OkounkovError::Domain("exponent has the wrong dimension".into()));
    }
    let mr = Rational::from_integer(BigInt::from(m));
    let mut cur: Vec<Rational> = u.iter().cloned().map(Rational::from_integer).collect();
    let scaled: Vec<Rational> = cur.iter().map(|x| x / &mr).collect();
    if !p.contains(&scaled) {
        return Err(OkounkovError::Domain(format!("{u:?} is not a lattice point of {m}·P")));
    }
    let basis = flag.edge_basis();
    let mut nu = Vec::with_capacity(u.len());
    for ((a, c), b) in facets.iter().zip(&basis) {
        let dist = c * &mr - exact_arith::dot_int_rat(a, &cur);
        for (x, bj) in cur.iter_mut().zip(b) {
            *x -= &dist * Rational::from_integer(bj.clone());
        }
        nu.push(dist);
    }
    ValuationVector::new(nu)
}

fn valuations_at_level(
    p: &Polytope,
    flag: &ToricFlag,
    m: u64,
    points: &[Vec<BigInt>],
) -> Result<Vec<ValuationVector>, OkounkovError> {
    flag.validate_for(p)?;
    let facets = flag.flag_facets(p)?;
    points.par_iter().map(|u| valuation_with(u, p, flag, &facets, m)).collect()
}

fn hull_scaled(vals: &[ValuationVector], m: u64) -> Result<Polytope, OkounkovError> {
    let mr = Rational::from_integer(BigInt::from(m));
    let pts: Vec<Point> = vals.iter().map(|v| v.entries().iter().map(|x| x / &mr).collect()).collect();
    Ok(Polytope::convex_hull(&pts)?)
}

/// `(1/m)·conv` of all valuation vectors of lattice points of `m·P`.
pub fn empirical_okounkov(p: &Polytope, flag: &ToricFlag, m: u64) -> Result<Polytope, OkounkovError> {
    let points = p.lattice_points(m)?;
    if points.is_empty() {
        return Err(OkounkovError::Domain(format!("{m}·P has no lattice points")));
    }
    let vals = valuations_at_level(p, flag, m, &points)?;
    hull_scaled(&vals, m)
}

/// Volumes of the empirical bodies at each level.
pub fn convergence_series(p: &Polytope, flag: &ToricFlag, levels: &[u64]) -> Result<Vec<(u64, Rational)>, OkounkovError> {
    levels
        .iter()
        .map(|&m| Ok((m, empirical_okounkov(p, flag, m)?.volume())))
        .collect()
}

/// Comparison of the body with the body of the `k`-th flag face.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProjectionReport {
    pub n: usize,
    pub k: usize,
    pub body_volume: Rational,
    /// Volume of the projection to the first `k` coordinates.
    pub head_volume: Rational,
    /// Volume of the projection to the last `n − k` coordinates.
    pub tail_volume: Rational,
    /// Volume of the Okounkov body of `F_k` with the induced flag.
    pub face_volume: Rational,
    /// Whether `F_k` has the expected dimension `n − k`.
    pub face_degenerate: bool,
    pub inclusion_holds: bool,
    pub fubini_holds: bool,
}

impl ProjectionReport {
    /// The inclusion failed or could not be posed, so the hypotheses under
    /// which it is guaranteed must fail for this flag.
    pub fn hypothesis_failure_candidate(&self) -> bool {
        self.face_degenerate || !self.inclusion_holds
    }

    /// `vol(pr_{≤k}) · vol(pr_{>k}) − vol(body)`.
    pub fn fubini_slack(&self) -> Rational {
        &self.head_volume * &self.tail_volume - &self.body_volume
    }
}

/// Checks `pr_{>k}(Δ) ⊆ Δ(F_k)` and `vol(Δ) ≤ vol(pr_{≤k}Δ)·vol(pr_{>k}Δ)`.
pub fn projection_inclusion_check(p: &Polytope, flag: &ToricFlag, k: usize) -> Result<ProjectionReport, OkounkovError> {
    let n = p.ambient_dim();
    if k == 0 || k >= n {
        return Err(OkounkovError::Domain(format!("k = {k} outside 1..{}", n.saturating_sub(1))));
    }
    let (_, body) = okounkov_transform(p, flag)?;
    let head = body.project_head(k)?;
    let tail = body.project_tail(k)?;
    let body_volume = body.volume();
    let head_volume = head.volume();
    let tail_volume = tail.volume();
    let fubini_holds = body_volume <= &head_volume * &tail_volume;
    let (face, sub) = flag.sub_flag(p, k)?;
    let face_degenerate = face.dim() != n - k;
    let (face_volume, inclusion_holds) = if face_degenerate {
        (Rational::zero(), false)
    } else {
        let (_, face_body) = okounkov_transform(&face, &sub)?;
        let inside = tail.vertices().iter().all(|v| face_body.contains(v));
        (face_body.volume(), inside)
    };
    Ok(ProjectionReport {
        n,
        k,
        body_volume,
        head_volume,
        tail_volume,
        face_volume,
        face_degenerate,
        inclusion_holds,
        fubini_holds,
    })
}

/// Several flags on one polytope evaluated at a common level `m`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MultipointFlagModel {
    level: u64,
    flags: Vec<ToricFlag>,
}

impl MultipointFlagModel {
    pub fn new(level: u64, flags: Vec<ToricFlag>) -> Result<Self, OkounkovError> {
        if level == 0 {
            return Err(OkounkovError::Domain("level must be positive".into()));
        }
        let first = flags.first().ok_or_else(|| OkounkovError::Domain("need at least one flag point".into()))?;
        if flags.iter().any(|f| f.dim() != first.dim()) {
            return Err(OkounkovError::Flag("flags of differing dimension".into()));
        }
        for (i, f) in flags.iter().enumerate() {
            if flags[..i].iter().any(|g| g.vertex() == f.vertex()) {
                return Err(OkounkovError::Flag(format!("flag point {i} repeats an earlier point")));
            }
        }
        Ok(MultipointFlagModel { level, flags })
    }

    pub fn level(&self) -> u64 {
        self.level
    }

    pub fn with_level(&self, level: u64) -> Result<Self, OkounkovError> {
        Self::new(level, self.flags.clone())
    }

    pub fn flags(&self) -> &[ToricFlag] {
        &self.flags
    }

    pub fn num_points(&self) -> usize {
        self.flags.len()
    }

    /// Lattice points of `m·P` and, per flag, their valuation vectors.
    pub fn valuation_tables(&self, p: &Polytope) -> Result<(Vec<Vec<BigInt>>, Vec<Vec<ValuationVector>>), OkounkovError> {
        let points = p.lattice_points(self.level)?;
        let tables = self
            .flags
            .iter()
            .map(|f| valuations_at_level(p, f, self.level, &points))
            .collect::<Result<Vec<_>, _>>()?;
        Ok((points, tables))
    }
}

/// Per flag point, the body of sections whose valuation there is strictly
/// lexicographically smallest; `None` when no lattice point lands in a
/// bucket. Ties between points are discarded.
pub fn multipoint_bodies(model: &MultipointFlagModel, p: &Polytope) -> Result<Vec<Option<Polytope>>, OkounkovError> {
    let (points, tables) = model.valuation_tables(p)?;
    let n_flags = model.num_points();
    let mut buckets: Vec<Vec<ValuationVector>> = vec![Vec::new(); n_flags];
    for i in 0..points.len() {
        let best = (0..n_flags).min_by(|&a, &b| tables[a][i].cmp(&tables[b][i])).expect("N ≥ 1");
        let tied = (0..n_flags).any(|j| j != best && tables[j][i] == tables[best][i]);
        if !tied {
            buckets[best].push(tables[best][i].clone());
        }
    }
    buckets
        .iter()
        .map(|b| if b.is_empty() { Ok(None) } else { hull_scaled(b, model.level).map(Some) })
        .collect()
}

/// Total volume of the multipoint bodies.
pub fn multipoint_volume_sum(model: &MultipointFlagModel, p: &Polytope) -> Result<Rational, OkounkovError> {
    Ok(multipoint_bodies(model, p)?
        .iter()
        .flatten()
        .map(Polytope::volume)
        .sum())
}

/// Exact multipoint bodies of a segment `P = [lo, hi]` of length `d`.
///
/// On the toric line a divisor in `|D|_Q` vanishes to orders `a` and `b` at
/// the two fixed points with `a + b ≤ d`. With one flag point the body is
/// `[0, d]`; with both endpoints the strict sets `a < b` and `b < a` close up
/// to `[0, d/2]` each.
pub fn exact_multipoint_dim1(model: &MultipointFlagModel, p: &Polytope) -> Result<Vec<(Rational, Rational)>, OkounkovError> {
    if p.ambient_dim() != 1 {
        return Err(OkounkovError::Domain("exact multipoint bodies are only available in dimension 1".into()));
    }
    for f in model.flags() {
        f.validate_for(p)?;
    }
    let v = p.vertices();
    let d = &v[v.len() - 1][0] - &v[0][0];
    let top = match model.num_points() {
        1 => d,
        2 => d / Rational::from_integer(BigInt::from(2)),
        _ => unreachable!("a segment has two vertices and flag points are distinct"),
    };
    Ok(vec![(Rational::zero(), top); model.num_points()])
}
