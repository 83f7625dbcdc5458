//! Self-contained instance descriptions that can be re-evaluated.

use serde::{Deserialize, Serialize};

use super::HarnessError;
use crate::dynamics::{self, parse_matrix, MonomialMap};
use crate::inequalities::{self, InequalityReport};
use crate::okounkov::{self, FlagJson, ToricFlag};
use crate::polytope::Polytope;
use crate::surface::{self, SurfaceInput};

/// One generated instance of a campaign statement.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "statement", rename_all = "kebab-case")]
pub enum InstancePayload {
    /// `k = None` evaluates every `k`.
    Rkt { a: Polytope, b: Polytope, c: Polytope, k: Option<usize> },
    RktGeneral { a: Polytope, bs: Vec<Polytope>, cs: Vec<Polytope> },
    Bezout { h: Polytope, divisors: Vec<Polytope>, exponents: Vec<usize> },
    /// Matrices in `a,b;c,d` form; `i = None` evaluates every index.
    Submult { f: String, g: String, h: Polytope, i: Option<usize> },
    Repolarize { f: String, h: Polytope, l: Polytope, i: Option<usize> },
    SurfaceEq { input: SurfaceInput },
    OkounkovConv { p: Polytope, flag: FlagJson, levels: Vec<u64> },
}

/// Reports of one instance plus whether a hypothesis check failed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Evaluation {
    pub reports: Vec<InequalityReport>,
    pub hypothesis_failure: bool,
}

fn eval_err(e: impl std::fmt::Display) -> HarnessError {
    HarnessError::Evaluation(e.to_string())
}

fn map(s: &str) -> Result<MonomialMap, HarnessError> {
    MonomialMap::new(parse_matrix(s).map_err(eval_err)?).map_err(eval_err)
}

impl InstancePayload {
    pub fn okounkov_conv(p: &Polytope, flag: &ToricFlag, levels: &[u64]) -> Self {
        InstancePayload::OkounkovConv {
            p: p.clone(),
            flag: flag.to_json(),
            levels: levels.to_vec(),
        }
    }

    pub fn evaluate(&self) -> Result<Vec<InequalityReport>, HarnessError> {
        Ok(self.evaluate_full()?.reports)
    }

    pub fn evaluate_full(&self) -> Result<Evaluation, HarnessError> {
        let mut hypothesis_failure = false;
        let reports = match self {
            InstancePayload::Rkt { a, b, c, k } => match k {
                Some(k) => vec![inequalities::rkt_check(a, b, c, *k).map_err(eval_err)?],
                None => inequalities::rkt_check_all_k(a, b, c).map_err(eval_err)?,
            },
            InstancePayload::RktGeneral { a, bs, cs } => {
                let bs: Vec<&Polytope> = bs.iter().collect();
                let cs: Vec<&Polytope> = cs.iter().collect();
                vec![inequalities::rkt_general_check(a, &bs, &cs).map_err(eval_err)?]
            }
            InstancePayload::Bezout { h, divisors, exponents } => {
                let ds: Vec<&Polytope> = divisors.iter().collect();
                let r = inequalities::bezout_check(h, &ds, exponents).map_err(eval_err)?;
                vec![r.main, r.corollary]
            }
            InstancePayload::Submult { f, g, h, i } => {
                let (f, g) = (map(f)?, map(g)?);
                match i {
                    Some(i) => vec![dynamics::submult_check(&f, &g, h, *i).map_err(eval_err)?],
                    None => dynamics::submult_reports(&f, &g, h).map_err(eval_err)?,
                }
            }
            InstancePayload::Repolarize { f, h, l, i } => {
                let f = map(f)?;
                match i {
                    Some(i) => vec![dynamics::repolarization_check(&f, h, l, *i).map_err(eval_err)?],
                    None => dynamics::repolarization_reports(&f, h, l).map_err(eval_err)?,
                }
            }
            InstancePayload::SurfaceEq { input } => {
                let (l, t) = input.to_instance().map_err(eval_err)?;
                let eq = surface::equality_case_check(&l, &t).map_err(eval_err)?;
                hypothesis_failure = !eq.consistent();
                vec![surface::rkt_surface_check(&l, &t).map_err(eval_err)?]
            }
            InstancePayload::OkounkovConv { p, flag, levels } => {
                let flag = ToricFlag::from_json(flag).map_err(eval_err)?;
                let (reports, failed) = okounkov_reports(p, &flag, levels)?;
                hypothesis_failure = failed;
                reports
            }
        };
        Ok(Evaluation { reports, hypothesis_failure })
    }
}

/// `vol(P) ≥ vol(Δ_m)` per level, then `vol(Δ_m) ≥ vol(Δ_{m'})` for
/// consecutive levels `m' < m`, then `vol(pr_{≤k}Δ)·vol(pr_{>k}Δ) ≥ vol(Δ)`
/// for every split `k`. The flag is reported as a hypothesis failure when a
/// projection escapes the body of the induced face.
fn okounkov_reports(p: &Polytope, flag: &ToricFlag, levels: &[u64]) -> Result<(Vec<InequalityReport>, bool), HarnessError> {
    let n = p.ambient_dim();
    let series = okounkov::convergence_series(p, flag, levels).map_err(eval_err)?;
    let fp = inequalities::fingerprint(&[("P", p)]);
    let vol = p.volume();
    let mut out: Vec<InequalityReport> = series
        .iter()
        .map(|(m, v)| InequalityReport::new("okounkov-conv", n, Some(*m as usize), vol.clone(), v.clone(), fp.clone()))
        .collect();
    for w in series.windows(2) {
        out.push(InequalityReport::new("okounkov-monotone", n, Some(w[1].0 as usize), w[1].1.clone(), w[0].1.clone(), fp.clone()));
    }
    let mut failed = false;
    for k in 1..n {
        let r = okounkov::projection_inclusion_check(p, flag, k).map_err(eval_err)?;
        failed |= r.hypothesis_failure_candidate();
        out.push(InequalityReport::new("fubini", n, Some(k), &r.head_volume * &r.tail_volume, r.body_volume, fp.clone()));
    }
    Ok((out, failed))
}
