//! Seeded fuzz campaigns.
//!
//! Instance `i` of a campaign with seed `s` draws from `Rng::new(instance_seed(s, i))`,
//! so any single instance can be regenerated without replaying the others.

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::time::{Duration, Instant};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::findings::{Category, Finding};
use super::generator::{
    gen_equality_triple, gen_monomial_map, gen_polytope_from, gen_smooth_vertex_instance, gen_surface_triple,
};
use super::payload::{Evaluation, InstancePayload};
use super::rng::{instance_seed, Rng};
use super::HarnessError;
use crate::dynamics::format_matrix;
use crate::exact_arith::{format_rational, Rational};
use crate::inequalities::{fingerprint_text, InequalityReport};
use crate::surface::SurfaceInput;

/// Environment variable capping the number of worker threads.
pub const THREADS_ENV: &str = "RKT_LAB_THREADS";

pub const EXIT_CLEAN: i32 = 0;
pub const EXIT_VIOLATION: i32 = 2;
pub const EXIT_INPUT_ERROR: i32 = 3;

/// Levels used by `okounkov-conv` campaigns.
pub const DEFAULT_LEVELS: [u64; 5] = [1, 2, 4, 8, 16];

const MAX_BOUND: i64 = 1000;
const MAX_BUDGET: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Statement {
    Rkt,
    RktGeneral,
    Bezout,
    Submult,
    Repolarize,
    SurfaceEq,
    OkounkovConv,
}

impl Statement {
    pub const ALL: [Statement; 7] = [
        Statement::Rkt,
        Statement::RktGeneral,
        Statement::Bezout,
        Statement::Submult,
        Statement::Repolarize,
        Statement::SurfaceEq,
        Statement::OkounkovConv,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Statement::Rkt => "rkt",
            Statement::RktGeneral => "rkt-general",
            Statement::Bezout => "bezout",
            Statement::Submult => "submult",
            Statement::Repolarize => "repolarize",
            Statement::SurfaceEq => "surface-eq",
            Statement::OkounkovConv => "okounkov-conv",
        }
    }

    /// Supported dimensions (the lattice rank for `surface-eq`).
    pub fn dim_range(self) -> (usize, usize) {
        match self {
            Statement::Rkt | Statement::RktGeneral | Statement::Bezout => (2, 6),
            Statement::Submult | Statement::Repolarize => (1, 4),
            Statement::SurfaceEq => (2, 6),
            Statement::OkounkovConv => (1, 3),
        }
    }
}

impl fmt::Display for Statement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Statement {
    type Err = HarnessError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Statement::ALL
            .into_iter()
            .find(|st| st.as_str() == s)
            .ok_or_else(|| HarnessError::Config(format!("unknown statement `{s}`")))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CampaignConfig {
    pub statement: Statement,
    pub n: usize,
    /// `k` for `rkt` and `rkt-general`, `r` for `bezout`, `i` for the degree
    /// statements. `None` means every index (or a random one for
    /// `rkt-general` and `bezout`).
    pub k: Option<usize>,
    pub count: usize,
    pub seed: u64,
    pub vertex_budget: usize,
    pub bound: i64,
    #[serde(skip)]
    pub out: Option<PathBuf>,
}

impl CampaignConfig {
    /// Config with the default generator parameters for dimension `n`.
    pub fn new(statement: Statement, n: usize, count: usize, seed: u64) -> Self {
        let (vertex_budget, bound) = match n {
            0..=2 => (4, 3),
            3 => (5, 3),
            4 => (6, 3),
            _ => (7, 2),
        };
        CampaignConfig { statement, n, k: None, count, seed, vertex_budget, bound, out: None }
    }

    pub fn with_k(mut self, k: Option<usize>) -> Self {
        self.k = k;
        self
    }

    pub fn with_out(mut self, out: Option<PathBuf>) -> Self {
        self.out = out;
        self
    }

    pub fn validate(&self) -> Result<(), HarnessError> {
        let bad = |msg: String| Err(HarnessError::Config(msg));
        if self.count == 0 {
            return bad("count must be at least 1".into());
        }
        let (lo, hi) = self.statement.dim_range();
        if self.n < lo || self.n > hi {
            return bad(format!("{} supports n in {lo}..={hi}, got {}", self.statement, self.n));
        }
        if self.bound < 1 || self.bound > MAX_BOUND {
            return bad(format!("bound must lie in 1..={MAX_BOUND}"));
        }
        if self.vertex_budget < self.n + 1 || self.vertex_budget > MAX_BUDGET {
            return bad(format!("vertex budget must lie in {}..={MAX_BUDGET}", self.n + 1));
        }
        if let Some(k) = self.k {
            let ok = match self.statement {
                Statement::Rkt | Statement::RktGeneral => (1..self.n).contains(&k),
                Statement::Bezout => (1..=self.n).contains(&k),
                Statement::Submult | Statement::Repolarize => k <= self.n,
                Statement::SurfaceEq | Statement::OkounkovConv => false,
            };
            if !ok {
                return bad(format!("index {k} is not valid for {} with n = {}", self.statement, self.n));
            }
        }
        Ok(())
    }

    /// Digest of every field that affects the output.
    pub fn campaign_id(&self) -> String {
        let k = self.k.map(|k| k.to_string()).unwrap_or_default();
        fingerprint_text(&[
            ("statement", self.statement.to_string()),
            ("n", self.n.to_string()),
            ("k", k),
            ("count", self.count.to_string()),
            ("seed", self.seed.to_string()),
            ("budget", self.vertex_budget.to_string()),
            ("bound", self.bound.to_string()),
        ])
    }

    /// Payload of instance `index`.
    pub fn instance(&self, index: u64) -> Result<InstancePayload, HarnessError> {
        let mut rng = Rng::new(instance_seed(self.seed, index));
        generate(self, &mut rng)
    }
}

fn generate(c: &CampaignConfig, rng: &mut Rng) -> Result<InstancePayload, HarnessError> {
    let n = c.n;
    let poly = |rng: &mut Rng| gen_polytope_from(rng, n, c.vertex_budget, c.bound);
    Ok(match c.statement {
        Statement::Rkt => {
            let (a, b, cc) = (poly(rng)?, poly(rng)?, poly(rng)?);
            InstancePayload::Rkt { a, b, c: cc, k: c.k }
        }
        Statement::RktGeneral => {
            let k = c.k.unwrap_or_else(|| 1 + rng.below(n as u64 - 1) as usize);
            let a = poly(rng)?;
            let bs = (0..k).map(|_| poly(rng)).collect::<Result<_, _>>()?;
            let cs = (0..n - k).map(|_| poly(rng)).collect::<Result<_, _>>()?;
            InstancePayload::RktGeneral { a, bs, cs }
        }
        Statement::Bezout => {
            let r = c.k.unwrap_or_else(|| 2 + rng.below(n.min(3) as u64 - 1) as usize);
            let mut exponents = vec![1usize; r];
            let extra = rng.below((n - r + 1) as u64);
            for _ in 0..extra {
                exponents[rng.below(r as u64) as usize] += 1;
            }
            let h = poly(rng)?;
            let divisors = (0..r).map(|_| poly(rng)).collect::<Result<_, _>>()?;
            InstancePayload::Bezout { h, divisors, exponents }
        }
        Statement::Submult => {
            let f = gen_monomial_map(rng, n, -3, 3)?;
            let g = gen_monomial_map(rng, n, -3, 3)?;
            let h = poly(rng)?;
            InstancePayload::Submult { f: format_matrix(f.matrix()), g: format_matrix(g.matrix()), h, i: c.k }
        }
        Statement::Repolarize => {
            let f = gen_monomial_map(rng, n, -3, 3)?;
            let (h, l) = (poly(rng)?, poly(rng)?);
            InstancePayload::Repolarize { f: format_matrix(f.matrix()), h, l, i: c.k }
        }
        Statement::SurfaceEq => {
            let (l, t) = if rng.coin() {
                let (l, t, _, _) = gen_equality_triple(rng, n)?;
                (l, t)
            } else {
                gen_surface_triple(rng, n)?
            };
            InstancePayload::SurfaceEq { input: SurfaceInput::from_instance(&l, &t) }
        }
        Statement::OkounkovConv => {
            let (p, flag) = gen_smooth_vertex_instance(rng, n, c.vertex_budget, c.bound)?;
            InstancePayload::okounkov_conv(&p, &flag, &DEFAULT_LEVELS)
        }
    })
}

/// Result of one instance, in campaign order.
#[derive(Debug, Clone)]
pub struct InstanceOutcome {
    pub index: u64,
    pub seed: u64,
    pub payload: Option<InstancePayload>,
    pub result: Result<Evaluation, String>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CampaignSummary {
    pub campaign_id: String,
    pub statement: Statement,
    pub instances: usize,
    pub rows: usize,
    /// Instances whose generation or evaluation failed, with the reason.
    pub skipped: Vec<(u64, String)>,
    pub violations: usize,
    pub equality_witnesses: usize,
    pub near_equalities: usize,
    pub hypothesis_failures: usize,
    pub min_slack: Option<Rational>,
    /// Lower median.
    pub median_slack: Option<Rational>,
    pub runtime: Duration,
}

impl fmt::Display for CampaignSummary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let opt = |r: &Option<Rational>| r.as_ref().map(format_rational).unwrap_or_else(|| "-".into());
        writeln!(f, "campaign {} ({})", self.campaign_id, self.statement)?;
        writeln!(f, "instances: {}, rows: {}, skipped: {}", self.instances, self.rows, self.skipped.len())?;
        writeln!(
            f,
            "violations: {}, equality witnesses: {}, near equalities: {}, hypothesis failures: {}",
            self.violations, self.equality_witnesses, self.near_equalities, self.hypothesis_failures
        )?;
        writeln!(f, "min slack: {}, median slack: {}", opt(&self.min_slack), opt(&self.median_slack))?;
        write!(f, "runtime: {:.3} s", self.runtime.as_secs_f64())
    }
}

#[derive(Debug, Clone)]
pub struct CampaignResult {
    pub summary: CampaignSummary,
    pub reports: Vec<InequalityReport>,
    pub findings: Vec<Finding>,
}

impl CampaignResult {
    pub fn csv(&self) -> String {
        let mut s = String::from(InequalityReport::CSV_HEADER);
        s.push('\n');
        for r in &self.reports {
            s.push_str(&r.csv_row());
            s.push('\n');
        }
        s
    }

    pub fn has_violation(&self) -> bool {
        self.summary.violations > 0
    }

    pub fn exit_code(&self) -> i32 {
        if self.has_violation() {
            EXIT_VIOLATION
        } else {
            EXIT_CLEAN
        }
    }

    /// Writes `reports.csv`, `summary.txt` and `findings/<id>.json` under `dir`.
    pub fn write_to(&self, dir: &Path) -> Result<(), HarnessError> {
        std::fs::create_dir_all(dir)?;
        std::fs::write(dir.join("reports.csv"), self.csv())?;
        std::fs::write(dir.join("summary.txt"), format!("{}\n", self.summary))?;
        let fdir = dir.join("findings");
        for f in &self.findings {
            f.write_to(&fdir)?;
        }
        Ok(())
    }
}

/// Worker pool capped by [`THREADS_ENV`] when it is set.
pub fn thread_pool() -> Result<rayon::ThreadPool, HarnessError> {
    let mut b = rayon::ThreadPoolBuilder::new();
    if let Ok(v) = std::env::var(THREADS_ENV) {
        let t: usize = v
            .trim()
            .parse()
            .ok()
            .filter(|&t| t >= 1)
            .ok_or_else(|| HarnessError::Config(format!("{THREADS_ENV} must be a positive integer, got `{v}`")))?;
        b = b.num_threads(t);
    }
    b.build().map_err(|e| HarnessError::Config(e.to_string()))
}

/// Generates and evaluates every instance of `c`.
pub fn run_campaign(c: &CampaignConfig) -> Result<CampaignResult, HarnessError> {
    c.validate()?;
    run_with(c, |i| c.instance(i))
}

/// Runs a campaign whose instances come from `make` instead of the
/// built-in generator. Seeds are still derived from the config.
pub fn run_with<F>(c: &CampaignConfig, make: F) -> Result<CampaignResult, HarnessError>
where
    F: Fn(u64) -> Result<InstancePayload, HarnessError> + Sync,
{
    if c.count == 0 {
        return Err(HarnessError::Config("count must be at least 1".into()));
    }
    let start = Instant::now();
    let pool = thread_pool()?;
    let outcomes: Vec<InstanceOutcome> = pool.install(|| {
        (0..c.count as u64)
            .into_par_iter()
            .map(|index| {
                let seed = instance_seed(c.seed, index);
                match make(index) {
                    Ok(p) => {
                        let result = p.evaluate_full().map_err(|e| e.to_string());
                        InstanceOutcome { index, seed, payload: Some(p), result }
                    }
                    Err(e) => InstanceOutcome { index, seed, payload: None, result: Err(e.to_string()) },
                }
            })
            .collect()
    });
    let result = collect(c, outcomes, start.elapsed());
    if let Some(dir) = &c.out {
        result.write_to(dir)?;
    }
    Ok(result)
}

/// Rows that are equalities for every input and carry no information.
fn trivially_tight(r: &InequalityReport) -> bool {
    match r.name.as_str() {
        "submult" | "repolarize" => r.k == Some(0) || r.k == Some(r.n),
        "bezout" | "bezout-min" => r.k == Some(1),
        name => name.starts_with("okounkov") || name == "fubini",
    }
}

fn collect(c: &CampaignConfig, outcomes: Vec<InstanceOutcome>, runtime: Duration) -> CampaignResult {
    let campaign_id = c.campaign_id();
    let mut reports = Vec::new();
    let mut findings = Vec::new();
    let mut skipped = Vec::new();
    let mut hypothesis_failures = 0;
    for o in outcomes {
        let ev = match o.result {
            Ok(ev) => ev,
            Err(e) => {
                skipped.push((o.index, e));
                continue;
            }
        };
        let payload = o.payload.expect("evaluated instances carry their payload");
        let rows: Vec<InequalityReport> = ev.reports.into_iter().map(|r| r.with_seed(o.seed)).collect();
        let mut finding = |category: Category, r: &InequalityReport| {
            findings.push(Finding {
                campaign_id: campaign_id.clone(),
                fingerprint: r.fingerprint.clone(),
                category,
                report: r.clone(),
                payload: payload.clone(),
            })
        };
        if ev.hypothesis_failure {
            hypothesis_failures += 1;
            if let Some(r) = rows.first() {
                finding(Category::HypothesisFailure, r);
            }
        }
        for r in &rows {
            if !r.holds {
                finding(Category::Violation, r);
            } else if !trivially_tight(r) {
                if r.is_equality() {
                    finding(Category::EqualityWitness, r);
                } else if r.is_near_equality() {
                    finding(Category::NearEquality, r);
                }
            }
        }
        reports.extend(rows);
    }
    let count = |cat: Category| findings.iter().filter(|f| f.category == cat).count();
    let mut slacks: Vec<&Rational> = reports.iter().map(|r| &r.slack).collect();
    slacks.sort();
    let summary = CampaignSummary {
        campaign_id,
        statement: c.statement,
        instances: c.count,
        rows: reports.len(),
        violations: count(Category::Violation),
        equality_witnesses: count(Category::EqualityWitness),
        near_equalities: count(Category::NearEquality),
        hypothesis_failures,
        min_slack: slacks.first().map(|s| (*s).clone()),
        median_slack: (!slacks.is_empty()).then(|| slacks[(slacks.len() - 1) / 2].clone()),
        skipped,
        runtime,
    };
    CampaignResult { summary, reports, findings }
}
