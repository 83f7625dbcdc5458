use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Deserialize;
use serde_json::json;

use rkt_lab_core::dynamics::{self, parse_matrix, MonomialMap};
use rkt_lab_core::exact_arith::{format_rational, parse_rational, Rational};
use rkt_lab_core::harness::{
    run_campaign, CampaignConfig, CampaignResult, InstancePayload, Statement, EXIT_CLEAN, EXIT_INPUT_ERROR,
    EXIT_VIOLATION,
};
use rkt_lab_core::inequalities::InequalityReport;
use rkt_lab_core::intersection::{mixed_volume, DivisorSystem, IntersectionQuery};
use rkt_lab_core::okounkov::{
    convergence_series, empirical_okounkov, multipoint_bodies, okounkov_transform, FlagJson, MultipointFlagModel, ToricFlag,
};
use rkt_lab_core::polytope::{Polytope, PolytopeJson};
use rkt_lab_core::surface::{equality_case_check, rkt_surface_check, SurfaceInput};

#[derive(Parser)]
#[command(name = "rkt-lab", version, about = "Exact mixed volumes, Okounkov bodies and seeded inequality campaigns")]
struct Cli {
    #[command(flatten)]
    common: Common,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args)]
struct Common {
    /// Base seed of a campaign.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Number of instances in a campaign.
    #[arg(long, global = true, default_value_t = 100)]
    count: usize,
    /// Dimension (lattice rank for surface campaigns).
    #[arg(long, global = true)]
    dim: Option<usize>,
    /// `k` for rkt, `r` for bezout, `i` for degree statements.
    #[arg(long, global = true)]
    k: Option<usize>,
    /// Output directory. Without it results go to stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct GenParams {
    /// Vertex budget of generated polytopes.
    #[arg(long)]
    budget: Option<usize>,
    /// Coordinate bound of generated polytopes.
    #[arg(long)]
    bound: Option<i64>,
}

#[derive(Subcommand)]
enum Cmd {
    /// Mixed volume of polytope files, or an intersection number of a divisor system.
    Mv {
        polytopes: Vec<PathBuf>,
        #[arg(long, requires = "query")]
        system: Option<PathBuf>,
        /// Monomial such as `A^2*B`.
        #[arg(long, requires = "system")]
        query: Option<String>,
    },
    /// Reverse Khovanskii-Teissier check on given polytopes or a seeded campaign.
    RktCheck {
        #[arg(long, requires_all = ["b", "c"])]
        a: Option<PathBuf>,
        #[arg(long, requires = "a")]
        b: Option<PathBuf>,
        #[arg(long, requires = "a")]
        c: Option<PathBuf>,
        #[command(flatten)]
        gen: GenParams,
    },
    /// Seeded Bezout-type campaign.
    Bezout {
        #[command(flatten)]
        gen: GenParams,
    },
    /// Okounkov body of a polytope with respect to a flag.
    Okounkov {
        #[arg(long)]
        polytope: PathBuf,
        /// Comma-separated coordinates of the flag vertex.
        #[arg(long, requires = "flag_basis")]
        flag_vertex: Option<String>,
        /// Edge directions separated by `;`, entries by `,`.
        #[arg(long, requires = "flag_vertex")]
        flag_basis: Option<String>,
        /// Highest level of the convergence series.
        #[arg(long, default_value_t = 16)]
        level: u64,
        /// JSON file `{"level": m, "flags": [{"vertex": .., "basis": ..}, ..]}`.
        #[arg(long, conflicts_with_all = ["flag_vertex", "flag_basis"])]
        multipoint: Option<PathBuf>,
    },
    /// Degrees of a monomial map and its iterates.
    Dyndeg {
        /// Exponent matrix, rows separated by `;`.
        #[arg(long, allow_hyphen_values = true)]
        matrix: String,
        /// Polarization (default: standard simplex).
        #[arg(long)]
        polytope: Option<PathBuf>,
        #[arg(long, default_value_t = 1)]
        iters: u32,
        #[arg(long, value_enum)]
        check: Option<Check>,
        /// Second polarization for `--check repolarize` (default: unit cube).
        #[arg(long)]
        other: Option<PathBuf>,
    },
    /// Equality case on a surface lattice given as `{gram, A, B, C}` JSON.
    SurfaceEq { input: PathBuf },
    /// General seeded campaign.
    Fuzz {
        #[arg(long)]
        statement: String,
        #[command(flatten)]
        gen: GenParams,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Check {
    Submult,
    Repolarize,
}

enum Failure {
    Input(String),
    Violation,
}

impl<E: std::fmt::Display> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure::Input(e.to_string())
    }
}

type CliResult = Result<(), Failure>;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT_ERROR } else { EXIT_CLEAN };
            let _ = e.print();
            return ExitCode::from(code as u8);
        }
    };
    let code = match run(cli) {
        Ok(()) => EXIT_CLEAN,
        Err(Failure::Violation) => EXIT_VIOLATION,
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            EXIT_INPUT_ERROR
        }
    };
    ExitCode::from(code as u8)
}

fn run(cli: Cli) -> CliResult {
    let c = &cli.common;
    match cli.cmd {
        Cmd::Mv { polytopes, system, query } => mv(c, &polytopes, system.as_deref(), query.as_deref()),
        Cmd::RktCheck { a: Some(a), b: Some(b), c: Some(cc), .. } => {
            let (a, b, cc) = (read_polytope(&a)?, read_polytope(&b)?, read_polytope(&cc)?);
            let payload = InstancePayload::Rkt { a, b, c: cc, k: c.k };
            emit_reports(c, &payload.evaluate()?)
        }
        Cmd::RktCheck { gen, .. } => campaign(c, Statement::Rkt, &gen),
        Cmd::Bezout { gen } => campaign(c, Statement::Bezout, &gen),
        Cmd::Okounkov { polytope, flag_vertex, flag_basis, level, multipoint } => {
            let p = read_polytope(&polytope)?;
            match multipoint {
                Some(path) => okounkov_multipoint(c, &p, &path),
                None => okounkov_single(c, &p, flag_vertex.as_deref(), flag_basis.as_deref(), level),
            }
        }
        Cmd::Dyndeg { matrix, polytope, iters, check, other } => dyndeg(c, &matrix, polytope.as_deref(), iters, check, other.as_deref()),
        Cmd::SurfaceEq { input } => surface_eq(c, &input),
        Cmd::Fuzz { statement, gen } => campaign(c, statement.parse()?, &gen),
    }
}

fn read_polytope(path: &Path) -> Result<Polytope, Failure> {
    let text = std::fs::read_to_string(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
    Polytope::from_json_str(&text).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

/// Writes `text` to `out/name` when an output directory is set, else to stdout.
fn emit(c: &Common, name: &str, text: &str) -> CliResult {
    match &c.out {
        Some(dir) => {
            std::fs::create_dir_all(dir)?;
            std::fs::write(dir.join(name), text)?;
        }
        None => stdout(text),
    }
    Ok(())
}

/// Prints to stdout. A closed pipe (`rkt-lab ... | head`) is not an error.
fn stdout(text: &str) {
    use std::io::Write;
    let mut out = std::io::stdout().lock();
    if let Err(e) = out.write_all(text.as_bytes()).and_then(|()| out.flush()) {
        if e.kind() != std::io::ErrorKind::BrokenPipe {
            eprintln!("error: writing output: {e}");
        }
    }
}

fn reports_csv(reports: &[InequalityReport]) -> String {
    let mut s = format!("{}\n", InequalityReport::CSV_HEADER);
    for r in reports {
        s.push_str(&r.csv_row());
        s.push('\n');
    }
    s
}

fn emit_reports(c: &Common, reports: &[InequalityReport]) -> CliResult {
    emit(c, "reports.csv", &reports_csv(reports))?;
    if reports.iter().any(|r| !r.holds) {
        return Err(Failure::Violation);
    }
    Ok(())
}

fn mv(c: &Common, files: &[PathBuf], system: Option<&Path>, query: Option<&str>) -> CliResult {
    let value = match (system, query) {
        (Some(path), Some(q)) => {
            let text = std::fs::read_to_string(path)?;
            let sys = DivisorSystem::from_json_str(&text)?;
            sys.intersection_number(&IntersectionQuery::parse(q)?)?
        }
        _ => {
            if files.is_empty() {
                return Err(Failure::Input("give polytope files or --system with --query".into()));
            }
            let ps: Vec<Polytope> = files.iter().map(|f| read_polytope(f)).collect::<Result<_, _>>()?;
            let refs: Vec<&Polytope> = ps.iter().collect();
            mixed_volume(&refs)?
        }
    };
    emit(c, "mv.txt", &format!("{}\n", format_rational(&value)))
}

fn campaign(c: &Common, statement: Statement, gen: &GenParams) -> CliResult {
    let n = c.dim.unwrap_or(match statement {
        Statement::Bezout => 4,
        Statement::OkounkovConv | Statement::SurfaceEq => 2,
        _ => 3,
    });
    let mut cfg = CampaignConfig::new(statement, n, c.count, c.seed).with_k(c.k).with_out(c.out.clone());
    if let Some(b) = gen.budget {
        cfg.vertex_budget = b;
    }
    if let Some(b) = gen.bound {
        cfg.bound = b;
    }
    finish_campaign(&run_campaign(&cfg)?, c.out.as_deref())
}

fn finish_campaign(res: &CampaignResult, out: Option<&Path>) -> CliResult {
    if res.summary.rows == 0 && !res.summary.skipped.is_empty() {
        return Err(Failure::Input(format!("every instance was skipped: {}", res.summary.skipped[0].1)));
    }
    if let Some(dir) = out {
        eprintln!("wrote {}", dir.display());
    } else {
        stdout(&res.csv());
    }
    eprintln!("{}", res.summary);
    for (i, why) in &res.summary.skipped {
        eprintln!("skipped instance {i}: {why}");
    }
    if res.has_violation() {
        return Err(Failure::Violation);
    }
    Ok(())
}

fn parse_list(s: &str) -> Result<Vec<Rational>, Failure> {
    s.split(',').map(|x| parse_rational(x.trim()).map_err(Failure::from)).collect()
}

fn parse_flag(vertex: &str, basis: &str) -> Result<ToricFlag, Failure> {
    let v = parse_list(vertex)?;
    let rows = parse_matrix(basis)?;
    Ok(ToricFlag::new(v, &rows.row_vecs())?)
}

fn okounkov_single(c: &Common, p: &Polytope, vertex: Option<&str>, basis: Option<&str>, level: u64) -> CliResult {
    let flag = match (vertex, basis) {
        (Some(v), Some(b)) => parse_flag(v, b)?,
        _ => ToricFlag::smooth_flags(p)
            .into_iter()
            .next()
            .ok_or_else(|| Failure::Input("polytope has no smooth vertex; pass --flag-vertex and --flag-basis".into()))?,
    };
    flag.validate_for(p)?;
    let (_, body) = okounkov_transform(p, &flag)?;
    let empirical = empirical_okounkov(p, &flag, level)?;
    let doc = json!({
        "flag": flag.to_json(),
        "body": PolytopeJson::from(&body),
        "volume": format_rational(&body.volume()),
        "level": level,
        "empirical_body": PolytopeJson::from(&empirical),
    });
    let series = convergence_series(p, &flag, &levels_up_to(level))?;
    let mut csv = String::from("m,volume\n");
    for (m, v) in series {
        writeln!(csv, "{m},{}", format_rational(&v)).expect("string");
    }
    emit(c, "body.json", &format!("{}\n", serde_json::to_string(&doc)?))?;
    emit(c, "convergence.csv", &csv)
}

/// `1, 2, 4, …` below `level`, then `level` itself.
fn levels_up_to(level: u64) -> Vec<u64> {
    let mut out: Vec<u64> = std::iter::successors(Some(1u64), |m| m.checked_mul(2)).take_while(|&m| m < level).collect();
    out.push(level.max(1));
    out
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct MultipointJson {
    level: u64,
    flags: Vec<FlagJson>,
}

fn okounkov_multipoint(c: &Common, p: &Polytope, path: &Path) -> CliResult {
    let multi: MultipointJson = serde_json::from_str(&std::fs::read_to_string(path)?)?;
    let flags: Vec<ToricFlag> = multi.flags.iter().map(ToricFlag::from_json).collect::<Result<_, _>>()?;
    for f in &flags {
        f.validate_for(p)?;
    }
    let model = MultipointFlagModel::new(multi.level, flags)?;
    let bodies = multipoint_bodies(&model, p)?;
    let doc = json!({
        "level": multi.level,
        "bodies": bodies.iter().map(|b| b.as_ref().map(PolytopeJson::from)).collect::<Vec<_>>(),
    });
    let mut csv = String::from("m,volume\n");
    for m in levels_up_to(multi.level) {
        let bodies = multipoint_bodies(&model.with_level(m)?, p)?;
        let total: Rational = bodies.iter().flatten().map(Polytope::volume).sum();
        writeln!(csv, "{m},{}", format_rational(&total)).expect("string");
    }
    emit(c, "bodies.json", &format!("{}\n", serde_json::to_string(&doc)?))?;
    emit(c, "convergence.csv", &csv)
}

fn dyndeg(c: &Common, matrix: &str, polytope: Option<&Path>, iters: u32, check: Option<Check>, other: Option<&Path>) -> CliResult {
    let f = MonomialMap::new(parse_matrix(matrix)?)?;
    let n = f.dim();
    let h = match polytope {
        Some(p) => read_polytope(p)?,
        None => Polytope::standard_simplex(n),
    };
    let rows = dynamics::degree_sequence(&f, &h, iters)?;
    let mut csv = String::from("t,i,degree\n");
    for r in &rows {
        writeln!(csv, "{},{},{}", r.t, r.i, format_rational(&r.degree)).expect("string");
    }
    emit(c, "degrees.csv", &csv)?;
    let reports = match check {
        None => return Ok(()),
        Some(Check::Submult) => {
            let mut out = Vec::new();
            let mut ft = f.clone();
            for _ in 1..iters.max(2) {
                out.extend(dynamics::submult_reports(&f, &ft, &h)?);
                ft = ft.compose(&f)?;
            }
            out
        }
        Some(Check::Repolarize) => {
            let l = match other {
                Some(p) => read_polytope(p)?,
                None => Polytope::unit_cube(n),
            };
            dynamics::repolarization_reports(&f, &h, &l)?
        }
    };
    if c.out.is_none() {
        stdout("\n");
    }
    emit_reports(c, &reports)
}

fn surface_eq(c: &Common, path: &Path) -> CliResult {
    let input = SurfaceInput::from_json_str(&std::fs::read_to_string(path)?)?;
    let (l, t) = input.to_instance()?;
    let eq = equality_case_check(&l, &t)?;
    let rkt = rkt_surface_check(&l, &t)?;
    let q = |r: &Rational| format_rational(r);
    let doc = json!({
        "lhs": q(&eq.lhs),
        "rhs": q(&eq.rhs),
        "numeric_equality": eq.numeric_equality,
        "forward": eq.forward.as_ref().map(|w| json!({
            "s": q(&w.s),
            "t": q(&w.t),
            "residual": w.residual.iter().map(q).collect::<Vec<_>>(),
            "residual_trivial": w.residual_trivial,
            "conditions_hold": w.conditions_hold(),
        })),
        "backward": eq.backward.as_ref().map(|w| json!({"s": q(&w.s), "t": q(&w.t)})),
        "consistent": eq.consistent(),
        "rkt": {"lhs": q(&rkt.lhs), "rhs": q(&rkt.rhs), "slack": q(&rkt.slack), "holds": rkt.holds},
    });
    emit(c, "surface.json", &format!("{}\n", serde_json::to_string(&doc)?))?;
    if !rkt.holds {
        return Err(Failure::Violation);
    }
    Ok(())
}
