mod cache;

use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::io::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

use rulers_core::arrangements::{arrangement_for, Arrangement};
use rulers_core::ehrhart::{
    count_report, fit_closed, fit_open, intersection_census_2d, period_bound, reciprocity_check,
    IntersectionPoset, Quasipolynomial,
};
use rulers_core::orientation::{counterexample_m5, graph_for, injectivity_check, M5_LIMITS};
use rulers_core::regions::{realization_threshold, region_census, render_svg, RegionLimits};
use rulers_core::rulers::{count_family_bruteforce, FamilySpec};
use rulers_core::sweep::WorkBudget;
use rulers_core::Error;

use cache::Cache;

#[derive(Parser)]
#[command(name = "rulers", version, about = "Exact counts of generalized Golomb rulers")]
struct Cli {
    /// Worker threads for parallel sweeps.
    #[arg(long, global = true, default_value_t = default_workers())]
    workers: usize,
    /// Work budget in elementary operations.
    #[arg(long, global = true, default_value_t = WorkBudget::DEFAULT.0)]
    budget: u128,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Directory for cached count reports.
    #[arg(long, global = true)]
    cache_dir: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

fn default_workers() -> usize {
    std::thread::available_parallelism().map_or(1, |n| n.get())
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Svg,
}

#[derive(Args, Clone)]
struct FamilyArgs {
    /// golomb, bh, b2g or b2minusg.
    #[arg(long)]
    family: String,
    /// Number of gaps (markings minus one).
    #[arg(long)]
    m: usize,
    #[arg(long)]
    h: Option<usize>,
    #[arg(long)]
    g: Option<usize>,
}

impl FamilyArgs {
    fn spec(&self) -> Result<FamilySpec, CliError> {
        Ok(FamilySpec::from_parts(&self.family, self.m, self.h, self.g)?)
    }
}

#[derive(Args, Clone, Default)]
struct Dilations {
    #[arg(long)]
    t: Option<u64>,
    /// Comma-separated dilations.
    #[arg(long, value_delimiter = ',')]
    t_list: Vec<u64>,
    /// Inclusive range `a..b`.
    #[arg(long)]
    t_range: Option<String>,
}

impl Dilations {
    fn resolve(&self, default: Option<Vec<u64>>) -> Result<Vec<u64>, CliError> {
        let mut ts: Vec<u64> = self.t.into_iter().chain(self.t_list.iter().copied()).collect();
        if let Some(r) = &self.t_range {
            let (a, b) = r
                .split_once("..")
                .ok_or_else(|| CliError::Validation(format!("bad range {r:?}, expected a..b")))?;
            let parse = |s: &str| {
                s.trim()
                    .parse::<u64>()
                    .map_err(|_| CliError::Validation(format!("bad range bound {s:?}")))
            };
            let (a, b) = (parse(a)?, parse(b)?);
            if a > b {
                return Err(CliError::Validation(format!("empty range {r}")));
            }
            ts.extend(a..=b);
        }
        if ts.is_empty() {
            return default.ok_or_else(|| CliError::Validation("give --t, --t-list or --t-range".into()));
        }
        Ok(ts)
    }
}

#[derive(Subcommand)]
enum Command {
    /// Count family members of given lengths by lattice points.
    Count {
        #[command(flatten)]
        family: FamilyArgs,
        #[command(flatten)]
        dilations: Dilations,
        /// Also count with the definition-level membership test and fail on disagreement.
        #[arg(long)]
        oracle: bool,
        /// Also report the closed count with multiplicity.
        #[arg(long)]
        closed: bool,
    },
    /// Print the canonical arrangement.
    Arrangement {
        #[command(flatten)]
        family: FamilyArgs,
    },
    /// Enumerate regions of a hyperplane arrangement.
    Regions {
        #[command(flatten)]
        family: FamilyArgs,
        /// Write an SVG drawing (m = 3 only) to this path.
        #[arg(long)]
        svg: Option<PathBuf>,
        /// Raise the hyperplane guard.
        #[arg(long, default_value_t = RegionLimits::DEFAULT.max_hyperplanes)]
        max_hyperplanes: usize,
        /// Also report the least t ≤ this bound whose lattice points meet every region.
        #[arg(long)]
        threshold: Option<u64>,
    },
    /// Fit quasipolynomial constituents from exact counts.
    Fit {
        #[command(flatten)]
        family: FamilyArgs,
        /// Period hypothesis; defaults to the vertex-denominator bound.
        #[arg(long)]
        period: Option<u64>,
        /// Residues to fit; defaults to all when the period is at most 64.
        #[arg(long, value_delimiter = ',')]
        residue: Vec<u64>,
        /// Fit the closed count with multiplicity instead of the open count.
        #[arg(long)]
        closed: bool,
    },
    /// Compare fitted open constituents at −t with closed counts at t.
    Reciprocity {
        #[command(flatten)]
        family: FamilyArgs,
        #[command(flatten)]
        dilations: Dilations,
        #[arg(long)]
        period: Option<u64>,
    },
    /// Print the orientation graph, optionally checking injectivity of φ.
    Graph {
        #[command(flatten)]
        family: FamilyArgs,
        #[arg(long)]
        injectivity: bool,
        #[arg(long, default_value_t = RegionLimits::DEFAULT.max_hyperplanes)]
        max_hyperplanes: usize,
    },
    /// Check the m = 5 orientation that no region realizes.
    #[command(name = "counterexample-m5")]
    CounterexampleM5,
}

#[derive(Debug)]
enum CliError {
    Core(Error),
    Validation(String),
    Mismatch(String, serde_json::Value),
    Io(String),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Core(e)
    }
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Validation(_) | CliError::Io(_) => 2,
            CliError::Mismatch(..) => 4,
            CliError::Core(e) => match e {
                Error::BudgetExceeded { .. } | Error::GuardExceeded(_) | Error::Overflow(_) => 3,
                Error::InconsistentSamples { .. } => 4,
                _ => 2,
            },
        }
    }

    fn to_json(&self) -> serde_json::Value {
        let (kind, message, detail) = match self {
            CliError::Core(e) => ("core", e.to_string(), None),
            CliError::Validation(m) => ("validation", m.clone(), None),
            CliError::Mismatch(m, d) => ("mismatch", m.clone(), Some(d.clone())),
            CliError::Io(m) => ("io", m.clone(), None),
        };
        let mut v = json!({ "error": kind, "message": message, "exit_code": self.exit_code() });
        if let Some(d) = detail {
            v["detail"] = d;
        }
        v
    }
}

struct Ctx {
    budget: WorkBudget,
    format: Format,
    cache: Option<Cache>,
}

/// Writes to stdout, ignoring a closed pipe.
fn out(text: &str) {
    let _ = writeln!(std::io::stdout().lock(), "{text}");
}

fn emit<T: Serialize>(value: &T) {
    out(&serde_json::to_string(value).expect("output serializes"));
}

fn require_json(ctx: &Ctx, what: &str) -> Result<(), CliError> {
    if ctx.format == Format::Json {
        Ok(())
    } else {
        Err(CliError::Validation(format!("{what} supports only --format json")))
    }
}

fn limits(max_hyperplanes: usize) -> RegionLimits {
    RegionLimits {
        max_hyperplanes,
        ..RegionLimits::DEFAULT
    }
}

fn cmd_count(ctx: &Ctx, family: FamilySpec, ts: &[u64], oracle: bool, closed: bool) -> Result<(), CliError> {
    if ctx.format == Format::Svg {
        return Err(CliError::Validation("count supports --format json or csv".into()));
    }
    let a = arrangement_for(&family)?;
    let hash = a.hash();
    let poset = if closed { Some(IntersectionPoset::build(&a)?) } else { None };
    if ctx.format == Format::Csv {
        out(if closed { "t,count,closed_count" } else { "t,count" });
    }
    for &t in ts {
        let key = Cache::key(&family, t, &hash, closed);
        let cached = ctx.cache.as_ref().and_then(|c| c.get(&key));
        let report = match cached {
            Some(r) => r,
            None => {
                let r = count_report(&a, poset.as_ref(), t, ctx.budget)?;
                if let Some(c) = &ctx.cache {
                    c.put(&key, &r).map_err(|e| CliError::Io(e.to_string()))?;
                }
                r
            }
        };
        if oracle {
            let brute = count_family_bruteforce(&family, t, ctx.budget)?;
            if brute != report.open_count {
                return Err(CliError::Mismatch(
                    format!("lattice count {} differs from oracle {brute} at t = {t}", report.open_count),
                    json!({ "t": t, "lattice": report.open_count, "oracle": brute }),
                ));
            }
        }
        match ctx.format {
            Format::Csv => match report.closed_count_with_multiplicity {
                Some(c) => out(&format!("{},{},{c}", report.t, report.open_count)),
                None => out(&format!("{},{}", report.t, report.open_count)),
            },
            _ => emit(&report),
        }
    }
    Ok(())
}

fn cmd_regions(ctx: &Ctx, a: &Arrangement, svg: Option<PathBuf>, max: usize, threshold: Option<u64>) -> Result<(), CliError> {
    let census = region_census(a, limits(max))?;
    let svg_text = if svg.is_some() || ctx.format == Format::Svg {
        Some(render_svg(a, census.count)?)
    } else {
        None
    };
    if let (Some(path), Some(text)) = (&svg, &svg_text) {
        std::fs::write(path, text).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    }
    match ctx.format {
        Format::Svg => out(svg_text.unwrap_or_default().trim_end()),
        Format::Csv => return Err(CliError::Validation("regions supports --format json or svg".into())),
        Format::Json => {
            let intersections = if a.m == 3 {
                let (interior, boundary) = intersection_census_2d(a)?;
                Some(json!({ "interior": interior, "boundary": boundary }))
            } else {
                None
            };
            let threshold = match threshold {
                Some(t_max) => Some(realization_threshold(a, census.count, t_max)?),
                None => None,
            };
            let mut doc = serde_json::to_value(&census).expect("census serializes");
            doc["family"] = serde_json::to_value(a.family).expect("family serializes");
            if let Some(i) = intersections {
                doc["intersections"] = i;
            }
            if let Some(t) = threshold {
                doc["realization_threshold"] = json!(t);
            }
            emit(&doc);
        }
    }
    Ok(())
}

fn resolve_period(a: &Arrangement, period: Option<u64>) -> Result<u64, CliError> {
    match period {
        Some(0) => Err(CliError::Validation("period must be positive".into())),
        Some(p) => Ok(p),
        None => Ok(period_bound(&IntersectionPoset::build(a)?)?),
    }
}

fn cmd_fit(ctx: &Ctx, a: &Arrangement, period: Option<u64>, residues: Vec<u64>, closed: bool) -> Result<(), CliError> {
    require_json(ctx, "fit")?;
    let period = resolve_period(a, period)?;
    let residues = if residues.is_empty() {
        if period > 64 {
            return Err(CliError::Validation(format!("period {period} is large; choose residues with --residue")));
        }
        (0..period).collect()
    } else {
        residues
    };
    if let Some(r) = residues.iter().find(|&&r| r >= period) {
        return Err(CliError::Validation(format!("residue {r} not below period {period}")));
    }
    let qp: Quasipolynomial = if closed {
        let p = IntersectionPoset::build(a)?;
        fit_closed(a, &p, period, &residues, ctx.budget)?
    } else {
        fit_open(a, period, &residues, ctx.budget)?
    };
    emit(&json!({
        "family": a.family,
        "kind": if closed { "closed" } else { "open" },
        "quasipolynomial": qp,
        "leading_coefficient_ok": qp.has_simplex_leading_term(a.m),
    }));
    Ok(())
}

fn cmd_reciprocity(ctx: &Ctx, a: &Arrangement, ts: &[u64], period: Option<u64>) -> Result<(), CliError> {
    require_json(ctx, "reciprocity")?;
    let period = resolve_period(a, period)?;
    let p = IntersectionPoset::build(a)?;
    // constituents are evaluated at −t
    let needed: BTreeSet<u64> = ts.iter().map(|t| (period - t % period) % period).collect();
    let needed: Vec<u64> = needed.into_iter().collect();
    let qp = fit_open(a, period, &needed, ctx.budget)?;
    let report = reciprocity_check(a, &p, &qp, ts, ctx.budget)?;
    let doc = serde_json::to_value(&report).expect("report serializes");
    if !report.passed() {
        return Err(CliError::Mismatch(format!("reciprocity fails at t = {:?}", report.first_failure), doc));
    }
    emit(&doc);
    Ok(())
}

fn cmd_graph(ctx: &Ctx, family: FamilySpec, injectivity: bool, max: usize) -> Result<(), CliError> {
    require_json(ctx, "graph")?;
    let g = graph_for(&family)?;
    let mut doc = json!({ "family": family, "graph": g });
    if injectivity {
        let report = injectivity_check(&family, limits(max))?;
        let value = serde_json::to_value(&report).expect("report serializes");
        if !report.passed() {
            return Err(CliError::Mismatch("φ is not an injection into coherent acyclic orientations".into(), value));
        }
        doc["injectivity"] = value;
    }
    emit(&doc);
    Ok(())
}

fn cmd_counterexample(ctx: &Ctx) -> Result<(), CliError> {
    require_json(ctx, "counterexample-m5")?;
    let report = counterexample_m5(M5_LIMITS)?;
    let mut doc = serde_json::to_value(&report).expect("report serializes");
    if !report.passed() {
        return Err(CliError::Mismatch("counterexample checks failed".into(), doc));
    }
    doc["status"] = json!("PASS");
    emit(&doc);
    Ok(())
}

fn run(cli: Cli) -> Result<(), CliError> {
    if cli.workers == 0 {
        return Err(CliError::Validation("--workers must be at least 1".into()));
    }
    rayon::ThreadPoolBuilder::new()
        .num_threads(cli.workers)
        .build_global()
        .map_err(|e| CliError::Io(e.to_string()))?;
    let cache = match &cli.cache_dir {
        Some(dir) => Some(Cache::open(dir).map_err(|e| CliError::Io(format!("{}: {e}", dir.display())))?),
        None => None,
    };
    let ctx = Ctx {
        budget: WorkBudget(cli.budget),
        format: cli.format,
        cache,
    };
    match cli.command {
        Command::Count {
            family,
            dilations,
            oracle,
            closed,
        } => cmd_count(&ctx, family.spec()?, &dilations.resolve(None)?, oracle, closed),
        Command::Arrangement { family } => {
            require_json(&ctx, "arrangement")?;
            out(&arrangement_for(&family.spec()?)?.to_json());
            Ok(())
        }
        Command::Regions {
            family,
            svg,
            max_hyperplanes,
            threshold,
        } => cmd_regions(&ctx, &arrangement_for(&family.spec()?)?, svg, max_hyperplanes, threshold),
        Command::Fit {
            family,
            period,
            residue,
            closed,
        } => cmd_fit(&ctx, &arrangement_for(&family.spec()?)?, period, residue, closed),
        Command::Reciprocity {
            family,
            dilations,
            period,
        } => {
            let ts = dilations.resolve(Some((1..=20).collect()))?;
            cmd_reciprocity(&ctx, &arrangement_for(&family.spec()?)?, &ts, period)
        }
        Command::Graph {
            family,
            injectivity,
            max_hyperplanes,
        } => cmd_graph(&ctx, family.spec()?, injectivity, max_hyperplanes),
        Command::CounterexampleM5 => cmd_counterexample(&ctx),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            if matches!(e.kind(), clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion) {
                let _ = e.print();
                return ExitCode::SUCCESS;
            }
            let mut msg = String::new();
            let _ = write!(msg, "{}", e.render());
            eprintln!("{}", json!({ "error": "usage", "message": msg.trim_end(), "exit_code": 2 }));
            return ExitCode::from(2);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("{}", e.to_json());
            ExitCode::from(e.exit_code())
        }
    }
}
