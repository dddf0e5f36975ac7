//! Command-line front end: `build`, `run`, `verify`, `bench`, `gen` and
//! `areas`. Every command writes line-delimited records.
//!
//! Exit codes: 0 success, 1 verification divergence or failed bench check,
//! 2 input error.

use std::fmt::Write as _;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Parser, Subcommand};

use crate::areas::{ball_radius, enumerate_areas};
use crate::dynamic::{offline_dp, DynamicClustering, UpdateStats};
use crate::error::{Error, Result};
use crate::events::{parse_events, Event};
use crate::gen::{events_file, gen_events, gen_instance, instance_file, WorkloadSpec};
use crate::metric::{load_instance, Instance, Point};
use crate::oracle::{
    ratio_report, restricted_exhaustive, MAX_EXHAUSTIVE_CLIENTS, MAX_EXHAUSTIVE_FACILITIES,
    MAX_EXHAUSTIVE_PAIRS,
};
use crate::preprocess::{build, structural_violations, PairTree};

pub const EXIT_OK: i32 = 0;
pub const EXIT_DIVERGENCE: i32 = 1;
pub const EXIT_INPUT: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "radii", about = "Dynamic sum-of-radii clustering")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Build the pair hierarchy and dump it.
    Build {
        #[arg(long)]
        instance: PathBuf,
        /// Also write the dump to this file.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Replay events and answer queries.
    Run {
        #[arg(long)]
        instance: PathBuf,
        #[arg(long)]
        events: PathBuf,
        /// Emit `touched <n>` after every update.
        #[arg(long)]
        trace: bool,
    },
    /// Replay events, checking the dynamic structure against the oracles.
    Verify {
        #[arg(long)]
        instance: PathBuf,
        #[arg(long)]
        events: PathBuf,
        #[arg(long, hide = true)]
        inject_fault: Option<usize>,
    },
    /// Timed replay with node-touch accounting.
    Bench {
        #[arg(long)]
        instance: PathBuf,
        #[arg(long)]
        events: PathBuf,
        /// Per-event records.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Generate an instance and an event stream from a spec file.
    Gen {
        #[arg(long)]
        spec: PathBuf,
        #[arg(long)]
        out_instance: PathBuf,
        #[arg(long)]
        out_events: PathBuf,
    },
    /// Materialize areas over a finite universe.
    Areas {
        #[arg(long)]
        instance: PathBuf,
        /// `point <id> <coords...>` lines; defaults to the whole universe of
        /// a graph or matrix instance.
        #[arg(long)]
        universe: Option<PathBuf>,
    },
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

fn write(path: &Path, text: &str) -> Result<()> {
    std::fs::write(path, text).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

/// Tree dump followed by summary statistics.
pub fn build_report(instance: &Instance) -> Result<String> {
    let (levels, tree) = build(instance)?;
    let mut out = tree.dump(instance);
    let range = tree.range();
    let _ = writeln!(out, "range {} {}", range.rho_min, range.rho_max);
    let _ = writeln!(out, "height {}", tree.height());
    let _ = writeln!(out, "pairs {}", tree.len());
    let _ = writeln!(out, "max_degree {}", tree.max_degree());
    for level in &levels.levels {
        let _ = writeln!(
            out,
            "level {} size {} candidates {}",
            level.logradius,
            level.members.len(),
            level.candidates.len()
        );
    }
    for (d, n) in tree.degree_histogram() {
        let _ = writeln!(out, "degree {d} nodes {n}");
    }
    let _ = writeln!(
        out,
        "violations {}",
        structural_violations(instance, &levels, &tree).len()
    );
    Ok(out)
}

/// Error raised while replaying event `index` (0-based).
#[derive(Debug, Clone, PartialEq)]
pub struct EventError {
    pub index: usize,
    pub error: Error,
}

impl std::fmt::Display for EventError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "event {}: {}", self.index, self.error)
    }
}

fn apply(dc: &mut DynamicClustering<'_>, ev: &Event) -> Result<Option<UpdateStats>> {
    match ev {
        Event::Insert { id, point } => dc.insert(id, point.clone()).map(Some),
        Event::Delete { id } => dc.delete(id).map(Some),
        _ => Ok(None),
    }
}

/// Replays events, producing `cost <int>` and `solution ...` lines for
/// queries and, with `trace`, `touched <n>` for updates.
pub fn run_events(
    instance: &Instance,
    tree: &PairTree,
    events: &[Event],
    trace: bool,
) -> std::result::Result<String, EventError> {
    let mut dc = DynamicClustering::new(tree, instance);
    let mut out = String::new();
    for (index, ev) in events.iter().enumerate() {
        match ev {
            Event::CostQuery => {
                let _ = writeln!(out, "cost {}", dc.cost());
            }
            Event::SolutionQuery => {
                let _ = writeln!(out, "{}", dc.solution().to_line());
            }
            _ => {
                let stats = apply(&mut dc, ev)
                    .map_err(|error| EventError { index, error })?
                    .expect("updates yield stats");
                if trace {
                    let _ = writeln!(out, "touched {}", stats.touched());
                }
            }
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, Default)]
pub struct VerifyOptions {
    /// Corrupt the root annotation right after this event.
    pub fault_at: Option<usize>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Divergence {
    pub index: usize,
    pub what: String,
    pub expected: String,
    pub got: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct VerifyOutcome {
    pub lines: Vec<String>,
    pub divergence: Option<Divergence>,
}

fn live_points(dc: &DynamicClustering<'_>) -> Vec<Point> {
    dc.clients().map(|(_, e)| e.point.clone()).collect()
}

fn check_solution(dc: &DynamicClustering<'_>) -> std::result::Result<(), String> {
    let (tree, instance) = (dc.tree(), dc.instance());
    let sol = dc.solution();
    let nodes: Vec<_> = sol
        .pairs
        .iter()
        .map(|p| {
            tree.node_ids()
                .find(|&v| tree.pair(instance, v) == *p)
                .ok_or_else(|| format!("pair ({},{}) not in the tree", p.facility, p.logradius))
        })
        .collect::<std::result::Result<_, _>>()?;
    let sum: u64 = nodes.iter().map(|&v| tree.cost(instance, v)).sum();
    if sum != sol.total_cost || sum != dc.cost() {
        return Err(format!(
            "solution cost {} sums to {sum}, root x is {}",
            sol.total_cost,
            dc.cost()
        ));
    }
    for (id, entry) in dc.clients() {
        let covered = nodes.iter().any(|&v| {
            let n = tree.node(v);
            tree.is_ancestor_or_self(v, entry.home.node)
                && instance.dist(&entry.point, &instance.facility(n.facility).point)
                    <= ball_radius(n.logradius)
        });
        if !covered {
            return Err(format!("client {id} is not covered"));
        }
    }
    Ok(())
}

/// Replays events and compares, after every event, the maintained cost with
/// a from-scratch offline DP and the stored annotations with a full
/// recomputation. At queries, small instances are also checked against the
/// exhaustive restricted cover and the unrestricted optimum.
pub fn verify_events(
    instance: &Instance,
    tree: &PairTree,
    events: &[Event],
    opts: &VerifyOptions,
) -> std::result::Result<VerifyOutcome, EventError> {
    let mut dc = DynamicClustering::new(tree, instance);
    let mut lines = Vec::new();
    let diverge = |index, what: &str, expected: String, got: String| {
        Some(Divergence {
            index,
            what: what.to_string(),
            expected,
            got,
        })
    };
    for (index, ev) in events.iter().enumerate() {
        apply(&mut dc, ev).map_err(|error| EventError { index, error })?;
        if opts.fault_at == Some(index) {
            dc.corrupt_annotation(tree.root(), 1);
        }
        let points = live_points(&dc);
        let (expected, _) =
            offline_dp(&points, tree, instance).map_err(|error| EventError { index, error })?;
        if expected != dc.cost() {
            let divergence = diverge(index, "cost", expected.to_string(), dc.cost().to_string());
            return Ok(VerifyOutcome { lines, divergence });
        }
        if let Err(msg) = dc.check_annotations() {
            let divergence = diverge(index, "annotations", "consistent".into(), msg);
            return Ok(VerifyOutcome { lines, divergence });
        }
        if !matches!(ev, Event::CostQuery | Event::SolutionQuery) {
            continue;
        }
        if let Err(msg) = check_solution(&dc) {
            let divergence = diverge(index, "solution", "valid cover".into(), msg);
            return Ok(VerifyOutcome { lines, divergence });
        }
        if tree.len() <= MAX_EXHAUSTIVE_PAIRS {
            let exact = restricted_exhaustive(&points, tree, instance)
                .map_err(|error| EventError { index, error })?;
            if exact.cost != dc.cost() {
                let divergence = diverge(
                    index,
                    "exhaustive",
                    exact.cost.to_string(),
                    dc.cost().to_string(),
                );
                return Ok(VerifyOutcome { lines, divergence });
            }
        }
        if points.len() <= MAX_EXHAUSTIVE_CLIENTS
            && instance.facilities().len() <= MAX_EXHAUSTIVE_FACILITIES
        {
            match ratio_report(&points, tree, instance) {
                Ok(r) => lines.push(format!(
                    "ratio {} bound {}",
                    r.ratio,
                    r.bound.map_or("-".to_string(), |b| b.to_string())
                )),
                Err(Error::BoundViolated { ratio, bound }) => {
                    let divergence =
                        diverge(index, "ratio", format!("<= {bound}"), ratio.to_string());
                    return Ok(VerifyOutcome { lines, divergence });
                }
                Err(error) => return Err(EventError { index, error }),
            }
        }
    }
    lines.push(format!("verify ok {} events", events.len()));
    Ok(VerifyOutcome {
        lines,
        divergence: None,
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EventRecord {
    pub kind: &'static str,
    pub search_visits: usize,
    pub path_len: usize,
    /// Nodes touched: search plus path for updates, read nodes for queries.
    pub touched: usize,
    pub nanos: u128,
    /// Pairs in the answer of a solution query.
    pub solution_size: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BenchReport {
    pub height: usize,
    pub max_degree: usize,
    pub pairs: usize,
    pub kappa: Option<u32>,
    pub records: Vec<EventRecord>,
}

fn percentile(sorted: &[u128], q: f64) -> u128 {
    if sorted.is_empty() {
        return 0;
    }
    let i = ((sorted.len() - 1) as f64 * q).round() as usize;
    sorted[i]
}

impl BenchReport {
    /// Upper bound on search visits per insert when a doubling-dimension
    /// hint is available: `height * 2^(2k) * (2^(4k) + 1)`.
    pub fn search_bound(&self) -> Option<usize> {
        self.kappa.map(|k| {
            self.height * (1usize << (2 * k)) * ((1usize << (4 * k)) + 1)
        })
    }

    /// Named pass/fail checks over the recorded counts.
    pub fn checks(&self) -> Vec<(&'static str, bool)> {
        let of = |kind: &'static str| self.records.iter().filter(move |r| r.kind == kind);
        let degree = self.max_degree.max(1);
        let mut checks = vec![
            ("cost_touch", of("cost").all(|r| r.touched == 1)),
            (
                "path_len",
                self.records
                    .iter()
                    .filter(|r| r.kind == "insert" || r.kind == "delete")
                    .all(|r| r.path_len <= self.height),
            ),
            (
                "solution_touch",
                of("solution").all(|r| r.touched <= self.height * degree * r.solution_size.max(1)),
            ),
        ];
        if let Some(b) = self.search_bound() {
            checks.push(("search_bound", of("insert").all(|r| r.search_visits <= b)));
        }
        checks
    }

    pub fn passed(&self) -> bool {
        self.checks().iter().all(|(_, ok)| *ok)
    }

    pub fn summary_lines(&self) -> Vec<String> {
        let mut out = vec![
            format!("bench events {}", self.records.len()),
            format!(
                "tree height {} pairs {} max_degree {}",
                self.height, self.pairs, self.max_degree
            ),
        ];
        for kind in ["insert", "delete", "cost", "solution"] {
            let recs: Vec<&EventRecord> = self.records.iter().filter(|r| r.kind == kind).collect();
            let n = recs.len();
            let mean = |f: fn(&EventRecord) -> usize| {
                if n == 0 {
                    0.0
                } else {
                    recs.iter().map(|r| f(r) as f64).sum::<f64>() / n as f64
                }
            };
            let max = |f: fn(&EventRecord) -> usize| recs.iter().map(|r| f(r)).max().unwrap_or(0);
            let mut nanos: Vec<u128> = recs.iter().map(|r| r.nanos).collect();
            nanos.sort_unstable();
            out.push(format!(
                "op {kind} count {n} search_mean {:.3} search_max {} path_mean {:.3} path_max {} \
                 touched_max {} p50_ns {} p90_ns {} p99_ns {}",
                mean(|r| r.search_visits),
                max(|r| r.search_visits),
                mean(|r| r.path_len),
                max(|r| r.path_len),
                max(|r| r.touched),
                percentile(&nanos, 0.5),
                percentile(&nanos, 0.9),
                percentile(&nanos, 0.99),
            ));
        }
        for (name, ok) in self.checks() {
            out.push(format!("check {name} {}", if ok { "ok" } else { "fail" }));
        }
        out
    }

    pub fn record_lines(&self) -> String {
        let mut s = String::new();
        for (i, r) in self.records.iter().enumerate() {
            let _ = writeln!(
                s,
                "event {i} kind {} search {} path {} touched {} solution_size {} nanos {}",
                r.kind, r.search_visits, r.path_len, r.touched, r.solution_size, r.nanos
            );
        }
        s
    }
}

/// Timed replay recording node-touch counts per event.
pub fn bench_events(
    instance: &Instance,
    tree: &PairTree,
    events: &[Event],
) -> std::result::Result<BenchReport, EventError> {
    let mut dc = DynamicClustering::new(tree, instance);
    let mut records = Vec::with_capacity(events.len());
    for (index, ev) in events.iter().enumerate() {
        let start = Instant::now();
        let (stats, touched, solution_size) = match ev {
            Event::CostQuery => {
                let (_, t) = dc.cost_traced();
                (UpdateStats::default(), t, 0)
            }
            Event::SolutionQuery => {
                let (sol, t) = dc.solution_traced();
                (UpdateStats::default(), t, sol.pairs.len())
            }
            _ => {
                let s = apply(&mut dc, ev)
                    .map_err(|error| EventError { index, error })?
                    .expect("updates yield stats");
                (s, s.touched(), 0)
            }
        };
        let nanos = start.elapsed().as_nanos();
        records.push(EventRecord {
            kind: ev.kind(),
            search_visits: stats.search_visits,
            path_len: stats.path_len,
            touched,
            nanos,
            solution_size,
        });
    }
    Ok(BenchReport {
        height: tree.height(),
        max_degree: tree.max_degree(),
        pairs: tree.len(),
        kappa: instance.kappa_hint(),
        records,
    })
}

/// Parses `point <id> <coords...>` lines.
pub fn parse_universe(text: &str, instance: &Instance) -> Result<Vec<(String, Point)>> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let toks: Vec<&str> = raw
            .split('#')
            .next()
            .unwrap_or("")
            .split_whitespace()
            .collect();
        match toks.as_slice() {
            [] => {}
            ["point", id, coords @ ..] if !coords.is_empty() => {
                let p = instance
                    .metric()
                    .parse_point(coords)
                    .map_err(|e| Error::parse(i + 1, e.to_string()))?;
                out.push((id.to_string(), p));
            }
            _ => return Err(Error::parse(i + 1, "expected `point <id> <coords...>`")),
        }
    }
    Ok(out)
}

/// `area <facility> <logradius>: <point ids...>` per pair, in dump order.
pub fn areas_report(
    instance: &Instance,
    tree: &PairTree,
    universe: &[(String, Point)],
) -> Result<String> {
    let points: Vec<Point> = universe.iter().map(|(_, p)| p.clone()).collect();
    let areas = enumerate_areas(&points, tree, instance)?;
    let mut out = String::new();
    for r in tree.range().levels().rev() {
        for v in tree.level(r) {
            let pair = tree.pair(instance, v);
            let _ = write!(out, "area {} {}:", pair.facility, pair.logradius);
            for &m in &areas[v.0].members {
                let _ = write!(out, " {}", universe[m].0);
            }
            out.push('\n');
        }
    }
    Ok(out)
}

fn load(path: &Path, err: &mut dyn Write) -> Result<Instance> {
    let inst = load_instance(&read(path)?)?;
    for id in inst.unusable_facilities() {
        let _ = writeln!(
            err,
            "warning: facility {id} costs more than 5^rho_max and is never used"
        );
    }
    Ok(inst)
}

enum Failure {
    Input(String),
    Check(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Input(e.to_string())
    }
}

impl From<EventError> for Failure {
    fn from(e: EventError) -> Self {
        Failure::Input(e.to_string())
    }
}

fn execute(
    cmd: Command,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> std::result::Result<(), Failure> {
    let emit = |out: &mut dyn Write, s: &str| {
        out.write_all(s.as_bytes())
            .map_err(|e| Failure::Input(e.to_string()))
    };
    match cmd {
        Command::Build {
            instance,
            out: dump,
        } => {
            let inst = load(&instance, err)?;
            let report = build_report(&inst)?;
            if let Some(path) = dump {
                write(&path, &report)?;
            }
            emit(out, &report)
        }
        Command::Run {
            instance,
            events,
            trace,
        } => {
            let inst = load(&instance, err)?;
            let (_, tree) = build(&inst)?;
            let evs = parse_events(&read(&events)?, inst.metric())?;
            emit(out, &run_events(&inst, &tree, &evs, trace)?)
        }
        Command::Verify {
            instance,
            events,
            inject_fault,
        } => {
            let inst = load(&instance, err)?;
            let (_, tree) = build(&inst)?;
            let evs = parse_events(&read(&events)?, inst.metric())?;
            let opts = VerifyOptions {
                fault_at: inject_fault,
            };
            let outcome = verify_events(&inst, &tree, &evs, &opts)?;
            let mut text = outcome.lines.join("\n");
            if !text.is_empty() {
                text.push('\n');
            }
            emit(out, &text)?;
            match outcome.divergence {
                None => Ok(()),
                Some(d) => {
                    let line = format!(
                        "diverge event {} {} expected {} got {}\n",
                        d.index, d.what, d.expected, d.got
                    );
                    emit(out, &line)?;
                    Err(Failure::Check(format!("divergence at event {}", d.index)))
                }
            }
        }
        Command::Bench {
            instance,
            events,
            out: records,
        } => {
            let inst = load(&instance, err)?;
            let (_, tree) = build(&inst)?;
            let evs = parse_events(&read(&events)?, inst.metric())?;
            let report = bench_events(&inst, &tree, &evs)?;
            if let Some(path) = records {
                write(&path, &report.record_lines())?;
            }
            emit(out, &(report.summary_lines().join("\n") + "\n"))?;
            if report.passed() {
                Ok(())
            } else {
                Err(Failure::Check("bench checks failed".into()))
            }
        }
        Command::Gen {
            spec,
            out_instance,
            out_events,
        } => {
            let mut ws = WorkloadSpec::parse(&read(&spec)?)?;
            if let Ok(seed) = std::env::var("RADII_SEED") {
                ws.seed = seed
                    .trim()
                    .parse()
                    .map_err(|_| Failure::Input(format!("RADII_SEED={seed:?} is not a u64")))?;
            }
            let inst = gen_instance(&ws)?;
            let evs = gen_events(&ws, &inst)?;
            write(&out_instance, &instance_file(&ws, &inst))?;
            write(&out_events, &events_file(&ws, &inst, &evs))?;
            emit(
                out,
                &format!(
                    "gen seed {} facilities {} events {}\n",
                    ws.seed,
                    inst.facilities().len(),
                    evs.len()
                ),
            )
        }
        Command::Areas { instance, universe } => {
            let inst = load(&instance, err)?;
            let (_, tree) = build(&inst)?;
            let points = match universe {
                Some(path) => parse_universe(&read(&path)?, &inst)?,
                None => inst
                    .metric()
                    .universe()
                    .ok_or_else(|| Failure::Input("euclidean instances need --universe".into()))?
                    .into_iter()
                    .map(|p| (inst.metric().format_point(&p), p))
                    .collect(),
            };
            emit(out, &areas_report(&inst, &tree, &points)?)
        }
    }
}

/// Parses arguments and runs a command, returning the process exit code.
pub fn main_with<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            let _ = write!(err, "{e}");
            return code;
        }
    };
    match execute(cli.command, out, err) {
        Ok(()) => EXIT_OK,
        Err(Failure::Input(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            EXIT_INPUT
        }
        Err(Failure::Check(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            EXIT_DIVERGENCE
        }
    }
}
