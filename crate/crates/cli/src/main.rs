//! `setvi`: order relations, minimality, variational inequalities and the
//! theorem chain for set-valued problem documents.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use setvi_core::analysis::{diewert_witness, CConvexityReport, DiewertWitness, Side};
use setvi_core::order::{
    classify_weak_min, probe_points, relation_ll, relation_lt, scalar_strict_separation, vector_weak_efficient_over,
    MinimalityVerdict, SeparationReport, VectorEfficiency,
};
use setvi_core::problem::InstanceSummary;
use setvi_core::report::{ser_f64, ser_vec, to_json};
use setvi_core::scalarize::scalar_path;
use setvi_core::suite::{run_suite, with_workers, SuiteReport};
use setvi_core::vi::{chain_problem, radial_c_convexity, radial_classification, vi_check, RadialClassification};
use setvi_core::{ChainDocument, ChainReport, Error, ExtReal, Problem, Settings, VIKind, VIVerdict, Verdict};

#[derive(Parser)]
#[command(name = "setvi", version, about = "Checks weak minimality and scalarized variational inequalities of set-valued maps")]
struct Cli {
    /// Report format on standard output.
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    format: Format,
    /// Override the strictness tolerance of the problem settings.
    #[arg(long, global = true)]
    tau: Option<f64>,
    /// Override the W* sample density of the problem settings.
    #[arg(long, global = true)]
    wstar_density: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
enum Format {
    Text,
    Json,
    Both,
}

#[derive(Subcommand)]
enum Command {
    /// Order relations between the values at two domain samples.
    Relations {
        file: PathBuf,
        #[arg(long)]
        a: usize,
        #[arg(long)]
        b: usize,
    },
    /// Classify every base point as a weak minimizer.
    Minimality { file: PathBuf },
    /// Check one variational inequality at every base point.
    Vi {
        file: PathBuf,
        #[arg(long, value_parser = parse_kind)]
        kind: VIKind,
    },
    /// Hypotheses, verdicts and implication statuses at every base point.
    Chain { file: PathBuf },
    /// Radial path classification and C-convexity at every base point.
    Convexity { file: PathBuf },
    /// Mean-value witnesses along the ray between two domain samples.
    Mvt {
        file: PathBuf,
        /// Domain indices `i,j` of the ray start and end.
        #[arg(long, value_parser = parse_ray)]
        ray: (usize, usize),
        /// Restrict to one W* index.
        #[arg(long)]
        w: Option<usize>,
    },
    /// Randomized theorem-chain suite.
    Suite {
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        instances: u64,
        /// Worker count; defaults to SETVI_THREADS, then all cores.
        #[arg(long)]
        threads: Option<usize>,
    },
}

fn parse_kind(s: &str) -> std::result::Result<VIKind, String> {
    VIKind::parse(s).ok_or_else(|| format!("expected one of mvi, svi, mvi2, svi2, got `{s}`"))
}

fn parse_ray(s: &str) -> std::result::Result<(usize, usize), String> {
    let (i, j) = s.split_once(',').ok_or("expected `i,j`")?;
    let idx = |t: &str| t.trim().parse::<usize>().map_err(|e| format!("bad index `{t}`: {e}"));
    Ok((idx(i)?, idx(j)?))
}

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
enum Status {
    Ok,
    Undetermined,
    Failed,
}

impl Status {
    fn of(v: Verdict) -> Status {
        match v {
            Verdict::Holds => Status::Ok,
            Verdict::Undetermined => Status::Undetermined,
            Verdict::Fails => Status::Failed,
        }
    }

    fn code(self) -> u8 {
        match self {
            Status::Ok => 0,
            Status::Failed => 1,
            Status::Undetermined => 3,
        }
    }
}

struct Output {
    status: Status,
    text: String,
    json: String,
}

#[derive(Serialize)]
struct RunSettings<'a> {
    #[serde(flatten)]
    settings: &'a Settings,
    output: Format,
}

fn env_threads() -> Result<Option<usize>> {
    match std::env::var("SETVI_THREADS") {
        Ok(v) => Ok(Some(v.trim().parse().with_context(|| format!("SETVI_THREADS=`{v}` is not an integer"))?)),
        Err(_) => Ok(None),
    }
}

fn load(path: &Path, cli: &Cli) -> Result<Problem> {
    let mut p = Problem::from_file(path)
        .with_context(|| format!("cannot read {}", path.display()))?
        .with_context(|| format!("invalid problem {}", path.display()))?;
    if let Some(t) = cli.tau {
        p.settings.tau_strict = t;
    }
    if let Some(d) = cli.wstar_density {
        p.settings.wstar_density = d;
    }
    p.settings.validate().context("invalid settings")?;
    Ok(p)
}

fn num(x: f64) -> String {
    ExtReal::Finite(x).to_string()
}

fn pt(x: &[f64]) -> String {
    let parts: Vec<String> = x.iter().map(|&v| num(v)).collect();
    format!("({})", parts.join(", "))
}

fn sample(p: &Problem, i: usize) -> Result<&[f64]> {
    match p.map.domain().get(i) {
        Some(x) => Ok(x),
        None => bail!("domain index {i} out of range (domain has {} samples)", p.map.domain().len()),
    }
}

#[derive(Serialize)]
struct RelationsReport<'a> {
    run: RunSettings<'a>,
    instance: InstanceSummary,
    a: usize,
    b: usize,
    lt: bool,
    ll: bool,
    #[serde(serialize_with = "ser_f64")]
    ll_margin: f64,
    separation: SeparationReport,
}

fn relations(cli: &Cli, file: &Path, a: usize, b: usize) -> Result<Output> {
    let p = load(file, cli)?;
    sample(&p, a)?;
    sample(&p, b)?;
    let tau = p.settings.tau_strict;
    let (va, vb) = (p.map.value_at(a), p.map.value_at(b));
    let lt = relation_lt(&va, &vb, &p.cone, tau)?;
    let (ll, margin) = relation_ll(&va, &vb, &p.cone, tau)?;
    let wstar = p.cone.dual_base(p.settings.wstar_density);
    let separation = scalar_strict_separation(&va, &vb, &wstar, tau)?;
    let mut text = String::new();
    writeln!(text, "A = F{}, B = F{}", pt(sample(&p, a)?), pt(sample(&p, b)?))?;
    writeln!(text, "A < B: {lt}")?;
    writeln!(text, "A << B: {ll} (margin {})", num(margin))?;
    writeln!(text, "scalar strict separation: {}", separation.verdict)?;
    let status = if lt && ll { Status::Ok } else { Status::Failed };
    let json = to_json(&RelationsReport {
        run: RunSettings { settings: &p.settings, output: cli.format },
        instance: p.instance(),
        a,
        b,
        lt,
        ll,
        ll_margin: margin,
        separation,
    });
    Ok(Output { status, text, json })
}

#[derive(Serialize)]
struct MinimalityEntry {
    #[serde(serialize_with = "ser_vec")]
    x0: Vec<f64>,
    minimality: MinimalityVerdict,
    vector: Option<VectorEfficiency>,
}

#[derive(Serialize)]
struct MinimalityReport<'a> {
    run: RunSettings<'a>,
    instance: InstanceSummary,
    base_points: Vec<MinimalityEntry>,
}

fn minimality(cli: &Cli, file: &Path) -> Result<Output> {
    let p = load(file, cli)?;
    let wstar = p.cone.dual_base(p.settings.wstar_density);
    let tau = p.settings.tau_strict;
    let mut text = String::new();
    let mut status = Status::Ok;
    let mut entries = Vec::new();
    for x0 in &p.base_points {
        let probes = probe_points(&p.map, x0, p.settings.ray_steps);
        let m = classify_weak_min(&p.map, x0, &p.cone, &wstar, &probes, tau)?;
        let singletons = probes
            .iter()
            .map(|x| p.map.evaluate(x).map(|v| v.singleton_point().is_some()))
            .collect::<setvi_core::Result<Vec<_>>>()?;
        let vector = if singletons.iter().all(|&s| s) {
            Some(vector_weak_efficient_over(&p.map, x0, &p.cone, &probes, tau)?)
        } else {
            None
        };
        status = status.max(Status::of(m.w_min));
        write!(text, "x0 = {}: w-l-Min {}, w-sc-Min {}, w-Min {}", pt(x0), m.w_l_min, m.w_sc_min, m.w_min)?;
        if let Some(w) = m.worst.as_ref().filter(|w| w.margin > 0.0) {
            write!(text, " (largest dominance margin {} at {})", num(w.margin), pt(&w.x))?;
        }
        if let Some(v) = &vector {
            write!(text, "; weakly efficient: {}", v.efficient)?;
        }
        writeln!(text)?;
        entries.push(MinimalityEntry { x0: x0.clone(), minimality: m, vector });
    }
    let json = to_json(&MinimalityReport {
        run: RunSettings { settings: &p.settings, output: cli.format },
        instance: p.instance(),
        base_points: entries,
    });
    Ok(Output { status, text, json })
}

#[derive(Serialize)]
struct VIReport<'a> {
    run: RunSettings<'a>,
    instance: InstanceSummary,
    kind: VIKind,
    verdicts: Vec<VIVerdict>,
}

/// Failing points listed in text reports.
const LISTED: usize = 8;

fn vi(cli: &Cli, file: &Path, kind: VIKind) -> Result<Output> {
    let p = load(file, cli)?;
    let wstar = p.cone.dual_base(p.settings.wstar_density);
    let mut text = String::new();
    let mut status = Status::Ok;
    let mut verdicts = Vec::new();
    for x0 in &p.base_points {
        let probes = probe_points(&p.map, x0, p.settings.ray_steps);
        let v = vi_check(kind, &p.map, x0, &wstar, &probes, &p.settings)?;
        status = status.max(Status::of(v.verdict));
        write!(text, "({kind}) at x0 = {}: {}", pt(x0), v.verdict)?;
        if v.whole_space {
            write!(text, " (F(x0) + C is the whole space)")?;
        }
        writeln!(text, " over {} points, {} weights", v.per_x.len(), wstar.len())?;
        let open: Vec<_> = v.per_x.iter().filter(|e| e.status != Verdict::Holds).collect();
        for e in open.iter().take(LISTED) {
            writeln!(text, "  x = {}: {} (closest derivative {})", pt(&e.x), e.status, e.value)?;
        }
        if open.len() > LISTED {
            writeln!(text, "  ... and {} more", open.len() - LISTED)?;
        }
        verdicts.push(v);
    }
    let json = to_json(&VIReport {
        run: RunSettings { settings: &p.settings, output: cli.format },
        instance: p.instance(),
        kind,
        verdicts,
    });
    Ok(Output { status, text, json })
}

fn chain_text(r: &ChainReport) -> Result<String> {
    let mut t = String::new();
    let h = &r.hypotheses;
    writeln!(t, "x0 = {} ({} probe points)", pt(&r.x0), r.probes)?;
    let names = [
        "compactness",
        "c_convexity",
        "radial_hausdorff",
        "properness",
        "star_shaped",
        "ray_resolution",
        "radial_ssqc",
        "radial_pseudoconvex",
        "radial_pseudoconcave",
    ];
    let hyps: Vec<String> = names.iter().map(|n| format!("{n} {}", h.get(n))).collect();
    writeln!(t, "  hypotheses: {}", hyps.join(", "))?;
    let v = &r.verdicts;
    write!(
        t,
        "  verdicts: svi {}, mvi {}, svi2 {}, mvi2 {}, w-l-Min {}, w-sc-Min {}, w-Min {}",
        v.svi.verdict, v.mvi.verdict, v.svi2.verdict, v.mvi2.verdict, v.minimality.w_l_min, v.minimality.w_sc_min, v.minimality.w_min
    )?;
    if let Some(e) = &v.vector {
        write!(t, ", weakly efficient {}", e.efficient)?;
    }
    writeln!(t)?;
    for i in &r.implications {
        let status = serde_json::to_string(&i.status)?;
        write!(t, "  {} => {}: {}", i.antecedent, i.consequent, status.trim_matches('"'))?;
        if let Some(route) = i.route {
            write!(t, " [{route}]")?;
        }
        if !i.missing.is_empty() {
            write!(t, " missing {}", i.missing.join(", "))?;
        }
        writeln!(t)?;
    }
    Ok(t)
}

fn chain(cli: &Cli, file: &Path) -> Result<Output> {
    let p = load(file, cli)?;
    let (reports, wstar) = with_workers(env_threads()?, || chain_problem(&p))??;
    let mut text = String::new();
    for r in &reports {
        text.push_str(&chain_text(r)?);
    }
    let status = if reports.iter().any(|r| r.worst_status() == Some(setvi_core::ImplicationStatus::Violated)) {
        Status::Failed
    } else if reports.iter().any(|r| r.worst_status().is_some()) {
        Status::Undetermined
    } else {
        Status::Ok
    };
    let json = to_json(&ChainDocument::new(p.instance(), &p.settings, &wstar, &reports));
    Ok(Output { status, text, json })
}

#[derive(Serialize)]
struct ConvexityEntry {
    #[serde(serialize_with = "ser_vec")]
    x0: Vec<f64>,
    c_convexity: CConvexityReport,
    radial: RadialClassification,
}

#[derive(Serialize)]
struct ConvexityReportDoc<'a> {
    run: RunSettings<'a>,
    instance: InstanceSummary,
    base_points: Vec<ConvexityEntry>,
}

fn convexity(cli: &Cli, file: &Path) -> Result<Output> {
    let p = load(file, cli)?;
    let wstar = p.cone.dual_base(p.settings.wstar_density);
    let mut text = String::new();
    let mut status = Status::Ok;
    let mut entries = Vec::new();
    for x0 in &p.base_points {
        let c = radial_c_convexity(&p.map, x0, &p.cone, &wstar, &p.settings)?;
        let r = radial_classification(&p.map, x0, &wstar, &p.settings)?;
        for v in [c.verdict, r.semistrictly_quasiconvex, r.pseudoconvex, r.pseudoconcave] {
            status = status.max(Status::of(v));
        }
        writeln!(
            text,
            "x0 = {}: C-convexity {} ({} combinations); over {} ray paths: semistrictly quasiconvex {}, pseudoconvex {}, pseudoconcave {}",
            pt(x0),
            c.verdict,
            c.combinations,
            r.paths,
            r.semistrictly_quasiconvex,
            r.pseudoconvex,
            r.pseudoconcave
        )?;
        if let Some(w) = &c.witness {
            writeln!(text, "  C-convexity fails for x1 = {}, x2 = {}, t = {} (margin {})", pt(&w.x1), pt(&w.x2), num(w.t), num(w.margin))?;
        }
        entries.push(ConvexityEntry { x0: x0.clone(), c_convexity: c, radial: r });
    }
    let json = to_json(&ConvexityReportDoc {
        run: RunSettings { settings: &p.settings, output: cli.format },
        instance: p.instance(),
        base_points: entries,
    });
    Ok(Output { status, text, json })
}

#[derive(Serialize)]
struct MvtEntry {
    w_index: usize,
    #[serde(serialize_with = "ser_vec")]
    w: Vec<f64>,
    forward: Option<DiewertWitness>,
    backward: Option<DiewertWitness>,
}

#[derive(Serialize)]
struct MvtReport<'a> {
    run: RunSettings<'a>,
    instance: InstanceSummary,
    #[serde(serialize_with = "ser_vec")]
    from: Vec<f64>,
    #[serde(serialize_with = "ser_vec")]
    to: Vec<f64>,
    grid_points: usize,
    witnesses: Vec<MvtEntry>,
}

fn mvt(cli: &Cli, file: &Path, (i, j): (usize, usize), w_index: Option<usize>) -> Result<Output> {
    let p = load(file, cli)?;
    let (x0, x) = (sample(&p, i)?.to_vec(), sample(&p, j)?.to_vec());
    let wstar = p.cone.dual_base(p.settings.wstar_density);
    let indices: Vec<usize> = match w_index {
        Some(k) if k < wstar.len() => vec![k],
        Some(k) => bail!("W* index {k} out of range ({} weights)", wstar.len()),
        None => (0..wstar.len()).collect(),
    };
    let grid = p.map.ray_grid(&x0, &x, p.settings.ray_steps);
    let mut text = String::new();
    let mut status = Status::Ok;
    let mut witnesses = Vec::new();
    for k in indices {
        let w = &wstar.weights[k];
        let path = scalar_path(&p.map, &x0, &x, w, &grid)?;
        let mut side = |s: Side| -> Result<Option<DiewertWitness>> {
            match diewert_witness(&path, s, &p.settings.dini, p.settings.tau_strict) {
                Ok(d) => Ok(Some(d)),
                Err(Error::NoWitnessFound) => {
                    status = Status::Failed;
                    Ok(None)
                }
                Err(e) => Err(e.into()),
            }
        };
        let forward = side(Side::Forward)?;
        let backward = side(Side::Backward)?;
        let show = |d: &Option<DiewertWitness>| match d {
            Some(d) => format!("t = {} (derivative {}, difference {})", num(d.t), d.derivative, d.difference),
            None => "no witness".to_owned(),
        };
        writeln!(text, "w = {}: forward {}; backward {}", pt(w), show(&forward), show(&backward))?;
        witnesses.push(MvtEntry { w_index: k, w: w.clone(), forward, backward });
    }
    let json = to_json(&MvtReport {
        run: RunSettings { settings: &p.settings, output: cli.format },
        instance: p.instance(),
        from: x0,
        to: x,
        grid_points: grid.len(),
        witnesses,
    });
    Ok(Output { status, text, json })
}

fn suite(seed: u64, instances: u64, threads: Option<usize>) -> Result<Output> {
    let threads = match threads {
        Some(t) => Some(t),
        None => env_threads()?,
    };
    let report: SuiteReport = run_suite(seed, instances, threads)?;
    let t = report.totals;
    let mut text = String::new();
    writeln!(
        text,
        "seed {seed}, {instances} instances: {} confirmed, {} not applicable, {} undetermined, {} violated",
        t.confirmed, t.not_applicable, t.undetermined, t.violated
    )?;
    writeln!(text, "{} witnesses replayed, {} mismatches", report.replay.checked, report.replay.mismatches)?;
    for r in &report.records {
        for v in &r.violations {
            writeln!(
                text,
                "VIOLATED: instance {} base point {}: {} => {}",
                r.index, v.base_point, v.antecedent, v.consequent
            )?;
        }
    }
    let status = if report.violated() || !report.replay_ok() {
        Status::Failed
    } else if t.undetermined > 0 {
        Status::Undetermined
    } else {
        Status::Ok
    };
    Ok(Output { status, text, json: to_json(&report) })
}

fn run(cli: &Cli) -> Result<Output> {
    match &cli.command {
        Command::Relations { file, a, b } => relations(cli, file, *a, *b),
        Command::Minimality { file } => minimality(cli, file),
        Command::Vi { file, kind } => vi(cli, file, *kind),
        Command::Chain { file } => chain(cli, file),
        Command::Convexity { file } => convexity(cli, file),
        Command::Mvt { file, ray, w } => mvt(cli, file, *ray, *w),
        Command::Suite { seed, instances, threads } => suite(*seed, *instances, *threads),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(out) => {
            match cli.format {
                Format::Text => print!("{}", out.text),
                Format::Json => print!("{}", out.json),
                Format::Both => print!("{}\n{}", out.text, out.json),
            }
            ExitCode::from(out.status.code())
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
