use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, ensure, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use randflag::certify::{self, VanishingCertificate};
use randflag::complex::count_maximal_cliques;
use randflag::experiments::{
    self, critical_p, poisson_fit, poisson_mean, run_trials, EdgeProbability, ExperimentRecord,
    Grid, Statistic, TrialConfig,
};
use randflag::homology::{self, RankMethod};
use randflag::spectral;
use randflag::{Face, FlagSkeleton, Graph, Seed, SkeletonDump};
use serde::Serialize;
use serde_json::{json, Value};

/// Exit status when a certificate is not issued.
const NOT_CERTIFIED: u8 = 2;

#[derive(Parser)]
#[command(name = "randflag", version, about = "Random flag complexes X(n, p): sampling, homology, spectral certificates")]
struct Cli {
    /// Worker threads for trial loops (default: all cores).
    #[arg(long, global = true, env = "RANDFLAG_THREADS")]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Sample G(n, p) and write its edge list or flag complex.
    Gen(GenArgs),
    /// Face counts, Betti numbers, spectral gaps and maximal cliques of a graph.
    Analyze(AnalyzeArgs),
    /// Spectral certificate for vanishing of H^k.
    Certify(CertifyArgs),
    /// Run trials over a grid of p, c or eps values.
    Sweep(SweepArgs),
    /// Fit the maximal-clique count at the critical window against its Poisson limit.
    Poisson(PoissonArgs),
}

#[derive(Clone, Copy, Debug, Serialize, ValueEnum, PartialEq, Eq)]
#[serde(rename_all = "kebab-case")]
enum Format {
    Json,
    Csv,
    EdgeList,
}

#[derive(Args, Serialize, Clone, Debug)]
struct MethodArgs {
    /// Exact rational ranks instead of modular ranks.
    #[arg(long, conflicts_with = "primes")]
    exact: bool,
    /// Primes for modular ranks, comma separated.
    #[arg(long, value_delimiter = ',')]
    primes: Option<Vec<u64>>,
}

impl MethodArgs {
    fn method(&self) -> Result<RankMethod> {
        let m = if self.exact {
            RankMethod::Exact
        } else {
            match &self.primes {
                Some(p) => RankMethod::Modular(p.clone()),
                None => RankMethod::default(),
            }
        };
        m.validate()?;
        Ok(m)
    }
}

#[derive(Args, Serialize, Debug)]
#[command(group = clap::ArgGroup::new("prob").required(true).args(["p", "c"]))]
struct GenArgs {
    #[arg(long)]
    n: usize,
    #[arg(long)]
    p: Option<f64>,
    /// Critical-window offset; p = critical_p(n, k, c).
    #[arg(long, allow_negative_numbers = true)]
    c: Option<f64>,
    #[arg(long, default_value_t = 1)]
    k: usize,
    /// Skeleton dimension for JSON output.
    #[arg(long, default_value_t = 2)]
    cap: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 0)]
    stream: u64,
    #[arg(long, value_enum, default_value_t = Format::EdgeList)]
    format: Format,
    /// Write the output here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Serialize, Debug)]
struct AnalyzeArgs {
    /// Edge list, or a complex JSON written by `gen --format json`.
    input: PathBuf,
    /// Skeleton dimension (default: the whole flag complex).
    #[arg(long)]
    cap: Option<usize>,
    /// Rational Betti numbers of the skeleton.
    #[arg(long)]
    betti: bool,
    /// Count maximal cliques of this many vertices.
    #[arg(long)]
    maximal_cliques: Vec<usize>,
    /// Spectral gap of the graph.
    #[arg(long)]
    lambda2: bool,
    /// Spectral gap of the link of a face, given as comma separated vertices.
    #[arg(long)]
    link: Vec<String>,
    #[command(flatten)]
    method: MethodArgs,
    /// Write the report here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Serialize, Debug)]
struct CertifyArgs {
    input: PathBuf,
    #[arg(long, default_value_t = 1)]
    k: usize,
    /// Also check the Żuk criterion for property (T) (k = 1 only).
    #[arg(long)]
    property_t: bool,
    /// Compute beta_k alongside the certificate.
    #[arg(long)]
    audit: bool,
    #[command(flatten)]
    method: MethodArgs,
    /// Write the report here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, Serialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
enum StatisticArg {
    MaximalCliques,
    Betti,
    BettiProfile,
    Connected,
    Certified,
    PropertyT,
    CycleRank,
}

impl From<StatisticArg> for Statistic {
    fn from(s: StatisticArg) -> Statistic {
        match s {
            StatisticArg::MaximalCliques => Statistic::MaximalCliques,
            StatisticArg::Betti => Statistic::Betti,
            StatisticArg::BettiProfile => Statistic::BettiProfile,
            StatisticArg::Connected => Statistic::Connected,
            StatisticArg::Certified => Statistic::Certified,
            StatisticArg::PropertyT => Statistic::PropertyT,
            StatisticArg::CycleRank => Statistic::CycleRank,
        }
    }
}

#[derive(Args, Serialize, Debug)]
#[command(group = clap::ArgGroup::new("grid").required(true).args(["p", "c", "eps"]))]
struct SweepArgs {
    #[arg(long, value_enum)]
    statistic: StatisticArg,
    #[arg(long)]
    n: usize,
    #[arg(long, default_value_t = 1)]
    k: usize,
    /// Edge probabilities, comma separated.
    #[arg(long, value_delimiter = ',')]
    p: Option<Vec<f64>>,
    /// Critical-window offsets, comma separated.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    c: Option<Vec<f64>>,
    /// Offsets eps for upper_threshold(n, k, eps), comma separated.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    eps: Option<Vec<f64>>,
    #[arg(long, default_value_t = 300)]
    trials: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Exact beta_k audit of the certified statistic.
    #[arg(long)]
    audit: bool,
    #[command(flatten)]
    method: MethodArgs,
    /// Output prefix: writes PREFIX.trials.jsonl, PREFIX.summary.json and,
    /// with --format csv, PREFIX.csv.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
}

#[derive(Args, Serialize, Debug)]
struct PoissonArgs {
    #[arg(long)]
    n: usize,
    #[arg(long, default_value_t = 1)]
    k: usize,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    c: f64,
    #[arg(long, default_value_t = 3000)]
    trials: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Output prefix: writes PREFIX.trials.jsonl and PREFIX.summary.json.
    #[arg(long)]
    out: Option<PathBuf>,
}

fn config<T: Serialize>(command: &str, args: &T) -> Value {
    let mut v = serde_json::to_value(args).expect("arguments serialize");
    v["command"] = json!(command);
    v["version"] = json!(env!("CARGO_PKG_VERSION"));
    v
}

fn emit(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(path) => fs::write(path, text).with_context(|| format!("writing {}", path.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("json value serializes");
    s.push('\n');
    s
}

fn with_suffix(prefix: &Path, suffix: &str) -> PathBuf {
    let mut s = prefix.as_os_str().to_owned();
    s.push(suffix);
    PathBuf::from(s)
}

enum Input {
    Graph(Graph),
    Complex(SkeletonDump),
}

fn read_input(path: &Path) -> Result<Input> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    if text.trim_start().starts_with('{') {
        let v: Value = serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))?;
        let dump = v.get("complex").cloned().unwrap_or(v);
        let dump: SkeletonDump = serde_json::from_value(dump).context("not a complex JSON")?;
        return Ok(Input::Complex(dump));
    }
    let g = Graph::from_edge_list(&text).with_context(|| format!("parsing {}", path.display()))?;
    Ok(Input::Graph(g))
}

fn read_graph(path: &Path) -> Result<(Graph, Option<FlagSkeleton>)> {
    Ok(match read_input(path)? {
        Input::Graph(g) => (g, None),
        Input::Complex(dump) => {
            let sk = FlagSkeleton::from_dump(&dump)?;
            (sk.graph().clone(), Some(sk))
        }
    })
}

fn cmd_gen(args: &GenArgs) -> Result<u8> {
    let p = match (args.p, args.c) {
        (Some(p), _) => p,
        (None, Some(c)) => critical_p(args.n as f64, args.k, c)?,
        (None, None) => unreachable!("clap requires one of --p, --c"),
    };
    let g = Graph::sample_gnp(args.n, p, Seed::new(args.seed, args.stream))?;
    let cfg = config("gen", args);
    let text = match args.format {
        Format::EdgeList => {
            format!("# {}\n# p {p}\n{}", serde_json::to_string(&cfg)?, g.to_edge_list())
        }
        Format::Csv => {
            let mut s = String::from("u,v\n");
            for (u, v) in g.edges() {
                s.push_str(&format!("{u},{v}\n"));
            }
            s
        }
        Format::Json => pretty(&json!({
            "config": cfg,
            "p": p,
            "complex": FlagSkeleton::build(&g, args.cap).to_dump(),
        })),
    };
    emit(args.out.as_deref(), &text)?;
    if args.out.is_some() {
        eprintln!("seed {} stream {}: n={} m={} p={p}", args.seed, args.stream, g.n(), g.edge_count());
    }
    Ok(0)
}

fn parse_face(text: &str) -> Result<Face> {
    let vertices = text
        .split(',')
        .map(|s| s.trim().parse::<usize>().with_context(|| format!("bad vertex {s:?} in face {text:?}")))
        .collect::<Result<Vec<_>>>()?;
    Ok(Face::new(vertices)?)
}

fn cmd_analyze(args: &AnalyzeArgs) -> Result<u8> {
    let method = args.method.method()?;
    let (g, dumped) = read_graph(&args.input)?;
    let sk = match (args.cap, dumped) {
        (Some(cap), Some(sk)) if cap <= sk.cap() => sk.truncate(cap)?,
        (Some(cap), _) => FlagSkeleton::build(&g, cap),
        (None, _) => FlagSkeleton::full(&g),
    };
    let mut report = json!({
        "config": config("analyze", args),
        "n": g.n(),
        "edges": g.edge_count(),
        "f_vector": sk.f_vector(),
    });
    if args.betti {
        report["betti"] = serde_json::to_value(homology::betti(&sk, &method)?.report())?;
    }
    if !args.maximal_cliques.is_empty() {
        let mut counts = serde_json::Map::new();
        for &size in &args.maximal_cliques {
            counts.insert(size.to_string(), json!(count_maximal_cliques(&g, size)?));
        }
        report["maximal_cliques"] = Value::Object(counts);
    }
    if args.lambda2 {
        report["lambda2"] = json!(spectral::lambda2(&g)?);
    }
    if !args.link.is_empty() {
        let mut links = Vec::new();
        for text in &args.link {
            let face = parse_face(text)?;
            let (link, labels) = sk.link_graph(&face)?;
            let gap = spectral::lambda2(&link).map_err(|e| e.to_string());
            links.push(json!({
                "face": face.vertices(),
                "link_vertices": labels,
                "lambda2": gap.as_ref().ok(),
                "error": gap.err(),
            }));
        }
        report["links"] = Value::Array(links);
    }
    emit(args.out.as_deref(), &pretty(&report))?;
    Ok(0)
}

fn cmd_certify(args: &CertifyArgs) -> Result<u8> {
    ensure!(args.k >= 1, "--k must be at least 1");
    ensure!(!args.property_t || args.k == 1, "--property-t needs --k 1");
    let method = args.method.method()?;
    let (g, _) = read_graph(&args.input)?;
    let audit = args.audit.then_some(&method);
    let outcome = certify::vanishing_pipeline(&g, args.k, audit)?;
    let cert: &VanishingCertificate = &outcome.certificate;
    let mut ok = cert.is_certified();
    let mut report = json!({
        "config": config("certify", args),
        "certificate": cert,
    });
    if let Some(b) = outcome.betti_k {
        report["audit"] = json!({ "betti_k": b, "consistent": outcome.consistent() });
    }
    if args.property_t {
        let t = certify::zuk_certify(&FlagSkeleton::build(&g, 2))?;
        ok &= t.has_t();
        report["property_t"] = serde_json::to_value(&t)?;
    }
    emit(args.out.as_deref(), &pretty(&report))?;
    Ok(if ok { 0 } else { NOT_CERTIFIED })
}

fn trial_config(
    n: usize,
    k: usize,
    statistic: Statistic,
    trials: usize,
    seed: u64,
    method: RankMethod,
    audit: bool,
) -> TrialConfig {
    TrialConfig {
        trials,
        seed,
        method,
        audit,
        ..TrialConfig::new(n, k, EdgeProbability::P(0.0), statistic)
    }
}

fn trial_lines(cfg: &Value, records: &[(Option<f64>, &ExperimentRecord)]) -> Result<String> {
    let mut out = serde_json::to_string(&json!({ "config": cfg }))?;
    out.push('\n');
    for (x, r) in records {
        for t in &r.trials {
            let mut line = serde_json::to_value(t)?;
            if let Some(x) = x {
                line["grid_value"] = json!(x);
            }
            line["p"] = json!(r.p);
            out.push_str(&serde_json::to_string(&line)?);
            out.push('\n');
        }
    }
    Ok(out)
}

fn cmd_sweep(args: &SweepArgs) -> Result<u8> {
    let grid = match (&args.p, &args.c, &args.eps) {
        (Some(v), _, _) => Grid::P(v.clone()),
        (_, Some(v), _) => Grid::C(v.clone()),
        (_, _, Some(v)) => Grid::Eps(v.clone()),
        _ => bail!("one of --p, --c, --eps is required"),
    };
    ensure!(!grid.values().is_empty(), "the grid is empty");
    ensure!(
        matches!(args.format, Format::Json | Format::Csv),
        "sweep writes json or csv"
    );
    let template = trial_config(
        args.n,
        args.k,
        args.statistic.into(),
        args.trials,
        args.seed,
        args.method.method()?,
        args.audit,
    );
    let result = experiments::sweep(&grid, &template)?;
    let cfg = config("sweep", args);
    let points: Vec<Value> = grid
        .values()
        .iter()
        .zip(&result.records)
        .map(|(x, r)| json!({ "grid_value": x, "p": r.p, "summary": r.summary, "wall_time_ms": r.wall_time_ms }))
        .collect();
    let summary = json!({ "config": cfg, "points": points, "crossing": result.crossing });
    match &args.out {
        Some(prefix) => {
            let tagged: Vec<_> = grid.values().iter().copied().map(Some).zip(&result.records).collect();
            fs::write(with_suffix(prefix, ".trials.jsonl"), trial_lines(&cfg, &tagged)?)?;
            fs::write(with_suffix(prefix, ".summary.json"), pretty(&summary))?;
            if args.format == Format::Csv {
                fs::write(with_suffix(prefix, ".csv"), result.to_csv())?;
            }
        }
        None if args.format == Format::Csv => print!("{}", result.to_csv()),
        None => print!("{}", pretty(&summary)),
    }
    Ok(0)
}

fn cmd_poisson(args: &PoissonArgs) -> Result<u8> {
    let mut cfg = trial_config(
        args.n,
        args.k,
        Statistic::MaximalCliques,
        args.trials,
        args.seed,
        RankMethod::default(),
        false,
    );
    cfg.edge = EdgeProbability::C(args.c);
    let record = run_trials(&cfg)?;
    let mu = poisson_mean(args.k, args.c);
    let fit = poisson_fit(&record, mu);
    let expected = experiments::expected_maximal_cliques(args.n, args.k, record.p)?;
    let run_cfg = config("poisson", args);
    let summary = json!({
        "config": run_cfg,
        "p": record.p,
        "mu": mu,
        "expected_mean": expected,
        "summary": record.summary,
        "tv_distance": fit.tv_distance,
        "chi2": fit.chi2,
        "dof": fit.dof,
        "wall_time_ms": record.wall_time_ms,
    });
    match &args.out {
        Some(prefix) => {
            fs::write(with_suffix(prefix, ".trials.jsonl"), trial_lines(&run_cfg, &[(None, &record)])?)?;
            fs::write(with_suffix(prefix, ".summary.json"), pretty(&summary))?;
        }
        None => print!("{}", pretty(&summary)),
    }
    Ok(0)
}

fn run(cli: &Cli) -> Result<u8> {
    if let Some(threads) = cli.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global()
            .context("configuring the thread pool")?;
    }
    match &cli.command {
        Command::Gen(a) => cmd_gen(a),
        Command::Analyze(a) => cmd_analyze(a),
        Command::Certify(a) => cmd_certify(a),
        Command::Sweep(a) => cmd_sweep(a),
        Command::Poisson(a) => cmd_poisson(a),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
