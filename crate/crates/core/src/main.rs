use std::collections::BTreeSet;
use std::fs::{self, File};
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use locpc::bench::{self, Algorithm, BenchConfig};
use locpc::ci::{AuditEntry, CiSource, Counted, DataKind, Dataset, FisherZ, GSquare, DEFAULT_ALPHA};
use locpc::datagen::{gen_instance, simulate, Coefficient, Setting, DEFAULT_MAX_DRAWS};
use locpc::graph::{parse_dag, write_dag, write_leg, NodeId};
use locpc::local::{build_true_leg, grow_noc_candidate, noc_satisfied};
use locpc::{loc_pc_cde, BackgroundKnowledge, CdeReport, StopReason};

#[derive(Parser)]
#[command(name = "locpc", version, about = "Local causal discovery around a target variable")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the local essential graph of a known DAG.
    OracleLeg {
        #[arg(long)]
        dag: PathBuf,
        /// Node index, or a `V<i>` name.
        #[arg(long)]
        target: String,
        #[arg(long)]
        hop: usize,
        /// Also print the grown candidate set and whether it satisfies the
        /// non-orientability criterion.
        #[arg(long)]
        check_noc: bool,
    },
    /// Decide identifiability of a controlled direct effect from data.
    Discover {
        #[arg(long)]
        data: PathBuf,
        #[arg(long)]
        target: String,
        #[arg(long)]
        treatment: String,
        #[arg(long, default_value_t = DEFAULT_ALPHA)]
        alpha: f64,
        #[arg(long, value_enum, default_value_t = DataKind::Continuous)]
        kind: DataKind,
        /// Background knowledge, one `nondesc <D> <B>` per line.
        #[arg(long)]
        bk: Option<PathBuf>,
        /// Write every distinct CI query to this file.
        #[arg(long)]
        audit: Option<PathBuf>,
    },
    /// Draw a random instance and simulate data from it.
    Generate(GenerateArgs),
    /// Run the simulation benchmark.
    Bench(BenchArgs),
    /// Aggregate benchmark records.
    Summarize {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        out: PathBuf,
        /// JSON copy of the summary; defaults to `out` with a `.json` extension.
        #[arg(long)]
        json: Option<PathBuf>,
    },
}

#[derive(Args)]
struct GenerateArgs {
    #[arg(long)]
    n_vars: usize,
    #[arg(long, value_enum, default_value_t = Setting::Linear)]
    setting: Setting,
    #[arg(long, conflicts_with = "non_identifiable")]
    identifiable: bool,
    #[arg(long)]
    non_identifiable: bool,
    #[arg(long, default_value_t = 5000)]
    samples: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = DEFAULT_MAX_DRAWS)]
    max_draws: usize,
    #[arg(long)]
    out_dag: PathBuf,
    #[arg(long)]
    out_data: PathBuf,
    #[arg(long)]
    out_meta: PathBuf,
}

#[derive(Args)]
struct BenchArgs {
    #[arg(long, value_enum, default_value_t = Setting::Linear)]
    setting: Setting,
    #[arg(long, conflicts_with = "non_identifiable")]
    identifiable: bool,
    #[arg(long)]
    non_identifiable: bool,
    #[arg(long, value_delimiter = ',', default_values_t = vec![10, 20, 50])]
    sizes: Vec<usize>,
    #[arg(long, default_value_t = 20)]
    reps: usize,
    #[arg(long, default_value_t = DEFAULT_ALPHA)]
    alpha: f64,
    #[arg(long, default_value_t = 5000)]
    samples: usize,
    #[arg(long, default_value_t = 42)]
    seed: u64,
    #[arg(long, value_enum, value_delimiter = ',', default_values_t = vec![Algorithm::LocpcCde, Algorithm::Pc])]
    algorithms: Vec<Algorithm>,
    /// Answer CI queries by d-separation in the true DAG.
    #[arg(long)]
    oracle: bool,
    /// Fill the wall_ms column. Output is then no longer reproducible.
    #[arg(long)]
    timing: bool,
    /// Sizes 10 to 200 with 100 replicates each; overrides --sizes and --reps.
    #[arg(long)]
    full: bool,
    #[arg(long)]
    out: PathBuf,
}

fn main() -> Result<()> {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    match Cli::parse().command {
        Command::OracleLeg { dag, target, hop, check_noc } => oracle_leg(&dag, &target, hop, check_noc),
        Command::Discover { data, target, treatment, alpha, kind, bk, audit } => {
            discover(&data, &target, &treatment, alpha, kind, bk.as_deref(), audit.as_deref())
        }
        Command::Generate(args) => generate(args),
        Command::Bench(args) => run_bench(args),
        Command::Summarize { input, out, json } => summarize(&input, &out, json),
    }
}

fn resolve_node(name: &str, n: usize) -> Result<NodeId> {
    let digits = name.strip_prefix('V').unwrap_or(name);
    let v: NodeId = digits.parse().with_context(|| format!("`{name}` is not a node index"))?;
    if v >= n {
        bail!("node {v} out of range for a graph with {n} nodes");
    }
    Ok(v)
}

fn oracle_leg(path: &Path, target: &str, hop: usize, check_noc: bool) -> Result<()> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let g = parse_dag(&text)?;
    let y = resolve_node(target, g.n())?;
    let leg = build_true_leg(&g, y, hop);
    let mut out = io::stdout().lock();
    write!(out, "{}", write_leg(&leg))?;
    if check_noc {
        let dset = grow_noc_candidate(&leg, &BTreeSet::from([y]));
        let members: Vec<String> = dset.iter().map(|v| v.to_string()).collect();
        writeln!(out, "candidate {}", members.join(" "))?;
        writeln!(out, "noc {}", hop > 0 && noc_satisfied(&leg, &dset))?;
    }
    Ok(())
}

#[derive(Serialize)]
struct ReportJson<'a> {
    identifiable: bool,
    adjustment_set: Option<Vec<&'a str>>,
    hops_used: usize,
    stop_reason: StopReason,
    ci_count: u64,
}

fn discover(
    data: &Path,
    target: &str,
    treatment: &str,
    alpha: f64,
    kind: DataKind,
    bk: Option<&Path>,
    audit: Option<&Path>,
) -> Result<()> {
    if !(alpha > 0.0 && alpha < 1.0) {
        bail!("alpha must lie in (0, 1)");
    }
    let ds = Dataset::from_csv_path(data, kind)?;
    let lookup = |s: &str| ds.index_of(s);
    let y = lookup(target).with_context(|| format!("unknown target `{target}`"))?;
    let x = lookup(treatment).with_context(|| format!("unknown treatment `{treatment}`"))?;
    let bk = match bk {
        Some(p) => Some(BackgroundKnowledge::parse(&fs::read_to_string(p)?, lookup)?),
        None => None,
    };
    let (report, log) = match kind {
        DataKind::Continuous => run_cde(FisherZ::new(&ds, alpha), x, y, bk.as_ref())?,
        DataKind::Binary => run_cde(GSquare::new(&ds, alpha), x, y, bk.as_ref())?,
    };
    if let Some(path) = audit {
        write_audit(path, &log, ds.names())?;
    }
    let names = ds.names();
    let json = ReportJson {
        identifiable: report.identifiable,
        adjustment_set: report.adjustment_set.as_ref().map(|s| s.iter().map(|&v| names[v].as_str()).collect()),
        hops_used: report.hops_used,
        stop_reason: report.stop_reason,
        ci_count: report.ci_count,
    };
    let mut out = io::stdout().lock();
    writeln!(out, "{}", serde_json::to_string_pretty(&json)?)?;
    write!(out, "{}", write_leg(&report.leg))?;
    Ok(())
}

fn run_cde<S: CiSource>(
    source: S,
    x: NodeId,
    y: NodeId,
    bk: Option<&BackgroundKnowledge>,
) -> Result<(CdeReport, Vec<AuditEntry>)> {
    let ci = Counted::new(source);
    let report = loc_pc_cde(&ci, x, y, bk)?;
    Ok((report, ci.audit_log()))
}

fn write_audit(path: &Path, log: &[AuditEntry], names: &[String]) -> Result<()> {
    let mut w = BufWriter::new(File::create(path)?);
    for e in log {
        let z: Vec<&str> = e.z.iter().map(|&v| names[v].as_str()).collect();
        let verdict = if e.verdict.independent { "independent" } else { "dependent" };
        let p = e.verdict.p_value.map(|p| p.to_string()).unwrap_or_default();
        writeln!(w, "{};{};{};{};{}", names[e.x], names[e.y], z.join(","), verdict, p)?;
    }
    w.flush()?;
    Ok(())
}

#[derive(Serialize)]
struct Meta<'a> {
    n_vars: usize,
    setting: Setting,
    seed: u64,
    treatment: NodeId,
    target: NodeId,
    identifiable: bool,
    coefficients: &'a [Coefficient],
    noise_variances: &'a [f64],
}

fn identifiability_flag(identifiable: bool, non_identifiable: bool) -> Result<bool> {
    match (identifiable, non_identifiable) {
        (true, false) => Ok(true),
        (false, true) => Ok(false),
        _ => bail!("pass exactly one of --identifiable and --non-identifiable"),
    }
}

fn generate(args: GenerateArgs) -> Result<()> {
    let want = identifiability_flag(args.identifiable, args.non_identifiable)?;
    let inst = gen_instance(args.n_vars, args.setting, want, args.seed, args.max_draws)?;
    let data = simulate(&inst.spec, args.samples);
    fs::write(&args.out_dag, write_dag(&inst.spec.dag))?;
    data.write_csv(BufWriter::new(File::create(&args.out_data)?))?;
    let meta = Meta {
        n_vars: args.n_vars,
        setting: args.setting,
        seed: args.seed,
        treatment: inst.treatment,
        target: inst.target,
        identifiable: inst.identifiable,
        coefficients: &inst.spec.coefficients,
        noise_variances: &inst.spec.noise_variances,
    };
    fs::write(&args.out_meta, serde_json::to_string_pretty(&meta)? + "\n")?;
    Ok(())
}

fn run_bench(args: BenchArgs) -> Result<()> {
    let mut cfg = BenchConfig {
        sizes: args.sizes,
        reps: args.reps,
        setting: args.setting,
        identifiable: identifiability_flag(args.identifiable, args.non_identifiable)?,
        alpha: args.alpha,
        n_samples: args.samples,
        algorithms: args.algorithms,
        seed: args.seed,
        oracle: args.oracle,
        timing: args.timing,
    };
    if args.full {
        cfg = cfg.full_scale();
    }
    let records = bench::run_benchmark(&cfg)?;
    bench::write_records(&records, BufWriter::new(File::create(&args.out)?))?;
    Ok(())
}

fn summarize(input: &Path, out: &Path, json: Option<PathBuf>) -> Result<()> {
    let records = bench::read_records(File::open(input)?)?;
    if records.is_empty() {
        bail!("{} holds no records", input.display());
    }
    let summary = bench::summarize(&records);
    bench::write_summary_csv(&summary, BufWriter::new(File::create(out)?))?;
    let json = json.unwrap_or_else(|| out.with_extension("json"));
    fs::write(json, serde_json::to_string_pretty(&summary)? + "\n")?;
    Ok(())
}
