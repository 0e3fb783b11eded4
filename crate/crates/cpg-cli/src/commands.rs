//! Subcommand definitions and dispatch.

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use cpg_core::airy::AiryEval;
use cpg_core::graph::decompose::{decompose, DecompositionTree};
use cpg_core::graph::multigraph::CubicGraph;
use cpg_core::graph::network::Network;
use cpg_core::harness::enumerate::enumerate_cubic_planar;
use cpg_core::harness::experiments::{
    core_sizes, run_census, run_core_experiment, run_fragments, run_second_largest,
    stream_rng,
};
use cpg_core::harness::report::{write_json, ConstantsSnapshot, Manifest};
use cpg_core::numeric::constants::singular_constants;
use cpg_core::sampler::blossom::sample_triangulation;
use cpg_core::sampler::boltzmann::{sample_boltzmann_network, sample_size_biased};
use cpg_core::sampler::connected::{sample_connected_cubic, sample_o_model};
use cpg_core::sampler::context::SamplerContext;
use cpg_core::series::coeff::Coeff;
use cpg_core::series::grammar::solve_grammar_newton;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Signed;
use serde_json::json;
use std::collections::HashMap;
use std::path::{Path, PathBuf};

/// Combinatorics and sampling toolkit for cubic planar graphs.
#[derive(Parser)]
#[command(name = "cpg", version, about)]
pub struct Cli {
    /// RNG master seed.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Worker thread count (0 = all cores).
    #[arg(long, global = true, default_value_t = 0)]
    pub threads: usize,
    /// Output directory for files (default: stdout only where possible).
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Output format for tables.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Subcommand)]
pub enum Command {
    /// Print exact series coefficients of one grammar class.
    Coeffs(CoeffsArgs),
    /// Print the singular constants.
    Constants(ConstantsArgs),
    /// Tabulate the map-Airy density.
    Airy(AiryArgs),
    /// Draw samples from one of the graph models.
    Sample(SampleArgs),
    /// Decompose a graph file into its derivation tree.
    Decompose(FileArgs),
    /// Print the 3-connected core sizes of a graph file.
    Core(FileArgs),
    /// Exhaustively enumerate labelled connected cubic planar graphs.
    Enumerate(EnumerateArgs),
    /// Run one of the named large-scale experiments.
    Experiment(ExperimentArgs),
}

#[derive(Args)]
pub struct CoeffsArgs {
    /// Truncation order (vertex variable).
    #[arg(long, default_value_t = 20)]
    pub n: usize,
    /// Class: q, u, d, l, i, s, p, h, ns, cdot.
    #[arg(long, default_value = "d")]
    pub class: String,
}

#[derive(Args)]
pub struct ConstantsArgs {
    /// Decimal digits to print for the exactly-known constants.
    #[arg(long, default_value_t = 17)]
    pub digits: usize,
}

#[derive(Args)]
pub struct AiryArgs {
    #[arg(long, default_value_t = -4.0, allow_hyphen_values = true)]
    pub min: f64,
    #[arg(long, default_value_t = 4.0)]
    pub max: f64,
    #[arg(long, default_value_t = 0.125)]
    pub step: f64,
}

#[derive(Clone, Copy, ValueEnum)]
pub enum Model {
    /// Boltzmann network (possibly empty).
    D,
    /// Size-biased network with a marked associated edge.
    Dhat,
    /// Connected cubic planar graph of conditioned size.
    C,
    /// Expected-degree variant around a resampled core.
    O,
    /// Uniform rooted simple triangulation.
    Tri,
    /// Uniform 3-connected cubic planar graph (triangulation dual).
    #[value(name = "3conn")]
    ThreeConn,
}

#[derive(Args)]
pub struct SampleArgs {
    #[arg(long, value_enum)]
    pub model: Model,
    /// Target size (vertices; triangulation size parameter for tri/3conn).
    #[arg(long, default_value_t = 100)]
    pub n: usize,
    /// Absolute size window for conditioned models (0 = exact size).
    #[arg(long, default_value_t = 0)]
    pub window: usize,
    #[arg(long, default_value_t = 1)]
    pub count: usize,
    /// Allow exact-size rejection beyond 500 vertices.
    #[arg(long, default_value_t = false)]
    pub force_exact: bool,
}

#[derive(Args)]
pub struct FileArgs {
    /// Graph JSON file (fields n, edges; optional root_edge, poles).
    #[arg(long)]
    pub input: PathBuf,
}

#[derive(Args)]
pub struct EnumerateArgs {
    #[arg(long)]
    pub n: usize,
    /// Also write every graph to the output directory.
    #[arg(long, default_value_t = false)]
    pub emit_graphs: bool,
}

#[derive(Args)]
pub struct ExperimentArgs {
    /// core, second, census, or fragments.
    #[arg(long)]
    pub name: String,
    /// Primary size (core, fragments) or largest grid size.
    #[arg(long, default_value_t = 1000)]
    pub n: usize,
    #[arg(long, default_value_t = 100)]
    pub samples: usize,
    /// Census radius.
    #[arg(long, default_value_t = 1)]
    pub k: usize,
}

/// Dispatches a parsed invocation.
pub fn run(cli: Cli) -> Result<()> {
    if cli.threads > 0 {
        rayon::ThreadPoolBuilder::new()
            .num_threads(cli.threads)
            .build_global()
            .context("thread pool setup")?;
    }
    match &cli.command {
        Command::Coeffs(args) => cmd_coeffs(&cli, args),
        Command::Constants(args) => cmd_constants(&cli, args),
        Command::Airy(args) => cmd_airy(&cli, args),
        Command::Sample(args) => cmd_sample(&cli, args),
        Command::Decompose(args) => cmd_decompose(&cli, args),
        Command::Core(args) => cmd_core(&cli, args),
        Command::Enumerate(args) => cmd_enumerate(&cli, args),
        Command::Experiment(args) => cmd_experiment(&cli, args),
    }
}

fn cmd_coeffs(cli: &Cli, args: &CoeffsArgs) -> Result<()> {
    let table = solve_grammar_newton::<BigRational>(args.n, <BigRational as Coeff>::one())?;
    let series = match args.class.as_str() {
        "q" => &table.q,
        "u" => &table.u,
        "d" => &table.d,
        "l" => &table.l,
        "i" => &table.i,
        "s" => &table.s,
        "p" => &table.p,
        "h" => &table.h,
        "ns" => &table.ns,
        "cdot" => &table.cdot,
        other => bail!("unknown class {other}"),
    };
    let coeffs: Vec<String> = series.coeffs().iter().map(|c| c.to_string()).collect();
    emit(cli, "coeffs", &json!({ "class": args.class, "order": args.n, "coeffs": coeffs }))
}

fn cmd_constants(cli: &Cli, args: &ConstantsArgs) -> Result<()> {
    let c = singular_constants().map_err(|e| anyhow!(e.to_string()))?;
    let value = json!({
        "rho": decimal(&c.rho_rational, args.digits),
        "d0": decimal(&c.d0_rational, args.digits),
        "d_prime": decimal(&c.d_prime_rational, args.digits),
        "d3": c.d3,
        "kappa": c.kappa,
        "mu": c.mu,
        "c_v": c.c_v,
        "c_d": c.c_d,
        "p_y0": c.p_y0,
        "mean_y": c.mean_y,
    });
    emit(cli, "constants", &value)
}

fn cmd_airy(cli: &Cli, args: &AiryArgs) -> Result<()> {
    if args.step <= 0.0 || args.max <= args.min {
        bail!("need step > 0 and max > min");
    }
    let airy = AiryEval::default();
    let mut rows = Vec::new();
    let mut t = args.min;
    while t <= args.max + 1e-12 {
        let d = airy.density(t).map_err(|e| anyhow!(e.to_string()))?;
        rows.push((t, d));
        t += args.step;
    }
    match cli.format {
        Format::Csv => {
            println!("t,density");
            for (t, d) in rows {
                println!("{t},{d}");
            }
            Ok(())
        }
        Format::Json => emit(cli, "airy", &json!({ "rows": rows })),
    }
}

fn cmd_sample(cli: &Cli, args: &SampleArgs) -> Result<()> {
    let conditioned = matches!(args.model, Model::C | Model::O);
    if conditioned && args.n > 500 && args.window < args.n / 100 && !args.force_exact {
        bail!(
            "size {} needs a window of at least {} (1%); pass --force-exact to override",
            args.n,
            args.n / 100
        );
    }
    let ctx = SamplerContext::new().map_err(|e| anyhow!(e.to_string()))?;
    let out = cli.out.clone().unwrap_or_else(|| PathBuf::from("."));
    std::fs::create_dir_all(&out)?;
    let mut sizes = Vec::new();
    for i in 0..args.count {
        let mut rng = stream_rng(cli.seed, i as u64);
        let path = out.join(format!("sample_{i:05}.json"));
        let size = match args.model {
            Model::D => {
                let net = sample_boltzmann_network(&ctx, &mut rng)
                    .map_err(|e| anyhow!(e.to_string()))?;
                let size = net.as_ref().map_or(0, Network::n);
                write_json(&path, &net).map_err(|e| anyhow!(e.to_string()))?;
                size
            }
            Model::Dhat => {
                let m = sample_size_biased(&ctx, &mut rng, 1 << 40)
                    .map_err(|e| anyhow!(e.to_string()))?;
                let size = m.network.as_ref().map_or(0, Network::n);
                write_json(
                    &path,
                    &json!({ "w": m.w, "marked_edge": m.marked_edge, "network": m.network }),
                )
                .map_err(|e| anyhow!(e.to_string()))?;
                size
            }
            Model::C | Model::O => {
                let s = if matches!(args.model, Model::C) {
                    sample_connected_cubic(&ctx, args.n, args.window, &mut rng, 1 << 40)
                } else {
                    sample_o_model(&ctx, args.n, args.window, &mut rng, 1 << 40)
                }
                .map_err(|e| anyhow!(e.to_string()))?;
                let size = s.graph.n();
                write_json(&path, &s.graph).map_err(|e| anyhow!(e.to_string()))?;
                size
            }
            Model::Tri | Model::ThreeConn => {
                let map = sample_triangulation(args.n, &mut rng)
                    .map_err(|e| anyhow!(e.to_string()))?;
                if matches!(args.model, Model::Tri) {
                    let darts: Vec<(usize, usize)> =
                        (0..map.n_darts()).map(|d| (map.alpha(d), map.sigma(d))).collect();
                    write_json(&path, &json!({ "root": map.root(), "darts": darts }))
                        .map_err(|e| anyhow!(e.to_string()))?;
                    args.n + 2
                } else {
                    let g = map.dual().to_graph();
                    let size = g.n();
                    write_json(&path, &g).map_err(|e| anyhow!(e.to_string()))?;
                    size
                }
            }
        };
        sizes.push(size);
    }
    write_manifest(cli, &out, "sample", &[
        ("model", format!("{}", args.count)),
        ("n", args.n.to_string()),
        ("window", args.window.to_string()),
        ("count", args.count.to_string()),
        ("sizes", format!("{sizes:?}")),
    ])
}

fn load_graph(path: &Path) -> Result<CubicGraph> {
    let data = std::fs::read_to_string(path)
        .with_context(|| format!("reading {}", path.display()))?;
    let g: CubicGraph = serde_json::from_str(&data).context("parsing graph JSON")?;
    Ok(g)
}

fn cmd_decompose(cli: &Cli, args: &FileArgs) -> Result<()> {
    let g = load_graph(&args.input)?;
    let (u, v) = g.edge(0);
    let net = Network::new(g, 0, (u, v)).map_err(|e| anyhow!(e.to_string()))?;
    let tree: DecompositionTree = decompose(&net).map_err(|e| anyhow!(e.to_string()))?;
    emit(cli, "decompose", &tree)
}

fn cmd_core(cli: &Cli, args: &FileArgs) -> Result<()> {
    let g = load_graph(&args.input)?;
    let mut sizes = core_sizes(&g).map_err(|e| anyhow!(e.to_string()))?;
    sizes.sort_unstable_by(|a, b| b.cmp(a));
    emit(cli, "core", &json!({ "core_sizes": sizes }))
}

fn cmd_enumerate(cli: &Cli, args: &EnumerateArgs) -> Result<()> {
    let graphs = enumerate_cubic_planar(args.n).map_err(|e| anyhow!(e.to_string()))?;
    if args.emit_graphs {
        let out = cli
            .out
            .clone()
            .ok_or_else(|| anyhow!("--emit-graphs needs --out"))?;
        std::fs::create_dir_all(&out)?;
        for (i, g) in graphs.iter().enumerate() {
            write_json(&out.join(format!("graph_{i:06}.json")), g)
                .map_err(|e| anyhow!(e.to_string()))?;
        }
    }
    emit(cli, "enumerate", &json!({ "n": args.n, "count": graphs.len() }))
}

fn cmd_experiment(cli: &Cli, args: &ExperimentArgs) -> Result<()> {
    let ctx = SamplerContext::new().map_err(|e| anyhow!(e.to_string()))?;
    let window = (args.n / 100).max(1);
    let value = match args.name.as_str() {
        "core" => serde_json::to_value(
            run_core_experiment(&ctx, args.n, window, args.samples, cli.seed)
                .map_err(|e| anyhow!(e.to_string()))?,
        )?,
        "second" => {
            let grid = [args.n / 10, 3 * args.n / 10, args.n];
            serde_json::to_value(
                run_second_largest(&ctx, &grid, args.samples, cli.seed)
                    .map_err(|e| anyhow!(e.to_string()))?,
            )?
        }
        "census" => {
            let grid = [args.n / 4, args.n / 2, args.n];
            serde_json::to_value(
                run_census(&ctx, &grid, args.k, args.samples, cli.seed)
                    .map_err(|e| anyhow!(e.to_string()))?,
            )?
        }
        "fragments" => serde_json::to_value(
            run_fragments(&ctx, args.n, args.samples, cli.seed)
                .map_err(|e| anyhow!(e.to_string()))?,
        )?,
        other => bail!("unknown experiment {other} (core, second, census, fragments)"),
    };
    emit(cli, &format!("experiment_{}", args.name), &value)
}

/// Prints a JSON value, or writes it under --out with a manifest.
fn emit<T: serde::Serialize>(cli: &Cli, name: &str, value: &T) -> Result<()> {
    match &cli.out {
        None => {
            println!("{}", serde_json::to_string_pretty(value)?);
            Ok(())
        }
        Some(dir) => {
            std::fs::create_dir_all(dir)?;
            write_json(&dir.join(format!("{name}.json")), value)
                .map_err(|e| anyhow!(e.to_string()))?;
            write_manifest(cli, dir, name, &[])
        }
    }
}

fn write_manifest(cli: &Cli, dir: &Path, experiment: &str, params: &[(&str, String)]) -> Result<()> {
    let constants = singular_constants().map_err(|e| anyhow!(e.to_string()))?;
    let manifest = Manifest {
        experiment: experiment.to_string(),
        seed: cli.seed,
        threads: cli.threads,
        parameters: params
            .iter()
            .map(|(k, v)| (k.to_string(), v.clone()))
            .collect::<HashMap<_, _>>(),
        constants: ConstantsSnapshot::from_constants(&constants),
    };
    write_json(&dir.join("manifest.json"), &manifest).map_err(|e| anyhow!(e.to_string()))
}

/// Decimal expansion of a rational to `digits` fractional digits.
fn decimal(r: &BigRational, digits: usize) -> String {
    let sign = if r.is_negative() { "-" } else { "" };
    let abs = r.abs();
    let scale = BigInt::from(10u32).pow(digits as u32);
    let scaled = (abs.numer() * &scale) / abs.denom();
    let int_part = &scaled / &scale;
    let frac_part = &scaled % &scale;
    format!("{sign}{int_part}.{frac_part:0>width$}", width = digits)
}
