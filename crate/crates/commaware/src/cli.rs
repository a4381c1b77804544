//! Command-line front end.
//!
//! Exit codes: 0 success, 1 usage error, 2 input or parse error, 3
//! infeasible generator parameters.

use std::ffi::OsString;
use std::fmt;
use std::path::{Path, PathBuf};

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

use commaware_core::classical::{Classical, ClassicalSpec};
use commaware_core::generator::{self, GenStats};
use commaware_core::quality::{generalized_modularity, regularized_modularity};
use commaware_core::{eval, DetectConfig, Error as CoreError, FeatureMatrix, GenSpec, Graph, Partition};

use crate::io::{self, FormatError};
use crate::manifest::{manifest_path, RunManifest};
use crate::parallel;

#[derive(Debug, Parser)]
#[command(name = "commaware", version, about = "Community detection and community-aware node features")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Generate a planted-partition benchmark graph with outliers.
    Generate(GenerateArgs),
    /// Detect communities by maximizing generalized modularity.
    Detect(DetectArgs),
    /// Compute node features into a CSV file.
    Features(FeaturesArgs),
    /// Evaluate a partition file.
    Modularity(ModularityArgs),
}

#[derive(Debug, Args)]
pub struct ThreadArgs {
    /// Worker threads; defaults to all cores.
    #[arg(long, env = "COMMAWARE_THREADS")]
    pub threads: Option<usize>,
}

#[derive(Debug, Args, Serialize)]
pub struct GenerateArgs {
    /// Total number of nodes, outliers included.
    #[arg(long, default_value_t = 10_000)]
    pub n: usize,
    /// Number of outliers.
    #[arg(long, default_value_t = 1_000)]
    pub s0: usize,
    /// Degree power-law exponent.
    #[arg(long, default_value_t = 2.5)]
    pub gamma: f64,
    #[arg(long, default_value_t = 5)]
    pub min_degree: usize,
    #[arg(long, default_value_t = 500)]
    pub max_degree: usize,
    /// Community-size power-law exponent.
    #[arg(long, default_value_t = 1.5)]
    pub beta_sizes: f64,
    #[arg(long, default_value_t = 50)]
    pub min_size: usize,
    #[arg(long, default_value_t = 2_000)]
    pub max_size: usize,
    /// Mixing parameter in [0, 1].
    #[arg(long)]
    pub xi: f64,
    #[arg(long)]
    pub seed: u64,
    /// Directory for graph.txt, planted.csv, labels.csv, generation.json.
    #[arg(long)]
    pub out_dir: PathBuf,
    #[arg(long)]
    pub json: bool,
}

#[derive(Debug, Args, Serialize)]
pub struct GraphArgs {
    /// Edge list file.
    #[arg(long)]
    pub graph: PathBuf,
    /// Keep only the largest connected component.
    #[arg(long)]
    pub giant_component: bool,
}

#[derive(Debug, Args, Serialize)]
pub struct DetectArgs {
    #[command(flatten)]
    pub input: GraphArgs,
    /// Resolution of the degree penalty.
    #[arg(long, default_value_t = 1.0)]
    pub lambda: f64,
    #[arg(long, default_value_t = 16)]
    pub restarts: usize,
    #[arg(long)]
    pub seed: u64,
    #[arg(long, default_value_t = 20)]
    pub max_levels: usize,
    /// Partition CSV to write.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Also write the `external_id,internal_id` mapping here.
    #[arg(long)]
    pub mapping: Option<PathBuf>,
    #[command(flatten)]
    #[serde(skip)]
    pub threads: ThreadArgs,
    #[arg(long)]
    pub json: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum FeatureSet {
    Community,
    Classical,
    All,
}

#[derive(Debug, Args, Serialize)]
pub struct FeaturesArgs {
    #[command(flatten)]
    pub input: GraphArgs,
    /// Partition CSV; communities are detected when absent.
    #[arg(long)]
    pub partition: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = FeatureSet::All)]
    pub set: FeatureSet,
    #[arg(long, default_value_t = 1.0)]
    pub lambda: f64,
    /// Seed for detection and for sampled betweenness.
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long, default_value_t = 16)]
    pub restarts: usize,
    /// Approximate betweenness from K sampled sources.
    #[arg(long, value_name = "K")]
    pub bc_sample: Option<usize>,
    /// Closeness and eccentricity within each connected component.
    #[arg(long)]
    pub per_component: bool,
    /// Labels CSV (`node,label`); prints the rank AUC of every column.
    #[arg(long)]
    pub labels: Option<PathBuf>,
    #[arg(long)]
    pub out: PathBuf,
    #[command(flatten)]
    #[serde(skip)]
    pub threads: ThreadArgs,
    #[arg(long)]
    pub json: bool,
}

#[derive(Debug, Args, Serialize)]
pub struct ModularityArgs {
    #[arg(long)]
    pub graph: PathBuf,
    #[arg(long)]
    pub partition: PathBuf,
    #[arg(long, default_value_t = 1.0)]
    pub lambda: f64,
    /// Evaluate the regularized objective with this outlier reward.
    #[arg(long)]
    pub beta: Option<f64>,
    #[arg(long)]
    pub json: bool,
}

/// A failed run, carrying its exit code.
#[derive(Debug)]
pub enum Failure {
    Usage(String),
    Input(String),
    Infeasible(String),
}

impl Failure {
    pub fn code(&self) -> i32 {
        match self {
            Failure::Usage(_) => 1,
            Failure::Input(_) => 2,
            Failure::Infeasible(_) => 3,
        }
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Failure::Usage(m) => write!(f, "usage error: {m}"),
            Failure::Input(m) => write!(f, "input error: {m}"),
            Failure::Infeasible(m) => write!(f, "infeasible parameters: {m}"),
        }
    }
}

impl From<FormatError> for Failure {
    fn from(e: FormatError) -> Self {
        Failure::Input(e.to_string())
    }
}

fn core_failure(e: CoreError) -> Failure {
    match e {
        CoreError::InvalidParameter { .. } => Failure::Usage(e.to_string()),
        CoreError::Infeasible(_) => Failure::Infeasible(e.to_string()),
        CoreError::Disconnected { .. } => {
            Failure::Input(format!("{e} (use --giant-component or --per-component)"))
        }
        _ => Failure::Input(e.to_string()),
    }
}

fn file_failure(path: &Path) -> impl FnOnce(std::io::Error) -> Failure + '_ {
    move |e| Failure::Input(format!("{}: {e}", path.display()))
}

type Outcome = Result<(), Failure>;

/// Parses `args` (program name first) and runs the subcommand.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
        }
    };
    let outcome = match &cli.command {
        Command::Generate(a) => generate(a),
        Command::Detect(a) => detect(a),
        Command::Features(a) => features(a),
        Command::Modularity(a) => modularity(a),
    };
    match outcome {
        Ok(()) => 0,
        Err(f) => {
            eprintln!("commaware: {f}");
            f.code()
        }
    }
}

fn with_threads<T: Send>(threads: &ThreadArgs, job: impl FnOnce() -> T + Send) -> Result<T, Failure> {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(k) = threads.threads {
        if k == 0 {
            return Err(Failure::Usage("--threads must be at least 1".into()));
        }
        builder = builder.num_threads(k);
    }
    let pool = builder.build().map_err(|e| Failure::Usage(e.to_string()))?;
    Ok(pool.install(job))
}

fn flags<T: Serialize>(args: &T) -> serde_json::Value {
    serde_json::to_value(args).expect("flag structs serialize")
}

fn stats_json(s: &GenStats) -> serde_json::Value {
    json!({
        "communities": s.community_sizes.len(),
        "community_sizes": s.community_sizes,
        "redistributed_nodes": s.redistributed_nodes,
        "degree_sum": s.degree_sum,
        "internal_stubs": s.internal_stubs,
        "external_stubs": s.external_stubs,
        "capped_stubs": s.capped_stubs,
        "parity_fixes": s.parity_fixes,
        "dropped_stubs": s.dropped_stubs,
        "rewired_edges": s.rewired_edges,
        "dropped_internal_edges": s.dropped_internal_edges,
        "dropped_external_edges": s.dropped_external_edges,
        "isolated_nodes": s.isolated_nodes,
        "isolated_outliers": s.isolated_outliers,
    })
}

fn generate(a: &GenerateArgs) -> Outcome {
    let spec = GenSpec {
        n: a.n,
        s0: a.s0,
        gamma: a.gamma,
        min_degree: a.min_degree,
        max_degree: a.max_degree,
        beta_sizes: a.beta_sizes,
        min_size: a.min_size,
        max_size: a.max_size,
        xi: a.xi,
        seed: a.seed,
    };
    let out = generator::generate(&spec).map_err(|e| Failure::Infeasible(e.to_string()))?;
    let dir = &a.out_dir;
    std::fs::create_dir_all(dir).map_err(file_failure(dir))?;
    let graph_path = dir.join("graph.txt");
    let file = std::fs::File::create(&graph_path).map_err(file_failure(&graph_path))?;
    io::write_edge_list(&out.graph, std::io::BufWriter::new(file)).map_err(file_failure(&graph_path))?;
    let planted_path = dir.join("planted.csv");
    io::write_planted(&planted_path, &out.planted)?;
    let labels_path = dir.join("labels.csv");
    io::write_labels(&labels_path, &out.graph, &out.labels)?;

    let g = &out.graph;
    let outliers = out.labels.iter().filter(|&&l| l == 1).count();
    let summary = json!({
        "nodes": g.num_nodes(),
        "edges": g.num_edges(),
        "outliers": outliers,
        "generation": stats_json(&out.stats),
    });
    let meta_path = dir.join("generation.json");
    let text = serde_json::to_string_pretty(&summary).expect("json") + "\n";
    std::fs::write(&meta_path, text).map_err(file_failure(&meta_path))?;

    let mut manifest = RunManifest::new("generate", flags(a));
    manifest.seeds.push(a.seed);
    for p in [&graph_path, &planted_path, &labels_path, &meta_path] {
        manifest.add_output(p);
    }
    let manifest_file = dir.join("manifest.json");
    manifest.write(&manifest_file).map_err(file_failure(&manifest_file))?;

    if a.json {
        println!("{summary}");
    } else {
        println!(
            "nodes={} edges={} outliers={} communities={} dropped_edges={}",
            g.num_nodes(),
            g.num_edges(),
            outliers,
            out.stats.community_sizes.len(),
            out.stats.dropped_internal_edges + out.stats.dropped_external_edges
        );
    }
    Ok(())
}

/// Loads the graph, optionally cut down to its giant component. The kept
/// node ids of the loaded graph are returned for restricting partitions.
fn load_graph(a: &GraphArgs) -> Result<(Graph, Option<Vec<u32>>), Failure> {
    let (g, _) = io::read_edge_list(&a.graph)?;
    if a.giant_component {
        let keep = g.giant_component_nodes();
        if keep.len() < g.num_nodes() {
            return Ok((g.induced_subgraph(&keep), Some(keep)));
        }
    }
    Ok((g, None))
}

fn detect_config(lambda: f64, restarts: usize, seed: u64, max_levels: usize) -> Result<DetectConfig, Failure> {
    let cfg = DetectConfig {
        lambda,
        restarts,
        seed,
        max_levels,
        ..DetectConfig::default()
    };
    cfg.validate().map_err(core_failure)?;
    Ok(cfg)
}

fn detect(a: &DetectArgs) -> Outcome {
    let (g, _) = load_graph(&a.input)?;
    let cfg = detect_config(a.lambda, a.restarts, a.seed, a.max_levels)?;
    let found = with_threads(&a.threads, || parallel::detect(&g, &cfg))?.map_err(core_failure)?;
    let p = &found.partition;
    let singletons = p.outliers().len();
    if let Some(out) = &a.out {
        io::write_partition(out, p, None)?;
        let mut manifest = RunManifest::new("detect", flags(a));
        manifest.seeds.push(a.seed);
        manifest.add_input(&a.input.graph).map_err(file_failure(&a.input.graph))?;
        manifest.add_output(out);
        if let Some(m) = &a.mapping {
            io::write_mapping(m, &g)?;
            manifest.add_output(m);
        }
        manifest.details = json!({ "quality": found.quality, "communities": p.num_communities() });
        let path = manifest_path(out);
        manifest.write(&path).map_err(file_failure(&path))?;
    } else if let Some(m) = &a.mapping {
        io::write_mapping(m, &g)?;
    }
    if a.json {
        println!(
            "{}",
            json!({
                "quality": found.quality,
                "lambda": a.lambda,
                "communities": p.num_communities(),
                "singletons": singletons,
                "best_restart": found.restart,
                "restart_qualities": found.restart_qualities,
                "nodes": g.num_nodes(),
                "edges": g.num_edges(),
            })
        );
    } else {
        println!(
            "q={} communities={} singletons={} restart={}",
            found.quality,
            p.num_communities(),
            singletons,
            found.restart
        );
    }
    Ok(())
}

fn features(a: &FeaturesArgs) -> Outcome {
    let (g, keep) = load_graph(&a.input)?;
    if a.bc_sample.is_some() && a.seed.is_none() && a.set != FeatureSet::Community {
        return Err(Failure::Usage("--bc-sample needs --seed".into()));
    }
    let want_community = a.set != FeatureSet::Classical;
    let want_classical = a.set != FeatureSet::Community;
    let mut manifest = RunManifest::new("features", flags(a));
    manifest.seeds.extend(a.seed);
    manifest.add_input(&a.input.graph).map_err(file_failure(&a.input.graph))?;

    let partition = if !want_community {
        None
    } else if let Some(path) = &a.partition {
        manifest.add_input(path).map_err(file_failure(path))?;
        match &keep {
            None => Some(io::read_partition(path, &g)?),
            Some(keep) => {
                let (full, _) = io::read_edge_list(&a.input.graph)?;
                let p = io::read_partition(path, &full)?;
                let labels: Vec<u32> = keep.iter().map(|&v| p.community_of(v)).collect();
                Some(Partition::from_assignment(&g, &labels).map_err(core_failure)?)
            }
        }
    } else {
        let seed = a
            .seed
            .ok_or_else(|| Failure::Usage("--seed is required when --partition is absent".into()))?;
        let cfg = detect_config(a.lambda, a.restarts, seed, DetectConfig::default().max_levels)?;
        let found = with_threads(&a.threads, || parallel::detect(&g, &cfg))?.map_err(core_failure)?;
        Some(found.partition)
    };

    let classical_spec = ClassicalSpec {
        enabled: Classical::ALL.to_vec(),
        per_component: a.per_component,
        bc_sample: a.bc_sample.map(|k| (k, a.seed.unwrap_or_default())),
        ..ClassicalSpec::default()
    };
    let matrix = with_threads(&a.threads, || -> Result<FeatureMatrix, CoreError> {
        let community = match &partition {
            Some(p) => Some(parallel::community_features(&g, p, a.lambda)?),
            None => None,
        };
        let classical = if want_classical {
            Some(parallel::classical_features(&g, &classical_spec)?)
        } else {
            None
        };
        match (community, classical) {
            (Some(c), Some(k)) => c.hstack(&k),
            (Some(c), None) => Ok(c),
            (None, Some(k)) => Ok(k),
            (None, None) => unreachable!("at least one feature set is selected"),
        }
    })?
    .map_err(core_failure)?;

    io::write_features(&a.out, &g, &matrix)?;
    manifest.add_output(&a.out);

    let aucs = match &a.labels {
        Some(path) => {
            manifest.add_input(path).map_err(file_failure(path))?;
            let labels = io::read_labels(path, &g)?;
            let mut out = Vec::new();
            for (j, name) in matrix.names().iter().enumerate() {
                let column: Vec<f64> = (0..matrix.num_rows()).map(|i| matrix.get(i, j)).collect();
                let auc = eval::rank_auc(&column, &labels).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
                out.push((name.clone(), auc));
            }
            Some(out)
        }
        None => None,
    };
    if let Some(aucs) = &aucs {
        manifest.details = json!({ "auc": aucs.iter().map(|(n, v)| json!({"feature": n, "auc": v})).collect::<Vec<_>>() });
    }
    let path = manifest_path(&a.out);
    manifest.write(&path).map_err(file_failure(&path))?;

    if a.json {
        let mut summary = json!({
            "nodes": g.num_nodes(),
            "edges": g.num_edges(),
            "columns": matrix.names(),
            "out": a.out.display().to_string(),
        });
        if let Some(p) = &partition {
            summary["communities"] = json!(p.num_communities());
        }
        if let Some(aucs) = &aucs {
            summary["auc"] = aucs.iter().map(|(n, v)| (n.clone(), json!(v))).collect::<serde_json::Map<_, _>>().into();
        }
        println!("{summary}");
    } else {
        println!("nodes={} columns={} out={}", g.num_nodes(), matrix.num_cols(), a.out.display());
        for (name, auc) in aucs.iter().flatten() {
            println!("auc {name}={auc}");
        }
    }
    Ok(())
}

fn modularity(a: &ModularityArgs) -> Outcome {
    let (g, _) = io::read_edge_list(&a.graph)?;
    let p = io::read_partition(&a.partition, &g)?;
    let q = match a.beta {
        Some(beta) => regularized_modularity(&g, &p, a.lambda, beta),
        None => generalized_modularity(&g, &p, a.lambda),
    }
    .map_err(core_failure)?;
    if a.json {
        println!(
            "{}",
            json!({ "q": q, "lambda": a.lambda, "beta": a.beta, "communities": p.num_communities() })
        );
    } else {
        println!("q={q}");
    }
    Ok(())
}
