//! Command-line front end. Run settings resolve as: explicit flag, then the
//! optional TOML config file, then built-in defaults.

use std::ffi::OsString;
use std::fs::File;
use std::io::BufWriter;
use std::path::{Path, PathBuf};

use clap::parser::ValueSource;
use clap::{ArgMatches, Args, CommandFactory, FromArgMatches, Parser, Subcommand, ValueEnum};
use log::info;

use crate::bench::{er_runner, run_bench};
use crate::embed::NodeEmbeddings;
use crate::error::{Error, Result};
use crate::eval::{
    across_network_eval, structural_hole_eval, within_network_sweep, AcrossParams, LogRegParams,
    WithinParams,
};
use crate::graph::generate::{erdos_renyi, planted_roles};
use crate::graph::{load_edge_list, load_labels, write_edge_list, write_labels, Graph, GraphLabels};
use crate::pipeline::{embed_graph, RunConfig};
use crate::role::Variant;

#[derive(Debug, Parser)]
#[command(name = "rolewalk", version, about = "Structural node embeddings and role classification")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Embed the nodes of an edge-list graph and write word2vec text.
    Embed(EmbedArgs),
    /// Role classification with random train/test splits of one graph.
    EvalWithin(EvalWithinArgs),
    /// Train on one graph's labels, test on another's.
    EvalAcross(EvalAcrossArgs),
    /// Rank nodes by similarity to the lowest-constraint node.
    EvalSh(EvalShArgs),
    /// Write a synthetic graph (and labels, where it has them).
    Gen(GenArgs),
    /// Time the pipeline on random graphs of growing size.
    Bench(BenchArgs),
}

/// Embedding settings shared by every subcommand that trains.
#[derive(Clone, Debug, Args)]
pub struct RunArgs {
    /// TOML file with any of the settings below; explicit flags win over it
    #[arg(long, value_name = "FILE")]
    pub config: Option<PathBuf>,
    /// Token scheme for context nodes
    #[arg(long, value_enum, default_value_t = RunConfig::default().variant)]
    pub variant: Variant,
    /// Neighbourhood radius
    #[arg(long, default_value_t = RunConfig::default().k)]
    pub k: u32,
    /// Embedding dimension
    #[arg(long, default_value_t = RunConfig::default().dim)]
    pub dim: usize,
    /// Walks per node
    #[arg(long, default_value_t = RunConfig::default().gamma)]
    pub gamma: usize,
    /// Walk length
    #[arg(long, default_value_t = RunConfig::default().lambda)]
    pub lambda: usize,
    /// Skip-gram window
    #[arg(long, default_value_t = RunConfig::default().window)]
    pub window: usize,
    /// Negative samples per pair
    #[arg(long, default_value_t = RunConfig::default().negatives)]
    pub negatives: usize,
    #[arg(long, default_value_t = RunConfig::default().epochs)]
    pub epochs: usize,
    /// Initial learning rate
    #[arg(long, default_value_t = RunConfig::default().lr)]
    pub lr: f32,
    /// Power applied to token counts in the noise distribution
    #[arg(long, default_value_t = RunConfig::default().noise_exponent)]
    pub noise_exponent: f64,
    /// Worker threads for sampling and training
    #[arg(long, default_value_t = RunConfig::default().threads)]
    pub threads: usize,
    #[arg(long, default_value_t = RunConfig::default().seed)]
    pub seed: u64,
}

impl RunArgs {
    /// Merge flags given on the command line over the config file (if any)
    /// over defaults.
    pub fn resolve(&self, m: &ArgMatches) -> Result<RunConfig> {
        let mut cfg = match &self.config {
            Some(p) => load_config(p)?,
            None => RunConfig::default(),
        };
        let given = |id: &str| m.value_source(id) == Some(ValueSource::CommandLine);
        macro_rules! take {
            ($($f:ident),*) => {$(
                if given(stringify!($f)) {
                    cfg.$f = self.$f.clone();
                }
            )*};
        }
        take!(variant, k, dim, gamma, lambda, window, negatives, epochs, lr, noise_exponent, threads, seed);
        cfg.validate()?;
        Ok(cfg)
    }
}

pub fn load_config(path: &Path) -> Result<RunConfig> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    toml::from_str(&text).map_err(|e| Error::Config(format!("{}: {e}", path.display())))
}

/// Classifier settings shared by the classification subcommands.
#[derive(Clone, Debug, Args)]
pub struct ClassifierArgs {
    /// L2 penalty of the one-vs-rest logistic regression
    #[arg(long, default_value_t = LogRegParams::default().l2)]
    pub l2: f64,
    /// Gradient-norm stopping tolerance
    #[arg(long, default_value_t = LogRegParams::default().tol)]
    pub tol: f64,
    #[arg(long, default_value_t = LogRegParams::default().max_iter)]
    pub max_iter: usize,
    /// Scale every embedding to unit length before classifying
    #[arg(long)]
    pub normalize: bool,
}

impl ClassifierArgs {
    fn params(&self) -> LogRegParams {
        LogRegParams {
            l2: self.l2,
            tol: self.tol,
            max_iter: self.max_iter,
            normalize: self.normalize,
        }
    }
}

#[derive(Debug, Args)]
pub struct EmbedArgs {
    /// Edge list, one `u v` pair per line
    pub graph: PathBuf,
    /// Output embeddings
    #[arg(long, short, default_value = "embeddings.txt")]
    pub out: PathBuf,
    /// Also write the walk corpus here, one walk per line
    #[arg(long, value_name = "FILE")]
    pub corpus_out: Option<PathBuf>,
    #[command(flatten)]
    pub run: RunArgs,
}

#[derive(Debug, Args)]
pub struct EvalWithinArgs {
    pub graph: PathBuf,
    /// Two-column `node label` file
    pub labels: PathBuf,
    /// Use these embeddings instead of training new ones
    #[arg(long, value_name = "FILE")]
    pub embeddings: Option<PathBuf>,
    /// Comma-separated training ratios
    #[arg(long, value_delimiter = ',', default_value = "0.8")]
    pub train_ratios: Vec<f64>,
    /// Random splits per ratio
    #[arg(long, default_value_t = WithinParams::default().repeats)]
    pub repeats: usize,
    /// Seed for the splits
    #[arg(long, default_value_t = WithinParams::default().seed)]
    pub split_seed: u64,
    /// Per-split report
    #[arg(long, default_value = "within.csv")]
    pub csv: PathBuf,
    /// Summary report
    #[arg(long, default_value = "within.json")]
    pub json: PathBuf,
    #[command(flatten)]
    pub classifier: ClassifierArgs,
    #[command(flatten)]
    pub run: RunArgs,
}

#[derive(Debug, Args)]
pub struct EvalAcrossArgs {
    /// Training graph
    pub graph_a: PathBuf,
    pub labels_a: PathBuf,
    /// Test graph
    pub graph_b: PathBuf,
    pub labels_b: PathBuf,
    /// Embeddings of the union, each repeat reseeded from `--seed`
    #[arg(long, default_value_t = AcrossParams::default().repeats)]
    pub repeats: usize,
    #[arg(long, default_value = "across.csv")]
    pub csv: PathBuf,
    #[arg(long, default_value = "across.json")]
    pub json: PathBuf,
    #[command(flatten)]
    pub classifier: ClassifierArgs,
    #[command(flatten)]
    pub run: RunArgs,
}

#[derive(Debug, Args)]
pub struct EvalShArgs {
    pub graph: PathBuf,
    /// Use these embeddings instead of training new ones
    #[arg(long, value_name = "FILE")]
    pub embeddings: Option<PathBuf>,
    /// Length of both rankings
    #[arg(long, default_value_t = 300)]
    pub top_n: usize,
    #[arg(long, default_value = "holes.json")]
    pub json: PathBuf,
    #[command(flatten)]
    pub run: RunArgs,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum GenKind {
    /// Erdős–Rényi with a given mean degree
    Er,
    /// Ring of hub-and-spoke motifs with role labels
    Planted,
}

#[derive(Debug, Args)]
pub struct GenArgs {
    #[arg(long, value_enum, default_value_t = GenKind::Planted)]
    pub kind: GenKind,
    /// Nodes (er)
    #[arg(long, default_value_t = 1000)]
    pub nodes: usize,
    /// Mean degree (er)
    #[arg(long, default_value_t = 10.0)]
    pub avg_degree: f64,
    /// Hub plus spokes per motif (planted)
    #[arg(long, default_value_t = 7)]
    pub motif_size: usize,
    /// Motif copies (planted)
    #[arg(long, default_value_t = 4)]
    pub copies: usize,
    /// Path nodes between consecutive hubs (planted)
    #[arg(long, default_value_t = 3)]
    pub path_len: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, short, default_value = "graph.txt")]
    pub out: PathBuf,
    /// Label file (planted)
    #[arg(long, default_value = "labels.txt")]
    pub labels_out: PathBuf,
}

#[derive(Debug, Args)]
pub struct BenchArgs {
    /// Comma-separated node counts
    #[arg(long, value_delimiter = ',', default_value = "1000,10000,100000")]
    pub sizes: Vec<usize>,
    #[arg(long, default_value_t = 10.0)]
    pub avg_degree: f64,
    /// Seed for the random graphs
    #[arg(long, default_value_t = 0)]
    pub graph_seed: u64,
    #[arg(long, short, default_value = "bench.csv")]
    pub out: PathBuf,
    #[command(flatten)]
    pub run: RunArgs,
}

/// Parse `args` (program name first) and run the chosen subcommand.
pub fn run_from<I, T>(args: I) -> Result<()>
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let matches = Cli::command()
        .try_get_matches_from(args)
        .unwrap_or_else(|e| e.exit());
    let cli = Cli::from_arg_matches(&matches).unwrap_or_else(|e| e.exit());
    let sub = matches
        .subcommand()
        .map(|(_, m)| m)
        .expect("subcommand is required");
    run(cli.command, sub)
}

pub fn run(command: Command, m: &ArgMatches) -> Result<()> {
    match command {
        Command::Embed(a) => cmd_embed(&a, m),
        Command::EvalWithin(a) => cmd_eval_within(&a, m),
        Command::EvalAcross(a) => cmd_eval_across(&a, m),
        Command::EvalSh(a) => cmd_eval_sh(&a, m),
        Command::Gen(a) => cmd_gen(&a),
        Command::Bench(a) => cmd_bench(&a, m),
    }
}

fn create(path: &Path) -> Result<BufWriter<File>> {
    File::create(path)
        .map(BufWriter::new)
        .map_err(|e| Error::io(path, e))
}

fn embeddings_for(g: &Graph, given: Option<&Path>, run: &RunArgs, m: &ArgMatches) -> Result<NodeEmbeddings> {
    match given {
        Some(p) => NodeEmbeddings::load(p)?.aligned_to(g),
        None => Ok(embed_graph(g, &run.resolve(m)?)?.embeddings),
    }
}

pub fn cmd_embed(a: &EmbedArgs, m: &ArgMatches) -> Result<()> {
    let cfg = a.run.resolve(m)?;
    let g = load_edge_list(&a.graph)?;
    info!("{}: {} nodes, {} edges", a.graph.display(), g.node_count(), g.edge_count());
    if let Some(p) = &a.corpus_out {
        let corpus = crate::pipeline::sample(&g, &cfg)?;
        corpus.write_text(&g, create(p)?)?;
    }
    let run = embed_graph(&g, &cfg)?;
    run.embeddings.save(&a.out)?;
    info!("wrote {}", a.out.display());
    Ok(())
}

fn load_labeled(graph: &Path, labels: &Path) -> Result<(Graph, GraphLabels)> {
    let g = load_edge_list(graph)?;
    let l = load_labels(labels, &g)?;
    Ok((g, l))
}

pub fn cmd_eval_within(a: &EvalWithinArgs, m: &ArgMatches) -> Result<()> {
    let (g, labels) = load_labeled(&a.graph, &a.labels)?;
    let emb = embeddings_for(&g, a.embeddings.as_deref(), &a.run, m)?;
    let params = WithinParams {
        repeats: a.repeats,
        seed: a.split_seed,
        logreg: a.classifier.params(),
        ..WithinParams::default()
    };
    let report = within_network_sweep(&emb, &labels, &a.train_ratios, &params)?;
    for s in &report.summary {
        info!(
            "train ratio {:?}: micro-F1 {:.4}, macro-F1 {:.4} (majority {:.4} / {:.4})",
            s.train_ratio, s.micro_f1, s.macro_f1, s.majority_micro_f1, s.majority_macro_f1
        );
    }
    report.save_csv(&a.csv)?;
    report.save_json(&a.json)
}

pub fn cmd_eval_across(a: &EvalAcrossArgs, m: &ArgMatches) -> Result<()> {
    let cfg = a.run.resolve(m)?;
    let (ga, la) = load_labeled(&a.graph_a, &a.labels_a)?;
    let (gb, lb) = load_labeled(&a.graph_b, &a.labels_b)?;
    // Each file numbers its classes independently; align B to A by name.
    let lb = lb.remap_to(la.class_names())?;
    let params = AcrossParams {
        repeats: a.repeats,
        logreg: a.classifier.params(),
    };
    let report = across_network_eval(&ga, &la, &gb, &lb, &cfg, &params)?;
    info!(
        "macro-F1 {:.4} (majority {:.4}), micro-F1 {:.4}",
        report.macro_f1(),
        report.majority_macro_f1(),
        report.micro_f1()
    );
    report.save_csv(&a.csv)?;
    report.save_json(&a.json)
}

pub fn cmd_eval_sh(a: &EvalShArgs, m: &ArgMatches) -> Result<()> {
    let g = load_edge_list(&a.graph)?;
    let emb = embeddings_for(&g, a.embeddings.as_deref(), &a.run, m)?;
    let report = structural_hole_eval(&g, &emb, a.top_n)?;
    info!(
        "{} of {} hits (random baseline {:.1}), {} isolated nodes excluded",
        report.hits, report.top_n, report.random_baseline, report.excluded
    );
    serde_json::to_writer_pretty(create(&a.json)?, &report)?;
    Ok(())
}

pub fn cmd_gen(a: &GenArgs) -> Result<()> {
    match a.kind {
        GenKind::Er => {
            let g = erdos_renyi(a.nodes, a.avg_degree, a.seed)?;
            write_edge_list(&g, &a.out)?;
        }
        GenKind::Planted => {
            let (g, labels) = planted_roles(a.motif_size, a.copies, a.path_len, a.seed)?;
            write_edge_list(&g, &a.out)?;
            write_labels(&labels, &g, &a.labels_out)?;
            info!("wrote {}", a.labels_out.display());
        }
    }
    info!("wrote {}", a.out.display());
    Ok(())
}

pub fn cmd_bench(a: &BenchArgs, m: &ArgMatches) -> Result<()> {
    let cfg = a.run.resolve(m)?;
    let report = run_bench(&a.sizes, er_runner(a.avg_degree, cfg, a.graph_seed));
    report.write_csv(create(&a.out)?)?;
    let fmt = |s: Option<f64>| s.map_or("n/a".to_string(), |s| format!("{s:.3}"));
    println!("time slope {}", fmt(report.time_slope));
    println!("memory slope {}", fmt(report.memory_slope));
    if report.rows.iter().all(|r| !r.is_ok()) {
        return Err(Error::Empty("successful benchmark rows".into()));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn resolve(args: &[&str]) -> Result<RunConfig> {
        let mut full = vec!["rolewalk", "embed", "g.txt"];
        full.extend_from_slice(args);
        let m = Cli::command().try_get_matches_from(full).unwrap();
        let cli = Cli::from_arg_matches(&m).unwrap();
        let sub = m.subcommand().unwrap().1;
        match cli.command {
            Command::Embed(a) => a.run.resolve(sub),
            _ => unreachable!(),
        }
    }

    #[test]
    fn cli_definition_is_consistent() {
        Cli::command().debug_assert();
    }

    #[test]
    fn defaults_match_run_config() {
        assert_eq!(resolve(&[]).unwrap(), RunConfig::default());
    }

    #[test]
    fn flag_beats_config_beats_default() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("run.toml");
        std::fs::write(&p, "dim = 16\nk = 2\nvariant = \"wl\"\n").unwrap();
        let ps = p.to_str().unwrap();
        let cfg = resolve(&["--config", ps, "--dim", "8"]).unwrap();
        assert_eq!(cfg.dim, 8);
        assert_eq!(cfg.k, 2);
        assert_eq!(cfg.variant, Variant::Wl);
        assert_eq!(cfg.gamma, RunConfig::default().gamma);
        // An explicit flag equal to the default still wins.
        let cfg = resolve(&["--config", ps, "--k", "4"]).unwrap();
        assert_eq!(cfg.k, 4);
    }

    #[test]
    fn bad_config_is_an_error() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("run.toml");
        std::fs::write(&p, "dims = 16\n").unwrap();
        assert!(matches!(
            resolve(&["--config", p.to_str().unwrap()]),
            Err(Error::Config(_))
        ));
        assert!(resolve(&["--dim", "0"]).is_err());
    }

    #[test]
    fn help_lists_defaults() {
        let help = Cli::command()
            .find_subcommand_mut("embed")
            .unwrap()
            .render_long_help()
            .to_string();
        for d in ["[default: 80]", "[default: 10]", "[default: 128]", "[default: 0.025]", "[default: sp]"] {
            assert!(help.contains(d), "{d} missing from help");
        }
    }
}
