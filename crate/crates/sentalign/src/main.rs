use std::collections::BTreeSet;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand};
use log::{error, warn};
use sentalign::config::Config;
use sentalign::corpus_io::{load_corpus, LoadedCorpus};
use sentalign::ground_truth;
use sentalign::labels::{read_labels, write_tasks};
use sentalign::output::{read_results, VariantOutput};
use sentalign::pipeline::{self, Aligner, Providers, VariantRun};
use sentalign::report;
use sentalign_core::eval::classification_accuracy;
use sentalign_core::matching::MatchOptions;
use sentalign_core::stats::corpus_statistics;
use sentalign_core::text::RuleSplitter;
use sentalign_core::{Matcher, Measure, Variant};

#[derive(Parser)]
#[command(name = "sentalign", version, about = "Sentence alignment for simple/standard German article pairs")]
struct Cli {
    /// TOML configuration file.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Worker threads (overrides the config; 0 = all cores).
    #[arg(long, global = true)]
    jobs: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Extract and split raw HTML/text articles into the corpus layout.
    Ingest {
        #[arg(long)]
        input: PathBuf,
        /// Defaults to the configured corpus root.
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Corpus statistics per source and side.
    Stats(OutputArg),
    /// Align every pair with one variant.
    Align {
        #[arg(long)]
        measure: Measure,
        #[arg(long)]
        matcher: Matcher,
        #[command(flatten)]
        threshold: Threshold,
        #[arg(long)]
        results: Option<PathBuf>,
        #[command(flatten)]
        out: OutputArg,
    },
    /// Run all 32 variants.
    AlignAll {
        #[arg(long)]
        k: Option<f64>,
        #[arg(long)]
        results: Option<PathBuf>,
        #[command(flatten)]
        out: OutputArg,
    },
    /// Similarity histogram over random cross-article sentence pairs.
    Histogram {
        #[arg(long)]
        measure: Measure,
        #[arg(long)]
        samples: usize,
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        bins: Option<usize>,
        #[command(flatten)]
        out: OutputArg,
    },
    /// Precision, recall and F1 of every aligned variant against ground truth.
    Evaluate {
        /// A `.gt` file or a directory of them.
        #[arg(long)]
        ground_truth: PathBuf,
        #[arg(long)]
        results: Option<PathBuf>,
        #[command(flatten)]
        out: OutputArg,
    },
    /// Manual classification accuracy from a label file.
    Accuracy {
        #[arg(long)]
        labels: PathBuf,
        #[arg(long)]
        variant: Option<String>,
        #[command(flatten)]
        out: OutputArg,
    },
    /// Sample matches across all variants for blind classification.
    SampleLabels {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        results: Option<PathBuf>,
        /// Defaults to the configured service task file.
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Run the annotation service.
    Serve {
        #[arg(long)]
        addr: Option<String>,
    },
}

#[derive(Args)]
struct OutputArg {
    /// Write the CSV here instead of standard output.
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
#[group(multiple = false)]
struct Threshold {
    /// Threshold factor of `mean + k * stddev`.
    #[arg(long)]
    k: Option<f64>,
    /// Accept every match regardless of score.
    #[arg(long)]
    no_threshold: bool,
}

fn emit(out: &OutputArg, csv: &str) -> anyhow::Result<()> {
    match &out.output {
        Some(path) => fs::write(path, csv).with_context(|| format!("writing {}", path.display())),
        None => {
            print!("{csv}");
            Ok(())
        }
    }
}

fn load(config: &Config) -> anyhow::Result<LoadedCorpus> {
    if !config.corpus_root.is_dir() {
        bail!("corpus root {} is not a directory", config.corpus_root.display());
    }
    Ok(load_corpus(&config.corpus_root)?)
}

fn write_runs(corpus: &sentalign_core::model::Corpus, runs: &[VariantRun], results: &Path) -> anyhow::Result<()> {
    for run in runs {
        let dir = results.join(run.variant.name());
        if dir.exists() {
            fs::remove_dir_all(&dir).with_context(|| format!("clearing {}", dir.display()))?;
        }
        run.output(corpus)?.write(&dir)?;
    }
    Ok(())
}

/// Reports pair failures; true when they exceed the tolerance.
fn failed(runs: &[VariantRun], pairs: usize, tolerance: f64) -> bool {
    for run in runs {
        for f in &run.failures {
            error!("{}: {}: {}", run.variant, f.pair_id, f.message);
        }
    }
    !pipeline::over_tolerance(runs, pairs, tolerance).is_empty()
}

fn run(cli: Cli) -> anyhow::Result<ExitCode> {
    let mut config = match &cli.config {
        Some(path) => Config::load(path)?,
        None => Config::default(),
    };
    if let Some(jobs) = cli.jobs {
        config.jobs = jobs;
    }
    rayon::ThreadPoolBuilder::new().num_threads(config.jobs).build_global().context("starting worker pool")?;
    let options = MatchOptions { boundary_gaps: config.matching.boundary_gaps };

    match cli.command {
        Command::Ingest { input, output } => {
            let output = output.unwrap_or_else(|| config.corpus_root.clone());
            let splitter = RuleSplitter::new(config.splitter.abbreviations.iter().cloned());
            let report = sentalign::ingest::ingest(&input, &output, &splitter)?;
            eprintln!("{} articles written, {} discarded", report.written, report.discarded.len());
            for (file, reason) in &report.discarded {
                eprintln!("discarded {file}: {reason}");
            }
        }
        Command::Stats(out) => {
            let loaded = load(&config)?;
            emit(&out, &report::stats_csv(&corpus_statistics(&loaded.corpus.articles)))?;
        }
        Command::Align { measure, matcher, threshold, results, out } => {
            let k = if threshold.no_threshold { None } else { Some(threshold.k.unwrap_or(config.matching.k)) };
            let variant = Variant { measure, matcher, k };
            let loaded = load(&config)?;
            let providers = Providers::from_config(&config)?;
            let aligner = Aligner::new(&loaded.corpus, &providers, &config.profiles, options)?;
            let runs = vec![aligner.run_variant(variant)?];
            write_runs(&loaded.corpus, &runs, &results.unwrap_or_else(|| config.results_dir()))?;
            emit(&out, &report::variants_csv(&runs))?;
            if failed(&runs, loaded.corpus.pairs.len(), config.failure_tolerance) {
                return Ok(ExitCode::FAILURE);
            }
        }
        Command::AlignAll { k, results, out } => {
            let loaded = load(&config)?;
            let providers = Providers::from_config(&config)?;
            let aligner = Aligner::new(&loaded.corpus, &providers, &config.profiles, options)?;
            let runs = aligner.run_all(k.unwrap_or(config.matching.k))?;
            let results = results.unwrap_or_else(|| config.results_dir());
            write_runs(&loaded.corpus, &runs, &results)?;
            let summary = report::variants_csv(&runs);
            fs::write(results.join("summary.csv"), &summary)?;
            fs::write(results.join("table.csv"), report::variants_table_csv(&runs))?;
            emit(&out, &summary)?;
            if failed(&runs, loaded.corpus.pairs.len(), config.failure_tolerance) {
                return Ok(ExitCode::FAILURE);
            }
        }
        Command::Histogram { measure, samples, seed, bins, out } => {
            let loaded = load(&config)?;
            let providers = Providers::from_config(&config)?;
            let aligner = Aligner::new(&loaded.corpus, &providers, &config.profiles, options)?;
            let histogram = aligner.histogram(measure, samples, bins.unwrap_or(config.histogram_bins), seed)?;
            if histogram.with_replacement {
                warn!("fewer distinct sentence pairs than samples; sampled with replacement");
            }
            emit(&out, &report::histogram_csv(&histogram))?;
        }
        Command::Evaluate { ground_truth: gt, results, out } => {
            let truths = ground_truth::read(&gt)?;
            let outputs = read_results(&results.unwrap_or_else(|| config.results_dir()))?;
            if outputs.is_empty() {
                bail!("no alignment results found; run align or align-all first");
            }
            emit(&out, &report::evaluation_csv(&pipeline::evaluate(&outputs, &truths)?))?;
        }
        Command::Accuracy { labels, variant, out } => {
            let records = read_labels(&labels)?;
            let variants: Vec<String> = match variant {
                Some(v) => vec![v],
                None => records.iter().map(|r| r.variant.clone()).collect::<BTreeSet<_>>().into_iter().collect(),
            };
            let mut rows = Vec::new();
            for v in variants.iter().map(Some).chain(std::iter::once(None)) {
                let selected = records.iter().filter(|r| v.is_none_or(|v| &r.variant == v));
                let (n, positive) =
                    selected.fold((0, 0), |(n, p), r| (n + 1, p + usize::from(r.verdict.is_positive())));
                let accuracy = classification_accuracy(&records, v.map(String::as_str))
                    .with_context(|| format!("no labels for {}", v.map_or("any variant", |s| s.as_str())))?;
                rows.push((v.cloned().unwrap_or_else(|| pipeline::ALL_SOURCES.to_string()), n, positive, accuracy));
            }
            emit(&out, &report::accuracy_csv(&rows))?;
        }
        Command::SampleLabels { n, seed, results, output } => {
            let outputs: Vec<VariantOutput> = read_results(&results.unwrap_or_else(|| config.results_dir()))?;
            if outputs.is_empty() {
                bail!("no alignment results found; run align or align-all first");
            }
            let (tasks, sample) = pipeline::label_tasks(&outputs, n, seed);
            if sample.truncated {
                warn!("only {} matches available; all of them were sampled", sample.population);
            }
            let path = output.unwrap_or_else(|| config.service.tasks.clone());
            write_tasks(&path, &tasks)?;
            eprintln!("{} tasks written to {}", tasks.len(), path.display());
        }
        Command::Serve { addr } => {
            if let Some(addr) = addr {
                config.service.addr = addr;
            }
            let loaded = load(&config)?;
            let runtime = tokio::runtime::Runtime::new()?;
            runtime.block_on(sentalign::service::serve(config.service.clone(), loaded.corpus, async {
                let _ = tokio::signal::ctrl_c().await;
            }))?;
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
