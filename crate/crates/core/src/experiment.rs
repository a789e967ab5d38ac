//! Fitting, simulation and replicated model comparisons.

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::dpsbm::fit_per_layer;
use crate::error::{Error, Result};
use crate::hsbm::run_chain;
use crate::io::{self, NetworkManifest};
use crate::metrics::{nmi_report, summarize, NmiReport, NMI_VARIANT};
use crate::network::{LabelMatrix, MultiplexNetwork};
use crate::params::Hyperparameters;
use crate::rng::derive_seed;
use crate::synth::{build_scenario, ScenarioOverrides};
use crate::trace::{ChainTrace, SummaryReport};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Model {
    /// Hierarchical model fit jointly to all layers.
    Hsbm,
    /// Single-layer DP-SBM fit separately to every layer.
    Dpsbm,
}

impl Model {
    pub const ALL: [Model; 2] = [Model::Hsbm, Model::Dpsbm];
}

impl fmt::Display for Model {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.pad(match self {
            Model::Hsbm => "hsbm",
            Model::Dpsbm => "dpsbm",
        })
    }
}

impl FromStr for Model {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "hsbm" => Ok(Model::Hsbm),
            "dpsbm" => Ok(Model::Dpsbm),
            other => Err(Error::InvalidHyperparameter(format!(
                "unknown model `{other}` (expected `hsbm` or `dpsbm`)"
            ))),
        }
    }
}

/// Runs the chosen sampler; DP-SBM traces are stacked into one multi-layer
/// trace.
pub fn fit_model(model: Model, network: &MultiplexNetwork, hyper: &Hyperparameters) -> Result<ChainTrace> {
    match model {
        Model::Hsbm => run_chain(network, hyper),
        Model::Dpsbm => ChainTrace::stack_layers(&fit_per_layer(network, hyper)?),
    }
}

/// Where the network for a run comes from.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum DataSource {
    Scenario {
        name: String,
        overrides: ScenarioOverrides,
    },
    Manifest(PathBuf),
}

impl DataSource {
    pub fn load(&self) -> Result<(MultiplexNetwork, Option<LabelMatrix>)> {
        match self {
            DataSource::Scenario { name, overrides } => {
                let (net, truth) = build_scenario(name, overrides)?;
                Ok((net, Some(truth)))
            }
            DataSource::Manifest(path) => io::load_multiplex(&NetworkManifest::read(path)?),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RunConfig {
    pub model: Model,
    pub hyper: Hyperparameters,
    pub source: DataSource,
    pub reps: usize,
    pub out: PathBuf,
}

#[derive(Serialize)]
struct RunMeta<'a> {
    command: &'a str,
    config: &'a RunConfig,
    seed: u64,
    nmi_variant: &'static str,
    defaults: Hyperparameters,
    version: &'static str,
}

impl RunConfig {
    fn meta<'a>(&'a self, command: &'a str) -> RunMeta<'a> {
        RunMeta {
            command,
            config: self,
            seed: self.hyper.seed,
            nmi_variant: NMI_VARIANT,
            defaults: Hyperparameters::default(),
            version: env!("CARGO_PKG_VERSION"),
        }
    }
}

/// Generates a scenario and writes manifest, edge list and truth labels.
pub fn run_simulate(name: &str, overrides: &ScenarioOverrides, out: &Path) -> Result<NetworkManifest> {
    let (net, truth) = build_scenario(name, overrides)?;
    io::save_network(&net, Some(&truth), out)
}

/// Fits one model and writes the standard result files.
pub fn run_fit(config: &RunConfig) -> Result<SummaryReport> {
    config.hyper.validate()?;
    let (net, truth) = config.source.load()?;
    if let Some(t) = &truth {
        t.check_shape(&net)?;
    }
    let trace = fit_model(config.model, &net, &config.hyper)?;
    let report = summarize(&trace, truth.as_ref())?;
    io::save_results(&trace, &report, truth.as_ref(), &config.meta("fit"), &config.out)?;
    Ok(report)
}

/// Scores a saved `labels_map.csv` against a truth file.
pub fn run_evaluate(labels: &Path, truth: &Path) -> Result<NmiReport> {
    let estimate = io::read_map_csv(labels)?;
    let truth = io::read_labels(truth, &estimate.shape())?;
    nmi_report(&estimate, &truth)
}

/// NMI of one model on one replication.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ComparisonRow {
    pub replication: usize,
    pub model: Model,
    pub layers: usize,
    pub nmi: NmiReport,
}

/// (data seed, chain seed) for replication `r`.
pub fn replication_seeds(seed: u64, r: usize) -> (u64, u64) {
    let r = r as u64;
    (derive_seed(seed, 2 * r), derive_seed(seed, 2 * r + 1))
}

/// Runs `reps` replications of every model on freshly simulated data.
/// Replications run in parallel; rows are ordered by replication, then
/// model.
pub fn compare_models(
    scenario: &str,
    overrides: &ScenarioOverrides,
    hyper: &Hyperparameters,
    reps: usize,
    models: &[Model],
) -> Result<Vec<ComparisonRow>> {
    hyper.validate()?;
    let rows: Vec<Vec<ComparisonRow>> = (0..reps)
        .into_par_iter()
        .map(|r| {
            let (data_seed, chain_seed) = replication_seeds(hyper.seed, r);
            let (net, truth) = build_scenario(
                scenario,
                &ScenarioOverrides {
                    seed: data_seed,
                    ..overrides.clone()
                },
            )?;
            let h = Hyperparameters {
                seed: chain_seed,
                ..hyper.clone()
            };
            models
                .iter()
                .map(|&model| {
                    let trace = fit_model(model, &net, &h)?;
                    let report = summarize(&trace, Some(&truth))?;
                    Ok(ComparisonRow {
                        replication: r + 1,
                        model,
                        layers: net.num_layers(),
                        nmi: report.nmi.expect("truth supplied"),
                    })
                })
                .collect()
        })
        .collect::<Result<_>>()?;
    Ok(rows.into_iter().flatten().collect())
}

/// Mean of (avg slicewise, aggregate) NMI for one model.
pub fn mean_nmi(rows: &[ComparisonRow], model: Model) -> (f64, f64) {
    let picked: Vec<&NmiReport> = rows.iter().filter(|r| r.model == model).map(|r| &r.nmi).collect();
    let n = picked.len().max(1) as f64;
    (
        picked.iter().map(|r| r.avg_slicewise).sum::<f64>() / n,
        picked.iter().map(|r| r.aggregate).sum::<f64>() / n,
    )
}

pub fn write_comparison(rows: &[ComparisonRow], path: &Path) -> Result<()> {
    let mut w = csv::Writer::from_path(path).map_err(|e| csv_io(path, e))?;
    w.write_record(["replication", "model", "layers", "avg_slicewise", "aggregate", "slicewise"])
        .map_err(|e| csv_io(path, e))?;
    for r in rows {
        let slices: Vec<String> = r.nmi.slicewise.iter().map(ToString::to_string).collect();
        w.write_record([
            r.replication.to_string(),
            r.model.to_string(),
            r.layers.to_string(),
            r.nmi.avg_slicewise.to_string(),
            r.nmi.aggregate.to_string(),
            slices.join(";"),
        ])
        .map_err(|e| csv_io(path, e))?;
    }
    w.flush().map_err(|e| Error::io(path, e))
}

fn csv_io(path: &Path, e: csv::Error) -> Error {
    Error::io(path, std::io::Error::other(e.to_string()))
}

/// Runs the replicated HSBM vs per-layer DP-SBM comparison and writes
/// `comparison.csv` and `run_meta.json` into the output directory.
pub fn run_experiment(config: &RunConfig) -> Result<Vec<ComparisonRow>> {
    let DataSource::Scenario { name, overrides } = &config.source else {
        return Err(Error::InvalidScenario("experiment needs a scenario, not a manifest".into()));
    };
    if config.reps == 0 {
        return Err(Error::InvalidHyperparameter("reps must be at least 1".into()));
    }
    let rows = compare_models(name, overrides, &config.hyper, config.reps, &Model::ALL)?;
    std::fs::create_dir_all(&config.out).map_err(|e| Error::io(&config.out, e))?;
    write_comparison(&rows, &config.out.join("comparison.csv"))?;
    let meta_path = config.out.join("run_meta.json");
    let mut json = serde_json::to_string_pretty(&config.meta("experiment"))
        .map_err(|e| Error::parse(&meta_path, 0, e.to_string()))?;
    json.push('\n');
    std::fs::write(&meta_path, json).map_err(|e| Error::io(&meta_path, e))?;
    Ok(rows)
}
