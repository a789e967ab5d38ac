//! Planted multiplex SBM generators for the two simulation regimes.

use rand::distr::weighted::WeightedIndex;
use rand::distr::Distribution;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::network::{Adjacency, LabelMatrix, MultiplexNetwork};
use crate::rng::{chain_rng, ChainRng};

/// Friendship probabilities between extrovert, ambivert and introvert contestants.
pub const PAGEANT_ETA: [[f64; 3]; 3] = [[0.90, 0.75, 0.50], [0.75, 0.60, 0.25], [0.50, 0.25, 0.10]];
pub const PAGEANT_WEIGHTS: [f64; 3] = [0.40, 0.35, 0.25];
pub const PAGEANT_NODES: usize = 50;
pub const PAGEANT_LAYERS: usize = 5;

pub const MARKOV_ETA: [[f64; 3]; 3] = [[0.8, 0.1, 0.3], [0.1, 0.9, 0.2], [0.3, 0.2, 0.7]];
pub const MARKOV_NODES: usize = 50;
pub const MARKOV_RETENTION: f64 = 0.9;
pub const MARKOV_LAYERS: usize = 4;

/// Stream reserved for data generation, distinct from sampler streams.
const SYNTH_STREAM: u64 = 0x5EED;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum LabelMechanism {
    /// Every (layer, node) label drawn independently from the weights.
    Iid,
    /// Layer 1 from the weights; afterwards each node keeps its label with
    /// probability `retention`, otherwise moves uniformly to another one.
    Markov { retention: f64 },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScenarioConfig {
    pub node_counts: Vec<usize>,
    pub weights: Vec<f64>,
    pub eta: Vec<Vec<f64>>,
    pub mechanism: LabelMechanism,
    pub seed: u64,
}

impl ScenarioConfig {
    pub fn num_layers(&self) -> usize {
        self.node_counts.len()
    }

    pub fn num_communities(&self) -> usize {
        self.weights.len()
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidScenario(msg));
        if self.node_counts.is_empty() {
            return bad("at least one layer is required".into());
        }
        if self.node_counts.contains(&0) {
            return bad("every layer needs at least one node".into());
        }
        let k = self.weights.len();
        if k == 0 || self.weights.iter().any(|&w| !(w >= 0.0 && w.is_finite())) {
            return bad(format!("invalid community weights {:?}", self.weights));
        }
        let total: f64 = self.weights.iter().sum();
        if (total - 1.0).abs() > 1e-9 {
            return bad(format!("community weights sum to {total}, not 1"));
        }
        if self.eta.len() != k || self.eta.iter().any(|r| r.len() != k) {
            return bad(format!("connectivity matrix must be {k}×{k}"));
        }
        for a in 0..k {
            for b in 0..k {
                let p = self.eta[a][b];
                if !(0.0..=1.0).contains(&p) || p != self.eta[b][a] {
                    return bad("connectivity must be symmetric with entries in [0, 1]".into());
                }
            }
        }
        if let LabelMechanism::Markov { retention } = self.mechanism {
            if !(0.0..=1.0).contains(&retention) {
                return bad(format!("retention {retention} outside [0, 1]"));
            }
            if k == 1 && retention < 1.0 {
                return bad("retention below 1 needs at least two communities".into());
            }
            if self.node_counts.iter().any(|&n| n != self.node_counts[0]) {
                return bad("markov labels need the same node set in every layer".into());
            }
        }
        Ok(())
    }
}

/// Draws an undirected SBM layer: each pair i < j is an edge with
/// probability eta[z_i - 1][z_j - 1].
pub fn sample_sbm_layer<R: Rng + ?Sized>(
    labels: &[usize],
    eta: &[Vec<f64>],
    rng: &mut R,
) -> Result<Adjacency> {
    let k = eta.len();
    if let Some(node) = labels.iter().position(|&z| z == 0 || z > k) {
        return Err(Error::InvalidLabel {
            layer: 1,
            node: node + 1,
            label: labels[node],
        });
    }
    let n = labels.len();
    let mut adj = Adjacency::empty(n);
    for i in 0..n {
        for j in i + 1..n {
            let p = eta[labels[i] - 1][labels[j] - 1];
            if rng.random::<f64>() < p {
                adj.set_edge(i, j, true);
            }
        }
    }
    Ok(adj)
}

fn weight_sampler(weights: &[f64]) -> Result<WeightedIndex<f64>> {
    WeightedIndex::new(weights).map_err(|e| Error::InvalidScenario(e.to_string()))
}

/// Independent labels for every (layer, node).
pub fn iid_layer_labels<R: Rng + ?Sized>(config: &ScenarioConfig, rng: &mut R) -> Result<LabelMatrix> {
    let dist = weight_sampler(&config.weights)?;
    let layers = config
        .node_counts
        .iter()
        .map(|&n| (0..n).map(|_| dist.sample(rng) + 1).collect())
        .collect();
    LabelMatrix::new(layers)
}

/// Markov label chain across layers.
pub fn markov_labels<R: Rng + ?Sized>(config: &ScenarioConfig, rng: &mut R) -> Result<LabelMatrix> {
    let retention = match config.mechanism {
        LabelMechanism::Markov { retention } => retention,
        LabelMechanism::Iid => {
            return Err(Error::InvalidScenario(
                "markov labels requested for an iid scenario".into(),
            ))
        }
    };
    let k = config.num_communities();
    if k == 1 && retention < 1.0 {
        return Err(Error::InvalidScenario(
            "retention below 1 needs at least two communities".into(),
        ));
    }
    let dist = weight_sampler(&config.weights)?;
    let n = config.node_counts[0];
    let mut layers: Vec<Vec<usize>> = Vec::with_capacity(config.num_layers());
    layers.push((0..n).map(|_| dist.sample(rng) + 1).collect());
    for _ in 1..config.num_layers() {
        let prev = layers.last().expect("first layer present");
        let next = prev
            .iter()
            .map(|&z| {
                if rng.random::<f64>() < retention {
                    z
                } else {
                    // uniform over the k - 1 other labels
                    let r = rng.random_range(1..k);
                    if r >= z {
                        r + 1
                    } else {
                        r
                    }
                }
            })
            .collect();
        layers.push(next);
    }
    LabelMatrix::new(layers)
}

/// Draws truth labels per the config's mechanism, then one SBM layer each.
pub fn generate(config: &ScenarioConfig) -> Result<(MultiplexNetwork, LabelMatrix)> {
    config.validate()?;
    let mut rng: ChainRng = chain_rng(config.seed, SYNTH_STREAM);
    let truth = match config.mechanism {
        LabelMechanism::Iid => iid_layer_labels(config, &mut rng)?,
        LabelMechanism::Markov { .. } => markov_labels(config, &mut rng)?,
    };
    let layers = truth
        .layers()
        .iter()
        .map(|z| sample_sbm_layer(z, &config.eta, &mut rng))
        .collect::<Result<Vec<_>>>()?;
    Ok((MultiplexNetwork::from_layers(layers)?, truth))
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct ScenarioOverrides {
    pub layers: Option<usize>,
    pub nodes: Option<usize>,
    pub retention: Option<f64>,
    pub weights: Option<Vec<f64>>,
    pub seed: u64,
}

fn matrix(m: &[[f64; 3]; 3]) -> Vec<Vec<f64>> {
    m.iter().map(|r| r.to_vec()).collect()
}

/// Config for a named scenario (`pageant` or `markov`) with overrides applied.
pub fn scenario_config(name: &str, overrides: &ScenarioOverrides) -> Result<ScenarioConfig> {
    let config = match name {
        "pageant" => {
            if overrides.retention.is_some() {
                return Err(Error::InvalidScenario(
                    "the pageant scenario has independent layers; retention does not apply".into(),
                ));
            }
            ScenarioConfig {
                node_counts: vec![
                    overrides.nodes.unwrap_or(PAGEANT_NODES);
                    overrides.layers.unwrap_or(PAGEANT_LAYERS)
                ],
                weights: overrides
                    .weights
                    .clone()
                    .unwrap_or_else(|| PAGEANT_WEIGHTS.to_vec()),
                eta: matrix(&PAGEANT_ETA),
                mechanism: LabelMechanism::Iid,
                seed: overrides.seed,
            }
        }
        "markov" => ScenarioConfig {
            node_counts: vec![
                overrides.nodes.unwrap_or(MARKOV_NODES);
                overrides.layers.unwrap_or(MARKOV_LAYERS)
            ],
            weights: overrides.weights.clone().unwrap_or_else(|| vec![1.0 / 3.0; 3]),
            eta: matrix(&MARKOV_ETA),
            mechanism: LabelMechanism::Markov {
                retention: overrides.retention.unwrap_or(MARKOV_RETENTION),
            },
            seed: overrides.seed,
        },
        other => return Err(Error::UnknownScenario(other.to_string())),
    };
    config.validate()?;
    Ok(config)
}

pub fn build_scenario(
    name: &str,
    overrides: &ScenarioOverrides,
) -> Result<(MultiplexNetwork, LabelMatrix)> {
    generate(&scenario_config(name, overrides)?)
}
