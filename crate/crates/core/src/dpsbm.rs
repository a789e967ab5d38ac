//! Single-layer DP-SBM slice sampler, used as the independent-layers
//! baseline.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::hsbm::{prior_eta, sample_eta, LogOddsCache, INITIAL_CAP};
use crate::network::{Adjacency, LabelMatrix, MultiplexNetwork, SymMatrix};
use crate::params::Hyperparameters;
use crate::rng::{self, chain_rng, derive_seed, ChainRng};
use crate::stats::{self, EtaStats};
use crate::stick::{next_cap, slice_set, slice_sup, StickState};
use crate::trace::ChainTrace;

#[derive(Clone, Debug, PartialEq)]
pub struct DpsbmState {
    labels: Vec<usize>,
    u: Vec<f64>,
    sticks: StickState,
    eta: SymMatrix<f64>,
    cache: LogOddsCache,
}

impl DpsbmState {
    pub fn init(n: usize, hyper: &Hyperparameters, rng: &mut ChainRng) -> Self {
        let u = (0..n).map(|_| rng::open_unit(rng)).collect();
        let mut sticks = StickState::new(hyper.alpha0);
        sticks.extend(rng, INITIAL_CAP);
        let eta = SymMatrix::from_fn(INITIAL_CAP, |_, _| prior_eta(rng, hyper));
        let cache = LogOddsCache::from_eta(&eta);
        DpsbmState {
            labels: vec![1; n],
            u,
            sticks,
            eta,
            cache,
        }
    }

    /// Assembles a state; the cap Z^cap is `sticks.len()` and must equal
    /// `eta.dim()`.
    pub fn from_parts(
        labels: Vec<usize>,
        u: Vec<f64>,
        sticks: StickState,
        eta: SymMatrix<f64>,
    ) -> Result<Self> {
        if labels.len() != u.len() || sticks.len() != eta.dim() {
            return Err(Error::ShapeMismatch("DP-SBM state fields disagree".into()));
        }
        if let Some(node) = labels.iter().position(|&z| z == 0 || z > sticks.len()) {
            return Err(Error::InvalidLabel {
                layer: 1,
                node: node + 1,
                label: labels[node],
            });
        }
        let cache = LogOddsCache::from_eta(&eta);
        Ok(DpsbmState {
            labels,
            u,
            sticks,
            eta,
            cache,
        })
    }

    pub fn labels(&self) -> &[usize] {
        &self.labels
    }

    pub fn u(&self) -> &[f64] {
        &self.u
    }

    pub fn sticks(&self) -> &StickState {
        &self.sticks
    }

    pub fn eta(&self) -> &SymMatrix<f64> {
        &self.eta
    }

    pub fn z_cap(&self) -> usize {
        self.sticks.len()
    }

    fn grow(&mut self, new_cap: usize, hyper: &Hyperparameters, rng: &mut ChainRng) {
        self.sticks.extend(rng, new_cap);
        let mut eta = self.eta.clone();
        eta.grow_with(new_cap, |_, _| prior_eta(rng, hyper));
        self.cache = LogOddsCache::from_eta(&eta);
        self.eta = eta;
    }

    fn update_fractions(&mut self, hyper: &Hyperparameters, rng: &mut ChainRng) {
        let occ = stats::group_occupancy(&self.labels, self.z_cap());
        for z in 1..=self.z_cap() {
            let x = rng::beta(
                rng,
                occ.counts[z - 1] as f64 + 1.0,
                occ.greater[z - 1] as f64 + hyper.alpha0,
            );
            self.sticks.set_fraction(z, x);
        }
    }

    fn update_u(&mut self, rng: &mut ChainRng) -> Result<()> {
        let gamma = self.sticks.weights();
        for (i, &z) in self.labels.iter().enumerate() {
            let w = gamma[z - 1];
            if w <= 0.0 {
                return Err(Error::Invariant(format!(
                    "node {} has label {z} with zero weight",
                    i + 1
                )));
            }
            self.u[i] = rng::uniform_upto(rng, w);
        }
        Ok(())
    }

    /// Unnormalized log-probabilities of z_i over {z ≤ Z^cap : γ_z ≥ u_i}.
    pub fn label_log_weights(&self, adj: &Adjacency, i: usize) -> Result<Vec<(usize, f64)>> {
        let gamma = self.sticks.weights();
        let slice = slice_set(&gamma, self.u[i]);
        if slice.is_empty() {
            return Err(Error::Invariant(format!("empty slice for node {}", i + 1)));
        }
        let ns = stats::node_stats(adj, &self.labels, i, self.z_cap());
        Ok(slice
            .into_iter()
            .map(|z| (z, self.cache.score(z, &ns.tau, &ns.m)))
            .collect())
    }

    /// Resamples z_i from its full conditional.
    pub fn resample_label(&mut self, adj: &Adjacency, i: usize, rng: &mut ChainRng) -> Result<usize> {
        let weights = self.label_log_weights(adj, i)?;
        let lw: Vec<f64> = weights.iter().map(|&(_, w)| w).collect();
        let z = weights[rng::sample_log_categorical(rng, &lw)].0;
        self.labels[i] = z;
        Ok(z)
    }

    /// One iteration; returns how many times the cap had to grow.
    ///
    /// The fraction/slice block is redrawn and checked: if some slice
    /// reaches the cap (or the residual stick could still hold a slice),
    /// the partial sweep is discarded, the cap grows by 1.5× and the sweep
    /// restarts from the saved state.
    pub fn sweep(
        &mut self,
        adj: &Adjacency,
        hyper: &Hyperparameters,
        rng: &mut ChainRng,
    ) -> Result<usize> {
        let mut retries = 0;
        loop {
            let saved = self.clone();
            self.update_fractions(hyper, rng);
            self.update_u(rng)?;
            let gamma = self.sticks.weights();
            let reach = self.u.iter().map(|&u| slice_sup(&gamma, u)).max().unwrap_or(0);
            let u_min = self.u.iter().copied().fold(1.0, f64::min);
            if reach < self.z_cap() && self.sticks.residual() < u_min {
                break;
            }
            *self = saved;
            let cap = next_cap(self.z_cap());
            self.grow(cap, hyper, rng);
            retries += 1;
        }

        let mut eta_stats = EtaStats::zeros(self.z_cap());
        eta_stats.accumulate(adj, &self.labels);
        let eta = sample_eta(&eta_stats, hyper, rng);
        self.cache = LogOddsCache::from_eta(&eta);
        self.eta = eta;

        for i in 0..self.labels.len() {
            self.resample_label(adj, i, rng)?;
        }
        self.update_u(rng)?;
        Ok(retries)
    }

    pub fn check_invariants(&self) -> Result<()> {
        let gamma = self.sticks.weights();
        for (i, (&z, &u)) in self.labels.iter().zip(&self.u).enumerate() {
            if z == 0 || z > self.z_cap() || !(u > 0.0 && u <= gamma[z - 1]) {
                return Err(Error::Invariant(format!("node {}: u = {u}, label {z}", i + 1)));
            }
        }
        if self.eta.values().iter().any(|&p| !(p > 0.0 && p < 1.0)) {
            return Err(Error::Invariant("η entry outside (0, 1)".into()));
        }
        Ok(())
    }
}

/// Runs the DP-SBM sampler on one adjacency matrix.
pub fn run_dpsbm(adj: &Adjacency, hyper: &Hyperparameters) -> Result<ChainTrace> {
    hyper.validate()?;
    let mut rng = chain_rng(hyper.seed, 0);
    let mut state = DpsbmState::init(adj.n(), hyper, &mut rng);
    let mut trace = ChainTrace::default();
    for iter in 1..=hyper.iter_max {
        state.sweep(adj, hyper, &mut rng)?;
        if hyper.keeps(iter) {
            trace.push(
                iter,
                LabelMatrix::new(vec![state.labels.clone()])?,
                vec![state.eta.clone()],
            );
        }
    }
    Ok(trace)
}

/// Seed used for layer `t` (0-based) when fitting layers independently.
/// A single-layer network reuses the run seed unchanged.
pub fn layer_seed(seed: u64, t: usize, layers: usize) -> u64 {
    if layers == 1 {
        seed
    } else {
        derive_seed(seed, t as u64)
    }
}

/// Fits DP-SBM separately to every layer (in parallel), one trace per layer.
pub fn fit_per_layer(network: &MultiplexNetwork, hyper: &Hyperparameters) -> Result<Vec<ChainTrace>> {
    hyper.validate()?;
    let layers = network.num_layers();
    network
        .layers()
        .par_iter()
        .enumerate()
        .map(|(t, adj)| {
            let h = Hyperparameters {
                seed: layer_seed(hyper.seed, t, layers),
                ..hyper.clone()
            };
            run_dpsbm(adj, &h)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_node_draws_from_its_slice() {
        let adj = Adjacency::empty(1);
        let hyper = Hyperparameters::default();
        let mut rng = chain_rng(1, 0);
        let mut state = DpsbmState::init(1, &hyper, &mut rng);
        for _ in 0..50 {
            state.sweep(&adj, &hyper, &mut rng).unwrap();
            state.check_invariants().unwrap();
            let w = state.label_log_weights(&adj, 0).unwrap();
            assert!(w.iter().all(|&(_, lw)| lw == 0.0));
        }
    }

    #[test]
    fn doubling_grows_cap_by_half() {
        // a huge α₀ spreads the stick so the first 10 pieces cannot cover the slices
        let adj = Adjacency::empty(5);
        let hyper = Hyperparameters {
            alpha0: 1000.0,
            ..Default::default()
        };
        let mut rng = chain_rng(2, 0);
        let mut state = DpsbmState::init(5, &hyper, &mut rng);
        assert_eq!(state.z_cap(), 10);
        let retries = state.sweep(&adj, &hyper, &mut rng).unwrap();
        assert!(retries >= 1);
        let mut cap = 10;
        for _ in 0..retries {
            cap = next_cap(cap);
        }
        assert_eq!(state.z_cap(), cap);
        assert!(cap >= 15);
        state.check_invariants().unwrap();
    }

    #[test]
    fn same_seed_same_trace() {
        let adj = Adjacency::from_edges(6, &[(0, 1), (1, 2), (0, 2), (3, 4), (4, 5)]);
        let hyper = Hyperparameters {
            iter_max: 40,
            burnin: 20,
            seed: 9,
            ..Default::default()
        };
        let a = run_dpsbm(&adj, &hyper).unwrap();
        assert_eq!(a.len(), 20);
        assert_eq!(a, run_dpsbm(&adj, &hyper).unwrap());
    }

    #[test]
    fn per_layer_fits() {
        let adj = Adjacency::from_edges(6, &[(0, 1), (1, 2), (3, 4)]);
        let hyper = Hyperparameters {
            iter_max: 20,
            burnin: 10,
            seed: 4,
            ..Default::default()
        };
        let one = MultiplexNetwork::from_layers(vec![adj.clone()]).unwrap();
        assert_eq!(fit_per_layer(&one, &hyper).unwrap()[0], run_dpsbm(&adj, &hyper).unwrap());

        let three = MultiplexNetwork::from_layers(vec![adj.clone(), adj.clone(), adj]).unwrap();
        let fits = fit_per_layer(&three, &hyper).unwrap();
        assert_eq!(fits.len(), 3);
        assert_eq!(fits, fit_per_layer(&three, &hyper).unwrap());
        let seeds: Vec<u64> = (0..3).map(|t| layer_seed(4, t, 3)).collect();
        assert!(seeds[0] != seeds[1] && seeds[1] != seeds[2] && seeds[0] != seeds[2]);
    }
}
