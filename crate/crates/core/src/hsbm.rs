//! Slice sampler for the hierarchical SBM.
//!
//! The latent state follows the Chinese restaurant franchise: node i of
//! layer t sits at group `g_ti`, group g of layer t is served community
//! (dish) `k_tg`, and the node's label is `z_ti = k_{t, g_ti}`. Slice
//! variables `u_ti ≤ γ_{t, g_ti}` and `v_tg ≤ π_{k_tg}` make the infinite
//! group and community sequences finite at every step.

use rand::Rng;

use crate::error::{Error, Result};
use crate::network::{LabelMatrix, MultiplexNetwork, SymMatrix};
use crate::params::Hyperparameters;
use crate::rng::{self, chain_rng, ChainRng};
use crate::stats::{self, EtaStats};
use crate::stick::{next_cap, slice_set, StickState};
use crate::trace::ChainTrace;

/// Initial truncation for both group and community sequences.
pub const INITIAL_CAP: usize = 10;

/// a_kℓ = logit(η_kℓ), b_kℓ = log(1 - η_kℓ).
#[derive(Clone, Debug, PartialEq)]
pub struct LogOddsCache {
    pub a: SymMatrix<f64>,
    pub b: SymMatrix<f64>,
}

impl LogOddsCache {
    pub fn from_eta(eta: &SymMatrix<f64>) -> Self {
        LogOddsCache {
            a: SymMatrix::from_fn(eta.dim(), |k, l| {
                let p = *eta.get(k, l);
                (p / (1.0 - p)).ln()
            }),
            b: SymMatrix::from_fn(eta.dim(), |k, l| (-*eta.get(k, l)).ln_1p()),
        }
    }

    /// Σ_ℓ a_kℓ x_ℓ + b_kℓ y_ℓ.
    #[inline]
    pub fn score(&self, k: usize, x: &[u32], y: &[u32]) -> f64 {
        let mut s = 0.0;
        for l in 1..=x.len() {
            let (xl, yl) = (x[l - 1], y[l - 1]);
            if yl != 0 {
                s += *self.a.get(k, l) * xl as f64 + *self.b.get(k, l) * yl as f64;
            }
        }
        s
    }
}

/// Draws a fresh η matrix entry from its Beta prior.
pub(crate) fn prior_eta<R: Rng + ?Sized>(rng: &mut R, hyper: &Hyperparameters) -> f64 {
    rng::beta(rng, hyper.alpha_eta, hyper.beta_eta)
}

/// Redraws every η_kℓ, k ≤ ℓ, from Beta(λ + α_η, N − λ + β_η).
pub(crate) fn sample_eta<R: Rng + ?Sized>(
    stats: &EtaStats,
    hyper: &Hyperparameters,
    rng: &mut R,
) -> SymMatrix<f64> {
    SymMatrix::from_fn(stats.lambda.dim(), |k, l| {
        let lambda = *stats.lambda.get(k, l) as f64;
        let pairs = *stats.pairs.get(k, l) as f64;
        rng::beta(rng, lambda + hyper.alpha_eta, pairs - lambda + hyper.beta_eta)
    })
}

/// Full latent state of the HSBM slice sampler.
#[derive(Clone, Debug, PartialEq)]
pub struct HsbmState {
    groups: Vec<Vec<usize>>,
    dishes: Vec<Vec<usize>>,
    u: Vec<Vec<f64>>,
    v: Vec<Vec<f64>>,
    group_sticks: Vec<StickState>,
    dish_sticks: StickState,
    eta: SymMatrix<f64>,
    cache: LogOddsCache,
}

impl HsbmState {
    /// Initial state: caps of 10, every node at group 1, every group served
    /// community 1, slice variables uniform on (0, 1). Stick fractions and
    /// η start from their priors.
    pub fn init(network: &MultiplexNetwork, hyper: &Hyperparameters, rng: &mut ChainRng) -> Self {
        let t_count = network.num_layers();
        let groups = network.node_counts().iter().map(|&n| vec![1; n]).collect();
        let dishes = vec![vec![1; INITIAL_CAP]; t_count];
        let u = network
            .node_counts()
            .iter()
            .map(|&n| (0..n).map(|_| rng::open_unit(rng)).collect())
            .collect();
        let v = (0..t_count)
            .map(|_| (0..INITIAL_CAP).map(|_| rng::open_unit(rng)).collect())
            .collect();
        let group_sticks = (0..t_count)
            .map(|_| {
                let mut s = StickState::new(hyper.alpha0);
                s.extend(rng, INITIAL_CAP);
                s
            })
            .collect();
        let mut dish_sticks = StickState::new(hyper.gamma0);
        dish_sticks.extend(rng, INITIAL_CAP);
        let eta = SymMatrix::from_fn(INITIAL_CAP, |_, _| prior_eta(rng, hyper));
        let cache = LogOddsCache::from_eta(&eta);
        HsbmState {
            groups,
            dishes,
            u,
            v,
            group_sticks,
            dish_sticks,
            eta,
            cache,
        }
    }

    /// Assembles a state from explicit values (all identifiers 1-based).
    /// Group caps are `dishes[t].len()`; the community cap is
    /// `dish_sticks.len()`, which must equal `eta.dim()`.
    #[allow(clippy::too_many_arguments)]
    pub fn from_parts(
        groups: Vec<Vec<usize>>,
        dishes: Vec<Vec<usize>>,
        u: Vec<Vec<f64>>,
        v: Vec<Vec<f64>>,
        group_sticks: Vec<StickState>,
        dish_sticks: StickState,
        eta: SymMatrix<f64>,
    ) -> Result<Self> {
        let t_count = groups.len();
        if [dishes.len(), u.len(), v.len(), group_sticks.len()]
            .iter()
            .any(|&l| l != t_count)
        {
            return Err(Error::ShapeMismatch("per-layer fields differ in length".into()));
        }
        if dish_sticks.len() != eta.dim() {
            return Err(Error::ShapeMismatch(format!(
                "{} community sticks but η has dimension {}",
                dish_sticks.len(),
                eta.dim()
            )));
        }
        let k_cap = eta.dim();
        for t in 0..t_count {
            let g_cap = dishes[t].len();
            if group_sticks[t].len() != g_cap || v[t].len() != g_cap || u[t].len() != groups[t].len()
            {
                return Err(Error::ShapeMismatch(format!("layer {} caps disagree", t + 1)));
            }
            if let Some(node) = groups[t].iter().position(|&g| g == 0 || g > g_cap) {
                return Err(Error::InvalidLabel {
                    layer: t + 1,
                    node: node + 1,
                    label: groups[t][node],
                });
            }
            if dishes[t].iter().any(|&k| k == 0 || k > k_cap) {
                return Err(Error::ShapeMismatch(format!(
                    "layer {} serves a community outside 1..={k_cap}",
                    t + 1
                )));
            }
        }
        if eta.values().iter().any(|&p| !(p > 0.0 && p < 1.0)) {
            return Err(Error::Invariant("η entries must lie in (0, 1)".into()));
        }
        let cache = LogOddsCache::from_eta(&eta);
        Ok(HsbmState {
            groups,
            dishes,
            u,
            v,
            group_sticks,
            dish_sticks,
            eta,
            cache,
        })
    }

    pub fn num_layers(&self) -> usize {
        self.groups.len()
    }

    pub fn groups(&self) -> &[Vec<usize>] {
        &self.groups
    }

    pub fn dishes(&self) -> &[Vec<usize>] {
        &self.dishes
    }

    pub fn u(&self) -> &[Vec<f64>] {
        &self.u
    }

    pub fn v(&self) -> &[Vec<f64>] {
        &self.v
    }

    pub fn group_sticks(&self) -> &[StickState] {
        &self.group_sticks
    }

    pub fn dish_sticks(&self) -> &StickState {
        &self.dish_sticks
    }

    pub fn eta(&self) -> &SymMatrix<f64> {
        &self.eta
    }

    pub fn log_odds(&self) -> &LogOddsCache {
        &self.cache
    }

    pub fn g_cap(&self, t: usize) -> usize {
        self.dishes[t].len()
    }

    pub fn k_cap(&self) -> usize {
        self.dish_sticks.len()
    }

    /// z_t = k_t ∘ g_t.
    pub fn layer_labels(&self, t: usize) -> Vec<usize> {
        self.groups[t]
            .iter()
            .map(|&g| self.dishes[t][g - 1])
            .collect()
    }

    pub fn labels(&self) -> LabelMatrix {
        LabelMatrix::new((0..self.num_layers()).map(|t| self.layer_labels(t)).collect())
            .expect("labels are positive")
    }

    fn set_eta(&mut self, eta: SymMatrix<f64>) {
        self.cache = LogOddsCache::from_eta(&eta);
        self.eta = eta;
    }

    /// Appends communities up to `new_cap`: π′ from Beta(1, γ₀), η entries
    /// from the prior.
    fn grow_communities(&mut self, new_cap: usize, hyper: &Hyperparameters, rng: &mut ChainRng) {
        if new_cap <= self.k_cap() {
            return;
        }
        self.dish_sticks.extend(rng, new_cap);
        let mut eta = self.eta.clone();
        eta.grow_with(new_cap, |_, _| prior_eta(rng, hyper));
        self.set_eta(eta);
    }

    /// Draws k ~ π from the infinite sequence, growing the represented
    /// communities when the draw lands in the residual mass.
    fn draw_dish_from_prior(&mut self, hyper: &Hyperparameters, rng: &mut ChainRng) -> usize {
        let target: f64 = rng.random();
        loop {
            let mut cumulative = 0.0;
            for (k, w) in self.dish_sticks.weights().into_iter().enumerate() {
                cumulative += w;
                if target < cumulative {
                    return k + 1;
                }
            }
            let cap = next_cap(self.k_cap());
            self.grow_communities(cap, hyper, rng);
        }
    }

    /// Appends groups to layer t up to `new_cap`. Each new group gets
    /// γ′ ~ Beta(1, α₀), a dish k ~ π and v ~ Uniform(0, π_k).
    fn grow_groups(&mut self, t: usize, new_cap: usize, hyper: &Hyperparameters, rng: &mut ChainRng) {
        self.group_sticks[t].extend(rng, new_cap);
        while self.dishes[t].len() < new_cap {
            let k = self.draw_dish_from_prior(hyper, rng);
            let pi_k = self.dish_sticks.weights()[k - 1];
            self.dishes[t].push(k);
            self.v[t].push(rng::uniform_upto(rng, pi_k));
        }
    }

    /// γ′_tg ~ Beta(n_g(g_t) + 1, n_{>g}(g_t) + α₀) for every g ≤ G^cap_t.
    pub fn update_gamma_fractions(&mut self, hyper: &Hyperparameters, rng: &mut ChainRng) {
        for t in 0..self.num_layers() {
            let occ = stats::group_occupancy(&self.groups[t], self.g_cap(t));
            for g in 1..=self.g_cap(t) {
                let x = rng::beta(
                    rng,
                    occ.counts[g - 1] as f64 + 1.0,
                    occ.greater[g - 1] as f64 + hyper.alpha0,
                );
                self.group_sticks[t].set_fraction(g, x);
            }
        }
    }

    /// π′_k ~ Beta(n_k(k) + 1, n_{>k}(k) + γ₀) for every k ≤ K^cap.
    pub fn update_pi_fractions(&mut self, hyper: &Hyperparameters, rng: &mut ChainRng) {
        let occ = stats::dish_occupancy(&self.dishes, self.k_cap());
        for k in 1..=self.k_cap() {
            let x = rng::beta(
                rng,
                occ.counts[k - 1] as f64 + 1.0,
                occ.greater[k - 1] as f64 + hyper.gamma0,
            );
            self.dish_sticks.set_fraction(k, x);
        }
    }

    fn update_u_layer(&mut self, t: usize, rng: &mut ChainRng) -> Result<()> {
        let gamma = self.group_sticks[t].weights();
        for (i, &g) in self.groups[t].iter().enumerate() {
            let w = gamma[g - 1];
            if w <= 0.0 {
                return Err(Error::Invariant(format!(
                    "layer {}: node {} sits at group {g} with zero weight",
                    t + 1,
                    i + 1
                )));
            }
            self.u[t][i] = rng::uniform_upto(rng, w);
        }
        Ok(())
    }

    fn update_v_layer(&mut self, t: usize, rng: &mut ChainRng) -> Result<()> {
        let pi = self.dish_sticks.weights();
        for (g, &k) in self.dishes[t].iter().enumerate() {
            let w = pi[k - 1];
            if w <= 0.0 {
                return Err(Error::Invariant(format!(
                    "layer {}: group {} serves community {k} with zero weight",
                    t + 1,
                    g + 1
                )));
            }
            self.v[t][g] = rng::uniform_upto(rng, w);
        }
        Ok(())
    }

    /// u_ti ~ Uniform(0, γ_{t, g_ti}].
    pub fn update_u(&mut self, rng: &mut ChainRng) -> Result<()> {
        (0..self.num_layers()).try_for_each(|t| self.update_u_layer(t, rng))
    }

    /// v_tg ~ Uniform(0, π_{k_tg}].
    pub fn update_v(&mut self, rng: &mut ChainRng) -> Result<()> {
        (0..self.num_layers()).try_for_each(|t| self.update_v_layer(t, rng))
    }

    /// Grows every layer's group prefix until its residual stick mass is
    /// below the smallest u in that layer.
    pub fn ensure_group_coverage(&mut self, hyper: &Hyperparameters, rng: &mut ChainRng) {
        for t in 0..self.num_layers() {
            let u_min = self.u[t].iter().copied().fold(1.0, f64::min);
            while self.group_sticks[t].residual() >= u_min {
                let cap = next_cap(self.g_cap(t));
                self.grow_groups(t, cap, hyper, rng);
            }
        }
    }

    /// Grows the community prefix until its residual mass is below every v.
    pub fn ensure_dish_coverage(&mut self, hyper: &Hyperparameters, rng: &mut ChainRng) {
        let v_min = self.v.iter().flatten().copied().fold(1.0, f64::min);
        while self.dish_sticks.residual() >= v_min {
            let cap = next_cap(self.k_cap());
            self.grow_communities(cap, hyper, rng);
        }
    }

    /// Redraws η from its conjugate posterior and refreshes the log-odds cache.
    pub fn update_eta(&mut self, eta_stats: &EtaStats, hyper: &Hyperparameters, rng: &mut ChainRng) {
        let eta = sample_eta(eta_stats, hyper, rng);
        self.set_eta(eta);
    }

    /// Unnormalized log-probabilities of g_ti over its slice set
    /// {g ≤ G^cap_t : γ_tg ≥ u_ti}, as (group, log ρ) pairs.
    pub fn group_log_weights(
        &self,
        network: &MultiplexNetwork,
        t: usize,
        i: usize,
    ) -> Result<Vec<(usize, f64)>> {
        let z = self.layer_labels(t);
        self.group_log_weights_with(network, t, i, &z)
    }

    fn group_log_weights_with(
        &self,
        network: &MultiplexNetwork,
        t: usize,
        i: usize,
        z: &[usize],
    ) -> Result<Vec<(usize, f64)>> {
        let gamma = self.group_sticks[t].weights();
        let slice = slice_set(&gamma, self.u[t][i]);
        if slice.is_empty() {
            return Err(Error::Invariant(format!(
                "layer {}: empty group slice for node {}",
                t + 1,
                i + 1
            )));
        }
        let ns = stats::node_stats(network.layer(t), z, i, self.k_cap());
        Ok(slice
            .into_iter()
            .map(|g| {
                let k = self.dishes[t][g - 1];
                (g, self.cache.score(k, &ns.tau, &ns.m))
            })
            .collect())
    }

    /// Resamples g_ti from its full conditional, others held fixed.
    pub fn resample_group(
        &mut self,
        network: &MultiplexNetwork,
        t: usize,
        i: usize,
        rng: &mut ChainRng,
    ) -> Result<usize> {
        let z = self.layer_labels(t);
        let weights = self.group_log_weights_with(network, t, i, &z)?;
        let g = pick(&weights, rng);
        self.groups[t][i] = g;
        Ok(g)
    }

    /// Systematic scan over the nodes of layer t.
    pub fn update_groups_layer(
        &mut self,
        network: &MultiplexNetwork,
        t: usize,
        rng: &mut ChainRng,
    ) -> Result<()> {
        let mut z = self.layer_labels(t);
        for i in 0..self.groups[t].len() {
            let weights = self.group_log_weights_with(network, t, i, &z)?;
            let g = pick(&weights, rng);
            self.groups[t][i] = g;
            z[i] = self.dishes[t][g - 1];
        }
        Ok(())
    }

    /// Unnormalized log-probabilities of k_tg over its slice set
    /// {k ≤ K^cap : π_k ≥ v_tg}, as (community, log δ) pairs.
    pub fn dish_log_weights(
        &self,
        network: &MultiplexNetwork,
        t: usize,
        g: usize,
    ) -> Result<Vec<(usize, f64)>> {
        let pairs = stats::group_pair_stats(network.layer(t), &self.groups[t], self.g_cap(t));
        self.dish_log_weights_with(&pairs, t, g)
    }

    fn dish_log_weights_with(
        &self,
        pairs: &stats::GroupPairStats,
        t: usize,
        g: usize,
    ) -> Result<Vec<(usize, f64)>> {
        let pi = self.dish_sticks.weights();
        let slice = slice_set(&pi, self.v[t][g - 1]);
        if slice.is_empty() {
            return Err(Error::Invariant(format!(
                "layer {}: empty community slice for group {g}",
                t + 1
            )));
        }
        let block = stats::block_stats(pairs, &self.dishes[t], g, self.k_cap());
        let (xi, o) = (pairs.xi(g, g) as f64, pairs.o(g, g) as f64);
        Ok(slice
            .into_iter()
            .map(|k| {
                let own = *self.cache.a.get(k, k) * xi + *self.cache.b.get(k, k) * o;
                (k, own + self.cache.score(k, &block.zeta, &block.r))
            })
            .collect())
    }

    /// Resamples k_tg from its full conditional, others held fixed.
    pub fn resample_dish(
        &mut self,
        network: &MultiplexNetwork,
        t: usize,
        g: usize,
        rng: &mut ChainRng,
    ) -> Result<usize> {
        let weights = self.dish_log_weights(network, t, g)?;
        let k = pick(&weights, rng);
        self.dishes[t][g - 1] = k;
        Ok(k)
    }

    /// Systematic scan over the groups of layer t.
    pub fn update_dishes_layer(
        &mut self,
        network: &MultiplexNetwork,
        t: usize,
        rng: &mut ChainRng,
    ) -> Result<()> {
        let pairs = stats::group_pair_stats(network.layer(t), &self.groups[t], self.g_cap(t));
        for g in 1..=self.g_cap(t) {
            let weights = self.dish_log_weights_with(&pairs, t, g)?;
            self.dishes[t][g - 1] = pick(&weights, rng);
        }
        Ok(())
    }

    /// One full iteration.
    ///
    /// Order: (γ′, u) per layer and group coverage; (π′, v) and community
    /// coverage; η; then per layer k, v, g, u. Each (fraction, slice
    /// variable) pair is drawn as a block, fractions first with the slice
    /// variables integrated out.
    pub fn sweep(
        &mut self,
        network: &MultiplexNetwork,
        hyper: &Hyperparameters,
        rng: &mut ChainRng,
    ) -> Result<()> {
        self.update_gamma_fractions(hyper, rng);
        self.update_u(rng)?;
        self.ensure_group_coverage(hyper, rng);

        self.update_pi_fractions(hyper, rng);
        self.update_v(rng)?;
        self.ensure_dish_coverage(hyper, rng);

        let eta_stats = stats::eta_stats(network, &self.labels(), self.k_cap());
        self.update_eta(&eta_stats, hyper, rng);

        for t in 0..self.num_layers() {
            self.update_dishes_layer(network, t, rng)?;
            self.update_v_layer(t, rng)?;
            self.update_groups_layer(network, t, rng)?;
            self.update_u_layer(t, rng)?;
        }
        Ok(())
    }

    /// Checks the slice inequalities, stick validity, η range and cap
    /// consistency.
    pub fn check_invariants(&self) -> Result<()> {
        let pi = self.dish_sticks.weights();
        if !(self.dish_sticks.residual() > 0.0) {
            return Err(Error::Invariant("community sticks exhaust the unit mass".into()));
        }
        for t in 0..self.num_layers() {
            let gamma = self.group_sticks[t].weights();
            if !(self.group_sticks[t].residual() > 0.0) {
                return Err(Error::Invariant(format!(
                    "layer {}: group sticks exhaust the unit mass",
                    t + 1
                )));
            }
            for (i, (&g, &u)) in self.groups[t].iter().zip(&self.u[t]).enumerate() {
                if g == 0 || g > self.g_cap(t) || !(u > 0.0 && u <= gamma[g - 1]) {
                    return Err(Error::Invariant(format!(
                        "layer {}: node {}: u = {u}, group {g}",
                        t + 1,
                        i + 1
                    )));
                }
            }
            for (g, (&k, &v)) in self.dishes[t].iter().zip(&self.v[t]).enumerate() {
                if k == 0 || k > self.k_cap() || !(v > 0.0 && v <= pi[k - 1]) {
                    return Err(Error::Invariant(format!(
                        "layer {}: group {}: v = {v}, community {k}",
                        t + 1,
                        g + 1
                    )));
                }
            }
        }
        if self.eta.dim() != self.k_cap() {
            return Err(Error::Invariant("η dimension differs from community cap".into()));
        }
        if self.eta.values().iter().any(|&p| !(p > 0.0 && p < 1.0)) {
            return Err(Error::Invariant("η entry outside (0, 1)".into()));
        }
        Ok(())
    }
}

fn pick(weights: &[(usize, f64)], rng: &mut ChainRng) -> usize {
    let lw: Vec<f64> = weights.iter().map(|&(_, w)| w).collect();
    weights[rng::sample_log_categorical(rng, &lw)].0
}

/// Runs the HSBM sampler from its standard initialization and keeps
/// post-burn-in samples at the configured stride.
pub fn run_chain(network: &MultiplexNetwork, hyper: &Hyperparameters) -> Result<ChainTrace> {
    run_chain_with(network, hyper, |_, _| Ok(()))
}

/// As [`run_chain`], calling `observe(sweep, state)` after every sweep.
pub fn run_chain_with(
    network: &MultiplexNetwork,
    hyper: &Hyperparameters,
    mut observe: impl FnMut(usize, &HsbmState) -> Result<()>,
) -> Result<ChainTrace> {
    hyper.validate()?;
    let mut rng = chain_rng(hyper.seed, 0);
    let mut state = HsbmState::init(network, hyper, &mut rng);
    let mut trace = ChainTrace::default();
    for iter in 1..=hyper.iter_max {
        state.sweep(network, hyper, &mut rng)?;
        observe(iter, &state)?;
        if hyper.keeps(iter) {
            trace.push(iter, state.labels(), vec![state.eta.clone()]);
        }
    }
    Ok(trace)
}
