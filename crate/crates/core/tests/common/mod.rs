//! Shared fixtures and brute-force oracles for the integration tests.
#![allow(dead_code)]

use hsbm::rng::{chain_rng, ChainRng};
use hsbm::stats::{block_stats, dish_occupancy, eta_stats, group_occupancy, group_pair_stats, node_stats};
use hsbm::synth::sample_sbm_layer;
use hsbm::{Adjacency, DpsbmState, HsbmState, LabelMatrix, MultiplexNetwork, StickState, SymMatrix};
use rand::Rng;

/// Random multiplex network with random groups and group→community maps.
pub struct Instance {
    pub network: MultiplexNetwork,
    pub groups: Vec<Vec<usize>>,
    pub dishes: Vec<Vec<usize>>,
    pub k_cap: usize,
}

impl Instance {
    pub fn g_cap(&self, t: usize) -> usize {
        self.dishes[t].len()
    }

    pub fn labels(&self, t: usize) -> Vec<usize> {
        self.groups[t].iter().map(|&g| self.dishes[t][g - 1]).collect()
    }

    pub fn label_matrix(&self) -> LabelMatrix {
        LabelMatrix::new((0..self.groups.len()).map(|t| self.labels(t)).collect()).unwrap()
    }
}

pub fn random_instance(rng: &mut ChainRng) -> Instance {
    let layers = rng.random_range(1..=3);
    let k_cap = rng.random_range(1..=6);
    let mut adjs = Vec::new();
    let mut groups = Vec::new();
    let mut dishes = Vec::new();
    for _ in 0..layers {
        let n = rng.random_range(1..=30);
        let density: f64 = rng.random();
        let mut adj = Adjacency::empty(n);
        for i in 0..n {
            for j in i + 1..n {
                if rng.random::<f64>() < density {
                    adj.set_edge(i, j, true);
                }
            }
        }
        let g_cap = rng.random_range(1..=8);
        groups.push((0..n).map(|_| rng.random_range(1..=g_cap)).collect());
        dishes.push((0..g_cap).map(|_| rng.random_range(1..=k_cap)).collect());
        adjs.push(adj);
    }
    Instance {
        network: MultiplexNetwork::from_layers(adjs).unwrap(),
        groups,
        dishes,
        k_cap,
    }
}

// Naive oracles, written directly from the defining sums.

pub fn oracle_occupancy(items: &[usize], cap: usize) -> (Vec<usize>, Vec<usize>) {
    let counts = (1..=cap).map(|g| items.iter().filter(|&&x| x == g).count()).collect();
    let greater = (1..=cap).map(|g| items.iter().filter(|&&x| x > g).count()).collect();
    (counts, greater)
}

pub fn oracle_node_stats(adj: &Adjacency, z: &[usize], i: usize, k: usize) -> (Vec<u32>, Vec<u32>) {
    let mut tau = vec![0; k];
    let mut m = vec![0; k];
    for l in 1..=k {
        for j in 0..z.len() {
            if j != i && z[j] == l {
                m[l - 1] += 1;
                tau[l - 1] += adj.get(i, j) as u32;
            }
        }
    }
    (tau, m)
}

/// (ξ, O) over i < j, indexed [g-1][h-1].
pub fn oracle_group_pairs(adj: &Adjacency, g: &[usize], cap: usize) -> (Vec<Vec<u32>>, Vec<Vec<u32>>) {
    let mut xi = vec![vec![0; cap]; cap];
    let mut o = vec![vec![0; cap]; cap];
    for a in 1..=cap {
        for b in 1..=cap {
            for i in 0..g.len() {
                for j in 0..g.len() {
                    if i < j && g[i] == a && g[j] == b {
                        o[a - 1][b - 1] += 1;
                        xi[a - 1][b - 1] += adj.get(i, j) as u32;
                    }
                }
            }
        }
    }
    (xi, o)
}

/// (ζ_g·, R_g·) via ξ̃ = ξ + ξᵀ restricted to g' ≠ g.
pub fn oracle_block(adj: &Adjacency, g: &[usize], dishes: &[usize], grp: usize, k: usize) -> (Vec<u32>, Vec<u32>) {
    let mut zeta = vec![0; k];
    let mut r = vec![0; k];
    for i in 0..g.len() {
        for j in 0..g.len() {
            if i == j || g[i] != grp || g[j] == grp {
                continue;
            }
            let l = dishes[g[j] - 1];
            r[l - 1] += 1;
            zeta[l - 1] += adj.get(i, j) as u32;
        }
    }
    (zeta, r)
}

/// (λ, N): off-diagonal over ordered pairs i≠j with z_i=k, z_j=ℓ; diagonal
/// over i<j. Indexed [k-1][l-1], k ≤ l.
pub fn oracle_eta_stats(net: &MultiplexNetwork, z: &LabelMatrix, k: usize) -> (Vec<Vec<u64>>, Vec<Vec<u64>>) {
    let mut lambda = vec![vec![0; k]; k];
    let mut pairs = vec![vec![0; k]; k];
    for t in 0..net.num_layers() {
        let (adj, zt) = (net.layer(t), z.layer(t));
        for a in 1..=k {
            for b in a..=k {
                for i in 0..zt.len() {
                    for j in 0..zt.len() {
                        let counted = if a == b { i < j } else { i != j };
                        if counted && zt[i] == a && zt[j] == b {
                            pairs[a - 1][b - 1] += 1;
                            lambda[a - 1][b - 1] += adj.get(i, j) as u64;
                        }
                    }
                }
            }
        }
    }
    (lambda, pairs)
}

fn log_lik(p: f64, a: u8) -> f64 {
    if a == 1 {
        p.ln()
    } else {
        (1.0 - p).ln()
    }
}

fn sbm_log_lik(adj: &Adjacency, z: &[usize], eta: &SymMatrix<f64>) -> f64 {
    let mut s = 0.0;
    for i in 0..z.len() {
        for j in i + 1..z.len() {
            s += log_lik(*eta.get(z[i], z[j]), adj.get(i, j));
        }
    }
    s
}

fn log_indicator(ok: bool) -> f64 {
    if ok {
        0.0
    } else {
        f64::NEG_INFINITY
    }
}

/// Log of the augmented HSBM joint density, dropping factors that do not
/// involve g or k (stick densities, η prior).
pub fn hsbm_log_joint(net: &MultiplexNetwork, groups: &[Vec<usize>], dishes: &[Vec<usize>], s: &HsbmState) -> f64 {
    let pi = s.dish_sticks().weights();
    let mut total = 0.0;
    for t in 0..net.num_layers() {
        let gamma = s.group_sticks()[t].weights();
        let z: Vec<usize> = groups[t].iter().map(|&g| dishes[t][g - 1]).collect();
        total += sbm_log_lik(net.layer(t), &z, s.eta());
        for (i, &g) in groups[t].iter().enumerate() {
            total += log_indicator(s.u()[t][i] <= gamma[g - 1]);
        }
        for (g, &k) in dishes[t].iter().enumerate() {
            total += log_indicator(s.v()[t][g] <= pi[k - 1]);
        }
    }
    total
}

pub fn normalize(log_w: &[f64]) -> Vec<f64> {
    let max = log_w.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let w: Vec<f64> = log_w.iter().map(|&x| (x - max).exp()).collect();
    let sum: f64 = w.iter().sum();
    w.into_iter().map(|x| x / sum).collect()
}

/// Brute-force conditional of g_ti over 1..=G^cap_t from the full joint.
pub fn brute_group_conditional(net: &MultiplexNetwork, s: &HsbmState, t: usize, i: usize) -> Vec<f64> {
    let mut groups = s.groups().to_vec();
    let lw: Vec<f64> = (1..=s.g_cap(t))
        .map(|g| {
            groups[t][i] = g;
            hsbm_log_joint(net, &groups, s.dishes(), s)
        })
        .collect();
    normalize(&lw)
}

/// Brute-force conditional of k_tg over 1..=K^cap from the full joint.
pub fn brute_dish_conditional(net: &MultiplexNetwork, s: &HsbmState, t: usize, g: usize) -> Vec<f64> {
    let mut dishes = s.dishes().to_vec();
    let lw: Vec<f64> = (1..=s.k_cap())
        .map(|k| {
            dishes[t][g - 1] = k;
            hsbm_log_joint(net, s.groups(), &dishes, s)
        })
        .collect();
    normalize(&lw)
}

/// Spreads (index, log-weight) pairs over 1..=cap and normalizes.
pub fn dense_conditional(weights: &[(usize, f64)], cap: usize) -> Vec<f64> {
    let mut lw = vec![f64::NEG_INFINITY; cap];
    for &(j, w) in weights {
        lw[j - 1] = w;
    }
    normalize(&lw)
}

pub fn dpsbm_log_joint(adj: &Adjacency, z: &[usize], s: &DpsbmState) -> f64 {
    let gamma = s.sticks().weights();
    let mut total = sbm_log_lik(adj, z, s.eta());
    for (i, &l) in z.iter().enumerate() {
        total += log_indicator(s.u()[i] <= gamma[l - 1]);
    }
    total
}

pub fn brute_label_conditional(adj: &Adjacency, s: &DpsbmState, i: usize) -> Vec<f64> {
    let mut z = s.labels().to_vec();
    let lw: Vec<f64> = (1..=s.z_cap())
        .map(|l| {
            z[i] = l;
            dpsbm_log_joint(adj, &z, s)
        })
        .collect();
    normalize(&lw)
}

pub fn max_rel_error(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(&x, &y)| {
            if x == y {
                0.0
            } else {
                (x - y).abs() / x.abs().max(y.abs())
            }
        })
        .fold(0.0, f64::max)
}

pub fn total_variation(p: &[f64], counts: &[usize]) -> f64 {
    let n: usize = counts.iter().sum();
    0.5 * p
        .iter()
        .zip(counts)
        .map(|(&p, &c)| (p - c as f64 / n as f64).abs())
        .sum::<f64>()
}

/// Frozen HSBM state: T=2, n_t=4, caps 3 (groups and communities), with
/// slice variables small enough that several candidates are live.
pub fn frozen_hsbm(seed: u64) -> (MultiplexNetwork, HsbmState) {
    let mut rng = chain_rng(seed, 77);
    let net = MultiplexNetwork::from_layers(vec![
        Adjacency::from_edges(4, &[(0, 1), (1, 2), (2, 3)]),
        Adjacency::from_edges(4, &[(0, 2), (0, 3), (1, 3)]),
    ])
    .unwrap();
    // weights (0.45, 0.33, 0.165) and (0.4, 0.36, 0.168): residual below every slice variable
    let group_sticks = vec![
        StickState::from_fractions(vec![0.45, 0.6, 0.75], 5.0).unwrap(),
        StickState::from_fractions(vec![0.4, 0.6, 0.7], 5.0).unwrap(),
    ];
    let dish_sticks = StickState::from_fractions(vec![0.5, 0.5, 0.7], 5.0).unwrap();
    let groups = vec![vec![1, 2, 2, 3], vec![3, 1, 2, 1]];
    let dishes = vec![vec![1, 2, 3], vec![2, 3, 1]];
    let u = groups
        .iter()
        .zip(&group_sticks)
        .map(|(gt, s)| {
            let w = s.weights();
            gt.iter().map(|&g| rng.random_range(0.1..w[g - 1].min(0.2))).collect()
        })
        .collect();
    let pi = dish_sticks.weights();
    let v = dishes
        .iter()
        .map(|kt| kt.iter().map(|&k| rng.random_range(0.1..pi[k - 1].min(0.2))).collect())
        .collect();
    let eta = SymMatrix::from_fn(3, |_, _| rng.random_range(0.05..0.95));
    let state = HsbmState::from_parts(groups, dishes, u, v, group_sticks, dish_sticks, eta).unwrap();
    state.check_invariants().unwrap();
    (net, state)
}

/// Frozen DP-SBM state: n=4, cap 3.
pub fn frozen_dpsbm(seed: u64) -> (Adjacency, DpsbmState) {
    let mut rng = chain_rng(seed, 78);
    let adj = Adjacency::from_edges(4, &[(0, 1), (0, 2), (2, 3)]);
    let sticks = StickState::from_fractions(vec![0.4, 0.6, 0.75], 5.0).unwrap();
    let w = sticks.weights();
    let labels = vec![1, 3, 2, 1];
    let u = labels.iter().map(|&l| rng.random_range(0.1..w[l - 1].min(0.2))).collect();
    let eta = SymMatrix::from_fn(3, |_, _| rng.random_range(0.05..0.95));
    let state = DpsbmState::from_parts(labels, u, sticks, eta).unwrap();
    state.check_invariants().unwrap();
    (adj, state)
}

/// Single-layer planted partition: n = 150, three blocks of 50, η 0.8
/// within and 0.1 between.
pub fn planted_fixture(seed: u64) -> (MultiplexNetwork, LabelMatrix) {
    let truth: Vec<usize> = (0..150).map(|i| i / 50 + 1).collect();
    let eta: Vec<Vec<f64>> = (0..3)
        .map(|a| (0..3).map(|b| if a == b { 0.8 } else { 0.1 }).collect())
        .collect();
    let adj = sample_sbm_layer(&truth, &eta, &mut chain_rng(seed, 1)).unwrap();
    (
        MultiplexNetwork::from_layers(vec![adj]).unwrap(),
        LabelMatrix::new(vec![truth]).unwrap(),
    )
}

/// Compares every stats operation against its oracle on one random
/// instance; panics on the first mismatch.
pub fn check_stats_instance(seed: u64) {
    let inst = random_instance(&mut chain_rng(seed, 0));
    let k = inst.k_cap;
    let (lambda, pairs) = oracle_eta_stats(&inst.network, &inst.label_matrix(), k);
    let es = eta_stats(&inst.network, &inst.label_matrix(), k);
    for a in 1..=k {
        for b in a..=k {
            assert_eq!(*es.lambda.get(a, b), lambda[a - 1][b - 1], "λ seed {seed}");
            assert_eq!(*es.pairs.get(a, b), pairs[a - 1][b - 1], "N seed {seed}");
        }
    }
    let occ = dish_occupancy(&inst.dishes, k);
    let all: Vec<usize> = inst.dishes.iter().flatten().copied().collect();
    assert_eq!((occ.counts, occ.greater), oracle_occupancy(&all, k));

    for t in 0..inst.network.num_layers() {
        let adj = inst.network.layer(t);
        let (g, gc) = (&inst.groups[t], inst.g_cap(t));
        let occ = group_occupancy(g, gc);
        assert_eq!((occ.counts, occ.greater), oracle_occupancy(g, gc));

        let z = inst.labels(t);
        for i in 0..z.len() {
            let ns = node_stats(adj, &z, i, k);
            assert_eq!((ns.tau, ns.m), oracle_node_stats(adj, &z, i, k));
        }

        let gp = group_pair_stats(adj, g, gc);
        let (xi, o) = oracle_group_pairs(adj, g, gc);
        for a in 1..=gc {
            for b in 1..=gc {
                assert_eq!(gp.xi(a, b), xi[a - 1][b - 1]);
                assert_eq!(gp.o(a, b), o[a - 1][b - 1]);
                assert_eq!(gp.xi_tilde(a, b), xi[a - 1][b - 1] + xi[b - 1][a - 1]);
                assert_eq!(gp.o_tilde(a, b), o[a - 1][b - 1] + o[b - 1][a - 1]);
            }
        }
        for grp in 1..=gc {
            let bs = block_stats(&gp, &inst.dishes[t], grp, k);
            let (zeta, r) = oracle_block(adj, g, &inst.dishes[t], grp, k);
            assert_eq!((bs.zeta.clone(), bs.r.clone()), (zeta, r));
            // Σ_ℓ ζ_gℓ + ξ̃_gg equals the summed degree of the group's members
            let degree: u32 = (0..g.len())
                .filter(|&i| g[i] == grp)
                .map(|i| adj.row(i).iter().map(|&x| x as u32).sum::<u32>())
                .sum();
            assert_eq!(bs.zeta.iter().sum::<u32>() + gp.xi_tilde(grp, grp), degree);
        }
    }
}
