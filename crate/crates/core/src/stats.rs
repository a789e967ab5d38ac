//! Integer sufficient statistics for the conditional updates.
//!
//! Node positions are 0-based; group and community identifiers are 1-based
//! and every per-identifier vector is indexed by `id - 1`. Statistics are
//! sized by the `*_active` arguments; identifiers past that bound are
//! treated as absent.

use crate::network::{Adjacency, LabelMatrix, MultiplexNetwork, SymMatrix};

/// n_g and n_{>g} for g = 1..cap.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Occupancy {
    pub counts: Vec<usize>,
    pub greater: Vec<usize>,
}

fn occupancy<'a>(ids: impl Iterator<Item = &'a usize>, cap: usize) -> Occupancy {
    let mut counts = vec![0; cap];
    for &id in ids {
        if id >= 1 && id <= cap {
            counts[id - 1] += 1;
        }
    }
    let mut greater = vec![0; cap];
    let mut above = 0;
    for g in (0..cap).rev() {
        greater[g] = above;
        above += counts[g];
    }
    Occupancy { counts, greater }
}

/// Table occupancy of one layer's group vector.
pub fn group_occupancy(groups: &[usize], cap: usize) -> Occupancy {
    occupancy(groups.iter(), cap)
}

/// Dish occupancy over every represented (layer, group) pair.
pub fn dish_occupancy(dishes: &[Vec<usize>], cap: usize) -> Occupancy {
    occupancy(dishes.iter().flatten(), cap)
}

/// τ_iℓ (edges from i into community ℓ) and m_iℓ (nodes other than i in ℓ).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NodeStats {
    pub tau: Vec<u32>,
    pub m: Vec<u32>,
}

pub fn node_stats(adj: &Adjacency, labels: &[usize], i: usize, k_active: usize) -> NodeStats {
    let mut tau = vec![0u32; k_active];
    let mut m = vec![0u32; k_active];
    let row = adj.row(i);
    for (j, (&a, &l)) in row.iter().zip(labels).enumerate() {
        if j == i || l == 0 || l > k_active {
            continue;
        }
        m[l - 1] += 1;
        tau[l - 1] += a as u32;
    }
    NodeStats { tau, m }
}

/// Group-pair counts within one layer.
///
/// `xi`/`o` count pairs i < j with (g_i, g_j) = (g, g'); the tilde versions
/// count ordered pairs i ≠ j, so `xi_tilde(g, g') = xi(g, g') + xi(g', g)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupPairStats {
    g_active: usize,
    xi: Vec<u32>,
    o: Vec<u32>,
}

impl GroupPairStats {
    pub fn g_active(&self) -> usize {
        self.g_active
    }

    #[inline]
    fn at(&self, g: usize, h: usize) -> usize {
        (g - 1) * self.g_active + (h - 1)
    }

    pub fn xi(&self, g: usize, h: usize) -> u32 {
        self.xi[self.at(g, h)]
    }

    pub fn o(&self, g: usize, h: usize) -> u32 {
        self.o[self.at(g, h)]
    }

    pub fn xi_tilde(&self, g: usize, h: usize) -> u32 {
        self.xi(g, h) + self.xi(h, g)
    }

    pub fn o_tilde(&self, g: usize, h: usize) -> u32 {
        self.o(g, h) + self.o(h, g)
    }
}

pub fn group_pair_stats(adj: &Adjacency, groups: &[usize], g_active: usize) -> GroupPairStats {
    let mut stats = GroupPairStats {
        g_active,
        xi: vec![0; g_active * g_active],
        o: vec![0; g_active * g_active],
    };
    let n = groups.len();
    for i in 0..n {
        let gi = groups[i];
        if gi == 0 || gi > g_active {
            continue;
        }
        let row = adj.row(i);
        for j in i + 1..n {
            let gj = groups[j];
            if gj == 0 || gj > g_active {
                continue;
            }
            let idx = stats.at(gi, gj);
            stats.o[idx] += 1;
            stats.xi[idx] += row[j] as u32;
        }
    }
    stats
}

/// ζ_gℓ and R_gℓ: edges / pairs between group g and the other groups
/// serving community ℓ.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BlockStats {
    pub zeta: Vec<u32>,
    pub r: Vec<u32>,
}

pub fn block_stats(
    pairs: &GroupPairStats,
    dishes: &[usize],
    g: usize,
    k_active: usize,
) -> BlockStats {
    let mut zeta = vec![0; k_active];
    let mut r = vec![0; k_active];
    for h in 1..=pairs.g_active() {
        if h == g {
            continue;
        }
        let l = dishes[h - 1];
        if l == 0 || l > k_active {
            continue;
        }
        zeta[l - 1] += pairs.xi_tilde(g, h);
        r[l - 1] += pairs.o_tilde(g, h);
    }
    BlockStats { zeta, r }
}

/// Edge counts λ_kℓ and pair counts N_kℓ pooled over layers.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EtaStats {
    pub lambda: SymMatrix<u64>,
    pub pairs: SymMatrix<u64>,
}

impl EtaStats {
    pub fn zeros(k_active: usize) -> Self {
        EtaStats {
            lambda: SymMatrix::filled(k_active, 0),
            pairs: SymMatrix::filled(k_active, 0),
        }
    }

    /// Adds one layer's counts.
    pub fn accumulate(&mut self, adj: &Adjacency, labels: &[usize]) {
        let k_active = self.lambda.dim();
        let mut sizes = vec![0u64; k_active];
        for &l in labels {
            if l >= 1 && l <= k_active {
                sizes[l - 1] += 1;
            }
        }
        for k in 1..=k_active {
            let ck = sizes[k - 1];
            *self.pairs.get_mut(k, k) += ck * ck.saturating_sub(1) / 2;
            for l in k + 1..=k_active {
                *self.pairs.get_mut(k, l) += ck * sizes[l - 1];
            }
        }
        for (i, j) in adj.edges() {
            let (a, b) = (labels[i], labels[j]);
            if a >= 1 && a <= k_active && b >= 1 && b <= k_active {
                *self.lambda.get_mut(a, b) += 1;
            }
        }
    }
}

pub fn eta_stats(network: &MultiplexNetwork, labels: &LabelMatrix, k_active: usize) -> EtaStats {
    let mut stats = EtaStats::zeros(k_active);
    for (adj, z) in network.layers().iter().zip(labels.layers()) {
        stats.accumulate(adj, z);
    }
    stats
}

#[cfg(test)]
mod tests {
    use super::*;

    // n = 3, single edge {1, 2}, g = (1, 1, 2), k = (1, 2) so z = (1, 1, 2)
    fn fixture() -> (Adjacency, Vec<usize>, Vec<usize>, Vec<usize>) {
        (
            Adjacency::from_edges(3, &[(0, 1)]),
            vec![1, 1, 2],
            vec![1, 2],
            vec![1, 1, 2],
        )
    }

    #[test]
    fn group_occupancy_examples() {
        let o = group_occupancy(&[1, 1, 2, 3, 3], 4);
        assert_eq!(o.counts, vec![2, 1, 2, 0]);
        assert_eq!(o.greater, vec![3, 2, 0, 0]);
        let o = group_occupancy(&[1, 1, 1], 2);
        assert_eq!((o.counts, o.greater), (vec![3, 0], vec![0, 0]));
        let (_, g, _, _) = fixture();
        let o = group_occupancy(&g, 2);
        assert_eq!((o.counts, o.greater), (vec![2, 1], vec![1, 0]));
    }

    #[test]
    fn dish_occupancy_examples() {
        let o = dish_occupancy(&[vec![1, 2]], 2);
        assert_eq!((o.counts, o.greater), (vec![1, 1], vec![1, 0]));
        let o = dish_occupancy(&[vec![1, 1], vec![1]], 2);
        assert_eq!((o.counts, o.greater), (vec![3, 0], vec![0, 0]));
        let o = dish_occupancy(&[vec![2, 3], vec![3]], 3);
        assert_eq!((o.counts, o.greater), (vec![0, 1, 2], vec![3, 2, 0]));
    }

    #[test]
    fn node_stats_fixture() {
        let (a, _, _, z) = fixture();
        let s = node_stats(&a, &z, 0, 2);
        assert_eq!((s.tau, s.m), (vec![1, 0], vec![1, 1]));
        let s = node_stats(&a, &z, 2, 2);
        assert_eq!((s.tau, s.m), (vec![0, 0], vec![2, 0]));
        let s = node_stats(&Adjacency::empty(4), &[1, 2, 2, 3], 1, 3);
        assert_eq!((s.tau, s.m), (vec![0, 0, 0], vec![1, 1, 1]));
    }

    #[test]
    fn group_pair_fixture() {
        let (a, g, _, _) = fixture();
        let p = group_pair_stats(&a, &g, 2);
        assert_eq!((p.xi(1, 1), p.o(1, 1)), (1, 1));
        assert_eq!((p.xi(1, 2), p.o(1, 2)), (0, 2));
        assert_eq!((p.xi_tilde(1, 2), p.o_tilde(1, 2)), (0, 2));
        let p = group_pair_stats(&Adjacency::complete(3), &[1, 1, 1], 1);
        assert_eq!((p.xi(1, 1), p.o(1, 1)), (3, 3));
    }

    #[test]
    fn block_stats_fixture() {
        let (a, g, k, _) = fixture();
        let p = group_pair_stats(&a, &g, 2);
        let b = block_stats(&p, &k, 1, 2);
        assert_eq!((b.zeta, b.r), (vec![0, 0], vec![0, 2]));
        let b = block_stats(&p, &k, 2, 2);
        assert_eq!((b.zeta, b.r), (vec![0, 0], vec![2, 0]));
        let p = group_pair_stats(&Adjacency::complete(3), &[1, 1, 1], 1);
        let b = block_stats(&p, &[1], 1, 1);
        assert_eq!((b.zeta, b.r), (vec![0], vec![0]));
    }

    #[test]
    fn eta_stats_fixture() {
        let (a, _, _, z) = fixture();
        let net = MultiplexNetwork::from_layers(vec![a]).unwrap();
        let s = eta_stats(&net, &LabelMatrix::new(vec![z]).unwrap(), 2);
        assert_eq!((*s.lambda.get(1, 1), *s.pairs.get(1, 1)), (1, 1));
        assert_eq!((*s.lambda.get(1, 2), *s.pairs.get(1, 2)), (0, 2));

        let net = MultiplexNetwork::from_layers(vec![Adjacency::empty(3)]).unwrap();
        let s = eta_stats(&net, &LabelMatrix::new(vec![vec![1, 2, 3]]).unwrap(), 3);
        assert!(s.lambda.values().iter().all(|&x| x == 0));
        for (k, l, &n) in s.pairs.upper_entries() {
            assert_eq!(n, if k == l { 0 } else { 1 });
        }
    }
}
