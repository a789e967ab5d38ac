//! Multiplex networks, label matrices and symmetric community matrices.
//!
//! Node, group and community indices exposed through labels are 1-based.
//! Matrix accessors (`Adjacency::get`) take 0-based node positions.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Symmetric binary adjacency matrix with a zero diagonal.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Adjacency {
    n: usize,
    cells: Vec<u8>,
}

impl Adjacency {
    pub fn empty(n: usize) -> Self {
        Adjacency {
            n,
            cells: vec![0; n * n],
        }
    }

    pub fn complete(n: usize) -> Self {
        let mut a = Self::empty(n);
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    a.cells[i * n + j] = 1;
                }
            }
        }
        a
    }

    /// Builds from a list of 0-based undirected edges. Self-loops are ignored.
    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Self {
        let mut a = Self::empty(n);
        for &(i, j) in edges {
            a.set_edge(i, j, true);
        }
        a
    }

    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> u8 {
        self.cells[i * self.n + j]
    }

    #[inline]
    pub fn row(&self, i: usize) -> &[u8] {
        &self.cells[i * self.n..(i + 1) * self.n]
    }

    /// Sets or clears the undirected edge {i, j}; the diagonal is left untouched.
    pub fn set_edge(&mut self, i: usize, j: usize, present: bool) {
        if i == j {
            return;
        }
        let v = present as u8;
        self.cells[i * self.n + j] = v;
        self.cells[j * self.n + i] = v;
    }

    pub fn edge_count(&self) -> usize {
        self.edges().count()
    }

    /// Edges as 0-based pairs with i < j, in row-major order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.n).flat_map(move |i| {
            (i + 1..self.n).filter_map(move |j| (self.get(i, j) == 1).then_some((i, j)))
        })
    }

    pub fn to_rows(&self) -> Vec<Vec<i64>> {
        (0..self.n)
            .map(|i| self.row(i).iter().map(|&x| x as i64).collect())
            .collect()
    }
}

/// T layers of undirected binary networks.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MultiplexNetwork {
    layers: Vec<Adjacency>,
}

impl MultiplexNetwork {
    /// Wraps already-valid adjacency matrices.
    pub fn from_layers(layers: Vec<Adjacency>) -> Result<Self> {
        if layers.is_empty() {
            return Err(Error::NoLayers);
        }
        for (t, a) in layers.iter().enumerate() {
            if a.n() == 0 {
                return Err(Error::EmptyLayer { layer: t + 1 });
            }
        }
        Ok(MultiplexNetwork { layers })
    }

    pub fn num_layers(&self) -> usize {
        self.layers.len()
    }

    pub fn layers(&self) -> &[Adjacency] {
        &self.layers
    }

    pub fn layer(&self, t: usize) -> &Adjacency {
        &self.layers[t]
    }

    pub fn node_counts(&self) -> Vec<usize> {
        self.layers.iter().map(Adjacency::n).collect()
    }

    pub fn total_nodes(&self) -> usize {
        self.layers.iter().map(Adjacency::n).sum()
    }
}

/// Validates a raw candidate tensor (one square integer matrix per layer).
///
/// The diagonal is zeroed and each layer is symmetrized by OR-ing (i, j)
/// with (j, i). Entries must be 0 or 1.
pub fn validate_network(raw: &[Vec<Vec<i64>>]) -> Result<MultiplexNetwork> {
    if raw.is_empty() {
        return Err(Error::NoLayers);
    }
    let mut layers = Vec::with_capacity(raw.len());
    for (t, m) in raw.iter().enumerate() {
        let n = m.len();
        if n == 0 {
            return Err(Error::EmptyLayer { layer: t + 1 });
        }
        for (row, r) in m.iter().enumerate() {
            if r.len() != n {
                return Err(Error::NonSquare {
                    layer: t + 1,
                    rows: n,
                    row: row + 1,
                    cols: r.len(),
                });
            }
        }
        let mut a = Adjacency::empty(n);
        for i in 0..n {
            for j in 0..n {
                let value = m[i][j];
                if value != 0 && value != 1 {
                    return Err(Error::NonBinary {
                        layer: t + 1,
                        i: i + 1,
                        j: j + 1,
                        value,
                    });
                }
                if value == 1 && i != j {
                    a.set_edge(i, j, true);
                }
            }
        }
        layers.push(a);
    }
    MultiplexNetwork::from_layers(layers)
}

/// Per-layer community labels, 1-based.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct LabelMatrix {
    layers: Vec<Vec<usize>>,
}

impl LabelMatrix {
    pub fn new(layers: Vec<Vec<usize>>) -> Result<Self> {
        for (t, z) in layers.iter().enumerate() {
            if let Some(node) = z.iter().position(|&l| l == 0) {
                return Err(Error::InvalidLabel {
                    layer: t + 1,
                    node: node + 1,
                    label: 0,
                });
            }
        }
        Ok(LabelMatrix { layers })
    }

    pub fn layers(&self) -> &[Vec<usize>] {
        &self.layers
    }

    pub fn layer(&self, t: usize) -> &[usize] {
        &self.layers[t]
    }

    pub fn num_layers(&self) -> usize {
        self.layers.len()
    }

    pub fn shape(&self) -> Vec<usize> {
        self.layers.iter().map(Vec::len).collect()
    }

    /// All labels in (layer, node) order.
    pub fn flatten(&self) -> Vec<usize> {
        self.layers.iter().flatten().copied().collect()
    }

    pub fn max_label(&self) -> usize {
        self.layers.iter().flatten().copied().max().unwrap_or(0)
    }

    /// Number of distinct labels in layer `t` (K_t).
    pub fn community_count(&self, t: usize) -> usize {
        let mut z = self.layers[t].clone();
        z.sort_unstable();
        z.dedup();
        z.len()
    }

    pub fn check_shape(&self, network: &MultiplexNetwork) -> Result<()> {
        if self.shape() != network.node_counts() {
            return Err(Error::ShapeMismatch(format!(
                "labels have shape {:?}, network has {:?}",
                self.shape(),
                network.node_counts()
            )));
        }
        Ok(())
    }

    /// Relabels to 1..K using one mapping shared by all layers, ordered by
    /// the original label value, so cross-layer identity is preserved.
    pub fn compact(&self) -> LabelMatrix {
        let mut used: Vec<usize> = self.flatten();
        used.sort_unstable();
        used.dedup();
        let layers = self
            .layers
            .iter()
            .map(|z| {
                z.iter()
                    .map(|l| used.binary_search(l).expect("label present") + 1)
                    .collect()
            })
            .collect();
        LabelMatrix { layers }
    }
}

/// Symmetric matrix over community pairs, storing only the upper triangle.
/// Indices are 1-based community labels.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SymMatrix<T> {
    dim: usize,
    upper: Vec<T>,
}

impl<T: Clone> SymMatrix<T> {
    pub fn filled(dim: usize, value: T) -> Self {
        SymMatrix {
            dim,
            upper: vec![value; dim * (dim + 1) / 2],
        }
    }

    /// Builds from a closure evaluated on each unordered pair k ≤ l.
    pub fn from_fn(dim: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let mut upper = Vec::with_capacity(dim * (dim + 1) / 2);
        for k in 1..=dim {
            for l in k..=dim {
                upper.push(f(k, l));
            }
        }
        SymMatrix { dim, upper }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    fn offset(&self, k: usize, l: usize) -> usize {
        let (a, b) = if k <= l { (k - 1, l - 1) } else { (l - 1, k - 1) };
        debug_assert!(b < self.dim, "index ({k}, {l}) outside dim {}", self.dim);
        a * self.dim - a * (a + 1) / 2 + b
    }

    #[inline]
    pub fn get(&self, k: usize, l: usize) -> &T {
        &self.upper[self.offset(k, l)]
    }

    #[inline]
    pub fn get_mut(&mut self, k: usize, l: usize) -> &mut T {
        let o = self.offset(k, l);
        &mut self.upper[o]
    }

    /// Grows the matrix, filling new entries from `f(k, l)`. Existing
    /// entries are kept.
    pub fn grow_with(&mut self, new_dim: usize, mut f: impl FnMut(usize, usize) -> T) {
        if new_dim <= self.dim {
            return;
        }
        let old = std::mem::replace(self, SymMatrix::from_fn(0, |_, _| unreachable!()));
        *self = SymMatrix::from_fn(new_dim, |k, l| {
            if l <= old.dim {
                old.get(k, l).clone()
            } else {
                f(k, l)
            }
        });
    }

    /// Entries (k, l, value) over k ≤ l.
    pub fn upper_entries(&self) -> impl Iterator<Item = (usize, usize, &T)> + '_ {
        let dim = self.dim;
        (1..=dim)
            .flat_map(move |k| (k..=dim).map(move |l| (k, l)))
            .zip(self.upper.iter())
            .map(|((k, l), v)| (k, l, v))
    }

    pub fn values(&self) -> &[T] {
        &self.upper
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn valid_layer_is_unchanged() {
        let raw = vec![vec![vec![0, 1], vec![1, 0]]];
        let net = validate_network(&raw).unwrap();
        assert_eq!(net.layer(0).to_rows(), raw[0]);
    }

    #[test]
    fn diagonal_zeroed_and_or_symmetrized() {
        let raw = vec![vec![vec![1, 1], vec![0, 0]]];
        let net = validate_network(&raw).unwrap();
        assert_eq!(net.layer(0).to_rows(), vec![vec![0, 1], vec![1, 0]]);
    }

    #[test]
    fn non_binary_rejected() {
        let raw = vec![vec![vec![0, 2], vec![2, 0]]];
        let err = validate_network(&raw).unwrap_err();
        assert!(matches!(err, Error::NonBinary { value: 2, .. }));
        assert!(err.to_string().contains("non-binary"));
    }

    #[test]
    fn non_square_and_empty_rejected() {
        assert!(matches!(validate_network(&[]), Err(Error::NoLayers)));
        let raw = vec![vec![vec![0, 1], vec![1]]];
        assert!(matches!(validate_network(&raw), Err(Error::NonSquare { .. })));
    }

    #[test]
    fn validation_is_idempotent() {
        let raw = vec![
            vec![vec![1, 0, 1], vec![1, 0, 0], vec![0, 1, 1]],
            vec![vec![0, 0], vec![1, 1]],
        ];
        let once = validate_network(&raw).unwrap();
        let again: Vec<_> = once.layers().iter().map(Adjacency::to_rows).collect();
        assert_eq!(validate_network(&again).unwrap(), once);
    }

    #[test]
    fn sym_matrix_indexing_and_growth() {
        let mut m = SymMatrix::from_fn(3, |k, l| 10 * k + l);
        assert_eq!(*m.get(2, 3), 23);
        assert_eq!(*m.get(3, 2), 23);
        assert_eq!(*m.get(3, 3), 33);
        m.grow_with(4, |_, _| 0);
        assert_eq!(m.dim(), 4);
        assert_eq!(*m.get(1, 3), 13);
        assert_eq!(*m.get(4, 2), 0);
        assert_eq!(m.upper_entries().count(), 10);
    }

    #[test]
    fn compact_is_shared_across_layers() {
        let z = LabelMatrix::new(vec![vec![3, 7, 3], vec![7, 9]]).unwrap();
        let c = z.compact();
        assert_eq!(c.layers(), &[vec![1, 2, 1], vec![2, 3]]);
        assert_eq!(z.community_count(0), 2);
    }
}
