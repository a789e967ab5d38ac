//! Text formats: manifests, edge lists, truth labels and result CSVs.
//!
//! Edge list: one undirected edge per line, `t i j`, whitespace separated,
//! 1-based. Truth labels: `t i z` lines. Manifest: `key = value` lines with
//! keys `layers`, `nodes` (space-separated counts), `edges` and optionally
//! `truth`; paths are relative to the manifest's directory. Blank lines and
//! lines starting with `#` are ignored everywhere.

use std::fs;
use std::path::{Path, PathBuf};

use log::warn;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::metrics::posterior_nmi_trace;
use crate::network::{Adjacency, LabelMatrix, MultiplexNetwork};
use crate::trace::{ChainTrace, SummaryReport};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NetworkManifest {
    pub layers: usize,
    pub node_counts: Vec<usize>,
    pub edges: PathBuf,
    pub truth: Option<PathBuf>,
}

fn read_text(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::io(path, e))
}

fn write_text(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).map_err(|e| Error::io(path, e))
}

/// Non-comment lines with their 1-based line numbers.
fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(n, l)| (n + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
}

impl NetworkManifest {
    pub fn read(path: &Path) -> Result<Self> {
        let text = read_text(path)?;
        let base = path.parent().unwrap_or(Path::new(""));
        let (mut layers, mut nodes, mut edges, mut truth) = (None, None, None, None);
        for (line, l) in content_lines(&text) {
            let (key, value) = l
                .split_once('=')
                .map(|(k, v)| (k.trim(), v.trim()))
                .ok_or_else(|| Error::parse(path, line, "expected `key = value`"))?;
            match key {
                "layers" => {
                    layers = Some(
                        value
                            .parse::<usize>()
                            .map_err(|_| Error::parse(path, line, "layers must be an integer"))?,
                    )
                }
                "nodes" => {
                    nodes = Some(
                        value
                            .split_whitespace()
                            .map(str::parse::<usize>)
                            .collect::<std::result::Result<Vec<_>, _>>()
                            .map_err(|_| Error::parse(path, line, "nodes must be integers"))?,
                    )
                }
                "edges" => edges = Some(base.join(value)),
                "truth" => truth = Some(base.join(value)),
                other => return Err(Error::parse(path, line, format!("unknown key `{other}`"))),
            }
        }
        let missing = |k: &str| Error::parse(path, 0, format!("missing key `{k}`"));
        let manifest = NetworkManifest {
            layers: layers.ok_or_else(|| missing("layers"))?,
            node_counts: nodes.ok_or_else(|| missing("nodes"))?,
            edges: edges.ok_or_else(|| missing("edges"))?,
            truth,
        };
        manifest.check().map_err(|msg| Error::parse(path, 0, msg))?;
        Ok(manifest)
    }

    fn check(&self) -> std::result::Result<(), String> {
        if self.layers == 0 {
            return Err("layers must be positive".into());
        }
        if self.node_counts.len() != self.layers {
            return Err(format!(
                "{} node counts listed for {} layers",
                self.node_counts.len(),
                self.layers
            ));
        }
        if self.node_counts.contains(&0) {
            return Err("node counts must be positive".into());
        }
        Ok(())
    }

    /// Writes the manifest with `edges`/`truth` stored relative to its directory
    /// when possible.
    pub fn write(&self, path: &Path) -> Result<()> {
        let base = path.parent().unwrap_or(Path::new(""));
        let rel = |p: &Path| {
            p.strip_prefix(base)
                .unwrap_or(p)
                .to_string_lossy()
                .into_owned()
        };
        let nodes: Vec<String> = self.node_counts.iter().map(ToString::to_string).collect();
        let mut text = format!(
            "layers = {}\nnodes = {}\nedges = {}\n",
            self.layers,
            nodes.join(" "),
            rel(&self.edges)
        );
        if let Some(t) = &self.truth {
            text.push_str(&format!("truth = {}\n", rel(t)));
        }
        write_text(path, &text)
    }
}

fn parse_triples(path: &Path) -> Result<Vec<(usize, [usize; 3])>> {
    let text = read_text(path)?;
    content_lines(&text)
        .map(|(line, l)| {
            let fields: Vec<&str> = l.split_whitespace().collect();
            if fields.len() != 3 {
                return Err(Error::parse(path, line, "malformed line: expected three integers"));
            }
            let mut out = [0usize; 3];
            for (o, f) in out.iter_mut().zip(&fields) {
                *o = f.parse().map_err(|_| {
                    Error::parse(path, line, format!("malformed line: `{f}` is not a positive integer"))
                })?;
            }
            Ok((line, out))
        })
        .collect()
}

fn check_position(
    path: &Path,
    line: usize,
    node_counts: &[usize],
    t: usize,
    ids: &[usize],
) -> Result<()> {
    if t == 0 || t > node_counts.len() {
        return Err(Error::parse(
            path,
            line,
            format!("layer index {t} out of range (1..={})", node_counts.len()),
        ));
    }
    for &i in ids {
        if i == 0 || i > node_counts[t - 1] {
            return Err(Error::parse(
                path,
                line,
                format!("node id out of range: {i} (layer {t} has {} nodes)", node_counts[t - 1]),
            ));
        }
    }
    Ok(())
}

/// Reads an edge list for the given layer sizes. Self-loops are dropped
/// with a warning; duplicate edges are merged.
pub fn read_edge_list(path: &Path, node_counts: &[usize]) -> Result<MultiplexNetwork> {
    let mut layers: Vec<Adjacency> = node_counts.iter().map(|&n| Adjacency::empty(n)).collect();
    for (line, [t, i, j]) in parse_triples(path)? {
        check_position(path, line, node_counts, t, &[i, j])?;
        if i == j {
            warn!("{}:{line}: dropping self-loop on node {i} in layer {t}", path.display());
            continue;
        }
        layers[t - 1].set_edge(i - 1, j - 1, true);
    }
    MultiplexNetwork::from_layers(layers)
}

pub fn write_edge_list(network: &MultiplexNetwork, path: &Path) -> Result<()> {
    let mut text = String::new();
    for (t, adj) in network.layers().iter().enumerate() {
        for (i, j) in adj.edges() {
            text.push_str(&format!("{} {} {}\n", t + 1, i + 1, j + 1));
        }
    }
    write_text(path, &text)
}

/// Reads `t i z` truth lines; every node must be labelled exactly once.
pub fn read_labels(path: &Path, node_counts: &[usize]) -> Result<LabelMatrix> {
    let mut layers: Vec<Vec<usize>> = node_counts.iter().map(|&n| vec![0; n]).collect();
    for (line, [t, i, z]) in parse_triples(path)? {
        check_position(path, line, node_counts, t, &[i])?;
        if z == 0 {
            return Err(Error::parse(path, line, "labels must be positive"));
        }
        if layers[t - 1][i - 1] != 0 {
            return Err(Error::parse(path, line, format!("node {i} of layer {t} labelled twice")));
        }
        layers[t - 1][i - 1] = z;
    }
    for (t, z) in layers.iter().enumerate() {
        if let Some(i) = z.iter().position(|&l| l == 0) {
            return Err(Error::parse(path, 0, format!("node {} of layer {} has no label", i + 1, t + 1)));
        }
    }
    LabelMatrix::new(layers)
}

pub fn write_labels(labels: &LabelMatrix, path: &Path) -> Result<()> {
    let mut text = String::new();
    for (t, z) in labels.layers().iter().enumerate() {
        for (i, l) in z.iter().enumerate() {
            text.push_str(&format!("{} {} {}\n", t + 1, i + 1, l));
        }
    }
    write_text(path, &text)
}

pub fn load_multiplex(manifest: &NetworkManifest) -> Result<(MultiplexNetwork, Option<LabelMatrix>)> {
    manifest
        .check()
        .map_err(|msg| Error::InvalidScenario(format!("manifest: {msg}")))?;
    let network = read_edge_list(&manifest.edges, &manifest.node_counts)?;
    let truth = manifest
        .truth
        .as_deref()
        .map(|p| read_labels(p, &manifest.node_counts))
        .transpose()?;
    Ok((network, truth))
}

/// Writes network, truth and manifest (`manifest.txt`, `edges.txt`,
/// `truth.txt`) into `dir`.
pub fn save_network(network: &MultiplexNetwork, truth: Option<&LabelMatrix>, dir: &Path) -> Result<NetworkManifest> {
    fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    let manifest = NetworkManifest {
        layers: network.num_layers(),
        node_counts: network.node_counts(),
        edges: dir.join("edges.txt"),
        truth: truth.map(|_| dir.join("truth.txt")),
    };
    write_edge_list(network, &manifest.edges)?;
    if let (Some(z), Some(p)) = (truth, &manifest.truth) {
        write_labels(z, p)?;
    }
    manifest.write(&dir.join("manifest.txt"))?;
    Ok(manifest)
}

fn csv_writer(path: &Path) -> Result<csv::Writer<fs::File>> {
    csv::Writer::from_path(path).map_err(|e| csv_error(path, e))
}

fn csv_error(path: &Path, e: csv::Error) -> Error {
    match e.into_kind() {
        csv::ErrorKind::Io(io) => Error::io(path, io),
        other => Error::parse(path, 0, format!("{other:?}")),
    }
}

fn write_rows<I, R>(path: &Path, header: &[&str], rows: I) -> Result<()>
where
    I: IntoIterator<Item = R>,
    R: IntoIterator,
    R::Item: AsRef<[u8]>,
{
    let mut w = csv_writer(path)?;
    w.write_record(header).map_err(|e| csv_error(path, e))?;
    for r in rows {
        w.write_record(r).map_err(|e| csv_error(path, e))?;
    }
    w.flush().map_err(|e| Error::io(path, e))
}

/// Reads MAP labels back from a `labels_map.csv` file.
pub fn read_map_csv(path: &Path) -> Result<LabelMatrix> {
    let mut r = csv::Reader::from_path(path).map_err(|e| csv_error(path, e))?;
    let mut layers: Vec<Vec<usize>> = Vec::new();
    for (n, rec) in r.records().enumerate() {
        let rec = rec.map_err(|e| csv_error(path, e))?;
        let line = n + 2;
        let field = |k: usize| -> Result<usize> {
            rec.get(k)
                .and_then(|s| s.parse().ok())
                .ok_or_else(|| Error::parse(path, line, "expected layer,node,label,confidence"))
        };
        let (t, i, z) = (field(0)?, field(1)?, field(2)?);
        if t == 0 || i == 0 {
            return Err(Error::parse(path, line, "layer and node are 1-based"));
        }
        if layers.len() < t {
            layers.resize(t, Vec::new());
        }
        if layers[t - 1].len() != i - 1 {
            return Err(Error::parse(path, line, "rows must list nodes in order"));
        }
        layers[t - 1].push(z);
    }
    LabelMatrix::new(layers)
}

/// Writes the standard result files for one fitted run into `out_dir`:
/// `labels_map.csv`, `eta_mean.csv`, `trace_labels.csv`, `run_meta.json`,
/// and, when the report carries NMI scores, `nmi.csv` and
/// `posterior_nmi.csv`.
pub fn save_results<M: Serialize>(
    trace: &ChainTrace,
    report: &SummaryReport,
    truth: Option<&LabelMatrix>,
    meta: &M,
    out_dir: &Path,
) -> Result<Vec<PathBuf>> {
    fs::create_dir_all(out_dir).map_err(|e| Error::io(out_dir, e))?;
    let mut written = Vec::new();

    let path = out_dir.join("labels_map.csv");
    let rows = report
        .map_labels
        .layers()
        .iter()
        .zip(&report.confidence)
        .enumerate()
        .flat_map(|(t, (z, c))| {
            z.iter().zip(c).enumerate().map(move |(i, (l, p))| {
                [(t + 1).to_string(), (i + 1).to_string(), l.to_string(), p.to_string()]
            })
        });
    write_rows(&path, &["layer", "node", "label", "confidence"], rows)?;
    written.push(path);

    let path = out_dir.join("eta_mean.csv");
    let shared = report.eta_mean.len() == 1;
    let rows = report.eta_mean.iter().enumerate().flat_map(|(e, m)| {
        let scope = if shared { "shared".to_string() } else { format!("layer{}", e + 1) };
        m.upper_entries()
            .map(move |(k, l, v)| [scope.clone(), k.to_string(), l.to_string(), v.to_string()])
    });
    write_rows(&path, &["scope", "k", "l", "eta"], rows)?;
    written.push(path);

    let path = out_dir.join("trace_labels.csv");
    let rows = trace.iterations.iter().zip(&trace.labels).flat_map(|(it, z)| {
        z.layers().iter().enumerate().flat_map(move |(t, zt)| {
            zt.iter().enumerate().map(move |(i, l)| {
                [it.to_string(), (t + 1).to_string(), (i + 1).to_string(), l.to_string()]
            })
        })
    });
    write_rows(&path, &["iteration", "layer", "node", "label"], rows)?;
    written.push(path);

    if let Some(nmi) = &report.nmi {
        let path = out_dir.join("nmi.csv");
        let mut rows: Vec<[String; 2]> = nmi
            .slicewise
            .iter()
            .enumerate()
            .map(|(t, v)| [format!("layer{}", t + 1), v.to_string()])
            .collect();
        rows.push(["avg_slicewise".into(), nmi.avg_slicewise.to_string()]);
        rows.push(["aggregate".into(), nmi.aggregate.to_string()]);
        write_rows(&path, &["scope", "nmi"], rows)?;
        written.push(path);
    }
    if let Some(truth) = truth {
        let path = out_dir.join("posterior_nmi.csv");
        let reports = posterior_nmi_trace(trace, truth)?;
        let rows = trace.iterations.iter().zip(&reports).map(|(it, r)| {
            let slices: Vec<String> = r.slicewise.iter().map(ToString::to_string).collect();
            [
                it.to_string(),
                r.avg_slicewise.to_string(),
                r.aggregate.to_string(),
                slices.join(";"),
            ]
        });
        write_rows(&path, &["iteration", "avg_slicewise", "aggregate", "slicewise"], rows)?;
        written.push(path);
    }

    let path = out_dir.join("run_meta.json");
    let mut json = serde_json::to_string_pretty(meta)
        .map_err(|e| Error::parse(&path, 0, e.to_string()))?;
    json.push('\n');
    write_text(&path, &json)?;
    written.push(path);
    Ok(written)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn setup(edges: &str, nodes: &[usize]) -> (tempfile::TempDir, NetworkManifest) {
        let dir = tempfile::tempdir().unwrap();
        fs::write(dir.path().join("e.txt"), edges).unwrap();
        let m = NetworkManifest {
            layers: nodes.len(),
            node_counts: nodes.to_vec(),
            edges: dir.path().join("e.txt"),
            truth: None,
        };
        (dir, m)
    }

    #[test]
    fn single_edge_layer() {
        let (_d, m) = setup("1 1 2\n", &[3]);
        let (net, truth) = load_multiplex(&m).unwrap();
        assert!(truth.is_none());
        assert_eq!(net.node_counts(), vec![3]);
        assert_eq!(net.layer(0).edges().collect::<Vec<_>>(), vec![(0, 1)]);
    }

    #[test]
    fn self_loop_dropped_and_duplicates_merged() {
        let (_d, m) = setup("# comment\n1 1 2\n1 2 1\n2 1 1\n", &[3, 2]);
        let (net, _) = load_multiplex(&m).unwrap();
        assert_eq!(net.layer(0).edge_count(), 1);
        assert_eq!(net.layer(1).edge_count(), 0);
    }

    #[test]
    fn bad_lines_rejected() {
        let (_d, m) = setup("1 4 2\n", &[3]);
        let err = load_multiplex(&m).unwrap_err().to_string();
        assert!(err.contains("node id out of range"), "{err}");
        let (_d, m) = setup("2 1 2\n", &[3]);
        assert!(load_multiplex(&m).unwrap_err().to_string().contains("layer index"));
        let (_d, m) = setup("1 1\n", &[3]);
        assert!(load_multiplex(&m).unwrap_err().to_string().contains("malformed"));
        let (_d, m) = setup("1 x 2\n", &[3]);
        assert!(load_multiplex(&m).is_err());
    }

    #[test]
    fn manifest_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let net = MultiplexNetwork::from_layers(vec![
            Adjacency::from_edges(4, &[(0, 1), (2, 3)]),
            Adjacency::from_edges(2, &[]),
        ])
        .unwrap();
        let truth = LabelMatrix::new(vec![vec![1, 1, 2, 2], vec![3, 1]]).unwrap();
        save_network(&net, Some(&truth), dir.path()).unwrap();
        let m = NetworkManifest::read(&dir.path().join("manifest.txt")).unwrap();
        assert_eq!(m.node_counts, vec![4, 2]);
        let (net2, truth2) = load_multiplex(&m).unwrap();
        assert_eq!(net2, net);
        assert_eq!(truth2.unwrap(), truth);
    }

    #[test]
    fn manifest_errors() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("m.txt");
        fs::write(&p, "layers = 2\nnodes = 3\nedges = e.txt\n").unwrap();
        assert!(NetworkManifest::read(&p).is_err());
        fs::write(&p, "layers = 1\nnodes = 3\n").unwrap();
        assert!(NetworkManifest::read(&p).unwrap_err().to_string().contains("edges"));
        fs::write(&p, "layers: 1\n").unwrap();
        assert!(NetworkManifest::read(&p).is_err());
    }

    #[test]
    fn truth_must_cover_every_node() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("t.txt");
        fs::write(&p, "1 1 1\n1 3 2\n").unwrap();
        assert!(read_labels(&p, &[3]).unwrap_err().to_string().contains("no label"));
        fs::write(&p, "1 1 1\n1 1 2\n").unwrap();
        assert!(read_labels(&p, &[1]).is_err());
    }
}
