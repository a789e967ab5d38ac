//! Write a small two-layer network as an edge list with a manifest, load
//! it back, fit HSBM and save the result files.
//!
//!     cargo run --release --example edge_list_fit -- [out_dir]

use std::fs;
use std::path::PathBuf;

use hsbm::io::{save_results, NetworkManifest};
use hsbm::{load_multiplex, run_chain, summarize, Hyperparameters};

fn main() -> hsbm::Result<()> {
    let out = std::env::args()
        .nth(1)
        .map(PathBuf::from)
        .unwrap_or_else(|| std::env::temp_dir().join("hsbm-edge-list-example"));
    fs::create_dir_all(&out).map_err(|e| hsbm::Error::Io { path: out.clone(), source: e })?;

    // two triangles per layer, joined by one bridge; node 6 is isolated in layer 2
    let edges = "\
# t i j
1 1 2\n1 2 3\n1 1 3\n1 4 5\n1 5 6\n1 4 6\n1 3 4
2 1 2\n2 2 3\n2 1 3\n2 4 5\n2 1 1
";
    fs::write(out.join("edges.txt"), edges).map_err(|e| hsbm::Error::Io { path: out.clone(), source: e })?;
    let manifest = NetworkManifest {
        layers: 2,
        node_counts: vec![6, 6],
        edges: out.join("edges.txt"),
        truth: None,
    };
    manifest.write(&out.join("manifest.txt"))?;

    // the self-loop "2 1 1" is dropped with a warning
    let (network, _) = load_multiplex(&NetworkManifest::read(&out.join("manifest.txt"))?)?;
    println!("edges per layer: {:?}", network.layers().iter().map(|a| a.edge_count()).collect::<Vec<_>>());

    let hyper = Hyperparameters::with_iters(1000);
    let trace = run_chain(&network, &hyper)?;
    let report = summarize(&trace, None)?;
    for (t, (z, c)) in report.map_labels.layers().iter().zip(&report.confidence).enumerate() {
        let conf: Vec<String> = c.iter().map(|p| format!("{p:.2}")).collect();
        println!("layer {}: labels {z:?} confidence [{}]", t + 1, conf.join(" "));
    }
    for path in save_results(&trace, &report, None, &hyper, &out)? {
        println!("wrote {}", path.display());
    }
    Ok(())
}
