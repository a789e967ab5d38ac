//! Recover a planted three-block partition of a single 150-node layer with
//! both samplers.
//!
//!     cargo run --release --example planted_recovery -- [seeds] [sweeps]

use std::time::Instant;

use hsbm::rng::chain_rng;
use hsbm::synth::sample_sbm_layer;
use hsbm::{fit_model, summarize, Hyperparameters, LabelMatrix, Model, MultiplexNetwork};

fn main() -> hsbm::Result<()> {
    let mut args = std::env::args().skip(1);
    let seeds: u64 = args.next().and_then(|s| s.parse().ok()).unwrap_or(3);
    let sweeps: usize = args.next().and_then(|s| s.parse().ok()).unwrap_or(2000);

    let truth: Vec<usize> = (0..150).map(|i| i / 50 + 1).collect();
    let eta: Vec<Vec<f64>> = (0..3)
        .map(|a| (0..3).map(|b| if a == b { 0.8 } else { 0.1 }).collect())
        .collect();

    for seed in 0..seeds {
        let adj = sample_sbm_layer(&truth, &eta, &mut chain_rng(seed, 1))?;
        let net = MultiplexNetwork::from_layers(vec![adj])?;
        let truth = LabelMatrix::new(vec![truth.clone()])?;
        for model in Model::ALL {
            let hyper = Hyperparameters {
                seed,
                ..Hyperparameters::with_iters(sweeps)
            };
            let start = Instant::now();
            let trace = fit_model(model, &net, &hyper)?;
            let report = summarize(&trace, Some(&truth))?;
            println!(
                "seed {seed} {model:>5}: MAP NMI {:.4}, {} communities, {:.2?}",
                report.nmi.unwrap().aggregate,
                report.map_labels.max_label(),
                start.elapsed()
            );
        }
    }
    Ok(())
}
