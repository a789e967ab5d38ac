//! HSBM vs per-layer DP-SBM on the Markov scenario, where each node keeps
//! its community from one layer to the next with probability 0.9.
//!
//!     cargo run --release --example markov_comparison -- [reps] [iters]

use hsbm::experiment::mean_nmi;
use hsbm::{compare_models, Hyperparameters, Model, ScenarioOverrides};

fn main() -> hsbm::Result<()> {
    let mut args = std::env::args().skip(1);
    let reps: usize = args.next().and_then(|s| s.parse().ok()).unwrap_or(4);
    let iters: usize = args.next().and_then(|s| s.parse().ok()).unwrap_or(2000);
    let hyper = Hyperparameters::with_iters(iters);

    println!("layers  model  mean avg-slicewise  mean aggregate");
    for layers in [2, 4, 8] {
        let overrides = ScenarioOverrides {
            layers: Some(layers),
            ..Default::default()
        };
        let rows = compare_models("markov", &overrides, &hyper, reps, &Model::ALL)?;
        for model in Model::ALL {
            let (slice, agg) = mean_nmi(&rows, model);
            println!("{layers:>6}  {model:<5}  {slice:>18.4}  {agg:>14.4}");
        }
    }
    Ok(())
}
