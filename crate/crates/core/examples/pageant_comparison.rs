//! The beauty-pageant scenario: five independent layers sharing one
//! connectivity matrix. Compares HSBM against per-layer DP-SBM.
//!
//!     cargo run --release --example pageant_comparison -- [reps] [iters] [burnin]

use hsbm::experiment::mean_nmi;
use hsbm::synth::{PAGEANT_ETA, PAGEANT_WEIGHTS};
use hsbm::{compare_models, Hyperparameters, Model, ScenarioOverrides};

fn main() -> hsbm::Result<()> {
    let mut args = std::env::args().skip(1);
    let reps: usize = args.next().and_then(|s| s.parse().ok()).unwrap_or(5);
    let iters: usize = args.next().and_then(|s| s.parse().ok()).unwrap_or(1500);
    let burnin: usize = args.next().and_then(|s| s.parse().ok()).unwrap_or(iters / 2);

    println!("community weights {PAGEANT_WEIGHTS:?}");
    for row in PAGEANT_ETA {
        println!("  η row {row:?}");
    }
    let hyper = Hyperparameters {
        iter_max: iters,
        burnin,
        ..Default::default()
    };
    let rows = compare_models("pageant", &ScenarioOverrides::default(), &hyper, reps, &Model::ALL)?;
    for r in &rows {
        let slices: Vec<String> = r.nmi.slicewise.iter().map(|v| format!("{v:.2}")).collect();
        println!(
            "rep {:>2} {:<5} aggregate {:.3}  slicewise [{}]",
            r.replication,
            r.model,
            r.nmi.aggregate,
            slices.join(" ")
        );
    }
    for model in Model::ALL {
        let (slice, agg) = mean_nmi(&rows, model);
        println!("{model:<5} mean avg-slicewise {slice:.4}  mean aggregate {agg:.4}");
    }
    Ok(())
}
