//! Slicewise and aggregate NMI, and how label matching across layers
//! separates them.
//!
//!     cargo run --example nmi_metrics

use hsbm::{nmi, nmi_report, LabelMatrix};

fn main() -> hsbm::Result<()> {
    println!("nmi((1,1,2,2), (1,1,1,2)) = {:.4}", nmi(&[1, 1, 2, 2], &[1, 1, 1, 2])?);

    let truth = LabelMatrix::new(vec![vec![1, 1, 2, 2, 3, 3], vec![1, 1, 2, 2, 3, 3]])?;
    // both layers perfectly partitioned, labels consistent across layers
    let matched = LabelMatrix::new(vec![vec![4, 4, 5, 5, 6, 6], vec![4, 4, 5, 5, 6, 6]])?;
    // same partitions, but the second layer uses different names
    let unmatched = LabelMatrix::new(vec![vec![1, 1, 2, 2, 3, 3], vec![2, 2, 3, 3, 1, 1]])?;

    for (name, est) in [("matched", &matched), ("unmatched", &unmatched)] {
        let r = nmi_report(est, &truth)?;
        println!(
            "{name:<9} slicewise {:?}  avg {:.3}  aggregate {:.3}",
            r.slicewise, r.avg_slicewise, r.aggregate
        );
    }
    Ok(())
}
