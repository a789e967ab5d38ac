use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::metrics::NmiReport;
use crate::network::{LabelMatrix, SymMatrix};

/// Retained post-burn-in samples of a chain.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct ChainTrace {
    /// 1-based sweep index of each retained sample.
    pub iterations: Vec<usize>,
    pub labels: Vec<LabelMatrix>,
    /// η snapshots per retained sample: one matrix for a shared-η model,
    /// one per layer when layers were fitted independently.
    pub eta_samples: Vec<Vec<SymMatrix<f64>>>,
}

impl ChainTrace {
    pub fn len(&self) -> usize {
        self.iterations.len()
    }

    pub fn is_empty(&self) -> bool {
        self.iterations.is_empty()
    }

    pub fn push(&mut self, iteration: usize, labels: LabelMatrix, eta: Vec<SymMatrix<f64>>) {
        if let Some(first) = self.labels.first() {
            debug_assert_eq!(first.shape(), labels.shape());
        }
        self.iterations.push(iteration);
        self.labels.push(labels);
        self.eta_samples.push(eta);
    }

    /// Combines single-layer traces (same schedule) into one multi-layer
    /// trace, layer t taken from `traces[t]`.
    pub fn stack_layers(traces: &[ChainTrace]) -> Result<ChainTrace> {
        let first = traces.first().ok_or(Error::EmptyTrace)?;
        if traces.iter().any(|tr| tr.iterations != first.iterations) {
            return Err(Error::ShapeMismatch(
                "layer traces retain different iterations".into(),
            ));
        }
        let mut out = ChainTrace::default();
        for s in 0..first.len() {
            let mut layers = Vec::with_capacity(traces.len());
            let mut etas = Vec::with_capacity(traces.len());
            for tr in traces {
                layers.extend(tr.labels[s].layers().iter().cloned());
                etas.extend(tr.eta_samples[s].iter().cloned());
            }
            out.push(first.iterations[s], LabelMatrix::new(layers)?, etas);
        }
        Ok(out)
    }
}

/// Posterior summary of a fitted chain.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SummaryReport {
    /// MAP labels, compacted to 1..K with one mapping shared by all layers.
    pub map_labels: LabelMatrix,
    /// Posterior probability of the MAP label, per (layer, node).
    pub confidence: Vec<Vec<f64>>,
    /// Posterior mean of each η (one entry per fitted η), over the MAP
    /// communities, in compacted indices.
    pub eta_mean: Vec<SymMatrix<f64>>,
    pub nmi: Option<NmiReport>,
}
