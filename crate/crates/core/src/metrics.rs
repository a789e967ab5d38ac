//! NMI scores, MAP labels and connectivity summaries.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::network::{LabelMatrix, MultiplexNetwork, SymMatrix};
use crate::trace::{ChainTrace, SummaryReport};

/// Name of the NMI normalization used throughout, recorded in run metadata.
pub const NMI_VARIANT: &str = "arithmetic: 2 I(X;Y) / (H(X) + H(Y)), natural log";

fn entropy(counts: impl Iterator<Item = usize>, n: f64) -> f64 {
    counts
        .filter(|&c| c > 0)
        .map(|c| {
            let p = c as f64 / n;
            -p * p.ln()
        })
        .sum()
}

/// Normalized mutual information with arithmetic-mean normalization.
///
/// Two single-cluster partitions score 1; a single-cluster partition
/// against a multi-cluster one scores 0.
pub fn nmi(x: &[usize], y: &[usize]) -> Result<f64> {
    if x.len() != y.len() {
        return Err(Error::ShapeMismatch(format!(
            "label vectors of length {} and {}",
            x.len(),
            y.len()
        )));
    }
    if x.is_empty() {
        return Err(Error::ShapeMismatch("empty label vectors".into()));
    }
    let n = x.len() as f64;
    let mut joint: HashMap<(usize, usize), usize> = HashMap::new();
    let mut cx: HashMap<usize, usize> = HashMap::new();
    let mut cy: HashMap<usize, usize> = HashMap::new();
    for (&a, &b) in x.iter().zip(y) {
        *joint.entry((a, b)).or_default() += 1;
        *cx.entry(a).or_default() += 1;
        *cy.entry(b).or_default() += 1;
    }
    match (cx.len() == 1, cy.len() == 1) {
        (true, true) => return Ok(1.0),
        (true, false) | (false, true) => return Ok(0.0),
        _ => {}
    }
    // sort so the floating-point sums do not depend on hash order
    let mut counts_x: Vec<usize> = cx.values().copied().collect();
    let mut counts_y: Vec<usize> = cy.values().copied().collect();
    let mut counts_xy: Vec<usize> = joint.values().copied().collect();
    counts_x.sort_unstable();
    counts_y.sort_unstable();
    counts_xy.sort_unstable();
    let hx = entropy(counts_x.into_iter(), n);
    let hy = entropy(counts_y.into_iter(), n);
    let hxy = entropy(counts_xy.into_iter(), n);
    let mi = hx + hy - hxy;
    Ok((2.0 * mi / (hx + hy)).clamp(0.0, 1.0))
}

/// Slicewise, average slicewise and aggregate NMI of an estimate.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NmiReport {
    pub slicewise: Vec<f64>,
    pub avg_slicewise: f64,
    pub aggregate: f64,
}

pub fn nmi_report(estimate: &LabelMatrix, truth: &LabelMatrix) -> Result<NmiReport> {
    if estimate.shape() != truth.shape() {
        return Err(Error::ShapeMismatch(format!(
            "estimate has shape {:?}, truth {:?}",
            estimate.shape(),
            truth.shape()
        )));
    }
    let slicewise = estimate
        .layers()
        .iter()
        .zip(truth.layers())
        .map(|(e, t)| nmi(e, t))
        .collect::<Result<Vec<_>>>()?;
    let avg_slicewise = slicewise.iter().sum::<f64>() / slicewise.len() as f64;
    let aggregate = nmi(&estimate.flatten(), &truth.flatten())?;
    Ok(NmiReport {
        slicewise,
        avg_slicewise,
        aggregate,
    })
}

/// Per-node most frequent label over the retained samples, and its
/// frequency. Ties go to the smallest label.
pub fn map_labels(trace: &ChainTrace) -> Result<(LabelMatrix, Vec<Vec<f64>>)> {
    let first = trace.labels.first().ok_or(Error::EmptyTrace)?;
    let samples = trace.labels.len() as f64;
    let mut map = Vec::with_capacity(first.num_layers());
    let mut confidence = Vec::with_capacity(first.num_layers());
    for t in 0..first.num_layers() {
        let n = first.layer(t).len();
        let mut zt = Vec::with_capacity(n);
        let mut ct = Vec::with_capacity(n);
        for i in 0..n {
            let mut counts: HashMap<usize, usize> = HashMap::new();
            for s in &trace.labels {
                *counts.entry(s.layer(t)[i]).or_default() += 1;
            }
            let (label, count) = counts
                .into_iter()
                .max_by(|a, b| a.1.cmp(&b.1).then(b.0.cmp(&a.0)))
                .expect("non-empty trace");
            zt.push(label);
            ct.push(count as f64 / samples);
        }
        map.push(zt);
        confidence.push(ct);
    }
    Ok((LabelMatrix::new(map)?, confidence))
}

/// NMI of every retained sample against the truth.
pub fn posterior_nmi_trace(trace: &ChainTrace, truth: &LabelMatrix) -> Result<Vec<NmiReport>> {
    trace.labels.iter().map(|z| nmi_report(z, truth)).collect()
}

/// Empirical block densities per layer: edges / possible pairs between
/// communities k and ℓ. Blocks with no possible pair are `None`.
pub fn per_layer_eta_estimate(
    network: &MultiplexNetwork,
    labels: &LabelMatrix,
) -> Result<Vec<SymMatrix<Option<f64>>>> {
    labels.check_shape(network)?;
    Ok(network
        .layers()
        .iter()
        .zip(labels.layers())
        .map(|(adj, z)| {
            let dim = z.iter().copied().max().unwrap_or(0);
            let mut stats = crate::stats::EtaStats::zeros(dim);
            stats.accumulate(adj, z);
            SymMatrix::from_fn(dim, |k, l| {
                let pairs = *stats.pairs.get(k, l);
                (pairs > 0).then(|| *stats.lambda.get(k, l) as f64 / pairs as f64)
            })
        })
        .collect())
}

/// MAP labels (compacted), confidences, posterior-mean η and optional NMI.
///
/// The η mean is taken over the MAP communities only, averaging each entry
/// over the samples whose η snapshot covers it.
pub fn summarize(trace: &ChainTrace, truth: Option<&LabelMatrix>) -> Result<SummaryReport> {
    let (raw, confidence) = map_labels(trace)?;
    let map = raw.compact();
    let mut used: Vec<usize> = raw.flatten();
    used.sort_unstable();
    used.dedup();
    let fitted = trace.eta_samples.first().map_or(0, Vec::len);
    let eta_mean = (0..fitted)
        .map(|e| {
            SymMatrix::from_fn(used.len(), |a, b| {
                let (k, l) = (used[a - 1], used[b - 1]);
                let (sum, count) = trace
                    .eta_samples
                    .iter()
                    .map(|s| &s[e])
                    .filter(|m| m.dim() >= k.max(l))
                    .fold((0.0, 0usize), |(s, c), m| (s + m.get(k, l), c + 1));
                if count == 0 {
                    f64::NAN
                } else {
                    sum / count as f64
                }
            })
        })
        .collect();
    let nmi = truth.map(|t| nmi_report(&map, t)).transpose()?;
    Ok(SummaryReport {
        map_labels: map,
        confidence,
        eta_mean,
        nmi,
    })
}
