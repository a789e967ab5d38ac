//! Stick-breaking weights over a finite represented prefix of ℕ.

use crate::error::{Error, Result};
use crate::rng::FractionSource;

/// Growth factor applied to the represented prefix each extension round.
pub const GROWTH_FACTOR: f64 = 1.5;

/// Maps stick fractions x to weights w_j = x_j ∏_{l<j} (1 - x_l).
///
/// Returns exactly `len` weights; fractions must lie in (0, 1].
pub fn stick_transform(fractions: &[f64], len: usize) -> Result<Vec<f64>> {
    if fractions.len() < len {
        return Err(Error::ShapeMismatch(format!(
            "{} fractions supplied for truncation {len}",
            fractions.len()
        )));
    }
    let mut remaining = 1.0;
    let mut weights = Vec::with_capacity(len);
    for &x in &fractions[..len] {
        if !(x > 0.0 && x <= 1.0) {
            return Err(Error::InvalidFraction(x));
        }
        weights.push(x * remaining);
        remaining *= 1.0 - x;
    }
    Ok(weights)
}

/// Largest 1-based index whose weight reaches `u`, or 0 if none does.
pub fn slice_sup(weights: &[f64], u: f64) -> usize {
    weights.iter().rposition(|&w| w >= u).map_or(0, |j| j + 1)
}

/// All 1-based indices j with weights_j ≥ u, ascending.
pub fn slice_set(weights: &[f64], u: f64) -> Vec<usize> {
    weights
        .iter()
        .enumerate()
        .filter(|(_, &w)| w >= u)
        .map(|(j, _)| j + 1)
        .collect()
}

/// Stick fractions for a GEM(concentration) sequence, truncated to the
/// represented prefix.
#[derive(Clone, Debug, PartialEq)]
pub struct StickState {
    fractions: Vec<f64>,
    concentration: f64,
}

impl StickState {
    pub fn new(concentration: f64) -> Self {
        StickState {
            fractions: Vec::new(),
            concentration,
        }
    }

    pub fn from_fractions(fractions: Vec<f64>, concentration: f64) -> Result<Self> {
        if let Some(&x) = fractions.iter().find(|&&x| !(x > 0.0 && x <= 1.0)) {
            return Err(Error::InvalidFraction(x));
        }
        Ok(StickState {
            fractions,
            concentration,
        })
    }

    pub fn len(&self) -> usize {
        self.fractions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.fractions.is_empty()
    }

    pub fn concentration(&self) -> f64 {
        self.concentration
    }

    pub fn fractions(&self) -> &[f64] {
        &self.fractions
    }

    /// Replaces fraction j (1-based).
    pub fn set_fraction(&mut self, j: usize, x: f64) {
        debug_assert!(x > 0.0 && x <= 1.0);
        self.fractions[j - 1] = x;
    }

    pub fn weights(&self) -> Vec<f64> {
        stick_transform(&self.fractions, self.fractions.len())
            .expect("fractions validated on insertion")
    }

    /// Mass not yet assigned to the represented prefix, ∏ (1 - x_j).
    pub fn residual(&self) -> f64 {
        self.fractions.iter().map(|x| 1.0 - x).product()
    }

    /// Appends i.i.d. Beta(1, concentration) fractions up to `target_len`.
    pub fn extend<S: FractionSource + ?Sized>(&mut self, source: &mut S, target_len: usize) {
        while self.fractions.len() < target_len {
            let x = source.next_fraction(self.concentration);
            assert!(x > 0.0 && x <= 1.0, "fraction source produced {x}");
            self.fractions.push(x);
        }
    }

    /// Grows the prefix by factor 1.5 per round until the residual mass is
    /// below `u_min`. Afterwards no index past the prefix can carry weight
    /// ≥ u_min. Returns the number of fractions appended.
    pub fn ensure_slice_coverage<S: FractionSource + ?Sized>(
        &mut self,
        u_min: f64,
        source: &mut S,
    ) -> usize {
        let start = self.len();
        while self.residual() >= u_min {
            let target = next_cap(self.len());
            self.extend(source, target);
        }
        self.len() - start
    }
}

/// Next truncation cap under the 1.5× growth policy (always grows by ≥ 1).
pub fn next_cap(len: usize) -> usize {
    ((len as f64 * GROWTH_FACTOR).ceil() as usize).max(len + 1)
}
