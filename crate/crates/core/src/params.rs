use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Prior concentrations, η prior shapes and the run schedule.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Hyperparameters {
    /// Layer-level concentration α₀.
    pub alpha0: f64,
    /// Top-level concentration γ₀.
    pub gamma0: f64,
    pub alpha_eta: f64,
    pub beta_eta: f64,
    /// Total number of sweeps.
    pub iter_max: usize,
    /// Number of leading sweeps discarded.
    pub burnin: usize,
    /// Keep every `thin`-th post-burn-in sweep.
    pub thin: usize,
    pub seed: u64,
}

impl Default for Hyperparameters {
    fn default() -> Self {
        Hyperparameters {
            alpha0: 5.0,
            gamma0: 5.0,
            alpha_eta: 1.0,
            beta_eta: 1.0,
            iter_max: 2000,
            burnin: 1000,
            thin: 1,
            seed: 0,
        }
    }
}

impl Hyperparameters {
    /// Default hyperparameters with `burnin = iter_max / 2`.
    pub fn with_iters(iter_max: usize) -> Self {
        Hyperparameters {
            iter_max,
            burnin: iter_max / 2,
            ..Default::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        let positive = [
            ("alpha0", self.alpha0),
            ("gamma0", self.gamma0),
            ("alpha_eta", self.alpha_eta),
            ("beta_eta", self.beta_eta),
        ];
        for (name, value) in positive {
            if !(value > 0.0 && value.is_finite()) {
                return Err(Error::InvalidHyperparameter(format!(
                    "{name} must be positive and finite, got {value}"
                )));
            }
        }
        if self.iter_max <= self.burnin {
            return Err(Error::InvalidHyperparameter(format!(
                "iter_max ({}) must exceed burnin ({})",
                self.iter_max, self.burnin
            )));
        }
        if self.thin == 0 {
            return Err(Error::InvalidHyperparameter("thin must be at least 1".into()));
        }
        Ok(())
    }

    /// Whether the (1-based) sweep `iter` is retained in the trace.
    pub fn keeps(&self, iter: usize) -> bool {
        iter > self.burnin && (iter - self.burnin - 1) % self.thin == 0
    }

    pub fn retained_count(&self) -> usize {
        (self.burnin + 1..=self.iter_max)
            .filter(|&i| self.keeps(i))
            .count()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn burnin_must_be_below_iter_max() {
        let h = Hyperparameters {
            iter_max: 5,
            burnin: 5,
            ..Default::default()
        };
        assert!(h.validate().is_err());
        assert!(Hyperparameters::with_iters(10).validate().is_ok());
    }

    #[test]
    fn rejects_nonpositive_concentration() {
        let h = Hyperparameters {
            gamma0: 0.0,
            ..Default::default()
        };
        assert!(h.validate().is_err());
        let h = Hyperparameters {
            thin: 0,
            ..Default::default()
        };
        assert!(h.validate().is_err());
    }

    #[test]
    fn thinning_bookkeeping() {
        let mut h = Hyperparameters {
            iter_max: 10,
            burnin: 5,
            ..Default::default()
        };
        assert_eq!(h.retained_count(), 5);
        h.thin = 2;
        let kept: Vec<_> = (1..=10).filter(|&i| h.keeps(i)).collect();
        assert_eq!(kept, vec![6, 8, 10]);
    }
}
