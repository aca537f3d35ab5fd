use std::fmt;

use crate::alphabet::Sym;
use crate::error::{Error, Result};

/// Absolute tolerance on the sum of a probability vector.
pub const SIMPLEX_TOL: f64 = 1e-9;

/// Round-off headroom allowed on individual entries before rejection.
const ENTRY_SLACK: f64 = 1e-12;

/// A next-symbol probability distribution over `Σ ∪ {$}`.
///
/// Entries follow the alphabet layout: position 0 is the terminal `$`,
/// position `i + 1` is symbol `i`. Entries must be nonnegative and sum to 1
/// within [`SIMPLEX_TOL`]; entries within `1e-12` of the `[0, 1]` bounds are
/// clamped onto them so that downstream quantization stays total.
#[derive(Debug, Clone, PartialEq)]
pub struct Distribution {
    probs: Vec<f64>,
}

impl Distribution {
    /// Builds a distribution from a probability vector in layout order.
    pub fn new(probs: Vec<f64>) -> Result<Self> {
        if probs.is_empty() {
            return Err(Error::InvalidDistribution("empty vector".into()));
        }
        let mut sum = 0.0;
        for &p in &probs {
            if !p.is_finite() || p < -ENTRY_SLACK || p > 1.0 + ENTRY_SLACK {
                return Err(Error::InvalidDistribution(format!(
                    "entry {p} outside [0, 1]"
                )));
            }
            sum += p;
        }
        if (sum - 1.0).abs() > SIMPLEX_TOL {
            return Err(Error::InvalidDistribution(format!(
                "entries sum to {sum}, not 1"
            )));
        }
        let probs = probs.into_iter().map(|p| p.clamp(0.0, 1.0)).collect();
        Ok(Distribution { probs })
    }

    /// Probability of the terminal symbol `$`.
    pub fn terminal(&self) -> f64 {
        self.probs[0]
    }

    /// Probability of alphabet symbol `sym`.
    pub fn symbol(&self, sym: Sym) -> f64 {
        self.probs[sym + 1]
    }

    /// Probability of the symbol at layout position `pos` (0 is `$`).
    pub fn layout(&self, pos: usize) -> f64 {
        self.probs[pos]
    }

    /// Probability of `last`, where `None` denotes the terminal.
    pub fn prob_of(&self, last: Option<Sym>) -> f64 {
        match last {
            None => self.terminal(),
            Some(s) => self.symbol(s),
        }
    }

    /// Number of entries, `|Σ| + 1`.
    pub fn len(&self) -> usize {
        self.probs.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.probs
    }

    /// Bit-exact key for hashing and exact-equality grouping.
    pub fn key_bits(&self) -> Vec<u64> {
        self.probs.iter().map(|p| p.to_bits()).collect()
    }
}

impl fmt::Display for Distribution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, p) in self.probs.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{p}")?;
        }
        write!(f, ")")
    }
}
