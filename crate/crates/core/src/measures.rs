//! Shannon entropy (base 2) and information gain over class histograms.

use crate::error::{Error, Result};
use crate::histogram::ClassHistogram;

/// Entropy of a node in bits together with its population strength.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EntropyResult {
    pub entropy: f64,
    pub pop: u64,
}

/// `H = -sum(p_i * log2(p_i))` over the classes present; `0 log 0 = 0`.
pub fn entropy(h: &ClassHistogram) -> EntropyResult {
    let pop = h.total();
    if pop == 0 {
        return EntropyResult {
            entropy: 0.0,
            pop: 0,
        };
    }
    let total = pop as f64;
    let sum: f64 = h
        .counts()
        .filter(|&n| n > 0)
        .map(|n| {
            let p = n as f64 / total;
            p * p.log2()
        })
        .sum();
    // a single class gives -0.0
    let entropy = if sum == 0.0 { 0.0 } else { -sum };
    EntropyResult { entropy, pop }
}

/// Parent entropy minus the population-weighted mean of the child entropies.
pub fn information_gain(parent: &EntropyResult, children: &[EntropyResult]) -> Result<f64> {
    let child_pop: u64 = children.iter().map(|c| c.pop).sum();
    if parent.pop == 0 || child_pop != parent.pop {
        return Err(Error::PopulationMismatch {
            parent: parent.pop,
            children: child_pop,
        });
    }
    let total = parent.pop as f64;
    let weighted: f64 = children
        .iter()
        .map(|c| c.pop as f64 / total * c.entropy)
        .sum();
    Ok(parent.entropy - weighted)
}
