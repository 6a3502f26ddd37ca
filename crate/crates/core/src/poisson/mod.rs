//! Poisson boundaries of discrete duals.
//!
//! Two pictures of the same Markov operator `P_mu = sum_s mu(s) P_{phi_s}`:
//! on the blocks of `l^inf(G^)` through `(phi (x) iota) Delta^`, and on natural
//! transformations `iota (x) V -> iota (x) W` through partial categorical traces.
//! Blocks beyond the truncation are never guessed: operators report the largest
//! certified block range or fail with `TruncationExceeded`.

pub mod markov;
pub mod nat;
pub mod phi;

use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::repcat::{IrrepTable, RepCategory};

pub use markov::{
    certified_blocks, harmonic_space, irr_walk, markov_apply, markov_apply_upto, markov_matrix, markov_report,
    HarmonicSpace, IrrWalk, MarkovReport, PoissonBoundary,
};
pub use nat::{
    categorical_markov, identification_check, nat_harmonic_dim, IdentificationReport, NatTransBlocks,
};
pub use phi::{invariance_residual, multiplicativity_residual, phi_report, phi_state, PhiReport, PhiState};

const SUM_TOL: f64 = 1e-12;

/// A finitely supported probability measure on the irreducibles.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Measure {
    /// `(irrep, weight)` with positive weights, sorted by irrep.
    pub weights: Vec<(usize, f64)>,
}

impl Measure {
    /// Merges repeated irreps and drops zero weights; weights must be
    /// nonnegative and sum to 1 within `1e-12`.
    pub fn new(weights: impl IntoIterator<Item = (usize, f64)>) -> Result<Self> {
        let mut acc: BTreeMap<usize, f64> = BTreeMap::new();
        for (s, w) in weights {
            if !w.is_finite() || w < 0.0 {
                return Err(Error::AxiomFailure(format!("measure weight {w} at irrep {s}")));
            }
            *acc.entry(s).or_default() += w;
        }
        let total: f64 = acc.values().sum();
        if (total - 1.0).abs() > SUM_TOL {
            return Err(Error::AxiomFailure(format!("measure has total mass {total}")));
        }
        Ok(Measure {
            weights: acc.into_iter().filter(|&(_, w)| w > 0.0).collect(),
        })
    }

    pub fn delta(s: usize) -> Self {
        Measure { weights: vec![(s, 1.0)] }
    }

    /// Resolves labels of `table`.
    pub fn from_labels(table: &IrrepTable, map: &BTreeMap<String, f64>) -> Result<Self> {
        let mut w = Vec::with_capacity(map.len());
        for (label, &x) in map {
            let s = table
                .index_of_label(label)
                .ok_or_else(|| Error::shape("measure label", format!("one of {:?}", table.labels), label))?;
            w.push((s, x));
        }
        Measure::new(w)
    }

    pub fn to_labels(&self, table: &IrrepTable) -> BTreeMap<String, f64> {
        self.weights.iter().map(|&(s, w)| (table.labels[s].clone(), w)).collect()
    }

    pub fn weight(&self, s: usize) -> f64 {
        self.weights.iter().find(|p| p.0 == s).map_or(0.0, |p| p.1)
    }

    pub fn support(&self) -> Vec<usize> {
        self.weights.iter().map(|p| p.0).collect()
    }

    /// The measure of `phi_mu (x) phi_nu` restricted along `Delta^`:
    /// `r -> sum mu(a) nu(b) N_ab^r dim_q r / (dim_q a dim_q b)`.
    pub fn convolve(&self, other: &Measure, cat: &RepCategory) -> Result<Measure> {
        let qd = &cat.table().qdims;
        let mut acc: BTreeMap<usize, f64> = BTreeMap::new();
        for &(a, wa) in &self.weights {
            for &(b, wb) in &other.weights {
                for (r, n) in cat.fusion_multiplicities(a, b)?.into_iter().enumerate() {
                    if n > 0 {
                        *acc.entry(r).or_default() += wa * wb * n as f64 * qd[r] / (qd[a] * qd[b]);
                    }
                }
            }
        }
        // rounding only: the weights sum to 1 exactly in exact arithmetic
        let total: f64 = acc.values().sum();
        Measure::new(acc.into_iter().map(|(r, w)| (r, w / total)))
    }

    /// Whether the support generates every irreducible of the table under fusion.
    pub fn generates(&self, cat: &RepCategory) -> Result<bool> {
        let n = cat.num_irreps();
        let mut seen: BTreeSet<usize> = BTreeSet::from([0]);
        let mut frontier = vec![0];
        while let Some(s) = frontier.pop() {
            for t in self.support() {
                for (r, m) in cat.fusion_multiplicities(t, s)?.into_iter().enumerate() {
                    if m > 0 && seen.insert(r) {
                        frontier.push(r);
                    }
                }
            }
        }
        Ok(seen.len() == n)
    }
}

#[cfg(test)]
mod tests;
