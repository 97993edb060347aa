//! Prove-or-refute pipeline.

use crate::calculus::{Derivation, Goal};
use crate::countermodel::{countermodel_unchecked_precondition, CounterModelBundle, CounterModelError};
use crate::formula::Formula;
use crate::prover::{prove, Limits, SearchStats, Verdict};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Decision {
    Proved { proof: Derivation, stats: SearchStats },
    Refuted { bundle: CounterModelBundle, stats: SearchStats },
}

impl Decision {
    pub fn is_proved(&self) -> bool {
        matches!(self, Decision::Proved { .. })
    }

    pub fn stats(&self) -> SearchStats {
        match self {
            Decision::Proved { stats, .. } | Decision::Refuted { stats, .. } => *stats,
        }
    }
}

/// Runs the prover and, if it fails, builds and validates a countermodel.
pub fn decide(formula: &Formula, limits: &Limits<'_>) -> Result<Decision, CounterModelError> {
    let outcome = prove(formula, limits)?;
    match outcome.verdict {
        Verdict::Proved(proof) => Ok(Decision::Proved {
            proof,
            stats: outcome.stats,
        }),
        Verdict::NotProved => {
            let goal = Goal::new(formula.clone());
            let bundle = countermodel_unchecked_precondition(&goal, limits)?;
            Ok(Decision::Refuted {
                bundle,
                stats: outcome.stats,
            })
        }
    }
}
