//! Fundamental value types shared by every other module, together with the
//! feasibility and comparison rules used by both solvers.
//!
//! Constraints follow the `c_i(x) >= 0` convention: a solution is feasible
//! iff every constraint value is nonnegative, with no tolerance.

use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Difficulty levels `(eta, zeta, gamma)` for diversity-, feasibility- and
/// convergence-hardness, each in `[0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DifficultyTriplet {
    pub eta: f64,
    pub zeta: f64,
    pub gamma: f64,
}

impl DifficultyTriplet {
    pub const ZERO: DifficultyTriplet = DifficultyTriplet {
        eta: 0.0,
        zeta: 0.0,
        gamma: 0.0,
    };

    pub fn new(eta: f64, zeta: f64, gamma: f64) -> Result<Self> {
        let t = DifficultyTriplet { eta, zeta, gamma };
        t.validate()?;
        Ok(t)
    }

    pub fn validate(&self) -> Result<()> {
        for (name, v) in [("eta", self.eta), ("zeta", self.zeta), ("gamma", self.gamma)] {
            if !(0.0..=1.0).contains(&v) {
                return Err(Error::Contract(format!(
                    "triplet component {name}={v} outside [0, 1]"
                )));
            }
        }
        Ok(())
    }

    /// The sixteen triplets of the reference protocol, in result-table row
    /// order.
    pub fn builtin16() -> Vec<DifficultyTriplet> {
        const GRID: [(f64, f64, f64); 16] = [
            (0.0, 0.0, 0.0),
            (0.0, 0.25, 0.0),
            (0.0, 0.0, 0.25),
            (0.25, 0.0, 0.0),
            (0.0, 0.5, 0.0),
            (0.0, 0.0, 0.5),
            (0.5, 0.0, 0.0),
            (0.0, 0.75, 0.0),
            (0.0, 0.0, 0.75),
            (0.75, 0.0, 0.0),
            (0.0, 1.0, 0.0),
            (0.0, 0.0, 1.0),
            (1.0, 0.0, 0.0),
            (0.25, 0.25, 0.25),
            (0.5, 0.5, 0.5),
            (0.75, 0.75, 0.75),
        ];
        GRID.iter()
            .map(|&(eta, zeta, gamma)| DifficultyTriplet { eta, zeta, gamma })
            .collect()
    }
}

impl fmt::Display for DifficultyTriplet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({:.2},{:.2},{:.2})", self.eta, self.zeta, self.gamma)
    }
}

/// A decision vector together with its cached objective values, constraint
/// values and overall violation.
///
/// Only [`crate::toolkit::ProblemInstance::evaluate_solution`] builds these,
/// so the cache always matches what the instance produces for `x`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvaluatedSolution {
    pub x: Vec<f64>,
    pub f: Vec<f64>,
    pub c: Vec<f64>,
    pub violation: f64,
}

impl EvaluatedSolution {
    pub fn is_feasible(&self) -> bool {
        self.violation == 0.0
    }
}

/// Sum of the negative parts of the constraint values.
pub fn overall_violation(c: &[f64]) -> Result<f64> {
    let mut total = 0.0;
    for (i, &ci) in c.iter().enumerate() {
        if !ci.is_finite() {
            return Err(Error::Evaluation(format!("constraint {i} is not finite ({ci})")));
        }
        if ci < 0.0 {
            total -= ci;
        }
    }
    Ok(total)
}

/// Pareto dominance for minimization.
pub fn dominates(a: &[f64], b: &[f64]) -> Result<bool> {
    if a.len() != b.len() {
        return Err(Error::Contract(format!(
            "objective vectors of length {} and {} are not comparable",
            a.len(),
            b.len()
        )));
    }
    Ok(dominates_unchecked(a, b))
}

/// [`dominates`] for callers that already guarantee equal lengths.
pub(crate) fn dominates_unchecked(a: &[f64], b: &[f64]) -> bool {
    let mut strictly = false;
    for (x, y) in a.iter().zip(b) {
        if x > y {
            return false;
        }
        if x < y {
            strictly = true;
        }
    }
    strictly
}

/// Outcome of a constraint-dominance comparison.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CdpOrdering {
    ABetter,
    BBetter,
    Tie,
}

/// Constraint-dominance principle:
///
/// 1. a feasible solution beats an infeasible one;
/// 2. of two infeasible solutions the one with smaller violation wins;
/// 3. of two feasible solutions Pareto dominance decides, and mutually
///    nondominated pairs tie.
pub fn cdp_compare(a: &EvaluatedSolution, b: &EvaluatedSolution) -> CdpOrdering {
    match (a.is_feasible(), b.is_feasible()) {
        (true, false) => CdpOrdering::ABetter,
        (false, true) => CdpOrdering::BBetter,
        (false, false) => match a.violation.partial_cmp(&b.violation) {
            Some(Ordering::Less) => CdpOrdering::ABetter,
            Some(Ordering::Greater) => CdpOrdering::BBetter,
            _ => CdpOrdering::Tie,
        },
        (true, true) => {
            if dominates_unchecked(&a.f, &b.f) {
                CdpOrdering::ABetter
            } else if dominates_unchecked(&b.f, &a.f) {
                CdpOrdering::BBetter
            } else {
                CdpOrdering::Tie
            }
        }
    }
}

/// `true` iff `a` constraint-dominates `b`.
pub fn cdp_dominates(a: &EvaluatedSolution, b: &EvaluatedSolution) -> bool {
    cdp_compare(a, b) == CdpOrdering::ABetter
}
