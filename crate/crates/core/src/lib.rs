//! Difficulty-adjustable, objective-scalable constrained multi-objective
//! benchmark problems (DAS-CMOP1-9), the construction toolkit behind them,
//! two CDP-based reference solvers and the IGD evaluation protocol.
//!
//! Module map:
//!
//! * [`solution`]: value types, overall violation, Pareto dominance and the
//!   constraint-dominance comparator.
//! * [`toolkit`]: the three constraint families, the triplet mapping and the
//!   shape + distance problem assembler.
//! * [`problems`]: the nine named instances.
//! * [`metrics`]: IGD, nondominated filtering, reference fronts and
//!   Monte-Carlo feasibility ratios.
//! * [`algorithms`]: MOEA/D-CDP, NSGA-II-CDP and their variation operators.
//! * [`harness`]: experiment orchestration, statistics and result files.

pub mod algorithms;
pub mod error;
pub mod harness;
pub mod metrics;
pub mod problems;
pub mod solution;
pub mod toolkit;

pub use error::{Error, Result};
pub use problems::ProblemId;
pub use solution::{DifficultyTriplet, EvaluatedSolution};
pub use toolkit::ProblemInstance;
