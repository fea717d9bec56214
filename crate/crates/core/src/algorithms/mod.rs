//! Reference solvers (MOEA/D-CDP and NSGA-II-CDP) and the variation
//! operators they share.

mod moead;
mod nsga2;
pub mod operators;
pub mod sorting;
pub mod weights;

use std::fmt;
use std::str::FromStr;

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::metrics::{population_igd, ReferenceFront};
use crate::solution::EvaluatedSolution;
use crate::toolkit::ProblemInstance;

pub use moead::moead_cdp_run;
pub use nsga2::nsga2_cdp_run;
pub use operators::{polynomial_mutation, sbx_crossover};
pub use sorting::{crowding_distance, fast_nondominated_sort};
pub use weights::{generate_weight_vectors, WeightVectorSet};

/// Which solver to run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Algorithm {
    #[serde(rename = "moead-cdp")]
    MoeadCdp,
    #[serde(rename = "nsga2-cdp")]
    Nsga2Cdp,
}

impl Algorithm {
    pub const ALL: [Algorithm; 2] = [Algorithm::MoeadCdp, Algorithm::Nsga2Cdp];

    pub fn name(self) -> &'static str {
        match self {
            Algorithm::MoeadCdp => "moead-cdp",
            Algorithm::Nsga2Cdp => "nsga2-cdp",
        }
    }

    pub fn run(
        self,
        inst: &ProblemInstance,
        cfg: &AlgoConfig,
        tracer: Option<&Tracer<'_>>,
    ) -> Result<RunOutput> {
        match self {
            Algorithm::MoeadCdp => moead_cdp_run(inst, cfg, tracer),
            Algorithm::Nsga2Cdp => nsga2_cdp_run(inst, cfg, tracer),
        }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Algorithm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "moead-cdp" | "moead" | "moea/d-cdp" => Ok(Algorithm::MoeadCdp),
            "nsga2-cdp" | "nsga2" | "nsga-ii-cdp" => Ok(Algorithm::Nsga2Cdp),
            other => Err(Error::Config(format!("unknown algorithm {other:?}"))),
        }
    }
}

/// Solver settings. [`AlgoConfig::for_problem`] gives the reference protocol.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AlgoConfig {
    pub population: usize,
    pub max_evaluations: usize,
    pub crossover_rate: f64,
    pub mutation_probability: f64,
    pub sbx_index: f64,
    pub mutation_index: f64,
    /// MOEA/D neighborhood size `T`.
    pub neighborhood: usize,
    /// MOEA/D probability `delta` of mating inside the neighborhood.
    pub neighbor_probability: f64,
    /// MOEA/D cap `nr` on replacements per child.
    pub max_replacements: usize,
    pub seed: u64,
}

impl AlgoConfig {
    /// Reference settings for an `m`-objective, `n`-variable problem:
    /// N = 200 / T = 20 / 100000 evaluations for m = 2 and
    /// N = 105 / T = 10 / 200000 evaluations for m = 3.
    pub fn for_problem(m: usize, n: usize, seed: u64) -> Self {
        let (population, neighborhood, max_evaluations) = if m <= 2 {
            (200, 20, 100_000)
        } else {
            (105, 10, 200_000)
        };
        AlgoConfig {
            population,
            max_evaluations,
            crossover_rate: 0.9,
            mutation_probability: 1.0 / n as f64,
            sbx_index: 20.0,
            mutation_index: 20.0,
            neighborhood,
            neighbor_probability: 0.9,
            max_replacements: 2,
            seed,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let fail = |msg: String| Err(Error::Construction(msg));
        if self.population == 0 {
            return fail("population must be positive".into());
        }
        if self.max_evaluations < self.population {
            return fail(format!(
                "budget {} cannot cover the initial population of {}",
                self.max_evaluations, self.population
            ));
        }
        for (name, v) in [
            ("crossover rate", self.crossover_rate),
            ("mutation probability", self.mutation_probability),
            ("neighbor probability", self.neighbor_probability),
        ] {
            if !(0.0..=1.0).contains(&v) {
                return fail(format!("{name} {v} outside [0, 1]"));
            }
        }
        if self.neighborhood == 0 || self.neighborhood > self.population {
            return fail(format!(
                "neighborhood {} must be in 1..={}",
                self.neighborhood, self.population
            ));
        }
        if self.max_replacements == 0 {
            return fail("max replacements must be at least 1".into());
        }
        if !(self.sbx_index >= 0.0 && self.mutation_index >= 0.0) {
            return fail("distribution indices must be nonnegative".into());
        }
        Ok(())
    }
}

/// Records population IGD against `front` every `interval` evaluations.
pub struct Tracer<'a> {
    pub front: &'a ReferenceFront,
    pub interval: usize,
}

/// IGD sample taken during a run.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TracePoint {
    pub evaluations: usize,
    pub igd: f64,
}

#[derive(Debug, Clone)]
pub struct RunOutput {
    pub population: Vec<EvaluatedSolution>,
    pub evaluations: usize,
    pub igd_trace: Vec<TracePoint>,
}

/// Counts evaluations against the budget and takes trace samples.
pub(crate) struct Budget<'a, 't> {
    inst: &'a ProblemInstance,
    max: usize,
    used: usize,
    tracer: Option<&'a Tracer<'t>>,
    trace: Vec<TracePoint>,
}

impl<'a, 't> Budget<'a, 't> {
    pub(crate) fn new(inst: &'a ProblemInstance, max: usize, tracer: Option<&'a Tracer<'t>>) -> Self {
        Budget {
            inst,
            max,
            used: 0,
            tracer,
            trace: Vec::new(),
        }
    }

    pub(crate) fn remaining(&self) -> usize {
        self.max - self.used
    }

    pub(crate) fn used(&self) -> usize {
        self.used
    }

    pub(crate) fn evaluate(&mut self, x: Vec<f64>) -> Result<EvaluatedSolution> {
        debug_assert!(self.used < self.max);
        self.used += 1;
        self.inst.evaluate_solution(x)
    }

    /// Samples IGD if an interval boundary was crossed since `before`.
    pub(crate) fn observe(&mut self, before: usize, population: &[EvaluatedSolution]) -> Result<()> {
        if let Some(t) = self.tracer {
            if t.interval > 0 && self.used / t.interval > before / t.interval {
                self.trace.push(TracePoint {
                    evaluations: self.used,
                    igd: population_igd(t.front, population)?,
                });
            }
        }
        Ok(())
    }

    pub(crate) fn finish(self, population: Vec<EvaluatedSolution>) -> RunOutput {
        RunOutput {
            population,
            evaluations: self.used,
            igd_trace: self.trace,
        }
    }
}

pub(crate) fn random_population(
    budget: &mut Budget<'_, '_>,
    size: usize,
    n: usize,
    rng: &mut ChaCha8Rng,
) -> Result<Vec<EvaluatedSolution>> {
    (0..size)
        .map(|_| {
            let x: Vec<f64> = (0..n).map(|_| rng.gen::<f64>()).collect();
            budget.evaluate(x)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reference_settings() {
        let c = AlgoConfig::for_problem(2, 30, 1);
        assert_eq!((c.population, c.neighborhood, c.max_evaluations), (200, 20, 100_000));
        assert_eq!(c.mutation_probability, 1.0 / 30.0);
        assert_eq!((c.crossover_rate, c.sbx_index, c.mutation_index), (0.9, 20.0, 20.0));
        assert_eq!((c.neighbor_probability, c.max_replacements), (0.9, 2));
        let c = AlgoConfig::for_problem(3, 30, 1);
        assert_eq!((c.population, c.neighborhood, c.max_evaluations), (105, 10, 200_000));
        c.validate().unwrap();
    }

    #[test]
    fn config_validation() {
        let base = AlgoConfig::for_problem(2, 30, 1);
        let mut c = base.clone();
        c.max_evaluations = 10;
        assert!(c.validate().is_err());
        let mut c = base.clone();
        c.neighborhood = 201;
        assert!(c.validate().is_err());
        let mut c = base.clone();
        c.crossover_rate = 1.5;
        assert!(c.validate().is_err());
        let mut c = base;
        c.max_replacements = 0;
        assert!(c.validate().is_err());
    }

    #[test]
    fn algorithm_names_round_trip() {
        for a in Algorithm::ALL {
            assert_eq!(a.name().parse::<Algorithm>().unwrap(), a);
        }
        assert!("spea2".parse::<Algorithm>().is_err());
    }
}
