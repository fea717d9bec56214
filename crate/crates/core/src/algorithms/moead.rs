//! MOEA/D with constraint-dominance replacement.
//!
//! Each subproblem is a Tchebycheff scalarization around an online ideal
//! point. A child replaces a neighbor when it is feasible against an
//! infeasible incumbent, has smaller violation when both are infeasible, or
//! has a strictly smaller aggregation value when both are feasible.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::operators::{polynomial_mutation, sbx_crossover};
use super::weights::generate_weight_vectors;
use super::{random_population, AlgoConfig, Budget, RunOutput, Tracer};
use crate::error::Result;
use crate::solution::EvaluatedSolution;
use crate::toolkit::ProblemInstance;

/// Floor applied to zero weight components inside the Tchebycheff function.
const MIN_WEIGHT: f64 = 1e-6;

pub(crate) fn tchebycheff(f: &[f64], weight: &[f64], ideal: &[f64]) -> f64 {
    f.iter()
        .zip(weight)
        .zip(ideal)
        .map(|((fi, w), z)| w.max(MIN_WEIGHT) * (fi - z).abs())
        .fold(f64::NEG_INFINITY, f64::max)
}

/// Whether `child` should replace `incumbent` on the subproblem `weight`.
pub(crate) fn replaces(
    child: &EvaluatedSolution,
    incumbent: &EvaluatedSolution,
    weight: &[f64],
    ideal: &[f64],
) -> bool {
    match (child.is_feasible(), incumbent.is_feasible()) {
        (true, false) => true,
        (false, true) => false,
        (false, false) => child.violation < incumbent.violation,
        (true, true) => tchebycheff(&child.f, weight, ideal) < tchebycheff(&incumbent.f, weight, ideal),
    }
}

pub fn moead_cdp_run(
    inst: &ProblemInstance,
    cfg: &AlgoConfig,
    tracer: Option<&Tracer<'_>>,
) -> Result<RunOutput> {
    cfg.validate()?;
    let weights = generate_weight_vectors(inst.m(), cfg.population)?;
    let neighbors = weights.neighborhoods(cfg.neighborhood);
    let n = cfg.population;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut budget = Budget::new(inst, cfg.max_evaluations, tracer);

    let mut pop = random_population(&mut budget, n, inst.n(), &mut rng)?;
    let mut ideal = vec![f64::INFINITY; inst.m()];
    for s in &pop {
        update_ideal(&mut ideal, &s.f);
    }
    budget.observe(0, &pop)?;

    let everyone: Vec<usize> = (0..n).collect();
    let mut order: Vec<usize> = (0..n).collect();
    while budget.remaining() > 0 {
        order.shuffle(&mut rng);
        for &i in &order {
            if budget.remaining() == 0 {
                break;
            }
            let pool = if rng.gen::<f64>() < cfg.neighbor_probability {
                &neighbors[i]
            } else {
                &everyone
            };
            let (a, b) = pick_two(pool, &mut rng);
            let (mut child, _) = sbx_crossover(&pop[a].x, &pop[b].x, cfg.crossover_rate, cfg.sbx_index, &mut rng);
            polynomial_mutation(&mut child, cfg.mutation_probability, cfg.mutation_index, &mut rng);

            let before = budget.used();
            let child = budget.evaluate(child)?;
            update_ideal(&mut ideal, &child.f);

            let mut candidates = pool.clone();
            candidates.shuffle(&mut rng);
            let mut replaced = 0;
            for j in candidates {
                if replaced >= cfg.max_replacements {
                    break;
                }
                if replaces(&child, &pop[j], &weights.vectors[j], &ideal) {
                    pop[j] = child.clone();
                    replaced += 1;
                }
            }
            budget.observe(before, &pop)?;
        }
    }
    Ok(budget.finish(pop))
}

fn update_ideal(ideal: &mut [f64], f: &[f64]) {
    for (z, &v) in ideal.iter_mut().zip(f) {
        if v < *z {
            *z = v;
        }
    }
}

fn pick_two(pool: &[usize], rng: &mut ChaCha8Rng) -> (usize, usize) {
    if pool.len() < 2 {
        return (pool[0], pool[0]);
    }
    let a = rng.gen_range(0..pool.len());
    let mut b = rng.gen_range(0..pool.len() - 1);
    if b >= a {
        b += 1;
    }
    (pool[a], pool[b])
}
