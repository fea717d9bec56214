//! Generational NSGA-II with ranks taken from constraint dominance.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::operators::{polynomial_mutation, sbx_crossover};
use super::sorting::{crowding_distance, fast_nondominated_sort};
use super::{random_population, AlgoConfig, Budget, RunOutput, Tracer};
use crate::error::Result;
use crate::solution::{cdp_dominates, EvaluatedSolution};
use crate::toolkit::ProblemInstance;

/// Rank (0 = best) and crowding distance of every member.
#[derive(Debug, Clone, PartialEq)]
pub(crate) struct Fitness {
    pub rank: Vec<usize>,
    pub crowding: Vec<f64>,
}

/// Picks `keep` survivors from `pool`: whole fronts first, then the most
/// crowded-apart members of the first front that does not fit. Returns the
/// survivors with their fitness.
pub(crate) fn environmental_selection(
    pool: Vec<EvaluatedSolution>,
    keep: usize,
) -> (Vec<EvaluatedSolution>, Fitness) {
    let fronts = fast_nondominated_sort(pool.len(), |i, j| cdp_dominates(&pool[i], &pool[j]));
    let mut chosen: Vec<(usize, usize, f64)> = Vec::with_capacity(keep);
    for (rank, front) in fronts.iter().enumerate() {
        if chosen.len() >= keep {
            break;
        }
        let objs: Vec<&[f64]> = front.iter().map(|&i| pool[i].f.as_slice()).collect();
        let cd = crowding_distance(&objs);
        let mut members: Vec<(usize, usize, f64)> =
            front.iter().zip(cd).map(|(&i, d)| (i, rank, d)).collect();
        let room = keep - chosen.len();
        if members.len() > room {
            members.sort_by(|a, b| b.2.total_cmp(&a.2).then(a.0.cmp(&b.0)));
            members.truncate(room);
        }
        chosen.extend(members);
    }

    let mut slots: Vec<Option<EvaluatedSolution>> = pool.into_iter().map(Some).collect();
    let mut survivors = Vec::with_capacity(chosen.len());
    let mut fitness = Fitness {
        rank: Vec::with_capacity(chosen.len()),
        crowding: Vec::with_capacity(chosen.len()),
    };
    for (i, rank, d) in chosen {
        survivors.push(slots[i].take().expect("each index is chosen once"));
        fitness.rank.push(rank);
        fitness.crowding.push(d);
    }
    (survivors, fitness)
}

/// Binary tournament on (rank, crowding); full ties are a coin flip.
fn tournament(fit: &Fitness, rng: &mut ChaCha8Rng) -> usize {
    let n = fit.rank.len();
    let a = rng.gen_range(0..n);
    let b = rng.gen_range(0..n);
    if fit.rank[a] != fit.rank[b] {
        return if fit.rank[a] < fit.rank[b] { a } else { b };
    }
    if fit.crowding[a] != fit.crowding[b] {
        return if fit.crowding[a] > fit.crowding[b] { a } else { b };
    }
    if rng.gen_bool(0.5) {
        a
    } else {
        b
    }
}

pub fn nsga2_cdp_run(
    inst: &ProblemInstance,
    cfg: &AlgoConfig,
    tracer: Option<&Tracer<'_>>,
) -> Result<RunOutput> {
    cfg.validate()?;
    let n = cfg.population;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut budget = Budget::new(inst, cfg.max_evaluations, tracer);

    let initial = random_population(&mut budget, n, inst.n(), &mut rng)?;
    budget.observe(0, &initial)?;
    if budget.remaining() == 0 {
        return Ok(budget.finish(initial));
    }
    let (mut pop, mut fit) = environmental_selection(initial, n);

    while budget.remaining() > 0 {
        let before = budget.used();
        let count = n.min(budget.remaining());
        let mut offspring = Vec::with_capacity(count);
        while offspring.len() < count {
            let a = tournament(&fit, &mut rng);
            let b = tournament(&fit, &mut rng);
            let (mut c1, mut c2) = sbx_crossover(&pop[a].x, &pop[b].x, cfg.crossover_rate, cfg.sbx_index, &mut rng);
            polynomial_mutation(&mut c1, cfg.mutation_probability, cfg.mutation_index, &mut rng);
            polynomial_mutation(&mut c2, cfg.mutation_probability, cfg.mutation_index, &mut rng);
            offspring.push(budget.evaluate(c1)?);
            if offspring.len() < count {
                offspring.push(budget.evaluate(c2)?);
            }
        }
        pop.extend(offspring);
        let (next, next_fit) = environmental_selection(pop, n);
        pop = next;
        fit = next_fit;
        budget.observe(before, &pop)?;
    }
    Ok(budget.finish(pop))
}
