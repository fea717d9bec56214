//! Simulated binary crossover and polynomial mutation on `[0, 1]` variables.
//!
//! Crossover uses the unbounded spread distribution, mutation the bounded
//! perturbation distribution; both clip the result to the unit box.

use rand::Rng;

/// Spread factor for an SBX draw `u` in `[0, 1)`.
pub fn sbx_spread(u: f64, index: f64) -> f64 {
    let e = 1.0 / (index + 1.0);
    if u <= 0.5 {
        (2.0 * u).powf(e)
    } else {
        (1.0 / (2.0 * (1.0 - u))).powf(e)
    }
}

/// Children of one variable for a given draw, before clipping.
pub fn sbx_variable(p1: f64, p2: f64, u: f64, index: f64) -> (f64, f64) {
    let beta = sbx_spread(u, index);
    let c1 = 0.5 * ((1.0 + beta) * p1 + (1.0 - beta) * p2);
    let c2 = 0.5 * ((1.0 - beta) * p1 + (1.0 + beta) * p2);
    (c1, c2)
}

/// Simulated binary crossover. With probability `rate` the pair recombines,
/// each variable independently with probability 0.5; otherwise the children
/// are copies of the parents.
pub fn sbx_crossover<R: Rng + ?Sized>(
    p1: &[f64],
    p2: &[f64],
    rate: f64,
    index: f64,
    rng: &mut R,
) -> (Vec<f64>, Vec<f64>) {
    debug_assert_eq!(p1.len(), p2.len());
    let mut c1 = p1.to_vec();
    let mut c2 = p2.to_vec();
    if rng.gen::<f64>() >= rate {
        return (c1, c2);
    }
    for i in 0..p1.len() {
        if rng.gen::<f64>() >= 0.5 || (p1[i] - p2[i]).abs() <= 1e-14 {
            continue;
        }
        let (a, b) = sbx_variable(p1[i], p2[i], rng.gen::<f64>(), index);
        c1[i] = a.clamp(0.0, 1.0);
        c2[i] = b.clamp(0.0, 1.0);
    }
    (c1, c2)
}

/// Perturbation of a variable at `x` in `[0, 1]` for a draw `u` in `[0, 1)`.
/// The distribution is scaled by the distance to the nearer bound, so small
/// steps stay likely near the box edges.
pub fn mutation_delta(x: f64, u: f64, index: f64) -> f64 {
    let e = 1.0 / (index + 1.0);
    if u < 0.5 {
        let gap = 1.0 - x;
        let val = 2.0 * u + (1.0 - 2.0 * u) * gap.powf(index + 1.0);
        val.powf(e) - 1.0
    } else {
        let gap = x;
        let val = 2.0 * (1.0 - u) + 2.0 * (u - 0.5) * gap.powf(index + 1.0);
        1.0 - val.powf(e)
    }
}

/// Polynomial mutation: each variable mutates with probability `prob`.
pub fn polynomial_mutation<R: Rng + ?Sized>(x: &mut [f64], prob: f64, index: f64, rng: &mut R) {
    for v in x.iter_mut() {
        if rng.gen::<f64>() < prob {
            *v = (*v + mutation_delta(*v, rng.gen::<f64>(), index)).clamp(0.0, 1.0);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn midpoint_draws_are_neutral() {
        assert_eq!(sbx_spread(0.5, 20.0), 1.0);
        assert_eq!(sbx_variable(0.2, 0.7, 0.5, 20.0), (0.2, 0.7));
        for x in [0.0, 0.3, 1.0] {
            assert_eq!(mutation_delta(x, 0.5, 20.0), 0.0);
        }
    }

    #[test]
    fn identical_parents_are_preserved() {
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let p: Vec<f64> = (0..30).map(|i| i as f64 / 29.0).collect();
        for _ in 0..100 {
            let (a, b) = sbx_crossover(&p, &p, 1.0, 20.0, &mut rng);
            assert_eq!(a, p);
            assert_eq!(b, p);
        }
    }

    #[test]
    fn zero_probability_mutation_is_identity() {
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let mut x = vec![0.3; 30];
        polynomial_mutation(&mut x, 0.0, 20.0, &mut rng);
        assert_eq!(x, vec![0.3; 30]);
    }

    #[test]
    fn sbx_preserves_the_pair_mean() {
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        let p1 = [0.3, 0.45, 0.6];
        let p2 = [0.5, 0.55, 0.4];
        let trials = 100_000;
        let mut sums = [0.0; 3];
        for _ in 0..trials {
            let (a, b) = sbx_crossover(&p1, &p2, 0.9, 20.0, &mut rng);
            for i in 0..3 {
                sums[i] += a[i] + b[i];
            }
        }
        for i in 0..3 {
            let mean = sums[i] / trials as f64;
            assert!((mean - (p1[i] + p2[i])).abs() <= 1e-2, "var {i}: {mean}");
        }
    }

    #[test]
    fn mutation_rate_matches_probability() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let trials = 100_000;
        let mut changed = 0usize;
        for _ in 0..trials {
            let mut x = vec![0.5; 30];
            polynomial_mutation(&mut x, 1.0 / 30.0, 20.0, &mut rng);
            changed += x.iter().filter(|&&v| v != 0.5).count();
        }
        let fraction = changed as f64 / (trials * 30) as f64;
        assert!((fraction - 1.0 / 30.0).abs() <= 0.002, "{fraction}");
    }

    #[test]
    fn bounded_mutation_steps_stay_inside_before_clipping() {
        for i in 0..=100 {
            let x = i as f64 / 100.0;
            for j in 0..1000 {
                let u = j as f64 / 1000.0;
                let y = x + mutation_delta(x, u, 20.0);
                assert!((-1e-12..=1.0 + 1e-12).contains(&y), "x={x} u={u} -> {y}");
            }
        }
    }

    #[test]
    fn operators_stay_in_the_box() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for _ in 0..10_000 {
            let p1: Vec<f64> = (0..5).map(|_| rng.gen()).collect();
            let p2: Vec<f64> = (0..5).map(|_| rng.gen()).collect();
            let (mut a, b) = sbx_crossover(&p1, &p2, 1.0, 2.0, &mut rng);
            polynomial_mutation(&mut a, 1.0, 1.0, &mut rng);
            assert!(a.iter().chain(&b).all(|v| (0.0..=1.0).contains(v)));
        }
    }
}
