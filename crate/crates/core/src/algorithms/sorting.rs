/// Fast nondominated sorting over `n` items under an arbitrary strict
/// dominance relation. Returns the fronts as index lists, best first; each
/// front lists its members in ascending index order.
pub fn fast_nondominated_sort<F>(n: usize, dominates: F) -> Vec<Vec<usize>>
where
    F: Fn(usize, usize) -> bool,
{
    let mut dominated_by_me: Vec<Vec<usize>> = vec![Vec::new(); n];
    let mut counts = vec![0usize; n];
    for i in 0..n {
        for j in i + 1..n {
            if dominates(i, j) {
                dominated_by_me[i].push(j);
                counts[j] += 1;
            } else if dominates(j, i) {
                dominated_by_me[j].push(i);
                counts[i] += 1;
            }
        }
    }
    let mut fronts = Vec::new();
    let mut current: Vec<usize> = (0..n).filter(|&i| counts[i] == 0).collect();
    while !current.is_empty() {
        let mut next = Vec::new();
        for &i in &current {
            for &j in &dominated_by_me[i] {
                counts[j] -= 1;
                if counts[j] == 0 {
                    next.push(j);
                }
            }
        }
        next.sort_unstable();
        fronts.push(current);
        current = next;
    }
    fronts
}

/// Crowding distance of each member of a front. Boundary members of every
/// objective get `+inf`; interior members sum their normalized neighbor gaps.
pub fn crowding_distance(front: &[&[f64]]) -> Vec<f64> {
    let n = front.len();
    let mut dist = vec![0.0; n];
    if n == 0 {
        return dist;
    }
    if n <= 2 {
        return vec![f64::INFINITY; n];
    }
    let m = front[0].len();
    let mut order: Vec<usize> = (0..n).collect();
    for k in 0..m {
        order.sort_by(|&a, &b| front[a][k].total_cmp(&front[b][k]).then(a.cmp(&b)));
        let lo = front[order[0]][k];
        let hi = front[order[n - 1]][k];
        dist[order[0]] = f64::INFINITY;
        dist[order[n - 1]] = f64::INFINITY;
        let span = hi - lo;
        if span <= 0.0 {
            continue;
        }
        for w in 1..n - 1 {
            let i = order[w];
            if dist[i].is_finite() {
                dist[i] += (front[order[w + 1]][k] - front[order[w - 1]][k]) / span;
            }
        }
    }
    dist
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::solution::{cdp_dominates, EvaluatedSolution};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    /// Repeatedly peels off the members no remaining member dominates.
    fn peel(n: usize, dom: impl Fn(usize, usize) -> bool) -> Vec<Vec<usize>> {
        let mut left: Vec<usize> = (0..n).collect();
        let mut fronts = Vec::new();
        while !left.is_empty() {
            let front: Vec<usize> = left
                .iter()
                .copied()
                .filter(|&i| !left.iter().any(|&j| dom(j, i)))
                .collect();
            left.retain(|i| !front.contains(i));
            fronts.push(front);
        }
        fronts
    }

    #[test]
    fn cdp_sort_matches_front_peeling() {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        for _ in 0..50 {
            let pop: Vec<EvaluatedSolution> = (0..50)
                .map(|_| {
                    let violation = if rng.gen_bool(0.5) { 0.0 } else { (rng.gen::<f64>() * 4.0).floor() / 4.0 };
                    EvaluatedSolution {
                        x: vec![],
                        f: (0..2).map(|_| (rng.gen::<f64>() * 6.0).floor()).collect(),
                        c: vec![],
                        violation,
                    }
                })
                .collect();
            let dom = |i: usize, j: usize| cdp_dominates(&pop[i], &pop[j]);
            assert_eq!(fast_nondominated_sort(pop.len(), dom), peel(pop.len(), dom));
        }
    }

    #[test]
    fn crowding_examples() {
        let a = [0.0, 1.0];
        let b = [1.0, 0.0];
        assert_eq!(crowding_distance(&[&a, &b]), vec![f64::INFINITY; 2]);

        let p = [[0.0, 2.0], [1.0, 1.0], [2.0, 0.0]];
        let front: Vec<&[f64]> = p.iter().map(|v| v.as_slice()).collect();
        let d = crowding_distance(&front);
        assert!(d[0].is_infinite() && d[2].is_infinite());
        assert_eq!(d[1], 2.0);
    }

    #[test]
    fn crowding_is_order_invariant() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let pts: Vec<Vec<f64>> = (0..12).map(|_| vec![rng.gen(), rng.gen(), rng.gen()]).collect();
        let front: Vec<&[f64]> = pts.iter().map(|v| v.as_slice()).collect();
        let base = crowding_distance(&front);
        let perm = [5, 0, 11, 3, 7, 1, 9, 2, 10, 4, 8, 6];
        let shuffled: Vec<&[f64]> = perm.iter().map(|&i| pts[i].as_slice()).collect();
        let d = crowding_distance(&shuffled);
        for (k, &i) in perm.iter().enumerate() {
            assert_eq!(d[k], base[i]);
        }
    }
}
