use crate::error::{Error, Result};

/// Uniformly spaced weight vectors on the unit simplex.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightVectorSet {
    pub vectors: Vec<Vec<f64>>,
}

impl WeightVectorSet {
    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    /// Indices of the `t` closest vectors to each vector (itself included),
    /// nearest first.
    pub fn neighborhoods(&self, t: usize) -> Vec<Vec<usize>> {
        self.vectors
            .iter()
            .map(|w| {
                let mut idx: Vec<(f64, usize)> = self
                    .vectors
                    .iter()
                    .enumerate()
                    .map(|(j, v)| (w.iter().zip(v).map(|(a, b)| (a - b) * (a - b)).sum(), j))
                    .collect();
                idx.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
                idx.into_iter().take(t).map(|(_, j)| j).collect()
            })
            .collect()
    }
}

fn binomial(n: usize, k: usize) -> usize {
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

/// All `m`-vectors with entries in `{0, 1/h, ..., 1}` summing to 1.
pub fn simplex_lattice(m: usize, h: usize) -> Vec<Vec<f64>> {
    fn fill(m: usize, left: usize, h: usize, prefix: &mut Vec<usize>, out: &mut Vec<Vec<f64>>) {
        if prefix.len() == m - 1 {
            prefix.push(left);
            out.push(prefix.iter().map(|&k| k as f64 / h as f64).collect());
            prefix.pop();
            return;
        }
        for k in 0..=left {
            prefix.push(k);
            fill(m, left - k, h, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::with_capacity(binomial(h + m - 1, m - 1));
    fill(m, h, h, &mut Vec::with_capacity(m), &mut out);
    out
}

/// `n` weight vectors for `m` objectives. Two objectives take any `n >= 2`;
/// otherwise `n` must equal `C(h + m - 1, m - 1)` for some lattice depth `h`.
pub fn generate_weight_vectors(m: usize, n: usize) -> Result<WeightVectorSet> {
    if m < 2 || n < 2 {
        return Err(Error::Construction(format!("cannot build {n} weight vectors for m={m}")));
    }
    if m == 2 {
        let vectors = (0..n)
            .map(|i| {
                let w = i as f64 / (n - 1) as f64;
                vec![w, 1.0 - w]
            })
            .collect();
        return Ok(WeightVectorSet { vectors });
    }
    let mut h = 1;
    loop {
        let count = binomial(h + m - 1, m - 1);
        if count == n {
            return Ok(WeightVectorSet {
                vectors: simplex_lattice(m, h),
            });
        }
        if count > n {
            return Err(Error::Construction(format!(
                "{n} is not a simplex-lattice size for m={m}"
            )));
        }
        h += 1;
    }
}
