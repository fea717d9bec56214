//! The nine named instances DAS-CMOP1-9.
//!
//! | ids | m | shape | distance | K, P, Q |
//! |-----|---|-------|----------|---------|
//! | 1-3 | 2 | convex / concave / discontinuous | split sin/cos (`g1`, `g2`) | 1, 2, 9 |
//! | 4-6 | 2 | same as 1-3 | Rastrigin-like `g` | 1, 1, 9 |
//! | 7   | 3 | linear simplex | Rastrigin-like `g` | 2, 1, 4 |
//! | 8   | 3 | unit sphere | Rastrigin-like `g` | 2, 1, 4 |
//! | 9   | 3 | unit sphere | position-linked cosine `g` | 2, 1, 4 |
//!
//! All instances use `n = 30`, `a = 20`, `d = 0.5`.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::solution::DifficultyTriplet;
use crate::toolkit::{
    DistanceFunction, EllipseParams, GeneratorSpec, ObjectiveRegion, ProblemInstance, ShapeFunction,
};

pub const NAMED_N: usize = 30;
pub const NAMED_SEGMENT_FREQUENCY: f64 = 20.0;
pub const NAMED_OFFSET: f64 = 0.5;

const ELLIPSE_P: [f64; 9] = [0.0, 1.0, 0.0, 1.0, 2.0, 0.0, 1.0, 2.0, 3.0];
const ELLIPSE_Q: [f64; 9] = [1.5, 0.5, 2.5, 1.5, 0.5, 3.5, 2.5, 1.5, 0.5];
const ELLIPSE_A2: f64 = 0.3;
const ELLIPSE_B2: f64 = 1.2;
const ELLIPSE_THETA: f64 = -0.25 * PI;

/// Identifier of a named instance, `1..=9`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "u8", into = "u8")]
pub struct ProblemId(u8);

impl ProblemId {
    pub fn new(k: u8) -> Result<Self> {
        if (1..=9).contains(&k) {
            Ok(ProblemId(k))
        } else {
            Err(Error::Contract(format!("no named problem das-cmop{k}")))
        }
    }

    pub fn all() -> impl Iterator<Item = ProblemId> {
        (1..=9).map(ProblemId)
    }

    pub fn get(self) -> u8 {
        self.0
    }

    pub fn objectives(self) -> usize {
        if self.0 <= 6 {
            2
        } else {
            3
        }
    }

    /// `(K, P, Q)` constraint layout.
    pub fn layout(self) -> (usize, usize, usize) {
        match self.0 {
            1..=3 => (1, 2, 9),
            4..=6 => (1, 1, 9),
            _ => (2, 1, 4),
        }
    }

    pub fn constraint_count(self) -> usize {
        let (k, p, q) = self.layout();
        k + p + q
    }

    pub fn generator_spec(self) -> GeneratorSpec {
        self.generator_spec_with_n(NAMED_N)
            .expect("named instances are valid at n = 30")
    }

    /// The generator behind this instance with a different variable count.
    pub fn generator_spec_with_n(self, n: usize) -> Result<GeneratorSpec> {
        let m = self.objectives();
        let (k, p, _) = self.layout();
        let shape = match self.0 {
            1 | 4 => NamedShape::Convex,
            2 | 5 => NamedShape::Concave,
            3 | 6 => NamedShape::Discontinuous,
            7 => NamedShape::Linear3,
            _ => NamedShape::Sphere3,
        };
        let distance = match self.0 {
            1..=3 => NamedDistance::SplitSinCos,
            4..=8 => NamedDistance::Rastrigin { shape_vars: m - 1 },
            _ => NamedDistance::LinkedCosine,
        };
        let spec = GeneratorSpec {
            name: self.to_string(),
            m,
            n,
            type1_count: k,
            type2_count: p,
            regions: if m == 2 { ellipses() } else { spheres() },
            segment_frequency: NAMED_SEGMENT_FREQUENCY,
            offset: NAMED_OFFSET,
            shape: Arc::new(shape),
            distance: Arc::new(distance),
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn instance(self, triplet: DifficultyTriplet) -> Result<ProblemInstance> {
        ProblemInstance::assemble(Arc::new(self.generator_spec()), triplet, Some(self))
    }
}

impl fmt::Display for ProblemId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "das-cmop{}", self.0)
    }
}

impl FromStr for ProblemId {
    type Err = Error;

    /// Accepts `das-cmop3`, `DAS-CMOP3`, `dascmop3` or a bare `3`.
    fn from_str(s: &str) -> Result<Self> {
        let lower = s.trim().to_ascii_lowercase();
        let digits = lower
            .strip_prefix("das-cmop")
            .or_else(|| lower.strip_prefix("dascmop"))
            .unwrap_or(&lower);
        let k: u8 = digits
            .parse()
            .map_err(|_| Error::Contract(format!("unrecognized problem name {s:?}")))?;
        ProblemId::new(k)
    }
}

impl TryFrom<u8> for ProblemId {
    type Error = Error;

    fn try_from(k: u8) -> Result<Self> {
        ProblemId::new(k)
    }
}

impl From<ProblemId> for u8 {
    fn from(id: ProblemId) -> u8 {
        id.0
    }
}

/// Convenience wrapper for [`ProblemId::instance`].
pub fn instance(id: ProblemId, triplet: DifficultyTriplet) -> Result<ProblemInstance> {
    id.instance(triplet)
}

fn ellipses() -> Vec<ObjectiveRegion> {
    ELLIPSE_P
        .iter()
        .zip(&ELLIPSE_Q)
        .map(|(&p, &q)| {
            ObjectiveRegion::Ellipse(EllipseParams {
                p,
                q,
                a2: ELLIPSE_A2,
                b2: ELLIPSE_B2,
                theta: ELLIPSE_THETA,
            })
        })
        .collect()
}

fn spheres() -> Vec<ObjectiveRegion> {
    let c = 1.0 / 3f64.sqrt();
    vec![
        ObjectiveRegion::Sphere { center: vec![1.0, 0.0, 0.0] },
        ObjectiveRegion::Sphere { center: vec![0.0, 1.0, 0.0] },
        ObjectiveRegion::Sphere { center: vec![0.0, 0.0, 1.0] },
        ObjectiveRegion::Sphere { center: vec![c, c, c] },
    ]
}

#[derive(Debug, Clone, Copy)]
enum NamedShape {
    /// `(s, 1 - s^2)`
    Convex,
    /// `(s, 1 - sqrt(s))`
    Concave,
    /// `(s, 1 - sqrt(s) + 0.5 |sin(5 pi s)|)`
    Discontinuous,
    /// `(s1 s2, s2 (1 - s1), 1 - s2)`
    Linear3,
    /// Positive octant of the unit sphere.
    Sphere3,
}

impl ShapeFunction for NamedShape {
    fn shape(&self, s: &[f64], out: &mut [f64]) {
        match self {
            NamedShape::Convex => {
                out[0] = s[0];
                out[1] = 1.0 - s[0] * s[0];
            }
            NamedShape::Concave => {
                out[0] = s[0];
                out[1] = 1.0 - s[0].sqrt();
            }
            NamedShape::Discontinuous => {
                out[0] = s[0];
                out[1] = 1.0 - s[0].sqrt() + 0.5 * (5.0 * PI * s[0]).sin().abs();
            }
            NamedShape::Linear3 => {
                out[0] = s[0] * s[1];
                out[1] = s[1] * (1.0 - s[0]);
                out[2] = 1.0 - s[1];
            }
            NamedShape::Sphere3 => {
                let (s1, c1) = (0.5 * PI * s[0]).sin_cos();
                let (s2, c2) = (0.5 * PI * s[1]).sin_cos();
                out[0] = c1 * c2;
                out[1] = c1 * s2;
                out[2] = s1;
            }
        }
    }
}

#[derive(Debug, Clone, Copy)]
enum NamedDistance {
    /// `g1` over odd positions `j >= 3` tracking `sin(0.5 pi x1)` feeds `f1`;
    /// `g2` over even positions tracking `cos(0.5 pi x1)` feeds `f2`.
    SplitSinCos,
    /// `(n - s) + sum_{j > s} (x_j - 0.5)^2 - cos(20 pi (x_j - 0.5))`, shared by
    /// every objective.
    Rastrigin { shape_vars: usize },
    /// `sum_{j >= 3} (x_j - cos(0.25 j / n * pi (x1 + x2)))^2`, shared.
    LinkedCosine,
}

impl DistanceFunction for NamedDistance {
    fn distance(&self, x: &[f64], out: &mut [f64]) {
        let n = x.len();
        match *self {
            NamedDistance::SplitSinCos => {
                let (sin1, cos1) = (0.5 * PI * x[0]).sin_cos();
                let (mut g1, mut g2) = (0.0, 0.0);
                // 1-based j = idx + 1
                for (idx, &xj) in x.iter().enumerate().skip(1) {
                    if idx % 2 == 0 {
                        g1 += (xj - sin1) * (xj - sin1);
                    } else {
                        g2 += (xj - cos1) * (xj - cos1);
                    }
                }
                out[0] = g1;
                out[1] = g2;
            }
            NamedDistance::Rastrigin { shape_vars } => {
                let mut g = (n - shape_vars) as f64;
                for &xj in &x[shape_vars..] {
                    let y = xj - 0.5;
                    g += y * y - (20.0 * PI * y).cos();
                }
                out.fill(g);
            }
            NamedDistance::LinkedCosine => {
                let t = x[0] + x[1];
                let mut g = 0.0;
                for (idx, &xj) in x.iter().enumerate().skip(2) {
                    let j = (idx + 1) as f64;
                    let target = (0.25 * j / n as f64 * PI * t).cos();
                    g += (xj - target) * (xj - target);
                }
                out.fill(g);
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    fn inst(k: u8, eta: f64, zeta: f64, gamma: f64) -> ProblemInstance {
        ProblemId::new(k)
            .unwrap()
            .instance(DifficultyTriplet::new(eta, zeta, gamma).unwrap())
            .unwrap()
    }

    #[test]
    fn ids_parse_and_display() {
        for s in ["das-cmop3", "DAS-CMOP3", "dascmop3", "3"] {
            assert_eq!(s.parse::<ProblemId>().unwrap().get(), 3);
        }
        assert!("das-cmop10".parse::<ProblemId>().is_err());
        assert!("zdt1".parse::<ProblemId>().is_err());
        assert_eq!(ProblemId::new(7).unwrap().to_string(), "das-cmop7");
    }

    #[test]
    fn constraint_counts() {
        // c1, c2, c3, c4..c12
        assert_eq!(inst(1, 0.0, 0.0, 0.0).constraint_count(), 12);
        // c1, c2, c3..c11
        assert_eq!(inst(4, 0.0, 0.0, 0.0).constraint_count(), 11);
        // c1..c7
        assert_eq!(inst(7, 0.3, 0.6, 0.9).constraint_count(), 7);
        for id in ProblemId::all() {
            let i = id.instance(DifficultyTriplet::ZERO).unwrap();
            assert_eq!(i.constraint_count(), id.constraint_count());
            assert_eq!(i.n(), 30);
            assert_eq!(i.m(), id.objectives());
        }
    }

    #[test]
    fn das_cmop1_distance_vanishes_on_the_linkage() {
        let p = inst(1, 0.0, 0.0, 0.0);
        let mut x = vec![0.0; 30];
        x[0] = 0.5;
        let v = (0.25 * PI).sin();
        for xj in &mut x[1..] {
            *xj = v;
        }
        let (f, _) = p.evaluate(&x).unwrap();
        assert!(close(f[0], 0.5, 1e-15) && close(f[1], 0.75, 1e-15), "{f:?}");
    }

    #[test]
    fn das_cmop1_index_sets() {
        // Perturbing x_2 (even, 1-based) moves only f2; x_3 (odd) only f1.
        let p = inst(1, 0.0, 0.0, 0.0);
        let mut x = vec![0.0; 30];
        x[0] = 1.0; // sin = 1, cos ~ 0
        for (idx, xj) in x.iter_mut().enumerate().skip(1) {
            *xj = if idx % 2 == 0 { 1.0 } else { 0.0 };
        }
        let (base, _) = p.evaluate(&x).unwrap();
        let mut y = x.clone();
        y[1] = 0.5;
        let (f, _) = p.evaluate(&y).unwrap();
        assert_eq!(f[0], base[0]);
        assert!(f[1] > base[1]);
        let mut z = x.clone();
        z[2] = 0.5;
        let (f, _) = p.evaluate(&z).unwrap();
        assert!(f[0] > base[0]);
        assert_eq!(f[1], base[1]);
    }

    #[test]
    fn das_cmop4_rastrigin_minimum() {
        let p = inst(4, 0.0, 0.0, 0.0);
        for x1 in [0.0, 0.3, 1.0] {
            let mut x = vec![0.5; 30];
            x[0] = x1;
            let (f, _) = p.evaluate(&x).unwrap();
            assert!(close(f[0], x1, 1e-12) && close(f[1], 1.0 - x1 * x1, 1e-12), "{f:?}");
        }
    }

    #[test]
    fn das_cmop7_simplex_corner() {
        let p = inst(7, 0.0, 0.0, 0.0);
        let mut x = vec![0.5; 30];
        x[0] = 1.0;
        x[1] = 1.0;
        let (f, c) = p.evaluate(&x).unwrap();
        assert!(close(f[0], 1.0, 1e-12) && close(f[1], 0.0, 1e-12) && close(f[2], 0.0, 1e-12));
        assert!(c.iter().all(|&v| v >= 0.0));
    }

    #[test]
    fn das_cmop9_distance_zero_on_its_manifold() {
        let p = inst(9, 0.0, 0.0, 0.0);
        let (x1, x2) = (0.3, 0.6);
        let mut x = vec![0.0; 30];
        x[0] = x1;
        x[1] = x2;
        for (idx, xj) in x.iter_mut().enumerate().skip(2) {
            *xj = (0.25 * (idx + 1) as f64 / 30.0 * PI * (x1 + x2)).cos();
        }
        let (f, _) = p.evaluate(&x).unwrap();
        let pf = p.unconstrained_pf_point(&[x1, x2]).unwrap();
        for (a, b) in f.iter().zip(&pf) {
            assert!(close(*a, *b, 1e-15));
        }
    }

    #[test]
    fn unconstrained_front_closed_forms() {
        let pf = |k: u8, s: &[f64]| inst(k, 0.0, 0.0, 0.0).unconstrained_pf_point(s).unwrap();
        assert_eq!(pf(1, &[0.5]), vec![0.5, 0.75]);
        assert_eq!(pf(2, &[0.25]), vec![0.25, 0.5]);
        let f = pf(8, &[0.0, 0.0]);
        assert!(close(f[0], 1.0, 1e-15) && close(f[1], 0.0, 1e-15) && close(f[2], 0.0, 1e-15));

        for s in [0.0f64, 0.13, 0.5, 0.77, 1.0] {
            let sq = s.sqrt();
            assert_eq!(pf(4, &[s]), vec![s, 1.0 - s * s]);
            assert_eq!(pf(5, &[s]), vec![s, 1.0 - sq]);
            let f = pf(6, &[s]);
            assert!(close(f[1], 1.0 - sq + 0.5 * (5.0 * PI * s).sin().abs(), 1e-15));
            assert_eq!(pf(3, &[s]), f);
        }
        for (s1, s2) in [(0.2, 0.9), (1.0, 0.0), (0.5, 0.5)] {
            let f = pf(7, &[s1, s2]);
            assert!(close(f[0], s1 * s2, 1e-15) && close(f[1], s2 * (1.0 - s1), 1e-15) && close(f[2], 1.0 - s2, 1e-15));
            let f = pf(9, &[s1, s2]);
            let norm: f64 = f.iter().map(|v| v * v).sum();
            assert!(close(norm, 1.0, 1e-12));
        }
        assert!(inst(1, 0.0, 0.0, 0.0).unconstrained_pf_point(&[0.2, 0.3]).is_err());
        assert!(inst(1, 0.0, 0.0, 0.0).unconstrained_pf_point(&[1.5]).is_err());
    }

    #[test]
    fn evaluation_is_deterministic() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for id in ProblemId::all() {
            let p = id.instance(DifficultyTriplet::new(0.5, 0.5, 0.5).unwrap()).unwrap();
            let x: Vec<f64> = (0..30).map(|_| rng.gen()).collect();
            let a = p.evaluate(&x).unwrap();
            let b = p.evaluate(&x).unwrap();
            assert_eq!(a, b);
        }
    }

    #[test]
    fn out_of_bounds_input_is_rejected() {
        let p = inst(5, 0.0, 0.0, 0.0);
        let mut x = vec![0.5; 30];
        x[7] = -0.01;
        assert!(matches!(p.evaluate(&x), Err(Error::Contract(_))));
    }

    #[test]
    fn rastrigin_distance_is_nonnegative() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for k in 4..=8 {
            let p = inst(k, 0.0, 0.0, 0.0);
            for _ in 0..20_000 {
                let x: Vec<f64> = (0..30).map(|_| rng.gen()).collect();
                let (f, _) = p.evaluate(&x).unwrap();
                let s: Vec<f64> = x[..p.m() - 1].to_vec();
                let pf = p.unconstrained_pf_point(&s).unwrap();
                assert!(f[0] - pf[0] >= 0.0);
            }
        }
    }

    #[test]
    fn band_holds_at_feasible_points() {
        // ids 1-3: feasibility with Type-II active pins g1 and g2 into [d, e].
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let p = inst(1, 0.0, 0.25, 0.0);
        let e = p.params().e;
        let mut seen = 0;
        for _ in 0..50_000 {
            let x: Vec<f64> = (0..30).map(|_| rng.gen()).collect();
            let sol = p.evaluate_solution(x).unwrap();
            if sol.is_feasible() {
                seen += 1;
                let pf = p.unconstrained_pf_point(&sol.x[..1]).unwrap();
                for i in 0..2 {
                    let g = sol.f[i] - pf[i];
                    assert!(g >= 0.5 - 1e-12 && g <= e + 1e-12, "g={g}");
                }
            }
        }
        assert!(seen > 0);
    }
}
