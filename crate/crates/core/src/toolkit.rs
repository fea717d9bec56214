//! Construction toolkit: the three parameterized constraint families, the
//! difficulty-triplet mapping and the shape + distance assembler.
//!
//! An assembled problem minimizes `f_i(x) = alpha_i(x_{1:m-1}) + beta_i(x)`
//! subject to, in this order,
//!
//! * Type-I (`k = 1..K`): `sin(a pi x_k) - b >= 0` for odd `k`, `cos` for even `k`;
//! * Type-II (`p = 1..P`): `(e - beta_p)(beta_p - d) >= 0`;
//! * Type-III (`q = 1..Q`): one exclusion region per `q` in objective space.
//!
//! A family switched off by a zero triplet component keeps its slots and
//! reports the constant [`SATISFIED`], so the constraint vector has the same
//! length for every triplet.

use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::problems::ProblemId;
use crate::solution::{overall_violation, DifficultyTriplet, EvaluatedSolution};

/// Value reported by the slots of a disabled constraint family.
pub const SATISFIED: f64 = 1.0;

/// Constraint parameters derived from a [`DifficultyTriplet`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TripletParams {
    /// Type-I threshold, `b = 2 eta - 1`.
    pub b: f64,
    /// Lower edge of the Type-II band.
    pub d: f64,
    /// Upper edge of the Type-II band; `+inf` when Type-II is off.
    pub e: f64,
    /// Type-III level, `r = gamma / 2`.
    pub r: f64,
    pub type1_active: bool,
    pub type2_active: bool,
    pub type3_active: bool,
}

pub fn triplet_to_params(t: DifficultyTriplet, d: f64) -> Result<TripletParams> {
    t.validate()?;
    if !(d >= 0.0) || !d.is_finite() {
        return Err(Error::Contract(format!("band offset d={d} must be finite and >= 0")));
    }
    let type2_active = t.zeta > 0.0;
    Ok(TripletParams {
        b: 2.0 * t.eta - 1.0,
        d,
        e: if type2_active { d - t.zeta.ln() } else { f64::INFINITY },
        r: t.gamma / 2.0,
        type1_active: t.eta > 0.0,
        type2_active,
        type3_active: t.gamma > 0.0,
    })
}

/// Type-I constraint on a shape variable; `k` is 1-based.
pub fn type1_constraint(x_k: f64, k: usize, a: f64, b: f64) -> f64 {
    if k % 2 == 1 {
        (a * PI * x_k).sin() - b
    } else {
        (a * PI * x_k).cos() - b
    }
}

/// Type-II band constraint on a distance value.
pub fn type2_constraint(beta_p: f64, d: f64, e: f64) -> f64 {
    (e - beta_p) * (beta_p - d)
}

/// A rotated, stretched ellipse in a two-objective space.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EllipseParams {
    pub p: f64,
    pub q: f64,
    /// Squared half-axis along the rotated first coordinate.
    pub a2: f64,
    /// Squared half-axis along the rotated second coordinate.
    pub b2: f64,
    pub theta: f64,
}

impl EllipseParams {
    pub fn new(p: f64, q: f64, a2: f64, b2: f64, theta: f64) -> Result<Self> {
        if !(a2 > 0.0 && b2 > 0.0) {
            return Err(Error::Construction(format!(
                "ellipse half-axis squares must be positive (a2={a2}, b2={b2})"
            )));
        }
        Ok(EllipseParams { p, q, a2, b2, theta })
    }

    /// Translation vector `H = (p, q)`.
    pub fn translation(&self) -> [f64; 2] {
        [self.p, self.q]
    }

    /// Transformation matrix `S` in the (non-symmetric) printed form; its
    /// quadratic form equals the expanded rotation/stretch expression.
    pub fn matrix(&self) -> [[f64; 2]; 2] {
        let (s, c) = self.theta.sin_cos();
        let s2 = (2.0 * self.theta).sin();
        [
            [c * c / self.a2 + s * s / self.b2, -s2 / self.a2],
            [s2 / self.b2, c * c / self.b2 + s * s / self.a2],
        ]
    }

    /// Expanded quadratic value at `f`.
    pub fn quadratic(&self, f: &[f64]) -> f64 {
        let (s, c) = self.theta.sin_cos();
        let u = f[0] - self.p;
        let v = f[1] - self.q;
        let t1 = u * c - v * s;
        let t2 = u * s + v * c;
        t1 * t1 / self.a2 + t2 * t2 / self.b2
    }

    /// `(F - H)^T S (F - H)`.
    pub fn quadratic_matrix_form(&self, f: &[f64]) -> f64 {
        let s = self.matrix();
        let h = self.translation();
        let w = [f[0] - h[0], f[1] - h[1]];
        let mut acc = 0.0;
        for i in 0..2 {
            for j in 0..2 {
                acc += w[i] * s[i][j] * w[j];
            }
        }
        acc
    }
}

/// Two-objective Type-III value: expanded quadratic form minus `r`.
pub fn type3_ellipse_constraint(f: &[f64], ep: &EllipseParams, r: f64) -> f64 {
    ep.quadratic(f) - r
}

/// The four three-objective Type-III values: spheres around the three unit
/// vectors followed by the sphere around the centroid `(1,1,1)/sqrt(3)`.
/// These subtract `r^2`, unlike the two-objective ellipses.
pub fn type3_sphere_constraints(f: &[f64], r: f64) -> [f64; 4] {
    let mut out = [0.0; 4];
    for (k, slot) in out.iter_mut().take(3).enumerate() {
        let mut acc = 0.0;
        for (j, &fj) in f.iter().enumerate().take(3) {
            acc += if j == k { (fj - 1.0) * (fj - 1.0) } else { fj * fj };
        }
        *slot = acc - r * r;
    }
    let c = 1.0 / 3f64.sqrt();
    out[3] = f.iter().take(3).map(|&fj| (fj - c) * (fj - c)).sum::<f64>() - r * r;
    out
}

/// One Type-III exclusion region in objective space.
#[derive(Debug, Clone, PartialEq)]
pub enum ObjectiveRegion {
    /// Two-objective ellipse; feasible iff quadratic form `>= r`.
    Ellipse(EllipseParams),
    /// Sphere of squared radius `r^2` around `center`.
    Sphere { center: Vec<f64> },
}

impl ObjectiveRegion {
    pub fn dimension(&self) -> usize {
        match self {
            ObjectiveRegion::Ellipse(_) => 2,
            ObjectiveRegion::Sphere { center } => center.len(),
        }
    }

    pub fn constraint(&self, f: &[f64], r: f64) -> f64 {
        match self {
            ObjectiveRegion::Ellipse(ep) => type3_ellipse_constraint(f, ep, r),
            ObjectiveRegion::Sphere { center } => {
                let d2: f64 = f.iter().zip(center).map(|(a, b)| (a - b) * (a - b)).sum();
                d2 - r * r
            }
        }
    }
}

/// Shape part `alpha(x_{1:m-1})` of the objectives.
pub trait ShapeFunction: Send + Sync {
    /// Writes `alpha_1..alpha_m` for the shape parameters `s` (length `m - 1`).
    fn shape(&self, s: &[f64], out: &mut [f64]);
}

/// Distance part `beta(x)` of the objectives; must be nonnegative.
pub trait DistanceFunction: Send + Sync {
    /// Writes `beta_1..beta_m` for the full decision vector.
    fn distance(&self, x: &[f64], out: &mut [f64]);
}

impl<F> ShapeFunction for F
where
    F: Fn(&[f64], &mut [f64]) + Send + Sync,
{
    fn shape(&self, s: &[f64], out: &mut [f64]) {
        self(s, out)
    }
}

/// Wraps a closure as a [`DistanceFunction`]. Closures cannot implement both
/// traits through blanket impls, so distance closures go through this.
pub struct DistanceFn<F>(pub F);

impl<F> DistanceFunction for DistanceFn<F>
where
    F: Fn(&[f64], &mut [f64]) + Send + Sync,
{
    fn distance(&self, x: &[f64], out: &mut [f64]) {
        (self.0)(x, out)
    }
}

/// Everything needed to build a problem apart from the difficulty triplet.
#[derive(Clone)]
pub struct GeneratorSpec {
    pub name: String,
    /// Number of objectives.
    pub m: usize,
    /// Number of decision variables, all in `[0, 1]`.
    pub n: usize,
    /// Type-I constraint count `K`.
    pub type1_count: usize,
    /// Type-II constraint count `P`.
    pub type2_count: usize,
    /// Type-III regions; `Q` is their count.
    pub regions: Vec<ObjectiveRegion>,
    /// Segment frequency `a` of the Type-I constraints.
    pub segment_frequency: f64,
    /// Offset `d` between the unconstrained and the band-constrained front.
    pub offset: f64,
    pub shape: Arc<dyn ShapeFunction>,
    pub distance: Arc<dyn DistanceFunction>,
}

impl fmt::Debug for GeneratorSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("GeneratorSpec")
            .field("name", &self.name)
            .field("m", &self.m)
            .field("n", &self.n)
            .field("type1_count", &self.type1_count)
            .field("type2_count", &self.type2_count)
            .field("regions", &self.regions.len())
            .field("segment_frequency", &self.segment_frequency)
            .field("offset", &self.offset)
            .finish_non_exhaustive()
    }
}

impl GeneratorSpec {
    pub fn constraint_count(&self) -> usize {
        self.type1_count + self.type2_count + self.regions.len()
    }

    pub fn validate(&self) -> Result<()> {
        let fail = |msg: String| Err(Error::Construction(format!("{}: {msg}", self.name)));
        if self.m < 2 {
            return fail(format!("m={} must be at least 2", self.m));
        }
        if self.n < self.m {
            return fail(format!("n={} must be at least m={}", self.n, self.m));
        }
        if self.type1_count > self.m - 1 {
            return fail(format!("K={} exceeds m-1={}", self.type1_count, self.m - 1));
        }
        if self.type2_count > self.m {
            return fail(format!("P={} exceeds m={}", self.type2_count, self.m));
        }
        if self.regions.is_empty() {
            return fail("Q must be at least 1".to_string());
        }
        if let Some(bad) = self.regions.iter().find(|r| r.dimension() != self.m) {
            return fail(format!("region of dimension {} in an m={} problem", bad.dimension(), self.m));
        }
        if !(self.segment_frequency > 0.0) {
            return fail(format!("segment frequency a={} must be positive", self.segment_frequency));
        }
        if !(self.offset >= 0.0) {
            return fail(format!("offset d={} must be nonnegative", self.offset));
        }
        Ok(())
    }
}

/// A fully resolved problem: generator plus difficulty triplet.
#[derive(Debug, Clone)]
pub struct ProblemInstance {
    spec: Arc<GeneratorSpec>,
    triplet: DifficultyTriplet,
    params: TripletParams,
    id: Option<ProblemId>,
}

pub fn assemble_problem(spec: GeneratorSpec, t: DifficultyTriplet) -> Result<ProblemInstance> {
    ProblemInstance::assemble(Arc::new(spec), t, None)
}

impl ProblemInstance {
    pub(crate) fn assemble(
        spec: Arc<GeneratorSpec>,
        triplet: DifficultyTriplet,
        id: Option<ProblemId>,
    ) -> Result<Self> {
        spec.validate()?;
        let params = triplet_to_params(triplet, spec.offset)?;
        Ok(ProblemInstance {
            spec,
            triplet,
            params,
            id,
        })
    }

    pub fn id(&self) -> Option<ProblemId> {
        self.id
    }

    pub fn name(&self) -> &str {
        &self.spec.name
    }

    pub fn spec(&self) -> &GeneratorSpec {
        &self.spec
    }

    pub fn triplet(&self) -> DifficultyTriplet {
        self.triplet
    }

    pub fn params(&self) -> &TripletParams {
        &self.params
    }

    pub fn m(&self) -> usize {
        self.spec.m
    }

    pub fn n(&self) -> usize {
        self.spec.n
    }

    pub fn constraint_count(&self) -> usize {
        self.spec.constraint_count()
    }

    /// Objectives and constraints at `x`.
    pub fn evaluate(&self, x: &[f64]) -> Result<(Vec<f64>, Vec<f64>)> {
        let spec = &*self.spec;
        if x.len() != spec.n {
            return Err(Error::Contract(format!(
                "{} expects {} variables, got {}",
                spec.name,
                spec.n,
                x.len()
            )));
        }
        if let Some((i, v)) = x.iter().enumerate().find(|(_, v)| !(0.0..=1.0).contains(*v)) {
            return Err(Error::Contract(format!("x[{i}]={v} outside [0, 1]")));
        }

        let m = spec.m;
        let mut f = vec![0.0; m];
        let mut beta = vec![0.0; m];
        spec.shape.shape(&x[..m - 1], &mut f);
        spec.distance.distance(x, &mut beta);
        for (fi, bi) in f.iter_mut().zip(&beta) {
            *fi += bi;
        }

        let mut c = Vec::with_capacity(spec.constraint_count());
        self.push_type1(&x[..m - 1], &mut c);
        let p = &self.params;
        for &beta_p in beta.iter().take(spec.type2_count) {
            c.push(if p.type2_active {
                type2_constraint(beta_p, p.d, p.e)
            } else {
                SATISFIED
            });
        }
        self.push_type3(&f, &mut c);

        if let Some(bad) = f.iter().chain(&c).find(|v| !v.is_finite()) {
            return Err(Error::Evaluation(format!("{} produced non-finite value {bad}", spec.name)));
        }
        Ok((f, c))
    }

    pub fn evaluate_solution(&self, x: Vec<f64>) -> Result<EvaluatedSolution> {
        let (f, c) = self.evaluate(&x)?;
        let violation = overall_violation(&c)?;
        Ok(EvaluatedSolution { x, f, c, violation })
    }

    /// Shape-function image of `s` with zero distance.
    pub fn unconstrained_pf_point(&self, s: &[f64]) -> Result<Vec<f64>> {
        let m = self.spec.m;
        if s.len() != m - 1 {
            return Err(Error::Contract(format!(
                "shape parameter of length {} for an m={m} problem",
                s.len()
            )));
        }
        if let Some(v) = s.iter().find(|v| !(0.0..=1.0).contains(*v)) {
            return Err(Error::Contract(format!("shape parameter {v} outside [0, 1]")));
        }
        let mut f = vec![0.0; m];
        self.spec.shape.shape(s, &mut f);
        Ok(f)
    }

    /// Type-I values for the shape parameters `s` (length `m - 1`).
    pub fn type1_values(&self, s: &[f64]) -> Vec<f64> {
        let mut c = Vec::with_capacity(self.spec.type1_count);
        self.push_type1(s, &mut c);
        c
    }

    /// Type-III values at the objective vector `f`.
    pub fn type3_values(&self, f: &[f64]) -> Vec<f64> {
        let mut c = Vec::with_capacity(self.spec.regions.len());
        self.push_type3(f, &mut c);
        c
    }

    fn push_type1(&self, s: &[f64], out: &mut Vec<f64>) {
        let p = &self.params;
        for k in 1..=self.spec.type1_count {
            out.push(if p.type1_active {
                type1_constraint(s[k - 1], k, self.spec.segment_frequency, p.b)
            } else {
                SATISFIED
            });
        }
    }

    fn push_type3(&self, f: &[f64], out: &mut Vec<f64>) {
        let p = &self.params;
        for region in &self.spec.regions {
            out.push(if p.type3_active {
                region.constraint(f, p.r)
            } else {
                SATISFIED
            });
        }
    }
}
