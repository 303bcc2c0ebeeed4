//! Global-best particle swarm optimizer over box-bounded real vector spaces.
//!
//! Every particle owns its own random sub-stream split off a single seeded
//! ChaCha stream, so results depend only on the seed and particle index, not
//! on the order in which objective evaluations happen. Runs stop on the first
//! evaluation whose value is at or below `target_value`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::scalar::{clamp, Scalar};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum OptimizerError {
    #[error("search space bounds have mismatched lengths: lower {lower}, upper {upper}")]
    DimensionMismatch { lower: usize, upper: usize },
    #[error("search space must have at least one dimension")]
    EmptySpace,
    #[error("search space dimension {dim}: lower bound {lower} must be < upper bound {upper}")]
    InvertedBounds { dim: usize, lower: f64, upper: f64 },
    #[error("invalid swarm parameter: {0}")]
    InvalidParams(&'static str),
}

/// Axis-aligned box `[lower, upper]` the swarm is confined to.
#[derive(Debug, Clone, PartialEq)]
pub struct SearchSpace<T> {
    lower: Vec<T>,
    upper: Vec<T>,
}

impl<T: Scalar> SearchSpace<T> {
    pub fn new(lower: Vec<T>, upper: Vec<T>) -> Result<Self, OptimizerError> {
        if lower.len() != upper.len() {
            return Err(OptimizerError::DimensionMismatch {
                lower: lower.len(),
                upper: upper.len(),
            });
        }
        if lower.is_empty() {
            return Err(OptimizerError::EmptySpace);
        }
        for (dim, (&lo, &hi)) in lower.iter().zip(&upper).enumerate() {
            // Also rejects NaN bounds.
            #[allow(clippy::neg_cmp_op_on_partial_ord)]
            if !(lo < hi) || !lo.is_finite() || !hi.is_finite() {
                return Err(OptimizerError::InvertedBounds {
                    dim,
                    lower: lo.to_f64_lossy(),
                    upper: hi.to_f64_lossy(),
                });
            }
        }
        Ok(Self { lower, upper })
    }

    /// The cube `[lo, hi]^dim`.
    pub fn cube(dim: usize, lo: T, hi: T) -> Result<Self, OptimizerError> {
        Self::new(vec![lo; dim], vec![hi; dim])
    }

    pub fn dimension(&self) -> usize {
        self.lower.len()
    }

    pub fn lower(&self) -> &[T] {
        &self.lower
    }

    pub fn upper(&self) -> &[T] {
        &self.upper
    }

    pub fn range(&self, dim: usize) -> T {
        self.upper[dim] - self.lower[dim]
    }

    pub fn contains(&self, point: &[T]) -> bool {
        point.len() == self.dimension()
            && point
                .iter()
                .zip(self.lower.iter().zip(&self.upper))
                .all(|(&x, (&lo, &hi))| lo <= x && x <= hi)
    }

    /// Clamps `point` into the box in place.
    pub fn clamp_point(&self, point: &mut [T]) {
        for (x, (&lo, &hi)) in point.iter_mut().zip(self.lower.iter().zip(&self.upper)) {
            *x = clamp(*x, lo, hi);
        }
    }
}

/// Swarm hyperparameters.
#[derive(Debug, Clone, PartialEq)]
pub struct SwarmParams<T> {
    pub swarm_size: usize,
    pub max_iterations: usize,
    pub inertia_weight: T,
    pub cognitive_coefficient: T,
    pub social_coefficient: T,
    /// The run stops as soon as an evaluation is `<=` this value.
    pub target_value: T,
    /// Per-dimension velocity clamp as a fraction of that dimension's range.
    pub max_velocity_fraction: T,
    pub seed: u64,
}

impl<T: Scalar> Default for SwarmParams<T> {
    fn default() -> Self {
        Self {
            swarm_size: 60,
            max_iterations: 300,
            inertia_weight: T::of(0.7298),
            cognitive_coefficient: T::of(1.49618),
            social_coefficient: T::of(1.49618),
            target_value: T::neg_infinity(),
            max_velocity_fraction: T::of(0.2),
            seed: 0,
        }
    }
}

impl<T: Scalar> SwarmParams<T> {
    pub fn validate(&self) -> Result<(), OptimizerError> {
        if self.swarm_size < 2 {
            return Err(OptimizerError::InvalidParams("swarm_size must be >= 2"));
        }
        if self.max_iterations < 1 {
            return Err(OptimizerError::InvalidParams("max_iterations must be >= 1"));
        }
        let nonneg = |v: T| v >= T::zero() && v.is_finite();
        if !nonneg(self.inertia_weight) {
            return Err(OptimizerError::InvalidParams("inertia_weight must be >= 0"));
        }
        if !nonneg(self.cognitive_coefficient) {
            return Err(OptimizerError::InvalidParams("cognitive_coefficient must be >= 0"));
        }
        if !nonneg(self.social_coefficient) {
            return Err(OptimizerError::InvalidParams("social_coefficient must be >= 0"));
        }
        if !(self.max_velocity_fraction > T::zero() && self.max_velocity_fraction <= T::one()) {
            return Err(OptimizerError::InvalidParams(
                "max_velocity_fraction must be in (0, 1]",
            ));
        }
        if self.target_value.is_nan() {
            return Err(OptimizerError::InvalidParams("target_value must not be NaN"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Particle<T> {
    pub position: Vec<T>,
    pub velocity: Vec<T>,
    pub personal_best_position: Vec<T>,
    /// `+inf` until the starting position has been evaluated.
    pub personal_best_value: T,
}

#[derive(Debug, Clone, PartialEq)]
pub struct GlobalBest<T> {
    pub position: Vec<T>,
    pub value: T,
    /// Index of the particle that found it.
    pub particle: usize,
}

/// Per-particle random sub-streams derived from one seed.
///
/// Stream `i` is the seeded ChaCha8 generator switched to stream id `i`, so
/// each particle draws an independent sequence regardless of evaluation
/// order.
#[derive(Debug, Clone)]
pub struct ParticleStreams {
    streams: Vec<ChaCha8Rng>,
}

impl ParticleStreams {
    pub fn new(seed: u64, particles: usize) -> Self {
        let root = ChaCha8Rng::seed_from_u64(seed);
        let streams = (0..particles)
            .map(|i| {
                let mut rng = root.clone();
                rng.set_stream(i as u64);
                rng
            })
            .collect();
        Self { streams }
    }

    pub fn len(&self) -> usize {
        self.streams.len()
    }

    pub fn is_empty(&self) -> bool {
        self.streams.is_empty()
    }

    pub fn stream(&mut self, particle: usize) -> &mut ChaCha8Rng {
        &mut self.streams[particle]
    }
}

/// Uniform draw in `[0, 1)`.
pub(crate) fn unit<T: Scalar, R: Rng>(rng: &mut R) -> T {
    let u = T::of(rng.gen::<f64>());
    // f32 rounding can land on 1.0
    if u >= T::one() {
        T::one() - T::epsilon()
    } else {
        u
    }
}

/// One objective evaluation, in the order it happened.
#[derive(Debug, Clone, PartialEq)]
pub struct Evaluation<T> {
    pub position: Vec<T>,
    pub value: T,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SwarmResult<T> {
    pub best_position: Vec<T>,
    pub best_value: T,
    /// Completed update iterations; initialization is iteration 0.
    pub iterations_used: usize,
    pub terminated_early: bool,
    pub evaluations: usize,
    pub visited_log: Vec<Evaluation<T>>,
}

/// Whether a step ran to completion or hit the target value mid-iteration.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StepOutcome {
    Completed,
    TargetReached,
}

/// Samples the initial swarm: uniform positions in the box, uniform
/// velocities within the velocity clamp. Personal bests start at the
/// sampled positions with value `+inf` (not yet evaluated).
pub fn init_swarm<T: Scalar>(
    space: &SearchSpace<T>,
    params: &SwarmParams<T>,
    streams: &mut ParticleStreams,
) -> Vec<Particle<T>> {
    assert_eq!(streams.len(), params.swarm_size, "one stream per particle");
    let dim = space.dimension();
    (0..params.swarm_size)
        .map(|i| {
            let rng = streams.stream(i);
            let mut position: Vec<T> = (0..dim)
                .map(|d| space.lower[d] + unit::<T, _>(rng) * space.range(d))
                .collect();
            space.clamp_point(&mut position);
            let velocity = (0..dim)
                .map(|d| {
                    let vmax = params.max_velocity_fraction * space.range(d);
                    (T::of(2.0) * unit::<T, _>(rng) - T::one()) * vmax
                })
                .collect();
            Particle {
                personal_best_position: position.clone(),
                position,
                velocity,
                personal_best_value: T::infinity(),
            }
        })
        .collect()
}

/// Velocity and position update for a single particle given explicit
/// per-dimension random factors. Does not evaluate the objective.
pub fn update_particle<T: Scalar>(
    particle: &mut Particle<T>,
    global_best: &[T],
    space: &SearchSpace<T>,
    params: &SwarmParams<T>,
    r1: &[T],
    r2: &[T],
) {
    for d in 0..space.dimension() {
        let x = particle.position[d];
        let vmax = params.max_velocity_fraction * space.range(d);
        let v = params.inertia_weight * particle.velocity[d]
            + params.cognitive_coefficient * r1[d] * (particle.personal_best_position[d] - x)
            + params.social_coefficient * r2[d] * (global_best[d] - x);
        let mut v = clamp(v, -vmax, vmax);
        let mut next = x + v;
        if next < space.lower[d] {
            next = space.lower[d];
            v = T::zero();
        } else if next > space.upper[d] {
            next = space.upper[d];
            v = T::zero();
        }
        particle.position[d] = next;
        particle.velocity[d] = v;
    }
}

fn evaluate<T: Scalar, F: FnMut(&[T]) -> T>(
    objective: &mut F,
    position: &[T],
    log: &mut Vec<Evaluation<T>>,
) -> T {
    let raw = objective(position);
    let value = if raw.is_finite() { raw } else { T::infinity() };
    log.push(Evaluation {
        position: position.to_vec(),
        value,
    });
    value
}

/// One synchronous swarm iteration.
///
/// All particles move against the global best as it stood at the start of
/// the iteration (random factors `r1[d], r2[d]` drawn in that order from the
/// particle's own stream), then are evaluated in index order. Evaluation
/// stops immediately when a value reaches `params.target_value`.
pub fn step_swarm<T: Scalar, F: FnMut(&[T]) -> T>(
    particles: &mut [Particle<T>],
    global_best: &mut GlobalBest<T>,
    space: &SearchSpace<T>,
    params: &SwarmParams<T>,
    objective: &mut F,
    streams: &mut ParticleStreams,
    log: &mut Vec<Evaluation<T>>,
) -> StepOutcome {
    let dim = space.dimension();
    let attractor = global_best.position.clone();
    let mut r1 = vec![T::zero(); dim];
    let mut r2 = vec![T::zero(); dim];
    for (i, particle) in particles.iter_mut().enumerate() {
        let rng = streams.stream(i);
        for d in 0..dim {
            r1[d] = unit(rng);
            r2[d] = unit(rng);
        }
        update_particle(particle, &attractor, space, params, &r1, &r2);
    }

    for (i, particle) in particles.iter_mut().enumerate() {
        let value = evaluate(objective, &particle.position, log);
        if value < particle.personal_best_value {
            particle.personal_best_value = value;
            particle.personal_best_position.clone_from(&particle.position);
        }
        if value < global_best.value {
            global_best.value = value;
            global_best.position.clone_from(&particle.position);
            global_best.particle = i;
        }
        if value <= params.target_value {
            return StepOutcome::TargetReached;
        }
    }
    StepOutcome::Completed
}

/// Minimizes `objective` over `space`.
///
/// Non-finite objective values are recorded as `+inf` and never become a
/// best. The returned log holds every evaluation in order.
pub fn pso_minimize<T, F>(
    mut objective: F,
    space: &SearchSpace<T>,
    params: &SwarmParams<T>,
) -> Result<SwarmResult<T>, OptimizerError>
where
    T: Scalar,
    F: FnMut(&[T]) -> T,
{
    params.validate()?;
    let mut streams = ParticleStreams::new(params.seed, params.swarm_size);
    let mut particles = init_swarm(space, params, &mut streams);
    let mut log = Vec::with_capacity(params.swarm_size * (params.max_iterations + 1));

    let mut best: Option<GlobalBest<T>> = None;
    for (i, particle) in particles.iter_mut().enumerate() {
        let value = evaluate(&mut objective, &particle.position, &mut log);
        particle.personal_best_value = value;
        if best.as_ref().is_none_or(|b| value < b.value) {
            best = Some(GlobalBest {
                position: particle.position.clone(),
                value,
                particle: i,
            });
        }
        if value <= params.target_value {
            return Ok(finish(best.expect("just set"), 0, true, log));
        }
    }
    let mut best = best.expect("swarm_size >= 2");

    for iteration in 1..=params.max_iterations {
        let outcome = step_swarm(
            &mut particles,
            &mut best,
            space,
            params,
            &mut objective,
            &mut streams,
            &mut log,
        );
        if outcome == StepOutcome::TargetReached {
            return Ok(finish(best, iteration, true, log));
        }
    }
    Ok(finish(best, params.max_iterations, false, log))
}

fn finish<T>(
    best: GlobalBest<T>,
    iterations_used: usize,
    terminated_early: bool,
    visited_log: Vec<Evaluation<T>>,
) -> SwarmResult<T> {
    SwarmResult {
        best_position: best.position,
        best_value: best.value,
        iterations_used,
        terminated_early,
        evaluations: visited_log.len(),
        visited_log,
    }
}
