//! Derivative-free minimization over local measurement angles.
//!
//! The search space is `2N` angles laid out as `[θ_0, φ_0, θ_1, φ_1, …]`.
//! A deterministic grid over each `(θ, φ)` pair seeds a Nelder–Mead simplex
//! refinement from the best few grid points. The all-zero vector (every
//! qubit measured in the σ_z eigenbasis) is always evaluated first.

use std::cell::Cell;
use std::f64::consts::{FRAC_PI_2, PI, TAU};

use crate::error::{invalid, Result};
use crate::par::{self, Execution};

/// Search budgets and tolerances.
#[derive(Clone, Debug, PartialEq)]
pub struct OptimizerConfig {
    /// Grid points for θ over `[0, π]`, endpoints included.
    pub theta_points: usize,
    /// Grid points for φ over `[-π, π)`.
    pub phi_points: usize,
    /// Number of best grid points handed to the simplex refinement.
    pub top_seeds: usize,
    /// Refinement stops once the simplex objective spread falls below this.
    pub simplex_tolerance: f64,
    /// Objective evaluations allowed per refinement.
    pub max_evaluations: usize,
    /// Largest full product grid; beyond it all qubits share one grid point.
    pub max_grid_points: usize,
    /// Edge length of the initial simplex, in radians.
    pub initial_step: f64,
    /// Scheduling of grid evaluation and seed refinement.
    pub execution: Execution,
}

impl Default for OptimizerConfig {
    fn default() -> Self {
        OptimizerConfig {
            theta_points: 5,
            phi_points: 4,
            top_seeds: 3,
            simplex_tolerance: 1e-8,
            max_evaluations: 20_000,
            max_grid_points: 10_000,
            initial_step: 0.3,
            execution: Execution::Sequential,
        }
    }
}

impl OptimizerConfig {
    pub fn validate(&self) -> Result<()> {
        if self.theta_points == 0
            || self.phi_points == 0
            || self.top_seeds == 0
            || self.max_evaluations == 0
            || self.max_grid_points == 0
        {
            return Err(invalid("optimizer counts must be positive"));
        }
        if self.simplex_tolerance.is_nan()
            || self.simplex_tolerance <= 0.0
            || self.initial_step.is_nan()
            || self.initial_step <= 0.0
        {
            return Err(invalid("optimizer tolerance and step must be positive"));
        }
        Ok(())
    }
}

/// A deterministic real-valued function of an angle vector.
pub trait Objective: Sync {
    fn arity(&self) -> usize;
    fn evaluate(&self, x: &[f64]) -> f64;
}

/// Wraps a closure as an [`Objective`].
pub struct FnObjective<F> {
    arity: usize,
    f: F,
}

impl<F: Fn(&[f64]) -> f64 + Sync> FnObjective<F> {
    pub fn new(arity: usize, f: F) -> Self {
        FnObjective { arity, f }
    }
}

impl<F: Fn(&[f64]) -> f64 + Sync> Objective for FnObjective<F> {
    fn arity(&self) -> usize {
        self.arity
    }

    fn evaluate(&self, x: &[f64]) -> f64 {
        (self.f)(x)
    }
}

/// `-f`, for maximizing through [`minimize`].
pub struct Negated<'a, O: ?Sized>(pub &'a O);

impl<O: Objective + ?Sized> Objective for Negated<'_, O> {
    fn arity(&self) -> usize {
        self.0.arity()
    }

    fn evaluate(&self, x: &[f64]) -> f64 {
        -self.0.evaluate(x)
    }
}

/// Wraps `φ` into `[-π, π)`.
pub fn wrap_phi(phi: f64) -> f64 {
    let w = phi - TAU * ((phi + PI) / TAU).floor();
    if w >= PI {
        w - TAU
    } else {
        w
    }
}

/// Maps an angle pair onto `θ ∈ [0, π]`, `φ ∈ [-π, π)` without changing
/// the projector it parameterizes.
pub fn canonical_pair(theta: f64, phi: f64) -> (f64, f64) {
    let mut t = theta.rem_euclid(TAU);
    let mut f = phi;
    if t > PI {
        t = TAU - t;
        f += PI;
    }
    (t, wrap_phi(f))
}

/// Canonicalizes every `(θ, φ)` pair of an angle vector in place.
pub fn canonicalize_angles(x: &mut [f64]) {
    for pair in x.chunks_exact_mut(2) {
        let (t, f) = canonical_pair(pair[0], pair[1]);
        pair[0] = t;
        pair[1] = f;
    }
}

/// Key identifying the unordered projector pair `{Π_1, Π_2}`: the pairs
/// `(θ, φ)` and `(π - θ, φ + π)` differ only by a label swap.
fn measurement_key(theta: f64, phi: f64) -> (i64, i64) {
    const EPS: f64 = 1e-9;
    let (mut t, mut f) = canonical_pair(theta, phi);
    if t > FRAC_PI_2 + EPS {
        t = PI - t;
        f = wrap_phi(f + PI);
    }
    if t < EPS {
        f = 0.0;
    } else if (t - FRAC_PI_2).abs() <= EPS {
        f = f.rem_euclid(PI);
        if PI - f < EPS {
            f = 0.0;
        }
    }
    let q = |v: f64| (v * 1e8).round() as i64;
    (q(t), q(f))
}

/// Distinct per-qubit measurements on the `theta_points × phi_points` grid.
fn pair_grid(config: &OptimizerConfig) -> Vec<(f64, f64)> {
    let thetas: Vec<f64> = if config.theta_points == 1 {
        vec![0.0]
    } else {
        (0..config.theta_points)
            .map(|i| PI * i as f64 / (config.theta_points - 1) as f64)
            .collect()
    };
    let mut phis: Vec<f64> = (0..config.phi_points)
        .map(|j| -PI + TAU * j as f64 / config.phi_points as f64)
        .collect();
    // antipodal duplicates keep the representative with the smallest |φ|
    phis.sort_by(|a, b| a.abs().total_cmp(&b.abs()).then(a.total_cmp(b)));
    let mut seen = std::collections::HashSet::new();
    let mut out = Vec::new();
    for &t in &thetas {
        for &f in &phis {
            if seen.insert(measurement_key(t, f)) {
                out.push(if t == 0.0 { (0.0, 0.0) } else { (t, f) });
            }
        }
    }
    out
}

/// Ranked grid seeds.
#[derive(Clone, Debug)]
pub struct SeedRanking {
    /// Best points in ascending objective order, at most `top_seeds`.
    pub seeds: Vec<(Vec<f64>, f64)>,
    /// Lowest value seen anywhere on the grid.
    pub grid_min: f64,
    pub evaluations: usize,
    /// True when the grid was cut short by `max_grid_points`.
    pub truncated: bool,
    /// True when the full product grid was used, false for the shared grid.
    pub full_product: bool,
}

/// Evaluates the objective on the seed grid and returns the best points.
///
/// When `|pairs|^N` exceeds `max_grid_points` every qubit takes the same grid
/// point. The σ_z point (all zeros) is always evaluated first.
pub fn grid_seed<O: Objective + ?Sized>(objective: &O, config: &OptimizerConfig) -> Result<SeedRanking> {
    config.validate()?;
    let arity = objective.arity();
    if arity == 0 || !arity.is_multiple_of(2) {
        return Err(invalid(format!(
            "objective arity must be a positive even number of angles, got {arity}"
        )));
    }
    let n_pairs = arity / 2;
    let pairs = pair_grid(config);

    let product_size = (pairs.len() as u128).checked_pow(n_pairs as u32);
    let full_product = product_size.is_some_and(|s| s <= config.max_grid_points as u128);
    let mut points: Vec<Vec<f64>> = vec![vec![0.0; arity]];
    if full_product {
        let total = product_size.unwrap() as usize;
        for mut idx in 0..total {
            let mut x = vec![0.0; arity];
            for q in (0..n_pairs).rev() {
                let (t, f) = pairs[idx % pairs.len()];
                idx /= pairs.len();
                x[2 * q] = t;
                x[2 * q + 1] = f;
            }
            points.push(x);
        }
    } else {
        for &(t, f) in &pairs {
            points.push([t, f].repeat(n_pairs));
        }
    }
    // the σ_z point heads the list; drop its duplicate from the grid
    if let Some(pos) = points[1..].iter().position(|x| x.iter().all(|&v| v == 0.0)) {
        points.remove(pos + 1);
    }
    let truncated = points.len() > config.max_grid_points;
    points.truncate(config.max_grid_points.max(1));

    let values = par::map(config.execution, &points, |x| objective.evaluate(x));
    let mut order: Vec<usize> = (0..points.len()).collect();
    order.sort_by(|&a, &b| values[a].total_cmp(&values[b]).then(a.cmp(&b)));

    let grid_min = values[order[0]];
    let seeds = order
        .iter()
        .take(config.top_seeds)
        .map(|&i| (points[i].clone(), values[i]))
        .collect();
    Ok(SeedRanking {
        seeds,
        grid_min,
        evaluations: points.len(),
        truncated,
        full_product,
    })
}

/// Outcome of one simplex refinement.
#[derive(Clone, Debug, PartialEq)]
pub struct Refinement {
    pub point: Vec<f64>,
    pub value: f64,
    pub converged: bool,
    pub evaluations: usize,
}

/// Nelder–Mead descent from `seed`.
///
/// Uses dimension-adapted coefficients and restarts from the incumbent with
/// a shrinking simplex until a restart no longer improves the value by more
/// than `simplex_tolerance`. The returned value never exceeds the seed value.
pub fn refine<O: Objective + ?Sized>(
    objective: &O,
    seed: &[f64],
    config: &OptimizerConfig,
) -> Result<Refinement> {
    config.validate()?;
    let dim = objective.arity();
    if seed.len() != dim {
        return Err(invalid(format!(
            "seed has {} angles, objective expects {dim}",
            seed.len()
        )));
    }
    let budget = config.max_evaluations;
    let tol = config.simplex_tolerance;
    let evals = Cell::new(0usize);
    let mut eval = |x: &[f64]| {
        evals.set(evals.get() + 1);
        objective.evaluate(x)
    };

    let mut best_x = seed.to_vec();
    let mut best_f = eval(&best_x);
    let mut step = config.initial_step;
    let mut converged = false;

    const MAX_RESTARTS: usize = 8;
    for _ in 0..MAX_RESTARTS {
        let remaining = budget.saturating_sub(evals.get());
        if remaining <= dim + 1 {
            break;
        }
        let before = best_f;
        let (x, f, settled) = nelder_mead(&mut eval, &best_x, best_f, step, tol, remaining);
        if f < best_f {
            best_x = x;
            best_f = f;
        }
        if !settled {
            break;
        }
        if before - best_f <= tol {
            converged = true;
            break;
        }
        step = (step * 0.5).max(1e-3);
    }
    let evaluations = evals.get();
    Ok(Refinement {
        point: best_x,
        value: best_f,
        converged,
        evaluations,
    })
}

/// One Nelder–Mead run. Returns the best vertex, its value and whether the
/// spread criterion was met before `budget` evaluations were spent.
fn nelder_mead(
    eval: &mut impl FnMut(&[f64]) -> f64,
    start: &[f64],
    start_f: f64,
    step: f64,
    tol: f64,
    budget: usize,
) -> (Vec<f64>, f64, bool) {
    let n = start.len();
    let nf = n as f64;
    let (alpha, gamma, rho, sigma) = if n >= 2 {
        (1.0, 1.0 + 2.0 / nf, 0.75 - 1.0 / (2.0 * nf), 1.0 - 1.0 / nf)
    } else {
        (1.0, 2.0, 0.5, 0.5)
    };

    let mut simplex: Vec<Vec<f64>> = Vec::with_capacity(n + 1);
    let mut values: Vec<f64> = Vec::with_capacity(n + 1);
    simplex.push(start.to_vec());
    values.push(start_f);
    let mut used = 0usize;
    for i in 0..n {
        let mut v = start.to_vec();
        v[i] += step;
        values.push(eval(&v));
        used += 1;
        simplex.push(v);
    }

    let mut centroid = vec![0.0; n];
    loop {
        let mut order: Vec<usize> = (0..=n).collect();
        order.sort_by(|&a, &b| values[a].total_cmp(&values[b]).then(a.cmp(&b)));
        simplex = order.iter().map(|&i| simplex[i].clone()).collect();
        values = order.iter().map(|&i| values[i]).collect();

        if values[n] - values[0] < tol {
            return (simplex[0].clone(), values[0], true);
        }
        if used + 1 >= budget {
            return (simplex[0].clone(), values[0], false);
        }

        centroid.iter_mut().for_each(|c| *c = 0.0);
        for v in &simplex[..n] {
            for (c, x) in centroid.iter_mut().zip(v) {
                *c += x / nf;
            }
        }
        let toward = |coef: f64| -> Vec<f64> {
            centroid
                .iter()
                .zip(&simplex[n])
                .map(|(c, w)| c + coef * (c - w))
                .collect()
        };

        let xr = toward(alpha);
        let fr = eval(&xr);
        used += 1;
        if fr < values[0] {
            let xe = toward(alpha * gamma);
            let fe = eval(&xe);
            used += 1;
            if fe < fr {
                simplex[n] = xe;
                values[n] = fe;
            } else {
                simplex[n] = xr;
                values[n] = fr;
            }
            continue;
        }
        if fr < values[n - 1] {
            simplex[n] = xr;
            values[n] = fr;
            continue;
        }
        let (xc, fc) = if fr < values[n] {
            let xc = toward(alpha * rho);
            let fc = eval(&xc);
            (xc, fc)
        } else {
            let xc = toward(-rho);
            let fc = eval(&xc);
            (xc, fc)
        };
        used += 1;
        if fc < values[n].min(fr) {
            simplex[n] = xc;
            values[n] = fc;
            continue;
        }
        // shrink toward the best vertex
        for i in 1..=n {
            let shrunk: Vec<f64> = simplex[0]
                .iter()
                .zip(&simplex[i])
                .map(|(b, x)| b + sigma * (x - b))
                .collect();
            values[i] = eval(&shrunk);
            simplex[i] = shrunk;
            used += 1;
        }
    }
}

/// Result of [`minimize`].
#[derive(Clone, Debug)]
pub struct Minimum {
    /// Minimizing angles, canonicalized to `θ ∈ [0, π]`, `φ ∈ [-π, π)`.
    pub point: Vec<f64>,
    pub value: f64,
    /// True when the refinement that produced `value` converged.
    pub converged: bool,
    /// Grid plus refinement evaluations.
    pub evaluations: usize,
    pub grid: SeedRanking,
    pub refinements: Vec<Refinement>,
}

/// Grid seeding followed by refinement of each of the top seeds.
pub fn minimize<O: Objective + ?Sized>(objective: &O, config: &OptimizerConfig) -> Result<Minimum> {
    let grid = grid_seed(objective, config)?;
    let refinements: Vec<Refinement> = par::map(config.execution, &grid.seeds, |(seed, _)| {
        refine(objective, seed, config)
    })
    .into_iter()
    .collect::<Result<_>>()?;

    let best = refinements
        .iter()
        .enumerate()
        .min_by(|(ia, a), (ib, b)| a.value.total_cmp(&b.value).then(ia.cmp(ib)))
        .map(|(i, _)| i)
        .expect("at least one seed");
    let mut point = refinements[best].point.clone();
    canonicalize_angles(&mut point);
    let evaluations = grid.evaluations + refinements.iter().map(|r| r.evaluations).sum::<usize>();
    Ok(Minimum {
        point,
        value: refinements[best].value,
        converged: refinements[best].converged,
        evaluations,
        grid,
        refinements,
    })
}
