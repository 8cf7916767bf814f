//! Projected-gradient minimization of the regularized energies.
//!
//! Iterates stay feasible: the `E` problem is solved for the node values of
//! `H` on `{H >= 0, ∫H = 1}`, the `V` problem for the cell slopes of `h` on
//! `{s >= 0, Σ Δ s = 1}`, which is the monotone set with `h(0) = 0` and
//! `h(λ) = 1` written in slope variables. Steps are Barzilai–Borwein along
//! the projected direction with an Armijo backtracking safeguard, so every
//! accepted iterate decreases the objective.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::energy::{e_eps_with_gradient, eval_e_eps, eval_v_eps, u_eps_with_gradient};
use super::field::{trapezoid_weights, DiscreteField, FieldKind};
use super::mollify::{mollify_with_profile, SharpField, TransitionProfile};
use super::projection::{project_deformation, project_weighted_simplex};
use crate::error::{domain, Result};
use crate::material::MaterialModel;
use crate::sharp::{build_sharp_minimizer, crack_count, PiecewiseConstantField, Variant};

/// Which regularized energy to minimize.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Functional {
    /// Gradient-regularized inverse-stretch energy with the mass constraint.
    E,
    /// Second-gradient energy with the elastic foundation and Dirichlet data.
    V,
}

impl std::str::FromStr for Functional {
    type Err = crate::error::Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "E" | "e" | "I" | "i" => Ok(Functional::E),
            "V" | "v" | "U" | "u" => Ok(Functional::V),
            other => domain(format!("functional must be E or V, got {other:?}")),
        }
    }
}

impl std::fmt::Display for Functional {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Functional::E => "E",
            Functional::V => "V",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolveSettings {
    pub epsilon: f64,
    /// Rescaled foundation stiffness; the unscaled one is `k = ε μ`.
    pub mu: f64,
    /// Grid intervals `N`.
    pub intervals: usize,
    pub max_iterations: usize,
    /// Bound on the sup-norm projected-gradient residual (per unit length)
    /// of the rescaled energy.
    pub tolerance: f64,
    pub step_min: f64,
    pub step_max: f64,
    pub armijo: f64,
    pub backtrack: f64,
    pub random_starts: usize,
    pub perturbation: f64,
    pub seed: u64,
    /// Keep the objective value of every accepted iterate.
    pub record_trace: bool,
}

impl Default for SolveSettings {
    fn default() -> Self {
        Self {
            epsilon: 0.05,
            mu: 0.0,
            intervals: 1000,
            max_iterations: 100_000,
            tolerance: 1e-6,
            step_min: 1e-12,
            step_max: 1e6,
            armijo: 1e-4,
            backtrack: 0.5,
            random_starts: 2,
            perturbation: 0.5,
            seed: 0,
            record_trace: false,
        }
    }
}

impl SolveSettings {
    pub fn validate(&self) -> Result<()> {
        if !(self.epsilon > 0.0 && self.epsilon.is_finite()) {
            return domain(format!("ε must be positive, got {}", self.epsilon));
        }
        if !(self.mu >= 0.0 && self.mu.is_finite()) {
            return domain(format!("μ must be non-negative, got {}", self.mu));
        }
        if self.intervals < 16 {
            return domain(format!("grid needs N >= 16, got {}", self.intervals));
        }
        if !(self.tolerance > 0.0) {
            return domain("tolerance must be positive");
        }
        if !(self.step_min > 0.0 && self.step_max >= self.step_min) {
            return domain("step bounds need 0 < step_min <= step_max");
        }
        if !(self.armijo > 0.0 && self.armijo < 1.0 && self.backtrack > 0.0 && self.backtrack < 1.0) {
            return domain("armijo and backtrack factors must lie in (0, 1)");
        }
        if !(self.perturbation >= 0.0) {
            return domain("perturbation must be non-negative");
        }
        Ok(())
    }
}

/// A regularized problem: functional, load and material.
#[derive(Debug, Clone)]
pub struct Problem {
    pub functional: Functional,
    pub lambda: f64,
    pub model: MaterialModel,
}

impl Problem {
    pub fn new(functional: Functional, lambda: f64, model: MaterialModel) -> Result<Self> {
        if !(lambda > 0.0 && lambda.is_finite()) {
            return domain(format!("λ must be positive, got {lambda}"));
        }
        Ok(Self {
            functional,
            lambda,
            model,
        })
    }
}

/// Named initial guesses.
#[derive(Debug, Clone, PartialEq)]
pub enum Start {
    /// `H ≡ 1/λ`, `h = y/λ`.
    Homogeneous,
    /// Mollified sharp candidate with `n` transitions. For `E`, `n = 1`
    /// places the crack at the right (`A`) or left (`B`) end and `n = 2`
    /// puts the unit phase in the middle.
    Sharp { n: usize, variant: Variant },
    /// Homogeneous state plus seeded uniform noise.
    Random { index: u64 },
    Field(DiscreteField),
}

impl std::fmt::Display for Start {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Start::Homogeneous => write!(f, "homogeneous"),
            Start::Sharp { n, variant } => write!(f, "sharp-n{n}-{variant}"),
            Start::Random { index } => write!(f, "random-{index}"),
            Start::Field(_) => write!(f, "given"),
        }
    }
}

#[derive(Debug, Clone)]
pub enum Init {
    Start(Start),
    /// The default start set plus any extra fields (warm starts).
    Multistart(Vec<DiscreteField>),
}

#[derive(Debug, Clone, Serialize)]
pub struct SolveResult {
    pub field: DiscreteField,
    /// `E_ε` or `U_ε`.
    pub energy: f64,
    /// `I_ε = E_ε/ε` or `V_ε = U_ε/ε`.
    pub rescaled_energy: f64,
    pub iterations: usize,
    pub transition_count: usize,
    pub converged: bool,
    pub projected_gradient_norm: f64,
    pub start: String,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub trace: Vec<f64>,
}

pub fn minimize(problem: &Problem, settings: &SolveSettings, init: &Init) -> Result<SolveResult> {
    settings.validate()?;
    match init {
        Init::Start(start) => {
            let profile = TransitionProfile::new(&problem.model)?;
            solve_one(problem, settings, start, &profile)
        }
        Init::Multistart(extra) => {
            let mut starts = default_starts(problem, settings)?;
            starts.extend(extra.iter().cloned().map(Start::Field));
            let results = solve_all(problem, settings, &starts)?;
            Ok(best_of(results))
        }
    }
}

/// Solves from every start concurrently; results keep the order of `starts`.
pub fn solve_all(problem: &Problem, settings: &SolveSettings, starts: &[Start]) -> Result<Vec<SolveResult>> {
    settings.validate()?;
    let profile = TransitionProfile::new(&problem.model)?;
    starts
        .par_iter()
        .map(|s| solve_one(problem, settings, s, &profile))
        .collect()
}

/// Lowest rescaled energy; earlier entries win ties.
pub fn best_of(results: Vec<SolveResult>) -> SolveResult {
    results
        .into_iter()
        .reduce(|best, r| if r.rescaled_energy < best.rescaled_energy { r } else { best })
        .expect("at least one start")
}

/// Homogeneous, mollified sharp candidates, and seeded random starts.
pub fn default_starts(problem: &Problem, settings: &SolveSettings) -> Result<Vec<Start>> {
    let mut starts = vec![Start::Homogeneous];
    if problem.lambda > 1.0 {
        match problem.functional {
            Functional::E => {
                starts.push(Start::Sharp { n: 1, variant: Variant::A });
                starts.push(Start::Sharp { n: 1, variant: Variant::B });
                starts.push(Start::Sharp { n: 2, variant: Variant::A });
            }
            Functional::V => {
                let c = problem.model.c_wstar(1e-10)?.value;
                if c > 0.0 {
                    let n = crack_count(c, settings.mu, problem.lambda)?;
                    for k in n.saturating_sub(1).max(1)..=n + 1 {
                        for variant in Variant::BOTH {
                            starts.push(Start::Sharp { n: k, variant });
                        }
                    }
                }
            }
        }
    }
    starts.extend((0..settings.random_starts as u64).map(|index| Start::Random { index }));
    Ok(starts)
}

/// The discrete field a named start expands to, before solving.
pub fn initial_field(problem: &Problem, settings: &SolveSettings, start: &Start) -> Result<DiscreteField> {
    let profile = TransitionProfile::new(&problem.model)?;
    initial_field_with(problem, settings, start, &profile)
}

fn initial_field_with(
    problem: &Problem,
    settings: &SolveSettings,
    start: &Start,
    profile: &TransitionProfile,
) -> Result<DiscreteField> {
    let (lambda, n) = (problem.lambda, settings.intervals);
    match (start, problem.functional) {
        (Start::Homogeneous, Functional::E) => DiscreteField::homogeneous_stretch(lambda, n),
        (Start::Homogeneous, Functional::V) => DiscreteField::homogeneous_deformation(lambda, n),
        (Start::Sharp { n: count, variant }, Functional::E) => {
            let sharp = match (count, variant) {
                (1, Variant::A) => PiecewiseConstantField::right_end_crack(lambda)?,
                (1, Variant::B) => PiecewiseConstantField::left_end_crack(lambda)?,
                (2, _) => {
                    let gap = 0.5 * (lambda - 1.0);
                    PiecewiseConstantField::new(lambda, vec![gap, gap + 1.0], vec![0.0, 1.0, 0.0])?
                }
                _ => return domain(format!("no sharp E candidate with {count} transitions")),
            };
            Ok(mollify_with_profile(SharpField::Stretch(&sharp), settings.epsilon, profile, n)?.field)
        }
        (Start::Sharp { n: count, variant }, Functional::V) => {
            let sharp = build_sharp_minimizer(*count, lambda, *variant, 1.0, settings.mu)?;
            Ok(mollify_with_profile(SharpField::Deformation(&sharp.field), settings.epsilon, profile, n)?.field)
        }
        (Start::Random { index }, functional) => {
            let mut rng = ChaCha8Rng::seed_from_u64(settings.seed.wrapping_mul(0x9E37_79B9).wrapping_add(*index));
            let amp = settings.perturbation / lambda;
            match functional {
                Functional::E => {
                    let raw: Vec<f64> = (0..=n).map(|_| 1.0 / lambda + rng.gen_range(-amp..=amp)).collect();
                    let mut x = raw;
                    project_weighted_simplex(&mut x, &trapezoid_weights(n + 1, lambda / n as f64));
                    DiscreteField::new(FieldKind::InverseStretch, lambda, x)
                }
                Functional::V => {
                    let mut s: Vec<f64> = (0..n).map(|_| 1.0 / lambda + rng.gen_range(-amp..=amp)).collect();
                    project_weighted_simplex(&mut s, &vec![lambda / n as f64; n]);
                    slopes_to_deformation(&s, lambda)
                }
            }
        }
        (Start::Field(f), _) => {
            if f.intervals() != n || f.domain_length() != lambda {
                return domain("warm-start field does not match the grid");
            }
            Ok(f.clone())
        }
    }
}

fn slopes_to_deformation(slopes: &[f64], lambda: f64) -> Result<DiscreteField> {
    let dy = lambda / slopes.len() as f64;
    let mut h = Vec::with_capacity(slopes.len() + 1);
    let mut acc = 0.0;
    h.push(0.0);
    for s in slopes {
        acc += dy * s;
        h.push(acc);
    }
    *h.last_mut().unwrap() = 1.0;
    DiscreteField::new(FieldKind::InverseDeformation, lambda, h)
}

fn solve_one(
    problem: &Problem,
    settings: &SolveSettings,
    start: &Start,
    profile: &TransitionProfile,
) -> Result<SolveResult> {
    let init = initial_field_with(problem, settings, start, profile)?;
    let lambda = problem.lambda;
    let n = settings.intervals;
    let dy = lambda / n as f64;
    let eps = settings.epsilon;
    let model = &problem.model;

    let (field, outcome) = match problem.functional {
        Functional::E => {
            let weights = trapezoid_weights(n + 1, dy);
            let mut x = init.into_values();
            project_weighted_simplex(&mut x, &weights);
            let outcome = spg(
                &mut x,
                dy,
                settings,
                |x, g| e_eps_with_gradient(x, lambda, eps, model, g) / eps,
                |x| project_weighted_simplex(x, &weights),
            );
            (DiscreteField::new(FieldKind::InverseStretch, lambda, x)?, outcome)
        }
        Functional::V => {
            let init = match init.kind() {
                FieldKind::InverseDeformation => init,
                FieldKind::InverseStretch => return domain("V problem needs an inverse-deformation start"),
            };
            let weights = vec![dy; n];
            let mut s = project_deformation(init.values(), lambda)?.slopes();
            project_weighted_simplex(&mut s, &weights);
            let mu = settings.mu;
            let mut h = vec![0.0; n + 1];
            let mut gh = vec![0.0; n + 1];
            let outcome = spg(
                &mut s,
                dy,
                settings,
                |s, g| {
                    fill_deformation(s, dy, &mut h);
                    let u = u_eps_with_gradient(&h, lambda, eps, mu, model, &mut gh);
                    // chain rule: ∂h_j/∂s_i = Δ for j > i
                    let mut tail = 0.0;
                    for i in (0..n).rev() {
                        tail += gh[i + 1];
                        g[i] = dy * tail / eps;
                    }
                    u / eps
                },
                |s| project_weighted_simplex(s, &weights),
            );
            (slopes_to_deformation(&s, lambda)?, outcome)
        }
    };

    let energy = match problem.functional {
        Functional::E => eval_e_eps(field.values(), lambda, eps, model),
        Functional::V => eval_v_eps(field.values(), lambda, eps, settings.mu, model).unscaled,
    };
    Ok(SolveResult {
        transition_count: field.transition_count(),
        field,
        energy,
        rescaled_energy: energy / eps,
        iterations: outcome.iterations,
        converged: outcome.converged,
        projected_gradient_norm: outcome.residual,
        start: start.to_string(),
        trace: outcome.trace,
    })
}

fn fill_deformation(s: &[f64], dy: f64, h: &mut [f64]) {
    let mut acc = 0.0;
    h[0] = 0.0;
    for (i, v) in s.iter().enumerate() {
        acc += dy * v;
        h[i + 1] = acc;
    }
}

struct Outcome {
    iterations: usize,
    converged: bool,
    residual: f64,
    trace: Vec<f64>,
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Monotone spectral projected gradient.
///
/// `eval` fills the gradient and returns the objective; `project` maps onto
/// the feasible set in place.
fn spg<F, P>(x: &mut Vec<f64>, dy: f64, settings: &SolveSettings, mut eval: F, project: P) -> Outcome
where
    F: FnMut(&[f64], &mut [f64]) -> f64,
    P: Fn(&mut [f64]),
{
    let m = x.len();
    let mut g = vec![0.0; m];
    let mut f = eval(x, &mut g);
    let mut trace = Vec::new();
    if settings.record_trace {
        trace.push(f);
    }
    let mut trial = vec![0.0; m];
    let mut g_trial = vec![0.0; m];
    let mut dir = vec![0.0; m];

    let residual_of = |x: &[f64], g: &[f64], buf: &mut [f64]| -> f64 {
        for ((b, &xi), &gi) in buf.iter_mut().zip(x).zip(g) {
            *b = xi - gi;
        }
        project(buf);
        buf.iter().zip(x).map(|(b, xi)| (b - xi).abs()).fold(0.0, f64::max) / dy
    };

    let mut residual = residual_of(x, &g, &mut dir);
    let gmax = g.iter().map(|v| v.abs()).fold(0.0, f64::max);
    let mut step = if gmax > 0.0 {
        (dy / gmax).clamp(settings.step_min, settings.step_max)
    } else {
        1.0
    };

    let mut iterations = 0;
    while residual > settings.tolerance && iterations < settings.max_iterations {
        iterations += 1;
        for ((d, &xi), &gi) in dir.iter_mut().zip(x.iter()).zip(&g) {
            *d = xi - step * gi;
        }
        project(&mut dir);
        for (d, &xi) in dir.iter_mut().zip(x.iter()) {
            *d -= xi;
        }
        let slope = dot(&g, &dir);
        if slope >= 0.0 {
            break;
        }

        let mut t = 1.0;
        let mut accepted = false;
        while t > 1e-20 {
            for ((y, &xi), &d) in trial.iter_mut().zip(x.iter()).zip(&dir) {
                *y = xi + t * d;
            }
            let f_trial = eval(&trial, &mut g_trial);
            if f_trial <= f + settings.armijo * t * slope {
                // BB step from the accepted pair
                let mut ss = 0.0;
                let mut sy = 0.0;
                for i in 0..m {
                    let si = trial[i] - x[i];
                    let yi = g_trial[i] - g[i];
                    ss += si * si;
                    sy += si * yi;
                }
                step = if sy > 0.0 {
                    (ss / sy).clamp(settings.step_min, settings.step_max)
                } else {
                    settings.step_max
                };
                std::mem::swap(x, &mut trial);
                std::mem::swap(&mut g, &mut g_trial);
                f = f_trial;
                accepted = true;
                break;
            }
            t *= settings.backtrack;
        }
        if !accepted {
            break;
        }
        if settings.record_trace {
            trace.push(f);
        }
        residual = residual_of(x, &g, &mut dir);
    }

    Outcome {
        iterations,
        converged: residual <= settings.tolerance,
        residual,
        trace,
    }
}
