//! ε-sweeps of the regularized problems against their sharp limits, and the
//! crack-count scan over the load.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{domain, Error, Result};
use crate::material::{InterfacePotential, MaterialModel};
use crate::regularized::{
    eval_e_eps, eval_v_eps, minimize, mollify_with_profile, DiscreteField, Functional, Init,
    Problem, SharpField, SolveResult, SolveSettings, Start, TransitionProfile,
};
use crate::sharp::{
    bracket_argument, build_sharp_minimizer, crack_count, eval_i, v_n, PiecewiseConstantField,
    PiecewiseLinearField, Variant,
};

/// Relative slack below the Modica–Mortola bound before a row is suspect.
pub const LOWER_BOUND_SLACK: f64 = 0.02;
/// Relative increase of the L¹ distance tolerated over the last two rows.
pub const TAIL_INVERSION_SLACK: f64 = 0.05;

const C_WSTAR_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepMetadata {
    pub functional: Functional,
    pub lambda: f64,
    pub mu: f64,
    pub model: String,
    pub intervals: usize,
    pub seed: u64,
    pub tolerance: f64,
    pub max_iterations: usize,
    pub random_starts: usize,
    pub c_wstar: f64,
    /// Sharp limit energy of the candidates (`C_{W*}` or `V_n`).
    pub limit_energy: f64,
    /// Identifiers of the sharp candidates distances are measured against.
    pub candidates: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepRow {
    pub epsilon: f64,
    pub energy: f64,
    pub rescaled_energy: f64,
    pub transition_count: usize,
    /// L¹ distance of `H` (or of `h'`) to the nearest candidate.
    pub l1_distance_to_sharp: f64,
    /// Slope-L² distance, `V` sweeps only.
    pub h1_seminorm_distance: Option<f64>,
    /// Sup-norm distance of `h`, `V` sweeps only.
    pub sup_distance: Option<f64>,
    pub nearest_candidate: String,
    pub lower_bound: f64,
    pub upper_bound: f64,
    pub converged: bool,
    pub iterations: usize,
    pub start: String,
    /// Outside the lower/upper sandwich.
    pub suspect: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct SweepReport {
    pub metadata: SweepMetadata,
    pub rows: Vec<SweepRow>,
    #[serde(skip)]
    pub minimizers: Vec<DiscreteField>,
}

/// Behaviour of the L¹ distance over the last two rows.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum TailTrend {
    Decreasing,
    /// Grew by at most [`TAIL_INVERSION_SLACK`].
    MildInversion,
    Increasing,
    /// Fewer than two rows.
    Undetermined,
}

impl SweepReport {
    pub fn last(&self) -> Option<&SweepRow> {
        self.rows.last()
    }

    pub fn tail_trend(&self) -> TailTrend {
        let n = self.rows.len();
        if n < 2 {
            return TailTrend::Undetermined;
        }
        let (prev, last) = (self.rows[n - 2].l1_distance_to_sharp, self.rows[n - 1].l1_distance_to_sharp);
        if last < prev {
            TailTrend::Decreasing
        } else if last <= prev * (1.0 + TAIL_INVERSION_SLACK) {
            TailTrend::MildInversion
        } else {
            TailTrend::Increasing
        }
    }

    pub fn all_converged(&self) -> bool {
        self.rows.iter().all(|r| r.converged)
    }
}

struct Candidate {
    id: String,
    shape: CandidateShape,
}

enum CandidateShape {
    Stretch(PiecewiseConstantField),
    Deformation(PiecewiseLinearField),
}

fn check_epsilons(epsilons: &[f64]) -> Result<()> {
    if epsilons.is_empty() {
        return domain("ε list is empty");
    }
    if epsilons.iter().any(|&e| !(e > 0.0 && e.is_finite())) {
        return domain("every ε must be positive");
    }
    if epsilons.windows(2).any(|w| w[1] >= w[0]) {
        return domain("ε list must be strictly decreasing");
    }
    Ok(())
}

/// Sweeps `I_ε` over the ε ladder with continuation.
///
/// For `λ > 1` distances are measured to the right- and left-end single
/// cracks; for `λ <= 1` to the homogeneous state. `base.epsilon` is ignored.
pub fn gamma_sweep_i(
    lambda: f64,
    model: &MaterialModel,
    epsilons: &[f64],
    base: &SolveSettings,
) -> Result<SweepReport> {
    let c = model.c_wstar(C_WSTAR_TOL)?.value;
    let (candidates, limit) = if lambda > 1.0 {
        let candidates = vec![
            Candidate {
                id: format!("n1-{}", Variant::A),
                shape: CandidateShape::Stretch(PiecewiseConstantField::right_end_crack(lambda)?),
            },
            Candidate {
                id: format!("n1-{}", Variant::B),
                shape: CandidateShape::Stretch(PiecewiseConstantField::left_end_crack(lambda)?),
            },
        ];
        (candidates, c)
    } else {
        let homogeneous = PiecewiseConstantField::constant(lambda, 1.0 / lambda)?;
        let limit = if lambda == 1.0 { eval_i(&homogeneous, c) } else { f64::INFINITY };
        let candidates = vec![Candidate {
            id: "homogeneous".to_string(),
            shape: CandidateShape::Stretch(homogeneous),
        }];
        (candidates, limit)
    };
    sweep(Functional::E, lambda, 0.0, model, epsilons, base, c, limit, candidates)
}

/// Sweeps `V_ε` over the ε ladder with continuation.
///
/// For `λ > 1` distances are measured to both variants of the sharp
/// minimizer with `crack_count(λ, μ)` segments; otherwise to `h = y/λ`.
pub fn gamma_sweep_v(
    lambda: f64,
    mu: f64,
    model: &MaterialModel,
    epsilons: &[f64],
    base: &SolveSettings,
) -> Result<SweepReport> {
    let c = model.c_wstar(C_WSTAR_TOL)?.value;
    let (candidates, limit) = if lambda > 1.0 {
        let n = crack_count(c, mu, lambda)?;
        let candidates = Variant::BOTH
            .iter()
            .map(|&variant| {
                let sharp = build_sharp_minimizer(n, lambda, variant, c, mu)?;
                Ok(Candidate {
                    id: format!("n{n}-{variant}"),
                    shape: CandidateShape::Deformation(sharp.field),
                })
            })
            .collect::<Result<Vec<_>>>()?;
        (candidates, v_n(n, c, mu, lambda)?)
    } else {
        let field = PiecewiseLinearField::new(vec![0.0, lambda], vec![0.0, 1.0])?;
        let limit = if lambda == 1.0 { 0.0 } else { f64::INFINITY };
        let candidates = vec![Candidate {
            id: "homogeneous".to_string(),
            shape: CandidateShape::Deformation(field),
        }];
        (candidates, limit)
    };
    sweep(Functional::V, lambda, mu, model, epsilons, base, c, limit, candidates)
}

#[allow(clippy::too_many_arguments)]
fn sweep(
    functional: Functional,
    lambda: f64,
    mu: f64,
    model: &MaterialModel,
    epsilons: &[f64],
    base: &SolveSettings,
    c: f64,
    limit_energy: f64,
    candidates: Vec<Candidate>,
) -> Result<SweepReport> {
    check_epsilons(epsilons)?;
    let problem = Problem::new(functional, lambda, model.clone())?;
    let profile = TransitionProfile::new(model)?;
    let metadata = SweepMetadata {
        functional,
        lambda,
        mu,
        model: model.name().to_string(),
        intervals: base.intervals,
        seed: base.seed,
        tolerance: base.tolerance,
        max_iterations: base.max_iterations,
        random_starts: base.random_starts,
        c_wstar: c,
        limit_energy,
        candidates: candidates.iter().map(|c| c.id.clone()).collect(),
    };

    let mut rows = Vec::with_capacity(epsilons.len());
    let mut minimizers: Vec<DiscreteField> = Vec::with_capacity(epsilons.len());
    for &epsilon in epsilons {
        let settings = SolveSettings {
            epsilon,
            mu,
            ..base.clone()
        };
        let warm = minimizers.last().cloned().into_iter().collect();
        let best = minimize(&problem, &settings, &Init::Multistart(warm))?;
        let row = assess(&problem, &settings, &profile, &candidates, &best)?;
        rows.push(row);
        minimizers.push(best.field);
    }
    Ok(SweepReport {
        metadata,
        rows,
        minimizers,
    })
}

fn assess(
    problem: &Problem,
    settings: &SolveSettings,
    profile: &TransitionProfile,
    candidates: &[Candidate],
    best: &SolveResult,
) -> Result<SweepRow> {
    let field = &best.field;
    let profile_values = field.stretch_profile();
    let top = profile_values.iter().copied().fold(1.0, f64::max);
    let potential = InterfacePotential::new(&problem.model, top);
    let lower_bound = potential.total_variation(&profile_values);

    let mut nearest: Option<(f64, Option<f64>, Option<f64>, &str)> = None;
    let mut upper_bound = f64::INFINITY;
    for candidate in candidates {
        let (l1, h1, sup, sharp) = match &candidate.shape {
            CandidateShape::Stretch(f) => (stretch_l1(field, f), None, None, SharpField::Stretch(f)),
            CandidateShape::Deformation(f) => {
                let (l1, h1, sup) = deformation_distances(field, f);
                (l1, Some(h1), Some(sup), SharpField::Deformation(f))
            }
        };
        if nearest.is_none_or(|n| l1 < n.0) {
            nearest = Some((l1, h1, sup, &candidate.id));
        }
        let mollified = mollify_with_profile(sharp, settings.epsilon, profile, settings.intervals)?.field;
        let energy = match problem.functional {
            Functional::E => eval_e_eps(mollified.values(), problem.lambda, settings.epsilon, &problem.model),
            Functional::V => {
                eval_v_eps(mollified.values(), problem.lambda, settings.epsilon, settings.mu, &problem.model).unscaled
            }
        };
        upper_bound = upper_bound.min(energy / settings.epsilon);
    }
    // the homogeneous state is always a start, so it bounds the minimum too
    let homogeneous = crate::regularized::initial_field(problem, settings, &Start::Homogeneous)?;
    let homogeneous_energy = match problem.functional {
        Functional::E => eval_e_eps(homogeneous.values(), problem.lambda, settings.epsilon, &problem.model),
        Functional::V => {
            eval_v_eps(homogeneous.values(), problem.lambda, settings.epsilon, settings.mu, &problem.model).unscaled
        }
    };
    upper_bound = upper_bound.min(homogeneous_energy / settings.epsilon);

    let (l1, h1, sup, id) = nearest.ok_or_else(|| Error::Domain("no sharp candidate".into()))?;
    let rescaled = best.rescaled_energy;
    if !rescaled.is_finite() {
        return Err(Error::Domain(format!("non-finite energy at ε = {}", settings.epsilon)));
    }
    let suspect = rescaled < lower_bound * (1.0 - LOWER_BOUND_SLACK)
        || rescaled > upper_bound + 1e-9 * upper_bound.abs().max(1.0);
    Ok(SweepRow {
        epsilon: settings.epsilon,
        energy: best.energy,
        rescaled_energy: rescaled,
        transition_count: best.transition_count,
        l1_distance_to_sharp: l1,
        h1_seminorm_distance: h1,
        sup_distance: sup,
        nearest_candidate: id.to_string(),
        lower_bound,
        upper_bound,
        converged: best.converged,
        iterations: best.iterations,
        start: best.start.clone(),
        suspect,
    })
}

/// Trapezoid L¹ distance between nodal `H` and a sharp field.
fn stretch_l1(field: &DiscreteField, sharp: &PiecewiseConstantField) -> f64 {
    let dy = field.spacing();
    let gaps: Vec<f64> = field
        .values()
        .iter()
        .enumerate()
        .map(|(j, &v)| (v - sharp.value_at(j as f64 * dy)).abs())
        .collect();
    crate::regularized::trapezoid(&gaps, dy)
}

/// Slope L¹, slope L² and nodal sup distances to a sharp deformation.
fn deformation_distances(field: &DiscreteField, sharp: &PiecewiseLinearField) -> (f64, f64, f64) {
    let dy = field.spacing();
    let mut l1 = 0.0;
    let mut l2 = 0.0;
    for (j, s) in field.slopes().into_iter().enumerate() {
        let (a, b) = (j as f64 * dy, (j + 1) as f64 * dy);
        let target = (sharp.eval(b) - sharp.eval(a)) / dy;
        let d = s - target;
        l1 += dy * d.abs();
        l2 += dy * d * d;
    }
    let sup = field
        .values()
        .iter()
        .enumerate()
        .map(|(j, &v)| (v - sharp.eval(j as f64 * dy)).abs())
        .fold(0.0, f64::max);
    (l1, l2.sqrt(), sup)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScanRow {
    pub lambda: f64,
    pub x: f64,
    pub n: usize,
    pub v_n: f64,
    /// Material positions of the cracks of the variant-A minimizer.
    pub crack_positions: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScanMetadata {
    pub mu: f64,
    pub model: String,
    pub c_wstar: f64,
    pub lambda_start: f64,
    pub lambda_end: f64,
    pub step: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScanReport {
    pub metadata: ScanMetadata,
    pub rows: Vec<ScanRow>,
}

impl ScanReport {
    pub fn n_at(&self, lambda: f64) -> Option<usize> {
        self.rows
            .iter()
            .min_by(|a, b| (a.lambda - lambda).abs().total_cmp(&(b.lambda - lambda).abs()))
            .map(|r| r.n)
    }
}

/// Loads `start, start + step, ...` up to `end` inclusive (within a
/// relative `1e-9` of a step).
pub fn scan_loads(start: f64, end: f64, step: f64) -> Result<Vec<f64>> {
    if !(start > 1.0 && start.is_finite() && end.is_finite()) {
        return domain(format!("scan range must lie in (1, ∞), got [{start}, {end}]"));
    }
    if end < start {
        return domain(format!("scan range is empty: [{start}, {end}]"));
    }
    if !(step > 0.0 && step.is_finite()) {
        return domain(format!("scan step must be positive, got {step}"));
    }
    let count = ((end - start) / step + 1e-9).floor() as usize;
    Ok((0..=count).map(|k| start + k as f64 * step).collect())
}

/// Crack count, `V_n` and crack positions across a range of loads.
pub fn crack_scan(start: f64, end: f64, step: f64, mu: f64, model: &MaterialModel) -> Result<ScanReport> {
    if !(mu >= 0.0 && mu.is_finite()) {
        return domain(format!("μ must be non-negative, got {mu}"));
    }
    let loads = scan_loads(start, end, step)?;
    let c = model.c_wstar(C_WSTAR_TOL)?.value;
    let rows = loads
        .par_iter()
        .map(|&lambda| {
            let n = crack_count(c, mu, lambda)?;
            let sharp = build_sharp_minimizer(n, lambda, Variant::A, c, mu)?;
            Ok(ScanRow {
                lambda,
                x: bracket_argument(c, mu, lambda)?,
                n,
                v_n: sharp.energy,
                crack_positions: sharp.cracks.iter().map(|k| k.position).collect(),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    if let Some(w) = rows.windows(2).find(|w| w[1].n < w[0].n) {
        return Err(Error::Model(format!(
            "crack count decreases from {} to {} between λ = {} and λ = {}",
            w[0].n, w[1].n, w[0].lambda, w[1].lambda
        )));
    }
    Ok(ScanReport {
        metadata: ScanMetadata {
            mu,
            model: model.name().to_string(),
            c_wstar: c,
            lambda_start: start,
            lambda_end: end,
            step,
        },
        rows,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::material::builtin_lj;
    use proptest::prelude::*;

    fn c_lj() -> f64 {
        4.0 * 2f64.sqrt() / 15.0
    }

    #[test]
    fn scan_loads_cover_range_inclusively() {
        let loads = scan_loads(1.01, 1.99, 0.01).unwrap();
        assert_eq!(loads.len(), 99);
        assert!((loads[49] - 1.5).abs() < 1e-12);
        assert!((loads[98] - 1.99).abs() < 1e-12);
        assert!(scan_loads(1.0, 2.0, 0.1).is_err());
        assert!(scan_loads(1.5, 1.2, 0.1).is_err());
        assert!(scan_loads(1.1, 1.2, 0.0).is_err());
    }

    #[test]
    fn staircase_for_mu_200() {
        let report = crack_scan(1.01, 1.99, 0.01, 200.0, &builtin_lj()).unwrap();
        assert_eq!(report.n_at(1.5), Some(4));
        assert!(report.rows.windows(2).all(|w| w[0].n <= w[1].n));
        for row in &report.rows {
            assert_eq!(row.crack_positions.len(), row.n.div_ceil(2));
        }
    }

    #[test]
    fn zero_stiffness_gives_single_crack() {
        let report = crack_scan(1.01, 1.99, 0.01, 0.0, &builtin_lj()).unwrap();
        assert!(report.rows.iter().all(|r| r.n == 1));
    }

    #[test]
    fn softer_foundation_never_cracks_more() {
        let model = builtin_lj();
        let soft = crack_scan(1.01, 1.99, 0.01, 50.0, &model).unwrap();
        let stiff = crack_scan(1.01, 1.99, 0.01, 200.0, &model).unwrap();
        for (a, b) in soft.rows.iter().zip(&stiff.rows) {
            assert!(a.n <= b.n, "λ = {}", a.lambda);
        }
        assert!(soft.rows.iter().zip(&stiff.rows).any(|(a, b)| a.n < b.n));
    }

    #[test]
    fn critical_stiffness_matches_bracket_of_load_power() {
        // μ = 3C makes x = (λ - 1)^(2/3)
        let mu = 3.0 * c_lj();
        let report = crack_scan(1.05, 3.0, 0.05, mu, &builtin_lj()).unwrap();
        for row in &report.rows {
            let x = (row.lambda - 1.0).powf(2.0 / 3.0);
            assert!((row.x - x).abs() < 1e-9);
            let direct = crack_count(c_lj(), mu, row.lambda).unwrap();
            assert_eq!(row.n, direct);
        }
    }

    proptest! {
        #[test]
        fn count_nondecreasing_in_stiffness(lambda in 1.01f64..3.0, mu in 0.0f64..500.0, extra in 0.0f64..500.0) {
            let c = c_lj();
            prop_assert!(crack_count(c, mu, lambda).unwrap() <= crack_count(c, mu + extra, lambda).unwrap());
        }
    }

    fn quick(intervals: usize) -> SolveSettings {
        SolveSettings {
            intervals,
            max_iterations: 3000,
            tolerance: 1e-5,
            random_starts: 1,
            ..Default::default()
        }
    }

    #[test]
    fn epsilon_ladder_must_decrease() {
        let model = builtin_lj();
        assert!(gamma_sweep_i(1.4, &model, &[0.04, 0.08], &quick(200)).is_err());
        assert!(gamma_sweep_i(1.4, &model, &[], &quick(200)).is_err());
        assert!(gamma_sweep_i(1.4, &model, &[0.1, -0.1], &quick(200)).is_err());
    }

    #[test]
    fn unit_load_sweeps_stay_unbroken() {
        let model = builtin_lj();
        let report = gamma_sweep_i(1.0, &model, &[0.1, 0.05], &quick(200)).unwrap();
        for row in &report.rows {
            assert!(row.rescaled_energy.abs() < 1e-10);
            assert!(row.l1_distance_to_sharp < 1e-8);
        }
        let report = gamma_sweep_v(1.0, 200.0, &model, &[0.1, 0.05], &quick(200)).unwrap();
        for row in &report.rows {
            assert!(row.rescaled_energy.abs() < 1e-10);
            assert!(row.sup_distance.unwrap() < 1e-8);
        }
    }

    #[test]
    fn compression_sweep_is_homogeneous() {
        let model = builtin_lj();
        let eps = [0.1, 0.05];
        let report = gamma_sweep_i(0.8, &model, &eps, &quick(200)).unwrap();
        for (row, e) in report.rows.iter().zip(eps) {
            assert!((row.energy - 0.0625).abs() < 1e-8);
            assert!((row.rescaled_energy - 0.0625 / e).abs() < 1e-6);
            assert!(row.l1_distance_to_sharp < 1e-6);
        }
    }

    #[test]
    fn small_i_sweep_approaches_surface_constant() {
        let model = builtin_lj();
        let report = gamma_sweep_i(1.4, &model, &[0.08, 0.04], &quick(800)).unwrap();
        let c = c_lj();
        for row in &report.rows {
            assert_eq!(row.transition_count, 1);
            assert!((row.rescaled_energy - c).abs() < 0.05 * c);
            assert!(row.rescaled_energy >= row.lower_bound * (1.0 - LOWER_BOUND_SLACK));
            assert!(!row.suspect);
        }
        assert_eq!(report.tail_trend(), TailTrend::Decreasing);
        assert_eq!(report.minimizers.len(), 2);
    }

    #[test]
    fn free_foundation_v_sweep_has_one_transition() {
        let model = builtin_lj();
        let report = gamma_sweep_v(1.4, 0.0, &model, &[0.08, 0.04], &quick(800)).unwrap();
        let c = c_lj();
        let last = report.last().unwrap();
        assert_eq!(last.transition_count, 1);
        assert!((last.rescaled_energy - c).abs() < 0.1 * c);
        assert_eq!(report.metadata.candidates, vec!["n1-A", "n1-B"]);
    }
}
