//! Grid-refinement search over unequal segment lengths.
//!
//! Independent of the closed-form minimizer: it evaluates the alternating
//! `n`-segment energy for arbitrary lengths and searches for its minimum.

use crate::error::{domain, Error, Result};

/// Default cap on objective evaluations across all refinement levels.
pub const DEFAULT_EVALUATION_BUDGET: usize = 500_000_000;

const REFINE_POINTS: usize = 11;
const MAX_LEVELS: usize = 60;

#[derive(Debug, Clone, PartialEq)]
pub struct SegmentSearch {
    /// All `n` lengths; the last one is `λ` minus the others.
    pub lengths: Vec<f64>,
    pub energy: f64,
    pub evaluations: usize,
}

/// Energy of `n` alternating segments with the given free lengths.
pub fn alternating_energy(free_lengths: &[f64], lambda: f64, c_wstar: f64, mu: f64) -> f64 {
    let n = free_lengths.len() + 1;
    let used: f64 = free_lengths.iter().sum();
    let last = lambda - used;
    let cubes: f64 = free_lengths.iter().map(|l| l * l * l).sum::<f64>() + last * last * last;
    n as f64 * c_wstar + mu * (lambda - 1.0).powi(2) / (6.0 * lambda.powi(3)) * cubes
}

pub fn brute_force_segments(
    n: usize,
    lambda: f64,
    c_wstar: f64,
    mu: f64,
    resolution: usize,
) -> Result<SegmentSearch> {
    brute_force_segments_with_budget(n, lambda, c_wstar, mu, resolution, DEFAULT_EVALUATION_BUDGET)
}

pub fn brute_force_segments_with_budget(
    n: usize,
    lambda: f64,
    c_wstar: f64,
    mu: f64,
    resolution: usize,
    budget: usize,
) -> Result<SegmentSearch> {
    if !(2..=6).contains(&n) {
        return domain(format!("segment search supports 2 <= n <= 6, got {n}"));
    }
    if resolution < 100 {
        return domain(format!("resolution must be at least 100, got {resolution}"));
    }
    if !(lambda > 1.0 && lambda.is_finite()) {
        return domain(format!("load must satisfy λ > 1, got {lambda}"));
    }
    let dims = n - 1;
    let scale = mu * (lambda - 1.0).powi(2) / (6.0 * lambda.powi(3));
    let mut search = Search {
        lambda,
        best: vec![lambda / n as f64; dims],
        best_cubes: f64::INFINITY,
        evaluations: 0,
        budget,
        point: vec![0.0; dims],
    };

    // coarse level over the whole simplex
    let spacing = lambda / (resolution - 1) as f64;
    let axes: Vec<Vec<f64>> = (0..dims)
        .map(|_| (0..resolution).map(|i| i as f64 * spacing).collect())
        .collect();
    search.scan(&axes, 0, 0.0, 0.0)?;

    let mut half_width = 2.0 * spacing;
    for _ in 0..MAX_LEVELS {
        let axes: Vec<Vec<f64>> = search
            .best
            .iter()
            .map(|&c| {
                let lo = (c - half_width).max(0.0);
                let hi = (c + half_width).min(lambda);
                (0..REFINE_POINTS)
                    .map(|i| lo + (hi - lo) * i as f64 / (REFINE_POINTS - 1) as f64)
                    .collect()
            })
            .collect();
        search.scan(&axes, 0, 0.0, 0.0)?;
        let step = 2.0 * half_width / (REFINE_POINTS - 1) as f64;
        half_width = 2.0 * step;
        if half_width < 1e-13 * lambda {
            break;
        }
    }

    let used: f64 = search.best.iter().sum();
    let mut lengths = search.best.clone();
    lengths.push(lambda - used);
    Ok(SegmentSearch {
        energy: n as f64 * c_wstar + scale * search.best_cubes,
        lengths,
        evaluations: search.evaluations,
    })
}

struct Search {
    lambda: f64,
    best: Vec<f64>,
    best_cubes: f64,
    evaluations: usize,
    budget: usize,
    point: Vec<f64>,
}

impl Search {
    fn scan(&mut self, axes: &[Vec<f64>], depth: usize, used: f64, cubes: f64) -> Result<()> {
        if depth == axes.len() {
            self.evaluations += 1;
            if self.evaluations > self.budget {
                return Err(Error::BudgetExceeded(self.budget));
            }
            let last = self.lambda - used;
            let total = cubes + last * last * last;
            if total < self.best_cubes {
                self.best_cubes = total;
                self.best.copy_from_slice(&self.point);
            }
            return Ok(());
        }
        for &l in &axes[depth] {
            if used + l > self.lambda {
                break;
            }
            self.point[depth] = l;
            self.scan(axes, depth + 1, used + l, cubes + l * l * l)?;
        }
        Ok(())
    }
}
