//! Maximization of `β s_CNT` over non-negative even `G_K(y)`, optionally
//! with `G_R` tied to `G_K` by the fluctuation–dissipation relation.
//!
//! On the half grid the discretized objective is
//! `(1/2π) sum_i w_i [φ(G̃_i) + (y_i / sinh y_i) G_i]`, `φ(g) = ln(1+g) - g`,
//! with `Im G_R = D G`, `Re G_R = A G` (`A` the Hilbert matrix times `D`).
//! `φ` is concave and decreasing and `G̃` is convex in `G`, so the objective
//! is concave; it is maximized by projected Newton (Bertsekas) steps with the
//! exact Hessian from several starting points.

use std::f64::consts::PI;

use faer::{Mat, Side};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fit::power_law_fit;
use crate::spectral::data::FdtConvention;
use crate::spectral::hilbert::{hilbert_matrix, Parity};
use crate::spectral::rates::{planck_factor, untight_optimum};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct MaximizerOptions {
    pub beta: f64,
    /// `None` removes the constraint and sets `G_R = 0`.
    pub fdt: Option<FdtConvention>,
    pub y_min: f64,
    /// End of the geometric part of the grid and start of the uniform part.
    pub y_switch: f64,
    pub y_max: f64,
    pub log_points: usize,
    pub linear_points: usize,
    pub random_starts: usize,
    pub seed: u64,
    pub max_iterations: usize,
    pub tolerance: f64,
}

impl Default for MaximizerOptions {
    fn default() -> Self {
        Self {
            beta: 1.0,
            fdt: Some(FdtConvention::default()),
            y_min: 1e-4,
            y_switch: 1.0,
            y_max: 30.0,
            log_points: 120,
            linear_points: 300,
            random_starts: 2,
            seed: 7,
            max_iterations: 400,
            tolerance: 1e-12,
        }
    }
}

impl MaximizerOptions {
    pub fn unconstrained() -> Self {
        Self { fdt: None, ..Self::default() }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.beta > 0.0) || !self.beta.is_finite() {
            return Err(Error::param("beta", "must be finite and positive"));
        }
        if !(self.y_min > 0.0 && self.y_min < self.y_switch && self.y_switch < self.y_max) {
            return Err(Error::param("y_grid", "need 0 < y_min < y_switch < y_max"));
        }
        if self.y_max < 30.0 {
            return Err(Error::param("y_max", "grid must span at least |y| ≤ 30"));
        }
        if self.log_points < 2 || self.linear_points < 2 {
            return Err(Error::param("y_grid", "need at least two points per grid segment"));
        }
        if self.log_points + self.linear_points > 3000 {
            return Err(Error::Budget {
                what: "maximizer grid points",
                required: (self.log_points + self.linear_points) as f64,
                limit: 3000.0,
            });
        }
        if self.max_iterations == 0 || !(self.tolerance > 0.0) {
            return Err(Error::param("max_iterations", "need a positive iteration budget and tolerance"));
        }
        Ok(())
    }

    /// Geometric nodes on `[y_min, y_switch)` followed by uniform nodes on
    /// `[y_switch, y_max]`.
    pub fn y_grid(&self) -> Vec<f64> {
        let n = self.log_points;
        let ratio = (self.y_switch / self.y_min).ln() / n as f64;
        let mut y: Vec<f64> = (0..n).map(|i| self.y_min * (ratio * i as f64).exp()).collect();
        let m = self.linear_points;
        let h = (self.y_max - self.y_switch) / (m - 1) as f64;
        y.extend((0..m).map(|i| self.y_switch + h * i as f64));
        y
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MaximizerResult {
    /// `β s_CNT` at the optimum.
    pub value: f64,
    pub y: Vec<f64>,
    pub keldysh: Vec<f64>,
    /// Fitted `G_K ∼ prefactor · y^(-alpha)` over `y ∈ [1e-3, 1e-1]`.
    pub alpha: f64,
    pub prefactor: f64,
    pub converged: bool,
    pub iterations: usize,
    /// Final objective value of every start, in start order.
    pub start_values: Vec<f64>,
}

impl MaximizerResult {
    /// Relative `L²` distance to `y / (sinh y - y)` over `y ∈ [lo, hi]`.
    pub fn distance_to_untight_optimum(&self, lo: f64, hi: f64) -> f64 {
        let mut num = 0.0;
        let mut den = 0.0;
        for i in 1..self.y.len() {
            let (a, b) = (self.y[i - 1], self.y[i]);
            if a < lo || b > hi {
                continue;
            }
            let h = 0.5 * (b - a);
            for (x, g) in [(a, self.keldysh[i - 1]), (b, self.keldysh[i])] {
                let o = untight_optimum(x);
                num += h * (g - o).powi(2);
                den += h * o * o;
            }
        }
        (num / den).sqrt()
    }
}

/// Discretized objective with exact gradient and Hessian.
pub struct Objective {
    y: Vec<f64>,
    weights: Vec<f64>,
    planck: Vec<f64>,
    d: Vec<f64>,
    /// `H diag(D)` in ω units, or `None` without the constraint.
    a: Option<Mat<f64>>,
    beta: f64,
}

impl Objective {
    pub fn new(opts: &MaximizerOptions) -> Result<Self> {
        opts.validate()?;
        let y = opts.y_grid();
        let beta = opts.beta;
        let omega: Vec<f64> = y.iter().map(|v| v / beta).collect();
        let m = omega.len();
        // Trapezoid weights plus the rectangle [0, ω_0] at the first node.
        let mut weights = vec![0.0; m];
        for i in 0..m - 1 {
            let h = 0.5 * (omega[i + 1] - omega[i]);
            weights[i] += h;
            weights[i + 1] += h;
        }
        weights[0] += omega[0];
        let planck = y.iter().map(|&v| planck_factor(v)).collect();
        let (d, a) = match opts.fdt {
            Some(conv) => {
                let d: Vec<f64> = y.iter().map(|&v| conv.factor(v)).collect();
                let h = hilbert_matrix(&omega, Parity::Odd);
                let a = Mat::<f64>::from_fn(m, m, |i, j| h.read(i, j) * d[j]);
                (d, Some(a))
            }
            None => (vec![0.0; m], None),
        };
        Ok(Self { y, weights, planck, d, a, beta })
    }

    pub fn len(&self) -> usize {
        self.y.len()
    }

    pub fn is_empty(&self) -> bool {
        self.y.is_empty()
    }

    pub fn y(&self) -> &[f64] {
        &self.y
    }

    fn real_part(&self, g: &[f64]) -> Vec<f64> {
        match &self.a {
            Some(a) => (0..g.len()).map(|i| (0..g.len()).map(|j| a.read(i, j) * g[j]).sum()).collect(),
            None => vec![0.0; g.len()],
        }
    }

    fn g_tilde(&self, g: &[f64], re: &[f64]) -> Vec<f64> {
        (0..g.len()).map(|i| g[i] + (self.d[i] * g[i]).powi(2) + re[i] * re[i]).collect()
    }

    /// `β s_CNT` for samples `g` on the grid.
    pub fn value(&self, g: &[f64]) -> f64 {
        let re = self.real_part(g);
        let gt = self.g_tilde(g, &re);
        let sum: f64 = (0..g.len()).map(|i| self.weights[i] * (gt[i].ln_1p() - gt[i] + self.planck[i] * g[i])).sum();
        self.beta * sum / (2.0 * PI)
    }

    /// Value, gradient and Hessian.
    fn derivatives(&self, g: &[f64]) -> (f64, Vec<f64>, Mat<f64>) {
        let m = g.len();
        let re = self.real_part(g);
        let gt = self.g_tilde(g, &re);
        let scale = self.beta / (2.0 * PI);
        let w = &self.weights;
        let phi1: Vec<f64> = gt.iter().map(|x| -x / (1.0 + x)).collect();
        let phi2: Vec<f64> = gt.iter().map(|x| -1.0 / (1.0 + x).powi(2)).collect();
        let value = scale * (0..m).map(|i| w[i] * (gt[i].ln_1p() - gt[i] + self.planck[i] * g[i])).sum::<f64>();
        let diag: Vec<f64> = (0..m).map(|i| 1.0 + 2.0 * self.d[i] * self.d[i] * g[i]).collect();
        let mut grad: Vec<f64> = (0..m).map(|i| scale * w[i] * (phi1[i] * diag[i] + self.planck[i])).collect();
        let mut hess = Mat::<f64>::zeros(m, m);
        match &self.a {
            Some(a) => {
                // J = diag(1 + 2 D^2 G) + 2 diag(Re) A.
                let jac = Mat::<f64>::from_fn(m, m, |i, k| {
                    let base = if i == k { diag[i] } else { 0.0 };
                    base + 2.0 * re[i] * a.read(i, k)
                });
                for k in 0..m {
                    grad[k] += scale * (0..m).map(|i| w[i] * phi1[i] * 2.0 * re[i] * a.read(i, k)).sum::<f64>();
                }
                let left = Mat::<f64>::from_fn(m, m, |i, k| w[i] * phi2[i] * jac.read(i, k));
                let left_a = Mat::<f64>::from_fn(m, m, |i, k| 2.0 * w[i] * phi1[i] * a.read(i, k));
                hess = jac.transpose() * &left + a.transpose() * &left_a;
                for i in 0..m {
                    hess.write(i, i, hess.read(i, i) + 2.0 * w[i] * phi1[i] * self.d[i] * self.d[i]);
                }
            }
            None => {
                for i in 0..m {
                    hess.write(i, i, w[i] * (phi2[i] * diag[i] * diag[i] + 2.0 * phi1[i] * self.d[i] * self.d[i]));
                }
            }
        }
        for v in hess.as_mut().col_iter_mut() {
            for x in v.iter_mut() {
                *x *= scale;
            }
        }
        (value, grad, hess)
    }
}

struct Ascent {
    g: Vec<f64>,
    value: f64,
    iterations: usize,
    converged: bool,
}

fn projected_newton(obj: &Objective, start: Vec<f64>, opts: &MaximizerOptions) -> Ascent {
    let m = obj.len();
    let mut g = start;
    let mut value = obj.value(&g);
    for it in 1..=opts.max_iterations {
        let (_, grad, hess) = obj.derivatives(&g);
        // Variables pinned at zero whose gradient points out of the feasible set.
        let eps = 1e-12;
        let free: Vec<usize> = (0..m).filter(|&i| !(g[i] <= eps && grad[i] <= 0.0)).collect();
        let mut dir = vec![0.0; m];
        if !free.is_empty() {
            let nf = free.len();
            let neg = Mat::<f64>::from_fn(nf, nf, |a, b| -hess.read(free[a], free[b]));
            let rhs = Mat::<f64>::from_fn(nf, 1, |a, _| grad[free[a]]);
            let mut ridge = 0.0;
            let peak = (0..nf).map(|a| neg.read(a, a).abs()).fold(0.0, f64::max).max(1e-300);
            let step = loop {
                let mut shifted = neg.clone();
                for a in 0..nf {
                    shifted.write(a, a, shifted.read(a, a) + ridge);
                }
                if let Ok(ch) = shifted.cholesky(Side::Lower) {
                    break Some(faer::prelude::SpSolver::solve(&ch, &rhs));
                }
                ridge = if ridge == 0.0 { 1e-14 * peak } else { ridge * 10.0 };
                if ridge > peak {
                    break None;
                }
            };
            match step {
                Some(s) => {
                    for (a, &i) in free.iter().enumerate() {
                        dir[i] = s.read(a, 0);
                    }
                }
                None => {
                    for &i in &free {
                        dir[i] = grad[i];
                    }
                }
            }
        }
        // Projected Armijo backtracking.
        let mut t = 1.0;
        let mut accepted = None;
        for _ in 0..60 {
            let trial: Vec<f64> = (0..m).map(|i| (g[i] + t * dir[i]).max(0.0)).collect();
            let predicted: f64 = (0..m).map(|i| grad[i] * (trial[i] - g[i])).sum();
            let v = obj.value(&trial);
            if v >= value + 1e-4 * predicted && v.is_finite() {
                accepted = Some((trial, v));
                break;
            }
            t *= 0.5;
        }
        let Some((trial, v)) = accepted else {
            return Ascent { g, value, iterations: it, converged: true };
        };
        let gain = v - value;
        let moved = (0..m).map(|i| (trial[i] - g[i]).abs() / (1.0 + g[i])).fold(0.0, f64::max);
        g = trial;
        value = v;
        if gain.abs() <= opts.tolerance * value.abs().max(1.0) && moved < 1e-6 {
            return Ascent { g, value, iterations: it, converged: true };
        }
    }
    Ascent { g, value, iterations: opts.max_iterations, converged: false }
}

/// Initial curves: flat, `1/y`, `y/(sinh y - y)`, then seeded random ones.
pub fn starting_points(y: &[f64], opts: &MaximizerOptions) -> Vec<Vec<f64>> {
    let mut starts = vec![
        vec![1.0; y.len()],
        y.iter().map(|v| 1.0 / v).collect(),
        y.iter().map(|&v| untight_optimum(v)).collect(),
    ];
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    for _ in 0..opts.random_starts {
        starts.push(y.iter().map(|v| rng.gen_range(0.0..2.0) / v.min(1.0)).collect());
    }
    starts
}

pub fn maximize_fdt(opts: &MaximizerOptions) -> Result<MaximizerResult> {
    let obj = Objective::new(opts)?;
    let starts = starting_points(obj.y(), opts);
    let runs: Vec<Ascent> = starts.into_par_iter().map(|s| projected_newton(&obj, s, opts)).collect();
    let start_values: Vec<f64> = runs.iter().map(|r| r.value).collect();
    let best = runs
        .into_iter()
        .enumerate()
        .max_by(|(i, a), (j, b)| a.value.total_cmp(&b.value).then(j.cmp(i)))
        .map(|(_, r)| r)
        .ok_or_else(|| Error::Numerical("no maximizer starts".into()))?;
    if !best.value.is_finite() {
        return Err(Error::Numerical("maximizer diverged".into()));
    }
    let y = obj.y().to_vec();
    let points: Vec<(f64, f64)> = y
        .iter()
        .zip(&best.g)
        .filter(|(v, g)| **v >= 1e-3 && **v <= 1e-1 && **g > 0.0)
        .map(|(v, g)| (*v, *g))
        .collect();
    let (alpha, prefactor) = match power_law_fit(&points) {
        Some(f) => (-f.slope, f.intercept.exp()),
        None => (f64::NAN, f64::NAN),
    };
    Ok(MaximizerResult {
        value: best.value,
        y,
        keldysh: best.g,
        alpha,
        prefactor,
        converged: best.converged,
        iterations: best.iterations,
        start_values,
    })
}
