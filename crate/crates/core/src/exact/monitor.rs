//! Exhaustive enumeration of measurement records.
//!
//! For a record `m_1..m_n` the unnormalised purification state is
//! `ρ̃ = B^H B` with `B = K_{m_n} U K_{m_{n-1}} U ... K_{m_1} U sqrt(ρ)`, where
//! `U = exp(-i H dt)` (the trailing `U^{-n}` of the Heisenberg picture drops
//! out of `B^H B`). The sweep is depth first, one matrix per depth, and works
//! in the eigenbasis of the monitored observable so that each Kraus step is a
//! row scaling. By completeness the sum over all continuations of a prefix is
//! `B_s^H B_s`, which feeds the single-step marginals without a second pass.

use faer::{complex_native::c64, Mat, Side};

use crate::error::{Error, Result};
use crate::exact::kraus::KrausFamily;
use crate::exact::spin::{sqrt_state, thermal_state};
use crate::ledger::{EntropyLedger, StepEntry, PROBABILITY_TOLERANCE};
use crate::operator::{normalized_spectral_entropy, xlogx, DensityMatrix, HermitianOperator};

pub const DEFAULT_LEAF_BUDGET: f64 = 2e6;
/// Memory ceiling for the `(step, outcome)` marginal accumulators.
pub const ACCUMULATOR_BYTE_LIMIT: f64 = 4.0 * (1u64 << 30) as f64;

#[derive(Debug, Clone)]
pub struct MonitoringRun {
    pub hamiltonian: HermitianOperator,
    pub state: DensityMatrix,
    pub dt: f64,
    pub steps: usize,
    pub kraus: KrausFamily,
    pub leaf_budget: f64,
    /// Also record `J` for every prefix of the record (one extra
    /// eigenvalue problem per internal node).
    pub track_prefixes: bool,
}

impl MonitoringRun {
    /// Run starting from the Gibbs state of `hamiltonian` at `beta`.
    pub fn thermal(hamiltonian: HermitianOperator, beta: f64, dt: f64, steps: usize, kraus: KrausFamily) -> Result<Self> {
        let state = thermal_state(&hamiltonian, beta)?;
        Self::new(hamiltonian, state, dt, steps, kraus)
    }

    pub fn new(hamiltonian: HermitianOperator, state: DensityMatrix, dt: f64, steps: usize, kraus: KrausFamily) -> Result<Self> {
        if steps == 0 {
            return Err(Error::param("steps", "need at least one step"));
        }
        if !(dt > 0.0) || !dt.is_finite() {
            return Err(Error::param("dt", format!("{dt} must be positive")));
        }
        let d = hamiltonian.dim();
        if state.dim() != d || kraus.dim() != d {
            return Err(Error::param(
                "kraus",
                format!("dimensions differ: H {d}, state {}, Kraus {}", state.dim(), kraus.dim()),
            ));
        }
        Ok(Self { hamiltonian, state, dt, steps, kraus, leaf_budget: DEFAULT_LEAF_BUDGET, track_prefixes: false })
    }

    pub fn with_leaf_budget(mut self, budget: f64) -> Self {
        self.leaf_budget = budget;
        self
    }

    pub fn tracking_prefixes(mut self, on: bool) -> Self {
        self.track_prefixes = on;
        self
    }

    pub fn leaves(&self) -> f64 {
        (self.kraus.len() as f64).powi(self.steps as i32)
    }

    fn check_budget(&self) -> Result<()> {
        let leaves = self.leaves();
        if leaves > self.leaf_budget {
            return Err(Error::Budget { what: "outcome-tree leaves", required: leaves, limit: self.leaf_budget });
        }
        let d = self.hamiltonian.dim() as f64;
        let bytes = self.steps as f64 * self.kraus.len() as f64 * d * d * 16.0;
        if bytes > ACCUMULATOR_BYTE_LIMIT {
            return Err(Error::Budget { what: "marginal accumulator bytes", required: bytes, limit: ACCUMULATOR_BYTE_LIMIT });
        }
        Ok(())
    }
}

struct Sweep<'a> {
    kraus: &'a KrausFamily,
    u: Mat<c64>,
    steps: usize,
    track: bool,
    /// `marginals[s][m]`: weighted sum of `B^H B` over prefixes ending in `m` at step `s+1`.
    marginals: Vec<Vec<Mat<c64>>>,
    /// Per depth: `sum W d`, `sum W d ln d`, `sum W d S(ρ̃/d)`.
    mass: Vec<f64>,
    xlogx: Vec<f64>,
    conditional: Vec<f64>,
}

impl Sweep<'_> {
    fn visit(&mut self, depth: usize, b: &Mat<c64>, weight: f64) -> Result<()> {
        let x = &self.u * b;
        let n = x.nrows();
        for m in 0..self.kraus.len() {
            let k = self.kraus.diagonal(m);
            let w = self.kraus.weights()[m];
            let child = Mat::<c64>::from_fn(n, n, |i, j| x.read(i, j) * k[i]);
            let gram = child.adjoint() * &child;
            let acc = &mut self.marginals[depth][m];
            for j in 0..n {
                for i in 0..n {
                    acc.write(i, j, acc.read(i, j) + gram.read(i, j) * weight);
                }
            }
            let d: f64 = (0..n).map(|i| gram.read(i, i).re).sum();
            let cw = weight * w;
            self.mass[depth] += cw * d;
            self.xlogx[depth] += cw * xlogx(d);
            let leaf = depth + 1 == self.steps;
            if (leaf || self.track) && d > 0.0 {
                self.conditional[depth] += cw * d * entropy_of_gram(&gram)?;
            }
            if !leaf {
                self.visit(depth + 1, &child, cw)?;
            }
        }
        Ok(())
    }
}

/// Shannon entropy of a (density) distribution with `sum w p ln p = x` and
/// mass `z`, after normalising to unit mass.
fn shannon(x: f64, z: f64) -> f64 {
    -x / z + z.ln()
}

fn entropy_of_gram(gram: &Mat<c64>) -> Result<f64> {
    let ev = gram.selfadjoint_eigenvalues(Side::Lower);
    normalized_spectral_entropy(&ev)
}

/// Enumerates every record and returns the complete entropy ledger.
pub fn run_monitoring(run: &MonitoringRun) -> Result<EntropyLedger> {
    run.check_budget()?;
    let kraus = &run.kraus;
    let dim = run.hamiltonian.dim();
    let s0 = run.state.von_neumann_entropy();
    let sqrt_rho = sqrt_state(&run.state);
    let u = run.hamiltonian.evolution(run.dt);
    let (u, b0) = match kraus.basis() {
        None => (u, sqrt_rho),
        Some(v) => (v.adjoint() * &u * v, v.adjoint() * &sqrt_rho),
    };
    let mut sweep = Sweep {
        kraus,
        u,
        steps: run.steps,
        track: run.track_prefixes,
        marginals: (0..run.steps).map(|_| (0..kraus.len()).map(|_| Mat::<c64>::zeros(dim, dim)).collect()).collect(),
        mass: vec![0.0; run.steps],
        xlogx: vec![0.0; run.steps],
        conditional: vec![0.0; run.steps],
    };
    sweep.visit(0, &b0, 1.0)?;

    // Discretised continuous records lose ~1e-9 of probability to the grid
    // tails; every distribution is renormalised to unit mass before taking
    // entropies. The uninformative-meter reference (Q = 0 on the same grid)
    // is subtracted from Shannon entropies of continuous records.
    let reference = match kraus.reference_densities() {
        Some(r) => {
            let x = r.iter().zip(kraus.weights()).map(|(d, w)| w * xlogx(*d)).sum::<f64>();
            let z = r.iter().zip(kraus.weights()).map(|(d, w)| w * d).sum::<f64>();
            shannon(x, z)
        }
        None => 0.0,
    };

    let total = sweep.mass[run.steps - 1];
    if (total - 1.0).abs() > PROBABILITY_TOLERANCE {
        return Err(Error::Consistency(format!("record probabilities sum to {total:.12}")));
    }

    let mut entries = Vec::with_capacity(run.steps);
    for (s, accs) in sweep.marginals.iter().enumerate() {
        let mut x = 0.0;
        let mut prob = 0.0;
        let mut cond = 0.0;
        for (acc, w) in accs.iter().zip(kraus.weights()) {
            let p: f64 = (0..dim).map(|i| acc.read(i, i).re).sum();
            prob += w * p;
            x += w * xlogx(p);
            if p > 0.0 {
                cond += w * p * entropy_of_gram(acc)?;
            }
        }
        if (prob - 1.0).abs() > PROBABILITY_TOLERANCE {
            return Err(Error::Consistency(format!("step-{} marginal sums to {prob:.12}", s + 1)));
        }
        entries.push(StepEntry {
            step: s + 1,
            marginal_shannon: shannon(x, prob) - reference,
            purification: s0 - cond / prob,
            probability: prob,
        });
    }
    let joint_by_step: Vec<f64> =
        (0..run.steps).map(|s| shannon(sweep.xlogx[s], sweep.mass[s]) - (s + 1) as f64 * reference).collect();
    let j_by_step = run
        .track_prefixes
        .then(|| (0..run.steps).map(|s| s0 - sweep.conditional[s] / sweep.mass[s]).collect::<Vec<_>>());
    let purification = s0 - sweep.conditional[run.steps - 1] / total;
    Ok(EntropyLedger::assemble(
        run.dt,
        entries,
        joint_by_step,
        j_by_step,
        purification,
        total,
        kraus.is_continuous(),
    ))
}

/// Sum over all records of the weighted record probability, computed
/// independently of the sweep (useful as a quick leak check).
pub fn record_probability(run: &MonitoringRun) -> f64 {
    let rho = run.state.operator().entries();
    let n = run.kraus.len();
    let u = run.hamiltonian.evolution(run.dt);
    let mut total = 0.0;
    let mut stack = vec![(rho.to_owned(), 1.0, 0usize)];
    while let Some((r, w, depth)) = stack.pop() {
        if depth == run.steps {
            total += w * (0..r.nrows()).map(|i| r.read(i, i).re).sum::<f64>();
            continue;
        }
        let evolved = &u * &r * u.adjoint();
        for m in 0..n {
            let k = run.kraus.operator(m);
            stack.push((&k * &evolved * k.adjoint(), w * run.kraus.weights()[m], depth + 1));
        }
    }
    total
}
