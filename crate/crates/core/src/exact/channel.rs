//! Heisenberg-picture iteration of the unconditional measurement channel.
//!
//! `O^(k) = L (D L)^k [K_m^H K_m]` with `L[O] = U^H O U` and
//! `D[O] = sum_m w_m K_m^H O K_m`. A microscopic measurement only disturbs the
//! system appreciably while `O^(k)` is far from a multiple of the identity.

use faer::{complex_native::c64, Mat};

use crate::error::{Error, Result};
use crate::exact::kraus::KrausFamily;
use crate::operator::real;

#[derive(Debug, Clone)]
pub struct ChannelTrace {
    /// `‖O^(k) - (tr O^(k) / d) 1‖_F` for `k = 0..=n`.
    pub distances: Vec<f64>,
    /// `tr O^(k)`, conserved by unital channels.
    pub traces: Vec<f64>,
}

impl ChannelTrace {
    /// Least-squares slope of `ln d_k` against `k` over `window` (inclusive),
    /// with the coefficient of determination.
    pub fn log_slope(&self, window: std::ops::RangeInclusive<usize>) -> Option<(f64, f64)> {
        let pts: Vec<(f64, f64)> = window
            .filter_map(|k| self.distances.get(k).filter(|d| **d > 0.0).map(|d| (k as f64, d.ln())))
            .collect();
        crate::fit::linear_fit(&pts).map(|f| (f.slope, f.r_squared))
    }
}

/// Iterates the channel `n` times on `K_outcome^H K_outcome`.
pub fn channel_iterate(kraus: &KrausFamily, u: &Mat<c64>, outcome: usize, n: usize) -> Result<ChannelTrace> {
    let d = kraus.dim();
    if outcome >= kraus.len() {
        return Err(Error::param("outcome", format!("{outcome} outside family of {}", kraus.len())));
    }
    if u.nrows() != d || u.ncols() != d {
        return Err(Error::param("unitary", format!("expected {d}x{d}")));
    }
    // Work in the observable eigenbasis, where D is a Hadamard product; the
    // distance and trace are basis independent.
    let u = match kraus.basis() {
        None => u.clone(),
        Some(v) => v.adjoint() * u * v,
    };
    let kernel = kraus.dephasing_kernel();
    let k = kraus.diagonal(outcome);
    let mut o = Mat::<c64>::from_fn(d, d, |i, j| if i == j { real(k[i] * k[i]) } else { real(0.0) });
    let heisenberg = |o: &Mat<c64>| u.adjoint() * o * &u;
    let mut distances = Vec::with_capacity(n + 1);
    let mut traces = Vec::with_capacity(n + 1);
    o = heisenberg(&o);
    for step in 0..=n {
        let tr: f64 = (0..d).map(|i| o.read(i, i).re).sum();
        let mean = tr / d as f64;
        let dist = Mat::<c64>::from_fn(d, d, |i, j| if i == j { o.read(i, j) - real(mean) } else { o.read(i, j) }).norm_l2();
        distances.push(dist);
        traces.push(tr);
        if step < n {
            let dephased = Mat::<c64>::from_fn(d, d, |i, j| o.read(i, j) * kernel.read(i, j));
            o = heisenberg(&dephased);
        }
    }
    Ok(ChannelTrace { distances, traces })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::spin::SpinChainModel;
    use crate::operator::HermitianOperator;
    use approx::assert_abs_diff_eq;

    fn micro(sites: usize) -> (SpinChainModel, KrausFamily) {
        let m = SpinChainModel::mixed_field(sites).unwrap();
        let k = KrausFamily::binary(&m.microscopic_observable(0.75, 0, 2).unwrap()).unwrap();
        (m, k)
    }

    #[test]
    fn no_dynamics_keeps_distance() {
        let (_, k) = micro(4);
        let id = Mat::<c64>::identity(16, 16);
        let t = channel_iterate(&k, &id, 0, 5).unwrap();
        for d in &t.distances {
            assert_abs_diff_eq!(*d, t.distances[0], epsilon = 1e-12);
        }
    }

    #[test]
    fn conserved_observable_keeps_distance() {
        // h-only Hamiltonian (no transverse X term) commutes with Z0 Z2.
        let m = SpinChainModel::new(4, 1.245, 0.945).unwrap();
        let diag: Vec<f64> = (0..16)
            .map(|b| {
                (0..4).map(|j| 1.245 * crate::exact::spin::z_value(b, j)).sum::<f64>()
                    + (0..4).map(|j| 0.945 * crate::exact::spin::z_value(b, j) * crate::exact::spin::z_value(b, (j + 1) % 4)).sum::<f64>()
            })
            .collect();
        let h = HermitianOperator::from_diagonal(&diag);
        let k = KrausFamily::binary(&m.microscopic_observable(0.75, 0, 2).unwrap()).unwrap();
        let t = channel_iterate(&k, &h.evolution(1.0), 0, 6).unwrap();
        for d in &t.distances {
            assert_abs_diff_eq!(*d, t.distances[0], epsilon = 1e-12);
        }
    }

    #[test]
    fn generic_dynamics_decays_and_preserves_trace() {
        let (m, k) = micro(6);
        let u = m.hamiltonian().unwrap().evolution(1.0);
        let t = channel_iterate(&k, &u, 0, 10).unwrap();
        assert!(t.distances[10] < 0.5 * t.distances[0]);
        for tr in &t.traces {
            assert_abs_diff_eq!(*tr, t.traces[0], epsilon = 1e-9);
        }
        let (slope, _) = t.log_slope(2..=10).unwrap();
        assert!(slope < 0.0);
    }
}
