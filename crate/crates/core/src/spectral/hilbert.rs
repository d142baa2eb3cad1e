//! Grid Hilbert transform `(Hf)(y) = (1/π) PV ∫ f(x) / (x - y) dx` for odd or
//! even functions sampled on a half grid `0 ≤ x_0 < x_1 < ...`.
//!
//! `f` is interpolated linearly between the mirrored samples and each
//! interval is integrated exactly against the kernel; at the singular node the
//! logarithms of the two adjacent intervals cancel, which realises the
//! principal value by symmetric exclusion. Beyond the grid `f` is taken to
//! vanish unless a tail model is requested.

use faer::Mat;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Parity {
    #[default]
    Odd,
    Even,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TailModel {
    /// `f = 0` beyond the last node.
    #[default]
    Vanishing,
    /// `f(x) = f(X) X / x` beyond the last node `X` (odd input only).
    InverseFrequency,
}

/// Validates a strictly increasing, non-negative half grid.
pub fn check_half_grid(x: &[f64]) -> Result<()> {
    if x.len() < 2 {
        return Err(Error::param("omega", "need at least two grid points"));
    }
    if !(x[0] >= 0.0) {
        return Err(Error::param("omega", "half grid must start at a non-negative frequency"));
    }
    if x.windows(2).any(|w| !(w[1] > w[0])) || !x[x.len() - 1].is_finite() {
        return Err(Error::param("omega", "grid must be strictly increasing and finite"));
    }
    Ok(())
}

/// Matrix `M` with `(Hf)(x_i) = sum_j M_ij f(x_j)` for the given parity.
pub fn hilbert_matrix(x: &[f64], parity: Parity) -> Mat<f64> {
    let m = x.len();
    // Mirrored grid as (position, half-grid index, sign); a node at zero is
    // shared by both halves.
    let mut full: Vec<(f64, usize, f64)> = Vec::with_capacity(2 * m);
    let sign = match parity {
        Parity::Odd => -1.0,
        Parity::Even => 1.0,
    };
    for j in (0..m).rev() {
        if x[j] > 0.0 {
            full.push((-x[j], j, sign));
        }
    }
    for (j, &xj) in x.iter().enumerate() {
        full.push((xj, j, 1.0));
    }
    let mut out = Mat::<f64>::zeros(m, m);
    let logabs = |d: f64| if d == 0.0 { 0.0 } else { d.abs().ln() };
    for (i, &y) in x.iter().enumerate() {
        for w in full.windows(2) {
            let (a, ja, sa) = w[0];
            let (b, jb, sb) = w[1];
            let l = logabs(b - y) - logabs(a - y);
            let ca = -1.0 + l * (b - y) / (b - a);
            let cb = 1.0 + l * (y - a) / (b - a);
            out.write(i, ja, out.read(i, ja) + sa * ca / std::f64::consts::PI);
            out.write(i, jb, out.read(i, jb) + sb * cb / std::f64::consts::PI);
        }
    }
    out
}

/// Contribution of an inverse-frequency tail beyond `X` for an odd input
/// with `f(X) = fx`: `(f(X) X / (π y)) ln((X + y)/(X - y))`. At `y = X` the
/// `ln|X - y|` cancels against the grid part and is dropped on both sides.
pub fn inverse_tail(x_max: f64, fx: f64, y: f64) -> f64 {
    let c = fx * x_max;
    if y == 0.0 {
        2.0 * c / (std::f64::consts::PI * x_max)
    } else if y == x_max {
        fx / std::f64::consts::PI * (2.0 * x_max).ln()
    } else {
        c / (std::f64::consts::PI * y) * ((x_max + y) / (x_max - y)).ln()
    }
}

/// Applies the transform to samples `f` on the half grid `x`.
pub fn hilbert_transform(x: &[f64], f: &[f64], parity: Parity, tail: TailModel) -> Result<Vec<f64>> {
    check_half_grid(x)?;
    if f.len() != x.len() {
        return Err(Error::param("samples", "length differs from the grid"));
    }
    let h = hilbert_matrix(x, parity);
    let mut out: Vec<f64> = (0..x.len()).map(|i| (0..x.len()).map(|j| h.read(i, j) * f[j]).sum()).collect();
    if tail == TailModel::InverseFrequency {
        if parity != Parity::Odd {
            return Err(Error::param("tail", "the inverse-frequency tail applies to odd inputs"));
        }
        let xm = x[x.len() - 1];
        let fx = f[f.len() - 1];
        for (o, &y) in out.iter_mut().zip(x) {
            *o += inverse_tail(xm, fx, y);
        }
    } else if out.len() >= 3 && f[f.len() - 1] != 0.0 {
        // A cut-off at X with f(X) != 0 makes the principal value diverge
        // like ln|X - y|; the endpoint is extrapolated from inside instead,
        // which keeps the transform invariant under rescaling the grid.
        let m = out.len();
        let (x0, x1, x2) = (x[m - 3], x[m - 2], x[m - 1]);
        out[m - 1] = out[m - 2] + (out[m - 2] - out[m - 3]) * (x2 - x1) / (x1 - x0);
    }
    Ok(out)
}

/// Largest change of the transform at shared nodes when every other node is
/// dropped, relative to the peak magnitude of the fine transform (pointwise
/// ratios are meaningless near sign changes). The last coarse node is left
/// out: truncation there leaves a grid-dependent endpoint logarithm.
pub fn coarsening_change(x: &[f64], f: &[f64], parity: Parity, tail: TailModel) -> Result<f64> {
    let fine = hilbert_transform(x, f, parity, tail)?;
    let xc: Vec<f64> = x.iter().step_by(2).cloned().collect();
    let fc: Vec<f64> = f.iter().step_by(2).cloned().collect();
    if xc.len() < 2 {
        return Ok(0.0);
    }
    let coarse = hilbert_transform(&xc, &fc, parity, tail)?;
    let peak = fine.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
    if peak == 0.0 {
        return Ok(0.0);
    }
    Ok(coarse[..coarse.len() - 1].iter().enumerate().map(|(k, c)| (c - fine[2 * k]).abs()).fold(0.0, f64::max) / peak)
}
