//! Tabulated Keldysh spectra and their fluctuation–dissipation completion.

use std::io::{Read, Write};

use faer::complex_native::c64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ledger::fmt;
use crate::spectral::hilbert::{check_half_grid, coarsening_change, hilbert_transform, Parity, TailModel};

/// Evenness tolerance for input spectra on a symmetric grid.
pub const EVENNESS_TOLERANCE: f64 = 1e-10;
/// Relative change under grid coarsening above which the Kramers–Kronig
/// transform is flagged as under-resolved.
pub const HILBERT_TOLERANCE: f64 = 0.01;

/// Relation between `Im G_R` and `G_K`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FdtConvention {
    /// `Im G_R = tanh(βω/2) G_K / 2`, the relation implied by the harmonic
    /// mode expansion (and by the oscillator correlators).
    #[default]
    ModeExpansion,
    /// `Im G_R = tanh(βω) G_K / 2`.
    FullTanh,
}

impl FdtConvention {
    /// `Im G_R / G_K` at `y = βω`.
    pub fn factor(self, y: f64) -> f64 {
        match self {
            FdtConvention::ModeExpansion => 0.5 * (0.5 * y).tanh(),
            FdtConvention::FullTanh => 0.5 * y.tanh(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HilbertStatus {
    pub relative_change: f64,
    pub resolved: bool,
}

/// `G_K` and `G_R` on a non-negative half grid; the negative half follows
/// from `G_K` and `Re G_R` even, `Im G_R` odd.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralData {
    pub beta: f64,
    pub omega: Vec<f64>,
    pub keldysh: Vec<f64>,
    pub retarded: Vec<c64>,
    pub hilbert: Option<HilbertStatus>,
}

impl SpectralData {
    /// Data with an explicitly supplied retarded function (e.g. `G_R = 0`).
    pub fn with_retarded(omega: Vec<f64>, keldysh: Vec<f64>, retarded: Vec<c64>, beta: f64) -> Result<Self> {
        check_half_grid(&omega)?;
        check_beta(beta)?;
        if keldysh.len() != omega.len() || retarded.len() != omega.len() {
            return Err(Error::param("samples", "lengths differ from the grid"));
        }
        check_keldysh(&keldysh)?;
        if omega[0] == 0.0 && retarded[0].im != 0.0 {
            return Err(Error::param("G_R", "Im G_R must vanish at ω = 0 (odd)"));
        }
        Ok(Self { beta, omega, keldysh, retarded, hilbert: None })
    }

    /// Reduces samples on a symmetric grid to the half grid after checking
    /// symmetry of the grid and evenness of `G_K`.
    pub fn half_from_symmetric(omega: &[f64], keldysh: &[f64]) -> Result<(Vec<f64>, Vec<f64>)> {
        let n = omega.len();
        if keldysh.len() != n || n < 3 {
            return Err(Error::param("samples", "need matching ω and G_K columns with at least three rows"));
        }
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&a, &b| omega[a].total_cmp(&omega[b]));
        for k in 0..n {
            let (i, j) = (order[k], order[n - 1 - k]);
            let scale = omega[i].abs().max(1.0);
            if (omega[i] + omega[j]).abs() > 1e-12 * scale {
                return Err(Error::param("omega", format!("grid is not symmetric: {} vs {}", omega[i], omega[j])));
            }
            if (keldysh[i] - keldysh[j]).abs() > EVENNESS_TOLERANCE {
                return Err(Error::param("G_K", format!("not even at ω = {}: {} vs {}", omega[j], keldysh[i], keldysh[j])));
            }
        }
        let half: Vec<usize> = order.into_iter().filter(|&i| omega[i] >= 0.0).collect();
        Ok((half.iter().map(|&i| omega[i].abs()).collect(), half.iter().map(|&i| keldysh[i]).collect()))
    }

    pub fn len(&self) -> usize {
        self.omega.len()
    }

    pub fn is_empty(&self) -> bool {
        self.omega.is_empty()
    }

    /// `G̃ = G_K + |G_R|^2` on the half grid.
    pub fn g_tilde(&self) -> Vec<f64> {
        self.keldysh.iter().zip(&self.retarded).map(|(k, r)| k + r.re * r.re + r.im * r.im).collect()
    }

    /// Mirrored samples `(ω, G_K, G_R)` over the full symmetric grid.
    pub fn full_grid(&self) -> Vec<(f64, f64, c64)> {
        let mut out = Vec::with_capacity(2 * self.len());
        for i in (0..self.len()).rev() {
            if self.omega[i] > 0.0 {
                let r = self.retarded[i];
                out.push((-self.omega[i], self.keldysh[i], c64::new(r.re, -r.im)));
            }
        }
        for i in 0..self.len() {
            out.push((self.omega[i], self.keldysh[i], self.retarded[i]));
        }
        out
    }

    /// Reads `omega,G_K` rows (a symmetric grid); `#` lines are comments and
    /// a non-numeric first row is taken as a header.
    pub fn read_keldysh_csv<R: Read>(input: R) -> Result<(Vec<f64>, Vec<f64>)> {
        let mut rdr = csv::ReaderBuilder::new()
            .comment(Some(b'#'))
            .has_headers(false)
            .flexible(true)
            .trim(csv::Trim::All)
            .from_reader(input);
        let mut omega = Vec::new();
        let mut gk = Vec::new();
        for (row, rec) in rdr.records().enumerate() {
            let rec = rec?;
            if row == 0 && rec.get(0).is_some_and(|c| c.parse::<f64>().is_err()) {
                continue;
            }
            let parse = |k: usize| -> Result<f64> {
                rec.get(k)
                    .ok_or_else(|| Error::param("csv", "expected two columns"))?
                    .parse::<f64>()
                    .map_err(|e| Error::param("csv", e.to_string()))
            };
            omega.push(parse(0)?);
            gk.push(parse(1)?);
        }
        Ok((omega, gk))
    }

    pub fn write_csv<W: Write>(&self, mut out: W) -> Result<()> {
        writeln!(out, "# omega: frequency; G_K: Keldysh spectrum; ReG_R, ImG_R: retarded response")?;
        writeln!(out, "# beta={}", fmt(self.beta))?;
        writeln!(out, "omega,G_K,ReG_R,ImG_R")?;
        for (w, k, r) in self.full_grid() {
            writeln!(out, "{},{},{},{}", fmt(w), fmt(k), fmt(r.re), fmt(r.im))?;
        }
        Ok(())
    }
}

fn check_beta(beta: f64) -> Result<()> {
    if !(beta > 0.0) || !beta.is_finite() {
        return Err(Error::param("beta", format!("{beta} must be finite and positive")));
    }
    Ok(())
}

fn check_keldysh(gk: &[f64]) -> Result<()> {
    if let Some(g) = gk.iter().find(|g| !(**g >= 0.0) || !g.is_finite()) {
        return Err(Error::param("G_K", format!("sample {g} must be finite and non-negative")));
    }
    Ok(())
}

/// Sets `Im G_R` from the FDT and `Re G_R` by Kramers–Kronig on the half
/// grid, with an accuracy status from grid coarsening.
pub fn fdt_complete(
    omega: Vec<f64>,
    keldysh: Vec<f64>,
    beta: f64,
    convention: FdtConvention,
    tail: TailModel,
) -> Result<SpectralData> {
    check_half_grid(&omega)?;
    check_beta(beta)?;
    if keldysh.len() != omega.len() {
        return Err(Error::param("samples", "G_K length differs from the grid"));
    }
    check_keldysh(&keldysh)?;
    let im: Vec<f64> = omega.iter().zip(&keldysh).map(|(w, k)| convention.factor(beta * w) * k).collect();
    let re = hilbert_transform(&omega, &im, Parity::Odd, tail)?;
    let change = coarsening_change(&omega, &im, Parity::Odd, tail)?;
    let retarded = re.into_iter().zip(&im).map(|(r, i)| c64::new(r, *i)).collect();
    Ok(SpectralData {
        beta,
        omega,
        keldysh,
        retarded,
        hilbert: Some(HilbertStatus { relative_change: change, resolved: change <= HILBERT_TOLERANCE }),
    })
}
