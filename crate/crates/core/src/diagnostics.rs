//! Tabulates the number–phase commutator of the oscillator number
//! realization across a list of dimensions.
//!
//! For each `d` the report records the lowest `K × K` Fock block of
//! `[θ_z, N]`, the Weyl residual `‖ZX − ωXZ‖_max`, and how far the
//! computational basis is from the Fock basis on that window. Nothing is
//! fitted or extrapolated.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{CMatrix, CVector};
use crate::pauli::omega;
use crate::representations::{build_osc_number, number_operator};

pub const CSV_HEADER: &str = "d,K,weyl_residual,comm_offdiag_max,comm_diag_max";

#[derive(Clone, Debug, Serialize)]
pub struct LimitRow {
    pub d: usize,
    #[serde(rename = "K")]
    pub window: usize,
    pub weyl_residual: f64,
    /// Largest `|⟨k|[θ_z, N]|k′⟩|` with `k ≠ k′ < K`.
    pub comm_offdiag_max: f64,
    /// Largest `|⟨k|[θ_z, N]|k⟩|` with `k < K`.
    pub comm_diag_max: f64,
    /// `‖C + C†‖_max` of the windowed commutator.
    pub anti_hermitian_residual: f64,
    /// `‖⟨k|s⟩ − δ_{ks}‖_max` for `k, s < K`.
    pub fock_overlap_residual: f64,
    /// The windowed commutator itself.
    pub commutator: CMatrix,
}

#[derive(Clone, Debug, Serialize)]
pub struct LimitReport {
    pub window: usize,
    pub rows: Vec<LimitRow>,
}

fn row_for(d: usize, window: usize) -> Result<LimitRow> {
    let r = build_osc_number(d)?;
    let n = number_operator(d);
    let comm = r.theta().commutator(&n).leading_block(window);

    let mut offdiag = 0.0f64;
    let mut diag = 0.0f64;
    for i in 0..window {
        for j in 0..window {
            let v = comm[(i, j)].norm();
            if i == j {
                diag = diag.max(v);
            } else {
                offdiag = offdiag.max(v);
            }
        }
    }

    let weyl = (&r.z().matmul(r.x()) - &r.x().matmul(r.z()).scale(omega(d))).max_abs();

    let overlap = CMatrix::from_fn(window, window, |k, s| {
        CVector::basis(d, k).inner(&r.comp_basis()[s])
    });
    let fock_overlap_residual = overlap.max_diff(&CMatrix::identity(window));

    Ok(LimitRow {
        d,
        window,
        weyl_residual: weyl,
        comm_offdiag_max: offdiag,
        comm_diag_max: diag,
        anti_hermitian_residual: (&comm + &comm.adjoint()).max_abs(),
        fock_overlap_residual,
        commutator: comm,
    })
}

/// One row per entry of `dims`, in input order.
pub fn limit_study(dims: &[usize], window: usize) -> Result<LimitReport> {
    let min_dim = dims.iter().copied().min().ok_or(Error::InvalidDimension(0))?;
    if min_dim < 2 {
        return Err(Error::InvalidDimension(min_dim));
    }
    if window == 0 || window > min_dim {
        return Err(Error::Window { window, min_dim });
    }
    let rows = dims.par_iter().map(|&d| row_for(d, window)).collect::<Result<Vec<_>>>()?;
    Ok(LimitReport { window, rows })
}

impl LimitReport {
    pub fn to_csv(&self) -> String {
        let mut out = String::from(CSV_HEADER);
        out.push('\n');
        for r in &self.rows {
            out.push_str(&format!(
                "{},{},{:.6e},{:.6e},{:.6e}\n",
                r.d, r.window, r.weyl_residual, r.comm_offdiag_max, r.comm_diag_max
            ));
        }
        out
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn to_text(&self) -> String {
        let mut out = format!(
            "{:>4} {:>3} {:>14} {:>16} {:>14} {:>14}\n",
            "d", "K", "weyl_residual", "comm_offdiag_max", "comm_diag_max", "fock_overlap"
        );
        for r in &self.rows {
            out.push_str(&format!(
                "{:>4} {:>3} {:>14.3e} {:>16.6} {:>14.3e} {:>14.3e}\n",
                r.d, r.window, r.weyl_residual, r.comm_offdiag_max, r.comm_diag_max, r.fock_overlap_residual
            ));
        }
        out
    }
}
