//! The two-qudit SUM gate, both as a permutation and as the evolution under
//! a number–number (or `J_z`–`J_z`) coupling.
//!
//! The control qudit is read in the number basis and the target in the phase
//! basis `F|s⟩`. With `B = 1 ⊗ F` the evolved gate in index labels is
//! `G(τ) = B†·exp(−iτ·G₁⊗G₂)·B`, where `G₁ = G₂` has spectrum `0…d−1`.
//! Since `e^{−iτ s₁ N}F|s₂⟩ = F|s₂ − k s₁⟩` for `τ = 2πk/d`, the SUM
//! permutation appears only at `k = d − 1`.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::linalg::{exp_i_hermitian, tensor_product, CMatrix, ONE};
use crate::representations::{build_spin_number, fourier_matrix, number_operator};

/// Agreement required between an evolved gate and the SUM permutation.
pub const CALIBRATION_TOL: f64 = 1e-10;

/// Sign of the exponent in the phase-state kernel `e^{±2πins/d}` of the target.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum KernelSign {
    Plus,
    Minus,
}

/// Interaction phase `τ = χt` that turns the coupling into SUM.
#[derive(Clone, Debug, PartialEq)]
pub struct SumCalibration {
    pub d: usize,
    /// `τ = 2πk/d`.
    pub tau: f64,
    pub k: usize,
    pub sign_convention: KernelSign,
}

/// Which Hamiltonian drives the gate.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Coupling {
    /// `χ N₁N₂` between two oscillator modes.
    NumberNumber,
    /// `χ (j − J_z)₁(j − J_z)₂` between two spins.
    SpinSpin,
}

impl Coupling {
    fn single_site(self, d: usize) -> Result<CMatrix> {
        match self {
            Coupling::NumberNumber => Ok(number_operator(d)),
            Coupling::SpinSpin => Ok(build_spin_number(d)?.generator().clone()),
        }
    }
}

fn check_dim(d: usize) -> Result<()> {
    if d < 2 {
        return Err(Error::InvalidDimension(d));
    }
    Ok(())
}

/// `|s₁, s₂⟩ ↦ |s₁, s₁ + s₂ mod d⟩`, control first.
pub fn sum_gate_matrix(d: usize) -> Result<CMatrix> {
    controlled_shift(d, 1)
}

/// `|s₁, s₂⟩ ↦ |s₁, s₂ − s₁ mod d⟩`.
pub fn inverse_sum(d: usize) -> Result<CMatrix> {
    check_dim(d)?;
    controlled_shift(d, d - 1)
}

fn controlled_shift(d: usize, step: usize) -> Result<CMatrix> {
    check_dim(d)?;
    let mut m = CMatrix::zeros(d * d, d * d);
    for s1 in 0..d {
        for s2 in 0..d {
            m[(s1 * d + (step * s1 + s2) % d, s1 * d + s2)] = ONE;
        }
    }
    Ok(m)
}

/// `G(τ) = B†·exp(−iτ·H)·B` in index labels, `H = G₁ ⊗ G₂`, `B = 1 ⊗ F`.
pub fn evolve(d: usize, coupling: Coupling, tau: f64) -> Result<CMatrix> {
    check_dim(d)?;
    let site = coupling.single_site(d)?;
    let hamiltonian = tensor_product(&site, &site);
    let propagator = exp_i_hermitian(&hamiltonian, -tau)?;
    let b = tensor_product(&CMatrix::identity(d), &fourier_matrix(d)?);
    Ok(b.adjoint().matmul(&propagator).matmul(&b))
}

/// Searches `τ ∈ {2πk/d}` for the phase that reproduces SUM and insists on a
/// unique hit.
pub fn calibrate(d: usize, coupling: Coupling) -> Result<(CMatrix, SumCalibration)> {
    let target = sum_gate_matrix(d)?;
    let mut hits = Vec::new();
    for k in 0..d {
        let tau = 2.0 * PI * k as f64 / d as f64;
        let gate = evolve(d, coupling, tau)?;
        if gate.max_diff(&target) < CALIBRATION_TOL {
            hits.push((k, tau, gate));
        }
    }
    if hits.len() != 1 {
        return Err(Error::Calibration { d, working: hits.into_iter().map(|h| h.0).collect() });
    }
    let (k, tau, gate) = hits.pop().expect("exactly one hit");
    Ok((gate, SumCalibration { d, tau, k, sign_convention: KernelSign::Plus }))
}

pub fn sum_via_number_coupling(d: usize) -> Result<(CMatrix, SumCalibration)> {
    calibrate(d, Coupling::NumberNumber)
}

pub fn sum_via_spin_coupling(d: usize) -> Result<(CMatrix, SumCalibration)> {
    calibrate(d, Coupling::SpinSpin)
}

/// `τ = 2π(d−1)/d`.
pub fn sum_interaction_phase(d: usize) -> f64 {
    2.0 * PI * (d - 1) as f64 / d as f64
}
