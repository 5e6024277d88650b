//! Multi-qudit state vectors with a per-qudit encoding tag.
//!
//! Amplitudes are always stored in the physical Fock (number) coordinates,
//! mixed-radix with the first qudit most significant. The tag only says which
//! basis a qudit's computational labels refer to: `Number` means `|s⟩ = |n=s⟩`,
//! `Phase` means `|s⟩ = F|n=s⟩`. Logical gates are picked to match the tag.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gates::{calibrate, Coupling};
use crate::linalg::{complex_pair, exp_i_hermitian, tensor_product, CMatrix, CVector, EPS_UNIT, ZERO};
use crate::representations::{fourier_matrix, number_operator, Encoding, RealizationKind};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Qudit {
    pub dim: usize,
    pub encoding: Encoding,
}

#[derive(Clone, Debug)]
pub struct Register {
    qudits: Vec<Qudit>,
    state: CVector,
}

/// JSON layout of a register: qudit header plus `[re, im]` amplitudes.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StateDump {
    pub qudits: Vec<Qudit>,
    pub state: Vec<[f64; 2]>,
}

impl Register {
    /// Product of computational basis states, every qudit in the number encoding.
    pub fn init(dims: &[usize], labels: &[usize]) -> Result<Register> {
        if dims.len() != labels.len() {
            return Err(Error::DimensionMismatch { left: dims.len(), right: labels.len() });
        }
        if dims.is_empty() {
            return Err(Error::InvalidDimension(0));
        }
        let mut index = 0;
        for (q, (&dim, &label)) in dims.iter().zip(labels).enumerate() {
            if dim < 2 {
                return Err(Error::InvalidDimension(dim));
            }
            if label >= dim {
                return Err(Error::LabelOutOfRange { qudit: q, label, dim });
            }
            index = index * dim + label;
        }
        let total = dims.iter().product();
        Ok(Register {
            qudits: dims.iter().map(|&dim| Qudit { dim, encoding: Encoding::Number }).collect(),
            state: CVector::basis(total, index),
        })
    }

    pub fn qudits(&self) -> &[Qudit] {
        &self.qudits
    }

    pub fn len(&self) -> usize {
        self.qudits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.qudits.is_empty()
    }

    pub fn state(&self) -> &CVector {
        &self.state
    }

    pub fn dim(&self, q: usize) -> Result<usize> {
        Ok(self.qudit(q)?.dim)
    }

    pub fn encoding(&self, q: usize) -> Result<Encoding> {
        Ok(self.qudit(q)?.encoding)
    }

    fn qudit(&self, q: usize) -> Result<&Qudit> {
        self.qudits.get(q).ok_or(Error::QuditOutOfRange { index: q, count: self.qudits.len() })
    }

    /// Number of amplitudes spanned by the qudits after `q`.
    fn stride(&self, q: usize) -> usize {
        self.qudits[q + 1..].iter().map(|u| u.dim).product()
    }

    /// Applies `g` (unitary, `d_q × d_q`) to qudit `q`.
    pub fn apply_single(&mut self, q: usize, g: &CMatrix) -> Result<()> {
        let d = self.dim(q)?;
        if g.shape() != (d, d) {
            return Err(Error::Shape { op: "apply_single", left: g.shape(), right: (d, d) });
        }
        check_unitary(g)?;

        let stride = self.stride(q);
        let block = d * stride;
        let amps = self.state.as_mut_slice();
        let mut scratch = vec![ZERO; d];
        for outer in (0..amps.len()).step_by(block) {
            for inner in 0..stride {
                let base = outer + inner;
                for (s, slot) in scratch.iter_mut().enumerate() {
                    *slot = amps[base + s * stride];
                }
                for r in 0..d {
                    amps[base + r * stride] = (0..d).map(|c| g[(r, c)] * scratch[c]).sum();
                }
            }
        }
        Ok(())
    }

    /// Applies `g` (unitary, `(d₁d₂) × (d₁d₂)`, first factor = `q1`) to two distinct qudits.
    pub fn apply_two(&mut self, q1: usize, q2: usize, g: &CMatrix) -> Result<()> {
        let d1 = self.dim(q1)?;
        let d2 = self.dim(q2)?;
        if q1 == q2 {
            return Err(Error::SameQudit(q1));
        }
        let n = d1 * d2;
        if g.shape() != (n, n) {
            return Err(Error::Shape { op: "apply_two", left: g.shape(), right: (n, n) });
        }
        check_unitary(g)?;

        let (s1, s2) = (self.stride(q1), self.stride(q2));
        let total = self.state.dim();
        let amps = self.state.as_mut_slice();
        let mut visited = vec![false; total];
        let mut scratch = vec![ZERO; n];
        let mut offsets = vec![0usize; n];
        for (i1, chunk) in offsets.chunks_mut(d2).enumerate() {
            for (i2, off) in chunk.iter_mut().enumerate() {
                *off = i1 * s1 + i2 * s2;
            }
        }
        for base in 0..total {
            // A base index has both digits zero.
            if visited[base] || (base / s1) % d1 != 0 || (base / s2) % d2 != 0 {
                continue;
            }
            for (slot, off) in scratch.iter_mut().zip(&offsets) {
                *slot = amps[base + off];
                visited[base + off] = true;
            }
            for r in 0..n {
                amps[base + offsets[r]] = (0..n).map(|c| g[(r, c)] * scratch[c]).sum();
            }
        }
        Ok(())
    }

    /// SUM from the number-encoded `control` onto the phase-encoded `target`,
    /// realized as the calibrated `exp(−iτ N_c N_t)` evolution.
    pub fn apply_sum(&mut self, control: usize, target: usize) -> Result<()> {
        let dc = self.dim(control)?;
        let dt = self.dim(target)?;
        if control == target {
            return Err(Error::SameQudit(control));
        }
        if dc != dt {
            return Err(Error::DimensionMismatch { left: dc, right: dt });
        }
        for (q, expected) in [(control, Encoding::Number), (target, Encoding::Phase)] {
            let found = self.encoding(q)?;
            if found != expected {
                return Err(Error::Encoding { qudit: q, expected, found });
            }
        }
        let (_, calibration) = calibrate(dc, Coupling::NumberNumber)?;
        let n = number_operator(dc);
        let propagator = exp_i_hermitian(&tensor_product(&n, &n), -calibration.tau)?;
        self.apply_two(control, target, &propagator)
    }

    /// Moves qudit `q` between the number and phase encodings with `F` or `F†`.
    pub fn swap_encoding(&mut self, q: usize) -> Result<()> {
        let qudit = *self.qudit(q)?;
        let f = fourier_matrix(qudit.dim)?;
        let g = match qudit.encoding {
            Encoding::Number => f,
            Encoding::Phase => f.adjoint(),
        };
        self.apply_single(q, &g)?;
        self.qudits[q].encoding = qudit.encoding.flipped();
        Ok(())
    }

    /// Logical `X^power` in the qudit's current encoding.
    pub fn apply_x(&mut self, q: usize, power: usize) -> Result<()> {
        let g = logical_x(self.qudit(q)?)?.pow(power as u64);
        self.apply_single(q, &g)
    }

    /// Logical `Z^power` in the qudit's current encoding.
    pub fn apply_z(&mut self, q: usize, power: usize) -> Result<()> {
        let g = logical_z(self.qudit(q)?)?.pow(power as u64);
        self.apply_single(q, &g)
    }

    /// Fourier gate `F` (or `F†`); the encoding tag is unchanged.
    pub fn apply_fourier(&mut self, q: usize, inverse: bool) -> Result<()> {
        let f = fourier_matrix(self.dim(q)?)?;
        let g = if inverse { f.adjoint() } else { f };
        self.apply_single(q, &g)
    }

    /// Born probabilities for the labels of qudit `q` in its tagged basis.
    /// Read-only.
    pub fn measure_probabilities(&self, q: usize) -> Result<Vec<f64>> {
        let qudit = *self.qudit(q)?;
        let d = qudit.dim;
        let mut view = self.clone();
        if qudit.encoding == Encoding::Phase {
            view.apply_single(q, &fourier_matrix(d)?.adjoint())?;
        }
        let stride = self.stride(q);
        let mut probs = vec![0.0; d];
        for (i, amp) in view.state.as_slice().iter().enumerate() {
            probs[(i / stride) % d] += amp.norm_sqr();
        }
        Ok(probs)
    }

    pub fn dump(&self) -> StateDump {
        StateDump {
            qudits: self.qudits.clone(),
            state: self.state.as_slice().iter().map(|z| complex_pair(*z)).collect(),
        }
    }
}

fn check_unitary(g: &CMatrix) -> Result<()> {
    let residual = g.unitarity_residual();
    if residual >= EPS_UNIT {
        return Err(Error::NotUnitary { residual });
    }
    Ok(())
}

fn realization_kind(encoding: Encoding) -> RealizationKind {
    match encoding {
        Encoding::Number => RealizationKind::OscNumber,
        Encoding::Phase => RealizationKind::OscPhase,
    }
}

fn logical_x(q: &Qudit) -> Result<CMatrix> {
    Ok(realization_kind(q.encoding).build(q.dim)?.x().clone())
}

fn logical_z(q: &Qudit) -> Result<CMatrix> {
    Ok(realization_kind(q.encoding).build(q.dim)?.z().clone())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::ONE;
    use crate::pauli::omega;
    use crate::representations::{clock_matrix, shift_matrix};

    #[test]
    fn init_indices() {
        let r = Register::init(&[3, 3], &[1, 1]).unwrap();
        assert_eq!(r.state(), &CVector::basis(9, 4));
        let r = Register::init(&[2], &[0]).unwrap();
        assert_eq!(r.state(), &CVector::basis(2, 0));
        let r = Register::init(&[2, 3], &[1, 2]).unwrap();
        assert_eq!(r.state(), &CVector::basis(6, 5));
    }

    #[test]
    fn init_rejects_bad_labels() {
        assert_eq!(
            Register::init(&[2, 3], &[0, 3]).unwrap_err(),
            Error::LabelOutOfRange { qudit: 1, label: 3, dim: 3 }
        );
        assert!(Register::init(&[1], &[0]).is_err());
        assert!(Register::init(&[2, 2], &[0]).is_err());
    }

    #[test]
    fn shift_on_qutrit() {
        let mut r = Register::init(&[3], &[1]).unwrap();
        r.apply_single(0, &shift_matrix(3)).unwrap();
        assert_eq!(r.state(), &CVector::basis(3, 2));
        r.apply_single(0, &CMatrix::identity(3)).unwrap();
        assert_eq!(r.state(), &CVector::basis(3, 2));
    }

    #[test]
    fn apply_single_rejects_bad_gates() {
        let mut r = Register::init(&[3, 2], &[0, 0]).unwrap();
        assert!(matches!(r.apply_single(0, &shift_matrix(2)), Err(Error::Shape { .. })));
        let not_unitary = CMatrix::from_real_diagonal(&[1.0, 2.0]);
        assert!(matches!(r.apply_single(1, &not_unitary), Err(Error::NotUnitary { .. })));
        assert!(matches!(r.apply_single(2, &shift_matrix(2)), Err(Error::QuditOutOfRange { .. })));
    }

    #[test]
    fn group_commutator_phase() {
        for d in 2..=7 {
            for s in 0..d {
                let mut r = Register::init(&[d], &[s]).unwrap();
                let x = shift_matrix(d);
                let z = clock_matrix(d);
                r.apply_single(0, &z).unwrap();
                r.apply_single(0, &x).unwrap();
                r.apply_single(0, &z.adjoint()).unwrap();
                r.apply_single(0, &x.adjoint()).unwrap();
                let want = CVector::basis(d, s).scale(omega(d).conj());
                assert!(r.state().max_diff(&want) < 1e-12);
            }
        }
    }

    #[test]
    fn middle_qudit_gate_acts_locally() {
        let mut r = Register::init(&[2, 3, 2], &[1, 0, 1]).unwrap();
        r.apply_single(1, &shift_matrix(3)).unwrap();
        let expected = Register::init(&[2, 3, 2], &[1, 1, 1]).unwrap();
        assert_eq!(r.state(), expected.state());
    }

    #[test]
    fn sum_requires_hybrid_encoding() {
        let mut r = Register::init(&[3, 3], &[1, 1]).unwrap();
        assert_eq!(
            r.apply_sum(0, 1).unwrap_err(),
            Error::Encoding { qudit: 1, expected: Encoding::Phase, found: Encoding::Number }
        );
        r.swap_encoding(0).unwrap();
        r.swap_encoding(1).unwrap();
        assert!(matches!(r.apply_sum(0, 1), Err(Error::Encoding { qudit: 0, .. })));
        assert_eq!(r.apply_sum(1, 1).unwrap_err(), Error::SameQudit(1));
        let mut mixed = Register::init(&[2, 3], &[0, 0]).unwrap();
        mixed.swap_encoding(1).unwrap();
        assert!(matches!(mixed.apply_sum(0, 1), Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn hybrid_sum_on_qutrits() {
        let mut r = Register::init(&[3, 3], &[1, 1]).unwrap();
        r.swap_encoding(1).unwrap();
        r.apply_sum(0, 1).unwrap();
        let p0 = r.measure_probabilities(0).unwrap();
        let p1 = r.measure_probabilities(1).unwrap();
        assert!((p0[1] - 1.0).abs() < 1e-10);
        assert!((p1[2] - 1.0).abs() < 1e-10);
    }

    #[test]
    fn sum_with_control_zero_and_order() {
        for d in 2..=5 {
            let mut r = Register::init(&[d, d], &[0, d - 1]).unwrap();
            r.swap_encoding(1).unwrap();
            let before = r.state().clone();
            r.apply_sum(0, 1).unwrap();
            assert!(r.state().max_diff(&before) < 1e-12);

            let mut r = Register::init(&[d, d], &[1, 0]).unwrap();
            r.swap_encoding(1).unwrap();
            let before = r.state().clone();
            for _ in 0..d {
                r.apply_sum(0, 1).unwrap();
            }
            assert!(r.state().max_diff(&before) < 1e-10);
        }
    }

    #[test]
    fn swap_encoding_round_trip() {
        let mut r = Register::init(&[4], &[0]).unwrap();
        r.swap_encoding(0).unwrap();
        assert_eq!(r.encoding(0).unwrap(), Encoding::Phase);
        let uniform = 0.5;
        for amp in r.state().as_slice() {
            assert!((amp - ONE * uniform).norm() < 1e-15);
        }
        r.swap_encoding(0).unwrap();
        assert_eq!(r.encoding(0).unwrap(), Encoding::Number);
        assert!(r.state().max_diff(&CVector::basis(4, 0)) < 1e-12);
    }

    #[test]
    fn fourier_gate_keeps_tag_and_spreads_number_readout() {
        let mut r = Register::init(&[5], &[2]).unwrap();
        r.apply_fourier(0, false).unwrap();
        assert_eq!(r.encoding(0).unwrap(), Encoding::Number);
        for p in r.measure_probabilities(0).unwrap() {
            assert!((p - 0.2).abs() < 1e-12);
        }
    }

    #[test]
    fn logical_gates_follow_encoding() {
        let mut r = Register::init(&[5], &[1]).unwrap();
        r.swap_encoding(0).unwrap();
        r.apply_x(0, 3).unwrap();
        let probs = r.measure_probabilities(0).unwrap();
        assert!((probs[4] - 1.0).abs() < 1e-10);
        r.apply_z(0, 2).unwrap();
        let probs = r.measure_probabilities(0).unwrap();
        assert!((probs[4] - 1.0).abs() < 1e-10);
    }

    #[test]
    fn dump_layout() {
        let r = Register::init(&[2], &[1]).unwrap();
        let json = serde_json::to_string(&r.dump()).unwrap();
        assert_eq!(
            json,
            r#"{"qudits":[{"dim":2,"encoding":"number"}],"state":[[0.0,0.0],[1.0,0.0]]}"#
        );
    }
}
