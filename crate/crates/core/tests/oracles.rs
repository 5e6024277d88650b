use std::f64::consts::PI;

use num_complex::Complex64;

use qudit_pauli::gates::sum_gate_matrix;
use qudit_pauli::linalg::{tensor_product, CMatrix, CVector};
use qudit_pauli::representations::{build_spin_irrep, intertwiner};
use qudit_pauli::simulator::Register;
use qudit_pauli::{Encoding, RealizationKind};

fn dft(d: usize) -> CMatrix {
    CMatrix::from_fn(d, d, |t, s| Complex64::from_polar(1.0 / (d as f64).sqrt(), 2.0 * PI * ((t * s) % d) as f64 / d as f64))
}

fn shift(d: usize) -> CMatrix {
    CMatrix::from_fn(d, d, |r, c| if r == (c + 1) % d { Complex64::new(1.0, 0.0) } else { Complex64::new(0.0, 0.0) })
}

fn clock(d: usize) -> CMatrix {
    CMatrix::from_fn(d, d, |r, c| if r == c { Complex64::from_polar(1.0, 2.0 * PI * r as f64 / d as f64) } else { Complex64::new(0.0, 0.0) })
}

/// Hybrid SUM on a register vs. the dense permutation sandwiched by the
/// target's basis change, starting from a non-trivial superposition.
#[test]
fn hybrid_sum_matches_dense_oracle() {
    for d in 2..=9 {
        let mut reg = Register::init(&[d, d], &[1 % d, d - 1]).unwrap();
        reg.apply_fourier(0, false).unwrap();
        reg.apply_z(0, 1).unwrap();
        reg.apply_x(1, 2).unwrap();
        reg.swap_encoding(1).unwrap();
        let before = reg.state().clone();
        reg.apply_sum(0, 1).unwrap();

        let f = dft(d);
        let basis_change = tensor_product(&CMatrix::identity(d), &f);
        let oracle = basis_change.matmul(&sum_gate_matrix(d).unwrap()).matmul(&basis_change.adjoint());
        let expected = oracle.apply(&before);
        assert!(reg.state().max_diff(&expected) < 1e-10, "d={d}");
        assert!((reg.state().norm() - 1.0).abs() < 1e-12);
    }
}

#[test]
fn hybrid_sum_on_labels() {
    for d in 2..=9 {
        for c in 0..d {
            for t in [0, d / 2, d - 1] {
                let mut reg = Register::init(&[d, d], &[c, t]).unwrap();
                reg.swap_encoding(1).unwrap();
                reg.apply_sum(0, 1).unwrap();
                let p = reg.measure_probabilities(1).unwrap();
                assert!((p[(c + t) % d] - 1.0).abs() < 1e-10, "d={d} c={c} t={t}");
                assert_eq!(reg.encoding(1).unwrap(), Encoding::Phase);
            }
        }
    }
}

#[test]
fn sum_across_three_qudits() {
    let d = 3;
    let mut reg = Register::init(&[d, 2, d], &[2, 1, 2]).unwrap();
    reg.swap_encoding(0).unwrap();
    assert!(reg.apply_sum(2, 0).is_ok());
    let p = reg.measure_probabilities(0).unwrap();
    assert!((p[1] - 1.0).abs() < 1e-10);
    assert!(reg.apply_sum(1, 0).is_err());
}

#[test]
fn register_gates_match_kronecker_oracle() {
    let dims = [3, 4];
    let mut reg = Register::init(&dims, &[2, 1]).unwrap();
    reg.apply_x(1, 3).unwrap();
    reg.apply_z(0, 1).unwrap();
    reg.apply_fourier(1, false).unwrap();
    let start = CVector::basis(12, 2 * 4 + 1);
    let op = tensor_product(&clock(3), &dft(4).matmul(&shift(4).pow(3)));
    assert!(reg.state().max_diff(&op.apply(&start)) < 1e-12);
}

#[test]
fn spin_commutators() {
    for d in 2..=10 {
        let s = build_spin_irrep(d).unwrap();
        let jy = s.jy();
        let i = Complex64::new(0.0, 1.0);
        assert!(s.jx.commutator(&jy).max_diff(&s.jz.scale(i)) < 1e-12, "d={d}");
        let j = (d as f64 - 1.0) / 2.0;
        let casimir = &(&s.jx.matmul(&s.jx) + &jy.matmul(&jy)) + &s.jz.matmul(&s.jz);
        assert!(casimir.max_diff(&CMatrix::identity(d).scale(Complex64::new(j * (j + 1.0), 0.0))) < 1e-12);
    }
}

#[test]
fn realizations_are_unitarily_equivalent() {
    for d in [2, 3, 6, 11] {
        let all: Vec<_> = RealizationKind::ALL.iter().map(|k| k.build(d).unwrap()).collect();
        for a in &all {
            for b in &all {
                let w = intertwiner(a, b).unwrap();
                assert!(w.unitarity_residual() < 1e-10);
                assert!(w.adjoint().matmul(a.x()).matmul(&w).max_diff(b.x()) < 1e-10, "{} -> {}", a.kind(), b.kind());
                assert!(w.adjoint().matmul(a.z()).matmul(&w).max_diff(b.z()) < 1e-10);
            }
        }
    }
}
