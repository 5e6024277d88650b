use num_complex::Complex64;
use proptest::prelude::*;

use qudit_pauli::circuit::parse;
use qudit_pauli::linalg::{eig_hermitian, exp_i_hermitian, tensor_product, CMatrix};
use qudit_pauli::simulator::Register;
use qudit_pauli::{PauliElement, RealizationKind};

fn matrix(rows: usize, cols: usize) -> impl Strategy<Value = CMatrix> {
    proptest::collection::vec((-1.0f64..1.0, -1.0f64..1.0), rows * cols)
        .prop_map(move |v| CMatrix::from_vec(rows, cols, v.into_iter().map(|(re, im)| Complex64::new(re, im)).collect()))
}

fn hermitian(max: usize) -> impl Strategy<Value = CMatrix> {
    (1..=max).prop_flat_map(|n| matrix(n, n)).prop_map(|a| (&a + &a.adjoint()).scale(Complex64::new(0.5, 0.0)))
}

fn pauli(d: usize) -> impl Strategy<Value = PauliElement> {
    (0..d, 0..d, 0..d).prop_map(move |(c, a, b)| PauliElement::new(d, c, a, b).unwrap())
}

fn pauli_pair() -> impl Strategy<Value = (PauliElement, PauliElement, PauliElement)> {
    (2usize..=12).prop_flat_map(|d| (pauli(d), pauli(d), pauli(d)))
}

#[derive(Clone, Debug)]
enum Gate {
    X(usize, usize),
    Z(usize, usize),
    F(usize, bool),
    Swap(usize),
}

fn gates(n: usize) -> impl Strategy<Value = Vec<Gate>> {
    let gate = prop_oneof![
        (0..n, 0usize..8).prop_map(|(q, k)| Gate::X(q, k)),
        (0..n, 0usize..8).prop_map(|(q, k)| Gate::Z(q, k)),
        (0..n, any::<bool>()).prop_map(|(q, inv)| Gate::F(q, inv)),
        (0..n).prop_map(Gate::Swap),
    ];
    proptest::collection::vec(gate, 0..12)
}

fn apply(reg: &mut Register, g: &Gate) {
    match *g {
        Gate::X(q, k) => reg.apply_x(q, k).unwrap(),
        Gate::Z(q, k) => reg.apply_z(q, k).unwrap(),
        Gate::F(q, inv) => reg.apply_fourier(q, inv).unwrap(),
        Gate::Swap(q) => reg.swap_encoding(q).unwrap(),
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn tensor_is_associative(a in matrix(2, 3), b in matrix(3, 2), c in matrix(2, 2)) {
        let left = tensor_product(&tensor_product(&a, &b), &c);
        let right = tensor_product(&a, &tensor_product(&b, &c));
        prop_assert!(left.max_diff(&right) < 1e-14);
    }

    #[test]
    fn tensor_mixed_product(a in matrix(2, 2), b in matrix(3, 3), c in matrix(2, 2), e in matrix(3, 3)) {
        let lhs = tensor_product(&a, &b).matmul(&tensor_product(&c, &e));
        let rhs = tensor_product(&a.matmul(&c), &b.matmul(&e));
        prop_assert!(lhs.max_diff(&rhs) < 1e-12);
    }

    #[test]
    fn exp_is_additive(h in hermitian(6), s in -3.0f64..3.0, t in -3.0f64..3.0) {
        let lhs = exp_i_hermitian(&h, s).unwrap().matmul(&exp_i_hermitian(&h, t).unwrap());
        let rhs = exp_i_hermitian(&h, s + t).unwrap();
        prop_assert!(lhs.max_diff(&rhs) < 1e-10);
        prop_assert!(rhs.unitarity_residual() < 1e-10);
    }

    #[test]
    fn eig_reconstructs(h in hermitian(24)) {
        let eig = eig_hermitian(&h).unwrap();
        prop_assert!(eig.reconstruct().max_diff(&h) < 1e-10);
        prop_assert!(eig.eigenvectors.unitarity_residual() < 1e-10);
        prop_assert!(eig.eigenvalues.windows(2).all(|w| w[0] <= w[1]));
    }

    #[test]
    fn commutation_is_antisymmetric((p, q, _) in pauli_pair()) {
        let d = p.dim();
        let k = p.commutation_phase(&q).unwrap();
        let back = q.commutation_phase(&p).unwrap();
        prop_assert_eq!((k + back) % d, 0);
        // p q = ω^k q p
        let pq = p.multiply(&q).unwrap();
        let qp = q.multiply(&p).unwrap();
        prop_assert_eq!(pq, PauliElement::new(d, qp.phase() + k, qp.shift(), qp.clock()).unwrap());
    }

    #[test]
    fn group_axioms((p, q, r) in pauli_pair()) {
        let d = p.dim();
        let left = p.multiply(&q).unwrap().multiply(&r).unwrap();
        let right = p.multiply(&q.multiply(&r).unwrap()).unwrap();
        prop_assert_eq!(left, right);
        prop_assert!(p.multiply(&p.inverse()).unwrap().is_identity());
        prop_assert!(p.pow(p.order()).is_identity());
        // (XZ)^d = ω^{d(d−1)/2}, which is −1 for even d, so orders divide 2d.
        prop_assert_eq!((2 * d) % p.order(), 0);
    }

    #[test]
    fn words_round_trip((p, _, _) in pauli_pair()) {
        let d = p.dim();
        prop_assert_eq!(PauliElement::parse(&p.to_string(), d).unwrap(), p);
    }

    #[test]
    fn small_homomorphism(kind in 0usize..4, (p, q, _) in (2usize..=6).prop_flat_map(|d| (pauli(d), pauli(d), pauli(d)))) {
        let r = RealizationKind::ALL[kind].build(p.dim()).unwrap();
        let lhs = p.multiply(&q).unwrap().to_matrix(&r).unwrap();
        let rhs = p.to_matrix(&r).unwrap().matmul(&q.to_matrix(&r).unwrap());
        prop_assert!(lhs.max_diff(&rhs) < 1e-10);
    }

    #[test]
    fn print_parse_is_a_fixed_point(dims in proptest::collection::vec(2usize..6, 1..4), seed in any::<u64>()) {
        let n = dims.len();
        let mut text = format!("dims {}\n", dims.iter().map(|d| d.to_string()).collect::<Vec<_>>().join(" "));
        let mut s = seed;
        for _ in 0..10 {
            s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            let q = (s >> 33) as usize % n;
            let k = (s >> 40) as usize % 9;
            let line = match (s >> 50) % 7 {
                0 => format!("prep {q} {}", k % dims[q]),
                1 => format!("x {q} ^{k}"),
                2 => format!("z {q} ^-{k}"),
                3 => format!("f {q}{}", if k.is_multiple_of(2) { " inv" } else { "" }),
                4 if n > 1 && dims[0] == dims[1] => "sum 0 1".to_string(),
                5 => format!("swap {q}   # comment"),
                _ => if k.is_multiple_of(2) { "measure all".into() } else { format!("measure {q}") },
            };
            text.push_str(&line);
            text.push('\n');
        }
        let once = parse(&text).unwrap();
        let printed = once.to_string();
        let twice = parse(&printed).unwrap();
        prop_assert_eq!(twice.to_string(), printed);
        prop_assert_eq!(once.ops().collect::<Vec<_>>(), twice.ops().collect::<Vec<_>>());
    }

    #[test]
    fn gates_preserve_norm(dims in proptest::collection::vec(2usize..5, 1..4), ops in gates(3)) {
        let labels = vec![0; dims.len()];
        let mut reg = Register::init(&dims, &labels).unwrap();
        for g in ops.iter().filter(|g| gate_qudit(g) < dims.len()) {
            apply(&mut reg, g);
        }
        prop_assert!((reg.state().norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn single_qudit_gates_are_local(labels in (0usize..3, 0usize..4, 0usize..2), ops in gates(1)) {
        let dims = [3, 4, 2];
        let mut reg = Register::init(&dims, &[labels.0, labels.1, labels.2]).unwrap();
        reg.apply_fourier(0, false).unwrap();
        reg.swap_encoding(2).unwrap();
        let before: Vec<Vec<f64>> = [0, 2].iter().map(|&q| reg.measure_probabilities(q).unwrap()).collect();
        for g in &ops {
            let shifted = match *g {
                Gate::X(_, k) => Gate::X(1, k),
                Gate::Z(_, k) => Gate::Z(1, k),
                Gate::F(_, inv) => Gate::F(1, inv),
                Gate::Swap(_) => Gate::Swap(1),
            };
            apply(&mut reg, &shifted);
        }
        let after: Vec<Vec<f64>> = [0, 2].iter().map(|&q| reg.measure_probabilities(q).unwrap()).collect();
        for (b, a) in before.iter().zip(&after) {
            for (x, y) in b.iter().zip(a) {
                prop_assert!((x - y).abs() < 1e-12);
            }
        }
    }
}

fn gate_qudit(g: &Gate) -> usize {
    match *g {
        Gate::X(q, _) | Gate::Z(q, _) | Gate::F(q, _) | Gate::Swap(q) => q,
    }
}

#[test]
fn eig_reconstructs_at_dimension_64() {
    let n = 64;
    let h = CMatrix::from_fn(n, n, |r, c| {
        let (lo, hi) = (r.min(c) as f64, r.max(c) as f64);
        let im = if r < c { 0.3 } else if r > c { -0.3 } else { 0.0 };
        Complex64::new((lo * 0.7 + hi * 1.3).sin(), im * (lo + hi).cos())
    });
    assert!(h.is_hermitian());
    let eig = eig_hermitian(&h).unwrap();
    assert!(eig.reconstruct().max_diff(&h) < 1e-10);
}
