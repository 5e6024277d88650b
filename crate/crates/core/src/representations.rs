//! Concrete matrix realizations of the clock and shift generators.
//!
//! Four realizations share one interface:
//!
//! | kind          | ambient basis             | computational basis `|s⟩`     | `X`                      | `Z`                     |
//! |---------------|---------------------------|-------------------------------|--------------------------|-------------------------|
//! | spin-number   | `J_z` weights `m = j…−j`  | `|j, j−s)_z`                  | cyclic weight ladder     | `exp(2πi(j − J_z)/d)`   |
//! | osc-number    | Fock `|0⟩…|d−1⟩`          | `|n = s⟩`                     | cyclic Fock ladder       | `exp(2πi N/d)`          |
//! | spin-phase    | `J_z` weights             | SU(2) phase states            | `e^{iπ/d}·exp(2πi J_x/d)` (even d) | `Σ ω^s |s⟩⟨s|` |
//! | osc-phase     | Fock                      | `F|n = s⟩`                    | `exp(2πi N/d)`           | `Σ ω^s |s⟩⟨s|`          |
//!
//! Each realization also carries its phase operator `θ` (spectrum `0…d−1`)
//! and the Hermitian generator of the other Pauli generator. For the number
//! kinds `X = exp(2πiθ/d)` and `Z = exp(2πi·G/d)`; for the phase kinds the
//! roles swap.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{cis, eig_hermitian, exp_i_hermitian, CMatrix, CVector, ONE, ZERO};

/// Which basis a qudit's computational labels refer to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Encoding {
    Number,
    Phase,
}

impl Encoding {
    pub fn flipped(self) -> Self {
        match self {
            Encoding::Number => Encoding::Phase,
            Encoding::Phase => Encoding::Number,
        }
    }
}

impl fmt::Display for Encoding {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Encoding::Number => "number",
            Encoding::Phase => "phase",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RealizationKind {
    SpinNumber,
    OscNumber,
    SpinPhase,
    OscPhase,
}

impl RealizationKind {
    pub const ALL: [RealizationKind; 4] = [
        RealizationKind::SpinNumber,
        RealizationKind::OscNumber,
        RealizationKind::SpinPhase,
        RealizationKind::OscPhase,
    ];

    pub fn encoding(self) -> Encoding {
        match self {
            RealizationKind::SpinNumber | RealizationKind::OscNumber => Encoding::Number,
            RealizationKind::SpinPhase | RealizationKind::OscPhase => Encoding::Phase,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            RealizationKind::SpinNumber => "spin-number",
            RealizationKind::OscNumber => "osc-number",
            RealizationKind::SpinPhase => "spin-phase",
            RealizationKind::OscPhase => "osc-phase",
        }
    }

    pub fn build(self, d: usize) -> Result<Realization> {
        match self {
            RealizationKind::SpinNumber => build_spin_number(d),
            RealizationKind::OscNumber => build_osc_number(d),
            RealizationKind::SpinPhase => build_spin_phase(d),
            RealizationKind::OscPhase => build_osc_phase(d),
        }
    }
}

impl fmt::Display for RealizationKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for RealizationKind {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        RealizationKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| format!("unknown realization kind {s:?}"))
    }
}

/// The operators a realization carries.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Operator {
    X,
    Z,
    Theta,
    Generator,
}

impl Operator {
    pub const ALL: [Operator; 4] = [Operator::X, Operator::Z, Operator::Theta, Operator::Generator];

    pub fn name(self) -> &'static str {
        match self {
            Operator::X => "x",
            Operator::Z => "z",
            Operator::Theta => "theta",
            Operator::Generator => "generator",
        }
    }
}

impl FromStr for Operator {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        Operator::ALL
            .into_iter()
            .find(|o| o.name() == s)
            .ok_or_else(|| format!("unknown operator {s:?}"))
    }
}

/// Angular momentum matrices of the spin-`j` irrep, `j = (d − 1)/2`, in the
/// `J_z` weight basis ordered `m = j, j−1, …, −j`.
#[derive(Clone, Debug)]
pub struct SpinIrrep {
    d: usize,
    pub jz: CMatrix,
    pub jplus: CMatrix,
    pub jminus: CMatrix,
    pub jx: CMatrix,
}

impl SpinIrrep {
    pub fn dim(&self) -> usize {
        self.d
    }

    /// `2j = d − 1`.
    pub fn twice_j(&self) -> i64 {
        self.d as i64 - 1
    }

    pub fn j(&self) -> f64 {
        self.twice_j() as f64 / 2.0
    }

    /// `2m` for the basis vector at `index`.
    pub fn twice_m(&self, index: usize) -> i64 {
        self.twice_j() - 2 * index as i64
    }

    /// Index of the weight `2m` (taken cyclically mod `d`).
    pub fn index_of(&self, twice_m: i64) -> usize {
        let steps = (self.twice_j() - twice_m) / 2;
        steps.rem_euclid(self.d as i64) as usize
    }

    /// `J_y = (J₊ − J₋)/2i`.
    pub fn jy(&self) -> CMatrix {
        (&self.jplus - &self.jminus).scale(Complex64::new(0.0, -0.5))
    }
}

pub fn build_spin_irrep(d: usize) -> Result<SpinIrrep> {
    if d < 2 {
        return Err(Error::InvalidDimension(d));
    }
    let tj = d as i64 - 1;
    let twice_m = |i: usize| tj - 2 * i as i64;

    let jz = CMatrix::from_real_diagonal(&(0..d).map(|i| twice_m(i) as f64 / 2.0).collect::<Vec<_>>());

    // J₊|j,m⟩ = √(j(j+1) − m(m+1)) |j,m+1⟩; weight m sits at index i, m+1 at i−1.
    let mut jplus = CMatrix::zeros(d, d);
    for i in 1..d {
        let tm = twice_m(i);
        let coeff = ((tj * (tj + 2) - tm * (tm + 2)) as f64 / 4.0).sqrt();
        jplus[(i - 1, i)] = Complex64::new(coeff, 0.0);
    }
    let jminus = jplus.adjoint();
    let jx = (&jplus + &jminus).scale(Complex64::new(0.5, 0.0));

    Ok(SpinIrrep { d, jz, jplus, jminus, jx })
}

/// Discrete Fourier transform `U_{t,s} = ω^{ts}/√d`, satisfying `U†ZU = X`.
pub fn fourier_matrix(d: usize) -> Result<CMatrix> {
    if d < 2 {
        return Err(Error::InvalidDimension(d));
    }
    let norm = 1.0 / (d as f64).sqrt();
    Ok(CMatrix::from_fn(d, d, |t, s| cis(2.0 * PI * ((t * s) % d) as f64 / d as f64) * norm))
}

/// `N = diag(0, 1, …, d−1)`.
pub fn number_operator(d: usize) -> CMatrix {
    CMatrix::from_real_diagonal(&(0..d).map(|n| n as f64).collect::<Vec<_>>())
}

/// Cyclic shift `Σ_s |s+1⟩⟨s|` on the index basis.
pub fn shift_matrix(d: usize) -> CMatrix {
    CMatrix::from_fn(d, d, |r, c| if r == (c + 1) % d { ONE } else { ZERO })
}

/// `diag(ω^0, …, ω^{d−1})`.
pub fn clock_matrix(d: usize) -> CMatrix {
    CMatrix::from_diagonal(&clock_phases(d))
}

fn clock_phases(d: usize) -> Vec<Complex64> {
    (0..d).map(|s| cis(2.0 * PI * s as f64 / d as f64)).collect()
}

/// `B · diag(w) · B†` for a basis matrix `B`.
fn spectral(basis: &CMatrix, weights: &[Complex64]) -> CMatrix {
    basis.matmul(&CMatrix::from_diagonal(weights)).matmul(&basis.adjoint())
}

fn index_weights(d: usize) -> Vec<Complex64> {
    (0..d).map(|s| Complex64::new(s as f64, 0.0)).collect()
}

/// SU(2) phase states in the `J_z` weight basis.
///
/// `|s⟩ = d^{-1/2} Σ_m e^{2πiμs/d} |j,m)_x` with `μ = m` for odd `d` and
/// `μ = m + ½` for even `d`. The `J_x` eigenvectors use the eigensolver's
/// phase convention (first significant component real positive).
pub fn build_phase_states(d: usize) -> Result<Vec<CVector>> {
    let irrep = build_spin_irrep(d)?;
    let eig = eig_hermitian(&irrep.jx)?;
    let tj = irrep.twice_j();
    let offset = if d.is_multiple_of(2) { 1 } else { 0 };
    // Ascending eigenvalues: column k is m = −j + k, so 2μ = −2j + 2k + offset.
    let mu: Vec<i64> = (0..d).map(|k| (-tj + 2 * k as i64 + offset) / 2).collect();
    let norm = 1.0 / (d as f64).sqrt();

    Ok((0..d)
        .map(|s| {
            let mut v = CVector::zeros(d);
            for (k, &mu_k) in mu.iter().enumerate() {
                let phase = cis(2.0 * PI * (mu_k * s as i64).rem_euclid(d as i64) as f64 / d as f64) * norm;
                for r in 0..d {
                    v[r] += phase * eig.eigenvectors[(r, k)];
                }
            }
            v
        })
        .collect())
}

/// A concrete matrix model of `(X, Z)` together with its phase operator.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Realization {
    d: usize,
    kind: RealizationKind,
    comp_basis: Vec<CVector>,
    x: CMatrix,
    z: CMatrix,
    theta: CMatrix,
    generator: CMatrix,
    /// Scalar in front of `exp(2πi·generator/d)`; only the even-d spin-phase
    /// realization has a non-trivial one.
    generator_phase: Complex64,
}

impl Realization {
    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn kind(&self) -> RealizationKind {
        self.kind
    }

    pub fn comp_basis(&self) -> &[CVector] {
        &self.comp_basis
    }

    /// Columns are the computational basis vectors.
    pub fn basis_matrix(&self) -> CMatrix {
        CMatrix::from_columns(&self.comp_basis)
    }

    pub fn x(&self) -> &CMatrix {
        &self.x
    }

    pub fn z(&self) -> &CMatrix {
        &self.z
    }

    pub fn theta(&self) -> &CMatrix {
        &self.theta
    }

    pub fn generator(&self) -> &CMatrix {
        &self.generator
    }

    pub fn generator_phase(&self) -> Complex64 {
        self.generator_phase
    }

    pub fn operator(&self, op: Operator) -> &CMatrix {
        match op {
            Operator::X => &self.x,
            Operator::Z => &self.z,
            Operator::Theta => &self.theta,
            Operator::Generator => &self.generator,
        }
    }

    /// The Pauli generator `exp(2πiθ/d)` should reproduce.
    pub fn theta_target(&self) -> Operator {
        match self.kind.encoding() {
            Encoding::Number => Operator::X,
            Encoding::Phase => Operator::Z,
        }
    }

    /// The Pauli generator `generator_phase · exp(2πi·generator/d)` should reproduce.
    pub fn generator_target(&self) -> Operator {
        match self.kind.encoding() {
            Encoding::Number => Operator::Z,
            Encoding::Phase => Operator::X,
        }
    }

    /// Copy with `delta` added to one operator entry. Used to check that
    /// verification catches corrupted operators.
    pub fn perturbed(&self, op: Operator, row: usize, col: usize, delta: Complex64) -> Realization {
        let mut out = self.clone();
        let m = match op {
            Operator::X => &mut out.x,
            Operator::Z => &mut out.z,
            Operator::Theta => &mut out.theta,
            Operator::Generator => &mut out.generator,
        };
        m[(row, col)] += delta;
        out
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("realization serializes")
    }
}

/// `W` with `W†·X₁·W = X₂` and `W†·Z₁·W = Z₂`: maps `|s⟩` of `to` onto `|s⟩`
/// of `from`, i.e. `W = B_from · B_to†`.
pub fn intertwiner(from: &Realization, to: &Realization) -> Result<CMatrix> {
    if from.dim() != to.dim() {
        return Err(Error::DimensionMismatch { left: from.dim(), right: to.dim() });
    }
    Ok(from.basis_matrix().matmul(&to.basis_matrix().adjoint()))
}

fn identity_basis(d: usize) -> Vec<CVector> {
    (0..d).map(|s| CVector::basis(d, s)).collect()
}

/// Number-type phase operator `θ_z = F†·N·F`, so that `exp(2πiθ_z/d) = F†ZF = X`.
fn number_phase_operator(d: usize) -> Result<CMatrix> {
    let f = fourier_matrix(d)?;
    Ok(spectral(&f.adjoint(), &index_weights(d)))
}

pub fn build_spin_number(d: usize) -> Result<Realization> {
    let irrep = build_spin_irrep(d)?;
    let tj = irrep.twice_j();

    // X = Σ_m |j,m)(j,m+1| with |j,j+1) ≡ |j,−j).
    let mut x = CMatrix::zeros(d, d);
    for i in 0..d {
        let tm = irrep.twice_m(i);
        x[(i, irrep.index_of(tm + 2))] = ONE;
    }

    // j·1 − J_z has integer diagonal j − m = s.
    let generator = CMatrix::from_real_diagonal(
        &(0..d).map(|i| ((tj - irrep.twice_m(i)) / 2) as f64).collect::<Vec<_>>(),
    );
    let z = CMatrix::from_diagonal(
        &(0..d)
            .map(|i| {
                let s = (tj - irrep.twice_m(i)) / 2;
                cis(2.0 * PI * s as f64 / d as f64)
            })
            .collect::<Vec<_>>(),
    );

    Ok(Realization {
        d,
        kind: RealizationKind::SpinNumber,
        comp_basis: identity_basis(d),
        x,
        z,
        theta: number_phase_operator(d)?,
        generator,
        generator_phase: ONE,
    })
}

pub fn build_osc_number(d: usize) -> Result<Realization> {
    if d < 2 {
        return Err(Error::InvalidDimension(d));
    }
    Ok(Realization {
        d,
        kind: RealizationKind::OscNumber,
        comp_basis: identity_basis(d),
        x: shift_matrix(d),
        z: clock_matrix(d),
        theta: number_phase_operator(d)?,
        generator: number_operator(d),
        generator_phase: ONE,
    })
}

/// Prefactor multiplying `exp(2πiJ_x/d)`: `1` for odd `d`, `e^{iπ/d}` for even `d`.
pub fn spin_phase_prefactor(d: usize) -> Complex64 {
    if d.is_multiple_of(2) {
        cis(PI / d as f64)
    } else {
        ONE
    }
}

pub fn build_spin_phase(d: usize) -> Result<Realization> {
    let irrep = build_spin_irrep(d)?;
    let comp_basis = build_phase_states(d)?;
    let basis = CMatrix::from_columns(&comp_basis);
    let prefactor = spin_phase_prefactor(d);
    let x = exp_i_hermitian(&irrep.jx, 2.0 * PI / d as f64)?.scale(prefactor);

    Ok(Realization {
        d,
        kind: RealizationKind::SpinPhase,
        z: spectral(&basis, &clock_phases(d)),
        theta: spectral(&basis, &index_weights(d)),
        comp_basis,
        x,
        generator: irrep.jx,
        generator_phase: prefactor,
    })
}

pub fn build_osc_phase(d: usize) -> Result<Realization> {
    let f = fourier_matrix(d)?;
    Ok(Realization {
        d,
        kind: RealizationKind::OscPhase,
        comp_basis: f.columns(),
        x: clock_matrix(d),
        z: spectral(&f, &clock_phases(d)),
        theta: spectral(&f, &index_weights(d)),
        generator: number_operator(d),
        generator_phase: ONE,
    })
}
