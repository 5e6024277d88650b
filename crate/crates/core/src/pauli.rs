//! Exact arithmetic in the generalized Pauli group.
//!
//! An element is `ω^c X^a Z^b` with `ω = e^{2πi/d}` and every exponent taken
//! mod `d`. Products are reduced to this normal form (X to the left of Z)
//! with `Z^b X^a = ω^{ab} X^a Z^b`, which follows from `ZX = ωXZ`.

use std::collections::{HashSet, VecDeque};
use std::fmt;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{cis, CMatrix};
use crate::representations::Realization;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct PauliElement {
    d: usize,
    c: usize,
    a: usize,
    b: usize,
}

impl PauliElement {
    /// Builds `ω^c X^a Z^b`, reducing the exponents mod `d`.
    pub fn new(d: usize, c: usize, a: usize, b: usize) -> Result<Self> {
        if d < 2 {
            return Err(Error::InvalidDimension(d));
        }
        Ok(Self { d, c: c % d, a: a % d, b: b % d })
    }

    pub fn identity(d: usize) -> Result<Self> {
        Self::new(d, 0, 0, 0)
    }

    /// The shift generator `X`.
    pub fn x(d: usize) -> Result<Self> {
        Self::new(d, 0, 1, 0)
    }

    /// The clock generator `Z`.
    pub fn z(d: usize) -> Result<Self> {
        Self::new(d, 0, 0, 1)
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    /// Phase exponent `c`.
    pub fn phase(&self) -> usize {
        self.c
    }

    /// Shift exponent `a`.
    pub fn shift(&self) -> usize {
        self.a
    }

    /// Clock exponent `b`.
    pub fn clock(&self) -> usize {
        self.b
    }

    /// `(c, a, b)`.
    pub fn exponents(&self) -> (usize, usize, usize) {
        (self.c, self.a, self.b)
    }

    pub fn is_identity(&self) -> bool {
        self.c == 0 && self.a == 0 && self.b == 0
    }

    /// Same element with the phase dropped.
    pub fn without_phase(&self) -> Self {
        Self { c: 0, ..*self }
    }

    fn check_dim(&self, other: &Self) -> Result<()> {
        if self.d != other.d {
            return Err(Error::DimensionMismatch { left: self.d, right: other.d });
        }
        Ok(())
    }

    pub fn multiply(&self, other: &Self) -> Result<Self> {
        self.check_dim(other)?;
        let d = self.d;
        Ok(Self {
            d,
            c: (self.c + other.c + self.b * other.a) % d,
            a: (self.a + other.a) % d,
            b: (self.b + other.b) % d,
        })
    }

    pub fn inverse(&self) -> Self {
        let d = self.d;
        Self {
            d,
            c: (d - self.c + self.a * self.b % d) % d,
            a: (d - self.a) % d,
            b: (d - self.b) % d,
        }
    }

    pub fn pow(&self, k: usize) -> Self {
        let mut acc = Self { c: 0, a: 0, b: 0, ..*self };
        for _ in 0..k {
            acc = acc.multiply(self).expect("same dimension");
        }
        acc
    }

    /// Smallest `k ≥ 1` with `p^k = 1`. Always divides `d²`.
    pub fn order(&self) -> usize {
        let mut acc = *self;
        let mut k = 1;
        while !acc.is_identity() {
            acc = acc.multiply(self).expect("same dimension");
            k += 1;
        }
        k
    }

    /// The exponent `k` with `p·q = ω^k q·p`.
    pub fn commutation_phase(&self, other: &Self) -> Result<usize> {
        self.check_dim(other)?;
        let d = self.d;
        Ok((self.b * other.a % d + d - self.a * other.b % d) % d)
    }

    /// `ω^c X^a Z^b` in the realization's ambient basis.
    pub fn to_matrix(&self, realization: &Realization) -> Result<CMatrix> {
        if realization.dim() != self.d {
            return Err(Error::DimensionMismatch { left: self.d, right: realization.dim() });
        }
        let x = realization.x().pow(self.a as u64);
        let z = realization.z().pow(self.b as u64);
        Ok(x.matmul(&z).scale(omega(self.d).powu(self.c as u32)))
    }

    /// All `d³` elements, phase-major.
    pub fn all(d: usize) -> Result<impl Iterator<Item = PauliElement>> {
        Self::identity(d)?;
        Ok((0..d).flat_map(move |c| {
            (0..d).flat_map(move |a| (0..d).map(move |b| PauliElement { d, c, a, b }))
        }))
    }

    /// The `d²` phase-free elements `X^a Z^b`, ordered by `(a, b)`.
    pub fn phase_free(d: usize) -> Result<impl Iterator<Item = PauliElement>> {
        Self::identity(d)?;
        Ok((0..d).flat_map(move |a| (0..d).map(move |b| PauliElement { d, c: 0, a, b })))
    }

    /// Parses a word such as `w X^2 Z`, `X`, `w^3 Z^2` or `I`.
    ///
    /// Factors must appear in the order `w`, `X`, `Z`, each at most once;
    /// a missing exponent means 1. Exponents are reduced mod `d`.
    pub fn parse(word: &str, d: usize) -> Result<Self> {
        let fail = |reason: &str| Error::PauliWord { word: word.to_string(), reason: reason.to_string() };
        if d < 2 {
            return Err(Error::InvalidDimension(d));
        }
        let tokens: Vec<&str> = word.split_whitespace().collect();
        if tokens.is_empty() {
            return Err(fail("empty word"));
        }
        if tokens == ["I"] {
            return Self::identity(d);
        }

        let mut exps = [0usize; 3];
        let mut next_slot = 0;
        for tok in tokens {
            let (sym, exp) = match tok.split_once('^') {
                Some((s, e)) => {
                    let e: usize = e.parse().map_err(|_| fail(&format!("bad exponent in {tok:?}")))?;
                    (s, e)
                }
                None => (tok, 1),
            };
            let slot = match sym {
                "w" => 0,
                "X" => 1,
                "Z" => 2,
                _ => return Err(fail(&format!("unknown factor {sym:?}"))),
            };
            if slot < next_slot {
                return Err(fail("factors must appear once each, in the order w X Z"));
            }
            exps[slot] = exp % d;
            next_slot = slot + 1;
        }
        Self::new(d, exps[0], exps[1], exps[2])
    }
}

impl fmt::Display for PauliElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_identity() {
            return write!(f, "I");
        }
        let mut parts = Vec::with_capacity(3);
        for (sym, e) in [("w", self.c), ("X", self.a), ("Z", self.b)] {
            match e {
                0 => {}
                1 => parts.push(sym.to_string()),
                _ => parts.push(format!("{sym}^{e}")),
            }
        }
        write!(f, "{}", parts.join(" "))
    }
}

/// `ω = e^{2πi/d}`.
pub fn omega(d: usize) -> Complex64 {
    cis(2.0 * std::f64::consts::PI / d as f64)
}

/// Number of distinct elements reachable from `{X, Z}` under multiplication.
///
/// Breadth-first closure, so it does not rely on the closed-form inverse or
/// on the d³ enumeration.
pub fn generated_group_size(d: usize) -> Result<usize> {
    let gens = [PauliElement::x(d)?, PauliElement::z(d)?];
    let start = PauliElement::identity(d)?;
    let mut seen = HashSet::from([start]);
    let mut queue = VecDeque::from([start]);
    while let Some(p) = queue.pop_front() {
        for g in &gens {
            let next = p.multiply(g)?;
            if seen.insert(next) {
                queue.push_back(next);
            }
        }
    }
    Ok(seen.len())
}

/// One cell of the multiplication table of phase-free representatives.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TableEntry {
    pub row: PauliElement,
    pub col: PauliElement,
    pub product: PauliElement,
}

/// `row · col` for every pair of phase-free elements.
pub fn multiplication_table(d: usize) -> Result<Vec<Vec<TableEntry>>> {
    let reps: Vec<_> = PauliElement::phase_free(d)?.collect();
    reps.iter()
        .map(|row| {
            reps.iter()
                .map(|col| Ok(TableEntry { row: *row, col: *col, product: row.multiply(col)? }))
                .collect()
        })
        .collect()
}
