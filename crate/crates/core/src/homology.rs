//! First homology presented by a square relation matrix, in canonical Smith
//! normal form coordinates.
//!
//! For a presentation `<mu_1..mu_k | Q mu = 0>` the group is the cokernel of
//! `Q`. With `U Q V = S` the map `x -> U x` identifies the cokernel with the
//! direct sum of `Z/s_i` (and one `Z` per zero diagonal entry), which gives
//! every class a canonical coordinate tuple. Elements are plain coordinate
//! data; comparing elements is only meaningful within the same group.

use crate::linalg::{smith_normal_form, IntMatrix, LinalgError};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use std::fmt;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct H1Group {
    meridians: usize,
    invariant_factors: Vec<BigInt>,
    free_rank: usize,
    to_canonical: IntMatrix,
    torsion_rows: Vec<usize>,
    free_rows: Vec<usize>,
}

/// A class in canonical coordinates: one residue per invariant factor
/// (reduced into `[0, factor)`), one integer per free summand.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct H1Element {
    pub torsion: Vec<BigInt>,
    pub free: Vec<BigInt>,
}

impl H1Element {
    pub fn is_zero(&self) -> bool {
        self.torsion.iter().all(Zero::is_zero) && self.free.iter().all(Zero::is_zero)
    }
}

impl H1Group {
    /// Cokernel of a square relation matrix.
    pub fn from_relations(q: &IntMatrix) -> H1Group {
        assert!(q.is_square(), "relation matrix must be square");
        let n = q.rows();
        let snf = smith_normal_form(q);
        let diag = snf.diagonal();
        let mut invariant_factors = Vec::new();
        let mut torsion_rows = Vec::new();
        let mut free_rows = Vec::new();
        for (i, d) in diag.iter().enumerate() {
            if d.is_zero() {
                free_rows.push(i);
            } else if !d.is_one() {
                invariant_factors.push(d.clone());
                torsion_rows.push(i);
            }
        }
        let free_rank = free_rows.len();
        H1Group {
            meridians: n,
            invariant_factors,
            free_rank,
            to_canonical: snf.u,
            torsion_rows,
            free_rows,
        }
    }

    pub fn trivial() -> H1Group {
        H1Group::from_relations(&IntMatrix::identity(0))
    }

    pub fn meridians(&self) -> usize {
        self.meridians
    }

    pub fn invariant_factors(&self) -> &[BigInt] {
        &self.invariant_factors
    }

    pub fn free_rank(&self) -> usize {
        self.free_rank
    }

    pub fn is_trivial(&self) -> bool {
        self.invariant_factors.is_empty() && self.free_rank == 0
    }

    /// Group order; `None` when the free rank is positive.
    pub fn order(&self) -> Option<BigInt> {
        if self.free_rank > 0 {
            return None;
        }
        Some(self.invariant_factors.iter().product())
    }

    /// Image of a meridian-coordinate vector in canonical coordinates.
    pub fn class_big(&self, meridian: &[BigInt]) -> Result<H1Element, LinalgError> {
        if meridian.len() != self.meridians {
            return Err(LinalgError::DimensionMismatch {
                expected: self.meridians,
                got: meridian.len(),
            });
        }
        let c = self.to_canonical.mul_vec(meridian);
        let torsion = self
            .torsion_rows
            .iter()
            .zip(&self.invariant_factors)
            .map(|(&row, factor)| c[row].mod_floor(factor))
            .collect();
        let free = self.free_rows.iter().map(|&row| c[row].clone()).collect();
        Ok(H1Element { torsion, free })
    }

    pub fn class(&self, meridian: &[i64]) -> Result<H1Element, LinalgError> {
        let big: Vec<BigInt> = meridian.iter().map(|&x| BigInt::from(x)).collect();
        self.class_big(&big)
    }

    pub fn zero(&self) -> H1Element {
        H1Element {
            torsion: vec![BigInt::zero(); self.invariant_factors.len()],
            free: vec![BigInt::zero(); self.free_rank],
        }
    }

    pub fn add(&self, a: &H1Element, b: &H1Element) -> H1Element {
        let torsion = a
            .torsion
            .iter()
            .zip(&b.torsion)
            .zip(&self.invariant_factors)
            .map(|((x, y), f)| (x + y).mod_floor(f))
            .collect();
        let free = a.free.iter().zip(&b.free).map(|(x, y)| x + y).collect();
        H1Element { torsion, free }
    }

    pub fn neg(&self, a: &H1Element) -> H1Element {
        let torsion = a
            .torsion
            .iter()
            .zip(&self.invariant_factors)
            .map(|(x, f)| (-x).mod_floor(f))
            .collect();
        let free = a.free.iter().map(|x| -x).collect();
        H1Element { torsion, free }
    }

    pub fn sub(&self, a: &H1Element, b: &H1Element) -> H1Element {
        self.add(a, &self.neg(b))
    }

    pub fn double(&self, a: &H1Element) -> H1Element {
        self.add(a, a)
    }

    /// Order of a class: lcm of `factor / gcd(coord, factor)` over the
    /// torsion coordinates; `None` (infinite) if a free coordinate is nonzero.
    pub fn element_order(&self, a: &H1Element) -> Option<BigInt> {
        if a.free.iter().any(|x| !x.is_zero()) {
            return None;
        }
        let mut order = BigInt::one();
        for (coord, factor) in a.torsion.iter().zip(&self.invariant_factors) {
            let part = factor / coord.gcd(factor);
            order = order.lcm(&part);
        }
        Some(order)
    }
}

impl fmt::Display for H1Group {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_trivial() {
            return write!(f, "0");
        }
        let mut parts: Vec<String> = self
            .invariant_factors
            .iter()
            .map(|d| format!("Z/{d}"))
            .collect();
        match self.free_rank {
            0 => {}
            1 => parts.push("Z".to_string()),
            r => parts.push(format!("Z^{r}")),
        }
        write!(f, "{}", parts.join(" + "))
    }
}

impl fmt::Display for H1Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.torsion.is_empty() && self.free.is_empty() {
            return write!(f, "0");
        }
        let coords: Vec<String> = self
            .torsion
            .iter()
            .chain(&self.free)
            .map(BigInt::to_string)
            .collect();
        write!(f, "({})", coords.join(", "))
    }
}
