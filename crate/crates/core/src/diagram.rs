//! Contact (+1)/(-1)-surgery diagrams on oriented Legendrian links in the
//! standard tight 3-sphere.
//!
//! A diagram is abstract framed linking data: each component carries its
//! Thurston-Bennequin invariant, rotation number and a contact surgery
//! coefficient of +1 or -1; off-diagonal linking numbers are a symmetric
//! integer matrix. The topological surgery coefficient of a component is
//! `tb + coeff`, which fills the diagonal of the linking matrix. Whether a
//! given (tb, rot) pair is realizable by an actual Legendrian knot of some
//! knot type is not checked; the only constraint enforced is that tb - rot
//! is odd, which holds for every Legendrian knot in the 3-sphere.

use crate::homology::{H1Element, H1Group};
use crate::linalg::{IntMatrix, LinalgError};
use num_bigint::BigInt;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum DiagramError {
    #[error("component {id}: tb - rot must be odd (tb = {tb}, rot = {rot})")]
    ParityViolation { id: String, tb: i64, rot: i64 },
    #[error("linking matrix is not symmetric at ({i}, {j})")]
    AsymmetricLinking { i: usize, j: usize },
    #[error("linking matrix must be {components}x{components}, got {rows}x{cols}")]
    LinkingShape {
        components: usize,
        rows: usize,
        cols: usize,
    },
    #[error("expected a vector of length {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("component index {index} out of bounds ({len} components)")]
    IndexOutOfBounds { index: usize, len: usize },
}

/// Error produced when reading a diagram or knot from a JSON document.
#[derive(Debug, Error)]
pub enum ParseError {
    #[error("malformed document: {0}")]
    Json(#[from] serde_json::Error),
}

/// Contact surgery coefficient, +1 or -1.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "i64", into = "i64")]
pub enum ContactCoeff {
    Plus,
    Minus,
}

impl ContactCoeff {
    pub fn sign(self) -> i64 {
        match self {
            ContactCoeff::Plus => 1,
            ContactCoeff::Minus => -1,
        }
    }
}

impl TryFrom<i64> for ContactCoeff {
    type Error = String;

    fn try_from(v: i64) -> Result<Self, String> {
        match v {
            1 => Ok(ContactCoeff::Plus),
            -1 => Ok(ContactCoeff::Minus),
            other => Err(format!("contact coefficient must be 1 or -1, got {other}")),
        }
    }
}

impl From<ContactCoeff> for i64 {
    fn from(c: ContactCoeff) -> i64 {
        c.sign()
    }
}

/// One oriented Legendrian component of a surgery diagram.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LegendrianComponent {
    pub id: String,
    pub tb: i64,
    pub rot: i64,
    pub coeff: ContactCoeff,
}

impl LegendrianComponent {
    pub fn new(id: impl Into<String>, tb: i64, rot: i64, coeff: ContactCoeff) -> Self {
        LegendrianComponent {
            id: id.into(),
            tb,
            rot,
            coeff,
        }
    }

    /// Topological surgery coefficient `tb + coeff`.
    pub fn topological_coefficient(&self) -> i64 {
        self.tb + self.coeff.sign()
    }

    fn check_parity(&self) -> Result<(), DiagramError> {
        if (self.tb - self.rot).rem_euclid(2) == 0 {
            return Err(DiagramError::ParityViolation {
                id: self.id.clone(),
                tb: self.tb,
                rot: self.rot,
            });
        }
        Ok(())
    }
}

/// Wire format: linking is a full symmetric matrix whose diagonal is ignored.
#[derive(Serialize, Deserialize)]
struct DiagramFile {
    components: Vec<LegendrianComponent>,
    linking: Vec<Vec<i64>>,
}

/// A validated contact (+1)/(-1)-surgery diagram.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "DiagramFile", into = "DiagramFile")]
pub struct SurgeryDiagram {
    components: Vec<LegendrianComponent>,
    /// Flat k*k symmetric matrix, diagonal kept at zero.
    linking: Vec<i64>,
}

impl TryFrom<DiagramFile> for SurgeryDiagram {
    type Error = DiagramError;

    fn try_from(file: DiagramFile) -> Result<Self, DiagramError> {
        SurgeryDiagram::new(file.components, file.linking)
    }
}

impl From<SurgeryDiagram> for DiagramFile {
    fn from(d: SurgeryDiagram) -> DiagramFile {
        let k = d.components.len();
        let linking = (0..k)
            .map(|i| (0..k).map(|j| if i == j { 0 } else { d.lk(i, j) }).collect())
            .collect();
        DiagramFile {
            components: d.components,
            linking,
        }
    }
}

impl SurgeryDiagram {
    /// Validates and builds a diagram. The linking matrix must be a full
    /// k x k symmetric matrix; its diagonal entries are ignored.
    pub fn new(
        components: Vec<LegendrianComponent>,
        linking: Vec<Vec<i64>>,
    ) -> Result<Self, DiagramError> {
        let k = components.len();
        if linking.len() != k || linking.iter().any(|row| row.len() != k) {
            return Err(DiagramError::LinkingShape {
                components: k,
                rows: linking.len(),
                cols: linking.iter().map(Vec::len).max().unwrap_or(0),
            });
        }
        for c in &components {
            c.check_parity()?;
        }
        for i in 0..k {
            for j in (i + 1)..k {
                if linking[i][j] != linking[j][i] {
                    return Err(DiagramError::AsymmetricLinking { i, j });
                }
            }
        }
        let mut flat = vec![0i64; k * k];
        for i in 0..k {
            for j in 0..k {
                if i != j {
                    flat[i * k + j] = linking[i][j];
                }
            }
        }
        Ok(SurgeryDiagram {
            components,
            linking: flat,
        })
    }

    pub fn empty() -> Self {
        SurgeryDiagram {
            components: Vec::new(),
            linking: Vec::new(),
        }
    }

    pub fn from_json_str(text: &str) -> Result<Self, ParseError> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string_pretty(self).expect("diagram serializes")
    }

    pub fn components(&self) -> &[LegendrianComponent] {
        &self.components
    }

    pub fn len(&self) -> usize {
        self.components.len()
    }

    pub fn is_empty(&self) -> bool {
        self.components.is_empty()
    }

    /// Linking number of components `i` and `j`; zero on the diagonal.
    pub fn lk(&self, i: usize, j: usize) -> i64 {
        let k = self.len();
        assert!(i < k && j < k, "component index out of bounds");
        self.linking[i * k + j]
    }

    /// Number of contact (+1)-surgeries in the diagram.
    pub fn positive_surgery_count(&self) -> usize {
        self.components
            .iter()
            .filter(|c| c.coeff == ContactCoeff::Plus)
            .count()
    }

    pub fn rotation_vector(&self) -> Vec<BigInt> {
        self.components
            .iter()
            .map(|c| BigInt::from(c.rot))
            .collect()
    }

    /// The linking matrix: topological coefficients on the diagonal,
    /// linking numbers off it.
    pub fn linking_matrix(&self) -> IntMatrix {
        let k = self.len();
        IntMatrix::from_fn(k, k, |i, j| {
            if i == j {
                BigInt::from(self.components[i].topological_coefficient())
            } else {
                BigInt::from(self.lk(i, j))
            }
        })
    }

    /// First homology of the surgered manifold, presented by the meridians
    /// modulo the rows of the linking matrix.
    pub fn first_homology(&self) -> H1Group {
        H1Group::from_relations(&self.linking_matrix())
    }

    /// Class of `sum alpha_i mu_i` in canonical coordinates.
    pub fn homology_class(&self, meridian_coords: &[i64]) -> Result<H1Element, LinalgError> {
        self.first_homology().class(meridian_coords)
    }

    /// Reverses the orientation of one component: its rotation number and
    /// its linking row/column change sign. The contact manifold is the same.
    pub fn reverse_orientation(&self, index: usize) -> Result<SurgeryDiagram, DiagramError> {
        let k = self.len();
        if index >= k {
            return Err(DiagramError::IndexOutOfBounds { index, len: k });
        }
        let mut out = self.clone();
        out.components[index].rot = -out.components[index].rot;
        for j in 0..k {
            if j != index {
                out.linking[index * k + j] = -out.linking[index * k + j];
                out.linking[j * k + index] = -out.linking[j * k + index];
            }
        }
        Ok(out)
    }

    /// Disjoint union (connected sum of the surgered manifolds).
    pub fn disjoint_union(&self, other: &SurgeryDiagram) -> SurgeryDiagram {
        let ka = self.len();
        let kb = other.len();
        let k = ka + kb;
        let mut components = self.components.clone();
        components.extend(other.components.iter().cloned());
        let mut linking = vec![0i64; k * k];
        for i in 0..ka {
            for j in 0..ka {
                linking[i * k + j] = self.linking[i * ka + j];
            }
        }
        for i in 0..kb {
            for j in 0..kb {
                linking[(ka + i) * k + (ka + j)] = other.linking[i * kb + j];
            }
        }
        SurgeryDiagram {
            components,
            linking,
        }
    }

    /// Appends a component with the given linking numbers to the existing
    /// ones, returning the enlarged diagram.
    pub fn with_component(
        &self,
        component: LegendrianComponent,
        linking: &[i64],
    ) -> Result<SurgeryDiagram, DiagramError> {
        let ka = self.len();
        if linking.len() != ka {
            return Err(DiagramError::DimensionMismatch {
                expected: ka,
                got: linking.len(),
            });
        }
        component.check_parity()?;
        let k = ka + 1;
        let mut components = self.components.clone();
        components.push(component);
        let mut flat = vec![0i64; k * k];
        for i in 0..ka {
            for j in 0..ka {
                flat[i * k + j] = self.linking[i * ka + j];
            }
        }
        for (i, &l) in linking.iter().enumerate() {
            flat[i * k + ka] = l;
            flat[ka * k + i] = l;
        }
        Ok(SurgeryDiagram {
            components,
            linking: flat,
        })
    }
}
