//! Homotopical invariants of a contact (+1)/(-1)-surgery diagram.
//!
//! Spin structures on the surgered manifold correspond to characteristic
//! sublinks: subsets `J` of the components with
//! `Q_ii = sum_{j in J} Q_ij (mod 2)` for every `i`, where `Q` is the
//! linking matrix. Given such a `J`, the Gamma invariant of the contact
//! structure is the half of `sum_i rot_i mu_i + sum_{j in J} (Q mu)_j` in
//! first homology (the numerator vector is always even, entry by entry).
//!
//! The d3 invariant is computed from a rational solution `b` of `Q b = rot`
//! as
//!
//! ```text
//! d3 = 1/4 (<rot, b> - 3 sigma(Q) - 2 n - 2) + q + 1/2
//! ```
//!
//! with `n` the component count and `q` the number of (+1)-surgeries. The
//! additive constant is normalized so that the empty diagram (the standard
//! tight 3-sphere) has d3 = 0; published versions of the formula differ by
//! overall constants depending on that normalization, and some state it
//! with `rk(Q)` in place of `n`. The two readings agree unless `Q` is
//! degenerate, in which case both values are reported.

use crate::diagram::SurgeryDiagram;
use crate::homology::{H1Element, H1Group};
use crate::linalg::{
    rational_rank, signature, solve_affine_mod2, solve_integer, solve_rational, IntMatrix,
    LinalgError, Mod2Solutions, Rational,
};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use std::fmt;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum InvariantError {
    #[error("d3 undefined: Euler class non-torsion (Q b = rot has no rational solution)")]
    D3Undefined,
    #[error("sublink is not characteristic for this diagram")]
    NotCharacteristic,
    #[error("knot class has infinite order in first homology")]
    InfiniteOrder,
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

/// A spin structure, stored as the indicator of its characteristic sublink.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct SpinStructure {
    indicator: Vec<bool>,
}

impl SpinStructure {
    pub fn new(indicator: Vec<bool>) -> Self {
        SpinStructure { indicator }
    }

    pub fn indicator(&self) -> &[bool] {
        &self.indicator
    }

    pub fn contains(&self, i: usize) -> bool {
        self.indicator[i]
    }

    /// 0-based indices of the sublink components.
    pub fn indices(&self) -> Vec<usize> {
        self.indicator
            .iter()
            .enumerate()
            .filter_map(|(i, &b)| b.then_some(i))
            .collect()
    }
}

impl fmt::Display for SpinStructure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        // 1-based positions, e.g. "{1,3}"
        let parts: Vec<String> = self.indices().iter().map(|i| (i + 1).to_string()).collect();
        write!(f, "{{{}}}", parts.join(","))
    }
}

/// True when `J` is a characteristic sublink of the symmetric matrix `q`.
pub fn is_characteristic(q: &IntMatrix, indicator: &[bool]) -> bool {
    let n = q.rows();
    if indicator.len() != n {
        return false;
    }
    let two = BigInt::from(2);
    (0..n).all(|i| {
        let mut sum = BigInt::zero();
        for (j, &inside) in indicator.iter().enumerate() {
            if inside {
                sum += &q[(i, j)];
            }
        }
        (sum - &q[(i, i)]).mod_floor(&two).is_zero()
    })
}

/// All spin structures of the diagram, as characteristic sublinks in
/// lexicographic order of the indicator vector.
///
/// The defining congruences form the affine system `(Q mod 2) x = diag(Q)`,
/// which is always consistent for symmetric integer `Q`; the solution count
/// is a power of two. Panics if there are more than 2^20 of them.
pub fn spin_structures(d: &SurgeryDiagram) -> Vec<SpinStructure> {
    let q = d.linking_matrix();
    let diag = q.diagonal();
    match solve_affine_mod2(&q, &diag).expect("square system") {
        Mod2Solutions::Enumerated(list) => list.into_iter().map(SpinStructure::new).collect(),
        Mod2Solutions::Inconsistent => {
            unreachable!("characteristic system of a symmetric matrix is consistent")
        }
        Mod2Solutions::Spanned { .. } => {
            panic!("too many spin structures to enumerate (mod-2 nullity > 20)")
        }
    }
}

/// The Gamma numerator halved, as an integer meridian-coordinate vector:
/// entry `i` is `(rot_i + sum_{j in J} Q_ij) / 2`.
///
/// Exposed because comparing Gamma classes across different surgery
/// descriptions of one manifold requires projecting meridian coordinates,
/// not canonical ones.
pub fn gamma_meridian(
    d: &SurgeryDiagram,
    s: &SpinStructure,
) -> Result<Vec<BigInt>, InvariantError> {
    let q = d.linking_matrix();
    if !is_characteristic(&q, s.indicator()) {
        return Err(InvariantError::NotCharacteristic);
    }
    let rot = d.rotation_vector();
    let two = BigInt::from(2);
    let mut halved = Vec::with_capacity(d.len());
    for i in 0..d.len() {
        let mut v = rot[i].clone();
        for j in s.indices() {
            v += &q[(i, j)];
        }
        let (half, rem) = v.div_rem(&two);
        assert!(
            rem.is_zero(),
            "Gamma numerator must be even for a characteristic sublink"
        );
        halved.push(half);
    }
    Ok(halved)
}

/// Gamma invariant of the diagram at a spin structure, in canonical
/// coordinates of `h1` (which must be the first homology of `d`).
pub fn gamma_in(
    d: &SurgeryDiagram,
    h1: &H1Group,
    s: &SpinStructure,
) -> Result<H1Element, InvariantError> {
    let halved = gamma_meridian(d, s)?;
    Ok(h1.class_big(&halved)?)
}

/// Gamma invariant of the diagram at a spin structure.
pub fn gamma(d: &SurgeryDiagram, s: &SpinStructure) -> Result<H1Element, InvariantError> {
    gamma_in(d, &d.first_homology(), s)
}

/// d3 invariant. `value` uses the component count in the formula; when the
/// linking matrix is degenerate the variant computed with its rank is
/// reported alongside.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct D3 {
    pub value: Rational,
    pub rank_value: Option<Rational>,
    pub free_rank: usize,
}

impl D3 {
    pub fn is_degenerate(&self) -> bool {
        self.free_rank > 0
    }
}

fn quarter(x: Rational) -> Rational {
    x / Rational::from_integer(BigInt::from(4))
}

/// d3 invariant of the contact structure given by the diagram. Undefined
/// (error) when `Q b = rot` has no rational solution, i.e. when the Euler
/// class is not torsion.
pub fn d3(d: &SurgeryDiagram) -> Result<D3, InvariantError> {
    let q = d.linking_matrix();
    let rot = d.rotation_vector();
    let b = solve_rational(&q, &rot)?.ok_or(InvariantError::D3Undefined)?;
    let pairing: Rational = rot
        .iter()
        .zip(&b)
        .map(|(r, x)| Rational::from(r.clone()) * x)
        .sum();
    let sigma = signature(&q).expect("linking matrix is symmetric");
    let n = d.len();
    let qcount = d.positive_surgery_count();
    let half = Rational::new(BigInt::one(), BigInt::from(2));
    let base = |two_cells: i64| -> Rational {
        let inner = pairing.clone()
            - Rational::from_integer(BigInt::from(3 * sigma))
            - Rational::from_integer(BigInt::from(2 * two_cells))
            - Rational::from_integer(BigInt::from(2));
        quarter(inner) + Rational::from_integer(BigInt::from(qcount as i64)) + half.clone()
    };
    let value = base(n as i64);
    let rank = rational_rank(&q);
    let free_rank = n - rank;
    let rank_value = (free_rank > 0).then(|| base(rank as i64));
    Ok(D3 {
        value,
        rank_value,
        free_rank,
    })
}

/// True when `a - b` is an integer.
pub fn d3_difference_integral(a: &Rational, b: &Rational) -> bool {
    (a - b).is_integer()
}

/// A Legendrian knot in the complement of the surgery link, described by
/// its classical invariants in the 3-sphere and its linking numbers with
/// the surgery components.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "KnotFile", into = "KnotFile")]
pub struct KnotInComplement {
    pub tb: i64,
    pub rot: i64,
    pub alpha: Vec<i64>,
}

#[derive(Serialize, Deserialize)]
struct KnotFile {
    t: i64,
    r: i64,
    alpha: Vec<i64>,
}

impl TryFrom<KnotFile> for KnotInComplement {
    type Error = String;

    fn try_from(f: KnotFile) -> Result<Self, String> {
        KnotInComplement::new(f.t, f.r, f.alpha)
            .map_err(|_| format!("knot t - r must be odd (t = {}, r = {})", f.t, f.r))
    }
}

impl From<KnotInComplement> for KnotFile {
    fn from(k: KnotInComplement) -> KnotFile {
        KnotFile {
            t: k.tb,
            r: k.rot,
            alpha: k.alpha,
        }
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
#[error("knot tb - rot must be odd (tb = {tb}, rot = {rot})")]
pub struct KnotParityError {
    pub tb: i64,
    pub rot: i64,
}

impl KnotInComplement {
    pub fn new(tb: i64, rot: i64, alpha: Vec<i64>) -> Result<Self, KnotParityError> {
        if (tb - rot).rem_euclid(2) == 0 {
            return Err(KnotParityError { tb, rot });
        }
        Ok(KnotInComplement { tb, rot, alpha })
    }

    pub fn from_json_str(text: &str) -> Result<Self, crate::diagram::ParseError> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn alpha_big(&self) -> Vec<BigInt> {
        self.alpha.iter().map(|&a| BigInt::from(a)).collect()
    }
}

/// Rational classical invariants of a knot in the surgered manifold.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalClassical {
    pub tb_q: Rational,
    pub rot_q: Rational,
    pub sl_q: Rational,
    /// Order of the knot class in first homology.
    pub order: BigInt,
}

/// Rational Thurston-Bennequin invariant, rotation number and self-linking
/// number of a knot in the complement.
///
/// With `D` the order of `[K] = sum alpha_i mu_i` and `c` an integral
/// solution of `Q c = D alpha` (one exists exactly because `D` kills the
/// class):
///
/// ```text
/// tb_Q = tb - (1/D) <c, alpha>,   rot_Q = rot - (1/D) <c, rot_vec>,
/// sl_Q = tb_Q + rot_Q.
/// ```
pub fn rational_classical(
    d: &SurgeryDiagram,
    k: &KnotInComplement,
) -> Result<RationalClassical, InvariantError> {
    if k.alpha.len() != d.len() {
        return Err(InvariantError::Linalg(LinalgError::DimensionMismatch {
            expected: d.len(),
            got: k.alpha.len(),
        }));
    }
    let h1 = d.first_homology();
    let alpha = k.alpha_big();
    let class = h1.class_big(&alpha)?;
    let order = h1
        .element_order(&class)
        .ok_or(InvariantError::InfiniteOrder)?;
    let q = d.linking_matrix();
    let rhs: Vec<BigInt> = alpha.iter().map(|a| a * &order).collect();
    let c = solve_integer(&q, &rhs)?
        .expect("Q c = D alpha is solvable when D annihilates the class");
    let dot_alpha: BigInt = c.iter().zip(&alpha).map(|(x, a)| x * a).sum();
    let dot_rot: BigInt = c
        .iter()
        .zip(d.rotation_vector())
        .map(|(x, r)| x * r)
        .sum();
    let tb_q = Rational::from_integer(BigInt::from(k.tb))
        - Rational::new(dot_alpha, order.clone());
    let rot_q = Rational::from_integer(BigInt::from(k.rot))
        - Rational::new(dot_rot, order.clone());
    let sl_q = &tb_q + &rot_q;
    Ok(RationalClassical {
        tb_q,
        rot_q,
        sl_q,
        order,
    })
}

/// The pair (d3, Gamma per spin structure) identifying the plane field,
/// plus the doubled class (the Euler class representative, independent of
/// the spin structure).
#[derive(Clone, Debug)]
pub struct Fingerprint {
    pub d3: D3,
    pub h1: H1Group,
    pub spins: Vec<SpinStructure>,
    pub gammas: Vec<H1Element>,
    pub euler: H1Element,
}

impl Fingerprint {
    pub fn gamma_for(&self, s: &SpinStructure) -> Option<&H1Element> {
        self.spins
            .iter()
            .position(|t| t == s)
            .map(|i| &self.gammas[i])
    }
}

pub fn plane_field_fingerprint(d: &SurgeryDiagram) -> Result<Fingerprint, InvariantError> {
    let d3 = d3(d)?;
    let h1 = d.first_homology();
    let spins = spin_structures(d);
    let gammas: Vec<H1Element> = spins
        .iter()
        .map(|s| gamma_in(d, &h1, s))
        .collect::<Result<_, _>>()?;
    let euler = h1.double(&gammas[0]);
    debug_assert!(gammas.iter().all(|g| h1.double(g) == euler));
    Ok(Fingerprint {
        d3,
        h1,
        spins,
        gammas,
        euler,
    })
}
