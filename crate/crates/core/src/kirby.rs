//! Kirby moves on smooth framed linking data with a tracked characteristic
//! sublink.
//!
//! States are abstract: framings, a symmetric linking matrix, a per-component
//! "this is an unknot" flag (declared metadata trusted by the move
//! preconditions) and the indicator of a characteristic sublink. All move
//! rules are functions of linking data alone.
//!
//! Sublink transformation rules:
//!
//! * blow up: the new (eps)-framed unknot `U` joins the sublink iff
//!   `sum_{j in J} w_j` is even; everyone else keeps their status,
//! * blow down: remove the component, everyone else keeps their status
//!   (consistency is forced by the removed component's own characteristic
//!   congruence),
//! * handle slide of `i` over `k`: `k` flips iff `i` is in the sublink,
//! * n-fold Rolfsen twist on a 0-framed unknot `k`: `k` flips iff
//!   `n (1 + sum_{j in J, j != k} l_kj)` is odd,
//! * inverse slam dunk: the new knot `K` never joins; the new 0-framed
//!   meridian `U` joins iff `n - lk(K, L_J)` is odd,
//! * slam dunk: remove the pair, everyone else keeps their status.
//!
//! Every move preserves the homeomorphism type, hence the cokernel of the
//! linking matrix and the set of spin structures; each returned state is
//! re-checked against the characteristic congruences.

use crate::linalg::{smith_normal_form, solve_affine_mod2, IntMatrix, Mod2Solutions};
use num_bigint::BigInt;
use num_traits::Zero;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum KirbyError {
    #[error("sublink is not characteristic for the given framed link")]
    NotCharacteristic,
    #[error("component {index} is not a (+1)/(-1)-framed unknot")]
    NotBlowdownable { index: usize },
    #[error("cannot slide a component over itself")]
    SameComponent,
    #[error("component {index} is not a 0-framed unknot")]
    NotZeroFramedUnknot { index: usize },
    #[error("slam dunk pattern mismatch: {reason}")]
    PatternMismatch { reason: &'static str },
    #[error("component index {index} out of bounds ({len} components)")]
    IndexOutOfBounds { index: usize, len: usize },
    #[error("sign must be +1 or -1, got {got}")]
    InvalidSign { got: i64 },
    #[error("expected a vector of length {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("linking matrix is not symmetric at ({i}, {j})")]
    AsymmetricLinking { i: usize, j: usize },
    #[error("linking matrix must be {components}x{components}, got {rows}x{cols}")]
    LinkingShape {
        components: usize,
        rows: usize,
        cols: usize,
    },
}

#[derive(Serialize, Deserialize)]
struct StateFile {
    framings: Vec<i64>,
    linking: Vec<Vec<i64>>,
    unknots: Vec<bool>,
    char_sublink: Vec<bool>,
}

/// A framed link state: framings, off-diagonal linking numbers, declared
/// unknot flags and the tracked characteristic sublink.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "StateFile", into = "StateFile")]
pub struct FramedLinkState {
    framings: Vec<i64>,
    /// Flat k*k symmetric matrix, diagonal kept at zero.
    linking: Vec<i64>,
    unknot_flags: Vec<bool>,
    char_sublink: Vec<bool>,
}

impl TryFrom<StateFile> for FramedLinkState {
    type Error = KirbyError;

    fn try_from(f: StateFile) -> Result<Self, KirbyError> {
        FramedLinkState::new(f.framings, f.linking, f.unknots, f.char_sublink)
    }
}

impl From<FramedLinkState> for StateFile {
    fn from(st: FramedLinkState) -> StateFile {
        let k = st.len();
        let linking = (0..k)
            .map(|i| (0..k).map(|j| if i == j { 0 } else { st.lk(i, j) }).collect())
            .collect();
        StateFile {
            framings: st.framings,
            linking,
            unknots: st.unknot_flags,
            char_sublink: st.char_sublink,
        }
    }
}

/// A move record, as stored in JSON move scripts. Indices are 0-based.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "op", rename_all = "snake_case")]
pub enum Move {
    BlowUp { eps: i64, w: Vec<i64> },
    BlowDown { k: usize },
    HandleSlide { i: usize, k: usize, sign: i64 },
    RolfsenTwist { k: usize, n: i64 },
    InverseSlamDunk { n: i64, a: Vec<i64> },
    SlamDunk { k: usize, u: usize },
}

fn check_sign(s: i64) -> Result<i64, KirbyError> {
    if s == 1 || s == -1 {
        Ok(s)
    } else {
        Err(KirbyError::InvalidSign { got: s })
    }
}

impl FramedLinkState {
    pub fn new(
        framings: Vec<i64>,
        linking: Vec<Vec<i64>>,
        unknot_flags: Vec<bool>,
        char_sublink: Vec<bool>,
    ) -> Result<Self, KirbyError> {
        let k = framings.len();
        if linking.len() != k || linking.iter().any(|row| row.len() != k) {
            return Err(KirbyError::LinkingShape {
                components: k,
                rows: linking.len(),
                cols: linking.iter().map(Vec::len).max().unwrap_or(0),
            });
        }
        if unknot_flags.len() != k {
            return Err(KirbyError::DimensionMismatch {
                expected: k,
                got: unknot_flags.len(),
            });
        }
        if char_sublink.len() != k {
            return Err(KirbyError::DimensionMismatch {
                expected: k,
                got: char_sublink.len(),
            });
        }
        for i in 0..k {
            for j in (i + 1)..k {
                if linking[i][j] != linking[j][i] {
                    return Err(KirbyError::AsymmetricLinking { i, j });
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
        let st = FramedLinkState {
            framings,
            linking: flat,
            unknot_flags,
            char_sublink,
        };
        if !st.is_characteristic() {
            return Err(KirbyError::NotCharacteristic);
        }
        Ok(st)
    }

    pub fn empty() -> Self {
        FramedLinkState {
            framings: Vec::new(),
            linking: Vec::new(),
            unknot_flags: Vec::new(),
            char_sublink: Vec::new(),
        }
    }

    pub fn from_json_str(text: &str) -> Result<Self, crate::diagram::ParseError> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string_pretty(self).expect("state serializes")
    }

    pub fn len(&self) -> usize {
        self.framings.len()
    }

    pub fn is_empty(&self) -> bool {
        self.framings.is_empty()
    }

    pub fn framings(&self) -> &[i64] {
        &self.framings
    }

    pub fn unknot_flags(&self) -> &[bool] {
        &self.unknot_flags
    }

    pub fn char_sublink(&self) -> &[bool] {
        &self.char_sublink
    }

    pub fn lk(&self, i: usize, j: usize) -> i64 {
        let k = self.len();
        assert!(i < k && j < k, "component index out of bounds");
        self.linking[i * k + j]
    }

    /// Presentation matrix: framings on the diagonal, linking numbers off it.
    pub fn full_matrix(&self) -> IntMatrix {
        let k = self.len();
        IntMatrix::from_fn(k, k, |i, j| {
            if i == j {
                BigInt::from(self.framings[i])
            } else {
                BigInt::from(self.lk(i, j))
            }
        })
    }

    /// The characteristic congruences for the tracked sublink.
    pub fn is_characteristic(&self) -> bool {
        let k = self.len();
        (0..k).all(|i| {
            let mut sum = -self.framings[i];
            for j in 0..k {
                if self.char_sublink[j] {
                    sum += if j == i {
                        self.framings[i]
                    } else {
                        self.lk(i, j)
                    };
                }
            }
            sum.rem_euclid(2) == 0
        })
    }

    /// Invariant factors and free rank of the cokernel of the presentation
    /// matrix. Constant along any sequence of moves.
    pub fn homology_invariants(&self) -> (Vec<BigInt>, usize) {
        let snf = smith_normal_form(&self.full_matrix());
        let free = snf.diagonal().iter().filter(|d| d.is_zero()).count();
        (snf.invariant_factors(), free)
    }

    /// log2 of the number of characteristic sublinks. Constant along moves.
    pub fn spin_count_log2(&self) -> usize {
        let q = self.full_matrix();
        let diag = q.diagonal();
        match solve_affine_mod2(&q, &diag).expect("square system") {
            Mod2Solutions::Inconsistent => {
                unreachable!("characteristic system of a symmetric matrix is consistent")
            }
            sols => sols.count_log2().expect("consistent"),
        }
    }

    fn check_index(&self, index: usize) -> Result<(), KirbyError> {
        if index >= self.len() {
            return Err(KirbyError::IndexOutOfBounds {
                index,
                len: self.len(),
            });
        }
        Ok(())
    }

    fn assert_characteristic(self) -> FramedLinkState {
        assert!(
            self.is_characteristic(),
            "move broke the characteristic sublink"
        );
        self
    }

    fn remove_component(&mut self, k: usize) {
        let n = self.len();
        let mut flat = vec![0i64; (n - 1) * (n - 1)];
        let keep: Vec<usize> = (0..n).filter(|&i| i != k).collect();
        for (a, &i) in keep.iter().enumerate() {
            for (b, &j) in keep.iter().enumerate() {
                flat[a * (n - 1) + b] = self.linking[i * n + j];
            }
        }
        self.linking = flat;
        self.framings.remove(k);
        self.unknot_flags.remove(k);
        self.char_sublink.remove(k);
    }

    /// Blows up a new (eps)-framed unknot `U` whose disk the old components
    /// pass through with multiplicities `w`. The twist adds `eps w_i w_j` to
    /// the linking data, `eps w_i^2` to the framings, and the new linking
    /// numbers are `lk(U, L_i) = eps w_i`.
    pub fn blow_up(&self, eps: i64, w: &[i64]) -> Result<FramedLinkState, KirbyError> {
        let eps = check_sign(eps)?;
        let n = self.len();
        if w.len() != n {
            return Err(KirbyError::DimensionMismatch {
                expected: n,
                got: w.len(),
            });
        }
        let m = n + 1;
        let mut flat = vec![0i64; m * m];
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    flat[i * m + j] = self.linking[i * n + j] + eps * w[i] * w[j];
                }
            }
            flat[i * m + n] = eps * w[i];
            flat[n * m + i] = eps * w[i];
        }
        let mut framings: Vec<i64> = (0..n).map(|i| self.framings[i] + eps * w[i] * w[i]).collect();
        framings.push(eps);
        let mut unknot_flags = self.unknot_flags.clone();
        unknot_flags.push(true);
        let sublink_sum: i64 = (0..n).filter(|&j| self.char_sublink[j]).map(|j| w[j]).sum();
        let mut char_sublink = self.char_sublink.clone();
        char_sublink.push(sublink_sum.rem_euclid(2) == 0);
        Ok(FramedLinkState {
            framings,
            linking: flat,
            unknot_flags,
            char_sublink,
        }
        .assert_characteristic())
    }

    /// Blows down the (+1)/(-1)-framed unknot at `k`, untwisting the
    /// remaining data. Inverse of `blow_up`. Membership of the survivors
    /// is unchanged whether or not `k` was in the sublink.
    pub fn blow_down(&self, k: usize) -> Result<FramedLinkState, KirbyError> {
        self.check_index(k)?;
        if !(self.unknot_flags[k] && (self.framings[k] == 1 || self.framings[k] == -1)) {
            return Err(KirbyError::NotBlowdownable { index: k });
        }
        let eps = self.framings[k];
        let n = self.len();
        let mut out = self.clone();
        for i in 0..n {
            if i == k {
                continue;
            }
            out.framings[i] -= eps * self.lk(i, k) * self.lk(i, k);
            for j in 0..n {
                if j == k || j == i {
                    continue;
                }
                out.linking[i * n + j] -= eps * self.lk(i, k) * self.lk(j, k);
            }
        }
        out.remove_component(k);
        Ok(out.assert_characteristic())
    }

    /// Slides component `i` over component `k` (band sum with `sign` the
    /// relative orientation). `k` flips its sublink membership iff `i` is in
    /// the sublink.
    pub fn handle_slide(&self, i: usize, k: usize, sign: i64) -> Result<FramedLinkState, KirbyError> {
        let sign = check_sign(sign)?;
        self.check_index(i)?;
        self.check_index(k)?;
        if i == k {
            return Err(KirbyError::SameComponent);
        }
        let n = self.len();
        let mut out = self.clone();
        out.framings[i] = self.framings[i] + self.framings[k] + 2 * sign * self.lk(i, k);
        for j in 0..n {
            if j == i || j == k {
                continue;
            }
            out.linking[i * n + j] = self.lk(i, j) + sign * self.lk(k, j);
            out.linking[j * n + i] = out.linking[i * n + j];
        }
        out.linking[i * n + k] = self.lk(i, k) + sign * self.framings[k];
        out.linking[k * n + i] = out.linking[i * n + k];
        // a band sum is generally not an unknot anymore
        out.unknot_flags[i] = false;
        if self.char_sublink[i] {
            out.char_sublink[k] = !out.char_sublink[k];
        }
        Ok(out.assert_characteristic())
    }

    /// n-fold Rolfsen twist on the 0-framed unknot `k`. The twisted unknot
    /// keeps coefficient 0, so the diagram stays integral; everything
    /// passing through its disk gets twisted.
    pub fn rolfsen_twist(&self, k: usize, n: i64) -> Result<FramedLinkState, KirbyError> {
        self.check_index(k)?;
        if !(self.unknot_flags[k] && self.framings[k] == 0) {
            return Err(KirbyError::NotZeroFramedUnknot { index: k });
        }
        let len = self.len();
        let mut out = self.clone();
        for i in 0..len {
            if i == k {
                continue;
            }
            out.framings[i] += n * self.lk(i, k) * self.lk(i, k);
            for j in 0..len {
                if j == k || j == i {
                    continue;
                }
                out.linking[i * len + j] += n * self.lk(i, k) * self.lk(j, k);
            }
        }
        let linked_sum: i64 = (0..len)
            .filter(|&j| j != k && self.char_sublink[j])
            .map(|j| self.lk(k, j))
            .sum();
        if (n * (1 + linked_sum)).rem_euclid(2) == 1 {
            out.char_sublink[k] = !out.char_sublink[k];
        }
        Ok(out.assert_characteristic())
    }

    /// Appends a cancelling pair: a knot `K` with framing `n` and linking
    /// vector `a`, and a 0-framed meridian unknot `U` linking only `K`,
    /// once. `K` never joins the sublink; `U` joins iff `n - lk(K, L_J)`
    /// is odd.
    pub fn inverse_slam_dunk(&self, n: i64, a: &[i64]) -> Result<FramedLinkState, KirbyError> {
        let len = self.len();
        if a.len() != len {
            return Err(KirbyError::DimensionMismatch {
                expected: len,
                got: a.len(),
            });
        }
        let m = len + 2;
        let mut flat = vec![0i64; m * m];
        for i in 0..len {
            for j in 0..len {
                if i != j {
                    flat[i * m + j] = self.linking[i * len + j];
                }
            }
            flat[i * m + len] = a[i];
            flat[len * m + i] = a[i];
        }
        flat[len * m + (len + 1)] = 1;
        flat[(len + 1) * m + len] = 1;
        let mut framings = self.framings.clone();
        framings.push(n);
        framings.push(0);
        let mut unknot_flags = self.unknot_flags.clone();
        unknot_flags.push(false); // K may be knotted
        unknot_flags.push(true);
        let sublink_lk: i64 = (0..len)
            .filter(|&j| self.char_sublink[j])
            .map(|j| a[j])
            .sum();
        let mut char_sublink = self.char_sublink.clone();
        char_sublink.push(false);
        char_sublink.push((n - sublink_lk).rem_euclid(2) == 1);
        Ok(FramedLinkState {
            framings,
            linking: flat,
            unknot_flags,
            char_sublink,
        }
        .assert_characteristic())
    }

    /// Removes the cancelling pair (`k`, its 0-framed meridian `u`).
    /// Everything else, including sublink memberships, is untouched.
    pub fn slam_dunk(&self, k: usize, u: usize) -> Result<FramedLinkState, KirbyError> {
        self.check_index(k)?;
        self.check_index(u)?;
        if k == u {
            return Err(KirbyError::PatternMismatch {
                reason: "k and u must be distinct components",
            });
        }
        if !self.unknot_flags[u] {
            return Err(KirbyError::PatternMismatch {
                reason: "u must be an unknot",
            });
        }
        if self.framings[u] != 0 {
            return Err(KirbyError::PatternMismatch {
                reason: "u must be 0-framed",
            });
        }
        if self.lk(k, u).abs() != 1 {
            return Err(KirbyError::PatternMismatch {
                reason: "u must link k exactly once",
            });
        }
        if (0..self.len()).any(|j| j != k && j != u && self.lk(j, u) != 0) {
            return Err(KirbyError::PatternMismatch {
                reason: "u must link nothing besides k",
            });
        }
        let mut out = self.clone();
        let (first, second) = if k > u { (k, u) } else { (u, k) };
        out.remove_component(first);
        out.remove_component(second);
        Ok(out.assert_characteristic())
    }

    pub fn apply(&self, mv: &Move) -> Result<FramedLinkState, KirbyError> {
        match mv {
            Move::BlowUp { eps, w } => self.blow_up(*eps, w),
            Move::BlowDown { k } => self.blow_down(*k),
            Move::HandleSlide { i, k, sign } => self.handle_slide(*i, *k, *sign),
            Move::RolfsenTwist { k, n } => self.rolfsen_twist(*k, *n),
            Move::InverseSlamDunk { n, a } => self.inverse_slam_dunk(*n, a),
            Move::SlamDunk { k, u } => self.slam_dunk(*k, *u),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lens_two_state(sublink: bool) -> FramedLinkState {
        FramedLinkState::new(vec![-2], vec![vec![0]], vec![true], vec![sublink]).unwrap()
    }

    #[test]
    fn blow_up_disjoint_unknot_joins_sublink() {
        let st = lens_two_state(true);
        let up = st.blow_up(1, &[0]).unwrap();
        assert_eq!(up.framings(), &[-2, 1]);
        assert_eq!(up.char_sublink(), &[true, true]);
        assert_eq!(up.lk(0, 1), 0);
    }

    #[test]
    fn blow_up_with_twisting() {
        let st = lens_two_state(true);
        let up = st.blow_up(-1, &[1]).unwrap();
        assert_eq!(up.framings(), &[-3, -1]);
        assert_eq!(up.lk(0, 1), -1);
        // sum over the sublink of w is odd, so U stays out
        assert_eq!(up.char_sublink(), &[true, false]);
    }

    #[test]
    fn blow_up_on_empty_state() {
        let st = FramedLinkState::empty();
        let up = st.blow_up(1, &[]).unwrap();
        assert_eq!(up.framings(), &[1]);
        // the vacuous sum is even
        assert_eq!(up.char_sublink(), &[true]);
    }

    #[test]
    fn blow_down_undoes_blow_up() {
        let st = FramedLinkState::new(
            vec![-2, 3],
            vec![vec![0, 1], vec![1, 0]],
            vec![true, false],
            vec![true, false],
        )
        .unwrap();
        for eps in [1, -1] {
            for w in [vec![0, 0], vec![1, 0], vec![2, -1], vec![-1, 3]] {
                let up = st.blow_up(eps, &w).unwrap();
                let down = up.blow_down(st.len()).unwrap();
                assert_eq!(down, st);
            }
        }
    }

    #[test]
    fn blow_down_unlinked_unknot() {
        let st = FramedLinkState::new(
            vec![-2, 1],
            vec![vec![0, 0], vec![0, 0]],
            vec![true, true],
            vec![true, true],
        )
        .unwrap();
        let down = st.blow_down(1).unwrap();
        assert_eq!(down.framings(), &[-2]);
        assert_eq!(down.char_sublink(), &[true]);
    }

    #[test]
    fn blow_down_requires_unit_framed_unknot() {
        let st = FramedLinkState::new(vec![3], vec![vec![0]], vec![true], vec![true]).unwrap();
        assert_eq!(
            st.blow_down(0).unwrap_err(),
            KirbyError::NotBlowdownable { index: 0 }
        );
    }

    #[test]
    fn handle_slide_updates_linking_data() {
        let st = FramedLinkState::new(
            vec![-2, -2],
            vec![vec![0, 1], vec![1, 0]],
            vec![true, true],
            vec![false, false],
        )
        .unwrap();
        let slid = st.handle_slide(0, 1, 1).unwrap();
        assert_eq!(slid.framings(), &[-2, -2]);
        assert_eq!(slid.lk(0, 1), -1);
        assert_eq!(
            st.full_matrix().determinant(),
            slid.full_matrix().determinant()
        );
        // i not in the sublink: no membership change
        assert_eq!(slid.char_sublink(), &[false, false]);
    }

    #[test]
    fn handle_slide_flips_target_membership() {
        let st = FramedLinkState::new(
            vec![-2, 1],
            vec![vec![0, 1], vec![1, 0]],
            vec![true, true],
            vec![true, false],
        )
        .unwrap();
        let slid = st.handle_slide(0, 1, 1).unwrap();
        assert_eq!(slid.char_sublink(), &[true, true]);
    }

    #[test]
    fn handle_slide_rejects_same_component() {
        let st = lens_two_state(true);
        assert_eq!(
            st.handle_slide(0, 0, 1).unwrap_err(),
            KirbyError::SameComponent
        );
    }

    #[test]
    fn rolfsen_twist_examples() {
        let st = FramedLinkState::new(
            vec![0, 0],
            vec![vec![0, 1], vec![1, 0]],
            vec![true, true],
            vec![false, false],
        )
        .unwrap();
        let even = st.rolfsen_twist(0, 2).unwrap();
        assert_eq!(even.framings(), &[0, 2]);
        assert_eq!(even.char_sublink(), &[false, false]);

        let odd = st.rolfsen_twist(0, 1).unwrap();
        assert_eq!(odd.framings(), &[0, 1]);
        assert_eq!(odd.char_sublink(), &[true, false]);

        let id = st.rolfsen_twist(0, 0).unwrap();
        assert_eq!(id, st);
    }

    #[test]
    fn rolfsen_twist_requires_zero_framed_unknot() {
        let st = lens_two_state(true);
        assert_eq!(
            st.rolfsen_twist(0, 1).unwrap_err(),
            KirbyError::NotZeroFramedUnknot { index: 0 }
        );
    }

    #[test]
    fn inverse_slam_dunk_membership_rule() {
        let empty = FramedLinkState::empty();
        let st = empty.inverse_slam_dunk(3, &[]).unwrap();
        assert_eq!(st.framings(), &[3, 0]);
        assert_eq!(st.char_sublink(), &[false, true]);

        let base = lens_two_state(true);
        let odd = base.inverse_slam_dunk(2, &[1]).unwrap();
        assert_eq!(odd.char_sublink(), &[true, false, true]);
        let even = base.inverse_slam_dunk(1, &[1]).unwrap();
        assert_eq!(even.char_sublink(), &[true, false, false]);
    }

    #[test]
    fn slam_dunk_undoes_inverse_slam_dunk() {
        let base = FramedLinkState::new(
            vec![-2, 4],
            vec![vec![0, -1], vec![-1, 0]],
            vec![true, false],
            vec![false, false],
        )
        .unwrap();
        for n in -3..=3 {
            for a in [vec![0, 0], vec![1, 2], vec![-1, 1]] {
                let up = base.inverse_slam_dunk(n, &a).unwrap();
                let down = up.slam_dunk(base.len(), base.len() + 1).unwrap();
                assert_eq!(down, base);
            }
        }
    }

    #[test]
    fn slam_dunk_on_chain() {
        // the 0-framed meridian is forced into the sublink by its own congruence
        let st = FramedLinkState::new(
            vec![-2, 5, 0],
            vec![vec![0, 0, 0], vec![0, 0, 1], vec![0, 1, 0]],
            vec![true, false, true],
            vec![true, false, true],
        )
        .unwrap();
        let out = st.slam_dunk(1, 2).unwrap();
        assert_eq!(out.framings(), &[-2]);
        assert_eq!(out.char_sublink(), &[true]);
    }

    #[test]
    fn slam_dunk_rejects_extra_linking() {
        let st = FramedLinkState::new(
            vec![-2, 5, 0],
            vec![vec![0, 0, 1], vec![0, 0, 1], vec![1, 1, 0]],
            vec![true, false, true],
            vec![true, true, false],
        );
        // u links two components: the state above is fine, the move is not
        let st = st.unwrap();
        assert!(matches!(
            st.slam_dunk(1, 2).unwrap_err(),
            KirbyError::PatternMismatch { .. }
        ));
    }

    #[test]
    fn moves_preserve_homology_and_spin_count() {
        let st = FramedLinkState::new(
            vec![-2, 4, 0],
            vec![vec![0, 1, 0], vec![1, 0, 1], vec![0, 1, 0]],
            vec![true, true, true],
            vec![true, false, true],
        )
        .unwrap();
        let h = st.homology_invariants();
        let s = st.spin_count_log2();
        let moves = [
            Move::BlowUp {
                eps: -1,
                w: vec![1, 0, 2],
            },
            Move::HandleSlide {
                i: 0,
                k: 1,
                sign: -1,
            },
            Move::InverseSlamDunk {
                n: 5,
                a: vec![1, 1, 0, 0],
            },
            Move::BlowUp {
                eps: 1,
                w: vec![0, 1, 0, 0, 0, 0],
            },
        ];
        let mut cur = st;
        for mv in &moves {
            cur = cur.apply(mv).unwrap();
            assert!(cur.is_characteristic());
            assert_eq!(cur.homology_invariants(), h);
            assert_eq!(cur.spin_count_log2(), s);
        }
    }

    #[test]
    fn state_json_roundtrip() {
        let st = FramedLinkState::new(
            vec![-2, 1],
            vec![vec![0, -1], vec![-1, 0]],
            vec![true, false],
            vec![true, false],
        )
        .unwrap();
        let text = st.to_json_string();
        let back = FramedLinkState::from_json_str(&text).unwrap();
        assert_eq!(st, back);
    }

    #[test]
    fn non_characteristic_state_is_rejected() {
        let err = FramedLinkState::new(vec![-3], vec![vec![0]], vec![true], vec![false]);
        assert_eq!(err.unwrap_err(), KirbyError::NotCharacteristic);
    }

    #[test]
    fn move_script_parses() {
        let text = r#"[{"op":"handle_slide","i":0,"k":1,"sign":1},
                       {"op":"blow_up","eps":-1,"w":[0,0]}]"#;
        let moves: Vec<Move> = serde_json::from_str(text).unwrap();
        assert_eq!(moves.len(), 2);
        assert_eq!(
            moves[0],
            Move::HandleSlide {
                i: 0,
                k: 1,
                sign: 1
            }
        );
    }
}
