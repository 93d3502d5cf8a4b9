//! Seeded random generators for diagrams, knots and framed link states.
//!
//! Used by the randomized oracle suites and the CLI fuzz modes; everything
//! is driven by a ChaCha stream cipher so a fixed seed gives identical
//! output on every platform.

use crate::diagram::{ContactCoeff, LegendrianComponent, SurgeryDiagram};
use crate::invariants::KnotInComplement;
use crate::kirby::{FramedLinkState, Move};
use crate::linalg::{solve_affine_mod2, Mod2Solutions};
use num_traits::Zero;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng_from_seed(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Alternative generator for callers that do not care about the stream.
pub fn std_rng(seed: u64) -> StdRng {
    StdRng::seed_from_u64(seed)
}

/// Random diagram with `1..=max_components` components, entries bounded by
/// `bound`, valid parities. With `nondegenerate` set, resamples until the
/// linking matrix has nonzero determinant.
pub fn random_diagram(
    rng: &mut impl Rng,
    max_components: usize,
    bound: i64,
    nondegenerate: bool,
) -> SurgeryDiagram {
    loop {
        let n = rng.gen_range(1..=max_components);
        let mut components = Vec::with_capacity(n);
        for i in 0..n {
            let tb = rng.gen_range(-bound..=bound);
            let rot = opposite_parity_sample(rng, tb, bound);
            let coeff = if rng.gen_bool(0.5) {
                ContactCoeff::Plus
            } else {
                ContactCoeff::Minus
            };
            components.push(LegendrianComponent::new(format!("k{i}"), tb, rot, coeff));
        }
        let mut linking = vec![vec![0i64; n]; n];
        for i in 0..n {
            for j in (i + 1)..n {
                let l = rng.gen_range(-bound..=bound);
                linking[i][j] = l;
                linking[j][i] = l;
            }
        }
        let d = SurgeryDiagram::new(components, linking).expect("sampled data is valid");
        if !nondegenerate || !d.linking_matrix().determinant().is_zero() {
            return d;
        }
    }
}

/// Uniform sample from the values in `[-bound, bound]` whose parity differs
/// from `anchor`, so `anchor - value` is odd.
fn opposite_parity_sample(rng: &mut impl Rng, anchor: i64, bound: i64) -> i64 {
    loop {
        let v = rng.gen_range(-bound..=bound);
        if (anchor - v).rem_euclid(2) == 1 {
            return v;
        }
    }
}

/// Random knot in the complement of an `n`-component diagram.
pub fn random_knot(
    rng: &mut impl Rng,
    components: usize,
    classical_bound: i64,
    alpha_bound: i64,
) -> KnotInComplement {
    let tb = rng.gen_range(-classical_bound..=classical_bound);
    let rot = opposite_parity_sample(rng, tb, classical_bound);
    let alpha = (0..components)
        .map(|_| rng.gen_range(-alpha_bound..=alpha_bound))
        .collect();
    KnotInComplement::new(tb, rot, alpha).expect("parity fixed above")
}

/// Random framed link state with a characteristic sublink picked uniformly
/// among the valid ones.
pub fn random_state(rng: &mut impl Rng, max_components: usize, bound: i64) -> FramedLinkState {
    let n = rng.gen_range(1..=max_components);
    let framings: Vec<i64> = (0..n).map(|_| rng.gen_range(-bound..=bound)).collect();
    let mut linking = vec![vec![0i64; n]; n];
    for i in 0..n {
        for j in (i + 1)..n {
            let l = rng.gen_range(-bound..=bound);
            linking[i][j] = l;
            linking[j][i] = l;
        }
    }
    let unknot_flags: Vec<bool> = (0..n).map(|_| rng.gen_bool(0.5)).collect();

    let full = crate::linalg::IntMatrix::from_fn(n, n, |i, j| {
        if i == j {
            framings[i].into()
        } else {
            linking[i][j].into()
        }
    });
    let diag = full.diagonal();
    let solutions = match solve_affine_mod2(&full, &diag).expect("square system") {
        Mod2Solutions::Enumerated(list) => list,
        _ => unreachable!("characteristic systems are consistent and small here"),
    };
    let sublink = solutions[rng.gen_range(0..solutions.len())].clone();
    FramedLinkState::new(framings, linking, unknot_flags, sublink)
        .expect("sampled sublink is characteristic")
}

/// A random legal move for the state, with parameters bounded by `bound`.
/// Shrinking moves are preferred once the state grows past eight
/// components, so long random walks stay small.
pub fn random_legal_move(rng: &mut impl Rng, st: &FramedLinkState, bound: i64) -> Move {
    let n = st.len();
    let blowdownable: Vec<usize> = (0..n)
        .filter(|&k| st.unknot_flags()[k] && st.framings()[k].abs() == 1)
        .collect();
    let zero_unknots: Vec<usize> = (0..n)
        .filter(|&k| st.unknot_flags()[k] && st.framings()[k] == 0)
        .collect();
    let dunkable: Vec<(usize, usize)> = (0..n)
        .flat_map(|k| (0..n).map(move |u| (k, u)))
        .filter(|&(k, u)| {
            k != u
                && st.unknot_flags()[u]
                && st.framings()[u] == 0
                && st.lk(k, u).abs() == 1
                && (0..n).all(|j| j == k || j == u || st.lk(j, u) == 0)
        })
        .collect();

    let mut kinds: Vec<u8> = vec![0, 4]; // blow_up, inverse_slam_dunk
    if !blowdownable.is_empty() {
        kinds.push(1);
    }
    if n >= 2 {
        kinds.push(2);
    }
    if !zero_unknots.is_empty() {
        kinds.push(3);
    }
    if !dunkable.is_empty() {
        kinds.push(5);
    }
    if n >= 8 {
        // bias toward the shrinking moves when available
        if !dunkable.is_empty() {
            kinds.extend([5, 5, 5]);
        }
        if !blowdownable.is_empty() {
            kinds.extend([1, 1, 1]);
        }
    }

    match kinds[rng.gen_range(0..kinds.len())] {
        0 => Move::BlowUp {
            eps: if rng.gen_bool(0.5) { 1 } else { -1 },
            w: (0..n).map(|_| rng.gen_range(-bound..=bound)).collect(),
        },
        1 => Move::BlowDown {
            k: blowdownable[rng.gen_range(0..blowdownable.len())],
        },
        2 => {
            let i = rng.gen_range(0..n);
            let mut k = rng.gen_range(0..n - 1);
            if k >= i {
                k += 1;
            }
            Move::HandleSlide {
                i,
                k,
                sign: if rng.gen_bool(0.5) { 1 } else { -1 },
            }
        }
        3 => Move::RolfsenTwist {
            k: zero_unknots[rng.gen_range(0..zero_unknots.len())],
            n: rng.gen_range(-bound..=bound),
        },
        4 => Move::InverseSlamDunk {
            n: rng.gen_range(-bound..=bound),
            a: (0..n).map(|_| rng.gen_range(-bound..=bound)).collect(),
        },
        _ => {
            let (k, u) = dunkable[rng.gen_range(0..dunkable.len())];
            Move::SlamDunk { k, u }
        }
    }
}
