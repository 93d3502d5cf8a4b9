//! Acceptance suite: one test per criterion, each printing a PASS line.
//! All comparisons are exact; there are no tolerances anywhere.
//!
//! Run with `cargo test --test acceptance -- --nocapture` to see the lines.

use contact_surgery::diagram::SurgeryDiagram;
use contact_surgery::invariants::{
    d3, gamma_meridian, plane_field_fingerprint, spin_structures,
};
use contact_surgery::lens::{
    d3_determines_gamma_experiment, integral_obstruction, is_prime, legendre, search_pairs,
    tight_structures, LensSpace, Obstruction,
};
use contact_surgery::linalg::{smith_normal_form, IntMatrix, Rational};
use contact_surgery::lutz::{d3_shift, lutz_extend, schur_checks, verify_lutz_identities};
use contact_surgery::sample::{
    random_diagram, random_knot, random_legal_move, random_state, rng_from_seed,
};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use rand::Rng;

fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

fn pass(number: usize, name: &str) {
    println!("acceptance criterion {number} ({name}): PASS");
}

#[test]
fn criterion_1_normalization() {
    let value = d3(&SurgeryDiagram::empty()).unwrap().value;
    assert!(value.is_zero(), "d3 of the empty diagram must be exactly 0");
    pass(1, "d3 normalization on the empty diagram");
}

#[test]
fn criterion_2_xi1_reproduction() {
    let xi1 = d3_shift(&SurgeryDiagram::empty(), 0);
    assert_eq!(
        xi1.linking_matrix().determinant().abs(),
        BigInt::one(),
        "the Lutz pair on the standard unknot must present the 3-sphere"
    );
    assert!(xi1.first_homology().is_trivial());
    assert_eq!(d3(&xi1).unwrap().value, rat(1, 1));
    pass(2, "Lutz pair on the unknot gives S^3 with d3 = 1");
}

#[test]
fn criterion_3_lutz_oracle_suite() {
    let mut rng = rng_from_seed(0x1507);
    for case in 0..1000 {
        let base = random_diagram(&mut rng, 4, 3, true);
        let knot = random_knot(&mut rng, base.len(), 5, 3);
        let report = verify_lutz_identities(&base, &knot)
            .unwrap_or_else(|e| panic!("case {case}: oracle errored: {e}"));
        assert!(
            report.d3_residual.is_zero(),
            "case {case}: d3 difference != -sl_Q (residual {})",
            report.d3_residual
        );
        assert!(
            report.gamma_residuals.iter().all(|r| r.is_zero()),
            "case {case}: Gamma difference != [alpha] at some spin structure"
        );
        let extension = lutz_extend(&base, &knot).unwrap();
        let schur = schur_checks(&extension).unwrap();
        assert!(
            schur.all_pass(),
            "case {case}: Schur checks failed: {schur:?}"
        );
    }
    pass(3, "1000 random Lutz twists verify both difference formulas exactly");
}

#[test]
fn criterion_4_kirby_suite() {
    let mut rng = rng_from_seed(0x4b1b);
    for case in 0..500 {
        let mut state = random_state(&mut rng, 5, 3);
        let homology = state.homology_invariants();
        let spin_log2 = state.spin_count_log2();
        let moves = rng.gen_range(1..=10);
        for step in 0..moves {
            let mv = random_legal_move(&mut rng, &state, 3);
            let next = state
                .apply(&mv)
                .unwrap_or_else(|e| panic!("case {case} step {step}: illegal move {mv:?}: {e}"));
            assert!(
                next.is_characteristic(),
                "case {case} step {step}: sublink stopped being characteristic"
            );
            assert_eq!(
                next.homology_invariants(),
                homology,
                "case {case} step {step}: invariant factors changed under {mv:?}"
            );
            assert_eq!(next.spin_count_log2(), spin_log2);

            // inverse pairs, exercised at the freshly appended components
            match &mv {
                contact_surgery::kirby::Move::BlowUp { .. } => {
                    assert_eq!(next.blow_down(state.len()).unwrap(), state);
                }
                contact_surgery::kirby::Move::InverseSlamDunk { .. } => {
                    assert_eq!(
                        next.slam_dunk(state.len(), state.len() + 1).unwrap(),
                        state
                    );
                }
                _ => {}
            }
            state = next;
        }
    }
    pass(4, "500 random move sequences preserve sublinks, homology, inverses");
}

#[test]
fn criterion_5_lens_three_one_witness() {
    let l = LensSpace::new(3, 1).unwrap();
    let diagrams = tight_structures(&l);
    assert_eq!(diagrams.len(), 2, "L(3,1) carries exactly two tight structures");
    let fp0 = plane_field_fingerprint(&diagrams[0]).unwrap();
    let fp1 = plane_field_fingerprint(&diagrams[1]).unwrap();
    assert_eq!(fp0.d3.value, rat(1, 6));
    assert_eq!(fp1.d3.value, rat(1, 6));
    let h1 = diagrams[0].first_homology();
    let mu = h1.class(&[1]).unwrap();
    let two_mu = h1.class(&[2]).unwrap();
    let gammas = [fp0.gammas[0].clone(), fp1.gammas[0].clone()];
    assert!(gammas.contains(&mu) && gammas.contains(&two_mu));
    assert_ne!(fp0.gammas[0], fp1.gammas[0]);
    pass(5, "two tight L(3,1) structures share d3 = 1/6 with Gamma mu vs 2mu");
}

#[test]
fn criterion_6_z2_biconditional() {
    let z2 = d3_determines_gamma_experiment(&LensSpace::new(2, 1).unwrap(), 50);
    assert!(z2.samples.len() >= 50);
    assert!(
        z2.biconditional_holds(),
        "L(2,1): integral d3 difference must coincide with Gamma equality; \
         counterexamples: {:?}",
        z2.counterexamples
    );
    for (p, q) in [(3u64, 1u64), (4, 1)] {
        let report = d3_determines_gamma_experiment(&LensSpace::new(p, q).unwrap(), 50);
        assert!(report.samples.len() >= 50);
        assert!(
            !report.biconditional_holds(),
            "L({p},{q}): expected at least one equal-d3 / distinct-Gamma pair"
        );
    }
    pass(6, "d3 determines Gamma on L(2,1) and fails to on L(3,1), L(4,1)");
}

/// Brute-force residue verifier, independent of `is_square_mod`: builds the
/// full set of squares mod m.
fn square_set(m: u64) -> Vec<bool> {
    let mut set = vec![false; m as usize];
    for x in 0..m {
        set[((x as u128 * x as u128) % m as u128) as usize] = true;
    }
    set
}

fn verify_square(a: i64, m: u64) -> bool {
    square_set(m)[a.rem_euclid(m as i64) as usize]
}

#[test]
fn criterion_7_lens_pair_search() {
    let certificates = search_pairs(50);
    assert!(
        certificates
            .iter()
            .any(|c| c.first.p() == 3 && c.second.p() == 7),
        "the (3, 7) prime pair must appear"
    );
    for cert in &certificates {
        let (p, q) = (cert.first.p(), cert.first.q());
        let (p2, q2) = (cert.second.p(), cert.second.q());
        assert!(cert.all_conditions_hold());
        // independent brute-force re-verification of all five conditions
        assert_eq!(
            num_integer::gcd(p, p2),
            1,
            "condition 1 fails for {cert:?}"
        );
        assert!(verify_square(-(p as i64) * q2 as i64, p2), "condition 2");
        assert!(verify_square(-(p2 as i64) * q as i64, p), "condition 3");
        assert!(!verify_square(-1, p2), "condition 4");
        assert!(!verify_square(-1, p), "condition 5");
        assert_eq!(
            integral_obstruction(&cert.first, &cert.second),
            Obstruction::NotObstructed
        );
    }
    pass(7, "search_pairs(50): all certificates re-verify, (3,7) present");
}

#[test]
fn criterion_8_fintushel_stern_recovery() {
    let l = LensSpace::new(5, 2).unwrap();
    assert_eq!(
        integral_obstruction(&l, &LensSpace::sphere()),
        Obstruction::Obstructed
    );
    pass(8, "L(5,2) vs S^3 is obstructed from a single integral surgery");
}

#[test]
fn criterion_9a_snf_reconstruction() {
    let mut rng = rng_from_seed(0x54f1);
    for case in 0..1000 {
        let rows = rng.gen_range(1..=6);
        let cols = rng.gen_range(1..=6);
        let m = IntMatrix::from_fn(rows, cols, |_, _| BigInt::from(rng.gen_range(-9..=9i64)));
        let snf = smith_normal_form(&m);
        assert!(snf.verifies(&m), "case {case}: U M V != S");
        assert_eq!(snf.u.determinant().abs(), BigInt::one(), "case {case}");
        assert_eq!(snf.v.determinant().abs(), BigInt::one(), "case {case}");
        let diag = snf.diagonal();
        assert!(diag.iter().all(|d| !d.is_negative()), "case {case}");
        let mut seen_zero = false;
        for pair in diag.windows(2) {
            if pair[0].is_zero() {
                seen_zero = true;
            }
            if seen_zero {
                assert!(pair[1].is_zero(), "case {case}: zeros must trail");
            } else if !pair[1].is_zero() {
                assert!(
                    pair[1].mod_floor(&pair[0]).is_zero(),
                    "case {case}: divisibility chain broken"
                );
            }
        }
    }
    pass(9, "SNF reconstruction (1000 random matrices)");
}

#[test]
fn criterion_9b_legendre_properties() {
    let odd_primes: Vec<u64> = (3..200).filter(|&n| is_prime(n)).collect();
    let mut rng = rng_from_seed(0x1e9e);
    for _ in 0..1000 {
        let p = odd_primes[rng.gen_range(0..odd_primes.len())];
        let a = rng.gen_range(1..p) as i64;
        let b = rng.gen_range(1..p) as i64;
        assert_eq!(
            legendre(a * b, p).unwrap(),
            legendre(a, p).unwrap() * legendre(b, p).unwrap()
        );
    }
    // zero sum over a full period, for 1000 sampled primes
    for _ in 0..1000 {
        let p = odd_primes[rng.gen_range(0..odd_primes.len())];
        let sum: i64 = (1..p).map(|q| legendre(q as i64, p).unwrap() as i64).sum();
        assert_eq!(sum, 0, "legendre symbols over 1..{p} must cancel");
    }
    pass(9, "Legendre multiplicativity and zero sum (1000 instances each)");
}

#[test]
fn criterion_9c_spin_count_matches_even_factors() {
    let mut rng = rng_from_seed(0x59c7);
    for case in 0..1000 {
        let d = random_diagram(&mut rng, 4, 3, true);
        let spins = spin_structures(&d);
        let even_factors = d
            .first_homology()
            .invariant_factors()
            .iter()
            .filter(|f| f.mod_floor(&BigInt::from(2)).is_zero())
            .count();
        assert_eq!(
            spins.len(),
            1 << even_factors,
            "case {case}: spin count vs even invariant factors"
        );
    }
    pass(9, "spin structure count = 2^(even invariant factors) (1000 diagrams)");
}

#[test]
fn criterion_9d_gamma_numerator_evenness() {
    let mut rng = rng_from_seed(0x93a2);
    for case in 0..1000 {
        let d = random_diagram(&mut rng, 4, 3, false);
        let q = d.linking_matrix();
        for s in spin_structures(&d) {
            // direct evenness check, not via the invariant code path
            for i in 0..d.len() {
                let mut v = BigInt::from(d.components()[i].rot);
                for j in s.indices() {
                    v += &q[(i, j)];
                }
                assert!(
                    v.mod_floor(&BigInt::from(2)).is_zero(),
                    "case {case}: odd Gamma numerator entry"
                );
            }
            gamma_meridian(&d, &s).expect("characteristic sublink halves");
        }
    }
    pass(9, "Gamma numerator evenness (1000 diagrams, all spin structures)");
}

#[test]
fn criterion_9e_doubled_gamma_is_spin_independent() {
    let mut rng = rng_from_seed(0x2ca3);
    let mut checked = 0usize;
    while checked < 1000 {
        let d = random_diagram(&mut rng, 4, 3, false);
        let h1 = d.first_homology();
        let spins = spin_structures(&d);
        let doubles: Vec<_> = spins
            .iter()
            .map(|s| {
                let g = h1
                    .class_big(&gamma_meridian(&d, s).unwrap())
                    .unwrap();
                h1.double(&g)
            })
            .collect();
        for pair in doubles.windows(2) {
            assert_eq!(pair[0], pair[1], "2 Gamma must not depend on the spin structure");
        }
        checked += spins.len();
    }
    pass(9, "doubled Gamma (Euler class) is spin independent (1000 instances)");
}
