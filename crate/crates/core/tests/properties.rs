//! Property suites for the algebraic invariants, driven by proptest.
//!
//! Structured inputs (diagrams, knots, framed states) are generated through
//! the seeded samplers, with proptest supplying and shrinking the seed.

use contact_surgery::diagram::SurgeryDiagram;
use contact_surgery::invariants::{
    d3, d3_difference_integral, rational_classical, spin_structures,
};
use contact_surgery::lens::{
    is_prime, is_square_mod, legendre, neg_continued_fraction, tight_structures, LensSpace,
};
use contact_surgery::linalg::{
    signature, smith_normal_form, solve_affine_mod2, solve_rational, IntMatrix, Mod2Solutions,
    Rational,
};
use contact_surgery::lutz::{d3_shift, gamma_residuals, lutz_extend, TwistChain};
use contact_surgery::sample::{
    random_diagram, random_knot, random_legal_move, random_state, rng_from_seed,
};
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use proptest::prelude::*;
use rand::Rng;

fn small_matrix(max: usize, bound: i64) -> impl Strategy<Value = IntMatrix> {
    (1..=max, 1..=max).prop_flat_map(move |(r, c)| {
        proptest::collection::vec(-bound..=bound, r * c).prop_map(move |data| {
            IntMatrix::from_fn(r, c, |i, j| BigInt::from(data[i * c + j]))
        })
    })
}

fn small_symmetric(max: usize, bound: i64) -> impl Strategy<Value = IntMatrix> {
    (1..=max).prop_flat_map(move |n| {
        proptest::collection::vec(-bound..=bound, n * n).prop_map(move |data| {
            IntMatrix::from_fn(n, n, |i, j| {
                let (a, b) = if i <= j { (i, j) } else { (j, i) };
                BigInt::from(data[a * n + b])
            })
        })
    })
}

proptest! {
    #[test]
    fn snf_determinant_product(m in small_matrix(5, 6)) {
        let snf = smith_normal_form(&m);
        prop_assert!(snf.verifies(&m));
        if m.is_square() {
            let product: BigInt = snf.diagonal().iter().product();
            prop_assert_eq!(m.determinant().abs(), product);
        }
    }

    #[test]
    fn signature_is_additive_on_block_sums(
        a in small_symmetric(4, 4),
        b in small_symmetric(4, 4),
    ) {
        let sum = a.direct_sum(&b);
        prop_assert_eq!(
            signature(&sum).unwrap(),
            signature(&a).unwrap() + signature(&b).unwrap()
        );
    }

    #[test]
    fn rational_solutions_satisfy_the_system(
        m in small_symmetric(4, 4),
        rhs in proptest::collection::vec(-4i64..=4, 4),
    ) {
        let n = m.rows();
        let rhs: Vec<BigInt> = rhs.into_iter().take(n).map(BigInt::from).collect();
        prop_assume!(rhs.len() == n);
        match solve_rational(&m, &rhs).unwrap() {
            Some(b) => {
                for i in 0..n {
                    let lhs: Rational = (0..n)
                        .map(|j| Rational::from(m[(i, j)].clone()) * &b[j])
                        .sum();
                    prop_assert_eq!(lhs, Rational::from(rhs[i].clone()));
                }
            }
            None => {
                // inconsistent iff the augmented matrix has larger rank
                let augmented = IntMatrix::from_fn(n, n + 1, |i, j| {
                    if j < n { m[(i, j)].clone() } else { rhs[i].clone() }
                });
                prop_assert!(
                    contact_surgery::linalg::rational_rank(&augmented)
                        > contact_surgery::linalg::rational_rank(&m)
                );
            }
        }
    }

    #[test]
    fn mod2_solution_count_is_two_to_the_nullity(m in small_matrix(5, 3), d in proptest::collection::vec(0i64..=1, 5)) {
        let rows = m.rows();
        let d: Vec<BigInt> = d.into_iter().take(rows).map(BigInt::from).collect();
        prop_assume!(d.len() == rows);
        if let Mod2Solutions::Enumerated(sols) = solve_affine_mod2(&m, &d).unwrap() {
            prop_assert!(sols.len().is_power_of_two());
            let hom = solve_affine_mod2(&m, &vec![BigInt::zero(); rows]).unwrap();
            let kernel = hom.count_log2().unwrap();
            prop_assert_eq!(sols.len(), 1usize << kernel);
        }
    }

    #[test]
    fn homology_is_permutation_invariant(seed in any::<u64>()) {
        let mut rng = rng_from_seed(seed);
        let d = random_diagram(&mut rng, 4, 3, false);
        let n = d.len();
        // rotate the component order by one
        let perm: Vec<usize> = (0..n).map(|i| (i + 1) % n).collect();
        let components: Vec<_> = perm.iter().map(|&i| d.components()[i].clone()).collect();
        let linking: Vec<Vec<i64>> = perm
            .iter()
            .map(|&i| perm.iter().map(|&j| if i == j { 0 } else { d.lk(i, j) }).collect())
            .collect();
        let permuted = SurgeryDiagram::new(components, linking).unwrap();
        let g1 = d.first_homology();
        let g2 = permuted.first_homology();
        prop_assert_eq!(g1.invariant_factors(), g2.invariant_factors());
        prop_assert_eq!(g1.free_rank(), g2.free_rank());
    }

    #[test]
    fn class_order_divides_group_order(seed in any::<u64>()) {
        let mut rng = rng_from_seed(seed);
        let d = random_diagram(&mut rng, 4, 3, true);
        let h1 = d.first_homology();
        let group_order = h1.order().unwrap();
        let coords: Vec<i64> = (0..d.len()).map(|_| rng.gen_range(-5..=5)).collect();
        let class = d.homology_class(&coords).unwrap();
        let order = h1.element_order(&class).unwrap();
        prop_assert!((&group_order % &order).is_zero());
    }

    #[test]
    fn d3_adds_over_disjoint_unions(seed in any::<u64>()) {
        let mut rng = rng_from_seed(seed);
        let a = random_diagram(&mut rng, 3, 2, true);
        let b = random_diagram(&mut rng, 3, 2, true);
        let union = a.disjoint_union(&b);
        prop_assert_eq!(
            d3(&union).unwrap().value,
            d3(&a).unwrap().value + d3(&b).unwrap().value
        );
    }

    #[test]
    fn d3_is_orientation_insensitive(seed in any::<u64>()) {
        let mut rng = rng_from_seed(seed);
        let d = random_diagram(&mut rng, 4, 3, true);
        let flipped = d.reverse_orientation(rng.gen_range(0..d.len())).unwrap();
        prop_assert_eq!(d3(&d).unwrap().value, d3(&flipped).unwrap().value);
        let g1 = d.first_homology();
        let g2 = flipped.first_homology();
        prop_assert_eq!(g1.invariant_factors(), g2.invariant_factors());
    }

    #[test]
    fn order_one_knots_have_integral_invariants(seed in any::<u64>()) {
        let mut rng = rng_from_seed(seed);
        let d = random_diagram(&mut rng, 3, 2, true);
        let knot = random_knot(&mut rng, d.len(), 3, 2);
        let rc = rational_classical(&d, &knot).unwrap();
        prop_assert_eq!(&rc.sl_q, &(&rc.tb_q + &rc.rot_q));
        if rc.order.is_one() {
            prop_assert!(rc.tb_q.is_integer());
            prop_assert!(rc.rot_q.is_integer());
        }
    }

    #[test]
    fn kirby_moves_preserve_everything_tracked(seed in any::<u64>()) {
        let mut rng = rng_from_seed(seed);
        let mut st = random_state(&mut rng, 4, 3);
        let homology = st.homology_invariants();
        let spins = st.spin_count_log2();
        for _ in 0..4 {
            let mv = random_legal_move(&mut rng, &st, 3);
            st = st.apply(&mv).unwrap();
            prop_assert!(st.is_characteristic());
            prop_assert_eq!(&st.homology_invariants(), &homology);
            prop_assert_eq!(st.spin_count_log2(), spins);
        }
    }

    #[test]
    fn lutz_extension_preserves_determinant(seed in any::<u64>()) {
        let mut rng = rng_from_seed(seed);
        let d = random_diagram(&mut rng, 4, 3, false);
        let knot = random_knot(&mut rng, d.len(), 3, 2);
        let e = lutz_extend(&d, &knot).unwrap();
        prop_assert_eq!(
            d.linking_matrix().determinant().abs(),
            e.extended.linking_matrix().determinant().abs()
        );
    }

    // The Gamma difference formula needs no nondegeneracy; exercise it on
    // arbitrary (possibly degenerate) bases.
    #[test]
    fn gamma_identity_holds_on_degenerate_bases(seed in any::<u64>()) {
        let mut rng = rng_from_seed(seed);
        let d = random_diagram(&mut rng, 4, 2, false);
        let knot = random_knot(&mut rng, d.len(), 3, 2);
        let e = lutz_extend(&d, &knot).unwrap();
        let h1 = d.first_homology();
        let (_, residuals) = gamma_residuals(&e, &h1).unwrap();
        prop_assert!(residuals.iter().all(|r| r.is_zero()));
    }

    #[test]
    fn d3_shifts_compose_additively(seed in any::<u64>(), m1 in 0u64..3, m2 in 0u64..3) {
        let mut rng = rng_from_seed(seed);
        let d = random_diagram(&mut rng, 3, 2, true);
        let base = d3(&d).unwrap().value;
        let shifted = d3_shift(&d3_shift(&d, m1), m2);
        let expected = base
            + Rational::from(BigInt::from(1 + 2 * m1 as i64))
            + Rational::from(BigInt::from(1 + 2 * m2 as i64));
        prop_assert_eq!(d3(&shifted).unwrap().value, expected);
    }

    #[test]
    fn twist_chain_d3_matches_rational_self_linking(seed in any::<u64>()) {
        let mut rng = rng_from_seed(seed);
        let d = random_diagram(&mut rng, 3, 2, true);
        let knot = random_knot(&mut rng, d.len(), 3, 2);
        let mut chain = TwistChain::new(d.clone());
        chain.twist(&knot).unwrap();
        let fp = chain.fingerprint().unwrap();
        let sl = rational_classical(&d, &knot).unwrap().sl_q;
        let base = d3(&d).unwrap().value;
        prop_assert_eq!(&fp.d3 - &base, -sl);
        prop_assert!(d3_difference_integral(&fp.d3, &fp.d3));
    }

    #[test]
    fn tight_structure_count_is_the_expansion_product(p in 2u64..40, q_pick in any::<u64>()) {
        let candidates: Vec<u64> =
            (1..p).filter(|&q| num_integer::gcd(p, q) == 1).collect();
        let q = candidates[(q_pick % candidates.len() as u64) as usize];
        let l = LensSpace::new(p, q).unwrap();
        let expansion = neg_continued_fraction(p, q).unwrap();
        let expected: u64 = expansion.iter().map(|&a| a - 1).product();
        let diagrams = tight_structures(&l);
        prop_assert_eq!(diagrams.len() as u64, expected);
        for d in &diagrams {
            prop_assert_eq!(d.first_homology().order(), Some(BigInt::from(p)));
            prop_assert_eq!(spin_structures(d).len(), if p % 2 == 0 { 2 } else { 1 });
        }
    }

    #[test]
    fn square_detection_agrees_with_legendre(p_pick in 0usize..45, a in -50i64..50) {
        let odd_primes: Vec<u64> = (3..200).filter(|&n| is_prime(n)).collect();
        let p = odd_primes[p_pick % odd_primes.len()];
        let symbol = legendre(a, p).unwrap();
        let square = is_square_mod(a, p);
        if symbol == 0 {
            prop_assert!(square); // 0 is a square
        } else {
            prop_assert_eq!(symbol == 1, square);
        }
    }

    #[test]
    fn minus_one_square_iff_one_mod_four(p_pick in 0usize..45) {
        let odd_primes: Vec<u64> = (3..200).filter(|&n| is_prime(n)).collect();
        let p = odd_primes[p_pick % odd_primes.len()];
        prop_assert_eq!(legendre(-1, p).unwrap() == 1, p % 4 == 1);
    }
}
