mod common;

use brat_core::bratteli::{
    canonical_premorphism, divide_element, k0_unit_divisor, mu_supernatural, odometer, telescope,
    tower_profile, uhf_diagram, verify_premorphism,
};
use brat_core::catalog::{self, Payload};
use brat_core::{BratteliDiagram, Exponent, SupernaturalNumber, Tail};
use common::{depth_for, enumerate_paths, random_diagram, rng};
use num_bigint::{BigInt, BigUint};
use num_traits::Zero;
use proptest::prelude::*;
use rand::Rng;

fn catalog_diagrams() -> Vec<BratteliDiagram> {
    catalog::all()
        .into_iter()
        .filter_map(|e| match e.payload {
            Payload::Diagram(d) => Some(d),
            Payload::Group(_) => None,
        })
        .collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn heights_count_paths(seed in any::<u64>()) {
        let d = random_diagram(&mut rng(seed), 3, 3, 3);
        let depth = depth_for(&d, 4);
        let profile = tower_profile(&d, depth).unwrap();
        let paths = enumerate_paths(&d, depth);
        for (n, level_paths) in paths.iter().enumerate().take(depth + 1) {
            let heights: Vec<BigUint> = level_paths.iter().map(|&k| BigUint::from(k)).collect();
            prop_assert_eq!(&profile.heights[n], &heights);
        }
    }

    #[test]
    fn gcds_form_a_divisibility_chain(seed in any::<u64>()) {
        let d = random_diagram(&mut rng(seed), 4, 5, 4);
        let depth = depth_for(&d, 10);
        let p = tower_profile(&d, depth).unwrap();
        prop_assert!(p.gcds[0] == BigUint::from(1u32));
        for n in 1..=depth {
            prop_assert!((&p.gcds[n] % &p.gcds[n - 1]).is_zero());
            prop_assert_eq!(&p.gcds[n - 1] * p.ratio(n), p.gcds[n].clone());
        }
    }

    #[test]
    fn canonical_premorphism_commutes(seed in any::<u64>()) {
        let d = random_diagram(&mut rng(seed), 4, 5, 4);
        let depth = depth_for(&d, 8);
        let p = canonical_premorphism(&d, depth).unwrap();
        let o = odometer(&d, depth).unwrap();
        prop_assert_eq!(verify_premorphism(&p, &o, &d, depth), Ok(()));
    }

    #[test]
    fn odometer_is_a_fixed_point(seed in any::<u64>()) {
        let d = random_diagram(&mut rng(seed), 4, 5, 4);
        let depth = depth_for(&d, 8);
        let o = odometer(&d, depth).unwrap();
        prop_assert_eq!(odometer(&o, depth).unwrap(), o.clone());
        let mu_o = mu_supernatural(&o, depth).unwrap();
        prop_assert!(mu_o.exactness.is_certified());
        prop_assert_eq!(mu_o.value, mu_supernatural(&d, depth).unwrap().truncation);
    }

    /// A certified value must not change when twice as many levels are read.
    #[test]
    fn certified_mu_is_stable_at_double_depth(seed in any::<u64>()) {
        let d = random_diagram(&mut rng(seed), 3, 4, 3);
        for depth in [d.last_level(), 6, 10] {
            let depth = depth_for(&d, depth);
            let mu = mu_supernatural(&d, depth).unwrap();
            if !mu.exactness.is_certified() {
                continue;
            }
            let deeper = depth_for(&d, 2 * depth + 2);
            let again = mu_supernatural(&d, deeper).unwrap();
            prop_assert!(again.exactness.is_certified());
            prop_assert_eq!(&again.value, &mu.value);
            prop_assert!(again.truncation.divides(&mu.value));
        }
    }

    #[test]
    fn telescoping_keeps_the_gcds(seed in any::<u64>()) {
        let mut r = rng(seed);
        let d = random_diagram(&mut r, 3, 4, 4);
        let m = d.last_level();
        let mut cuts: Vec<usize> = (1..m.saturating_sub(1)).filter(|_| r.gen_bool(0.5)).collect();
        match d.tail() {
            Tail::None => cuts.push(m),
            Tail::RepeatLast => {
                let a = (m - 1 + r.gen_range(0..3)).max(1);
                if cuts.last().is_some_and(|&c| c >= a) {
                    cuts.retain(|&c| c < a);
                }
                cuts.push(a);
                cuts.push(a + r.gen_range(1..4));
            }
        }
        let t = telescope(&d, &cuts).unwrap();
        let reach = *cuts.last().unwrap();
        let p = tower_profile(&d, reach).unwrap();
        let q = tower_profile(&t, cuts.len()).unwrap();
        for (j, &c) in cuts.iter().enumerate() {
            prop_assert_eq!(&q.heights[j + 1], &p.heights[c]);
        }
        let mu_d = mu_supernatural(&d, depth_for(&d, 24)).unwrap();
        let mu_t = mu_supernatural(&t, depth_for(&t, 24)).unwrap();
        if mu_d.exactness.is_certified() && mu_t.exactness.is_certified() {
            prop_assert_eq!(mu_d.value, mu_t.value);
        }
    }

    #[test]
    fn uhf_round_trip(exps in proptest::collection::vec(0u64..5, 4), omega in proptest::collection::vec(any::<bool>(), 4)) {
        let primes = [2u64, 3, 5, 7];
        let n = SupernaturalNumber::from_prime_powers(primes.iter().zip(exps.iter().zip(&omega)).map(|(&p, (&e, &w))| {
            (BigUint::from(p), if w { Exponent::Omega } else { Exponent::Finite(e) })
        }))
        .unwrap();
        let d = uhf_diagram(&n, 6).unwrap();
        prop_assert_eq!(d.tail(), Tail::RepeatLast);
        let mu = mu_supernatural(&d, 8).unwrap();
        prop_assert!(mu.exactness.is_certified());
        prop_assert_eq!(&mu.value, &n);
        let h = tower_profile(&d, 8).unwrap();
        for j in 1..=8u64 {
            prop_assert_eq!(h.gcds[j as usize].clone(), n.ell(j).unwrap());
        }
    }

    /// If m divides n·g with gcd(m, n) = 1 then m divides g, here already at
    /// the same stage and certainly within three more levels.
    #[test]
    fn coprime_transfer(seed in any::<u64>()) {
        let mut r = rng(seed);
        for d in catalog_diagrams() {
            let depth = depth_for(&d, 8);
            let stage = r.gen_range(0..=depth);
            let g: Vec<BigInt> = (0..d.width(stage)).map(|_| BigInt::from(r.gen_range(0..30u32))).collect();
            for _ in 0..5 {
                let (m, n) = (r.gen_range(1..=20u64), r.gen_range(1..=20u64));
                if num_integer::gcd(m, n) != 1 {
                    continue;
                }
                let ng: Vec<BigInt> = g.iter().map(|x| x * n).collect();
                if divide_element(&d, stage, &ng, m, depth).unwrap().is_some() {
                    let margin = depth_for(&d, depth + 3);
                    prop_assert!(divide_element(&d, stage, &g, m, margin).unwrap().is_some());
                }
            }
        }
    }
}

/// n divides the unit of K_0 exactly when n divides the truncation h_depth.
#[test]
fn unit_divisibility_matches_the_truncation() {
    for d in catalog_diagrams() {
        let depth = depth_for(&d, 12);
        let mu = mu_supernatural(&d, depth).unwrap();
        for n in 1..=200u64 {
            let found = k0_unit_divisor(&d, n, depth).unwrap().is_some();
            let divides = SupernaturalNumber::from_u64(n)
                .unwrap()
                .divides(&mu.truncation);
            assert_eq!(found, divides, "{:?} n={n}", d.name());
        }
    }
}

#[test]
fn canonical_premorphism_on_catalog() {
    for d in catalog_diagrams() {
        let depth = depth_for(&d, 10);
        let p = canonical_premorphism(&d, depth).unwrap();
        assert_eq!(
            verify_premorphism(&p, &odometer(&d, depth).unwrap(), &d, depth),
            Ok(())
        );
    }
}
