use fairmatch::mechanism::{build_lottery, egalitarian_divisible, egalitarian_lp, solve_indivisible, Lottery};
use fairmatch::oracle::generate::{all_small_instances, automorphisms, instance_from, random_connected};
use fairmatch::oracle::{self, enumerate_bmatchings};
use fairmatch::rational::{frac, int};
use fairmatch::{
    contract_matching, expand_nodes, ged_decompose, lift_bmatching, max_bmatching, max_matching, Rational,
    UtilityProfile,
};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[test]
fn lift_then_contract_is_identity() {
    let mut checked = 0;
    for inst in all_small_instances(4, 2) {
        let expanded = expand_nodes(&inst).unwrap();
        for m in enumerate_bmatchings(&inst, 1 << 16).unwrap() {
            let unit = lift_bmatching(&expanded, &m).unwrap();
            assert_eq!(contract_matching(&expanded, &unit), m, "{}", inst.name());
            checked += 1;
        }
    }
    assert!(checked > 1000);
}

#[test]
fn maximum_sizes_agree_across_the_expansion() {
    for inst in all_small_instances(5, 2) {
        let expanded = expand_nodes(&inst).unwrap();
        let unit = max_matching(expanded.unit_instance()).unwrap();
        let b = max_bmatching(&inst).unwrap();
        assert_eq!(2 * unit.size() as u64, b.total_utility(), "{}", inst.name());
        assert_eq!(contract_matching(&expanded, &unit).total_utility(), b.total_utility());
    }
}

#[test]
fn over_demanded_agents_saturated_in_every_maximum_profile() {
    for inst in all_small_instances(5, 2) {
        let ged = ged_decompose(&inst).unwrap();
        let pareto = oracle::pareto_profiles(&inst).unwrap();
        for p in &pareto.profiles {
            for &j in &ged.over {
                assert_eq!(p[j], inst.peak(j), "{}: {p:?}", inst.name());
            }
        }
    }
}

#[test]
fn equals_are_treated_equally() {
    for inst in all_small_instances(5, 2) {
        let x = solve_indivisible(&inst).unwrap().profile;
        let div = egalitarian_divisible(&inst).unwrap().profile;
        for perm in automorphisms(&inst) {
            for (i, &j) in perm.iter().enumerate() {
                assert_eq!(x.values()[i], x.values()[j], "{}", inst.name());
                assert_eq!(div.values()[i], div.values()[j], "{}", inst.name());
            }
        }
    }
}

#[test]
fn divisible_dominates_indivisible() {
    // Every lottery is a fractional exchange, so the divisible profile weakly Lorenz-dominates.
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for n in 2..=8 {
        for _ in 0..20 {
            let inst = random_connected(&mut rng, n, 3, 0.4);
            let div = egalitarian_divisible(&inst).unwrap().profile;
            let ind = solve_indivisible(&inst).unwrap().profile;
            assert!(oracle::lorenz_dominates(&div, &ind).unwrap(), "{}", inst.to_json());
        }
    }
}

#[test]
fn lorenz_order_is_a_preorder_on_small_profiles() {
    let inst = instance_from("three", &[3, 3, 3], &[(0, 1), (1, 2)]);
    let values = [frac(0, 1), frac(1, 2), int(1), frac(3, 2), int(2)];
    let mut profiles = Vec::new();
    for a in values {
        for b in values {
            for c in values {
                profiles.push(UtilityProfile::for_instance(&inst, vec![a, b, c]).unwrap());
            }
        }
    }
    let dom = |z: &UtilityProfile, w: &UtilityProfile| oracle::lorenz_dominates(z, w).unwrap();
    for z in &profiles {
        assert!(dom(z, z));
    }
    for z in profiles.iter().step_by(7) {
        for w in profiles.iter().step_by(5) {
            if dom(z, w) && dom(w, z) {
                let (mut a, mut b) = (z.values().to_vec(), w.values().to_vec());
                a.sort();
                b.sort();
                assert_eq!(a, b);
            }
            for v in profiles.iter().step_by(11) {
                if dom(z, w) && dom(w, v) {
                    assert!(dom(z, v));
                }
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(60))]

    #[test]
    fn pipeline_is_consistent_on_larger_instances(seed in any::<u64>(), n in 2usize..=12, peak in 1u32..=4) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let inst = random_connected(&mut rng, n, peak, 0.3);
        let sol = solve_indivisible(&inst).unwrap();
        prop_assert_eq!(&egalitarian_lp(&sol.construction), &sol.profile);

        let best = max_bmatching(&inst).unwrap().total_utility();
        prop_assert_eq!(sol.profile.total(), int(best as i128));

        let (lottery, combo) = build_lottery(&inst, &sol).unwrap();
        prop_assert!(combo.verify(&sol.construction.net, &sol.fill.flow).is_ok());
        prop_assert_eq!(Lottery::expectation(&inst, &lottery.entries), sol.profile.values().to_vec());
        let mass: Rational = lottery.entries.iter().map(|(_, p)| *p).sum();
        prop_assert_eq!(mass, int(1));
        for (m, p) in &lottery.entries {
            prop_assert!(*p > int(0));
            prop_assert!(m.is_feasible(&inst));
            prop_assert_eq!(m.total_utility(), best);
        }
    }
}
