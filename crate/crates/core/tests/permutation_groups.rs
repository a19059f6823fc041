//! Random permutation groups checked against brute force from the
//! multiplication table.

use std::collections::BTreeSet;

use proptest::prelude::*;

use orderinv_core::group::{FiniteGroup, PermutationGenSet, DEFAULT_ORDER_CAP};
use orderinv_core::matcher::{find_divisibility_matching, verify_matching, MatchStatus};
use orderinv_core::stats::{self, frobenius_table};
use orderinv_core::structure::{is_cyclic, is_nilpotent, is_solvable};
use orderinv_core::verify::{count_cyclic_subgroups_brute, Subject};
use orderinv_core::{ExactScalar, OrderProfile};

fn permutation(degree: usize) -> impl Strategy<Value = Vec<usize>> {
    Just((0..degree).collect::<Vec<_>>()).prop_shuffle()
}

fn group() -> impl Strategy<Value = FiniteGroup> {
    (1usize..=5)
        .prop_flat_map(|d| prop::collection::vec(permutation(d), 1..=2).prop_map(move |gens| (d, gens)))
        .prop_map(|(degree, generators)| {
            FiniteGroup::from_permutations(&PermutationGenSet { degree, generators }, "P", DEFAULT_ORDER_CAP).unwrap()
        })
}

fn brute_order(g: &FiniteGroup, x: usize) -> u64 {
    let mut k = 1;
    let mut y = x;
    while y != 0 {
        y = g.mul(y, x);
        k += 1;
    }
    k
}

fn commutator(g: &FiniteGroup, x: usize, y: usize) -> usize {
    g.mul(g.mul(g.inv(x), g.inv(y)), g.mul(x, y))
}

fn brute_nilpotent(g: &FiniteGroup) -> bool {
    let all: Vec<usize> = g.elements().collect();
    let mut z = BTreeSet::from([0]);
    loop {
        let next: BTreeSet<usize> =
            all.iter().copied().filter(|&x| all.iter().all(|&y| z.contains(&commutator(g, x, y)))).collect();
        if next.len() == all.len() {
            return true;
        }
        if next == z {
            return false;
        }
        z = next;
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn statistics_match_brute_force(g in group(), r in -3i64..=3, s in -3i64..=3, pick in 0usize..64) {
        let n = g.order() as u64;
        let orders: Vec<u64> = g.elements().map(|x| brute_order(&g, x)).collect();
        prop_assert_eq!(orders.as_slice(), g.element_orders());
        let p = OrderProfile::of_group(&g);
        let divs: Vec<u64> = (1..=n).filter(|d| n % d == 0).collect();
        let table = frobenius_table(&p).unwrap();
        for &m in &divs {
            let b = g.elements().filter(|&x| g.pow(x, m) == 0).count() as u64;
            prop_assert_eq!(table.solutions(m), b);
            prop_assert_eq!(b % m, 0);
        }
        let k = divs[pick % divs.len()];
        let (r, s) = (ExactScalar::from_integer(r), ExactScalar::from_integer(s));
        prop_assert_eq!(
            stats::r_functional(&p, k, &r, &s).unwrap(),
            stats::r_functional_by_elements(&g, k, &r, &s).unwrap()
        );
        prop_assert_eq!(
            stats::cyclic_subgroup_count(&p, n).unwrap(),
            count_cyclic_subgroups_brute(&g) as u64
        );
        prop_assert_eq!(stats::product_of_orders(&p).unwrap(), stats::product_of_orders_direct(&p).unwrap());
    }

    #[test]
    fn structure_and_verdicts(g in group()) {
        prop_assert_eq!(is_nilpotent(&g), brute_nilpotent(&g));
        prop_assert_eq!(is_cyclic(&g), g.elements().any(|x| brute_order(&g, x) == g.order() as u64));
        prop_assert!(!is_cyclic(&g) || is_nilpotent(&g));
        prop_assert!(!is_nilpotent(&g) || is_solvable(&g));
        let subject = Subject::new(&g);
        prop_assert!(subject.check_min_cyclic_subgroups().unwrap().consistent);
        prop_assert!(subject.check_product_theorem().unwrap().consistent);
        prop_assert!(subject.check_nilpotent_t11().unwrap().consistent);
        let p = OrderProfile::of_group(&g);
        let m = find_divisibility_matching(&p);
        if is_solvable(&g) {
            prop_assert_eq!(m.status, MatchStatus::Found);
        }
        if m.status == MatchStatus::Found {
            prop_assert!(verify_matching(&p, &m));
        }
    }
}
