use std::collections::BTreeSet;

use proptest::prelude::*;
use stparam::shape::compositions;
use stparam::weyl::{self, Perm};

fn set(v: &[usize]) -> BTreeSet<usize> {
    v.iter().copied().collect()
}

#[test]
fn gl3_cosets() {
    let reps = weyl::enumerate_min_coset_reps(3, &set(&[1])).reps;
    let lines: Vec<Vec<usize>> = reps.iter().map(|u| u.one_line()).collect();
    assert_eq!(lines.len(), 3);
    let s2s1 = Perm::s(3, 2).compose(&Perm::s(3, 1));
    assert_eq!(s2s1.one_line(), vec![3, 1, 2]);
    for u in [Perm::identity(3), Perm::s(3, 2), s2s1] {
        assert!(lines.contains(&u.one_line()));
    }
}

#[test]
fn counts_match_brute_force_up_to_six() {
    for n in 1..=6 {
        for lengths in compositions(n) {
            let s0 = weyl::set_of_blocks(&lengths);
            let fast = weyl::enumerate_min_coset_reps(n, &s0).reps;
            let brute = weyl::min_coset_reps_brute(n, &s0);
            let a: BTreeSet<Vec<usize>> = fast.iter().map(|u| u.one_line()).collect();
            let b: BTreeSet<Vec<usize>> = brute.iter().map(|u| u.one_line()).collect();
            assert_eq!(a, b, "{lengths:?}");
            assert_eq!(fast.len() as u128, weyl::multinomial_count(&lengths));
        }
    }
}

#[test]
fn r_plus_endpoints() {
    for n in 1..=6 {
        for lengths in compositions(n) {
            let s0 = weyl::set_of_blocks(&lengths);
            assert_eq!(weyl::r_plus(&Perm::identity(n), &s0).len(), s0.len());
            assert_eq!(weyl::r_plus(&weyl::w0_s0(&lengths), &s0).len(), s0.len());
        }
    }
}

fn perm(n: usize) -> impl Strategy<Value = Perm> {
    Just((0..n).collect::<Vec<usize>>()).prop_shuffle().prop_map(Perm::from_images)
}

proptest! {
    #[test]
    fn inverse_and_length(u in (1usize..=7).prop_flat_map(perm)) {
        let n = u.n();
        prop_assert!(u.compose(&u.inverse()).is_identity());
        prop_assert_eq!(u.inverse().length(), u.length());
        prop_assert!(u.length() <= weyl::longest(n).length());
    }

    #[test]
    fn matrices_are_homomorphic(u in perm(5), v in perm(5)) {
        let m: stparam::Matrix<stparam::Scalar> = u.compose(&v).matrix();
        prop_assert_eq!(m, u.matrix().mul(&v.matrix()));
    }

    #[test]
    fn reps_are_minimal_in_their_coset(lengths in (1usize..=6).prop_flat_map(|n| prop::sample::select(compositions(n)))) {
        let n = lengths.iter().sum();
        let s0 = weyl::set_of_blocks(&lengths);
        for u in weyl::enumerate_min_coset_reps(n, &s0).reps {
            for i in &s0 {
                prop_assert!(Perm::s(n, *i).compose(&u).length() > u.length());
            }
        }
    }
}
