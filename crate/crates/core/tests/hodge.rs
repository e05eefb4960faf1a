use proptest::prelude::*;
use stparam::hodge::{forward, forward_extended, jacobian_kernel_dim, reconstruct, HodgeParameter, NonCritical};
use stparam::linalg::{q, qr};
use stparam::shape::compositions;
use stparam::{rng, Error, Matrix, Perm, SemistableShape};

fn gl3() -> HodgeParameter {
    let sh = SemistableShape::with_lengths(5, &[2, 1]).unwrap();
    let l = Matrix::from_rows(vec![vec![q(1), q(2), qr(-1, 3)], vec![q(0), q(1), q(1)], vec![q(0), q(0), q(1)]]);
    HodgeParameter::new(sh, l).unwrap()
}

fn param(max_n: usize) -> impl Strategy<Value = HodgeParameter> {
    ((1usize..=max_n).prop_flat_map(|n| prop::sample::select(compositions(n))), any::<u64>(), 0.0f64..1.0).prop_map(
        |(lengths, seed, link)| {
            let mut r = rng::trial_rng(seed, 0);
            let sh = rng::random_shape(&mut r, 5, &lengths, link).unwrap();
            rng::random_param(&mut r, &sh, 9).unwrap()
        },
    )
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn torus_action_preserves_invariants(p in param(5), seed in any::<u64>()) {
        let z = rng::random_torus(&mut rng::trial_rng(seed, 1), p.shape().s(), 9);
        let pz = p.z_action(&z).unwrap();
        prop_assert!(pz.equivalent(&p).unwrap());
        prop_assert_eq!(pz.normalize().unwrap(), p.normalize().unwrap());
        prop_assert_eq!(pz.p_cr().unwrap(), p.p_cr().unwrap());
        for u in p.reps() {
            prop_assert_eq!(pz.p_ref_u(&u).unwrap(), p.p_ref_u(&u).unwrap());
        }
    }

    #[test]
    fn normalize_is_idempotent(p in param(6)) {
        let n1 = p.normalize().unwrap();
        prop_assert!(n1.is_normalized());
        prop_assert_eq!(n1.normalize().unwrap(), n1);
    }

    #[test]
    fn dual_is_an_involution(p in param(6)) {
        prop_assert_eq!(p.dual().dual(), p.clone());
        prop_assert_eq!(p.dual().shape().clone(), p.shape().dual());
    }

    #[test]
    fn round_trip(p in param(5)) {
        let ext = forward_extended(&p).unwrap();
        let back = reconstruct(&ext).unwrap();
        prop_assert!(back.equivalent(&p).unwrap());
        prop_assert_eq!(forward_extended(&back).unwrap(), ext);
    }

    #[test]
    fn kernel_is_the_torus_tangent(p in param(5)) {
        prop_assert_eq!(jacobian_kernel_dim(&p).unwrap(), p.shape().s() - 1);
    }
}

#[test]
fn gl3_sample_is_non_critical() {
    let p = gl3();
    assert_eq!(p.check_non_critical(), NonCritical::Ok);
    assert!(p.is_normalized());
    assert_eq!(p.reps().len(), 3);
    assert_eq!(jacobian_kernel_dim(&p).unwrap(), 1);
}

#[test]
fn vanishing_corner_is_critical() {
    let sh = SemistableShape::with_lengths(3, &[1, 1]).unwrap();
    let l = Matrix::from_rows(vec![vec![q(1), q(0)], vec![q(0), q(1)]]);
    let p = HodgeParameter::new(sh, l).unwrap();
    assert_eq!(p.check_non_critical(), NonCritical::FailureAt(Perm::s(2, 1), 1));
    assert!(matches!(p.normalize(), Err(Error::BoundaryEntryZero(1))));
}

#[test]
fn non_unipotent_is_rejected() {
    let sh = SemistableShape::with_lengths(3, &[1, 1]).unwrap();
    let l = Matrix::from_rows(vec![vec![q(2), q(1)], vec![q(0), q(1)]]);
    assert!(matches!(HodgeParameter::new(sh, l), Err(Error::InvalidParameter(_))));
}

#[test]
fn forward_is_deterministic() {
    assert_eq!(forward(&gl3()).unwrap(), forward(&gl3()).unwrap());
    assert_eq!(forward_extended(&gl3()).unwrap(), forward_extended(&gl3()).unwrap());
}

#[test]
fn tampered_bundle_is_inconsistent() {
    let mut ext = forward_extended(&gl3()).unwrap();
    let w = ext.windows.get_mut(&(1, 2)).unwrap();
    w.levi[0].blocks[0].set(0, 1, q(17));
    assert!(matches!(reconstruct(&ext), Err(Error::DataInconsistent(_))));
}

#[test]
fn gl3_refinement_data() {
    let p = gl3();
    let c1 = Perm::s(3, 2).compose(&Perm::s(3, 1));
    let at_id = p.p_ref_u(&Perm::identity(3)).unwrap();
    let at_c1 = p.p_ref_u(&c1).unwrap();
    assert_eq!(*at_id.blocks[0].get(0, 1), q(2));
    assert_eq!(*at_c1.blocks[1].get(0, 1), qr(-1, 3));
    let at_s2 = p.p_ref_u(&Perm::s(3, 2)).unwrap();
    assert!(at_s2.blocks.iter().all(|b| b.rows() == 1));
}
