use proptest::prelude::*;
use rand::{rngs::StdRng, SeedableRng};
use spinlocal_core::thetadef::*;

#[test]
fn tabulated_counts() {
    let z5 = ZLattice::standard(5);
    assert_eq!(short_vectors(&z5, 0), vec![vec![0; 5]]);
    assert_eq!(short_vectors(&z5, 1).len(), 11);
    assert_eq!(short_vectors(&z5, 2).len(), 51);
    assert_eq!(rep_number(&z5, GramTarget::One(1)).unwrap(), 10);
    assert_eq!(rep_number(&z5, GramTarget::One(2)).unwrap(), 40);
    assert_eq!(rep_number(&z5, GramTarget::Two(1, 0, 1)).unwrap(), 80);
    assert_eq!(rep_number(&z5, GramTarget::Two(0, 0, 0)).unwrap(), 1);
    assert!(rep_number(&z5, GramTarget::Two(1, 2, 1)).is_err());
}

#[test]
fn suite_passes() {
    let mut rng = StdRng::seed_from_u64(3);
    for c in theta_checks(4, &mut rng).unwrap() {
        assert!(c.pass, "{c:?}");
    }
}

#[test]
fn rejects_indefinite() {
    assert!(ZLattice::new(vec![vec![0, 1], vec![1, 0]]).is_err());
    assert!(ZLattice::new(vec![vec![1, 2], vec![0, 1]]).is_err());
    let z2 = ZLattice::standard(2);
    assert!(z2.base_change(&[vec![2, 0], vec![0, 1]]).is_err());
}

#[test]
fn a2_lattice_series() {
    // hexagonal lattice: 6 minimal vectors of norm 2, 6 of norm 6
    let a2 = ZLattice::new(vec![vec![2, 1], vec![1, 2]]).unwrap();
    let r = theta_series(&a2, 8);
    assert_eq!(r, vec![1, 0, 6, 0, 0, 0, 6, 0, 6]);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]
    #[test]
    fn pruned_equals_box(a in 1i64..4, b in -1i64..2, c in 1i64..4, e in 1i64..4, bound in 0i64..7) {
        let g = vec![vec![a + 1, b, 0], vec![b, c + 1, 0], vec![0, 0, e]];
        if let Ok(l) = ZLattice::new(g) {
            prop_assert_eq!(short_vectors(&l, bound), short_vectors_box(&l, bound).unwrap());
        }
    }

    #[test]
    fn pair_counts_agree(t11 in 0i64..3, t12 in -1i64..2, t22 in 0i64..3) {
        let t = GramTarget::Two(t11, t12, t22);
        let l = ZLattice::new(vec![vec![2, 1, 0, 0], vec![1, 2, 0, 0], vec![0, 0, 1, 0], vec![0, 0, 0, 1]]).unwrap();
        if t.is_psd() {
            prop_assert_eq!(rep_number(&l, t).unwrap(), rep_number_fibered(&l, t).unwrap());
        }
    }
}
