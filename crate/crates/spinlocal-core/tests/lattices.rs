use num::{One, Zero};
use proptest::prelude::*;
use spinlocal_core::arith::{rat, rint, Rat};
use spinlocal_core::lattices::{between, subspaces, Form, IVec, Lattice};

fn rv(v: &[i64]) -> Vec<Rat> {
    v.iter().map(|&x| rint(x)).collect()
}

/// Independent membership: solve over ℚ and check every coordinate is q-integral.
fn member_oracle(basis: &[Vec<Rat>], v: &[Rat], q: u64) -> bool {
    let d = basis.len();
    let m: Vec<Vec<Rat>> = (0..d).map(|i| (0..d).map(|j| basis[j][i].clone()).collect()).collect();
    let inv = spinlocal_core::spaces::inverse(&m).unwrap();
    let c = spinlocal_core::spaces::mat_vec(&inv, v);
    c.iter().all(|x| x.is_zero() || spinlocal_core::val_q(x, q) >= 0)
}

#[test]
fn standard_lattice_roundtrip() {
    let l = Lattice::from_rational_gens(3, 4, &[rv(&[1, 0, 0, 0]), rv(&[0, 1, 0, 0]), rv(&[0, 0, 1, 0]), rv(&[0, 0, 0, 1])]).unwrap();
    assert_eq!(l, Lattice::standard(3, 4));
    assert_eq!(l.std_dual(), l);
}

#[test]
fn canonical_form_ignores_generator_order_and_units() {
    let g1 = vec![rv(&[3, 0, 0]), rv(&[1, 9, 0]), rv(&[2, 4, 27])];
    let g2 = vec![rv(&[2, 4, 27]), rv(&[2, 18, 0]), rv(&[6, 0, 0]), rv(&[6, 13, 27])];
    let a = Lattice::from_rational_gens(3, 3, &g1).unwrap();
    let b = Lattice::from_rational_gens(3, 3, &g2).unwrap();
    assert_eq!(a, b);
    // unit denominators are harmless
    let g3 = vec![vec![rat(3, 2), rint(0), rint(0)], vec![rat(1, 5), rat(9, 5), rint(0)], rv(&[2, 4, 27])];
    assert_eq!(Lattice::from_rational_gens(3, 3, &g3).unwrap(), a);
}

#[test]
fn shift_records_content() {
    let a = Lattice::from_rational_gens(5, 2, &[vec![rat(1, 25), rint(0)], vec![rint(0), rat(1, 5)]]).unwrap();
    assert_eq!(a.shift, -2);
    assert_eq!(&a.e[..2], &[0, 1]);
    assert_eq!(a.covol(), -3);
}

#[test]
fn rank_deficient_rejected() {
    assert!(Lattice::from_rational_gens(3, 2, &[rv(&[1, 2]), rv(&[2, 4])]).is_err());
}

#[test]
fn subspace_counts_are_gaussian_binomials() {
    assert_eq!(subspaces(4, 1, 3).len(), 40);
    assert_eq!(subspaces(4, 2, 3).len(), 130);
    assert_eq!(subspaces(4, 2, 5).len(), 806);
    assert_eq!(subspaces(3, 0, 7).len(), 1);
    assert_eq!(subspaces(5, 2, 3).len(), 1210);
}

#[test]
fn between_counts_and_containment() {
    let b = Lattice::standard(3, 4);
    let a = b.scale(1);
    let mids = between(&a, &b, 2);
    assert_eq!(mids.len(), 130);
    for m in &mids {
        assert!(b.contains_lattice(m) && m.contains_lattice(&a));
        assert_eq!(Lattice::colength(m, &b), 2);
    }
    let mut uniq = mids.clone();
    uniq.sort();
    uniq.dedup();
    assert_eq!(uniq.len(), 130);
}

#[test]
fn symplectic_dual_of_standard_is_standard() {
    let f = Form::from_ints(3, &[&[0, 0, 1, 0], &[0, 0, 0, 1], &[-1, 0, 0, 0], &[0, -1, 0, 0]]).unwrap();
    let l = Lattice::standard(3, 4);
    assert_eq!(f.dual(&l), l);
    let pa = Lattice::from_rational_gens(3, 4, &[rv(&[1, 0, 0, 0]), rv(&[0, 1, 0, 0]), rv(&[0, 0, 3, 0]), rv(&[0, 0, 0, 1])]).unwrap();
    let dual = f.dual(&pa);
    assert_eq!(Lattice::colength(&pa, &dual), 2);
    assert!(dual.contains_rat(&[rat(1, 3), rint(0), rint(0), rint(0)]));
}

fn arb_basis(d: usize) -> impl Strategy<Value = Vec<Vec<i64>>> {
    prop::collection::vec(prop::collection::vec(-30i64..30, d), d..d + 3)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn membership_matches_rational_solve(gens in arb_basis(3), probe in prop::collection::vec(-40i64..40, 3), den in 0u32..3) {
        let q = 3u64;
        let gr: Vec<Vec<Rat>> = gens.iter().map(|g| rv(g)).collect();
        let Ok(l) = Lattice::from_rational_gens(q, 3, &gr) else { return Ok(()) };
        let basis = l.basis_rat();
        let scale = Rat::new(1.into(), 3i64.pow(den).into());
        let v: Vec<Rat> = probe.iter().map(|&x| rint(x) * &scale).collect();
        prop_assert_eq!(l.contains_rat(&v), member_oracle(&basis, &v, q));
        for g in &gr {
            prop_assert!(l.contains_rat(g));
        }
    }

    #[test]
    fn dual_is_involutive_and_pairs_integrally(gens in arb_basis(4)) {
        let q = 5u64;
        let gr: Vec<Vec<Rat>> = gens.iter().map(|g| rv(g)).collect();
        let Ok(l) = Lattice::from_rational_gens(q, 4, &gr) else { return Ok(()) };
        let dl = l.std_dual();
        prop_assert_eq!(dl.std_dual(), l);
        prop_assert_eq!(dl.covol(), -l.covol());
        for x in l.basis_rat() {
            for y in dl.basis_rat() {
                let s: Rat = x.iter().zip(&y).map(|(a, b)| a * b).fold(Rat::zero(), |a, b| a + b);
                prop_assert!(s.is_zero() || spinlocal_core::val_q(&s, q) >= 0);
            }
        }
    }

    #[test]
    fn sum_and_intersection_are_lattice_operations(g1 in arb_basis(3), g2 in arb_basis(3)) {
        let q = 3u64;
        let a = Lattice::from_rational_gens(q, 3, &g1.iter().map(|g| rv(g)).collect::<Vec<_>>());
        let b = Lattice::from_rational_gens(q, 3, &g2.iter().map(|g| rv(g)).collect::<Vec<_>>());
        let (Ok(a), Ok(b)) = (a, b) else { return Ok(()) };
        let s = a.sum(&b);
        let i = a.intersect(&b);
        prop_assert!(s.contains_lattice(&a) && s.contains_lattice(&b));
        prop_assert!(a.contains_lattice(&i) && b.contains_lattice(&i));
        // covolume identity [A+B : A] = [B : A∩B]
        prop_assert_eq!(Lattice::colength(&a, &s), Lattice::colength(&i, &b));
        let mut all = a.basis_rat();
        all.extend(b.basis_rat());
        prop_assert_eq!(Lattice::from_rational_gens(q, 3, &all).unwrap(), s);
    }

    #[test]
    fn scaled_and_rational_paths_agree(gens in arb_basis(4)) {
        let q = 7u64;
        let gr: Vec<Vec<Rat>> = gens.iter().map(|g| rv(g)).collect();
        let Ok(l) = Lattice::from_rational_gens(q, 4, &gr) else { return Ok(()) };
        let iv: Vec<IVec> = gens.iter().map(|g| { let mut w = [0i128; 5]; for i in 0..4 { w[i] = g[i] as i128; } w }).collect();
        let fast = Lattice::from_scaled(q, 4, 0, &iv, l.floor());
        prop_assert_eq!(fast, l);
        prop_assert!(l.contains_rat(&vec![Rat::one(); 4].iter().map(|x| x * rint(7i64.pow(l.exponent()))).collect::<Vec<_>>()));
    }
}

mod meets {
    use super::rv;
    use spinlocal_core::arith::{rat, Rat};
    use spinlocal_core::lattices::{coset_invariant, is_integral, orbit_meets, self_dual_neighbors, Form, Lattice};
    use std::collections::BTreeSet;

    fn split(q: u64) -> (Form, Form, Form) {
        let v = Form::from_ints(
            q,
            &[&[1, 0, 0, 0, 0], &[0, 0, 1, 0, 0], &[0, 1, 0, 0, 0], &[0, 0, 0, 0, 1], &[0, 0, 0, 1, 0]],
        )
        .unwrap();
        let v0 = Form::from_ints(q, &[&[1, 0, 0], &[0, 0, 1], &[0, 1, 0]]).unwrap();
        let v1 = Form::from_ints(q, &[&[0, 1], &[1, 0]]).unwrap();
        (v, v0, v1)
    }

    /// Every L₁ with qℤ² ⊆ L₁ ⊆ q⁻¹ℤ².
    fn window(q: u64) -> BTreeSet<Lattice> {
        let qi = q as i64;
        let mut out = BTreeSet::new();
        for a in -1..=1i64 {
            for b in -1..=1i64 {
                for k in 0..qi * qi {
                    let p = |e: i64| -> Rat { if e >= 0 { rat(qi.pow(e as u32), 1) } else { rat(1, qi) } };
                    let g1: Vec<Rat> = vec![p(a), rat(k, qi)];
                    let g2: Vec<Rat> = vec![rat(0, 1), p(b)];
                    let l = Lattice::from_rational_gens(q, 2, &[g1, g2, rv(&[qi, 0]), rv(&[0, qi])]).unwrap();
                    let top = Lattice::standard(q, 2).scale(-1);
                    if top.contains_lattice(&l) {
                        out.insert(l);
                    }
                }
            }
        }
        out
    }

    #[test]
    fn neighbors_are_self_dual_at_index_q() {
        let (v, _, _) = split(3);
        let l = Lattice::standard(3, 5);
        let ns = self_dual_neighbors(&v, &l);
        // one neighbor per isotropic line of a split 5-dimensional space over F_3
        assert_eq!(ns.len(), 40);
        for n in &ns {
            assert_eq!(v.dual(n), *n);
            assert_eq!(Lattice::colength(&l.intersect(n), &l), 1);
        }
    }

    #[test]
    fn integral_gram_is_invariant() {
        let (_, v0, v1) = split(3);
        assert!(coset_invariant(&v0, &v1, &Lattice::standard(3, 2)).unwrap());
        let l = Lattice::from_rational_gens(3, 2, &[vec![rat(1, 3), rat(0, 1)], rv(&[0, 3])]).unwrap();
        assert!(coset_invariant(&v0, &v1, &l).unwrap());
    }

    #[test]
    fn valuation_minus_one_pairing_is_not_invariant() {
        let (_, v0, v1) = split(3);
        let l = Lattice::from_rational_gens(3, 2, &[vec![rat(1, 3), rat(0, 1)], rv(&[0, 1])]).unwrap();
        assert!(!is_integral(&v1, &l));
        assert!(!coset_invariant(&v0, &v1, &l).unwrap());
    }

    #[test]
    fn rejects_bad_dimensions() {
        let (_, v0, v1) = split(3);
        assert!(coset_invariant(&v0, &v1, &Lattice::standard(3, 3)).is_err());
        assert!(coset_invariant(&v1, &v0, &Lattice::standard(3, 3)).is_err());
    }

    #[test]
    fn window_agrees_with_orbit_enumeration() {
        let (v, v0, v1) = split(3);
        let reached = orbit_meets(&v, 2, 2).unwrap();
        let win = window(3);
        let hits = win.iter().filter(|l| reached.contains(*l)).count();
        assert!(hits > 0 && hits < win.len());
        for l in &win {
            assert_eq!(coset_invariant(&v0, &v1, l).unwrap(), reached.contains(l), "{}", l.key());
        }
    }
}
