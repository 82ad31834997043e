use rand::{rngs::StdRng, Rng, SeedableRng};
use spinlocal_core::arith::rint;
use spinlocal_core::spaces::split_quadratic;
use spinlocal_core::testfns::*;
use spinlocal_core::weil::PointFn;

#[test]
fn family_supports_and_relation() {
    let mut rng = StdRng::seed_from_u64(41);
    for q in [3u64, 5, 7] {
        for c in family_scan(q, 3000, &mut rng) {
            assert!(c.pass, "{c:?}");
        }
    }
}

#[test]
fn family_invariance() {
    let mut rng = StdRng::seed_from_u64(43);
    for q in [3u64, 5] {
        let one_minus_q = 1 - q as i64;
        for f in build_phi_family(q) {
            let allowed: Vec<i64> = if f.tag == FamilyTag::Tot { vec![0, 1, one_minus_q] } else { vec![0, 1] };
            for c in invariance_checks(&f, f.tag.name(), &allowed, 300, &mut rng) {
                assert!(c.pass, "{c:?}");
            }
        }
        for v in [PrimeVariant::Li, PrimeVariant::L0] {
            let f = PhiPrime::new(q, v);
            for c in invariance_checks(&f, f.tag(), &[0, 1, q as i64 + 1], 300, &mut rng) {
                assert!(c.pass, "{c:?}");
            }
        }
    }
}

#[test]
fn family_values_on_explicit_points() {
    let q = 3u64;
    let fam = build_phi_family(q);
    // keys are 3·x, 3·y; basis v0, v1, v2, v1*, v2*
    // x = v1 + v2*, y = v2: x·y = 1, x·x = 0, y·y = 0
    let x = [0, 3, 0, 0, 3];
    let y0 = [0, 0, 3, 0, 0];
    let pt: Vec<i64> = x.iter().chain(&y0).copied().collect();
    assert_eq!(fam[0].eval(&pt), rint(1));
    assert_eq!(fam[3].eval(&pt), rint(-2));
    // x = qv₂*, y = q⁻¹v₂: x·y = 1 with x ∈ qL
    let x1 = [0, 0, 0, 0, 9];
    let y1 = [0, 0, 1, 0, 0];
    let pt: Vec<i64> = x1.iter().chain(&y1).copied().collect();
    assert_eq!(fam[1].eval(&pt), rint(1));
    assert_eq!(fam[2].eval(&pt), rint(0));
    // x = v1 + 3v2*, y = v2/3: x ∈ L − qL, y ∈ q⁻¹L − L, x·y = 1
    let xs = [0, 3, 0, 0, 9];
    let ys = [0, 0, 1, 0, 0];
    let pt: Vec<i64> = xs.iter().chain(&ys).copied().collect();
    assert_eq!(fam[2].eval(&pt), rint(1));
    assert_eq!(fam[3].eval(&pt), rint(1));
    // x·x a unit leaves X
    let bad: Vec<i64> = [3, 3, 0, 0, 3].iter().chain(&y0).copied().collect();
    assert!(fam.iter().all(|f| f.eval(&bad) == rint(0)));
}

#[test]
fn prime_function_values() {
    let l = 3u64;
    let f = PhiPrime::new(l, PrimeVariant::Li);
    // x = v0 (x·x = 1, a square), y = v1 + v1* (y·y = 2, a non-square mod 3)
    let x = [3, 0, 0, 0, 0];
    let y = [0, 3, 0, 3, 0];
    let pt: Vec<i64> = x.iter().chain(&y).copied().collect();
    assert_eq!(f.eval(&pt), rint(4));
    // y = v1/3 + 2v1*: y·y = 4/3 is not a unit
    let y2 = [0, 1, 0, 6, 0];
    let pt: Vec<i64> = x.iter().chain(&y2).copied().collect();
    assert_eq!(f.eval(&pt), rint(0));
    // y = v1/3 + 3v1* + v2 + v2*: y·y = 4, a square
    let y3 = [0, 1, 3, 9, 3];
    let pt: Vec<i64> = x.iter().chain(&y3).copied().collect();
    assert_eq!(f.eval(&pt), rint(0));
    // y = v1/3 + 3v1*: y·y = 2, a non-square, and y ∈ 3⁻¹L − L
    let y4 = [0, 1, 0, 9, 0];
    let pt: Vec<i64> = x.iter().chain(&y4).copied().collect();
    assert_eq!(f.eval(&pt), rint(1));
    let g = PhiPrime::new(l, PrimeVariant::L0);
    // x = v1 + v1* (x·x = 2 non-square), y = 3v2 + v2* (y·y = 6, v = 1), x·y = 0
    let x = [0, 3, 0, 3, 0];
    let y = [0, 0, 9, 0, 3];
    let pt: Vec<i64> = x.iter().chain(&y).copied().collect();
    assert_eq!(g.eval(&pt), rint(1));
}

#[test]
fn stabilizer_preserves_form_and_lattice() {
    let mut rng = StdRng::seed_from_u64(47);
    let space = split_quadratic(2);
    for q in [3u64, 5, 7] {
        for _ in 0..20 {
            let g = random_stabilizer(&space, q, &mut rng);
            let gt = spinlocal_core::spaces::transpose(&g);
            let gg = spinlocal_core::spaces::mat_mul(&spinlocal_core::spaces::mat_mul(&gt, &space.gram), &g);
            assert_eq!(gg, space.gram);
            let gi = spinlocal_core::spaces::inverse(&g).unwrap();
            for m in [&g, &gi] {
                assert!(m.iter().flatten().all(|x| x == &rint(0) || spinlocal_core::val_q(x, q) >= 0));
            }
        }
        let pt: Vec<i64> = (0..10).map(|_| rng.gen_range(0..27)).collect();
        assert_eq!(apply_mod(&spinlocal_core::spaces::identity(5), &pt, 3, 3), pt);
    }
}

#[test]
fn t_circ_lattice_chain() {
    for l in [3u64, 5] {
        for c in t_circ_checks(l).unwrap() {
            assert!(c.pass, "{c:?}");
        }
    }
}

#[test]
fn t_circ_unit_norm_criterion_matches_lifts() {
    let t = TCirc::new(3);
    spinlocal_core::weil::for_each_offset(4, 9, |y| {
        assert_eq!(t.coset_has_unit_norm(y), t.coset_has_unit_norm_brute(y), "{y:?}");
    });
}
